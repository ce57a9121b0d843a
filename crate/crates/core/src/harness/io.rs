//! File helpers for the orchestration layer.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::HeatRow;
use crate::error::{Error, Result};
use crate::qlin::MeasurementSetting;

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// Pretty JSON with a trailing newline.
pub fn to_json_bytes<T: Serialize + ?Sized>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| Error::Parse {
        path: "<json>".into(),
        message: e.to_string(),
    })?;
    bytes.push(b'\n');
    Ok(bytes)
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    write_bytes(path, &to_json_bytes(value)?)
}

/// CSV of serializable rows, header included.
pub fn to_csv_bytes<T: Serialize>(rows: &[T]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(|e| Error::Parse {
            path: "<csv>".into(),
            message: e.to_string(),
        })?;
    }
    w.into_inner().map_err(|e| Error::Parse {
        path: "<csv>".into(),
        message: e.to_string(),
    })
}

pub fn read_csv<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>> {
    let parse_err = |e: csv::Error| Error::Parse {
        path: path.into(),
        message: e.to_string(),
    };
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    csv::Reader::from_reader(file)
        .deserialize()
        .collect::<std::result::Result<Vec<T>, _>>()
        .map_err(parse_err)
}

/// Heat CSV rows; `demon_joules` may be absent from hand-made files.
pub fn read_heat_csv(path: &Path) -> Result<Vec<HeatRow>> {
    read_csv(path)
}

/// Settings file for the `bounds` command: either x–z plane angles in
/// degrees or explicit Bloch vectors.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SettingsFile {
    #[serde(default)]
    pub angles_deg: Option<Vec<f64>>,
    #[serde(default)]
    pub bloch: Option<Vec<[f64; 3]>>,
}

impl SettingsFile {
    pub fn load(path: &Path) -> Result<Vec<MeasurementSetting>> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let file: SettingsFile = toml::from_str(&text).map_err(|e| Error::Parse {
            path: path.into(),
            message: e.to_string(),
        })?;
        file.settings().map_err(|e| Error::Parse {
            path: PathBuf::from(path),
            message: e.to_string(),
        })
    }

    pub fn settings(&self) -> Result<Vec<MeasurementSetting>> {
        match (&self.angles_deg, &self.bloch) {
            (Some(angles), None) => Ok(angles
                .iter()
                .enumerate()
                .map(|(k, d)| MeasurementSetting::xz(d.to_radians(), k))
                .collect()),
            (None, Some(vectors)) => vectors
                .iter()
                .enumerate()
                .map(|(k, b)| MeasurementSetting::new(*b, k))
                .collect(),
            _ => Err(Error::invalid("give exactly one of `angles_deg` or `bloch`")),
        }
    }
}
