use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::ProtocolConfig;
use crate::error::{Error, Result};
use crate::qlin::Outcome;

/// One run of a steering or Bell test.
///
/// In steering runs `setting_a` is empty and `declared_a` is Alice's
/// announced result; in Bell runs it holds Alice's setting and measured
/// outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunRecord {
    pub run_index: u64,
    pub setting_a: Option<usize>,
    pub setting_b: usize,
    pub declared_a: Outcome,
    pub measured_b: Outcome,
    pub demon_active: bool,
}

impl RunRecord {
    pub fn product(&self) -> f64 {
        (self.declared_a * self.measured_b).as_f64()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub records: Vec<RunRecord>,
    pub config: ProtocolConfig,
    pub seed: u64,
}

impl Transcript {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn active_runs(&self) -> usize {
        self.records.iter().filter(|r| r.demon_active).count()
    }

    /// Flat CSV with columns
    /// `run_index,setting_a,setting_b,declared_a,measured_b,demon_active`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for r in &self.records {
            w.serialize(r).map_err(csv_error)?;
        }
        if self.records.is_empty() {
            w.write_record(CSV_HEADER).map_err(csv_error)?;
        }
        w.flush().map_err(|e| Error::io("<transcript>", e))?;
        Ok(())
    }

    /// Reads records written by [`Transcript::write_csv`].
    pub fn read_records<R: Read>(reader: R) -> Result<Vec<RunRecord>> {
        csv::Reader::from_reader(reader)
            .deserialize()
            .collect::<std::result::Result<Vec<RunRecord>, _>>()
            .map_err(csv_error)
    }
}

const CSV_HEADER: [&str; 6] = [
    "run_index",
    "setting_a",
    "setting_b",
    "declared_a",
    "measured_b",
    "demon_active",
];

fn csv_error(e: csv::Error) -> Error {
    Error::Parse {
        path: "<transcript csv>".into(),
        message: e.to_string(),
    }
}
