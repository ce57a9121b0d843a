use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qlin::Outcome;

/// What a table row is keyed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableKey {
    /// The local setting index.
    Setting(usize),
    /// Both wings' setting indices `(alice, bob)`.
    Pair(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub key: TableKey,
    /// Eigenvalue of the eigenstate the qubit is rotated into.
    pub target_sign: Outcome,
    /// Result Alice announces (steering only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declaration: Option<Outcome>,
}

/// Pre-agreed instructions telling a demon how to treat each setting.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheatTable {
    pub entries: Vec<TableEntry>,
}

impl CheatTable {
    /// Steering table with `sign = declaration` for every setting; every
    /// assisted run then yields product +1.
    pub fn correlated(signs: &[Outcome]) -> Self {
        CheatTable {
            entries: signs
                .iter()
                .enumerate()
                .map(|(k, &s)| TableEntry {
                    key: TableKey::Setting(k),
                    target_sign: s,
                    declaration: Some(s),
                })
                .collect(),
        }
    }

    /// Steering table from explicit `(target_sign, declaration)` pairs.
    pub fn steering(rows: &[(Outcome, Outcome)]) -> Self {
        CheatTable {
            entries: rows
                .iter()
                .enumerate()
                .map(|(k, &(sign, decl))| TableEntry {
                    key: TableKey::Setting(k),
                    target_sign: sign,
                    declaration: Some(decl),
                })
                .collect(),
        }
    }

    /// Bell table keyed on the local setting.
    pub fn local(signs: [Outcome; 2]) -> Self {
        CheatTable {
            entries: signs
                .iter()
                .enumerate()
                .map(|(k, &s)| TableEntry {
                    key: TableKey::Setting(k),
                    target_sign: s,
                    declaration: None,
                })
                .collect(),
        }
    }

    /// Bell table keyed on both settings; `signs[x][y]`.
    pub fn pairs(signs: [[Outcome; 2]; 2]) -> Self {
        let entries = (0..2)
            .flat_map(|x| (0..2).map(move |y| (x, y)))
            .map(|(x, y)| TableEntry {
                key: TableKey::Pair(x, y),
                target_sign: signs[x][y],
                declaration: None,
            })
            .collect();
        CheatTable { entries }
    }

    pub fn get(&self, key: TableKey) -> Option<&TableEntry> {
        self.entries.iter().find(|e| e.key == key)
    }

    pub(crate) fn lookup(&self, key: TableKey) -> Result<&TableEntry> {
        self.get(key)
            .ok_or_else(|| Error::invalid(format!("cheat table has no entry for {key:?}")))
    }

    /// Checks the table covers settings `0..m` with declarations.
    pub fn check_steering(&self, m: usize) -> Result<()> {
        for k in 0..m {
            if self.lookup(TableKey::Setting(k))?.declaration.is_none() {
                return Err(Error::invalid(format!("steering table entry {k} lacks a declaration")));
            }
        }
        Ok(())
    }

    pub fn check_local(&self) -> Result<()> {
        for k in 0..2 {
            self.lookup(TableKey::Setting(k))?;
        }
        Ok(())
    }

    pub fn check_pairs(&self) -> Result<()> {
        for x in 0..2 {
            for y in 0..2 {
                self.lookup(TableKey::Pair(x, y))?;
            }
        }
        Ok(())
    }
}
