//! JSON documents for PMFs and mass functions.
//!
//! A PMF document lists permutation events as label arrays in tuple order:
//!
//! ```json
//! { "elements": ["R", "B", "G"],
//!   "pmf": [ { "event": ["R"], "mass": 0.0085 }, { "event": ["B", "R"], "mass": 0.0342 } ] }
//! ```
//!
//! A mass-function document has the same shape with an `"m"` list of
//! `{ "set": [...], "mass": ... }` entries; set labels may come in any order.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mass::{MassFunction, PermutationMassFunction};
use crate::pes::{Frame, PermutationEvent, Subset};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PmfEntry {
    pub event: Vec<String>,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RpsDocument {
    pub elements: Vec<String>,
    pub pmf: Vec<PmfEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetEntry {
    pub set: Vec<String>,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MassDocument {
    pub elements: Vec<String>,
    pub m: Vec<SetEntry>,
}

fn check_mass(mass: f64, labels: &[String]) -> Result<()> {
    if mass.is_finite() && mass >= 0.0 {
        Ok(())
    } else {
        Err(Error::Load(format!(
            "mass {mass} on {labels:?} is not a finite non-negative number"
        )))
    }
}

fn frame_of(elements: &[String]) -> Result<Frame> {
    Frame::new(elements.iter().cloned()).map_err(|e| Error::Load(e.to_string()))
}

impl RpsDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Load(e.to_string()))
    }

    pub fn to_json_pretty(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Resolves labels and validates the PMF.
    pub fn to_pmf(&self) -> Result<PermutationMassFunction> {
        let frame = frame_of(&self.elements)?;
        let mut masses = BTreeMap::new();
        for entry in &self.pmf {
            check_mass(entry.mass, &entry.event)?;
            let event = PermutationEvent::from_labels(&entry.event, &frame)?;
            if masses.insert(event, entry.mass).is_some() {
                return Err(Error::Load(format!("duplicate event {:?}", entry.event)));
            }
        }
        PermutationMassFunction::new(frame, masses)
    }

    /// Entries in canonical event order, zero masses omitted.
    pub fn from_pmf(pmf: &PermutationMassFunction) -> Self {
        let frame = pmf.frame();
        RpsDocument {
            elements: frame.labels().to_vec(),
            pmf: pmf
                .focal()
                .map(|(e, mass)| PmfEntry {
                    event: e.labels(frame).into_iter().map(str::to_owned).collect(),
                    mass,
                })
                .collect(),
        }
    }
}

impl MassDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Load(e.to_string()))
    }

    pub fn to_json_pretty(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn to_mass_function(&self) -> Result<MassFunction> {
        let frame = frame_of(&self.elements)?;
        let mut masses = BTreeMap::new();
        for entry in &self.m {
            check_mass(entry.mass, &entry.set)?;
            let set = Subset::from_labels(&entry.set, &frame)?;
            if masses.insert(set, entry.mass).is_some() {
                return Err(Error::Load(format!("duplicate set {:?}", entry.set)));
            }
        }
        MassFunction::new(frame, masses)
    }

    pub fn from_mass_function(m: &MassFunction) -> Self {
        let frame = m.frame();
        MassDocument {
            elements: frame.labels().to_vec(),
            m: m.focal()
                .map(|(s, mass)| SetEntry {
                    set: s.labels(frame).into_iter().map(str::to_owned).collect(),
                    mass,
                })
                .collect(),
        }
    }
}
