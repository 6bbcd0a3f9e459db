//! The RPS data model.
//!
//! [`PermutationMassFunction`] assigns mass to ordered events,
//! [`MassFunction`] to unordered subsets and [`ProbabilityDistribution`] to
//! single elements. The two projections between them are
//! [`PermutationMassFunction::degenerate_to_mass_function`] (forget order)
//! and [`PermutationMassFunction::restrict_to_singletons`].
//!
//! Absent events and zero-mass events are treated identically everywhere.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::pes::{Frame, PermutationEvent, Subset};

/// Allowed deviation of a total mass from 1.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// Largest mass tolerated on the empty event, or on a non-singleton event
/// when restricting to singletons.
pub const ZERO_TOLERANCE: f64 = 1e-12;

/// One broken invariant.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NegativeMass { event: String, mass: f64 },
    NonFiniteMass { event: String },
    InvalidEvent { event: String },
    EmptyEventMass { mass: f64 },
    SumNotOne { sum: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NegativeMass { event, mass } => {
                write!(f, "negative mass {mass} on {event}")
            }
            Violation::NonFiniteMass { event } => write!(f, "non-finite mass on {event}"),
            Violation::InvalidEvent { event } => {
                write!(f, "event {event} is not valid for the frame")
            }
            Violation::EmptyEventMass { mass } => {
                write!(f, "empty event has nonzero mass {mass}")
            }
            Violation::SumNotOne { sum } => write!(f, "sum = {sum} ≠ 1"),
        }
    }
}

/// Every violated invariant of a mass assignment; empty means valid.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn into_result(self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::Validation(self))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("valid");
        }
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            write!(f, "  - {v}")?;
        }
        Ok(())
    }
}

// Shared checks for any keyed mass table. `describe` renders a key,
// `is_empty`/`is_valid` classify it.
fn validate_masses<'a, K: 'a>(
    entries: impl Iterator<Item = (&'a K, f64)>,
    describe: impl Fn(&K) -> String,
    is_empty: impl Fn(&K) -> bool,
    is_valid: impl Fn(&K) -> bool,
) -> ValidationReport {
    let mut violations = Vec::new();
    let mut sum = 0.0;
    let mut all_finite = true;
    for (key, mass) in entries {
        if !mass.is_finite() {
            violations.push(Violation::NonFiniteMass { event: describe(key) });
            all_finite = false;
            continue;
        }
        if mass < 0.0 {
            violations.push(Violation::NegativeMass {
                event: describe(key),
                mass,
            });
        }
        if !is_valid(key) {
            violations.push(Violation::InvalidEvent { event: describe(key) });
        }
        if is_empty(key) && mass.abs() > ZERO_TOLERANCE {
            violations.push(Violation::EmptyEventMass { mass });
        }
        sum += mass;
    }
    if all_finite && (sum - 1.0).abs() > SUM_TOLERANCE {
        violations.push(Violation::SumNotOne { sum });
    }
    ValidationReport { violations }
}

/// A permutation mass function over the event space of a frame.
#[derive(Debug, Clone, PartialEq)]
pub struct PermutationMassFunction {
    frame: Frame,
    masses: BTreeMap<PermutationEvent, f64>,
}

impl PermutationMassFunction {
    /// Builds and validates; fails with the full [`ValidationReport`].
    pub fn new(frame: Frame, masses: BTreeMap<PermutationEvent, f64>) -> Result<Self> {
        let pmf = PermutationMassFunction { frame, masses };
        pmf.validate().into_result()?;
        Ok(pmf)
    }

    /// Builds without validation, e.g. to inspect a broken input with
    /// [`validate`](Self::validate).
    pub fn new_unchecked(frame: Frame, masses: BTreeMap<PermutationEvent, f64>) -> Self {
        PermutationMassFunction { frame, masses }
    }

    /// Builds from label tuples, validating the result.
    pub fn from_labeled<S: AsRef<str>>(frame: Frame, entries: &[(&[S], f64)]) -> Result<Self> {
        let mut masses = BTreeMap::new();
        for (labels, mass) in entries {
            let event = PermutationEvent::from_labels(labels, &frame)?;
            if masses.insert(event, *mass).is_some() {
                return Err(Error::Load("duplicate event".into()));
            }
        }
        PermutationMassFunction::new(frame, masses)
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn masses(&self) -> &BTreeMap<PermutationEvent, f64> {
        &self.masses
    }

    /// Mass of `event`; zero when absent.
    pub fn mass(&self, event: &PermutationEvent) -> f64 {
        self.masses.get(event).copied().unwrap_or(0.0)
    }

    /// Events with strictly positive mass, in canonical order.
    pub fn focal(&self) -> impl Iterator<Item = (&PermutationEvent, f64)> {
        self.masses.iter().map(|(e, &m)| (e, m)).filter(|&(_, m)| m > 0.0)
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.values().sum()
    }

    pub fn validate(&self) -> ValidationReport {
        validate_masses(
            self.masses.iter().map(|(e, &m)| (e, m)),
            |e| e.display(&self.frame).to_string(),
            PermutationEvent::is_empty,
            |e| e.is_valid_for(&self.frame),
        )
    }

    /// Rescales all masses to sum to exactly 1 (up to rounding) and drops
    /// the empty event. Explicit opt-in for inputs printed at low precision.
    pub fn renormalized(&self) -> Result<Self> {
        let masses: BTreeMap<_, _> = self
            .masses
            .iter()
            .filter(|(e, _)| !e.is_empty())
            .map(|(e, &m)| (e.clone(), m))
            .collect();
        let total: f64 = masses.values().sum();
        if !(total.is_finite() && total > 0.0) {
            return Err(Error::Precondition(format!("cannot renormalize total mass {total}")));
        }
        let masses = masses.into_iter().map(|(e, m)| (e, m / total)).collect();
        PermutationMassFunction::new(self.frame.clone(), masses)
    }

    /// Forgets element order: `m(S) = Σ { M(A) : A as a set = S }`.
    pub fn degenerate_to_mass_function(&self) -> MassFunction {
        let mut masses: BTreeMap<Subset, f64> = BTreeMap::new();
        for (event, &mass) in &self.masses {
            *masses.entry(event.forget_order()).or_insert(0.0) += mass;
        }
        MassFunction {
            frame: self.frame.clone(),
            masses,
        }
    }

    /// Reads the PMF as a probability distribution over single elements.
    ///
    /// Fails if more than [`ZERO_TOLERANCE`] mass sits on any event whose
    /// cardinality is not 1.
    pub fn restrict_to_singletons(&self) -> Result<ProbabilityDistribution> {
        let mut probs = vec![0.0; self.frame.len()];
        for (event, &mass) in &self.masses {
            match event.indices() {
                [k] if *k < probs.len() => probs[*k] += mass,
                _ if mass.abs() <= ZERO_TOLERANCE => {}
                _ => {
                    return Err(Error::Precondition(format!(
                        "event {} has cardinality {} and mass {mass}; only singleton events may carry mass",
                        event.display(&self.frame),
                        event.cardinality()
                    )))
                }
            }
        }
        ProbabilityDistribution::new(self.frame.clone(), probs)
    }
}

/// A classical mass function over the power set of a frame.
#[derive(Debug, Clone, PartialEq)]
pub struct MassFunction {
    frame: Frame,
    masses: BTreeMap<Subset, f64>,
}

impl MassFunction {
    pub fn new(frame: Frame, masses: BTreeMap<Subset, f64>) -> Result<Self> {
        let m = MassFunction { frame, masses };
        m.validate().into_result()?;
        Ok(m)
    }

    pub fn new_unchecked(frame: Frame, masses: BTreeMap<Subset, f64>) -> Self {
        MassFunction { frame, masses }
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn masses(&self) -> &BTreeMap<Subset, f64> {
        &self.masses
    }

    pub fn mass(&self, subset: &Subset) -> f64 {
        self.masses.get(subset).copied().unwrap_or(0.0)
    }

    pub fn focal(&self) -> impl Iterator<Item = (&Subset, f64)> {
        self.masses.iter().map(|(s, &m)| (s, m)).filter(|&(_, m)| m > 0.0)
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.values().sum()
    }

    pub fn validate(&self) -> ValidationReport {
        validate_masses(
            self.masses.iter().map(|(s, &m)| (s, m)),
            |s| s.display(&self.frame).to_string(),
            Subset::is_empty,
            |s| s.is_valid_for(&self.frame),
        )
    }
}

/// A probability distribution over the elements of a frame.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityDistribution {
    frame: Frame,
    probs: Vec<f64>,
}

impl ProbabilityDistribution {
    pub fn new(frame: Frame, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != frame.len() {
            return Err(Error::domain(format!(
                "{} probabilities for a frame of {} elements",
                probs.len(),
                frame.len()
            )));
        }
        let keys: Vec<usize> = (0..probs.len()).collect();
        let report = validate_masses(
            keys.iter().zip(probs.iter().copied()),
            |&k| frame.label(k).unwrap_or("?").to_string(),
            |_| false,
            |_| true,
        );
        report.into_result()?;
        Ok(ProbabilityDistribution { frame, probs })
    }

    /// `1/n` on every element.
    pub fn uniform(frame: Frame) -> Self {
        let n = frame.len();
        ProbabilityDistribution {
            frame,
            probs: vec![1.0 / n as f64; n],
        }
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }
}
