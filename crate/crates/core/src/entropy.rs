//! Shannon, Deng and RPS entropies and their closed-form maxima.
//!
//! Entropy values are sums of per-focal-element terms `−m·log(m / w)` where
//! the weight `w` is 1 (Shannon), `2^|A| − 1` (Deng) or `F(|A|) − 1` (RPS).
//! Zero-mass entries contribute nothing (`0·log 0 = 0`).
//!
//! The maxima are logarithms of exact integer normalizers from
//! [`combinatorics`](crate::combinatorics); the only floating-point step is
//! the final log. The maximizing distributions assign each focal element
//! its weight divided by that normalizer.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::combinatorics::{self, BigCount};
use crate::error::{Error, Result};
use crate::mass::{MassFunction, PermutationMassFunction, ProbabilityDistribution};
use crate::pes::{self, Frame};

/// Default cap on `n` for [`max_deng_mass_function`] (2^n − 1 focal sets).
pub const DEFAULT_DENG_CAP: usize = 20;

/// Default cap on `n` for [`max_rps_pmf`] (about e·n! events).
pub const DEFAULT_PMF_CAP: usize = 8;

/// Logarithm base, always finite and greater than 1.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogBase(f64);

impl LogBase {
    pub const BINARY: LogBase = LogBase(2.0);
    pub const NATURAL: LogBase = LogBase(std::f64::consts::E);

    pub fn new(base: f64) -> Result<Self> {
        if base.is_finite() && base > 1.0 {
            Ok(LogBase(base))
        } else {
            Err(Error::domain(format!(
                "log base must be a finite number > 1, got {base}"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn log(self, x: f64) -> f64 {
        if self.0 == 2.0 {
            x.log2()
        } else {
            x.ln() / self.0.ln()
        }
    }

    /// Log of an exact count, without overflowing for huge values.
    pub fn log_count(self, x: &BigCount) -> f64 {
        if self.0 == 2.0 {
            if let Some(v) = x.to_u64() {
                if v < (1u64 << 53) {
                    return (v as f64).log2();
                }
            }
        }
        x.ln() / self.0.ln()
    }
}

impl Default for LogBase {
    fn default() -> Self {
        LogBase::BINARY
    }
}

/// One focal element's share of an entropy value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyTerm {
    /// Element labels; tuple order for permutation events, sorted for sets.
    pub event: Vec<String>,
    pub contribution: f64,
}

/// An entropy value with its base and per-focal-element breakdown.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyReport {
    pub value: f64,
    pub base: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<EntropyTerm>>,
}

impl EntropyReport {
    fn from_terms(terms: Vec<EntropyTerm>, base: LogBase) -> Self {
        // `+ 0.0` turns a −0.0 total into 0.0.
        let value = terms.iter().map(|t| t.contribution).sum::<f64>() + 0.0;
        EntropyReport {
            value,
            base: base.value(),
            terms: Some(terms),
        }
    }

    pub fn without_terms(mut self) -> Self {
        self.terms = None;
        self
    }
}

fn term(mass: f64, weight: f64, base: LogBase) -> f64 {
    if mass > 0.0 {
        -mass * base.log(mass / weight)
    } else {
        0.0
    }
}

fn labels(labels: Vec<&str>) -> Vec<String> {
    labels.into_iter().map(str::to_owned).collect()
}

/// `−Σ p log p`.
pub fn shannon_entropy(p: &ProbabilityDistribution, base: LogBase) -> EntropyReport {
    let frame = p.frame();
    let terms = p
        .probs()
        .iter()
        .enumerate()
        .filter(|(_, &pk)| pk > 0.0)
        .map(|(k, &pk)| EntropyTerm {
            event: vec![frame.label(k).unwrap_or_default().to_owned()],
            contribution: term(pk, 1.0, base),
        })
        .collect();
    EntropyReport::from_terms(terms, base)
}

/// `−Σ_A m(A) log(m(A) / (2^|A| − 1))`.
pub fn deng_entropy(m: &MassFunction, base: LogBase) -> EntropyReport {
    let frame = m.frame();
    let terms = m
        .focal()
        .filter(|(s, _)| !s.is_empty())
        .map(|(s, mass)| {
            let weight = combinatorics::f_sum_combinatorial(s.cardinality()).to_f64() - 1.0;
            EntropyTerm {
                event: labels(s.labels(frame)),
                contribution: term(mass, weight, base),
            }
        })
        .collect();
    EntropyReport::from_terms(terms, base)
}

/// `−Σ_i Σ_j M(A_ij) log(M(A_ij) / (F(i) − 1))`.
pub fn rps_entropy(pmf: &PermutationMassFunction, base: LogBase) -> EntropyReport {
    let frame = pmf.frame();
    let weights = rps_weights(frame.len());
    let terms = pmf
        .focal()
        .filter(|(e, _)| !e.is_empty())
        .map(|(e, mass)| EntropyTerm {
            event: labels(e.labels(frame)),
            contribution: term(mass, weights[e.cardinality()], base),
        })
        .collect();
    EntropyReport::from_terms(terms, base)
}

/// `F(i) − 1` as floats, indexed by cardinality `i = 0..=n`.
pub fn rps_weights(n: usize) -> Vec<f64> {
    (0..=n).map(|i| (combinatorics::f_sum(i) - 1).to_f64()).collect()
}

fn require_positive(n: usize, op: &str) -> Result<()> {
    if n == 0 {
        Err(Error::domain(format!("{op} requires n >= 1")))
    } else {
        Ok(())
    }
}

/// `log n`.
pub fn max_shannon_entropy(n: usize, base: LogBase) -> Result<f64> {
    require_positive(n, "max_shannon_entropy")?;
    Ok(base.log_count(&BigCount::from(n)))
}

/// `log Σ_{A ⊆ Θ} (2^|A| − 1)`.
pub fn max_deng_entropy(n: usize, base: LogBase) -> Result<f64> {
    require_positive(n, "max_deng_entropy")?;
    Ok(base.log_count(&combinatorics::deng_normalizer(n)?))
}

/// `log Σ_{i=1}^{n} P(n, i)(F(i) − 1)`.
pub fn max_rps_entropy(n: usize, base: LogBase) -> Result<f64> {
    require_positive(n, "max_rps_entropy")?;
    Ok(base.log_count(&combinatorics::rps_normalizer(n)?))
}

/// The RPS maximum re-derived with order ignored: `P(n, i)` becomes
/// `C(n, i)` and `F(i)` becomes `Σ_k C(i, k)`. Coincides with
/// [`max_deng_entropy`].
pub fn max_rps_entropy_order_ignored(n: usize, base: LogBase) -> Result<f64> {
    require_positive(n, "max_rps_entropy_order_ignored")?;
    Ok(base.log_count(&combinatorics::order_ignored_normalizer(n)?))
}

/// The RPS maximum re-derived with singleton events only: `P(n, i)` becomes
/// `P̃(n, i)` and `F(i) = i + 1`. Coincides with [`max_shannon_entropy`].
pub fn max_rps_entropy_singleton_only(n: usize, base: LogBase) -> Result<f64> {
    require_positive(n, "max_rps_entropy_singleton_only")?;
    Ok(base.log_count(&combinatorics::singleton_normalizer(n)?))
}

/// [`max_deng_mass_function_capped`] with [`DEFAULT_DENG_CAP`].
pub fn max_deng_mass_function(frame: &Frame) -> Result<MassFunction> {
    max_deng_mass_function_capped(frame, DEFAULT_DENG_CAP)
}

/// The Deng-entropy maximizer: `m(A) = (2^|A| − 1) / Σ_B (2^|B| − 1)`.
pub fn max_deng_mass_function_capped(frame: &Frame, cap: usize) -> Result<MassFunction> {
    let n = frame.len();
    if n > cap {
        return Err(Error::Capacity {
            what: "max-Deng mass function",
            n,
            cap,
        });
    }
    let total = combinatorics::deng_normalizer(n)?.to_f64();
    let weights: Vec<f64> = (0..=n)
        .map(|i| (combinatorics::f_sum_combinatorial(i) - 1).to_f64())
        .collect();
    let masses: BTreeMap<_, _> = pes::subsets(frame)
        .map(|s| {
            let w = weights[s.cardinality()];
            (s, w / total)
        })
        .collect();
    MassFunction::new(frame.clone(), masses)
}

/// [`max_rps_pmf_capped`] with [`DEFAULT_PMF_CAP`].
pub fn max_rps_pmf(frame: &Frame) -> Result<PermutationMassFunction> {
    max_rps_pmf_capped(frame, DEFAULT_PMF_CAP)
}

/// The RPS-entropy maximizer: every event of cardinality `i` gets
/// `(F(i) − 1) / Σ_k P(n, k)(F(k) − 1)`.
pub fn max_rps_pmf_capped(frame: &Frame, cap: usize) -> Result<PermutationMassFunction> {
    let n = frame.len();
    if n > cap {
        return Err(Error::Capacity {
            what: "max-entropy PMF",
            n,
            cap,
        });
    }
    let total = combinatorics::rps_normalizer(n)?.to_f64();
    let weights = rps_weights(n);
    let masses: BTreeMap<_, _> = pes::enumerate(frame, false)
        .map(|e| {
            let w = weights[e.cardinality()];
            (e, w / total)
        })
        .collect();
    PermutationMassFunction::new(frame.clone(), masses)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pes::{PermutationEvent, Subset};
    use approx::assert_abs_diff_eq;

    const B2: LogBase = LogBase::BINARY;

    fn fmt4(x: f64) -> String {
        format!("{x:.4}")
    }

    fn rbg() -> Frame {
        Frame::new(["R", "B", "G"]).unwrap()
    }

    #[test]
    fn log_base_validation() {
        assert!(LogBase::new(1.0).is_err());
        assert!(LogBase::new(0.5).is_err());
        assert!(LogBase::new(f64::NAN).is_err());
        assert!(LogBase::new(f64::INFINITY).is_err());
        assert_abs_diff_eq!(LogBase::new(10.0).unwrap().log(1000.0), 3.0, epsilon = 1e-15);
    }

    #[test]
    fn shannon_examples() {
        let u3 = ProbabilityDistribution::uniform(rbg());
        assert_eq!(fmt4(shannon_entropy(&u3, B2).value), "1.5850");
        let xy = Frame::new(["X", "Y"]).unwrap();
        let point = ProbabilityDistribution::new(xy.clone(), vec![1.0, 0.0]).unwrap();
        assert_eq!(shannon_entropy(&point, B2).value, 0.0);
        assert_eq!(fmt4(shannon_entropy(&point, B2).value), "0.0000");
        let half = ProbabilityDistribution::new(xy, vec![0.5, 0.5]).unwrap();
        assert_eq!(shannon_entropy(&half, B2).value, 1.0);
    }

    #[test]
    fn deng_examples() {
        let frame = rbg();
        let masses = pes::subsets(&frame)
            .map(|s| {
                let m = [1.0, 3.0, 7.0][s.cardinality() - 1] / 19.0;
                (s, m)
            })
            .collect();
        let m = MassFunction::new(frame, masses).unwrap();
        assert_eq!(fmt4(deng_entropy(&m, B2).value), "4.2479");

        let one = Frame::new(["t"]).unwrap();
        let m = MassFunction::new(one, BTreeMap::from([(Subset::from_indices(vec![0]), 1.0)])).unwrap();
        assert_eq!(fmt4(deng_entropy(&m, B2).value), "0.0000");

        let xy = Frame::new(["X", "Y"]).unwrap();
        let m = MassFunction::new(xy, BTreeMap::from([(Subset::from_indices(vec![0, 1]), 1.0)])).unwrap();
        assert_abs_diff_eq!(deng_entropy(&m, B2).value, 3f64.log2(), epsilon = 1e-15);
    }

    #[test]
    fn rps_examples() {
        let pmf = max_rps_pmf(&rbg()).unwrap();
        let report = rps_entropy(&pmf, B2);
        assert_eq!(fmt4(report.value), "6.8704");
        assert_eq!(report.terms.as_ref().unwrap().len(), 15);

        let xy = Frame::new(["X", "Y"]).unwrap();
        let point = PermutationMassFunction::from_labeled(xy.clone(), &[(&["X"][..], 1.0)]).unwrap();
        let r = rps_entropy(&point, B2);
        assert_eq!(r.value, 0.0);
        assert!(r.value.is_sign_positive());

        let pair = PermutationMassFunction::from_labeled(xy, &[(&["X", "Y"][..], 1.0)]).unwrap();
        assert_eq!(rps_entropy(&pair, B2).value, 2.0);
    }

    #[test]
    fn report_value_is_sum_of_terms() {
        let pmf = max_rps_pmf(&rbg()).unwrap();
        let r = rps_entropy(&pmf, LogBase::NATURAL);
        let s: f64 = r.terms.as_ref().unwrap().iter().map(|t| t.contribution).sum();
        assert!((r.value - s).abs() < 1e-9);
        assert!(r.clone().without_terms().terms.is_none());
        assert_eq!(r.terms.unwrap()[3].event, ["R", "B"]);
    }

    #[test]
    fn analytic_maxima_examples() {
        assert_eq!(fmt4(max_shannon_entropy(2, B2).unwrap()), "1.0000");
        assert_eq!(fmt4(max_shannon_entropy(1, B2).unwrap()), "0.0000");
        assert_eq!(fmt4(max_shannon_entropy(10, B2).unwrap()), "3.3219");

        assert_eq!(fmt4(max_deng_entropy(3, B2).unwrap()), "4.2479");
        assert_eq!(fmt4(max_deng_entropy(2, B2).unwrap()), "2.3219");
        assert_eq!(fmt4(max_deng_entropy(1, B2).unwrap()), "0.0000");

        assert_eq!(fmt4(max_rps_entropy(2, B2).unwrap()), "3.3219");
        assert_eq!(fmt4(max_rps_entropy(5, B2).unwrap()), "15.5406");
        assert_eq!(fmt4(max_rps_entropy(10, B2).unwrap()), "45.1699");

        for f in [max_shannon_entropy, max_deng_entropy, max_rps_entropy] {
            assert!(f(0, B2).is_err());
        }
    }

    #[test]
    fn degenerate_maxima_examples() {
        assert_eq!(fmt4(max_rps_entropy_order_ignored(2, B2).unwrap()), "2.3219");
        assert_eq!(fmt4(max_rps_entropy_order_ignored(3, B2).unwrap()), "4.2479");
        assert_eq!(max_rps_entropy_order_ignored(1, B2).unwrap(), 0.0);
        assert_eq!(fmt4(max_rps_entropy_singleton_only(2, B2).unwrap()), "1.0000");
        assert_eq!(fmt4(max_rps_entropy_singleton_only(3, B2).unwrap()), "1.5850");
        assert_eq!(max_rps_entropy_singleton_only(1, B2).unwrap(), 0.0);
    }

    #[test]
    fn huge_n_maxima_stay_finite() {
        let h = max_rps_entropy(300, B2).unwrap();
        assert!(h.is_finite() && h > max_rps_entropy(200, B2).unwrap());
        assert!(max_deng_entropy(2000, B2).unwrap().is_finite());
    }

    #[test]
    fn max_deng_mass_function_examples() {
        let m = max_deng_mass_function(&rbg()).unwrap();
        let by_card = |k: usize| {
            m.masses()
                .iter()
                .filter(|(s, _)| s.cardinality() == k)
                .map(|(_, &v)| fmt4(v))
                .collect::<Vec<_>>()
        };
        assert_eq!(by_card(1), ["0.0526"; 3]);
        assert_eq!(by_card(2), ["0.1579"; 3]);
        assert_eq!(by_card(3), ["0.3684"]);

        let one = max_deng_mass_function(&Frame::generated(1).unwrap()).unwrap();
        assert_eq!(one.masses().values().copied().collect::<Vec<_>>(), [1.0]);

        let two = max_deng_mass_function(&Frame::generated(2).unwrap()).unwrap();
        let v: Vec<f64> = two.masses().values().copied().collect();
        assert_abs_diff_eq!(v[0], 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(v[1], 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(v[2], 0.6, epsilon = 1e-15);

        let err = max_deng_mass_function(&Frame::generated(21).unwrap()).unwrap_err();
        assert!(matches!(err, Error::Capacity { n: 21, cap: 20, .. }));
    }

    #[test]
    fn max_rps_pmf_examples() {
        let pmf = max_rps_pmf(&rbg()).unwrap();
        for (e, &m) in pmf.masses() {
            let expected = ["0.0085", "0.0342", "0.1282"][e.cardinality() - 1];
            assert_eq!(fmt4(m), expected, "{:?}", e);
        }
        let one = max_rps_pmf(&Frame::generated(1).unwrap()).unwrap();
        assert_eq!(one.mass(&PermutationEvent::from_indices(vec![0])), 1.0);

        let two = max_rps_pmf(&Frame::generated(2).unwrap()).unwrap();
        let v: Vec<f64> = two.masses().values().copied().collect();
        for (got, want) in v.iter().zip([0.1, 0.1, 0.4, 0.4]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-15);
        }

        let err = max_rps_pmf(&Frame::generated(9).unwrap()).unwrap_err();
        assert!(matches!(err, Error::Capacity { n: 9, cap: 8, .. }));
        assert!(max_rps_pmf_capped(&Frame::generated(9).unwrap(), 9).is_ok());
    }

    #[test]
    fn projected_max_pmf_is_not_max_deng() {
        for n in 2..=5 {
            let frame = Frame::generated(n).unwrap();
            let projected = max_rps_pmf(&frame).unwrap().degenerate_to_mass_function();
            let deng = max_deng_mass_function(&frame).unwrap();
            let sup = projected
                .masses()
                .iter()
                .map(|(s, &m)| (m - deng.mass(s)).abs())
                .fold(0.0, f64::max);
            assert!(sup > 0.01, "n={n}");
            assert!(deng_entropy(&projected, B2).value < max_deng_entropy(n, B2).unwrap());
        }
    }
}
