//! Numerical check of the RPS maximum-entropy results.
//!
//! [`maximize_rps_entropy`] climbs the RPS entropy over the simplex of
//! non-empty-event masses by projected gradient ascent with a backtracking
//! line search. It never looks at the closed-form maximizer; that is only
//! used afterwards to score the result. [`random_search_oracle`] samples
//! the simplex uniformly as a second, optimizer-free witness.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use serde::Serialize;

use crate::entropy::{self, LogBase};
use crate::error::{Error, Result};
use crate::mass::PermutationMassFunction;
use crate::pes::{self, Frame, PermutationEvent};

/// Default cap on `n` for the optimizer and the random-search oracle.
pub const DEFAULT_OPTIMIZER_CAP: usize = 7;

/// Masses are clamped to at least this before taking logs in the gradient.
pub const MASS_FLOOR: f64 = 1e-15;

// Line-search halvings before an iteration gives up.
const MAX_BACKTRACKS: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizerConfig {
    pub max_iterations: usize,
    /// Largest step tried by the line search.
    pub step_size: f64,
    /// Convergence threshold on the sup-norm change between iterates.
    pub tolerance: f64,
    pub seed: u64,
    /// Start from a Dirichlet(1) draw seeded by `seed` instead of the uniform point.
    pub random_start: bool,
    pub base: f64,
    pub cap: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            max_iterations: 100_000,
            step_size: 0.1,
            tolerance: 1e-10,
            seed: 0,
            random_start: false,
            base: 2.0,
            cap: DEFAULT_OPTIMIZER_CAP,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<LogBase> {
        if self.max_iterations == 0 {
            return Err(Error::domain("max_iterations must be at least 1"));
        }
        if !(self.step_size.is_finite() && self.step_size > 0.0) {
            return Err(Error::domain(format!(
                "step_size must be positive, got {}",
                self.step_size
            )));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(Error::domain(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        LogBase::new(self.base)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationResult {
    pub converged: bool,
    pub iterations_used: usize,
    pub achieved_entropy: f64,
    /// Closed-form maximum the run is scored against.
    pub analytic_entropy: f64,
    /// `analytic_entropy − achieved_entropy`.
    pub entropy_gap: f64,
    /// Sup-norm distance to the closed-form maximizing PMF.
    pub pmf_sup_distance: f64,
    /// Relative spread of `M(A) / (F(|A|) − 1)` over the support.
    pub kkt_residual: f64,
}

/// Euclidean projection onto `{x : x ≥ 0, Σ x = 1}`.
pub fn project_onto_simplex(v: &[f64]) -> Vec<f64> {
    if v.is_empty() {
        return Vec::new();
    }
    let mut sorted = v.to_vec();
    sorted.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (k, &u) in sorted.iter().enumerate() {
        cumulative += u;
        let t = (cumulative - 1.0) / (k + 1) as f64;
        if u - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

// The objective restricted to a fixed event list: each coordinate carries
// its weight F(|A|) − 1.
struct Objective {
    weights: Vec<f64>,
    ln_base: f64,
}

impl Objective {
    fn new(events: &[PermutationEvent], n: usize, base: LogBase) -> Self {
        let by_card = entropy::rps_weights(n);
        Objective {
            weights: events.iter().map(|e| by_card[e.cardinality()]).collect(),
            ln_base: base.value().ln(),
        }
    }

    fn term(&self, x: f64, w: f64) -> f64 {
        if x > 0.0 {
            -x * (x / w).ln() / self.ln_base
        } else {
            0.0
        }
    }

    fn value(&self, x: &[f64]) -> f64 {
        x.iter()
            .zip(&self.weights)
            .map(|(&xi, &w)| self.term(xi, w))
            .sum::<f64>()
            + 0.0
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(&self.weights)
            .map(|(&xi, &w)| -((xi.max(MASS_FLOOR) / w).ln() + 1.0) / self.ln_base)
            .collect()
    }

    /// `value(a) − value(b)` for two points of the simplex, summed per
    /// coordinate so that nearby points keep their difference.
    ///
    /// The objective's gradient has a large component along the all-ones
    /// direction. On the simplex that component does no work, but rounding
    /// leaves `Σ(a − b)` at about 1e-16 instead of 0 and it would swamp tiny
    /// increases. It is removed here: the result is the increase of
    /// `value(x) + c·Σ x` for a suitable constant `c`, which is the same
    /// function on the simplex.
    fn increase(&self, a: &[f64], b: &[f64]) -> f64 {
        let logs: Vec<f64> = b
            .iter()
            .zip(&self.weights)
            .map(|(&bi, &w)| (bi.max(MASS_FLOOR) / w).ln())
            .collect();
        let shift = logs.iter().sum::<f64>() / logs.len() as f64;
        a.iter()
            .zip(b)
            .zip(self.weights.iter().zip(&logs))
            .map(|((&ai, &bi), (&w, &log_b))| {
                let d = ai - bi;
                if ai > 0.0 && bi > 0.0 {
                    // φ(a) − φ(b) = −d·ln(b/w) − a·ln(1 + d/b), then shifted by (shift + 1)·d.
                    (-d * (log_b - shift) + (d - ai * (d / bi).ln_1p())) / self.ln_base
                } else {
                    self.term(ai, w) - self.term(bi, w) + d * (shift + 1.0) / self.ln_base
                }
            })
            .sum()
    }
}

fn dirichlet_point<R: Rng>(rng: &mut R, len: usize) -> Vec<f64> {
    let draws: Vec<f64> = (0..len).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = draws.iter().sum();
    draws.into_iter().map(|d| d / total).collect()
}

fn sup_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn ratio_residual(ratios: &[f64]) -> f64 {
    if ratios.is_empty() {
        return 0.0;
    }
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    ratios.iter().map(|r| (r - mean).abs()).fold(0.0, f64::max) / mean
}

fn check_cap(frame: &Frame, cap: usize, what: &'static str) -> Result<()> {
    if frame.len() > cap {
        Err(Error::Capacity {
            what,
            n: frame.len(),
            cap,
        })
    } else {
        Ok(())
    }
}

/// Per-iteration view handed to observers of [`run_ascent`].
#[cfg_attr(not(test), allow(dead_code))]
pub(crate) struct Step<'a> {
    pub iterate: &'a [f64],
    pub increase: f64,
}

/// Returns the final iterate, the number of iterations and whether the
/// sup-norm change fell below the tolerance.
pub(crate) fn run_ascent(
    objective_events: &[PermutationEvent],
    n: usize,
    config: &OptimizerConfig,
    base: LogBase,
    mut observe: impl FnMut(Step<'_>),
) -> (Vec<f64>, usize, bool) {
    let objective = Objective::new(objective_events, n, base);
    let len = objective_events.len();
    let mut x = if config.random_start {
        dirichlet_point(&mut ChaCha8Rng::seed_from_u64(config.seed), len)
    } else {
        vec![1.0 / len as f64; len]
    };
    let mut iterations = 0;
    let mut converged = false;
    let mut step = config.step_size;

    'outer: while iterations < config.max_iterations {
        iterations += 1;
        let g = objective.gradient(&x);
        let g_mean = g.iter().sum::<f64>() / g.len() as f64;
        step = (2.0 * step).min(config.step_size);
        for attempt in 0..MAX_BACKTRACKS {
            let moved: Vec<f64> = x.iter().zip(&g).map(|(xi, gi)| xi + step * gi).collect();
            let candidate = project_onto_simplex(&moved);
            // Only an unshrunk trial step measures stationarity; a backtracked
            // one is small because the step is.
            if attempt == 0 && sup_distance(&candidate, &x) < config.tolerance {
                converged = true;
                break 'outer;
            }
            let d: Vec<f64> = candidate.iter().zip(&x).map(|(c, xi)| c - xi).collect();
            let linear: f64 = g.iter().zip(&d).map(|(gi, di)| (gi - g_mean) * di).sum();
            let sq: f64 = d.iter().map(|di| di * di).sum();
            let increase = objective.increase(&candidate, &x);
            // Sufficient increase against the quadratic model with curvature 1/step.
            if increase >= linear - sq / (2.0 * step) && increase >= 0.0 {
                observe(Step {
                    iterate: &candidate,
                    increase,
                });
                x = candidate;
                continue 'outer;
            }
            step *= 0.5;
        }
        // No acceptable step at any scale: stuck at rounding level.
        break;
    }
    (x, iterations, converged)
}

/// Maximizes RPS entropy numerically and scores the result against the
/// closed-form maximizer.
pub fn maximize_rps_entropy(
    frame: &Frame,
    config: &OptimizerConfig,
) -> Result<(PermutationMassFunction, VerificationResult)> {
    let base = config.validate()?;
    check_cap(frame, config.cap, "numerical maximization")?;
    let events: Vec<PermutationEvent> = pes::enumerate(frame, false).collect();
    let (x, iterations_used, converged) = run_ascent(&events, frame.len(), config, base, |_| {});

    let masses: BTreeMap<_, _> = events.iter().cloned().zip(x.iter().copied()).collect();
    let pmf = PermutationMassFunction::new(frame.clone(), masses)?;

    let achieved_entropy = entropy::rps_entropy(&pmf, base).value;
    let analytic_entropy = entropy::max_rps_entropy(frame.len(), base)?;
    let target = entropy::max_rps_pmf_capped(frame, config.cap)?;
    let target_masses: Vec<f64> = events.iter().map(|e| target.mass(e)).collect();
    let weights = entropy::rps_weights(frame.len());
    let ratios: Vec<f64> = pmf.focal().map(|(e, m)| m / weights[e.cardinality()]).collect();

    let result = VerificationResult {
        converged,
        iterations_used,
        achieved_entropy,
        analytic_entropy,
        entropy_gap: analytic_entropy - achieved_entropy,
        pmf_sup_distance: sup_distance(&x, &target_masses),
        kkt_residual: ratio_residual(&ratios),
    };
    Ok((pmf, result))
}

/// Relative spread `max |r − mean r| / mean r` of the ratios
/// `r = M(A) / (F(|A|) − 1)` over all non-empty events; zero exactly at the
/// maximizer. The ratios do not depend on the log base.
pub fn check_stationarity(pmf: &PermutationMassFunction, _base: LogBase) -> Result<f64> {
    let frame = pmf.frame();
    let weights = entropy::rps_weights(frame.len());
    let mut ratios = Vec::new();
    for event in pes::enumerate(frame, false) {
        let m = pmf.mass(&event);
        if m <= 0.0 {
            return Err(Error::Precondition(format!(
                "stationarity needs full support; {} has zero mass",
                event.display(frame)
            )));
        }
        ratios.push(m / weights[event.cardinality()]);
    }
    Ok(ratio_residual(&ratios))
}

/// Best RPS entropy among `samples` PMFs drawn uniformly from the simplex
/// of non-empty events (Dirichlet(1) via normalized exponentials).
/// Deterministic in `seed`.
pub fn random_search_oracle(frame: &Frame, samples: usize, seed: u64, base: LogBase) -> Result<f64> {
    check_cap(frame, DEFAULT_OPTIMIZER_CAP, "random search")?;
    let events: Vec<PermutationEvent> = pes::enumerate(frame, false).collect();
    let objective = Objective::new(&events, frame.len(), base);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = f64::NEG_INFINITY;
    for _ in 0..samples {
        let x = dirichlet_point(&mut rng, events.len());
        best = best.max(objective.value(&x));
    }
    Ok(best + 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config() -> OptimizerConfig {
        OptimizerConfig::default()
    }

    #[test]
    fn projection_examples() {
        assert_eq!(project_onto_simplex(&[0.5, 0.5]), [0.5, 0.5]);
        assert_eq!(project_onto_simplex(&[2.0, 0.0]), [1.0, 0.0]);
        assert_eq!(project_onto_simplex(&[0.0, 0.0]), [0.5, 0.5]);
        let p = project_onto_simplex(&[0.9, 0.8, -3.0]);
        assert!((p[0] - 0.55).abs() < 1e-15 && (p[1] - 0.45).abs() < 1e-15 && p[2] == 0.0);
    }

    #[test]
    fn two_element_run_converges_to_closed_form() {
        let frame = Frame::new(["X", "Y"]).unwrap();
        let (pmf, result) = maximize_rps_entropy(&frame, &config()).unwrap();
        assert!(result.converged);
        assert!(result.pmf_sup_distance < 1e-6, "{result:?}");
        assert!((result.achieved_entropy - 10f64.log2()).abs() < 1e-6);
        assert_eq!(format!("{:.4}", result.achieved_entropy), "3.3219");
        assert!(check_stationarity(&pmf, LogBase::BINARY).unwrap() < 1e-5);
    }

    #[test]
    fn single_element_converges_immediately() {
        let (pmf, result) = maximize_rps_entropy(&Frame::generated(1).unwrap(), &config()).unwrap();
        assert!(result.converged);
        assert_eq!(result.iterations_used, 1);
        assert_eq!(result.achieved_entropy, 0.0);
        assert_eq!(result.entropy_gap, 0.0);
        assert_eq!(pmf.masses().values().copied().collect::<Vec<_>>(), [1.0]);
    }

    #[test]
    fn three_element_run_meets_targets() {
        let (_, result) = maximize_rps_entropy(&Frame::generated(3).unwrap(), &config()).unwrap();
        assert!(result.converged);
        assert!(result.entropy_gap < 1e-6 && result.entropy_gap > -1e-9);
        assert!(result.kkt_residual < 1e-6, "{result:?}");
        assert_eq!(format!("{:.4}", result.analytic_entropy), "6.8704");
    }

    #[test]
    fn stationarity_examples() {
        let frame = Frame::generated(3).unwrap();
        let max = entropy::max_rps_pmf(&frame).unwrap();
        assert!(check_stationarity(&max, LogBase::BINARY).unwrap() < 1e-12);

        // Ratios 0.25, 0.25, 0.0625, 0.0625; mean 0.15625.
        let two = Frame::generated(2).unwrap();
        let uniform =
            PermutationMassFunction::new(two.clone(), pes::enumerate(&two, false).map(|e| (e, 0.25)).collect())
                .unwrap();
        let r = check_stationarity(&uniform, LogBase::BINARY).unwrap();
        assert!((r - 0.6).abs() < 1e-15, "{r}");

        let partial = PermutationMassFunction::from_labeled(two, &[(&["t1"][..], 1.0)]).unwrap();
        assert!(matches!(
            check_stationarity(&partial, LogBase::BINARY),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn iterates_stay_on_simplex_and_climb() {
        for (n, random_start) in [(2, false), (3, true), (4, false), (4, true)] {
            let frame = Frame::generated(n).unwrap();
            let events: Vec<_> = pes::enumerate(&frame, false).collect();
            let cfg = OptimizerConfig {
                random_start,
                seed: 7,
                ..config()
            };
            let mut steps = 0;
            run_ascent(&events, n, &cfg, LogBase::BINARY, |s| {
                steps += 1;
                assert!(s.iterate.iter().all(|&x| x >= 0.0));
                assert!((s.iterate.iter().sum::<f64>() - 1.0).abs() < 1e-12);
                assert!(s.increase >= 0.0);
            });
            assert!(steps > 0);
        }
    }

    #[test]
    fn random_start_also_converges() {
        for seed in [1, 2, 3] {
            let cfg = OptimizerConfig {
                random_start: true,
                seed,
                ..config()
            };
            let (_, result) = maximize_rps_entropy(&Frame::generated(3).unwrap(), &cfg).unwrap();
            assert!(result.converged && result.pmf_sup_distance < 1e-5, "{result:?}");
        }
    }

    #[test]
    fn runs_are_deterministic() {
        let cfg = OptimizerConfig {
            random_start: true,
            seed: 42,
            ..config()
        };
        let frame = Frame::generated(3).unwrap();
        let a = maximize_rps_entropy(&frame, &cfg).unwrap();
        let b = maximize_rps_entropy(&frame, &cfg).unwrap();
        assert_eq!(a, b);
        let base = LogBase::BINARY;
        assert_eq!(
            random_search_oracle(&frame, 500, 9, base).unwrap().to_bits(),
            random_search_oracle(&frame, 500, 9, base).unwrap().to_bits()
        );
    }

    #[test]
    fn caps_and_config_errors() {
        let big = Frame::generated(8).unwrap();
        assert!(matches!(
            maximize_rps_entropy(&big, &config()),
            Err(Error::Capacity { .. })
        ));
        assert!(matches!(
            random_search_oracle(&big, 1, 0, LogBase::BINARY),
            Err(Error::Capacity { .. })
        ));
        let small = Frame::generated(2).unwrap();
        for bad in [
            OptimizerConfig {
                tolerance: 0.0,
                ..config()
            },
            OptimizerConfig {
                max_iterations: 0,
                ..config()
            },
            OptimizerConfig {
                step_size: -1.0,
                ..config()
            },
            OptimizerConfig { base: 1.0, ..config() },
        ] {
            assert!(matches!(maximize_rps_entropy(&small, &bad), Err(Error::Domain(_))));
        }
    }

    #[test]
    fn oracle_single_element_is_zero() {
        let v = random_search_oracle(&Frame::generated(1).unwrap(), 100, 3, LogBase::BINARY).unwrap();
        assert_eq!(v, 0.0);
        assert!(v.is_sign_positive());
    }

    #[test]
    fn vector_objective_matches_entropy_module() {
        let frame = Frame::generated(3).unwrap();
        let events: Vec<_> = pes::enumerate(&frame, false).collect();
        let objective = Objective::new(&events, 3, LogBase::BINARY);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let x = dirichlet_point(&mut rng, events.len());
            let pmf =
                PermutationMassFunction::new(frame.clone(), events.iter().cloned().zip(x.iter().copied()).collect())
                    .unwrap();
            let direct = entropy::rps_entropy(&pmf, LogBase::BINARY).value;
            assert!((objective.value(&x) - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn stable_increase_matches_plain_difference() {
        let frame = Frame::generated(2).unwrap();
        let events: Vec<_> = pes::enumerate(&frame, false).collect();
        let objective = Objective::new(&events, 2, LogBase::BINARY);
        let a = [0.1, 0.2, 0.3, 0.4];
        let b = [0.25, 0.25, 0.0, 0.5];
        let plain = objective.value(&a) - objective.value(&b);
        assert!((objective.increase(&a, &b) - plain).abs() < 1e-14);
    }
}
