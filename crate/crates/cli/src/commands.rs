use std::io::Read;
use std::path::Path;

use anyhow::{Context, Result};
use rps_core::entropy::{self, DEFAULT_DENG_CAP, DEFAULT_PMF_CAP};
use rps_core::verifier::{self, DEFAULT_OPTIMIZER_CAP};
use rps_core::{
    pes, EntropyReport, Error, Frame, LogBase, MassDocument, OptimizerConfig, PermutationEvent,
    PermutationMassFunction, ProbabilityDistribution, RpsDocument,
};
use serde::Serialize;
use serde_json::json;

use crate::args::{Format, Kind, Mode};
use crate::render::{aligned, csv_row, fixed, sci};

/// Settings shared by every command.
pub struct Settings {
    pub base: LogBase,
    pub precision: usize,
    pub format: Format,
    pub cap: Option<usize>,
}

impl Settings {
    fn num(&self, v: f64) -> String {
        fixed(v, self.precision)
    }

    fn enumeration_cap(&self) -> usize {
        self.cap.unwrap_or(DEFAULT_PMF_CAP)
    }
}

/// Raised when `verify` finishes but the run misses its targets.
#[derive(Debug)]
pub struct VerificationFailed(pub String);

impl std::fmt::Display for VerificationFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "verification failed: {}", self.0)
    }
}

impl std::error::Error for VerificationFailed {}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

fn require_positive(n: usize, what: &str) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain(format!("{what} needs n >= 1")).into());
    }
    Ok(())
}

pub fn enumerate(s: &Settings, labels: &[String], include_empty: bool) -> Result<String> {
    let frame = Frame::new(labels.iter().cloned())?;
    let cap = s.enumeration_cap();
    if frame.len() > cap {
        return Err(Error::Capacity {
            what: "event enumeration",
            n: frame.len(),
            cap,
        }
        .into());
    }
    let events = pes::enumerate(&frame, include_empty);
    Ok(match s.format {
        Format::Json => {
            let arrays: Vec<Vec<&str>> = events.map(|e| e.labels(&frame)).collect();
            to_json(&arrays)?
        }
        Format::Table | Format::Csv => events
            .map(|e| e.display(&frame).to_string())
            .collect::<Vec<_>>()
            .join("\n"),
    })
}

fn read_input(input: Option<&Path>) -> Result<String> {
    let mut text = String::new();
    match input {
        Some(path) if path != Path::new("-") => {
            text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        }
        _ => {
            std::io::stdin()
                .read_to_string(&mut text)
                .context("cannot read stdin")?;
        }
    }
    Ok(text)
}

fn load_pmf(text: &str, renormalize: bool) -> Result<PermutationMassFunction> {
    let doc = RpsDocument::from_json(text)?;
    match doc.to_pmf() {
        Err(Error::Validation(_)) if renormalize => {
            let frame = Frame::new(doc.elements.iter().cloned())?;
            let masses = doc
                .pmf
                .iter()
                .map(|e| Ok((PermutationEvent::from_labels(&e.event, &frame)?, e.mass)))
                .collect::<rps_core::Result<_>>()?;
            Ok(PermutationMassFunction::new_unchecked(frame, masses).renormalized()?)
        }
        other => Ok(other?),
    }
}

fn event_text(kind: Kind, labels: &[String]) -> String {
    match kind {
        Kind::Rps => format!("({})", labels.join(",")),
        Kind::Deng => format!("{{{}}}", labels.join(",")),
        Kind::Shannon => labels.join(","),
    }
}

pub fn entropy(s: &Settings, input: Option<&Path>, kind: Kind, terms: bool, renormalize: bool) -> Result<String> {
    let text = read_input(input)?;
    let report: EntropyReport = match kind {
        Kind::Rps => entropy::rps_entropy(&load_pmf(&text, renormalize)?, s.base),
        Kind::Shannon => {
            let p = load_pmf(&text, renormalize)?.restrict_to_singletons()?;
            entropy::shannon_entropy(&p, s.base)
        }
        Kind::Deng => {
            let m = MassDocument::from_json(&text)?.to_mass_function()?;
            entropy::deng_entropy(&m, s.base)
        }
    };
    let report = if terms { report } else { report.without_terms() };
    let breakdown = report.terms.as_deref().unwrap_or_default();
    Ok(match s.format {
        Format::Json => to_json(&report)?,
        Format::Table => {
            let mut out = s.num(report.value);
            if !breakdown.is_empty() {
                let rows: Vec<Vec<String>> = breakdown
                    .iter()
                    .map(|t| vec![event_text(kind, &t.event), s.num(t.contribution)])
                    .collect();
                out.push('\n');
                out.push_str(&aligned(&["event", "contribution"], &rows));
            }
            out
        }
        Format::Csv if terms => {
            let mut lines = vec![csv_row(&["kind", "event", "contribution"])];
            lines.extend(
                breakdown
                    .iter()
                    .map(|t| csv_row(&[kind.name(), &t.event.join(" "), &s.num(t.contribution)])),
            );
            lines.join("\n")
        }
        Format::Csv => [
            csv_row(&["kind", "base", "value"]),
            csv_row(&[kind.name(), &report.base.to_string(), &s.num(report.value)]),
        ]
        .join("\n"),
    })
}

fn max_value(kind: Kind, n: usize, base: LogBase) -> rps_core::Result<f64> {
    match kind {
        Kind::Rps => entropy::max_rps_entropy(n, base),
        Kind::Deng => entropy::max_deng_entropy(n, base),
        Kind::Shannon => entropy::max_shannon_entropy(n, base),
    }
}

fn max_distribution(s: &Settings, kind: Kind, n: usize) -> Result<serde_json::Value> {
    let frame = Frame::generated(n)?;
    Ok(match kind {
        Kind::Rps => {
            let pmf = entropy::max_rps_pmf_capped(&frame, s.enumeration_cap())?;
            serde_json::to_value(RpsDocument::from_pmf(&pmf))?
        }
        Kind::Deng => {
            let m = entropy::max_deng_mass_function_capped(&frame, DEFAULT_DENG_CAP)?;
            serde_json::to_value(MassDocument::from_mass_function(&m))?
        }
        Kind::Shannon => {
            let p = ProbabilityDistribution::uniform(frame.clone());
            let masses = p
                .probs()
                .iter()
                .enumerate()
                .map(|(k, &q)| (PermutationEvent::from_indices(vec![k]), q))
                .collect();
            let pmf = PermutationMassFunction::new(frame, masses)?;
            serde_json::to_value(RpsDocument::from_pmf(&pmf))?
        }
    })
}

/// Rounds every `"mass"` in a document to `precision` decimals.
fn round_masses(doc: &mut serde_json::Value, precision: usize) {
    let scale = 10f64.powi(i32::try_from(precision).unwrap_or(i32::MAX));
    let key = if doc.get("pmf").is_some() { "pmf" } else { "m" };
    if let Some(list) = doc.get_mut(key).and_then(|v| v.as_array_mut()) {
        for entry in list {
            if let Some(m) = entry.get("mass").and_then(|m| m.as_f64()) {
                let rounded = (m * scale).round() / scale;
                if rounded.is_finite() {
                    entry["mass"] = json!(rounded);
                }
            }
        }
    }
}

pub fn maxent(s: &Settings, n: usize, kind: Kind, emit: bool) -> Result<String> {
    let value = max_value(kind, n, s.base)?;
    let mut distribution = if emit {
        Some(max_distribution(s, kind, n)?)
    } else {
        None
    };
    let mut out = match s.format {
        Format::Json => {
            let mut obj = json!({ "n": n, "kind": kind.name(), "base": s.base.value(), "value": value });
            if let Some(d) = distribution.take() {
                obj["distribution"] = d;
            }
            return to_json(&obj);
        }
        Format::Table => s.num(value),
        Format::Csv => [
            csv_row(&["N", "kind", "value"]),
            csv_row(&[n.to_string(), kind.name().to_owned(), s.num(value)]),
        ]
        .join("\n"),
    };
    if let Some(mut d) = distribution {
        round_masses(&mut d, s.precision);
        out.push('\n');
        out.push_str(&to_json(&d)?);
    }
    Ok(out)
}

#[derive(Serialize)]
struct TableRow {
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "H_max_SE")]
    shannon: f64,
    #[serde(rename = "H_max_DE")]
    deng: f64,
    #[serde(rename = "H_max_RPS")]
    rps: f64,
}

const TABLE_HEADER: [&str; 4] = ["N", "H_max_SE", "H_max_DE", "H_max_RPS"];

pub fn table(s: &Settings, n_max: usize) -> Result<String> {
    require_positive(n_max, "table")?;
    let rows = (1..=n_max)
        .map(|n| {
            Ok(TableRow {
                n,
                shannon: entropy::max_shannon_entropy(n, s.base)?,
                deng: entropy::max_deng_entropy(n, s.base)?,
                rps: entropy::max_rps_entropy(n, s.base)?,
            })
        })
        .collect::<rps_core::Result<Vec<_>>>()?;
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| vec![r.n.to_string(), s.num(r.shannon), s.num(r.deng), s.num(r.rps)])
        .collect();
    Ok(match s.format {
        Format::Json => to_json(&rows)?,
        Format::Table => aligned(&TABLE_HEADER, &cells),
        Format::Csv => std::iter::once(csv_row(&TABLE_HEADER))
            .chain(cells.iter().map(|c| csv_row(c)))
            .collect::<Vec<_>>()
            .join("\n"),
    })
}

pub fn degenerate(s: &Settings, n: usize, mode: Mode) -> Result<String> {
    let (mode_name, left_name, right_name, left, right) = match mode {
        Mode::OrderIgnored => (
            "order-ignored",
            "H_max_RPS (order ignored)",
            "H_max_DE",
            entropy::max_rps_entropy_order_ignored(n, s.base)?,
            entropy::max_deng_entropy(n, s.base)?,
        ),
        Mode::SingletonOnly => (
            "singleton-only",
            "H_max_RPS (singletons only)",
            "H_max_SE",
            entropy::max_rps_entropy_singleton_only(n, s.base)?,
            entropy::max_shannon_entropy(n, s.base)?,
        ),
    };
    let equal = (left - right).abs() <= 1e-12 * right.abs().max(1.0);
    let verdict = if equal { "EQUAL" } else { "DIFFERENT" };
    Ok(match s.format {
        Format::Json => to_json(&json!({
            "n": n,
            "mode": mode_name,
            "degenerate": left,
            "classical": right,
            "equal": equal,
        }))?,
        Format::Table => format!(
            "{left_name}: {}\n{right_name}: {}\n{verdict}",
            s.num(left),
            s.num(right)
        ),
        Format::Csv => [
            csv_row(&["N", "mode", "degenerate", "classical", "verdict"]),
            csv_row(&[&n.to_string(), mode_name, &s.num(left), &s.num(right), verdict]),
        ]
        .join("\n"),
    })
}

pub struct VerifyArgs {
    pub n: usize,
    pub config: OptimizerConfig,
    pub tolerance: f64,
    pub oracle_samples: Option<usize>,
}

/// Runs the check and returns the rendering plus whether every target was met.
pub fn verify(s: &Settings, args: VerifyArgs) -> Result<(String, Option<VerificationFailed>)> {
    let VerifyArgs {
        n,
        mut config,
        tolerance,
        oracle_samples,
    } = args;
    require_positive(n, "verify")?;
    if !(tolerance.is_finite() && tolerance > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tolerance}")).into());
    }
    config.base = s.base.value();
    config.cap = s.cap.unwrap_or(DEFAULT_OPTIMIZER_CAP);
    let frame = Frame::generated(n)?;
    let (_, result) = verifier::maximize_rps_entropy(&frame, &config)?;
    let oracle = match oracle_samples {
        Some(samples) => Some(verifier::random_search_oracle(&frame, samples, config.seed, s.base)?),
        None => None,
    };

    let mut failures = Vec::new();
    if result.entropy_gap.abs() > tolerance {
        failures.push(format!("entropy gap {} exceeds {tolerance:e}", sci(result.entropy_gap)));
    }
    if result.pmf_sup_distance > tolerance {
        failures.push(format!(
            "sup distance {} exceeds {tolerance:e}",
            sci(result.pmf_sup_distance)
        ));
    }
    if let Some(best) = oracle.filter(|&b| b > result.analytic_entropy) {
        failures.push(format!(
            "oracle found {best} above the maximum {}",
            result.analytic_entropy
        ));
    }
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };

    let text = match s.format {
        Format::Json => to_json(&json!({
            "n": n,
            "config": config,
            "result": result,
            "oracle_samples": oracle_samples,
            "oracle_best": oracle,
            "tolerance": tolerance,
            "passed": failures.is_empty(),
        }))?,
        Format::Table => {
            let mut lines = vec![
                format!("n: {n}"),
                format!("converged: {}", result.converged),
                format!("iterations_used: {}", result.iterations_used),
                format!("achieved_entropy: {}", s.num(result.achieved_entropy)),
                format!("analytic_entropy: {}", s.num(result.analytic_entropy)),
                format!("entropy_gap: {}", sci(result.entropy_gap)),
                format!("pmf_sup_distance: {}", sci(result.pmf_sup_distance)),
                format!("kkt_residual: {}", sci(result.kkt_residual)),
            ];
            if let (Some(samples), Some(best)) = (oracle_samples, oracle) {
                lines.push(format!("oracle_samples: {samples}"));
                lines.push(format!("oracle_best: {}", s.num(best)));
            }
            lines.push(format!("status: {status}"));
            lines.join("\n")
        }
        Format::Csv => {
            let oracle_cell = oracle.map(|b| s.num(b)).unwrap_or_default();
            [
                csv_row(&[
                    "N",
                    "converged",
                    "iterations_used",
                    "achieved_entropy",
                    "analytic_entropy",
                    "entropy_gap",
                    "pmf_sup_distance",
                    "kkt_residual",
                    "oracle_best",
                    "status",
                ]),
                csv_row(&[
                    n.to_string(),
                    result.converged.to_string(),
                    result.iterations_used.to_string(),
                    s.num(result.achieved_entropy),
                    s.num(result.analytic_entropy),
                    sci(result.entropy_gap),
                    sci(result.pmf_sup_distance),
                    sci(result.kkt_residual),
                    oracle_cell,
                    status.to_owned(),
                ]),
            ]
            .join("\n")
        }
    };
    let failure = (!failures.is_empty()).then(|| VerificationFailed(failures.join("; ")));
    Ok((text, failure))
}
