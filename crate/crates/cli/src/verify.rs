//! Symbolic and numeric verification, and comparison with transcribed
//! reduced equations.

use std::path::Path;

use lhode::derivation::{common_unit, disagreements, Derivation};
use lhode::expr::parse_xpoly;
use lhode::family::LHFamily;
use lhode::oracle::{run_suite, NumericContext, Oracle, OracleReport};
use lhode::reduction::reduce_ode;
use lhode::{OracleError, XPoly};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::Failure;

#[derive(Serialize)]
pub struct SrLine {
    pub label: String,
    pub sr1_zero: bool,
    pub sr2_zero: bool,
}

#[derive(Deserialize)]
struct GoldenFile {
    entries: Vec<GoldenEntry>,
}

#[derive(Deserialize)]
struct GoldenEntry {
    ode: String,
    instance: String,
    reduced: Vec<String>,
}

#[derive(Serialize, Clone, Copy, PartialEq, Eq, Debug)]
#[serde(rename_all = "snake_case")]
pub enum GoldenStatus {
    Match,
    /// The display disagrees, the oracle rejects the display and certifies
    /// the computed equation.
    DisplaySuspected,
    /// Both sides annihilate the polynomials but are not unit multiples.
    BothAnnihilate,
    /// The computed equation itself fails the oracle.
    Failed,
}

#[derive(Serialize)]
pub struct GoldenLine {
    pub ode: String,
    pub instance: String,
    pub status: GoldenStatus,
    pub mismatched: Vec<char>,
}

#[derive(Serialize)]
pub struct Report {
    pub family: String,
    pub passed: bool,
    pub sr: Vec<SrLine>,
    pub oracle: OracleReport,
    pub golden: Vec<GoldenLine>,
}

fn oracle_error(e: OracleError) -> Failure {
    match e {
        OracleError::MissingAssignment(_) | OracleError::NotNumeric(_) => Failure::Config(e.to_string()),
        _ => Failure::Verification(e.to_string()),
    }
}

fn compare_golden(
    f: &LHFamily,
    oracle: &Oracle,
    derivations: &[Derivation],
    path: &Path,
) -> Result<Vec<GoldenLine>, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    let file: GoldenFile =
        serde_json::from_str(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for entry in file.entries {
        let Some(d) = derivations.iter().find(|d| d.instance().slug() == entry.instance) else {
            continue;
        };
        let Some((_, ode)) = d.odes().into_iter().find(|(label, _)| *label == entry.ode) else {
            return Err(Failure::Config(format!("golden entry names unknown equation `{}`", entry.ode)));
        };
        let gold = entry
            .reduced
            .iter()
            .map(|s| parse_xpoly(s, &f.ring))
            .collect::<Result<Vec<XPoly>, _>>()
            .map_err(|e| Failure::Config(format!("golden {} [{}]: {e}", entry.ode, entry.instance)))?;
        let ours = reduce_ode(ode).map(|r| r.reduced).unwrap_or_else(|_| ode.coeffs.clone());
        if gold.len() != ours.len() {
            return Err(Failure::Config(format!(
                "golden {} [{}]: {} coefficients, expected {}",
                entry.ode,
                entry.instance,
                gold.len(),
                ours.len()
            )));
        }
        let letters = &['A', 'B', 'C', 'D', 'E'][5 - ours.len()..];
        let mismatched: Vec<char> = disagreements(&ours, &gold).into_iter().map(|i| letters[i]).collect();
        let status = if mismatched.is_empty() {
            GoldenStatus::Match
        } else {
            let zero = |c: &[XPoly]| -> Result<bool, Failure> {
                Ok(oracle
                    .check_ode(&entry.ode, c, &d.instance())
                    .map_err(oracle_error)?
                    .iter()
                    .all(|c| c.zero))
            };
            let display = match common_unit(&ours, &gold) {
                Some(u) => gold.iter().map(|g| g.scale(&u)).collect(),
                None => gold.clone(),
            };
            match (zero(&ours)?, zero(&display)?) {
                (false, _) => GoldenStatus::Failed,
                (true, false) => GoldenStatus::DisplaySuspected,
                (true, true) => GoldenStatus::BothAnnihilate,
            }
        };
        out.push(GoldenLine {
            ode: entry.ode,
            instance: entry.instance,
            status,
            mismatched,
        });
    }
    Ok(out)
}

pub fn run(cfg: &RunConfig, derivations: &[Derivation]) -> Result<Report, Failure> {
    let f = &cfg.family;
    let sr = f.verify_sr_recurrences().map_err(|e| Failure::Verification(e.to_string()))?;
    let sr: Vec<SrLine> = sr
        .checks
        .iter()
        .map(|c| SrLine {
            label: c.label.clone(),
            sr1_zero: c.sr1.is_zero(),
            sr2_zero: c.sr2.is_zero(),
        })
        .collect();

    let ctx = NumericContext::for_family(f, &cfg.assign, cfg.n_max).map_err(oracle_error)?;
    let mut extra = Vec::new();
    for d in derivations {
        for (label, ode) in d.odes() {
            if let Ok(r) = reduce_ode(ode) {
                extra.push((format!("{label}_reduced"), r.reduced, ode.instance));
            }
        }
    }
    let oracle = run_suite(f, &ctx, derivations, &extra).map_err(oracle_error)?;
    let golden = match &cfg.golden {
        Some(path) => compare_golden(f, &Oracle::new(f, &ctx).map_err(oracle_error)?, derivations, path)?,
        None => Vec::new(),
    };
    let passed = sr.iter().all(|l| l.sr1_zero && l.sr2_zero)
        && oracle.passed()
        && golden.iter().all(|g| g.status != GoldenStatus::Failed);
    Ok(Report {
        family: f.name.clone(),
        passed,
        sr,
        oracle,
        golden,
    })
}

pub fn summary(report: &Report) -> String {
    let mut lines = Vec::new();
    let sr_ok = report.sr.iter().filter(|l| l.sr1_zero && l.sr2_zero).count();
    lines.push(format!(
        "{}: symbolic SR recurrences {}/{} zero",
        report.family,
        sr_ok,
        report.sr.len()
    ));
    if let Some(bad) = report.sr.iter().find(|l| !(l.sr1_zero && l.sr2_zero)) {
        let which = if bad.sr1_zero { "SR2" } else { "SR1" };
        lines.push(format!("  first failure: {which} on {}", bad.label));
    }
    lines.push(report.oracle.summary());
    for g in &report.golden {
        let what = match g.status {
            GoldenStatus::Match => continue,
            GoldenStatus::DisplaySuspected => "golden discrepancy (paper display suspected)",
            GoldenStatus::BothAnnihilate => "golden discrepancy (both annihilate, not proportional)",
            GoldenStatus::Failed => "golden mismatch, computed equation rejected by oracle",
        };
        let idx: Vec<String> = g.mismatched.iter().map(char::to_string).collect();
        lines.push(format!("  {what}: {} [{}] coefficients {}", g.ode, g.instance, idx.join(",")));
    }
    if !report.golden.is_empty() {
        let matched = report.golden.iter().filter(|g| g.status == GoldenStatus::Match).count();
        lines.push(format!("golden: {matched}/{} entries match", report.golden.len()));
    }
    lines.push(if report.passed { "verification passed".into() } else { "verification FAILED".into() });
    lines.join("\n")
}

/// The first symbolic, recurrence, numeric and golden failures, on one line.
pub fn first_failure(report: &Report) -> String {
    let mut parts = Vec::new();
    if let Some(bad) = report.sr.iter().find(|l| !(l.sr1_zero && l.sr2_zero)) {
        let which = if bad.sr1_zero { "SR2" } else { "SR1" };
        parts.push(format!("symbolic {which} nonzero on {}", bad.label));
    }
    if let Some(m) = report.oracle.cd_mismatches.first() {
        parts.push(format!("{}_{} iterated {} but declared {}", m.seq, m.index, m.iterated, m.declared));
    }
    if let Some(c) = report.oracle.failures().next() {
        let at = c.instance.as_deref().map(|i| format!(" [{i}]")).unwrap_or_default();
        parts.push(format!("{} nonzero at n = {}{at}", c.relation, c.n));
    }
    if let Some(g) = report.golden.iter().find(|g| g.status == GoldenStatus::Failed) {
        parts.push(format!("{} [{}] rejected by oracle", g.ode, g.instance));
    }
    parts.join("; ")
}
