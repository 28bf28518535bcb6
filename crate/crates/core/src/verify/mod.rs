//! Exhaustive verification of the counting results.
//!
//! Each result is a [`Check`] registered by id in a [`CheckRegistry`]. A
//! check produces evidence rows for one `n` at a time; the [`Verifier`]
//! validates the requested range, runs the rows, and assembles a
//! [`VerificationReport`]. Scan summaries are cached in the
//! [`CheckContext`] so that checks sharing a family do not rescan it.

mod checks;

use std::collections::HashMap;
use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::sync::{Arc, Mutex};
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

use crate::analysis::{scan_each, ScanConfig, ScanSummary};
use crate::error::{Error, Result};
use crate::strategy::StrategyClass;

pub use checks::{builtin_checks, sequence_checks};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// Every row holds, and the check concerns a known misprint in the
    /// published statement.
    ErratumNoted,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::ErratumNoted => "erratum-noted",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub n: usize,
    /// Distinguishes several rows for the same `n`, e.g. the strategy class.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub observed: Value,
    pub expected: Value,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

impl ReportRow {
    pub fn new(n: usize, observed: Value, expected: Value, ok: bool) -> Self {
        ReportRow { n, label: None, observed, expected, ok, counterexample: None }
    }

    pub fn label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn counterexample(mut self, counterexample: Option<String>) -> Self {
        self.counterexample = counterexample;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub id: String,
    pub range: [usize; 2],
    pub rows: Vec<ReportRow>,
    pub status: Status,
    /// Wall time; omitted when timing is disabled for reproducible output.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seconds: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl VerificationReport {
    /// True unless some row failed.
    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    pub fn first_failure(&self) -> Option<&ReportRow> {
        self.rows.iter().find(|r| !r.ok)
    }

    pub fn without_timing(mut self) -> Self {
        self.seconds = None;
        self
    }

    pub fn render_text(&self) -> String {
        let mut out =
            format!("{} n={}..{} {}", self.id, self.range[0], self.range[1], self.status.as_str().to_uppercase());
        if let Some(s) = self.seconds {
            let _ = write!(out, " ({s:.3}s)");
        }
        out.push('\n');
        for row in &self.rows {
            let label = row.label.as_deref().map(|l| format!(" [{l}]")).unwrap_or_default();
            let mark = if row.ok { "ok" } else { "FAIL" };
            let _ = writeln!(out, "  n={}{label} {mark} observed={} expected={}", row.n, row.observed, row.expected);
            if let Some(c) = &row.counterexample {
                let _ = writeln!(out, "    counterexample: {c}");
            }
        }
        for note in &self.notes {
            let _ = writeln!(out, "  note: {note}");
        }
        out
    }
}

/// One verifiable result.
pub trait Check: Send + Sync {
    fn id(&self) -> &'static str;

    fn title(&self) -> &'static str;

    /// Range used when the caller gives none.
    fn default_range(&self) -> RangeInclusive<usize>;

    /// Widest range accepted under the given context.
    fn limits(&self, ctx: &CheckContext) -> RangeInclusive<usize>;

    fn rows(&self, n: usize, ctx: &CheckContext) -> Result<Vec<ReportRow>>;

    /// Set when the range touches a misprint this check documents.
    fn erratum(&self, _range: &RangeInclusive<usize>) -> Option<&'static str> {
        None
    }
}

#[derive(Default)]
pub struct CheckRegistry {
    checks: Vec<Box<dyn Check>>,
}

impl CheckRegistry {
    pub fn empty() -> Self {
        CheckRegistry::default()
    }

    pub fn builtin() -> Self {
        let mut registry = CheckRegistry::empty();
        for check in builtin_checks() {
            registry.register(check);
        }
        registry
    }

    /// Adds a check, replacing any with the same id.
    pub fn register(&mut self, check: Box<dyn Check>) {
        self.checks.retain(|c| c.id() != check.id());
        self.checks.push(check);
    }

    pub fn get(&self, id: &str) -> Option<&dyn Check> {
        self.checks.iter().find(|c| c.id() == id).map(|c| c.as_ref())
    }

    pub fn ids(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.checks.iter().map(|c| c.id())
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Check> {
        self.checks.iter().map(|c| c.as_ref())
    }
}

#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    pub scan: ScanConfig,
    /// Unlocks the expensive scales: cyclic scans at `n = 7` and deranged
    /// scans at `n = 6`. Implies `scan.allow_large`.
    pub extended: bool,
}

pub struct CheckContext {
    options: VerifyOptions,
    scans: Mutex<HashMap<(usize, StrategyClass), Arc<ScanSummary>>>,
}

impl CheckContext {
    pub fn new(options: VerifyOptions) -> Self {
        CheckContext { options, scans: Mutex::new(HashMap::new()) }
    }

    pub fn options(&self) -> &VerifyOptions {
        &self.options
    }

    /// Largest length scanned for a class.
    pub fn class_limit(&self, class: StrategyClass) -> usize {
        match (class, self.options.extended) {
            (StrategyClass::Cyclic, false) => 6,
            (StrategyClass::Cyclic, true) => 7,
            (StrategyClass::Deranged, false) => 5,
            (StrategyClass::Deranged, true) => 6,
            (StrategyClass::Inductive, _) => 8,
        }
    }

    /// Classes whose scans are in reach at length `n`.
    pub fn classes_at(&self, n: usize) -> Vec<StrategyClass> {
        StrategyClass::ALL
            .into_iter()
            .filter(|&c| n <= self.class_limit(c) && (c != StrategyClass::Inductive || n >= 3))
            .collect()
    }

    /// Summary of the scan over a family, computed once per context.
    pub fn summary(&self, n: usize, class: StrategyClass) -> Result<Arc<ScanSummary>> {
        if let Some(s) = self.scans.lock().unwrap().get(&(n, class)) {
            return Ok(s.clone());
        }
        let mut config = self.options.scan.clone();
        config.allow_large |= self.options.extended;
        let summary = Arc::new(scan_each(n, class, &config, |_| {})?);
        self.scans.lock().unwrap().insert((n, class), summary.clone());
        Ok(summary)
    }
}

/// Runs registered checks against one shared context.
pub struct Verifier {
    registry: CheckRegistry,
    sequences: CheckRegistry,
    ctx: CheckContext,
}

impl Verifier {
    pub fn new(options: VerifyOptions) -> Self {
        Verifier::with_registry(CheckRegistry::builtin(), options)
    }

    pub fn with_registry(registry: CheckRegistry, options: VerifyOptions) -> Self {
        let mut sequences = CheckRegistry::empty();
        for check in sequence_checks() {
            sequences.register(check);
        }
        Verifier { registry, sequences, ctx: CheckContext::new(options) }
    }

    pub fn registry(&self) -> &CheckRegistry {
        &self.registry
    }

    pub fn context(&self) -> &CheckContext {
        &self.ctx
    }

    /// Runs check `id` over `range`, or over its default range.
    pub fn verify(&self, id: &str, range: Option<RangeInclusive<usize>>) -> Result<VerificationReport> {
        let check = self.registry.get(id).ok_or_else(|| Error::UnknownCheck(id.to_string()))?;
        run(check, range, &self.ctx)
    }

    /// Regenerates a named reference sequence over its full published range.
    pub fn check_sequence(&self, name: &str) -> Result<VerificationReport> {
        let check = self.sequences.get(name).ok_or_else(|| Error::UnknownSequence(name.to_string()))?;
        run(check, None, &self.ctx)
    }

    pub fn sequence_names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.sequences.ids()
    }
}

fn run(check: &dyn Check, range: Option<RangeInclusive<usize>>, ctx: &CheckContext) -> Result<VerificationReport> {
    let range = range.unwrap_or_else(|| check.default_range());
    let limits = check.limits(ctx);
    if range.is_empty() || range.start() < limits.start() || range.end() > limits.end() {
        let hint = if ctx.options.extended { "" } else { " (larger scans need the extended option)" };
        return Err(Error::OutOfRange {
            what: "verification range",
            detail: format!(
                "{} accepts n in {}..={}{hint}, got {}..={}",
                check.id(),
                limits.start(),
                limits.end(),
                range.start(),
                range.end()
            ),
        });
    }
    let start = Instant::now();
    let mut rows = Vec::new();
    for n in range.clone() {
        rows.extend(check.rows(n, ctx)?);
    }
    let erratum = check.erratum(&range);
    let status = if rows.iter().any(|r| !r.ok) {
        Status::Fail
    } else if erratum.is_some() {
        Status::ErratumNoted
    } else {
        Status::Pass
    };
    Ok(VerificationReport {
        id: check.id().to_string(),
        range: [*range.start(), *range.end()],
        rows,
        status,
        seconds: Some(start.elapsed().as_secs_f64()),
        notes: erratum.map(|e| vec![e.to_string()]).unwrap_or_default(),
    })
}
