//! Structured criterion reports.
//!
//! Every numeric quantity is rendered as a fixed-width decimal string so that
//! reports are self-contained evidence: rounding is visible, output is
//! byte-identical across runs with the same configuration, and no binary
//! float ever appears. A `fail` verdict always carries at least one witness;
//! a `pass` verdict carries none (soft findings go into `notes`).

use crate::ap::{ApComplex, ApReal, Context, Tolerance};
use serde::Serialize;

/// Decimal digits used for report values.
pub const REPORT_DIGITS: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

/// One offending (or unresolved) index tuple with its evaluated value and the
/// margin by which it crosses the acceptance threshold.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Witness {
    pub indices: Vec<usize>,
    pub value: String,
    pub margin: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Witness {
    pub fn new(indices: Vec<usize>, value: String, margin: String) -> Self {
        Witness { indices, value, margin, detail: None }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CriterionReport {
    pub ring: String,
    pub criterion: String,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    pub precision_bits: u32,
    pub tolerance: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CriterionReport {
    pub fn pass(ring: &str, criterion: impl Into<String>, ctx: &Context) -> Self {
        CriterionReport {
            ring: ring.to_string(),
            criterion: criterion.into(),
            verdict: Verdict::Pass,
            witnesses: Vec::new(),
            precision_bits: ctx.precision,
            tolerance: fmt_tolerance(ctx.tolerance),
            notes: Vec::new(),
        }
    }

    pub fn push_failure(&mut self, w: Witness) {
        self.witnesses.push(w);
        self.verdict = Verdict::Fail;
    }

    /// Mark unresolved unless a failure has already been recorded.
    pub fn mark_inconclusive(&mut self) {
        if self.verdict != Verdict::Fail {
            self.verdict = Verdict::Inconclusive;
        }
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }
}

pub fn fmt_real(x: &ApReal) -> String {
    x.to_decimal(REPORT_DIGITS)
}

pub fn fmt_complex(z: &ApComplex) -> String {
    format!("({}, {})", fmt_real(&z.re), fmt_real(&z.im))
}

pub fn fmt_tolerance(t: Tolerance) -> String {
    match t {
        Tolerance::PowTwo(k) => format!("2^{k}"),
        Tolerance::PowTen(k) => format!("10^{k}"),
    }
}

/// Render a batch of reports as a JSON array (stable field order, trailing
/// newline).
pub fn report_json(reports: &[CriterionReport]) -> String {
    let mut s = serde_json::to_string_pretty(reports).expect("reports are serializable");
    s.push('\n');
    s
}
