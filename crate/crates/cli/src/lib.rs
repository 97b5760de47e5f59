//! Report pipeline behind the `fusionring` binary.
//!
//! Turns one ring source plus a [`RunConfig`] into an ordered list of
//! criterion reports: axioms first (failure short-circuits the rest), then
//! the coefficient inequalities, the positivity scans, and the integrality
//! checks. Engine-level breakdowns (non-convergence, collision budgets)
//! surface as inconclusive reports, never as silent passes. Rendering is
//! deterministic so identical inputs give byte-identical output.

use fusionring::ap::{Context, Tolerance};
use fusionring::catalog;
use fusionring::criteria;
use fusionring::integrality::{self, SExp};
use fusionring::io;
use fusionring::oracle;
use fusionring::report::{fmt_real, report_json, CriterionReport, Verdict};
use fusionring::ring::{AxiomViolation, FusionRing};
use fusionring::spectra::{self, Spectrum};

pub const DEFAULT_PRECISION: u32 = 256;
pub const DEFAULT_TOL_EXP: i64 = -40;
pub const DEFAULT_NMAX: usize = 3;
pub const DEFAULT_S_LIST: &str = "0,1/2,1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selection {
    All,
    Axioms,
    Schur,
    Lpw,
    LpwGeneral,
    Isaacs,
    StrongIsaacs,
}

impl Selection {
    pub fn parse(text: &str) -> Result<Self, String> {
        Ok(match text {
            "all" => Selection::All,
            "axioms" => Selection::Axioms,
            "schur" => Selection::Schur,
            "lpw" => Selection::Lpw,
            "lpw-general" => Selection::LpwGeneral,
            "isaacs" => Selection::Isaacs,
            "strong-isaacs" => Selection::StrongIsaacs,
            other => {
                return Err(format!(
                    "unknown criterion `{other}` (expected axioms|schur|lpw|lpw-general|isaacs|strong-isaacs|all)"
                ))
            }
        })
    }

    fn wants(self, which: Selection) -> bool {
        self == Selection::All || self == which
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub precision: u32,
    pub tol_exp: i64,
    pub nmax: usize,
    pub s_values: Vec<SExp>,
    pub selection: Selection,
    pub seed: Option<u64>,
    pub maxdeg: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            precision: DEFAULT_PRECISION,
            tol_exp: DEFAULT_TOL_EXP,
            nmax: DEFAULT_NMAX,
            s_values: parse_s_values(DEFAULT_S_LIST).unwrap(),
            selection: Selection::All,
            seed: None,
            maxdeg: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.precision < 64 {
            return Err(format!("precision {} is below the minimum of 64 bits", self.precision));
        }
        if !(3..=6).contains(&self.nmax) {
            return Err(format!("n must be between 3 and 6, got {}", self.nmax));
        }
        if self.tol_exp > -16 {
            return Err(format!(
                "tolerance exponent must be -16 or smaller, got {}",
                self.tol_exp
            ));
        }
        if self.s_values.is_empty() {
            return Err("the s list must not be empty".to_string());
        }
        Ok(())
    }

    pub fn context(&self) -> Context {
        let ctx = Context::new(self.precision).with_tolerance(Tolerance::PowTen(self.tol_exp));
        match self.seed {
            Some(s) => ctx.with_seed(s),
            None => ctx,
        }
    }
}

/// Parse a comma-separated list of nonnegative rationals like `0,1/2,1`.
pub fn parse_s_values(text: &str) -> Result<Vec<SExp>, String> {
    let mut out = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            return Err("empty entry in s list".to_string());
        }
        let (p, q) = match part.split_once('/') {
            Some((p, q)) => {
                let p: i64 = p.trim().parse().map_err(|_| format!("bad numerator in `{part}`"))?;
                let q: i64 = q.trim().parse().map_err(|_| format!("bad denominator in `{part}`"))?;
                (p, q)
            }
            None => (part.parse().map_err(|_| format!("bad s value `{part}`"))?, 1),
        };
        if q <= 0 {
            return Err(format!("denominator must be positive in `{part}`"));
        }
        if p < 0 {
            return Err(format!("s must be nonnegative, got `{part}`"));
        }
        out.push(SExp::new(p, q));
    }
    Ok(out)
}

/// A ring source that got past the grammar: either fully valid, or carrying
/// axiom violations that the `check` pipeline reports as a failing criterion.
#[derive(Debug)]
pub enum Loaded {
    Ready(FusionRing),
    AxiomsViolated { name: String, violations: Vec<AxiomViolation> },
}

/// Resolve `catalog:<name>` or a file path. Lexical and structural errors
/// (unreadable file, bad grammar, out-of-range tables) are input errors;
/// axiom violations are not — they become a failing axioms report.
pub fn load_ring(source: &str) -> Result<Loaded, String> {
    if let Some(name) = source.strip_prefix("catalog:") {
        return match catalog::catalog_ring(name) {
            Some(ring) => Ok(Loaded::Ready(ring)),
            None => Err(format!("unknown catalog ring `{name}` (try `catalog list`)")),
        };
    }
    let text = std::fs::read_to_string(source)
        .map_err(|e| format!("cannot read `{source}`: {e}"))?;
    let ring = io::parse_unvalidated(&text).map_err(|e| format!("{source}: {e}"))?;
    let violations = ring.validate();
    if violations.is_empty() {
        Ok(Loaded::Ready(ring))
    } else {
        Ok(Loaded::AxiomsViolated { name: ring.name().to_string(), violations })
    }
}

fn stalled(ring: &str, criterion: &str, ctx: &Context, why: String) -> CriterionReport {
    let mut rep = CriterionReport::pass(ring, criterion, ctx);
    rep.mark_inconclusive();
    rep.note(why);
    rep
}

/// Run the selected criteria in deterministic order. A failing axioms check
/// short-circuits everything else; engine breakdowns yield inconclusive
/// reports for the affected criteria.
pub fn run_check(ring: &FusionRing, cfg: &RunConfig) -> Vec<CriterionReport> {
    let ctx = cfg.context();
    let sel = cfg.selection;
    let mut out = Vec::new();

    if sel.wants(Selection::Axioms) {
        let rep = criteria::axioms_report(ring.name(), &ring.validate(), &ctx);
        let failed = rep.verdict == Verdict::Fail;
        out.push(rep);
        if failed {
            return out;
        }
    }

    let commutative = ring.is_commutative();
    let needs_fp = sel.wants(Selection::Schur)
        || sel.wants(Selection::LpwGeneral)
        || (sel.wants(Selection::Lpw) && !commutative);
    let fp = if needs_fp { Some(spectra::fp_dimensions(ring, &ctx)) } else { None };

    if sel.wants(Selection::Schur) {
        match fp.as_ref().unwrap() {
            Ok(fp) => out.push(criteria::schur_inequalities(ring, fp, &ctx)),
            Err(e) => out.push(stalled(
                ring.name(),
                "schur",
                &ctx,
                format!("dimension computation stalled: {e}"),
            )),
        }
    }

    let needs_spectrum = commutative
        && (sel.wants(Selection::Lpw)
            || sel.wants(Selection::Isaacs)
            || sel.wants(Selection::StrongIsaacs));
    let spectrum: Option<Result<Spectrum, _>> =
        if needs_spectrum { Some(spectra::character_table(ring, &ctx)) } else { None };

    if sel.wants(Selection::Lpw) && commutative {
        match spectrum.as_ref().unwrap() {
            Ok(sp) => {
                for n in 3..=cfg.nmax {
                    out.push(criteria::lpw_positivity(ring, sp, n, &ctx));
                }
            }
            Err(e) => out.push(stalled(
                ring.name(),
                "lpw",
                &ctx,
                format!("character table computation stalled: {e}"),
            )),
        }
    }

    let run_general = sel.wants(Selection::LpwGeneral) || (sel.wants(Selection::Lpw) && !commutative);
    if run_general {
        let routed = sel.wants(Selection::Lpw) && !commutative;
        match fp.as_ref().unwrap() {
            Ok(fp) => match spectra::decompose_regular(ring, &ctx) {
                Ok(set) => {
                    for n in 3..=cfg.nmax {
                        let mut rep = criteria::lpw_general(ring, &set, fp, n, &ctx, None);
                        if routed {
                            rep.note(
                                "ring is noncommutative; the character-scan positivity check ran as this product-vector search",
                            );
                        }
                        out.push(rep);
                    }
                }
                Err(e) => out.push(stalled(
                    ring.name(),
                    "lpw-general",
                    &ctx,
                    format!("regular decomposition stalled: {e}"),
                )),
            },
            Err(e) => out.push(stalled(
                ring.name(),
                "lpw-general",
                &ctx,
                format!("dimension computation stalled: {e}"),
            )),
        }
    }

    if sel.wants(Selection::Isaacs) {
        if !commutative {
            for s in &cfg.s_values {
                let mut rep = stalled(
                    ring.name(),
                    "isaacs",
                    &ctx,
                    "integrality criteria are defined through the character table and require a commutative ring"
                        .to_string(),
                );
                rep.note(format!("s = {s}"));
                out.push(rep);
            }
        } else {
            match spectrum.as_ref().unwrap() {
                Ok(sp) => {
                    for &s in &cfg.s_values {
                        let maxdeg = cfg
                            .maxdeg
                            .unwrap_or_else(|| integrality::isaacs_default_maxdeg(ring.rank(), s));
                        out.push(integrality::isaacs_check(ring, sp, s, maxdeg, &ctx));
                    }
                }
                Err(e) => out.push(stalled(
                    ring.name(),
                    "isaacs",
                    &ctx,
                    format!("character table computation stalled: {e}"),
                )),
            }
        }
    }

    if sel.wants(Selection::StrongIsaacs) {
        if !commutative {
            out.push(stalled(
                ring.name(),
                "strong-isaacs",
                &ctx,
                "integrality criteria are defined through the character table and require a commutative ring"
                    .to_string(),
            ));
        } else {
            match spectrum.as_ref().unwrap() {
                Ok(sp) => {
                    let maxdeg = cfg
                        .maxdeg
                        .unwrap_or_else(|| integrality::strongly_default_maxdeg(ring.rank()));
                    out.push(integrality::strongly_isaacs_check(ring, sp, cfg.nmax, maxdeg, &ctx));
                }
                Err(e) => out.push(stalled(
                    ring.name(),
                    "strong-isaacs",
                    &ctx,
                    format!("character table computation stalled: {e}"),
                )),
            }
        }
    }

    out
}

/// Reports for a source whose axioms already failed at load time.
pub fn axioms_failure_reports(name: &str, violations: &[AxiomViolation], cfg: &RunConfig) -> Vec<CriterionReport> {
    let ctx = cfg.context();
    vec![criteria::axioms_report(name, violations, &ctx)]
}

/// 0 = all pass, 1 = any fail, 2 = inconclusive present without fails.
pub fn exit_code(reports: &[CriterionReport]) -> i32 {
    if reports.iter().any(|r| r.verdict == Verdict::Fail) {
        1
    } else if reports.iter().any(|r| r.verdict == Verdict::Inconclusive) {
        2
    } else {
        0
    }
}

fn verdict_word(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "PASS",
        Verdict::Fail => "FAIL",
        Verdict::Inconclusive => "INCONCLUSIVE",
    }
}

pub fn render_text(reports: &[CriterionReport]) -> String {
    let mut out = String::new();
    for rep in reports {
        out.push_str(&format!(
            "{} {} on {} (precision {} bits, tolerance {})\n",
            verdict_word(rep.verdict),
            rep.criterion,
            rep.ring,
            rep.precision_bits,
            rep.tolerance
        ));
        for w in &rep.witnesses {
            out.push_str(&format!("  witness {:?}\n", w.indices));
            out.push_str(&format!("    value  = {}\n", w.value));
            out.push_str(&format!("    margin = {}\n", w.margin));
            if let Some(d) = &w.detail {
                out.push_str(&format!("    {d}\n"));
            }
        }
        for n in &rep.notes {
            out.push_str(&format!("  note: {n}\n"));
        }
    }
    let pass = reports.iter().filter(|r| r.verdict == Verdict::Pass).count();
    let fail = reports.iter().filter(|r| r.verdict == Verdict::Fail).count();
    let inc = reports.len() - pass - fail;
    out.push_str(&format!(
        "summary: {pass} pass, {fail} fail, {inc} inconclusive\n"
    ));
    out
}

pub fn render_reports(reports: &[CriterionReport], json: bool) -> String {
    if json {
        report_json(reports)
    } else {
        render_text(reports)
    }
}

/// Spectral data of a ring as a JSON value (characters only when the ring is
/// commutative; block shapes otherwise).
pub fn spectra_value(ring: &FusionRing, ctx: &Context) -> Result<serde_json::Value, String> {
    use serde_json::json;
    let fp = spectra::fp_dimensions(ring, ctx).map_err(|e| e.to_string())?;
    let mut value = json!({
        "ring": ring.name(),
        "rank": ring.rank(),
        "commutative": ring.is_commutative(),
        "precision_bits": ctx.precision,
        "fpdim": fmt_real(&fp.fpdim),
        "dims": fp.dims.iter().map(fmt_real).collect::<Vec<_>>(),
    });
    let obj = value.as_object_mut().unwrap();
    if ring.is_commutative() {
        let sp = spectra::character_table(ring, ctx).map_err(|e| e.to_string())?;
        obj.insert(
            "codegrees".into(),
            json!(sp.codegrees.iter().map(fmt_real).collect::<Vec<_>>()),
        );
        obj.insert("conjugate_pairing".into(), json!(sp.conj_pairing));
        obj.insert("positive_row".into(), json!(sp.fp_index));
        let chars: Vec<Vec<serde_json::Value>> = sp
            .chars
            .iter()
            .map(|row| {
                row.iter()
                    .map(|z| json!({"re": fmt_real(&z.re), "im": fmt_real(&z.im)}))
                    .collect()
            })
            .collect();
        obj.insert("characters".into(), json!(chars));
    } else {
        let set = spectra::decompose_regular(ring, ctx).map_err(|e| e.to_string())?;
        let blocks: Vec<serde_json::Value> = set
            .irreps
            .iter()
            .map(|b| json!({"dim": b.dim, "codegree": fmt_real(&b.codegree)}))
            .collect();
        obj.insert("blocks".into(), json!(blocks));
    }
    Ok(value)
}

pub fn spectra_text(ring: &FusionRing, ctx: &Context) -> Result<String, String> {
    let v = spectra_value(ring, ctx)?;
    let mut out = String::new();
    out.push_str(&format!(
        "ring {} (rank {}, {})\n",
        v["ring"].as_str().unwrap(),
        v["rank"],
        if v["commutative"].as_bool().unwrap() { "commutative" } else { "noncommutative" }
    ));
    out.push_str(&format!("fpdim = {}\n", v["fpdim"].as_str().unwrap()));
    for (i, d) in v["dims"].as_array().unwrap().iter().enumerate() {
        out.push_str(&format!("dim[{i}] = {}\n", d.as_str().unwrap()));
    }
    if let Some(cods) = v.get("codegrees") {
        for (i, c) in cods.as_array().unwrap().iter().enumerate() {
            out.push_str(&format!("codegree[{i}] = {}\n", c.as_str().unwrap()));
        }
        out.push_str(&format!("conjugate pairing = {}\n", v["conjugate_pairing"]));
        out.push_str(&format!("positive row = {}\n", v["positive_row"]));
        out.push_str("characters (row = character, column = basis element):\n");
        for (i, row) in v["characters"].as_array().unwrap().iter().enumerate() {
            out.push_str(&format!("  row {i}:\n"));
            for (j, z) in row.as_array().unwrap().iter().enumerate() {
                out.push_str(&format!(
                    "    [{j}] re = {}\n        im = {}\n",
                    z["re"].as_str().unwrap(),
                    z["im"].as_str().unwrap()
                ));
            }
        }
    }
    if let Some(blocks) = v.get("blocks") {
        out.push_str("irreducible blocks of the regular representation:\n");
        for (i, b) in blocks.as_array().unwrap().iter().enumerate() {
            out.push_str(&format!(
                "  block {i}: dim = {}, codegree = {}\n",
                b["dim"],
                b["codegree"].as_str().unwrap()
            ));
        }
    }
    Ok(out)
}

/// Run the S3 cross-check and render a text summary; the flag says whether
/// every residual stayed below tolerance.
pub fn oracle_s3_report(nmax: usize, ctx: &Context) -> Result<(String, bool), String> {
    let g = oracle::s3();
    let ring = catalog::catalog_ring("rep_s3").expect("catalog ring present");
    let sp = spectra::character_table(&ring, ctx).map_err(|e| e.to_string())?;
    let check = oracle::crosscheck_rep(&g, &sp, nmax, None, ctx).map_err(|e| e.to_string())?;

    let mut out = String::new();
    let sizes: Vec<usize> = g.classes.iter().map(|c| c.len()).collect();
    out.push_str(&format!("group S3: order {}, class sizes {:?}\n", g.order(), sizes));
    out.push_str(&format!(
        "matched classes to characters of catalog ring rep_s3: {:?}\n",
        check.correspondence
    ));
    for (tuple, label) in [
        (vec![1usize, 1, 1], "three transpositions"),
        (vec![1, 1, 0], "two transpositions and the identity"),
        (vec![2, 2, 2], "three three-cycles"),
    ] {
        out.push_str(&format!(
            "count for {label}: {}\n",
            g.count_tuples(&tuple)
        ));
        let orbit = g.solution_orbit_check(&tuple);
        if !orbit.divisibility_ok {
            return Err(format!("orbit divisibility failed for {tuple:?}"));
        }
    }
    out.push_str(&format!(
        "checked {} class tuples for n = 3..={nmax}\n",
        check.tuples_checked
    ));
    out.push_str(&format!("max |count - J/dimC| = {}\n", fmt_real(&check.max_residual)));
    let ok = check.max_residual.within(&ctx.tol());
    out.push_str(if ok {
        "verdict: exact counts agree with the spectral invariants\n"
    } else {
        "verdict: MISMATCH between exact counts and spectral invariants\n"
    });
    Ok((out, ok))
}

pub fn catalog_list() -> String {
    let mut out = String::new();
    for (name, desc) in catalog::catalog_descriptions() {
        out.push_str(&format!("{name:<12} {desc}\n"));
    }
    out
}
