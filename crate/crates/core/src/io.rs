//! Text format for fusion rings.
//!
//! Line-based, whitespace-insensitive within a line, `#` starts a comment:
//!
//! ```text
//! format = 1
//! ring fibonacci
//! rank = 2
//! unit = 0
//! dual = [0, 1]
//! N[1,1] = {0:1, 1:1}
//! ```
//!
//! Product rows `N[i,j]` list only nonzero coefficients. Rows with `i = 0` or
//! `j = 0` may be omitted (filled in from the unit axiom). Any other omitted
//! row is taken as all-zero, which the validator then reports against the
//! duality axiom — so a missing row is an actionable error, not silence.
//! Empty braces and duplicate declarations are rejected outright.

use crate::ring::{AxiomViolation, FusionRing, StructuralError, MAX_COEFF, MAX_RANK};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}, column {col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("line {line}: duplicate declaration of {what}")]
    Duplicate { line: usize, what: String },
    #[error("missing required declaration: {what}")]
    Missing { what: &'static str },
    #[error("ring data is malformed: {0}")]
    Structural(#[from] StructuralError),
    #[error("ring violates fusion axioms ({} finding(s)); first: {}", violations.len(), violations[0])]
    Invalid { violations: Vec<AxiomViolation> },
}

/// Parse and validate. Axiom violations are reported as [`ParseError::Invalid`].
pub fn parse(text: &str) -> Result<FusionRing, ParseError> {
    let ring = parse_unvalidated(text)?;
    let violations = ring.validate();
    if violations.is_empty() {
        Ok(ring)
    } else {
        Err(ParseError::Invalid { violations })
    }
}

/// Parse the grammar only; the result may violate ring axioms.
pub fn parse_unvalidated(text: &str) -> Result<FusionRing, ParseError> {
    let mut name: Option<String> = None;
    let mut rank: Option<usize> = None;
    let mut unit_seen = false;
    let mut format_seen = false;
    let mut dual: Option<(Vec<usize>, usize)> = None;
    // (i, j) -> (line, sparse row)
    let mut rows: BTreeMap<(usize, usize), (usize, Vec<(usize, u64)>)> = BTreeMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let body = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        if body.trim().is_empty() {
            continue;
        }
        let mut cur = Cursor::new(body, line_no);
        cur.skip_ws();
        let keyword = cur.ident()?;
        match keyword.as_str() {
            "format" => {
                if format_seen {
                    return Err(ParseError::Duplicate { line: line_no, what: "format".into() });
                }
                format_seen = true;
                cur.expect('=')?;
                let col = cur.col();
                let v = cur.number()?;
                if v != 1 {
                    return Err(cur.fail_at(col, format!("unsupported format version {v}")));
                }
            }
            "ring" => {
                if name.is_some() {
                    return Err(ParseError::Duplicate { line: line_no, what: "ring".into() });
                }
                name = Some(cur.name_token()?);
            }
            "rank" => {
                if rank.is_some() {
                    return Err(ParseError::Duplicate { line: line_no, what: "rank".into() });
                }
                cur.expect('=')?;
                let col = cur.col();
                let v = cur.number()? as usize;
                if v == 0 || v > MAX_RANK as u64 as usize {
                    return Err(cur.fail_at(col, format!("rank must be between 1 and {MAX_RANK}")));
                }
                rank = Some(v);
            }
            "unit" => {
                if unit_seen {
                    return Err(ParseError::Duplicate { line: line_no, what: "unit".into() });
                }
                unit_seen = true;
                cur.expect('=')?;
                let col = cur.col();
                let v = cur.number()?;
                if v != 0 {
                    return Err(cur.fail_at(col, "the unit must be basis index 0".into()));
                }
            }
            "dual" => {
                if dual.is_some() {
                    return Err(ParseError::Duplicate { line: line_no, what: "dual".into() });
                }
                cur.expect('=')?;
                cur.expect('[')?;
                let mut entries = Vec::new();
                loop {
                    entries.push(cur.number()? as usize);
                    if cur.peek() == Some(',') {
                        cur.expect(',')?;
                    } else {
                        break;
                    }
                }
                cur.expect(']')?;
                dual = Some((entries, line_no));
            }
            "N" => {
                cur.expect('[')?;
                let i = cur.number()? as usize;
                cur.expect(',')?;
                let j = cur.number()? as usize;
                cur.expect(']')?;
                cur.expect('=')?;
                cur.expect('{')?;
                if cur.peek() == Some('}') {
                    return Err(cur.fail_here(
                        "empty product row; a fusion product always has at least one term".into(),
                    ));
                }
                let mut entries: Vec<(usize, u64)> = Vec::new();
                loop {
                    let col = cur.col();
                    let m = cur.number()? as usize;
                    cur.expect(':')?;
                    let c = cur.number()?;
                    if c > MAX_COEFF {
                        return Err(cur.fail_at(col, format!("coefficient {c} exceeds maximum {MAX_COEFF}")));
                    }
                    if entries.iter().any(|&(m0, _)| m0 == m) {
                        return Err(cur.fail_at(col, format!("duplicate target index {m} in N[{i},{j}]")));
                    }
                    entries.push((m, c));
                    if cur.peek() == Some(',') {
                        cur.expect(',')?;
                    } else {
                        break;
                    }
                }
                cur.expect('}')?;
                if rows.contains_key(&(i, j)) {
                    return Err(ParseError::Duplicate { line: line_no, what: format!("N[{i},{j}]") });
                }
                rows.insert((i, j), (line_no, entries));
            }
            other => {
                return Err(cur.fail_here(format!("unknown declaration `{other}`")));
            }
        }
        cur.expect_end()?;
    }

    let name = name.ok_or(ParseError::Missing { what: "ring <name>" })?;
    let rank = rank.ok_or(ParseError::Missing { what: "rank = <r>" })?;
    if !unit_seen {
        return Err(ParseError::Missing { what: "unit = 0" });
    }
    let (dual, dual_line) = dual.ok_or(ParseError::Missing { what: "dual = [...]" })?;
    if dual.len() != rank {
        return Err(ParseError::Syntax {
            line: dual_line,
            col: 1,
            message: format!("dual table has {} entries, expected rank {}", dual.len(), rank),
        });
    }
    if let Some(&bad) = dual.iter().find(|&&v| v >= rank) {
        return Err(ParseError::Syntax {
            line: dual_line,
            col: 1,
            message: format!("dual entry {bad} is out of range for rank {rank}"),
        });
    }

    let mut tensor = vec![0u64; rank * rank * rank];
    for (&(i, j), &(line, ref entries)) in &rows {
        if i >= rank || j >= rank {
            return Err(ParseError::Syntax {
                line,
                col: 1,
                message: format!("product row N[{i},{j}] is out of range for rank {rank}"),
            });
        }
        for &(m, c) in entries {
            if m >= rank {
                return Err(ParseError::Syntax {
                    line,
                    col: 1,
                    message: format!("target index {m} in N[{i},{j}] is out of range for rank {rank}"),
                });
            }
            tensor[(i * rank + j) * rank + m] = c;
        }
    }
    // Unit rows not given explicitly follow from the unit axiom.
    for k in 0..rank {
        if !rows.contains_key(&(0, k)) {
            tensor[k * rank + k] = 1;
        }
        if k > 0 && !rows.contains_key(&(k, 0)) {
            tensor[(k * rank) * rank + k] = 1;
        }
    }

    Ok(FusionRing::new(name, rank, dual, tensor)?)
}

/// Canonical text form; `parse(serialize(r))` is structurally identical to `r`
/// for any ring whose name fits the token grammar.
pub fn serialize(ring: &FusionRing) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "format = 1");
    let name: String = ring
        .name()
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-') { c } else { '_' })
        .collect();
    let _ = writeln!(out, "ring {}", if name.is_empty() { "unnamed" } else { &name });
    let r = ring.rank();
    let _ = writeln!(out, "rank = {r}");
    let _ = writeln!(out, "unit = 0");
    let duals: Vec<String> = (0..r).map(|i| ring.dual(i).to_string()).collect();
    let _ = writeln!(out, "dual = [{}]", duals.join(", "));
    for i in 1..r {
        for j in 1..r {
            let row = ring.basis_product(i, j);
            let terms: Vec<String> = row
                .iter()
                .enumerate()
                .filter(|&(_, &c)| c != 0)
                .map(|(m, &c)| format!("{m}:{c}"))
                .collect();
            if !terms.is_empty() {
                let _ = writeln!(out, "N[{i},{j}] = {{{}}}", terms.join(", "));
            }
        }
    }
    out
}

/// Character cursor over one line, tracking 1-based column positions.
struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    _text: std::marker::PhantomData<&'a str>,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str, line: usize) -> Self {
        Cursor { chars: s.chars().collect(), pos: 0, line, _text: std::marker::PhantomData }
    }

    fn col(&self) -> usize {
        self.pos + 1
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn fail_here(&self, message: String) -> ParseError {
        ParseError::Syntax { line: self.line, col: self.col(), message }
    }

    fn fail_at(&self, col: usize, message: String) -> ParseError {
        ParseError::Syntax { line: self.line, col, message }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        self.skip_ws();
        match self.chars.get(self.pos) {
            Some(&got) if got == c => {
                self.pos += 1;
                Ok(())
            }
            Some(&got) => Err(self.fail_here(format!("expected `{c}`, found `{got}`"))),
            None => Err(self.fail_here(format!("expected `{c}`, found end of line"))),
        }
    }

    fn expect_end(&mut self) -> Result<(), ParseError> {
        self.skip_ws();
        match self.chars.get(self.pos) {
            None => Ok(()),
            Some(&c) => Err(self.fail_here(format!("unexpected trailing `{c}`"))),
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_') {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.fail_here("expected a declaration keyword".into()));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn name_token(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self
            .chars
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-'))
        {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.fail_here("expected a ring name".into()));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn number(&mut self) -> Result<u64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let mut value: u64 = 0;
        while let Some(&c) = self.chars.get(self.pos) {
            if let Some(d) = c.to_digit(10) {
                value = value
                    .checked_mul(10)
                    .and_then(|v| v.checked_add(d as u64))
                    .ok_or_else(|| self.fail_at(start + 1, "number is too large".into()))?;
                self.pos += 1;
            } else {
                break;
            }
        }
        if self.pos == start {
            return Err(self.fail_here("expected a number".into()));
        }
        Ok(value)
    }
}
