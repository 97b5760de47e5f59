//! Algebraic-integrality criteria on character data.
//!
//! Normalization: with only ring data available, the global dimension is
//! `dimC = fpdim` and each character gets `dimZ = dimC / codegree` (the
//! pseudounitary convention); reports say so. On top of that sit:
//! - [`lambda_s`]: the weighted character ratios
//!   `dimC^s dimZ^{1-s} chi(X) / d_X`;
//! - [`j_ns`]: the normalized invariants
//!   `dimC^{(n-2)s} (prod dimZ)^{1-s} I_n`;
//! - [`minimal_polynomial`]: an integer-relation search (lattice reduction
//!   over scaled power rows) deciding "is this value an algebraic integer",
//!   with layered guards so that a wrong yes/no is traded for inconclusive;
//! - [`isaacs_check`] / [`strongly_isaacs_check`]: per-value integrality
//!   scans, and [`isaacs_equivalence_check`], which re-verifies the spectral
//!   identity behind the equivalence theorem numerically.

use crate::ap::{ApComplex, ApReal, Context};
use crate::criteria::{invariant_in, multisets};
use crate::lll::lll_reduce;
use crate::report::{fmt_complex, fmt_real, CriterionReport, Verdict, Witness};
use crate::ring::FusionRing;
use crate::spectra::Spectrum;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::HashMap;
use thiserror::Error;

/// Exponent parameter `s`, an exact nonnegative rational.
pub type SExp = Ratio<i64>;

const MAX_NOTES: usize = 32;

#[derive(Debug, Error)]
pub enum IntegralityError {
    #[error("center dimension data is inconsistent: {0}")]
    Center(String),
}

/// Pseudounitary center dimensions: `dimc = fpdim`, `dimz[s] = dimc /
/// codegree_s` (so `dimz[s] * codegree_s = dimc` is re-certified).
#[derive(Clone, Debug)]
pub struct CenterDims {
    pub dimc: ApReal,
    pub dimz: Vec<ApReal>,
}

impl CenterDims {
    pub fn new(sp: &Spectrum, ctx: &Context) -> Result<Self, IntegralityError> {
        let dimc = sp.fpdim.clone();
        let check = ApReal::two_pow(-i64::from(ctx.precision / 2), ctx.fbits());
        let mut dimz = Vec::with_capacity(sp.rank());
        for (s, alpha) in sp.codegrees.iter().enumerate() {
            let z = dimc.div(alpha);
            if !z.is_positive() {
                return Err(IntegralityError::Center(format!("dimZ[{s}] is not positive")));
            }
            if !z.mul(alpha).sub(&dimc).within(&check.mul(&ApReal::one(ctx.fbits()).add(&dimc))) {
                return Err(IntegralityError::Center(format!("dimZ[{s}] * codegree != dimC")));
            }
            dimz.push(z);
        }
        Ok(CenterDims { dimc, dimz })
    }
}

fn pow_s(x: &ApReal, e: SExp) -> ApReal {
    x.pow_ratio(*e.numer(), *e.denom() as u32)
}

/// `lambda_s(rho, X) = dimC^s dimZ[rho]^{1-s} chi_rho(X) / d_X`.
pub fn lambda_s(sp: &Spectrum, cd: &CenterDims, s: SExp, rho: usize, x: usize) -> ApComplex {
    let one = SExp::one();
    let factor = pow_s(&cd.dimc, s).mul(&pow_s(&cd.dimz[rho], one - s)).div(&sp.dims[x]);
    sp.chars[rho][x].scale(&factor)
}

/// `J_{n,s} = dimC^{(n-2)s} (dimZ_1 ... dimZ_n)^{1-s} I_n`.
pub fn j_ns(sp: &Spectrum, cd: &CenterDims, s: SExp, slots: &[usize]) -> ApComplex {
    let n = slots.len();
    assert!(n >= 2);
    let one = SExp::one();
    let mut factor = pow_s(&cd.dimc, s * SExp::from_integer((n as i64) - 2));
    for &t in slots {
        factor = factor.mul(&pow_s(&cd.dimz[t], one - s));
    }
    invariant_in(sp, slots).scale(&factor)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntegralityVerdict {
    Yes,
    No,
    Inconclusive,
}

/// Lowest-degree certified integer relation for a numeric value.
#[derive(Clone, Debug)]
pub struct MinPolyResult {
    /// Coefficients `a_0..a_d`, primitive with positive leading coefficient;
    /// empty when inconclusive.
    pub coefficients: Vec<BigInt>,
    pub degree: usize,
    pub residual: ApReal,
    pub verdict: IntegralityVerdict,
}

impl MinPolyResult {
    pub fn polynomial_string(&self) -> String {
        poly_string(&self.coefficients)
    }
}

fn poly_string(coeffs: &[BigInt]) -> String {
    if coeffs.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, a) in coeffs.iter().enumerate().rev() {
        if a.is_zero() {
            continue;
        }
        let mag = a.abs();
        if out.is_empty() {
            if a.is_negative() {
                out.push('-');
            }
        } else if a.is_negative() {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let show_mag = !mag.is_one() || k == 0;
        if show_mag {
            out.push_str(&mag.to_string());
        }
        match k {
            0 => {}
            1 => out.push('x'),
            _ => out.push_str(&format!("x^{k}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn eval_with_powers(coeffs: &[BigInt], powers: &[ApComplex]) -> ApComplex {
    let fbits = powers[0].fbits();
    let mut acc = ApComplex::zero(fbits);
    for (k, a) in coeffs.iter().enumerate() {
        if !a.is_zero() {
            acc = acc.add(&powers[k].scale(&ApReal::from_bigint(a, fbits)));
        }
    }
    acc
}

/// Decide whether `v` is an algebraic integer by scanning degrees `1..=maxdeg`
/// for an integer relation among `(1, v, .., v^d)` via lattice reduction.
///
/// A relation is accepted only if it clears several guards: it must appear at
/// the lowest degree scanned, be primitive, have residual below a
/// height-normalized bound well under the spurious-relation floor of the
/// lattice embedding, and stay visibly nonzero at a perturbed evaluation
/// point. On acceptance the verdict is monicity; otherwise inconclusive —
/// precision exhaustion never produces a confident answer.
pub fn minimal_polynomial(v: &ApComplex, maxdeg: usize, ctx: &Context) -> MinPolyResult {
    assert!(maxdeg >= 1);
    let fbits = ctx.fbits();
    let prec = i64::from(ctx.precision);
    let scale_bits = i64::from(ctx.lattice_scale_bits());
    // Below the best residual a spurious lattice relation can reach
    // (about 2^{-prec/2 - 64}), far above what a genuine relation gives.
    let accept_base = ApReal::two_pow(-(prec / 2 + 96), fbits);
    let perturb_floor = ctx.relation_threshold();
    let delta = ApReal::two_pow(-prec / 8, fbits);
    let vp = ApComplex::new(v.re.add(&delta), v.im.add(&delta));

    let mut powers = vec![ApComplex::one(fbits)];
    let mut powers_p = vec![ApComplex::one(fbits)];
    for k in 1..=maxdeg {
        powers.push(powers[k - 1].mul(v));
        powers_p.push(powers_p[k - 1].mul(&vp));
    }
    let big_scale = ApReal::two_pow(scale_bits, fbits);
    let embed = |x: &ApReal| x.mul(&big_scale).round_bigint();

    for d in 1..=maxdeg {
        let mut basis = Vec::with_capacity(d + 1);
        for (k, pk) in powers.iter().take(d + 1).enumerate() {
            let mut row = vec![BigInt::zero(); d + 3];
            row[k] = BigInt::one();
            row[d + 1] = embed(&pk.re);
            row[d + 2] = embed(&pk.im);
            basis.push(row);
        }
        let reduced = lll_reduce(basis);

        let mut best: Option<(BigInt, ApReal, Vec<BigInt>)> = None;
        for row in &reduced {
            let mut coeffs: Vec<BigInt> = row[..=d].to_vec();
            while coeffs.len() > 1 && coeffs.last().unwrap().is_zero() {
                coeffs.pop();
            }
            if coeffs.len() < 2 {
                continue;
            }
            let mut g = BigInt::zero();
            for c in &coeffs {
                g = g.gcd(c);
            }
            if g.is_zero() {
                continue;
            }
            if !g.is_one() {
                for c in &mut coeffs {
                    *c = &*c / &g;
                }
            }
            if coeffs.last().unwrap().is_negative() {
                for c in &mut coeffs {
                    *c = -&*c;
                }
            }
            let height = coeffs.iter().map(|c| c.abs()).max().unwrap();
            let residual = eval_with_powers(&coeffs, &powers).abs();
            let norm = ApReal::from_bigint(&height, fbits).mul_i64(coeffs.len() as i64);
            if residual.cmp_val(&accept_base.div(&norm)) == Ordering::Greater {
                continue;
            }
            if eval_with_powers(&coeffs, &powers_p).abs().cmp_val(&perturb_floor) != Ordering::Greater {
                continue;
            }
            let better = match &best {
                None => true,
                Some((h, r, _)) => {
                    height < *h || (height == *h && residual.cmp_val(r) == Ordering::Less)
                }
            };
            if better {
                best = Some((height, residual, coeffs));
            }
        }
        if let Some((_, residual, coefficients)) = best {
            let verdict = if coefficients.last().unwrap().is_one() {
                IntegralityVerdict::Yes
            } else {
                IntegralityVerdict::No
            };
            return MinPolyResult { degree: coefficients.len() - 1, coefficients, residual, verdict };
        }
    }
    MinPolyResult {
        coefficients: Vec::new(),
        degree: 0,
        residual: ApReal::zero(fbits),
        verdict: IntegralityVerdict::Inconclusive,
    }
}

/// Suggested degree cap for the per-value scan of [`isaacs_check`]: the
/// values live in a compositum of the character field (degree <= rank) and
/// the radical extensions introduced by `s`'s denominator.
pub fn isaacs_default_maxdeg(rank: usize, s: SExp) -> usize {
    let den = *s.denom() as usize;
    (2 * rank * den).clamp(8, 64)
}

/// Suggested degree cap for [`strongly_isaacs_check`] (square roots of two
/// center dimensions enlarge the field by at most a factor of four).
pub fn strongly_default_maxdeg(rank: usize) -> usize {
    (4 * rank).clamp(8, 64)
}

fn cache_key(v: &ApComplex) -> String {
    format!("{}|{}", v.re.to_decimal(60), v.im.to_decimal(60))
}

fn cached_minpoly<'a>(
    cache: &'a mut HashMap<String, MinPolyResult>,
    v: &ApComplex,
    maxdeg: usize,
    ctx: &Context,
) -> &'a MinPolyResult {
    cache.entry(cache_key(v)).or_insert_with(|| minimal_polynomial(v, maxdeg, ctx))
}

fn normalization_note(rep: &mut CriterionReport) {
    rep.note("pseudounitary normalization: dimC = fpdim, dimZ = dimC / codegree".to_string());
}

/// Integrality of every `lambda_s(rho, X)`: fail on a certified nonmonic
/// minimal polynomial, inconclusive entries listed in the notes. A clean
/// pass at `s >= 1/2` additionally asserts the derived consequence that
/// `fpdim^{2s+1} / d_X^2` is integral for every basis element.
pub fn isaacs_check(
    ring: &FusionRing,
    sp: &Spectrum,
    s: SExp,
    maxdeg: usize,
    ctx: &Context,
) -> CriterionReport {
    assert!(!s.is_negative(), "s must be nonnegative");
    let mut rep = CriterionReport::pass(ring.name(), "isaacs", ctx);
    rep.note(format!("s = {s}"));
    normalization_note(&mut rep);
    rep.note(format!("relation search degree cap = {maxdeg}"));
    let cd = match CenterDims::new(sp, ctx) {
        Ok(cd) => cd,
        Err(e) => {
            rep.mark_inconclusive();
            rep.note(e.to_string());
            return rep;
        }
    };
    let mut cache = HashMap::new();
    let mut inconclusive = 0usize;
    for rho in 0..sp.rank() {
        for x in 0..sp.rank() {
            let val = lambda_s(sp, &cd, s, rho, x);
            let res = cached_minpoly(&mut cache, &val, maxdeg, ctx);
            match res.verdict {
                IntegralityVerdict::Yes => {}
                IntegralityVerdict::No => {
                    let detail =
                        format!("minimal polynomial {} is not monic", res.polynomial_string());
                    let margin = fmt_real(&res.residual);
                    rep.push_failure(
                        Witness::new(vec![rho, x], fmt_complex(&val), margin).with_detail(detail),
                    );
                }
                IntegralityVerdict::Inconclusive => {
                    inconclusive += 1;
                    if inconclusive <= MAX_NOTES {
                        rep.note(format!(
                            "inconclusive at (character {rho}, element {x}): no certified relation up to degree {maxdeg}"
                        ));
                    }
                }
            }
        }
    }
    if inconclusive > 0 {
        rep.note(format!("{inconclusive} value(s) inconclusive"));
        rep.mark_inconclusive();
    }

    if rep.verdict == Verdict::Pass && s >= SExp::new(1, 2) {
        // d_X^2 divides fpdim^{2s+1} in the algebraic-integer sense.
        let e = s * SExp::from_integer(2) + SExp::one();
        for x in 0..sp.rank() {
            let val = ApComplex::from_real(
                pow_s(&sp.fpdim, e).div(&sp.dims[x].mul(&sp.dims[x])),
            );
            let res = cached_minpoly(&mut cache, &val, maxdeg, ctx);
            match res.verdict {
                IntegralityVerdict::Yes => {}
                IntegralityVerdict::No => {
                    let detail = format!(
                        "derived consequence violated: fpdim^{e} / d_{x}^2 has nonmonic minimal polynomial {}",
                        res.polynomial_string()
                    );
                    let margin = fmt_real(&res.residual);
                    rep.push_failure(
                        Witness::new(vec![x], fmt_complex(&val), margin).with_detail(detail),
                    );
                }
                IntegralityVerdict::Inconclusive => {
                    rep.note(format!("derived consequence inconclusive at element {x}"));
                    rep.mark_inconclusive();
                }
            }
        }
        rep.note(format!(
            "derived consequence checked: fpdim^{e} / d_X^2 integral for all X"
        ));
    }
    rep
}

/// Residual data for the identity behind the equivalence theorem.
#[derive(Clone, Debug)]
pub struct EquivalenceCheck {
    pub max_residual: ApReal,
    /// `(character, basis element)` attaining the maximum.
    pub worst: (usize, usize),
}

/// Verify, for all `(rho, Y)`, that
/// `sum_eta dimZ[eta]^s J_{n,s}(rho,..,rho,eta) conj(chi_eta(Y)) /
/// dimZ[rho]^{2(1-s)} = dimC dimZ[rho]^{s-1} chi_rho(Y) lambda_s(rho,Y)^{n-2}`.
pub fn isaacs_equivalence_check(
    sp: &Spectrum,
    cd: &CenterDims,
    s: SExp,
    n: usize,
) -> EquivalenceCheck {
    assert!(n >= 3);
    let fbits = sp.fpdim.fbits();
    let one = SExp::one();
    let r = sp.rank();
    let mut max_residual = ApReal::zero(fbits);
    let mut worst = (0usize, 0usize);
    for rho in 0..r {
        let z_pow = pow_s(&cd.dimz[rho], (one - s) * SExp::from_integer(2));
        let rhs_z = pow_s(&cd.dimz[rho], s - one);
        let mut slots = vec![rho; n];
        for y in 0..r {
            let mut lhs = ApComplex::zero(fbits);
            for eta in 0..r {
                slots[n - 1] = eta;
                let term = j_ns(sp, cd, s, &slots)
                    .scale(&pow_s(&cd.dimz[eta], s))
                    .mul(&sp.chars[eta][y].conj());
                lhs = lhs.add(&term);
            }
            let lhs = lhs.div_real(&z_pow);
            let lam = lambda_s(sp, cd, s, rho, y);
            let mut lam_pow = ApComplex::one(fbits);
            for _ in 0..n - 2 {
                lam_pow = lam_pow.mul(&lam);
            }
            let rhs = sp.chars[rho][y].scale(&cd.dimc.mul(&rhs_z)).mul(&lam_pow);
            let residual = lhs.sub(&rhs).abs();
            if residual.cmp_val(&max_residual) == Ordering::Greater {
                max_residual = residual;
                worst = (rho, y);
            }
        }
    }
    EquivalenceCheck { max_residual, worst }
}

/// Integrality of `J_{n,0}(tuple) / (dimC sqrt(dimZ_a dimZ_b))` over all
/// character multisets for `n = 3..=nmax`, with the denominator pair ranging
/// over every pair of tuple slots (the numerator is slot-symmetric, the
/// denominator is not; the first-two-slots convention is one of the pairs
/// covered).
pub fn strongly_isaacs_check(
    ring: &FusionRing,
    sp: &Spectrum,
    nmax: usize,
    maxdeg: usize,
    ctx: &Context,
) -> CriterionReport {
    assert!(nmax >= 3);
    let mut rep = CriterionReport::pass(ring.name(), "strong-isaacs", ctx);
    rep.note(format!("n = 3..={nmax}"));
    normalization_note(&mut rep);
    rep.note(format!("relation search degree cap = {maxdeg}"));
    rep.note("denominator slots range over all pairs of the tuple".to_string());
    let cd = match CenterDims::new(sp, ctx) {
        Ok(cd) => cd,
        Err(e) => {
            rep.mark_inconclusive();
            rep.note(e.to_string());
            return rep;
        }
    };
    let zero = SExp::zero();
    let mut cache = HashMap::new();
    let mut inconclusive = 0usize;
    for n in 3..=nmax {
        for tuple in multisets(sp.rank(), n) {
            let j = j_ns(sp, &cd, zero, &tuple);
            let mut seen: Vec<(usize, usize)> = Vec::new();
            for p in 0..n {
                for q in (p + 1)..n {
                    let pair = (tuple[p], tuple[q]);
                    if seen.contains(&pair) {
                        continue;
                    }
                    seen.push(pair);
                    let den = cd.dimc.mul(&cd.dimz[pair.0].mul(&cd.dimz[pair.1]).sqrt());
                    let val = j.div_real(&den);
                    let res = cached_minpoly(&mut cache, &val, maxdeg, ctx);
                    match res.verdict {
                        IntegralityVerdict::Yes => {}
                        IntegralityVerdict::No => {
                            let mut indices = tuple.clone();
                            indices.push(pair.0);
                            indices.push(pair.1);
                            let detail = format!(
                                "tuple {tuple:?}, denominator characters ({}, {}): minimal polynomial {} is not monic",
                                pair.0,
                                pair.1,
                                res.polynomial_string()
                            );
                            let margin = fmt_real(&res.residual);
                            rep.push_failure(
                                Witness::new(indices, fmt_complex(&val), margin).with_detail(detail),
                            );
                        }
                        IntegralityVerdict::Inconclusive => {
                            inconclusive += 1;
                            if inconclusive <= MAX_NOTES {
                                rep.note(format!(
                                    "inconclusive at tuple {tuple:?}, denominator characters ({}, {})",
                                    pair.0, pair.1
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
    if inconclusive > 0 {
        rep.note(format!("{inconclusive} value(s) inconclusive"));
        rep.mark_inconclusive();
    }
    rep
}
