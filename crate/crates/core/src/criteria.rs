//! Categorification obstruction tests.
//!
//! Three layers:
//! - coefficient inequalities that every fusion ring satisfies
//!   ([`schur_inequalities`]) — a failure here means the input data is not a
//!   fusion ring at all, or precision is exhausted;
//! - positivity of the spectral invariants `I_n` ([`lpw_positivity`] for
//!   commutative rings, [`lpw_general`]'s product-vector counterexample
//!   search otherwise);
//! - the dual ring on characters ([`dual_ring`]), whose structure constants
//!   are codegree-normalized `I_3` values, plus the recursion cross-check
//!   tying `I_n` to `I_{n-1}` and `I_3`.
//!
//! All verdict-producing functions return a [`CriterionReport`] whose
//! witnesses pin down the offending index tuple and margin.

use crate::ap::{ApComplex, ApReal, Context};
use crate::linalg::{self, hermitian_eigen, CMat};
use crate::report::{fmt_complex, fmt_real, CriterionReport, Verdict, Witness};
use crate::ring::{AxiomViolation, FusionRing};
use crate::spectra::{FpData, IrrepSet, Spectrum};
use rand::Rng;
use std::cmp::Ordering;
use thiserror::Error;

const TAG_LPW: u64 = 0x6c70_7767;
/// Cap on recorded witnesses per report, to keep output bounded on garbage.
const MAX_WITNESSES: usize = 64;
/// Random starts per irrep tuple in the product-vector search.
pub const LPW_STARTS: usize = 16;
/// Alternating sweeps per start.
pub const LPW_SWEEPS: usize = 64;

#[derive(Debug, Error)]
pub enum CriteriaError {
    #[error("dual ring is inconsistent: {0}")]
    DualInconsistent(String),
}

/// Record a failure, keeping at most [`MAX_WITNESSES`] stored witnesses; the
/// verdict flips to fail regardless.
fn push_capped(rep: &mut CriterionReport, w: Witness) {
    if rep.witnesses.len() < MAX_WITNESSES {
        rep.push_failure(w);
    } else {
        rep.verdict = Verdict::Fail;
    }
}

/// Report wrapper for validation findings, so that invalid rings surface as
/// an ordinary failing criterion rather than an I/O error.
pub fn axioms_report(ring_name: &str, violations: &[AxiomViolation], ctx: &Context) -> CriterionReport {
    let mut rep = CriterionReport::pass(ring_name, "axioms", ctx);
    for v in violations.iter().take(MAX_WITNESSES) {
        let (indices, magnitude) = v.witness_data();
        rep.push_failure(
            Witness::new(indices, magnitude.to_string(), magnitude.to_string())
                .with_detail(v.to_string()),
        );
    }
    if violations.len() > MAX_WITNESSES {
        rep.note(format!(
            "witness list truncated to {MAX_WITNESSES} of {} violations",
            violations.len()
        ));
    }
    rep
}

/// The four coefficient inequality families valid in every fusion ring:
/// (i) `sum_m N[i,j]^m^2 <= min(d_i^2, d_j^2)`,
/// (ii) `N[i,j]^m <= d_i d_j / d_m`,
/// (iii) `N[i,j]^m <= min(d_i, d_j, d_m)`,
/// (iv) `sum_m N[i1,i2]^m N[i3,i4]^m <= d_p d_q` for all distinct slot
/// pairs `p, q` of the quadruple.
pub fn schur_inequalities(ring: &FusionRing, fp: &FpData, ctx: &Context) -> CriterionReport {
    let r = ring.rank();
    let fbits = ctx.fbits();
    let tol = ctx.tol();
    let mut rep = CriterionReport::pass(ring.name(), "schur", ctx);
    let d = &fp.dims;

    let fail = |rep: &mut CriterionReport, indices: Vec<usize>, lhs: &ApReal, bound: &ApReal, family: &str| {
        push_capped(
            rep,
            Witness::new(indices, fmt_real(lhs), fmt_real(&lhs.sub(bound))).with_detail(family.to_string()),
        );
    };

    // (i) row sums of squares against min(d_i^2, d_j^2).
    for i in 0..r {
        for j in 0..r {
            let mut sq = 0u128;
            for m in 0..r {
                let c = ring.n(i, j, m) as u128;
                sq += c * c;
            }
            let lhs = ApReal::from_bigint(&sq.into(), fbits);
            let bi = d[i].mul(&d[i]);
            let bj = d[j].mul(&d[j]);
            let bound = if bi.cmp_val(&bj) == Ordering::Less { bi } else { bj };
            if lhs.sub(&bound).cmp_val(&tol) == Ordering::Greater {
                fail(&mut rep, vec![i, j], &lhs, &bound, "sum of squared coefficients exceeds min(d_i^2, d_j^2)");
            }
        }
    }

    // (ii) and (iii) per coefficient.
    for i in 0..r {
        for j in 0..r {
            for m in 0..r {
                let c = ring.n(i, j, m);
                if c == 0 {
                    continue;
                }
                let lhs = ApReal::from_int(c as i64, fbits);
                let ratio = d[i].mul(&d[j]).div(&d[m]);
                if lhs.sub(&ratio).cmp_val(&tol) == Ordering::Greater {
                    fail(&mut rep, vec![i, j, m], &lhs, &ratio, "coefficient exceeds d_i d_j / d_m");
                }
                let mut mind = d[i].clone();
                for other in [&d[j], &d[m]] {
                    if other.cmp_val(&mind) == Ordering::Less {
                        mind = (*other).clone();
                    }
                }
                if lhs.sub(&mind).cmp_val(&tol) == Ordering::Greater {
                    fail(&mut rep, vec![i, j, m], &lhs, &mind, "coefficient exceeds min(d_i, d_j, d_m)");
                }
            }
        }
    }

    // (iv) paired convolutions against every distinct slot product.
    for i1 in 0..r {
        for i2 in 0..r {
            for i3 in 0..r {
                for i4 in 0..r {
                    let mut conv = 0u128;
                    for m in 0..r {
                        conv += ring.n(i1, i2, m) as u128 * ring.n(i3, i4, m) as u128;
                    }
                    if conv == 0 {
                        continue;
                    }
                    let lhs = ApReal::from_bigint(&conv.into(), fbits);
                    let slots = [i1, i2, i3, i4];
                    let mut bound: Option<ApReal> = None;
                    for p in 0..4 {
                        for q in (p + 1)..4 {
                            let pq = d[slots[p]].mul(&d[slots[q]]);
                            bound = Some(match bound {
                                Some(b) if b.cmp_val(&pq) != Ordering::Greater => b,
                                _ => pq,
                            });
                        }
                    }
                    let bound = bound.unwrap();
                    if lhs.sub(&bound).cmp_val(&tol) == Ordering::Greater {
                        fail(
                            &mut rep,
                            vec![i1, i2, i3, i4],
                            &lhs,
                            &bound,
                            "paired convolution exceeds min over slot products d_p d_q",
                        );
                    }
                }
            }
        }
    }

    if rep.witnesses.len() >= MAX_WITNESSES {
        rep.note(format!("witness list truncated at {MAX_WITNESSES}"));
    }
    if !rep.witnesses.is_empty() {
        rep.note(
            "these inequalities hold in every fusion ring; violations indicate invalid input data or exhausted precision"
                .to_string(),
        );
    }
    rep
}

/// `dims[i]^{2-n}` for each basis element.
fn weights(sp: &Spectrum, n: usize) -> Vec<ApReal> {
    sp.dims.iter().map(|d| d.powi(2 - n as i64)).collect()
}

fn eval_in(sp: &Spectrum, w: &[ApReal], slots: &[usize]) -> ApComplex {
    let fbits = sp.fpdim.fbits();
    let mut acc = ApComplex::zero(fbits);
    for i in 0..sp.rank() {
        let mut prod = ApComplex::from_real(w[i].clone());
        for &s in slots {
            prod = prod.mul(&sp.chars[s][i]);
        }
        acc = acc.add(&prod);
    }
    acc
}

/// Spectral invariant `I_n(s_1..s_n) = sum_i d_i^{2-n} chi_{s_1}(i) ... chi_{s_n}(i)`.
pub fn invariant_in(sp: &Spectrum, slots: &[usize]) -> ApComplex {
    eval_in(sp, &weights(sp, slots.len()), slots)
}

/// All nondecreasing index tuples of length `n` over `0..r`.
pub fn multisets(r: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; n];
    loop {
        out.push(cur.clone());
        // advance odometer keeping entries nondecreasing
        let mut k = n;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if cur[k] + 1 < r {
                let v = cur[k] + 1;
                for slot in cur.iter_mut().skip(k) {
                    *slot = v;
                }
                break;
            }
        }
    }
}

/// Positivity scan of `I_n` over all character multisets of a commutative
/// ring. Values with real part below `-tol` or imaginary part beyond `tol`
/// fail; values in `[-tol, 0)` pass with a printed warning.
pub fn lpw_positivity(ring: &FusionRing, sp: &Spectrum, n: usize, ctx: &Context) -> CriterionReport {
    let mut rep = CriterionReport::pass(ring.name(), "lpw", ctx);
    rep.note(format!("n = {n}"));
    let tol = ctx.tol();
    let w = weights(sp, n);
    for tuple in multisets(sp.rank(), n) {
        let v = eval_in(sp, &w, &tuple);
        record_positivity(&mut rep, &tuple, &v, &tol);
    }
    if rep.witnesses.len() >= MAX_WITNESSES {
        rep.note(format!("witness list truncated at {MAX_WITNESSES}"));
    }
    rep
}

fn record_positivity(rep: &mut CriterionReport, tuple: &[usize], v: &ApComplex, tol: &ApReal) {
    let neg = v.re.neg();
    if neg.cmp_val(tol) == Ordering::Greater {
        push_capped(
            rep,
            Witness::new(tuple.to_vec(), fmt_complex(v), fmt_real(&neg)).with_detail("negative real part"),
        );
        return;
    }
    if v.im.abs().cmp_val(tol) == Ordering::Greater {
        push_capped(
            rep,
            Witness::new(tuple.to_vec(), fmt_complex(v), fmt_real(&v.im.abs()))
                .with_detail("value is not real"),
        );
        return;
    }
    if v.re.is_negative() {
        rep.note(format!(
            "value at {:?} is negative within tolerance: {}",
            tuple,
            fmt_complex(v)
        ));
    }
}

/// Counterexample search for the general (possibly noncommutative)
/// positivity invariant: for each irrep tuple, alternately minimize
/// `Q(v_1..v_n) = sum_i d_i^{2-n} prod_k <v_k, M_k[i] v_k>` over one unit
/// tensor factor at a time (the optimum is the minimal eigenvector of the
/// induced Hermitian form). A reported pass means "no violation found
/// within the search budget", never a proof.
pub fn lpw_general(
    ring: &FusionRing,
    set: &IrrepSet,
    fp: &FpData,
    n: usize,
    ctx: &Context,
    budget: Option<usize>,
) -> CriterionReport {
    let fbits = ctx.fbits();
    let tol = ctx.tol();
    let r = ring.rank();
    let mut rep = CriterionReport::pass(ring.name(), "lpw-general", ctx);
    rep.note(format!("n = {n}"));
    rep.note("pass means no violating product vector was found within the search budget".to_string());
    let mut budget = budget.unwrap_or(usize::MAX);

    let w: Vec<ApReal> = fp.dims.iter().map(|d| d.powi(2 - n as i64)).collect();
    let eps = ApReal::two_pow(-i64::from(fbits / 2), fbits);

    let tuples = multisets(set.irreps.len(), n);
    for (t_idx, tuple) in tuples.iter().enumerate() {
        let mats: Vec<&Vec<CMat>> = tuple.iter().map(|&s| &set.irreps[s].mats).collect();
        if tuple.iter().all(|&s| set.irreps[s].dim == 1) {
            // Scalar blocks: phases cancel, the value is independent of the
            // vectors; evaluate the plain sum.
            let mut acc = ApComplex::zero(fbits);
            for i in 0..r {
                let mut prod = ApComplex::from_real(w[i].clone());
                for m in &mats {
                    prod = prod.mul(m[i].at(0, 0));
                }
                acc = acc.add(&prod);
            }
            record_positivity(&mut rep, tuple, &acc, &tol);
            continue;
        }

        let mut exhausted = false;
        for start in 0..LPW_STARTS {
            if budget == 0 {
                rep.mark_inconclusive();
                rep.note(format!(
                    "search budget exhausted at irrep tuple {tuple:?}; later tuples not searched"
                ));
                exhausted = true;
                break;
            }
            budget -= 1;
            let mut rng = ctx.rng(TAG_LPW ^ ((t_idx as u64) << 24) ^ ((start as u64) << 8));
            let mut vecs: Vec<Vec<ApComplex>> = tuple
                .iter()
                .map(|&s| {
                    let dim = set.irreps[s].dim;
                    let den = 1i64 << 20;
                    let mut v: Vec<ApComplex> = (0..dim)
                        .map(|_| {
                            ApComplex::new(
                                ApReal::from_ratio(rng.gen_range(-den..den), den, fbits),
                                ApReal::from_ratio(rng.gen_range(-den..den), den, fbits),
                            )
                        })
                        .collect();
                    if linalg::vec_norm_sqr(&v).cmp_val(&ApReal::two_pow(-20, fbits)) != Ordering::Greater {
                        v[0] = ApComplex::one(fbits);
                    }
                    linalg::vec_normalize(&v)
                })
                .collect();

            // Cache q[k][i] = <v_k, M_k[i] v_k>.
            let mut q: Vec<Vec<ApComplex>> = (0..n)
                .map(|k| (0..r).map(|i| linalg::vec_inner(&vecs[k], &mats[k][i].mul_vec(&vecs[k]))).collect())
                .collect();
            let objective = |q: &Vec<Vec<ApComplex>>| {
                let mut acc = ApComplex::zero(fbits);
                for i in 0..r {
                    let mut prod = ApComplex::from_real(w[i].clone());
                    for qk in q {
                        prod = prod.mul(&qk[i]);
                    }
                    acc = acc.add(&prod);
                }
                acc
            };
            let mut prev = objective(&q);
            for _sweep in 0..LPW_SWEEPS {
                for k in 0..n {
                    let dim = set.irreps[tuple[k]].dim;
                    let mut h = CMat::zeros(dim, dim, fbits);
                    for i in 0..r {
                        let mut coeff = ApComplex::from_real(w[i].clone());
                        for (j, qj) in q.iter().enumerate() {
                            if j != k {
                                coeff = coeff.mul(&qj[i]);
                            }
                        }
                        h = h.add(&mats[k][i].scale(&coeff));
                    }
                    let h = h.hermitian_part();
                    let eig = hermitian_eigen(&h);
                    let mut best = 0usize;
                    for a in 1..dim {
                        if eig.values[a].cmp_val(&eig.values[best]) == Ordering::Less {
                            best = a;
                        }
                    }
                    vecs[k] = eig.vectors.column(best);
                    for i in 0..r {
                        q[k][i] = linalg::vec_inner(&vecs[k], &mats[k][i].mul_vec(&vecs[k]));
                    }
                }
                let cur = objective(&q);
                let drop = prev.re.sub(&cur.re);
                prev = cur;
                if drop.cmp_val(&eps) != Ordering::Greater {
                    break;
                }
            }
            let neg = prev.re.neg();
            if neg.cmp_val(&tol) == Ordering::Greater {
                let mut detail = String::from("product vector: ");
                for (k, v) in vecs.iter().enumerate() {
                    if k > 0 {
                        detail.push_str(" (x) ");
                    }
                    detail.push('[');
                    for (a, z) in v.iter().enumerate() {
                        if a > 0 {
                            detail.push_str(", ");
                        }
                        detail.push_str(&format!("({}, {})", z.re.to_decimal(12), z.im.to_decimal(12)));
                    }
                    detail.push(']');
                }
                push_capped(
                    &mut rep,
                    Witness::new(tuple.clone(), fmt_complex(&prev), fmt_real(&neg)).with_detail(detail),
                );
                break;
            }
        }
        if exhausted {
            break;
        }
    }
    if rep.witnesses.len() >= MAX_WITNESSES {
        rep.note(format!("witness list truncated at {MAX_WITNESSES}"));
    }
    rep
}

/// Result of the recursion cross-check tying `I_n` to `I_{n-1}` and `I_3`.
#[derive(Clone, Debug)]
pub struct RecursionCheck {
    pub max_residual: ApReal,
    pub worst_tuple: Vec<usize>,
}

/// Verify `I_n(s_1..s_n) = sum_t codegree_t^{-1} I_{n-1}(s_1..s_{n-2}, t)
/// I_3(conj(t), s_{n-1}, s_n)` over all multisets; returns the worst
/// residual. The left side is evaluated directly, so this cross-checks the
/// evaluator against an independent composition path.
pub fn in_recursion_check(sp: &Spectrum, n: usize) -> RecursionCheck {
    assert!(n >= 3, "recursion requires n >= 3");
    let fbits = sp.fpdim.fbits();
    let r = sp.rank();
    let w_n = weights(sp, n);
    let w_prev = weights(sp, n - 1);
    let w_3 = weights(sp, 3);
    let mut max_residual = ApReal::zero(fbits);
    let mut worst_tuple = vec![0; n];
    for tuple in multisets(r, n) {
        let lhs = eval_in(sp, &w_n, &tuple);
        let mut rhs = ApComplex::zero(fbits);
        let mut left_slots: Vec<usize> = tuple[..n - 2].to_vec();
        left_slots.push(0);
        for t in 0..r {
            *left_slots.last_mut().unwrap() = t;
            let a = eval_in(sp, &w_prev, &left_slots);
            let b = eval_in(sp, &w_3, &[sp.conj_pairing[t], tuple[n - 2], tuple[n - 1]]);
            rhs = rhs.add(&a.mul(&b).div_real(&sp.codegrees[t]));
        }
        let residual = lhs.sub(&rhs).abs();
        if residual.cmp_val(&max_residual) == Ordering::Greater {
            max_residual = residual;
            worst_tuple = tuple;
        }
    }
    RecursionCheck { max_residual, worst_tuple }
}

/// Commutative ring structure on the characters: structure constants
/// `c[s][t][u] = codegree_u^{-1} I_3(s, t, conj(u))`. Certified unital,
/// commutative, and associative before being returned.
#[derive(Clone, Debug)]
pub struct DualRing {
    pub constants: Vec<Vec<Vec<ApComplex>>>,
}

impl DualRing {
    pub fn rank(&self) -> usize {
        self.constants.len()
    }
}

pub fn dual_ring(sp: &Spectrum, ctx: &Context) -> Result<DualRing, CriteriaError> {
    let r = sp.rank();
    let fbits = sp.fpdim.fbits();
    let tol = ctx.tol();
    let w3 = weights(sp, 3);
    let mut constants = vec![vec![Vec::with_capacity(r); r]; r];
    for s in 0..r {
        for t in 0..r {
            for u in 0..r {
                let v = eval_in(sp, &w3, &[s, t, sp.conj_pairing[u]]).div_real(&sp.codegrees[u]);
                constants[s][t].push(v);
            }
        }
    }

    let one = ApReal::one(fbits);
    // Unit: the positive character (index 0).
    for t in 0..r {
        for u in 0..r {
            let want = ApComplex::from_int(i64::from(t == u), fbits);
            if !constants[0][t][u].sub(&want).within(&tol) {
                return Err(CriteriaError::DualInconsistent(format!(
                    "positive character is not a unit at ({t},{u})"
                )));
            }
        }
    }
    // Commutativity.
    for s in 0..r {
        for t in 0..r {
            for u in 0..r {
                if !constants[s][t][u].sub(&constants[t][s][u]).within(&tol) {
                    return Err(CriteriaError::DualInconsistent(format!(
                        "product is not commutative at ({s},{t},{u})"
                    )));
                }
            }
        }
    }
    // Associativity, with a scale allowance for large structure constants.
    let mut scale = one;
    for s in 0..r {
        for t in 0..r {
            for u in 0..r {
                scale = scale.max_val(&constants[s][t][u].norm_inf());
            }
        }
    }
    let assoc_tol = tol.mul(&scale.mul(&scale).mul_i64(r as i64));
    for s in 0..r {
        for t in 0..r {
            for x in 0..r {
                for y in 0..r {
                    let mut lhs = ApComplex::zero(fbits);
                    let mut rhs = ApComplex::zero(fbits);
                    for u in 0..r {
                        lhs = lhs.add(&constants[s][t][u].mul(&constants[u][x][y]));
                        rhs = rhs.add(&constants[t][x][u].mul(&constants[s][u][y]));
                    }
                    if !lhs.sub(&rhs).within(&assoc_tol) {
                        return Err(CriteriaError::DualInconsistent(format!(
                            "product is not associative at ({s},{t},{x},{y})"
                        )));
                    }
                }
            }
        }
    }
    Ok(DualRing { constants })
}
