//! Spectral data of a fusion ring at working precision.
//!
//! Three entry points:
//! - [`fp_dimensions`]: Perron eigenvector of the all-ones multiplication
//!   matrix, giving the positive dimension function `d_i` and its global sum
//!   of squares.
//! - [`character_table`]: for commutative rings, simultaneous unitary
//!   diagonalization of the commuting left-multiplication family via random
//!   Hermitian combinations (`c_{dual(i)} = conj(c_i)` keeps the combination
//!   Hermitian; complex draws avoid the forced collisions of conjugate
//!   character pairs).
//! - [`decompose_regular`]: for any ring, block decomposition of the regular
//!   representation by eigen-decomposing a random Hermitian element of the
//!   commutant (right multiplications); eigenspace clusters are invariant
//!   irreducible blocks, grouped into isomorphism classes by trace vectors.
//!
//! Every returned object is re-certified against its defining identities
//! before it leaves this module; failures surface as [`SpectraError`], never
//! as silently wrong data.

use crate::ap::{ApComplex, ApReal, Context};
use crate::linalg::{self, hermitian_eigen, CMat};
use crate::ring::FusionRing;
use rand::Rng;
use rand_chacha::ChaCha20Rng;
use std::cmp::Ordering;
use thiserror::Error;

const TAG_CHAR_TABLE: u64 = 0x6368_6172;
const TAG_REGULAR: u64 = 0x7265_6775;

#[derive(Debug, Error)]
pub enum SpectraError {
    #[error("ring is not commutative; the character table is undefined (use the regular decomposition)")]
    Noncommutative,
    #[error("Perron iteration did not converge within the iteration cap")]
    NonConvergent,
    #[error("eigenvalue collisions persisted past the retry budget")]
    CollisionBudget,
    #[error("multiplication family is not jointly diagonal at working precision (basis index {index})")]
    NotJointlyDiagonal { index: usize },
    #[error("central element does not act as a scalar on a computed block")]
    NonScalarCodegree,
    #[error("spectral decomposition is inconsistent: {0}")]
    Inconsistent(String),
}

/// Positive dimension data from the Perron step.
#[derive(Clone, Debug)]
pub struct FpData {
    pub dims: Vec<ApReal>,
    /// `sum_i dims[i]^2`
    pub fpdim: ApReal,
}

/// Full character data of a commutative ring.
///
/// Row `0` is the positive (Frobenius–Perron) character; the rest are ordered
/// by descending codegree, ties broken lexicographically by value.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub dims: Vec<ApReal>,
    pub fpdim: ApReal,
    /// `chars[s][i]` = value of character `s` on basis element `i`.
    pub chars: Vec<Vec<ApComplex>>,
    /// `codegrees[s] = sum_i |chars[s][i]|^2`, all positive.
    pub codegrees: Vec<ApReal>,
    /// Involution pairing each character with its complex conjugate.
    pub conj_pairing: Vec<usize>,
    /// Index of the all-positive character (always 0 after ordering).
    pub fp_index: usize,
}

impl Spectrum {
    pub fn rank(&self) -> usize {
        self.chars.len()
    }
}

/// One irreducible unitary representation of the complexified ring.
#[derive(Clone, Debug)]
pub struct Irrep {
    pub dim: usize,
    /// `mats[i]` is the `dim x dim` matrix of basis element `i`.
    pub mats: Vec<CMat>,
    pub codegree: ApReal,
}

impl Irrep {
    /// Trace vector `(tr mats[i])_i`; determines the isomorphism class.
    pub fn traces(&self) -> Vec<ApComplex> {
        self.mats.iter().map(|m| m.trace()).collect()
    }
}

/// Complete set of pairwise non-isomorphic irreducibles (`sum dim^2 = rank`).
#[derive(Clone, Debug)]
pub struct IrrepSet {
    pub irreps: Vec<Irrep>,
}

fn int_mat_vec(rows: &[Vec<u64>], v: &[ApReal]) -> Vec<ApReal> {
    let fbits = v[0].fbits();
    rows.iter()
        .map(|row| {
            let mut acc = ApReal::zero(fbits);
            for (j, &c) in row.iter().enumerate() {
                if c != 0 {
                    acc = acc.add(&v[j].mul_i64(c as i64));
                }
            }
            acc
        })
        .collect()
}

fn inner_real(a: &[ApReal], b: &[ApReal]) -> ApReal {
    let mut acc = ApReal::zero(a[0].fbits());
    for (x, y) in a.iter().zip(b) {
        acc = acc.add(&x.mul(y));
    }
    acc
}

fn max_abs(v: &[ApReal]) -> ApReal {
    let mut best = ApReal::zero(v[0].fbits());
    for x in v {
        best = best.max_val(&x.abs());
    }
    best
}

/// Left-multiplication matrices lifted to complex fixed point.
pub fn left_cmats(ring: &FusionRing, fbits: u32) -> Vec<CMat> {
    (0..ring.rank())
        .map(|i| {
            CMat::from_fn(ring.rank(), ring.rank(), |m, j| {
                ApComplex::from_int(ring.n(i, j, m) as i64, fbits)
            })
        })
        .collect()
}

/// Right-multiplication matrices lifted to complex fixed point.
pub fn right_cmats(ring: &FusionRing, fbits: u32) -> Vec<CMat> {
    (0..ring.rank())
        .map(|i| {
            CMat::from_fn(ring.rank(), ring.rank(), |m, j| {
                ApComplex::from_int(ring.n(j, i, m) as i64, fbits)
            })
        })
        .collect()
}

/// Perron eigenvector of `M = sum_i left_matrix(i)` (a strictly positive
/// matrix for any valid ring), normalized to the unit coordinate; the
/// dimension of each basis element is its eigenvalue on that vector.
pub fn fp_dimensions(ring: &FusionRing, ctx: &Context) -> Result<FpData, SpectraError> {
    let r = ring.rank();
    let fbits = ctx.fbits();
    let one = ApReal::one(fbits);
    if r == 1 {
        return Ok(FpData { dims: vec![one.clone()], fpdim: one });
    }

    let mut global = vec![vec![0u64; r]; r];
    for i in 0..r {
        for j in 0..r {
            for m in 0..r {
                global[m][j] += ring.n(i, j, m);
            }
        }
    }

    let target = ApReal::two_pow(-(fbits as i64) + 24, fbits);
    let max_iters = 64 * ctx.precision as usize;
    let mut v = vec![one.clone(); r];
    let mut settled = None;
    let mut iter = 0usize;
    while iter < max_iters {
        let w = int_mat_vec(&global, &v);
        iter += 1;
        if iter % 8 == 0 {
            let lambda = inner_real(&v, &w).div(&inner_real(&v, &v));
            let mut residual = ApReal::zero(fbits);
            for (wm, vm) in w.iter().zip(&v) {
                residual = residual.max_val(&wm.sub(&lambda.mul(vm)).abs());
            }
            if residual.cmp_val(&target.mul(&lambda.max_val(&one))) != Ordering::Greater {
                settled = Some(v.clone());
                break;
            }
        }
        let scale = max_abs(&w);
        v = w.iter().map(|x| x.div(&scale)).collect();
    }
    let v = settled.ok_or(SpectraError::NonConvergent)?;

    let vv = inner_real(&v, &v);
    let tol = ctx.tol();
    let mut dims = Vec::with_capacity(r);
    for i in 0..r {
        let li = ring.left_matrix(i);
        let liv = int_mat_vec(&li, &v);
        let di = inner_real(&v, &liv).div(&vv);
        let mut residual = ApReal::zero(fbits);
        for (wm, vm) in liv.iter().zip(&v) {
            residual = residual.max_val(&wm.sub(&di.mul(vm)).abs());
        }
        let scale = one.add(&max_abs(&liv));
        if residual.cmp_val(&tol.mul(&scale)) == Ordering::Greater {
            return Err(SpectraError::NonConvergent);
        }
        dims.push(di);
    }

    if !dims[0].sub(&one).within(&tol) {
        return Err(SpectraError::Inconsistent("unit dimension differs from 1".into()));
    }
    for i in 0..r {
        if dims[i].is_negative() || dims[i].is_zero() {
            return Err(SpectraError::Inconsistent(format!("dimension {i} is not positive")));
        }
        if !dims[i].sub(&dims[ring.dual(i)]).within(&tol) {
            return Err(SpectraError::Inconsistent(format!("dimension {i} differs from its dual")));
        }
    }

    let mut fpdim = ApReal::zero(fbits);
    for d in &dims {
        fpdim = fpdim.add(&d.mul(d));
    }
    Ok(FpData { dims, fpdim })
}

/// Random coefficients with `c[dual(i)] = conj(c[i])`, so that
/// `sum_i c[i] * mult_matrix(i)` is Hermitian.
fn hermitian_coeffs(dual: &[usize], fbits: u32, rng: &mut ChaCha20Rng) -> Vec<ApComplex> {
    let den = 1i64 << 31;
    let mut out: Vec<Option<ApComplex>> = vec![None; dual.len()];
    for i in 0..dual.len() {
        if out[i].is_some() {
            continue;
        }
        let re = ApReal::from_ratio(rng.gen_range(-den..den), den, fbits);
        if dual[i] == i {
            out[i] = Some(ApComplex::from_real(re));
        } else {
            let im = ApReal::from_ratio(rng.gen_range(-den..den), den, fbits);
            out[i] = Some(ApComplex::new(re.clone(), im.clone()));
            out[dual[i]] = Some(ApComplex::new(re, im.neg()));
        }
    }
    out.into_iter().map(|c| c.unwrap()).collect()
}

fn combine(mats: &[CMat], coeffs: &[ApComplex]) -> CMat {
    let mut acc = CMat::zeros(mats[0].rows(), mats[0].cols(), mats[0].fbits());
    for (m, c) in mats.iter().zip(coeffs) {
        acc = acc.add(&m.scale(c));
    }
    acc
}

/// Indices of `values` sorted ascending, grouped so that consecutive values
/// closer than `gap` share a group.
fn gap_clusters(values: &[ApReal], gap: &ApReal) -> Vec<Vec<usize>> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].cmp_val(&values[b]).then(a.cmp(&b)));
    let mut out: Vec<Vec<usize>> = Vec::new();
    for k in idx {
        match out.last_mut() {
            Some(cluster)
                if values[k]
                    .sub(&values[*cluster.last().unwrap()])
                    .cmp_val(gap)
                    != Ordering::Greater =>
            {
                cluster.push(k)
            }
            _ => out.push(vec![k]),
        }
    }
    out
}

fn columns_matrix(vectors: &CMat, cols: &[usize]) -> CMat {
    CMat::from_fn(vectors.rows(), cols.len(), |i, j| vectors.at(i, cols[j]).clone())
}

const RETRY_BUDGET: usize = 8;
const MAX_DEPTH: usize = 40;

/// Recursively split `basis` (orthonormal columns spanning an invariant
/// subspace) into joint eigenvectors of the commuting family `mats`.
fn joint_diagonalize(
    mats: &[CMat],
    dual: &[usize],
    basis: CMat,
    ctx: &Context,
    depth: usize,
    out: &mut Vec<Vec<ApComplex>>,
) -> Result<(), SpectraError> {
    let k = basis.cols();
    if k == 1 {
        out.push(basis.column(0));
        return Ok(());
    }
    if depth > MAX_DEPTH {
        return Err(SpectraError::CollisionBudget);
    }
    let fbits = ctx.fbits();
    let gap = ctx.collision_gap();
    let restricted: Vec<CMat> = if depth == 0 {
        mats.to_vec()
    } else {
        let adj = basis.adjoint();
        mats.iter().map(|m| adj.mul(&m.mul(&basis))).collect()
    };
    for attempt in 0..RETRY_BUDGET {
        let salt = TAG_CHAR_TABLE
            ^ ((depth as u64) << 40)
            ^ ((out.len() as u64) << 16)
            ^ attempt as u64;
        let mut rng = ctx.rng(salt);
        let coeffs = hermitian_coeffs(dual, fbits, &mut rng);
        let h = combine(&restricted, &coeffs);
        let eig = hermitian_eigen(&h);
        let clusters = gap_clusters(&eig.values, &gap);
        if clusters.len() == 1 {
            continue; // no progress; redraw
        }
        for cluster in clusters {
            let w = columns_matrix(&eig.vectors, &cluster);
            let sub_basis = basis.mul(&w);
            if cluster.len() == 1 {
                out.push(sub_basis.column(0));
            } else {
                joint_diagonalize(mats, dual, sub_basis, ctx, depth + 1, out)?;
            }
        }
        return Ok(());
    }
    Err(SpectraError::CollisionBudget)
}

/// Character table of a commutative ring, fully certified (homomorphism
/// property, conjugation symmetry, codegree positivity, trace expansion).
pub fn character_table(ring: &FusionRing, ctx: &Context) -> Result<Spectrum, SpectraError> {
    if !ring.is_commutative() {
        return Err(SpectraError::Noncommutative);
    }
    let fp = fp_dimensions(ring, ctx)?;
    let r = ring.rank();
    let fbits = ctx.fbits();
    let one = ApReal::one(fbits);
    if r == 1 {
        return Ok(Spectrum {
            dims: fp.dims,
            fpdim: fp.fpdim,
            chars: vec![vec![ApComplex::one(fbits)]],
            codegrees: vec![one],
            conj_pairing: vec![0],
            fp_index: 0,
        });
    }

    let mats = left_cmats(ring, fbits);
    let mut columns: Vec<Vec<ApComplex>> = Vec::new();
    joint_diagonalize(&mats, ring.dual_table(), CMat::identity(r, fbits), ctx, 0, &mut columns)?;
    if columns.len() != r {
        return Err(SpectraError::Inconsistent(format!(
            "found {} joint eigenvectors, expected {r}",
            columns.len()
        )));
    }

    let tol = ctx.tol();
    // Characters as Rayleigh quotients, certified by eigen-residuals.
    let mut chars: Vec<Vec<ApComplex>> = Vec::with_capacity(r);
    for v in &columns {
        let vv = linalg::vec_norm_sqr(v);
        let mut row = Vec::with_capacity(r);
        for (i, li) in mats.iter().enumerate() {
            let liv = li.mul_vec(v);
            let chi = linalg::vec_inner(v, &liv).div_real(&vv);
            let scaled = linalg::vec_scale(v, &chi);
            let residual = linalg::vec_norm_inf(&linalg::vec_sub(&liv, &scaled));
            let scale = one.add(&linalg::vec_norm_inf(&liv));
            if residual.cmp_val(&tol.mul(&scale)) == Ordering::Greater {
                return Err(SpectraError::NotJointlyDiagonal { index: i });
            }
            row.push(chi);
        }
        chars.push(row);
    }

    // Homomorphism certificate: chi(i)*chi(j) = sum_m N[i,j]^m chi(m).
    for (s, row) in chars.iter().enumerate() {
        let scale = one.add(&row.iter().fold(ApReal::zero(fbits), |acc, z| acc.max_val(&z.norm_inf())));
        let row_tol = tol.mul(&scale.mul(&scale));
        for i in 0..r {
            for j in 0..r {
                let mut rhs = ApComplex::zero(fbits);
                for m in 0..r {
                    let c = ring.n(i, j, m);
                    if c != 0 {
                        rhs = rhs.add(&row[m].scale_i64(c as i64));
                    }
                }
                if !row[i].mul(&row[j]).sub(&rhs).within(&row_tol) {
                    return Err(SpectraError::Inconsistent(format!(
                        "character {s} is not multiplicative at ({i},{j})"
                    )));
                }
            }
        }
        // Conjugation symmetry: chi(dual(i)) = conj(chi(i)).
        for i in 0..r {
            if !row[ring.dual(i)].sub(&row[i].conj()).within(&row_tol) {
                return Err(SpectraError::Inconsistent(format!(
                    "character {s} breaks conjugation symmetry at {i}"
                )));
            }
        }
    }

    let codegrees: Vec<ApReal> = chars
        .iter()
        .map(|row| row.iter().fold(ApReal::zero(fbits), |acc, z| acc.add(&z.norm_sqr())))
        .collect();
    for (s, a) in codegrees.iter().enumerate() {
        if !a.is_positive() {
            return Err(SpectraError::Inconsistent(format!("codegree {s} is not positive")));
        }
    }

    // Locate the positive character and match it against the Perron data.
    let mut fp_candidates = Vec::new();
    'rows: for (s, row) in chars.iter().enumerate() {
        for (i, z) in row.iter().enumerate() {
            let slack = tol.mul(&one.add(&fp.dims[i]));
            if !z.im.within(&slack) || !z.re.sub(&fp.dims[i]).within(&slack) {
                continue 'rows;
            }
        }
        fp_candidates.push(s);
    }
    if fp_candidates.len() != 1 {
        return Err(SpectraError::Inconsistent(format!(
            "{} characters match the positive dimension row",
            fp_candidates.len()
        )));
    }
    let fp_row = fp_candidates[0];

    // Order: positive character first, then descending codegree, ties by
    // lexicographic value.
    let mut rest: Vec<usize> = (0..r).filter(|&s| s != fp_row).collect();
    rest.sort_by(|&a, &b| {
        codegrees[b]
            .cmp_val(&codegrees[a])
            .then_with(|| cmp_rows(&chars[a], &chars[b]))
            .then(a.cmp(&b))
    });
    let perm: Vec<usize> = std::iter::once(fp_row).chain(rest).collect();
    let chars: Vec<Vec<ApComplex>> = perm.iter().map(|&s| chars[s].clone()).collect();
    let codegrees: Vec<ApReal> = perm.iter().map(|&s| codegrees[s].clone()).collect();

    // Trace expansion certificate: sum_s codegree_s^{-1} chi_s(b_i) = [i = 0].
    for i in 0..r {
        let mut acc = ApComplex::zero(fbits);
        for s in 0..r {
            acc = acc.add(&chars[s][i].div_real(&codegrees[s]));
        }
        let want = ApComplex::from_int(i64::from(i == 0), fbits);
        if !acc.sub(&want).within(&tol) {
            return Err(SpectraError::Inconsistent(format!(
                "trace expansion fails at basis index {i}"
            )));
        }
    }

    // Conjugation pairing (rows are distinct, so the match is unique).
    let mut conj_pairing = vec![usize::MAX; r];
    for s in 0..r {
        let mut matches = Vec::new();
        for t in 0..r {
            let scale = one.add(&chars[s].iter().fold(ApReal::zero(fbits), |a, z| a.max_val(&z.norm_inf())));
            let row_tol = tol.mul(&scale);
            if (0..r).all(|i| chars[t][i].sub(&chars[s][i].conj()).within(&row_tol)) {
                matches.push(t);
            }
        }
        if matches.len() != 1 {
            return Err(SpectraError::Inconsistent(format!(
                "character {s} has {} conjugate partners",
                matches.len()
            )));
        }
        conj_pairing[s] = matches[0];
    }
    for s in 0..r {
        if conj_pairing[conj_pairing[s]] != s {
            return Err(SpectraError::Inconsistent("conjugation pairing is not an involution".into()));
        }
    }

    Ok(Spectrum { dims: fp.dims, fpdim: fp.fpdim, chars, codegrees, conj_pairing, fp_index: 0 })
}

/// Lexicographic row comparison on (re, im) pairs; total and deterministic.
fn cmp_rows(a: &[ApComplex], b: &[ApComplex]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let c = x.re.cmp_val(&y.re).then_with(|| x.im.cmp_val(&y.im));
        if c != Ordering::Equal {
            return c;
        }
    }
    Ordering::Equal
}

/// Scalar by which the central element `z = sum_i tr(M[i]) b_{dual(i)}` acts.
pub fn codegree(ring: &FusionRing, mats: &[CMat], ctx: &Context) -> Result<ApReal, SpectraError> {
    let fbits = ctx.fbits();
    let n = mats[0].rows();
    let mut z = CMat::zeros(n, n, fbits);
    for i in 0..ring.rank() {
        z = z.add(&mats[ring.dual(i)].scale(&mats[i].trace()));
    }
    let alpha = z.trace().re.div(&ApReal::from_int(n as i64, fbits));
    let dev = z.sub(&CMat::identity(n, fbits).scale_real(&alpha)).norm_inf();
    let scale = ApReal::one(fbits).add(&alpha.abs());
    if dev.cmp_val(&ctx.tol().mul(&scale)) == Ordering::Greater {
        return Err(SpectraError::NonScalarCodegree);
    }
    if !alpha.is_positive() {
        return Err(SpectraError::NonScalarCodegree);
    }
    Ok(alpha)
}

struct Block {
    mats: Vec<CMat>,
    traces: Vec<ApComplex>,
}

/// Decompose the regular representation into one representative per
/// isomorphism class of irreducibles, with codegrees.
pub fn decompose_regular(ring: &FusionRing, ctx: &Context) -> Result<IrrepSet, SpectraError> {
    let r = ring.rank();
    let fbits = ctx.fbits();
    let one = ApReal::one(fbits);
    let fp = fp_dimensions(ring, ctx)?;
    if r == 1 {
        return Ok(IrrepSet {
            irreps: vec![Irrep {
                dim: 1,
                mats: vec![CMat::identity(1, fbits)],
                codegree: one,
            }],
        });
    }
    let lmats = left_cmats(ring, fbits);
    let rmats = right_cmats(ring, fbits);
    let tol = ctx.tol();
    let gap = ctx.collision_gap();

    let mut last_err = SpectraError::CollisionBudget;
    'attempt: for attempt in 0..RETRY_BUDGET {
        let mut rng = ctx.rng(TAG_REGULAR ^ (attempt as u64) << 8);
        let coeffs = hermitian_coeffs(ring.dual_table(), fbits, &mut rng);
        let k = combine(&rmats, &coeffs);
        let eig = hermitian_eigen(&k);
        let clusters = gap_clusters(&eig.values, &gap);

        // Each eigenspace of a generic commutant element is an invariant
        // irreducible block; verify invariance before trusting it.
        let mut blocks = Vec::new();
        for cluster in clusters {
            let p = columns_matrix(&eig.vectors, &cluster);
            let padj = p.adjoint();
            let mut mats = Vec::with_capacity(r);
            for l in &lmats {
                let lp = l.mul(&p);
                let m = padj.mul(&lp);
                let residual = lp.sub(&p.mul(&m)).norm_inf();
                let scale = one.add(&lp.norm_inf());
                if residual.cmp_val(&tol.mul(&scale)) == Ordering::Greater {
                    last_err = SpectraError::Inconsistent(
                        "eigenspace is not invariant; eigenvalues of distinct blocks collided".into(),
                    );
                    continue 'attempt;
                }
                mats.push(m);
            }
            let traces: Vec<ApComplex> = mats.iter().map(|m| m.trace()).collect();
            blocks.push(Block { mats, traces });
        }

        match assemble_irreps(ring, ctx, &fp, blocks) {
            Ok(set) => return Ok(set),
            Err(e) => {
                last_err = e;
                continue 'attempt;
            }
        }
    }
    Err(last_err)
}

fn assemble_irreps(
    ring: &FusionRing,
    ctx: &Context,
    fp: &FpData,
    blocks: Vec<Block>,
) -> Result<IrrepSet, SpectraError> {
    let r = ring.rank();
    let fbits = ctx.fbits();
    let one = ApReal::one(fbits);
    let tol = ctx.tol();

    // Group blocks by trace vector (the character of the block).
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (b, block) in blocks.iter().enumerate() {
        let scale = one.add(&block.traces.iter().fold(ApReal::zero(fbits), |a, z| a.max_val(&z.norm_inf())));
        let row_tol = tol.mul(&scale);
        let found = classes.iter_mut().find(|class| {
            let rep = &blocks[class[0]];
            rep.mats[0].rows() == block.mats[0].rows()
                && (0..r).all(|i| rep.traces[i].sub(&block.traces[i]).within(&row_tol))
        });
        match found {
            Some(class) => class.push(b),
            None => classes.push(vec![b]),
        }
    }

    // Wedderburn bookkeeping: a block of dimension n must occur exactly n
    // times, and the squares must fill the rank.
    let mut total = 0usize;
    for class in &classes {
        let n = blocks[class[0]].mats[0].rows();
        if class.len() != n {
            return Err(SpectraError::Inconsistent(format!(
                "block of dimension {n} occurs {} times",
                class.len()
            )));
        }
        total += n * n;
    }
    if total != r {
        return Err(SpectraError::Inconsistent(format!(
            "block dimensions account for {total} of rank {r}"
        )));
    }

    let mut irreps = Vec::new();
    for class in &classes {
        let block = &blocks[class[0]];
        let mats = block.mats.clone();
        let n = mats[0].rows();

        // Unit and adjoint structure.
        if mats[0].sub(&CMat::identity(n, fbits)).norm_inf().cmp_val(&tol) == Ordering::Greater {
            return Err(SpectraError::Inconsistent("unit does not act as identity on a block".into()));
        }
        for i in 0..r {
            let dev = mats[ring.dual(i)].sub(&mats[i].adjoint()).norm_inf();
            let scale = one.add(&mats[i].norm_inf());
            if dev.cmp_val(&tol.mul(&scale)) == Ordering::Greater {
                return Err(SpectraError::Inconsistent(format!(
                    "dual of basis element {i} is not the adjoint on a block"
                )));
            }
        }
        // Multiplicativity.
        for i in 0..r {
            for j in 0..r {
                let mut rhs = CMat::zeros(n, n, fbits);
                for m in 0..r {
                    let c = ring.n(i, j, m);
                    if c != 0 {
                        rhs = rhs.add(&mats[m].scale(&ApComplex::from_int(c as i64, fbits)));
                    }
                }
                let lhs = mats[i].mul(&mats[j]);
                let scale = one.add(&lhs.norm_inf());
                if lhs.sub(&rhs).norm_inf().cmp_val(&tol.mul(&scale)) == Ordering::Greater {
                    return Err(SpectraError::Inconsistent(format!(
                        "block does not respect the product at ({i},{j})"
                    )));
                }
            }
        }

        let alpha = codegree(ring, &mats, ctx)?;
        irreps.push(Irrep { dim: n, mats, codegree: alpha });
    }

    // Trace expansion over the full set.
    for i in 0..r {
        let mut acc = ApComplex::zero(fbits);
        for irr in &irreps {
            acc = acc.add(&irr.mats[i].trace().div_real(&irr.codegree));
        }
        let want = ApComplex::from_int(i64::from(i == 0), fbits);
        if !acc.sub(&want).within(&tol) {
            return Err(SpectraError::Inconsistent(format!(
                "irreducible trace expansion fails at basis index {i}"
            )));
        }
    }

    // Deterministic order: positive character first (1-dimensional, traces
    // matching dims), then descending codegree, ties by lexicographic traces.
    let fp_pos = irreps.iter().position(|irr| {
        irr.dim == 1
            && irr.traces().iter().enumerate().all(|(i, z)| {
                let slack = tol.mul(&one.add(&fp.dims[i]));
                z.im.within(&slack) && z.re.sub(&fp.dims[i]).within(&slack)
            })
    });
    let fp_pos = fp_pos.ok_or_else(|| {
        SpectraError::Inconsistent("no block carries the positive dimension character".into())
    })?;
    let mut order: Vec<usize> = (0..irreps.len()).filter(|&x| x != fp_pos).collect();
    {
        let traces: Vec<Vec<ApComplex>> = irreps.iter().map(|irr| irr.traces()).collect();
        order.sort_by(|&a, &b| {
            irreps[b]
                .codegree
                .cmp_val(&irreps[a].codegree)
                .then_with(|| cmp_rows(&traces[a], &traces[b]))
                .then(a.cmp(&b))
        });
    }
    let order: Vec<usize> = std::iter::once(fp_pos).chain(order).collect();
    let irreps: Vec<Irrep> = order.into_iter().map(|x| irreps[x].clone()).collect();
    Ok(IrrepSet { irreps })
}

/// Bilinear-form residual of the central orthogonality identity
/// `sum_i f1(M[i] v1) f2(M[dual(i)] v2) = codegree * f2(v1) * f1(v2)`
/// for linear functionals given by coefficient vectors.
pub fn matrel_check(
    ring: &FusionRing,
    irrep: &Irrep,
    v1: &[ApComplex],
    v2: &[ApComplex],
    f1: &[ApComplex],
    f2: &[ApComplex],
) -> ApReal {
    let fbits = irrep.mats[0].fbits();
    let apply = |f: &[ApComplex], x: &[ApComplex]| {
        let mut acc = ApComplex::zero(fbits);
        for (a, b) in f.iter().zip(x) {
            acc = acc.add(&a.mul(b));
        }
        acc
    };
    let mut lhs = ApComplex::zero(fbits);
    for i in 0..ring.rank() {
        let a = apply(f1, &irrep.mats[i].mul_vec(v1));
        let b = apply(f2, &irrep.mats[ring.dual(i)].mul_vec(v2));
        lhs = lhs.add(&a.mul(&b));
    }
    let rhs = apply(f2, v1).mul(&apply(f1, v2)).scale(&irrep.codegree);
    lhs.sub(&rhs).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn ctx() -> Context {
        Context::new(256)
    }

    const PHI: &str = "1.61803398874989484820458683436563811772030917980576";

    #[test]
    fn fibonacci_dimensions() {
        let ring = catalog::catalog_ring("fibonacci").unwrap();
        let fp = fp_dimensions(&ring, &ctx()).unwrap();
        assert_eq!(fp.dims[1].to_decimal(50), PHI);
        assert_eq!(fp.fpdim.to_decimal(4), "3.6180");
    }

    #[test]
    fn ising_and_cyclic_dimensions() {
        let ising = catalog::catalog_ring("ising").unwrap();
        let fp = fp_dimensions(&ising, &ctx()).unwrap();
        assert_eq!(fp.dims[1].to_decimal(10), "1.0000000000");
        assert_eq!(fp.dims[2].to_decimal(20), "1.41421356237309504880");
        assert_eq!(fp.fpdim.to_decimal(30), "4.000000000000000000000000000000");

        let c5 = catalog::catalog_ring("cyclic_5").unwrap();
        let fp = fp_dimensions(&c5, &ctx()).unwrap();
        assert!(fp.dims.iter().all(|d| d.to_decimal(12) == "1.000000000000"));

        let su = catalog::catalog_ring("su2_3").unwrap();
        let fp = fp_dimensions(&su, &ctx()).unwrap();
        // 5 + sqrt(5)
        assert_eq!(fp.fpdim.to_decimal(20), "7.23606797749978969641");
    }

    #[test]
    fn fibonacci_codegrees() {
        let ring = catalog::catalog_ring("fibonacci").unwrap();
        let sp = character_table(&ring, &ctx()).unwrap();
        // (5 + sqrt 5)/2 and (5 - sqrt 5)/2
        assert_eq!(sp.codegrees[0].to_decimal(30), "3.618033988749894848204586834366");
        assert_eq!(sp.codegrees[1].to_decimal(30), "1.381966011250105151795413165634");
        // second character value is 1 - phi
        assert_eq!(sp.chars[1][1].re.to_decimal(10), "-0.6180339887");
        assert!(sp.chars[1][1].im.within(&ctx().tol()));
    }

    #[test]
    fn rep_s3_and_ising_codegrees() {
        let reps3 = catalog::catalog_ring("rep_s3").unwrap();
        let sp = character_table(&reps3, &ctx()).unwrap();
        let got: Vec<String> = sp.codegrees.iter().map(|a| a.to_decimal(6)).collect();
        assert_eq!(got, vec!["6.000000", "3.000000", "2.000000"]);

        let ising = catalog::catalog_ring("ising").unwrap();
        let sp = character_table(&ising, &ctx()).unwrap();
        let got: Vec<String> = sp.codegrees.iter().map(|a| a.to_decimal(6)).collect();
        assert_eq!(got, vec!["4.000000", "4.000000", "2.000000"]);
    }

    #[test]
    fn cyclic_conjugation_pairing() {
        let c3 = catalog::catalog_ring("cyclic_3").unwrap();
        let sp = character_table(&c3, &ctx()).unwrap();
        assert_eq!(sp.conj_pairing[0], 0);
        assert_eq!(sp.conj_pairing[1], 2);
        assert_eq!(sp.conj_pairing[2], 1);
        for a in &sp.codegrees {
            assert_eq!(a.to_decimal(8), "3.00000000");
        }
    }

    #[test]
    fn spectrum_is_deterministic() {
        let ring = catalog::catalog_ring("su2_3").unwrap();
        let a = character_table(&ring, &ctx()).unwrap();
        let b = character_table(&ring, &ctx()).unwrap();
        for s in 0..a.rank() {
            for i in 0..a.rank() {
                assert_eq!(a.chars[s][i], b.chars[s][i]);
            }
        }
    }

    #[test]
    fn regular_decomposition_of_group_ring() {
        let g = catalog::catalog_ring("vec_s3").unwrap();
        let set = decompose_regular(&g, &ctx()).unwrap();
        let dims: Vec<usize> = set.irreps.iter().map(|x| x.dim).collect();
        assert_eq!(dims, vec![1, 1, 2]);
        let cods: Vec<String> = set.irreps.iter().map(|x| x.codegree.to_decimal(6)).collect();
        assert_eq!(cods, vec!["6.000000", "6.000000", "3.000000"]);
        assert_eq!(set.irreps.iter().map(|x| x.dim * x.dim).sum::<usize>(), 6);
    }

    #[test]
    fn commutative_regular_decomposition_matches_characters() {
        let ring = catalog::catalog_ring("rep_s3").unwrap();
        let c = ctx();
        let sp = character_table(&ring, &c).unwrap();
        let set = decompose_regular(&ring, &c).unwrap();
        assert_eq!(set.irreps.len(), 3);
        let tol = c.tol();
        for (s, irr) in set.irreps.iter().enumerate() {
            assert_eq!(irr.dim, 1);
            assert!(irr.codegree.sub(&sp.codegrees[s]).within(&tol));
            for i in 0..3 {
                assert!(irr.mats[i].at(0, 0).sub(&sp.chars[s][i]).within(&tol), "({s},{i})");
            }
        }
    }

    #[test]
    fn matrel_identity_on_two_dimensional_block() {
        let g = catalog::catalog_ring("vec_s3").unwrap();
        let c = ctx();
        let set = decompose_regular(&g, &c).unwrap();
        let two = set.irreps.iter().find(|x| x.dim == 2).unwrap();
        let fbits = c.fbits();
        let mut rng = c.rng(0xfeed);
        let mut vecs = Vec::new();
        for _ in 0..4 {
            let v: Vec<ApComplex> = (0..2)
                .map(|_| {
                    ApComplex::new(
                        ApReal::from_ratio(rng.gen_range(-100..100), 97, fbits),
                        ApReal::from_ratio(rng.gen_range(-100..100), 97, fbits),
                    )
                })
                .collect();
            vecs.push(v);
        }
        let res = matrel_check(&g, two, &vecs[0], &vecs[1], &vecs[2], &vecs[3]);
        assert!(res.within(&c.tol()), "residual {res}");
    }

    #[test]
    fn matrel_negative_control() {
        // Stitch two different Fibonacci characters into one fake block;
        // the orthogonality identity must visibly fail.
        let ring = catalog::catalog_ring("fibonacci").unwrap();
        let c = ctx();
        let sp = character_table(&ring, &c).unwrap();
        let fbits = c.fbits();
        let fake = Irrep {
            dim: 1,
            mats: vec![
                CMat::from_fn(1, 1, |_, _| sp.chars[0][0].clone()),
                CMat::from_fn(1, 1, |_, _| sp.chars[1][1].clone()),
            ],
            codegree: sp.codegrees[0].clone(),
        };
        let one = vec![ApComplex::one(fbits)];
        let res = matrel_check(&ring, &fake, &one, &one, &one, &one);
        assert!(res.cmp_val(&ApReal::from_ratio(1, 2, fbits)) == Ordering::Greater, "residual {res}");
    }

    #[test]
    fn trivial_ring_shortcuts() {
        let ring = crate::ring::FusionRing::new("unit", 1, vec![0], vec![1]).unwrap();
        let sp = character_table(&ring, &ctx()).unwrap();
        assert_eq!(sp.rank(), 1);
        assert_eq!(sp.codegrees[0].to_decimal(3), "1.000");
        let set = decompose_regular(&ring, &ctx()).unwrap();
        assert_eq!(set.irreps.len(), 1);
    }

    #[test]
    fn noncommutative_rejected_by_character_table() {
        let g = catalog::catalog_ring("vec_s3").unwrap();
        assert!(matches!(character_table(&g, &ctx()), Err(SpectraError::Noncommutative)));
    }
}
