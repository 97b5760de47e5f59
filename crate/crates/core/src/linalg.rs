//! Dense complex linear algebra at fixed precision.
//!
//! Provides column-major-free simple matrices over [`ApComplex`] plus a cyclic
//! Jacobi eigensolver for Hermitian matrices. Each complex rotation is the
//! unitary `U = diag(1, conj(phase)) * J` where `J` is the classical symmetric
//! Jacobi rotation for the phase-stripped 2x2 block; this zeroes the chosen
//! off-diagonal pair exactly and converges quadratically under cyclic sweeps.

use crate::ap::{ApComplex, ApReal};
use std::cmp::Ordering;

/// Dense matrix of complex fixed-point scalars, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<ApComplex>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize, fbits: u32) -> Self {
        CMat { rows, cols, data: vec![ApComplex::zero(fbits); rows * cols] }
    }

    pub fn identity(n: usize, fbits: u32) -> Self {
        let mut m = CMat::zeros(n, n, fbits);
        for i in 0..n {
            *m.at_mut(i, i) = ApComplex::one(fbits);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> ApComplex) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMat { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn fbits(&self) -> u32 {
        self.data[0].fbits()
    }

    pub fn at(&self, i: usize, j: usize) -> &ApComplex {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut ApComplex {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[ApComplex] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<ApComplex> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn adjoint(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |i, j| self.at(j, i).conj())
    }

    pub fn add(&self, o: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        CMat::from_fn(self.rows, self.cols, |i, j| self.at(i, j).add(o.at(i, j)))
    }

    pub fn sub(&self, o: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        CMat::from_fn(self.rows, self.cols, |i, j| self.at(i, j).sub(o.at(i, j)))
    }

    pub fn scale(&self, k: &ApComplex) -> CMat {
        CMat::from_fn(self.rows, self.cols, |i, j| self.at(i, j).mul(k))
    }

    pub fn scale_real(&self, k: &ApReal) -> CMat {
        CMat::from_fn(self.rows, self.cols, |i, j| self.at(i, j).scale(k))
    }

    pub fn mul(&self, o: &CMat) -> CMat {
        assert_eq!(self.cols, o.rows);
        let fbits = self.fbits();
        CMat::from_fn(self.rows, o.cols, |i, j| {
            let mut acc = ApComplex::zero(fbits);
            for k in 0..self.cols {
                acc = acc.add(&self.at(i, k).mul(o.at(k, j)));
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[ApComplex]) -> Vec<ApComplex> {
        assert_eq!(self.cols, v.len());
        let fbits = self.fbits();
        (0..self.rows)
            .map(|i| {
                let mut acc = ApComplex::zero(fbits);
                for k in 0..self.cols {
                    acc = acc.add(&self.at(i, k).mul(&v[k]));
                }
                acc
            })
            .collect()
    }

    /// `(A + A^*)/2`
    pub fn hermitian_part(&self) -> CMat {
        assert_eq!(self.rows, self.cols);
        CMat::from_fn(self.rows, self.cols, |i, j| {
            self.at(i, j).add(&self.at(j, i).conj()).scale(&ApReal::from_ratio(1, 2, self.fbits()))
        })
    }

    pub fn trace(&self) -> ApComplex {
        assert_eq!(self.rows, self.cols);
        let mut acc = ApComplex::zero(self.fbits());
        for i in 0..self.rows {
            acc = acc.add(self.at(i, i));
        }
        acc
    }

    /// Largest `max(|re|,|im|)` over all entries.
    pub fn norm_inf(&self) -> ApReal {
        let mut best = ApReal::zero(self.fbits());
        for e in &self.data {
            best = best.max_val(&e.norm_inf());
        }
        best
    }

    pub fn max_offdiag_abs(&self) -> ApReal {
        let mut best = ApReal::zero(self.fbits());
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j {
                    best = best.max_val(&self.at(i, j).norm_inf());
                }
            }
        }
        best
    }

    pub fn is_hermitian_within(&self, tol: &ApReal) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in i..self.cols {
                if !self.at(i, j).sub(&self.at(j, i).conj()).within(tol) {
                    return false;
                }
            }
        }
        true
    }
}

impl std::fmt::Debug for CMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "CMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self.at(i, j);
                write!(f, "({}, {}) ", z.re.to_decimal(6), z.im.to_decimal(6))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

pub fn vec_add(a: &[ApComplex], b: &[ApComplex]) -> Vec<ApComplex> {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

pub fn vec_sub(a: &[ApComplex], b: &[ApComplex]) -> Vec<ApComplex> {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

pub fn vec_scale(a: &[ApComplex], k: &ApComplex) -> Vec<ApComplex> {
    a.iter().map(|x| x.mul(k)).collect()
}

/// Hermitian inner product, conjugate-linear in the first argument.
pub fn vec_inner(a: &[ApComplex], b: &[ApComplex]) -> ApComplex {
    assert_eq!(a.len(), b.len());
    let fbits = a[0].fbits();
    let mut acc = ApComplex::zero(fbits);
    for (x, y) in a.iter().zip(b) {
        acc = acc.add(&x.conj().mul(y));
    }
    acc
}

pub fn vec_norm_sqr(a: &[ApComplex]) -> ApReal {
    let fbits = a[0].fbits();
    let mut acc = ApReal::zero(fbits);
    for x in a {
        acc = acc.add(&x.norm_sqr());
    }
    acc
}

pub fn vec_norm(a: &[ApComplex]) -> ApReal {
    vec_norm_sqr(a).sqrt()
}

pub fn vec_norm_inf(a: &[ApComplex]) -> ApReal {
    let mut best = ApReal::zero(a[0].fbits());
    for x in a {
        best = best.max_val(&x.norm_inf());
    }
    best
}

pub fn vec_normalize(a: &[ApComplex]) -> Vec<ApComplex> {
    let n = vec_norm(a);
    a.iter().map(|x| x.div_real(&n)).collect()
}

/// Eigendecomposition of a Hermitian matrix: `a * vectors.col(k) ==
/// values[k] * vectors.col(k)`, with orthonormal columns.
#[derive(Clone, Debug)]
pub struct EigenDecomp {
    pub values: Vec<ApReal>,
    /// Unitary matrix whose k-th column is the k-th eigenvector.
    pub vectors: CMat,
}

impl EigenDecomp {
    /// Reorder eigenpairs by `perm` (new position k takes old `perm[k]`).
    pub fn permuted(&self, perm: &[usize]) -> EigenDecomp {
        let values = perm.iter().map(|&p| self.values[p].clone()).collect();
        let vectors =
            CMat::from_fn(self.vectors.rows(), perm.len(), |i, j| self.vectors.at(i, perm[j]).clone());
        EigenDecomp { values, vectors }
    }

    /// Descending eigenvalue order; stable under exact ties.
    pub fn sorted_desc(&self) -> EigenDecomp {
        let mut idx: Vec<usize> = (0..self.values.len()).collect();
        idx.sort_by(|&a, &b| self.values[b].cmp_val(&self.values[a]).then(a.cmp(&b)));
        self.permuted(&idx)
    }
}

const MAX_SWEEPS: usize = 48;

/// Cyclic Jacobi diagonalization of a Hermitian matrix.
///
/// Off-diagonal mass is driven below `scale * 2^-(fbits-16)`; with quadratic
/// convergence this takes well under [`MAX_SWEEPS`] sweeps for the sizes used
/// here. Panics if the input is visibly non-Hermitian at working precision.
pub fn hermitian_eigen(a: &CMat) -> EigenDecomp {
    let n = a.rows();
    assert_eq!(n, a.cols());
    let fbits = a.fbits();
    let herm_tol = ApReal::two_pow(-(fbits as i64) + 24, fbits);
    assert!(a.is_hermitian_within(&herm_tol), "hermitian_eigen: input is not Hermitian");

    let mut m = a.hermitian_part();
    let mut v = CMat::identity(n, fbits);
    if n <= 1 {
        let values = (0..n).map(|i| m.at(i, i).re.clone()).collect();
        return EigenDecomp { values, vectors: v };
    }

    let scale = m.norm_inf().max_val(&ApReal::one(fbits));
    let target = scale.mul(&ApReal::two_pow(-(fbits as i64) + 16, fbits));
    let skip = target.mul(&ApReal::from_ratio(1, 4 * n as i64, fbits));

    for _sweep in 0..MAX_SWEEPS {
        if m.max_offdiag_abs().cmp_val(&target) != Ordering::Greater {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let b = m.at(p, q).clone();
                if b.norm_inf().cmp_val(&skip) != Ordering::Greater {
                    continue;
                }
                rotate(&mut m, &mut v, p, q, &b);
            }
        }
    }

    // Diagonal of a Hermitian matrix is real; drop rounding residue.
    let values: Vec<ApReal> = (0..n).map(|i| m.at(i, i).re.clone()).collect();
    EigenDecomp { values, vectors: v }
}

/// Apply the unitary similarity zeroing entry (p, q) of Hermitian `m`,
/// accumulating the rotation into `v`.
///
/// The rotation scalars are prepared at doubled fraction bits: an entry `b`
/// just above the skip threshold has `|b|^2` below working resolution, and
/// `b` itself is an exact dyadic value, so widening recovers the phase
/// `b/|b|` at full accuracy before rounding back.
fn rotate(m: &mut CMat, v: &mut CMat, p: usize, q: usize, b: &ApComplex) {
    let fbits = m.fbits();
    let wide = 2 * fbits;
    let one = ApReal::one(wide);
    let bre = b.re.with_fbits(wide);
    let bim = b.im.with_fbits(wide);
    let beta = bre.mul(&bre).add(&bim.mul(&bim)).sqrt();
    // b = beta * phase with |phase| = 1
    let phase = ApComplex::new(bre.div(&beta).with_fbits(fbits), bim.div(&beta).with_fbits(fbits));

    let app = m.at(p, p).re.clone();
    let aqq = m.at(q, q).re.clone();
    let tau = aqq.sub(&app).with_fbits(wide).div(&beta).half();
    let t_abs = one.div(&tau.abs().add(&tau.mul(&tau).add(&one).sqrt()));
    let t = if tau.is_negative() { t_abs.neg() } else { t_abs };
    let c_wide = one.div(&one.add(&t.mul(&t)).sqrt());
    let s = t.mul(&c_wide).with_fbits(fbits);
    let c = c_wide.with_fbits(fbits);

    // 2x2 block of U: [[c, s], [-s*conj(phase), c*conj(phase)]]
    let u_pp = ApComplex::from_real(c.clone());
    let u_pq = ApComplex::from_real(s.clone());
    let u_qp = phase.conj().scale(&s).neg();
    let u_qq = phase.conj().scale(&c);

    let n = m.rows();
    // Right-multiply columns p, q by the block.
    for k in 0..n {
        let mkp = m.at(k, p).clone();
        let mkq = m.at(k, q).clone();
        *m.at_mut(k, p) = mkp.mul(&u_pp).add(&mkq.mul(&u_qp));
        *m.at_mut(k, q) = mkp.mul(&u_pq).add(&mkq.mul(&u_qq));
    }
    // Left-multiply rows p, q by the adjoint block.
    for k in 0..n {
        let mpk = m.at(p, k).clone();
        let mqk = m.at(q, k).clone();
        *m.at_mut(p, k) = u_pp.conj().mul(&mpk).add(&u_qp.conj().mul(&mqk));
        *m.at_mut(q, k) = u_pq.conj().mul(&mpk).add(&u_qq.conj().mul(&mqk));
    }
    // The rotation zeroes (p,q) analytically; enforce it and keep the
    // diagonal exactly real so errors cannot accumulate there.
    *m.at_mut(p, q) = ApComplex::zero(fbits);
    *m.at_mut(q, p) = ApComplex::zero(fbits);
    let dp = m.at(p, p).re.clone();
    *m.at_mut(p, p) = ApComplex::from_real(dp);
    let dq = m.at(q, q).re.clone();
    *m.at_mut(q, q) = ApComplex::from_real(dq);

    for k in 0..n {
        let vkp = v.at(k, p).clone();
        let vkq = v.at(k, q).clone();
        *v.at_mut(k, p) = vkp.mul(&u_pp).add(&vkq.mul(&u_qp));
        *v.at_mut(k, q) = vkp.mul(&u_pq).add(&vkq.mul(&u_qq));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ap::Context;
    use rand::Rng;

    const F: u32 = 192;

    fn tolerance(slack: i64) -> ApReal {
        ApReal::two_pow(-(F as i64) + slack, F)
    }

    fn check_decomp(a: &CMat, e: &EigenDecomp, slack: i64) {
        let n = a.rows();
        let tol = tolerance(slack);
        for k in 0..n {
            let col = e.vectors.column(k);
            let av = a.mul_vec(&col);
            let lv = vec_scale(&col, &ApComplex::from_real(e.values[k].clone()));
            assert!(
                vec_norm_inf(&vec_sub(&av, &lv)).within(&tol),
                "eigenpair {k} residual too large"
            );
        }
        let vtv = e.vectors.adjoint().mul(&e.vectors);
        assert!(vtv.sub(&CMat::identity(n, F)).norm_inf().within(&tol), "vectors not unitary");
    }

    #[test]
    fn symmetric_2x2() {
        let mut a = CMat::zeros(2, 2, F);
        *a.at_mut(0, 1) = ApComplex::one(F);
        *a.at_mut(1, 0) = ApComplex::one(F);
        let e = hermitian_eigen(&a).sorted_desc();
        assert_eq!(e.values[0].to_decimal(10), "1.0000000000");
        assert_eq!(e.values[1].to_decimal(10), "-1.0000000000");
        check_decomp(&a, &e, 24);
    }

    #[test]
    fn complex_2x2_known_spectrum() {
        // [[2, i], [-i, 2]] has eigenvalues 3 and 1.
        let mut a = CMat::zeros(2, 2, F);
        *a.at_mut(0, 0) = ApComplex::from_int(2, F);
        *a.at_mut(1, 1) = ApComplex::from_int(2, F);
        *a.at_mut(0, 1) = ApComplex::new(ApReal::zero(F), ApReal::one(F));
        *a.at_mut(1, 0) = ApComplex::new(ApReal::zero(F), ApReal::one(F).neg());
        let e = hermitian_eigen(&a).sorted_desc();
        assert_eq!(e.values[0].to_decimal(10), "3.0000000000");
        assert_eq!(e.values[1].to_decimal(10), "1.0000000000");
        check_decomp(&a, &e, 24);
    }

    #[test]
    fn random_hermitian_certificates() {
        let ctx = Context::new(F - 64);
        let mut rng = ctx.rng(11);
        let n = 6;
        let raw = CMat::from_fn(n, n, |_, _| {
            let re = ApReal::from_ratio(rng.gen_range(-1000..1000), 997, F);
            let im = ApReal::from_ratio(rng.gen_range(-1000..1000), 997, F);
            ApComplex::new(re, im)
        });
        let a = raw.hermitian_part();
        let e = hermitian_eigen(&a);
        check_decomp(&a, &e, 40);

        let mut tr = ApReal::zero(F);
        for val in &e.values {
            tr = tr.add(val);
        }
        assert!(tr.sub(&a.trace().re).within(&tolerance(40)));
    }

    #[test]
    fn diagonal_input_is_fixed() {
        let mut a = CMat::zeros(3, 3, F);
        for (i, val) in [5i64, -2, 7].into_iter().enumerate() {
            *a.at_mut(i, i) = ApComplex::from_int(val, F);
        }
        let e = hermitian_eigen(&a).sorted_desc();
        assert_eq!(e.values[0].to_decimal(4), "7.0000");
        assert_eq!(e.values[2].to_decimal(4), "-2.0000");
        check_decomp(&a, &e, 8);
    }
}
