//! Integral LLL lattice basis reduction (Lovász parameter 3/4).
//!
//! All-integer variant: instead of rational Gram–Schmidt data it maintains
//! the scaled quantities `lam[i][j] = mu_{ij} * d_{j+1}` and the Gram
//! determinants `d`, so every division in the update formulas is exact.
//! Input rows must be linearly independent; our callers always append an
//! identity block, which guarantees that.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let mut acc = BigInt::zero();
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

/// `a / b` asserting exact divisibility (the invariants guarantee it).
fn exact_div(a: BigInt, b: &BigInt) -> BigInt {
    debug_assert!(!b.is_zero());
    let (q, r) = num_integer::Integer::div_rem(&a, b);
    debug_assert!(r.is_zero(), "inexact division in lattice reduction");
    q
}

/// Nearest integer to `a / b` for `b > 0`, half away from zero.
fn rounded_div(a: &BigInt, b: &BigInt) -> BigInt {
    let two_a = a * BigInt::from(2);
    let adjust = if two_a.is_negative() { -b } else { b.clone() };
    (two_a + adjust) / (b * BigInt::from(2))
}

struct State {
    b: Vec<Vec<BigInt>>,
    lam: Vec<Vec<BigInt>>,
    /// `d[i]` = determinant of the Gram matrix of the first `i` rows; `d[0] = 1`.
    d: Vec<BigInt>,
}

impl State {
    fn reduce_against(&mut self, k: usize, l: usize) {
        let two_lam = &self.lam[k][l] * BigInt::from(2);
        if two_lam.abs() > self.d[l + 1] {
            let q = rounded_div(&self.lam[k][l], &self.d[l + 1]);
            for x in 0..self.b[k].len() {
                let t = &self.b[l][x] * &q;
                self.b[k][x] -= t;
            }
            let t = &q * &self.d[l + 1];
            self.lam[k][l] -= t;
            for j in 0..l {
                let t = &self.lam[l][j] * &q;
                self.lam[k][j] -= t;
            }
        }
    }

    fn swap_rows(&mut self, k: usize) {
        let n = self.b.len();
        self.b.swap(k, k - 1);
        for j in 0..k.saturating_sub(1) {
            let tmp = self.lam[k][j].clone();
            self.lam[k][j] = self.lam[k - 1][j].clone();
            self.lam[k - 1][j] = tmp;
        }
        let lambda = self.lam[k][k - 1].clone();
        let bnew = exact_div(&self.d[k - 1] * &self.d[k + 1] + &lambda * &lambda, &self.d[k]);
        for i in (k + 1)..n {
            let t = self.lam[i][k].clone();
            self.lam[i][k] = exact_div(&self.d[k + 1] * &self.lam[i][k - 1] - &lambda * &t, &self.d[k]);
            self.lam[i][k - 1] = exact_div(&bnew * &t + &lambda * &self.lam[i][k], &self.d[k + 1]);
        }
        self.d[k] = bnew;
    }
}

/// Reduce the row basis in place and return it. Panics on rank-deficient
/// input (never produced by the relation-lattice construction).
pub fn lll_reduce(b: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let n = b.len();
    if n <= 1 {
        return b;
    }
    let mut st = State { b, lam: vec![vec![BigInt::zero(); n]; n], d: vec![BigInt::one(); n + 1] };

    // Incremental all-integer Gram–Schmidt initialization. `lam[i][j]` must
    // be stored as soon as it is known: the `j == i` pass reads back the
    // entries `lam[i][k]` for k < i.
    for i in 0..n {
        for j in 0..=i {
            let mut t = dot(&st.b[i], &st.b[j]);
            for k in 0..j {
                t = exact_div(&st.d[k + 1] * &t - &st.lam[i][k] * &st.lam[j][k], &st.d[k]);
            }
            if j < i {
                st.lam[i][j] = t;
            } else {
                assert!(t.is_positive(), "rank-deficient lattice basis");
                st.d[i + 1] = t;
            }
        }
    }

    let mut k = 1usize;
    while k < n {
        st.reduce_against(k, k - 1);
        let lhs = (&st.d[k + 1] * &st.d[k - 1] + &st.lam[k][k - 1] * &st.lam[k][k - 1]) * BigInt::from(4);
        let rhs = (&st.d[k] * &st.d[k]) * BigInt::from(3);
        if lhs < rhs {
            st.swap_rows(k);
            k = k.max(2) - 1;
        } else {
            for l in (0..k.saturating_sub(1)).rev() {
                st.reduce_against(k, l);
            }
            k += 1;
        }
    }
    st.b
}
