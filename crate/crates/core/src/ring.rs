//! Fusion ring structure: ordered basis, duality involution, and nonnegative
//! integer structure constants, plus exhaustive axiom validation.
//!
//! Basis element 0 is always the unit. The structure tensor is stored flat as
//! `tensor[(i*rank + j)*rank + m] = N[i,j]^m`, the coefficient of `b_m` in
//! `b_i * b_j`.

use num_bigint::BigInt;
use num_traits::Zero;
use std::fmt;
use thiserror::Error;

/// Largest supported rank; keeps full associativity validation tractable.
pub const MAX_RANK: usize = 512;

/// Largest supported structure constant; keeps `u128` accumulators exact.
pub const MAX_COEFF: u64 = 1 << 31;

/// Errors that make the raw data unusable before any axiom can be checked.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum StructuralError {
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error("rank {0} exceeds the supported maximum {MAX_RANK}")]
    RankTooLarge(usize),
    #[error("duality table has length {got}, expected rank {rank}")]
    DualLength { got: usize, rank: usize },
    #[error("duality entry dual[{index}] = {value} is out of range for rank {rank}")]
    DualRange { index: usize, value: usize, rank: usize },
    #[error("structure tensor has {got} entries, expected rank^3 = {want}")]
    TensorLength { got: usize, want: usize },
    #[error("structure constant N[{i},{j}]^{m} = {value} exceeds the supported maximum")]
    CoeffTooLarge { i: usize, j: usize, m: usize, value: u64 },
}

/// A single failed axiom instance, with enough data to locate and verify it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomViolation {
    /// `b_0 * b_j` or `b_j * b_0` is not `b_j`.
    Unit { left: bool, j: usize, m: usize, value: u64 },
    /// `dual` is not an involution fixing the unit.
    DualInvolution { index: usize, image: usize },
    /// Multiplicity of the unit in `b_i * b_j` differs from `[j == dual(i)]`.
    DualPairing { i: usize, j: usize, value: u64 },
    /// A Frobenius reciprocity identity fails.
    Reciprocity { relation: &'static str, i: usize, j: usize, m: usize, lhs: u64, rhs: u64 },
    /// `(b_i b_j) b_k` and `b_i (b_j b_k)` disagree in the `b_l` coefficient.
    Associativity { i: usize, j: usize, k: usize, l: usize, lhs: u128, rhs: u128 },
    /// Validation stopped early after collecting too many violations.
    Truncated { omitted_at_least: usize },
}

impl AxiomViolation {
    /// Index tuple and integer discrepancy for report witnesses.
    pub fn witness_data(&self) -> (Vec<usize>, u128) {
        match self {
            AxiomViolation::Unit { j, m, value, .. } => {
                let expected = u64::from(*m == *j);
                (vec![*j, *m], u128::from(value.abs_diff(expected)))
            }
            AxiomViolation::DualInvolution { index, image } => (vec![*index, *image], 1),
            AxiomViolation::DualPairing { i, j, value } => {
                (vec![*i, *j], u128::from(value.abs_diff(1) .max(*value)))
            }
            AxiomViolation::Reciprocity { i, j, m, lhs, rhs, .. } => {
                (vec![*i, *j, *m], u128::from(lhs.abs_diff(*rhs)))
            }
            AxiomViolation::Associativity { i, j, k, l, lhs, rhs } => {
                (vec![*i, *j, *k, *l], lhs.abs_diff(*rhs))
            }
            AxiomViolation::Truncated { omitted_at_least } => (vec![], *omitted_at_least as u128),
        }
    }
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomViolation::Unit { left, j, m, value } => {
                let expected = u64::from(*m == *j);
                if *left {
                    write!(f, "unit axiom: N[0,{j}]^{m} = {value}, expected {expected}")
                } else {
                    write!(f, "unit axiom: N[{j},0]^{m} = {value}, expected {expected}")
                }
            }
            AxiomViolation::DualInvolution { index, image } => {
                write!(f, "duality axiom: dual[{index}] = {image} breaks the involution/unit rule")
            }
            AxiomViolation::DualPairing { i, j, value } => {
                write!(f, "duality axiom: N[{i},{j}]^0 = {value}, expected 1 exactly when j = dual(i)")
            }
            AxiomViolation::Reciprocity { relation, i, j, m, lhs, rhs } => {
                write!(f, "reciprocity ({relation}): N[{i},{j}]^{m} = {lhs} but its partner equals {rhs}")
            }
            AxiomViolation::Associativity { i, j, k, l, lhs, rhs } => {
                write!(
                    f,
                    "associativity: coefficient of b_{l} in (b_{i} b_{j}) b_{k} is {lhs} but in b_{i} (b_{j} b_{k}) is {rhs}"
                )
            }
            AxiomViolation::Truncated { omitted_at_least } => {
                write!(f, "... further checks skipped (at least {omitted_at_least} more violations)")
            }
        }
    }
}

const MAX_VIOLATIONS: usize = 256;

/// A based ring with duality and nonnegative structure constants.
///
/// Construction checks shape and size limits only; call [`FusionRing::validate`]
/// for the ring axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FusionRing {
    name: String,
    rank: usize,
    dual: Vec<usize>,
    tensor: Vec<u64>,
}

impl FusionRing {
    pub fn new(
        name: impl Into<String>,
        rank: usize,
        dual: Vec<usize>,
        tensor: Vec<u64>,
    ) -> Result<Self, StructuralError> {
        if rank == 0 {
            return Err(StructuralError::ZeroRank);
        }
        if rank > MAX_RANK {
            return Err(StructuralError::RankTooLarge(rank));
        }
        if dual.len() != rank {
            return Err(StructuralError::DualLength { got: dual.len(), rank });
        }
        for (index, &value) in dual.iter().enumerate() {
            if value >= rank {
                return Err(StructuralError::DualRange { index, value, rank });
            }
        }
        let want = rank * rank * rank;
        if tensor.len() != want {
            return Err(StructuralError::TensorLength { got: tensor.len(), want });
        }
        for (pos, &value) in tensor.iter().enumerate() {
            if value > MAX_COEFF {
                let m = pos % rank;
                let j = (pos / rank) % rank;
                let i = pos / (rank * rank);
                return Err(StructuralError::CoeffTooLarge { i, j, m, value });
            }
        }
        Ok(FusionRing { name: name.into(), rank, dual, tensor })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dual(&self, i: usize) -> usize {
        self.dual[i]
    }

    pub fn dual_table(&self) -> &[usize] {
        &self.dual
    }

    /// Structure constant `N[i,j]^m`.
    pub fn n(&self, i: usize, j: usize, m: usize) -> u64 {
        self.tensor[(i * self.rank + j) * self.rank + m]
    }

    pub fn tensor(&self) -> &[u64] {
        &self.tensor
    }

    /// Coefficients of `b_i * b_j` in the basis.
    pub fn basis_product(&self, i: usize, j: usize) -> &[u64] {
        let start = (i * self.rank + j) * self.rank;
        &self.tensor[start..start + self.rank]
    }

    pub fn is_commutative(&self) -> bool {
        let r = self.rank;
        for i in 0..r {
            for j in (i + 1)..r {
                for m in 0..r {
                    if self.n(i, j, m) != self.n(j, i, m) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Matrix of left multiplication by `b_i` on coefficient vectors:
    /// `rows = output index m`, `cols = input index j`.
    pub fn left_matrix(&self, i: usize) -> Vec<Vec<u64>> {
        (0..self.rank).map(|m| (0..self.rank).map(|j| self.n(i, j, m)).collect()).collect()
    }

    /// Matrix of right multiplication by `b_i`.
    pub fn right_matrix(&self, i: usize) -> Vec<Vec<u64>> {
        (0..self.rank).map(|m| (0..self.rank).map(|j| self.n(j, i, m)).collect()).collect()
    }

    /// Product of two elements given by integer coefficient vectors.
    pub fn multiply(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(a.len(), self.rank);
        assert_eq!(b.len(), self.rank);
        let mut out = vec![BigInt::zero(); self.rank];
        for i in 0..self.rank {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..self.rank {
                if b[j].is_zero() {
                    continue;
                }
                let ab = &a[i] * &b[j];
                for m in 0..self.rank {
                    let c = self.n(i, j, m);
                    if c != 0 {
                        out[m] += &ab * c;
                    }
                }
            }
        }
        out
    }

    /// Coefficients of the dual element `a*`.
    pub fn dual_element(&self, a: &[BigInt]) -> Vec<BigInt> {
        (0..self.rank).map(|j| a[self.dual[j]].clone()).collect()
    }

    /// Trace functional: coefficient of the unit.
    pub fn tau(&self, a: &[BigInt]) -> BigInt {
        a[0].clone()
    }

    /// Inner product `(a, b) = tau(a b*)`; the basis is orthonormal for it.
    pub fn inner(&self, a: &[BigInt], b: &[BigInt]) -> BigInt {
        assert_eq!(a.len(), self.rank);
        assert_eq!(b.len(), self.rank);
        let mut acc = BigInt::zero();
        for i in 0..self.rank {
            acc += &a[i] * &b[i];
        }
        acc
    }

    /// Check every ring axiom, collecting all violations (up to an internal
    /// cap). An empty result means the data is a fusion ring.
    pub fn validate(&self) -> Vec<AxiomViolation> {
        let mut out = Vec::new();
        let r = self.rank;

        for j in 0..r {
            for m in 0..r {
                let want = u64::from(m == j);
                if self.n(0, j, m) != want {
                    out.push(AxiomViolation::Unit { left: true, j, m, value: self.n(0, j, m) });
                }
                if self.n(j, 0, m) != want {
                    out.push(AxiomViolation::Unit { left: false, j, m, value: self.n(j, 0, m) });
                }
            }
        }

        if self.dual[0] != 0 {
            out.push(AxiomViolation::DualInvolution { index: 0, image: self.dual[0] });
        }
        for i in 0..r {
            if self.dual[self.dual[i]] != i {
                out.push(AxiomViolation::DualInvolution { index: i, image: self.dual[i] });
            }
        }

        for i in 0..r {
            for j in 0..r {
                let want = u64::from(j == self.dual[i]);
                if self.n(i, j, 0) != want {
                    out.push(AxiomViolation::DualPairing { i, j, value: self.n(i, j, 0) });
                }
            }
        }

        // Frobenius reciprocity generators:
        //   N[i,j]^m = N[dual(i),m]^j   (pair with left factor)
        //   N[i,j]^m = N[m,dual(j)]^i   (pair with right factor)
        'rec: for i in 0..r {
            for j in 0..r {
                for m in 0..r {
                    let v = self.n(i, j, m);
                    let a = self.n(self.dual[i], m, j);
                    if v != a {
                        out.push(AxiomViolation::Reciprocity {
                            relation: "left",
                            i,
                            j,
                            m,
                            lhs: v,
                            rhs: a,
                        });
                    }
                    let b = self.n(m, self.dual[j], i);
                    if v != b {
                        out.push(AxiomViolation::Reciprocity {
                            relation: "right",
                            i,
                            j,
                            m,
                            lhs: v,
                            rhs: b,
                        });
                    }
                    if out.len() > MAX_VIOLATIONS {
                        break 'rec;
                    }
                }
            }
        }

        'assoc: for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    for l in 0..r {
                        let mut lhs: u128 = 0;
                        let mut rhs: u128 = 0;
                        for m in 0..r {
                            lhs += self.n(i, j, m) as u128 * self.n(m, k, l) as u128;
                            rhs += self.n(j, k, m) as u128 * self.n(i, m, l) as u128;
                        }
                        if lhs != rhs {
                            out.push(AxiomViolation::Associativity { i, j, k, l, lhs, rhs });
                            if out.len() > MAX_VIOLATIONS {
                                break 'assoc;
                            }
                        }
                    }
                }
            }
        }

        if out.len() > MAX_VIOLATIONS {
            out.truncate(MAX_VIOLATIONS);
            out.push(AxiomViolation::Truncated { omitted_at_least: 1 });
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use num_bigint::BigInt;

    #[test]
    fn catalog_rings_satisfy_axioms() {
        for name in catalog::catalog_names() {
            let ring = catalog::catalog_ring(name).unwrap();
            let violations = ring.validate();
            assert!(violations.is_empty(), "{name}: {violations:?}");
        }
        let c7 = catalog::catalog_ring("cyclic_7").unwrap();
        assert!(c7.is_valid());
    }

    #[test]
    fn structural_errors() {
        assert_eq!(FusionRing::new("x", 0, vec![], vec![]), Err(StructuralError::ZeroRank));
        assert!(matches!(
            FusionRing::new("x", 2, vec![0], vec![0; 8]),
            Err(StructuralError::DualLength { .. })
        ));
        assert!(matches!(
            FusionRing::new("x", 2, vec![0, 5], vec![0; 8]),
            Err(StructuralError::DualRange { .. })
        ));
        assert!(matches!(
            FusionRing::new("x", 2, vec![0, 1], vec![0; 7]),
            Err(StructuralError::TensorLength { .. })
        ));
    }

    fn tensor_from(rank: usize, rows: &[(usize, usize, &[u64])]) -> Vec<u64> {
        let mut t = vec![0u64; rank * rank * rank];
        for m in 0..rank {
            t[m * rank + m] = 1; // N[0,m]^m
            t[(m * rank) * rank + m] = 1; // N[m,0]^m
        }
        // slot (0,0,0) was written twice with the same value
        for &(i, j, row) in rows {
            for (m, &c) in row.iter().enumerate() {
                t[(i * rank + j) * rank + m] = c;
            }
        }
        t
    }

    #[test]
    fn violation_reporting_is_specific() {
        // Fibonacci with the unit multiplicity in b1*b1 doubled.
        let t = tensor_from(2, &[(1, 1, &[2, 1])]);
        let ring = FusionRing::new("bad_fib", 2, vec![0, 1], t).unwrap();
        let v = ring.validate();
        assert!(v.iter().any(|x| matches!(x, AxiomViolation::DualPairing { i: 1, j: 1, value: 2 })));
    }

    #[test]
    fn associativity_violation_detected_alone() {
        // Unit, duality, and reciprocity all hold, but the product is not
        // associative: b1*b1 = b0 + 2 b2, b1*b2 = b2*b1 = 2 b1, b2*b2 = b0.
        let t = tensor_from(
            3,
            &[(1, 1, &[1, 0, 2]), (1, 2, &[0, 2, 0]), (2, 1, &[0, 2, 0]), (2, 2, &[1, 0, 0])],
        );
        let ring = FusionRing::new("nonassoc", 3, vec![0, 1, 2], t).unwrap();
        let v = ring.validate();
        assert!(!v.is_empty());
        assert!(v.iter().all(|x| matches!(x, AxiomViolation::Associativity { .. })), "{v:?}");
    }

    #[test]
    fn product_and_inner_product() {
        let ring = catalog::catalog_ring("fibonacci").unwrap();
        let b1 = vec![BigInt::from(0), BigInt::from(1)];
        let sq = ring.multiply(&b1, &b1);
        assert_eq!(sq, vec![BigInt::from(1), BigInt::from(1)]);
        // (b1 b1, b1) = N[1,1]^1 via orthonormality of the basis
        assert_eq!(ring.inner(&sq, &b1), BigInt::from(1));
        assert_eq!(ring.tau(&sq), BigInt::from(1));
    }

    #[test]
    fn commutativity_detection() {
        assert!(catalog::catalog_ring("rep_s3").unwrap().is_commutative());
        assert!(!catalog::catalog_ring("vec_s3").unwrap().is_commutative());
    }
}
