//! Built-in rings used as test fixtures and baselines.
//!
//! All entries validate cleanly. `cyclic_<n>` is resolved by pattern for
//! 2 <= n <= 64; the remaining names are fixed small rings.

use crate::ring::FusionRing;

/// Canonical iteration set ("every catalog ring" in tests and docs). The
/// resolver additionally accepts `cyclic_<n>` for any n up to 64.
pub fn catalog_names() -> Vec<&'static str> {
    vec!["fibonacci", "ising", "rep_s3", "su2_3", "cyclic_2", "cyclic_3", "cyclic_4", "cyclic_6", "vec_s3"]
}

/// Human-oriented descriptions for the CLI listing.
pub fn catalog_descriptions() -> Vec<(&'static str, &'static str)> {
    vec![
        ("fibonacci", "rank 2; b1*b1 = b0 + b1"),
        ("ising", "rank 3; basis 1, psi, sigma with sigma^2 = 1 + psi"),
        ("rep_s3", "rank 3; character ring of the symmetric group S3"),
        ("su2_3", "rank 4 commutative; level-3 quantum SU(2) fusion rules"),
        ("cyclic_<n>", "rank n; group ring of Z/n (2 <= n <= 64)"),
        ("vec_s3", "rank 6 noncommutative; group ring of S3"),
    ]
}

pub fn catalog_ring(name: &str) -> Option<FusionRing> {
    match name {
        "fibonacci" => Some(fibonacci()),
        "ising" => Some(ising()),
        "rep_s3" => Some(rep_s3()),
        "su2_3" => Some(su2_3()),
        "vec_s3" => Some(vec_s3()),
        _ => {
            let n: usize = name.strip_prefix("cyclic_")?.parse().ok()?;
            if (2..=64).contains(&n) {
                Some(cyclic(n))
            } else {
                None
            }
        }
    }
}

struct TensorBuilder {
    rank: usize,
    data: Vec<u64>,
}

impl TensorBuilder {
    /// Start from the unit rows `b_0 * b_m = b_m * b_0 = b_m`.
    fn new(rank: usize) -> Self {
        let mut data = vec![0u64; rank * rank * rank];
        for m in 0..rank {
            data[m * rank + m] = 1;
            data[(m * rank) * rank + m] = 1;
        }
        TensorBuilder { rank, data }
    }

    fn set(&mut self, i: usize, j: usize, row: &[u64]) -> &mut Self {
        assert_eq!(row.len(), self.rank);
        let start = (i * self.rank + j) * self.rank;
        self.data[start..start + self.rank].copy_from_slice(row);
        self
    }

    fn build(self, name: &str, dual: Vec<usize>) -> FusionRing {
        FusionRing::new(name, self.rank, dual, self.data).expect("catalog ring is structurally sound")
    }
}

fn fibonacci() -> FusionRing {
    let mut t = TensorBuilder::new(2);
    t.set(1, 1, &[1, 1]);
    t.build("fibonacci", vec![0, 1])
}

fn ising() -> FusionRing {
    let mut t = TensorBuilder::new(3);
    t.set(1, 1, &[1, 0, 0]);
    t.set(1, 2, &[0, 0, 1]);
    t.set(2, 1, &[0, 0, 1]);
    t.set(2, 2, &[1, 1, 0]);
    t.build("ising", vec![0, 1, 2])
}

fn rep_s3() -> FusionRing {
    let mut t = TensorBuilder::new(3);
    t.set(1, 1, &[1, 0, 0]);
    t.set(1, 2, &[0, 0, 1]);
    t.set(2, 1, &[0, 0, 1]);
    t.set(2, 2, &[1, 1, 1]);
    t.build("rep_s3", vec![0, 1, 2])
}

/// Level-3 SU(2) rules on labels 0..3 (twice the spin): `m` appears in `i*j`
/// iff `|i-j| <= m <= min(i+j, 6-i-j)` with `m = i+j mod 2`.
fn su2_3() -> FusionRing {
    let mut t = TensorBuilder::new(4);
    for i in 1..4 {
        for j in 1..4 {
            let mut row = [0u64; 4];
            let lo = i.max(j) - i.min(j);
            let hi = (i + j).min(6 - i - j);
            let mut m = lo;
            while m <= hi {
                row[m] = 1;
                m += 2;
            }
            t.set(i, j, &row);
        }
    }
    t.build("su2_3", vec![0, 1, 2, 3])
}

fn cyclic(n: usize) -> FusionRing {
    let mut t = TensorBuilder::new(n);
    for i in 1..n {
        for j in 1..n {
            let mut row = vec![0u64; n];
            row[(i + j) % n] = 1;
            t.set(i, j, &row);
        }
    }
    let dual = (0..n).map(|i| (n - i) % n).collect();
    t.build(&format!("cyclic_{n}"), dual)
}

/// Group ring of S3. Elements are the six permutations of {0,1,2} in
/// lexicographic one-line order, index 0 the identity.
fn vec_s3() -> FusionRing {
    let perms: [[usize; 3]; 6] =
        [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let compose = |g: &[usize; 3], h: &[usize; 3]| -> [usize; 3] {
        [g[h[0]], g[h[1]], g[h[2]]]
    };
    let index_of = |p: &[usize; 3]| perms.iter().position(|q| q == p).unwrap();

    let mut t = TensorBuilder::new(6);
    for i in 1..6 {
        for j in 1..6 {
            let mut row = [0u64; 6];
            row[index_of(&compose(&perms[i], &perms[j]))] = 1;
            t.set(i, j, &row);
        }
    }
    let dual = (0..6)
        .map(|i| {
            let mut inv = [0usize; 3];
            for (a, &b) in perms[i].iter().enumerate() {
                inv[b] = a;
            }
            index_of(&inv)
        })
        .collect();
    t.build("vec_s3", dual)
}
