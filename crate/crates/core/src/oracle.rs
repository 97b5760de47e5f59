//! Brute-force permutation-group oracle.
//!
//! Independent ground truth for the character-ring identities: enumerate a
//! small permutation group, count solution tuples `g_1 ... g_n = 1` with
//! `g_i` confined to conjugacy classes, and compare the exact counts against
//! the spectral invariants `J_{n,0} / dimC` of the corresponding character
//! ring. Everything here is exact integer combinatorics, so agreement with
//! the numerics is a genuine two-path check.

use crate::ap::{ApReal, Context};
use crate::integrality::{j_ns, CenterDims, SExp};
use crate::spectra::Spectrum;
use num_traits::Zero;
use std::cmp::Ordering;
use std::collections::HashMap;
use thiserror::Error;

const MAX_DEGREE: usize = 8;
const ORDER_CAP: usize = 10_000;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("permutation degree {0} exceeds the supported maximum {MAX_DEGREE}")]
    Degree(usize),
    #[error("generator {0:?} is not a permutation of 0..{1}")]
    BadGenerator(Vec<usize>, usize),
    #[error("group order exceeds the cap of {ORDER_CAP}")]
    OrderCap,
    #[error("class/character correspondence failed: {0}")]
    Correspondence(String),
}

/// A finite permutation group with its conjugacy-class partition.
#[derive(Clone, Debug)]
pub struct PermGroup {
    pub degree: usize,
    pub generators: Vec<Vec<usize>>,
    /// All elements, index 0 the identity, in breadth-first discovery order.
    pub elements: Vec<Vec<usize>>,
    /// Conjugacy classes as sorted element-index lists, ordered by smallest
    /// member (the identity class comes first).
    pub classes: Vec<Vec<usize>>,
    /// `class_of[e]` = index of the class containing element `e`.
    pub class_of: Vec<usize>,
    /// `centralizer_orders[c] * |classes[c]| = |G|`.
    pub centralizer_orders: Vec<usize>,
    inverses: Vec<usize>,
    index: HashMap<Vec<usize>, usize>,
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&x| a[x]).collect()
}

fn inverse(a: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; a.len()];
    for (x, &y) in a.iter().enumerate() {
        inv[y] = x;
    }
    inv
}

/// Closure of the generators under composition, plus conjugacy data.
pub fn enumerate(degree: usize, generators: &[Vec<usize>]) -> Result<PermGroup, OracleError> {
    if degree > MAX_DEGREE {
        return Err(OracleError::Degree(degree));
    }
    for g in generators {
        let mut seen = vec![false; degree];
        if g.len() != degree || g.iter().any(|&x| x >= degree || std::mem::replace(&mut seen[x], true)) {
            return Err(OracleError::BadGenerator(g.clone(), degree));
        }
    }

    let identity: Vec<usize> = (0..degree).collect();
    let mut elements = vec![identity.clone()];
    let mut index = HashMap::new();
    index.insert(identity, 0usize);
    let mut head = 0usize;
    while head < elements.len() {
        for g in generators {
            let next = compose(&elements[head], g);
            if !index.contains_key(&next) {
                if elements.len() >= ORDER_CAP {
                    return Err(OracleError::OrderCap);
                }
                index.insert(next.clone(), elements.len());
                elements.push(next);
            }
        }
        head += 1;
    }

    let order = elements.len();
    let inverses: Vec<usize> = elements.iter().map(|e| index[&inverse(e)]).collect();

    // Conjugation orbits, explored with generators only (they generate G).
    let mut class_of = vec![usize::MAX; order];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for start in 0..order {
        if class_of[start] != usize::MAX {
            continue;
        }
        let c = classes.len();
        let mut members = vec![start];
        class_of[start] = c;
        let mut head = 0;
        while head < members.len() {
            let x = members[head];
            for g in generators {
                let gi = index[&inverse(g)];
                let conj = compose(&compose(&elements[gi], &elements[x]), g);
                let ci = index[&conj];
                if class_of[ci] == usize::MAX {
                    class_of[ci] = c;
                    members.push(ci);
                }
            }
            head += 1;
        }
        members.sort_unstable();
        classes.push(members);
    }
    assert_eq!(classes.iter().map(|c| c.len()).sum::<usize>(), order);
    let centralizer_orders: Vec<usize> = classes
        .iter()
        .map(|c| {
            assert_eq!(order % c.len(), 0, "class size must divide the group order");
            order / c.len()
        })
        .collect();

    Ok(PermGroup {
        degree,
        generators: generators.to_vec(),
        elements,
        classes,
        class_of,
        centralizer_orders,
        inverses,
        index,
    })
}

impl PermGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn product(&self, a: usize, b: usize) -> usize {
        self.index[&compose(&self.elements[a], &self.elements[b])]
    }

    pub fn inverse_of(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// Exhaustively iterate over all solution tuples `(g_1, .., g_n)` with
    /// `g_i` in the i-th listed class and `g_1 ... g_n = 1`.
    fn for_each_tuple(&self, class_indices: &[usize], mut f: impl FnMut(&[usize])) {
        let n = class_indices.len();
        assert!(n >= 2, "tuple length must be at least 2");
        let free: Vec<&Vec<usize>> = class_indices[..n - 1].iter().map(|&c| &self.classes[c]).collect();
        let last_class = class_indices[n - 1];
        let mut odo = vec![0usize; n - 1];
        let mut tuple = vec![0usize; n];
        loop {
            let mut prod = 0usize; // identity
            for (k, slot) in free.iter().enumerate() {
                tuple[k] = slot[odo[k]];
                prod = self.product(prod, tuple[k]);
            }
            let forced = self.inverse_of(prod);
            if self.class_of[forced] == last_class {
                tuple[n - 1] = forced;
                f(&tuple);
            }
            let mut k = 0;
            loop {
                if k == n - 1 {
                    return;
                }
                odo[k] += 1;
                if odo[k] < free[k].len() {
                    break;
                }
                odo[k] = 0;
                k += 1;
            }
        }
    }

    /// Number of solution tuples for the given classes.
    pub fn count_tuples(&self, class_indices: &[usize]) -> u64 {
        let mut count = 0u64;
        self.for_each_tuple(class_indices, |_| count += 1);
        count
    }

    /// Orbits of the solution set under simultaneous conjugation; every
    /// orbit size must be divisible by every class size in the tuple.
    pub fn solution_orbit_check(&self, class_indices: &[usize]) -> OrbitCheck {
        let mut solutions: Vec<Vec<usize>> = Vec::new();
        self.for_each_tuple(class_indices, |t| solutions.push(t.to_vec()));
        let pos: HashMap<Vec<usize>, usize> =
            solutions.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        let mut orbit_of = vec![usize::MAX; solutions.len()];
        let mut orbit_sizes = Vec::new();
        for start in 0..solutions.len() {
            if orbit_of[start] != usize::MAX {
                continue;
            }
            let orbit = orbit_sizes.len();
            let mut members = vec![start];
            orbit_of[start] = orbit;
            let mut head = 0;
            while head < members.len() {
                let t = solutions[members[head]].clone();
                for g in &self.generators {
                    let gidx = self.index[g];
                    let ginv = self.inverses[gidx];
                    let image: Vec<usize> = t
                        .iter()
                        .map(|&x| self.product(self.product(ginv, x), gidx))
                        .collect();
                    let i = pos[&image];
                    if orbit_of[i] == usize::MAX {
                        orbit_of[i] = orbit;
                        members.push(i);
                    }
                }
                head += 1;
            }
            orbit_sizes.push(members.len());
        }
        let divisibility_ok = orbit_sizes.iter().all(|&s| {
            class_indices.iter().all(|&c| s % self.classes[c].len() == 0)
        });
        OrbitCheck { tuple_count: solutions.len() as u64, orbit_sizes, divisibility_ok }
    }
}

#[derive(Clone, Debug)]
pub struct OrbitCheck {
    pub tuple_count: u64,
    pub orbit_sizes: Vec<usize>,
    pub divisibility_ok: bool,
}

/// Result of comparing exact tuple counts with `J_{n,0} / dimC`.
#[derive(Clone, Debug)]
pub struct Crosscheck {
    /// `correspondence[c]` = spectrum character index matched to class `c`.
    pub correspondence: Vec<usize>,
    pub tuples_checked: usize,
    pub max_residual: ApReal,
    /// Class tuple attaining the maximum residual.
    pub worst: Vec<usize>,
}

/// Match classes to spectrum characters by `dimZ = class size`; errors if no
/// bijection exists or several do (sizes must disambiguate).
pub fn size_correspondence(g: &PermGroup, cd: &CenterDims) -> Result<Vec<usize>, OracleError> {
    let r = cd.dimz.len();
    if r != g.classes.len() {
        return Err(OracleError::Correspondence(format!(
            "{} classes vs {} characters",
            g.classes.len(),
            r
        )));
    }
    let half = ApReal::from_ratio(1, 2, cd.dimc.fbits());
    let mut candidates: Vec<Vec<usize>> = Vec::with_capacity(r);
    for class in &g.classes {
        let matches: Vec<usize> = (0..r)
            .filter(|&s| {
                cd.dimz[s].sub(&ApReal::from_int(class.len() as i64, cd.dimc.fbits())).within(&half)
            })
            .collect();
        candidates.push(matches);
    }
    let mut used = vec![false; r];
    let mut out = Vec::with_capacity(r);
    let mut count = 0usize;
    fn assign(
        c: usize,
        candidates: &[Vec<usize>],
        used: &mut [bool],
        cur: &mut Vec<usize>,
        found: &mut Vec<usize>,
        count: &mut usize,
    ) {
        if c == candidates.len() {
            *count += 1;
            if *count == 1 {
                *found = cur.clone();
            }
            return;
        }
        for &s in &candidates[c] {
            if !used[s] {
                used[s] = true;
                cur.push(s);
                assign(c + 1, candidates, used, cur, found, count);
                cur.pop();
                used[s] = false;
            }
        }
    }
    let mut cur = Vec::new();
    assign(0, &candidates, &mut used, &mut cur, &mut out, &mut count);
    match count {
        0 => Err(OracleError::Correspondence(
            "no bijection matches dimZ values to class sizes".to_string(),
        )),
        1 => Ok(out),
        _ => Err(OracleError::Correspondence(
            "class sizes do not determine the bijection; pass one explicitly".to_string(),
        )),
    }
}

/// For every class tuple at each `n` in `3..=nmax`, compare the exact count
/// with `J_{n,0}/dimC` computed from the spectrum. `correspondence` may be
/// supplied; otherwise it is derived from class sizes.
pub fn crosscheck_rep(
    g: &PermGroup,
    sp: &Spectrum,
    nmax: usize,
    correspondence: Option<Vec<usize>>,
    ctx: &Context,
) -> Result<Crosscheck, OracleError> {
    assert!(nmax >= 3);
    let cd = CenterDims::new(sp, ctx)
        .map_err(|e| OracleError::Correspondence(e.to_string()))?;
    let corr = match correspondence {
        Some(c) => c,
        None => size_correspondence(g, &cd)?,
    };
    let fbits = ctx.fbits();
    for (c, class) in g.classes.iter().enumerate() {
        let diff = cd.dimz[corr[c]]
            .sub(&ApReal::from_int(class.len() as i64, fbits));
        if !diff.within(&ctx.tol()) {
            return Err(OracleError::Correspondence(format!(
                "dimZ of character {} differs from size of class {c}",
                corr[c]
            )));
        }
    }

    let zero = SExp::zero();
    let nclasses = g.classes.len();
    let mut max_residual = ApReal::zero(fbits);
    let mut worst = Vec::new();
    let mut tuples_checked = 0usize;
    for n in 3..=nmax {
        let mut tuple = vec![0usize; n];
        loop {
            let count = g.count_tuples(&tuple);
            let slots: Vec<usize> = tuple.iter().map(|&c| corr[c]).collect();
            let j = j_ns(sp, &cd, zero, &slots).div_real(&cd.dimc);
            let expected = ApReal::from_int(count as i64, fbits);
            let residual = j.sub(&crate::ap::ApComplex::from_real(expected)).abs();
            tuples_checked += 1;
            if residual.cmp_val(&max_residual) == Ordering::Greater {
                max_residual = residual;
                worst = tuple.clone();
            }
            let mut k = 0;
            loop {
                if k == n {
                    break;
                }
                tuple[k] += 1;
                if tuple[k] < nclasses {
                    break;
                }
                tuple[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
        }
    }
    Ok(Crosscheck { correspondence: corr, tuples_checked, max_residual, worst })
}

/// The symmetric group on three points, generated by a transposition and a
/// three-cycle. Classes come out ordered (identity, transpositions,
/// three-cycles) with sizes (1, 3, 2).
pub fn s3() -> PermGroup {
    enumerate(3, &[vec![1, 0, 2], vec![1, 2, 0]]).expect("S3 enumerates")
}

/// Cyclic group of order n as the rotation of n points (n <= 8).
pub fn cyclic_group(n: usize) -> Result<PermGroup, OracleError> {
    assert!(n >= 1);
    let gen: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    enumerate(n, &[gen])
}

/// Dihedral group of the square: rotation and a diagonal flip on 4 points.
pub fn d4() -> PermGroup {
    enumerate(4, &[vec![1, 2, 3, 0], vec![0, 3, 2, 1]]).expect("D4 enumerates")
}
