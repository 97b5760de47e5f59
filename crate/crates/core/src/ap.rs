//! Arbitrary-precision real and complex scalars.
//!
//! Values are dyadic fixed-point numbers `mant / 2^fbits`, backed by `BigInt`.
//! All arithmetic rounds to the operand scale (round half away from zero), so
//! a value carries absolute precision `2^-fbits`. Comparisons against
//! thresholds go through an explicit tolerance; exact equality is only used on
//! bit-identical values.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;
use std::cmp::Ordering;
use std::fmt;

/// Default working precision in bits.
pub const DEFAULT_PRECISION: u32 = 256;

/// Fixed seed so repeated runs are byte-identical unless overridden.
pub const DEFAULT_SEED: u64 = 0x6672_696e_6721;

/// Extra bits carried beyond the requested precision so that accumulated
/// rounding stays below the reporting tolerance.
const GUARD_BITS: u32 = 64;

/// Threshold specification for approximate comparisons.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tolerance {
    /// `2^k`
    PowTwo(i64),
    /// `10^k`
    PowTen(i64),
}

/// Numeric configuration shared by the spectral and integrality engines.
#[derive(Clone, Copy, Debug)]
pub struct Context {
    pub precision: u32,
    pub tolerance: Tolerance,
    pub seed: u64,
}

impl Default for Context {
    fn default() -> Self {
        Context::new(DEFAULT_PRECISION)
    }
}

impl Context {
    pub fn new(precision: u32) -> Self {
        assert!(precision >= 32, "precision below 32 bits is not supported");
        Context {
            precision,
            tolerance: Tolerance::PowTwo(-((precision / 2) as i64)),
            seed: DEFAULT_SEED,
        }
    }

    pub fn with_tolerance(mut self, tolerance: Tolerance) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Fraction bits used for internal arithmetic.
    pub fn fbits(&self) -> u32 {
        self.precision + GUARD_BITS
    }

    pub fn tol(&self) -> ApReal {
        match self.tolerance {
            Tolerance::PowTwo(k) => ApReal::two_pow(k, self.fbits()),
            Tolerance::PowTen(k) => ApReal::ten_pow(k, self.fbits()),
        }
    }

    /// Minimal eigenvalue separation before a redraw is triggered.
    pub fn collision_gap(&self) -> ApReal {
        ApReal::two_pow(-((self.precision / 4) as i64), self.fbits())
    }

    /// Residual bound for accepting an integer relation.
    pub fn relation_threshold(&self) -> ApReal {
        ApReal::two_pow(-((self.precision / 4) as i64), self.fbits())
    }

    /// Scaling factor applied to powers of a value inside the relation lattice.
    pub fn lattice_scale_bits(&self) -> u32 {
        self.precision / 2
    }

    /// Independent generator for the given call site; `tag` keeps draws from
    /// different operations decorrelated under one user seed.
    pub fn rng(&self, tag: u64) -> ChaCha20Rng {
        let mut state = self.seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
        let mut seed = [0u8; 32];
        for chunk in seed.chunks_mut(8) {
            state = splitmix64(&mut state);
            chunk.copy_from_slice(&state.to_le_bytes());
        }
        ChaCha20Rng::from_seed(seed)
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Round `x / 2^k` to the nearest integer, halves away from zero.
fn shr_round(x: &BigInt, k: u32) -> BigInt {
    if k == 0 {
        return x.clone();
    }
    let half = BigInt::one() << (k - 1);
    let shifted = (x.abs() + half) >> k;
    if x.is_negative() {
        -shifted
    } else {
        shifted
    }
}

/// Round `a / b` (b > 0 or b < 0) to the nearest integer, halves away from zero.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    assert!(!b.is_zero(), "division by zero");
    let (na, nb) = (a.abs(), b.abs());
    let q = (&na * 2u8 + &nb) / (&nb * 2u8);
    if a.is_negative() == b.is_negative() {
        q
    } else {
        -q
    }
}

/// Dyadic fixed-point real number `mant / 2^fbits`.
#[derive(Clone, PartialEq, Eq)]
pub struct ApReal {
    mant: BigInt,
    fbits: u32,
}

impl ApReal {
    pub fn zero(fbits: u32) -> Self {
        ApReal { mant: BigInt::zero(), fbits }
    }

    pub fn one(fbits: u32) -> Self {
        ApReal::from_int(1, fbits)
    }

    pub fn from_int(n: i64, fbits: u32) -> Self {
        ApReal { mant: BigInt::from(n) << fbits, fbits }
    }

    pub fn from_bigint(n: &BigInt, fbits: u32) -> Self {
        ApReal { mant: n.clone() << fbits, fbits }
    }

    pub fn from_ratio(p: i64, q: i64, fbits: u32) -> Self {
        ApReal::from_big_ratio(&BigInt::from(p), &BigInt::from(q), fbits)
    }

    pub fn from_big_ratio(p: &BigInt, q: &BigInt, fbits: u32) -> Self {
        ApReal { mant: div_round(&(p.clone() << fbits), q), fbits }
    }

    /// Construct from a raw mantissa (value = `mant / 2^fbits`).
    pub fn from_mant(mant: BigInt, fbits: u32) -> Self {
        ApReal { mant, fbits }
    }

    /// `2^k`, also for negative `k`.
    pub fn two_pow(k: i64, fbits: u32) -> Self {
        let shift = fbits as i64 + k;
        if shift < 0 {
            return ApReal::zero(fbits);
        }
        ApReal { mant: BigInt::one() << (shift as u64), fbits }
    }

    /// `10^k`, also for negative `k`.
    pub fn ten_pow(k: i64, fbits: u32) -> Self {
        let ten = BigInt::from(10u8);
        if k >= 0 {
            ApReal::from_bigint(&ten.pow(k as u32), fbits)
        } else {
            ApReal::from_big_ratio(&BigInt::one(), &ten.pow((-k) as u32), fbits)
        }
    }

    pub fn fbits(&self) -> u32 {
        self.fbits
    }

    pub fn mant(&self) -> &BigInt {
        &self.mant
    }

    /// Rescale to a different number of fraction bits (exact when widening).
    pub fn with_fbits(&self, fbits: u32) -> Self {
        if fbits == self.fbits {
            self.clone()
        } else if fbits > self.fbits {
            ApReal { mant: &self.mant << (fbits - self.fbits), fbits }
        } else {
            ApReal { mant: shr_round(&self.mant, self.fbits - fbits), fbits }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn abs(&self) -> Self {
        ApReal { mant: self.mant.abs(), fbits: self.fbits }
    }

    pub fn neg(&self) -> Self {
        ApReal { mant: -&self.mant, fbits: self.fbits }
    }

    fn aligned(&self, other: &ApReal) -> (BigInt, BigInt, u32) {
        let fbits = self.fbits.max(other.fbits);
        let a = if self.fbits == fbits { self.mant.clone() } else { &self.mant << (fbits - self.fbits) };
        let b = if other.fbits == fbits { other.mant.clone() } else { &other.mant << (fbits - other.fbits) };
        (a, b, fbits)
    }

    pub fn cmp_val(&self, other: &ApReal) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }

    /// `|self| <= tol`
    pub fn within(&self, tol: &ApReal) -> bool {
        self.abs().cmp_val(tol) != Ordering::Greater
    }

    pub fn max_val(&self, other: &ApReal) -> ApReal {
        if self.cmp_val(other) == Ordering::Less {
            other.clone()
        } else {
            self.clone()
        }
    }

    pub fn add(&self, other: &ApReal) -> ApReal {
        let (a, b, fbits) = self.aligned(other);
        ApReal { mant: a + b, fbits }
    }

    pub fn sub(&self, other: &ApReal) -> ApReal {
        let (a, b, fbits) = self.aligned(other);
        ApReal { mant: a - b, fbits }
    }

    pub fn mul(&self, other: &ApReal) -> ApReal {
        let (a, b, fbits) = self.aligned(other);
        ApReal { mant: shr_round(&(a * b), fbits), fbits }
    }

    pub fn mul_i64(&self, k: i64) -> ApReal {
        ApReal { mant: &self.mant * k, fbits: self.fbits }
    }

    pub fn div(&self, other: &ApReal) -> ApReal {
        let (a, b, fbits) = self.aligned(other);
        ApReal { mant: div_round(&(a << fbits), &b), fbits }
    }

    pub fn recip(&self) -> ApReal {
        ApReal::one(self.fbits).div(self)
    }

    pub fn half(&self) -> ApReal {
        ApReal { mant: shr_round(&self.mant, 1), fbits: self.fbits }
    }

    /// Square root of a nonnegative value. Mantissas that are negative by less
    /// than a few ulps (rounding noise on true zeros) are clamped to zero.
    pub fn sqrt(&self) -> ApReal {
        if self.mant.is_negative() {
            let slack = BigInt::from(1u8) << 16;
            assert!(
                self.mant.abs() <= slack,
                "sqrt of a negative value: {}",
                self.to_decimal(40)
            );
            return ApReal::zero(self.fbits);
        }
        let target = &self.mant << self.fbits;
        let root = target.sqrt();
        // floor root; nudge to nearest
        let up = &root + 1u8;
        let mant = if (&up * &up - &target).abs() < (&root * &root - &target).abs() {
            up
        } else {
            root
        };
        ApReal { mant, fbits: self.fbits }
    }

    /// `n`-th root of a nonnegative value.
    pub fn nth_root(&self, n: u32) -> ApReal {
        assert!(n >= 1);
        if n == 1 {
            return self.clone();
        }
        if n == 2 {
            return self.sqrt();
        }
        assert!(!self.mant.is_negative(), "nth_root of a negative value");
        let target = &self.mant << (self.fbits as u64 * (n as u64 - 1));
        let root = target.nth_root(n);
        let up = &root + 1u8;
        let mant = if (up.pow(n) - &target).abs() < (root.pow(n) - &target).abs() {
            up
        } else {
            root
        };
        ApReal { mant, fbits: self.fbits }
    }

    pub fn powi(&self, k: i64) -> ApReal {
        if k < 0 {
            return self.powi(-k).recip();
        }
        let mut acc = ApReal::one(self.fbits);
        let mut base = self.clone();
        let mut e = k as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `x^(p/q)` for nonnegative `x` (negative base only with integer result
    /// being requested via `q == 1`).
    pub fn pow_ratio(&self, p: i64, q: u32) -> ApReal {
        assert!(q >= 1);
        if q == 1 {
            return self.powi(p);
        }
        assert!(!self.mant.is_negative(), "fractional power of a negative value");
        if p < 0 {
            return self.pow_ratio(-p, q).recip();
        }
        self.powi(p).nth_root(q)
    }

    /// Nearest integer.
    pub fn round_bigint(&self) -> BigInt {
        shr_round(&self.mant, self.fbits)
    }

    /// Distance to the nearest integer.
    pub fn frac_dist(&self) -> ApReal {
        let rounded = ApReal::from_bigint(&self.round_bigint(), self.fbits);
        self.sub(&rounded).abs()
    }

    pub fn to_f64(&self) -> f64 {
        let digits = 18usize;
        let scaled = shr_round(&(&self.mant * BigInt::from(10u8).pow(digits as u32)), self.fbits);
        scaled.to_f64().unwrap_or(f64::NAN) / 1e18
    }

    /// Fixed-width decimal rendering with `digits` fractional digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        let neg = self.mant.is_negative();
        let a = self.mant.abs();
        let scale = BigInt::from(10u8).pow(digits as u32);
        let scaled = shr_round(&(&a * &scale), self.fbits);
        let whole = &scaled / &scale;
        let frac = &scaled % &scale;
        let mut s = String::new();
        if neg && !scaled.is_zero() {
            s.push('-');
        }
        s.push_str(&whole.to_string());
        if digits > 0 {
            s.push('.');
            let f = frac.to_string();
            for _ in f.len()..digits {
                s.push('0');
            }
            s.push_str(&f);
        }
        s
    }
}

impl fmt::Debug for ApReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ApReal({})", self.to_decimal(24))
    }
}

impl fmt::Display for ApReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(24))
    }
}

/// Complex number over [`ApReal`].
#[derive(Clone, PartialEq, Eq)]
pub struct ApComplex {
    pub re: ApReal,
    pub im: ApReal,
}

impl ApComplex {
    pub fn zero(fbits: u32) -> Self {
        ApComplex { re: ApReal::zero(fbits), im: ApReal::zero(fbits) }
    }

    pub fn one(fbits: u32) -> Self {
        ApComplex { re: ApReal::one(fbits), im: ApReal::zero(fbits) }
    }

    pub fn from_real(re: ApReal) -> Self {
        let fbits = re.fbits();
        ApComplex { re, im: ApReal::zero(fbits) }
    }

    pub fn from_int(n: i64, fbits: u32) -> Self {
        ApComplex::from_real(ApReal::from_int(n, fbits))
    }

    pub fn new(re: ApReal, im: ApReal) -> Self {
        ApComplex { re, im }
    }

    pub fn fbits(&self) -> u32 {
        self.re.fbits()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        ApComplex { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn neg(&self) -> Self {
        ApComplex { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn add(&self, o: &ApComplex) -> Self {
        ApComplex { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub(&self, o: &ApComplex) -> Self {
        ApComplex { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn mul(&self, o: &ApComplex) -> Self {
        ApComplex {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn scale(&self, k: &ApReal) -> Self {
        ApComplex { re: self.re.mul(k), im: self.im.mul(k) }
    }

    pub fn scale_i64(&self, k: i64) -> Self {
        ApComplex { re: self.re.mul_i64(k), im: self.im.mul_i64(k) }
    }

    pub fn div_real(&self, k: &ApReal) -> Self {
        ApComplex { re: self.re.div(k), im: self.im.div(k) }
    }

    pub fn div(&self, o: &ApComplex) -> Self {
        let n = o.norm_sqr();
        self.mul(&o.conj()).div_real(&n)
    }

    pub fn norm_sqr(&self) -> ApReal {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn abs(&self) -> ApReal {
        self.norm_sqr().sqrt()
    }

    /// max(|re|, |im|); cheap magnitude bound for tolerance checks.
    pub fn norm_inf(&self) -> ApReal {
        self.re.abs().max_val(&self.im.abs())
    }

    pub fn within(&self, tol: &ApReal) -> bool {
        self.norm_inf().within(tol)
    }
}

impl fmt::Debug for ApComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ApComplex({}, {})", self.re.to_decimal(24), self.im.to_decimal(24))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const F: u32 = 192;

    #[test]
    fn decimal_rendering() {
        let third = ApReal::from_ratio(1, 3, F);
        assert!(third.to_decimal(12).starts_with("0.333333333333"));
        let neg = ApReal::from_ratio(-1, 2, F);
        assert_eq!(neg.to_decimal(4), "-0.5000");
        assert_eq!(ApReal::from_int(42, F).to_decimal(0), "42");
        assert_eq!(ApReal::zero(F).to_decimal(3), "0.000");
    }

    #[test]
    fn sqrt_known_digits() {
        // sqrt(2) = 1.41421356237309504880168872420969807856967187537694...
        let s = ApReal::from_int(2, F).sqrt();
        assert_eq!(
            s.to_decimal(50),
            "1.41421356237309504880168872420969807856967187537695"
        );
        let err = s.mul(&s).sub(&ApReal::from_int(2, F));
        assert!(err.within(&ApReal::two_pow(-(F as i64) + 4, F)));
    }

    #[test]
    fn roots_and_powers() {
        let x = ApReal::from_int(27, F);
        let c = x.nth_root(3);
        assert!(c.sub(&ApReal::from_int(3, F)).within(&ApReal::two_pow(-(F as i64) + 4, F)));

        let two = ApReal::from_int(2, F);
        let p = two.pow_ratio(3, 2); // 2^1.5 = 2*sqrt(2)
        let expect = two.mul(&two.sqrt());
        assert!(p.sub(&expect).within(&ApReal::two_pow(-(F as i64) + 8, F)));

        let inv = two.powi(-3);
        assert_eq!(inv.to_decimal(4), "0.1250");
    }

    #[test]
    fn rounding_to_integers() {
        assert_eq!(ApReal::from_ratio(5, 2, F).round_bigint(), BigInt::from(3));
        assert_eq!(ApReal::from_ratio(-5, 2, F).round_bigint(), BigInt::from(-3));
        assert_eq!(ApReal::from_ratio(7, 3, F).round_bigint(), BigInt::from(2));
        let d = ApReal::from_ratio(7, 3, F).frac_dist();
        assert!(d.sub(&ApReal::from_ratio(1, 3, F)).within(&ApReal::two_pow(-(F as i64) + 4, F)));
    }

    #[test]
    fn tolerance_values() {
        let ctx = Context::new(128).with_tolerance(Tolerance::PowTen(-20));
        let tol = ctx.tol();
        assert!(tol.to_decimal(21).ends_with("10"));
        let ctx2 = Context::new(128);
        assert_eq!(ctx2.tol(), ApReal::two_pow(-64, ctx2.fbits()));
    }

    #[test]
    fn complex_arithmetic() {
        let i = ApComplex::new(ApReal::zero(F), ApReal::one(F));
        let sq = i.mul(&i);
        assert!(sq.add(&ApComplex::one(F)).within(&ApReal::two_pow(-(F as i64) + 4, F)));
        let z = ApComplex::new(ApReal::from_int(3, F), ApReal::from_int(4, F));
        assert_eq!(z.abs().to_decimal(6), "5.000000");
        let w = z.div(&z);
        assert!(w.sub(&ApComplex::one(F)).within(&ApReal::two_pow(-(F as i64) + 8, F)));
    }

    #[test]
    fn rng_is_deterministic() {
        use rand::RngCore;
        let ctx = Context::default();
        let mut a = ctx.rng(7);
        let mut b = ctx.rng(7);
        assert_eq!(a.next_u64(), b.next_u64());
        let mut c = ctx.rng(8);
        let _ = c.next_u64();
    }
}
