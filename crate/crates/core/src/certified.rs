//! Certified enclosures for `ln` and `exp` over rationals.
//!
//! Values are computed in binary fixed point with every rounding directed
//! outward, so the returned interval always contains the true value. A
//! comparison against an enclosure is decided on the unfavourable endpoint
//! and retried at higher precision when the interval straddles the other
//! side; only then is it reported as undecided.

use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::rational::{self, Rational};
use crate::{Error, Result};

/// Working precisions (bits) tried in turn by the deciding comparisons.
pub const PRECISIONS: [u32; 3] = [128, 512, 2048];

/// Bit budget under which `a ≥ b^(u/d)` is decided by raising both sides
/// to the power `d`.
pub const EXACT_POWER_BITS: u64 = 1 << 16;

/// A closed interval `[lo, hi]` known to contain some real number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: Rational,
    pub hi: Rational,
}

impl Enclosure {
    pub fn exact(x: Rational) -> Self {
        Self { lo: x.clone(), hi: x }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint_f64(&self) -> f64 {
        (rational::to_f64(&self.lo) + rational::to_f64(&self.hi)) / 2.0
    }

    fn scale(&self, k: &Rational) -> Self {
        let (a, b) = (&self.lo * k, &self.hi * k);
        if k.is_negative() {
            Self { lo: b, hi: a }
        } else {
            Self { lo: a, hi: b }
        }
    }
}

/// Outcome of a certified comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Holds,
    Fails,
    Undecided,
}

impl Decision {
    pub fn holds(self) -> bool {
        self == Decision::Holds
    }
}

/// Outcome of comparing `a` with `b^x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowOrdering {
    Less,
    Equal,
    Greater,
    Undecided,
}

impl PowOrdering {
    fn from_ordering(o: Ordering) -> Self {
        match o {
            Ordering::Less => Self::Less,
            Ordering::Equal => Self::Equal,
            Ordering::Greater => Self::Greater,
        }
    }

    /// `a ≥ b^x` certified.
    pub fn is_ge(self) -> bool {
        matches!(self, Self::Equal | Self::Greater)
    }
}

fn pow2(p: u32) -> BigInt {
    BigInt::one() << p as usize
}

fn floor_scaled(x: &Rational, p: u32) -> BigInt {
    (x.numer() << p as usize).div_floor(x.denom())
}

fn ceil_scaled(x: &Rational, p: u32) -> BigInt {
    -((-x.numer() << p as usize).div_floor(x.denom()))
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

fn unscale(v: BigInt, p: u32) -> Rational {
    Rational::new(v, pow2(p))
}

/// Bounds on `atanh(z) · 2^p` for `z` enclosed by `[zl, zh] / 2^p`,
/// `0 ≤ z ≤ 1/2`.
fn atanh_fixed(zl: &BigInt, zh: &BigInt, p: u32) -> (BigInt, BigInt) {
    let one = pow2(p);

    let z2 = (zl * zl) >> p as usize;
    let mut pow = zl.clone();
    let mut lo = BigInt::zero();
    let mut k = 0u32;
    while !pow.is_zero() {
        lo += &pow / BigInt::from(2 * k + 1);
        pow = (&pow * &z2) >> p as usize;
        k += 1;
    }

    let z2 = ceil_div(&(zh * zh), &one);
    let mut pow = zh.clone();
    let mut hi = BigInt::zero();
    let mut k = 0u32;
    while pow > BigInt::one() {
        hi += ceil_div(&pow, &BigInt::from(2 * k + 1));
        pow = ceil_div(&(&pow * &z2), &one);
        k += 1;
    }
    // Remaining tail is at most pow / (1 - z^2) ≤ 2 pow (z ≤ 1/2).
    hi += pow * 2 + 2;
    (lo, hi)
}

/// `ln 2 = 2 atanh(1/3)`, as fixed-point bounds at scale `2^p`.
fn ln2_fixed(p: u32) -> (BigInt, BigInt) {
    let third = rational::ratio(1, 3);
    let (lo, hi) = atanh_fixed(&floor_scaled(&third, p), &ceil_scaled(&third, p), p);
    (lo * 2, hi * 2)
}

pub fn ln2(prec: u32) -> Enclosure {
    let p = prec + 8;
    let (lo, hi) = ln2_fixed(p);
    Enclosure { lo: unscale(lo, p), hi: unscale(hi, p) }
}

/// Writes `x = m · 2^e` with `1 ≤ m < 2`.
fn split_binary(x: &Rational) -> (Rational, i64) {
    let mut e = x.numer().bits() as i64 - x.denom().bits() as i64;
    let two = Rational::from_integer(2.into());
    let shift = |e: i64| {
        if e >= 0 {
            x / Rational::from_integer(pow2(e as u32))
        } else {
            x * Rational::from_integer(pow2((-e) as u32))
        }
    };
    let mut m = shift(e);
    while m < Rational::one() {
        e -= 1;
        m = shift(e);
    }
    while m >= two {
        e += 1;
        m = shift(e);
    }
    (m, e)
}

/// Enclosure of `ln x`, `x > 0`, accurate to roughly `prec` bits.
pub fn ln(x: &Rational, prec: u32) -> Result<Enclosure> {
    if !x.is_positive() {
        return Err(Error::param("x", "logarithm needs a positive argument"));
    }
    if x.is_one() {
        return Ok(Enclosure::exact(Rational::zero()));
    }
    let (m, e) = split_binary(x);
    let p = prec + 16 + (64 - e.unsigned_abs().leading_zeros());
    let z = (&m - Rational::one()) / (&m + Rational::one());
    let (al, ah) = atanh_fixed(&floor_scaled(&z, p), &ceil_scaled(&z, p), p);
    let (l2l, l2h) = ln2_fixed(p);
    let eb = BigInt::from(e);
    let (el, eh) = if e >= 0 { (&eb * l2l, &eb * l2h) } else { (&eb * l2h, &eb * l2l) };
    Ok(Enclosure { lo: unscale(al * 2 + el, p), hi: unscale(ah * 2 + eh, p) })
}

/// Bounds on `e^{-r} · 2^p` for `r = R / 2^p ∈ [0, 1)` using the
/// alternating Taylor series.
fn exp_neg_taylor(r: &BigInt, p: u32) -> (BigInt, BigInt) {
    let one = pow2(p);
    let mut up: Vec<BigInt> = alloc::vec![one.clone()];
    let mut down: Vec<BigInt> = alloc::vec![one.clone()];
    let mut k = 1u32;
    loop {
        let den = &one * BigInt::from(k);
        let u = ceil_div(&(up.last().unwrap() * r), &den);
        let d = (down.last().unwrap() * r).div_floor(&den);
        up.push(u);
        down.push(d);
        if up.last().unwrap() <= &BigInt::one() && k >= 3 {
            break;
        }
        k += 1;
    }
    let last = up.len() - 1;
    let odd_end = if last % 2 == 1 { last } else { last - 1 };
    let even_end = if last % 2 == 0 { last } else { last - 1 };
    let mut lo = BigInt::zero();
    for j in 0..=odd_end {
        if j % 2 == 0 {
            lo += &down[j];
        } else {
            lo -= &up[j];
        }
    }
    let mut hi = BigInt::zero();
    for j in 0..=even_end {
        if j % 2 == 0 {
            hi += &up[j];
        } else {
            hi -= &down[j];
        }
    }
    if lo.is_negative() {
        lo = BigInt::zero();
    }
    (lo, hi)
}

/// Enclosure of `e^{-y}` for `y ≥ 0`, with relative accuracy of roughly
/// `prec` bits.
fn exp_neg(y: &Rational, prec: u32) -> Enclosure {
    if y.is_zero() {
        return Enclosure::exact(Rational::one());
    }
    // e^{-y} < 2^{-y} for y > 0; beyond this point report [0, 2^-LIMIT].
    const LIMIT: u32 = 1 << 20;
    if *y > Rational::from_integer(LIMIT.into()) {
        return Enclosure { lo: Rational::zero(), hi: Rational::new(BigInt::one(), pow2(LIMIT)) };
    }
    let p0 = prec + 16;
    let (l2l, l2h) = ln2_fixed(p0);
    // k = floor(y / ln2_hi) keeps the reduced argument nonnegative.
    let k = floor_scaled(y, p0).div_floor(&l2h);
    let kbits = k.bits() as u32;
    let p = p0 + kbits + 8;
    let (l2l, l2h) = if p == p0 { (l2l, l2h) } else { ln2_fixed(p) };
    let yl = floor_scaled(y, p);
    let yh = ceil_scaled(y, p);
    let r_lo = (&yl - &k * &l2h).max(BigInt::zero());
    let r_hi = &yh - &k * &l2l;
    let (lo, _) = exp_neg_taylor(&r_hi, p);
    let (_, hi) = exp_neg_taylor(&r_lo, p);
    let kk = k.to_u32().expect("reduction count fits");
    Enclosure { lo: unscale(lo, p + kk), hi: unscale(hi, p + kk) }
}

/// Enclosure of `e^y`.
pub fn exp(y: &Rational, prec: u32) -> Enclosure {
    if !y.is_positive() {
        return exp_neg(&-y, prec);
    }
    let inv = exp_neg(y, prec);
    // inv.lo may be zero for huge y; the enclosure is then unbounded above,
    // which we report with the largest finite stand-in we can certify.
    let hi = if inv.lo.is_zero() { Rational::from_integer(pow2(1 << 20)) } else { inv.lo.recip() };
    Enclosure { lo: inv.hi.recip(), hi }
}

/// Certifies `value ≤ e^y`.
pub fn le_exp(value: &Rational, y: &Rational) -> Decision {
    for prec in PRECISIONS {
        let e = exp(y, prec);
        if *value <= e.lo {
            return Decision::Holds;
        }
        if *value > e.hi {
            return Decision::Fails;
        }
    }
    Decision::Undecided
}

/// Certifies `value ≥ e^y`.
pub fn ge_exp(value: &Rational, y: &Rational) -> Decision {
    for prec in PRECISIONS {
        let e = exp(y, prec);
        if *value >= e.hi {
            return Decision::Holds;
        }
        if *value < e.lo {
            return Decision::Fails;
        }
    }
    Decision::Undecided
}

/// A rational lower bound on `ln x` with at least `bits` correct bits.
pub fn ln_lower(x: &Rational, bits: u32) -> Result<Rational> {
    Ok(ln(x, bits)?.lo)
}

/// A rational upper bound on `ln x` with at least `bits` correct bits.
pub fn ln_upper(x: &Rational, bits: u32) -> Result<Rational> {
    Ok(ln(x, bits)?.hi)
}

fn magnitude_bits(r: &Rational) -> u64 {
    r.numer().bits() + r.denom().bits()
}

/// Compares `a` with `b^x` for `a ≥ 0`, `b > 0` and rational `x`.
///
/// Writing `x = u/d`, the comparison is exact (`a^d` against `b^u`) when the
/// operands stay below [`EXACT_POWER_BITS`]; otherwise it falls back on
/// certified logarithms, which can decide strict inequalities only.
pub fn compare_pow(a: &Rational, b: &Rational, x: &Rational) -> Result<PowOrdering> {
    if a.is_negative() || !b.is_positive() {
        return Err(Error::param("base", "compare_pow needs a ≥ 0 and b > 0"));
    }
    if a.is_zero() {
        return Ok(PowOrdering::Less);
    }
    if x.is_zero() || b.is_one() {
        return Ok(PowOrdering::from_ordering(a.cmp(&Rational::one())));
    }
    let (u, d) = rational::split_exponent(x);
    let ua = u.magnitude();
    let cost = d
        .to_u64()
        .and_then(|d| d.checked_mul(magnitude_bits(a)))
        .zip(ua.to_u64().and_then(|u| u.checked_mul(magnitude_bits(b))));
    if let Some((ca, cb)) = cost {
        if ca.saturating_add(cb) <= EXACT_POWER_BITS {
            return Ok(PowOrdering::from_ordering(exact_pow_cmp(a, b, &u, &d)));
        }
    }
    let df = Rational::from_integer(BigInt::from_biguint(Sign::Plus, d));
    let uf = Rational::from_integer(u);
    for prec in PRECISIONS {
        let left = ln(a, prec)?.scale(&df);
        let right = ln(b, prec)?.scale(&uf);
        if left.lo > right.hi {
            return Ok(PowOrdering::Greater);
        }
        if left.hi < right.lo {
            return Ok(PowOrdering::Less);
        }
    }
    Ok(PowOrdering::Undecided)
}

fn exact_pow_cmp(a: &Rational, b: &Rational, u: &BigInt, d: &BigUint) -> Ordering {
    let d = d.to_u64().expect("checked by caller");
    let e = u.magnitude().to_u64().expect("checked by caller");
    let (an, ad) = (a.numer().magnitude(), a.denom().magnitude());
    let (bn, bd) = (b.numer().magnitude(), b.denom().magnitude());
    let pa_n: BigUint = Pow::pow(an, d);
    let pa_d: BigUint = Pow::pow(ad, d);
    let pb_n: BigUint = Pow::pow(bn, e);
    let pb_d: BigUint = Pow::pow(bd, e);
    if u.is_negative() {
        // a^d · b^e vs 1
        (pa_n * pb_n).cmp(&(pa_d * pb_d))
    } else {
        // a^d vs b^e
        (pa_n * pb_d).cmp(&(pb_n * pa_d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    const LN2: f64 = core::f64::consts::LN_2;

    #[test]
    fn ln2_encloses() {
        let e = ln2(128);
        assert!(rational::to_f64(&e.lo) <= LN2 && LN2 <= rational::to_f64(&e.hi));
        assert!(e.width() < Rational::new(BigInt::one(), pow2(120)));
    }

    #[test]
    fn ln_values() {
        for (x, want) in [(ratio(3, 1), 1.0986122886681098), (ratio(1, 10), -core::f64::consts::LN_10)] {
            let e = ln(&x, 100).unwrap();
            assert!((e.midpoint_f64() - want).abs() < 1e-14, "{x}");
            assert!(e.lo < e.hi);
        }
        assert_eq!(ln(&int(1), 64).unwrap(), Enclosure::exact(int(0)));
        // ln 2 from the generic path agrees with the constant.
        let e = ln(&int(2), 100).unwrap();
        assert!((e.midpoint_f64() - LN2).abs() < 1e-15);
    }

    #[test]
    fn exp_values() {
        assert_eq!(exp(&int(0), 64), Enclosure::exact(int(1)));
        for (y, want) in
            [(ratio(-1, 8), 0.8824969025845955), (ratio(-1, 3), 0.7165313105737893), (int(5), 148.4131591025766)]
        {
            let e = exp(&y, 128);
            assert!(e.lo <= e.hi);
            assert!((e.midpoint_f64() - want).abs() < 1e-12 * want, "{y}");
        }
        let tiny = exp(&ratio(-2000, 1), 128);
        assert!(tiny.lo.is_positive());
        let rel = rational::to_f64(&(tiny.width() / &tiny.lo));
        assert!(rel < 1e-30);
    }

    #[test]
    fn decisions() {
        assert_eq!(le_exp(&ratio(3, 4), &ratio(-1, 8)), Decision::Holds);
        assert_eq!(le_exp(&ratio(9, 10), &ratio(-1, 8)), Decision::Fails);
        assert_eq!(le_exp(&int(1), &int(0)), Decision::Holds);
        assert_eq!(ge_exp(&ratio(8, 9), &ratio(-2, 9)), Decision::Holds);
    }

    #[test]
    fn pow_comparisons() {
        // (3/4)^3 = 27/64 vs (1/2)^2 = 16/64.
        let r = compare_pow(&ratio(3, 4), &ratio(1, 2), &ratio(2, 3)).unwrap();
        assert_eq!(r, PowOrdering::Greater);
        assert_eq!(compare_pow(&ratio(1, 4), &ratio(1, 2), &int(2)).unwrap(), PowOrdering::Equal);
        assert_eq!(compare_pow(&int(4), &ratio(1, 2), &ratio(-2, 1)).unwrap(), PowOrdering::Equal);
        // Exponent with a huge denominator takes the logarithmic path.
        let x = Rational::new(BigInt::from(10u64.pow(18)) + 1, BigInt::from(10u64.pow(18)));
        assert_eq!(compare_pow(&ratio(1, 2), &ratio(1, 2), &x).unwrap(), PowOrdering::Greater);
        assert_eq!(compare_pow(&ratio(1, 3), &ratio(1, 2), &x).unwrap(), PowOrdering::Less);
    }
}
