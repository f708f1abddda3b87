//! Exact arithmetic for density targets and for the multiplier `θ` of the
//! Beatty-type constructions.
//!
//! Every floor and fractional-part decision is made with integer arithmetic.
//! Quadratic irrationals `(u + v√d)/w` are handled exactly; anything else goes
//! through [`FixedPointReal`], which refuses to answer when a decision falls
//! inside its error bound.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// A rational target density `p/q` in `[0, 1]`, kept in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DensityTarget {
    p: u64,
    q: u64,
}

impl DensityTarget {
    pub const ZERO: DensityTarget = DensityTarget { p: 0, q: 1 };
    pub const ONE: DensityTarget = DensityTarget { p: 1, q: 1 };

    pub fn new(p: u64, q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidParameter("zero denominator".into()));
        }
        if p > q {
            return Err(Error::OutOfRange(format!("{p}/{q}")));
        }
        let g = p.gcd(&q);
        Ok(Self { p: p / g, q: q / g })
    }

    pub fn numer(&self) -> u64 {
        self.p
    }

    pub fn denom(&self) -> u64 {
        self.q
    }

    pub fn is_zero(&self) -> bool {
        self.p == 0
    }

    pub fn is_one(&self) -> bool {
        self.p == self.q
    }

    pub fn to_f64(&self) -> f64 {
        self.p as f64 / self.q as f64
    }
}

impl PartialOrd for DensityTarget {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DensityTarget {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.p as u128 * other.q as u128).cmp(&(other.p as u128 * self.q as u128))
    }
}

impl fmt::Display for DensityTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for DensityTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_density(s)
    }
}

/// Parses `"p/q"` or a finite decimal such as `"0.55"` into an exact rational
/// in `[0, 1]`.
pub fn parse_density(text: &str) -> Result<DensityTarget> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((p, q)) => {
            let p: i128 = p
                .trim()
                .parse()
                .map_err(|_| Error::Malformed(text.into()))?;
            let q: i128 = q
                .trim()
                .parse()
                .map_err(|_| Error::Malformed(text.into()))?;
            if q == 0 {
                return Err(Error::Malformed(text.into()));
            }
            if q < 0 {
                (-p, -q)
            } else {
                (p, q)
            }
        }
        None => {
            let (num, den) = parse_decimal(text)?;
            let num = num.to_i128().ok_or(Error::Overflow("decimal numerator"))?;
            let den = den
                .to_i128()
                .ok_or(Error::Overflow("decimal denominator"))?;
            (num, den)
        }
    };
    if num < 0 || num > den {
        return Err(Error::OutOfRange(text.into()));
    }
    let g = num.gcd(&den);
    let p = u64::try_from(num / g).map_err(|_| Error::Overflow("density numerator"))?;
    let q = u64::try_from(den / g).map_err(|_| Error::Overflow("density denominator"))?;
    DensityTarget::new(p, q)
}

/// Exact value of a decimal literal as `(numerator, 10^digits)`.
fn parse_decimal(text: &str) -> Result<(BigInt, BigInt)> {
    let malformed = || Error::Malformed(text.to_string());
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(malformed());
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|c| c.is_ascii_digit())
    {
        return Err(malformed());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut num: BigInt = digits.parse().map_err(|_| malformed())?;
    if negative {
        num = -num;
    }
    let den = num_traits::pow(BigInt::from(10u8), frac_part.len());
    Ok((num, den))
}

/// Sign of `l·√d − r` for a non-square `d > 0`.
fn cmp_scaled_sqrt(l: &BigInt, d: &BigInt, r: &BigInt) -> Ordering {
    match (l.sign(), r.sign()) {
        (num_bigint::Sign::NoSign, _) => BigInt::zero().cmp(r),
        (num_bigint::Sign::Plus, num_bigint::Sign::Minus | num_bigint::Sign::NoSign) => {
            Ordering::Greater
        }
        (num_bigint::Sign::Minus, num_bigint::Sign::Plus | num_bigint::Sign::NoSign) => {
            Ordering::Less
        }
        (num_bigint::Sign::Plus, num_bigint::Sign::Plus) => (l * l * d).cmp(&(r * r)),
        (num_bigint::Sign::Minus, num_bigint::Sign::Minus) => (r * r).cmp(&(l * l * d)),
    }
}

/// Fixed-width version of [`cmp_scaled_sqrt`]; `None` when a square overflows.
fn cmp_scaled_sqrt_i128(l: i128, d: i128, r: i128) -> Option<Ordering> {
    Some(match (l.signum(), r.signum()) {
        (0, _) => 0.cmp(&r),
        (1, -1 | 0) => Ordering::Greater,
        (-1, 1 | 0) => Ordering::Less,
        (1, 1) => l.checked_mul(l)?.checked_mul(d)?.cmp(&r.checked_mul(r)?),
        _ => r.checked_mul(r)?.cmp(&l.checked_mul(l)?.checked_mul(d)?),
    })
}

/// `⌊l·√d⌋` for `l ≠ 0` and non-square `d`.
fn floor_scaled_sqrt(l: &BigInt, d: &BigInt) -> BigInt {
    let root = (l * l * d).sqrt();
    if l.is_positive() {
        root
    } else {
        -root - 1
    }
}

/// A quadratic irrational `(u + v√d)/w` with `d` not a perfect square.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct IrrationalNumber {
    u: i64,
    v: i64,
    w: i64,
    d: i64,
}

impl IrrationalNumber {
    pub fn new(u: i64, v: i64, w: i64, d: i64) -> Result<Self> {
        if w <= 0 {
            return Err(Error::InvalidParameter(format!(
                "denominator w = {w} must be positive"
            )));
        }
        if v == 0 {
            return Err(Error::InvalidParameter(
                "coefficient v must be nonzero".into(),
            ));
        }
        if d <= 0 {
            return Err(Error::InvalidParameter(format!(
                "radicand d = {d} must be positive"
            )));
        }
        let root = d.sqrt();
        if root * root == d {
            return Err(Error::PerfectSquare(d));
        }
        Ok(Self { u, v, w, d })
    }

    /// `√d`.
    pub fn sqrt(d: i64) -> Result<Self> {
        Self::new(0, 1, 1, d)
    }

    /// `(1 + √5)/2`.
    pub fn golden_ratio() -> Self {
        Self {
            u: 1,
            v: 1,
            w: 2,
            d: 5,
        }
    }

    pub fn parts(&self) -> (i64, i64, i64, i64) {
        (self.u, self.v, self.w, self.d)
    }

    pub fn to_f64(&self) -> f64 {
        (self.u as f64 + self.v as f64 * (self.d as f64).sqrt()) / self.w as f64
    }

    fn floor_multiple_i128(&self, n: u64) -> Option<i128> {
        let n = n as i128;
        let a = n.checked_mul(self.u as i128)?;
        let l = n.checked_mul(self.v as i128)?;
        let square = l.checked_mul(l)?.checked_mul(self.d as i128)?;
        let root = (square as u128).sqrt() as i128;
        let s = if l > 0 { root } else { -root - 1 };
        Some(Integer::div_floor(&a.checked_add(s)?, &(self.w as i128)))
    }

    fn floor_multiple_big(&self, n: u64) -> BigInt {
        let n = BigInt::from(n);
        let a = &n * self.u;
        let l = &n * self.v;
        (a + floor_scaled_sqrt(&l, &BigInt::from(self.d))).div_floor(&BigInt::from(self.w))
    }

    /// `⌊nθ⌋`, which may be negative when `θ < 0`.
    pub fn floor_multiple(&self, n: u64) -> BigInt {
        if n == 0 {
            return BigInt::zero();
        }
        match self.floor_multiple_i128(n) {
            Some(f) => BigInt::from(f),
            None => self.floor_multiple_big(n),
        }
    }

    /// `⌊nθ⌋` for `θ > 0`.
    pub fn floor_mul(&self, n: u64) -> Result<u64> {
        if n == 0 {
            return Ok(0);
        }
        let f = match self.floor_multiple_i128(n) {
            Some(f) => u64::try_from(f).ok(),
            None => self.floor_multiple_big(n).to_u64(),
        };
        f.ok_or(Error::Overflow("floor of n·theta"))
    }

    /// Compares `nθ` with `num/den` (`den > 0`). Never returns `Equal` for `n > 0`.
    pub fn cmp_multiple(&self, n: u64, num: &BigInt, den: &BigInt) -> Ordering {
        // nθ <> num/den  ⇔  den·n·v·√d <> num·w − den·n·u
        let fast = (|| {
            let n = n as i128;
            let num = num.to_i128()?;
            let den = den.to_i128()?;
            let l = den.checked_mul(n)?.checked_mul(self.v as i128)?;
            let r = num
                .checked_mul(self.w as i128)?
                .checked_sub(den.checked_mul(n)?.checked_mul(self.u as i128)?)?;
            cmp_scaled_sqrt_i128(l, self.d as i128, r)
        })();
        fast.unwrap_or_else(|| {
            let n = BigInt::from(n);
            let l = den * &n * self.v;
            let r = num * self.w - den * &n * self.u;
            cmp_scaled_sqrt(&l, &BigInt::from(self.d), &r)
        })
    }

    /// Decides `{nθ} < t` (`Less`) versus `{nθ} > t` (`Greater`) exactly.
    pub fn frac_compare(&self, n: u64, t: DensityTarget) -> Ordering {
        self.frac_compare_with_floor(n, &self.floor_multiple(n), t)
    }

    fn frac_compare_with_floor(&self, n: u64, floor: &BigInt, t: DensityTarget) -> Ordering {
        let q = BigInt::from(t.q);
        self.cmp_multiple(n, &(floor * &q + t.p), &q)
    }
}

impl fmt::Display for IrrationalNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}·√{})/{}", self.u, self.v, self.d, self.w)
    }
}

/// `mantissa · 2^(−frac_bits)`, an approximation of a real number whose error
/// is assumed to be at most `2^(−frac_bits)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FixedPointReal {
    mantissa: BigInt,
    frac_bits: u32,
}

impl FixedPointReal {
    pub fn new(mantissa: BigInt, frac_bits: u32) -> Result<Self> {
        if frac_bits == 0 {
            return Err(Error::InvalidParameter(
                "fractional bits must be positive".into(),
            ));
        }
        Ok(Self {
            mantissa,
            frac_bits,
        })
    }

    /// Rounds a decimal literal to the nearest multiple of `2^(−frac_bits)`.
    pub fn from_decimal(text: &str, frac_bits: u32) -> Result<Self> {
        let (num, den) = parse_decimal(text.trim())?;
        let scaled: BigInt = (num << frac_bits as usize) * 2 + &den;
        let mantissa = scaled.div_floor(&(den * 2));
        Self::new(mantissa, frac_bits)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn frac_bits(&self) -> u32 {
        self.frac_bits
    }

    pub fn to_f64(&self) -> f64 {
        self.mantissa.to_f64().unwrap_or(f64::NAN) / 2f64.powi(self.frac_bits as i32)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.frac_bits != other.frac_bits {
            return Err(Error::MixedPrecision(self.frac_bits, other.frac_bits));
        }
        Self::new(&self.mantissa + &other.mantissa, self.frac_bits)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        if self.frac_bits != other.frac_bits {
            return Err(Error::MixedPrecision(self.frac_bits, other.frac_bits));
        }
        Self::new(&self.mantissa - &other.mantissa, self.frac_bits)
    }

    fn scale(&self) -> BigInt {
        BigInt::one() << self.frac_bits as usize
    }

    /// `⌊nθ⌋`, or a precision error when `nθ` is within `n·2^(−F)` of an integer.
    pub fn floor_multiple(&self, n: u64) -> Result<BigInt> {
        if n == 0 {
            return Ok(BigInt::zero());
        }
        let product = &self.mantissa * n;
        let scale = self.scale();
        let (floor, rem) = product.div_mod_floor(&scale);
        let slack = BigInt::from(n);
        if rem <= slack || &scale - &rem <= slack {
            return Err(Error::Precision { multiplier: n });
        }
        Ok(floor)
    }

    /// Compares `nθ` with `num/den`, refusing when the gap is within `n·2^(−F)`.
    pub fn cmp_multiple(&self, n: u64, num: &BigInt, den: &BigInt) -> Result<Ordering> {
        let diff = &self.mantissa * n * den - (num << self.frac_bits as usize);
        if diff.abs() <= BigInt::from(n) * den {
            return Err(Error::Precision { multiplier: n });
        }
        Ok(if diff.is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        })
    }
}

/// The multiplier of a Beatty-type set: exact quadratic irrational, or a
/// guarded fixed-point approximation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Theta {
    Quadratic(IrrationalNumber),
    Fixed(FixedPointReal),
}

impl Theta {
    /// Parses `sqrt:d`, `quad:u,v,w,d` or `fixed:decimal,F`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let malformed = || Error::Malformed(text.to_string());
        let (kind, body) = text.split_once(':').ok_or_else(malformed)?;
        match kind {
            "sqrt" => {
                let d: i64 = body.trim().parse().map_err(|_| malformed())?;
                Ok(Theta::Quadratic(IrrationalNumber::sqrt(d)?))
            }
            "quad" => {
                let parts = body
                    .split(',')
                    .map(|s| s.trim().parse::<i64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| malformed())?;
                match parts[..] {
                    [u, v, w, d] => Ok(Theta::Quadratic(IrrationalNumber::new(u, v, w, d)?)),
                    _ => Err(malformed()),
                }
            }
            "fixed" => {
                let (value, bits) = body.split_once(',').ok_or_else(malformed)?;
                let bits: u32 = bits.trim().parse().map_err(|_| malformed())?;
                Ok(Theta::Fixed(FixedPointReal::from_decimal(value, bits)?))
            }
            _ => Err(malformed()),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Theta::Quadratic(x) => x.to_f64(),
            Theta::Fixed(x) => x.to_f64(),
        }
    }

    pub fn floor_multiple(&self, n: u64) -> Result<BigInt> {
        match self {
            Theta::Quadratic(x) => Ok(x.floor_multiple(n)),
            Theta::Fixed(x) => x.floor_multiple(n),
        }
    }

    /// `⌊nθ⌋` as a natural number.
    pub fn floor_mul(&self, n: u64) -> Result<u64> {
        match self {
            Theta::Quadratic(x) => x.floor_mul(n),
            Theta::Fixed(x) => x
                .floor_multiple(n)?
                .to_u64()
                .ok_or(Error::Overflow("floor of n·theta")),
        }
    }

    pub fn cmp_multiple(&self, n: u64, num: &BigInt, den: &BigInt) -> Result<Ordering> {
        match self {
            Theta::Quadratic(x) => Ok(x.cmp_multiple(n, num, den)),
            Theta::Fixed(x) => x.cmp_multiple(n, num, den),
        }
    }

    /// `{nθ}` against `t`; `Less` or `Greater`, never `Equal`.
    pub fn frac_compare(&self, n: u64, t: DensityTarget) -> Result<Ordering> {
        let floor = self.floor_multiple(n)?;
        self.frac_compare_with_floor(n, &floor, t)
    }

    pub(crate) fn frac_compare_with_floor(
        &self,
        n: u64,
        floor: &BigInt,
        t: DensityTarget,
    ) -> Result<Ordering> {
        match self {
            Theta::Quadratic(x) => Ok(x.frac_compare_with_floor(n, floor, t)),
            Theta::Fixed(_) => {
                let q = BigInt::from(t.q);
                self.cmp_multiple(n, &(floor * &q + t.p), &q)
            }
        }
    }

    /// Whether `θ > 1`.
    pub fn exceeds_one(&self) -> Result<bool> {
        let one = BigInt::one();
        Ok(self.cmp_multiple(1, &one, &one)? == Ordering::Greater)
    }
}

impl From<IrrationalNumber> for Theta {
    fn from(x: IrrationalNumber) -> Self {
        Theta::Quadratic(x)
    }
}

impl FromStr for Theta {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Theta::parse(s)
    }
}

impl fmt::Display for Theta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Theta::Quadratic(x) => x.fmt(f),
            Theta::Fixed(x) => write!(f, "{}·2^-{}", x.mantissa, x.frac_bits),
        }
    }
}
