//! Fixed-point big-number reals and complexes.
//!
//! A [`BigFloat`] stores an integer mantissa m at a binary precision `prec`,
//! representing m * 2^(-prec). All arithmetic is exact except that products
//! and quotients truncate back to the working precision, so errors stay at
//! the last-bit level. Comparisons between derived quantities use the
//! relative tolerance 2^(-prec/2), leaving half the working precision as
//! headroom for accumulated truncation.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default working precision in bits.
pub const DEFAULT_PRECISION: u32 = 256;

/// A real number m * 2^(-prec) with integer mantissa m.
#[derive(Debug, Clone)]
pub struct BigFloat {
    mant: BigInt,
    prec: u32,
}

impl BigFloat {
    /// Zero at the given precision.
    pub fn zero(prec: u32) -> Self {
        BigFloat {
            mant: BigInt::zero(),
            prec,
        }
    }

    /// One at the given precision.
    pub fn one(prec: u32) -> Self {
        BigFloat {
            mant: BigInt::from(1) << prec,
            prec,
        }
    }

    /// Binary precision in bits.
    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// Exact value 2^e at the given precision (e >= -prec).
    pub fn pow2(e: i64, prec: u32) -> Result<Self> {
        let shift = e + prec as i64;
        if shift < 0 {
            return Err(Error::Input(format!("2^{e} underflows precision {prec}")));
        }
        Ok(BigFloat {
            mant: BigInt::from(1) << (shift as usize),
            prec,
        })
    }

    /// Convert from an exact rational, rounding to nearest (ties away from
    /// zero).
    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        let neg = r.numer().is_negative();
        let num_mag = r.numer().abs();
        let den = r.denom(); // positive by Ratio normalization
        let mant_mag: BigInt = ((num_mag << (prec as usize + 1)) + den) / (den << 1);
        let mant = if neg { -mant_mag } else { mant_mag };
        BigFloat { mant, prec }
    }

    /// Convert from a machine float (used to seed Newton iterations).
    pub fn from_f64(x: f64, prec: u32) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::Input("cannot convert non-finite float".into()));
        }
        let r = BigRational::from_float(x)
            .ok_or_else(|| Error::Input("cannot convert non-finite float".into()))?;
        Ok(BigFloat::from_rational(&r, prec))
    }

    /// Exact value as a rational: mant / 2^prec.
    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.mant.clone(), BigInt::from(1) << self.prec)
    }

    /// Parse a plain decimal literal like `-1.25`.
    pub fn from_decimal_str(s: &str, prec: u32) -> Result<Self> {
        let s = s.trim();
        let (sign, body) = match s.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, s.strip_prefix('+').unwrap_or(s)),
        };
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, f)) => (i, f),
            None => (body, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(Error::Input(format!("empty decimal literal `{s}`")));
        }
        if !int_part.chars().all(|c| c.is_ascii_digit())
            || !frac_part.chars().all(|c| c.is_ascii_digit())
        {
            return Err(Error::Input(format!("bad decimal literal `{s}`")));
        }
        let digits = format!("{}{}", int_part, frac_part);
        let numer: BigInt = digits
            .parse()
            .map_err(|_| Error::Input(format!("bad decimal literal `{s}`")))?;
        let denom = BigInt::from(10u8).pow(frac_part.len() as u32);
        let r = BigRational::new(BigInt::from(sign) * numer, denom);
        Ok(BigFloat::from_rational(&r, prec))
    }

    /// Deterministic decimal rendering with `digits` fractional digits,
    /// truncated toward zero.
    pub fn to_decimal_string(&self, digits: u32) -> String {
        let scale = BigInt::from(10u8).pow(digits);
        let neg = self.mant.is_negative();
        let scaled = (self.mant.abs() * &scale) >> self.prec;
        let mag = scaled.magnitude().to_string();
        let mag = if mag.len() <= digits as usize {
            format!("{}{}", "0".repeat(digits as usize + 1 - mag.len()), mag)
        } else {
            mag
        };
        let split = mag.len() - digits as usize;
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        out.push_str(&mag[..split]);
        if digits > 0 {
            out.push('.');
            out.push_str(&mag[split..]);
        }
        out
    }

    fn aligned(&self, other: &Self) -> (BigInt, BigInt, u32) {
        let prec = self.prec.max(other.prec);
        let a = &self.mant << (prec - self.prec) as usize;
        let b = &other.mant << (prec - other.prec) as usize;
        (a, b, prec)
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b, prec) = self.aligned(other);
        BigFloat { mant: a + b, prec }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let (a, b, prec) = self.aligned(other);
        BigFloat { mant: a - b, prec }
    }

    pub fn neg(&self) -> Self {
        BigFloat {
            mant: -&self.mant,
            prec: self.prec,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b, prec) = self.aligned(other);
        BigFloat {
            mant: (a * b) >> prec,
            prec,
        }
    }

    /// Quotient; error on division by zero.
    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::Domain("division by zero".into()));
        }
        let (a, b, prec) = self.aligned(other);
        Ok(BigFloat {
            mant: (a << prec as usize) / b,
            prec,
        })
    }

    pub fn abs(&self) -> Self {
        BigFloat {
            mant: self.mant.abs(),
            prec: self.prec,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    /// Square root of a nonnegative value (truncated to precision).
    pub fn sqrt(&self) -> Result<Self> {
        if self.mant.is_negative() {
            return Err(Error::Domain("square root of a negative real".into()));
        }
        // sqrt(m * 2^-p) = sqrt(m * 2^p) * 2^-p
        let shifted = &self.mant << self.prec as usize;
        Ok(BigFloat {
            mant: shifted.sqrt(),
            prec: self.prec,
        })
    }

    /// Closest machine float (for diagnostics only).
    pub fn to_f64(&self) -> f64 {
        self.to_rational().to_f64().unwrap_or(f64::NAN)
    }
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for BigFloat {}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BigFloat {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

/// A complex number with [`BigFloat`] components at a common precision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigComplex {
    re: BigFloat,
    im: BigFloat,
}

impl BigComplex {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        BigComplex { re, im }
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Result<Self> {
        Ok(BigComplex {
            re: BigFloat::from_f64(re, prec)?,
            im: BigFloat::from_f64(im, prec)?,
        })
    }

    pub fn zero(prec: u32) -> Self {
        BigComplex {
            re: BigFloat::zero(prec),
            im: BigFloat::zero(prec),
        }
    }

    pub fn one(prec: u32) -> Self {
        BigComplex {
            re: BigFloat::one(prec),
            im: BigFloat::zero(prec),
        }
    }

    pub fn re(&self) -> &BigFloat {
        &self.re
    }

    pub fn im(&self) -> &BigFloat {
        &self.im
    }

    pub fn precision(&self) -> u32 {
        self.re.prec.max(self.im.prec)
    }

    pub fn add(&self, other: &Self) -> Self {
        BigComplex {
            re: self.re.add(&other.re),
            im: self.im.add(&other.im),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        BigComplex {
            re: self.re.sub(&other.re),
            im: self.im.sub(&other.im),
        }
    }

    pub fn neg(&self) -> Self {
        BigComplex {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        BigComplex {
            re: self.re.mul(&other.re).sub(&self.im.mul(&other.im)),
            im: self.re.mul(&other.im).add(&self.im.mul(&other.re)),
        }
    }

    pub fn norm_sqr(&self) -> BigFloat {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        let n = other.norm_sqr();
        if n.is_zero() {
            return Err(Error::Domain("complex division by zero".into()));
        }
        let conj = BigComplex {
            re: other.re.clone(),
            im: other.im.neg(),
        };
        let prod = self.mul(&conj);
        Ok(BigComplex {
            re: prod.re.div(&n)?,
            im: prod.im.div(&n)?,
        })
    }

    pub fn abs(&self) -> Result<BigFloat> {
        self.norm_sqr().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// Integer power by binary exponentiation.
    pub fn pow(&self, mut e: u64) -> Self {
        let prec = self.precision();
        let mut base = self.clone();
        let mut acc = BigComplex::one(prec);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Principal square root (real part nonnegative).
    pub fn sqrt(&self) -> Result<Self> {
        let prec = self.precision();
        if self.im.is_zero() {
            if self.re.is_negative() {
                return Ok(BigComplex {
                    re: BigFloat::zero(prec),
                    im: self.re.neg().sqrt()?,
                });
            }
            return Ok(BigComplex {
                re: self.re.sqrt()?,
                im: BigFloat::zero(prec),
            });
        }
        let m = self.abs()?;
        let two = BigFloat::from_rational(&BigRational::from(BigInt::from(2)), prec);
        let u = m.add(&self.re).div(&two)?.sqrt()?;
        let v = m.sub(&self.re).div(&two)?.sqrt()?;
        let v = if self.im.is_negative() { v.neg() } else { v };
        Ok(BigComplex { re: u, im: v })
    }

    /// The primitive m-th root of unity e^(2 pi i / m), refined from a
    /// machine-precision seed by Newton iteration on z^m - 1.
    pub fn root_of_unity(m: u64, prec: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::Input("root of unity order must be positive".into()));
        }
        let theta = 2.0 * std::f64::consts::PI / m as f64;
        let mut z = BigComplex::from_f64(theta.cos(), theta.sin(), prec)?;
        // Each Newton step roughly doubles the number of correct bits;
        // the f64 seed has ~50. A few extra iterations are harmless.
        let steps = (prec as f64 / 50.0).log2().ceil() as u32 + 2;
        let m_c = BigComplex::from_f64(m as f64, 0.0, prec)?;
        for _ in 0..steps {
            let zm1 = z.pow(m - 1);
            let zm = zm1.mul(&z);
            let num = zm.sub(&BigComplex::one(prec));
            let den = m_c.mul(&zm1);
            z = z.sub(&num.div(&den)?);
        }
        Ok(z)
    }

    /// The comparison tolerance 2^(-prec/2) at this value's precision.
    pub fn tolerance(&self) -> BigFloat {
        tolerance(self.precision())
    }

    /// Approximate equality: |a - b| <= 2^(-prec/2) * max(1, |a|, |b|).
    pub fn approx_eq(&self, other: &Self) -> Result<bool> {
        let diff = self.sub(other).abs()?;
        let prec = self.precision().min(other.precision());
        let tol = tolerance(prec);
        let scale = BigFloat::one(prec).max(self.abs()?).max(other.abs()?);
        Ok(diff <= tol.mul(&scale))
    }
}

/// The relative comparison tolerance 2^(-prec/2).
pub fn tolerance(prec: u32) -> BigFloat {
    BigFloat::pow2(-((prec / 2) as i64), prec).expect("tolerance is representable")
}

/// Number of decimal digits carried by `prec` bits (floor(prec*log10(2))).
pub fn decimal_digits(prec: u32) -> u32 {
    ((prec as u64 * 30103) / 100000).max(8) as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bf(x: f64) -> BigFloat {
        BigFloat::from_f64(x, 128).unwrap()
    }

    #[test]
    fn arithmetic_round_trips_through_rationals() {
        let a = bf(1.5);
        let b = bf(-0.25);
        assert_eq!(
            a.add(&b).to_rational(),
            BigRational::new(5.into(), 4.into())
        );
        assert_eq!(
            a.mul(&b).to_rational(),
            BigRational::new((-3).into(), 8.into())
        );
        assert_eq!(
            a.div(&b).unwrap().to_rational(),
            BigRational::new((-6).into(), 1.into())
        );
    }

    #[test]
    fn decimal_parsing_and_printing() {
        let x = BigFloat::from_decimal_str("-1.25", 64).unwrap();
        assert_eq!(x.to_decimal_string(4), "-1.2500");
        let y = BigFloat::from_decimal_str("0.1", 128).unwrap();
        // 0.1 is not dyadic; rounding keeps ~38 digits correct at 128 bits
        assert!(y.to_decimal_string(20).starts_with("0.100000000000000000"));
    }

    #[test]
    fn sqrt_of_two_squares_back() {
        let two = bf(2.0);
        let r = two.sqrt().unwrap();
        let err = r.mul(&r).sub(&two).abs();
        assert!(err <= tolerance(128), "sqrt(2)^2 error too large");
    }

    #[test]
    fn negative_real_sqrt_is_rejected() {
        assert!(bf(-1.0).sqrt().is_err());
    }

    #[test]
    fn complex_sqrt_is_principal() {
        let z = BigComplex::from_f64(0.0, 2.0, 128).unwrap();
        let w = z.sqrt().unwrap(); // 1 + i
        assert!(!w.re().is_negative());
        let back = w.mul(&w);
        assert!(back.approx_eq(&z).unwrap());
        let negone = BigComplex::from_f64(-1.0, 0.0, 128).unwrap();
        let i = negone.sqrt().unwrap();
        assert!(i.re().is_zero());
    }

    #[test]
    fn roots_of_unity_have_unit_power() {
        for m in [3u64, 5, 7, 8] {
            let w = BigComplex::root_of_unity(m, 256).unwrap();
            assert!(w.pow(m).approx_eq(&BigComplex::one(256)).unwrap(), "m={m}");
            // primitive: w^1 != 1
            assert!(!w.approx_eq(&BigComplex::one(256)).unwrap());
        }
    }

    #[test]
    fn seventh_root_is_accurate_beyond_1e30() {
        let w = BigComplex::root_of_unity(7, 256).unwrap();
        let err = w.pow(7).sub(&BigComplex::one(256)).abs().unwrap();
        let bound =
            BigFloat::from_rational(&BigRational::new(1.into(), BigInt::from(10u8).pow(30)), 256);
        assert!(err < bound);
    }

    #[test]
    fn mixed_precision_operands_align() {
        let a = BigFloat::from_f64(1.0, 64).unwrap();
        let b = BigFloat::from_f64(0.5, 256).unwrap();
        let s = a.add(&b);
        assert_eq!(s.precision(), 256);
        assert_eq!(s.to_rational(), BigRational::new(3.into(), 2.into()));
    }
}
