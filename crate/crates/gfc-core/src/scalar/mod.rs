//! Scalars for branch point parameters: exact rationals, quadratic field
//! elements a + b*sqrt(d), high-precision complex numbers, the point at
//! infinity, and opaque symbolic labels.
//!
//! Exact modes stay exact through all arithmetic; complex values carry a
//! fixed binary precision and compare with relative tolerance 2^(-prec/2);
//! symbolic labels support no arithmetic and flow through only where a
//! computation is purely structural.

mod bigfloat;
mod mobius;

pub use bigfloat::{decimal_digits, tolerance, BigComplex, BigFloat, DEFAULT_PRECISION};
pub use mobius::{symmetries_of_branch_set, BranchSymmetry, Mobius};

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest |d| accepted for a quadratic field ℚ(sqrt(d)); keeps the
/// squarefree check exact with bounded trial division.
const MAX_QUADRATIC_D: i64 = 1_000_000_000_000;

/// A branch point parameter.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    /// An exact rational number.
    Rational(BigRational),
    /// a + b*sqrt(d) with a, b rational, b != 0, and d a squarefree
    /// integer other than 0 and 1 (negative d allowed).
    Quadratic {
        a: BigRational,
        b: BigRational,
        d: i64,
    },
    /// A fixed-precision complex number.
    Complex(BigComplex),
    /// The point at infinity on the Riemann sphere.
    Infinity,
    /// An opaque symbolic label, assumed generic.
    Symbolic(String),
}

fn br_int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

impl Scalar {
    /// Exact integer scalar.
    pub fn integer(v: i64) -> Scalar {
        Scalar::Rational(br_int(v))
    }

    /// Exact rational scalar.
    pub fn rational(num: i64, den: i64) -> Result<Scalar> {
        if den == 0 {
            return Err(Error::Input("rational with zero denominator".into()));
        }
        Ok(Scalar::Rational(BigRational::new(
            BigInt::from(num),
            BigInt::from(den),
        )))
    }

    /// Quadratic field element a + b*sqrt(d); collapses to a rational when
    /// b = 0. Validates that d is squarefree and not 0 or 1.
    pub fn quadratic(a: BigRational, b: BigRational, d: i64) -> Result<Scalar> {
        if b.is_zero() {
            return Ok(Scalar::Rational(a));
        }
        validate_squarefree(d)?;
        Ok(Scalar::Quadratic { a, b, d })
    }

    /// Skips the squarefree check; for internal arithmetic where d comes
    /// from an already validated operand.
    fn quadratic_unchecked(a: BigRational, b: BigRational, d: i64) -> Scalar {
        if b.is_zero() {
            Scalar::Rational(a)
        } else {
            Scalar::Quadratic { a, b, d }
        }
    }

    /// Fixed-precision complex scalar.
    pub fn complex(z: BigComplex) -> Scalar {
        Scalar::Complex(z)
    }

    /// The point at infinity.
    pub fn infinity() -> Scalar {
        Scalar::Infinity
    }

    /// A symbolic label (letters, digits, underscores).
    pub fn symbolic(label: &str) -> Result<Scalar> {
        if label.is_empty() || !label.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(Error::Input(format!(
                "symbolic label must be alphanumeric/underscore, got `{label}`"
            )));
        }
        Ok(Scalar::Symbolic(label.to_string()))
    }

    pub fn zero() -> Scalar {
        Scalar::integer(0)
    }

    pub fn one() -> Scalar {
        Scalar::integer(1)
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Scalar::Infinity)
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self, Scalar::Symbolic(_))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Rational(_) | Scalar::Quadratic { .. })
    }

    pub fn is_complex(&self) -> bool {
        matches!(self, Scalar::Complex(_))
    }

    /// Mathematical equality. Exact modes compare exactly; complex values
    /// (and exact values compared against them) use the relative tolerance
    /// of the working precision. Symbolic labels equal only themselves and
    /// are assumed distinct from every number.
    pub fn math_eq(&self, other: &Scalar) -> Result<bool> {
        use Scalar::*;
        match (self, other) {
            (Infinity, Infinity) => Ok(true),
            (Infinity, _) | (_, Infinity) => Ok(false),
            (Symbolic(x), Symbolic(y)) => Ok(x == y),
            (Symbolic(_), _) | (_, Symbolic(_)) => Ok(false),
            (Rational(x), Rational(y)) => Ok(x == y),
            (Rational(_), Quadratic { .. }) | (Quadratic { .. }, Rational(_)) => Ok(false),
            (
                Quadratic { a, b, d },
                Quadratic {
                    a: a2,
                    b: b2,
                    d: d2,
                },
            ) => Ok(d == d2 && a == a2 && b == b2),
            (Complex(_), _) | (_, Complex(_)) => {
                let prec = self
                    .complex_precision()
                    .or(other.complex_precision())
                    .unwrap_or(DEFAULT_PRECISION);
                let x = self.to_complex(prec)?;
                let y = other.to_complex(prec)?;
                x.approx_eq(&y)
            }
        }
    }

    fn complex_precision(&self) -> Option<u32> {
        match self {
            Scalar::Complex(z) => Some(z.precision()),
            _ => None,
        }
    }

    /// True when the scalar is mathematically zero (symbolic labels are
    /// assumed nonzero).
    pub fn is_zero_val(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Quadratic { .. } => false,
            Scalar::Complex(z) => z.is_zero(),
            _ => false,
        }
    }

    /// Numeric embedding at the given precision. Fails for infinity and
    /// symbolic labels.
    pub fn to_complex(&self, prec: u32) -> Result<BigComplex> {
        match self {
            Scalar::Rational(r) => Ok(BigComplex::new(
                BigFloat::from_rational(r, prec),
                BigFloat::zero(prec),
            )),
            Scalar::Quadratic { a, b, d } => {
                let a_f = BigFloat::from_rational(a, prec);
                let b_f = BigFloat::from_rational(b, prec);
                let root = BigFloat::from_rational(&br_int(d.abs()), prec).sqrt()?;
                if *d >= 0 {
                    Ok(BigComplex::new(
                        a_f.add(&b_f.mul(&root)),
                        BigFloat::zero(prec),
                    ))
                } else {
                    Ok(BigComplex::new(a_f, b_f.mul(&root)))
                }
            }
            Scalar::Complex(z) => Ok(z.clone()),
            Scalar::Infinity => Err(Error::Domain(
                "cannot embed the point at infinity as a complex number".into(),
            )),
            Scalar::Symbolic(s) => Err(Error::Unsupported(format!(
                "cannot evaluate symbolic scalar `{s}` numerically"
            ))),
        }
    }

    fn promote2(&self, other: &Scalar) -> Result<Promoted> {
        use Scalar::*;
        match (self, other) {
            (Symbolic(s), _) | (_, Symbolic(s)) => Err(Error::Unsupported(format!(
                "arithmetic on symbolic scalar `{s}`"
            ))),
            (Infinity, _) | (_, Infinity) => Err(Error::Domain(
                "arithmetic with the point at infinity".into(),
            )),
            (Complex(_), _) | (_, Complex(_)) => {
                let prec = self
                    .complex_precision()
                    .into_iter()
                    .chain(other.complex_precision())
                    .max()
                    .unwrap_or(DEFAULT_PRECISION);
                Ok(Promoted::Cpx(
                    self.to_complex(prec)?,
                    other.to_complex(prec)?,
                ))
            }
            (Rational(x), Rational(y)) => Ok(Promoted::Rat(x.clone(), y.clone())),
            (Quadratic { a, b, d }, Rational(y)) => Ok(Promoted::Quad(
                a.clone(),
                b.clone(),
                y.clone(),
                BigRational::zero(),
                *d,
            )),
            (Rational(x), Quadratic { a, b, d }) => Ok(Promoted::Quad(
                x.clone(),
                BigRational::zero(),
                a.clone(),
                b.clone(),
                *d,
            )),
            (
                Quadratic { a, b, d },
                Quadratic {
                    a: a2,
                    b: b2,
                    d: d2,
                },
            ) => {
                if d != d2 {
                    Err(Error::Input(format!(
                        "cannot mix quadratic fields sqrt({d}) and sqrt({d2})"
                    )))
                } else {
                    Ok(Promoted::Quad(
                        a.clone(),
                        b.clone(),
                        a2.clone(),
                        b2.clone(),
                        *d,
                    ))
                }
            }
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar> {
        Ok(match self.promote2(other)? {
            Promoted::Rat(x, y) => Scalar::Rational(x + y),
            Promoted::Quad(a1, b1, a2, b2, d) => Scalar::quadratic_unchecked(a1 + a2, b1 + b2, d),
            Promoted::Cpx(x, y) => Scalar::Complex(x.add(&y)),
        })
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar> {
        Ok(match self.promote2(other)? {
            Promoted::Rat(x, y) => Scalar::Rational(x - y),
            Promoted::Quad(a1, b1, a2, b2, d) => Scalar::quadratic_unchecked(a1 - a2, b1 - b2, d),
            Promoted::Cpx(x, y) => Scalar::Complex(x.sub(&y)),
        })
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar> {
        Ok(match self.promote2(other)? {
            Promoted::Rat(x, y) => Scalar::Rational(x * y),
            Promoted::Quad(a1, b1, a2, b2, d) => {
                let dd = br_int(d);
                Scalar::quadratic_unchecked(&a1 * &a2 + &dd * &b1 * &b2, &a1 * &b2 + &b1 * &a2, d)
            }
            Promoted::Cpx(x, y) => Scalar::Complex(x.mul(&y)),
        })
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(match self.promote2(other)? {
            Promoted::Rat(x, y) => {
                if y.is_zero() {
                    return Err(Error::Domain("division by zero".into()));
                }
                Scalar::Rational(x / y)
            }
            Promoted::Quad(a1, b1, a2, b2, d) => {
                let dd = br_int(d);
                // multiply by the conjugate; norm = a2^2 - d*b2^2 vanishes
                // only for the zero divisor since d is not a square
                let norm = &a2 * &a2 - &dd * &b2 * &b2;
                if norm.is_zero() {
                    return Err(Error::Domain("division by zero".into()));
                }
                let na = &a1 * &a2 - &dd * &b1 * &b2;
                let nb = &b1 * &a2 - &a1 * &b2;
                Scalar::quadratic_unchecked(na / &norm, nb / &norm, d)
            }
            Promoted::Cpx(x, y) => {
                if y.is_zero() {
                    return Err(Error::Domain("division by zero".into()));
                }
                Scalar::Complex(x.div(&y)?)
            }
        })
    }

    pub fn try_neg(&self) -> Result<Scalar> {
        match self {
            Scalar::Rational(r) => Ok(Scalar::Rational(-r.clone())),
            Scalar::Quadratic { a, b, d } => Ok(Scalar::Quadratic {
                a: -a.clone(),
                b: -b.clone(),
                d: *d,
            }),
            Scalar::Complex(z) => Ok(Scalar::Complex(z.neg())),
            Scalar::Infinity => Ok(Scalar::Infinity),
            Scalar::Symbolic(s) => Err(Error::Unsupported(format!(
                "arithmetic on symbolic scalar `{s}`"
            ))),
        }
    }

    /// Multiplicative inverse; 1/0 = infinity and 1/infinity = 0.
    pub fn recip(&self) -> Result<Scalar> {
        match self {
            Scalar::Infinity => Ok(Scalar::zero()),
            s if s.is_zero_val() => Ok(Scalar::Infinity),
            _ => Scalar::one().try_div(self),
        }
    }

    /// Working precision for numeric fallbacks.
    pub fn precision_or_default(&self) -> u32 {
        self.complex_precision().unwrap_or(DEFAULT_PRECISION)
    }

    /// Canonical input syntax (round-trips through [`Scalar::parse`]).
    pub fn to_input_string(&self) -> String {
        match self {
            Scalar::Symbolic(s) => format!("sym:{s}"),
            other => other.to_string(),
        }
    }

    /// Parse the textual scalar syntax:
    /// `3/4`, `-2`, `inf`, `1/2+3/2*sqrt(5)`, `c(0.25,-1.1)`, `sym:lambda1`.
    pub fn parse(input: &str, prec: u32) -> Result<Scalar> {
        let s = input.trim();
        if s.is_empty() {
            return Err(Error::Input("empty scalar literal".into()));
        }
        if s == "inf" {
            return Ok(Scalar::Infinity);
        }
        if let Some(label) = s.strip_prefix("sym:") {
            return Scalar::symbolic(label);
        }
        if let Some(body) = s.strip_prefix("c(").and_then(|t| t.strip_suffix(')')) {
            let (re, im) = body.split_once(',').ok_or_else(|| {
                Error::Input(format!("complex literal needs two components: `{s}`"))
            })?;
            return Ok(Scalar::Complex(BigComplex::new(
                BigFloat::from_decimal_str(re, prec)?,
                BigFloat::from_decimal_str(im, prec)?,
            )));
        }
        if let Some(pos) = s.find("sqrt(") {
            let d_str = s[pos + 5..]
                .strip_suffix(')')
                .ok_or_else(|| Error::Input(format!("unterminated sqrt in `{s}`")))?;
            let d: i64 = d_str
                .trim()
                .parse()
                .map_err(|_| Error::Input(format!("bad radicand in `{s}`")))?;
            let head = &s[..pos];
            let (a_str, b_str) = split_quadratic_head(head)?;
            let a = parse_rational(&a_str)?;
            let b = parse_rational(&b_str)?;
            return Scalar::quadratic(a, b, d);
        }
        Ok(Scalar::Rational(parse_rational(s)?))
    }
}

enum Promoted {
    Rat(BigRational, BigRational),
    Quad(BigRational, BigRational, BigRational, BigRational, i64),
    Cpx(BigComplex, BigComplex),
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(BigRational::zero());
    }
    s.parse::<BigRational>()
        .map_err(|_| Error::Input(format!("bad rational literal `{s}`")))
}

/// Split the part before `sqrt(` into the rational constant and the
/// rational coefficient, accepting `A+B*`, `A-B*`, `B*`, `A+`, `A-`, `-`,
/// and the empty string.
fn split_quadratic_head(head: &str) -> Result<(String, String)> {
    let head = head.trim();
    if head.is_empty() {
        return Ok(("0".into(), "1".into()));
    }
    if let Some(stripped) = head.strip_suffix('*') {
        // find the last top-level sign separating A from B
        let split = stripped
            .char_indices()
            .rev()
            .find(|&(i, c)| i > 0 && (c == '+' || c == '-'))
            .map(|(i, _)| i);
        return Ok(match split {
            Some(i) => (stripped[..i].to_string(), stripped[i..].to_string()),
            None => ("0".into(), stripped.to_string()),
        });
    }
    // bare sqrt with implicit coefficient +-1
    match head.chars().last() {
        Some('+') => Ok((head[..head.len() - 1].to_string(), "1".into())),
        Some('-') => Ok((head[..head.len() - 1].to_string(), "-1".into())),
        _ => Err(Error::Input(format!(
            "cannot parse quadratic literal near `{head}sqrt(...)`"
        ))),
    }
}

fn validate_squarefree(d: i64) -> Result<()> {
    if d == 0 || d == 1 {
        return Err(Error::Input(format!("radicand {d} is not allowed")));
    }
    let mag = d.unsigned_abs();
    if mag > MAX_QUADRATIC_D as u64 {
        return Err(Error::Input(format!(
            "radicand {d} exceeds the supported magnitude {MAX_QUADRATIC_D}"
        )));
    }
    let mut f = 2u64;
    while f * f <= mag {
        if mag.is_multiple_of(f * f) {
            return Err(Error::Input(format!(
                "radicand {d} is not squarefree (divisible by {f}^2)"
            )));
        }
        f += 1;
    }
    Ok(())
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{r}"),
            Scalar::Quadratic { a, b, d } => {
                if a.is_zero() {
                    write!(f, "{b}*sqrt({d})")
                } else if b.is_negative() {
                    write!(f, "{a}-{}*sqrt({d})", -b.clone())
                } else {
                    write!(f, "{a}+{b}*sqrt({d})")
                }
            }
            Scalar::Complex(z) => {
                let digits = decimal_digits(z.precision());
                write!(
                    f,
                    "c({},{})",
                    z.re().to_decimal_string(digits),
                    z.im().to_decimal_string(digits)
                )
            }
            Scalar::Infinity => write!(f, "inf"),
            Scalar::Symbolic(s) => write!(f, "{s}"),
        }
    }
}

/// The elliptic modular invariant of the Legendre parameter:
/// j(l) = (1 - l + l^2)^3 / (l^2 (1 - l)^2), normalized so that
/// j(-1) = j(2) = j(1/2) = 27/4.
pub fn j_invariant(lambda: &Scalar) -> Result<Scalar> {
    if lambda.is_infinity() {
        return Err(Error::Domain("j-invariant of infinity".into()));
    }
    if lambda.is_symbolic() {
        return Err(Error::Unsupported(
            "j-invariant of a symbolic scalar".into(),
        ));
    }
    let one = Scalar::one();
    if lambda.math_eq(&Scalar::zero())? || lambda.math_eq(&one)? {
        return Err(Error::Domain(
            "j-invariant undefined for lambda in {0, 1}".into(),
        ));
    }
    let l2 = lambda.try_mul(lambda)?;
    let t = one.try_sub(lambda)?.try_add(&l2)?; // 1 - l + l^2
    let num = t.try_mul(&t)?.try_mul(&t)?;
    let one_minus = one.try_sub(lambda)?;
    let den = l2.try_mul(&one_minus.try_mul(&one_minus)?)?;
    num.try_div(&den)
}

/// The six Moebius images of a Legendre parameter sharing one j-invariant:
/// l, 1/l, 1-l, 1/(1-l), l/(l-1), (l-1)/l.
pub fn anharmonic_orbit(lambda: &Scalar) -> Result<Vec<Scalar>> {
    let one = Scalar::one();
    let om = one.try_sub(lambda)?; // 1 - l
    Ok(vec![
        lambda.clone(),
        lambda.recip()?,
        om.clone(),
        om.recip()?,
        lambda.try_div(&lambda.try_sub(&one)?)?,
        lambda.try_sub(&one)?.try_div(lambda)?,
    ])
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
fn sqrt_rational(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let num = r.numer().sqrt();
    let den = r.denom().sqrt();
    if &(&num * &num) == r.numer() && &(&den * &den) == r.denom() {
        Some(BigRational::new(num, den))
    } else {
        None
    }
}

/// Square root within the scalar's own field: `Ok(Some(..))` when a square
/// root exists there, `Ok(None)` when it does not (e.g. sqrt(2) over the
/// rationals), and an error for infinity or symbolic input. Complex scalars
/// always return their principal square root.
pub fn sqrt_in_field(x: &Scalar) -> Result<Option<Scalar>> {
    match x {
        Scalar::Rational(r) => Ok(sqrt_rational(r).map(Scalar::Rational)),
        Scalar::Quadratic { a, b, d } => Ok(sqrt_in_quadratic_parts(a, b, *d)),
        Scalar::Complex(z) => Ok(Some(Scalar::Complex(z.sqrt()?))),
        Scalar::Infinity => Err(Error::Domain("square root of infinity".into())),
        Scalar::Symbolic(s) => Err(Error::Unsupported(format!(
            "square root of symbolic scalar `{s}`"
        ))),
    }
}

/// Square root within an explicit ambient field ℚ(sqrt(d)). Rationals may
/// pick up a sqrt(d) factor here: e.g. 5 has root sqrt(5) in ℚ(sqrt(5)).
pub fn sqrt_in_quadratic(x: &Scalar, d: i64) -> Result<Option<Scalar>> {
    validate_squarefree(d)?;
    match x {
        Scalar::Rational(r) => {
            if let Some(s) = sqrt_rational(r) {
                return Ok(Some(Scalar::Rational(s)));
            }
            // (v*sqrt(d))^2 = v^2 d = r
            let v2 = r / br_int(d);
            Ok(sqrt_rational(&v2).map(|v| Scalar::quadratic_unchecked(BigRational::zero(), v, d)))
        }
        Scalar::Quadratic { a, b, d: dx } => {
            if *dx != d {
                return Err(Error::Input(format!(
                    "scalar lives in sqrt({dx}), not the ambient sqrt({d})"
                )));
            }
            Ok(sqrt_in_quadratic_parts(a, b, d))
        }
        _ => sqrt_in_field(x),
    }
}

/// Solve (x + y*sqrt(d))^2 = a + b*sqrt(d) over the rationals.
fn sqrt_in_quadratic_parts(a: &BigRational, b: &BigRational, d: i64) -> Option<Scalar> {
    // x^2 + d y^2 = a and 2xy = b; so x^2 solves
    // 4 t^2 - 4 a t + d b^2 = 0, i.e. t = (a +- sqrt(a^2 - d b^2))/2.
    let dd = br_int(d);
    let norm = a * a - &dd * b * b;
    let s = sqrt_rational(&norm)?;
    let two = br_int(2);
    for t in [(a + &s) / &two, (a - &s) / &two] {
        if t.is_zero() {
            continue;
        }
        if let Some(x) = sqrt_rational(&t) {
            let y = b / (&two * &x);
            // verify: (x + y sqrt d)^2 = x^2 + d y^2 + 2xy sqrt d
            if &(&x * &x + &dd * &y * &y) == a {
                return Some(Scalar::quadratic_unchecked(x, y, d));
            }
        }
    }
    None
}

/// Largest prime checked when extracting the squarefree part of an integer.
const SQUAREFREE_TRIAL_LIMIT: u64 = 1_000_000;

/// Write |m| = s^2 * f with f squarefree; returns (s, sign(m)*f). Gives up
/// (None) when the factorization cannot be certified with bounded trial
/// division.
fn squarefree_part(m: &BigInt) -> Option<(BigInt, i64)> {
    if m.is_zero() {
        return Some((BigInt::zero(), 1));
    }
    let negative = m.is_negative();
    let mut rest = m.abs();
    let mut square = BigInt::one();
    let mut free: i64 = 1;
    let mut f = 2u64;
    while f <= SQUAREFREE_TRIAL_LIMIT {
        let fb = BigInt::from(f);
        if (&rest % (&fb)).is_zero() {
            let mut count = 0u32;
            while (&rest % (&fb)).is_zero() {
                rest /= &fb;
                count += 1;
            }
            square *= fb.pow(count / 2);
            if count % 2 == 1 {
                free = free.checked_mul(f as i64)?;
            }
        }
        if &fb * &fb > rest {
            break;
        }
        f += if f == 2 { 1 } else { 2 };
    }
    if !rest.is_one() {
        // no prime factor <= limit remains; rest is squarefree unless it is
        // a perfect square of something large
        let r = rest.sqrt();
        if &r * &r == rest {
            square *= r;
        } else {
            let rv = rest.to_i64()?;
            free = free.checked_mul(rv)?;
        }
    }
    if negative {
        free = -free;
    }
    Some((square, free))
}

/// Exact square root of a rational in a freshly constructed quadratic
/// field: sqrt(r) = (s/q) * sqrt(f) with f squarefree. Returns None when
/// the squarefree extraction cannot be certified.
pub fn sqrt_extending(r: &BigRational) -> Option<Scalar> {
    if r.is_zero() {
        return Some(Scalar::zero());
    }
    // sqrt(p/q) = sqrt(p*q)/q
    let m = r.numer() * r.denom();
    let (s, f) = squarefree_part(&m)?;
    let coeff = BigRational::new(s, r.denom().clone());
    if f == 1 {
        Some(Scalar::Rational(coeff))
    } else {
        Some(Scalar::quadratic_unchecked(BigRational::zero(), coeff, f))
    }
}

/// Square root that stays exact when possible and falls back to the
/// numeric embedding otherwise.
pub fn sqrt_best_effort(x: &Scalar, prec: u32) -> Result<Scalar> {
    match x {
        Scalar::Rational(r) => {
            if let Some(s) = sqrt_extending(r) {
                return Ok(s);
            }
            Ok(Scalar::Complex(x.to_complex(prec)?.sqrt()?))
        }
        Scalar::Quadratic { a, b, d } => {
            if let Some(s) = sqrt_in_quadratic_parts(a, b, *d) {
                return Ok(s);
            }
            Ok(Scalar::Complex(x.to_complex(prec)?.sqrt()?))
        }
        Scalar::Complex(z) => Ok(Scalar::Complex(z.sqrt()?)),
        Scalar::Infinity => Err(Error::Domain("square root of infinity".into())),
        Scalar::Symbolic(s) => Err(Error::Unsupported(format!(
            "square root of symbolic scalar `{s}`"
        ))),
    }
}

/// How a set of scalars can be computed with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarMode {
    /// All parameters exact (rational or one shared quadratic field).
    Exact,
    /// At least one fixed-precision complex parameter, none symbolic.
    Numeric,
    /// At least one symbolic label: arithmetic unavailable.
    Symbolic,
}

/// The ordered branch point set of a generalized Fermat curve, by
/// convention (infinity, 0, 1, lambda_1, ..., lambda_{n-2}).
#[derive(Debug, Clone, PartialEq)]
pub struct BranchSet {
    points: Vec<Scalar>,
}

impl BranchSet {
    /// Build from an explicit point list; points must be pairwise distinct.
    pub fn new(points: Vec<Scalar>) -> Result<BranchSet> {
        if points.len() < 3 {
            return Err(Error::Input(format!(
                "a branch set needs at least 3 points, got {}",
                points.len()
            )));
        }
        let mut quad_d: Option<i64> = None;
        for p in &points {
            if let Scalar::Quadratic { d, .. } = p {
                match quad_d {
                    None => quad_d = Some(*d),
                    Some(existing) if existing != *d => {
                        return Err(Error::Input(format!(
                            "branch points mix quadratic fields sqrt({existing}) and sqrt({d})"
                        )));
                    }
                    _ => {}
                }
            }
        }
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                if points[i].math_eq(&points[j])? {
                    return Err(Error::Input(format!(
                        "branch points {} and {} coincide ({})",
                        i + 1,
                        j + 1,
                        points[i]
                    )));
                }
            }
        }
        Ok(BranchSet { points })
    }

    /// The standard branch set (inf, 0, 1, lambdas...) of a type (p, n)
    /// curve; expects exactly n - 2 lambdas for rank n.
    pub fn from_lambdas(lambdas: &[Scalar]) -> Result<BranchSet> {
        let mut points = vec![Scalar::Infinity, Scalar::zero(), Scalar::one()];
        points.extend_from_slice(lambdas);
        BranchSet::new(points)
    }

    /// The fully symbolic branch set (inf, 0, 1, lambda1, ...).
    pub fn generic(n_lambdas: usize) -> Result<BranchSet> {
        let lambdas: Vec<Scalar> = (1..=n_lambdas)
            .map(|i| Scalar::symbolic(&format!("lambda{i}")))
            .collect::<Result<_>>()?;
        BranchSet::from_lambdas(&lambdas)
    }

    pub fn points(&self) -> &[Scalar] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The lambdas after the conventional (inf, 0, 1) prefix, when present.
    pub fn lambdas(&self) -> &[Scalar] {
        if self.has_standard_prefix() {
            &self.points[3..]
        } else {
            &self.points
        }
    }

    /// Whether the first three points are (inf, 0, 1).
    pub fn has_standard_prefix(&self) -> bool {
        self.points.len() >= 3
            && self.points[0].is_infinity()
            && matches!(&self.points[1], Scalar::Rational(r) if r.is_zero())
            && matches!(&self.points[2], Scalar::Rational(r) if r.is_one())
    }

    /// Arithmetic capability of this point set.
    pub fn mode(&self) -> ScalarMode {
        if self.points.iter().any(Scalar::is_symbolic) {
            ScalarMode::Symbolic
        } else if self.points.iter().any(Scalar::is_complex) {
            ScalarMode::Numeric
        } else {
            ScalarMode::Exact
        }
    }
}
