//! Coefficient field: exact complex rationals and arbitrary-precision complex floats.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::{Complex, Float, Rational};

use crate::error::{Error, Result};

/// Mantissa bits used for floating coefficients unless configured otherwise.
pub const DEFAULT_PREC: u32 = 128;

/// Environment variable overriding [`DEFAULT_PREC`] in the CLI and the harness.
pub const PREC_ENV: &str = "GERMSUM_PREC_BITS";

/// Precision from `GERMSUM_PREC_BITS`, falling back to [`DEFAULT_PREC`].
pub fn prec_from_env() -> u32 {
    std::env::var(PREC_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<u32>().ok())
        .filter(|&p| p >= 16)
        .unwrap_or(DEFAULT_PREC)
}

/// Exact element of ℚ(i).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ComplexRational {
    pub re: Rational,
    pub im: Rational,
}

impl ComplexRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        ComplexRational { re, im }
    }

    pub fn real(re: Rational) -> Self {
        ComplexRational {
            re,
            im: Rational::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.cmp0() == Ordering::Equal && self.im.cmp0() == Ordering::Equal
    }

    pub fn is_real(&self) -> bool {
        self.im.cmp0() == Ordering::Equal
    }

    fn add(&self, o: &Self) -> Self {
        ComplexRational {
            re: Rational::from(&self.re + &o.re),
            im: Rational::from(&self.im + &o.im),
        }
    }

    fn sub(&self, o: &Self) -> Self {
        ComplexRational {
            re: Rational::from(&self.re - &o.re),
            im: Rational::from(&self.im - &o.im),
        }
    }

    fn mul(&self, o: &Self) -> Self {
        if self.is_real() && o.is_real() {
            return ComplexRational::real(Rational::from(&self.re * &o.re));
        }
        let ac = Rational::from(&self.re * &o.re);
        let bd = Rational::from(&self.im * &o.im);
        let ad = Rational::from(&self.re * &o.im);
        let bc = Rational::from(&self.im * &o.re);
        ComplexRational {
            re: ac - bd,
            im: ad + bc,
        }
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.is_real() {
            return Some(ComplexRational::real(self.re.clone().recip()));
        }
        let n = Rational::from(self.re.square_ref()) + Rational::from(self.im.square_ref());
        Some(ComplexRational {
            re: Rational::from(&self.re / &n),
            im: -Rational::from(&self.im / &n),
        })
    }

    pub fn to_complex(&self, prec: u32) -> Complex {
        Complex::with_val(prec, (&self.re, &self.im))
    }
}

/// A coefficient. Exact arithmetic stays exact; any operation touching a
/// float promotes to a float at the larger of the operand precisions.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(ComplexRational),
    Float(Complex),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(ComplexRational::default())
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Exact(ComplexRational::real(Rational::from(n)))
    }

    pub fn from_rational(r: Rational) -> Self {
        Scalar::Exact(ComplexRational::real(r))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Scalar::from_rational(Rational::from((num, den)))
    }

    pub fn exact_complex(re: Rational, im: Rational) -> Self {
        Scalar::Exact(ComplexRational::new(re, im))
    }

    pub fn i() -> Self {
        Scalar::exact_complex(Rational::new(), Rational::from(1))
    }

    pub fn from_complex(c: Complex) -> Self {
        Scalar::Float(c)
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        Scalar::Float(Complex::with_val(prec, (re, im)))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(c) => c.is_zero(),
            Scalar::Float(c) => c.real().is_zero() && c.imag().is_zero(),
        }
    }

    /// Mantissa bits of a float coefficient, `None` when exact.
    pub fn prec(&self) -> Option<u32> {
        match self {
            Scalar::Exact(_) => None,
            Scalar::Float(c) => Some(c.prec().0.max(c.prec().1)),
        }
    }

    pub fn as_exact(&self) -> Option<&ComplexRational> {
        match self {
            Scalar::Exact(c) => Some(c),
            Scalar::Float(_) => None,
        }
    }

    /// Value as a complex float; exact values are rounded to `prec` bits.
    pub fn to_complex(&self, prec: u32) -> Complex {
        match self {
            Scalar::Exact(c) => c.to_complex(prec),
            Scalar::Float(c) => Complex::with_val(prec, c),
        }
    }

    /// Modulus, rounded to `prec` bits.
    pub fn abs(&self, prec: u32) -> Float {
        let c = self.to_complex(prec);
        Float::with_val(prec, c.abs_ref())
    }

    pub fn abs_f64(&self) -> f64 {
        self.abs(64).to_f64()
    }

    pub fn inv(&self) -> Result<Scalar> {
        match self {
            Scalar::Exact(c) => c
                .inv()
                .map(Scalar::Exact)
                .ok_or_else(|| Error::InvalidArgument("division by zero".into())),
            Scalar::Float(c) => {
                if self.is_zero() {
                    return Err(Error::InvalidArgument("division by zero".into()));
                }
                let prec = self.prec().unwrap_or(DEFAULT_PREC);
                Ok(Scalar::Float(Complex::with_val(prec, c.recip_ref())))
            }
        }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        match self {
            Scalar::Exact(_) => {
                let mut acc = Scalar::one();
                let mut base = self.clone();
                let mut e = e;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = &acc * &base;
                    }
                    e >>= 1;
                    if e > 0 {
                        base = &base * &base;
                    }
                }
                acc
            }
            Scalar::Float(c) => {
                let prec = self.prec().unwrap_or(DEFAULT_PREC);
                let mut out = Complex::with_val(prec, (1, 0));
                let mut base = c.clone();
                let mut e = e;
                while e > 0 {
                    if e & 1 == 1 {
                        out *= &base;
                    }
                    e >>= 1;
                    if e > 0 {
                        base.square_mut();
                    }
                }
                Scalar::Float(out)
            }
        }
    }

    /// Parses `"p/q"`, an integer, or a decimal. Decimals become floats.
    pub fn parse_real(s: &str, prec: u32) -> Result<Scalar> {
        let s = s.trim();
        if let Ok(r) = s.parse::<Rational>() {
            return Ok(Scalar::from_rational(r));
        }
        match Float::parse(s) {
            Ok(p) => Ok(Scalar::Float(Complex::with_val(
                prec,
                (Float::with_val(prec, p), 0),
            ))),
            Err(_) => Err(Error::Parse(format!("not a number: {s:?}"))),
        }
    }

    /// Parses a complex literal such as `1/2`, `-3i`, `0.1+0.2i`, `1/3-2/5i`.
    pub fn parse_complex(s: &str, prec: u32) -> Result<Scalar> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty number".into()));
        }
        let Some(body) = s.strip_suffix('i') else {
            return Scalar::parse_real(&s, prec);
        };
        // split at the last sign that is not an exponent sign or the leading sign
        let bytes = body.as_bytes();
        let mut split = None;
        for idx in (1..bytes.len()).rev() {
            let c = bytes[idx];
            if (c == b'+' || c == b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
                split = Some(idx);
                break;
            }
        }
        let (re_s, im_s) = match split {
            Some(idx) => (&body[..idx], &body[idx..]),
            None => ("0", body),
        };
        let im_s = match im_s {
            "" | "+" => "1",
            "-" => "-1",
            other => other.strip_prefix('+').unwrap_or(other),
        };
        let re = Scalar::parse_real(re_s, prec)?;
        let im = Scalar::parse_real(im_s, prec)?;
        Ok(&re + &(&im * &Scalar::i()))
    }
}

fn promote(a: &Scalar, b: &Scalar) -> (Complex, Complex) {
    let prec = a.prec().unwrap_or(0).max(b.prec().unwrap_or(0)).max(2);
    (a.to_complex(prec), b.to_complex(prec))
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a.add(b)),
            _ => {
                let (a, b) = promote(self, rhs);
                Scalar::Float(a + b)
            }
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a.sub(b)),
            _ => {
                let (a, b) = promote(self, rhs);
                Scalar::Float(a - b)
            }
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a.mul(b)),
            _ => {
                let (a, b) = promote(self, rhs);
                Scalar::Float(a * b)
            }
        }
    }
}

/// Panics on division by zero; use [`Scalar::inv`] for a checked variant.
impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'a Scalar) -> Scalar {
        let inv = rhs.inv().expect("scalar division by zero");
        self * &inv
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(c) => Scalar::Exact(ComplexRational {
                re: Rational::from(-&c.re),
                im: Rational::from(-&c.im),
            }),
            Scalar::Float(c) => Scalar::Float(Complex::with_val(c.prec(), -c)),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(c) if c.is_real() => write!(f, "{}", c.re),
            Scalar::Exact(c) => {
                if c.im.cmp0() == Ordering::Less {
                    write!(f, "{}{}i", c.re, c.im)
                } else {
                    write!(f, "{}+{}i", c.re, c.im)
                }
            }
            Scalar::Float(c) => {
                let (re, im) = (c.real().to_f64(), c.imag().to_f64());
                if im == 0.0 {
                    write!(f, "{re:e}")
                } else if im < 0.0 {
                    write!(f, "{re:e}{im:e}i")
                } else {
                    write!(f, "{re:e}+{im:e}i")
                }
            }
        }
    }
}

/// Decimal digits needed to round-trip a float of `prec` bits.
pub fn digits_for_prec(prec: u32) -> usize {
    (f64::from(prec) * std::f64::consts::LOG10_2).ceil() as usize + 2
}

/// Decimal rendering of a float suitable for a JSON number literal.
pub fn float_to_decimal(x: &Float) -> String {
    if x.is_zero() {
        return "0".into();
    }
    x.to_string_radix(10, Some(digits_for_prec(x.prec())))
}
