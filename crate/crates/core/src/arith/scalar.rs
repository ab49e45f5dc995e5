//! Coefficient domains: exact Gaussian rationals and double-precision complex.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact complex scalar `re + i im` with arbitrary-precision rational parts.
pub type QComplex = Complex<BigRational>;

/// Default modulus below which a float leading coefficient counts as zero.
pub const FLOAT_INVERT_TOLERANCE: f64 = 1e-12;

/// Which coefficient domain a series lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarMode {
    Exact,
    Float,
}

impl ScalarMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ScalarMode::Exact => "exact",
            ScalarMode::Float => "float",
        }
    }
}

impl fmt::Display for ScalarMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ScalarMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(ScalarMode::Exact),
            "float" => Ok(ScalarMode::Float),
            other => Err(Error::Parse(format!("unknown scalar mode {other:?}"))),
        }
    }
}

/// Operations a coefficient type must support to carry a series.
///
/// Implemented for [`QComplex`] (exact) and [`Complex64`] (float). All
/// algebraic routines in the crate are generic over this trait, so a series
/// can never mix the two domains.
pub trait Coeff:
    Clone
    + fmt::Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    const MODE: ScalarMode;

    /// Multiplicative inverse, `None` when the value is not safely invertible.
    fn try_recip(&self) -> Option<Self>;

    /// Modulus rounded to `f64`.
    fn modulus(&self) -> f64;

    /// Exact modulus when it is rational (always `None` in float mode).
    fn exact_modulus(&self) -> Option<BigRational>;

    fn to_c64(&self) -> Complex64;

    fn from_i64(v: i64) -> Self;

    /// Division by a positive integer count (orbit and group averages).
    fn div_count(&self, count: usize) -> Self;

    fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc * self.clone();
        }
        acc
    }

    fn into_scalar(self) -> ComplexScalar;

    fn from_scalar(s: &ComplexScalar) -> Result<Self>;
}

impl Coeff for QComplex {
    const MODE: ScalarMode = ScalarMode::Exact;

    fn try_recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.inv())
        }
    }

    fn modulus(&self) -> f64 {
        let n = self.norm_sqr();
        rational_to_f64(&n).sqrt()
    }

    fn exact_modulus(&self) -> Option<BigRational> {
        if self.im.is_zero() {
            return Some(self.re.abs());
        }
        if self.re.is_zero() {
            return Some(self.im.abs());
        }
        let n = self.norm_sqr();
        let num = exact_sqrt(n.numer())?;
        let den = exact_sqrt(n.denom())?;
        Some(BigRational::new(num, den))
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }

    fn from_i64(v: i64) -> Self {
        QComplex::new(BigRational::from_integer(v.into()), BigRational::zero())
    }

    fn div_count(&self, count: usize) -> Self {
        let d = BigRational::from_integer(BigInt::from(count));
        QComplex::new(&self.re / &d, &self.im / &d)
    }

    fn into_scalar(self) -> ComplexScalar {
        ComplexScalar::Exact(self)
    }

    fn from_scalar(s: &ComplexScalar) -> Result<Self> {
        match s {
            ComplexScalar::Exact(q) => Ok(q.clone()),
            ComplexScalar::Float(_) => Err(Error::ModeMismatch {
                left: "exact",
                right: "float",
            }),
        }
    }
}

impl Coeff for Complex64 {
    const MODE: ScalarMode = ScalarMode::Float;

    fn try_recip(&self) -> Option<Self> {
        if self.norm() > FLOAT_INVERT_TOLERANCE {
            Some(self.inv())
        } else {
            None
        }
    }

    fn modulus(&self) -> f64 {
        self.norm()
    }

    fn exact_modulus(&self) -> Option<BigRational> {
        None
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }

    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }

    fn div_count(&self, count: usize) -> Self {
        self / count as f64
    }

    fn into_scalar(self) -> ComplexScalar {
        ComplexScalar::Float(self)
    }

    fn from_scalar(s: &ComplexScalar) -> Result<Self> {
        match s {
            ComplexScalar::Float(z) => Ok(*z),
            ComplexScalar::Exact(_) => Err(Error::ModeMismatch {
                left: "float",
                right: "exact",
            }),
        }
    }
}

fn exact_sqrt(v: &BigInt) -> Option<BigInt> {
    if v.sign() == Sign::Minus {
        return None;
    }
    let r = v.sqrt();
    (&r * &r == *v).then_some(r)
}

/// Nearest-ish `f64` for a big rational, robust to huge numerators/denominators.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Shift both parts down to a representable range before dividing.
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift_n = (nb - 1000).max(0) as usize;
    let shift_d = (db - 1000).max(0) as usize;
    let n = (q.numer() >> shift_n).to_f64().unwrap_or(f64::NAN);
    let d = (q.denom() >> shift_d).to_f64().unwrap_or(f64::NAN);
    n / d * 2f64.powi((shift_n as i64 - shift_d as i64) as i32)
}

/// A single scalar tagged with its mode.
#[derive(Clone, Debug, PartialEq)]
pub enum ComplexScalar {
    Exact(QComplex),
    Float(Complex64),
}

impl ComplexScalar {
    pub fn mode(&self) -> ScalarMode {
        match self {
            ComplexScalar::Exact(_) => ScalarMode::Exact,
            ComplexScalar::Float(_) => ScalarMode::Float,
        }
    }

    pub fn exact_int(v: i64) -> Self {
        ComplexScalar::Exact(QComplex::from_i64(v))
    }

    pub fn exact_ratio(num: i64, den: i64) -> Self {
        ComplexScalar::Exact(QComplex::new(
            BigRational::new(num.into(), den.into()),
            BigRational::zero(),
        ))
    }

    pub fn float(re: f64, im: f64) -> Self {
        ComplexScalar::Float(Complex64::new(re, im))
    }

    pub fn to_c64(&self) -> Complex64 {
        match self {
            ComplexScalar::Exact(q) => q.to_c64(),
            ComplexScalar::Float(z) => *z,
        }
    }

    /// Converts to the given mode. Exact to float rounds; float to exact is
    /// the exact binary value of each part.
    pub fn to_mode(&self, mode: ScalarMode) -> Result<ComplexScalar> {
        Ok(match (self, mode) {
            (ComplexScalar::Exact(_), ScalarMode::Exact)
            | (ComplexScalar::Float(_), ScalarMode::Float) => self.clone(),
            (ComplexScalar::Exact(q), ScalarMode::Float) => ComplexScalar::Float(q.to_c64()),
            (ComplexScalar::Float(z), ScalarMode::Exact) => {
                let conv = |x: f64| {
                    BigRational::from_float(x)
                        .ok_or_else(|| Error::NumericFailure(format!("non-finite value {x}")))
                };
                ComplexScalar::Exact(QComplex::new(conv(z.re)?, conv(z.im)?))
            }
        })
    }

    /// Parses `re` or `re,im` in the given mode. Exact parts are written
    /// `p/q` or `p`; float parts are ordinary decimal literals.
    pub fn parse(text: &str, mode: ScalarMode) -> Result<ComplexScalar> {
        let (re, im) = match text.split_once(',') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (text.trim(), "0"),
        };
        match mode {
            ScalarMode::Exact => Ok(ComplexScalar::Exact(QComplex::new(
                parse_rational(re)?,
                parse_rational(im)?,
            ))),
            ScalarMode::Float => {
                let p = |s: &str| {
                    s.parse::<f64>()
                        .map_err(|e| Error::Parse(format!("bad float {s:?}: {e}")))
                };
                Ok(ComplexScalar::Float(Complex64::new(p(re)?, p(im)?)))
            }
        }
    }
}

/// Parses `"p/q"` or `"p"` into a reduced rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    let bad = |what: &str| Error::Parse(format!("bad rational {text:?}: {what}"));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad("numerator"))?;
    let den: BigInt = den.parse().map_err(|_| bad("denominator"))?;
    if den.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(BigRational::new(num, den))
}

/// Formats a rational as `"p/q"` (denominator always present).
pub fn format_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}
