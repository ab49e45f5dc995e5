//! The algebra of truncated Dirichlet series.
//!
//! [`Series`] is generic over its coefficient domain ([`QComplex`] for exact
//! arithmetic, [`Complex64`] for the numerical layer). [`DynSeries`] wraps
//! either mode for callers that only learn the mode at runtime (JSON files,
//! the command line) and reports mixed-mode operations as errors.

pub(crate) mod json;
mod scalar;
mod series;

pub use json::{series_from_json, series_to_json, SeriesDocument};
pub use scalar::{
    format_rational, parse_rational, rational_to_f64, Coeff, ComplexScalar, QComplex, ScalarMode,
    FLOAT_INVERT_TOLERANCE,
};
pub use series::{ExactSeries, FloatSeries, Series, MAX_INVERT_WINDOW};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::primes::PrimeTable;

/// A series whose scalar mode is decided at runtime.
#[derive(Clone, Debug, PartialEq)]
pub enum DynSeries {
    Exact(ExactSeries),
    Float(FloatSeries),
}

macro_rules! binary_op {
    ($name:ident) => {
        pub fn $name(&self, other: &DynSeries) -> Result<DynSeries> {
            match (self, other) {
                (DynSeries::Exact(a), DynSeries::Exact(b)) => Ok(DynSeries::Exact(a.$name(b))),
                (DynSeries::Float(a), DynSeries::Float(b)) => Ok(DynSeries::Float(a.$name(b))),
                (a, b) => Err(Error::ModeMismatch {
                    left: a.mode().as_str(),
                    right: b.mode().as_str(),
                }),
            }
        }
    };
}

impl DynSeries {
    pub fn mode(&self) -> ScalarMode {
        match self {
            DynSeries::Exact(_) => ScalarMode::Exact,
            DynSeries::Float(_) => ScalarMode::Float,
        }
    }

    pub fn window(&self) -> u64 {
        match self {
            DynSeries::Exact(s) => s.window(),
            DynSeries::Float(s) => s.window(),
        }
    }

    pub fn zeta(window: u64, mode: ScalarMode) -> Result<DynSeries> {
        Ok(match mode {
            ScalarMode::Exact => DynSeries::Exact(Series::zeta(window)?),
            ScalarMode::Float => DynSeries::Float(Series::zeta(window)?),
        })
    }

    pub fn one(window: u64, mode: ScalarMode) -> Result<DynSeries> {
        Ok(match mode {
            ScalarMode::Exact => DynSeries::Exact(Series::one(window)?),
            ScalarMode::Float => DynSeries::Float(Series::one(window)?),
        })
    }

    pub fn monomial(n: u64, c: &ComplexScalar, window: u64) -> Result<DynSeries> {
        Ok(match c {
            ComplexScalar::Exact(q) => DynSeries::Exact(Series::monomial(n, q.clone(), window)?),
            ComplexScalar::Float(z) => DynSeries::Float(Series::monomial(n, *z, window)?),
        })
    }

    binary_op!(add);
    binary_op!(sub);
    binary_op!(mul);

    pub fn scale(&self, c: &ComplexScalar) -> Result<DynSeries> {
        Ok(match self {
            DynSeries::Exact(s) => DynSeries::Exact(s.scale(&QComplex::from_scalar(c)?)),
            DynSeries::Float(s) => DynSeries::Float(s.scale(&Complex64::from_scalar(c)?)),
        })
    }

    pub fn invert(&self) -> Result<DynSeries> {
        Ok(match self {
            DynSeries::Exact(s) => DynSeries::Exact(s.invert()?),
            DynSeries::Float(s) => DynSeries::Float(s.invert()?),
        })
    }

    pub fn dilate(&self, r: &ComplexScalar, table: &PrimeTable) -> Result<DynSeries> {
        Ok(match self {
            DynSeries::Exact(s) => DynSeries::Exact(s.dilate(&QComplex::from_scalar(r)?, table)?),
            DynSeries::Float(s) => DynSeries::Float(s.dilate(&Complex64::from_scalar(r)?, table)?),
        })
    }

    pub fn l1_norm(&self) -> f64 {
        match self {
            DynSeries::Exact(s) => s.l1_norm(),
            DynSeries::Float(s) => s.l1_norm(),
        }
    }

    pub fn to_float(&self) -> FloatSeries {
        match self {
            DynSeries::Exact(s) => s.to_float(),
            DynSeries::Float(s) => s.clone(),
        }
    }

    pub fn max_support(&self) -> Option<u64> {
        match self {
            DynSeries::Exact(s) => s.max_support(),
            DynSeries::Float(s) => s.max_support(),
        }
    }
}

impl From<ExactSeries> for DynSeries {
    fn from(s: ExactSeries) -> Self {
        DynSeries::Exact(s)
    }
}

impl From<FloatSeries> for DynSeries {
    fn from(s: FloatSeries) -> Self {
        DynSeries::Float(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_modes_are_rejected() {
        let a = DynSeries::zeta(4, ScalarMode::Exact).unwrap();
        let b = DynSeries::zeta(4, ScalarMode::Float).unwrap();
        assert!(matches!(a.add(&b), Err(Error::ModeMismatch { .. })));
        assert!(matches!(b.mul(&a), Err(Error::ModeMismatch { .. })));
        assert!(a.scale(&ComplexScalar::float(1.0, 0.0)).is_err());
        assert!(a.add(&a).is_ok());
    }
}
