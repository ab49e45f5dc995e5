//! Numerical function theory for finite Dirichlet polynomials.
//!
//! Everything here works on `f(s) = sum_{n <= N} a_n n^{-s}`. Sups over
//! vertical lines are sampled directly; sups over half-planes are computed on
//! the Bohr side as torus sups of the lift, where they coincide for
//! polynomials and the domain is compact.

mod line;
mod perron;
mod report;
mod seminorm;

pub use line::{line_sup, LineSupReport};
pub use perron::{perron_error_bound, perron_recover, perron_recover_series, PerronReport};
pub use report::{number, Record};
pub use seminorm::{
    coefficient_bound, convexity_check, seminorm_pr, seminorm_profile, sigma_u_plus_estimate,
    CoefficientBound, ConvexityReport, SeminormProfile, SigmaUEstimate, SupMethod,
    DEFAULT_CONVEXITY_TOL,
};

use num_complex::Complex64;

use crate::arith::{Coeff, Series};

/// `sum a_n n^{-s}` with each term as `exp(-s log n)`.
pub fn partial_sum<C: Coeff>(f: &Series<C>, s: Complex64) -> Complex64 {
    f.iter()
        .map(|(n, c)| c.to_c64() * (-s * (n as f64).ln()).exp())
        .sum()
}

/// Partial sum over the terms with `n <= upto`.
pub fn partial_sum_upto<C: Coeff>(f: &Series<C>, s: Complex64, upto: u64) -> Complex64 {
    f.iter()
        .take_while(|&(n, _)| n <= upto)
        .map(|(n, c)| c.to_c64() * (-s * (n as f64).ln()).exp())
        .sum()
}
