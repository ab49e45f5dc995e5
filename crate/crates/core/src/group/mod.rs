//! Permutations of prime indices acting on integers, series and polynomials.
//!
//! A permutation `σ` of the indices extends to the completely multiplicative
//! bijection `σ̂(prod p_i^{ν_i}) = prod p_{σ(i)}^{ν_i}` of the positive
//! integers, and to series by transporting coefficients along `σ̂`.

mod orbit;
mod perm;
mod project;

pub use orbit::{
    index_orbits, integer_orbit, IndexOrbit, IntegerOrbit, OrbitPartition, OrbitStatus,
};
pub use perm::{
    FiniteSupportPermutation, GroupDocument, Permutation, PermutationGroup, DEFAULT_ENUMERATION_CAP,
};
pub use project::{
    group_average, invariant_orbit_sums, is_invariant, phi_restrict, poly_group_average,
    project_invariant, project_invariant_with, Invariance, ProjectionOptions, UnresolvedPolicy,
};

use crate::arith::{Coeff, Series};
use crate::bohr::SparseMultiPoly;
use crate::error::{Error, Result};
use crate::primes::PrimeTable;

/// Default ceiling on integer images, `2^63 - 1`.
pub const DEFAULT_CEILING: u64 = i64::MAX as u64;

fn hat_map(
    n: u64,
    table: &PrimeTable,
    ceiling: u64,
    index: impl Fn(usize) -> usize,
) -> Result<u64> {
    let f = table.factor_smooth(n)?;
    let mut out: u64 = 1;
    for &(i, e) in f.entries() {
        let p = table.prime(index(i))?;
        for _ in 0..e {
            out = out
                .checked_mul(p)
                .filter(|&v| v <= ceiling)
                .ok_or_else(|| {
                    Error::Overflow(format!("image of {n} exceeds the ceiling {ceiling}"))
                })?;
        }
    }
    Ok(out)
}

/// `σ̂(n)` with the default ceiling.
pub fn hat_apply(sigma: &Permutation, n: u64, table: &PrimeTable) -> Result<u64> {
    hat_apply_with_ceiling(sigma, n, table, DEFAULT_CEILING)
}

pub fn hat_apply_with_ceiling(
    sigma: &Permutation,
    n: u64,
    table: &PrimeTable,
    ceiling: u64,
) -> Result<u64> {
    hat_map(n, table, ceiling, |i| sigma.apply(i))
}

/// `σ̂^{-1}(n)` with the default ceiling.
pub fn hat_apply_inverse(sigma: &Permutation, n: u64, table: &PrimeTable) -> Result<u64> {
    hat_map(n, table, DEFAULT_CEILING, |i| sigma.apply_inverse(i))
}

/// `S_σ(f) = sum a_{σ̂^{-1}(n)} n^{-s}`. The window grows to cover the image
/// of the support.
pub fn act<C: Coeff>(sigma: &Permutation, f: &Series<C>, table: &PrimeTable) -> Result<Series<C>> {
    let mut window = f.window();
    let mut pairs = Vec::with_capacity(f.len());
    for (n, c) in f.iter() {
        let m = hat_apply(sigma, n, table)?;
        window = window.max(m);
        pairs.push((m, c.clone()));
    }
    Series::from_coeffs(window, pairs)
}

/// Variable relabeling `x_i -> x_{σ(i)}`, the polynomial side of [`act`].
pub fn act_poly<C: Coeff>(sigma: &Permutation, p: &SparseMultiPoly<C>) -> SparseMultiPoly<C> {
    p.relabel_vars(|i| sigma.apply(i))
}
