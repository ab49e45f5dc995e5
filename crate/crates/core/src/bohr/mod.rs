//! The Bohr correspondence `n^{-s} <-> x^α` with `n = prod p_i^{α_i}`.
//!
//! [`bohr_lift`] sends a truncated Dirichlet series to a [`SparseMultiPoly`]
//! in one variable per prime index; [`bohr_drop`] goes back. The numerical
//! side lives in [`torus`] (suprema over `r T^k`) and [`cauchy`] (coefficient
//! recovery by discrete Fourier averages on the torus).

pub mod cauchy;
mod json;
pub mod torus;

pub use cauchy::{
    cauchy_coefficient, cauchy_coefficient_with, cauchy_series_coefficient, CauchyParams, GridSize,
    Radii,
};
pub use json::{poly_from_json, poly_to_json, DynPoly};
pub use torus::{torus_sup, torus_sup_seeded, TorusSearch, TorusSup};

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::arith::{Coeff, QComplex, Series};
use crate::error::{Error, Result};
use crate::primes::{Factorization, PrimeTable};

/// Sparse exponent vector: `(variable index, exponent)` pairs with strictly
/// increasing 1-based variable indices and positive exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<(usize, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    /// Single variable power `x_var^exp`.
    pub fn var(var: usize, exp: u32) -> Result<Self> {
        Self::from_pairs([(var, exp)])
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, u32)>) -> Result<Self> {
        Ok(Factorization::from_pairs(pairs)?.into())
    }

    pub fn entries(&self) -> &[(usize, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Total degree `|α|`; equals Ω of the corresponding integer.
    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.0
            .binary_search_by_key(&var, |&(v, _)| v)
            .map(|pos| self.0[pos].1)
            .unwrap_or(0)
    }

    pub fn max_var(&self) -> usize {
        self.0.last().map(|&(v, _)| v).unwrap_or(0)
    }

    pub fn vars(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&(v, _)| v)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, b) = (self.0[i], other.0[j]);
            match a.0.cmp(&b.0) {
                std::cmp::Ordering::Less => {
                    out.push(a);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a.0, a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// Relabels variables through `map`, which must be injective.
    pub fn relabel(&self, map: impl Fn(usize) -> usize) -> Monomial {
        let mut v: Vec<(usize, u32)> = self.0.iter().map(|&(i, e)| (map(i), e)).collect();
        v.sort_unstable();
        Monomial(v)
    }

    /// The integer `prod p_i^{α_i}`, checked against `u64` overflow.
    pub fn to_integer(&self, table: &PrimeTable) -> Result<u64> {
        Factorization::from_pairs(self.0.iter().copied())?.value(table)
    }
}

impl From<Factorization> for Monomial {
    fn from(f: Factorization) -> Self {
        Monomial(f.into_entries())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, &(v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if e == 1 {
                write!(f, "x{v}")?;
            } else {
                write!(f, "x{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse polynomial in variables `x_1, ..., x_nvars`.
#[derive(Clone, PartialEq)]
pub struct SparseMultiPoly<C> {
    nvars: usize,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coeff> SparseMultiPoly<C> {
    pub fn zero(nvars: usize) -> Self {
        SparseMultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: C, nvars: usize) -> Self {
        Self::from_terms(nvars, [(Monomial::one(), c)]).expect("constant term is in range")
    }

    /// Builds a polynomial, summing repeated monomials and dropping zeros.
    /// Every variable index must lie in `[1, nvars]`.
    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, C)>,
    ) -> Result<Self> {
        let mut map: BTreeMap<Monomial, C> = BTreeMap::new();
        for (m, c) in terms {
            if m.max_var() > nvars {
                return Err(Error::invalid(format!(
                    "monomial {m} uses a variable beyond nvars = {nvars}"
                )));
            }
            add_term(&mut map, m, c);
        }
        Ok(SparseMultiPoly { nvars, terms: map })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> + '_ {
        self.terms.iter()
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    /// Variables that occur with positive exponent, increasing.
    pub fn used_vars(&self) -> Vec<usize> {
        let mut vars: Vec<usize> = self.terms.keys().flat_map(|m| m.vars()).collect();
        vars.sort_unstable();
        vars.dedup();
        vars
    }

    /// Largest exponent of each used variable.
    pub fn max_degrees(&self) -> BTreeMap<usize, u32> {
        let mut out = BTreeMap::new();
        for m in self.terms.keys() {
            for &(v, e) in m.entries() {
                let slot = out.entry(v).or_insert(0);
                *slot = (*slot).max(e);
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            add_term(&mut terms, m.clone(), c.clone());
        }
        SparseMultiPoly {
            nvars: self.nvars.max(other.nvars),
            terms,
        }
    }

    pub fn neg(&self) -> Self {
        SparseMultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms = BTreeMap::new();
        for (ma, a) in &self.terms {
            for (mb, b) in &other.terms {
                add_term(&mut terms, ma.mul(mb), a.clone() * b.clone());
            }
        }
        SparseMultiPoly {
            nvars: self.nvars.max(other.nvars),
            terms,
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut terms = BTreeMap::new();
        for (m, a) in &self.terms {
            add_term(&mut terms, m.clone(), c.clone() * a.clone());
        }
        SparseMultiPoly {
            nvars: self.nvars,
            terms,
        }
    }

    /// Substitution `x_i -> r x_i` in every variable.
    pub fn scale_vars(&self, r: &C) -> Self {
        let mut terms = BTreeMap::new();
        for (m, a) in &self.terms {
            add_term(&mut terms, m.clone(), r.pow(m.degree()) * a.clone());
        }
        SparseMultiPoly {
            nvars: self.nvars,
            terms,
        }
    }

    /// Sets every variable outside `keep` to zero.
    pub fn restrict_vars(&self, keep: impl Fn(usize) -> bool) -> Self {
        SparseMultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.vars().all(&keep))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Relabels variables `x_i -> x_{map(i)}`; `map` must be injective on the
    /// used variables.
    pub fn relabel_vars(&self, map: impl Fn(usize) -> usize) -> Self {
        let mut terms = BTreeMap::new();
        let mut nvars = self.nvars;
        for (m, c) in &self.terms {
            let image = m.relabel(&map);
            nvars = nvars.max(image.max_var());
            add_term(&mut terms, image, c.clone());
        }
        SparseMultiPoly { nvars, terms }
    }

    /// Keeps the monomials whose integer `p^α` is at most `window`.
    pub fn restrict_to_window(&self, window: u64, table: &PrimeTable) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            match m.to_integer(table) {
                Ok(n) if n <= window => {
                    terms.insert(m.clone(), c.clone());
                }
                Ok(_) | Err(Error::Overflow(_)) => {}
                Err(e) => return Err(e),
            }
        }
        Ok(SparseMultiPoly {
            nvars: self.nvars,
            terms,
        })
    }

    pub fn to_float(&self) -> SparseMultiPoly<Complex64> {
        SparseMultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.to_c64()))
                .collect(),
        }
    }

    /// Evaluates at a point of the closed unit polydisc.
    pub fn eval(&self, z: &PolydiscPoint) -> Result<Complex64> {
        let max = z.max_modulus();
        if max > 1.0 + 1e-12 {
            return Err(Error::invalid(format!(
                "point has a coordinate of modulus {max} outside the closed unit polydisc"
            )));
        }
        Ok(self.eval_unchecked(z))
    }

    /// Evaluates anywhere, without the polydisc check.
    pub fn eval_unchecked(&self, z: &PolydiscPoint) -> Complex64 {
        // Cache powers per variable up to its maximal degree.
        let degrees = self.max_degrees();
        let mut powers: BTreeMap<usize, Vec<Complex64>> = BTreeMap::new();
        for (&v, &d) in &degrees {
            let zi = z.coord(v);
            let mut p = Vec::with_capacity(d as usize + 1);
            p.push(Complex64::new(1.0, 0.0));
            for k in 1..=d as usize {
                p.push(p[k - 1] * zi);
            }
            powers.insert(v, p);
        }
        self.terms
            .iter()
            .map(|(m, c)| {
                m.entries()
                    .iter()
                    .fold(c.to_c64(), |acc, &(v, e)| acc * powers[&v][e as usize])
            })
            .sum()
    }
}

fn add_term<C: Coeff>(map: &mut BTreeMap<Monomial, C>, m: Monomial, c: C) {
    if c.is_zero() {
        return;
    }
    match map.get_mut(&m) {
        Some(slot) => {
            let sum = slot.clone() + c;
            if sum.is_zero() {
                map.remove(&m);
            } else {
                *slot = sum;
            }
        }
        None => {
            map.insert(m, c);
        }
    }
}

impl<C: Coeff> fmt::Debug for SparseMultiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[M={}]", self.nvars)?;
        f.debug_map()
            .entries(self.terms.iter().map(|(m, c)| (m.to_string(), c)))
            .finish()
    }
}

/// Point of `C^∞` with finitely many nonzero coordinates.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PolydiscPoint {
    coords: BTreeMap<usize, Complex64>,
}

impl PolydiscPoint {
    pub fn new(coords: impl IntoIterator<Item = (usize, Complex64)>) -> Self {
        PolydiscPoint {
            coords: coords.into_iter().collect(),
        }
    }

    /// Coordinate `z_i`; absent coordinates are zero.
    pub fn coord(&self, var: usize) -> Complex64 {
        self.coords.get(&var).copied().unwrap_or_default()
    }

    pub fn coords(&self) -> &BTreeMap<usize, Complex64> {
        &self.coords
    }

    pub fn max_modulus(&self) -> f64 {
        self.coords.values().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// `c(s) = (2^{-s}, 3^{-s}, ..., p_M^{-s})`.
pub fn eval_c(s: Complex64, nvars: usize, table: &PrimeTable) -> Result<PolydiscPoint> {
    let mut coords = BTreeMap::new();
    for i in 1..=nvars {
        let p = table.prime(i)? as f64;
        coords.insert(i, (-s * p.ln()).exp());
    }
    Ok(PolydiscPoint { coords })
}

/// Bohr lift: `sum a_n n^{-s} -> sum a_n x^{α(n)}`.
///
/// Every support point must factor over the table's primes. `nvars` is
/// `π(window)` when the window fits the table, and otherwise the largest
/// variable index actually used (series moved by a permutation action can
/// have windows far beyond the sieve bound).
pub fn bohr_lift<C: Coeff>(f: &Series<C>, table: &PrimeTable) -> Result<SparseMultiPoly<C>> {
    let mut terms = BTreeMap::new();
    let mut max_var = 0;
    for (n, c) in f.iter() {
        let m: Monomial = table.factor_smooth(n)?.into();
        max_var = max_var.max(m.max_var());
        terms.insert(m, c.clone());
    }
    let nvars = if f.window() <= table.bound() {
        table.pi(f.window())?.max(max_var)
    } else {
        max_var
    };
    Ok(SparseMultiPoly { nvars, terms })
}

/// Inverse of [`bohr_lift`]; the window is the largest monomial integer.
pub fn bohr_drop<C: Coeff>(p: &SparseMultiPoly<C>, table: &PrimeTable) -> Result<Series<C>> {
    let pairs = drop_pairs(p, table, table.bound())?;
    let window = pairs.iter().map(|&(n, _)| n).max().unwrap_or(1);
    Series::from_coeffs(window, pairs)
}

/// [`bohr_drop`] onto an explicit window.
pub fn bohr_drop_with_window<C: Coeff>(
    p: &SparseMultiPoly<C>,
    window: u64,
    table: &PrimeTable,
) -> Result<Series<C>> {
    let pairs = drop_pairs(p, table, window.min(table.bound()))?;
    Series::from_coeffs(window, pairs)
}

fn drop_pairs<C: Coeff>(
    p: &SparseMultiPoly<C>,
    table: &PrimeTable,
    limit: u64,
) -> Result<Vec<(u64, C)>> {
    p.terms()
        .map(|(m, c)| {
            let n = match m.to_integer(table) {
                Ok(n) => n,
                Err(Error::Overflow(_)) => {
                    return Err(Error::OverflowWindow {
                        value: u64::MAX,
                        bound: limit,
                    })
                }
                Err(e) => return Err(e),
            };
            if n > limit {
                return Err(Error::OverflowWindow {
                    value: n,
                    bound: limit,
                });
            }
            Ok((n, c.clone()))
        })
        .collect()
}

/// Convenience for exact polynomials with integer coefficients.
pub fn exact_poly(
    nvars: usize,
    terms: &[(&[(usize, u32)], i64)],
) -> Result<SparseMultiPoly<QComplex>> {
    SparseMultiPoly::from_terms(
        nvars,
        terms
            .iter()
            .map(|(m, c)| {
                Ok((
                    Monomial::from_pairs(m.iter().copied())?,
                    QComplex::from_i64(*c),
                ))
            })
            .collect::<Result<Vec<_>>>()?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ExactSeries;

    fn table() -> PrimeTable {
        PrimeTable::sieve(1000).unwrap()
    }

    #[test]
    fn lift_examples() {
        let t = table();
        let f = ExactSeries::from_ints(6, [(1, 1), (2, 1), (6, 1)]).unwrap();
        let p = bohr_lift(&f, &t).unwrap();
        let expected = exact_poly(3, &[(&[], 1), (&[(1, 1)], 1), (&[(1, 1), (2, 1)], 1)]).unwrap();
        assert_eq!(p, expected);
        assert_eq!(p.nvars(), 3);
        let g = ExactSeries::from_ints(12, [(12, 5)]).unwrap();
        assert_eq!(
            bohr_lift(&g, &t).unwrap(),
            exact_poly(5, &[(&[(1, 2), (2, 1)], 5)]).unwrap()
        );
    }

    #[test]
    fn drop_examples() {
        let t = table();
        let p = exact_poly(1, &[(&[], 1), (&[(1, 1)], 1)]).unwrap();
        assert_eq!(
            bohr_drop(&p, &t).unwrap(),
            ExactSeries::from_ints(2, [(1, 1), (2, 1)]).unwrap()
        );
        let q = exact_poly(3, &[(&[(1, 3), (3, 1)], 1)]).unwrap();
        let s = bohr_drop(&q, &t).unwrap();
        assert_eq!(s.support().collect::<Vec<_>>(), vec![40]);
        let big = exact_poly(1, &[(&[(1, 10)], 1)]).unwrap();
        assert!(matches!(
            bohr_drop(&big, &t),
            Err(Error::OverflowWindow { value: 1024, .. })
        ));
    }

    #[test]
    fn poly_products() {
        let a = exact_poly(2, &[(&[], 1), (&[(1, 1)], 1)]).unwrap();
        let b = exact_poly(2, &[(&[], 1), (&[(2, 1)], 1)]).unwrap();
        let expected = exact_poly(
            2,
            &[
                (&[], 1),
                (&[(1, 1)], 1),
                (&[(2, 1)], 1),
                (&[(1, 1), (2, 1)], 1),
            ],
        )
        .unwrap();
        assert_eq!(a.mul(&b), expected);
        assert!(a.mul(&SparseMultiPoly::zero(2)).is_zero());
        assert!(a.add(&a.neg()).is_zero());
    }

    #[test]
    fn evaluation() {
        let p = exact_poly(2, &[(&[], 1), (&[(1, 1), (2, 1)], 1)]).unwrap();
        let ones =
            PolydiscPoint::new([(1, Complex64::new(1.0, 0.0)), (2, Complex64::new(1.0, 0.0))]);
        assert_eq!(p.eval(&ones).unwrap(), Complex64::new(2.0, 0.0));
        assert_eq!(
            p.eval(&PolydiscPoint::default()).unwrap(),
            Complex64::new(1.0, 0.0)
        );
        let outside = PolydiscPoint::new([(1, Complex64::new(2.0, 0.0))]);
        assert!(p.eval(&outside).is_err());
        assert_eq!(p.eval_unchecked(&outside), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn eval_c_examples() {
        let t = table();
        let z = eval_c(Complex64::new(1.0, 0.0), 2, &t).unwrap();
        assert!((z.coord(1) - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        assert!((z.coord(2) - Complex64::new(1.0 / 3.0, 0.0)).norm() < 1e-15);
        let h = eval_c(Complex64::new(0.5, 0.0), 3, &t).unwrap();
        for (i, p) in [(1, 2.0f64), (2, 3.0), (3, 5.0)] {
            assert!((h.coord(i).re - p.powf(-0.5)).abs() < 1e-15);
        }
        let w = eval_c(Complex64::new(0.01, 40.0), 50, &t).unwrap();
        assert!(w.max_modulus() < 1.0);
    }

    #[test]
    fn monomial_relabel_and_degree() {
        let m = Monomial::from_pairs([(3, 2), (1, 1)]).unwrap();
        assert_eq!(m.entries(), &[(1, 1), (3, 2)]);
        assert_eq!(m.degree(), 3);
        let r = m.relabel(|i| if i == 1 { 4 } else { i });
        assert_eq!(r.entries(), &[(3, 2), (4, 1)]);
        assert_eq!(m.to_string(), "x1*x3^2");
    }
}
