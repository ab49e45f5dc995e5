use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use super::scalar::{Coeff, QComplex};
use crate::error::{Error, Result};
use crate::primes::PrimeTable;

/// Largest window accepted by [`Series::invert`], which needs a dense
/// accumulator over `[1, window]`.
pub const MAX_INVERT_WINDOW: u64 = 1 << 24;

/// A truncated formal Dirichlet series `sum_{n <= N} a_n n^{-s}`.
///
/// Only nonzero coefficients are stored. The window `N` records how far the
/// coefficients are known: every index `<= N` that is absent is a genuine
/// zero. Binary operations truncate to the smaller window, which is exactly
/// the range on which a convolution of two truncated series is determined.
///
/// Equality compares coefficients on the common window `min(N1, N2)`.
#[derive(Clone)]
pub struct Series<C> {
    window: u64,
    coeffs: BTreeMap<u64, C>,
}

pub type ExactSeries = Series<QComplex>;
pub type FloatSeries = Series<Complex64>;

impl<C: Coeff> Series<C> {
    fn check_window(window: u64) -> Result<()> {
        if window == 0 {
            return Err(Error::invalid("window must be >= 1"));
        }
        Ok(())
    }

    pub fn zero(window: u64) -> Result<Self> {
        Self::check_window(window)?;
        Ok(Series {
            window,
            coeffs: BTreeMap::new(),
        })
    }

    /// The unit `1 = 1^{-s}`.
    pub fn one(window: u64) -> Result<Self> {
        Self::monomial(1, C::one(), window)
    }

    /// `c n^{-s}` on the given window.
    pub fn monomial(n: u64, c: C, window: u64) -> Result<Self> {
        Self::from_coeffs(window, [(n, c)])
    }

    /// Truncated zeta series: `a_n = 1` for every `n <= window`.
    pub fn zeta(window: u64) -> Result<Self> {
        Self::from_coeffs(window, (1..=window).map(|n| (n, C::one())))
    }

    /// Builds a series from `(n, a_n)` pairs. Repeated indices are summed and
    /// zero results dropped; indices outside `[1, window]` are rejected.
    pub fn from_coeffs(window: u64, pairs: impl IntoIterator<Item = (u64, C)>) -> Result<Self> {
        Self::check_window(window)?;
        let mut coeffs: BTreeMap<u64, C> = BTreeMap::new();
        for (n, c) in pairs {
            if n == 0 || n > window {
                return Err(Error::invalid(format!(
                    "coefficient index {n} outside window [1, {window}]"
                )));
            }
            accumulate(&mut coeffs, n, c);
        }
        coeffs.retain(|_, c| !c.is_zero());
        Ok(Series { window, coeffs })
    }

    /// Internal constructor for maps already known to be in range.
    pub(crate) fn from_map_unchecked(window: u64, mut coeffs: BTreeMap<u64, C>) -> Self {
        coeffs.retain(|_, c| !c.is_zero());
        debug_assert!(coeffs.keys().all(|&n| n >= 1 && n <= window));
        Series { window, coeffs }
    }

    pub fn window(&self) -> u64 {
        self.window
    }

    /// Coefficient `a_n`; zero for absent indices inside the window.
    pub fn coeff(&self, n: u64) -> Result<C> {
        if n == 0 || n > self.window {
            return Err(Error::invalid(format!(
                "index {n} outside window [1, {}]",
                self.window
            )));
        }
        Ok(self.coeffs.get(&n).cloned().unwrap_or_else(C::zero))
    }

    /// Stored (nonzero) coefficient, `None` if absent.
    pub fn get(&self, n: u64) -> Option<&C> {
        self.coeffs.get(&n)
    }

    /// Nonzero coefficients in increasing index order.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (u64, &C)> + '_ {
        self.coeffs.iter().map(|(&n, c)| (n, c))
    }

    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn coeff_map(&self) -> &BTreeMap<u64, C> {
        &self.coeffs
    }

    /// Number of stored terms.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest index with a nonzero coefficient.
    pub fn max_support(&self) -> Option<u64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Restricts to a smaller window.
    pub fn truncate(&self, window: u64) -> Result<Self> {
        Self::check_window(window)?;
        if window > self.window {
            return Err(Error::invalid(format!(
                "cannot truncate window {} up to {window}",
                self.window
            )));
        }
        Ok(Series {
            window,
            coeffs: self
                .coeffs
                .range(..=window)
                .map(|(&n, c)| (n, c.clone()))
                .collect(),
        })
    }

    /// Declares every coefficient in `(self.window, window]` to be zero, i.e.
    /// reads the stored terms as a Dirichlet polynomial on a larger window.
    pub fn extend_window(&self, window: u64) -> Result<Self> {
        if window < self.window {
            return Err(Error::invalid(format!(
                "cannot extend window {} down to {window}",
                self.window
            )));
        }
        Ok(Series {
            window,
            coeffs: self.coeffs.clone(),
        })
    }

    /// Keeps only the terms with `Ω(n) <= degree`.
    ///
    /// The set `{n : Ω(n) <= d}` is stable under every completely
    /// multiplicative permutation, so this truncation commutes with the group
    /// action where window truncation does not.
    pub fn truncate_degree(&self, degree: u32, table: &PrimeTable) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for (&n, c) in &self.coeffs {
            if table.factor_smooth(n)?.omega() <= degree {
                coeffs.insert(n, c.clone());
            }
        }
        Ok(Series {
            window: self.window,
            coeffs,
        })
    }

    /// Coefficientwise sum on the common window.
    pub fn add(&self, other: &Self) -> Self {
        let window = self.window.min(other.window);
        let mut coeffs: BTreeMap<u64, C> = self
            .coeffs
            .range(..=window)
            .map(|(&n, c)| (n, c.clone()))
            .collect();
        for (&n, c) in other.coeffs.range(..=window) {
            accumulate(&mut coeffs, n, c.clone());
        }
        Self::from_map_unchecked(window, coeffs)
    }

    pub fn neg(&self) -> Self {
        Series {
            window: self.window,
            coeffs: self.coeffs.iter().map(|(&n, c)| (n, -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &C) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&n, a)| (n, c.clone() * a.clone()))
            .collect();
        Self::from_map_unchecked(self.window, coeffs)
    }

    /// Dirichlet convolution `c_n = sum_{de = n} a_d b_e` on the common window.
    pub fn mul(&self, other: &Self) -> Self {
        let window = self.window.min(other.window);
        let mut coeffs: BTreeMap<u64, C> = BTreeMap::new();
        for (&d, a) in self.coeffs.range(..=window) {
            for (&e, b) in other.coeffs.range(..=window / d) {
                accumulate(&mut coeffs, d * e, a.clone() * b.clone());
            }
        }
        Self::from_map_unchecked(window, coeffs)
    }

    /// Inverse in the local algebra of truncated series.
    ///
    /// Uses the divisor recursion `b_1 = 1/a_1`,
    /// `b_n = -(1/a_1) sum_{d | n, d > 1} a_d b_{n/d}`, pushing each finished
    /// `b_n` forward into the accumulators of its multiples.
    pub fn invert(&self) -> Result<Self> {
        if self.window > MAX_INVERT_WINDOW {
            return Err(Error::invalid(format!(
                "window {} too large for dense inversion (limit {MAX_INVERT_WINDOW})",
                self.window
            )));
        }
        let inv_lead = self
            .coeffs
            .get(&1)
            .and_then(Coeff::try_recip)
            .ok_or(Error::NotInvertible)?;
        let window = self.window as usize;
        let mut acc: Vec<Option<C>> = vec![None; window + 1];
        let mut out: BTreeMap<u64, C> = BTreeMap::new();
        for n in 1..=window {
            let b_n = if n == 1 {
                inv_lead.clone()
            } else {
                match acc[n].take() {
                    Some(s) => -(inv_lead.clone() * s),
                    None => continue,
                }
            };
            if b_n.is_zero() {
                continue;
            }
            for (&d, a_d) in self.coeffs.range(2..) {
                let m = n as u64 * d;
                if m > self.window {
                    break;
                }
                let term = a_d.clone() * b_n.clone();
                let slot = &mut acc[m as usize];
                *slot = Some(match slot.take() {
                    Some(s) => s + term,
                    None => term,
                });
            }
            out.insert(n as u64, b_n);
        }
        Ok(Self::from_map_unchecked(self.window, out))
    }

    /// Dilation `D_r = sum r^{Ω(n)} a_n n^{-s}`.
    pub fn dilate(&self, r: &C, table: &PrimeTable) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for (&n, a) in &self.coeffs {
            let omega = table.factor_smooth(n)?.omega();
            coeffs.insert(n, r.pow(omega) * a.clone());
        }
        Ok(Self::from_map_unchecked(self.window, coeffs))
    }

    /// `sum |a_n|` rounded to `f64`.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.values().map(Coeff::modulus).sum()
    }

    /// Exact `sum |a_n|` when every modulus is rational.
    pub fn l1_norm_exact(&self) -> Option<BigRational> {
        let mut total = BigRational::zero();
        for c in self.coeffs.values() {
            total += c.exact_modulus()?;
        }
        Some(total)
    }

    /// Converts coefficients to double precision.
    pub fn to_float(&self) -> FloatSeries {
        Series::from_map_unchecked(
            self.window,
            self.coeffs.iter().map(|(&n, c)| (n, c.to_c64())).collect(),
        )
    }

    /// Coefficientwise agreement on the common window.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let w = self.window.min(other.window);
        self.coeffs.range(..=w).eq(other.coeffs.range(..=w))
    }

    /// Largest coefficient deviation on the common window (float diagnostics).
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let w = self.window.min(other.window);
        let diff = self.truncate(w).unwrap().sub(&other.truncate(w).unwrap());
        diff.coeffs.values().map(Coeff::modulus).fold(0.0, f64::max)
    }
}

fn accumulate<C: Coeff>(map: &mut BTreeMap<u64, C>, n: u64, c: C) {
    match map.get_mut(&n) {
        Some(slot) => {
            let sum = slot.clone() + c;
            if sum.is_zero() {
                map.remove(&n);
            } else {
                *slot = sum;
            }
        }
        None => {
            if !c.is_zero() {
                map.insert(n, c);
            }
        }
    }
}

impl<C: Coeff> PartialEq for Series<C> {
    fn eq(&self, other: &Self) -> bool {
        self.agrees_with(other)
    }
}

impl<C: Coeff> fmt::Debug for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series[N={}]", self.window)?;
        f.debug_map().entries(self.coeffs.iter()).finish()
    }
}

impl ExactSeries {
    /// Builds an exact series from small integer coefficients.
    pub fn from_ints(window: u64, pairs: impl IntoIterator<Item = (u64, i64)>) -> Result<Self> {
        Self::from_coeffs(
            window,
            pairs.into_iter().map(|(n, c)| (n, QComplex::from_i64(c))),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> QComplex {
        QComplex::new(BigRational::new(n.into(), d.into()), BigRational::zero())
    }

    fn s(window: u64, pairs: &[(u64, i64)]) -> ExactSeries {
        ExactSeries::from_ints(window, pairs.iter().copied()).unwrap()
    }

    #[test]
    fn add_examples() {
        assert!(s(4, &[(1, 1)]).add(&s(4, &[(1, -1)])).is_zero());
        let sum = s(4, &[(2, 1)]).add(&s(4, &[(3, 1)]));
        assert_eq!(sum.iter().map(|(n, _)| n).collect::<Vec<_>>(), vec![2, 3]);
        assert_eq!(
            s(8, &[(2, 1), (4, 3)]).scale(&q(2, 1)),
            s(8, &[(2, 2), (4, 6)])
        );
    }

    #[test]
    fn add_uses_smaller_window() {
        let sum = s(10, &[(7, 1)]).add(&s(5, &[(2, 1)]));
        assert_eq!(sum.window(), 5);
        assert_eq!(sum.len(), 1);
    }

    #[test]
    fn mul_examples() {
        let prod = s(10, &[(1, 1), (2, 1)]).mul(&s(10, &[(1, 1), (3, 1)]));
        assert_eq!(prod, s(10, &[(1, 1), (2, 1), (3, 1), (6, 1)]));
        assert_eq!(s(4, &[(2, 1)]).mul(&s(4, &[(2, 1)])), s(4, &[(4, 1)]));
        // 2 * 3 = 6 falls outside a window of 5.
        assert!(s(5, &[(2, 1)]).mul(&s(5, &[(3, 1)])).is_zero());
    }

    #[test]
    fn one_is_unit() {
        assert_eq!(ExactSeries::one(1).unwrap(), s(1, &[(1, 1)]));
        let f = s(30, &[(1, 3), (6, -2), (25, 7)]);
        assert_eq!(ExactSeries::one(30).unwrap().mul(&f), f);
        let one = ExactSeries::one(9).unwrap();
        assert!(one.add(&one.scale(&q(-1, 1))).is_zero());
    }

    #[test]
    fn invert_examples() {
        assert_eq!(
            s(5, &[(1, 2)]).invert().unwrap(),
            ExactSeries::monomial(1, q(1, 2), 5).unwrap()
        );
        let mu = ExactSeries::zeta(8).unwrap().invert().unwrap();
        assert_eq!(
            mu,
            s(8, &[(1, 1), (2, -1), (3, -1), (5, -1), (6, 1), (7, -1)])
        );
        assert_eq!(mu.len(), 6);
        assert_eq!(mu.window(), 8);
        assert!(matches!(
            s(8, &[(2, 1)]).invert(),
            Err(Error::NotInvertible)
        ));
    }

    #[test]
    fn float_invert_tolerance() {
        let tiny = FloatSeries::monomial(1, Complex64::new(1e-13, 0.0), 4).unwrap();
        assert!(matches!(tiny.invert(), Err(Error::NotInvertible)));
    }

    #[test]
    fn dilate_examples() {
        let table = PrimeTable::sieve(100).unwrap();
        let f = s(12, &[(12, 1)]);
        assert_eq!(
            f.dilate(&q(1, 2), &table).unwrap(),
            ExactSeries::monomial(12, q(1, 8), 12).unwrap()
        );
        let g = s(30, &[(1, 2), (4, -1), (30, 5)]);
        assert_eq!(g.dilate(&q(1, 1), &table).unwrap(), g);
        // r = 0 keeps only a_1.
        assert_eq!(
            g.dilate(&QComplex::zero(), &table).unwrap(),
            s(30, &[(1, 2)])
        );
    }

    #[test]
    fn l1_norm_examples() {
        assert_eq!(ExactSeries::zero(3).unwrap().l1_norm(), 0.0);
        let f = ExactSeries::from_coeffs(
            3,
            [
                (2, q(3, 1)),
                (
                    3,
                    QComplex::new(BigRational::zero(), BigRational::from_integer((-4).into())),
                ),
            ],
        )
        .unwrap();
        assert_eq!(f.l1_norm(), 7.0);
        assert_eq!(f.l1_norm_exact(), Some(BigRational::from_integer(7.into())));
    }

    #[test]
    fn from_coeffs_validates() {
        assert!(ExactSeries::from_ints(4, [(5, 1)]).is_err());
        assert!(ExactSeries::from_ints(4, [(0, 1)]).is_err());
        assert!(ExactSeries::zero(0).is_err());
        assert!(ExactSeries::from_ints(4, [(2, 1), (2, -1)])
            .unwrap()
            .is_zero());
    }

    #[test]
    fn equality_on_common_window() {
        let a = s(10, &[(2, 1), (9, 4)]);
        let b = s(5, &[(2, 1)]);
        assert_eq!(a, b);
        assert_ne!(a, s(10, &[(2, 1)]));
    }

    #[test]
    fn degree_truncation() {
        let table = PrimeTable::sieve(100).unwrap();
        let f = ExactSeries::zeta(12)
            .unwrap()
            .truncate_degree(1, &table)
            .unwrap();
        assert_eq!(f.support().collect::<Vec<_>>(), vec![1, 2, 3, 5, 7, 11]);
    }
}
