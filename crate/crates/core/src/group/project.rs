//! Invariant projection, finite group averages, invariance tests, the
//! restriction homomorphisms `Φ_P` and invariant orbit sums.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::orbit::{index_orbit, integer_orbit};
use super::{act, hat_apply, hat_apply_inverse, Permutation, PermutationGroup, DEFAULT_CEILING};
use crate::arith::{Coeff, QComplex, Series};
use crate::bohr::{Monomial, SparseMultiPoly};
use crate::error::{Error, Result};
use crate::primes::PrimeTable;

/// What [`project_invariant`] does with integers whose orbit is unresolved.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnresolvedPolicy {
    #[default]
    Error,
    /// Treat the orbit as infinite: the projected coefficient is 0.
    ZeroUnresolved,
}

impl fmt::Display for UnresolvedPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UnresolvedPolicy::Error => "error",
            UnresolvedPolicy::ZeroUnresolved => "zero_unresolved",
        })
    }
}

impl FromStr for UnresolvedPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "error" => Ok(UnresolvedPolicy::Error),
            "zero_unresolved" | "zero-unresolved" | "zero" => Ok(UnresolvedPolicy::ZeroUnresolved),
            other => Err(Error::Parse(format!("unknown policy {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionOptions {
    pub policy: UnresolvedPolicy,
    /// Prime index orbits reaching past this index count as unresolved;
    /// `None` means the number of primes in the table.
    pub index_bound: Option<usize>,
    /// Ceiling for integer images.
    pub ceiling: u64,
}

impl Default for ProjectionOptions {
    fn default() -> Self {
        ProjectionOptions {
            policy: UnresolvedPolicy::Error,
            index_bound: None,
            ceiling: DEFAULT_CEILING,
        }
    }
}

/// `π_G f`: each coefficient replaced by its orbit average, zero where an
/// index orbit is infinite.
pub fn project_invariant<C: Coeff>(
    f: &Series<C>,
    group: &PermutationGroup,
    policy: UnresolvedPolicy,
    table: &PrimeTable,
) -> Result<Series<C>> {
    project_invariant_with(
        f,
        group,
        &ProjectionOptions {
            policy,
            ..ProjectionOptions::default()
        },
        table,
    )
}

/// [`project_invariant`] with explicit bounds.
///
/// An integer's orbit is finite iff the orbits of all its prime indices are;
/// those are decided first (up to `index_bound`), then the integer orbit is
/// enumerated. Coefficients beyond the window of `f` count as zero, and the
/// result window covers every orbit it touches.
pub fn project_invariant_with<C: Coeff>(
    f: &Series<C>,
    group: &PermutationGroup,
    opts: &ProjectionOptions,
    table: &PrimeTable,
) -> Result<Series<C>> {
    let max_index = opts.index_bound.unwrap_or(table.prime_count());
    let mut index_resolved: HashMap<usize, bool> = HashMap::new();
    let mut visited: BTreeSet<u64> = BTreeSet::new();
    let mut window = f.window();
    let mut out: Vec<(u64, C)> = Vec::new();
    for n in f.support() {
        if visited.contains(&n) {
            continue;
        }
        let fac = table.factor_smooth(n)?;
        let mut finite = true;
        for &(i, _) in fac.entries() {
            let ok = *index_resolved
                .entry(i)
                .or_insert_with(|| index_orbit(group, i, max_index).is_some());
            finite &= ok;
        }
        let orbit = if finite {
            let o = integer_orbit(group, n, opts.ceiling, table);
            o.status.is_finite().then_some(o.members)
        } else {
            None
        };
        let Some(members) = orbit else {
            match opts.policy {
                UnresolvedPolicy::Error => {
                    return Err(Error::UnresolvedOrbit {
                        n,
                        bound: table.prime(max_index).unwrap_or(table.bound()),
                    })
                }
                UnresolvedPolicy::ZeroUnresolved => {
                    visited.insert(n);
                    continue;
                }
            }
        };
        let sum = members
            .iter()
            .filter_map(|k| f.get(*k))
            .fold(C::zero(), |acc, c| acc + c.clone());
        let avg = sum.div_count(members.len());
        for &k in &members {
            window = window.max(k);
            visited.insert(k);
            out.push((k, avg.clone()));
        }
    }
    Series::from_coeffs(window, out)
}

/// Plain average of `S_g f` over an enumerated group.
pub fn group_average<C: Coeff>(
    f: &Series<C>,
    group: &PermutationGroup,
    table: &PrimeTable,
) -> Result<Series<C>> {
    let elements = group.enumeration().ok_or(Error::GroupTooLarge {
        cap: group.enumeration_cap(),
    })?;
    let mut window = f.window();
    let mut acc: BTreeMap<u64, C> = BTreeMap::new();
    for g in elements {
        let moved = act(&Permutation::Finite(g.clone()), f, table)?;
        window = window.max(moved.window());
        for (n, c) in moved.iter() {
            let slot = acc.entry(n).or_insert_with(C::zero);
            *slot = slot.clone() + c.clone();
        }
    }
    Series::from_coeffs(
        window,
        acc.into_iter()
            .map(|(n, c)| (n, c.div_count(elements.len()))),
    )
}

/// Outcome of [`is_invariant`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Invariance {
    Invariant,
    /// `a_{σ̂^{±1}(n)} != a_n` for the generator `sigma`.
    Violated {
        n: u64,
        sigma: String,
    },
    /// Some image left the window (or the table), and no violation was seen.
    Inconclusive {
        n: u64,
    },
}

/// Checks `a_{σ̂(n)} = a_n` for every generator, in both directions, over
/// the support. This covers every `n <= window` whose image stays inside the
/// window, since a mismatch forces one side into the support.
pub fn is_invariant<C: Coeff>(
    f: &Series<C>,
    group: &PermutationGroup,
    table: &PrimeTable,
) -> Invariance {
    let mut inconclusive = None;
    let zero = C::zero();
    for (n, c) in f.iter() {
        for sigma in group.generators() {
            for image in [
                hat_apply(sigma, n, table),
                hat_apply_inverse(sigma, n, table),
            ] {
                match image {
                    Ok(m) if m <= f.window() => {
                        if f.get(m).unwrap_or(&zero) != c {
                            return Invariance::Violated {
                                n,
                                sigma: sigma.to_string(),
                            };
                        }
                    }
                    _ => {
                        inconclusive.get_or_insert(n);
                    }
                }
            }
        }
    }
    match inconclusive {
        Some(n) => Invariance::Inconclusive { n },
        None => Invariance::Invariant,
    }
}

/// `Φ_P f`: keeps the coefficients of integers built from primes indexed by
/// `index_set`.
pub fn phi_restrict<C: Coeff>(
    f: &Series<C>,
    index_set: &BTreeSet<usize>,
    table: &PrimeTable,
) -> Result<Series<C>> {
    let mut pairs = Vec::new();
    for (n, c) in f.iter() {
        if table.semigroup_member(n, index_set)? {
            pairs.push((n, c.clone()));
        }
    }
    Series::from_coeffs(f.window(), pairs)
}

/// Average of `p(x_{g(1)}, x_{g(2)}, ...)` over an enumerated group.
pub fn poly_group_average<C: Coeff>(
    p: &SparseMultiPoly<C>,
    group: &PermutationGroup,
) -> Result<SparseMultiPoly<C>> {
    let elements = group.enumeration().ok_or(Error::GroupTooLarge {
        cap: group.enumeration_cap(),
    })?;
    let mut acc = SparseMultiPoly::zero(p.nvars());
    for g in elements {
        acc = acc.add(&p.relabel_vars(|i| g.apply(i)));
    }
    let len = elements.len();
    let nvars = acc.nvars();
    SparseMultiPoly::from_terms(
        nvars,
        acc.terms().map(|(m, c)| (m.clone(), c.div_count(len))),
    )
}

/// One orbit sum per orbit of monomials in `x_1..x_m` of total degree at most
/// `degree`, ordered by degree and then by the first monomial generated.
pub fn invariant_orbit_sums(
    m: usize,
    degree: u32,
    group: &PermutationGroup,
) -> Result<Vec<SparseMultiPoly<QComplex>>> {
    let elements = group.enumeration().ok_or(Error::GroupTooLarge {
        cap: group.enumeration_cap(),
    })?;
    let mut seen: BTreeSet<Monomial> = BTreeSet::new();
    let mut out = Vec::new();
    for d in 0..=degree {
        for mono in monomials_of_degree(m, d) {
            if seen.contains(&mono) {
                continue;
            }
            let orbit: BTreeSet<Monomial> = elements
                .iter()
                .map(|g| mono.relabel(|i| g.apply(i)))
                .collect();
            let nvars = orbit
                .iter()
                .map(Monomial::max_var)
                .max()
                .unwrap_or(0)
                .max(m);
            seen.extend(orbit.iter().cloned());
            out.push(SparseMultiPoly::from_terms(
                nvars,
                orbit.into_iter().map(|mm| (mm, QComplex::from_i64(1))),
            )?);
        }
    }
    Ok(out)
}

/// Monomials in `x_1..x_m` of total degree exactly `d`, exponent vectors in
/// decreasing lexicographic order.
fn monomials_of_degree(m: usize, d: u32) -> Vec<Monomial> {
    fn rec(var: usize, m: usize, left: u32, cur: &mut Vec<(usize, u32)>, out: &mut Vec<Monomial>) {
        if left == 0 {
            out.push(Monomial::from_pairs(cur.iter().copied()).expect("increasing variables"));
            return;
        }
        if var > m {
            return;
        }
        for e in (0..=left).rev() {
            if e > 0 {
                cur.push((var, e));
            }
            rec(var + 1, m, left - e, cur, out);
            if e > 0 {
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(1, m, d, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ExactSeries;
    use num_rational::BigRational;

    fn table() -> PrimeTable {
        PrimeTable::sieve(100_000).unwrap()
    }

    fn q(n: i64, d: i64) -> QComplex {
        QComplex::new(
            BigRational::new(n.into(), d.into()),
            BigRational::from_integer(0.into()),
        )
    }

    #[test]
    fn projection_examples() {
        let t = table();
        let g = PermutationGroup::parse(&["(1 2)"]).unwrap();
        let f = ExactSeries::from_ints(3, [(2, 1)]).unwrap();
        let p = project_invariant(&f, &g, UnresolvedPolicy::Error, &t).unwrap();
        assert_eq!(
            p,
            ExactSeries::from_coeffs(3, [(2, q(1, 2)), (3, q(1, 2))]).unwrap()
        );
        let five = ExactSeries::from_ints(5, [(5, 1)]).unwrap();
        assert_eq!(
            project_invariant(&five, &g, UnresolvedPolicy::Error, &t).unwrap(),
            five
        );
        let shift = PermutationGroup::parse(&["shift(1)"]).unwrap();
        let h = ExactSeries::from_ints(2, [(1, 7), (2, 1)]).unwrap();
        assert_eq!(
            project_invariant(&h, &shift, UnresolvedPolicy::ZeroUnresolved, &t).unwrap(),
            ExactSeries::from_ints(2, [(1, 7)]).unwrap()
        );
        assert!(matches!(
            project_invariant(&h, &shift, UnresolvedPolicy::Error, &t),
            Err(Error::UnresolvedOrbit { n: 2, .. })
        ));
    }

    #[test]
    fn average_matches_projection() {
        let t = table();
        let g = PermutationGroup::parse(&["(1 2 3)", "(4 5)"]).unwrap();
        let f = ExactSeries::from_ints(100, [(1, 3), (2, 1), (12, -2), (35, 5), (77, 1), (100, 4)])
            .unwrap();
        let a = group_average(&f, &g, &t).unwrap();
        let p = project_invariant(&f, &g, UnresolvedPolicy::Error, &t).unwrap();
        assert_eq!(a.window(), p.window());
        assert_eq!(a, p);
        assert_eq!(is_invariant(&p, &g, &t), Invariance::Invariant);
        assert_eq!(
            project_invariant(&p, &g, UnresolvedPolicy::Error, &t).unwrap(),
            p
        );
        let id = PermutationGroup::trivial();
        assert_eq!(group_average(&f, &id, &t).unwrap(), f);
        let shift = PermutationGroup::parse(&["shift(1)"]).unwrap();
        assert!(matches!(
            group_average(&f, &shift, &t),
            Err(Error::GroupTooLarge { .. })
        ));
    }

    #[test]
    fn invariance_examples() {
        let t = table();
        let g = PermutationGroup::parse(&["(1 2)"]).unwrap();
        let f = ExactSeries::from_ints(3, [(2, 1), (3, 1)]).unwrap();
        assert_eq!(is_invariant(&f, &g, &t), Invariance::Invariant);
        let h = ExactSeries::from_ints(3, [(2, 1)]).unwrap();
        assert_eq!(
            is_invariant(&h, &g, &t),
            Invariance::Violated {
                n: 2,
                sigma: "(1 2)".into()
            }
        );
        let short = ExactSeries::from_ints(2, [(2, 1)]).unwrap();
        assert_eq!(
            is_invariant(&short, &g, &t),
            Invariance::Inconclusive { n: 2 }
        );
    }

    #[test]
    fn restriction_examples() {
        let t = table();
        let z = ExactSeries::zeta(8).unwrap();
        let two = phi_restrict(&z, &BTreeSet::from([1]), &t).unwrap();
        assert_eq!(
            two,
            ExactSeries::from_ints(8, [(1, 1), (2, 1), (4, 1), (8, 1)]).unwrap()
        );
        let all: BTreeSet<usize> = (1..=4).collect();
        assert_eq!(phi_restrict(&z, &all, &t).unwrap(), z);
    }

    #[test]
    fn orbit_sums_for_two_variables() {
        let s2 = PermutationGroup::symmetric(2);
        let sums = invariant_orbit_sums(2, 2, &s2).unwrap();
        let shown: BTreeSet<String> = sums
            .iter()
            .map(|p| {
                p.terms()
                    .map(|(m, _)| m.to_string())
                    .collect::<Vec<_>>()
                    .join("+")
            })
            .collect();
        let expected: BTreeSet<String> = ["1", "x1+x2", "x1*x2", "x1^2+x2^2"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(shown, expected);
        assert_eq!(
            invariant_orbit_sums(3, 2, &PermutationGroup::trivial())
                .unwrap()
                .len(),
            10
        );
        let p = &sums[1];
        assert_eq!(&poly_group_average(p, &s2).unwrap(), p);
    }
}
