//! Orbits of integers and of prime indices under a generator-presented group.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use super::{hat_map, PermutationGroup};
use crate::primes::PrimeTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum OrbitStatus {
    Finite,
    /// The closure left `[1, bound]`; the orbit may still be finite.
    Unresolved {
        bound: u64,
    },
}

impl OrbitStatus {
    pub fn is_finite(&self) -> bool {
        matches!(self, OrbitStatus::Finite)
    }
}

/// `O(n)`: the members reached before the search stopped.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegerOrbit {
    pub seed: u64,
    pub members: BTreeSet<u64>,
    pub status: OrbitStatus,
}

/// Breadth-first closure of `{n}` under `σ̂` and `σ̂^{-1}` for every
/// generator. Finite iff every image stays in `[1, bound]` and factors over
/// the table.
pub fn integer_orbit(
    group: &PermutationGroup,
    n: u64,
    bound: u64,
    table: &PrimeTable,
) -> IntegerOrbit {
    let unresolved = OrbitStatus::Unresolved { bound };
    let mut members = BTreeSet::from([n]);
    if n == 0 || n > bound {
        return IntegerOrbit {
            seed: n,
            members,
            status: unresolved,
        };
    }
    let mut queue = VecDeque::from([n]);
    while let Some(m) = queue.pop_front() {
        for sigma in group.generators() {
            for image in [
                hat_map(m, table, bound, |i| sigma.apply(i)),
                hat_map(m, table, bound, |i| sigma.apply_inverse(i)),
            ] {
                match image {
                    Ok(k) => {
                        if members.insert(k) {
                            queue.push_back(k);
                        }
                    }
                    Err(_) => {
                        return IntegerOrbit {
                            seed: n,
                            members,
                            status: unresolved,
                        }
                    }
                }
            }
        }
    }
    IntegerOrbit {
        seed: n,
        members,
        status: OrbitStatus::Finite,
    }
}

/// Orbit of a prime index, or `None` once it leaves `[1, max_index]`.
pub(crate) fn index_orbit(
    group: &PermutationGroup,
    i: usize,
    max_index: usize,
) -> Option<BTreeSet<usize>> {
    if i > max_index {
        return None;
    }
    let mut members = BTreeSet::from([i]);
    let mut queue = VecDeque::from([i]);
    while let Some(j) = queue.pop_front() {
        for sigma in group.generators() {
            for k in [sigma.apply(j), sigma.apply_inverse(j)] {
                if k > max_index {
                    return None;
                }
                if members.insert(k) {
                    queue.push_back(k);
                }
            }
        }
    }
    Some(members)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexOrbit {
    pub members: Vec<usize>,
    pub status: OrbitStatus,
}

/// Partition of `[1, M]` into index orbits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitPartition {
    pub index_bound: usize,
    /// Ordered by smallest member.
    pub orbits: Vec<IndexOrbit>,
}

impl OrbitPartition {
    /// The orbit containing `i`, if `i <= M`.
    pub fn orbit_of(&self, i: usize) -> Option<&IndexOrbit> {
        self.orbits
            .iter()
            .find(|o| o.members.binary_search(&i).is_ok())
    }

    /// Union of the finite orbits.
    pub fn resolved_indices(&self) -> BTreeSet<usize> {
        self.orbits
            .iter()
            .filter(|o| o.status.is_finite())
            .flat_map(|o| o.members.iter().copied())
            .collect()
    }
}

/// Union-find over `[1, M]`, joining `i` with each generator image. A class
/// is unresolved when some generator (or its inverse) maps a member past `M`.
pub fn index_orbits(group: &PermutationGroup, m: usize) -> OrbitPartition {
    let mut parent: Vec<usize> = (0..=m).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut escaping = Vec::new();
    for sigma in group.generators() {
        for i in 1..=m {
            for j in [sigma.apply(i), sigma.apply_inverse(i)] {
                if j > m {
                    escaping.push(i);
                } else {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 1..=m {
        let r = find(&mut parent, i);
        classes.entry(r).or_default().push(i);
    }
    let bad: BTreeSet<usize> = escaping.into_iter().map(|i| find(&mut parent, i)).collect();
    let orbits = classes
        .into_iter()
        .map(|(root, members)| IndexOrbit {
            members,
            status: if bad.contains(&root) {
                OrbitStatus::Unresolved { bound: m as u64 }
            } else {
                OrbitStatus::Finite
            },
        })
        .collect();
    OrbitPartition {
        index_bound: m,
        orbits,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> PrimeTable {
        PrimeTable::sieve(1_000_000).unwrap()
    }

    #[test]
    fn integer_orbit_examples() {
        let t = table();
        let g = PermutationGroup::parse(&["(1 2)"]).unwrap();
        let o6 = integer_orbit(&g, 6, 1000, &t);
        assert_eq!(o6.members, BTreeSet::from([6]));
        assert!(o6.status.is_finite());
        let o12 = integer_orbit(&g, 12, 1000, &t);
        assert_eq!(o12.members, BTreeSet::from([12, 18]));
        let shift = PermutationGroup::parse(&["shift(1)"]).unwrap();
        let o2 = integer_orbit(&shift, 2, 1_000_000, &t);
        assert_eq!(o2.status, OrbitStatus::Unresolved { bound: 1_000_000 });
        assert!(o2.members.len() > 10);
        assert!(integer_orbit(&shift, 1, 10, &t).status.is_finite());
    }

    #[test]
    fn index_partition_examples() {
        let g = PermutationGroup::parse(&["(1 2)(4 5)"]).unwrap();
        let p = index_orbits(&g, 5);
        let members: Vec<Vec<usize>> = p.orbits.iter().map(|o| o.members.clone()).collect();
        assert_eq!(members, vec![vec![1, 2], vec![3], vec![4, 5]]);
        assert!(p.orbits.iter().all(|o| o.status.is_finite()));
        let trivial = index_orbits(&PermutationGroup::trivial(), 4);
        assert_eq!(trivial.orbits.len(), 4);
        let cyc = PermutationGroup::parse(&["(1 2 3 4 5 6)"]).unwrap();
        assert_eq!(index_orbits(&cyc, 6).orbits.len(), 1);
        let escaping = index_orbits(&cyc, 4);
        assert_eq!(escaping.orbits.len(), 1);
        assert!(!escaping.orbits[0].status.is_finite());
        let shift = PermutationGroup::parse(&["shift(1)"]).unwrap();
        let s = index_orbits(&shift, 9);
        assert_eq!(s.orbits.len(), 1);
        assert!(!s.orbits[0].status.is_finite());
    }

    #[test]
    fn index_orbit_closure() {
        let g = PermutationGroup::parse(&["(1 3)", "(3 7)"]).unwrap();
        assert_eq!(index_orbit(&g, 1, 10), Some(BTreeSet::from([1, 3, 7])));
        assert_eq!(index_orbit(&g, 1, 5), None);
        assert_eq!(index_orbit(&g, 2, 10), Some(BTreeSet::from([2])));
    }
}
