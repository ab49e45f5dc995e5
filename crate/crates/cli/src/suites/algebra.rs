//! Exact suites: ring and action laws, projections, invariant inverses and
//! restrictions.

use std::collections::BTreeSet;

use dirichlet::arith::{ExactSeries, QComplex, Series};
use dirichlet::group::{
    act, group_average, index_orbits, is_invariant, phi_restrict, project_invariant, Invariance,
    Permutation, PermutationGroup, UnresolvedPolicy,
};
use dirichlet::random::{
    random_exact_coeff, random_exact_on, random_exact_series, random_permutation, ExactCoeffs,
};
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::codec::{
    exact, get, get_complex_rational, get_exact, get_group, get_index_set, get_perm, group, perm,
};
use super::{Ctx, Outcome, Property, Suite};
use crate::error::CliResult;

/// Window large enough that no product or image in these suites is cut off.
const POLY: u64 = 1 << 62;

fn complex_shape() -> ExactCoeffs {
    ExactCoeffs {
        max_num: 9,
        max_den: 4,
        complex: true,
    }
}

fn real_shape() -> ExactCoeffs {
    ExactCoeffs {
        max_num: 7,
        max_den: 4,
        complex: false,
    }
}

fn law_series(rng: &mut ChaCha8Rng) -> CliResult<ExactSeries> {
    let window = rng.gen_range(1..=256);
    let density = rng.gen_range(0.01..=0.1);
    Ok(random_exact_series(rng, window, density, &complex_shape())?)
}

fn small_perm(rng: &mut ChaCha8Rng) -> Permutation {
    let moved = rng.gen_range(2..=6);
    Permutation::Finite(random_permutation(rng, 6, moved))
}

/// One or two random generators on indices `<= 6`.
fn small_group(rng: &mut ChaCha8Rng) -> PermutationGroup {
    let count = rng.gen_range(1..=2);
    PermutationGroup::new((0..count).map(|_| small_perm(rng)).collect())
}

fn poly(s: &ExactSeries) -> CliResult<ExactSeries> {
    Ok(s.extend_window(POLY)?)
}

fn same_coeffs(a: &ExactSeries, b: &ExactSeries) -> Outcome {
    Outcome::from_bool(a.coeff_map() == b.coeff_map(), || exact(a), || exact(b))
}

fn same_series(a: &ExactSeries, b: &ExactSeries) -> Outcome {
    Outcome::from_bool(a == b, || exact(a), || exact(b))
}

fn project(h: &ExactSeries, g: &PermutationGroup, ctx: &Ctx) -> CliResult<ExactSeries> {
    Ok(project_invariant(
        h,
        g,
        UnresolvedPolicy::Error,
        &ctx.table,
    )?)
}

fn gen_triple(rng: &mut ChaCha8Rng, _: &Ctx) -> CliResult<Value> {
    Ok(
        json!({"f": exact(&law_series(rng)?), "g": exact(&law_series(rng)?), "h": exact(&law_series(rng)?)}),
    )
}

fn check_associativity(v: &Value, _: &Ctx) -> CliResult<Outcome> {
    let (f, g, h) = (get_exact(v, "f")?, get_exact(v, "g")?, get_exact(v, "h")?);
    Ok(same_series(&f.mul(&g).mul(&h), &f.mul(&g.mul(&h))))
}

fn check_distributivity(v: &Value, _: &Ctx) -> CliResult<Outcome> {
    let (f, g, h) = (get_exact(v, "f")?, get_exact(v, "g")?, get_exact(v, "h")?);
    Ok(same_series(&f.mul(&g.add(&h)), &f.mul(&g).add(&f.mul(&h))))
}

fn gen_action(rng: &mut ChaCha8Rng, _: &Ctx) -> CliResult<Value> {
    Ok(json!({
        "f": exact(&law_series(rng)?),
        "g": exact(&law_series(rng)?),
        "sigma": perm(&small_perm(rng)),
        "tau": perm(&small_perm(rng)),
    }))
}

fn check_action_multiplicative(v: &Value, ctx: &Ctx) -> CliResult<Outcome> {
    let (f, g) = (poly(&get_exact(v, "f")?)?, poly(&get_exact(v, "g")?)?);
    let sigma = get_perm(v, "sigma")?;
    let t = &ctx.table;
    let lhs = act(&sigma, &f.mul(&g), t)?;
    let rhs = act(&sigma, &f, t)?.mul(&act(&sigma, &g, t)?);
    Ok(same_coeffs(&lhs, &rhs))
}

fn check_action_composition(v: &Value, ctx: &Ctx) -> CliResult<Outcome> {
    let f = poly(&get_exact(v, "f")?)?;
    let (sigma, tau) = (get_perm(v, "sigma")?, get_perm(v, "tau")?);
    let (Some(s), Some(u)) = (sigma.as_finite(), tau.as_finite()) else {
        return Err(crate::error::CliError::usage(
            "composition inputs must be finitely supported",
        ));
    };
    let t = &ctx.table;
    let composed = act(&Permutation::Finite(s.compose(u)), &f, t)?;
    let nested = act(&sigma, &act(&tau, &f, t)?, t)?;
    Ok(same_coeffs(&composed, &nested))
}

fn check_action_inverse(v: &Value, ctx: &Ctx) -> CliResult<Outcome> {
    let f = poly(&get_exact(v, "f")?)?;
    let sigma = get_perm(v, "sigma")?;
    let back = act(&sigma.inverse(), &act(&sigma, &f, &ctx.table)?, &ctx.table)?;
    Ok(same_coeffs(&back, &f))
}

fn gen_projection(rng: &mut ChaCha8Rng, _: &Ctx) -> CliResult<Value> {
    let g = small_group(rng);
    let h = random_exact_series(rng, 64, 0.15, &real_shape())?;
    let x = random_exact_series(rng, 64, 0.15, &real_shape())?;
    Ok(json!({"group": group(&g), "h": exact(&h), "x": exact(&x)}))
}

fn check_idempotent(v: &Value, ctx: &Ctx) -> CliResult<Outcome> {
    let g = get_group(v, "group")?;
    let p = project(&poly(&get_exact(v, "h")?)?, &g, ctx)?;
    Ok(same_coeffs(&project(&p, &g, ctx)?, &p))
}

fn check_nonexpansive(v: &Value, ctx: &Ctx) -> CliResult<Outcome> {
    let g = get_group(v, "group")?;
    let h = poly(&get_exact(v, "h")?)?;
    let p = project(&h, &g, ctx)?;
    let (lp, lh) = (p.l1_norm_exact(), h.l1_norm_exact());
    let ok = matches!((&lp, &lh), (Some(a), Some(b)) if a <= b);
    let show = |x: &Option<BigRational>| x.as_ref().map_or(Value::Null, |q| json!(q.to_string()));
    Ok(Outcome::from_bool(
        ok,
        || json!({"at_most": show(&lh)}),
        || show(&lp),
    ))
}

fn check_one_fixed(v: &Value, ctx: &Ctx) -> CliResult<Outcome> {
    let g = get_group(v, "group")?;
    let one = ExactSeries::one(POLY)?;
    let p = project(&one, &g, ctx)?;
    Ok(same_coeffs(&p, &one))
}

fn check_module_law(v: &Value, ctx: &Ctx) -> CliResult<Outcome> {
    let g = get_group(v, "group")?;
    let f = project(&poly(&get_exact(v, "h")?)?, &g, ctx)?;
    let x = poly(&get_exact(v, "x")?)?;
    let lhs = project(&f.mul(&x), &g, ctx)?;
    let rhs = f.mul(&project(&x, &g, ctx)?);
    Ok(same_coeffs(&lhs, &rhs))
}

fn check_range_invariant(v: &Value, ctx: &Ctx) -> CliResult<Outcome> {
    let g = get_group(v, "group")?;
    let p = project(&poly(&get_exact(v, "h")?)?, &g, ctx)?;
    let verdict = is_invariant(&p, &g, &ctx.table);
    Ok(Outcome::from_bool(
        verdict == Invariance::Invariant,
        || json!("invariant"),
        || json!(format!("{verdict:?}")),
    ))
}

fn check_average_matches(v: &Value, ctx: &Ctx) -> CliResult<Outcome> {
    let g = get_group(v, "group")?;
    let h = poly(&get_exact(v, "h")?)?;
    Ok(same_coeffs(
        &group_average(&h, &g, &ctx.table)?,
        &project(&h, &g, ctx)?,
    ))
}

/// Groups acting on indices `<= 4`, so the primes 2, 3, 5, 7 form a stable set.
const LOW_GROUPS: &[&[&str]] = &[
    &["(1 2)"],
    &["(1 2)(3 4)"],
    &["(1 2)", "(1 2 3)"],
    &["(1 2 3 4)"],
    &["(1 2)", "(1 2 3 4)"],
    &["(1 2)", "(3 4)"],
    &["(2 4)"],
];

fn gen_invariant_unit(rng: &mut ChaCha8Rng, ctx: &Ctx) -> CliResult<Value> {
    let gens = LOW_GROUPS[rng.gen_range(0..LOW_GROUPS.len())];
    let degree: u32 = rng.gen_range(2..=4);
    let window = 7u64.pow(degree);
    let mut support = Vec::new();
    for n in 1..=window {
        let fac = ctx.table.factor(n)?;
        if fac.omega() <= degree && fac.max_index() <= 4 && rng.gen_bool(0.3) {
            support.push(n);
        }
    }
    let h = random_exact_on(rng, &support, window, &real_shape())?;
    // The orbit of 1 is {1}, so projection keeps a_1; pick c with a_1 + c != 0.
    let a1 = h.get(1).cloned().unwrap_or_else(QComplex::zero);
    let c = loop {
        let c = random_exact_coeff(rng, &real_shape());
        if !(a1.clone() + c.clone()).is_zero() {
            break c;
        }
    };
    Ok(json!({
        "group": gens,
        "degree": degree,
        "h": exact(&h),
        "c": super::codec::complex_rational(&c),
    }))
}

fn check_inverse_invariant(v: &Value, ctx: &Ctx) -> CliResult<Outcome> {
    let g = get_group(v, "group")?;
    let degree: u32 = get(v, "degree")?;
    let h = get_exact(v, "h")?;
    let c = get_complex_rational(v, "c")?;
    let f = project(&h, &g, ctx)?.add(&Series::monomial(1, c, h.window())?);
    let inv = f.invert()?.truncate_degree(degree, &ctx.table)?;
    let verdict = is_invariant(&inv, &g, &ctx.table);
    Ok(Outcome::from_bool(
        verdict == Invariance::Invariant,
        || json!("invariant"),
        || json!({"verdict": format!("{verdict:?}"), "inverse": exact(&inv)}),
    ))
}

fn gen_restriction(rng: &mut ChaCha8Rng, _: &Ctx) -> CliResult<Value> {
    let window = rng.gen_range(1..=128);
    let f = random_exact_series(rng, window, 0.1, &complex_shape())?;
    let g = random_exact_series(rng, window, 0.1, &complex_shape())?;
    let set: BTreeSet<usize> = (1..=8).filter(|_| rng.gen_bool(0.5)).collect();
    Ok(json!({"f": exact(&f), "g": exact(&g), "set": set}))
}

fn check_restriction_homomorphism(v: &Value, ctx: &Ctx) -> CliResult<Outcome> {
    let (f, g) = (get_exact(v, "f")?, get_exact(v, "g")?);
    let set = get_index_set(v, "set")?;
    let t = &ctx.table;
    let lhs = phi_restrict(&f.mul(&g), &set, t)?;
    let rhs = phi_restrict(&f, &set, t)?.mul(&phi_restrict(&g, &set, t)?);
    Ok(same_series(&lhs, &rhs))
}

fn gen_restricted_projection(rng: &mut ChaCha8Rng, _: &Ctx) -> CliResult<Value> {
    let g = small_group(rng);
    let partition = index_orbits(&g, 12);
    let mut set = BTreeSet::new();
    for i in 1..=6 {
        if rng.gen_bool(0.5) {
            if let Some(orbit) = partition.orbit_of(i) {
                set.extend(orbit.members.iter().copied());
            }
        }
    }
    let h = random_exact_series(rng, 64, 0.15, &complex_shape())?;
    Ok(json!({"group": group(&g), "h": exact(&h), "set": set}))
}

fn check_restriction_commutes(v: &Value, ctx: &Ctx) -> CliResult<Outcome> {
    let g = get_group(v, "group")?;
    let h = poly(&get_exact(v, "h")?)?;
    let set = get_index_set(v, "set")?;
    let t = &ctx.table;
    let lhs = phi_restrict(&project(&h, &g, ctx)?, &set, t)?;
    let rhs = project(&phi_restrict(&h, &set, t)?, &g, ctx)?;
    Ok(same_coeffs(&lhs, &rhs))
}

fn gen_group_only(rng: &mut ChaCha8Rng, _: &Ctx) -> CliResult<Value> {
    let g = small_group(rng);
    Ok(json!({"group": group(&g)}))
}

pub fn suites() -> Vec<Suite> {
    vec![
        Suite {
            name: "prop3.1a",
            about: "ring laws and the action of permutations by ring automorphisms",
            default_trials: 100,
            properties: vec![
                Property {
                    name: "associativity",
                    generate: gen_triple,
                    check: check_associativity,
                },
                Property {
                    name: "distributivity",
                    generate: gen_triple,
                    check: check_distributivity,
                },
                Property {
                    name: "action-multiplicative",
                    generate: gen_action,
                    check: check_action_multiplicative,
                },
                Property {
                    name: "action-composition",
                    generate: gen_action,
                    check: check_action_composition,
                },
                Property {
                    name: "action-inverse",
                    generate: gen_action,
                    check: check_action_inverse,
                },
            ],
        },
        Suite {
            name: "thm1.7",
            about: "invariant projection: idempotent, l1-nonexpansive, module law, invariant range",
            default_trials: 100,
            properties: vec![
                Property {
                    name: "projection-idempotent",
                    generate: gen_projection,
                    check: check_idempotent,
                },
                Property {
                    name: "projection-nonexpansive",
                    generate: gen_projection,
                    check: check_nonexpansive,
                },
                Property {
                    name: "projection-fixes-one",
                    generate: gen_group_only,
                    check: check_one_fixed,
                },
                Property {
                    name: "projection-module-law",
                    generate: gen_projection,
                    check: check_module_law,
                },
                Property {
                    name: "projection-range-invariant",
                    generate: gen_projection,
                    check: check_range_invariant,
                },
            ],
        },
        Suite {
            name: "lemma6.4",
            about: "group average equals the orbit-average projection",
            default_trials: 100,
            properties: vec![Property {
                name: "average-equals-projection",
                generate: gen_projection,
                check: check_average_matches,
            }],
        },
        Suite {
            name: "lemma9.1",
            about: "inverses of invariant units are invariant",
            default_trials: 100,
            properties: vec![Property {
                name: "inverse-invariant",
                generate: gen_invariant_unit,
                check: check_inverse_invariant,
            }],
        },
        Suite {
            name: "cor6.2",
            about: "restriction to prime subsets is a homomorphism commuting with projection",
            default_trials: 100,
            properties: vec![
                Property {
                    name: "restriction-homomorphism",
                    generate: gen_restriction,
                    check: check_restriction_homomorphism,
                },
                Property {
                    name: "restriction-commutes-with-projection",
                    generate: gen_restricted_projection,
                    check: check_restriction_commutes,
                },
            ],
        },
    ]
}
