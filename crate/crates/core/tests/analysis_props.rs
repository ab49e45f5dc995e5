mod common;

use common::float_series;
use dirichlet::analysis::{
    convexity_check, line_sup, perron_error_bound, perron_recover_series, seminorm_pr,
    seminorm_profile, sigma_u_plus_estimate, SupMethod, DEFAULT_CONVEXITY_TOL,
};
use dirichlet::arith::{ExactSeries, FloatSeries};
use dirichlet::bohr::{bohr_lift, torus_sup, TorusSearch};
use dirichlet::group::{act, project_invariant, PermutationGroup, UnresolvedPolicy};
use dirichlet::primes::PrimeTable;
use num_complex::Complex64;
use proptest::prelude::*;

fn table() -> PrimeTable {
    PrimeTable::sieve(4096).unwrap()
}

fn search() -> TorusSearch {
    TorusSearch {
        restarts: 8,
        budget: 1 << 16,
        ..TorusSearch::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn seminorm_is_between_coefficients_and_l1(f in float_series(40, 6), r in 0.05f64..=1.0) {
        let t = table();
        let p = seminorm_pr(&f, r, &t, &search()).unwrap();
        let l1_r: f64 = f.iter().map(|(n, c)| c.norm() * r.powi(t.omega(n).unwrap() as i32)).sum();
        prop_assert!(p <= l1_r * (1.0 + 1e-12));
        let biggest = f.iter().map(|(n, c)| c.norm() * r.powi(t.omega(n).unwrap() as i32)).fold(0.0, f64::max);
        prop_assert!(p + 1e-9 >= biggest);
    }

    #[test]
    fn line_never_beats_the_torus(f in float_series(30, 6), sigma in 0.0f64..1.0) {
        let t = table();
        let line = line_sup(&f, sigma, 200.0, 4000, 8).unwrap();
        // On the line Re s = σ the terms carry the damping n^{-σ}.
        let scaled: FloatSeries = FloatSeries::from_coeffs(
            f.window(),
            f.iter().map(|(n, c)| (n, c * (n as f64).powf(-sigma))),
        ).unwrap();
        let q = bohr_lift(&scaled, &t).unwrap();
        let torus = torus_sup(&q, 1.0, &search()).unwrap();
        prop_assert!(line.sup_estimate <= torus.value + 1e-9);
        prop_assert!(line.sup_estimate >= line.grid_sup);
    }

    #[test]
    fn profiles_are_monotone_and_log_convex(f in float_series(24, 5)) {
        let t = table();
        let grid: Vec<f64> = (1..=9).map(|k| k as f64 / 10.0).collect();
        let profile = seminorm_profile(&f, &grid, &t, &search()).unwrap();
        let report = convexity_check(&profile, DEFAULT_CONVEXITY_TOL).unwrap();
        prop_assert!(report.pass, "{:?}", report);
    }

    #[test]
    fn perron_error_is_within_its_bound(f in float_series(16, 5), n in 1u64..=16) {
        let report = perron_recover_series(&f, n, 2.0, 300.0, 30_000).unwrap();
        let want = f.get(n).copied().unwrap_or_default();
        prop_assert!((report.value - want).norm() <= perron_error_bound(&f, n, 2.0, 300.0, 30_000));
    }
}

#[test]
fn perron_error_decays_like_one_over_r() {
    // Off-support, the error is a sum of sinc tails, so R * error stays below
    // sum |a_m| (n/m)^κ / |log(n/m)|.
    let f = FloatSeries::from_coeffs(
        12,
        [
            (2, Complex64::new(1.0, 0.0)),
            (3, Complex64::new(-0.5, 0.25)),
        ],
    )
    .unwrap();
    let mut scaled = Vec::new();
    for r_half in [250.0, 500.0, 1000.0, 2000.0] {
        let err = perron_recover_series(&f, 5, 2.0, r_half, (r_half * 100.0) as usize)
            .unwrap()
            .value
            .norm();
        assert!(err <= perron_error_bound(&f, 5, 2.0, r_half, (r_half * 100.0) as usize));
        scaled.push(err * r_half);
    }
    let constant: f64 = f
        .iter()
        .map(|(m, c)| c.norm() * (5.0 / m as f64).powi(2) / (5.0 / m as f64).ln().abs())
        .sum();
    assert!(
        scaled.iter().all(|&e| e <= constant * (1.0 + 1e-6)),
        "R * error = {scaled:?}, constant {constant}"
    );
}

#[test]
fn sigma_u_surrogate_examples() {
    let t = table();
    let method = SupMethod::Torus(TorusSearch::default());
    let zeta = ExactSeries::zeta(30).unwrap();
    let est = sigma_u_plus_estimate(&zeta, &t, &method).unwrap();
    assert!((est.value - 1.0).abs() < 1e-12, "{est:?}");
    let single = ExactSeries::from_ints(10, [(2, 1)]).unwrap();
    assert_eq!(
        sigma_u_plus_estimate(&single, &t, &method).unwrap().value,
        0.0
    );
    let line = SupMethod::Line {
        t_max: 50.0,
        samples: 2001,
        refine: 4,
    };
    assert!((sigma_u_plus_estimate(&zeta, &t, &line).unwrap().value - 1.0).abs() < 1e-12);
}

#[test]
fn seminorm_is_invariant_under_the_action() {
    let t = table();
    let g = PermutationGroup::parse(&["(1 2 3)", "(4 5)"]).unwrap();
    let h = FloatSeries::from_coeffs(
        40,
        [
            (1, Complex64::new(0.5, 0.0)),
            (2, Complex64::new(1.0, -0.5)),
            (7, Complex64::new(-0.3, 0.2)),
            (12, Complex64::new(0.2, 0.9)),
        ],
    )
    .unwrap()
    .extend_window(1 << 40)
    .unwrap();
    let f = project_invariant(&h, &g, UnresolvedPolicy::Error, &t).unwrap();
    for sigma in g.generators() {
        let moved = act(sigma, &h, &t).unwrap();
        for r in [0.3, 0.7, 1.0] {
            let a = seminorm_pr(&h, r, &t, &TorusSearch::default()).unwrap();
            let b = seminorm_pr(&moved, r, &t, &TorusSearch::default()).unwrap();
            assert!((a - b).abs() <= 1e-9 * a.max(1.0), "{a} vs {b}");
        }
        let fm = act(sigma, &f, &t).unwrap();
        assert!(fm.agrees_with(&f));
    }
}
