mod common;

use common::{random_density, random_zero_mean, sine_density};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use w2eit::circle_ot::{
    build_cdf, eval_i_derivatives, kantorovich_potential, optimal_map, solve_alpha, w2_circle,
};
use w2eit::oracle::{alpha_grid_search, brute_force_circle_w2, cdf_at, w2_line, DiscreteSamplePoints};
use w2eit::PeriodicDensity;

#[test]
fn newton_agrees_with_grid_search_on_sine_target() {
    let f = PeriodicDensity::uniform(4096);
    let g = sine_density(4096, 0.5, 1.0, 0.0);
    let sol = solve_alpha(&build_cdf(&f), &build_cdf(&g), 1e-12).unwrap();
    let (alpha, w2sq) = alpha_grid_search(&f, &g, 1_000_000).unwrap();
    assert!((sol.alpha_star - alpha).abs() <= 1e-5, "{} vs {}", sol.alpha_star, alpha);
    assert!(((sol.w2_squared - w2sq) / w2sq).abs() <= 1e-6);
    assert!(sol.newton_iterations < 10);
}

#[test]
fn pushforward_preserves_interval_mass() {
    let f = PeriodicDensity::uniform(4096);
    let g = sine_density(4096, 0.5, 1.0, 0.0);
    let sol = w2_circle(&f, &g, 1e-12).unwrap();
    let map = optimal_map(&f, &g, &sol).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let a: f64 = rng.random_range(0.0..1.0);
        let b: f64 = a + rng.random_range(0.0..1.0);
        let target = cdf_at(&g, map.eval(b)) - cdf_at(&g, map.eval(a));
        let source = cdf_at(&f, b) - cdf_at(&f, a);
        assert!((target - source).abs() < 1e-8);
    }
}

#[test]
fn potential_is_the_first_variation() {
    let n = 4096;
    let f = PeriodicDensity::uniform(n);
    let g = sine_density(n, 0.3, 1.0, 0.0);
    let sol = w2_circle(&f, &g, 1e-13).unwrap();
    let phi = kantorovich_potential(&f, &g, &sol).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let eps = 1e-5;
    for _ in 0..5 {
        let delta = random_zero_mean(&mut rng, n);
        let shifted = |s: f64| {
            PeriodicDensity::new(f.values().iter().zip(&delta).map(|(a, d)| a + s * d).collect())
                .unwrap()
        };
        let wp = w2_circle(&shifted(eps), &g, 1e-14).unwrap().w2_squared;
        let wm = w2_circle(&shifted(-eps), &g, 1e-14).unwrap().w2_squared;
        let fd = (wp - wm) / (2.0 * eps);
        let an = phi.pair(&delta);
        assert!(((fd - an) / an).abs() < 1e-3, "fd {fd} vs {an}");
    }
}

#[test]
fn frequency_decay_of_sine_densities() {
    let u = PeriodicDensity::uniform(4096);
    let w: Vec<f64> = [1.0, 2.0, 4.0, 8.0]
        .iter()
        .map(|&k| {
            let f = PeriodicDensity::from_fn(4096, |t| 1.0 + (2.0 * std::f64::consts::PI * k * t).sin() + 1e-3).unwrap();
            w2_circle(&f, &u, 1e-12).unwrap().w2_squared.sqrt()
        })
        .collect();
    assert!(w[1] < w[0]);
    let scaled: Vec<f64> = w.iter().zip([1.0, 2.0, 4.0, 8.0]).map(|(v, k)| v * k).collect();
    let (lo, hi) = scaled.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
    assert!(hi / lo < 1.5, "{scaled:?}");
}

#[test]
fn quantile_atoms_are_matched_by_a_cyclic_shift() {
    let f = PeriodicDensity::uniform(1024);
    let g = sine_density(1024, 0.5, 1.0, 0.0);
    let atoms = DiscreteSamplePoints::quantiles(&f, &g, 6).unwrap();
    let r = brute_force_circle_w2(&atoms).unwrap();
    assert!(r.cyclic_optimal);
    let w = w2_circle(&f, &g, 1e-12).unwrap().w2_squared;
    assert!((r.cost - w).abs() <= 0.5 / 6.0);
}

#[test]
fn line_cost_bounds_circle_cost() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..20 {
        let f = random_density(&mut rng, 512, 0.2, 3.0);
        let g = random_density(&mut rng, 512, 0.2, 3.0);
        let circle = w2_circle(&f, &g, 1e-12).unwrap().w2_squared;
        assert!(w2_line(&f, &g) >= circle - 1e-10);
    }
}

fn density_strategy(n: usize) -> impl Strategy<Value = PeriodicDensity> {
    any::<u64>().prop_map(move |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_density(&mut rng, n, 0.2, 3.0)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn strictly_convex_in_alpha(f in density_strategy(256), g in density_strategy(256),
                                a1 in -0.95f64..0.95, a2 in -0.95f64..0.95) {
        prop_assume!((a1 - a2).abs() > 1e-3);
        let (ft, gt) = (build_cdf(&f), build_cdf(&g));
        let i = |a| eval_i_derivatives(&ft, &gt, a).unwrap();
        let mid = i(0.5 * (a1 + a2)).value;
        prop_assert!(mid < 0.5 * (i(a1).value + i(a2).value));
        prop_assert!(i(a1).second > 0.0);
    }

    #[test]
    fn derivative_brackets_the_root(f in density_strategy(128), g in density_strategy(128)) {
        let (ft, gt) = (build_cdf(&f), build_cdf(&g));
        prop_assert!(eval_i_derivatives(&ft, &gt, -1.0 + 1e-6).unwrap().first < 0.0);
        prop_assert!(eval_i_derivatives(&ft, &gt, 1.0 - 1e-6).unwrap().first > 0.0);
    }

    #[test]
    fn metric_axioms(f in density_strategy(200), g in density_strategy(200), h in density_strategy(200)) {
        let w = |a: &PeriodicDensity, b: &PeriodicDensity| w2_circle(a, b, 1e-13).unwrap().w2_squared;
        let (fg, gf) = (w(&f, &g), w(&g, &f));
        prop_assert!((fg - gf).abs() < 1e-10);
        prop_assert!(w(&f, &f) < 1e-20);
        prop_assert!(fg > 0.0);
        prop_assert!(w(&f, &h).sqrt() <= fg.sqrt() + w(&g, &h).sqrt() + 1e-8);
    }

    #[test]
    fn rotation_is_a_feasible_plan(seed in any::<u64>(), shift in 1usize..100) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_density(&mut rng, 200, 0.2, 3.0);
        let mut rotated = f.values().to_vec();
        rotated.rotate_right(shift);
        let g = PeriodicDensity::new(rotated).unwrap();
        let delta = shift as f64 / 200.0;
        prop_assert!(w2_circle(&f, &g, 1e-13).unwrap().w2_squared <= delta * delta + 1e-12);
    }

    #[test]
    fn inverse_cdf_round_trip(f in density_strategy(97), y in 0.0f64..1.0) {
        let t = build_cdf(&f);
        prop_assert!((t.eval(t.inverse(y)) - y).abs() < 1e-12);
    }
}
