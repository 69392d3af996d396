use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use w2eit::eit::{
    bb_invert, make_currents, misfit_and_boundary_gradient, normalize_trace, relative_l2_error,
    synthesize_data, synthesize_from_phantom, InversionConfig, Misfit, Objective, Phantom,
};
use w2eit::fem_disk::{generate_disk_mesh, BoundaryFunction, FieldRole, NodalField, DEFAULT_REFINEMENT};

fn smooth_bump(mesh: &w2eit::fem_disk::DiskMesh, rng: &mut ChaCha8Rng) -> NodalField {
    let (cx, cy) = (rng.random_range(-0.4..0.4), rng.random_range(-0.4..0.4));
    let amp = rng.random_range(0.5..1.5);
    let k = rng.random_range(1..4) as f64;
    NodalField::from_fn(mesh, FieldRole::Conductivity, |x, y| {
        let r2 = x * x + y * y;
        amp * (1.0 - r2) * (1.0 + 0.5 * (k * (x - cx)).sin() * (k * (y - cy)).cos())
    })
}

#[test]
fn objective_gradient_matches_finite_differences() {
    let mesh = generate_disk_mesh(DEFAULT_REFINEMENT);
    let data = synthesize_from_phantom(&Phantom::single_disk(), &mesh, 5, 0.0, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for misfit in [Misfit::W2, Misfit::L2] {
        let cfg = InversionConfig {
            misfit,
            ..Default::default()
        };
        let obj = Objective::new(&mesh, &data, &cfg).unwrap();
        let sigma = NodalField::constant(&mesh, 1.0, FieldRole::Conductivity);
        let e = obj.evaluate(&sigma, misfit).unwrap();
        for _ in 0..3 {
            let d = smooth_bump(&mesh, &mut rng);
            let eps = 1e-4;
            let shift = |s: f64| {
                NodalField::new(
                    sigma.values.iter().zip(&d.values).map(|(a, b)| a + s * b).collect(),
                    FieldRole::Conductivity,
                )
            };
            let fd = (obj.value(&shift(eps), misfit).unwrap() - obj.value(&shift(-eps), misfit).unwrap())
                / (2.0 * eps);
            let an: f64 = e
                .raw_gradient
                .values
                .iter()
                .zip(&d.values)
                .zip(&mesh.lumped_areas)
                .map(|((g, d), l)| g * d * l)
                .sum();
            let rel = (fd - an).abs() / fd.abs();
            assert!(rel <= 1e-2, "{misfit}: fd {fd:e} analytic {an:e} rel {rel:e}");
        }
        assert!(mesh.boundary.iter().all(|&i| e.sobolev_gradient.values[i] == 0.0));
    }
}

#[test]
fn boundary_misfit_gradient_matches_finite_differences() {
    let mesh = generate_disk_mesh(DEFAULT_REFINEMENT);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let phi = BoundaryFunction::from_angle_fn(&mesh, |t| 0.4 * t.cos() + 0.1 * (3.0 * t).sin());
    let u = BoundaryFunction::from_angle_fn(&mesh, |t| 0.35 * (t - 0.3).cos() + 0.05 * (2.0 * t).sin());
    let cfg = InversionConfig::default();
    let (_, g) = misfit_and_boundary_gradient(&u, &phi, &cfg).unwrap();
    for _ in 0..10 {
        let c: Vec<f64> = (0..6).map(|_| rng.random_range(-1.0..1.0)).collect();
        let du = BoundaryFunction::from_angle_fn(&mesh, |t| {
            (1..=3).map(|k| c[2 * k - 2] * (k as f64 * t).cos() + c[2 * k - 1] * (k as f64 * t).sin()).sum()
        })
        .zero_mean();
        let eps = 1e-5;
        let at = |s: f64| {
            let v = BoundaryFunction::new(
                u.values.iter().zip(&du.values).map(|(a, b)| a + s * b).collect(),
                u.weights.clone(),
            );
            misfit_and_boundary_gradient(&v, &phi, &cfg).unwrap().0
        };
        let fd = (at(eps) - at(-eps)) / (2.0 * eps);
        let an = g.inner(&du);
        assert!((fd - an).abs() <= 1e-3 * fd.abs(), "{fd:e} {an:e}");
    }
}

#[test]
fn synthetic_data_noise_statistics() {
    let mesh = generate_disk_mesh(DEFAULT_REFINEMENT);
    let fine = generate_disk_mesh(DEFAULT_REFINEMENT + 1);
    let truth = Phantom::single_disk().sample(&fine);
    let clean = synthesize_data(&fine, &truth, &mesh, 5, 0.0, 9).unwrap();
    assert_eq!(clean.traces, clean.clean);
    let noisy = synthesize_data(&fine, &truth, &mesh, 5, 0.03, 9).unwrap();
    let again = synthesize_data(&fine, &truth, &mesh, 5, 0.03, 9).unwrap();
    assert_eq!(noisy, again);
    let max = clean.clean.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    let resid: Vec<f64> = noisy
        .traces
        .iter()
        .flatten()
        .zip(noisy.clean.iter().flatten())
        .map(|(a, b)| a - b)
        .collect();
    let n = resid.len() as f64;
    let mean = resid.iter().sum::<f64>() / n;
    let std = (resid.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    assert!((std / (0.03 * max) - 1.0).abs() < 0.15, "{std} vs {}", 0.03 * max);
}

#[test]
fn constant_truth_traces_follow_analytic_map() {
    let mesh = generate_disk_mesh(DEFAULT_REFINEMENT);
    let data = synthesize_from_phantom(&Phantom::constant(1.0), &mesh, 5, 0.0, 0).unwrap();
    let basis = make_currents(&mesh, 5);
    for (k, (trace, pat)) in data.clean.iter().zip(&basis.patterns).enumerate() {
        let n = (k / 2 + 1) as f64;
        let err: f64 = trace
            .iter()
            .zip(&pat.values)
            .map(|(t, p)| (t - p / n).powi(2))
            .sum::<f64>()
            .sqrt();
        let norm: f64 = pat.values.iter().map(|p| (p / n).powi(2)).sum::<f64>().sqrt();
        assert!(err / norm < 0.01);
    }
    // the trace of the inclusion is a valid density after normalisation
    let incl = synthesize_from_phantom(&Phantom::single_disk(), &mesh, 5, 0.0, 0).unwrap();
    for t in &incl.clean {
        let f = normalize_trace(&BoundaryFunction::new(t.clone(), mesh.boundary_weights.clone()), 2.0).unwrap();
        assert!(f.values().iter().all(|&v| v > 0.0));
        assert!((f.raw_mass() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn objective_vanishes_near_truth_and_starting_at_optimum_stops() {
    let mesh = generate_disk_mesh(DEFAULT_REFINEMENT);
    let data = synthesize_from_phantom(&Phantom::single_disk(), &mesh, 5, 0.0, 0).unwrap();
    let cfg = InversionConfig::default();
    let obj = Objective::new(&mesh, &data, &cfg).unwrap();
    let truth = Phantom::single_disk().sample(&mesh);
    for m in [Misfit::W2, Misfit::L2] {
        let j = obj.value(&truth, m).unwrap();
        assert!(j <= 1e-4, "{m}: {j:e}");
    }
    let flat = synthesize_from_phantom(&Phantom::constant(1.0), &mesh, 5, 0.0, 0).unwrap();
    let obj = Objective::new(&mesh, &flat, &cfg).unwrap();
    let run = bb_invert(&obj, &NodalField::constant(&mesh, 1.0, FieldRole::Conductivity)).unwrap();
    // only the discretization gap between data and inversion meshes remains
    assert!(run.initial_value < 1e-4);
    assert!(run.final_value() <= run.initial_value);
    let ones = vec![1.0; mesh.node_count()];
    let drift = relative_l2_error(&mesh, run.final_sigma(), &ones);
    assert!(drift < 1e-2, "{drift}");
}

#[test]
fn short_inversion_moves_towards_truth() {
    let mesh = generate_disk_mesh(DEFAULT_REFINEMENT);
    let phantom = Phantom::single_disk();
    let data = synthesize_from_phantom(&phantom, &mesh, 5, 0.0, 0).unwrap();
    let cfg = InversionConfig {
        i_max: 30,
        ..Default::default()
    };
    let obj = Objective::new(&mesh, &data, &cfg).unwrap();
    let run = bb_invert(&obj, &NodalField::constant(&mesh, 1.0, FieldRole::Conductivity)).unwrap();
    let truth = phantom.sample(&mesh);
    let e0 = relative_l2_error(&mesh, &run.sigmas[0], &truth.values);
    let e1 = relative_l2_error(&mesh, run.final_sigma(), &truth.values);
    for r in &run.records {
        assert!(r.satisfies_decrease(cfg.tau));
    }
    assert!(e1 < e0);
    for s in &run.sigmas {
        assert!(s.iter().all(|&v| (cfg.c0..=cfg.c1).contains(&v)));
        assert!(mesh.boundary.iter().all(|&i| s[i] == 1.0));
    }
}
