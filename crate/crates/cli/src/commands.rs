use crate::args::*;
use crate::error::CliError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::time::Instant;
use w2eit::circle_ot::{kantorovich_potential, w2_circle, PeriodicDensity};
use w2eit::eit::{
    bb_invert, landscape_scan, relative_l2_error, synthesize_data, synthesize_from_phantom, InversionConfig,
    InversionRun, LandscapeGrid, MeasurementSet, Misfit, Objective, Phantom, StopReason, RNG_NAME,
};
use w2eit::fem_disk::{generate_disk_mesh, DiskMesh, FieldRole, NodalField};
use w2eit::io;

pub fn run(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::W2(a) => cmd_w2(a),
        Command::Gradcheck(a) => cmd_gradcheck(a),
        Command::Mesh(a) => cmd_mesh(a),
        Command::Synth(a) => cmd_synth(a),
        Command::Invert(a) => cmd_invert(a),
        Command::Landscape(a) => cmd_landscape(a),
        Command::Bench(a) => cmd_bench(a),
    }
}

fn require_file(p: &Path) -> Result<(), CliError> {
    if p.is_file() {
        Ok(())
    } else {
        Err(CliError::Usage(format!("{}: no such file", p.display())))
    }
}

fn require_parent(p: &Path) -> Result<(), CliError> {
    match p.parent() {
        Some(d) if !d.as_os_str().is_empty() && !d.is_dir() => {
            Err(CliError::Usage(format!("{}: directory does not exist", d.display())))
        }
        _ => Ok(()),
    }
}

/// Output directory must be new or empty so results are never mixed.
fn prepare_out_dir(p: &Path) -> Result<(), CliError> {
    require_parent(p)?;
    if p.exists() {
        let empty = p
            .read_dir()
            .map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?
            .next()
            .is_none();
        if !empty {
            return Err(CliError::Usage(format!("{}: output directory is not empty", p.display())));
        }
    }
    std::fs::create_dir_all(p).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))
}

/// Runs `body`, leaving a failure marker in `dir` if it fails.
fn guarded(dir: &Path, body: impl FnOnce() -> Result<(), CliError>) -> Result<(), CliError> {
    body().inspect_err(|e| io::write_failure_marker(dir, &e.to_string()))
}

fn cmd_w2(a: W2Args) -> Result<(), CliError> {
    require_file(&a.f)?;
    require_file(&a.g)?;
    if let Some(p) = &a.json_out {
        require_parent(p)?;
    }
    if !(a.eps > 0.0) {
        return Err(CliError::Usage("--eps must be positive".into()));
    }
    let f = io::read_density(&a.f)?;
    let g = io::read_density(&a.g)?;
    let sol = w2_circle(&f, &g, a.eps)?;
    println!("w2_squared {}", io::fmt_f64(sol.w2_squared));
    println!("alpha_star {}", io::fmt_f64(sol.alpha_star));
    if let Some(p) = &a.json_out {
        io::write_alpha_solution(p, &sol)?;
    }
    Ok(())
}

/// Smooth density `1 + Σ c_k cos(2πk t + p_k)` scaled into `[lo, hi]`.
fn random_density(rng: &mut ChaCha20Rng, n: usize, lo: f64, hi: f64) -> PeriodicDensity {
    let terms: Vec<(f64, f64, f64)> = (1..=4)
        .map(|k| (k as f64, rng.random_range(-1.0..1.0), rng.random_range(0.0..2.0 * PI)))
        .collect();
    let raw: Vec<f64> = (0..n)
        .map(|i| {
            let t = i as f64 / n as f64;
            terms.iter().map(|(k, c, p)| c * (2.0 * PI * k * t + p).cos()).sum()
        })
        .collect();
    let (mn, mx) = raw.iter().fold((f64::MAX, f64::MIN), |(a, b), &v| (a.min(v), b.max(v)));
    let span = (mx - mn).max(1e-12);
    PeriodicDensity::new(raw.iter().map(|v| lo + (hi - lo) * (v - mn) / span).collect())
        .expect("values bounded below by lo")
}

#[derive(Serialize)]
struct GradRow {
    sample: usize,
    finite_difference: f64,
    analytic: f64,
    relative_error: f64,
}

fn cmd_gradcheck(a: GradcheckArgs) -> Result<(), CliError> {
    if let Some(p) = &a.csv_out {
        require_parent(p)?;
    }
    let mut rng = ChaCha20Rng::seed_from_u64(a.seed);
    let mut rows = Vec::new();
    match a.target {
        GradTarget::Potential => {
            let f = PeriodicDensity::uniform(a.n);
            let g = PeriodicDensity::from_fn(a.n, |t| 1.0 + 0.3 * (2.0 * PI * t).sin())?;
            let sol = w2_circle(&f, &g, 1e-13)?;
            let phi = kantorovich_potential(&f, &g, &sol)?;
            let eps = 1e-5;
            for s in 0..a.samples {
                let d = random_density(&mut rng, a.n, 0.5, 1.5);
                let delta: Vec<f64> = d.values().iter().map(|v| v - 1.0).collect();
                let at = |e: f64| -> Result<f64, CliError> {
                    let p = PeriodicDensity::new(f.values().iter().zip(&delta).map(|(x, d)| x + e * d).collect())?;
                    Ok(w2_circle(&p, &g, 1e-13)?.w2_squared)
                };
                let fd = (at(eps)? - at(-eps)?) / (2.0 * eps);
                let an = phi.pair(&delta);
                rows.push(GradRow {
                    sample: s,
                    finite_difference: fd,
                    analytic: an,
                    relative_error: (fd - an).abs() / fd.abs(),
                });
            }
        }
        GradTarget::Eit => {
            let misfit: Misfit = a.misfit.parse().map_err(CliError::Usage)?;
            let mesh = generate_disk_mesh(w2eit::fem_disk::DEFAULT_REFINEMENT);
            let data = synthesize_from_phantom(&Phantom::single_disk(), &mesh, 5, 0.0, a.seed)?;
            let cfg = InversionConfig {
                misfit,
                ..Default::default()
            };
            let obj = Objective::new(&mesh, &data, &cfg)?;
            let sigma = NodalField::constant(&mesh, 1.0, FieldRole::Conductivity);
            let e = obj.evaluate(&sigma, misfit)?;
            let eps = 1e-4;
            for s in 0..a.samples {
                let (cx, cy, k) = (rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5), rng.random_range(1.0..3.0));
                let d: Vec<f64> = mesh
                    .nodes
                    .iter()
                    .map(|&[x, y]| (1.0 - x * x - y * y) * (1.0 + 0.5 * (k * (x - cx)).sin() * (k * (y - cy)).cos()))
                    .collect();
                let at = |e: f64| {
                    let s = NodalField::new(d.iter().map(|v| 1.0 + e * v).collect(), FieldRole::Conductivity);
                    obj.value(&s, misfit)
                };
                let fd = (at(eps)? - at(-eps)?) / (2.0 * eps);
                let an: f64 = e
                    .raw_gradient
                    .values
                    .iter()
                    .zip(&d)
                    .zip(&mesh.lumped_areas)
                    .map(|((g, d), l)| g * d * l)
                    .sum();
                rows.push(GradRow {
                    sample: s,
                    finite_difference: fd,
                    analytic: an,
                    relative_error: (fd - an).abs() / fd.abs(),
                });
            }
        }
    }
    let worst = rows.iter().map(|r| r.relative_error).fold(0.0, f64::max);
    println!("samples {}", rows.len());
    println!("max_relative_error {}", io::fmt_f64(worst));
    if let Some(p) = &a.csv_out {
        io::write_table(
            p,
            &["sample", "finite_difference", "analytic", "relative_error"],
            rows.iter()
                .map(|r| vec![r.sample as f64, r.finite_difference, r.analytic, r.relative_error]),
        )?;
    }
    Ok(())
}

fn check_refinement(r: u32) -> Result<(), CliError> {
    if (1..=6).contains(&r) {
        Ok(())
    } else {
        Err(CliError::Usage("--refinement must lie in 1..=6".into()))
    }
}

fn cmd_mesh(a: MeshArgs) -> Result<(), CliError> {
    check_refinement(a.refinement)?;
    require_parent(&a.out)?;
    let mesh = generate_disk_mesh(a.refinement);
    io::write_mesh(&a.out, &mesh)?;
    println!("mesh {}", mesh.id());
    println!("nodes {}", mesh.node_count());
    println!("triangles {}", mesh.triangle_count());
    println!("boundary_nodes {}", mesh.boundary_len());
    Ok(())
}

fn phantom_by_name(name: &str) -> Result<Phantom, CliError> {
    Phantom::preset(name).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown phantom '{name}' (expected constant, disk, ellipse, chest or offcentre)"
        ))
    })
}

fn cmd_synth(a: SynthArgs) -> Result<(), CliError> {
    check_refinement(a.refinement)?;
    let phantom = phantom_by_name(&a.phantom)?;
    if a.n_cur == 0 || a.eps < 0.0 {
        return Err(CliError::Usage("--n-cur must be positive and --eps nonnegative".into()));
    }
    prepare_out_dir(&a.out)?;
    guarded(&a.out, || {
        let mesh = generate_disk_mesh(a.refinement);
        let data = synthesize_from_phantom(&phantom, &mesh, a.n_cur, a.eps, a.seed)?;
        io::write_measurements(&a.out, &mesh, &data)?;
        io::write_column(&a.out.join("truth.csv"), Some("sigma"), &phantom.sample(&mesh).values)?;
        println!("patterns {}", data.len());
        println!("noise_std {}", io::fmt_f64(data.noise_std));
        Ok(())
    })
}

#[derive(Serialize)]
struct RunSummary<'a> {
    misfit: Misfit,
    iterations: usize,
    stop: StopReason,
    initial_value: f64,
    final_value: f64,
    initial_relative_error: Option<f64>,
    final_relative_error: Option<f64>,
    mesh_id: String,
    data_mesh_id: &'a str,
    eps: f64,
    seed: u64,
    rng: &'a str,
    config: &'a InversionConfig,
}

enum Truth {
    Preset(Phantom),
    Field(PathBuf),
}

fn cmd_invert(a: InvertArgs) -> Result<(), CliError> {
    let mut cfg = match &a.config {
        Some(p) => {
            require_file(p)?;
            InversionConfig::parse(&io::read_text(p)?)?
        }
        None => InversionConfig::default(),
    };
    if let Some(m) = &a.misfit {
        cfg.misfit = m.parse().map_err(CliError::Usage)?;
    }
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    cfg.validate()?;
    check_refinement(cfg.refinement)?;
    let truth = match &a.truth {
        Some(t) => Some(match t.strip_prefix("preset:") {
            Some(name) => Truth::Preset(phantom_by_name(name)?),
            None => {
                let p = PathBuf::from(t);
                require_file(&p)?;
                Truth::Field(p)
            }
        }),
        None => None,
    };
    if let Some(d) = &a.data {
        require_file(&d.join("measurements.json"))?;
        require_file(&d.join("measurements.csv"))?;
    }
    prepare_out_dir(&a.out)?;

    guarded(&a.out, || {
        let mesh = generate_disk_mesh(cfg.refinement);
        let (data, truth_on_mesh): (MeasurementSet, Option<Vec<f64>>) = match truth {
            Some(Truth::Preset(ph)) => (
                synthesize_from_phantom(&ph, &mesh, cfg.n_cur, cfg.eps, cfg.seed)?,
                Some(ph.sample(&mesh).values),
            ),
            Some(Truth::Field(p)) => {
                let fine = generate_disk_mesh(cfg.refinement + 1);
                let values = io::read_column(&p)?;
                if values.len() != fine.node_count() {
                    return Err(CliError::Usage(format!(
                        "{}: expected {} nodal values on mesh {}, found {}",
                        p.display(),
                        fine.node_count(),
                        fine.id(),
                        values.len()
                    )));
                }
                let coarse = mesh.restrict_from_finer(&fine, &values);
                let sigma = NodalField::new(values, FieldRole::Conductivity);
                (synthesize_data(&fine, &sigma, &mesh, cfg.n_cur, cfg.eps, cfg.seed)?, coarse)
            }
            None => {
                let d = a.data.as_ref().expect("clap requires truth or data");
                let data = io::read_measurements(d)?;
                if data.mesh_id != mesh.id() {
                    return Err(CliError::Usage(format!(
                        "data were synthesized for mesh {}, config selects {}",
                        data.mesh_id,
                        mesh.id()
                    )));
                }
                cfg.n_cur = data.n_cur;
                let t = d.join("truth.csv");
                let truth = if t.is_file() { Some(io::read_column(&t)?) } else { None };
                (data, truth)
            }
        };
        let obj = Objective::new(&mesh, &data, &cfg)?;
        let sigma0 = NodalField::constant(&mesh, cfg.sigma0, FieldRole::Conductivity);
        let run: InversionRun = bb_invert(&obj, &sigma0)?;
        let err = |s: &[f64]| truth_on_mesh.as_ref().map(|t| relative_l2_error(&mesh, s, t));
        let summary = RunSummary {
            misfit: cfg.misfit,
            iterations: run.iterations(),
            stop: run.stop,
            initial_value: run.initial_value,
            final_value: run.final_value(),
            initial_relative_error: err(&run.sigmas[0]),
            final_relative_error: err(run.final_sigma()),
            mesh_id: mesh.id(),
            data_mesh_id: &data.data_mesh_id,
            eps: data.eps,
            seed: data.seed,
            rng: RNG_NAME,
            config: &cfg,
        };
        io::write_run(&a.out, &run, &summary)?;
        println!("iterations {}", run.iterations());
        println!("stop {:?}", run.stop);
        println!("final_value {}", io::fmt_f64(run.final_value()));
        if let (Some(e0), Some(e1)) = (summary.initial_relative_error, summary.final_relative_error) {
            println!("initial_relative_error {}", io::fmt_f64(e0));
            println!("final_relative_error {}", io::fmt_f64(e1));
        }
        Ok(())
    })
}

#[derive(Serialize)]
struct LandscapeSummary {
    true_r: f64,
    true_theta: f64,
    eps: f64,
    seed: u64,
    rng: &'static str,
    argmin_w2: (f64, f64),
    argmin_l2: (f64, f64),
}

fn cmd_landscape(a: LandscapeArgs) -> Result<(), CliError> {
    let mut cfg = match &a.config {
        Some(p) => {
            require_file(p)?;
            InversionConfig::parse(&io::read_text(p)?)?
        }
        None => InversionConfig::default(),
    };
    cfg.n_cur = 1;
    cfg.beta = 0.0;
    if a.eps < 0.0 || a.slice_angles == 0 {
        return Err(CliError::Usage("--eps must be nonnegative and --slice-angles positive".into()));
    }
    check_refinement(cfg.refinement)?;
    prepare_out_dir(&a.out)?;
    guarded(&a.out, || {
        let mesh: DiskMesh = generate_disk_mesh(cfg.refinement);
        let data = synthesize_from_phantom(&Phantom::off_centre_disk(), &mesh, 1, a.eps, a.seed)?;
        let obj = Objective::new(&mesh, &data, &cfg)?;
        let grid = LandscapeGrid::standard();
        let pts = landscape_scan(&obj, &grid)?;
        let rows = |pts: &[w2eit::eit::LandscapePoint]| -> Vec<Vec<f64>> {
            pts.iter()
                .map(|p| vec![p.r, p.theta, p.r * p.theta.cos(), p.r * p.theta.sin(), p.w2, p.l2])
                .collect()
        };
        let header = ["r", "theta", "x", "y", "w2", "l2"];
        io::write_table(&a.out.join("landscape.csv"), &header, rows(&pts))?;
        let slice = landscape_scan(&obj, &LandscapeGrid::ring(a.slice_radius, a.slice_angles))?;
        io::write_table(&a.out.join("slice.csv"), &header, rows(&slice))?;
        let argmin = |m: Misfit| {
            let p = pts
                .iter()
                .min_by(|x, y| x.value(m).total_cmp(&y.value(m)))
                .expect("grid is not empty");
            (p.r, p.theta)
        };
        let summary = LandscapeSummary {
            true_r: 0.5,
            true_theta: 0.75 * PI,
            eps: a.eps,
            seed: a.seed,
            rng: RNG_NAME,
            argmin_w2: argmin(Misfit::W2),
            argmin_l2: argmin(Misfit::L2),
        };
        io::write_json(&a.out.join("summary.json"), &summary)?;
        println!("argmin_w2 r={} theta={}", summary.argmin_w2.0, summary.argmin_w2.1);
        println!("argmin_l2 r={} theta={}", summary.argmin_l2.0, summary.argmin_l2.1);
        Ok(())
    })
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn cmd_bench(a: BenchArgs) -> Result<(), CliError> {
    if a.sizes.is_empty() {
        return Err(CliError::Usage("--sizes must list at least one grid size".into()));
    }
    if a.sizes.windows(2).any(|w| w[1] <= w[0]) || a.sizes[0] < 2 {
        return Err(CliError::Usage("--sizes must be ascending and at least 2".into()));
    }
    if a.repeats == 0 {
        return Err(CliError::Usage("--repeats must be positive".into()));
    }
    if let Some(p) = &a.csv_out {
        require_parent(p)?;
    }
    let mut rng = ChaCha20Rng::seed_from_u64(a.seed);
    let mut rows = Vec::new();
    for &n in &a.sizes {
        let times: Vec<f64> = (0..a.repeats)
            .map(|_| {
                let f = random_density(&mut rng, n, 0.2, 3.0);
                let g = random_density(&mut rng, n, 0.2, 3.0);
                let t = Instant::now();
                w2_circle(&f, &g, 1e-12).map(|_| t.elapsed().as_secs_f64())
            })
            .collect::<Result<_, _>>()?;
        let m = median(times);
        println!("{n} {}", io::fmt_f64(m));
        rows.push(vec![n as f64, m]);
    }
    for w in rows.windows(2) {
        println!("ratio {}->{} {:.3}", w[0][0], w[1][0], w[1][1] / w[0][1]);
    }
    if let Some(p) = &a.csv_out {
        let mut s = String::from("n,median_seconds\n");
        for r in &rows {
            s.push_str(&format!("{},{}\n", r[0] as usize, io::fmt_f64(r[1])));
        }
        io::write_text(p, &s)?;
    }
    Ok(())
}
