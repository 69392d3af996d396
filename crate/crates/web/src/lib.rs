//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each exported function wraps a plain Rust function returning
//! `Result<_, String>`, so the logic is testable on native targets where
//! JavaScript values are unavailable.

use std::f64::consts::PI;
use w2eit::circle_ot::{kantorovich_potential, optimal_map, w2_circle, PeriodicDensity};
use w2eit::eit::{landscape_scan, synthesize_from_phantom, InversionConfig, LandscapeGrid, Objective, Phantom};
use w2eit::fem_disk::{boundary_trace, generate_disk_mesh, solve_forward, BoundaryFunction, FieldRole, NodalField};
use wasm_bindgen::prelude::*;

/// Largest mesh refinement the page may request; finer meshes are slow in a browser.
const MAX_REFINEMENT: u32 = 4;

#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct TransportResult {
    w2_squared: f64,
    alpha_star: f64,
    displacement: Vec<f64>,
    potential: Vec<f64>,
}

#[wasm_bindgen]
impl TransportResult {
    #[wasm_bindgen(getter)]
    pub fn w2_squared(&self) -> f64 {
        self.w2_squared
    }

    #[wasm_bindgen(getter)]
    pub fn alpha_star(&self) -> f64 {
        self.alpha_star
    }

    /// `T(t_i) − t_i` at the sample nodes.
    #[wasm_bindgen(getter)]
    pub fn displacement(&self) -> Vec<f64> {
        self.displacement.clone()
    }

    /// Zero-mean Kantorovich potential, one value per cell.
    #[wasm_bindgen(getter)]
    pub fn potential(&self) -> Vec<f64> {
        self.potential.clone()
    }
}

pub fn transport_native(f: Vec<f64>, g: Vec<f64>) -> Result<TransportResult, String> {
    let f = PeriodicDensity::new(f).map_err(|e| format!("f: {e}"))?;
    let g = PeriodicDensity::new(g).map_err(|e| format!("g: {e}"))?;
    let sol = w2_circle(&f, &g, 1e-12).map_err(|e| e.to_string())?;
    let map = optimal_map(&f, &g, &sol).map_err(|e| e.to_string())?;
    let pot = kantorovich_potential(&f, &g, &sol).map_err(|e| e.to_string())?;
    Ok(TransportResult {
        w2_squared: sol.w2_squared,
        alpha_star: sol.alpha_star,
        displacement: map.displacements(),
        potential: pot.values,
    })
}

/// Optimal transport between two sampled periodic densities on `[0, 1)`.
#[wasm_bindgen]
pub fn transport(f: Vec<f64>, g: Vec<f64>) -> Result<TransportResult, JsError> {
    transport_native(f, g).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct ForwardResult {
    angles: Vec<f64>,
    trace: Vec<f64>,
    background: Vec<f64>,
}

#[wasm_bindgen]
impl ForwardResult {
    #[wasm_bindgen(getter)]
    pub fn angles(&self) -> Vec<f64> {
        self.angles.clone()
    }

    /// Boundary voltage with the inclusion present.
    #[wasm_bindgen(getter)]
    pub fn trace(&self) -> Vec<f64> {
        self.trace.clone()
    }

    /// Boundary voltage for constant conductivity 1.
    #[wasm_bindgen(getter)]
    pub fn background(&self) -> Vec<f64> {
        self.background.clone()
    }
}

fn check_refinement(r: u32) -> Result<(), String> {
    if (1..=MAX_REFINEMENT).contains(&r) {
        Ok(())
    } else {
        Err(format!("refinement must lie in 1..={MAX_REFINEMENT}"))
    }
}

pub fn forward_native(
    rc: f64,
    theta: f64,
    radius: f64,
    value: f64,
    frequency: u32,
    refinement: u32,
) -> Result<ForwardResult, String> {
    check_refinement(refinement)?;
    if frequency == 0 {
        return Err("frequency must be positive".into());
    }
    let mesh = generate_disk_mesh(refinement);
    let k = frequency as f64;
    let j = BoundaryFunction::from_angle_fn(&mesh, |t| (k * t).cos()).zero_mean();
    let run = |sigma: &NodalField| -> Result<Vec<f64>, String> {
        let u = solve_forward(&mesh, sigma, &j).map_err(|e| e.to_string())?;
        Ok(boundary_trace(&mesh, &u).values)
    };
    if !(value > 0.0) {
        return Err("conductivity must be positive".into());
    }
    let sigma = Phantom::polar_disk(rc, theta, radius, value).sample(&mesh);
    Ok(ForwardResult {
        angles: mesh.boundary_angles.clone(),
        trace: run(&sigma)?,
        background: run(&NodalField::constant(&mesh, 1.0, FieldRole::Conductivity))?,
    })
}

/// Boundary voltage for the current `cos(kθ)` with a disk inclusion of
/// conductivity `value` centred at polar position `(rc, theta)`.
#[wasm_bindgen]
pub fn forward(
    rc: f64,
    theta: f64,
    radius: f64,
    value: f64,
    frequency: u32,
    refinement: u32,
) -> Result<ForwardResult, JsError> {
    forward_native(rc, theta, radius, value, frequency, refinement).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct SliceResult {
    angles: Vec<f64>,
    w2: Vec<f64>,
    l2: Vec<f64>,
}

#[wasm_bindgen]
impl SliceResult {
    #[wasm_bindgen(getter)]
    pub fn angles(&self) -> Vec<f64> {
        self.angles.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn w2(&self) -> Vec<f64> {
        self.w2.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn l2(&self) -> Vec<f64> {
        self.l2.clone()
    }
}

pub fn landscape_slice_native(radius: f64, n_angles: u32, eps: f64, seed: u32) -> Result<SliceResult, String> {
    if n_angles == 0 || n_angles > 256 {
        return Err("angle count must lie in 1..=256".into());
    }
    if !(eps >= 0.0) {
        return Err("noise level must be nonnegative".into());
    }
    if !(radius > 0.0 && radius < 0.78) {
        return Err("scan radius must lie in (0, 0.78)".into());
    }
    let cfg = InversionConfig {
        n_cur: 1,
        beta: 0.0,
        refinement: 2,
        ..Default::default()
    };
    let mesh = generate_disk_mesh(cfg.refinement);
    let data = synthesize_from_phantom(&Phantom::off_centre_disk(), &mesh, 1, eps, seed as u64)
        .map_err(|e| e.to_string())?;
    let obj = Objective::new(&mesh, &data, &cfg).map_err(|e| e.to_string())?;
    let pts = landscape_scan(&obj, &LandscapeGrid::ring(radius, n_angles as usize)).map_err(|e| e.to_string())?;
    Ok(SliceResult {
        angles: pts.iter().map(|p| p.theta).collect(),
        w2: pts.iter().map(|p| p.w2).collect(),
        l2: pts.iter().map(|p| p.l2).collect(),
    })
}

/// Both misfits for a disk inclusion moved around a circle of the given
/// radius. The data come from a disk at radius 0.5, angle 3π/4.
#[wasm_bindgen]
pub fn landscape_slice(radius: f64, n_angles: u32, eps: f64, seed: u32) -> Result<SliceResult, JsError> {
    landscape_slice_native(radius, n_angles, eps, seed).map_err(|e| JsError::new(&e))
}

/// Angle of the inclusion that generated the landscape data.
#[wasm_bindgen]
pub fn true_angle() -> f64 {
    0.75 * PI
}
