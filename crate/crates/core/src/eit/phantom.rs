use crate::fem_disk::{DiskMesh, FieldRole, NodalField};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Shape {
    Disk { cx: f64, cy: f64, r: f64 },
    /// Semi-axes `a`, `b` rotated by `angle` radians.
    Ellipse { cx: f64, cy: f64, a: f64, b: f64, angle: f64 },
}

impl Shape {
    pub fn contains(&self, x: f64, y: f64) -> bool {
        match *self {
            Shape::Disk { cx, cy, r } => (x - cx).powi(2) + (y - cy).powi(2) <= r * r,
            Shape::Ellipse { cx, cy, a, b, angle } => {
                let (s, c) = angle.sin_cos();
                let (dx, dy) = (x - cx, y - cy);
                let (u, v) = (c * dx + s * dy, -s * dx + c * dy);
                (u / a).powi(2) + (v / b).powi(2) <= 1.0
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Inclusion {
    pub shape: Shape,
    pub value: f64,
}

/// Piecewise-constant conductivity: a background with inclusions, later
/// entries taking precedence where they overlap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Phantom {
    pub background: f64,
    pub inclusions: Vec<Inclusion>,
}

impl Phantom {
    pub fn constant(value: f64) -> Self {
        Self {
            background: value,
            inclusions: Vec::new(),
        }
    }

    /// Disk of radius `r` and conductivity `value` centred at polar `(rc, θc)`.
    pub fn polar_disk(rc: f64, theta: f64, r: f64, value: f64) -> Self {
        Self {
            background: 1.0,
            inclusions: vec![Inclusion {
                shape: Shape::Disk {
                    cx: rc * theta.cos(),
                    cy: rc * theta.sin(),
                    r,
                },
                value,
            }],
        }
    }

    /// Single disk of conductivity 2 at `(−0.3, 0.3)` with radius 0.35.
    pub fn single_disk() -> Self {
        Self {
            background: 1.0,
            inclusions: vec![Inclusion {
                shape: Shape::Disk {
                    cx: -0.3,
                    cy: 0.3,
                    r: 0.35,
                },
                value: 2.0,
            }],
        }
    }

    /// Ellipse `x²/0.04 + (y − 0.5)²/0.16 ≤ 1` of conductivity 2.
    pub fn ellipse() -> Self {
        Self {
            background: 1.0,
            inclusions: vec![Inclusion {
                shape: Shape::Ellipse {
                    cx: 0.0,
                    cy: 0.5,
                    a: 0.2,
                    b: 0.4,
                    angle: 0.0,
                },
                value: 2.0,
            }],
        }
    }

    /// Chest-like cross-section: a resistive ellipse on top and two
    /// conductive ones below. The geometry is an approximation.
    pub fn chest() -> Self {
        let e = |cx, cy, a, b, angle, value| Inclusion {
            shape: Shape::Ellipse { cx, cy, a, b, angle },
            value,
        };
        Self {
            background: 1.0,
            inclusions: vec![
                e(0.0, 0.45, 0.45, 0.2, 0.0, 0.5),
                e(-0.4, -0.3, 0.15, 0.3, 0.3, 2.0),
                e(0.4, -0.3, 0.15, 0.3, -0.3, 2.0),
            ],
        }
    }

    /// Disk of radius 0.22 and conductivity 2 centred at polar `(0.5, 3π/4)`.
    pub fn off_centre_disk() -> Self {
        Self::polar_disk(0.5, 0.75 * PI, 0.22, 2.0)
    }

    /// Named presets used by the command line.
    pub fn preset(name: &str) -> Option<Self> {
        Some(match name {
            "constant" => Self::constant(1.0),
            "disk" => Self::single_disk(),
            "ellipse" => Self::ellipse(),
            "chest" => Self::chest(),
            "offcentre" | "offcenter" => Self::off_centre_disk(),
            _ => return None,
        })
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.inclusions
            .iter()
            .rev()
            .find(|inc| inc.shape.contains(x, y))
            .map_or(self.background, |inc| inc.value)
    }

    /// Nodal interpolant on a mesh.
    pub fn sample(&self, mesh: &DiskMesh) -> NodalField {
        NodalField::from_fn(mesh, FieldRole::Conductivity, |x, y| self.eval(x, y))
    }

    /// Nodes inside any inclusion.
    pub fn inside_mask(&self, mesh: &DiskMesh) -> Vec<bool> {
        mesh.nodes
            .iter()
            .map(|&[x, y]| self.inclusions.iter().any(|inc| inc.shape.contains(x, y)))
            .collect()
    }
}

/// `‖a − b‖ / ‖b‖` in L²(Ω) with the lumped mass.
pub fn relative_l2_error(mesh: &DiskMesh, a: &[f64], b: &[f64]) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for ((x, y), m) in a.iter().zip(b).zip(&mesh.lumped_areas) {
        num += m * (x - y).powi(2);
        den += m * y * y;
    }
    (num / den).sqrt()
}
