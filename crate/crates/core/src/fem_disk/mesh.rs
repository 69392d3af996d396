use std::f64::consts::PI;

/// Rings of the coarsest mesh (`refinement = 1`); each refinement doubles it.
pub const BASE_RINGS: usize = 5;

/// Refinement of the default inversion mesh (20 rings, 2400 triangles).
pub const DEFAULT_REFINEMENT: u32 = 3;

/// Polar triangulation of the unit disk.
///
/// Ring `k = 1..=R` holds `6k` nodes at radius `k / R` and angles
/// `2πj / 6k`; node 0 is the centre. Consecutive rings are zipped together by
/// angle, which gives `6R²` triangles and `1 + 3R(R + 1)` nodes. Nodes are
/// numbered ring by ring, so the boundary is the last `6R` nodes in
/// increasing angle starting at θ = 0.
#[derive(Debug, Clone)]
pub struct DiskMesh {
    pub refinement: u32,
    pub rings: usize,
    pub nodes: Vec<[f64; 2]>,
    pub triangles: Vec<[usize; 3]>,
    /// Boundary node indices ordered by angle.
    pub boundary: Vec<usize>,
    pub boundary_angles: Vec<f64>,
    /// Lumped arclength weight per boundary node (half of each adjacent edge).
    pub boundary_weights: Vec<f64>,
    /// Length of the edge from boundary node `i` to node `i + 1`.
    pub boundary_edge_lengths: Vec<f64>,
    pub areas: Vec<f64>,
    /// Gradients of the three P1 basis functions on each triangle.
    pub basis_gradients: Vec<[[f64; 2]; 3]>,
    /// One third of the area of every incident triangle.
    pub lumped_areas: Vec<f64>,
}

/// Builds the polar mesh with `5 · 2^(refinement − 1)` rings. Each refinement
/// step quadruples the triangle count.
pub fn generate_disk_mesh(refinement: u32) -> DiskMesh {
    assert!(refinement >= 1, "refinement must be at least 1");
    DiskMesh::with_rings(BASE_RINGS << (refinement - 1), refinement)
}

fn ring_start(k: usize) -> usize {
    if k == 0 {
        0
    } else {
        1 + 3 * k * (k - 1)
    }
}

fn ring_len(k: usize) -> usize {
    if k == 0 {
        1
    } else {
        6 * k
    }
}

impl DiskMesh {
    pub fn with_rings(rings: usize, refinement: u32) -> Self {
        assert!(rings >= 1);
        let mut nodes = vec![[0.0, 0.0]];
        for k in 1..=rings {
            let r = k as f64 / rings as f64;
            let m = ring_len(k);
            for j in 0..m {
                let th = 2.0 * PI * j as f64 / m as f64;
                nodes.push([r * th.cos(), r * th.sin()]);
            }
        }

        let mut triangles = Vec::with_capacity(6 * rings * rings);
        for k in 1..=rings {
            let (inner0, inner_n) = (ring_start(k - 1), ring_len(k - 1));
            let (outer0, outer_n) = (ring_start(k), ring_len(k));
            let (mut i, mut o) = (0usize, 0usize);
            // the centre is a single node: fan around it
            let inner_steps = if k == 1 { 0 } else { inner_n };
            while i < inner_steps || o < outer_n {
                let a_inner = (i + 1) as f64 / inner_n as f64;
                let a_outer = (o + 1) as f64 / outer_n as f64;
                let advance_outer = i >= inner_steps || (o < outer_n && a_outer <= a_inner + 1e-12);
                let ci = inner0 + i % inner_n;
                if advance_outer {
                    let (p, q) = (outer0 + o % outer_n, outer0 + (o + 1) % outer_n);
                    triangles.push([ci, p, q]);
                    o += 1;
                } else {
                    let ni = inner0 + (i + 1) % inner_n;
                    triangles.push([ci, outer0 + o % outer_n, ni]);
                    i += 1;
                }
            }
        }
        let mut mesh = Self {
            refinement,
            rings,
            nodes,
            triangles,
            boundary: Vec::new(),
            boundary_angles: Vec::new(),
            boundary_weights: Vec::new(),
            boundary_edge_lengths: Vec::new(),
            areas: Vec::new(),
            basis_gradients: Vec::new(),
            lumped_areas: Vec::new(),
        };
        mesh.finish();
        mesh
    }

    fn finish(&mut self) {
        for tri in self.triangles.iter_mut() {
            let [a, b, c] = tri.map(|i| self.nodes[i]);
            if signed_area(a, b, c) < 0.0 {
                tri.swap(1, 2);
            }
        }
        self.areas = Vec::with_capacity(self.triangles.len());
        self.basis_gradients = Vec::with_capacity(self.triangles.len());
        self.lumped_areas = vec![0.0; self.nodes.len()];
        for tri in &self.triangles {
            let [p0, p1, p2] = tri.map(|i| self.nodes[i]);
            let area = signed_area(p0, p1, p2);
            let inv = 1.0 / (2.0 * area);
            self.basis_gradients.push([
                [(p1[1] - p2[1]) * inv, (p2[0] - p1[0]) * inv],
                [(p2[1] - p0[1]) * inv, (p0[0] - p2[0]) * inv],
                [(p0[1] - p1[1]) * inv, (p1[0] - p0[0]) * inv],
            ]);
            self.areas.push(area);
            for &i in tri {
                self.lumped_areas[i] += area / 3.0;
            }
        }

        let start = ring_start(self.rings);
        let m = ring_len(self.rings);
        self.boundary = (start..start + m).collect();
        self.boundary_angles = (0..m).map(|j| 2.0 * PI * j as f64 / m as f64).collect();
        self.boundary_edge_lengths = (0..m)
            .map(|j| {
                let a = self.nodes[self.boundary[j]];
                let b = self.nodes[self.boundary[(j + 1) % m]];
                ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
            })
            .collect();
        self.boundary_weights = (0..m)
            .map(|j| 0.5 * (self.boundary_edge_lengths[j] + self.boundary_edge_lengths[(j + m - 1) % m]))
            .collect();
    }

    /// Index of node `j` on ring `k` (ring 0 is the centre).
    pub fn node_at(&self, ring: usize, j: usize) -> usize {
        assert!(ring <= self.rings && j < ring_len(ring));
        ring_start(ring) + j
    }

    /// Values of a field on a mesh with twice as many rings, restricted to
    /// the nodes shared with this mesh.
    pub fn restrict_from_finer(&self, finer: &DiskMesh, values: &[f64]) -> Option<Vec<f64>> {
        if finer.rings != 2 * self.rings || values.len() != finer.node_count() {
            return None;
        }
        let mut out = Vec::with_capacity(self.node_count());
        out.push(values[0]);
        for k in 1..=self.rings {
            for j in 0..ring_len(k) {
                out.push(values[finer.node_at(2 * k, 2 * j)]);
            }
        }
        Some(out)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn boundary_len(&self) -> usize {
        self.boundary.len()
    }

    /// Stable identifier used in data headers.
    pub fn id(&self) -> String {
        format!("polar-r{}-rings{}", self.refinement, self.rings)
    }

    /// Smallest interior angle over all triangles, in degrees.
    pub fn min_angle_degrees(&self) -> f64 {
        self.triangles
            .iter()
            .flat_map(|tri| {
                let p = tri.map(|i| self.nodes[i]);
                (0..3).map(move |k| {
                    let (a, b, c) = (p[k], p[(k + 1) % 3], p[(k + 2) % 3]);
                    let u = [b[0] - a[0], b[1] - a[1]];
                    let v = [c[0] - a[0], c[1] - a[1]];
                    let cos = (u[0] * v[0] + u[1] * v[1])
                        / ((u[0] * u[0] + u[1] * u[1]).sqrt() * (v[0] * v[0] + v[1] * v[1]).sqrt());
                    cos.clamp(-1.0, 1.0).acos().to_degrees()
                })
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest triangle edge length.
    pub fn max_edge(&self) -> f64 {
        self.triangles
            .iter()
            .flat_map(|tri| {
                let p = tri.map(|i| self.nodes[i]);
                (0..3).map(move |k| {
                    let (a, b) = (p[k], p[(k + 1) % 3]);
                    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
                })
            })
            .fold(0.0, f64::max)
    }
}

fn signed_area(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_mesh_matches_target_resolution() {
        let m = generate_disk_mesh(DEFAULT_REFINEMENT);
        assert_eq!(m.triangle_count(), 2400);
        assert_eq!(m.node_count(), 1261);
        assert!(m.boundary_len() >= 60);
        assert!(m.min_angle_degrees() >= 20.0, "{}", m.min_angle_degrees());
        let area: f64 = m.areas.iter().sum();
        assert!(((area - PI) / PI).abs() < 0.005);
        assert!(m.areas.iter().all(|&a| a > 0.0));
    }

    #[test]
    fn refinement_quadruples_triangles() {
        for r in 1..4 {
            let a = generate_disk_mesh(r).triangle_count() as f64;
            let b = generate_disk_mesh(r + 1).triangle_count() as f64;
            assert!((b / a - 4.0).abs() < 1e-12);
        }
    }

    #[test]
    fn boundary_is_on_unit_circle_in_angle_order() {
        let m = generate_disk_mesh(2);
        for (k, &i) in m.boundary.iter().enumerate() {
            let [x, y] = m.nodes[i];
            assert!(((x * x + y * y).sqrt() - 1.0).abs() < 1e-12);
            let th = y.atan2(x).rem_euclid(2.0 * PI);
            assert!((th - m.boundary_angles[k]).abs() < 1e-12);
        }
        assert!(m.boundary_angles.windows(2).all(|w| w[1] > w[0]));
        let perimeter: f64 = m.boundary_weights.iter().sum();
        let edges: f64 = m.boundary_edge_lengths.iter().sum();
        assert!((perimeter - edges).abs() < 1e-12);
    }

    #[test]
    fn coarse_nodes_are_shared_with_refined_mesh() {
        let (c, f) = (generate_disk_mesh(2), generate_disk_mesh(3));
        let xs: Vec<f64> = f.nodes.iter().map(|p| p[0]).collect();
        let r = c.restrict_from_finer(&f, &xs).unwrap();
        for (p, x) in c.nodes.iter().zip(&r) {
            assert!((p[0] - x).abs() < 1e-12);
        }
        assert!(f.restrict_from_finer(&c, &xs).is_none());
    }

    #[test]
    fn every_interior_edge_is_shared_by_two_triangles() {
        use std::collections::HashMap;
        let m = generate_disk_mesh(2);
        let mut edges: HashMap<(usize, usize), usize> = HashMap::new();
        for t in &m.triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                *edges.entry((a.min(b), a.max(b))).or_default() += 1;
            }
        }
        let boundary_edges = edges.values().filter(|&&c| c == 1).count();
        assert!(edges.values().all(|&c| c == 1 || c == 2));
        assert_eq!(boundary_edges, m.boundary_len());
    }
}
