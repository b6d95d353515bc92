//! Compact convex polytopes: vertex lists plus explicit face lattices.
//!
//! Simplices and hypercubes generate their lattices internally; anything
//! else must supply the lattice in the input file.

use crate::linalg::{self, V};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// A face given by the sorted indices of its vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    pub dim: usize,
    pub verts: Vec<usize>,
}

/// Vertex list plus face lattice. `faces[k]` holds the k-dimensional faces;
/// the top level is the polytope itself.
#[derive(Debug, Clone)]
pub struct Polytope {
    /// Ambient dimension n.
    pub ambient: usize,
    pub vertices: Vec<V>,
    pub faces: Vec<Vec<Face>>,
}

impl Polytope {
    /// Intrinsic (affine) dimension.
    pub fn dim(&self) -> usize {
        self.faces.len() - 1
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Max pairwise vertex distance.
    pub fn diameter(&self) -> f64 {
        let n = self.ambient;
        let mut best = 0.0;
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                best = linalg::dist(a, b, n).max(best);
            }
        }
        best
    }

    /// Max vertex distance from the origin.
    pub fn circumradius(&self) -> f64 {
        let n = self.ambient;
        self.vertices
            .iter()
            .map(|v| linalg::norm(v, n))
            .fold(0.0, f64::max)
    }

    pub fn face_barycenter(&self, f: &Face) -> V {
        let n = self.ambient;
        let mut c = linalg::vzero();
        for &vi in &f.verts {
            linalg::axpy(&mut c, 1.0 / f.verts.len() as f64, &self.vertices[vi], n);
        }
        c
    }

    pub fn scaled(&self, factor: f64) -> Polytope {
        Polytope {
            ambient: self.ambient,
            vertices: self
                .vertices
                .iter()
                .map(|v| linalg::scale(v, factor, self.ambient))
                .collect(),
            faces: self.faces.clone(),
        }
    }

    pub fn translated(&self, delta: &V) -> Polytope {
        Polytope {
            ambient: self.ambient,
            vertices: self
                .vertices
                .iter()
                .map(|v| linalg::add(v, delta, self.ambient))
                .collect(),
            faces: self.faces.clone(),
        }
    }

    pub fn vertex_barycenter(&self) -> V {
        let n = self.ambient;
        let mut c = linalg::vzero();
        for v in &self.vertices {
            linalg::axpy(&mut c, 1.0 / self.vertices.len() as f64, v, n);
        }
        c
    }

    /// Single point.
    pub fn point(coords: &[f64]) -> Result<Polytope> {
        let n = coords.len();
        check_ambient(n)?;
        Ok(Polytope {
            ambient: n,
            vertices: vec![linalg::vfrom(coords)],
            faces: vec![vec![Face { dim: 0, verts: vec![0] }]],
        })
    }

    /// Segment between two points.
    pub fn segment(a: &[f64], b: &[f64]) -> Result<Polytope> {
        let n = a.len();
        check_ambient(n)?;
        if b.len() != n {
            return Err(Error::InvalidInput("segment endpoint dimensions differ".into()));
        }
        Ok(Polytope {
            ambient: n,
            vertices: vec![linalg::vfrom(a), linalg::vfrom(b)],
            faces: vec![
                vec![
                    Face { dim: 0, verts: vec![0] },
                    Face { dim: 0, verts: vec![1] },
                ],
                vec![Face { dim: 1, verts: vec![0, 1] }],
            ],
        })
    }

    /// Regular n-simplex centered at the origin with the given edge length.
    /// In R^3 the vertices sit on alternate cube corners, so the cubic node
    /// lattice shares the full symmetry group of the polytope.
    pub fn simplex(n: usize, edge: f64) -> Result<Polytope> {
        check_ambient(n)?;
        let vertices: Vec<V> = if n == 3 {
            let s = edge / (2.0 * 2.0_f64.sqrt());
            [
                [1.0, 1.0, 1.0],
                [1.0, -1.0, -1.0],
                [-1.0, 1.0, -1.0],
                [-1.0, -1.0, 1.0],
            ]
            .iter()
            .map(|c| linalg::scale(&linalg::vfrom(c), s, 3))
            .collect()
        } else {
            // Center the standard basis of R^{n+1} and map down with the
            // Helmert basis of the hyperplane orthogonal to (1, ..., 1).
            let mut verts = Vec::new();
            for i in 0..=n {
                let mut p = linalg::vzero();
                for k in 1..=n {
                    // Helmert vector b_k = (1,..,1,-k,0,..)/sqrt(k(k+1)).
                    let norm = ((k * (k + 1)) as f64).sqrt();
                    let coord = if i < k {
                        1.0 / norm
                    } else if i == k {
                        -(k as f64) / norm
                    } else {
                        0.0
                    };
                    p[k - 1] = coord;
                }
                verts.push(p);
            }
            // Centered standard simplex has edge sqrt(2) under this map.
            let f = edge / 2.0_f64.sqrt();
            verts.iter().map(|v| linalg::scale(v, f, n)).collect()
        };
        let nv = vertices.len();
        let mut faces: Vec<Vec<Face>> = vec![Vec::new(); nv];
        for k in 0..nv {
            for mask in 1u32..(1 << nv) {
                if mask.count_ones() as usize != k + 1 {
                    continue;
                }
                let verts: Vec<usize> = (0..nv).filter(|&i| mask >> i & 1 == 1).collect();
                faces[k].push(Face { dim: k, verts });
            }
        }
        Ok(Polytope { ambient: n, vertices, faces })
    }

    /// Axis-aligned n-cube centered at the origin with the given side.
    pub fn cube(n: usize, side: f64) -> Result<Polytope> {
        check_ambient(n)?;
        let half = side / 2.0;
        let vertices: Vec<V> = (0..1usize << n)
            .map(|mask| {
                let mut p = linalg::vzero();
                for k in 0..n {
                    p[k] = if mask >> k & 1 == 1 { half } else { -half };
                }
                p
            })
            .collect();
        let mut faces: Vec<Vec<Face>> = vec![Vec::new(); n + 1];
        // A k-face fixes n-k axes to a sign and lets k axes range.
        for free_mask in 0..1usize << n {
            let k = free_mask.count_ones() as usize;
            let fixed: Vec<usize> = (0..n).filter(|&a| free_mask >> a & 1 == 0).collect();
            for signs in 0..1usize << fixed.len() {
                let verts: Vec<usize> = (0..1usize << n)
                    .filter(|&m| {
                        fixed.iter().enumerate().all(|(si, &axis)| {
                            (m >> axis & 1 == 1) == (signs >> si & 1 == 1)
                        })
                    })
                    .collect();
                faces[k].push(Face { dim: k, verts });
            }
        }
        Ok(Polytope { ambient: n, vertices, faces })
    }

    /// Check the structural invariants: extreme vertices, face ranks, and
    /// closure of the lattice under intersection.
    pub fn validate(&self) -> Result<()> {
        let n = self.ambient;
        let scale = self.circumradius().max(1e-12);
        for (vi, v) in self.vertices.iter().enumerate() {
            let others: Vec<V> = self
                .vertices
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != vi)
                .map(|(_, w)| linalg::sub(w, v, n))
                .collect();
            if others.is_empty() {
                continue;
            }
            let (_, dist) = super::min_norm_point(&others, n);
            if dist <= 1e-9 * scale {
                return Err(Error::DegeneratePolytope(format!(
                    "vertex {vi} is not an extreme point"
                )));
            }
        }
        for (k, level) in self.faces.iter().enumerate() {
            for f in level {
                if f.dim != k {
                    return Err(Error::InvalidInput(format!(
                        "face {:?} listed at lattice level {k}",
                        f.verts
                    )));
                }
                let pts: Vec<V> = f.verts.iter().map(|&vi| self.vertices[vi]).collect();
                let rank = linalg::affine_rank(&pts, n, 1e-9);
                if rank != k {
                    return Err(Error::DegeneratePolytope(format!(
                        "face {:?} has affine rank {rank}, expected {k}",
                        f.verts
                    )));
                }
            }
        }
        let all: Vec<&Face> = self.faces.iter().flatten().collect();
        for (i, f) in all.iter().enumerate() {
            for g in &all[i + 1..] {
                let common: Vec<usize> = f
                    .verts
                    .iter()
                    .filter(|v| g.verts.contains(v))
                    .copied()
                    .collect();
                if common.is_empty() {
                    continue;
                }
                if !all.iter().any(|h| h.verts == common) {
                    return Err(Error::InvalidInput(format!(
                        "face lattice not closed under intersection: {:?} ^ {:?}",
                        f.verts, g.verts
                    )));
                }
            }
        }
        Ok(())
    }
}

fn check_ambient(n: usize) -> Result<()> {
    if n == 0 || n > 6 {
        return Err(Error::DimensionOutOfRange(n));
    }
    Ok(())
}

/// JSON input form: either a generated shape or explicit vertices with an
/// optional face lattice (required unless the vertex count identifies a
/// simplex).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeInput {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub faces: Option<Vec<Vec<Vec<usize>>>>,
}

impl PolytopeInput {
    pub fn build(&self) -> Result<Polytope> {
        check_ambient(self.n)?;
        if let Some(shape) = &self.shape {
            let scale = self.scale.unwrap_or(1.0);
            if scale <= 0.0 {
                return Err(Error::InvalidInput("scale must be positive".into()));
            }
            return match shape.as_str() {
                "simplex" => Polytope::simplex(self.n, scale),
                "cube" => Polytope::cube(self.n, scale),
                other => Err(Error::InvalidInput(format!("unknown shape '{other}'"))),
            };
        }
        let Some(vertices) = &self.vertices else {
            return Err(Error::InvalidInput(
                "either 'shape' or 'vertices' is required".into(),
            ));
        };
        for v in vertices {
            if v.len() != self.n {
                return Err(Error::InvalidInput(format!(
                    "vertex {:?} does not have {} coordinates",
                    v, self.n
                )));
            }
        }
        let verts: Vec<V> = vertices.iter().map(|v| linalg::vfrom(v)).collect();
        let poly = match &self.faces {
            Some(levels) => {
                let mut faces: Vec<Vec<Face>> = Vec::new();
                // Prepend the vertex level when it is not spelled out.
                let starts_at_zero = levels
                    .first()
                    .map(|l| l.iter().all(|f| f.len() == 1))
                    .unwrap_or(false);
                if !starts_at_zero {
                    faces.push((0..verts.len()).map(|i| Face { dim: 0, verts: vec![i] }).collect());
                }
                for level in levels.iter() {
                    let k = faces.len();
                    faces.push(
                        level
                            .iter()
                            .map(|idx| {
                                let mut v = idx.clone();
                                v.sort_unstable();
                                Face { dim: k, verts: v }
                            })
                            .collect(),
                    );
                }
                // Ensure the top face is present.
                let has_top = faces
                    .iter()
                    .flatten()
                    .any(|f| f.verts.len() == verts.len());
                let mut poly = Polytope { ambient: self.n, vertices: verts, faces };
                if !has_top {
                    let all: Vec<usize> = (0..poly.vertices.len()).collect();
                    let pts: Vec<V> = poly.vertices.clone();
                    let top_dim = linalg::affine_rank(&pts, self.n, 1e-9);
                    while poly.faces.len() <= top_dim {
                        poly.faces.push(Vec::new());
                    }
                    poly.faces[top_dim].push(Face { dim: top_dim, verts: all });
                }
                poly
            }
            None => {
                if verts.len() == self.n + 1 {
                    // Simplex combinatorics: every vertex subset is a face.
                    let template = Polytope::simplex(self.n, 1.0)?;
                    Polytope {
                        ambient: self.n,
                        vertices: verts,
                        faces: template.faces,
                    }
                } else {
                    return Err(Error::InvalidInput(
                        "'faces' is required for general polytopes".into(),
                    ));
                }
            }
        };
        poly.validate()?;
        Ok(poly)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_geometry() {
        for n in 2..=5 {
            let p = Polytope::simplex(n, 1.5).unwrap();
            assert_eq!(p.vertex_count(), n + 1);
            assert_eq!(p.dim(), n);
            for (i, a) in p.vertices.iter().enumerate() {
                for b in &p.vertices[i + 1..] {
                    assert!((linalg::dist(a, b, n) - 1.5).abs() < 1e-10);
                }
            }
            p.validate().unwrap();
        }
    }

    #[test]
    fn cube_lattice_counts() {
        let c = Polytope::cube(3, 2.0).unwrap();
        assert_eq!(c.faces[0].len(), 8);
        assert_eq!(c.faces[1].len(), 12);
        assert_eq!(c.faces[2].len(), 6);
        assert_eq!(c.faces[3].len(), 1);
        c.validate().unwrap();
        let c4 = Polytope::cube(4, 1.0).unwrap();
        assert_eq!(c4.faces[1].len(), 32);
        c4.validate().unwrap();
    }

    #[test]
    fn json_shape_and_vertices() {
        let p: PolytopeInput =
            serde_json::from_str(r#"{"n":3,"shape":"simplex","scale":2.0}"#).unwrap();
        let poly = p.build().unwrap();
        assert_eq!(poly.vertex_count(), 4);

        let q: PolytopeInput = serde_json::from_str(
            r#"{"n":2,"vertices":[[0,0],[1,0],[0,1]],"faces":[[[0],[1],[2]],[[0,1],[0,2],[1,2]],[[0,1,2]]]}"#,
        )
        .unwrap();
        let poly = q.build().unwrap();
        assert_eq!(poly.dim(), 2);
        poly.validate().unwrap();
    }

    #[test]
    fn rejects_non_extreme_vertex() {
        let q: PolytopeInput = serde_json::from_str(
            r#"{"n":1,"vertices":[[0],[1],[2]],"faces":[[[0],[1],[2]],[[0,1],[1,2],[0,2]]]}"#,
        )
        .unwrap();
        assert!(q.build().is_err());
    }

    #[test]
    fn tetra_is_cube_inscribed() {
        let p = Polytope::simplex(3, 2.0 * 2.0_f64.sqrt()).unwrap();
        for v in &p.vertices {
            for k in 0..3 {
                assert!((v[k].abs() - 1.0).abs() < 1e-12);
            }
        }
    }
}
