//! Polytopes with explicit face lattices, their skeletons, separating affine
//! functions, and tagged node clouds in balls.

mod cloud;
pub(crate) mod minnorm;
mod polytope;

pub use cloud::{build_node_cloud, CloudOptions, NodeCloud, NodeTag};
pub use minnorm::min_norm_point;
pub use polytope::{Face, Polytope, PolytopeInput};

use crate::linalg::{self, V};
use crate::{Error, Result};

/// An affine function `x -> gradient . x + offset`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct AffineFunction {
    pub gradient: Vec<f64>,
    pub offset: f64,
}

impl AffineFunction {
    pub fn eval(&self, x: &[f64]) -> f64 {
        let mut s = self.offset;
        for (g, xi) in self.gradient.iter().zip(x.iter()) {
            s += g * xi;
        }
        s
    }

    pub fn gradient_v(&self) -> V {
        linalg::vfrom(&self.gradient)
    }
}

/// All faces of dimension `<= k`, flattened from the face lattice.
pub fn skeleton(p: &Polytope, k: usize) -> Result<Vec<Face>> {
    if k > p.dim() {
        return Err(Error::SkeletonOutOfRange { k, dim: p.dim() });
    }
    let mut out = Vec::new();
    for faces in p.faces.iter().take(k + 1) {
        out.extend(faces.iter().cloned());
    }
    Ok(out)
}

/// Unit-gradient affine function vanishing on the face `f` and maximally
/// negative on the remaining vertices; returns `(L, delta)` with
/// `L <= -delta` on every vertex of `p` off the face.
///
/// The maximal margin equals the distance from the face's affine hull to the
/// convex hull of the other vertices, measured orthogonally to the face;
/// it is found as a min-norm point over the projected off-face vertices.
pub fn separating_affine(p: &Polytope, f: &Face) -> Result<(AffineFunction, f64)> {
    let n = p.ambient;
    if f.verts.len() == p.vertices.len() {
        return Err(Error::NotProperFace);
    }
    let z0 = p.face_barycenter(f);
    let fdirs: Vec<V> = f
        .verts
        .iter()
        .map(|&vi| linalg::sub(&p.vertices[vi], &z0, n))
        .collect();
    let (fbasis, frank) = linalg::orthonormal_basis(&fdirs, n, 1e-10);
    if frank != f.dim {
        return Err(Error::DegeneratePolytope(format!(
            "face of nominal dimension {} has affine rank {}",
            f.dim, frank
        )));
    }
    // Project off-face vertices orthogonally to the face directions.
    let mut proj: Vec<V> = Vec::new();
    for (vi, v) in p.vertices.iter().enumerate() {
        if f.verts.contains(&vi) {
            continue;
        }
        let mut u = linalg::sub(v, &z0, n);
        for _ in 0..2 {
            for b in &fbasis {
                let c = linalg::dot(&u, b, n);
                linalg::axpy(&mut u, -c, b, n);
            }
        }
        proj.push(u);
    }
    let (w, delta) = min_norm_point(&proj, n);
    if delta <= 1e-10 * p.circumradius().max(1.0) {
        return Err(Error::DegeneratePolytope(
            "no strictly separating affine function (is the face really a face?)".into(),
        ));
    }
    let g = linalg::scale(&w, -1.0 / delta, n);
    let offset = -linalg::dot(&g, &z0, n);
    let l = AffineFunction {
        gradient: g[..n].to_vec(),
        offset,
    };
    // Margin certificate re-checked by evaluation.
    let worst_on = f
        .verts
        .iter()
        .map(|&vi| l.eval(&p.vertices[vi][..n]).abs())
        .fold(0.0_f64, f64::max);
    debug_assert!(worst_on < 1e-8 * p.circumradius().max(1.0));
    Ok((l, delta))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn skeleton_counts() {
        let tet = Polytope::simplex(3, 1.0).unwrap();
        let sk = skeleton(&tet, 1).unwrap();
        assert_eq!(sk.iter().filter(|f| f.dim == 0).count(), 4);
        assert_eq!(sk.iter().filter(|f| f.dim == 1).count(), 6);

        let cube = Polytope::cube(3, 1.0).unwrap();
        assert_eq!(skeleton(&cube, 0).unwrap().len(), 8);

        let c4 = Polytope::cube(4, 1.0).unwrap();
        let sk = skeleton(&c4, 1).unwrap();
        assert_eq!(sk.iter().filter(|f| f.dim == 0).count(), 16);
        assert_eq!(sk.iter().filter(|f| f.dim == 1).count(), 32);
    }

    #[test]
    fn skeleton_nesting() {
        let tet = Polytope::simplex(3, 1.0).unwrap();
        for k1 in 0..3 {
            for k2 in k1..3 {
                let a = skeleton(&tet, k1).unwrap();
                let b = skeleton(&tet, k2).unwrap();
                for f in &a {
                    assert!(b.iter().any(|g| g.verts == f.verts));
                }
            }
        }
    }

    #[test]
    fn skeleton_out_of_range() {
        let tet = Polytope::simplex(3, 1.0).unwrap();
        assert!(matches!(
            skeleton(&tet, 4),
            Err(Error::SkeletonOutOfRange { .. })
        ));
    }

    #[test]
    fn separating_segment_vertex() {
        // Segment [-e3, e3] in R^3, F = {e3}: L(x) = x3 - 1, delta = 2.
        let p = Polytope::segment(&[0.0, 0.0, -1.0], &[0.0, 0.0, 1.0]).unwrap();
        let face = p.faces[0]
            .iter()
            .find(|f| p.vertices[f.verts[0]][2] > 0.0)
            .unwrap()
            .clone();
        let (l, delta) = separating_affine(&p, &face).unwrap();
        assert!((delta - 2.0).abs() < 1e-9);
        assert!((l.eval(&[0.0, 0.0, 1.0])).abs() < 1e-9);
        assert!((l.eval(&[0.0, 0.0, -1.0]) + 2.0).abs() < 1e-9);
        assert!((linalg::norm(&l.gradient_v(), 3) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn separating_whole_polytope_fails() {
        let p = Polytope::segment(&[0.0, 0.0, -1.0], &[0.0, 0.0, 1.0]).unwrap();
        let top = p.faces[1][0].clone();
        assert!(matches!(
            separating_affine(&p, &top),
            Err(Error::NotProperFace)
        ));
    }

    #[test]
    fn separating_tetra_edge_matches_enumeration_oracle() {
        let tet = Polytope::simplex(3, 2.0 * 2.0_f64.sqrt()).unwrap();
        for edge in &tet.faces[1] {
            let (l, delta) = separating_affine(&tet, edge).unwrap();
            // Independent route: exhaustive subset enumeration for the
            // min-norm point over the projected off-vertices.
            let oracle = {
                let z0 = tet.face_barycenter(edge);
                let n = 3;
                let dirs: Vec<V> = edge
                    .verts
                    .iter()
                    .map(|&vi| linalg::sub(&tet.vertices[vi], &z0, n))
                    .collect();
                let (fb, _) = linalg::orthonormal_basis(&dirs, n, 1e-12);
                let mut proj = Vec::new();
                for (vi, v) in tet.vertices.iter().enumerate() {
                    if edge.verts.contains(&vi) {
                        continue;
                    }
                    let mut u = linalg::sub(v, &z0, n);
                    for b in &fb {
                        let c = linalg::dot(&u, b, n);
                        linalg::axpy(&mut u, -c, b, n);
                    }
                    proj.push(u);
                }
                minnorm::brute_force_min_norm(&proj, n)
            };
            assert!(
                (delta - oracle).abs() < 1e-8,
                "delta {delta} vs oracle {oracle}"
            );
            // Edge length 2*sqrt(2): regular tetrahedron margin = edge/sqrt(2) = 2.
            assert!((delta - 2.0).abs() < 1e-8);
            for (vi, v) in tet.vertices.iter().enumerate() {
                let val = l.eval(&v[..3]);
                if edge.verts.contains(&vi) {
                    assert!(val.abs() < 1e-9);
                } else {
                    assert!(val <= -delta + 1e-9);
                }
            }
        }
    }
}
