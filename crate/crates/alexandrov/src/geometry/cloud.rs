//! Tagged node clouds: a cubic lattice inside a ball, a deterministic
//! boundary net on the sphere, polytope vertices inserted exactly, and
//! sample points along low-dimensional faces.

use super::polytope::Polytope;
use crate::linalg::{self, V};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeTag {
    Interior,
    Boundary,
    PolytopeVertex,
    SkeletonSample,
}

/// Finite point set in the closed ball of radius `radius`, with per-node tags.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NodeCloud {
    pub dim: usize,
    pub radius: f64,
    pub spacing: f64,
    #[serde(with = "point_list")]
    pub points: Vec<V>,
    pub tags: Vec<NodeTag>,
}

mod point_list {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(points: &[V], s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(points.len()))?;
        for p in points {
            seq.serialize_element(&p.to_vec())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<V>, D::Error> {
        let raw: Vec<Vec<f64>> = Vec::deserialize(d)?;
        Ok(raw.iter().map(|p| linalg::vfrom(p)).collect())
    }
}

impl NodeCloud {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn interior_ids(&self) -> Vec<u32> {
        (0..self.len() as u32)
            .filter(|&i| self.tags[i as usize] != NodeTag::Boundary)
            .collect()
    }

    pub fn boundary_ids(&self) -> Vec<u32> {
        (0..self.len() as u32)
            .filter(|&i| self.tags[i as usize] == NodeTag::Boundary)
            .collect()
    }

    /// Index of the node coinciding with `p` within `tol`, if any.
    pub fn find_node(&self, p: &[f64], tol: f64) -> Option<usize> {
        let q = linalg::vfrom(p);
        (0..self.len()).find(|&i| linalg::dist(&self.points[i], &q, self.dim) <= tol)
    }

    /// Smallest pairwise distance; quadratic scan, intended for tests.
    pub fn min_pairwise_distance(&self) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                best = best.min(linalg::dist(&self.points[i], &self.points[j], self.dim));
            }
        }
        best
    }
}

#[derive(Debug, Clone)]
pub struct CloudOptions {
    /// Hard cap on the node count.
    pub node_cap: usize,
    /// Additional points inserted exactly (tagged interior), e.g. measure
    /// atoms or evaluation witnesses.
    pub extra_exact: Vec<Vec<f64>>,
}

impl Default for CloudOptions {
    fn default() -> Self {
        CloudOptions {
            node_cap: 2_000_000,
            extra_exact: Vec::new(),
        }
    }
}

/// Build the cloud: lattice of spacing `h` in the ball of radius `r`, a
/// boundary net on the sphere with arc resolution about `h`, all vertices of
/// `p` inserted exactly, and samples on every face of dimension `<= k_max`.
/// Lattice and boundary points too close to an inserted point are dropped.
pub fn build_node_cloud(
    n: usize,
    r: f64,
    h: f64,
    p: &Polytope,
    k_max: usize,
    opts: &CloudOptions,
) -> Result<NodeCloud> {
    if n == 0 || n > 5 {
        return Err(Error::DimensionOutOfRange(n));
    }
    if p.ambient != n {
        return Err(Error::InvalidInput(format!(
            "polytope ambient dimension {} does not match n={n}",
            p.ambient
        )));
    }
    if h <= 0.0 || r <= 0.0 {
        return Err(Error::InvalidInput("need h > 0 and R > 0".into()));
    }
    if 2 * k_max >= n && p.dim() > 0 {
        return Err(Error::InvalidInput(format!(
            "k_max = {k_max} must satisfy k_max < n/2 = {}",
            n as f64 / 2.0
        )));
    }
    if r <= p.diameter() {
        return Err(Error::PolytopeOutsideBall(format!(
            "R = {r} must exceed the polytope diameter {}",
            p.diameter()
        )));
    }
    if p.circumradius() > r - h {
        return Err(Error::PolytopeOutsideBall(format!(
            "vertex at distance {} from the origin; need <= R - h = {}",
            p.circumradius(),
            r - h
        )));
    }

    // Budget estimate before allocating anything.
    let m_side = (2.0 * (r / h) + 1.0).max(1.0);
    let est_lattice = m_side.powi(n as i32);
    let m_face = (2.0 * r / h).ceil().max(1.0);
    let est_boundary = 2.0 * n as f64 * m_face.powi(n as i32 - 1);
    let estimated = (est_lattice + est_boundary) as usize;
    if estimated > opts.node_cap {
        return Err(Error::NodeBudgetExceeded {
            estimated,
            cap: opts.node_cap,
        });
    }

    // Inserted points first; they win dedup conflicts.
    let mut inserted: Vec<(V, NodeTag)> = Vec::new();
    for v in &p.vertices {
        inserted.push((*v, NodeTag::PolytopeVertex));
    }
    for level in p.faces.iter().skip(1).take(k_max) {
        for face in level {
            for s in sample_face(p, &face.verts, face.dim, h) {
                inserted.push((s, NodeTag::SkeletonSample));
            }
        }
    }
    for extra in &opts.extra_exact {
        if extra.len() != n {
            return Err(Error::InvalidInput(
                "extra exact point with wrong dimension".into(),
            ));
        }
        inserted.push((linalg::vfrom(extra), NodeTag::Interior));
    }
    // Exact-duplicate removal among inserted points (shared face samples).
    let mut kept: Vec<(V, NodeTag)> = Vec::new();
    'outer: for (q, tag) in inserted {
        for (e, _) in &kept {
            if linalg::dist(e, &q, n) < 1e-12 * r {
                continue 'outer;
            }
        }
        kept.push((q, tag));
    }
    let inserted = kept;

    // Dedup radius: lattice nodes near inserted points get dropped. Uses the
    // local scale so that clustered skeleton samples of a small polytope do
    // not wipe out the surrounding lattice.
    let dedup_radius = 0.25 * h;
    let near_inserted = |q: &V| -> bool {
        inserted
            .iter()
            .any(|(e, _)| linalg::dist(e, q, n) < dedup_radius)
    };

    let mut points: Vec<V> = Vec::new();
    let mut tags: Vec<NodeTag> = Vec::new();

    // Interior lattice: |h z| <= R - h/2, lexicographic order.
    let m = ((r - 0.5 * h) / h).floor() as i64;
    let mut idx = vec![-m; n];
    'lattice: loop {
        let mut q = linalg::vzero();
        for k in 0..n {
            q[k] = h * idx[k] as f64;
        }
        if linalg::norm(&q, n) <= r - 0.5 * h && !near_inserted(&q) {
            points.push(q);
            tags.push(NodeTag::Interior);
        }
        let mut k = 0;
        loop {
            idx[k] += 1;
            if idx[k] <= m {
                break;
            }
            idx[k] = -m;
            k += 1;
            if k == n {
                break 'lattice;
            }
        }
    }

    // Boundary net: cell-centered grid on each face of the unit sup-ball,
    // projected to the sphere. Deterministic and symmetric under signed
    // coordinate permutations.
    if n == 1 {
        for s in [-1.0_f64, 1.0] {
            let mut q = linalg::vzero();
            q[0] = s * r;
            points.push(q);
            tags.push(NodeTag::Boundary);
        }
    } else {
        let m_face = (2.0 * r / h).ceil() as usize;
        for axis in 0..n {
            for sgn in [-1.0_f64, 1.0] {
                let others: Vec<usize> = (0..n).filter(|&a| a != axis).collect();
                let mut grid_idx = vec![0usize; n - 1];
                loop {
                    let mut q = linalg::vzero();
                    q[axis] = sgn;
                    for (gi, &a) in grid_idx.iter().zip(others.iter()) {
                        q[a] = -1.0 + (2.0 * *gi as f64 + 1.0) / m_face as f64;
                    }
                    let norm = linalg::norm(&q, n);
                    let s = linalg::scale(&q, r / norm, n);
                    if !near_inserted(&s) {
                        points.push(s);
                        tags.push(NodeTag::Boundary);
                    }
                    let mut k = 0;
                    loop {
                        if k == n - 1 {
                            break;
                        }
                        grid_idx[k] += 1;
                        if grid_idx[k] < m_face {
                            break;
                        }
                        grid_idx[k] = 0;
                        k += 1;
                    }
                    if k == n - 1 {
                        break;
                    }
                }
            }
        }
    }

    for (q, tag) in inserted {
        points.push(q);
        tags.push(tag);
    }
    if points.len() > opts.node_cap {
        return Err(Error::NodeBudgetExceeded {
            estimated: points.len(),
            cap: opts.node_cap,
        });
    }
    Ok(NodeCloud {
        dim: n,
        radius: r,
        spacing: h,
        points,
        tags,
    })
}

/// Sample points on a k-face, spacing `min(h/2, diam/6)`, excluding the
/// vertices themselves. The construction depends only on the vertex set.
fn sample_face(p: &Polytope, verts: &[usize], k: usize, h: f64) -> Vec<V> {
    let n = p.ambient;
    // Canonical vertex order: by coordinates.
    let mut order: Vec<usize> = verts.to_vec();
    order.sort_by(|&a, &b| {
        p.vertices[a][..n]
            .partial_cmp(&p.vertices[b][..n])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut out = Vec::new();
    match k {
        1 => {
            let a = p.vertices[order[0]];
            let b = p.vertices[order[1]];
            let len = linalg::dist(&a, &b, n);
            let s = (0.5 * h).min(len / 6.0);
            let count = (len / s).ceil().max(2.0) as usize;
            for i in 1..count {
                let t = i as f64 / count as f64;
                let mut q = a;
                for c in 0..n {
                    q[c] += t * (b[c] - a[c]);
                }
                out.push(q);
            }
        }
        2 => {
            // Grid in an affine frame of the face, kept inside the polygon.
            let origin = p.vertices[order[0]];
            let dirs: Vec<V> = order[1..]
                .iter()
                .map(|&vi| linalg::sub(&p.vertices[vi], &origin, n))
                .collect();
            let (basis, rank) = linalg::orthonormal_basis(&dirs, n, 1e-10);
            if rank < 2 {
                return out;
            }
            let uv: Vec<(f64, f64)> = order
                .iter()
                .map(|&vi| {
                    let d = linalg::sub(&p.vertices[vi], &origin, n);
                    (linalg::dot(&d, &basis[0], n), linalg::dot(&d, &basis[1], n))
                })
                .collect();
            let diam = {
                let mut best = 0.0_f64;
                for (i, a) in uv.iter().enumerate() {
                    for b in &uv[i + 1..] {
                        best = best.max(((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt());
                    }
                }
                best
            };
            let s = (0.5 * h).min(diam / 6.0);
            let (ulo, uhi) = uv.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |acc, q| {
                (acc.0.min(q.0), acc.1.max(q.0))
            });
            let (vlo, vhi) = uv.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |acc, q| {
                (acc.0.min(q.1), acc.1.max(q.1))
            });
            let hull = polygon_hull(&uv);
            let mut u = ulo + 0.5 * s;
            while u < uhi {
                let mut v = vlo + 0.5 * s;
                while v < vhi {
                    if point_in_polygon(&hull, u, v, 1e-12 * diam.max(1.0)) {
                        let mut q = origin;
                        linalg::axpy(&mut q, u, &basis[0], n);
                        linalg::axpy(&mut q, v, &basis[1], n);
                        out.push(q);
                    }
                    v += s;
                }
                u += s;
            }
        }
        _ => {
            // Faces of dimension >= 3 are never sampled (k_max < n/2 <= 2.5
            // for the supported ambient dimensions).
        }
    }
    out
}

/// Convex hull of 2D points by angular sort around the centroid (points are
/// already in convex position).
fn polygon_hull(uv: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let cx = uv.iter().map(|q| q.0).sum::<f64>() / uv.len() as f64;
    let cy = uv.iter().map(|q| q.1).sum::<f64>() / uv.len() as f64;
    let mut pts = uv.to_vec();
    pts.sort_by(|a, b| {
        let ta = (a.1 - cy).atan2(a.0 - cx);
        let tb = (b.1 - cy).atan2(b.0 - cx);
        ta.partial_cmp(&tb).unwrap_or(std::cmp::Ordering::Equal)
    });
    pts
}

fn point_in_polygon(poly: &[(f64, f64)], u: f64, v: f64, tol: f64) -> bool {
    let m = poly.len();
    for i in 0..m {
        let (x1, y1) = poly[i];
        let (x2, y2) = poly[(i + 1) % m];
        let cross = (x2 - x1) * (v - y1) - (y2 - y1) * (u - x1);
        if cross < -tol {
            return false;
        }
    }
    true
}
