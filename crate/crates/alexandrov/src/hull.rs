//! Convex hulls of point sets in dimensions 2..=6 by an incremental
//! conflict-list construction with simplicial facets.
//!
//! Inputs with massive coplanarities (lattice samples of quadratics, say)
//! should be jiggled by the caller before building; combinatorial output can
//! then be re-evaluated against the unperturbed data.

use crate::error::Error;
use crate::linalg::{self, MAX_DIM, V};
use crate::Result;
use smallvec::SmallVec;
use std::collections::HashMap;

type VertIds = SmallVec<[u32; MAX_DIM]>;

/// One facet of a finished hull: a (dim-1)-simplex with outward unit normal.
#[derive(Debug, Clone)]
pub struct HullFacet {
    pub verts: VertIds,
    pub normal: V,
    pub offset: f64,
}

/// Convex hull of a full-dimensional point set.
#[derive(Debug, Clone)]
pub struct Hull {
    pub dim: usize,
    pub facets: Vec<HullFacet>,
    /// Ids of points that appear as facet vertices, sorted ascending.
    pub vertex_ids: Vec<u32>,
    /// A point strictly inside the hull, used for orientation and volumes.
    pub interior: V,
}

struct WFacet {
    verts: VertIds,
    neighbors: SmallVec<[u32; MAX_DIM]>,
    normal: V,
    offset: f64,
    outside: Vec<u32>,
    furthest: f64,
    alive: bool,
}

/// Hyperplane through `pts` (must span a (d-1)-dim affine set), oriented so
/// that `inside` has `normal . x < offset`.
fn plane_through(points: &[V], inside: &V, d: usize) -> Option<(V, f64)> {
    let origin = points[0];
    let dirs: Vec<V> = points[1..]
        .iter()
        .map(|p| linalg::sub(p, &origin, d))
        .collect();
    let (mut basis, rank) = linalg::orthonormal_basis(&dirs, d, 1e-9);
    if rank != d - 1 {
        return None;
    }
    // Extend by coordinate axes; the first new direction is the normal.
    let mut normal = None;
    for axis in 0..d {
        let mut e = linalg::vzero();
        e[axis] = 1.0;
        for _ in 0..2 {
            for b in &basis {
                let c = linalg::dot(&e, b, d);
                linalg::axpy(&mut e, -c, b, d);
            }
        }
        if linalg::norm(&e, d) > 1e-7 {
            linalg::normalize(&mut e, d);
            normal = Some(e);
            break;
        }
        basis.push(e); // keep shape; never reached in practice
    }
    let mut normal = normal?;
    let mut offset = linalg::dot(&normal, &origin, d);
    if linalg::dot(&normal, inside, d) > offset {
        normal = linalg::scale(&normal, -1.0, d);
        offset = -offset;
    }
    Some((normal, offset))
}

impl Hull {
    /// Build the hull of `points` (given as `dim`-slices). `eps_rel` scales
    /// the outside/visibility tolerance by the coordinate magnitude.
    pub fn build(points: &[V], dim: usize, eps_rel: f64) -> Result<Hull> {
        if dim < 2 || dim > MAX_DIM - 1 {
            return Err(Error::DimensionOutOfRange(dim));
        }
        if points.len() < dim + 1 {
            return Err(Error::AffinelyDegenerate {
                rank: points.len().saturating_sub(1),
                needed: dim,
            });
        }
        let scale = points
            .iter()
            .flat_map(|p| p[..dim].iter())
            .fold(0.0_f64, |a, &b| a.max(b.abs()))
            .max(1.0);
        let eps = eps_rel * scale;

        // Initial simplex: start from the two most distant axis-extreme
        // points, then greedily maximize distance to the affine hull.
        let mut extremes: Vec<usize> = Vec::new();
        for axis in 0..dim {
            let mut lo = 0;
            let mut hi = 0;
            for (i, p) in points.iter().enumerate() {
                if p[axis] < points[lo][axis] {
                    lo = i;
                }
                if p[axis] > points[hi][axis] {
                    hi = i;
                }
            }
            extremes.push(lo);
            extremes.push(hi);
        }
        extremes.sort_unstable();
        extremes.dedup();
        let (mut a, mut b, mut best) = (0, 0, -1.0);
        for (i, &p) in extremes.iter().enumerate() {
            for &q in &extremes[i + 1..] {
                let dd = linalg::dist(&points[p], &points[q], dim);
                if dd > best {
                    best = dd;
                    a = p;
                    b = q;
                }
            }
        }
        if best <= eps {
            return Err(Error::AffinelyDegenerate { rank: 0, needed: dim });
        }
        let mut simplex: Vec<usize> = vec![a, b];
        while simplex.len() < dim + 1 {
            let sel: Vec<V> = simplex.iter().map(|&i| points[i]).collect();
            let mut pick = usize::MAX;
            let mut dist_best = eps;
            for (i, p) in points.iter().enumerate() {
                if simplex.contains(&i) {
                    continue;
                }
                let r = linalg::dist_to_affine_hull(p, &sel, dim, 1e-12);
                if r > dist_best {
                    dist_best = r;
                    pick = i;
                }
            }
            if pick == usize::MAX {
                return Err(Error::AffinelyDegenerate {
                    rank: simplex.len() - 1,
                    needed: dim,
                });
            }
            simplex.push(pick);
        }

        let mut interior = linalg::vzero();
        for &i in &simplex {
            linalg::axpy(&mut interior, 1.0 / (dim as f64 + 1.0), &points[i], dim);
        }

        let mut facets: Vec<WFacet> = Vec::new();
        for omit in 0..=dim {
            let verts: VertIds = simplex
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != omit)
                .map(|(_, &i)| i as u32)
                .collect();
            let pts: Vec<V> = verts.iter().map(|&i| points[i as usize]).collect();
            let (normal, offset) = plane_through(&pts, &interior, dim).ok_or(
                Error::AffinelyDegenerate { rank: dim - 1, needed: dim },
            )?;
            facets.push(WFacet {
                verts,
                neighbors: SmallVec::new(),
                normal,
                offset,
                outside: Vec::new(),
                furthest: 0.0,
                alive: true,
            });
        }
        // Initial neighbors: facet omitting vertex j is adjacent to every other.
        for i in 0..=dim {
            let mut nb: SmallVec<[u32; MAX_DIM]> = SmallVec::new();
            // Slot k of facet i is the facet opposite verts[k]: the facet of
            // the simplex that omits that vertex.
            for k in 0..dim {
                let v = facets[i].verts[k];
                let j = simplex.iter().position(|&s| s as u32 == v).unwrap();
                nb.push(j as u32);
            }
            facets[i].neighbors = nb;
        }

        // Conflict lists.
        for (i, p) in points.iter().enumerate() {
            if simplex.contains(&i) {
                continue;
            }
            for f in facets.iter_mut() {
                let d = linalg::dot(&f.normal, p, dim) - f.offset;
                if d > eps {
                    f.outside.push(i as u32);
                    if d > f.furthest {
                        f.furthest = d;
                    }
                    break;
                }
            }
        }

        let mut stack: Vec<u32> = (0..facets.len() as u32).collect();
        let mut visible_buf: Vec<u32> = Vec::new();
        while let Some(fid) = stack.pop() {
            let fid = fid as usize;
            if !facets[fid].alive || facets[fid].outside.is_empty() {
                continue;
            }
            // Apex: furthest conflict point of this facet.
            let apex = {
                let f = &facets[fid];
                let mut best = f.outside[0];
                let mut bestd = -1.0;
                for &p in &f.outside {
                    let d = linalg::dot(&f.normal, &points[p as usize], dim) - f.offset;
                    if d > bestd {
                        bestd = d;
                        best = p;
                    }
                }
                best
            };
            let apexp = points[apex as usize];

            // Visible set by BFS across neighbors.
            visible_buf.clear();
            visible_buf.push(fid as u32);
            let mut mark: HashMap<u32, bool> = HashMap::new();
            mark.insert(fid as u32, true);
            let mut qi = 0;
            while qi < visible_buf.len() {
                let cur = visible_buf[qi] as usize;
                qi += 1;
                let nbs = facets[cur].neighbors.clone();
                for nb in nbs {
                    if mark.contains_key(&nb) {
                        continue;
                    }
                    let g = &facets[nb as usize];
                    let d = linalg::dot(&g.normal, &apexp, dim) - g.offset;
                    if d > eps {
                        mark.insert(nb, true);
                        visible_buf.push(nb);
                    } else {
                        mark.insert(nb, false);
                    }
                }
            }

            // Horizon ridges: (hidden facet, its slot, ridge verts).
            let mut new_ids: Vec<u32> = Vec::new();
            let mut ridge_map: HashMap<Vec<u32>, (u32, usize)> = HashMap::new();
            let visible = visible_buf.clone();
            for &vf in &visible {
                let nbs = facets[vf as usize].neighbors.clone();
                let verts = facets[vf as usize].verts.clone();
                for (slot, &nb) in nbs.iter().enumerate() {
                    if *mark.get(&nb).unwrap_or(&false) {
                        continue;
                    }
                    // Ridge = verts of vf minus verts[slot].
                    let ridge: VertIds = verts
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != slot)
                        .map(|(_, &v)| v)
                        .collect();
                    let mut nverts: VertIds = ridge.clone();
                    nverts.push(apex);
                    let pts: Vec<V> = nverts.iter().map(|&i| points[i as usize]).collect();
                    let Some((normal, offset)) = plane_through(&pts, &interior, dim) else {
                        return Err(Error::NumericsCheckFailed(
                            "degenerate horizon facet".into(),
                        ));
                    };
                    let nid = facets.len() as u32;
                    let hidden_slot = facets[nb as usize]
                        .neighbors
                        .iter()
                        .position(|&x| x == vf)
                        .expect("neighbor wiring");
                    facets[nb as usize].neighbors[hidden_slot] = nid;
                    let mut neighbors: SmallVec<[u32; MAX_DIM]> =
                        SmallVec::from_elem(u32::MAX, dim);
                    // Slot of apex (last vertex) points across the ridge to
                    // the hidden facet.
                    neighbors[dim - 1] = nb;
                    facets.push(WFacet {
                        verts: nverts,
                        neighbors,
                        normal,
                        offset,
                        outside: Vec::new(),
                        furthest: 0.0,
                        alive: true,
                    });
                    new_ids.push(nid);
                    // Wire sub-ridges (drop one ridge vertex, keep apex).
                    for drop in 0..dim - 1 {
                        let mut key: Vec<u32> = (0..dim - 1)
                            .filter(|&k| k != drop)
                            .map(|k| ridge[k])
                            .collect();
                        key.push(apex);
                        key.sort_unstable();
                        match ridge_map.remove(&key) {
                            None => {
                                ridge_map.insert(key, (nid, drop));
                            }
                            Some((other, oslot)) => {
                                facets[nid as usize].neighbors[drop] = other;
                                facets[other as usize].neighbors[oslot] = nid;
                            }
                        }
                    }
                }
            }
            if !ridge_map.is_empty() {
                return Err(Error::NumericsCheckFailed(
                    "open horizon in hull construction".into(),
                ));
            }

            // Redistribute conflict points of the visible facets.
            let mut orphans: Vec<u32> = Vec::new();
            for &vf in &visible {
                orphans.append(&mut facets[vf as usize].outside);
                facets[vf as usize].alive = false;
            }
            for p in orphans {
                if p == apex {
                    continue;
                }
                let pp = points[p as usize];
                for &nid in &new_ids {
                    let f = &mut facets[nid as usize];
                    let d = linalg::dot(&f.normal, &pp, dim) - f.offset;
                    if d > eps {
                        f.outside.push(p);
                        if d > f.furthest {
                            f.furthest = d;
                        }
                        break;
                    }
                }
            }
            for &nid in &new_ids {
                if !facets[nid as usize].outside.is_empty() {
                    stack.push(nid);
                }
            }
        }

        let mut out_facets = Vec::new();
        let mut vertex_ids: Vec<u32> = Vec::new();
        for f in facets.into_iter().filter(|f| f.alive) {
            vertex_ids.extend_from_slice(&f.verts);
            out_facets.push(HullFacet {
                verts: f.verts,
                normal: f.normal,
                offset: f.offset,
            });
        }
        vertex_ids.sort_unstable();
        vertex_ids.dedup();
        Ok(Hull {
            dim,
            facets: out_facets,
            vertex_ids,
            interior,
        })
    }

    /// Hull volume as the sum of pyramids over facets from the interior point.
    pub fn volume(&self, points: &[V]) -> f64 {
        let d = self.dim;
        let mut vol = 0.0;
        for f in &self.facets {
            let h = f.offset - linalg::dot(&f.normal, &self.interior, d);
            vol += h * simplex_area(&f.verts, points, d) / d as f64;
        }
        vol
    }
}

/// (d-1)-volume of the simplicial facet spanned by `verts`.
fn simplex_area(verts: &[u32], points: &[V], d: usize) -> f64 {
    let k = verts.len() - 1;
    let origin = points[verts[0] as usize];
    let mut gram = [[0.0; MAX_DIM]; MAX_DIM];
    let edges: Vec<V> = verts[1..]
        .iter()
        .map(|&i| linalg::sub(&points[i as usize], &origin, d))
        .collect();
    for i in 0..k {
        for j in 0..k {
            gram[i][j] = linalg::dot(&edges[i], &edges[j], d);
        }
    }
    let g = linalg::det(&gram, k).max(0.0);
    let mut fact = 1.0;
    for i in 1..=k {
        fact *= i as f64;
    }
    g.sqrt() / fact
}

/// Volume of the convex hull of an arbitrary point set with fallback for
/// degenerate (lower-dimensional) sets, which have volume zero.
pub fn hull_volume(points: &[V], dim: usize) -> f64 {
    if dim == 1 {
        let lo = points.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
        let hi = points.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
        return (hi - lo).max(0.0);
    }
    match Hull::build(points, dim, 1e-9) {
        Ok(h) => h.volume(points),
        Err(Error::AffinelyDegenerate { .. }) => 0.0,
        Err(_) => 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::vfrom;

    fn cube_points(dim: usize, side: f64) -> Vec<V> {
        let n = 1usize << dim;
        (0..n)
            .map(|mask| {
                let mut p = linalg::vzero();
                for k in 0..dim {
                    p[k] = if mask >> k & 1 == 1 { side / 2.0 } else { -side / 2.0 };
                }
                p
            })
            .collect()
    }

    #[test]
    fn cube_volumes() {
        for dim in 2..=5 {
            let pts = cube_points(dim, 2.0);
            let h = Hull::build(&pts, dim, 1e-9).unwrap();
            let v = h.volume(&pts);
            let expect = 2.0_f64.powi(dim as i32);
            assert!(
                (v - expect).abs() < 1e-9 * expect,
                "dim {dim}: vol {v} vs {expect}"
            );
            assert_eq!(h.vertex_ids.len(), 1 << dim);
        }
    }

    #[test]
    fn cross_polytope_volume() {
        // Volume of the unit cross-polytope in R^d is 2^d / d!.
        for dim in 2..=4 {
            let mut pts = Vec::new();
            for k in 0..dim {
                for s in [-1.0, 1.0] {
                    let mut p = linalg::vzero();
                    p[k] = s;
                    pts.push(p);
                }
            }
            let h = Hull::build(&pts, dim, 1e-9).unwrap();
            let mut fact = 1.0;
            for i in 1..=dim {
                fact *= i as f64;
            }
            let expect = 2.0_f64.powi(dim as i32) / fact;
            assert!((h.volume(&pts) - expect).abs() < 1e-9);
        }
    }

    #[test]
    fn interior_points_are_not_vertices() {
        let mut pts = cube_points(3, 2.0);
        pts.push(vfrom(&[0.0, 0.0, 0.0]));
        pts.push(vfrom(&[0.3, -0.2, 0.7]));
        let h = Hull::build(&pts, 3, 1e-9).unwrap();
        assert_eq!(h.vertex_ids.len(), 8);
        assert!(!h.vertex_ids.contains(&8));
        assert!(!h.vertex_ids.contains(&9));
    }

    #[test]
    fn random_ball_volume_converges() {
        // Hull of many points on the unit sphere approximates the ball.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let dim = 3;
        let mut pts = Vec::new();
        for _ in 0..4000 {
            let mut p = linalg::vzero();
            loop {
                for x in p.iter_mut().take(dim) {
                    *x = rng.gen_range(-1.0..1.0);
                }
                let n = linalg::norm(&p, dim);
                if n > 1e-3 {
                    p = linalg::scale(&p, 1.0 / n, dim);
                    break;
                }
            }
            pts.push(p);
        }
        let h = Hull::build(&pts, dim, 1e-9).unwrap();
        let ball = 4.0 * std::f64::consts::PI / 3.0;
        let v = h.volume(&pts);
        assert!(v < ball && v > 0.97 * ball, "vol {v} vs ball {ball}");
    }

    #[test]
    fn degenerate_input_is_reported() {
        let pts = vec![
            vfrom(&[0.0, 0.0, 0.0]),
            vfrom(&[1.0, 0.0, 0.0]),
            vfrom(&[2.0, 0.0, 0.0]),
            vfrom(&[3.0, 1.0, 0.0]),
            vfrom(&[4.0, 2.0, 0.0]),
        ];
        match Hull::build(&pts, 3, 1e-9) {
            Err(Error::AffinelyDegenerate { needed: 3, .. }) => {}
            other => panic!("expected degeneracy, got {other:?}"),
        }
    }
}
