//! Bounded halfspace intersections by incremental clipping, with exact
//! volumes via recursive face decomposition.
//!
//! A `CellCutter` starts from an axis box and is cut by halfspaces
//! `a . p <= b`. Vertices carry the set of planes they are incident to, which
//! drives both edge detection during cuts and the face lattice walk during
//! volume computation. Buffers are reused across cells; one cutter per
//! worker thread.

use crate::linalg::{self, MAX_DIM, V};
use crate::tol;
use smallvec::SmallVec;

/// Tag value reserved for the bounding-box planes.
pub const BOX_TAG: u32 = u32::MAX;

type Inc = SmallVec<[u16; 12]>;

#[derive(Debug, Clone)]
pub struct Plane {
    /// Unit normal.
    pub n: V,
    /// Offset: the halfspace is `n . p <= c`.
    pub c: f64,
    /// Norm of the caller's raw normal (1 for box planes).
    pub raw_len: f64,
    /// Caller tag, typically the index of the node that induced the cut.
    pub tag: u32,
}

#[derive(Debug, Clone)]
struct CutVert {
    p: V,
    inc: Inc,
}

#[derive(Debug, Clone)]
pub struct CellCutter {
    dim: usize,
    scale: f64,
    empty: bool,
    planes: Vec<Plane>,
    verts: Vec<CutVert>,
    // scratch
    sides: Vec<f64>,
    fresh: Vec<CutVert>,
}

/// Result of one cut.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cut {
    /// The halfspace did not remove anything.
    Redundant,
    /// The halfspace cut the polytope.
    Cut,
    /// Nothing remains (full-dimensionally).
    Empty,
}

impl CellCutter {
    pub fn new(dim: usize) -> Self {
        CellCutter {
            dim,
            scale: 1.0,
            empty: false,
            planes: Vec::new(),
            verts: Vec::new(),
            sides: Vec::new(),
            fresh: Vec::new(),
        }
    }

    /// Reset to the axis-aligned box `center +- half`.
    pub fn reset_box(&mut self, center: &V, half: f64) {
        let d = self.dim;
        self.planes.clear();
        self.verts.clear();
        self.empty = false;
        self.scale = half + center[..d].iter().fold(0.0_f64, |a, &b| a.max(b.abs()));
        for axis in 0..d {
            for sgn in [1.0, -1.0] {
                let mut n = linalg::vzero();
                n[axis] = sgn;
                self.planes.push(Plane {
                    n,
                    c: sgn * center[axis] + half,
                    raw_len: 1.0,
                    tag: BOX_TAG,
                });
            }
        }
        for mask in 0..(1usize << d) {
            let mut p = *center;
            let mut inc: Inc = SmallVec::new();
            for axis in 0..d {
                let up = mask >> axis & 1 == 1;
                p[axis] += if up { half } else { -half };
                inc.push((2 * axis + if up { 0 } else { 1 }) as u16);
            }
            inc.sort_unstable();
            self.verts.push(CutVert { p, inc });
        }
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.empty || self.verts.is_empty()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertex_count(&self) -> usize {
        self.verts.len()
    }

    pub fn vertex_points(&self) -> impl Iterator<Item = &V> {
        self.verts.iter().map(|v| &v.p)
    }

    pub fn planes(&self) -> &[Plane] {
        &self.planes
    }

    /// Max of `dir . p` over current vertices.
    pub fn support(&self, dir: &V) -> f64 {
        let d = self.dim;
        self.verts
            .iter()
            .map(|v| linalg::dot(&v.p, dir, d))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Centroid of the vertex set; an interior point for full-dim cells.
    pub fn vertex_centroid(&self) -> V {
        let d = self.dim;
        let mut c = linalg::vzero();
        if self.verts.is_empty() {
            return c;
        }
        for v in &self.verts {
            linalg::axpy(&mut c, 1.0, &v.p, d);
        }
        linalg::scale(&c, 1.0 / self.verts.len() as f64, d)
    }

    /// Max distance of a vertex from `center`.
    pub fn radius_about(&self, center: &V) -> f64 {
        let d = self.dim;
        self.verts
            .iter()
            .map(|v| linalg::dist(&v.p, center, d))
            .fold(0.0, f64::max)
    }

    /// Cut with the halfspace `a . p <= b` (`a` unnormalized).
    pub fn clip(&mut self, a: &V, b: f64, tag: u32) -> Cut {
        if self.empty {
            return Cut::Empty;
        }
        let d = self.dim;
        let len = linalg::norm(a, d);
        let eps_on = tol::CLIP_ON_REL * self.scale.max(1.0);
        if len < 1e-15 {
            // Degenerate direction: the constraint reads 0 <= b.
            if b < -eps_on {
                self.empty = true;
                self.verts.clear();
                return Cut::Empty;
            }
            return Cut::Redundant;
        }
        let n = linalg::scale(a, 1.0 / len, d);
        let c = b / len;

        self.sides.clear();
        let mut smax = f64::NEG_INFINITY;
        let mut smin = f64::INFINITY;
        for v in &self.verts {
            let s = linalg::dot(&n, &v.p, d) - c;
            smax = smax.max(s);
            smin = smin.min(s);
            self.sides.push(s);
        }
        if smax <= eps_on {
            if smax >= -eps_on {
                // Touching: record incidence on the grazed vertices.
                let pid = self.planes.len() as u16;
                let mut touched = false;
                for (v, &s) in self.verts.iter_mut().zip(self.sides.iter()) {
                    if s.abs() <= eps_on {
                        v.inc.push(pid);
                        v.inc.sort_unstable();
                        touched = true;
                    }
                }
                if touched {
                    self.planes.push(Plane { n, c, raw_len: len, tag });
                }
            }
            return Cut::Redundant;
        }
        if smin >= -eps_on {
            self.empty = true;
            self.verts.clear();
            return Cut::Empty;
        }

        let pid = self.planes.len() as u16;
        self.fresh.clear();
        // New vertices: crossing edges between strictly-in and strictly-out.
        for i in 0..self.verts.len() {
            let si = self.sides[i];
            if si >= -eps_on {
                continue;
            }
            for j in 0..self.verts.len() {
                let sj = self.sides[j];
                if sj <= eps_on {
                    continue;
                }
                let shared = intersect_sorted(&self.verts[i].inc, &self.verts[j].inc);
                if shared.len() < d - 1 {
                    continue;
                }
                if d > 2 && !self.shared_rank_is(d - 1, &shared) {
                    continue;
                }
                let t = si / (si - sj);
                let mut p = self.verts[i].p;
                for k in 0..d {
                    p[k] += t * (self.verts[j].p[k] - self.verts[i].p[k]);
                }
                let mut inc = shared;
                inc.push(pid);
                inc.sort_unstable();
                self.fresh.push(CutVert { p, inc });
            }
        }
        // Keep in-vertices, tag on-vertices, drop out-vertices.
        let mut keep = 0;
        for i in 0..self.verts.len() {
            let s = self.sides[i];
            if s > eps_on {
                continue;
            }
            if s >= -eps_on {
                self.verts[i].inc.push(pid);
                self.verts[i].inc.sort_unstable();
            }
            self.verts.swap(keep, i);
            self.sides.swap(keep, i);
            keep += 1;
        }
        self.verts.truncate(keep);
        // Merge near-duplicate fresh vertices (against kept on-verts too).
        let eps_pos = tol::CLIP_MERGE_REL * self.scale.max(1.0);
        'fresh: for f in std::mem::take(&mut self.fresh) {
            for v in self.verts.iter_mut() {
                if linalg::dist(&v.p, &f.p, d) <= eps_pos {
                    merge_sorted(&mut v.inc, &f.inc);
                    continue 'fresh;
                }
            }
            self.verts.push(f);
        }
        self.planes.push(Plane { n, c, raw_len: len, tag });
        if self.verts.len() <= d {
            // Lower-dimensional remainder: nothing of full dimension left.
            self.empty = true;
            self.verts.clear();
            return Cut::Empty;
        }
        Cut::Cut
    }

    fn shared_rank_is(&self, want: usize, shared: &Inc) -> bool {
        let d = self.dim;
        let normals: SmallVec<[V; MAX_DIM]> = shared
            .iter()
            .map(|&pid| self.planes[pid as usize].n)
            .collect();
        let (_, rank) = linalg::orthonormal_basis(&normals, d, 1e-7);
        rank == want
    }

    /// Exact volume.
    pub fn volume(&self) -> f64 {
        self.volume_and_plane_areas().0
    }

    /// Volume together with the (d-1)-measure of the facet carried by each
    /// plane (aligned with `planes()`; zero for planes that carry no facet).
    pub fn volume_and_plane_areas(&self) -> (f64, Vec<f64>) {
        let d = self.dim;
        let mut areas = vec![0.0; self.planes.len()];
        if self.is_empty() || self.verts.len() < d + 1 {
            return (0.0, areas);
        }
        let all: Vec<u32> = (0..self.verts.len() as u32).collect();
        if d == 1 {
            let lo = self.verts.iter().map(|v| v.p[0]).fold(f64::INFINITY, f64::min);
            let hi = self
                .verts
                .iter()
                .map(|v| v.p[0])
                .fold(f64::NEG_INFINITY, f64::max);
            return ((hi - lo).max(0.0), areas);
        }
        let mut vol = 0.0;
        let centroid = self.vertex_centroid();
        let mut seen: Vec<Vec<u32>> = Vec::new();
        for (pid, _plane) in self.planes.iter().enumerate() {
            let vset: Vec<u32> = all
                .iter()
                .copied()
                .filter(|&vi| self.verts[vi as usize].inc.binary_search(&(pid as u16)).is_ok())
                .collect();
            if vset.len() < d || vset.len() == all.len() {
                continue;
            }
            if seen.iter().any(|s| *s == vset) {
                continue;
            }
            let sub = self.face_measure(&vset, d - 1);
            if sub > 0.0 {
                let pts: Vec<V> = vset.iter().map(|&vi| self.verts[vi as usize].p).collect();
                let h = linalg::dist_to_affine_hull(&centroid, &pts, d, 1e-10);
                vol += h * sub / d as f64;
                areas[pid] = sub;
            }
            seen.push(vset);
        }
        (vol, areas)
    }

    /// k-dimensional measure of the face spanned by `vset`.
    fn face_measure(&self, vset: &[u32], k: usize) -> f64 {
        let d = self.dim;
        if vset.len() < k + 1 {
            return 0.0;
        }
        if k == 1 {
            let mut best = 0.0;
            for (i, &a) in vset.iter().enumerate() {
                for &b in &vset[i + 1..] {
                    let t = linalg::dist(&self.verts[a as usize].p, &self.verts[b as usize].p, d);
                    if t > best {
                        best = t;
                    }
                }
            }
            return best;
        }
        // Candidate carrier planes: any plane incident to >= k of our verts.
        let mut counts: SmallVec<[(u16, u32); 32]> = SmallVec::new();
        for &vi in vset {
            for &pid in &self.verts[vi as usize].inc {
                match counts.iter_mut().find(|(p, _)| *p == pid) {
                    Some((_, c)) => *c += 1,
                    None => counts.push((pid, 1)),
                }
            }
        }
        let mut centroid = linalg::vzero();
        for &vi in vset {
            linalg::axpy(&mut centroid, 1.0, &self.verts[vi as usize].p, d);
        }
        centroid = linalg::scale(&centroid, 1.0 / vset.len() as f64, d);
        let mut total = 0.0;
        let mut seen: Vec<Vec<u32>> = Vec::new();
        for &(pid, cnt) in counts.iter() {
            if (cnt as usize) < k || cnt as usize == vset.len() {
                continue;
            }
            let sub: Vec<u32> = vset
                .iter()
                .copied()
                .filter(|&vi| self.verts[vi as usize].inc.binary_search(&pid).is_ok())
                .collect();
            if sub.len() == vset.len() || seen.iter().any(|s| *s == sub) {
                continue;
            }
            let m = self.face_measure(&sub, k - 1);
            if m > 0.0 {
                let pts: Vec<V> = sub.iter().map(|&vi| self.verts[vi as usize].p).collect();
                let h = linalg::dist_to_affine_hull(&centroid, &pts, d, 1e-10);
                total += h * m / k as f64;
            }
            seen.push(sub);
        }
        total
    }

    /// Tags of planes that carry a facet of positive area, i.e. the active
    /// constraints (box planes excluded).
    pub fn active_tags(&self) -> Vec<u32> {
        let (_, areas) = self.volume_and_plane_areas();
        let mut tags: Vec<u32> = self
            .planes
            .iter()
            .zip(areas.iter())
            .filter(|(p, &a)| a > 0.0 && p.tag != BOX_TAG)
            .map(|(p, _)| p.tag)
            .collect();
        tags.sort_unstable();
        tags.dedup();
        tags
    }
}

fn intersect_sorted(a: &Inc, b: &Inc) -> Inc {
    let mut out: Inc = SmallVec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn merge_sorted(dst: &mut Inc, src: &Inc) {
    for &x in src {
        if dst.binary_search(&x).is_err() {
            let pos = dst.partition_point(|&y| y < x);
            dst.insert(pos, x);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::vfrom;

    #[test]
    fn box_volume() {
        for d in 1..=5 {
            let mut cc = CellCutter::new(d);
            cc.reset_box(&linalg::vzero(), 1.5);
            let v = cc.volume();
            let expect = 3.0_f64.powi(d as i32);
            assert!((v - expect).abs() < 1e-9 * expect, "d={d} {v} vs {expect}");
        }
    }

    #[test]
    fn simplex_from_cuts() {
        // Cut the positive octant corner: x+y+z <= 1, x,y,z >= 0.
        let mut cc = CellCutter::new(3);
        cc.reset_box(&vfrom(&[0.5, 0.5, 0.5]), 0.5); // [0,1]^3
        let r = cc.clip(&vfrom(&[1.0, 1.0, 1.0]), 1.0, 7);
        assert_eq!(r, Cut::Cut);
        assert!((cc.volume() - 1.0 / 6.0).abs() < 1e-10);
        assert_eq!(cc.active_tags(), vec![7]);
    }

    #[test]
    fn cube_cell_from_cross_neighbors() {
        // Slopes p with p . (+-e_j) <= 1: the cube [-1,1]^n.
        for d in 2..=4 {
            let mut cc = CellCutter::new(d);
            cc.reset_box(&linalg::vzero(), 4.0);
            for axis in 0..d {
                for sgn in [1.0, -1.0] {
                    let mut a = linalg::vzero();
                    a[axis] = sgn;
                    cc.clip(&a, 1.0, axis as u32);
                }
            }
            let expect = 2.0_f64.powi(d as i32);
            assert!((cc.volume() - expect).abs() < 1e-9, "d={d}");
        }
    }

    #[test]
    fn degenerate_touching_plane_keeps_volume() {
        // Plane through a vertex of the cube, barely touching.
        let mut cc = CellCutter::new(3);
        cc.reset_box(&linalg::vzero(), 1.0);
        let r = cc.clip(&vfrom(&[1.0, 1.0, 1.0]), 3.0, 1);
        assert_eq!(r, Cut::Redundant);
        assert!((cc.volume() - 8.0).abs() < 1e-8);
        // Through the vertex, cutting the corner off exactly at the vertex:
        // volume unchanged up to tolerance.
        let r2 = cc.clip(&vfrom(&[1.0, 1.0, 1.0]), 2.9999999999, 2);
        let _ = r2;
        assert!((cc.volume() - 8.0).abs() < 1e-6);
    }

    #[test]
    fn empty_cut() {
        let mut cc = CellCutter::new(2);
        cc.reset_box(&linalg::vzero(), 1.0);
        assert_eq!(cc.clip(&vfrom(&[1.0, 0.0]), -2.0, 3), Cut::Empty);
        assert!(cc.is_empty());
        assert_eq!(cc.volume(), 0.0);
    }

    #[test]
    fn progressive_cuts_match_known_polyhedron() {
        // Tetrahedron x,y,z >= 0, x+y+z <= 2 then cut by z <= 1:
        // volume = 8/6 - 1/6 = 7/6.
        let mut cc = CellCutter::new(3);
        cc.reset_box(&vfrom(&[1.0, 1.0, 1.0]), 1.0); // [0,2]^3
        cc.clip(&vfrom(&[1.0, 1.0, 1.0]), 2.0, 0);
        assert!((cc.volume() - 8.0 / 6.0).abs() < 1e-9);
        cc.clip(&vfrom(&[0.0, 0.0, 1.0]), 1.0, 1);
        assert!((cc.volume() - 7.0 / 6.0).abs() < 1e-9);
    }

    #[test]
    fn areas_align_with_planes() {
        let mut cc = CellCutter::new(2);
        cc.reset_box(&linalg::vzero(), 1.0); // [-1,1]^2
        cc.clip(&vfrom(&[1.0, 0.0]), 0.0, 9); // left half
        let (vol, areas) = cc.volume_and_plane_areas();
        assert!((vol - 2.0).abs() < 1e-10);
        let pid = cc.planes().iter().position(|p| p.tag == 9).unwrap();
        assert!((areas[pid] - 2.0).abs() < 1e-10);
    }
}
