//! Barrier functions: the radial solutions `W_n`, Pogorelov-type functions
//! flat along a k-dimensional subspace, finite-difference Hessian
//! determinants, and the slab calibration that certifies the determinant
//! bound numerically.

use crate::linalg::{self, M, MAX_DIM, V};
use crate::tol;
use crate::{Error, Result};
use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::{Arc, RwLock};

// 16-point Gauss-Legendre rule on [-1, 1].
const GL_X: [f64; 8] = [
    0.09501250983763744,
    0.2816035507792589,
    0.4580167776572274,
    0.6178762444026438,
    0.7554044083550030,
    0.8656312023878318,
    0.9445750230732326,
    0.9894009349916499,
];
const GL_W: [f64; 8] = [
    0.18945061045506850,
    0.18260341504492358,
    0.16915651939500254,
    0.14959598881657673,
    0.12462897125553387,
    0.09515851168249278,
    0.06225352393864789,
    0.027152459411754095,
];

fn gl16<F: Fn(f64) -> f64>(a: f64, b: f64, f: F) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut s = 0.0;
    for i in 0..8 {
        s += GL_W[i] * (f(mid + half * GL_X[i]) + f(mid - half * GL_X[i]));
    }
    s * half
}

/// Integrand of `W_n(r) - r^2/2`, i.e. `(1 + s^n)^(1/n) - s`. Integrating
/// the difference avoids cancellation at large radii.
#[inline]
fn w_diff_integrand(n: usize, s: f64) -> f64 {
    let nn = n as f64;
    if n == 1 {
        return 1.0;
    }
    if s > 1.0 {
        // s * ((1 + s^-n)^(1/n) - 1), in stable log form.
        s * (((1.0 / s.powf(nn)).ln_1p()) / nn).exp_m1()
    } else {
        (1.0 + s.powf(nn)).powf(1.0 / nn) - s
    }
}

const PANEL: f64 = 0.25;

struct WTable {
    n: usize,
    /// cum[i] = integral of the difference integrand over [0, i*PANEL].
    cum: Vec<f64>,
}

impl WTable {
    fn build(n: usize, r_max: f64) -> WTable {
        let panels = (r_max / PANEL).ceil() as usize + 2;
        let mut cum = Vec::with_capacity(panels + 1);
        cum.push(0.0);
        let mut acc = 0.0;
        let mut comp = 0.0; // Kahan carry
        for i in 0..panels {
            let a = i as f64 * PANEL;
            let b = a + PANEL;
            let piece = gl16(a, b, |s| w_diff_integrand(n, s));
            let y = piece - comp;
            let t = acc + y;
            comp = (t - acc) - y;
            acc = t;
            cum.push(acc);
        }
        WTable { n, cum }
    }

    fn r_max(&self) -> f64 {
        (self.cum.len() - 1) as f64 * PANEL
    }

    /// `W_n(r) - r^2/2`.
    fn diff(&self, r: f64) -> f64 {
        debug_assert!(r <= self.r_max());
        let i = (r / PANEL).floor() as usize;
        let i = i.min(self.cum.len() - 2);
        let a = i as f64 * PANEL;
        self.cum[i] + gl16(a, r, |s| w_diff_integrand(self.n, s))
    }
}

static W_CACHE: Lazy<RwLock<HashMap<usize, Arc<WTable>>>> =
    Lazy::new(|| RwLock::new(HashMap::new()));

fn w_table(n: usize, r_needed: f64) -> Arc<WTable> {
    {
        let map = W_CACHE.read().unwrap();
        if let Some(t) = map.get(&n) {
            if t.r_max() >= r_needed {
                return t.clone();
            }
        }
    }
    let mut map = W_CACHE.write().unwrap();
    if let Some(t) = map.get(&n) {
        if t.r_max() >= r_needed {
            return t.clone();
        }
    }
    let t = Arc::new(WTable::build(n, (r_needed * 2.0).max(16.0)));
    map.insert(n, t.clone());
    t
}

/// `W_n(r) = integral_0^r (1 + s^n)^(1/n) ds`, to absolute accuracy well
/// below [`tol::QUAD_TOL`].
pub fn eval_w(n: usize, r: f64) -> f64 {
    assert!(n >= 1, "eval_w needs n >= 1");
    assert!(r >= 0.0, "eval_w needs r >= 0");
    if r == 0.0 {
        return 0.0;
    }
    0.5 * r * r + w_table(n, r).diff(r)
}

/// Derivative `W_n'(r) = (1 + r^n)^(1/n)`.
pub fn eval_w_prime(n: usize, r: f64) -> f64 {
    let nn = n as f64;
    (1.0 + r.powf(nn)).powf(1.0 / nn)
}

/// Radial solution with its cached quadrature table and, for n >= 3, the
/// asymptotic constant estimate.
#[derive(Debug, Clone)]
pub struct RadialSolution {
    pub n: usize,
    pub c_estimate: Option<f64>,
}

impl RadialSolution {
    pub fn new(n: usize) -> Result<RadialSolution> {
        if n < 1 {
            return Err(Error::DimensionOutOfRange(n));
        }
        let c_estimate = if n >= 3 { asymptotic_constant(n).ok() } else { None };
        Ok(RadialSolution { n, c_estimate })
    }

    pub fn eval(&self, r: f64) -> f64 {
        eval_w(self.n, r)
    }
}

/// `W_n(r) - r^2/2` at r = 1e3, guarded by the two-radius stability check
/// `|diff(r) - diff(2r)| <= 10 r^(2-n)`. Only exists for n >= 3.
pub fn asymptotic_constant(n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::BarrierPrecondition(format!(
            "no asymptotic constant for n = {n}: the quadratic gap is unbounded"
        )));
    }
    let r = 1.0e3;
    let t = w_table(n, 2.0 * r);
    let c1 = t.diff(r);
    let c2 = t.diff(2.0 * r);
    let budget = 10.0 * r.powf(2.0 - n as f64);
    if (c1 - c2).abs() > budget {
        return Err(Error::NumericsCheckFailed(format!(
            "asymptotic constant unstable: |{c1} - {c2}| > {budget}"
        )));
    }
    Ok(c1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BarrierVariant {
    /// `C |x|^(2 - 2k/n) (1 + |y|^2)`.
    Power,
    /// `|x| + |x|^((n-k+1)/(k+1)) (1 + |y|^2)`; kinked across the flat set.
    Lipschitz,
}

/// Convex barrier flat along a k-dimensional affine subspace. Points are
/// recentered at `base_point` and rotated so the flat subspace becomes the
/// trailing `k` coordinates (the "y" part).
#[derive(Debug, Clone)]
pub struct PogorelovBarrier {
    pub n: usize,
    pub k: usize,
    pub constant: f64,
    pub rho: f64,
    /// Rows of the rotation: the first n-k rows span the x-directions, the
    /// last k rows span the flat (y) directions.
    pub rotation: Vec<V>,
    pub base_point: V,
    pub variant: BarrierVariant,
}

impl PogorelovBarrier {
    /// Axis-aligned barrier: x = leading n-k coordinates, base point 0.
    pub fn axis_aligned(
        n: usize,
        k: usize,
        constant: f64,
        rho: f64,
        variant: BarrierVariant,
    ) -> Result<PogorelovBarrier> {
        check_nk(n, k)?;
        let mut rotation = Vec::new();
        for i in 0..n {
            let mut row = linalg::vzero();
            row[i] = 1.0;
            rotation.push(row);
        }
        Ok(PogorelovBarrier {
            n,
            k,
            constant,
            rho,
            rotation,
            base_point: linalg::vzero(),
            variant,
        })
    }

    /// Barrier whose flat subspace is `base_point + span(flat_dirs)`.
    pub fn for_flat(
        n: usize,
        constant: f64,
        rho: f64,
        variant: BarrierVariant,
        base_point: &V,
        flat_dirs: &[V],
    ) -> Result<PogorelovBarrier> {
        let k = flat_dirs.len();
        check_nk(n, k)?;
        let (ybasis, yrank) = linalg::orthonormal_basis(flat_dirs, n, 1e-10);
        if yrank != k {
            return Err(Error::BarrierPrecondition(
                "flat directions are linearly dependent".into(),
            ));
        }
        let mut xbasis: Vec<V> = Vec::new();
        for axis in 0..n {
            let mut e = linalg::vzero();
            e[axis] = 1.0;
            for _ in 0..2 {
                for b in ybasis.iter().chain(xbasis.iter()) {
                    let c = linalg::dot(&e, b, n);
                    linalg::axpy(&mut e, -c, b, n);
                }
            }
            if linalg::norm(&e, n) > 1e-8 {
                linalg::normalize(&mut e, n);
                xbasis.push(e);
            }
            if xbasis.len() == n - k {
                break;
            }
        }
        if xbasis.len() != n - k {
            return Err(Error::BarrierPrecondition("could not complete frame".into()));
        }
        let mut rotation = xbasis;
        rotation.extend(ybasis);
        Ok(PogorelovBarrier {
            n,
            k,
            constant,
            rho,
            rotation,
            base_point: *base_point,
            variant,
        })
    }

    pub fn power_exponent(&self) -> f64 {
        2.0 - 2.0 * self.k as f64 / self.n as f64
    }

    pub fn lipschitz_exponent(&self) -> f64 {
        (self.n - self.k + 1) as f64 / (self.k + 1) as f64
    }

    /// Split a point into (|x|, |y|) after recentering and rotating.
    pub fn split(&self, p: &V) -> (f64, f64) {
        let n = self.n;
        let d = linalg::sub(p, &self.base_point, n);
        let mut x2 = 0.0;
        let mut y2 = 0.0;
        for (i, row) in self.rotation.iter().enumerate() {
            let c = linalg::dot(&d, row, n);
            if i < n - self.k {
                x2 += c * c;
            } else {
                y2 += c * c;
            }
        }
        (x2.sqrt(), y2.sqrt())
    }

    /// Evaluate; errors outside the slab `|y| < rho`.
    pub fn eval(&self, p: &V) -> Result<f64> {
        let (rx, ry) = self.split(p);
        if ry >= self.rho {
            return Err(Error::OutsideSlab);
        }
        Ok(self.eval_unchecked(rx, ry))
    }

    /// Evaluate from the split radii without the slab guard.
    pub fn eval_unchecked(&self, rx: f64, ry: f64) -> f64 {
        match self.variant {
            BarrierVariant::Power => {
                if rx == 0.0 {
                    return 0.0;
                }
                self.constant * rx.powf(self.power_exponent()) * (1.0 + ry * ry)
            }
            BarrierVariant::Lipschitz => {
                if rx == 0.0 {
                    return 0.0;
                }
                rx + rx.powf(self.lipschitz_exponent()) * (1.0 + ry * ry)
            }
        }
    }
}

fn check_nk(n: usize, k: usize) -> Result<()> {
    if !(3..=5).contains(&n) {
        return Err(Error::BarrierPrecondition(format!(
            "barriers need 3 <= n <= 5, got n = {n}"
        )));
    }
    if k < 1 || 2 * k >= n {
        return Err(Error::BarrierPrecondition(format!(
            "flat dimension must satisfy 1 <= k < n/2, got k = {k} with n = {n}"
        )));
    }
    Ok(())
}

/// Determinant of the central-difference Hessian of `f` at `p`. The field
/// returns `None` where it is undefined; any such stencil point aborts.
/// The caller keeps `p` well away from singular sets of `f`.
pub fn hessian_det_fd<F>(f: F, p: &V, dim: usize, step: f64) -> Result<f64>
where
    F: Fn(&V) -> Option<f64>,
{
    let mut h: M = [[0.0; MAX_DIM]; MAX_DIM];
    let fp = f(p).ok_or(Error::StencilExitsDomain)?;
    for i in 0..dim {
        let mut pp = *p;
        pp[i] += step;
        let fpi = f(&pp).ok_or(Error::StencilExitsDomain)?;
        pp[i] -= 2.0 * step;
        let fmi = f(&pp).ok_or(Error::StencilExitsDomain)?;
        h[i][i] = (fpi - 2.0 * fp + fmi) / (step * step);
        for j in i + 1..dim {
            let mut q = *p;
            q[i] += step;
            q[j] += step;
            let fpp = f(&q).ok_or(Error::StencilExitsDomain)?;
            q[j] -= 2.0 * step;
            let fpm = f(&q).ok_or(Error::StencilExitsDomain)?;
            q[i] -= 2.0 * step;
            let fmm = f(&q).ok_or(Error::StencilExitsDomain)?;
            q[j] += 2.0 * step;
            let fmp = f(&q).ok_or(Error::StencilExitsDomain)?;
            let v = (fpp - fpm - fmp + fmm) / (4.0 * step * step);
            h[i][j] = v;
            h[j][i] = v;
        }
    }
    Ok(linalg::det(&h, dim))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CalibrationSample {
    pub point: Vec<f64>,
    pub det: f64,
}

/// Certificate that the finite-difference determinant of the power barrier
/// stays >= 1 at every sampled point of the slab for the returned `(C, rho)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Calibration {
    pub n: usize,
    pub k: usize,
    pub c: f64,
    pub rho: f64,
    pub min_det: f64,
    pub samples: Vec<CalibrationSample>,
}

/// Grid search for the smallest constant and the largest slab half-width
/// such that the finite-difference determinant of the power barrier stays
/// >= 1 on the sampled region `1e-2 < |x| < 2`, `|y| <= 0.9 rho`.
///
/// The determinant scales as `C^n` at fixed geometry, so base determinants
/// are sampled once with C = 1 and rescaled across the C grid.
pub fn calibrate_pogorelov(n: usize, k: usize, sample_density: usize) -> Result<Calibration> {
    check_nk(n, k)?;
    let density = sample_density.max(8);
    let c_grid = tol::barrier_c_grid();
    let rho_grid = tol::barrier_rho_grid();

    let base = PogorelovBarrier::axis_aligned(n, k, 1.0, f64::INFINITY, BarrierVariant::Power)?;
    let sample_for = |rho: f64| -> Vec<(V, f64)> {
        let mut pts = Vec::new();
        let rx_min: f64 = 1.0e-2;
        let rx_max: f64 = 2.0;
        for i in 0..density {
            let t = i as f64 / (density - 1) as f64;
            let rx = rx_min * (rx_max / rx_min).powf(t);
            for j in 0..density {
                let ry = 0.9 * rho * j as f64 / (density - 1) as f64;
                let mut p = linalg::vzero();
                p[0] = rx;
                p[n - k] = ry;
                pts.push((p, rx));
            }
        }
        pts
    };

    // (c, rho, base dets) with smallest c, then largest rho.
    let mut best: Option<(f64, f64, Vec<(V, f64)>)> = None;
    for &rho in rho_grid.iter() {
        let pts = sample_for(rho);
        let mut dets = Vec::with_capacity(pts.len());
        let mut min_det = f64::INFINITY;
        let mut ok = true;
        for (p, rx) in &pts {
            let step = tol::FD_STEP.min(rx / 50.0).min(0.02 * rho);
            let field = |q: &V| -> Option<f64> {
                let (qx, qy) = base.split(q);
                if qy >= rho {
                    return None;
                }
                Some(base.eval_unchecked(qx, qy))
            };
            match hessian_det_fd(field, p, n, step) {
                Ok(d) if d > 0.0 => {
                    min_det = min_det.min(d);
                    dets.push((*p, d));
                }
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        let needed = (1.0 / min_det).powf(1.0 / n as f64);
        let Some(&c) = c_grid.iter().find(|&&c| c >= needed) else {
            continue;
        };
        match &best {
            None => best = Some((c, rho, dets)),
            Some((bc, brho, _)) => {
                if c < *bc || (c == *bc && rho > *brho) {
                    best = Some((c, rho, dets));
                }
            }
        }
    }
    let Some((c, rho, dets)) = best else {
        return Err(Error::CalibrationFailed { n, k });
    };
    let cn = c.powi(n as i32);
    let samples: Vec<CalibrationSample> = dets
        .iter()
        .map(|(p, d)| CalibrationSample {
            point: p[..n].to_vec(),
            det: cn * d,
        })
        .collect();
    let min_det = samples.iter().map(|s| s.det).fold(f64::INFINITY, f64::min);
    if min_det < 1.0 {
        return Err(Error::CalibrationFailed { n, k });
    }
    Ok(Calibration {
        n,
        k,
        c,
        rho,
        min_det,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn w_closed_forms() {
        // n = 1: W(r) = r + r^2/2, so W(2) = 4.
        assert!((eval_w(1, 2.0) - 4.0).abs() < 1e-12);
        for n in 1..=5 {
            assert_eq!(eval_w(n, 0.0), 0.0);
        }
        // n = 2 closed form: (r sqrt(1+r^2) + asinh r)/2.
        for r in [0.25_f64, 1.0, 3.5, 10.0] {
            let exact = 0.5 * (r * (1.0 + r * r).sqrt() + r.asinh());
            assert!(
                (eval_w(2, r) - exact).abs() < crate::tol::QUAD_TOL,
                "r = {r}"
            );
        }
        let exact1 = 0.5 * (2.0_f64.sqrt() + 1.0_f64.asinh());
        assert!((eval_w(2, 1.0) - exact1).abs() < 1e-12);
        assert!((exact1 - 1.147793).abs() < 1e-6);
    }

    #[test]
    fn w_dominates_distance_and_is_convex() {
        for n in 1..=5 {
            let mut prev_deriv = 0.0;
            for i in 0..200 {
                let r = i as f64 * 0.05;
                let w = eval_w(n, r);
                assert!(w >= r - 1e-12, "W_{n}({r}) = {w} < r");
                if i >= 2 {
                    let a = eval_w(n, r - 0.1);
                    let m = eval_w(n, r - 0.05);
                    assert!(m <= 0.5 * (a + w) + 1e-12);
                }
                let d = eval_w_prime(n, r);
                assert!(d >= prev_deriv - 1e-12);
                prev_deriv = d;
            }
        }
    }

    #[test]
    fn quadratic_gap_increases_to_constant() {
        // W_n(r) - r^2/2 increases concavely toward the asymptotic constant
        // for n >= 3 (its derivative (1+s^n)^(1/n) - s is positive and
        // decreasing).
        for n in 3..=5 {
            let mut prev = -1.0;
            let mut prev_inc = f64::INFINITY;
            for i in 1..100 {
                let r = 1.0 + i as f64 * 0.5;
                let gap = eval_w(n, r) - 0.5 * r * r;
                let inc = gap - prev;
                assert!(gap >= prev - 1e-12);
                if i > 1 {
                    assert!(inc <= prev_inc + 1e-12);
                }
                prev = gap;
                prev_inc = inc;
            }
            let c = asymptotic_constant(n).unwrap();
            assert!(c > 0.0 && prev <= c + 1e-9);
        }
    }

    #[test]
    fn asymptotic_constant_stability() {
        let c3 = asymptotic_constant(3).unwrap();
        let c4 = asymptotic_constant(4).unwrap();
        assert!(c3 > 0.0 && c4 > 0.0);
        // Stable to ~4 significant digits between the two probe radii: the
        // tail is (1/n) integral of s^(1-n), about 1.7e-4 for n = 3.
        let t = super::w_table(3, 2000.0);
        assert!((t.diff(1000.0) - t.diff(2000.0)).abs() < 2.5e-4);
        let t4 = super::w_table(4, 2000.0);
        assert!((t4.diff(1000.0) - t4.diff(2000.0)).abs() < 1e-6);
        assert!(asymptotic_constant(2).is_err());
    }

    #[test]
    fn pogorelov_examples() {
        let b = PogorelovBarrier::axis_aligned(3, 1, 1.0, 0.5, BarrierVariant::Power).unwrap();
        assert!((b.power_exponent() - 4.0 / 3.0).abs() < 1e-15);
        let p = linalg::vfrom(&[1.0, 0.0, 0.0]);
        assert!((b.eval(&p).unwrap() - 1.0).abs() < 1e-15);
        // On the flat subspace the value is exactly zero.
        let q = linalg::vfrom(&[0.0, 0.0, 0.4]);
        assert_eq!(b.eval(&q).unwrap(), 0.0);
        let s = linalg::vfrom(&[1.0, 0.0, 0.6]);
        assert!(matches!(b.eval(&s), Err(Error::OutsideSlab)));

        let l = PogorelovBarrier::axis_aligned(3, 1, 1.0, 1.5, BarrierVariant::Lipschitz).unwrap();
        assert!((l.lipschitz_exponent() - 1.5).abs() < 1e-15);
        let p = linalg::vfrom(&[1.0, 0.0, 1.0]);
        assert!((l.eval(&p).unwrap() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn lipschitz_slope_jump() {
        // One-sided derivative in the +-x direction tends to +-1.
        let l = PogorelovBarrier::axis_aligned(3, 1, 1.0, 1.0, BarrierVariant::Lipschitz).unwrap();
        let off = 1e-4;
        let vp = l.eval(&linalg::vfrom(&[off, 0.0, 0.0])).unwrap();
        let vm = l.eval(&linalg::vfrom(&[-off, 0.0, 0.0])).unwrap();
        // The correction term contributes off^(1/2) = 1e-2 exactly.
        assert!((vp / off - 1.0).abs() <= 1e-2 + 1e-12);
        assert!((vm / off - 1.0).abs() <= 1e-2 + 1e-12);
    }

    #[test]
    fn pogorelov_midpoint_convexity_in_slab() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        // Slab half-widths inside the region where the Hessian stays positive
        // semidefinite for each (n, k).
        for (n, k, rho) in [(3usize, 1usize, 0.3), (5, 2, 0.15)] {
            for variant in [BarrierVariant::Power, BarrierVariant::Lipschitz] {
                let b = PogorelovBarrier::axis_aligned(n, k, 2.0, rho, variant).unwrap();
                for _ in 0..200 {
                    let mut p = linalg::vzero();
                    let mut q = linalg::vzero();
                    for i in 0..n {
                        p[i] = rng.gen_range(-1.0..1.0);
                        q[i] = rng.gen_range(-1.0..1.0);
                    }
                    for i in n - k..n {
                        p[i] *= 0.65 * rho;
                        q[i] *= 0.65 * rho;
                    }
                    let mid = linalg::scale(&linalg::add(&p, &q, n), 0.5, n);
                    let v = 0.5 * (b.eval(&p).unwrap() + b.eval(&q).unwrap());
                    assert!(b.eval(&mid).unwrap() <= v + 1e-10);
                }
            }
        }
    }

    #[test]
    fn fd_hessian_oracles() {
        let quad = |p: &V| Some(0.5 * linalg::norm2(p, 3));
        let d = hessian_det_fd(quad, &linalg::vfrom(&[0.3, -0.2, 0.9]), 3, 1e-3).unwrap();
        assert!((d - 1.0).abs() < 1e-6);
        let aff = |p: &V| Some(1.0 + 2.0 * p[0] - p[2]);
        let d = hessian_det_fd(aff, &linalg::vfrom(&[0.3, -0.2, 0.9]), 3, 1e-3).unwrap();
        assert!(d.abs() < 1e-6);
        // Radial identity: det = (W'/r)^(n-1) W'' = 1 exactly for W_3.
        let w3 = |p: &V| Some(eval_w(3, linalg::norm(p, 3)));
        let d = hessian_det_fd(w3, &linalg::vfrom(&[2.0, 0.0, 0.0]), 3, 1e-3).unwrap();
        assert!((d - 1.0).abs() < 1e-4, "det {d}");
        let partial = |p: &V| if p[0] > 0.0 { Some(p[0]) } else { None };
        assert!(matches!(
            hessian_det_fd(partial, &linalg::vfrom(&[1e-9, 0.0, 0.0]), 3, 1e-3),
            Err(Error::StencilExitsDomain)
        ));
    }

    #[test]
    fn calibration_3_1() {
        let cal = calibrate_pogorelov(3, 1, 12).unwrap();
        assert!(cal.min_det >= 1.0);
        assert!(cal.c >= 1.0 && cal.rho >= 0.05);
        assert!(cal.samples.iter().all(|s| s.det >= 1.0));
    }

    #[test]
    fn calibration_rejects_bad_k() {
        assert!(matches!(
            calibrate_pogorelov(3, 2, 8),
            Err(Error::BarrierPrecondition(_))
        ));
    }
}
