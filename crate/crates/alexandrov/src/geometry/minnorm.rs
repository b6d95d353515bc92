//! Min-norm point in the convex hull of a finite point set (Wolfe's method).

use crate::linalg::{self, M, MAX_DIM, V};

/// Returns the point of minimal Euclidean norm in `conv(points)` and its
/// norm. An empty input yields the origin at infinite distance.
pub fn min_norm_point(points: &[V], d: usize) -> (V, f64) {
    if points.is_empty() {
        return (linalg::vzero(), f64::INFINITY);
    }
    let scale2 = points
        .iter()
        .map(|p| linalg::norm2(p, d))
        .fold(0.0_f64, f64::max)
        .max(1e-300);
    let tol = 1e-13 * scale2;

    // Start from the input point of smallest norm.
    let mut start = 0;
    for (i, p) in points.iter().enumerate() {
        if linalg::norm2(p, d) < linalg::norm2(&points[start], d) {
            start = i;
        }
    }
    let mut active: Vec<usize> = vec![start];
    let mut lambda: Vec<f64> = vec![1.0];
    let mut x = points[start];

    for _ in 0..200 {
        // Most violating support point.
        let mut j = 0;
        let mut best = f64::INFINITY;
        for (i, p) in points.iter().enumerate() {
            let v = linalg::dot(&x, p, d);
            if v < best {
                best = v;
                j = i;
            }
        }
        if best >= linalg::norm2(&x, d) - tol {
            break; // optimality: x . p >= |x|^2 for all p
        }
        if active.contains(&j) {
            break;
        }
        active.push(j);
        lambda.push(0.0);

        // Minor cycle: project onto aff(active), walking back into the hull.
        for _ in 0..64 {
            let mu = affine_min_norm_coeffs(points, &active, d);
            let Some(mu) = mu else { break };
            if mu.iter().all(|&m| m > 1e-12) {
                lambda = mu;
                break;
            }
            // Step from lambda toward mu until the first coefficient vanishes.
            let mut theta = 1.0_f64;
            for (l, m) in lambda.iter().zip(mu.iter()) {
                if *m <= 1e-12 && l - m > 0.0 {
                    theta = theta.min(l / (l - m));
                }
            }
            for (l, m) in lambda.iter_mut().zip(mu.iter()) {
                *l = (1.0 - theta) * *l + theta * m;
            }
            // Drop vanished members.
            let mut keep_active = Vec::new();
            let mut keep_lambda = Vec::new();
            for (&a, &l) in active.iter().zip(lambda.iter()) {
                if l > 1e-12 {
                    keep_active.push(a);
                    keep_lambda.push(l);
                }
            }
            if keep_active.is_empty() {
                keep_active.push(active[0]);
                keep_lambda.push(1.0);
            }
            active = keep_active;
            lambda = keep_lambda;
            if active.len() == 1 {
                lambda = vec![1.0];
                break;
            }
        }
        let total: f64 = lambda.iter().sum();
        x = linalg::vzero();
        for (&a, &l) in active.iter().zip(lambda.iter()) {
            linalg::axpy(&mut x, l / total, &points[a], d);
        }
    }
    let n = linalg::norm(&x, d);
    (x, n)
}

/// Coefficients of the min-norm point in the affine hull of the active set,
/// via the KKT system of `min |sum l_i p_i|^2, sum l_i = 1`.
fn affine_min_norm_coeffs(points: &[V], active: &[usize], d: usize) -> Option<Vec<f64>> {
    let k = active.len();
    if k == 1 {
        return Some(vec![1.0]);
    }
    if k + 1 > MAX_DIM {
        return None;
    }
    let mut m: M = [[0.0; MAX_DIM]; MAX_DIM];
    let scale2 = active
        .iter()
        .map(|&a| linalg::norm2(&points[a], d))
        .fold(0.0_f64, f64::max)
        .max(1e-300);
    for i in 0..k {
        for j in 0..k {
            m[i][j] = linalg::dot(&points[active[i]], &points[active[j]], d);
        }
        m[i][i] += 1e-13 * scale2; // ridge against affine dependence
        m[i][k] = 1.0;
        m[k][i] = 1.0;
    }
    let mut rhs = linalg::vzero();
    rhs[k] = 1.0;
    let sol = linalg::solve(&m, &rhs, k + 1, 1e-300)?;
    Some(sol[..k].to_vec())
}

/// Exhaustive reference: min-norm point by enumerating all affinely
/// independent subsets of size <= d+1. Exponential; test oracle only.
pub fn brute_force_min_norm(points: &[V], d: usize) -> f64 {
    let n = points.len();
    let mut best = points
        .iter()
        .map(|p| linalg::norm(p, d))
        .fold(f64::INFINITY, f64::min);
    let max_size = (d + 1).min(n);
    let mut subset: Vec<usize> = Vec::new();
    fn rec(
        points: &[V],
        d: usize,
        start: usize,
        subset: &mut Vec<usize>,
        max_size: usize,
        best: &mut f64,
    ) {
        if subset.len() >= 2 {
            if let Some(mu) = affine_min_norm_coeffs(points, subset, d) {
                if mu.iter().all(|&m| m >= -1e-10) {
                    let mut x = linalg::vzero();
                    let tot: f64 = mu.iter().sum();
                    for (&a, &l) in subset.iter().zip(mu.iter()) {
                        linalg::axpy(&mut x, l / tot, &points[a], d);
                    }
                    let nn = linalg::norm(&x, d);
                    if nn < *best {
                        *best = nn;
                    }
                }
            }
        }
        if subset.len() == max_size {
            return;
        }
        for i in start..points.len() {
            subset.push(i);
            rec(points, d, i + 1, subset, max_size, best);
            subset.pop();
        }
    }
    rec(points, d, 0, &mut subset, max_size, &mut best);
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::vfrom;

    #[test]
    fn single_point() {
        let (x, n) = min_norm_point(&[vfrom(&[3.0, 4.0])], 2);
        assert!((n - 5.0).abs() < 1e-12);
        assert!((x[0] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn segment_closest_point() {
        let pts = [vfrom(&[1.0, 1.0]), vfrom(&[1.0, -1.0])];
        let (x, n) = min_norm_point(&pts, 2);
        assert!((n - 1.0).abs() < 1e-10);
        assert!(x[1].abs() < 1e-10);
    }

    #[test]
    fn origin_inside_hull() {
        let pts = [
            vfrom(&[1.0, 0.0]),
            vfrom(&[-1.0, 0.5]),
            vfrom(&[-1.0, -0.5]),
        ];
        let (_, n) = min_norm_point(&pts, 2);
        assert!(n < 1e-6);
    }

    #[test]
    fn random_sets_match_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for d in 2..=4 {
            for _ in 0..40 {
                let m = rng.gen_range(2..8);
                let pts: Vec<_> = (0..m)
                    .map(|_| {
                        let mut p = linalg::vzero();
                        for x in p.iter_mut().take(d) {
                            *x = rng.gen_range(-1.0..2.0);
                        }
                        p
                    })
                    .collect();
                let (_, fast) = min_norm_point(&pts, d);
                let slow = brute_force_min_norm(&pts, d);
                assert!(
                    (fast - slow).abs() < 1e-7 * (1.0 + slow),
                    "d={d} fast={fast} slow={slow}"
                );
            }
        }
    }
}
