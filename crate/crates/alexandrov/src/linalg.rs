//! Small dense linear algebra on stack arrays for ambient dimensions up to
//! [`MAX_DIM`]. All routines take the active dimension at runtime; storage is
//! fixed-size so the hot paths never allocate.

/// Hard cap on any vector dimension handled by the crate (ambient n <= 6
/// plus one lift coordinate, rounded up).
pub const MAX_DIM: usize = 8;

/// Fixed-capacity vector; only the first `d` entries are meaningful.
pub type V = [f64; MAX_DIM];

/// Fixed-capacity square matrix, row major.
pub type M = [[f64; MAX_DIM]; MAX_DIM];

#[inline]
pub fn vzero() -> V {
    [0.0; MAX_DIM]
}

#[inline]
pub fn vfrom(s: &[f64]) -> V {
    let mut v = vzero();
    v[..s.len()].copy_from_slice(s);
    v
}

#[inline]
pub fn dot(a: &V, b: &V, d: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..d {
        s += a[i] * b[i];
    }
    s
}

#[inline]
pub fn sub(a: &V, b: &V, d: usize) -> V {
    let mut r = vzero();
    for i in 0..d {
        r[i] = a[i] - b[i];
    }
    r
}

#[inline]
pub fn add(a: &V, b: &V, d: usize) -> V {
    let mut r = vzero();
    for i in 0..d {
        r[i] = a[i] + b[i];
    }
    r
}

#[inline]
pub fn scale(a: &V, c: f64, d: usize) -> V {
    let mut r = vzero();
    for i in 0..d {
        r[i] = c * a[i];
    }
    r
}

#[inline]
pub fn axpy(y: &mut V, c: f64, x: &V, d: usize) {
    for i in 0..d {
        y[i] += c * x[i];
    }
}

#[inline]
pub fn norm2(a: &V, d: usize) -> f64 {
    dot(a, a, d)
}

#[inline]
pub fn norm(a: &V, d: usize) -> f64 {
    norm2(a, d).sqrt()
}

#[inline]
pub fn dist(a: &V, b: &V, d: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..d {
        let t = a[i] - b[i];
        s += t * t;
    }
    s.sqrt()
}

/// Normalize in place; returns the original norm (0 leaves the vector as is).
pub fn normalize(a: &mut V, d: usize) -> f64 {
    let n = norm(a, d);
    if n > 0.0 {
        for x in a.iter_mut().take(d) {
            *x /= n;
        }
    }
    n
}

/// Solve `A x = b` by partial-pivot Gaussian elimination. Returns `None` when
/// the pivot falls below `tol` times the largest row entry.
pub fn solve(a: &M, b: &V, d: usize, tol: f64) -> Option<V> {
    let mut m = *a;
    let mut r = *b;
    let mut perm = [0usize; MAX_DIM];
    for (i, p) in perm.iter_mut().enumerate().take(d) {
        *p = i;
    }
    for col in 0..d {
        let mut best = col;
        let mut bestv = m[perm[col]][col].abs();
        for row in col + 1..d {
            let v = m[perm[row]][col].abs();
            if v > bestv {
                best = row;
                bestv = v;
            }
        }
        if bestv <= tol {
            return None;
        }
        perm.swap(col, best);
        let prow = perm[col];
        for row in col + 1..d {
            let r_i = perm[row];
            let f = m[r_i][col] / m[prow][col];
            if f != 0.0 {
                for k in col..d {
                    m[r_i][k] -= f * m[prow][k];
                }
                r[r_i] -= f * r[prow];
            }
        }
    }
    let mut x = vzero();
    for col in (0..d).rev() {
        let prow = perm[col];
        let mut s = r[prow];
        for k in col + 1..d {
            s -= m[prow][k] * x[k];
        }
        x[col] = s / m[prow][col];
    }
    Some(x)
}

/// Determinant by partial-pivot elimination.
pub fn det(a: &M, d: usize) -> f64 {
    let mut m = *a;
    let mut sign = 1.0;
    let mut prod = 1.0;
    for col in 0..d {
        let mut best = col;
        let mut bestv = m[col][col].abs();
        for row in col + 1..d {
            let v = m[row][col].abs();
            if v > bestv {
                best = row;
                bestv = v;
            }
        }
        if bestv == 0.0 {
            return 0.0;
        }
        if best != col {
            m.swap(col, best);
            sign = -sign;
        }
        prod *= m[col][col];
        for row in col + 1..d {
            let f = m[row][col] / m[col][col];
            if f != 0.0 {
                for k in col..d {
                    m[row][k] -= f * m[col][k];
                }
            }
        }
    }
    sign * prod
}

/// Orthonormal basis of the span of `vecs` by modified Gram-Schmidt with
/// re-orthogonalization. Directions with residual below `tol` (relative to
/// the largest input norm) are dropped. Returns the basis and its rank.
pub fn orthonormal_basis(vecs: &[V], d: usize, tol: f64) -> (Vec<V>, usize) {
    let mut basis: Vec<V> = Vec::new();
    let scale_ref = vecs
        .iter()
        .map(|v| norm(v, d))
        .fold(0.0_f64, f64::max)
        .max(1e-300);
    for v in vecs {
        let mut w = *v;
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&w, b, d);
                axpy(&mut w, -c, b, d);
            }
        }
        if norm(&w, d) > tol * scale_ref {
            normalize(&mut w, d);
            basis.push(w);
        }
        if basis.len() == d {
            break;
        }
    }
    let rank = basis.len();
    (basis, rank)
}

/// Affine rank of a point set (dimension of its affine hull).
pub fn affine_rank(points: &[V], d: usize, tol: f64) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let origin = points[0];
    let dirs: Vec<V> = points[1..].iter().map(|p| sub(p, &origin, d)).collect();
    orthonormal_basis(&dirs, d, tol).1
}

/// Distance from `p` to the affine hull of `pts`.
pub fn dist_to_affine_hull(p: &V, pts: &[V], d: usize, tol: f64) -> f64 {
    if pts.is_empty() {
        return f64::INFINITY;
    }
    let origin = pts[0];
    let dirs: Vec<V> = pts[1..].iter().map(|q| sub(q, &origin, d)).collect();
    let (basis, _) = orthonormal_basis(&dirs, d, tol);
    let mut w = sub(p, &origin, d);
    for _ in 0..2 {
        for b in &basis {
            let c = dot(&w, b, d);
            axpy(&mut w, -c, b, d);
        }
    }
    norm(&w, d)
}
