//! Central numeric tolerances and fixed search grids.
//!
//! Everything a run reports is pinned here so that reports can quote the
//! exact values in force.

/// Absolute tolerance for the radial quadrature behind `eval_w`.
pub const QUAD_TOL: f64 = 1e-10;

/// Default step for central-difference Hessians. Determinant error is
/// O(step^2) ~ 1e-6, far below the unit margin being certified.
pub const FD_STEP: f64 = 1e-3;

/// Default solver stopping tolerance on the max nodal update per sweep.
pub const SOLVER_TOL: f64 = 1e-8;

/// Hard cap on solver sweeps.
pub const SOLVER_SWEEP_CAP: usize = 100_000;

/// Relative tolerance used when matching a nodal cell volume to its target
/// inside one nodal solve.
pub const NODAL_MATCH_REL: f64 = 1e-10;

/// Positional tolerance for merging vertices inside the polytope clipper,
/// relative to the clip scale.
pub const CLIP_MERGE_REL: f64 = 1e-9;

/// Band around a cutting plane inside which a vertex is considered incident.
pub const CLIP_ON_REL: f64 = 1e-10;

/// Refusal threshold: below this separation margin the polytope is treated
/// as degenerate and no shrink factor is selected.
pub const EPSILON0_FLOOR: f64 = 1e-6;

/// Default flatness tolerance factor; the face-flatness gate is `FLATNESS_FACTOR * h^2`.
pub const FLATNESS_FACTOR: f64 = 10.0;

/// Default gradient-jump threshold for declaring a face singular.
pub const JUMP_THRESHOLD: f64 = 0.1;

/// Search grid for the barrier constant: 1, 1.25, ..., 50.
pub fn barrier_c_grid() -> Vec<f64> {
    (0..197).map(|i| 1.0 + 0.25 * i as f64).collect()
}

/// Search grid for the slab half-width: 0.05, 0.10, ..., 1.0.
pub fn barrier_rho_grid() -> Vec<f64> {
    (1..=20).map(|i| 0.05 * i as f64).collect()
}

/// Geometric grid for the shrink factor: 1, 1/2, 1/4, ...
pub fn epsilon0_grid() -> Vec<f64> {
    let mut g = Vec::new();
    let mut e = 1.0;
    while e >= EPSILON0_FLOOR {
        g.push(e);
        e *= 0.5;
    }
    g
}
