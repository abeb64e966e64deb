//! Periodic right-triangular mesh geometry and block-indexed mesh functions.
//!
//! The unit square is split into N×N blocks of step h = 1/N; each block
//! carries two right triangles and six solution points. Points 1..3 are the
//! vertices (0,0), (1,0), (0,1)·h of the lower-left triangle, points 4..6
//! the vertices (0,1), (1,1), (1,0)·h of the upper-right one.

use crate::error::{Error, Result};

/// Offsets a_xi of the six solution points within a block, in units of h.
pub const SOLUTION_POINT_OFFSETS: [(f64, f64); 6] = [
    (0.0, 0.0),
    (1.0, 0.0),
    (0.0, 1.0),
    (0.0, 1.0),
    (1.0, 1.0),
    (1.0, 0.0),
];

/// Same offsets with integer coordinates, for exact arithmetic.
pub const SOLUTION_POINT_OFFSETS_INT: [(i64, i64); 6] = [(0, 0), (1, 0), (0, 1), (0, 1), (1, 1), (1, 0)];

/// Reduce a coordinate into [0, 1) for 1-periodic evaluation.
pub fn wrap_unit(x: f64) -> f64 {
    let r = x - x.floor();
    if r >= 1.0 {
        r - 1.0
    } else {
        r
    }
}

/// Geometry of the N×N periodic block grid with h = 1/N.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeshGeometry {
    n_blocks: usize,
}

impl MeshGeometry {
    pub fn new(n_blocks: usize) -> Self {
        assert!(n_blocks >= 2, "mesh requires at least 2 blocks per side");
        Self { n_blocks }
    }

    pub fn n_blocks(&self) -> usize {
        self.n_blocks
    }

    pub fn h(&self) -> f64 {
        1.0 / self.n_blocks as f64
    }

    /// Radius vector of solution point `xi` (0-based) in block `eta`.
    pub fn node(&self, eta: (i64, i64), xi: usize) -> (f64, f64) {
        let (ax, ay) = SOLUTION_POINT_OFFSETS[xi];
        let h = self.h();
        ((eta.0 as f64 + ax) * h, (eta.1 as f64 + ay) * h)
    }

    fn block_index(&self, eta: (i64, i64)) -> usize {
        let n = self.n_blocks as i64;
        let x = eta.0.rem_euclid(n) as usize;
        let y = eta.1.rem_euclid(n) as usize;
        y * self.n_blocks + x
    }

    pub fn blocks(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        let n = self.n_blocks as i64;
        (0..n).flat_map(move |y| (0..n).map(move |x| (x, y)))
    }
}

/// Block-indexed field with six real values per periodic cell.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshFunction {
    geometry: MeshGeometry,
    values: Vec<[f64; 6]>,
}

impl MeshFunction {
    pub fn zeros(geometry: MeshGeometry) -> Self {
        Self {
            geometry,
            values: vec![[0.0; 6]; geometry.n_blocks() * geometry.n_blocks()],
        }
    }

    pub fn geometry(&self) -> MeshGeometry {
        self.geometry
    }

    /// Block values, periodic in `eta`.
    pub fn block(&self, eta: (i64, i64)) -> &[f64; 6] {
        &self.values[self.geometry.block_index(eta)]
    }

    pub fn block_mut(&mut self, eta: (i64, i64)) -> &mut [f64; 6] {
        let i = self.geometry.block_index(eta);
        &mut self.values[i]
    }

    pub fn raw(&self) -> &[[f64; 6]] {
        &self.values
    }

    pub fn raw_mut(&mut self) -> &mut [[f64; 6]] {
        &mut self.values
    }

    /// self += s * other (same geometry).
    pub fn add_scaled(&mut self, s: f64, other: &MeshFunction) {
        assert_eq!(self.geometry, other.geometry);
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            for k in 0..6 {
                a[k] += s * b[k];
            }
        }
    }

    pub fn scale(&mut self, s: f64) {
        for a in &mut self.values {
            for v in a {
                *v *= s;
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|b| b.iter().all(|v| v.is_finite()))
    }

    /// Sum of all entries; the conserved linear functional up to a factor h².
    pub fn total_sum(&self) -> f64 {
        self.values.iter().map(|b| b.iter().sum::<f64>()).sum()
    }
}

/// Constant transport velocity restricted to the closed first quadrant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Velocity {
    pub x: f64,
    pub y: f64,
}

impl Velocity {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if x < 0.0 || y < 0.0 || x + y <= 0.0 || !x.is_finite() || !y.is_finite() {
            return Err(Error::UnsupportedVelocity(x, y));
        }
        Ok(Self { x, y })
    }

    /// omega = (cos phi, sin phi), phi in [0, pi/2].
    pub fn from_angle(phi: f64) -> Result<Self> {
        Self::new(phi.cos(), phi.sin())
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }
}

/// Lagrangian mapping: sample v at every solution point.
pub fn project_lagrange(v: impl Fn(f64, f64) -> f64, geometry: MeshGeometry) -> MeshFunction {
    let mut u = MeshFunction::zeros(geometry);
    for eta in geometry.blocks() {
        let b = u.block_mut(eta);
        for xi in 0..6 {
            let (x, y) = geometry.node(eta, xi);
            b[xi] = v(x, y);
        }
    }
    u
}

/// Modified projection: Lagrangian sampling plus the h-corrections that make
/// the scheme 2-exact for velocity parallel to the x-axis.
///
/// (result)_{eta,xi} = v + h c_xi (v_x/2 - v_y) - (h²/6) d_xi v_xx, all at the
/// solution point, with c_xi = 1 for xi in {3,4,5} (1-based) and d_xi = 1 for
/// xi in {1,4}.
pub fn project_modified(
    v: impl Fn(f64, f64) -> f64,
    dv_dx: impl Fn(f64, f64) -> f64,
    dv_dy: impl Fn(f64, f64) -> f64,
    d2v_dx2: impl Fn(f64, f64) -> f64,
    geometry: MeshGeometry,
) -> MeshFunction {
    const C_XI: [f64; 6] = [0.0, 0.0, 1.0, 1.0, 1.0, 0.0];
    const D_XI: [f64; 6] = [1.0, 0.0, 0.0, 1.0, 0.0, 0.0];
    let h = geometry.h();
    let mut u = MeshFunction::zeros(geometry);
    for eta in geometry.blocks() {
        let b = u.block_mut(eta);
        for xi in 0..6 {
            let (x, y) = geometry.node(eta, xi);
            b[xi] = v(x, y) + h * C_XI[xi] * (0.5 * dv_dx(x, y) - dv_dy(x, y))
                - h * h / 6.0 * D_XI[xi] * d2v_dx2(x, y);
        }
    }
    u
}

/// Block L2 norm: sqrt( sum_eta h² |f_eta|² ).
pub fn block_l2_norm(f: &MeshFunction) -> f64 {
    let h = f.geometry().h();
    let s: f64 = f.raw().iter().map(|b| b.iter().map(|v| v * v).sum::<f64>()).sum();
    (h * h * s).sqrt()
}

/// Max over all solution points of |u - v_exact(r - omega t)|.
///
/// The shifted argument is reduced mod 1 so long-time evaluation does not lose
/// accuracy to a large shift.
pub fn max_pointwise_error(
    u: &MeshFunction,
    v_exact: impl Fn(f64, f64) -> f64,
    t: f64,
    omega: Velocity,
) -> f64 {
    let geometry = u.geometry();
    let mut m: f64 = 0.0;
    for eta in geometry.blocks() {
        let b = u.block(eta);
        for xi in 0..6 {
            let (x, y) = geometry.node(eta, xi);
            let exact = v_exact(wrap_unit(x - omega.x * t), wrap_unit(y - omega.y * t));
            m = m.max((b[xi] - exact).abs());
        }
    }
    m
}

/// Block L2 norm of u - Pi_h v_exact(r - omega t).
pub fn block_l2_error(
    u: &MeshFunction,
    v_exact: impl Fn(f64, f64) -> f64,
    t: f64,
    omega: Velocity,
) -> f64 {
    let geometry = u.geometry();
    let mut s = 0.0;
    for eta in geometry.blocks() {
        let b = u.block(eta);
        for xi in 0..6 {
            let (x, y) = geometry.node(eta, xi);
            let exact = v_exact(wrap_unit(x - omega.x * t), wrap_unit(y - omega.y * t));
            let d = b[xi] - exact;
            s += d * d;
        }
    }
    let h = geometry.h();
    (h * h * s).sqrt()
}
