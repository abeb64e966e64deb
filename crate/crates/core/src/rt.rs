//! Local RT1 flux reconstruction on the two axis-aligned right-triangle
//! shapes, upwind Riemann fluxes, and derivation of the block stencil
//! matrices from first principles.
//!
//! The assembly here is an independent oracle for the hard-coded matrices in
//! [`crate::operator`]: it solves the 8x8 collocation system per triangle and
//! reads the divergence off at the solution points. It runs either in f64 or
//! in exact rational arithmetic.

use std::fmt::Debug;

use nalgebra::Matrix6;
use num::{BigInt, BigRational, One, Signed, Zero};

use crate::analysis::RatVelocity;
use crate::error::{Error, Result};
use crate::mesh::Velocity;
use crate::operator::{StencilOperator, STENCIL};
use crate::rational::RatMat;

/// Field scalar for the reconstruction: f64 or exact rationals.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + std::ops::Neg<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Div<Output = Self>
{
    fn from_int(n: i64) -> Self;

    fn ratio(n: i64, d: i64) -> Self {
        Self::from_int(n) / Self::from_int(d)
    }

    /// Exact sign for rationals; ordinary sign for floats.
    fn signum_int(&self) -> i8;

    /// Magnitude key for pivot selection; any nonzero value works for exact
    /// arithmetic.
    fn pivot_magnitude(&self) -> f64;

    /// Normalize a 2-vector to unit length when a square root exists in the
    /// field; otherwise scale to a primitive direction. The collocation
    /// conditions are invariant under positive scaling of the normal.
    fn normalize2(v: [Self; 2]) -> [Self; 2];
}

impl Scalar for f64 {
    fn from_int(n: i64) -> Self {
        n as f64
    }

    fn signum_int(&self) -> i8 {
        if *self > 0.0 {
            1
        } else if *self < 0.0 {
            -1
        } else {
            0
        }
    }

    fn pivot_magnitude(&self) -> f64 {
        self.abs()
    }

    fn normalize2(v: [Self; 2]) -> [Self; 2] {
        let n = v[0].hypot(v[1]);
        [v[0] / n, v[1] / n]
    }
}

impl Scalar for BigRational {
    fn from_int(n: i64) -> Self {
        BigRational::from(BigInt::from(n))
    }

    fn signum_int(&self) -> i8 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }

    fn pivot_magnitude(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            1.0
        }
    }

    fn normalize2(v: [Self; 2]) -> [Self; 2] {
        v
    }
}

pub type Point<S> = [S; 2];

fn dot2<S: Scalar>(a: &Point<S>, b: &Point<S>) -> S {
    a[0].clone() * b[0].clone() + a[1].clone() * b[1].clone()
}

fn sub2<S: Scalar>(a: &Point<S>, b: &Point<S>) -> Point<S> {
    [a[0].clone() - b[0].clone(), a[1].clone() - b[1].clone()]
}

/// Parameters of the two collocation points along each edge.
#[derive(Debug, Clone)]
pub struct EdgeRule<S> {
    pub t: [S; 2],
}

impl EdgeRule<f64> {
    /// Knots of the two-point Gauss-Legendre rule on (0, 1).
    pub fn gauss_legendre() -> Self {
        let s = 0.5 / 3.0_f64.sqrt();
        Self { t: [0.5 - s, 0.5 + s] }
    }

    /// Equally spaced interior points; for p = 1 any two distinct points fix
    /// the linear normal trace, so the assembled stencil is the same.
    pub fn equispaced() -> Self {
        Self { t: [1.0 / 3.0, 2.0 / 3.0] }
    }
}

impl<S: Scalar> EdgeRule<S> {
    pub fn thirds() -> Self {
        Self { t: [S::ratio(1, 3), S::ratio(2, 3)] }
    }
}

#[derive(Debug, Clone)]
pub struct EdgeGeom<S> {
    pub endpoints: [Point<S>; 2],
    /// Outward normal; unit length in f64, primitive direction in rationals.
    pub normal: Point<S>,
    pub points: [Point<S>; 2],
}

#[derive(Debug, Clone)]
pub struct TriangleGeom<S> {
    pub vertices: [Point<S>; 3],
    pub edges: [EdgeGeom<S>; 3],
    pub interior_point: Point<S>,
}

impl<S: Scalar> TriangleGeom<S> {
    pub fn new(vertices: [Point<S>; 3], rule: &EdgeRule<S>) -> Result<Self> {
        let ab = sub2(&vertices[1], &vertices[0]);
        let ac = sub2(&vertices[2], &vertices[0]);
        let area2 = ab[0].clone() * ac[1].clone() - ab[1].clone() * ac[0].clone();
        if area2.signum_int() == 0 {
            return Err(Error::DegenerateGeometry);
        }
        let third = S::ratio(1, 3);
        let interior_point = [
            (vertices[0][0].clone() + vertices[1][0].clone() + vertices[2][0].clone()) * third.clone(),
            (vertices[0][1].clone() + vertices[1][1].clone() + vertices[2][1].clone()) * third,
        ];
        let edges = std::array::from_fn(|k| {
            let a = vertices[k].clone();
            let b = vertices[(k + 1) % 3].clone();
            let opposite = &vertices[(k + 2) % 3];
            let d = sub2(&b, &a);
            let mut normal = [d[1].clone(), -d[0].clone()];
            let half = S::ratio(1, 2);
            let mid = [
                (a[0].clone() + b[0].clone()) * half.clone(),
                (a[1].clone() + b[1].clone()) * half,
            ];
            if dot2(&normal, &sub2(&mid, opposite)).signum_int() < 0 {
                normal = [-normal[0].clone(), -normal[1].clone()];
            }
            let normal = S::normalize2(normal);
            let points = std::array::from_fn(|j| {
                [
                    a[0].clone() + rule.t[j].clone() * d[0].clone(),
                    a[1].clone() + rule.t[j].clone() * d[1].clone(),
                ]
            });
            EdgeGeom { endpoints: [a, b], normal, points }
        });
        Ok(Self { vertices, edges, interior_point })
    }
}

/// Vector field in RT1 with coefficients ordered along the basis
/// (1,0), (x,0), (y,0), (0,1), (0,x), (0,y), (x²,xy), (xy,y²).
#[derive(Debug, Clone)]
pub struct RTElement<S> {
    pub coeffs: [S; 8],
}

impl<S: Scalar> RTElement<S> {
    pub fn evaluate(&self, p: &Point<S>) -> Point<S> {
        let c = &self.coeffs;
        let (x, y) = (p[0].clone(), p[1].clone());
        let fx = c[0].clone()
            + c[1].clone() * x.clone()
            + c[2].clone() * y.clone()
            + c[6].clone() * x.clone() * x.clone()
            + c[7].clone() * x.clone() * y.clone();
        let fy = c[3].clone()
            + c[4].clone() * x.clone()
            + c[5].clone() * y.clone()
            + c[6].clone() * x.clone() * y.clone()
            + c[7].clone() * y.clone() * y.clone();
        [fx, fy]
    }

    /// div f = c1 + c5 + 3 c6 x + 3 c7 y: an affine polynomial.
    pub fn divergence_at(&self, p: &Point<S>) -> S {
        let c = &self.coeffs;
        c[1].clone()
            + c[5].clone()
            + S::from_int(3) * c[6].clone() * p[0].clone()
            + S::from_int(3) * c[7].clone() * p[1].clone()
    }
}

/// div f at the three triangle vertices (div f is in P1, so these determine it).
pub fn divergence_at_vertices<S: Scalar>(f: &RTElement<S>, tri: &TriangleGeom<S>) -> [S; 3] {
    std::array::from_fn(|k| f.divergence_at(&tri.vertices[k]))
}

/// Row of the collocation matrix: basis fields dotted with a direction at a point.
fn basis_row<S: Scalar>(p: &Point<S>, n: &Point<S>) -> [S; 8] {
    let (x, y) = (p[0].clone(), p[1].clone());
    let (nx, ny) = (n[0].clone(), n[1].clone());
    [
        nx.clone(),
        nx.clone() * x.clone(),
        nx.clone() * y.clone(),
        ny.clone(),
        ny.clone() * x.clone(),
        ny.clone() * y.clone(),
        nx.clone() * x.clone() * x.clone() + ny.clone() * x.clone() * y.clone(),
        nx * x.clone() * y.clone() + ny * y.clone() * y,
    ]
}

/// The 8x8 matrix mapping RT1 coefficients to collocation condition values:
/// both components at the interior point, then the normal component at each
/// of the six edge points.
pub fn rt_basis_matrix<S: Scalar>(tri: &TriangleGeom<S>) -> [[S; 8]; 8] {
    let ex = [S::one(), S::zero()];
    let ey = [S::zero(), S::one()];
    let mut rows: Vec<[S; 8]> = Vec::with_capacity(8);
    rows.push(basis_row(&tri.interior_point, &ex));
    rows.push(basis_row(&tri.interior_point, &ey));
    for e in &tri.edges {
        for p in &e.points {
            rows.push(basis_row(p, &e.normal));
        }
    }
    rows.try_into().expect("eight rows")
}

/// Linear scalar function a + bx x + by y.
#[derive(Debug, Clone)]
pub struct LinearFn<S> {
    pub a: S,
    pub bx: S,
    pub by: S,
}

impl<S: Scalar> LinearFn<S> {
    pub fn zero() -> Self {
        Self { a: S::zero(), bx: S::zero(), by: S::zero() }
    }

    /// Fit through three non-collinear (point, value) pairs.
    pub fn fit(samples: [(Point<S>, S); 3]) -> Result<Self> {
        let mut m: Vec<[S; 4]> = samples
            .iter()
            .map(|(p, v)| [S::one(), p[0].clone(), p[1].clone(), v.clone()])
            .collect();
        let x = solve_in_place(&mut m).ok_or(Error::DegenerateGeometry)?;
        let [a, bx, by] = x.try_into().expect("three unknowns");
        Ok(Self { a, bx, by })
    }

    pub fn eval(&self, p: &Point<S>) -> S {
        self.a.clone() + self.bx.clone() * p[0].clone() + self.by.clone() * p[1].clone()
    }
}

/// Gaussian elimination on an augmented system of n rows and n+1 columns.
fn solve_in_place<S: Scalar, const W: usize>(rows: &mut Vec<[S; W]>) -> Option<Vec<S>> {
    let n = rows.len();
    debug_assert_eq!(W, n + 1);
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            rows[i][col]
                .pivot_magnitude()
                .total_cmp(&rows[j][col].pivot_magnitude())
        })?;
        if rows[pivot][col].pivot_magnitude() == 0.0 {
            return None;
        }
        rows.swap(col, pivot);
        for i in 0..n {
            if i == col {
                continue;
            }
            if rows[i][col].signum_int() == 0 && rows[i][col].pivot_magnitude() == 0.0 {
                continue;
            }
            let f = rows[i][col].clone() / rows[col][col].clone();
            for j in col..W {
                let t = f.clone() * rows[col][j].clone();
                rows[i][j] = rows[i][j].clone() - t;
            }
        }
    }
    Some((0..n).map(|i| rows[i][n].clone() / rows[i][i].clone()).collect())
}

/// Solve the collocation system for the RT1 flux of one triangle.
///
/// Interior conditions take the triangle's own trace; edge conditions take
/// the upwind trace: own side when omega . n >= 0, neighbor side otherwise.
pub fn reconstruct_flux<S: Scalar>(
    tri: &TriangleGeom<S>,
    u_own: &LinearFn<S>,
    u_neighbors: &[LinearFn<S>; 3],
    omega: &Point<S>,
) -> Result<RTElement<S>> {
    let m = rt_basis_matrix(tri);
    let mut aug: Vec<[S; 9]> = Vec::with_capacity(8);
    let push = |aug: &mut Vec<[S; 9]>, row: &[S; 8], rhs: S| {
        let mut r: [S; 9] = std::array::from_fn(|_| S::zero());
        for (dst, src) in r.iter_mut().zip(row.iter()) {
            *dst = src.clone();
        }
        r[8] = rhs;
        aug.push(r);
    };
    let uc = u_own.eval(&tri.interior_point);
    push(&mut aug, &m[0], omega[0].clone() * uc.clone());
    push(&mut aug, &m[1], omega[1].clone() * uc);
    for (k, e) in tri.edges.iter().enumerate() {
        let wn = dot2(omega, &e.normal);
        let trace = if wn.signum_int() >= 0 { u_own } else { &u_neighbors[k] };
        for (j, p) in e.points.iter().enumerate() {
            push(&mut aug, &m[2 + 2 * k + j], wn.clone() * trace.eval(p));
        }
    }
    let coeffs = solve_in_place(&mut aug).ok_or(Error::DegenerateGeometry)?;
    Ok(RTElement { coeffs: coeffs.try_into().expect("eight coefficients") })
}

// ---------------------------------------------------------------------------
// Block stencil assembly on the unit periodic cell.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TriKind {
    Lower,
    Upper,
}

/// Global dof points of a triangle in block `zeta`, with their 0-based
/// block-local indices: lower triangle carries points 1..3, upper 4..6.
fn tri_dofs(zeta: (i64, i64), kind: TriKind) -> [((i64, i64), usize); 3] {
    match kind {
        TriKind::Lower => [
            ((zeta.0, zeta.1), 0),
            ((zeta.0 + 1, zeta.1), 1),
            ((zeta.0, zeta.1 + 1), 2),
        ],
        TriKind::Upper => [
            ((zeta.0, zeta.1 + 1), 3),
            ((zeta.0 + 1, zeta.1 + 1), 4),
            ((zeta.0 + 1, zeta.1), 5),
        ],
    }
}

/// Neighbor triangle across each edge, for the edge ordering of `tri_dofs`
/// (edge k joins vertices k and k+1).
fn tri_neighbors(kind: TriKind) -> [((i64, i64), TriKind); 3] {
    match kind {
        // bottom, hypotenuse, left
        TriKind::Lower => [
            ((0, -1), TriKind::Upper),
            ((0, 0), TriKind::Upper),
            ((-1, 0), TriKind::Upper),
        ],
        // top, right, hypotenuse
        TriKind::Upper => [
            ((0, 1), TriKind::Lower),
            ((1, 0), TriKind::Lower),
            ((0, 0), TriKind::Lower),
        ],
    }
}

fn tri_geometry<S: Scalar>(zeta: (i64, i64), kind: TriKind, rule: &EdgeRule<S>) -> Result<TriangleGeom<S>> {
    let pts = tri_dofs(zeta, kind);
    let vertices = std::array::from_fn(|k| {
        let ((x, y), _) = pts[k];
        [S::from_int(x), S::from_int(y)]
    });
    TriangleGeom::new(vertices, rule)
}

/// Blocks that can physically couple into block (0,0): the stencil proper
/// plus the two downwind offsets that must assemble to zero.
const CANDIDATE_BLOCKS: [(i64, i64); 5] = [(0, 0), (-1, 0), (0, -1), (1, 0), (0, 1)];

/// Assemble the 6x6 matrices L_zeta of the scheme for a unit block (h = 1),
/// by probing unit dofs and reading divergences at the solution points.
///
/// Returns the matrices along [`STENCIL`]; a nonzero coupling outside the
/// stencil is a `StencilViolation`.
pub fn assemble_block_matrices<S: Scalar>(
    omega: &Point<S>,
    rule: &EdgeRule<S>,
) -> Result<[Vec<Vec<S>>; 3]> {
    let mut out: [Vec<Vec<S>>; 3] =
        std::array::from_fn(|_| vec![vec![S::zero(); 6]; 6]);

    for &src_block in &CANDIDATE_BLOCKS {
        for src_dof in 0..6 {
            // the probe mesh function: 1 at (src_block, src_dof), 0 elsewhere
            let value_at = |zeta: (i64, i64), local: usize| -> S {
                if zeta == src_block && local == src_dof {
                    S::one()
                } else {
                    S::zero()
                }
            };
            let linear_on = |zeta: (i64, i64), kind: TriKind| -> Result<LinearFn<S>> {
                let samples = tri_dofs(zeta, kind).map(|((x, y), local)| {
                    ([S::from_int(x), S::from_int(y)], value_at(zeta, local))
                });
                LinearFn::fit(samples)
            };

            let mut column = [S::zero(), S::zero(), S::zero(), S::zero(), S::zero(), S::zero()];
            for kind in [TriKind::Lower, TriKind::Upper] {
                let tri = tri_geometry((0, 0), kind, rule)?;
                let own = linear_on((0, 0), kind)?;
                let neighbors_spec = tri_neighbors(kind);
                let neighbors: [LinearFn<S>; 3] = [
                    linear_on(neighbors_spec[0].0, neighbors_spec[0].1)?,
                    linear_on(neighbors_spec[1].0, neighbors_spec[1].1)?,
                    linear_on(neighbors_spec[2].0, neighbors_spec[2].1)?,
                ];
                let flux = reconstruct_flux(&tri, &own, &neighbors, omega)?;
                let div = divergence_at_vertices(&flux, &tri);
                let base = if kind == TriKind::Lower { 0 } else { 3 };
                for k in 0..3 {
                    column[base + k] = div[k].clone();
                }
            }

            match STENCIL.iter().position(|&z| z == src_block) {
                Some(slot) => {
                    for row in 0..6 {
                        out[slot][row][src_dof] = column[row].clone();
                    }
                }
                None => {
                    if column.iter().any(|v| v.signum_int() != 0) {
                        return Err(Error::StencilViolation(src_block.0, src_block.1));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Exact rational assembly; bit-exact against the hard-coded matrices.
pub fn assemble_stencil_exact(omega: &RatVelocity) -> Result<[RatMat; 3]> {
    assemble_block_matrices(&[omega.x.clone(), omega.y.clone()], &EdgeRule::<BigRational>::thirds())
}

/// Floating assembly of the full split operator: L^x from omega = (1,0), L^y
/// from omega = (0,1), with linearity asserted at the requested velocity.
pub fn assemble_stencil(omega: Velocity) -> Result<StencilOperator> {
    let rule = EdgeRule::gauss_legendre();
    let to_matrices = |parts: [Vec<Vec<f64>>; 3]| -> [Matrix6<f64>; 3] {
        std::array::from_fn(|k| Matrix6::from_fn(|i, j| parts[k][i][j]))
    };
    let lx = to_matrices(assemble_block_matrices(&[1.0, 0.0], &rule)?);
    let ly = to_matrices(assemble_block_matrices(&[0.0, 1.0], &rule)?);
    let direct = to_matrices(assemble_block_matrices(&[omega.x, omega.y], &rule)?);
    for k in 0..3 {
        let combined = lx[k] * omega.x + ly[k] * omega.y;
        let err = (combined - direct[k]).norm();
        assert!(
            err < 1e-12 * (1.0 + omega.norm()),
            "assembled operator is not linear in omega (defect {err})"
        );
    }
    Ok(StencilOperator::from_parts(omega, lx, ly))
}

// ---------------------------------------------------------------------------
// RT0 sanity path: the basic upwind finite-volume scheme.
// ---------------------------------------------------------------------------

/// First-order finite-volume variant with one mean value per triangle
/// (lower, upper). Used as a cheap cross-check of the reconstruction
/// machinery; first-order convergence is expected for every velocity.
pub mod fv0 {
    use super::*;

    /// Per-stencil-offset 2x2 coupling of (lower, upper) cell means.
    pub fn assemble(omega: Velocity) -> Result<[[[f64; 2]; 2]; 3]> {
        let mut out = [[[0.0; 2]; 2]; 3];
        for &src_block in &CANDIDATE_BLOCKS {
            for src_cell in 0..2 {
                let value_at = |zeta: (i64, i64), cell: usize| -> f64 {
                    if zeta == src_block && cell == src_cell {
                        1.0
                    } else {
                        0.0
                    }
                };
                let mut column = [0.0; 2];
                for (ci, kind) in [TriKind::Lower, TriKind::Upper].into_iter().enumerate() {
                    let tri = tri_geometry::<f64>((0, 0), kind, &EdgeRule::equispaced())?;
                    let own = value_at((0, 0), kind as usize);
                    let neighbors = tri_neighbors(kind);
                    // RT0 flux (a + cx, b + cy): one normal condition per edge.
                    let mut rows: Vec<[f64; 4]> = Vec::with_capacity(3);
                    for (k, e) in tri.edges.iter().enumerate() {
                        let wn = e.normal[0] * omega.x + e.normal[1] * omega.y;
                        let (nb_block, nb_kind) = neighbors[k];
                        let trace = if wn >= 0.0 { own } else { value_at(nb_block, nb_kind as usize) };
                        let mid = [
                            0.5 * (e.endpoints[0][0] + e.endpoints[1][0]),
                            0.5 * (e.endpoints[0][1] + e.endpoints[1][1]),
                        ];
                        rows.push([
                            e.normal[0],
                            e.normal[1],
                            e.normal[0] * mid[0] + e.normal[1] * mid[1],
                            wn * trace,
                        ]);
                    }
                    let sol = solve_in_place(&mut rows).ok_or(Error::DegenerateGeometry)?;
                    column[ci] = 2.0 * sol[2]; // div (a + cx, b + cy) = 2c
                }
                match STENCIL.iter().position(|&z| z == src_block) {
                    Some(slot) => {
                        for row in 0..2 {
                            out[slot][row][src_cell] = column[row];
                        }
                    }
                    None => {
                        if column.iter().any(|&v| v.abs() > 1e-13) {
                            return Err(Error::StencilViolation(src_block.0, src_block.1));
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}
