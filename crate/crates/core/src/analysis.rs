//! Exact rational verification of the algebraic structure of the scheme:
//! truncation vectors, the co-kernel of L(0), the S_L/S_R factorization, the
//! second-order criterion, and the modified-projection coefficient solve.

use nalgebra::Vector6;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::mesh::{Velocity, SOLUTION_POINT_OFFSETS_INT};
use crate::operator::{hardcoded_operator, LX_INT, LY_INT, STENCIL};
use crate::rational::{
    self, dot, from_int_matrix, left_nullspace, mat_add, mat_mul, mat_scale, mat_vec, rat,
    rat_int, Rat, RatMat, RatVec,
};

/// Exact transport velocity; both components nonnegative, not both zero.
#[derive(Debug, Clone, PartialEq)]
pub struct RatVelocity {
    pub x: Rat,
    pub y: Rat,
}

impl RatVelocity {
    pub fn new(x: Rat, y: Rat) -> Result<Self> {
        if x.is_negative() || y.is_negative() || (x.is_zero() && y.is_zero()) {
            return Err(Error::UnsupportedVelocity(0.0, 0.0));
        }
        Ok(Self { x, y })
    }

    pub fn from_ints(xn: i64, xd: i64, yn: i64, yd: i64) -> Self {
        Self::new(rat(xn, xd), rat(yn, yd)).expect("valid rational velocity")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MultiIndex {
    pub x: u32,
    pub y: u32,
}

impl MultiIndex {
    pub fn new(x: u32, y: u32) -> Self {
        Self { x, y }
    }

    pub fn order(&self) -> u32 {
        self.x + self.y
    }

    /// All multiindices with |m| = 2.
    pub fn second_order() -> [MultiIndex; 3] {
        [Self::new(2, 0), Self::new(1, 1), Self::new(0, 2)]
    }
}

/// x^a with integer base, exact.
fn int_pow(base: i64, exp: u32) -> Rat {
    rat_int(base).pow(exp as i32)
}

fn factorial(n: u32) -> Rat {
    rat_int((1..=n as i64).product::<i64>().max(1))
}

/// r^m / m! evaluated at an integer point.
fn mono_over_factorial(m: MultiIndex, p: (i64, i64)) -> Rat {
    int_pow(p.0, m.x) * int_pow(p.1, m.y) / (factorial(m.x) * factorial(m.y))
}

/// (omega . grad) r^m / m! evaluated at an integer point.
fn advected_mono(m: MultiIndex, omega: &RatVelocity, p: (i64, i64)) -> Rat {
    let mut v = Rat::zero();
    if m.x > 0 {
        v += &omega.x * int_pow(p.0, m.x - 1) * int_pow(p.1, m.y)
            / (factorial(m.x - 1) * factorial(m.y));
    }
    if m.y > 0 {
        v += &omega.y * int_pow(p.0, m.x) * int_pow(p.1, m.y - 1)
            / (factorial(m.x) * factorial(m.y - 1));
    }
    v
}

/// (Pi_1 phi)_zeta for a pointwise-evaluable exact function.
fn pi1_block(phi: impl Fn((i64, i64)) -> Rat, zeta: (i64, i64)) -> RatVec {
    SOLUTION_POINT_OFFSETS_INT
        .iter()
        .map(|&(ax, ay)| phi((zeta.0 + ax, zeta.1 + ay)))
        .collect()
}

/// L_zeta = omega_x L^x_zeta + omega_y L^y_zeta, exactly.
pub fn l_combined(omega: &RatVelocity) -> [RatMat; 3] {
    std::array::from_fn(|k| {
        mat_add(
            &mat_scale(&from_int_matrix(&LX_INT[k]), &omega.x),
            &mat_scale(&from_int_matrix(&LY_INT[k]), &omega.y),
        )
    })
}

/// L(0) = sum over the stencil of L_zeta, exactly.
pub fn l_zero(omega: &RatVelocity) -> RatMat {
    let [a, b, c] = l_combined(omega);
    mat_add(&mat_add(&a, &b), &c)
}

/// Coefficient of the m-th derivative in the truncation error, Eq. (6) style.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncationVector {
    pub m: MultiIndex,
    pub omega: RatVelocity,
    pub value: RatVec,
}

/// Truncation vector at a given block; the scheme is translation invariant,
/// so the result must not depend on the block (verified in tests).
pub fn truncation_vector_at_block(
    m: MultiIndex,
    omega: &RatVelocity,
    eta: (i64, i64),
) -> Result<TruncationVector> {
    if m.order() != 2 {
        return Err(Error::UnsupportedMultiindexOrder(m.order()));
    }
    Ok(TruncationVector {
        m,
        omega: omega.clone(),
        value: truncation_expression(m, omega, eta),
    })
}

pub fn truncation_vector(m: MultiIndex, omega: &RatVelocity) -> Result<TruncationVector> {
    truncation_vector_at_block(m, omega, (0, 0))
}

/// -(Pi_1 (omega . grad) r^m/m!)_eta + sum_zeta L_zeta (Pi_1 r^m/m!)_{eta+zeta};
/// well defined for any |m|.
fn truncation_expression(m: MultiIndex, omega: &RatVelocity, eta: (i64, i64)) -> RatVec {
    let ls = l_combined(omega);
    let mut f: RatVec = pi1_block(|p| -advected_mono(m, omega, p), eta);
    for (k, &(zx, zy)) in STENCIL.iter().enumerate() {
        let u = pi1_block(|p| mono_over_factorial(m, p), (eta.0 + zx, eta.1 + zy));
        for (fi, vi) in f.iter_mut().zip(mat_vec(&ls[k], &u)) {
            *fi += vi;
        }
    }
    f
}

/// Floating truncation vector, for irrational velocities.
pub fn truncation_vector_f64(m: MultiIndex, omega: Velocity) -> Vector6<f64> {
    assert_eq!(m.order(), 2);
    let op = hardcoded_operator(omega).expect("valid velocity");
    let mfac = (1..=m.x as u64).product::<u64>().max(1) as f64 * (1..=m.y as u64).product::<u64>().max(1) as f64;
    let mono = |p: (f64, f64)| p.0.powi(m.x as i32) * p.1.powi(m.y as i32) / mfac;
    let grad = |p: (f64, f64)| {
        let mut v = 0.0;
        if m.x > 0 {
            v += omega.x * m.x as f64 * p.0.powi(m.x as i32 - 1) * p.1.powi(m.y as i32) / mfac;
        }
        if m.y > 0 {
            v += omega.y * m.y as f64 * p.0.powi(m.x as i32) * p.1.powi(m.y as i32 - 1) / mfac;
        }
        v
    };
    let pt = |zeta: (i64, i64), xi: usize| {
        let (ax, ay) = SOLUTION_POINT_OFFSETS_INT[xi];
        ((zeta.0 + ax) as f64, (zeta.1 + ay) as f64)
    };
    let mut f = Vector6::from_fn(|xi, _| -grad(pt((0, 0), xi)));
    for (k, &zeta) in STENCIL.iter().enumerate() {
        let u = Vector6::from_fn(|xi, _| mono(pt(zeta, xi)));
        f += op.combined(k) * u;
    }
    f
}

/// True iff the truncation expression vanishes identically on 1, x, y.
pub fn exactness_check(omega: &RatVelocity) -> bool {
    [MultiIndex::new(0, 0), MultiIndex::new(1, 0), MultiIndex::new(0, 1)]
        .into_iter()
        .all(|m| truncation_expression(m, omega, (0, 0)).iter().all(Rat::is_zero))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CokernelRegime {
    /// omega_x, omega_y > 0: dimension 1.
    Interior,
    /// exactly one component vanishes: dimension 2.
    EdgeParallel,
}

#[derive(Debug, Clone)]
pub struct CokernelBasis {
    pub vectors: Vec<RatVec>,
    pub regime: CokernelRegime,
}

/// Exact basis of the left null space of L(0).
pub fn cokernel(omega: &RatVelocity) -> CokernelBasis {
    let regime = if omega.x.is_zero() || omega.y.is_zero() {
        CokernelRegime::EdgeParallel
    } else {
        CokernelRegime::Interior
    };
    CokernelBasis {
        vectors: left_nullspace(&l_zero(omega)),
        regime,
    }
}

pub const S_L: [[i64; 6]; 6] = [
    [3, 6, 6, 3, 0, 3],
    [1, 1, 1, 0, 0, 3],
    [1, 1, 1, 3, 0, 0],
    [2, 1, 2, 1, 0, 1],
    [5, 5, 5, 3, 0, 3],
    [1, 1, 1, 1, 1, 1],
];

pub const S_R: [[i64; 6]; 6] = [
    [1, 0, 0, 0, -1, 1],
    [0, 1, 0, 1, -1, 1],
    [0, 0, 1, 0, 0, 1],
    [0, 0, 0, 0, 0, 1],
    [0, 0, 0, 1, 0, 1],
    [0, 0, 0, 1, -1, 1],
];

/// -(1/9) S_L L(0) S_R against its closed lower-triangular form, exactly.
pub fn verify_slr_factorization(omega: &RatVelocity) -> bool {
    let sl = from_int_matrix(&S_L);
    let sr = from_int_matrix(&S_R);
    let product = mat_scale(&mat_mul(&mat_mul(&sl, &l_zero(omega)), &sr), &rat(-1, 9));

    let (wx, wy) = (&omega.x, &omega.y);
    let sum = wx + wy;
    let mut expect = rational::zeros(6, 6);
    expect[0][0] = sum.clone();
    expect[1][1] = sum.clone();
    expect[2][2] = sum;
    expect[3][0] = -wx / rat_int(3);
    expect[3][1] = wy / rat_int(3);
    expect[3][2] = -wx / rat_int(3);
    expect[3][3] = wx.clone();
    expect[4][3] = wx.clone();
    expect[4][4] = wy.clone();

    product == expect
}

/// Optimal order of accuracy by the image criterion: 2 iff every |m| = 2
/// truncation vector is orthogonal to the co-kernel of L(0), else 1.
pub fn order_criterion(omega: &RatVelocity) -> u32 {
    let basis = cokernel(omega);
    let second_order = MultiIndex::second_order().into_iter().all(|m| {
        let f = truncation_vector(m, omega).expect("|m| = 2").value;
        basis.vectors.iter().all(|v| dot(v, &f).is_zero())
    });
    if second_order {
        2
    } else {
        1
    }
}

/// Floating-point order criterion for irrational velocities.
///
/// The co-kernel is taken as the left singular directions of L(0) with
/// singular value below 1e-10 of the largest; orthogonality is tested with
/// tolerance 1e-10 |f^m| |v|.
pub fn order_criterion_float(omega: Velocity) -> u32 {
    let op = hardcoded_operator(omega).expect("valid velocity");
    let svd = op.l_zero().svd(true, false);
    let u = svd.u.as_ref().expect("requested U");
    let smax = svd.singular_values.max();
    let null_rows: Vec<Vector6<f64>> = (0..6)
        .filter(|&i| svd.singular_values[i] <= 1e-10 * smax)
        .map(|i| u.column(i).into_owned())
        .collect();
    let second_order = MultiIndex::second_order().into_iter().all(|m| {
        let f = truncation_vector_f64(m, omega);
        null_rows
            .iter()
            .all(|v| v.dot(&f).abs() <= 1e-10 * f.norm() * v.norm())
    });
    if second_order {
        2
    } else {
        1
    }
}

// ---------------------------------------------------------------------------
// Appendix-style modified projection coefficients.
// ---------------------------------------------------------------------------

/// Affine expression k + b B + c C + d D in the three undetermined
/// projection coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct LinExpr {
    pub k: Rat,
    pub b: Rat,
    pub c: Rat,
    pub d: Rat,
}

impl LinExpr {
    pub fn constant(k: Rat) -> Self {
        Self { k, b: Rat::zero(), c: Rat::zero(), d: Rat::zero() }
    }

    pub fn zero() -> Self {
        Self::constant(Rat::zero())
    }

    fn scaled(&self, s: &Rat) -> Self {
        Self { k: &self.k * s, b: &self.b * s, c: &self.c * s, d: &self.d * s }
    }

    fn add_assign(&mut self, other: &Self) {
        self.k += &other.k;
        self.b += &other.b;
        self.c += &other.c;
        self.d += &other.d;
    }

    pub fn is_zero(&self) -> bool {
        self.k.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    /// Render like computer-algebra output, e.g. "6b + 1".
    pub fn to_string_pretty(&self) -> String {
        let mut parts = Vec::new();
        for (coef, name) in [(&self.b, "b"), (&self.c, "c"), (&self.d, "d")] {
            if coef.is_zero() {
                continue;
            }
            if coef == &Rat::one() {
                parts.push(name.to_string());
            } else if coef == &(-Rat::one()) {
                parts.push(format!("-{name}"));
            } else {
                parts.push(format!("{coef}{name}"));
            }
        }
        if !self.k.is_zero() || parts.is_empty() {
            parts.push(format!("{}", self.k));
        }
        let mut out = String::new();
        for (i, p) in parts.iter().enumerate() {
            if i == 0 {
                out.push_str(p);
            } else if let Some(stripped) = p.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(stripped);
            } else {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
        out
    }
}

type LinVec = Vec<LinExpr>;

fn lin_from_ints(v: [i64; 6]) -> LinVec {
    v.into_iter().map(|x| LinExpr::constant(rat_int(x))).collect()
}

fn lin_add(a: &LinVec, b: &LinVec) -> LinVec {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let mut r = x.clone();
            r.add_assign(y);
            r
        })
        .collect()
}

fn lin_scale(a: &LinVec, s: &Rat) -> LinVec {
    a.iter().map(|x| x.scaled(s)).collect()
}

fn lin_sub(a: &LinVec, b: &LinVec) -> LinVec {
    lin_add(a, &lin_scale(b, &rat_int(-1)))
}

fn int_mat_lin_vec(m: &[[i64; 6]; 6], v: &LinVec) -> LinVec {
    (0..6)
        .map(|i| {
            let mut acc = LinExpr::zero();
            for j in 0..6 {
                if m[i][j] != 0 {
                    acc.add_assign(&v[j].scaled(&rat_int(m[i][j])));
                }
            }
            acc
        })
        .collect()
}

/// Entrywise product with a diagonal selector times a variable: used for the
/// correction masks of the modified projection.
fn mask_var(mask: [i64; 6], var: fn(&Rat) -> LinExpr, v: &LinVec) -> LinVec {
    mask.iter()
        .zip(v)
        .map(|(&sel, x)| {
            if sel == 0 {
                LinExpr::zero()
            } else {
                // only constant inputs are masked here; the products stay affine
                assert!(x.b.is_zero() && x.c.is_zero() && x.d.is_zero());
                var(&(&x.k * rat_int(sel)))
            }
        })
        .collect()
}

fn var_b(k: &Rat) -> LinExpr {
    LinExpr { k: Rat::zero(), b: k.clone(), c: Rat::zero(), d: Rat::zero() }
}

fn var_c(k: &Rat) -> LinExpr {
    LinExpr { k: Rat::zero(), b: Rat::zero(), c: k.clone(), d: Rat::zero() }
}

fn var_d(k: &Rat) -> LinExpr {
    LinExpr { k: Rat::zero(), b: Rat::zero(), c: Rat::zero(), d: k.clone() }
}

/// Symbolic truncation vectors (f^xx, f^xy, f^yy) of the omega = (1,0) scheme
/// in the sense of the modified projection with undetermined (b, c, d).
pub fn symbolic_truncation() -> (LinVec, LinVec, LinVec) {
    // Correction masks: the first-derivative corrections act on points
    // 3, 4, 5; the second-x-derivative correction on points 1, 4.
    const MX_MASK: [i64; 6] = [0, 0, 1, 1, 1, 0];
    const MY_MASK: [i64; 6] = [0, 0, 1, 1, 1, 0];
    const MXX_MASK: [i64; 6] = [1, 0, 0, 1, 0, 0];

    let e = lin_from_ints([1, 1, 1, 1, 1, 1]);
    let x = lin_from_ints([0, 1, 0, 0, 1, 1]);
    let y = lin_from_ints([0, 0, 1, 1, 1, 0]);
    let xy = lin_from_ints([0, 0, 0, 0, 1, 0]);
    let x2 = x.clone();
    let y2 = y.clone();

    // Modified point values at block 0: Mx carries the x-derivative
    // correction (coefficient c), My the y-derivative one (d), Mxx the second
    // x-derivative one (b).
    let xp = lin_add(&x, &mask_var(MX_MASK, var_c, &e));
    let yp = lin_add(&y, &mask_var(MY_MASK, var_d, &e));
    let x2p = lin_add(
        &x2,
        &lin_add(
            &mask_var(MX_MASK, var_c, &lin_scale(&x, &rat_int(2))),
            &mask_var(MXX_MASK, var_b, &lin_scale(&e, &rat_int(2))),
        ),
    );
    let xyp = lin_add(
        &xy,
        &lin_add(&mask_var(MX_MASK, var_c, &y), &mask_var(MY_MASK, var_d, &x)),
    );
    let y2p = lin_add(&y2, &mask_var(MY_MASK, var_d, &lin_scale(&y, &rat_int(2))));

    let l0 = &LX_INT[0];
    let lm = &LX_INT[1];

    // fxx = -2 xp + L0 x2p + Lm (x2p - 2 xp + e)
    let fxx = lin_add(
        &lin_add(&lin_scale(&xp, &rat_int(-2)), &int_mat_lin_vec(l0, &x2p)),
        &int_mat_lin_vec(lm, &lin_add(&lin_sub(&x2p, &lin_scale(&xp, &rat_int(2))), &e)),
    );
    // fxy = -yp + L0 xyp + Lm (xyp - yp)
    let fxy = lin_add(
        &lin_add(&lin_scale(&yp, &rat_int(-1)), &int_mat_lin_vec(l0, &xyp)),
        &int_mat_lin_vec(lm, &lin_sub(&xyp, &yp)),
    );
    // fyy = L0 y2p + Lm y2p
    let fyy = lin_add(&int_mat_lin_vec(l0, &y2p), &int_mat_lin_vec(lm, &y2p));
    (fxx, fxy, fyy)
}

/// Modified-projection coefficients of the 2-exactness construction.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionCoeffs {
    pub b: Rat,
    pub c: Rat,
    pub d: Rat,
}

/// Solve the symbolic system f^xx = f^xy = f^yy = 0 for (b, c, d).
pub fn solve_projection_coeffs() -> Result<ProjectionCoeffs> {
    let (fxx, fxy, fyy) = symbolic_truncation();
    let mut rows: RatMat = Vec::new();
    let mut rhs: RatVec = Vec::new();
    for expr in fxx.iter().chain(&fxy).chain(&fyy) {
        rows.push(vec![expr.b.clone(), expr.c.clone(), expr.d.clone()]);
        rhs.push(-expr.k.clone());
    }
    let sol = rational::solve_overdetermined(&rows, &rhs)
        .ok_or(Error::AppendixSystemDegenerate)?;
    Ok(ProjectionCoeffs {
        b: sol[0].clone(),
        c: sol[1].clone(),
        d: sol[2].clone(),
    })
}

/// Check 2-exactness of the omega = (1,0) scheme in the sense of the modified
/// projection with the solved coefficients, directly from its definition.
pub fn two_exactness_check() -> bool {
    let Ok(coeffs) = solve_projection_coeffs() else {
        return false;
    };
    let omega = RatVelocity::from_ints(1, 1, 0, 1);
    let ls = l_combined(&omega);

    // modified point values of x^a y^b at integer points, with exact
    // derivative corrections
    const C_XI: [i64; 6] = [0, 0, 1, 1, 1, 0];
    const D_XI: [i64; 6] = [1, 0, 0, 1, 0, 0];
    let mono = |a: u32, b: u32, p: (i64, i64)| int_pow(p.0, a) * int_pow(p.1, b);
    let deriv_x = |a: u32, b: u32, p: (i64, i64)| {
        if a == 0 { Rat::zero() } else { rat_int(a as i64) * int_pow(p.0, a - 1) * int_pow(p.1, b) }
    };
    let deriv_y = |a: u32, b: u32, p: (i64, i64)| {
        if b == 0 { Rat::zero() } else { rat_int(b as i64) * int_pow(p.0, a) * int_pow(p.1, b - 1) }
    };
    let deriv_xx = |a: u32, b: u32, p: (i64, i64)| {
        if a < 2 { Rat::zero() } else { rat_int((a * (a - 1)) as i64) * int_pow(p.0, a - 2) * int_pow(p.1, b) }
    };
    let modified = |a: u32, b: u32, zeta: (i64, i64)| -> RatVec {
        SOLUTION_POINT_OFFSETS_INT
            .iter()
            .enumerate()
            .map(|(xi, &(ax, ay))| {
                let p = (zeta.0 + ax, zeta.1 + ay);
                mono(a, b, p)
                    + rat_int(C_XI[xi]) * (&coeffs.c * deriv_x(a, b, p) + &coeffs.d * deriv_y(a, b, p))
                    + rat_int(D_XI[xi]) * &coeffs.b * deriv_xx(a, b, p)
            })
            .collect()
    };

    for eta in [(0i64, 0i64), (1, 0), (0, 1), (1, 1)] {
        for (a, b) in [(0u32, 0u32), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)] {
            // omega = (1,0): (omega . grad) x^a y^b = a x^{a-1} y^b
            let mut f: RatVec = if a == 0 {
                vec![Rat::zero(); 6]
            } else {
                modified(a - 1, b, eta)
                    .into_iter()
                    .map(|v| -rat_int(a as i64) * v)
                    .collect()
            };
            for (k, &(zx, zy)) in STENCIL.iter().enumerate() {
                let u = modified(a, b, (eta.0 + zx, eta.1 + zy));
                for (fi, vi) in f.iter_mut().zip(mat_vec(&ls[k], &u)) {
                    *fi += vi;
                }
            }
            if !f.iter().all(Rat::is_zero) {
                return false;
            }
        }
    }
    true
}

/// Deterministic strictly positive rational velocity samples.
pub fn sample_positive_velocities(seed: u64, count: usize) -> Vec<RatVelocity> {
    let mut state = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).max(1);
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    (0..count)
        .map(|_| {
            let xn = (next() % 19 + 1) as i64;
            let xd = (next() % 9 + 1) as i64;
            let yn = (next() % 19 + 1) as i64;
            let yd = (next() % 9 + 1) as i64;
            RatVelocity::from_ints(xn, xd, yn, yd)
        })
        .collect()
}
