//! The hard-coded SD-RT(1) block operator, its Fourier symbol, and residual
//! application to mesh functions.
//!
//! The scheme on the N×N block grid reads du_eta/dt + (1/h) sum_zeta
//! L_zeta u_{eta+zeta} = 0 over the stencil S = {(0,0), (-1,0), (0,-1)},
//! with L_zeta = omega_x L^x_zeta + omega_y L^y_zeta.

use nalgebra::Matrix6;
use num_complex::Complex64;

use crate::error::Result;
use crate::mesh::{MeshFunction, Velocity};

/// Stencil offsets, in the fixed order (0,0), (-1,0), (0,-1).
pub const STENCIL: [(i64, i64); 3] = [(0, 0), (-1, 0), (0, -1)];

const ZERO6: [[i64; 6]; 6] = [[0; 6]; 6];

/// L^x_{(0,0)} transcribed entrywise.
pub const LX_INT: [[[i64; 6]; 6]; 3] = [
    [
        [3, 1, 1, 0, 0, 0],
        [-3, 1, -2, 0, 0, 0],
        [0, 1, 4, 0, 0, 0],
        [0, -1, -4, 3, 1, 1],
        [0, 2, 2, -3, 1, -2],
        [0, -4, -1, 0, 1, 4],
    ],
    [
        [0, 0, 0, 0, -1, -4],
        [0, 0, 0, 0, 2, 2],
        [0, 0, 0, 0, -4, -1],
        [0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0],
    ],
    ZERO6,
];

/// L^y matrices; equal to the L^x family conjugated by the index permutation
/// 2<->3, 4<->6 with the stencil offsets transposed.
pub const LY_INT: [[[i64; 6]; 6]; 3] = [
    [
        [3, 1, 1, 0, 0, 0],
        [0, 4, 1, 0, 0, 0],
        [-3, -2, 1, 0, 0, 0],
        [0, -1, -4, 4, 1, 0],
        [0, 2, 2, -2, 1, -3],
        [0, -4, -1, 1, 1, 3],
    ],
    ZERO6,
    [
        [0, 0, 0, -4, -1, 0],
        [0, 0, 0, -1, -4, 0],
        [0, 0, 0, 2, 2, 0],
        [0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0],
    ],
];

/// 0-based index permutation swapping solution points 2<->3 and 4<->6.
pub const XY_SWAP: [usize; 6] = [0, 2, 1, 5, 4, 3];

pub fn int_to_matrix(m: &[[i64; 6]; 6]) -> Matrix6<f64> {
    Matrix6::from_fn(|i, j| m[i][j] as f64)
}

/// The scheme stencil operator in split form (L^x, L^y per offset).
#[derive(Debug, Clone)]
pub struct StencilOperator {
    pub omega: Velocity,
    /// L^x_zeta, indexed along [`STENCIL`].
    pub lx: [Matrix6<f64>; 3],
    /// L^y_zeta, indexed along [`STENCIL`].
    pub ly: [Matrix6<f64>; 3],
    combined: [Matrix6<f64>; 3],
}

impl StencilOperator {
    pub fn from_parts(omega: Velocity, lx: [Matrix6<f64>; 3], ly: [Matrix6<f64>; 3]) -> Self {
        let combined = std::array::from_fn(|k| lx[k] * omega.x + ly[k] * omega.y);
        Self { omega, lx, ly, combined }
    }

    /// L_zeta = omega_x L^x_zeta + omega_y L^y_zeta.
    pub fn combined(&self, k: usize) -> &Matrix6<f64> {
        &self.combined[k]
    }

    /// L(0) = sum over the stencil of L_zeta.
    pub fn l_zero(&self) -> Matrix6<f64> {
        self.combined[0] + self.combined[1] + self.combined[2]
    }
}

/// The literal matrices of the scheme for omega in the closed first quadrant.
pub fn hardcoded_operator(omega: Velocity) -> Result<StencilOperator> {
    // Velocity construction already rejects other quadrants.
    let lx = std::array::from_fn(|k| int_to_matrix(&LX_INT[k]));
    let ly = std::array::from_fn(|k| int_to_matrix(&LY_INT[k]));
    Ok(StencilOperator::from_parts(omega, lx, ly))
}

/// w_eta = -(1/h) sum_zeta L_zeta u_{eta+zeta}: the semi-discrete time derivative.
pub fn apply_residual(op: &StencilOperator, u: &MeshFunction) -> MeshFunction {
    let geometry = u.geometry();
    let scale = -1.0 / geometry.h();
    let mut w = MeshFunction::zeros(geometry);
    for eta in geometry.blocks() {
        let mut acc = [0.0; 6];
        for (k, &(zx, zy)) in STENCIL.iter().enumerate() {
            let src = u.block((eta.0 + zx, eta.1 + zy));
            let m = &op.combined[k];
            for i in 0..6 {
                let mut s = 0.0;
                for j in 0..6 {
                    s += m[(i, j)] * src[j];
                }
                acc[i] += s;
            }
        }
        let out = w.block_mut(eta);
        for i in 0..6 {
            out[i] = scale * acc[i];
        }
    }
    w
}

/// Fourier symbol of the block operator at frequency phi.
#[derive(Debug, Clone)]
pub struct Symbol {
    pub phi: (f64, f64),
    pub matrix: Matrix6<Complex64>,
}

/// L(phi) = sum_zeta exp(i phi . zeta) L_zeta.
pub fn symbol(op: &StencilOperator, phi: (f64, f64)) -> Symbol {
    let mut m = Matrix6::<Complex64>::zeros();
    for (k, &(zx, zy)) in STENCIL.iter().enumerate() {
        let factor = Complex64::from_polar(1.0, phi.0 * zx as f64 + phi.1 * zy as f64);
        let l = &op.combined[k];
        for i in 0..6 {
            for j in 0..6 {
                m[(i, j)] += factor * l[(i, j)];
            }
        }
    }
    Symbol { phi, matrix: m }
}
