//! Eigenvalue stability verification of the Fourier symbol L(phi).
//!
//! For each transport direction omega = (cos xi, sin xi) and each frequency
//! pair phi on a grid, the scan records the minimal real part of the
//! eigenvalues of L(phi) and the condition number of the eigenvector matrix.
//! The scheme is stable with constant K when all real parts are nonnegative
//! and the condition numbers stay below K, since then
//! ||exp(-nu L(phi))|| <= cond(V) for all nu > 0.

use std::f64::consts::PI;
use std::io::Write as IoWrite;

use nalgebra::{Matrix6, Vector6};
use ndarray::Array2;
use ndarray_linalg::{Eig, Inverse, SVD};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mesh::Velocity;
use crate::operator::{hardcoded_operator, symbol, Symbol};

fn to_array(m: &Matrix6<Complex64>) -> Array2<Complex64> {
    Array2::from_shape_fn((6, 6), |(i, j)| m[(i, j)])
}

fn from_array(a: &Array2<Complex64>) -> Matrix6<Complex64> {
    Matrix6::from_fn(|i, j| a[(i, j)])
}

#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vector6<Complex64>,
    /// Eigenvectors as unit-Euclidean-norm columns, A V = V diag(values).
    pub vectors: Matrix6<Complex64>,
}

impl EigenDecomposition {
    pub fn min_re(&self) -> f64 {
        self.values.iter().map(|l| l.re).fold(f64::INFINITY, f64::min)
    }
}

/// Dense eigendecomposition of the symbol with a residual acceptance check.
pub fn eigen_decompose(sym: &Symbol) -> Result<EigenDecomposition> {
    eigen_decompose_at(sym, f64::NAN)
}

fn eigen_decompose_at(sym: &Symbol, xi: f64) -> Result<EigenDecomposition> {
    let fail = || Error::EigenFailure { xi, phi_x: sym.phi.0, phi_y: sym.phi.1 };
    let a = to_array(&sym.matrix);
    let (values, raw_vectors) = a.eig().map_err(|_| fail())?;
    let mut vectors = from_array(&raw_vectors);
    for j in 0..6 {
        let norm = vectors.column(j).norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(fail());
        }
        let inv = Complex64::new(1.0 / norm, 0.0);
        for i in 0..6 {
            vectors[(i, j)] *= inv;
        }
    }
    let values = Vector6::from_fn(|i, _| values[i]);
    let residual = sym.matrix * vectors
        - vectors * Matrix6::from_fn(|i, j| if i == j { values[i] } else { Complex64::ZERO });
    let scale = sym.matrix.norm().max(1.0);
    if residual.norm() > 1e-10 * scale {
        return Err(fail());
    }
    Ok(EigenDecomposition { values, vectors })
}

/// Singular values of a complex 6x6 matrix, descending.
fn singular_values(m: &Matrix6<Complex64>) -> Vec<f64> {
    let (_, s, _) = to_array(m).svd(false, false).expect("6x6 svd");
    s.to_vec()
}

/// Spectral condition number sigma_max / sigma_min; infinite when singular.
pub fn cond2(m: &Matrix6<Complex64>) -> f64 {
    let s = singular_values(m);
    let (max, min) = (s[0], s[s.len() - 1]);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Spectral (Euclidean operator) norm.
pub fn spectral_norm(m: &Matrix6<Complex64>) -> f64 {
    singular_values(m)[0]
}

/// Matrix exponential by scaling-and-squaring with a Taylor core.
pub fn matrix_exp(m: &Matrix6<Complex64>) -> Matrix6<Complex64> {
    let norm = m.norm();
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = m / Complex64::new(2f64.powi(squarings as i32), 0.0);
    let mut result = Matrix6::identity();
    let mut term = Matrix6::identity();
    for k in 1..=24 {
        term = term * scaled / Complex64::new(k as f64, 0.0);
        result += term;
    }
    for _ in 0..squarings {
        result = result * result;
    }
    result
}

/// Geometric grid 2^k, k = -10..=10, for the semigroup probe.
pub fn default_nu_grid() -> Vec<f64> {
    (-10..=10).map(|k| 2f64.powi(k)).collect()
}

/// max over nu of ||exp(-nu L(phi))|| for the hard-coded scheme at omega.
///
/// Uses eigen-reconstruction when the eigenvector matrix is well conditioned
/// and falls back to scaling-and-squaring otherwise.
pub fn semigroup_bound_probe(omega: Velocity, phi: (f64, f64), nu_list: &[f64]) -> Result<f64> {
    assert!(nu_list.iter().all(|&nu| nu > 0.0), "nu values must be positive");
    let op = hardcoded_operator(omega)?;
    let sym = symbol(&op, phi);
    let eig = eigen_decompose(&sym)?;
    let cond = cond2(&eig.vectors);
    let mut sup = 0.0_f64;
    if cond < 1e6 {
        let vinv = from_array(
            &to_array(&eig.vectors)
                .inv()
                .map_err(|_| Error::EigenFailure { xi: f64::NAN, phi_x: phi.0, phi_y: phi.1 })?,
        );
        for &nu in nu_list {
            let d = Matrix6::from_fn(|i, j| {
                if i == j {
                    (-Complex64::new(nu, 0.0) * eig.values[i]).exp()
                } else {
                    Complex64::ZERO
                }
            });
            sup = sup.max(spectral_norm(&(eig.vectors * d * vinv)));
        }
    } else {
        for &nu in nu_list {
            let scaled = sym.matrix.map(|v| -Complex64::new(nu, 0.0) * v);
            sup = sup.max(spectral_norm(&matrix_exp(&scaled)));
        }
    }
    Ok(sup)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ScanRecord {
    pub xi: f64,
    pub phi_x: f64,
    pub phi_y: f64,
    pub min_re_lambda: f64,
    pub cond: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilityReport {
    pub xi_step: f64,
    pub phi_step: f64,
    #[serde(skip)]
    pub records: Vec<ScanRecord>,
    pub samples: usize,
    pub min_re_lambda: f64,
    pub min_re_at: (f64, f64, f64),
    pub max_cond: f64,
    pub max_cond_at: (f64, f64, f64),
}

fn exact_divisions(range: f64, step: f64) -> Result<usize> {
    let ratio = range / step;
    let rounded = ratio.round();
    if step <= 0.0 || rounded < 1.0 || (ratio - rounded).abs() > 1e-9 {
        return Err(Error::InvalidScanStep { step, range });
    }
    Ok(rounded as usize)
}

/// Scan xi in [0, pi/2] (inclusive) and phi in [0, 2 pi)^2.
pub fn stability_scan(xi_step: f64, phi_step: f64) -> Result<StabilityReport> {
    let n_xi = exact_divisions(PI / 2.0, xi_step)? + 1;
    let n_phi = exact_divisions(2.0 * PI, phi_step)?;

    let rows: Vec<Vec<ScanRecord>> = (0..n_xi)
        .into_par_iter()
        .map(|ix| -> Result<Vec<ScanRecord>> {
            let xi = ix as f64 * xi_step;
            let omega = Velocity::new(xi.cos().max(0.0), xi.sin().max(0.0))?;
            let op = hardcoded_operator(omega)?;
            let mut out = Vec::with_capacity(n_phi * n_phi);
            for ipx in 0..n_phi {
                for ipy in 0..n_phi {
                    let phi = (ipx as f64 * phi_step, ipy as f64 * phi_step);
                    let sym = symbol(&op, phi);
                    let eig = eigen_decompose_at(&sym, xi)?;
                    out.push(ScanRecord {
                        xi,
                        phi_x: phi.0,
                        phi_y: phi.1,
                        min_re_lambda: eig.min_re(),
                        cond: cond2(&eig.vectors),
                    });
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    let records: Vec<ScanRecord> = rows.into_iter().flatten().collect();
    let worst_re = records
        .iter()
        .min_by(|a, b| a.min_re_lambda.total_cmp(&b.min_re_lambda))
        .expect("nonempty scan");
    let worst_cond = records
        .iter()
        .max_by(|a, b| a.cond.total_cmp(&b.cond))
        .expect("nonempty scan");
    Ok(StabilityReport {
        xi_step,
        phi_step,
        samples: records.len(),
        min_re_lambda: worst_re.min_re_lambda,
        min_re_at: (worst_re.xi, worst_re.phi_x, worst_re.phi_y),
        max_cond: worst_cond.cond,
        max_cond_at: (worst_cond.xi, worst_cond.phi_x, worst_cond.phi_y),
        records,
    })
}

/// CSV with one row per scan sample.
pub fn write_records_csv<W: IoWrite>(report: &StabilityReport, mut w: W) -> std::io::Result<()> {
    writeln!(w, "xi,phi_x,phi_y,min_re_lambda,cond")?;
    for r in &report.records {
        writeln!(w, "{},{},{},{},{}", r.xi, r.phi_x, r.phi_y, r.min_re_lambda, r.cond)?;
    }
    Ok(())
}

/// JSON with the grid parameters and aggregates only.
pub fn write_summary_json<W: IoWrite>(report: &StabilityReport, mut w: W) -> std::io::Result<()> {
    let text = serde_json::to_string_pretty(report).expect("report serializes");
    writeln!(w, "{text}")
}
