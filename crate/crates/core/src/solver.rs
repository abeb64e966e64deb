//! Method-of-lines time integration of the semi-discrete scheme with error
//! tracking against the exact transported solution.

use std::io::Write as IoWrite;

use crate::error::{Error, Result};
use crate::mesh::{block_l2_error, max_pointwise_error, MeshFunction, MeshGeometry, Velocity};
use crate::operator::{apply_residual, StencilOperator};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RkKind {
    Rk3,
    Rk4,
}

#[derive(Debug, Clone)]
pub struct TimeIntegrator {
    pub kind: RkKind,
    pub cfl: f64,
    pub op: StencilOperator,
    pub geometry: MeshGeometry,
}

impl TimeIntegrator {
    pub fn new(kind: RkKind, cfl: f64, op: StencilOperator, geometry: MeshGeometry) -> Self {
        assert!(cfl > 0.0, "CFL number must be positive");
        Self { kind, cfl, op, geometry }
    }

    /// Nominal step dt = cfl h / |omega|.
    pub fn dt(&self) -> f64 {
        let speed = self.op.omega.x.hypot(self.op.omega.y);
        self.cfl * self.geometry.h() / speed
    }
}

/// One explicit Runge-Kutta step for du/dt = apply_residual(u).
///
/// RK3 is the three-stage strong-stability-preserving scheme, RK4 the
/// classical four-stage scheme.
pub fn rk_step(integrator: &TimeIntegrator, u: &MeshFunction, dt: f64) -> MeshFunction {
    assert!(dt >= 0.0);
    let op = &integrator.op;
    match integrator.kind {
        RkKind::Rk3 => {
            let mut u1 = u.clone();
            u1.add_scaled(dt, &apply_residual(op, u));
            let mut u2 = u1.clone();
            u2.add_scaled(dt, &apply_residual(op, &u1));
            u2.scale(0.25);
            u2.add_scaled(0.75, u);
            let mut out = u2.clone();
            out.add_scaled(dt, &apply_residual(op, &u2));
            out.scale(2.0 / 3.0);
            out.add_scaled(1.0 / 3.0, u);
            out
        }
        RkKind::Rk4 => {
            let k1 = apply_residual(op, u);
            let mut s = u.clone();
            s.add_scaled(0.5 * dt, &k1);
            let k2 = apply_residual(op, &s);
            let mut s = u.clone();
            s.add_scaled(0.5 * dt, &k2);
            let k3 = apply_residual(op, &s);
            let mut s = u.clone();
            s.add_scaled(dt, &k3);
            let k4 = apply_residual(op, &s);
            let mut out = u.clone();
            out.add_scaled(dt / 6.0, &k1);
            out.add_scaled(dt / 3.0, &k2);
            out.add_scaled(dt / 3.0, &k3);
            out.add_scaled(dt / 6.0, &k4);
            out
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ErrorTrace {
    pub times: Vec<f64>,
    pub err_max: Vec<f64>,
    pub err_l2: Vec<f64>,
}

impl ErrorTrace {
    pub fn record(&mut self, t: f64, err_max: f64, err_l2: f64) {
        if let Some(&last) = self.times.last() {
            debug_assert!(t > last);
        }
        self.times.push(t);
        self.err_max.push(err_max);
        self.err_l2.push(err_l2);
    }

    pub fn final_errors(&self) -> (f64, f64) {
        let k = self.times.len() - 1;
        (self.err_max[k], self.err_l2[k])
    }
}

/// CSV columns: t, err_max, err_l2.
pub fn write_trace_csv<W: IoWrite>(trace: &ErrorTrace, mut w: W) -> std::io::Result<()> {
    writeln!(w, "t,err_max,err_l2")?;
    for i in 0..trace.times.len() {
        writeln!(w, "{},{},{}", trace.times[i], trace.err_max[i], trace.err_l2[i])?;
    }
    Ok(())
}

/// Advance u0 to t_max, recording both error norms against v(r - omega t) at
/// t = 0, at every multiple of sample_every and at the final time.
///
/// The last step is shortened so the final time is hit exactly.
pub fn integrate(
    integrator: &TimeIntegrator,
    u0: MeshFunction,
    t_max: f64,
    sample_every: f64,
    v_exact: impl Fn(f64, f64) -> f64,
) -> Result<(MeshFunction, ErrorTrace)> {
    let omega = integrator.op.omega;
    integrate_against(integrator, u0, t_max, sample_every, |u, t, trace| {
        trace.record(
            t,
            max_pointwise_error(u, &v_exact, t, omega),
            block_l2_error(u, &v_exact, t, omega),
        );
    })
}

/// Like [`integrate`], but with a caller-supplied error recorder; used when
/// the yardstick is not the plain Lagrangian projection of the exact solution
/// (for example the modified projection of the long-time analysis).
pub fn integrate_against(
    integrator: &TimeIntegrator,
    u0: MeshFunction,
    t_max: f64,
    sample_every: f64,
    mut record: impl FnMut(&MeshFunction, f64, &mut ErrorTrace),
) -> Result<(MeshFunction, ErrorTrace)> {
    assert!(t_max > 0.0 && sample_every > 0.0);
    let dt_nominal = integrator.dt();
    let mut trace = ErrorTrace::default();
    let mut u = u0;
    let mut t = 0.0;
    let mut next_sample = sample_every;
    record(&u, 0.0, &mut trace);
    let eps = 1e-12 * t_max;
    while t < t_max - eps {
        let dt = dt_nominal.min(t_max - t);
        u = rk_step(integrator, &u, dt);
        t += dt;
        if !u.is_finite() {
            return Err(Error::BlowUp(t));
        }
        if t >= next_sample - eps || t >= t_max - eps {
            record(&u, t, &mut trace);
            while next_sample <= t + eps {
                next_sample += sample_every;
            }
        }
    }
    Ok((u, trace))
}

/// First-order upwind finite-volume sanity path: one mean value per triangle.
pub mod first_order {
    use super::*;
    use crate::rt::fv0;

    #[derive(Debug, Clone)]
    pub struct CellField {
        pub geometry: MeshGeometry,
        /// (lower, upper) cell values per block, row-major over blocks.
        pub values: Vec<[f64; 2]>,
    }

    impl CellField {
        pub fn zeros(geometry: MeshGeometry) -> Self {
            let n = geometry.n_blocks();
            Self { geometry, values: vec![[0.0; 2]; n * n] }
        }

        fn idx(&self, eta: (i64, i64)) -> usize {
            let n = self.geometry.n_blocks() as i64;
            let x = eta.0.rem_euclid(n) as usize;
            let y = eta.1.rem_euclid(n) as usize;
            y * n as usize + x
        }

        pub fn get(&self, eta: (i64, i64)) -> [f64; 2] {
            self.values[self.idx(eta)]
        }
    }

    /// Cell centroids of block eta: lower at (eta + 1/3), upper at (eta + 2/3).
    pub fn centroid(geometry: MeshGeometry, eta: (i64, i64), cell: usize) -> (f64, f64) {
        let h = geometry.h();
        let off = if cell == 0 { 1.0 / 3.0 } else { 2.0 / 3.0 };
        ((eta.0 as f64 + off) * h, (eta.1 as f64 + off) * h)
    }

    pub fn project(v: impl Fn(f64, f64) -> f64, geometry: MeshGeometry) -> CellField {
        let mut f = CellField::zeros(geometry);
        for eta in geometry.blocks() {
            let i = f.idx(eta);
            for cell in 0..2 {
                let (x, y) = centroid(geometry, eta, cell);
                f.values[i][cell] = v(x, y);
            }
        }
        f
    }

    fn residual(mats: &[[[f64; 2]; 2]; 3], u: &CellField) -> CellField {
        let geometry = u.geometry;
        let scale = -1.0 / geometry.h();
        let mut w = CellField::zeros(geometry);
        for eta in geometry.blocks() {
            let mut acc = [0.0; 2];
            for (k, &(zx, zy)) in crate::operator::STENCIL.iter().enumerate() {
                let src = u.get((eta.0 + zx, eta.1 + zy));
                for i in 0..2 {
                    for j in 0..2 {
                        acc[i] += mats[k][i][j] * src[j];
                    }
                }
            }
            let i = w.idx(eta);
            for c in 0..2 {
                w.values[i][c] = scale * acc[c];
            }
        }
        w
    }

    fn axpy(y: &mut CellField, a: f64, x: &CellField) {
        for (yb, xb) in y.values.iter_mut().zip(&x.values) {
            yb[0] += a * xb[0];
            yb[1] += a * xb[1];
        }
    }

    fn scale(y: &mut CellField, a: f64) {
        for b in y.values.iter_mut() {
            b[0] *= a;
            b[1] *= a;
        }
    }

    /// Run the first-order scheme with SSP-RK3 from Pi(v) to t_max and return
    /// the final (max, L2) centroid errors against v(r - omega t).
    pub fn run(
        omega: Velocity,
        geometry: MeshGeometry,
        cfl: f64,
        t_max: f64,
        v: impl Fn(f64, f64) -> f64,
    ) -> Result<(f64, f64)> {
        use crate::mesh::wrap_unit;
        let mats = fv0::assemble(omega)?;
        let dt_nominal = cfl * geometry.h() / omega.x.hypot(omega.y);
        let mut u = project(&v, geometry);
        let mut t = 0.0;
        let eps = 1e-12 * t_max;
        while t < t_max - eps {
            let dt = dt_nominal.min(t_max - t);
            let mut u1 = u.clone();
            axpy(&mut u1, dt, &residual(&mats, &u));
            let mut u2 = u1.clone();
            axpy(&mut u2, dt, &residual(&mats, &u1));
            scale(&mut u2, 0.25);
            axpy(&mut u2, 0.75, &u);
            let mut un = u2.clone();
            axpy(&mut un, dt, &residual(&mats, &u2));
            scale(&mut un, 2.0 / 3.0);
            axpy(&mut un, 1.0 / 3.0, &u);
            u = un;
            t += dt;
            if u.values.iter().any(|b| !b[0].is_finite() || !b[1].is_finite()) {
                return Err(Error::BlowUp(t));
            }
        }
        let mut err_max = 0.0_f64;
        let mut s = 0.0;
        for eta in geometry.blocks() {
            let vals = u.get(eta);
            for cell in 0..2 {
                let (x, y) = centroid(geometry, eta, cell);
                let exact = v(wrap_unit(x - omega.x * t), wrap_unit(y - omega.y * t));
                let d = vals[cell] - exact;
                err_max = err_max.max(d.abs());
                s += d * d;
            }
        }
        let h = geometry.h();
        Ok((err_max, (0.5 * h * h * s).sqrt()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{block_l2_norm, project_lagrange};
    use crate::operator::hardcoded_operator;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn integrator(kind: RkKind, omega: Velocity, n: usize, cfl: f64) -> TimeIntegrator {
        let geometry = MeshGeometry::new(n);
        TimeIntegrator::new(kind, cfl, hardcoded_operator(omega).unwrap(), geometry)
    }

    #[test]
    fn constant_state_is_steady() {
        for kind in [RkKind::Rk3, RkKind::Rk4] {
            let integ = integrator(kind, Velocity::new(0.6, 0.8).unwrap(), 5, 0.1);
            let u = project_lagrange(|_, _| 3.5, integ.geometry);
            let next = rk_step(&integ, &u, integ.dt());
            for eta in integ.geometry.blocks() {
                for xi in 0..6 {
                    assert_relative_eq!(next.block(eta)[xi], 3.5, epsilon = 1e-13);
                }
            }
        }
    }

    #[test]
    fn zero_dt_is_identity() {
        let integ = integrator(RkKind::Rk4, Velocity::new(1.0, 0.0).unwrap(), 4, 0.1);
        let u = project_lagrange(|x, y| (2.0 * PI * (x + y)).sin(), integ.geometry);
        let next = rk_step(&integ, &u, 0.0);
        for eta in integ.geometry.blocks() {
            assert_eq!(next.block(eta), u.block(eta));
        }
    }

    #[test]
    fn linear_data_advects_exactly_one_step() {
        // v = x with omega = (1,0): the residual is the constant -1 at every
        // block whose left neighbor does not wrap, so one RK3 step gives
        // Pi(v(. - omega dt)) there to machine precision.
        let integ = integrator(RkKind::Rk3, Velocity::new(1.0, 0.0).unwrap(), 8, 0.1);
        let geometry = integ.geometry;
        let u = project_lagrange(|x, _| x, geometry);
        let dt = integ.dt();
        let next = rk_step(&integ, &u, dt);
        let expect = project_lagrange(|x, _| x - dt, geometry);
        for eta in geometry.blocks() {
            if eta.0 < 3 {
                continue; // seam contamination spreads one block per RK stage
            }
            for xi in 0..6 {
                assert_relative_eq!(next.block(eta)[xi], expect.block(eta)[xi], epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn steady_solution_stays_steady() {
        // v = y is steady under omega = (1,0); compare fields directly since
        // y itself is not 1-periodic and the error norms wrap coordinates
        let integ = integrator(RkKind::Rk3, Velocity::new(1.0, 0.0).unwrap(), 10, 0.1);
        let u0 = project_lagrange(|_, y| y, integ.geometry);
        let (u, _) = integrate(&integ, u0.clone(), 1.0, 0.5, |_, y| y).unwrap();
        for eta in integ.geometry.blocks() {
            for xi in 0..6 {
                assert!((u.block(eta)[xi] - u0.block(eta)[xi]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn constant_initial_data_gives_zero_trace() {
        let integ = integrator(RkKind::Rk4, Velocity::new(0.6, 0.8).unwrap(), 5, 0.1);
        let u0 = project_lagrange(|_, _| 2.0, integ.geometry);
        let (_, trace) = integrate(&integ, u0, 0.3, 0.1, |_, _| 2.0).unwrap();
        assert!(trace.times.len() >= 3);
        for (i, &t) in trace.times.iter().enumerate() {
            if i > 0 {
                assert!(t > trace.times[i - 1]);
            }
            assert!(trace.err_max[i] < 1e-13);
            assert!(trace.err_l2[i] < 1e-13);
        }
        assert_relative_eq!(*trace.times.last().unwrap(), 0.3, epsilon = 1e-12);
    }

    #[test]
    fn mean_is_conserved() {
        let omega = Velocity::new((PI / 8.0).cos(), (PI / 8.0).sin()).unwrap();
        let integ = integrator(RkKind::Rk3, omega, 10, 0.1);
        let v = |x: f64, y: f64| (2.0 * PI * (x + y)).sin() + 0.7;
        let u0 = project_lagrange(v, integ.geometry);
        let sum0 = u0.total_sum();
        let dofs: f64 = 6.0 * 10.0 * 10.0;
        let (u, _) = integrate(&integ, u0, 0.5, 0.5, v).unwrap();
        assert!((u.total_sum() - sum0).abs() <= 1e-12 * dofs.max(sum0.abs()));
    }

    #[test]
    fn norm_stays_bounded() {
        let omega = Velocity::new((PI / 8.0).cos(), (PI / 8.0).sin()).unwrap();
        let integ = integrator(RkKind::Rk3, omega, 10, 0.1);
        let v = |x: f64, y: f64| (2.0 * PI * (x + y)).sin();
        let u0 = project_lagrange(v, integ.geometry);
        let norm0 = block_l2_norm(&u0);
        let (u, _) = integrate(&integ, u0, 2.0, 0.5, v).unwrap();
        assert!(block_l2_norm(&u) <= 32.0 * norm0 * (1.0 + 1e-6));
    }

    #[test]
    fn second_order_error_drop_on_refinement() {
        let omega = Velocity::new((PI / 8.0).cos(), (PI / 8.0).sin()).unwrap();
        let v = |x: f64, y: f64| (2.0 * PI * (x + y)).sin();
        let mut errs = Vec::new();
        for n in [10, 20] {
            let integ = integrator(RkKind::Rk3, omega, n, 0.1);
            let u0 = project_lagrange(v, integ.geometry);
            let (_, trace) = integrate(&integ, u0, 0.1, 0.1, v).unwrap();
            errs.push(trace.final_errors().1);
        }
        let ratio = errs[0] / errs[1];
        assert!((3.0..=5.5).contains(&ratio), "refinement ratio {ratio}");
    }

    #[test]
    fn oversized_cfl_blows_up() {
        let integ = integrator(RkKind::Rk3, Velocity::new(1.0, 0.0).unwrap(), 10, 50.0);
        let u0 = project_lagrange(|x, y| (2.0 * PI * (x + y)).sin(), integ.geometry);
        let v = |x: f64, y: f64| (2.0 * PI * (x + y)).sin();
        match integrate(&integ, u0, 500.0, 50.0, v) {
            Err(Error::BlowUp(t)) => assert!(t > 0.0),
            other => panic!("expected blow-up, got {other:?}"),
        }
    }

    #[test]
    fn rk4_matches_rk3_to_time_order() {
        // halving dt changes the final error negligibly (time error tiny)
        let omega = Velocity::new((PI / 8.0).cos(), (PI / 8.0).sin()).unwrap();
        let v = |x: f64, y: f64| (2.0 * PI * (x + y)).sin();
        let mut finals = Vec::new();
        for cfl in [0.1, 0.05] {
            let integ = integrator(RkKind::Rk3, omega, 10, cfl);
            let u0 = project_lagrange(v, integ.geometry);
            let (_, trace) = integrate(&integ, u0, 0.1, 0.1, v).unwrap();
            finals.push(trace.final_errors().1);
        }
        assert!((finals[0] - finals[1]).abs() <= 0.01 * finals[1]);
    }

    #[test]
    fn trace_csv_format() {
        let mut trace = ErrorTrace::default();
        trace.record(0.0, 1.0, 0.5);
        trace.record(0.5, 0.9, 0.4);
        let mut buf = Vec::new();
        write_trace_csv(&trace, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "t,err_max,err_l2\n0,1,0.5\n0.5,0.9,0.4\n");
    }

    #[test]
    fn first_order_scheme_converges_at_order_one() {
        let omega = Velocity::new(1.0, 0.0).unwrap();
        let v = |x: f64, y: f64| (2.0 * PI * (x + y)).sin();
        let mut errs = Vec::new();
        for n in [16, 32] {
            let geometry = MeshGeometry::new(n);
            let (_, e2) = first_order::run(omega, geometry, 0.1, 0.2, v).unwrap();
            errs.push(e2);
        }
        let ratio = errs[0] / errs[1];
        assert!((1.5..=3.0).contains(&ratio), "refinement ratio {ratio}");
    }
}
