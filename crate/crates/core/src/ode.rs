//! Integrators for the two-component linear systems `v' = F(s, v)`.
//!
//! Both integrators march from `s0` through a monotone list of target
//! coordinates and land on each of them exactly.

use num_complex::Complex64;

use crate::error::{NftError, Result};
use crate::matrix::Column;

/// Step-size floor as a fraction of the integration span.
pub const STEP_FLOOR_FRACTION: f64 = 1e-9;

const MAX_STEPS: usize = 20_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Integrator {
    /// Adaptive Dormand–Prince 4(5).
    DormandPrince,
    /// Fixed-step classical RK4, with the step halved until a Richardson
    /// estimate meets the tolerance.
    Rk4Richardson,
}

#[derive(Clone, Copy, Debug)]
pub struct OdeOptions {
    /// Target accuracy of the solution over the whole span.
    pub tol: f64,
    pub integrator: Integrator,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            integrator: Integrator::DormandPrince,
        }
    }
}

fn axpy(v: &Column, h: f64, terms: &[(f64, &Column)]) -> Column {
    let mut out = *v;
    for (c, k) in terms {
        let w = h * c;
        out[0] += k[0] * w;
        out[1] += k[1] * w;
    }
    out
}

fn check_targets(s0: f64, targets: &[f64]) -> Result<f64> {
    let Some(&last) = targets.last() else {
        return Ok(0.0);
    };
    let dir = if last >= s0 { 1.0 } else { -1.0 };
    let mut prev = s0;
    for &t in targets {
        if (t - prev) * dir < 0.0 {
            return Err(NftError::Domain(
                "integration targets must be monotone in the direction of integration".to_string(),
            ));
        }
        prev = t;
    }
    Ok(dir)
}

/// Integrates `v' = f(s, v)` from `(s0, v0)` and returns `v` at each target.
pub fn integrate<F>(f: F, s0: f64, v0: Column, targets: &[f64], opts: &OdeOptions) -> Result<Vec<Column>>
where
    F: FnMut(f64, &Column) -> Result<Column>,
{
    match opts.integrator {
        Integrator::DormandPrince => dormand_prince(f, s0, v0, targets, opts.tol),
        Integrator::Rk4Richardson => rk4_richardson(f, s0, v0, targets, opts.tol),
    }
}

// Dormand–Prince 5(4) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// b − b̂ (fifth minus fourth order weights)
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Adaptive Dormand–Prince with per-step tolerance `tol / span`, measured
/// relative to `max(1, |v|)`.
pub fn dormand_prince<F>(mut f: F, s0: f64, v0: Column, targets: &[f64], tol: f64) -> Result<Vec<Column>>
where
    F: FnMut(f64, &Column) -> Result<Column>,
{
    let dir = check_targets(s0, targets)?;
    let mut out = Vec::with_capacity(targets.len());
    let Some(&s_end) = targets.last() else {
        return Ok(out);
    };
    let span = (s_end - s0).abs();
    let step_tol = tol / span.max(1.0);
    let floor = STEP_FLOOR_FRACTION * span.max(1.0);

    let mut s = s0;
    let mut v = v0;
    let mut k1 = f(s, &v)?;
    let mut h = (span / 100.0).clamp(floor * 10.0, 0.05);
    let mut steps = 0usize;

    for &target in targets {
        while (target - s) * dir > 0.0 {
            steps += 1;
            if steps > MAX_STEPS {
                return Err(NftError::Convergence(format!(
                    "step budget exhausted at s = {s:.6} before reaching {target:.6}"
                )));
            }
            let remaining = (target - s).abs();
            let last = h >= remaining;
            let hh = if last { remaining } else { h };
            let hs = hh * dir;

            let k2 = f(s + C2 * hs, &axpy(&v, hs, &[(A21, &k1)]))?;
            let k3 = f(s + C3 * hs, &axpy(&v, hs, &[(A31, &k1), (A32, &k2)]))?;
            let k4 = f(s + C4 * hs, &axpy(&v, hs, &[(A41, &k1), (A42, &k2), (A43, &k3)]))?;
            let k5 = f(
                s + C5 * hs,
                &axpy(&v, hs, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            )?;
            let k6 = f(
                s + hs,
                &axpy(&v, hs, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
            )?;
            let v_new = axpy(&v, hs, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
            let s_new = if last { target } else { s + hs };
            let k7 = f(s_new, &v_new)?;
            let err = axpy(
                &[Complex64::new(0.0, 0.0); 2],
                hs,
                &[(E1, &k1), (E3, &k3), (E4, &k4), (E5, &k5), (E6, &k6), (E7, &k7)],
            );
            let scale = 1.0f64.max(v[0].norm().max(v[1].norm())).max(v_new[0].norm().max(v_new[1].norm()));
            let err_norm = err[0].norm().max(err[1].norm()) / (step_tol * scale);

            if !err_norm.is_finite() || !v_new[0].is_finite() || !v_new[1].is_finite() {
                h = hh * 0.2;
            } else if err_norm <= 1.0 {
                s = s_new;
                v = v_new;
                k1 = k7;
                let grow = if err_norm == 0.0 { 5.0 } else { (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0) };
                // keep the untruncated step when the last one was cut short
                h = if last { h.max(hh * grow) } else { hh * grow };
                continue;
            } else {
                h = hh * (0.9 * err_norm.powf(-0.2)).clamp(0.1, 0.9);
            }
            if h < floor {
                return Err(NftError::Convergence(format!(
                    "step size fell below the floor {floor:.3e} at s = {s:.6}"
                )));
            }
        }
        out.push(v);
    }
    Ok(out)
}

fn rk4_pass<F>(f: &mut F, s0: f64, v0: Column, targets: &[f64], h_max: f64) -> Result<Vec<Column>>
where
    F: FnMut(f64, &Column) -> Result<Column>,
{
    let mut out = Vec::with_capacity(targets.len());
    let mut s = s0;
    let mut v = v0;
    for &target in targets {
        let dist = target - s;
        let n = (dist.abs() / h_max).ceil() as usize;
        if n > 0 {
            let h = dist / n as f64;
            for i in 0..n {
                let si = s + i as f64 * h;
                let s_next = if i + 1 == n { target } else { s + (i + 1) as f64 * h };
                let h = s_next - si;
                let k1 = f(si, &v)?;
                let k2 = f(si + 0.5 * h, &axpy(&v, h, &[(0.5, &k1)]))?;
                let k3 = f(si + 0.5 * h, &axpy(&v, h, &[(0.5, &k2)]))?;
                let k4 = f(s_next, &axpy(&v, h, &[(1.0, &k3)]))?;
                v = axpy(&v, h, &[(1.0 / 6.0, &k1), (1.0 / 3.0, &k2), (1.0 / 3.0, &k3), (1.0 / 6.0, &k4)]);
            }
        }
        s = target;
        out.push(v);
    }
    Ok(out)
}

/// Classical RK4 on a uniform mesh, refined until the Richardson estimate
/// `|v_{h/2} − v_h| / 15` drops below `tol`. Returns the extrapolated
/// values.
pub fn rk4_richardson<F>(mut f: F, s0: f64, v0: Column, targets: &[f64], tol: f64) -> Result<Vec<Column>>
where
    F: FnMut(f64, &Column) -> Result<Column>,
{
    check_targets(s0, targets)?;
    let Some(&s_end) = targets.last() else {
        return Ok(Vec::new());
    };
    let span = (s_end - s0).abs().max(1e-300);
    let floor = STEP_FLOOR_FRACTION * span.max(1.0);
    let mut h = (span / 64.0).min(0.05);
    let mut coarse = rk4_pass(&mut f, s0, v0, targets, h)?;
    loop {
        h *= 0.5;
        if h < floor || span / h > MAX_STEPS as f64 {
            return Err(NftError::Convergence(format!(
                "RK4 refinement reached step {h:.3e} without meeting tolerance {tol:.1e}"
            )));
        }
        let fine = rk4_pass(&mut f, s0, v0, targets, h)?;
        let mut est: f64 = 0.0;
        for (a, b) in fine.iter().zip(&coarse) {
            let scale = 1.0f64.max(a[0].norm().max(a[1].norm()));
            est = est.max(((a[0] - b[0]).norm().max((a[1] - b[1]).norm())) / (15.0 * scale));
        }
        if est <= tol {
            return Ok(fine
                .iter()
                .zip(&coarse)
                .map(|(a, b)| [a[0] + (a[0] - b[0]) / 15.0, a[1] + (a[1] - b[1]) / 15.0])
                .collect());
        }
        coarse = fine;
    }
}
