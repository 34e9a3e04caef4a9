//! Spectral functions `a, b` (from `X(0,k)`), `A, B` (from `T(0,k)`) and
//! their combinations `c = bA − aB`, `d = a·conj(A(k̄)) + b·conj(B(k̄))`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::data::{BoundaryData, HalfLineData, InitialData};
use crate::eigen::{reconstruct_from_hat, solve_eigenfunction, solve_matrix, EigenfunctionKind, Family, SolveOptions};
use crate::error::{NftError, Result};
use crate::jet::Jet;
use crate::matrix::Column;
use crate::quadrature::{cumulative, uniform_grid};
use crate::region::{self, SpectralPoint};

/// Below this modulus the hatted route is used.
pub const DEFAULT_SWITCH_RADIUS: f64 = 1.0;
/// Smallest real `|k|` admitted on the unhatted route.
pub const DEFAULT_K_MIN: f64 = 0.05;
/// Where `d(0)` is sampled.
pub const D_ZERO_PROBE: f64 = 1e-3;
/// Cells per unit length for the explicit coefficient integrals.
const SCALAR_CELLS_PER_UNIT: f64 = 200.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    Direct,
    Hatted,
}

impl Route {
    pub fn name(&self) -> &'static str {
        match self {
            Route::Direct => "direct",
            Route::Hatted => "hatted",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SpectralOptions {
    pub solve: SolveOptions,
    pub switch_radius: f64,
    pub k_min: f64,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        Self {
            solve: SolveOptions::default(),
            switch_radius: DEFAULT_SWITCH_RADIUS,
            k_min: DEFAULT_K_MIN,
        }
    }
}

impl SpectralOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            solve: SolveOptions::with_tol(tol),
            ..Self::default()
        }
    }

    pub fn route(&self, k: Complex64) -> Result<Route> {
        if self.switch_radius < self.k_min {
            return Err(NftError::Parameter(format!(
                "switch radius {} lies below k_min {}: small real k would use the singular route",
                self.switch_radius, self.k_min
            )));
        }
        Ok(if k.norm() < self.switch_radius {
            Route::Hatted
        } else {
            Route::Direct
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Payload {
    Ab { a: Complex64, b: Complex64 },
    #[allow(non_snake_case)]
    AB { A: Complex64, B: Complex64 },
    Cd { c: Option<Complex64>, d: Option<Complex64> },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralSample {
    pub point: SpectralPoint,
    pub payload: Payload,
    pub route: Route,
}

/// Second column of `X(0,k)` or `T(0,k)`.
fn second_column(family: Family, data: &dyn HalfLineData, k: Complex64, opts: &SpectralOptions) -> Result<(Column, Route)> {
    let kind = EigenfunctionKind::new(family, 1)?;
    let route = opts.route(k)?;
    let col = match route {
        Route::Direct => solve_eigenfunction(kind, data, k, &[0.0], &opts.solve)?[0].column,
        Route::Hatted => reconstruct_from_hat(kind, data, k, 0.0, &opts.solve)?,
    };
    if !(col[0].is_finite() && col[1].is_finite()) {
        return Err(NftError::Convergence(format!("non-finite spectral value at k = {k}")));
    }
    Ok((col, route))
}

/// `(a, b)` at `k` with `Im k ≥ 0`.
pub fn spectral_ab(data: &InitialData, k: SpectralPoint, opts: &SpectralOptions) -> Result<SpectralSample> {
    if !region::in_closed_upper(k.k) {
        return Err(NftError::Region(format!(
            "a, b are defined for Im k ≥ 0; k = {} lies below (use a(k) = conj(a(−k̄)))",
            k.k
        )));
    }
    let (col, route) = second_column(Family::X, data, k.k, opts)?;
    Ok(SpectralSample {
        point: k,
        payload: Payload::Ab { a: col[1], b: col[0] },
        route,
    })
}

/// `(A, B)` at `k ∈ D̄₊`.
#[allow(non_snake_case)]
pub fn spectral_AB(data: &BoundaryData, k: SpectralPoint, opts: &SpectralOptions) -> Result<SpectralSample> {
    if !region::in_closure_d_plus(k.k) {
        return Err(NftError::Region(format!(
            "A, B are defined on the closure of D1 ∪ D3; k = {} lies outside",
            k.k
        )));
    }
    let (col, route) = second_column(Family::T, data, k.k, opts)?;
    Ok(SpectralSample {
        point: k,
        payload: Payload::AB { A: col[1], B: col[0] },
        route,
    })
}

fn ab_values(s: &SpectralSample) -> (Complex64, Complex64) {
    match s.payload {
        Payload::Ab { a, b } => (a, b),
        Payload::AB { A, B } => (A, B),
        Payload::Cd { .. } => unreachable!("not an (a, b) sample"),
    }
}

/// `(c, d)`; `c` is present on `D̄₁ ∪ ℝ`, `d` on `D̄₂ ∪ ℝ`.
pub fn spectral_cd(
    init: &InitialData,
    bdry: &BoundaryData,
    k: SpectralPoint,
    opts: &SpectralOptions,
) -> Result<SpectralSample> {
    let has_c = region::in_closure_d1(k.k) || region::is_real(k.k);
    let has_d = region::in_closure_d2(k.k) || region::is_real(k.k);
    if !has_c && !has_d {
        return Err(NftError::Region(format!(
            "c needs k in the closure of D1 and d in the closure of D2; k = {} is in neither",
            k.k
        )));
    }
    let ab = spectral_ab(init, k, opts)?;
    let (a, b) = ab_values(&ab);
    let c = if has_c {
        let (ca, cb) = ab_values(&spectral_AB(bdry, k, opts)?);
        Some(b * ca - a * cb)
    } else {
        None
    };
    let d = if has_d {
        let kb = SpectralPoint::new(k.k.conj())?;
        let (ca, cb) = ab_values(&spectral_AB(bdry, kb, opts)?);
        Some(a * ca.conj() + b * cb.conj())
    } else {
        None
    };
    Ok(SpectralSample {
        point: k,
        payload: Payload::Cd { c, d },
        route: ab.route,
    })
}

/// Evaluates `f` over `points` in parallel, keeping per-point results.
pub fn sweep<F>(points: &[SpectralPoint], f: F) -> Vec<Result<SpectralSample>>
where
    F: Fn(SpectralPoint) -> Result<SpectralSample> + Sync + Send,
{
    points.par_iter().map(|&k| f(k)).collect()
}

/// Coefficients of one expansion of `(b, a)` or `(B, A)`: the leading
/// diagonal coefficient and the first two off-diagonal ones.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SideScalars {
    /// `a₁`, `â₁`, `A₁` or `Â₁`.
    pub diag1: Complex64,
    /// `b₁`, `b̂₁`, `B₁` or `B̂₁`.
    pub off1: Complex64,
    /// `b₂`, `b̂₂`, `B₂` or `B̂₂`.
    pub off2: Complex64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticScalars {
    /// `a₁, b₁, b₂`.
    pub x_infinity: SideScalars,
    /// `â₁, b̂₁, b̂₂`.
    pub x_zero: SideScalars,
    /// `A₁, B₁, B₂`.
    pub t_infinity: SideScalars,
    /// `Â₁, B̂₁, B̂₂`.
    pub t_zero: SideScalars,
    /// `d₁ = a₁ + conj(A₁)`.
    pub d1: Complex64,
    /// `c₁, …, c_m`.
    pub c: Vec<Complex64>,
}

/// `∫₀ᴸ g` where `g` is built from jets of `(f₀, f₀', f₁)`. Uses as many
/// derivatives of `g` as the profiles allow (up to two) in the Hermite rule.
fn data_integral(data: &dyn HalfLineData, g: impl Fn(&Jet, &Jet, &Jet) -> Jet + Sync) -> Result<f64> {
    let l = data.truncation_l();
    let n = (l * SCALAR_CELLS_PER_UNIT).ceil() as usize;
    let order = 2.min(data.f0().max_derivative_order().saturating_sub(1)).min(data.f1().max_derivative_order());
    if data.f0().max_derivative_order() < 1 {
        return Err(NftError::Capability(format!("{} has no derivative", data.f0().label())));
    }
    let grid = uniform_grid(0.0, l, n);
    let samples = grid
        .par_iter()
        .map(|&s| -> Result<Vec<f64>> {
            let f0 = data.f0().jet(s, order + 1)?;
            let f1 = data.f1().jet(s, order)?;
            let f0s = f0.differentiate();
            let v = g(&f0.truncate(order), &f0s, &f1);
            Ok((0..=order).map(|k| v.derivative(k)).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    let v = *cumulative(&grid, &samples, 0.0, false).last().expect("grid is nonempty");
    if !v.is_finite() {
        return Err(NftError::Convergence("non-finite coefficient integral".to_string()));
    }
    Ok(v)
}

/// `(f₀, f₀', f₀'', f₁, f₁')` at the origin.
fn origin_values(data: &dyn HalfLineData) -> Result<[f64; 5]> {
    Ok([
        data.f0().eval(0.0, 0)?,
        data.f0().eval(0.0, 1)?,
        data.f0().eval(0.0, 2)?,
        data.f1().eval(0.0, 0)?,
        data.f1().eval(0.0, 1)?,
    ])
}

fn x_scalars(data: &InitialData) -> Result<(SideScalars, SideScalars)> {
    let i = Complex64::new(0.0, 1.0);
    let [u0, u0x, u0xx, u1, u1x] = origin_values(data)?;
    let half_sq = |s: &Jet| (s * s).scale(0.5);
    let int = data_integral(data, |f0, f0s, f1| {
        let s = f0s + f1;
        let (_, cos) = f0.sin_cos();
        &(-&half_sq(&s)) + &cos.add_scalar(-1.0)
    })?;
    let a1 = i / 4.0 * int;
    let s0 = u0x + u1;
    let inf = SideScalars {
        diag1: a1,
        off1: i * s0 / 2.0,
        off2: -u0xx - u1x + i / 2.0 * s0 * a1 + u0.sin() / 2.0,
    };
    let int_h = data_integral(data, |f0, f0s, f1| {
        let s = f0s - f1;
        let (_, cos) = f0.sin_cos();
        &half_sq(&s) - &cos.add_scalar(-1.0)
    })?;
    let ah1 = i / 4.0 * int_h;
    let sh = u0x - u1;
    let zero = SideScalars {
        diag1: ah1,
        off1: i * sh / 2.0,
        off2: u0xx - u1x + i / 2.0 * sh * ah1 - u0.sin() / 2.0,
    };
    Ok((inf, zero))
}

fn t_scalars(data: &BoundaryData) -> Result<(SideScalars, SideScalars)> {
    let i = Complex64::new(0.0, 1.0);
    let [g0, g0t, g0tt, g1, g1t] = origin_values(data)?;
    let integrand = |sign: f64| {
        move |f0: &Jet, f0s: &Jet, f1: &Jet| {
            let s = f1 + &f0s.scale(sign);
            let (_, cos) = f0.sin_cos();
            &(&s * &s).scale(0.5) + &cos.add_scalar(-1.0)
        }
    };
    let a1 = -i / 4.0 * data_integral(data, integrand(1.0))?;
    let s0 = g1 + g0t;
    let inf = SideScalars {
        diag1: a1,
        off1: i * s0 / 2.0,
        off2: -g0tt - g1t + i / 2.0 * s0 * a1 - g0.sin() / 2.0,
    };
    let ah1 = -i / 4.0 * data_integral(data, integrand(-1.0))?;
    let sh = g1 - g0t;
    let zero = SideScalars {
        diag1: ah1,
        off1: i * sh / 2.0,
        off2: g0tt - g1t + i / 2.0 * sh * ah1 + g0.sin() / 2.0,
    };
    Ok((inf, zero))
}

/// `c_j = b_j − B_j + Σ_{r<j} (b_{j−r}A_r − B_{j−r}a_r)` from coefficient
/// lists starting at index 1.
pub fn c_coefficients(a: &[Complex64], b: &[Complex64], ca: &[Complex64], cb: &[Complex64]) -> Vec<Complex64> {
    let m = a.len().min(b.len()).min(ca.len()).min(cb.len());
    (1..=m)
        .map(|j| {
            let mut c = b[j - 1] - cb[j - 1];
            for r in 1..j {
                c += b[j - r - 1] * ca[r - 1] - cb[j - r - 1] * a[r - 1];
            }
            c
        })
        .collect()
}

/// Explicit low-order coefficients of `a, b, A, B` at infinity and zero.
pub fn asymptotic_scalars(init: &InitialData, bdry: &BoundaryData, m: usize) -> Result<AsymptoticScalars> {
    if !(1..=2).contains(&m) {
        return Err(NftError::Parameter(format!(
            "explicit coefficients are available for m = 1, 2; got m = {m}"
        )));
    }
    let (x_infinity, x_zero) = x_scalars(init)?;
    let (t_infinity, t_zero) = t_scalars(bdry)?;
    // a₂ and A₂ do not enter c₁, c₂.
    let c = c_coefficients(
        &[x_infinity.diag1, Complex64::new(0.0, 0.0)],
        &[x_infinity.off1, x_infinity.off2],
        &[t_infinity.diag1, Complex64::new(0.0, 0.0)],
        &[t_infinity.off1, t_infinity.off2],
    )[..m]
        .to_vec();
    Ok(AsymptoticScalars {
        d1: x_infinity.diag1 + t_infinity.diag1.conj(),
        x_infinity,
        x_zero,
        t_infinity,
        t_zero,
        c,
    })
}

/// Maximum invariant residuals over a grid; `None` where no grid point
/// applies.
#[derive(Clone, Debug, Default, PartialEq)]
#[allow(non_snake_case)]
pub struct InvariantReport {
    pub unitarity_ab: Option<f64>,
    pub unitarity_AB: Option<f64>,
    pub unitarity_cd: Option<f64>,
    pub det_x: Option<f64>,
    pub det_t: Option<f64>,
    pub symmetry_ab: Option<f64>,
    pub symmetry_AB: Option<f64>,
    pub d_zero_limit: Option<f64>,
}

impl InvariantReport {
    pub fn entries(&self) -> Vec<(&'static str, Option<f64>)> {
        vec![
            ("unitarity_ab", self.unitarity_ab),
            ("unitarity_AB", self.unitarity_AB),
            ("unitarity_cd", self.unitarity_cd),
            ("det_X", self.det_x),
            ("det_T", self.det_t),
            ("symmetry_ab", self.symmetry_ab),
            ("symmetry_AB", self.symmetry_AB),
            ("d_zero_limit", self.d_zero_limit),
        ]
    }
}

fn max_opt(acc: Option<f64>, v: Option<f64>) -> Option<f64> {
    match (acc, v) {
        (Some(a), Some(b)) => Some(a.max(b)),
        (a, None) => a,
        (None, b) => b,
    }
}

/// Per-point residuals; each is `None` where it does not apply at `k`.
fn point_residuals(init: &InitialData, bdry: &BoundaryData, k: SpectralPoint, opts: &SpectralOptions) -> Result<InvariantReport> {
    let mut r = InvariantReport::default();
    let kk = k.k;
    let real = region::is_real(kk);
    let on_circle = (kk.norm() - 1.0).abs() <= region::BOUNDARY_EPS;
    if region::in_closed_upper(kk) {
        let (a, b) = ab_values(&spectral_ab(init, k, opts)?);
        let mirror = SpectralPoint::new(-kk.conj())?;
        let (am, bm) = ab_values(&spectral_ab(init, mirror, opts)?);
        r.symmetry_ab = Some((a - am.conj()).norm().max((b - bm.conj()).norm()));
        if real {
            r.unitarity_ab = Some((a.norm_sqr() + b.norm_sqr() - 1.0).abs());
        }
    }
    if region::in_closure_d_plus(kk) {
        let (ca, cb) = ab_values(&spectral_AB(bdry, k, opts)?);
        let mirror = SpectralPoint::new(-kk.conj())?;
        let (cam, cbm) = ab_values(&spectral_AB(bdry, mirror, opts)?);
        r.symmetry_AB = Some((ca - cam.conj()).norm().max((cb - cbm.conj()).norm()));
        if real || on_circle {
            let kb = SpectralPoint::new(kk.conj())?;
            let (cab, cbb) = ab_values(&spectral_AB(bdry, kb, opts)?);
            r.unitarity_AB = Some((ca * cab.conj() + cb * cbb.conj() - 1.0).norm());
        }
    }
    if real {
        if let Payload::Cd { c: Some(c), d: Some(d) } = spectral_cd(init, bdry, k, opts)?.payload {
            r.unitarity_cd = Some((c.norm_sqr() + d.norm_sqr() - 1.0).abs());
        }
        if kk.norm() >= opts.k_min {
            let x = solve_matrix(Family::X, init, kk, &[0.0], &opts.solve)?[0];
            let t = solve_matrix(Family::T, bdry, kk, &[0.0], &opts.solve)?[0];
            r.det_x = Some((x.det() - 1.0).norm());
            r.det_t = Some((t.det() - 1.0).norm());
        }
    }
    Ok(r)
}

/// Maximum residuals of the determinant, symmetry and unitarity relations
/// over `k_grid`, plus `|d(k₀) − (−1)^{N_x−N_t}|` at `k₀ = 10⁻³`.
pub fn invariant_residuals(
    init: &InitialData,
    bdry: &BoundaryData,
    k_grid: &[SpectralPoint],
    opts: &SpectralOptions,
) -> Result<InvariantReport> {
    let parts: Vec<InvariantReport> = k_grid
        .par_iter()
        .map(|&k| point_residuals(init, bdry, k, opts))
        .collect::<Result<_>>()?;
    let mut out = InvariantReport::default();
    for p in parts {
        out.unitarity_ab = max_opt(out.unitarity_ab, p.unitarity_ab);
        out.unitarity_AB = max_opt(out.unitarity_AB, p.unitarity_AB);
        out.unitarity_cd = max_opt(out.unitarity_cd, p.unitarity_cd);
        out.det_x = max_opt(out.det_x, p.det_x);
        out.det_t = max_opt(out.det_t, p.det_t);
        out.symmetry_ab = max_opt(out.symmetry_ab, p.symmetry_ab);
        out.symmetry_AB = max_opt(out.symmetry_AB, p.symmetry_AB);
    }
    out.d_zero_limit = Some(d_zero_limit(init, bdry, opts)?.1);
    Ok(out)
}

/// `d(k₀)` at `k₀ = 10⁻³` by the hatted route, and its distance from
/// `(−1)^{N_x−N_t}`.
pub fn d_zero_limit(init: &InitialData, bdry: &BoundaryData, opts: &SpectralOptions) -> Result<(Complex64, f64)> {
    let k = SpectralPoint::real(D_ZERO_PROBE)?;
    let d = match spectral_cd(init, bdry, k, opts)?.payload {
        Payload::Cd { d: Some(d), .. } => d,
        _ => unreachable!("d is defined on the real axis"),
    };
    let target = if (init.n_x - bdry.n_t).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    Ok((d, (d - target).norm()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn trivial() -> (InitialData, BoundaryData) {
        (
            InitialData::new(profiles::zero(), profiles::zero()).unwrap(),
            BoundaryData::new(profiles::zero(), profiles::zero()).unwrap(),
        )
    }

    #[test]
    fn trivial_data() {
        let (i, b) = trivial();
        let opts = SpectralOptions::default();
        let one = Some(c(1.0, 0.0));
        let zero = Some(c(0.0, 0.0));
        for (k, expect) in [
            (c(3.0, 0.0), Payload::Cd { c: zero, d: one }),
            (c(0.5, 0.0), Payload::Cd { c: zero, d: one }),
            (c(2.0, 1.0), Payload::Cd { c: zero, d: None }),
            (c(0.3, 0.4), Payload::Cd { c: None, d: one }),
        ] {
            let s = spectral_cd(&i, &b, SpectralPoint::new(k).unwrap(), &opts).unwrap();
            assert_eq!(s.payload, expect, "k = {k}");
        }
    }

    #[test]
    fn region_errors() {
        let (i, b) = trivial();
        let opts = SpectralOptions::default();
        let low = SpectralPoint::new(c(1.0, -1.0)).unwrap();
        assert!(matches!(spectral_ab(&i, low, &opts), Err(NftError::Region(_))));
        // D₂ point is outside D̄₊
        let d2 = SpectralPoint::new(c(0.3, 0.3)).unwrap();
        assert!(matches!(spectral_AB(&b, d2, &opts), Err(NftError::Region(_))));
        assert!(matches!(spectral_cd(&i, &b, low, &opts), Err(NftError::Region(_))));
    }

    #[test]
    fn kink_small_k_limit() {
        // u₀(0) = π, N_x = 0: (a, b) → (0, −1)
        let init = profiles::static_kink(0.0, -1).unwrap();
        let s = spectral_ab(&init, SpectralPoint::real(1e-3).unwrap(), &SpectralOptions::default()).unwrap();
        let Payload::Ab { a, b } = s.payload else { panic!() };
        assert_eq!(s.route, Route::Hatted);
        assert!(a.norm() < 5e-3, "{a}");
        assert!((b + 1.0).norm() < 5e-3, "{b}");
    }

    #[test]
    fn kink_scalars() {
        let (init, bdry) = profiles::generate_kink_data(0.0, 0.5, -1).unwrap();
        let st = profiles::static_kink(0.0, -1).unwrap();
        let s = asymptotic_scalars(&st, &bdry, 2).unwrap();
        assert_relative_eq!(s.x_infinity.off1.im, -1.0, epsilon = 1e-14);
        assert_relative_eq!(s.x_infinity.diag1.re, 0.0, epsilon = 1e-14);
        let s = asymptotic_scalars(&init, &bdry, 2).unwrap();
        // exact-solution data: c₁ = c₂ = 0
        assert!(s.c.iter().all(|c| c.norm() < 1e-10), "{:?}", s.c);
        assert!(asymptotic_scalars(&init, &bdry, 3).is_err());
    }

    #[test]
    fn route_selection() {
        let opts = SpectralOptions::default();
        assert_eq!(opts.route(c(0.5, 0.0)).unwrap(), Route::Hatted);
        assert_eq!(opts.route(c(1.5, 0.0)).unwrap(), Route::Direct);
        let bad = SpectralOptions { switch_radius: 0.01, ..opts };
        assert!(bad.route(c(1.0, 0.0)).is_err());
    }
}
