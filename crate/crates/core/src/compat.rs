//! Corner compatibility, topological charge, the global relation and the
//! conservation one-form.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::data::{BoundaryData, HalfLineData, InitialData};
use crate::error::{NftError, Result};
use crate::exact::ExactSolution;
use crate::fit::geometric_samples;
use crate::jet::factorial;
use crate::profile::Provenance;
use crate::region::{self, SpectralPoint};
use crate::spectral::{spectral_cd, Payload, SpectralOptions};

pub const ANALYTIC_TOLERANCE: f64 = 1e-8;
pub const SAMPLED_TOLERANCE: f64 = 1e-4;
/// Allowed distance of `f₀(L)` from `2πN` in [`topological_charge`].
pub const CHARGE_TAIL_TOL: f64 = 1e-8;

/// Truncated bivariate Taylor polynomial `Σ c[j][i] tʲ xⁱ` with
/// `i + j ≤ degree`.
#[derive(Clone, Debug, PartialEq)]
struct Poly2 {
    degree: usize,
    c: Vec<Vec<f64>>,
}

impl Poly2 {
    fn zero(degree: usize) -> Self {
        Self {
            degree,
            c: (0..=degree).map(|j| vec![0.0; degree + 1 - j]).collect(),
        }
    }

    fn mul(&self, other: &Poly2) -> Poly2 {
        let d = self.degree;
        let mut out = Poly2::zero(d);
        for j1 in 0..=d {
            for i1 in 0..=d - j1 {
                let a = self.c[j1][i1];
                if a == 0.0 {
                    continue;
                }
                for j2 in 0..=d - j1 - i1 {
                    for i2 in 0..=d - j1 - i1 - j2 {
                        out.c[j1 + j2][i1 + i2] += a * other.c[j2][i2];
                    }
                }
            }
        }
        out
    }

    fn axpy(&mut self, s: f64, other: &Poly2) {
        for (row, orow) in self.c.iter_mut().zip(&other.c) {
            for (v, o) in row.iter_mut().zip(orow) {
                *v += s * o;
            }
        }
    }

    /// `sin p` by `sin(c + δ) = sin c·cos δ + cos c·sin δ` with the series
    /// of the nilpotent part `δ` truncated at the degree.
    fn sin(&self) -> Poly2 {
        let d = self.degree;
        let c0 = self.c[0][0];
        let mut delta = self.clone();
        delta.c[0][0] = 0.0;
        let (s0, k0) = c0.sin_cos();
        let mut out = Poly2::zero(d);
        out.c[0][0] = s0;
        let mut power = delta.clone();
        for n in 1..=d {
            // δⁿ/n! enters sin δ (odd n) or cos δ (even n) with sign (−1)^⌊n/2⌋
            let sign = if (n / 2) % 2 == 0 { 1.0 } else { -1.0 };
            let coef = if n % 2 == 1 { k0 } else { s0 };
            out.axpy(sign * coef / factorial(n), &power);
            power = power.mul(&delta);
        }
        out
    }
}

/// `J[j][i] = ∂_t^j ∂_x^i u(0,0)` implied by the initial data and the
/// equation, for `j ≤ order + 1` and `i ≤ order + 2 − j`.
#[derive(Clone, Debug, PartialEq)]
pub struct OriginJet {
    pub order: usize,
    pub table: Vec<Vec<f64>>,
}

impl OriginJet {
    pub fn get(&self, j: usize, i: usize) -> Option<f64> {
        self.table.get(j).and_then(|row| row.get(i)).copied()
    }
}

pub fn origin_jet(init: &InitialData, order: usize) -> Result<OriginJet> {
    let d = order + 2;
    let u0 = init.u0.jet(0.0, d)?;
    let u1 = init.u1.jet(0.0, d - 1)?;
    // factorial-normalized coefficients c[j][i] = J[j][i]/(i! j!)
    let mut poly = Poly2::zero(d);
    poly.c[0].copy_from_slice(&u0.coeffs()[..=d]);
    poly.c[1].copy_from_slice(&u1.coeffs()[..d]);
    for j in 0..d - 1 {
        // rows ≤ j + 1 are known, which fixes sin u through t-order j + 1
        let s = poly.sin();
        for i in 0..=d - j - 2 {
            // J[j+2][i] = J[j][i+2] − ∂ₓⁱ∂ₜʲ sin u
            let jji2 = poly.c[j][i + 2] * factorial(i + 2) * factorial(j);
            let sin_d = s.c[j][i] * factorial(i) * factorial(j);
            poly.c[j + 2][i] = (jji2 - sin_d) / (factorial(i) * factorial(j + 2));
        }
    }
    let table = (0..=order + 1)
        .map(|j| (0..=d - j).map(|i| poly.c[j][i] * factorial(i) * factorial(j)).collect())
        .collect();
    Ok(OriginJet { order, table })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Relation {
    pub label: String,
    /// Highest derivative order of `u₀, g₀` the relation involves.
    pub order: usize,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompatibilityReport {
    pub order: usize,
    pub tolerance: f64,
    pub residuals: Vec<Relation>,
    pub pass: bool,
}

impl CompatibilityReport {
    pub fn failing(&self) -> Vec<&Relation> {
        self.residuals.iter().filter(|r| !(r.residual.abs() <= self.tolerance)).collect()
    }
}

/// Default pass/fail tolerance for the given data.
pub fn default_tolerance(init: &InitialData, bdry: &BoundaryData) -> f64 {
    let sampled = [&init.u0, &init.u1, &bdry.g0, &bdry.g1]
        .iter()
        .any(|p| p.provenance() == Provenance::Sampled);
    if sampled {
        SAMPLED_TOLERANCE
    } else {
        ANALYTIC_TOLERANCE
    }
}

/// Residuals `∂ₜʲg₀(0) − J[j][0]` (`j ≤ m`) and `∂ₜʲg₁(0) − J[j][1]`
/// (`j ≤ m − 1`) in order of the derivatives involved.
pub fn compatibility_residuals(
    init: &InitialData,
    bdry: &BoundaryData,
    order: usize,
    tolerance: Option<f64>,
) -> Result<CompatibilityReport> {
    let jet = origin_jet(init, order)?;
    let g0 = bdry.g0.jet(0.0, order)?;
    let g1 = if order > 0 { Some(bdry.g1.jet(0.0, order - 1)?) } else { None };
    let mut residuals = Vec::new();
    for j in 0..=order {
        residuals.push(Relation {
            label: format!("g0^({j})(0)"),
            order: j,
            residual: g0.derivative(j) - jet.table[j][0],
        });
        if let Some(g1) = &g1 {
            if j < order {
                residuals.push(Relation {
                    label: format!("g1^({j})(0)"),
                    order: j + 1,
                    residual: g1.derivative(j) - jet.table[j][1],
                });
            }
        }
    }
    let tolerance = tolerance.unwrap_or_else(|| default_tolerance(init, bdry));
    let pass = residuals.iter().all(|r| r.residual.abs() <= tolerance);
    Ok(CompatibilityReport {
        order,
        tolerance,
        residuals,
        pass,
    })
}

/// `N_x − N_t` after checking that `u₀(L)` and `g₀(L)` sit at their
/// declared limits.
pub fn topological_charge(init: &InitialData, bdry: &BoundaryData) -> Result<i32> {
    for data in [init as &dyn HalfLineData, bdry as &dyn HalfLineData] {
        let f0 = data.f0();
        let v = f0.eval(data.truncation_l(), 0)?;
        if !((v - f0.limit()).abs() <= CHARGE_TAIL_TOL) {
            return Err(NftError::Decay(format!(
                "{} is {v} at L = {}, not within {CHARGE_TAIL_TOL:.0e} of 2π·{}",
                f0.label(),
                data.truncation_l(),
                f0.winding()
            )));
        }
    }
    Ok(init.n_x - bdry.n_t)
}

#[derive(Clone, Debug)]
pub struct GlobalRelationReport {
    /// Supremum of `|c|` over the samples that evaluated.
    pub sup_c: f64,
    pub samples: Vec<(SpectralPoint, Result<Complex64>)>,
}

/// Log-radial × angular samples of `D̄₁`: `n_radii` radii in `[r_min, r_max]`
/// and `n_angles` angles spanning `[0, π]`.
pub fn d1_samples(r_min: f64, r_max: f64, n_radii: usize, n_angles: usize) -> Result<Vec<SpectralPoint>> {
    if !(r_min >= 1.0 && r_max >= r_min) {
        return Err(NftError::Parameter(format!(
            "D1 radii [{r_min}, {r_max}] must satisfy 1 ≤ r_min ≤ r_max"
        )));
    }
    let radii = geometric_samples(r_min, r_max, n_radii);
    let mut out = Vec::with_capacity(n_radii * n_angles);
    for r in radii {
        for a in 0..n_angles {
            let phi = if n_angles == 1 {
                std::f64::consts::FRAC_PI_2
            } else {
                std::f64::consts::PI * a as f64 / (n_angles - 1) as f64
            };
            let (s, c) = phi.sin_cos();
            // keep the endpoints exactly real
            let im = if a == 0 || a + 1 == n_angles { 0.0 } else { r * s };
            out.push(SpectralPoint::new(Complex64::new(r * c, im))?);
        }
    }
    Ok(out)
}

/// The default grid: radii in `[1, 20]`, 5 angles in `[0, π]`.
pub fn default_d1_samples() -> Vec<SpectralPoint> {
    d1_samples(1.0, 20.0, 10, 5).expect("valid default grid")
}

/// `sup |c(k)|` over `samples`; per-sample failures are kept, not raised.
pub fn global_relation_residual(
    init: &InitialData,
    bdry: &BoundaryData,
    samples: &[SpectralPoint],
    opts: &SpectralOptions,
) -> GlobalRelationReport {
    let samples: Vec<(SpectralPoint, Result<Complex64>)> = samples
        .par_iter()
        .map(|&k| {
            let v = if region::in_closure_d1(k.k) || region::is_real(k.k) {
                spectral_cd(init, bdry, k, opts).and_then(|s| match s.payload {
                    Payload::Cd { c: Some(c), .. } => Ok(c),
                    _ => Err(NftError::Region(format!("c is undefined at k = {}", k.k))),
                })
            } else {
                Err(NftError::Region(format!("k = {} is outside the closure of D1", k.k)))
            };
            (k, v)
        })
        .collect();
    let sup_c = samples
        .iter()
        .filter_map(|(_, v)| v.as_ref().ok().map(|c| c.norm()))
        .fold(0.0, f64::max);
    GlobalRelationReport { sup_c, samples }
}

/// Cells per segment for the contour quadrature.
const CONTOUR_CELLS: usize = 8000;

/// `ω₁` coefficients `(P, Q)` in `ω₁ = P dx + Q dt` at `(x, t)`.
fn omega1(sol: &dyn ExactSolution, x: f64, t: f64) -> (Complex64, Complex64) {
    let i4 = Complex64::new(0.0, 0.25);
    let s = sol.derivative(x, t, 1, 0) + sol.derivative(x, t, 0, 1);
    let cm1 = sol.value(x, t).cos() - 1.0;
    (-i4 * (-s * s / 2.0 + cm1), i4 * (s * s / 2.0 + cm1))
}

/// `∫ ω₁` along a polyline, by composite Simpson on every segment.
pub fn contour_integral(sol: &dyn ExactSolution, polyline: &[(f64, f64)]) -> Result<Complex64> {
    if polyline.len() < 2 {
        return Err(NftError::Parameter("a contour needs at least two vertices".to_string()));
    }
    if let Some(p) = polyline.iter().find(|p| !(p.0 >= 0.0 && p.1 >= 0.0)) {
        return Err(NftError::Domain(format!("contour vertex {p:?} leaves the quarter plane")));
    }
    let mut total = Complex64::new(0.0, 0.0);
    for w in polyline.windows(2) {
        let ((x0, t0), (x1, t1)) = (w[0], w[1]);
        let (dx, dt) = (x1 - x0, t1 - t0);
        let n = CONTOUR_CELLS;
        let h = 1.0 / n as f64;
        let f = |r: f64| {
            let (p, q) = omega1(sol, x0 + r * dx, t0 + r * dt);
            p * dx + q * dt
        };
        let mut acc = f(0.0) + f(1.0);
        for j in 1..n {
            acc += f(j as f64 * h) * if j % 2 == 1 { 4.0 } else { 2.0 };
        }
        total += acc * (h / 3.0);
    }
    Ok(total)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContourCheck {
    /// `∫_γ ω₁` along `(L,0) → (0,0) → (0,L)`.
    pub gamma: Complex64,
    pub alternate: Complex64,
    pub residual: f64,
}

/// Compares `∫ ω₁` along the corner contour with `alternate`, which must
/// run from `(L, 0)` to `(0, L)`.
pub fn conservation_contour_check(
    sol: &dyn ExactSolution,
    l: f64,
    alternate: &[(f64, f64)],
) -> Result<ContourCheck> {
    let (first, last) = match (alternate.first(), alternate.last()) {
        (Some(a), Some(b)) => (*a, *b),
        _ => return Err(NftError::Parameter("empty alternate contour".to_string())),
    };
    if first != (l, 0.0) || last != (0.0, l) {
        return Err(NftError::Parameter(format!(
            "the alternate contour must run from ({l}, 0) to (0, {l}), got {first:?} to {last:?}"
        )));
    }
    let gamma = contour_integral(sol, &[(l, 0.0), (0.0, 0.0), (0.0, l)])?;
    let alt = contour_integral(sol, alternate)?;
    Ok(ContourCheck {
        gamma,
        alternate: alt,
        residual: (gamma - alt).norm(),
    })
}
