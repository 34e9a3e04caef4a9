//! Eigenfunctions of the two halves of the Lax pair.
//!
//! Every family solves `Φ_s + iθ[σ₃, Φ] = PΦ` column by column, where `P`
//! is the (hatted or unhatted) potential of the data side and `θ` is `θ₁`
//! (x-side) or `θ₂` (t-side). Entry `r` of column `c` obeys
//! `v_r' = d_r v_r + (Pv)_r` with `d_r = −iθ(s_r − s_c)` and
//! `s = (1, −1)`, so the column's own entry carries no phase and the other
//! entry carries `e^{±2iθs}`.
//!
//! `X, T` (and hats) are normalized to `I` at the truncation point and
//! integrated downward; `Y, U` (and hats) are normalized to `I` at the
//! origin and integrated upward. An origin-normalized column whose raw form
//! grows is returned phase-factored, i.e. multiplied by `e^{−2iθ s·s_c}`
//! (the column of `Y e^{−2iθ s σ₃}`).

use num_complex::Complex64;

use crate::data::{HalfLineData, Side};
use crate::error::{NftError, Result};
use crate::matrix::{unit_column, Column, ComplexMatrix2};
use crate::ode::{integrate, Integrator, OdeOptions};
use crate::potential::{gauge, potential_parts, side_theta};
use crate::region;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    X,
    Y,
    T,
    U,
    Xhat,
    Yhat,
    That,
    Uhat,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::X,
        Family::Y,
        Family::T,
        Family::U,
        Family::Xhat,
        Family::Yhat,
        Family::That,
        Family::Uhat,
    ];

    pub fn side(&self) -> Side {
        match self {
            Family::X | Family::Y | Family::Xhat | Family::Yhat => Side::X,
            Family::T | Family::U | Family::That | Family::Uhat => Side::T,
        }
    }

    pub fn hatted(&self) -> bool {
        matches!(self, Family::Xhat | Family::Yhat | Family::That | Family::Uhat)
    }

    /// Normalized to `I` as the coordinate tends to infinity.
    pub fn at_infinity(&self) -> bool {
        matches!(self, Family::X | Family::T | Family::Xhat | Family::That)
    }

    /// The hatted counterpart (identity on hatted families).
    pub fn hat(&self) -> Family {
        match self {
            Family::X | Family::Xhat => Family::Xhat,
            Family::Y | Family::Yhat => Family::Yhat,
            Family::T | Family::That => Family::That,
            Family::U | Family::Uhat => Family::Uhat,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::X => "X",
            Family::Y => "Y",
            Family::T => "T",
            Family::U => "U",
            Family::Xhat => "Xhat",
            Family::Yhat => "Yhat",
            Family::That => "That",
            Family::Uhat => "Uhat",
        }
    }
}

/// A family together with a column index (0 = first, 1 = second).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EigenfunctionKind {
    pub family: Family,
    pub column: usize,
}

impl EigenfunctionKind {
    pub fn new(family: Family, column: usize) -> Result<Self> {
        if column > 1 {
            return Err(NftError::Parameter(format!("column index {column} must be 0 or 1")));
        }
        Ok(Self { family, column })
    }

    /// Whether the raw column stays bounded along its direction of
    /// integration.
    ///
    /// For the infinity-normalized families this is the validity region:
    /// second columns on `C̄₊` (x-side) or `D̄₊` (t-side), first columns on
    /// the complementary closures. Hatted families share the phase of their
    /// unhatted counterparts and therefore the same regions.
    pub fn raw_bounded(&self, k: Complex64) -> bool {
        let second = self.column == 1;
        let upper_set = match self.family.side() {
            Side::X => region::in_closed_upper(k),
            Side::T => region::in_closure_d_plus(k),
        };
        let lower_set = match self.family.side() {
            Side::X => region::in_closed_lower(k),
            Side::T => region::in_closure_d_minus(k),
        };
        match (self.family.at_infinity(), second) {
            (true, true) | (false, false) => upper_set,
            (true, false) | (false, true) => lower_set,
        }
    }

    /// Checks that `k` is admissible for this kind.
    pub fn validate(&self, k: Complex64) -> Result<()> {
        if !k.is_finite() {
            return Err(NftError::Domain(format!("spectral parameter {k} is not finite")));
        }
        if k == Complex64::new(0.0, 0.0) && !self.family.hatted() {
            return Err(NftError::Domain(format!(
                "spectral parameter k = 0 excluded for {}: the potential is singular, use the hatted family",
                self.family.name()
            )));
        }
        if self.family.at_infinity() && k != Complex64::new(0.0, 0.0) && !self.raw_bounded(k) {
            return Err(NftError::Region(format!(
                "column {} of {} is not bounded at k = {k}",
                self.column + 1,
                self.family.name()
            )));
        }
        Ok(())
    }

    /// Whether the stored value for this kind at `k` is phase-factored.
    pub fn phase_factored(&self, k: Complex64) -> bool {
        !self.family.at_infinity() && k != Complex64::new(0.0, 0.0) && !self.raw_bounded(k)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenfunctionValue {
    pub kind: EigenfunctionKind,
    pub k: Complex64,
    pub coord: f64,
    pub column: Column,
    pub phase_factored: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    pub tol: f64,
    pub integrator: Integrator,
    /// Overrides the data's truncation point when set.
    pub truncation_l: Option<f64>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            integrator: Integrator::DormandPrince,
            truncation_l: None,
        }
    }
}

impl SolveOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }

    pub(crate) fn length(&self, data: &dyn HalfLineData) -> f64 {
        self.truncation_l.unwrap_or_else(|| data.truncation_l())
    }
}

/// Diagonal phase rates `(d₀, d₁)` of the column system in the stored
/// representation.
pub(crate) fn phase_rates(kind: &EigenfunctionKind, k: Complex64) -> [Complex64; 2] {
    let th = side_theta(kind.family.side(), k);
    let i = Complex64::new(0.0, 1.0);
    let s = [1.0, -1.0];
    let sc = s[kind.column];
    let shift = if kind.phase_factored(k) { -2.0 * i * th * sc } else { Complex64::new(0.0, 0.0) };
    [0usize, 1].map(|r| -i * th * (s[r] - sc) + shift)
}

/// Potential of the kind's system at `s`.
fn system_potential(data: &dyn HalfLineData, hatted: bool, s: f64, k: Complex64) -> Result<ComplexMatrix2> {
    let parts = potential_parts(data, s, hatted)?;
    Ok(if hatted { parts.combine(k) } else { parts.combine(k.inv()) })
}

fn check_data(kind: &EigenfunctionKind, data: &dyn HalfLineData) -> Result<()> {
    if kind.family.side() != data.side() {
        return Err(NftError::Parameter(format!(
            "{} needs {}-side data, got {}-side data",
            kind.family.name(),
            kind.family.side().name(),
            data.side().name()
        )));
    }
    Ok(())
}

/// Solves for one column of an eigenfunction at the given coordinates.
///
/// Coordinates may be given in any order; values come back in the same
/// order. Infinity-normalized columns equal the unit column at and beyond
/// the truncation point.
pub fn solve_eigenfunction(
    kind: EigenfunctionKind,
    data: &dyn HalfLineData,
    k: Complex64,
    eval_coords: &[f64],
    opts: &SolveOptions,
) -> Result<Vec<EigenfunctionValue>> {
    check_data(&kind, data)?;
    kind.validate(k)?;
    if let Some(bad) = eval_coords.iter().find(|s| !(**s >= 0.0)) {
        return Err(NftError::Domain(format!("evaluation coordinate {bad} must be nonnegative")));
    }
    let e = unit_column(kind.column);
    let phase_factored = kind.phase_factored(k);
    let make = |coord: f64, column: Column| EigenfunctionValue {
        kind,
        k,
        coord,
        column,
        phase_factored,
    };

    // At k = 0 the hatted potential reduces to 𝖴̂₀ but θ is singular; the
    // hatted eigenfunctions tend to the identity there.
    if k == Complex64::new(0.0, 0.0) {
        return Ok(eval_coords.iter().map(|&s| make(s, e)).collect());
    }

    let l = opts.length(data);
    let hatted = kind.family.hatted();
    let d = phase_rates(&kind, k);
    let rhs = |s: f64, v: &Column| -> Result<Column> {
        let p = system_potential(data, hatted, s, k)?;
        let pv = p.mul_column(v);
        Ok([d[0] * v[0] + pv[0], d[1] * v[1] + pv[1]])
    };
    let ode = OdeOptions {
        tol: opts.tol,
        integrator: opts.integrator,
    };

    let mut order: Vec<usize> = (0..eval_coords.len()).collect();
    let mut values = vec![e; eval_coords.len()];
    if kind.family.at_infinity() {
        order.sort_by(|&a, &b| eval_coords[b].total_cmp(&eval_coords[a]));
        let inside: Vec<usize> = order.into_iter().filter(|&i| eval_coords[i] < l).collect();
        let targets: Vec<f64> = inside.iter().map(|&i| eval_coords[i]).collect();
        let sol = integrate(rhs, l, e, &targets, &ode)?;
        for (i, v) in inside.into_iter().zip(sol) {
            values[i] = v;
        }
    } else {
        order.sort_by(|&a, &b| eval_coords[a].total_cmp(&eval_coords[b]));
        let targets: Vec<f64> = order.iter().map(|&i| eval_coords[i]).collect();
        let sol = integrate(rhs, 0.0, e, &targets, &ode)?;
        for (i, v) in order.into_iter().zip(sol) {
            values[i] = v;
        }
    }
    if let Some(v) = values.iter().find(|v| !(v[0].is_finite() && v[1].is_finite())) {
        return Err(NftError::Convergence(format!("non-finite eigenfunction value {v:?}")));
    }
    Ok(eval_coords.iter().zip(values).map(|(&s, v)| make(s, v)).collect())
}

/// Both columns of a family at the given coordinates, each in its stored
/// representation. Meaningful as a matrix where both columns are raw,
/// e.g. on the real axis.
pub fn solve_matrix(
    family: Family,
    data: &dyn HalfLineData,
    k: Complex64,
    eval_coords: &[f64],
    opts: &SolveOptions,
) -> Result<Vec<ComplexMatrix2>> {
    let c1 = solve_eigenfunction(EigenfunctionKind::new(family, 0)?, data, k, eval_coords, opts)?;
    let c2 = solve_eigenfunction(EigenfunctionKind::new(family, 1)?, data, k, eval_coords, opts)?;
    Ok(c1
        .iter()
        .zip(&c2)
        .map(|(a, b)| ComplexMatrix2::from_columns(a.column, b.column))
        .collect())
}

/// Converts a stored origin-normalized value back to the raw column.
pub fn unfactor(value: &EigenfunctionValue) -> Column {
    if !value.phase_factored {
        return value.column;
    }
    let th = side_theta(value.kind.family.side(), value.k);
    let sc = if value.kind.column == 0 { 1.0 } else { -1.0 };
    let w = (Complex64::new(0.0, 2.0) * th * value.coord * sc).exp();
    [value.column[0] * w, value.column[1] * w]
}

/// `∫₀ʰ e^{zτ/h}·(1 − τ/h) dτ` and `∫₀ʰ e^{zτ/h}·τ/h dτ`.
fn linear_exp_weights(z: Complex64, h: f64) -> (Complex64, Complex64) {
    // A = ∫₀¹ e^{zτ}dτ, B = ∫₀¹ τe^{zτ}dτ
    let (a, b) = if z.norm() < 0.2 {
        let mut a = Complex64::new(0.0, 0.0);
        let mut b = Complex64::new(0.0, 0.0);
        let mut zn = Complex64::new(1.0, 0.0);
        let mut fact = 1.0;
        for n in 0..18 {
            a += zn / (fact * (n + 1) as f64);
            b += zn / (fact * (n + 2) as f64);
            zn *= z;
            fact *= (n + 1) as f64;
        }
        (a, b)
    } else {
        let ez = z.exp();
        ((ez - 1.0) / z, (ez * (z - 1.0) + 1.0) / (z * z))
    };
    ((a - b) * h, b * h)
}

/// Truncated Neumann series of the Volterra equation for one column.
///
/// The column solves `v = v⁽⁰⁾ + Kv` with `(Kv)(s) = −∫_s^L e^{D(s−s')}Pv ds'`
/// (infinity-normalized) or `∫_0^s e^{D(s−s')}Pv ds'` (origin-normalized),
/// `D = diag(d₀, d₁)`. `iterations` applications of `K` are summed on a
/// uniform grid of step at most `grid_step`, with the exponential weights
/// integrated exactly against piecewise-linear `Pv`.
pub fn picard_oracle(
    kind: EigenfunctionKind,
    data: &dyn HalfLineData,
    k: Complex64,
    coord: f64,
    iterations: usize,
    grid_step: f64,
    opts: &SolveOptions,
) -> Result<Column> {
    check_data(&kind, data)?;
    kind.validate(k)?;
    if iterations == 0 {
        return Err(NftError::Parameter("the oracle needs at least one iteration".to_string()));
    }
    if !(grid_step > 0.0) {
        return Err(NftError::Parameter(format!("grid step {grid_step} must be positive")));
    }
    if !(coord >= 0.0) {
        return Err(NftError::Domain(format!("coordinate {coord} must be nonnegative")));
    }
    let e = unit_column(kind.column);
    if k == Complex64::new(0.0, 0.0) {
        return Ok(e);
    }
    let l = opts.length(data);
    let at_inf = kind.family.at_infinity();
    if at_inf && coord >= l {
        return Ok(e);
    }
    let (a, b) = if at_inf { (coord, l) } else { (0.0, coord) };
    if b == a {
        return Ok(e);
    }
    let n = ((b - a) / grid_step).ceil().max(1.0) as usize;
    let h = (b - a) / n as f64;
    let grid: Vec<f64> = (0..=n).map(|i| a + h * i as f64).collect();
    let hatted = kind.family.hatted();
    let pots = grid
        .iter()
        .map(|&s| system_potential(data, hatted, s, k))
        .collect::<Result<Vec<_>>>()?;
    let d = phase_rates(&kind, k);

    // Free term and per-component weights.
    let v0: Vec<Column> = if at_inf {
        vec![e; n + 1]
    } else {
        grid.iter()
            .map(|&s| {
                let mut v = [Complex64::new(0.0, 0.0); 2];
                v[kind.column] = (d[kind.column] * s).exp();
                v
            })
            .collect()
    };
    let mut decay = [Complex64::new(0.0, 0.0); 2];
    let mut w_near = [Complex64::new(0.0, 0.0); 2];
    let mut w_far = [Complex64::new(0.0, 0.0); 2];
    for r in 0..2 {
        // Marching away from the normalization point the kernel factor over
        // one cell is e^{−d h} (downward) or e^{d h} (upward).
        let z = if at_inf { -d[r] * h } else { d[r] * h };
        decay[r] = z.exp();
        // weight on the node being updated (τ = 0) and on the previous node
        let (w0, w1) = linear_exp_weights(z, h);
        w_near[r] = w0;
        w_far[r] = w1;
    }

    let mut v = v0.clone();
    for _ in 0..iterations {
        let f: Vec<Column> = pots.iter().zip(&v).map(|(p, v)| p.mul_column(v)).collect();
        let mut next = v0.clone();
        let mut acc = [Complex64::new(0.0, 0.0); 2];
        if at_inf {
            for i in (0..n).rev() {
                for r in 0..2 {
                    acc[r] = decay[r] * acc[r] + w_near[r] * f[i][r] + w_far[r] * f[i + 1][r];
                    next[i][r] -= acc[r];
                }
            }
        } else {
            for i in 1..=n {
                for r in 0..2 {
                    acc[r] = decay[r] * acc[r] + w_near[r] * f[i][r] + w_far[r] * f[i - 1][r];
                    next[i][r] += acc[r];
                }
            }
        }
        v = next;
    }
    Ok(if at_inf { v[0] } else { v[n] })
}

/// An unhatted column assembled from hatted solves:
/// `X = G₀X̂`, `Y = G₀Ŷ e^{−iθsσ̂₃}G₀⁻¹(0)` and likewise `T = 𝒢₀T̂`,
/// `U = 𝒢₀Û e^{−iθsσ̂₃}𝒢₀⁻¹(0)`. Origin-normalized results are raw.
pub fn reconstruct_from_hat(
    kind: EigenfunctionKind,
    data: &dyn HalfLineData,
    k: Complex64,
    coord: f64,
    opts: &SolveOptions,
) -> Result<Column> {
    if kind.family.hatted() {
        return Err(NftError::Parameter(format!(
            "{} is already hatted; reconstruction takes X, Y, T or U",
            kind.family.name()
        )));
    }
    check_data(&kind, data)?;
    if k == Complex64::new(0.0, 0.0) {
        return Err(NftError::Domain(
            "spectral parameter k = 0 excluded: unhatted eigenfunctions are singular there".to_string(),
        ));
    }
    let g = gauge(data, coord)?;
    let hat = kind.family.hat();
    if kind.family.at_infinity() {
        let v = solve_eigenfunction(EigenfunctionKind::new(hat, kind.column)?, data, k, &[coord], opts)?;
        return Ok(g.mul_column(&v[0].column));
    }
    let mut cols = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (c, col) in cols.iter_mut().enumerate() {
        let v = solve_eigenfunction(EigenfunctionKind::new(hat, c)?, data, k, &[coord], opts)?;
        *col = unfactor(&v[0]);
    }
    let yhat = ComplexMatrix2::from_columns(cols[0], cols[1]);
    let th = side_theta(kind.family.side(), k);
    let ph = Complex64::new(0.0, -1.0) * th * coord;
    let em = ComplexMatrix2::diag(ph.exp(), (-ph).exp());
    let ep = ComplexMatrix2::diag((-ph).exp(), ph.exp());
    let g0_inv = gauge(data, 0.0)?.inverse().expect("rotations are invertible");
    let full = g * yhat * em * g0_inv * ep;
    Ok(full.column(kind.column))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{BoundaryData, InitialData};
    use crate::profiles;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn kink() -> InitialData {
        profiles::static_kink(0.0, -1).unwrap()
    }

    fn close(a: &Column, b: &Column, tol: f64) -> bool {
        (a[0] - b[0]).norm() <= tol && (a[1] - b[1]).norm() <= tol
    }

    #[test]
    fn zero_data_gives_identity_columns() {
        let d = InitialData::new(profiles::zero(), profiles::zero()).unwrap();
        for fam in [Family::X, Family::Y, Family::Xhat, Family::Yhat] {
            for col in 0..2 {
                let kind = EigenfunctionKind::new(fam, col).unwrap();
                let k = if col == 1 { c(2.0, 0.5) } else { c(2.0, -0.5) };
                let v = solve_eigenfunction(kind, &d, k, &[0.0, 1.0, 5.0], &SolveOptions::default()).unwrap();
                for x in v {
                    assert!(close(&unfactor(&x), &unit_column(col), 1e-8));
                }
            }
        }
    }

    #[test]
    fn origin_normalization() {
        let d = kink();
        let kind = EigenfunctionKind::new(Family::Y, 1).unwrap();
        for k in [c(2.0, 0.0), c(1.0, 3.0), c(0.3, -0.2)] {
            let v = solve_eigenfunction(kind, &d, k, &[0.0], &SolveOptions::default()).unwrap();
            assert_eq!(v[0].column, unit_column(1));
        }
    }

    #[test]
    fn region_and_domain_errors() {
        let d = kink();
        let x2 = EigenfunctionKind::new(Family::X, 1).unwrap();
        assert!(matches!(
            solve_eigenfunction(x2, &d, c(1.0, -1.0), &[0.0], &SolveOptions::default()),
            Err(NftError::Region(_))
        ));
        assert!(matches!(
            solve_eigenfunction(x2, &d, c(0.0, 0.0), &[0.0], &SolveOptions::default()),
            Err(NftError::Domain(_))
        ));
        let xh = EigenfunctionKind::new(Family::Xhat, 1).unwrap();
        let v = solve_eigenfunction(xh, &d, c(0.0, 0.0), &[0.0], &SolveOptions::default()).unwrap();
        assert_eq!(v[0].column, unit_column(1));
        let t2 = EigenfunctionKind::new(Family::T, 1).unwrap();
        assert!(matches!(
            solve_eigenfunction(t2, &d, c(2.0, 0.0), &[0.0], &SolveOptions::default()),
            Err(NftError::Parameter(_))
        ));
    }

    #[test]
    fn kink_x_matches_picard() {
        let d = kink();
        let opts = SolveOptions::with_tol(1e-10);
        let kind = EigenfunctionKind::new(Family::X, 1).unwrap();
        let k = c(2.0, 0.0);
        let v = solve_eigenfunction(kind, &d, k, &[0.0], &opts).unwrap()[0].column;
        let p = picard_oracle(kind, &d, k, 0.0, 12, 1e-3, &opts).unwrap();
        assert!(close(&v, &p, 1e-6), "{v:?} vs {p:?}");
    }

    #[test]
    fn picard_single_iteration_is_first_born_term() {
        // One iteration: v = e − ∫ₛᴸ e^{D(s−s')} P e ds'; for the second
        // column of X with small data, compare with a direct trapezoid sum.
        let d = InitialData::new(profiles::zero(), profiles::gaussian_bump(0.01, 1.0, 1.0).unwrap()).unwrap();
        let opts = SolveOptions::default();
        let kind = EigenfunctionKind::new(Family::X, 1).unwrap();
        let k = c(1.5, 0.0);
        let l = d.truncation_l;
        let p = picard_oracle(kind, &d, k, 0.0, 1, 1e-3, &opts).unwrap();
        let th = crate::region::theta1(k);
        let n = 200_000;
        let h = l / n as f64;
        let mut acc = [c(0.0, 0.0); 2];
        for i in 0..=n {
            let s = h * i as f64;
            let w = if i == 0 || i == n { 0.5 * h } else { h };
            let pe = system_potential(&d, false, s, k).unwrap().column(1);
            let ph = (c(0.0, -2.0) * th * (0.0 - s)).exp();
            acc[0] += pe[0] * ph * w;
            acc[1] += pe[1] * w;
        }
        let expect = [-acc[0], c(1.0, 0.0) - acc[1]];
        assert!(close(&p, &expect, 1e-9), "{p:?} vs {expect:?}");
    }

    #[test]
    fn determinant_and_symmetry_on_real_axis() {
        let d = kink();
        let opts = SolveOptions::with_tol(1e-10);
        for &kr in &[0.3, 1.7, 6.0] {
            let k = c(kr, 0.0);
            let x = solve_matrix(Family::X, &d, k, &[0.0, 1.0], &opts).unwrap();
            let y = solve_matrix(Family::Y, &d, k, &[0.5, 3.0], &opts).unwrap();
            for m in x.iter().chain(&y) {
                assert!((m.det() - c(1.0, 0.0)).norm() < 1e-8);
            }
            let xm = solve_matrix(Family::X, &d, -k, &[0.0, 1.0], &opts).unwrap();
            for (a, b) in x.iter().zip(&xm) {
                assert!((*a - b.sigma2_conjugate()).norm() < 1e-8);
                // X(k) = σ₂ conj(X(k̄)) σ₂ with k̄ = k on the axis
                assert!((*a - a.conj().sigma2_conjugate()).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn hat_reconstruction_matches_direct_solve() {
        let d = kink();
        let opts = SolveOptions::with_tol(1e-10);
        for &k in &[c(0.9, 0.0), c(1.2, 0.0), c(0.8, 0.6)] {
            for fam in [Family::X, Family::Y] {
                for col in 0..2 {
                    let kind = EigenfunctionKind::new(fam, col).unwrap();
                    if fam == Family::X && !kind.raw_bounded(k) {
                        continue;
                    }
                    let coord = 0.7;
                    let direct = solve_eigenfunction(kind, &d, k, &[coord], &opts).unwrap();
                    let direct = unfactor(&direct[0]);
                    let hat = reconstruct_from_hat(kind, &d, k, coord, &opts).unwrap();
                    assert!(close(&direct, &hat, 1e-7), "{fam:?} {col} {k}: {direct:?} vs {hat:?}");
                }
            }
        }
    }

    #[test]
    fn t_side_columns_on_both_routes() {
        let (_, b): (InitialData, BoundaryData) = profiles::generate_kink_data(2.0, 0.5, -1).unwrap();
        let opts = SolveOptions::with_tol(1e-10);
        let kind = EigenfunctionKind::new(Family::T, 1).unwrap();
        // D₃ point: lower half of the unit disk
        let k = c(0.5, -0.3);
        let direct = solve_eigenfunction(kind, &b, k, &[0.0], &opts).unwrap()[0].column;
        let hat = reconstruct_from_hat(kind, &b, k, 0.0, &opts).unwrap();
        assert!(close(&direct, &hat, 1e-7));
        let p = picard_oracle(kind, &b, k, 0.0, 20, 1e-3, &opts).unwrap();
        assert!(close(&direct, &p, 1e-6));
    }

    #[test]
    fn rk4_fallback_agrees() {
        let d = kink();
        let kind = EigenfunctionKind::new(Family::X, 1).unwrap();
        let k = c(3.0, 0.5);
        let a = solve_eigenfunction(kind, &d, k, &[0.0], &SolveOptions::with_tol(1e-10)).unwrap()[0].column;
        let opts = SolveOptions {
            tol: 1e-10,
            integrator: Integrator::Rk4Richardson,
            truncation_l: None,
        };
        let b = solve_eigenfunction(kind, &d, k, &[0.0], &opts).unwrap()[0].column;
        assert!(close(&a, &b, 1e-8));
    }
}
