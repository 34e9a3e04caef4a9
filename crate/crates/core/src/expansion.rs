//! Formal series of the eigenfunctions at `k = ∞` and `k = 0`.
//!
//! With `ε = 1/k` (at infinity) or `ε = k` (at zero, hatted systems) the
//! phase is `θ = (p/ε + qε)/4` and the potential is `P₀ + εP₁`. Writing
//! `Φ = Σ A_j ε^j` in `Φ' + iθ[σ₃, Φ] = PΦ` gives
//!
//! ```text
//! A_{j+1}^(o) = −2ipσ₃(−∂A_j^(o) − (iq/2)σ₃A_{j−1}^(o) + P₀A_j^(d) + P₁^(o)A_{j−1}^(d) + P₁^(d)A_{j−1}^(o))
//! ∂A_{j+1}^(d) = P₀A_{j+1}^(o) + P₁^(o)A_j^(o) + P₁^(d)A_j^(d)
//! ```
//!
//! and the `W` series (multiplying `e^{2iθsσ₃}`) obeys the same relations
//! with the diagonal and off-diagonal parts exchanged. The coefficients are
//! carried as Taylor jets in the coordinate at every grid point, so that
//! `∂` acts exactly; the `∂⁻¹` steps use Hermite-corrected cumulative
//! quadrature.

use num_complex::Complex64;

use crate::data::{HalfLineData, Side};
use crate::eigen::{solve_eigenfunction, EigenfunctionKind, Family, SolveOptions};
use crate::error::{NftError, Result};
use crate::fit::loglog_slope;
use crate::matrix::ComplexMatrix2;
use crate::potential::{potential_part_jets, side_theta};
use crate::quadrature::{cumulative, uniform_grid};

pub const DEFAULT_GRID_POINTS: usize = 2001;

/// Extra jet orders carried beyond the minimum so that the last level
/// still gets the quintic quadrature rule.
const JET_HEADROOM: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Limit {
    Infinity,
    Zero,
}

impl Limit {
    pub fn name(&self) -> &'static str {
        match self {
            Limit::Infinity => "infinity",
            Limit::Zero => "zero",
        }
    }

    /// The expansion variable `ε`.
    pub fn epsilon(&self, k: Complex64) -> Result<Complex64> {
        match self {
            Limit::Infinity => {
                if k == Complex64::new(0.0, 0.0) {
                    return Err(NftError::Domain(
                        "spectral parameter k = 0 excluded for the expansion at infinity".to_string(),
                    ));
                }
                Ok(k.inv())
            }
            Limit::Zero => Ok(k),
        }
    }
}

/// `(p, q)` in `θ = (p/ε + qε)/4`.
fn phase_coefficients(side: Side, limit: Limit) -> (f64, f64) {
    match (side, limit) {
        (Side::X, Limit::Infinity) => (1.0, -1.0),
        (Side::T, Limit::Infinity) => (1.0, 1.0),
        (Side::X, Limit::Zero) => (-1.0, 1.0),
        (Side::T, Limit::Zero) => (1.0, 1.0),
    }
}

/// Coefficient functions on a grid.
#[derive(Clone, Debug)]
pub struct ExpansionTable {
    pub side: Side,
    pub limit: Limit,
    pub order: usize,
    pub grid: Vec<f64>,
    /// `X_j` (or `T_j`, hatted at zero) for `j = 0..=m+1`; `x[j][i]` at
    /// `grid[i]`.
    pub x: Vec<Vec<ComplexMatrix2>>,
    pub z: Vec<Vec<ComplexMatrix2>>,
    pub w: Vec<Vec<ComplexMatrix2>>,
    /// Coordinate derivatives of the coefficients, same layout.
    pub dx: Vec<Vec<ComplexMatrix2>>,
    pub dz: Vec<Vec<ComplexMatrix2>>,
    pub dw: Vec<Vec<ComplexMatrix2>>,
    /// Potential parts `(P₀, P₁)` on the grid.
    pub potential: Vec<(ComplexMatrix2, ComplexMatrix2)>,
}

type MJet = Vec<ComplexMatrix2>;

fn jet_add(a: &MJet, b: &MJet) -> MJet {
    a.iter().zip(b).map(|(x, y)| *x + *y).collect()
}

fn jet_mul(a: &MJet, b: &MJet) -> MJet {
    let n = a.len().min(b.len());
    (0..n)
        .map(|r| (0..=r).fold(ComplexMatrix2::zero(), |acc, i| acc + a[i] * b[r - i]))
        .collect()
}

fn jet_map(a: &MJet, f: impl Fn(&ComplexMatrix2) -> ComplexMatrix2) -> MJet {
    a.iter().map(f).collect()
}

fn jet_deriv(a: &MJet) -> MJet {
    a.iter().enumerate().skip(1).map(|(n, m)| m.scale(Complex64::new(n as f64, 0.0))).collect()
}

/// `f, f', f''` (as far as known) from Taylor coefficients.
fn jet_derivatives(a: &MJet) -> Vec<ComplexMatrix2> {
    a.iter().take(3).enumerate().map(|(n, m)| if n == 2 { *m * 2.0 } else { *m }).collect()
}

/// Jet with the given value whose derivative has Taylor coefficients `d`.
fn jet_integrate(value: ComplexMatrix2, d: &MJet) -> MJet {
    let mut out = Vec::with_capacity(d.len() + 1);
    out.push(value);
    out.extend(d.iter().enumerate().map(|(n, m)| *m * (1.0 / (n + 1) as f64)));
    out
}

struct Recursion {
    p: f64,
    q: f64,
}

impl Recursion {
    /// The algebraic part of level `j+1` from levels `j` and `j−1`. With
    /// `swap = false` this is the off-diagonal part of the `X`/`Z` series,
    /// with `swap = true` the diagonal part of the `W` series.
    fn algebraic(&self, aj: &MJet, ajm1: &MJet, p0: &MJet, p1: &MJet, swap: bool) -> MJet {
        let part = |m: &ComplexMatrix2, diag: bool| if diag { m.diagonal_part() } else { m.off_diagonal_part() };
        let alg = swap; // diagonal is the algebraic part for W
        let i = Complex64::new(0.0, 1.0);
        let s3 = ComplexMatrix2::sigma3();
        let aj_alg = jet_map(aj, |m| part(m, alg));
        let aj_int = jet_map(aj, |m| part(m, !alg));
        let ajm1_alg = jet_map(ajm1, |m| part(m, alg));
        let ajm1_int = jet_map(ajm1, |m| part(m, !alg));
        let p1o = jet_map(p1, |m| m.off_diagonal_part());
        let p1d = jet_map(p1, |m| m.diagonal_part());
        let mut acc = jet_map(&jet_deriv(&aj_alg), |m| -*m);
        let comm = jet_map(&ajm1_alg, |m| (s3 * *m).scale(-i * self.q / 2.0));
        acc = jet_add(&acc, &comm);
        acc = jet_add(&acc, &jet_mul(p0, &aj_int));
        acc = jet_add(&acc, &jet_mul(&p1o, &ajm1_int));
        acc = jet_add(&acc, &jet_mul(&p1d, &ajm1_alg));
        jet_map(&acc, |m| part(&(s3 * *m).scale(-2.0 * i * self.p), alg))
    }

    /// Derivative jet of the integrated part of level `j+1`.
    fn integrand(&self, alg_next: &MJet, aj: &MJet, p0: &MJet, p1: &MJet, swap: bool) -> MJet {
        let part = |m: &ComplexMatrix2, diag: bool| if diag { m.diagonal_part() } else { m.off_diagonal_part() };
        let alg = swap;
        let aj_alg = jet_map(aj, |m| part(m, alg));
        let aj_int = jet_map(aj, |m| part(m, !alg));
        let p1o = jet_map(p1, |m| m.off_diagonal_part());
        let p1d = jet_map(p1, |m| m.diagonal_part());
        let mut acc = jet_mul(p0, alg_next);
        acc = jet_add(&acc, &jet_mul(&p1o, &aj_alg));
        acc = jet_add(&acc, &jet_mul(&p1d, &aj_int));
        jet_map(&acc, |m| part(m, !alg))
    }
}

/// `n` equally spaced points on `[0, L]` with `L` the data's truncation
/// point.
pub fn default_grid(data: &dyn HalfLineData) -> Vec<f64> {
    uniform_grid(0.0, data.truncation_l(), DEFAULT_GRID_POINTS - 1)
}

/// Builds `X_j, Z_j, W_j` (or their t-side or hatted analogues) for
/// `j ≤ m + 1` on `grid`, which must start at 0 and increase.
pub fn build_expansion(
    side: Side,
    limit: Limit,
    data: &dyn HalfLineData,
    m: usize,
    grid: &[f64],
) -> Result<ExpansionTable> {
    if data.side() != side {
        return Err(NftError::Parameter(format!(
            "a {}-side expansion needs {}-side data",
            side.name(),
            side.name()
        )));
    }
    if grid.len() < 2 || grid[0] != 0.0 || grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(NftError::Parameter(
            "the expansion grid must start at 0 and increase strictly".to_string(),
        ));
    }
    let f0_max = data.f0().max_derivative_order();
    let f1_max = data.f1().max_derivative_order();
    if f0_max < m + 2 || f1_max < m + 1 {
        return Err(NftError::Capability(format!(
            "an order-{m} expansion needs {} derivatives of {} and {} of {}; the profiles provide {f0_max} and {f1_max}",
            m + 2,
            data.f0().label(),
            m + 1,
            data.f1().label()
        )));
    }
    let jet_order = (m + 1 + JET_HEADROOM).min(f0_max - 1).min(f1_max);
    let hatted = limit == Limit::Zero;
    let (p, q) = phase_coefficients(side, limit);
    let rec = Recursion { p, q };
    let n = grid.len();

    let mut p0 = Vec::with_capacity(n);
    let mut p1 = Vec::with_capacity(n);
    for &s in grid {
        let (a, b) = potential_part_jets(data, s, jet_order, hatted)?;
        p0.push(a);
        p1.push(b);
    }

    let full = jet_order + 2;
    let zero_jet: MJet = vec![ComplexMatrix2::zero(); full];
    let mut id_jet = zero_jet.clone();
    id_jet[0] = ComplexMatrix2::identity();

    // levels[j][i]: jets of level j at grid point i
    let mut xs: Vec<Vec<MJet>> = vec![vec![zero_jet.clone(); n], vec![id_jet.clone(); n]];
    let mut zs = xs.clone();
    let mut ws: Vec<Vec<MJet>> = vec![vec![zero_jet.clone(); n], vec![zero_jet; n]];

    for j in 1..=m + 1 {
        // Indices into the level vectors are shifted by one (level −1 at 0).
        let (cur, prev) = (j, j - 1);

        let x_alg: Vec<MJet> =
            (0..n).map(|i| rec.algebraic(&xs[cur][i], &xs[prev][i], &p0[i], &p1[i], false)).collect();
        let x_rhs: Vec<MJet> =
            (0..n).map(|i| rec.integrand(&x_alg[i], &xs[cur][i], &p0[i], &p1[i], false)).collect();
        let x_int = cumulative(
            grid,
            &x_rhs.iter().map(jet_derivatives).collect::<Vec<_>>(),
            ComplexMatrix2::zero(),
            true,
        );
        xs.push((0..n).map(|i| combine(&x_alg[i], x_int[i], &x_rhs[i])).collect());

        let z_alg: Vec<MJet> =
            (0..n).map(|i| rec.algebraic(&zs[cur][i], &zs[prev][i], &p0[i], &p1[i], false)).collect();
        let w_alg: Vec<MJet> =
            (0..n).map(|i| rec.algebraic(&ws[cur][i], &ws[prev][i], &p0[i], &p1[i], true)).collect();
        let z_rhs: Vec<MJet> =
            (0..n).map(|i| rec.integrand(&z_alg[i], &zs[cur][i], &p0[i], &p1[i], false)).collect();
        let w_rhs: Vec<MJet> =
            (0..n).map(|i| rec.integrand(&w_alg[i], &ws[cur][i], &p0[i], &p1[i], true)).collect();
        // Z_j(0) + W_j(0) = 0: each integrated part starts at minus the
        // other series' algebraic part.
        let z0 = -w_alg[0][0];
        let w0 = -z_alg[0][0];
        let z_int = cumulative(grid, &z_rhs.iter().map(jet_derivatives).collect::<Vec<_>>(), z0, false);
        let w_int = cumulative(grid, &w_rhs.iter().map(jet_derivatives).collect::<Vec<_>>(), w0, false);
        zs.push((0..n).map(|i| combine(&z_alg[i], z_int[i], &z_rhs[i])).collect());
        ws.push((0..n).map(|i| combine(&w_alg[i], w_int[i], &w_rhs[i])).collect());
    }

    let values = |levels: &[Vec<MJet>], k: usize| -> Vec<Vec<ComplexMatrix2>> {
        levels[1..].iter().map(|lvl| lvl.iter().map(|jet| jet.get(k).copied().unwrap_or_default()).collect()).collect()
    };
    Ok(ExpansionTable {
        side,
        limit,
        order: m,
        grid: grid.to_vec(),
        x: values(&xs, 0),
        z: values(&zs, 0),
        w: values(&ws, 0),
        dx: values(&xs, 1),
        dz: values(&zs, 1),
        dw: values(&ws, 1),
        potential: p0.iter().zip(&p1).map(|(a, b)| (a[0], b[0])).collect(),
    })
}

/// Level `j+1` jet from its algebraic part and the integrated part with
/// value `int` and derivative jet `rhs`.
fn combine(alg: &MJet, int: ComplexMatrix2, rhs: &MJet) -> MJet {
    jet_add(alg, &jet_integrate(int, rhs))
}

/// Which series of a table to assemble.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Series {
    /// `X_p` / `T_p` (hatted at zero), normalized at infinity.
    Primary,
    /// `Y_p` / `U_p` (hatted at zero), normalized at the origin.
    Origin,
}

impl ExpansionTable {
    /// Grid bracket and linear weight for `coord`.
    fn locate(&self, coord: f64) -> Result<(usize, f64)> {
        let last = *self.grid.last().expect("grid is nonempty");
        if !(coord >= 0.0 && coord <= last) {
            return Err(NftError::Domain(format!("coordinate {coord} lies outside the grid [0, {last}]")));
        }
        let i = self.grid.partition_point(|&g| g <= coord).clamp(1, self.grid.len() - 1) - 1;
        let t = (coord - self.grid[i]) / (self.grid[i + 1] - self.grid[i]);
        Ok((i, t))
    }

    fn interp(levels: &[Vec<ComplexMatrix2>], j: usize, i: usize, t: f64) -> ComplexMatrix2 {
        levels[j][i] * (1.0 - t) + levels[j][i + 1] * t
    }

    /// `X_j(coord)` etc. by linear interpolation.
    pub fn coefficient(&self, which: char, j: usize, coord: f64) -> Result<ComplexMatrix2> {
        if j > self.order + 1 {
            return Err(NftError::Parameter(format!(
                "coefficient {j} exceeds the table order {}",
                self.order + 1
            )));
        }
        let (i, t) = self.locate(coord)?;
        let levels = match which {
            'x' => &self.x,
            'z' => &self.z,
            'w' => &self.w,
            _ => return Err(NftError::Parameter(format!("unknown coefficient family {which:?}"))),
        };
        Ok(Self::interp(levels, j, i, t))
    }

    fn theta(&self, k: Complex64) -> Complex64 {
        side_theta(self.side, k)
    }
}

/// The truncated series with all `m + 1` coefficients, as in the theorem
/// statements.
pub fn evaluate_series(table: &ExpansionTable, series: Series, coord: f64, k: Complex64) -> Result<ComplexMatrix2> {
    evaluate_series_terms(table, series, coord, k, table.order + 1)
}

/// The series truncated after `terms` coefficients.
pub fn evaluate_series_terms(
    table: &ExpansionTable,
    series: Series,
    coord: f64,
    k: Complex64,
    terms: usize,
) -> Result<ComplexMatrix2> {
    if terms > table.order + 1 {
        return Err(NftError::Parameter(format!(
            "{terms} terms requested from a table holding {}",
            table.order + 1
        )));
    }
    let eps = table.limit.epsilon(k)?;
    let (i, t) = table.locate(coord)?;
    let mut main = ComplexMatrix2::identity();
    let mut osc = ComplexMatrix2::zero();
    let mut pow = Complex64::new(1.0, 0.0);
    for j in 1..=terms {
        pow *= eps;
        match series {
            Series::Primary => main = main + ExpansionTable::interp(&table.x, j, i, t).scale(pow),
            Series::Origin => {
                main = main + ExpansionTable::interp(&table.z, j, i, t).scale(pow);
                osc = osc + ExpansionTable::interp(&table.w, j, i, t).scale(pow);
            }
        }
    }
    if series == Series::Origin && terms > 0 {
        let ph = Complex64::new(0.0, 2.0) * table.theta(k) * coord;
        main = main + osc * ComplexMatrix2::diag(ph.exp(), (-ph).exp());
    }
    Ok(main)
}

/// `Φ' + iθ[σ₃, Φ] − PΦ` for the primary series at grid point `index`.
pub fn series_residual(table: &ExpansionTable, index: usize, k: Complex64) -> Result<ComplexMatrix2> {
    if index >= table.grid.len() {
        return Err(NftError::Parameter(format!("grid index {index} out of range")));
    }
    let eps = table.limit.epsilon(k)?;
    let mut phi = ComplexMatrix2::identity();
    let mut dphi = ComplexMatrix2::zero();
    let mut pow = Complex64::new(1.0, 0.0);
    for j in 1..=table.order + 1 {
        pow *= eps;
        phi = phi + table.x[j][index].scale(pow);
        dphi = dphi + table.dx[j][index].scale(pow);
    }
    let (p0, p1) = table.potential[index];
    let pot = p0 + p1.scale(eps);
    let th = table.theta(k);
    Ok(dphi + phi.commutator_sigma3().scale(Complex64::new(0.0, 1.0) * th) - pot * phi)
}

/// Outcome of a decay-order measurement.
#[derive(Clone, Debug, PartialEq)]
pub enum DecayOrder {
    Slope { slope: f64, points: Vec<(f64, f64)> },
    /// Every sample fell below the floor; no slope is meaningful.
    Saturated { max_remainder: f64 },
}

impl DecayOrder {
    pub fn slope(&self) -> Option<f64> {
        match self {
            DecayOrder::Slope { slope, .. } => Some(*slope),
            DecayOrder::Saturated { .. } => None,
        }
    }
}

/// Fits a slope to `(|k|, remainder)` pairs, dropping samples at or below
/// `floor`.
pub fn decay_order(points: Vec<(f64, f64)>, floor: f64) -> Result<DecayOrder> {
    let kept: Vec<(f64, f64)> = points.iter().copied().filter(|p| p.1 > floor).collect();
    if kept.len() < 2 {
        let max_remainder = points.iter().map(|p| p.1).fold(0.0, f64::max);
        return Ok(DecayOrder::Saturated { max_remainder });
    }
    Ok(DecayOrder::Slope {
        slope: loglog_slope(&kept)?,
        points: kept,
    })
}

/// Remainders below this are treated as the solver's noise floor.
pub const REMAINDER_FLOOR: f64 = 1e-13;

/// Measures how fast `X(0,k) − X_p(0,k)` (or the `T` or hatted analogue)
/// decays along `k_samples`, using the columns of `X` that are bounded at
/// each sample.
pub fn remainder_order(
    side: Side,
    limit: Limit,
    data: &dyn HalfLineData,
    m: usize,
    k_samples: &[Complex64],
    opts: &SolveOptions,
) -> Result<DecayOrder> {
    let table = build_expansion(side, limit, data, m, &default_grid(data))?;
    let family = match (side, limit) {
        (Side::X, Limit::Infinity) => Family::X,
        (Side::T, Limit::Infinity) => Family::T,
        (Side::X, Limit::Zero) => Family::Xhat,
        (Side::T, Limit::Zero) => Family::That,
    };
    let mut points = Vec::with_capacity(k_samples.len());
    for &k in k_samples {
        let approx = evaluate_series(&table, Series::Primary, 0.0, k)?;
        let mut worst: f64 = 0.0;
        let mut any = false;
        for col in 0..2 {
            let kind = EigenfunctionKind::new(family, col)?;
            if !kind.raw_bounded(k) {
                continue;
            }
            any = true;
            let v = solve_eigenfunction(kind, data, k, &[0.0], opts)?[0].column;
            let a = approx.column(col);
            worst = worst.max((v[0] - a[0]).norm().max((v[1] - a[1]).norm()));
        }
        if !any {
            return Err(NftError::Region(format!("no column of {} is bounded at k = {k}", family.name())));
        }
        points.push((k.norm(), worst));
    }
    decay_order(points, REMAINDER_FLOOR)
}
