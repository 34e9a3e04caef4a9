//! Profile library: trivial, kink, bump and perturbation families, plus
//! spline-backed profiles loaded from CSV.

use std::f64::consts::PI;
use std::path::Path;
use std::sync::Arc;

use crate::data::{BoundaryData, InitialData};
use crate::error::{NftError, Result};
use crate::exact::TravelingKink;
use crate::jet::Jet;
use crate::profile::{HalfLineProfile, Provenance, SAMPLED_MAX_ORDER};

/// Decay hint given to profiles that are identically at their limit.
const FLAT_DECAY_RATE: f64 = 1e3;

/// `f ≡ 0`.
pub fn zero() -> HalfLineProfile {
    constant(0.0)
}

/// `f ≡ value`. The winding is the nearest integer to `value / 2π`; the tail
/// check fails unless `value` is a multiple of `2π`.
pub fn constant(value: f64) -> HalfLineProfile {
    let n = (value / (2.0 * PI)).round() as i32;
    HalfLineProfile::analytic(format!("constant {value}"), n, FLAT_DECAY_RATE, 0.0, move |_, order| {
        Jet::constant(value, order)
    })
}

/// `f ≡ 2πN`.
pub fn constant_2pi_n(n: i32) -> HalfLineProfile {
    constant(2.0 * PI * n as f64)
}

/// `amplitude · exp(−((s − center)/width)²)`.
pub fn gaussian_bump(amplitude: f64, width: f64, center: f64) -> Result<HalfLineProfile> {
    if !(width > 0.0) {
        return Err(NftError::Parameter(format!("bump width {width} must be positive")));
    }
    Ok(HalfLineProfile::analytic(
        format!("bump {amplitude}/{width}"),
        0,
        1.0 / width,
        center.max(0.0),
        move |s, order| {
            let y = Jet::variable(s, order).add_scalar(-center).scale(1.0 / width);
            (-&(&y * &y)).exp().scale(amplitude)
        },
    ))
}

/// `ε · (s/w)^p · exp(−(s/w)⁶)`.
///
/// All derivatives of order below `p` vanish at the origin and the
/// derivatives of orders `p+1, …, p+5` vanish as well, so adding it to a
/// compatible data set breaks exactly the relation that involves the `p`-th
/// derivative.
pub fn flat_top_perturbation(epsilon: f64, width: f64, power: u32) -> Result<HalfLineProfile> {
    if !(width > 0.0) {
        return Err(NftError::Parameter(format!("perturbation width {width} must be positive")));
    }
    Ok(HalfLineProfile::analytic(
        format!("perturbation {epsilon}/{width}/{power}"),
        0,
        1.0 / width,
        width,
        move |s, order| {
            let y = Jet::variable(s, order).scale(1.0 / width);
            let y3 = y.powi(3);
            let g = (-&(&y3 * &y3)).exp();
            (&y.powi(power) * &g).scale(epsilon)
        },
    ))
}

/// `4·arctan(exp(σ(x − x₀)))` and `u₁ ≡ 0`: the standing kink at `t = 0`.
pub fn static_kink(x0: f64, sign: i32) -> Result<InitialData> {
    TravelingKink::new(x0, 0.0, sign)?.initial_data()
}

/// Initial and boundary data of the traveling kink
/// `4·arctan(exp(σγ(x − vt − x₀)))`.
pub fn generate_kink_data(x0: f64, v: f64, sign: i32) -> Result<(InitialData, BoundaryData)> {
    let kink = TravelingKink::new(x0, v, sign)?;
    Ok((kink.initial_data()?, kink.boundary_data()?))
}

/// Traveling-kink data with `g₁` replaced by `g₁ + ε·(t/w)^p·exp(−(t/w)⁶)`.
///
/// With `p = 0` only the relation `g₁(0) = u₀'(0)` breaks. With `p ≥ 1`
/// the data stay compatible to order `p`.
pub fn kink_perturbed(
    x0: f64,
    v: f64,
    sign: i32,
    epsilon: f64,
    width: f64,
    power: u32,
) -> Result<(InitialData, BoundaryData)> {
    let (init, bdry) = generate_kink_data(x0, v, sign)?;
    let g1 = bdry.g1.plus(&flat_top_perturbation(epsilon, width, power)?);
    let bdry = BoundaryData::new(bdry.g0, g1)?;
    Ok((init, bdry))
}

/// Clamped cubic spline through `(xs, ys)`.
#[derive(Clone, Debug)]
pub struct CubicSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// Second derivatives at the knots.
    m: Vec<f64>,
    /// Origin derivatives from one-sided finite differences.
    origin: [f64; 3],
}

/// Finite-difference weights for derivatives `0..=max_order` at `z` from
/// arbitrary nodes (Fornberg's recursion).
pub fn fd_weights(z: f64, nodes: &[f64], max_order: usize) -> Vec<Vec<f64>> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; n]; max_order + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - z;
    for i in 1..n {
        let mn = i.min(max_order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - z;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

fn one_sided(xs: &[f64], ys: &[f64], at_start: bool) -> [f64; 3] {
    let n = xs.len().min(6);
    let (nodes, vals): (Vec<f64>, Vec<f64>) = if at_start {
        (xs[..n].to_vec(), ys[..n].to_vec())
    } else {
        (xs[xs.len() - n..].to_vec(), ys[ys.len() - n..].to_vec())
    };
    let z = if at_start { xs[0] } else { xs[xs.len() - 1] };
    let w = fd_weights(z, &nodes, 2);
    let mut out = [0.0; 3];
    out[0] = if at_start { ys[0] } else { ys[ys.len() - 1] };
    for d in 1..3 {
        out[d] = w[d].iter().zip(&vals).map(|(a, b)| a * b).sum();
    }
    out
}

impl CubicSpline {
    /// Clamped spline whose end slopes come from one-sided finite
    /// differences of order four (order `n − 1` when fewer than five
    /// samples are available).
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        let n = xs.len();
        if n < 4 || ys.len() != n {
            return Err(NftError::Parameter(format!("a spline needs at least 4 samples, got {n}")));
        }
        let start = {
            let n5 = n.min(5);
            let w = fd_weights(xs[0], &xs[..n5], 1);
            w[1].iter().zip(&ys[..n5]).map(|(a, b)| a * b).sum::<f64>()
        };
        let end = {
            let n5 = n.min(5);
            let w = fd_weights(xs[n - 1], &xs[n - n5..], 1);
            w[1].iter().zip(&ys[n - n5..]).map(|(a, b)| a * b).sum::<f64>()
        };
        let mut origin = one_sided(&xs, &ys, true);
        origin[1] = start;

        // Tridiagonal system for the knot second derivatives.
        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let mut a = vec![0.0; n];
        let mut b = vec![0.0; n];
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        b[0] = h[0] / 3.0;
        c[0] = h[0] / 6.0;
        d[0] = (ys[1] - ys[0]) / h[0] - start;
        for i in 1..n - 1 {
            a[i] = h[i - 1] / 6.0;
            b[i] = (h[i - 1] + h[i]) / 3.0;
            c[i] = h[i] / 6.0;
            d[i] = (ys[i + 1] - ys[i]) / h[i] - (ys[i] - ys[i - 1]) / h[i - 1];
        }
        a[n - 1] = h[n - 2] / 6.0;
        b[n - 1] = h[n - 2] / 3.0;
        d[n - 1] = end - (ys[n - 1] - ys[n - 2]) / h[n - 2];
        for i in 1..n {
            let w = a[i] / b[i - 1];
            b[i] -= w * c[i - 1];
            d[i] -= w * d[i - 1];
        }
        let mut m = vec![0.0; n];
        m[n - 1] = d[n - 1] / b[n - 1];
        for i in (0..n - 1).rev() {
            m[i] = (d[i] - c[i] * m[i + 1]) / b[i];
        }
        Ok(Self { xs, ys, m, origin })
    }

    /// Derivatives `0..=3` at `s`. Constant extrapolation past the last knot.
    pub fn derivatives(&self, s: f64) -> [f64; 4] {
        let n = self.xs.len();
        if s == self.xs[0] {
            let third = (self.m[1] - self.m[0]) / (self.xs[1] - self.xs[0]);
            return [self.origin[0], self.origin[1], self.origin[2], third];
        }
        if s >= self.xs[n - 1] {
            return [self.ys[n - 1], 0.0, 0.0, 0.0];
        }
        let i = match self.xs.partition_point(|&x| x <= s) {
            0 => 0,
            p => (p - 1).min(n - 2),
        };
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - s) / h;
        let b = (s - self.xs[i]) / h;
        let (m0, m1, y0, y1) = (self.m[i], self.m[i + 1], self.ys[i], self.ys[i + 1]);
        let v = a * y0 + b * y1 + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0;
        let d1 = (y1 - y0) / h - (3.0 * a * a - 1.0) / 6.0 * h * m0 + (3.0 * b * b - 1.0) / 6.0 * h * m1;
        let d2 = a * m0 + b * m1;
        let d3 = (m1 - m0) / h;
        [v, d1, d2, d3]
    }
}

/// Spline-backed profile with derivatives certified to order 2. The
/// winding is inferred from the last sample.
pub fn sampled_profile(label: impl Into<String>, xs: Vec<f64>, ys: Vec<f64>) -> Result<HalfLineProfile> {
    let last = *ys.last().ok_or_else(|| NftError::Parameter("empty sample set".to_string()))?;
    let x_end = *xs.last().unwrap_or(&0.0);
    let spline = Arc::new(CubicSpline::new(xs, ys)?);
    let winding = (last / (2.0 * PI)).round() as i32;
    let f = move |s: f64, order: usize| {
        let d = spline.derivatives(s);
        let coeffs: Vec<f64> = (0..=order)
            .map(|n| if n < 4 { d[n] / crate::jet::factorial(n) } else { 0.0 })
            .collect();
        Jet::from_coeffs(&coeffs)
    };
    Ok(HalfLineProfile::from_parts(
        label.into(),
        Arc::new(f),
        SAMPLED_MAX_ORDER,
        winding,
        // beyond the last sample the profile is flat
        FLAT_DECAY_RATE,
        x_end,
        Provenance::Sampled,
    ))
}

/// Loads a two-column CSV (`x,value` or `t,value` header) into a spline
/// profile.
///
/// `value_column` selects the column holding the values (1 for the usual
/// two-column layout). The coordinate column must start at 0 and increase
/// strictly; at least four rows are required.
pub fn load_csv_profile(path: &Path, value_column: usize) -> Result<HalfLineProfile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| NftError::Io(format!("cannot read {}: {e}", path.display())))?;
    parse_csv_profile(&text, value_column, &path.display().to_string())
}

/// Parses CSV text in the format accepted by [`load_csv_profile`].
pub fn parse_csv_profile(text: &str, value_column: usize, label: &str) -> Result<HalfLineProfile> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| NftError::Parse { line: 1, msg: e.to_string() })?
        .clone();
    match headers.get(0) {
        Some("x") | Some("t") | Some("s") => {}
        other => {
            return Err(NftError::Parse {
                line: 1,
                msg: format!("first header must be 'x' or 't', found {other:?}"),
            })
        }
    }
    if headers.len() <= value_column {
        return Err(NftError::Parse {
            line: 1,
            msg: format!("header has {} columns, value column {value_column} requested", headers.len()),
        });
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| NftError::Parse { line, msg: e.to_string() })?;
        let field = |c: usize| -> Result<f64> {
            let raw = rec.get(c).ok_or_else(|| NftError::Parse {
                line,
                msg: format!("missing column {c}"),
            })?;
            let v: f64 = raw.parse().map_err(|_| NftError::Parse {
                line,
                msg: format!("cannot parse '{raw}' as a number"),
            })?;
            if !v.is_finite() {
                return Err(NftError::Parse { line, msg: format!("non-finite value '{raw}'") });
            }
            Ok(v)
        };
        let x = field(0)?;
        let y = field(value_column)?;
        if let Some(&prev) = xs.last() {
            if x <= prev {
                return Err(NftError::Parse {
                    line,
                    msg: format!("coordinate {x} does not increase (previous {prev})"),
                });
            }
        } else if x != 0.0 {
            return Err(NftError::Parse { line, msg: format!("grid must start at 0, starts at {x}") });
        }
        xs.push(x);
        ys.push(y);
    }
    if xs.len() < 4 {
        return Err(NftError::Parse {
            line: xs.len() + 1,
            msg: format!("at least 4 data rows required, found {}", xs.len()),
        });
    }
    sampled_profile(label, xs, ys)
}
