//! Independent oracle for the low-order expansion coefficients: the
//! explicit integral formulas evaluated by composite Simpson quadrature on a
//! grid eight times finer than the coefficient grid.

use num_complex::Complex64;
use sg_nft::expansion::{build_expansion, default_grid, ExpansionTable, Limit};
use sg_nft::profiles;
use sg_nft::{ComplexMatrix2, HalfLineData, Side};

type C = Complex64;

const REFINE: usize = 8;

fn i() -> C {
    C::new(0.0, 1.0)
}

fn r(x: f64) -> C {
    C::new(x, 0.0)
}

/// Cumulative Simpson integral from the first sample; returns values at
/// every second sample.
fn cum_simpson(h: f64, v: &[C]) -> Vec<C> {
    let mut out = vec![C::new(0.0, 0.0)];
    let mut acc = C::new(0.0, 0.0);
    for p in (0..v.len() - 2).step_by(2) {
        acc += (v[p] + v[p + 1] * 4.0 + v[p + 2]) * (h / 3.0);
        out.push(acc);
    }
    out
}

/// Samples of `f₀, f₀', f₀'', f₁, f₁'` on the fine grid.
struct Fine {
    h: f64,
    f0: Vec<f64>,
    f0s: Vec<f64>,
    f0ss: Vec<f64>,
    f1: Vec<f64>,
    f1s: Vec<f64>,
}

impl Fine {
    fn new(data: &dyn HalfLineData, l: f64, coarse_cells: usize) -> Self {
        let n = coarse_cells * REFINE;
        let h = l / n as f64;
        let pts: Vec<f64> = (0..=n).map(|j| if j == n { l } else { h * j as f64 }).collect();
        let ev = |p: &sg_nft::HalfLineProfile, o: usize| -> Vec<f64> { pts.iter().map(|&s| p.eval(s, o).unwrap()).collect() };
        Fine {
            h,
            f0: ev(data.f0(), 0),
            f0s: ev(data.f0(), 1),
            f0ss: ev(data.f0(), 2),
            f1: ev(data.f1(), 0),
            f1s: ev(data.f1(), 1),
        }
    }

    /// Integral from 0 at every even fine point.
    fn from_zero(&self, v: &[C]) -> Vec<C> {
        cum_simpson(self.h, v)
    }

    /// Integral from the end point at every even fine point (`∫_∞^s`).
    fn from_end(&self, v: &[C]) -> Vec<C> {
        let up = cum_simpson(self.h, v);
        let total = *up.last().unwrap();
        up.iter().map(|x| *x - total).collect()
    }
}

fn sigma(n: usize) -> ComplexMatrix2 {
    match n {
        1 => ComplexMatrix2::sigma1(),
        2 => ComplexMatrix2::sigma2(),
        _ => ComplexMatrix2::sigma3(),
    }
}

fn max_err(table_levels: &[Vec<ComplexMatrix2>], j: usize, oracle: impl Fn(usize) -> ComplexMatrix2) -> f64 {
    table_levels[j]
        .iter()
        .enumerate()
        .map(|(c, m)| (*m - oracle(c)).max_abs())
        .fold(0.0, f64::max)
}

/// Coefficient formulas shared by all four (side, limit) cases. With
/// `σ` the combination entering `P₀` (`u₀ₓ + u₁`, `u₀ₓ − u₁`, `g₁ + g₀ₜ`
/// or `g₁ − g₀ₜ`) and `g` the integrand of the first diagonal term, the
/// order-one coefficients read
/// `X₁ = iσ/2 σ₁ + c₁ σ₃ ∫_∞ g`, `Z₁ = iσ/2 σ₁ + c₁ σ₃ ∫_0 g`,
/// `W₁ = −iσ(0)/2 σ₁`.
struct Case {
    fine: Fine,
    sig: Vec<f64>,
    sig_s: Vec<f64>,
    g: Vec<f64>,
    c1: C,
}

impl Case {
    fn x_one(&self) -> (Vec<C>, Vec<C>) {
        let gv: Vec<C> = self.g.iter().map(|&x| r(x)).collect();
        (self.fine.from_end(&gv), self.fine.from_zero(&gv))
    }
}

fn order_one_errors(t: &ExpansionTable, case: &Case) -> Vec<(String, f64)> {
    let (ie, iz) = case.x_one();
    let at = |c: usize| c * REFINE;
    let e1 = max_err(&t.x, 1, |c| {
        sigma(1).scale(i() * case.sig[at(c)] / 2.0) + sigma(3).scale(case.c1 * ie[at(c) / 2])
    });
    let e2 = max_err(&t.z, 1, |c| {
        sigma(1).scale(i() * case.sig[at(c)] / 2.0) + sigma(3).scale(case.c1 * iz[at(c) / 2])
    });
    let e3 = max_err(&t.w, 1, |_| sigma(1).scale(-i() * case.sig[0] / 2.0));
    let names = [("X", "Z", "W"), ("T", "Z", "W")];
    let (x, z, w) = names[(t.side == Side::T) as usize];
    let hat = if t.limit == Limit::Zero { "hat" } else { "" };
    vec![(format!("{x}{hat}1"), e1), (format!("{z}{hat}1"), e2), (format!("{w}{hat}1"), e3)]
}

fn x_case(data: &dyn HalfLineData, hatted: bool, cells: usize) -> Case {
    let fine = Fine::new(data, data.truncation_l(), cells);
    let n = fine.f0.len();
    let sgn = if hatted { -1.0 } else { 1.0 };
    let sig: Vec<f64> = (0..n).map(|j| fine.f0s[j] + sgn * fine.f1[j]).collect();
    let sig_s: Vec<f64> = (0..n).map(|j| fine.f0ss[j] + sgn * fine.f1s[j]).collect();
    let g: Vec<f64> = (0..n)
        .map(|j| {
            if hatted {
                sig[j] * sig[j] / 2.0 + 1.0 - fine.f0[j].cos()
            } else {
                -sig[j] * sig[j] / 2.0 + fine.f0[j].cos() - 1.0
            }
        })
        .collect();
    Case { fine, sig, sig_s, g, c1: i() / 4.0 }
}

fn t_case(data: &dyn HalfLineData, hatted: bool, cells: usize) -> Case {
    let fine = Fine::new(data, data.truncation_l(), cells);
    let n = fine.f0.len();
    let sgn = if hatted { -1.0 } else { 1.0 };
    // σ = g₁ ± g₀ₜ
    let sig: Vec<f64> = (0..n).map(|j| fine.f1[j] + sgn * fine.f0s[j]).collect();
    let sig_s: Vec<f64> = (0..n).map(|j| fine.f1s[j] + sgn * fine.f0ss[j]).collect();
    let g: Vec<f64> = (0..n).map(|j| sig[j] * sig[j] / 2.0 + fine.f0[j].cos() - 1.0).collect();
    Case { fine, sig, sig_s, g, c1: -i() / 4.0 }
}

pub fn x_side_at_infinity() -> Vec<(String, f64)> {
    let (init, _) = profiles::generate_kink_data(2.0, 0.5, -1).unwrap();
    let grid = default_grid(&init);
    let cells = grid.len() - 1;
    let t = build_expansion(Side::X, Limit::Infinity, &init, 2, &grid).unwrap();
    let case = x_case(&init, false, cells);
    let mut out = order_one_errors(&t, &case);

    // X₂ and Z₂ from the closed forms.
    let f = &case.fine;
    let (ie, iz) = case.x_one();
    let even = |v: &Vec<f64>| -> Vec<f64> { v.iter().step_by(2).copied().collect() };
    let (sig, sig_s, g) = (even(&case.sig), even(&case.sig_s), even(&case.g));
    let (f0, f0ss, f1s) = (even(&f.f0), even(&f.f0ss), even(&f.f1s));
    let x22: Vec<C> = ie.iter().map(|v| -case.c1 * v).collect();
    let z22: Vec<C> = iz.iter().map(|v| -case.c1 * v).collect();
    let integrand = |d22: &Vec<C>| -> Vec<C> {
        (0..sig.len()).map(|p| -i() / 4.0 * g[p] * d22[p] - r(0.25 * sig[p] * sig_s[p])).collect()
    };
    let h2 = 2.0 * f.h;
    let outer_x = {
        let up = cum_simpson(h2, &integrand(&x22));
        let total = *up.last().unwrap();
        up.iter().map(|v| *v - total).collect::<Vec<_>>()
    };
    let outer_z = cum_simpson(h2, &integrand(&z22));
    let alg = |p: usize, d22: C| {
        sigma(2).scale(i() * (r(-f0ss[p] - f1s[p]) + i() / 2.0 * sig[p] * d22 + r(0.5 * f0[p].sin())))
    };
    let e = max_err(&t.x, 2, |c| {
        let p = c * REFINE / 2;
        alg(p, x22[p]) + ComplexMatrix2::identity().scale(outer_x[p / 2])
    });
    out.push(("X2".to_string(), e));
    let s0 = sig[0];
    let e = max_err(&t.z, 2, |c| {
        let p = c * REFINE / 2;
        alg(p, z22[p]) + ComplexMatrix2::identity().scale(outer_z[p / 2] - r(s0 * s0 / 4.0))
    });
    out.push(("Z2".to_string(), e));

    // W₂ with (W₁)₁₂ = −iσ(0)/2.
    let w12 = -i() * s0 / 2.0;
    let wint: Vec<C> = (0..sig.len()).map(|p| r(0.25 * (sig[p] * sig[p] / 2.0 - f0[p].cos() + 1.0)) * w12).collect();
    let wcum = cum_simpson(h2, &wint);
    let konst = -i() * (r(-(f0ss[0] + f1s[0])) + r(0.5 * f0[0].sin()));
    let e = max_err(&t.w, 2, |c| {
        let p = c * REFINE / 2;
        ComplexMatrix2::identity().scale(i() / 2.0 * sig[p] * w12) + sigma(2).scale(wcum[p / 2] + konst)
    });
    out.push(("W2".to_string(), e));
    out
}

pub fn x_side_at_zero() -> Vec<(String, f64)> {
    let (init, _) = profiles::generate_kink_data(2.0, 0.5, -1).unwrap();
    let grid = default_grid(&init);
    let cells = grid.len() - 1;
    let t = build_expansion(Side::X, Limit::Zero, &init, 2, &grid).unwrap();
    let case = x_case(&init, true, cells);
    let mut out = order_one_errors(&t, &case);

    let f = &case.fine;
    let (ie, _) = case.x_one();
    let even = |v: &Vec<f64>| -> Vec<f64> { v.iter().step_by(2).copied().collect() };
    let (sig, sig_s, f0) = (even(&case.sig), even(&case.sig_s), even(&f.f0));
    let x22: Vec<C> = ie.iter().map(|v| -case.c1 * v).collect();
    // X̂₂: i[σ' + iσ/2 (X̂₁)₂₂ − sin u₀/2]σ₂ + I∫_∞[(i/8)(2cos u₀ − 2 − σ²)(X̂₁)₂₂ − σσ'/4]
    let integrand: Vec<C> = (0..sig.len())
        .map(|p| i() / 8.0 * (2.0 * f0[p].cos() - 2.0 - sig[p] * sig[p]) * x22[p] - r(sig[p] * sig_s[p] / 4.0))
        .collect();
    let up = cum_simpson(2.0 * f.h, &integrand);
    let total = *up.last().unwrap();
    let e = max_err(&t.x, 2, |c| {
        let p = c * REFINE / 2;
        sigma(2).scale(i() * (r(sig_s[p]) + i() * sig[p] / 2.0 * x22[p] - r(0.5 * f0[p].sin())))
            + ComplexMatrix2::identity().scale(up[p / 2] - total)
    });
    out.push(("Xhat2".to_string(), e));
    out
}

pub fn t_side_at_infinity() -> Vec<(String, f64)> {
    let (_, bdry) = profiles::generate_kink_data(2.0, 0.5, -1).unwrap();
    let grid = default_grid(&bdry);
    let cells = grid.len() - 1;
    let t = build_expansion(Side::T, Limit::Infinity, &bdry, 2, &grid).unwrap();
    let case = t_case(&bdry, false, cells);
    let mut out = order_one_errors(&t, &case);

    let f = &case.fine;
    let (ie, _) = case.x_one();
    let even = |v: &Vec<f64>| -> Vec<f64> { v.iter().step_by(2).copied().collect() };
    let (sig, sig_s, g, f0, f0ss, f1s) =
        (even(&case.sig), even(&case.sig_s), even(&case.g), even(&f.f0), even(&f.f0ss), even(&f.f1s));
    let t22: Vec<C> = ie.iter().map(|v| -case.c1 * v).collect();
    let integrand: Vec<C> =
        (0..sig.len()).map(|p| i() / 4.0 * g[p] * t22[p] - r(0.25 * sig[p] * sig_s[p])).collect();
    let up = cum_simpson(2.0 * f.h, &integrand);
    let total = *up.last().unwrap();
    let e = max_err(&t.x, 2, |c| {
        let p = c * REFINE / 2;
        sigma(2).scale(i() * (r(-f0ss[p] - f1s[p]) + i() / 2.0 * sig[p] * t22[p] - r(0.5 * f0[p].sin())))
            + ComplexMatrix2::identity().scale(up[p / 2] - total)
    });
    out.push(("T2".to_string(), e));
    out
}

pub fn t_side_at_zero() -> Vec<(String, f64)> {
    let (_, bdry) = profiles::generate_kink_data(2.0, 0.5, -1).unwrap();
    let grid = default_grid(&bdry);
    let cells = grid.len() - 1;
    let t = build_expansion(Side::T, Limit::Zero, &bdry, 2, &grid).unwrap();
    let case = t_case(&bdry, true, cells);
    let mut out = order_one_errors(&t, &case);

    let f = &case.fine;
    let (ie, _) = case.x_one();
    let even = |v: &Vec<f64>| -> Vec<f64> { v.iter().step_by(2).copied().collect() };
    let (sig, sig_s, g, f0, f0ss, f1s) =
        (even(&case.sig), even(&case.sig_s), even(&case.g), even(&f.f0), even(&f.f0ss), even(&f.f1s));
    let t22: Vec<C> = ie.iter().map(|v| -case.c1 * v).collect();
    let integrand: Vec<C> =
        (0..sig.len()).map(|p| i() / 4.0 * g[p] * t22[p] - r(0.25 * sig[p] * sig_s[p])).collect();
    let up = cum_simpson(2.0 * f.h, &integrand);
    let total = *up.last().unwrap();
    let e = max_err(&t.x, 2, |c| {
        let p = c * REFINE / 2;
        sigma(2).scale(i() * (r(f0ss[p] - f1s[p]) + i() / 2.0 * sig[p] * t22[p] + r(0.5 * f0[p].sin())))
            + ComplexMatrix2::identity().scale(up[p / 2] - total)
    });
    out.push(("That2".to_string(), e));
    out
}
