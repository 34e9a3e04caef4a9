//! The subcommands. Each returns a finished [`Report`] or the first error.

use std::path::Path;

use num_complex::Complex64;
use serde_json::Value;
use sg_nft::compat::{compatibility_residuals, conservation_contour_check, global_relation_residual, topological_charge};
use sg_nft::expansion::{
    build_expansion, decay_order, default_grid, evaluate_series_terms, DecayOrder, Limit, Series, REMAINDER_FLOOR,
};
use sg_nft::potential::gauge;
use sg_nft::spectral::{
    asymptotic_scalars, d_zero_limit, invariant_residuals, spectral_AB, spectral_ab, spectral_cd, sweep, Payload,
    SideScalars, SpectralOptions, SpectralSample,
};
use sg_nft::{BoundaryData, HalfLineData, InitialData, NftError, Result, Side, SpectralPoint};

use crate::config::{
    default_spectral_grid, default_verify_grid, resolve_data, Quantity, ResolvedData, RunConfig,
};
use crate::report::{Report, Sample, Slope};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Spectral,
    Expand,
    Verify,
    Compat,
    GlobalRelation,
    Conservation,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Spectral => "spectral",
            Command::Expand => "expand",
            Command::Verify => "verify",
            Command::Compat => "compat",
            Command::GlobalRelation => "global-relation",
            Command::Conservation => "conservation",
        }
    }
}

/// Exit status for an error: 2 configuration or CSV input, 3 region or
/// capability, 4 convergence, 5 I/O.
pub fn exit_code(e: &NftError) -> i32 {
    match e {
        NftError::Parameter(_) | NftError::Parse { .. } => 2,
        NftError::Domain(_) | NftError::Region(_) | NftError::Capability(_) | NftError::Decay(_) => 3,
        NftError::Convergence(_) => 4,
        NftError::Io(_) => 5,
    }
}

/// The machine-readable error object written to stderr.
pub fn error_object(e: &NftError) -> Value {
    serde_json::json!({
        "error": {
            "kind": e.kind(),
            "message": e.to_string(),
            "exit_code": exit_code(e),
        }
    })
}

/// Default expansion order for `expand` and `compat`.
pub const DEFAULT_ORDER: usize = 2;

/// Large-k samples for the remainder slopes.
pub const LARGE_K: [f64; 5] = [10.0, 20.0, 40.0, 80.0, 160.0];
/// Small-k samples for the zero-limit remainder slopes.
pub const SMALL_K: [f64; 4] = [0.005, 0.01, 0.02, 0.04];

pub fn run(command: Command, cfg: &RunConfig, base: &Path) -> Result<Report> {
    let echo = serde_json::to_value(cfg).map_err(|e| NftError::Parameter(e.to_string()))?;
    let mut report = Report::new(command.name(), echo);
    let data = resolve_data(&cfg.data, base)?;
    let opts = cfg.tolerances.spectral_options()?;
    match command {
        Command::Spectral => spectral(&mut report, cfg, &data, &opts)?,
        Command::Expand => expand(&mut report, cfg, &data, &opts)?,
        Command::Verify => verify(&mut report, cfg, &data, &opts)?,
        Command::Compat => compat(&mut report, cfg, &data)?,
        Command::GlobalRelation => global_relation(&mut report, cfg, &data, &opts)?,
        Command::Conservation => conservation(&mut report, cfg, &data)?,
    }
    report.finish();
    Ok(report)
}

fn grid_or(cfg: &RunConfig, default: fn() -> Result<Vec<SpectralPoint>>) -> Result<Vec<SpectralPoint>> {
    match &cfg.k_grid {
        Some(g) => g.points(),
        None => default(),
    }
}

fn spectral(report: &mut Report, cfg: &RunConfig, data: &ResolvedData, opts: &SpectralOptions) -> Result<()> {
    let grid = grid_or(cfg, default_spectral_grid)?;
    let quantity = cfg.quantity.unwrap_or(Quantity::Ab);
    let results = sweep(&grid, |k| match quantity {
        Quantity::Ab => spectral_ab(&data.init, k, opts),
        Quantity::CapitalAb => spectral_AB(&data.bdry, k, opts),
        Quantity::Cd => spectral_cd(&data.init, &data.bdry, k, opts),
    });
    for r in results {
        report.samples.push(sample_of(&r?));
    }
    report.summary.insert("quantity".to_string(), Value::from(quantity_name(quantity)));
    Ok(())
}

fn quantity_name(q: Quantity) -> &'static str {
    match q {
        Quantity::Ab => "ab",
        Quantity::CapitalAb => "AB",
        Quantity::Cd => "cd",
    }
}

fn sample_of(s: &SpectralSample) -> Sample {
    let mut out = Sample::new(s.point, Some(s.route.name()));
    match s.payload {
        Payload::Ab { a, b } => {
            out.set_complex("a", a);
            out.set_complex("b", b);
        }
        Payload::AB { A, B } => {
            out.set_complex("A", A);
            out.set_complex("B", B);
        }
        Payload::Cd { c, d } => {
            if let Some(c) = c {
                out.set_complex("c", c);
            }
            if let Some(d) = d {
                out.set_complex("d", d);
            }
        }
    }
    out
}

fn slope_of(d: DecayOrder, raw: &[(f64, f64)]) -> Slope {
    Slope {
        slope: d.slope(),
        points: raw.iter().map(|p| [p.0, p.1]).collect(),
    }
}

/// `(f, g)` at real `k`: `(a, b)` on the x-side, `(A, B)` on the t-side.
fn side_values(data: &dyn HalfLineData, init: &InitialData, bdry: &BoundaryData, k: f64, opts: &SpectralOptions) -> Result<(Complex64, Complex64)> {
    let p = SpectralPoint::real(k)?;
    match data.side() {
        Side::X => match spectral_ab(init, p, opts)?.payload {
            Payload::Ab { a, b } => Ok((a, b)),
            _ => unreachable!("spectral_ab returns (a, b)"),
        },
        Side::T => match spectral_AB(bdry, p, opts)?.payload {
            Payload::AB { A, B } => Ok((A, B)),
            _ => unreachable!("spectral_AB returns (A, B)"),
        },
    }
}

fn put_scalars(report: &mut Report, prefix: &str, hat: &str, s: &SideScalars) {
    let (d, o) = match prefix {
        "x" => ("a", "b"),
        _ => ("A", "B"),
    };
    report.set_complex_summary(&format!("{d}{hat}1"), s.diag1);
    report.set_complex_summary(&format!("{o}{hat}1"), s.off1);
    report.set_complex_summary(&format!("{o}{hat}2"), s.off2);
}

fn expand(report: &mut Report, cfg: &RunConfig, data: &ResolvedData, opts: &SpectralOptions) -> Result<()> {
    let m = cfg.order.unwrap_or(DEFAULT_ORDER);
    if m == 0 {
        return Err(NftError::Parameter("expansion order must be at least 1".to_string()));
    }
    let sc = asymptotic_scalars(&data.init, &data.bdry, m.min(2))?;
    put_scalars(report, "x", "", &sc.x_infinity);
    put_scalars(report, "x", "hat", &sc.x_zero);
    put_scalars(report, "t", "", &sc.t_infinity);
    put_scalars(report, "t", "hat", &sc.t_zero);
    for (j, c) in sc.c.iter().enumerate() {
        report.set_complex_summary(&format!("c{}", j + 1), *c);
    }
    report.set_complex_summary("d1", sc.d1);
    report.summary.insert("order".to_string(), Value::from(m));

    let sides: [(&dyn HalfLineData, &str, &str, &SideScalars); 2] = [
        (&data.init, "a", "b", &sc.x_zero),
        (&data.bdry, "A", "B", &sc.t_zero),
    ];
    for (side, dname, oname, zero) in sides {
        let table = build_expansion(side.side(), Limit::Infinity, side, m, &default_grid(side))?;
        let (mut rd, mut ro) = (vec![], vec![]);
        for k in LARGE_K {
            let (f, g) = side_values(side, &data.init, &data.bdry, k, opts)?;
            let s = evaluate_series_terms(&table, Series::Primary, 0.0, Complex64::new(k, 0.0), m)?;
            rd.push((k, (f - s.e22).norm()));
            ro.push((k, (g - s.e12).norm()));
        }
        report.slopes.insert(format!("large_k_{dname}"), slope_of(decay_order(rd.clone(), REMAINDER_FLOOR)?, &rd));
        report.slopes.insert(format!("large_k_{oname}"), slope_of(decay_order(ro.clone(), REMAINDER_FLOOR)?, &ro));

        let g0 = gauge(side, 0.0)?;
        let one = Complex64::new(1.0, 0.0);
        let mut rz = vec![];
        for k in SMALL_K {
            let (f, g) = side_values(side, &data.init, &data.bdry, k, opts)?;
            let v = g0.mul_column(&[zero.off1 * k, one + zero.diag1 * k]);
            rz.push((k, ((g - v[0]).norm_sqr() + (f - v[1]).norm_sqr()).sqrt()));
        }
        report.slopes.insert(format!("small_k_{oname}{dname}"), slope_of(decay_order(rz.clone(), REMAINDER_FLOOR)?, &rz));
    }
    Ok(())
}

fn verify(report: &mut Report, cfg: &RunConfig, data: &ResolvedData, opts: &SpectralOptions) -> Result<()> {
    let grid = grid_or(cfg, default_verify_grid)?;
    let r = invariant_residuals(&data.init, &data.bdry, &grid, opts)?;
    for (name, v) in r.entries() {
        if let Some(v) = v {
            report.residuals.insert(name.to_string(), v);
        }
    }
    report.summary.insert("grid_points".to_string(), Value::from(grid.len()));
    Ok(())
}

fn compat(report: &mut Report, cfg: &RunConfig, data: &ResolvedData) -> Result<()> {
    let order = cfg.order.unwrap_or(DEFAULT_ORDER);
    let r = compatibility_residuals(&data.init, &data.bdry, order, cfg.tolerances.compat)?;
    for rel in &r.residuals {
        report.residuals.insert(rel.label.clone(), rel.residual);
    }
    let failing: Vec<Value> = r.failing().iter().map(|rel| Value::from(rel.label.clone())).collect();
    report.summary.insert("order".to_string(), Value::from(r.order));
    report.summary.insert("tolerance".to_string(), Value::from(r.tolerance));
    report.summary.insert("pass".to_string(), Value::from(r.pass));
    report.summary.insert("failing".to_string(), Value::Array(failing));
    report
        .summary
        .insert("topological_charge".to_string(), Value::from(topological_charge(&data.init, &data.bdry)?));
    Ok(())
}

fn global_relation(report: &mut Report, cfg: &RunConfig, data: &ResolvedData, opts: &SpectralOptions) -> Result<()> {
    let grid = match &cfg.k_grid {
        Some(g) => g.points()?,
        None => sg_nft::compat::default_d1_samples(),
    };
    let r = global_relation_residual(&data.init, &data.bdry, &grid, opts);
    for (k, c) in r.samples {
        let mut s = Sample::new(k, None);
        s.set_complex("c", c?);
        report.samples.push(s);
    }
    report.residuals.insert("sup_c".to_string(), r.sup_c);
    let (d, dist) = d_zero_limit(&data.init, &data.bdry, opts)?;
    report.set_complex_summary("d_probe", d);
    report.residuals.insert("d_zero_limit".to_string(), dist);
    Ok(())
}

fn conservation(report: &mut Report, cfg: &RunConfig, data: &ResolvedData) -> Result<()> {
    let exact = data.exact.as_ref().ok_or_else(|| {
        NftError::Capability(
            "the conservation check needs data from an exact solution (family 'kink' with side 'both')".to_string(),
        )
    })?;
    let l = data.init.truncation_l.max(data.bdry.truncation_l);
    let mut alternate = vec![(l, 0.0)];
    alternate.extend(cfg.contour.iter().flatten().map(|p| (p[0], p[1])));
    alternate.push((0.0, l));
    let check = conservation_contour_check(exact, l, &alternate)?;
    let sc = asymptotic_scalars(&data.init, &data.bdry, 1)?;
    report.set_complex_summary("d1", sc.d1);
    report.set_complex_summary("gamma", check.gamma);
    report.set_complex_summary("alternate", check.alternate);
    report.summary.insert("L".to_string(), Value::from(l));
    report.residuals.insert("contour_independence".to_string(), check.residual);
    report.residuals.insert("d1_vs_contour".to_string(), (sc.d1 - check.gamma).norm());
    Ok(())
}
