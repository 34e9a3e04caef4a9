//! Versioned JSON run configuration and its resolution into data and
//! spectral grids.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sg_nft::compat::d1_samples;
use sg_nft::exact::TravelingKink;
use sg_nft::fit::geometric_samples;
use sg_nft::spectral::{SpectralOptions, DEFAULT_K_MIN, DEFAULT_SWITCH_RADIUS};
use sg_nft::{profiles, BoundaryData, HalfLineProfile, InitialData, NftError, Result, SpectralPoint};

pub const CONFIG_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub version: u32,
    pub data: Vec<ProfileSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_grid: Option<KGridSpec>,
    /// Which spectral functions `spectral` tabulates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantity: Option<Quantity>,
    /// Expansion order `m` for `expand` and `compat`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// Interior vertices of the alternate contour for `conservation`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contour: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSpec>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Zero,
    #[serde(rename = "constant2piN")]
    Constant2PiN,
    Kink,
    KinkPerturbed,
    GaussianBump,
    Csv,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SideSpec {
    X,
    T,
    #[default]
    Both,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSpec {
    pub family: Family,
    #[serde(default)]
    pub parameters: BTreeMap<String, Value>,
    #[serde(default)]
    pub side: SideSpec,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Quantity {
    #[serde(rename = "ab")]
    Ab,
    #[serde(rename = "AB")]
    CapitalAb,
    #[serde(rename = "cd")]
    Cd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridRegion {
    /// Real `k` in `±[min, max]` (or `[min, max]` when not symmetric).
    Real,
    /// Log-radial × angular samples of the closure of `D₁`.
    D1,
    /// Equally spaced points on the unit circle.
    Circle,
    /// The explicit `points` list.
    Points,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Linear,
    #[default]
    Log,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KGridSpec {
    pub region: GridRegion,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default)]
    pub spacing: Spacing,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<f64>,
    /// Mirror a real grid onto negative `k`.
    #[serde(default = "yes")]
    pub symmetric: bool,
    /// Angles per radius on the `D₁` grid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angles: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<[f64; 2]>,
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_solver_tol")]
    pub solver: f64,
    /// Compatibility pass/fail threshold; defaults by data provenance.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compat: Option<f64>,
    #[serde(default = "default_switch")]
    pub switch_radius: f64,
    #[serde(default = "default_k_min")]
    pub k_min: f64,
}

fn default_solver_tol() -> f64 {
    1e-10
}

fn default_switch() -> f64 {
    DEFAULT_SWITCH_RADIUS
}

fn default_k_min() -> f64 {
    DEFAULT_K_MIN
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            solver: default_solver_tol(),
            compat: None,
            switch_radius: default_switch(),
            k_min: default_k_min(),
        }
    }
}

impl Tolerances {
    pub fn spectral_options(&self) -> Result<SpectralOptions> {
        if !(self.solver > 0.0 && self.solver < 1.0) {
            return Err(NftError::Parameter(format!("solver tolerance {} must lie in (0, 1)", self.solver)));
        }
        let mut opts = SpectralOptions::with_tol(self.solver);
        opts.switch_radius = self.switch_radius;
        opts.k_min = self.k_min;
        opts.route(Complex64::new(1.0, 0.0))?;
        Ok(opts)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| NftError::Io(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    let cfg: RunConfig = serde_json::from_str(text).map_err(|e| NftError::Parse {
        line: e.line(),
        msg: format!("config: {e}"),
    })?;
    if cfg.version != CONFIG_VERSION {
        return Err(NftError::Parameter(format!(
            "config version {} is not supported (expected {CONFIG_VERSION})",
            cfg.version
        )));
    }
    Ok(cfg)
}

/// Data resolved from the profile specs.
pub struct ResolvedData {
    pub init: InitialData,
    pub bdry: BoundaryData,
    /// Present when both sides come from one traveling kink.
    pub exact: Option<TravelingKink>,
}

struct Params<'a> {
    family: Family,
    map: &'a BTreeMap<String, Value>,
}

impl Params<'_> {
    fn real(&self, name: &str, default: Option<f64>) -> Result<f64> {
        match self.map.get(name) {
            Some(v) => v.as_f64().ok_or_else(|| {
                NftError::Parameter(format!("{:?}: parameter '{name}' must be a number, got {v}", self.family))
            }),
            None => default.ok_or_else(|| NftError::Parameter(format!("{:?}: missing parameter '{name}'", self.family))),
        }
    }

    fn int(&self, name: &str, default: Option<i64>) -> Result<i64> {
        let v = self.real(name, default.map(|d| d as f64))?;
        if v.fract() != 0.0 || v.abs() > 1e9 {
            return Err(NftError::Parameter(format!("{:?}: parameter '{name}' must be an integer, got {v}", self.family)));
        }
        Ok(v as i64)
    }

    fn string(&self, name: &str) -> Result<Option<String>> {
        match self.map.get(name) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.clone())),
            Some(v) => Err(NftError::Parameter(format!("{:?}: parameter '{name}' must be a string, got {v}", self.family))),
        }
    }

    fn check_known(&self, known: &[&str]) -> Result<()> {
        match self.map.keys().find(|k| !known.contains(&k.as_str()) && k.as_str() != "L") {
            Some(k) => Err(NftError::Parameter(format!("{:?}: unknown parameter '{k}'", self.family))),
            None => Ok(()),
        }
    }
}

fn kink_from(p: &Params) -> Result<TravelingKink> {
    let v = p.real("v", Some(0.0))?;
    let sign = p.int("sign", Some(1))?;
    let kink = TravelingKink::new(p.real("x0", Some(0.0))?, v, sign as i32)?;
    if let Some(g) = p.map.get("gamma") {
        let g = g
            .as_f64()
            .ok_or_else(|| NftError::Parameter("kink: parameter 'gamma' must be a number".to_string()))?;
        if (g - kink.gamma).abs() > 1e-12 * kink.gamma {
            return Err(NftError::Parameter(format!(
                "kink: gamma = {g} is inconsistent with v = {v} (1/sqrt(1 - v^2) = {})",
                kink.gamma
            )));
        }
    }
    Ok(kink)
}

/// `(f₀, f₁)` for one side of a single-side family.
fn side_profiles(p: &Params, base: &Path) -> Result<(HalfLineProfile, HalfLineProfile)> {
    match p.family {
        Family::Zero => {
            p.check_known(&[])?;
            Ok((profiles::zero(), profiles::zero()))
        }
        Family::Constant2PiN => {
            p.check_known(&["N"])?;
            Ok((profiles::constant_2pi_n(p.int("N", None)? as i32), profiles::zero()))
        }
        Family::GaussianBump => {
            p.check_known(&["amplitude", "width", "center"])?;
            let bump = profiles::gaussian_bump(
                p.real("amplitude", None)?,
                p.real("width", Some(1.0))?,
                p.real("center", Some(0.0))?,
            )?;
            Ok((bump, profiles::zero()))
        }
        Family::Csv => {
            p.check_known(&["path", "path1"])?;
            let f0 = p
                .string("path")?
                .ok_or_else(|| NftError::Parameter("csv: missing parameter 'path'".to_string()))?;
            let f0 = profiles::load_csv_profile(&base.join(f0), 1)?;
            let f1 = match p.string("path1")? {
                Some(f1) => profiles::load_csv_profile(&base.join(f1), 1)?,
                None => profiles::zero(),
            };
            Ok((f0, f1))
        }
        Family::Kink | Family::KinkPerturbed => unreachable!("kink families resolve both sides together"),
    }
}

fn with_l<T>(p: &Params, value: T, set: impl FnOnce(T, f64) -> Result<T>) -> Result<T> {
    match p.map.get("L") {
        None => Ok(value),
        Some(_) => set(value, p.real("L", None)?),
    }
}

/// Resolves the profile specs into one initial and one boundary data set.
/// Relative CSV paths are taken from `base`.
pub fn resolve_data(specs: &[ProfileSpec], base: &Path) -> Result<ResolvedData> {
    let mut init: Option<InitialData> = None;
    let mut bdry: Option<BoundaryData> = None;
    let mut exact = None;
    for spec in specs {
        let p = Params {
            family: spec.family,
            map: &spec.parameters,
        };
        let (i, b) = match spec.family {
            Family::Kink | Family::KinkPerturbed => {
                let kink = if spec.family == Family::Kink {
                    p.check_known(&["x0", "v", "sign", "gamma"])?;
                    kink_from(&p)?
                } else {
                    p.check_known(&["x0", "v", "sign", "gamma", "epsilon", "width", "power"])?;
                    kink_from(&p)?
                };
                let want_x = spec.side != SideSpec::T;
                let want_t = spec.side != SideSpec::X;
                let i = if want_x { Some(kink.initial_data()?) } else { None };
                let b = if want_t {
                    if spec.family == Family::Kink {
                        Some(kink.boundary_data()?)
                    } else {
                        let power = p.int("power", Some(0))?;
                        if !(0..=32).contains(&power) {
                            return Err(NftError::Parameter(format!("kink_perturbed: power {power} must lie in 0..=32")));
                        }
                        let (_, b) = profiles::kink_perturbed(
                            kink.x0,
                            kink.v,
                            kink.sign as i32,
                            p.real("epsilon", None)?,
                            p.real("width", Some(1.0))?,
                            power as u32,
                        )?;
                        Some(b)
                    }
                } else {
                    None
                };
                if spec.family == Family::Kink && spec.side == SideSpec::Both && !spec.parameters.contains_key("L") {
                    exact = Some(kink);
                }
                (i, b)
            }
            _ => {
                let (f0, f1) = side_profiles(&p, base)?;
                let i = if spec.side != SideSpec::T {
                    Some(InitialData::new(f0.clone(), f1.clone())?)
                } else {
                    None
                };
                let b = if spec.side != SideSpec::X {
                    Some(BoundaryData::new(f0, f1)?)
                } else {
                    None
                };
                (i, b)
            }
        };
        if let Some(i) = i {
            if init.is_some() {
                return Err(NftError::Parameter("initial data (side x) specified twice".to_string()));
            }
            init = Some(with_l(&p, i, |d, l| d.with_truncation(l))?);
        }
        if let Some(b) = b {
            if bdry.is_some() {
                return Err(NftError::Parameter("boundary data (side t) specified twice".to_string()));
            }
            bdry = Some(with_l(&p, b, |d, l| d.with_truncation(l))?);
        }
    }
    match (init, bdry) {
        (Some(init), Some(bdry)) => Ok(ResolvedData { init, bdry, exact }),
        (None, _) => Err(NftError::Parameter("no initial data (side x) specified".to_string())),
        (_, None) => Err(NftError::Parameter("no boundary data (side t) specified".to_string())),
    }
}

fn spaced(a: f64, b: f64, n: usize, spacing: Spacing) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(NftError::Parameter("k-grid count must be positive".to_string()));
    }
    match spacing {
        Spacing::Log => {
            if !(a > 0.0 && b >= a) {
                return Err(NftError::Parameter(format!("log spacing needs 0 < min ≤ max, got [{a}, {b}]")));
            }
            Ok(geometric_samples(a, b, n))
        }
        Spacing::Linear => {
            if !(b >= a) {
                return Err(NftError::Parameter(format!("k-grid needs min ≤ max, got [{a}, {b}]")));
            }
            if n == 1 {
                return Ok(vec![a]);
            }
            Ok((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect())
        }
    }
}

/// Real grid `±[min, max]`: `count` points in total when symmetric.
pub fn real_grid(min: f64, max: f64, count: usize, spacing: Spacing, symmetric: bool) -> Result<Vec<Complex64>> {
    let half = if symmetric { count.div_ceil(2) } else { count };
    let pos = spaced(min, max, half, spacing)?;
    let mut out: Vec<Complex64> = Vec::with_capacity(2 * half);
    if symmetric {
        out.extend(pos.iter().rev().map(|&k| Complex64::new(-k, 0.0)));
    }
    out.extend(pos.iter().map(|&k| Complex64::new(k, 0.0)));
    Ok(out)
}

impl KGridSpec {
    pub fn points(&self) -> Result<Vec<SpectralPoint>> {
        let ks: Vec<Complex64> = match self.region {
            GridRegion::Real => real_grid(
                self.min.unwrap_or(0.05),
                self.max.unwrap_or(100.0),
                self.count.unwrap_or(200),
                self.spacing,
                self.symmetric,
            )?,
            GridRegion::D1 => {
                return d1_samples(
                    self.min.unwrap_or(1.0),
                    self.max.unwrap_or(20.0),
                    self.count.unwrap_or(10),
                    self.angles.unwrap_or(5),
                )
            }
            GridRegion::Circle => {
                let n = self.count.unwrap_or(64);
                (0..n)
                    .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64))
                    .collect()
            }
            GridRegion::Points => {
                if self.points.is_empty() {
                    return Err(NftError::Parameter("k-grid region 'points' needs a non-empty points list".to_string()));
                }
                self.points.iter().map(|p| Complex64::new(p[0], p[1])).collect()
            }
        };
        ks.into_iter().map(SpectralPoint::new).collect()
    }
}

/// The default grids: 200 real points in `±[0.05, 100]` plus 40 hatted
/// points in `±[10⁻³, 1]`.
pub fn default_verify_grid() -> Result<Vec<SpectralPoint>> {
    let mut ks = real_grid(0.05, 100.0, 200, Spacing::Log, true)?;
    ks.extend(real_grid(1e-3, 1.0, 40, Spacing::Log, true)?);
    ks.into_iter().map(SpectralPoint::new).collect()
}

pub fn default_spectral_grid() -> Result<Vec<SpectralPoint>> {
    real_grid(0.05, 100.0, 200, Spacing::Log, true)?
        .into_iter()
        .map(SpectralPoint::new)
        .collect()
}
