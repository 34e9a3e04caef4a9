//! Initial and boundary data for the quarter-plane problem.

use crate::error::{NftError, Result};
use crate::profile::HalfLineProfile;

/// Default tolerance used to pick the truncation point of the half-line.
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

/// Which half of the Lax pair a data set feeds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// Spatial half-line at `t = 0`; phase `θ₁`.
    X,
    /// Temporal half-line at `x = 0`; phase `θ₂`.
    T,
}

impl Side {
    pub fn name(&self) -> &'static str {
        match self {
            Side::X => "x",
            Side::T => "t",
        }
    }
}

/// `{u₀, u₁, N_x}`: `u(x,0)` and `u_t(x,0)` on `x ≥ 0`.
#[derive(Clone, Debug)]
pub struct InitialData {
    pub u0: HalfLineProfile,
    pub u1: HalfLineProfile,
    pub n_x: i32,
    pub truncation_l: f64,
}

/// `{g₀, g₁, N_t}`: `u(0,t)` and `u_x(0,t)` on `t ≥ 0`.
#[derive(Clone, Debug)]
pub struct BoundaryData {
    pub g0: HalfLineProfile,
    pub g1: HalfLineProfile,
    pub n_t: i32,
    pub truncation_l: f64,
}

fn validate(f0: &HalfLineProfile, f1: &HalfLineProfile, winding: i32, what: &str) -> Result<()> {
    if f0.winding() != winding {
        return Err(NftError::Parameter(format!(
            "{what}: leading profile winds to {} but the data declare {winding}",
            f0.winding()
        )));
    }
    if f1.winding() != 0 {
        return Err(NftError::Parameter(format!(
            "{what}: derivative profile must decay to 0, declares winding {}",
            f1.winding()
        )));
    }
    Ok(())
}

fn default_length(f0: &HalfLineProfile, f1: &HalfLineProfile) -> f64 {
    f0.truncation_length(DEFAULT_TAIL_TOL)
        .max(f1.truncation_length(DEFAULT_TAIL_TOL))
}

impl InitialData {
    /// Builds the data with the truncation point derived from the decay
    /// metadata at [`DEFAULT_TAIL_TOL`].
    pub fn new(u0: HalfLineProfile, u1: HalfLineProfile) -> Result<Self> {
        let n_x = u0.winding();
        validate(&u0, &u1, n_x, "initial data")?;
        let truncation_l = default_length(&u0, &u1);
        Ok(Self { u0, u1, n_x, truncation_l })
    }

    pub fn with_truncation(mut self, l: f64) -> Result<Self> {
        if !(l > 0.0 && l.is_finite()) {
            return Err(NftError::Parameter(format!("truncation length {l} must be positive")));
        }
        self.truncation_l = l;
        Ok(self)
    }
}

impl BoundaryData {
    pub fn new(g0: HalfLineProfile, g1: HalfLineProfile) -> Result<Self> {
        let n_t = g0.winding();
        validate(&g0, &g1, n_t, "boundary data")?;
        let truncation_l = default_length(&g0, &g1);
        Ok(Self { g0, g1, n_t, truncation_l })
    }

    pub fn with_truncation(mut self, l: f64) -> Result<Self> {
        if !(l > 0.0 && l.is_finite()) {
            return Err(NftError::Parameter(format!("truncation length {l} must be positive")));
        }
        self.truncation_l = l;
        Ok(self)
    }
}

/// Side-agnostic view used by the solvers: `f₀` is `u₀` or `g₀`, `f₁` is
/// `u₁` or `g₁`.
pub trait HalfLineData: Send + Sync {
    fn side(&self) -> Side;
    fn f0(&self) -> &HalfLineProfile;
    fn f1(&self) -> &HalfLineProfile;
    fn winding(&self) -> i32;
    fn truncation_l(&self) -> f64;
}

impl HalfLineData for InitialData {
    fn side(&self) -> Side {
        Side::X
    }
    fn f0(&self) -> &HalfLineProfile {
        &self.u0
    }
    fn f1(&self) -> &HalfLineProfile {
        &self.u1
    }
    fn winding(&self) -> i32 {
        self.n_x
    }
    fn truncation_l(&self) -> f64 {
        self.truncation_l
    }
}

impl HalfLineData for BoundaryData {
    fn side(&self) -> Side {
        Side::T
    }
    fn f0(&self) -> &HalfLineProfile {
        &self.g0
    }
    fn f1(&self) -> &HalfLineProfile {
        &self.g1
    }
    fn winding(&self) -> i32 {
        self.n_t
    }
    fn truncation_l(&self) -> f64 {
        self.truncation_l
    }
}
