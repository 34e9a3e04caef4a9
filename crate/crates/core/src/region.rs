//! Spectral parameter, the domains `D₁…D₄` and the phase functions.

use std::fmt;

use num_complex::Complex64;

use crate::error::{NftError, Result};

/// Slack used when deciding whether `k` lies on the real axis or the unit
/// circle. Points within this distance count as boundary points, which the
/// closed regions accept.
pub const BOUNDARY_EPS: f64 = 1e-12;

/// The open domains cut out by `ℝ ∪ {|k| = 1}`, plus the two boundary pieces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Region {
    /// `Im k > 0`, `|k| > 1`
    D1,
    /// `Im k > 0`, `|k| < 1`
    D2,
    /// `Im k < 0`, `|k| < 1`
    D3,
    /// `Im k < 0`, `|k| > 1`
    D4,
    RealAxis,
    UnitCircle,
}

impl Region {
    pub fn classify(k: Complex64) -> Region {
        let r = k.norm();
        if k.im.abs() <= BOUNDARY_EPS * r.max(1.0) {
            Region::RealAxis
        } else if (r - 1.0).abs() <= BOUNDARY_EPS {
            Region::UnitCircle
        } else {
            match (k.im > 0.0, r > 1.0) {
                (true, true) => Region::D1,
                (true, false) => Region::D2,
                (false, false) => Region::D3,
                (false, true) => Region::D4,
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Region::D1 => "D1",
            Region::D2 => "D2",
            Region::D3 => "D3",
            Region::D4 => "D4",
            Region::RealAxis => "real",
            Region::UnitCircle => "circle",
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A nonzero spectral parameter tagged with its region.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralPoint {
    pub k: Complex64,
    pub region: Region,
}

impl SpectralPoint {
    pub fn new(k: Complex64) -> Result<Self> {
        if k == Complex64::new(0.0, 0.0) {
            return Err(NftError::Domain(
                "spectral parameter k = 0 excluded".to_string(),
            ));
        }
        if !k.is_finite() {
            return Err(NftError::Domain(format!("spectral parameter {k} is not finite")));
        }
        Ok(Self {
            k,
            region: Region::classify(k),
        })
    }

    pub fn real(k: f64) -> Result<Self> {
        Self::new(Complex64::new(k, 0.0))
    }
}

fn upper(k: Complex64) -> bool {
    k.im >= -BOUNDARY_EPS * k.norm().max(1.0)
}

fn lower(k: Complex64) -> bool {
    k.im <= BOUNDARY_EPS * k.norm().max(1.0)
}

fn outside(k: Complex64) -> bool {
    k.norm() >= 1.0 - BOUNDARY_EPS
}

fn inside(k: Complex64) -> bool {
    k.norm() <= 1.0 + BOUNDARY_EPS
}

/// Closed upper half-plane.
pub fn in_closed_upper(k: Complex64) -> bool {
    upper(k)
}

/// Closed lower half-plane.
pub fn in_closed_lower(k: Complex64) -> bool {
    lower(k)
}

pub fn in_closure_d1(k: Complex64) -> bool {
    upper(k) && outside(k)
}

pub fn in_closure_d2(k: Complex64) -> bool {
    upper(k) && inside(k)
}

pub fn in_closure_d3(k: Complex64) -> bool {
    lower(k) && inside(k)
}

pub fn in_closure_d4(k: Complex64) -> bool {
    lower(k) && outside(k)
}

/// `D̄₊ = D̄₁ ∪ D̄₃`.
pub fn in_closure_d_plus(k: Complex64) -> bool {
    in_closure_d1(k) || in_closure_d3(k)
}

/// `D̄₋ = D̄₂ ∪ D̄₄`.
pub fn in_closure_d_minus(k: Complex64) -> bool {
    in_closure_d2(k) || in_closure_d4(k)
}

pub fn is_real(k: Complex64) -> bool {
    upper(k) && lower(k)
}

/// `θ₁ = (k − 1/k)/4`.
pub fn theta1(k: Complex64) -> Complex64 {
    (k - k.inv()) * 0.25
}

/// `θ₂ = (k + 1/k)/4`.
pub fn theta2(k: Complex64) -> Complex64 {
    (k + k.inv()) * 0.25
}

/// Both phase functions; `k = 0` is the singularity of the Lax pair.
pub fn theta(k: Complex64) -> Result<(Complex64, Complex64)> {
    if k == Complex64::new(0.0, 0.0) {
        return Err(NftError::Domain(
            "spectral parameter k = 0 excluded (Lax pair singularity)".to_string(),
        ));
    }
    Ok((theta1(k), theta2(k)))
}
