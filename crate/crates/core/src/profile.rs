//! Real-valued profiles on the half-line `[0, ∞)`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{NftError, Result};
use crate::jet::Jet;

/// Extra decay lengths added on top of `ln(1/tol)` when choosing a
/// truncation point.
pub const TRUNCATION_MARGIN: f64 = 5.0;

/// Derivative order available from analytic (jet-backed) profiles.
pub const ANALYTIC_MAX_ORDER: usize = 24;

/// Derivative order certified for spline-backed profiles.
pub const SAMPLED_MAX_ORDER: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Analytic,
    Sampled,
}

type JetFn = dyn Fn(f64, usize) -> Jet + Send + Sync;

/// A real function on `[0, ∞)` with derivatives, a winding target `N`
/// (the function tends to `2πN`) and a decay hint.
///
/// The tail is assumed to approach `2πN` no slower than
/// `exp(−decay_rate · (s − decay_offset))`.
#[derive(Clone)]
pub struct HalfLineProfile {
    func: Arc<JetFn>,
    max_derivative_order: usize,
    winding: i32,
    decay_rate: f64,
    decay_offset: f64,
    provenance: Provenance,
    label: String,
}

impl fmt::Debug for HalfLineProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HalfLineProfile")
            .field("label", &self.label)
            .field("winding", &self.winding)
            .field("decay_rate", &self.decay_rate)
            .field("decay_offset", &self.decay_offset)
            .field("provenance", &self.provenance)
            .finish()
    }
}

impl HalfLineProfile {
    /// Profile backed by a jet-valued closure `(s, order) ↦ Taylor jet at s`.
    pub fn analytic<F>(label: impl Into<String>, winding: i32, decay_rate: f64, decay_offset: f64, f: F) -> Self
    where
        F: Fn(f64, usize) -> Jet + Send + Sync + 'static,
    {
        Self {
            func: Arc::new(f),
            max_derivative_order: ANALYTIC_MAX_ORDER,
            winding,
            decay_rate,
            decay_offset,
            provenance: Provenance::Analytic,
            label: label.into(),
        }
    }

    pub(crate) fn from_parts(
        label: String,
        func: Arc<JetFn>,
        max_derivative_order: usize,
        winding: i32,
        decay_rate: f64,
        decay_offset: f64,
        provenance: Provenance,
    ) -> Self {
        Self {
            func,
            max_derivative_order,
            winding,
            decay_rate,
            decay_offset,
            provenance,
            label,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn max_derivative_order(&self) -> usize {
        self.max_derivative_order
    }

    pub fn winding(&self) -> i32 {
        self.winding
    }

    pub fn decay_rate(&self) -> f64 {
        self.decay_rate
    }

    pub fn decay_offset(&self) -> f64 {
        self.decay_offset
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// Limit value `2πN`.
    pub fn limit(&self) -> f64 {
        2.0 * PI * self.winding as f64
    }

    fn check(&self, s: f64, order: usize) -> Result<()> {
        if !(s >= 0.0) {
            return Err(NftError::Domain(format!(
                "profile '{}' evaluated at negative coordinate {s}",
                self.label
            )));
        }
        if order > self.max_derivative_order {
            return Err(NftError::Capability(format!(
                "profile '{}' provides derivatives up to order {}, order {order} requested",
                self.label, self.max_derivative_order
            )));
        }
        Ok(())
    }

    /// Taylor jet of the profile at `s` up to `order`.
    pub fn jet(&self, s: f64, order: usize) -> Result<Jet> {
        self.check(s, order)?;
        Ok((self.func)(s, order))
    }

    /// `d^order/ds^order` of the profile at `s`.
    pub fn eval(&self, s: f64, order: usize) -> Result<f64> {
        self.check(s, order)?;
        Ok((self.func)(s, order).derivative(order))
    }

    /// Value and first derivative, the pair every potential needs.
    pub fn value_and_slope(&self, s: f64) -> Result<(f64, f64)> {
        let j = self.jet(s, 1)?;
        Ok((j.value(), j.derivative(1)))
    }

    /// Smallest `L` with `decay_rate · (L − offset) ≥ ln(1/tol) + margin`.
    pub fn truncation_length(&self, tol: f64) -> f64 {
        let need = (1.0 / tol).ln() + TRUNCATION_MARGIN;
        (self.decay_offset + need / self.decay_rate).max(1.0)
    }

    /// Checks `|f(s) − 2πN| ≤ tol` at `s = truncation_length(tol)`.
    pub fn tail_check(&self, tol: f64) -> Result<()> {
        let l = self.truncation_length(tol);
        let v = self.eval(l, 0)?;
        let dev = (v - self.limit()).abs();
        if dev > tol.max(1e-14) {
            return Err(NftError::Decay(format!(
                "profile '{}' is {dev:.3e} away from 2π·{} at s = {l:.3}",
                self.label, self.winding
            )));
        }
        Ok(())
    }

    /// Pointwise sum with another profile. Windings add; the slower decay
    /// dominates.
    pub fn plus(&self, other: &HalfLineProfile) -> HalfLineProfile {
        let (a, b) = (self.func.clone(), other.func.clone());
        let label = format!("{}+{}", self.label, other.label);
        let provenance = if self.provenance == Provenance::Sampled || other.provenance == Provenance::Sampled {
            Provenance::Sampled
        } else {
            Provenance::Analytic
        };
        HalfLineProfile::from_parts(
            label,
            Arc::new(move |s, n| &a(s, n) + &b(s, n)),
            self.max_derivative_order.min(other.max_derivative_order),
            self.winding + other.winding,
            self.decay_rate.min(other.decay_rate),
            self.decay_offset.max(other.decay_offset),
            provenance,
        )
    }
}
