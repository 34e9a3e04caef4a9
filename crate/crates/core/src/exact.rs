//! Exact sine-Gordon solutions used as oracles.

use std::f64::consts::PI;

use crate::data::{BoundaryData, InitialData};
use crate::error::{NftError, Result};
use crate::jet::Jet;
use crate::profile::HalfLineProfile;

/// A classical solution `u(x,t)` of `u_tt − u_xx + sin u = 0` that can be
/// differentiated to any order.
pub trait ExactSolution: Send + Sync {
    /// `∂_x^nx ∂_t^nt u(x,t)`.
    fn derivative(&self, x: f64, t: f64, nx: usize, nt: usize) -> f64;

    fn value(&self, x: f64, t: f64) -> f64 {
        self.derivative(x, t, 0, 0)
    }

    /// `u_tt − u_xx + sin u` at `(x,t)`.
    fn pde_residual(&self, x: f64, t: f64) -> f64 {
        self.derivative(x, t, 0, 2) - self.derivative(x, t, 2, 0) + self.value(x, t).sin()
    }
}

/// Jet of `4·arctan(eᶻ)` for a jet `z`.
///
/// For `z > 0` the identity `4·arctan(eᶻ) = 2π − 4·arctan(e⁻ᶻ)` keeps the
/// exponential bounded.
pub fn kink_jet(z: &Jet) -> Jet {
    if z.value() <= 0.0 {
        z.exp().atan().scale(4.0)
    } else {
        (-z).exp().atan().scale(-4.0).add_scalar(2.0 * PI)
    }
}

/// Jet of `d/dz 4·arctan(eᶻ) = 2·sech z`.
pub fn kink_slope_jet(z: &Jet) -> Jet {
    // sech z = 2e^{−|z|} / (1 + e^{−2|z|})
    let w = if z.value() >= 0.0 { -z } else { z.clone() };
    let e = w.exp();
    let denom = (&e * &e).add_scalar(1.0);
    e.scale(4.0).div(&denom)
}

/// `u(x,t) = 4·arctan(exp(σγ(x − vt − x₀)))` with `γ = (1 − v²)^{−1/2}` and
/// `σ = ±1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TravelingKink {
    pub x0: f64,
    pub v: f64,
    pub sign: f64,
    pub gamma: f64,
}

impl TravelingKink {
    pub fn new(x0: f64, v: f64, sign: i32) -> Result<Self> {
        if !(v.abs() < 1.0) {
            return Err(NftError::Parameter(format!("kink velocity |v| = {} must be below 1", v.abs())));
        }
        if sign != 1 && sign != -1 {
            return Err(NftError::Parameter(format!("kink sign must be ±1, got {sign}")));
        }
        if !x0.is_finite() {
            return Err(NftError::Parameter("kink position must be finite".to_string()));
        }
        Ok(Self {
            x0,
            v,
            sign: sign as f64,
            gamma: 1.0 / (1.0 - v * v).sqrt(),
        })
    }

    /// `∂z/∂x`.
    fn zx(&self) -> f64 {
        self.sign * self.gamma
    }

    /// `∂z/∂t`.
    fn zt(&self) -> f64 {
        -self.sign * self.gamma * self.v
    }

    fn z(&self, x: f64, t: f64) -> f64 {
        self.sign * self.gamma * (x - self.v * t - self.x0)
    }

    /// Winding of `u(·,0)` as `x → ∞`.
    pub fn n_x(&self) -> i32 {
        if self.sign > 0.0 {
            1
        } else {
            0
        }
    }

    /// Winding of `u(0,·)` as `t → ∞`; zero for a standing kink whose
    /// boundary value never settles.
    pub fn n_t(&self) -> i32 {
        if self.zt() > 0.0 {
            1
        } else {
            0
        }
    }

    /// `u(·,0)` and `u_t(·,0)` on `x ≥ 0`.
    pub fn initial_data(&self) -> Result<InitialData> {
        let (a, b, z0) = (self.zx(), self.zt(), self.z(0.0, 0.0));
        let rate = self.gamma;
        let offset = self.x0.max(0.0);
        let u0 = HalfLineProfile::analytic("kink u0", self.n_x(), rate, offset, move |s, n| {
            kink_jet(&Jet::variable(s, n).scale(a).add_scalar(z0))
        });
        let u1 = HalfLineProfile::analytic("kink u1", 0, rate, offset, move |s, n| {
            kink_slope_jet(&Jet::variable(s, n).scale(a).add_scalar(z0)).scale(b)
        });
        InitialData::new(u0, u1)
    }

    /// `u(0,·)` and `u_x(0,·)` on `t ≥ 0`. Requires `v ≠ 0` so that the
    /// boundary values decay.
    pub fn boundary_data(&self) -> Result<BoundaryData> {
        if self.v == 0.0 {
            return Err(NftError::Parameter(
                "a standing kink has constant boundary values that do not decay".to_string(),
            ));
        }
        let (a, b, z0) = (self.zx(), self.zt(), self.z(0.0, 0.0));
        let rate = self.gamma * self.v.abs();
        let offset = (-self.x0 / self.v).max(0.0);
        let g0 = HalfLineProfile::analytic("kink g0", self.n_t(), rate, offset, move |s, n| {
            kink_jet(&Jet::variable(s, n).scale(b).add_scalar(z0))
        });
        let g1 = HalfLineProfile::analytic("kink g1", 0, rate, offset, move |s, n| {
            kink_slope_jet(&Jet::variable(s, n).scale(b).add_scalar(z0)).scale(a)
        });
        BoundaryData::new(g0, g1)
    }
}

impl ExactSolution for TravelingKink {
    fn derivative(&self, x: f64, t: f64, nx: usize, nt: usize) -> f64 {
        let n = nx + nt;
        let f = kink_jet(&Jet::variable(self.z(x, t), n));
        f.derivative(n) * self.zx().powi(nx as i32) * self.zt().powi(nt as i32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Hand-derived derivatives of f(z) = 4·arctan(eᶻ) with S = sech z,
    /// T = tanh z.
    fn hand(z: f64) -> [f64; 5] {
        let s = 1.0 / z.cosh();
        let t = z.tanh();
        let f = 4.0 * z.exp().atan();
        [
            f,
            2.0 * s,
            -2.0 * s * t,
            2.0 * s * t * t - 2.0 * s.powi(3),
            -2.0 * s * t.powi(3) + 10.0 * s.powi(3) * t,
        ]
    }

    #[test]
    fn kink_jet_matches_hand_derivatives() {
        for &z in &[-6.0, -1.3, 0.0, 0.4, 2.5, 9.0] {
            let j = kink_jet(&Jet::variable(z, 4));
            let h = hand(z);
            for n in 0..5 {
                assert_relative_eq!(j.derivative(n), h[n], epsilon = 1e-12, max_relative = 1e-12);
            }
            let s = kink_slope_jet(&Jet::variable(z, 3));
            for n in 0..4 {
                assert_relative_eq!(s.derivative(n), h[n + 1], epsilon = 1e-12, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn large_argument_is_stable() {
        let j = kink_jet(&Jet::variable(800.0, 3));
        assert_relative_eq!(j.value(), 2.0 * PI, epsilon = 1e-15);
        assert!(j.derivatives().iter().all(|d| d.is_finite()));
        let j = kink_jet(&Jet::variable(-800.0, 3));
        assert_eq!(j.value(), 0.0);
    }

    #[test]
    fn windings_and_center_line() {
        let k = TravelingKink::new(2.0, 0.5, -1).unwrap();
        assert_eq!((k.n_x(), k.n_t()), (0, 1));
        assert_relative_eq!(k.value(2.0 + 0.5 * 3.0, 3.0), PI, epsilon = 1e-14);
        assert!(k.value(60.0, 0.0).abs() < 1e-20);
        assert_relative_eq!(k.value(0.0, 80.0), 2.0 * PI, epsilon = 1e-14);
        assert!(TravelingKink::new(0.0, 1.0, 1).is_err());
        assert!(TravelingKink::new(0.0, 0.3, 0).is_err());
    }

    #[test]
    fn restrictions_agree_with_solution() {
        let k = TravelingKink::new(1.5, -0.3, 1).unwrap();
        let init = k.initial_data().unwrap();
        let bdry = k.boundary_data().unwrap();
        for &s in &[0.0, 0.7, 3.1] {
            assert_relative_eq!(init.u0.eval(s, 2).unwrap(), k.derivative(s, 0.0, 2, 0), epsilon = 1e-13);
            assert_relative_eq!(init.u1.eval(s, 1).unwrap(), k.derivative(s, 0.0, 1, 1), epsilon = 1e-13);
            assert_relative_eq!(bdry.g0.eval(s, 3).unwrap(), k.derivative(0.0, s, 0, 3), epsilon = 1e-12);
            assert_relative_eq!(bdry.g1.eval(s, 2).unwrap(), k.derivative(0.0, s, 1, 2), epsilon = 1e-12);
        }
    }

    #[test]
    fn standing_kink_has_no_boundary_data() {
        let k = TravelingKink::new(0.0, 0.0, -1).unwrap();
        assert!(k.initial_data().is_ok());
        assert!(matches!(k.boundary_data(), Err(NftError::Parameter(_))));
    }
}
