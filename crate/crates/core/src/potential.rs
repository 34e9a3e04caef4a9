//! The potentials `𝖴`, `𝖵`, their regular-at-zero hatted versions and the
//! gauge matrices `G₀`, `𝒢₀`.
//!
//! Both potentials have the form `P₀ + P₁/k` with `P₀ ∝ σ₂` and
//! `P₁ = βσ₁ + γσ₃`; the hatted ones have the form `P̂₀ + kP̂₁`. The pair
//! `(P₀, P₁)` is exposed separately because the expansion recursions consume
//! it order by order.

use num_complex::Complex64;

use crate::data::{BoundaryData, HalfLineData, InitialData, Side};
use crate::error::{NftError, Result};
use crate::jet::Jet;
use crate::matrix::ComplexMatrix2;
use crate::region::{theta1, theta2};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `P₀ + P₁·ε` split of a potential, with `ε = 1/k` (unhatted) or `ε = k`
/// (hatted).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PotentialParts {
    pub p0: ComplexMatrix2,
    pub p1: ComplexMatrix2,
}

impl PotentialParts {
    pub fn combine(&self, eps: Complex64) -> ComplexMatrix2 {
        self.p0 + self.p1.scale(eps)
    }
}

fn check_coord(s: f64) -> Result<()> {
    if !(s >= 0.0) {
        return Err(NftError::Domain(format!("coordinate {s} must be nonnegative")));
    }
    Ok(())
}

fn check_k(k: Complex64) -> Result<()> {
    if k == Complex64::new(0.0, 0.0) {
        return Err(NftError::Domain(
            "spectral parameter k = 0 excluded: the unhatted potential is singular there".to_string(),
        ));
    }
    Ok(())
}

/// Entries of the parts from `(f₀, f₀', f₁)`.
fn parts_from_values(side: Side, hatted: bool, f0: f64, f0s: f64, f1: f64) -> PotentialParts {
    let (sin, cos) = f0.sin_cos();
    let s2 = ComplexMatrix2::sigma2();
    let s1 = ComplexMatrix2::sigma1();
    let s3 = ComplexMatrix2::sigma3();
    let q = I * 0.25;
    match (side, hatted) {
        (Side::X, false) => PotentialParts {
            p0: s2.scale(-q * (f0s + f1)),
            p1: s1.scale(q * sin) + s3.scale(q * (cos - 1.0)),
        },
        (Side::T, false) => PotentialParts {
            p0: s2.scale(-q * (f1 + f0s)),
            p1: s1.scale(-q * sin) - s3.scale(q * (cos - 1.0)),
        },
        // The hatted parts coincide on both sides: 𝖴̂₀ = i(u₀ₓ − u₁)σ₂/4 and
        // 𝖵̂₀ = −i(g₁ − g₀ₜ)σ₂/4 are the same expression.
        (_, true) => PotentialParts {
            p0: s2.scale(q * (f0s - f1)),
            p1: s1.scale(q * sin) - s3.scale(q * (cos - 1.0)),
        },
    }
}

/// Parts of the unhatted (`hatted = false`) or hatted potential at `s`.
pub fn potential_parts(data: &dyn HalfLineData, s: f64, hatted: bool) -> Result<PotentialParts> {
    check_coord(s)?;
    let (f0, f0s) = data.f0().value_and_slope(s)?;
    let f1 = data.f1().eval(s, 0)?;
    Ok(parts_from_values(data.side(), hatted, f0, f0s, f1))
}

/// `𝖴(s,k)` or `𝖵(s,k)` depending on the data side.
pub fn potential(data: &dyn HalfLineData, s: f64, k: Complex64) -> Result<ComplexMatrix2> {
    check_k(k)?;
    Ok(potential_parts(data, s, false)?.combine(k.inv()))
}

/// `𝖴(x,k) = 𝖴₀(x) + 𝖴₁(x)/k`.
pub fn x_potential(data: &InitialData, x: f64, k: Complex64) -> Result<ComplexMatrix2> {
    potential(data, x, k)
}

/// `𝖵(t,k) = 𝖵₀(t) + 𝖵₁(t)/k`.
pub fn t_potential(data: &BoundaryData, t: f64, k: Complex64) -> Result<ComplexMatrix2> {
    potential(data, t, k)
}

/// `𝖴̂(x,k) = 𝖴̂₀ + k𝖴̂₁` or `𝖵̂(t,k) = 𝖵̂₀ + k𝖵̂₁`; regular at `k = 0`.
pub fn hat_potential(data: &dyn HalfLineData, s: f64, k: Complex64) -> Result<ComplexMatrix2> {
    Ok(potential_parts(data, s, true)?.combine(k))
}

/// `(−1)^N · R(f₀(s)/2)` with `R(φ)` the rotation by `φ`.
pub fn gauge(data: &dyn HalfLineData, s: f64) -> Result<ComplexMatrix2> {
    check_coord(s)?;
    let f0 = data.f0().eval(s, 0)?;
    let sign = if data.winding().rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    Ok(ComplexMatrix2::rotation(f0 / 2.0) * sign)
}

/// `∂_s` of [`gauge`].
pub fn gauge_derivative(data: &dyn HalfLineData, s: f64) -> Result<ComplexMatrix2> {
    check_coord(s)?;
    let (f0, f0s) = data.f0().value_and_slope(s)?;
    let sign = if data.winding().rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let (sn, cs) = (f0 / 2.0).sin_cos();
    Ok(ComplexMatrix2::from_real(-sn, -cs, cs, -sn) * (sign * f0s / 2.0))
}

/// The phase belonging to a data side: `θ₁` for x, `θ₂` for t.
pub fn side_theta(side: Side, k: Complex64) -> Complex64 {
    match side {
        Side::X => theta1(k),
        Side::T => theta2(k),
    }
}

/// Taylor jets (in the coordinate) of the potential parts at `s`, as
/// sequences of matrix-valued Taylor coefficients of length `order + 1`.
pub fn potential_part_jets(
    data: &dyn HalfLineData,
    s: f64,
    order: usize,
    hatted: bool,
) -> Result<(Vec<ComplexMatrix2>, Vec<ComplexMatrix2>)> {
    check_coord(s)?;
    let f0 = data.f0().jet(s, order + 1)?;
    let f1 = data.f1().jet(s, order)?;
    let f0s = f0.differentiate();
    let f0 = f0.truncate(order);
    let (sin, cos) = f0.sin_cos();
    let cosm1 = cos.add_scalar(-1.0);
    let q = I * 0.25;
    let s1 = ComplexMatrix2::sigma1();
    let s2 = ComplexMatrix2::sigma2();
    let s3 = ComplexMatrix2::sigma3();
    let coeff = |j: &Jet, n: usize| j.coeffs().get(n).copied().unwrap_or(0.0);
    let mut p0 = Vec::with_capacity(order + 1);
    let mut p1 = Vec::with_capacity(order + 1);
    for n in 0..=order {
        let (a, b, c, d) = (coeff(&f0s, n), coeff(&f1, n), coeff(&sin, n), coeff(&cosm1, n));
        // Linear in (f₀', f₁, sin f₀, cos f₀ − 1), so Taylor coefficients map
        // through the same formulas. The constant −1 only lives at n = 0 and
        // is already folded into `cosm1`.
        let (m0, m1) = match (data.side(), hatted) {
            (Side::X, false) => (s2.scale(-q * (a + b)), s1.scale(q * c) + s3.scale(q * d)),
            (Side::T, false) => (s2.scale(-q * (b + a)), s1.scale(-q * c) - s3.scale(q * d)),
            (_, true) => (s2.scale(q * (a - b)), s1.scale(q * c) - s3.scale(q * d)),
        };
        p0.push(m0);
        p1.push(m1);
    }
    Ok((p0, p1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn zero_x() -> InitialData {
        InitialData::new(profiles::zero(), profiles::zero()).unwrap()
    }

    fn kink_x() -> InitialData {
        profiles::static_kink(0.0, -1).unwrap()
    }

    fn traveling() -> (InitialData, BoundaryData) {
        profiles::generate_kink_data(2.0, 0.5, -1).unwrap()
    }

    #[test]
    fn trivial_potentials_vanish() {
        assert_eq!(x_potential(&zero_x(), 1.7, c(3.0, 0.0)).unwrap(), ComplexMatrix2::zero());
        let two_pi = InitialData::new(profiles::constant_2pi_n(1), profiles::zero()).unwrap();
        assert!(x_potential(&two_pi, 0.4, c(1.0, 1.0)).unwrap().norm() < 1e-15);
        let b = BoundaryData::new(profiles::zero(), profiles::zero()).unwrap();
        assert_eq!(t_potential(&b, 2.0, c(2.0, 0.0)).unwrap(), ComplexMatrix2::zero());
        assert_eq!(hat_potential(&zero_x(), 0.0, c(0.0, 0.0)).unwrap(), ComplexMatrix2::zero());
    }

    #[test]
    fn constant_pi_boundary() {
        let b = BoundaryData {
            g0: profiles::constant(PI),
            g1: profiles::zero(),
            n_t: 0,
            truncation_l: 10.0,
        };
        let v = t_potential(&b, 3.0, c(1.0, 0.0)).unwrap();
        let expect = ComplexMatrix2::sigma3().scale(c(0.0, 0.5));
        assert!((v - expect).norm() < 1e-15);
    }

    #[test]
    fn kink_potential_at_origin() {
        // u₀ₓ(0) = −2, sin u₀(0) = 0, cos u₀(0) − 1 = −2
        let u = x_potential(&kink_x(), 0.0, c(1.0, 0.0)).unwrap();
        let expect = ComplexMatrix2::sigma2().scale(c(0.0, 0.5)) + ComplexMatrix2::sigma3().scale(c(0.0, -0.5));
        assert!((u - expect).norm() < 1e-14, "{u:?}");
        // finite-difference cross-check of u₀ₓ(0)
        let d = kink_x();
        let h = 1e-5;
        let fd = (d.u0.eval(h, 0).unwrap() - d.u0.eval(0.0, 0).unwrap()) / h;
        assert!((fd + 2.0).abs() < 1e-4);
    }

    #[test]
    fn hat_potential_with_bump_velocity() {
        let d = InitialData::new(profiles::zero(), profiles::gaussian_bump(0.7, 1.0, 0.0).unwrap()).unwrap();
        let x = 0.4;
        let u1 = d.u1.eval(x, 0).unwrap();
        let h = hat_potential(&d, x, c(0.0, 0.0)).unwrap();
        let expect = ComplexMatrix2::sigma2().scale(c(0.0, -u1 / 4.0));
        assert!((h - expect).norm() < 1e-15);
    }

    #[test]
    fn errors() {
        assert!(matches!(x_potential(&zero_x(), -1.0, c(1.0, 0.0)), Err(NftError::Domain(_))));
        assert!(matches!(x_potential(&zero_x(), 1.0, c(0.0, 0.0)), Err(NftError::Domain(_))));
        assert!(matches!(gauge(&zero_x(), -0.5), Err(NftError::Domain(_))));
    }

    #[test]
    fn gauge_examples() {
        assert_eq!(gauge(&zero_x(), 0.0).unwrap(), ComplexMatrix2::identity());
        let two_pi = InitialData::new(profiles::constant_2pi_n(1), profiles::zero()).unwrap();
        assert!((gauge(&two_pi, 3.0).unwrap() - ComplexMatrix2::identity()).norm() < 1e-15);
        let g = gauge(&kink_x(), 0.0).unwrap();
        assert!((g - ComplexMatrix2::from_real(0.0, -1.0, 1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn gauge_derivative_matches_difference_quotient() {
        let d = kink_x();
        let x = 0.8;
        let h = 1e-6;
        let fd = (gauge(&d, x + h).unwrap() - gauge(&d, x - h).unwrap()) * (0.5 / h);
        assert!((gauge_derivative(&d, x).unwrap() - fd).norm() < 1e-8);
    }

    /// 𝖴̂ from its definition G₀⁻¹(𝖴G₀ − G₀ₓ) + iθ(σ₃ − G₀⁻¹σ₃G₀).
    fn hat_by_definition(data: &dyn HalfLineData, s: f64, k: Complex64) -> ComplexMatrix2 {
        let g = gauge(data, s).unwrap();
        let gi = g.inverse().unwrap();
        let gs = gauge_derivative(data, s).unwrap();
        let u = potential(data, s, k).unwrap();
        let s3 = ComplexMatrix2::sigma3();
        gi * (u * g - gs) + (s3 - gi * s3 * g).scale(I * side_theta(data.side(), k))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn hat_potential_reconstructs(s in 0.0f64..8.0, re in -3.0f64..3.0, im in -3.0f64..3.0) {
            prop_assume!(re.abs() + im.abs() > 0.05);
            let k = c(re, im);
            let (init, bdry) = traveling();
            for data in [&init as &dyn HalfLineData, &bdry] {
                let lhs = hat_potential(data, s, k).unwrap();
                let rhs = hat_by_definition(data, s, k);
                prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()), "{:?} vs {:?}", lhs, rhs);
            }
        }

        #[test]
        fn potentials_are_traceless_and_symmetric(s in 0.0f64..8.0, re in -3.0f64..3.0, im in -3.0f64..3.0) {
            prop_assume!(re.abs() + im.abs() > 0.05);
            let k = c(re, im);
            let (init, bdry) = traveling();
            for data in [&init as &dyn HalfLineData, &bdry] {
                let u = potential(data, s, k).unwrap();
                prop_assert_eq!(u.trace(), c(0.0, 0.0));
                // 𝖴(−k) = σ₂𝖴(k)σ₂ and conj(𝖴(k)) = 𝖴(−k̄)
                let um = potential(data, s, -k).unwrap();
                prop_assert!((um - u.sigma2_conjugate()).norm() < 1e-14);
                let uc = potential(data, s, -k.conj()).unwrap();
                prop_assert!((uc - u.conj()).norm() < 1e-14);
            }
        }

        #[test]
        fn gauge_is_special_orthogonal(s in 0.0f64..20.0) {
            let (init, bdry) = traveling();
            for data in [&init as &dyn HalfLineData, &bdry] {
                let g = gauge(data, s).unwrap();
                prop_assert!((g.transpose() * g - ComplexMatrix2::identity()).norm() < 1e-14);
                prop_assert!((g.det() - c(1.0, 0.0)).norm() < 1e-14);
            }
        }

        #[test]
        fn hat_potential_is_linear_in_k(s in 0.0f64..8.0, re in -3.0f64..3.0, im in -3.0f64..3.0) {
            let k = c(re, im);
            let (init, _) = traveling();
            let h0 = hat_potential(&init, s, c(0.0, 0.0)).unwrap();
            let hk = hat_potential(&init, s, k).unwrap();
            let p = potential_parts(&init, s, true).unwrap();
            prop_assert!((hk - h0 - p.p1.scale(k)).norm() < 1e-15);
        }
    }

    #[test]
    fn part_jets_match_pointwise_parts() {
        let (init, bdry) = traveling();
        for data in [&init as &dyn HalfLineData, &bdry] {
            for hatted in [false, true] {
                let s = 1.1;
                let (j0, j1) = potential_part_jets(data, s, 3, hatted).unwrap();
                let p = potential_parts(data, s, hatted).unwrap();
                assert!((j0[0] - p.p0).norm() < 1e-15);
                assert!((j1[0] - p.p1).norm() < 1e-15);
                // first Taylor coefficient vs central difference
                let h = 1e-5;
                let pp = potential_parts(data, s + h, hatted).unwrap();
                let pm = potential_parts(data, s - h, hatted).unwrap();
                assert!(((pp.p0 - pm.p0) * (0.5 / h) - j0[1]).norm() < 1e-8);
                assert!(((pp.p1 - pm.p1) * (0.5 / h) - j1[1]).norm() < 1e-8);
            }
        }
    }
}
