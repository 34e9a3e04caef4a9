//! Cumulative quadrature on a grid with derivative (Hermite) corrections.
//!
//! On a cell of width `h` the two-point Hermite rules are
//!
//! ```text
//! ∫ f ≈ h/2 (f₀ + f₁)                                          (trapezoid)
//!     + h²/12 (f₀' − f₁')                                      (cubic)
//! ∫ f ≈ h/2 (f₀ + f₁) + h²/10 (f₀' − f₁') + h³/120 (f₀'' + f₁'') (quintic)
//! ```
//!
//! with local errors `O(h³)`, `O(h⁵)` and `O(h⁷)`.

use std::ops::{Add, Mul};

/// Which derivatives accompany the samples.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HermiteOrder {
    Trapezoid,
    Cubic,
    Quintic,
}

impl HermiteOrder {
    /// The best rule available when `n` derivatives are known.
    pub fn from_derivatives(n: usize) -> Self {
        match n {
            0 => HermiteOrder::Trapezoid,
            1 => HermiteOrder::Cubic,
            _ => HermiteOrder::Quintic,
        }
    }
}

/// Integral over one cell `[s₀, s₁]`; `d0[n]`, `d1[n]` hold the `n`-th
/// derivatives at the two ends.
pub fn cell_integral<T>(h: f64, d0: &[T], d1: &[T], rule: HermiteOrder) -> T
where
    T: Copy + Add<Output = T> + Mul<f64, Output = T> + std::ops::Sub<Output = T>,
{
    let mut acc = (d0[0] + d1[0]) * (0.5 * h);
    match rule {
        HermiteOrder::Trapezoid => {}
        HermiteOrder::Cubic => acc = acc + (d0[1] - d1[1]) * (h * h / 12.0),
        HermiteOrder::Quintic => {
            acc = acc + (d0[1] - d1[1]) * (h * h / 10.0) + (d0[2] + d1[2]) * (h * h * h / 120.0);
        }
    }
    acc
}

/// `F(sᵢ) = ∫_{s₀}^{sᵢ} f` (`from_end = false`) or `F(sᵢ) = −∫_{sᵢ}^{s_N} f`
/// (`from_end = true`, so that `F(s_N) = 0` and `F' = f` in both cases).
///
/// `derivs[i]` lists `f(sᵢ), f'(sᵢ), …`; the rule is chosen from the
/// shortest list.
pub fn cumulative<T>(grid: &[f64], derivs: &[Vec<T>], zero: T, from_end: bool) -> Vec<T>
where
    T: Copy + Add<Output = T> + Mul<f64, Output = T> + std::ops::Sub<Output = T>,
{
    assert_eq!(grid.len(), derivs.len(), "grid and samples differ in length");
    let n = grid.len();
    let mut out = vec![zero; n];
    if n < 2 {
        return out;
    }
    let avail = derivs.iter().map(|d| d.len()).min().unwrap_or(0);
    assert!(avail >= 1, "cumulative quadrature needs function values");
    let rule = HermiteOrder::from_derivatives(avail - 1);
    if from_end {
        for i in (0..n - 1).rev() {
            let h = grid[i + 1] - grid[i];
            out[i] = out[i + 1] - cell_integral(h, &derivs[i], &derivs[i + 1], rule);
        }
    } else {
        for i in 1..n {
            let h = grid[i] - grid[i - 1];
            out[i] = out[i - 1] + cell_integral(h, &derivs[i - 1], &derivs[i], rule);
        }
    }
    out
}

/// `∫_a^b f` over `n` equal cells with the quintic rule, where `f(s)`
/// returns `[f, f', f'']`.
pub fn hermite_integral<T, F>(f: F, a: f64, b: f64, n: usize, zero: T) -> T
where
    T: Copy + Add<Output = T> + Mul<f64, Output = T> + std::ops::Sub<Output = T>,
    F: Fn(f64) -> [T; 3],
{
    let n = n.max(1);
    let h = (b - a) / n as f64;
    let mut acc = zero;
    let mut left = f(a);
    for i in 1..=n {
        let s = if i == n { b } else { a + h * i as f64 };
        let right = f(s);
        acc = acc + cell_integral(h, &left, &right, HermiteOrder::Quintic);
        left = right;
    }
    acc
}

/// `n + 1` equally spaced points on `[a, b]`.
pub fn uniform_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    let n = n.max(1);
    let h = (b - a) / n as f64;
    (0..=n).map(|i| if i == n { b } else { a + h * i as f64 }).collect()
}
