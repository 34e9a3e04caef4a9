//! Truncated univariate Taylor jets.
//!
//! A [`Jet`] stores the Taylor coefficients `c_n = f⁽ⁿ⁾(s)/n!` of a real
//! function at a point, up to a fixed order. Analytic profiles are written as
//! compositions of jet operations so that any derivative order is available
//! without finite differences.

use std::ops::{Add, Mul, Neg, Sub};

use smallvec::SmallVec;

type Coeffs = SmallVec<[f64; 12]>;

#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    c: Coeffs,
}

impl Jet {
    pub fn constant(value: f64, order: usize) -> Self {
        let mut c = Coeffs::from_elem(0.0, order + 1);
        c[0] = value;
        Self { c }
    }

    /// The independent variable `s + h`, expanded in `h`.
    pub fn variable(at: f64, order: usize) -> Self {
        let mut j = Self::constant(at, order);
        if order >= 1 {
            j.c[1] = 1.0;
        }
        j
    }

    pub fn from_coeffs(coeffs: &[f64]) -> Self {
        assert!(!coeffs.is_empty(), "a jet needs at least one coefficient");
        Self {
            c: Coeffs::from_slice(coeffs),
        }
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.c
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// `n`-th derivative, `n! · c_n`.
    pub fn derivative(&self, n: usize) -> f64 {
        self.c[n] * factorial(n)
    }

    /// All derivatives `f, f', …, f⁽ᵒʳᵈᵉʳ⁾`.
    pub fn derivatives(&self) -> Vec<f64> {
        (0..self.c.len()).map(|n| self.derivative(n)).collect()
    }

    /// Jet of `f'`, one order shorter.
    pub fn differentiate(&self) -> Self {
        if self.c.len() == 1 {
            return Self::constant(0.0, 0);
        }
        let c = (1..self.c.len())
            .map(|n| self.c[n] * n as f64)
            .collect::<Coeffs>();
        Self { c }
    }

    /// Jet of `∫ f` with the given value at the expansion point, one order
    /// longer.
    pub fn integrate(&self, value: f64) -> Self {
        let mut c = Coeffs::with_capacity(self.c.len() + 1);
        c.push(value);
        for (n, v) in self.c.iter().enumerate() {
            c.push(v / (n + 1) as f64);
        }
        Self { c }
    }

    pub fn truncate(&self, order: usize) -> Self {
        let n = (order + 1).min(self.c.len());
        Self {
            c: Coeffs::from_slice(&self.c[..n]),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            c: self.c.iter().map(|v| v * s).collect(),
        }
    }

    pub fn add_scalar(&self, s: f64) -> Self {
        let mut r = self.clone();
        r.c[0] += s;
        r
    }

    pub fn recip(&self) -> Self {
        Self::constant(1.0, self.order()).div(self)
    }

    pub fn div(&self, b: &Jet) -> Self {
        let n = self.c.len().min(b.c.len());
        let mut q = Coeffs::from_elem(0.0, n);
        for i in 0..n {
            let mut acc = self.c[i];
            for k in 1..=i {
                acc -= b.c[k] * q[i - k];
            }
            q[i] = acc / b.c[0];
        }
        Self { c: q }
    }

    pub fn exp(&self) -> Self {
        let n = self.c.len();
        let mut e = Coeffs::from_elem(0.0, n);
        e[0] = self.c[0].exp();
        for i in 1..n {
            let mut acc = 0.0;
            for k in 1..=i {
                acc += k as f64 * self.c[k] * e[i - k];
            }
            e[i] = acc / i as f64;
        }
        Self { c: e }
    }

    /// `(sin f, cos f)`.
    pub fn sin_cos(&self) -> (Self, Self) {
        let n = self.c.len();
        let mut s = Coeffs::from_elem(0.0, n);
        let mut c = Coeffs::from_elem(0.0, n);
        (s[0], c[0]) = self.c[0].sin_cos();
        for i in 1..n {
            let (mut as_, mut ac) = (0.0, 0.0);
            for k in 1..=i {
                let w = k as f64 * self.c[k];
                as_ += w * c[i - k];
                ac += w * s[i - k];
            }
            s[i] = as_ / i as f64;
            c[i] = -ac / i as f64;
        }
        (Self { c: s }, Self { c })
    }

    pub fn atan(&self) -> Self {
        let denom = (self * self).add_scalar(1.0);
        let d = self.differentiate().div(&denom.truncate(self.order().saturating_sub(1)));
        if self.order() == 0 {
            return Self::constant(self.c[0].atan(), 0);
        }
        d.integrate(self.c[0].atan())
    }

    pub fn powi(&self, p: u32) -> Self {
        let mut r = Self::constant(1.0, self.order());
        for _ in 0..p {
            r = &r * self;
        }
        r
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, b: &Jet) -> Jet {
        let n = self.c.len().min(b.c.len());
        Jet {
            c: (0..n).map(|i| self.c[i] + b.c[i]).collect(),
        }
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, b: &Jet) -> Jet {
        let n = self.c.len().min(b.c.len());
        Jet {
            c: (0..n).map(|i| self.c[i] - b.c[i]).collect(),
        }
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, b: &Jet) -> Jet {
        let n = self.c.len().min(b.c.len());
        let mut c = Coeffs::from_elem(0.0, n);
        for i in 0..n {
            let mut acc = 0.0;
            for k in 0..=i {
                acc += self.c[k] * b.c[i - k];
            }
            c[i] = acc;
        }
        Jet { c }
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}
