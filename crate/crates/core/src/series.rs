//! Truncated power series `Σ_{n≤N} a_n z^n` with complex double coefficients.
//!
//! Binary operations align both operands to the smaller order before
//! combining them, so the result never claims more accuracy than its inputs.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default truncation order used throughout the crate.
pub const DEFAULT_ORDER: usize = 64;

/// Tolerance on the constant term accepted by [`TruncatedSeries::exp`] and
/// [`TruncatedSeries::log`].
const CONSTANT_TERM_TOL: f64 = 1e-14;

/// Power series truncated at order `N`; `coeffs[n]` is the coefficient of `z^n`.
///
/// Serialized as `{"order": N, "coeffs": [[re, im], ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "SeriesRepr", try_from = "SeriesRepr")]
pub struct TruncatedSeries {
    coeffs: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    order: usize,
    coeffs: Vec<[f64; 2]>,
}

impl From<TruncatedSeries> for SeriesRepr {
    fn from(s: TruncatedSeries) -> Self {
        SeriesRepr {
            order: s.order(),
            coeffs: s.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        }
    }
}

impl TryFrom<SeriesRepr> for TruncatedSeries {
    type Error = String;

    fn try_from(r: SeriesRepr) -> std::result::Result<Self, String> {
        if r.coeffs.len() != r.order + 1 {
            return Err(format!(
                "order {} needs {} coefficients, found {}",
                r.order,
                r.order + 1,
                r.coeffs.len()
            ));
        }
        Ok(TruncatedSeries {
            coeffs: r
                .coeffs
                .into_iter()
                .map(|[re, im]| Complex64::new(re, im))
                .collect(),
        })
    }
}

impl TruncatedSeries {
    /// Builds a series from its coefficients. An empty vector gives the zero
    /// series of order 0.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        TruncatedSeries { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![Complex64::new(0.0, 0.0); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(0, Complex64::new(1.0, 0.0), order)
    }

    /// `c·z^k` at the given order (zero when `k > order`).
    pub fn monomial(k: usize, c: Complex64, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    /// The identity function `z`.
    pub fn identity(order: usize) -> Self {
        Self::monomial(1, Complex64::new(1.0, 0.0), order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient of `z^n`; zero past the truncation order.
    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs: Vec<_> = self.coeffs.iter().copied().take(order + 1).collect();
        coeffs.resize(order + 1, Complex64::new(0.0, 0.0));
        TruncatedSeries { coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        let n = self.order().min(other.order());
        TruncatedSeries {
            coeffs: (0..=n)
                .map(|k| f(self.coeffs[k], other.coeffs[k]))
                .collect(),
        }
    }

    /// Cauchy product truncated to the smaller order.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let coeffs = (0..=n)
            .map(|k| (0..=k).map(|j| self.coeffs[j] * other.coeffs[k - j]).sum())
            .collect();
        TruncatedSeries { coeffs }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|&a| a * c).collect(),
        }
    }

    /// The series of `s(λz)`: coefficient `n` is multiplied by `λ^n`.
    pub fn scale_argument(&self, lambda: Complex64) -> Self {
        let mut pow = Complex64::new(1.0, 0.0);
        let coeffs = self
            .coeffs
            .iter()
            .map(|&a| {
                let c = a * pow;
                pow *= lambda;
                c
            })
            .collect();
        TruncatedSeries { coeffs }
    }

    /// Multiplication by `z`; the order grows by one.
    pub fn shift_up(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Complex64::new(0.0, 0.0));
        coeffs.extend_from_slice(&self.coeffs);
        TruncatedSeries { coeffs }
    }

    /// Division by `z`, dropping the constant term; the order shrinks by one.
    pub fn shift_down(&self) -> Self {
        Self::new(self.coeffs[1..].to_vec())
    }

    /// Formal derivative; the order shrinks by one (order 0 maps to the zero series).
    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, &a)| a * n as f64)
                .collect(),
        )
    }

    /// `exp(s)` by the recurrence `b_0 = 1`, `n b_n = Σ_{k=1..n} k a_k b_{n-k}`.
    pub fn exp(&self) -> Result<Self> {
        let a0 = self.coeffs[0];
        if a0.norm() > CONSTANT_TERM_TOL {
            return Err(Error::NonzeroConstantTerm(a0));
        }
        let n_max = self.order();
        let mut b = vec![Complex64::new(0.0, 0.0); n_max + 1];
        b[0] = Complex64::new(1.0, 0.0);
        for n in 1..=n_max {
            let acc: Complex64 = (1..=n).map(|k| self.coeffs[k] * k as f64 * b[n - k]).sum();
            b[n] = acc / n as f64;
        }
        Ok(TruncatedSeries { coeffs: b })
    }

    /// Principal logarithm of a series with constant term 1; inverse of [`exp`](Self::exp).
    pub fn log(&self) -> Result<Self> {
        let a0 = self.coeffs[0];
        if (a0 - 1.0).norm() > CONSTANT_TERM_TOL {
            return Err(Error::ConstantTermNotOne(a0));
        }
        let n_max = self.order();
        let mut l = vec![Complex64::new(0.0, 0.0); n_max + 1];
        for n in 1..=n_max {
            let acc: Complex64 = (1..n).map(|k| l[k] * k as f64 * self.coeffs[n - k]).sum();
            l[n] = (self.coeffs[n] * n as f64 - acc) / n as f64;
        }
        Ok(TruncatedSeries { coeffs: l })
    }

    /// Horner evaluation of the partial sum at `z`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
    }

    /// Largest coefficientwise modulus of `self - other` over the common order.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.sub(other)
            .coeffs
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: Self) -> TruncatedSeries {
        TruncatedSeries::add(self, rhs)
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: Self) -> TruncatedSeries {
        TruncatedSeries::sub(self, rhs)
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: Self) -> TruncatedSeries {
        TruncatedSeries::mul(self, rhs)
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}
