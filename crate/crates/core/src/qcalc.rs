//! q-calculus primitives: the q-difference operator, q-shifted factorials and
//! Heine's basic hypergeometric series `Φ[a,b;c;q,z]`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TruncatedSeries;

/// Term cap for Heine summation.
pub const DEFAULT_TERM_CAP: usize = 10_000;

/// Default absolute term tolerance for Heine summation.
pub const DEFAULT_SERIES_TOL: f64 = 1e-17;

/// Number of consecutive sub-tolerance terms required before a sum is accepted.
pub(crate) const CONSECUTIVE_SMALL_TERMS: usize = 3;

pub(crate) fn check_q(q: f64) -> Result<()> {
    if q > 0.0 && q < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidQ(q))
    }
}

/// The pair `(q, α)` indexing the class of q-starlike functions of order α.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawQAlpha")]
pub struct QAlpha {
    q: f64,
    alpha: f64,
}

#[derive(Deserialize)]
struct RawQAlpha {
    q: f64,
    alpha: f64,
}

impl TryFrom<RawQAlpha> for QAlpha {
    type Error = Error;
    fn try_from(r: RawQAlpha) -> Result<Self> {
        QAlpha::new(r.q, r.alpha)
    }
}

impl QAlpha {
    pub fn new(q: f64, alpha: f64) -> Result<Self> {
        check_q(q)?;
        if !(0.0..1.0).contains(&alpha) {
            return Err(Error::InvalidAlpha(alpha));
        }
        Ok(QAlpha { q, alpha })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `1 − α(1 − q)`, always in `(q, 1]`.
    pub fn shift_denominator(&self) -> f64 {
        1.0 - self.alpha * (1.0 - self.q)
    }

    /// `q / (1 − α(1 − q))`, the value at the origin of the shifted self-maps; lies in `(0, 1)`.
    pub fn ratio(&self) -> f64 {
        self.q / self.shift_denominator()
    }

    /// `ln(ratio)`, strictly negative.
    pub fn log_ratio(&self) -> f64 {
        self.q.ln() - (-self.alpha * (1.0 - self.q)).ln_1p()
    }
}

/// The q-integer `[n]_q = (1 − q^n)/(1 − q)`.
pub fn q_integer(n: usize, q: f64) -> f64 {
    (1.0 - q.powi(n as i32)) / (1.0 - q)
}

/// `D_q f` as a series: the coefficient of `z^{n−1}` is `a_n [n]_q`.
///
/// The output has order `N − 1` (order 0 for constant input) and its constant
/// term is `a_1 = f'(0)`.
pub fn q_diff(f: &TruncatedSeries, q: f64) -> Result<TruncatedSeries> {
    check_q(q)?;
    Ok(TruncatedSeries::new(
        f.coeffs()
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, &a)| a * q_integer(n, q))
            .collect(),
    ))
}

/// The q-shifted factorial `(a;q)_n = ∏_{k<n} (1 − a q^k)`.
pub fn q_pochhammer(a: Complex64, q: f64, n: usize) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    let mut qk = 1.0;
    for _ in 0..n {
        acc *= 1.0 - a * qk;
        qk *= q;
    }
    acc
}

/// `(a;q)_∞` truncated once the factors are within machine precision of 1.
pub fn q_pochhammer_inf(a: Complex64, q: f64) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    let mut qk = 1.0;
    while (a * qk).norm() > f64::EPSILON * 1e-3 {
        acc *= 1.0 - a * qk;
        qk *= q;
    }
    acc
}

/// Heine's function `Φ[a,b;c;q,·]` with non-negative real parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasicHypergeometric {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub q: f64,
}

impl BasicHypergeometric {
    pub fn new(a: f64, b: f64, c: f64, q: f64) -> Result<Self> {
        check_q(q)?;
        for (name, v) in [("a", a), ("b", b), ("c", c)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be a non-negative real, got {v}"
                )));
            }
        }
        // (c;q)_n = 0 exactly when c = q^{-k} for some k ≥ 0.
        if c >= 1.0 {
            let k = (c.ln() / -q.ln()).round();
            if (c * q.powf(k) - 1.0).abs() < 1e-12 {
                return Err(Error::PochhammerPole(k as usize + 1));
            }
        }
        Ok(BasicHypergeometric { a, b, c, q })
    }

    /// The parameters shifted by `q`: `Φ[aq, bq; cq; q, ·]`.
    pub fn shifted(&self) -> Result<Self> {
        Self::new(self.a * self.q, self.b * self.q, self.c * self.q, self.q)
    }

    /// Ratio of consecutive Taylor coefficients, `t_{n+1}/t_n`.
    fn term_ratio(&self, qn: f64) -> f64 {
        (1.0 - self.a * qn) * (1.0 - self.b * qn) / ((1.0 - self.c * qn) * (1.0 - qn * self.q))
    }

    /// First `order + 1` Taylor coefficients
    /// `(a;q)_n (b;q)_n / ((c;q)_n (q;q)_n)`.
    pub fn series(&self, order: usize) -> TruncatedSeries {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut t = 1.0;
        let mut qn = 1.0;
        for _ in 0..=order {
            coeffs.push(Complex64::new(t, 0.0));
            t *= self.term_ratio(qn);
            qn *= self.q;
        }
        TruncatedSeries::new(coeffs)
    }

    /// Sums the series at `z` until the term modulus stays below `tol` for three
    /// consecutive terms, giving up after [`DEFAULT_TERM_CAP`] terms.
    pub fn eval(&self, z: Complex64, tol: f64) -> Result<Complex64> {
        self.eval_capped(z, tol, DEFAULT_TERM_CAP)
    }

    pub fn eval_capped(&self, z: Complex64, tol: f64, cap: usize) -> Result<Complex64> {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut term = Complex64::new(1.0, 0.0);
        let mut qn = 1.0;
        let mut small = 0;
        for _ in 0..cap {
            sum += term;
            if term.norm() < tol {
                small += 1;
                if small >= CONSECUTIVE_SMALL_TERMS {
                    return Ok(sum);
                }
            } else {
                small = 0;
            }
            term *= z * self.term_ratio(qn);
            qn *= self.q;
        }
        Err(Error::NoConvergence { terms: cap })
    }

    /// Largest coefficientwise residual of the contiguous relation
    /// `a(1−b) z Φ[aq,bq;cq] = (1−c)(Φ[aq,b;c] − Φ[a,b;c])` up to `z^order`.
    pub fn contiguous_residual(&self, order: usize) -> Result<f64> {
        let q = self.q;
        let lhs = Self::new(self.a * q, self.b * q, self.c * q, q)?
            .series(order)
            .shift_up()
            .scale(Complex64::new(self.a * (1.0 - self.b), 0.0));
        let upper = Self::new(self.a * q, self.b, self.c, q)?.series(order);
        let rhs = upper
            .sub(&self.series(order))
            .scale(Complex64::new(1.0 - self.c, 0.0));
        Ok(lhs.truncate(order).max_abs_diff(&rhs))
    }
}

/// Parameters of the shifted Heine function `z ↦ z Φ[a,b;c;q,rz]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeineParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub q: f64,
    pub r: f64,
}

impl HeineParams {
    pub fn new(a: f64, b: f64, c: f64, q: f64, r: f64) -> Result<Self> {
        BasicHypergeometric::new(a, b, c, q)?;
        if !(r > 0.0 && r <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "r must lie in (0, 1], got {r}"
            )));
        }
        Ok(HeineParams { a, b, c, q, r })
    }

    pub fn function(&self) -> Result<BasicHypergeometric> {
        BasicHypergeometric::new(self.a, self.b, self.c, self.q)
    }

    /// Checks `0 < 1−aq < 1−cq` and `0 < 1−b < 1−c` (strict forms).
    pub fn check_admissible(&self) -> Result<()> {
        let (a, b, c, q) = (self.a, self.b, self.c, self.q);
        if 1.0 - a * q <= 0.0 {
            return Err(Error::Inadmissible("0 < 1 - a q"));
        }
        if 1.0 - a * q >= 1.0 - c * q {
            return Err(Error::Inadmissible("1 - a q < 1 - c q"));
        }
        if 1.0 - b <= 0.0 {
            return Err(Error::Inadmissible("0 < 1 - b"));
        }
        if 1.0 - b >= 1.0 - c {
            return Err(Error::Inadmissible("1 - b < 1 - c"));
        }
        Ok(())
    }

    /// `s = q(1−a)/(a(1−q))`; undefined for `a = 0`.
    pub fn s(&self) -> Result<f64> {
        if self.a == 0.0 {
            return Err(Error::InvalidParameter(
                "s = q(1-a)/(a(1-q)) is undefined at a = 0".into(),
            ));
        }
        Ok(self.q * (1.0 - self.a) / (self.a * (1.0 - self.q)))
    }

    /// `ρ = −r` when `s > 0`, `ρ = r` when `s < 0`, and `None` when `s = 0`.
    pub fn rho(&self) -> Result<Option<f64>> {
        let s = self.s()?;
        Ok(if s > 0.0 {
            Some(-self.r)
        } else if s < 0.0 {
            Some(self.r)
        } else {
            None
        })
    }
}
