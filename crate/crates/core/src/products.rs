//! The infinite-product constructor and the map `ρ` between the class and
//! zero-free self-maps of the disk fixing `q` at the origin.
//!
//! `ρ(f)(z) = (f(qz)/f(z) − αq)/(1 − α)` and, conversely,
//! `f(z) = z / ∏_{n≥0} ((1 − α) h(zq^n) + αq)/q`.

use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::herglotz::PFunction;
use crate::qcalc::QAlpha;
use crate::series::TruncatedSeries;
use crate::starlike::NormalizedFunction;

/// Tolerance for closed-disk bounds and the value at the origin.
pub const DISK_TOL: f64 = 1e-9;

/// Sampled values below this modulus count as zeros.
pub const ZERO_VALUE_TOL: f64 = 1e-12;

/// A product factor below this modulus is treated as a zero of `h`.
pub const FACTOR_ZERO_TOL: f64 = 1e-14;

/// Upper limit on the number of product factors.
pub const MAX_FACTORS: usize = 10_000;

/// Consecutive near-one factors that end the product.
const CONSECUTIVE_UNIT_FACTORS: usize = 3;

/// Radius of the sampling circle used by [`bqa_log_representation`].
pub const LOG_SAMPLING_RADIUS: f64 = 0.9;

/// Radial steps used to unwrap the logarithm.
const UNWRAP_STEPS: usize = 64;

type Evaluator = Arc<dyn Fn(Complex64) -> Result<Complex64> + Send + Sync>;

/// An evaluator on the unit disk with declared (not proven) metadata.
#[derive(Clone)]
pub struct DiskFunction {
    eval: Evaluator,
    value_at_zero: Complex64,
    omits_zero: bool,
}

impl fmt::Debug for DiskFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DiskFunction")
            .field("value_at_zero", &self.value_at_zero)
            .field("omits_zero", &self.omits_zero)
            .finish_non_exhaustive()
    }
}

impl DiskFunction {
    pub fn new(
        eval: impl Fn(Complex64) -> Result<Complex64> + Send + Sync + 'static,
        value_at_zero: Complex64,
        omits_zero: bool,
    ) -> Self {
        DiskFunction {
            eval: Arc::new(eval),
            value_at_zero,
            omits_zero,
        }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(move |_| Ok(c), c, c.norm() > ZERO_VALUE_TOL)
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        (self.eval)(z)
    }

    pub fn value_at_zero(&self) -> Complex64 {
        self.value_at_zero
    }

    pub fn omits_zero(&self) -> bool {
        self.omits_zero
    }

    fn check_center(&self, expected: f64) -> Result<()> {
        let expected = Complex64::new(expected, 0.0);
        if (self.value_at_zero - expected).norm() > DISK_TOL {
            return Err(Error::CenterMismatch {
                found: self.value_at_zero,
                expected,
            });
        }
        Ok(())
    }

    /// Sample check of the self-map contract: `h(0) = q` and `|h| ≤ 1 + 1e−9`
    /// at every point; with `zero_free`, also `|h| ≥ 1e−12`.
    pub fn verify_self_map(
        &self,
        q: f64,
        points: impl IntoIterator<Item = Complex64>,
        zero_free: bool,
    ) -> Result<()> {
        self.check_center(q)?;
        for z in points {
            let v = self.eval(z)?;
            let m = v.norm();
            if m > 1.0 + DISK_TOL {
                return Err(Error::OutsideDisk { z, modulus: m });
            }
            if zero_free && m < ZERO_VALUE_TOL {
                return Err(Error::VanishesAt(z));
            }
        }
        Ok(())
    }
}

/// `ρ(f)(z) = (f(qz)/f(z) − αq)/(1 − α)`, with value `q` at the origin.
pub fn rho_map(f: Arc<dyn NormalizedFunction>, params: &QAlpha) -> Result<DiskFunction> {
    f.check_normalized()?;
    let (q, alpha) = (params.q(), params.alpha());
    Ok(DiskFunction::new(
        move |z| Ok((f.q_quotient(z, q)? - alpha * q) / (1.0 - alpha)),
        Complex64::new(q, 0.0),
        true,
    ))
}

/// `f(z) = z / ∏_{n≥0} ((1 − α) h(zq^n) + αq)/q`, truncated once three
/// consecutive factors are within `tol` of one.
#[derive(Clone, Debug)]
pub struct ProductFunction {
    h: DiskFunction,
    params: QAlpha,
    tol: f64,
}

pub fn product_construct(h: DiskFunction, params: &QAlpha, tol: f64) -> Result<ProductFunction> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if !h.omits_zero() {
        return Err(Error::InvalidParameter(
            "h must be declared zero-free".into(),
        ));
    }
    h.check_center(params.q())?;
    Ok(ProductFunction {
        h,
        params: *params,
        tol,
    })
}

impl ProductFunction {
    fn factor(&self, z: Complex64, n: usize, qn: f64) -> Result<Complex64> {
        let (q, alpha) = (self.params.q(), self.params.alpha());
        let factor = ((1.0 - alpha) * self.h.eval(z * qn)? + alpha * q) / q;
        if factor.norm() < FACTOR_ZERO_TOL {
            return Err(Error::VanishingFactor { z, index: n });
        }
        Ok(factor)
    }

    /// `f(z)/z` together with the number of factors used.
    pub fn over_z_with_count(&self, z: Complex64) -> Result<(Complex64, usize)> {
        let mut prod = Complex64::new(1.0, 0.0);
        let mut qn = 1.0;
        let mut run = 0;
        for n in 0..MAX_FACTORS {
            let factor = self.factor(z, n, qn)?;
            prod *= factor;
            run = if (factor - 1.0).norm() < self.tol {
                run + 1
            } else {
                0
            };
            if run == CONSECUTIVE_UNIT_FACTORS {
                return Ok((1.0 / prod, n + 1));
            }
            qn *= self.params.q();
        }
        Err(Error::NoConvergence { terms: MAX_FACTORS })
    }

    /// `f(z)/z` from exactly `count` factors.
    pub fn over_z_with_factors(&self, z: Complex64, count: usize) -> Result<Complex64> {
        let mut prod = Complex64::new(1.0, 0.0);
        let mut qn = 1.0;
        for n in 0..count {
            prod *= self.factor(z, n, qn)?;
            qn *= self.params.q();
        }
        Ok(1.0 / prod)
    }

    pub fn to_disk_function(&self) -> DiskFunction {
        let this = self.clone();
        DiskFunction::new(move |z| this.eval(z), Complex64::new(0.0, 0.0), false)
    }
}

impl NormalizedFunction for ProductFunction {
    fn over_z(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.over_z_with_count(z)?.0)
    }

    /// `f(qz)/f(z)` is the first product factor rescaled, with no truncation.
    fn q_quotient(&self, z: Complex64, q: f64) -> Result<Complex64> {
        if q == self.params.q() {
            return Ok(q * self.factor(z, 0, 1.0)?);
        }
        let den = self.over_z(z)?;
        Ok(q * self.over_z(z * q)? / den)
    }
}

/// `g = ((1 − α)h + αq)/(1 − α(1 − q))`; centre value `q/(1 − α(1 − q))` when `h(0) = q`.
pub fn alpha_shift(h: DiskFunction, params: &QAlpha) -> DiskFunction {
    let (q, alpha, d) = (params.q(), params.alpha(), params.shift_denominator());
    let value_at_zero = ((1.0 - alpha) * h.value_at_zero() + alpha * q) / d;
    let omits_zero = alpha == 0.0 && h.omits_zero();
    DiskFunction::new(
        move |z| Ok(((1.0 - alpha) * h.eval(z)? + alpha * q) / d),
        value_at_zero,
        omits_zero,
    )
}

/// Result of [`bqa_log_representation`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogRepresentation {
    pub p: PFunction,
    /// `(z, p(z))` at the sampling circle, from the unwrapped logarithm.
    pub samples: Vec<(Complex64, Complex64)>,
    /// Smallest real part of `p` over every sampled point, radial paths included.
    pub min_real_part: f64,
}

fn nearest_branch(principal: Complex64, previous: Complex64) -> Complex64 {
    let k = ((previous.im - principal.im) / TAU).round();
    principal + Complex64::new(0.0, k * TAU)
}

/// Recovers `p = Log(g)/ln(ratio)` for `g` with `g(0) = ratio`.
///
/// `g` is sampled on `M = max(8(N+1), 256)` points of `|z| = 0.9`; the
/// logarithm is continued along radial paths from the origin and the
/// coefficients are read off with a discrete Fourier transform.
pub fn bqa_log_representation(
    g: &DiskFunction,
    params: &QAlpha,
    order: usize,
) -> Result<LogRepresentation> {
    let ratio = params.ratio();
    g.check_center(ratio)?;
    let l = params.log_ratio();
    let m = (8 * (order + 1)).max(256);
    let log0 = Complex64::new(ratio.ln(), 0.0);

    let mut samples = Vec::with_capacity(m);
    let mut min_re = 1.0f64;
    for k in 0..m {
        let dir = Complex64::from_polar(1.0, TAU * k as f64 / m as f64);
        let mut log = log0;
        for j in 1..=UNWRAP_STEPS {
            let z = dir * (LOG_SAMPLING_RADIUS * j as f64 / UNWRAP_STEPS as f64);
            let v = g.eval(z)?;
            if v.norm() < ZERO_VALUE_TOL {
                return Err(Error::VanishesAt(z));
            }
            log = nearest_branch(v.ln(), log);
            min_re = min_re.min((log / l).re);
        }
        samples.push((dir * LOG_SAMPLING_RADIUS, log / l));
    }

    let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
    coeffs[0] = Complex64::new(1.0, 0.0);
    for (n, c) in coeffs.iter_mut().enumerate().skip(1) {
        let sum: Complex64 = samples
            .iter()
            .enumerate()
            .map(|(k, &(_, p))| {
                p * Complex64::from_polar(1.0, -TAU * (k * n % m) as f64 / m as f64)
            })
            .sum();
        *c = sum / (m as f64 * LOG_SAMPLING_RADIUS.powi(n as i32));
    }
    Ok(LogRepresentation {
        p: PFunction::new(TruncatedSeries::new(coeffs))?,
        samples,
        min_real_part: min_re,
    })
}
