//! Order of q-starlikeness `σ_q(f) = inf_{z∈𝔻} Re(z (D_q f)(z) / f(z))`.
//!
//! The infimum is estimated on a [`DiskGrid`] of concentric rings with a few
//! golden-section passes around the incumbent minimizer, so every estimate
//! is an estimate over `|z| ≤ r_max`. For the shifted Heine functions
//! `z Φ[a,b;c;q,rz]` a closed form and a pair of bounds are available.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcalc::{check_q, HeineParams, DEFAULT_SERIES_TOL};
use crate::serde_ext::{complex_pair, tagged_f64, tagged_opt_f64};
use crate::series::TruncatedSeries;
use crate::starlike::NormalizedFunction;

/// Radicand values down to `-RADICAND_TOL` are clamped to zero.
pub const RADICAND_TOL: f64 = 1e-12;

/// Concentric sampling plan for disk infima and membership scans.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGrid")]
pub struct DiskGrid {
    radii: Vec<f64>,
    angles_per_ring: usize,
    refine_rounds: usize,
}

#[derive(Deserialize)]
struct RawGrid {
    radii: Vec<f64>,
    angles_per_ring: usize,
    refine_rounds: usize,
}

impl TryFrom<RawGrid> for DiskGrid {
    type Error = Error;
    fn try_from(r: RawGrid) -> Result<Self> {
        DiskGrid::new(r.radii, r.angles_per_ring, r.refine_rounds)
    }
}

impl DiskGrid {
    pub fn new(radii: Vec<f64>, angles_per_ring: usize, refine_rounds: usize) -> Result<Self> {
        if radii.is_empty() {
            return Err(Error::InvalidGrid("at least one radius is required".into()));
        }
        if radii.iter().any(|&r| !(r > 0.0 && r < 1.0)) {
            return Err(Error::InvalidGrid("radii must lie in (0, 1)".into()));
        }
        if radii.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidGrid(
                "radii must be strictly increasing".into(),
            ));
        }
        if angles_per_ring < 8 {
            return Err(Error::InvalidGrid(format!(
                "angles_per_ring must be at least 8, got {angles_per_ring}"
            )));
        }
        Ok(DiskGrid {
            radii,
            angles_per_ring,
            refine_rounds,
        })
    }

    /// `rings` equally spaced radii `r_max·k/rings`, `k = 1..=rings`.
    pub fn uniform(
        rings: usize,
        r_max: f64,
        angles_per_ring: usize,
        refine_rounds: usize,
    ) -> Result<Self> {
        let radii = (1..=rings)
            .map(|k| r_max * k as f64 / rings as f64)
            .collect();
        Self::new(radii, angles_per_ring, refine_rounds)
    }

    /// The 32 × 720 grid up to `|z| = 0.95` used for membership, reduced to
    /// `r_max = 0.85` when `q > 0.9`.
    pub fn membership_default(q: f64) -> Self {
        let r_max = if q > 0.9 { 0.85 } else { 0.95 };
        Self::uniform(32, r_max, 720, 0).expect("static grid is valid")
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn angles_per_ring(&self) -> usize {
        self.angles_per_ring
    }

    pub fn refine_rounds(&self) -> usize {
        self.refine_rounds
    }

    pub fn r_max(&self) -> f64 {
        *self.radii.last().expect("non-empty")
    }

    pub fn with_refine_rounds(mut self, rounds: usize) -> Self {
        self.refine_rounds = rounds;
        self
    }

    fn angle(&self, j: usize) -> f64 {
        TAU * j as f64 / self.angles_per_ring as f64
    }

    /// Grid points ordered by radius, then by angle in `[0, 2π)`.
    pub fn points(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.radii.iter().flat_map(move |&r| {
            (0..self.angles_per_ring).map(move |j| Complex64::from_polar(r, self.angle(j)))
        })
    }
}

/// Golden-section search for a local minimum on `[lo, hi]`; returns the best
/// point evaluated.
fn golden_section(mut lo: f64, mut hi: f64, f: &impl Fn(f64) -> Result<f64>) -> Result<(f64, f64)> {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    for _ in 0..80 {
        if hi - lo < 1e-13 {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2)?;
        }
    }
    Ok(if f1 <= f2 { (x1, f1) } else { (x2, f2) })
}

/// Grid minimum of `objective` followed by the grid's refinement passes.
///
/// The result is a running minimum: refinement only replaces the incumbent
/// when it finds a strictly smaller value.
pub(crate) fn scan_min(
    grid: &DiskGrid,
    origin_value: f64,
    objective: impl Fn(Complex64) -> Result<f64>,
) -> Result<(f64, Complex64)> {
    let mut best = origin_value;
    let mut arg = Complex64::new(0.0, 0.0);
    let mut ring: Option<usize> = None;
    let mut theta = 0.0;
    for (i, &r) in grid.radii.iter().enumerate() {
        for j in 0..grid.angles_per_ring {
            let t = grid.angle(j);
            let z = Complex64::from_polar(r, t);
            let v = objective(z)?;
            if v < best {
                best = v;
                arg = z;
                ring = Some(i);
                theta = t;
            }
        }
    }

    let Some(i) = ring else {
        return Ok((best, arg));
    };
    let mut r = grid.radii[i];
    let spacing = if i > 0 {
        grid.radii[i] - grid.radii[i - 1]
    } else {
        grid.radii[0]
    };
    let r_max = grid.r_max();
    let mut dtheta = TAU / grid.angles_per_ring as f64;
    let mut dr = spacing;
    for _ in 0..grid.refine_rounds {
        let (t, v) = golden_section(theta - dtheta, theta + dtheta, &|t| {
            objective(Complex64::from_polar(r, t))
        })?;
        if v < best {
            best = v;
            theta = t;
            arg = Complex64::from_polar(r, t);
        }
        let lo = (r - dr).max(1e-3 * spacing);
        let hi = (r + dr).min(r_max);
        if hi > lo {
            let (rr, v) =
                golden_section(lo, hi, &|rr| objective(Complex64::from_polar(rr, theta)))?;
            if v < best {
                best = v;
                r = rr;
                arg = Complex64::from_polar(rr, theta);
            }
        }
        dtheta *= 0.5;
        dr *= 0.5;
    }
    Ok((best, arg))
}

/// `w(z) = z (D_q f)(z) / f(z) = (1 − f(qz)/f(z)) / (1 − q)`.
pub fn starlikeness_quotient<F: NormalizedFunction + ?Sized>(
    f: &F,
    z: Complex64,
    q: f64,
) -> Result<Complex64> {
    Ok((1.0 - f.q_quotient(z, q)?) / (1.0 - q))
}

/// Grid estimate of σ_q together with the optional closed-form data of the
/// shifted Heine functions.
///
/// Serialized with all fields; non-finite values are written as `"inf"`,
/// `"-inf"` or `"nan"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderResult {
    #[serde(with = "tagged_f64")]
    pub sigma_estimate: f64,
    #[serde(with = "complex_pair")]
    pub minimizer: Complex64,
    #[serde(with = "tagged_opt_f64")]
    pub closed_form: Option<f64>,
    #[serde(with = "tagged_opt_f64")]
    pub lower_bound: Option<f64>,
    #[serde(with = "tagged_opt_f64")]
    pub upper_bound: Option<f64>,
    #[serde(with = "tagged_opt_f64")]
    pub s: Option<f64>,
    #[serde(with = "tagged_opt_f64")]
    pub rho: Option<f64>,
}

impl OrderResult {
    fn estimate(sigma_estimate: f64, minimizer: Complex64) -> Self {
        OrderResult {
            sigma_estimate,
            minimizer,
            closed_form: None,
            lower_bound: None,
            upper_bound: None,
            s: None,
            rho: None,
        }
    }

    /// `lower ≤ closed_form ≤ upper + 1e−9`; `None` unless all three are present.
    pub fn sandwich_holds(&self) -> Option<bool> {
        match (self.lower_bound, self.closed_form, self.upper_bound) {
            (Some(lo), Some(cf), Some(up)) => Some(lo <= cf && cf <= up + 1e-9),
            _ => None,
        }
    }
}

/// Estimates `σ_q(f)` over `|z| ≤ r_max`. The origin, where the quotient
/// equals 1, is always a candidate.
pub fn sigma_q_estimate<F: NormalizedFunction + ?Sized>(
    f: &F,
    q: f64,
    grid: &DiskGrid,
) -> Result<OrderResult> {
    check_q(q)?;
    f.check_normalized()?;
    let (value, z) = scan_min(grid, 1.0, |z| Ok(starlikeness_quotient(f, z, q)?.re))?;
    Ok(OrderResult::estimate(value, z))
}

/// Closed-form order of `z Φ[a,b;c;q,rz]`:
/// `1 + ρ q (1−a)(1−b)/((1−c)(1−q)) · Φ[aq,bq;cq;q,ρ]/Φ[a,b;c;q,ρ]`
/// with its lower bound `1 + sρ/(1−ρ)` and upper bound `1 + ρ s (1−b)/(2(1−c))`.
///
/// `sigma_estimate` and `minimizer` carry the closed form and `ρ`. At `r = 1`
/// the series diverges at `ρ = ±1`; the closed form is then absent (NaN
/// estimate) and for `s < 0` the lower bound is `−∞`.
pub fn heine_order(p: &HeineParams) -> Result<OrderResult> {
    p.check_admissible()?;
    let s = p.s()?;
    let Some(rho) = p.rho()? else {
        // a = 1: the (1 − a) factor removes the correction term.
        return Ok(OrderResult {
            sigma_estimate: 1.0,
            minimizer: Complex64::new(0.0, 0.0),
            closed_form: Some(1.0),
            lower_bound: Some(1.0),
            upper_bound: Some(1.0),
            s: Some(0.0),
            rho: None,
        });
    };
    let (a, b, c, q) = (p.a, p.b, p.c, p.q);
    let k = q * (1.0 - a) * (1.0 - b) / ((1.0 - c) * (1.0 - q));
    let at = Complex64::new(rho, 0.0);
    let phi = p.function()?;
    let closed_form = match (
        phi.shifted()?.eval(at, DEFAULT_SERIES_TOL),
        phi.eval(at, DEFAULT_SERIES_TOL),
    ) {
        (Ok(num), Ok(den)) => Some(1.0 + rho * k * (num / den).re),
        (Err(Error::NoConvergence { .. }), _) | (_, Err(Error::NoConvergence { .. }))
            if p.r == 1.0 =>
        {
            None
        }
        (Err(e), _) | (_, Err(e)) => return Err(e),
    };
    let lower = if p.r == 1.0 && s < 0.0 {
        f64::NEG_INFINITY
    } else {
        1.0 + s * rho / (1.0 - rho)
    };
    let upper = 1.0 + rho * s * (1.0 - b) / (2.0 * (1.0 - c));
    Ok(OrderResult {
        sigma_estimate: closed_form.unwrap_or(f64::NAN),
        minimizer: at,
        closed_form,
        lower_bound: Some(lower),
        upper_bound: Some(upper),
        s: Some(s),
        rho: Some(rho),
    })
}

/// Numerical check of [`heine_order`] against a grid scan of `z Φ[a,b;c;q,rz]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrosscheckReport {
    /// Grid estimate merged with the closed-form fields.
    pub result: OrderResult,
    /// `|sigma_estimate − closed_form|`.
    pub deviation: f64,
    /// Minimizer in the argument of Φ, i.e. `r` times the grid minimizer.
    #[serde(with = "complex_pair")]
    pub minimizer_argument: Complex64,
    /// Whether the minimizer sits near `ρ` on the same side of the origin.
    pub minimizer_consistent: bool,
    pub series_order: usize,
}

/// Truncation order for `z Φ(rz)` so that `r^N` is below `1e−17`.
fn shifted_series_order(r: f64) -> usize {
    let needed = (17.0 * std::f64::consts::LN_10 / -r.ln()).ceil() as usize;
    needed.clamp(crate::series::DEFAULT_ORDER, 4096)
}

/// The series of `z Φ[a,b;c;q,rz]`.
pub fn shifted_heine_series(p: &HeineParams) -> Result<TruncatedSeries> {
    if p.r >= 1.0 {
        return Err(Error::InvalidParameter(
            "the shifted series needs r < 1".into(),
        ));
    }
    let n = shifted_series_order(p.r);
    Ok(p.function()?
        .series(n)
        .scale_argument(Complex64::new(p.r, 0.0))
        .shift_up())
}

pub fn heine_order_crosscheck(p: &HeineParams, grid: &DiskGrid) -> Result<CrosscheckReport> {
    let closed = heine_order(p)?;
    let f = shifted_heine_series(p)?;
    let estimate = sigma_q_estimate(&f, p.q, grid)?;
    let cf = closed.closed_form.expect("closed form exists for r < 1");
    let minimizer_argument = estimate.minimizer * p.r;
    let minimizer_consistent = match closed.rho {
        Some(rho) => {
            minimizer_argument.re * rho > 0.0 && (minimizer_argument - rho).norm() <= 0.05 * p.r
        }
        None => true,
    };
    Ok(CrosscheckReport {
        deviation: (estimate.sigma_estimate - cf).abs(),
        result: OrderResult {
            sigma_estimate: estimate.sigma_estimate,
            minimizer: estimate.minimizer,
            ..closed
        },
        minimizer_argument,
        minimizer_consistent,
        series_order: f.order(),
    })
}

/// `(1 + q Re w − sqrt((1 − q Re w)² − 2(1−q) Re w + (1−q²)|w|²)) / (1 + q)`:
/// the largest order α for which `w` satisfies the squared disk condition.
pub fn order_expression(w: Complex64, q: f64) -> Result<f64> {
    check_q(q)?;
    let re = w.re;
    let mut radicand = (1.0 - q * re).powi(2) - 2.0 * (1.0 - q) * re + (1.0 - q * q) * w.norm_sqr();
    if radicand < 0.0 {
        if radicand < -RADICAND_TOL {
            return Err(Error::NegativeRadicand(radicand));
        }
        radicand = 0.0;
    }
    Ok((1.0 + q * re - radicand.sqrt()) / (1.0 + q))
}

/// Grid infimum of [`order_expression`] applied to `w(z)`; the origin
/// (`w = 1`, value 1) is a candidate.
pub fn order_expression_infimum<F: NormalizedFunction + ?Sized>(
    f: &F,
    q: f64,
    grid: &DiskGrid,
) -> Result<(f64, Complex64)> {
    check_q(q)?;
    scan_min(grid, 1.0, |z| {
        order_expression(starlikeness_quotient(f, z, q)?, q)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcalc::QAlpha;
    use crate::starlike::extremal_function;
    use proptest::prelude::*;

    #[test]
    fn grid_validation() {
        assert!(DiskGrid::new(vec![], 8, 0).is_err());
        assert!(DiskGrid::new(vec![0.5, 0.4], 8, 0).is_err());
        assert!(DiskGrid::new(vec![0.5, 1.0], 8, 0).is_err());
        assert!(DiskGrid::new(vec![0.5], 7, 0).is_err());
        let g = DiskGrid::uniform(4, 0.8, 8, 1).unwrap();
        assert_eq!(g.points().count(), 32);
        assert!((g.r_max() - 0.8).abs() < 1e-15);
        assert!(serde_json::from_str::<DiskGrid>(
            r#"{"radii":[0.2,0.1],"angles_per_ring":8,"refine_rounds":0}"#
        )
        .is_err());
    }

    #[test]
    fn golden_section_finds_parabola_minimum() {
        let (x, v) = golden_section(-1.0, 2.0, &|x| Ok((x - 0.3f64).powi(2))).unwrap();
        assert!((x - 0.3).abs() < 1e-6);
        assert!(v < 1e-12);
    }

    #[test]
    fn identity_has_order_one() {
        let grid = DiskGrid::uniform(8, 0.95, 32, 2).unwrap();
        let r = sigma_q_estimate(&TruncatedSeries::identity(3), 0.5, &grid).unwrap();
        assert!((r.sigma_estimate - 1.0).abs() < 1e-15);
    }

    #[test]
    fn extremal_order_is_at_least_alpha() {
        let grid = DiskGrid::uniform(32, 0.95, 360, 2).unwrap();
        for &(q, a) in &[(0.3, 0.25), (0.6, 0.5), (0.9, 0.75)] {
            let params = QAlpha::new(q, a).unwrap();
            let r = sigma_q_estimate(&extremal_function(&params), q, &grid).unwrap();
            assert!(
                r.sigma_estimate >= a - 1e-6,
                "{q} {a}: {}",
                r.sigma_estimate
            );
        }
    }

    #[test]
    fn refinement_never_increases_the_estimate() {
        let f = TruncatedSeries::from_real(&[0.0, 1.0, 0.4, -0.2, 0.05]);
        let mut prev = f64::INFINITY;
        for rounds in 0..5 {
            let grid = DiskGrid::uniform(12, 0.9, 24, rounds).unwrap();
            let v = sigma_q_estimate(&f, 0.4, &grid).unwrap().sigma_estimate;
            assert!(v <= prev);
            prev = v;
        }
    }

    #[test]
    fn vanishing_function_is_an_error_with_witness() {
        let f = TruncatedSeries::from_real(&[0.0, 1.0, 2.0]);
        let grid = DiskGrid::new(vec![0.5], 8, 0).unwrap();
        match sigma_q_estimate(&f, 0.5, &grid) {
            Err(Error::VanishesAt(z)) => assert!((z + 0.5).norm() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn heine_order_example_s_positive() {
        let p = HeineParams::new(0.5, 0.5, 0.25, 0.5, 0.5).unwrap();
        let r = heine_order(&p).unwrap();
        assert_eq!(r.s, Some(1.0));
        assert_eq!(r.rho, Some(-0.5));
        assert!((r.lower_bound.unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!((r.upper_bound.unwrap() - 5.0 / 6.0).abs() < 1e-15);
        // closed form recomputed from plain partial sums of the two Heine series
        let sum = |a: f64, b: f64, c: f64, z: f64| {
            let (mut t, mut acc) = (1.0, 0.0);
            for n in 0..200 {
                acc += t;
                let qn = 0.5f64.powi(n);
                t *= (1.0 - a * qn) * (1.0 - b * qn) / ((1.0 - c * qn) * (1.0 - qn * 0.5)) * z;
            }
            acc
        };
        let k = 0.5 * 0.5 * 0.5 / (0.75 * 0.5);
        let want = 1.0 - 0.5 * k * sum(0.25, 0.25, 0.125, -0.5) / sum(0.5, 0.5, 0.25, -0.5);
        assert!((r.closed_form.unwrap() - want).abs() < 1e-14);
    }

    #[test]
    fn heine_order_example_s_negative() {
        let p = HeineParams::new(1.5, 0.5, 0.25, 0.5, 0.5).unwrap();
        let r = heine_order(&p).unwrap();
        assert!((r.s.unwrap() + 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(r.rho, Some(0.5));
        assert!((r.lower_bound.unwrap() - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn heine_order_a_equal_one_is_identity_like() {
        let p = HeineParams::new(1.0, 0.5, 0.25, 0.5, 0.7).unwrap();
        let r = heine_order(&p).unwrap();
        assert_eq!(r.closed_form, Some(1.0));
        let grid = DiskGrid::uniform(8, 0.999, 16, 1).unwrap();
        let x = heine_order_crosscheck(&p, &grid).unwrap();
        assert!(x.deviation < 1e-9);
    }

    #[test]
    fn heine_order_rejects_inadmissible_and_zero_a() {
        let p = HeineParams::new(0.5, 0.2, 0.25, 0.5, 0.5).unwrap();
        assert_eq!(heine_order(&p), Err(Error::Inadmissible("1 - b < 1 - c")));
        // a = 0 would need c < 0, so it is never admissible
        let p = HeineParams::new(0.0, 0.5, 0.0, 0.5, 0.5).unwrap();
        assert!(heine_order(&p).is_err());
    }

    #[test]
    fn heine_order_full_disk_negative_s_has_minus_infinity_lower_bound() {
        let p = HeineParams::new(1.5, 0.5, 0.25, 0.5, 1.0).unwrap();
        let r = heine_order(&p).unwrap();
        assert_eq!(r.lower_bound, Some(f64::NEG_INFINITY));
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["lower_bound"], "-inf");
        let back: OrderResult = serde_json::from_value(v).unwrap();
        assert_eq!(back.lower_bound, Some(f64::NEG_INFINITY));
    }

    #[test]
    fn crosscheck_matches_closed_form() {
        let grid = DiskGrid::uniform(48, 1.0 - 1e-9, 360, 3).unwrap();
        for (a, b, c) in [(0.5, 0.5, 0.25), (1.5, 0.5, 0.25)] {
            let p = HeineParams::new(a, b, c, 0.5, 0.5).unwrap();
            let x = heine_order_crosscheck(&p, &grid).unwrap();
            assert!(x.deviation <= 1e-3, "{x:?}");
            assert!(x.minimizer_consistent, "{x:?}");
        }
    }

    #[test]
    fn examples_fall_outside_the_bounds() {
        // the closed form agrees with the scan (see crosscheck_matches_closed_form),
        // yet lies above the upper bound for s > 0 and below the lower bound for s < 0
        let above = heine_order(&HeineParams::new(0.5, 0.5, 0.25, 0.5, 0.5).unwrap()).unwrap();
        assert_eq!(above.sandwich_holds(), Some(false));
        assert!(above.closed_form.unwrap() > above.upper_bound.unwrap());
        let below = heine_order(&HeineParams::new(1.5, 0.5, 0.25, 0.5, 0.5).unwrap()).unwrap();
        assert_eq!(below.sandwich_holds(), Some(false));
        assert!(below.closed_form.unwrap() < below.lower_bound.unwrap());
        let inside = heine_order(&HeineParams::new(0.8, 0.6, 0.3, 0.7, 0.8).unwrap()).unwrap();
        assert_eq!(inside.sandwich_holds(), Some(true));
    }

    /// Dense scan of the classical quantity `Re(z f'(z)/f(z))` over `|z| ≤ r_max`.
    fn classical_order(f: &TruncatedSeries, r_max: f64, rings: usize, angles: usize) -> f64 {
        let df = f.derivative();
        let mut best = 1.0f64;
        for i in 1..=rings {
            for j in 0..angles {
                let z = Complex64::from_polar(
                    r_max * i as f64 / rings as f64,
                    TAU * j as f64 / angles as f64,
                );
                best = best.min((z * df.eval(z) / f.eval(z)).re);
            }
        }
        best
    }

    #[test]
    fn near_one_matches_classical_order() {
        let koebe = TruncatedSeries::from_real(&(0..=64).map(|n| n as f64).collect::<Vec<_>>());
        let quadratic = TruncatedSeries::from_real(&[0.0, 1.0, 0.3, -0.1]);
        let grid = DiskGrid::uniform(16, 0.8, 72, 2).unwrap();
        for f in [koebe, quadratic] {
            let est = sigma_q_estimate(&f, 0.999, &grid).unwrap().sigma_estimate;
            let oracle = classical_order(&f, 0.8, 160, 720);
            assert!((est - oracle).abs() < 5e-2, "{est} vs {oracle}");
        }
    }

    #[test]
    fn order_expression_examples() {
        for q in [0.2, 0.5, 0.8] {
            for t in [0.0, 0.3, 0.75, 0.99] {
                let v = order_expression(Complex64::new(t, 0.0), q).unwrap();
                assert!((v - t).abs() < 1e-12);
            }
            assert!((order_expression(Complex64::new(1.0, 0.0), q).unwrap() - 1.0).abs() < 1e-15);
        }
    }

    proptest! {
        #[test]
        fn order_expression_below_real_part(re in -3.0f64..3.0, im in -3.0f64..3.0, q in 0.01f64..0.99) {
            let w = Complex64::new(re, im);
            let v = order_expression(w, q).unwrap();
            prop_assert!(v <= re + 1e-12);
            if re <= 1.0 && im.abs() > 1e-3 {
                prop_assert!(v < re);
            }
        }

        #[test]
        fn order_expression_exact_on_real_axis(t in -3.0f64..1.0, q in 0.01f64..0.99) {
            let v = order_expression(Complex64::new(t, 0.0), q).unwrap();
            prop_assert!((v - t).abs() <= 1e-12 * t.abs().max(1.0));
        }
    }
}
