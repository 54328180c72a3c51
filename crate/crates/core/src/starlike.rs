//! The class of q-starlike functions of order α.
//!
//! A normalized `f` belongs to the class when `|f(qz)/f(z) − αq| ≤ 1 − α` on
//! the unit disk. This module builds the extremal pair
//! `F_{q,α}(z) = Σ_{n≥1} −2 ln(ratio)/(1 − q^n) z^n` and `G_{q,α} = z·exp(F_{q,α})`,
//! tests membership on a sampling grid and checks coefficient bounds.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::order::DiskGrid;
use crate::qcalc::QAlpha;
use crate::serde_ext::{complex_pair, tagged_f64};
use crate::series::TruncatedSeries;

/// Grid slack accepted by [`membership`].
pub const MEMBERSHIP_SLACK: f64 = 1e-7;

/// Absolute slack in the coefficient bound `|a_n| ≤ c_n`.
pub const BIEBERBACH_TOL: f64 = 1e-8;

/// `|f(z)/z|` below this is treated as a zero of `f`.
pub const ZERO_TOL: f64 = 1e-12;

const NORMALIZATION_TOL: f64 = 1e-12;

/// A normalized analytic function `f(z) = z + a_2 z^2 + …` on the unit disk.
///
/// Implementors only need `f(z)/z`; the quotient `f(qz)/f(z)` that drives
/// membership and order estimates is derived from it, which keeps the
/// removable singularity at the origin out of the way.
pub trait NormalizedFunction: Send + Sync {
    /// `f(z)/z`, extended by `1` at the origin.
    fn over_z(&self, z: Complex64) -> Result<Complex64>;

    fn eval(&self, z: Complex64) -> Result<Complex64> {
        Ok(z * self.over_z(z)?)
    }

    /// `f(qz)/f(z)`, equal to `q` at the origin.
    ///
    /// Fails with [`Error::VanishesAt`] where `f` has a zero away from the origin.
    fn q_quotient(&self, z: Complex64, q: f64) -> Result<Complex64> {
        let den = self.over_z(z)?;
        if den.norm() < ZERO_TOL {
            return Err(Error::VanishesAt(z));
        }
        Ok(q * self.over_z(z * q)? / den)
    }

    fn check_normalized(&self) -> Result<()> {
        Ok(())
    }
}

impl NormalizedFunction for TruncatedSeries {
    fn over_z(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.coeffs()[1..]
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a))
    }

    fn check_normalized(&self) -> Result<()> {
        check_series_normalized(self)
    }
}

fn check_series_normalized(f: &TruncatedSeries) -> Result<()> {
    if f.order() < 1 {
        return Err(Error::NotNormalized("order must be at least 1".into()));
    }
    if f.coeff(0).norm() > NORMALIZATION_TOL || (f.coeff(1) - 1.0).norm() > NORMALIZATION_TOL {
        return Err(Error::NotNormalized(format!(
            "expected a_0 = 0 and a_1 = 1, got a_0 = {}, a_1 = {}",
            f.coeff(0),
            f.coeff(1)
        )));
    }
    Ok(())
}

/// Coefficients of `F_{q,α}` up to `z^order`; the constant term is zero.
pub fn f_coeffs(params: &QAlpha, order: usize) -> TruncatedSeries {
    let m = -2.0 * params.log_ratio();
    let q = params.q();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
    for (n, c) in coeffs.iter_mut().enumerate().skip(1) {
        *c = Complex64::new(m / (1.0 - q.powi(n as i32)), 0.0);
    }
    TruncatedSeries::new(coeffs)
}

/// `F_{q,α}` and `G_{q,α} = z exp(F_{q,α})` as truncated series.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremalPair {
    pub params: QAlpha,
    pub f: TruncatedSeries,
    pub g: TruncatedSeries,
}

impl ExtremalPair {
    /// The coefficient `c_n` of `G_{q,α}`.
    pub fn c(&self, n: usize) -> f64 {
        self.g.coeff(n).re
    }
}

pub fn g_coeffs(params: &QAlpha, order: usize) -> ExtremalPair {
    let f = f_coeffs(params, order);
    let g = if order == 0 {
        TruncatedSeries::zero(0)
    } else {
        f.truncate(order - 1)
            .exp()
            .expect("F has a vanishing constant term")
            .shift_up()
    };
    ExtremalPair {
        params: *params,
        f,
        g,
    }
}

/// Evaluates `F_{q,α}(z)` without truncating in `n`, through the Lambert form
/// `F(z) = −2 ln(ratio) Σ_{j≥0} q^j z / (1 − q^j z)`.
pub fn f_eval(params: &QAlpha, z: Complex64) -> Complex64 {
    let m = -2.0 * params.log_ratio();
    lambert_sum(params.q(), z) * m
}

fn lambert_sum(q: f64, z: Complex64) -> Complex64 {
    let r = z.norm();
    if r == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let mut sum = Complex64::new(0.0, 0.0);
    let mut qj = 1.0;
    loop {
        let w = z * qj;
        sum += w / (1.0 - w);
        qj *= q;
        let rj = qj * r;
        let tail = rj / ((1.0 - rj) * (1.0 - q));
        if tail <= 1e-17 * (1.0 + sum.norm()) || qj == 0.0 {
            return sum;
        }
    }
}

/// `f(z) = z exp(Σ_k w_k F_{q,α}(σ_k z))` for a finitely supported measure with
/// atoms `σ_k` and weights `w_k`, evaluated in closed form.
///
/// With a single unit atom at `σ = 1` this is `G_{q,α}` itself; other atoms give
/// the functions whose log-coefficients are `φ_n = F_n Σ_k w_k σ_k^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExponentialMember {
    params: QAlpha,
    atoms: Vec<(Complex64, f64)>,
}

impl ExponentialMember {
    pub fn new(params: QAlpha, atoms: Vec<(Complex64, f64)>) -> Self {
        ExponentialMember { params, atoms }
    }

    pub fn params(&self) -> &QAlpha {
        &self.params
    }

    /// `Log(f(z)/z)`.
    pub fn log_over_z(&self, z: Complex64) -> Complex64 {
        self.atoms
            .iter()
            .map(|&(sigma, w)| f_eval(&self.params, sigma * z) * w)
            .sum()
    }
}

/// `G_{q,α}` as a closed-form evaluator.
pub fn extremal_function(params: &QAlpha) -> ExponentialMember {
    ExponentialMember::new(*params, vec![(Complex64::new(1.0, 0.0), 1.0)])
}

impl NormalizedFunction for ExponentialMember {
    fn over_z(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.log_over_z(z).exp())
    }

    fn q_quotient(&self, z: Complex64, q: f64) -> Result<Complex64> {
        Ok(q * (self.log_over_z(z * q) - self.log_over_z(z)).exp())
    }
}

/// Rotation `z ↦ e^{−iθ} f(e^{iθ} z)`; keeps the normalization.
pub fn rotate(f: &TruncatedSeries, theta: f64) -> TruncatedSeries {
    f.scale_argument(Complex64::from_polar(1.0, theta))
        .scale(Complex64::from_polar(1.0, -theta))
}

/// Outcome of a grid membership test.
///
/// `member_on_grid` is a semi-decision: `true` means no point of the grid
/// violates the disk condition by more than `slack`. A `false` comes with the
/// witness point where `|f(qz)/f(z) − αq| − (1 − α)` is largest; if `f`
/// vanishes there, `max_violation` is `+inf`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub member_on_grid: bool,
    #[serde(with = "tagged_f64")]
    pub max_violation: f64,
    #[serde(with = "complex_pair")]
    pub witness: Complex64,
    pub slack: f64,
}

/// Tests `|f(qz)/f(z) − αq| ≤ 1 − α` at every grid point (and at the origin).
///
/// Ties are broken towards the smaller radius, then the smaller angle, so the
/// reported witness is deterministic.
pub fn membership<F: NormalizedFunction + ?Sized>(
    f: &F,
    params: &QAlpha,
    grid: &DiskGrid,
) -> Result<MembershipReport> {
    f.check_normalized()?;
    let q = params.q();
    let center = params.alpha() * q;
    let radius = 1.0 - params.alpha();

    let origin = Complex64::new(0.0, 0.0);
    let mut worst = ((q - center).abs() - radius, origin);
    for z in grid.points() {
        match f.q_quotient(z, q) {
            Ok(quot) => {
                let v = (quot - center).norm() - radius;
                if v > worst.0 {
                    worst = (v, z);
                }
            }
            Err(Error::VanishesAt(w)) => {
                return Ok(MembershipReport {
                    member_on_grid: false,
                    max_violation: f64::INFINITY,
                    witness: w,
                    slack: MEMBERSHIP_SLACK,
                })
            }
            Err(e) => return Err(e),
        }
    }
    Ok(MembershipReport {
        member_on_grid: worst.0 <= MEMBERSHIP_SLACK,
        max_violation: worst.0,
        witness: worst.1,
        slack: MEMBERSHIP_SLACK,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientViolation {
    pub n: usize,
    pub modulus: f64,
    pub bound: f64,
}

/// Per-coefficient comparison of `|a_n|` with `c_n` for `2 ≤ n ≤ n_max`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BieberbachReport {
    pub n_max: usize,
    pub violations: Vec<CoefficientViolation>,
    /// `max_n (|a_n| − c_n)`.
    pub max_excess: f64,
    /// `max_n ||a_n| − c_n| / max(1, c_n)`; zero when every bound is attained.
    pub max_relative_gap: f64,
}

impl BieberbachReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn is_extremal(&self, tol: f64) -> bool {
        self.max_relative_gap <= tol
    }
}

pub fn bieberbach_check(
    f: &TruncatedSeries,
    params: &QAlpha,
    n_max: usize,
) -> Result<BieberbachReport> {
    check_series_normalized(f)?;
    let extremal = g_coeffs(params, n_max);
    let mut report = BieberbachReport {
        n_max,
        violations: Vec::new(),
        max_excess: f64::NEG_INFINITY,
        max_relative_gap: 0.0,
    };
    for n in 2..=n_max {
        let modulus = f.coeff(n).norm();
        let bound = extremal.c(n);
        report.max_excess = report.max_excess.max(modulus - bound);
        report.max_relative_gap = report
            .max_relative_gap
            .max((modulus - bound).abs() / bound.max(1.0));
        if modulus > bound + BIEBERBACH_TOL {
            report
                .violations
                .push(CoefficientViolation { n, modulus, bound });
        }
    }
    Ok(report)
}

/// Coefficients `k_0..=k_{n_max}` of the Koebe function `z/(1 − z)^{2(1−α)}`.
pub fn koebe_coefficients(alpha: f64, n_max: usize) -> Vec<f64> {
    let mut k = vec![0.0; n_max + 1];
    if n_max >= 1 {
        k[1] = 1.0;
    }
    for n in 2..=n_max {
        k[n] = k[n - 1] * (n as f64 - 2.0 * alpha) / (n - 1) as f64;
    }
    k
}

/// q used for the classical-limit comparison.
pub const KOEBE_LIMIT_Q: f64 = 0.999;

/// Largest relative deviation `|c_n − k_n| / k_n` for `1 ≤ n ≤ n_max` between
/// `G_{0.999,α}` and the Koebe function of order α.
pub fn koebe_limit_check(alpha: f64, n_max: usize) -> Result<f64> {
    let params = QAlpha::new(KOEBE_LIMIT_Q, alpha)?;
    let pair = g_coeffs(&params, n_max);
    let koebe = koebe_coefficients(alpha, n_max);
    Ok((1..=n_max)
        .map(|n| (pair.c(n) - koebe[n]).abs() / koebe[n])
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qa(q: f64, alpha: f64) -> QAlpha {
        QAlpha::new(q, alpha).unwrap()
    }

    #[test]
    fn f_coeffs_alpha_zero_is_classical() {
        for q in [0.1, 0.5, 0.9] {
            let f = f_coeffs(&qa(q, 0.0), 16);
            assert_eq!(f.coeff(0).norm(), 0.0);
            for n in 1..=16 {
                let want = -2.0 * q.ln() / (1.0 - q.powi(n as i32));
                assert!((f.coeff(n).re - want).abs() <= 1e-14 * want);
            }
        }
    }

    #[test]
    fn f_coeffs_half_half() {
        // ratio = 2/3, so F_1 = −2 ln(2/3)/(1/2) = 4 ln(3/2)
        let f = f_coeffs(&qa(0.5, 0.5), 3);
        assert!((f.coeff(1).re - 4.0 * 1.5f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn f_coeffs_near_one_behave_like_two_one_minus_alpha_over_n() {
        let f = f_coeffs(&qa(0.999, 0.25), 10);
        for n in 1..=10 {
            assert!((f.coeff(n).re - 1.5 / n as f64).abs() < 1e-2);
        }
    }

    #[test]
    fn f_coeffs_positive_and_decreasing() {
        for &(q, a) in &[(0.05, 0.0), (0.3, 0.9), (0.7, 0.4), (0.95, 0.1)] {
            let f = f_coeffs(&qa(q, a), 64);
            for n in 1..64 {
                // once q^n drops below the rounding unit of 1 − q^n the coefficients coincide
                if q.powi(n as i32 + 1) > f64::EPSILON {
                    assert!(f.coeff(n).re > f.coeff(n + 1).re);
                } else {
                    assert!(f.coeff(n).re >= f.coeff(n + 1).re);
                }
                assert!(f.coeff(n + 1).re > 0.0);
            }
        }
    }

    #[test]
    fn g_coeffs_examples() {
        let pair = g_coeffs(&qa(0.5, 0.0), 6);
        assert_eq!(pair.c(0), 0.0);
        assert_eq!(pair.c(1), 1.0);
        assert!((pair.c(2) - 4.0 * 2f64.ln()).abs() < 1e-14);
        let near = g_coeffs(&qa(0.999, 0.0), 4);
        assert!((near.c(2) - 2.0).abs() < 1e-2);
        assert!(pair.g.coeffs()[1..]
            .iter()
            .all(|c| c.re > 0.0 && c.im == 0.0));
    }

    #[test]
    fn g_is_z_exp_f() {
        let params = qa(0.6, 0.3);
        let pair = g_coeffs(&params, 20);
        let z = Complex64::new(0.1, 0.05);
        let want = z * pair.f.eval(z).exp();
        assert!((pair.g.eval(z) - want).norm() < 1e-12);
        assert!((extremal_function(&params).eval(z).unwrap() - want).norm() < 1e-12);
    }

    #[test]
    fn lambert_form_matches_series() {
        let params = qa(0.4, 0.2);
        let f = f_coeffs(&params, 200);
        for k in 0..8 {
            let z = Complex64::from_polar(0.7, k as f64 * 0.8);
            assert!((f_eval(&params, z) - f.eval(z)).norm() < 1e-12);
        }
        assert_eq!(
            f_eval(&params, Complex64::new(0.0, 0.0)),
            Complex64::new(0.0, 0.0)
        );
    }

    #[test]
    fn extremal_quotient_closed_form() {
        // G(qz)/G(z) = q exp(2 ln(ratio) z/(1 − z))
        let params = qa(0.3, 0.25);
        let g = extremal_function(&params);
        for k in 0..6 {
            let z = Complex64::from_polar(0.9, k as f64);
            let want = params.q() * (2.0 * params.log_ratio() * z / (1.0 - z)).exp();
            assert!((g.q_quotient(z, params.q()).unwrap() - want).norm() < 1e-12);
        }
    }

    #[test]
    fn identity_is_member_for_every_parameter() {
        let grid = DiskGrid::uniform(8, 0.95, 64, 0).unwrap();
        for &(q, a) in &[(0.1, 0.0), (0.5, 0.5), (0.9, 0.9), (0.99, 0.3)] {
            let report = membership(&TruncatedSeries::identity(3), &qa(q, a), &grid).unwrap();
            assert!(report.member_on_grid);
            assert!((report.max_violation - (q * (1.0 - a) - (1.0 - a))).abs() < 1e-15);
        }
    }

    #[test]
    fn extremal_is_member_when_alpha_is_zero() {
        let grid = DiskGrid::uniform(32, 0.95, 720, 0).unwrap();
        for q in [0.3, 0.6, 0.9] {
            let report = membership(&extremal_function(&qa(q, 0.0)), &qa(q, 0.0), &grid).unwrap();
            assert!(report.member_on_grid, "q = {q}: {report:?}");
        }
    }

    #[test]
    fn extremal_quotient_leaves_the_disk_for_positive_alpha() {
        // G(qz)/G(z) = q exp(2Lz/(1 − z)), L = ln(ratio), fills the disk |w| < q/ratio = 1 − α + αq
        // centred at 0 rather than αq; it nears −(1 − α + αq) where 2Lz/(1 − z) = −L + iπ,
        // i.e. z = e^{iθ} with θ = 2 atan(L/π)
        let params = qa(0.6, 0.5);
        let g = extremal_function(&params);
        let theta = 2.0 * (params.log_ratio() / std::f64::consts::PI).atan();
        let z = Complex64::from_polar(1.0 - 1e-6, theta);
        let v = (g.q_quotient(z, params.q()).unwrap() - params.alpha() * params.q()).norm();
        let limit = 1.0 - params.alpha() + 2.0 * params.alpha() * params.q();
        assert!((v - limit).abs() < 1e-3);
        assert!(v > 1.0 - params.alpha());
    }

    #[test]
    fn nesting_spot_check() {
        // verified in the class for every p of a chain above q ⇒ verified at q
        let grid = DiskGrid::uniform(16, 0.95, 180, 0).unwrap();
        let chain = [0.3, 0.5, 0.7, 0.9];
        for alpha in [0.0, 0.5] {
            for (i, &p) in chain.iter().enumerate() {
                let f = extremal_function(&qa(p, alpha));
                let in_chain = chain[i..].iter().all(|&pp| {
                    membership(&f, &qa(pp, alpha), &grid)
                        .unwrap()
                        .member_on_grid
                });
                if in_chain {
                    for &q in &chain[..i] {
                        assert!(
                            membership(&f, &qa(q, alpha), &grid).unwrap().member_on_grid,
                            "p = {p}, q = {q}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn large_second_coefficient_is_witnessed() {
        let f = TruncatedSeries::from_real(&[0.0, 1.0, 5.0]);
        let report = membership(
            &f,
            &qa(0.5, 0.0),
            &DiskGrid::uniform(32, 0.95, 720, 0).unwrap(),
        )
        .unwrap();
        assert!(!report.member_on_grid);
        assert!(report.max_violation > 0.0);
    }

    #[test]
    fn zero_of_f_is_a_definite_witness() {
        // f = z(1 + 2z) vanishes at −1/2
        let f = TruncatedSeries::from_real(&[0.0, 1.0, 2.0]);
        let grid = DiskGrid::new(vec![0.25, 0.5], 8, 0).unwrap();
        let report = membership(&f, &qa(0.5, 0.0), &grid).unwrap();
        assert!(!report.member_on_grid);
        assert_eq!(report.max_violation, f64::INFINITY);
        assert!((report.witness + 0.5).norm() < 1e-12);
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["max_violation"], "inf");
    }

    #[test]
    fn membership_rejects_unnormalized_series() {
        let f = TruncatedSeries::from_real(&[0.0, 2.0]);
        let grid = DiskGrid::uniform(4, 0.5, 8, 0).unwrap();
        assert!(matches!(
            membership(&f, &qa(0.5, 0.0), &grid),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn report_json_shape() {
        let grid = DiskGrid::uniform(4, 0.5, 8, 0).unwrap();
        let report = membership(&TruncatedSeries::identity(2), &qa(0.5, 0.0), &grid).unwrap();
        let v = serde_json::to_value(&report).unwrap();
        for key in ["member_on_grid", "max_violation", "witness", "slack"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["witness"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn bieberbach_examples() {
        let params = qa(0.6, 0.25);
        let g = g_coeffs(&params, 24).g;
        let report = bieberbach_check(&g, &params, 24).unwrap();
        assert!(report.holds());
        assert!(report.is_extremal(1e-14));

        let rotated = rotate(&g, 1.1);
        let report = bieberbach_check(&rotated, &params, 24).unwrap();
        assert!(report.holds());
        assert!(report.is_extremal(1e-12));

        let report = bieberbach_check(&TruncatedSeries::identity(24), &params, 24).unwrap();
        assert!(report.holds());
        assert!(report.max_excess < 0.0);
    }

    #[test]
    fn bieberbach_lists_violations() {
        let params = qa(0.5, 0.0);
        let f = TruncatedSeries::from_real(&[0.0, 1.0, 5.0, 0.0]);
        let report = bieberbach_check(&f, &params, 3).unwrap();
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].n, 2);
        assert!((report.violations[0].bound - 4.0 * 2f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn koebe_coefficients_recurrence() {
        let k0 = koebe_coefficients(0.0, 6);
        assert_eq!(k0, vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let khalf = koebe_coefficients(0.5, 5);
        assert!(khalf[1..].iter().all(|&c| (c - 1.0).abs() < 1e-15));
    }

    #[test]
    fn koebe_limit() {
        assert!(koebe_limit_check(0.0, 10).unwrap() <= 2e-2);
        let pair = g_coeffs(&qa(KOEBE_LIMIT_Q, 0.5), 2);
        assert!((pair.c(2) - 1.0).abs() < 1e-2);
    }

    #[test]
    fn c_n_decreases_in_alpha() {
        for q in [0.3, 0.7] {
            let lo = g_coeffs(&qa(q, 0.1), 12);
            let hi = g_coeffs(&qa(q, 0.6), 12);
            for n in 2..=12 {
                assert!(hi.c(n) < lo.c(n));
            }
        }
    }
}
