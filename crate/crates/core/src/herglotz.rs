//! Finitely supported probability measures on the unit circle and the
//! functions they generate.
//!
//! A measure `μ = Σ_k w_k δ_{σ_k}` gives the Carathéodory function
//! `p(z) = Σ_k w_k (1 + σ_k z)/(1 − σ_k z)` and, through the
//! log-coefficients `φ_n = p_n ln(ratio)/(q^n − 1)`, the function
//! `f = z exp(φ)`, which has `1 + z φ'(z)` as its logarithmic derivative.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcalc::QAlpha;
use crate::series::TruncatedSeries;
use crate::starlike::{f_coeffs, ExponentialMember};

/// Tolerance on `Σ w_k = 1`.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

/// A point mass `weight · δ_σ` at `σ = e^{i·angle}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub angle: f64,
    pub weight: f64,
}

impl Atom {
    pub fn sigma(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.angle)
    }
}

/// A probability measure with finitely many atoms on the unit circle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMeasure")]
pub struct CircleMeasure {
    atoms: Vec<Atom>,
}

#[derive(Deserialize)]
struct RawMeasure {
    atoms: Vec<Atom>,
}

impl TryFrom<RawMeasure> for CircleMeasure {
    type Error = Error;
    fn try_from(raw: RawMeasure) -> Result<Self> {
        CircleMeasure::new(raw.atoms)
    }
}

impl CircleMeasure {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidMeasure("no atoms".into()));
        }
        for a in &atoms {
            if !a.angle.is_finite() {
                return Err(Error::InvalidMeasure(format!(
                    "angle {} is not finite",
                    a.angle
                )));
            }
            if !(a.weight >= 0.0 && a.weight.is_finite()) {
                return Err(Error::InvalidMeasure(format!(
                    "weight {} is negative",
                    a.weight
                )));
            }
        }
        let total: f64 = atoms.iter().map(|a| a.weight).sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidMeasure(format!(
                "weights sum to {total}, not 1"
            )));
        }
        Ok(CircleMeasure { atoms })
    }

    pub fn unit_mass(angle: f64) -> Self {
        CircleMeasure {
            atoms: vec![Atom { angle, weight: 1.0 }],
        }
    }

    /// `k` atoms with uniform angles and normalized uniform weights.
    pub fn random<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidMeasure("no atoms".into()));
        }
        let raw: Vec<(f64, f64)> = (0..k)
            .map(|_| (rng.gen_range(0.0..TAU), rng.gen_range(0.05..1.0)))
            .collect();
        let total: f64 = raw.iter().map(|r| r.1).sum();
        Self::new(
            raw.into_iter()
                .map(|(angle, w)| Atom {
                    angle,
                    weight: w / total,
                })
                .collect(),
        )
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// The `n`-th moment `Σ_k w_k σ_k^n`.
    pub fn moment(&self, n: usize) -> Complex64 {
        self.atoms
            .iter()
            .map(|a| Complex64::from_polar(a.weight, a.angle * n as f64))
            .sum()
    }
}

/// A series with constant term exactly one, meant to have non-negative real
/// part on the disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PFunction {
    series: TruncatedSeries,
}

impl PFunction {
    pub fn new(series: TruncatedSeries) -> Result<Self> {
        let c0 = series.coeff(0);
        if c0 != Complex64::new(1.0, 0.0) {
            return Err(Error::ConstantTermNotOne(c0));
        }
        Ok(PFunction { series })
    }

    pub fn series(&self) -> &TruncatedSeries {
        &self.series
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.series.eval(z)
    }

    /// Smallest real part over the given sample points.
    pub fn min_real_part(&self, points: impl IntoIterator<Item = Complex64>) -> f64 {
        points
            .into_iter()
            .map(|z| self.eval(z).re)
            .fold(f64::INFINITY, f64::min)
    }
}

/// `p(z) = ∫ (1 + σz)/(1 − σz) dμ(σ)`: coefficient `n ≥ 1` is `2 Σ_k w_k σ_k^n`.
pub fn herglotz_p(measure: &CircleMeasure, order: usize) -> PFunction {
    let coeffs = (0..=order)
        .map(|n| {
            if n == 0 {
                Complex64::new(1.0, 0.0)
            } else {
                2.0 * measure.moment(n)
            }
        })
        .collect();
    PFunction {
        series: TruncatedSeries::new(coeffs),
    }
}

/// `1 + ∫ σz F'_{q,α}(σz) dμ(σ)`: coefficient `n ≥ 1` is `n F_n Σ_k w_k σ_k^n`.
pub fn representation_rhs(
    measure: &CircleMeasure,
    params: &QAlpha,
    order: usize,
) -> TruncatedSeries {
    let f = f_coeffs(params, order);
    let coeffs = (0..=order)
        .map(|n| {
            if n == 0 {
                Complex64::new(1.0, 0.0)
            } else {
                f.coeff(n) * n as f64 * measure.moment(n)
            }
        })
        .collect();
    TruncatedSeries::new(coeffs)
}

/// Log-coefficients `φ_n = p_n ln(ratio)/(q^n − 1)` of the member generated by `measure`.
pub fn member_log_coeffs(
    measure: &CircleMeasure,
    params: &QAlpha,
    order: usize,
) -> TruncatedSeries {
    let p = herglotz_p(measure, order);
    let l = params.log_ratio();
    let q = params.q();
    let coeffs = (0..=order)
        .map(|n| {
            if n == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                p.series.coeff(n) * l / (q.powi(n as i32) - 1.0)
            }
        })
        .collect();
    TruncatedSeries::new(coeffs)
}

/// The series of `f = z exp(φ)` up to `z^order`.
pub fn member_from_measure(
    measure: &CircleMeasure,
    params: &QAlpha,
    order: usize,
) -> TruncatedSeries {
    if order == 0 {
        return TruncatedSeries::zero(0);
    }
    member_log_coeffs(measure, params, order - 1)
        .exp()
        .expect("φ has a vanishing constant term")
        .shift_up()
}

/// The same function as [`member_from_measure`], evaluated in closed form
/// (`φ(z) = Σ_k w_k F_{q,α}(σ_k z)`) so it stays accurate near the boundary.
pub fn member_function(measure: &CircleMeasure, params: &QAlpha) -> ExponentialMember {
    ExponentialMember::new(
        *params,
        measure
            .atoms
            .iter()
            .map(|a| (a.sigma(), a.weight))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::starlike::{bieberbach_check, g_coeffs, rotate, NormalizedFunction};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn qa(q: f64, a: f64) -> QAlpha {
        QAlpha::new(q, a).unwrap()
    }

    #[test]
    fn measure_validation() {
        assert!(CircleMeasure::new(vec![]).is_err());
        assert!(CircleMeasure::new(vec![Atom {
            angle: 0.0,
            weight: 0.5
        }])
        .is_err());
        assert!(CircleMeasure::new(vec![
            Atom {
                angle: 0.0,
                weight: 1.5
            },
            Atom {
                angle: 1.0,
                weight: -0.5
            }
        ])
        .is_err());
        let m: CircleMeasure = serde_json::from_str(
            r#"{"atoms":[{"angle":0.0,"weight":0.25},{"angle":3.0,"weight":0.75}]}"#,
        )
        .unwrap();
        assert_eq!(m.atoms().len(), 2);
        assert!(
            serde_json::from_str::<CircleMeasure>(r#"{"atoms":[{"angle":0.0,"weight":0.2}]}"#)
                .is_err()
        );
    }

    #[test]
    fn random_measure_is_reproducible() {
        let a = CircleMeasure::random(5, &mut ChaCha8Rng::seed_from_u64(42)).unwrap();
        let b = CircleMeasure::random(5, &mut ChaCha8Rng::seed_from_u64(42)).unwrap();
        assert_eq!(a, b);
        let total: f64 = a.atoms().iter().map(|x| x.weight).sum();
        assert!((total - 1.0).abs() <= WEIGHT_SUM_TOL);
    }

    #[test]
    fn unit_mass_kernel() {
        let p = herglotz_p(&CircleMeasure::unit_mass(0.0), 6);
        let want = [1.0, 2.0, 2.0, 2.0, 2.0, 2.0, 2.0];
        for (n, w) in want.iter().enumerate() {
            assert!((p.series().coeff(n) - w).norm() < 1e-15);
        }
    }

    #[test]
    fn antipodal_masses_kill_odd_coefficients() {
        let m = CircleMeasure::new(vec![
            Atom {
                angle: 0.0,
                weight: 0.5,
            },
            Atom {
                angle: std::f64::consts::PI,
                weight: 0.5,
            },
        ])
        .unwrap();
        let p = herglotz_p(&m, 9);
        for n in 1..=9 {
            let want = if n % 2 == 0 { 2.0 } else { 0.0 };
            assert!((p.series().coeff(n) - want).norm() < 1e-14);
        }
    }

    #[test]
    fn unit_mass_rhs_is_log_derivative_of_g() {
        let params = qa(0.5, 0.25);
        let n = 24;
        let g = g_coeffs(&params, n + 1).g;
        // z G'/G = rhs  ⇔  G' = rhs · (G/z)
        let zg = g.derivative().truncate(n);
        let g_over_z = g.shift_down().truncate(n);
        let rhs = representation_rhs(&CircleMeasure::unit_mass(0.0), &params, n);
        let check = rhs.mul(&g_over_z);
        assert!(
            check.max_abs_diff(&zg)
                < 1e-9 * zg.coeffs().iter().map(|c| c.norm()).fold(1.0, f64::max)
        );
    }

    #[test]
    fn unit_mass_member_is_g() {
        let params = qa(0.6, 0.5);
        let f = member_from_measure(&CircleMeasure::unit_mass(0.0), &params, 20);
        assert!(f.max_abs_diff(&g_coeffs(&params, 20).g) < 1e-12);
    }

    #[test]
    fn single_atom_member_is_rotation() {
        let params = qa(0.3, 0.25);
        let theta = 1.1;
        let f = member_from_measure(&CircleMeasure::unit_mass(theta), &params, 20);
        let want = rotate(&g_coeffs(&params, 20).g, theta);
        for n in 0..=20 {
            assert!((f.coeff(n) - want.coeff(n)).norm() <= 1e-12 * want.coeff(n).norm().max(1.0));
        }
    }

    #[test]
    fn closed_form_member_matches_series() {
        let params = qa(0.5, 0.25);
        let m = CircleMeasure::random(5, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let series = member_from_measure(&m, &params, 80);
        let closed = member_function(&m, &params);
        for k in 0..10 {
            let z = Complex64::from_polar(0.3, k as f64);
            assert!((closed.eval(z).unwrap() - series.eval(z)).norm() < 1e-12);
        }
    }

    #[test]
    fn p_has_nonnegative_real_part() {
        let m = CircleMeasure::random(7, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let p = herglotz_p(&m, 400);
        let pts = (0..64).map(|k| Complex64::from_polar(0.9, TAU * k as f64 / 64.0));
        assert!(p.min_real_part(pts) >= -1e-9);
    }

    proptest! {
        #[test]
        fn p_coefficients_bounded(seed in 0u64..1000, k in 1usize..8) {
            let m = CircleMeasure::random(k, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            let p = herglotz_p(&m, 32);
            for n in 1..=32 {
                prop_assert!(p.series().coeff(n).norm() <= 2.0 + 1e-12);
            }
        }

        #[test]
        fn log_coefficients_bounded_by_f(seed in 0u64..1000, q in 0.05f64..0.95, a in 0.0f64..0.95) {
            let params = qa(q, a);
            let m = CircleMeasure::random(5, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            let phi = member_log_coeffs(&m, &params, 32);
            let f = f_coeffs(&params, 32);
            for n in 1..=32 {
                prop_assert!(phi.coeff(n).norm() <= f.coeff(n).re * (1.0 + 1e-12));
            }
            let member = member_from_measure(&m, &params, 32);
            prop_assert!(bieberbach_check(&member, &params, 32).unwrap().holds());
        }

        #[test]
        fn rhs_bounded_by_n_f_n(seed in 0u64..1000, q in 0.05f64..0.95, a in 0.0f64..0.95) {
            let params = qa(q, a);
            let m = CircleMeasure::random(4, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            let rhs = representation_rhs(&m, &params, 32);
            let f = f_coeffs(&params, 32);
            for n in 1..=32 {
                prop_assert!(rhs.coeff(n).norm() <= n as f64 * f.coeff(n).re * (1.0 + 1e-12));
            }
        }

        #[test]
        fn single_atom_rhs_is_rotated_unit_mass(theta in 0.0f64..TAU, q in 0.05f64..0.95) {
            let params = qa(q, 0.3);
            let base = representation_rhs(&CircleMeasure::unit_mass(0.0), &params, 24);
            let rotated = representation_rhs(&CircleMeasure::unit_mass(theta), &params, 24);
            let want = base.scale_argument(Complex64::from_polar(1.0, theta));
            prop_assert!(rotated.max_abs_diff(&want) <= 1e-10 * 24.0 * f_coeffs(&params, 1).coeff(1).re);
        }
    }
}
