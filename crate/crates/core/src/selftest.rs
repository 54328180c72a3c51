//! A quick run of the library's invariants, reported check by check.
//!
//! Checks are numerical and honest: a check whose underlying claim does not
//! hold numerically reports a failure with the measured numbers.

use std::sync::Arc;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::herglotz::{
    herglotz_p, member_from_measure, member_function, representation_rhs, CircleMeasure,
};
use crate::order::{heine_order_crosscheck, order_expression, order_expression_infimum, DiskGrid};
use crate::products::{product_construct, rho_map};
use crate::qcalc::{q_diff, BasicHypergeometric, HeineParams, QAlpha};
use crate::series::TruncatedSeries;
use crate::starlike::{
    bieberbach_check, extremal_function, f_coeffs, g_coeffs, koebe_limit_check, membership, rotate,
    NormalizedFunction,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<CheckOutcome>,
}

impl SelftestReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

type Check = fn(u64) -> Result<(bool, String)>;

const CHECKS: &[(&str, Check)] = &[
    ("series exp/log roundtrip", series_roundtrip),
    ("F coefficients at alpha = 0", f_classical),
    ("F coefficients positive and decreasing", f_monotone),
    ("Koebe limit at q = 0.999", koebe_limit),
    ("G membership, alpha = 0", g_membership_alpha_zero),
    ("G membership, alpha > 0", g_membership_alpha_positive),
    (
        "coefficient bound for measure-generated members",
        bieberbach_random,
    ),
    ("coefficient equality for rotations", bieberbach_rotation),
    ("representation of zG'/G", herglotz_rhs),
    ("Caratheodory coefficients bounded by 2", herglotz_bound),
    ("product/rho roundtrip", roundtrip),
    ("Heine contiguous relation", contiguous),
    (
        "shifted Heine order: scan vs closed form",
        heine_order_agreement,
    ),
    ("shifted Heine order: bounds", heine_order_bounds),
    ("order expression on the real axis", expression_identity),
    ("order expression infimum for G", expression_infimum),
    ("q-Leibniz rule", q_leibniz),
    ("q-binomial theorem", q_binomial),
];

/// Runs every check; `seed` drives the random measures and parameters.
pub fn run(seed: u64) -> SelftestReport {
    let checks: Vec<CheckOutcome> = CHECKS
        .iter()
        .map(|&(name, check)| {
            let (passed, detail) = check(seed).unwrap_or_else(|e| (false, format!("error: {e}")));
            CheckOutcome {
                name: name.to_string(),
                passed,
                detail,
            }
        })
        .collect();
    let passed = checks.iter().filter(|c| c.passed).count();
    SelftestReport {
        passed,
        failed: checks.len() - passed,
        checks,
    }
}

fn qa(q: f64, alpha: f64) -> Result<QAlpha> {
    QAlpha::new(q, alpha)
}

fn verdict(worst: f64, tol: f64) -> (bool, String) {
    (
        worst <= tol,
        format!("worst {worst:.3e}, tolerance {tol:.0e}"),
    )
}

fn series_roundtrip(seed: u64) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let coeffs: Vec<Complex64> = (0..=64)
            .map(|n| {
                if n == 0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    use rand::Rng;
                    Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5))
                }
            })
            .collect();
        let f = TruncatedSeries::new(coeffs);
        worst = worst.max(f.exp()?.log()?.max_abs_diff(&f));
    }
    Ok(verdict(worst, 1e-10))
}

fn f_classical(_: u64) -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for q in [0.1, 0.5, 0.9] {
        let f = f_coeffs(&qa(q, 0.0)?, 64);
        for n in 1..=64 {
            let want = -2.0 * q.ln() / (1.0 - q.powi(n as i32));
            worst = worst.max((f.coeff(n).re - want).abs() / want);
        }
    }
    Ok(verdict(worst, 1e-14))
}

fn f_monotone(_: u64) -> Result<(bool, String)> {
    let mut ok = true;
    for q in [0.1, 0.5, 0.9] {
        for a in [0.0, 0.5, 0.9] {
            let f = f_coeffs(&qa(q, a)?, 64);
            ok &= (1..64).all(|n| {
                let strict = q.powi(n as i32 + 1) > f64::EPSILON;
                let (x, y) = (f.coeff(n).re, f.coeff(n + 1).re);
                (x > y || (!strict && x == y)) && y > 0.0
            });
        }
    }
    Ok((
        ok,
        "q in {0.1, 0.5, 0.9}, alpha in {0, 0.5, 0.9}, n <= 64".into(),
    ))
}

fn koebe_limit(_: u64) -> Result<(bool, String)> {
    let worst = koebe_limit_check(0.0, 10)?.max(koebe_limit_check(0.5, 10)?);
    Ok(verdict(worst, 2e-2))
}

fn g_membership(alphas: &[f64]) -> Result<(bool, String)> {
    let mut worst = (f64::NEG_INFINITY, 0.0, 0.0);
    for q in [0.3, 0.6, 0.9] {
        for &a in alphas {
            let params = qa(q, a)?;
            let report = membership(
                &extremal_function(&params),
                &params,
                &DiskGrid::uniform(32, 0.95, 720, 0)?,
            )?;
            if report.max_violation > worst.0 {
                worst = (report.max_violation, q, a);
            }
        }
    }
    let (v, q, a) = worst;
    Ok((
        v <= 1e-7,
        format!("largest violation {v:.3e} at q = {q}, alpha = {a}"),
    ))
}

fn g_membership_alpha_zero(_: u64) -> Result<(bool, String)> {
    g_membership(&[0.0])
}

fn g_membership_alpha_positive(_: u64) -> Result<(bool, String)> {
    g_membership(&[0.25, 0.5, 0.75])
}

fn bieberbach_random(seed: u64) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0;
    for q in [0.3, 0.6, 0.9] {
        for a in [0.0, 0.25, 0.5, 0.75] {
            let params = qa(q, a)?;
            for _ in 0..5 {
                let f = member_from_measure(&CircleMeasure::random(5, &mut rng)?, &params, 32);
                violations += bieberbach_check(&f, &params, 32)?.violations.len();
            }
        }
    }
    Ok((
        violations == 0,
        format!("{violations} coefficient violations"),
    ))
}

fn bieberbach_rotation(_: u64) -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for q in [0.3, 0.6, 0.9] {
        for a in [0.0, 0.5] {
            let params = qa(q, a)?;
            let g = g_coeffs(&params, 32).g;
            let report = bieberbach_check(&rotate(&g, 0.9), &params, 32)?;
            worst = worst.max(report.max_relative_gap);
        }
    }
    Ok(verdict(worst, 1e-10))
}

fn herglotz_rhs(_: u64) -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for (q, a) in [(0.3, 0.0), (0.5, 0.5), (0.9, 0.25)] {
        let params = qa(q, a)?;
        let g = g_coeffs(&params, 33).g;
        let rhs = representation_rhs(&CircleMeasure::unit_mass(0.0), &params, 32);
        let lhs = g.derivative().truncate(32);
        let got = rhs.mul(&g.shift_down().truncate(32));
        let scale = lhs.coeffs().iter().map(|c| c.norm()).fold(1.0, f64::max);
        worst = worst.max(got.max_abs_diff(&lhs) / scale);
    }
    Ok(verdict(worst, 1e-10))
}

fn herglotz_bound(seed: u64) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for k in 1..=8 {
        let p = herglotz_p(&CircleMeasure::random(k, &mut rng)?, 64);
        worst = worst.max(
            p.series().coeffs()[1..]
                .iter()
                .map(|c| c.norm())
                .fold(0.0, f64::max),
        );
    }
    Ok((worst <= 2.0 + 1e-12, format!("largest |p_n| = {worst:.6}")))
}

fn roundtrip(seed: u64) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for a in [0.0, 0.5] {
        let params = qa(0.5, a)?;
        let corpus: Vec<Arc<dyn NormalizedFunction>> = vec![
            Arc::new(TruncatedSeries::identity(1)),
            Arc::new(extremal_function(&params)),
            Arc::new(member_function(
                &CircleMeasure::random(5, &mut rng)?,
                &params,
            )),
        ];
        for f in corpus {
            let back = product_construct(rho_map(f.clone(), &params)?, &params, 1e-15)?;
            for k in 0..50 {
                let z = Complex64::from_polar(0.9 * (k % 5 + 1) as f64 / 5.0, 0.7 * k as f64);
                let want = f.eval(z)?;
                worst = worst.max((back.eval(z)? - want).norm() / want.norm().max(1.0));
            }
        }
    }
    Ok(verdict(worst, 1e-8))
}

fn contiguous(_: u64) -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for (a, b, c, q) in [
        (0.5, 0.5, 0.25, 0.5),
        (0.9, 0.3, 0.05, 0.2),
        (0.2, 0.7, 0.4, 0.8),
    ] {
        worst = worst.max(BasicHypergeometric::new(a, b, c, q)?.contiguous_residual(32)?);
    }
    Ok(verdict(worst, 1e-10))
}

const HEINE_CASES: [(f64, f64, f64, f64, f64); 2] =
    [(0.5, 0.5, 0.25, 0.5, 0.5), (1.5, 0.5, 0.25, 0.5, 0.5)];

fn heine_order_agreement(_: u64) -> Result<(bool, String)> {
    let grid = DiskGrid::uniform(40, 1.0 - 1e-9, 180, 3)?;
    let mut worst = 0.0f64;
    for (a, b, c, q, r) in HEINE_CASES {
        let report = heine_order_crosscheck(&HeineParams::new(a, b, c, q, r)?, &grid)?;
        worst = worst.max(report.deviation);
    }
    Ok(verdict(worst, 1e-3))
}

fn heine_order_bounds(_: u64) -> Result<(bool, String)> {
    let mut details = Vec::new();
    let mut ok = true;
    for (a, b, c, q, r) in HEINE_CASES {
        let res = crate::order::heine_order(&HeineParams::new(a, b, c, q, r)?)?;
        let holds = res.sandwich_holds().unwrap_or(false);
        ok &= holds;
        details.push(format!(
            "a = {a}: {:.5} in [{:.5}, {:.5}]: {holds}",
            res.closed_form.unwrap_or(f64::NAN),
            res.lower_bound.unwrap_or(f64::NAN),
            res.upper_bound.unwrap_or(f64::NAN)
        ));
    }
    Ok((ok, details.join("; ")))
}

fn expression_identity(_: u64) -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for q in [0.2, 0.5, 0.8] {
        for k in 0..100 {
            let t = 0.99 * k as f64 / 99.0;
            worst = worst.max((order_expression(Complex64::new(t, 0.0), q)? - t).abs());
        }
    }
    Ok(verdict(worst, 1e-12))
}

fn expression_infimum(_: u64) -> Result<(bool, String)> {
    let grid = DiskGrid::uniform(32, 0.95, 360, 2)?;
    let mut worst = (0.0f64, 0.0, 0.0);
    for q in [0.5, 0.8] {
        for a in [0.25, 0.5] {
            let params = qa(q, a)?;
            let (inf, _) = order_expression_infimum(&extremal_function(&params), q, &grid)?;
            if (inf - a).abs() > worst.0.abs() {
                worst = (inf - a, q, a);
            }
        }
    }
    let (d, q, a) = worst;
    Ok((
        d.abs() <= 2e-2,
        format!(
            "largest |inf - alpha| = {:.3e} at q = {q}, alpha = {a}",
            d.abs()
        ),
    ))
}

fn q_leibniz(seed: u64) -> Result<(bool, String)> {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let q = rng.gen_range(0.05..0.95);
        let mut poly = || {
            TruncatedSeries::new(
                (0..=8)
                    .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect(),
            )
        };
        let (f, g) = (poly(), poly());
        let f16 = f.truncate(16);
        let g16 = g.truncate(16);
        // D_q(fg) = D_q f · g(qz) + f · D_q g
        let lhs = q_diff(&f16.mul(&g16), q)?;
        let rhs = q_diff(&f16, q)?
            .mul(&g16.scale_argument(Complex64::new(q, 0.0)).truncate(15))
            .add(&f16.truncate(15).mul(&q_diff(&g16, q)?));
        worst = worst.max(lhs.max_abs_diff(&rhs));
    }
    Ok(verdict(worst, 1e-12))
}

fn q_binomial(_: u64) -> Result<(bool, String)> {
    use crate::qcalc::q_pochhammer_inf;
    let mut worst = 0.0f64;
    for (a, b, q) in [(0.3, 0.5, 0.5), (0.8, 0.2, 0.3), (0.5, 0.9, 0.7)] {
        let phi = BasicHypergeometric::new(a, b, b, q)?;
        for k in 0..12 {
            let z = Complex64::from_polar(0.5, 0.5 * k as f64);
            let want = q_pochhammer_inf(z * a, q) / q_pochhammer_inf(z, q);
            worst = worst.max((phi.eval(z, 1e-17)? - want).norm());
        }
    }
    Ok(verdict(worst, 1e-9))
}
