//! `qstar`: command-line front end for the q-starlike toolkit.

use std::f64::consts::TAU;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use qstar::herglotz::{
    herglotz_p, member_from_measure, member_function, representation_rhs, CircleMeasure,
};
use qstar::order::{heine_order, heine_order_crosscheck, DiskGrid};
use qstar::products::{product_construct, rho_map};
use qstar::qcalc::{HeineParams, QAlpha};
use qstar::starlike::{extremal_function, f_eval, g_coeffs, membership, NormalizedFunction};
use qstar::{Complex64, TruncatedSeries};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(
    name = "qstar",
    version,
    about = "Extremal series, membership tests and orders of q-starlike functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format (defaults to csv for `figure`, json otherwise).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Coefficients of F_{q,α} and G_{q,α}.
    Coeffs {
        #[command(flatten)]
        params: QAlphaArgs,
        #[arg(long, default_value_t = 64)]
        order_n: usize,
    },
    /// Grid test of |f(qz)/f(z) − αq| ≤ 1 − α.
    Membership {
        #[command(flatten)]
        params: QAlphaArgs,
        #[command(flatten)]
        candidate: CandidateArgs,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Order of q-starlikeness of z·Φ[a,b;c;q,rz]: closed form, bounds and optional grid check.
    Order {
        #[command(flatten)]
        heine: HeineArgs,
        /// Also estimate the order on a disk grid and report the deviation.
        #[arg(long)]
        crosscheck: bool,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Series coefficients of Φ[a,b;c;q,z] and the contiguous-relation residual.
    Hypergeom {
        #[command(flatten)]
        heine: HeineArgs,
        #[arg(long, default_value_t = 32)]
        order_n: usize,
    },
    /// Series generated by a random circle measure.
    Herglotz {
        #[command(flatten)]
        params: QAlphaArgs,
        /// Number of atoms of the measure.
        #[arg(long, default_value_t = 5)]
        atoms: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 16)]
        order_n: usize,
    },
    /// Roundtrip f → ρ(f) → infinite product at sample points in |z| ≤ r_max.
    Product {
        #[command(flatten)]
        params: QAlphaArgs,
        #[command(flatten)]
        candidate: CandidateArgs,
        /// Truncation tolerance for the product.
        #[arg(long, default_value_t = 1e-15)]
        tol: f64,
        #[arg(long, default_value_t = 0.9)]
        r_max: f64,
    },
    /// Image of concentric circles under F_{q,α} or G_{q,α}.
    Figure {
        #[command(flatten)]
        params: QAlphaArgs,
        #[arg(long, value_enum, default_value_t = FigureFunction::F)]
        function: FigureFunction,
        #[arg(long, default_value_t = 0.95)]
        r_max: f64,
        #[arg(long, default_value_t = 24)]
        rings: usize,
        #[arg(long, default_value_t = 360)]
        angles: usize,
    },
    /// Runs the invariant suite and reports pass/fail counts.
    Selftest {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Exit nonzero when any check fails.
        #[arg(long)]
        strict: bool,
    },
}

#[derive(Args, Debug)]
struct QAlphaArgs {
    #[arg(long)]
    q: f64,
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
}

impl QAlphaArgs {
    fn params(&self) -> Result<QAlpha> {
        Ok(QAlpha::new(self.q, self.alpha)?)
    }
}

#[derive(Args, Debug)]
struct HeineArgs {
    #[arg(long)]
    a: f64,
    #[arg(long)]
    b: f64,
    #[arg(long)]
    c: f64,
    #[arg(long)]
    q: f64,
    #[arg(long, default_value_t = 1.0)]
    r: f64,
}

impl HeineArgs {
    fn params(&self) -> Result<HeineParams> {
        Ok(HeineParams::new(self.a, self.b, self.c, self.q, self.r)?)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Candidate {
    Identity,
    Extremal,
    Random,
}

#[derive(Args, Debug)]
struct CandidateArgs {
    #[arg(long, value_enum, default_value_t = Candidate::Extremal)]
    candidate: Candidate,
    /// Atoms of the random measure for `--candidate random`.
    #[arg(long, default_value_t = 5)]
    atoms: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

impl CandidateArgs {
    fn build(&self, params: &QAlpha) -> Result<Arc<dyn NormalizedFunction>> {
        Ok(match self.candidate {
            Candidate::Identity => Arc::new(TruncatedSeries::identity(1)),
            Candidate::Extremal => Arc::new(extremal_function(params)),
            Candidate::Random => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                Arc::new(member_function(
                    &CircleMeasure::random(self.atoms, &mut rng)?,
                    params,
                ))
            }
        })
    }
}

#[derive(Args, Debug)]
struct GridArgs {
    /// Largest sampled radius (defaults: 0.95 for membership, 0.85 when q > 0.9; 0.999999 for order).
    #[arg(long)]
    r_max: Option<f64>,
    #[arg(long)]
    rings: Option<usize>,
    #[arg(long)]
    angles: Option<usize>,
    #[arg(long)]
    refine: Option<usize>,
}

impl GridArgs {
    fn grid(&self, r_max: f64, rings: usize, angles: usize, refine: usize) -> Result<DiskGrid> {
        let r_max = self.r_max.unwrap_or(r_max);
        if !(r_max > 0.0 && r_max < 1.0) {
            bail!("--r-max must lie in (0, 1), got {r_max}");
        }
        let rings = self.rings.unwrap_or(rings);
        if rings == 0 {
            bail!("--rings must be positive");
        }
        Ok(DiskGrid::uniform(
            rings,
            r_max,
            self.angles.unwrap_or(angles),
            self.refine.unwrap_or(refine),
        )?)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FigureFunction {
    #[value(name = "F", alias = "f")]
    F,
    #[value(name = "G", alias = "g")]
    G,
}

/// A command result, renderable as JSON and, for tabular commands, as CSV.
struct Output {
    json: Value,
    csv: Option<String>,
    success: bool,
}

impl Output {
    fn json(json: Value) -> Self {
        Output {
            json,
            csv: None,
            success: true,
        }
    }
}

fn complex(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn coefficients(s: &TruncatedSeries) -> Value {
    Value::Array(s.coeffs().iter().map(|&c| complex(c)).collect())
}

fn sample_points(r_max: f64, count: usize) -> Vec<Complex64> {
    (0..count)
        .map(|k| Complex64::from_polar(r_max * ((k % 10) + 1) as f64 / 10.0, 0.37 * k as f64))
        .collect()
}

fn run(command: &Command) -> Result<Output> {
    match command {
        Command::Coeffs { params, order_n } => {
            let params = params.params()?;
            let pair = g_coeffs(&params, *order_n);
            let f: Vec<f64> = pair.f.coeffs().iter().map(|c| c.re).collect();
            let c: Vec<f64> = pair.g.coeffs().iter().map(|c| c.re).collect();
            let mut csv = String::from("n,f_n,c_n\n");
            for n in 0..=*order_n {
                csv += &format!("{n},{:e},{:e}\n", f[n], c[n]);
            }
            Ok(Output {
                json: json!({
                    "q": params.q(),
                    "alpha": params.alpha(),
                    "ratio": params.ratio(),
                    "order": order_n,
                    "f": f,
                    "c": c,
                }),
                csv: Some(csv),
                success: true,
            })
        }
        Command::Membership {
            params,
            candidate,
            grid,
        } => {
            let params = params.params()?;
            let default_r = if params.q() > 0.9 { 0.85 } else { 0.95 };
            let grid = grid.grid(default_r, 32, 720, 0)?;
            let f = candidate.build(&params)?;
            let report = membership(f.as_ref(), &params, &grid)?;
            let csv = format!(
                "member_on_grid,max_violation,re_witness,im_witness,slack\n{},{:e},{:e},{:e},{:e}\n",
                report.member_on_grid, report.max_violation, report.witness.re, report.witness.im, report.slack
            );
            Ok(Output {
                json: serde_json::to_value(&report)?,
                csv: Some(csv),
                success: true,
            })
        }
        Command::Order {
            heine,
            crosscheck,
            grid,
        } => {
            let p = heine.params()?;
            if *crosscheck {
                let grid = grid.grid(0.999_999, 48, 360, 3)?;
                Ok(Output::json(serde_json::to_value(heine_order_crosscheck(
                    &p, &grid,
                )?)?))
            } else {
                let result = heine_order(&p)?;
                let field = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
                let csv = format!(
                    "sigma_estimate,closed_form,lower_bound,upper_bound,s,rho\n{},{},{},{},{},{}\n",
                    result.sigma_estimate,
                    field(result.closed_form),
                    field(result.lower_bound),
                    field(result.upper_bound),
                    field(result.s),
                    field(result.rho)
                );
                Ok(Output {
                    json: serde_json::to_value(&result)?,
                    csv: Some(csv),
                    success: true,
                })
            }
        }
        Command::Hypergeom { heine, order_n } => {
            let p = heine.params()?;
            let phi = p.function()?;
            let admissible = match p.check_admissible() {
                Ok(()) => Value::Bool(true),
                Err(e) => Value::String(e.to_string()),
            };
            Ok(Output::json(json!({
                "a": p.a, "b": p.b, "c": p.c, "q": p.q,
                "coefficients": phi.series(*order_n).coeffs().iter().map(|c| c.re).collect::<Vec<_>>(),
                "contiguous_residual": phi.contiguous_residual(*order_n)?,
                "admissible": admissible,
            })))
        }
        Command::Herglotz {
            params,
            atoms,
            seed,
            order_n,
        } => {
            let params = params.params()?;
            let measure = CircleMeasure::random(*atoms, &mut ChaCha8Rng::seed_from_u64(*seed))?;
            Ok(Output::json(json!({
                "measure": measure,
                "p": coefficients(herglotz_p(&measure, *order_n).series()),
                "representation": coefficients(&representation_rhs(&measure, &params, *order_n)),
                "member": coefficients(&member_from_measure(&measure, &params, *order_n)),
            })))
        }
        Command::Product {
            params,
            candidate,
            tol,
            r_max,
        } => {
            let params = params.params()?;
            if !(*r_max > 0.0 && *r_max < 1.0) {
                bail!("--r-max must lie in (0, 1), got {r_max}");
            }
            let f = candidate.build(&params)?;
            let back = product_construct(rho_map(f.clone(), &params)?, &params, *tol)?;
            let mut max_error = 0.0f64;
            for z in sample_points(*r_max, 200) {
                let want = f.eval(z)?;
                max_error = max_error.max((back.eval(z)? - want).norm() / want.norm().max(1.0));
            }
            Ok(Output::json(
                json!({ "points": 200, "r_max": r_max, "max_relative_error": max_error }),
            ))
        }
        Command::Figure {
            params,
            function,
            r_max,
            rings,
            angles,
        } => {
            let params = params.params()?;
            if !(*r_max > 0.0 && *r_max < 1.0) || *rings == 0 || *angles == 0 {
                bail!("figure needs r_max in (0, 1) and positive rings and angles");
            }
            let g = extremal_function(&params);
            let mut csv = String::from("re_z,im_z,re_w,im_w\n");
            let mut rows = Vec::with_capacity(rings * angles);
            for i in 1..=*rings {
                let r = r_max * i as f64 / *rings as f64;
                for j in 0..*angles {
                    let z = Complex64::from_polar(r, TAU * j as f64 / *angles as f64);
                    let w = match function {
                        FigureFunction::F => f_eval(&params, z),
                        FigureFunction::G => g.eval(z)?,
                    };
                    csv += &format!("{:e},{:e},{:e},{:e}\n", z.re, z.im, w.re, w.im);
                    rows.push(json!([z.re, z.im, w.re, w.im]));
                }
            }
            Ok(Output {
                json: Value::Array(rows),
                csv: Some(csv),
                success: true,
            })
        }
        Command::Selftest { seed, strict } => {
            let report = qstar::selftest::run(*seed);
            let mut csv = String::from("name,passed,detail\n");
            for c in &report.checks {
                csv += &format!(
                    "\"{}\",{},\"{}\"\n",
                    c.name,
                    c.passed,
                    c.detail.replace('"', "'")
                );
            }
            Ok(Output {
                success: !strict || report.all_passed(),
                json: serde_json::to_value(&report)?,
                csv: Some(csv),
            })
        }
    }
}

fn emit(cli: &Cli, output: &Output) -> Result<()> {
    let default = match cli.command {
        Command::Figure { .. } => Format::Csv,
        _ => Format::Json,
    };
    let text = match cli.format.unwrap_or(default) {
        Format::Json => serde_json::to_string_pretty(&output.json)? + "\n",
        Format::Csv => match &output.csv {
            Some(csv) => csv.clone(),
            None => bail!("csv output is not available for this command"),
        },
    };
    match &cli.out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command).and_then(|out| emit(&cli, &out).map(|()| out.success)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
