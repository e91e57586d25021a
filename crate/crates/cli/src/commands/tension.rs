use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use nitsche_core::fd::FdOptions;
use nitsche_core::tension::{component_laplacians, tension_sample, TensionForm, TensionOptions};

use crate::args::{FormChoice, GlobalOpts, TensionArgs};
use crate::error::{CliError, Result};
use crate::report::RunReport;
use crate::selector::MapChoice;

/// Sample colatitudes stay this far from the poles of the spherical chart.
const POLE_MARGIN: f64 = 0.3;

#[derive(Serialize)]
struct HyperbolicCase {
    index: usize,
    point: [f64; 3],
    tau1: f64,
    tau_s: Vec<f64>,
    hyplap: f64,
    fd_step: f64,
    max_abs: f64,
}

#[derive(Serialize)]
struct EuclideanCase {
    index: usize,
    point: [f64; 3],
    laplacians: Vec<f64>,
    max_abs: f64,
}

/// Points with `|x|` uniform in `[lo, hi]`, colatitude bounded away from the
/// poles and uniform longitude.
pub fn sample_points(seed: u64, count: usize, lo: f64, hi: f64) -> Vec<[f64; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let zmax = POLE_MARGIN.cos();
    (0..count)
        .map(|_| {
            let rho = rng.random_range(lo..=hi);
            let z: f64 = rng.random_range(-zmax..=zmax);
            let phi = rng.random_range(0.0..std::f64::consts::TAU);
            let s = (1.0 - z * z).sqrt();
            [rho * s * phi.cos(), rho * s * phi.sin(), rho * z]
        })
        .collect()
}

pub fn run(global: &GlobalOpts, args: &TensionArgs) -> Result<RunReport> {
    let mut report = RunReport::new("tension", global, args)?;
    let choice = MapChoice::parse(&args.map)?;
    let u = choice.build()?;
    let (dlo, dhi) = choice.default_shell(u.as_ref());
    let (lo, hi) = (args.rho_min.unwrap_or(dlo), args.rho_max.unwrap_or(dhi));
    if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
        return Err(CliError::usage(format!("bad sampling shell [{lo}, {hi}]")));
    }
    if !(args.step > 0.0) {
        return Err(CliError::usage("--step must be positive"));
    }
    let opts = TensionOptions {
        fd: FdOptions::with_step(args.step),
        form: match args.form {
            FormChoice::Consistent => TensionForm::Consistent,
            FormChoice::Literal => TensionForm::Literal,
        },
    };
    let mut worst: f64 = 0.0;
    for (index, x) in sample_points(global.seed, args.samples, lo, hi).into_iter().enumerate() {
        let max_abs = if args.euclidean {
            let laplacians = component_laplacians(u.as_ref(), &x, &opts.fd)?;
            let max_abs = laplacians.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            report.push(&EuclideanCase {
                index,
                point: x,
                laplacians,
                max_abs,
            })?;
            max_abs
        } else {
            let s = tension_sample(u.as_ref(), &x, &opts)?;
            let max_abs = s.tau_s.iter().fold(s.tau1.abs().max(s.hyplap.abs()), |m, v| m.max(v.abs()));
            report.push(&HyperbolicCase {
                index,
                point: x,
                tau1: s.tau1,
                tau_s: s.tau_s,
                hyplap: s.hyplap,
                fd_step: s.fd_step,
                max_abs,
            })?;
            max_abs
        };
        worst = worst.max(max_abs);
        if !(max_abs < args.threshold) {
            report.aggregate.violations += 1;
        }
    }
    report.aggregate.max_residual = Some(worst);
    Ok(report)
}
