use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use nitsche_core::bounds::{beprim_min_ratio, pola_check};
use nitsche_core::geometry::hyperbolic_radius;
use nitsche_core::radial::{integrate_ivp_with, solve_radial_bvp_with, ShootingOptions};
use nitsche_core::Error;

use crate::args::{GlobalOpts, SweepArgs};
use crate::commands::radial::shooting_options;
use crate::error::{CliError, Result};
use crate::report::RunReport;

/// Random targets are drawn from `beta'_min + (0.05, 3]`.
const TARGET_SPAN: (f64, f64) = (0.05, 3.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
enum Status {
    Proper,
    Improper,
    Unconverged,
    NoSolution,
    Divergence,
}

#[derive(Debug, Clone, Serialize)]
struct Check {
    lhs: f64,
    rhs: f64,
    margin: f64,
    feasible: bool,
    marginal: bool,
}

#[derive(Debug, Clone, Serialize)]
struct SweepCase {
    index: usize,
    /// `minimal` is the zero-slope solution; `target` a shot at a random outer radius.
    kind: &'static str,
    a: f64,
    b: f64,
    alpha_h: f64,
    target_beta_h: Option<f64>,
    status: Status,
    beta_h: Option<f64>,
    initial_slope: Option<f64>,
    residual: Option<f64>,
    iterations: Option<usize>,
    ratio: Option<f64>,
    min_ratio_bound: f64,
    check: Option<Check>,
    violation: bool,
}

#[derive(Debug, Clone, Copy)]
struct GridPoint {
    index: usize,
    a: f64,
    b: f64,
    alpha_h: f64,
}

fn grid(args: &SweepArgs) -> Result<Vec<GridPoint>> {
    let (aa, bb, cc) = (args.a_range.points(), args.b_range.points(), args.alpha_h_range.points());
    if aa.iter().chain(&bb).any(|&r| !(r > 0.0 && r < 1.0)) {
        return Err(CliError::usage("a and b ranges must lie in (0, 1)"));
    }
    if cc.iter().any(|&r| !(r > 0.0 && r.is_finite())) {
        return Err(CliError::usage("alphaH range must be positive"));
    }
    let mut out = Vec::new();
    for &a in &aa {
        for &b in &bb {
            if a >= b {
                continue;
            }
            for &alpha_h in &cc {
                out.push(GridPoint {
                    index: out.len(),
                    a,
                    b,
                    alpha_h,
                });
            }
        }
    }
    Ok(out)
}

fn checked(mut case: SweepCase, beta_h: f64) -> Result<SweepCase> {
    let r = pola_check(case.a, case.b, case.alpha_h, beta_h)?;
    case.violation = !r.feasible;
    case.check = Some(Check {
        lhs: r.lhs,
        rhs: r.rhs,
        margin: r.margin,
        feasible: r.feasible,
        marginal: r.marginal,
    });
    Ok(case)
}

fn run_point(p: GridPoint, args: &SweepArgs, seed: u64, opts: &ShootingOptions) -> Result<Vec<SweepCase>> {
    let (a_h, b_h) = (hyperbolic_radius(p.a), hyperbolic_radius(p.b));
    let bound = beprim_min_ratio(a_h, b_h, p.alpha_h)?;
    let blank = SweepCase {
        index: p.index,
        kind: "minimal",
        a: p.a,
        b: p.b,
        alpha_h: p.alpha_h,
        target_beta_h: None,
        status: Status::NoSolution,
        beta_h: None,
        initial_slope: None,
        residual: None,
        iterations: None,
        ratio: None,
        min_ratio_bound: bound,
        check: None,
        violation: false,
    };
    let mut out = Vec::with_capacity(args.targets + 1);

    let minimal = match integrate_ivp_with(p.a.ln(), p.alpha_h, 0.0, p.b.ln(), args.n, &opts.ivp) {
        Ok(profile) => {
            let end = profile.y[profile.len() - 1];
            let case = SweepCase {
                status: if profile.is_proper_candidate() { Status::Proper } else { Status::Improper },
                beta_h: Some(end),
                initial_slope: Some(0.0),
                residual: Some(0.0),
                iterations: Some(1),
                ratio: Some(end / p.alpha_h),
                ..blank.clone()
            };
            let case = if case.status == Status::Proper { checked(case, end)? } else { case };
            out.push(case);
            Some(end)
        }
        Err(Error::Divergence { .. }) => {
            out.push(SweepCase {
                status: Status::Divergence,
                ..blank.clone()
            });
            None
        }
        Err(e) => return Err(e.into()),
    };
    let Some(beta_min) = minimal else {
        return Ok(out);
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(p.index as u64);
    for _ in 0..args.targets {
        let target = beta_min + rng.random_range(TARGET_SPAN.0..=TARGET_SPAN.1);
        let base = SweepCase {
            kind: "target",
            target_beta_h: Some(target),
            ..blank.clone()
        };
        let case = match solve_radial_bvp_with(a_h, b_h, p.alpha_h, target, args.n, opts) {
            Ok(r) => {
                let achieved = r.profile.y[r.profile.len() - 1];
                let status = match (r.converged, r.proper_candidate) {
                    (false, _) => Status::Unconverged,
                    (true, true) => Status::Proper,
                    (true, false) => Status::Improper,
                };
                let case = SweepCase {
                    status,
                    beta_h: Some(achieved),
                    initial_slope: Some(r.initial_slope),
                    residual: Some(r.residual),
                    iterations: Some(r.iterations),
                    ratio: Some(achieved / p.alpha_h),
                    ..base
                };
                if status == Status::Proper {
                    checked(case, achieved)?
                } else {
                    case
                }
            }
            Err(Error::NoSolution(_)) => SweepCase {
                status: Status::NoSolution,
                ..base
            },
            Err(Error::Divergence { .. }) => SweepCase {
                status: Status::Divergence,
                ..base
            },
            Err(e) => return Err(e.into()),
        };
        out.push(case);
    }
    Ok(out)
}

pub fn run(global: &GlobalOpts, args: &SweepArgs) -> Result<RunReport> {
    let mut report = RunReport::new("sweep", global, args)?;
    let opts = shooting_options(global.tol)?;
    let points = grid(args)?;
    let per_point: Vec<Result<Vec<SweepCase>>> = if args.parallel {
        points.par_iter().map(|&p| run_point(p, args, global.seed, &opts)).collect()
    } else {
        points.iter().map(|&p| run_point(p, args, global.seed, &opts)).collect()
    };
    for cases in per_point {
        for c in cases? {
            let agg = &mut report.aggregate;
            match (c.status, &c.check) {
                (_, Some(check)) if check.feasible => agg.feasible += 1,
                (_, Some(_)) => agg.infeasible += 1,
                (Status::NoSolution | Status::Unconverged, _) => agg.no_solution += 1,
                (Status::Divergence, _) => agg.divergence += 1,
                _ => {}
            }
            if c.violation {
                agg.violations += 1;
            }
            report.push(&c)?;
        }
    }
    Ok(report)
}
