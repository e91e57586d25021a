use std::fs::File;
use std::io::BufWriter;

use serde::Serialize;

use nitsche_core::geometry::hyperbolic_radius;
use nitsche_core::radial::{identity_solution, solve_radial_bvp_with, IvpOptions, ShootingOptions};

use crate::args::{GlobalOpts, RadialArgs};
use crate::error::{CliError, Result};
use crate::report::{write_profile_csv, RunReport};

#[derive(Serialize)]
struct Inputs {
    a: f64,
    b: f64,
    a_h: f64,
    b_h: f64,
    alpha_h: f64,
    beta_h: f64,
    n: usize,
}

#[derive(Serialize)]
pub struct Profile {
    pub t: Vec<f64>,
    pub y: Vec<f64>,
    pub dy: Vec<f64>,
}

#[derive(Serialize)]
struct RadialCase {
    inputs: Inputs,
    converged: bool,
    proper_candidate: bool,
    initial_slope: f64,
    residual: f64,
    iterations: usize,
    nodes: usize,
    /// Max deviation from the identity solution at the solver nodes.
    identity_error: Option<f64>,
    profile: Profile,
}

pub fn shooting_options(tol: f64) -> Result<ShootingOptions> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(CliError::usage(format!("--tol must lie in (0, 1), got {tol}")));
    }
    Ok(ShootingOptions {
        ivp: IvpOptions::with_tol(tol),
        boundary_tol: tol,
        ..ShootingOptions::default()
    })
}

/// Returns the report and whether the shot converged.
pub fn run(global: &GlobalOpts, args: &RadialArgs) -> Result<(RunReport, Profile, bool)> {
    let mut report = RunReport::new("radial", global, args)?;
    let (a, b) = (args.a, args.b);
    if !(a > 0.0 && a < b && b < 1.0) {
        return Err(CliError::Core(nitsche_core::Error::Domain(format!(
            "need 0 < a < b < 1, got a = {a}, b = {b}"
        ))));
    }
    let (a_h, b_h) = (hyperbolic_radius(a), hyperbolic_radius(b));
    let (alpha_h, beta_h) = if args.identity {
        (a_h, b_h)
    } else {
        (args.alpha_h.unwrap_or_default(), args.beta_h.unwrap_or_default())
    };
    let opts = shooting_options(global.tol)?;
    let result = solve_radial_bvp_with(a_h, b_h, alpha_h, beta_h, args.n, &opts)?;
    let p = &result.profile;
    let identity_error = args.identity.then(|| {
        p.t.iter()
            .zip(&p.y)
            .map(|(t, y)| (y - identity_solution(*t)).abs())
            .fold(0.0, f64::max)
    });
    let sampled = if args.samples >= 2 { p.resample(args.samples)? } else { p.clone() };
    let profile = Profile {
        t: sampled.t,
        y: sampled.y,
        dy: sampled.dy,
    };
    if let Some(path) = &args.profile {
        let mut w = BufWriter::new(File::create(path)?);
        write_profile_csv(&profile.t, &profile.y, &profile.dy, &mut w)?;
    }
    let case = RadialCase {
        inputs: Inputs {
            a,
            b,
            a_h,
            b_h,
            alpha_h,
            beta_h,
            n: args.n,
        },
        converged: result.converged,
        proper_candidate: result.proper_candidate,
        initial_slope: result.initial_slope,
        residual: result.residual,
        iterations: result.iterations,
        nodes: p.len(),
        identity_error,
        profile: Profile {
            t: profile.t.clone(),
            y: profile.y.clone(),
            dy: profile.dy.clone(),
        },
    };
    if !result.converged {
        report.aggregate.no_solution += 1;
    }
    report.push(&case)?;
    Ok((report, profile, result.converged))
}
