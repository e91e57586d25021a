use serde::Serialize;

use nitsche_core::bounds::{beprim_min_ratio, check_beprim, check_ence, pola_check};
use nitsche_core::geometry::{euclidean_radius, hyperbolic_radius};
use nitsche_core::NitscheReport;

use crate::args::{BoundArgs, FormArg, GlobalOpts};
use crate::error::{CliError, Result};
use crate::report::RunReport;

#[derive(Serialize)]
struct MinimalRatio {
    form: &'static str,
    a_h: f64,
    b_h: f64,
    alpha_h: f64,
    min_ratio: f64,
    beta_h_min: f64,
}

fn wants(form: FormArg, which: FormArg) -> bool {
    form == FormArg::All || form == which
}

pub fn run(global: &GlobalOpts, args: &BoundArgs) -> Result<RunReport> {
    let mut report = RunReport::new("bound", global, args)?;
    let (a, b) = (args.a, args.b);
    // Hyperbolic radii of the target; Euclidean ones derived or given.
    let target = match (args.alpha, args.beta, args.alpha_h, args.beta_h) {
        (Some(alpha), Some(beta), None, None) => Some((alpha, beta, hyperbolic_radius(alpha), hyperbolic_radius(beta))),
        (None, None, Some(ah), Some(bh)) => Some((euclidean_radius(ah), euclidean_radius(bh), ah, bh)),
        (None, None, Some(_), None) => None,
        _ => return Err(CliError::usage("give --alpha and --beta, or --alphaH [--betaH]")),
    };

    let Some((alpha, beta, alpha_h, beta_h)) = target else {
        if !wants(args.form, FormArg::Beprim) {
            return Err(CliError::usage("--alphaH without --betaH only supports --form beprim"));
        }
        let alpha_h = args.alpha_h.unwrap_or_default();
        let (a_h, b_h) = domain_h(a, b)?;
        let min_ratio = beprim_min_ratio(a_h, b_h, alpha_h)?;
        report.push(&MinimalRatio {
            form: "beprim",
            a_h,
            b_h,
            alpha_h,
            min_ratio,
            beta_h_min: alpha_h * min_ratio,
        })?;
        return Ok(report);
    };

    let (a_h, b_h) = domain_h(a, b)?;
    let mut out: Vec<NitscheReport> = Vec::new();
    if wants(args.form, FormArg::Ence) {
        out.push(check_ence(a, b, alpha, beta)?);
    }
    if wants(args.form, FormArg::Beprim) {
        out.push(check_beprim(a_h, b_h, alpha_h, beta_h)?);
    }
    if wants(args.form, FormArg::Pola) {
        out.push(pola_check(a, b, alpha_h, beta_h)?);
    }
    for r in &out {
        if r.feasible {
            report.aggregate.feasible += 1;
        } else {
            report.aggregate.infeasible += 1;
        }
        report.push(r)?;
    }
    Ok(report)
}

fn domain_h(a: f64, b: f64) -> Result<(f64, f64)> {
    if !(a > 0.0 && a < b && b < 1.0) {
        return Err(nitsche_core::Error::Domain(format!("need 0 < a < b < 1, got a = {a}, b = {b}")).into());
    }
    Ok((hyperbolic_radius(a), hyperbolic_radius(b)))
}
