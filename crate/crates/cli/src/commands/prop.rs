use serde::Serialize;

use nitsche_core::quadrature::{check_surface_bound, check_volume_bound, BoundCheck, Ellipsoid};

use crate::args::{GlobalOpts, PropArgs};
use crate::error::{CliError, Result};
use crate::report::RunReport;
use crate::selector::MapChoice;

#[derive(Debug, Clone, PartialEq)]
pub enum Surface {
    Sphere(f64),
    Ellipsoid { center: [f64; 3], axes: [f64; 3] },
    Annulus(f64, f64),
}

impl Surface {
    pub fn parse(spec: &str) -> Result<Self> {
        let bad = || CliError::usage(format!("bad --surface {spec:?}"));
        let (kind, rest) = spec.split_once(':').ok_or_else(bad)?;
        let nums = rest
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| bad())?;
        match (kind, nums.as_slice()) {
            ("sphere", &[r]) if r > 0.0 => Ok(Self::Sphere(r)),
            ("ellipsoid", &[cx, cy, cz, a, b, c]) if a > 0.0 && b > 0.0 && c > 0.0 => Ok(Self::Ellipsoid {
                center: [cx, cy, cz],
                axes: [a, b, c],
            }),
            ("annulus", &[a, b]) => Ok(Self::Annulus(a, b)),
            _ => Err(bad()),
        }
    }
}

#[derive(Serialize)]
struct PropCase {
    map: String,
    surface: String,
    integral: f64,
    bound: f64,
    relative_excess: f64,
    holds: bool,
}

pub fn run(global: &GlobalOpts, args: &PropArgs) -> Result<RunReport> {
    let mut report = RunReport::new("verify-prop", global, args)?;
    let choice = MapChoice::parse(&args.map)?;
    let u = choice.build()?;
    let surfaces = args.surfaces.iter().map(|s| Surface::parse(s)).collect::<Result<Vec<_>>>()?;
    for (spec, surface) in args.surfaces.iter().zip(&surfaces) {
        let check: BoundCheck = match *surface {
            Surface::Sphere(r) => check_surface_bound(u.as_ref(), &Ellipsoid::sphere(r), args.order)?,
            Surface::Ellipsoid { center, axes } => {
                check_surface_bound(u.as_ref(), &Ellipsoid { center, axes }, args.order)?
            }
            Surface::Annulus(a, b) => check_volume_bound(u.as_ref(), a, b, args.order)?,
        };
        if check.holds {
            report.aggregate.feasible += 1;
        } else {
            report.aggregate.infeasible += 1;
            report.aggregate.violations += 1;
        }
        report.push(&PropCase {
            map: choice.name(),
            surface: spec.clone(),
            integral: check.integral,
            bound: check.bound,
            relative_excess: check.relative_excess(),
            holds: check.holds,
        })?;
    }
    Ok(report)
}
