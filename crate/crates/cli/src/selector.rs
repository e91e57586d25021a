//! `--map` selectors shared by `tension` and `verify-prop`.

use std::path::{Path, PathBuf};

use nitsche_core::maps::{IdentityMap, InversionMap, RadialMap};
use nitsche_core::radial::euclidean_radial_map;
use nitsche_core::{MapField, RadialProfile};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum MapChoice {
    Identity,
    Inversion,
    RadialProfile(PathBuf),
    Eqf { a: f64, alpha: f64 },
}

impl MapChoice {
    pub fn parse(tokens: &[String]) -> Result<Self> {
        let num = |s: &String| {
            s.parse::<f64>()
                .map_err(|e| CliError::usage(format!("--map: {s:?} is not a number: {e}")))
        };
        match tokens {
            [m] if m == "identity" => Ok(Self::Identity),
            [m] if m == "inversion" => Ok(Self::Inversion),
            [m, file] if m == "radial-profile" => Ok(Self::RadialProfile(file.into())),
            [m, a, alpha] if m == "eqf" => Ok(Self::Eqf {
                a: num(a)?,
                alpha: num(alpha)?,
            }),
            _ => Err(CliError::usage(format!(
                "--map expects identity | inversion | radial-profile <file> | eqf <a> <alpha>, got {tokens:?}"
            ))),
        }
    }

    pub fn build(&self) -> Result<Box<dyn MapField>> {
        Ok(match self {
            Self::Identity => Box::new(IdentityMap { dim: 3 }),
            Self::Inversion => Box::new(InversionMap { dim: 3 }),
            Self::RadialProfile(path) => Box::new(RadialMap::new(load_profile(path)?)),
            Self::Eqf { a, alpha } => Box::new(euclidean_radial_map(*a, *alpha, 3)?),
        })
    }

    /// Interior shell used for sampling when the user gives none.
    pub fn default_shell(&self, u: &dyn MapField) -> (f64, f64) {
        match self {
            Self::Identity => (0.3, 0.75),
            Self::Inversion => (1.3, 1.9),
            Self::Eqf { a, .. } => (a + 0.15 * (1.0 - a), 1.0 - 0.15 * (1.0 - a)),
            Self::RadialProfile(_) => {
                let (lo, hi) = u.radial_domain().unwrap_or((0.3, 0.75));
                (lo + 0.15 * (hi - lo), hi - 0.15 * (hi - lo))
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            Self::Identity => "identity".into(),
            Self::Inversion => "inversion".into(),
            Self::RadialProfile(p) => format!("radial-profile {}", p.display()),
            Self::Eqf { a, alpha } => format!("eqf {a} {alpha}"),
        }
    }
}

/// Reads a `t,y,dy` profile as written by `radial --profile`.
pub fn load_profile(path: &Path) -> Result<RadialProfile> {
    let bad = |msg: String| CliError::Input {
        path: path.display().to_string(),
        msg,
    };
    let text = std::fs::read_to_string(path).map_err(|e| bad(e.to_string()))?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    match lines.next().map(|h| h.split(',').map(str::trim).collect::<Vec<_>>()) {
        Some(h) if h == ["t", "y", "dy"] => {}
        _ => return Err(bad("expected header t,y,dy".into())),
    }
    let (mut t, mut y, mut dy) = (Vec::new(), Vec::new(), Vec::new());
    for (i, line) in lines.enumerate() {
        let vals = line
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| bad(format!("row {}: {e}", i + 1)))?;
        let [a, b, c] = vals[..] else {
            return Err(bad(format!("row {}: expected 3 columns", i + 1)));
        };
        t.push(a);
        y.push(b);
        dy.push(c);
    }
    RadialProfile::new(t, y, dy, 3).map_err(|e| bad(e.to_string()))
}
