//! Tension field of `u = r Theta` between domains of the Poincaré ball, in the
//! polar splitting of the target, evaluated with finite differences.
//!
//! Writing `rho = |x|`, `Delta` and `grad` for the Euclidean operators and
//! `|D Theta|^2` for the squared Frobenius norm of the Euclidean differential of
//! the unit-vector field `Theta`, the radial component is
//!
//! ```text
//! tau^1 = (1-rho^2)^2/4 * [ Delta r + 2(m-2) rho/(1-rho^2) dr/drho
//!                           + r (2|grad r|^2 - (1+r^2)|D Theta|^2) / (1-r^2) ]
//! ```
//!
//! and, in colatitude/longitude coordinates `theta^s` of `Theta` on `S^2`,
//!
//! ```text
//! tau^s = (1-rho^2)^2/2 * (Delta theta^s + Gamma^s_pq <grad theta^p, grad theta^q>)
//!       + c(rho) * ( (m-2) rho dtheta^s/drho
//!                    + (1+r^2)(1-rho^2) <grad r, grad theta^s> / (r(1-r^2)) )
//! ```
//!
//! with `c(rho) = 1 - rho^2`. [`TensionForm::Literal`] switches to the
//! alternative coefficients `dr/drho -> 1` in `tau^1` and `c(rho) = (1-rho^2)/2`
//! in `tau^s`; those do not vanish on non-radial isometries and are kept for
//! comparison only.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fd::{FdOptions, Stencil};
use crate::geometry::{dot, norm};
use crate::maps::MapField;

/// Minimum angular distance from the poles of the spherical chart.
pub const POLE_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TensionForm {
    /// Coefficients of the conformal Laplacian and target Christoffel symbols.
    #[default]
    Consistent,
    /// Alternative coefficient reading, see the module docs.
    Literal,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TensionOptions {
    pub fd: FdOptions,
    pub form: TensionForm,
}

impl TensionOptions {
    pub fn with_step(step: f64) -> Self {
        Self {
            fd: FdOptions::with_step(step),
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TensionSample {
    pub point: Vec<f64>,
    pub tau1: f64,
    /// Colatitude and longitude components.
    pub tau_s: Vec<f64>,
    pub hyplap: f64,
    pub fd_step: f64,
}

/// Shrinks the step so the stencil stays inside the map's radial domain and
/// off the unit sphere.
pub fn effective_step(u: &dyn MapField, x: &[f64], h: f64) -> Result<f64> {
    if x.len() != u.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            got: x.len(),
        });
    }
    let rho = norm(x);
    let mut margin = (1.0 - rho).abs();
    if let Some((lo, hi)) = u.radial_domain() {
        if !(rho > lo && rho < hi) {
            return Err(Error::domain(format!("|x| = {rho} outside the map's domain ({lo}, {hi})")));
        }
        margin = margin.min(rho - lo).min(hi - rho);
    }
    if margin == 0.0 {
        return Err(Error::Singularity("point on the unit sphere".into()));
    }
    Ok(h.min(0.5 * margin))
}

fn fd_at(u: &dyn MapField, x: &[f64], opts: &FdOptions) -> Result<(Stencil, f64)> {
    let step = effective_step(u, x, opts.step)?;
    let fd = FdOptions { step, ..*opts };
    Ok((Stencil::sample(|y| u.eval(y), x, &fd)?, step))
}

fn radius_of(v: &[f64]) -> f64 {
    norm(v)
}

fn direction_of(v: &[f64]) -> Vec<f64> {
    let r = norm(v);
    v.iter().map(|c| c / r).collect()
}

fn theta_norm_sq_from(s: &Stencil) -> f64 {
    s.jacobian(direction_of).iter().flatten().map(|d| d * d).sum()
}

fn check_image_radius(r: f64) -> Result<()> {
    if !(r > 1e-12 && r < 1.0 - 1e-12) {
        return Err(Error::Singularity(format!("image radius {r} not in (0, 1)")));
    }
    Ok(())
}

fn domain_factor(rho: f64) -> Result<f64> {
    let f = 1.0 - rho * rho;
    if f == 0.0 {
        return Err(Error::Singularity("point on the unit sphere".into()));
    }
    Ok(f)
}

/// `|D Theta|^2` at `x`.
pub fn theta_norm_sq(u: &dyn MapField, x: &[f64], opts: &FdOptions) -> Result<f64> {
    let (s, _) = fd_at(u, x, opts)?;
    if radius_of(&s.center) == 0.0 {
        return Err(Error::UndefinedDirection);
    }
    Ok(theta_norm_sq_from(&s))
}

fn tau1_from(s: &Stencil, x: &[f64], form: TensionForm) -> Result<f64> {
    let m = x.len() as f64;
    let rho = norm(x);
    let w = domain_factor(rho)?;
    let r = radius_of(&s.center);
    check_image_radius(r)?;
    let grad_r = s.grad(radius_of);
    let lap_r = s.laplacian(radius_of);
    let dr_drho = match form {
        TensionForm::Consistent => dot(&grad_r, x) / rho,
        TensionForm::Literal => 1.0,
    };
    let dtheta = theta_norm_sq_from(s);
    let bracket = lap_r
        + 2.0 * (m - 2.0) * rho / w * dr_drho
        + r * (2.0 * dot(&grad_r, &grad_r) - (1.0 + r * r) * dtheta) / (1.0 - r * r);
    Ok(0.25 * w * w * bracket)
}

fn spherical_angles(v: &[f64]) -> (f64, f64) {
    ((v[0] * v[0] + v[1] * v[1]).sqrt().atan2(v[2]), v[1].atan2(v[0]))
}

fn tau_s_from(s: &Stencil, x: &[f64], form: TensionForm) -> Result<Vec<f64>> {
    if x.len() != 3 {
        return Err(Error::domain("spherical tension components are implemented for n = 3"));
    }
    let m = 3.0;
    let rho = norm(x);
    let w = domain_factor(rho)?;
    let r = radius_of(&s.center);
    check_image_radius(r)?;
    let (colat, lon) = spherical_angles(&s.center);
    if !(POLE_TOL..=std::f64::consts::PI - POLE_TOL).contains(&colat) {
        return Err(Error::CoordinateSingularity { tolerance: POLE_TOL });
    }
    let colat_of = |v: &[f64]| spherical_angles(v).0;
    let lon_of = |v: &[f64]| {
        let mut phi = spherical_angles(v).1;
        let tau = std::f64::consts::TAU;
        phi += tau * ((lon - phi) / tau).round();
        phi
    };
    let grad_r = s.grad(radius_of);
    let grads = [s.grad(colat_of), s.grad(lon_of)];
    let laps = [s.laplacian(colat_of), s.laplacian(lon_of)];
    let cross = dot(&grads[0], &grads[1]);
    // Christoffel symbols of d theta^2 + sin^2 theta d phi^2
    let christoffel = [
        -colat.sin() * colat.cos() * dot(&grads[1], &grads[1]),
        2.0 * cross / colat.tan(),
    ];
    let outer = match form {
        TensionForm::Consistent => w,
        TensionForm::Literal => 0.5 * w,
    };
    Ok((0..2)
        .map(|k| {
            let radial = dot(&grads[k], x) / rho;
            0.5 * w * w * (laps[k] + christoffel[k])
                + outer
                    * ((m - 2.0) * rho * radial
                        + (1.0 + r * r) * w * dot(&grad_r, &grads[k]) / (r * (1.0 - r * r)))
        })
        .collect())
}

fn hyplap_from(s: &Stencil, x: &[f64]) -> Result<f64> {
    let n = x.len() as f64;
    let rho = norm(x);
    let w = domain_factor(rho)?;
    let r = radius_of(&s.center);
    check_image_radius(r)?;
    let big_r = |v: &[f64]| 2.0 * radius_of(v).atanh();
    let grad = s.grad(big_r);
    let lap = s.laplacian(big_r);
    let dtheta = theta_norm_sq_from(s);
    let rr = big_r(&s.center);
    Ok(lap + 2.0 * (n - 2.0) * rho / w * dot(&grad, x) / rho - 0.5 * (2.0 * rr).sinh() * dtheta)
}

pub fn tau1(u: &dyn MapField, x: &[f64], opts: &TensionOptions) -> Result<f64> {
    let (s, _) = fd_at(u, x, &opts.fd)?;
    tau1_from(&s, x, opts.form)
}

pub fn tau_s(u: &dyn MapField, x: &[f64], opts: &TensionOptions) -> Result<Vec<f64>> {
    let (s, _) = fd_at(u, x, &opts.fd)?;
    tau_s_from(&s, x, opts.form)
}

/// `Delta R + 2(n-2) rho/(1-rho^2) dR/drho - sinh(2R)/2 |D Theta|^2` with
/// `R = 2 atanh(r)`; vanishes wherever `tau^1` does.
pub fn hyplap_residual(u: &dyn MapField, x: &[f64], opts: &TensionOptions) -> Result<f64> {
    let (s, _) = fd_at(u, x, &opts.fd)?;
    hyplap_from(&s, x)
}

/// All components from one stencil.
pub fn tension_sample(u: &dyn MapField, x: &[f64], opts: &TensionOptions) -> Result<TensionSample> {
    let (s, step) = fd_at(u, x, &opts.fd)?;
    Ok(TensionSample {
        point: x.to_vec(),
        tau1: tau1_from(&s, x, opts.form)?,
        tau_s: tau_s_from(&s, x, opts.form)?,
        hyplap: hyplap_from(&s, x)?,
        fd_step: step,
    })
}

/// Hyperbolic energy density `(1-|x|^2)^2 / (1-|u|^2)^2 * |Du|^2` of a
/// ball-to-ball map.
pub fn energy_density(u: &dyn MapField, x: &[f64], opts: &FdOptions) -> Result<f64> {
    let (s, _) = fd_at(u, x, opts)?;
    let r = radius_of(&s.center);
    if r >= 1.0 - 1e-12 {
        return Err(Error::Singularity(format!("image radius {r} reaches the unit sphere")));
    }
    let w = domain_factor(norm(x))?;
    let du: f64 = s.jacobian(|v| v.to_vec()).iter().flatten().map(|d| d * d).sum();
    Ok((w / (1.0 - r * r)).powi(2) * du)
}

/// Euclidean Laplacian of each component of `u`.
pub fn component_laplacians(u: &dyn MapField, x: &[f64], opts: &FdOptions) -> Result<Vec<f64>> {
    let step = match u.radial_domain() {
        Some((lo, hi)) => {
            let rho = norm(x);
            if !(rho > lo && rho < hi) {
                return Err(Error::domain(format!("|x| = {rho} outside the map's domain")));
            }
            opts.step.min(0.5 * (rho - lo).min(hi - rho))
        }
        None => opts.step,
    };
    let s = Stencil::sample(|y| u.eval(y), x, &FdOptions { step, ..*opts })?;
    Ok((0..u.dim()).map(|k| s.laplacian(|v| v[k])).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{ConstantMap, FnMap, IdentityMap, InversionMap};

    const X: [f64; 3] = [0.3, 0.2, -0.35];

    #[test]
    fn identity_is_harmonic() {
        let u = IdentityMap { dim: 3 };
        let s = tension_sample(&u, &X, &TensionOptions::default()).unwrap();
        assert!(s.tau1.abs() < 1e-6, "{s:?}");
        assert!(s.tau_s.iter().all(|t| t.abs() < 1e-6), "{s:?}");
        assert!(s.hyplap.abs() < 1e-6, "{s:?}");
    }

    #[test]
    fn inversion_is_harmonic() {
        let u = InversionMap { dim: 3 };
        let x = [1.0, 0.8, -0.6];
        let s = tension_sample(&u, &x, &TensionOptions::default()).unwrap();
        assert!(s.tau1.abs() < 1e-6 && s.hyplap.abs() < 1e-6, "{s:?}");
    }

    #[test]
    fn literal_form_differs_when_radius_is_not_linear() {
        // dr/drho = 1 for the identity, so both readings agree there.
        let opts = TensionOptions {
            form: TensionForm::Literal,
            ..TensionOptions::default()
        };
        assert!(tau1(&IdentityMap { dim: 3 }, &X, &opts).unwrap().abs() < 1e-6);
        assert!(tau1(&InversionMap { dim: 3 }, &[1.0, 0.8, -0.6], &opts).unwrap().abs() > 1e-3);
    }

    #[test]
    fn energy_density_examples() {
        let e = energy_density(&IdentityMap { dim: 3 }, &X, &FdOptions::default()).unwrap();
        assert!((e - 3.0).abs() < 1e-8);
        let c = ConstantMap { value: vec![0.1, 0.2, 0.3] };
        assert_eq!(energy_density(&c, &X, &FdOptions::default()).unwrap(), 0.0);
    }

    #[test]
    fn pole_is_rejected() {
        let u = IdentityMap { dim: 3 };
        assert!(matches!(
            tau_s(&u, &[0.0, 1e-5, 0.5], &TensionOptions::default()),
            Err(Error::CoordinateSingularity { .. })
        ));
    }

    #[test]
    fn degenerate_image_radius_is_rejected() {
        let u = FnMap::new(3, |x: &[f64]| Ok(x.iter().map(|c| c * 1e-14).collect()));
        assert!(matches!(
            tau1(&u, &X, &TensionOptions::default()),
            Err(Error::Singularity(_))
        ));
    }

    #[test]
    fn step_is_clamped_to_domain() {
        let u = IdentityMap { dim: 3 };
        let h = effective_step(&u, &[0.0, 0.0, 0.99999], 1e-4).unwrap();
        assert!(h <= 0.5e-5 + 1e-18);
        assert!(effective_step(&u, &[0.0, 0.0, 1.5], 1e-4).is_err());
    }

    #[test]
    fn longitude_branch_cut_is_unwrapped() {
        // Image direction near phi = pi, where atan2 jumps.
        let x = [-0.5, 1e-9, 0.1];
        let s = tension_sample(&IdentityMap { dim: 3 }, &x, &TensionOptions::default()).unwrap();
        assert!(s.tau_s.iter().all(|t| t.abs() < 1e-5), "{s:?}");
    }
}
