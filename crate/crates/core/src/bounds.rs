//! Necessary conditions for a proper hyperbolic harmonic map of
//! `A(a, b)` onto `A(alpha, beta)` in the ball `B^3`.
//!
//! The condition comes in three algebraically equivalent forms:
//!
//! * Euclidean radii:
//!   `(1-alpha^2)^2/(4 alpha (1+alpha^2)) * log[(1+beta)(1-alpha)/((1+alpha)(1-beta))]
//!    >= (-1 + a/b + log(b/a)) / (1 + log((1-a^2)/(1-b^2)))`
//! * minimal modulus in hyperbolic radii:
//!   `beta'/alpha' >= 1 + sinh(2 alpha')/alpha' * N/D` with
//!   `N = log[coth(a'/2) tanh(b'/2)] + coth(b'/2) tanh(a'/2) - 1` and
//!   `D = 1 + 2 log[cosh(b'/2) sech(a'/2)]`,
//! * mixed form:
//!   `(beta' - alpha')(1 + log((1-a^2)/(1-b^2))) >= sinh(2 alpha')(-1 + a/b + log(b/a))`.
//!
//! The dimension is fixed to 3.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{check_radii, euclidean_radius, AnnulusPair};

/// Relative tolerance of the feasibility verdict.
pub const FEASIBILITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundForm {
    Ence,
    Beprim,
    Pola,
}

impl BoundForm {
    pub const ALL: [BoundForm; 3] = [BoundForm::Ence, BoundForm::Beprim, BoundForm::Pola];

    pub fn name(self) -> &'static str {
        match self {
            BoundForm::Ence => "ence",
            BoundForm::Beprim => "beprim",
            BoundForm::Pola => "pola",
        }
    }
}

impl std::str::FromStr for BoundForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ence" => Ok(BoundForm::Ence),
            "beprim" => Ok(BoundForm::Beprim),
            "pola" => Ok(BoundForm::Pola),
            _ => Err(Error::domain(format!("unknown bound form '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NitscheReport {
    pub form: BoundForm,
    pub lhs: f64,
    pub rhs: f64,
    pub feasible: bool,
    /// Within tolerance of equality.
    pub marginal: bool,
    /// `lhs - rhs`.
    pub margin: f64,
    pub inputs: AnnulusPair,
}

impl NitscheReport {
    fn new(form: BoundForm, lhs: f64, rhs: f64, inputs: AnnulusPair) -> Self {
        let margin = lhs - rhs;
        let tol = FEASIBILITY_TOL * 1f64.max(lhs.abs()).max(rhs.abs());
        Self {
            form,
            lhs,
            rhs,
            feasible: margin >= -tol,
            marginal: margin.abs() <= tol,
            margin,
            inputs,
        }
    }
}

/// `x - 1 - ln(x)` for `x in (0, 1]`, without cancellation near `x = 1`.
fn ratio_excess(x: f64) -> f64 {
    let u = x - 1.0;
    if u.abs() < 0.1 {
        // u - ln(1 + u) = sum_{k>=2} (-u)^k / k; every term is positive for u < 0.
        let mut term = u * u;
        let mut sum = 0.0;
        for k in 2..40 {
            sum += term / k as f64;
            term *= -u;
        }
        sum
    } else {
        u - u.ln_1p()
    }
}

/// `ln(cosh(x))` without overflow.
fn ln_cosh(x: f64) -> f64 {
    let x = x.abs();
    x + (-2.0 * x).exp().ln_1p() - std::f64::consts::LN_2
}

/// `1 + log((1 - a^2)/(1 - b^2))`.
fn log_denominator(a: f64, b: f64) -> f64 {
    1.0 + ((b - a) * (b + a) / (1.0 - b * b)).ln_1p()
}

/// `(-1 + a/b + log(b/a)) / (1 + log((1-a^2)/(1-b^2)))`.
pub fn grad_rhs(a: f64, b: f64) -> Result<f64> {
    check_radii(a, b, "a", "b")?;
    Ok(ratio_excess(a / b) / log_denominator(a, b))
}

/// `(1-alpha^2)^2 / (4 alpha (1+alpha^2)) * log[(1+beta)(1-alpha)/((1+alpha)(1-beta))]`,
/// which equals `(beta' - alpha') / sinh(2 alpha')`.
pub fn ence_lhs(alpha: f64, beta: f64) -> Result<f64> {
    check_radii(alpha, beta, "alpha", "beta")?;
    let a2 = alpha * alpha;
    let prefactor = (1.0 - a2).powi(2) / (4.0 * alpha * (1.0 + a2));
    let log_term = (2.0 * (beta - alpha) / ((1.0 + alpha) * (1.0 - beta))).ln_1p();
    Ok(prefactor * log_term)
}

pub fn check_ence(a: f64, b: f64, alpha: f64, beta: f64) -> Result<NitscheReport> {
    let inputs = AnnulusPair::from_euclidean(a, b, alpha, beta)?;
    Ok(NitscheReport::new(BoundForm::Ence, ence_lhs(alpha, beta)?, grad_rhs(a, b)?, inputs))
}

/// Lower bound for `beta'/alpha'` in hyperbolic radii.
pub fn beprim_min_ratio(a_h: f64, b_h: f64, alpha_h: f64) -> Result<f64> {
    if !(a_h > 0.0 && a_h < b_h && b_h.is_finite()) {
        return Err(Error::domain(format!("need 0 < a' < b' < inf, got {a_h}, {b_h}")));
    }
    let factor = remark_factor(alpha_h)?;
    let (ta, tb) = ((0.5 * a_h).tanh(), (0.5 * b_h).tanh());
    // log[coth(a'/2) tanh(b'/2)] + coth(b'/2) tanh(a'/2) - 1 = x - 1 - ln x, x = tanh(a'/2)/tanh(b'/2)
    let numerator = ratio_excess(ta / tb);
    let denominator = 1.0 + 2.0 * (ln_cosh(0.5 * b_h) - ln_cosh(0.5 * a_h));
    Ok(1.0 + factor * numerator / denominator)
}

/// Compares `beta'/alpha'` with [`beprim_min_ratio`].
pub fn check_beprim(a_h: f64, b_h: f64, alpha_h: f64, beta_h: f64) -> Result<NitscheReport> {
    let inputs = AnnulusPair::from_hyperbolic(a_h, b_h, alpha_h, beta_h)?;
    let rhs = beprim_min_ratio(a_h, b_h, alpha_h)?;
    Ok(NitscheReport::new(BoundForm::Beprim, beta_h / alpha_h, rhs, inputs))
}

/// Mixed form with Euclidean domain radii and hyperbolic target radii.
pub fn pola_check(a: f64, b: f64, alpha_h: f64, beta_h: f64) -> Result<NitscheReport> {
    check_radii(a, b, "a", "b")?;
    if !(alpha_h > 0.0 && alpha_h < beta_h && beta_h.is_finite()) {
        return Err(Error::domain(format!(
            "need 0 < alpha' < beta' < inf, got {alpha_h}, {beta_h}"
        )));
    }
    let inputs = AnnulusPair {
        a,
        b,
        alpha: euclidean_radius(alpha_h),
        beta: euclidean_radius(beta_h),
        a_h: 2.0 * a.atanh(),
        b_h: 2.0 * b.atanh(),
        alpha_h,
        beta_h,
    };
    let lhs = (beta_h - alpha_h) * log_denominator(a, b);
    let rhs = (2.0 * alpha_h).sinh() * ratio_excess(a / b);
    Ok(NitscheReport::new(BoundForm::Pola, lhs, rhs, inputs))
}

/// All three forms for the same Euclidean data.
pub fn check_all(a: f64, b: f64, alpha: f64, beta: f64) -> Result<[NitscheReport; 3]> {
    let pair = AnnulusPair::from_euclidean(a, b, alpha, beta)?;
    Ok([
        check_ence(a, b, alpha, beta)?,
        check_beprim(pair.a_h, pair.b_h, pair.alpha_h, pair.beta_h)?,
        pola_check(a, b, pair.alpha_h, pair.beta_h)?,
    ])
}

/// `sinh(2 alpha') / alpha'`, which exceeds 2 for every `alpha' > 0`.
pub fn remark_factor(alpha_h: f64) -> Result<f64> {
    if !(alpha_h > 0.0) || !alpha_h.is_finite() {
        return Err(Error::domain(format!("alpha' = {alpha_h} must be positive and finite")));
    }
    if alpha_h < 1e-4 {
        let x2 = alpha_h * alpha_h;
        return Ok(2.0 + x2 * (4.0 / 3.0 + x2 * 4.0 / 15.0));
    }
    Ok((2.0 * alpha_h).sinh() / alpha_h)
}

/// `2 N / D`, the part of the minimal-modulus increment that does not depend on
/// `alpha'`. Since `sinh(2 alpha')/alpha' > 2`, every proper harmonic map
/// satisfies `beta'/alpha' > 1 + psi(a', b')`.
pub fn psi(a_h: f64, b_h: f64) -> Result<f64> {
    if !(a_h > 0.0 && a_h < b_h && b_h.is_finite()) {
        return Err(Error::domain(format!("need 0 < a' < b' < inf, got {a_h}, {b_h}")));
    }
    let (a, b) = (euclidean_radius(a_h), euclidean_radius(b_h));
    Ok(2.0 * ratio_excess(a / b) / log_denominator(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_excess_branches_meet() {
        for x in [0.89, 0.8999999, 0.9000001, 0.91] {
            let direct = x - 1.0 - f64::ln(x);
            assert!((ratio_excess(x) - direct).abs() < 1e-15);
        }
        assert_eq!(ratio_excess(1.0), 0.0);
        // 1 - 1e-8: series value is 5e-17 up to a relative 1e-8 correction
        let v = ratio_excess(1.0 - 1e-8);
        assert!((v / 5e-17 - 1.0).abs() < 1e-7);
    }

    #[test]
    fn grad_rhs_values() {
        let v = grad_rhs(0.5, 0.9).unwrap();
        assert!((v - 0.0604).abs() < 5e-5);
        assert!(grad_rhs(0.5, 0.5 + 1e-12).unwrap() < 1e-20);
        assert!(grad_rhs(0.9, 0.5).is_err());
        assert!(grad_rhs(0.5, 1.0).is_err());
    }

    #[test]
    fn ence_examples() {
        assert!(ence_lhs(0.4, 0.4 + 1e-14).unwrap() < 1e-12);
        let r = check_ence(0.5, 0.9, 0.5, 0.50001).unwrap();
        assert!(!r.feasible);
        assert!(check_ence(0.5, 0.9, 0.5, 0.9).unwrap().feasible);
        assert!(check_ence(0.5, 0.5, 0.2, 0.3).is_err());
    }

    #[test]
    fn beprim_limit_and_partial_mode() {
        let r = beprim_min_ratio(1.0, 1.0 + 1e-9, 0.3).unwrap();
        assert!((r - 1.0).abs() < 1e-15);
        assert!(beprim_min_ratio(1.0, 0.5, 0.3).is_err());
        assert!(beprim_min_ratio(0.5, 1.0, 0.0).is_err());
    }

    #[test]
    fn remark_factor_values() {
        assert!((remark_factor(1.0).unwrap() - 2f64.sinh()).abs() < 1e-15);
        assert!((remark_factor(1.0).unwrap() - 3.626_860_407_847_019).abs() < 1e-12);
        assert!((remark_factor(1e-6).unwrap() - 2.0).abs() < 1e-9);
        assert!(remark_factor(0.0).is_err());
        assert!(remark_factor(-1.0).is_err());
        let x = 1e-4;
        assert!((remark_factor(x * 0.999_999).unwrap() - (2.0 * x).sinh() / x).abs() < 1e-12);
    }

    #[test]
    fn form_names_round_trip() {
        for f in BoundForm::ALL {
            assert_eq!(f.name().parse::<BoundForm>().unwrap(), f);
        }
        assert!("other".parse::<BoundForm>().is_err());
    }

    #[test]
    fn psi_is_positive() {
        assert!(psi(0.5, 1.5).unwrap() > 0.0);
    }
}
