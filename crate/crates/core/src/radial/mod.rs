//! Radial harmonic maps between concentric annuli.
//!
//! A radial map `u(x) = r(rho) x/|x|` is hyperbolic harmonic exactly when, with
//! `rho = e^t` and `r(rho) = tanh(y(t)/2)`,
//!
//! ```text
//! y'' + (2 - n) coth(t) y' = (n - 1) sinh(2y) / 2
//! ```
//!
//! Two closed-form solutions are `y+(t) = 2 atanh(e^t)` (the identity map, `t < 0`)
//! and `y-(t) = 2 atanh(e^-t)` (the inversion `x/|x|^2`, `t > 0`).
//!
//! Maps between `A(0, a', b')` and `A(0, alpha', beta')` are found by shooting on
//! the initial slope `y'(ln a)` with `a = tanh(a'/2)`.

mod integrator;

use serde::Serialize;

pub use integrator::IvpOptions;
use integrator::State;

use crate::error::{Error, Result};
use crate::geometry::euclidean_radius;

/// Right-hand side `y'' = (n-1) sinh(2y)/2 - (2-n) coth(t) y'`.
pub fn ode_rhs(t: f64, y: f64, dy: f64, n: usize) -> Result<f64> {
    if t == 0.0 {
        return Err(Error::Singularity("coth has a pole at t = 0".into()));
    }
    let n = n as f64;
    Ok((n - 1.0) * (2.0 * y).sinh() / 2.0 - (2.0 - n) * dy / t.tanh())
}

fn system(n: usize) -> impl Fn(f64, State) -> Result<State> {
    move |t, s| Ok([s[1], ode_rhs(t, s[0], s[1], n)?])
}

/// `y+(t) = 2 atanh(e^t)` for `t < 0`.
pub fn identity_solution(t: f64) -> f64 {
    2.0 * t.exp().atanh()
}

/// `y-(t) = 2 atanh(e^-t)` for `t > 0`.
pub fn inversion_solution(t: f64) -> f64 {
    2.0 * (-t).exp().atanh()
}

/// Derivative shared by both closed forms: `-1 / sinh(t)`.
pub fn closed_form_slope(t: f64) -> f64 {
    -1.0 / t.sinh()
}

/// Second derivative shared by both closed forms: `cosh(t) / sinh(t)^2`.
pub fn closed_form_curvature(t: f64) -> f64 {
    t.cosh() / t.sinh().powi(2)
}

/// Samples of a solution on an increasing grid in `t = ln(rho)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialProfile {
    pub t: Vec<f64>,
    pub y: Vec<f64>,
    pub dy: Vec<f64>,
    pub n: usize,
}

impl RadialProfile {
    pub fn new(t: Vec<f64>, y: Vec<f64>, dy: Vec<f64>, n: usize) -> Result<Self> {
        if t.len() != y.len() || t.len() != dy.len() {
            return Err(Error::DimensionMismatch {
                expected: t.len(),
                got: y.len().min(dy.len()),
            });
        }
        if t.len() < 2 {
            return Err(Error::domain("profile needs at least two samples"));
        }
        if t.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::domain("profile grid must be strictly increasing"));
        }
        if t.contains(&0.0) || (t[0] < 0.0) != (t[t.len() - 1] < 0.0) {
            return Err(Error::domain("profile grid must not touch t = 0"));
        }
        if y.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
            return Err(Error::domain("profile values must be finite and nonnegative"));
        }
        Ok(Self { t, y, dy, n })
    }

    fn from_trajectory(traj: integrator::Trajectory, n: usize) -> Self {
        let mut t = traj.t;
        let mut y: Vec<f64> = traj.states.iter().map(|s| s[0]).collect();
        let mut dy: Vec<f64> = traj.states.iter().map(|s| s[1]).collect();
        if t.len() > 1 && t[0] > t[t.len() - 1] {
            t.reverse();
            y.reverse();
            dy.reverse();
        }
        Self { t, y, dy, n }
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn t_range(&self) -> (f64, f64) {
        (self.t[0], self.t[self.t.len() - 1])
    }

    /// Euclidean radii `e^t` spanned by the profile.
    pub fn rho_range(&self) -> (f64, f64) {
        let (lo, hi) = self.t_range();
        (lo.exp(), hi.exp())
    }

    /// `(y, y')` at `t` by cubic Hermite interpolation between samples.
    pub fn eval(&self, t: f64) -> Result<(f64, f64)> {
        let (lo, hi) = self.t_range();
        if !(t >= lo && t <= hi) {
            return Err(Error::domain(format!("t = {t} outside profile range [{lo}, {hi}]")));
        }
        let i = match self.t.partition_point(|&s| s <= t) {
            0 => 0,
            k if k >= self.len() => self.len() - 2,
            k => k - 1,
        };
        let (t0, t1) = (self.t[i], self.t[i + 1]);
        let h = t1 - t0;
        let s = (t - t0) / h;
        let d2_0 = ode_rhs(t0, self.y[i], self.dy[i], self.n)?;
        let d2_1 = ode_rhs(t1, self.y[i + 1], self.dy[i + 1], self.n)?;
        let y = hermite(s, h, self.y[i], self.dy[i], self.y[i + 1], self.dy[i + 1]);
        let dy = hermite(s, h, self.dy[i], d2_0, self.dy[i + 1], d2_1);
        Ok((y, dy))
    }

    /// `y(t)` by quintic Hermite interpolation of `(y, y', y'')`, with `y''`
    /// taken from the ODE. The interpolant is C², so finite-difference second
    /// derivatives of it stay well-behaved across sample points.
    pub fn eval_c2(&self, t: f64) -> Result<f64> {
        let (lo, hi) = self.t_range();
        if !(t >= lo && t <= hi) {
            return Err(Error::domain(format!("t = {t} outside profile range [{lo}, {hi}]")));
        }
        let i = match self.t.partition_point(|&s| s <= t) {
            0 => 0,
            k if k >= self.len() => self.len() - 2,
            k => k - 1,
        };
        let (t0, t1) = (self.t[i], self.t[i + 1]);
        let h = t1 - t0;
        let s = (t - t0) / h;
        let d2_0 = ode_rhs(t0, self.y[i], self.dy[i], self.n)?;
        let d2_1 = ode_rhs(t1, self.y[i + 1], self.dy[i + 1], self.n)?;
        let (s2, s3) = (s * s, s * s * s);
        let (s4, s5) = (s3 * s, s3 * s2);
        let h0 = 1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5;
        let h1 = s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5;
        let h2 = 0.5 * (s2 - 3.0 * s3 + 3.0 * s4 - s5);
        let h3 = 0.5 * (s3 - 2.0 * s4 + s5);
        let h4 = -4.0 * s3 + 7.0 * s4 - 3.0 * s5;
        let h5 = 10.0 * s3 - 15.0 * s4 + 6.0 * s5;
        Ok(h0 * self.y[i]
            + h1 * h * self.dy[i]
            + h2 * h * h * d2_0
            + h5 * self.y[i + 1]
            + h4 * h * self.dy[i + 1]
            + h3 * h * h * d2_1)
    }

    /// Image radius `r(rho) = tanh(y(ln rho) / 2)` and `dr/drho`.
    pub fn radius_at(&self, rho: f64) -> Result<(f64, f64)> {
        let (y, dy) = self.eval(rho.ln())?;
        let r = euclidean_radius(y);
        // dr/drho = (1 - r^2)/2 * y'(t) / rho
        Ok((r, 0.5 * (1.0 - r * r) * dy / rho))
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.y.windows(2).all(|w| w[0] < w[1])
    }

    /// Strictly increasing, and interior samples stay strictly between the
    /// boundary values.
    pub fn is_proper_candidate(&self) -> bool {
        let (first, last) = (self.y[0], self.y[self.len() - 1]);
        self.is_strictly_increasing() && self.y[1..self.len() - 1].iter().all(|&v| v > first && v < last)
    }

    /// Resamples onto `count` equally spaced points in `t`.
    pub fn resample(&self, count: usize) -> Result<Self> {
        let count = count.max(2);
        let (lo, hi) = self.t_range();
        let mut t = Vec::with_capacity(count);
        let mut y = Vec::with_capacity(count);
        let mut dy = Vec::with_capacity(count);
        for i in 0..count {
            let s = if i + 1 == count { hi } else { lo + (hi - lo) * i as f64 / (count - 1) as f64 };
            let (v, d) = self.eval(s)?;
            t.push(s);
            y.push(v);
            dy.push(d);
        }
        Ok(Self { t, y, dy, n: self.n })
    }
}

fn hermite(s: f64, h: f64, p0: f64, m0: f64, p1: f64, m1: f64) -> f64 {
    let s2 = s * s;
    let s3 = s2 * s;
    (2.0 * s3 - 3.0 * s2 + 1.0) * p0
        + (s3 - 2.0 * s2 + s) * h * m0
        + (-2.0 * s3 + 3.0 * s2) * p1
        + (s3 - s2) * h * m1
}

fn check_interval(t0: f64, t1: f64) -> Result<()> {
    if !(t0.is_finite() && t1.is_finite()) {
        return Err(Error::domain("non-finite integration bounds"));
    }
    if t0 == 0.0 || t1 == 0.0 || (t0 < 0.0) != (t1 < 0.0) {
        return Err(Error::Singularity(format!("interval [{t0}, {t1}] reaches t = 0")));
    }
    Ok(())
}

fn check_dim(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::domain(format!("dimension {n} < 2")));
    }
    Ok(())
}

/// Adaptive Dormand–Prince 5(4) solution from `(t0, y0, dy0)` to `t1`, with
/// absolute and relative tolerance `tol` per unit step.
pub fn integrate_ivp(t0: f64, y0: f64, dy0: f64, t1: f64, tol: f64, n: usize) -> Result<RadialProfile> {
    integrate_ivp_with(t0, y0, dy0, t1, n, &IvpOptions::with_tol(tol))
}

pub fn integrate_ivp_with(
    t0: f64,
    y0: f64,
    dy0: f64,
    t1: f64,
    n: usize,
    opts: &IvpOptions,
) -> Result<RadialProfile> {
    check_dim(n)?;
    check_interval(t0, t1)?;
    let traj = integrator::adaptive(&system(n), t0, [y0, dy0], t1, opts)?;
    Ok(RadialProfile::from_trajectory(traj, n))
}

/// Same method with `steps` equal steps and no error control, for
/// convergence-order studies.
pub fn integrate_fixed_step(t0: f64, y0: f64, dy0: f64, t1: f64, steps: usize, n: usize) -> Result<RadialProfile> {
    check_dim(n)?;
    check_interval(t0, t1)?;
    let traj = integrator::fixed(&system(n), t0, [y0, dy0], t1, steps)?;
    Ok(RadialProfile::from_trajectory(traj, n))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingOptions {
    pub ivp: IvpOptions,
    /// Target for `|y(ln b) - beta'|`.
    pub boundary_tol: f64,
    /// First upper end of the slope bracket; doubled until overshoot.
    pub initial_slope_max: f64,
    pub max_doublings: usize,
    pub max_bisections: usize,
}

impl Default for ShootingOptions {
    fn default() -> Self {
        Self {
            ivp: IvpOptions::default(),
            boundary_tol: 1e-10,
            initial_slope_max: 1.0,
            max_doublings: 60,
            max_bisections: 200,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ShootingResult {
    pub profile: RadialProfile,
    pub initial_slope: f64,
    /// `y(ln b) - beta'`.
    pub residual: f64,
    pub converged: bool,
    pub iterations: usize,
    pub proper_candidate: bool,
}

enum Shot {
    Value(RadialProfile, f64),
    Blowup(f64),
}

fn shoot(t_a: f64, t_b: f64, alpha_h: f64, slope: f64, n: usize, opts: &IvpOptions) -> Result<Shot> {
    match integrate_ivp_with(t_a, alpha_h, slope, t_b, n, opts) {
        Ok(p) => {
            let end = p.y[p.len() - 1];
            Ok(Shot::Value(p, end))
        }
        Err(Error::Divergence { t }) => Ok(Shot::Blowup(t)),
        Err(e) => Err(e),
    }
}

/// `y(ln b)` for the IVP `y(ln a) = alpha'`, `y'(ln a) = slope`.
pub fn terminal_value(a_h: f64, b_h: f64, alpha_h: f64, slope: f64, n: usize, opts: &IvpOptions) -> Result<f64> {
    let (t_a, t_b) = log_radii(a_h, b_h)?;
    match shoot(t_a, t_b, alpha_h, slope, n, opts)? {
        Shot::Value(_, v) => Ok(v),
        Shot::Blowup(t) => Err(Error::Divergence { t }),
    }
}

fn log_radii(a_h: f64, b_h: f64) -> Result<(f64, f64)> {
    if !(a_h > 0.0 && a_h < b_h && b_h.is_finite()) {
        return Err(Error::domain(format!("need 0 < a' < b' < inf, got {a_h}, {b_h}")));
    }
    let (t_a, t_b) = (euclidean_radius(a_h).ln(), euclidean_radius(b_h).ln());
    if !(t_a < t_b && t_b < 0.0) {
        return Err(Error::domain("annulus radii are not separated in double precision"));
    }
    Ok((t_a, t_b))
}

pub fn solve_radial_bvp(a_h: f64, b_h: f64, alpha_h: f64, beta_h: f64, n: usize) -> Result<ShootingResult> {
    solve_radial_bvp_with(a_h, b_h, alpha_h, beta_h, n, &ShootingOptions::default())
}

/// Shoots on `y'(ln a) in [0, S]`, doubling `S` until the terminal value
/// overshoots `beta'` (blow-up counts as overshoot), then bisects.
pub fn solve_radial_bvp_with(
    a_h: f64,
    b_h: f64,
    alpha_h: f64,
    beta_h: f64,
    n: usize,
    opts: &ShootingOptions,
) -> Result<ShootingResult> {
    check_dim(n)?;
    let (t_a, t_b) = log_radii(a_h, b_h)?;
    if !(alpha_h > 0.0 && alpha_h < beta_h && beta_h.is_finite()) {
        return Err(Error::domain(format!(
            "need 0 < alpha' < beta' < inf, got {alpha_h}, {beta_h}"
        )));
    }
    let finish = |profile: RadialProfile, slope: f64, end: f64, iterations: usize| {
        let residual = end - beta_h;
        ShootingResult {
            proper_candidate: profile.is_proper_candidate(),
            converged: residual.abs() < opts.boundary_tol,
            profile,
            initial_slope: slope,
            residual,
            iterations,
        }
    };

    let mut iterations = 1;
    let lower = match shoot(t_a, t_b, alpha_h, 0.0, n, &opts.ivp)? {
        Shot::Blowup(t) => return Err(Error::Divergence { t }),
        Shot::Value(p, end) => {
            if (end - beta_h).abs() < opts.boundary_tol {
                return Ok(finish(p, 0.0, end, iterations));
            }
            if end > beta_h {
                return Err(Error::NoSolution(format!(
                    "zero initial slope already reaches y(ln b) = {end} > beta' = {beta_h}"
                )));
            }
            end
        }
    };

    let mut lo = 0.0;
    let mut hi = opts.initial_slope_max;
    let mut best: Option<(RadialProfile, f64, f64)> = None;
    let mut blowup_at = None;
    let mut doublings = 0;
    loop {
        iterations += 1;
        match shoot(t_a, t_b, alpha_h, hi, n, &opts.ivp)? {
            Shot::Blowup(t) => {
                blowup_at = Some(t);
                break;
            }
            Shot::Value(p, end) => {
                if (end - beta_h).abs() < opts.boundary_tol {
                    return Ok(finish(p, hi, end, iterations));
                }
                if end > beta_h {
                    best = Some((p, hi, end));
                    break;
                }
                lo = hi;
            }
        }
        doublings += 1;
        if doublings > opts.max_doublings {
            return Err(Error::NoSolution(format!(
                "terminal value stays below beta' = {beta_h} for slopes up to {hi} (y(ln b) >= {lower} at slope 0)"
            )));
        }
        hi *= 2.0;
    }

    for _ in 0..opts.max_bisections {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        match shoot(t_a, t_b, alpha_h, mid, n, &opts.ivp)? {
            Shot::Blowup(t) => {
                blowup_at = Some(t);
                hi = mid;
            }
            Shot::Value(p, end) => {
                let done = (end - beta_h).abs() < opts.boundary_tol;
                if end > beta_h {
                    hi = mid;
                } else {
                    lo = mid;
                }
                let better = best.as_ref().is_none_or(|(_, _, e)| (end - beta_h).abs() < (e - beta_h).abs());
                if better {
                    best = Some((p, mid, end));
                }
                if done {
                    break;
                }
            }
        }
    }

    match best {
        Some((p, slope, end)) => {
            let result = finish(p, slope, end, iterations);
            if !result.converged && result.residual < 0.0 {
                if let Some(t) = blowup_at {
                    // Values just below the blow-up threshold never reach beta'.
                    return Err(Error::Divergence { t });
                }
            }
            Ok(result)
        }
        None => match blowup_at {
            Some(t) => Err(Error::Divergence { t }),
            None => Err(Error::NoSolution("bisection produced no finite shot".into())),
        },
    }
}

/// The Euclidean radial harmonic map
/// `f(x) = [(1 - a^{n-1} alpha)/(1 - a^n) + (a^{n-1} alpha - a^n)/((1 - a^n)|x|^n)] x`
/// from `A(a, 1)` onto `A(alpha, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EuclideanRadialMap {
    pub a: f64,
    pub alpha: f64,
    pub n: usize,
    linear: f64,
    singular: f64,
}

impl EuclideanRadialMap {
    pub fn linear_coefficient(&self) -> f64 {
        self.linear
    }

    pub fn singular_coefficient(&self) -> f64 {
        self.singular
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: x.len() });
        }
        let rho = x.iter().map(|c| c * c).sum::<f64>().sqrt();
        if rho == 0.0 {
            return Err(Error::domain("the radial map is undefined at the origin"));
        }
        let scale = self.linear + self.singular / rho.powi(self.n as i32);
        Ok(x.iter().map(|c| scale * c).collect())
    }
}

pub fn euclidean_radial_map(a: f64, alpha: f64, n: usize) -> Result<EuclideanRadialMap> {
    check_dim(n)?;
    if !(a > 0.0 && a < 1.0 && alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!("need a, alpha in (0, 1), got {a}, {alpha}")));
    }
    let an = a.powi(n as i32);
    let an1_alpha = a.powi(n as i32 - 1) * alpha;
    Ok(EuclideanRadialMap {
        a,
        alpha,
        n,
        linear: (1.0 - an1_alpha) / (1.0 - an),
        singular: (an1_alpha - an) / (1.0 - an),
    })
}

/// `2a / (n - 1 + a^n)`.
pub fn euclidean_nitsche_bound(a: f64, n: usize) -> Result<f64> {
    check_dim(n)?;
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::domain(format!("need 0 < a <= 1, got {a}")));
    }
    Ok(2.0 * a / ((n - 1) as f64 + a.powi(n as i32)))
}
