//! Integrals of `|D Theta|_2^{n-1}` over parametrized separating surfaces in
//! `R^3` and over annuli, compared with the lower bounds
//! `(n-1)^{(n-1)/2} omega_{n-1}` and `(n-1)^{(n-1)/2} (b-a) omega_{n-1}`.
//!
//! Surfaces are charts over a rectangle; the rule is Gauss–Legendre in the
//! first parameter and, for periodic second parameters, the trapezoid rule.
//! Whether a surface actually separates the two boundary components is the
//! caller's responsibility.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fd::FdOptions;
use crate::maps::MapField;
use crate::tension::theta_norm_sq;

pub type Vec3 = [f64; 3];

/// Relative slack used by the bound checks.
pub const BOUND_TOL: f64 = 1e-8;

/// Surface measure `omega_{n-1} = 2 pi^{n/2} / Gamma(n/2)` of `S^{n-1}`.
pub fn sphere_measure(n: usize) -> f64 {
    use std::f64::consts::PI;
    // Gamma at integers and half-integers by upward recursion.
    let mut gamma = if n.is_multiple_of(2) { 1.0 } else { PI.sqrt() };
    let mut x = if n.is_multiple_of(2) { 1.0 } else { 0.5 };
    while x < 0.5 * n as f64 - 1e-9 {
        gamma *= x;
        x += 1.0;
    }
    2.0 * PI.powf(0.5 * n as f64) / gamma
}

/// Nodes and weights of the `order`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(order: usize) -> Vec<(f64, f64)> {
    let n = order;
    let mut out = vec![(0.0, 0.0); n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            let pm1 = p0;
            dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out[i] = (-x, w);
        out[n - 1 - i] = (x, w);
    }
    if n % 2 == 1 {
        out[n / 2].0 = 0.0;
    }
    out
}

pub trait ParamSurface: Send + Sync {
    /// Parameter rectangle `[s0, s1] x [t0, t1]`.
    fn bounds(&self) -> ([f64; 2], [f64; 2]);

    fn point(&self, s: f64, t: f64) -> Vec3;

    /// Partial derivatives `(dg/ds, dg/dt)`.
    fn tangents(&self, s: f64, t: f64) -> (Vec3, Vec3);

    /// Whether the chart is periodic in `t`.
    fn periodic_t(&self) -> bool {
        true
    }
}

/// Ellipsoid `c + (A sin s cos t, B sin s sin t, C cos s)`; a sphere when the
/// semi-axes agree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ellipsoid {
    pub center: Vec3,
    pub axes: Vec3,
}

impl Ellipsoid {
    pub fn sphere(radius: f64) -> Self {
        Self {
            center: [0.0; 3],
            axes: [radius; 3],
        }
    }
}

impl ParamSurface for Ellipsoid {
    fn bounds(&self) -> ([f64; 2], [f64; 2]) {
        ([0.0, std::f64::consts::PI], [0.0, std::f64::consts::TAU])
    }

    fn point(&self, s: f64, t: f64) -> Vec3 {
        let [a, b, c] = self.axes;
        [
            self.center[0] + a * s.sin() * t.cos(),
            self.center[1] + b * s.sin() * t.sin(),
            self.center[2] + c * s.cos(),
        ]
    }

    fn tangents(&self, s: f64, t: f64) -> (Vec3, Vec3) {
        let [a, b, c] = self.axes;
        (
            [a * s.cos() * t.cos(), b * s.cos() * t.sin(), -c * s.sin()],
            [-a * s.sin() * t.sin(), b * s.sin() * t.cos(), 0.0],
        )
    }
}

/// A user chart given by closures for the point and its tangents.
pub struct ChartSurface<P, T> {
    pub s_range: [f64; 2],
    pub t_range: [f64; 2],
    pub periodic: bool,
    pub point: P,
    pub tangents: T,
}

impl<P, T> ParamSurface for ChartSurface<P, T>
where
    P: Fn(f64, f64) -> Vec3 + Send + Sync,
    T: Fn(f64, f64) -> (Vec3, Vec3) + Send + Sync,
{
    fn bounds(&self) -> ([f64; 2], [f64; 2]) {
        (self.s_range, self.t_range)
    }

    fn point(&self, s: f64, t: f64) -> Vec3 {
        (self.point)(s, t)
    }

    fn tangents(&self, s: f64, t: f64) -> (Vec3, Vec3) {
        (self.tangents)(s, t)
    }

    fn periodic_t(&self) -> bool {
        self.periodic
    }
}

fn area_element(surf: &dyn ParamSurface, s: f64, t: f64) -> Result<f64> {
    let (u, v) = surf.tangents(s, t);
    let c = [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ];
    let da = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
    if !(da > 0.0) {
        return Err(Error::Regularity { s, t });
    }
    Ok(da)
}

fn rule(range: [f64; 2], order: usize, periodic: bool) -> Vec<(f64, f64)> {
    let len = range[1] - range[0];
    if periodic {
        let m = 2 * order;
        let w = len / m as f64;
        (0..m).map(|k| (range[0] + len * k as f64 / m as f64, w)).collect()
    } else {
        gauss_legendre(order)
            .into_iter()
            .map(|(x, w)| (range[0] + 0.5 * len * (x + 1.0), 0.5 * len * w))
            .collect()
    }
}

/// `int_P f dA` by a product rule with `order` Gauss–Legendre nodes in `s` and
/// `2 order` trapezoid nodes in a periodic `t`. Summation order is fixed.
pub fn surface_integral<F>(f: F, surf: &dyn ParamSurface, order: usize) -> Result<f64>
where
    F: Fn(&Vec3) -> Result<f64>,
{
    if order < 4 {
        return Err(Error::domain(format!("quadrature order {order} < 4")));
    }
    let (s_range, t_range) = surf.bounds();
    let s_rule = rule(s_range, order, false);
    let t_rule = rule(t_range, order, surf.periodic_t());
    let mut total = 0.0;
    for &(s, ws) in &s_rule {
        let mut row = 0.0;
        for &(t, wt) in &t_rule {
            row += wt * f(&surf.point(s, t))? * area_element(surf, s, t)?;
        }
        total += ws * row;
    }
    Ok(total)
}

/// Finite-difference settings used for `|D Theta|`.
pub fn integrand_fd() -> FdOptions {
    FdOptions {
        step: 1e-4,
        richardson: true,
    }
}

/// The field `x -> |D Theta(x)|_2^{n-1}`.
pub fn theta_integrand(u: &dyn MapField) -> impl Fn(&Vec3) -> Result<f64> + '_ {
    let fd = integrand_fd();
    let power = 0.5 * (u.dim() as f64 - 1.0);
    move |x: &Vec3| Ok(theta_norm_sq(u, x, &fd)?.powf(power))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundCheck {
    pub integral: f64,
    pub bound: f64,
    pub holds: bool,
}

impl BoundCheck {
    fn new(integral: f64, bound: f64) -> Self {
        Self {
            integral,
            bound,
            holds: integral >= bound * (1.0 - BOUND_TOL),
        }
    }

    pub fn relative_excess(&self) -> f64 {
        self.integral / self.bound - 1.0
    }
}

fn sphere_bound(n: usize) -> f64 {
    let m = (n - 1) as f64;
    m.powf(0.5 * m) * sphere_measure(n)
}

fn check_three(u: &dyn MapField) -> Result<()> {
    if u.dim() != 3 {
        return Err(Error::domain("surface integrals are implemented for n = 3"));
    }
    Ok(())
}

pub fn check_surface_bound(u: &dyn MapField, surf: &dyn ParamSurface, order: usize) -> Result<BoundCheck> {
    check_three(u)?;
    let integral = surface_integral(theta_integrand(u), surf, order)?;
    Ok(BoundCheck::new(integral, sphere_bound(3)))
}

/// Slices `A(a, b)` into concentric spheres: `int_a^b int_{|x| = t} ... dA dt`.
pub fn check_volume_bound(u: &dyn MapField, a: f64, b: f64, order: usize) -> Result<BoundCheck> {
    check_three(u)?;
    if !(a > 0.0 && a <= b) {
        return Err(Error::domain(format!("need 0 < a <= b, got {a}, {b}")));
    }
    let field = theta_integrand(u);
    let mut integral = 0.0;
    if b > a {
        for (t, w) in rule([a, b], order, false) {
            integral += w * surface_integral(&field, &Ellipsoid::sphere(t), order)?;
        }
    }
    Ok(BoundCheck::new(integral, sphere_bound(3) * (b - a)))
}
