//! Poincaré ball model of hyperbolic space.
//!
//! Points live in the open unit ball `B^n` with the metric
//! `4|dx|^2 / (1 - |x|^2)^2`. Distances use the bracket
//! `[x, y]^2 = 1 + |x|^2 |y|^2 - 2<x, y>`, with
//! `tanh(d_h(x, y) / 2) = |x - y| / [x, y]`.
//!
//! Annuli are described in two radius systems: Euclidean radii `a, b, alpha, beta`
//! in `(0, 1)` and hyperbolic radii `a' = 2 atanh(a)` and so on. The hyperbolic
//! fields carry an `_h` suffix.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default dimension of the ball.
pub const DEFAULT_DIM: usize = 3;

/// Points with `|x| >= 1 - BOUNDARY_MARGIN` are rejected.
pub const BOUNDARY_MARGIN: f64 = 1e-12;

pub(crate) fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub(crate) fn norm_sq(x: &[f64]) -> f64 {
    dot(x, x)
}

pub(crate) fn norm(x: &[f64]) -> f64 {
    norm_sq(x).sqrt()
}

fn check_dims(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    Ok(())
}

/// A point of the open unit ball.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallPoint(Vec<f64>);

impl BallPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::domain(format!(
                "ball dimension must be at least 2, got {}",
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::domain("non-finite coordinate"));
        }
        let n = norm(&coords);
        if n >= 1.0 - BOUNDARY_MARGIN {
            return Err(Error::BoundaryDegenerate { norm: n });
        }
        Ok(Self(coords))
    }

    pub fn origin(dim: usize) -> Self {
        Self(vec![0.0; dim.max(2)])
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Euclidean radius `rho = |x|`.
    pub fn radius(&self) -> f64 {
        norm(&self.0)
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl AsRef<[f64]> for BallPoint {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// `[x, y] = sqrt(1 + |x|^2 |y|^2 - 2<x, y>)`.
pub fn bracket(x: &BallPoint, y: &BallPoint) -> Result<f64> {
    check_dims(x.coords(), y.coords())?;
    Ok(bracket_raw(x.coords(), y.coords()))
}

fn bracket_raw(x: &[f64], y: &[f64]) -> f64 {
    // [x,y]^2 = |x - y|^2 + (1 - |x|^2)(1 - |y|^2); this form cannot go negative
    // and makes [x,y] >= |x - y| hold in floating point as well.
    let diff: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
    (diff + (1.0 - norm_sq(x)) * (1.0 - norm_sq(y))).sqrt()
}

/// Hyperbolic distance `2 atanh(|x - y| / [x, y])`.
pub fn hyp_distance(x: &BallPoint, y: &BallPoint) -> Result<f64> {
    check_dims(x.coords(), y.coords())?;
    let diff: Vec<f64> = x.coords().iter().zip(y.coords()).map(|(a, b)| a - b).collect();
    let d = norm(&diff);
    if d == 0.0 {
        return Ok(0.0);
    }
    Ok(2.0 * (d / bracket_raw(x.coords(), y.coords())).atanh())
}

/// Geodesic polar coordinates `(R, omega)` about the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeodesicPolar {
    /// Hyperbolic distance to the origin.
    pub radius: f64,
    /// Unit direction in `S^{n-1}`.
    pub omega: Vec<f64>,
}

pub fn to_geodesic_polar(x: &BallPoint) -> Result<GeodesicPolar> {
    let rho = x.radius();
    if rho == 0.0 {
        return Err(Error::UndefinedDirection);
    }
    Ok(GeodesicPolar {
        radius: 2.0 * rho.atanh(),
        omega: x.coords().iter().map(|c| c / rho).collect(),
    })
}

pub fn from_geodesic_polar(p: &GeodesicPolar) -> Result<BallPoint> {
    if !(p.radius >= 0.0) || !p.radius.is_finite() {
        return Err(Error::domain(format!("hyperbolic radius {} must be finite and >= 0", p.radius)));
    }
    let len = norm(&p.omega);
    if (len - 1.0).abs() > 1e-12 {
        return Err(Error::domain(format!("direction has norm {len}, expected 1")));
    }
    let rho = (0.5 * p.radius).tanh();
    BallPoint::new(p.omega.iter().map(|w| rho * w).collect())
}

/// Euclidean radius of the sphere at hyperbolic distance `r_h` from the origin.
pub fn euclidean_radius(r_h: f64) -> f64 {
    (0.5 * r_h).tanh()
}

/// Hyperbolic radius `2 atanh(rho)` of the sphere of Euclidean radius `rho`.
pub fn hyperbolic_radius(rho: f64) -> f64 {
    2.0 * rho.atanh()
}

/// An isometry `x -> Q T_c(x)` of the ball, where
///
/// `T_c(x) = ((1 - |c|^2)(x - c) - |x - c|^2 c) / [x, c]^2`
///
/// sends `c` to the origin and `Q` is orthogonal.
#[derive(Debug, Clone, PartialEq)]
pub struct MobiusMap {
    center: Vec<f64>,
    /// Row-major `n x n` orthogonal matrix.
    rotation: Vec<f64>,
}

impl MobiusMap {
    pub fn identity(dim: usize) -> Self {
        let mut rotation = vec![0.0; dim * dim];
        for i in 0..dim {
            rotation[i * dim + i] = 1.0;
        }
        Self {
            center: vec![0.0; dim],
            rotation,
        }
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    /// Post-compose with the orthogonal matrix `q` (row-major, `n x n`).
    pub fn then_rotate(mut self, q: &[f64]) -> Result<Self> {
        let n = self.dim();
        if q.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: q.len(),
            });
        }
        for i in 0..n {
            for j in 0..n {
                let qq: f64 = (0..n).map(|k| q[k * n + i] * q[k * n + j]).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                if (qq - target).abs() > 1e-10 {
                    return Err(Error::domain("rotation matrix is not orthogonal"));
                }
            }
        }
        let mut product = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                product[i * n + j] = (0..n).map(|k| q[i * n + k] * self.rotation[k * n + j]).sum();
            }
        }
        self.rotation = product;
        Ok(self)
    }

    pub fn apply(&self, x: &BallPoint) -> Result<BallPoint> {
        check_dims(&self.center, x.coords())?;
        BallPoint::new(self.apply_raw(x.coords()))
    }

    /// Evaluates the map on raw coordinates. The formula extends to the
    /// whole of `R^n` minus the reflection of `c` in the unit sphere.
    pub fn apply_raw(&self, x: &[f64]) -> Vec<f64> {
        let y = translate(&self.center, x);
        let n = self.dim();
        (0..n)
            .map(|i| (0..n).map(|k| self.rotation[i * n + k] * y[k]).sum())
            .collect()
    }

    pub fn apply_inverse(&self, y: &BallPoint) -> Result<BallPoint> {
        check_dims(&self.center, y.coords())?;
        let n = self.dim();
        let z: Vec<f64> = (0..n)
            .map(|i| (0..n).map(|k| self.rotation[k * n + i] * y.coords()[k]).sum())
            .collect();
        let minus_c: Vec<f64> = self.center.iter().map(|c| -c).collect();
        BallPoint::new(translate(&minus_c, &z))
    }
}

fn translate(c: &[f64], x: &[f64]) -> Vec<f64> {
    let c2 = norm_sq(c);
    let diff: Vec<f64> = x.iter().zip(c).map(|(a, b)| a - b).collect();
    let d2 = norm_sq(&diff);
    let denom = 1.0 - 2.0 * dot(x, c) + norm_sq(x) * c2;
    diff.iter()
        .zip(c)
        .map(|(d, ci)| ((1.0 - c2) * d - d2 * ci) / denom)
        .collect()
}

/// The isometry sending `c` to the origin, with no extra rotation.
pub fn mobius_to_origin(c: &BallPoint) -> Result<MobiusMap> {
    let n = c.radius();
    if n >= 1.0 - BOUNDARY_MARGIN {
        return Err(Error::BoundaryDegenerate { norm: n });
    }
    let mut map = MobiusMap::identity(c.dim());
    map.center = c.coords().to_vec();
    Ok(map)
}

/// A hyperbolic annulus `{x : p < d_h(x, center) < q}` together with the
/// isometry that makes it concentric about the origin.
#[derive(Debug, Clone)]
pub struct HyperbolicAnnulus {
    pub center: BallPoint,
    pub inner_h: f64,
    pub outer_h: f64,
    /// `tanh(inner_h / 2)`.
    pub inner: f64,
    /// `tanh(outer_h / 2)`.
    pub outer: f64,
    pub to_origin: MobiusMap,
}

impl HyperbolicAnnulus {
    /// Image of `x` under the normalizing isometry.
    pub fn normalize(&self, x: &BallPoint) -> Result<BallPoint> {
        self.to_origin.apply(x)
    }
}

pub fn normalize_annulus(center: &BallPoint, p: f64, q: f64) -> Result<HyperbolicAnnulus> {
    if !(p > 0.0 && p < q && q.is_finite()) {
        return Err(Error::domain(format!("need 0 < p < q < inf, got p = {p}, q = {q}")));
    }
    Ok(HyperbolicAnnulus {
        center: center.clone(),
        inner_h: p,
        outer_h: q,
        inner: euclidean_radius(p),
        outer: euclidean_radius(q),
        to_origin: mobius_to_origin(center)?,
    })
}

/// Domain annulus `A(a, b)` and target annulus `A(alpha, beta)` in both radius systems.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnulusPair {
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
    pub beta: f64,
    pub a_h: f64,
    pub b_h: f64,
    pub alpha_h: f64,
    pub beta_h: f64,
}

impl AnnulusPair {
    pub fn from_euclidean(a: f64, b: f64, alpha: f64, beta: f64) -> Result<Self> {
        check_radii(a, b, "a", "b")?;
        check_radii(alpha, beta, "alpha", "beta")?;
        Ok(Self {
            a,
            b,
            alpha,
            beta,
            a_h: hyperbolic_radius(a),
            b_h: hyperbolic_radius(b),
            alpha_h: hyperbolic_radius(alpha),
            beta_h: hyperbolic_radius(beta),
        })
    }

    pub fn from_hyperbolic(a_h: f64, b_h: f64, alpha_h: f64, beta_h: f64) -> Result<Self> {
        for (lo, hi, name) in [(a_h, b_h, "a', b'"), (alpha_h, beta_h, "alpha', beta'")] {
            if !(lo > 0.0 && lo < hi && hi.is_finite()) {
                return Err(Error::domain(format!(
                    "hyperbolic radii {name} must satisfy 0 < inner < outer < inf, got {lo}, {hi}"
                )));
            }
        }
        Ok(Self {
            a: euclidean_radius(a_h),
            b: euclidean_radius(b_h),
            alpha: euclidean_radius(alpha_h),
            beta: euclidean_radius(beta_h),
            a_h,
            b_h,
            alpha_h,
            beta_h,
        })
    }
}

pub(crate) fn check_radii(lo: f64, hi: f64, lo_name: &str, hi_name: &str) -> Result<()> {
    if !(lo > 0.0 && lo < hi && hi < 1.0) {
        return Err(Error::domain(format!(
            "need 0 < {lo_name} < {hi_name} < 1, got {lo_name} = {lo}, {hi_name} = {hi}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[f64]) -> BallPoint {
        BallPoint::new(v.to_vec()).unwrap()
    }

    #[test]
    fn bracket_examples() {
        let x = p(&[0.5, 0.0, 0.0]);
        assert_eq!(bracket(&BallPoint::origin(3), &x).unwrap(), 1.0);
        assert!((bracket(&x, &x).unwrap() - 0.75).abs() < 1e-15);
        assert!(matches!(
            bracket(&x, &p(&[0.1, 0.1])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn distance_from_origin_is_ln3() {
        let d = hyp_distance(&p(&[0.5, 0.0, 0.0]), &BallPoint::origin(3)).unwrap();
        assert!((d - 3f64.ln()).abs() < 1e-15);
        let x = p(&[0.1, -0.3, 0.2]);
        assert_eq!(hyp_distance(&x, &x).unwrap(), 0.0);
    }

    #[test]
    fn rejects_boundary_points() {
        assert!(matches!(
            BallPoint::new(vec![1.0, 0.0, 0.0]),
            Err(Error::BoundaryDegenerate { .. })
        ));
        assert!(BallPoint::new(vec![1.0 - 1e-13, 0.0]).is_err());
        assert!(BallPoint::new(vec![0.5]).is_err());
    }

    #[test]
    fn geodesic_polar_examples() {
        let g = to_geodesic_polar(&p(&[0.5, 0.0, 0.0])).unwrap();
        assert!((g.radius - 3f64.ln()).abs() < 1e-15);
        assert_eq!(g.omega, vec![1.0, 0.0, 0.0]);
        assert_eq!(to_geodesic_polar(&BallPoint::origin(3)), Err(Error::UndefinedDirection));

        let mut last = 0.0;
        for k in 1..60 {
            let rho = 1.0 - 0.5f64.powi(k / 2 + 1) - 1e-3 / k as f64;
            let r = to_geodesic_polar(&p(&[0.0, rho, 0.0])).unwrap().radius;
            assert!(r >= last);
            last = r;
        }
    }

    #[test]
    fn mobius_at_origin_is_identity() {
        let t = mobius_to_origin(&BallPoint::origin(3)).unwrap();
        let x = p(&[0.3, -0.2, 0.4]);
        assert_eq!(t.apply(&x).unwrap(), x);
        let c = p(&[0.3, 0.1, -0.5]);
        let t = mobius_to_origin(&c).unwrap();
        let zero = t.apply(&c).unwrap();
        assert!(zero.radius() < 1e-15);
        let back = t.apply_inverse(&zero).unwrap();
        for (u, v) in back.coords().iter().zip(c.coords()) {
            assert!((u - v).abs() < 1e-15);
        }
    }

    #[test]
    fn annulus_normalization() {
        let ann = normalize_annulus(&BallPoint::origin(3), 3f64.ln(), 2.0).unwrap();
        assert!((ann.inner - 0.5).abs() < 1e-15);
        let tiny = normalize_annulus(&BallPoint::origin(3), 1e-9, 1.0).unwrap();
        assert!(tiny.inner < 1e-9);
        assert!(normalize_annulus(&BallPoint::origin(3), 2.0, 1.0).is_err());
        assert!(normalize_annulus(&BallPoint::origin(3), 1.0, 1.0).is_err());
    }

    #[test]
    fn annulus_pair_radius_systems_agree() {
        let pair = AnnulusPair::from_euclidean(0.2, 0.8, 0.3, 0.6).unwrap();
        let back = AnnulusPair::from_hyperbolic(pair.a_h, pair.b_h, pair.alpha_h, pair.beta_h).unwrap();
        for (u, v) in [(pair.a, back.a), (pair.b, back.b), (pair.alpha, back.alpha), (pair.beta, back.beta)] {
            assert!((u - v).abs() < 1e-14);
        }
        assert!(AnnulusPair::from_euclidean(0.5, 0.4, 0.1, 0.2).is_err());
        assert!(AnnulusPair::from_euclidean(0.1, 0.4, 0.2, 1.0).is_err());
    }
}
