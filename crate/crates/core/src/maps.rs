//! Maps `u = r Theta` between subsets of `R^n`, as consumed by the tension and
//! quadrature modules.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{norm, MobiusMap};
use crate::radial::{EuclideanRadialMap, RadialProfile};

pub trait MapField: Send + Sync {
    fn dim(&self) -> usize;

    fn eval(&self, x: &[f64]) -> Result<Vec<f64>>;

    /// Open interval of Euclidean radii `|x|` on which the map may be sampled,
    /// if restricted.
    fn radial_domain(&self) -> Option<(f64, f64)> {
        None
    }

    /// `r(x) = |u(x)|`.
    fn radius(&self, x: &[f64]) -> Result<f64> {
        Ok(norm(&self.eval(x)?))
    }

    /// `Theta(x) = u(x) / |u(x)|`.
    fn direction(&self, x: &[f64]) -> Result<Vec<f64>> {
        let u = self.eval(x)?;
        let r = norm(&u);
        if r == 0.0 {
            return Err(Error::UndefinedDirection);
        }
        Ok(u.iter().map(|c| c / r).collect())
    }
}

fn check_dim(x: &[f64], n: usize) -> Result<()> {
    if x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: x.len() });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy)]
pub struct IdentityMap {
    pub dim: usize,
}

impl MapField for IdentityMap {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(x, self.dim)?;
        Ok(x.to_vec())
    }

    fn radial_domain(&self) -> Option<(f64, f64)> {
        Some((0.0, 1.0))
    }
}

/// `x -> x / |x|^2`, taking the exterior of the unit ball onto the ball.
#[derive(Debug, Clone, Copy)]
pub struct InversionMap {
    pub dim: usize,
}

impl MapField for InversionMap {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(x, self.dim)?;
        let r2: f64 = x.iter().map(|c| c * c).sum();
        if r2 == 0.0 {
            return Err(Error::Singularity("inversion at the origin".into()));
        }
        Ok(x.iter().map(|c| c / r2).collect())
    }

    fn radial_domain(&self) -> Option<(f64, f64)> {
        Some((1.0, f64::INFINITY))
    }
}

#[derive(Debug, Clone)]
pub struct ConstantMap {
    pub value: Vec<f64>,
}

impl MapField for ConstantMap {
    fn dim(&self) -> usize {
        self.value.len()
    }

    fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(x, self.value.len())?;
        Ok(self.value.clone())
    }
}

/// `u(x) = tanh(y(ln |x|) / 2) x / |x|` for a sampled radial profile.
#[derive(Debug, Clone)]
pub struct RadialMap {
    pub profile: RadialProfile,
    pub dim: usize,
}

impl RadialMap {
    pub fn new(profile: RadialProfile) -> Self {
        let dim = profile.n;
        Self { profile, dim }
    }
}

impl MapField for RadialMap {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(x, self.dim)?;
        let rho = norm(x);
        if rho == 0.0 {
            return Err(Error::UndefinedDirection);
        }
        let r = (0.5 * self.profile.eval_c2(rho.ln())?).tanh();
        Ok(x.iter().map(|c| r * c / rho).collect())
    }

    fn radial_domain(&self) -> Option<(f64, f64)> {
        Some(self.profile.rho_range())
    }
}

impl MapField for EuclideanRadialMap {
    fn dim(&self) -> usize {
        self.n
    }

    fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.apply(x)
    }

    fn radial_domain(&self) -> Option<(f64, f64)> {
        Some((0.0, f64::INFINITY))
    }
}

impl MapField for MobiusMap {
    fn dim(&self) -> usize {
        MobiusMap::dim(self)
    }

    fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(x, MobiusMap::dim(self))?;
        Ok(self.apply_raw(x))
    }
}

/// `outer ∘ inner ∘ pre`: post-compose `inner` with `outer` and precompose with `pre`.
#[derive(Clone)]
pub struct Composed {
    pub outer: Option<MobiusMap>,
    pub inner: Arc<dyn MapField>,
    pub pre: Option<MobiusMap>,
}

impl MapField for Composed {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        let x = match &self.pre {
            Some(g) => g.apply_raw(x),
            None => x.to_vec(),
        };
        let u = self.inner.eval(&x)?;
        Ok(match &self.outer {
            Some(f) => f.apply_raw(&u),
            None => u,
        })
    }
}

/// A map given by a closure.
pub struct FnMap<F> {
    pub dim: usize,
    pub f: F,
    pub domain: Option<(f64, f64)>,
}

impl<F> FnMap<F>
where
    F: Fn(&[f64]) -> Result<Vec<f64>> + Send + Sync,
{
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f, domain: None }
    }
}

impl<F> MapField for FnMap<F>
where
    F: Fn(&[f64]) -> Result<Vec<f64>> + Send + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(x, self.dim)?;
        (self.f)(x)
    }

    fn radial_domain(&self) -> Option<(f64, f64)> {
        self.domain
    }
}
