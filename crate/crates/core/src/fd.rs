//! Central finite differences on axis-aligned stencils.

use crate::error::{Error, Result};

/// Step control for the difference stencils.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdOptions {
    pub step: f64,
    /// Combine steps `h` and `h/2` as `(4 D(h/2) - D(h)) / 3`.
    pub richardson: bool,
}

impl Default for FdOptions {
    fn default() -> Self {
        Self {
            step: 1e-4,
            richardson: false,
        }
    }
}

impl FdOptions {
    pub fn with_step(step: f64) -> Self {
        Self { step, ..Self::default() }
    }
}

/// Values of a vector-valued function at `x` and at `x +- h e_i`
/// (and `x +- h/2 e_i` for Richardson).
type Shifted = (Vec<Vec<f64>>, Vec<Vec<f64>>);

pub(crate) struct Stencil {
    h: f64,
    pub center: Vec<f64>,
    plus: Vec<Vec<f64>>,
    minus: Vec<Vec<f64>>,
    half: Option<Shifted>,
}

impl Stencil {
    pub fn sample<F>(f: F, x: &[f64], opts: &FdOptions) -> Result<Self>
    where
        F: Fn(&[f64]) -> Result<Vec<f64>>,
    {
        let h = opts.step;
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::domain(format!("finite-difference step {h} must be positive")));
        }
        let shifted = |delta: f64| -> Result<Shifted> {
            let mut plus = Vec::with_capacity(x.len());
            let mut minus = Vec::with_capacity(x.len());
            let mut y = x.to_vec();
            for i in 0..x.len() {
                y[i] = x[i] + delta;
                plus.push(f(&y)?);
                y[i] = x[i] - delta;
                minus.push(f(&y)?);
                y[i] = x[i];
            }
            Ok((plus, minus))
        };
        let center = f(x)?;
        let (plus, minus) = shifted(h)?;
        let half = if opts.richardson { Some(shifted(0.5 * h)?) } else { None };
        Ok(Self {
            h,
            center,
            plus,
            minus,
            half,
        })
    }

    pub fn dim(&self) -> usize {
        self.plus.len()
    }

    fn combine(&self, coarse: f64, fine: Option<f64>) -> f64 {
        match fine {
            Some(f) => (4.0 * f - coarse) / 3.0,
            None => coarse,
        }
    }

    /// Gradient of `g` composed with the sampled values.
    pub fn grad<G: Fn(&[f64]) -> f64>(&self, g: G) -> Vec<f64> {
        (0..self.dim())
            .map(|i| {
                let coarse = (g(&self.plus[i]) - g(&self.minus[i])) / (2.0 * self.h);
                let fine = self
                    .half
                    .as_ref()
                    .map(|(p, m)| (g(&p[i]) - g(&m[i])) / self.h);
                self.combine(coarse, fine)
            })
            .collect()
    }

    pub fn laplacian<G: Fn(&[f64]) -> f64>(&self, g: G) -> f64 {
        let c = g(&self.center);
        let second = |plus: &[Vec<f64>], minus: &[Vec<f64>], h: f64| -> f64 {
            (0..self.dim())
                .map(|i| (g(&plus[i]) - 2.0 * c + g(&minus[i])) / (h * h))
                .sum()
        };
        let coarse = second(&self.plus, &self.minus, self.h);
        let fine = self.half.as_ref().map(|(p, m)| second(p, m, 0.5 * self.h));
        self.combine(coarse, fine)
    }

    /// Jacobian `J[k][i] = d(g_k)/dx_i` for a vector-valued `g` of the samples.
    pub fn jacobian<G: Fn(&[f64]) -> Vec<f64>>(&self, g: G) -> Vec<Vec<f64>> {
        let eval = |v: &[Vec<f64>]| -> Vec<Vec<f64>> { v.iter().map(|s| g(s)).collect() };
        let (gp, gm) = (eval(&self.plus), eval(&self.minus));
        let half = self.half.as_ref().map(|(p, m)| (eval(p), eval(m)));
        let rows = g(&self.center).len();
        (0..rows)
            .map(|k| {
                (0..self.dim())
                    .map(|i| {
                        let coarse = (gp[i][k] - gm[i][k]) / (2.0 * self.h);
                        let fine = half.as_ref().map(|(p, m)| (p[i][k] - m[i][k]) / self.h);
                        self.combine(coarse, fine)
                    })
                    .collect()
            })
            .collect()
    }
}

/// Central-difference gradient of a scalar field.
pub fn fd_gradient<F>(f: F, x: &[f64], opts: &FdOptions) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    let s = Stencil::sample(|y| Ok(vec![f(y)?]), x, opts)?;
    Ok(s.grad(|v| v[0]))
}

/// Second-order central-difference Laplacian of a scalar field.
pub fn fd_laplacian<F>(f: F, x: &[f64], opts: &FdOptions) -> Result<f64>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    let s = Stencil::sample(|y| Ok(vec![f(y)?]), x, opts)?;
    Ok(s.laplacian(|v| v[0]))
}

/// Jacobian `J[k][i] = d f_k / d x_i` of a vector field.
pub fn fd_jacobian<F>(f: F, x: &[f64], opts: &FdOptions) -> Result<Vec<Vec<f64>>>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let s = Stencil::sample(f, x, opts)?;
    Ok(s.jacobian(|v| v.to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_field_gradient() {
        let c = [0.3, -1.2, 2.5];
        let g = fd_gradient(|x| Ok(c.iter().zip(x).map(|(a, b)| a * b).sum()), &[0.1, 0.2, 0.3], &FdOptions::default()).unwrap();
        for (u, v) in g.iter().zip(&c) {
            assert!((u - v).abs() < 1e-10);
        }
    }

    #[test]
    fn quadratic_field() {
        let x = [0.1, -0.4, 0.25];
        let sq = |y: &[f64]| Ok(y.iter().map(|v| v * v).sum::<f64>());
        let g = fd_gradient(sq, &x, &FdOptions::default()).unwrap();
        for (u, v) in g.iter().zip(&x) {
            assert!((u - 2.0 * v).abs() < 1e-10);
        }
        let l = fd_laplacian(sq, &x, &FdOptions::default()).unwrap();
        assert!((l - 6.0).abs() < 1e-6);
        let harmonic = |y: &[f64]| Ok(y[0] * y[0] - y[1] * y[1]);
        assert!(fd_laplacian(harmonic, &x, &FdOptions::default()).unwrap().abs() < 1e-8);
    }

    #[test]
    fn richardson_improves_accuracy() {
        let x = [0.3, 0.2, 0.1];
        let f = |y: &[f64]| Ok((y[0] * 3.0).sin() * y[1].exp());
        let exact = 3.0 * (0.9f64).cos() * 0.2f64.exp();
        let plain = fd_gradient(f, &x, &FdOptions::with_step(1e-2)).unwrap()[0];
        let rich = fd_gradient(f, &x, &FdOptions { step: 1e-2, richardson: true }).unwrap()[0];
        assert!((rich - exact).abs() < (plain - exact).abs() * 1e-2);
    }

    #[test]
    fn rejects_bad_step() {
        assert!(fd_gradient(|_| Ok(0.0), &[0.0, 0.0], &FdOptions::with_step(0.0)).is_err());
    }
}
