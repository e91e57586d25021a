//! Dormand–Prince 5(4) for the two-dimensional first-order system `(y, y')`.

use crate::error::{Error, Result};

pub(crate) type State = [f64; 2];

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];

const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];

// 5th-order weights minus the embedded 4th-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IvpOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    /// `|y|` above this counts as blow-up.
    pub y_cap: f64,
}

impl Default for IvpOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-10,
            max_steps: 200_000,
            y_cap: 40.0,
        }
    }
}

impl IvpOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            rtol: tol,
            atol: tol,
            ..Self::default()
        }
    }
}

/// Accepted nodes of a run: `(t, state)`.
pub(crate) struct Trajectory {
    pub t: Vec<f64>,
    pub states: Vec<State>,
}

/// One explicit step; returns the 5th-order update, the error estimate and
/// the derivative at the new point (FSAL).
fn step<F>(f: &F, t: f64, y: State, k1: State, h: f64) -> Result<(State, State, State)>
where
    F: Fn(f64, State) -> Result<State>,
{
    let mut k = [[0.0; 2]; 7];
    k[0] = k1;
    for s in 1..7 {
        let mut ys = y;
        for (j, kj) in k.iter().enumerate().take(s) {
            ys[0] += h * A[s][j] * kj[0];
            ys[1] += h * A[s][j] * kj[1];
        }
        k[s] = f(t + C[s] * h, ys)?;
    }
    let mut y_new = y;
    let mut err = [0.0; 2];
    for (s, ks) in k.iter().enumerate().take(6) {
        y_new[0] += h * A[6][s] * ks[0];
        y_new[1] += h * A[6][s] * ks[1];
    }
    for (s, ks) in k.iter().enumerate() {
        err[0] += h * E[s] * ks[0];
        err[1] += h * E[s] * ks[1];
    }
    Ok((y_new, err, k[6]))
}

pub(crate) fn adaptive<F>(f: &F, t0: f64, y0: State, t1: f64, opts: &IvpOptions) -> Result<Trajectory>
where
    F: Fn(f64, State) -> Result<State>,
{
    if !(opts.rtol > 0.0 && opts.atol > 0.0) {
        return Err(Error::domain("tolerances must be positive"));
    }
    let span = t1 - t0;
    let dir = span.signum();
    let mut out = Trajectory {
        t: vec![t0],
        states: vec![y0],
    };
    if span == 0.0 {
        return Ok(out);
    }
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, y)?;
    let mut h = dir * initial_step(span.abs(), y, k1, opts);

    for _ in 0..opts.max_steps {
        let min_step = 1e-14 * t.abs().max(1.0);
        if (t1 - t) * dir <= min_step {
            *out.t.last_mut().unwrap() = t1;
            return Ok(out);
        }
        if (t + 1.01 * h - t1) * dir > 0.0 {
            h = t1 - t;
        }
        if h.abs() < min_step {
            return Err(Error::Divergence { t });
        }
        let (y_new, err, k_new) = match step(f, t, y, k1, h) {
            Ok(v) => v,
            Err(Error::Singularity(_)) => {
                h *= 0.25;
                continue;
            }
            Err(e) => return Err(e),
        };
        if !(y_new[0].is_finite() && y_new[1].is_finite()) {
            h *= 0.25;
            continue;
        }
        // Error per unit step: the equation amplifies perturbations like cosh(2y),
        // so plain per-step control lets the global error drift well above tol.
        let norm = error_norm(&y, &y_new, &err, opts) / h.abs().min(1.0);
        if norm <= 1.0 {
            t = if (t + h - t1) * dir >= 0.0 { t1 } else { t + h };
            y = y_new;
            k1 = k_new;
            out.t.push(t);
            out.states.push(y);
            if y[0].abs() > opts.y_cap {
                return Err(Error::Divergence { t });
            }
            let fac = if norm == 0.0 { 5.0 } else { (0.9 * norm.powf(-0.25)).clamp(0.2, 5.0) };
            h *= fac;
        } else {
            h *= (0.9 * norm.powf(-0.25)).clamp(0.1, 1.0);
        }
    }
    Err(Error::Divergence { t })
}

/// Fixed step count, 5th-order weights, no error control.
pub(crate) fn fixed<F>(f: &F, t0: f64, y0: State, t1: f64, steps: usize) -> Result<Trajectory>
where
    F: Fn(f64, State) -> Result<State>,
{
    let steps = steps.max(1);
    let h = (t1 - t0) / steps as f64;
    let mut out = Trajectory {
        t: Vec::with_capacity(steps + 1),
        states: Vec::with_capacity(steps + 1),
    };
    out.t.push(t0);
    out.states.push(y0);
    let mut y = y0;
    let mut k1 = f(t0, y)?;
    for i in 0..steps {
        let t = t0 + i as f64 * h;
        let (y_new, _, k_new) = step(f, t, y, k1, h)?;
        y = y_new;
        k1 = k_new;
        out.t.push(if i + 1 == steps { t1 } else { t0 + (i + 1) as f64 * h });
        out.states.push(y);
    }
    Ok(out)
}

/// Max-norm of the scaled error estimate.
fn error_norm(y: &State, y_new: &State, err: &State, opts: &IvpOptions) -> f64 {
    let mut acc: f64 = 0.0;
    for i in 0..2 {
        let sc = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
        acc = acc.max((err[i] / sc).abs());
    }
    acc
}

fn initial_step(span: f64, y: State, k1: State, opts: &IvpOptions) -> f64 {
    let sc = |i: usize| opts.atol + opts.rtol * y[i].abs();
    let d0 = ((y[0] / sc(0)).powi(2) + (y[1] / sc(1)).powi(2)).sqrt();
    let d1 = ((k1[0] / sc(0)).powi(2) + (k1[1] / sc(1)).powi(2)).sqrt();
    let h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h.min(0.1 * span).max(1e-12 * span)
}
