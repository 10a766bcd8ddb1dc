//! Density representation of one step of the cost recursion.
//!
//! One application maps the law of `V` to the law of
//! `U V + (1 - U) V' + g(U)` with `V, V'` independent copies and `U`
//! uniform. In density form that is an average over `u` of scaled
//! self-convolutions shifted by the toll `g(u)`; the split variable is
//! symmetric about `1/2`, so only `u in [1/2, 1]` is integrated and the
//! result doubled. This keeps the scale factor `1/u` at most 2.

use rayon::prelude::*;

use crate::constants::{bisect, Constants};
use crate::cost::{toll_antiderivative, toll_unchecked};
use crate::error::{Error, Result};
use crate::grid::{GridFunction, GridKind};
use crate::quad::gl16;
use crate::transform::fft::{convolve, Fft};

/// Base budget for the fixed `u`-quadrature (dyadic Gauss-Legendre
/// panels); the resampling and readback add a second-order term in the
/// grid spacing, so the full budget is `QUAD_TOL + h^2`.
const QUAD_TOL: f64 = 1e-7;

fn step_tol(h: f64) -> f64 {
    QUAD_TOL + h * h
}

/// Dyadic refinement levels toward `u = 1`, where the toll derivative
/// diverges logarithmically. The finest panel has width `2^-LEVELS`.
const LEVELS: i32 = 18;

/// Exact density of `g(U)` on a uniform grid, as the entry point for
/// density iteration from the point mass at zero.
///
/// The law lives on `(-eta, 1)` with an integrable inverse-square-root
/// singularity at the left endpoint. Each grid value is the average of
/// the density against the hat function at that node, computed in closed
/// form from the toll antiderivative; piecewise-linear interpolation of
/// such values reproduces the total mass and the mean exactly, so the
/// singularity costs no mass (it is capped at the cell average).
pub fn density_of_toll(lo: f64, hi: f64, n: usize) -> Result<GridFunction> {
    if n < 8 {
        return Err(Error::Domain("toll density needs at least 8 grid points".into()));
    }
    let eta = Constants::get().eta;
    let h = (hi - lo) / (n - 1) as f64;
    if lo > -eta - 2.0 * h || hi < 1.0 + 2.0 * h {
        return Err(Error::Domain(format!(
            "grid [{lo}, {hi}] must cover the one-step support (-{eta:.6}, 1) with margin"
        )));
    }
    // Increasing branch of the toll: u(x) in [1/2, 1] with g(u(x)) = x.
    // Both branches carry equal mass, hence the factor 2 below.
    let u_of = |x: f64| -> f64 {
        if x <= -eta {
            0.5
        } else if x >= 1.0 {
            1.0
        } else {
            bisect(|u| toll_unchecked(u) - x, 0.5, 1.0, 1e-15)
        }
    };
    let xs: Vec<f64> = (0..n).map(|i| lo + i as f64 * h).collect();
    let us: Vec<f64> = xs.iter().map(|&x| u_of(x)).collect();
    let gs: Vec<f64> = us.iter().map(|&u| toll_antiderivative(u)).collect();
    // Cell mass and first moment between consecutive nodes:
    //   m0 = P(x_i <= g(U) < x_{i+1}) = 2 (u_{i+1} - u_i)
    //   m1 = E[g(U); cell]            = 2 (G(u_{i+1}) - G(u_i))
    let m0: Vec<f64> = (0..n - 1).map(|i| 2.0 * (us[i + 1] - us[i])).collect();
    let m1: Vec<f64> = (0..n - 1).map(|i| 2.0 * (gs[i + 1] - gs[i])).collect();
    let mut vals = vec![0.0; n];
    for i in 1..n - 1 {
        let left = m1[i - 1] - xs[i - 1] * m0[i - 1];
        let right = xs[i + 1] * m0[i] - m1[i];
        vals[i] = (left + right) / (h * h);
    }
    GridFunction::density(lo, hi, vals, 1e-11)
}

/// One density step of the recursion. Output lives on the same grid.
///
/// For each quadrature node `u` the inner integral is the discrete
/// convolution of the input rescaled by `u` and by `1 - u`, evaluated
/// at `x - g(u)`. The step acts on the probability law the grid
/// represents: the factors are divided by the carried mass first,
/// because the map squares the mass and would otherwise double any
/// representation defect at every step. The output's own defect is
/// recorded in `tol_mass`, and a defect beyond ten times the stated
/// budget is an error.
pub fn apply_s_density(f: &GridFunction) -> Result<GridFunction> {
    if f.kind != GridKind::Density {
        return Err(Error::Domain("apply_s_density: expected a density grid".into()));
    }
    let n = f.len();
    let h = f.spacing();
    let lo = f.lo;
    let carried = f.trapezoid();
    let vals: Vec<f64> = f.values_real().iter().map(|v| v / carried).collect();
    let fft = Fft::new((2 * n - 1).next_power_of_two());
    let gl = gl16();

    // Dyadic panels [1 - 2^-k, 1 - 2^-k-1] resolve the logarithmic
    // divergence of g' at u = 1; Gauss-Legendre nodes stay interior.
    let mut nodes: Vec<(f64, f64)> = Vec::new();
    for k in 1..=LEVELS {
        let a = 1.0 - 0.5f64.powi(k);
        let b = if k == LEVELS { 1.0 } else { 1.0 - 0.5f64.powi(k + 1) };
        let c = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        for (x, w) in gl.nodes.iter().zip(&gl.weights) {
            nodes.push((c + half * x, w * half));
        }
    }

    let cdf = PlCdf::new(&vals, lo, h);
    let contribs: Vec<Vec<f64>> = nodes
        .par_iter()
        .map(|&(u, w)| {
            let shift = toll_unchecked(u);
            let a = resample(&cdf, u);
            let b = resample(&cdf, 1.0 - u);
            let c = convolve(&fft, &a, &b, h);
            // c[s] sits at position 2 lo + s h; read off at x_j - g(u)
            (0..n)
                .map(|j| {
                    let s = (j as f64 * h - shift - lo) / h;
                    w * interp_at(&c, s)
                })
                .collect()
        })
        .collect();

    let mut out = vec![0.0; n];
    for contrib in &contribs {
        // fixed summation order: panel by panel, node by node
        for (o, v) in out.iter_mut().zip(contrib) {
            *o += 2.0 * v;
        }
    }

    let mass: f64 = {
        let inner: f64 = out[1..n - 1].iter().sum();
        h * (0.5 * (out[0] + out[n - 1]) + inner)
    };
    let budget = 10.0 * (f.tol_mass + step_tol(h));
    if mass < 1.0 - budget {
        return Err(Error::Truncation(format!(
            "density step lost mass: integral {mass:.6} < 1 - {budget:.2e}; \
             widen the x-domain"
        )));
    }
    GridFunction::density(lo, f.hi, out, f.tol_mass + (1.0 - mass).abs() + step_tol(h))
}

/// Exact cdf of the piecewise-linear density given by grid values:
/// quadratic inside each cell, constant outside the domain.
struct PlCdf {
    lo: f64,
    h: f64,
    vals: Vec<f64>,
    cum: Vec<f64>,
}

impl PlCdf {
    fn new(vals: &[f64], lo: f64, h: f64) -> Self {
        let mut cum = Vec::with_capacity(vals.len());
        let mut acc = 0.0;
        cum.push(0.0);
        for w in vals.windows(2) {
            acc += 0.5 * h * (w[0] + w[1]);
            cum.push(acc);
        }
        PlCdf { lo, h, vals: vals.to_vec(), cum }
    }

    fn eval(&self, x: f64) -> f64 {
        let n = self.vals.len();
        let p = (x - self.lo) / self.h;
        if p <= 0.0 {
            return 0.0;
        }
        if p >= (n - 1) as f64 {
            return self.cum[n - 1];
        }
        let i = (p as usize).min(n - 2);
        let frac = p - i as f64;
        let slope = self.vals[i + 1] - self.vals[i];
        self.cum[i] + self.h * frac * (self.vals[i] + 0.5 * slope * frac)
    }
}

/// Cell averages of `f(t/u)/u` on the grid of `f`, read off the exact
/// cdf. Unlike pointwise sampling this keeps the full mass even when
/// the rescaled density is narrower than one cell (`u` near 0), which
/// happens at every step for the `1 - u` factor near the top panels.
fn resample(cdf: &PlCdf, u: f64) -> Vec<f64> {
    let n = cdf.vals.len();
    let (lo, h) = (cdf.lo, cdf.h);
    let inv = 1.0 / u;
    (0..n)
        .map(|k| {
            let t = lo + k as f64 * h;
            (cdf.eval((t + 0.5 * h) * inv) - cdf.eval((t - 0.5 * h) * inv)) / h
        })
        .collect()
}

/// Linear interpolation at fractional index `s`, zero outside.
fn interp_at(c: &[f64], s: f64) -> f64 {
    if s < 0.0 || s > (c.len() - 1) as f64 {
        return 0.0;
    }
    let i = (s as usize).min(c.len() - 2);
    let frac = s - i as f64;
    c[i] * (1.0 - frac) + c[i + 1] * frac
}
