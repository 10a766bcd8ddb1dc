//! Distances between laws represented on grids.
//!
//! Minimal-L^p (Wasserstein) distances go through quantile functions: for
//! laws F and G coupled by a common uniform variable, `X = F^{-1}(U)` and
//! `Y = G^{-1}(U)` attain the minimum of `E|X - Y|^p` over all couplings,
//! simultaneously for every p >= 1. [`QuantileGrid`] holds a law's
//! quantiles on a midpoint grid in (0, 1); [`wasserstein_p`] integrates
//! the coupled difference. Kolmogorov, total variation, and sup distances
//! compare [`GridFunction`]s sharing a domain.

use crate::error::{Error, Result};
use crate::grid::{GridFunction, GridKind};

/// A law's quantile function sampled on a uniform midpoint grid.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantileGrid {
    /// evaluation points u_i = (i + 1/2)/m, strictly increasing in (0, 1)
    pub probabilities: Vec<f64>,
    /// F^{-1}(u_i); nondecreasing
    pub values: Vec<f64>,
}

/// Midpoint grids shorter than this resolve quantiles too coarsely to be
/// worth comparing.
pub const MIN_QUANTILE_POINTS: usize = 64;

impl QuantileGrid {
    /// Wrap explicit probability and quantile samples, checking the
    /// invariants: at least [`MIN_QUANTILE_POINTS`] points, probabilities
    /// strictly increasing inside (0, 1), quantiles nondecreasing.
    pub fn new(probabilities: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if probabilities.len() < MIN_QUANTILE_POINTS {
            return Err(Error::Domain(format!(
                "quantile grid needs >= {MIN_QUANTILE_POINTS} points, got {}",
                probabilities.len()
            )));
        }
        if probabilities.len() != values.len() {
            return Err(Error::Domain(format!(
                "{} probabilities vs {} quantile values",
                probabilities.len(),
                values.len()
            )));
        }
        if probabilities[0] <= 0.0 || *probabilities.last().unwrap() >= 1.0 {
            return Err(Error::Domain("probabilities must lie inside (0, 1)".into()));
        }
        for w in probabilities.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::Domain("probabilities must increase strictly".into()));
            }
        }
        for w in values.windows(2) {
            if w[1] < w[0] - 1e-12 {
                return Err(Error::Domain(format!(
                    "quantile values decrease by {:.3e}",
                    w[0] - w[1]
                )));
            }
        }
        Ok(QuantileGrid {
            probabilities,
            values,
        })
    }

    /// The canonical midpoint probabilities (i + 1/2)/m.
    pub fn midpoints(m: usize) -> Vec<f64> {
        (0..m).map(|i| (i as f64 + 0.5) / m as f64).collect()
    }

    /// Sample an explicit quantile function at m midpoints.
    pub fn from_fn<F: FnMut(f64) -> f64>(m: usize, mut quantile: F) -> Result<Self> {
        let probabilities = Self::midpoints(m);
        let values = probabilities.iter().map(|&u| quantile(u)).collect();
        Self::new(probabilities, values)
    }

    /// Quantiles of a grid CDF at m midpoints.
    ///
    /// Uses the left-continuous inverse `F^{-1}(u) = inf {x : F(x) >= u}`
    /// with linear interpolation on strictly increasing segments; a flat
    /// segment at level u resolves to its left edge. Probabilities below
    /// `F(lo)` or above `F(hi)` clamp to the domain ends, which is where
    /// the grid's `tol_mass` budget matters.
    pub fn from_cdf(cdf: &GridFunction, m: usize) -> Result<Self> {
        if cdf.kind != GridKind::Cdf {
            return Err(Error::Domain(format!(
                "quantiles need a cdf grid, got {:?}",
                cdf.kind
            )));
        }
        // running max absorbs the sub-1e-12 wiggle the cdf constructor allows
        let mut mono = Vec::with_capacity(cdf.len());
        let mut run = f64::NEG_INFINITY;
        for &c in cdf.values_real() {
            run = run.max(c);
            mono.push(run);
        }
        let probabilities = Self::midpoints(m);
        let mut values = Vec::with_capacity(m);
        let mut i = 0usize;
        for &u in &probabilities {
            while i < mono.len() && mono[i] < u {
                i += 1;
            }
            let x = if i == 0 {
                cdf.lo
            } else if i == mono.len() {
                cdf.hi
            } else {
                // mono[i-1] < u <= mono[i], so the segment rises
                cdf.x(i - 1) + (u - mono[i - 1]) / (mono[i] - mono[i - 1]) * cdf.spacing()
            };
            values.push(x);
        }
        Self::new(probabilities, values)
    }

    /// Empirical quantiles of a sample at m midpoints (left-continuous
    /// inverse of the empirical CDF: the ceil(u n)-th order statistic).
    pub fn from_samples(samples: &[f64], m: usize) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Domain("empty sample".into()));
        }
        let mut sorted = samples.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len() as f64;
        Self::from_fn(m, |u| {
            let k = (u * n).ceil() as usize;
            sorted[k.clamp(1, sorted.len()) - 1]
        })
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    /// p-th absolute moment of the represented law by midpoint quadrature.
    pub fn abs_moment(&self, p: f64) -> f64 {
        let m = self.values.len() as f64;
        self.values.iter().map(|v| v.abs().powf(p)).sum::<f64>() / m
    }

    /// p-th raw moment (integer order) by midpoint quadrature.
    pub fn moment(&self, p: u32) -> f64 {
        let m = self.values.len() as f64;
        self.values.iter().map(|v| v.powi(p as i32)).sum::<f64>() / m
    }
}

/// Minimal-L^p distance `(∫_0^1 |F^{-1}(u) - G^{-1}(u)|^p du)^{1/p}` by
/// midpoint quadrature on the shared probability grid.
pub fn wasserstein_p(f: &QuantileGrid, g: &QuantileGrid, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::Domain(format!("wasserstein_p: need p >= 1, got {p}")));
    }
    if f.probabilities != g.probabilities {
        return Err(Error::GridMismatch(format!(
            "quantile grids differ ({} vs {} points)",
            f.len(),
            g.len()
        )));
    }
    let m = f.values.len() as f64;
    let mean: f64 = f
        .values
        .iter()
        .zip(&g.values)
        .map(|(a, b)| (a - b).abs().powf(p))
        .sum::<f64>()
        / m;
    Ok(mean.powf(1.0 / p))
}

/// [`wasserstein_p`] straight from two grid CDFs, with m quantile points.
pub fn wasserstein_from_cdfs(f: &GridFunction, g: &GridFunction, p: f64, m: usize) -> Result<f64> {
    wasserstein_p(
        &QuantileGrid::from_cdf(f, m)?,
        &QuantileGrid::from_cdf(g, m)?,
        p,
    )
}

fn require_common(f: &GridFunction, g: &GridFunction, what: &str) -> Result<()> {
    if f.lo != g.lo || f.hi != g.hi || f.len() != g.len() {
        return Err(Error::GridMismatch(format!(
            "{what}: [{}, {}] x {} vs [{}, {}] x {}",
            f.lo,
            f.hi,
            f.len(),
            g.lo,
            g.hi,
            g.len()
        )));
    }
    Ok(())
}

/// Kolmogorov distance: max absolute CDF difference over the common grid.
pub fn ks_distance(f: &GridFunction, g: &GridFunction) -> Result<f64> {
    if f.kind != GridKind::Cdf || g.kind != GridKind::Cdf {
        return Err(Error::Domain("ks_distance compares cdf grids".into()));
    }
    require_common(f, g, "ks_distance")?;
    Ok(f.values_real()
        .iter()
        .zip(g.values_real())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

/// Total variation distance `(1/2) ∫ |f - g|` by trapezoid on the common
/// grid. For grid densities this equals `∫ (f - g)^+` up to the recorded
/// mass budgets. A point mass cannot be represented here; against any
/// density its TV distance is 1 by convention and needs no computation.
pub fn tv_distance(f: &GridFunction, g: &GridFunction) -> Result<f64> {
    if f.kind != GridKind::Density || g.kind != GridKind::Density {
        return Err(Error::Domain("tv_distance compares density grids".into()));
    }
    require_common(f, g, "tv_distance")?;
    let a = f.values_real();
    let b = g.values_real();
    let h = f.spacing();
    let n = a.len();
    let mut acc = 0.5 * ((a[0] - b[0]).abs() + (a[n - 1] - b[n - 1]).abs());
    for i in 1..n - 1 {
        acc += (a[i] - b[i]).abs();
    }
    Ok(0.5 * h * acc)
}

/// Max absolute pointwise difference over the common grid; complex grids
/// compare by modulus.
pub fn sup_distance(f: &GridFunction, g: &GridFunction) -> Result<f64> {
    require_common(f, g, "sup_distance")?;
    match (f.is_complex(), g.is_complex()) {
        (false, false) => Ok(f
            .values_real()
            .iter()
            .zip(g.values_real())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)),
        (true, true) => Ok(f
            .values_complex()
            .iter()
            .zip(g.values_complex())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)),
        _ => Err(Error::GridMismatch(
            "cannot mix real and complex grids".into(),
        )),
    }
}
