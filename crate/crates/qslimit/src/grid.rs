//! Uniformly sampled functions on an interval: densities, CDFs,
//! characteristic functions, and moment generating functions.
//!
//! A [`GridFunction`] owns equally spaced samples over `[lo, hi]` together
//! with a kind tag and a mass tolerance `tol_mass`. Constructors validate
//! the kind's invariants:
//!
//! * `Density`: nonnegative values with trapezoid mass in
//!   `[1 - tol_mass, 1 + MASS_UPPER_SLACK]`,
//! * `Cdf`: nondecreasing (within rounding), starting near 0, ending near 1,
//! * `Cf`: complex samples on `[0, t_max]` with value exactly 1 at `t = 0`
//!   and modulus at most 1,
//! * `Mgf`: positive samples with value exactly 1 at `lambda = 0`.
//!
//! Serialization: CSV (`x,value` or `x,value,value_imag`), and JSON with
//! full metadata. Floats are printed in shortest round-trip form, so every
//! file deserializes to bit-identical values.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Forgiveness for quadrature overshoot when validating unit mass.
pub const MASS_UPPER_SLACK: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridKind {
    Density,
    Cdf,
    Cf,
    Mgf,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridValues {
    Real(Vec<f64>),
    Complex(Vec<(f64, f64)>),
}

impl GridValues {
    pub fn len(&self) -> usize {
        match self {
            GridValues::Real(v) => v.len(),
            GridValues::Complex(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Equally spaced samples of a real or complex function on `[lo, hi]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridFunction {
    pub lo: f64,
    pub hi: f64,
    pub kind: GridKind,
    /// Mass / consistency budget recorded by the producing operation.
    pub tol_mass: f64,
    values: GridValues,
}

impl GridFunction {
    /// Density from raw samples. Negative values are clipped to zero and the
    /// clipped trapezoid mass is folded into `tol_mass`; the total mass must
    /// then lie within the stated budget of 1.
    pub fn density(lo: f64, hi: f64, mut values: Vec<f64>, tol_mass: f64) -> Result<Self> {
        check_domain(lo, hi, values.len())?;
        let h = (hi - lo) / (values.len() - 1) as f64;
        let mut clipped = 0.0;
        for v in &mut values {
            if *v < 0.0 {
                clipped += -*v * h;
                *v = 0.0;
            }
        }
        let g = GridFunction {
            lo,
            hi,
            kind: GridKind::Density,
            tol_mass: tol_mass + clipped,
            values: GridValues::Real(values),
        };
        let mass = g.trapezoid();
        if mass > 1.0 + MASS_UPPER_SLACK + g.tol_mass {
            return Err(Error::Domain(format!(
                "density mass {mass} exceeds 1 beyond tolerance"
            )));
        }
        if mass < 1.0 - g.tol_mass {
            return Err(Error::Truncation(format!(
                "density mass {mass} below 1 - tol_mass = {}; widen the domain \
                 or raise the budget",
                1.0 - g.tol_mass
            )));
        }
        Ok(g)
    }

    /// CDF from raw samples; must be nondecreasing within `1e-12` and span
    /// roughly `[0, 1]` within `tol_mass`.
    pub fn cdf(lo: f64, hi: f64, values: Vec<f64>, tol_mass: f64) -> Result<Self> {
        check_domain(lo, hi, values.len())?;
        for w in values.windows(2) {
            if w[1] < w[0] - 1e-12 {
                return Err(Error::Domain(format!(
                    "cdf decreases by {:.3e}",
                    w[0] - w[1]
                )));
            }
        }
        let first = values[0];
        let last = *values.last().unwrap();
        if first < -1e-12 || first > tol_mass + MASS_UPPER_SLACK {
            return Err(Error::Domain(format!("cdf starts at {first}, not near 0")));
        }
        if last > 1.0 + 1e-12 || last < 1.0 - tol_mass - MASS_UPPER_SLACK {
            return Err(Error::Domain(format!("cdf ends at {last}, not near 1")));
        }
        Ok(GridFunction {
            lo,
            hi,
            kind: GridKind::Cdf,
            tol_mass,
            values: GridValues::Real(values),
        })
    }

    /// Characteristic function samples on `[0, t_max]`. The first sample is
    /// forced to exactly 1; moduli may not exceed 1 beyond rounding.
    pub fn cf(t_max: f64, mut values: Vec<Complex64>, tol_mass: f64) -> Result<Self> {
        check_domain(0.0, t_max, values.len())?;
        values[0] = Complex64::new(1.0, 0.0);
        for (i, v) in values.iter().enumerate() {
            if v.norm() > 1.0 + 1e-9 + tol_mass {
                return Err(Error::Domain(format!(
                    "cf modulus {} at sample {i} exceeds 1",
                    v.norm()
                )));
            }
        }
        Ok(GridFunction {
            lo: 0.0,
            hi: t_max,
            kind: GridKind::Cf,
            tol_mass,
            values: GridValues::Complex(values.into_iter().map(|z| (z.re, z.im)).collect()),
        })
    }

    /// Moment generating function samples on `[lo, hi]`; `lo <= 0 <= hi`,
    /// the grid must contain 0 as a sample, where the value is forced to 1.
    pub fn mgf(lo: f64, hi: f64, mut values: Vec<f64>, tol_mass: f64) -> Result<Self> {
        check_domain(lo, hi, values.len())?;
        let h = (hi - lo) / (values.len() - 1) as f64;
        let zero_idx = (-lo / h).round();
        if !(0.0..values.len() as f64).contains(&zero_idx)
            || (lo + zero_idx * h).abs() > 1e-9 * h.max(1.0)
        {
            return Err(Error::Domain(
                "mgf grid must contain lambda = 0 as a sample".into(),
            ));
        }
        values[zero_idx as usize] = 1.0;
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v <= 0.0)
        {
            return Err(Error::Domain(format!(
                "mgf value {v} at sample {i} is not positive and finite"
            )));
        }
        Ok(GridFunction {
            lo,
            hi,
            kind: GridKind::Mgf,
            tol_mass,
            values: GridValues::Real(values),
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        (self.hi - self.lo) / (self.len() - 1) as f64
    }

    /// Abscissa of sample `i`.
    pub fn x(&self, i: usize) -> f64 {
        self.lo + i as f64 * self.spacing()
    }

    pub fn values_real(&self) -> &[f64] {
        match &self.values {
            GridValues::Real(v) => v,
            GridValues::Complex(_) => panic!("complex grid where real expected"),
        }
    }

    pub fn values_complex(&self) -> Vec<Complex64> {
        match &self.values {
            GridValues::Complex(v) => v.iter().map(|(re, im)| Complex64::new(*re, *im)).collect(),
            GridValues::Real(_) => panic!("real grid where complex expected"),
        }
    }

    pub fn is_complex(&self) -> bool {
        matches!(self.values, GridValues::Complex(_))
    }

    /// Trapezoid integral over the full domain (real grids).
    pub fn trapezoid(&self) -> f64 {
        let v = self.values_real();
        let h = self.spacing();
        let inner: f64 = v[1..v.len() - 1].iter().sum();
        h * (0.5 * (v[0] + v[v.len() - 1]) + inner)
    }

    /// Trapezoid integral of `x^k * f(x)` (real grids).
    pub fn moment(&self, k: u32) -> f64 {
        let v = self.values_real();
        let h = self.spacing();
        let mut acc = 0.0;
        for (i, val) in v.iter().enumerate() {
            let w = if i == 0 || i == v.len() - 1 { 0.5 } else { 1.0 };
            acc += w * self.x(i).powi(k as i32) * val;
        }
        acc * h
    }

    /// Mean of a density grid.
    pub fn mean(&self) -> f64 {
        self.moment(1) / self.trapezoid()
    }

    /// Variance of a density grid (about its own mean).
    pub fn variance(&self) -> f64 {
        let mass = self.trapezoid();
        let m = self.moment(1) / mass;
        self.moment(2) / mass - m * m
    }

    pub fn sup(&self) -> f64 {
        match &self.values {
            GridValues::Real(v) => v.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            GridValues::Complex(v) => v
                .iter()
                .map(|(re, im)| Complex64::new(*re, *im).norm())
                .fold(f64::NEG_INFINITY, f64::max),
        }
    }

    /// Cumulative trapezoid integral of a density, clamped to `[0, 1]`.
    pub fn cumulative(&self) -> Result<GridFunction> {
        if self.kind != GridKind::Density {
            return Err(Error::Domain("cumulative: expected a density grid".into()));
        }
        let v = self.values_real();
        let h = self.spacing();
        let mut acc = 0.0;
        let mut out = Vec::with_capacity(v.len());
        out.push(0.0);
        for w in v.windows(2) {
            acc += 0.5 * h * (w[0] + w[1]);
            out.push(acc.min(1.0));
        }
        GridFunction::cdf(self.lo, self.hi, out, self.tol_mass.max(1e-12))
    }

    /// Linear interpolation; zero outside the domain (real grids).
    pub fn interp_linear(&self, x: f64) -> f64 {
        let v = self.values_real();
        let h = self.spacing();
        let p = (x - self.lo) / h;
        if p < 0.0 || p > (v.len() - 1) as f64 {
            return 0.0;
        }
        let i = (p as usize).min(v.len() - 2);
        let frac = p - i as f64;
        v[i] * (1.0 - frac) + v[i + 1] * frac
    }

    /// Four-point (cubic Lagrange) interpolation of complex samples.
    /// Arguments must lie inside the domain.
    pub fn interp_cubic_complex(&self, t: f64) -> Result<Complex64> {
        let v = match &self.values {
            GridValues::Complex(v) => v,
            GridValues::Real(_) => {
                return Err(Error::Domain("cubic complex interp on a real grid".into()))
            }
        };
        let (i0, c) = cubic_stencil(self.lo, self.spacing(), v.len(), t)?;
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, w) in c.iter().enumerate() {
            re += w * v[i0 + k].0;
            im += w * v[i0 + k].1;
        }
        Ok(Complex64::new(re, im))
    }

    /// Four-point interpolation of positive samples, performed on the
    /// logarithm (keeps the result positive and tames exponential growth).
    pub fn interp_cubic_log(&self, x: f64) -> Result<f64> {
        let v = self.values_real();
        let (i0, c) = cubic_stencil(self.lo, self.spacing(), v.len(), x)?;
        let mut acc = 0.0;
        for (k, w) in c.iter().enumerate() {
            acc += w * v[i0 + k].ln();
        }
        Ok(acc.exp())
    }

    // -- serialization ----------------------------------------------------

    /// CSV with header `x,value` (real) or `x,value,value_imag` (complex).
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        match &self.values {
            GridValues::Real(v) => {
                s.push_str("x,value\n");
                for (i, val) in v.iter().enumerate() {
                    let _ = writeln!(s, "{},{}", self.x(i), val);
                }
            }
            GridValues::Complex(v) => {
                s.push_str("x,value,value_imag\n");
                for (i, (re, im)) in v.iter().enumerate() {
                    let _ = writeln!(s, "{},{},{}", self.x(i), re, im);
                }
            }
        }
        s
    }

    /// Parse CSV produced by [`Self::to_csv`]. Kind and tolerance are not
    /// stored in CSV and must be supplied (they live in the JSON metadata).
    pub fn from_csv(text: &str, kind: GridKind, tol_mass: f64) -> Result<Self> {
        let mut xs = Vec::new();
        let mut re = Vec::new();
        let mut im: Vec<f64> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            if lineno == 0 {
                continue; // header
            }
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() < 2 {
                return Err(Error::Parse(format!("csv line {}: too few fields", lineno + 1)));
            }
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("csv line {}: {e}", lineno + 1)))
            };
            xs.push(parse(fields[0])?);
            re.push(parse(fields[1])?);
            if fields.len() > 2 {
                im.push(parse(fields[2])?);
            }
        }
        if xs.len() < 2 {
            return Err(Error::Parse("csv: need at least two samples".into()));
        }
        let lo = xs[0];
        let hi = *xs.last().unwrap();
        let h = (hi - lo) / (xs.len() - 1) as f64;
        for (i, x) in xs.iter().enumerate() {
            if (x - (lo + i as f64 * h)).abs() > 1e-9 * h.abs().max(1.0) {
                return Err(Error::GridMismatch(format!(
                    "csv abscissae are not uniformly spaced near row {i}"
                )));
            }
        }
        if im.is_empty() {
            Self::from_parts(lo, hi, GridValues::Real(re), kind, tol_mass)
        } else {
            if im.len() != re.len() {
                return Err(Error::Parse("csv: ragged imaginary column".into()));
            }
            let vals = re.into_iter().zip(im).map(|(a, b)| Complex64::new(a, b)).collect();
            if kind != GridKind::Cf {
                return Err(Error::Parse("csv: complex column on a real kind".into()));
            }
            Self::cf(hi, vals, tol_mass)
        }
    }

    /// Rebuild through the kind-specific validating constructor.
    pub fn from_parts(
        lo: f64,
        hi: f64,
        values: GridValues,
        kind: GridKind,
        tol_mass: f64,
    ) -> Result<Self> {
        match (kind, values) {
            (GridKind::Density, GridValues::Real(v)) => Self::density(lo, hi, v, tol_mass),
            (GridKind::Cdf, GridValues::Real(v)) => Self::cdf(lo, hi, v, tol_mass),
            (GridKind::Mgf, GridValues::Real(v)) => Self::mgf(lo, hi, v, tol_mass),
            (GridKind::Cf, GridValues::Complex(v)) => Self::cf(
                hi,
                v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect(),
                tol_mass,
            ),
            _ => Err(Error::Domain(
                "kind does not match real/complex payload".into(),
            )),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: GridFunction = serde_json::from_str(text)?;
        // revalidate through the constructors
        Self::from_parts(raw.lo, raw.hi, raw.values, raw.kind, raw.tol_mass)
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn read_json(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

fn check_domain(lo: f64, hi: f64, len: usize) -> Result<()> {
    if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
        return Err(Error::Domain(format!("bad domain [{lo}, {hi}]")));
    }
    if len < 2 {
        return Err(Error::Domain("grid needs at least two samples".into()));
    }
    Ok(())
}

/// Stencil for 4-point Lagrange interpolation on a uniform grid: returns
/// the first stencil index and the four weights.
fn cubic_stencil(lo: f64, h: f64, len: usize, x: f64) -> Result<(usize, [f64; 4])> {
    let p = (x - lo) / h;
    if p < -1e-9 || p > (len - 1) as f64 + 1e-9 {
        return Err(Error::Domain(format!(
            "interpolation argument {x} outside grid"
        )));
    }
    let cell = (p.floor() as isize).clamp(0, len as isize - 2) as usize;
    let i0 = cell.saturating_sub(1).min(len - 4);
    let s = p - i0 as f64; // in [~0, 3]
    let mut w = [0.0; 4];
    for (j, wj) in w.iter_mut().enumerate() {
        let mut acc = 1.0;
        for k in 0..4 {
            if k != j {
                acc *= (s - k as f64) / (j as f64 - k as f64);
            }
        }
        *wj = acc;
    }
    Ok((i0, w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn gaussian_density(n: usize, lo: f64, hi: f64, var: f64) -> GridFunction {
        let h = (hi - lo) / (n - 1) as f64;
        let norm = 1.0 / (2.0 * std::f64::consts::PI * var).sqrt();
        let vals: Vec<f64> = (0..n)
            .map(|i| {
                let x = lo + i as f64 * h;
                norm * (-x * x / (2.0 * var)).exp()
            })
            .collect();
        GridFunction::density(lo, hi, vals, 1e-6).unwrap()
    }

    #[test]
    fn density_validation_catches_bad_mass() {
        let vals = vec![0.1; 101];
        // mass = 10 on [0, 100]... way over 1
        assert!(GridFunction::density(0.0, 100.0, vals, 1e-6).is_err());
        let vals = vec![0.001; 101];
        assert!(matches!(
            GridFunction::density(0.0, 100.0, vals, 1e-6),
            Err(Error::Truncation(_))
        ));
    }

    #[test]
    fn density_clips_negatives_into_budget() {
        // denting one interior sample from 0.5 to -0.01 costs h*0.51 = 5.1e-3
        // of trapezoid mass, so the stated budget has to absorb that deficit
        let mut vals = vec![0.5; 201];
        vals[3] = -0.01;
        let g = GridFunction::density(0.0, 2.0, vals, 1e-2).unwrap();
        assert!(g.values_real().iter().all(|v| *v >= 0.0));
        assert!(g.tol_mass > 1e-2);
    }

    #[test]
    fn gaussian_moments() {
        let g = gaussian_density(4001, -9.0, 9.0, 0.42);
        assert_abs_diff_eq!(g.trapezoid(), 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(g.mean(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(g.variance(), 0.42, epsilon = 1e-7);
    }

    #[test]
    fn cumulative_is_valid_cdf() {
        let g = gaussian_density(4001, -9.0, 9.0, 1.0);
        let cdf = g.cumulative().unwrap();
        assert_eq!(cdf.kind, GridKind::Cdf);
        let v = cdf.values_real();
        assert_abs_diff_eq!(v[2000], 0.5, epsilon = 1e-6); // symmetry at x=0
    }

    #[test]
    fn cf_forces_unit_value_at_zero() {
        let vals: Vec<Complex64> = (0..64)
            .map(|i| Complex64::new((-0.5 * (i as f64 * 0.1f64).powi(2)).exp(), 0.0))
            .collect();
        let g = GridFunction::cf(6.3, vals, 0.0).unwrap();
        assert_eq!(g.values_complex()[0], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn cubic_interpolation_is_exact_on_cubics() {
        let n = 33;
        let (lo, hi) = (0.0, 4.0);
        let h = (hi - lo) / (n - 1) as f64;
        let poly = |x: f64| 1.0 + 0.5 * x - 0.25 * x * x + 0.125 * x * x * x;
        let vals: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let x = lo + i as f64 * h;
                (poly(x), -0.5 * poly(x))
            })
            .collect();
        let g = GridFunction {
            lo,
            hi,
            kind: GridKind::Cf,
            tol_mass: 0.0,
            values: GridValues::Complex(vals),
        };
        for &x in &[0.03, 0.4999, 1.777, 3.21, 3.99] {
            let v = g.interp_cubic_complex(x).unwrap();
            assert_abs_diff_eq!(v.re, poly(x), epsilon = 1e-12);
            assert_abs_diff_eq!(v.im, -0.5 * poly(x), epsilon = 1e-12);
        }
    }

    #[test]
    fn log_cubic_interpolation_tracks_gaussian_mgf() {
        let n = 161;
        let (lo, hi) = (-4.0, 4.0);
        let h = (hi - lo) / (n - 1) as f64;
        let vals: Vec<f64> = (0..n)
            .map(|i| {
                let l = lo + i as f64 * h;
                (0.5 * l * l).exp()
            })
            .collect();
        let g = GridFunction::mgf(lo, hi, vals, 0.0).unwrap();
        for &l in &[-3.987, -1.5002, 0.013, 2.718, 3.99] {
            let v = g.interp_cubic_log(l).unwrap();
            let exact = (0.5 * l * l).exp();
            assert!((v / exact - 1.0).abs() < 1e-10, "rel err at {l}");
        }
    }

    #[test]
    fn csv_roundtrip_bit_exact() {
        let g = gaussian_density(257, -6.0, 6.0, 1.0);
        let csv = g.to_csv();
        let back = GridFunction::from_csv(&csv, GridKind::Density, g.tol_mass).unwrap();
        assert_eq!(g.values_real(), back.values_real());
        assert_eq!(back.to_csv(), csv);
    }

    #[test]
    fn json_roundtrip_bit_exact() {
        let g = gaussian_density(257, -6.0, 6.0, 1.0);
        let js = g.to_json().unwrap();
        let back = GridFunction::from_json(&js).unwrap();
        assert_eq!(g.values_real(), back.values_real());
        assert_eq!(back.to_json().unwrap(), js);
    }

    #[test]
    fn complex_csv_roundtrip() {
        let vals: Vec<Complex64> = (0..33)
            .map(|i| Complex64::new((i as f64 * 0.07).cos(), (i as f64 * 0.07).sin()) * 0.9)
            .collect();
        let g = GridFunction::cf(3.2, vals, 0.0).unwrap();
        let csv = g.to_csv();
        let back = GridFunction::from_csv(&csv, GridKind::Cf, 0.0).unwrap();
        assert_eq!(g.values_complex(), back.values_complex());
    }
}
