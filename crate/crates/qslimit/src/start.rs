//! Starting laws for the fixed-point iteration.
//!
//! Iteration may begin from a point mass at 0, a centered normal, a
//! centered-by-construction uniform, or an arbitrary density grid loaded
//! from a file. Each starting law knows how to render itself as a density,
//! characteristic function, or moment generating function grid, and how to
//! report its first moments and a scale for iteration error estimates.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{GridFunction, GridKind};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum StartLaw {
    /// Point mass at zero. The canonical start: iterate n is then exactly
    /// the law of the depth-n truncated recursion cost.
    PointMassZero,
    /// Centered normal with the given variance.
    Normal { variance: f64 },
    /// Uniform on `[lo, hi]`. Must be centered (`lo + hi = 0`) because the
    /// fixed-point map preserves mean zero only from mean-zero starts.
    Uniform { lo: f64, hi: f64 },
    /// Arbitrary density loaded from a grid file.
    Grid(GridFunction),
}

impl StartLaw {
    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) {
            return Err(Error::Domain(format!("uniform: need lo < hi, got [{lo}, {hi}]")));
        }
        if (lo + hi).abs() > 1e-12 * (hi - lo) {
            return Err(Error::Domain(format!(
                "uniform start must have mean zero, got mean {}",
                0.5 * (lo + hi)
            )));
        }
        Ok(StartLaw::Uniform { lo, hi })
    }

    pub fn normal(variance: f64) -> Result<Self> {
        if !(variance > 0.0 && variance.is_finite()) {
            return Err(Error::Domain(format!("normal: bad variance {variance}")));
        }
        Ok(StartLaw::Normal { variance })
    }

    pub fn from_grid(g: GridFunction) -> Result<Self> {
        if g.kind != GridKind::Density {
            return Err(Error::Domain("grid start must be a density".into()));
        }
        let mean = g.mean();
        if mean.abs() > 1e-6 {
            return Err(Error::Domain(format!(
                "grid start must have mean zero, got {mean:.3e}"
            )));
        }
        Ok(StartLaw::Grid(g))
    }

    /// Parse a CLI-style description: `point` (alias `delta0`),
    /// `normal:VAR`, `uniform:LO:HI`, or `grid:PATH` (JSON grid file).
    pub fn parse(s: &str) -> Result<Self> {
        let mut parts = s.split(':');
        match parts.next().unwrap_or("") {
            "point" | "delta0" => Ok(StartLaw::PointMassZero),
            "normal" => {
                let v: f64 = parts
                    .next()
                    .ok_or_else(|| Error::Parse("normal:VAR needs a variance".into()))?
                    .parse()
                    .map_err(|e| Error::Parse(format!("normal variance: {e}")))?;
                Self::normal(v)
            }
            "uniform" => {
                let lo: f64 = parts
                    .next()
                    .ok_or_else(|| Error::Parse("uniform:LO:HI needs bounds".into()))?
                    .parse()
                    .map_err(|e| Error::Parse(format!("uniform lo: {e}")))?;
                let hi: f64 = parts
                    .next()
                    .ok_or_else(|| Error::Parse("uniform:LO:HI needs bounds".into()))?
                    .parse()
                    .map_err(|e| Error::Parse(format!("uniform hi: {e}")))?;
                Self::uniform(lo, hi)
            }
            "grid" => {
                let path = parts
                    .next()
                    .ok_or_else(|| Error::Parse("grid:PATH needs a path".into()))?;
                Self::from_grid(GridFunction::read_json(std::path::Path::new(path))?)
            }
            other => Err(Error::Parse(format!(
                "unknown start law '{other}' (expected point | normal:VAR | uniform:LO:HI | grid:PATH)"
            ))),
        }
    }

    /// Short text form; inverse of [`StartLaw::parse`] except for grids,
    /// whose file path is not retained.
    pub fn descriptor(&self) -> String {
        match self {
            StartLaw::PointMassZero => "point".to_string(),
            StartLaw::Normal { variance } => format!("normal:{variance}"),
            StartLaw::Uniform { lo, hi } => format!("uniform:{lo}:{hi}"),
            StartLaw::Grid(_) => "grid".to_string(),
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            StartLaw::PointMassZero => 0.0,
            StartLaw::Normal { .. } => 0.0,
            StartLaw::Uniform { lo, hi } => 0.5 * (lo + hi),
            StartLaw::Grid(g) => g.mean(),
        }
    }

    pub fn variance(&self) -> f64 {
        match self {
            StartLaw::PointMassZero => 0.0,
            StartLaw::Normal { variance } => *variance,
            StartLaw::Uniform { lo, hi } => (hi - lo) * (hi - lo) / 12.0,
            StartLaw::Grid(g) => g.variance(),
        }
    }

    /// Wasserstein-2 distance to the limit law, used as the initial slack
    /// for the geometric contraction estimate. The limit has variance
    /// `sigma2`, so `d_2(start, limit) <= sqrt(var(start)) + sigma`; for
    /// the point mass the distance is exactly `sigma`.
    pub fn error_scale(&self, sigma: f64) -> f64 {
        match self {
            StartLaw::PointMassZero => sigma,
            _ => self.variance().sqrt() + sigma,
        }
    }

    /// Raw moments `E W^0 .. E W^p`.
    pub fn moments(&self, p: usize) -> Vec<f64> {
        let mut m = vec![0.0; p + 1];
        m[0] = 1.0;
        match self {
            StartLaw::PointMassZero => {}
            StartLaw::Normal { variance } => {
                // E W^{2k} = (2k-1)!! var^k
                for k in (2..=p).step_by(2) {
                    m[k] = m[k - 2] * (k - 1) as f64 * variance;
                }
            }
            StartLaw::Uniform { lo, hi } => {
                // E W^k = (hi^{k+1} - lo^{k+1}) / ((k+1)(hi - lo))
                for (k, mk) in m.iter_mut().enumerate().skip(1) {
                    *mk = (hi.powi(k as i32 + 1) - lo.powi(k as i32 + 1))
                        / ((k + 1) as f64 * (hi - lo));
                }
            }
            StartLaw::Grid(g) => {
                for (k, mk) in m.iter_mut().enumerate().skip(1) {
                    *mk = g.moment(k as u32);
                }
            }
        }
        m
    }

    /// Render as a density grid with `n` samples on `[lo, hi]`.
    ///
    /// The point mass has no density; callers that iterate densities from
    /// it should take one analytic step first (see
    /// [`crate::transform::density::density_of_toll`]).
    pub fn density_grid(&self, lo: f64, hi: f64, n: usize) -> Result<GridFunction> {
        let h = (hi - lo) / (n - 1) as f64;
        let xs = |i: usize| lo + i as f64 * h;
        match self {
            StartLaw::PointMassZero => Err(Error::Domain(
                "point mass has no density; start density iteration from \
                 the one-step law instead"
                    .into(),
            )),
            StartLaw::Normal { variance } => {
                let norm = 1.0 / (2.0 * std::f64::consts::PI * variance).sqrt();
                let vals = (0..n)
                    .map(|i| norm * (-xs(i) * xs(i) / (2.0 * variance)).exp())
                    .collect();
                GridFunction::density(lo, hi, vals, 1e-9f64.max(gaussian_tail_mass(lo, hi, *variance)))
            }
            StartLaw::Uniform { lo: a, hi: b } => {
                if *a < lo || *b > hi {
                    return Err(Error::Domain(
                        "uniform support does not fit inside the grid".into(),
                    ));
                }
                // hat-average the indicator so mass is exact on the grid
                let dens = 1.0 / (b - a);
                let vals = (0..n)
                    .map(|i| {
                        let l = (xs(i) - 0.5 * h).max(*a);
                        let r = (xs(i) + 0.5 * h).min(*b);
                        if r > l { dens * (r - l) / h } else { 0.0 }
                    })
                    .collect();
                GridFunction::density(lo, hi, vals, 1e-9)
            }
            StartLaw::Grid(g) => {
                let vals = (0..n).map(|i| g.interp_linear(xs(i))).collect();
                GridFunction::density(lo, hi, vals, g.tol_mass.max(1e-6))
            }
        }
    }

    /// Render as a characteristic function grid on `[0, t_max]`.
    pub fn cf_grid(&self, t_max: f64, n: usize) -> Result<GridFunction> {
        let h = t_max / (n - 1) as f64;
        let vals: Vec<Complex64> = match self {
            StartLaw::PointMassZero => (0..n).map(|_| Complex64::new(1.0, 0.0)).collect(),
            StartLaw::Normal { variance } => (0..n)
                .map(|i| {
                    let t = i as f64 * h;
                    Complex64::new((-0.5 * variance * t * t).exp(), 0.0)
                })
                .collect(),
            StartLaw::Uniform { lo, hi } => (0..n)
                .map(|i| {
                    let t = i as f64 * h;
                    // centered uniform: E e^{itW} = sin(bt)/(bt), b = hi
                    let bt = hi * t;
                    let re = if bt.abs() < 1e-8 {
                        1.0 - bt * bt / 6.0
                    } else {
                        bt.sin() / bt
                    };
                    let _ = lo;
                    Complex64::new(re, 0.0)
                })
                .collect(),
            StartLaw::Grid(g) => {
                // trapezoid transform of the density
                let dv = g.values_real();
                let gh = g.spacing();
                (0..n)
                    .map(|i| {
                        let t = i as f64 * h;
                        let mut acc = Complex64::new(0.0, 0.0);
                        for (j, f) in dv.iter().enumerate() {
                            let w = if j == 0 || j == dv.len() - 1 { 0.5 } else { 1.0 };
                            let x = g.x(j);
                            acc += w * f * Complex64::new(0.0, t * x).exp();
                        }
                        acc * gh
                    })
                    .collect()
            }
        };
        GridFunction::cf(t_max, vals, 0.0)
    }

    /// Render as a moment generating function grid on `[lo, hi]`.
    pub fn mgf_grid(&self, lo: f64, hi: f64, n: usize) -> Result<GridFunction> {
        let h = (hi - lo) / (n - 1) as f64;
        let vals: Vec<f64> = match self {
            StartLaw::PointMassZero => vec![1.0; n],
            StartLaw::Normal { variance } => (0..n)
                .map(|i| {
                    let l = lo + i as f64 * h;
                    (0.5 * variance * l * l).exp()
                })
                .collect(),
            StartLaw::Uniform { lo: a, hi: b } => (0..n)
                .map(|i| {
                    let l = lo + i as f64 * h;
                    if l.abs() < 1e-8 {
                        let m2 = (b - a) * (b - a) / 12.0;
                        1.0 + 0.5 * m2 * l * l
                    } else {
                        ((l * b).exp() - (l * a).exp()) / (l * (b - a))
                    }
                })
                .collect(),
            StartLaw::Grid(g) => {
                let dv = g.values_real();
                let gh = g.spacing();
                (0..n)
                    .map(|i| {
                        let l = lo + i as f64 * h;
                        let mut acc = 0.0;
                        for (j, f) in dv.iter().enumerate() {
                            let w = if j == 0 || j == dv.len() - 1 { 0.5 } else { 1.0 };
                            acc += w * f * (l * g.x(j)).exp();
                        }
                        acc * gh
                    })
                    .collect()
            }
        };
        GridFunction::mgf(lo, hi, vals, 0.0)
    }

    /// Draw one sample.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            StartLaw::PointMassZero => 0.0,
            StartLaw::Normal { variance } => {
                // Box-Muller
                let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
                let u2: f64 = rng.gen::<f64>();
                (variance.sqrt()) * (-2.0 * u1.ln()).sqrt()
                    * (2.0 * std::f64::consts::PI * u2).cos()
            }
            StartLaw::Uniform { lo, hi } => rng.gen_range(*lo..*hi),
            StartLaw::Grid(g) => {
                // inverse-CDF on the trapezoid cumulative
                let u: f64 = rng.gen::<f64>();
                let cdf = g.cumulative().expect("grid start has a valid cumulative");
                let v = cdf.values_real();
                let k = v.partition_point(|c| *c < u);
                if k == 0 {
                    return cdf.lo;
                }
                if k >= v.len() {
                    return cdf.hi;
                }
                let (c0, c1) = (v[k - 1], v[k]);
                let frac = if c1 > c0 { (u - c0) / (c1 - c0) } else { 0.5 };
                cdf.x(k - 1) + frac * cdf.spacing()
            }
        }
    }
}

/// Two-sided tail mass of N(0, var) outside [lo, hi], overestimated via the
/// standard Mills bound `P(Z > z) <= exp(-z^2/2) / (z sqrt(2 pi))`.
fn gaussian_tail_mass(lo: f64, hi: f64, var: f64) -> f64 {
    let s = var.sqrt();
    let tail = |z: f64| {
        if z <= 0.0 {
            return 0.5;
        }
        (-0.5 * z * z).exp() / (z * (2.0 * std::f64::consts::PI).sqrt())
    };
    tail(-lo / s) + tail(hi / s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn parse_matches_constructors() {
        assert!(matches!(StartLaw::parse("point").unwrap(), StartLaw::PointMassZero));
        match StartLaw::parse("normal:0.84").unwrap() {
            StartLaw::Normal { variance } => assert_eq!(variance, 0.84),
            _ => panic!(),
        }
        match StartLaw::parse("uniform:-1:1").unwrap() {
            StartLaw::Uniform { lo, hi } => {
                assert_eq!(lo, -1.0);
                assert_eq!(hi, 1.0);
            }
            _ => panic!(),
        }
        assert!(StartLaw::parse("uniform:0:1").is_err()); // not centered
        assert!(StartLaw::parse("cauchy").is_err());
    }

    #[test]
    fn uniform_moments_match_closed_form() {
        let law = StartLaw::uniform(-1.0, 1.0).unwrap();
        let m = law.moments(6);
        assert_abs_diff_eq!(m[2], 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m[3], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m[4], 1.0 / 5.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m[6], 1.0 / 7.0, epsilon = 1e-15);
    }

    #[test]
    fn normal_moments_follow_double_factorial() {
        let law = StartLaw::normal(0.7).unwrap();
        let m = law.moments(8);
        assert_abs_diff_eq!(m[2], 0.7, epsilon = 1e-15);
        assert_abs_diff_eq!(m[4], 3.0 * 0.7f64.powi(2), epsilon = 1e-15);
        assert_abs_diff_eq!(m[6], 15.0 * 0.7f64.powi(3), epsilon = 1e-14);
        assert_abs_diff_eq!(m[8], 105.0 * 0.7f64.powi(4), epsilon = 1e-13);
    }

    #[test]
    fn uniform_density_grid_has_exact_mass_and_mean() {
        let law = StartLaw::uniform(-1.0, 1.0).unwrap();
        let g = law.density_grid(-3.0, 3.0, 1537).unwrap();
        assert_abs_diff_eq!(g.trapezoid(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(g.mean(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(g.variance(), 1.0 / 3.0, epsilon = 1e-5);
    }

    #[test]
    fn cf_grids_match_transforms() {
        let t_max = 5.0;
        let n = 101;
        let law = StartLaw::normal(0.42).unwrap();
        let cf = law.cf_grid(t_max, n).unwrap();
        let v = cf.values_complex();
        let t = 3.0 * t_max / (n - 1) as f64;
        assert_abs_diff_eq!(v[3].re, (-0.5 * 0.42 * t * t).exp(), epsilon = 1e-14);

        // grid-rendered CF of a uniform matches the sinc closed form
        let ulaw = StartLaw::uniform(-1.0, 1.0).unwrap();
        let ug = ulaw.density_grid(-1.5, 1.5, 6001).unwrap();
        let gcf = StartLaw::Grid(ug).cf_grid(t_max, n).unwrap();
        let scf = ulaw.cf_grid(t_max, n).unwrap();
        for (a, b) in gcf.values_complex().iter().zip(scf.values_complex()) {
            assert_abs_diff_eq!(a.re, b.re, epsilon = 2e-4);
            assert_abs_diff_eq!(a.im, 0.0, epsilon = 2e-4);
        }
    }

    #[test]
    fn mgf_grid_of_point_mass_is_one() {
        let g = StartLaw::PointMassZero.mgf_grid(-4.0, 4.0, 161).unwrap();
        assert!(g.values_real().iter().all(|v| *v == 1.0));
    }

    #[test]
    fn sampling_matches_moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let law = StartLaw::uniform(-2.0, 2.0).unwrap();
        let n = 20_000;
        let mut s1 = 0.0;
        let mut s2 = 0.0;
        for _ in 0..n {
            let x = law.sample(&mut rng);
            s1 += x;
            s2 += x * x;
        }
        let mean = s1 / n as f64;
        let var = s2 / n as f64 - mean * mean;
        assert!(mean.abs() < 0.03, "mean {mean}");
        assert!((var - 4.0 / 3.0).abs() < 0.05, "var {var}");
    }
}
