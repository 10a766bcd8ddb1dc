//! Iterative radix-2 FFT, just big enough for the density convolutions.
//!
//! Twiddle factors are tabulated once per transform size so repeated
//! calls (one convolution per quadrature node) share the setup cost.

use num_complex::Complex64;

pub(crate) struct Fft {
    n: usize,
    /// `twiddles[k] = exp(-2 pi i k / n)` for `k < n / 2`.
    twiddles: Vec<Complex64>,
}

impl Fft {
    pub fn new(n: usize) -> Self {
        assert!(n.is_power_of_two() && n >= 2, "fft size must be a power of two");
        let step = -2.0 * std::f64::consts::PI / n as f64;
        let twiddles = (0..n / 2)
            .map(|k| Complex64::from_polar(1.0, step * k as f64))
            .collect();
        Fft { n, twiddles }
    }

    pub fn forward(&self, a: &mut [Complex64]) {
        assert_eq!(a.len(), self.n);
        let n = self.n;
        // bit-reversal permutation
        let mut j = 0usize;
        for i in 1..n {
            let mut bit = n >> 1;
            while j & bit != 0 {
                j ^= bit;
                bit >>= 1;
            }
            j |= bit;
            if i < j {
                a.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= n {
            let stride = n / len;
            for chunk in a.chunks_mut(len) {
                for i in 0..len / 2 {
                    let u = chunk[i];
                    let v = chunk[i + len / 2] * self.twiddles[i * stride];
                    chunk[i] = u + v;
                    chunk[i + len / 2] = u - v;
                }
            }
            len <<= 1;
        }
    }

    pub fn inverse(&self, a: &mut [Complex64]) {
        for z in a.iter_mut() {
            *z = z.conj();
        }
        self.forward(a);
        let s = 1.0 / self.n as f64;
        for z in a.iter_mut() {
            *z = z.conj() * s;
        }
    }
}

/// Linear convolution of two real sequences, scaled by `h` so the result
/// approximates `(f * g)(x)` when the inputs sample densities with spacing
/// `h`. Output length is the fft size; entries past `a.len() + b.len() - 2`
/// are zero up to rounding.
pub(crate) fn convolve(fft: &Fft, a: &[f64], b: &[f64], h: f64) -> Vec<f64> {
    let m = fft.n;
    assert!(a.len() + b.len() - 1 <= m, "fft size too small for linear convolution");
    let mut fa: Vec<Complex64> = a.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    fa.resize(m, Complex64::new(0.0, 0.0));
    let mut fb: Vec<Complex64> = b.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    fb.resize(m, Complex64::new(0.0, 0.0));
    fft.forward(&mut fa);
    fft.forward(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= y;
    }
    fft.inverse(&mut fa);
    fa.into_iter().map(|z| z.re * h).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn naive_dft(a: &[Complex64]) -> Vec<Complex64> {
        let n = a.len();
        (0..n)
            .map(|k| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (j, &x) in a.iter().enumerate() {
                    let ang = -2.0 * std::f64::consts::PI * (j * k) as f64 / n as f64;
                    acc += x * Complex64::from_polar(1.0, ang);
                }
                acc
            })
            .collect()
    }

    #[test]
    fn matches_naive_dft() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a: Vec<Complex64> = (0..32)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let want = naive_dft(&a);
        let fft = Fft::new(32);
        let mut got = a.clone();
        fft.forward(&mut got);
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).norm() < 1e-12);
        }
    }

    #[test]
    fn inverse_undoes_forward() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a: Vec<Complex64> = (0..1024)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let fft = Fft::new(1024);
        let mut b = a.clone();
        fft.forward(&mut b);
        fft.inverse(&mut b);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn convolution_matches_direct_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a: Vec<f64> = (0..40).map(|_| rng.gen_range(0.0..1.0)).collect();
        let b: Vec<f64> = (0..25).map(|_| rng.gen_range(0.0..1.0)).collect();
        let h = 0.125;
        let fft = Fft::new(128);
        let c = convolve(&fft, &a, &b, h);
        for s in 0..a.len() + b.len() - 1 {
            let mut direct = 0.0;
            for k in 0..a.len() {
                if s >= k && s - k < b.len() {
                    direct += a[k] * b[s - k];
                }
            }
            assert!((c[s] - direct * h).abs() < 1e-12, "mismatch at lag {s}");
        }
        for s in a.len() + b.len() - 1..c.len() {
            assert!(c[s].abs() < 1e-12);
        }
    }
}
