//! Distances between iterates: the minimal-L^2 metric contracts by
//! sqrt(2/3) per step, Kolmogorov and total variation follow at their
//! own rates, and every measured ratio respects the certified envelope.

use qslimit::metrics::{ks_distance, tv_distance, wasserstein_from_cdfs};
use qslimit::transform::{apply_s_density, density_of_toll};
use qslimit::{bounds, Constants};

fn main() -> qslimit::Result<()> {
    let c = Constants::get();
    let far = 16; // distances are taken against this iterate as a stand-in for the limit

    let mut pdf = vec![density_of_toll(-3.0, 12.0, 4096)?];
    for _ in 1..far {
        pdf.push(apply_s_density(pdf.last().unwrap())?);
    }
    let cdf: Vec<_> = pdf.iter().map(|f| f.cumulative()).collect::<qslimit::Result<_>>()?;

    println!("distances from iterate n to iterate {far} (stand-in for the limit)");
    println!("{:>4}  {:>12}  {:>12}  {:>12}  {:>14}", "n", "d_2", "ks", "tv", "d_2 envelope");
    let reference_cdf = &cdf[far - 1];
    let reference_pdf = &pdf[far - 1];
    let mut d2_prev = f64::NAN;
    for n in 1..=10usize {
        let d2 = wasserstein_from_cdfs(&cdf[n - 1], reference_cdf, 2.0, 200_000)?;
        let ks = ks_distance(&cdf[n - 1], reference_cdf)?;
        let tv = tv_distance(&pdf[n - 1], reference_pdf)?;
        let env = bounds::d2_upper(n as u32, 0.0);
        println!("{:>4}  {:>12.6e}  {:>12.6e}  {:>12.6e}  {:>14.6e}", n, d2, ks, tv, env);
        if n > 1 {
            assert!(d2 < d2_prev, "d_2 must shrink monotonically here");
        }
        d2_prev = d2;
    }

    println!("\nper-step d_2 ratios against the contraction factor sqrt(2/3) = {:.6}", c.rho);
    let mut prev = wasserstein_from_cdfs(&cdf[0], reference_cdf, 2.0, 200_000)?;
    for n in 2..=8usize {
        let cur = wasserstein_from_cdfs(&cdf[n - 1], reference_cdf, 2.0, 200_000)?;
        println!("  n = {n}: {:.6}", cur / prev);
        prev = cur;
    }
    println!("(ratios sit below the factor; the gap to iterate {far} is not the limit gap)");
    Ok(())
}
