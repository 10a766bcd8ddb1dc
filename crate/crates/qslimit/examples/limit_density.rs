//! Iterate the density pipeline from the point mass at zero and watch the
//! iterates settle on the limit: mass, mean and variance per step, a few
//! quantiles of the final iterate, and the certified sup-norm error.

use qslimit::transform::{apply_s_density, density_of_toll};
use qslimit::{bounds, Constants};

fn main() -> qslimit::Result<()> {
    let c = Constants::get();
    let n = 25;

    println!("density iterates from delta_0 on [-3, 12] x 4096");
    println!("{:>4}  {:>12}  {:>13}  {:>13}", "n", "mass", "mean", "variance");
    let mut f = density_of_toll(-3.0, 12.0, 4096)?;
    for step in 1..=n {
        if [1, 2, 3, 5, 8, 12, 18, n].contains(&step) {
            println!(
                "{:>4}  {:>12.9}  {:>13.6e}  {:>13.9}",
                step,
                f.trapezoid(),
                f.mean(),
                f.variance()
            );
        }
        if step < n {
            f = apply_s_density(&f)?;
        }
    }
    println!("limit variance sigma^2 = {:.9}", c.sigma2);

    let cdf = f.cumulative()?;

    // invert the cdf by bisection on the grid; good to one spacing
    let quantile = |q: f64| {
        let vals = cdf.values_real();
        let i = vals.partition_point(|&v| v < q);
        cdf.x(i.min(vals.len() - 1))
    };
    println!("\nquantiles of the n = {n} iterate (grid resolution {:.4})", f.spacing());
    for q in [0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99] {
        println!("  q = {:>4}   x = {:>9.5}", q, quantile(q));
    }

    let rep = bounds::density_sup_error(n, c.sigma(), 3.5);
    println!("\ncertified sup-norm error of the n = {n} iterate: {:.3e} ({})", rep.value, rep.name);
    println!("carried mass budget: {:.3e}", f.tol_mass);
    Ok(())
}
