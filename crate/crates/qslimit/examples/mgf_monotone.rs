//! The moment-generating-function iterates bracket the limit: starting
//! from the point mass the iterates only grow, starting from a normal
//! with variance 2 they only shrink on the controlled window, and the
//! closed-form envelope e^{K lambda^2} caps everything in sight.

use qslimit::transform::apply_s_mgf;
use qslimit::{bounds, StartLaw};

fn main() -> qslimit::Result<()> {
    // 241 points on [-4, 4] puts lambda = 1/3 and 0.4 exactly on grid
    let (lo, hi, pts) = (-4.0, 4.0, 241);
    let probes = [110usize, 120, 130, 132]; // lambda = -1/3, 0, 1/3, 0.4

    let mut below = StartLaw::PointMassZero.mgf_grid(lo, hi, pts)?;
    let mut above = StartLaw::normal(2.0)?.mgf_grid(lo, hi, pts)?;
    assert!((below.x(130) - 1.0 / 3.0).abs() < 1e-12);

    println!("psi_n(1/3) from both starts; the bracket closes on the limit");
    println!("{:>4}  {:>18}  {:>18}  {:>12}", "n", "from delta_0", "from N(0,2)", "width");
    for n in 0..=14u32 {
        let b = below.values_real()[130];
        let a = above.values_real()[130];
        println!("{:>4}  {:>18.12}  {:>18.12}  {:>12.3e}", n, b, a, a - b);
        below = apply_s_mgf(&below)?;
        above = apply_s_mgf(&above)?;
    }

    println!("\nmonotonicity at the probe points (14 steps)");
    let mut worse_up: f64 = 0.0;
    let mut worse_down: f64 = 0.0;
    let mut lower = StartLaw::PointMassZero.mgf_grid(lo, hi, pts)?;
    let mut upper = StartLaw::normal(2.0)?.mgf_grid(lo, hi, pts)?;
    for _ in 0..14 {
        let next_l = apply_s_mgf(&lower)?;
        let next_u = apply_s_mgf(&upper)?;
        for &i in &probes {
            worse_up = worse_up.max(lower.values_real()[i] - next_l.values_real()[i]);
            if lower.x(i).abs() <= 0.42 {
                worse_down = worse_down.max(next_u.values_real()[i] - upper.values_real()[i]);
            }
        }
        lower = next_l;
        upper = next_u;
    }
    println!("  largest decrease from below: {worse_up:.3e} (should be ~0)");
    println!("  largest increase from above: {worse_down:.3e} (should be ~0)");

    println!("\nenvelope check, psi_14 from delta_0 against e^{{K lambda^2}}");
    for &i in &probes {
        let l = lower.x(i);
        println!(
            "  lambda = {:>7.4}   psi = {:>12.9}   envelope = {:>12.9}",
            l,
            lower.values_real()[i],
            bounds::ymgf_upper(l)
        );
    }

    // convergence certificate; needs |lambda| inside half the window
    let rep = bounds::mgf_conv_error(14, 0.2, 2.0, 1.0, 0.42);
    println!(
        "\ncertified |psi_14 - psi_Y| at lambda = 0.2, N(0,2) start: {:.3e} (valid = {})",
        rep.value, rep.valid
    );
    Ok(())
}
