//! Closed-form certificates: the c_p ladder for the characteristic
//! function tail, the three sup-norm error routes, total variation,
//! the right-tail bound, and the convergence rate envelopes.

use qslimit::{bounds, Constants};

fn main() -> qslimit::Result<()> {
    let c = Constants::get();
    let a = c.sigma();

    println!("cf tail constants, |E e^{{itY}}| <= c_p |t|^{{-p}}");
    for p in [1.5, 2.5, 3.5, 4.5] {
        println!("  c_{p} = {:.6e}  (valid for iterates n >= {})", bounds::cp(p)?, bounds::cp_min_n(p));
    }

    println!("\nsup-norm error sup |f_n - f| at A = sigma = {a:.6}");
    println!("{:>5}  {:>12}  {:>12}  {:>12}  {:>10}", "n", "general", "mid-range", "asymptotic", "best");
    for n in [10u32, 25, 50, 100, 150, 200] {
        let rep = bounds::density_sup_error(n, a, 3.5);
        println!(
            "{:>5}  {:>12.4e}  {:>12.4e}  {:>12.4e}  {:>10}",
            n, rep.inputs["fn1"], rep.inputs["fn2"], rep.inputs["fn3"], rep.name
        );
    }

    println!("\ntotal variation d_TV(Z_n, Y)");
    for n in [10u32, 50, 100, 200] {
        let rep = bounds::tv_error(n, a);
        println!("  n = {n:<4} {:.4e}", rep.value);
    }

    // the bound underflows f64 on its whole validity range; log it is
    println!("\nright tail P(Y > y) <= exp(-y ln y + ...) past 2 e^{{L0}} = {:.6}", 2.0 * c.l0.exp());
    for y in [303.0, 500.0, 1000.0] {
        let rep = bounds::tail_upper(y);
        println!("  y = {y:<6} log bound = {:.2}  valid = {}", rep.inputs["log_value"], rep.valid);
    }

    println!("\nd_2 upper envelope (2/3)^{{n/2}} sqrt(var_0 + sigma^2)");
    for n in [0u32, 5, 10, 20] {
        println!("  n = {n:<3} d_2 <= {:.6e}", bounds::d2_upper(n, 0.0));
    }

    println!("\nlower rate exponents per moment order p");
    println!("{:>3}  {:>10}  {:>10}  {:>10}  {:>10}", "p", "d_p", "d_2 sup", "ks/tv sup", "r_p");
    for p in [2u32, 3, 4, 5] {
        let lr = bounds::lower_rates(p)?;
        let rp = lr.rp.map_or("-".to_string(), |r| format!("{r:.6}"));
        println!("{:>3}  {:>10.6}  {:>10.6}  {:>10.6}  {:>10}", p, lr.dp_rate, lr.d2_rate_sup, lr.ks_rate_sup, rp);
    }

    // geometric upper rate: sqrt(2/3) up to the crossover p0, then (2/(p+1))^{1/p}
    println!("\nd_p geometric upper rate (crossover p0 = {:.4})", c.p0);
    for p in [2.0, 4.0, c.p0, 8.0, 12.0] {
        println!("  p = {p:<7.4} rate = {:.6}", bounds::dp_upper_rate(p, 1e-3));
    }
    Ok(())
}
