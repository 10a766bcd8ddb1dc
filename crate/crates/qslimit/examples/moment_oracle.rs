//! Exact moment recursion: the limit moments E Y^k, the closed-form
//! variance map var_{n+1} = (2/3) var_n + sigma^2/3, and the geometric
//! decay E Z_n^p - E Y^p = (2/(p+1))^n (E Z_0^p - E Y^p).

use qslimit::moments::{apply_s_moments, limit_moments, shared_table, MomentVector};
use qslimit::{Constants, StartLaw};

fn main() -> qslimit::Result<()> {
    let c = Constants::get();
    let table = shared_table();
    let order = 10;

    let limit = limit_moments(order, table)?;
    println!("limit moments E Y^k");
    for k in 0..=order {
        println!("  k = {k:<3} {:.15e}", limit.values[k]);
    }
    println!("variance from the table: {:.15}", limit.variance());
    println!("sigma^2 exactly:         {:.15}", c.sigma2);

    println!("\nvariance of the iterates from delta_0, against (1 - (2/3)^n) sigma^2");
    let mut m = MomentVector::from_start(&StartLaw::PointMassZero, order)?;
    for n in 0..=12u32 {
        let closed = (1.0 - (2f64 / 3.0).powi(n as i32)) * c.sigma2;
        println!(
            "  n = {n:<3} var = {:.15}   closed form {:.15}   diff {:.1e}",
            m.variance(),
            closed,
            (m.variance() - closed).abs()
        );
        m = apply_s_moments(&m, table)?;
    }

    // Each order contracts at its own rate 2/(p+1), visible once the
    // lower moments are pinned to the limit's: the p-th gap then picks
    // up no cross terms and multiplies by exactly 2/(p+1) per step.
    println!("\nper-step gap ratios (E Z_(n+1)^p - E Y^p) / (E Z_n^p - E Y^p)");
    for p in 2..=5usize {
        let mut vals = limit.values[..=p].to_vec();
        vals[p] = 0.0; // any value different from E Y^p works
        let mut m = MomentVector::new(vals)?;
        let mut prev = m.values[p] - limit.values[p];
        print!("  p = {p}:");
        for _ in 0..4 {
            m = apply_s_moments(&m, table)?;
            let cur = m.values[p] - limit.values[p];
            print!("  {:.12}", cur / prev);
            prev = cur;
        }
        println!("   (exact {:.12})", 2.0 / (p as f64 + 1.0));
    }
    Ok(())
}
