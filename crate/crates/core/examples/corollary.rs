//! The L → ∞ limit as a q-series identity with theta functions, compared up
//! to a fixed order.

use slcoset::branching::corollary_check;
use slcoset::Rat;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (n, order) in [(2, 8), (3, 6)] {
        for j in 0..n {
            for k in 0..n {
                let out = corollary_check(n, j, k, Rat::from_integer(order), 64)?;
                println!(
                    "n = {n} j = {j} k = {k}: stable from L = {}, {} up to q^{order}",
                    out.stable_length, out.verdict
                );
                if (n, j, k) == (2, 0, 0) {
                    println!("  series: {}", out.theta);
                }
            }
        }
    }
    Ok(())
}
