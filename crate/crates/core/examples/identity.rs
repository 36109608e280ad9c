//! Both closed forms of the finitized branching function and the identity
//! between them.

use slcoset::branching::{bosonic_b, fermionic_f, verify_identity};
use slcoset::kgraphs::brute_f;
use slcoset::paths::{brute_b, PathClass};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (n, length, j, k) = (3, 6, 1, 2);
    let class = PathClass::new(n, 0, j as i64, k as i64)?;

    let b = bosonic_b(&class, length)?;
    println!("bosonic   B = {b}");
    println!("paths     Σ q^E = {}", brute_b(&class, length));

    let f = fermionic_f(n, length, j, k)?;
    println!("fermionic F = {f}");
    println!("graphs    Σ q^(|G|/n) = {}", brute_f(&class, length));

    for l in 0..=8 {
        let cell = verify_identity(n, l, j, k)?;
        println!("L = {l}: {}", cell.verdict);
    }
    Ok(())
}
