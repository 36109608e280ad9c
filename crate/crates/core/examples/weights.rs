//! Fundamental weights, the invariant form and the affine Weyl group action.

use slcoset::weights::{
    bilinear, finite_weyl_apply, fundamental, rho, translation, CartanData, Permutation, RootVector,
};
use slcoset::Rat;

fn show(v: &[Rat]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 4usize;
    println!("(Λ_i|Λ_j) for sl({n}):");
    for i in 0..n as i64 {
        let row: Vec<String> = (0..n as i64)
            .map(|j| Ok(bilinear(&fundamental(n, i)?, &fundamental(n, j)?).to_string()))
            .collect::<Result<_, slcoset::weights::WeightError>>()?;
        println!("  {}", row.join("\t"));
    }

    let cd = CartanData::new(n)?;
    println!("C^-1:");
    for row in cd.cinv() {
        println!("  {}", show(row));
    }

    let lam = &fundamental(n, 1)? + &rho(n)?;
    let beta = RootVector::from_simple_roots(&[1, 0, -1])?;
    let w = Permutation::transposition(n, 0, 2);
    let image = finite_weyl_apply(&w, &translation(&beta, &lam));
    println!("λ = Λ1 + ρ, |λ|² = {}", lam.norm_sq());
    println!(
        "w̄·t_β(λ) = {} (level {}, δ {})",
        show(image.classical()),
        image.level(),
        image.delta_coeff()
    );
    println!(
        "|w̄·t_β(λ)|² = {} (sign of w̄ = {})",
        image.norm_sq(),
        w.sign()
    );
    assert_eq!(image.norm_sq(), lam.norm_sq());
    Ok(())
}
