//! Exact polynomials in fractional powers of q.

use slcoset::qseries::{gaussian, inv_q_pochhammer, multinomial, QPoly};
use slcoset::Rat;

fn main() {
    let g = gaussian(6, 3);
    println!("[6;3]_q = {g}");
    println!("at q = 1: {}", g.eval_at_one());

    let m = multinomial(5, &[2, 2, 1]);
    println!("[5; 2,2,1]_q = {m}");

    let half = QPoly::q_pow(Rat::new(1, 2));
    let p = &(&QPoly::one() - &half) * &(&QPoly::one() + &half);
    println!("(1 - q^(1/2))(1 + q^(1/2)) = {p}");

    let order = Rat::from_integer(10);
    println!("1/(q)_3 up to q^10 = {}", inv_q_pochhammer(3, order));
    println!(
        "as JSON: {}",
        serde_json::to_string(&gaussian(3, 1)).unwrap()
    );
}
