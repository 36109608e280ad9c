//! Level-2 paths, their energies and the energy generating function.

use slcoset::paths::{brute_b, enumerate_paths, ground_state_path, PathClass};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let class = PathClass::new(3, 0, 0, 1)?;
    let length = 6;
    println!("{class}, L = {length}");
    println!(
        "ground state: {}",
        ground_state_path(&PathClass::new(3, 0, 0, 0)?, length).iota()
    );
    for p in enumerate_paths(&class, length) {
        println!("  ι = {}  E = {}", p.iota(), p.energy());
    }
    println!("Σ q^E = {}", brute_b(&class, length));
    Ok(())
}
