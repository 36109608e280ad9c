//! Parents, reduction to a parent, regeneration, and the sector census.

use slcoset::kgraphs::graph_from_path;
use slcoset::paths::{enumerate_paths, PathClass};
use slcoset::sectors::{generate, reduce, sector_census};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (n, length, k) = (4, 6, 0);
    let class = PathClass::new(n, 0, 0, k)?;
    for p in enumerate_paths(&class, length) {
        let g = graph_from_path(&p);
        let red = reduce(&g)?;
        let back = generate(&red.label, &red.fill, length)?;
        println!(
            "{}  ->  parent {} fill {}  (round trip {})",
            p.iota(),
            red.label,
            red.fill,
            back == g
        );
    }

    let census = sector_census(n, length, k as usize)?;
    println!("\nsector census for n = {n}, L = {length}, k = {k}:");
    for row in &census.rows {
        println!(
            "  m = {}  ℓ = {:?}  count {}  {}  [{}]",
            row.label,
            row.ell,
            row.count,
            row.observed,
            if row.holds() { "matches" } else { "DIFFERS" }
        );
    }
    println!("total {} over {} graphs", census.total, census.path_count);
    Ok(())
}
