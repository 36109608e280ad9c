//! From a path to its interpolating matrix and K-graph.

use slcoset::kgraphs::{brute_f, domain_walls, graph_from_path, node_count_via_weights};
use slcoset::paths::{IntegerSequence, Path, PathClass};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let class = PathClass::new(4, 0, 0, 0)?;
    let p = Path::from_iota(class, IntegerSequence::new(4, vec![0, 0, 1, 1, 2, 3, 2])?)?;
    let walls: Vec<String> = domain_walls(p.iota())
        .iter()
        .map(|w| format!("{}:{}", w.position, w.height))
        .collect();
    println!(
        "ι = {}  walls (position:height) = {}",
        p.iota(),
        walls.join(" ")
    );

    let g = graph_from_path(&p);
    println!("K-graph {g}");
    println!(
        "{} nodes, via weights {}",
        g.node_count(),
        node_count_via_weights(&p)?
    );
    print!("{}", g.render_ascii());
    println!("admissible: {}", g.is_admissible());
    println!(
        "Σ q^(|G|/n) over the class at L = 6: {}",
        brute_f(&class, 6)
    );
    Ok(())
}
