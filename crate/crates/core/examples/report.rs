//! Grid verification with a JSON report, as driven by the command-line tool.

use slcoset::harness::{cmd_verify, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = RunConfig::with_ranks(vec![(2, 6), (3, 5)]);
    let report = cmd_verify(&cfg)?;
    eprint!("{}", report.table());
    let json = report.to_json()?;
    println!("{}", &json[..json.len().min(600)]);
    println!("...\nsuccess: {}", report.is_success());
    Ok(())
}
