//! Regenerates the six standard error tables for the two-mode model problem.
//!
//! cargo run --release --example reproduce_tables -- [id ...]

use fracell::experiments::reproduce_table;

fn main() -> fracell::Result<()> {
    let ids: Vec<u8> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let ids = if ids.is_empty() { (1..=6).collect() } else { ids };
    for id in ids {
        let t = reproduce_table(id)?;
        println!("{}", t.render());
    }
    Ok(())
}
