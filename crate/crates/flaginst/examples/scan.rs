//! Jumping orders on random conics, written as CSV.
//!
//! cargo run --release --example scan -- [n] [seed] > scan.csv

use flaginst::jump::scan_grid_jobs;
use flaginst::monad::{generate_mon2, VerifyConfig};

fn main() -> flaginst::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let n = args.first().copied().unwrap_or(100) as usize;
    let seed = args.get(1).copied().unwrap_or(1);
    let (m, _, _) = generate_mon2(1, seed, 100, &VerifyConfig::default())?;
    let rep = scan_grid_jobs(&m, n, seed, 4)?;
    print!("{}", rep.to_csv()?);
    eprintln!("{}", rep.summary_json()?);
    Ok(())
}
