//! Seeded generation of charge-k monads.
//!
//! cargo run --release --example generate -- [k] [seed]

use flaginst::monad::{generate_mon2, verify_monad, VerifyConfig};

fn main() -> flaginst::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let k = args.first().copied().unwrap_or(2) as usize;
    let seed = args.get(1).copied().unwrap_or(0);
    let cfg = VerifyConfig::default();
    let (m, data, log) = generate_mon2(k, seed, 100, &cfg)?;
    println!("charge {k}, seed {seed}: {} attempt(s), {:?} strategy", log.attempts, data.strategy);
    println!("left {:?}\nright {:?}\nmiddle rank {}", m.left, m.right, m.middle.len());
    println!("verification passed: {}", verify_monad(&m, &cfg).passed());
    println!("h(E) = {}", m.cohomology(flaginst::Bidegree::ZERO)?);
    Ok(())
}
