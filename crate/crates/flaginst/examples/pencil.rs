//! Count the jumping conics in pencils through a base conic.
//!
//! cargo run --release --example pencil -- [charge] [seed]

use flaginst::curves::{pencil, ConicPoint, Side};
use flaginst::field::q;
use flaginst::jump::pencil_jump_count;
use flaginst::monad::{charge1_family, generate_mon2, VerifyConfig};

fn main() -> flaginst::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let k = args.first().copied().unwrap_or(1) as usize;
    let seed = args.get(1).copied().unwrap_or(7);
    let m = if k == 1 {
        charge1_family([q(1), q(2), q(3)], [q(-1), q(0), q(2)], q(1), q(1))
    } else {
        generate_mon2(k, seed, 50, &VerifyConfig::default())?.0
    };
    let base = ConicPoint::from_ints([1, -2, 1], [2, 1, 3])?;
    for side in [Side::P, Side::L] {
        let spec = pencil(&base, side, [q(3), q(1), q(-1)])?;
        let cert = pencil_jump_count(&m, &spec)?;
        println!("{side:?} pencil through {base}:\n{cert}");
    }
    Ok(())
}
