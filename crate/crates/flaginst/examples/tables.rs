//! Both cohomology tables for generated monads of charge 1 and 2.

use flaginst::cohom::tables::{beilinson_table, Which};
use flaginst::monad::{generate_mon2, VerifyConfig};

fn main() -> flaginst::Result<()> {
    for k in 1..=2 {
        let (m, _, _) = generate_mon2(k, 0, 100, &VerifyConfig::default())?;
        for which in [Which::First, Which::Second] {
            println!("k = {k}, {which:?} table:\n{}", beilinson_table(&m, which)?);
        }
    }
    Ok(())
}
