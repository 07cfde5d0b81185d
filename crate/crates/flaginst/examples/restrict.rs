//! Splitting types on conics and lines.

use flaginst::curves::{conic_param, line_param, ConicPoint};
use flaginst::field::q;
use flaginst::monad::{charge1_family, split_charge1};
use flaginst::restrict::{jumping_order, splitting_type, Curve};

fn main() -> flaginst::Result<()> {
    let generic = charge1_family([q(1), q(2), q(3)], [q(-1), q(0), q(2)], q(1), q(1));
    for (name, m) in [("generic charge 1", generic), ("split", split_charge1())] {
        println!("{name}:");
        let c = ConicPoint::from_ints([1, 2, -1], [3, 1, 1])?;
        let st = splitting_type(&m, &Curve::Conic(conic_param(&c)?))?;
        println!("  conic {c}: {:?}", st.degrees);
        for fam in [1, 2] {
            let lp = line_param(fam, [q(2), q(-1), q(3)])?;
            println!("  line family {fam}: {:?}", splitting_type(&m, &Curve::Line(lp))?.degrees);
        }
        let nodal = ConicPoint::from_ints([1, 0, 0], [0, 1, 0])?;
        println!("  reducible conic {nodal}: order {:?}", jumping_order(&m, &nodal)?);
    }
    Ok(())
}
