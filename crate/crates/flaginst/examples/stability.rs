//! Stability trichotomy for charge 1, simplicity and symplectic structures.

use flaginst::field::q;
use flaginst::monad::{charge1_family, charge2_example, hom_dim, self_dual_form, stability_decide};

fn main() -> flaginst::Result<()> {
    let z = || [q(0), q(0), q(0)];
    let cases = [
        ("generic", charge1_family([q(1), q(2), q(3)], [q(-1), q(0), q(2)], q(1), q(1))),
        ("g = 0", charge1_family([q(1), q(2), q(3)], z(), q(1), q(1))),
        ("f = g = 0", charge1_family(z(), z(), q(1), q(1))),
        ("charge 2 example", charge2_example()),
    ];
    for (name, m) in cases {
        let sd = self_dual_form(&m, 0).map(|s| s.j.rows);
        println!("{name:>17}: {}, hom(E,E) = {}, symplectic J: {sd:?}", stability_decide(&m)?, hom_dim(&m, &m));
    }
    Ok(())
}
