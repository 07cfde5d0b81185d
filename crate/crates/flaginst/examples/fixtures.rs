//! Verify the built-in monads and print their reports.

use flaginst::field::q;
use flaginst::monad::{charge1_family, charge2_example, split_charge1, verify_monad, VerifyConfig};

fn main() {
    let cfg = VerifyConfig::default();
    let named = [
        ("charge 1, f=(1,2,3) g=(-1,0,2)", charge1_family([q(1), q(2), q(3)], [q(-1), q(0), q(2)], q(1), q(1))),
        ("split O(1,-1)+O(-1,1)", split_charge1()),
        ("charge 2 example", charge2_example()),
    ];
    for (name, m) in named {
        let rep = verify_monad(&m, &cfg);
        let c = rep.chern.as_ref().expect("chern data");
        println!("{name}: passed = {}, c2 = {}, D(A) = {:?}", rep.passed(), c.c2, rep.determinant);
    }
}
