//! Cohomology of O(a,b): closed form against the Čech engine.

use flaginst::cohom::{h_line, hypercohomology, LineComplex};
use flaginst::{Bidegree, Scalar};

fn main() -> flaginst::Result<()> {
    for a in -3..=3 {
        let row: Vec<String> = (-3..=3)
            .map(|b| {
                let d = Bidegree::new(a, b);
                let exact = hypercohomology(&LineComplex::<Scalar>::single(d)).expect("line bundle");
                assert_eq!(exact.h, h_line(d).h);
                exact.to_string()
            })
            .collect();
        println!("a = {a:>2}: {}", row.join(" "));
    }
    println!("columns b = -3..3; every entry agrees with the closed form");
    Ok(())
}
