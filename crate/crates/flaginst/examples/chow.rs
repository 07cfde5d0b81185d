//! Chow ring of F and Riemann–Roch for instanton twists.

use flaginst::chow::{chern_twist, chi_rr, degree, eval_expr, ChernData};
use flaginst::field::scalar_to_string;
use flaginst::Bidegree;

fn main() -> flaginst::Result<()> {
    for e in ["(h1+h2)^3", "h1^2*h2", "h1*h2", "(1+h1)*(1+h2)"] {
        let c = eval_expr(e)?;
        println!("{e:>16} = {c}   (degree {})", scalar_to_string(&degree(&c)));
    }
    for k in 1..=3 {
        let e = ChernData::instanton(k);
        let g2 = ChernData::g2();
        let t = |a, b| scalar_to_string(&chi_rr(&chern_twist(&e, Bidegree::new(a, b))));
        println!(
            "k = {k}: chi(E) = {}, chi(E(0,-1)) = {}, chi(E⊗G2(0,-2)) = {}",
            t(0, 0),
            t(0, -1),
            scalar_to_string(&chi_rr(&chern_twist(&e.tensor(&g2), Bidegree::new(0, -2))))
        );
    }
    Ok(())
}
