use proptest::prelude::*;

use flaginst::chow::{chi_character, line_character, ChowClass};
use flaginst::cohom::h_line;
use flaginst::field::q;
use flaginst::ring::{flag_quadric, graded_basis, reduce};
use flaginst::{BiPoly, Bidegree, Scalar};

fn lin(off: usize, c: [i64; 3]) -> BiPoly {
    BiPoly::from_int_linear(off, &c)
}

fn coeffs() -> impl Strategy<Value = [i64; 3]> {
    prop::array::uniform3(-5i64..=5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn line_cohomology_matches_riemann_roch(a in -6i32..=6, b in -6i32..=6) {
        let d = Bidegree::new(a, b);
        let chi = chi_character(&line_character(d));
        prop_assert_eq!(chi, q(h_line(d).chi()));
    }

    #[test]
    fn serre_duality_on_lines(a in -6i32..=6, b in -6i32..=6) {
        // ω_F = O(−2,−2)
        let h = h_line(Bidegree::new(a, b)).h;
        let dual = h_line(Bidegree::new(-2 - a, -2 - b)).h;
        prop_assert_eq!(h, [dual[3], dual[2], dual[1], dual[0]]);
    }

    #[test]
    fn divisor_cube_degree(a in -8i64..=8, b in -8i64..=8) {
        let d = ChowClass::h1().scale(&q(a)).add(&ChowClass::h2().scale(&q(b)));
        prop_assert_eq!(d.pow(3).degree(), q(3 * a * b * (a + b)));
    }

    #[test]
    fn chow_product_is_commutative_and_associative(u in prop::array::uniform6(-4i64..=4), v in prop::array::uniform6(-4i64..=4), w in prop::array::uniform6(-4i64..=4)) {
        let (u, v, w) = (ChowClass::from_ints(u), ChowClass::from_ints(v), ChowClass::from_ints(w));
        prop_assert_eq!(u.mul(&v), v.mul(&u));
        prop_assert_eq!(u.mul(&v).mul(&w), u.mul(&v.mul(&w)));
    }

    #[test]
    fn reduction_kills_the_ideal(x in coeffs(), y in coeffs(), z in coeffs()) {
        let p = lin(0, x).mul(&lin(3, y));
        let f = flag_quadric::<Scalar>();
        prop_assert!(reduce(&p.mul(&f)).is_zero());
        let r = reduce(&p.mul(&lin(0, z)));
        prop_assert_eq!(reduce(&r), r.clone());
        prop_assert_eq!(reduce(&r.add(&f.mul(&lin(3, z)))), r);
    }

    #[test]
    fn graded_basis_has_h0_size(a in 0i32..=4, b in 0i32..=4) {
        let d = Bidegree::new(a, b);
        prop_assert_eq!(graded_basis(d).len(), h_line(d).h[0]);
    }
}
