//! Sheaf cohomology on F.

mod complex;
mod engine;
pub mod tables;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use complex::{Ambient, AmbientComplex, LineComplex, PolyMatrix};
pub use engine::hyper_dims;

use crate::error::{Error, Result};
use crate::field::{q, Field, Scalar};
use crate::ring::Bidegree;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    ClosedForm,
    ExactHyper,
    LesDerived,
    ChiOnly,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Provenance::ClosedForm => "closed-form",
            Provenance::ExactHyper => "exact-hyper",
            Provenance::LesDerived => "les-derived",
            Provenance::ChiOnly => "chi-only",
        };
        f.write_str(s)
    }
}

/// (h⁰, h¹, h², h³) with provenance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohVector {
    pub h: [usize; 4],
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<String>,
}

impl CohVector {
    pub fn new(h: [usize; 4], provenance: Provenance) -> Self {
        CohVector { h, provenance, trace: Vec::new() }
    }

    pub fn chi(&self) -> i64 {
        self.h[0] as i64 - self.h[1] as i64 + self.h[2] as i64 - self.h[3] as i64
    }

    pub fn is_zero(&self) -> bool {
        self.h == [0; 4]
    }

    fn from_hyper(dims: &BTreeMap<i32, usize>) -> Result<Self> {
        let mut h = [0; 4];
        for (&d, &v) in dims {
            if !(0..=3).contains(&d) {
                return Err(Error::Shape(format!("hypercohomology in degree {d} (dimension {v})")));
            }
            h[d as usize] = v;
        }
        Ok(CohVector::new(h, Provenance::ExactHyper))
    }
}

impl fmt::Display for CohVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.h[0], self.h[1], self.h[2], self.h[3])
    }
}

/// Cohomology of O_F(a,b) in closed form.
pub fn h_line(d: Bidegree) -> CohVector {
    let (a1, a2) = if d.a <= d.b { (d.a as i64, d.b as i64) } else { (d.b as i64, d.a as i64) };
    let value = ((a1 + 1) * (a2 + 1) * (a1 + a2 + 2) / 2).unsigned_abs() as usize;
    let mut h = [0; 4];
    let slot = if a1 >= 0 {
        Some(0)
    } else if a1 <= -2 && a1 + a2 + 1 >= 0 {
        Some(1)
    } else if a2 >= 0 && a1 + a2 + 3 <= 0 {
        Some(2)
    } else if a2 <= -2 {
        Some(3)
    } else {
        None
    };
    if let Some(i) = slot {
        h[i] = value;
    }
    CohVector::new(h, Provenance::ClosedForm)
}

/// Hypercohomology of a complex of line bundles on F, by total degree.
pub fn hyper_degrees<F: Field>(c: &LineComplex<F>) -> Result<BTreeMap<i32, usize>> {
    hyper_dims(&c.ambient()?)
}

/// Exact hypercohomology of a complex of line bundles on F.
pub fn hypercohomology<F: Field>(c: &LineComplex<F>) -> Result<CohVector> {
    CohVector::from_hyper(&hyper_degrees(c)?)
}

/// (t+1)(2t² + 4t + 2(1−k)).
pub fn hilbert_poly(k: i64, t: i64) -> Scalar {
    q((t + 1) * (2 * t * t + 4 * t + 2 * (1 - k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Scalar;
    use crate::ring::BiPoly;

    fn b(a: i32, c: i32) -> Bidegree {
        Bidegree::new(a, c)
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(h_line(b(1, 1)).h, [8, 0, 0, 0]);
        assert_eq!(h_line(b(-2, 1)).h, [0, 1, 0, 0]);
        assert_eq!(h_line(b(-2, -2)).h, [0, 0, 0, 1]);
        assert_eq!(h_line(b(-1, 5)).h, [0, 0, 0, 0]);
    }

    #[test]
    fn single_line_bundles_match_closed_form() {
        for a in -3..=3 {
            for c in -3..=3 {
                let got = hypercohomology(&LineComplex::<Scalar>::single(b(a, c))).unwrap();
                assert_eq!(got.h, h_line(b(a, c)).h, "O({a},{c})");
            }
        }
    }

    #[test]
    fn koszul_of_x_is_exact() {
        // 0 → O(−3,0) → O(−2,0)³ → O(−1,0)³ → O → 0 is exact on P², hence on F.
        let x: Vec<BiPoly> = (0..3).map(BiPoly::var).collect();
        let z = BiPoly::zero;
        let d0 = PolyMatrix::from_rows(vec![vec![x[0].clone()], vec![x[1].clone()], vec![x[2].clone()]]);
        let d1 = PolyMatrix::from_rows(vec![
            vec![z(), x[2].neg(), x[1].clone()],
            vec![x[2].clone(), z(), x[0].neg()],
            vec![x[1].neg(), x[0].clone(), z()],
        ]);
        let d2 = PolyMatrix::from_rows(vec![vec![x[0].clone(), x[1].clone(), x[2].clone()]]);
        for t in [b(0, 0), b(1, -1), b(-1, 2), b(0, -3)] {
            let c = LineComplex {
                start: -3,
                terms: vec![vec![b(-3, 0)], vec![b(-2, 0); 3], vec![b(-1, 0); 3], vec![b(0, 0)]],
                maps: vec![d0.clone(), d1.clone(), d2.clone()],
            }
            .twist(t);
            assert!(hyper_degrees(&c).unwrap().is_empty(), "twist {t}");
        }
    }

    #[test]
    fn conic_structure_sheaf() {
        // O_C for C = {x2 = 0, y2 = 0}: Koszul on (x2, y2), h = (1,0,0,0).
        let x2 = BiPoly::var(2);
        let y2 = BiPoly::var(5);
        let c = LineComplex {
            start: -2,
            terms: vec![vec![b(-1, -1)], vec![b(-1, 0), b(0, -1)], vec![b(0, 0)]],
            maps: vec![
                PolyMatrix::from_rows(vec![vec![y2.clone()], vec![x2.neg()]]),
                PolyMatrix::from_rows(vec![vec![x2, y2]]),
            ],
        };
        assert_eq!(hypercohomology(&c).unwrap().h, [1, 0, 0, 0]);
    }

    #[test]
    fn composition_error_is_reported() {
        let x0 = BiPoly::var(0);
        let c = LineComplex {
            start: 0,
            terms: vec![vec![b(0, 0)], vec![b(1, 0)], vec![b(2, 0)]],
            maps: vec![PolyMatrix::from_rows(vec![vec![x0.clone()]]), PolyMatrix::from_rows(vec![vec![x0]])],
        };
        assert!(matches!(hypercohomology(&c), Err(Error::CompositionNonzero { .. })));
    }

    #[test]
    fn hilbert_examples() {
        assert_eq!(hilbert_poly(1, 0), q(0));
        assert_eq!(hilbert_poly(3, -1), q(0));
        assert_eq!(hilbert_poly(2, 1), q(8));
    }
}
