//! Beilinson-type cohomology tables of monads.

use std::fmt;

use serde::Serialize;

use super::{hypercohomology, CohVector, LineComplex, PolyMatrix, Provenance};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::monad::LineBundleMonad;
use crate::ring::{BiPoly, Bidegree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Which {
    First,
    Second,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Column {
    pub label: String,
    /// Row of the top cohomology group in the printed layout.
    pub offset: usize,
    pub coh: CohVector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BeilinsonTable {
    pub which: Which,
    pub columns: Vec<Column>,
}

/// G_i(t) as the kernel of the Euler map, [O(1,0)³ → O(2,0)] in degrees 0, 1.
pub fn g_presentation(i: usize, t: Bidegree) -> LineComplex<Scalar> {
    let (one, two, off) = match i {
        1 => (Bidegree::new(1, 0), Bidegree::new(2, 0), 0),
        2 => (Bidegree::new(0, 1), Bidegree::new(0, 2), 3),
        _ => panic!("G{i} has no Euler presentation"),
    };
    let row: Vec<BiPoly> = (0..3).map(|j| BiPoly::var(off + j)).collect();
    LineComplex { start: 0, terms: vec![vec![one; 3], vec![two]], maps: vec![PolyMatrix::from_rows(vec![row])] }
        .twist(t)
}

/// H•(E ⊗ G_i(t)).
pub fn tensor_g(m: &LineBundleMonad, i: usize, t: Bidegree) -> Result<CohVector> {
    hypercohomology(&m.complex().tensor(&g_presentation(i, t)))
}

/// h•(B) for 0 → A → B → C → 0 from the long exact sequence, when every
/// connecting map is forced to vanish by a zero flank.
pub fn les_middle(label: &str, a: &CohVector, c: &CohVector) -> Result<CohVector> {
    let mut h = [0usize; 4];
    let mut lo_hi = [(0i64, 0i64); 4];
    for i in 0..4 {
        // rank δ_{i−1}: H^{i−1}(C) → H^i(A), rank δ_i: H^i(C) → H^{i+1}(A)
        let before = if i > 0 { c.h[i - 1].min(a.h[i]) } else { 0 };
        let after = if i < 3 { c.h[i].min(a.h[i + 1]) } else { 0 };
        let top = (a.h[i] + c.h[i]) as i64;
        lo_hi[i] = (top - before as i64 - after as i64, top);
        h[i] = top as usize;
    }
    for (i, (lo, hi)) in lo_hi.iter().enumerate() {
        if lo != hi {
            return Err(Error::Undetermined { column: label.into(), index: i, lo: (*lo).max(0), hi: *hi });
        }
    }
    let mut v = CohVector::new(h, Provenance::LesDerived);
    v.trace = vec![
        format!("H({label}) from 0 -> E⊗G2(0,-2) -> {label} -> E(-1,0)^3 -> 0"),
        format!("flanks {a} and {c}; all connecting maps vanish"),
    ];
    Ok(v)
}

fn scaled(v: &CohVector, n: usize) -> CohVector {
    CohVector::new([v.h[0] * n, v.h[1] * n, v.h[2] * n, v.h[3] * n], v.provenance)
}

/// E ⊗ G4 through the sequence 0 → G2(0,−2) → G4 → O(−1,0)³ → 0.
pub fn tensor_g4(m: &LineBundleMonad) -> Result<CohVector> {
    let a = tensor_g(m, 2, Bidegree::new(0, -2))?;
    let c = scaled(&m.cohomology(Bidegree::new(-1, 0))?, 3);
    les_middle("E⊗G4", &a, &c)
}

pub fn beilinson_table(m: &LineBundleMonad, which: Which) -> Result<BeilinsonTable> {
    let t = Bidegree::new;
    let col = |label: &str, offset: usize, coh: CohVector| Column { label: label.into(), offset, coh };
    let mut columns = vec![
        col("E(-1,-1)", 0, m.cohomology(t(-1, -1))?),
        col("E⊗G2(-1,-1)", 0, tensor_g(m, 2, t(-1, -1))?),
        col("E⊗G1(-1,-1)", 1, tensor_g(m, 1, t(-1, -1))?),
    ];
    match which {
        Which::First => {
            columns.push(col("E(-1,0)", 1, m.cohomology(t(-1, 0))?));
            columns.push(col("E(0,-1)", 2, m.cohomology(t(0, -1))?));
            columns.push(col("E", 2, m.cohomology(t(0, 0))?));
        }
        Which::Second => {
            columns.push(col("E⊗G4", 1, tensor_g4(m)?));
            columns.push(col("E(0,-1)", 1, m.cohomology(t(0, -1))?));
            columns.push(col("E(-1,0)", 2, m.cohomology(t(-1, 0))?));
        }
    }
    Ok(BeilinsonTable { which, columns })
}

impl fmt::Display for BeilinsonTable {
    /// Six rows; column c shows H^{3−r+offset} in row r.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self.columns.iter().map(|c| c.label.chars().count()).max().unwrap_or(1) + 2;
        for r in 0..6i64 {
            for c in &self.columns {
                let j = 3 - r + c.offset as i64;
                let v = if (0..=3).contains(&j) { c.coh.h[j as usize] } else { 0 };
                write!(f, "{:^w$}", v)?;
            }
            writeln!(f)?;
        }
        for c in &self.columns {
            write!(f, "{:^w$}", c.label)?;
        }
        writeln!(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monad::{charge1_family, charge2_example};
    use crate::field::q;

    #[test]
    fn g_presentation_cohomology() {
        // G1 = p1*Ω(2): h⁰ = 3, and G1(−1,0) = ker(O³ → O(1,0)) has no cohomology.
        let g = hypercohomology(&g_presentation(1, Bidegree::ZERO)).unwrap();
        assert_eq!(g.h, [3, 0, 0, 0]);
        let g = hypercohomology(&g_presentation(1, Bidegree::new(-1, 0))).unwrap();
        assert_eq!(g.h, [0, 0, 0, 0]);
    }

    #[test]
    fn charge1_first_table() {
        let m = charge1_family([q(1), q(2), q(3)], [q(-1), q(0), q(2)], q(1), q(1));
        let t = beilinson_table(&m, Which::First).unwrap();
        let h: Vec<[usize; 4]> = t.columns.iter().map(|c| c.coh.h).collect();
        assert_eq!(h, vec![[0; 4], [0, 1, 0, 0], [0, 1, 0, 0], [0, 1, 0, 0], [0, 1, 0, 0], [0; 4]]);
    }

    #[test]
    fn charge2_g4_column() {
        let m = charge2_example();
        let g4 = tensor_g4(&m).unwrap();
        assert_eq!(g4.h, [0, 10, 0, 0]);
        assert_eq!(g4.provenance, Provenance::LesDerived);
        let a = tensor_g(&m, 2, Bidegree::new(0, -2)).unwrap();
        assert_eq!(a.chi(), -4);
    }

    #[test]
    fn undetermined_is_reported() {
        let a = CohVector::new([0, 0, 2, 0], Provenance::ExactHyper);
        let c = CohVector::new([0, 1, 0, 0], Provenance::ExactHyper);
        assert!(matches!(les_middle("X", &a, &c), Err(Error::Undetermined { index: 1, .. })));
    }
}
