//! Monads of line bundles on F and their cohomology bundles.

mod generate;
mod hom;
mod verify;

use serde::{Deserialize, Serialize};

pub use generate::{augment, augment_and_trim, generate_mon2, trim_units, GenerationLog, Mon2Data, Strategy};
pub use hom::{hom_dim, self_dual_form, stability_decide, SelfDuality, Stability};
pub use verify::{monad_chern, section_matrix, verify_monad, RankFailure, VerificationReport, VerifyConfig};

use crate::cohom::{hypercohomology, CohVector, LineComplex, PolyMatrix};
use crate::error::{Error, Result};
use crate::field::{parse_scalar, scalar_to_string, Field, Scalar};
use crate::linalg::Matrix;
use crate::ring::{BiPoly, Bidegree};

/// L →A M →B N with cohomology ker B / im A in the middle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineBundleMonad {
    pub charge: usize,
    pub left: Vec<Bidegree>,
    pub middle: Vec<Bidegree>,
    pub right: Vec<Bidegree>,
    /// middle × left
    pub a: PolyMatrix<Scalar>,
    /// right × middle
    pub b: PolyMatrix<Scalar>,
    /// Constant skew form on the middle term, if known.
    pub j: Option<Matrix<Scalar>>,
}

fn x(i: usize) -> BiPoly {
    BiPoly::var(i)
}

fn y(i: usize) -> BiPoly {
    BiPoly::var(3 + i)
}

fn cross_x(u: &[Scalar; 3]) -> [BiPoly; 3] {
    // u × x
    let l = |a: usize, b: usize| x(b).scale(&u[a]).sub(&x(a).scale(&u[b]));
    [l(1, 2), l(2, 0), l(0, 1)]
}

fn cross_y(u: &[Scalar; 3]) -> [BiPoly; 3] {
    let l = |a: usize, b: usize| y(b).scale(&u[a]).sub(&y(a).scale(&u[b]));
    [l(1, 2), l(2, 0), l(0, 1)]
}

/// The standard shape: O(−1,0)^k ⊕ O(0,−1)^k → O^{4k+2} → O(1,0)^k ⊕ O(0,1)^k.
pub fn standard_twists(k: usize, middle: usize) -> (Vec<Bidegree>, Vec<Bidegree>, Vec<Bidegree>) {
    let mut left = vec![Bidegree::new(-1, 0); k];
    left.extend(vec![Bidegree::new(0, -1); k]);
    let mut right = vec![Bidegree::new(1, 0); k];
    right.extend(vec![Bidegree::new(0, 1); k]);
    (left, vec![Bidegree::ZERO; middle], right)
}

impl LineBundleMonad {
    pub fn complex(&self) -> LineComplex<Scalar> {
        LineComplex {
            start: -1,
            terms: vec![self.left.clone(), self.middle.clone(), self.right.clone()],
            maps: vec![self.a.clone(), self.b.clone()],
        }
    }

    pub fn complex_over<F: Field>(&self) -> Option<LineComplex<F>> {
        let conv = |m: &PolyMatrix<Scalar>| -> Option<PolyMatrix<F>> {
            let entries = m.entries.iter().map(|p| p.to_field::<F>()).collect::<Option<Vec<_>>>()?;
            Some(PolyMatrix { rows: m.rows, cols: m.cols, entries })
        };
        Some(LineComplex {
            start: -1,
            terms: vec![self.left.clone(), self.middle.clone(), self.right.clone()],
            maps: vec![conv(&self.a)?, conv(&self.b)?],
        })
    }

    /// Exact cohomology of E(t).
    pub fn cohomology(&self, t: Bidegree) -> Result<CohVector> {
        hypercohomology(&self.complex().twist(t))
    }

    pub fn rank(&self) -> i64 {
        self.middle.len() as i64 - self.left.len() as i64 - self.right.len() as i64
    }

    /// Exchange the two factors of P²×P².
    pub fn swap_factors(&self) -> Self {
        LineBundleMonad {
            charge: self.charge,
            left: self.left.iter().map(|d| d.swap()).collect(),
            middle: self.middle.iter().map(|d| d.swap()).collect(),
            right: self.right.iter().map(|d| d.swap()).collect(),
            a: self.a.map(|p| p.swap_factors()),
            b: self.b.map(|p| p.swap_factors()),
            j: self.j.clone(),
        }
    }

    /// Replace (A, B) by (g_M A g_L⁻¹, g_N B g_M⁻¹) for constant invertible matrices.
    pub fn change_basis(&self, g_l: &Matrix<Scalar>, g_m: &Matrix<Scalar>, g_n: &Matrix<Scalar>) -> Result<Self> {
        let inv = |g: &Matrix<Scalar>| g.inverse().ok_or_else(|| Error::Shape("singular change of basis".into()));
        let (gli, gmi) = (inv(g_l)?, inv(g_m)?);
        let c = PolyMatrix::from_constants;
        let a = c(g_m).mul(&self.a).mul(&c(&gli));
        let b = c(g_n).mul(&self.b).mul(&c(&gmi));
        let j = self.j.as_ref().map(|j| gmi.transpose().mul(j).mul(&gmi));
        Ok(LineBundleMonad { a, b, j, ..self.clone() })
    }

    /// The trivial monad with cohomology O^r.
    pub fn trivial(r: usize) -> Self {
        LineBundleMonad {
            charge: 0,
            left: vec![],
            middle: vec![Bidegree::ZERO; r],
            right: vec![],
            a: PolyMatrix::zeros(r, 0),
            b: PolyMatrix::zeros(0, r),
            j: None,
        }
    }
}

/// The five-parameter charge-1 family in the standard shape.
///
/// `f`, `g` are the coefficient vectors of the Koszul syzygies f × x and
/// g × y; `gamma` multiplies the flag syzygy in the O(0,−1) column and
/// `delta` the one in the O(−1,0) column.
pub fn charge1_family(f: [Scalar; 3], g: [Scalar; 3], gamma: Scalar, delta: Scalar) -> LineBundleMonad {
    let (left, middle, right) = standard_twists(1, 6);
    let fx = cross_x(&f);
    let gy = cross_y(&g);
    let mut a = PolyMatrix::zeros(6, 2);
    for i in 0..3 {
        a.set(i, 0, fx[i].clone());
        a.set(3 + i, 0, x(i).scale(&delta));
        a.set(i, 1, y(i).scale(&gamma));
        a.set(3 + i, 1, gy[i].clone());
    }
    let mut b = PolyMatrix::zeros(2, 6);
    for i in 0..3 {
        b.set(0, i, x(i));
        b.set(1, 3 + i, y(i));
    }
    LineBundleMonad { charge: 1, left, middle, right, a, b, j: None }
}

/// Split charge-1 monad with cohomology O(1,−1) ⊕ O(−1,1).
pub fn split_charge1() -> LineBundleMonad {
    let z = || [<Scalar as Field>::zero(), <Scalar as Field>::zero(), <Scalar as Field>::zero()];
    charge1_family(z(), z(), <Scalar as Field>::one(), <Scalar as Field>::one())
}

/// The charge-2 example, transcribed as published.
pub fn charge2_example() -> LineBundleMonad {
    let p = |s: &str| crate::ring::parse_poly(s).expect("fixture polynomial");
    let z = BiPoly::zero;
    const A: [[&str; 4]; 10] = [
        ["-y0", "0", "-x0-x2", "0"],
        ["-y1", "0", "-x2", "-x0"],
        ["0", "0", "0", "-x2"],
        ["y0", "y2", "0", "-x1"],
        ["y2", "y0", "0", "0"],
        ["y0+y1", "y2", "0", "-x1"],
        ["0", "y1", "0", "0"],
        ["y1", "0", "0", "x0"],
        ["0", "0", "x0", "x1"],
        ["-y2", "0", "x0+x1", "0"],
    ];
    const B: [[&str; 10]; 4] = [
        ["x0", "x1", "0", "0", "0", "0", "0", "0", "x0", "x2"],
        ["0", "x0", "x1", "0", "0", "0", "0", "x0", "x2", "0"],
        ["0", "0", "-y2", "-y1", "0", "0", "y2", "y0", "0", "0"],
        ["0", "0", "0", "-y2", "-y1", "y2", "y0", "0", "0", "0"],
    ];
    let conv = |s: &str| if s == "0" { z() } else { p(s) };
    let a = PolyMatrix::from_rows(A.iter().map(|r| r.iter().map(|s| conv(s)).collect()).collect());
    let b = PolyMatrix::from_rows(B.iter().map(|r| r.iter().map(|s| conv(s)).collect()).collect());
    // Columns 1,2 of A are y-linear, columns 3,4 x-linear.
    let left = vec![Bidegree::new(0, -1), Bidegree::new(0, -1), Bidegree::new(-1, 0), Bidegree::new(-1, 0)];
    let right = vec![Bidegree::new(1, 0), Bidegree::new(1, 0), Bidegree::new(0, 1), Bidegree::new(0, 1)];
    LineBundleMonad { charge: 2, left, middle: vec![Bidegree::ZERO; 10], right, a, b, j: None }
}



/// JSON form of a monad.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonadRecord {
    pub charge: usize,
    pub left: Vec<Bidegree>,
    pub middle: Vec<Bidegree>,
    pub right: Vec<Bidegree>,
    #[serde(rename = "A")]
    pub a: Vec<Vec<BiPoly>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<BiPoly>>,
    #[serde(rename = "J", default, skip_serializing_if = "Option::is_none")]
    pub j: Option<Vec<Vec<String>>>,
}

fn matrix_rows(m: &PolyMatrix<Scalar>) -> Vec<Vec<BiPoly>> {
    (0..m.rows).map(|i| (0..m.cols).map(|j| m.get(i, j).clone()).collect()).collect()
}

impl From<&LineBundleMonad> for MonadRecord {
    fn from(m: &LineBundleMonad) -> Self {
        MonadRecord {
            charge: m.charge,
            left: m.left.clone(),
            middle: m.middle.clone(),
            right: m.right.clone(),
            a: matrix_rows(&m.a),
            b: matrix_rows(&m.b),
            j: m.j.as_ref().map(|j| {
                (0..j.rows).map(|r| (0..j.cols).map(|c| scalar_to_string(j.get(r, c))).collect()).collect()
            }),
        }
    }
}

impl TryFrom<MonadRecord> for LineBundleMonad {
    type Error = Error;
    fn try_from(r: MonadRecord) -> Result<Self> {
        let mat = |rows: Vec<Vec<BiPoly>>, nr: usize, nc: usize, name: &str| -> Result<PolyMatrix<Scalar>> {
            if rows.len() != nr || rows.iter().any(|x| x.len() != nc) {
                return Err(Error::Shape(format!("{name} must be {nr}x{nc}")));
            }
            Ok(if nr == 0 { PolyMatrix::zeros(0, nc) } else { PolyMatrix::from_rows(rows) })
        };
        let a = mat(r.a, r.middle.len(), r.left.len(), "A")?;
        let b = mat(r.b, r.right.len(), r.middle.len(), "B")?;
        let j = match r.j {
            None => None,
            Some(rows) => {
                let n = r.middle.len();
                if rows.len() != n || rows.iter().any(|x| x.len() != n) {
                    return Err(Error::Shape(format!("J must be {n}x{n}")));
                }
                let vals = rows
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|s| parse_scalar(s).ok_or_else(|| Error::Parse(format!("bad rational {s:?}"))))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                Some(Matrix::from_rows(vals))
            }
        };
        Ok(LineBundleMonad { charge: r.charge, left: r.left, middle: r.middle, right: r.right, a, b, j })
    }
}

impl LineBundleMonad {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&MonadRecord::from(self)).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let r: MonadRecord = serde_json::from_str(s)?;
        LineBundleMonad::try_from(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohom::h_line;
    use crate::field::q;

    #[test]
    fn charge1_composes_to_zero() {
        let m = charge1_family([q(1), q(2), q(-1)], [q(0), q(3), q(1)], q(2), q(-5));
        m.complex().validate().unwrap();
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn charge2_transcription_composes_to_zero() {
        charge2_example().complex().validate().unwrap();
    }

    #[test]
    fn json_round_trip_is_byte_stable() {
        let m = charge2_example();
        let s = m.to_json();
        let back = LineBundleMonad::from_json(&s).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.to_json(), s);
    }

    #[test]
    fn split_fixture_cohomology() {
        let m = split_charge1();
        assert!(m.cohomology(Bidegree::ZERO).unwrap().is_zero());
        assert!(m.cohomology(Bidegree::new(-1, -1)).unwrap().is_zero());
        // E(−1,1) = O ⊕ O(−2,2)
        let expect = [h_line(Bidegree::ZERO).h, h_line(Bidegree::new(-2, 2)).h];
        let sum: Vec<usize> = (0..4).map(|i| expect[0][i] + expect[1][i]).collect();
        assert_eq!(m.cohomology(Bidegree::new(-1, 1)).unwrap().h.to_vec(), sum);
    }
}
