use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::LineBundleMonad;
use crate::chow::{ChernData, ChowClass};
use crate::cohom::PolyMatrix;
use crate::error::{Error, Result};
use crate::field::{scalar_to_string, Field, Fp, Scalar, DEFAULT_PRIME};
use crate::linalg::Matrix;
use crate::ring::{graded_basis, Bidegree, Poly};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub prime: u64,
    pub trials: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { prime: DEFAULT_PRIME, trials: 40, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankFailure {
    pub map: String,
    /// (x0,x1,x2,y0,y1,y2) over F_p
    pub point: Vec<u64>,
    pub rank: usize,
    pub expected: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub prime: u64,
    pub trials: usize,
    /// Entries of B·A that survive reduction: (row, col, entry).
    pub composition: Vec<(usize, usize, String)>,
    pub bidegree: Vec<String>,
    pub reduction: Option<String>,
    pub rank_failure: Option<RankFailure>,
    /// Twist t at which the cokernel module of Aᵀ, resp. B, vanishes in degree (t,t).
    pub everywhere: Vec<(String, i32)>,
    pub degeneracy: Option<String>,
    /// Section-level determinant, computed for charge 1.
    pub determinant: Option<String>,
    pub self_duality: Option<String>,
    pub chern: Option<ChernData>,
    pub chern_failure: Option<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.composition.is_empty()
            && self.bidegree.is_empty()
            && self.reduction.is_none()
            && self.rank_failure.is_none()
            && self.degeneracy.is_none()
            && self.determinant.as_deref() != Some("0")
            && self.self_duality.is_none()
            && self.chern_failure.is_none()
    }

    /// The first failure as an error.
    pub fn error(&self, charge: usize) -> Option<Error> {
        if let Some((row, col, entry)) = self.composition.first() {
            return Some(Error::CompositionNonzero { term: 0, row: *row, col: *col, entry: entry.clone() });
        }
        if let Some(b) = self.bidegree.first() {
            return Some(Error::Shape(b.clone()));
        }
        if let Some(r) = &self.reduction {
            return Some(Error::Shape(r.clone()));
        }
        if let Some(f) = &self.rank_failure {
            return Some(Error::RankDropAt {
                map: f.map.clone(),
                point: format!("{:?}", f.point),
                rank: f.rank,
                expected: f.expected,
            });
        }
        if let Some(d) = &self.degeneracy {
            let (map, detail) = d.split_once(": ").unwrap_or(("A", d));
            return Some(Error::Degeneracy { map: map.into(), detail: detail.into() });
        }
        if self.determinant.as_deref() == Some("0") {
            return Some(Error::DeterminantZero);
        }
        if let Some(s) = &self.self_duality {
            return Some(Error::SelfDuality(s.clone()));
        }
        self.chern_failure.as_ref().map(|found| Error::ChernMismatch { charge, found: found.clone() })
    }
}

fn check_bidegrees(m: &PolyMatrix<Scalar>, src: &[Bidegree], tgt: &[Bidegree], name: &str, out: &mut Vec<String>) {
    if m.rows != tgt.len() || m.cols != src.len() {
        out.push(format!("{name} is {}x{}, expected {}x{}", m.rows, m.cols, tgt.len(), src.len()));
        return;
    }
    for i in 0..m.rows {
        for j in 0..m.cols {
            let e = m.get(i, j);
            if e.is_zero() {
                continue;
            }
            let want = tgt[i] - src[j];
            if e.bidegree() != Some(want) || !e.is_bihomogeneous() {
                out.push(format!("{name}[{i}][{j}] = {e} should have bidegree {want}"));
            }
        }
    }
}

/// A random point of F over F_p: x ≠ 0 and y = x × r ≠ 0.
fn random_flag_point(rng: &mut ChaCha8Rng) -> [Fp; 6] {
    let p = Fp::prime();
    loop {
        let x: [Fp; 3] = std::array::from_fn(|_| Fp::new(rng.gen_range(0..p)));
        let r: [Fp; 3] = std::array::from_fn(|_| Fp::new(rng.gen_range(0..p)));
        let y = [
            x[1].mul(&r[2]).sub(&x[2].mul(&r[1])),
            x[2].mul(&r[0]).sub(&x[0].mul(&r[2])),
            x[0].mul(&r[1]).sub(&x[1].mul(&r[0])),
        ];
        if x.iter().any(|v| !v.is_zero()) && y.iter().any(|v| !v.is_zero()) {
            return [x[0], x[1], x[2], y[0], y[1], y[2]];
        }
    }
}

fn eval_at(m: &PolyMatrix<Fp>, pt: &[Fp; 6]) -> Matrix<Fp> {
    let mut out = Matrix::zeros(m.rows, m.cols);
    for i in 0..m.rows {
        for j in 0..m.cols {
            out.set(i, j, m.get(i, j).eval(pt));
        }
    }
    out
}

fn to_fp(m: &PolyMatrix<Scalar>) -> Option<PolyMatrix<Fp>> {
    let entries = m.entries.iter().map(|p| p.to_field::<Fp>()).collect::<Option<Vec<Poly<Fp>>>>()?;
    Some(PolyMatrix { rows: m.rows, cols: m.cols, entries })
}

/// The map on global sections induced by `m: ⊕O(src) → ⊕O(tgt)`.
pub fn section_matrix(m: &PolyMatrix<Scalar>, src: &[Bidegree], tgt: &[Bidegree]) -> Matrix<Scalar> {
    let sb: Vec<_> = src.iter().map(|d| graded_basis(*d)).collect();
    let tb: Vec<_> = tgt.iter().map(|d| graded_basis(*d)).collect();
    let offsets = |bs: &[crate::ring::GradedBasis]| {
        let mut o = vec![0];
        for b in bs {
            o.push(o.last().unwrap() + b.len());
        }
        o
    };
    let (so, to) = (offsets(&sb), offsets(&tb));
    let mut out = Matrix::zeros(*to.last().unwrap(), *so.last().unwrap());
    for j in 0..src.len() {
        for (c, mono) in sb[j].monomials.iter().enumerate() {
            for i in 0..tgt.len() {
                let e = m.get(i, j);
                if e.is_zero() {
                    continue;
                }
                let img = e.mul(&Poly::monomial(*mono, <Scalar as Field>::one()));
                for (r, v) in tb[i].coordinates(&img).into_iter().enumerate() {
                    out.set(to[i] + r, so[j] + c, v);
                }
            }
        }
    }
    out
}

/// Twists tried past the first one at which the cokernel module is generated.
const SUPPORT_WINDOW: i32 = 4;

/// Certifies that `map: ⊕O(src) → ⊕O(tgt)` is surjective on every fiber.
///
/// The cokernel module M over the Cox ring is generated in degrees −tgt. If
/// M vanishes in some degree (t,t) above all generators, every monomial of
/// degree ≥ (t,t) kills M, so the cokernel sheaf is zero. Ranks are taken
/// mod p, which can only overstate the cokernel. Returns the certifying t.
fn everywhere_surjective(map: &PolyMatrix<Scalar>, src: &[Bidegree], tgt: &[Bidegree], prime: u64) -> std::result::Result<i32, String> {
    let t0 = tgt.iter().map(|d| (-d.a).max(-d.b)).max().unwrap_or(0).max(0);
    let mut last = 0;
    for t in t0..=t0 + SUPPORT_WINDOW {
        let tw = |ds: &[Bidegree]| ds.iter().map(|d| *d + Bidegree::new(t, t)).collect::<Vec<_>>();
        let s = section_matrix(map, &tw(src), &tw(tgt));
        let rank = Fp::with_prime(prime, || {
            let mut rows = Vec::with_capacity(s.rows);
            for i in 0..s.rows {
                let mut row = Vec::new();
                for j in 0..s.cols {
                    let v = s.get(i, j);
                    if !v.is_zero() {
                        row.push((j, Fp::from_scalar(v)?));
                    }
                }
                rows.push(row);
            }
            Some(crate::linalg::sparse_rank(rows))
        });
        let Some(rank) = rank else { return Err(format!("coefficients do not reduce modulo {prime}")) };
        if rank == s.rows {
            return Ok(t);
        }
        last = s.rows - rank;
    }
    Err(format!("cokernel still has dimension {last} in degree ({0},{0})", t0 + SUPPORT_WINDOW))
}

/// Chern data of the cohomology of a monad, by the Whitney formula.
pub fn monad_chern(m: &LineBundleMonad) -> Result<ChernData> {
    let total = |ds: &[Bidegree]| ds.iter().fold(ChowClass::one(), |acc, d| acc.mul(&ChowClass::one().add(&ChowClass::divisor(*d))));
    let c = total(&m.middle)
        .mul(&total(&m.left).inverse_unit()?)
        .mul(&total(&m.right).inverse_unit()?);
    ChernData::from_total(m.rank(), &c)
}

/// Exact composition check, Chern check, fiberwise rank checks over F_p,
/// a certificate that A and B have full rank at every point,
/// the symplectic-form check when J is present, and for charge 1 the
/// section-level determinant of B.
pub fn verify_monad(m: &LineBundleMonad, cfg: &VerifyConfig) -> VerificationReport {
    let mut rep = VerificationReport {
        prime: cfg.prime,
        trials: cfg.trials,
        composition: Vec::new(),
        bidegree: Vec::new(),
        reduction: None,
        rank_failure: None,
        everywhere: Vec::new(),
        degeneracy: None,
        determinant: None,
        self_duality: None,
        chern: None,
        chern_failure: None,
    };
    check_bidegrees(&m.a, &m.left, &m.middle, "A", &mut rep.bidegree);
    check_bidegrees(&m.b, &m.middle, &m.right, "B", &mut rep.bidegree);
    if !rep.bidegree.is_empty() {
        return rep;
    }
    let ba = m.b.mul(&m.a);
    for i in 0..ba.rows {
        for j in 0..ba.cols {
            if !ba.get(i, j).is_zero() {
                rep.composition.push((i, j, ba.get(i, j).to_string()));
            }
        }
    }

    match monad_chern(m) {
        Ok(c) => {
            if c != ChernData::instanton(m.charge as i64) {
                rep.chern_failure = Some(format!(
                    "rank {}, c1 = {}, c2 = {}, c3 = {}",
                    c.rank, c.c1, c.c2, c.c3
                ));
            }
            rep.chern = Some(c);
        }
        Err(e) => rep.chern_failure = Some(e.to_string()),
    }

    Fp::with_prime(cfg.prime, || {
        let (Some(a), Some(b)) = (to_fp(&m.a), to_fp(&m.b)) else {
            rep.reduction = Some(format!("coefficients do not reduce modulo {}", cfg.prime));
            return;
        };
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        for _ in 0..cfg.trials {
            let pt = random_flag_point(&mut rng);
            let checks = [("A", &a, m.left.len()), ("B", &b, m.right.len())];
            for (name, mat, expected) in checks {
                let rank = eval_at(mat, &pt).rank();
                if rank != expected {
                    rep.rank_failure = Some(RankFailure {
                        map: name.into(),
                        point: pt.iter().map(|v| v.0).collect(),
                        rank,
                        expected,
                    });
                    return;
                }
            }
        }
    });

    if rep.rank_failure.is_none() && rep.reduction.is_none() {
        let neg = |ds: &[Bidegree]| ds.iter().map(|d| -*d).collect::<Vec<_>>();
        let checks = [("A", m.a.transpose(), neg(&m.middle), neg(&m.left)), ("B", m.b.clone(), m.middle.clone(), m.right.clone())];
        for (name, map, src, tgt) in checks {
            match everywhere_surjective(&map, &src, &tgt, cfg.prime) {
                Ok(t) => rep.everywhere.push((name.into(), t)),
                Err(detail) => {
                    rep.degeneracy = Some(format!("{name}: {detail}"));
                    break;
                }
            }
        }
    }

    if let Some(j) = &m.j {
        rep.self_duality = check_j(m, j).err();
    }

    if m.charge == 1 {
        let s = section_matrix(&m.b, &m.middle, &m.right);
        if s.rows == s.cols {
            rep.determinant = Some(scalar_to_string(&s.det()));
        }
    }
    rep
}

/// J skew and invertible with B = ±AᵗJ.
fn check_j(m: &LineBundleMonad, j: &Matrix<Scalar>) -> std::result::Result<(), String> {
    let n = m.middle.len();
    if j.rows != n || j.cols != n {
        return Err(format!("J is {}x{}, expected {n}x{n}", j.rows, j.cols));
    }
    for r in 0..n {
        for c in 0..n {
            if j.get(r, c) != &j.get(c, r).neg() {
                return Err(format!("J is not skew at ({r},{c})"));
            }
        }
    }
    if j.det().is_zero() {
        return Err("J is singular".into());
    }
    let atj = m.a.transpose().mul(&PolyMatrix::from_constants(j));
    if atj == m.b || atj.neg() == m.b {
        Ok(())
    } else {
        Err("B differs from ±AᵗJ".into())
    }
}



#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::q;
    use crate::monad::{charge1_family, charge2_example, split_charge1};

    #[test]
    fn fixtures_verify() {
        let cfg = VerifyConfig::default();
        for m in [charge2_example(), split_charge1(), charge1_family([q(1), q(0), q(2)], [q(0), q(1), q(1)], q(1), q(3))] {
            let rep = verify_monad(&m, &cfg);
            assert!(rep.passed(), "{rep:?}");
        }
    }

    #[test]
    fn section_determinant_of_standard_b_is_unit() {
        let rep = verify_monad(&split_charge1(), &VerifyConfig::default());
        let d = rep.determinant.unwrap();
        assert!(d == "1" || d == "-1", "{d}");
    }

    #[test]
    fn degenerate_member_drops_rank() {
        // f = g = 0, γ = δ = 0: A vanishes identically.
        let z = || [q(0), q(0), q(0)];
        let m = charge1_family(z(), z(), q(0), q(0));
        let rep = verify_monad(&m, &VerifyConfig::default());
        let f = rep.rank_failure.unwrap();
        assert_eq!((f.map.as_str(), f.rank, f.expected), ("A", 0, 2));
    }

    #[test]
    fn chern_of_fixtures() {
        assert_eq!(monad_chern(&charge2_example()).unwrap(), ChernData::instanton(2));
        assert_eq!(monad_chern(&split_charge1()).unwrap(), ChernData::instanton(1));
    }
}
