//! Random monads of charge k from the Beilinson-type presentation
//! O(−1,0)^k ⊕ O(0,−1)^k →α G1(−1,0)^k ⊕ G2(0,−1)^k →β O^{2k−2}.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{standard_twists, verify_monad, LineBundleMonad, VerifyConfig};
use crate::cohom::PolyMatrix;
use crate::error::{Error, Result};
use crate::field::{q, Field, Scalar};
use crate::linalg::Matrix;
use crate::ring::{BiPoly, Bidegree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// β with independent entries in [−9, 9].
    Uniform,
    /// α and β read off a random Z/3-graded skew Gram form of corank 2k−2.
    Graded,
}

/// β and α in the coordinates of O^{3k} ⊕ O^{3k} ⊃ G1(−1,0)^k ⊕ G2(0,−1)^k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mon2Data {
    pub k: usize,
    pub strategy: Strategy,
    /// (2k−2) × 6k
    pub beta: Matrix<Scalar>,
    /// 6k × 2k, columns O(−1,0)^k then O(0,−1)^k
    pub alpha: PolyMatrix<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenerationLog {
    pub seed: u64,
    pub attempts: usize,
    pub strategy: Strategy,
    pub rejected: Vec<String>,
}

fn g1(a: usize, i: usize) -> usize {
    3 * a + i
}

fn g2(k: usize, b: usize, i: usize) -> usize {
    3 * k + 3 * b + i
}

fn cross(u: &[Scalar; 3], w: &[Scalar; 3]) -> [Scalar; 3] {
    [
        u[1].clone() * &w[2] - &u[2] * &w[1],
        u[2].clone() * &w[0] - &u[0] * &w[2],
        u[0].clone() * &w[1] - &u[1] * &w[0],
    ]
}

fn unit(j: usize) -> [Scalar; 3] {
    std::array::from_fn(|i| if i == j { q(1) } else { q(0) })
}

/// Layout of the unknowns: u (G1 ← O(−1,0), u × x), c (G2 ← O(−1,0), c·x),
/// d (G1 ← O(0,−1), d·y), v (G2 ← O(0,−1), v × y).
struct Layout {
    k: usize,
}

impl Layout {
    fn u(&self, a: usize, col: usize, i: usize) -> usize {
        3 * (a * self.k + col) + i
    }
    fn c(&self, b: usize, col: usize) -> usize {
        3 * self.k * self.k + b * self.k + col
    }
    fn d(&self, a: usize, col: usize) -> usize {
        4 * self.k * self.k + a * self.k + col
    }
    fn v(&self, b: usize, col: usize, i: usize) -> usize {
        5 * self.k * self.k + 3 * (b * self.k + col) + i
    }
    fn len(&self) -> usize {
        8 * self.k * self.k
    }
}

/// The linear system β∘α = 0 in the unknowns of [`Layout`].
fn alpha_system(k: usize, beta: &Matrix<Scalar>) -> Matrix<Scalar> {
    let lay = Layout { k };
    let rows = beta.rows;
    let mut sys = Matrix::zeros(rows * k * 6, lay.len());
    let blk = |r: usize, start: usize| -> [Scalar; 3] { std::array::from_fn(|i| beta.get(r, start + i).clone()) };
    for r in 0..rows {
        for col in 0..k {
            // equation rows: x-coefficients for column col, y-coefficients for column k+col
            let ex = |i: usize| (r * k + col) * 6 + i;
            let ey = |i: usize| (r * k + col) * 6 + 3 + i;
            for a in 0..k {
                let b1 = blk(r, g1(a, 0));
                for j in 0..3 {
                    // b·(e_j × x) = (b × e_j)·x
                    let w = cross(&b1, &unit(j));
                    for i in 0..3 {
                        sys.set(ex(i), lay.u(a, col, j), w[i].clone());
                    }
                }
                for i in 0..3 {
                    sys.set(ey(i), lay.d(a, col), b1[i].clone());
                }
            }
            for b in 0..k {
                let b2 = blk(r, g2(k, b, 0));
                for i in 0..3 {
                    sys.set(ex(i), lay.c(b, col), b2[i].clone());
                }
                for j in 0..3 {
                    let w = cross(&b2, &unit(j));
                    for i in 0..3 {
                        sys.set(ey(i), lay.v(b, col, j), w[i].clone());
                    }
                }
            }
        }
    }
    sys
}

fn alpha_from(k: usize, sol: &[Scalar]) -> PolyMatrix<Scalar> {
    let lay = Layout { k };
    let mut a = PolyMatrix::zeros(6 * k, 2 * k);
    let x = |i: usize| BiPoly::var(i);
    let y = |i: usize| BiPoly::var(3 + i);
    let cross_lin = |u: [Scalar; 3], off: usize| -> [BiPoly; 3] {
        let v = |i: usize| BiPoly::var(off + i);
        let l = |p: usize, r: usize| v(r).scale(&u[p]).sub(&v(p).scale(&u[r]));
        [l(1, 2), l(2, 0), l(0, 1)]
    };
    for col in 0..k {
        for a_ in 0..k {
            let u: [Scalar; 3] = std::array::from_fn(|i| sol[lay.u(a_, col, i)].clone());
            let ux = cross_lin(u, 0);
            for i in 0..3 {
                a.set(g1(a_, i), col, ux[i].clone());
                a.set(g1(a_, i), k + col, y(i).scale(&sol[lay.d(a_, col)]));
            }
        }
        for b in 0..k {
            let v: [Scalar; 3] = std::array::from_fn(|i| sol[lay.v(b, col, i)].clone());
            let vy = cross_lin(v, 3);
            for i in 0..3 {
                a.set(g2(k, b, i), col, x(i).scale(&sol[lay.c(b, col)]));
                a.set(g2(k, b, i), k + col, vy[i].clone());
            }
        }
    }
    a
}

fn small(rng: &mut ChaCha8Rng, r: i64) -> Scalar {
    q(rng.gen_range(-r..=r))
}

/// Random invertible matrix as a product of unit triangular factors.
fn random_gl(rng: &mut ChaCha8Rng, n: usize) -> Matrix<Scalar> {
    let mut l = Matrix::identity(n);
    let mut u = Matrix::identity(n);
    for i in 0..n {
        for j in 0..i {
            l.set(i, j, small(rng, 2));
            u.set(j, i, small(rng, 2));
        }
    }
    l.mul(&u)
}

fn uniform_beta(rng: &mut ChaCha8Rng, k: usize) -> Matrix<Scalar> {
    let mut beta = Matrix::zeros(2 * k - 2, 6 * k);
    for r in 0..beta.rows {
        for c in 0..beta.cols {
            beta.set(r, c, small(rng, 9));
        }
    }
    beta
}

/// Z/n weights on the index sets of the Gram matrix: w on the coordinate
/// index, λ on the G1 blocks and μ on the G2 blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Grading {
    n: i64,
    w: [i64; 3],
    lam: Vec<i64>,
    mu: Vec<i64>,
}

impl Grading {
    fn zero(&self, v: i64) -> bool {
        v.rem_euclid(self.n) == 0
    }

    /// Lower bound for the corank of a graded skew form with this grading.
    fn imbalance(&self) -> usize {
        let mut d = vec![0usize; self.n as usize];
        for i in 0..3 {
            for &l in &self.lam {
                d[(self.w[i] + l).rem_euclid(self.n) as usize] += 1;
            }
            for &m in &self.mu {
                d[(m - self.w[i]).rem_euclid(self.n) as usize] += 1;
            }
        }
        let mut tot = 0;
        for nu in 0..self.n as usize {
            let op = (self.n as usize - nu) % self.n as usize;
            if nu < op {
                tot += d[nu].abs_diff(d[op]);
            } else if nu == op {
                tot += d[nu] % 2;
            }
        }
        tot
    }
}

/// Charge-3 gradings whose generic forms give monads certified everywhere
/// in most draws (found by enumerating Z/3 gradings of imbalance 4).
const CHARGE3_GRADINGS: [([i64; 3], [i64; 3], [i64; 3]); 4] = [
    ([1, 0, 0], [0, 1, 1], [0, 1, 2]),
    ([1, 0, 0], [0, 1, 2], [0, 2, 2]),
    ([1, 0, 0], [1, 1, 1], [0, 1, 2]),
    ([1, 1, 0], [1, 1, 2], [0, 1, 2]),
];

fn random_grading(rng: &mut ChaCha8Rng, k: usize) -> Option<Grading> {
    if k == 3 {
        let (mut w, lam, mu) = CHARGE3_GRADINGS[rng.gen_range(0..CHARGE3_GRADINGS.len())];
        w.rotate_left(rng.gen_range(0..3));
        return Some(Grading { n: 3, w, lam: lam.to_vec(), mu: mu.to_vec() });
    }
    let n = rng.gen_range(3..=6);
    for _ in 0..1000 {
        let g = Grading {
            n,
            w: std::array::from_fn(|_| rng.gen_range(0..n)),
            lam: (0..k).map(|_| rng.gen_range(0..n)).collect(),
            mu: (0..k).map(|_| rng.gen_range(0..n)).collect(),
        };
        if g.imbalance() == 2 * k - 2 {
            return Some(g);
        }
    }
    None
}

fn m_idx(k: usize, i: usize, a: usize) -> usize {
    i * k + a
}

fn n_idx(k: usize, j: usize, b: usize) -> usize {
    3 * k + j * k + b
}

fn levi(i: usize, l: usize, s: usize) -> i64 {
    if i == l || l == s || i == s {
        0
    } else if (i, l, s) == (0, 1, 2) || (i, l, s) == (1, 2, 0) || (i, l, s) == (2, 0, 1) {
        1
    } else {
        -1
    }
}

/// Skew 6k × 6k form [[E(S), Δ(C)], [−Δ(C)ᵀ, E(T)]] with E(S)[(i,a),(l,b)] =
/// Σ_s ε_{ils} S^s_{ab} for symmetric S^s, T^s, and Δ(C)[(i,a),(i,b)] = C_{ab}.
/// Only entries of weight zero are drawn.
fn graded_gram(rng: &mut ChaCha8Rng, k: usize, g: &Grading) -> Matrix<Scalar> {
    let wsum: i64 = g.w.iter().sum();
    let mut gm = Matrix::zeros(6 * k, 6 * k);
    let put = |gm: &mut Matrix<Scalar>, r: usize, c: usize, v: Scalar| {
        gm.set(c, r, -v.clone());
        gm.set(r, c, v);
    };
    for s in 0..3 {
        for a in 0..k {
            for b in a..k {
                let sv = g.zero(wsum - g.w[s] + g.lam[a] + g.lam[b]).then(|| small(rng, 4));
                let tv = g.zero(g.w[s] - wsum + g.mu[a] + g.mu[b]).then(|| small(rng, 4));
                for i in 0..3 {
                    for l in 0..3 {
                        let e = levi(i, l, s);
                        if e == 0 {
                            continue;
                        }
                        if let Some(v) = &sv {
                            put(&mut gm, m_idx(k, i, a), m_idx(k, l, b), q(e) * v);
                            put(&mut gm, m_idx(k, i, b), m_idx(k, l, a), q(e) * v);
                        }
                        if let Some(v) = &tv {
                            put(&mut gm, n_idx(k, i, a), n_idx(k, l, b), q(e) * v);
                            put(&mut gm, n_idx(k, i, b), n_idx(k, l, a), q(e) * v);
                        }
                    }
                }
            }
        }
    }
    for a in 0..k {
        for b in 0..k {
            if g.zero(g.lam[a] + g.mu[b]) {
                let v = small(rng, 4);
                for i in 0..3 {
                    put(&mut gm, m_idx(k, i, a), n_idx(k, i, b), v.clone());
                }
            }
        }
    }
    gm
}

/// Congruence by diag(g ⊗ h1, g^{−T} ⊗ h2): an automorphism of F together
/// with a change of frame in each block family. Keeps the shape of the form.
fn mix_gram(rng: &mut ChaCha8Rng, k: usize, gm: &Matrix<Scalar>) -> Matrix<Scalar> {
    let g = random_gl(rng, 3);
    let g_it = g.inverse().expect("unit triangular factors").transpose();
    let (h1, h2) = (random_gl(rng, k), random_gl(rng, k));
    let mut m = Matrix::zeros(6 * k, 6 * k);
    for i in 0..3 {
        for j in 0..3 {
            for a in 0..k {
                for b in 0..k {
                    m.set(m_idx(k, i, a), m_idx(k, j, b), g.get(i, j).clone() * h1.get(a, b));
                    m.set(n_idx(k, i, a), n_idx(k, j, b), g_it.get(i, j).clone() * h2.get(a, b));
                }
            }
        }
    }
    m.mul(gm).mul(&m.transpose())
}

/// Mon2 data of a Gram form of corank 2k−2: β spans its kernel and α is read
/// off its columns, α[r, a] = Σ_i x_i G[r, (i,a)] and α[r, k+b] = Σ_j y_j G[r, (j,b)].
/// Skewness gives the Koszul block shape and β∘α = 0.
fn mon2_from_gram(k: usize, gm: &Matrix<Scalar>) -> std::result::Result<(Matrix<Scalar>, PolyMatrix<Scalar>), String> {
    // Gram index → G1/G2 coordinate
    let pos = |r: usize| if r < 3 * k { g1(r % k, r / k) } else { g2(k, (r - 3 * k) % k, (r - 3 * k) / k) };
    let ker = gm.kernel();
    if ker.len() != 2 * k - 2 {
        return Err(format!("Gram form has corank {} != {}", ker.len(), 2 * k - 2));
    }
    let mut beta = Matrix::zeros(2 * k - 2, 6 * k);
    for (r, v) in ker.iter().enumerate() {
        for (c, x) in v.iter().enumerate() {
            beta.set(r, pos(c), x.clone());
        }
    }
    let mut alpha = PolyMatrix::zeros(6 * k, 2 * k);
    for r in 0..6 * k {
        for a in 0..k {
            let mut ex = BiPoly::zero();
            let mut ey = BiPoly::zero();
            for i in 0..3 {
                ex = ex.add(&BiPoly::var(i).scale(gm.get(r, m_idx(k, i, a))));
                ey = ey.add(&BiPoly::var(3 + i).scale(gm.get(r, n_idx(k, i, a))));
            }
            alpha.set(pos(r), a, ex);
            alpha.set(pos(r), k + a, ey);
        }
    }
    Ok((beta, alpha))
}

fn graded_candidate(k: usize, rng: &mut ChaCha8Rng) -> std::result::Result<Mon2Data, String> {
    let g = random_grading(rng, k).ok_or("no grading of the right imbalance drawn")?;
    let raw = graded_gram(rng, k, &g);
    let gm = mix_gram(rng, k, &raw);
    let (beta, alpha) = mon2_from_gram(k, &gm).map_err(|e| format!("{e} (grading {g:?})"))?;
    Ok(Mon2Data { k, strategy: Strategy::Graded, beta, alpha })
}

/// The augmented monad with middle O^{6k} and right term
/// O(1,0)^k ⊕ O(0,1)^k ⊕ O^{2k−2}.
pub fn augment(data: &Mon2Data) -> LineBundleMonad {
    let k = data.k;
    let (left, middle, mut right) = standard_twists(k, 6 * k);
    right.extend(vec![Bidegree::ZERO; 2 * k - 2]);
    let mut b = PolyMatrix::zeros(4 * k - 2, 6 * k);
    for a in 0..k {
        for i in 0..3 {
            b.set(a, g1(a, i), BiPoly::var(i));
            b.set(k + a, g2(k, a, i), BiPoly::var(3 + i));
        }
    }
    for r in 0..data.beta.rows {
        for c in 0..6 * k {
            b.set(2 * k + r, c, BiPoly::constant(data.beta.get(r, c).clone()));
        }
    }
    LineBundleMonad { charge: k, left, middle, right, a: data.alpha.clone(), b, j: None }
}

fn unit_entry(m: &PolyMatrix<Scalar>, src: &[Bidegree], tgt: &[Bidegree]) -> Option<(usize, usize)> {
    for i in 0..m.rows {
        for j in 0..m.cols {
            if tgt[i] == src[j] && !m.get(i, j).is_zero() {
                return Some((i, j));
            }
        }
    }
    None
}

fn eliminate(m: &PolyMatrix<Scalar>, r: usize, c: usize) -> PolyMatrix<Scalar> {
    let phi_inv = m.get(r, c).coeff(&[0; 6]).inv();
    let mut out = PolyMatrix::zeros(m.rows - 1, m.cols - 1);
    for (ni, i) in (0..m.rows).filter(|&i| i != r).enumerate() {
        let lc = m.get(i, c).scale(&phi_inv);
        for (nj, j) in (0..m.cols).filter(|&j| j != c).enumerate() {
            out.set(ni, nj, m.get(i, j).sub(&lc.mul(m.get(r, j))));
        }
    }
    out
}

fn drop_row(m: &PolyMatrix<Scalar>, r: usize) -> PolyMatrix<Scalar> {
    let mut out = PolyMatrix::zeros(m.rows - 1, m.cols);
    for (ni, i) in (0..m.rows).filter(|&i| i != r).enumerate() {
        for j in 0..m.cols {
            out.set(ni, j, m.get(i, j).clone());
        }
    }
    out
}

fn drop_col(m: &PolyMatrix<Scalar>, c: usize) -> PolyMatrix<Scalar> {
    drop_row(&m.transpose(), c).transpose()
}

/// Cancel nonzero constant entries between summands of equal twist, one at
/// a time, by Gaussian elimination. The result has the same cohomology.
pub fn trim_units(m: &LineBundleMonad) -> LineBundleMonad {
    let mut m = m.clone();
    loop {
        if let Some((r, c)) = unit_entry(&m.b, &m.middle, &m.right) {
            m.b = eliminate(&m.b, r, c);
            m.a = drop_row(&m.a, c);
            m.right.remove(r);
            m.middle.remove(c);
            m.j = None;
        } else if let Some((r, c)) = unit_entry(&m.a, &m.left, &m.middle) {
            m.a = eliminate(&m.a, r, c);
            m.b = drop_col(&m.b, r);
            m.middle.remove(r);
            m.left.remove(c);
            m.j = None;
        } else {
            return m;
        }
    }
}

/// Augment and cancel the O^{2k−2} block against the middle term.
pub fn augment_and_trim(data: &Mon2Data) -> Result<LineBundleMonad> {
    let expected = 2 * data.k - 2;
    let rank = data.beta.rank();
    if rank != expected {
        return Err(Error::TrimDegenerate { rank, expected });
    }
    let t = trim_units(&augment(data));
    if t.middle.len() != 4 * data.k + 2 {
        return Err(Error::TrimDegenerate { rank: 6 * data.k - t.middle.len(), expected });
    }
    Ok(t)
}

/// One candidate from the attempt's own random stream.
fn candidate(k: usize, rng: &mut ChaCha8Rng, strategy: Strategy) -> std::result::Result<Mon2Data, String> {
    let beta = match strategy {
        Strategy::Graded => return graded_candidate(k, rng),
        Strategy::Uniform if k == 1 => Matrix::zeros(0, 6),
        Strategy::Uniform => uniform_beta(rng, k),
    };
    if beta.rank() != 2 * k - 2 {
        return Err(format!("beta has rank {} < {}", beta.rank(), 2 * k - 2));
    }
    let kernel = alpha_system(k, &beta).kernel();
    if kernel.is_empty() {
        return Err("beta admits no nonzero alpha".into());
    }
    let mut sol = vec![q(0); Layout { k }.len()];
    for v in &kernel {
        let c = small(rng, 3);
        for (s, x) in sol.iter_mut().zip(v) {
            *s = s.clone() + &c * x;
        }
    }
    Ok(Mon2Data { k, strategy, beta, alpha: alpha_from(k, &sol) })
}

/// Seeded search for a charge-k monad that passes [`verify_monad`].
///
/// Attempt `n` draws from stream `n` of a ChaCha generator seeded with
/// `seed`, so a run is reproducible and attempts are independent.
pub fn generate_mon2(
    k: usize,
    seed: u64,
    budget: usize,
    cfg: &VerifyConfig,
) -> Result<(LineBundleMonad, Mon2Data, GenerationLog)> {
    if k == 0 {
        return Err(Error::Shape("charge must be at least 1".into()));
    }
    // For k ≥ 3 a uniform β leaves no room for α: 8k² unknowns against 12k(k−1) equations.
    let strategy = if k <= 2 { Strategy::Uniform } else { Strategy::Graded };
    let mut rejected = Vec::new();
    for attempt in 0..budget {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(attempt as u64);
        let outcome = candidate(k, &mut rng, strategy).and_then(|data| {
            let m = augment_and_trim(&data).map_err(|e| e.to_string())?;
            let vcfg = VerifyConfig { seed: cfg.seed ^ (attempt as u64), ..*cfg };
            let rep = verify_monad(&m, &vcfg);
            match rep.error(k) {
                None => Ok((m, data)),
                Some(e) => Err(e.to_string()),
            }
        });
        match outcome {
            Ok((m, data)) => {
                let log = GenerationLog { seed, attempts: attempt + 1, strategy, rejected };
                return Ok((m, data, log));
            }
            Err(reason) => rejected.push(format!("attempt {attempt}: {reason}")),
        }
    }
    Err(Error::BudgetExhausted { attempts: budget, reasons: rejected })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monad::monad_chern;
    use crate::chow::ChernData;

    #[test]
    fn system_counts() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let b = uniform_beta(&mut rng, 2);
        let s = alpha_system(2, &b);
        assert_eq!((s.rows, s.cols), (24, 32));
    }

    #[test]
    fn grading_imbalance() {
        let g = Grading { n: 3, w: [1, 0, 0], lam: vec![0, 1, 2], mu: vec![0, 2, 2] };
        assert_eq!(g.imbalance(), 4);
        let g = Grading { n: 3, w: [0, 0, 0], lam: vec![0], mu: vec![0] };
        assert_eq!(g.imbalance(), 0);
    }

    #[test]
    fn gram_is_skew_with_koszul_alpha() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = Grading { n: 3, w: [1, 0, 0], lam: vec![0, 1, 2], mu: vec![0, 2, 2] };
        let raw = graded_gram(&mut rng, 3, &g);
        let gm = mix_gram(&mut rng, 3, &raw);
        for i in 0..18 {
            for j in 0..18 {
                assert_eq!(gm.get(i, j).clone(), -gm.get(j, i).clone());
            }
        }
        let (beta, alpha) = mon2_from_gram(3, &gm).unwrap();
        let data = Mon2Data { k: 3, strategy: Strategy::Graded, beta, alpha };
        augment(&data).complex().validate().unwrap();
    }

    #[test]
    fn generates_small_charges() {
        let cfg = VerifyConfig::default();
        for k in 1..=3 {
            let (m, _, log) = generate_mon2(k, 42, 10, &cfg).unwrap();
            assert_eq!(m.middle.len(), 4 * k + 2);
            assert_eq!(monad_chern(&m).unwrap(), ChernData::instanton(k as i64));
            assert!(log.attempts >= 1);
        }
    }

    #[test]
    fn trim_preserves_cohomology() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let data = candidate(2, &mut rng, Strategy::Uniform).unwrap();
        let aug = augment(&data);
        let t = augment_and_trim(&data).unwrap();
        for d in [Bidegree::new(0, 0), Bidegree::new(-1, 0), Bidegree::new(1, -1)] {
            assert_eq!(aug.cohomology(d).unwrap().h, t.cohomology(d).unwrap().h, "twist {d}");
        }
    }

    #[test]
    fn trim_without_units_is_identity() {
        let m = crate::monad::charge2_example();
        assert_eq!(trim_units(&m), m);
    }
}
