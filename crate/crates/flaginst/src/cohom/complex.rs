//! Bounded complexes of direct sums of line bundles.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::ring::{divide, flag_quadric, reduce, Bidegree, Poly};

/// Matrix of polynomials; `rows` index target summands, `cols` source summands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix<F: Field> {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Poly<F>>,
}

impl<F: Field> PolyMatrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMatrix { rows, cols, entries: vec![Poly::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<Poly<F>>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        PolyMatrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() }
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly<F> {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly<F>) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|p| p.is_zero())
    }

    /// Raw product in the polynomial ring.
    pub fn mul_raw(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let mut r = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = r.get(i, j).add(&a.mul_raw(b));
                    r.set(i, j, v);
                }
            }
        }
        r
    }

    pub fn reduced(&self) -> Self {
        PolyMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(reduce).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.mul_raw(o).reduced()
    }

    pub fn neg(&self) -> Self {
        self.map(|p| p.neg())
    }

    pub fn map<G: Field>(&self, f: impl Fn(&Poly<F>) -> Poly<G>) -> PolyMatrix<G> {
        PolyMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// Constant matrix.
    pub fn from_constants(m: &crate::linalg::Matrix<F>) -> Self {
        let mut r = Self::zeros(m.rows, m.cols);
        for i in 0..m.rows {
            for j in 0..m.cols {
                r.set(i, j, Poly::constant(m.get(i, j).clone()));
            }
        }
        r
    }

    /// First nonzero entry, for error reports.
    pub fn first_nonzero(&self) -> Option<(usize, usize, &Poly<F>)> {
        (0..self.rows)
            .flat_map(|i| (0..self.cols).map(move |j| (i, j)))
            .map(|(i, j)| (i, j, self.get(i, j)))
            .find(|(_, _, p)| !p.is_zero())
    }
}

/// Complex of sums of line bundles on F: term `n` sits in position `start + n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineComplex<F: Field> {
    pub start: i32,
    pub terms: Vec<Vec<Bidegree>>,
    /// `maps[n]`: term n → term n+1.
    pub maps: Vec<PolyMatrix<F>>,
}

impl<F: Field> LineComplex<F> {
    pub fn single(d: Bidegree) -> Self {
        LineComplex { start: 0, terms: vec![vec![d]], maps: vec![] }
    }

    pub fn end(&self) -> i32 {
        self.start + self.terms.len() as i32 - 1
    }

    /// Check shapes, bidegrees and d² = 0 on F.
    pub fn validate(&self) -> Result<()> {
        if self.maps.len() + 1 != self.terms.len() {
            return Err(Error::Shape(format!("{} terms but {} maps", self.terms.len(), self.maps.len())));
        }
        for (n, m) in self.maps.iter().enumerate() {
            if m.cols != self.terms[n].len() || m.rows != self.terms[n + 1].len() {
                return Err(Error::Shape(format!("map {n} has shape {}x{}", m.rows, m.cols)));
            }
            for i in 0..m.rows {
                for j in 0..m.cols {
                    let p = m.get(i, j);
                    if p.is_zero() {
                        continue;
                    }
                    let expected = self.terms[n + 1][i] - self.terms[n][j];
                    if p.bidegree() != Some(expected) {
                        return Err(Error::BidegreeMismatch {
                            row: i,
                            col: j,
                            expected,
                            found: format!("{p:?}"),
                        });
                    }
                }
            }
        }
        for n in 0..self.maps.len().saturating_sub(1) {
            let comp = self.maps[n + 1].mul(&self.maps[n]);
            if let Some((row, col, p)) = comp.first_nonzero() {
                return Err(Error::CompositionNonzero { term: n, row, col, entry: format!("{p:?}") });
            }
        }
        Ok(())
    }

    pub fn twist(&self, t: Bidegree) -> Self {
        LineComplex {
            start: self.start,
            terms: self.terms.iter().map(|ts| ts.iter().map(|d| *d + t).collect()).collect(),
            maps: self.maps.clone(),
        }
    }

    pub fn shift(&self, by: i32) -> Self {
        LineComplex { start: self.start + by, terms: self.terms.clone(), maps: self.maps.clone() }
    }

    pub fn swap_factors(&self) -> Self {
        LineComplex {
            start: self.start,
            terms: self.terms.iter().map(|ts| ts.iter().map(|d| d.swap()).collect()).collect(),
            maps: self.maps.iter().map(|m| m.map(|p| p.swap_factors())).collect(),
        }
    }

    /// Tensor product with the usual sign d(a⊗b) = da⊗b + (−1)^p a⊗db.
    pub fn tensor(&self, o: &Self) -> Self {
        let n1 = self.terms.len();
        let n2 = o.terms.len();
        let start = self.start + o.start;
        let total = n1 + n2 - 1;
        // Summand layout of each total term: blocks (p, q) with p + q = n.
        let mut layout: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); total];
        let mut terms: Vec<Vec<Bidegree>> = vec![Vec::new(); total];
        for (n, (lay, ts)) in layout.iter_mut().zip(terms.iter_mut()).enumerate() {
            for p in 0..n1 {
                if n < p || n - p >= n2 {
                    continue;
                }
                let qq = n - p;
                lay.push((p, qq, ts.len()));
                for a in &self.terms[p] {
                    for b in &o.terms[qq] {
                        ts.push(*a + *b);
                    }
                }
            }
        }
        let mut maps = Vec::new();
        for n in 0..total.saturating_sub(1) {
            let mut m = PolyMatrix::zeros(terms[n + 1].len(), terms[n].len());
            for &(p, qq, off) in &layout[n] {
                let w = o.terms[qq].len();
                // d_A ⊗ 1
                if p + 1 < n1 {
                    let off2 = layout[n + 1].iter().find(|(a, b, _)| *a == p + 1 && *b == qq).unwrap().2;
                    let d = &self.maps[p];
                    for i in 0..d.rows {
                        for j in 0..d.cols {
                            let e = d.get(i, j);
                            if e.is_zero() {
                                continue;
                            }
                            for b in 0..w {
                                m.set(off2 + i * w + b, off + j * w + b, e.clone());
                            }
                        }
                    }
                }
                // (−1)^p 1 ⊗ d_B
                if qq + 1 < n2 {
                    let off2 = layout[n + 1].iter().find(|(a, b, _)| *a == p && *b == qq + 1).unwrap().2;
                    let d = &o.maps[qq];
                    let w2 = o.terms[qq + 1].len();
                    let sign = (self.start + p as i32).rem_euclid(2) == 1;
                    for a in 0..self.terms[p].len() {
                        for i in 0..d.rows {
                            for j in 0..d.cols {
                                let e = d.get(i, j);
                                if e.is_zero() {
                                    continue;
                                }
                                let e = if sign { e.neg() } else { e.clone() };
                                m.set(off2 + a * w2 + i, off + a * w + j, e);
                            }
                        }
                    }
                }
            }
            maps.push(m);
        }
        LineComplex { start, terms, maps }
    }

    pub fn map_coeffs<G: Field>(&self, f: impl Fn(&Poly<F>) -> Poly<G> + Copy) -> LineComplex<G> {
        LineComplex {
            start: self.start,
            terms: self.terms.clone(),
            maps: self.maps.iter().map(|m| m.map(f)).collect(),
        }
    }

    /// The ambient twisted complex on P²×P² computing the same hypercohomology.
    ///
    /// Each O_F(t) is replaced by the cone [O(t−(1,1)) →Q O(t)]. Lifts of the
    /// differentials compose to Q·G_n, and −G_n is inserted as a correction.
    pub fn ambient(&self) -> Result<AmbientComplex<F>> {
        self.validate()?;
        let q: Poly<F> = flag_quadric();
        let n = self.terms.len();
        let one = Bidegree::new(1, 1);
        // Ambient term m (position start − 1 + m) = Ã^{m−1} ⊕ B̃^{m}.
        let mut terms = Vec::new();
        let mut offsets = Vec::new();
        for m in 0..=n {
            let mut ts = Vec::new();
            let a_len = if m >= 1 { self.terms[m - 1].len() } else { 0 };
            if m >= 1 {
                ts.extend(self.terms[m - 1].iter().map(|d| [d.a, d.b]));
            }
            if m < n {
                ts.extend(self.terms[m].iter().map(|d| {
                    let e = *d - one;
                    [e.a, e.b]
                }));
            }
            offsets.push(a_len);
            terms.push(ts);
        }
        let mut g = Vec::new();
        for k in 0..self.maps.len().saturating_sub(1) {
            let comp = self.maps[k + 1].mul_raw(&self.maps[k]);
            let mut gk = PolyMatrix::zeros(comp.rows, comp.cols);
            for i in 0..comp.rows {
                for j in 0..comp.cols {
                    let d = divide(comp.get(i, j));
                    if !d.remainder.is_zero() {
                        return Err(Error::CompositionNonzero {
                            term: k,
                            row: i,
                            col: j,
                            entry: format!("{:?}", d.remainder),
                        });
                    }
                    gk.set(i, j, d.quotient);
                }
            }
            g.push(gk);
        }
        let mut maps = Vec::new();
        for m in 0..n {
            // Source: Ã^{m−1} (offset 0) ⊕ B̃^{m} (offset offsets[m]).
            // Target: Ã^{m} (offset 0) ⊕ B̃^{m+1} (offset offsets[m+1]).
            let mut d = PolyMatrix::zeros(terms[m + 1].len(), terms[m].len());
            let src_b = offsets[m];
            let tgt_b = offsets[m + 1];
            if m >= 1 {
                let dm = &self.maps[m - 1];
                for i in 0..dm.rows {
                    for j in 0..dm.cols {
                        d.set(i, j, dm.get(i, j).clone());
                    }
                }
                if m - 1 < g.len() {
                    let gm = &g[m - 1];
                    for i in 0..gm.rows {
                        for j in 0..gm.cols {
                            d.set(tgt_b + i, j, gm.get(i, j).neg());
                        }
                    }
                }
            }
            for j in 0..self.terms[m].len() {
                d.set(j, src_b + j, q.clone());
            }
            if m + 1 < n {
                let dm = &self.maps[m];
                for i in 0..dm.rows {
                    for j in 0..dm.cols {
                        d.set(tgt_b + i, src_b + j, dm.get(i, j).neg());
                    }
                }
            }
            maps.push(d);
        }
        let ac = AmbientComplex { ambient: Ambient::P2xP2, start: self.start - 1, terms, maps };
        ac.check_square_zero()?;
        Ok(ac)
    }
}

/// Which product of projective spaces the ambient complex lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ambient {
    /// P² × P² with variables x0..x2 | y0..y2.
    P2xP2,
    /// P¹ with variables s, t (indices 0, 1).
    P1,
}

impl Ambient {
    /// (variable offset, number of variables) per factor.
    pub fn factors(&self) -> &'static [(usize, usize)] {
        match self {
            Ambient::P2xP2 => &[(0, 3), (3, 3)],
            Ambient::P1 => &[(0, 2)],
        }
    }
}

/// Complex of sums of line bundles on a product of projective spaces,
/// with d² = 0 exactly in the polynomial ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmbientComplex<F: Field> {
    pub ambient: Ambient,
    pub start: i32,
    /// Multidegree per summand; unused factor slots are 0.
    pub terms: Vec<Vec<[i32; 2]>>,
    pub maps: Vec<PolyMatrix<F>>,
}

impl<F: Field> AmbientComplex<F> {
    pub fn check_square_zero(&self) -> Result<()> {
        for n in 0..self.maps.len().saturating_sub(1) {
            let comp = self.maps[n + 1].mul_raw(&self.maps[n]);
            if let Some((i, j, p)) = comp.first_nonzero() {
                return Err(Error::LiftInconsistent(format!("term {n}, entry ({i},{j}) = {p:?}")));
            }
        }
        Ok(())
    }
}
