//! Exact dense linear algebra over any [`Field`].

use crate::field::Field;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<F: Field> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|v| F::from_i64(*v)).collect()).collect())
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
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

    pub fn mul(&self, o: &Self) -> Self {
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
                    let v = r.get(i, j).add(&a.mul(b));
                    r.set(i, j, v);
                }
            }
        }
        r
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(F::zero(), |acc, (a, b)| if a.is_zero() { acc } else { acc.add(&a.mul(b)) })
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = self.get(r, c).inv();
            for j in c..self.cols {
                let v = self.get(r, j).mul(&inv);
                self.set(r, j, v);
            }
            let pivot_row: Vec<(usize, F)> = (c..self.cols)
                .filter(|&j| !self.get(r, j).is_zero())
                .map(|j| (j, self.get(r, j).clone()))
                .collect();
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for (j, pv) in &pivot_row {
                    let v = self.get(i, *j).sub(&f.mul(pv));
                    self.set(i, *j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.forward_eliminate()
    }

    /// Row echelon form (not reduced); returns the rank. Cheaper than rref.
    fn forward_eliminate(&mut self) -> usize {
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = self.get(r, c).inv();
            let pivot_row: Vec<(usize, F)> = (c + 1..self.cols)
                .filter(|&j| !self.get(r, j).is_zero())
                .map(|j| (j, self.get(r, j).mul(&inv)))
                .collect();
            for i in r + 1..self.rows {
                let f = self.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                self.set(i, c, F::zero());
                for (j, pv) in &pivot_row {
                    let v = self.get(i, *j).sub(&f.mul(pv));
                    self.set(i, *j, v);
                }
            }
            r += 1;
        }
        r
    }

    /// Basis of the null space {v : M v = 0}.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&j| !is_pivot[j]) {
            let mut v = vec![F::zero(); self.cols];
            v[free] = F::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = m.get(r, free).neg();
            }
            basis.push(v);
        }
        basis
    }

    /// Some solution of M v = b, if one exists.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let pivots = aug.rref_in_place();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut v = vec![F::zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = aug.get(r, self.cols).clone();
        }
        Some(v)
    }

    pub fn det(&self) -> F {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let mut m = self.clone();
        let n = self.rows;
        let mut det = F::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return F::zero();
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = det.neg();
            }
            let pv = m.get(c, c).clone();
            det = det.mul(&pv);
            let inv = pv.inv();
            for i in c + 1..n {
                let f = m.get(i, c).mul(&inv);
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = m.get(i, j).sub(&f.mul(m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.rows;
        assert_eq!(n, self.cols);
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, F::one());
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug.get(i, n + j).clone());
            }
        }
        Some(inv)
    }
}

/// Rank of a matrix given as sparse rows `(column, value)`.
pub fn sparse_rank<F: Field>(rows: Vec<Vec<(usize, F)>>) -> usize {
    use std::collections::BTreeMap;
    // Pivot rows keyed by leading column, stored normalized to leading 1.
    let mut pivots: BTreeMap<usize, BTreeMap<usize, F>> = BTreeMap::new();
    for r in rows {
        let mut row: BTreeMap<usize, F> = BTreeMap::new();
        for (c, v) in r {
            if v.is_zero() {
                continue;
            }
            let e = row.entry(c).or_insert_with(F::zero);
            *e = e.add(&v);
        }
        row.retain(|_, v| !v.is_zero());
        loop {
            let Some((&lead, lv)) = row.iter().next() else { break };
            let lv = lv.clone();
            match pivots.get(&lead) {
                Some(prow) => {
                    for (c, pv) in prow {
                        let e = row.entry(*c).or_insert_with(F::zero);
                        *e = e.sub(&lv.mul(pv));
                    }
                    row.retain(|_, v| !v.is_zero());
                }
                None => {
                    let inv = lv.inv();
                    let norm = row.into_iter().map(|(c, v)| (c, v.mul(&inv))).collect();
                    pivots.insert(lead, norm);
                    break;
                }
            }
        }
    }
    pivots.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{q, Scalar};

    #[test]
    fn identity_has_trivial_kernel() {
        assert!(Matrix::<Scalar>::identity(3).kernel().is_empty());
    }

    #[test]
    fn rank_one_kernel() {
        let m = Matrix::<Scalar>::from_i64(&[vec![1, 2], vec![2, 4]]);
        let k = m.kernel();
        assert_eq!(k, vec![vec![q(-2), q(1)]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn det_and_inverse() {
        let m = Matrix::<Scalar>::from_i64(&[vec![2, 1, 0], vec![1, 3, 1], vec![0, 1, 4]]);
        assert_eq!(m.det(), q(18));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(3));
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = Matrix::<Scalar>::from_i64(&[vec![1, 1], vec![2, 2]]);
        assert!(m.solve(&[q(1), q(3)]).is_none());
        let v = m.solve(&[q(1), q(2)]).unwrap();
        assert_eq!(m.mul_vec(&v), vec![q(1), q(2)]);
    }

    #[test]
    fn sparse_matches_dense() {
        let m = Matrix::<Scalar>::from_i64(&[vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]);
        let rows = (0..3)
            .map(|i| (0..3).map(|j| (j, m.get(i, j).clone())).collect())
            .collect();
        assert_eq!(sparse_rank(rows), m.rank());
    }
}
