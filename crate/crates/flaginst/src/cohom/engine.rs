//! Hypercohomology of ambient complexes of line bundles.
//!
//! Each summand O(d1,d2) on P²×P² (or O(d) on P¹) carries the Čech complex of
//! the standard cover, split by Laurent multidegree. Every multidegree piece
//! is either acyclic or has one-dimensional cohomology (H⁰ for nonnegative
//! exponents, top cohomology for all exponents ≤ −1), with explicit inclusion
//! i, projection p and contraction h satisfying 1 − ip = δh + hδ. The
//! perturbation lemma then transfers the polynomial differential D to the
//! cohomology groups as D_min = Σ_k (−1)^k p D (hD)^k i, which captures the
//! higher differentials exactly.

use std::collections::BTreeMap;

use super::complex::AmbientComplex;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::sparse_rank;
use crate::ring::{compositions, Mono};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Key {
    term: u32,
    summand: u32,
    mask: [u8; 2],
    exps: [i32; 6],
}

type Cochain<F> = BTreeMap<Key, F>;

fn acc<F: Field>(c: &mut Cochain<F>, k: Key, v: F) {
    if v.is_zero() {
        return;
    }
    match c.get_mut(&k) {
        Some(x) => {
            *x = x.add(&v);
            if x.is_zero() {
                c.remove(&k);
            }
        }
        None => {
            c.insert(k, v);
        }
    }
}

struct Engine<'a, F: Field> {
    cx: &'a AmbientComplex<F>,
    factors: &'static [(usize, usize)],
    /// cols[t][j] = nonzero entries (row, terms) of column j of map t.
    cols: Vec<Vec<Vec<(u32, Vec<(Mono, F)>)>>>,
}

impl<'a, F: Field> Engine<'a, F> {
    fn new(cx: &'a AmbientComplex<F>) -> Self {
        let cols = cx
            .maps
            .iter()
            .map(|m| {
                (0..m.cols)
                    .map(|j| {
                        (0..m.rows)
                            .filter(|&i| !m.get(i, j).is_zero())
                            .map(|i| (i as u32, m.get(i, j).terms().map(|(mo, c)| (*mo, c.clone())).collect()))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Engine { cx, factors: cx.ambient.factors(), cols }
    }

    fn neg_mask(&self, f: usize, exps: &[i32; 6]) -> u8 {
        let (off, n) = self.factors[f];
        (0..n).filter(|j| exps[off + j] < 0).fold(0, |m, j| m | (1 << j))
    }

    fn full(&self, f: usize) -> u8 {
        (1u8 << self.factors[f].1) - 1
    }

    /// Contraction on one factor.
    fn factor_h(&self, f: usize, mask: u8, exps: &[i32; 6]) -> Option<(u8, bool)> {
        let s = self.neg_mask(f, exps);
        let full = self.full(f);
        if s == full {
            return None;
        }
        let v = (!s & full).trailing_zeros() as u8;
        let bit = 1u8 << v;
        if mask & bit == 0 || mask == bit {
            return None;
        }
        let odd = (mask & (bit - 1)).count_ones() % 2 == 1;
        Some((mask ^ bit, odd))
    }

    /// i∘p on one factor.
    fn factor_ip(&self, f: usize, mask: u8, exps: &[i32; 6]) -> Vec<u8> {
        let s = self.neg_mask(f, exps);
        let full = self.full(f);
        if s == 0 {
            if mask == 1 {
                (0..self.factors[f].1).map(|j| 1u8 << j).collect()
            } else {
                Vec::new()
            }
        } else if s == full {
            vec![mask]
        } else {
            Vec::new()
        }
    }

    fn factor_p(&self, f: usize, mask: u8, exps: &[i32; 6]) -> bool {
        let s = self.neg_mask(f, exps);
        (s == 0 && mask == 1) || (s == self.full(f) && mask == self.full(f))
    }

    fn project(&self, k: &Key) -> bool {
        (0..self.factors.len()).all(|f| self.factor_p(f, k.mask[f], &k.exps))
    }

    /// Contraction on the product, with the Koszul sign on the second factor.
    fn h(&self, k: &Key) -> Vec<(Key, bool)> {
        let mut out = Vec::new();
        if let Some((m0, s0)) = self.factor_h(0, k.mask[0], &k.exps) {
            let mut k2 = *k;
            k2.mask[0] = m0;
            out.push((k2, s0));
        }
        if self.factors.len() == 2 {
            if let Some((m1, s1)) = self.factor_h(1, k.mask[1], &k.exps) {
                let deg0_odd = (k.mask[0].count_ones() - 1) % 2 == 1;
                for m0 in self.factor_ip(0, k.mask[0], &k.exps) {
                    let mut k2 = *k;
                    k2.mask = [m0, m1];
                    out.push((k2, s1 ^ deg0_odd));
                }
            }
        }
        out
    }

    fn include(&self, b: &Key) -> Cochain<F> {
        let mut masks: Vec<[u8; 2]> = vec![[0, 0]];
        for f in 0..self.factors.len() {
            let opts = self.factor_ip(f, b.mask[f], &b.exps);
            masks = masks
                .into_iter()
                .flat_map(|m| {
                    opts.iter().map(move |o| {
                        let mut m2 = m;
                        m2[f] = *o;
                        m2
                    })
                })
                .collect();
        }
        masks.into_iter().map(|m| (Key { mask: m, ..*b }, F::one())).collect()
    }

    fn apply_d(&self, c: &Cochain<F>) -> Cochain<F> {
        let mut out = Cochain::new();
        for (k, v) in c {
            let t = k.term as usize;
            if t >= self.cols.len() {
                continue;
            }
            for (row, terms) in &self.cols[t][k.summand as usize] {
                for (m, coef) in terms {
                    let mut exps = k.exps;
                    for i in 0..6 {
                        exps[i] += m[i] as i32;
                    }
                    acc(&mut out, Key { term: k.term + 1, summand: *row, mask: k.mask, exps }, v.mul(coef));
                }
            }
        }
        out
    }

    /// h0 = (−1)^t h on term t.
    fn apply_h0(&self, c: &Cochain<F>) -> Cochain<F> {
        let mut out = Cochain::new();
        for (k, v) in c {
            let t_odd = k.term % 2 == 1;
            for (k2, s) in self.h(k) {
                let val = if s ^ t_odd { v.neg() } else { v.clone() };
                acc(&mut out, k2, val);
            }
        }
        out
    }

    fn d_min(&self, b: &Key) -> Cochain<F> {
        let mut result = Cochain::new();
        let mut w = self.apply_d(&self.include(b));
        let mut k = 0usize;
        // Each round moves one term to the right, so the loop terminates.
        while !w.is_empty() {
            for (key, v) in &w {
                if self.project(key) {
                    acc(&mut result, *key, if k % 2 == 1 { v.neg() } else { v.clone() });
                }
            }
            w = self.apply_d(&self.apply_h0(&w));
            k += 1;
        }
        result
    }

    /// Cohomology basis of every summand, as canonical keys with Čech degree.
    fn basis(&self) -> Vec<(Key, i32)> {
        let mut out = Vec::new();
        for (t, ts) in self.cx.terms.iter().enumerate() {
            for (j, deg) in ts.iter().enumerate() {
                let mut partial: Vec<([u8; 2], [i32; 6], i32)> = vec![([0, 0], [0; 6], 0)];
                for (f, &(off, n)) in self.factors.iter().enumerate() {
                    let d = deg[f];
                    let mut choices: Vec<(u8, Vec<i32>, i32)> = Vec::new();
                    for c in compositions(n, d) {
                        choices.push((1, c.iter().map(|e| *e as i32).collect(), 0));
                    }
                    for c in compositions(n, -d - n as i32) {
                        choices.push((self.full(f), c.iter().map(|e| -1 - *e as i32).collect(), n as i32 - 1));
                    }
                    partial = partial
                        .into_iter()
                        .flat_map(|(m, e, s)| {
                            choices.iter().map(move |(cm, ce, cs)| {
                                let mut m2 = m;
                                let mut e2 = e;
                                m2[f] = *cm;
                                for (i, v) in ce.iter().enumerate() {
                                    e2[off + i] = *v;
                                }
                                (m2, e2, s + cs)
                            })
                        })
                        .collect();
                }
                for (mask, exps, s) in partial {
                    out.push((Key { term: t as u32, summand: j as u32, mask, exps }, s));
                }
            }
        }
        out
    }
}

/// Dimensions of the hypercohomology of an ambient complex, by total degree.
pub fn hyper_dims<F: Field>(cx: &AmbientComplex<F>) -> Result<BTreeMap<i32, usize>> {
    cx.check_square_zero()?;
    let eng = Engine::new(cx);
    let basis = eng.basis();
    let mut by_deg: BTreeMap<i32, Vec<Key>> = BTreeMap::new();
    for (k, s) in &basis {
        by_deg.entry(cx.start + k.term as i32 + s).or_default().push(*k);
    }
    let index: BTreeMap<Key, (i32, usize)> = by_deg
        .iter()
        .flat_map(|(d, ks)| ks.iter().enumerate().map(move |(i, k)| (*k, (*d, i))))
        .collect();
    let images: BTreeMap<Key, Cochain<F>> = basis.iter().map(|(k, _)| (*k, eng.d_min(k))).collect();

    // D_min² = 0 is a consequence of the perturbation lemma; check it anyway.
    for (k, img) in &images {
        let mut sq = Cochain::new();
        for (k2, v) in img {
            for (k3, w) in &images[k2] {
                acc(&mut sq, *k3, v.mul(w));
            }
        }
        if let Some((k3, _)) = sq.iter().next() {
            return Err(Error::LiftInconsistent(format!("transferred differential squares to nonzero at {k:?} -> {k3:?}")));
        }
        for k2 in img.keys() {
            let (d2, _) = index[k2];
            let (d1, _) = index[k];
            if d2 != d1 + 1 {
                return Err(Error::LiftInconsistent(format!("differential of wrong degree at {k:?}")));
            }
        }
    }

    let mut ranks: BTreeMap<i32, usize> = BTreeMap::new();
    for (d, ks) in &by_deg {
        let rows: Vec<Vec<(usize, F)>> = ks
            .iter()
            .map(|k| images[k].iter().map(|(k2, v)| (index[k2].1, v.clone())).collect())
            .filter(|r: &Vec<(usize, F)>| !r.is_empty())
            .collect();
        ranks.insert(*d, sparse_rank(rows));
    }
    let mut out = BTreeMap::new();
    for (d, ks) in &by_deg {
        let h = ks.len() - ranks[d] - ranks.get(&(d - 1)).copied().unwrap_or(0);
        if h > 0 {
            out.insert(*d, h);
        }
    }
    Ok(out)
}
