//! Sparse elimination with unit pivots only, recording the row operations.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::ring::{Integers, PivotRing};
use crate::int::Int;

pub type SparseRow<E> = Vec<(u32, E)>;

/// One pivot step: for each `(row, c)` in `targets`, `row -= c * pivot_row`.
#[derive(Clone, Debug, PartialEq)]
pub struct PivotOp<E> {
    pub pivot_row: u32,
    pub targets: Vec<(u32, E)>,
}

/// Outcome of the sparse phase. Pivot rows and columns are gone; the
/// remaining live rows hold the residual matrix on the live columns.
#[derive(Clone, Debug)]
pub struct Elimination<E> {
    pub rows: usize,
    pub cols: usize,
    pub ops: Vec<PivotOp<E>>,
    /// `(row, col)` in pivot order.
    pub pivots: Vec<(u32, u32)>,
    /// Layer of each pivot; see [`Eliminator::divide_residual`].
    pub pivot_layer: Vec<u32>,
    /// Ascending indices of rows that were never pivots.
    pub live_rows: Vec<u32>,
    /// Residual entries of each live row, aligned with `live_rows`.
    pub residual: Vec<SparseRow<E>>,
}

impl<E: Clone> Elimination<E> {
    pub fn rank_of_pivots(&self) -> usize {
        self.pivots.len()
    }

    /// `z ← U_s z`.
    pub fn apply<R: PivotRing<E = E>>(&self, ring: &R, z: &mut [E]) {
        for op in &self.ops {
            let zp = z[op.pivot_row as usize].clone();
            if ring.is_zero(&zp) {
                continue;
            }
            for (s, c) in &op.targets {
                let s = *s as usize;
                z[s] = ring.sub_mul(&z[s], c, &zp);
            }
        }
    }

    /// `z ← U_s⁻¹ z`.
    pub fn apply_inverse<R: PivotRing<E = E>>(&self, ring: &R, z: &mut [E]) {
        for op in self.ops.iter().rev() {
            let zp = z[op.pivot_row as usize].clone();
            if ring.is_zero(&zp) {
                continue;
            }
            for (s, c) in &op.targets {
                let s = *s as usize;
                let minus_c = ring.neg(c);
                z[s] = ring.sub_mul(&z[s], &minus_c, &zp);
            }
        }
    }

    /// `wᵀ ← wᵀ U_s`.
    pub fn apply_transpose<R: PivotRing<E = E>>(&self, ring: &R, w: &mut [E]) {
        for op in self.ops.iter().rev() {
            let p = op.pivot_row as usize;
            let mut acc = w[p].clone();
            for (s, c) in &op.targets {
                let ws = &w[*s as usize];
                if !ring.is_zero(ws) {
                    acc = ring.sub_mul(&acc, c, ws);
                }
            }
            w[p] = acc;
        }
    }
}

/// Incremental eliminator. Rows keep their global indices throughout.
pub struct Eliminator<'r, R: PivotRing> {
    ring: &'r R,
    rows: Vec<SparseRow<R::E>>,
    col_rows: Vec<Vec<u32>>,
    col_count: Vec<u32>,
    row_live: Vec<bool>,
    col_live: Vec<bool>,
    heap: BinaryHeap<Reverse<(u32, u32)>>,
    ops: Vec<PivotOp<R::E>>,
    pivots: Vec<(u32, u32)>,
    pivot_layer: Vec<u32>,
    layer: u32,
    scratch: SparseRow<R::E>,
}

/// Eliminate greedily on sparse unit pivots (Markowitz-style: sparsest
/// column first, then shortest row), until no unit remains in the residual.
pub fn eliminate<R: PivotRing>(ring: &R, rows: Vec<SparseRow<R::E>>, cols: usize) -> Elimination<R::E> {
    let mut e = Eliminator::new(ring, rows, cols);
    e.run();
    e.finish()
}

impl<'r, R: PivotRing> Eliminator<'r, R> {
    pub fn new(ring: &'r R, rows: Vec<SparseRow<R::E>>, cols: usize) -> Self {
        let nrows = rows.len();
        let mut col_rows = vec![Vec::new(); cols];
        let mut col_count = vec![0u32; cols];
        for (i, row) in rows.iter().enumerate() {
            debug_assert!(row.windows(2).all(|w| w[0].0 < w[1].0), "row entries must be sorted");
            for (c, _) in row {
                col_rows[*c as usize].push(i as u32);
                col_count[*c as usize] += 1;
            }
        }
        let mut e = Eliminator {
            ring,
            rows,
            col_rows,
            col_count,
            row_live: vec![true; nrows],
            col_live: vec![true; cols],
            heap: BinaryHeap::new(),
            ops: Vec::new(),
            pivots: Vec::new(),
            pivot_layer: Vec::new(),
            layer: 0,
            scratch: Vec::new(),
        };
        e.refill_heap();
        e
    }

    fn refill_heap(&mut self) {
        self.heap = self
            .col_count
            .iter()
            .enumerate()
            .filter(|(c, &n)| n > 0 && self.col_live[*c])
            .map(|(c, &n)| Reverse((n, c as u32)))
            .collect();
    }

    /// Live rows with their residual entries.
    pub fn residual(&self) -> impl Iterator<Item = (u32, &SparseRow<R::E>)> + '_ {
        (0..self.rows.len() as u32)
            .filter(|&r| self.row_live[r as usize])
            .map(|r| (r, &self.rows[r as usize]))
    }

    pub fn residual_is_zero(&self) -> bool {
        self.residual().all(|(_, r)| r.is_empty())
    }

    /// Replace every residual entry `x` by `f(x)` (which must stay nonzero)
    /// and open a new pivot layer. Used to strip a common factor.
    pub fn divide_residual(&mut self, f: impl Fn(&R::E) -> R::E) {
        for r in 0..self.rows.len() {
            if self.row_live[r] {
                for e in self.rows[r].iter_mut() {
                    e.1 = f(&e.1);
                    debug_assert!(!self.ring.is_zero(&e.1));
                }
            }
        }
        self.layer += 1;
        self.refill_heap();
    }

    pub fn layer(&self) -> u32 {
        self.layer
    }

    pub fn finish(mut self) -> Elimination<R::E> {
        let nrows = self.rows.len();
        let live_rows: Vec<u32> = (0..nrows as u32).filter(|&r| self.row_live[r as usize]).collect();
        let residual = live_rows
            .iter()
            .map(|&r| std::mem::take(&mut self.rows[r as usize]))
            .collect();
        Elimination {
            rows: nrows,
            cols: self.col_live.len(),
            ops: self.ops,
            pivots: self.pivots,
            pivot_layer: self.pivot_layer,
            live_rows,
            residual,
        }
    }

    pub fn run(&mut self) {
        loop {
            let mut stuck = Vec::new();
            let before = self.pivots.len();
            while let Some(Reverse((count, c))) = self.heap.pop() {
                let cu = c as usize;
                if !self.col_live[cu] || count != self.col_count[cu] || count == 0 {
                    continue;
                }
                match self.choose_row(cu) {
                    Some(r) => self.pivot(r, cu),
                    None => stuck.push(c),
                }
            }
            if self.pivots.len() == before || stuck.is_empty() {
                break;
            }
            // entries may have turned into units without a count change
            for c in stuck {
                let n = self.col_count[c as usize];
                if self.col_live[c as usize] && n > 0 {
                    self.heap.push(Reverse((n, c)));
                }
            }
        }
    }

    fn entry(&self, r: usize, c: u32) -> Option<&R::E> {
        let row = &self.rows[r];
        row.binary_search_by_key(&c, |e| e.0).ok().map(|i| &row[i].1)
    }

    /// Compact the candidate list of column `c` and pick the sparsest row
    /// holding a unit there.
    fn choose_row(&mut self, c: usize) -> Option<usize> {
        let mut list = std::mem::take(&mut self.col_rows[c]);
        list.sort_unstable();
        list.dedup();
        list.retain(|&r| self.row_live[r as usize] && self.entry(r as usize, c as u32).is_some());
        let best = list
            .iter()
            .filter_map(|&r| {
                let v = self.entry(r as usize, c as u32)?;
                self.ring
                    .is_unit(v)
                    .then(|| (self.rows[r as usize].len(), self.ring.weight(v), r))
            })
            .min()
            .map(|(_, _, r)| r as usize);
        self.col_rows[c] = list;
        best
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let ring = self.ring;
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let u = self.entry_in(&pivot_row, c as u32).clone();
        let targets_rows: Vec<u32> = std::mem::take(&mut self.col_rows[c])
            .into_iter()
            .filter(|&s| s as usize != r)
            .collect();
        let mut targets = Vec::with_capacity(targets_rows.len());
        for s in targets_rows {
            let s = s as usize;
            let Some(a) = self.entry(s, c as u32) else { continue };
            let coef = ring.div_unit(a, &u);
            self.merge(s, &coef, &pivot_row);
            targets.push((s as u32, coef));
        }
        self.row_live[r] = false;
        self.col_live[c] = false;
        for (col, _) in &pivot_row {
            let cu = *col as usize;
            self.col_count[cu] -= 1;
            if self.col_live[cu] && self.col_count[cu] > 0 {
                self.heap.push(Reverse((self.col_count[cu], *col)));
            }
        }
        self.ops.push(PivotOp {
            pivot_row: r as u32,
            targets,
        });
        self.pivots.push((r as u32, c as u32));
        self.pivot_layer.push(self.layer);
    }

    fn entry_in<'a>(&self, row: &'a SparseRow<R::E>, c: u32) -> &'a R::E {
        let i = row.binary_search_by_key(&c, |e| e.0).expect("pivot entry present");
        &row[i].1
    }

    /// `rows[s] -= coef * pivot_row`, maintaining column counts.
    fn merge(&mut self, s: usize, coef: &R::E, pivot_row: &SparseRow<R::E>) {
        let ring = self.ring;
        let old = std::mem::take(&mut self.rows[s]);

        let out = &mut self.scratch;
        out.clear();
        out.reserve(old.len() + pivot_row.len());
        let (mut i, mut j) = (0, 0);
        while i < old.len() || j < pivot_row.len() {
            let ci = old.get(i).map_or(u32::MAX, |e| e.0);
            let cj = pivot_row.get(j).map_or(u32::MAX, |e| e.0);
            if ci < cj {
                out.push(old[i].clone());
                i += 1;
            } else if cj < ci {
                let zero = ring.from_int(&Int::ZERO);
                let v = ring.sub_mul(&zero, coef, &pivot_row[j].1);
                if !ring.is_zero(&v) {
                    let cu = cj as usize;
                    self.col_count[cu] += 1;
                    self.col_rows[cu].push(s as u32);
                    self.heap.push(Reverse((self.col_count[cu], cj)));
                    out.push((cj, v));
                }
                j += 1;
            } else {
                let v = ring.sub_mul(&old[i].1, coef, &pivot_row[j].1);
                if ring.is_zero(&v) {
                    let cu = ci as usize;
                    self.col_count[cu] -= 1;
                    if self.col_live[cu] && self.col_count[cu] > 0 {
                        self.heap.push(Reverse((self.col_count[cu], ci)));
                    }
                } else {
                    out.push((ci, v));
                }
                i += 1;
                j += 1;
            }
        }
        self.rows[s] = std::mem::replace(out, old);
    }
}

impl Eliminator<'_, Integers> {
    /// When no unit is left, pick the sparsest live column whose entries
    /// have gcd 1 and run Euclid's algorithm down it with row operations,
    /// leaving a single unit entry. Returns false if no such column exists.
    pub fn make_unit(&mut self) -> bool {
        let ncols = self.col_live.len();
        let mut gcd = vec![Int::ZERO; ncols];
        for (_, row) in self.residual() {
            for (c, v) in row {
                let g = &mut gcd[*c as usize];
                if !g.is_one() {
                    *g = g.gcd(v);
                }
            }
        }
        let Some(c) = (0..ncols)
            .filter(|&c| self.col_live[c] && gcd[c].is_one())
            .min_by_key(|&c| self.col_count[c])
        else {
            return false;
        };
        loop {
            let mut list = std::mem::take(&mut self.col_rows[c]);
            list.sort_unstable();
            list.dedup();
            list.retain(|&r| self.row_live[r as usize] && self.entry(r as usize, c as u32).is_some());
            self.col_rows[c] = list.clone();
            if list.len() <= 1 {
                return true;
            }
            let r = *list
                .iter()
                .min_by_key(|&&r| {
                    let v = self.entry(r as usize, c as u32).unwrap();
                    (v.abs(), self.rows[r as usize].len())
                })
                .unwrap() as usize;
            let a = self.entry(r, c as u32).unwrap().clone();
            let source = self.rows[r].clone();
            let mut targets = Vec::new();
            for &s in &list {
                let s = s as usize;
                if s == r {
                    continue;
                }
                let b = self.entry(s, c as u32).unwrap();
                let (q, rem) = b.div_mod_floor(&a);
                // nearest quotient keeps remainders at most |a|/2
                let q = if (&rem + &rem).abs() > a.abs() { q + Int::ONE } else { q };
                if q.is_zero() {
                    continue;
                }
                self.merge(s, &q, &source);
                targets.push((s as u32, q));
            }
            self.ops.push(PivotOp { pivot_row: r as u32, targets });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::ring::{Integers, PrimePower};
    use super::*;
    use crate::int::Int;

    fn rows(m: &[&[i64]]) -> Vec<SparseRow<Int>> {
        m.iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, v)| **v != 0)
                    .map(|(c, v)| (c as u32, Int::from(*v)))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn unit_pivots_are_taken_and_non_units_left() {
        let e = eliminate(&Integers, rows(&[&[1, 2, 0], &[3, 4, 0], &[0, 0, 6]]), 3);
        assert_eq!(e.pivots.len(), 1);
        // after eliminating with pivot 1, the residual is [[-2, 0], [0, 6]]
        let total: usize = e.residual.iter().map(Vec::len).sum();
        assert_eq!(total, 2);
    }

    #[test]
    fn transforms_are_mutually_inverse() {
        let a = rows(&[&[1, 1, 0, 2], &[1, 0, 1, 0], &[0, 1, -1, 2], &[2, 0, 0, 1]]);
        let e = eliminate(&Integers, a, 4);
        let z: Vec<Int> = [3, -1, 4, 1].iter().map(|&x| Int::from(x)).collect();
        let mut y = z.clone();
        e.apply(&Integers, &mut y);
        e.apply_inverse(&Integers, &mut y);
        assert_eq!(y, z);
    }

    #[test]
    fn field_elimination_reaches_full_rank() {
        let f = PrimePower::new(5, 1);
        let a: Vec<SparseRow<u64>> = vec![vec![(0, 2), (1, 3)], vec![(0, 4), (1, 1)], vec![(1, 2)]];
        let e = eliminate(&f, a, 2);
        assert_eq!(e.pivots.len(), 2);
    }
}
