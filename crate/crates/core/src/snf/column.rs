//! Left-to-right column reduction with unit pivots. Column operations keep
//! the image, so the cokernel is read off the reduced columns.
//!
//! Each column is reduced against the pivot on its lowest nonzero row until
//! it vanishes, reaches a row without a pivot holding a unit (a new pivot),
//! or reaches one holding a non-unit (the column is parked). Parked columns
//! are finally reduced modulo all pivots.

use std::collections::BinaryHeap;

use super::ring::PivotRing;
use crate::int::Int;

pub type SparseCol<E> = Vec<(u32, E)>;

/// `A · V = R` for a unimodular `V` recorded as `steps`. Nonzero columns of
/// `R` are the pivot columns (unit lowest entry, lowest rows distinct) and
/// the parked columns (supported on rows without a pivot).
#[derive(Clone, Debug)]
pub struct ColumnReduction<E> {
    pub rows: usize,
    pub cols: usize,
    /// `(column, reduced column)`; the last entry sits on the pivot row.
    pub pivots: Vec<(u32, SparseCol<E>)>,
    /// Pivot index per row, `u32::MAX` if none.
    pub pivot_of_row: Vec<u32>,
    /// `(column, reduced column)` for the parked columns.
    pub parked: Vec<(u32, SparseCol<E>)>,
    /// Per column, the `(pivot, multiplier)` pairs subtracted, in order.
    pub steps: Vec<Vec<(u32, E)>>,
}

struct Accumulator<'r, R: PivotRing> {
    ring: &'r R,
    dense: Vec<R::E>,
    queued: Vec<bool>,
    heap: BinaryHeap<u32>,
    zero: R::E,
}

impl<'r, R: PivotRing> Accumulator<'r, R> {
    fn new(ring: &'r R, rows: usize) -> Self {
        let zero = ring.from_int(&Int::ZERO);
        Accumulator {
            ring,
            dense: vec![zero.clone(); rows],
            queued: vec![false; rows],
            heap: BinaryHeap::new(),
            zero,
        }
    }

    fn load(&mut self, col: &[(u32, R::E)]) {
        for (r, v) in col {
            self.dense[*r as usize] = v.clone();
            if !self.queued[*r as usize] {
                self.queued[*r as usize] = true;
                self.heap.push(*r);
            }
        }
    }

    fn sub(&mut self, c: &R::E, col: &[(u32, R::E)]) {
        for (r, v) in col {
            let r = *r as usize;
            self.dense[r] = self.ring.sub_mul(&self.dense[r], c, v);
            if !self.queued[r] {
                self.queued[r] = true;
                self.heap.push(r as u32);
            }
        }
    }

    /// Highest queued row with a nonzero value; the value stays in place.
    fn pop(&mut self) -> Option<u32> {
        while let Some(r) = self.heap.pop() {
            let ru = r as usize;
            self.queued[ru] = false;
            if !self.ring.is_zero(&self.dense[ru]) {
                return Some(r);
            }
        }
        None
    }

    fn take(&mut self, r: u32) -> R::E {
        std::mem::replace(&mut self.dense[r as usize], self.zero.clone())
    }

    /// Empty the accumulator into an ascending sparse column, including the
    /// popped row `top`.
    fn drain(&mut self, top: Option<u32>) -> SparseCol<R::E> {
        let mut out = Vec::with_capacity(self.heap.len() + 1);
        if let Some(r) = top {
            let v = self.take(r);
            if !self.ring.is_zero(&v) {
                out.push((r, v));
            }
        }
        while let Some(r) = self.heap.pop() {
            self.queued[r as usize] = false;
            let v = self.take(r);
            if !self.ring.is_zero(&v) {
                out.push((r, v));
            }
        }
        out.sort_unstable_by_key(|e| e.0);
        out
    }
}

/// Reduce the columns of a matrix (given as ascending sparse columns) from
/// left to right.
pub fn reduce_columns<R: PivotRing>(ring: &R, rows: usize, columns: Vec<SparseCol<R::E>>) -> ColumnReduction<R::E> {
    let cols = columns.len();
    let mut out = ColumnReduction {
        rows,
        cols,
        pivots: Vec::new(),
        pivot_of_row: vec![u32::MAX; rows],
        parked: Vec::new(),
        steps: vec![Vec::new(); cols],
    };
    let mut acc = Accumulator::new(ring, rows);
    let mut parked = Vec::new();
    for (j, col) in columns.into_iter().enumerate() {
        acc.load(&col);
        drop(col);
        let steps = &mut out.steps[j];
        while let Some(r) = acc.pop() {
            let t = out.pivot_of_row[r as usize];
            if t == u32::MAX {
                let unit = ring.is_unit(&acc.dense[r as usize]);
                let cur = acc.drain(Some(r));
                if unit {
                    out.pivot_of_row[r as usize] = out.pivots.len() as u32;
                    out.pivots.push((j as u32, cur));
                } else {
                    parked.push((j as u32, cur));
                }
                break;
            }
            let pcol = &out.pivots[t as usize].1;
            let c = ring.div_unit(&acc.dense[r as usize], &pcol.last().unwrap().1);
            acc.sub(&c, pcol);
            steps.push((t, c));
        }
    }
    for (j, col) in parked {
        let (mult, kept) = out.reduce_sparse(ring, &col);
        out.steps[j as usize].extend(mult);
        if !kept.is_empty() {
            out.parked.push((j, kept));
        }
    }
    out
}

impl<E: Clone + PartialEq> ColumnReduction<E> {
    pub fn rank_of_pivots(&self) -> usize {
        self.pivots.len()
    }

    /// Rows that carry no pivot, ascending.
    pub fn free_rows(&self) -> Vec<u32> {
        (0..self.rows as u32).filter(|&r| self.pivot_of_row[r as usize] == u32::MAX).collect()
    }

    fn reduce_sparse<R: PivotRing<E = E>>(&self, ring: &R, col: &[(u32, E)]) -> (Vec<(u32, E)>, SparseCol<E>) {
        let mut acc = Accumulator::new(ring, self.rows);
        acc.load(col);
        let mut mult = Vec::new();
        let mut kept = Vec::new();
        while let Some(r) = acc.pop() {
            let t = self.pivot_of_row[r as usize];
            if t == u32::MAX {
                kept.push((r, acc.take(r)));
                continue;
            }
            let pcol = &self.pivots[t as usize].1;
            let c = ring.div_unit(&acc.dense[r as usize], &pcol.last().unwrap().1);
            acc.sub(&c, pcol);
            mult.push((t, c));
        }
        kept.reverse();
        (mult, kept)
    }

    /// Subtract pivot columns from `z` until it vanishes on every pivot row.
    pub fn reduce_vector<R: PivotRing<E = E>>(&self, ring: &R, z: &[E]) -> Vec<E> {
        let col: SparseCol<E> = z
            .iter()
            .enumerate()
            .filter(|(_, v)| !ring.is_zero(v))
            .map(|(i, v)| (i as u32, v.clone()))
            .collect();
        let (_, kept) = self.reduce_sparse(ring, &col);
        let mut out = vec![ring.from_int(&Int::ZERO); self.rows];
        for (r, v) in kept {
            out[r as usize] = v;
        }
        out
    }

    /// Replay `steps` against the original columns and check the claimed
    /// shape of `R`.
    pub fn certify<R: PivotRing<E = E>>(&self, ring: &R, columns: &[SparseCol<E>]) -> Result<(), String> {
        if columns.len() != self.cols {
            return Err("column count mismatch".into());
        }
        let mut role = vec![None; self.cols];
        let mut pivot_rank = vec![u32::MAX; self.cols];
        for (t, (c, col)) in self.pivots.iter().enumerate() {
            pivot_rank[*c as usize] = t as u32;
            let Some((low, v)) = col.last() else {
                return Err(format!("pivot column {c} is empty"));
            };
            if self.pivot_of_row[*low as usize] != t as u32 || !ring.is_unit(v) {
                return Err(format!("pivot column {c} has a bad lowest entry"));
            }
            role[*c as usize] = Some(col);
        }
        if self.pivot_of_row.iter().filter(|&&t| t != u32::MAX).count() != self.pivots.len() {
            return Err("pivot rows are not distinct".into());
        }
        for (c, col) in &self.parked {
            if col.iter().any(|(r, _)| self.pivot_of_row[*r as usize] != u32::MAX) {
                return Err(format!("parked column {c} meets a pivot row"));
            }
            role[*c as usize] = Some(col);
        }
        let mut acc = Accumulator::new(ring, self.rows);
        for (j, col) in columns.iter().enumerate() {
            acc.load(col);
            for (t, c) in &self.steps[j] {
                let Some((pc, pcol)) = self.pivots.get(*t as usize) else {
                    return Err(format!("column {j} uses a missing pivot"));
                };
                // pivots may only draw on earlier pivots, which keeps V unitriangular
                if *pc as usize == j || (pivot_rank[j] != u32::MAX && *t >= pivot_rank[j]) {
                    return Err(format!("column {j} reduces by a later pivot"));
                }
                acc.sub(c, pcol);
            }
            let got = acc.drain(None);
            let want: &[(u32, E)] = role[j].map_or(&[], |c| c.as_slice());
            if got.as_slice() != want {
                return Err(format!("column {j} does not replay to its reduced form"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::ring::{Integers, PrimePower};
    use super::*;

    fn cols(m: &[&[i64]]) -> Vec<SparseCol<Int>> {
        // m is given row-major
        let ncols = m[0].len();
        (0..ncols)
            .map(|j| {
                m.iter()
                    .enumerate()
                    .filter(|(_, r)| r[j] != 0)
                    .map(|(i, r)| (i as u32, Int::from(r[j])))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn pivots_parked_and_replay() {
        let a = cols(&[&[1, 1, 0, 2], &[0, 2, 2, 2], &[0, 0, 0, 0]]);
        let red = reduce_columns(&Integers, 3, a.clone());
        assert_eq!(red.pivots.len(), 1);
        assert_eq!(red.parked.len(), 3);
        red.certify(&Integers, &a).unwrap();
        let z = red.reduce_vector(&Integers, &[Int::from(3), Int::from(1), Int::from(5)]);
        assert!(z[0].is_zero());
    }

    #[test]
    fn tampering_is_caught() {
        let a = cols(&[&[1, 0, 4], &[2, 3, 1]]);
        let mut red = reduce_columns(&Integers, 2, a.clone());
        red.certify(&Integers, &a).unwrap();
        red.pivots[0].1[0].1 = Int::from(7);
        assert!(red.certify(&Integers, &a).is_err());
    }

    #[test]
    fn field_rank() {
        let f = PrimePower::new(5, 1);
        let a = vec![vec![(0, 2), (1, 4)], vec![(0, 3), (1, 1), (2, 2)], vec![(0, 1), (1, 2)]];
        let red = reduce_columns(&f, 3, a.clone());
        assert_eq!(red.pivots.len(), 2);
        red.certify(&f, &a).unwrap();
    }
}
