//! Dense Smith normal form over the integers with optional transforms.

use crate::int::Int;
use crate::matrix::DenseMatrix;

/// `u · a · v = diag(d)` with `u`, `v` unimodular; `u_inv`, `v_inv` are their
/// inverses. Transforms are empty (0×0) when not tracked.
#[derive(Clone, Debug)]
pub struct DenseSnf {
    pub d: Vec<Int>,
    pub u: DenseMatrix,
    pub u_inv: DenseMatrix,
    pub v: DenseMatrix,
    pub v_inv: DenseMatrix,
}

struct Work {
    a: DenseMatrix,
    track: bool,
    u: DenseMatrix,
    u_inv: DenseMatrix,
    v: DenseMatrix,
    v_inv: DenseMatrix,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        if self.track {
            self.u.swap_rows(i, j);
            self.u_inv.swap_cols(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        if self.track {
            self.v.swap_cols(i, j);
            self.v_inv.swap_rows(i, j);
        }
    }

    /// `row[dst] -= q * row[src]`
    fn row_op(&mut self, dst: usize, src: usize, q: &Int) {
        self.a.row_sub_mul(dst, src, q);
        if self.track {
            self.u.row_sub_mul(dst, src, q);
            self.u_inv.col_sub_mul(src, dst, &-q);
        }
    }

    /// `col[dst] -= q * col[src]`
    fn col_op(&mut self, dst: usize, src: usize, q: &Int) {
        self.a.col_sub_mul(dst, src, q);
        if self.track {
            self.v.col_sub_mul(dst, src, q);
            self.v_inv.row_sub_mul(src, dst, &-q);
        }
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        if self.track {
            self.u.negate_row(i);
            self.u_inv.negate_col(i);
        }
    }
}

/// Smallest-absolute-value pivoting with truncated division; a pivot that
/// fails to divide the remaining block absorbs the offending row.
pub fn dense_snf(a: &DenseMatrix, track: bool) -> DenseSnf {
    let (m, n) = (a.rows(), a.cols());
    let eye = |k: usize| if track { DenseMatrix::identity(k) } else { DenseMatrix::zeros(0, 0) };
    let mut w = Work {
        a: a.clone(),
        track,
        u: eye(m),
        u_inv: eye(m),
        v: eye(n),
        v_inv: eye(n),
    };
    let mut d = Vec::new();
    for t in 0..m.min(n) {
        let Some((pi, pj)) = min_entry(&w.a, t, t..m, t..n) else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if w.a.get(i, t).is_zero() {
                    continue;
                }
                let (q, _) = w.a.get(i, t).div_rem_trunc(w.a.get(t, t));
                w.row_op(i, t, &q);
                dirty |= !w.a.get(i, t).is_zero();
            }
            for j in t + 1..n {
                if w.a.get(t, j).is_zero() {
                    continue;
                }
                let (q, _) = w.a.get(t, j).div_rem_trunc(w.a.get(t, t));
                w.col_op(j, t, &q);
                dirty |= !w.a.get(t, j).is_zero();
            }
            if dirty {
                // a remainder is now smaller than the pivot; move it in
                let col_min = min_entry(&w.a, t, t..m, t..t + 1);
                let row_min = min_entry(&w.a, t, t..t + 1, t..n);
                let (pi, pj) = match (col_min, row_min) {
                    (Some(x), Some(y)) if w.a.get(y.0, y.1).abs() < w.a.get(x.0, x.1).abs() => y,
                    (Some(x), _) => x,
                    (None, Some(y)) => y,
                    (None, None) => unreachable!(),
                };
                w.swap_rows(t, pi);
                w.swap_cols(t, pj);
                continue;
            }
            let p = w.a.get(t, t).clone();
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !w.a.get(i, j).is_divisible_by(&p)));
            match bad {
                Some(i) => w.row_op(t, i, &-Int::ONE),
                None => break,
            }
        }
        if w.a.get(t, t).is_negative() {
            w.negate_row(t);
        }
        d.push(w.a.get(t, t).clone());
    }
    DenseSnf {
        d,
        u: w.u,
        u_inv: w.u_inv,
        v: w.v,
        v_inv: w.v_inv,
    }
}

/// A basis `b = a · w` of the lattice spanned by the columns of `a`, in
/// column echelon form; `w` is given as sparse columns over `a`'s columns.
pub fn compress_columns(a: &DenseMatrix) -> (DenseMatrix, Vec<Vec<(u32, Int)>>) {
    let m = a.rows();
    let mut slots: Vec<Option<(Vec<Int>, Vec<(u32, Int)>)>> = vec![None; m];
    for j in 0..a.cols() {
        let mut v: Vec<Int> = (0..m).map(|i| a.get(i, j).clone()).collect();
        let mut w = vec![(j as u32, Int::ONE)];
        for p in 0..m {
            if v[p].is_zero() {
                continue;
            }
            let Some((b, wb)) = &mut slots[p] else {
                if v[p].is_negative() {
                    v.iter_mut().for_each(|x| *x = -&*x);
                    w.iter_mut().for_each(|x| x.1 = -&x.1);
                }
                slots[p] = Some((v, w));
                break;
            };
            if v[p].is_divisible_by(&b[p]) {
                let q = v[p].div_exact(&b[p]);
                for i in p..m {
                    v[i] = v[i].sub_mul(&q, &b[i]);
                }
                w = combine(&Int::ONE, &w, &-q, wb);
                continue;
            }
            let (g, x, y) = b[p].extended_gcd(&v[p]);
            let bq = b[p].div_exact(&g);
            let vq = v[p].div_exact(&g);
            // [b v] · [[x, -vq], [y, bq]] has determinant 1
            let nb: Vec<Int> = (0..m).map(|i| &(&x * &b[i]) + &(&y * &v[i])).collect();
            let nv: Vec<Int> = (0..m).map(|i| &(&bq * &v[i]) - &(&vq * &b[i])).collect();
            let nwb = combine(&x, wb, &y, &w);
            let nwv = combine(&bq, &w, &-vq, wb);
            *b = nb;
            *wb = nwb;
            v = nv;
            w = nwv;
            debug_assert!(v[p].is_zero());
        }
    }
    let kept: Vec<(Vec<Int>, Vec<(u32, Int)>)> = slots.into_iter().flatten().collect();
    let mut basis = DenseMatrix::zeros(m, kept.len());
    for (j, (b, _)) in kept.iter().enumerate() {
        for (i, x) in b.iter().enumerate() {
            basis.set(i, j, x.clone());
        }
    }
    (basis, kept.into_iter().map(|(_, w)| w).collect())
}

/// `x·a + y·b` for sparse vectors sorted by index.
fn combine(x: &Int, a: &[(u32, Int)], y: &Int, b: &[(u32, Int)]) -> Vec<(u32, Int)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ci = a.get(i).map_or(u32::MAX, |e| e.0);
        let cj = b.get(j).map_or(u32::MAX, |e| e.0);
        let (c, v) = if ci < cj {
            i += 1;
            (ci, x * &a[i - 1].1)
        } else if cj < ci {
            j += 1;
            (cj, y * &b[j - 1].1)
        } else {
            i += 1;
            j += 1;
            (ci, &(x * &a[i - 1].1) + &(y * &b[j - 1].1))
        };
        if !v.is_zero() {
            out.push((c, v));
        }
    }
    out
}

fn min_entry(
    a: &DenseMatrix,
    _t: usize,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(Int, usize, usize)> = None;
    for i in rows {
        for j in cols.clone() {
            let v = a.get(i, j);
            if v.is_zero() {
                continue;
            }
            let av = v.abs();
            if best.as_ref().map_or(true, |(b, _, _)| av < *b) {
                let one = av.is_one();
                best = Some((av, i, j));
                if one {
                    return best.map(|(_, i, j)| (i, j));
                }
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(rows: &[Vec<i64>], expect: &[i64]) {
        let a = DenseMatrix::from_rows(rows);
        let s = dense_snf(&a, true);
        let d: Vec<i64> = s.d.iter().map(|x| x.to_i64().unwrap()).collect();
        assert_eq!(d, expect);
        let mut diag = DenseMatrix::zeros(a.rows(), a.cols());
        for (i, x) in s.d.iter().enumerate() {
            diag.set(i, i, x.clone());
        }
        assert_eq!(s.u.mul(&a).mul(&s.v), diag);
        assert_eq!(s.u.mul(&s.u_inv), DenseMatrix::identity(a.rows()));
        assert_eq!(s.v.mul(&s.v_inv), DenseMatrix::identity(a.cols()));
    }

    #[test]
    fn compression_spans_the_same_lattice() {
        let a = DenseMatrix::from_rows(&[vec![6i64, 10, 15, 0], vec![1, 2, 3, 4]]);
        let (b, w) = compress_columns(&a);
        assert_eq!(b.cols(), 2);
        for (j, wj) in w.iter().enumerate() {
            for i in 0..2 {
                let s: Int = wj.iter().map(|(c, x)| x * a.get(i, *c as usize)).sum();
                assert_eq!(&s, b.get(i, j));
            }
        }
        let d = dense_snf(&b, false).d;
        assert_eq!(d, dense_snf(&a, false).d);
    }

    #[test]
    fn small_examples() {
        check(&[vec![2, 4], vec![6, 8]], &[2, 4]);
        check(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]], &[1, 1, 1]);
        check(&[vec![0, 0], vec![0, 0]], &[]);
        check(&[vec![2, 0], vec![0, 3]], &[1, 6]);
        check(&[vec![4, 6, 0], vec![6, 9, 3]], &[1, 6]);
        check(&[vec![6], vec![10], vec![15]], &[1]);
    }
}
