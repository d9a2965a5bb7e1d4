//! Smith normal form: a dense reference algorithm with full transforms, and
//! the sparse reduction used for boundary matrices.

mod column;
mod dense;
mod local;
mod ring;
mod sparse;

use std::collections::HashMap;

pub use column::{reduce_columns, ColumnReduction, SparseCol};
pub use dense::{compress_columns, dense_snf, DenseSnf};
pub use local::{local_invariants, LocalInvariants};
pub use ring::{Integers, PivotRing, PrimePower};
pub use sparse::{eliminate, Elimination, Eliminator, PivotOp, SparseRow};

use crate::int::Int;
use crate::matrix::{DenseMatrix, SparseIntMatrix};

/// `u · a · v = diag(d)`, with `d` the positive invariant factors in
/// divisibility order.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub d: Vec<Int>,
    pub u: DenseMatrix,
    pub v: DenseMatrix,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.d.len()
    }

    pub fn diagonal(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.u.rows(), self.v.cols());
        for (i, x) in self.d.iter().enumerate() {
            m.set(i, i, x.clone());
        }
        m
    }

    /// Recheck `u · a · v = D`, the divisibility chain, and `det u, det v = ±1`.
    pub fn verify(&self, a: &SparseIntMatrix) -> bool {
        let dense = a.to_dense();
        self.u.mul(&dense).mul(&self.v) == self.diagonal()
            && divisibility_chain(&self.d)
            && self.u.determinant().is_unit()
            && self.v.determinant().is_unit()
    }
}

pub fn divisibility_chain(d: &[Int]) -> bool {
    d.iter().all(|x| !x.is_zero() && !x.is_negative()) && d.windows(2).all(|w| w[1].is_divisible_by(&w[0]))
}

/// Dense Smith normal form with explicit `U` and `V`; the result is verified
/// before it is returned.
pub fn smith_normal_form(a: &SparseIntMatrix) -> SmithDecomposition {
    let s = dense_snf(&a.to_dense(), true);
    let out = SmithDecomposition { d: s.d, u: s.u, v: s.v };
    assert!(out.verify(a), "Smith decomposition failed its own check");
    out
}

/// Sparse row elimination in layers followed by a dense Smith form of whatever
/// is left. Each layer takes unit pivots; when none remain and every residual
/// entry shares a factor `g > 1`, the residual is divided by `g` and the next
/// layer starts. A pivot taken in a layer with accumulated factor `G`
/// contributes the invariant factor `G`. Row transforms are kept so that
/// cokernel coordinates of vectors can be computed and lifted.
///
/// Cokernel coordinates have one slot per non-unit pivot row (in pivot
/// order), then one per core row after the core's row transform, then one
/// per row whose residual was empty.
#[derive(Clone, Debug)]
pub struct RowReduction {
    elim: Elimination<Int>,
    layer_factor: Vec<Int>,
    layered: Vec<usize>,
    core_rows: Vec<usize>,
    zero_rows: Vec<usize>,
    core_cols: Vec<u32>,
    core: DenseMatrix,
    basis: DenseMatrix,
    witness: Vec<Vec<(u32, Int)>>,
    snf: DenseSnf,
    orders: Vec<Int>,
}

impl RowReduction {
    pub fn new(a: &SparseIntMatrix) -> Self {
        let mut el = Eliminator::new(&Integers, a.row_lists(), a.cols());
        let mut layer_factor = vec![Int::ONE];
        loop {
            el.run();
            let g = el
                .residual()
                .flat_map(|(_, r)| r.iter().map(|e| &e.1))
                .fold(Int::ZERO, |g, x| if g.is_one() { g } else { g.gcd(x) });
            if g.is_zero() {
                break;
            }
            if g.is_one() {
                if el.make_unit() {
                    continue;
                }
                break;
            }
            el.divide_residual(|x| x.div_exact(&g));
            let next = layer_factor.last().unwrap() * &g;
            layer_factor.push(next);
        }
        let elim = el.finish();
        let layered: Vec<usize> = (0..elim.pivots.len()).filter(|&t| elim.pivot_layer[t] > 0).collect();
        let mut core_rows = Vec::new();
        let mut zero_rows = Vec::new();
        let mut cols: Vec<u32> = Vec::new();
        for (i, r) in elim.residual.iter().enumerate() {
            if r.is_empty() {
                zero_rows.push(i);
            } else {
                core_rows.push(i);
                cols.extend(r.iter().map(|e| e.0));
            }
        }
        cols.sort_unstable();
        cols.dedup();
        let col_pos: HashMap<u32, usize> = cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut core = DenseMatrix::zeros(core_rows.len(), cols.len());
        for (ci, &i) in core_rows.iter().enumerate() {
            for (c, v) in &elim.residual[i] {
                core.set(ci, col_pos[c], v.clone());
            }
        }
        let (basis, witness) = compress_columns(&core);
        let snf = dense_snf(&basis, true);
        let scale = layer_factor.last().unwrap().clone();
        let mut orders: Vec<Int> = layered
            .iter()
            .map(|&t| layer_factor[elim.pivot_layer[t] as usize].clone())
            .collect();
        orders.extend(snf.d.iter().map(|d| d * &scale));
        RowReduction {
            elim,
            layer_factor,
            layered,
            core_rows,
            zero_rows,
            core_cols: cols,
            core,
            basis,
            witness,
            snf,
            orders,
        }
    }

    pub fn rows(&self) -> usize {
        self.elim.rows
    }

    pub fn cols(&self) -> usize {
        self.elim.cols
    }

    pub fn rank(&self) -> usize {
        self.elim.pivots.len() + self.snf.d.len()
    }

    pub fn sparse_pivots(&self) -> usize {
        self.elim.pivots.len()
    }

    /// Number of layers after the first.
    pub fn layers(&self) -> usize {
        self.layer_factor.len() - 1
    }

    pub fn core_shape(&self) -> (usize, usize) {
        (self.core.rows(), self.core.cols())
    }

    /// All nonzero invariant factors, in divisibility order.
    pub fn invariant_factors(&self) -> Vec<Int> {
        let mut out = vec![Int::ONE; self.elim.pivots.len() - self.layered.len()];
        out.extend(self.orders.iter().cloned());
        out
    }

    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<Int> {
        self.orders.iter().filter(|d| !d.is_one()).cloned().collect()
    }

    pub fn coordinate_count(&self) -> usize {
        self.layered.len() + self.elim.live_rows.len()
    }

    /// Order of coordinate `i` in the cokernel: `Some(d)` for a cyclic slot
    /// (`d = 1` means the slot is trivial), `None` for a free slot.
    pub fn coordinate_order(&self, i: usize) -> Option<&Int> {
        self.orders.get(i)
    }

    /// Cokernel coordinates of a vector in the row space.
    pub fn coordinates(&self, z: &[Int]) -> Vec<Int> {
        assert_eq!(z.len(), self.rows());
        let mut y = z.to_vec();
        self.elim.apply(&Integers, &mut y);
        let live = &self.elim.live_rows;
        let mut out: Vec<Int> = self
            .layered
            .iter()
            .map(|&t| y[self.elim.pivots[t].0 as usize].clone())
            .collect();
        let core_part: Vec<Int> = self.core_rows.iter().map(|&i| y[live[i] as usize].clone()).collect();
        out.extend(self.snf.u.mul_vec(&core_part));
        out.extend(self.zero_rows.iter().map(|&i| y[live[i] as usize].clone()));
        out
    }

    /// A vector whose cokernel coordinates are `coords`.
    pub fn lift(&self, coords: &[Int]) -> Vec<Int> {
        assert_eq!(coords.len(), self.coordinate_count());
        let nl = self.layered.len();
        let nc = self.core_rows.len();
        let live = &self.elim.live_rows;
        let mut z = vec![Int::ZERO; self.rows()];
        for (&t, v) in self.layered.iter().zip(coords) {
            z[self.elim.pivots[t].0 as usize] = v.clone();
        }
        let core_vals = self.snf.u_inv.mul_vec(&coords[nl..nl + nc]);
        for (&i, v) in self.core_rows.iter().zip(core_vals) {
            z[live[i] as usize] = v;
        }
        for (&i, v) in self.zero_rows.iter().zip(&coords[nl + nc..]) {
            z[live[i] as usize] = v.clone();
        }
        self.elim.apply_inverse(&Integers, &mut z);
        z
    }

    /// Whether `z` lies in the column span.
    pub fn in_image(&self, z: &[Int]) -> bool {
        self.coordinates(z).iter().enumerate().all(|(i, c)| match self.coordinate_order(i) {
            Some(d) => c.is_divisible_by(d),
            None => c.is_zero(),
        })
    }

    /// A basis of the left kernel `{w : wᵀ A = 0}`.
    pub fn left_kernel(&self) -> Vec<Vec<Int>> {
        let r = self.snf.d.len();
        let live = &self.elim.live_rows;
        let mut out = Vec::new();
        for i in r..self.core_rows.len() {
            let mut w = vec![Int::ZERO; self.rows()];
            for (j, &cr) in self.core_rows.iter().enumerate() {
                w[live[cr] as usize] = self.snf.u.get(i, j).clone();
            }
            self.elim.apply_transpose(&Integers, &mut w);
            out.push(w);
        }
        for &zr in &self.zero_rows {
            let mut w = vec![Int::ZERO; self.rows()];
            w[live[zr] as usize] = Int::ONE;
            self.elim.apply_transpose(&Integers, &mut w);
            out.push(w);
        }
        out
    }

    /// Independent replay of the recorded reduction against `a`.
    pub fn certify(&self, a: &SparseIntMatrix) -> Result<(), String> {
        if a.rows() != self.rows() || a.cols() != self.cols() {
            return Err("shape mismatch".into());
        }
        let mut rows: Vec<SparseRow<Int>> = a.row_lists();
        for op in &self.elim.ops {
            let p = rows[op.pivot_row as usize].clone();
            for (s, c) in &op.targets {
                let row = &mut rows[*s as usize];
                *row = sub_mul_rows(row, c, &p);
            }
        }
        let mut pivot_index = vec![usize::MAX; self.cols()];
        for (t, &(_, c)) in self.elim.pivots.iter().enumerate() {
            pivot_index[c as usize] = t;
        }
        for (t, &(r, c)) in self.elim.pivots.iter().enumerate() {
            let f = &self.layer_factor[self.elim.pivot_layer[t] as usize];
            let row = &rows[r as usize];
            let diag = row.iter().find(|e| e.0 == c).map(|e| &e.1);
            if !diag.is_some_and(|d| d.abs() == *f) {
                return Err(format!("pivot ({r},{c}) is not ±{f} after replay"));
            }
            if row.iter().any(|(_, v)| !v.is_divisible_by(f)) {
                return Err(format!("pivot row {r} is not divisible by {f}"));
            }
            if row.iter().any(|(col, _)| pivot_index[*col as usize] < t) {
                return Err(format!("pivot row {r} is not triangular"));
            }
        }
        if self.elim.pivot_layer.windows(2).any(|w| w[0] > w[1])
            || !divisibility_chain(&self.layer_factor)
        {
            return Err("layers are out of order".into());
        }
        let scale = self.layer_factor.last().unwrap();
        for (i, &r) in self.elim.live_rows.iter().enumerate() {
            let expect: SparseRow<Int> = self.elim.residual[i].iter().map(|(c, v)| (*c, v * scale)).collect();
            if rows[r as usize] != expect {
                return Err(format!("live row {r} disagrees with the residual"));
            }
            if rows[r as usize].iter().any(|(c, _)| pivot_index[*c as usize] != usize::MAX) {
                return Err(format!("live row {r} meets a pivot column"));
            }
        }
        let s = &self.snf;
        let (m, b) = (self.core.rows(), self.basis.cols());
        for (j, wj) in self.witness.iter().enumerate() {
            for i in 0..m {
                let x: Int = wj.iter().map(|(c, w)| w * self.core.get(i, *c as usize)).sum();
                if &x != self.basis.get(i, j) {
                    return Err("core basis is not spanned by the core".into());
                }
            }
        }
        let mut diag = DenseMatrix::zeros(m, b);
        for (i, x) in s.d.iter().enumerate() {
            diag.set(i, i, x.clone());
        }
        if s.u.mul(&self.basis).mul(&s.v) != diag {
            return Err("core transform does not reach the diagonal".into());
        }
        if s.u.mul(&s.u_inv) != DenseMatrix::identity(m) || s.v.mul(&s.v_inv) != DenseMatrix::identity(b) {
            return Err("core transforms are not invertible".into());
        }
        if !divisibility_chain(&s.d) {
            return Err("core factors break the divisibility chain".into());
        }
        let uk = s.u.mul(&self.core);
        for i in 0..m {
            let ok = match s.d.get(i) {
                Some(d) => uk.row(i).iter().all(|x| x.is_divisible_by(d)),
                None => uk.row(i).iter().all(Int::is_zero),
            };
            if !ok {
                return Err("a core column lies outside the basis lattice".into());
            }
        }
        debug_assert_eq!(self.core_cols.len(), self.core.cols());
        Ok(())
    }
}

/// Cokernel and rank of an integer matrix. Column reduction with unit
/// pivots runs in stages: each stage reduces the columns parked by the
/// previous one, restricted to the rows still without a pivot and taken in
/// reverse order, so that different entries become lowest. Whatever is left
/// goes to a [`RowReduction`].
///
/// Cokernel coordinates are those of the final row reduction.
#[derive(Clone, Debug)]
pub struct IntReduction {
    rows: usize,
    cols: usize,
    stages: Vec<Stage>,
    residual: SparseIntMatrix,
    inner: RowReduction,
}

#[derive(Clone, Debug)]
struct Stage {
    /// Position `i` of this stage holds row `order[i]` of the incoming space.
    order: Vec<u32>,
    front: ColumnReduction<Int>,
    free: Vec<u32>,
}

const MAX_STAGES: usize = 8;

impl Stage {
    fn run(order: Vec<u32>, input: &[SparseCol<Int>]) -> Self {
        let columns = reorder(&order, input);
        let front = reduce_columns(&Integers, order.len(), columns);
        let free = front.free_rows();
        Stage { order, front, free }
    }

    /// Parked columns restricted to the free rows, in incoming order of the
    /// next stage's space (free row `i` becomes row `i`).
    fn output(&self) -> Vec<SparseCol<Int>> {
        let mut pos = vec![u32::MAX; self.order.len()];
        for (i, &r) in self.free.iter().enumerate() {
            pos[r as usize] = i as u32;
        }
        self.front
            .parked
            .iter()
            .map(|(_, col)| col.iter().map(|(r, v)| (pos[*r as usize], v.clone())).collect())
            .collect()
    }

    fn forward(&self, z: &[Int]) -> Vec<Int> {
        let y: Vec<Int> = self.order.iter().map(|&r| z[r as usize].clone()).collect();
        let y = self.front.reduce_vector(&Integers, &y);
        self.free.iter().map(|&r| y[r as usize].clone()).collect()
    }

    fn backward(&self, y: &[Int]) -> Vec<Int> {
        let mut z = vec![Int::ZERO; self.order.len()];
        for (&r, v) in self.free.iter().zip(y) {
            z[self.order[r as usize] as usize] = v.clone();
        }
        z
    }
}

fn reorder(order: &[u32], input: &[SparseCol<Int>]) -> Vec<SparseCol<Int>> {
    let mut pos = vec![0u32; order.len()];
    for (i, &r) in order.iter().enumerate() {
        pos[r as usize] = i as u32;
    }
    input
        .iter()
        .map(|col| {
            let mut c: SparseCol<Int> = col.iter().map(|(r, v)| (pos[*r as usize], v.clone())).collect();
            c.sort_unstable_by_key(|e| e.0);
            c
        })
        .collect()
}

impl IntReduction {
    pub fn new(a: &SparseIntMatrix) -> Self {
        let mut stages: Vec<Stage> = Vec::new();
        let mut input = column_lists(a);
        let mut order: Vec<u32> = (0..a.rows() as u32).collect();
        loop {
            let stage = Stage::run(order, &input);
            let progress = !stage.front.pivots.is_empty();
            input = stage.output();
            let n = stage.free.len() as u32;
            stages.push(stage);
            if input.is_empty() || !progress || stages.len() == MAX_STAGES {
                break;
            }
            order = (0..n).rev().collect();
        }
        let rows = stages.last().unwrap().free.len();
        let residual = SparseIntMatrix::from_columns(rows, input);
        let inner = RowReduction::new(&residual);
        IntReduction {
            rows: a.rows(),
            cols: a.cols(),
            stages,
            residual,
            inner,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.column_pivots() + self.inner.rank()
    }

    /// Unit pivots taken by the column stages.
    pub fn column_pivots(&self) -> usize {
        self.stages.iter().map(|s| s.front.pivots.len()).sum()
    }

    pub fn stages(&self) -> usize {
        self.stages.len()
    }

    /// Shape of the matrix handed to the row phase.
    pub fn residual_shape(&self) -> (usize, usize) {
        (self.residual.rows(), self.residual.cols())
    }

    pub fn inner(&self) -> &RowReduction {
        &self.inner
    }

    /// All nonzero invariant factors, in divisibility order.
    pub fn invariant_factors(&self) -> Vec<Int> {
        let mut out = vec![Int::ONE; self.column_pivots()];
        out.extend(self.inner.invariant_factors());
        out
    }

    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<Int> {
        self.inner.torsion()
    }

    pub fn coordinate_count(&self) -> usize {
        self.inner.coordinate_count()
    }

    /// Order of coordinate `i` in the cokernel: `Some(d)` for a cyclic slot
    /// (`d = 1` means the slot is trivial), `None` for a free slot.
    pub fn coordinate_order(&self, i: usize) -> Option<&Int> {
        self.inner.coordinate_order(i)
    }

    /// Cokernel coordinates of a vector in the row space.
    pub fn coordinates(&self, z: &[Int]) -> Vec<Int> {
        assert_eq!(z.len(), self.rows());
        let mut y = z.to_vec();
        for s in &self.stages {
            y = s.forward(&y);
        }
        self.inner.coordinates(&y)
    }

    /// A vector whose cokernel coordinates are `coords`.
    pub fn lift(&self, coords: &[Int]) -> Vec<Int> {
        let mut y = self.inner.lift(coords);
        for s in self.stages.iter().rev() {
            y = s.backward(&y);
        }
        y
    }

    /// Whether `z` lies in the column span.
    pub fn in_image(&self, z: &[Int]) -> bool {
        self.coordinates(z).iter().enumerate().all(|(i, c)| match self.coordinate_order(i) {
            Some(d) => c.is_divisible_by(d),
            None => c.is_zero(),
        })
    }

    /// Independent replay of every phase against `a`.
    pub fn certify(&self, a: &SparseIntMatrix) -> Result<(), String> {
        if a.rows() != self.rows() || a.cols() != self.cols() {
            return Err("shape mismatch".into());
        }
        let mut input = column_lists(a);
        for (i, s) in self.stages.iter().enumerate() {
            let mut sorted = s.order.clone();
            sorted.sort_unstable();
            if sorted.iter().enumerate().any(|(k, &r)| r as usize != k) {
                return Err(format!("stage {i} order is not a permutation"));
            }
            s.front.certify(&Integers, &reorder(&s.order, &input)).map_err(|e| format!("stage {i}: {e}"))?;
            input = s.output();
        }
        if SparseIntMatrix::from_columns(self.residual.rows(), input) != self.residual {
            return Err("residual does not follow from the last stage".into());
        }
        self.inner.certify(&self.residual)
    }
}

fn column_lists(a: &SparseIntMatrix) -> Vec<SparseCol<Int>> {
    (0..a.cols())
        .map(|j| a.column(j).map(|(i, v)| (i as u32, v.clone())).collect())
        .collect()
}

fn sub_mul_rows(a: &SparseRow<Int>, c: &Int, b: &SparseRow<Int>) -> SparseRow<Int> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ci = a.get(i).map_or(u32::MAX, |e| e.0);
        let cj = b.get(j).map_or(u32::MAX, |e| e.0);
        if ci < cj {
            out.push(a[i].clone());
            i += 1;
        } else if cj < ci {
            out.push((cj, Int::ZERO.sub_mul(c, &b[j].1)));
            j += 1;
        } else {
            let v = a[i].1.sub_mul(c, &b[j].1);
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Rank of an integer matrix over `F_p`.
pub fn rank_mod_p(a: &SparseIntMatrix, p: u64) -> usize {
    let ring = PrimePower::new(p, 1);
    let columns = (0..a.cols())
        .map(|j| {
            a.column(j)
                .map(|(i, v)| (i as u32, ring.from_int(v)))
                .filter(|(_, v)| *v != 0)
                .collect()
        })
        .collect();
    reduce_columns(&ring, a.rows(), columns).pivots.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sparse(rows: &[Vec<i64>]) -> SparseIntMatrix {
        SparseIntMatrix::from_dense(&DenseMatrix::from_rows(rows))
    }

    #[test]
    fn reference_examples() {
        let s = smith_normal_form(&sparse(&[vec![2, 4], vec![6, 8]]));
        assert_eq!(s.d, vec![Int::from(2), Int::from(4)]);
        assert_eq!(smith_normal_form(&SparseIntMatrix::identity(3)).d, vec![Int::ONE; 3]);
        assert_eq!(smith_normal_form(&SparseIntMatrix::zeros(3, 2)).rank(), 0);
    }

    #[test]
    fn reduction_coordinates() {
        // image spanned by (1,1,0) and (0,2,2): cokernel Z ⊕ Z_2
        let a = sparse(&[vec![1, 0], vec![1, 2], vec![0, 2]]);
        let red = IntReduction::new(&a);
        red.certify(&a).unwrap();
        assert_eq!(red.rank(), 2);
        assert_eq!(red.torsion(), vec![Int::from(2)]);
        let v = |x: &[i64]| x.iter().map(|&t| Int::from(t)).collect::<Vec<_>>();
        assert!(red.in_image(&v(&[1, 3, 2])));
        assert!(!red.in_image(&v(&[0, 1, 1])));
        assert!(!red.in_image(&v(&[0, 0, 1])));
        let c = red.coordinates(&v(&[0, 1, 1]));
        assert_eq!(red.lift(&c).len(), 3);
        let back = red.coordinates(&red.lift(&c));
        assert_eq!(back, c);
        let rows = RowReduction::new(&a);
        rows.certify(&a).unwrap();
        assert_eq!(rows.left_kernel().len(), 1);
        assert!(rows.left_kernel().iter().all(|w| {
            (0..a.cols()).all(|j| a.column(j).map(|(i, x)| x * &w[i]).sum::<Int>().is_zero())
        }));
    }

    #[test]
    fn field_rank() {
        let a = sparse(&[vec![3, 0], vec![0, 1]]);
        assert_eq!(rank_mod_p(&a, 3), 1);
        assert_eq!(rank_mod_p(&a, 5), 2);
    }
}

