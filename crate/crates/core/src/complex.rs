//! Tuple bases, the rack boundary, and the chain complexes built from it.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::chain::{decode_into, encode, is_degenerate, tuple_count, Chain, Theory};
use crate::error::{Error, Result};
use crate::int::Int;
use crate::matrix::SparseIntMatrix;
use crate::rack::FiniteRack;

/// Calls `emit(sign, tuple)` for every raw term of the rack boundary of `x`,
/// before any cancellation or projection.
pub fn boundary_terms(rack: &FiniteRack, x: &[usize], mut emit: impl FnMut(i64, &[usize])) {
    let n = x.len();
    let mut buf = Vec::with_capacity(n.saturating_sub(1));
    for i in 1..n {
        // position i (0-based) is x_{i+1}; sign (-1)^{i+1}
        let sign = if i % 2 == 1 { 1 } else { -1 };
        buf.clear();
        buf.extend_from_slice(&x[..i]);
        buf.extend_from_slice(&x[i + 1..]);
        emit(sign, &buf);
        for (j, slot) in buf.iter_mut().enumerate().take(i) {
            *slot = rack.op(x[j], x[i]);
        }
        emit(-sign, &buf);
    }
}

/// Ordered basis codes of `C_n` for a theory.
pub fn basis(k: usize, n: usize, theory: Theory) -> Vec<u64> {
    let total = tuple_count(k, n).expect("basis too large for a 64-bit code");
    match theory {
        Theory::Rack => (0..total).collect(),
        Theory::Quandle => {
            let mut out = Vec::new();
            let mut t = vec![0usize; n];
            non_degenerate(k, 0, &mut t, &mut out);
            out
        }
        Theory::Degenerate => {
            let mut t = vec![0usize; n];
            (0..total)
                .filter(|&c| {
                    decode_into(k, c, &mut t);
                    is_degenerate(&t)
                })
                .collect()
        }
    }
}

fn non_degenerate(k: usize, pos: usize, t: &mut [usize], out: &mut Vec<u64>) {
    if pos == t.len() {
        out.push(encode(k, t));
        return;
    }
    for x in 0..k {
        if pos > 0 && t[pos - 1] == x {
            continue;
        }
        t[pos] = x;
        non_degenerate(k, pos + 1, t, out);
    }
}

/// Size of the basis of `C_n` without enumerating it.
pub fn basis_size(k: usize, n: usize, theory: Theory) -> usize {
    let total = (k as u128).pow(n as u32);
    let nondeg = if n == 0 {
        1
    } else {
        k as u128 * (k as u128 - 1).pow(n as u32 - 1)
    };
    match theory {
        Theory::Rack => total as usize,
        Theory::Quandle => nondeg as usize,
        Theory::Degenerate => (total - nondeg) as usize,
    }
}

fn require_theory(rack: &FiniteRack, theory: Theory) -> Result<()> {
    if theory != Theory::Rack && !rack.is_quandle() {
        return Err(Error::RequiresQuandle(theory.name()));
    }
    Ok(())
}

/// `∂c`; degree-0 input is rejected and degree-1 input has zero boundary.
pub fn boundary(rack: &FiniteRack, c: &Chain) -> Result<Chain> {
    if c.degree() == 0 {
        return Err(Error::InvalidDegree(0));
    }
    require_theory(rack, c.theory())?;
    let mut out = Chain::zero(rack.size(), c.degree() - 1, c.theory()).with_modulus(c.modulus());
    for (t, coeff) in c.iter() {
        boundary_terms(rack, &t, |s, y| out.add_term(y, &(coeff * &Int::from(s))));
    }
    Ok(out)
}

/// The face split `(∂⁰c, ∂¹c)`, summing to `∂c`.
pub fn boundary_split(rack: &FiniteRack, c: &Chain) -> Result<(Chain, Chain)> {
    if c.degree() == 0 {
        return Err(Error::InvalidDegree(0));
    }
    require_theory(rack, c.theory())?;
    let n = c.degree();
    let zero = Chain::zero(rack.size(), n - 1, c.theory()).with_modulus(c.modulus());
    let (mut d0, mut d1) = (zero.clone(), zero);
    let mut buf = Vec::with_capacity(n - 1);
    for (x, coeff) in c.iter() {
        for i in 0..n {
            // 1-based index i+1
            let sign = if i % 2 == 0 { -coeff } else { coeff.clone() };
            buf.clear();
            buf.extend_from_slice(&x[..i]);
            buf.extend_from_slice(&x[i + 1..]);
            d0.add_term(&buf, &sign);
            for (j, slot) in buf.iter_mut().enumerate().take(i) {
                *slot = rack.op(x[j], x[i]);
            }
            d1.add_term(&buf, &-&sign);
        }
    }
    Ok((d0, d1))
}

/// Matrix of `∂_n : C_n → C_{n-1}` in the ascending-code bases, entries
/// reduced into `[0, m)` when `modulus > 0`.
pub fn boundary_matrix(rack: &FiniteRack, n: usize, theory: Theory, modulus: u64) -> Result<SparseIntMatrix> {
    require_theory(rack, theory)?;
    let k = rack.size();
    let cols = basis(k, n, theory);
    if n == 0 {
        return Ok(SparseIntMatrix::zeros(0, cols.len()));
    }
    let rows = basis(k, n - 1, theory);
    let index = BasisIndex::new(theory, &rows);
    let columns: Vec<Vec<(u32, Int)>> = cols
        .par_iter()
        .map(|&code| {
            let mut x = vec![0usize; n];
            decode_into(k, code, &mut x);
            let mut acc: Vec<(u32, i64)> = Vec::with_capacity(4 * n);
            boundary_terms(rack, &x, |s, y| {
                if let Some(r) = index.position(k, y) {
                    acc.push((r, s));
                }
            });
            acc.sort_unstable_by_key(|e| e.0);
            let mut col: Vec<(u32, Int)> = Vec::with_capacity(acc.len());
            for (r, s) in acc {
                match col.last_mut() {
                    Some((lr, v)) if *lr == r => *v += &Int::from(s),
                    _ => col.push((r, Int::from(s))),
                }
            }
            col.retain(|(_, v)| !v.is_zero());
            if modulus > 0 {
                col = col
                    .into_iter()
                    .map(|(r, v)| (r, Int::from(v.rem_u64(modulus))))
                    .filter(|(_, v)| !v.is_zero())
                    .collect();
            }
            col
        })
        .collect();
    Ok(SparseIntMatrix::from_columns(rows.len(), columns))
}

/// Position lookup for tuple codes in a theory basis.
struct BasisIndex<'a> {
    theory: Theory,
    codes: &'a [u64],
}

impl<'a> BasisIndex<'a> {
    fn new(theory: Theory, codes: &'a [u64]) -> Self {
        BasisIndex { theory, codes }
    }

    fn position(&self, k: usize, t: &[usize]) -> Option<u32> {
        if !self.theory.admits(t) {
            return None;
        }
        let code = encode(k, t);
        match self.theory {
            Theory::Rack => Some(code as u32),
            _ => self.codes.binary_search(&code).ok().map(|i| i as u32),
        }
    }
}

/// The splitting `α : C^Q_n → C^R_n`.
pub fn alpha_split(c: &Chain) -> Result<Chain> {
    if c.theory() != Theory::Quandle {
        return Err(Error::Precondition("alpha is defined on quandle chains".into()));
    }
    let n = c.degree();
    let mut out = Chain::zero(c.base(), n, Theory::Rack).with_modulus(c.modulus());
    let mut y = vec![0usize; n];
    for (x, coeff) in c.iter() {
        if n == 0 {
            out.add_term(&[], coeff);
            continue;
        }
        for mask in 0u64..(1 << (n - 1)) {
            y[0] = x[0];
            let mut negative = false;
            for i in 1..n {
                if mask >> (i - 1) & 1 == 1 {
                    y[i] = x[i - 1];
                    negative = !negative;
                } else {
                    y[i] = x[i];
                }
            }
            out.add_term(&y, &if negative { -coeff } else { coeff.clone() });
        }
    }
    Ok(out)
}

/// A finitely generated free chain complex, given degree-wise by ranks and
/// boundary matrices. `C_n` for negative `n` is zero.
pub trait ChainComplex: Send + Sync {
    fn dim(&self, n: usize) -> usize;

    /// Matrix of `∂_n : C_n → C_{n-1}`; for `n = 0` it has no rows.
    fn boundary_matrix(&self, n: usize) -> SparseIntMatrix;

    fn label(&self) -> String;
}

/// A complex whose chain groups are spanned by explicit chains over a rack.
pub trait ChainBasis: ChainComplex {
    fn rack(&self) -> &FiniteRack;

    fn theory(&self) -> Theory;

    /// Coordinates of `c` in the degree-`c.degree()` basis; fails when `c`
    /// is not in the span.
    fn coordinates(&self, c: &Chain) -> Result<Vec<Int>>;

    fn chain_from(&self, n: usize, v: &[Int]) -> Chain;
}

/// `C^R_*`, `C^D_*` or `C^Q_*` of a finite rack, with lazily cached bases.
pub struct RackComplex {
    rack: Arc<FiniteRack>,
    theory: Theory,
    bases: Mutex<BTreeMap<usize, Arc<Vec<u64>>>>,
}

impl RackComplex {
    pub fn new(rack: Arc<FiniteRack>, theory: Theory) -> Result<Self> {
        require_theory(&rack, theory)?;
        Ok(RackComplex {
            rack,
            theory,
            bases: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn rack_arc(&self) -> &Arc<FiniteRack> {
        &self.rack
    }

    pub fn basis(&self, n: usize) -> Arc<Vec<u64>> {
        let mut cache = self.bases.lock().unwrap();
        cache
            .entry(n)
            .or_insert_with(|| Arc::new(basis(self.rack.size(), n, self.theory)))
            .clone()
    }

    pub fn index_of(&self, n: usize, tuple: &[usize]) -> Option<usize> {
        if tuple.len() != n || !self.theory.admits(tuple) {
            return None;
        }
        let code = encode(self.rack.size(), tuple);
        match self.theory {
            Theory::Rack => Some(code as usize),
            _ => self.basis(n).binary_search(&code).ok(),
        }
    }

    pub fn basis_chain(&self, n: usize, i: usize) -> Chain {
        let code = self.basis(n)[i];
        let mut c = Chain::zero(self.rack.size(), n, self.theory);
        c.add_code(code, &Int::ONE);
        c
    }
}

impl ChainComplex for RackComplex {
    fn dim(&self, n: usize) -> usize {
        basis_size(self.rack.size(), n, self.theory)
    }

    fn boundary_matrix(&self, n: usize) -> SparseIntMatrix {
        boundary_matrix(&self.rack, n, self.theory, 0).expect("theory checked at construction")
    }

    fn label(&self) -> String {
        format!("{} {}", self.rack.name(), self.theory)
    }
}

impl ChainBasis for RackComplex {
    fn rack(&self) -> &FiniteRack {
        &self.rack
    }

    fn theory(&self) -> Theory {
        self.theory
    }

    fn coordinates(&self, c: &Chain) -> Result<Vec<Int>> {
        let n = c.degree();
        if c.base() != self.rack.size() {
            return Err(Error::Precondition("chain over a rack of different size".into()));
        }
        let c = if self.theory == Theory::Quandle {
            c.project(Theory::Quandle)
        } else {
            c.clone()
        };
        let mut v = vec![Int::ZERO; self.dim(n)];
        for (t, coeff) in c.iter() {
            let i = self.index_of(n, &t).ok_or_else(|| {
                Error::Precondition(format!("{t:?} is not a {} basis tuple", self.theory))
            })?;
            v[i] = coeff.clone();
        }
        Ok(v)
    }

    fn chain_from(&self, n: usize, v: &[Int]) -> Chain {
        let basis = self.basis(n);
        assert_eq!(v.len(), basis.len());
        let mut c = Chain::zero(self.rack.size(), n, self.theory);
        for (code, x) in basis.iter().zip(v) {
            c.add_code(*code, x);
        }
        c
    }
}

impl fmt::Debug for RackComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RackComplex({})", self.label())
    }
}

/// `*_a` applied to a tuple code.
fn act_code(rack: &FiniteRack, a: usize, n: usize, code: u64, buf: &mut [usize]) -> u64 {
    let k = rack.size();
    decode_into(k, code, &mut buf[..n]);
    for x in buf[..n].iter_mut() {
        *x = rack.op(*x, a);
    }
    encode(k, &buf[..n])
}

/// Which half of the `*_a` eigen-decomposition to span.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symmetry {
    /// `C^inv(a)`: fixed tuples `u` and sums `u + u*a`.
    Invariant,
    /// `C^-`: differences `u - u*a`.
    Antisymmetric,
}

/// Subcomplex of a rack complex spanned by `*_a`-symmetric (or
/// antisymmetric) chains. Requires a kei so that `*_a` is an involution.
pub struct InvariantComplex {
    base: RackComplex,
    a: usize,
    symmetry: Symmetry,
    reps: Mutex<BTreeMap<usize, Arc<Vec<(u64, u64)>>>>,
}

impl InvariantComplex {
    pub fn new(rack: Arc<FiniteRack>, theory: Theory, a: usize, symmetry: Symmetry) -> Result<Self> {
        if !rack.is_kei() {
            return Err(Error::RequiresKei);
        }
        if a >= rack.size() {
            return Err(Error::Precondition(format!("element {a} outside the rack")));
        }
        Ok(InvariantComplex {
            base: RackComplex::new(rack, theory)?,
            a,
            symmetry,
            reps: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn element(&self) -> usize {
        self.a
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    /// Orbit representatives `(u, u*a)` with `u <= u*a`, in ascending order
    /// of `u`; fixed tuples appear only in the invariant basis.
    fn reps(&self, n: usize) -> Arc<Vec<(u64, u64)>> {
        let mut cache = self.reps.lock().unwrap();
        cache
            .entry(n)
            .or_insert_with(|| {
                let rack = self.base.rack();
                let mut buf = vec![0usize; n];
                let list = self
                    .base
                    .basis(n)
                    .iter()
                    .filter_map(|&u| {
                        let v = act_code(rack, self.a, n, u, &mut buf);
                        match (u.cmp(&v), self.symmetry) {
                            (std::cmp::Ordering::Greater, _) => None,
                            (std::cmp::Ordering::Equal, Symmetry::Antisymmetric) => None,
                            _ => Some((u, v)),
                        }
                    })
                    .collect();
                Arc::new(list)
            })
            .clone()
    }

    /// The basis chains in degree `n`.
    pub fn basis_chains(&self, n: usize) -> Vec<Chain> {
        (0..self.dim(n)).map(|i| self.basis_chain(n, i)).collect()
    }

    pub fn basis_chain(&self, n: usize, i: usize) -> Chain {
        let (u, w) = self.reps(n)[i];
        let mut c = Chain::zero(self.rack().size(), n, self.theory());
        c.add_code(u, &Int::ONE);
        if w != u {
            c.add_code(w, &self.sign());
        }
        c
    }

    fn sign(&self) -> Int {
        match self.symmetry {
            Symmetry::Invariant => Int::ONE,
            Symmetry::Antisymmetric => -Int::ONE,
        }
    }
}

impl ChainComplex for InvariantComplex {
    fn dim(&self, n: usize) -> usize {
        self.reps(n).len()
    }

    fn boundary_matrix(&self, n: usize) -> SparseIntMatrix {
        let cols = self.reps(n);
        if n == 0 {
            return SparseIntMatrix::zeros(0, cols.len());
        }
        let rows = self.reps(n - 1);
        let row_of: BTreeMap<u64, u32> = rows.iter().enumerate().map(|(i, &(u, _))| (u, i as u32)).collect();
        let columns = (0..cols.len())
            .into_par_iter()
            .map(|j| {
                let image = boundary(self.base.rack(), &self.basis_chain(n, j)).expect("valid degree");
                image
                    .codes()
                    .filter_map(|(code, v)| row_of.get(&code).map(|&r| (r, v.clone())))
                    .collect()
            })
            .collect();
        SparseIntMatrix::from_columns(rows.len(), columns)
    }

    fn label(&self) -> String {
        let tag = match self.symmetry {
            Symmetry::Invariant => "inv",
            Symmetry::Antisymmetric => "anti",
        };
        format!("{} {}({})", self.base.label(), tag, self.a)
    }
}

impl ChainBasis for InvariantComplex {
    fn rack(&self) -> &FiniteRack {
        self.base.rack()
    }

    fn theory(&self) -> Theory {
        self.base.theory()
    }

    fn coordinates(&self, c: &Chain) -> Result<Vec<Int>> {
        let n = c.degree();
        let reps = self.reps(n);
        let c = if self.theory() == Theory::Quandle {
            c.project(Theory::Quandle)
        } else {
            c.clone()
        };
        let v: Vec<Int> = reps.iter().map(|&(u, _)| c.coefficient_of_code(u)).collect();
        if self.chain_from(n, &v) != c {
            return Err(Error::Precondition(format!("chain is outside {}", self.label())));
        }
        Ok(v)
    }

    fn chain_from(&self, n: usize, v: &[Int]) -> Chain {
        let reps = self.reps(n);
        assert_eq!(v.len(), reps.len());
        let sign = self.sign();
        let mut c = Chain::zero(self.rack().size(), n, self.theory());
        for (&(u, w), x) in reps.iter().zip(v) {
            c.add_code(u, x);
            if w != u {
                c.add_code(w, &(x * &sign));
            }
        }
        c
    }
}

/// Mapping cone of multiplication by `m` on a complex: `Cone_n = C_n ⊕ C_{n-1}`
/// with `d(x, y) = (∂x + m·y, -∂y)`. Its integral homology is the homology of
/// the complex with `Z/m` coefficients.
pub struct MappingCone<C> {
    inner: C,
    m: Int,
}

impl<C: ChainComplex> MappingCone<C> {
    pub fn new(inner: C, m: u64) -> Self {
        assert!(m > 0, "cone of multiplication by zero");
        MappingCone { inner, m: Int::from(m) }
    }

    pub fn inner(&self) -> &C {
        &self.inner
    }
}

impl<C: ChainComplex> ChainComplex for MappingCone<C> {
    fn dim(&self, n: usize) -> usize {
        self.inner.dim(n) + if n > 0 { self.inner.dim(n - 1) } else { 0 }
    }

    fn boundary_matrix(&self, n: usize) -> SparseIntMatrix {
        if n == 0 {
            return SparseIntMatrix::zeros(0, self.dim(0));
        }
        let top = self.inner.boundary_matrix(n);
        let c_n = self.inner.dim(n);
        let c_n1 = self.inner.dim(n - 1);
        let mut triplets: Vec<(usize, usize, Int)> = top.iter().map(|(r, c, v)| (r, c, v.clone())).collect();
        for i in 0..c_n1 {
            triplets.push((i, c_n + i, self.m.clone()));
        }
        if n >= 2 {
            let lower = self.inner.boundary_matrix(n - 1);
            triplets.extend(lower.iter().map(|(r, c, v)| (c_n1 + r, c_n + c, -v)));
        }
        SparseIntMatrix::from_triplets(self.dim(n - 1), c_n + c_n1, triplets)
    }

    fn label(&self) -> String {
        format!("cone({}; {})", self.inner.label(), self.m)
    }
}

impl<C: ChainComplex + ?Sized> ChainComplex for Arc<C> {
    fn dim(&self, n: usize) -> usize {
        (**self).dim(n)
    }

    fn boundary_matrix(&self, n: usize) -> SparseIntMatrix {
        (**self).boundary_matrix(n)
    }

    fn label(&self) -> String {
        (**self).label()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(k: usize) -> Arc<FiniteRack> {
        Arc::new(FiniteRack::dihedral(k).unwrap())
    }

    fn ch(k: usize, theory: Theory, terms: &[(&[usize], i64)]) -> Chain {
        let n = terms[0].0.len();
        Chain::from_terms(k, n, theory, terms.iter().map(|(t, c)| (*t, *c)))
    }

    #[test]
    fn boundary_of_a_pair() {
        let r3 = r(3);
        let d = boundary(&r3, &ch(3, Theory::Rack, &[(&[0, 1], 1)])).unwrap();
        assert_eq!(d, ch(3, Theory::Rack, &[(&[0], 1), (&[2], -1)]));
        let deg = boundary(&r3, &ch(3, Theory::Quandle, &[(&[1, 1], 1)])).unwrap();
        assert!(deg.is_zero());
        assert!(boundary(&r3, &Chain::zero(3, 0, Theory::Rack)).is_err());
        assert!(boundary(&r3, &ch(3, Theory::Rack, &[(&[2], 5)])).unwrap().is_zero());
    }

    #[test]
    fn split_of_a_pair() {
        let r3 = r(3);
        let x = ch(3, Theory::Rack, &[(&[0, 1], 1)]);
        let (d0, d1) = boundary_split(&r3, &x).unwrap();
        assert_eq!(d0, ch(3, Theory::Rack, &[(&[1], -1), (&[0], 1)]));
        assert_eq!(d1, ch(3, Theory::Rack, &[(&[1], 1), (&[2], -1)]));
    }

    #[test]
    fn basis_sizes_and_order() {
        let q = basis(3, 2, Theory::Quandle);
        let tuples: Vec<Vec<usize>> = q.iter().map(|&c| crate::chain::decode(3, 2, c)).collect();
        assert_eq!(tuples, vec![vec![0, 1], vec![0, 2], vec![1, 0], vec![1, 2], vec![2, 0], vec![2, 1]]);
        assert_eq!(basis(3, 12, Theory::Quandle).len(), 6144);
        assert_eq!(basis(3, 2, Theory::Degenerate).len(), 3);
        for n in 0..6 {
            for t in Theory::ALL {
                assert_eq!(basis(4, n, t).len(), basis_size(4, n, t));
            }
        }
    }

    #[test]
    fn boundary_matrices_compose_to_zero() {
        let r3 = r(3);
        for t in Theory::ALL {
            for n in 2..=6 {
                let a = boundary_matrix(&r3, n - 1, t, 0).unwrap();
                let b = boundary_matrix(&r3, n, t, 0).unwrap();
                assert!(a.mul(&b).is_zero(), "{t} n={n}");
            }
        }
        let d1 = boundary_matrix(&r3, 1, Theory::Rack, 0).unwrap();
        assert_eq!((d1.rows(), d1.cols(), d1.nnz()), (1, 3, 0));
        let d2 = boundary_matrix(&r3, 2, Theory::Rack, 0).unwrap();
        assert_eq!(d2.get(0, 1), Int::from(1));
        assert_eq!(d2.get(2, 1), Int::from(-1));
        let m = boundary_matrix(&r3, 2, Theory::Rack, 3).unwrap();
        assert_eq!(m.get(2, 1), Int::from(2));
    }

    #[test]
    fn trivial_rack_theory_needs_a_quandle() {
        let rack = Arc::new(FiniteRack::classify(vec![vec![1, 1], vec![0, 0]]).unwrap());
        assert!(RackComplex::new(rack.clone(), Theory::Quandle).is_err());
        assert!(RackComplex::new(rack, Theory::Rack).is_ok());
    }

    #[test]
    fn alpha_examples() {
        for i in 0..5usize {
            let x = ch(5, Theory::Quandle, &[(&[0, i, (i + 1) % 5], 1)]);
            let expect = ch(
                5,
                Theory::Rack,
                &[(&[0, i, (i + 1) % 5], 1), (&[0, 0, (i + 1) % 5], -1), (&[0, i, i], -1), (&[0, 0, i], 1)],
            );
            assert_eq!(alpha_split(&x).unwrap(), expect);
        }
        let single = ch(3, Theory::Quandle, &[(&[2], 4)]);
        assert_eq!(alpha_split(&single).unwrap(), ch(3, Theory::Rack, &[(&[2], 4)]));
    }

    #[test]
    fn invariant_basis_small_cases() {
        let c = InvariantComplex::new(r(3), Theory::Rack, 0, Symmetry::Invariant).unwrap();
        let b1 = c.basis_chains(1);
        assert_eq!(b1, vec![ch(3, Theory::Rack, &[(&[0], 1)]), ch(3, Theory::Rack, &[(&[1], 1), (&[2], 1)])]);
        let b2 = c.basis_chains(2);
        assert_eq!(b2.len(), 5);
        assert_eq!(b2.iter().filter(|b| b.len() == 1).count(), 1);
        let anti = InvariantComplex::new(r(3), Theory::Rack, 0, Symmetry::Antisymmetric).unwrap();
        for n in 0..=6 {
            assert_eq!(c.dim(n) + anti.dim(n), 3usize.pow(n as u32));
        }
        assert!(InvariantComplex::new(Arc::new(FiniteRack::alexander(5, 2).unwrap()), Theory::Rack, 0, Symmetry::Invariant).is_err());
    }

    #[test]
    fn cone_squares_to_zero() {
        let cone = MappingCone::new(RackComplex::new(r(3), Theory::Quandle).unwrap(), 3);
        for n in 1..=5 {
            let a = cone.boundary_matrix(n);
            let b = cone.boundary_matrix(n + 1);
            assert_eq!(a.cols(), b.rows());
            assert!(a.mul(&b).is_zero());
        }
    }
}
