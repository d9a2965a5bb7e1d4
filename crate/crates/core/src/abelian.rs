//! Finitely generated abelian groups `Z^r ⊕ Z_{d_1} ⊕ …` and homomorphisms
//! between such groups written in generator coordinates.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::int::Int;
use crate::matrix::DenseMatrix;
use crate::snf::{compress_columns, dense_snf, DenseSnf};

/// Isomorphism type of a finitely generated abelian group: free rank and
/// invariant factors `d_1 | d_2 | …`, all greater than one.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupSummary {
    pub free_rank: usize,
    pub torsion: Vec<Int>,
}

impl GroupSummary {
    pub fn trivial() -> Self {
        GroupSummary::default()
    }

    pub fn free(rank: usize) -> Self {
        GroupSummary { free_rank: rank, torsion: Vec::new() }
    }

    /// `Z^r` plus one cyclic summand per order, brought to invariant-factor
    /// form. Orders `0` count as free summands, orders `±1` vanish.
    pub fn from_cyclic(free_rank: usize, orders: &[Int]) -> Self {
        let mut free_rank = free_rank;
        let mut cyclic = Vec::new();
        for d in orders {
            if d.is_zero() {
                free_rank += 1;
            } else if !d.is_unit() {
                cyclic.push(d.abs());
            }
        }
        GroupSummary {
            free_rank,
            torsion: invariant_factors(&cyclic),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn direct_sum(&self, other: &GroupSummary) -> GroupSummary {
        let orders: Vec<Int> = self.torsion.iter().chain(&other.torsion).cloned().collect();
        GroupSummary::from_cyclic(self.free_rank + other.free_rank, &orders)
    }

    /// Number of invariant factors divisible by `p`, i.e. `dim (T ⊗ Z_p)`.
    pub fn p_rank(&self, p: u64) -> usize {
        self.torsion.iter().filter(|d| d.rem_u64(p) == 0).count()
    }

    /// `G ⊗ Z_m`.
    pub fn tensor_mod(&self, m: u64) -> GroupSummary {
        let m = Int::from(m);
        let mut orders = vec![m.clone(); self.free_rank];
        orders.extend(self.torsion.iter().map(|d| d.gcd(&m)));
        GroupSummary::from_cyclic(0, &orders)
    }

    /// `Tor(G, Z_m)`.
    pub fn tor_mod(&self, m: u64) -> GroupSummary {
        let m = Int::from(m);
        let orders: Vec<Int> = self.torsion.iter().map(|d| d.gcd(&m)).collect();
        GroupSummary::from_cyclic(0, &orders)
    }

    /// Every torsion coefficient divides `n`.
    pub fn torsion_divides(&self, n: &Int) -> bool {
        self.torsion.iter().all(|d| n.is_divisible_by(d))
    }
}

/// Invariant factors of `⊕ Z_{d_i}` (entries must be at least 2).
fn invariant_factors(orders: &[Int]) -> Vec<Int> {
    if orders.is_empty() {
        return Vec::new();
    }
    if orders.windows(2).all(|w| w[1].is_divisible_by(&w[0])) {
        return orders.to_vec();
    }
    let mut m = DenseMatrix::zeros(orders.len(), orders.len());
    for (i, d) in orders.iter().enumerate() {
        m.set(i, i, d.clone());
    }
    dense_snf(&m, false).d.into_iter().filter(|d| !d.is_one()).collect()
}

impl fmt::Display for GroupSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z_{d}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

impl FromStr for GroupSummary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(GroupSummary::trivial());
        }
        let mut free = 0usize;
        let mut orders = Vec::new();
        for part in s.split('+').map(str::trim) {
            if part == "Z" {
                free += 1;
            } else if let Some(r) = part.strip_prefix("Z^") {
                free += r.parse::<usize>().map_err(|e| Error::Parse(format!("`{part}`: {e}")))?;
            } else if let Some(d) = part.strip_prefix("Z_") {
                let d = d.trim_matches(|c| c == '{' || c == '}');
                let d: Int = d.parse().map_err(|e| Error::Parse(format!("`{part}`: {e}")))?;
                if d.is_negative() || d.is_zero() {
                    return Err(Error::Parse(format!("`{part}`: order must be positive")));
                }
                orders.push(d);
            } else {
                return Err(Error::Parse(format!("unrecognised summand `{part}`")));
            }
        }
        Ok(GroupSummary::from_cyclic(free, &orders))
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Integer kernel of a dense matrix, as the columns of the returned matrix.
pub fn integer_kernel(a: &DenseMatrix) -> DenseMatrix {
    let s = dense_snf(a, true);
    let r = s.d.len();
    let n = a.cols();
    let mut out = DenseMatrix::zeros(n, n - r);
    for j in r..n {
        for i in 0..n {
            out.set(i, j - r, s.v.get(i, j).clone());
        }
    }
    out
}

/// `Z^n / span(columns of a)`.
pub fn cokernel(a: &DenseMatrix) -> GroupSummary {
    let d = dense_snf(a, false).d;
    GroupSummary::from_cyclic(a.rows() - d.len(), &d)
}

/// A basis of a lattice given by spanning columns, with the means to write
/// lattice vectors in that basis.
#[derive(Clone, Debug)]
pub struct Lattice {
    basis: DenseMatrix,
    snf: DenseSnf,
}

impl Lattice {
    /// Lattice spanned by the columns of `a`, together with, for each basis
    /// vector, its expression in those columns.
    pub fn spanned_by(a: &DenseMatrix) -> (Lattice, Vec<Vec<(u32, Int)>>) {
        let (basis, witness) = compress_columns(a);
        let snf = dense_snf(&basis, true);
        debug_assert_eq!(snf.d.len(), basis.cols());
        (Lattice { basis, snf }, witness)
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &DenseMatrix {
        &self.basis
    }

    /// Coefficients of `y` in the basis, or `None` when `y` is outside the
    /// lattice.
    pub fn solve(&self, y: &[Int]) -> Option<Vec<Int>> {
        let uy = self.snf.u.mul_vec(y);
        let r = self.rank();
        if uy[r..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let mut z = Vec::with_capacity(r);
        for (x, d) in uy[..r].iter().zip(&self.snf.d) {
            if !x.is_divisible_by(d) {
                return None;
            }
            z.push(x.div_exact(d));
        }
        let mut c = vec![Int::ZERO; r];
        for (i, ci) in c.iter_mut().enumerate() {
            for (j, zj) in z.iter().enumerate() {
                *ci += &(self.snf.v.get(i, j) * zj);
            }
        }
        Some(c)
    }
}

/// A homomorphism `⊕ G_j → ⊕ H_i` of cyclic-decomposed groups, given by its
/// matrix on generators. Order `0` marks a free generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    pub source: Vec<Int>,
    pub target: Vec<Int>,
    /// `target.len() × source.len()`.
    pub matrix: DenseMatrix,
}

impl GroupHom {
    pub fn new(source: Vec<Int>, target: Vec<Int>, mut matrix: DenseMatrix) -> Result<Self> {
        if matrix.rows() != target.len() || matrix.cols() != source.len() {
            return Err(Error::Precondition("matrix shape does not match the groups".into()));
        }
        for (i, d) in target.iter().enumerate() {
            if !d.is_zero() {
                for j in 0..matrix.cols() {
                    let (_, r) = matrix.get(i, j).div_mod_floor(d);
                    matrix.set(i, j, r);
                }
            }
        }
        let hom = GroupHom { source, target, matrix };
        if !hom.well_defined() {
            return Err(Error::Precondition("relations of the source are not respected".into()));
        }
        Ok(hom)
    }

    /// `d_j · φ(e_j) = 0` in the target for every source generator.
    fn well_defined(&self) -> bool {
        (0..self.source.len()).all(|j| {
            let d = &self.source[j];
            d.is_zero() || (0..self.target.len()).all(|i| self.is_zero_at(i, &(self.matrix.get(i, j) * d)))
        })
    }

    fn is_zero_at(&self, i: usize, x: &Int) -> bool {
        let d = &self.target[i];
        if d.is_zero() {
            x.is_zero()
        } else {
            x.is_divisible_by(d)
        }
    }

    /// `[M | diag(target orders)]`.
    fn relation_block(&self) -> DenseMatrix {
        let (t, s) = (self.target.len(), self.source.len());
        let mut n = DenseMatrix::zeros(t, s + t);
        for i in 0..t {
            for j in 0..s {
                n.set(i, j, self.matrix.get(i, j).clone());
            }
            n.set(i, s + i, self.target[i].clone());
        }
        n
    }

    pub fn kernel(&self) -> GroupSummary {
        let s = self.source.len();
        let full = integer_kernel(&self.relation_block());
        let mut proj = DenseMatrix::zeros(s, full.cols());
        for i in 0..s {
            for j in 0..full.cols() {
                proj.set(i, j, full.get(i, j).clone());
            }
        }
        let (lattice, _) = Lattice::spanned_by(&proj);
        let rels: Vec<Vec<Int>> = (0..s)
            .filter(|&j| !self.source[j].is_zero())
            .map(|j| {
                let mut e = vec![Int::ZERO; s];
                e[j] = self.source[j].clone();
                lattice.solve(&e).expect("source relations lie in the kernel")
            })
            .collect();
        let mut c = DenseMatrix::zeros(lattice.rank(), rels.len());
        for (j, col) in rels.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                c.set(i, j, x.clone());
            }
        }
        cokernel(&c)
    }

    pub fn cokernel(&self) -> GroupSummary {
        cokernel(&self.relation_block())
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().is_trivial()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    pub fn is_zero(&self) -> bool {
        (0..self.target.len()).all(|i| (0..self.source.len()).all(|j| self.is_zero_at(i, self.matrix.get(i, j))))
    }

    /// Whether the map is `c · Id` (source and target must be presented by
    /// the same orders).
    pub fn is_scalar(&self, c: &Int) -> bool {
        if self.source != self.target {
            return false;
        }
        (0..self.target.len()).all(|i| {
            (0..self.source.len()).all(|j| {
                let want = if i == j { c.clone() } else { Int::ZERO };
                self.is_zero_at(i, &(self.matrix.get(i, j) - &want))
            })
        })
    }

    /// Image of a source element, reduced modulo the target orders.
    pub fn apply(&self, x: &[Int]) -> Vec<Int> {
        self.matrix
            .mul_vec(x)
            .into_iter()
            .zip(&self.target)
            .map(|(v, d)| if d.is_zero() { v } else { v.div_mod_floor(d).1 })
            .collect()
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &GroupHom) -> Result<GroupHom> {
        if first.target != self.source {
            return Err(Error::Precondition("groups do not match for composition".into()));
        }
        GroupHom::new(first.source.clone(), self.target.clone(), self.matrix.mul(&first.matrix))
    }

    /// `self ⊕ other` on the direct sum of the sources, into a common target.
    pub fn join(&self, other: &GroupHom) -> Result<GroupHom> {
        if self.target != other.target {
            return Err(Error::Precondition("maps have different targets".into()));
        }
        let (t, a, b) = (self.target.len(), self.source.len(), other.source.len());
        let mut m = DenseMatrix::zeros(t, a + b);
        for i in 0..t {
            for j in 0..a {
                m.set(i, j, self.matrix.get(i, j).clone());
            }
            for j in 0..b {
                m.set(i, a + j, other.matrix.get(i, j).clone());
            }
        }
        let source = self.source.iter().chain(&other.source).cloned().collect();
        GroupHom::new(source, self.target.clone(), m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn display_and_parse() {
        let g = GroupSummary::from_cyclic(1, &ints(&[3]));
        assert_eq!(g.to_string(), "Z + Z_3");
        assert_eq!(GroupSummary::trivial().to_string(), "0");
        assert_eq!(GroupSummary::free(2).to_string(), "Z^2");
        for s in ["0", "Z", "Z^3 + Z_2 + Z_6", "Z_3 + Z_3"] {
            assert_eq!(s.parse::<GroupSummary>().unwrap().to_string(), s);
        }
        assert!("Q".parse::<GroupSummary>().is_err());
    }

    #[test]
    fn normal_form() {
        let g = GroupSummary::from_cyclic(0, &ints(&[2, 3, 1, 0]));
        assert_eq!(g.free_rank, 1);
        assert_eq!(g.torsion, ints(&[6]));
        let h = GroupSummary::from_cyclic(0, &ints(&[4, 2]));
        assert_eq!(h.torsion, ints(&[2, 4]));
        assert_eq!(g.direct_sum(&h).torsion, ints(&[2, 2, 12]));
    }

    #[test]
    fn tensor_and_tor() {
        let g = GroupSummary::from_cyclic(2, &ints(&[3, 9]));
        assert_eq!(g.tensor_mod(3).torsion, ints(&[3, 3, 3, 3]));
        assert_eq!(g.tor_mod(9).torsion, ints(&[3, 9]));
        assert!(g.tor_mod(2).is_trivial());
    }

    #[test]
    fn homomorphisms() {
        // Z -> Z_3, 1 -> 1: surjective, kernel 3Z ≅ Z
        let f = GroupHom::new(ints(&[0]), ints(&[3]), DenseMatrix::from_rows(&[vec![1i64]])).unwrap();
        assert!(f.is_surjective());
        assert_eq!(f.kernel(), GroupSummary::free(1));
        // Z_3 -> Z_9, 1 -> 3: injective, cokernel Z_3
        let g = GroupHom::new(ints(&[3]), ints(&[9]), DenseMatrix::from_rows(&[vec![3i64]])).unwrap();
        assert!(g.is_injective() && !g.is_surjective());
        assert_eq!(g.cokernel().to_string(), "Z_3");
        // Z_3 -> Z_9, 1 -> 1 is not well defined
        assert!(GroupHom::new(ints(&[3]), ints(&[9]), DenseMatrix::from_rows(&[vec![1i64]])).is_err());
        let id = GroupHom::new(ints(&[3, 0]), ints(&[3, 0]), DenseMatrix::from_rows(&[vec![4i64, 0], vec![0, 1]])).unwrap();
        assert!(id.is_scalar(&Int::ONE) && id.is_isomorphism());
        let two = GroupHom::new(ints(&[0]), ints(&[0]), DenseMatrix::from_rows(&[vec![2i64]])).unwrap();
        assert!(two.is_injective() && !two.is_surjective());
        assert_eq!(two.after(&two).unwrap().matrix.get(0, 0), &Int::from(4));
    }

    #[test]
    fn lattice_solve() {
        let a = DenseMatrix::from_rows(&[vec![2i64, 4, 0], vec![0, 0, 3]]);
        let (l, w) = Lattice::spanned_by(&a);
        assert_eq!(l.rank(), 2);
        assert_eq!(w.len(), 2);
        let c = l.solve(&ints(&[6, 9])).unwrap();
        let back = l.basis().mul_vec(&c);
        assert_eq!(back, ints(&[6, 9]));
        assert!(l.solve(&ints(&[1, 0])).is_none());
    }
}
