//! Homology groups of a free chain complex, with generator cycles, class
//! coordinates, coefficients in `Z_m` and cohomology through the universal
//! coefficient theorem.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use crate::abelian::{is_prime, GroupSummary, Lattice};
use crate::chain::{Chain, Theory};
use crate::rack::FiniteRack;
use crate::complex::{ChainBasis, ChainComplex, MappingCone, RackComplex};
use crate::error::{Error, Result};
use crate::int::Int;
use crate::matrix::{DenseMatrix, SparseIntMatrix};
use crate::snf::{rank_mod_p, IntReduction, RowReduction};

/// Per-degree values computed at most once, even under concurrent requests.
struct Memo<K, T>(Mutex<BTreeMap<K, Arc<OnceLock<T>>>>);

impl<K: Ord + Copy, T: Clone> Memo<K, T> {
    fn new() -> Self {
        Memo(Mutex::new(BTreeMap::new()))
    }

    fn get(&self, key: K, make: impl FnOnce() -> T) -> T {
        let cell = self.0.lock().unwrap().entry(key).or_default().clone();
        cell.get_or_init(make).clone()
    }

    fn ready_keys(&self) -> Vec<K> {
        self.0.lock().unwrap().iter().filter(|(_, c)| c.get().is_some()).map(|(k, _)| *k).collect()
    }
}

/// `H_n = ker ∂_n / im ∂_{n+1}` in generator form.
///
/// Generators are ordered torsion first (with their orders), then free.
/// Class coordinates come from the cokernel of `∂_{n+1}`: its torsion slots
/// are the torsion of `H_n`, and its free slots carry the image of the cycles
/// as a lattice whose basis gives the free generators.
#[derive(Clone, Debug)]
pub struct HomologyGroup {
    degree: usize,
    summary: GroupSummary,
    orders: Vec<Int>,
    generators: Vec<Vec<Int>>,
    boundary: Arc<SparseIntMatrix>,
    cycles: Arc<IntReduction>,
    torsion_slots: Vec<usize>,
    free_slots: Vec<usize>,
    free_lattice: Lattice,
}

impl HomologyGroup {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn summary(&self) -> &GroupSummary {
        &self.summary
    }

    pub fn free_rank(&self) -> usize {
        self.summary.free_rank
    }

    pub fn torsion(&self) -> &[Int] {
        &self.summary.torsion
    }

    /// Order of each generator; `0` for a free generator.
    pub fn orders(&self) -> &[Int] {
        &self.orders
    }

    /// Generator cycles as coordinate vectors in the basis of `C_n`.
    pub fn generators(&self) -> &[Vec<Int>] {
        &self.generators
    }

    pub fn is_cycle(&self, z: &[Int]) -> bool {
        self.boundary.mul_vec(z).iter().all(Int::is_zero)
    }

    /// Coordinates of the class of a cycle in the generators; torsion
    /// coordinates are reduced into `[0, d)`.
    pub fn coordinates(&self, z: &[Int]) -> Result<Vec<Int>> {
        if z.len() != self.boundary.cols() {
            return Err(Error::Precondition("vector length does not match the chain group".into()));
        }
        if !self.is_cycle(z) {
            return Err(Error::NotACycle);
        }
        let c = self.cycles.coordinates(z);
        let mut out: Vec<Int> = self
            .torsion_slots
            .iter()
            .zip(&self.orders)
            .map(|(&s, d)| c[s].div_mod_floor(d).1)
            .collect();
        let y: Vec<Int> = self.free_slots.iter().map(|&s| c[s].clone()).collect();
        let free = self
            .free_lattice
            .solve(&y)
            .expect("free coordinates of a cycle lie in the cycle lattice");
        out.extend(free);
        Ok(out)
    }

    /// A cycle with the given class coordinates.
    pub fn representative(&self, coords: &[Int]) -> Vec<Int> {
        assert_eq!(coords.len(), self.generators.len());
        let mut z = vec![Int::ZERO; self.boundary.cols()];
        for (g, c) in self.generators.iter().zip(coords) {
            if c.is_zero() {
                continue;
            }
            for (zi, gi) in z.iter_mut().zip(g) {
                *zi += &(gi * c);
            }
        }
        z
    }

    /// Whether a cycle is a boundary.
    pub fn is_boundary(&self, z: &[Int]) -> Result<bool> {
        Ok(self.coordinates(z)?.iter().all(Int::is_zero))
    }
}

/// Homology of one complex, caching boundary matrices and their reductions.
pub struct HomologyEngine<C: ChainComplex + ?Sized> {
    complex: Arc<C>,
    certify: bool,
    certified: AtomicUsize,
    matrices: Memo<usize, Arc<SparseIntMatrix>>,
    reductions: Memo<usize, Arc<IntReduction>>,
    groups: Memo<usize, Arc<HomologyGroup>>,
    cones: Memo<u64, Arc<HomologyEngine<dyn ChainComplex>>>,
}

impl<C: ChainComplex + ?Sized> HomologyEngine<C> {
    /// An engine that certifies every reduction it computes.
    pub fn new(complex: Arc<C>) -> Self {
        HomologyEngine {
            complex,
            certify: true,
            certified: AtomicUsize::new(0),
            matrices: Memo::new(),
            reductions: Memo::new(),
            groups: Memo::new(),
            cones: Memo::new(),
        }
    }

    /// Skip the replay certificate of each reduction.
    pub fn without_certificates(mut self) -> Self {
        self.certify = false;
        self
    }

    pub fn complex(&self) -> &Arc<C> {
        &self.complex
    }

    /// Number of reductions that passed their certificate so far.
    pub fn certified(&self) -> usize {
        self.certified.load(Ordering::Relaxed)
    }

    /// Degrees `n` for which `∂_n` has been reduced.
    pub fn reduced_degrees(&self) -> Vec<usize> {
        let mut done = self.reductions.ready_keys();
        done.sort_unstable();
        done
    }

    /// Degrees `n` whose homology is already determined by cached
    /// reductions of `∂_n` and `∂_{n+1}`.
    pub fn computed_degrees(&self) -> Vec<usize> {
        let done = self.reductions.ready_keys();
        (0..done.last().copied().unwrap_or(0))
            .filter(|&n| (n == 0 || done.contains(&n)) && done.contains(&(n + 1)))
            .collect()
    }

    pub fn boundary_matrix(&self, n: usize) -> Arc<SparseIntMatrix> {
        self.matrices.get(n, || Arc::new(self.complex.boundary_matrix(n)))
    }

    /// Reduction of `∂_n`, certified against the matrix unless disabled.
    ///
    /// # Panics
    /// If the certificate fails, which indicates a bug in the reduction.
    pub fn reduction(&self, n: usize) -> Arc<IntReduction> {
        self.reductions.get(n, || {
            let a = self.boundary_matrix(n);
            let red = IntReduction::new(&a);
            if self.certify {
                if let Err(e) = red.certify(&a) {
                    panic!("reduction of ∂_{n} of {} failed its certificate: {e}", self.complex.label());
                }
                self.certified.fetch_add(1, Ordering::Relaxed);
            }
            Arc::new(red)
        })
    }

    /// Isomorphism type of `H_n`.
    pub fn summary(&self, n: usize) -> GroupSummary {
        let dim = self.complex.dim(n);
        let rank_out = if n == 0 { 0 } else { self.reduction(n).rank() };
        let into = self.reduction(n + 1);
        GroupSummary {
            free_rank: dim - rank_out - into.rank(),
            torsion: into.torsion(),
        }
    }

    /// `H_n` with generators and class coordinates.
    pub fn group(&self, n: usize) -> Arc<HomologyGroup> {
        self.groups.get(n, || Arc::new(self.build_group(n)))
    }

    fn build_group(&self, n: usize) -> HomologyGroup {
        let summary = self.summary(n);
        let boundary = self.boundary_matrix(n);
        let cycles = self.reduction(n + 1);
        let mut torsion_slots = Vec::new();
        let mut free_slots = Vec::new();
        for i in 0..cycles.coordinate_count() {
            match cycles.coordinate_order(i) {
                Some(d) if d.is_one() => {}
                Some(_) => torsion_slots.push(i),
                None => free_slots.push(i),
            }
        }
        let mut orders = Vec::new();
        let mut generators = Vec::new();
        let slots = cycles.coordinate_count();
        for &s in &torsion_slots {
            let mut e = vec![Int::ZERO; slots];
            e[s] = Int::ONE;
            let g = cycles.lift(&e);
            debug_assert!(boundary.mul_vec(&g).iter().all(Int::is_zero));
            orders.push(cycles.coordinate_order(s).unwrap().clone());
            generators.push(g);
        }
        let torsion_generators = generators.clone();
        let (free_lattice, free_generators) = if summary.free_rank == 0 {
            (Lattice::spanned_by(&DenseMatrix::zeros(free_slots.len(), 0)).0, Vec::new())
        } else {
            self.free_part(&boundary, &cycles, &torsion_slots, &free_slots, &torsion_generators)
        };
        assert_eq!(free_lattice.rank(), summary.free_rank, "cycle lattice has the wrong rank");
        orders.extend(std::iter::repeat(Int::ZERO).take(free_generators.len()));
        generators.extend(free_generators);
        HomologyGroup {
            degree: n,
            summary,
            orders,
            generators,
            boundary,
            cycles,
            torsion_slots,
            free_slots,
            free_lattice,
        }
    }

    /// Basis of the image of the cycles in the free cokernel slots, and
    /// cycles realising it with vanishing torsion coordinates.
    fn free_part(
        &self,
        boundary: &SparseIntMatrix,
        cycles: &IntReduction,
        torsion_slots: &[usize],
        free_slots: &[usize],
        torsion_generators: &[Vec<Int>],
    ) -> (Lattice, Vec<Vec<Int>>) {
        let kernel = RowReduction::new(&boundary.transpose()).left_kernel();
        let coords: Vec<Vec<Int>> = kernel.iter().map(|w| cycles.coordinates(w)).collect();
        let mut y = DenseMatrix::zeros(free_slots.len(), kernel.len());
        for (j, c) in coords.iter().enumerate() {
            for (i, &s) in free_slots.iter().enumerate() {
                y.set(i, j, c[s].clone());
            }
        }
        let (lattice, witness) = Lattice::spanned_by(&y);
        let dim = boundary.cols();
        let gens = witness
            .iter()
            .map(|w| {
                let mut g = vec![Int::ZERO; dim];
                let mut t = vec![Int::ZERO; torsion_slots.len()];
                for (j, x) in w {
                    let j = *j as usize;
                    for (gi, ki) in g.iter_mut().zip(&kernel[j]) {
                        *gi += &(ki * x);
                    }
                    for (ti, &s) in t.iter_mut().zip(torsion_slots) {
                        *ti += &(&coords[j][s] * x);
                    }
                }
                for (tg, ti) in torsion_generators.iter().zip(&t) {
                    for (gi, x) in g.iter_mut().zip(tg) {
                        *gi = gi.sub_mul(ti, x);
                    }
                }
                g
            })
            .collect();
        (lattice, gens)
    }

    /// `H_n(C; Z_m)`: from ranks over `F_p` when `m = p` is prime, from the
    /// integral homology of the mapping cone of `m` otherwise.
    pub fn homology_mod(&self, n: usize, m: u64) -> Result<GroupSummary>
    where
        C: 'static,
    {
        if m == 0 {
            return Ok(self.summary(n));
        }
        if m == 1 {
            return Ok(GroupSummary::trivial());
        }
        if is_prime(m) {
            let rank_out = if n == 0 { 0 } else { rank_mod_p(&self.boundary_matrix(n), m) };
            let rank_in = rank_mod_p(&self.boundary_matrix(n + 1), m);
            let dim = self.complex.dim(n) - rank_out - rank_in;
            return Ok(GroupSummary::from_cyclic(0, &vec![Int::from(m); dim]));
        }
        Ok(self.homology_mod_via_cone(n, m))
    }

    /// `H_n(C; Z_m)` as the integral homology of the cone of `m`.
    pub fn homology_mod_via_cone(&self, n: usize, m: u64) -> GroupSummary
    where
        C: 'static,
    {
        assert!(m > 0);
        let cone = self.cones.get(m, || {
            let cone: Arc<dyn ChainComplex> = Arc::new(MappingCone::new(self.complex.clone(), m));
            let mut e = HomologyEngine::new(cone);
            e.certify = self.certify;
            Arc::new(e)
        });
        cone.summary(n)
    }

    /// `H_n ⊗ Z_m ⊕ Tor(H_{n-1}, Z_m)` from integral homology.
    pub fn uct_mod(&self, n: usize, m: u64) -> GroupSummary {
        let top = self.summary(n).tensor_mod(m);
        if n == 0 {
            return top;
        }
        top.direct_sum(&self.summary(n - 1).tor_mod(m))
    }

    /// `dim_{Z_p} H^n(C; Z_p) = dim Hom(H_n, Z_p) + dim Ext(H_{n-1}, Z_p)`.
    pub fn cohomology_dim(&self, n: usize, p: u64) -> Result<usize> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let h = self.summary(n);
        let ext = if n == 0 { 0 } else { self.summary(n - 1).p_rank(p) };
        Ok(h.free_rank + h.p_rank(p) + ext)
    }
}

impl<C: ChainBasis + ?Sized> HomologyEngine<C> {
    /// Generator cycles of `H_n` as chains.
    pub fn generator_chains(&self, n: usize) -> Vec<Chain> {
        self.group(n).generators().iter().map(|g| self.complex.chain_from(n, g)).collect()
    }

    /// Coordinates of the class of a cycle in the generators of its degree.
    pub fn class_coordinates(&self, z: &Chain) -> Result<Vec<Int>> {
        if z.theory() != self.complex.theory() {
            return Err(Error::Precondition(format!(
                "{} chain given to a {} complex",
                z.theory(),
                self.complex.theory()
            )));
        }
        let v = self.complex.coordinates(z)?;
        self.group(z.degree()).coordinates(&v)
    }

    pub fn is_boundary(&self, z: &Chain) -> Result<bool> {
        Ok(self.class_coordinates(z)?.iter().all(Int::is_zero))
    }
}

/// Engines for rack complexes, shared by digest and theory so that repeated
/// requests reuse matrices and reductions.
#[derive(Default)]
pub struct EnginePool {
    engines: Mutex<BTreeMap<(String, Theory), Arc<HomologyEngine<RackComplex>>>>,
}

impl EnginePool {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn engine(&self, rack: &Arc<FiniteRack>, theory: Theory) -> Result<Arc<HomologyEngine<RackComplex>>> {
        let key = (rack.digest(), theory);
        if let Some(e) = self.engines.lock().unwrap().get(&key) {
            return Ok(e.clone());
        }
        let engine = Arc::new(HomologyEngine::new(Arc::new(RackComplex::new(rack.clone(), theory)?)));
        Ok(self.engines.lock().unwrap().entry(key).or_insert(engine).clone())
    }

    pub fn engines(&self) -> Vec<Arc<HomologyEngine<RackComplex>>> {
        self.engines.lock().unwrap().values().cloned().collect()
    }

    /// Number of reductions certified across all engines.
    pub fn certified(&self) -> usize {
        self.engines.lock().unwrap().values().map(|e| e.certified()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::Theory;
    use crate::complex::RackComplex;
    use crate::rack::FiniteRack;

    fn engine(k: usize, theory: Theory) -> HomologyEngine<RackComplex> {
        let rack = Arc::new(FiniteRack::dihedral(k).unwrap());
        HomologyEngine::new(Arc::new(RackComplex::new(rack, theory).unwrap()))
    }

    #[test]
    fn small_groups() {
        let r = engine(3, Theory::Rack);
        assert_eq!(r.summary(0).to_string(), "Z");
        assert_eq!(r.summary(1).to_string(), "Z");
        assert_eq!(r.summary(3).to_string(), "Z + Z_3");
        let q = engine(3, Theory::Quandle);
        assert_eq!(q.summary(2).to_string(), "0");
        assert_eq!(q.summary(3).to_string(), "Z_3");
        assert!(r.certified() > 0);
    }

    #[test]
    fn generators_and_coordinates() {
        let r = engine(3, Theory::Rack);
        let h1 = r.group(1);
        assert_eq!(h1.generators().len(), 1);
        let g = r.generator_chains(1);
        assert_eq!(r.class_coordinates(&g[0]).unwrap(), vec![Int::ONE]);
        let q = engine(3, Theory::Quandle);
        let z = Chain::parse("(0,0,1)+(0,1,2)+(0,2,0)", 3, Theory::Quandle, None).unwrap();
        let c = q.class_coordinates(&z).unwrap();
        assert_eq!(c.len(), 1);
        assert!(!c[0].is_zero());
        assert!(q.is_boundary(&z.scale(&Int::from(3))).unwrap());
        let not_cycle = Chain::parse("(0,1,2)", 3, Theory::Quandle, None).unwrap();
        assert_eq!(q.class_coordinates(&not_cycle), Err(Error::NotACycle));
    }

    #[test]
    fn free_and_torsion_generators_are_independent() {
        let r = engine(3, Theory::Rack);
        let h = r.group(3);
        assert_eq!(h.orders(), &[Int::from(3), Int::ZERO]);
        for (i, g) in h.generators().iter().enumerate() {
            let mut e = vec![Int::ZERO; 2];
            e[i] = Int::ONE;
            assert_eq!(h.coordinates(g).unwrap(), e);
        }
        let z = h.representative(&[Int::from(2), Int::from(-5)]);
        assert_eq!(h.coordinates(&z).unwrap(), vec![Int::from(2), Int::from(-5)]);
    }

    #[test]
    fn modular_homology_agrees_with_uct() {
        let r = engine(3, Theory::Rack);
        for n in 0..=4 {
            for m in [2u64, 3, 9, 6] {
                let direct = r.homology_mod(n, m).unwrap();
                assert_eq!(direct, r.uct_mod(n, m), "n={n} m={m}");
                assert_eq!(r.homology_mod_via_cone(n, m), direct, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn cohomology_dimensions() {
        let q = engine(3, Theory::Quandle);
        assert_eq!(q.cohomology_dim(3, 3).unwrap(), 1);
        assert_eq!(q.cohomology_dim(1, 3).unwrap(), 1);
        assert_eq!(engine(5, Theory::Quandle).cohomology_dim(3, 3).unwrap(), 0);
        assert_eq!(q.cohomology_dim(3, 4), Err(Error::NotPrime(4)));
    }
}
