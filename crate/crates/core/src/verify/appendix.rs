//! Homology of the `*_a`-invariant subcomplex against quandle homology.

use std::sync::Arc;

use serde::Serialize;

use crate::abelian::{GroupHom, GroupSummary};
use crate::chain::Theory;
use crate::complex::{basis_size, boundary, ChainBasis, ChainComplex, InvariantComplex, RackComplex, Symmetry};
use crate::error::Result;
use crate::homology::HomologyEngine;
use crate::int::Int;
use crate::matrix::DenseMatrix;
use crate::ops::{ChainMapSpec, MapName};
use crate::rack::FiniteRack;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymmetricReport {
    pub k: usize,
    pub a: usize,
    pub n: usize,
    /// `H_n^inv(a)`.
    pub invariant: GroupSummary,
    /// `H_n^Q`.
    pub quandle: GroupSummary,
    pub free_ranks_equal: bool,
    /// The groups agree after discarding 2-primary parts.
    pub odd_parts_equal: bool,
    /// `dim H_n(−; Z_p)` agrees for each odd prime `p` dividing either torsion.
    pub odd_mod_p_equal: bool,
    /// `i_*` is onto.
    pub epimorphism: bool,
    pub kernel: GroupSummary,
    /// `∂` maps invariant chains of degree `n` into invariant chains.
    pub closed: bool,
    /// `∂ h_a = h_a ∂` on invariant chains of degree `n`.
    pub h_a_chain_map: bool,
}

impl SymmetricReport {
    pub fn compute(rack: &Arc<FiniteRack>, a: usize, n: usize, quandle: &HomologyEngine<RackComplex>) -> Result<Self> {
        let inv = Arc::new(InvariantComplex::new(rack.clone(), Theory::Quandle, a, Symmetry::Invariant)?);
        let engine = HomologyEngine::new(inv.clone());
        let hi = engine.group(n);
        let hq = quandle.group(n);
        let (invariant, quandle_group) = (hi.summary().clone(), hq.summary().clone());

        let gens = engine.generator_chains(n);
        let mut m = DenseMatrix::zeros(hq.generators().len(), gens.len());
        for (j, g) in gens.iter().enumerate() {
            for (i, c) in quandle.class_coordinates(g)?.into_iter().enumerate() {
                m.set(i, j, c);
            }
        }
        let include = GroupHom::new(hi.orders().to_vec(), hq.orders().to_vec(), m)?;
        let kernel = include.kernel();

        let mut odd_primes: Vec<u64> = Vec::new();
        for d in invariant.torsion.iter().chain(&quandle_group.torsion) {
            let mut d = d.to_u64().unwrap_or(0);
            let mut q = 3;
            while d > 1 && q * q <= d {
                while d % q == 0 {
                    odd_primes.push(q);
                    d /= q;
                }
                q += 2;
            }
            while d % 2 == 0 && d > 1 {
                d /= 2;
            }
            if d > 1 {
                odd_primes.push(d);
            }
        }
        odd_primes.sort_unstable();
        odd_primes.dedup();
        let mut odd_mod_p_equal = true;
        for &p in &odd_primes {
            odd_mod_p_equal &= engine.homology_mod(n, p)? == quandle.homology_mod(n, p)?;
        }

        let h = ChainMapSpec::named(&MapName::H(a), rack, Theory::Quandle)?;
        let mut closed = true;
        let mut h_a_chain_map = true;
        for w in inv.basis_chains(n) {
            let dw = boundary(rack, &w)?;
            closed &= n == 0 || inv.coordinates(&dw).is_ok();
            h_a_chain_map &= boundary(rack, &h.apply(&w)?)? == h.apply(&dw)?;
        }

        Ok(SymmetricReport {
            k: rack.size(),
            a,
            n,
            free_ranks_equal: invariant.free_rank == quandle_group.free_rank,
            odd_parts_equal: odd_part(&invariant) == odd_part(&quandle_group),
            odd_mod_p_equal,
            epimorphism: include.is_surjective(),
            kernel,
            closed,
            h_a_chain_map,
            invariant,
            quandle: quandle_group,
        })
    }

    /// The kernel of `i_*` is a finite 2-group.
    pub fn kernel_is_two_torsion(&self) -> bool {
        self.kernel.free_rank == 0
            && self.kernel.torsion.iter().all(|d| {
                let mut d = d.clone();
                let two = Int::from(2);
                while d.is_divisible_by(&two) {
                    d = d.div_exact(&two);
                }
                d.is_one()
            })
    }

    pub fn failures(&self) -> Vec<&'static str> {
        let steps = [
            ("free ranks", self.free_ranks_equal),
            ("odd parts", self.odd_parts_equal),
            ("odd mod-p dimensions", self.odd_mod_p_equal),
            ("epimorphism", self.epimorphism),
            ("2-torsion kernel", self.kernel_is_two_torsion()),
            ("boundary closure", self.closed),
            ("h_a chain map", self.h_a_chain_map),
        ];
        steps.iter().filter(|(_, ok)| !ok).map(|(name, _)| *name).collect()
    }

    pub fn holds(&self) -> bool {
        self.failures().is_empty()
    }
}

fn odd_part(g: &GroupSummary) -> GroupSummary {
    let two = Int::from(2);
    let orders: Vec<Int> = g
        .torsion
        .iter()
        .map(|d| {
            let mut d = d.clone();
            while d.is_divisible_by(&two) {
                d = d.div_exact(&two);
            }
            d
        })
        .collect();
    GroupSummary::from_cyclic(g.free_rank, &orders)
}

/// `(dim C^+_n, dim C^-_n, dim C_n)` for the `*_a` decomposition.
pub fn symmetric_split(rack: &Arc<FiniteRack>, theory: Theory, a: usize, n: usize) -> Result<(usize, usize, usize)> {
    let plus = InvariantComplex::new(rack.clone(), theory, a, Symmetry::Invariant)?;
    let minus = InvariantComplex::new(rack.clone(), theory, a, Symmetry::Antisymmetric)?;
    Ok((plus.dim(n), minus.dim(n), basis_size(rack.size(), n, theory)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r3_degree_three() {
        let rack = Arc::new(FiniteRack::dihedral(3).unwrap());
        let q = HomologyEngine::new(Arc::new(RackComplex::new(rack.clone(), Theory::Quandle).unwrap()));
        let r = SymmetricReport::compute(&rack, 0, 3, &q).unwrap();
        assert!(r.holds(), "{:?}", r.failures());
        assert_eq!(r.quandle.to_string(), "Z_3");
    }

    #[test]
    fn split_counts() {
        let rack = Arc::new(FiniteRack::dihedral(3).unwrap());
        for n in 1..=5 {
            let (p, m, total) = symmetric_split(&rack, Theory::Rack, 0, n).unwrap();
            assert_eq!(p + m, total);
            assert_eq!(total, 3usize.pow(n as u32));
        }
    }
}
