//! The Mochizuki 3-cocycle of `R_p` with `Z_p` coefficients.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::abelian::is_prime;
use crate::chain::{decode, Chain, Theory};
use crate::complex::{basis, boundary, RackComplex};
use crate::error::{Error, Result};
use crate::homology::HomologyEngine;
use crate::int::Int;
use crate::ops::FibonacciCycle;
use crate::rack::FiniteRack;

/// `θ(x1, x2, x3) = (x2 - x1)(2 x3^p - x2^p - (2 x3 - x2)^p) / p` over `Z_p`.
#[derive(Clone, Debug)]
pub struct MochizukiCocycle {
    p: u64,
    rack: Arc<FiniteRack>,
}

impl MochizukiCocycle {
    pub fn new(p: u64) -> Result<Self> {
        if p == 2 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let rack = Arc::new(FiniteRack::dihedral(p as usize)?);
        Ok(MochizukiCocycle { p, rack })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn rack(&self) -> &Arc<FiniteRack> {
        &self.rack
    }

    /// The exact integer numerator, before division by `p`. Entries are
    /// taken as representatives in `[0, p)`; `2 x3` and `2 x3 - x2` are not
    /// reduced before the powers.
    pub fn numerator(&self, x1: u64, x2: u64, x3: u64) -> Int {
        let p = self.p;
        let e = p as u32;
        let (x1, x2, x3) = (Int::from(x1 % p), Int::from(x2 % p), Int::from(x3 % p));
        let two = Int::from(2);
        let w = &(&two * &x3) - &x2;
        let inner = &(&(&two * &x3.pow(e)) - &x2.pow(e)) - &w.pow(e);
        &(&x2 - &x1) * &inner
    }

    /// `θ(x1, x2, x3)` in `[0, p)`.
    ///
    /// # Panics
    /// If `p` does not divide the numerator, which Fermat's little theorem
    /// rules out.
    pub fn theta(&self, x1: u64, x2: u64, x3: u64) -> u64 {
        let num = self.numerator(x1, x2, x3);
        let p = Int::from(self.p);
        assert!(num.is_divisible_by(&p), "p does not divide the θ numerator at ({x1},{x2},{x3})");
        num.div_exact(&p).rem_u64(self.p)
    }

    /// Linear extension of `θ` to a degree-3 chain over `R_p`.
    pub fn evaluate(&self, c: &Chain) -> Result<u64> {
        if c.degree() != 3 || c.base() != self.p as usize {
            return Err(Error::Precondition(format!("θ evaluates degree-3 chains over R_{}", self.p)));
        }
        let mut total = 0u64;
        for (x, coeff) in c.iter() {
            let t = self.theta(x[0] as u64, x[1] as u64, x[2] as u64);
            total = (total + coeff.rem_u64(self.p) * t) % self.p;
        }
        Ok(total)
    }

    /// `θ(∂w) = 0` for every basis tuple `w` of `C_4^Q(R_p)`; returns the
    /// first failing tuple.
    pub fn coboundary_witness(&self) -> Option<Vec<usize>> {
        let k = self.p as usize;
        basis(k, 4, Theory::Quandle).into_par_iter().find_map_first(|code| {
            let w = decode(k, 4, code);
            let dw = boundary(&self.rack, &Chain::from_tuple(k, Theory::Quandle, &w)).expect("degree 4");
            (self.evaluate(&dw).expect("degree 3") != 0).then_some(w)
        })
    }

    /// Whether `θ` vanishes on every degenerate triple.
    pub fn vanishes_on_degenerate(&self) -> bool {
        let p = self.p;
        (0..p).all(|x| (0..p).all(|y| self.theta(x, x, y) == 0 && self.theta(x, y, y) == 0))
    }
}

/// `(p + a)^p ≡ a^p (mod p²)` for all `a` in `[0, p)`.
pub fn power_congruence(p: u64) -> bool {
    let p2 = Int::from(p * p);
    let e = p as u32;
    (0..p).all(|a| {
        let lhs = Int::from(p + a).pow(e);
        let rhs = Int::from(a).pow(e);
        (&lhs - &rhs).is_divisible_by(&p2)
    })
}

/// Evidence that `(0, u_j)` is a nonzero class in `H_3^Q(R_p)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairingReport {
    pub p: u64,
    pub j: usize,
    pub is_cycle: bool,
    /// `θ((0, u_j))` in `[0, p)`.
    pub value: u64,
    /// `-j² mod p`.
    pub expected: u64,
    /// Class coordinates of `(0, u_j)` in the computed generators.
    pub coordinates: Vec<Int>,
    pub group: String,
}

impl PairingReport {
    /// The cocycle pairs nontrivially and the engine agrees the class is
    /// nonzero.
    pub fn nontrivial(&self) -> bool {
        self.is_cycle && self.value != 0 && self.coordinates.iter().any(|c| !c.is_zero())
    }
}

/// Pair `θ` with `(0, u_j)` and cross-check against computed homology.
pub fn pairing_nontriviality(
    theta: &MochizukiCocycle,
    engine: &HomologyEngine<RackComplex>,
    j: usize,
) -> Result<PairingReport> {
    use crate::complex::ChainBasis;
    let p = theta.p;
    if engine.complex().rack().digest() != theta.rack.digest() || engine.complex().theory() != Theory::Quandle {
        return Err(Error::Precondition("engine must compute quandle homology of R_p".into()));
    }
    let z = FibonacciCycle::new(&theta.rack, j)?.cone_chain(Theory::Quandle);
    let is_cycle = boundary(&theta.rack, &z)?.is_zero();
    let value = theta.evaluate(&z)?;
    let jj = (j as u64 * j as u64) % p;
    let expected = (p - jj) % p;
    let coordinates = if is_cycle { engine.class_coordinates(&z)? } else { Vec::new() };
    Ok(PairingReport {
        p,
        j,
        is_cycle,
        value,
        expected,
        coordinates,
        group: engine.summary(3).to_string(),
    })
}
