//! Shared fixtures for the criterion benches.

use std::sync::Arc;

use qhom_core::{FiniteRack, HomologyEngine, RackComplex, Theory};

/// A fresh engine, so that nothing is memoised between iterations.
pub fn engine(k: usize, theory: Theory) -> HomologyEngine<RackComplex> {
    let rack = Arc::new(FiniteRack::dihedral(k).expect("dihedral quandle"));
    HomologyEngine::new(Arc::new(RackComplex::new(rack, theory).expect("complex")))
}
