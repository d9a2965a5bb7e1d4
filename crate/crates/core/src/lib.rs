pub mod abelian;
pub mod chain;
pub mod cocycle;
pub mod complex;
pub mod error;
pub mod homology;
pub mod int;
pub mod matrix;
pub mod ops;
pub mod rack;
pub mod snf;
pub mod verify;

pub use chain::{Chain, Theory};
pub use error::{Error, Result};
pub use int::Int;
pub use rack::{FiniteRack, RackKind};
pub use matrix::{DenseMatrix, SparseIntMatrix};
pub use complex::{ChainBasis, ChainComplex, RackComplex};
pub use abelian::{GroupHom, GroupSummary};
pub use homology::{EnginePool, HomologyEngine, HomologyGroup};
pub use ops::{ChainMapSpec, FibonacciCycle, MapName};
