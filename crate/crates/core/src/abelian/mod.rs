pub mod complex;
pub mod group;
pub mod hom;
pub mod lattice;
pub mod matrix;
pub mod numtheory;
mod reduce;
pub mod scalar;
pub mod smith;
pub mod sparse;
pub mod tower;

pub use complex::{complex_homology, complex_homology_lattice, ChainComplex, Homology};
pub use group::{AbGroup, FinAb};
pub use hom::AbHom;
pub use lattice::Subquotient;
pub use matrix::IntMatrix;
pub use scalar::Scalar;
pub use smith::{smith_decompose, Smith};
pub use sparse::SparseVec;
pub use tower::{ml_check, tower_lim, tower_lim1, AbTower, Arrow, LimResult, MlCheck, Tower};
