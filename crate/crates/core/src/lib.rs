pub mod abelian;
pub mod bar;
pub mod error;
pub mod gmod;
pub mod groups;
pub mod orbit;
pub mod profinite;

pub use error::{Error, MatrixError, Result};

pub type Integer = num_bigint::BigInt;
pub type ZMatrix = abelian::IntMatrix<Integer>;
pub type SmallMatrix = abelian::IntMatrix<i64>;
