//! The orbit bicomplex of a tower of equivariant chain complexes and its spectral
//! sequence.

pub mod bicomplex;
pub mod homology;
pub mod input;
pub mod pages;

pub use bicomplex::{total_homology, total_homology_through, Bicomplex, BicomplexMap, TotalHomology};
pub use homology::{em_orbit_homology, orbit_homology, E2Entry, EmOrbitHomology, OrbitHomology, OrbitOptions, StabilityReport};
pub use input::{orbit_bicomplex, orbit_transition, EquivariantComplex, OrbitInput};
pub use pages::{ss_pages, ss_pages_with, EngineE2, Page, Route, SpectralPages};
