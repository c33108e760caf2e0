//! Twisted Kac-Ward determinants and critical Ising partition functions on
//! graphs isoradially embedded in flat surfaces of any genus.
//!
//! The surface is never realized geometrically. A map is given by darts, a
//! reversal and a rotation, plus one exact half-rhombus angle per edge, and
//! everything else (faces, genus, cone angles, turning angles, spin
//! structures) is derived from that data.
//!
//! Numeric kernels are generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below fix `f64`.

pub mod angle;
pub mod builders;
pub mod cohomology;
pub mod error;
pub mod identities;
pub mod io;
pub mod kacward;
pub mod laplacian;
pub mod linalg;
pub mod oracles;
pub mod ribbon;
pub mod scalar;
pub mod weights;

pub use angle::{AnglePi, Fraction};
pub use builders::{gen_genus2_bouquet, gen_torus_lattice, star_construction, AbstractGraph, LatticeKind};
pub use error::{Error, Result};
pub use io::{read_map, read_map_str, write_map, MapDocument};
pub use ribbon::{
    build_isoradial_map, canonical_form, is_isomorphic, CombinatorialMap, Dart, HypothesisMode, HypothesisReport,
    IsoradialMap, QuadGraph, Topology,
};
pub use scalar::{cast_cx, Cx, Real};

pub type KwMatrix64 = kacward::KwMatrix<f64>;
pub type LapMatrix64 = laplacian::LapMatrix<f64>;
pub type WeightSystem64 = weights::WeightSystem<f64>;
pub type ComplexMatrix64 = linalg::ComplexMatrix<f64>;
pub type Cx64 = Cx<f64>;
