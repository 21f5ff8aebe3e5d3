//! Exact-arithmetic invariants of lattice pairs over the valuation ring
//! R = K[[t]] ∩ K(t) inside K((t))^n: Cartan types, the lattice/filtration
//! correspondences, goodness of block-triangular torsors, and the
//! combinatorial Newton/Hodge polygon layer, together with a seeded
//! verification harness that runs the structural theorems as property
//! suites.

pub mod bilattice;
pub mod error;
pub mod field;
pub mod filtration;
pub mod harness;
pub mod json;
pub mod kmat;
pub mod lattice;
pub mod matrix;
pub mod poly;
pub mod polygon;
pub mod scalar;

pub use bilattice::{
    borel_unipotent_report, check_extension_dominance, is_good, is_strict_bl_map,
    BilatticedSpace, ExtensionReport, GoodnessReport, GroupShape, UnipotentReport,
};
pub use error::{Error, Result};
pub use field::{Field, Fp, Prime, Rat};
pub use filtration::{bb_filtration, dominance_leq, is_strict_filtered_map, rees_lattice, Flag};
pub use lattice::{image_mod_t, CocharType, CombineMode, LatticeBasis};
pub use scalar::{ArithOp, LaurentScalar, Valuation};
