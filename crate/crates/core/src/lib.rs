//! Growth invariants of compact quantum groups from fusion-ring data, and
//! desk-scale checks of Fourier-algebra identities and functional calculus.

pub mod error;
pub mod fourier;
pub mod growth;
pub mod linalg;
pub mod ring;
pub mod starreg;

pub use error::{Error, Result};
pub use ring::{
    conjugate, fuse, irrep_data, tensor, DimensionFunction, DimensionKind, FusionRing, IrrepData,
    IrrepId, IrrepModularData, RepVector, Ring,
};
