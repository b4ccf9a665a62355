//! Coefficient algebras, the Fourier transform onto `ℓ¹(𝔾̂)` and the
//! convolution product there, for finite models and for ring-level data.

mod element;
mod intertwiner;
mod model;
mod ops;
mod suite;

pub use element::{EllOneElement, QElement};
pub use intertwiner::{
    convolve, convolve_in_bases, intertwiner_basis, rotated_bases, IntertwinerBasis,
};
pub use model::{FiniteQG, MatrixIrrep, ModelKind};
pub use ops::{
    bullet, ell_one_norm, ell_one_star, evaluate, fourier_transform, from_function, haar,
    haar_group_average, inverse_fourier, l1_norm, multiply, orthogonality_residual,
    plancherel_residual, plancherel_weight, random_element, regular_representation,
    semisimplicity_margin, star, CoefficientSpace, RingCoefficients,
};
pub use suite::{verify, SuiteReport};
