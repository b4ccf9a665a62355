//! Balls in the fusion graph, growth sequences `b(u, n)`, their
//! classification and exponent fits, and trivial-representation
//! multiplicities.

mod ball;
mod classify;
mod fit;
mod multiplicity;
mod sequence;

pub use ball::{ball, ball_with_cap, Ball, DEFAULT_CAP};
pub use classify::{
    classify, classify_with, gk_fit, strict_growth_constants, strict_growth_constants_with,
    Classification, ClassifyParams, FitDiagnostics, GrowthReport, StrictGrowth,
    StrictGrowthFailure, StrictParams,
};
pub use fit::{linear_fit, LinearFit};
pub use multiplicity::{coamenability_witness, trivial_multiplicity, CoamenabilityWitness};
pub use sequence::{growth_sequence, growth_sequence_with_cap, GrowthSequence, GrowthValue};
