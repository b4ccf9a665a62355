//! Exponentials in Fourier algebras, growth of `‖e^{iλf}‖₁`, the smoothed
//! functional calculus `φ{f}` and the norm-domination check.

mod algebra;
mod bump;
mod calculus;
mod exp;

pub use algebra::{self_adjoint_defect, BanachAlgebra, FiniteAlgebra, GroupDualAlgebra};
pub use bump::{BumpFunction, Profile, NODES_PER_PANEL};
pub use calculus::{
    calculus_representation_check, functional_calculus, norm_domination_check, random_self_adjoint,
    CalculusCheck, CalculusResult, DominationReport, StarRep, LAMBDA_CAP,
};
pub use exp::{
    banach_exp, banach_exp_with, element_growth_exponent, element_growth_exponent_with, log_grid,
    ElementGrowth, ExpLimits, ExpTruncation, DEFAULT_SUPPORT_CAP, DEFAULT_TERM_CAP,
};
