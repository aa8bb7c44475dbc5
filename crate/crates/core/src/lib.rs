//! Krein-condition checks and explicit Stieltjes classes built from Hilbert
//! transforms of log-densities.

// `!(x > 0)` rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod density;
pub mod error;
pub mod hilbert;
pub mod krein;
pub mod quadrature;
pub mod scalar;
pub mod stieltjes;

pub use density::{
    lift_to_real_line, moment, moment_by_quadrature, moment_closed_form, moment_sequence, Density,
    DensitySpec, Family, LogDensityExpr, MomentMethod, MomentSequence, PowerTerm, Support,
};
pub use error::{Error, Result};
pub use hilbert::{
    cross_validate, cross_validate_e, hilbert_e_numeric, hilbert_e_symbolic, hilbert_numeric,
    hilbert_symbolic, CrossValidation, HilbertExpr, NumericHilbert, Parity, Symmetry,
};
pub use krein::{
    krein_check_halfline, krein_check_halfline_with, krein_check_real, krein_check_real_with,
    KreinMethod, KreinStatus, KreinVerdict,
};
pub use quadrature::{
    integrate_improper, integrate_tail, pv_integrate, ImproperDomain, ImproperOptions, PvParams,
    QuadResult,
};
pub use scalar::Real;
pub use stieltjes::{
    build_class_halfline, build_class_halfline_with, build_class_real, build_class_real_with,
    member, verify_moments, verify_nonzero, verify_unbounded_companion, MomentReport, Perturbation,
    PerturbationKind, PhaseMethod, StieltjesClass,
};

pub type DensityF64 = Density<f64>;
pub type LogDensityExprF64 = LogDensityExpr<f64>;
pub type HilbertExprF64 = HilbertExpr<f64>;
pub type QuadResultF64 = QuadResult<f64>;
pub type KreinVerdictF64 = KreinVerdict<f64>;
pub type StieltjesClassF64 = StieltjesClass<f64>;
pub type PerturbationF64 = Perturbation<f64>;
pub type MomentReportF64 = MomentReport<f64>;
pub type DensityF32 = Density<f32>;
