//! Strong maximum principle analysis for fully nonlinear subequations on
//! `Sym(ℝⁿ)`: membership oracles, characteristic functions, the three-case
//! classification, the integral test, radial counterexamples, duality and
//! monotonicity.
//!
//! The crate is `no_std` (with `alloc`). Transcendental functions come from
//! `libm`; randomness is a seeded ChaCha8 stream so every result is
//! reproducible from its seed.

#![no_std]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub(crate) mod math;

pub mod characteristic;
pub mod counterexample;
pub mod error;
#[cfg(feature = "serde")]
pub mod ext_real;
pub mod functions;
pub mod linalg;
pub mod monotonicity;
pub mod numerics;
pub mod radial;
pub mod random;
pub mod subequation;

pub use characteristic::{
    char_fn, char_value, classify, cone_invariants, containment_check, integral_test, smp_verdict, Case, CharFnConfig,
    CharacteristicTable, Classification, ClassifyConfig, IntegralConfig, IntegralOutcome, IntegralVerdict, Side,
    SmpConfig, SmpOutcome, SmpReport, Witness,
};
pub use counterexample::{build_counterexample, hopf_function, ConstructionConfig, ConstructionRecord};
pub use error::{Error, Result};
pub use functions::{GFunction, IncreasingFn, KnownIntegral, MonotoneTable};
pub use linalg::{Matrix, SymMatrix};
pub use monotonicity::{additivity_check, mg_dual_char, monotonicity_membership, scp_report, ScpOutcome, ScpReport};
pub use radial::{radial_residual, smp_witness_check, verify_monotone_radial, Direction, RadialFunction};
pub use subequation::{Kind, SubequationSpec};
