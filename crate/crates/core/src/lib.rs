//! Concurrence classes for pure multipartite states.
//!
//! States are dense amplitude vectors over `N_1 x ... x N_m` with subsystem 1
//! most significant; every public index is 1-based. Class values come from
//! antilinear expectations `<Psi| O |Psi*>` of pair-phase operator families
//! (EPR, W, full GHZ, reduced GHZ), evaluated either by coefficient formulas
//! or through the operators themselves.
//!
//! ```
//! use multiconc::{concurrence_w, NormalizationConvention, PureState, StateLabel};
//!
//! let w3 = PureState::named(&StateLabel::W(3)).unwrap();
//! let r = concurrence_w(&w3, &NormalizationConvention::default()).unwrap();
//! assert!((r.value - 1.0).abs() < 1e-12);
//! ```

pub mod concurrence;
pub mod error;
pub mod invariance;
pub mod linalg;
pub mod operators;
pub mod optimizer;
pub mod oracle;
pub mod state;

pub use concurrence::{
    classify, concurrence, concurrence_bipartite, concurrence_ghz, concurrence_ghz_reduced,
    concurrence_structured, concurrence_w, ClassEntry, ClassificationReport, ConcurrenceReport,
    NormalizationConvention, OperatorContribution, Route, Verdict, ZERO_THRESHOLD,
};
pub use error::{Error, Result};
pub use invariance::InvarianceResult;
pub use operators::{class_family, ClassOperator, ClassTag, Factor, FullPovm, PairComplement};
pub use optimizer::{
    genuineness_verdict, maximize_class, LocalUnitaryPoint, OptimizationResult, OptimizerConfig,
};
pub use oracle::{concurrence_via_operators, expectation, i_concurrence, reduced_density, wootters};
pub use state::{PureState, StateLabel};

pub use num_complex::Complex64;
