//! Concurrence-class values from state coefficients.
//!
//! A class value is `sqrt(N * sum_ops |<Psi| O C_m Psi>|^2)` where the sum
//! runs over the class family, `C_m` conjugates amplitudes and `N` comes from
//! a [`NormalizationConvention`]. The bipartite, three- and four-partite
//! classes use the coefficient formulas in [`closed_form`]; other arities go
//! through the pair structure of the family operators without materializing
//! them.

pub mod classify;
pub mod closed_form;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::{class_family, ClassOperator, ClassTag, Factor};
use crate::state::PureState;

pub use classify::{classify, ClassEntry, ClassificationReport, Verdict};

/// Threshold on `N * sum |<.>|^2` below which a class counts as zero.
pub const ZERO_THRESHOLD: f64 = 1e-9;

/// Normalization constants. `None` selects the per-arity default that gives
/// the canonical W and GHZ states the value 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizationConvention {
    pub epr: f64,
    pub w: Option<f64>,
    pub ghz: Option<f64>,
    pub ghz_reduced: Option<f64>,
}

impl Default for NormalizationConvention {
    fn default() -> Self {
        Self {
            epr: 1.0,
            w: None,
            ghz: None,
            ghz_reduced: None,
        }
    }
}

impl NormalizationConvention {
    /// Every constant set to 1.
    pub fn unit() -> Self {
        Self {
            epr: 1.0,
            w: Some(1.0),
            ghz: Some(1.0),
            ghz_reduced: Some(1.0),
        }
    }

    pub fn with_epr(mut self, n: f64) -> Self {
        self.epr = n;
        self
    }

    pub fn with_w(mut self, n: f64) -> Self {
        self.w = Some(n);
        self
    }

    pub fn with_ghz(mut self, n: f64) -> Self {
        self.ghz = Some(n);
        self
    }

    pub fn with_ghz_reduced(mut self, n: f64) -> Self {
        self.ghz_reduced = Some(n);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("epr", Some(self.epr)),
            ("w", self.w),
            ("ghz", self.ghz),
            ("ghz_reduced", self.ghz_reduced),
        ];
        for (name, value) in fields {
            if let Some(v) = value {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(Error::BadNormalization { name, value: v });
                }
            }
        }
        Ok(())
    }

    /// `m / (2 (m - 1))` unless overridden.
    pub fn w_for(&self, m: usize) -> f64 {
        self.w
            .unwrap_or_else(|| m as f64 / (2.0 * (m as f64 - 1.0)))
    }

    /// `2 / (m (m - 1))` unless overridden.
    pub fn ghz_for(&self, m: usize) -> f64 {
        self.ghz
            .unwrap_or_else(|| 2.0 / (m as f64 * (m as f64 - 1.0)))
    }

    pub fn ghz_reduced_for(&self, _m: usize) -> f64 {
        self.ghz_reduced.unwrap_or(1.0)
    }

    pub fn for_class(&self, class: ClassTag, m: usize) -> f64 {
        match class {
            ClassTag::Epr => self.epr,
            ClassTag::W => self.w_for(m),
            ClassTag::GhzFull => self.ghz_for(m),
            ClassTag::GhzReduced => self.ghz_reduced_for(m),
        }
    }
}

/// How a report was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    ClosedForm,
    /// Family operators applied through their pair structure.
    Structured,
    /// Family operators materialized as dense matrices.
    Dense,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorContribution {
    pub label: String,
    /// `|<Psi| O C_m Psi>|^2` for this family member.
    pub contribution: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcurrenceReport {
    pub class: ClassTag,
    pub value: f64,
    /// Sum of the per-operator contributions, before normalization.
    pub squared_sum: f64,
    pub normalization: f64,
    pub route: Route,
    pub per_operator: Vec<OperatorContribution>,
}

impl ConcurrenceReport {
    pub fn from_contributions(
        class: ClassTag,
        normalization: f64,
        route: Route,
        per_operator: Vec<OperatorContribution>,
    ) -> Self {
        let squared_sum: f64 = per_operator.iter().map(|c| c.contribution).sum();
        Self {
            class,
            value: (normalization * squared_sum).sqrt(),
            squared_sum,
            normalization,
            route,
            per_operator,
        }
    }

    /// Whether `N * sum` exceeds [`ZERO_THRESHOLD`].
    pub fn is_nonzero(&self) -> bool {
        self.normalization * self.squared_sum > ZERO_THRESHOLD
    }
}

/// Bipartite concurrence
/// `sqrt(4 N sum_{k1<l1, k2<l2} |a_{k1 k2} a_{l1 l2} - a_{k1 l2} a_{l1 k2}|^2)`.
pub fn concurrence_bipartite(
    s: &PureState,
    norm: &NormalizationConvention,
) -> Result<ConcurrenceReport> {
    norm.validate()?;
    bipartite_with(s, norm.epr)
}

fn bipartite_with(s: &PureState, normalization: f64) -> Result<ConcurrenceReport> {
    if s.parts() != 2 {
        return Err(Error::WrongArity {
            expected: 2,
            found: s.parts(),
        });
    }
    Ok(ConcurrenceReport::from_contributions(
        ClassTag::Epr,
        normalization,
        Route::ClosedForm,
        closed_form::bipartite(s, ClassTag::Epr),
    ))
}

fn too_few(class: ClassTag, s: &PureState) -> Error {
    Error::TooFewParts {
        class,
        needed: class.min_parts(),
        found: s.parts(),
    }
}

/// W-class concurrence. Two subsystems reduce to the bipartite class with
/// the W normalization.
pub fn concurrence_w(s: &PureState, norm: &NormalizationConvention) -> Result<ConcurrenceReport> {
    norm.validate()?;
    let m = s.parts();
    let n = norm.w_for(m);
    match m {
        0 | 1 => Err(too_few(ClassTag::W, s)),
        2 => bipartite_with(s, n),
        3 => Ok(ConcurrenceReport::from_contributions(
            ClassTag::W,
            n,
            Route::ClosedForm,
            closed_form::w3(s),
        )),
        4 => Ok(ConcurrenceReport::from_contributions(
            ClassTag::W,
            n,
            Route::ClosedForm,
            closed_form::w4(s),
        )),
        _ => structured_report(s, ClassTag::W, n),
    }
}

/// Full GHZ-class concurrence. Two subsystems reduce to the bipartite
/// class with the GHZ normalization.
pub fn concurrence_ghz(s: &PureState, norm: &NormalizationConvention) -> Result<ConcurrenceReport> {
    norm.validate()?;
    let m = s.parts();
    let n = norm.ghz_for(m);
    match m {
        0 | 1 => Err(too_few(ClassTag::GhzFull, s)),
        2 => bipartite_with(s, n),
        3 => Ok(ConcurrenceReport::from_contributions(
            ClassTag::GhzFull,
            n,
            Route::ClosedForm,
            closed_form::ghz3(s),
        )),
        4 => Ok(ConcurrenceReport::from_contributions(
            ClassTag::GhzFull,
            n,
            Route::ClosedForm,
            closed_form::ghz4(s),
        )),
        _ => structured_report(s, ClassTag::GhzFull, n),
    }
}

/// Reduced GHZ-class concurrence (one identity factor), `m >= 3`.
pub fn concurrence_ghz_reduced(
    s: &PureState,
    norm: &NormalizationConvention,
) -> Result<ConcurrenceReport> {
    norm.validate()?;
    let m = s.parts();
    let n = norm.ghz_reduced_for(m);
    match m {
        0..=2 => Err(too_few(ClassTag::GhzReduced, s)),
        4 => Ok(ConcurrenceReport::from_contributions(
            ClassTag::GhzReduced,
            n,
            Route::ClosedForm,
            closed_form::ghz3_of_4(s),
        )),
        _ => structured_report(s, ClassTag::GhzReduced, n),
    }
}

/// Dispatches on the class tag.
pub fn concurrence(
    s: &PureState,
    class: ClassTag,
    norm: &NormalizationConvention,
) -> Result<ConcurrenceReport> {
    match class {
        ClassTag::Epr => concurrence_bipartite(s, norm),
        ClassTag::W => concurrence_w(s, norm),
        ClassTag::GhzFull => concurrence_ghz(s, norm),
        ClassTag::GhzReduced => concurrence_ghz_reduced(s, norm),
    }
}

/// Class value through the family operators' pair structure, for any arity.
pub fn concurrence_structured(
    s: &PureState,
    class: ClassTag,
    norm: &NormalizationConvention,
) -> Result<ConcurrenceReport> {
    norm.validate()?;
    structured_report(s, class, norm.for_class(class, s.parts()))
}

fn structured_report(s: &PureState, class: ClassTag, n: f64) -> Result<ConcurrenceReport> {
    let family = class_family(s.dims(), class)?;
    let per_operator = family
        .iter()
        .map(|op| OperatorContribution {
            label: op.label(),
            contribution: structured_expectation(s, op).norm_sqr(),
        })
        .collect();
    Ok(ConcurrenceReport::from_contributions(
        class,
        n,
        Route::Structured,
        per_operator,
    ))
}

/// `sum_{I,J} conj(a_I) O_{IJ} conj(a_J)` using that each factor maps a
/// basis level to at most one level.
pub fn structured_expectation(s: &PureState, op: &ClassOperator) -> Complex64 {
    debug_assert_eq!(op.dims, s.dims());
    let amps = s.amplitudes();
    let strides = s.strides();
    let dims = s.dims();

    // Per subsystem: list of (row level offset, column level offset, entry).
    let supports: Vec<Vec<(usize, usize, Complex64)>> = op
        .factors
        .iter()
        .enumerate()
        .map(|(j, f)| match (f, f.pair_entries()) {
            (Factor::Identity, _) => (0..dims[j])
                .map(|a| (a * strides[j], a * strides[j], Complex64::new(1.0, 0.0)))
                .collect(),
            (f, Some((upper, lower))) => {
                let (k, l) = f.pair().expect("pair factor");
                let (k, l) = ((k - 1) * strides[j], (l - 1) * strides[j]);
                vec![(k, l, upper), (l, k, lower)]
            }
            _ => unreachable!(),
        })
        .collect();

    fn rec(
        j: usize,
        row: usize,
        col: usize,
        coeff: Complex64,
        supports: &[Vec<(usize, usize, Complex64)>],
        amps: &[Complex64],
    ) -> Complex64 {
        if j == supports.len() {
            return amps[row].conj() * coeff * amps[col].conj();
        }
        supports[j]
            .iter()
            .map(|&(r, c, e)| rec(j + 1, row + r, col + c, coeff * e, supports, amps))
            .sum()
    }
    rec(0, 0, 0, Complex64::new(1.0, 0.0), &supports, amps)
}
