//! Class values, optimized GHZ values and a coarse verdict for one state.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::operators::ClassTag;
use crate::optimizer::{genuineness_verdict, maximize_class, OptimizerConfig};
use crate::state::PureState;

use super::{concurrence, ConcurrenceReport, NormalizationConvention};

/// Label derived from the raw class values, checked in the order below.
///
/// The first nonzero class wins: full GHZ, then reduced GHZ (four or more
/// subsystems only, since for three it coincides with W), then W. The
/// labels do not claim an entanglement ordering for partially separable
/// states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// Two subsystems with nonzero concurrence.
    Entangled,
    GenuineGhz,
    GhzReduced,
    WClass,
    FullySeparable,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Entangled => "entangled",
            Verdict::GenuineGhz => "genuine-ghz",
            Verdict::GhzReduced => "ghz-reduced",
            Verdict::WClass => "w-class",
            Verdict::FullySeparable => "fully-separable",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizedValue {
    pub value: f64,
    pub converged: bool,
    pub evaluations: usize,
    /// `value > threshold`.
    pub genuine: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassEntry {
    pub class: ClassTag,
    pub raw: ConcurrenceReport,
    /// Raw value above the zero threshold.
    pub detected: bool,
    /// Maximum over local unitaries, GHZ classes only.
    pub optimized: Option<OptimizedValue>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub dims: Vec<usize>,
    pub entries: Vec<ClassEntry>,
    pub verdict: Verdict,
    /// Genuineness criterion on the optimized full GHZ class (`None` for two
    /// subsystems).
    pub genuine_ghz: Option<bool>,
}

impl ClassificationReport {
    pub fn entry(&self, class: ClassTag) -> Option<&ClassEntry> {
        self.entries.iter().find(|e| e.class == class)
    }
}

pub fn classify(
    s: &PureState,
    norm: &NormalizationConvention,
    config: &OptimizerConfig,
) -> Result<ClassificationReport> {
    norm.validate()?;
    config.validate()?;
    let m = s.parts();
    let mut entries = Vec::new();
    for class in ClassTag::ALL {
        if !class.applies_to(m) || (m == 2 && class != ClassTag::Epr) {
            continue;
        }
        let raw = concurrence(s, class, norm)?;
        let optimized = match class {
            ClassTag::GhzFull | ClassTag::GhzReduced => {
                let r = maximize_class(s, class, norm, config)?;
                Some(OptimizedValue {
                    value: r.value,
                    converged: r.converged,
                    evaluations: r.evaluations,
                    genuine: genuineness_verdict(r.value, config.threshold),
                })
            }
            _ => None,
        };
        entries.push(ClassEntry {
            class,
            detected: raw.is_nonzero(),
            raw,
            optimized,
        });
    }

    let detected = |c: ClassTag| entries.iter().any(|e| e.class == c && e.detected);
    let verdict = if m == 1 {
        Verdict::FullySeparable
    } else if m == 2 {
        if detected(ClassTag::Epr) {
            Verdict::Entangled
        } else {
            Verdict::FullySeparable
        }
    } else if detected(ClassTag::GhzFull) {
        Verdict::GenuineGhz
    } else if m >= 4 && detected(ClassTag::GhzReduced) {
        Verdict::GhzReduced
    } else if detected(ClassTag::W) {
        Verdict::WClass
    } else {
        Verdict::FullySeparable
    };
    let genuine_ghz = entries
        .iter()
        .find(|e| e.class == ClassTag::GhzFull)
        .and_then(|e| e.optimized.as_ref())
        .map(|o| o.genuine);
    Ok(ClassificationReport {
        dims: s.dims().to_vec(),
        entries,
        verdict,
        genuine_ghz,
    })
}
