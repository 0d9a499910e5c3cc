//! Maximization of the GHZ classes over products of local unitaries.
//!
//! Each subsystem carries a real vector `theta_j` of length `N_j^2`, mapped
//! to `U_j = exp(i H(theta_j))` with `H` expanded in the standard Hermitian
//! basis. The search is a random-restart (1+1) ascent: one subsystem is
//! perturbed per iteration by a Gaussian step, improvements are kept, and the
//! step scale follows the one-fifth success rule on top of a slow decay.
//! Restart 0 starts at the identity so the input state is always evaluated.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::concurrence::{concurrence, NormalizationConvention};
use crate::error::{Error, Result};
use crate::linalg::exp_i_hermitian;
use crate::operators::{ClassTag, DENSE_LIMIT};
use crate::state::PureState;

/// Default threshold for [`genuineness_verdict`].
pub const GENUINE_THRESHOLD: f64 = 1e-6;

/// Point on `U(N_1) x ... x U(N_m)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalUnitaryPoint {
    pub dims: Vec<usize>,
    pub theta: Vec<Vec<f64>>,
}

impl LocalUnitaryPoint {
    pub fn identity(dims: &[usize]) -> Self {
        Self {
            dims: dims.to_vec(),
            theta: dims.iter().map(|&d| vec![0.0; d * d]).collect(),
        }
    }

    /// Parameters drawn i.i.d. from `N(0, spread^2)`.
    pub fn random<R: Rng + ?Sized>(dims: &[usize], spread: f64, rng: &mut R) -> Self {
        Self {
            dims: dims.to_vec(),
            theta: dims
                .iter()
                .map(|&d| (0..d * d).map(|_| spread * rng.sample::<f64, _>(StandardNormal)).collect())
                .collect(),
        }
    }

    /// `H(theta_j)`: diagonal entries first, then for each `k < l` the
    /// symmetric and antisymmetric off-diagonal generators.
    pub fn generator(&self, j: usize) -> DMatrix<Complex64> {
        hermitian_from(self.dims[j], &self.theta[j])
    }

    pub fn unitary(&self, j: usize) -> DMatrix<Complex64> {
        exp_i_hermitian(&self.generator(j))
    }

    pub fn unitaries(&self) -> Vec<DMatrix<Complex64>> {
        (0..self.dims.len()).map(|j| self.unitary(j)).collect()
    }

    /// `(U_1 (x) ... (x) U_m) |s>`.
    pub fn apply(&self, s: &PureState) -> Result<PureState> {
        s.apply_local(&self.unitaries(), false)
    }
}

fn hermitian_from(dim: usize, theta: &[f64]) -> DMatrix<Complex64> {
    debug_assert_eq!(theta.len(), dim * dim);
    let mut h = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    for k in 0..dim {
        h[(k, k)] = Complex64::new(theta[k], 0.0);
    }
    let mut a = dim;
    for k in 0..dim {
        for l in k + 1..dim {
            let z = Complex64::new(theta[a], theta[a + 1]);
            h[(k, l)] = z;
            h[(l, k)] = z.conj();
            a += 2;
        }
    }
    h
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_iter: usize,
    /// Improvements below this count as a stall.
    pub tolerance: f64,
    /// Iterations without an improvement above `tolerance` before a restart
    /// counts as converged.
    pub patience: usize,
    pub initial_step: f64,
    pub min_step: f64,
    pub max_step: f64,
    /// Multiplicative decay of the step scale per iteration.
    pub step_decay: f64,
    /// Spread of the random starting parameters for restarts after the first.
    pub start_spread: f64,
    pub seed: u64,
    /// Threshold for the genuineness verdict.
    pub threshold: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 20,
            max_iter: 500,
            tolerance: 1e-8,
            patience: 80,
            initial_step: 0.5,
            min_step: 1e-7,
            max_step: std::f64::consts::PI,
            step_decay: 0.998,
            start_spread: 1.5,
            seed: 0,
            threshold: GENUINE_THRESHOLD,
        }
    }
}

impl OptimizerConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn with_threshold(mut self, threshold: f64) -> Self {
        self.threshold = threshold;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::BadConfig(msg.to_string()));
        if self.restarts == 0 {
            return bad("restarts must be at least 1");
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return bad("tolerance must be positive");
        }
        if !(self.initial_step > 0.0 && self.min_step > 0.0 && self.max_step >= self.initial_step) {
            return bad("need 0 < min_step, 0 < initial_step <= max_step");
        }
        if !(self.step_decay > 0.0 && self.step_decay <= 1.0) {
            return bad("step_decay must lie in (0, 1]");
        }
        if !(self.start_spread >= 0.0 && self.start_spread.is_finite()) {
            return bad("start_spread must be nonnegative");
        }
        if !(self.threshold >= 0.0 && self.threshold.is_finite()) {
            return bad("threshold must be nonnegative");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestartSummary {
    pub index: usize,
    pub start_value: f64,
    pub best_value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub class: ClassTag,
    pub value: f64,
    /// Class value of the input state.
    pub baseline: f64,
    pub point: LocalUnitaryPoint,
    /// Best objective of each restart, in restart order.
    pub trace: Vec<f64>,
    pub restarts: Vec<RestartSummary>,
    /// Whether the restart that produced `value` converged.
    pub converged: bool,
    pub evaluations: usize,
}

impl OptimizationResult {
    /// Running maximum of `trace`.
    pub fn running_best(&self) -> Vec<f64> {
        self.trace
            .iter()
            .scan(f64::NEG_INFINITY, |best, &v| {
                *best = best.max(v);
                Some(*best)
            })
            .collect()
    }
}

/// `true` iff `value > threshold`. The criterion is one-sided: `false` means
/// nothing above the threshold was found.
pub fn genuineness_verdict(value: f64, threshold: f64) -> bool {
    value > threshold
}

/// Maximizes a GHZ class over local unitaries.
pub fn maximize_class(
    s: &PureState,
    class: ClassTag,
    norm: &NormalizationConvention,
    config: &OptimizerConfig,
) -> Result<OptimizationResult> {
    if !matches!(class, ClassTag::GhzFull | ClassTag::GhzReduced) {
        return Err(Error::NotOptimizable(class));
    }
    config.validate()?;
    norm.validate()?;
    if s.total_dim() > DENSE_LIMIT {
        return Err(Error::TooLarge {
            dim: s.total_dim(),
            limit: DENSE_LIMIT,
        });
    }
    let baseline = concurrence(s, class, norm)?.value;

    let runs: Vec<(RestartSummary, LocalUnitaryPoint)> = (0..config.restarts)
        .into_par_iter()
        .map(|r| run_restart(s, class, norm, config, r))
        .collect::<Result<_>>()?;

    let mut best = 0;
    for (i, (summary, _)) in runs.iter().enumerate() {
        if summary.best_value > runs[best].0.best_value {
            best = i;
        }
    }
    let evaluations = runs.iter().map(|(r, _)| r.evaluations).sum();
    let trace = runs.iter().map(|(r, _)| r.best_value).collect();
    let converged = runs[best].0.converged;
    let value = runs[best].0.best_value;
    let (restarts, mut points): (Vec<_>, Vec<_>) = runs.into_iter().unzip();
    Ok(OptimizationResult {
        class,
        value,
        baseline,
        point: points.swap_remove(best),
        trace,
        restarts,
        converged,
        evaluations,
    })
}

fn run_restart(
    s: &PureState,
    class: ClassTag,
    norm: &NormalizationConvention,
    config: &OptimizerConfig,
    index: usize,
) -> Result<(RestartSummary, LocalUnitaryPoint)> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index as u64);
    let dims = s.dims();
    let m = dims.len();

    let mut point = if index == 0 {
        LocalUnitaryPoint::identity(dims)
    } else {
        LocalUnitaryPoint::random(dims, config.start_spread, &mut rng)
    };
    let mut unitaries = point.unitaries();
    let objective = |us: &[DMatrix<Complex64>]| -> Result<f64> {
        let rotated = s.apply_local(us, false)?;
        Ok(concurrence(&rotated, class, norm)?.value)
    };
    let mut value = objective(&unitaries)?;
    let start_value = value;
    let mut evaluations = 1;

    // One-fifth rule: expansion on success, contraction on failure, balanced
    // at a success rate of 1/5.
    const EXPAND: f64 = 1.5;
    let contract = EXPAND.powf(-0.25);

    let mut step = config.initial_step;
    let mut stall = 0;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < config.max_iter {
        iterations += 1;
        let j = rng.random_range(0..m);
        let old_theta = point.theta[j].clone();
        for t in &mut point.theta[j] {
            *t += step * rng.sample::<f64, _>(StandardNormal);
        }
        let old_u = std::mem::replace(&mut unitaries[j], point.unitary(j));
        let candidate = objective(&unitaries)?;
        evaluations += 1;
        if candidate > value {
            stall = if candidate - value > config.tolerance { 0 } else { stall + 1 };
            value = candidate;
            step = (step * EXPAND).min(config.max_step);
        } else {
            point.theta[j] = old_theta;
            unitaries[j] = old_u;
            stall += 1;
            step *= contract;
        }
        step *= config.step_decay;
        if step < config.min_step || stall >= config.patience {
            converged = true;
            break;
        }
    }
    Ok((
        RestartSummary {
            index,
            start_value,
            best_value: value,
            iterations,
            evaluations,
            converged,
        },
        point,
    ))
}
