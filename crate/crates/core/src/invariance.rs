//! Numerical checks of the operator-level invariance statements: SLOCC
//! sandwiches of the W and GHZ families, permutation invariance of class
//! values, squares of the GHZ operators, and closed-form versus dense
//! agreement.
//!
//! Sandwiches use the plain transpose, `A O A^T`, matching the antilinear
//! expectation `<Psi| O |Psi*>`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::concurrence::{concurrence, NormalizationConvention};
use crate::error::{Error, Result};
use crate::linalg::{max_abs_diff, random_unitary};
use crate::operators::{class_family, kron_all, ClassOperator, ClassTag, Factor, DENSE_LIMIT};
use crate::oracle::concurrence_via_operators;
use crate::state::{complex_normal, PureState};

/// Residual below which an operator identity counts as holding.
pub const INVARIANCE_THRESHOLD: f64 = 1e-8;
/// Residual below which class values count as permutation invariant.
pub const PERMUTATION_THRESHOLD: f64 = 1e-9;
pub const SQUARE_THRESHOLD: f64 = 1e-12;
pub const ORACLE_THRESHOLD: f64 = 1e-10;
/// Smallest per-sample residual that confirms a non-invariance claim.
pub const NONINVARIANCE_FLOOR: f64 = 1e-3;

/// Draws with `|det| < SINGULAR_DET` are rejected before rescaling.
const SINGULAR_DET: f64 = 1e-6;
const MAX_DRAWS: usize = 100;

/// Shapes used by [`check_oracle_equivalence`].
pub const ORACLE_SHAPES: [&[usize]; 6] = [&[2, 2], &[2, 3], &[3, 3], &[2, 2, 2], &[2, 3, 2], &[2, 2, 2, 2]];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expectation {
    /// The identity is claimed to hold.
    Invariant,
    /// The identity is claimed to fail for generic draws.
    NonInvariant,
    /// No claim; reported as an experiment.
    Open,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvarianceResult {
    pub claim: String,
    pub expectation: Expectation,
    /// Maximum residual over samples and operators.
    pub residual: f64,
    /// Smallest per-sample residual (each sample maximized over operators).
    pub min_residual: f64,
    pub samples: usize,
    pub threshold: f64,
    /// `residual < threshold`.
    pub holds: bool,
}

impl InvarianceResult {
    fn new(claim: String, expectation: Expectation, per_sample: &[f64], threshold: f64) -> Self {
        let residual = per_sample.iter().copied().fold(0.0, f64::max);
        let min_residual = per_sample.iter().copied().fold(f64::INFINITY, f64::min);
        Self {
            claim,
            expectation,
            residual,
            min_residual: if per_sample.is_empty() { 0.0 } else { min_residual },
            samples: per_sample.len(),
            threshold,
            holds: residual < threshold,
        }
    }

    /// Whether the outcome agrees with the expectation; `None` for
    /// experiments.
    pub fn confirmed(&self) -> Option<bool> {
        match self.expectation {
            Expectation::Invariant => Some(self.holds),
            Expectation::NonInvariant => Some(self.min_residual > NONINVARIANCE_FLOOR),
            Expectation::Open => None,
        }
    }
}

/// Random element of `SL(2, C)`: complex normal entries rescaled by
/// `det^{-1/2}`.
pub fn random_sl2(seed: u64) -> Result<DMatrix<Complex64>> {
    random_sl2_with(&mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn random_sl2_with<R: Rng + ?Sized>(rng: &mut R) -> Result<DMatrix<Complex64>> {
    for _ in 0..MAX_DRAWS {
        let g = random_gl2_with(rng);
        let det = g[(0, 0)] * g[(1, 1)] - g[(0, 1)] * g[(1, 0)];
        if det.norm() < SINGULAR_DET {
            continue;
        }
        return Ok(g * (Complex64::new(1.0, 0.0) / det.sqrt()));
    }
    Err(Error::SingularDraw(MAX_DRAWS))
}

/// Complex Ginibre 2x2 matrix, used as the non-unimodular control.
pub fn random_gl2_with<R: Rng + ?Sized>(rng: &mut R) -> DMatrix<Complex64> {
    DMatrix::from_fn(2, 2, |_, _| complex_normal(rng))
}

pub fn det2(a: &DMatrix<Complex64>) -> Complex64 {
    a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)]
}

/// Which local operators enter the sandwich.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SandwichMode {
    /// `A_1 (x) ... (x) A_m` on every subsystem.
    Full,
    /// `A_j` only where the operator has a pair factor, identity elsewhere.
    Support,
}

/// Local draw used for the sandwich.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LocalDraw {
    Sl2,
    /// Unconstrained complex matrices (control).
    Gl2,
    Identity,
    /// `sigma_x` on every subsystem.
    SigmaX,
}

fn draw<R: Rng + ?Sized>(kind: LocalDraw, rng: &mut R) -> Result<DMatrix<Complex64>> {
    let (z, o) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
    Ok(match kind {
        LocalDraw::Sl2 => random_sl2_with(rng)?,
        LocalDraw::Gl2 => random_gl2_with(rng),
        LocalDraw::Identity => DMatrix::identity(2, 2),
        LocalDraw::SigmaX => DMatrix::from_row_slice(2, 2, &[z, o, o, z]),
    })
}

/// `max |A O A^T - O|` with `A` the Kronecker product of `locals`,
/// restricted to the pair support of `op` in [`SandwichMode::Support`].
pub fn sandwich_residual(
    op: &ClassOperator,
    locals: &[DMatrix<Complex64>],
    mode: SandwichMode,
) -> Result<f64> {
    let o = op.materialize()?;
    let factors: Vec<DMatrix<Complex64>> = op
        .factors
        .iter()
        .zip(locals)
        .zip(&op.dims)
        .map(|((f, a), &d)| match (mode, f) {
            (SandwichMode::Support, Factor::Identity) => DMatrix::identity(d, d),
            _ => a.clone(),
        })
        .collect();
    let a = kron_all(&factors);
    Ok(max_abs_diff(&(&a * &o * a.transpose()), &o))
}

fn qubit_family(m: usize, class: ClassTag) -> Result<Vec<ClassOperator>> {
    let dim = 1usize.checked_shl(m as u32).unwrap_or(usize::MAX);
    if m >= usize::BITS as usize || dim > DENSE_LIMIT {
        return Err(Error::TooLarge {
            dim,
            limit: DENSE_LIMIT,
        });
    }
    class_family(&vec![2; m], class)
}

/// Sandwich check of a class family on `m` qubits with a chosen draw and
/// mode.
pub fn check_slocc(
    class: ClassTag,
    m: usize,
    samples: usize,
    seed: u64,
    kind: LocalDraw,
    mode: SandwichMode,
    expectation: Expectation,
) -> Result<InvarianceResult> {
    let family = qubit_family(m, class)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut per_sample = Vec::with_capacity(samples);
    for _ in 0..samples {
        let locals = (0..m).map(|_| draw(kind, &mut rng)).collect::<Result<Vec<_>>>()?;
        let mut worst: f64 = 0.0;
        for op in &family {
            worst = worst.max(sandwich_residual(op, &locals, mode)?);
        }
        per_sample.push(worst);
    }
    let mode_name = match mode {
        SandwichMode::Full => "full",
        SandwichMode::Support => "support",
    };
    let kind_name = match kind {
        LocalDraw::Sl2 => "sl2",
        LocalDraw::Gl2 => "gl2",
        LocalDraw::Identity => "identity",
        LocalDraw::SigmaX => "sigma-x",
    };
    Ok(InvarianceResult::new(
        format!("slocc/{class}/m={m}/{kind_name}/{mode_name}"),
        expectation,
        &per_sample,
        INVARIANCE_THRESHOLD,
    ))
}

/// `A O A^T = O` for every W operator with `A = A_1 (x) ... (x) A_m`,
/// `A_j` in `SL(2, C)`.
pub fn check_w_slocc_invariance(m: usize, samples: usize, seed: u64) -> Result<InvarianceResult> {
    check_slocc(ClassTag::W, m, samples, seed, LocalDraw::Sl2, SandwichMode::Full, Expectation::Invariant)
}

/// Same sandwich with `A_j` applied only on the two pair factors of each
/// operator.
pub fn check_w_slocc_invariance_on_support(
    m: usize,
    samples: usize,
    seed: u64,
) -> Result<InvarianceResult> {
    check_slocc(ClassTag::W, m, samples, seed, LocalDraw::Sl2, SandwichMode::Support, Expectation::Invariant)
}

/// Control: unconstrained local draws on the pair support.
pub fn check_w_slocc_control(m: usize, samples: usize, seed: u64) -> Result<InvarianceResult> {
    check_slocc(ClassTag::W, m, samples, seed, LocalDraw::Gl2, SandwichMode::Support, Expectation::NonInvariant)
}

/// Generic `SL(2, C)` sandwiches move the full GHZ operators.
pub fn check_ghz_noninvariance(m: usize, samples: usize, seed: u64) -> Result<InvarianceResult> {
    check_slocc(
        ClassTag::GhzFull,
        m,
        samples,
        seed,
        LocalDraw::Sl2,
        SandwichMode::Full,
        Expectation::NonInvariant,
    )
}

/// Class values of random states are unchanged under every subsystem
/// permutation.
pub fn check_permutation_invariance(
    class: ClassTag,
    dims: &[usize],
    samples: usize,
    seed: u64,
) -> Result<InvarianceResult> {
    if dims.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::UnequalDims(dims.to_vec()));
    }
    let m = dims.len();
    if !class.applies_to(m) {
        return Err(Error::TooFewParts {
            class,
            needed: class.min_parts(),
            found: m,
        });
    }
    let norm = NormalizationConvention::default();
    let perms = permutations(m);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut per_sample = Vec::with_capacity(samples);
    for _ in 0..samples {
        let s = PureState::random_with(dims, &mut rng)?;
        let base = concurrence(&s, class, &norm)?.value;
        let mut worst: f64 = 0.0;
        for p in &perms {
            let v = concurrence(&s.permute(p)?, class, &norm)?.value;
            worst = worst.max((v - base).abs());
        }
        per_sample.push(worst);
    }
    Ok(InvarianceResult::new(
        format!("permutation/{class}/dims={dims:?}"),
        Expectation::Invariant,
        &per_sample,
        PERMUTATION_THRESHOLD,
    ))
}

/// All permutations of `0..m` in lexicographic order.
pub fn permutations(m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..m).collect();
    loop {
        out.push(cur.clone());
        // Next lexicographic permutation.
        let Some(i) = (1..m).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..m).rev().find(|&j| cur[j] > cur[i - 1]).expect("successor exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

/// `O^2 = I` for every full GHZ operator on `m` qubits.
pub fn check_square_identity(m: usize) -> Result<InvarianceResult> {
    let family = qubit_family(m, ClassTag::GhzFull)?;
    let n = 1 << m;
    let id = DMatrix::identity(n, n);
    let per_op = family
        .iter()
        .map(|op| {
            let o = op.materialize()?;
            Ok(max_abs_diff(&(&o * &o), &id))
        })
        .collect::<Result<Vec<_>>>()?;
    let residual = per_op.iter().copied().fold(0.0, f64::max);
    Ok(InvarianceResult::new(
        format!("square/ghz/m={m}"),
        Expectation::Invariant,
        &[residual],
        SQUARE_THRESHOLD,
    ))
}

/// Closed-form versus dense-operator values over the shapes in
/// [`ORACLE_SHAPES`], every applicable class.
pub fn check_oracle_equivalence(samples: usize, seed: u64) -> Result<InvarianceResult> {
    let norm = NormalizationConvention::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut per_sample = Vec::with_capacity(samples * ORACLE_SHAPES.len());
    for dims in ORACLE_SHAPES {
        for _ in 0..samples {
            let s = PureState::random_with(dims, &mut rng)?;
            per_sample.push(oracle_residual(&s, &norm)?);
        }
    }
    Ok(InvarianceResult::new(
        format!("oracle/samples={samples}"),
        Expectation::Invariant,
        &per_sample,
        ORACLE_THRESHOLD,
    ))
}

/// Largest `|closed form - dense|` over the classes applicable to `s`.
pub fn oracle_residual(s: &PureState, norm: &NormalizationConvention) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for class in ClassTag::ALL {
        if !class.applies_to(s.parts()) {
            continue;
        }
        let a = concurrence(s, class, norm)?.value;
        let b = concurrence_via_operators(s, class, norm)?.value;
        worst = worst.max((a - b).abs());
    }
    Ok(worst)
}

/// Experiment: change of the W value under random local unitaries.
pub fn check_w_local_unitary(m: usize, samples: usize, seed: u64) -> Result<InvarianceResult> {
    let norm = NormalizationConvention::default();
    let dims = vec![2; m];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut per_sample = Vec::with_capacity(samples);
    for _ in 0..samples {
        let s = PureState::random_with(&dims, &mut rng)?;
        let us: Vec<_> = (0..m).map(|_| random_unitary(2, &mut rng)).collect();
        let a = concurrence(&s, ClassTag::W, &norm)?.value;
        let b = concurrence(&s.apply_local(&us, false)?, ClassTag::W, &norm)?.value;
        per_sample.push((a - b).abs());
    }
    Ok(InvarianceResult::new(
        format!("lu-w/m={m}"),
        Expectation::Open,
        &per_sample,
        INVARIANCE_THRESHOLD,
    ))
}
