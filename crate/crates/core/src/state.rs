//! Pure multipartite states stored as dense coefficient tensors.
//!
//! Amplitudes are kept in row-major order with subsystem 1 as the most
//! significant axis, so the flat layout matches a Kronecker product taken in
//! subsystem order 1..m. Public index tuples are 1-based; the level `|1>` of a
//! subsystem is index 1.

use std::collections::HashSet;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

/// Allowed deviation of `sum |a|^2` from 1 when a state is constructed.
pub const NORM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: Vec<usize>,
    strides: Vec<usize>,
    amps: Vec<Complex64>,
}

/// Named state constructors.
#[derive(Debug, Clone, PartialEq)]
pub enum StateLabel {
    /// `(|1..12> + |1..21> + ... + |21..1>) / sqrt(m)` on `m` qubits.
    W(usize),
    /// `sum_c |c,..,c> / sqrt(d)` on `parts` subsystems of dimension `dim`.
    ///
    /// `dim = 2` is the usual GHZ state; larger `dim` is an extension.
    Ghz { parts: usize, dim: usize },
    /// `(|11> + |22>) / sqrt(2)`.
    Bell,
    /// Tensor product of the given factors, each normalized first.
    Product(Vec<Vec<Complex64>>),
    Custom(PureState),
}

fn validate_dims(dims: &[usize]) -> Result<()> {
    if dims.is_empty() {
        return Err(Error::EmptyDims);
    }
    if let Some(j) = dims.iter().position(|&d| d == 0) {
        return Err(Error::ZeroDim { subsystem: j + 1 });
    }
    Ok(())
}

fn strides_for(dims: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; dims.len()];
    for j in (0..dims.len().saturating_sub(1)).rev() {
        strides[j] = strides[j + 1] * dims[j + 1];
    }
    strides
}

fn norm_sqr(amps: &[Complex64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum()
}

impl PureState {
    /// Builds a state from sparse `(index, amplitude)` entries with 1-based
    /// indices. Unlisted amplitudes are zero.
    pub fn new(
        dims: &[usize],
        entries: &[(Vec<usize>, Complex64)],
        unnormalized: bool,
    ) -> Result<Self> {
        validate_dims(dims)?;
        let strides = strides_for(dims);
        let total: usize = dims.iter().product();
        let mut amps = vec![Complex64::new(0.0, 0.0); total];
        let mut seen = HashSet::with_capacity(entries.len());
        for (index, value) in entries {
            if index.len() != dims.len() {
                return Err(Error::IndexArity {
                    index: index.clone(),
                    expected: dims.len(),
                    found: index.len(),
                });
            }
            let mut flat = 0;
            for (j, (&k, &d)) in index.iter().zip(dims).enumerate() {
                if k == 0 || k > d {
                    return Err(Error::IndexOutOfRange {
                        index: index.clone(),
                        subsystem: j + 1,
                        dim: d,
                    });
                }
                flat += (k - 1) * strides[j];
            }
            if !seen.insert(flat) {
                return Err(Error::DuplicateEntry {
                    index: index.clone(),
                });
            }
            amps[flat] = *value;
        }
        Self::checked(dims.to_vec(), strides, amps, unnormalized)
    }

    /// Builds a state from a dense row-major amplitude vector.
    pub fn from_amplitudes(
        dims: &[usize],
        amps: Vec<Complex64>,
        unnormalized: bool,
    ) -> Result<Self> {
        validate_dims(dims)?;
        let total: usize = dims.iter().product();
        if amps.len() != total {
            return Err(Error::WrongShape(format!(
                "{} amplitudes for total dimension {}",
                amps.len(),
                total
            )));
        }
        Self::checked(dims.to_vec(), strides_for(dims), amps, unnormalized)
    }

    fn checked(
        dims: Vec<usize>,
        strides: Vec<usize>,
        amps: Vec<Complex64>,
        unnormalized: bool,
    ) -> Result<Self> {
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let n2 = norm_sqr(&amps);
        if n2 == 0.0 {
            return Err(Error::ZeroState);
        }
        if !unnormalized && (n2 - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm: n2.sqrt() });
        }
        Ok(Self {
            dims,
            strides,
            amps,
        })
    }

    /// Builds a dense state and rescales it to unit norm.
    pub fn normalized_from(dims: &[usize], mut amps: Vec<Complex64>) -> Result<Self> {
        validate_dims(dims)?;
        let n = norm_sqr(&amps).sqrt();
        if n == 0.0 {
            return Err(Error::ZeroState);
        }
        for a in &mut amps {
            *a /= n;
        }
        Self::from_amplitudes(dims, amps, true)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Number of subsystems `m`.
    pub fn parts(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn strides(&self) -> &[usize] {
        &self.strides
    }

    /// Amplitude at a 1-based index tuple, or `None` when out of range.
    pub fn amplitude(&self, index: &[usize]) -> Option<Complex64> {
        if index.len() != self.dims.len() {
            return None;
        }
        let mut flat = 0;
        for ((&k, &d), &s) in index.iter().zip(&self.dims).zip(&self.strides) {
            if k == 0 || k > d {
                return None;
            }
            flat += (k - 1) * s;
        }
        Some(self.amps[flat])
    }

    /// Amplitude at a 0-based index tuple. Panics when out of range.
    #[inline]
    pub(crate) fn at0(&self, index: &[usize]) -> Complex64 {
        let flat: usize = index.iter().zip(&self.strides).map(|(k, s)| k * s).sum();
        self.amps[flat]
    }

    /// 1-based index tuple of a flat position.
    pub fn index_of(&self, mut flat: usize) -> Vec<usize> {
        let mut index = vec![0; self.dims.len()];
        for (j, &s) in self.strides.iter().enumerate() {
            index[j] = flat / s + 1;
            flat %= s;
        }
        index
    }

    pub fn norm(&self) -> f64 {
        norm_sqr(&self.amps).sqrt()
    }

    /// `C_m`: complex conjugation of every amplitude in the computational basis.
    pub fn conjugate(&self) -> Self {
        Self {
            dims: self.dims.clone(),
            strides: self.strides.clone(),
            amps: self.amps.iter().map(|a| a.conj()).collect(),
        }
    }

    /// Multiplies every amplitude by `c`. The result is not renormalized.
    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            dims: self.dims.clone(),
            strides: self.strides.clone(),
            amps: self.amps.iter().map(|a| a * c).collect(),
        }
    }

    pub fn named(label: &StateLabel) -> Result<Self> {
        let one = Complex64::new(1.0, 0.0);
        match label {
            StateLabel::W(m) => {
                if *m < 2 {
                    return Err(Error::BadLabel(format!("W({m}) needs m >= 2")));
                }
                let amp = one * (1.0 / *m as f64).sqrt();
                let entries: Vec<_> = (0..*m)
                    .map(|pos| {
                        let mut index = vec![1; *m];
                        index[pos] = 2;
                        (index, amp)
                    })
                    .collect();
                Self::new(&vec![2; *m], &entries, false)
            }
            StateLabel::Ghz { parts, dim } => {
                if *parts < 2 {
                    return Err(Error::BadLabel(format!("GHZ({parts}, {dim}) needs m >= 2")));
                }
                if *dim < 2 {
                    return Err(Error::BadLabel(format!("GHZ({parts}, {dim}) needs d >= 2")));
                }
                let amp = one * (1.0 / *dim as f64).sqrt();
                let entries: Vec<_> = (1..=*dim).map(|c| (vec![c; *parts], amp)).collect();
                Self::new(&vec![*dim; *parts], &entries, false)
            }
            StateLabel::Bell => Self::named(&StateLabel::Ghz { parts: 2, dim: 2 }),
            StateLabel::Product(factors) => Self::product(factors),
            StateLabel::Custom(s) => Ok(s.clone()),
        }
    }

    /// Tensor product of local vectors; each factor is normalized first.
    pub fn product(factors: &[Vec<Complex64>]) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::BadLabel("product of zero factors".into()));
        }
        let mut dims = Vec::with_capacity(factors.len());
        let mut amps = vec![Complex64::new(1.0, 0.0)];
        for (j, f) in factors.iter().enumerate() {
            if f.is_empty() {
                return Err(Error::ZeroDim { subsystem: j + 1 });
            }
            let n = norm_sqr(f).sqrt();
            if n == 0.0 {
                return Err(Error::ZeroState);
            }
            dims.push(f.len());
            amps = amps
                .iter()
                .flat_map(|a| f.iter().map(move |b| a * b / n))
                .collect();
        }
        Self::from_amplitudes(&dims, amps, false)
    }

    /// Random state with i.i.d. standard complex normal amplitudes, normalized.
    /// Deterministic in `seed`.
    pub fn random(dims: &[usize], seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::random_with(dims, &mut rng)
    }

    pub fn random_with<R: rand::Rng + ?Sized>(dims: &[usize], rng: &mut R) -> Result<Self> {
        validate_dims(dims)?;
        let total: usize = dims.iter().product();
        let amps = (0..total).map(|_| complex_normal(rng)).collect();
        Self::normalized_from(dims, amps)
    }

    /// Random fully separable state: a product of random local vectors.
    pub fn random_product<R: rand::Rng + ?Sized>(dims: &[usize], rng: &mut R) -> Result<Self> {
        validate_dims(dims)?;
        let factors: Vec<Vec<Complex64>> = dims
            .iter()
            .map(|&d| (0..d).map(|_| complex_normal(rng)).collect())
            .collect();
        Self::product(&factors)
    }

    /// Applies `M_1 (x) ... (x) M_m` to the state.
    ///
    /// With `renormalize` the result is rescaled to unit norm; otherwise the
    /// norm is whatever the operators produce.
    pub fn apply_local(&self, ops: &[DMatrix<Complex64>], renormalize: bool) -> Result<Self> {
        if ops.len() != self.parts() {
            return Err(Error::OperatorCount {
                expected: self.parts(),
                found: ops.len(),
            });
        }
        for (j, (op, &d)) in ops.iter().zip(&self.dims).enumerate() {
            if op.nrows() != d || op.ncols() != d {
                return Err(Error::ShapeMismatch {
                    subsystem: j + 1,
                    expected: d,
                    found: op.nrows(),
                    found_cols: op.ncols(),
                });
            }
        }
        let mut amps = self.amps.clone();
        let mut scratch = Vec::new();
        for (j, op) in ops.iter().enumerate() {
            apply_axis(&mut amps, &self.dims, &self.strides, j, op, &mut scratch);
        }
        if renormalize {
            let n = norm_sqr(&amps).sqrt();
            if n == 0.0 || !n.is_finite() {
                return Err(Error::ZeroState);
            }
            for a in &mut amps {
                *a /= n;
            }
        } else if norm_sqr(&amps) == 0.0 {
            return Err(Error::ZeroState);
        }
        Ok(Self {
            dims: self.dims.clone(),
            strides: self.strides.clone(),
            amps,
        })
    }

    /// Applies a single operator to subsystem `subsystem` (1-based).
    pub fn apply_single(&self, subsystem: usize, op: &DMatrix<Complex64>) -> Result<Self> {
        let mut ops: Vec<DMatrix<Complex64>> = self
            .dims
            .iter()
            .map(|&d| DMatrix::identity(d, d))
            .collect();
        if subsystem == 0 || subsystem > self.parts() {
            return Err(Error::WrongShape(format!(
                "subsystem {subsystem} out of 1..={}",
                self.parts()
            )));
        }
        ops[subsystem - 1] = op.clone();
        self.apply_local(&ops, false)
    }

    /// Reorders subsystems: subsystem `j` of the result is subsystem
    /// `perm[j]` of `self` (0-based permutation).
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        let m = self.parts();
        let mut check = perm.to_vec();
        check.sort_unstable();
        if perm.len() != m || check.iter().enumerate().any(|(i, &p)| i != p) {
            return Err(Error::WrongShape(format!("{perm:?} is not a permutation of 0..{m}")));
        }
        let dims: Vec<usize> = perm.iter().map(|&p| self.dims[p]).collect();
        let strides = strides_for(&dims);
        let mut amps = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        let mut index = vec![0usize; m];
        for (flat, a) in self.amps.iter().enumerate() {
            let mut rest = flat;
            for (j, &s) in self.strides.iter().enumerate() {
                index[j] = rest / s;
                rest %= s;
            }
            let target: usize = perm
                .iter()
                .zip(&strides)
                .map(|(&p, &s)| index[p] * s)
                .sum();
            amps[target] = *a;
        }
        Ok(Self {
            dims,
            strides,
            amps,
        })
    }

    /// `self (x) other`, with the subsystems of `other` appended.
    pub fn tensor(&self, other: &PureState) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let amps = self
            .amps
            .iter()
            .flat_map(|a| other.amps.iter().map(move |b| a * b))
            .collect();
        Self {
            strides: strides_for(&dims),
            dims,
            amps,
        }
    }
}

pub(crate) fn complex_normal<R: rand::Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn apply_axis(
    amps: &mut [Complex64],
    dims: &[usize],
    strides: &[usize],
    axis: usize,
    op: &DMatrix<Complex64>,
    scratch: &mut Vec<Complex64>,
) {
    let d = dims[axis];
    let inner = strides[axis];
    let outer = amps.len() / (d * inner);
    scratch.resize(d, Complex64::new(0.0, 0.0));
    for o in 0..outer {
        let base = o * d * inner;
        for i in 0..inner {
            for b in 0..d {
                scratch[b] = amps[base + b * inner + i];
            }
            for a in 0..d {
                let mut acc = Complex64::new(0.0, 0.0);
                for (b, v) in scratch.iter().enumerate() {
                    acc += op[(a, b)] * v;
                }
                amps[base + a * inner + i] = acc;
            }
        }
    }
}
