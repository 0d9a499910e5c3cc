//! Independent reference routes: dense operator expectations, the two-qubit
//! spin-flip concurrence, and the I-concurrence from a reduced density
//! matrix.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::concurrence::{
    ConcurrenceReport, NormalizationConvention, OperatorContribution, Route,
};
use crate::error::{Error, Result};
use crate::operators::{class_family, ClassTag, DENSE_LIMIT};
use crate::state::PureState;

/// `sum_{I,J} conj(a_I) M_{IJ} conj(a_J)`, i.e. `<Psi| M C_m |Psi>`.
pub fn expectation(s: &PureState, m: &DMatrix<Complex64>) -> Result<Complex64> {
    let n = s.total_dim();
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::MatrixShape {
            rows: m.nrows(),
            cols: m.ncols(),
            expected: n,
        });
    }
    let a = s.amplitudes();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        let ai = a[i].conj();
        if ai == Complex64::new(0.0, 0.0) {
            continue;
        }
        let mut row = Complex64::new(0.0, 0.0);
        for j in 0..n {
            row += m[(i, j)] * a[j].conj();
        }
        acc += ai * row;
    }
    Ok(acc)
}

/// Class value by materializing every family member.
pub fn concurrence_via_operators(
    s: &PureState,
    class: ClassTag,
    norm: &NormalizationConvention,
) -> Result<ConcurrenceReport> {
    concurrence_via_operators_with_limit(s, class, norm, DENSE_LIMIT)
}

pub fn concurrence_via_operators_with_limit(
    s: &PureState,
    class: ClassTag,
    norm: &NormalizationConvention,
    limit: usize,
) -> Result<ConcurrenceReport> {
    norm.validate()?;
    if s.total_dim() > limit {
        return Err(Error::TooLarge {
            dim: s.total_dim(),
            limit,
        });
    }
    let m = s.parts();
    let normalization = norm.for_class(class, m);
    let tag = if m == 2 { ClassTag::Epr } else { class };
    let family = class_family(s.dims(), tag)?;
    let per_operator = family
        .iter()
        .map(|op| {
            let dense = op.materialize_with_limit(limit)?;
            Ok(OperatorContribution {
                label: op.label(),
                contribution: expectation(s, &dense)?.norm_sqr(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConcurrenceReport::from_contributions(
        tag,
        normalization,
        Route::Dense,
        per_operator,
    ))
}

fn sigma_y() -> DMatrix<Complex64> {
    DMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, 0.0),
        ],
    )
}

/// Two-qubit concurrence `|<Psi| sigma_y (x) sigma_y |Psi*>|`.
pub fn wootters(s: &PureState) -> Result<f64> {
    if s.dims() != [2, 2] {
        return Err(Error::WrongShape(format!(
            "spin-flip concurrence needs dims [2, 2], got {:?}",
            s.dims()
        )));
    }
    let flip = sigma_y().kronecker(&sigma_y());
    let a = s.amplitudes();
    let tilde: Vec<Complex64> = (0..4)
        .map(|i| (0..4).map(|j| flip[(i, j)] * a[j].conj()).sum())
        .collect();
    let overlap: Complex64 = a.iter().zip(&tilde).map(|(x, y)| x.conj() * y).sum();
    Ok(overlap.norm())
}

/// Reduced density matrix over a subset of subsystems.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedDensity {
    /// Kept subsystems, 1-based and increasing.
    pub subsystems: Vec<usize>,
    pub matrix: DMatrix<Complex64>,
}

impl ReducedDensity {
    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// `Tr rho^2`.
    pub fn purity(&self) -> f64 {
        // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn hermiticity_residual(&self) -> f64 {
        crate::linalg::max_abs_diff(&self.matrix, &self.matrix.adjoint())
    }
}

/// Traces out every subsystem not in `keep` (1-based) by direct index
/// contraction.
pub fn reduced_density(s: &PureState, keep: &[usize]) -> Result<ReducedDensity> {
    let m = s.parts();
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.iter().any(|&j| j == 0 || j > m) {
        return Err(Error::WrongShape(format!("subsystems {keep:?} out of 1..={m}")));
    }
    let dims = s.dims();
    let kept_dim: usize = keep.iter().map(|&j| dims[j - 1]).product();
    let traced: Vec<usize> = (1..=m).filter(|j| !keep.contains(j)).collect();
    let traced_dim: usize = traced.iter().map(|&j| dims[j - 1]).product();

    // Reshape amplitudes into a kept x traced matrix.
    let mut psi = DMatrix::from_element(kept_dim, traced_dim, Complex64::new(0.0, 0.0));
    for (flat, a) in s.amplitudes().iter().enumerate() {
        let idx = s.index_of(flat);
        let row = keep.iter().fold(0, |acc, &j| acc * dims[j - 1] + idx[j - 1] - 1);
        let col = traced
            .iter()
            .fold(0, |acc, &j| acc * dims[j - 1] + idx[j - 1] - 1);
        psi[(row, col)] = *a;
    }
    let matrix = &psi * psi.adjoint();
    Ok(ReducedDensity {
        subsystems: keep,
        matrix,
    })
}

/// `sqrt(2 (1 - Tr rho_A^2))` with `rho_A` the marginal of subsystem 1.
pub fn i_concurrence(s: &PureState) -> Result<f64> {
    i_concurrence_keeping(s, 1)
}

/// I-concurrence computed from the marginal of subsystem `keep` (1 or 2).
pub fn i_concurrence_keeping(s: &PureState, keep: usize) -> Result<f64> {
    if s.parts() != 2 {
        return Err(Error::WrongShape(format!(
            "I-concurrence needs a bipartite state, got {} subsystems",
            s.parts()
        )));
    }
    let rho = reduced_density(s, &[keep])?;
    Ok((2.0 * (1.0 - rho.purity())).max(0.0).sqrt())
}
