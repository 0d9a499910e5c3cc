//! Phase-POVM building blocks and the class-operator families.
//!
//! A single-subsystem pair complement has `e^{i phi}` at `(k, l)` and
//! `e^{-i phi}` at `(l, k)`. Class operators are tensor products of identity,
//! `phi = pi/2` pair factors (the `sigma_y` structure, equal to `-sigma_y` on a
//! qubit) and `phi = pi` pair factors (the `sigma_x` structure, `-sigma_x` on a
//! qubit).

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest total dimension `prod N_j` that is materialized densely.
pub const DENSE_LIMIT: usize = 4096;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Concurrence class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassTag {
    /// Bipartite class, both factors at `pi/2`.
    Epr,
    /// Two `pi/2` factors, identity elsewhere.
    W,
    /// Two `pi/2` factors, `pi` factors elsewhere.
    #[serde(rename = "ghz")]
    GhzFull,
    /// One identity factor, two `pi/2` factors, `pi` factors elsewhere.
    GhzReduced,
}

impl ClassTag {
    pub const ALL: [ClassTag; 4] = [
        ClassTag::Epr,
        ClassTag::W,
        ClassTag::GhzFull,
        ClassTag::GhzReduced,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClassTag::Epr => "epr",
            ClassTag::W => "w",
            ClassTag::GhzFull => "ghz",
            ClassTag::GhzReduced => "ghz-reduced",
        }
    }

    /// Minimum number of subsystems for which the family is defined.
    pub fn min_parts(self) -> usize {
        match self {
            ClassTag::GhzReduced => 3,
            _ => 2,
        }
    }

    /// Whether the class is defined for an `m`-partite state.
    pub fn applies_to(self, m: usize) -> bool {
        match self {
            ClassTag::Epr => m == 2,
            other => m >= other.min_parts(),
        }
    }
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ClassTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "epr" => Ok(ClassTag::Epr),
            "w" => Ok(ClassTag::W),
            "ghz" => Ok(ClassTag::GhzFull),
            "ghz-reduced" => Ok(ClassTag::GhzReduced),
            other => Err(Error::BadLabel(format!("unknown class {other:?}"))),
        }
    }
}

/// `e^{i phi}`, exact at multiples of `pi/2`.
fn unit_phase(phi: f64) -> Complex64 {
    let r = phi.rem_euclid(TAU);
    let quarter = r / FRAC_PI_2;
    let q = quarter.round();
    if (quarter - q).abs() < 1e-14 {
        match (q as i64).rem_euclid(4) {
            0 => ONE,
            1 => I,
            2 => -ONE,
            _ => -I,
        }
    } else {
        Complex64::from_polar(1.0, phi)
    }
}

fn check_pair(dim: usize, k: usize, l: usize) -> Result<()> {
    if k == 0 || k >= l || l > dim {
        return Err(Error::BadPair { dim, k, l });
    }
    Ok(())
}

/// Off-diagonal phase matrix on one subsystem acting on levels `k < l`
/// (1-based).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairComplement {
    dim: usize,
    k: usize,
    l: usize,
    phase: f64,
}

impl PairComplement {
    pub fn new(dim: usize, k: usize, l: usize, phase: f64) -> Result<Self> {
        check_pair(dim, k, l)?;
        Ok(Self { dim, k, l, phase })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pair(&self) -> (usize, usize) {
        (self.k, self.l)
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn matrix(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::from_element(self.dim, self.dim, ZERO);
        let e = unit_phase(self.phase);
        m[(self.k - 1, self.l - 1)] = e;
        m[(self.l - 1, self.k - 1)] = e.conj();
        m
    }
}

/// Phase POVM element on one subsystem: ones on the diagonal, `e^{i phi_kl}`
/// above and `e^{-i phi_kl}` below.
#[derive(Debug, Clone, PartialEq)]
pub struct FullPovm {
    dim: usize,
    phases: BTreeMap<(usize, usize), f64>,
}

impl FullPovm {
    /// `phases` maps every 1-based pair `(k, l)` with `k < l` to its phase.
    pub fn new(dim: usize, phases: &BTreeMap<(usize, usize), f64>) -> Result<Self> {
        for &(k, l) in phases.keys() {
            check_pair(dim, k, l)?;
        }
        for k in 1..=dim {
            for l in k + 1..=dim {
                if !phases.contains_key(&(k, l)) {
                    return Err(Error::MissingPhase { k, l });
                }
            }
        }
        Ok(Self {
            dim,
            phases: phases.clone(),
        })
    }

    /// All pairs set to the same phase.
    pub fn uniform(dim: usize, phase: f64) -> Self {
        let phases = level_pairs(dim).into_iter().map(|p| (p, phase)).collect();
        Self { dim, phases }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::identity(self.dim, self.dim);
        for (&(k, l), &phi) in &self.phases {
            let e = unit_phase(phi);
            m[(k - 1, l - 1)] = e;
            m[(l - 1, k - 1)] = e.conj();
        }
        m
    }

    /// `I - Delta`: zero diagonal, `-e^{+-i phi}` off the diagonal.
    pub fn complement(&self) -> DMatrix<Complex64> {
        DMatrix::identity(self.dim, self.dim) - self.matrix()
    }
}

/// One tensor factor of a class operator. Pairs are 1-based with `k < l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Factor {
    Identity,
    HalfPi { k: usize, l: usize },
    Pi { k: usize, l: usize },
}

impl Factor {
    pub fn pair(&self) -> Option<(usize, usize)> {
        match *self {
            Factor::Identity => None,
            Factor::HalfPi { k, l } | Factor::Pi { k, l } => Some((k, l)),
        }
    }

    /// Entries `(M[k,l], M[l,k])` of a pair factor.
    pub(crate) fn pair_entries(&self) -> Option<(Complex64, Complex64)> {
        match self {
            Factor::Identity => None,
            Factor::HalfPi { .. } => Some((I, -I)),
            Factor::Pi { .. } => Some((-ONE, -ONE)),
        }
    }

    pub fn matrix(&self, dim: usize) -> DMatrix<Complex64> {
        match (self.pair(), self.pair_entries()) {
            (Some((k, l)), Some((upper, lower))) => {
                let mut m = DMatrix::from_element(dim, dim, ZERO);
                m[(k - 1, l - 1)] = upper;
                m[(l - 1, k - 1)] = lower;
                m
            }
            _ => DMatrix::identity(dim, dim),
        }
    }
}

/// A member of a class-operator family: a tensor product over all subsystems.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassOperator {
    pub class: ClassTag,
    pub dims: Vec<usize>,
    pub factors: Vec<Factor>,
    /// 1-based subsystems carrying the `pi/2` factors.
    pub positions: (usize, usize),
    /// 1-based subsystem carrying the identity (reduced GHZ class only).
    pub excluded: Option<usize>,
}

impl ClassOperator {
    /// The multi-index: `(subsystem, k, l)` for every non-identity factor.
    pub fn multi_index(&self) -> Vec<(usize, usize, usize)> {
        self.factors
            .iter()
            .enumerate()
            .filter_map(|(j, f)| f.pair().map(|(k, l)| (j + 1, k, l)))
            .collect()
    }

    /// Human label such as `w[1,2] 1:(1,2) 2:(1,3)`.
    pub fn label(&self) -> String {
        format_label(self.class, self.positions, self.excluded, self.multi_index())
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn materialize(&self) -> Result<DMatrix<Complex64>> {
        self.materialize_with_limit(DENSE_LIMIT)
    }

    /// Kronecker product of the factor matrices in subsystem order.
    pub fn materialize_with_limit(&self, limit: usize) -> Result<DMatrix<Complex64>> {
        let total = self.total_dim();
        if total > limit {
            return Err(Error::TooLarge { dim: total, limit });
        }
        let mats: Vec<_> = self
            .factors
            .iter()
            .zip(&self.dims)
            .map(|(f, &d)| f.matrix(d))
            .collect();
        Ok(kron_all(&mats))
    }
}

pub(crate) fn format_label<I>(
    class: ClassTag,
    positions: (usize, usize),
    excluded: Option<usize>,
    pairs: I,
) -> String
where
    I: IntoIterator<Item = (usize, usize, usize)>,
{
    let mut s = format!("{}[{},{}", class, positions.0, positions.1);
    if let Some(e) = excluded {
        s.push_str(&format!(";-{e}"));
    }
    s.push(']');
    for (j, k, l) in pairs {
        s.push_str(&format!(" {j}:({k},{l})"));
    }
    s
}

/// Kronecker product `M_1 (x) ... (x) M_m`.
pub fn kron_all(mats: &[DMatrix<Complex64>]) -> DMatrix<Complex64> {
    mats.iter()
        .fold(DMatrix::from_element(1, 1, ONE), |acc, m| acc.kronecker(m))
}

/// All 1-based level pairs `(k, l)` with `k < l <= dim`, lexicographic.
pub fn level_pairs(dim: usize) -> Vec<(usize, usize)> {
    (1..=dim)
        .flat_map(|k| (k + 1..=dim).map(move |l| (k, l)))
        .collect()
}

/// Role of each subsystem in a positioned operator before level pairs are
/// chosen.
#[derive(Clone, Copy, PartialEq)]
enum Role {
    Identity,
    HalfPi,
    Pi,
}

fn expand(
    class: ClassTag,
    dims: &[usize],
    roles: &[Role],
    positions: (usize, usize),
    excluded: Option<usize>,
    out: &mut Vec<ClassOperator>,
) {
    let mut factors = vec![Factor::Identity; dims.len()];
    fn rec(
        j: usize,
        dims: &[usize],
        roles: &[Role],
        factors: &mut Vec<Factor>,
        emit: &mut dyn FnMut(&[Factor]),
    ) {
        if j == dims.len() {
            emit(factors);
            return;
        }
        match roles[j] {
            Role::Identity => {
                factors[j] = Factor::Identity;
                rec(j + 1, dims, roles, factors, emit);
            }
            role => {
                for (k, l) in level_pairs(dims[j]) {
                    factors[j] = if role == Role::HalfPi {
                        Factor::HalfPi { k, l }
                    } else {
                        Factor::Pi { k, l }
                    };
                    rec(j + 1, dims, roles, factors, emit);
                }
            }
        }
    }
    rec(0, dims, roles, &mut factors, &mut |fs| {
        out.push(ClassOperator {
            class,
            dims: dims.to_vec(),
            factors: fs.to_vec(),
            positions,
            excluded,
        })
    });
}

/// Every operator of a class family for the given local dimensions.
///
/// Enumeration runs over subsystem placements first (`r1 < r2` for the W,
/// EPR and full GHZ classes, the excluded subsystem from `m` down to 1 for
/// the reduced GHZ class) and then over level pairs, lexicographically in
/// subsystem order.
///
/// In the reduced class the two lowest-indexed included subsystems carry the
/// `pi/2` factors. For `m = 3` the reduced family coincides with the W family.
pub fn class_family(dims: &[usize], class: ClassTag) -> Result<Vec<ClassOperator>> {
    let m = dims.len();
    if m < class.min_parts() {
        return Err(Error::TooFewParts {
            class,
            needed: class.min_parts(),
            found: m,
        });
    }
    if class == ClassTag::Epr && m != 2 {
        return Err(Error::WrongArity {
            expected: 2,
            found: m,
        });
    }
    let mut out = Vec::new();
    match class {
        ClassTag::Epr | ClassTag::W | ClassTag::GhzFull => {
            let rest = if class == ClassTag::GhzFull {
                Role::Pi
            } else {
                Role::Identity
            };
            for r1 in 0..m {
                for r2 in r1 + 1..m {
                    let mut roles = vec![rest; m];
                    roles[r1] = Role::HalfPi;
                    roles[r2] = Role::HalfPi;
                    expand(class, dims, &roles, (r1 + 1, r2 + 1), None, &mut out);
                }
            }
        }
        ClassTag::GhzReduced => {
            for e in (0..m).rev() {
                let included: Vec<usize> = (0..m).filter(|&j| j != e).collect();
                let mut roles = vec![Role::Pi; m];
                roles[e] = Role::Identity;
                roles[included[0]] = Role::HalfPi;
                roles[included[1]] = Role::HalfPi;
                expand(
                    class,
                    dims,
                    &roles,
                    (included[0] + 1, included[1] + 1),
                    Some(e + 1),
                    &mut out,
                );
            }
        }
    }
    Ok(out)
}

/// `pair_complement` at the two phases used by the class operators.
pub fn half_pi_pair(dim: usize, k: usize, l: usize) -> Result<PairComplement> {
    PairComplement::new(dim, k, l, FRAC_PI_2)
}

pub fn pi_pair(dim: usize, k: usize, l: usize) -> Result<PairComplement> {
    PairComplement::new(dim, k, l, PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{is_symmetric, max_abs_diff};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn binom2(n: usize) -> usize {
        n * n.saturating_sub(1) / 2
    }

    #[test]
    fn half_pi_pair_is_minus_sigma_y() {
        let m = half_pi_pair(2, 1, 2).unwrap().matrix();
        let expected = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(0.0, 0.0)]);
        assert_eq!(m, expected);
    }

    #[test]
    fn pi_pair_is_minus_sigma_x() {
        let m = pi_pair(2, 1, 2).unwrap().matrix();
        let expected = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(-1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(m, expected);
        assert_eq!(&m * &m, DMatrix::identity(2, 2));
    }

    #[test]
    fn qutrit_half_pi_pair() {
        let m = half_pi_pair(3, 1, 3).unwrap().matrix();
        for r in 0..3 {
            for s in 0..3 {
                let expected = match (r, s) {
                    (0, 2) => c(0.0, 1.0),
                    (2, 0) => c(0.0, -1.0),
                    _ => c(0.0, 0.0),
                };
                assert_eq!(m[(r, s)], expected);
            }
        }
    }

    #[test]
    fn bad_pairs() {
        assert!(matches!(PairComplement::new(2, 2, 1, 0.0), Err(Error::BadPair { .. })));
        assert!(matches!(PairComplement::new(2, 1, 1, 0.0), Err(Error::BadPair { .. })));
        assert!(matches!(PairComplement::new(2, 1, 3, 0.0), Err(Error::BadPair { .. })));
        assert!(matches!(PairComplement::new(2, 0, 1, 0.0), Err(Error::BadPair { .. })));
    }

    #[test]
    fn pair_complement_hermitian_and_plane_square() {
        for &phi in &[0.0, 0.3, FRAC_PI_2, 2.0, PI, 4.5] {
            let p = PairComplement::new(3, 1, 3, phi).unwrap();
            let m = p.matrix();
            assert!(max_abs_diff(&m, &m.adjoint()) < 1e-15);
            let sq = &m * &m;
            // Projector onto the (1,3) plane.
            let mut proj = DMatrix::from_element(3, 3, c(0.0, 0.0));
            proj[(0, 0)] = c(1.0, 0.0);
            proj[(2, 2)] = c(1.0, 0.0);
            assert!(max_abs_diff(&sq, &proj) < 1e-15);
            let symmetric = (phi.rem_euclid(PI)).abs() < 1e-12;
            assert_eq!(is_symmetric(&m, 1e-12), symmetric, "phi = {phi}");
        }
    }

    #[test]
    fn povm_matrices() {
        let p = FullPovm::uniform(2, 0.0);
        assert_eq!(p.matrix(), DMatrix::from_element(2, 2, c(1.0, 0.0)));

        let q = FullPovm::uniform(3, FRAC_PI_2).matrix();
        for r in 0..3 {
            for s in 0..3 {
                let expected = match r.cmp(&s) {
                    std::cmp::Ordering::Equal => c(1.0, 0.0),
                    std::cmp::Ordering::Less => c(0.0, 1.0),
                    std::cmp::Ordering::Greater => c(0.0, -1.0),
                };
                assert_eq!(q[(r, s)], expected);
            }
        }
        assert!(max_abs_diff(&q, &q.adjoint()) < 1e-15);

        let mut phases = BTreeMap::new();
        phases.insert((1, 2), 0.4);
        phases.insert((1, 3), -1.1);
        phases.insert((2, 3), 2.5);
        let povm = FullPovm::new(3, &phases).unwrap();
        let comp = povm.complement();
        let full = povm.matrix();
        for r in 0..3 {
            assert_eq!(comp[(r, r)], c(0.0, 0.0));
            for s in 0..3 {
                if r != s {
                    assert!((comp[(r, s)] + full[(r, s)]).norm() < 1e-15);
                }
            }
        }
        assert!((full[(0, 1)] - Complex64::from_polar(1.0, 0.4)).norm() < 1e-15);
        assert!((full[(1, 0)] - Complex64::from_polar(1.0, -0.4)).norm() < 1e-15);

        phases.remove(&(2, 3));
        assert_eq!(FullPovm::new(3, &phases), Err(Error::MissingPhase { k: 2, l: 3 }));
    }

    #[test]
    fn family_counts_from_worked_examples() {
        let w = class_family(&[2, 2, 2], ClassTag::W).unwrap();
        assert_eq!(w.len(), 3);
        let pos: Vec<_> = w.iter().map(|o| o.positions).collect();
        assert_eq!(pos, vec![(1, 2), (1, 3), (2, 3)]);

        assert_eq!(class_family(&[2, 2, 2, 2], ClassTag::GhzFull).unwrap().len(), 6);

        let epr = class_family(&[2, 3], ClassTag::Epr).unwrap();
        assert_eq!(epr.len(), 3);
        assert!(epr.iter().all(|o| o.positions == (1, 2)));
    }

    #[test]
    fn family_count_formulas() {
        for dims in [vec![2, 3], vec![3, 3, 2], vec![2, 3, 4], vec![2, 2, 3, 2], vec![3, 1, 2]] {
            let m = dims.len();
            let mut w = 0;
            for r1 in 0..m {
                for r2 in r1 + 1..m {
                    w += binom2(dims[r1]) * binom2(dims[r2]);
                }
            }
            assert_eq!(class_family(&dims, ClassTag::W).unwrap().len(), w);
            let all: usize = dims.iter().map(|&d| binom2(d)).product();
            assert_eq!(
                class_family(&dims, ClassTag::GhzFull).unwrap().len(),
                m * (m - 1) / 2 * all
            );
            if m >= 3 {
                let red: usize = (0..m)
                    .map(|e| (0..m).filter(|&j| j != e).map(|j| binom2(dims[j])).product::<usize>())
                    .sum();
                assert_eq!(class_family(&dims, ClassTag::GhzReduced).unwrap().len(), red);
            }
        }
        // A one-level subsystem admits no pair.
        assert!(class_family(&[2, 1], ClassTag::Epr).unwrap().is_empty());
    }

    #[test]
    fn family_factor_structure() {
        let dims = [2, 3, 2, 2];
        for class in [ClassTag::W, ClassTag::GhzFull, ClassTag::GhzReduced] {
            for op in class_family(&dims, class).unwrap() {
                let ids = op.factors.iter().filter(|f| **f == Factor::Identity).count();
                let half = op
                    .factors
                    .iter()
                    .filter(|f| matches!(f, Factor::HalfPi { .. }))
                    .count();
                assert_eq!(half, 2);
                match class {
                    ClassTag::W => assert_eq!(ids, 2),
                    ClassTag::GhzFull => assert_eq!(ids, 0),
                    ClassTag::GhzReduced => assert_eq!(ids, 1),
                    ClassTag::Epr => unreachable!(),
                }
            }
        }
        let red: Vec<_> = class_family(&[2, 2, 2, 2], ClassTag::GhzReduced)
            .unwrap()
            .iter()
            .map(|o| (o.positions, o.excluded.unwrap()))
            .collect();
        assert_eq!(red, vec![((1, 2), 4), ((1, 2), 3), ((1, 3), 2), ((2, 3), 1)]);
    }

    #[test]
    fn family_errors() {
        assert!(matches!(
            class_family(&[2], ClassTag::W),
            Err(Error::TooFewParts { .. })
        ));
        assert!(matches!(
            class_family(&[2, 2], ClassTag::GhzReduced),
            Err(Error::TooFewParts { .. })
        ));
        assert!(matches!(
            class_family(&[2, 2, 2], ClassTag::Epr),
            Err(Error::WrongArity { .. })
        ));
    }

    #[test]
    fn materialized_examples() {
        let w = &class_family(&[2, 2, 2], ClassTag::W).unwrap()[0];
        let m = w.materialize().unwrap();
        let p = half_pi_pair(2, 1, 2).unwrap().matrix();
        let expected = kron_all(&[p.clone(), p.clone(), DMatrix::identity(2, 2)]);
        assert_eq!(m, expected);
        assert_eq!(m.iter().filter(|z| z.norm() > 0.0).count(), 8);

        let g2 = class_family(&[2, 2], ClassTag::GhzFull).unwrap();
        let e2 = class_family(&[2, 2], ClassTag::Epr).unwrap();
        assert_eq!(g2[0].materialize().unwrap(), e2[0].materialize().unwrap());

        let g3 = &class_family(&[2, 2, 2], ClassTag::GhzFull).unwrap()[0];
        let g = g3.materialize().unwrap();
        assert!(max_abs_diff(&(&g * &g), &DMatrix::identity(8, 8)) < 1e-12);
    }

    #[test]
    fn materialized_operators_are_symmetric() {
        for dims in [vec![3, 3], vec![2, 3, 2], vec![3, 3, 3]] {
            for class in [ClassTag::W, ClassTag::GhzFull, ClassTag::GhzReduced] {
                let Ok(family) = class_family(&dims, class) else { continue };
                for op in family {
                    let m = op.materialize().unwrap();
                    assert!(is_symmetric(&m, 0.0), "{}", op.label());
                }
            }
        }
    }

    #[test]
    fn materialize_limit() {
        let op = &class_family(&[4, 4, 4], ClassTag::W).unwrap()[0];
        assert!(matches!(
            op.materialize_with_limit(32),
            Err(Error::TooLarge { dim: 64, limit: 32 })
        ));
    }

    #[test]
    fn labels() {
        let op = &class_family(&[2, 3], ClassTag::Epr).unwrap()[1];
        assert_eq!(op.label(), "epr[1,2] 1:(1,2) 2:(1,3)");
        let red = &class_family(&[2, 2, 2, 2], ClassTag::GhzReduced).unwrap()[0];
        assert_eq!(red.label(), "ghz-reduced[1,2;-4] 1:(1,2) 2:(1,2) 3:(1,2)");
        assert_eq!("ghz-reduced".parse::<ClassTag>().unwrap(), ClassTag::GhzReduced);
    }
}
