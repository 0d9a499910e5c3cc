//! Fixtures shared by the benchmarks in `benches/`.

use multiconc::{PureState, StateLabel};

/// Seeded random state; panics on invalid dims.
pub fn random_state(dims: &[usize], seed: u64) -> PureState {
    PureState::random(dims, seed).expect("valid dims")
}

pub fn ghz_qubits(m: usize) -> PureState {
    PureState::named(&StateLabel::Ghz { parts: m, dim: 2 }).expect("m >= 2")
}

/// Shapes swept by the evaluation benchmarks.
pub const SHAPES: [&[usize]; 5] = [&[3, 3], &[2, 2, 2], &[3, 3, 3], &[2, 2, 2, 2], &[3, 3, 3, 3]];
