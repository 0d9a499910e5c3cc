//! Coefficient formulas for the bipartite, three- and four-partite classes.
//!
//! Each function returns one squared term per family member, in the same
//! order as [`class_family`](crate::operators::class_family) enumerates them,
//! so the lists can be compared entry by entry with the operator route.
//! Every term already carries the factor 4 coming from the four nonzero
//! entries of a `pi/2 (x) pi/2` pair product.

use num_complex::Complex64;

use crate::operators::{format_label, level_pairs, ClassTag};
use crate::state::PureState;

use super::OperatorContribution;

type Pair = (usize, usize);

fn term(
    class: ClassTag,
    positions: (usize, usize),
    excluded: Option<usize>,
    pairs: &[(usize, Pair)],
    amplitude: Complex64,
) -> OperatorContribution {
    OperatorContribution {
        label: format_label(class, positions, excluded, pairs.iter().map(|&(j, (k, l))| (j, k, l))),
        contribution: 4.0 * amplitude.norm_sqr(),
    }
}

/// 0-based level pairs of one subsystem.
fn pairs0(dim: usize) -> Vec<Pair> {
    level_pairs(dim).into_iter().map(|(k, l)| (k - 1, l - 1)).collect()
}

fn one_based(p: Pair) -> Pair {
    (p.0 + 1, p.1 + 1)
}

/// `4 |a_{k1 k2} a_{l1 l2} - a_{k1 l2} a_{l1 k2}|^2` over `k1 < l1`, `k2 < l2`.
pub fn bipartite(s: &PureState, class: ClassTag) -> Vec<OperatorContribution> {
    let d = s.dims();
    let a = |i: usize, j: usize| s.at0(&[i, j]);
    let mut out = Vec::new();
    for (k1, l1) in pairs0(d[0]) {
        for (k2, l2) in pairs0(d[1]) {
            let det = a(k1, k2) * a(l1, l2) - a(k1, l2) * a(l1, k2);
            out.push(term(
                class,
                (1, 2),
                None,
                &[(1, one_based((k1, l1))), (2, one_based((k2, l2)))],
                det,
            ));
        }
    }
    out
}

/// W class for three subsystems: for each pair of subsystems, the 2x2
/// minors with the third index summed on the diagonal inside the modulus.
pub fn w3(s: &PureState) -> Vec<OperatorContribution> {
    let d = s.dims();
    let a = |i: usize, j: usize, k: usize| s.at0(&[i, j, k]);
    let mut out = Vec::new();
    let class = ClassTag::W;

    for (k1, l1) in pairs0(d[0]) {
        for (k2, l2) in pairs0(d[1]) {
            let t: Complex64 = (0..d[2])
                .map(|c| a(k1, l2, c) * a(l1, k2, c) - a(k1, k2, c) * a(l1, l2, c))
                .sum();
            out.push(term(class, (1, 2), None, &[(1, one_based((k1, l1))), (2, one_based((k2, l2)))], t));
        }
    }
    for (k1, l1) in pairs0(d[0]) {
        for (k3, l3) in pairs0(d[2]) {
            let t: Complex64 = (0..d[1])
                .map(|c| a(k1, c, l3) * a(l1, c, k3) - a(k1, c, k3) * a(l1, c, l3))
                .sum();
            out.push(term(class, (1, 3), None, &[(1, one_based((k1, l1))), (3, one_based((k3, l3)))], t));
        }
    }
    for (k2, l2) in pairs0(d[1]) {
        for (k3, l3) in pairs0(d[2]) {
            let t: Complex64 = (0..d[0])
                .map(|c| a(c, k2, l3) * a(c, l2, k3) - a(c, k2, k3) * a(c, l2, l3))
                .sum();
            out.push(term(class, (2, 3), None, &[(2, one_based((k2, l2))), (3, one_based((k3, l3)))], t));
        }
    }
    out
}

/// W class for four subsystems: six pair placements, the two remaining
/// indices summed on the diagonal.
pub fn w4(s: &PureState) -> Vec<OperatorContribution> {
    let d = s.dims();
    let mut out = Vec::new();
    for p in 0..4 {
        for q in p + 1..4 {
            let rest: Vec<usize> = (0..4).filter(|&j| j != p && j != q).collect();
            for (kp, lp) in pairs0(d[p]) {
                for (kq, lq) in pairs0(d[q]) {
                    let mut t = Complex64::new(0.0, 0.0);
                    let mut x = [0usize; 4];
                    let mut y = [0usize; 4];
                    for c in 0..d[rest[0]] {
                        for e in 0..d[rest[1]] {
                            x[rest[0]] = c;
                            x[rest[1]] = e;
                            y[rest[0]] = c;
                            y[rest[1]] = e;
                            // a_{..kp..lq..} a_{..lp..kq..}
                            x[p] = kp;
                            x[q] = lq;
                            y[p] = lp;
                            y[q] = kq;
                            let cross = s.at0(&x) * s.at0(&y);
                            // a_{..kp..kq..} a_{..lp..lq..}
                            x[q] = kq;
                            y[q] = lq;
                            t += cross - s.at0(&x) * s.at0(&y);
                        }
                    }
                    out.push(term(
                        ClassTag::W,
                        (p + 1, q + 1),
                        None,
                        &[(p + 1, one_based((kp, lp))), (q + 1, one_based((kq, lq)))],
                        t,
                    ));
                }
            }
        }
    }
    out
}

/// Products `a_I a_{I'}` over a three-level pattern where `I` takes `k` on
/// the first subsystem and `I'` is the complementary pattern.
/// `p[b]` uses side bits `b = (b2 b3)` for the second and third subsystem
/// (0 = k, 1 = l): `p0 = a_kkk a_lll`, `p1 = a_kkl a_llk`, `p2 = a_klk a_lkl`,
/// `p3 = a_kll a_lkk`.
fn triple_products(
    s: &PureState,
    subsystems: [usize; 3],
    pairs: [Pair; 3],
    fixed: Option<(usize, usize)>,
) -> [Complex64; 4] {
    let mut x = vec![0usize; s.parts()];
    let mut y = vec![0usize; s.parts()];
    if let Some((j, c)) = fixed {
        x[j] = c;
        y[j] = c;
    }
    let pick = |pair: Pair, side: usize| if side == 0 { pair.0 } else { pair.1 };
    let mut p = [Complex64::new(0.0, 0.0); 4];
    for (b, slot) in p.iter_mut().enumerate() {
        let sides = [0, (b >> 1) & 1, b & 1];
        for t in 0..3 {
            x[subsystems[t]] = pick(pairs[t], sides[t]);
            y[subsystems[t]] = pick(pairs[t], 1 - sides[t]);
        }
        *slot = s.at0(&x) * s.at0(&y);
    }
    p
}

/// Full GHZ class for three subsystems, one term per level-pair triple and
/// placement of the `pi/2` factors.
pub fn ghz3(s: &PureState) -> Vec<OperatorContribution> {
    let d = s.dims();
    let mut out = Vec::new();
    // Sign patterns on (p0, p1, p2, p3) for placements (1,2), (1,3), (2,3).
    let placements: [((usize, usize), [f64; 4]); 3] = [
        ((1, 2), [-1.0, -1.0, 1.0, 1.0]),
        ((1, 3), [-1.0, 1.0, -1.0, 1.0]),
        ((2, 3), [-1.0, 1.0, 1.0, -1.0]),
    ];
    for (positions, signs) in placements {
        for p1 in pairs0(d[0]) {
            for p2 in pairs0(d[1]) {
                for p3 in pairs0(d[2]) {
                    let p = triple_products(s, [0, 1, 2], [p1, p2, p3], None);
                    let t: Complex64 = p.iter().zip(signs).map(|(v, sg)| v * sg).sum();
                    out.push(term(
                        ClassTag::GhzFull,
                        positions,
                        None,
                        &[(1, one_based(p1)), (2, one_based(p2)), (3, one_based(p3))],
                        t,
                    ));
                }
            }
        }
    }
    out
}

/// Full GHZ class for four subsystems in terms of
/// `beta_{1+b} = a_{k,I(b)} a_{l,I'(b)}`, where `b = (b2 b3 b4)` are the side
/// bits of subsystems 2..4 (`beta_1 = a_kkkk a_llll`, ..., `beta_8 =
/// a_klll a_lkkk`). The sign of `beta` is `-` when the two `pi/2` subsystems
/// sit on the same side and `+` otherwise.
pub fn ghz4(s: &PureState) -> Vec<OperatorContribution> {
    let d = s.dims();
    let mut out = Vec::new();
    const SIGNS: [((usize, usize), [f64; 8]); 6] = [
        ((1, 2), [-1., -1., -1., -1., 1., 1., 1., 1.]),
        ((1, 3), [-1., -1., 1., 1., -1., -1., 1., 1.]),
        ((1, 4), [-1., 1., -1., 1., -1., 1., -1., 1.]),
        ((2, 3), [-1., -1., 1., 1., 1., 1., -1., -1.]),
        ((2, 4), [-1., 1., -1., 1., 1., -1., 1., -1.]),
        ((3, 4), [-1., 1., 1., -1., -1., 1., 1., -1.]),
    ];
    let pick = |pair: Pair, side: usize| if side == 0 { pair.0 } else { pair.1 };
    for (positions, signs) in SIGNS {
        for p1 in pairs0(d[0]) {
            for p2 in pairs0(d[1]) {
                for p3 in pairs0(d[2]) {
                    for p4 in pairs0(d[3]) {
                        let pairs = [p1, p2, p3, p4];
                        let mut t = Complex64::new(0.0, 0.0);
                        for (b, sg) in signs.iter().enumerate() {
                            let sides = [0, (b >> 2) & 1, (b >> 1) & 1, b & 1];
                            let x: [usize; 4] = std::array::from_fn(|j| pick(pairs[j], sides[j]));
                            let y: [usize; 4] = std::array::from_fn(|j| pick(pairs[j], 1 - sides[j]));
                            t += s.at0(&x) * s.at0(&y) * *sg;
                        }
                        out.push(term(
                            ClassTag::GhzFull,
                            positions,
                            None,
                            &[
                                (1, one_based(p1)),
                                (2, one_based(p2)),
                                (3, one_based(p3)),
                                (4, one_based(p4)),
                            ],
                            t,
                        ));
                    }
                }
            }
        }
    }
    out
}

/// Reduced GHZ class for four subsystems: for each excluded subsystem, the
/// three-level pattern `-p0 - p1 + p2 + p3` over the remaining triple with
/// the excluded index summed on the diagonal inside the modulus.
pub fn ghz3_of_4(s: &PureState) -> Vec<OperatorContribution> {
    let d = s.dims();
    let mut out = Vec::new();
    for excluded in (0..4).rev() {
        let tri: Vec<usize> = (0..4).filter(|&j| j != excluded).collect();
        let tri = [tri[0], tri[1], tri[2]];
        for pa in pairs0(d[tri[0]]) {
            for pb in pairs0(d[tri[1]]) {
                for pc in pairs0(d[tri[2]]) {
                    let mut t = Complex64::new(0.0, 0.0);
                    for c in 0..d[excluded] {
                        let p = triple_products(s, tri, [pa, pb, pc], Some((excluded, c)));
                        t += -p[0] - p[1] + p[2] + p[3];
                    }
                    out.push(term(
                        ClassTag::GhzReduced,
                        (tri[0] + 1, tri[1] + 1),
                        Some(excluded + 1),
                        &[
                            (tri[0] + 1, one_based(pa)),
                            (tri[1] + 1, one_based(pb)),
                            (tri[2] + 1, one_based(pc)),
                        ],
                        t,
                    ));
                }
            }
        }
    }
    out
}
