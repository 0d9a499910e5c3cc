//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use multiconc::invariance::{
    check_ghz_noninvariance, check_oracle_equivalence, check_permutation_invariance,
    check_square_identity, check_w_slocc_invariance, check_w_slocc_invariance_on_support,
    ORACLE_SHAPES,
};
use multiconc::linalg::random_unitary;
use multiconc::{
    concurrence, concurrence_bipartite, concurrence_ghz, concurrence_ghz_reduced,
    concurrence_via_operators, concurrence_w, i_concurrence, maximize_class, wootters, ClassTag,
    NormalizationConvention, OptimizerConfig, PureState, Result, StateLabel,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Criterion = (&'static str, fn() -> Result<Outcome>, Duration);

struct Outcome {
    passed: bool,
    detail: String,
}

fn named(label: StateLabel) -> Result<PureState> {
    PureState::named(&label)
}

fn within(value: f64, expected: f64, tol: f64) -> bool {
    (value - expected).abs() <= tol
}

fn criterion_1() -> Result<Outcome> {
    let w3 = named(StateLabel::W(3))?;
    let n = NormalizationConvention::default().with_w(0.75);
    let w = concurrence_w(&w3, &n)?.value;
    let g = concurrence_ghz(&w3, &NormalizationConvention::default())?.value;
    Ok(Outcome {
        passed: within(w, 1.0, 1e-12) && within(g, 0.0, 1e-12),
        detail: format!("C_W(W3) = {w:.15}, C_GHZ(W3) = {g:.3e}"),
    })
}

fn criterion_2() -> Result<Outcome> {
    let g3 = named(StateLabel::Ghz { parts: 3, dim: 2 })?;
    let n = NormalizationConvention::default().with_ghz(1.0 / 3.0);
    let g = concurrence_ghz(&g3, &n)?.value;
    let w = concurrence_w(&g3, &NormalizationConvention::default())?.value;
    Ok(Outcome {
        passed: within(g, 1.0, 1e-12) && within(w, 0.0, 1e-12),
        detail: format!("C_GHZ(GHZ3) = {g:.15}, C_W(GHZ3) = {w:.3e}"),
    })
}

fn criterion_3() -> Result<Outcome> {
    let unit = NormalizationConvention::unit();
    let mut worst: f64 = 0.0;
    for m in 2..=6 {
        let mf = m as f64;
        let w = named(StateLabel::W(m))?;
        let g = named(StateLabel::Ghz { parts: m, dim: 2 })?;
        let ew = (2.0 * (mf - 1.0) / mf).sqrt();
        let eg = (mf * (mf - 1.0) / 2.0).sqrt();
        worst = worst.max((concurrence_w(&w, &unit)?.value - ew).abs());
        worst = worst.max((concurrence_ghz(&g, &unit)?.value - eg).abs());
        if m >= 5 {
            worst = worst.max((concurrence_via_operators(&w, ClassTag::W, &unit)?.value - ew).abs());
            worst = worst.max((concurrence_via_operators(&g, ClassTag::GhzFull, &unit)?.value - eg).abs());
        }
    }
    Ok(Outcome {
        passed: worst <= 1e-10,
        detail: format!("max deviation over m = 2..6: {worst:.3e}"),
    })
}

fn criterion_4() -> Result<Outcome> {
    let unit = NormalizationConvention::unit();
    let w4 = named(StateLabel::W(4))?;
    let g4 = named(StateLabel::Ghz { parts: 4, dim: 2 })?;
    let w = concurrence_w(&w4, &unit)?.value;
    let g = concurrence_ghz(&g4, &unit)?.value;
    let r = concurrence_ghz_reduced(&w4, &NormalizationConvention::default())?.value;
    Ok(Outcome {
        passed: within(w, 1.5f64.sqrt(), 1e-10) && within(g, 6f64.sqrt(), 1e-10) && within(r, 0.0, 1e-12),
        detail: format!("C_W(W4) = {w:.12}, C_GHZ(GHZ4) = {g:.12}, C_GHZ3(W4) = {r:.3e}"),
    })
}

fn criterion_5() -> Result<Outcome> {
    let r = check_oracle_equivalence(200, 5)?;
    Ok(Outcome {
        passed: r.residual <= 1e-10 && r.samples == 200 * ORACLE_SHAPES.len(),
        detail: format!("{} states, max |closed - dense| = {:.3e}", r.samples, r.residual),
    })
}

fn criterion_6() -> Result<Outcome> {
    let n = NormalizationConvention::default();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst_w: f64 = 0.0;
    for _ in 0..500 {
        let s = PureState::random_with(&[2, 2], &mut rng)?;
        worst_w = worst_w.max((concurrence_bipartite(&s, &n)?.value - wootters(&s)?).abs());
    }
    let mut worst_i: f64 = 0.0;
    for _ in 0..200 {
        let dims = [rng.random_range(2..=4), rng.random_range(2..=4)];
        let s = PureState::random_with(&dims, &mut rng)?;
        worst_i = worst_i.max((concurrence_bipartite(&s, &n)?.value - i_concurrence(&s)?).abs());
    }
    Ok(Outcome {
        passed: worst_w <= 1e-12 && worst_i <= 1e-10,
        detail: format!("max |C - spin-flip| = {worst_w:.3e}, max |C - I-concurrence| = {worst_i:.3e}"),
    })
}

fn criterion_7() -> Result<Outcome> {
    let w3 = check_w_slocc_invariance(3, 100, 7)?;
    let w4 = check_w_slocc_invariance(4, 100, 8)?;
    let g3 = check_ghz_noninvariance(3, 100, 9)?;
    let g4 = check_ghz_noninvariance(4, 100, 10)?;
    // Not part of the criterion: the same draws applied on the pair support only.
    let s3 = check_w_slocc_invariance_on_support(3, 100, 7)?;
    let s4 = check_w_slocc_invariance_on_support(4, 100, 8)?;
    let ghz_ok = g3.min_residual > 1e-3 && g4.min_residual > 1e-3;
    Ok(Outcome {
        passed: w3.residual < 1e-8 && w4.residual < 1e-8 && ghz_ok,
        detail: format!(
            "W full sandwich residual m=3 {:.3e}, m=4 {:.3e}; GHZ min residual m=3 {:.3e}, m=4 {:.3e}; \
             W pair-support residual m=3 {:.3e}, m=4 {:.3e}",
            w3.residual, w4.residual, g3.min_residual, g4.min_residual, s3.residual, s4.residual
        ),
    })
}

fn criterion_8() -> Result<Outcome> {
    let sq3 = check_square_identity(3)?;
    let sq4 = check_square_identity(4)?;
    let mut worst: f64 = 0.0;
    let cases: [(ClassTag, &[usize]); 7] = [
        (ClassTag::Epr, &[2, 2]),
        (ClassTag::Epr, &[3, 3]),
        (ClassTag::W, &[2, 2, 2]),
        (ClassTag::GhzFull, &[2, 2, 2]),
        (ClassTag::W, &[3, 3, 3]),
        (ClassTag::W, &[2, 2, 2, 2]),
        (ClassTag::GhzFull, &[2, 2, 2, 2]),
    ];
    for (i, (class, dims)) in cases.into_iter().enumerate() {
        worst = worst.max(check_permutation_invariance(class, dims, 30, 80 + i as u64)?.residual);
    }
    Ok(Outcome {
        passed: sq3.residual < 1e-12 && sq4.residual < 1e-12 && worst <= 1e-9,
        detail: format!(
            "square residual m=3 {:.3e}, m=4 {:.3e}; permutation max deviation {worst:.3e}",
            sq3.residual, sq4.residual
        ),
    })
}

fn criterion_9() -> Result<Outcome> {
    let n = NormalizationConvention::default();
    let config = OptimizerConfig::default();
    let g3 = named(StateLabel::Ghz { parts: 3, dim: 2 })?;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut recovered = 0;
    let mut lowest = f64::INFINITY;
    for _ in 0..20 {
        let us: Vec<_> = (0..3).map(|_| random_unitary(2, &mut rng)).collect();
        let s = g3.apply_local(&us, false)?;
        let v = maximize_class(&s, ClassTag::GhzFull, &n, &config)?.value;
        lowest = lowest.min(v);
        if v >= 0.999 {
            recovered += 1;
        }
    }
    let mut product_max: f64 = 0.0;
    for _ in 0..20 {
        let s = PureState::random_product(&[2, 2, 2], &mut rng)?;
        product_max = product_max.max(maximize_class(&s, ClassTag::GhzFull, &n, &config)?.value);
    }
    Ok(Outcome {
        passed: recovered >= 19 && product_max < 1e-6,
        detail: format!(
            "rotated GHZ3 recovered {recovered}/20 (lowest {lowest:.6}); product max {product_max:.3e}"
        ),
    })
}

fn criterion_10() -> Result<Outcome> {
    let n = NormalizationConvention::default();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst: f64 = 0.0;
    for dims in ORACLE_SHAPES {
        for _ in 0..100 {
            let s = PureState::random_product(dims, &mut rng)?;
            for class in ClassTag::ALL {
                if class.applies_to(dims.len()) {
                    worst = worst.max(concurrence(&s, class, &n)?.value);
                }
            }
        }
    }
    Ok(Outcome {
        passed: worst < 1e-10,
        detail: format!("max class value on product states {worst:.3e}"),
    })
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("canonical W3 value", criterion_1, Duration::from_millis(1)),
        ("canonical GHZ3 value", criterion_2, Duration::from_millis(1)),
        ("scaling laws m = 2..6", criterion_3, Duration::from_secs(10)),
        ("four-partite values", criterion_4, Duration::from_secs(1)),
        ("closed form vs dense operators", criterion_5, Duration::from_secs(60)),
        ("bipartite identities", criterion_6, Duration::from_secs(10)),
        ("SLOCC invariance", criterion_7, Duration::from_secs(30)),
        ("square identity and permutation invariance", criterion_8, Duration::from_secs(30)),
        ("optimizer recovery", criterion_9, Duration::from_secs(120)),
        ("product-state zeros", criterion_10, Duration::from_secs(10)),
    ];
    let mut failures = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (passed, detail) = match outcome {
            Ok(o) => (o.passed && elapsed < *budget, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !passed {
            failures += 1;
        }
        println!(
            "criterion {:>2} {}: {name}: {detail} [{:.3?} / budget {:?}]",
            i + 1,
            if passed { "PASS" } else { "FAIL" },
            elapsed,
            budget
        );
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
