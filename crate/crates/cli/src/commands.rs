use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use multiconc::invariance::{
    check_ghz_noninvariance, check_oracle_equivalence, check_permutation_invariance,
    check_square_identity, check_w_local_unitary, check_w_slocc_control, check_w_slocc_invariance,
    check_w_slocc_invariance_on_support, Expectation, InvarianceResult,
};
use multiconc::{
    classify, concurrence, ClassTag, ConcurrenceReport, NormalizationConvention,
    OperatorContribution, OptimizerConfig, PureState, Route, StateLabel, Verdict,
};
use serde::Serialize;

use crate::{
    CheckArgs, ClassArg, ClassifyArgs, Cli, CliError, Command, ComputeArgs, Experiment, NormArgs,
    RandomArgs, StateFile, Suite, EXIT_CHECK, EXIT_OK,
};

const MAX_RANDOM_AMPLITUDES: usize = 1 << 20;

/// Text for standard output and the process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Self { text, code: EXIT_OK }
    }
}

pub fn run(cli: Cli) -> Result<Output, CliError> {
    match cli.command {
        Command::Compute(a) => compute(&a),
        Command::Classify(a) => classify_cmd(&a),
        Command::Check(a) => check(&a),
        Command::Random(a) => random(&a),
    }
}

pub fn load_state(path: &Path) -> Result<PureState, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    Ok(StateFile::parse(&text)?.to_state()?)
}

fn normalization(args: &NormArgs) -> Result<NormalizationConvention, CliError> {
    let mut n = NormalizationConvention::default();
    if let Some(v) = args.norm_epr {
        n = n.with_epr(v);
    }
    if let Some(v) = args.norm_w {
        n = n.with_w(v);
    }
    if let Some(v) = args.norm_ghz {
        n = n.with_ghz(v);
    }
    if let Some(v) = args.norm_ghz_reduced {
        n = n.with_ghz_reduced(v);
    }
    n.validate()?;
    Ok(n)
}

fn classes_for(arg: ClassArg, m: usize) -> Result<Vec<ClassTag>, CliError> {
    let single = |c: ClassTag| {
        if c.applies_to(m) {
            Ok(vec![c])
        } else {
            Err(CliError::Mismatch(format!(
                "class {c} needs {} subsystems, the state has {m}",
                if c == ClassTag::Epr { "exactly 2".to_string() } else { format!("at least {}", c.min_parts()) }
            )))
        }
    };
    match arg {
        ClassArg::Epr => single(ClassTag::Epr),
        ClassArg::W => single(ClassTag::W),
        ClassArg::Ghz => single(ClassTag::GhzFull),
        ClassArg::GhzReduced => single(ClassTag::GhzReduced),
        // For two subsystems W and GHZ coincide with EPR.
        ClassArg::All if m == 2 => Ok(vec![ClassTag::Epr]),
        ClassArg::All => {
            let v: Vec<_> = ClassTag::ALL.into_iter().filter(|c| c.applies_to(m)).collect();
            if v.is_empty() {
                Err(CliError::Mismatch(format!("no class applies to {m} subsystem(s)")))
            } else {
                Ok(v)
            }
        }
    }
}

#[derive(Debug, Serialize)]
struct ComputeJson {
    dims: Vec<usize>,
    results: Vec<ResultJson>,
}

#[derive(Debug, Serialize)]
struct ResultJson {
    /// Class requested on the command line.
    requested: ClassTag,
    /// Class the value was computed for (EPR when two subsystems).
    class: ClassTag,
    value: f64,
    squared_sum: f64,
    normalization: f64,
    route: Route,
    #[serde(skip_serializing_if = "Option::is_none")]
    per_operator: Option<Vec<OperatorContribution>>,
}

fn compute(args: &ComputeArgs) -> Result<Output, CliError> {
    let s = load_state(&args.file)?;
    let norm = normalization(&args.norm)?;
    let classes = classes_for(args.class, s.parts())?;
    let reports = classes
        .iter()
        .map(|&c| Ok((c, concurrence(&s, c, &norm)?)))
        .collect::<Result<Vec<(ClassTag, ConcurrenceReport)>, CliError>>()?;

    if args.json {
        let doc = ComputeJson {
            dims: s.dims().to_vec(),
            results: reports
                .into_iter()
                .map(|(requested, r)| ResultJson {
                    requested,
                    class: r.class,
                    value: r.value,
                    squared_sum: r.squared_sum,
                    normalization: r.normalization,
                    route: r.route,
                    per_operator: args.breakdown.then_some(r.per_operator),
                })
                .collect(),
        };
        return Ok(Output::ok(to_json(&doc)));
    }

    let mut out = String::new();
    writeln!(out, "dims {:?}", s.dims()).unwrap();
    writeln!(out, "{:<12} {:>20} {:>14}  route", "class", "value", "normalization").unwrap();
    for (requested, r) in &reports {
        let name = if *requested == r.class {
            r.class.to_string()
        } else {
            format!("{requested}->{}", r.class)
        };
        writeln!(out, "{name:<12} {:>20.15} {:>14.6}  {}", r.value, r.normalization, route_name(r.route)).unwrap();
        if args.breakdown {
            for t in &r.per_operator {
                writeln!(out, "    {:<40} {:.15e}", t.label, t.contribution).unwrap();
            }
        }
    }
    Ok(Output::ok(out))
}

fn route_name(r: Route) -> &'static str {
    match r {
        Route::ClosedForm => "closed-form",
        Route::Structured => "structured",
        Route::Dense => "dense",
    }
}

#[derive(Debug, Serialize)]
struct ClassifyJson {
    dims: Vec<usize>,
    verdict: Verdict,
    genuine_ghz: Option<bool>,
    threshold: f64,
    classes: Vec<ClassJson>,
}

#[derive(Debug, Serialize)]
struct ClassJson {
    class: ClassTag,
    value: f64,
    normalization: f64,
    detected: bool,
    optimized: Option<multiconc::concurrence::classify::OptimizedValue>,
}

fn classify_cmd(args: &ClassifyArgs) -> Result<Output, CliError> {
    let s = load_state(&args.file)?;
    let norm = normalization(&args.norm)?;
    let config = OptimizerConfig::default()
        .with_restarts(args.restarts)
        .with_seed(args.seed)
        .with_threshold(args.threshold);
    let report = classify(&s, &norm, &config)?;
    let doc = ClassifyJson {
        dims: report.dims.clone(),
        verdict: report.verdict,
        genuine_ghz: report.genuine_ghz,
        threshold: args.threshold,
        classes: report
            .entries
            .iter()
            .map(|e| ClassJson {
                class: e.class,
                value: e.raw.value,
                normalization: e.raw.normalization,
                detected: e.detected,
                optimized: e.optimized.clone(),
            })
            .collect(),
    };
    if args.json {
        return Ok(Output::ok(to_json(&doc)));
    }
    let mut out = String::new();
    writeln!(out, "dims {:?}", doc.dims).unwrap();
    writeln!(out, "{:<12} {:>20} {:>20}  detected", "class", "value", "optimized").unwrap();
    for c in &doc.classes {
        let opt = c
            .optimized
            .as_ref()
            .map(|o| format!("{:.15}", o.value))
            .unwrap_or_else(|| "-".to_string());
        writeln!(out, "{:<12} {:>20.15} {:>20}  {}", c.class.to_string(), c.value, opt, c.detected).unwrap();
    }
    writeln!(out, "verdict: {}", doc.verdict).unwrap();
    if let Some(g) = doc.genuine_ghz {
        writeln!(
            out,
            "genuine ghz (optimized value > {}): {}",
            args.threshold,
            if g { "yes" } else { "not found" }
        )
        .unwrap();
    }
    Ok(Output::ok(out))
}

#[derive(Debug, Serialize)]
struct CheckRow {
    status: &'static str,
    #[serde(flatten)]
    result: InvarianceResult,
}

#[derive(Debug, Serialize)]
struct CheckJson {
    passed: bool,
    rows: Vec<CheckRow>,
}

fn suite_rows(suite: Suite, samples: usize, seed: u64) -> Result<Vec<InvarianceResult>, CliError> {
    let mut rows = Vec::new();
    let run = |suite| suite_rows(suite, samples, seed);
    match suite {
        Suite::All => {
            for s in [Suite::Slocc, Suite::Permutation, Suite::Square, Suite::Oracle] {
                rows.extend(run(s)?);
            }
        }
        Suite::Slocc => {
            for m in [3, 4] {
                rows.push(check_w_slocc_invariance(m, samples, seed)?);
                rows.push(check_w_slocc_invariance_on_support(m, samples, seed)?);
            }
            rows.push(check_w_slocc_control(3, samples, seed)?);
            for m in [3, 4] {
                rows.push(check_ghz_noninvariance(m, samples, seed)?);
            }
        }
        Suite::Permutation => {
            let cases: [(ClassTag, &[usize]); 5] = [
                (ClassTag::Epr, &[3, 3]),
                (ClassTag::W, &[2, 2, 2]),
                (ClassTag::GhzFull, &[2, 2, 2]),
                (ClassTag::W, &[2, 2, 2, 2]),
                (ClassTag::GhzFull, &[2, 2, 2, 2]),
            ];
            for (class, dims) in cases {
                rows.push(check_permutation_invariance(class, dims, samples, seed)?);
            }
        }
        Suite::Square => {
            for m in [3, 4] {
                rows.push(check_square_identity(m)?);
            }
        }
        Suite::Oracle => rows.push(check_oracle_equivalence(samples, seed)?),
    }
    Ok(rows)
}

fn status(r: &InvarianceResult) -> &'static str {
    match r.confirmed() {
        Some(true) => "PASS",
        Some(false) => "FAIL",
        None => "INFO",
    }
}

fn check(args: &CheckArgs) -> Result<Output, CliError> {
    let suite = match (args.suite, args.experiment) {
        (Some(s), _) => Some(s),
        (None, Some(_)) => None,
        (None, None) => Some(Suite::All),
    };
    let mut results = match suite {
        Some(s) => suite_rows(s, args.samples, args.seed)?,
        None => Vec::new(),
    };
    if let Some(Experiment::LuW) = args.experiment {
        for m in [3, 4] {
            results.push(check_w_local_unitary(m, args.samples, args.seed)?);
        }
    }
    let passed = results.iter().all(|r| r.confirmed() != Some(false));
    let code = if passed { EXIT_OK } else { EXIT_CHECK };
    let rows: Vec<CheckRow> = results
        .into_iter()
        .map(|result| CheckRow {
            status: status(&result),
            result,
        })
        .collect();
    if args.json {
        return Ok(Output {
            text: to_json(&CheckJson { passed, rows }),
            code,
        });
    }
    let mut out = String::new();
    writeln!(
        out,
        "{:<6} {:<40} {:<14} {:>12} {:>12} {:>9}",
        "status", "claim", "expectation", "residual", "min", "threshold"
    )
    .unwrap();
    for r in &rows {
        let exp = match r.result.expectation {
            Expectation::Invariant => "invariant",
            Expectation::NonInvariant => "non-invariant",
            Expectation::Open => "experiment",
        };
        writeln!(
            out,
            "{:<6} {:<40} {:<14} {:>12.3e} {:>12.3e} {:>9.0e}",
            r.status, r.result.claim, exp, r.result.residual, r.result.min_residual, r.result.threshold
        )
        .unwrap();
    }
    writeln!(out, "{}", if passed { "all checks passed" } else { "some checks failed" }).unwrap();
    Ok(Output { text: out, code })
}

/// Parses `w:M`, `ghz:M`, `ghz:M:D` or `bell`.
pub fn parse_named(spec: &str) -> Result<StateLabel, CliError> {
    let bad = || CliError::Input(format!("bad --named value `{spec}`: expected w:M, ghz:M, ghz:M:D or bell"));
    let num = |s: &str| s.parse::<usize>().map_err(|_| bad());
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        ["bell"] => Ok(StateLabel::Bell),
        ["w", m] => Ok(StateLabel::W(num(m)?)),
        ["ghz", m] => Ok(StateLabel::Ghz { parts: num(m)?, dim: 2 }),
        ["ghz", m, d] => Ok(StateLabel::Ghz {
            parts: num(m)?,
            dim: num(d)?,
        }),
        _ => Err(bad()),
    }
}

fn random(args: &RandomArgs) -> Result<Output, CliError> {
    let s = match (&args.named, &args.dims) {
        (Some(name), _) => PureState::named(&parse_named(name)?)?,
        (None, Some(dims)) => {
            if dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d)).is_none_or(|n| n > MAX_RANDOM_AMPLITUDES) {
                return Err(CliError::Input(format!("dims {dims:?} exceed {MAX_RANDOM_AMPLITUDES} amplitudes")));
            }
            PureState::random(dims, args.seed)?
        }
        (None, None) => return Err(CliError::Input("give --dims or --named".to_string())),
    };
    Ok(Output::ok(StateFile::from_state(&s).to_json() + "\n"))
}


fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report serializes") + "\n"
}
