//! Subcommand implementations. Each returns the rendered artifact plus the
//! number of violated checks; the binary maps violations to exit code 2.

use rauzylab_core::bounds::{curve_table, delta, CurveId, Rat};
use rauzylab_core::complexity::{
    check_morse_hedlund, complexity_profile, recurrence_split, tail_rho_certificate,
    ComplexityProfile,
};
use rauzylab_core::dio::{
    mu_lower_estimate, rational_from_repetition, verify_approximation, RepetitionWitness,
};
use rauzylab_core::evolution::{
    check_boundary_bispecial, check_degree_identity, check_figure8_bounds, check_gain_bounds,
    check_recurrence_propagation, check_shape_dichotomy, check_skln_bounds, check_succession,
    check_tail_bounds, check_witness_window, evolution_trace, find_repetition_witness,
    EvolutionOptions, EvolutionTrace, Strictness, WitnessOutcome,
};
use rauzylab_core::rauzy::{
    build_rauzy, detect_infinity_shape, export_dot, export_dot_with_reduction, reduce,
    DetectOptions, RauzyError,
};
use rauzylab_core::report::{CheckResult, CheckStatus};
use rauzylab_core::word::PeriodicityClass;
use rauzylab_core::FactorIndex;

use crate::export;
use crate::input::InputWord;
use crate::CliError;

pub struct CommandOutput {
    pub text: String,
    pub violations: usize,
}

impl CommandOutput {
    fn clean(text: String) -> Self {
        CommandOutput { text, violations: 0 }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    Dot,
    Json,
}

fn build_pipeline(
    input: &InputWord,
    horizon: usize,
    n_max: usize,
) -> Result<(FactorIndex, ComplexityProfile), CliError> {
    let word = input.materialize(horizon)?;
    if n_max + 1 >= word.len() {
        return Err(CliError::Usage(format!(
            "nmax {n_max} too large for horizon {}",
            word.len()
        )));
    }
    let index = FactorIndex::build(&word)
        .map_err(|e| CliError::Usage(format!("cannot index the word: {e}")))?;
    let profile = complexity_profile(&index, n_max)
        .map_err(|e| CliError::Usage(format!("cannot profile the word: {e}")))?;
    Ok((index, profile))
}

pub fn cmd_analyze(
    input: &InputWord,
    horizon: usize,
    n_max: usize,
    format: TableFormat,
    inventories: bool,
    assert_mh: bool,
) -> Result<CommandOutput, CliError> {
    let (index, profile) = build_pipeline(input, horizon, n_max)?;
    let mut violations = 0;
    let mut text = match format {
        TableFormat::Csv => export::profile_csv(&profile),
        TableFormat::Json => {
            export::profile_json(&input.describe(), &profile, &index, inventories)
        }
    };
    if assert_mh {
        let report = check_morse_hedlund(&profile, input.class(), input.complexity_bound());
        if report.result.status.is_violation() {
            violations += 1;
        }
        text.push_str(&export::report_lines(&[report.result]));
    }
    Ok(CommandOutput { text, violations })
}

pub fn cmd_rauzy(
    input: &InputWord,
    horizon: usize,
    level: usize,
    reduced: bool,
    diff: bool,
    format: GraphFormat,
) -> Result<CommandOutput, CliError> {
    let word = input.materialize(horizon)?;
    if level + 1 >= word.len() {
        return Err(CliError::Usage(format!(
            "level {level} needs horizon above {}",
            level + 1
        )));
    }
    let index = FactorIndex::build(&word).map_err(|e| CliError::Usage(format!("{e}")))?;
    let graph = build_rauzy(&index, level).map_err(|e| CliError::Usage(format!("{e}")))?;
    let map_rauzy_err = |e: RauzyError| match e {
        RauzyError::UncertainSplit { .. } => CliError::Horizon(format!("{e}")),
        other => CliError::Usage(format!("{other}")),
    };
    let splits = || -> Result<_, CliError> {
        let a = recurrence_split(&index, level, 4)
            .map_err(|e| CliError::Horizon(format!("{e}")))?;
        let b = recurrence_split(&index, level + 1, 4)
            .map_err(|e| CliError::Horizon(format!("{e}")))?;
        Ok((a, b))
    };
    let (emit_graph, detect_graph, z_start) = if reduced || diff {
        let (a, b) = splits()?;
        let z = b.z_start() as u32;
        let r = reduce(&graph, &a, &b, &index).map_err(map_rauzy_err)?;
        if diff {
            let text = export_dot_with_reduction(&graph, &r);
            return Ok(CommandOutput::clean(text));
        }
        (r.clone(), r, z)
    } else {
        // detection always runs on the reduced graph when certifiable
        match splits() {
            Ok((a, b)) => {
                let z = b.z_start() as u32;
                let r = reduce(&graph, &a, &b, &index).map_err(map_rauzy_err)?;
                (graph, r, z)
            }
            Err(_) => (graph.clone(), graph, 1),
        }
    };
    let outcome = detect_infinity_shape(
        &detect_graph,
        &index,
        &DetectOptions { essential_depth: 0, z_start },
    );
    let config = outcome.config();
    let text = match format {
        GraphFormat::Dot => {
            let mut s = export_dot(&emit_graph);
            s.push_str(&format!(
                "// infinity-shape: {}\n",
                if config.is_some() { "true" } else { "false" }
            ));
            s
        }
        GraphFormat::Json => export::graph_json(&emit_graph, config),
    };
    Ok(CommandOutput::clean(text))
}

/// The full battery of evolution checks on a trace.
fn trace_checks(
    index: &FactorIndex,
    profile: &ComplexityProfile,
    trace: &EvolutionTrace,
    opts: &EvolutionOptions,
) -> Vec<CheckResult> {
    let mut results = check_succession(index, trace);
    results.extend(check_figure8_bounds(trace, profile, &rauzylab_core::bounds::rat(4, 3)));
    for step in &trace.steps {
        if let Some(cert) = step.rho.as_ref().filter(|c| c.in_regime()) {
            results.extend(check_skln_bounds(step, &cert.rho, Strictness::AttainedSup));
            results.extend(check_gain_bounds(step, &cert.rho, Strictness::AttainedSup));
            if let Ok(d) = delta(&cert.rho) {
                results.push(check_witness_window(index, step, &d.value));
            }
        }
        if let Some(case) = &step.tail_case {
            results.extend(check_tail_bounds(index, step, case));
        }
    }
    for n in 1..=opts.n_max.min(profile.n_max.saturating_sub(1)) {
        results.push(check_degree_identity(index, profile, n));
        results.push(check_boundary_bispecial(index, n, opts.guard));
        results.push(check_recurrence_propagation(index, profile, n, opts.guard));
        results.push(check_shape_dichotomy(index, profile, n, opts));
    }
    results
}

pub fn cmd_evolve(
    input: &InputWord,
    horizon: usize,
    n_max: usize,
) -> Result<CommandOutput, CliError> {
    let (index, profile) = build_pipeline(input, horizon, n_max + 2)?;
    let opts = EvolutionOptions { n_max, ..EvolutionOptions::default() };
    let trace = evolution_trace(&index, &profile, &opts);
    let checks = trace_checks(&index, &profile, &trace, &opts);
    let violations = checks.iter().filter(|r| r.status.is_violation()).count();
    let text = export::trace_json(&input.describe(), index.horizon(), &trace, &checks);
    Ok(CommandOutput { text, violations })
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Mh,
    Thm2,
    Lemmas,
    All,
}

impl Suite {
    pub fn parse(s: &str) -> Result<Suite, CliError> {
        Ok(match s {
            "mh" => Suite::Mh,
            "thm2" => Suite::Thm2,
            "lemmas" => Suite::Lemmas,
            "all" => Suite::All,
            other => return Err(CliError::Usage(format!("unknown suite {other:?}"))),
        })
    }
}

fn suite_mh(input: &InputWord, profile: &ComplexityProfile) -> Vec<CheckResult> {
    vec![check_morse_hedlund(profile, input.class(), input.complexity_bound()).result]
}

fn suite_thm2(
    input: &InputWord,
    index: &FactorIndex,
    profile: &ComplexityProfile,
    witness_levels: usize,
) -> (Vec<CheckResult>, Option<String>) {
    let mut results = Vec::new();
    let class = match input.class() {
        PeriodicityClass::Unknown => rauzylab_core::complexity::empirical_class(profile),
        c => c,
    };
    if matches!(class, PeriodicityClass::Periodic | PeriodicityClass::EventuallyPeriodic) {
        results.push(CheckResult::new(
            "repetition-witness",
            0,
            CheckStatus::Skipped,
            String::from("eventually periodic stream: hypothesis not satisfied"),
        ));
        return (results, None);
    }
    let cert = match tail_rho_certificate(profile) {
        Some(c) if c.in_regime() => c,
        _ => {
            results.push(CheckResult::new(
                "repetition-witness",
                0,
                CheckStatus::Skipped,
                String::from("hypothesis range exceeded: saturated slope not below 4/3"),
            ));
            return (results, None);
        }
    };
    let d = delta(&cert.rho).expect("slope in regime");
    match find_repetition_witness(index, &d.value, witness_levels) {
        WitnessOutcome::Found { m, r } => {
            results.push(CheckResult::new(
                "repetition-witness",
                m,
                CheckStatus::Pass,
                format!(
                    "r({m}) = {r} < (1 - {}) {m} at certified slope {} over [{}, {}]",
                    rauzylab_core::bounds::render_exact(&d.value),
                    rauzylab_core::bounds::render_exact(&cert.rho),
                    cert.from,
                    cert.to
                ),
            ));
            // follow the chain into the rational approximation
            let mut approx_doc = None;
            if let Some(witness) = RepetitionWitness::from_repetition(index, m) {
                if let Ok(approx) = rational_from_repetition(index.word(), &witness) {
                    if let Some(source) = input.source() {
                        let probe = (approx.agreement_digits as usize + 40).max(80);
                        if let Ok(report) = verify_approximation(source, &approx, probe) {
                            approx_doc = Some(export::approx_json(&witness, &approx, &report));
                        }
                    }
                    if let Ok(est) = mu_lower_estimate(index, class, witness_levels) {
                        results.push(CheckResult::new(
                            "exponent-estimate",
                            est.at_level,
                            CheckStatus::Pass,
                            format!(
                                "exponent lower estimate {} from r({}) = {}",
                                rauzylab_core::bounds::render_exact(&est.value),
                                est.at_level,
                                est.r
                            ),
                        ));
                    }
                }
            }
            (results, approx_doc)
        }
        WitnessOutcome::NoneAtHorizon => {
            results.push(CheckResult::new(
                "repetition-witness",
                0,
                CheckStatus::Violation,
                format!("no level below the (1 - delta) line within {witness_levels}"),
            ));
            (results, None)
        }
    }
}

fn suite_lemmas(
    index: &FactorIndex,
    profile: &ComplexityProfile,
    n_max: usize,
) -> Vec<CheckResult> {
    let opts = EvolutionOptions { n_max, ..EvolutionOptions::default() };
    let trace = evolution_trace(index, profile, &opts);
    trace_checks(index, profile, &trace, &opts)
}

pub fn cmd_verify(
    input: &InputWord,
    suite: Suite,
    horizon: usize,
    n_max: usize,
) -> Result<CommandOutput, CliError> {
    let (index, profile) = build_pipeline(input, horizon, n_max + 2)?;
    let mut results = Vec::new();
    let mut extra = String::new();
    if matches!(suite, Suite::Mh | Suite::All) {
        results.extend(suite_mh(input, &profile));
    }
    if matches!(suite, Suite::Thm2 | Suite::All) {
        let witness_levels = n_max.max(1000).min(index.horizon().saturating_sub(1));
        let (r, doc) = suite_thm2(input, &index, &profile, witness_levels);
        results.extend(r);
        if let Some(doc) = doc {
            extra = doc;
        }
    }
    if matches!(suite, Suite::Lemmas | Suite::All) {
        results.extend(suite_lemmas(&index, &profile, n_max));
    }
    let violations = results.iter().filter(|r| r.status.is_violation()).count();
    let mut text = format!(
        "verify {} on {} (horizon {}, levels <= {})\n",
        match suite {
            Suite::Mh => "mh",
            Suite::Thm2 => "thm2",
            Suite::Lemmas => "lemmas",
            Suite::All => "all",
        },
        input.describe(),
        index.horizon(),
        n_max
    );
    text.push_str(&export::report_lines(&results));
    text.push_str(&extra);
    text.push_str(&format!(
        "summary: {} checks, {} violations\n",
        results.len(),
        violations
    ));
    Ok(CommandOutput { text, violations })
}

pub fn parse_rational(s: &str) -> Result<Rat, CliError> {
    let err = || CliError::Usage(format!("cannot parse rational {s:?}"));
    if let Some((num, den)) = s.split_once('/') {
        let n: i64 = num.trim().parse().map_err(|_| err())?;
        let d: i64 = den.trim().parse().map_err(|_| err())?;
        if d == 0 {
            return Err(err());
        }
        return Ok(rauzylab_core::bounds::rat(n, d));
    }
    if let Some((int_part, frac)) = s.split_once('.') {
        let neg = int_part.starts_with('-');
        let int_digits = int_part.trim_start_matches(['-', '+']);
        let scale = 10i64.checked_pow(frac.len() as u32).ok_or_else(err)?;
        let i: i64 =
            if int_digits.is_empty() { 0 } else { int_digits.parse().map_err(|_| err())? };
        let f: i64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| err())? };
        let magnitude = i * scale + f;
        return Ok(rauzylab_core::bounds::rat(if neg { -magnitude } else { magnitude }, scale));
    }
    let n: i64 = s.trim().parse().map_err(|_| err())?;
    Ok(rauzylab_core::bounds::rat_int(n))
}

pub fn cmd_bounds(
    curve: &str,
    at: Option<&str>,
    from: Option<&str>,
    to: Option<&str>,
    step: Option<&str>,
    digits: u32,
) -> Result<CommandOutput, CliError> {
    let curve = CurveId::from_name(curve)
        .ok_or_else(|| CliError::Usage(format!("unknown curve {curve:?}")))?;
    let points = if let Some(at) = at {
        let p = parse_rational(at)?;
        curve_table(curve, &p, &p, &rauzylab_core::bounds::rat_int(1), digits)
    } else {
        let (from, to, step) = match (from, to, step) {
            (Some(f), Some(t), Some(s)) => (parse_rational(f)?, parse_rational(t)?, parse_rational(s)?),
            _ => {
                return Err(CliError::Usage(String::from(
                    "bounds needs either --at or all of --from/--to/--step",
                )))
            }
        };
        curve_table(curve, &from, &to, &step, digits)
    }
    .map_err(|e| CliError::Usage(format!("{e}")))?;
    Ok(CommandOutput::clean(export::bounds_csv(&points)))
}
