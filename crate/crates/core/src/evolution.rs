//! Evolution of ∞-shape configurations across levels.
//!
//! When the reduced Rauzy graph at level n has configuration (w, U, V) with
//! multiplicity b, the next ∞-shape level is n + |U|_n and its configuration
//! is (U, UU, UV^bU) or (U, UV^bU, UU). The trace records every detected
//! step with its recurrence data; the checkers then verify the succession
//! law, the cycle-length and recurrence-time budgets, the nine-way
//! classification of the recurrent tail, and the existence of repetition
//! witnesses below the (1 - δ) line.
//!
//! Slope hypotheses are certified from the saturated range only, as the
//! attained maximum ρ̂ of p(m)/m. Suite checks treat equality at ρ̂ as
//! satisfied (`Tight`), since the strict form holds for every admissible
//! slope above the attained supremum; the standalone checkers with a
//! user-supplied ρ are strict.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::One;

use crate::bounds::{delta, rat, rat_int, Rat};
use crate::complexity::{
    recurrence_split, rho_certificate, suffix_complexity, ComplexityProfile, RecurrenceSplit,
    RhoCert,
};
use crate::index::FactorIndex;
use crate::rauzy::{
    build_rauzy, classify_special, detect_infinity_shape, reduce, CyclePath, DetectOptions,
    InfinityConfig, InfinityOutcome,
};
use crate::report::{CheckResult, CheckStatus};
use crate::word::Letter;

fn rat_u(x: usize) -> Rat {
    rat_int(x as i64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    /// successor special cycle is UU: k stays, l grows to k + b*l
    KeepK,
    /// successor special cycle is UV^bU: k grows to k + b*l, l becomes k
    GrowK,
}

#[derive(Clone, Debug)]
pub struct SuccessorCandidate {
    pub orientation: Orientation,
    pub level: usize,
    pub w: Vec<Letter>,
    pub special_spelled: Vec<Letter>,
    pub other_spelled: Vec<Letter>,
    pub k: usize,
    pub l: usize,
}

/// Spells the concatenation of return cycles (paths sharing the endpoint w).
fn spell_cycles(parts: &[&CyclePath]) -> Vec<Letter> {
    let mut out = Vec::new();
    for (i, p) in parts.iter().enumerate() {
        if i + 1 == parts.len() {
            out.extend_from_slice(&p.spelled);
        } else {
            out.extend_from_slice(&p.spelled[..p.len_at_level()]);
        }
    }
    out
}

/// The two candidate successor configurations of a step.
pub fn predict_successor(cfg: &InfinityConfig) -> [SuccessorCandidate; 2] {
    let (k, l, b) = (cfg.k(), cfg.l(), cfg.multiplicity as usize);
    let u = &cfg.special;
    let v = &cfg.other;
    let uu = spell_cycles(&[u, u]);
    let mut uvbu_parts: Vec<&CyclePath> = vec![u];
    for _ in 0..b {
        uvbu_parts.push(v);
    }
    uvbu_parts.push(u);
    let uvbu = spell_cycles(&uvbu_parts);
    let w = u.spelled.clone();
    [
        SuccessorCandidate {
            orientation: Orientation::KeepK,
            level: cfg.level + k,
            w: w.clone(),
            special_spelled: uu.clone(),
            other_spelled: uvbu.clone(),
            k,
            l: k + b * l,
        },
        SuccessorCandidate {
            orientation: Orientation::GrowK,
            level: cfg.level + k,
            w,
            special_spelled: uvbu,
            other_spelled: uu,
            k: k + b * l,
            l: k,
        },
    ]
}

#[derive(Clone, Debug)]
pub struct EvolutionStep {
    pub n: usize,
    pub config: InfinityConfig,
    pub k: usize,
    pub l: usize,
    pub b: u32,
    /// s_{n+1}; always present and certain (the reduction needed it)
    pub split_next: RecurrenceSplit,
    /// s_{n+k+1}
    pub split_after_k: Option<RecurrenceSplit>,
    /// s_{n+(b-1)l+2}
    pub split_slope: Option<RecurrenceSplit>,
    /// slope certificate over [n, saturated end]
    pub rho: Option<RhoCert>,
    /// orientation taken relative to the previous step
    pub orientation: Option<Orientation>,
    pub tail_case: Option<TailCase>,
}

impl EvolutionStep {
    fn s_after_k(&self) -> Option<u64> {
        self.split_after_k.as_ref().filter(|s| s.certain).map(|s| s.s as u64)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CycleClass {
    /// The tail of the trace keeps a cycle of constant length k with
    /// multiplicity 1; `onset` is the first level of the constant tail.
    BoundedCycles { k: usize, onset: usize },
    Unbounded,
    Undetermined { reason: String },
}

#[derive(Clone, Debug)]
pub struct EvolutionTrace {
    pub steps: Vec<EvolutionStep>,
    pub classification: CycleClass,
    /// Set when the saturated slope exceeds 4/3 (machinery is vacuous).
    pub hypothesis_warning: Option<String>,
    /// Set when certification stopped the scan before n_max.
    pub truncated: Option<String>,
}

pub struct EvolutionOptions {
    pub n_max: usize,
    /// recurrence split guard factor
    pub guard: usize,
    /// essential right-special chain depth (0 = automatic)
    pub essential_depth: usize,
    /// how many growth events / stable tail steps classification requires
    pub classify_threshold: usize,
}

impl Default for EvolutionOptions {
    fn default() -> Self {
        EvolutionOptions { n_max: 40, guard: 4, essential_depth: 0, classify_threshold: 2 }
    }
}

/// Scans levels 1..=n_max for ∞-shape reduced graphs and assembles the
/// evolution trace.
pub fn evolution_trace(
    index: &FactorIndex,
    profile: &ComplexityProfile,
    opts: &EvolutionOptions,
) -> EvolutionTrace {
    let mut steps: Vec<EvolutionStep> = Vec::new();
    let mut truncated = None;

    let hypothesis_warning = match crate::complexity::tail_rho_certificate(profile) {
        Some(_) => None,
        None => Some(String::from(
            "hypothesis range exceeded: no saturated tail with slope below 4/3",
        )),
    };

    let sat_end = profile.saturated_prefix_end();
    'levels: for n in 1..=opts.n_max.min(profile.n_max.saturating_sub(1)) {
        if n + 1 > sat_end {
            truncated = Some(format!("level {n} not saturated at this horizon"));
            break;
        }
        let split_n = match recurrence_split(index, n, opts.guard) {
            Ok(s) => s,
            Err(e) => {
                truncated = Some(format!("{e}"));
                break;
            }
        };
        let split_next = match recurrence_split(index, n + 1, opts.guard) {
            Ok(s) => s,
            Err(e) => {
                truncated = Some(format!("{e}"));
                break;
            }
        };
        if !split_n.certain || !split_next.certain {
            truncated = Some(format!("recurrence split uncertain at level {n}"));
            break;
        }
        let graph = match build_rauzy(index, n) {
            Ok(g) => g,
            Err(e) => {
                truncated = Some(format!("{e}"));
                break;
            }
        };
        let reduced = match reduce(&graph, &split_n, &split_next, index) {
            Ok(g) => g,
            Err(e) => {
                truncated = Some(format!("{e}"));
                break;
            }
        };
        let detect_opts = DetectOptions {
            essential_depth: opts.essential_depth,
            z_start: split_next.z_start() as u32,
        };
        match detect_infinity_shape(&reduced, index, &detect_opts) {
            InfinityOutcome::Shape(config) => {
                let k = config.k();
                let l = config.l();
                let b = config.multiplicity;
                let split_after_k = recurrence_split(index, n + k + 1, opts.guard).ok();
                let slope_level = n + (b as usize - 1) * l + 2;
                let split_slope = recurrence_split(index, slope_level, opts.guard).ok();
                let rho = rho_certificate(profile, n);
                let orientation = steps.last().and_then(|prev: &EvolutionStep| {
                    let cands = predict_successor(&prev.config);
                    cands
                        .iter()
                        .find(|c| {
                            c.level == n && c.special_spelled == config.special.spelled
                        })
                        .map(|c| c.orientation)
                });
                let mut step = EvolutionStep {
                    n,
                    config,
                    k,
                    l,
                    b,
                    split_next,
                    split_after_k,
                    split_slope,
                    rho,
                    orientation,
                    tail_case: None,
                };
                step.tail_case = classify_tail(index, &step).ok();
                steps.push(step);
            }
            InfinityOutcome::NotShape(_) => {}
            InfinityOutcome::AmbiguousSpecialCycle { depth } => {
                truncated = Some(format!(
                    "special cycle ambiguous at level {n} (chain depth {depth})"
                ));
                break 'levels;
            }
            InfinityOutcome::Undetermined(reason) => {
                truncated = Some(format!("level {n}: {reason}"));
                break 'levels;
            }
        }
    }

    let classification = classify_cycles(&steps, opts.classify_threshold);
    EvolutionTrace { steps, classification, hypothesis_warning, truncated }
}

/// Bounded/unbounded cycle classification over the certified steps.
pub fn classify_cycles(steps: &[EvolutionStep], threshold: usize) -> CycleClass {
    if steps.len() < 3 {
        return CycleClass::Undetermined {
            reason: format!("only {} certified steps", steps.len()),
        };
    }
    let t = threshold.max(1);
    // stable tail: constant k with multiplicity 1 over the last t+1 steps
    let tail = &steps[steps.len().saturating_sub(t + 1)..];
    if tail.len() == t + 1
        && tail.iter().all(|s| s.k == tail[0].k && s.b == 1)
        && steps.len() >= t + 1
    {
        // extend the constant run backwards to report its onset
        let k = tail[0].k;
        let mut onset = steps.len() - tail.len();
        while onset > 0 && steps[onset - 1].k == k && steps[onset - 1].b == 1 {
            onset -= 1;
        }
        return CycleClass::BoundedCycles { k, onset: steps[onset].n };
    }
    let mut growth = 0usize;
    for pair in steps.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if b.n != a.n + a.k {
            continue; // chain break; succession checker reports it
        }
        if b.k > a.k && b.k == a.k + a.b as usize * a.l && b.l == a.k {
            growth += 1;
        }
    }
    if growth >= t {
        CycleClass::Unbounded
    } else {
        CycleClass::Undetermined {
            reason: format!("{growth} growth events, {t} required, and no stable tail"),
        }
    }
}

/// Succession checks between consecutive steps:
/// the measured successor must be one of the two predicted candidates,
/// the tail complexity at level n+(b-1)l+1 must equal k+(2b-1)l,
/// the recurrence prefix must stabilize between levels n+(b-1)l+2 and
/// n+k+1, and s-jumps (k < l, b = 1) must follow the V-suffix pattern.
pub fn check_succession(
    index: &FactorIndex,
    trace: &EvolutionTrace,
) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for i in 0..trace.steps.len() {
        let step = &trace.steps[i];
        let (n, k, l, b) = (step.n, step.k, step.l, step.b as usize);

        if let Some(next) = trace.steps.get(i + 1) {
            let cands = predict_successor(&step.config);
            if next.n != n + k {
                out.push(CheckResult::new(
                    "succession",
                    n,
                    CheckStatus::Violation,
                    format!("next shape at {} instead of {}", next.n, n + k),
                ));
            } else {
                let matched = cands.iter().find(|c| {
                    c.w == next.config.w
                        && c.special_spelled == next.config.special.spelled
                        && c.other_spelled == next.config.other.spelled
                        && c.k == next.k
                        && c.l == next.l
                });
                match matched {
                    Some(c) => out.push(CheckResult::new(
                        "succession",
                        n,
                        CheckStatus::Pass,
                        format!(
                            "successor at {} matches candidate {:?} with (k, l) = ({}, {})",
                            next.n, c.orientation, next.k, next.l
                        ),
                    )),
                    None => out.push(CheckResult::new(
                        "succession",
                        n,
                        CheckStatus::Violation,
                        format!("successor at {} matches neither candidate", next.n),
                    )),
                }
            }
        }

        // tail complexity: p(n+(b-1)l+1, z_{n+k+1}) = k + (2b-1)l
        let level = n + (b - 1) * l + 1;
        match step.s_after_k() {
            Some(s) if level < index.horizon() => {
                let got = suffix_complexity(index, level, s as u32);
                let want = (k + (2 * b - 1) * l) as u64;
                let status = if got == want { CheckStatus::Pass } else { CheckStatus::Violation };
                out.push(CheckResult::new(
                    "successor-complexity",
                    n,
                    status,
                    format!("p({level}, z_{}) = {got}, expected {want}", n + k + 1),
                ));
            }
            _ => out.push(CheckResult::new(
                "successor-complexity",
                n,
                CheckStatus::Skipped,
                String::from("s_{n+k+1} not certified at this horizon"),
            )),
        }

        // s-value stability between the two levels
        match (&step.split_slope, &step.split_after_k) {
            (Some(a), Some(c)) if a.certain && c.certain => {
                let status = if a.s == c.s { CheckStatus::Pass } else { CheckStatus::Violation };
                out.push(CheckResult::new(
                    "s-stability",
                    n,
                    status,
                    format!("s_{} = {}, s_{} = {}", a.n, a.s, c.n, c.s),
                ));
            }
            _ => out.push(CheckResult::new(
                "s-stability",
                n,
                CheckStatus::Skipped,
                String::from("split uncertain at this horizon"),
            )),
        }

        // jump pattern for k < l, b = 1, s_{n+1} < s_{n+k+1}
        let s1 = &step.split_next;
        match &step.split_after_k {
            Some(sk) if sk.certain && b == 1 && k < l && s1.s < sk.s => {
                out.push(check_s_jump(index, step, sk));
            }
            _ => out.push(CheckResult::new(
                "s-jump",
                n,
                CheckStatus::Skipped,
                String::from("vacuous: needs k < l, b = 1 and a strict s-jump"),
            )),
        }
    }
    out
}

/// Verifies the jump pattern: z_{n+1} = V_i V U ..., z_{n+k+1} = V U ...,
/// with the jump equal to the length of the V-suffix V_i.
fn check_s_jump(index: &FactorIndex, step: &EvolutionStep, sk: &RecurrenceSplit) -> CheckResult {
    let n = step.n;
    let l = step.l;
    let jump = (sk.s - step.split_next.s) as usize;
    if jump >= l {
        return CheckResult::new(
            "s-jump",
            n,
            CheckStatus::Violation,
            format!("jump {jump} not expressible as a proper V-suffix (l = {l})"),
        );
    }
    let i = l - jump;
    let v = &step.config.other;
    let u = &step.config.special;
    // expected prefix of z_{n+1}: sigma[i..] sigma tau_U ... as letters
    let sigma = &v.spelled[..l];
    let mut expected: Vec<Letter> = Vec::new();
    expected.extend_from_slice(&sigma[i..]);
    expected.extend_from_slice(sigma);
    expected.extend_from_slice(&u.spelled);
    let z1 = &index.word().letters()[step.split_next.s as usize..];
    let ok1 = z1.len() >= expected.len() && z1[..expected.len()] == expected[..];
    // expected prefix of z_{n+k+1}: V U ...
    let mut expected2: Vec<Letter> = Vec::new();
    expected2.extend_from_slice(sigma);
    expected2.extend_from_slice(&u.spelled);
    let z2 = &index.word().letters()[sk.s as usize..];
    let ok2 = z2.len() >= expected2.len() && z2[..expected2.len()] == expected2[..];
    if ok1 && ok2 {
        CheckResult::new(
            "s-jump",
            n,
            CheckStatus::Pass,
            format!("jump {jump} matches the V-suffix of length {jump} at index {i}"),
        )
    } else {
        CheckResult::new(
            "s-jump",
            n,
            CheckStatus::Violation,
            format!("tails do not match the V-suffix pattern (jump {jump})"),
        )
    }
}

/// Whether inequality checks treat the supplied slope as a strict bound or
/// as the attained supremum of the certified window.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strictness {
    /// The hypothesis p(m)/m < rho holds strictly: equality in a
    /// conclusion is a violation.
    Strict,
    /// rho is the attained maximum of p(m)/m: conclusions hold in closed
    /// form, so equality is reported as `Tight`, not a violation.
    AttainedSup,
}

fn verdict(lhs: &Rat, rhs: &Rat, strictness: Strictness) -> CheckStatus {
    if lhs < rhs {
        CheckStatus::Pass
    } else if lhs == rhs && strictness == Strictness::AttainedSup {
        CheckStatus::Tight
    } else {
        CheckStatus::Violation
    }
}

/// Cycle-length budgets at a step: k + (2b+1)/3 l < rho (n+1) and
/// 2 s_{n+k+1} + k + (2b-1) l < rho n / (2 - rho).
pub fn check_skln_bounds(
    step: &EvolutionStep,
    rho: &Rat,
    strictness: Strictness,
) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let (n, k, l, b) = (step.n, step.k, step.l, step.b as usize);
    if *rho >= rat(4, 3) || *rho < Rat::one() {
        out.push(CheckResult::new(
            "cycle-budget",
            n,
            CheckStatus::Skipped,
            format!("slope {rho} outside [1, 4/3)"),
        ));
        return out;
    }
    let lhs = rat_u(k) + rat(2 * b as i64 + 1, 3) * rat_u(l);
    let rhs = rho * rat_u(n + 1);
    out.push(CheckResult::new(
        "cycle-budget",
        n,
        verdict(&lhs, &rhs, strictness),
        format!("k + (2b+1)/3 l = {lhs} vs rho (n+1) = {rhs}"),
    ));
    match step.s_after_k() {
        Some(s) => {
            let lhs = rat_int(2 * s as i64) + rat_u(k) + rat_u((2 * b - 1) * l);
            let rhs = rho * rat_u(n) / (rat_int(2) - rho);
            out.push(CheckResult::new(
                "recurrence-budget",
                n,
                verdict(&lhs, &rhs, strictness),
                format!("2s + k + (2b-1)l = {lhs} vs rho n/(2-rho) = {rhs}"),
            ));
        }
        None => out.push(CheckResult::new(
            "recurrence-budget",
            n,
            CheckStatus::Skipped,
            String::from("s_{n+k+1} not certified"),
        )),
    }
    out
}

/// The (1 - δ) gain bounds at a step. Applicable once the non-special
/// cycle has length at least 3 (the small-cycle regime is reported as
/// skipped, matching the "n large enough" hypothesis).
pub fn check_gain_bounds(
    step: &EvolutionStep,
    rho: &Rat,
    strictness: Strictness,
) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let (n, k, l, b) = (step.n, step.k, step.l, step.b as usize);
    if *rho >= rat(4, 3) || *rho < Rat::one() {
        out.push(CheckResult::new(
            "gain-bound-direct",
            n,
            CheckStatus::Skipped,
            format!("slope {rho} outside [1, 4/3)"),
        ));
        return out;
    }
    if l < 3 {
        out.push(CheckResult::new(
            "gain-bound-direct",
            n,
            CheckStatus::Skipped,
            format!("non-special cycle too short (l = {l} < 3)"),
        ));
        return out;
    }
    let s = match step.s_after_k() {
        Some(s) => s,
        None => {
            out.push(CheckResult::new(
                "gain-bound-direct",
                n,
                CheckStatus::Skipped,
                String::from("s_{n+k+1} not certified"),
            ));
            return out;
        }
    };
    let d = delta(rho).expect("slope in domain").value;
    let one_minus = Rat::one() - d;
    let s_rat = rat_int(s as i64);

    let lhs = &s_rat + rat_u(2 * k + b * l);
    let rhs = &one_minus * rat_u(n + 2 * k + b * l);
    out.push(CheckResult::new(
        "gain-bound-direct",
        n,
        verdict(&lhs, &rhs, strictness),
        format!("s + 2k + bl = {lhs} vs (1-d)(n + 2k + bl) = {rhs}"),
    ));

    // for every suffix length k' of U, one of the two split bounds holds
    let mut first_bad = None;
    let mut tight = false;
    for kp in 0..k {
        let lhs_a = &s_rat + rat_u(2 * k + b * l);
        let rhs_a = &one_minus * rat_u(n + k + b * l + kp);
        let lhs_b = &s_rat + rat_u(2 * k + b * l + kp);
        let rhs_b = &one_minus * rat_u(n + 2 * k);
        let va = verdict(&lhs_a, &rhs_a, strictness);
        let vb = verdict(&lhs_b, &rhs_b, strictness);
        match (va, vb) {
            (CheckStatus::Violation, CheckStatus::Violation) => {
                first_bad = Some(kp);
                break;
            }
            (CheckStatus::Pass, _) | (_, CheckStatus::Pass) => {}
            _ => tight = true,
        }
    }
    let status = match first_bad {
        Some(_) => CheckStatus::Violation,
        None if tight => CheckStatus::Tight,
        None => CheckStatus::Pass,
    };
    out.push(CheckResult::new(
        "gain-bound-split",
        n,
        status,
        match first_bad {
            Some(kp) => format!("both split bounds fail at k' = {kp}"),
            None => format!("split bounds hold for all k' in 0..{k}"),
        },
    ));

    if l < k {
        let lhs = &s_rat + rat_u(2 * k + b * l);
        let rhs = &one_minus * rat_u(n + 2 * k);
        out.push(CheckResult::new(
            "gain-bound-short-v",
            n,
            verdict(&lhs, &rhs, strictness),
            format!("s + 2k + bl = {lhs} vs (1-d)(n + 2k) = {rhs}"),
        ));
    }
    out
}

/// Cycle-shape constraints tied to the multiplicity: a single observed
/// power per configuration, and k >= (2b-3)l + 4 when b >= 2
/// (k >= max(1, 4 - l) in the b = 1 instantiation).
pub fn check_figure8_bounds(
    trace: &EvolutionTrace,
    profile: &ComplexityProfile,
    rho_limit: &Rat,
) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for step in &trace.steps {
        let n = step.n;
        // hypothesis: p(m)/m <= 4/3 for m > n, certified on the window
        let certified = rho_certificate(profile, n + 1)
            .map_or(false, |c| c.rho <= *rho_limit);
        let weaken = |s: CheckStatus| {
            if certified {
                s
            } else {
                CheckStatus::Conditional
            }
        };

        let extras = step.config.extra_powers();
        let status = if extras.is_empty() { CheckStatus::Pass } else { CheckStatus::Violation };
        let detail = if extras.is_empty() {
            format!("single observed multiplicity {}", step.b)
        } else {
            let witnesses: Vec<String> = step
                .config
                .observed_powers
                .iter()
                .filter(|(p, _)| **p > 0)
                .map(|(p, pos)| format!("power {p} first at position {pos}"))
                .collect();
            format!("multiple powers observed: {}", witnesses.join("; "))
        };
        // a genuine violation stays a violation even without certification
        let status = if status == CheckStatus::Pass { weaken(status) } else { status };
        out.push(CheckResult::new("multiplicity-unique", n, status, detail));

        let (k, l, b) = (step.k as i64, step.l as i64, step.b as i64);
        let bound = if b >= 2 { (2 * b - 3) * l + 4 } else { (4 - l).max(1) };
        // the length bound is only asserted under the certified slope
        // hypothesis; outside it the verdict is conditional either way
        let status = match (k >= bound, certified) {
            (true, true) => CheckStatus::Pass,
            (false, true) => CheckStatus::Violation,
            (_, false) => CheckStatus::Conditional,
        };
        out.push(CheckResult::new(
            "special-cycle-length",
            n,
            status,
            format!("k = {k} vs (2b-3)l + 4 = {bound} (b = {b})"),
        ));
    }
    out
}

/// The nine-way classification of the recurrent tail z_{n+k+1}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailCase {
    pub case_id: u8,
    /// |U'| for cases 1-7 (0 when the tail starts at w)
    pub k_prime: usize,
    /// |V'| for cases 8-9
    pub l_prime: usize,
    /// leading V-power for cases 8-9 (0 <= c < b)
    pub c: u32,
    /// implied repetition bounds (level m, bound); two entries for the
    /// double-bounded cases
    pub bounds: Vec<(usize, u64)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TailError {
    UncertainSplit,
    InsufficientHorizon,
    Inconsistent(String),
}

impl core::fmt::Display for TailError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            TailError::UncertainSplit => write!(f, "recurrence split uncertain"),
            TailError::InsufficientHorizon => write!(f, "tail too short to disambiguate"),
            TailError::Inconsistent(m) => write!(f, "tail inconsistent with the configuration: {m}"),
        }
    }
}

/// Walks the stream from a w-position, emitting one boolean per traversed
/// cycle (true = special), up to `max_tokens`.
fn walk_tokens(
    index: &FactorIndex,
    cfg: &InfinityConfig,
    start_pos: usize,
    max_tokens: usize,
) -> Result<Vec<bool>, TailError> {
    let n = cfg.level;
    let text = index.word().letters();
    let horizon = index.horizon();
    let special_letter = cfg.special.step_letter(0);
    let other_letter = cfg.other.step_letter(0);
    let mut tokens = Vec::new();
    let mut pos = start_pos;
    while tokens.len() < max_tokens {
        if pos + n > horizon {
            break;
        }
        let c = text[pos - 1 + n];
        let cycle = if c == special_letter {
            &cfg.special
        } else if c == other_letter {
            &cfg.other
        } else {
            return Err(TailError::Inconsistent(format!(
                "stream leaves the two cycles at position {pos}"
            )));
        };
        let span = cycle.len_at_level();
        if pos + span + n - 1 > horizon {
            break;
        }
        for step in 1..span {
            if text[pos - 1 + n + step] != cycle.step_letter(step) {
                return Err(TailError::Inconsistent(format!(
                    "stream deviates from a cycle at position {}",
                    pos + step
                )));
            }
        }
        tokens.push(c == special_letter);
        pos += span;
    }
    Ok(tokens)
}

/// Classifies the decomposition of z_{n+k+1} over the blocks UU and UV^bU,
/// with a head that is a suffix of U or of V, into the nine tail cases.
pub fn classify_tail(index: &FactorIndex, step: &EvolutionStep) -> Result<TailCase, TailError> {
    let split = step
        .split_after_k
        .as_ref()
        .filter(|s| s.certain)
        .ok_or(TailError::UncertainSplit)?;
    let cfg = &step.config;
    let (n, k, l, b) = (step.n, step.k, step.l, step.b as u64);
    let s = split.s as u64;
    let horizon = index.horizon();
    let z_start = split.z_start();
    if z_start + n > horizon {
        return Err(TailError::InsufficientHorizon);
    }
    let v0 = index.window(z_start, n);

    // locate the start vertex: w itself, inside U, or inside V
    enum Head {
        AtW,
        InU { k_prime: usize },
        InV { l_prime: usize },
    }
    let head = if v0 == cfg.w.as_slice() {
        Head::AtW
    } else if let Some(i) = (1..k).find(|&i| cfg.special.vertices[i] == v0) {
        Head::InU { k_prime: k - i }
    } else if let Some(j) = (1..l).find(|&j| cfg.other.vertices[j] == v0) {
        Head::InV { l_prime: l - j }
    } else {
        return Err(TailError::Inconsistent(String::from(
            "tail starts outside the two cycles",
        )));
    };

    // traverse the head suffix to the first w, verifying the letters
    let text = index.word().letters();
    let (w_pos, k_prime, l_prime) = match head {
        Head::AtW => (z_start, 0, 0),
        Head::InU { k_prime } => {
            let i = k - k_prime;
            for t in 0..k_prime {
                if z_start + n - 1 + t >= horizon {
                    return Err(TailError::InsufficientHorizon);
                }
                if text[z_start - 1 + n + t] != cfg.special.step_letter(i + t) {
                    return Err(TailError::Inconsistent(String::from(
                        "head deviates from the special cycle",
                    )));
                }
            }
            (z_start + k_prime, k_prime, 0)
        }
        Head::InV { l_prime } => {
            let j = l - l_prime;
            for t in 0..l_prime {
                if z_start + n - 1 + t >= horizon {
                    return Err(TailError::InsufficientHorizon);
                }
                if text[z_start - 1 + n + t] != cfg.other.step_letter(j + t) {
                    return Err(TailError::Inconsistent(String::from(
                        "head deviates from the non-special cycle",
                    )));
                }
            }
            (z_start + l_prime, 0, l_prime)
        }
    };
    let head_in_v = matches!(head, Head::InV { .. });

    let max_tokens = 3 * b as usize + 8;
    let tokens = walk_tokens(index, cfg, w_pos, max_tokens)?;
    // leading power of V before the first U
    let c0 = tokens.iter().take_while(|&&t| !t).count() as u64;
    let after: Vec<bool> = tokens.iter().copied().skip(c0 as usize + 1).collect();
    if tokens.len() <= c0 as usize {
        return Err(TailError::InsufficientHorizon);
    }

    let need = |idx: usize| -> Result<bool, TailError> {
        after.get(idx).copied().ok_or(TailError::InsufficientHorizon)
    };
    let expect_power = |from: usize| -> Result<usize, TailError> {
        // counts the V-power starting at `after[from]` and checks it is b
        let mut c = 0usize;
        let mut i = from;
        loop {
            match after.get(i) {
                Some(false) => {
                    c += 1;
                    i += 1;
                }
                Some(true) => break,
                None => return Err(TailError::InsufficientHorizon),
            }
        }
        Ok(c)
    };

    let kp = k_prime as u64;
    let lp = l_prime as u64;
    let (case_id, c, bounds): (u8, u32, Vec<(usize, u64)>) = if head_in_v || (0 < c0 && c0 < b) {
        // cases 8-9: V' V^c U then U or V^b U
        if c0 >= b {
            return Err(TailError::Inconsistent(format!(
                "leading power {c0} not below the multiplicity {b}"
            )));
        }
        if need(0)? {
            (8, c0 as u32, vec![(n + k, s + k as u64 + c0 * l as u64 + lp)])
        } else {
            (9, c0 as u32, vec![(
                n + k + (c0 as usize) * l + l_prime,
                s + k as u64 + b * l as u64,
            )])
        }
    } else if c0 == 0 {
        // cases 1-4: U' U then U / V^b U ...
        if need(0)? {
            (1, 0, vec![(n + k + k_prime, s + k as u64)])
        } else {
            let p = expect_power(0)?;
            if p as u64 != b {
                return Err(TailError::Inconsistent(format!(
                    "inner power {p} differs from the multiplicity {b}"
                )));
            }
            let after_u = 1 + p; // index just past the U closing the power
            if need(after_u)? {
                if need(after_u + 1)? {
                    (2, 0, vec![
                        (n + k_prime, s + k as u64),
                        (n + 2 * k, s + 2 * k as u64 + b * l as u64 + kp),
                    ])
                } else {
                    (3, 0, vec![(
                        n + 2 * k + (b as usize) * l + k_prime,
                        s + 2 * k as u64 + b * l as u64,
                    )])
                }
            } else {
                (4, 0, vec![(
                    n + 2 * k + (b as usize) * l,
                    s + k as u64 + b * l as u64 + kp,
                )])
            }
        }
    } else {
        // c0 == b: cases 5-7: U' V^b U then ...
        if c0 > b {
            return Err(TailError::Inconsistent(format!(
                "leading power {c0} exceeds the multiplicity {b}"
            )));
        }
        if need(0)? {
            if need(1)? {
                (5, 0, vec![(n + 2 * k, s + k as u64 + b * l as u64 + kp)])
            } else {
                (6, 0, vec![
                    (n + (b as usize - 1) * l, s + l as u64 + kp),
                    (n + k + (b as usize) * l + k_prime, s + 2 * k as u64 + b * l as u64),
                ])
            }
        } else {
            (7, 0, vec![(
                n + k + (b as usize) * l + k_prime,
                s + k as u64 + b * l as u64,
            )])
        }
    };

    Ok(TailCase { case_id, k_prime, l_prime, c, bounds })
}

/// Confirms a tail case's implied repetition bounds against the measured
/// repetition function.
pub fn check_tail_bounds(
    index: &FactorIndex,
    step: &EvolutionStep,
    case: &TailCase,
) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for &(m, bound) in &case.bounds {
        if m == 0 {
            continue;
        }
        match index.repetition(m) {
            Ok(Some(r)) => {
                let status =
                    if r as u64 <= bound { CheckStatus::Pass } else { CheckStatus::Violation };
                out.push(CheckResult::new(
                    "tail-case-bound",
                    step.n,
                    status,
                    format!("case {}: r({m}) = {r} vs bound {bound}", case.case_id),
                ));
            }
            Ok(None) => out.push(CheckResult::new(
                "tail-case-bound",
                step.n,
                CheckStatus::Skipped,
                format!("case {}: r({m}) undefined at horizon", case.case_id),
            )),
            Err(_) => out.push(CheckResult::new(
                "tail-case-bound",
                step.n,
                CheckStatus::Skipped,
                format!("case {}: level {m} beyond horizon", case.case_id),
            )),
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessOutcome {
    Found { m: usize, r: u32 },
    NoneAtHorizon,
}

/// First level m <= n_max with r(m) < (1 - delta) m.
pub fn find_repetition_witness(
    index: &FactorIndex,
    delta_value: &Rat,
    n_max: usize,
) -> WitnessOutcome {
    let n_max = n_max.min(index.horizon().saturating_sub(1));
    let agg = index.level_aggregates(n_max);
    let one_minus = Rat::one() - delta_value;
    for m in 1..=n_max {
        if let Some(r) = agg.repetition(m) {
            if rat_int(r as i64) < &one_minus * rat_u(m) {
                return WitnessOutcome::Found { m, r };
            }
        }
    }
    WitnessOutcome::NoneAtHorizon
}

/// For steps with k > l (and l >= 3), a witness level must exist in the
/// window [n, n + 3k + bl).
pub fn check_witness_window(
    index: &FactorIndex,
    step: &EvolutionStep,
    delta_value: &Rat,
) -> CheckResult {
    let (n, k, l, b) = (step.n, step.k, step.l, step.b as usize);
    if k <= l || l < 3 {
        return CheckResult::new(
            "witness-window",
            n,
            CheckStatus::Skipped,
            format!("needs k > l >= 3, have (k, l) = ({k}, {l})"),
        );
    }
    let one_minus = Rat::one() - delta_value;
    let hi = (n + 3 * k + b * l).min(index.horizon().saturating_sub(1) + 1);
    for m in n..hi {
        if let Ok(Some(r)) = index.repetition(m) {
            if rat_int(r as i64) < &one_minus * rat_u(m) {
                return CheckResult::new(
                    "witness-window",
                    n,
                    CheckStatus::Pass,
                    format!("r({m}) = {r} < (1-d) {m}"),
                );
            }
        }
    }
    CheckResult::new(
        "witness-window",
        n,
        CheckStatus::Violation,
        format!("no witness in [{n}, {})", n + 3 * k + b * l),
    )
}

/// Degree identity on saturated levels: the complexity increment equals
/// the excess out-degree over the right-special vertices.
pub fn check_degree_identity(
    index: &FactorIndex,
    profile: &ComplexityProfile,
    n: usize,
) -> CheckResult {
    if n + 1 > profile.n_max || !profile.saturated[n] || !profile.saturated[n + 1] {
        return CheckResult::new(
            "degree-identity",
            n,
            CheckStatus::Skipped,
            String::from("level not saturated"),
        );
    }
    let graph = match build_rauzy(index, n) {
        Ok(g) => g,
        Err(e) => {
            return CheckResult::new("degree-identity", n, CheckStatus::Skipped, format!("{e}"))
        }
    };
    let sets = classify_special(&graph);
    let excess: u64 = sets
        .right
        .iter()
        .map(|&v| graph.out_degree(v) as u64 - 1)
        .sum();
    let increment = profile.p[n + 1] as i64 - profile.p[n] as i64;
    if increment == excess as i64 {
        CheckResult::new(
            "degree-identity",
            n,
            CheckStatus::Pass,
            format!("p({}) - p({n}) = {increment} = excess out-degree", n + 1),
        )
    } else {
        CheckResult::new(
            "degree-identity",
            n,
            CheckStatus::Violation,
            format!("increment {increment} but excess out-degree {excess}"),
        )
    }
}

/// When the split grows between n and n+1, the boundary word x w y around
/// the cut must exhibit a bispecial (n-1)-factor of the old tail whose
/// extension x w y died in the new tail.
pub fn check_boundary_bispecial(index: &FactorIndex, n: usize, guard: usize) -> CheckResult {
    if n < 2 {
        return CheckResult::new(
            "boundary-bispecial",
            n,
            CheckStatus::Skipped,
            String::from("needs n >= 2"),
        );
    }
    let (sn, sn1) = match (recurrence_split(index, n, guard), recurrence_split(index, n + 1, guard))
    {
        (Ok(a), Ok(b)) if a.certain && b.certain => (a, b),
        _ => {
            return CheckResult::new(
                "boundary-bispecial",
                n,
                CheckStatus::Skipped,
                String::from("splits not certified"),
            )
        }
    };
    if sn1.s <= sn.s {
        return CheckResult::new(
            "boundary-bispecial",
            n,
            CheckStatus::Skipped,
            String::from("vacuous: split does not grow"),
        );
    }
    let s = sn1.s as usize;
    let text = index.word().letters();
    if s + n > index.horizon() {
        return CheckResult::new(
            "boundary-bispecial",
            n,
            CheckStatus::Skipped,
            String::from("boundary beyond horizon"),
        );
    }
    // u_s = x_s .. x_{s+n-1} = x w, next vertex = w y
    let w = &text[s..s + n - 1]; // x_{s+1} .. x_{s+n-1}
    let xwy = &text[s - 1..s + n]; // x_s .. x_{s+n}

    // x w y must occur in z_n but not in z_{n+1}
    let occ = index.occurrences(xwy);
    let in_zn = occ.iter().any(|&p| p >= sn.z_start() as u32);
    let in_zn1 = occ.iter().any(|&p| p >= sn1.z_start() as u32);

    // w must be bispecial within z_n: two left and two right extensions
    // among its occurrences there
    let mut lefts: Vec<Letter> = Vec::new();
    let mut rights: Vec<Letter> = Vec::new();
    for &p in &index.occurrences(w) {
        if p < sn.z_start() as u32 {
            continue;
        }
        let p = p as usize;
        if p >= 2 {
            let c = text[p - 2];
            if !lefts.contains(&c) {
                lefts.push(c);
            }
        }
        if p + n - 1 <= index.horizon() {
            let c = text[p + n - 2];
            if !rights.contains(&c) {
                rights.push(c);
            }
        }
    }
    let bispecial = lefts.len() >= 2 && rights.len() >= 2;
    if in_zn && !in_zn1 && bispecial {
        CheckResult::new(
            "boundary-bispecial",
            n,
            CheckStatus::Pass,
            format!("boundary word at position {s} with bispecial core"),
        )
    } else {
        CheckResult::new(
            "boundary-bispecial",
            n,
            CheckStatus::Violation,
            format!(
                "in z_n: {in_zn}, in z_(n+1): {in_zn1}, core bispecial in z_n: {bispecial}"
            ),
        )
    }
}

/// A certified n-recurrent word with a unit complexity increment stays
/// (n+1)-recurrent.
pub fn check_recurrence_propagation(
    index: &FactorIndex,
    profile: &ComplexityProfile,
    n: usize,
    guard: usize,
) -> CheckResult {
    if n + 1 > profile.n_max || !profile.saturated[n + 1] {
        return CheckResult::new(
            "recurrence-propagation",
            n,
            CheckStatus::Skipped,
            String::from("level not saturated"),
        );
    }
    if profile.p[n + 1] != profile.p[n] + 1 {
        return CheckResult::new(
            "recurrence-propagation",
            n,
            CheckStatus::Skipped,
            String::from("vacuous: increment differs from 1"),
        );
    }
    let (sn, sn1) = match (recurrence_split(index, n, guard), recurrence_split(index, n + 1, guard))
    {
        (Ok(a), Ok(b)) if a.certain && b.certain => (a, b),
        _ => {
            return CheckResult::new(
                "recurrence-propagation",
                n,
                CheckStatus::Skipped,
                String::from("splits not certified"),
            )
        }
    };
    if sn.s != 0 {
        return CheckResult::new(
            "recurrence-propagation",
            n,
            CheckStatus::Skipped,
            String::from("vacuous: not n-recurrent"),
        );
    }
    if sn1.s == 0 {
        CheckResult::new(
            "recurrence-propagation",
            n,
            CheckStatus::Pass,
            String::from("s_{n+1} = 0"),
        )
    } else {
        CheckResult::new(
            "recurrence-propagation",
            n,
            CheckStatus::Violation,
            format!("s_{} = {} despite unit increment at level {n}", n + 1, sn1.s),
        )
    }
}

/// Dichotomy at unit increments: the reduced graph is already of ∞-shape,
/// or its left- and right-special vertices are distinct and the shape
/// appears after d more levels, d the path distance between them.
pub fn check_shape_dichotomy(
    index: &FactorIndex,
    profile: &ComplexityProfile,
    n: usize,
    opts: &EvolutionOptions,
) -> CheckResult {
    let id = "shape-dichotomy";
    if n + 1 > profile.n_max || !profile.saturated[n] || !profile.saturated[n + 1] {
        return CheckResult::new(id, n, CheckStatus::Skipped, String::from("level not saturated"));
    }
    if profile.p[n + 1] != profile.p[n] + 1 {
        return CheckResult::new(
            id,
            n,
            CheckStatus::Skipped,
            String::from("vacuous: increment differs from 1"),
        );
    }
    let reduced_at = |m: usize| -> Option<crate::rauzy::RauzyGraph> {
        let sm = recurrence_split(index, m, opts.guard).ok().filter(|s| s.certain)?;
        let sm1 = recurrence_split(index, m + 1, opts.guard).ok().filter(|s| s.certain)?;
        let g = build_rauzy(index, m).ok()?;
        reduce(&g, &sm, &sm1, index).ok()
    };
    let reduced = match reduced_at(n) {
        Some(g) => g,
        None => {
            return CheckResult::new(id, n, CheckStatus::Skipped, String::from("reduction failed"))
        }
    };
    let sets = classify_special(&reduced);
    if !sets.bispecial.is_empty() {
        // first branch of the dichotomy: a single bispecial vertex
        if sets.right.len() == 1 && sets.left.len() == 1 {
            return CheckResult::new(id, n, CheckStatus::Pass, String::from("already of ∞-shape"));
        }
        return CheckResult::new(
            id,
            n,
            CheckStatus::Violation,
            String::from("bispecial vertex with extra special vertices"),
        );
    }
    let (&u, &w) = match (sets.left.as_slice(), sets.right.as_slice()) {
        ([u], [w]) => (u, w),
        _ => {
            return CheckResult::new(
                id,
                n,
                CheckStatus::Violation,
                format!(
                    "expected one left- and one right-special vertex, found {} and {}",
                    sets.left.len(),
                    sets.right.len()
                ),
            )
        }
    };
    // walk u -> w along forced edges
    let mut d = 0usize;
    let mut v = u;
    while v != w {
        match reduced.out_edges(v) {
            [e] => {
                v = reduced.edges[*e as usize].to;
                d += 1;
            }
            _ => {
                return CheckResult::new(
                    id,
                    n,
                    CheckStatus::Violation,
                    String::from("walk from the left-special vertex branches before w"),
                )
            }
        }
        if d > reduced.vertex_count() {
            return CheckResult::new(
                id,
                n,
                CheckStatus::Violation,
                String::from("no path from the left-special to the right-special vertex"),
            );
        }
    }
    match reduced_at(n + d) {
        Some(g) => {
            let outcome = detect_infinity_shape(
                &g,
                index,
                &DetectOptions {
                    essential_depth: opts.essential_depth,
                    z_start: recurrence_split(index, n + d + 1, opts.guard)
                        .map(|s| s.z_start() as u32)
                        .unwrap_or(1),
                },
            );
            if outcome.is_shape() {
                CheckResult::new(id, n, CheckStatus::Pass, format!("∞-shape reached at {}", n + d))
            } else {
                CheckResult::new(
                    id,
                    n,
                    CheckStatus::Violation,
                    format!("no ∞-shape at level {} (distance {d})", n + d),
                )
            }
        }
        None => CheckResult::new(
            id,
            n,
            CheckStatus::Skipped,
            format!("level {} not certifiable at this horizon", n + d),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexity::complexity_profile;
    use crate::word::WordSource;

    fn trace_of(spec: &str, l: usize, n_max: usize) -> (FactorIndex, ComplexityProfile, EvolutionTrace) {
        let w = WordSource::parse(spec).unwrap().materialize(l).unwrap();
        let ix = FactorIndex::build(&w).unwrap();
        let profile = complexity_profile(&ix, (n_max + 2).min(l - 1)).unwrap();
        let trace = evolution_trace(
            &ix,
            &profile,
            &EvolutionOptions { n_max, ..EvolutionOptions::default() },
        );
        (ix, profile, trace)
    }

    #[test]
    fn fibonacci_levels() {
        let (_, _, trace) = trace_of("subst:0->01,1->0", 20_000, 40);
        let levels: Vec<usize> = trace.steps.iter().map(|s| s.n).collect();
        assert_eq!(levels, vec![1, 3, 6, 11, 19, 32]);
        let ks: Vec<usize> = trace.steps.iter().map(|s| s.k).collect();
        assert_eq!(ks, vec![2, 3, 5, 8, 13, 21]);
        let ls: Vec<usize> = trace.steps.iter().map(|s| s.l).collect();
        assert_eq!(ls, vec![1, 2, 3, 5, 8, 13]);
        assert!(trace.steps.iter().all(|s| s.b == 1));
        assert!(trace.steps.iter().all(|s| s.split_next.s == 0));
        assert_eq!(trace.classification, CycleClass::Unbounded);
        assert!(trace.hypothesis_warning.is_none());
    }

    #[test]
    fn fibonacci_succession() {
        let (ix, _, trace) = trace_of("subst:0->01,1->0", 20_000, 40);
        let results = check_succession(&ix, &trace);
        let violations: Vec<_> =
            results.iter().filter(|r| r.status == CheckStatus::Violation).collect();
        assert!(violations.is_empty(), "{violations:?}");
        // the first successor is measured as (k, l) = (3, 2): the special
        // cycle grows
        assert_eq!(trace.steps[1].orientation, Some(Orientation::GrowK));
    }

    #[test]
    fn periodic_trace_empty() {
        let (_, _, trace) = trace_of("periodic:01", 500, 10);
        assert!(trace.steps.is_empty());
    }

    #[test]
    fn fibonacci_case_three() {
        let (ix, _, trace) = trace_of("subst:0->01,1->0", 20_000, 10);
        let step = &trace.steps[0];
        assert_eq!(step.n, 1);
        let case = step.tail_case.as_ref().expect("tail classified");
        assert_eq!(case.case_id, 3);
        assert_eq!(case.k_prime, 0);
        assert_eq!(case.bounds, vec![(6, 5)]);
        let checks = check_tail_bounds(&ix, step, case);
        assert!(checks.iter().all(|c| c.status == CheckStatus::Pass), "{checks:?}");
        assert_eq!(ix.repetition(6).unwrap(), Some(5));
    }

    #[test]
    fn skln_bounds_on_fibonacci() {
        let (_, _, trace) = trace_of("subst:0->01,1->0", 60_000, 40);
        // step at n = 6 has k = 5, l = 3; the certified slope from 6 is 7/6
        let step = trace.steps.iter().find(|s| s.n == 6).unwrap();
        let rho = step.rho.as_ref().unwrap();
        assert_eq!(rho.rho, rat(7, 6));
        let results = check_skln_bounds(step, &rho.rho, Strictness::AttainedSup);
        assert!(
            results.iter().all(|r| r.status == CheckStatus::Pass),
            "{results:?}"
        );
        // the user-facing strict checker reports the stated example slope
        // as a violation: the hypothesis p(m)/m < 1.01 fails at m = 6
        let strict = check_skln_bounds(step, &rat(101, 100), Strictness::Strict);
        assert!(strict.iter().any(|r| r.status == CheckStatus::Violation));
    }

    #[test]
    fn gain_bounds_on_fibonacci() {
        let (_, _, trace) = trace_of("subst:0->01,1->0", 60_000, 40);
        for step in trace.steps.iter().filter(|s| s.l >= 3) {
            let rho = step.rho.as_ref().unwrap();
            if !rho.in_regime() {
                continue;
            }
            let results = check_gain_bounds(step, &rho.rho, Strictness::AttainedSup);
            for r in &results {
                assert_ne!(r.status, CheckStatus::Violation, "n={}: {:?}", step.n, r);
            }
        }
    }

    #[test]
    fn boundary_equality_is_strict_violation() {
        let (_, _, trace) = trace_of("subst:0->01,1->0", 60_000, 40);
        let step = trace.steps.iter().find(|s| s.n == 6).unwrap();
        // rho chosen to make the cycle budget an exact equality:
        // k + l = 8 = rho (n+1) at rho = 8/7
        let results = check_skln_bounds(step, &rat(8, 7), Strictness::Strict);
        assert_eq!(results[0].status, CheckStatus::Violation);
        let results = check_skln_bounds(step, &rat(8, 7), Strictness::AttainedSup);
        assert_eq!(results[0].status, CheckStatus::Tight);
    }

    #[test]
    fn multiplicity_two_word() {
        // gaps 6/8 arranged by the fixed point of 0 -> 0^6 1, 1 -> 0^8 1:
        // at level 6 the 7-cycle through the 1 is special and the loop at
        // 0^6 is traversed twice between returns
        let (ix, profile, trace) = trace_of("subst:0->0000001,1->000000001", 60_000, 30);
        let step = trace.steps.iter().find(|s| s.n == 6).expect("shape at level 6");
        assert_eq!((step.k, step.l, step.b), (7, 1, 2));
        assert_eq!(step.config.w, vec![0; 6]);
        let results = check_figure8_bounds(&trace, &profile, &rat(4, 3));
        for r in results.iter().filter(|r| r.level == 6) {
            assert_eq!(r.status, CheckStatus::Pass, "{r:?}");
        }
        // succession into level 13
        let next = trace.steps.iter().find(|s| s.n == 13).expect("shape at level 13");
        assert_eq!(next.k + next.l, 7 + 9);
        let results = check_succession(&ix, &trace);
        assert!(
            results.iter().all(|r| r.status != CheckStatus::Violation),
            "{results:?}"
        );
    }

    #[test]
    fn multiplicity_violation_detected() {
        // aperiodic 1-gaps 6, 8 and 10: powers 0, 2 and 4 of the loop at
        // 0^6 all appear between returns of the 7-cycle, so the
        // single-multiplicity property fails (the slope exceeds 4/3, which
        // is why this does not contradict the uniqueness statement)
        let spec = "subst:0->0000001000000001,1->00000000001";
        let w = WordSource::parse(spec).unwrap().materialize(8000).unwrap();
        let ix = FactorIndex::build(&w).unwrap();
        let profile = complexity_profile(&ix, 30).unwrap();
        let g = build_rauzy(&ix, 6).unwrap();
        let s6 = recurrence_split(&ix, 6, 4).unwrap();
        let s7 = recurrence_split(&ix, 7, 4).unwrap();
        let r = reduce(&g, &s6, &s7, &ix).unwrap();
        let outcome = detect_infinity_shape(&r, &ix, &DetectOptions::default());
        let cfg = outcome.config().expect("shape at level 6");
        assert!(!cfg.extra_powers().is_empty());
        let step = EvolutionStep {
            n: 6,
            k: cfg.k(),
            l: cfg.l(),
            b: cfg.multiplicity,
            config: cfg.clone(),
            split_next: s7,
            split_after_k: None,
            split_slope: None,
            rho: None,
            orientation: None,
            tail_case: None,
        };
        let trace = EvolutionTrace {
            steps: vec![step],
            classification: CycleClass::Undetermined { reason: String::new() },
            hypothesis_warning: None,
            truncated: None,
        };
        let results = check_figure8_bounds(&trace, &profile, &rat(4, 3));
        assert!(results
            .iter()
            .any(|r| r.id == "multiplicity-unique" && r.status == CheckStatus::Violation));
    }

    #[test]
    fn witness_scan_fibonacci() {
        let w = WordSource::parse("subst:0->01,1->0").unwrap().materialize(20_000).unwrap();
        let ix = FactorIndex::build(&w).unwrap();
        // delta at the certified tail slope 5/4 is 1/21
        let d = delta(&rat(5, 4)).unwrap().value;
        assert_eq!(d, rat(1, 21));
        match find_repetition_witness(&ix, &d, 10_000) {
            WitnessOutcome::Found { m, r } => {
                assert!(rat_int(r as i64) < (Rat::one() - d) * rat_u(m));
            }
            other => panic!("expected witness, got {other:?}"),
        }
    }

    #[test]
    fn degree_identity_and_propagation() {
        let w = WordSource::parse("subst:0->01,1->0").unwrap().materialize(20_000).unwrap();
        let ix = FactorIndex::build(&w).unwrap();
        let profile = complexity_profile(&ix, 30).unwrap();
        for n in 1..=20 {
            let r = check_degree_identity(&ix, &profile, n);
            assert_ne!(r.status, CheckStatus::Violation, "n={n}: {}", r.detail);
            let r = check_recurrence_propagation(&ix, &profile, n, 4);
            assert_ne!(r.status, CheckStatus::Violation, "n={n}: {}", r.detail);
            let r = check_shape_dichotomy(&ix, &profile, n, &EvolutionOptions::default());
            assert_ne!(r.status, CheckStatus::Violation, "n={n}: {}", r.detail);
        }
    }
}
