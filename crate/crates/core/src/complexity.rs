//! Complexity profiles: p(n), r(n), special-factor inventories, saturation
//! flags, recurrence splits and the growth-dichotomy check.
//!
//! A profile is computed from a finite prefix, so every count is a lower
//! bound for the infinite word. A level is *saturated* when no new factor
//! of that length appeared in the last quarter of the prefix; assertions
//! about the infinite word are only made on saturated levels.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;

use crate::bounds::{rat, Rat};
use crate::index::FactorIndex;
use crate::report::{CheckResult, CheckStatus};
use crate::word::{Letter, PeriodicityClass};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComplexityError {
    BadLevelRange { n_max: usize, horizon: usize },
    HorizonTooSmall { required: usize, horizon: usize },
}

impl fmt::Display for ComplexityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplexityError::BadLevelRange { n_max, horizon } => {
                write!(f, "level range 1..={n_max} invalid for horizon {horizon}")
            }
            ComplexityError::HorizonTooSmall { required, horizon } => {
                write!(f, "horizon {horizon} too small, need at least {required}")
            }
        }
    }
}

/// Tables p(n), r(n) and special-word counts over 1..=n_max, with p(0) = 1.
#[derive(Clone, Debug)]
pub struct ComplexityProfile {
    pub horizon: usize,
    pub n_max: usize,
    /// p[0] = 1 by convention, p[n] = distinct n-factor count for n >= 1
    pub p: Vec<u64>,
    /// r[n] = repetition value, `None` where undefined at this horizon
    pub r: Vec<Option<u32>>,
    pub right_special_count: Vec<u32>,
    pub left_special_count: Vec<u32>,
    pub bispecial_count: Vec<u32>,
    pub saturated: Vec<bool>,
}

impl ComplexityProfile {
    /// Largest m such that levels 1..=m are all saturated (0 if none).
    pub fn saturated_prefix_end(&self) -> usize {
        let mut end = 0;
        for n in 1..=self.n_max {
            if self.saturated[n] {
                end = n;
            } else {
                break;
            }
        }
        end
    }

    pub fn slope_at(&self, n: usize) -> Rat {
        Rat::new(BigInt::from(self.p[n]), BigInt::from(n as u64))
    }
}

pub fn complexity_profile(
    index: &FactorIndex,
    n_max: usize,
) -> Result<ComplexityProfile, ComplexityError> {
    let horizon = index.horizon();
    if n_max == 0 || n_max >= horizon {
        return Err(ComplexityError::BadLevelRange { n_max, horizon });
    }
    let agg = index.level_aggregates(n_max);
    let quarter = (horizon / 4).max(1);
    let saturation_limit = horizon.saturating_sub(quarter) as u32;

    let mut p = vec![0u64; n_max + 1];
    p[0] = 1;
    let mut r = vec![None; n_max + 1];
    let mut rs = vec![0u32; n_max + 1];
    let mut ls = vec![0u32; n_max + 1];
    let mut bi = vec![0u32; n_max + 1];
    let mut saturated = vec![false; n_max + 1];
    for n in 1..=n_max {
        p[n] = agg.p[n];
        r[n] = agg.repetition(n);
        rs[n] = agg.rs_count[n];
        ls[n] = agg.ls_count[n];
        // max_first_end - n + 1 <= saturation_limit
        saturated[n] = agg.max_first_end[n] <= saturation_limit + n as u32 - 1;
        for &state in &agg.rs_states[n] {
            let factor = index.rs_factor_bytes(state, n);
            if index.left_extensions(&factor).len() >= 2 {
                bi[n] += 1;
            }
        }
    }
    Ok(ComplexityProfile {
        horizon,
        n_max,
        p,
        r,
        right_special_count: rs,
        left_special_count: ls,
        bispecial_count: bi,
        saturated,
    })
}

/// The split x = a_n z_n with z_n the recurrent tail at this horizon:
/// s is minimal with every n-factor of x_{s+1}..x_L occurring at least
/// twice in x_{s+1}..x_L.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceSplit {
    pub n: usize,
    pub s: u32,
    /// False when the recurrence evidence sits within n positions of the
    /// horizon, or the certified tail is shorter than 2n.
    pub certain: bool,
}

impl RecurrenceSplit {
    /// 1-based start position of z_n.
    pub fn z_start(&self) -> usize {
        self.s as usize + 1
    }

    pub fn non_recurrent_prefix<'a>(&self, index: &'a FactorIndex) -> &'a [Letter] {
        &index.word().letters()[..self.s as usize]
    }
}

/// Computes the n-th recurrence split. `guard` rejects horizons shorter
/// than `guard * n` (default callers use 4).
pub fn recurrence_split(
    index: &FactorIndex,
    n: usize,
    guard: usize,
) -> Result<RecurrenceSplit, ComplexityError> {
    let horizon = index.horizon();
    if n == 0 || horizon < guard.max(1) * n {
        return Err(ComplexityError::HorizonTooSmall {
            required: guard.max(1) * n.max(1),
            horizon,
        });
    }
    // Every factor contributes a forbidden interval (sl, l] of suffix start
    // points: cutting there leaves its last occurrence single in the tail.
    let mut intervals: Vec<(u32, u32)> = Vec::new();
    for f in index.factors_at(n).expect("level validated") {
        let l = f.stats.last_start;
        let sl = f.stats.second_last_start.unwrap_or(0);
        intervals.push((sl, l));
    }
    intervals.sort_unstable();
    let mut t = 1u32; // candidate z-start
    for &(a, b) in &intervals {
        if a >= t {
            break;
        }
        if b >= t {
            t = b + 1;
        }
    }
    let s = t - 1;

    // Certainty: second occurrences of tail factors must not sit in the
    // last n positions of the horizon.
    let last_n_start = (horizon - n + 1) as u32;
    let mut certain = (horizon - s as usize) >= 2 * n;
    if certain {
        for f in index.factors_at(n).expect("level validated") {
            if f.stats.last_start < t {
                continue; // factor absent from the tail
            }
            let second_in_tail = if s == 0 {
                f.stats.second_start
            } else {
                let occ = index.occurrences(&f.factor);
                occ.iter().copied().filter(|&p| p >= t).nth(1)
            };
            match second_in_tail {
                Some(pos) if pos < last_n_start => {}
                _ => {
                    certain = false;
                    break;
                }
            }
        }
    }
    Ok(RecurrenceSplit { n, s, certain })
}

/// p(level, z) for the tail z starting at position s+1.
pub fn suffix_complexity(index: &FactorIndex, level: usize, s: u32) -> u64 {
    index.suffix_factor_count(level, s as usize)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MhBranch {
    /// Aperiodic words must gain at least one factor per level.
    Growth,
    /// (Eventually) periodic words stay below an explicit bound.
    Bounded { bound: u64 },
}

#[derive(Clone, Debug)]
pub struct MhReport {
    pub branch: MhBranch,
    /// Levels over which the assertion was evaluated.
    pub checked: (usize, usize),
    pub result: CheckResult,
}

/// Picks the growth/bounded branch for a source of unknown periodicity
/// from the saturated profile itself.
pub fn empirical_class(profile: &ComplexityProfile) -> PeriodicityClass {
    let end = profile.saturated_prefix_end();
    if end == 0 {
        return PeriodicityClass::Unknown;
    }
    if profile.p[end] >= end as u64 + 1 {
        PeriodicityClass::Aperiodic
    } else {
        PeriodicityClass::EventuallyPeriodic
    }
}

/// Growth dichotomy: on the saturated range, aperiodic sources must satisfy
/// p(n+1) >= p(n) + 1 and (eventually) periodic sources must stay bounded.
pub fn check_morse_hedlund(
    profile: &ComplexityProfile,
    class: PeriodicityClass,
    bound: Option<u64>,
) -> MhReport {
    let end = profile.saturated_prefix_end();
    let class = if class == PeriodicityClass::Unknown { empirical_class(profile) } else { class };
    match class {
        PeriodicityClass::Aperiodic | PeriodicityClass::Unknown => {
            let mut violation = None;
            for n in 1..end {
                if profile.p[n + 1] < profile.p[n] + 1 {
                    violation = Some((n, profile.p[n], profile.p[n + 1]));
                    break;
                }
            }
            let result = match violation {
                None => CheckResult::new(
                    "complexity-growth",
                    end,
                    CheckStatus::Pass,
                    format!("p(n+1) >= p(n)+1 for n in 1..{end}"),
                ),
                Some((n, pn, pn1)) => CheckResult::new(
                    "complexity-growth",
                    n,
                    CheckStatus::Violation,
                    format!("p({}) = {} < p({}) + 1 = {}", n + 1, pn1, n, pn + 1),
                ),
            };
            MhReport { branch: MhBranch::Growth, checked: (1, end), result }
        }
        PeriodicityClass::Periodic | PeriodicityClass::EventuallyPeriodic => {
            let bound = bound.unwrap_or_else(|| (1..=end).map(|n| profile.p[n]).max().unwrap_or(1));
            let mut violation = None;
            for n in 1..=end {
                if profile.p[n] > bound {
                    violation = Some((n, profile.p[n]));
                    break;
                }
            }
            let result = match violation {
                None => CheckResult::new(
                    "complexity-bounded",
                    end,
                    CheckStatus::Pass,
                    format!("p bounded by {bound} on saturated range"),
                ),
                Some((n, pn)) => CheckResult::new(
                    "complexity-bounded",
                    n,
                    CheckStatus::Violation,
                    format!("p({n}) = {pn} exceeds bound {bound}"),
                ),
            };
            MhReport { branch: MhBranch::Bounded { bound }, checked: (1, end), result }
        }
    }
}

/// Prefix-count identity: removing the non-recurrent prefix a_n drops the
/// count of (n + s_n - 1)-factors by exactly s_n.
pub fn verify_prefix2_identity(index: &FactorIndex, n: usize, guard: usize) -> CheckResult {
    let split = match recurrence_split(index, n, guard) {
        Ok(s) => s,
        Err(e) => {
            return CheckResult::new("prefix-count", n, CheckStatus::Skipped, format!("{e}"))
        }
    };
    if !split.certain {
        return CheckResult::new(
            "prefix-count",
            n,
            CheckStatus::Skipped,
            String::from("split is horizon-uncertain"),
        );
    }
    let s = split.s as usize;
    let level = n + s;
    let level = match level.checked_sub(1) {
        Some(0) | None => {
            return CheckResult::new(
                "prefix-count",
                n,
                CheckStatus::Pass,
                String::from("degenerate level 0, identity is 1 = 1"),
            )
        }
        Some(m) => m,
    };
    if level >= index.horizon() {
        return CheckResult::new(
            "prefix-count",
            n,
            CheckStatus::Skipped,
            format!("level {level} beyond horizon"),
        );
    }
    let lhs = index.distinct_count(level);
    let rhs = suffix_complexity(index, level, split.s) + s as u64;
    if lhs == rhs {
        CheckResult::new(
            "prefix-count",
            n,
            CheckStatus::Pass,
            format!("p({level}, x) = {lhs} = p({level}, z_{n}) + {s}"),
        )
    } else {
        CheckResult::new(
            "prefix-count",
            n,
            CheckStatus::Violation,
            format!("p({level}, x) = {lhs} but p({level}, z_{n}) + s = {rhs}"),
        )
    }
}

/// A certificate that p(m)/m stays at or below `rho` for m in [from, to]
/// (all saturated levels). `rho` is the attained maximum.
#[derive(Clone, Debug)]
pub struct RhoCert {
    pub rho: Rat,
    pub from: usize,
    pub to: usize,
}

impl RhoCert {
    pub fn in_regime(&self) -> bool {
        self.rho < rat(4, 3)
    }
}

/// Certifies the slope over [from, saturated end].
pub fn rho_certificate(profile: &ComplexityProfile, from: usize) -> Option<RhoCert> {
    let to = profile.saturated_prefix_end();
    if from == 0 || from > to {
        return None;
    }
    let mut rho = profile.slope_at(from);
    for m in from + 1..=to {
        let s = profile.slope_at(m);
        if s > rho {
            rho = s;
        }
    }
    Some(RhoCert { rho, from, to })
}

/// The tightest tail certificate below 4/3: the earliest `from` such that
/// every saturated slope from there on stays below 4/3. A finite-horizon
/// stand-in for the limsup of p(n)/n.
pub fn tail_rho_certificate(profile: &ComplexityProfile) -> Option<RhoCert> {
    let to = profile.saturated_prefix_end();
    if to == 0 {
        return None;
    }
    let limit = rat(4, 3);
    let mut best: Option<usize> = None;
    let mut running_max: Option<Rat> = None;
    for m in (1..=to).rev() {
        let s = profile.slope_at(m);
        let max = match running_max.take() {
            None => s,
            Some(r) => {
                if s > r {
                    s
                } else {
                    r
                }
            }
        };
        if max < limit {
            best = Some(m);
        }
        running_max = Some(max);
    }
    let from = best?;
    rho_certificate(profile, from)
}
