//! From repetitions to rational approximations.
//!
//! A repetition witness says the base-b digit stream repeats a length-n
//! window: x_{i+1..i+n} = x_{m+1..m+n} with i < m. The number whose
//! expansion is x_1..x_i followed by (x_{i+1}..x_m) repeated forever is the
//! rational p/q with q = b^i (b^{m-i} - 1), and it agrees with the stream
//! through at least m+n digits, giving |xi - p/q| <= b^{-(m+n)+1}. Small
//! denominator, long agreement: each witness is one inequality in the
//! irrationality-exponent ledger, and 1 + 1/(r(n)/n) aggregates them into
//! a lower estimate.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::bounds::{log2_q32, rat_int, Rat, RealValue};
use crate::index::FactorIndex;
use crate::word::{FiniteWord, Letter, PeriodicityClass, WordSource};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DioError {
    /// The two windows of the witness disagree; carries the first
    /// mismatching digit position (1-based).
    WitnessMismatch { pos: usize },
    DigitsTooShort { need: usize, have: usize },
    /// Eventually periodic streams encode rationals; the exponent
    /// machinery does not apply.
    PeriodicExcluded,
    NoWitness,
    PrecisionTooSmall { need: u64 },
    /// The approximation missed its guaranteed accuracy: construction bug.
    BoundViolated { detail: String },
}

impl fmt::Display for DioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DioError::WitnessMismatch { pos } => {
                write!(f, "witness windows disagree at digit {pos}")
            }
            DioError::DigitsTooShort { need, have } => {
                write!(f, "need {need} digits, have {have}")
            }
            DioError::PeriodicExcluded => {
                write!(f, "stream is eventually periodic (rational value)")
            }
            DioError::NoWitness => write!(f, "no repetition defined at this horizon"),
            DioError::PrecisionTooSmall { need } => {
                write!(f, "precision must exceed the agreement length {need}")
            }
            DioError::BoundViolated { detail } => {
                write!(f, "approximation bound violated: {detail}")
            }
        }
    }
}

/// A repeated window: x_{i+1..i+n} = x_{m+1..m+n} with 0 <= i < m.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepetitionWitness {
    pub i: u64,
    pub m: u64,
    pub n: u64,
    pub base: u8,
}

impl RepetitionWitness {
    /// Builds the witness from the repetition value r(n) = m, taking the
    /// first occurrence of the repeated window as the earlier copy.
    pub fn from_repetition(index: &FactorIndex, n: usize) -> Option<RepetitionWitness> {
        let m = index.repetition(n).ok().flatten()? as u64;
        let window = index.window(m as usize + 1, n);
        let stats = index.lookup(window).expect("window occurs");
        let i = stats.first_start as u64 - 1;
        debug_assert!(i < m);
        Some(RepetitionWitness { i, m, n: n as u64, base: index.word().alphabet_size() })
    }

    pub fn validate(&self, digits: &FiniteWord) -> Result<(), DioError> {
        let need = (self.m + self.n) as usize;
        if digits.len() < need {
            return Err(DioError::DigitsTooShort { need, have: digits.len() });
        }
        let x = digits.letters();
        for t in 0..self.n as usize {
            let a = x[self.i as usize + t];
            let b = x[self.m as usize + t];
            if a != b {
                return Err(DioError::WitnessMismatch { pos: self.m as usize + t + 1 });
            }
        }
        Ok(())
    }
}

/// Exact rational approximant of the stream value.
#[derive(Clone, Debug)]
pub struct RationalApprox {
    /// reduced fraction p/q
    pub value: Rat,
    /// number of leading base-b digits shared with the stream (within the
    /// materialized prefix; at least m+n)
    pub agreement_digits: u64,
    pub base: u8,
}

impl RationalApprox {
    pub fn p(&self) -> &BigInt {
        self.value.numer()
    }

    pub fn q(&self) -> &BigInt {
        self.value.denom()
    }

    /// Guaranteed error bound b^{-(agreement-1)}.
    pub fn error_bound(&self) -> Rat {
        Rat::new(BigInt::one(), pow_bigint(self.base, self.agreement_digits - 1))
    }

    /// Lower bound on the realized exponent from the agreement length:
    /// log(1/error) / log q >= (agreement - 1) log b / log q.
    pub fn exponent_lower_bound(&self) -> Rat {
        let logb = log2_q32(&rat_int(self.base as i64));
        let logq = log2_q32(&Rat::from_integer(self.q().clone()));
        if logq <= 0 {
            return rat_int(0);
        }
        Rat::new(BigInt::from((self.agreement_digits - 1) as i64 * logb), BigInt::from(logq))
    }
}

fn pow_bigint(b: u8, e: u64) -> BigInt {
    let b = BigInt::from(b);
    let mut acc = BigInt::one();
    for _ in 0..e {
        acc *= &b;
    }
    acc
}

fn value_of(digits: &[Letter], base: u8) -> BigInt {
    let b = BigInt::from(base);
    let mut acc = BigInt::zero();
    for &d in digits {
        acc = acc * &b + BigInt::from(d);
    }
    acc
}

/// First `count` base-b fraction digits of a value in [0, 1).
pub fn fraction_digits(value: &Rat, base: u8, count: usize) -> Vec<Letter> {
    let q = value.denom().clone();
    let mut rem = value.numer().clone();
    let b = BigInt::from(base);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        rem *= &b;
        let (d, r) = num_integer::Integer::div_rem(&rem, &q);
        let digit: u8 = num_traits::ToPrimitive::to_u8(&d).expect("digit below base");
        out.push(digit);
        rem = r;
    }
    out
}

/// Turns a validated witness into the periodic-continuation rational
/// q = b^i (b^{m-i} - 1), verifying the digit agreement along the way.
pub fn rational_from_repetition(
    digits: &FiniteWord,
    witness: &RepetitionWitness,
) -> Result<RationalApprox, DioError> {
    witness.validate(digits)?;
    let b = witness.base;
    let (i, m) = (witness.i, witness.m);
    let x = digits.letters();
    let cycle_len = m - i;
    let x_i = value_of(&x[..i as usize], b);
    let y = value_of(&x[i as usize..m as usize], b);
    let cycle_denom = pow_bigint(b, cycle_len) - BigInt::one();
    let p = x_i * &cycle_denom + y;
    let q = pow_bigint(b, i) * cycle_denom;
    let value = Rat::new(p, q);

    // re-verify digitwise and measure the actual agreement length
    let probe = digits.len();
    let expansion = fraction_digits(&value, b, probe);
    let mut agreement = 0u64;
    for t in 0..probe {
        if expansion[t] == x[t] {
            agreement += 1;
        } else {
            break;
        }
    }
    if agreement < m + witness.n {
        return Err(DioError::BoundViolated {
            detail: format!(
                "expansion agrees only through digit {agreement}, expected {}",
                m + witness.n
            ),
        });
    }
    Ok(RationalApprox { value, agreement_digits: agreement, base: b })
}

#[derive(Clone, Debug)]
pub struct MuEstimate {
    /// 1 + 1 / min r(n)/n, exact
    pub value: Rat,
    /// level attaining the minimum
    pub at_level: usize,
    pub r: u32,
}

/// Lower estimate for the irrationality exponent from the repetition
/// table: 1 + 1 / min_{n <= n_max} (r(n)/n). Monotone nondecreasing in
/// n_max; at least 2 as soon as some r(n) <= n is seen.
pub fn mu_lower_estimate(
    index: &FactorIndex,
    class: PeriodicityClass,
    n_max: usize,
) -> Result<MuEstimate, DioError> {
    if matches!(class, PeriodicityClass::Periodic | PeriodicityClass::EventuallyPeriodic) {
        return Err(DioError::PeriodicExcluded);
    }
    let n_max = n_max.min(index.horizon().saturating_sub(1));
    let table = index.repetition_table(n_max);
    let mut best: Option<(Rat, usize, u32)> = None;
    for n in 1..=n_max {
        if let Some(r) = table[n] {
            let ratio = Rat::new(BigInt::from(r), BigInt::from(n as u64));
            match &best {
                Some((b, _, _)) if *b <= ratio => {}
                _ => best = Some((ratio, n, r)),
            }
        }
    }
    let (ratio, at_level, r) = best.ok_or(DioError::NoWitness)?;
    Ok(MuEstimate { value: Rat::one() + ratio.recip(), at_level, r })
}

#[derive(Clone, Debug)]
pub struct ApproxReport {
    /// true when the stream value is exactly p/q
    pub exact: bool,
    pub error: RealValue,
    /// the guaranteed bound b^{-(agreement-1)}
    pub bound: Rat,
    /// enclosure of log(1/error)/log q; `None` when the error is zero
    pub exponent: Option<(Rat, Rat)>,
}

/// Materializes the stream to `precision_digits`, encloses |xi - p/q|
/// exactly, confirms the guaranteed bound and reports the realized
/// exponent.
pub fn verify_approximation(
    source: &WordSource,
    approx: &RationalApprox,
    precision_digits: usize,
) -> Result<ApproxReport, DioError> {
    if (precision_digits as u64) <= approx.agreement_digits {
        return Err(DioError::PrecisionTooSmall { need: approx.agreement_digits });
    }
    let b = approx.base;
    let bound = approx.error_bound();
    let err: RealValue = match source.exact_value() {
        Some(xi) => RealValue::Exact((xi - &approx.value).abs()),
        None => {
            let digits = source
                .materialize(precision_digits)
                .map_err(|_| DioError::DigitsTooShort { need: precision_digits, have: 0 })?;
            let scale = pow_bigint(b, precision_digits as u64);
            let trunc = Rat::new(value_of(digits.letters(), b), scale.clone());
            let ulp = Rat::new(BigInt::one(), scale);
            // xi lies in [trunc, trunc + ulp]
            let y = &approx.value;
            let hi_end = &trunc + &ulp;
            let lo = if *y < trunc {
                &trunc - y
            } else if *y > hi_end {
                y - &hi_end
            } else {
                Rat::zero()
            };
            let hi = (&hi_end - y).abs().max((&trunc - y).abs());
            RealValue::Interval { lo, hi }
        }
    };
    if err.lo() > &bound {
        return Err(DioError::BoundViolated {
            detail: format!("error exceeds {}", crate::bounds::render_exact(&bound)),
        });
    }
    let exact = matches!(&err, RealValue::Exact(e) if e.is_zero());
    let exponent = if exact {
        None
    } else if err.lo().is_zero() {
        // only the digit-truncation upper bound is informative here
        let lo_exp = exponent_of(err.hi(), approx.q());
        Some((lo_exp.clone(), lo_exp))
    } else {
        Some((exponent_of(err.hi(), approx.q()), exponent_of(err.lo(), approx.q())))
    };
    Ok(ApproxReport { exact, error: err, bound, exponent })
}

/// log(1/err) / log(q) via 32-bit fixed-point logs (reporting only).
fn exponent_of(err: &Rat, q: &BigInt) -> Rat {
    let le = log2_q32(&err.recip());
    let lq = log2_q32(&Rat::from_integer(q.clone()));
    if lq <= 0 {
        return rat_int(0);
    }
    Rat::new(BigInt::from(le), BigInt::from(lq))
}

impl FactorIndex {
    /// r(n) for all n in 1..=n_max in one pass (index 0 unused).
    pub fn repetition_table(&self, n_max: usize) -> Vec<Option<u32>> {
        let n_max = n_max.min(self.horizon().saturating_sub(1));
        let agg = self.level_aggregates(n_max);
        let mut out = alloc::vec![None; n_max + 1];
        for (n, slot) in out.iter_mut().enumerate().skip(1) {
            *slot = agg.repetition(n);
        }
        out
    }
}
