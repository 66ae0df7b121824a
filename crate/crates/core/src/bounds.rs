//! Closed-form bound curves in exact rational / directed-interval arithmetic.
//!
//! All rational-only curves evaluate with zero rounding error. The two
//! curves involving a square root return a directed-rounded interval of
//! width at most `10^-digits`, collapsing to an exact rational when the
//! radicand is a perfect square (this is what makes the curve value at the
//! degeneration threshold exactly 1). Comparisons against rationals are
//! three-valued so that no inequality verdict ever hinges on rounding.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational scalar used throughout the crate.
pub type Rat = num_rational::Ratio<BigInt>;

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub(crate) fn pow10(e: u32) -> BigInt {
    let ten = BigInt::from(10);
    let mut acc = BigInt::one();
    for _ in 0..e {
        acc *= &ten;
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DomainError {
    /// Parameter outside the curve's documented domain.
    OutOfDomain { param: String, domain: &'static str },
    /// Square-root argument came out negative.
    NegativeRadicand { radicand: String },
    NonPositiveStep,
}

impl core::fmt::Display for DomainError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            DomainError::OutOfDomain { param, domain } => {
                write!(f, "parameter {param} outside domain {domain}")
            }
            DomainError::NegativeRadicand { radicand } => {
                write!(f, "negative radicand {radicand}")
            }
            DomainError::NonPositiveStep => write!(f, "step must be positive"),
        }
    }
}

/// An exact rational, or a directed-rounded enclosure `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealValue {
    Exact(Rat),
    Interval { lo: Rat, hi: Rat },
}

impl RealValue {
    pub fn lo(&self) -> &Rat {
        match self {
            RealValue::Exact(x) => x,
            RealValue::Interval { lo, .. } => lo,
        }
    }

    pub fn hi(&self) -> &Rat {
        match self {
            RealValue::Exact(x) => x,
            RealValue::Interval { hi, .. } => hi,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, RealValue::Exact(_))
    }

    /// `Some(true)` if the value is certainly `< r`, `Some(false)` if
    /// certainly `>= r`, `None` if the enclosure straddles `r`.
    pub fn lt(&self, r: &Rat) -> Option<bool> {
        if self.hi() < r {
            Some(true)
        } else if self.lo() >= r {
            Some(false)
        } else {
            None
        }
    }

    /// `Some(true)` if the value is certainly `> r`.
    pub fn gt(&self, r: &Rat) -> Option<bool> {
        if self.lo() > r {
            Some(true)
        } else if self.hi() <= r {
            Some(false)
        } else {
            None
        }
    }

    /// Whether the value is certainly within `tol` of `r`.
    pub fn within(&self, r: &Rat, tol: &Rat) -> bool {
        (self.lo() - r).abs() <= *tol && (self.hi() - r).abs() <= *tol
    }

    pub fn midpoint(&self) -> Rat {
        match self {
            RealValue::Exact(x) => x.clone(),
            RealValue::Interval { lo, hi } => (lo + hi) / rat_int(2),
        }
    }

    /// Decimal rendering: exact values print as `p/q`, enclosures as the
    /// midpoint with `sig` significant digits.
    pub fn render(&self, sig: u32) -> String {
        match self {
            RealValue::Exact(x) => render_exact(x),
            RealValue::Interval { .. } => decimal_string(&self.midpoint(), sig),
        }
    }
}

pub fn render_exact(x: &Rat) -> String {
    if x.denom().is_one() {
        format!("{}", x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Positional decimal form with `sig` significant digits (round half away
/// from zero). Values handled here live in small ranges, so no scientific
/// notation is needed below 10^18.
pub fn decimal_string(x: &Rat, sig: u32) -> String {
    if x.is_zero() {
        return String::from("0");
    }
    let neg = x.is_negative();
    let num = x.numer().abs();
    let den = x.denom().clone();
    // exponent of the leading digit: 10^e <= |x| < 10^{e+1}
    let cmp_pow = |e: i64| -> core::cmp::Ordering {
        // compares |x| with 10^e
        if e >= 0 {
            num.cmp(&(&den * pow10(e as u32)))
        } else {
            (&num * pow10((-e) as u32)).cmp(&den)
        }
    };
    let mut e = num.to_string().len() as i64 - den.to_string().len() as i64;
    while cmp_pow(e) == core::cmp::Ordering::Less {
        e -= 1;
    }
    while cmp_pow(e + 1) != core::cmp::Ordering::Less {
        e += 1;
    }
    // scaled = round(|x| * 10^{sig-1-e})
    let shift = sig as i64 - 1 - e;
    let (mut scaled, mut point_e) = {
        let mut n = num;
        let mut d = den;
        if shift >= 0 {
            n *= pow10(shift as u32);
        } else {
            d *= pow10((-shift) as u32);
        }
        let (q, r) = n.div_rem(&d);
        let q = if &r * 2 >= d { q + 1u32 } else { q };
        (q, e)
    };
    // rounding may have produced one extra digit (e.g. 999.9 -> 1000)
    let ten = BigInt::from(10);
    let limit = pow10(sig);
    if scaled >= limit {
        scaled /= &ten;
        point_e += 1;
    }
    let digits = scaled.to_string();
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if point_e >= 0 {
        let ip = (point_e + 1) as usize;
        if ip >= digits.len() {
            out.push_str(&digits);
            for _ in digits.len()..ip {
                out.push('0');
            }
        } else {
            out.push_str(&digits[..ip]);
            out.push('.');
            out.push_str(&digits[ip..]);
        }
    } else {
        out.push_str("0.");
        for _ in 0..(-point_e - 1) {
            out.push('0');
        }
        out.push_str(&digits);
    }
    // trim a trailing point artefact like "1." (cannot happen: ip<len path
    // always leaves digits after the point), but trim trailing zeros only
    // for exact decimal values
    out
}

/// Directed-rounded square root: exact when the reduced argument is a
/// perfect square, otherwise an interval of width `<= 10^-digits`.
pub fn sqrt_rat(x: &Rat, digits: u32) -> Result<RealValue, DomainError> {
    if x.is_negative() {
        return Err(DomainError::NegativeRadicand { radicand: render_exact(x) });
    }
    if x.is_zero() {
        return Ok(RealValue::Exact(Rat::zero()));
    }
    let num = x.numer().to_biguint().expect("non-negative");
    let den = x.denom().to_biguint().expect("positive");
    let sn = num.sqrt();
    let sd = den.sqrt();
    if &sn * &sn == num && &sd * &sd == den {
        return Ok(RealValue::Exact(Rat::new(sn.into(), sd.into())));
    }
    // sqrt(n/d) = sqrt(n*d)/d; scale by 10^{2*digits} before the integer root
    let scale = pow10(digits).to_biguint().expect("positive");
    let nd = &num * &den * &scale * &scale;
    let root = nd.sqrt(); // floor
    let denom = BigInt::from(den) * BigInt::from(scale);
    let lo = Rat::new(BigInt::from(root.clone()), denom.clone());
    let hi = Rat::new(BigInt::from(root + 1u32), denom);
    Ok(RealValue::Interval { lo, hi })
}

/// Identifies one of the evaluated bound curves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveId {
    PisaLiminf,
    PisaLimsup,
    PisaBisLiminf,
    PisaBisLimsup,
    Thm1,
    Thm2Rep,
    Thm2Mu,
    Delta,
}

impl CurveId {
    pub fn name(self) -> &'static str {
        match self {
            CurveId::PisaLiminf => "pisa-liminf",
            CurveId::PisaLimsup => "pisa-limsup",
            CurveId::PisaBisLiminf => "pisabis-liminf",
            CurveId::PisaBisLimsup => "pisabis-limsup",
            CurveId::Thm1 => "thm1",
            CurveId::Thm2Rep => "thm2-rep",
            CurveId::Thm2Mu => "thm2-mu",
            CurveId::Delta => "delta",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "pisa-liminf" => CurveId::PisaLiminf,
            "pisa-limsup" => CurveId::PisaLimsup,
            "pisabis-liminf" => CurveId::PisaBisLiminf,
            "pisabis-limsup" => CurveId::PisaBisLimsup,
            "thm1" => CurveId::Thm1,
            "thm2-rep" => CurveId::Thm2Rep,
            "thm2-mu" => CurveId::Thm2Mu,
            "delta" => CurveId::Delta,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug)]
pub struct BoundPoint {
    pub parameter: Rat,
    pub value: RealValue,
    pub curve: CurveId,
}

fn require_mu_ge_2(mu: &Rat) -> Result<(), DomainError> {
    if *mu < rat_int(2) {
        Err(DomainError::OutOfDomain { param: render_exact(mu), domain: "mu >= 2" })
    } else {
        Ok(())
    }
}

/// Lower bounds on liminf / limsup of p(n)/n in terms of the irrationality
/// exponent: `1 + (1 - 2u(u-1)(u-2)) / (u^3 (u-1))` and
/// `1 + (1 - 2u(u-1)(u-2)) / (3u^3 - 6u^2 + 4u - 1)`.
pub fn pisa_bounds(mu: &Rat) -> Result<(Rat, Rat), DomainError> {
    require_mu_ge_2(mu)?;
    let one = Rat::one();
    let shared = &one - rat_int(2) * mu * (mu - &one) * (mu - rat_int(2));
    let liminf = &one + &shared / (mu.pow(3) * (mu - &one));
    let limsup =
        &one + &shared / (rat_int(3) * mu.pow(3) - rat_int(6) * mu.pow(2) + rat_int(4) * mu - &one);
    Ok((liminf, limsup))
}

/// Refined lower bounds: rational liminf curve and the limsup curve
/// `(u + sqrt(4(u-1)^3 + u^2)) / (2u(u-1))`.
pub fn pisabis_bounds(mu: &Rat, digits: u32) -> Result<(Rat, RealValue), DomainError> {
    require_mu_ge_2(mu)?;
    let one = Rat::one();
    let num = -mu.pow(3) + rat_int(2) * mu.pow(2) + mu - &one;
    let den = mu.pow(4) - rat_int(2) * mu.pow(3) + rat_int(3) * mu.pow(2) - rat_int(3) * mu + &one;
    let liminf = &one + num / den;
    let radicand = rat_int(4) * (mu - &one).pow(3) + mu.pow(2);
    let root = sqrt_rat(&radicand, digits)?;
    let denom = rat_int(2) * mu * (mu - &one);
    let limsup = match root {
        RealValue::Exact(s) => RealValue::Exact((mu + s) / &denom),
        RealValue::Interval { lo, hi } => RealValue::Interval {
            lo: (mu + lo) / &denom,
            hi: (mu + hi) / &denom,
        },
    };
    Ok((liminf, limsup))
}

/// The limsup bound as a function of the irrationality exponent:
/// exactly 4/3 at the left endpoint, and
/// `1 + (u + 1 - sqrt(81(u-2)^2 - 10u + 29)) / (8(u-2))` above it.
pub fn thm1_bound(mu: &Rat, digits: u32) -> Result<RealValue, DomainError> {
    require_mu_ge_2(mu)?;
    if *mu == rat_int(2) {
        return Ok(RealValue::Exact(rat(4, 3)));
    }
    let one = Rat::one();
    let radicand = rat_int(81) * (mu - rat_int(2)).pow(2) - rat_int(10) * mu + rat_int(29);
    if radicand.is_negative() {
        return Err(DomainError::NegativeRadicand { radicand: render_exact(&radicand) });
    }
    let root = sqrt_rat(&radicand, digits)?;
    let denom = rat_int(8) * (mu - rat_int(2));
    // the root enters with a minus sign, so the enclosure flips
    Ok(match root {
        RealValue::Exact(s) => RealValue::Exact(&one + (mu + &one - s) / denom),
        RealValue::Interval { lo, hi } => RealValue::Interval {
            lo: &one + (mu + &one - hi) / &denom,
            hi: &one + (mu + &one - lo) / &denom,
        },
    })
}

#[derive(Clone, Debug)]
pub struct DeltaValue {
    pub value: Rat,
    /// Whether the argument lies in the regime `1 <= rho < 4/3` where the
    /// repetition-gain statement applies.
    pub in_regime: bool,
}

/// The repetition-gain constant `(4 - 3r) / (2 (1 + 2r) (2 - r))`.
pub fn delta(rho: &Rat) -> Result<DeltaValue, DomainError> {
    if !rho.is_positive() || *rho >= rat_int(2) {
        return Err(DomainError::OutOfDomain { param: render_exact(rho), domain: "0 < rho < 2" });
    }
    let value = (rat_int(4) - rat_int(3) * rho)
        / (rat_int(2) * (Rat::one() + rat_int(2) * rho) * (rat_int(2) - rho));
    let in_regime = *rho >= Rat::one() && *rho < rat(4, 3);
    Ok(DeltaValue { value, in_regime })
}

/// Repetition and irrationality-exponent bounds as functions of the
/// complexity slope: `1 - delta(rho)` and `2 + (4 - 3r)/(r (9 - 4r))`.
pub fn thm2_bounds(rho: &Rat) -> Result<(Rat, Rat), DomainError> {
    if *rho < Rat::one() || *rho >= rat(4, 3) {
        return Err(DomainError::OutOfDomain { param: render_exact(rho), domain: "1 <= rho < 4/3" });
    }
    let d = delta(rho)?;
    let rep = Rat::one() - d.value;
    let mu = rat_int(2) + (rat_int(4) - rat_int(3) * rho) / (rho * (rat_int(9) - rat_int(4) * rho));
    Ok((rep, mu))
}

pub fn curve_value(curve: CurveId, param: &Rat, digits: u32) -> Result<RealValue, DomainError> {
    Ok(match curve {
        CurveId::PisaLiminf => RealValue::Exact(pisa_bounds(param)?.0),
        CurveId::PisaLimsup => RealValue::Exact(pisa_bounds(param)?.1),
        CurveId::PisaBisLiminf => RealValue::Exact(pisabis_bounds(param, digits)?.0),
        CurveId::PisaBisLimsup => pisabis_bounds(param, digits)?.1,
        CurveId::Thm1 => thm1_bound(param, digits)?,
        CurveId::Thm2Rep => RealValue::Exact(thm2_bounds(param)?.0),
        CurveId::Thm2Mu => RealValue::Exact(thm2_bounds(param)?.1),
        CurveId::Delta => RealValue::Exact(delta(param)?.value),
    })
}

/// Samples a curve over `[from, to]` with the given exact step.
pub fn curve_table(
    curve: CurveId,
    from: &Rat,
    to: &Rat,
    step: &Rat,
    digits: u32,
) -> Result<Vec<BoundPoint>, DomainError> {
    if !step.is_positive() {
        return Err(DomainError::NonPositiveStep);
    }
    let mut points = Vec::new();
    let mut p = from.clone();
    while p <= *to {
        let value = curve_value(curve, &p, digits)?;
        points.push(BoundPoint { parameter: p.clone(), value, curve });
        p += step;
    }
    Ok(points)
}

/// `log2(x) * 2^32` for positive `x`, accurate to ~2^-30. Pure integer
/// arithmetic; used only for reported exponent estimates, never verdicts.
pub fn log2_q32(x: &Rat) -> i64 {
    assert!(x.is_positive(), "log of non-positive value");
    let num = x.numer().to_biguint().expect("positive");
    let den = x.denom().to_biguint().expect("positive");
    let nb = num.bits() as i64;
    let db = den.bits() as i64;
    // scale num/den into [2^79, 2^81)
    let shift = 80 - (nb - db);
    let (n, d) = if shift >= 0 {
        (num << shift as u64, den)
    } else {
        (num, den << (-shift) as u64)
    };
    let q = (n / d).to_u128().expect("scaled quotient fits in u128");
    let p = 127 - q.leading_zeros() as i64; // q in [2^p, 2^{p+1})
    // normalize mantissa to Q63 in [2^63, 2^64)
    let mant = if p >= 63 { (q >> (p - 63)) as u128 } else { q << (63 - p) };
    let mut y = mant;
    let mut frac: i64 = 0;
    for _ in 0..32 {
        y = (y * y) >> 63;
        frac <<= 1;
        if y >= (1u128 << 64) {
            y >>= 1;
            frac |= 1;
        }
    }
    ((p - shift) << 32) + frac
}
