//! Deterministic generators of infinite words over a finite alphabet.
//!
//! A [`WordSource`] describes an infinite letter stream together with its
//! construction. Sources are immutable and restartable: materializing the
//! same source twice yields identical streams, and a shorter materialization
//! is always a prefix of a longer one.

use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::bounds::Rat;

/// Letters are small integers in `[0, alphabet_size)`.
pub type Letter = u8;

/// A finite word together with the alphabet it is written over.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FiniteWord {
    letters: Vec<Letter>,
    alphabet: u8,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WordError {
    /// A letter is outside `[0, alphabet_size)`.
    LetterOutOfRange { letter: Letter, alphabet: u8 },
    /// Alphabets must have at least two letters.
    AlphabetTooSmall(u8),
    EmptyPattern,
    /// `sturmian:` needs at least one continued-fraction coefficient.
    SlopeUnderspecified,
    /// Continued-fraction coefficients must be positive.
    ZeroCoefficient,
    /// The two letters of a Sturmian stream must differ.
    DegenerateLetterPair,
    /// Substitution rules must map the start letter to a word of length >= 2
    /// beginning with the start letter, and every reachable letter needs a
    /// non-empty image.
    NotProlongable(String),
    /// rational:<p>/<q> requires 0 <= p < q.
    ImproperFraction,
    ZeroHorizon,
}

impl fmt::Display for WordError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordError::LetterOutOfRange { letter, alphabet } => {
                write!(f, "letter {letter} outside alphabet of size {alphabet}")
            }
            WordError::AlphabetTooSmall(b) => write!(f, "alphabet size {b} < 2"),
            WordError::EmptyPattern => write!(f, "empty pattern"),
            WordError::SlopeUnderspecified => write!(f, "slope underspecified"),
            WordError::ZeroCoefficient => write!(f, "continued-fraction coefficients must be >= 1"),
            WordError::DegenerateLetterPair => write!(f, "letter pair must be two distinct letters"),
            WordError::NotProlongable(msg) => write!(f, "substitution not prolongable: {msg}"),
            WordError::ImproperFraction => write!(f, "rational source requires 0 <= p < q"),
            WordError::ZeroHorizon => write!(f, "horizon must be >= 1"),
        }
    }
}

impl fmt::Debug for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteWord(b={}, \"", self.alphabet)?;
        for &l in &self.letters {
            write!(f, "{}", digit_char(l))?;
        }
        write!(f, "\")")
    }
}

fn digit_char(l: Letter) -> char {
    if l < 10 {
        (b'0' + l) as char
    } else {
        '?'
    }
}

impl FiniteWord {
    pub fn new(letters: Vec<Letter>, alphabet: u8) -> Result<Self, WordError> {
        if alphabet < 2 {
            return Err(WordError::AlphabetTooSmall(alphabet));
        }
        if let Some(&l) = letters.iter().find(|&&l| l >= alphabet) {
            return Err(WordError::LetterOutOfRange { letter: l, alphabet });
        }
        Ok(FiniteWord { letters, alphabet })
    }

    /// Builds a word from ASCII digits, inferring the alphabet as
    /// `max(2, max digit + 1)`.
    pub fn from_digit_str(s: &str) -> Result<Self, WordError> {
        let mut letters = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c.to_digit(10) {
                Some(d) => letters.push(d as u8),
                None => {
                    return Err(WordError::LetterOutOfRange {
                        letter: u8::MAX,
                        alphabet: 10,
                    })
                }
            }
        }
        let alphabet = letters.iter().copied().max().map_or(2, |m| (m + 1).max(2));
        FiniteWord::new(letters, alphabet)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn alphabet_size(&self) -> u8 {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn digit_string(&self) -> String {
        self.letters.iter().map(|&l| digit_char(l)).collect()
    }

    /// The value of the word read as base-`b` digits, `b` = alphabet size.
    pub fn integer_value(&self) -> BigInt {
        let b = BigInt::from(self.alphabet);
        let mut acc = BigInt::from(0u32);
        for &l in &self.letters {
            acc = acc * &b + BigInt::from(l);
        }
        acc
    }
}

/// A deterministic, restartable source of an infinite letter stream.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WordSource {
    /// `pattern` repeated forever.
    Periodic(FiniteWord),
    /// `pre` followed by `per` repeated forever.
    EventuallyPeriodic { pre: FiniteWord, per: FiniteWord },
    /// The characteristic Sturmian word of the slope given by the continued
    /// fraction `[0; a1, a2, ...]`; the last coefficient repeats forever.
    /// Output letters `letters.0`/`letters.1` play the roles of 0/1.
    Sturmian { cf: Vec<u64>, letters: (Letter, Letter) },
    /// Fixed point of a prolongable substitution, starting from `start`.
    SubstitutionFixedPoint { rules: BTreeMap<Letter, FiniteWord>, start: Letter },
    /// Base-`base` digits of `p/q` with `0 <= p < q` (fraction reduced at
    /// construction). Long division never produces a tail of `base-1`s, so
    /// the expansion convention excluding those is automatic.
    RationalBase { p: u64, q: u64, base: u8 },
    /// A finite prefix glued in front of another stream. The prefix is not
    /// validated against the tail's factors; that is the point — it creates
    /// words with non-empty non-recurrent prefixes.
    Composite { prefix: FiniteWord, tail: Box<WordSource> },
}

/// What is known a priori about the eventual behaviour of the stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PeriodicityClass {
    Periodic,
    EventuallyPeriodic,
    Aperiodic,
    Unknown,
}

impl WordSource {
    pub fn periodic(pattern: FiniteWord) -> Result<Self, WordError> {
        if pattern.is_empty() {
            return Err(WordError::EmptyPattern);
        }
        Ok(WordSource::Periodic(pattern))
    }

    pub fn eventually_periodic(pre: FiniteWord, per: FiniteWord) -> Result<Self, WordError> {
        if per.is_empty() {
            return Err(WordError::EmptyPattern);
        }
        Ok(WordSource::EventuallyPeriodic { pre, per })
    }

    pub fn sturmian(cf: Vec<u64>) -> Result<Self, WordError> {
        Self::sturmian_with_letters(cf, (0, 1))
    }

    pub fn sturmian_with_letters(cf: Vec<u64>, letters: (Letter, Letter)) -> Result<Self, WordError> {
        if cf.is_empty() {
            return Err(WordError::SlopeUnderspecified);
        }
        if cf.iter().any(|&a| a == 0) {
            return Err(WordError::ZeroCoefficient);
        }
        if letters.0 == letters.1 {
            return Err(WordError::DegenerateLetterPair);
        }
        Ok(WordSource::Sturmian { cf, letters })
    }

    pub fn substitution(rules: BTreeMap<Letter, FiniteWord>, start: Letter) -> Result<Self, WordError> {
        let start_image = rules
            .get(&start)
            .ok_or_else(|| WordError::NotProlongable(format!("no rule for start letter {start}")))?;
        if start_image.len() < 2 {
            return Err(WordError::NotProlongable(
                "image of the start letter must have length >= 2".to_owned(),
            ));
        }
        if start_image.letters()[0] != start {
            return Err(WordError::NotProlongable(
                "image of the start letter must begin with it".to_owned(),
            ));
        }
        for (l, image) in &rules {
            if image.is_empty() {
                return Err(WordError::NotProlongable(format!("empty image for letter {l}")));
            }
            for &m in image.letters() {
                if !rules.contains_key(&m) {
                    return Err(WordError::NotProlongable(format!(
                        "letter {m} reachable from {l} has no rule"
                    )));
                }
            }
        }
        Ok(WordSource::SubstitutionFixedPoint { rules, start })
    }

    pub fn rational_base(p: u64, q: u64, base: u8) -> Result<Self, WordError> {
        if base < 2 {
            return Err(WordError::AlphabetTooSmall(base));
        }
        if q == 0 || p >= q {
            return Err(WordError::ImproperFraction);
        }
        let g = gcd_u64(p, q);
        Ok(WordSource::RationalBase { p: p / g, q: q / g, base })
    }

    pub fn composite(prefix: FiniteWord, tail: WordSource) -> Self {
        WordSource::Composite { prefix, tail: Box::new(tail) }
    }

    pub fn alphabet_size(&self) -> u8 {
        match self {
            WordSource::Periodic(p) => p.alphabet_size(),
            WordSource::EventuallyPeriodic { pre, per } => pre.alphabet_size().max(per.alphabet_size()),
            WordSource::Sturmian { letters, .. } => letters.0.max(letters.1).max(1) + 1,
            WordSource::SubstitutionFixedPoint { rules, .. } => rules
                .iter()
                .map(|(l, w)| (*l + 1).max(w.alphabet_size()))
                .max()
                .unwrap_or(2)
                .max(2),
            WordSource::RationalBase { base, .. } => *base,
            WordSource::Composite { prefix, tail } => prefix.alphabet_size().max(tail.alphabet_size()),
        }
    }

    pub fn periodicity(&self) -> PeriodicityClass {
        match self {
            WordSource::Periodic(_) => PeriodicityClass::Periodic,
            WordSource::EventuallyPeriodic { .. } | WordSource::RationalBase { .. } => {
                PeriodicityClass::EventuallyPeriodic
            }
            WordSource::Sturmian { .. } => PeriodicityClass::Aperiodic,
            WordSource::SubstitutionFixedPoint { .. } => PeriodicityClass::Unknown,
            WordSource::Composite { tail, .. } => match tail.periodicity() {
                PeriodicityClass::Periodic => PeriodicityClass::EventuallyPeriodic,
                other => other,
            },
        }
    }

    /// Preperiod and cycle of the digit stream, when the source is known
    /// to be eventually periodic.
    pub fn periodic_form(&self) -> Option<(Vec<Letter>, Vec<Letter>)> {
        match self {
            WordSource::Periodic(pat) => Some((Vec::new(), pat.letters().to_vec())),
            WordSource::EventuallyPeriodic { pre, per } => {
                Some((pre.letters().to_vec(), per.letters().to_vec()))
            }
            WordSource::RationalBase { p, q, base } => {
                // long-division remainders cycle within q steps
                let b = *base as u128;
                let q = *q as u128;
                let mut seen: Vec<u128> = Vec::new();
                let mut digits: Vec<Letter> = Vec::new();
                let mut rem = *p as u128;
                loop {
                    if let Some(at) = seen.iter().position(|&r| r == rem) {
                        return Some((digits[..at].to_vec(), digits[at..].to_vec()));
                    }
                    seen.push(rem);
                    rem *= b;
                    digits.push((rem / q) as u8);
                    rem %= q;
                }
            }
            WordSource::Composite { prefix, tail } => {
                let (mut pre, cycle) = tail.periodic_form()?;
                let mut full = prefix.letters().to_vec();
                full.append(&mut pre);
                Some((full, cycle))
            }
            _ => None,
        }
    }

    /// The exact value of `sum x_j b^{-j}` (b the source's alphabet size)
    /// when the stream is eventually periodic; `None` otherwise.
    pub fn exact_value(&self) -> Option<Rat> {
        let (pre, cycle) = self.periodic_form()?;
        let b = BigInt::from(self.alphabet_size());
        let pb = pow_bigint(&b, pre.len());
        let cyc = pow_bigint(&b, cycle.len()) - BigInt::one();
        let num = value_of_letters(&pre, &b) * &cyc + value_of_letters(&cycle, &b);
        Some(Rat::new(num, pb * cyc))
    }

    /// First `l` letters of the stream.
    pub fn materialize(&self, l: usize) -> Result<FiniteWord, WordError> {
        if l == 0 {
            return Err(WordError::ZeroHorizon);
        }
        let alphabet = self.alphabet_size();
        let mut letters = Vec::with_capacity(l);
        self.fill(l, &mut letters)?;
        debug_assert_eq!(letters.len(), l);
        FiniteWord::new(letters, alphabet)
    }

    /// Appends exactly `l` letters of the stream to `out`.
    fn fill(&self, l: usize, out: &mut Vec<Letter>) -> Result<(), WordError> {
        let target = out.len() + l;
        match self {
            WordSource::Periodic(pat) => {
                if pat.is_empty() {
                    return Err(WordError::EmptyPattern);
                }
                let mut it = pat.letters().iter().cycle();
                while out.len() < target {
                    out.push(*it.next().unwrap());
                }
            }
            WordSource::EventuallyPeriodic { pre, per } => {
                if per.is_empty() {
                    return Err(WordError::EmptyPattern);
                }
                out.extend(pre.letters().iter().take(l));
                let mut it = per.letters().iter().cycle();
                while out.len() < target {
                    out.push(*it.next().unwrap());
                }
            }
            WordSource::Sturmian { cf, letters } => {
                let raw = sturmian_prefix(cf, l)?;
                out.extend(raw.iter().map(|&x| if x == 0 { letters.0 } else { letters.1 }));
            }
            WordSource::SubstitutionFixedPoint { rules, start } => {
                out.extend(substitution_prefix(rules, *start, l)?);
            }
            WordSource::RationalBase { p, q, base } => {
                let mut rem = *p as u128;
                let b = *base as u128;
                let q = *q as u128;
                for _ in 0..l {
                    rem *= b;
                    out.push((rem / q) as u8);
                    rem %= q;
                }
            }
            WordSource::Composite { prefix, tail } => {
                let take = l.min(prefix.len());
                out.extend_from_slice(&prefix.letters()[..take]);
                if l > take {
                    tail.fill(l - take, out)?;
                }
            }
        }
        Ok(())
    }

    /// Canonical text form; `parse` of the result reproduces the source.
    pub fn canonical_spec(&self) -> String {
        match self {
            WordSource::Periodic(p) => format!("periodic:{}", p.digit_string()),
            WordSource::EventuallyPeriodic { pre, per } => {
                format!("eventually:{}|{}", pre.digit_string(), per.digit_string())
            }
            WordSource::Sturmian { cf, .. } => {
                let coeffs: Vec<String> = cf.iter().map(|a| format!("{a}")).collect();
                format!("sturmian:{},rep", coeffs.join(","))
            }
            WordSource::SubstitutionFixedPoint { rules, start } => {
                let mut parts = Vec::new();
                parts.push(format!("{}->{}", digit_char(*start), rules[start].digit_string()));
                for (l, w) in rules {
                    if l != start {
                        parts.push(format!("{}->{}", digit_char(*l), w.digit_string()));
                    }
                }
                format!("subst:{}", parts.join(","))
            }
            WordSource::RationalBase { p, q, base } => format!("rational:{p}/{q}@{base}"),
            WordSource::Composite { prefix, tail } => {
                format!("concat:{}|{}", prefix.digit_string(), tail.canonical_spec())
            }
        }
    }

    /// Parses the mini-grammar:
    /// `periodic:<letters>` | `eventually:<pre>|<per>` |
    /// `sturmian:<a1>,<a2>,...[,rep]` | `subst:<l>-><word>(,<l>-><word>)*` |
    /// `rational:<p>/<q>@<base>` | `concat:<letters>|<spec>`.
    pub fn parse(spec: &str) -> Result<Self, ParseError> {
        parse_spec(spec, 0)
    }
}

/// The characteristic word of slope `[0; a1, a2, ...]` over `{0, 1}`,
/// letter n being `floor((n+1)a) - floor(na)` for the canonical slope
/// representative below 1/2. Slopes above 1/2 (first coefficient 1) are
/// replaced by `1 - a`, which swaps the two letters and keeps the stream
/// starting with the majority letter 0; all factor statistics are
/// letter-swap invariant. Exact by construction: the prefix is assembled
/// from the standard-word recursion, never from floating point.
pub fn sturmian_stream(cf: &[u64], l: usize) -> Result<FiniteWord, WordError> {
    if l == 0 {
        return Err(WordError::ZeroHorizon);
    }
    let letters = sturmian_prefix(cf, l)?;
    FiniteWord::new(letters, 2)
}

/// Canonical slope representative: `[0; 1, a2, a3, ...] = 1 - [0; a2+1, a3, ...]`.
pub fn normalized_cf(cf: &[u64]) -> Result<Vec<u64>, WordError> {
    if cf.is_empty() {
        return Err(WordError::SlopeUnderspecified);
    }
    if cf.iter().any(|&a| a == 0) {
        return Err(WordError::ZeroCoefficient);
    }
    if cf[0] != 1 {
        return Ok(cf.to_vec());
    }
    let rest: Vec<u64> = if cf.len() == 1 { vec![cf[0]] } else { cf[1..].to_vec() };
    let mut out = Vec::with_capacity(rest.len() + 1);
    out.push(rest[0] + 1);
    out.extend_from_slice(&rest[1..]);
    if rest.len() == 1 {
        // the repeating coefficient stays `rest[0]`, only its first copy
        // is absorbed into the new leading coefficient
        out.push(rest[0]);
    }
    Ok(out)
}

/// Streams the fixed point of a prolongable substitution: the image of the
/// prefix read so far is again a prefix, and production stays strictly
/// ahead of consumption because the start image has length >= 2.
fn substitution_prefix(
    rules: &BTreeMap<Letter, FiniteWord>,
    start: Letter,
    l: usize,
) -> Result<Vec<Letter>, WordError> {
    let mut buf = Vec::with_capacity(l + 16);
    buf.push(start);
    let mut read = 0usize;
    while buf.len() < l {
        let letter = buf[read];
        read += 1;
        let image = rules
            .get(&letter)
            .ok_or_else(|| WordError::NotProlongable(format!("no rule for letter {letter}")))?;
        if read == 1 {
            // buf already holds `start`, the first letter of its own image
            buf.extend_from_slice(&image.letters()[1..]);
        } else {
            buf.extend_from_slice(image.letters());
        }
        if read >= buf.len() {
            return Err(WordError::NotProlongable("substitution does not grow".to_owned()));
        }
    }
    buf.truncate(l);
    Ok(buf)
}

fn coeff(cf: &[u64], k: usize) -> u64 {
    // 1-based; the last listed coefficient repeats forever
    if k <= cf.len() {
        cf[k - 1]
    } else {
        *cf.last().unwrap()
    }
}

fn sturmian_prefix(cf: &[u64], l: usize) -> Result<Vec<u8>, WordError> {
    let cf = normalized_cf(cf)?;
    // s_{-1} = 1, s_0 = 0, s_1 = 0^{a1-1} 1, s_k = s_{k-1}^{a_k} s_{k-2}.
    // Partial powers of s_{k-1} are already prefixes of the limit, so the
    // expansion can stop as soon as `l` letters exist.
    let mut prev: Vec<u8> = vec![1];
    let mut cur: Vec<u8> = vec![0];
    let mut k = 0usize;
    while cur.len() < l {
        k += 1;
        let reps = if k == 1 { coeff(&cf, 1) - 1 } else { coeff(&cf, k) };
        let mut next = Vec::with_capacity((cur.len() + prev.len()).min(2 * l + 2));
        for _ in 0..reps {
            next.extend_from_slice(&cur);
            if next.len() >= l {
                next.truncate(l);
                return Ok(next);
            }
        }
        next.extend_from_slice(&prev);
        prev = cur;
        cur = next;
    }
    cur.truncate(l);
    Ok(cur)
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

fn pow_bigint(b: &BigInt, e: usize) -> BigInt {
    let mut acc = BigInt::one();
    for _ in 0..e {
        acc *= b;
    }
    acc
}

fn value_of_letters(letters: &[Letter], b: &BigInt) -> BigInt {
    let mut acc = BigInt::from(0u32);
    for &l in letters {
        acc = acc * b + BigInt::from(l);
    }
    acc
}

/// Syntax error with a 1-based byte position into the spec string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.pos, self.msg)
    }
}

fn err(pos: usize, msg: impl Into<String>) -> ParseError {
    ParseError { pos: pos + 1, msg: msg.into() }
}

fn parse_letters(s: &str, at: usize) -> Result<Vec<Letter>, ParseError> {
    if s.is_empty() {
        return Err(err(at, "expected at least one digit"));
    }
    s.char_indices()
        .map(|(i, c)| {
            c.to_digit(10)
                .map(|d| d as u8)
                .ok_or_else(|| err(at + i, format!("expected a digit 0-9, found {c:?}")))
        })
        .collect()
}

fn letters_to_word(letters: Vec<Letter>) -> FiniteWord {
    let alphabet = letters.iter().copied().max().map_or(2, |m| (m + 1).max(2));
    FiniteWord::new(letters, alphabet).expect("inferred alphabet covers all letters")
}

fn map_word_err(e: WordError, at: usize) -> ParseError {
    err(at, format!("{e}"))
}

fn parse_spec(spec: &str, at: usize) -> Result<WordSource, ParseError> {
    let colon = spec
        .find(':')
        .ok_or_else(|| err(at + spec.len(), "expected `<scheme>:<body>`"))?;
    let (scheme, rest) = (&spec[..colon], &spec[colon + 1..]);
    let body_at = at + colon + 1;
    match scheme {
        "periodic" => {
            let letters = parse_letters(rest, body_at)?;
            WordSource::periodic(letters_to_word(letters)).map_err(|e| map_word_err(e, body_at))
        }
        "eventually" => {
            let bar = rest
                .find('|')
                .ok_or_else(|| err(body_at + rest.len(), "expected `<pre>|<per>`"))?;
            let pre = parse_letters(&rest[..bar], body_at)?;
            let per = parse_letters(&rest[bar + 1..], body_at + bar + 1)?;
            let b = pre
                .iter()
                .chain(per.iter())
                .copied()
                .max()
                .map_or(2, |m| (m + 1).max(2));
            WordSource::eventually_periodic(
                FiniteWord::new(pre, b).map_err(|e| map_word_err(e, body_at))?,
                FiniteWord::new(per, b).map_err(|e| map_word_err(e, body_at + bar + 1))?,
            )
            .map_err(|e| map_word_err(e, body_at))
        }
        "sturmian" => {
            if rest.is_empty() {
                return Err(err(body_at, "slope underspecified"));
            }
            let mut cf = Vec::new();
            let mut cursor = body_at;
            let mut saw_rep = false;
            for part in rest.split(',') {
                if saw_rep {
                    return Err(err(cursor, "`rep` must be the final token"));
                }
                if part == "rep" {
                    if cf.is_empty() {
                        return Err(err(cursor, "`rep` needs a preceding coefficient"));
                    }
                    saw_rep = true;
                } else {
                    let a: u64 = part
                        .parse()
                        .map_err(|_| err(cursor, format!("expected a positive integer, found {part:?}")))?;
                    cf.push(a);
                }
                cursor += part.len() + 1;
            }
            // With or without a trailing `rep`, the last coefficient repeats
            // forever; a finite continued fraction would describe a rational
            // slope, which is not a Sturmian word.
            WordSource::sturmian(cf).map_err(|e| map_word_err(e, body_at))
        }
        "subst" => {
            let mut rules = BTreeMap::new();
            let mut cursor = body_at;
            let mut start = None;
            if rest.is_empty() {
                return Err(err(body_at, "expected `<l>-><word>`"));
            }
            for part in rest.split(',') {
                let arrow = part
                    .find("->")
                    .ok_or_else(|| err(cursor, "expected `<l>-><word>`"))?;
                let lhs = parse_letters(&part[..arrow], cursor)?;
                if lhs.len() != 1 {
                    return Err(err(cursor, "rule left-hand side must be a single letter"));
                }
                let rhs = parse_letters(&part[arrow + 2..], cursor + arrow + 2)?;
                if rules.insert(lhs[0], rhs).is_some() {
                    return Err(err(cursor, format!("duplicate rule for letter {}", lhs[0])));
                }
                if start.is_none() {
                    start = Some(lhs[0]);
                }
                cursor += part.len() + 1;
            }
            let alphabet = rules
                .iter()
                .flat_map(|(l, w)| w.iter().copied().chain(core::iter::once(*l)))
                .max()
                .map_or(2, |m| (m + 1).max(2));
            let rules = rules
                .into_iter()
                .map(|(l, w)| Ok((l, FiniteWord::new(w, alphabet).map_err(|e| map_word_err(e, body_at))?)))
                .collect::<Result<BTreeMap<_, _>, ParseError>>()?;
            WordSource::substitution(rules, start.unwrap()).map_err(|e| map_word_err(e, body_at))
        }
        "rational" => {
            let slash = rest
                .find('/')
                .ok_or_else(|| err(body_at + rest.len(), "expected `<p>/<q>@<base>`"))?;
            let atpos = rest
                .find('@')
                .ok_or_else(|| err(body_at + rest.len(), "expected `<p>/<q>@<base>`"))?;
            if atpos < slash {
                return Err(err(body_at + atpos, "expected `<p>/<q>@<base>`"));
            }
            let p: u64 = rest[..slash]
                .parse()
                .map_err(|_| err(body_at, "expected an integer numerator"))?;
            let q: u64 = rest[slash + 1..atpos]
                .parse()
                .map_err(|_| err(body_at + slash + 1, "expected an integer denominator"))?;
            let base: u8 = rest[atpos + 1..]
                .parse()
                .map_err(|_| err(body_at + atpos + 1, "expected a base in 2..=10"))?;
            if !(2..=10).contains(&base) {
                return Err(err(body_at + atpos + 1, "base must be in 2..=10"));
            }
            WordSource::rational_base(p, q, base).map_err(|e| map_word_err(e, body_at))
        }
        "concat" => {
            let bar = rest
                .find('|')
                .ok_or_else(|| err(body_at + rest.len(), "expected `<letters>|<spec>`"))?;
            let prefix = parse_letters(&rest[..bar], body_at)?;
            let tail = parse_spec(&rest[bar + 1..], body_at + bar + 1)?;
            let b = prefix
                .iter()
                .copied()
                .max()
                .map_or(2, |m| (m + 1).max(2))
                .max(tail.alphabet_size());
            let prefix = FiniteWord::new(prefix, b).map_err(|e| map_word_err(e, body_at))?;
            Ok(WordSource::composite(prefix, tail))
        }
        other => Err(err(at, format!("unknown scheme {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(spec: &str, l: usize) -> String {
        WordSource::parse(spec).unwrap().materialize(l).unwrap().digit_string()
    }

    #[test]
    fn periodic_repeats() {
        assert_eq!(mat("periodic:01", 6), "010101");
    }

    #[test]
    fn fibonacci_substitution_prefix() {
        assert_eq!(mat("subst:0->01,1->0", 13), "0100101001001");
    }

    #[test]
    fn rational_one_third_binary() {
        assert_eq!(mat("rational:1/3@2", 6), "010101");
    }

    #[test]
    fn rational_reduces() {
        let s = WordSource::parse("rational:2/6@2").unwrap();
        assert_eq!(s.canonical_spec(), "rational:1/3@2");
    }

    #[test]
    fn sturmian_golden_is_fibonacci() {
        assert_eq!(mat("sturmian:1,rep", 13), "0100101001001");
        // equal to the substitution fixed point, letter by letter
        assert_eq!(mat("sturmian:1,rep", 400), mat("subst:0->01,1->0", 400));
    }

    #[test]
    fn sturmian_single_letter_horizon() {
        let w = sturmian_stream(&[5, 2], 1).unwrap();
        assert!(w.letters()[0] <= 1);
    }

    #[test]
    fn sturmian_rejects_empty_cf() {
        assert_eq!(WordSource::sturmian(vec![]), Err(WordError::SlopeUnderspecified));
    }

    #[test]
    fn composite_prefixes() {
        assert_eq!(mat("concat:1|subst:0->01,1->0", 6), "101001");
        assert_eq!(mat("concat:1|periodic:0", 4), "1000");
    }

    #[test]
    fn substitution_must_be_prolongable() {
        // 0 -> 10 does not begin with 0
        assert!(WordSource::parse("subst:0->10,1->0").is_err());
        // image of length 1
        assert!(WordSource::parse("subst:0->0").is_err());
        // missing rule for letter 1
        assert!(WordSource::parse("subst:0->01").is_err());
    }

    #[test]
    fn parse_error_positions() {
        let e = WordSource::parse("periodic:01x1").unwrap_err();
        assert_eq!(e.pos, 12);
        assert!(WordSource::parse("nonsense:0").is_err());
    }

    #[test]
    fn canonical_round_trip() {
        for spec in [
            "periodic:0110",
            "eventually:11010|0110",
            "sturmian:1,2,rep",
            "subst:0->01,1->0",
            "rational:1/7@10",
            "concat:10|subst:0->01,1->0",
        ] {
            let s = WordSource::parse(spec).unwrap();
            let printed = s.canonical_spec();
            assert_eq!(WordSource::parse(&printed).unwrap(), s, "spec {spec}");
        }
    }

    #[test]
    fn exact_values() {
        let third = WordSource::parse("rational:1/3@2").unwrap().exact_value().unwrap();
        assert_eq!(third, Rat::new(1.into(), 3.into()));
        let p = WordSource::parse("periodic:01").unwrap().exact_value().unwrap();
        assert_eq!(p, Rat::new(1.into(), 3.into()));
        let c = WordSource::parse("concat:1|periodic:0").unwrap().exact_value().unwrap();
        assert_eq!(c, Rat::new(1.into(), 2.into()));
        assert!(WordSource::parse("sturmian:1,rep").unwrap().exact_value().is_none());
        // a prefix widening the alphabet reinterprets the digits: the
        // value must match the stream read in the composite's base
        let mixed = WordSource::parse("concat:2|periodic:01").unwrap();
        assert_eq!(mixed.alphabet_size(), 3);
        // 0.2(01)... in base 3 = (2 + 1/8)/3
        assert_eq!(mixed.exact_value().unwrap(), Rat::new(17.into(), 24.into()));
    }

    #[test]
    fn periodic_form_of_rational() {
        let (pre, cycle) = WordSource::parse("rational:5/12@10").unwrap().periodic_form().unwrap();
        // 5/12 = 0.41666...
        assert_eq!(pre, vec![4, 1]);
        assert_eq!(cycle, vec![6]);
        let (pre, cycle) = WordSource::parse("rational:1/7@10").unwrap().periodic_form().unwrap();
        assert!(pre.is_empty());
        assert_eq!(cycle, vec![1, 4, 2, 8, 5, 7]);
    }
}
