//! Brute-force reference implementations for cross-checking.
//!
//! Everything here favours obviousness over speed: hash-set window
//! enumeration, double-loop repetition search, rational floor arithmetic
//! for mechanical words, binary-search integer square roots. Nothing is
//! shared with the main crate's implementation paths; these functions are
//! the independent side of every two-route check.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use num_bigint::{BigInt, BigUint};
use num_rational::Ratio;
use num_traits::{One, Zero};

pub type Rat = Ratio<BigInt>;

/// Distinct n-factors by direct window hashing.
pub fn distinct_count(word: &[u8], n: usize) -> u64 {
    if n == 0 || n > word.len() {
        return if n == 0 { 1 } else { 0 };
    }
    let set: HashSet<&[u8]> = word.windows(n).collect();
    set.len() as u64
}

pub fn factor_set(word: &[u8], n: usize) -> BTreeSet<Vec<u8>> {
    word.windows(n).map(|w| w.to_vec()).collect()
}

/// All occurrence start positions (1-based) of `factor`.
pub fn occurrences(word: &[u8], factor: &[u8]) -> Vec<u32> {
    if factor.is_empty() || factor.len() > word.len() {
        return Vec::new();
    }
    word.windows(factor.len())
        .enumerate()
        .filter(|(_, w)| *w == factor)
        .map(|(i, _)| i as u32 + 1)
        .collect()
}

pub fn contains(word: &[u8], factor: &[u8]) -> bool {
    factor.len() <= word.len() && word.windows(factor.len()).any(|w| w == factor)
}

/// The repetition value by the O(L^2 n) double loop over window pairs:
/// least m such that the window at offset m equals an earlier one.
pub fn repetition(word: &[u8], n: usize) -> Option<u32> {
    let l = word.len();
    if n == 0 || n + 1 > l {
        return None;
    }
    for m in 1..=l - n {
        let late = &word[m..m + n];
        for i in 0..m {
            if &word[i..i + n] == late {
                return Some(m as u32);
            }
        }
    }
    None
}

/// r(n) for every n at once in O(L^2): longest common extensions along
/// anti-diagonals give, for each later window start j, the largest n with
/// a matching earlier window; the first j reaching n is r(n).
pub fn repetition_table_quadratic(word: &[u8]) -> Vec<Option<u32>> {
    let l = word.len();
    let mut best = vec![0usize; l]; // best[j] = max_{i<j} lcp(suffix_i, suffix_j)
    for d in 1..l {
        let mut lcp = 0usize;
        for i in (0..l - d).rev() {
            lcp = if word[i] == word[i + d] { lcp + 1 } else { 0 };
            if lcp > best[i + d] {
                best[i + d] = lcp;
            }
        }
    }
    let mut table = vec![None; l];
    let mut reached = 0usize;
    for (j, &b) in best.iter().enumerate() {
        if b > reached {
            for n in reached + 1..=b {
                if n < l {
                    table[n] = Some(j as u32);
                }
            }
            reached = b;
        }
    }
    table
}

pub fn right_extensions(word: &[u8], factor: &[u8]) -> Vec<u8> {
    let mut out = BTreeSet::new();
    for (i, w) in word.windows(factor.len()).enumerate() {
        if w == factor && i + factor.len() < word.len() {
            out.insert(word[i + factor.len()]);
        }
    }
    out.into_iter().collect()
}

pub fn left_extensions(word: &[u8], factor: &[u8]) -> Vec<u8> {
    let mut out = BTreeSet::new();
    for (i, w) in word.windows(factor.len()).enumerate() {
        if w == factor && i > 0 {
            out.insert(word[i - 1]);
        }
    }
    out.into_iter().collect()
}

pub fn right_special(word: &[u8], n: usize) -> BTreeSet<Vec<u8>> {
    factor_set(word, n)
        .into_iter()
        .filter(|f| right_extensions(word, f).len() >= 2)
        .collect()
}

pub fn left_special(word: &[u8], n: usize) -> BTreeSet<Vec<u8>> {
    factor_set(word, n)
        .into_iter()
        .filter(|f| left_extensions(word, f).len() >= 2)
        .collect()
}

/// Minimal s >= 0 such that every n-factor of word[s..] occurs at least
/// twice in word[s..], by direct re-counting per candidate.
pub fn split_s(word: &[u8], n: usize) -> usize {
    'candidates: for s in 0..=word.len() {
        let suffix = &word[s..];
        if suffix.len() < n {
            return s; // vacuous: no windows left
        }
        let mut counts: HashMap<&[u8], u32> = HashMap::new();
        for w in suffix.windows(n) {
            *counts.entry(w).or_insert(0) += 1;
        }
        for (_, c) in counts {
            if c < 2 {
                continue 'candidates;
            }
        }
        return s;
    }
    word.len()
}

/// A brute-force ∞-shape reading of level n: factor sets of the recurrent
/// tail, degree counts, two forced walks, essential-chain orientation and
/// pattern-scan multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NaiveConfig {
    pub n: usize,
    pub w: Vec<u8>,
    pub k: usize,
    pub l: usize,
    pub b: u32,
    pub special_spelled: Vec<u8>,
    pub other_spelled: Vec<u8>,
}

fn spell(parts: &[&[Vec<u8>]]) -> Vec<u8> {
    // each part is a cycle given as vertices w, ..., w; concatenation
    // shares the endpoint w
    let mut out = Vec::new();
    for (pi, part) in parts.iter().enumerate() {
        let last = part.len() - 1;
        for (vi, v) in part.iter().enumerate() {
            if vi == last {
                if pi + 1 == parts.len() {
                    out.extend_from_slice(v);
                }
            } else {
                out.push(v[0]);
            }
        }
    }
    out
}

pub fn naive_infinity_config(word: &[u8], n: usize) -> Option<NaiveConfig> {
    let s1 = split_s(word, n + 1);
    let z = &word[s1..];
    if z.len() < n + 1 {
        return None;
    }
    let vertices: Vec<Vec<u8>> = factor_set(z, n).into_iter().collect();
    let edges: Vec<Vec<u8>> = factor_set(z, n + 1).into_iter().collect();
    let vid: BTreeMap<&[u8], usize> =
        vertices.iter().enumerate().map(|(i, v)| (v.as_slice(), i)).collect();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); vertices.len()];
    let mut inc: Vec<Vec<usize>> = vec![Vec::new(); vertices.len()];
    for e in &edges {
        let from = vid[&e[..n]];
        let to = vid[&e[1..]];
        out[from].push(to);
        inc[to].push(from);
    }
    let specials: Vec<usize> = (0..vertices.len())
        .filter(|&v| out[v].len() >= 2 || inc[v].len() >= 2)
        .collect();
    let w = match specials.as_slice() {
        [w] => *w,
        _ => return None,
    };
    if out[w].len() != 2 || inc[w].len() != 2 {
        return None;
    }
    let walk = |mut v: usize| -> Option<Vec<usize>> {
        let mut path = vec![w, v];
        while v != w {
            if out[v].len() != 1 {
                return None;
            }
            v = out[v][0];
            path.push(v);
            if path.len() > vertices.len() + 2 {
                return None;
            }
        }
        Some(path)
    };
    let c1 = walk(out[w][0])?;
    let c2 = walk(out[w][1])?;
    if (c1.len() - 2) + (c2.len() - 2) + 1 != vertices.len()
        || (c1.len() - 1) + (c2.len() - 1) != edges.len()
    {
        return None;
    }
    let verts = |c: &[usize]| -> Vec<Vec<u8>> { c.iter().map(|&v| vertices[v].clone()).collect() };
    let (v1, v2) = (verts(&c1), verts(&c2));

    // orientation by the right-special suffix chain on the full word
    let closing = |c: &[Vec<u8>]| -> Vec<u8> {
        let mut e = c[c.len() - 2].clone();
        e.push(*c[c.len() - 1].last().unwrap());
        e
    };
    let (cl1, cl2) = (closing(&v1), closing(&v2));
    let depth = 2 * (c1.len() + c2.len()) + 8;
    let mut alive: BTreeSet<Vec<u8>> = right_special(word, n + 1);
    for d in 1..=depth.min(word.len().saturating_sub(n + 2)) {
        let rs = right_special(word, n + 1 + d);
        alive.retain(|c| rs.iter().any(|w| w.ends_with(c.as_slice())));
        if alive.is_empty() {
            return None;
        }
    }
    let essential: Vec<Vec<u8>> = alive.into_iter().collect();
    let (u_cycle, v_cycle) = match essential.as_slice() {
        [e] if *e == cl1 => (v1, v2),
        [e] if *e == cl2 => (v2, v1),
        _ => return None,
    };

    // multiplicity: largest j with the word U V^j U present in the tail
    let mut b = None;
    for j in 1.. {
        let mut parts: Vec<&[Vec<u8>]> = vec![&u_cycle];
        for _ in 0..j {
            parts.push(&v_cycle);
        }
        parts.push(&u_cycle);
        let pattern = spell(&parts);
        if pattern.len() > z.len() {
            break;
        }
        if contains(z, &pattern) {
            b = Some(j as u32);
        } else if b.is_some() {
            break;
        } else if j > 4 {
            break;
        }
    }
    let b = b?;
    Some(NaiveConfig {
        n,
        w: vertices[w].clone(),
        k: u_cycle.len() - 1,
        l: v_cycle.len() - 1,
        b,
        special_spelled: spell(&[&u_cycle]),
        other_spelled: spell(&[&v_cycle]),
    })
}

/// All ∞-shape levels up to n_max, brute force.
pub fn naive_infinity_levels(word: &[u8], n_max: usize) -> Vec<NaiveConfig> {
    (1..=n_max).filter_map(|n| naive_infinity_config(word, n)).collect()
}

/// Characteristic word letters floor((j+1)a) - floor(ja) computed with
/// exact rational convergent enclosures of the slope. Slopes with first
/// coefficient 1 are replaced by 1 - a (the letter-swapped representative
/// below 1/2), matching the generator convention.
pub fn mechanical_word(cf: &[u64], l: usize) -> Vec<u8> {
    assert!(!cf.is_empty() && cf.iter().all(|&a| a > 0));
    let slope: Vec<u64> = if cf[0] == 1 {
        let rest: Vec<u64> = if cf.len() == 1 { vec![1] } else { cf[1..].to_vec() };
        let mut v = vec![rest[0] + 1];
        v.extend_from_slice(&rest[1..]);
        if rest.len() == 1 {
            v.push(rest[0]);
        }
        v
    } else {
        cf.to_vec()
    };
    let coeff = |k: usize| -> u64 {
        if k <= slope.len() {
            slope[k - 1]
        } else {
            *slope.last().unwrap()
        }
    };

    // convergents p_k/q_k; successive ones bracket the slope
    let mut terms = 8usize;
    loop {
        let (mut p0, mut q0) = (BigInt::one(), BigInt::zero()); // p_{-1}/q_{-1}
        let (mut p1, mut q1) = (BigInt::zero(), BigInt::one()); // p_0/q_0
        for k in 1..=terms {
            let a = BigInt::from(coeff(k));
            let p2 = &a * &p1 + &p0;
            let q2 = &a * &q1 + &q0;
            p0 = std::mem::replace(&mut p1, p2);
            q0 = std::mem::replace(&mut q1, q2);
        }
        let a = Rat::new(p0.clone(), q0.clone());
        let b = Rat::new(p1.clone(), q1.clone());
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let mut letters = Vec::with_capacity(l);
        let mut ok = true;
        let mut prev_floor = BigInt::zero();
        for j in 1..=l as u64 + 1 {
            let jj = Rat::from_integer(BigInt::from(j));
            let f_lo = (&jj * &lo).floor().to_integer();
            let f_hi = (&jj * &hi).floor().to_integer();
            if f_lo != f_hi {
                ok = false;
                break;
            }
            if j >= 2 {
                let d = &f_lo - &prev_floor;
                letters.push(if d.is_zero() { 0u8 } else { 1u8 });
            }
            prev_floor = f_lo;
        }
        if ok {
            return letters;
        }
        terms *= 2;
        assert!(terms < 1 << 20, "convergent precision runaway");
    }
}

/// Integer square root by bitwise binary search (independent of the
/// library isqrt).
pub fn isqrt_binary(n: &BigUint) -> BigUint {
    if n.is_zero() {
        return BigUint::zero();
    }
    let bits = n.bits();
    let mut r = BigUint::zero();
    let mut bit = bits / 2 + 1;
    loop {
        let candidate = &r | (BigUint::one() << bit);
        if &candidate * &candidate <= *n {
            r = candidate;
        }
        if bit == 0 {
            break;
        }
        bit -= 1;
    }
    r
}

/// Decimal digits (as a string "d.ddd...") of sqrt(num/den) truncated to
/// `digits` fraction digits.
pub fn sqrt_decimal(num: u64, den: u64, digits: usize) -> String {
    let scale = BigUint::from(10u32).pow(digits as u32);
    let scaled = BigUint::from(num) * &scale * &scale / BigUint::from(den);
    let root = isqrt_binary(&scaled);
    let s = root.to_string();
    if s.len() <= digits {
        let mut out = String::from("0.");
        out.extend(std::iter::repeat('0').take(digits - s.len()));
        out.push_str(&s);
        out
    } else {
        let split = s.len() - digits;
        format!("{}.{}", &s[..split], &s[split..])
    }
}

/// Growing-run word: blocks 0^{r}1 with r = 2, 3, 4, ... — every level
/// keeps the one-letter loop as its short cycle, so the cycle lengths stay
/// bounded while the long cycle grows.
pub fn growing_run_word(l: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(l + 64);
    let mut run = 2usize;
    while out.len() < l {
        out.extend(std::iter::repeat(0u8).take(run));
        out.push(1);
        run += 1;
    }
    out.truncate(l);
    out
}

/// Fibonacci word by direct substitution iteration.
pub fn fibonacci_word(l: usize) -> Vec<u8> {
    let mut cur = vec![0u8];
    while cur.len() < l {
        let mut next = Vec::with_capacity(cur.len() * 2);
        for &c in &cur {
            if c == 0 {
                next.push(0);
                next.push(1);
            } else {
                next.push(0);
            }
        }
        cur = next;
    }
    cur.truncate(l);
    cur
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fibonacci_basics() {
        let w = fibonacci_word(13);
        assert_eq!(w, vec![0, 1, 0, 0, 1, 0, 1, 0, 0, 1, 0, 0, 1]);
        assert_eq!(distinct_count(&w, 3), 4);
        assert_eq!(repetition(&w, 2), Some(3));
        assert_eq!(repetition(&w, 6), Some(5));
    }

    #[test]
    fn mechanical_matches_substitution() {
        assert_eq!(mechanical_word(&[1], 200), fibonacci_word(200));
    }

    #[test]
    fn naive_shape_fibonacci() {
        let w = fibonacci_word(2000);
        let cfg = naive_infinity_config(&w, 1).expect("shape at level 1");
        assert_eq!((cfg.k, cfg.l, cfg.b), (2, 1, 1));
        assert_eq!(cfg.w, vec![0]);
        assert!(naive_infinity_config(&w, 2).is_none());
    }

    #[test]
    fn isqrt_small() {
        assert_eq!(isqrt_binary(&BigUint::from(99u32)), BigUint::from(9u32));
        assert_eq!(isqrt_binary(&BigUint::from(100u32)), BigUint::from(10u32));
        assert!(sqrt_decimal(2, 1, 12).starts_with("1.414213562373"));
    }

    #[test]
    fn quadratic_table_agrees_with_double_loop() {
        let words: Vec<Vec<u8>> = vec![
            fibonacci_word(80),
            vec![0, 1, 0, 1, 0, 1],
            vec![0, 1, 2, 0, 1, 2, 1, 0, 2],
            vec![0; 10],
        ];
        for w in words {
            let table = repetition_table_quadratic(&w);
            for n in 1..w.len() {
                assert_eq!(table[n], repetition(&w, n), "n={n}, w={w:?}");
            }
        }
    }

    #[test]
    fn split_examples() {
        let mut w = vec![1u8];
        w.extend(std::iter::repeat(0u8).take(40));
        assert_eq!(split_s(&w, 1), 1);
        let fib = fibonacci_word(500);
        assert_eq!(split_s(&fib, 4), 0);
    }
}
