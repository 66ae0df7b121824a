//! Near-linear factor index over a finite word, built on a suffix automaton.
//!
//! One automaton is built over the word and one over its reversal; the
//! reversed automaton answers left-extension queries. Each automaton state
//! represents an end-position equivalence class of factors, so per-factor
//! statistics (occurrence count, first/last occurrence, second occurrence)
//! are per-state values propagated once over the suffix-link tree.
//!
//! All positions in the public API are 1-based, matching the convention
//! x = x_1 x_2 ... used in reports.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::word::{FiniteWord, Letter};

const NONE: u32 = u32::MAX;

pub(crate) struct Automaton {
    len: Vec<u32>,
    link: Vec<u32>,
    trans: Vec<Vec<(Letter, u32)>>,
    /// end position (1-based) of the prefix that created the state; 0 for clones
    mark: Vec<u32>,
    cnt: Vec<u64>,
    first_end: Vec<u32>,
    /// two smallest end positions (second = NONE when the class is a singleton)
    second_min_end: Vec<u32>,
    /// two largest end positions
    last_end: Vec<u32>,
    second_last_end: Vec<u32>,
    /// suffix-link tree in CSR form, for occurrence enumeration
    tree_head: Vec<u32>,
    tree_items: Vec<u32>,
}

impl Automaton {
    fn build(text: &[Letter]) -> Automaton {
        let cap = 2 * text.len() + 2;
        let mut len = Vec::with_capacity(cap);
        let mut link = Vec::with_capacity(cap);
        let mut trans: Vec<Vec<(Letter, u32)>> = Vec::with_capacity(cap);
        let mut mark = Vec::with_capacity(cap);
        len.push(0u32);
        link.push(NONE);
        trans.push(Vec::new());
        mark.push(0u32);

        let mut last = 0u32;
        for (i, &c) in text.iter().enumerate() {
            let cur = len.len() as u32;
            len.push(len[last as usize] + 1);
            link.push(0);
            trans.push(Vec::new());
            mark.push((i + 1) as u32);
            let mut p = last;
            last = cur;
            loop {
                if p == NONE {
                    link[cur as usize] = 0;
                    break;
                }
                if let Some(&(_, q)) = trans[p as usize].iter().find(|&&(l, _)| l == c) {
                    if len[q as usize] == len[p as usize] + 1 {
                        link[cur as usize] = q;
                    } else {
                        let clone = len.len() as u32;
                        len.push(len[p as usize] + 1);
                        link.push(link[q as usize]);
                        trans.push(trans[q as usize].clone());
                        mark.push(0);
                        link[q as usize] = clone;
                        link[cur as usize] = clone;
                        let mut pp = p;
                        while pp != NONE {
                            match trans[pp as usize].iter_mut().find(|t| t.0 == c) {
                                Some(t) if t.1 == q => t.1 = clone,
                                _ => break,
                            }
                            pp = link[pp as usize];
                        }
                    }
                    break;
                }
                trans[p as usize].push((c, cur));
                p = link[p as usize];
            }
        }

        let n = len.len();
        // states in increasing order of len (counting sort) — suffix links
        // always point to strictly shorter states
        let maxlen = text.len();
        let mut bucket = vec![0u32; maxlen + 2];
        for &l in &len {
            bucket[l as usize + 1] += 1;
        }
        for i in 1..bucket.len() {
            bucket[i] += bucket[i - 1];
        }
        let mut order = vec![0u32; n];
        {
            let mut cursor = bucket.clone();
            for (s, &l) in len.iter().enumerate() {
                order[cursor[l as usize] as usize] = s as u32;
                cursor[l as usize] += 1;
            }
        }

        let mut cnt = vec![0u64; n];
        let mut first_end = vec![NONE; n];
        let mut second_min_end = vec![NONE; n];
        let mut last_end = vec![0u32; n];
        let mut second_last_end = vec![0u32; n];
        for s in 0..n {
            if mark[s] != 0 {
                cnt[s] = 1;
                first_end[s] = mark[s];
                last_end[s] = mark[s];
            }
        }
        for &s in order.iter().rev() {
            let s = s as usize;
            let p = link[s];
            if p == NONE {
                continue;
            }
            let p = p as usize;
            cnt[p] += cnt[s];
            // merge two smallest ends
            let (a, b) = (first_end[s], second_min_end[s]);
            for e in [a, b] {
                if e == NONE {
                    continue;
                }
                if e < first_end[p] {
                    second_min_end[p] = first_end[p];
                    first_end[p] = e;
                } else if e < second_min_end[p] {
                    second_min_end[p] = e;
                }
            }
            // merge two largest ends
            let (a, b) = (last_end[s], second_last_end[s]);
            for e in [a, b] {
                if e == 0 {
                    continue;
                }
                if e > last_end[p] {
                    second_last_end[p] = last_end[p];
                    last_end[p] = e;
                } else if e > second_last_end[p] {
                    second_last_end[p] = e;
                }
            }
        }

        // CSR of the suffix-link tree
        let mut tree_head = vec![0u32; n + 1];
        for s in 1..n {
            tree_head[link[s] as usize + 1] += 1;
        }
        for i in 1..=n {
            tree_head[i] += tree_head[i - 1];
        }
        let mut cursor = tree_head.clone();
        let mut tree_items = vec![0u32; n - 1];
        for s in 1..n {
            let p = link[s] as usize;
            tree_items[cursor[p] as usize] = s as u32;
            cursor[p] += 1;
        }

        Automaton {
            len,
            link,
            trans,
            mark,
            cnt,
            first_end,
            second_min_end,
            last_end,
            second_last_end,
            tree_head,
            tree_items,
        }
    }

    fn state_count(&self) -> usize {
        self.len.len()
    }

    fn min_len(&self, s: usize) -> u32 {
        let p = self.link[s];
        if p == NONE {
            0
        } else {
            self.len[p as usize] + 1
        }
    }

    fn step(&self, s: usize, c: Letter) -> Option<usize> {
        self.trans[s]
            .iter()
            .find(|&&(l, _)| l == c)
            .map(|&(_, q)| q as usize)
    }

    fn find(&self, factor: &[Letter]) -> Option<usize> {
        let mut s = 0usize;
        for &c in factor {
            s = self.step(s, c)?;
        }
        Some(s)
    }

    fn out_letters(&self, s: usize) -> Vec<Letter> {
        let mut ls: Vec<Letter> = self.trans[s].iter().map(|&(l, _)| l).collect();
        ls.sort_unstable();
        ls
    }

    /// All end positions of the class of state `s`, ascending.
    fn end_positions(&self, s: usize) -> Vec<u32> {
        let mut out = Vec::new();
        let mut stack = vec![s as u32];
        while let Some(v) = stack.pop() {
            let v = v as usize;
            if self.mark[v] != 0 {
                out.push(self.mark[v]);
            }
            for i in self.tree_head[v]..self.tree_head[v + 1] {
                stack.push(self.tree_items[i as usize]);
            }
        }
        out.sort_unstable();
        out
    }
}

/// Per-factor statistics, all positions 1-based starts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorStats {
    pub count: u64,
    pub first_start: u32,
    pub last_start: u32,
    /// start of the second occurrence, when there is one
    pub second_start: Option<u32>,
    /// start of the second-to-last occurrence, when there is one
    pub second_last_start: Option<u32>,
}

/// A factor of a given level together with its statistics.
#[derive(Clone, Debug)]
pub struct LevelFactor {
    pub factor: Vec<Letter>,
    pub stats: FactorStats,
    pub right_extensions: Vec<Letter>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IndexError {
    EmptyWord,
    LevelOutOfRange { n: usize, horizon: usize },
}

impl fmt::Display for IndexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexError::EmptyWord => write!(f, "cannot index an empty word"),
            IndexError::LevelOutOfRange { n, horizon } => {
                write!(f, "level {n} out of range for horizon {horizon}")
            }
        }
    }
}

/// Factor index over a materialized prefix.
pub struct FactorIndex {
    word: FiniteWord,
    fwd: Automaton,
    rev: Automaton,
    /// distinct n-factor counts for every n in 1..=L
    distinct: Vec<u64>,
}

impl FactorIndex {
    pub fn build(word: &FiniteWord) -> Result<FactorIndex, IndexError> {
        if word.is_empty() {
            return Err(IndexError::EmptyWord);
        }
        let fwd = Automaton::build(word.letters());
        let mut rev_letters: Vec<Letter> = word.letters().to_vec();
        rev_letters.reverse();
        let rev = Automaton::build(&rev_letters);

        let l = word.len();
        let mut diff = vec![0i64; l + 2];
        for s in 1..fwd.state_count() {
            let lo = fwd.min_len(s) as usize;
            let hi = fwd.len[s] as usize;
            diff[lo] += 1;
            diff[hi + 1] -= 1;
        }
        let mut distinct = vec![0u64; l + 1];
        let mut acc = 0i64;
        for n in 1..=l {
            acc += diff[n];
            distinct[n] = acc as u64;
        }

        Ok(FactorIndex { word: word.clone(), fwd, rev, distinct })
    }

    pub fn word(&self) -> &FiniteWord {
        &self.word
    }

    pub fn horizon(&self) -> usize {
        self.word.len()
    }

    /// Number of distinct n-factors of the indexed prefix; 1 for n = 0.
    pub fn distinct_count(&self, n: usize) -> u64 {
        if n == 0 {
            1
        } else if n <= self.word.len() {
            self.distinct[n]
        } else {
            0
        }
    }

    fn stats_of_state(&self, s: usize, n: usize) -> FactorStats {
        let a = &self.fwd;
        let n = n as u32;
        FactorStats {
            count: a.cnt[s],
            first_start: a.first_end[s] - n + 1,
            last_start: a.last_end[s] - n + 1,
            second_start: (a.second_min_end[s] != NONE).then(|| a.second_min_end[s] - n + 1),
            second_last_start: (a.second_last_end[s] != 0).then(|| a.second_last_end[s] - n + 1),
        }
    }

    /// Statistics of an explicit factor, if it occurs at all.
    pub fn lookup(&self, factor: &[Letter]) -> Option<FactorStats> {
        let s = self.fwd.find(factor)?;
        Some(self.stats_of_state(s, factor.len()))
    }

    /// All occurrence start positions of a factor, ascending, 1-based.
    pub fn occurrences(&self, factor: &[Letter]) -> Vec<u32> {
        match self.fwd.find(factor) {
            None => Vec::new(),
            Some(s) => {
                let n = factor.len() as u32;
                let mut ends = self.fwd.end_positions(s);
                for e in &mut ends {
                    *e = *e - n + 1;
                }
                ends
            }
        }
    }

    /// Letters a with `factor a` also a factor.
    pub fn right_extensions(&self, factor: &[Letter]) -> Vec<Letter> {
        match self.fwd.find(factor) {
            None => Vec::new(),
            Some(s) => self.fwd.out_letters(s),
        }
    }

    /// Letters a with `a factor` also a factor.
    pub fn left_extensions(&self, factor: &[Letter]) -> Vec<Letter> {
        let mut rev_factor: Vec<Letter> = factor.to_vec();
        rev_factor.reverse();
        match self.rev.find(&rev_factor) {
            None => Vec::new(),
            Some(s) => self.rev.out_letters(s),
        }
    }

    fn factor_bytes(&self, s: usize, n: usize) -> Vec<Letter> {
        let end = self.fwd.first_end[s] as usize;
        self.word.letters()[end - n..end].to_vec()
    }

    /// Every distinct n-factor with statistics, sorted by factor.
    pub fn factors_at(&self, n: usize) -> Result<Vec<LevelFactor>, IndexError> {
        if n == 0 || n > self.word.len() {
            return Err(IndexError::LevelOutOfRange { n, horizon: self.word.len() });
        }
        let mut out = Vec::new();
        for s in 1..self.fwd.state_count() {
            if self.fwd.min_len(s) as usize <= n && n <= self.fwd.len[s] as usize {
                out.push(LevelFactor {
                    factor: self.factor_bytes(s, n),
                    stats: self.stats_of_state(s, n),
                    right_extensions: self.fwd.out_letters(s),
                });
            }
        }
        out.sort_by(|a, b| a.factor.cmp(&b.factor));
        Ok(out)
    }

    /// Right-special n-factors (at least two right extensions), sorted.
    pub fn right_special_at(&self, n: usize) -> Vec<Vec<Letter>> {
        let mut out = Vec::new();
        for s in 1..self.fwd.state_count() {
            if self.fwd.trans[s].len() >= 2
                && self.fwd.min_len(s) as usize <= n
                && n <= self.fwd.len[s] as usize
            {
                out.push(self.factor_bytes(s, n));
            }
        }
        out.sort();
        out
    }

    /// Left-special n-factors (at least two left extensions), sorted.
    pub fn left_special_at(&self, n: usize) -> Vec<Vec<Letter>> {
        let l = self.word.len();
        let rev_letters: Vec<Letter> = {
            let mut v = self.word.letters().to_vec();
            v.reverse();
            v
        };
        let mut out = Vec::new();
        for s in 1..self.rev.state_count() {
            if self.rev.trans[s].len() >= 2
                && self.rev.min_len(s) as usize <= n
                && n <= self.rev.len[s] as usize
            {
                let end = self.rev.first_end[s] as usize;
                let mut factor = rev_letters[end - n..end].to_vec();
                factor.reverse();
                out.push(factor);
            }
        }
        let _ = l;
        out.sort();
        out
    }

    /// Number of distinct n-factors occurring in the suffix starting at
    /// position `s + 1` (that is, with the first `s` letters removed).
    pub fn suffix_factor_count(&self, n: usize, s: usize) -> u64 {
        let threshold = (s + n) as u32; // last_end >= s + n  <=>  last_start >= s+1
        let mut count = 0u64;
        for st in 1..self.fwd.state_count() {
            if self.fwd.min_len(st) as usize <= n
                && n <= self.fwd.len[st] as usize
                && self.fwd.last_end[st] >= threshold
            {
                count += 1;
            }
        }
        count
    }

    /// One pass over the automaton collecting per-level aggregates for
    /// levels 1..=n_max. Cost is proportional to the total number of
    /// (state, level) incidences, i.e. the sum of p(n) over the range.
    pub(crate) fn level_aggregates(&self, n_max: usize) -> LevelAggregates {
        let n_max = n_max.min(self.word.len());
        let mut agg = LevelAggregates {
            p: vec![0u64; n_max + 1],
            rs_count: vec![0u32; n_max + 1],
            ls_count: vec![0u32; n_max + 1],
            max_first_end: vec![0u32; n_max + 1],
            min_second_end: vec![NONE; n_max + 1],
            rs_states: vec![Vec::new(); n_max + 1],
        };
        for s in 1..self.fwd.state_count() {
            let lo = self.fwd.min_len(s) as usize;
            if lo > n_max {
                continue;
            }
            let hi = (self.fwd.len[s] as usize).min(n_max);
            let rs = self.fwd.trans[s].len() >= 2;
            let fe = self.fwd.first_end[s];
            let se = self.fwd.second_min_end[s];
            for n in lo..=hi {
                agg.p[n] += 1;
                if rs {
                    agg.rs_count[n] += 1;
                    agg.rs_states[n].push(s as u32);
                }
                if fe > agg.max_first_end[n] {
                    agg.max_first_end[n] = fe;
                }
                if se < agg.min_second_end[n] {
                    agg.min_second_end[n] = se;
                }
            }
        }
        for s in 1..self.rev.state_count() {
            let lo = self.rev.min_len(s) as usize;
            if lo > n_max {
                continue;
            }
            let hi = (self.rev.len[s] as usize).min(n_max);
            if self.rev.trans[s].len() >= 2 {
                for n in lo..=hi {
                    agg.ls_count[n] += 1;
                }
            }
        }
        agg
    }

    /// The repetition value r(n): least m >= 1 such that the n-window at
    /// offset m duplicates an earlier window. `None` when no window repeats
    /// within the horizon.
    pub fn repetition(&self, n: usize) -> Result<Option<u32>, IndexError> {
        if n == 0 || n + 1 > self.word.len() {
            return Err(IndexError::LevelOutOfRange { n, horizon: self.word.len() });
        }
        let mut best = NONE;
        for s in 1..self.fwd.state_count() {
            if self.fwd.min_len(s) as usize <= n
                && n <= self.fwd.len[s] as usize
                && self.fwd.second_min_end[s] < best
            {
                best = self.fwd.second_min_end[s];
            }
        }
        Ok((best != NONE).then(|| best - n as u32))
    }

    /// Factor bytes for the n-window at 1-based start `pos`.
    pub fn window(&self, pos: usize, n: usize) -> &[Letter] {
        &self.word.letters()[pos - 1..pos - 1 + n]
    }
}

pub(crate) struct LevelAggregates {
    pub p: Vec<u64>,
    pub rs_count: Vec<u32>,
    pub ls_count: Vec<u32>,
    pub max_first_end: Vec<u32>,
    pub min_second_end: Vec<u32>,
    /// states of right-special factors per level (few on low-complexity words)
    pub rs_states: Vec<Vec<u32>>,
}

impl LevelAggregates {
    pub fn repetition(&self, n: usize) -> Option<u32> {
        (self.min_second_end[n] != NONE).then(|| self.min_second_end[n] - n as u32)
    }
}

impl FactorIndex {
    pub(crate) fn rs_factor_bytes(&self, state: u32, n: usize) -> Vec<Letter> {
        self.factor_bytes(state as usize, n)
    }
}
