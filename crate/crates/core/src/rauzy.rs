//! Rauzy graphs: vertices are the n-factors, edges the (n+1)-factors.
//!
//! The reduced graph keeps only the factors of the recurrent tail z_{n+1}.
//! On the low-complexity regime this crate targets, the reduced graph is
//! periodically of ∞-shape: a single bispecial vertex w with exactly two
//! edge-disjoint return cycles. [`detect_infinity_shape`] recognizes that
//! shape, decides which cycle is the special one through the essential
//! right-special chain, and measures the multiplicity b by walking the
//! actual letter stream and recording the powers of the non-special cycle
//! between returns of the special one.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::complexity::RecurrenceSplit;
use crate::index::{FactorIndex, IndexError};
use crate::word::Letter;

#[derive(Clone, Debug)]
pub struct RauzyVertex {
    pub factor: Vec<Letter>,
    pub count: u64,
    pub first_pos: u32,
}

#[derive(Clone, Debug)]
pub struct RauzyEdge {
    pub factor: Vec<Letter>,
    pub from: u32,
    pub to: u32,
    pub count: u64,
}

#[derive(Clone, Debug)]
pub struct RauzyGraph {
    pub level: usize,
    /// sorted by factor
    pub vertices: Vec<RauzyVertex>,
    /// sorted by factor
    pub edges: Vec<RauzyEdge>,
    pub reduced: bool,
    /// a vertex that occurs exactly once, as the prefix of the word; kept in
    /// the unreduced graph and annotated, removed by reduction
    pub prefix_vertex: Option<u32>,
    out: Vec<Vec<u32>>,
    inc: Vec<Vec<u32>>,
}

impl RauzyGraph {
    fn assemble(
        level: usize,
        vertices: Vec<RauzyVertex>,
        edges: Vec<RauzyEdge>,
        reduced: bool,
        prefix_vertex: Option<u32>,
    ) -> RauzyGraph {
        let mut out = vec![Vec::new(); vertices.len()];
        let mut inc = vec![Vec::new(); vertices.len()];
        for (i, e) in edges.iter().enumerate() {
            out[e.from as usize].push(i as u32);
            inc[e.to as usize].push(i as u32);
        }
        RauzyGraph { level, vertices, edges, reduced, prefix_vertex, out, inc }
    }

    pub fn vertex_id(&self, factor: &[Letter]) -> Option<u32> {
        self.vertices
            .binary_search_by(|v| v.factor.as_slice().cmp(factor))
            .ok()
            .map(|i| i as u32)
    }

    pub fn out_degree(&self, v: u32) -> usize {
        self.out[v as usize].len()
    }

    pub fn in_degree(&self, v: u32) -> usize {
        self.inc[v as usize].len()
    }

    pub fn out_edges(&self, v: u32) -> &[u32] {
        &self.out[v as usize]
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RauzyError {
    Level(IndexError),
    /// The recurrence split backing a reduction is horizon-uncertain;
    /// the caller should enlarge the horizon.
    UncertainSplit { n: usize, horizon: usize, suggested: usize },
}

impl fmt::Display for RauzyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RauzyError::Level(e) => write!(f, "{e}"),
            RauzyError::UncertainSplit { n, horizon, suggested } => write!(
                f,
                "recurrence split at level {n} uncertain at horizon {horizon}; retry with at least {suggested}"
            ),
        }
    }
}

impl From<IndexError> for RauzyError {
    fn from(e: IndexError) -> Self {
        RauzyError::Level(e)
    }
}

/// Builds the level-n Rauzy graph of the indexed prefix.
pub fn build_rauzy(index: &FactorIndex, n: usize) -> Result<RauzyGraph, RauzyError> {
    if n == 0 || n + 1 > index.horizon() {
        return Err(RauzyError::Level(IndexError::LevelOutOfRange {
            n,
            horizon: index.horizon(),
        }));
    }
    let vertices: Vec<RauzyVertex> = index
        .factors_at(n)?
        .into_iter()
        .map(|f| RauzyVertex { factor: f.factor, count: f.stats.count, first_pos: f.stats.first_start })
        .collect();
    let by_factor: BTreeMap<&[Letter], u32> = vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (v.factor.as_slice(), i as u32))
        .collect();
    let mut edges = Vec::new();
    for f in index.factors_at(n + 1)? {
        let from = by_factor[&f.factor[..n]];
        let to = by_factor[&f.factor[1..]];
        edges.push(RauzyEdge { factor: f.factor, from, to, count: f.stats.count });
    }
    let word_prefix = &index.word().letters()[..n];
    let prefix_vertex = by_factor
        .get(word_prefix)
        .copied()
        .filter(|&v| vertices[v as usize].count == 1 && vertices[v as usize].first_pos == 1);
    Ok(RauzyGraph::assemble(n, vertices, edges, false, prefix_vertex))
}

/// Restriction to the factors of the recurrent tail z_{n+1}: vertices are
/// the n-factors still occurring past the (n+1)-th non-recurrent prefix,
/// edges the surviving (n+1)-factors. Both splits must be horizon-certain.
pub fn reduce(
    graph: &RauzyGraph,
    split_n: &RecurrenceSplit,
    split_next: &RecurrenceSplit,
    index: &FactorIndex,
) -> Result<RauzyGraph, RauzyError> {
    let horizon = index.horizon();
    for split in [split_n, split_next] {
        if !split.certain {
            return Err(RauzyError::UncertainSplit {
                n: split.n,
                horizon,
                suggested: 2 * horizon,
            });
        }
    }
    debug_assert_eq!(split_next.n, graph.level + 1);
    let keep_from = split_next.z_start() as u32;
    let mut vertices = Vec::new();
    let mut old_to_new: BTreeMap<u32, u32> = BTreeMap::new();
    for (i, v) in graph.vertices.iter().enumerate() {
        let stats = index.lookup(&v.factor).expect("graph vertex indexed");
        if stats.last_start >= keep_from {
            old_to_new.insert(i as u32, vertices.len() as u32);
            vertices.push(v.clone());
        }
    }
    let mut edges = Vec::new();
    for e in &graph.edges {
        let stats = index.lookup(&e.factor).expect("graph edge indexed");
        if stats.last_start >= keep_from {
            let from = old_to_new[&e.from];
            let to = old_to_new[&e.to];
            edges.push(RauzyEdge { factor: e.factor.clone(), from, to, count: e.count });
        }
    }
    Ok(RauzyGraph::assemble(graph.level, vertices, edges, true, None))
}

#[derive(Clone, Debug, Default)]
pub struct SpecialSets {
    pub right: Vec<u32>,
    pub left: Vec<u32>,
    pub bispecial: Vec<u32>,
}

/// Degree-based classification: right-special = out-degree >= 2,
/// left-special = in-degree >= 2.
pub fn classify_special(graph: &RauzyGraph) -> SpecialSets {
    let mut sets = SpecialSets::default();
    for v in 0..graph.vertex_count() as u32 {
        let r = graph.out_degree(v) >= 2;
        let l = graph.in_degree(v) >= 2;
        if r {
            sets.right.push(v);
        }
        if l {
            sets.left.push(v);
        }
        if r && l {
            sets.bispecial.push(v);
        }
    }
    sets
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EssentialOutcome {
    /// The unique n-factor that is a suffix of a right-special word of
    /// every length n..=n+depth.
    Unique { factor: Vec<Letter>, depth: usize },
    /// No right-special factor survives the chain.
    NoneCertified,
    /// More than one candidate survives to the inspected depth.
    Ambiguous { depth: usize, survivors: Vec<Vec<Letter>> },
}

/// Follows the right-special suffix chain upward for `depth` levels
/// (clamped to the horizon). On words with a unique right-special factor
/// per saturated level the survivor is unique almost immediately.
pub fn essential_right_special(index: &FactorIndex, n: usize, depth: usize) -> EssentialOutcome {
    let horizon = index.horizon();
    let max_depth = horizon.saturating_sub(n + 1);
    let depth = depth.min(max_depth);
    let mut alive = index.right_special_at(n);
    if alive.is_empty() {
        return EssentialOutcome::NoneCertified;
    }
    for d in 1..=depth {
        let rs = index.right_special_at(n + d);
        alive.retain(|c| rs.iter().any(|w| w.ends_with(c)));
        if alive.is_empty() {
            return EssentialOutcome::NoneCertified;
        }
    }
    if alive.len() == 1 {
        EssentialOutcome::Unique { factor: alive.pop().unwrap(), depth }
    } else {
        EssentialOutcome::Ambiguous { depth, survivors: alive }
    }
}

/// A return cycle from the bispecial vertex to itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclePath {
    /// w, interior vertices, w again
    pub vertices: Vec<Vec<Letter>>,
    /// the word spelled along the cycle, of length n + cycle length
    pub spelled: Vec<Letter>,
}

impl CyclePath {
    /// Path length at this level (number of edges).
    pub fn len_at_level(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn first_interior(&self) -> &[Letter] {
        &self.vertices[1]
    }

    /// Letter appended by the (step+1)-th edge when traversing from w.
    pub(crate) fn step_letter(&self, step: usize) -> Letter {
        *self.vertices[step + 1].last().unwrap()
    }
}

/// Certified ∞-shape data: the bispecial vertex w, the special cycle U,
/// the other cycle V, and the observed multiplicity.
#[derive(Clone, Debug)]
pub struct InfinityConfig {
    pub level: usize,
    pub w: Vec<Letter>,
    /// essentially right-special cycle
    pub special: CyclePath,
    pub other: CyclePath,
    /// the power b with U V^b U a factor (maximum observed)
    pub multiplicity: u32,
    /// every complete V-power observed between consecutive U's, with the
    /// position of its first witness; a certified stream has exactly one
    /// non-zero power here
    pub observed_powers: BTreeMap<u32, u32>,
    /// positions certifying a UU occurrence and a UV^bU occurrence
    pub uu_position: Option<u32>,
    pub uvbu_position: Option<u32>,
    /// depth to which the special cycle's closing edge was certified
    /// essentially right-special
    pub essential_depth: usize,
}

impl InfinityConfig {
    pub fn k(&self) -> usize {
        self.special.len_at_level()
    }

    pub fn l(&self) -> usize {
        self.other.len_at_level()
    }

    /// Non-zero powers other than the reported multiplicity; non-empty
    /// means the stream violates single-multiplicity.
    pub fn extra_powers(&self) -> Vec<u32> {
        self.observed_powers
            .keys()
            .copied()
            .filter(|&p| p != 0 && p != self.multiplicity)
            .collect()
    }
}

#[derive(Clone, Debug)]
pub enum InfinityOutcome {
    Shape(InfinityConfig),
    /// Structurally not an ∞-shape, with the reason.
    NotShape(String),
    /// The special cycle could not be certified at this depth.
    AmbiguousSpecialCycle { depth: usize },
    /// Shape present, but the horizon cannot certify the remaining data.
    Undetermined(String),
}

impl InfinityOutcome {
    pub fn config(&self) -> Option<&InfinityConfig> {
        match self {
            InfinityOutcome::Shape(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_shape(&self) -> bool {
        self.config().is_some()
    }
}

/// Walks out-edges from `first_edge` until returning to `w`, requiring the
/// walk to be forced (out-degree 1) away from w.
fn walk_cycle(graph: &RauzyGraph, w: u32, first_edge: u32) -> Result<Vec<u32>, String> {
    let mut vertices = vec![w];
    let mut edge = first_edge;
    for _ in 0..=graph.vertex_count() {
        let next = graph.edges[edge as usize].to;
        vertices.push(next);
        if next == w {
            return Ok(vertices);
        }
        match graph.out_edges(next) {
            [e] => edge = *e,
            [] => return Err(format!("dead end at vertex {next}")),
            _ => return Err(format!("unexpected branching at vertex {next}")),
        }
    }
    Err(String::from("walk does not return to the special vertex"))
}

fn cycle_path(graph: &RauzyGraph, level: usize, ids: &[u32]) -> CyclePath {
    let vertices: Vec<Vec<Letter>> =
        ids.iter().map(|&v| graph.vertices[v as usize].factor.clone()).collect();
    let mut spelled: Vec<Letter> = vertices[..vertices.len() - 1].iter().map(|f| f[0]).collect();
    spelled.extend_from_slice(&vertices[vertices.len() - 1]);
    debug_assert_eq!(spelled.len(), level + ids.len() - 1);
    CyclePath { vertices, spelled }
}

pub struct DetectOptions {
    /// Cap on the essential right-special chain depth; 0 means automatic
    /// (twice the total cycle length plus a margin).
    pub essential_depth: usize,
    /// 1-based position where the recurrent tail starts (z_{n+1}).
    pub z_start: u32,
}

impl Default for DetectOptions {
    fn default() -> Self {
        DetectOptions { essential_depth: 0, z_start: 1 }
    }
}

/// Recognizes the ∞-shape on a (reduced) graph and extracts the full
/// configuration.
pub fn detect_infinity_shape(
    graph: &RauzyGraph,
    index: &FactorIndex,
    opts: &DetectOptions,
) -> InfinityOutcome {
    let n = graph.level;
    let sets = classify_special(graph);
    let mut specials: Vec<u32> = sets.right.clone();
    for &v in &sets.left {
        if !specials.contains(&v) {
            specials.push(v);
        }
    }
    let w = match specials.as_slice() {
        [] => return InfinityOutcome::NotShape(String::from("no special vertex")),
        [w] => *w,
        many => {
            return InfinityOutcome::NotShape(format!("{} special vertices", many.len()));
        }
    };
    if !sets.bispecial.contains(&w) {
        return InfinityOutcome::NotShape(String::from("special vertex is not bispecial"));
    }
    if graph.out_degree(w) != 2 || graph.in_degree(w) != 2 {
        return InfinityOutcome::NotShape(format!(
            "special vertex has degrees ({}, {})",
            graph.in_degree(w),
            graph.out_degree(w)
        ));
    }
    let out = graph.out_edges(w);
    let (e1, e2) = (out[0], out[1]);
    let c1 = match walk_cycle(graph, w, e1) {
        Ok(c) => c,
        Err(e) => return InfinityOutcome::NotShape(e),
    };
    let c2 = match walk_cycle(graph, w, e2) {
        Ok(c) => c,
        Err(e) => return InfinityOutcome::NotShape(e),
    };
    // the two cycles must partition the graph
    let interior = c1.len() - 2 + c2.len() - 2;
    if interior + 1 != graph.vertex_count() || c1.len() - 1 + c2.len() - 1 != graph.edge_count() {
        return InfinityOutcome::NotShape(String::from("cycles do not cover the graph"));
    }

    let p1 = cycle_path(graph, n, &c1);
    let p2 = cycle_path(graph, n, &c2);

    // Orientation: the cycle whose closing edge heads the essential
    // right-special chain is the special one.
    let closing = |p: &CyclePath| -> Vec<Letter> {
        let mut e = p.vertices[p.vertices.len() - 2].clone();
        e.push(*p.vertices[p.vertices.len() - 1].last().unwrap());
        e
    };
    let close1 = closing(&p1);
    let close2 = closing(&p2);
    let auto_depth = 2 * (p1.len_at_level() + p2.len_at_level()) + 8;
    let depth = if opts.essential_depth == 0 { auto_depth } else { opts.essential_depth };
    let (special, other, essential_depth) = match essential_right_special(index, n + 1, depth) {
        EssentialOutcome::Unique { factor, depth } => {
            if factor == close1 {
                (p1, p2, depth)
            } else if factor == close2 {
                (p2, p1, depth)
            } else {
                return InfinityOutcome::Undetermined(format!(
                    "essential right-special factor is off-cycle at level {}",
                    n + 1
                ));
            }
        }
        EssentialOutcome::Ambiguous { depth, .. } => {
            return InfinityOutcome::AmbiguousSpecialCycle { depth }
        }
        EssentialOutcome::NoneCertified => {
            return InfinityOutcome::Undetermined(String::from(
                "no essential right-special factor certified",
            ))
        }
    };

    // Multiplicity: walk the stream from the first w in the tail and count
    // powers of the other cycle between returns of the special one.
    let w_factor = graph.vertices[w as usize].factor.clone();
    let text = index.word().letters();
    let horizon = index.horizon();
    let start = index
        .occurrences(&w_factor)
        .into_iter()
        .find(|&p| p >= opts.z_start);
    let mut pos = match start {
        Some(p) => p as usize,
        None => {
            return InfinityOutcome::Undetermined(String::from(
                "special vertex does not occur in the tail",
            ))
        }
    };
    let special_letter = special.step_letter(0);
    let other_letter = other.step_letter(0);
    debug_assert_ne!(special_letter, other_letter);

    let mut observed_powers: BTreeMap<u32, u32> = BTreeMap::new();
    let mut uu_position = None;
    let mut uvbu_position = None;
    let mut run: Option<u32> = None; // current V power since the last U
    let mut prev_special_at: Option<u32> = None;
    loop {
        // current window at `pos` is w; decide the branch by the next letter
        if pos + n > horizon {
            break;
        }
        let c = text[pos - 1 + n];
        let (cycle, is_special) = if c == special_letter {
            (&special, true)
        } else if c == other_letter {
            (&other, false)
        } else {
            return InfinityOutcome::Undetermined(format!(
                "stream leaves the two cycles at position {pos}"
            ));
        };
        let span = cycle.len_at_level();
        if pos + span + n - 1 > horizon {
            break; // incomplete final cycle
        }
        // verify the remaining letters follow the cycle
        for step in 1..span {
            if text[pos - 1 + n + step] != cycle.step_letter(step) {
                return InfinityOutcome::Undetermined(format!(
                    "stream deviates from a cycle at position {}",
                    pos + step
                ));
            }
        }
        if is_special {
            if let Some(at) = prev_special_at {
                let power = run.unwrap_or(0);
                observed_powers.entry(power).or_insert(at);
                if power == 0 {
                    uu_position.get_or_insert(at);
                } else {
                    uvbu_position.get_or_insert(at);
                }
            }
            prev_special_at = Some(pos as u32);
            run = None;
        } else if prev_special_at.is_some() {
            run = Some(run.unwrap_or(0) + 1);
        }
        pos += span;
    }

    let multiplicity = observed_powers.keys().copied().filter(|&p| p > 0).max();
    let multiplicity = match multiplicity {
        Some(b) => b,
        None => {
            return InfinityOutcome::Undetermined(String::from(
                "no complete power of the non-special cycle observed",
            ))
        }
    };

    InfinityOutcome::Shape(InfinityConfig {
        level: n,
        w: w_factor,
        special,
        other,
        multiplicity,
        observed_powers,
        uu_position,
        uvbu_position,
        essential_depth,
    })
}

fn dot_label(factor: &[Letter]) -> String {
    factor
        .iter()
        .map(|&l| if l < 10 { (b'0' + l) as char } else { '?' })
        .collect()
}

/// DOT rendering; special vertices are double-circled, the once-occurring
/// prefix vertex is dotted.
pub fn export_dot(graph: &RauzyGraph) -> String {
    export_dot_inner(graph, None)
}

/// DOT rendering of the unreduced graph with the elements removed by the
/// reduction drawn dashed.
pub fn export_dot_with_reduction(full: &RauzyGraph, reduced: &RauzyGraph) -> String {
    export_dot_inner(full, Some(reduced))
}

fn export_dot_inner(graph: &RauzyGraph, reduced: Option<&RauzyGraph>) -> String {
    let sets = classify_special(graph);
    let mut s = String::new();
    let kind = if graph.reduced { "reduced_rauzy" } else { "rauzy" };
    s.push_str(&format!("digraph {}_{} {{\n", kind, graph.level));
    s.push_str("  rankdir=LR;\n  node [shape=circle];\n");
    for (i, v) in graph.vertices.iter().enumerate() {
        let mut attrs: Vec<String> = Vec::new();
        if sets.right.contains(&(i as u32)) || sets.left.contains(&(i as u32)) {
            attrs.push(String::from("shape=doublecircle"));
        }
        if graph.prefix_vertex == Some(i as u32) {
            attrs.push(String::from("style=dotted"));
        }
        if let Some(r) = reduced {
            if r.vertex_id(&v.factor).is_none() {
                attrs.push(String::from("style=dashed"));
            }
        }
        if attrs.is_empty() {
            s.push_str(&format!("  \"{}\";\n", dot_label(&v.factor)));
        } else {
            s.push_str(&format!("  \"{}\" [{}];\n", dot_label(&v.factor), attrs.join(", ")));
        }
    }
    for e in &graph.edges {
        let from = dot_label(&graph.vertices[e.from as usize].factor);
        let to = dot_label(&graph.vertices[e.to as usize].factor);
        let removed = reduced.map_or(false, |r| {
            r.edges.binary_search_by(|re| re.factor.as_slice().cmp(&e.factor)).is_err()
        });
        if removed {
            s.push_str(&format!(
                "  \"{from}\" -> \"{to}\" [label=\"{}\", style=dashed];\n",
                dot_label(&e.factor)
            ));
        } else {
            s.push_str(&format!(
                "  \"{from}\" -> \"{to}\" [label=\"{}\"];\n",
                dot_label(&e.factor)
            ));
        }
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexity::recurrence_split;
    use crate::word::WordSource;

    fn make_index(spec: &str, l: usize) -> FactorIndex {
        let w = WordSource::parse(spec).unwrap().materialize(l).unwrap();
        FactorIndex::build(&w).unwrap()
    }

    #[test]
    fn fibonacci_level_one_graph() {
        let ix = make_index("subst:0->01,1->0", 4000);
        let g = build_rauzy(&ix, 1).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 3);
        let sets = classify_special(&g);
        assert_eq!(sets.bispecial.len(), 1);
        assert_eq!(g.vertices[sets.bispecial[0] as usize].factor, vec![0]);
    }

    #[test]
    fn periodic_graph_is_cycle() {
        let ix = make_index("periodic:01", 64);
        let g = build_rauzy(&ix, 2).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 2);
        for v in 0..2 {
            assert_eq!(g.out_degree(v), 1);
            assert_eq!(g.in_degree(v), 1);
        }
        assert!(classify_special(&g).right.is_empty());
    }

    #[test]
    fn equal_counts_mean_disjoint_cycles() {
        // p(n) = p(n+1) forces in/out degree 1 everywhere
        let ix = make_index("periodic:0110", 128);
        let g = build_rauzy(&ix, 3).unwrap();
        for v in 0..g.vertex_count() as u32 {
            assert_eq!(g.out_degree(v), 1);
            assert_eq!(g.in_degree(v), 1);
        }
    }

    #[test]
    fn reduction_drops_prefix_vertex() {
        let ix = make_index("concat:1|periodic:0", 64);
        let g = build_rauzy(&ix, 1).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 2); // 10 and 00
        assert!(g.prefix_vertex.is_some());
        let s1 = recurrence_split(&ix, 1, 4).unwrap();
        let s2 = recurrence_split(&ix, 2, 4).unwrap();
        let r = reduce(&g, &s1, &s2, &ix).unwrap();
        assert_eq!(r.vertex_count(), 1); // only "0"
        assert_eq!(r.edge_count(), 1); // only "00"
        assert!(r.reduced);
    }

    #[test]
    fn fibonacci_level_two_specials() {
        let ix = make_index("subst:0->01,1->0", 10_000);
        let g = build_rauzy(&ix, 2).unwrap();
        let sets = classify_special(&g);
        let factor = |ids: &[u32]| -> Vec<Vec<u8>> {
            ids.iter().map(|&v| g.vertices[v as usize].factor.clone()).collect()
        };
        assert_eq!(factor(&sets.right), vec![vec![1, 0]]);
        assert_eq!(factor(&sets.left), vec![vec![0, 1]]);
        assert!(sets.bispecial.is_empty());
        // consistent with extension-set queries on the index
        assert_eq!(ix.right_extensions(&[1, 0]).len(), 2);
        assert_eq!(ix.left_extensions(&[0, 1]).len(), 2);
    }

    #[test]
    fn words_induce_paths() {
        // every (n + j)-factor walks a path of length j along graph edges
        let ix = make_index("sturmian:1,3,rep", 5_000);
        for n in [1usize, 2, 4] {
            let g = build_rauzy(&ix, n).unwrap();
            for j in 1..=4 {
                for f in ix.factors_at(n + j).unwrap() {
                    for step in 0..j {
                        let edge = &f.factor[step..step + n + 1];
                        assert!(
                            g.edges.iter().any(|e| e.factor == edge),
                            "missing edge {edge:?} at level {n}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn composite_reduction_removes_single_occurrence_factors() {
        let ix = make_index("concat:10|subst:0->01,1->0", 8_000);
        for n in 1..=4 {
            let g = build_rauzy(&ix, n).unwrap();
            let sn = recurrence_split(&ix, n, 4).unwrap();
            let sn1 = recurrence_split(&ix, n + 1, 4).unwrap();
            let r = reduce(&g, &sn, &sn1, &ix).unwrap();
            for v in &g.vertices {
                let kept = r.vertex_id(&v.factor).is_some();
                assert_eq!(kept, v.count > 1, "level {n}, factor {:?}", v.factor);
            }
        }
    }

    #[test]
    fn fibonacci_reduction_is_identity() {
        let ix = make_index("subst:0->01,1->0", 4000);
        let g = build_rauzy(&ix, 5).unwrap();
        let s5 = recurrence_split(&ix, 5, 4).unwrap();
        let s6 = recurrence_split(&ix, 6, 4).unwrap();
        let r = reduce(&g, &s5, &s6, &ix).unwrap();
        assert_eq!(r.vertex_count(), g.vertex_count());
        assert_eq!(r.edge_count(), g.edge_count());
    }

    #[test]
    fn essential_chain_fibonacci() {
        let ix = make_index("subst:0->01,1->0", 4000);
        match essential_right_special(&ix, 1, 20) {
            EssentialOutcome::Unique { factor, .. } => assert_eq!(factor, vec![0]),
            other => panic!("expected unique, got {other:?}"),
        }
        // periodic words have no right-special factors at all
        let pix = make_index("periodic:01", 64);
        assert_eq!(essential_right_special(&pix, 2, 10), EssentialOutcome::NoneCertified);
    }

    #[test]
    fn fibonacci_level_one_infinity_shape() {
        let ix = make_index("subst:0->01,1->0", 4000);
        let g = build_rauzy(&ix, 1).unwrap();
        let s1 = recurrence_split(&ix, 1, 4).unwrap();
        let s2 = recurrence_split(&ix, 2, 4).unwrap();
        let r = reduce(&g, &s1, &s2, &ix).unwrap();
        let outcome = detect_infinity_shape(&r, &ix, &DetectOptions::default());
        let cfg = outcome.config().expect("infinity shape at level 1");
        assert_eq!(cfg.w, vec![0]);
        assert_eq!(cfg.k(), 2);
        assert_eq!(cfg.l(), 1);
        assert_eq!(cfg.multiplicity, 1);
        assert_eq!(cfg.special.spelled, vec![0, 1, 0]);
        assert_eq!(cfg.other.spelled, vec![0, 0]);
        assert!(cfg.uu_position.is_some());
        assert!(cfg.extra_powers().is_empty());
    }

    #[test]
    fn fibonacci_level_two_not_shape() {
        let ix = make_index("subst:0->01,1->0", 4000);
        let g = build_rauzy(&ix, 2).unwrap();
        let s2 = recurrence_split(&ix, 2, 4).unwrap();
        let s3 = recurrence_split(&ix, 3, 4).unwrap();
        let r = reduce(&g, &s2, &s3, &ix).unwrap();
        let outcome = detect_infinity_shape(&r, &ix, &DetectOptions::default());
        assert!(!outcome.is_shape());
    }

    #[test]
    fn periodic_never_shape() {
        let ix = make_index("periodic:01", 64);
        for n in 1..=4 {
            let g = build_rauzy(&ix, n).unwrap();
            let outcome = detect_infinity_shape(&g, &ix, &DetectOptions::default());
            assert!(!outcome.is_shape(), "n={n}");
        }
    }

    #[test]
    fn dot_export_shape() {
        let ix = make_index("subst:0->01,1->0", 4000);
        let g = build_rauzy(&ix, 1).unwrap();
        let dot = export_dot(&g);
        assert_eq!(dot.matches("->").count(), 3);
        assert!(dot.contains("doublecircle"));
        assert!(dot.contains("\"0\""));
        // no dashed elements when the reduction removes nothing
        let s1 = recurrence_split(&ix, 1, 4).unwrap();
        let s2 = recurrence_split(&ix, 2, 4).unwrap();
        let r = reduce(&g, &s1, &s2, &ix).unwrap();
        let dot = export_dot_with_reduction(&g, &r);
        assert!(!dot.contains("dashed"));
    }
}
