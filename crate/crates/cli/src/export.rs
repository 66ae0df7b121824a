//! CSV / JSON / DOT serialization of analysis artifacts.

use serde::Serialize;

use rauzylab_core::bounds::{render_exact, BoundPoint};
use rauzylab_core::complexity::ComplexityProfile;
use rauzylab_core::dio::{ApproxReport, RationalApprox, RepetitionWitness};
use rauzylab_core::evolution::{CycleClass, EvolutionTrace, Orientation};
use rauzylab_core::rauzy::{classify_special, InfinityConfig, RauzyGraph};
use rauzylab_core::report::CheckResult;
use rauzylab_core::FactorIndex;

fn word_string(letters: &[u8]) -> String {
    letters.iter().map(|&l| char::from(b'0' + l)).collect()
}

/// CSV columns: n, p, r, left_special_count, right_special_count,
/// bispecial_count, saturated(0/1). Undefined r prints as an empty cell.
pub fn profile_csv(profile: &ComplexityProfile) -> String {
    let mut s = String::from("n,p,r,left_special_count,right_special_count,bispecial_count,saturated\n");
    for n in 1..=profile.n_max {
        let r = profile.r[n].map(|v| v.to_string()).unwrap_or_default();
        s.push_str(&format!(
            "{n},{},{r},{},{},{},{}\n",
            profile.p[n],
            profile.left_special_count[n],
            profile.right_special_count[n],
            profile.bispecial_count[n],
            u8::from(profile.saturated[n]),
        ));
    }
    s
}

#[derive(Serialize)]
struct ProfileRow {
    n: usize,
    p: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    r: Option<u32>,
    left_special_count: u32,
    right_special_count: u32,
    bispecial_count: u32,
    saturated: bool,
}

#[derive(Serialize)]
struct InventoryRow {
    n: usize,
    right_special: Vec<String>,
    left_special: Vec<String>,
    bispecial: Vec<String>,
}

#[derive(Serialize)]
struct ProfileDoc {
    source: String,
    horizon: usize,
    n_max: usize,
    rows: Vec<ProfileRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    inventories: Option<Vec<InventoryRow>>,
}

pub fn profile_json(
    source: &str,
    profile: &ComplexityProfile,
    index: &FactorIndex,
    with_inventories: bool,
) -> String {
    let rows = (1..=profile.n_max)
        .map(|n| ProfileRow {
            n,
            p: profile.p[n],
            r: profile.r[n],
            left_special_count: profile.left_special_count[n],
            right_special_count: profile.right_special_count[n],
            bispecial_count: profile.bispecial_count[n],
            saturated: profile.saturated[n],
        })
        .collect();
    let inventories = with_inventories.then(|| {
        (1..=profile.n_max)
            .map(|n| {
                let right: Vec<String> =
                    index.right_special_at(n).iter().map(|f| word_string(f)).collect();
                let left: Vec<String> =
                    index.left_special_at(n).iter().map(|f| word_string(f)).collect();
                let bispecial: Vec<String> =
                    right.iter().filter(|f| left.contains(f)).cloned().collect();
                InventoryRow { n, right_special: right, left_special: left, bispecial }
            })
            .collect()
    });
    let doc = ProfileDoc {
        source: source.to_string(),
        horizon: profile.horizon,
        n_max: profile.n_max,
        rows,
        inventories,
    };
    serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
}

#[derive(Serialize)]
struct VertexDoc {
    word: String,
    count: u64,
    first_pos: u32,
}

#[derive(Serialize)]
struct EdgeDoc {
    word: String,
    from: String,
    to: String,
    count: u64,
}

#[derive(Serialize)]
struct ConfigDoc {
    w: String,
    special_cycle: String,
    other_cycle: String,
    k: usize,
    l: usize,
    multiplicity: u32,
}

#[derive(Serialize)]
struct GraphDoc {
    level: usize,
    reduced: bool,
    infinity_shape: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    config: Option<ConfigDoc>,
    vertices: Vec<VertexDoc>,
    edges: Vec<EdgeDoc>,
}

pub fn graph_json(graph: &RauzyGraph, config: Option<&InfinityConfig>) -> String {
    let _ = classify_special(graph);
    let vertices = graph
        .vertices
        .iter()
        .map(|v| VertexDoc { word: word_string(&v.factor), count: v.count, first_pos: v.first_pos })
        .collect();
    let edges = graph
        .edges
        .iter()
        .map(|e| EdgeDoc {
            word: word_string(&e.factor),
            from: word_string(&graph.vertices[e.from as usize].factor),
            to: word_string(&graph.vertices[e.to as usize].factor),
            count: e.count,
        })
        .collect();
    let doc = GraphDoc {
        level: graph.level,
        reduced: graph.reduced,
        infinity_shape: config.is_some(),
        config: config.map(|c| ConfigDoc {
            w: word_string(&c.w),
            special_cycle: word_string(&c.special.spelled),
            other_cycle: word_string(&c.other.spelled),
            k: c.k(),
            l: c.l(),
            multiplicity: c.multiplicity,
        }),
        vertices,
        edges,
    };
    serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
}

#[derive(Serialize)]
struct SValuesDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    s_next: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    s_after_k: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    s_slope_level: Option<u32>,
}

#[derive(Serialize)]
struct StepDoc {
    n: usize,
    k: usize,
    l: usize,
    b: u32,
    w: String,
    s_values: SValuesDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    orientation: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    case_id: Option<u8>,
}

#[derive(Serialize)]
struct CheckDoc {
    id: &'static str,
    level: usize,
    status: &'static str,
    detail: String,
}

#[derive(Serialize)]
struct TraceDoc {
    source: String,
    horizon: usize,
    steps: Vec<StepDoc>,
    classification: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    hypothesis_warning: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    truncated: Option<String>,
    violations: Vec<CheckDoc>,
    checks: Vec<CheckDoc>,
}

fn check_doc(r: &CheckResult) -> CheckDoc {
    CheckDoc { id: r.id, level: r.level, status: r.status.name(), detail: r.detail.clone() }
}

pub fn classification_string(class: &CycleClass) -> String {
    match class {
        CycleClass::BoundedCycles { k, onset } => format!("bounded-cycles(k={k}, onset={onset})"),
        CycleClass::Unbounded => String::from("unbounded"),
        CycleClass::Undetermined { reason } => format!("undetermined: {reason}"),
    }
}

pub fn trace_json(
    source: &str,
    horizon: usize,
    trace: &EvolutionTrace,
    checks: &[CheckResult],
) -> String {
    let steps = trace
        .steps
        .iter()
        .map(|s| StepDoc {
            n: s.n,
            k: s.k,
            l: s.l,
            b: s.b,
            w: word_string(&s.config.w),
            s_values: SValuesDoc {
                s_next: Some(s.split_next.s),
                s_after_k: s.split_after_k.as_ref().filter(|x| x.certain).map(|x| x.s),
                s_slope_level: s.split_slope.as_ref().filter(|x| x.certain).map(|x| x.s),
            },
            orientation: s.orientation.map(|o| match o {
                Orientation::KeepK => "special-stays",
                Orientation::GrowK => "special-grows",
            }),
            case_id: s.tail_case.as_ref().map(|c| c.case_id),
        })
        .collect();
    let doc = TraceDoc {
        source: source.to_string(),
        horizon,
        steps,
        classification: classification_string(&trace.classification),
        hypothesis_warning: trace.hypothesis_warning.clone(),
        truncated: trace.truncated.clone(),
        violations: checks
            .iter()
            .filter(|r| r.status.is_violation())
            .map(check_doc)
            .collect(),
        checks: checks.iter().map(check_doc).collect(),
    };
    serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
}

/// CSV columns: parameter, value, curve_id. Exact rationals print as p/q,
/// enclosed reals with 30 significant digits.
pub fn bounds_csv(points: &[BoundPoint]) -> String {
    let mut s = String::from("parameter,value,curve_id\n");
    for p in points {
        s.push_str(&format!(
            "{},{},{}\n",
            render_exact(&p.parameter),
            p.value.render(30),
            p.curve.name()
        ));
    }
    s
}

#[derive(Serialize)]
struct WitnessDoc {
    i: u64,
    m: u64,
    n: u64,
}

#[derive(Serialize)]
pub struct ApproxDoc {
    witness: WitnessDoc,
    p: String,
    q: String,
    agreement_digits: u64,
    realized_exponent: String,
}

pub fn approx_json(
    witness: &RepetitionWitness,
    approx: &RationalApprox,
    report: &ApproxReport,
) -> String {
    let exponent = if report.exact {
        String::from("exact")
    } else {
        match &report.exponent {
            Some((lo, _)) => rauzylab_core::bounds::decimal_string(lo, 12),
            None => String::from("exact"),
        }
    };
    let doc = ApproxDoc {
        witness: WitnessDoc { i: witness.i, m: witness.m, n: witness.n },
        p: approx.p().to_string(),
        q: approx.q().to_string(),
        agreement_digits: approx.agreement_digits,
        realized_exponent: exponent,
    };
    serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
}

/// One human-readable line per evaluated check.
pub fn report_lines(results: &[CheckResult]) -> String {
    let mut s = String::new();
    for r in results {
        s.push_str(&format!(
            "[{}] {} @ n={}: {}\n",
            r.status.name(),
            r.id,
            r.level,
            r.detail
        ));
    }
    s
}
