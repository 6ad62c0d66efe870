use std::fmt::Write as _;

use clap::{Args, Subcommand};
use earring_core::charts::{q_point, PointHat};
use earring_core::corefree::ConjugationCertificate;
use earring_core::lifting::LiftTrace;
use earring_core::{Error, LabelSet, Membership, Oracle, ReducedWord, Result, Vertex, Word};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Subcommand, Serialize)]
#[serde(untagged)]
pub enum Command {
    /// Whether a word is a vertex of the pruned tree.
    Survives(WordArg),
    /// The island containing a word, if any.
    Island(WordArg),
    /// The tree labels E_v at a vertex.
    Ev(WordArg),
    /// The w_j edge-path from the anchor of island j.
    Zpath(IndexArg),
    /// Compare the pruning formula with the direct removal rule near island j.
    Crosscheck(CrosscheckArgs),
    /// Lift an edge-word, from the base vertex unless --start is given.
    Lift(LiftArgs),
    /// Whether a loop lies in K.
    InK(WordArg),
    /// Conjugator certificate showing the conjugate of a word leaves K.
    Witness(WitnessArgs),
    /// Certificates for every essential word up to a weight.
    Scan(ScanArgs),
    /// The image of a point of the covering space.
    QPoint(PointArg),
    /// The charts containing a point of the covering space.
    Charts(PointArg),
    /// Randomized checks of the chart atlas.
    AtlasCheck(AtlasArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct WordArg {
    /// Comma or space separated signed indices, `e` for the empty word.
    #[arg(allow_hyphen_values = true)]
    pub word: String,
}

#[derive(Debug, Args, Serialize)]
pub struct IndexArg {
    pub j: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct CrosscheckArgs {
    pub j: u64,
    pub radius: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct LiftArgs {
    #[arg(allow_hyphen_values = true)]
    pub word: String,
    #[arg(long, allow_hyphen_values = true)]
    pub start: Option<String>,
    #[arg(long)]
    pub trace: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct WitnessArgs {
    #[arg(allow_hyphen_values = true)]
    pub word: String,
    #[arg(long)]
    pub trace: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct ScanArgs {
    #[arg(long)]
    pub max_weight: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct PointArg {
    /// `v:<word>` or `e:<word>:<label>:<t>`.
    #[arg(allow_hyphen_values = true)]
    pub point: String,
}

#[derive(Debug, Args, Serialize)]
pub struct AtlasArgs {
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Survives(_) => "survives",
            Command::Island(_) => "island",
            Command::Ev(_) => "ev",
            Command::Zpath(_) => "zpath",
            Command::Crosscheck(_) => "crosscheck",
            Command::Lift(_) => "lift",
            Command::InK(_) => "in-k",
            Command::Witness(_) => "witness",
            Command::Scan(_) => "scan",
            Command::QPoint(_) => "q-point",
            Command::Charts(_) => "charts",
            Command::AtlasCheck(_) => "atlas-check",
        }
    }
}

/// A finished command: JSON payload, text rendering, and a property
/// violation if a check failed.
pub struct Outcome {
    pub output: Value,
    pub text: String,
    pub violation: Option<String>,
}

impl Outcome {
    fn ok(output: Value, text: String) -> Self {
        Outcome {
            output,
            text,
            violation: None,
        }
    }
}

fn parse_word(s: &str) -> Result<Word> {
    s.parse()
}

fn parse_reduced(s: &str) -> Result<ReducedWord> {
    Ok(parse_word(s)?.reduce())
}

fn opt<T: ToString>(value: Option<T>) -> String {
    value.map_or_else(|| "-".to_string(), |v| v.to_string())
}

fn membership_text(m: Option<(u64, Membership)>) -> String {
    match m {
        None => "off-island".into(),
        Some((_, Membership::Core)) => "core".into(),
        Some((_, Membership::Line(s))) => format!("line a{s}"),
    }
}

fn graph_output(query: &ReducedWord, verdict: bool, island: Option<u64>, e_set: Option<&LabelSet>, details: Value) -> Value {
    json!({
        "query": query,
        "verdict": verdict,
        "island": island,
        "e_set": e_set,
        "details": details,
    })
}

fn trace_lines(trace: &LiftTrace, text: &mut String) {
    for step in &trace.steps {
        let _ = writeln!(text, "{} {} {}", step.letter, step.kind, step.at);
    }
}

pub fn run(oracle: &Oracle, command: &Command) -> Result<Outcome> {
    match command {
        Command::Survives(WordArg { word }) => {
            let v = parse_reduced(word)?;
            let survives = oracle.survives(&v);
            let membership = oracle.membership(&v);
            let island = membership.map(|(j, _)| j);
            let e_set = survives.then(|| oracle.e_set(&oracle.vertex(v.clone()).expect("survives")));
            // Shortest prefix that is pruned, for words that do not survive.
            let dead_prefix = (!survives)
                .then(|| (1..=v.len()).map(|k| v.prefix(k)).find(|p| !oracle.survives(p)))
                .flatten();
            let text = format!(
                "{v}: {} island={} e_set={} membership={}{}",
                if survives { "survives" } else { "pruned" },
                opt(island),
                opt(e_set.as_ref()),
                membership_text(membership),
                dead_prefix.as_ref().map(|p| format!(" first_pruned_prefix={p}")).unwrap_or_default(),
            );
            let details = json!({
                "membership": membership.map(|(_, m)| m),
                "first_pruned_prefix": dead_prefix,
            });
            Ok(Outcome::ok(graph_output(&v, survives, island, e_set.as_ref(), details), text))
        }
        Command::Island(WordArg { word }) => {
            let v = parse_reduced(word)?;
            let membership = oracle.membership(&v);
            let island = membership.map(|(j, _)| j);
            let survives = oracle.survives(&v);
            let e_set = survives.then(|| oracle.e_set(&oracle.vertex(v.clone()).expect("survives")));
            let text = format!(
                "{v}: island={} membership={} survives={survives}",
                opt(island),
                membership_text(membership)
            );
            let details = json!({
                "membership": membership.map(|(_, m)| m),
                "survives": survives,
            });
            Ok(Outcome::ok(graph_output(&v, island.is_some(), island, e_set.as_ref(), details), text))
        }
        Command::Ev(WordArg { word }) => {
            let v = oracle.vertex(parse_reduced(word)?)?;
            let e_set = oracle.e_set(&v);
            let membership = oracle.membership(v.word());
            let island = membership.map(|(j, _)| j);
            let text = format!("{e_set}");
            let details = json!({
                "membership": membership.map(|(_, m)| m),
                "level": e_set.level(),
            });
            Ok(Outcome::ok(graph_output(v.word(), true, island, Some(&e_set), details), text))
        }
        Command::Zpath(IndexArg { j }) => {
            if *j == 0 {
                return Err(Error::ZeroIndex);
            }
            let data = oracle.island_data(*j)?;
            let core = LabelSet::new(1..=data.level);
            let mut text = format!(
                "island {j}: w={} level={} anchor_len={}\n",
                data.word,
                data.level,
                data.anchor.len()
            );
            for v in &data.z_path {
                let _ = writeln!(text, "{v}");
            }
            let details = serde_json::to_value(&data).expect("island data serializes");
            Ok(Outcome::ok(
                graph_output(&data.anchor, true, Some(*j), Some(&core), details),
                text.trim_end().to_string(),
            ))
        }
        Command::Crosscheck(CrosscheckArgs { j, radius }) => {
            if *j == 0 {
                return Err(Error::ZeroIndex);
            }
            let report = oracle.removal_cross_check(*j, *radius)?;
            let anchor = oracle.island_data(*j)?.anchor;
            let mut text = format!(
                "island {j} radius {radius}: checked={} removed={} removed_via_inward_line={} disagreements={}",
                report.words_checked,
                report.removed,
                report.removed_via_inward_line,
                report.disagreements.len()
            );
            for d in &report.disagreements {
                let _ = write!(
                    text,
                    "\n  {} pattern={} neighbourhood={}",
                    d.word, d.by_pattern, d.by_neighbourhood
                );
            }
            let passed = report.passed();
            let details = serde_json::to_value(&report).expect("report serializes");
            Ok(Outcome {
                output: graph_output(&anchor, passed, Some(*j), None, details),
                text,
                violation: (!passed).then(|| format!("{} disagreements", report.disagreements.len())),
            })
        }
        Command::Lift(LiftArgs { word, start, trace }) => {
            let w = parse_word(word)?;
            let start = match start {
                Some(s) => oracle.vertex(parse_reduced(s)?)?,
                None => Vertex::base(),
            };
            let lift = oracle.lift_word(&w, &start);
            let mut text = String::new();
            if *trace {
                trace_lines(&lift, &mut text);
            }
            let _ = write!(
                text,
                "endpoint {} tree_steps={} loop_steps={}",
                lift.endpoint,
                lift.tree_steps(),
                lift.steps.len() - lift.tree_steps()
            );
            let output = serde_json::to_value(&lift).expect("trace serializes");
            Ok(Outcome::ok(output, text))
        }
        Command::InK(WordArg { word }) => {
            let w = parse_word(word)?;
            let endpoint = oracle.endpoint(&w, &Vertex::base());
            let verdict = endpoint.is_base();
            let text = format!("{verdict} endpoint={endpoint}");
            Ok(Outcome::ok(json!({"verdict": verdict, "endpoint": endpoint}), text))
        }
        Command::Witness(WitnessArgs { word, trace }) => {
            let w = parse_word(word)?;
            let cert: ConjugationCertificate = oracle.witness_conjugator(&w)?;
            let midpoint = oracle.midpoint_structure_check(&cert)?;
            let mut text = String::new();
            let mut output = json!({
                "certificate": cert,
                "beta_len": cert.beta.len(),
                "midpoint_check": midpoint,
            });
            if *trace {
                let conjugate = cert.beta.to_word().concat(&w).concat(&cert.beta.to_word().invert());
                let lift = oracle.lift_word(&conjugate, &Vertex::base());
                trace_lines(&lift, &mut text);
                output["trace"] = serde_json::to_value(&lift).expect("trace serializes");
            }
            let _ = write!(
                text,
                "j={} beta_len={} endpoint={} verdict={} midpoint_check={}",
                cert.index,
                cert.beta.len(),
                cert.conjugate_endpoint,
                cert.verdict,
                if midpoint.passed() { "ok" } else { "failed" }
            );
            let violation = (!cert.verdict || !midpoint.passed()).then(|| "certificate failed".to_string());
            Ok(Outcome {
                output,
                text,
                violation,
            })
        }
        Command::Scan(ScanArgs { max_weight }) => {
            let report = oracle.core_free_scan(*max_weight)?;
            let mut text = format!(
                "max_weight={} words={} trivial={} essential={} in_k={} not_in_k={} failures={}",
                report.max_weight,
                report.words_total,
                report.trivial_skipped,
                report.essential,
                report.in_k,
                report.not_in_k,
                report.failures.len()
            );
            for j in &report.failures {
                let _ = write!(text, "\n  failed: j={j}");
            }
            let violation = (!report.passed()).then(|| format!("{} certificates failed", report.failures.len()));
            Ok(Outcome {
                output: serde_json::to_value(&report).expect("report serializes"),
                text,
                violation,
            })
        }
        Command::QPoint(PointArg { point }) => {
            let p = PointHat::parse(oracle, point)?;
            let x = q_point(&p);
            let (px, py) = x.planar();
            let text = format!("{x} planar=({px}, {py})");
            Ok(Outcome::ok(json!({"point": p, "image": x, "planar": [px, py]}), text))
        }
        Command::Charts(PointArg { point }) => {
            let p = PointHat::parse(oracle, point)?;
            let charts = oracle.charts_containing(&p);
            let text = charts.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("\n");
            Ok(Outcome::ok(json!({"point": p, "charts": charts}), text))
        }
        Command::AtlasCheck(AtlasArgs { samples, seed }) => {
            let report = oracle.atlas_check(*samples, *seed)?;
            let text = format!(
                "samples={} seed={} round_trip_failures={} max_planar_error={:e} overlaps={} overlap_failures={} cover_failures={} disjointness_failures={} nesting_failures={} {}",
                report.samples,
                report.seed,
                report.round_trip_failures,
                report.max_planar_error,
                report.overlaps_checked,
                report.overlap_failures,
                report.cover_failures,
                report.disjointness_failures,
                report.nesting_failures,
                if report.passed() { "passed" } else { "FAILED" }
            );
            let violation = (!report.passed()).then(|| "atlas check failed".to_string());
            Ok(Outcome {
                output: serde_json::to_value(&report).expect("report serializes"),
                text,
                violation,
            })
        }
    }
}
