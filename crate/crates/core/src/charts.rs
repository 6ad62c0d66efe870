//! The atlas of `q: Ĥ → H`.
//!
//! Points of `H` are kept symbolically as `(i, t)` meaning `l_i(t)`, with the
//! planar embedding used only for display and tolerance checks. Every edge
//! `e` of `Ĥ` labeled `a_i` is parametrized by `ψ_e` so that `q(ψ_e(t)) =
//! l_i(t)`; an edge is stored by its base vertex and positive label, running
//! from `base` to `base·a_i` (or back to `base` for a loop).

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Oracle, Vertex};
use crate::lifting::StepKind;
use crate::words::{Letter, ReducedWord};

const QUARTER: f64 = 0.25;
const THREE_QUARTERS: f64 = 0.75;
const THREE_EIGHTHS: f64 = 0.375;
const FIVE_EIGHTHS: f64 = 0.625;

/// Planar tolerance for round trips through `l`.
pub const PLANAR_TOLERANCE: f64 = 1e-12;

/// `l_i(t) = (sin 2πt / i, (1 − cos 2πt) / i)`.
pub fn l(i: u32, t: f64) -> (f64, f64) {
    let r = f64::from(i);
    let angle = TAU * t;
    (angle.sin() / r, (1.0 - angle.cos()) / r)
}

fn check_parameter(t: f64) -> Result<f64> {
    if t > 0.0 && t < 1.0 {
        Ok(t)
    } else {
        Err(Error::ParameterOutOfRange(t.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PointH {
    Origin,
    OnCircle { circle: u32, t: f64 },
}

impl PointH {
    /// `l_i(t)`, with `t ∈ {0, 1}` identified with the origin.
    pub fn on_circle(circle: u32, t: f64) -> Result<Self> {
        if circle == 0 {
            return Err(Error::ZeroIndex);
        }
        if t == 0.0 || t == 1.0 {
            return Ok(PointH::Origin);
        }
        Ok(PointH::OnCircle {
            circle,
            t: check_parameter(t)?,
        })
    }

    pub fn planar(&self) -> (f64, f64) {
        match *self {
            PointH::Origin => (0.0, 0.0),
            PointH::OnCircle { circle, t } => l(circle, t),
        }
    }
}

impl fmt::Display for PointH {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointH::Origin => f.write_str("0"),
            PointH::OnCircle { circle, t } => write!(f, "({circle}, {t})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Edge {
    pub base: Vertex,
    pub label: u32,
    pub kind: StepKind,
}

impl Edge {
    /// The edge labeled `a_label` leaving `base`; tree or loop according to `E_base`.
    pub fn at(oracle: &Oracle, base: Vertex, label: u32) -> Result<Self> {
        if label == 0 {
            return Err(Error::ZeroIndex);
        }
        let kind = if oracle.e_set(&base).contains(label) {
            StepKind::Tree
        } else {
            StepKind::Loop
        };
        Ok(Edge { base, label, kind })
    }

    pub fn initial(&self) -> &Vertex {
        &self.base
    }

    pub fn terminal(&self) -> Vertex {
        match self.kind {
            StepKind::Tree => Vertex::certified(self.base.word().times(Letter::generator(self.label))),
            StepKind::Loop => self.base.clone(),
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} a{} {}", self.base, self.label, self.kind)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PointHat {
    Vertex { vertex: Vertex },
    OnEdge { edge: Edge, t: f64 },
}

impl PointHat {
    pub fn on_edge(edge: Edge, t: f64) -> Result<Self> {
        Ok(PointHat::OnEdge {
            edge,
            t: check_parameter(t)?,
        })
    }

    /// Parses `v:<word>` or `e:<word>:<label>:<t>`; the edge kind comes from `E_v`.
    pub fn parse(oracle: &Oracle, spec: &str) -> Result<Self> {
        let invalid = || Error::InvalidPoint(spec.to_string());
        let (tag, rest) = spec.split_once(':').ok_or_else(invalid)?;
        match tag {
            "v" => Ok(PointHat::Vertex {
                vertex: oracle.vertex(ReducedWord::from_str(rest)?)?,
            }),
            "e" => {
                let mut parts = rest.rsplitn(3, ':');
                let t = parts.next().ok_or_else(invalid)?;
                let label = parts.next().ok_or_else(invalid)?;
                let word = parts.next().ok_or_else(invalid)?;
                let t: f64 = t.trim().parse().map_err(|_| invalid())?;
                let label: u32 = label
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidToken(label.to_string()))?;
                let base = oracle.vertex(ReducedWord::from_str(word)?)?;
                PointHat::on_edge(Edge::at(oracle, base, label)?, t)
            }
            _ => Err(invalid()),
        }
    }
}

impl fmt::Display for PointHat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointHat::Vertex { vertex } => write!(f, "v:{vertex}"),
            PointHat::OnEdge { edge, t } => write!(f, "e:{}:{}:{t}", edge.base, edge.label),
        }
    }
}

/// Chart ranges in `H`: `U_i = l_i((1/4, 3/4))` and `U_{n+1}^∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "index", rename_all = "snake_case")]
pub enum Range {
    Circle(u32),
    /// `U_{n+1}^∞`, stored by `n`.
    Tail(u32),
}

impl Range {
    pub fn contains(&self, x: &PointH) -> bool {
        match (*self, *x) {
            (Range::Circle(_), PointH::Origin) => false,
            (Range::Circle(i), PointH::OnCircle { circle, t }) => {
                circle == i && t > QUARTER && t < THREE_QUARTERS
            }
            (Range::Tail(_), PointH::Origin) => true,
            (Range::Tail(n), PointH::OnCircle { circle, t }) => {
                circle > n || !(THREE_EIGHTHS..=FIVE_EIGHTHS).contains(&t)
            }
        }
    }
}

impl fmt::Display for Range {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Range::Circle(i) => write!(f, "U_{i}"),
            Range::Tail(n) => write!(f, "U_{}^inf", n + 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChartId {
    Edge { edge: Edge, range: Range },
    Vertex { vertex: Vertex, range: Range },
}

impl ChartId {
    pub fn edge(edge: Edge) -> Self {
        let range = Range::Circle(edge.label);
        ChartId::Edge { edge, range }
    }

    pub fn vertex(oracle: &Oracle, vertex: Vertex) -> Self {
        let range = Range::Tail(oracle.e_set(&vertex).level());
        ChartId::Vertex { vertex, range }
    }

    pub fn range(&self) -> Range {
        match self {
            ChartId::Edge { range, .. } | ChartId::Vertex { range, .. } => *range,
        }
    }
}

impl fmt::Display for ChartId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChartId::Edge { edge, range } => write!(f, "U_e[{edge}] -> {range}"),
            ChartId::Vertex { vertex, range } => write!(f, "U_v[{vertex}] -> {range}"),
        }
    }
}

/// `q(v) = 0`; `q(ψ_e(t)) = l_i(t)` for `e` labeled `a_i`.
pub fn q_point(p: &PointHat) -> PointH {
    match p {
        PointHat::Vertex { .. } => PointH::Origin,
        PointHat::OnEdge { edge, t } => PointH::OnCircle {
            circle: edge.label,
            t: *t,
        },
    }
}

impl Oracle {
    /// Every chart of the atlas containing `p`: at most one edge chart, then
    /// at most one vertex chart.
    pub fn charts_containing(&self, p: &PointHat) -> Vec<ChartId> {
        let (edge, t) = match p {
            PointHat::Vertex { vertex } => return vec![ChartId::vertex(self, vertex.clone())],
            PointHat::OnEdge { edge, t } => (edge, *t),
        };
        let mut charts = Vec::with_capacity(2);
        if t > QUARTER && t < THREE_QUARTERS {
            charts.push(ChartId::edge(edge.clone()));
        }
        let base_chart = ChartId::vertex(self, edge.base.clone());
        let whole_loop = edge.kind == StepKind::Loop
            && matches!(base_chart.range(), Range::Tail(n) if edge.label > n);
        if whole_loop || t < THREE_EIGHTHS {
            charts.push(base_chart);
        } else if t > FIVE_EIGHTHS {
            charts.push(ChartId::vertex(self, edge.terminal()));
        }
        charts
    }

    /// The unique preimage of `x` inside chart `c`.
    pub fn local_inverse(&self, c: &ChartId, x: &PointH) -> Result<PointHat> {
        if !c.range().contains(x) {
            return Err(Error::OutsideChart {
                chart: c.to_string(),
                point: x.to_string(),
            });
        }
        match (c, *x) {
            (ChartId::Edge { edge, .. }, PointH::OnCircle { t, .. }) => PointHat::on_edge(edge.clone(), t),
            (ChartId::Edge { .. }, PointH::Origin) => unreachable!("origin is outside every U_i"),
            (ChartId::Vertex { vertex, .. }, PointH::Origin) => Ok(PointHat::Vertex {
                vertex: vertex.clone(),
            }),
            (ChartId::Vertex { vertex, range }, PointH::OnCircle { circle, t }) => {
                let Range::Tail(n) = *range else {
                    unreachable!("vertex charts map onto tails")
                };
                let outgoing = Edge::at(self, vertex.clone(), circle)?;
                // Low labels past 5/8 sit on the edge arriving at v, which for
                // a tree label starts at v·a_i^{-1}.
                let edge = if circle <= n && t > FIVE_EIGHTHS && outgoing.kind == StepKind::Tree {
                    let from = Vertex::certified(vertex.word().times(Letter::generator(circle).inverse()));
                    Edge {
                        base: from,
                        label: circle,
                        kind: StepKind::Tree,
                    }
                } else {
                    outgoing
                };
                PointHat::on_edge(edge, t)
            }
        }
    }

    /// Randomized checks of the atlas: round trips, overlap consistency,
    /// cover/disjointness and range nesting.
    pub fn atlas_check(&self, samples: usize, seed: u64) -> Result<AtlasReport> {
        if samples == 0 {
            return Err(Error::TooSmall("samples", 1));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vertices = self.sample_vertices(samples.clamp(8, 400), 24, seed);
        let mut report = AtlasReport {
            samples,
            seed,
            ..AtlasReport::default()
        };

        for _ in 0..samples {
            let v = vertices[rng.gen_range(0..vertices.len())].clone();
            let chart = if rng.gen_bool(0.5) {
                ChartId::vertex(self, v.clone())
            } else {
                let label = rng.gen_range(1..=self.e_set(&v).level() + 3);
                ChartId::edge(Edge::at(self, v.clone(), label)?)
            };
            let x = sample_in_range(&chart.range(), &mut rng);
            report.round_trips += 1;
            let p = self.local_inverse(&chart, &x)?;
            let back = q_point(&p);
            let (x0, y0) = x.planar();
            let (x1, y1) = back.planar();
            let planar = (x0 - x1).hypot(y0 - y1);
            report.max_planar_error = report.max_planar_error.max(planar);
            if back != x || planar > PLANAR_TOLERANCE {
                report.round_trip_failures += 1;
            }

            let charts = self.charts_containing(&p);
            if !charts.contains(&chart) {
                report.cover_failures += 1;
            }
            let edges = charts.iter().filter(|c| matches!(c, ChartId::Edge { .. })).count();
            let verts = charts.len() - edges;
            if edges > 1 || verts > 1 {
                report.disjointness_failures += 1;
            }
            if charts.len() > 1 {
                report.overlaps_checked += 1;
                let agree = charts
                    .iter()
                    .all(|c| self.local_inverse(c, &x).as_ref() == Ok(&p));
                if !agree {
                    report.overlap_failures += 1;
                }
            }

            // Charts found for an arbitrary point must contain it.
            let probe = random_point(self, &v, &mut rng)?;
            let found = self.charts_containing(&probe);
            if found.is_empty()
                || found
                    .iter()
                    .any(|c| self.local_inverse(c, &q_point(&probe)).as_ref() != Ok(&probe))
            {
                report.cover_failures += 1;
            }

            let y = sample_point_h(&mut rng);
            let n = rng.gen_range(2..=8);
            let m = rng.gen_range(2..=n);
            let i = rng.gen_range(1..=8);
            let j = rng.gen_range(1..=8);
            report.nesting_checks += 1;
            let nested = !Range::Tail(n).contains(&y) || Range::Tail(m).contains(&y);
            let apart = i == j || !(Range::Circle(i).contains(&y) && Range::Circle(j).contains(&y));
            if !nested || !apart {
                report.nesting_failures += 1;
            }
        }
        Ok(report)
    }
}

const BOUNDARIES: [f64; 6] = [QUARTER, THREE_EIGHTHS, 0.5, FIVE_EIGHTHS, THREE_QUARTERS, 0.3];

fn sample_t<R: Rng>(rng: &mut R) -> f64 {
    if rng.gen_bool(0.2) {
        BOUNDARIES[rng.gen_range(0..BOUNDARIES.len())]
    } else {
        loop {
            let t: f64 = rng.gen();
            if t > 0.0 {
                return t;
            }
        }
    }
}

fn sample_point_h<R: Rng>(rng: &mut R) -> PointH {
    if rng.gen_bool(0.05) {
        PointH::Origin
    } else {
        PointH::OnCircle {
            circle: rng.gen_range(1..=10),
            t: sample_t(rng),
        }
    }
}

fn sample_in_range<R: Rng>(range: &Range, rng: &mut R) -> PointH {
    loop {
        let x = match *range {
            Range::Circle(i) => PointH::OnCircle {
                circle: i,
                t: sample_t(rng),
            },
            Range::Tail(n) => {
                if rng.gen_bool(0.05) {
                    PointH::Origin
                } else {
                    PointH::OnCircle {
                        circle: rng.gen_range(1..=n + 3),
                        t: sample_t(rng),
                    }
                }
            }
        };
        if range.contains(&x) {
            return x;
        }
    }
}

fn random_point<R: Rng>(oracle: &Oracle, v: &Vertex, rng: &mut R) -> Result<PointHat> {
    if rng.gen_bool(0.1) {
        return Ok(PointHat::Vertex { vertex: v.clone() });
    }
    let label = rng.gen_range(1..=oracle.e_set(v).level() + 3);
    PointHat::on_edge(Edge::at(oracle, v.clone(), label)?, sample_t(rng))
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct AtlasReport {
    pub samples: usize,
    pub seed: u64,
    pub round_trips: usize,
    pub round_trip_failures: usize,
    pub max_planar_error: f64,
    pub overlaps_checked: usize,
    pub overlap_failures: usize,
    pub cover_failures: usize,
    pub disjointness_failures: usize,
    pub nesting_checks: usize,
    pub nesting_failures: usize,
}

impl AtlasReport {
    pub fn passed(&self) -> bool {
        self.round_trip_failures == 0
            && self.overlap_failures == 0
            && self.cover_failures == 0
            && self.disjointness_failures == 0
            && self.nesting_failures == 0
            && self.max_planar_error <= PLANAR_TOLERANCE
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: (f64, f64), b: (f64, f64)) -> bool {
        (a.0 - b.0).abs() < 1e-15 && (a.1 - b.1).abs() < 1e-15
    }

    #[test]
    fn parametrization() {
        assert_eq!(l(1, 0.0), (0.0, 0.0));
        assert!(close(l(1, 0.5), (0.0, 2.0)));
        assert!(close(l(2, 0.25), (0.5, 0.5)));
        assert_eq!(PointH::on_circle(4, 1.0).unwrap(), PointH::Origin);
        assert!(PointH::on_circle(4, 1.5).is_err());
    }

    #[test]
    fn q_examples() {
        let oracle = Oracle::new();
        let base = Vertex::base();
        assert_eq!(q_point(&PointHat::Vertex { vertex: base.clone() }), PointH::Origin);
        let loop3 = Edge::at(&oracle, base.clone(), 3).unwrap();
        assert_eq!(loop3.kind, StepKind::Loop);
        let p = PointHat::on_edge(loop3, 0.5).unwrap();
        assert_eq!(q_point(&p), PointH::OnCircle { circle: 3, t: 0.5 });
        let tree1 = Edge::at(&oracle, base, 1).unwrap();
        assert_eq!(tree1.kind, StepKind::Tree);
        let p = PointHat::on_edge(tree1, 0.3).unwrap();
        assert_eq!(q_point(&p), PointH::OnCircle { circle: 1, t: 0.3 });
    }

    #[test]
    fn chart_membership() {
        let oracle = Oracle::new();
        let base = Vertex::base();
        let tree1 = Edge::at(&oracle, base.clone(), 1).unwrap();

        let mid = oracle.charts_containing(&PointHat::on_edge(tree1.clone(), 0.5).unwrap());
        assert_eq!(mid, vec![ChartId::edge(tree1.clone())]);

        let low = oracle.charts_containing(&PointHat::on_edge(tree1.clone(), 0.3).unwrap());
        assert_eq!(
            low,
            vec![ChartId::edge(tree1.clone()), ChartId::vertex(&oracle, base.clone())]
        );

        let high = oracle.charts_containing(&PointHat::on_edge(tree1.clone(), 0.7).unwrap());
        assert_eq!(high[1], ChartId::vertex(&oracle, tree1.terminal()));

        // Brackets: 3/8 and 5/8 are outside V^±, 1/4 and 3/4 outside U_e.
        let at = |t| oracle.charts_containing(&PointHat::on_edge(tree1.clone(), t).unwrap());
        assert_eq!(at(0.375), vec![ChartId::edge(tree1.clone())]);
        assert_eq!(at(0.625), vec![ChartId::edge(tree1.clone())]);
        assert_eq!(at(0.25), vec![ChartId::vertex(&oracle, base.clone())]);
        assert_eq!(at(0.75), vec![ChartId::vertex(&oracle, tree1.terminal())]);

        let vertex = oracle.charts_containing(&PointHat::Vertex { vertex: base.clone() });
        assert_eq!(vertex, vec![ChartId::vertex(&oracle, base.clone())]);

        // C_3 at 𝟙 lies wholly in U_𝟙, overlapping U_e in its middle.
        let loop3 = Edge::at(&oracle, base.clone(), 3).unwrap();
        let on_loop = oracle.charts_containing(&PointHat::on_edge(loop3.clone(), 0.5).unwrap());
        assert_eq!(
            on_loop,
            vec![ChartId::edge(loop3), ChartId::vertex(&oracle, base)]
        );
    }

    #[test]
    fn local_inverses() {
        let oracle = Oracle::new();
        let base = Vertex::base();
        let chart = ChartId::vertex(&oracle, base.clone());
        assert_eq!(chart.range(), Range::Tail(2));
        assert_eq!(
            oracle.local_inverse(&chart, &PointH::Origin).unwrap(),
            PointHat::Vertex { vertex: base.clone() }
        );
        let loop3 = Edge::at(&oracle, base.clone(), 3).unwrap();
        assert_eq!(
            oracle
                .local_inverse(&chart, &PointH::OnCircle { circle: 3, t: 0.5 })
                .unwrap(),
            PointHat::on_edge(loop3, 0.5).unwrap()
        );
        let tree1 = Edge::at(&oracle, base.clone(), 1).unwrap();
        let edge_chart = ChartId::edge(tree1.clone());
        assert_eq!(
            oracle
                .local_inverse(&edge_chart, &PointH::OnCircle { circle: 1, t: 0.6 })
                .unwrap(),
            PointHat::on_edge(tree1, 0.6).unwrap()
        );

        // Past 5/8 on a tree label, the preimage sits on the edge arriving at 𝟙.
        let arriving = oracle
            .local_inverse(&chart, &PointH::OnCircle { circle: 2, t: 0.9 })
            .unwrap();
        let PointHat::OnEdge { edge, .. } = &arriving else {
            panic!("expected an edge point");
        };
        assert_eq!(edge.base.word(), &ReducedWord::from_str("-2").unwrap());
        assert_eq!(edge.terminal(), base);

        assert!(matches!(
            oracle.local_inverse(&chart, &PointH::OnCircle { circle: 1, t: 0.5 }),
            Err(Error::OutsideChart { .. })
        ));
        assert!(oracle.local_inverse(&edge_chart, &PointH::Origin).is_err());
    }

    #[test]
    fn point_specs() {
        let oracle = Oracle::new();
        assert_eq!(
            PointHat::parse(&oracle, "v:e").unwrap(),
            PointHat::Vertex { vertex: Vertex::base() }
        );
        let p = PointHat::parse(&oracle, "e:1,-2:3:0.5").unwrap();
        assert_eq!(p.to_string(), "e:1,-2:3:0.5");
        let PointHat::OnEdge { edge, .. } = &p else { panic!() };
        assert_eq!(edge.kind, StepKind::Loop);
        assert!(PointHat::parse(&oracle, "v:3").is_err());
        assert!(PointHat::parse(&oracle, "e:e:1:1.0").is_err());
        assert!(PointHat::parse(&oracle, "e:e:0:0.5").is_err());
        assert!(PointHat::parse(&oracle, "x:e").is_err());
    }

    #[test]
    fn atlas() {
        let oracle = Oracle::new();
        let report = oracle.atlas_check(500, 11).unwrap();
        assert!(report.passed(), "{report:?}");
        assert!(report.overlaps_checked > 0);
        assert_eq!(report, oracle.atlas_check(500, 11).unwrap());
    }
}
