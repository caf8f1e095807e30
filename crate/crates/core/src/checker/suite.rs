//! Seeded suites of random instances per check, with reports.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds;
use crate::graph::{GraphDocument, MetricGraph, VertexCondition};
use crate::spectrum::Fault;
use crate::surgery::{attach_pendant_edge, EndpointRef};

use super::interlacing::*;
use super::random::{random_graph_with, random_strength, Family, GraphParams, Sign};
use super::relations::*;
use super::{CheckContext, CheckError, Status, Verdict};

#[derive(Debug, thiserror::Error)]
pub enum SuiteError {
    #[error("invalid suite configuration: {0}")]
    ConfigInvalid(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SuiteRanges {
    pub edges: (usize, usize),
    pub lengths: (f64, f64),
    pub strengths: (f64, f64),
}

impl Default for SuiteRanges {
    fn default() -> Self {
        SuiteRanges {
            edges: (2, 6),
            lengths: (0.5, 2.0),
            strengths: (0.2, 5.0),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteOverride {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instances: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements_per_edge: Option<usize>,
}

/// Suite configuration as read from JSON; every field has a default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SuiteConfig {
    /// Instance `i` uses seed `seed + i`.
    pub seed: u64,
    pub instances: usize,
    pub k_max: usize,
    pub elements_per_edge: usize,
    /// Check ids to run; all when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checks: Option<Vec<String>>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub overrides: BTreeMap<String, SuiteOverride>,
    /// Rerun an instance once on the doubled mesh when it is inconclusive.
    pub retry: bool,
    pub ranges: SuiteRanges,
    #[doc(hidden)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fault: Option<Fault>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 1,
            instances: 100,
            k_max: 12,
            elements_per_edge: 64,
            checks: None,
            overrides: BTreeMap::new(),
            retry: true,
            ranges: SuiteRanges::default(),
            fault: None,
        }
    }
}

impl SuiteConfig {
    pub fn from_json_str(s: &str) -> Result<Self, SuiteError> {
        let c: SuiteConfig = serde_json::from_str(s).map_err(|e| SuiteError::ConfigInvalid(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn only(mut self, checks: &[&str]) -> Self {
        self.checks = Some(checks.iter().map(|s| s.to_string()).collect());
        self
    }

    pub fn validate(&self) -> Result<(), SuiteError> {
        let bad = |m: String| Err(SuiteError::ConfigInvalid(m));
        let known = |id: &str| CHECKS.iter().any(|(c, _)| *c == id);
        if let Some(list) = &self.checks {
            if list.is_empty() {
                return bad("checks must not be empty".into());
            }
            for id in list {
                if !known(id) {
                    return bad(format!("unknown check '{id}'"));
                }
            }
        }
        for (id, o) in &self.overrides {
            if !known(id) {
                return bad(format!("override for unknown check '{id}'"));
            }
            if o.instances == Some(0) || o.k_max == Some(0) || o.elements_per_edge.is_some_and(|n| n < 2) {
                return bad(format!("override for '{id}' has a zero count or a mesh below 2"));
            }
        }
        if self.instances == 0 {
            return bad("instances must be at least 1".into());
        }
        if self.k_max == 0 {
            return bad("k_max must be at least 1".into());
        }
        if self.elements_per_edge < 2 {
            return bad("elements_per_edge must be at least 2".into());
        }
        let r = &self.ranges;
        if r.edges.0 < 2 || r.edges.0 > r.edges.1 || r.edges.1 > 64 {
            return bad("edge range must lie within 2..=64 and be nonempty".into());
        }
        if !(r.lengths.0 > 0.0 && r.lengths.0 <= r.lengths.1 && r.lengths.1.is_finite()) {
            return bad("length range must be positive and nonempty".into());
        }
        if !(r.strengths.0 > 0.0 && r.strengths.0 <= r.strengths.1 && r.strengths.1.is_finite()) {
            return bad("strength magnitudes must be positive and nonempty".into());
        }
        Ok(())
    }

    fn selected(&self) -> Vec<&'static str> {
        match &self.checks {
            Some(list) => CHECKS
                .iter()
                .map(|(id, _)| *id)
                .filter(|id| list.iter().any(|l| l == id))
                .collect(),
            None => CHECKS.iter().map(|(id, _)| *id).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatusCounts {
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
    /// Instances whose check could not be carried out.
    pub errors: usize,
}

impl StatusCounts {
    fn add(&mut self, o: &StatusCounts) {
        self.pass += o.pass;
        self.fail += o.fail;
        self.inconclusive += o.inconclusive;
        self.errors += o.errors;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceReport {
    pub index: usize,
    pub seed: u64,
    pub elements_per_edge: usize,
    pub retried: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub verdicts: Vec<Verdict>,
}

impl InstanceReport {
    fn has(&self, s: Status) -> bool {
        self.verdicts.iter().any(|v| v.status == s)
    }
}

/// The verdict with the smallest margin relative to its error budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorstCase {
    pub index: usize,
    pub seed: u64,
    pub verdict: Verdict,
    pub graph: GraphDocument,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_id: String,
    pub instances: usize,
    pub seed: u64,
    pub k_max: usize,
    /// Verdict counts; `errors` counts instances.
    pub counts: StatusCounts,
    /// Inconclusive verdicts over all verdicts.
    pub inconclusive_rate: f64,
    /// Instances with an Inconclusive and no Fail verdict, over all instances.
    pub inconclusive_instance_rate: f64,
    pub failed_instances: Vec<usize>,
    pub worst_case: Option<WorstCase>,
    pub results: Vec<InstanceReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub totals: StatusCounts,
    pub reports: Vec<CheckReport>,
}

impl SuiteReport {
    pub fn any_fail(&self) -> bool {
        self.totals.fail > 0 || self.totals.errors > 0
    }

    /// 0 when nothing failed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        i32::from(self.any_fail())
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("suite reports always serialise")
    }

    /// One row per verdict.
    pub fn to_csv_rows(&self) -> Vec<[String; 10]> {
        let mut rows = Vec::new();
        for r in &self.reports {
            for inst in &r.results {
                for v in &inst.verdicts {
                    rows.push([
                        r.check_id.clone(),
                        inst.index.to_string(),
                        inst.seed.to_string(),
                        inst.elements_per_edge.to_string(),
                        v.relation.clone(),
                        format!("{:.16e}", v.lhs),
                        format!("{:.16e}", v.rhs),
                        format!("{:.16e}", v.margin),
                        format!("{:.16e}", v.error_budget),
                        format!("{:?}", v.status),
                    ]);
                }
            }
        }
        rows
    }

    pub const CSV_HEADER: [&'static str; 10] = [
        "check_id",
        "instance",
        "seed",
        "elements_per_edge",
        "relation",
        "lhs",
        "rhs",
        "margin",
        "error_budget",
        "status",
    ];

    pub fn report(&self, id: &str) -> Option<&CheckReport> {
        self.reports.iter().find(|r| r.check_id == id)
    }
}

/// One random instance of a check.
struct Instance {
    index: usize,
    rng: ChaCha8Rng,
    ranges: SuiteRanges,
}

struct Outcome {
    graph: MetricGraph,
    verdicts: Vec<Verdict>,
}

type Runner = fn(&CheckContext, &mut Instance) -> Result<Outcome, CheckError>;

/// Check ids in suite order.
pub fn check_ids() -> Vec<&'static str> {
    CHECKS.iter().map(|(id, _)| *id).collect()
}

const CHECKS: &[(&str, Runner)] = &[
    ("strength_change", run_strength_change),
    ("deltaprime_gluing", run_deltaprime_gluing),
    ("delta_gluing", run_delta_gluing),
    ("flower", run_flower),
    ("edge_scaling", run_edge_scaling),
    ("graph_scaling", run_graph_scaling),
    ("pendant_graph", run_pendant_graph),
    ("pendant_edge", run_pendant_edge),
    ("delta_insertion", run_delta_insertion),
    ("edge_lengthening", run_edge_lengthening),
    ("antistandard_insertion", run_antistandard_insertion),
    ("rank_one_chains", run_rank_one_chains),
    ("delta_strength_change", run_delta_strength_change),
    ("counting_sandwich", run_counting_sandwich),
    ("standard_upper", run_standard_upper),
    ("delta_bounds", run_delta_bounds),
    ("dirichlet_standard_upper", run_dirichlet_standard_upper),
    ("antistandard_counting_bounds", run_antistandard_counting),
    ("antistandard_neumann_bounds", run_antistandard_neumann),
    ("deltaprime_negative_lower", run_deltaprime_negative),
    ("deltaprime_star_lower", run_deltaprime_star),
    ("lambda1_test_functions", run_lambda1),
    ("lambda1_nonzero_restriction", run_lambda1_nonzero),
    ("tree_bounds", run_tree_bounds),
    ("tree_relation", run_tree_relation),
    ("bipartite_relation", run_bipartite_relation),
    ("pendant_diameter", run_pendant_diameter),
];

impl Instance {
    fn params(&self, family: Family) -> GraphParams {
        GraphParams {
            edges: self.ranges.edges,
            lengths: self.ranges.lengths,
            strengths: self.ranges.strengths,
            family,
            sign: Sign::Any,
            tree: false,
            min_vertices: 1,
        }
    }

    fn graph(&mut self, p: &GraphParams) -> Result<MetricGraph, CheckError> {
        Ok(random_graph_with(p, &mut self.rng)?)
    }

    fn strength(&mut self, family: Family) -> f64 {
        let p = self.params(family);
        random_strength(&mut self.rng, &p)
    }

    fn magnitude(&mut self) -> f64 {
        let (a, b) = self.ranges.strengths;
        self.rng.gen_range(a..=b)
    }

    fn length(&mut self) -> f64 {
        let (a, b) = self.ranges.lengths;
        self.rng.gen_range(a..=b)
    }

    fn vertex(&mut self, g: &MetricGraph) -> String {
        g.vertex(self.rng.gen_range(0..g.vertex_count())).id.clone()
    }

    fn edge(&mut self, g: &MetricGraph) -> String {
        g.edge(self.rng.gen_range(0..g.edge_count())).id.clone()
    }

    fn two_vertices(&mut self, g: &MetricGraph) -> (String, String) {
        let mut idx: Vec<usize> = (0..g.vertex_count()).collect();
        idx.shuffle(&mut self.rng);
        (g.vertex(idx[0]).id.clone(), g.vertex(idx[1]).id.clone())
    }
}

fn set(g: &MetricGraph, v: &str, c: VertexCondition) -> Result<MetricGraph, CheckError> {
    Ok(g.with_condition(g.require_vertex(v)?, c)?)
}

fn deltaprime_or_anti(a: f64) -> VertexCondition {
    if a == 0.0 {
        VertexCondition::AntiStandard
    } else {
        VertexCondition::DeltaPrime(a)
    }
}

fn run_strength_change(ctx: &CheckContext, it: &mut Instance) -> Result<Outcome, CheckError> {
    let g = it.graph(&it.params(Family::DeltaPrime))?;
    let v = it.vertex(&g);
    let m = it.magnitude();
    let u = it.rng.gen_range(1.5..3.0);
    let (a, b) = match it.index % 3 {
        0 => (m, m * u),
        1 => (-m, -m / u),
        _ => (-m, it.magnitude()),
    };
    let g = set(&g, &v, VertexCondition::DeltaPrime(a))?;
    let verdicts = check_interlacing_strength(ctx, &g, &v, b)?;
    Ok(Outcome { graph: g, verdicts })
}

fn run_deltaprime_gluing(ctx: &CheckContext, it: &mut Instance) -> Result<Outcome, CheckError> {
    let g = it.graph(&it.params(Family::DeltaPrime).min_vertices(2))?;
    let (v1, v2) = it.two_vertices(&g);
    let m = it.magnitude();
    let u = it.rng.gen_range(0.2..0.8);
    let other = it.strength(Family::DeltaPrime);
    let (a1, a2) = match it.index % 6 {
        0 => (m, it.magnitude()),
        1 => (-m, -it.magnitude()),
        2 => (m, -m * u),
        3 => (-m, m * u),
        4 => (m, -m),
        _ => (0.0, other),
    };
    let g = set(&set(&g, &v1, deltaprime_or_anti(a1))?, &v2, deltaprime_or_anti(a2))?;
    let (_, verdicts) = check_gluing_cases(ctx, &g, &v1, &v2)?;
    Ok(Outcome { graph: g, verdicts })
}

fn run_delta_gluing(ctx: &CheckContext, it: &mut Instance) -> Result<Outcome, CheckError> {
    let g = it.graph(&it.params(Family::Delta).min_vertices(2))?;
    let (v1, v2) = it.two_vertices(&g);
    let verdicts = check_delta_gluing(ctx, &g, &v1, &v2)?;
    Ok(Outcome { graph: g, verdicts })
}

fn run_flower(ctx: &CheckContext, it: &mut Instance) -> Result<Outcome, CheckError> {
    let p = match it.index % 3 {
        0 => it.params(Family::Delta),
        1 => it.params(Family::DeltaPrime).sign(Sign::Positive),
        _ => it.params(Family::DeltaPrime).sign(Sign::Negative),
    };
    let g = it.graph(&p)?;
    let verdicts = check_flower(ctx, &g)?;
    Ok(Outcome { graph: g, verdicts })
}

fn run_edge_scaling(ctx: &CheckContext, it: &mut Instance) -> Result<Outcome, CheckError> {
    let g = it.graph(&it.params(Family::DeltaPrime))?;
    let e = it.edge(&g);
    let t = if it.index % 2 == 0 {
        it.rng.gen_range(1.2..3.0)
    } else {
        it.rng.gen_range(0.3..0.8)
    };
    let verdicts = check_scaling(ctx, &g, t, &ScaleMode::Edge(e))?;
    Ok(Outcome { graph: g, verdicts })
}

/// Factors of the graph-scaling identity, cycled over instances.
pub const GRAPH_SCALING_FACTORS: [f64; 3] = [0.5, 2.0, 3.0];

fn run_graph_scaling(ctx: &CheckContext, it: &mut Instance) -> Result<Outcome, CheckError> {
    let g = it.graph(&it.params(Family::DeltaPrime))?;
    let t = GRAPH_SCALING_FACTORS[it.index % 3];
    let verdicts = check_scaling(ctx, &g, t, &ScaleMode::Graph)?;
    Ok(Outcome { graph: g, verdicts })
}

fn run_pendant_graph(ctx: &CheckContext, it: &mut Instance) -> Result<Outcome, CheckError> {
    let g = it.graph(&it.params(Family::DeltaPrime))?;
    let mut hp = it.params(Family::DeltaPrime);
    hp.edges = (1, 3);
    let h = it.graph(&hp)?;
    let v = it.vertex(&g);
    let w = it.vertex(&h);
    let m = it.magnitude();
    let other = it.strength(Family::DeltaPrime);
    let (a1, a2) = match it.index % 6 {
        0 => (m, it.magnitude()),
        1 => {
            if it.index % 12 == 1 {
                (0.0, other)
            } else {
                (other, 0.0)
            }
        }
        2 => (m, -m * it.rng.gen_range(1.25..5.0)),
        3 => (-m, -it.magnitude()),
        4 => (m, -m * it.rng.gen_range(0.2..0.8)),
        _ => (m, -m),
    };
    let g = set(&g, &v, deltaprime_or_anti(a1))?;
    let h = set(&h, &w, deltaprime_or_anti(a2))?;
    let (_, verdicts) = check_pendant_cases(ctx, &g, &v, &h, &w)?;
    Ok(Outcome { graph: g, verdicts })
}

fn run_pendant_edge(ctx: &CheckContext, it: &mut Instance) -> Result<Outcome, CheckError> {
    let g = it.graph(&it.params(Family::DeltaPrime))?;
    let v = it.vertex(&g);
    let len = it.length();
    let tip = match it.rng.gen_range(0..4) {
        0 => VertexCondition::Dirichlet,
        1 => VertexCondition::Neumann,
        2 => VertexCondition::AntiStandard,
        _ => VertexCondition::DeltaPrime(it.strength(Family::DeltaPrime)),
    };
    let verdicts = check_pendant_edge(ctx, &g, &v, len, tip)?;
    Ok(Outcome { graph: g, verdicts })
}

/// Endpoints of `v`; each of the first `m` goes to its own receiver, the rest at random.
fn random_assignment(
    it: &mut Instance,
    g: &MetricGraph,
    v: &str,
    receivers: &[String],
) -> Result<Vec<(EndpointRef, String)>, CheckError> {
    let mut ends = g.endpoints_at(g.require_vertex(v)?);
    ends.shuffle(&mut it.rng);
    Ok(ends
        .into_iter()
        .enumerate()
        .map(|(j, p)| {
            let w = if j < receivers.len() {
                receivers[j].clone()
            } else {
                receivers[it.rng.gen_range(0..receivers.len())].clone()
            };
            (EndpointRef::of(g, p), w)
        })
        .collect())
}

fn run_delta_insertion(ctx: &CheckContext, it: &mut Instance) -> Result<Outcome, CheckError> {
    let g = it.graph(&it.params(Family::Delta))?;
    let mut hp = it.params(Family::Delta);
    hp.edges = (1, 3);
    let h = it.graph(&hp)?;
    let v = it.vertex(&g);
    let vi = g.require_vertex(&v)?;
    let m = it.rng.gen_range(1..=g.degree(vi).min(h.vertex_count()));
    let mut ws: Vec<usize> = (0..h.vertex_count()).collect();
    ws.shuffle(&mut it.rng);
    let receivers: Vec<String> = ws[..m].iter().map(|&w| h.vertex(w).id.clone()).collect();
    let assignment = random_assignment(it, &g, &v, &receivers)?;
    let a0 = g.condition(vi).family_strength();
    let weights: Vec<f64> = (0..m).map(|_| it.rng.gen_range(0.1..1.0)).collect();
    let total_w: f64 = weights.iter().sum();
    let mut distribution = Vec::with_capacity(m);
    let mut given = 0.0;
    for (j, w) in receivers.iter().enumerate() {
        let own = h.condition(h.require_vertex(w)?).family_strength();
        let share = if j + 1 == m { a0 - given } else { a0 * weights[j] / total_w };
        given += share;
        distribution.push((w.clone(), VertexCondition::delta(own + share)));
    }
    let verdicts = check_delta_insertion(ctx, &g, &v, &h, &assignment, &distribution)?;
    Ok(Outcome { graph: g, verdicts })
}

fn run_edge_lengthening(ctx: &CheckContext, it: &mut Instance) -> Result<Outcome, CheckError> {
    let g = it.graph(&it.params(Family::Mixed))?;
    let e = it.edge(&g);
    let t = it.rng.gen_range(1.2..3.0);
    let verdicts = check_edge_lengthening(ctx, &g, &e, t)?;
    Ok(Outcome { graph: g, verdicts })
}

fn run_antistandard_insertion(ctx: &CheckContext, it: &mut Instance) -> Result<Outcome, CheckError> {
    let g = it.graph(&it.params(Family::DeltaPrime))?;
    let mut hp = it.params(Family::AntiStandard).min_vertices(2);
    hp.edges = (1, 3);
    let h = it.graph(&hp)?;
    let candidates: Vec<usize> = (0..g.vertex_count()).filter(|&i| g.degree(i) >= 2).collect();
    let v = g.vertex(*candidates.choose(&mut it.rng).expect("a connected graph with two edges has a vertex of degree two")).id.clone();
    let (w1, w2) = it.two_vertices(&h);
    let assignment = random_assignment(it, &g, &v, &[w1, w2])?;
    let verdicts = check_antistandard_insertion(ctx, &g, &v, &h, &assignment)?;
    Ok(Outcome { graph: g, verdicts })
}

fn run_rank_one_chains(ctx: &CheckContext, it: &mut Instance) -> Result<Outcome, CheckError> {
    let mut g = it.graph(&it.params(Family::Mixed))?;
    let v = if it.index % 2 == 0 {
        it.vertex(&g)
    } else {
        let pendant = g.pendant_vertices();
        match pendant.choose(&mut it.rng) {
            Some(&p) => g.vertex(p).id.clone(),
            None => {
                let at = it.vertex(&g);
                let len = it.length();
                g = attach_pendant_edge(&g, &at, len, VertexCondition::Neumann)?;
                g.vertex(g.vertex_count() - 1).id.clone()
            }
        }
    };
    let mut verdicts = check_rank_one_chains(ctx, &g, &v)?;
    verdicts.extend(check_neumann_antistandard_all(ctx, &g)?);
    Ok(Outcome { graph: g, verdicts })
}

fn run_delta_strength_change(ctx: &CheckContext, it: &mut Instance) -> Result<Outcome, CheckError> {
    let g = it.graph(&it.params(Family::Delta))?;
    let v = it.vertex(&g);
    let b = it.strength(Family::Delta);
    let mut verdicts = check_delta_strength_change(ctx, &g, &v, b)?;
    verdicts.extend(check_dirichlet_all(ctx, &g)?);
    Ok(Outcome { graph: g, verdicts })
}

/// Grid points per counting-sandwich instance.
pub const COUNTING_GRID_POINTS: usize = 24;

fn run_counting_sandwich(ctx: &CheckContext, it: &mut Instance) -> Result<Outcome, CheckError> {
    let g = it.graph(&it.params(Family::AntiStandard))?;
    let s = ctx.spectrum(&g, ctx.k_max)?;
    let top = *s.eigenvalues.last().expect("k_max >= 1");
    let verdicts = check_counting_sandwich(ctx, &g, &counting_grid(top, COUNTING_GRID_POINTS))?;
    Ok(Outcome { graph: g, verdicts })
}

fn bound_check(ctx: &CheckContext, g: MetricGraph, prefixes: &[&str]) -> Result<Outcome, CheckError> {
    let verdicts = check_bounds_selected(ctx, &g, prefixes)?;
    Ok(Outcome { graph: g, verdicts })
}

fn run_standard_upper(ctx: &CheckContext, it: &mut Instance) -> Result<Outcome, CheckError> {
    let g = it.graph(&it.params(Family::Standard))?;
    bound_check(ctx, g, &[bounds::STANDARD_UPPER])
}

fn run_delta_bounds(ctx: &CheckContext, it: &mut Instance) -> Result<Outcome, CheckError> {
    let g = match it.index % 3 {
        0 => it.graph(&it.params(Family::Delta).sign(Sign::Positive))?,
        1 => it.graph(&it.params(Family::Delta).sign(Sign::Negative))?,
        _ => {
            let g = it.graph(&it.params(Family::Delta))?;
            let n = g.vertex_count();
            let rest: f64 = (0..n - 1).map(|i| g.condition(i).family_strength()).sum();
            g.with_condition(n - 1, VertexCondition::delta(-rest))?
        }
    };
    bound_check(ctx, g, &[bounds::DELTA_LOWER, bounds::DELTA_UPPER])
}

fn run_dirichlet_standard_upper(ctx: &CheckContext, it: &mut Instance) -> Result<Outcome, CheckError> {
    let mut g = it.graph(&it.params(Family::Standard))?;
    for _ in 0..it.rng.gen_range(1..=3) {
        let at = it.vertex(&g);
        let len = it.length();
        g = attach_pendant_edge(&g, &at, len, VertexCondition::Dirichlet)?;
    }
    for i in 0..g.vertex_count() {
        let c = if g.degree(i) == 1 {
            VertexCondition::Dirichlet
        } else {
            VertexCondition::Standard
        };
        g = g.with_condition(i, c)?;
    }
    bound_check(ctx, g, &[bounds::DIRICHLET_STANDARD_UPPER])
}

fn run_antistandard_counting(ctx: &CheckContext, it: &mut Instance) -> Result<Outcome, CheckError> {
    let g = it.graph(&it.params(Family::AntiStandard))?;
    bound_check(ctx, g, &[bounds::ANTI_COUNTING_LOWER, bounds::ANTI_COUNTING_UPPER])
}

fn run_antistandard_neumann(ctx: &CheckContext, it: &mut Instance) -> Result<Outcome, CheckError> {
    let g = it.graph(&it.params(Family::AntiStandard))?;
    bound_check(ctx, g, &[bounds::ANTI_NEUMANN_LOWER, bounds::ANTI_NEUMANN_UPPER])
}

fn run_deltaprime_negative(ctx: &CheckContext, it: &mut Instance) -> Result<Outcome, CheckError> {
    let g = it.graph(&it.params(Family::DeltaPrime).sign(Sign::Negative))?;
    bound_check(ctx, g, &[bounds::DELTAPRIME_NEGATIVE_LOWER])
}

fn run_deltaprime_star(ctx: &CheckContext, it: &mut Instance) -> Result<Outcome, CheckError> {
    let g = it.graph(&it.params(Family::DeltaPrime))?;
    bound_check(ctx, g, &[bounds::DELTAPRIME_STAR_LOWER])
}

fn run_lambda1(ctx: &CheckContext, it: &mut Instance) -> Result<Outcome, CheckError> {
    let g = it.graph(&it.params(Family::DeltaPrime))?;
    bound_check(ctx, g, &["lambda1_"])
}

fn run_lambda1_nonzero(ctx: &CheckContext, it: &mut Instance) -> Result<Outcome, CheckError> {
    let g = it.graph(&it.params(Family::DeltaPrime).min_vertices(2))?;
    let v = it.vertex(&g);
    let g = set(&g, &v, VertexCondition::AntiStandard)?;
    let verdicts = check_lambda1_nonzero_restriction(ctx, &g)?;
    Ok(Outcome { graph: g, verdicts })
}

fn run_tree_bounds(ctx: &CheckContext, it: &mut Instance) -> Result<Outcome, CheckError> {
    let family = if it.index % 2 == 0 {
        Family::Standard
    } else {
        Family::AntiStandard
    };
    let g = it.graph(&it.params(family).tree())?;
    bound_check(ctx, g, &["tree_"])
}

fn run_tree_relation(ctx: &CheckContext, it: &mut Instance) -> Result<Outcome, CheckError> {
    let g = it.graph(&it.params(Family::Standard).tree())?;
    let verdicts = check_tree_relation(ctx, &g)?;
    Ok(Outcome { graph: g, verdicts })
}

fn run_bipartite_relation(ctx: &CheckContext, it: &mut Instance) -> Result<Outcome, CheckError> {
    let g = it.graph(&it.params(Family::Standard))?;
    let verdicts = check_bipartite_relations(ctx, &g)?;
    Ok(Outcome { graph: g, verdicts })
}

fn run_pendant_diameter(_: &CheckContext, it: &mut Instance) -> Result<Outcome, CheckError> {
    let g = it.graph(&it.params(Family::Standard).tree())?;
    let verdicts = vec![check_pendant_diameter(&g)?];
    Ok(Outcome { graph: g, verdicts })
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// Seed of the generator for one instance of one check.
fn instance_rng(check: &str, seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ fnv1a(check));
    rng.set_stream(1);
    rng
}

fn run_instance(
    runner: Runner,
    check: &str,
    ctx: &CheckContext,
    index: usize,
    seed: u64,
    ranges: &SuiteRanges,
) -> (InstanceReport, Option<GraphDocument>) {
    let mut it = Instance {
        index,
        rng: instance_rng(check, seed),
        ranges: ranges.clone(),
    };
    match runner(ctx, &mut it) {
        Ok(o) => (
            InstanceReport {
                index,
                seed,
                elements_per_edge: ctx.elements_per_edge,
                retried: false,
                note: None,
                verdicts: o.verdicts,
            },
            Some(o.graph.to_document()),
        ),
        Err(e) => (
            InstanceReport {
                index,
                seed,
                elements_per_edge: ctx.elements_per_edge,
                retried: false,
                note: Some(e.to_string()),
                verdicts: Vec::new(),
            },
            None,
        ),
    }
}

fn check_context(config: &SuiteConfig, id: &str) -> (CheckContext, usize) {
    let o = config.overrides.get(id).cloned().unwrap_or_default();
    let mut ctx = CheckContext::new(
        o.elements_per_edge.unwrap_or(config.elements_per_edge),
        o.k_max.unwrap_or(config.k_max),
    );
    ctx.options.fault = config.fault;
    (ctx, o.instances.unwrap_or(config.instances))
}

/// Runs one instance of `check` with seed `seed`, retrying once on the
/// doubled mesh when it is inconclusive and `retry` is set.
pub fn run_check(
    check: &str,
    ctx: &CheckContext,
    index: usize,
    seed: u64,
    ranges: &SuiteRanges,
    retry: bool,
) -> Result<(InstanceReport, Option<GraphDocument>), SuiteError> {
    let runner = CHECKS
        .iter()
        .find(|(id, _)| *id == check)
        .map(|(_, r)| *r)
        .ok_or_else(|| SuiteError::ConfigInvalid(format!("unknown check '{check}'")))?;
    let first = run_instance(runner, check, ctx, index, seed, ranges);
    if retry && first.0.has(Status::Inconclusive) && !first.0.has(Status::Fail) {
        let (mut again, graph) = run_instance(runner, check, &ctx.doubled(), index, seed, ranges);
        again.retried = true;
        return Ok((again, graph));
    }
    Ok(first)
}

fn normalized_margin(v: &Verdict) -> f64 {
    if v.margin.is_nan() {
        return 0.0;
    }
    if v.error_budget > 0.0 {
        v.margin / v.error_budget
    } else if v.margin >= 0.0 {
        f64::INFINITY
    } else {
        f64::NEG_INFINITY
    }
}

fn summarize(id: &str, config: &SuiteConfig, k_max: usize, rows: Vec<(InstanceReport, Option<GraphDocument>)>) -> CheckReport {
    let mut counts = StatusCounts::default();
    let mut worst: Option<(f64, WorstCase)> = None;
    let mut inconclusive_instances = 0;
    let mut failed_instances = Vec::new();
    let mut verdict_total = 0;
    for (inst, graph) in &rows {
        if inst.note.is_some() {
            counts.errors += 1;
        }
        if inst.has(Status::Fail) {
            failed_instances.push(inst.index);
        } else if inst.has(Status::Inconclusive) {
            inconclusive_instances += 1;
        }
        for v in &inst.verdicts {
            verdict_total += 1;
            match v.status {
                Status::Pass => counts.pass += 1,
                Status::Fail => counts.fail += 1,
                Status::Inconclusive => counts.inconclusive += 1,
            }
            let m = normalized_margin(v);
            if let Some(g) = graph {
                if worst.as_ref().map_or(true, |(w, _)| m < *w) {
                    worst = Some((
                        m,
                        WorstCase {
                            index: inst.index,
                            seed: inst.seed,
                            verdict: v.clone(),
                            graph: g.clone(),
                        },
                    ));
                }
            }
        }
    }
    let n = rows.len();
    CheckReport {
        check_id: id.to_string(),
        instances: n,
        seed: config.seed,
        k_max,
        counts,
        inconclusive_rate: if verdict_total == 0 {
            0.0
        } else {
            counts.inconclusive as f64 / verdict_total as f64
        },
        inconclusive_instance_rate: if n == 0 { 0.0 } else { inconclusive_instances as f64 / n as f64 },
        failed_instances,
        worst_case: worst.map(|(_, w)| w),
        results: rows.into_iter().map(|(r, _)| r).collect(),
    }
}

/// Runs every selected check on its instances. Instances run in parallel and
/// are merged by index, so the report depends only on the configuration.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport, SuiteError> {
    config.validate()?;
    let selected = config.selected();
    let jobs: Vec<(usize, usize)> = selected
        .iter()
        .enumerate()
        .flat_map(|(c, id)| (0..check_context(config, id).1).map(move |i| (c, i)))
        .collect();
    let results: Vec<(usize, (InstanceReport, Option<GraphDocument>))> = jobs
        .par_iter()
        .map(|&(c, i)| {
            let id = selected[c];
            let (ctx, _) = check_context(config, id);
            let seed = config.seed.wrapping_add(i as u64);
            let row = run_check(id, &ctx, i, seed, &config.ranges, config.retry).expect("selected ids are known");
            (c, row)
        })
        .collect();
    let mut grouped: Vec<Vec<(InstanceReport, Option<GraphDocument>)>> = vec![Vec::new(); selected.len()];
    for (c, row) in results {
        grouped[c].push(row);
    }
    let mut totals = StatusCounts::default();
    let reports: Vec<CheckReport> = selected
        .iter()
        .zip(grouped)
        .map(|(id, rows)| {
            let (ctx, _) = check_context(config, id);
            let r = summarize(id, config, ctx.k_max, rows);
            totals.add(&r.counts);
            r
        })
        .collect();
    Ok(SuiteReport {
        config: config.clone(),
        totals,
        reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_defaults_and_validation() {
        let c = SuiteConfig::from_json_str("{}").unwrap();
        assert_eq!(c, SuiteConfig::default());
        assert!(SuiteConfig::from_json_str(r#"{"instances": 0}"#).is_err());
        assert!(SuiteConfig::from_json_str(r#"{"checks": ["nope"]}"#).is_err());
        assert!(SuiteConfig::from_json_str(r#"{"bogus": 1}"#).is_err());
        assert!(SuiteConfig::from_json_str(r#"{"ranges": {"edges": [3, 2]}}"#).is_err());
        let c = SuiteConfig::from_json_str(r#"{"checks": ["graph_scaling"], "overrides": {"graph_scaling": {"instances": 3}}}"#)
            .unwrap();
        assert_eq!(check_context(&c, "graph_scaling").1, 3);
    }

    #[test]
    fn instance_seeds_differ_by_check() {
        let a: u64 = instance_rng("flower", 3).gen();
        let b: u64 = instance_rng("flower", 3).gen();
        let c: u64 = instance_rng("delta_gluing", 3).gen();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn ids_unique() {
        let ids = check_ids();
        let set: std::collections::BTreeSet<_> = ids.iter().collect();
        assert_eq!(set.len(), ids.len());
    }
}
