//! Interlacing checks for vertex-condition changes and surgery.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::graph::{ConditionFamily, MetricGraph, VertexCondition};
use crate::oracle::dirichlet_decoupled_count;
use crate::spectrum::{counting_function, natural_scale, Spectrum};
use crate::surgery::{
    attach_pendant_edge, attach_pendant_graph, flowerize, glue_vertices, insert_graph_at_vertex, scale_edge,
    scale_graph, EndpointRef,
};

use super::{
    check_chain, check_eq_within, check_le_exact, compare, first_nonnegative, label, surely_le, CheckContext,
    CheckError, Estimate, Status, Verdict,
};

/// Strength of a δ′-family vertex; anti-standard counts as 0.
fn deltaprime_strength(g: &MetricGraph, v: &str) -> Result<f64, CheckError> {
    let i = g.require_vertex(v)?;
    match g.condition(i) {
        VertexCondition::DeltaPrime(a) => Ok(a),
        VertexCondition::AntiStandard => Ok(0.0),
        _ => Err(CheckError::NotDeltaPrime(v.to_string())),
    }
}

fn delta_strength(g: &MetricGraph, v: &str) -> Result<f64, CheckError> {
    let i = g.require_vertex(v)?;
    match g.condition(i) {
        VertexCondition::Delta(a) => Ok(a),
        VertexCondition::Standard => Ok(0.0),
        _ => Err(CheckError::NotDelta(v.to_string())),
    }
}

/// Verdicts of a chain `λ_k(a) <= λ_k(b) <= ...` for `k = 1..=k_max`;
/// each entry is `(name, spectrum, index shift)`.
fn chains(k_max: usize, tag: &str, links: &[(&str, &Spectrum, usize)]) -> Vec<Verdict> {
    let mut out = Vec::new();
    for k in 1..=k_max {
        let labels: Vec<String> = links.iter().map(|(n, _, d)| label(n, k + d)).collect();
        let values: Vec<Estimate> = links.iter().map(|(_, s, d)| Estimate::eigenvalue(s, k + d)).collect();
        for mut v in check_chain(&labels, &values) {
            if !tag.is_empty() {
                v.relation = format!("{tag}: {}", v.relation);
            }
            out.push(v);
        }
    }
    out
}

fn inconclusive(relation: impl Into<String>) -> Verdict {
    Verdict {
        relation: relation.into(),
        lhs: f64::NAN,
        rhs: f64::NAN,
        margin: f64::NAN,
        error_budget: f64::NAN,
        status: Status::Inconclusive,
    }
}

/// Changing the δ′ strength at `v` to `new_strength`; `Γ₀` carries the
/// anti-standard condition at `v`.
///
/// Cases `0 < α′ < α̃′`, `α′ < α̃′ < 0` and `α′ < 0 < α̃′` are taken as stated;
/// the remaining orderings are the same statements with the two graphs swapped.
pub fn check_interlacing_strength(
    ctx: &CheckContext,
    g: &MetricGraph,
    v: &str,
    new_strength: f64,
) -> Result<Vec<Verdict>, CheckError> {
    let i = g.require_vertex(v)?;
    let a = match g.condition(i) {
        VertexCondition::DeltaPrime(a) => a,
        _ => return Err(CheckError::NotDeltaPrime(v.to_string())),
    };
    if new_strength == 0.0 || !new_strength.is_finite() {
        return Err(CheckError::Precondition("the new strength must be finite and nonzero".into()));
    }
    let changed = g.with_condition(i, VertexCondition::DeltaPrime(new_strength))?;
    let anti = g.with_condition(i, VertexCondition::AntiStandard)?;
    let k = ctx.k_max;
    let s = ctx.spectrum(g, k + 1)?;
    let st = ctx.spectrum(&changed, k + 1)?;
    let s0 = ctx.spectrum(&anti, k)?;
    let same_sign = a * new_strength > 0.0;
    let (tag, low, high) = match (same_sign, a <= new_strength) {
        (true, true) => ("case 1", ("changed", &st), ("G", &s)),
        (true, false) => ("case 1, swapped", ("G", &s), ("changed", &st)),
        (false, true) => ("case 2", ("G", &s), ("changed", &st)),
        (false, false) => ("case 2, swapped", ("changed", &st), ("G", &s)),
    };
    Ok(chains(
        k,
        tag,
        &[(low.0, low.1, 0), (high.0, high.1, 0), ("anti", &s0, 0), (low.0, low.1, 1)],
    ))
}

/// Which of the six sign patterns a δ′ gluing falls in, numbered as stated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingCase(pub u8);

impl GluingCase {
    pub fn classify(a1: f64, a2: f64) -> Self {
        let sum = a1 + a2;
        let zero_sum = sum.abs() <= 1e-12 * (a1.abs() + a2.abs());
        GluingCase(if a1 * a2 == 0.0 {
            6
        } else if a1 > 0.0 && a2 > 0.0 {
            1
        } else if a1 < 0.0 && a2 < 0.0 {
            2
        } else if zero_sum {
            5
        } else if sum > 0.0 {
            3
        } else {
            4
        })
    }

    /// Whether gluing is claimed to lower the eigenvalues.
    pub fn lowers(self) -> bool {
        matches!(self.0, 1 | 4 | 6)
    }
}

/// Gluing two δ′-family vertices; compares `λ_k(glued)` with `λ_k(G)`.
pub fn check_gluing_cases(
    ctx: &CheckContext,
    g: &MetricGraph,
    v1: &str,
    v2: &str,
) -> Result<(GluingCase, Vec<Verdict>), CheckError> {
    let case = GluingCase::classify(deltaprime_strength(g, v1)?, deltaprime_strength(g, v2)?);
    let glued = glue_vertices(g, &[v1, v2])?;
    let k = ctx.k_max;
    let s = ctx.spectrum(g, k)?;
    let sg = ctx.spectrum(&glued, k)?;
    let tag = format!("case {}", case.0);
    let links: [(&str, &Spectrum, usize); 2] = if case.lowers() {
        [("glued", &sg, 0), ("G", &s, 0)]
    } else {
        [("G", &s, 0), ("glued", &sg, 0)]
    };
    Ok((case, chains(k, &tag, &links)))
}

/// Gluing two δ-family vertices: `λ_k(G) <= λ_k(glued) <= λ_{k+1}(G)`.
pub fn check_delta_gluing(ctx: &CheckContext, g: &MetricGraph, v1: &str, v2: &str) -> Result<Vec<Verdict>, CheckError> {
    delta_strength(g, v1)?;
    delta_strength(g, v2)?;
    let glued = glue_vertices(g, &[v1, v2])?;
    let k = ctx.k_max;
    let s = ctx.spectrum(g, k + 1)?;
    let sg = ctx.spectrum(&glued, k)?;
    Ok(chains(k, "", &[("G", &s, 0), ("glued", &sg, 0), ("G", &s, 1)]))
}

/// Comparison with the flower obtained by gluing all vertices.
///
/// All-δ graphs: `λ_{k−|V|+1}(flower) <= λ_k(G) <= λ_k(flower) <= λ_{k+|V|−1}(G)`.
/// δ′-graphs with strengths of one sign: `λ_k(flower) <= λ_k(G)` for positive
/// strengths, reversed for negative ones.
pub fn check_flower(ctx: &CheckContext, g: &MetricGraph) -> Result<Vec<Verdict>, CheckError> {
    let flower = flowerize(g)?;
    let k = ctx.k_max;
    let n = g.vertex_count();
    let family = g.common_family();
    let strengths: Vec<f64> = g.vertices().iter().map(|v| v.condition.family_strength()).collect();
    match family {
        Some(ConditionFamily::Delta) => {
            let s = ctx.spectrum(g, k + n - 1)?;
            let sf = ctx.spectrum(&flower, k)?;
            let mut out = Vec::new();
            for j in 1..=k {
                if j >= n {
                    out.push(compare(("flower", &sf, j + 1 - n), ("G", &s, j)));
                }
                out.push(compare(("G", &s, j), ("flower", &sf, j)));
                out.push(compare(("flower", &sf, j), ("G", &s, j + n - 1)));
            }
            Ok(out)
        }
        Some(ConditionFamily::DeltaPrime) if g.vertices().iter().all(|v| v.condition.strength().is_some()) => {
            let s = ctx.spectrum(g, k)?;
            let sf = ctx.spectrum(&flower, k)?;
            if strengths.iter().all(|&a| a > 0.0) {
                Ok(chains(k, "positive strengths", &[("flower", &sf, 0), ("G", &s, 0)]))
            } else if strengths.iter().all(|&a| a < 0.0) {
                Ok(chains(k, "negative strengths", &[("G", &s, 0), ("flower", &sf, 0)]))
            } else {
                Err(CheckError::Precondition("delta-prime strengths must share one sign".into()))
            }
        }
        _ => Err(CheckError::Precondition(
            "flower comparison needs an all-delta graph or a delta-prime graph of one sign".into(),
        )),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ScaleMode {
    /// Scale the named edge only.
    Edge(String),
    /// Scale every edge, and the strengths with it.
    Graph,
}

/// Relative rounding budget of the scaling identity.
pub const SCALING_TOLERANCE: f64 = 1e-10;

/// Edge mode: `λ_k(scaled) <= λ_k(G)` for `t > 1`, reversed for `t < 1`.
/// Graph mode: `λ_k(scaled)·t² = λ_k(G)` up to rounding,
/// budget `1e-10·max(|λ_k|, (π/L)²)`.
pub fn check_scaling(ctx: &CheckContext, g: &MetricGraph, t: f64, mode: &ScaleMode) -> Result<Vec<Verdict>, CheckError> {
    let k = ctx.k_max;
    match mode {
        ScaleMode::Edge(e) => {
            let scaled = scale_edge(g, e, t)?;
            let s = ctx.spectrum(g, k)?;
            let ss = ctx.spectrum(&scaled, k)?;
            if t >= 1.0 {
                Ok(chains(k, "t > 1", &[("scaled", &ss, 0), ("G", &s, 0)]))
            } else {
                Ok(chains(k, "t < 1", &[("G", &s, 0), ("scaled", &ss, 0)]))
            }
        }
        ScaleMode::Graph => {
            let scaled = scale_graph(g, t)?;
            let s = ctx.spectrum(g, k)?;
            let ss = ctx.spectrum(&scaled, k)?;
            let scale = natural_scale(g);
            Ok((1..=k)
                .map(|j| {
                    let lhs = ss.eigenvalues[j - 1] * t * t;
                    let rhs = s.eigenvalues[j - 1];
                    check_eq_within(
                        format!("t^2 * {} == {}", label("scaled", j), label("G", j)),
                        lhs,
                        rhs,
                        SCALING_TOLERANCE * rhs.abs().max(scale),
                    )
                })
                .collect())
        }
    }
}

/// Which of the six sign patterns a pendant attachment falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PendantCase(pub u8);

impl PendantCase {
    pub fn classify(a1: f64, a2: f64) -> Self {
        let sum = a1 + a2;
        let zero_sum = sum.abs() <= 1e-12 * (a1.abs() + a2.abs());
        PendantCase(if a1 > 0.0 && a2 > 0.0 {
            1
        } else if a1 * a2 == 0.0 {
            2
        } else if a1 < 0.0 && a2 < 0.0 {
            4
        } else if zero_sum {
            6
        } else if sum < 0.0 {
            3
        } else {
            5
        })
    }

    /// Whether `λ_{k+r}(attached) <= λ_k(G)` is claimed; otherwise `>=`.
    pub fn lowers(self) -> bool {
        self.0 <= 3
    }
}

/// Attaching `h` at `w` to `g` at `v`, both δ′-family vertices.
///
/// For each `r`, `k₀` is the smallest index with `λ_r(h) <= λ_{k₀}(G)` holding
/// beyond the error budget, and the stated comparison of `λ_{k+r}(attached)`
/// with `λ_k(G)` is checked for `k₀ <= k <= k_max − r`. Without any such pair a
/// single Inconclusive verdict is returned.
pub fn check_pendant_cases(
    ctx: &CheckContext,
    g: &MetricGraph,
    v: &str,
    h: &MetricGraph,
    w: &str,
) -> Result<(PendantCase, Vec<Verdict>), CheckError> {
    let case = PendantCase::classify(deltaprime_strength(g, v)?, deltaprime_strength(h, w)?);
    let attached = attach_pendant_graph(g, v, h, w)?;
    let k = ctx.k_max;
    let s = ctx.spectrum(g, k)?;
    let sh = ctx.spectrum(h, k)?;
    let sa = ctx.spectrum(&attached, k)?;
    let mut out = Vec::new();
    for r in 1..k {
        let hr = Estimate::eigenvalue(&sh, r);
        let Some(k0) = (1..=k - r).find(|&j| surely_le(hr, Estimate::eigenvalue(&s, j))) else {
            continue;
        };
        let tag = format!("case {}, r = {r}, k0 = {k0}", case.0);
        for j in k0..=k - r {
            let mut v = if case.lowers() {
                compare(("attached", &sa, j + r), ("G", &s, j))
            } else {
                compare(("G", &s, j), ("attached", &sa, j + r))
            };
            v.relation = format!("{tag}: {}", v.relation);
            out.push(v);
        }
    }
    if out.is_empty() {
        out.push(inconclusive(format!("case {}: no (r, k0) pair within k <= {k}", case.0)));
    }
    Ok((case, out))
}

/// Attaching a pendant edge at a δ′-family vertex: `λ_k(attached) <= λ_k(G)`.
pub fn check_pendant_edge(
    ctx: &CheckContext,
    g: &MetricGraph,
    v: &str,
    length: f64,
    tip: VertexCondition,
) -> Result<Vec<Verdict>, CheckError> {
    deltaprime_strength(g, v)?;
    let attached = attach_pendant_edge(g, v, length, tip)?;
    let k = ctx.k_max;
    let s = ctx.spectrum(g, k)?;
    let sa = ctx.spectrum(&attached, k)?;
    Ok(chains(k, "", &[("attached", &sa, 0), ("G", &s, 0)]))
}

fn receiving_count(assignment: &[(EndpointRef, String)]) -> usize {
    assignment.iter().map(|(_, w)| w.as_str()).collect::<BTreeSet<_>>().len()
}

/// Inserting `h` at the δ-family vertex `v`, attached to `m` vertices of `h`.
///
/// For each `k`, `r` is the largest index `>= m` with `λ_r(h) <= λ_k(G)` beyond
/// the error budget and `k + r − m <= k_max`; the check is
/// `λ_{k+r−m}(inserted) <= λ_k(G)`.
pub fn check_delta_insertion(
    ctx: &CheckContext,
    g: &MetricGraph,
    v: &str,
    h: &MetricGraph,
    assignment: &[(EndpointRef, String)],
    distribution: &[(String, VertexCondition)],
) -> Result<Vec<Verdict>, CheckError> {
    delta_strength(g, v)?;
    let inserted = insert_graph_at_vertex(g, v, h, assignment, distribution)?;
    let m = receiving_count(assignment);
    let k = ctx.k_max;
    let s = ctx.spectrum(g, k)?;
    let sh = ctx.spectrum(h, k + m)?;
    let si = ctx.spectrum(&inserted, k)?;
    let mut out = Vec::new();
    for j in 1..=k {
        let gj = Estimate::eigenvalue(&s, j);
        let best = (m..=k + m - j).rev().find(|&r| surely_le(Estimate::eigenvalue(&sh, r), gj));
        if let Some(r) = best {
            let mut v = compare(("inserted", &si, j + r - m), ("G", &s, j));
            v.relation = format!("m = {m}, r = {r}: {}", v.relation);
            out.push(v);
        }
    }
    if out.is_empty() {
        out.push(inconclusive(format!("no r >= {m} with lambda_r(H) <= lambda_k(G)")));
    }
    Ok(out)
}

/// Lengthening `edge` by `t > 1`: `λ_k(lengthened) <= λ_k(G)` for `k >= k₀`,
/// where `k₀` is the first index with `λ_{k₀}(G) >= 0`.
pub fn check_edge_lengthening(ctx: &CheckContext, g: &MetricGraph, edge: &str, t: f64) -> Result<Vec<Verdict>, CheckError> {
    if !(t > 1.0) {
        return Err(CheckError::Precondition(format!("lengthening factor {t} is not above 1")));
    }
    let longer = scale_edge(g, edge, t)?;
    let k = ctx.k_max;
    let s = ctx.spectrum(g, k)?;
    let sl = ctx.spectrum(&longer, k)?;
    let Some(k0) = first_nonnegative(&s) else {
        return Ok(vec![inconclusive(format!("no nonnegative eigenvalue within k <= {k}"))]);
    };
    Ok((k0..=k)
        .map(|j| {
            let mut v = compare(("lengthened", &sl, j), ("G", &s, j));
            v.relation = format!("k0 = {k0}: {}", v.relation);
            v
        })
        .collect())
}

/// Strengths for the two receiving vertices of an anti-standard insertion:
/// halves of a negative `α′₀`, or `(2α′₀, −α′₀)` for a positive one. Both
/// splits are gluing patterns whose reversal lowers the eigenvalues.
pub fn antistandard_insertion_strengths(a0: f64) -> (f64, f64) {
    if a0 < 0.0 {
        (a0 / 2.0, a0 / 2.0)
    } else {
        (2.0 * a0, -a0)
    }
}

/// Inserting the anti-standard graph `h` at the δ′ vertex `v` through exactly
/// two vertices of `h`: `λ_{k+1}(inserted) <= λ_k(G)` for `k >= k₀`, with `k₀`
/// the first index with `λ_{k₀}(G) >= 0`.
pub fn check_antistandard_insertion(
    ctx: &CheckContext,
    g: &MetricGraph,
    v: &str,
    h: &MetricGraph,
    assignment: &[(EndpointRef, String)],
) -> Result<Vec<Verdict>, CheckError> {
    let i = g.require_vertex(v)?;
    let a0 = match g.condition(i) {
        VertexCondition::DeltaPrime(a) => a,
        _ => return Err(CheckError::NotDeltaPrime(v.to_string())),
    };
    if !h.vertices().iter().all(|w| w.condition == VertexCondition::AntiStandard) {
        return Err(CheckError::Precondition("the inserted graph must be anti-standard".into()));
    }
    let receivers: Vec<String> = assignment
        .iter()
        .map(|(_, w)| w.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if receivers.len() != 2 {
        return Err(CheckError::Precondition(format!(
            "edges must be attached to exactly two vertices, got {}",
            receivers.len()
        )));
    }
    let (b1, b2) = antistandard_insertion_strengths(a0);
    let distribution = vec![
        (receivers[0].clone(), VertexCondition::DeltaPrime(b1)),
        (receivers[1].clone(), VertexCondition::DeltaPrime(b2)),
    ];
    let inserted = insert_graph_at_vertex(g, v, h, assignment, &distribution)?;
    let k = ctx.k_max;
    let s = ctx.spectrum(g, k)?;
    let si = ctx.spectrum(&inserted, k + 1)?;
    let Some(k0) = first_nonnegative(&s) else {
        return Ok(vec![inconclusive(format!("no nonnegative eigenvalue within k <= {k}"))]);
    };
    Ok((k0..=k)
        .map(|j| {
            let mut v = compare(("inserted", &si, j + 1), ("G", &s, j));
            v.relation = format!("k0 = {k0}: {}", v.relation);
            v
        })
        .collect())
}

/// Rank-one chains between condition variants at `v`; the other vertices keep
/// their conditions.
///
/// Always: Neumann vs anti-standard, Neumann vs δ′ for both signs of the
/// strength, and δ′ vs δ with `α₀ = d²/α′₀` for both signs. At a degree-one
/// vertex also Dirichlet vs Neumann, anti-standard and δ′. The δ′ strength is
/// the one at `v` if present, otherwise 1.
pub fn check_rank_one_chains(ctx: &CheckContext, g: &MetricGraph, v: &str) -> Result<Vec<Verdict>, CheckError> {
    let i = g.require_vertex(v)?;
    let d = g.degree(i) as f64;
    let a = match g.condition(i) {
        VertexCondition::DeltaPrime(a) => a.abs(),
        _ => 1.0,
    };
    let k = ctx.k_max;
    let with = |c: VertexCondition| -> Result<Spectrum, CheckError> { ctx.spectrum(&g.with_condition(i, c)?, k + 1) };
    let n = with(VertexCondition::Neumann)?;
    let anti = with(VertexCondition::AntiStandard)?;
    let pos = with(VertexCondition::DeltaPrime(a))?;
    let neg = with(VertexCondition::DeltaPrime(-a))?;
    let dpos = with(VertexCondition::delta(d * d / a))?;
    let dneg = with(VertexCondition::delta(-d * d / a))?;
    let mut out = Vec::new();
    out.extend(chains(k, "neumann/anti", &[("neumann", &n, 0), ("anti", &anti, 0), ("neumann", &n, 1)]));
    out.extend(chains(
        k,
        "neumann/deltaprime+",
        &[("neumann", &n, 0), ("deltaprime+", &pos, 0), ("neumann", &n, 1)],
    ));
    out.extend(chains(
        k,
        "deltaprime-/neumann",
        &[("deltaprime-", &neg, 0), ("neumann", &n, 0), ("deltaprime-", &neg, 1)],
    ));
    out.extend(chains(
        k,
        "deltaprime+/delta",
        &[("deltaprime+", &pos, 0), ("delta", &dpos, 0), ("deltaprime+", &pos, 1)],
    ));
    out.extend(chains(
        k,
        "deltaprime-/delta",
        &[("deltaprime-", &neg, 0), ("delta", &dneg, 0), ("deltaprime-", &neg, 1)],
    ));
    if g.degree(i) == 1 {
        let dir = with(VertexCondition::Dirichlet)?;
        out.extend(chains(
            k,
            "neumann/dirichlet",
            &[("neumann", &n, 0), ("dirichlet", &dir, 0), ("neumann", &n, 1)],
        ));
        out.extend(chains(k, "anti/dirichlet", &[("anti", &anti, 0), ("dirichlet", &dir, 0), ("anti", &anti, 1)]));
        for (name, s) in [("deltaprime+", &pos), ("deltaprime-", &neg)] {
            out.extend(chains(
                k,
                &format!("{name}/dirichlet"),
                &[(name, s, 0), ("dirichlet", &dir, 0), (name, s, 1)],
            ));
        }
    }
    Ok(out)
}

/// All vertices Neumann vs all anti-standard:
/// `λ_k(neumann) <= λ_k(anti) <= λ_{k+|V|}(neumann)`.
pub fn check_neumann_antistandard_all(ctx: &CheckContext, g: &MetricGraph) -> Result<Vec<Verdict>, CheckError> {
    let k = ctx.k_max;
    let nv = g.vertex_count();
    let n = ctx.spectrum(&g.with_all_conditions(VertexCondition::Neumann)?, k + nv)?;
    let a = ctx.spectrum(&g.with_all_conditions(VertexCondition::AntiStandard)?, k)?;
    Ok(chains(k, "all vertices", &[("neumann", &n, 0), ("anti", &a, 0), ("neumann", &n, nv)]))
}

/// Changing the δ strength at `v`: with `α <= α̃`,
/// `λ_k(α) <= λ_k(α̃) <= λ_k(G; v) <= λ_{k+1}(α)`, where `G; v` is Dirichlet at `v`.
pub fn check_delta_strength_change(
    ctx: &CheckContext,
    g: &MetricGraph,
    v: &str,
    new_strength: f64,
) -> Result<Vec<Verdict>, CheckError> {
    let a = delta_strength(g, v)?;
    if !new_strength.is_finite() {
        return Err(CheckError::Precondition("the new strength must be finite".into()));
    }
    let i = g.require_vertex(v)?;
    let changed = g.with_condition(i, VertexCondition::delta(new_strength))?;
    let dir = g.with_condition(i, VertexCondition::Dirichlet)?;
    let k = ctx.k_max;
    let s = ctx.spectrum(g, k + 1)?;
    let sc = ctx.spectrum(&changed, k + 1)?;
    let sd = ctx.spectrum(&dir, k)?;
    let (low, high) = if a <= new_strength {
        (("G", &s), ("changed", &sc))
    } else {
        (("changed", &sc), ("G", &s))
    };
    Ok(chains(
        k,
        "",
        &[(low.0, low.1, 0), (high.0, high.1, 0), ("dirichlet at v", &sd, 0), (low.0, low.1, 1)],
    ))
}

/// All-δ graph vs Dirichlet at every vertex: `λ_k(G) <= λ_k(dirichlet) <= λ_{k+|V|}(G)`.
pub fn check_dirichlet_all(ctx: &CheckContext, g: &MetricGraph) -> Result<Vec<Verdict>, CheckError> {
    if g.common_family() != Some(ConditionFamily::Delta) {
        return Err(CheckError::Precondition("every vertex must carry a delta condition".into()));
    }
    let k = ctx.k_max;
    let nv = g.vertex_count();
    let s = ctx.spectrum(g, k + nv)?;
    let sd = ctx.spectrum(&g.with_all_conditions(VertexCondition::Dirichlet)?, k)?;
    Ok(chains(k, "", &[("G", &s, 0), ("dirichlet", &sd, 0), ("G", &s, nv)]))
}

/// `count` points spread over `(0, λ_top)`, offset so that they avoid simple rational multiples.
pub fn counting_grid(lambda_top: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| lambda_top * (i as f64 + 0.37) / (count as f64 + 0.5))
        .collect()
}

/// Counting-function sandwich for an all-anti-standard graph at the grid points:
/// `[√λ L/π] − |E| + 1 <= N_d(λ) <= N_a(λ) <= N_d(λ) + |V|`, with `N_d` the
/// closed-form count of the Dirichlet-decoupled edges. Points beyond the
/// computed range or within the error budget of an eigenvalue are skipped.
pub fn check_counting_sandwich(ctx: &CheckContext, g: &MetricGraph, grid: &[f64]) -> Result<Vec<Verdict>, CheckError> {
    if !g.vertices().iter().all(|v| v.condition == VertexCondition::AntiStandard) {
        return Err(CheckError::Precondition("every vertex must be anti-standard".into()));
    }
    let s = ctx.spectrum(g, ctx.k_max)?;
    let lengths = g.lengths();
    let l = g.total_length();
    let e = g.edge_count() as f64;
    let nv = g.vertex_count();
    let pi = std::f64::consts::PI;
    let mut out = Vec::new();
    for &lambda in grid {
        let near_computed = s.eigenvalues.iter().zip(&s.error_estimates).any(|(&x, &err)| {
            (x - lambda).abs() <= 10.0 * err + 1e-8 * (1.0 + lambda.abs())
        });
        let near_dirichlet = lengths.iter().any(|&len| {
            let j = (lambda.max(0.0).sqrt() * len / pi).round();
            let x = (j * pi / len).powi(2);
            j > 0.0 && (x - lambda).abs() <= 1e-9 * (1.0 + lambda.abs())
        });
        if near_computed || near_dirichlet {
            log::debug!("counting sandwich: skipping λ = {lambda} near an eigenvalue");
            continue;
        }
        let Ok(na) = counting_function(&s, lambda) else {
            log::debug!("counting sandwich: λ = {lambda} beyond the computed range");
            continue;
        };
        let nd = dirichlet_decoupled_count(&lengths, lambda);
        let lower = (lambda.max(0.0).sqrt() * l / pi).floor() - e + 1.0;
        let tag = format!("lambda = {lambda:.6e}");
        out.push(check_le_exact(format!("{tag}: [sqrt(lambda) L/pi] - |E| + 1 <= N_d"), lower, nd as f64, 0.0));
        out.push(check_le_exact(format!("{tag}: N_d <= N_a"), nd as f64, na as f64, 0.0));
        out.push(check_le_exact(format!("{tag}: N_a <= N_d + |V|"), na as f64, (nd + nv) as f64, 0.0));
    }
    Ok(out)
}
