//! Bounds and exact spectral relations checked against solver spectra.

use crate::bounds::{evaluate_bounds, lambda1_bounds_for, BoundResult, Side};
use crate::graph::{MetricGraph, VertexCondition};
use crate::spectrum::{Mesh, Spectrum};

use super::{check_eq, check_le, check_le_exact, label, CheckContext, CheckError, Estimate, Verdict};

/// Slack of the pendant-diameter comparison.
pub const DIAMETER_SLACK: f64 = 1e-12;

/// One verdict per applicable bound with index within the spectrum.
pub fn check_bound_results(bounds: &[BoundResult], s: &Spectrum) -> Vec<Verdict> {
    bounds
        .iter()
        .filter(|b| b.applicable && b.k >= 1 && b.k <= s.eigenvalues.len())
        .map(|b| {
            let lam = Estimate::eigenvalue(s, b.k);
            let name = label("G", b.k);
            let mut v = match b.side {
                Side::Lower => check_le(format!("{}: {:.17e} <= {name}", b.bound_id, b.value), Estimate::exact(b.value), lam),
                Side::Upper => check_le(format!("{}: {name} <= {:.17e}", b.bound_id, b.value), lam, Estimate::exact(b.value)),
                Side::Equality => check_eq(format!("{}: {name} == {:.17e}", b.bound_id, b.value), lam, Estimate::exact(b.value)),
            };
            if let Some(r) = &b.reason {
                v.relation = format!("{} ({r})", v.relation);
            }
            v
        })
        .collect()
}

/// Every applicable bound for `g` with `k <= k_max`, against the spectrum of `g`.
pub fn check_bounds(ctx: &CheckContext, g: &MetricGraph) -> Result<Vec<Verdict>, CheckError> {
    let bounds = evaluate_bounds(g, ctx.k_max)?;
    let s = ctx.spectrum(g, ctx.k_max)?;
    Ok(check_bound_results(&bounds, &s))
}

/// The bounds whose ids start with one of `prefixes`.
pub fn check_bounds_selected(ctx: &CheckContext, g: &MetricGraph, prefixes: &[&str]) -> Result<Vec<Verdict>, CheckError> {
    let bounds: Vec<BoundResult> = evaluate_bounds(g, ctx.k_max)?
        .into_iter()
        .filter(|b| prefixes.iter().any(|p| b.bound_id.starts_with(p)))
        .collect();
    let s = ctx.spectrum(g, ctx.k_max)?;
    Ok(check_bound_results(&bounds, &s))
}

/// λ₁ test-function bounds with anti-standard vertices allowed, the vertex
/// sums running over nonzero strengths only.
pub fn check_lambda1_nonzero_restriction(ctx: &CheckContext, g: &MetricGraph) -> Result<Vec<Verdict>, CheckError> {
    let bounds = lambda1_bounds_for(g, true)?;
    let s = ctx.spectrum(g, 1)?;
    Ok(check_bound_results(&bounds, &s))
}

fn relation_verdicts(ctx: &CheckContext, b: &MetricGraph, beta: usize) -> Result<Vec<Verdict>, CheckError> {
    let k = ctx.k_max;
    let anti = ctx.spectrum(&b.with_all_conditions(VertexCondition::AntiStandard)?, k + beta)?;
    let standard = ctx.spectrum(&b.with_all_conditions(VertexCondition::Standard)?, k + 1)?;
    Ok((1..=k)
        .map(|j| {
            check_eq(
                format!("{} == {}", label("anti", j + beta), label("standard", j + 1)),
                Estimate::eigenvalue(&anti, j + beta),
                Estimate::eigenvalue(&standard, j + 1),
            )
        })
        .collect())
}

/// `λ_k(Tᵃ) = λ_{k+1}(Tˢ)` on a tree.
pub fn check_tree_relation(ctx: &CheckContext, t: &MetricGraph) -> Result<Vec<Verdict>, CheckError> {
    if !t.is_tree() {
        return Err(CheckError::Graph(crate::graph::GraphError::NotATree));
    }
    relation_verdicts(ctx, t, 0)
}

/// `λ_{k+β}(Bᵃ) = λ_{k+1}(Bˢ)`; a graph that is not bipartite is first
/// subdivided at the midpoint of every edge.
pub fn check_bipartite_relations(ctx: &CheckContext, g: &MetricGraph) -> Result<Vec<Verdict>, CheckError> {
    let b = if g.is_bipartite() { g.clone() } else { g.subdivide_all_edges()? };
    let beta = b.betti_number()?;
    relation_verdicts(ctx, &b, beta)
}

/// Same as [`check_bipartite_relations`] through the pair helper of the bounds module.
pub fn bipartite_pairs(g: &MetricGraph, elements_per_edge: usize, k_max: usize) -> Result<Vec<crate::bounds::RelationPair>, CheckError> {
    let b = if g.is_bipartite() { g.clone() } else { g.subdivide_all_edges()? };
    Ok(crate::bounds::bipartite_relation_pairs(&b, &Mesh::uniform(elements_per_edge)?, k_max)?)
}

/// `2L/|E_p| <= d(T)` on a tree, with slack `1e-12`.
pub fn check_pendant_diameter(t: &MetricGraph) -> Result<Verdict, CheckError> {
    let d = t.tree_diameter()?;
    let p = t.pendant_edge_count();
    let lhs = 2.0 * t.total_length() / p as f64;
    Ok(check_le_exact("2L/|E_p| <= diameter", lhs, d, DIAMETER_SLACK))
}
