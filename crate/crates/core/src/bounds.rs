//! Closed-form eigenvalue bounds as plain formulas, plus a wrapper that
//! reads the parameters off a graph and selects the bounds that apply.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::graph::{GraphError, MetricGraph, VertexCondition};
use crate::spectrum::{solve_spectrum, Mesh, SpectrumError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BoundError {
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("a vertex has strength zero and the nonzero-strength restriction was not requested")]
    ZeroStrengthVertexWithoutRemarkPath,
    #[error("every vertex must carry a delta-prime or anti-standard condition")]
    NotDeltaPrime,
    #[error("graph is not bipartite")]
    NotBipartite,
    #[error("tree bounds need all-standard or all-anti-standard conditions")]
    UnsupportedTreeConditions,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lower,
    Upper,
    Equality,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Side::Lower => "lower",
            Side::Upper => "upper",
            Side::Equality => "equality",
        })
    }
}

/// One bound on `λ_k`, `k` 1-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundResult {
    pub bound_id: String,
    pub side: Side,
    pub k: usize,
    pub value: f64,
    pub applicable: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl BoundResult {
    fn new(id: &str, side: Side, k: usize, value: f64) -> Self {
        BoundResult {
            bound_id: id.to_string(),
            side,
            k,
            value,
            applicable: true,
            reason: None,
        }
    }

    fn inapplicable(id: &str, side: Side, k: usize, reason: impl Into<String>) -> Self {
        BoundResult {
            bound_id: id.to_string(),
            side,
            k,
            value: f64::NAN,
            applicable: false,
            reason: Some(reason.into()),
        }
    }

    fn because(mut self, reason: impl Into<String>) -> Self {
        self.reason = Some(reason.into());
        self
    }
}

/// Sign of the total strength.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StrengthSign {
    Negative,
    Zero,
    Positive,
}

impl StrengthSign {
    /// Treats totals below `1e-12` times the summed magnitudes as zero.
    pub fn classify(total: f64, magnitude: f64) -> Self {
        if total.abs() <= 1e-12 * magnitude {
            StrengthSign::Zero
        } else if total > 0.0 {
            StrengthSign::Positive
        } else {
            StrengthSign::Negative
        }
    }
}

fn square(index: f64, l: f64) -> f64 {
    (index * PI / l).powi(2)
}

pub const STANDARD_UPPER: &str = "standard_upper";
pub const DELTA_LOWER: &str = "delta_lower";
pub const DELTA_UPPER: &str = "delta_upper";
pub const DIRICHLET_STANDARD_UPPER: &str = "dirichlet_standard_upper";
pub const ANTI_COUNTING_LOWER: &str = "antistandard_counting_lower";
pub const ANTI_COUNTING_UPPER: &str = "antistandard_counting_upper";
pub const ANTI_NEUMANN_LOWER: &str = "antistandard_neumann_lower";
pub const ANTI_NEUMANN_UPPER: &str = "antistandard_neumann_upper";
pub const DELTAPRIME_NEGATIVE_LOWER: &str = "deltaprime_negative_lower";
pub const DELTAPRIME_STAR_LOWER: &str = "deltaprime_star_lower";
pub const LAMBDA1_CONSTANT: &str = "lambda1_constant";
pub const LAMBDA1_SINE: &str = "lambda1_sine";
pub const LAMBDA1_SINE_DOUBLE: &str = "lambda1_sine_double";
pub const LAMBDA1_COSINE: &str = "lambda1_cosine";
pub const TREE_LONGEST_PATH: &str = "tree_longest_path";
pub const TREE_EDGE_COUNT: &str = "tree_edge_count";
pub const TREE_DIAMETER: &str = "tree_diameter";
pub const TREE_PENDANT: &str = "tree_pendant";

/// `λ_k ≤ ((k − 1 + β + |E|)π/L)²` for all-standard graphs.
pub fn standard_upper(k: usize, betti: usize, edges: usize, l: f64) -> BoundResult {
    let i = (k + betti + edges) as f64 - 1.0;
    BoundResult::new(STANDARD_UPPER, Side::Upper, k, square(i, l))
}

/// Lower and upper bounds for δ-graphs, chosen by the sign of the total strength.
pub fn delta_bounds(
    k: usize,
    edges: usize,
    vertices: usize,
    l: f64,
    sign: StrengthSign,
) -> (BoundResult, BoundResult) {
    let (k, e, v) = (k as i64, edges as i64, vertices as i64);
    let (lower_index, upper_index) = match sign {
        StrengthSign::Zero => (k - v + 1, k + e),
        StrengthSign::Positive => (k - v + 1, k + e + 1),
        StrengthSign::Negative => (k - v, k + e),
    };
    let ku = k as usize;
    let lower = if lower_index > 0 {
        BoundResult::new(DELTA_LOWER, Side::Lower, ku, square(lower_index as f64, l))
    } else if sign == StrengthSign::Negative {
        BoundResult::inapplicable(DELTA_LOWER, Side::Lower, ku, "shifted index is not positive")
    } else {
        BoundResult::new(DELTA_LOWER, Side::Lower, ku, 0.0).because("shifted index is not positive; clamped to 0")
    };
    let upper = BoundResult::new(DELTA_UPPER, Side::Upper, ku, square(upper_index as f64, l));
    (lower, upper)
}

/// `λ_k ≤ ((k − 2 + 2β + 2|D| + |S|)π/L)²` for Dirichlet pendants and standard interior vertices.
pub fn dirichlet_standard_upper(k: usize, betti: usize, dirichlet: usize, standard: usize, l: f64) -> BoundResult {
    let i = (k + 2 * betti + 2 * dirichlet + standard) as f64 - 2.0;
    if i <= 0.0 {
        return BoundResult::inapplicable(DIRICHLET_STANDARD_UPPER, Side::Upper, k, "shifted index is not positive");
    }
    BoundResult::new(DIRICHLET_STANDARD_UPPER, Side::Upper, k, square(i, l))
}

/// Counting-function bounds for all-anti-standard graphs.
pub fn antistandard_counting_bounds(k: usize, edges: usize, vertices: usize, l: f64) -> (BoundResult, BoundResult) {
    let lower = if k > vertices {
        BoundResult::new(ANTI_COUNTING_LOWER, Side::Lower, k, square((k - vertices) as f64, l))
    } else {
        BoundResult::new(ANTI_COUNTING_LOWER, Side::Lower, k, 0.0).because("k ≤ |V|; the spectrum is nonnegative")
    };
    let upper = BoundResult::new(ANTI_COUNTING_UPPER, Side::Upper, k, square((k + edges) as f64 - 1.0, l));
    (lower, upper)
}

/// Neumann-decoupling bounds for all-anti-standard graphs.
pub fn antistandard_neumann_bounds(k: usize, edges: usize, vertices: usize, l: f64) -> (BoundResult, BoundResult) {
    let lower = BoundResult::new(ANTI_NEUMANN_LOWER, Side::Lower, k, square(k as f64, l));
    let upper = BoundResult::new(
        ANTI_NEUMANN_UPPER,
        Side::Upper,
        k,
        square((k + edges + vertices) as f64 - 1.0, l),
    );
    (lower, upper)
}

/// `((k − 2|V|)π/(2L))² ≤ λ_k` for δ′-graphs with only negative strengths, `k ≥ 2|V|`.
pub fn deltaprime_negative_lower(k: usize, vertices: usize, l: f64, all_negative: bool) -> BoundResult {
    if !all_negative {
        return BoundResult::inapplicable(DELTAPRIME_NEGATIVE_LOWER, Side::Lower, k, "some strength is not negative");
    }
    if k < 2 * vertices {
        return BoundResult::inapplicable(DELTAPRIME_NEGATIVE_LOWER, Side::Lower, k, "k < 2|V|");
    }
    BoundResult::new(DELTAPRIME_NEGATIVE_LOWER, Side::Lower, k, square((k - 2 * vertices) as f64, 2.0 * l))
}

/// Lower bound on `λ_{k|E|+j}` for δ′-graphs from the star comparison, with the
/// shifted index `k − (1 + (|V|+1)/|E|)`; `lengths` must be sorted descending.
pub fn deltaprime_star_lower(
    k: usize,
    j: usize,
    edges: usize,
    vertices: usize,
    lengths: &[f64],
) -> Result<BoundResult, BoundError> {
    if edges < 2 {
        return Err(BoundError::IndexOutOfRange(format!("|E| = {edges} < 2")));
    }
    if j == 0 || j > edges {
        return Err(BoundError::IndexOutOfRange(format!("j = {j} not in 1..={edges}")));
    }
    if lengths.len() != edges {
        return Err(BoundError::IndexOutOfRange(format!(
            "{} lengths given for {edges} edges",
            lengths.len()
        )));
    }
    if lengths.windows(2).any(|w| w[0] < w[1]) {
        return Err(BoundError::IndexOutOfRange("lengths are not sorted descending".into()));
    }
    let index = k * edges + j;
    let shifted = k as f64 - (1.0 + (vertices as f64 + 1.0) / edges as f64);
    if shifted < 0.0 {
        return Ok(BoundResult::inapplicable(
            DELTAPRIME_STAR_LOWER,
            Side::Lower,
            index,
            format!("shifted index {shifted} is negative"),
        ));
    }
    let a = (2.0 * shifted + 3.0).powi(2) * PI * PI / (4.0 * lengths[0] * lengths[0]);
    let b = (2.0 * shifted + 1.0).powi(2) * PI * PI / (4.0 * lengths[j - 1] * lengths[j - 1]);
    let mut r = BoundResult::new(DELTAPRIME_STAR_LOWER, Side::Lower, index, a.min(b));
    if shifted.fract() != 0.0 {
        r.reason = Some(format!("shifted index {shifted} is not an integer"));
    }
    Ok(r)
}

/// The four test-function upper bounds on `λ_1` of a δ′-graph.
///
/// `vertices` holds `(degree, strength)` with `None` for anti-standard
/// vertices. Those are only accepted with `nonzero_restriction`, in which
/// case the vertex sums run over nonzero strengths only.
pub fn lambda1_deltaprime_bounds(
    lengths: &[f64],
    vertices: &[(usize, Option<f64>)],
    nonzero_restriction: bool,
) -> Result<Vec<BoundResult>, BoundError> {
    if !nonzero_restriction && vertices.iter().any(|(_, s)| s.is_none()) {
        return Err(BoundError::ZeroStrengthVertexWithoutRemarkPath);
    }
    let l: f64 = lengths.iter().sum();
    let inverse: f64 = lengths.iter().map(|x| 1.0 / x).sum();
    let vertex: f64 = vertices
        .iter()
        .filter_map(|&(d, s)| s.map(|a| (d * d) as f64 / a))
        .sum();
    let mut out = vec![
        BoundResult::new(LAMBDA1_CONSTANT, Side::Upper, 1, vertex / l),
        BoundResult::new(LAMBDA1_SINE, Side::Upper, 1, PI * PI / l * inverse),
        BoundResult::new(LAMBDA1_SINE_DOUBLE, Side::Upper, 1, 4.0 * PI * PI / l * inverse),
        BoundResult::new(LAMBDA1_COSINE, Side::Upper, 1, 2.0 / l * (2.0 * PI * PI * inverse + vertex)),
    ];
    if vertices.iter().any(|(_, s)| s.is_none()) {
        for b in &mut out {
            b.reason = Some("sums restricted to nonzero strengths".into());
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TreeKind {
    Standard,
    AntiStandard,
}

/// Tree bounds with parameter `k ≥ 1`; they bound `λ_{k+1}` for standard and
/// `λ_k` for anti-standard conditions.
pub fn tree_bounds(
    kind: TreeKind,
    k: usize,
    longest_path: f64,
    edges: usize,
    diameter: f64,
    pendant_edges: usize,
    total_length: f64,
) -> Vec<BoundResult> {
    let index = match kind {
        TreeKind::Standard => k + 1,
        TreeKind::AntiStandard => k,
    };
    let kf = k as f64;
    let mut out = vec![
        BoundResult::new(TREE_LONGEST_PATH, Side::Upper, index, square(kf, longest_path)),
        BoundResult::new(TREE_DIAMETER, Side::Upper, index, square(kf, diameter)),
    ];
    let average = |count: usize| square(kf * count as f64, 2.0 * total_length);
    if pendant_edges >= 2 {
        out.push(BoundResult::new(TREE_EDGE_COUNT, Side::Upper, index, average(edges)));
        out.push(BoundResult::new(TREE_PENDANT, Side::Upper, index, average(pendant_edges)));
    } else {
        for id in [TREE_EDGE_COUNT, TREE_PENDANT] {
            out.push(BoundResult::inapplicable(id, Side::Upper, index, "fewer than two pendant edges"));
        }
    }
    out
}

/// The parameters the bounds are written in.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphParameters {
    pub edges: usize,
    pub vertices: usize,
    pub betti: usize,
    pub total_length: f64,
    pub lengths: Vec<f64>,
    pub degrees: Vec<usize>,
    pub conditions: Vec<VertexCondition>,
}

impl GraphParameters {
    pub fn of(g: &MetricGraph) -> Result<Self, GraphError> {
        Ok(GraphParameters {
            edges: g.edge_count(),
            vertices: g.vertex_count(),
            betti: g.betti_number()?,
            total_length: g.total_length(),
            lengths: g.lengths(),
            degrees: g.degrees(),
            conditions: g.vertices().iter().map(|v| v.condition).collect(),
        })
    }

    fn all(&self, f: impl Fn(&VertexCondition) -> bool) -> bool {
        self.conditions.iter().all(f)
    }

    pub fn is_delta_graph(&self) -> bool {
        self.all(|c| matches!(c, VertexCondition::Standard | VertexCondition::Delta(_)))
    }

    pub fn is_standard(&self) -> bool {
        self.all(|c| *c == VertexCondition::Standard)
    }

    pub fn is_antistandard(&self) -> bool {
        self.all(|c| *c == VertexCondition::AntiStandard)
    }

    pub fn is_deltaprime(&self) -> bool {
        self.all(|c| matches!(c, VertexCondition::DeltaPrime(_)))
    }

    /// Dirichlet exactly at degree-one vertices (at least one) and standard elsewhere.
    pub fn is_dirichlet_standard(&self) -> bool {
        let mut any = false;
        for (c, &d) in self.conditions.iter().zip(&self.degrees) {
            match c {
                VertexCondition::Dirichlet if d == 1 => any = true,
                VertexCondition::Standard if d != 1 => {}
                _ => return false,
            }
        }
        any
    }

    pub fn total_strength(&self) -> (f64, f64) {
        self.conditions.iter().fold((0.0, 0.0), |(s, m), c| {
            let a = c.family_strength();
            (s + a, m + a.abs())
        })
    }

    pub fn lengths_descending(&self) -> Vec<f64> {
        let mut l = self.lengths.clone();
        l.sort_by(|a, b| b.total_cmp(a));
        l
    }
}

/// δ′ λ₁ bounds read off a graph.
pub fn lambda1_bounds_for(g: &MetricGraph, nonzero_restriction: bool) -> Result<Vec<BoundResult>, BoundError> {
    let p = GraphParameters::of(g)?;
    let mut vertices = Vec::with_capacity(p.vertices);
    for (c, &d) in p.conditions.iter().zip(&p.degrees) {
        match c {
            VertexCondition::DeltaPrime(a) => vertices.push((d, Some(*a))),
            VertexCondition::AntiStandard => vertices.push((d, None)),
            _ => return Err(BoundError::NotDeltaPrime),
        }
    }
    lambda1_deltaprime_bounds(&p.lengths, &vertices, nonzero_restriction)
}

/// Tree bounds for an all-standard or all-anti-standard tree, for the given `k`.
pub fn tree_bounds_for(g: &MetricGraph, k: usize) -> Result<Vec<BoundResult>, BoundError> {
    let p = GraphParameters::of(g)?;
    let kind = if p.is_standard() {
        TreeKind::Standard
    } else if p.is_antistandard() {
        TreeKind::AntiStandard
    } else {
        return Err(BoundError::UnsupportedTreeConditions);
    };
    let d = g.tree_diameter()?;
    Ok(tree_bounds(kind, k, d, p.edges, d, g.pendant_edge_count(), p.total_length))
}

/// Every bound that applies to `g` for eigenvalue indices up to `k_max`.
pub fn evaluate_bounds(g: &MetricGraph, k_max: usize) -> Result<Vec<BoundResult>, BoundError> {
    let p = GraphParameters::of(g)?;
    let l = p.total_length;
    let mut out = Vec::new();
    if p.is_standard() {
        out.extend((1..=k_max).map(|k| standard_upper(k, p.betti, p.edges, l)));
    }
    if p.is_delta_graph() {
        let (total, magnitude) = p.total_strength();
        let sign = StrengthSign::classify(total, magnitude);
        for k in 1..=k_max {
            let (lo, hi) = delta_bounds(k, p.edges, p.vertices, l, sign);
            out.push(lo);
            out.push(hi);
        }
    }
    if p.is_dirichlet_standard() {
        let d = p.conditions.iter().filter(|c| **c == VertexCondition::Dirichlet).count();
        out.extend((1..=k_max).map(|k| dirichlet_standard_upper(k, p.betti, d, p.vertices - d, l)));
    }
    if p.is_antistandard() {
        for k in 1..=k_max {
            let (a, b) = antistandard_counting_bounds(k, p.edges, p.vertices, l);
            let (c, d) = antistandard_neumann_bounds(k, p.edges, p.vertices, l);
            out.extend([a, b, c, d]);
        }
    }
    if p.is_deltaprime() {
        out.extend(lambda1_bounds_for(g, false)?);
        let all_negative = p.conditions.iter().all(|c| c.family_strength() < 0.0);
        if all_negative {
            out.extend((2 * p.vertices..=k_max).map(|k| deltaprime_negative_lower(k, p.vertices, l, true)));
        }
        if p.edges >= 2 {
            let lengths = p.lengths_descending();
            for k in 0.. {
                if k * p.edges + 1 > k_max {
                    break;
                }
                for j in 1..=p.edges {
                    if k * p.edges + j <= k_max {
                        let b = deltaprime_star_lower(k, j, p.edges, p.vertices, &lengths)?;
                        if b.applicable {
                            out.push(b);
                        }
                    }
                }
            }
        }
    }
    if g.is_tree() && (p.is_standard() || p.is_antistandard()) {
        for k in 1..=k_max {
            out.extend(tree_bounds_for(g, k)?.into_iter().filter(|b| b.k <= k_max));
        }
    }
    Ok(out)
}

/// Aligned pairs `(λ_{k+β}(Bᵃ), λ_{k+1}(Bˢ))` for `k = 1..=k_max`, computed on `mesh`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationPair {
    pub k: usize,
    pub antistandard_index: usize,
    pub antistandard: f64,
    pub antistandard_error: f64,
    pub standard_index: usize,
    pub standard: f64,
    pub standard_error: f64,
}

pub fn bipartite_relation_pairs(b: &MetricGraph, mesh: &Mesh, k_max: usize) -> Result<Vec<RelationPair>, BoundError> {
    if !b.is_bipartite() {
        return Err(BoundError::NotBipartite);
    }
    let beta = b.betti_number()?;
    let anti = solve_spectrum(&b.with_all_conditions(VertexCondition::AntiStandard)?, mesh, k_max + beta)?;
    let standard = solve_spectrum(&b.with_all_conditions(VertexCondition::Standard)?, mesh, k_max + 1)?;
    Ok((1..=k_max)
        .map(|k| RelationPair {
            k,
            antistandard_index: k + beta,
            antistandard: anti.eigenvalues[k + beta - 1],
            antistandard_error: anti.error_estimates[k + beta - 1],
            standard_index: k + 1,
            standard: standard.eigenvalues[k],
            standard_error: standard.error_estimates[k],
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;

    #[test]
    fn standard_upper_interval() {
        let b = standard_upper(1, 0, 1, 2.0);
        assert!((b.value - (PI / 2.0).powi(2)).abs() < 1e-15);
        let b = standard_upper(1, 0, 2, 1.0);
        assert!((b.value - (2.0 * PI).powi(2)).abs() < 1e-12);
    }

    #[test]
    fn delta_bounds_cases() {
        let (lo, _) = delta_bounds(1, 1, 2, 1.0, StrengthSign::Zero);
        assert_eq!(lo.value, 0.0);
        assert!(lo.applicable);
        let (_, hi) = delta_bounds(1, 3, 1, 1.0, StrengthSign::Positive);
        assert!((hi.value - (5.0 * PI).powi(2)).abs() < 1e-10);
        let (lo, hi) = delta_bounds(1, 3, 2, 1.0, StrengthSign::Negative);
        assert!(!lo.applicable);
        assert!((hi.value - (4.0 * PI).powi(2)).abs() < 1e-10);
        let (lo, _) = delta_bounds(5, 3, 2, 1.0, StrengthSign::Negative);
        assert!((lo.value - (3.0 * PI).powi(2)).abs() < 1e-10);
    }

    #[test]
    fn dirichlet_standard_reduces_to_standard() {
        for k in 1..6 {
            for beta in 0..4 {
                for v in 1..6 {
                    let e = v - 1 + beta;
                    let a = dirichlet_standard_upper(k, beta, 0, v, 1.3);
                    let b = standard_upper(k, beta, e, 1.3);
                    if a.applicable {
                        assert_eq!(a.value, b.value);
                    }
                }
            }
        }
        let b = dirichlet_standard_upper(1, 0, 2, 0, 1.0);
        assert!((b.value - 9.0 * PI * PI).abs() < 1e-10);
    }

    #[test]
    fn antistandard_interval_meets_lower() {
        let (lo, _) = antistandard_neumann_bounds(3, 1, 2, 1.0);
        assert!((lo.value - 9.0 * PI * PI).abs() < 1e-12);
        let (lo, _) = antistandard_counting_bounds(2, 1, 2, 1.0);
        assert_eq!(lo.value, 0.0);
    }

    #[test]
    fn deltaprime_negative() {
        assert_eq!(deltaprime_negative_lower(4, 2, 1.0, true).value, 0.0);
        assert!(!deltaprime_negative_lower(3, 2, 1.0, true).applicable);
        assert!(!deltaprime_negative_lower(6, 2, 1.0, false).applicable);
        let b = deltaprime_negative_lower(5, 2, 1.0, true);
        assert!((b.value - (PI / 2.0).powi(2)).abs() < 1e-14);
    }

    #[test]
    fn deltaprime_star_arithmetic() {
        // k = 2, j = 1, |E| = 2, |V| = 1: shifted index 2 − (1 + 2/2) = 0.
        let b = deltaprime_star_lower(2, 1, 2, 1, &[1.0, 1.0]).unwrap();
        assert_eq!(b.k, 5);
        let expected = (PI * PI / 4.0_f64).min(9.0 * PI * PI / 4.0);
        assert!((b.value - expected).abs() < 1e-14);
        assert!(b.reason.is_none());
        let b = deltaprime_star_lower(1, 1, 2, 1, &[1.0, 1.0]).unwrap();
        assert!(!b.applicable);
        let b = deltaprime_star_lower(2, 1, 3, 1, &[1.0, 1.0, 1.0]).unwrap();
        assert!(b.reason.is_some());
        assert!(deltaprime_star_lower(2, 3, 2, 1, &[1.0, 1.0]).is_err());
        assert!(deltaprime_star_lower(2, 1, 1, 1, &[1.0]).is_err());
        assert!(deltaprime_star_lower(2, 1, 2, 1, &[1.0, 2.0]).is_err());
    }

    #[test]
    fn lambda1_equilateral_flower() {
        // One vertex of degree 2n with equal strengths.
        let n = 3;
        let lengths = vec![1.0; n];
        let b = lambda1_deltaprime_bounds(&lengths, &[(2 * n, Some(2.0))], false).unwrap();
        let d = (2 * n) as f64;
        assert!((b[0].value - d * d / (2.0 * 3.0)).abs() < 1e-12);
        assert!((b[1].value - PI * PI).abs() < 1e-12);
        assert!(matches!(
            lambda1_deltaprime_bounds(&lengths, &[(2 * n, None)], false),
            Err(BoundError::ZeroStrengthVertexWithoutRemarkPath)
        ));
    }

    #[test]
    fn tree_bound_order() {
        let b = tree_bounds(TreeKind::Standard, 2, 4.0, 5, 4.0, 3, 6.0);
        assert!(b.iter().all(|r| r.k == 3));
        let get = |id: &str| b.iter().find(|r| r.bound_id == id).unwrap().value;
        assert!(get(TREE_PENDANT) <= get(TREE_EDGE_COUNT));
        assert!(get(TREE_DIAMETER) <= get(TREE_PENDANT) + 1e-12);
        let b = tree_bounds(TreeKind::AntiStandard, 1, 1.0, 1, 1.0, 1, 1.0);
        assert!(!b.iter().find(|r| r.bound_id == TREE_PENDANT).unwrap().applicable);
    }

    #[test]
    fn evaluate_selects_families() {
        let g = GraphBuilder::new()
            .vertex("a", VertexCondition::Standard)
            .vertex("b", VertexCondition::Standard)
            .edge("e", "a", "b", 1.0)
            .edge("f", "a", "b", 1.0)
            .build()
            .unwrap();
        let b = evaluate_bounds(&g, 3).unwrap();
        assert!(b.iter().any(|r| r.bound_id == STANDARD_UPPER));
        assert!(b.iter().any(|r| r.bound_id == DELTA_LOWER));
        assert!(!b.iter().any(|r| r.bound_id == LAMBDA1_SINE));
        let h = g.with_all_conditions(VertexCondition::DeltaPrime(-1.0)).unwrap();
        let b = evaluate_bounds(&h, 12).unwrap();
        assert!(b.iter().any(|r| r.bound_id == DELTAPRIME_NEGATIVE_LOWER && r.k == 4));
        assert!(b.iter().any(|r| r.bound_id == LAMBDA1_COSINE));
    }

    #[test]
    fn bipartite_requires_bipartite() {
        let g = GraphBuilder::new()
            .vertex("a", VertexCondition::Standard)
            .edge("l", "a", "a", 1.0)
            .build()
            .unwrap();
        assert_eq!(
            bipartite_relation_pairs(&g, &Mesh::uniform(8).unwrap(), 2),
            Err(BoundError::NotBipartite)
        );
    }
}
