//! Seeded random graphs for the suites.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{Edge, GraphError, MetricGraph, Vertex, VertexCondition};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GenerateError {
    #[error("unsatisfiable generator parameters: {0}")]
    UnsatisfiableParams(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Which conditions the vertices receive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    Standard,
    AntiStandard,
    /// δ strengths; one vertex in five gets strength 0, i.e. Standard.
    Delta,
    DeltaPrime,
    /// Every condition kind, drawn per vertex.
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Any,
    Positive,
    Negative,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphParams {
    /// Inclusive range of the edge count.
    pub edges: (usize, usize),
    pub lengths: (f64, f64),
    /// Inclusive range of strength magnitudes.
    pub strengths: (f64, f64),
    pub family: Family,
    pub sign: Sign,
    pub tree: bool,
    pub min_vertices: usize,
}

impl Default for GraphParams {
    fn default() -> Self {
        GraphParams {
            edges: (2, 6),
            lengths: (0.5, 2.0),
            strengths: (0.2, 5.0),
            family: Family::DeltaPrime,
            sign: Sign::Any,
            tree: false,
            min_vertices: 1,
        }
    }
}

impl GraphParams {
    pub fn family(mut self, family: Family) -> Self {
        self.family = family;
        self
    }

    pub fn sign(mut self, sign: Sign) -> Self {
        self.sign = sign;
        self
    }

    pub fn tree(mut self) -> Self {
        self.tree = true;
        self
    }

    pub fn min_vertices(mut self, n: usize) -> Self {
        self.min_vertices = n;
        self
    }

    pub fn edges(mut self, lo: usize, hi: usize) -> Self {
        self.edges = (lo, hi);
        self
    }

    fn validate(&self) -> Result<(), GenerateError> {
        let bad = |m: &str| Err(GenerateError::UnsatisfiableParams(m.to_string()));
        let (lo, hi) = self.edges;
        if lo == 0 || lo > hi {
            return bad("edge range must be nonempty and start at 1 or more");
        }
        let (a, b) = self.lengths;
        if !(a > 0.0 && a <= b && b.is_finite()) {
            return bad("length range must be nonempty and positive");
        }
        let (a, b) = self.strengths;
        if !(a > 0.0 && a <= b && b.is_finite()) {
            return bad("strength magnitudes must be a nonempty positive range");
        }
        if self.min_vertices > hi + 1 {
            return bad("min_vertices exceeds the largest edge count plus one");
        }
        if self.tree && self.min_vertices > hi + 1 {
            return bad("a tree with that many vertices needs more edges");
        }
        Ok(())
    }
}

/// A random strength magnitude with the requested sign.
pub fn random_strength(rng: &mut impl Rng, params: &GraphParams) -> f64 {
    let (a, b) = params.strengths;
    let m = if a == b { a } else { rng.gen_range(a..=b) };
    match params.sign {
        Sign::Positive => m,
        Sign::Negative => -m,
        Sign::Any => {
            if rng.gen_bool(0.5) {
                m
            } else {
                -m
            }
        }
    }
}

fn random_condition(rng: &mut impl Rng, params: &GraphParams) -> VertexCondition {
    match params.family {
        Family::Standard => VertexCondition::Standard,
        Family::AntiStandard => VertexCondition::AntiStandard,
        Family::Delta => {
            if rng.gen_range(0..5) == 0 {
                VertexCondition::delta(0.0)
            } else {
                VertexCondition::delta(random_strength(rng, params))
            }
        }
        Family::DeltaPrime => VertexCondition::DeltaPrime(random_strength(rng, params)),
        Family::Mixed => match rng.gen_range(0..6) {
            0 => VertexCondition::Dirichlet,
            1 => VertexCondition::Neumann,
            2 => VertexCondition::Standard,
            3 => VertexCondition::AntiStandard,
            4 => VertexCondition::delta(random_strength(rng, params)),
            _ => VertexCondition::DeltaPrime(random_strength(rng, params)),
        },
    }
}

/// A connected multigraph drawn from `params`; equal seeds give equal graphs.
///
/// The first `|V| − 1` edges join each new vertex to an earlier one, so the
/// graph is connected; the remaining edges join uniform random endpoint pairs,
/// loops included.
pub fn random_graph(params: &GraphParams, seed: u64) -> Result<MetricGraph, GenerateError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_graph_with(params, &mut rng)
}

pub fn random_graph_with(params: &GraphParams, rng: &mut ChaCha8Rng) -> Result<MetricGraph, GenerateError> {
    params.validate()?;
    let lo_e = params.edges.0.max(params.min_vertices.saturating_sub(1));
    let e_count = rng.gen_range(lo_e..=params.edges.1);
    let v_count = if params.tree {
        e_count + 1
    } else {
        rng.gen_range(params.min_vertices.max(1)..=e_count + 1)
    };
    let vertices: Vec<Vertex> = (0..v_count)
        .map(|i| Vertex {
            id: format!("v{i}"),
            condition: random_condition(rng, params),
        })
        .collect();
    let mut pairs: Vec<(usize, usize)> = (1..v_count).map(|i| (rng.gen_range(0..i), i)).collect();
    while pairs.len() < e_count {
        pairs.push((rng.gen_range(0..v_count), rng.gen_range(0..v_count)));
    }
    pairs.shuffle(rng);
    let (a, b) = params.lengths;
    let edges = pairs
        .into_iter()
        .enumerate()
        .map(|(i, (u, w))| {
            let (from, to) = if rng.gen_bool(0.5) { (u, w) } else { (w, u) };
            Edge {
                id: format!("e{i}"),
                from,
                to,
                length: if a == b { a } else { rng.gen_range(a..=b) },
            }
        })
        .collect();
    Ok(MetricGraph::from_parts(vertices, edges, true)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let p = GraphParams::default();
        assert_eq!(random_graph(&p, 5).unwrap(), random_graph(&p, 5).unwrap());
    }

    #[test]
    fn families_respected() {
        for seed in 0..50 {
            let g = random_graph(&GraphParams::default().sign(Sign::Negative), seed).unwrap();
            assert!(g
                .vertices()
                .iter()
                .all(|v| matches!(v.condition, VertexCondition::DeltaPrime(a) if a < 0.0)));
            let t = random_graph(&GraphParams::default().family(Family::Standard).tree(), seed).unwrap();
            assert!(t.is_tree());
            let g = random_graph(&GraphParams::default().min_vertices(2), seed).unwrap();
            assert!(g.vertex_count() >= 2 && g.is_connected());
        }
    }

    #[test]
    fn delta_zero_normalizes() {
        let p = GraphParams::default().family(Family::Delta);
        let any_standard = (0..40).any(|s| {
            random_graph(&p, s)
                .unwrap()
                .vertices()
                .iter()
                .any(|v| v.condition == VertexCondition::Standard)
        });
        assert!(any_standard);
    }

    #[test]
    fn unsatisfiable() {
        let mut p = GraphParams::default();
        p.edges = (3, 2);
        assert!(matches!(random_graph(&p, 0), Err(GenerateError::UnsatisfiableParams(_))));
        let p = GraphParams::default().min_vertices(20);
        assert!(random_graph(&p, 0).is_err());
    }
}
