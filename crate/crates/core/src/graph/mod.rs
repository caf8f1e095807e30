//! Metric graphs with vertex conditions, and their topology.

mod condition;
mod json;
mod topology;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

pub use condition::{ConditionFamily, ConditionKind, InvalidCondition, VertexCondition};
pub use json::{ConditionDocument, EdgeDocument, FormatError, GraphDocument, VertexDocument};
pub use topology::SpanningTree;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GraphError {
    #[error("edge '{edge}' references unknown vertex '{vertex}'")]
    DanglingEndpoint { edge: String, vertex: String },
    #[error("edge '{edge}' has nonpositive length {length}")]
    NonpositiveLength { edge: String, length: f64 },
    #[error("vertex '{vertex}' has delta-prime strength 0")]
    ZeroDeltaPrimeStrength { vertex: String },
    #[error("vertex '{vertex}' has a non-finite strength")]
    NonFiniteStrength { vertex: String },
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph has no edges")]
    NoEdges,
    #[error("duplicate vertex id '{0}'")]
    DuplicateVertex(String),
    #[error("duplicate edge id '{0}'")]
    DuplicateEdge(String),
    #[error("unknown vertex '{0}'")]
    UnknownVertex(String),
    #[error("unknown edge '{0}'")]
    UnknownEdge(String),
    #[error("position {position} is not strictly inside edge '{edge}'")]
    PositionOutOfRange { edge: String, position: f64 },
    #[error("vertex '{vertex}' has degree {degree}, expected 2")]
    NotDegreeTwo { vertex: String, degree: usize },
    #[error("vertex '{vertex}' does not carry the standard condition")]
    NotStandard { vertex: String },
    #[error("vertex '{vertex}' is the only vertex on a loop; suppressing it would leave a loop without vertices")]
    WouldCreateDanglingLoop { vertex: String },
    #[error("graph is not a tree")]
    NotATree,
}

/// Which end of an edge an endpoint is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum End {
    From,
    To,
}

/// One end of one edge, by edge index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Endpoint {
    pub edge: usize,
    pub end: End,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub id: String,
    pub condition: VertexCondition,
}

/// An edge identified with the interval [0, length], oriented from `from` to `to`.
#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub id: String,
    pub from: usize,
    pub to: usize,
    pub length: f64,
}

impl Edge {
    pub fn vertex_at(&self, end: End) -> usize {
        match end {
            End::From => self.from,
            End::To => self.to,
        }
    }

    pub fn is_loop(&self) -> bool {
        self.from == self.to
    }
}

/// An immutable compact metric graph. Loops and parallel edges are allowed.
#[derive(Debug, Clone)]
pub struct MetricGraph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    vertex_index: HashMap<String, usize>,
    edge_index: HashMap<String, usize>,
}

impl PartialEq for MetricGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

/// Collects vertices and edges by id before validation.
#[derive(Debug, Clone, Default)]
pub struct GraphBuilder {
    vertices: Vec<(String, VertexCondition)>,
    edges: Vec<(String, String, String, f64)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(mut self, id: impl Into<String>, condition: VertexCondition) -> Self {
        self.add_vertex(id, condition);
        self
    }

    pub fn edge(
        mut self,
        id: impl Into<String>,
        from: impl Into<String>,
        to: impl Into<String>,
        length: f64,
    ) -> Self {
        self.add_edge(id, from, to, length);
        self
    }

    pub fn add_vertex(&mut self, id: impl Into<String>, condition: VertexCondition) {
        self.vertices.push((id.into(), condition));
    }

    pub fn add_edge(
        &mut self,
        id: impl Into<String>,
        from: impl Into<String>,
        to: impl Into<String>,
        length: f64,
    ) {
        self.edges.push((id.into(), from.into(), to.into(), length));
    }

    /// Validates and requires a connected graph with at least one edge.
    pub fn build(self) -> Result<MetricGraph, GraphError> {
        self.finish(true)
    }

    /// Validates but allows disconnected or edgeless graphs.
    pub fn build_allow_disconnected(self) -> Result<MetricGraph, GraphError> {
        self.finish(false)
    }

    fn finish(self, strict: bool) -> Result<MetricGraph, GraphError> {
        let mut index = HashMap::new();
        let vertices: Vec<Vertex> = self
            .vertices
            .into_iter()
            .enumerate()
            .map(|(i, (id, condition))| {
                if index.insert(id.clone(), i).is_some() {
                    return Err(GraphError::DuplicateVertex(id));
                }
                Ok(Vertex { id, condition })
            })
            .collect::<Result<_, _>>()?;
        let edges = self
            .edges
            .into_iter()
            .map(|(id, from, to, length)| {
                let lookup = |v: &String| {
                    index.get(v).copied().ok_or_else(|| GraphError::DanglingEndpoint {
                        edge: id.clone(),
                        vertex: v.clone(),
                    })
                };
                let (from, to) = (lookup(&from)?, lookup(&to)?);
                Ok(Edge { id, from, to, length })
            })
            .collect::<Result<_, _>>()?;
        MetricGraph::from_parts(vertices, edges, strict)
    }
}

impl MetricGraph {
    /// Validates raw parts. `strict` additionally requires connectivity and at least one edge.
    pub fn from_parts(
        mut vertices: Vec<Vertex>,
        edges: Vec<Edge>,
        strict: bool,
    ) -> Result<Self, GraphError> {
        let mut vertex_index = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter_mut().enumerate() {
            if vertex_index.insert(v.id.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex(v.id.clone()));
            }
            v.condition = v.condition.normalized().map_err(|e| match e {
                InvalidCondition::ZeroDeltaPrime => GraphError::ZeroDeltaPrimeStrength {
                    vertex: v.id.clone(),
                },
                InvalidCondition::NonFinite => GraphError::NonFiniteStrength {
                    vertex: v.id.clone(),
                },
            })?;
        }
        let mut edge_index = HashMap::with_capacity(edges.len());
        for (i, e) in edges.iter().enumerate() {
            if edge_index.insert(e.id.clone(), i).is_some() {
                return Err(GraphError::DuplicateEdge(e.id.clone()));
            }
            for end in [e.from, e.to] {
                if end >= vertices.len() {
                    return Err(GraphError::DanglingEndpoint {
                        edge: e.id.clone(),
                        vertex: format!("#{end}"),
                    });
                }
            }
            if !(e.length > 0.0 && e.length.is_finite()) {
                return Err(GraphError::NonpositiveLength {
                    edge: e.id.clone(),
                    length: e.length,
                });
            }
        }
        let graph = MetricGraph {
            vertices,
            edges,
            vertex_index,
            edge_index,
        };
        if strict {
            if graph.edges.is_empty() {
                return Err(GraphError::NoEdges);
            }
            if !graph.is_connected() {
                return Err(GraphError::Disconnected);
            }
        }
        debug_assert_eq!(graph.degrees().iter().sum::<usize>(), 2 * graph.edges.len());
        Ok(graph)
    }

    pub fn builder() -> GraphBuilder {
        GraphBuilder::new()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex(&self, index: usize) -> &Vertex {
        &self.vertices[index]
    }

    pub fn edge(&self, index: usize) -> &Edge {
        &self.edges[index]
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertex_index.get(id).copied()
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edge_index.get(id).copied()
    }

    pub fn require_vertex(&self, id: &str) -> Result<usize, GraphError> {
        self.vertex_index(id)
            .ok_or_else(|| GraphError::UnknownVertex(id.to_string()))
    }

    pub fn require_edge(&self, id: &str) -> Result<usize, GraphError> {
        self.edge_index(id)
            .ok_or_else(|| GraphError::UnknownEdge(id.to_string()))
    }

    pub fn condition(&self, vertex: usize) -> VertexCondition {
        self.vertices[vertex].condition
    }

    pub fn total_length(&self) -> f64 {
        self.edges.iter().map(|e| e.length).sum()
    }

    pub fn lengths(&self) -> Vec<f64> {
        self.edges.iter().map(|e| e.length).collect()
    }

    /// Number of edge endpoints at each vertex; a loop counts twice.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices.len()];
        for e in &self.edges {
            deg[e.from] += 1;
            deg[e.to] += 1;
        }
        deg
    }

    pub fn degree(&self, vertex: usize) -> usize {
        self.edges
            .iter()
            .map(|e| usize::from(e.from == vertex) + usize::from(e.to == vertex))
            .sum()
    }

    /// Endpoints at a vertex in edge order, `From` before `To` on loops.
    pub fn endpoints_at(&self, vertex: usize) -> Vec<Endpoint> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.from == vertex {
                out.push(Endpoint { edge: i, end: End::From });
            }
            if e.to == vertex {
                out.push(Endpoint { edge: i, end: End::To });
            }
        }
        out
    }

    pub fn pendant_vertices(&self) -> Vec<usize> {
        self.degrees()
            .iter()
            .enumerate()
            .filter(|(_, &d)| d == 1)
            .map(|(i, _)| i)
            .collect()
    }

    /// Edges with at least one endpoint of degree one.
    pub fn pendant_edge_count(&self) -> usize {
        let deg = self.degrees();
        self.edges
            .iter()
            .filter(|e| !e.is_loop() && (deg[e.from] == 1 || deg[e.to] == 1))
            .count()
    }

    /// Strengths of all vertices within their families (0 for Standard, AntiStandard, Dirichlet, Neumann).
    pub fn total_strength(&self) -> f64 {
        self.vertices.iter().map(|v| v.condition.family_strength()).sum()
    }

    /// The common family of all vertices, if there is one.
    pub fn common_family(&self) -> Option<ConditionFamily> {
        let first = self.vertices.first()?.condition.family();
        self.vertices
            .iter()
            .all(|v| v.condition.family() == first)
            .then_some(first)
    }

    /// Same graph with one vertex condition replaced.
    pub fn with_condition(&self, vertex: usize, condition: VertexCondition) -> Result<Self, GraphError> {
        let mut vertices = self.vertices.clone();
        vertices[vertex].condition = condition;
        MetricGraph::from_parts(vertices, self.edges.clone(), false)
    }

    /// Same graph with every vertex condition replaced.
    pub fn with_all_conditions(&self, condition: VertexCondition) -> Result<Self, GraphError> {
        let vertices = self
            .vertices
            .iter()
            .map(|v| Vertex {
                id: v.id.clone(),
                condition,
            })
            .collect();
        MetricGraph::from_parts(vertices, self.edges.clone(), false)
    }

    pub fn into_parts(self) -> (Vec<Vertex>, Vec<Edge>) {
        (self.vertices, self.edges)
    }

    /// `base` if unused as a vertex id, else `base#2`, `base#3`, ...
    pub fn fresh_vertex_id(&self, base: &str) -> String {
        fresh_id(base, |c| self.vertex_index.contains_key(c))
    }

    /// `base` if unused as an edge id, else `base#2`, `base#3`, ...
    pub fn fresh_edge_id(&self, base: &str) -> String {
        fresh_id(base, |c| self.edge_index.contains_key(c))
    }
}

pub(crate) fn fresh_id(base: &str, taken: impl Fn(&str) -> bool) -> String {
    if !taken(base) {
        return base.to_string();
    }
    (2..)
        .map(|n| format!("{base}#{n}"))
        .find(|c| !taken(c))
        .expect("unbounded search")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn interval(l: f64) -> GraphBuilder {
        GraphBuilder::new()
            .vertex("a", VertexCondition::Dirichlet)
            .vertex("b", VertexCondition::Dirichlet)
            .edge("e", "a", "b", l)
    }

    #[test]
    fn builds_interval() {
        let g = interval(1.0).build().unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.total_length(), 1.0);
    }

    #[test]
    fn rejects_zero_length() {
        assert!(matches!(
            interval(0.0).build(),
            Err(GraphError::NonpositiveLength { .. })
        ));
        assert!(matches!(
            interval(-1.0).build(),
            Err(GraphError::NonpositiveLength { .. })
        ));
    }

    #[test]
    fn rejects_zero_delta_prime() {
        let r = GraphBuilder::new()
            .vertex("a", VertexCondition::DeltaPrime(0.0))
            .vertex("b", VertexCondition::Neumann)
            .edge("e", "a", "b", 1.0)
            .build();
        assert_eq!(
            r,
            Err(GraphError::ZeroDeltaPrimeStrength { vertex: "a".into() })
        );
    }

    #[test]
    fn normalizes_zero_delta() {
        let g = GraphBuilder::new()
            .vertex("a", VertexCondition::Delta(0.0))
            .vertex("b", VertexCondition::Neumann)
            .edge("e", "a", "b", 1.0)
            .build()
            .unwrap();
        assert_eq!(g.condition(0), VertexCondition::Standard);
    }

    #[test]
    fn rejects_dangling_and_disconnected() {
        let r = GraphBuilder::new()
            .vertex("a", VertexCondition::Standard)
            .edge("e", "a", "zz", 1.0)
            .build();
        assert!(matches!(r, Err(GraphError::DanglingEndpoint { .. })));
        let two = GraphBuilder::new()
            .vertex("a", VertexCondition::Standard)
            .vertex("b", VertexCondition::Standard)
            .edge("e1", "a", "a", 1.0)
            .edge("e2", "b", "b", 1.0);
        assert_eq!(two.clone().build(), Err(GraphError::Disconnected));
        assert!(two.build_allow_disconnected().is_ok());
    }

    #[test]
    fn loop_degree_is_two() {
        let g = GraphBuilder::new()
            .vertex("v", VertexCondition::Standard)
            .edge("l", "v", "v", 1.0)
            .build()
            .unwrap();
        assert_eq!(g.degree(0), 2);
        assert_eq!(g.endpoints_at(0).len(), 2);
    }

    #[test]
    fn fresh_ids_are_suffixed() {
        let g = interval(1.0).build().unwrap();
        assert_eq!(g.fresh_vertex_id("c"), "c");
        assert_eq!(g.fresh_vertex_id("a"), "a#2");
        assert_eq!(g.fresh_edge_id("e"), "e#2");
    }
}
