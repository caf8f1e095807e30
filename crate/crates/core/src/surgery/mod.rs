//! Graph transformations with strength bookkeeping: gluing, splitting,
//! attaching and inserting graphs, scaling, and pendant edges.

mod ops;

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::graph::{Edge, End, Endpoint, GraphError, MetricGraph, Vertex, VertexCondition};

pub use ops::{
    apply_script, parse_script, AssignmentDocument, DistributionDocument, ScriptError, SplitPartDocument,
    SurgeryOp,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SurgeryError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("unknown vertex '{0}'")]
    UnknownVertex(String),
    #[error("unknown edge '{0}'")]
    UnknownEdge(String),
    #[error("vertices mix condition families: {0}")]
    MixedConditionFamilies(String),
    #[error("no vertices selected")]
    EmptySelection,
    #[error("endpoint '{edge}'/{end:?} is not at vertex '{vertex}'")]
    ForeignEndpoint { edge: String, end: End, vertex: String },
    #[error("endpoint partition at '{vertex}' does not cover every endpoint exactly once")]
    PartitionIncomplete { vertex: String },
    #[error("strengths sum to {actual}, expected {expected}")]
    StrengthSumMismatch { expected: f64, actual: f64 },
    #[error("endpoint assignment at '{vertex}' does not cover every endpoint exactly once")]
    AssignmentIncomplete { vertex: String },
    #[error("strength distribution must name exactly the receiving vertices")]
    DistributionMismatch,
    #[error("scale factor must be positive and finite, got {0}")]
    NonpositiveFactor(f64),
    #[error("length must be positive and finite, got {0}")]
    NonpositiveLength(f64),
}

/// One end of an edge, addressed by edge id.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndpointRef {
    pub edge: String,
    pub end: End,
}

impl EndpointRef {
    pub fn new(edge: impl Into<String>, end: End) -> Self {
        EndpointRef {
            edge: edge.into(),
            end,
        }
    }

    pub fn of(graph: &MetricGraph, p: Endpoint) -> Self {
        EndpointRef::new(graph.edge(p.edge).id.clone(), p.end)
    }
}

/// One descendant vertex of a split.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitPart {
    /// Id of the new vertex; generated when absent.
    pub id: Option<String>,
    pub endpoints: Vec<EndpointRef>,
    pub condition: VertexCondition,
}

fn vertex_of(g: &MetricGraph, id: &str) -> Result<usize, SurgeryError> {
    g.vertex_index(id)
        .ok_or_else(|| SurgeryError::UnknownVertex(id.to_string()))
}

fn edge_of(g: &MetricGraph, id: &str) -> Result<usize, SurgeryError> {
    g.edge_index(id)
        .ok_or_else(|| SurgeryError::UnknownEdge(id.to_string()))
}

fn sums_match(expected: f64, actual: f64) -> Result<(), SurgeryError> {
    if (expected - actual).abs() <= 1e-12 * (1.0 + expected.abs().max(actual.abs())) {
        Ok(())
    } else {
        Err(SurgeryError::StrengthSumMismatch { expected, actual })
    }
}

fn resolve_endpoint(g: &MetricGraph, r: &EndpointRef, vertex: usize) -> Result<Endpoint, SurgeryError> {
    let edge = edge_of(g, &r.edge)?;
    if g.edge(edge).vertex_at(r.end) != vertex {
        return Err(SurgeryError::ForeignEndpoint {
            edge: r.edge.clone(),
            end: r.end,
            vertex: g.vertex(vertex).id.clone(),
        });
    }
    Ok(Endpoint { edge, end: r.end })
}

fn set_end(e: &mut Edge, end: End, vertex: usize) {
    match end {
        End::From => e.from = vertex,
        End::To => e.to = vertex,
    }
}

/// Replaces the condition at one vertex.
pub fn set_vertex_condition(
    g: &MetricGraph,
    vertex: &str,
    condition: VertexCondition,
) -> Result<MetricGraph, SurgeryError> {
    let v = vertex_of(g, vertex)?;
    Ok(g.with_condition(v, condition)?)
}

/// Identifies the given vertices into the first one, adding strengths within the family.
pub fn glue_vertices(g: &MetricGraph, vertices: &[&str]) -> Result<MetricGraph, SurgeryError> {
    let mut idx: Vec<usize> = Vec::new();
    for id in vertices {
        let v = vertex_of(g, id)?;
        if !idx.contains(&v) {
            idx.push(v);
        }
    }
    let Some(&keep) = idx.first() else {
        return Err(SurgeryError::EmptySelection);
    };
    let family = g.condition(keep).family();
    if idx.iter().any(|&v| g.condition(v).family() != family) {
        let names: Vec<String> = idx
            .iter()
            .map(|&v| format!("{}={}", g.vertex(v).id, g.condition(v)))
            .collect();
        return Err(SurgeryError::MixedConditionFamilies(names.join(", ")));
    }
    let strength: f64 = idx.iter().map(|&v| g.condition(v).family_strength()).sum();
    let glued = family.with_strength(strength);
    let (vertices, edges) = g.clone().into_parts();
    let mut new_index = vec![usize::MAX; vertices.len()];
    let mut kept = Vec::new();
    for (i, mut v) in vertices.into_iter().enumerate() {
        if idx[1..].contains(&i) {
            continue;
        }
        if i == keep {
            v.condition = glued;
        }
        new_index[i] = kept.len();
        kept.push(v);
    }
    for &i in &idx[1..] {
        new_index[i] = new_index[keep];
    }
    let edges = edges
        .into_iter()
        .map(|e| Edge {
            from: new_index[e.from],
            to: new_index[e.to],
            ..e
        })
        .collect();
    Ok(MetricGraph::from_parts(kept, edges, false)?)
}

/// Splits a vertex; the result must stay connected.
pub fn split_vertex(g: &MetricGraph, vertex: &str, parts: &[SplitPart]) -> Result<MetricGraph, SurgeryError> {
    let out = split_vertex_allow_disconnected(g, vertex, parts)?;
    if !out.is_connected() {
        return Err(GraphError::Disconnected.into());
    }
    Ok(out)
}

/// Splits a vertex into descendants, each receiving a block of the endpoint partition.
///
/// The first part keeps the vertex id unless given another; further parts
/// default to `<vertex>~<i>`.
pub fn split_vertex_allow_disconnected(
    g: &MetricGraph,
    vertex: &str,
    parts: &[SplitPart],
) -> Result<MetricGraph, SurgeryError> {
    let v = vertex_of(g, vertex)?;
    let incomplete = || SurgeryError::PartitionIncomplete {
        vertex: vertex.to_string(),
    };
    if parts.is_empty() {
        return Err(incomplete());
    }
    let all: HashSet<Endpoint> = g.endpoints_at(v).into_iter().collect();
    let mut seen = HashSet::new();
    let mut resolved = Vec::with_capacity(parts.len());
    for p in parts {
        if p.endpoints.is_empty() {
            return Err(incomplete());
        }
        let mut block = Vec::new();
        for r in &p.endpoints {
            let ep = resolve_endpoint(g, r, v)?;
            if !seen.insert(ep) {
                return Err(incomplete());
            }
            block.push(ep);
        }
        resolved.push(block);
    }
    if seen != all {
        return Err(incomplete());
    }
    let family = g.condition(v).family();
    let mut total = 0.0;
    for p in parts {
        let c = p.condition.normalized().map_err(|_| GraphError::ZeroDeltaPrimeStrength {
            vertex: vertex.to_string(),
        })?;
        if c.family() != family {
            return Err(SurgeryError::MixedConditionFamilies(format!(
                "{}={} split into {}",
                vertex,
                g.condition(v),
                c
            )));
        }
        total += c.family_strength();
    }
    sums_match(g.condition(v).family_strength(), total)?;

    let (mut vertices, mut edges) = g.clone().into_parts();
    let mut taken: HashSet<String> = vertices.iter().map(|x| x.id.clone()).collect();
    for (i, (p, block)) in parts.iter().zip(&resolved).enumerate() {
        let target = if i == 0 {
            if let Some(id) = &p.id {
                if id != vertex && !taken.insert(id.clone()) {
                    return Err(GraphError::DuplicateVertex(id.clone()).into());
                }
                vertices[v].id = id.clone();
            }
            vertices[v].condition = p.condition;
            v
        } else {
            let id = match &p.id {
                Some(id) => {
                    if !taken.insert(id.clone()) {
                        return Err(GraphError::DuplicateVertex(id.clone()).into());
                    }
                    id.clone()
                }
                None => {
                    let id = crate::graph::fresh_id(&format!("{vertex}~{i}"), |c| taken.contains(c));
                    taken.insert(id.clone());
                    id
                }
            };
            vertices.push(Vertex {
                id,
                condition: p.condition,
            });
            vertices.len() - 1
        };
        for ep in block {
            set_end(&mut edges[ep.edge], ep.end, target);
        }
    }
    Ok(MetricGraph::from_parts(vertices, edges, false)?)
}

/// Disjoint union; ids of `h` that clash with `g` (ignoring `free`) are suffixed.
/// Returns the union and the new index of each vertex of `h`.
fn disjoint_union(g: &MetricGraph, h: &MetricGraph, free: Option<usize>) -> Result<(MetricGraph, Vec<usize>), SurgeryError> {
    let (mut vertices, mut edges) = g.clone().into_parts();
    let mut vtaken: HashSet<String> = vertices
        .iter()
        .enumerate()
        .filter(|(i, _)| Some(*i) != free)
        .map(|(_, x)| x.id.clone())
        .collect();
    let mut etaken: HashSet<String> = edges.iter().map(|e| e.id.clone()).collect();
    if let Some(f) = free {
        vertices[f].id = format!("\u{0}{}", vertices[f].id);
    }
    let mut map = Vec::with_capacity(h.vertex_count());
    for x in h.vertices() {
        let id = crate::graph::fresh_id(&x.id, |c| vtaken.contains(c));
        vtaken.insert(id.clone());
        map.push(vertices.len());
        vertices.push(Vertex {
            id,
            condition: x.condition,
        });
    }
    for e in h.edges() {
        let id = crate::graph::fresh_id(&e.id, |c| etaken.contains(c));
        etaken.insert(id.clone());
        edges.push(Edge {
            id,
            from: map[e.from],
            to: map[e.to],
            length: e.length,
        });
    }
    Ok((MetricGraph::from_parts(vertices, edges, false)?, map))
}

/// Disjoint union of `g` and `h` followed by gluing `v` of `g` to `w` of `h`.
pub fn attach_pendant_graph(
    g: &MetricGraph,
    vertex: &str,
    h: &MetricGraph,
    at: &str,
) -> Result<MetricGraph, SurgeryError> {
    let v = vertex_of(g, vertex)?;
    let w = vertex_of(h, at)?;
    let (union, map) = disjoint_union(g, h, None)?;
    let wid = union.vertex(map[w]).id.clone();
    glue_vertices(&union, &[&g.vertex(v).id, &wid])
}

/// Removes `vertex`, attaches each of its endpoints to a vertex of `h` and
/// sets the conditions of the receiving vertices from `distribution`.
///
/// The distributed strengths must add up to the strength of `vertex` plus the
/// original strengths of the receiving vertices.
pub fn insert_graph_at_vertex(
    g: &MetricGraph,
    vertex: &str,
    h: &MetricGraph,
    assignment: &[(EndpointRef, String)],
    distribution: &[(String, VertexCondition)],
) -> Result<MetricGraph, SurgeryError> {
    let v = vertex_of(g, vertex)?;
    let family = g.condition(v).family();
    let incomplete = || SurgeryError::AssignmentIncomplete {
        vertex: vertex.to_string(),
    };
    let all: HashSet<Endpoint> = g.endpoints_at(v).into_iter().collect();
    let mut seen = HashSet::new();
    let mut targets: Vec<(Endpoint, usize)> = Vec::new();
    let mut receiving: Vec<usize> = Vec::new();
    for (r, to) in assignment {
        let ep = resolve_endpoint(g, r, v)?;
        if !seen.insert(ep) {
            return Err(incomplete());
        }
        let w = vertex_of(h, to)?;
        if !receiving.contains(&w) {
            receiving.push(w);
        }
        targets.push((ep, w));
    }
    if seen != all {
        return Err(incomplete());
    }
    let mut dist: HashMap<usize, VertexCondition> = HashMap::new();
    for (id, c) in distribution {
        let w = vertex_of(h, id)?;
        if dist.insert(w, *c).is_some() {
            return Err(SurgeryError::DistributionMismatch);
        }
    }
    if dist.len() != receiving.len() || receiving.iter().any(|w| !dist.contains_key(w)) {
        return Err(SurgeryError::DistributionMismatch);
    }
    let mut expected = g.condition(v).family_strength();
    let mut actual = 0.0;
    for &w in &receiving {
        let (old, new) = (h.condition(w), dist[&w]);
        if old.family() != family || new.family() != family {
            return Err(SurgeryError::MixedConditionFamilies(format!(
                "{}={} receives {}={} -> {}",
                vertex,
                g.condition(v),
                h.vertex(w).id,
                old,
                new
            )));
        }
        expected += old.family_strength();
        actual += new.family_strength();
    }
    sums_match(expected, actual)?;

    let (union, map) = disjoint_union(g, h, Some(v))?;
    let (mut vertices, mut edges) = union.into_parts();
    for &w in &receiving {
        vertices[map[w]].condition = dist[&w];
    }
    for (ep, w) in targets {
        set_end(&mut edges[ep.edge], ep.end, map[w]);
    }
    let remap = |i: usize| if i > v { i - 1 } else { i };
    vertices.remove(v);
    let edges = edges
        .into_iter()
        .map(|e| Edge {
            from: remap(e.from),
            to: remap(e.to),
            ..e
        })
        .collect();
    Ok(MetricGraph::from_parts(vertices, edges, false)?)
}

fn check_factor(t: f64) -> Result<(), SurgeryError> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(SurgeryError::NonpositiveFactor(t))
    }
}

/// Multiplies the length of one edge by `t`.
pub fn scale_edge(g: &MetricGraph, edge: &str, t: f64) -> Result<MetricGraph, SurgeryError> {
    check_factor(t)?;
    let e = edge_of(g, edge)?;
    let (vertices, mut edges) = g.clone().into_parts();
    edges[e].length *= t;
    Ok(MetricGraph::from_parts(vertices, edges, false)?)
}

/// Multiplies every length by `t`, δ′ strengths by `t` and δ strengths by `1/t`.
pub fn scale_graph(g: &MetricGraph, t: f64) -> Result<MetricGraph, SurgeryError> {
    check_factor(t)?;
    let (vertices, edges) = g.clone().into_parts();
    let vertices = vertices
        .into_iter()
        .map(|v| Vertex {
            condition: match v.condition {
                VertexCondition::Delta(a) => VertexCondition::Delta(a / t),
                VertexCondition::DeltaPrime(a) => VertexCondition::DeltaPrime(a * t),
                c => c,
            },
            ..v
        })
        .collect();
    let edges = edges
        .into_iter()
        .map(|e| Edge {
            length: e.length * t,
            ..e
        })
        .collect();
    Ok(MetricGraph::from_parts(vertices, edges, false)?)
}

/// Glues all vertices into one.
pub fn flowerize(g: &MetricGraph) -> Result<MetricGraph, SurgeryError> {
    let ids: Vec<&str> = g.vertices().iter().map(|v| v.id.as_str()).collect();
    glue_vertices(g, &ids)
}

/// Adds an edge from `vertex` to a new degree-one vertex `<vertex>~tip`.
pub fn attach_pendant_edge(
    g: &MetricGraph,
    vertex: &str,
    length: f64,
    tip: VertexCondition,
) -> Result<MetricGraph, SurgeryError> {
    let v = vertex_of(g, vertex)?;
    if !(length > 0.0 && length.is_finite()) {
        return Err(SurgeryError::NonpositiveLength(length));
    }
    let tip_id = g.fresh_vertex_id(&format!("{vertex}~tip"));
    let edge_id = g.fresh_edge_id(&format!("{vertex}~pendant"));
    let (mut vertices, mut edges) = g.clone().into_parts();
    vertices.push(Vertex {
        id: tip_id,
        condition: tip,
    });
    edges.push(Edge {
        id: edge_id,
        from: v,
        to: vertices.len() - 1,
        length,
    });
    Ok(MetricGraph::from_parts(vertices, edges, false)?)
}

/// Inserts a Standard vertex on an edge.
pub fn subdivide(g: &MetricGraph, edge: &str, position: f64) -> Result<MetricGraph, SurgeryError> {
    edge_of(g, edge)?;
    Ok(g.subdivide_edge(edge, position)?)
}

#[cfg(test)]
mod tests;
