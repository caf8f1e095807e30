use serde::{Deserialize, Serialize};

use super::{ConditionKind, Edge, GraphError, InvalidCondition, MetricGraph, Vertex, VertexCondition};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("vertex '{vertex}': {message}")]
    Condition { vertex: String, message: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// `{"kind": "DeltaPrime", "strength": 2.0}`; strength only for Delta and DeltaPrime.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConditionDocument {
    pub kind: ConditionKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strength: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexDocument {
    pub id: String,
    pub condition: ConditionDocument,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDocument {
    pub id: String,
    pub from: String,
    pub to: String,
    pub length: f64,
}

/// Serialised form of a [`MetricGraph`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub vertices: Vec<VertexDocument>,
    pub edges: Vec<EdgeDocument>,
}

impl ConditionDocument {
    pub fn to_condition(&self, vertex: &str) -> Result<VertexCondition, FormatError> {
        let err = |message: String| FormatError::Condition {
            vertex: vertex.to_string(),
            message,
        };
        match (self.kind.has_strength(), self.strength) {
            (true, None) => return Err(err(format!("{:?} requires a strength", self.kind))),
            (false, Some(_)) => return Err(err(format!("{:?} takes no strength", self.kind))),
            _ => {}
        }
        VertexCondition::from_kind(self.kind, self.strength).map_err(|e| match e {
            InvalidCondition::ZeroDeltaPrime => FormatError::Graph(GraphError::ZeroDeltaPrimeStrength {
                vertex: vertex.to_string(),
            }),
            InvalidCondition::NonFinite => err(e.to_string()),
        })
    }
}

impl From<VertexCondition> for ConditionDocument {
    fn from(c: VertexCondition) -> Self {
        ConditionDocument {
            kind: c.kind(),
            strength: c.strength(),
        }
    }
}

impl GraphDocument {
    /// Builds a connected graph.
    pub fn to_graph(&self) -> Result<MetricGraph, FormatError> {
        self.convert(true)
    }

    /// Builds a graph that may be disconnected or edgeless.
    pub fn to_graph_allow_disconnected(&self) -> Result<MetricGraph, FormatError> {
        self.convert(false)
    }

    fn convert(&self, strict: bool) -> Result<MetricGraph, FormatError> {
        let mut b = MetricGraph::builder();
        for v in &self.vertices {
            b.add_vertex(v.id.clone(), v.condition.to_condition(&v.id)?);
        }
        for e in &self.edges {
            b.add_edge(e.id.clone(), e.from.clone(), e.to.clone(), e.length);
        }
        Ok(if strict {
            b.build()?
        } else {
            b.build_allow_disconnected()?
        })
    }
}

impl From<&MetricGraph> for GraphDocument {
    fn from(g: &MetricGraph) -> Self {
        let vertices = g
            .vertices()
            .iter()
            .map(|Vertex { id, condition }| VertexDocument {
                id: id.clone(),
                condition: (*condition).into(),
            })
            .collect();
        let edges = g
            .edges()
            .iter()
            .map(|e: &Edge| EdgeDocument {
                id: e.id.clone(),
                from: g.vertex(e.from).id.clone(),
                to: g.vertex(e.to).id.clone(),
                length: e.length,
            })
            .collect();
        GraphDocument { vertices, edges }
    }
}

impl MetricGraph {
    pub fn from_json_str(s: &str) -> Result<MetricGraph, FormatError> {
        let doc: GraphDocument = serde_json::from_str(s)?;
        doc.to_graph()
    }

    pub fn from_json_slice(bytes: &[u8]) -> Result<MetricGraph, FormatError> {
        let doc: GraphDocument = serde_json::from_slice(bytes)?;
        doc.to_graph()
    }

    pub fn to_document(&self) -> GraphDocument {
        self.into()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("graph documents always serialise")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const INTERVAL: &str = r#"{
        "vertices": [
            {"id": "a", "condition": {"kind": "Dirichlet"}},
            {"id": "b", "condition": {"kind": "DeltaPrime", "strength": -2.5}}
        ],
        "edges": [{"id": "e", "from": "a", "to": "b", "length": 1.25}]
    }"#;

    #[test]
    fn parses_and_round_trips() {
        let g = MetricGraph::from_json_str(INTERVAL).unwrap();
        assert_eq!(g.condition(1), VertexCondition::DeltaPrime(-2.5));
        let again = MetricGraph::from_json_str(&g.to_json_string()).unwrap();
        assert_eq!(g, again);
    }

    #[test]
    fn rejects_unknown_fields() {
        let bad = INTERVAL.replace("\"length\": 1.25", "\"length\": 1.25, \"colour\": 3");
        assert!(matches!(
            MetricGraph::from_json_str(&bad),
            Err(FormatError::Json(_))
        ));
    }

    #[test]
    fn strength_must_match_kind() {
        let missing = INTERVAL.replace(", \"strength\": -2.5", "");
        assert!(matches!(
            MetricGraph::from_json_str(&missing),
            Err(FormatError::Condition { .. })
        ));
        let extra = INTERVAL.replace("{\"kind\": \"Dirichlet\"}", "{\"kind\": \"Dirichlet\", \"strength\": 1}");
        assert!(matches!(
            MetricGraph::from_json_str(&extra),
            Err(FormatError::Condition { .. })
        ));
        let zero = INTERVAL.replace("-2.5", "0");
        assert!(matches!(
            MetricGraph::from_json_str(&zero),
            Err(FormatError::Graph(GraphError::ZeroDeltaPrimeStrength { .. }))
        ));
    }
}
