use serde::{Deserialize, Serialize};

use crate::graph::{ConditionDocument, FormatError, GraphDocument, MetricGraph, VertexCondition};

use super::{EndpointRef, SurgeryError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitPartDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub endpoints: Vec<EndpointRef>,
    pub condition: ConditionDocument,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssignmentDocument {
    pub edge: String,
    pub end: crate::graph::End,
    pub to: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistributionDocument {
    pub vertex: String,
    pub condition: ConditionDocument,
}

/// One surgery step in a script, tagged by `kind`. Every step may carry a free-text `note`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum SurgeryOp {
    SetStrength {
        vertex: String,
        condition: ConditionDocument,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        note: Option<String>,
    },
    Glue {
        vertices: Vec<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        note: Option<String>,
    },
    Split {
        vertex: String,
        parts: Vec<SplitPartDocument>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        note: Option<String>,
    },
    AttachPendant {
        vertex: String,
        graph: GraphDocument,
        at: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        note: Option<String>,
    },
    InsertAtVertex {
        vertex: String,
        graph: GraphDocument,
        assignment: Vec<AssignmentDocument>,
        distribution: Vec<DistributionDocument>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        note: Option<String>,
    },
    ScaleEdge {
        edge: String,
        factor: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        note: Option<String>,
    },
    ScaleGraph {
        factor: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        note: Option<String>,
    },
    Flowerize {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        note: Option<String>,
    },
    AttachPendantEdge {
        vertex: String,
        length: f64,
        tip: ConditionDocument,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        note: Option<String>,
    },
    Subdivide {
        edge: String,
        position: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        note: Option<String>,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum ScriptError {
    #[error("step {step}: {source}")]
    Surgery {
        step: usize,
        #[source]
        source: SurgeryError,
    },
    #[error("step {step}: {source}")]
    Format {
        step: usize,
        #[source]
        source: FormatError,
    },
    #[error("script result: {0}")]
    Result(SurgeryError),
}

fn condition(doc: &ConditionDocument, vertex: &str) -> Result<VertexCondition, FormatError> {
    doc.to_condition(vertex)
}

impl SurgeryOp {
    pub fn note(&self) -> Option<&str> {
        match self {
            SurgeryOp::SetStrength { note, .. }
            | SurgeryOp::Glue { note, .. }
            | SurgeryOp::Split { note, .. }
            | SurgeryOp::AttachPendant { note, .. }
            | SurgeryOp::InsertAtVertex { note, .. }
            | SurgeryOp::ScaleEdge { note, .. }
            | SurgeryOp::ScaleGraph { note, .. }
            | SurgeryOp::Flowerize { note }
            | SurgeryOp::AttachPendantEdge { note, .. }
            | SurgeryOp::Subdivide { note, .. } => note.as_deref(),
        }
    }

    /// Applies the step; the input graph is never modified.
    pub fn apply(&self, g: &MetricGraph) -> Result<MetricGraph, ScriptError> {
        self.apply_inner(g).map_err(|e| match e {
            Inner::Surgery(source) => ScriptError::Surgery { step: 0, source },
            Inner::Format(source) => ScriptError::Format { step: 0, source },
        })
    }

    fn apply_inner(&self, g: &MetricGraph) -> Result<MetricGraph, Inner> {
        use super::*;
        let out = match self {
            SurgeryOp::SetStrength {
                vertex, condition: c, ..
            } => set_vertex_condition(g, vertex, condition(c, vertex)?)?,
            SurgeryOp::Glue { vertices, .. } => {
                let ids: Vec<&str> = vertices.iter().map(String::as_str).collect();
                glue_vertices(g, &ids)?
            }
            SurgeryOp::Split { vertex, parts, .. } => {
                let parts = parts
                    .iter()
                    .map(|p| {
                        Ok(SplitPart {
                            id: p.id.clone(),
                            endpoints: p.endpoints.clone(),
                            condition: condition(&p.condition, vertex)?,
                        })
                    })
                    .collect::<Result<Vec<_>, FormatError>>()?;
                split_vertex(g, vertex, &parts)?
            }
            SurgeryOp::AttachPendant { vertex, graph, at, .. } => {
                let h = graph.to_graph()?;
                attach_pendant_graph(g, vertex, &h, at)?
            }
            SurgeryOp::InsertAtVertex {
                vertex,
                graph,
                assignment,
                distribution,
                ..
            } => {
                let h = graph.to_graph_allow_disconnected()?;
                let assignment: Vec<(EndpointRef, String)> = assignment
                    .iter()
                    .map(|a| (EndpointRef::new(a.edge.clone(), a.end), a.to.clone()))
                    .collect();
                let distribution = distribution
                    .iter()
                    .map(|d| Ok((d.vertex.clone(), condition(&d.condition, &d.vertex)?)))
                    .collect::<Result<Vec<_>, FormatError>>()?;
                insert_graph_at_vertex(g, vertex, &h, &assignment, &distribution)?
            }
            SurgeryOp::ScaleEdge { edge, factor, .. } => scale_edge(g, edge, *factor)?,
            SurgeryOp::ScaleGraph { factor, .. } => scale_graph(g, *factor)?,
            SurgeryOp::Flowerize { .. } => flowerize(g)?,
            SurgeryOp::AttachPendantEdge {
                vertex, length, tip, ..
            } => attach_pendant_edge(g, vertex, *length, condition(tip, vertex)?)?,
            SurgeryOp::Subdivide { edge, position, .. } => subdivide(g, edge, *position)?,
        };
        Ok(out)
    }
}

enum Inner {
    Surgery(SurgeryError),
    Format(FormatError),
}

impl From<SurgeryError> for Inner {
    fn from(e: SurgeryError) -> Self {
        Inner::Surgery(e)
    }
}

impl From<FormatError> for Inner {
    fn from(e: FormatError) -> Self {
        Inner::Format(e)
    }
}

/// Parses a JSON list of surgery steps.
pub fn parse_script(json: &str) -> Result<Vec<SurgeryOp>, serde_json::Error> {
    serde_json::from_str(json)
}

/// Applies the steps in order. Either every step succeeds and the final graph
/// is connected, or an error is returned and no graph is produced.
pub fn apply_script(g: &MetricGraph, ops: &[SurgeryOp]) -> Result<MetricGraph, ScriptError> {
    let mut current = g.clone();
    for (step, op) in ops.iter().enumerate() {
        current = op.apply_inner(&current).map_err(|e| match e {
            Inner::Surgery(source) => ScriptError::Surgery { step, source },
            Inner::Format(source) => ScriptError::Format { step, source },
        })?;
    }
    if current.edge_count() == 0 || !current.is_connected() {
        return Err(ScriptError::Result(crate::graph::GraphError::Disconnected.into()));
    }
    Ok(current)
}
