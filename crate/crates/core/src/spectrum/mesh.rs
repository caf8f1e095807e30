use std::collections::BTreeMap;

use crate::graph::Edge;

use super::SpectrumError;

/// Number of linear elements on each edge: a uniform default with optional per-edge overrides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mesh {
    default_elements: usize,
    overrides: BTreeMap<String, usize>,
}

impl Mesh {
    pub const DEFAULT_ELEMENTS: usize = 64;

    pub fn uniform(elements_per_edge: usize) -> Result<Self, SpectrumError> {
        if elements_per_edge == 0 {
            return Err(SpectrumError::InvalidMesh(
                "elements per edge must be at least 1".into(),
            ));
        }
        Ok(Mesh {
            default_elements: elements_per_edge,
            overrides: BTreeMap::new(),
        })
    }

    pub fn with_edge(mut self, edge: impl Into<String>, elements: usize) -> Result<Self, SpectrumError> {
        if elements == 0 {
            return Err(SpectrumError::InvalidMesh(
                "elements per edge must be at least 1".into(),
            ));
        }
        self.overrides.insert(edge.into(), elements);
        Ok(self)
    }

    pub fn default_elements(&self) -> usize {
        self.default_elements
    }

    pub fn elements_for(&self, edge: &Edge) -> usize {
        self.overrides
            .get(&edge.id)
            .copied()
            .unwrap_or(self.default_elements)
    }

    /// Every element count doubled.
    pub fn refined(&self) -> Mesh {
        Mesh {
            default_elements: 2 * self.default_elements,
            overrides: self
                .overrides
                .iter()
                .map(|(k, v)| (k.clone(), 2 * v))
                .collect(),
        }
    }

    /// Node positions along an edge, from 0 to its length.
    pub fn node_coordinates(&self, edge: &Edge) -> Vec<f64> {
        let n = self.elements_for(edge);
        (0..=n)
            .map(|i| edge.length * i as f64 / n as f64)
            .collect()
    }
}

impl Default for Mesh {
    fn default() -> Self {
        Mesh::uniform(Self::DEFAULT_ELEMENTS).expect("nonzero default")
    }
}
