use std::fmt;

use serde::{Deserialize, Serialize};

/// Tag of a vertex condition, as written in graph documents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConditionKind {
    Dirichlet,
    Neumann,
    Standard,
    AntiStandard,
    Delta,
    DeltaPrime,
}

impl ConditionKind {
    pub fn has_strength(self) -> bool {
        matches!(self, ConditionKind::Delta | ConditionKind::DeltaPrime)
    }
}

/// Vertex condition of the Laplacian at one vertex.
///
/// `Delta(α)`: continuity and Σ ∂φ = α φ(v).
/// `DeltaPrime(α′)`: a common value of ∂φ at all endpoints and Σ φ = α′ ∂φ.
/// Here ∂φ is the derivative taken into the edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VertexCondition {
    Dirichlet,
    Neumann,
    Standard,
    AntiStandard,
    Delta(f64),
    DeltaPrime(f64),
}

/// Conditions that can be glued together, with strengths adding up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConditionFamily {
    /// Standard and Delta.
    Delta,
    /// AntiStandard and DeltaPrime.
    DeltaPrime,
    Dirichlet,
    Neumann,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum InvalidCondition {
    #[error("delta-prime strength must be nonzero; use AntiStandard for zero strength")]
    ZeroDeltaPrime,
    #[error("strength is not a finite number")]
    NonFinite,
}

impl VertexCondition {
    /// Delta condition; strength 0 gives `Standard`.
    pub fn delta(alpha: f64) -> Self {
        if alpha == 0.0 {
            VertexCondition::Standard
        } else {
            VertexCondition::Delta(alpha)
        }
    }

    pub fn delta_prime(alpha: f64) -> Result<Self, InvalidCondition> {
        VertexCondition::DeltaPrime(alpha).normalized()
    }

    /// Validates the strength and canonicalises `Delta(0)` to `Standard`.
    pub fn normalized(self) -> Result<Self, InvalidCondition> {
        match self {
            VertexCondition::Delta(a) if !a.is_finite() => Err(InvalidCondition::NonFinite),
            VertexCondition::Delta(a) => Ok(VertexCondition::delta(a)),
            VertexCondition::DeltaPrime(a) if !a.is_finite() => Err(InvalidCondition::NonFinite),
            VertexCondition::DeltaPrime(a) if a == 0.0 => Err(InvalidCondition::ZeroDeltaPrime),
            other => Ok(other),
        }
    }

    pub fn from_kind(kind: ConditionKind, strength: Option<f64>) -> Result<Self, InvalidCondition> {
        let s = strength.unwrap_or(0.0);
        match kind {
            ConditionKind::Dirichlet => Ok(VertexCondition::Dirichlet),
            ConditionKind::Neumann => Ok(VertexCondition::Neumann),
            ConditionKind::Standard => Ok(VertexCondition::Standard),
            ConditionKind::AntiStandard => Ok(VertexCondition::AntiStandard),
            ConditionKind::Delta => VertexCondition::Delta(s).normalized(),
            ConditionKind::DeltaPrime => VertexCondition::DeltaPrime(s).normalized(),
        }
    }

    pub fn kind(&self) -> ConditionKind {
        match self {
            VertexCondition::Dirichlet => ConditionKind::Dirichlet,
            VertexCondition::Neumann => ConditionKind::Neumann,
            VertexCondition::Standard => ConditionKind::Standard,
            VertexCondition::AntiStandard => ConditionKind::AntiStandard,
            VertexCondition::Delta(_) => ConditionKind::Delta,
            VertexCondition::DeltaPrime(_) => ConditionKind::DeltaPrime,
        }
    }

    /// The explicit strength, present only for `Delta` and `DeltaPrime`.
    pub fn strength(&self) -> Option<f64> {
        match self {
            VertexCondition::Delta(a) | VertexCondition::DeltaPrime(a) => Some(*a),
            _ => None,
        }
    }

    pub fn family(&self) -> ConditionFamily {
        match self {
            VertexCondition::Standard | VertexCondition::Delta(_) => ConditionFamily::Delta,
            VertexCondition::AntiStandard | VertexCondition::DeltaPrime(_) => {
                ConditionFamily::DeltaPrime
            }
            VertexCondition::Dirichlet => ConditionFamily::Dirichlet,
            VertexCondition::Neumann => ConditionFamily::Neumann,
        }
    }

    /// Strength within the family: Standard and AntiStandard count as 0,
    /// as do Dirichlet and Neumann.
    pub fn family_strength(&self) -> f64 {
        self.strength().unwrap_or(0.0)
    }

    pub fn is_delta_prime_like(&self) -> bool {
        self.family() == ConditionFamily::DeltaPrime
    }
}

impl ConditionFamily {
    /// The condition of this family carrying the given strength.
    /// Zero gives Standard or AntiStandard; Dirichlet and Neumann ignore it.
    pub fn with_strength(self, strength: f64) -> VertexCondition {
        match self {
            ConditionFamily::Delta => VertexCondition::delta(strength),
            ConditionFamily::DeltaPrime => {
                if strength == 0.0 {
                    VertexCondition::AntiStandard
                } else {
                    VertexCondition::DeltaPrime(strength)
                }
            }
            ConditionFamily::Dirichlet => VertexCondition::Dirichlet,
            ConditionFamily::Neumann => VertexCondition::Neumann,
        }
    }
}

impl fmt::Display for VertexCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexCondition::Dirichlet => write!(f, "dirichlet"),
            VertexCondition::Neumann => write!(f, "neumann"),
            VertexCondition::Standard => write!(f, "standard"),
            VertexCondition::AntiStandard => write!(f, "anti-standard"),
            VertexCondition::Delta(a) => write!(f, "delta({a})"),
            VertexCondition::DeltaPrime(a) => write!(f, "delta'({a})"),
        }
    }
}

impl fmt::Display for ConditionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ConditionFamily::Delta => "delta",
            ConditionFamily::DeltaPrime => "delta-prime",
            ConditionFamily::Dirichlet => "dirichlet",
            ConditionFamily::Neumann => "neumann",
        };
        f.write_str(name)
    }
}
