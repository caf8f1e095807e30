use serde::{Deserialize, Serialize};

use crate::spectrum::Spectrum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

/// A computed quantity with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Estimate { value, error: 0.0 }
    }

    /// `λ_k` of a spectrum, `k` 1-based.
    pub fn eigenvalue(s: &Spectrum, k: usize) -> Self {
        Estimate {
            value: s.eigenvalues[k - 1],
            error: s.error_estimates[k - 1],
        }
    }
}

/// Outcome of one comparison. For `lhs <= rhs` the margin is `rhs − lhs`;
/// for equalities it is `−|lhs − rhs|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub relation: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub error_budget: f64,
    pub status: Status,
}

fn floor_of(a: f64, b: f64) -> f64 {
    1e-9 * (1.0 + a.abs().max(b.abs()))
}

/// `lhs <= rhs` with the combined error budget of both sides plus a
/// `1e-9·(1 + |λ|)` floor. Violations inside the floor count as ties.
pub fn check_le(relation: impl Into<String>, lhs: Estimate, rhs: Estimate) -> Verdict {
    let floor = floor_of(lhs.value, rhs.value);
    let budget = lhs.error + rhs.error + floor;
    let margin = rhs.value - lhs.value;
    let status = if margin >= -floor {
        Status::Pass
    } else if margin < -budget {
        Status::Fail
    } else {
        Status::Inconclusive
    };
    Verdict {
        relation: relation.into(),
        lhs: lhs.value,
        rhs: rhs.value,
        margin,
        error_budget: budget,
        status,
    }
}

/// `lhs <= rhs` for quantities without discretization error, with a fixed slack.
pub fn check_le_exact(relation: impl Into<String>, lhs: f64, rhs: f64, slack: f64) -> Verdict {
    let margin = rhs - lhs;
    Verdict {
        relation: relation.into(),
        lhs,
        rhs,
        margin,
        error_budget: slack,
        status: if margin >= -slack { Status::Pass } else { Status::Fail },
    }
}

/// `lhs == rhs` within the combined error budget.
pub fn check_eq(relation: impl Into<String>, lhs: Estimate, rhs: Estimate) -> Verdict {
    let budget = lhs.error + rhs.error + floor_of(lhs.value, rhs.value);
    check_eq_within(relation, lhs.value, rhs.value, budget)
}

/// `lhs == rhs` within an explicit budget.
pub fn check_eq_within(relation: impl Into<String>, lhs: f64, rhs: f64, budget: f64) -> Verdict {
    let margin = -(lhs - rhs).abs();
    Verdict {
        relation: relation.into(),
        lhs,
        rhs,
        margin,
        error_budget: budget,
        status: if -margin <= budget { Status::Pass } else { Status::Fail },
    }
}

/// A chain `a_1 <= a_2 <= ...` as consecutive verdicts.
pub fn check_chain(labels: &[String], values: &[Estimate]) -> Vec<Verdict> {
    labels
        .windows(2)
        .zip(values.windows(2))
        .map(|(l, v)| check_le(format!("{} <= {}", l[0], l[1]), v[0], v[1]))
        .collect()
}
