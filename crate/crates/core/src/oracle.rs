//! Exact spectra of intervals, cycles and paths.
//!
//! Conditions on an interval end are written as a φ + b ∂φ = 0 with the
//! inward derivative ∂φ (φ′ at 0, −φ′ at ℓ). Eigenvalues of Robin problems
//! are roots of the secular equation, located by the Prüfer angle: the
//! number of eigenvalues below λ is read off the angle at ℓ, and each root is
//! bisected on that count.

use std::f64::consts::PI;

use crate::graph::VertexCondition;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("Robin conditions have no closed-form spectrum; use the secular solver")]
    RobinNotClosedForm,
    #[error("root bracketing did not stabilise: {message} (grid step {step:e}, {points} points)")]
    BracketingFailure {
        message: String,
        step: f64,
        points: usize,
    },
    #[error("length must be positive and finite, got {0}")]
    InvalidLength(f64),
    #[error("Robin coefficient must be finite")]
    NonFiniteCoefficient,
}

/// Condition at one end of an interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EndpointCondition {
    Dirichlet,
    Neumann,
    /// ∂φ = α φ.
    Robin(f64),
}

impl EndpointCondition {
    /// The condition a vertex condition reduces to at a vertex of degree one.
    pub fn from_pendant(condition: VertexCondition) -> Self {
        match condition {
            VertexCondition::Dirichlet | VertexCondition::AntiStandard => EndpointCondition::Dirichlet,
            VertexCondition::Neumann | VertexCondition::Standard => EndpointCondition::Neumann,
            VertexCondition::Delta(a) => EndpointCondition::Robin(a),
            VertexCondition::DeltaPrime(a) => EndpointCondition::Robin(1.0 / a),
        }
    }

    /// Coefficients (a, b) of a φ + b ∂φ = 0.
    fn row(self) -> (f64, f64) {
        match self {
            EndpointCondition::Dirichlet => (1.0, 0.0),
            EndpointCondition::Neumann => (0.0, 1.0),
            EndpointCondition::Robin(alpha) => (-alpha, 1.0),
        }
    }

    fn coefficient(self) -> f64 {
        match self {
            EndpointCondition::Robin(a) => a,
            _ => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathKind {
    Standard,
    AntiStandard,
}

fn check_length(l: f64) -> Result<(), OracleError> {
    if l > 0.0 && l.is_finite() {
        Ok(())
    } else {
        Err(OracleError::InvalidLength(l))
    }
}

/// Dirichlet/Neumann interval spectra in closed form.
pub fn interval_spectrum_closed_form(
    l: f64,
    left: EndpointCondition,
    right: EndpointCondition,
    k_max: usize,
) -> Result<Vec<f64>, OracleError> {
    use EndpointCondition::*;
    check_length(l)?;
    let shift = match (left, right) {
        (Dirichlet, Dirichlet) => 1.0,
        (Neumann, Neumann) => 0.0,
        (Dirichlet, Neumann) | (Neumann, Dirichlet) => 0.5,
        _ => return Err(OracleError::RobinNotClosedForm),
    };
    Ok((0..k_max)
        .map(|j| ((j as f64 + shift) * PI / l).powi(2))
        .collect())
}

/// All-standard cycle of length L: 0, then (2jπ/L)² twice for j ≥ 1.
pub fn cycle_spectrum_closed_form(l: f64, k_max: usize) -> Result<Vec<f64>, OracleError> {
    check_length(l)?;
    Ok((0..k_max)
        .map(|i| {
            let j = ((i + 1) / 2) as f64;
            (2.0 * j * PI / l).powi(2)
        })
        .collect())
}

/// Path of total length L: standard gives (jπ/L)², j ≥ 0; anti-standard j ≥ 1.
pub fn path_spectrum_closed_form(l: f64, kind: PathKind, k_max: usize) -> Result<Vec<f64>, OracleError> {
    check_length(l)?;
    let start = match kind {
        PathKind::Standard => 0,
        PathKind::AntiStandard => 1,
    };
    Ok((start..start + k_max)
        .map(|j| (j as f64 * PI / l).powi(2))
        .collect())
}

/// Σ_j ⌊√λ ℓ_j / π⌋: eigenvalues ≤ λ of edges decoupled with Dirichlet ends.
pub fn dirichlet_decoupled_count(lengths: &[f64], lambda: f64) -> usize {
    if lambda <= 0.0 {
        return 0;
    }
    let k = lambda.sqrt();
    lengths
        .iter()
        .map(|&l| (k * l / PI).floor() as usize)
        .sum()
}

/// Prüfer angle θ(ℓ; λ) of the solution meeting the left condition, with
/// u = r sin θ and u′ = r cos θ, θ(0) ∈ [0, π). It increases strictly in λ.
struct Prufer {
    u0: f64,
    du0: f64,
    l: f64,
}

impl Prufer {
    fn new(a1: f64, b1: f64, l: f64) -> Self {
        // a₁u + b₁u′ = 0 at 0, oriented so that θ(0) ∈ [0, π).
        let (mut u0, mut du0) = (b1, -a1);
        if u0 < 0.0 || (u0 == 0.0 && du0 < 0.0) {
            u0 = -u0;
            du0 = -du0;
        }
        Prufer { u0, du0, l }
    }

    fn end_angle(&self, lambda: f64) -> f64 {
        let (u0, du0, l) = (self.u0, self.du0, self.l);
        if lambda > 0.0 {
            // In (u, u′/k) the angle turns at the constant rate k.
            let k = lambda.sqrt();
            let phi = u0.atan2(du0 / k) + k * l;
            let m = (phi / PI).floor();
            let psi = phi - m * PI;
            return m * PI + psi.sin().atan2(k * psi.cos());
        }
        let (u, du) = if lambda == 0.0 {
            (u0 + du0 * l, du0)
        } else {
            let kappa = (-lambda).sqrt();
            // Divided by cosh κℓ, which leaves the angle unchanged.
            let t = (kappa * l).tanh();
            (u0 + du0 / kappa * t, u0 * kappa * t + du0)
        };
        // Without oscillation u changes sign at most once, from positive to negative.
        let theta = u.atan2(du);
        if theta < 0.0 {
            theta + 2.0 * PI
        } else {
            theta
        }
    }
}

/// Number of eigenvalues strictly below λ, by the oscillation theorem.
struct Counter {
    prufer: Prufer,
    theta_b: f64,
}

impl Counter {
    fn new(left: EndpointCondition, right: EndpointCondition, l: f64) -> Self {
        let (a1, b1) = left.row();
        let (a2, b2) = right.row();
        // a₂u + b₂∂u = 0 at ℓ with ∂u = −u′, so (u, u′) ∝ (b₂, a₂); angle in (0, π].
        let (mut u, mut du) = (b2, a2);
        if u < 0.0 || (u == 0.0 && du < 0.0) {
            u = -u;
            du = -du;
        }
        let mut theta_b = u.atan2(du);
        if theta_b <= 0.0 {
            theta_b = PI;
        }
        Counter {
            prufer: Prufer::new(a1, b1, l),
            theta_b,
        }
    }

    fn below(&self, lambda: f64) -> usize {
        let x = (self.prufer.end_angle(lambda) - self.theta_b) / PI;
        if x > 0.0 {
            x.ceil() as usize
        } else {
            0
        }
    }
}

/// Eigenvalues of −d²/dx² on [0, ℓ] with arbitrary end conditions, ascending.
///
/// Each eigenvalue is isolated by the Prüfer oscillation count, which cannot
/// miss nearly coincident roots the way a sign-change scan can, and then
/// bisected to full precision.
pub fn interval_secular_spectrum(
    l: f64,
    left: EndpointCondition,
    right: EndpointCondition,
    k_max: usize,
) -> Result<Vec<f64>, OracleError> {
    check_length(l)?;
    if !(left.coefficient().is_finite() && right.coefficient().is_finite()) {
        return Err(OracleError::NonFiniteCoefficient);
    }
    if k_max == 0 {
        return Ok(Vec::new());
    }
    let count = Counter::new(left, right, l);
    let strength = left.coefficient().abs() + right.coefficient().abs();
    let mut lo = -(strength * strength + strength / l + 1.0) - 1.0;
    let mut steps = 0;
    while count.below(lo) > 0 {
        lo *= 2.0;
        steps += 1;
        if steps > 200 {
            return Err(OracleError::BracketingFailure {
                message: "no lower bound on the spectrum".into(),
                step: lo,
                points: steps,
            });
        }
    }
    let mut hi = ((k_max as f64 + 1.0) * PI / l).powi(2) + 1.0;
    steps = 0;
    while count.below(hi) < k_max {
        hi *= 2.0;
        steps += 1;
        if steps > 200 {
            return Err(OracleError::BracketingFailure {
                message: "too few eigenvalues below the upper bracket".into(),
                step: hi,
                points: steps,
            });
        }
    }
    let mut values = Vec::with_capacity(k_max);
    for j in 0..k_max {
        // λ_{j+1} is the smallest λ with more than j eigenvalues at or below it.
        let (mut a, mut b) = (values.last().copied().unwrap_or(lo).max(lo), hi);
        for _ in 0..400 {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            if count.below(m) > j {
                b = m;
            } else {
                a = m;
            }
        }
        values.push(0.5 * (a + b));
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use EndpointCondition::*;

    #[test]
    fn closed_forms() {
        let dd = interval_spectrum_closed_form(1.0, Dirichlet, Dirichlet, 3).unwrap();
        assert_eq!(dd, vec![PI * PI, 4.0 * PI * PI, 9.0 * PI * PI]);
        assert_eq!(interval_spectrum_closed_form(1.0, Neumann, Neumann, 1).unwrap(), vec![0.0]);
        let dn = interval_spectrum_closed_form(2.0, Dirichlet, Neumann, 1).unwrap()[0];
        assert!((dn - 0.616_850_275_068_085).abs() < 1e-12);
        assert_eq!(
            interval_spectrum_closed_form(1.0, Robin(1.0), Neumann, 1),
            Err(OracleError::RobinNotClosedForm)
        );
    }

    #[test]
    fn cycle_and_path() {
        let c = cycle_spectrum_closed_form(2.0 * PI, 5).unwrap();
        assert_eq!(c, vec![0.0, 1.0, 1.0, 4.0, 4.0]);
        let p = path_spectrum_closed_form(1.0, PathKind::Standard, 3).unwrap();
        assert_eq!(p, vec![0.0, PI * PI, 4.0 * PI * PI]);
        let a = path_spectrum_closed_form(1.0, PathKind::AntiStandard, 1).unwrap();
        assert_eq!(a, vec![PI * PI]);
        let p3 = path_spectrum_closed_form(3.0, PathKind::Standard, 3).unwrap();
        let c3 = cycle_spectrum_closed_form(3.0, 3).unwrap();
        assert!((c3[1] - p3[2]).abs() < 1e-12);
    }

    #[test]
    fn secular_matches_closed_forms() {
        for (l, r) in [(Dirichlet, Dirichlet), (Neumann, Neumann), (Dirichlet, Neumann), (Neumann, Dirichlet)] {
            let exact = interval_spectrum_closed_form(1.3, l, r, 8).unwrap();
            let sec = interval_secular_spectrum(1.3, l, r, 8).unwrap();
            for (a, b) in exact.iter().zip(&sec) {
                assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()), "{a} {b}");
            }
        }
    }

    #[test]
    fn strong_negative_robin() {
        let ev = interval_secular_spectrum(1.0, Robin(-5.0), Neumann, 3).unwrap();
        assert!(ev[0] < 0.0 && ev[1] > 0.0);
        let kappa = (-ev[0]).sqrt();
        assert!((kappa * kappa.tanh() - 5.0).abs() < 1e-10);
    }

    #[test]
    fn robin_eigenvalues_satisfy_the_trigonometric_equation() {
        // Robin α at the left, Dirichlet at the right: tan kℓ = −k/α.
        let alpha = 2.0;
        let ev = interval_secular_spectrum(1.0, Robin(alpha), Dirichlet, 5).unwrap();
        for lam in ev {
            let k: f64 = lam.sqrt();
            assert!(((k).tan() + k / alpha).abs() < 1e-8 * (1.0 + k), "{lam}");
        }
    }

    #[test]
    fn decoupled_count() {
        let l = 2.0;
        assert_eq!(dirichlet_decoupled_count(&[l], (PI / l).powi(2) * 2.25), 1);
        assert_eq!(dirichlet_decoupled_count(&[1.0, 2.0], 0.0), 0);
    }
}
