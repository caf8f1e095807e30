use std::f64::consts::PI;

use approx::assert_relative_eq;
use qgraph::graph::{MetricGraph, VertexCondition};
use qgraph::oracle::{
    cycle_spectrum_closed_form, dirichlet_decoupled_count, interval_secular_spectrum, interval_spectrum_closed_form,
    path_spectrum_closed_form, EndpointCondition, OracleError, PathKind,
};
use qgraph::spectrum::{counting_function, solve_spectrum, Mesh};

use EndpointCondition::{Dirichlet, Neumann, Robin};

// Root of f on [a, b] by plain bisection; test-local so it shares no code with the library.
fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let fa = f(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if (f(m) < 0.0) == (fa < 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

fn interval(left: VertexCondition, right: VertexCondition, l: f64) -> MetricGraph {
    MetricGraph::builder()
        .vertex("a", left)
        .vertex("b", right)
        .edge("e", "a", "b", l)
        .build()
        .unwrap()
}

#[test]
fn unit_dirichlet_interval_squares() {
    let v = interval_spectrum_closed_form(1.0, Dirichlet, Dirichlet, 3).unwrap();
    for (k, x) in v.iter().enumerate() {
        assert_relative_eq!(*x, ((k + 1) as f64 * PI).powi(2), max_relative = 1e-15);
    }
}

#[test]
fn neumann_interval_starts_at_zero() {
    let v = interval_spectrum_closed_form(1.0, Neumann, Neumann, 1).unwrap();
    assert_eq!(v[0], 0.0);
}

#[test]
fn mixed_interval_first_root_of_cosine() {
    let l = 2.0;
    let v = interval_spectrum_closed_form(l, Dirichlet, Neumann, 1).unwrap();
    // cos(√λ ℓ) = 0 between λ = 0.1 and λ = 1.
    let root = bisect(|lam: f64| (lam.sqrt() * l).cos(), 0.1, 1.0);
    assert_relative_eq!(v[0], root, max_relative = 1e-12);
    assert_relative_eq!(v[0], 0.616_850_275_068_084_9, max_relative = 1e-12);
}

#[test]
fn robin_not_in_closed_form() {
    assert_eq!(
        interval_spectrum_closed_form(1.0, Robin(1.0), Neumann, 2),
        Err(OracleError::RobinNotClosedForm)
    );
}

#[test]
fn attractive_robin_has_hyperbolic_root() {
    let v = interval_secular_spectrum(1.0, Robin(-5.0), Neumann, 3).unwrap();
    let kappa = bisect(|k: f64| k * k.tanh() - 5.0, 1.0, 10.0);
    assert_relative_eq!(v[0], -kappa * kappa, max_relative = 1e-10);
    assert!(v[1] > 0.0);
    // Positive eigenvalues solve k tan k = −5 on (π/2, π), (3π/2, 2π).
    let k2 = bisect(|k: f64| k.sin() * k + 5.0 * k.cos(), PI / 2.0 + 1e-9, PI);
    assert_relative_eq!(v[1], k2 * k2, max_relative = 1e-10);
}

#[test]
fn secular_matches_closed_form() {
    for (a, b) in [(Dirichlet, Dirichlet), (Neumann, Neumann), (Dirichlet, Neumann)] {
        let exact = interval_spectrum_closed_form(1.3, a, b, 8).unwrap();
        let sec = interval_secular_spectrum(1.3, a, b, 8).unwrap();
        for (x, y) in exact.iter().zip(&sec) {
            assert!((x - y).abs() <= 1e-12 * (1.0 + x.abs()), "{x} vs {y}");
        }
    }
}

#[test]
fn two_repulsive_robin_ends_have_no_negative_root_two_attractive_have_two() {
    let v = interval_secular_spectrum(1.0, Robin(2.0), Robin(3.0), 2).unwrap();
    assert!(v[0] > 0.0);
    let v = interval_secular_spectrum(4.0, Robin(-3.0), Robin(-3.0), 3).unwrap();
    assert!(v[0] < 0.0 && v[1] < 0.0 && v[2] > 0.0);
}

#[test]
fn cycle_of_length_two_pi() {
    let v = cycle_spectrum_closed_form(2.0 * PI, 5).unwrap();
    assert_eq!(v, vec![0.0, 1.0, 1.0, 4.0, 4.0]);
}

#[test]
fn cycle_second_equals_path_third() {
    let c = cycle_spectrum_closed_form(3.0, 3).unwrap();
    let p = path_spectrum_closed_form(3.0, PathKind::Standard, 3).unwrap();
    assert_relative_eq!(c[1], p[2], max_relative = 1e-15);
}

#[test]
fn path_standard_and_anti_standard() {
    let s = path_spectrum_closed_form(1.0, PathKind::Standard, 3).unwrap();
    assert_eq!(s[0], 0.0);
    assert_relative_eq!(s[1], PI * PI);
    assert_relative_eq!(s[2], 4.0 * PI * PI);
    let a = path_spectrum_closed_form(1.0, PathKind::AntiStandard, 1).unwrap();
    assert_relative_eq!(a[0], PI * PI);
    for k in 1..=6 {
        let anti = path_spectrum_closed_form(2.5, PathKind::AntiStandard, k).unwrap();
        let std = path_spectrum_closed_form(2.5, PathKind::Standard, k + 1).unwrap();
        assert_relative_eq!(anti[k - 1], std[k], max_relative = 1e-15);
    }
}

#[test]
fn solver_within_error_estimate_of_robin_interval() {
    let g = interval(VertexCondition::Delta(-5.0), VertexCondition::Standard, 1.0);
    let s = solve_spectrum(&g, &Mesh::uniform(64).unwrap(), 6).unwrap();
    let exact = interval_secular_spectrum(1.0, Robin(-5.0), Neumann, 6).unwrap();
    for k in 0..6 {
        let err = (s.eigenvalues[k] - exact[k]).abs();
        // The two-mesh estimate is asymptotic; allow it a factor of two.
        assert!(err <= 2.0 * s.error_estimates[k] + 1e-9, "k={} err {err} est {}", k + 1, s.error_estimates[k]);
        // Conforming elements bound eigenvalues from above.
        assert!(s.eigenvalues[k] >= exact[k] - 1e-9 * (1.0 + exact[k].abs()));
    }
}

#[test]
fn delta_prime_pendant_is_robin_with_reciprocal() {
    let g = interval(VertexCondition::DeltaPrime(-0.5), VertexCondition::Dirichlet, 1.0);
    let s = solve_spectrum(&g, &Mesh::uniform(64).unwrap(), 4).unwrap();
    let exact = interval_secular_spectrum(1.0, Robin(-2.0), Dirichlet, 4).unwrap();
    for k in 0..4 {
        assert!((s.eigenvalues[k] - exact[k]).abs() <= 2.0 * s.error_estimates[k] + 1e-9);
    }
}

#[test]
fn dirichlet_decoupled_counts_match_solver() {
    let g = MetricGraph::builder()
        .vertex("a", VertexCondition::Dirichlet)
        .vertex("b", VertexCondition::Dirichlet)
        .vertex("c", VertexCondition::Dirichlet)
        .edge("e0", "a", "b", 1.0)
        .edge("e1", "b", "c", 0.7)
        .edge("e2", "c", "a", 1.9)
        .build()
        .unwrap();
    let s = solve_spectrum(&g, &Mesh::uniform(64).unwrap(), 20).unwrap();
    let lengths = [1.0, 0.7, 1.9];
    for lam in [5.0, 17.3, 40.0, 77.7, 120.0] {
        assert_eq!(counting_function(&s, lam).unwrap(), dirichlet_decoupled_count(&lengths, lam), "at {lam}");
    }
}

#[test]
fn nearly_coincident_negative_pair_is_resolved() {
    // Symmetric and antisymmetric bound states: κ tanh(κℓ/2) = 3 and κ coth(κℓ/2) = 3.
    let l = 4.0;
    let v = interval_secular_spectrum(l, Robin(-3.0), Robin(-3.0), 3).unwrap();
    let even = bisect(|k: f64| k * (k * l / 2.0).tanh() - 3.0, 1.0, 10.0);
    let odd = bisect(|k: f64| k / (k * l / 2.0).tanh() - 3.0, 1.0, 10.0);
    assert!(even > odd);
    // Shooting across a decaying state loses about e^{-κℓ/2} of conditioning.
    assert_relative_eq!(v[0], -even * even, max_relative = 1e-10);
    assert_relative_eq!(v[1], -odd * odd, max_relative = 1e-10);
    assert!(v[1] - v[0] > 1e-4);
    assert!(v[2] > 0.0);
}

#[test]
fn very_strong_attraction_stays_finite() {
    let v = interval_secular_spectrum(5.0, Robin(-400.0), Neumann, 2).unwrap();
    assert_relative_eq!(v[0], -160_000.0, max_relative = 1e-9);
    assert!(v[1].is_finite() && v[1] > 0.0);
}
