use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use qgraph::checker::{random_graph, run_suite, Family, GraphParams, SuiteConfig, SuiteReport};
use qgraph::graph::{MetricGraph, VertexCondition};
use qgraph::oracle::{interval_spectrum_closed_form, path_spectrum_closed_form, EndpointCondition, PathKind};
use qgraph::spectrum::{natural_scale, solve_spectrum, Mesh};
use qgraph::surgery::scale_graph;

const ORACLE_K: usize = 10;
const ORACLE_TOL_64: f64 = 5e-3;
const ORACLE_TOL_128: f64 = 1.3e-3;
const RATIO_TARGET: f64 = 4.0;
const RATIO_SLACK: f64 = 0.2;
const ORACLE_TIME: Duration = Duration::from_secs(1);
const SCALING_TOL: f64 = 1e-10;
const SCALING_GRAPHS: u64 = 20;
const SCALING_K: usize = 12;
const INTERLACING_INSTANCES: usize = 100;
const INCONCLUSIVE_MAX: f64 = 0.05;
const INTERLACING_TIME: Duration = Duration::from_secs(600);
const BOUND_INSTANCES: usize = 100;
const RELATION_INSTANCES: usize = 25;
const RELATION_K: usize = 10;
const DIAMETER_TREES: usize = 200;

struct Outcome {
    pass: bool,
    detail: String,
}

fn interval(c: VertexCondition) -> MetricGraph {
    MetricGraph::builder()
        .vertex("a", c)
        .vertex("b", c)
        .edge("e", "a", "b", 1.0)
        .build()
        .unwrap()
}

fn oracle_agreement() -> Outcome {
    let cases = [
        ("dirichlet", VertexCondition::Dirichlet, interval_spectrum_closed_form(1.0, EndpointCondition::Dirichlet, EndpointCondition::Dirichlet, ORACLE_K)),
        ("neumann", VertexCondition::Neumann, interval_spectrum_closed_form(1.0, EndpointCondition::Neumann, EndpointCondition::Neumann, ORACLE_K)),
        ("standard", VertexCondition::Standard, path_spectrum_closed_form(1.0, PathKind::Standard, ORACLE_K)),
        ("anti-standard", VertexCondition::AntiStandard, path_spectrum_closed_form(1.0, PathKind::AntiStandard, ORACLE_K)),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, c, exact) in cases {
        let exact = exact.unwrap();
        let g = interval(c);
        let start = Instant::now();
        let s64 = solve_spectrum(&g, &Mesh::uniform(64).unwrap(), ORACLE_K).unwrap();
        let t64 = start.elapsed();
        let start = Instant::now();
        let s128 = solve_spectrum(&g, &Mesh::uniform(128).unwrap(), ORACLE_K).unwrap();
        let t128 = start.elapsed();
        let (mut e64, mut e128) = (0.0f64, 0.0f64);
        let (mut rmin, mut rmax) = (f64::INFINITY, f64::NEG_INFINITY);
        for k in 0..ORACLE_K {
            if exact[k] == 0.0 {
                // Relative error is undefined at zero; require the constant mode to be resolved.
                pass &= s64.eigenvalues[k].abs() <= 1e-9 && s128.eigenvalues[k].abs() <= 1e-9;
                continue;
            }
            let a = (s64.eigenvalues[k] - exact[k]).abs() / exact[k];
            let b = (s128.eigenvalues[k] - exact[k]).abs() / exact[k];
            e64 = e64.max(a);
            e128 = e128.max(b);
            rmin = rmin.min(a / b);
            rmax = rmax.max(a / b);
        }
        let ratio_ok = rmin >= RATIO_TARGET * (1.0 - RATIO_SLACK) && rmax <= RATIO_TARGET * (1.0 + RATIO_SLACK);
        let time_ok = t64 < ORACLE_TIME && t128 < ORACLE_TIME;
        pass &= e64 <= ORACLE_TOL_64 && e128 <= ORACLE_TOL_128 && ratio_ok && time_ok;
        parts.push(format!(
            "{name}: max rel err {e64:.4e} @64, {e128:.4e} @128, ratio {rmin:.3}..{rmax:.3}, {:.0} ms",
            (t64.max(t128)).as_secs_f64() * 1e3
        ));
    }
    Outcome { pass, detail: parts.join("; ") }
}

fn scaling_identity() -> Outcome {
    let mesh = Mesh::uniform(64).unwrap();
    let mut worst = 0.0f64;
    for seed in 0..SCALING_GRAPHS {
        let g = random_graph(&GraphParams::default().family(Family::DeltaPrime), seed).unwrap();
        let s = solve_spectrum(&g, &mesh, SCALING_K).unwrap();
        // Zero eigenvalues are measured against the natural scale (π/L)².
        let scale = natural_scale(&g);
        for t in [0.5, 2.0, 3.0] {
            let ss = solve_spectrum(&scale_graph(&g, t).unwrap(), &mesh, SCALING_K).unwrap();
            for (a, b) in s.eigenvalues.iter().zip(&ss.eigenvalues) {
                worst = worst.max((b * t * t - a).abs() / a.abs().max(scale));
            }
        }
    }
    Outcome {
        pass: worst <= SCALING_TOL,
        detail: format!("{SCALING_GRAPHS} graphs x 3 factors, k <= {SCALING_K}: max relative deviation {worst:.3e}"),
    }
}

fn suite(checks: &[&str], instances: usize, k_max: usize) -> SuiteReport {
    let c = SuiteConfig {
        instances,
        k_max,
        ..SuiteConfig::default()
    }
    .only(checks);
    run_suite(&c).unwrap()
}

fn summarize(r: &SuiteReport) -> (usize, String) {
    let mut fails = 0;
    let parts: Vec<String> = r
        .reports
        .iter()
        .map(|c| {
            fails += c.counts.fail + c.counts.errors;
            format!(
                "{} fail {} err {} inconclusive {:.1}%",
                c.check_id,
                c.counts.fail,
                c.counts.errors,
                100.0 * c.inconclusive_instance_rate
            )
        })
        .collect();
    (fails, parts.join("; "))
}

fn interlacing_suite() -> Outcome {
    let start = Instant::now();
    let r = suite(
        &["strength_change", "deltaprime_gluing", "pendant_graph", "rank_one_chains", "counting_sandwich"],
        INTERLACING_INSTANCES,
        12,
    );
    let elapsed = start.elapsed();
    let (fails, detail) = summarize(&r);
    let inconclusive_ok = r.reports.iter().all(|c| c.inconclusive_instance_rate < INCONCLUSIVE_MAX);
    Outcome {
        pass: fails == 0 && inconclusive_ok && elapsed < INTERLACING_TIME,
        detail: format!("{detail}; {:.1} s", elapsed.as_secs_f64()),
    }
}

fn bounds_suite() -> Outcome {
    let r = suite(
        &[
            "standard_upper",
            "dirichlet_standard_upper",
            "delta_bounds",
            "antistandard_counting_bounds",
            "antistandard_neumann_bounds",
            "deltaprime_negative_lower",
            "deltaprime_star_lower",
            "lambda1_test_functions",
        ],
        BOUND_INSTANCES,
        12,
    );
    let (fails, detail) = summarize(&r);
    Outcome { pass: fails == 0, detail }
}

fn relations() -> Outcome {
    let r = suite(&["tree_relation", "bipartite_relation"], RELATION_INSTANCES, RELATION_K);
    let (fails, detail) = summarize(&r);
    let inconclusive: usize = r.reports.iter().map(|c| c.counts.inconclusive).sum();
    Outcome {
        pass: fails == 0 && inconclusive == 0,
        detail,
    }
}

fn pendant_diameter() -> Outcome {
    let r = suite(&["pendant_diameter"], DIAMETER_TREES, 1);
    let (fails, detail) = summarize(&r);
    Outcome { pass: fails == 0, detail }
}

fn determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_qgraph"))
            .args(["suite", "--seed", "7"])
            .output()
            .unwrap()
    };
    let (a, b) = (run(), run());
    let same = a.stdout == b.stdout && !a.stdout.is_empty();
    Outcome {
        pass: same,
        detail: format!("{} bytes, identical: {same}, exit {:?}", a.stdout.len(), a.status.code()),
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("oracle agreement", oracle_agreement),
        ("scaling identity", scaling_identity),
        ("interlacing suite", interlacing_suite),
        ("bounds suite", bounds_suite),
        ("tree and bipartite relations", relations),
        ("pendant diameter", pendant_diameter),
        ("determinism", determinism),
    ];
    let mut all = true;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        all &= o.pass;
        println!("{} {} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
