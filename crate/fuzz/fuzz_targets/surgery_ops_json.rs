#![no_main]
use libfuzzer_sys::fuzz_target;
use qgraph::graph::{MetricGraph, VertexCondition};
use qgraph::surgery::{apply_script, parse_script};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(ops) = parse_script(text) else {
        return;
    };
    let g = MetricGraph::builder()
        .vertex("a", VertexCondition::Standard)
        .vertex("b", VertexCondition::Delta(1.0))
        .vertex("c", VertexCondition::Delta(-0.5))
        .edge("e0", "a", "b", 1.0)
        .edge("e1", "b", "c", 0.5)
        .edge("e2", "c", "c", 2.0)
        .build()
        .expect("seed graph");
    if let Ok(out) = apply_script(&g, &ops) {
        MetricGraph::from_json_str(&out.to_json_string()).expect("surgery output reparses");
    }
});
