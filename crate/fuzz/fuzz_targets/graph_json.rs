#![no_main]
use libfuzzer_sys::fuzz_target;
use qgraph::graph::MetricGraph;

fuzz_target!(|data: &[u8]| {
    if let Ok(g) = MetricGraph::from_json_slice(data) {
        // Accepted graphs must survive a round trip.
        let again = MetricGraph::from_json_str(&g.to_json_string()).expect("round trip");
        assert_eq!(again.to_json_string(), g.to_json_string());
    }
});
