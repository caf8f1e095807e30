use super::*;
use crate::graph::{End, GraphBuilder, VertexCondition as C};

fn path3() -> MetricGraph {
    GraphBuilder::new()
        .vertex("a", C::Standard)
        .vertex("b", C::Standard)
        .vertex("c", C::Standard)
        .vertex("d", C::Standard)
        .edge("x", "a", "b", 1.0)
        .edge("y", "b", "c", 2.0)
        .edge("z", "c", "d", 0.5)
        .build()
        .unwrap()
}

#[test]
fn glue_deltas_sums() {
    let g = GraphBuilder::new()
        .vertex("a", C::Delta(1.0))
        .vertex("b", C::Delta(2.0))
        .edge("e", "a", "b", 1.0)
        .build()
        .unwrap();
    let f = glue_vertices(&g, &["a", "b"]).unwrap();
    assert_eq!(f.vertex_count(), 1);
    assert_eq!(f.condition(0), C::Delta(3.0));
    assert_eq!(f.betti_number(), Ok(1));
}

#[test]
fn glue_opposite_delta_primes_is_anti_standard() {
    let g = GraphBuilder::new()
        .vertex("a", C::DeltaPrime(3.0))
        .vertex("b", C::DeltaPrime(-3.0))
        .edge("e", "a", "b", 1.0)
        .build()
        .unwrap();
    let f = glue_vertices(&g, &["a", "b"]).unwrap();
    assert_eq!(f.condition(0), C::AntiStandard);
}

#[test]
fn glue_mixed_families_fails() {
    let g = GraphBuilder::new()
        .vertex("a", C::Delta(1.0))
        .vertex("b", C::DeltaPrime(2.0))
        .edge("e", "a", "b", 1.0)
        .build()
        .unwrap();
    assert!(matches!(
        glue_vertices(&g, &["a", "b"]),
        Err(SurgeryError::MixedConditionFamilies(_))
    ));
    assert!(matches!(
        glue_vertices(&g, &["a", "q"]),
        Err(SurgeryError::UnknownVertex(_))
    ));
}

#[test]
fn flowerize_path() {
    let g = path3();
    let f = flowerize(&g).unwrap();
    assert_eq!(f.vertex_count(), 1);
    assert_eq!(f.betti_number(), Ok(3));
    assert!(f.edges().iter().all(|e| e.is_loop()));
    assert_eq!(f.total_length(), g.total_length());
}

#[test]
fn flowerize_cancelling_deltas() {
    let g = GraphBuilder::new()
        .vertex("a", C::Delta(1.0))
        .vertex("b", C::Delta(2.0))
        .vertex("c", C::Delta(-3.0))
        .edge("x", "a", "b", 1.0)
        .edge("y", "b", "c", 1.0)
        .build()
        .unwrap();
    assert_eq!(flowerize(&g).unwrap().condition(0), C::Standard);
}

#[test]
fn glue_then_split_round_trip() {
    let g = path3();
    let glued = glue_vertices(&g, &["a", "d"]).unwrap();
    assert_eq!(glued.betti_number(), Ok(1));
    let parts = vec![
        SplitPart {
            id: None,
            endpoints: vec![EndpointRef::new("x", End::From)],
            condition: C::Standard,
        },
        SplitPart {
            id: Some("d".into()),
            endpoints: vec![EndpointRef::new("z", End::To)],
            condition: C::Standard,
        },
    ];
    let back = split_vertex(&glued, "a", &parts).unwrap();
    assert_eq!(back.betti_number(), Ok(0));
    for e in g.edges() {
        let i = back.edge_index(&e.id).unwrap();
        let f = back.edge(i);
        assert_eq!(back.vertex(f.from).id, g.vertex(e.from).id);
        assert_eq!(back.vertex(f.to).id, g.vertex(e.to).id);
        assert_eq!(f.length, e.length);
    }
}

#[test]
fn split_delta_checks_sum() {
    let g = GraphBuilder::new()
        .vertex("v", C::Delta(3.0))
        .edge("l", "v", "v", 1.0)
        .build()
        .unwrap();
    let part = |end, a| SplitPart {
        id: None,
        endpoints: vec![EndpointRef::new("l", end)],
        condition: C::Delta(a),
    };
    let ok = split_vertex(&g, "v", &[part(End::From, 1.0), part(End::To, 2.0)]).unwrap();
    assert_eq!(ok.vertex_count(), 2);
    assert!((ok.total_strength() - 3.0).abs() < 1e-15);
    assert!(matches!(
        split_vertex(&g, "v", &[part(End::From, 1.0), part(End::To, 1.0)]),
        Err(SurgeryError::StrengthSumMismatch { .. })
    ));
    assert!(matches!(
        split_vertex(&g, "v", &[part(End::From, 3.0)]),
        Err(SurgeryError::PartitionIncomplete { .. })
    ));
}

#[test]
fn split_requires_connectivity() {
    let g = glue_vertices(&path3(), &["b", "c"]).unwrap();
    // Separating x from the loop y and z leaves a connected graph; separating
    // both ends of the loop from x and z disconnects it.
    let parts = vec![
        SplitPart {
            id: None,
            endpoints: vec![EndpointRef::new("x", End::To), EndpointRef::new("z", End::From)],
            condition: C::Standard,
        },
        SplitPart {
            id: None,
            endpoints: vec![EndpointRef::new("y", End::From), EndpointRef::new("y", End::To)],
            condition: C::Standard,
        },
    ];
    assert!(matches!(
        split_vertex(&g, "b", &parts),
        Err(SurgeryError::Graph(GraphError::Disconnected))
    ));
    assert!(split_vertex_allow_disconnected(&g, "b", &parts).is_ok());
}

#[test]
fn trivial_insertion_is_identity() {
    let g = path3();
    let h = GraphBuilder::new()
        .vertex("w", C::Standard)
        .build_allow_disconnected()
        .unwrap();
    let assignment = vec![
        (EndpointRef::new("x", End::To), "w".to_string()),
        (EndpointRef::new("y", End::From), "w".to_string()),
    ];
    let out = insert_graph_at_vertex(&g, "b", &h, &assignment, &[("w".into(), C::Standard)]).unwrap();
    assert_eq!(out.vertex_count(), g.vertex_count());
    assert_eq!(out.edge_count(), g.edge_count());
    assert_eq!(out.total_length(), g.total_length());
    let w = out.vertex_index("w").unwrap();
    assert_eq!(out.degree(w), 2);
}

#[test]
fn bridge_insertion() {
    let g = path3();
    let h = GraphBuilder::new()
        .vertex("p", C::Standard)
        .vertex("q", C::Standard)
        .edge("pq", "p", "q", 0.25)
        .build()
        .unwrap();
    let assignment = vec![
        (EndpointRef::new("x", End::To), "p".to_string()),
        (EndpointRef::new("y", End::From), "q".to_string()),
    ];
    let dist = [("p".to_string(), C::Standard), ("q".to_string(), C::Standard)];
    let out = insert_graph_at_vertex(&g, "b", &h, &assignment, &dist).unwrap();
    assert_eq!(out.vertex_count(), g.vertex_count() + 1);
    assert!((out.total_length() - g.total_length() - 0.25).abs() < 1e-15);
    assert!(out.is_connected());
}

#[test]
fn delta_prime_insertion_distributes() {
    let g = GraphBuilder::new()
        .vertex("v", C::DeltaPrime(2.0))
        .vertex("u", C::DeltaPrime(1.0))
        .edge("a", "v", "u", 1.0)
        .edge("b", "u", "v", 1.0)
        .build()
        .unwrap();
    let h = GraphBuilder::new()
        .vertex("p", C::AntiStandard)
        .vertex("q", C::AntiStandard)
        .edge("pq", "p", "q", 0.5)
        .build()
        .unwrap();
    let assignment = vec![
        (EndpointRef::new("a", End::From), "p".to_string()),
        (EndpointRef::new("b", End::To), "q".to_string()),
    ];
    let good = [("p".to_string(), C::DeltaPrime(4.0)), ("q".to_string(), C::DeltaPrime(-2.0))];
    let out = insert_graph_at_vertex(&g, "v", &h, &assignment, &good).unwrap();
    assert!(out.vertex_index("v").is_none());
    assert!((out.total_strength() - g.total_strength()).abs() < 1e-14);
    let bad = [("p".to_string(), C::DeltaPrime(1.0)), ("q".to_string(), C::DeltaPrime(-2.0))];
    assert!(matches!(
        insert_graph_at_vertex(&g, "v", &h, &assignment, &bad),
        Err(SurgeryError::StrengthSumMismatch { .. })
    ));
    assert!(matches!(
        insert_graph_at_vertex(&g, "v", &h, &assignment[..1], &good),
        Err(SurgeryError::AssignmentIncomplete { .. })
    ));
}

#[test]
fn attach_pendant_loop() {
    let g = path3();
    let h = GraphBuilder::new()
        .vertex("a", C::Standard)
        .edge("x", "a", "a", 3.0)
        .build()
        .unwrap();
    let out = attach_pendant_graph(&g, "b", &h, "a").unwrap();
    assert_eq!(out.vertex_count(), 4);
    assert_eq!(out.edge_count(), 4);
    assert_eq!(out.betti_number(), Ok(1));
    assert_eq!(out.total_length(), g.total_length() + 3.0);
    assert!(out.edge_index("x#2").is_some());
}

#[test]
fn attach_pendant_strengths_add() {
    let g = GraphBuilder::new()
        .vertex("a", C::DeltaPrime(1.5))
        .vertex("b", C::DeltaPrime(1.0))
        .edge("e", "a", "b", 1.0)
        .build()
        .unwrap();
    let h = GraphBuilder::new()
        .vertex("w", C::DeltaPrime(2.0))
        .vertex("t", C::DeltaPrime(-1.0))
        .edge("f", "w", "t", 1.0)
        .build()
        .unwrap();
    let out = attach_pendant_graph(&g, "a", &h, "w").unwrap();
    assert_eq!(out.condition(out.vertex_index("a").unwrap()), C::DeltaPrime(3.5));
}

#[test]
fn scaling() {
    let g = GraphBuilder::new()
        .vertex("a", C::Delta(4.0))
        .vertex("b", C::DeltaPrime(1.0))
        .edge("e", "a", "b", 1.0)
        .build()
        .unwrap();
    let s = scale_graph(&g, 2.0).unwrap();
    assert_eq!(s.condition(0), C::Delta(2.0));
    assert_eq!(s.condition(1), C::DeltaPrime(2.0));
    assert_eq!(s.edge(0).length, 2.0);
    assert_eq!(scale_graph(&g, 1.0).unwrap(), g);
    assert_eq!(scale_edge(&g, "e", 1.0).unwrap(), g);
    assert_eq!(scale_edge(&g, "e", 0.0), Err(SurgeryError::NonpositiveFactor(0.0)));
    assert_eq!(scale_graph(&g, -1.0), Err(SurgeryError::NonpositiveFactor(-1.0)));
}

#[test]
fn pendant_edge() {
    let g = GraphBuilder::new()
        .vertex("a", C::Dirichlet)
        .vertex("b", C::Standard)
        .edge("e", "a", "b", 1.0)
        .build()
        .unwrap();
    let out = attach_pendant_edge(&g, "b", 1.0, C::Dirichlet).unwrap();
    assert_eq!(out.vertex_count(), 3);
    assert_eq!(out.degree(1), 2);
    assert_eq!(out.condition(out.vertex_index("b~tip").unwrap()), C::Dirichlet);
    assert_eq!(
        attach_pendant_edge(&g, "b", 0.0, C::Dirichlet),
        Err(SurgeryError::NonpositiveLength(0.0))
    );
}

#[test]
fn script_round_trip_and_transactional() {
    let json = r#"[
        {"kind": "Subdivide", "edge": "y", "position": 1.0, "note": "midpoint"},
        {"kind": "SetStrength", "vertex": "a", "condition": {"kind": "Dirichlet"}},
        {"kind": "AttachPendantEdge", "vertex": "d", "length": 1.0, "tip": {"kind": "Neumann"}},
        {"kind": "ScaleGraph", "factor": 2.0}
    ]"#;
    let ops = parse_script(json).unwrap();
    assert_eq!(ops[0].note(), Some("midpoint"));
    let out = apply_script(&path3(), &ops).unwrap();
    assert_eq!(out.edge_count(), 5);
    assert!((out.total_length() - 2.0 * 4.5).abs() < 1e-14);
    let again: Vec<SurgeryOp> = serde_json::from_str(&serde_json::to_string(&ops).unwrap()).unwrap();
    assert_eq!(again, ops);

    let failing = parse_script(r#"[{"kind": "Flowerize"}, {"kind": "ScaleEdge", "edge": "nope", "factor": 2.0}]"#).unwrap();
    assert!(matches!(
        apply_script(&path3(), &failing),
        Err(ScriptError::Surgery { step: 1, .. })
    ));
    assert!(parse_script(r#"[{"kind": "Flowerize", "extra": 1}]"#).is_err());
}
