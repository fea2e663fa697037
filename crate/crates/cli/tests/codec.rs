use proptest::prelude::*;
use serde_json::json;

use qicops::codec::{parse_vertex, read_trace, vertex_json, write_trace};
use qicops::specs::{build_robber, parse_space, CopSpec, EvaderSettings};
use qicops_core::engine::{run, RunConfig, Variant};
use qicops_core::space::{Space, Vertex};

const SPACES: [&str; 9] = ["line", "grid:2", "grid:3", "gridvar:3", "lamp:2", "lamp:3:2", "bs:2", "bs:3", "free-tree:2"];

fn walk(space: &Space, steps: &[usize]) -> Vertex {
    let mut v = space.base();
    for &s in steps {
        let n = space.neighbors(&v).unwrap();
        v = n[s % n.len()].clone();
    }
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn vertices_round_trip(k in 0usize..SPACES.len(), steps in proptest::collection::vec(0usize..64, 0..24)) {
        let s = parse_space(SPACES[k]).unwrap();
        let v = walk(&s, &steps);
        let j = vertex_json(&v);
        let back = parse_vertex(&s, &j).unwrap();
        prop_assert_eq!(&back, &v);
        prop_assert_eq!(vertex_json(&back).to_string(), j.to_string());
    }

    #[test]
    fn traces_round_trip_byte_for_byte(
        k in 0usize..4,
        seed in 0u64..1000,
        weak in any::<bool>(),
    ) {
        let (spec, cops, robber) = [
            ("grid:2", "random:2", "greedy-evader:2"),
            ("lamp:2", "greedy:1", "lamplighter"),
            ("bs:2", "random:1", "bs-sheet"),
            ("line", "pusher:1", "greedy-evader:1"),
        ][k];
        let variant = if weak || spec == "lamp:2" || spec == "line" { Variant::Weak } else { Variant::Strong };
        let space = parse_space(spec).unwrap();
        let (mut cop, n) = CopSpec::parse(cops).unwrap().build(1, 1).unwrap();
        let mut rob = build_robber(robber, EvaderSettings::default()).unwrap();
        let config = RunConfig { cops: n, horizon: 12, seed, fail_fast: false };
        let mut trace = run(&space, variant, &mut *cop, &mut *rob, &config).unwrap();
        trace.cop_agent = cops.into();
        trace.robber_agent = robber.into();
        let text = write_trace(spec, &trace);
        let (spec_back, _, parsed) = read_trace(&text).unwrap();
        prop_assert_eq!(spec_back, spec);
        prop_assert_eq!(&parsed.stages, &trace.stages);
        prop_assert_eq!(&parsed.outcome, &trace.outcome);
        prop_assert_eq!(&parsed.assertions, &trace.assertions);
        prop_assert_eq!(write_trace(spec, &parsed), text);
    }
}

#[test]
fn vertex_encodings_are_bit_exact() {
    let lamp = parse_space("lamp:3").unwrap();
    let v = parse_vertex(&lamp, &json!({"pos": -1, "lamps": [[2, 1], [-3, 2]]})).unwrap();
    assert_eq!(vertex_json(&v).to_string(), r#"{"lamps":[[-3,2],[2,1]],"pos":-1}"#);
    let bs = parse_space("bs:2").unwrap();
    let w = walk(&bs, &[1, 1, 1, 1, 1, 1]);
    let text = vertex_json(&w).to_string();
    assert!(text.starts_with(r#"{"exp":"#) && text.contains(r#""num":""#), "{text}");
    let tree = parse_space("free-tree:2").unwrap();
    assert!(vertex_json(&walk(&tree, &[0, 1, 2])).is_string());
    let grid = parse_space("gridvar:3").unwrap();
    assert_eq!(vertex_json(&grid.base()), json!([0, 0]));
}

#[test]
fn foreign_vertices_are_refused() {
    let grid = parse_space("grid:2").unwrap();
    assert!(parse_vertex(&grid, &json!([0, 0, 0])).is_err());
    assert!(parse_vertex(&grid, &json!({"pos": 0, "lamps": []})).is_err());
    let lamp = parse_space("lamp:2").unwrap();
    assert!(parse_vertex(&lamp, &json!({"pos": 0, "lamps": [[1, 5]]})).is_err());
    let var = parse_space("gridvar:3").unwrap();
    assert!(parse_vertex(&var, &json!([1, 0])).is_err());
    let tree = parse_space("free-tree:2").unwrap();
    assert!(parse_vertex(&tree, &json!("aA")).is_err());
}
