mod common;

use atk_core::gen::partial_ktree;
use atk_core::graph::{Graph, VertexSet};
use atk_core::harness::{cmd_bench, cmd_solve, Engine, ExperimentSpec, Instance, SolveSpec};
use atk_core::pace::{parse_gr, parse_td, write_gr, write_td};
use atk_core::td::TreeDecomposition;
use atk_core::Error;
use common::*;
use proptest::prelude::*;

#[test]
fn gr_examples() {
    let p3 = parse_gr("p tw 3 2\n1 2\n2 3\n").unwrap();
    assert_eq!(p3, Graph::from_edges([], [(0, 1), (1, 2)]).unwrap());
    let two = parse_gr("p tw 2 0\n").unwrap();
    assert_eq!((two.n(), two.m()), (2, 0));
    assert!(matches!(parse_gr("1 2\np tw 2 1\n"), Err(Error::Parse { line: 1, .. })));
    assert!(parse_gr("c comment\np tw 3 1\n% also a comment\n1 3\n").is_ok());
    assert!(parse_gr("p tw 2 2\n1 2\n2 1\n").is_err());
    assert!(parse_gr("p tw 2 1\n1 1\n").is_err());
    assert!(parse_gr("p tw 2 1\n1 3\n").is_err());
}

#[test]
fn td_examples() {
    let k3 = TreeDecomposition::single_bag(VertexSet::from([0, 1, 2]));
    assert_eq!(write_td(&k3, 3).unwrap().trim_end(), "s td 1 3 3\nb 1 1 2 3");
    let td = parse_td("s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n").unwrap();
    assert_eq!(td.width(), 1);
    assert!(parse_td("s td 3 1 3\nb 1 1\nb 2 2\nb 3 3\n1 2\n2 3\n3 1\n").is_err());
    assert!(parse_td("s td 1 1 3\nb 2 1\n").is_err());
}

#[test]
fn solve_missing_td_falls_back_to_heuristic() {
    let dir = std::env::temp_dir().join(format!("atk-io-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("forest.gr");
    let (forest, _) = partial_ktree(25, 1, 0.8, 11).unwrap();
    std::fs::write(&path, write_gr(&forest).unwrap()).unwrap();
    let inst = Instance::load(&path, None).unwrap();
    assert_eq!(inst.td_source, "heuristic");
    let spec = SolveSpec {
        problem: "ecc".into(),
        engine: Engine::Direct,
        epsilon: 1.0,
        oracle: "exact-dp".into(),
        threshold_scale: 1.0,
    };
    let rep = cmd_solve(&spec, &inst).unwrap();
    let row = &rep.rows[0];
    assert_eq!(row.opt, Some(forest.m()));
    assert!(row.ratio.unwrap() <= 2.0);
    assert!(row.width <= 1);
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn bench_sweeps() {
    let dir = std::env::temp_dir().join(format!("atk-bench-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("vc.json");
    let text = format!(
        r#"{{"problem":"vc","engine":"direct","epsilons":[0.25,0.5,1.0],"oracle":"exact-dp",
            "family":{{"generator":{{"n":300,"k":3,"p":0.7,"seed":1,"repetitions":2}}}},
            "out":{:?}}}"#,
        out
    );
    let spec = ExperimentSpec::from_json(&text).unwrap();
    let rep = cmd_bench(&spec).unwrap();
    assert_eq!(rep.rows.len(), 6);
    for r in &rep.rows {
        assert!(r.ratio.unwrap() <= 1.0 + r.epsilon);
        assert!(r.max_query_vertices as f64 <= 16.0 * 4.0 / r.epsilon);
        assert!(r.seed.is_some());
    }
    assert!(out.exists() && out.with_extension("csv").exists());
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(json["rows"].as_array().unwrap().len(), 6);

    let mut is = spec.clone();
    is.problem = "is".into();
    is.out = None;
    for r in cmd_bench(&is).unwrap().rows {
        assert!(r.ratio.unwrap() * (1.0 + r.epsilon) >= 1.0);
    }
    let mut lossy = spec.clone();
    lossy.oracle = "lossy:1.5".into();
    lossy.out = None;
    for r in cmd_bench(&lossy).unwrap().rows {
        assert!(r.ratio.unwrap() <= 1.5 * (1.0 + r.epsilon));
    }
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn friendly_engine_through_the_harness() {
    let spec = ExperimentSpec::from_json(
        r#"{"problem":"fvs","engine":"friendly","epsilons":[1.0],"oracle":"exact-bf",
            "family":{"generator":{"n":12,"k":2,"p":0.8,"seed":4,"repetitions":3}}}"#,
    )
    .unwrap();
    let rep = cmd_bench(&spec).unwrap();
    assert_eq!(rep.failed_runs, 0);
    assert!(rep.rows.iter().all(|r| r.feasible == Some(true) && r.ratio.unwrap() <= 2.0));
}

#[test]
fn direct_engine_rejects_friendly_only_problems() {
    let (g, td) = partial_ktree(10, 2, 0.8, 1).unwrap();
    let inst = Instance {
        graph: g,
        td,
        td_source: "generator".into(),
        seed: Some(1),
    };
    let spec = SolveSpec {
        problem: "fvs".into(),
        engine: Engine::Direct,
        epsilon: 1.0,
        oracle: "exact-bf".into(),
        threshold_scale: 1.0,
    };
    let rep = cmd_solve(&spec, &inst).unwrap();
    assert!(rep.rows[0].error.is_some());
    assert_eq!(rep.failed_runs, 1);
}

proptest! {
    #[test]
    fn gr_round_trip(seed in any::<u64>(), n in 0usize..30, p in 0.0f64..0.5) {
        let g = gnp(n, p, &mut rng(seed));
        prop_assert_eq!(parse_gr(&write_gr(&g).unwrap()).unwrap(), g);
    }

    #[test]
    fn td_round_trip(seed in any::<u64>(), n in 2usize..40, k in 1usize..4) {
        let (g, td) = partial_ktree(n.max(k + 1), k, 0.6, seed).unwrap();
        let back = parse_td(&write_td(&td, g.n()).unwrap()).unwrap();
        prop_assert_eq!(back.bags(), td.bags());
        prop_assert!(back.validate(&g).valid);
        prop_assert_eq!(back.width(), td.width());
    }
}
