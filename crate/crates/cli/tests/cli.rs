use std::process::{Command, Output};

use irrdiv_core::DivisorGraph;

fn irrdiv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_irrdiv"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn factor_lists_three_classes() {
    let o = irrdiv(&["factor", "--ring", "lipschitz", "1+i+j+k"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("3 factorization class(es)"), "{out}");
    for c in ["(1+i)(1+j)", "(1+j)(1+k)", "(1+k)(1+i)"] {
        assert!(out.contains(c), "{out}");
    }
}

#[test]
fn factor_json_has_nine_classes_for_2i_plus_2k() {
    let o = irrdiv(&["factor", "--ring", "lipschitz", "2i+2k", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["classes"].as_array().unwrap().len(), 9);
}

#[test]
fn integer_graph_is_triangle() {
    let o = irrdiv(&[
        "graph",
        "--ring",
        "integers",
        "--undirected",
        "30",
        "--format",
        "dot",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let g = DivisorGraph::from_dot(&stdout(&o)).unwrap();
    assert!(!g.directed);
    assert_eq!(g.vertices.len(), 3);
    assert_eq!(g.edges.len(), 3);
    assert!(g.loop_map().is_empty());
}

#[test]
fn dot_round_trips_through_json() {
    for fmt_dir in [["--directed"], ["--undirected"]] {
        let base = ["graph", "--ring", "lipschitz", "2i+2k", fmt_dir[0]];
        let dot = irrdiv(&[&base[..], &["--format", "dot"]].concat());
        let json = irrdiv(&[&base[..], &["--format", "json"]].concat());
        let from_dot = DivisorGraph::from_dot(&stdout(&dot)).unwrap();
        let from_json = DivisorGraph::from_json(&stdout(&json)).unwrap();
        assert!(from_dot.same_as(&from_json));
        assert_eq!(from_dot.to_dot(), stdout(&dot));
    }
}

#[test]
fn nonstandard_declared_complex_exits_one() {
    let o = irrdiv(&["check", "standard-complex", "--declared", "weyl-h.json"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(
        out.contains("{1+x,x,y} is a face but {1+x,x} is not"),
        "{out}"
    );
}

#[test]
fn standard_complex_exits_zero() {
    let o = irrdiv(&["check", "standard-complex", "--declared", "weyl-g"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn bad_inputs_exit_two() {
    assert_eq!(
        irrdiv(&["factor", "--ring", "bogus", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(
        irrdiv(&["factor", "--ring", "lipschitz", "1+q"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        irrdiv(&["factor", "--ring", "lipschitz"]).status.code(),
        Some(2)
    );
    assert_eq!(
        irrdiv(&["graph", "--declared", "weyl-g", "x"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        irrdiv(&["tau-graph", "--relation", "nope", "1+i+j+k"])
            .status
            .code(),
        Some(2)
    );
    let o = irrdiv(&["graph", "--declared", "no-such-system"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn quadratic_prime_check_finds_witness() {
    let o = irrdiv(&[
        "check",
        "prime",
        "--ring",
        "quadratic:5",
        "--gauge-bound",
        "36",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("(1+s)(1-s)"));
}

#[test]
fn condition_star_witness() {
    let o = irrdiv(&[
        "check",
        "condition-star",
        "--ring",
        "lipschitz",
        "--gauge-bound",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("(1+i)(1+j) = (1+k)(1+i)"));
}

#[test]
fn tau_graph_of_free_system_is_single_vertex() {
    let o = irrdiv(&[
        "tau-graph",
        "--declared",
        "tau-free-f",
        "--relation",
        "degree-eq",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let g = DivisorGraph::from_json(&stdout(&o)).unwrap();
    assert_eq!(g.vertices.len(), 1);
    assert!(g.edges.is_empty() && g.loop_map().is_empty());
}

#[test]
fn corpus_command_passes() {
    let o = irrdiv(&["corpus"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn integers_sweep_is_ufd_consistent() {
    let o = irrdiv(&[
        "sweep",
        "ufd",
        "--ring",
        "integers",
        "--gauge-bound",
        "30",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["summary"]["classification"], "UFD-consistent");
}

#[test]
fn output_is_deterministic() {
    let args = [
        "complex",
        "--ring",
        "lipschitz",
        "2i+2k",
        "--format",
        "json",
    ];
    assert_eq!(irrdiv(&args).stdout, irrdiv(&args).stdout);
}
