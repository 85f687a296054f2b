use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_central-curve")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let o = run(args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    serde_json::from_str(&stdout(&o)).unwrap()
}

fn write_example(dir: &Path, name: &str) -> String {
    let path = dir.join(format!("{name}.json"));
    let o = run(&["example", "--name", name, "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    path.to_str().unwrap().to_string()
}

#[test]
fn example_writes_exact_rationals() {
    let v = json(&["example", "--name", "dtz-snake"]);
    let row: Vec<&str> = v["A"][1].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    assert_eq!(row, ["-1", "1/10", "1/3", "100/11", "1000/11", "10000/11"]);
    let hex = json(&["example", "--name", "hexagon"]);
    assert_eq!(hex["c"], serde_json::json!(["0", "0", "0", "0", "1", "3"]));
    let prime = json(&["example", "--name", "hexagon-prime"]);
    assert_eq!(prime["c"], serde_json::json!(["0", "0", "0", "0", "1", "2"]));
}

#[test]
fn unknown_example_lists_names() {
    let o = run(&["example", "--name", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("klee-minty") && stderr(&o).contains("dtz-snake"));
    let list = run(&["example"]);
    assert_eq!(list.status.code(), Some(0));
    assert!(stdout(&list).lines().any(|l| l == "heptagon"));
}

#[test]
fn invariants_from_files_and_names() {
    let dir = tempfile::tempdir().unwrap();
    let hex = write_example(dir.path(), "hexagon");
    assert_eq!(json(&["invariants", "--instance", &hex])["degree_primal"], 5);
    let km = json(&["invariants", "--instance", "klee-minty"]);
    assert_eq!(km["degree_primal"], 9);
    assert_eq!(km["gauss_bound_primal"], 34);
    assert_eq!(km["avg_curvature_bound_primal"]["coeff"], "34/5");
    let point = json(&["invariants", "--instance", "identity2"]);
    assert!(point["degree_primal"].as_u64().unwrap() <= 1);
}

#[test]
fn degenerate_cost_is_a_warning() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("deg.json");
    std::fs::write(&path, r#"{"name":"deg","A":[["1","1","1"]],"b":["1"],"c":["2","2","2"]}"#).unwrap();
    let p = path.to_str().unwrap();
    let v = json(&["invariants", "--instance", p]);
    assert_eq!(v["degenerate_cost"], true);
    assert!(!v["warnings"].as_array().unwrap().is_empty());
    let o = run(&["verify", "--instance", p]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("SKIP"));
}

#[test]
fn parse_errors_report_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\"name\": \"x\",\n \"A\": [[\"1\", \"2\"]],\n \"b\": [\"1\"], \"c\": [\"1\", \"2.5\"]}").unwrap();
    let o = run(&["invariants", "--instance", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bad.json:3:"), "{}", stderr(&o));
    let o = run(&["invariants", "--instance", "/nonexistent/file.json"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["invariants", "--instance", "hexagon", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn hexagon_trace_ends_at_the_optimal_vertex() {
    let o = run(&["trace", "--instance", "hexagon", "--region", "++++++"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "lambda,x_1,x_2,x_3,x_4,x_5,x_6,y_1,y_2,y_3,y_4,s_1,s_2,s_3,s_4,s_5,s_6,residual,turn_angle"
    );
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    // 17 significant digits
    assert_eq!(first[0].split('e').next().unwrap().len(), 18);
    let last: Vec<f64> = text.lines().last().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    let vertex = [2.0, 1.0, 0.0, 0.0, 1.0, 2.0];
    for (x, v) in last[1..7].iter().zip(vertex) {
        assert!((x - v).abs() <= 1e-6 * 2.0, "{last:?}");
    }
}

#[test]
fn trace_flag_errors() {
    assert_eq!(run(&["trace", "--instance", "hexagon"]).status.code(), Some(2));
    assert_eq!(run(&["trace", "--instance", "hexagon", "--region", "++"]).status.code(), Some(2));
    // x_1 + x_2 + x_3 = 3 has no solution with all three negative
    assert_eq!(run(&["trace", "--instance", "hexagon", "--region", "------"]).status.code(), Some(2));
}

#[test]
fn dual_trace_uses_slack_coordinates() {
    let o = run(&["trace", "--instance", "dtz-snake", "--side", "dual", "--region", "++++++"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains(r#""kind":"vertex""#), "{}", stderr(&o));
    // the other direction is optimal along a whole edge (b is normal to the first facet),
    // so it ends at the center of that edge rather than at a vertex
    let o = run(&["trace", "--instance", "dtz-snake", "--side", "dual", "--region", "++++++", "--direction", "min"]);
    assert!(stderr(&o).contains("unclassified"), "{}", stderr(&o));
    let last: Vec<f64> = stdout(&o).lines().last().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert!(last[1] < 1e-9 && last[2..7].iter().all(|&v| v > 0.1), "{last:?}");
}

#[test]
fn outputs_are_deterministic() {
    for args in [
        &["curvature", "--instance", "klee-minty"][..],
        &["trace", "--instance", "moment-curve-2x5", "--region", "+++++"][..],
        &["centers", "--instance", "hexagon"][..],
        &["plot", "--instance", "hexagon"][..],
    ] {
        let (a, b) = (run(args), run(args));
        assert_eq!(a.status.code(), Some(0), "{args:?}: {}", stderr(&a));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn klee_minty_curvature_is_within_bounds() {
    let v = json(&["curvature", "--instance", "klee-minty"]);
    assert_eq!(v["all_ok"], true);
    assert_eq!(v["primal"]["regions"].as_array().unwrap().len(), 5);
    let primal_only = json(&["curvature", "--instance", "klee-minty", "--side", "primal"]);
    assert!(primal_only["dual"].is_null());
}

#[test]
fn centers_csv_lists_every_region() {
    let o = run(&["centers", "--instance", "hexagon"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "sign_vector,bounded,x_1,x_2,x_3,x_4,x_5,x_6,kkt_residual");
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert!(rows.iter().all(|r| r.len() == 9));
    let bounded: Vec<&Vec<&str>> = rows.iter().filter(|r| r[1] == "true").collect();
    assert_eq!(bounded.len(), 7);
    let plus = rows.iter().find(|r| r[0] == "++++++").unwrap();
    for v in &plus[2..8] {
        assert!((v.parse::<f64>().unwrap() - 1.0).abs() < 1e-9);
    }
    assert!(plus[8].parse::<f64>().unwrap() < 1e-12);
}

#[test]
fn snake_plot_shows_ten_bounded_cells() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("snake.svg");
    let o = run(&["plot", "--instance", "dtz-snake", "--side", "dual", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let svg = std::fs::read_to_string(&out).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("<path data-region").count(), 10);
    assert_eq!(svg.matches("<line ").count(), 6);
    let polylines: Vec<&str> = svg.lines().filter(|l| l.starts_with("<polyline")).collect();
    assert!(polylines.len() >= 20);
    for p in polylines {
        let pts = p.split("points=\"").nth(1).unwrap().trim_end_matches("\"/>");
        assert_eq!(pts.split(' ').count(), 1000);
    }
}

#[test]
fn plot_needs_a_plane() {
    let o = run(&["plot", "--instance", "klee-minty"]);
    assert_eq!(o.status.code(), Some(3));
    let o = run(&["plot", "--instance", "hexagon", "--side", "dual"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn verify_passes_on_examples() {
    for name in ["hexagon", "klee-minty"] {
        let o = run(&["verify", "--instance", name]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
        let text = stdout(&o);
        assert_eq!(text.lines().filter(|l| l.contains(" PASS ")).count(), 5, "{text}");
    }
    let km = stdout(&run(&["verify", "--instance", "klee-minty"]));
    assert!(km.contains("5 bounded regions"));
}

#[test]
fn verify_respects_the_size_limit() {
    let o = run(&["verify", "--instance", "klee-minty", "--limit-n", "4"]);
    assert_eq!(o.status.code(), Some(3));
}
