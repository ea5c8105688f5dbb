use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use goursat_core::boundary_data::{to_classical, NonClassicalData};
use goursat_core::field_grid::{Field1D, Grid2D};
use goursat_core::mms::{ManufacturedSolution, PolySolution};
use goursat_core::schema::BoundaryDocument;
use serde_json::{json, Value};

fn goursat(args: &[&str], out_dir: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_goursat"));
    cmd.args(args).env_remove("GOURSAT_OUTPUT_DIR");
    if let Some(d) = out_dir {
        cmd.env("GOURSAT_OUTPUT_DIR", d);
    }
    cmd.output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_json(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p
}

fn csv_values(path: &Path) -> Vec<f64> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn zero_config_writes_zero_fields() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_json(
        dir.path(),
        "zero.json",
        &json!({"schema_version": 1, "grid": {"n1": 5, "n2": 7}, "output": {"jet_orders": [[2, 4], [1, 3]]}}),
    );
    let o = goursat(&["solve", s(&cfg)], None);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let out = dir.path().join("out");
    for f in ["run_u.csv", "run_d24.csv", "run_d13.csv", "run_v.csv"] {
        let text = std::fs::read_to_string(out.join(f)).unwrap();
        assert!(text.starts_with("x1,x2,value\n"));
        let vals = csv_values(&out.join(f));
        assert_eq!(vals.len(), 35);
        assert!(vals.iter().all(|v| *v == 0.0));
    }
    let report = std::fs::read_to_string(out.join("run_report.txt")).unwrap();
    assert!(report.contains("pde residual: 0.0000000000000000e0"));
    assert!(report.contains("sobolev_norm_2_4(u)"));
    assert!(!out.join("run_u.pgm").exists());
}

#[test]
fn csv_rows_are_lexicographic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_json(
        dir.path(),
        "c.json",
        &json!({"schema_version": 1, "domain": {"h1": 2.0, "h2": 1.0}, "grid": {"n1": 3, "n2": 3}}),
    );
    assert_eq!(code(&goursat(&["solve", s(&cfg)], None)), 0);
    let text = std::fs::read_to_string(dir.path().join("out/run_u.csv")).unwrap();
    let coords: Vec<(f64, f64)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let c: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            (c[0], c[1])
        })
        .collect();
    assert_eq!(
        coords,
        vec![
            (0.0, 0.0),
            (0.0, 0.5),
            (0.0, 1.0),
            (1.0, 0.0),
            (1.0, 0.5),
            (1.0, 1.0),
            (2.0, 0.0),
            (2.0, 0.5),
            (2.0, 1.0)
        ]
    );
}

#[test]
fn polynomial_oracle_report_within_envelope() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_json(
        dir.path(),
        "poly.json",
        &json!({
            "schema_version": 1,
            "grid": {"n1": 9, "n2": 9},
            "oracle": {"kind": "poly", "coefficients": [[1.0, 2.0, 0.0, 1.0], [0.5, 0.0, 1.0], [0.0, 0.0, 0.0, 1.0]]},
            "data": {"source": "oracle"},
            "rhs": {"source": "oracle"}
        }),
    );
    let o = goursat(&["solve", s(&cfg)], Some(&dir.path().join("o")));
    assert_eq!(code(&o), 0);
    let report = std::fs::read_to_string(dir.path().join("o/run_report.txt")).unwrap();
    let line = report
        .lines()
        .find(|l| l.trim_start().starts_with("max sup error:"))
        .unwrap();
    let err: f64 = line.rsplit(' ').next().unwrap().parse().unwrap();
    assert!(err <= 1e-11, "{err}");
}

#[test]
fn step_coefficient_solve_converges() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_json(
        dir.path(),
        "step.json",
        &json!({
            "schema_version": 1,
            "grid": {"n1": 17, "n2": 17},
            "coefficients": {"preset": "step", "order": [0, 0], "axis": "x1", "jump": 0.5, "left": 1.0, "right": 3.0},
            "oracle": {"kind": "poly", "coefficients": [[1.0, 1.0], [0.0, 1.0]]},
            "data": {"source": "oracle"},
            "rhs": {"source": "oracle"},
            "output": {"heatmap": true}
        }),
    );
    let o = goursat(&["solve", s(&cfg)], None);
    assert_eq!(code(&o), 0);
    let report = std::fs::read_to_string(dir.path().join("out/run_report.txt")).unwrap();
    let line = report
        .lines()
        .find(|l| l.starts_with("pde residual:"))
        .unwrap();
    let res: f64 = line.rsplit(' ').next().unwrap().parse().unwrap();
    assert!(res <= 1e-10);
    assert!(report.contains("heatmaps:"));
    let pgm = std::fs::read_to_string(dir.path().join("out/run_u.pgm")).unwrap();
    assert!(pgm.starts_with("P2\n17 17\n255\n"));
}

#[test]
fn output_dir_env_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_json(
        dir.path(),
        "z.json",
        &json!({"schema_version": 1, "grid": {"n1": 3, "n2": 3}, "output": {"dir": "configured"}}),
    );
    let target = dir.path().join("override");
    assert_eq!(code(&goursat(&["solve", s(&cfg)], Some(&target))), 0);
    assert!(target.join("run_u.csv").is_file());
    assert!(!dir.path().join("configured").exists());
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        json!({"schema_version": 1, "grid": {"n1": 2, "n2": 5}}),
        json!({"schema_version": 1, "domain": {"h1": -1.0, "h2": 1.0}, "grid": {"n1": 5, "n2": 5}}),
        json!({"schema_version": 2, "grid": {"n1": 5, "n2": 5}}),
        json!({"schema_version": 1, "grid": {"n1": 5, "n2": 5}, "unknown": 1}),
        json!({"schema_version": 1, "grid": {"n1": 5, "n2": 5}, "data": {"source": "classical_file", "path": "missing.json"}}),
        json!({"schema_version": 1, "grid": {"n1": 5, "n2": 5}, "data": {"source": "oracle"}}),
        json!({"schema_version": 1, "grid": {"n1": 5, "n2": 5}, "coefficients": {"preset": "constant", "values": [{"order": [2, 4], "value": 1.0}]}}),
        json!({"schema_version": 1, "grid": {"n1": 5, "n2": 5}, "p": 0.5}),
    ];
    for (k, c) in cases.iter().enumerate() {
        let cfg = write_json(dir.path(), &format!("bad{k}.json"), c);
        let o = goursat(&["solve", s(&cfg)], Some(&dir.path().join("o")));
        assert_eq!(code(&o), 2, "case {k}: {}", stdout(&o));
    }
    assert_eq!(
        code(&goursat(
            &["solve", s(&dir.path().join("absent.json"))],
            None
        )),
        2
    );
    std::fs::write(dir.path().join("garbled.json"), "{ not json").unwrap();
    assert_eq!(
        code(&goursat(
            &["solve", s(&dir.path().join("garbled.json"))],
            None
        )),
        2
    );
}

#[test]
fn non_convergence_exits_3_with_history() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_json(
        dir.path(),
        "nc.json",
        &json!({
            "schema_version": 1,
            "grid": {"n1": 9, "n2": 9},
            "coefficients": {"preset": "constant", "values": [{"order": [0, 0], "value": 1.0}]},
            "rhs": {"source": "inline", "value": 1.0},
            "solver": {"max_iterations": 1}
        }),
    );
    let o = goursat(&["solve", s(&cfg)], None);
    assert_eq!(code(&o), 3);
    let report = std::fs::read_to_string(dir.path().join("out/run_report.txt")).unwrap();
    assert!(report.contains("status: failed"));
    assert!(report.contains("residual history:\n     1 "));
}

#[test]
fn io_failure_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let cfg = write_json(
        dir.path(),
        "z.json",
        &json!({"schema_version": 1, "grid": {"n1": 3, "n2": 3}}),
    );
    assert_eq!(
        code(&goursat(&["solve", s(&cfg)], Some(&blocker.join("sub")))),
        4
    );
}

#[test]
fn inline_data_and_table_coefficients() {
    let dir = tempfile::tempdir().unwrap();
    let grid = Grid2D::square(1.0, 5).unwrap();
    let table = goursat_core::field_grid::Field2D::from_fn(grid, |x1, x2| 0.5 + x1 * x2);
    std::fs::write(
        dir.path().join("a00.csv"),
        goursat_cli::io::field_csv(&table),
    )
    .unwrap();
    let cfg = write_json(
        dir.path(),
        "inline.json",
        &json!({
            "schema_version": 1,
            "grid": {"n1": 5, "n2": 5},
            "coefficients": {"preset": "table", "entries": [{"order": [0, 0], "path": "a00.csv"}]},
            "data": {"source": "inline", "corner": [[1, 0, 0, 0], [0, 0, 0, 0]], "edge_x1": [0.5, [0, 0, 0, 0, 1], {"poly": [0, 1]}, 0], "edge_x2": [{"poly": [1, 0, 1]}, 0]},
            "rhs": {"source": "inline", "value": {"poly": [[0, 1], [1]]}},
            "output": {"jet_orders": [[2, 0], [2, 1], [2, 2], [0, 4]]}
        }),
    );
    let o = goursat(&["solve", s(&cfg)], None);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let out = dir.path().join("out");
    let row0 = |f: &str| -> Vec<f64> { csv_values(&out.join(f)).into_iter().step_by(5).collect() };
    let col0 = |f: &str| -> Vec<f64> { csv_values(&out.join(f))[..5].to_vec() };
    assert_eq!(row0("run_d20.csv"), vec![0.5; 5]);
    assert_eq!(row0("run_d21.csv"), vec![0.0, 0.0, 0.0, 0.0, 1.0]);
    assert_eq!(row0("run_d22.csv"), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    assert_eq!(col0("run_d04.csv"), vec![1.0, 1.0625, 1.25, 1.5625, 2.0]);
    assert_eq!(csv_values(&out.join("run_u.csv"))[0], 1.0);
    let report = std::fs::read_to_string(out.join("run_report.txt")).unwrap();
    assert!(report.contains("a_00  L_p(G)"));
}

fn nc_fixture(grid: Grid2D<f64>) -> NonClassicalData<f64> {
    NonClassicalData::new(
        [[0.3, -0.2, 0.7, 0.1], [1.0, 0.25, -0.5, 0.125]],
        std::array::from_fn(|j| {
            Field1D::from_fn(grid.g1, move |x| (j as f64 + 1.0) * x * x - 0.5 * x)
        }),
        std::array::from_fn(|i| Field1D::from_fn(grid.g2, move |x| x.powi(3) - i as f64)),
    )
    .unwrap()
}

#[test]
fn convert_round_trip_and_agreement() {
    let dir = tempfile::tempdir().unwrap();
    let grid = Grid2D::square(1.0, 9).unwrap();
    let nc_path = dir.path().join("nc.json");
    let doc = BoundaryDocument::from_nonclassical(&nc_fixture(grid), &[]);
    std::fs::write(&nc_path, doc.to_json()).unwrap();
    let c_path = dir.path().join("c.json");
    let back = dir.path().join("nc2.json");
    assert_eq!(
        code(&goursat(
            &["convert", "--to", "classical", s(&nc_path), s(&c_path)],
            None
        )),
        0
    );
    assert_eq!(
        code(&goursat(
            &["convert", "--to", "nonclassical", s(&c_path), s(&back)],
            None
        )),
        0
    );
    let a = BoundaryDocument::from_json(&std::fs::read_to_string(&nc_path).unwrap())
        .unwrap()
        .into_nonclassical()
        .unwrap();
    let b = BoundaryDocument::from_json(&std::fs::read_to_string(&back).unwrap())
        .unwrap()
        .into_nonclassical()
        .unwrap();
    assert!(a.max_abs_diff(&b) <= 1e-13);

    let o = goursat(&["check-agreement", s(&c_path)], None);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with('r')).count(), 8);
    assert!(text.contains("PASS"));
    assert_eq!(code(&goursat(&["check-agreement", s(&nc_path)], None)), 0);
}

#[test]
fn convert_zero_gives_zero() {
    let dir = tempfile::tempdir().unwrap();
    let grid = Grid2D::square(1.0, 5).unwrap();
    let nc_path = dir.path().join("nc.json");
    std::fs::write(
        &nc_path,
        BoundaryDocument::from_nonclassical(&NonClassicalData::zeros(grid), &[]).to_json(),
    )
    .unwrap();
    let c_path = dir.path().join("c.json");
    assert_eq!(
        code(&goursat(
            &["convert", "--to", "classical", s(&nc_path), s(&c_path)],
            None
        )),
        0
    );
    let c = BoundaryDocument::from_json(&std::fs::read_to_string(&c_path).unwrap())
        .unwrap()
        .into_classical()
        .unwrap();
    assert_eq!(c, goursat_core::boundary_data::ClassicalData::zeros(grid));
    let o = goursat(&["check-agreement", s(&c_path), "--tol", "0"], None);
    assert_eq!(code(&o), 0);
}

#[test]
fn oracle_classical_file_converts_to_oracle_traces() {
    let dir = tempfile::tempdir().unwrap();
    let grid = Grid2D::square(1.0, 9).unwrap();
    let oracle = ManufacturedSolution::Poly(PolySolution::new(vec![
        vec![1.0, 0.5, 0.0, 2.0, 0.0, 1.0],
        vec![0.0, 1.0],
        vec![0.0, 0.0, 3.0],
    ]));
    let c_path = dir.path().join("c.json");
    std::fs::write(
        &c_path,
        BoundaryDocument::from_classical(&oracle.classical_data(&grid)).to_json(),
    )
    .unwrap();
    let nc_path = dir.path().join("nc.json");
    let o = goursat(
        &["convert", "--to", "nonclassical", s(&c_path), s(&nc_path)],
        None,
    );
    assert_eq!(code(&o), 0);
    assert!(!stdout(&o).contains("warning"));
    let nc = BoundaryDocument::from_json(&std::fs::read_to_string(&nc_path).unwrap())
        .unwrap()
        .into_nonclassical()
        .unwrap();
    assert!(nc.max_abs_diff(&oracle.nonclassical_data(&grid)) <= 1e-13);
}

#[test]
fn offset_phi_fails_agreement_and_warns_on_convert() {
    let dir = tempfile::tempdir().unwrap();
    let grid = Grid2D::square(1.0, 5).unwrap();
    let mut c = to_classical(&nc_fixture(grid));
    c.perturb_phi(0, 0, 1.0);
    let c_path = dir.path().join("c.json");
    std::fs::write(&c_path, BoundaryDocument::from_classical(&c).to_json()).unwrap();
    let o = goursat(&["check-agreement", s(&c_path)], None);
    assert_eq!(code(&o), 1);
    let text = stdout(&o);
    let r1: f64 = text
        .lines()
        .next()
        .unwrap()
        .rsplit(' ')
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!((r1 - 1.0).abs() <= 1e-12, "{text}");
    assert!(text.contains("FAIL"));

    let nc_path = dir.path().join("nc.json");
    let o = goursat(
        &["convert", "--to", "nonclassical", s(&c_path), s(&nc_path)],
        None,
    );
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("warning"));
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&nc_path).unwrap()).unwrap();
    assert_eq!(written["warnings"].as_array().unwrap().len(), 1);
}

#[test]
fn schema_violations_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_json(
        dir.path(),
        "bad.json",
        &json!({"kind": "classical", "schema_version": 1}),
    );
    let out = dir.path().join("out.json");
    assert_eq!(
        code(&goursat(
            &["convert", "--to", "nonclassical", s(&bad), s(&out)],
            None
        )),
        2
    );
    assert_eq!(code(&goursat(&["check-agreement", s(&bad)], None)), 2);
    assert_eq!(
        code(&goursat(
            &["check-agreement", s(&dir.path().join("nope.json"))],
            None
        )),
        2
    );
    let grid = Grid2D::square(1.0, 5).unwrap();
    let nc_path = dir.path().join("nc.json");
    std::fs::write(
        &nc_path,
        BoundaryDocument::from_nonclassical(&NonClassicalData::zeros(grid), &[]).to_json(),
    )
    .unwrap();
    assert_eq!(
        code(&goursat(
            &["convert", "--to", "nonclassical", s(&nc_path), s(&out)],
            None
        )),
        2
    );
    assert_eq!(
        code(&goursat(
            &["convert", "--to", "sideways", s(&nc_path), s(&out)],
            None
        )),
        2
    );
    let unwritable = dir.path().join("missing_dir/out.json");
    assert_eq!(
        code(&goursat(
            &["convert", "--to", "classical", s(&nc_path), s(&unwritable)],
            None
        )),
        2
    );
}

fn trig_study(grid_sizes: Value, min_order: f64) -> Value {
    json!({
        "schema_version": 1,
        "grid": {"n1": 17, "n2": 17},
        "coefficients": {"preset": "constant", "values": [{"order": [0, 0], "value": 1.0}, {"order": [1, 2], "value": 1.0}]},
        "oracle": {"kind": "trig"},
        "data": {"source": "oracle"},
        "rhs": {"source": "oracle"},
        "study": {"grid_sizes": grid_sizes, "min_order": min_order, "max_order": 2.2}
    })
}

#[test]
fn convergence_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let good = write_json(
        dir.path(),
        "good.json",
        &trig_study(json!([17, 33, 65]), 1.8),
    );
    let o = goursat(&["convergence", s(&good)], Some(&dir.path().join("good")));
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let csv = std::fs::read_to_string(dir.path().join("good/run_convergence.csv")).unwrap();
    assert!(csv.starts_with("nodes,h,sup_error,lp_error,order\n"));
    assert_eq!(csv.lines().count(), 4);

    let strict = write_json(
        dir.path(),
        "strict.json",
        &trig_study(json!([17, 33, 65]), 3.0),
    );
    let o = goursat(
        &["convergence", s(&strict)],
        Some(&dir.path().join("strict")),
    );
    assert_eq!(code(&o), 1);
    assert_eq!(
        std::fs::read_to_string(dir.path().join("strict/run_convergence.csv")).unwrap(),
        csv
    );

    let single = write_json(dir.path(), "single.json", &trig_study(json!([17]), 1.8));
    let o = goursat(
        &["convergence", s(&single)],
        Some(&dir.path().join("single")),
    );
    assert_eq!(code(&o), 0);
    let csv = std::fs::read_to_string(dir.path().join("single/run_convergence.csv")).unwrap();
    assert!(csv.starts_with("nodes,h,sup_error,lp_error\n"));

    let uneven = write_json(dir.path(), "uneven.json", &trig_study(json!([17, 30]), 1.8));
    assert_eq!(
        code(&goursat(
            &["convergence", s(&uneven)],
            Some(&dir.path().join("uneven"))
        )),
        2
    );
    let no_study = write_json(
        dir.path(),
        "nostudy.json",
        &json!({"schema_version": 1, "oracle": {"kind": "trig"}}),
    );
    assert_eq!(
        code(&goursat(
            &["convergence", s(&no_study)],
            Some(&dir.path().join("x"))
        )),
        2
    );
}

#[test]
fn mms_single_and_multi_level() {
    let dir = tempfile::tempdir().unwrap();
    let multi = write_json(dir.path(), "multi.json", &trig_study(json!([17, 33]), 1.8));
    let o = goursat(&["mms", s(&multi)], Some(&dir.path().join("multi")));
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let report = std::fs::read_to_string(dir.path().join("multi/run_mms_report.txt")).unwrap();
    assert_eq!(report.matches("oracle errors").count(), 2);

    let single = write_json(dir.path(), "single.json", &trig_study(json!([]), 1.8));
    let o = goursat(&["mms", s(&single)], Some(&dir.path().join("single")));
    assert_eq!(code(&o), 0);
    let csv = std::fs::read_to_string(dir.path().join("single/run_mms.csv")).unwrap();
    assert!(csv.starts_with("nodes,h,sup_error,lp_error\n"));
    assert_eq!(csv.lines().count(), 2);

    let mut tight = trig_study(json!([]), 1.8);
    tight["study"]["max_error"] = json!(1e-12);
    let tight = write_json(dir.path(), "tight.json", &tight);
    assert_eq!(
        code(&goursat(
            &["mms", s(&tight)],
            Some(&dir.path().join("tight"))
        )),
        1
    );

    let mut fail = trig_study(json!([17]), 1.8);
    fail["coefficients"] =
        json!({"preset": "constant", "values": [{"order": [0, 0], "value": 1.0}]});
    fail["solver"] = json!({"max_iterations": 1});
    let fail = write_json(dir.path(), "fail.json", &fail);
    assert_eq!(
        code(&goursat(&["mms", s(&fail)], Some(&dir.path().join("fail")))),
        3
    );
    assert!(dir.path().join("fail/run_mms.csv").is_file());
}

#[test]
fn self_convergence_reference_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = json!({
        "schema_version": 1,
        "coefficients": {"preset": "step", "jump": 0.5, "left": 1.0, "right": 3.0},
        "oracle": {"kind": "poly", "coefficients": [[0.0, 1.0], [1.0, 0.0, 1.0]]},
        "solver": {"method": "marching"},
        "study": {"grid_sizes": [9, 17], "min_order": 0.9, "reference": {"self_convergence": {"nodes": 33}}, "reference_cache": "ref33.csv"}
    });
    let path = write_json(dir.path(), "sc.json", &cfg);
    let first = goursat(&["convergence", s(&path)], Some(&dir.path().join("a")));
    assert_eq!(code(&first), 0, "{}", stdout(&first));
    assert!(dir.path().join("ref33.csv").is_file());
    let second = goursat(&["convergence", s(&path)], Some(&dir.path().join("b")));
    assert_eq!(code(&second), 0);
    assert_eq!(
        std::fs::read(dir.path().join("a/run_convergence.csv")).unwrap(),
        std::fs::read(dir.path().join("b/run_convergence.csv")).unwrap()
    );
}

#[test]
fn shipped_configs_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        goursat_cli::LoadedConfig::load(&path)
            .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    }
}
