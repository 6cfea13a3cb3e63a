use std::path::PathBuf;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use interpcert::mmio::{read_matrix_market, write_matrix_market};
use interpcert::{ComplexMatrix, C64};
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_interpcert"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write_matrix(name: &str, a: &ComplexMatrix) -> String {
    let path = scratch(name);
    write_matrix_market(&path, a).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn interp_of_zero_scalar_is_one() {
    let input = scratch("zero.mtx");
    std::fs::write(&input, "%%MatrixMarket matrix array real general\n1 1\n0\n").unwrap();
    let out_path = scratch("zero_out.mtx");
    let out = run(&[
        "interp",
        "--matrix",
        input.to_str().unwrap(),
        "--nodes",
        "0",
        "--function",
        "exp",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    stdout_json(&out);
    let p = read_matrix_market(&out_path).unwrap();
    assert_eq!(p.shape(), (1, 1));
    assert_eq!(p[(0, 0)], C64::new(1.0, 0.0));
}

#[test]
fn interp_at_diagonal_nodes_is_exact() {
    let diag = [
        C64::new(-0.5, 1.0),
        C64::new(0.25, 0.0),
        C64::new(-1.0, -2.0),
    ];
    let input = write_matrix("diag.mtx", &ComplexMatrix::from_diag(&diag).unwrap());
    let out = run(&[
        "interp",
        "--matrix",
        &input,
        "--nodes",
        "-0.5+1j, 0.25, -1-2j",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let p = interpcert::mmio::read_matrix_market_str(std::str::from_utf8(&out.stdout).unwrap())
        .unwrap();
    for i in 0..3 {
        for j in 0..3 {
            let want = if i == j {
                diag[i].exp()
            } else {
                C64::new(0.0, 0.0)
            };
            assert!(
                (p[(i, j)] - want).norm() <= 1e-10,
                "({i},{j}): {}",
                p[(i, j)]
            );
        }
    }
}

#[test]
fn interp_reports_true_error_against_a_reference() {
    let a = ComplexMatrix::from_diag(&[C64::new(0.5, 0.0)]).unwrap();
    let input = write_matrix("half.mtx", &a);
    let reference = write_matrix(
        "half_exp.mtx",
        &ComplexMatrix::from_diag(&[C64::new(0.5f64.exp(), 0.0)]).unwrap(),
    );
    let out = run(&[
        "interp",
        "--matrix",
        &input,
        "--nodes",
        "0, 1",
        "--reference",
        &reference,
        "--out",
        scratch("half_p.mtx").to_str().unwrap(),
    ]);
    let v = stdout_json(&out);
    let want = (0.5f64.exp() - (1.0 + (std::f64::consts::E - 1.0) / 2.0)).abs();
    let got = v["true_error"].as_f64().unwrap();
    assert!((got - want).abs() <= 1e-14, "{got} vs {want}");
}

#[test]
fn missing_file_exits_with_usage_code() {
    let out = run(&[
        "interp",
        "--matrix",
        "/nonexistent/input.mtx",
        "--nodes",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("/nonexistent/input.mtx"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn malformed_nodes_exit_with_usage_code() {
    let input = write_matrix("one.mtx", &ComplexMatrix::identity(1).unwrap());
    let out = run(&["interp", "--matrix", &input, "--nodes", "1+"]);
    assert_eq!(out.status.code(), Some(2));
}

fn report_for<'a>(v: &'a Value, method: &str) -> &'a Value {
    v.as_array()
        .unwrap()
        .iter()
        .find(|e| e["method"] == method)
        .unwrap_or_else(|| panic!("no entry for {method}"))
}

#[test]
fn bound_dispatches_every_method_for_a_normal_matrix() {
    let a = ComplexMatrix::from_diag(&[
        C64::new(-0.5, 0.3),
        C64::new(-0.2, -1.0),
        C64::new(-0.9, 0.0),
    ])
    .unwrap();
    let input = write_matrix("normal.mtx", &a);
    let v = stdout_json(&run(&[
        "bound",
        "--matrix",
        &input,
        "--nodes",
        "0, -1, -0.5+pi*j, -0.5-pi*j",
        "--t-count",
        "21",
        "--per-edge",
        "8",
    ]));
    let entries = v.as_array().unwrap();
    for m in ["theorem1", "cor3", "cor4", "cor5", "cor6"] {
        let e = report_for(&v, m);
        assert!(e["value"].as_f64().unwrap() > 0.0, "{m}: {e}");
    }
    let tightest: Vec<_> = entries.iter().filter(|e| e["tightest"] == true).collect();
    assert!(!tightest.is_empty());
    let min = entries
        .iter()
        .map(|e| e["value"].as_f64().unwrap())
        .fold(f64::INFINITY, f64::min);
    assert!(tightest.iter().all(|e| e["value"].as_f64().unwrap() == min));
    let c3 = report_for(&v, "cor3")["value"].as_f64().unwrap();
    let c4 = report_for(&v, "cor4")["value"].as_f64().unwrap();
    assert!(c3 <= c4);
}

#[test]
fn cor5_on_non_normal_input_is_a_per_method_error() {
    let a = ComplexMatrix::from_rows(&[
        vec![C64::new(-0.5, 0.0), C64::new(1.0, 0.0)],
        vec![C64::new(0.0, 0.0), C64::new(-0.2, 0.0)],
    ])
    .unwrap();
    let input = write_matrix("jordanish.mtx", &a);
    let out = run(&[
        "bound",
        "--matrix",
        &input,
        "--nodes",
        "0, -1",
        "--methods",
        "cor3,cor4,cor5",
    ]);
    let v = stdout_json(&out);
    let c5 = report_for(&v, "cor5");
    assert!(c5["error"].as_str().unwrap().contains("normal"), "{c5}");
    assert!(c5.get("value").is_none());
    let c3 = report_for(&v, "cor3")["value"].as_f64().unwrap();
    let c4 = report_for(&v, "cor4")["value"].as_f64().unwrap();
    assert!(c3 <= c4);
}

#[test]
fn only_failing_methods_exit_with_computation_code() {
    let a = ComplexMatrix::from_rows(&[
        vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
        vec![C64::new(0.0, 0.0), C64::new(0.0, 0.0)],
    ])
    .unwrap();
    let input = write_matrix("nilpotent.mtx", &a);
    let out = run(&[
        "bound",
        "--matrix",
        &input,
        "--nodes",
        "0",
        "--methods",
        "cor5",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report_for(&v, "cor5")["error"].is_string());
}

#[test]
fn polynomial_function_skips_exponential_methods() {
    let input = write_matrix("eye2.mtx", &ComplexMatrix::identity(2).unwrap());
    let v = stdout_json(&run(&[
        "bound",
        "--matrix",
        &input,
        "--nodes",
        "0, 1, 2",
        "--function",
        "poly:1,0,0,1",
        "--t-count",
        "11",
        "--per-edge",
        "4",
    ]));
    let methods: Vec<&str> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["method"].as_str().unwrap())
        .collect();
    assert_eq!(methods, ["theorem1"]);
}

#[test]
fn cheb_demo_reproduces_the_quoted_values() {
    let start = Instant::now();
    let v = stdout_json(&run(&["cheb-demo", "10", "--format", "json"]));
    assert!(start.elapsed() < Duration::from_secs(1));
    assert_eq!(
        format!("{:.2e}", v["closed_form"].as_f64().unwrap()),
        "1.46e-9"
    );
    assert_eq!(
        format!("{:.1e}", v["sharp_unit"].as_f64().unwrap()),
        "6.0e-10"
    );
    let plain = run(&["cheb-demo"]);
    let text = String::from_utf8(plain.stdout).unwrap();
    assert!(
        text.contains("1.4631e-9") && text.contains("6.0271e-10"),
        "{text}"
    );
    let one = stdout_json(&run(&["cheb-demo", "1", "--format", "json"]));
    assert!((one["closed_form"].as_f64().unwrap() - std::f64::consts::E).abs() < 1e-15);
}

#[test]
fn tiny_experiment_is_fast() {
    let start = Instant::now();
    let out = run(&["experiment", "--trials", "1", "--dim", "2"]);
    assert!(
        start.elapsed() < Duration::from_secs(1),
        "{:?}",
        start.elapsed()
    );
    let v = stdout_json(&out);
    assert_eq!(v["stats"]["trials"], 1);
    assert!(v["stats"]["kappa_mean_kept"].is_number() || v["stats"]["kappa_mean_kept"].is_null());
    assert!(v["stats"]["kappa_mean_all"].is_number());
}

#[test]
fn experiment_csv_is_reproducible() {
    let go = |name: &str| {
        let csv = scratch(name);
        let json = scratch(&format!("{name}.json"));
        let out = run(&[
            "experiment",
            "--trials",
            "3",
            "--dim",
            "6",
            "--seed",
            "77",
            "--out-csv",
            csv.to_str().unwrap(),
            "--out-json",
            json.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        (std::fs::read(csv).unwrap(), std::fs::read(json).unwrap())
    };
    let (csv_a, json_a) = go("run_a.csv");
    let (csv_b, json_b) = go("run_b.csv");
    assert_eq!(csv_a, csv_b);
    assert_eq!(json_a, json_b);
    let text = String::from_utf8(csv_a).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "trial,e0,e1,ratio,kappa,excluded"
    );
    assert_eq!(text.lines().count(), 4);
    let stats: Value = serde_json::from_slice(&json_a).unwrap();
    for key in ["kappa_mean_kept", "kappa_mean_all", "excluded_count"] {
        assert!(stats["stats"].get(key).is_some(), "missing {key}");
    }
}

#[test]
fn experiment_rect_and_curve_outputs() {
    let curve = scratch("curve.csv");
    let out = run(&[
        "experiment",
        "--trials",
        "1",
        "--dim",
        "3",
        "--t-count",
        "11",
        "--rect",
        "-1,0,-pi,pi",
        "--curve-csv",
        curve.to_str().unwrap(),
    ]);
    stdout_json(&out);
    let text = std::fs::read_to_string(curve).unwrap();
    assert_eq!(text.lines().next().unwrap(), "t,norm");
    assert_eq!(text.lines().count(), 12);
    let bad = run(&[
        "experiment",
        "--rect",
        "0,-1,0,1",
        "--trials",
        "1",
        "--dim",
        "2",
    ]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn expm_and_schur_round_trip_through_files() {
    let a = ComplexMatrix::from_rows(&[
        vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
        vec![C64::new(-1.0, 0.0), C64::new(0.0, 0.0)],
    ])
    .unwrap();
    let input = write_matrix("rot.mtx", &a);
    let out_path = scratch("rot_exp.mtx");
    let out = run(&[
        "expm",
        "--matrix",
        &input,
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let e = read_matrix_market(&out_path).unwrap();
    let (c, s) = (1f64.cos(), 1f64.sin());
    let want = [[c, s], [-s, c]];
    for i in 0..2 {
        for j in 0..2 {
            assert!((e[(i, j)] - C64::new(want[i][j], 0.0)).norm() < 1e-14);
        }
    }

    let q = scratch("rot_q.mtx");
    let t = scratch("rot_t.mtx");
    let v = stdout_json(&run(&[
        "schur",
        "--matrix",
        &input,
        "--q-out",
        q.to_str().unwrap(),
        "--t-out",
        t.to_str().unwrap(),
    ]));
    let mut eigs: Vec<f64> = v["eigenvalues"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e[1].as_f64().unwrap())
        .collect();
    eigs.sort_by(f64::total_cmp);
    assert!((eigs[0] + 1.0).abs() < 1e-12 && (eigs[1] - 1.0).abs() < 1e-12);
    let (q, t) = (
        read_matrix_market(&q).unwrap(),
        read_matrix_market(&t).unwrap(),
    );
    assert!(t.is_upper_triangular());
    let back = q.adjoint().matmul(&t).unwrap().matmul(&q).unwrap();
    let alt = q.matmul(&t).unwrap().matmul(&q.adjoint()).unwrap();
    let err = back
        .sub(&a)
        .unwrap()
        .frobenius_norm()
        .min(alt.sub(&a).unwrap().frobenius_norm());
    assert!(err < 1e-12, "{err:e}");
}

#[test]
fn single_thread_flag_gives_the_same_bound() {
    let a = ComplexMatrix::from_rows(&[
        vec![C64::new(-0.3, 0.2), C64::new(0.4, 0.0)],
        vec![C64::new(0.1, -0.5), C64::new(-0.8, 0.0)],
    ])
    .unwrap();
    let input = write_matrix("two.mtx", &a);
    let args = [
        "bound",
        "--matrix",
        &input,
        "--nodes",
        "rect16",
        "--t-count",
        "21",
        "--per-edge",
        "4",
    ];
    let serial = bin().arg("--threads").arg("1").args(args).output().unwrap();
    let parallel = bin().arg("--threads").arg("3").args(args).output().unwrap();
    assert!(serial.status.success());
    assert_eq!(serial.stdout, parallel.stdout);
}
