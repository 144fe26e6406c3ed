use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ergm-lab"))
        .args(args)
        .env("ERGM_LAB_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn value<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")))
        .unwrap_or_else(|| panic!("no `{key}` in\n{text}"))
}

fn data_rows(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).skip(1).collect()
}

#[test]
fn header_echoes_version_command_and_seed() {
    let text = stdout(&["sample", "--beta1", "0.4", "--beta2", "0.2", "--n", "10", "--steps", "200", "--seed", "9"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], format!("# ergm-lab {}", env!("CARGO_PKG_VERSION")));
    assert_eq!(lines[1], "# command: ergm-lab sample --beta1 0.4 --beta2 0.2 --n 10 --steps 200 --seed 9");
    assert_eq!(lines[2], "# seed: 9");
    assert_eq!(lines[3], "step,edges,triangles,statistic");
}

#[test]
fn identical_commands_give_identical_bytes() {
    let args = ["estimate-z", "--beta1", "-0.45", "--beta2", "0.2", "--n", "5", "--samples", "20000", "--seed", "3"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let args = ["sample", "--beta1", "0.1", "--beta2", "0.3", "--n", "12", "--steps", "3000", "--seed", "4"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn phase_diagram_has_one_jump_row() {
    let text = stdout(&["phase-diagram", "--beta1", "-0.45", "--beta2", "0:2:200"]);
    assert!(text.contains("\nbeta2,u_star,psi,multiplicity\n"));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 201);
    let jumps: Vec<&&str> = rows.iter().filter(|r| r.split(',').nth(3) != Some("1")).collect();
    assert_eq!(jumps.len(), 1, "{jumps:?}");
    let betas: Vec<f64> = rows.iter().map(|r| r.split(',').next().unwrap().parse().unwrap()).collect();
    assert!(betas.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn phase_surface() {
    let text = stdout(&["phase-diagram", "--beta1", "-0.5:0.5:3", "--beta2", "0:1:4"]);
    assert!(text.contains("\nbeta1,beta2,u_star,psi,multiplicity\n"));
    assert!(data_rows(&text).len() >= 12);
}

#[test]
fn degeneracy_constants() {
    let text = stdout(&["degeneracy", "--beta1", "-5"]);
    let c1: f64 = value(&text, "c1").parse().unwrap();
    assert!((c1 - 0.0067).abs() < 0.0001);
    assert_eq!(value(&text, "c2"), "0.9");
    let text = stdout(&["degeneracy", "--beta1", "-5", "--beta2", "1"]);
    assert_eq!(value(&text, "regime"), "sparse");
}

#[test]
fn zero_model_has_half_log_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.txt");
    std::fs::write(&path, "# all coefficients zero\nedge 0\ntriangle 0\nstar:2 0\n").unwrap();
    let text = stdout(&["psi", "--model", path.to_str().unwrap()]);
    let psi: f64 = value(&text, "psi").parse().unwrap();
    assert!((psi - 0.5 * 2f64.ln()).abs() < 1e-14);
}

#[test]
fn output_file_and_graph_input() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.txt");
    std::fs::write(&graph, "4\n0 1\n1 2\n0 2\n2 3\n").unwrap();
    let out = dir.path().join("top.csv");
    let status = run(&[
        "top-contour",
        "--graph",
        graph.to_str().unwrap(),
        "--beta1",
        "-1:1:3",
        "--beta2",
        "0:1:2",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert!(status.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("# ergm-lab"));
    assert_eq!(data_rows(&text).len(), 6);
}

#[test]
fn estimators_report_key_values() {
    let text = stdout(&["estimate-z", "--beta1", "0.2", "--beta2", "0.1", "--n", "4", "--seed", "1"]);
    let est: f64 = value(&text, "log_estimate").parse().unwrap();
    let exact: f64 = value(&text, "log_exact").parse().unwrap();
    assert!((est - exact).abs() < 0.01 * exact.abs());
    let text = stdout(&[
        "estimate-z", "--method", "acceptance-ratio", "--beta1", "0.5", "--ref-beta1", "0", "--sampler", "metropolis",
        "--n", "4", "--samples", "50000",
    ]);
    assert_eq!(value(&text, "estimator"), "acceptance_ratio");
    let est: f64 = value(&text, "log_estimate").parse().unwrap();
    let exact: f64 = value(&text, "log_exact").parse().unwrap();
    assert!((est - exact).abs() < 0.05);
}

#[test]
fn spectral_and_extremal() {
    let text = stdout(&["spectral-check", "--beta", "0,1"]);
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 2);
    for row in rows {
        for field in row.split(',').skip(1) {
            assert!(field.parse::<f64>().unwrap() < 1e-10);
        }
    }
    let text = stdout(&["extremal", "--motif", "triangle", "--beta1", "0"]);
    assert_eq!(value(&text, "chromatic_number"), "3");
    let psi: f64 = value(&text, "psi_limit").parse().unwrap();
    assert_eq!(psi, 0.25 * 2f64.ln());
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(run(&["psi", "--model", "/definitely/missing.txt"]).status.code(), Some(1));
    assert_eq!(run(&["phase-diagram", "--beta1", "0", "--beta2", "2:0:5"]).status.code(), Some(1));
    // numeric guards
    let guard = run(&["sample", "--beta1", "-1", "--sampler", "metropolis", "--n", "5", "--steps", "10"]);
    assert_eq!(guard.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&guard.stderr).contains("complement"));
    assert_eq!(run(&["psi", "--beta1", "0.1", "--n", "9"]).status.code(), Some(2));
    assert_eq!(run(&["degeneracy", "--beta1", "0.5"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
