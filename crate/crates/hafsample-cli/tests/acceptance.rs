//! Acceptance: CLI determinism. Identical argv and seed must reproduce
//! byte-identical output files, including under `--threads 4`, and the
//! data must not depend on the thread count at all.

use std::path::Path;

fn run_to_file(args: &[&str], out: &Path) {
    let status = std::process::Command::new(env!("CARGO_BIN_EXE_hafsample"))
        .args(args)
        .arg("--out")
        .arg(out)
        .status()
        .expect("binary runs");
    assert!(status.success(), "command failed: {args:?}");
}

fn bytes(path: &Path) -> Vec<u8> {
    std::fs::read(path).expect("output written")
}

#[test]
fn criterion_11_cli_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let file = |name: &str| dir.path().join(name);

    // instance files used by clique/dist/sample
    let graph = file("planted.edges");
    let weights = file("planted.w");
    run_to_file(
        &["gen", "er", "--n", "12", "--p", "0.4", "--seed", "9"],
        &file("er.edges"),
    );
    let status = std::process::Command::new(env!("CARGO_BIN_EXE_hafsample"))
        .args([
            "gen",
            "planted",
            "--n",
            "16",
            "--p",
            "0.25",
            "--clique",
            "4",
            "--seed",
            "2",
            "--out-graph",
            graph.to_str().unwrap(),
            "--out-weights",
            weights.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());

    let er = file("er.edges").display().to_string();
    let densest: Vec<String> = [
        "densest",
        "--n",
        "14",
        "--k",
        "4",
        "--p",
        "0.3",
        "--graphs",
        "20",
        "--samples",
        "20",
        "--samplers",
        "qi,uniform,gbs",
        "--seed",
        "1",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let clique: Vec<String> = [
        "clique",
        "--graph",
        graph.to_str().unwrap(),
        "--weights",
        weights.to_str().unwrap(),
        "--samples",
        "50",
        "--iters",
        "0,2",
        "--seed",
        "1",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let dist: Vec<String> = ["dist", &er, "--k", "4", "--kind", "gbs"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let sample: Vec<String> = [
        "sample",
        &er,
        "--sampler",
        "qi",
        "--k",
        "4",
        "--count",
        "500",
        "--seed",
        "7",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();

    let mut all_ok = true;
    let mut details = Vec::new();
    for (name, argv) in [
        ("densest", densest),
        ("clique", clique),
        ("dist", dist),
        ("sample", sample),
    ] {
        let args: Vec<&str> = argv.iter().map(String::as_str).collect();

        let t1a = file(&format!("{name}.t1a.csv"));
        let t1b = file(&format!("{name}.t1b.csv"));
        let t4a = file(&format!("{name}.t4a.csv"));
        let t4b = file(&format!("{name}.t4b.csv"));
        run_to_file(&[&args[..], &["--threads", "1"]].concat(), &t1a);
        run_to_file(&[&args[..], &["--threads", "1"]].concat(), &t1b);
        run_to_file(&[&args[..], &["--threads", "4"]].concat(), &t4a);
        run_to_file(&[&args[..], &["--threads", "4"]].concat(), &t4b);

        let rerun_1 = bytes(&t1a) == bytes(&t1b);
        let rerun_4 = bytes(&t4a) == bytes(&t4b);
        let across = bytes(&t1a) == bytes(&t4a);
        all_ok &= rerun_1 && rerun_4 && across;
        details.push(format!(
            "{name}: rerun@1 {rerun_1}, rerun@4 {rerun_4}, 1-vs-4 {across}"
        ));
    }

    let detail = details.join("; ");
    let verdict = if all_ok { "PASS" } else { "FAIL" };
    println!("acceptance 11 (cli determinism): {verdict} — {detail}");
    assert!(all_ok, "acceptance criterion 11 failed: {detail}");
}
