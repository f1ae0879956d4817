//! End-to-end checks of the `sensebench` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn sensebench(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sensebench"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn assert_success(output: &Output) {
    assert!(
        output.status.success(),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&output.stderr)
    );
}

#[test]
fn gen_corpus_then_run_produces_stable_csvs() {
    let dir = tempfile::tempdir().unwrap();
    let out = sensebench(
        &[
            "gen-corpus",
            "--docs",
            "2",
            "--words",
            "12",
            "--max-senses",
            "4",
            "--sentence-length",
            "5",
            "--seed",
            "7",
            "--out",
            "corpus.txt",
        ],
        dir.path(),
    );
    assert_success(&out);

    let run = |out_dir: &str, jobs: &str| {
        let out = sensebench(
            &[
                "run",
                "--corpus",
                "corpus.txt",
                "--budget",
                "200",
                "--runs",
                "5",
                "--seed",
                "9",
                "--algo",
                "sa",
                "--algo",
                "csa",
                "--preset-table",
                "--jobs",
                jobs,
                "--out",
                out_dir,
            ],
            dir.path(),
        );
        assert_success(&out);
    };
    run("out1", "1");
    run("out2", "2");

    for name in [
        "sa_200.csv",
        "csa_200.csv",
        "sa_200_final.csv",
        "csa_200_final.csv",
        "summary.csv",
    ] {
        let a = fs::read(dir.path().join("out1").join(name)).unwrap();
        let b = fs::read(dir.path().join("out2").join(name)).unwrap();
        assert!(!a.is_empty());
        assert_eq!(a, b, "{name} differs across job counts");
    }

    let curve = fs::read_to_string(dir.path().join("out1/sa_200.csv")).unwrap();
    let mut lines = curve.lines();
    assert_eq!(
        lines.next().unwrap(),
        "algorithm,budget,call,mean_f1,stddev_f1"
    );
    assert_eq!(curve.lines().count(), 201);
}

#[test]
fn run_accepts_a_config_file_with_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    assert_success(&sensebench(
        &["gen-corpus", "--words", "10", "--max-senses", "3", "--out", "c.txt"],
        dir.path(),
    ));
    fs::write(
        dir.path().join("exp.conf"),
        "# experiment\n\
         corpus = c.txt\n\
         algos = csa\n\
         budgets = 50\n\
         runs = 3\n\
         seed = 4\n\
         out = from_config\n\
         csa.nests = 2\n\
         csa.destroyed = 0\n\
         csa.levy_location = 0\n\
         csa.levy_scale = 1\n",
    )
    .unwrap();
    // Config alone.
    assert_success(&sensebench(&["run", "exp.conf"], dir.path()));
    assert!(dir.path().join("from_config/csa_50.csv").exists());
    // Flag overrides the output directory.
    assert_success(&sensebench(&["run", "exp.conf", "--out", "flagged"], dir.path()));
    assert!(dir.path().join("flagged/csa_50.csv").exists());
}

#[test]
fn run_without_params_or_preset_fails() {
    let dir = tempfile::tempdir().unwrap();
    assert_success(&sensebench(
        &["gen-corpus", "--words", "8", "--out", "c.txt"],
        dir.path(),
    ));
    let out = sensebench(
        &[
            "run", "--corpus", "c.txt", "--budget", "200", "--algo", "sa", "--out", "x",
        ],
        dir.path(),
    );
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("error:"), "stderr: {stderr}");
}

#[test]
fn corpus_budget_scope_flag_is_wired_through() {
    let dir = tempfile::tempdir().unwrap();
    assert_success(&sensebench(
        &[
            "gen-corpus", "--docs", "3", "--words", "10", "--max-senses", "3", "--out", "c.txt",
        ],
        dir.path(),
    ));
    let out = sensebench(
        &[
            "run",
            "--corpus",
            "c.txt",
            "--budget",
            "200",
            "--runs",
            "4",
            "--algo",
            "sa",
            "--preset-table",
            "--budget-scope",
            "corpus",
            "--out",
            "shared",
        ],
        dir.path(),
    );
    assert_success(&out);
    // Under a shared budget each run's total calls stay at or below 200 even
    // across 3 documents.
    let finals = fs::read_to_string(dir.path().join("shared/sa_200_final.csv")).unwrap();
    for line in finals.lines().skip(1) {
        let calls: usize = line.split(',').nth(4).unwrap().parse().unwrap();
        assert!(calls <= 200, "run used {calls} calls");
    }
    let bad = sensebench(
        &[
            "run", "--corpus", "c.txt", "--budget", "200", "--algo", "sa", "--preset-table",
            "--budget-scope", "sideways", "--out", "x",
        ],
        dir.path(),
    );
    assert!(!bad.status.success());
}

#[test]
fn score_reports_per_document_f1() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("c.txt"),
        "@doc a\nx 2 0 1\ny 2 0 0\n@doc b\nz 3 0 2\n",
    )
    .unwrap();
    fs::write(dir.path().join("assign.txt"), "# guess\n1 0\n0\n").unwrap();
    let out = sensebench(
        &[
            "score",
            "--corpus",
            "c.txt",
            "--assignments",
            "assign.txt",
        ],
        dir.path(),
    );
    assert_success(&out);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("a 1.000000"), "stdout: {stdout}");
    assert!(stdout.contains("b 0.000000"), "stdout: {stdout}");
    assert!(stdout.contains("mean 0.500000"), "stdout: {stdout}");
}

#[test]
fn compare_runs_the_u_test_between_finals() {
    let dir = tempfile::tempdir().unwrap();
    let write_finals = |name: &str, values: &[f64]| {
        let mut text = String::from("algorithm,budget,run,final_f1,calls\n");
        for (i, v) in values.iter().enumerate() {
            text.push_str(&format!("sa,10,{i},{v:.6},10\n"));
        }
        fs::write(dir.path().join(name), text).unwrap();
    };
    write_finals("a.csv", &[0.1, 0.2, 0.15, 0.12, 0.18, 0.11, 0.19, 0.14]);
    write_finals("b.csv", &[0.8, 0.9, 0.85, 0.82, 0.88, 0.81, 0.89, 0.84]);
    let out = sensebench(
        &["compare", "--a", "a.csv", "--b", "b.csv", "--alpha", "0.05"],
        dir.path(),
    );
    assert_success(&out);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("u 0.000000"), "stdout: {stdout}");
    assert!(stdout.contains("significant at alpha 0.05: yes"), "stdout: {stdout}");
}

#[test]
fn tune_writes_report_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    assert_success(&sensebench(
        &[
            "gen-corpus",
            "--words",
            "12",
            "--max-senses",
            "3",
            "--sentence-length",
            "4",
            "--out",
            "c.txt",
        ],
        dir.path(),
    ));
    let out = sensebench(
        &[
            "tune",
            "--corpus",
            "c.txt",
            "--algo",
            "csa",
            "--budget",
            "40",
            "--runs-per-candidate",
            "4",
            "--meta-iterations",
            "3",
            "--meta-nests",
            "2",
            "--tuning-sentences",
            "2",
            "--seed",
            "3",
            "--out",
            "tuned",
        ],
        dir.path(),
    );
    assert_success(&out);
    let report = fs::read_to_string(dir.path().join("tuned/tune_report.txt")).unwrap();
    assert!(report.contains("algorithm: csa"), "report: {report}");
    assert!(report.contains("mean_f1:"), "report: {report}");
    let csv = fs::read_to_string(dir.path().join("tuned/tune_result.csv")).unwrap();
    assert!(csv.starts_with("key,value\n"), "csv: {csv}");
    assert!(csv.contains("levy_scale,"), "csv: {csv}");
}

#[test]
fn out_dir_env_variable_is_honored_but_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    assert_success(&sensebench(
        &["gen-corpus", "--words", "8", "--out", "c.txt"],
        dir.path(),
    ));
    let base_args = [
        "run",
        "--corpus",
        "c.txt",
        "--budget",
        "200",
        "--runs",
        "2",
        "--algo",
        "sa",
        "--preset-table",
    ];
    let out = Command::new(env!("CARGO_BIN_EXE_sensebench"))
        .args(base_args)
        .env("SENSEBENCH_OUT", "from_env")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_success(&out);
    assert!(dir.path().join("from_env/sa_200.csv").exists());

    let out = Command::new(env!("CARGO_BIN_EXE_sensebench"))
        .args(base_args)
        .args(["--out", "from_flag"])
        .env("SENSEBENCH_OUT", "ignored_env")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_success(&out);
    assert!(dir.path().join("from_flag/sa_200.csv").exists());
    assert!(!dir.path().join("ignored_env").exists());
}
