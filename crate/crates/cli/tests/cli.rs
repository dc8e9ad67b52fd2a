use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn dominance(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dominance"))
        .args(args)
        .env_remove("DOMINANCE_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn line_value(text: &str, prefix: &str) -> String {
    text.lines()
        .find_map(|l| l.strip_prefix(prefix))
        .unwrap_or_else(|| panic!("no `{prefix}` line in:\n{text}"))
        .to_string()
}

const SUMMARY: [&str; 12] = [
    "--mean1", "1", "--sd1", "1", "--n1", "50", "--mean2", "1", "--sd2", "2", "--n2", "50",
];

#[test]
fn estimate_equal_means_crosses_at_common_mean() {
    let out = dominance(&[&["estimate"][..], &SUMMARY].concat());
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(line_value(&text, "plug-in estimate: "), "1");
    assert_eq!(line_value(&text, "series estimate: "), "1 (k = 48)");
    assert!(text.contains("arm 2 is stochastically larger on {x >= 1}"));
}

#[test]
fn estimate_with_zero_terms_returns_larger_sd_mean() {
    let out = dominance(&[
        "estimate", "--mean1", "0", "--sd1", "1", "--n1", "50", "--mean2", "1", "--sd2", "2", "--n2", "50", "--k", "0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(line_value(&stdout(&out), "series estimate: "), "0 (k = 0)");
}

#[test]
fn negative_means_are_accepted() {
    let out = dominance(&[
        "estimate", "--mean1", "-3", "--sd1", "1", "--n1", "30", "--mean2", "-1.5", "--sd2", "2", "--n2", "30",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn missing_flag_is_a_usage_error() {
    let out = dominance(&["estimate", "--mean1", "0", "--sd1", "1", "--n1", "50"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn equal_sds_exit_as_degenerate() {
    let out = dominance(&[
        "estimate", "--mean1", "0", "--sd1", "1", "--n1", "50", "--mean2", "1", "--sd2", "1", "--n2", "50",
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn invalid_values_exit_as_validation_errors() {
    let out = dominance(&[
        "estimate", "--mean1", "0", "--sd1", "0", "--n1", "50", "--mean2", "1", "--sd2", "2", "--n2", "50",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let out = dominance(&[&["estimate"][..], &SUMMARY, &["--k", "49"]].concat());
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn ci_is_reproducible_and_brackets_the_truth() {
    let args = [&["ci"][..], &SUMMARY, &["--seed", "11", "--b", "800"]].concat();
    let a = dominance(&args);
    let b = dominance(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let ci95 = line_value(&text, "95% CI: ");
    let (lo, hi) = ci95.trim_matches(|c| c == '[' || c == ']').split_once(", ").unwrap();
    let (lo, hi): (f64, f64) = (lo.parse().unwrap(), hi.parse().unwrap());
    assert!(lo < 1.0 && 1.0 < hi, "{ci95}");
    assert!(text.contains("90% CI: "));

    let other = dominance(&[&["ci"][..], &SUMMARY, &["--seed", "12", "--b", "800"]].concat());
    assert_ne!(other.stdout, a.stdout);
}

#[test]
fn ci_levels_select_reported_intervals() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("q.csv");
    let out = dominance(
        &[
            &["ci"][..],
            &SUMMARY,
            &[
                "--seed",
                "1",
                "--b",
                "200",
                "--levels",
                "0.95",
                "--csv",
                csv.to_str().unwrap(),
            ],
        ]
        .concat(),
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("95% CI: "));
    assert!(!text.contains("90% CI"));
    let table = fs::read_to_string(&csv).unwrap();
    let ps: Vec<&str> = table.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(ps, ["0.025", "0.5", "0.975"]);
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const SMOKE: &str =
    "series = changepoint\nns = 20\nmu_c = 1\ndeltas = -1, 1\nsigma_cs = 1\nalphas = 0.5\nm = 20\nb = 50\n";

#[test]
fn simulate_a_smoke_grid_is_byte_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "smoke.cfg", SMOKE);
    let mut outputs = Vec::new();
    for (run, threads) in [("r1", "1"), ("r2", "4")] {
        let out_dir = dir.path().join(run);
        let out = dominance(&[
            "simulate-a",
            "--config",
            &cfg,
            "--out-dir",
            out_dir.to_str().unwrap(),
            "--seed",
            "5",
            "--parallelism",
            threads,
        ]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let csv = fs::read(out_dir.join("changepoint.csv")).unwrap();
        let manifest = fs::read_to_string(out_dir.join("changepoint.manifest.json")).unwrap();
        assert!(manifest.contains("\"rows\": 18"));
        outputs.push(csv);
    }
    assert_eq!(outputs[0], outputs[1]);
    let text = String::from_utf8(outputs[0].clone()).unwrap();
    assert_eq!(text.lines().count(), 19);
}

#[test]
fn out_dir_flag_overrides_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "s.cfg",
        "series = sigma\nalphas = 0.5\nns = 12\nreps = 50\n",
    );
    let env_dir = dir.path().join("env");
    let flag_dir = dir.path().join("flag");
    let run = |extra: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_dominance"))
            .args(["simulate-sigma", "--config", &cfg, "--seed", "2"])
            .args(extra)
            .env("DOMINANCE_OUT_DIR", &env_dir)
            .output()
            .unwrap()
    };
    assert_eq!(run(&[]).status.code(), Some(0));
    assert!(env_dir.join("sigma_series.csv").exists());
    assert_eq!(run(&["--out-dir", flag_dir.to_str().unwrap()]).status.code(), Some(0));
    assert!(flag_dir.join("sigma_series.csv").exists());
}

#[test]
fn bad_configs_exit_with_validation_code() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("o");
    let cases = [
        SMOKE.replace("alphas = 0.5", "alphas = 1.5"),
        SMOKE.replace("mu_c = 1\n", ""),
        format!("{SMOKE}colour = red\n"),
    ];
    for (i, text) in cases.iter().enumerate() {
        let cfg = write_config(dir.path(), &format!("bad{i}.cfg"), text);
        let out = dominance(&[
            "simulate-a",
            "--config",
            &cfg,
            "--out-dir",
            out_dir.to_str().unwrap(),
            "--seed",
            "1",
        ]);
        assert_eq!(out.status.code(), Some(3), "case {i}");
    }
    let cfg = write_config(dir.path(), "wrong.cfg", SMOKE);
    let out = dominance(&[
        "simulate-sigma",
        "--config",
        &cfg,
        "--out-dir",
        out_dir.to_str().unwrap(),
        "--seed",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn report_renders_each_appendix() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "smoke.cfg", SMOKE);
    let data = dir.path().join("data");
    let out = dominance(&[
        "simulate-a",
        "--config",
        &cfg,
        "--out-dir",
        data.to_str().unwrap(),
        "--seed",
        "9",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = data.join("changepoint.csv");
    let figs = dir.path().join("figs");
    for (appendix, file) in [
        ("a", "appendix_a_n20.svg"),
        ("b", "appendix_b_n20.svg"),
        ("c", "appendix_c_n20.svg"),
    ] {
        let out = dominance(&[
            "report",
            "--input",
            csv.to_str().unwrap(),
            "--appendix",
            appendix,
            "--out-dir",
            figs.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        let svg = fs::read_to_string(figs.join(file)).unwrap();
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("class=\"panel\"").count(), 2);
    }
}

#[test]
fn report_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "series,n,alpha\nsigma,12,0.5\n").unwrap();
    let figs = dir.path().join("figs");
    let out = dominance(&[
        "report",
        "--input",
        bad.to_str().unwrap(),
        "--appendix",
        "a",
        "--out-dir",
        figs.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    let out = dominance(&[
        "report",
        "--input",
        bad.to_str().unwrap(),
        "--appendix",
        "z",
        "--out-dir",
        figs.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}
