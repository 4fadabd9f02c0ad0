//! End-to-end tests of the command-line interface, driving the built
//! binary the way a user would.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn motex() -> Command {
    Command::new(env!("CARGO_BIN_EXE_motex"))
}

fn run(args: &[&str], dir: &Path) -> Output {
    motex()
        .args(args)
        .env("MOTEX_CHECKPOINT_DIR", dir)
        .output()
        .expect("spawn motex")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

fn tmpdir(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn resolve_exterior_algebra_and_query() {
    let dir = tmpdir("cli-exterior");
    let out = run(
        &[
            "resolve",
            "--algebra",
            "E-tau3",
            "--max-stem",
            "42",
            "--max-f",
            "4",
            "--checkpoint",
            "e.motx",
        ],
        &dir,
    );
    assert!(out.status.success(), "{out:?}");
    let text = stdout(&out);
    // The three positive-filtration generators of the v3 tower.
    for line in ["14\t1\t1", "28\t2\t1", "42\t3\t1"] {
        assert!(text.contains(line), "missing {line} in:\n{text}");
    }
    assert!(dir.join("e.motx").exists());

    let out = run(
        &["ext", "--checkpoint", "e.motx", "--tridegree", "14,1,7"],
        &dir,
    );
    assert!(out.status.success());
    assert!(stdout(&out).contains("14\t1\t7\t1\t1"));
}

#[test]
fn product_and_names_over_b() {
    let dir = tmpdir("cli-products");
    let out = run(
        &[
            "resolve",
            "--algebra",
            "B",
            "--max-stem",
            "22",
            "--max-f",
            "8",
            "--checkpoint",
            "b.motx",
        ],
        &dir,
    );
    assert!(out.status.success(), "{out:?}");

    let out = run(&["product", "h0", "h1", "--checkpoint", "b.motx"], &dir);
    assert!(out.status.success());
    assert!(stdout(&out).contains("= 0"), "{}", stdout(&out));

    let out = run(&["product", "h1^2", "e0", "--checkpoint", "b.motx"], &dir);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("c0 u"), "h1^2 e0 should print as c0 u: {text}");

    let out = run(&["massey", "h1", "h0", "h1", "--checkpoint", "b.motx"], &dir);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("(3, 2, 2)"), "{text}");
}

#[test]
fn restriction_of_e0_prints_the_correction_term() {
    let dir = tmpdir("cli-restrict");
    for (alg, cp) in [("A", "a.motx"), ("B", "b.motx")] {
        let out = run(
            &[
                "resolve",
                "--algebra",
                alg,
                "--max-stem",
                "20",
                "--max-f",
                "8",
                "--degree-cap",
                "40",
                "--checkpoint",
                cp,
            ],
            &dir,
        );
        assert!(out.status.success(), "{out:?}");
    }
    let out = run(
        &["restrict", "e0", "--checkpoint", "a.motx", "--sub", "b.motx"],
        &dir,
    );
    assert!(out.status.success(), "{out:?}");
    let text = stdout(&out);
    assert!(
        text.contains("e0 + h1^3 v3") || text.contains("h1^3 v3 + e0"),
        "p*(e0) should be e0 + h1^3 v3, got: {text}"
    );
}

#[test]
fn charts_are_deterministic_and_round_trip() {
    let dir = tmpdir("cli-chart");
    let out = run(
        &[
            "resolve",
            "--algebra",
            "B",
            "--max-stem",
            "12",
            "--max-f",
            "6",
            "--checkpoint",
            "b.motx",
        ],
        &dir,
    );
    assert!(out.status.success());
    let chart_dir = dir.join("charts");
    for _ in 0..2 {
        let out = run(
            &[
                "chart",
                "--checkpoint",
                "b.motx",
                "--out",
                chart_dir.to_str().unwrap(),
            ],
            &dir,
        );
        assert!(out.status.success(), "{out:?}");
    }
    let svg1 = std::fs::read(chart_dir.join("chart.svg")).unwrap();
    let tsv1 = std::fs::read_to_string(chart_dir.join("chart.tsv")).unwrap();
    // Re-emit and compare bytes.
    let out = run(
        &[
            "chart",
            "--checkpoint",
            "b.motx",
            "--out",
            chart_dir.to_str().unwrap(),
        ],
        &dir,
    );
    assert!(out.status.success());
    assert_eq!(svg1, std::fs::read(chart_dir.join("chart.svg")).unwrap());
    assert_eq!(
        tsv1,
        std::fs::read_to_string(chart_dir.join("chart.tsv")).unwrap()
    );
    assert!(tsv1.starts_with("s\tf\tw\tdim\ttau_rank\n"));
    // The TSV agrees with the ext dump.
    let out = run(&["ext", "--checkpoint", "b.motx"], &dir);
    assert_eq!(stdout(&out), tsv1);
    // Row count equals the number of nonzero groups.
    assert!(tsv1.lines().count() > 10);
}

#[test]
fn corrupted_checkpoint_is_rejected() {
    let dir = tmpdir("cli-corrupt");
    std::fs::write(dir.join("bad.motx"), b"MOTXgarbage").unwrap();
    let out = run(&["ext", "--checkpoint", "bad.motx"], &dir);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("checkpoint") || err.contains("corrupt"), "{err}");

    let out = run(&["ext", "--checkpoint", "missing.motx"], &dir);
    assert!(!out.status.success());
}

#[test]
fn config_file_with_flag_overrides() {
    let dir = tmpdir("cli-config");
    std::fs::write(
        dir.join("job.toml"),
        "[job]\nalgebra = \"E-tau3\"\nmax_stem = 28\nmax_f = 2\ncheckpoint = \"from-config.motx\"\n",
    )
    .unwrap();
    // Flags win: override max_f.
    let out = run(
        &[
            "resolve",
            "--config",
            dir.join("job.toml").to_str().unwrap(),
            "--max-f",
            "3",
        ],
        &dir,
    );
    assert!(out.status.success(), "{out:?}");
    assert!(dir.join("from-config.motx").exists());
    let text = stdout(&out);
    assert!(text.contains("filtrations <= 3"), "{text}");
}

#[test]
fn raw_profile_literals_resolve() {
    let dir = tmpdir("cli-raw-profile");
    // The exterior algebra on tau_0: Ext is the polynomial h0 tower.
    let out = run(
        &[
            "resolve",
            "--algebra",
            "motivic:tau=2:xi=",
            "--max-stem",
            "0",
            "--max-f",
            "5",
            "--checkpoint",
            "e0.motx",
        ],
        &dir,
    );
    assert!(out.status.success(), "{out:?}");
    for f in 1..=4u32 {
        let out = run(
            &[
                "ext",
                "--checkpoint",
                "e0.motx",
                "--tridegree",
                &format!("0,{f},0"),
            ],
            &dir,
        );
        assert!(stdout(&out).contains(&format!("0\t{f}\t0\t1\t1")));
    }

    let out = run(
        &["resolve", "--algebra", "motivic:tau=3:xi=", "--max-stem", "4", "--max-f", "2", "-c", "x.motx"],
        &dir,
    );
    assert!(!out.status.success(), "tau height 3 must be rejected");
}
