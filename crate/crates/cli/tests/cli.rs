use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const QUICK: [&str; 4] = ["--max-epochs", "150", "--patience", "30"];

fn lingaff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lingaff"))
        .args(args)
        .env_remove("LINGAFF_SEED")
        .output()
        .expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn synth(dir: &TempDir) -> std::path::PathBuf {
    let data = dir.path().join("data");
    let out = lingaff(&[
        "synth",
        "--families",
        "5",
        "--per-family",
        "6",
        "--concepts",
        "30",
        "--features",
        "8",
        "--p",
        "0.05",
        "--q",
        "0.05",
        "--seed",
        "1",
        "--out",
        path(&data),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    data
}

#[test]
fn synth_then_compare_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let data = synth(&dir);
    for name in [
        "wordlist.tsv",
        "features.tsv",
        "labels.tsv",
        "concepts.txt",
        "features_meta.tsv",
    ] {
        assert!(data.join(name).is_file(), "{name}");
    }
    let (wordlist, labels, concepts) = (
        data.join("wordlist.tsv"),
        data.join("labels.tsv"),
        data.join("concepts.txt"),
    );
    let run = |out: &Path| {
        let mut args = vec![
            "compare",
            "--wordlist",
            path(&wordlist),
            "--labels",
            path(&labels),
            "--concepts",
            path(&concepts),
            "--mode",
            "lexical",
            "--runs",
            "2",
            "--seed",
            "7",
            "--out",
            path(out),
        ];
        args.extend(QUICK);
        let o = lingaff(&args);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    };
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    run(&a);
    run(&b);
    for file in ["results.json", "summary.csv"] {
        assert_eq!(
            fs::read(a.join(file)).unwrap(),
            fs::read(b.join(file)).unwrap(),
            "{file}"
        );
    }
    let summary = fs::read_to_string(a.join("summary.csv")).unwrap();
    let lines: Vec<&str> = summary.lines().collect();
    assert_eq!(lines[0], "model,mode,runs,min,q25,q75,max,mean,sd");
    assert!(lines[1].starts_with("baseline,lexical,2,"));
    assert!(lines[2].starts_with("mlp,lexical,2,"));
    let json: serde_json::Value =
        serde_json::from_slice(&fs::read(a.join("results.json")).unwrap()).unwrap();
    assert_eq!(json["details"][0]["config"]["base_seed"], 7);
    assert_eq!(json["details"][1]["runs"].as_array().unwrap().len(), 2);
}

#[test]
fn seed_comes_from_the_environment() {
    let dir = TempDir::new().unwrap();
    let data = synth(&dir);
    let out = dir.path().join("b");
    let o = Command::new(env!("CARGO_BIN_EXE_lingaff"))
        .args([
            "baseline",
            "--corpus",
            path(&data),
            "--runs",
            "1",
            "--out",
            path(&out),
        ])
        .env("LINGAFF_SEED", "99")
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let json: serde_json::Value =
        serde_json::from_slice(&fs::read(out.join("results.json")).unwrap()).unwrap();
    assert_eq!(json["config"]["base_seed"], 99);
}

#[test]
fn experiment_subcommands_write_reports() {
    let dir = TempDir::new().unwrap();
    let data = synth(&dir);
    let corpus = ["--corpus", path(&data)];
    let new = dir.path().join("new.tsv");
    let wordlist = fs::read_to_string(data.join("wordlist.tsv")).unwrap();
    let mut copied = String::from("ID\tLanguage_ID\tParameter_ID\tSegments\n");
    for line in wordlist.lines().filter(|l| l.contains("\tf002l001\t")) {
        copied.push_str(&line.replace("f002l001", "newcomer"));
        copied.push('\n');
    }
    fs::write(&new, copied).unwrap();

    let cases: Vec<(&str, Vec<&str>, &str)> = vec![
        (
            "holdout",
            vec!["--family", "Fam001", "--languages", "f001l000,f001l001"],
            "ALL,Fam001,",
        ),
        ("probe", vec!["--language", "f003l002"], "f003l002,Fam003,"),
        ("affiliate", vec!["--new", path(&new)], "newcomer,Fam002,"),
    ];
    for (command, extra, expected) in cases {
        let out = dir.path().join(command);
        let mut args = vec![command];
        args.extend(corpus);
        args.extend(extra);
        args.extend(["--runs", "2", "--out", path(&out)]);
        args.extend(QUICK);
        let o = lingaff(&args);
        assert!(
            o.status.success(),
            "{command}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        let summary = fs::read_to_string(out.join("summary.csv")).unwrap();
        assert!(summary.contains(expected), "{command}: {summary}");
        assert!(out.join("results.json").is_file());
    }

    let out = dir.path().join("train");
    let mut args = vec!["train"];
    args.extend(corpus);
    args.extend(["--mode", "combined", "--out", path(&out)]);
    args.extend(QUICK);
    assert!(lingaff(&args).status.success());
    let model = fs::read(out.join("model.lgm")).unwrap();
    assert!(model.starts_with(b"lingaff-mlp 1\ninput_width 616\n"));

    let out = dir.path().join("encode");
    let o = lingaff(&[
        "encode",
        "--corpus",
        path(&data),
        "--mode",
        "grammatical",
        "--out",
        path(&out),
    ]);
    assert!(o.status.success());
    let dump = fs::read_to_string(out.join("encoded.tsv")).unwrap();
    assert!(dump.starts_with("#mode=grammatical\twidth=16\t"));
    assert_eq!(dump.lines().count(), 31);
}

fn assert_one_line_error(o: &Output) -> String {
    assert!(!o.status.success());
    let stderr = String::from_utf8_lossy(&o.stderr).into_owned();
    assert_eq!(stderr.lines().count(), 1, "{stderr}");
    assert!(stderr.starts_with("error: "), "{stderr}");
    stderr
}

#[test]
fn errors_are_one_line_and_nonzero() {
    let dir = TempDir::new().unwrap();
    let data = synth(&dir);
    let out = dir.path().join("out");
    let out = path(&out);

    let o = lingaff(&[
        "affiliate",
        "--wordlist",
        path(&data.join("wordlist.tsv")),
        "--concepts",
        path(&data.join("concepts.txt")),
        "--new",
        path(&data.join("wordlist.tsv")),
        "--out",
        out,
    ]);
    assert!(assert_one_line_error(&o).contains("labels"));

    let o = lingaff(&[
        "compare",
        "--corpus",
        path(&data),
        "--labels",
        "/no/such/labels.tsv",
        "--out",
        out,
    ]);
    assert!(assert_one_line_error(&o).contains("/no/such/labels.tsv"));

    let o = lingaff(&[
        "probe",
        "--corpus",
        path(&data),
        "--language",
        "nobody",
        "--runs",
        "1",
        "--out",
        out,
    ]);
    assert!(assert_one_line_error(&o).contains("nobody"));

    let o = lingaff(&[
        "compare",
        "--corpus",
        path(&data),
        "--runs",
        "0",
        "--out",
        out,
    ]);
    assert!(assert_one_line_error(&o).contains("run"));

    let o = lingaff(&["synth", "--p", "2", "--out", out]);
    assert!(assert_one_line_error(&o).contains("probability"));

    let empty = dir.path().join("empty.tsv");
    fs::write(&empty, "ID\tLanguage_ID\tParameter_ID\tSegments\n").unwrap();
    let o = lingaff(&[
        "affiliate",
        "--corpus",
        path(&data),
        "--new",
        path(&empty),
        "--runs",
        "1",
        "--out",
        out,
    ]);
    assert!(assert_one_line_error(&o).contains("unclassifiable"));

    let o = lingaff(&["compare", "--no-such-flag"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("--no-such-flag"));
}

#[test]
fn help_documents_flags_and_defaults() {
    let expectations: [(&str, &[&str]); 8] = [
        (
            "encode",
            &[
                "--mode",
                "[default: lexical]",
                "--min-family-size",
                "[default: 5]",
                "--classmap",
            ],
        ),
        (
            "baseline",
            &[
                "--runs",
                "[default: 100]",
                "--seed",
                "LINGAFF_SEED",
                "--jobs",
                "[default: 1]",
            ],
        ),
        (
            "train",
            &[
                "--lr",
                "[default: 0.001]",
                "--batch-size",
                "[default: 2048]",
                "--max-epochs",
                "[default: 5000]",
                "--patience",
                "[default: 500]",
            ],
        ),
        (
            "compare",
            &[
                "--model",
                "[default: baseline mlp]",
                "--mode",
                "--train-fraction",
                "[default: 0.8]",
            ],
        ),
        (
            "holdout",
            &["--family", "--languages", "--model", "[default: mlp]"],
        ),
        ("probe", &["--language", "--out"]),
        (
            "affiliate",
            &[
                "--new",
                "--features-meta",
                "--wordlist",
                "--labels",
                "--concepts",
                "--features",
            ],
        ),
        (
            "synth",
            &[
                "--families",
                "[default: 30]",
                "--per-family",
                "[default: 8]",
                "--p",
                "--q",
                "--r",
                "--mu",
                "[default: 0.05]",
            ],
        ),
    ];
    for (command, needles) in expectations {
        let o = lingaff(&[command, "--help"]);
        assert!(o.status.success());
        let help = String::from_utf8_lossy(&o.stdout);
        for needle in needles {
            assert!(
                help.contains(needle),
                "{command} --help lacks {needle}:\n{help}"
            );
        }
    }
}
