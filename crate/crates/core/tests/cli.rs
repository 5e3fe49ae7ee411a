use std::path::{Path, PathBuf};

use cayley_sieve::cli::{
    self, ApproxOutput, GapOutput, ReportOutput, RunManifest, SieveOutput, WalkOutput, EXIT_CONFIG, EXIT_OK,
    EXIT_VERIFICATION,
};
use cayley_sieve::walk::ScanEntry;
use serde::de::DeserializeOwned;
use serde::Serialize;

fn golden_config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden/configs")
        .join(format!("{name}.toml"))
}

fn run(command: &str, config: &Path, out: &Path) -> i32 {
    cli::run([
        "cayley-sieve",
        command,
        "--config",
        config.to_str().unwrap(),
        "--out-dir",
        out.to_str().unwrap(),
    ])
}

fn round_trip<T: Serialize + DeserializeOwned + PartialEq + std::fmt::Debug>(path: &Path) {
    let text = std::fs::read_to_string(path).unwrap();
    let value: T = serde_json::from_str(&text).unwrap();
    let again = serde_json::to_string_pretty(&value).unwrap() + "\n";
    assert_eq!(text, again, "{}", path.display());
    assert_eq!(serde_json::from_str::<T>(&again).unwrap(), value);
}

fn assert_csv_finite(path: &Path) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let mut rows = 0;
    for rec in r.records() {
        for field in rec.unwrap().iter() {
            if let Ok(x) = field.parse::<f64>() {
                assert!(x.is_finite(), "{}: {field}", path.display());
            }
            assert!(!field.eq_ignore_ascii_case("nan") && !field.contains("inf"), "{field}");
        }
        rows += 1;
    }
    assert!(rows > 0, "{}", path.display());
}

#[test]
fn every_command_round_trips_and_stays_finite() {
    let tmp = tempfile::tempdir().unwrap();
    let cases = [
        ("gap", "gap_sanov"),
        ("walk", "walk_borel"),
        ("approx", "approx_random"),
        ("sieve", "sieve_small"),
        ("strongapprox", "strongapprox_range"),
    ];
    for (command, name) in cases {
        let out = tmp.path().join(name);
        assert_eq!(run(command, &golden_config(name), &out), EXIT_OK, "{name}");
        let manifest = RunManifest::load(&out).unwrap();
        assert_eq!(manifest.command, command);
        assert!(manifest.verify(&out).is_empty());
        for f in &manifest.outputs {
            let path = out.join(&f.file);
            match f.file.as_str() {
                "gap.json" => round_trip::<GapOutput>(&path),
                "walk.json" => round_trip::<WalkOutput>(&path),
                "approx.json" => round_trip::<ApproxOutput>(&path),
                "sieve.json" => round_trip::<SieveOutput>(&path),
                "strongapprox.json" => round_trip::<Vec<ScanEntry>>(&path),
                csv if csv.ends_with(".csv") => assert_csv_finite(&path),
                other => panic!("unexpected output {other}"),
            }
        }
        round_trip::<RunManifest>(&out.join(cli::MANIFEST_FILE));
    }
}

#[test]
fn cycle_of_four_has_gap_one() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("z4.toml");
    std::fs::write(&cfg, "generators = \"cyclic:4\"\n[gap]\n").unwrap();
    let out = tmp.path().join("out");
    assert_eq!(run("gap", &cfg, &out), EXIT_OK);
    let text = std::fs::read_to_string(out.join("gap.csv")).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(&row[..2], ["4", "4"]);
    let lambda1: f64 = row[2].parse().unwrap();
    assert!((lambda1 - 1.0).abs() < 1e-12, "{text}");
}

#[test]
fn malformed_toml_writes_nothing() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("bad.toml");
    std::fs::write(&cfg, "[gap\nprimes = [5, 7]\n").unwrap();
    let out = tmp.path().join("out");
    assert_eq!(run("gap", &cfg, &out), EXIT_CONFIG);
    assert!(!out.exists());
    assert_eq!(run("gap", &tmp.path().join("missing.toml"), &out), EXIT_CONFIG);
    assert!(!out.exists());
}

#[test]
fn repeated_runs_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    let cfg = golden_config("walk_borel");
    assert_eq!(run("walk", &cfg, &a), EXIT_OK);
    assert_eq!(run("walk", &cfg, &b), EXIT_OK);
    for f in ["walk.csv", "walk.json"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap());
    }
    let (ma, mb) = (RunManifest::load(&a).unwrap(), RunManifest::load(&b).unwrap());
    assert_eq!(ma.config_hash, mb.config_hash);
    assert_eq!(ma.outputs, mb.outputs);
}

#[test]
fn report_flags_tampered_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("scan");
    assert_eq!(run("strongapprox", &golden_config("strongapprox_range"), &out), EXIT_OK);
    let check = tmp.path().join("check");
    let report_cfg = tmp.path().join("report.toml");
    std::fs::write(&report_cfg, "[report]\ndir = \"scan\"\n").unwrap();
    assert_eq!(run("report", &report_cfg, &check), EXIT_OK);
    std::fs::write(out.join("strongapprox.csv"), "p\n").unwrap();
    assert_eq!(run("report", &report_cfg, &check), EXIT_VERIFICATION);
    let report: ReportOutput =
        serde_json::from_str(&std::fs::read_to_string(check.join("report.json")).unwrap()).unwrap();
    assert_eq!(report.problems.len(), 1);
    assert!(!check.join(cli::MANIFEST_FILE).exists());
}

#[test]
fn non_surjective_battery_is_a_verification_failure() {
    let tmp = tempfile::tempdir().unwrap();
    let gens = tmp.path().join("unipotent.json");
    // a single unipotent generator only reaches a cyclic group
    std::fs::write(&gens, "[[[1, 1], [0, 1]]]").unwrap();
    let cfg = tmp.path().join("sieve.toml");
    std::fs::write(
        &cfg,
        "seed = 1\ngenerators = \"unipotent.json\"\n[sieve]\nbattery = { count = 2 }\n\
         target = { kind = \"trace_value\", t = 2 }\nschedule = { kind = \"list\", values = [1, 2] }\nsamples = 10\n",
    )
    .unwrap();
    let out = tmp.path().join("out");
    assert_eq!(run("sieve", &cfg, &out), EXIT_VERIFICATION);
}
