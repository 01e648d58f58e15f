use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use mink_core::estimators::DensityField;
use mink_core::reporting::{read_field_json, read_sweep_csv, RunManifest};

const LINES: &str = r#"
[model]
kind = "poisson_line"
intensity = 1.0

[estimator]
radii = [0.2, 0.1, 0.05, 0.02]
replicates = 3000
grid_per_axis = 20
seed = 7
region = { lo = [-0.5, -0.5], hi = [0.5, 0.5] }
clip = { lo = [-1.0, -1.0], hi = [1.0, 1.0] }
"#;

fn mink(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mink")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn run(cmd: &str, config: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![cmd, "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    mink(&args)
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn sweep_writes_rows_with_references() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", LINES);
    let out = dir.path().join("out");
    let o = run("sweep", &cfg, &out, &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rep = read_sweep_csv(&out.join("sweep_oplus.csv")).unwrap();
    assert_eq!(rep.rows.len(), 4);
    assert!(rep.rows.iter().all(|r| r.reference == Some(1.0)));
    let m = RunManifest::read(&out.join("manifest.json")).unwrap();
    assert_eq!(m.command, "sweep");
    assert_eq!(m.seed, 7);
    assert_eq!(m.outputs, vec![PathBuf::from("sweep_oplus.csv")]);
}

#[test]
fn same_seed_same_bytes_for_any_worker_count() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", LINES);
    let bytes = |name: &str, extra: &[&str]| {
        let out = dir.path().join(name);
        assert_eq!(run("sweep", &cfg, &out, extra).status.code(), Some(0));
        fs::read(out.join("sweep_oplus.csv")).unwrap()
    };
    let a = bytes("a", &["--workers", "1"]);
    assert_eq!(a, bytes("b", &["--workers", "4"]));
    assert_eq!(a, bytes("c", &[]));
    assert_ne!(a, bytes("d", &["--seed", "8"]));
}

#[test]
fn manifest_replays_byte_identical_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", &LINES.replace("seed = 7", "seed = 1"));
    let first = dir.path().join("first");
    assert_eq!(run("sweep", &cfg, &first, &["--seed", "99"]).status.code(), Some(0));
    let again = dir.path().join("again");
    let o = run("sweep", &first.join("manifest.json"), &again, &["--workers", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(
        fs::read(first.join("sweep_oplus.csv")).unwrap(),
        fs::read(again.join("sweep_oplus.csv")).unwrap()
    );
}

#[test]
fn invalid_radius_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", &LINES.replace("[0.2, 0.1,", "[1.5, 0.1,"));
    let o = run("sweep", &cfg, &dir.path().join("out"), &[]);
    assert_eq!(o.status.code(), Some(1));
    let e = stderr(&o);
    assert!(e.contains("radii") && e.contains("(0, 1)"), "{e}");
}

#[test]
fn unknown_fields_and_missing_sections_are_validation_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", &format!("{LINES}\nbogus = 1\n"));
    let o = run("sweep", &cfg, &dir.path().join("out"), &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("bogus"), "{}", stderr(&o));

    let cfg = write(dir.path(), "d.toml", "[model]\nkind = \"poisson_line\"\nintensity = 1.0\n");
    let o = run("sweep", &cfg, &dir.path().join("out"), &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("estimator"), "{}", stderr(&o));

    let cfg = write(dir.path(), "e.toml", &LINES.replace("intensity = 1.0", "intensity = -1.0"));
    let o = run("sweep", &cfg, &dir.path().join("out"), &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("model.intensity"), "{}", stderr(&o));
}

#[test]
fn unreadable_config_is_a_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run("sweep", &dir.path().join("missing.toml"), &dir.path().join("out"), &[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn help_documents_every_field() {
    let o = mink(&["sweep", "--help"]);
    assert_eq!(o.status.code(), Some(0));
    let h = String::from_utf8_lossy(&o.stdout);
    for field in [
        "--config", "--seed", "--workers", "--out", "radii", "replicates", "grid_per_axis", "seed", "region",
        "clip", "point", "estimator", "fixture", "realizations", "prop9_radii", "prop9_replicates", "intensity",
        "center_intensity", "growth_speed", "nucleation", "affine_x",
    ] {
        assert!(h.contains(field), "help is missing {field}");
    }
}

fn field(dir: &Path, model: &str) -> DensityField {
    let text = format!(
        "{model}\n[estimator]\nradii = [0.05]\nreplicates = 2000\ngrid_per_axis = 4\nseed = 3\n\
         region = {{ lo = [0.0, 0.0], hi = [1.0, 1.0] }}\nclip = {{ lo = [-0.5, -0.5], hi = [1.5, 1.5] }}\n"
    );
    let cfg = write(dir, "f.toml", &text);
    let out = dir.join("out");
    let o = run("field", &cfg, &out, &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    read_field_json(&out.join("field.json")).unwrap()
}

#[test]
fn field_of_the_empty_model_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let f = field(
        dir.path(),
        "[model]\nkind = \"birth_growth\"\nnucleation = { kind = \"constant_rate\", a = 0.0 }\n\
         growth_speed = 1.0\ntime = 0.5\ntarget = \"boundary\"",
    );
    assert_eq!(f.shape, [4, 4]);
    assert!(f.values.iter().all(|v| *v == 0.0));
}

#[test]
fn affine_field_slopes_upward() {
    let dir = tempfile::tempdir().unwrap();
    let f = field(
        dir.path(),
        "[model]\nkind = \"random_point\"\npdf = { kind = \"affine_x\", c = 1.5, \
         window = { lo = [0.0, 0.0], hi = [1.0, 1.0] } }",
    );
    assert!(f.slope_x() > 0.0, "{}", f.slope_x());
}

#[test]
fn content_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    for (name, expect) in [("circle", 2.0 * std::f64::consts::PI), ("point", 1.0)] {
        let cfg = write(
            dir.path(),
            "c.toml",
            &format!("[content]\nfixture = \"{name}\"\nradii = [0.5, 0.2, 0.1]\n"),
        );
        let out = dir.path().join(name);
        let o = run("content", &cfg, &out, &[]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let rep = read_sweep_csv(&out.join(format!("content_{name}.csv"))).unwrap();
        for row in rep.rows {
            assert!((row.estimate.value - expect).abs() < 0.02, "{name}: {row:?}");
        }
    }
    let cfg = write(dir.path(), "c.toml", "[content]\nfixture = \"nope\"\nradii = [0.1]\n");
    assert_eq!(run("content", &cfg, &dir.path().join("x"), &[]).status.code(), Some(1));
}

const SEGMENTS: &str = r#"
[model]
kind = "grain_union"
count = { kind = "deterministic", k = 1 }
grain = { kind = "segment", center = { kind = "uniform_box", window = { lo = [0.0, 0.0], hi = [1.0, 1.0] } }, length = { kind = "fixed", length = 0.5 } }

[estimator]
radii = [0.1]
replicates = 10
grid_per_axis = 10
seed = 5
region = { lo = [0.0, 0.0], hi = [1.0, 1.0] }
clip = { lo = [-0.5, -0.5], hi = [1.5, 1.5] }

[check]
realizations = 20
radii = [1.0, 0.1]
prop9_radii = [0.2, 0.05]
prop9_replicates = 4000
"#;

#[test]
fn check_suite_passes_and_single_grain_ratios_coincide() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", SEGMENTS);
    let out = dir.path().join("out");
    let o = run("check", &cfg, &out, &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rep: mink_cli::CheckReport =
        serde_json::from_str(&fs::read_to_string(out.join("check.json")).unwrap()).unwrap();
    assert_eq!(rep.covering_failures, 0);
    assert_eq!(rep.covering.len(), 40);
    for t in &rep.factorization {
        assert_eq!(t.theta_ratio.value, t.count_ratio.value);
        assert_eq!(t.theta_ratio.value, t.factored_ratio.value);
        assert_eq!(t.overlap_ratio.value, 0.0);
    }
}

#[test]
fn factorization_needs_a_grain_union() {
    let dir = tempfile::tempdir().unwrap();
    let text = SEGMENTS.replace(
        "kind = \"grain_union\"\ncount = { kind = \"deterministic\", k = 1 }\n",
        "kind = \"poisson_segment\"\ncenter_intensity = 1.0\nlength = { kind = \"fixed\", length = 0.5 }\n",
    );
    let text = text
        .lines()
        .filter(|l| !l.starts_with("grain ="))
        .collect::<Vec<_>>()
        .join("\n");
    let cfg = write(dir.path(), "c.toml", &text);
    let o = run("check", &cfg, &dir.path().join("out"), &[]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    assert!(stderr(&o).contains("prop9_radii"));
}
