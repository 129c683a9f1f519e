use std::fs;
use std::path::{Path, PathBuf};

use clap::Parser;
use fisher_dim::cli::{self, Cli};
use fisher_dim::io::{load_matrix, save_matrix_csv, MatrixFile, RunReport};
use fisher_dim::synthdata::{generate, SyntheticSpec};
use fisher_dim::DataMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

fn run(args: &[&str]) -> (i32, String) {
    let mut argv = vec!["fisher-dim"];
    argv.extend_from_slice(args);
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(_) => return (2, String::new()),
    };
    let mut out = Vec::new();
    let code = match cli::run(&cli, &mut out) {
        Ok(()) => 0,
        Err(e) => e.exit_code(),
    };
    (code, String::from_utf8(out).unwrap())
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn write(dir: &TempDir, name: &str, x: &DataMatrix) -> PathBuf {
    let path = dir.path().join(name);
    save_matrix_csv(x, &path).unwrap();
    path
}

#[test]
fn synth_is_deterministic_and_roundtrips() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let (code, _) = run(&["synth", "--kind", "sphere", "--n", "10", "--N", "2500", "--seed", "1", "--out", p(out)]);
        assert_eq!(code, 0);
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let x = load_matrix(&MatrixFile::new(&a)).unwrap();
    assert_eq!((x.n_points(), x.n_features()), (2500, 11));
    assert_eq!(x, generate(&SyntheticSpec::sphere(10, 2500, 1)).unwrap());

    let side: SyntheticSpec = serde_json::from_str(&fs::read_to_string(dir.path().join("a.spec.json")).unwrap()).unwrap();
    assert_eq!(side, SyntheticSpec::sphere(10, 2500, 1));

    // the spec file reproduces the dataset
    let c = dir.path().join("c.csv");
    let (code, _) = run(&["synth", "--config", p(&dir.path().join("a.spec.json")), "--out", p(&c)]);
    assert_eq!(code, 0);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&c).unwrap());
}

#[test]
fn synth_default_name_and_clusters() {
    let dir = TempDir::new().unwrap();
    let (code, _) = run(&["synth", "--kind", "clustered", "--radius", "0.3", "--seed", "7", "--out-dir", p(dir.path())]);
    assert_eq!(code, 0);
    let path = dir.path().join("clustered_n10_N2500_seed7.csv");
    let x = load_matrix(&MatrixFile::new(&path)).unwrap();
    assert_eq!(x, generate(&SyntheticSpec::clustered(10, 0.3, 2500, 7)).unwrap());
}

#[test]
fn synth_usage_errors() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("x.csv");
    assert_eq!(run(&["synth", "--kind", "blob", "--out", p(&out)]).0, 2);
    assert_eq!(run(&["synth", "--kind", "sphere", "--N", "1", "--out", p(&out)]).0, 2);
    assert_eq!(run(&["synth", "--out", p(&out)]).0, 2);
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"kind\": \"sphere\"}").unwrap();
    assert_eq!(run(&["synth", "--config", p(&bad), "--out", p(&out)]).0, 2);
}

#[test]
fn estimate_writes_artifacts() {
    let dir = TempDir::new().unwrap();
    let x = generate(&SyntheticSpec::cube(20, 20, 1500, 2).with_noise(0.05)).unwrap();
    let input = write(&dir, "cube20.csv", &x);
    let out = dir.path().join("out");
    let (code, text) = run(&["estimate", "--input", p(&input), "--alphas", "0.6:0.98:0.02", "--out-dir", p(&out)]);
    assert_eq!(code, 0);
    assert!(text.contains("n_hat:"));
    for f in ["cube20_report.json", "cube20_points.csv", "cube20_sweep.csv", "cube20_histogram.svg", "cube20_sweep.svg"] {
        assert!(out.join(f).exists(), "{f}");
    }
    let report = RunReport::load(&out.join("cube20_report.json")).unwrap();
    assert!((15.0..25.0).contains(&report.n_hat));
    assert_eq!(report.sweep.len(), 20);
    assert_eq!(report.input.n_points, 1500);
    assert_eq!(report.alpha_grid.len(), 20);

    let points = fs::read_to_string(out.join("cube20_points.csv")).unwrap();
    assert_eq!(points.lines().next(), Some("point,p_alpha"));
    assert_eq!(points.lines().count(), 1501);
    let sweep = fs::read_to_string(out.join("cube20_sweep.csv")).unwrap();
    assert_eq!(sweep.lines().next(), Some("alpha,mean_prob,n_alpha"));

    // round-trip of the stored report is lossless
    let again = RunReport::from_json(&report.to_json().unwrap()).unwrap();
    assert_eq!(again, report);

    let plain = dir.path().join("plain");
    let (code, _) = run(&["estimate", "--input", p(&input), "--no-svg", "--out-dir", p(&plain)]);
    assert_eq!(code, 0);
    let names: Vec<String> = fs::read_dir(&plain)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    assert!(names.iter().all(|n| !n.ends_with(".svg")), "{names:?}");
    assert_eq!(names.len(), 3);
}

#[test]
fn estimate_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "s.csv", &generate(&SyntheticSpec::sphere(6, 800, 4)).unwrap());
    let args = |o: &str| vec!["estimate".to_string(), "--input".into(), p(&input).into(), "--format".into(), "json".into(), "--out-dir".into(), o.into()];
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let (ca, ja) = run(&args(p(&a)).iter().map(String::as_str).collect::<Vec<_>>());
    let (cb, jb) = run(&args(p(&b)).iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!((ca, cb), (0, 0));
    let ra = RunReport::from_json(&ja).unwrap();
    let rb = RunReport::from_json(&jb).unwrap();
    assert_eq!(ra.stable_json().unwrap(), rb.stable_json().unwrap());
    assert_eq!(fs::read(a.join("s_sweep.csv")).unwrap(), fs::read(b.join("s_sweep.csv")).unwrap());
    assert_eq!(fs::read(a.join("s_sweep.svg")).unwrap(), fs::read(b.join("s_sweep.svg")).unwrap());
}

#[test]
fn orientation_and_header_flags() {
    let dir = TempDir::new().unwrap();
    let x = generate(&SyntheticSpec::sphere(4, 300, 9)).unwrap();
    let t = x.transpose().unwrap();
    let rows = write(&dir, "rows.csv", &x);
    let cols = dir.path().join("cols.tsv");
    let mut text = (0..t.n_features()).map(|i| format!("p{i}")).collect::<Vec<_>>().join("\t") + "\n";
    for r in t.rows() {
        text += &r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("\t");
        text += "\n";
    }
    fs::write(&cols, text).unwrap();
    let (c1, a) = run(&["estimate", "--input", p(&rows), "--format", "json", "--no-svg", "--out-dir", p(dir.path())]);
    let (c2, b) = run(&["estimate", "--input", p(&cols), "--points-in", "columns", "--header", "--format", "json", "--no-svg", "--out-dir", p(dir.path())]);
    assert_eq!((c1, c2), (0, 0));
    let (a, b) = (RunReport::from_json(&a).unwrap(), RunReport::from_json(&b).unwrap());
    assert_eq!(a.n_hat, b.n_hat);
    assert_eq!(a.sweep, b.sweep);
}

#[test]
fn sweep_command() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "s.csv", &generate(&SyntheticSpec::sphere(3, 500, 1)).unwrap());
    let (code, text) = run(&["sweep", "--input", p(&input), "--format", "csv", "--alphas", "0.5:0.9:0.1", "--out-dir", p(dir.path())]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "alpha,mean_prob,n_alpha");
    assert_eq!(lines.len(), 6);
    assert!(dir.path().join("s_sweep.csv").exists());
}

#[test]
fn mutation_preprocessing_is_reported() {
    let dir = TempDir::new().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (genes, tumors) = (400, 30);
    let mut v = Vec::new();
    for g in 0..genes {
        for t in 0..tumors {
            let hit = if g < 6 { rng.random::<f64>() < 0.03 } else { rng.random::<f64>() < 0.3 || (t + g) % 5 == 0 };
            v.push(f64::from(u8::from(hit)));
        }
    }
    // the first six genes get at most 4 mutations
    for g in 0..6 {
        let row = &mut v[g * tumors..(g + 1) * tumors];
        let mut seen = 0;
        for c in row.iter_mut() {
            if *c > 0.0 {
                seen += 1;
                if seen > 4 {
                    *c = 0.0;
                }
            }
        }
    }
    let x = DataMatrix::new(genes, tumors, v).unwrap();
    let input = write(&dir, "mut.csv", &x);
    let (code, text) = run(&["estimate", "--input", p(&input), "--mutation-preprocess", "--min-count", "5", "--format", "json", "--out-dir", p(dir.path())]);
    assert_eq!(code, 0);
    let r = RunReport::from_json(&text).unwrap();
    let m = r.input.mutation.expect("mutation summary");
    assert_eq!(m.min_count, 5);
    assert_eq!(m.genes_in, 400);
    assert_eq!(m.dropped_genes, (0..6).collect::<Vec<_>>());
    assert_eq!(m.genes_kept, 394);
    assert_eq!(r.input.n_points, 394);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let nan = dir.path().join("nan.csv");
    fs::write(&nan, "1,2\n3,NaN\n").unwrap();
    assert_eq!(run(&["estimate", "--input", p(&nan), "--out-dir", p(dir.path())]).0, 3);

    let ragged = dir.path().join("ragged.csv");
    fs::write(&ragged, "1,2\n3\n").unwrap();
    assert_eq!(run(&["estimate", "--input", p(&ragged), "--out-dir", p(dir.path())]).0, 3);

    // identical points: no variance at all
    let same = write(&dir, "same.csv", &DataMatrix::new(5, 3, [1.0, 2.0, 3.0].repeat(5)).unwrap());
    assert_eq!(run(&["estimate", "--input", p(&same), "--out-dir", p(dir.path())]).0, 4);

    // standard basis: a regular simplex after centering, every pair separable
    let mut basis = vec![0.0; 121];
    for i in 0..11 {
        basis[i * 11 + i] = 1.0;
    }
    let simplex = write(&dir, "simplex.csv", &DataMatrix::new(11, 11, basis).unwrap());
    assert_eq!(run(&["estimate", "--input", p(&simplex), "--out-dir", p(dir.path())]).0, 5);

    let ok = write(&dir, "ok.csv", &generate(&SyntheticSpec::sphere(3, 200, 1)).unwrap());
    for bad in [
        vec!["estimate", "--input", p(&ok), "--alphas", "0.6:0.98"],
        vec!["estimate", "--input", p(&ok), "--alphas", "0.9:0.1:0.1"],
        vec!["estimate", "--input", p(&ok), "--threads", "0"],
        vec!["estimate", "--input", p(&ok), "--block-size", "0"],
        vec!["estimate", "--input", p(&ok), "--condition-threshold", "0.5"],
        vec!["estimate"],
        vec!["frobnicate"],
    ] {
        assert_eq!(run(&bad).0, 2, "{bad:?}");
    }
    assert_eq!(cli::main_with(["fisher-dim", "estimate", "--input", p(&ok), "--alphas", "x"]), 2);
}

#[test]
fn no_sphere_path_runs() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "s.csv", &generate(&SyntheticSpec::cube(5, 5, 600, 2)).unwrap());
    let (code, text) = run(&["estimate", "--input", p(&input), "--no-sphere", "--format", "json", "--no-svg", "--out-dir", p(dir.path())]);
    assert_eq!(code, 0);
    let r = RunReport::from_json(&text).unwrap();
    assert!(!r.preprocessing.projected_to_sphere);
    assert!(r.n_hat.is_finite());
}

#[test]
fn benchmark_battery_from_config() {
    let dir = TempDir::new().unwrap();
    let config = dir.path().join("battery.json");
    let battery = serde_json::json!({
        "entries": [
            {"name": "S9", "true_dim": 9.0, "spec": SyntheticSpec::sphere(9, 2500, 1).with_noise(0.05)},
            {"name": "cube20", "true_dim": 20.0, "spec": SyntheticSpec::cube(20, 20, 2500, 2).with_noise(0.05)},
            {"name": "cube70", "true_dim": 70.0, "spec": SyntheticSpec::cube(70, 71, 2500, 3).with_noise(0.05)},
        ]
    });
    fs::write(&config, battery.to_string()).unwrap();
    let out = dir.path().join("bench");
    let (code, text) = run(&["benchmark", "--config", p(&config), "--format", "json", "--out-dir", p(&out)]);
    assert_eq!(code, 0);
    let report: fisher_dim::baselines::BenchmarkReport = serde_json::from_str(&text).unwrap();
    assert_eq!(report.rows.len(), 3);
    assert_eq!(report.mean_pct_error.len(), 2);
    let f70 = report.rows[2].fisher.unwrap();
    assert!((63.0..=73.0).contains(&f70), "70-cube FisherS {f70}");

    let table = fs::read_to_string(out.join("benchmark.csv")).unwrap();
    assert_eq!(table.lines().next(), Some("dataset,cardinality,N,n,FisherS,retained_k,CD"));
    assert_eq!(table.lines().count(), 4);
    assert!(out.join("benchmark.json").exists());

    let empty = dir.path().join("empty.json");
    fs::write(&empty, "{\"entries\": []}").unwrap();
    assert_eq!(run(&["benchmark", "--config", p(&empty), "--out-dir", p(&out)]).0, 2);
}
