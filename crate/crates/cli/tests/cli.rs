use std::path::Path;
use std::process::{Command, Output};

fn qwplab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qwplab")).args(args).env_remove("QWPLAB_DEFAULTS").output().expect("spawn qwplab")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn table(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

#[test]
fn coherent_preset_is_stationary() {
    let o = qwplab(&["evolve", "--omega", "1", "--preset", "coherent", "--t1", "6.283185307179586", "--samples", "21"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = table(&stdout(&o));
    assert_eq!(header, ["t", "dx2", "dp2", "dxp", "a", "K", "U", "mean_x", "mean_p"]);
    assert_eq!(rows.len(), 21);
    for r in &rows {
        let dx2: f64 = r[1].parse().unwrap();
        assert!((dx2 - 0.5).abs() < 1e-12);
        // 17 significant digits
        assert!(r[1].contains('e') && r[1].split('e').next().unwrap().len() == 18);
    }
}

#[test]
fn empty_span_gives_one_row() {
    let o = qwplab(&["evolve", "--init-moments", "1,2,-1", "--t0", "0", "--t1", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let (_, rows) = table(&stdout(&o));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][4], "", "moment triples carry no chirp");
}

#[test]
fn free_narrowing_through_the_binary() {
    let o = qwplab(&["evolve", "--init-moments", "1,2,-1", "--t1", "1", "--samples", "3"]);
    let (_, rows) = table(&stdout(&o));
    let dx2: f64 = rows[1][1].parse().unwrap();
    let dxp: f64 = rows[1][3].parse().unwrap();
    assert!((dx2 - 0.5).abs() < 1e-12 && dxp.abs() < 1e-12);
}

#[test]
fn compare_mode_adds_deviation_columns() {
    let o = qwplab(&[
        "evolve", "--omega", "1", "--inverted", "--init-gaussian", "1,0.1", "--t1", "1", "--samples", "3", "--mode", "compare",
        "--oracle", "ode",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = table(&stdout(&o));
    assert_eq!(header.len(), 14);
    assert_eq!(header[9], "dev_dx2");
    let dev: f64 = rows[2][9].parse().unwrap();
    assert!(dev < 1e-8);
    assert_eq!(rows[2][12], "");
}

#[test]
fn exit_codes() {
    assert_eq!(qwplab(&["evolve", "--no-such-flag"]).status.code(), Some(2));
    assert_eq!(qwplab(&["verify", "--suite", "bogus"]).status.code(), Some(2));
    assert_eq!(qwplab(&["evolve", "--init-moments", "1,2", "--t1", "1"]).status.code(), Some(2));
    assert_eq!(qwplab(&["evolve", "--preset", "coherent", "--init-moments", "1,1,0"]).status.code(), Some(2));
    assert_eq!(qwplab(&["evolve", "--init-moments", "0.1,0.1,0", "--t1", "1"]).status.code(), Some(3));
    let o = qwplab(&["evolve", "--preset", "coherent", "--omega", "1", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn verify_is_deterministic_and_passes() {
    let a = qwplab(&["verify", "--suite", "gaussian-roundtrip", "--seed", "7"]);
    let b = qwplab(&["verify", "--suite", "gaussian-roundtrip", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).trim_end().ends_with("2 checks, 0 failed"));
}

#[test]
fn figures_are_byte_identical() {
    let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&d1, &d2] {
        assert_eq!(qwplab(&["figures", "--out", d.path().to_str().unwrap()]).status.code(), Some(0));
    }
    for name in ["fig1.csv", "fig2.csv", "fig3.csv", "fig1.gp", "fig2.gp", "fig3.gp"] {
        let read = |d: &Path| std::fs::read(d.join(name)).unwrap();
        assert_eq!(read(d1.path()), read(d2.path()), "{name}");
    }
}

#[test]
fn defaults_file_fills_gaps_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("qwplab.conf");
    std::fs::write(&path, "# run defaults\nomega = 2\npreset = \"coherent\"\nt1 = 1\nsamples = 3\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_qwplab"))
        .args(["evolve", "--samples", "5"])
        .env("QWPLAB_DEFAULTS", &path)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let (_, rows) = table(&stdout(&o));
    assert_eq!(rows.len(), 5);
    let dx2: f64 = rows[4][1].parse().unwrap();
    assert!((dx2 - 0.25).abs() < 1e-12);

    std::fs::write(&path, "frequency = 2\n").unwrap();
    let bad = qwplab(&["evolve", "--config", path.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn inverted_product_scan() {
    let o = qwplab(&["scan", "--omega", "1", "--inverted", "--param", "product", "--from", "1.1U", "--to", "100U", "--points", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = table(&stdout(&o));
    assert_eq!(header, ["product", "T", "T_max", "a_max", "tau_max"]);
    assert_eq!(rows.len(), 5);
    let t_max: Vec<f64> = rows.iter().map(|r| r[2].parse().unwrap()).collect();
    assert!(t_max.windows(2).all(|w| w[1] > w[0]));
    for r in &rows {
        assert!(r[1].parse::<f64>().unwrap() < r[2].parse::<f64>().unwrap());
    }
}

#[test]
fn harmonic_k_scan() {
    let o = qwplab(&["scan", "--omega", "1", "--param", "k", "--from", "1.1", "--to", "5", "--points", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let (_, rows) = table(&stdout(&o));
    let tau: Vec<f64> = rows.iter().map(|r| r[4].parse().unwrap()).collect();
    assert!(tau.windows(2).all(|w| w[1] < w[0]));
    assert_eq!(qwplab(&["scan", "--omega", "1", "--param", "k", "--from", "0.5", "--to", "2"]).status.code(), Some(2));
}
