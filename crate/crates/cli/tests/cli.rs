use std::path::Path;
use std::process::{Command, Output};

fn catcavity(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_catcavity"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn read_csv(path: &Path) -> (String, Vec<String>, Vec<Vec<Option<f64>>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let meta = lines.next().unwrap().to_string();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse().ok()).collect())
        .collect();
    (meta, header, rows)
}

fn window_max(rows: &[Vec<Option<f64>>], col: usize, lo: f64, hi: f64) -> f64 {
    rows.iter()
        .filter(|r| r[0].is_some_and(|gt| (lo..=hi).contains(&gt)))
        .filter_map(|r| r[col])
        .map(f64::abs)
        .fold(0.0, f64::max)
}

#[test]
fn fig1_writes_both_curves() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let res = catcavity(&["figure", "fig1", "--nb", "0.1", "--gt-max", "30", "--out", out]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    for field in ["coherent", "cat"] {
        let (meta, header, rows) = read_csv(&dir.path().join(format!("fig1_{field}.csv")));
        assert!(meta.starts_with("# catcavity "));
        assert!(meta.contains("nb=0.1") && meta.contains("preset=benson97"));
        assert_eq!(header, ["gt", "P_plus", "P_plusplus"]);
        assert_eq!(rows.len(), 3001);
    }

    // the cat revives at half the coherent revival time
    let (_, _, rows) = read_csv(&dir.path().join("fig1_cat.csv"));
    let inside: Vec<_> = rows
        .iter()
        .filter(|r| (19.0..=25.0).contains(&r[0].unwrap()))
        .map(|r| r[1].unwrap())
        .collect();
    assert!(inside.windows(3).any(|w| w[1] > w[0] && w[1] > w[2]));
    assert!(window_max(&rows, 1, 19.0, 25.0) > 0.6);
}

#[test]
fn output_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let args = ["figure", "fig2", "--nb", "0.1", "--gt-max", "5", "--out", d.path().to_str().unwrap()];
        assert!(catcavity(&args).status.success());
    }
    for name in ["fig2_coherent.csv", "fig2_cat.csv"] {
        let x = std::fs::read(a.path().join(name)).unwrap();
        let y = std::fs::read(b.path().join(name)).unwrap();
        assert_eq!(x, y);
    }
}

#[test]
fn missing_nb_is_explained() {
    let dir = tempfile::tempdir().unwrap();
    let res = catcavity(&["figure", "fig2", "--out", dir.path().to_str().unwrap()]);
    assert!(!res.status.success());
    let err = String::from_utf8_lossy(&res.stderr);
    assert!(err.contains("n_b") && err.contains("--nb"), "{err}");
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn config_file_supplies_nb_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "[fig2]\nnb = 0.3\ngt_max = 2.0\n").unwrap();
    let out = dir.path().join("out");
    let res = catcavity(&[
        "figure",
        "fig2",
        "--config",
        cfg.to_str().unwrap(),
        "--gt-step",
        "0.5",
        "--si-time",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let (meta, header, rows) = read_csv(&out.join("fig2_cat.csv"));
    assert!(meta.contains("nb=0.3") && meta.contains("time_axis=seconds"));
    assert_eq!(header[0], "t_s");
    assert_eq!(rows.len(), 5);
    assert!((rows[4][0].unwrap() - 2.0 / 24_000.0).abs() < 1e-15);
}

#[test]
fn fig3_shows_cat_signature() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let res = catcavity(&["figure", "fig3", "--nb", "0.1", "--gt-max", "30", "--out", out]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    assert!(dir.path().join("fig3_brune96.csv").exists());
    let (_, header, rows) = read_csv(&dir.path().join("fig3_benson97.csv"));
    assert_eq!(header, ["gt", "eta_coherent", "eta_cat"]);
    // η is undefined at t = 0, where P_− vanishes
    assert_eq!(rows[0][1], None);
    let coherent = window_max(&rows, 1, 19.0, 25.0);
    let cat = window_max(&rows, 2, 19.0, 25.0);
    assert!(cat > 0.03 && cat > 3.0 * coherent, "cat {cat} vs coherent {coherent}");
}

#[test]
fn oracle_dump_is_long_format() {
    let res = catcavity(&["oracle", "--nb", "0.1", "--nbar", "2", "--t-max", "1e-4"]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let text = String::from_utf8(res.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# catcavity"));
    assert_eq!(lines.next(), Some("t,observable,value"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 4 * 201);
    assert_eq!(rows[0][..2], ["0e0", "p_excited"]);
    assert!((rows[0][2].parse::<f64>().unwrap() - 1.0).abs() < 1e-12);
    for r in rows.iter().filter(|r| r[1] == "p_excited") {
        let p: f64 = r[2].parse().unwrap();
        assert!((-1e-8..=1.0 + 1e-8).contains(&p));
    }
}

#[test]
fn validate_fast_passes() {
    let res = catcavity(&["validate"]);
    let text = String::from_utf8_lossy(&res.stdout);
    assert!(res.status.success(), "{text}");
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 7);
    assert!(!text.contains("FAIL"));
}
