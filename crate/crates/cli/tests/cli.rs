use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use rand::Rng;
use serde_json::Value;
use tempfile::TempDir;

use xidep::keys::paired_keys;
use xidep::sim::gen_sphere;
use xidep::{rng_from_seed, xi_n};
use xidep_cli::DEFAULT_SEED;

fn xidep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xidep"))
        .args(args)
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn table(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut s = header.join(",") + "\n";
    for r in rows {
        s += &r.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
        s.push('\n');
    }
    s
}

#[test]
fn sphere_angles_against_coordinates() {
    let dir = TempDir::new().unwrap();
    let (x, y) = gen_sphere(1000, &mut rng_from_seed(3));
    let rows: Vec<Vec<f64>> = x
        .rows()
        .zip(y.rows())
        .map(|(a, b)| [a, b].concat())
        .collect();
    let path = write(
        &dir,
        "sphere.csv",
        &table(&["phi", "theta", "x", "y", "z"], &rows),
    );

    let out = xidep(&["xi", &path, "--x", "col:phi,theta", "--y", "col:x,y,z"]);
    assert!(out.status.success());
    let report = json(&out);
    assert_eq!(report["parameters"]["encoding"]["encoded"]["x"], true);
    assert_eq!(report["parameters"]["encoding"]["encoded"]["y"], true);

    // The CSV round trip is exact, so the library gives the same value.
    let want = xi_n(
        &paired_keys(&x, &y, Default::default()).unwrap(),
        &mut rng_from_seed(DEFAULT_SEED),
    )
    .unwrap()
    .value;
    let got = report["results"]["xi"].as_f64().unwrap();
    assert_eq!(got, want);
    assert!(got > 0.7, "{got}");
}

#[test]
fn self_dependence_is_rejected_hard() {
    let dir = TempDir::new().unwrap();
    let mut rng = rng_from_seed(1);
    let rows: Vec<Vec<f64>> = (0..200).map(|_| vec![rng.random(), rng.random()]).collect();
    let path = write(&dir, "d.csv", &table(&["a", "b"], &rows));
    let out = xidep(&[
        "xitest",
        &path,
        "--x",
        "a",
        "--y",
        "a",
        "--assume-continuous",
    ]);
    assert!(out.status.success());
    let report = json(&out);
    assert!(report["results"]["p_value"].as_f64().unwrap() < 1e-10);
    assert_eq!(report["warnings"].as_array().unwrap().len(), 1);

    let out = xidep(&[
        "xitest",
        &path,
        "--x",
        "a",
        "--y",
        "b",
        "--permutations",
        "199",
    ]);
    let report = json(&out);
    assert_eq!(report["results"]["method"], "permutation");
    assert!(report["results"]["p_value"].as_f64().unwrap() >= 1.0 / 200.0);
}

#[test]
fn foci_picks_the_generating_feature() {
    let dir = TempDir::new().unwrap();
    let mut rng = rng_from_seed(2);
    let mut header = vec!["target".to_string()];
    header.extend((1..=10).map(|j| format!("f{j}")));
    let rows: Vec<Vec<f64>> = (0..500)
        .map(|_| {
            let f: Vec<f64> = (0..10).map(|_| rng.random()).collect();
            [vec![f[0]], f].concat()
        })
        .collect();
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let path = write(&dir, "f.csv", &table(&header, &rows));
    let out = xidep(&["foci", &path, "--y", "target", "--x", "f1..f10"]);
    assert!(out.status.success());
    let report = json(&out);
    assert_eq!(report["results"]["selected"][0], "f1");
}

#[test]
fn condep_and_condxi() {
    let dir = TempDir::new().unwrap();
    let mut rng = rng_from_seed(4);
    let rows: Vec<Vec<f64>> = (0..1000)
        .map(|_| {
            let (x, z): (f64, f64) = (rng.random(), rng.random());
            vec![x, z, x + z]
        })
        .collect();
    let path = write(&dir, "c.csv", &table(&["x", "z", "y"], &rows));
    for cmd in ["condep", "condxi"] {
        let out = xidep(&[cmd, &path, "--x", "x", "--y", "y", "--z", "z"]);
        assert!(out.status.success(), "{cmd}");
        let results = &json(&out)["results"];
        let v = results
            .get("t")
            .or(results.get("value"))
            .unwrap()
            .as_f64()
            .unwrap();
        assert!(v > 0.5, "{cmd}: {v}");
    }
    let out = xidep(&["condep", &path, "--y", "y", "--z", "z,x"]);
    assert_eq!(json(&out)["results"]["p"], 0);
}

#[test]
fn reports_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let mut rng = rng_from_seed(5);
    let rows: Vec<Vec<f64>> = (0..100)
        .map(|_| vec![rng.random_range(0..5) as f64, rng.random()])
        .collect();
    let path = write(&dir, "r.csv", &table(&["a", "b"], &rows));
    let args = ["xitest", &path, "--x", "a", "--y", "b", "--seed", "9"];
    let first = xidep(&args);
    assert_eq!(first.stdout, xidep(&args).stdout);
    let other = xidep(&["xitest", &path, "--x", "a", "--y", "b", "--seed", "10"]);
    assert_ne!(first.stdout, other.stdout);
    assert_eq!(json(&first)["inputs"]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn errors_are_reported_as_json_with_nonzero_exit() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "bad.csv", "a,b\n1,2\n3,4\n5,6\n7,8\n9,10\noops,12\n");
    let out = xidep(&["xi", &path, "--x", "a", "--y", "b"]);
    assert!(!out.status.success());
    let report = json(&out);
    assert_eq!(report["error"]["kind"], "ParseError");
    assert_eq!(report["error"]["lines"], serde_json::json!([7]));

    let path = write(&dir, "empty.csv", "a,b\n");
    let out = xidep(&["xi", &path, "--x", "a", "--y", "b"]);
    assert!(!out.status.success());
    assert_eq!(json(&out)["error"]["kind"], "EmptyDataset");

    let path = write(&dir, "flat.csv", "a,b\n1,3\n2,3\n3,3\n");
    let out = xidep(&["xi", &path, "--x", "a", "--y", "b"]);
    assert_eq!(json(&out)["error"]["kind"], "DegenerateResponse");

    let out = xidep(&["xi", &path, "--x", "a", "--y", "nope"]);
    assert_eq!(json(&out)["error"]["kind"], "SelectionError");

    let out = xidep(&["xi", "/definitely/missing.csv", "--x", "a", "--y", "b"]);
    assert_eq!(json(&out)["error"]["kind"], "IoError");
}

#[test]
fn reads_standard_input_with_other_delimiters() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_xidep"))
        .args([
            "xi",
            "-",
            "--delimiter",
            "\t",
            "--x",
            "#1",
            "--y",
            "#2",
            "--format",
            "csv",
        ])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"u\tv\n1\t1\n2\t4\n3\t9\n4\t16\n")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\nxi,0.4\n"), "{text}");
}

#[test]
fn simulate_outputs() {
    let dir = TempDir::new().unwrap();
    let hist = dir.path().join("h.csv");
    let hist_arg = hist.to_str().unwrap();
    let base = [
        "simulate",
        "--example",
        "joint",
        "--n",
        "50",
        "--replications",
        "40",
        "--seed",
        "7",
    ];

    let out = xidep(&[&base[..], &["--histogram", hist_arg, "--bins", "8"]].concat());
    assert!(out.status.success());
    let report = json(&out);
    let summaries = report["results"]["summaries"].as_array().unwrap();
    assert_eq!(summaries.len(), 2);
    assert!(summaries[1]["mean_p_value"].is_number());
    let counts: u64 = std::fs::read_to_string(Path::new(&hist))
        .unwrap()
        .lines()
        .skip(1)
        .filter(|l| l.starts_with("xi(X,Y)"))
        .map(|l| l.rsplit(',').next().unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(counts, 40);

    let csv = xidep(&[&base[..], &["--format", "csv"]].concat());
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("replicate,seed,xi(u,Y),xi(u,Y)_p_value,xi(X,Y),xi(X,Y)_p_value\n"));
    assert_eq!(text.lines().count(), 41);
    assert_eq!(
        xidep(&[&base[..], &["--format", "csv"]].concat()).stdout,
        text.as_bytes()
    );

    let bad = xidep(&["simulate", "--example", "sphere", "--n", "1"]);
    assert!(!bad.status.success());
    assert_eq!(json(&bad)["error"]["kind"], "TooFewObservations");
}
