//! End-to-end runs of the `rcmodel` binary.

use std::path::Path;
use std::process::{Command, Output};

fn rcmodel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rcmodel")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn data_lines(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn critical_points_table() {
    let o = rcmodel(&["critical-points", "--qs", "1,2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows = data_lines(&text);
    assert_eq!(rows[0], "q,square,triangular,hexagonal,duality_gap");
    let q2: Vec<f64> = rows[2].split(',').map(|x| x.parse().unwrap()).collect();
    assert!((q2[1] - 2f64.sqrt() / (1.0 + 2f64.sqrt())).abs() < 1e-12);
}

#[test]
fn enumerate_writes_csv_with_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("single.csv");
    let o = rcmodel(&[
        "enumerate",
        "--region",
        "0,1,0,0.5",
        "--p",
        "0.5",
        "--q",
        "2",
        "--open",
        "0",
        "--seed",
        "9",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("# seed: 9"));
    assert!(text.contains("# config: {"));
    let rows = data_lines(&text);
    assert_eq!(rows[0], "region,bc,p,q,event,value,derivative,influence_edge,influence");
    let fields: Vec<&str> = rows[1].split(',').collect();
    // a lone edge at p = 1/2, q = 2 is open with probability 1/3
    let value: f64 = fields[5].parse().unwrap();
    assert!((value - 1.0 / 3.0).abs() < 1e-12);
    assert_eq!(fields[7], "0");
}

#[test]
fn enumerate_reads_an_edge_list_and_json_event() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("triangle.txt");
    std::fs::write(&graph, "# triangle\n0 1 0 0 1 0\n1 2 1 0 0.5 0.8\n2 0 0.5 0.8 0 0\n").unwrap();
    let event = dir.path().join("event.json");
    std::fs::write(&event, r#"{"op":"connected","u":0,"v":1}"#).unwrap();
    let o = rcmodel(&[
        "enumerate",
        "--graph",
        graph.to_str().unwrap(),
        "--p",
        "0.5",
        "--event",
        &format!("@{}", event.display()),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let row = data_lines(&text)[1];
    let value: f64 = row.split(',').nth(5).unwrap().parse().unwrap();
    // direct edge or the two-edge detour: 1/2 + 1/2 * 1/4
    assert!((value - 0.625).abs() < 1e-12, "{row}");
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.json");
    std::fs::write(&cfg, r#"{"lattice":"square","q":1.0,"p":[0.5],"sizes":[2],"replicas":2,"sweeps":20,"burn_in":5,"seed":3}"#).unwrap();
    let out = dir.path().join("sweep.csv");
    let o = rcmodel(&["crossing-sweep", "--config", cfg.to_str().unwrap(), "--seed", "4", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("# seed: 4"));
    let rows = data_lines(&text);
    assert_eq!(rows[0], "lattice,q,bc,n,p,event,estimate,stderr,replicas,seed");
    assert_eq!(rows.len(), 4);
    assert!(rows[1..].iter().all(|r| r.ends_with(",2,4")));
}

#[test]
fn same_seed_same_output() {
    let args = ["crossing-sweep", "--p", "0.5", "--sizes", "2", "--replicas", "2", "--sweeps", "30", "--burn-in", "5", "--seed", "17"];
    assert_eq!(stdout(&rcmodel(&args)), stdout(&rcmodel(&args)));
}

#[test]
fn couple_on_two_edge_path_is_clean() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("path.txt");
    std::fs::write(&graph, "0 1 0 0 1 0\n1 2 1 0 2 0\n").unwrap();
    let dump = dir.path().join("traj.bin");
    let o = rcmodel(&[
        "couple",
        "--graph",
        graph.to_str().unwrap(),
        "--p",
        "0.5",
        "--q",
        "2",
        "--t-max",
        "2000",
        "--dump",
        dump.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("violations_monotone,0"));
    assert!(text.contains("violations_off_cluster,0"));
    assert!(text.contains("tv_omega,"));
    let frames = rcmodel::dynamics::read_trajectory(std::io::BufReader::new(std::fs::File::open(&dump).unwrap())).unwrap();
    assert!(frames.len() > 100);
    // each frame is (pi, omega) side by side; pi never opens the pivot
    assert!(frames.iter().all(|f| f.len() == 4 && !f.get(0) && f.get(2)));
}

#[test]
fn verify_duality_suite_passes() {
    let o = rcmodel(&["verify", "duality"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("check,region,p,q,bc,event")));
    assert!(!text.contains(",fail,"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["nonsense"][..],
        &["verify", "unknown-suite"],
        &["enumerate", "--region", "0,1,0,1", "--p", "0.5"],
        &["enumerate", "--region", "0,1,0", "--p", "0.5", "--open", "0"],
        &["crossing-sweep", "--p", "1.5", "--sizes", "2"],
        &["crossing-sweep", "--lattice", "pentagonal", "--sizes", "2"],
        &["decay-fit", "--sizes", "4,6"],
        &["enumerate", "--region", "0,9,0,9", "--p", "0.5", "--open", "0"],
    ] {
        let o = rcmodel(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    assert!(!Path::new("nonsense").exists());
}
