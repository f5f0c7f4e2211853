use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const S4_CHAIN: &str = r#"{"mode":"explicit","base":{"kind":"symmetric","degree":4},
  "levels":[{"generators":[[1,2,0,3],[0,2,3,1]]},{"generators":[[1,0,3,2],[2,3,0,1]]}]}"#;
const FAMILY: &str = r#"{"primes":[2,3,5,7],"bits":[1,2,1,2]}"#;
const ANTI_FAMILY: &str = r#"{"primes":[2,3,5,7],"bits":[2,1,2,1]}"#;
const SAME_TAIL: &str = r#"{"primes":[2,3,5,7],"bits":[2,1,1,2]}"#;

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&dyn AsRef<std::ffi::OsStr>]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_chainforge"));
    cmd.env_remove("CHAINFORGE_MAX_ELEMENTS");
    for a in args {
        cmd.arg(a);
    }
    cmd.output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn analyze_explicit_chain() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "s4.json", S4_CHAIN);
    let v = json(&run(&[&"analyze", &spec]));
    assert_eq!(v["depth"], 2);
    assert_eq!(v["verdict"]["kind"], "stable-so-far");
    assert!(v["records"].as_array().unwrap().iter().all(|r| r["disc_order"] == 1));
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "fam.json", FAMILY);
    for cmd in ["analyze", "family", "plot-data"] {
        let a = run(&[&cmd, &spec]);
        let b = run(&[&cmd, &spec]);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{cmd}");
    }
}

#[test]
fn out_file_gets_a_csv_sibling() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "fam.json", FAMILY);
    let out = dir.path().join("report.json");
    let o = run(&[&"analyze", &spec, &"--out", &out]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["verdict"]["kind"], "wild-evidence");
    let csv = std::fs::read_to_string(out.with_extension("csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "n,level,disc_order,psi_kernel_order");
}

#[test]
fn csv_format_on_stdout() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "fam.json", FAMILY);
    let o = run(&[&"analyze", &spec, &"--format", &"csv", &"--mode", &"both"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("n,level,disc_order,psi_kernel_order\n"));
    // ker ψ_{0,1} at the deepest level is A1_2
    assert!(text.lines().any(|l| l == "0,4,4410,2"), "{text}");
}

#[test]
fn family_certificate() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "fam.json", FAMILY);
    let v = json(&run(&[&"family", &spec]));
    assert_eq!(v["certificate"]["verdict"], "wild");
    let orders: Vec<u64> = v["adjoint_kernels"]
        .as_array()
        .unwrap()
        .iter()
        .map(|k| k["structural_order"].as_u64().unwrap())
        .collect();
    assert_eq!(orders, [1, 2, 18, 90, 4410]);
}

#[test]
fn compare_families() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", FAMILY);
    let b = write(&dir, "b.json", ANTI_FAMILY);
    let c = write(&dir, "c.json", SAME_TAIL);
    let v = json(&run(&[&"compare", &a, &b]));
    assert_eq!(v["verdict"]["kind"], "distinct-evidence");
    assert_eq!(v["search"]["kind"], "obstructed");
    let v = json(&run(&[&"compare", &a, &c]));
    assert_eq!(v["verdict"]["kind"], "equivalent-on-window");
    assert_eq!(v["verdict"]["n"], 2);
    assert_eq!(v["search"]["kind"], "witness");
}

#[test]
fn core_of_family_subgroup() {
    let dir = TempDir::new().unwrap();
    let spec = write(
        &dir,
        "core.json",
        r#"{"group":{"kind":"sl","n":3,"mod":5},"subgroup":{"kind":"family_subgroup","p":5,"variant":2}}"#,
    );
    let v = json(&run(&[&"core", &spec]));
    assert_eq!(v["core_order"], 1);
    assert_eq!(v["subgroup_order"], 25);
    assert_eq!(v["group_order"], 372000);
}

#[test]
fn lenstra_levels() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "f.json", r#"{"primes":[2,3],"bits":[1,2]}"#);
    let v = json(&run(&[&"lenstra", &spec]));
    let levels = v["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 2);
    assert!(levels.iter().all(|l| l["recovery"] == true && l["core_identity"] == true));
    assert_eq!(levels[1]["discriminant_order"], 18);
}

#[test]
fn plot_data_header() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "fam.json", FAMILY);
    let o = run(&[&"plot-data", &spec]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().next().unwrap(), "n,level,discriminant_order,kernel_order,mode");
}

fn exit_code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn malformed_spec_exits_2_and_names_the_field() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "bad.json", r#"{"mode":"explicit"}"#);
    let o = run(&[&"analyze", &spec]);
    assert_eq!(exit_code(&o), 2);
    assert!(stderr(&o).contains("base"), "{}", stderr(&o));

    let spec = write(&dir, "bad2.json", r#"{"mode":"explicit","base":{"kind":"sl","n":3},"levels":[]}"#);
    let o = run(&[&"analyze", &spec]);
    assert_eq!(exit_code(&o), 2);
    assert!(stderr(&o).contains("chain.base"), "{}", stderr(&o));

    let o = run(&[&"analyze", &Path::new("/nonexistent/spec.json")]);
    assert_ne!(exit_code(&o), 0);
}

#[test]
fn zero_max_elements_is_rejected() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "s4.json", S4_CHAIN);
    let o = run(&[&"analyze", &spec, &"--max-elements", &"0"]);
    assert_eq!(exit_code(&o), 2);
}

#[test]
fn enumeration_bound_exits_3() {
    let dir = TempDir::new().unwrap();
    let spec = write(
        &dir,
        "s8.json",
        r#"{"mode":"explicit","base":{"kind":"symmetric","degree":8},
            "levels":[{"generators":[[1,0,2,3,4,5,6,7],[1,2,3,4,5,6,0,7]]}]}"#,
    );
    let o = Command::new(env!("CARGO_BIN_EXE_chainforge"))
        .args(["analyze", spec.to_str().unwrap()])
        .env("CHAINFORGE_MAX_ELEMENTS", "1000")
        .output()
        .unwrap();
    assert_eq!(exit_code(&o), 3, "{}", stderr(&o));
    let o = run(&[&"analyze", &spec, &"--max-elements", &"100000"]);
    assert_eq!(exit_code(&o), 0, "{}", stderr(&o));
}
