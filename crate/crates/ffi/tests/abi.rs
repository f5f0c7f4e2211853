use std::ffi::{CStr, CString};
use std::ptr;

use chainforge_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(cf_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn group_order_and_core() {
    unsafe {
        let mut g = ptr::null_mut();
        let st = cf_group_from_json(c(r#"{"kind":"symmetric","degree":4}"#).as_ptr(), 0, &mut g);
        assert_eq!(st, CfStatus::Ok);
        let mut order = 0u64;
        assert_eq!(cf_group_order(g, &mut order), CfStatus::Ok);
        assert_eq!(order, 24);
        let a4 = c(r#"{"generators":[[1,2,0,3],[0,2,3,1]]}"#);
        let mut core = 0u64;
        assert_eq!(cf_core_order(g, a4.as_ptr(), &mut core), CfStatus::Ok);
        assert_eq!(core, 12);
        let t = c(r#"{"generators":[[1,0,2,3]]}"#);
        assert_eq!(cf_core_order(g, t.as_ptr(), &mut core), CfStatus::Ok);
        assert_eq!(core, 1);
        cf_group_free(g);
    }
}

#[test]
fn errors_map_to_status_codes() {
    unsafe {
        let mut g = ptr::null_mut();
        let st = cf_group_from_json(c(r#"{"kind":"sl","n":3}"#).as_ptr(), 0, &mut g);
        assert_eq!(st, CfStatus::Spec);
        assert!(last_error().contains("mod"), "{}", last_error());
        assert!(g.is_null());

        assert_eq!(cf_group_from_json(ptr::null(), 0, &mut g), CfStatus::NullArgument);

        let st = cf_group_from_json(c(r#"{"kind":"sl","n":3,"mod":3}"#).as_ptr(), 100, &mut g);
        assert_eq!(st, CfStatus::Ok);
        let mut order = 0u64;
        assert_eq!(cf_group_order(g, &mut order), CfStatus::Ok);
        assert_eq!(order, 5616);
        let big = c(r#"{"generators":[[1,1,0,0,1,0,0,0,1]]}"#);
        let mut core = 0u64;
        assert_eq!(cf_core_order(g, big.as_ptr(), &mut core), CfStatus::Ok);
        cf_group_free(g);

        let st = cf_group_from_json(c(r#"{"kind":"symmetric","degree":8}"#).as_ptr(), 100, &mut g);
        assert_eq!(st, CfStatus::Ok);
        let sub = c(r#"{"generators":[[1,2,3,4,5,6,7,0],[1,0,2,3,4,5,6,7]]}"#);
        assert_eq!(cf_core_order(g, sub.as_ptr(), &mut core), CfStatus::Resource);
        cf_group_free(g);
    }
}

#[test]
fn chain_report_round_trip() {
    unsafe {
        let spec = c(r#"{"mode":"profinite","family":{"primes":[2,3],"bits":[2,1]}}"#);
        let mut chain = ptr::null_mut();
        assert_eq!(cf_chain_from_json(spec.as_ptr(), 0, &mut chain), CfStatus::Ok);
        let mut depth = 0usize;
        assert_eq!(cf_chain_depth(chain, &mut depth), CfStatus::Ok);
        assert_eq!(depth, 2);
        let mut index = 0u64;
        assert_eq!(cf_chain_index(chain, 2, &mut index), CfStatus::Ok);
        assert_eq!(index, 168 * 5616 / 12);
        assert_eq!(cf_chain_index(chain, 3, &mut index), CfStatus::Spec);
        let mut json = ptr::null_mut();
        assert_eq!(cf_chain_report_json(chain, &mut json), CfStatus::Ok);
        let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
        cf_string_free(json);
        cf_chain_free(chain);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["verdict"]["kind"], "wild-evidence");
        assert_eq!(v["deepest_kernels"], serde_json::json!([4, 3]));
    }
}

#[test]
fn family_comparison() {
    unsafe {
        let mut a = ptr::null_mut();
        let mut b = ptr::null_mut();
        assert_eq!(cf_family_from_json(c(r#"{"primes":[2,3,5,7],"bits":[1,2,1,2]}"#).as_ptr(), &mut a), CfStatus::Ok);
        assert_eq!(cf_family_from_json(c(r#"{"primes":[2,3,5,7],"bits":[2,2,1,2]}"#).as_ptr(), &mut b), CfStatus::Ok);
        let mut eq = -1;
        let mut json = ptr::null_mut();
        assert_eq!(cf_family_compare(a, b, 0, &mut eq, &mut json), CfStatus::Ok);
        assert_eq!(eq, 1);
        let v: serde_json::Value = serde_json::from_str(CStr::from_ptr(json).to_str().unwrap()).unwrap();
        assert_eq!(v["n"], 1);
        cf_string_free(json);
        assert_eq!(cf_family_compare(a, b, 1, &mut eq, ptr::null_mut()), CfStatus::Ok);
        assert_eq!(eq, 0);
        let mut report = ptr::null_mut();
        assert_eq!(cf_family_report_json(a, &mut report), CfStatus::Ok);
        cf_string_free(report);
        cf_family_free(a);
        cf_family_free(b);
    }
}

#[test]
fn version_is_set() {
    let v = unsafe { CStr::from_ptr(cf_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_entry_point() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/chainforge.h")).unwrap();
    for name in [
        "cf_last_error",
        "cf_version",
        "cf_string_free",
        "cf_group_from_json",
        "cf_group_free",
        "cf_group_order",
        "cf_core_order",
        "cf_chain_from_json",
        "cf_chain_free",
        "cf_chain_depth",
        "cf_chain_index",
        "cf_chain_report_json",
        "cf_family_from_json",
        "cf_family_free",
        "cf_family_report_json",
        "cf_family_compare",
        "typedef struct CfGroup CfGroup",
        "CF_STATUS_RESOURCE = 3",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}

#[test]
fn header_compiles_as_c() {
    let Ok(cc) = std::process::Command::new("cc").arg("--version").output() else {
        eprintln!("no C compiler; skipping");
        return;
    };
    assert!(cc.status.success());
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        "#include \"chainforge.h\"\nint main(void) { CfGroup *g = 0; uint64_t n; return cf_group_order(g, &n) == CF_STATUS_NULL_ARGUMENT ? 0 : 1; }\n",
    )
    .unwrap();
    let out = std::process::Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(concat!(env!("CARGO_MANIFEST_DIR"), "/include"))
        .arg(&src)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
