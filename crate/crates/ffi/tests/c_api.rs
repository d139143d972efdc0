use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use nonlocal_wave_ffi::*;

fn kernel(n: u32, delta: f64, beta: f64) -> *mut NlwKernel {
    let mut k = ptr::null_mut();
    assert_eq!(unsafe { nlw_kernel_new(n, delta, beta, &mut k) }, NlwStatus::Ok);
    k
}

fn last_error() -> String {
    let p = nlw_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn multiplier_paths_through_the_abi() {
    let k = kernel(2, 1.0, 1.0);
    let mut values = Vec::new();
    for path in [
        NlwPath::Routed,
        NlwPath::Hypergeometric,
        NlwPath::Quadrature,
        NlwPath::ExtendedQuadrature,
        NlwPath::RadialSeries,
    ] {
        let mut v = 0.0;
        assert_eq!(unsafe { nlw_multiplier(k, 3.0, path, &mut v) }, NlwStatus::Ok);
        values.push(v);
    }
    for v in values {
        assert!((v - -6.449_730_991_960_54).abs() < 1e-9);
    }
    let mut c = 0.0;
    assert_eq!(unsafe { nlw_scaling_constant(k, &mut c) }, NlwStatus::Ok);
    assert!(c > 0.0);
    unsafe { nlw_kernel_free(k) };
}

#[test]
fn errors_map_to_status_codes() {
    let mut k = ptr::null_mut();
    assert_eq!(unsafe { nlw_kernel_new(0, 1.0, 0.0, &mut k) }, NlwStatus::Domain);
    assert!(k.is_null());
    assert!(last_error().contains("domain"));

    let mut v = 0.0;
    assert_eq!(unsafe { nlw_multiplier(ptr::null(), 1.0, NlwPath::Routed, &mut v) }, NlwStatus::NullPointer);
    assert!(last_error().contains("kernel"));

    let k = kernel(1, 1.0, 0.0);
    assert_eq!(unsafe { nlw_multiplier(k, -1.0, NlwPath::Routed, &mut v) }, NlwStatus::Domain);
    assert_eq!(unsafe { nlw_multiplier(k, 1.0, NlwPath::Routed, ptr::null_mut()) }, NlwStatus::NullPointer);
    assert_eq!(unsafe { nlw_multiplier(k, 1.0, NlwPath::Routed, &mut v) }, NlwStatus::Ok);
    assert!(nlw_last_error_message().is_null());

    let bad = CString::new("{not json").unwrap();
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { nlw_field_from_json(bad.as_ptr(), &mut f) }, NlwStatus::Parse);
    unsafe { nlw_kernel_free(k) };
}

#[test]
fn table_lookup() {
    let k = kernel(2, 0.5, 2.0);
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { nlw_table_build(k, 5, &mut t) }, NlwStatus::Ok);
    assert!(unsafe { nlw_table_len(t) } > 0);
    let mut v = 0.0;
    assert_eq!(unsafe { nlw_table_get(t, 25, &mut v) }, NlwStatus::Ok);
    assert!((v - -20.642_932_474_421_786).abs() < 1e-8);
    assert_eq!(unsafe { nlw_table_get(t, 3, &mut v) }, NlwStatus::Domain);
    assert_eq!(unsafe { nlw_table_len(ptr::null()) }, 0);
    unsafe {
        nlw_table_free(t);
        nlw_kernel_free(k);
    }
}

#[test]
fn solve_and_round_trip() {
    let k = kernel(1, 1.0, 1.0);
    let mut t = ptr::null_mut();
    let (mut f, mut g, mut b, mut u) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
    unsafe {
        assert_eq!(nlw_table_build(k, 6, &mut t), NlwStatus::Ok);
        assert_eq!(nlw_field_synthetic(1, 6, 2.0, 1, &mut f), NlwStatus::Ok);
        assert_eq!(nlw_field_synthetic(1, 6, 2.0, 2, &mut g), NlwStatus::Ok);
        assert_eq!(nlw_field_synthetic(1, 6, 2.0, 3, &mut b), NlwStatus::Ok);

        assert_eq!(nlw_solve(t, f, ptr::null(), ptr::null(), 1.0, 0, &mut u), NlwStatus::NullPointer);
        assert_eq!(nlw_solve(t, ptr::null(), ptr::null(), b, 0.0, 0, &mut u), NlwStatus::Ok);
        let mut norm = -1.0;
        assert_eq!(nlw_field_sobolev_norm(u, 0.0, &mut norm), NlwStatus::Ok);
        assert_eq!(norm, 0.0);
        nlw_field_free(u);

        assert_eq!(nlw_solve(t, f, g, b, 0.5, 1, &mut u), NlwStatus::Ok);
        let mut json = ptr::null_mut();
        assert_eq!(nlw_field_to_json(u, &mut json), NlwStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(nlw_field_from_json(json, &mut back), NlwStatus::Ok);
        nlw_string_free(json);
        for j in -6i64..=6 {
            let (mut a, mut ai, mut c, mut ci) = (0.0, 0.0, 0.0, 0.0);
            assert_eq!(nlw_field_coeff(u, &j, 1, &mut a, &mut ai), NlwStatus::Ok);
            assert_eq!(nlw_field_coeff(back, &j, 1, &mut c, &mut ci), NlwStatus::Ok);
            assert_eq!((a, ai), (c, ci));
        }
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(nlw_field_coeff(u, [7i64].as_ptr(), 1, &mut re, &mut im), NlwStatus::Shape);

        let mut wrong = ptr::null_mut();
        assert_eq!(nlw_field_synthetic(2, 6, 2.0, 1, &mut wrong), NlwStatus::Ok);
        let mut out = ptr::null_mut();
        assert_eq!(nlw_solve(t, wrong, wrong, ptr::null(), 1.0, 0, &mut out), NlwStatus::Shape);

        nlw_field_free(wrong);
        nlw_field_free(back);
        nlw_field_free(u);
        nlw_field_free(b);
        nlw_field_free(g);
        nlw_field_free(f);
        nlw_table_free(t);
        nlw_kernel_free(k);
    }
}

#[test]
fn c_program_links_against_static_library() {
    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler found, skipping");
        return;
    };
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libnonlocal_wave_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built, skipping", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let status = Command::new(&cc)
        .arg(manifest.join("tests/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("\"dim\":1"));
}

fn which_cc() -> Result<String, ()> {
    for cc in ["cc", "gcc", "clang"] {
        if Command::new(cc).arg("--version").output().is_ok_and(|o| o.status.success()) {
            return Ok(cc.to_string());
        }
    }
    Err(())
}
