use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use locus_ffi::*;

fn solve(mults: &[u32]) -> *mut LocusArrangement {
    let mut a = ptr::null_mut();
    let mut info = LocusSolveInfo::default();
    let s = unsafe { locus_solve(mults.as_ptr(), mults.len(), 0.0, 0, &mut a, &mut info) };
    assert_eq!(s, LocusStatus::Ok);
    assert!(info.gradient_inf_norm <= 1e-12);
    a
}

fn last_error() -> String {
    let p = locus_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn solve_and_inspect() {
    let a = solve(&[2, 1, 1]);
    unsafe {
        assert_eq!(locus_arrangement_len(a), 3);
        let mut th = [0.0; 3];
        assert_eq!(locus_arrangement_thetas(a, th.as_mut_ptr(), 3), LocusStatus::Ok);
        assert_eq!(th[0], 0.0);
        assert!((th[1] + th[2] - 2.0 * std::f64::consts::PI).abs() < 1e-12);
        let mut m = [0u32; 3];
        assert_eq!(locus_arrangement_multiplicities(a, m.as_mut_ptr(), 3), LocusStatus::Ok);
        assert_eq!(m, [2, 1, 1]);

        let mut force = f64::NAN;
        assert_eq!(locus_cm_force(a, 1, &mut force), LocusStatus::Ok);
        assert!(force.abs() < 1e-9);

        let mut v = LocusVerdict::default();
        assert_eq!(locus_verify(a, ptr::null(), &mut v), LocusStatus::Ok);
        assert!(v.first_locus_pass && v.all_locus_pass && v.coarsely_coxeter);

        let mut rel = f64::NAN;
        assert_eq!(locus_residual(a, 0, 2, ptr::null_mut(), &mut rel), LocusStatus::Ok);
        assert!(rel < 1e-8);
        locus_arrangement_free(a);
    }
}

#[test]
fn json_round_trip() {
    let a = solve(&[3, 1, 2, 1]);
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(locus_arrangement_to_json(a, &mut s), LocusStatus::Ok);
        let mut b = ptr::null_mut();
        assert_eq!(locus_arrangement_from_json(s, &mut b), LocusStatus::Ok);
        let (mut ta, mut tb) = ([0.0; 4], [0.0; 4]);
        locus_arrangement_thetas(a, ta.as_mut_ptr(), 4);
        locus_arrangement_thetas(b, tb.as_mut_ptr(), 4);
        assert_eq!(ta, tb);
        locus_string_free(s);

        let mut report = ptr::null_mut();
        assert_eq!(locus_report_json(b, ptr::null(), &mut report), LocusStatus::Ok);
        let text = CStr::from_ptr(report).to_str().unwrap();
        let v: serde_json::Value = serde_json::from_str(text).unwrap();
        assert_eq!(v["all_locus_pass"], true);
        locus_string_free(report);
        locus_arrangement_free(a);
        locus_arrangement_free(b);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut a = ptr::null_mut();
        let bad = [0u32, 1];
        assert_eq!(locus_solve(bad.as_ptr(), 2, 0.0, 0, &mut a, ptr::null_mut()), LocusStatus::InvalidArgument);
        assert!(a.is_null());
        assert!(!last_error().is_empty());

        assert_eq!(locus_solve(ptr::null(), 2, 0.0, 0, &mut a, ptr::null_mut()), LocusStatus::NullPointer);

        let m = [1u32, 2, 3, 4, 5, 6];
        assert_eq!(locus_solve(m.as_ptr(), 6, 0.0, 1, &mut a, ptr::null_mut()), LocusStatus::NoConvergence);

        let json = CString::new("{\"multiplicities\": [1]}").unwrap();
        assert_eq!(locus_arrangement_from_json(json.as_ptr(), &mut a), LocusStatus::Schema);

        let th = [0.0, 0.0];
        let m = [1u32, 1];
        assert_eq!(locus_arrangement_new(m.as_ptr(), th.as_ptr(), 2, &mut a), LocusStatus::InvalidArgument);

        let th = [0.0, 1e-14, 3.0];
        let m = [1u32, 1, 1];
        assert_eq!(locus_arrangement_new(m.as_ptr(), th.as_ptr(), 3, &mut a), LocusStatus::Ok);
        let mut mu = 0.0;
        assert_eq!(locus_cm_potential(a, &mut mu), LocusStatus::Collision);
        let mut buf = [0.0; 2];
        assert_eq!(locus_arrangement_thetas(a, buf.as_mut_ptr(), 2), LocusStatus::BufferTooSmall);
        assert_eq!(locus_residual(a, 0, 0, ptr::null_mut(), ptr::null_mut()), LocusStatus::InvalidArgument);
        locus_arrangement_free(a);

        locus_arrangement_free(ptr::null_mut());
        locus_string_free(ptr::null_mut());
        assert_eq!(locus_arrangement_len(ptr::null()), 0);
    }
}

#[test]
fn coarse_symmetry_and_status_strings() {
    let mut out = false;
    let m = [2u32, 3, 1, 1];
    assert_eq!(unsafe { locus_is_coarsely_symmetric(m.as_ptr(), 4, &mut out) }, LocusStatus::Ok);
    assert!(!out);
    let m = [2u32, 1, 1];
    unsafe { locus_is_coarsely_symmetric(m.as_ptr(), 3, &mut out) };
    assert!(out);
    let s = unsafe { CStr::from_ptr(locus_status_string(LocusStatus::BufferTooSmall)) };
    assert_eq!(s.to_str().unwrap(), "output buffer too small");
    let t = locus_default_tolerances();
    assert_eq!((t.first, t.locus, t.reflection), (1e-9, 1e-8, 1e-9));
}

fn target_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_static_library() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let lib = target_dir().join("liblocus_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler or static library");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("n=3 all=1 theta1="), "{stdout}");
    assert!(stdout.trim_end().ends_with("status=6"), "{stdout}");
}
