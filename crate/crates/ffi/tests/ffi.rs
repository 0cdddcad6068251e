use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use et0l_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn take(p: *mut std::ffi::c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { et0l_string_free(p) };
    s
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(et0l_last_error()) }.to_str().unwrap().to_string()
}

#[test]
fn group_round_trip_through_handles() {
    let text = c(et0l_core::corpus::GRIGORCHUK);
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { et0l_group_parse(text.as_ptr(), &mut g) }, Et0lStatus::Ok);

    let mut image = ptr::null_mut();
    let st = unsafe { et0l_group_eval(g, c("a b").as_ptr(), c("111").as_ptr(), &mut image) };
    assert_eq!(st, Et0lStatus::Ok);
    assert_eq!(take(image), "212");

    let mut trivial = false;
    assert_eq!(unsafe { et0l_group_is_trivial(g, c("b c d").as_ptr(), &mut trivial) }, Et0lStatus::Ok);
    assert!(trivial);

    let mut m = ptr::null_mut();
    assert_eq!(unsafe { et0l_group_coword_machine(g, &mut m) }, Et0lStatus::Ok);
    let mut accepted = false;
    assert_eq!(unsafe { et0l_machine_accepts(m, c("a b").as_ptr(), 3, -1, &mut accepted) }, Et0lStatus::Ok);
    assert!(accepted);

    let mut report = ptr::null_mut();
    assert_eq!(unsafe { et0l_group_coword_crosscheck(g, 2, &mut report) }, Et0lStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(report)).unwrap();
    assert_eq!(v["words_checked"], 21);
    assert_eq!(v["disagreements"].as_array().unwrap().len(), 0);

    unsafe {
        et0l_machine_free(m);
        et0l_group_free(g);
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    let mut g = ptr::null_mut();
    let bad = et0l_core::corpus::GRIGORCHUK.replace(r#""perm": ["2", "1"]"#, r#""perm": ["1", "1"]"#);
    assert_eq!(unsafe { et0l_group_parse(c(&bad).as_ptr(), &mut g) }, Et0lStatus::Permutation);
    assert!(g.is_null());
    assert!(last_error().contains('a'));

    let mut out = ptr::null_mut();
    assert_eq!(unsafe { et0l_grammar_parse(ptr::null(), &mut out) }, Et0lStatus::NullArgument);
    assert_eq!(unsafe { et0l_machine_validate(ptr::null(), ptr::null_mut()) }, Et0lStatus::NullArgument);

    let text = c(et0l_core::corpus::CLIMBER);
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { et0l_machine_parse(text.as_ptr(), &mut m) }, Et0lStatus::Ok);
    let mut g2 = ptr::null_mut();
    assert_eq!(unsafe { et0l_machine_to_grammar(m, &mut g2) }, Et0lStatus::NotNormalized);
    let mut n = ptr::null_mut();
    assert_eq!(unsafe { et0l_machine_normalize(m, &mut n) }, Et0lStatus::Ok);
    assert_eq!(unsafe { et0l_machine_to_grammar(n, &mut g2) }, Et0lStatus::Ok);
    assert_eq!(last_error(), "");
    unsafe {
        et0l_grammar_free(g2);
        et0l_machine_free(n);
        et0l_machine_free(m);
    }
}

#[test]
fn c_program_links_against_the_static_library() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let profile = if cfg!(debug_assertions) { "debug" } else { "release" };
    let target = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("..").join(profile);
    let lib = target.join("libet0l_ffi.a");
    assert!(lib.exists(), "{} missing", lib.display());
    let exe = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("et0l_smoke");
    let status = Command::new("cc")
        .arg(manifest.join("tests/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("C compiler runs");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
