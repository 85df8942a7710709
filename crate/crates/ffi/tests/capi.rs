use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use hyperassoc_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(ha_last_error()) }
        .to_string_lossy()
        .into_owned()
}

/// Builds an array through the C entry point.
fn build(semiring: &str, triples: &[(&str, &str, f64)]) -> Result<*mut HaAssoc, HaStatus> {
    let rows: Vec<CString> = triples.iter().map(|t| c(t.0)).collect();
    let cols: Vec<CString> = triples.iter().map(|t| c(t.1)).collect();
    let row_ptrs: Vec<*const c_char> = rows.iter().map(|s| s.as_ptr()).collect();
    let col_ptrs: Vec<*const c_char> = cols.iter().map(|s| s.as_ptr()).collect();
    let vals: Vec<f64> = triples.iter().map(|t| t.2).collect();
    let mut out = ptr::null_mut();
    let status = unsafe {
        ha_assoc_from_triples(
            c(semiring).as_ptr(),
            row_ptrs.as_ptr(),
            col_ptrs.as_ptr(),
            vals.as_ptr(),
            triples.len(),
            &mut out,
        )
    };
    if status == HaStatus::Ok {
        Ok(out)
    } else {
        Err(status)
    }
}

fn export(a: *const HaAssoc) -> Vec<(String, String, f64)> {
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { ha_assoc_triples(a, &mut t) }, HaStatus::Ok);
    let n = unsafe { ha_triples_len(t) };
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let (mut r, mut col, mut v) = (ptr::null(), ptr::null(), 0.0);
        assert_eq!(
            unsafe { ha_triples_get(t, i, &mut r, &mut col, &mut v) },
            HaStatus::Ok
        );
        let s = |p| unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
        out.push((s(r), s(col), v));
    }
    unsafe { ha_triples_free(t) };
    out
}

fn owned(v: &[(&str, &str, f64)]) -> Vec<(String, String, f64)> {
    v.iter().map(|&(r, c, x)| (r.into(), c.into(), x)).collect()
}

#[test]
fn neighbor_query_through_the_abi() {
    // Edge list e1..e3 over vertices; E^T E counts shared edges.
    let e = build(
        "plus_times",
        &[
            ("e1", "a", 1.0),
            ("e1", "b", 1.0),
            ("e2", "b", 1.0),
            ("e2", "c", 1.0),
            ("e3", "a", 1.0),
        ],
    )
    .unwrap();
    let mut et = ptr::null_mut();
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(ha_assoc_transpose(e, &mut et), HaStatus::Ok);
        assert_eq!(ha_assoc_matmul(et, e, &mut g), HaStatus::Ok);
    }
    assert_eq!(
        export(g),
        owned(&[
            ("a", "a", 2.0),
            ("a", "b", 1.0),
            ("b", "a", 1.0),
            ("b", "b", 2.0),
            ("b", "c", 1.0),
            ("c", "b", 1.0),
            ("c", "c", 1.0),
        ])
    );
    let (mut v, mut found) = (0.0, false);
    unsafe {
        assert_eq!(
            ha_assoc_get(g, c("a").as_ptr(), c("c").as_ptr(), &mut v, &mut found),
            HaStatus::Ok
        );
        assert!(!found);
        assert_eq!(v, 0.0);
        ha_assoc_free(e);
        ha_assoc_free(et);
        ha_assoc_free(g);
    }
}

#[test]
fn duplicates_fold_and_zeros_vanish() {
    let a = build(
        "plus_times",
        &[("r", "c", 2.0), ("r", "c", -2.0), ("r", "d", 1.5)],
    )
    .unwrap();
    let mut n = 0;
    unsafe { assert_eq!(ha_assoc_nnz(a, &mut n), HaStatus::Ok) };
    assert_eq!(n, 1);
    assert_eq!(export(a), owned(&[("r", "d", 1.5)]));
    let m = build("max_plus", &[("r", "c", 2.0), ("r", "c", -2.0)]).unwrap();
    assert_eq!(export(m), owned(&[("r", "c", 2.0)]));
    unsafe {
        ha_assoc_free(a);
        ha_assoc_free(m);
    }
}

#[test]
fn errors_come_back_as_codes() {
    assert_eq!(build("no_such", &[]).unwrap_err(), HaStatus::Config);
    assert!(last_error().contains("no_such"), "{}", last_error());
    assert_eq!(
        build("max_times", &[("a", "b", -1.0)]).unwrap_err(),
        HaStatus::Domain
    );
    assert_eq!(
        build("plus_times", &[("a", "b", f64::NAN)]).unwrap_err(),
        HaStatus::Domain
    );

    let a = build("plus_times", &[("a", "b", 1.0)]).unwrap();
    let b = build("min_plus", &[("a", "b", 1.0)]).unwrap();
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(ha_assoc_add(a, b, &mut out), HaStatus::SemiringMismatch);
        assert!(out.is_null());
        assert_eq!(
            ha_assoc_add(a, ptr::null(), &mut out),
            HaStatus::NullPointer
        );
        assert_eq!(ha_assoc_add(a, a, ptr::null_mut()), HaStatus::NullPointer);
        let mut n = 0;
        assert_eq!(ha_assoc_nnz(a, &mut n), HaStatus::Ok);
        assert_eq!(last_error(), "");

        let bad = [0xffu8, 0];
        let mut v = 0.0;
        let mut f = false;
        let status = ha_assoc_get(a, bad.as_ptr().cast(), c("b").as_ptr(), &mut v, &mut f);
        assert_eq!(status, HaStatus::InvalidUtf8);

        let mut t = ptr::null_mut();
        assert_eq!(ha_assoc_triples(a, &mut t), HaStatus::Ok);
        let (mut r, mut col) = (ptr::null(), ptr::null());
        assert_eq!(
            ha_triples_get(t, 1, &mut r, &mut col, &mut v),
            HaStatus::OutOfRange
        );
        ha_triples_free(t);
        assert_eq!(ha_triples_len(ptr::null()), 0);

        ha_assoc_free(a);
        ha_assoc_free(b);
        ha_assoc_free(ptr::null_mut());
    }
}

#[test]
fn hierarchy_flush_matches_flat_sum() {
    let mut h = ptr::null_mut();
    unsafe {
        assert_eq!(
            ha_hier_new(c("plus_times").as_ptr(), c("2,5").as_ptr(), &mut h),
            HaStatus::Ok
        );
    }
    let mut flat = build("plus_times", &[]).unwrap();
    for k in 0..10 {
        let (r1, r2) = (format!("r{k}"), format!("r{}", k % 3));
        let batch = build(
            "plus_times",
            &[(&r1, "x", 1.0), (&r2, "y", 2.0), ("r0", "z", 0.5)],
        )
        .unwrap();
        let mut next = ptr::null_mut();
        unsafe {
            assert_eq!(ha_hier_update(h, batch), HaStatus::Ok);
            assert_eq!(ha_assoc_add(flat, batch, &mut next), HaStatus::Ok);
            ha_assoc_free(flat);
            ha_assoc_free(batch);
            let (mut n0, mut n1) = (0, 0);
            assert_eq!(ha_hier_layer_nnz(h, 0, &mut n0), HaStatus::Ok);
            assert_eq!(ha_hier_layer_nnz(h, 1, &mut n1), HaStatus::Ok);
            assert!(n0 <= 2 && n1 <= 5, "{n0} {n1}");
        }
        flat = next;
    }
    let mut flushed = ptr::null_mut();
    let (mut layers, mut eq) = (0, false);
    unsafe {
        assert_eq!(ha_hier_layer_count(h, &mut layers), HaStatus::Ok);
        assert_eq!(layers, 3);
        let mut n = 0;
        assert_eq!(ha_hier_layer_nnz(h, 3, &mut n), HaStatus::OutOfRange);
        assert_eq!(ha_hier_flush(h, &mut flushed), HaStatus::Ok);
        assert_eq!(ha_assoc_equal(flushed, flat, &mut eq), HaStatus::Ok);
        assert!(eq);
        assert_eq!(
            ha_hier_new(
                c("plus_times").as_ptr(),
                c("9,3").as_ptr(),
                &mut ptr::null_mut()
            ),
            HaStatus::Config
        );
        ha_hier_free(h);
        ha_assoc_free(flat);
        ha_assoc_free(flushed);
    }
}

#[test]
fn file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = c(dir.path().join("a.tsv").to_str().unwrap());
    let a = build(
        "min_plus",
        &[("k", "v", 3.0), ("k", "v", 1.0), ("j", "w", -4.0)],
    )
    .unwrap();
    let mut b = ptr::null_mut();
    let mut eq = false;
    unsafe {
        assert_eq!(ha_assoc_write(a, path.as_ptr()), HaStatus::Ok);
        assert_eq!(
            ha_assoc_read(path.as_ptr(), c("min_plus").as_ptr(), &mut b),
            HaStatus::Ok
        );
        assert_eq!(ha_assoc_equal(a, b, &mut eq), HaStatus::Ok);
        assert!(eq);
        let missing = c(dir.path().join("nope.tsv").to_str().unwrap());
        assert_eq!(
            ha_assoc_read(missing.as_ptr(), c("min_plus").as_ptr(), &mut b),
            HaStatus::Io
        );
        ha_assoc_free(a);
        ha_assoc_free(b);
    }
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include "hyperassoc.h"

int main(void) {
    const char *rows[] = {"a", "a", "b"};
    const char *cols[] = {"x", "x", "y"};
    double vals[] = {1.0, 2.0, 5.0};
    HaAssoc *arr = NULL, *t = NULL;
    if (ha_assoc_from_triples("plus_times", rows, cols, vals, 3, &arr) != HA_STATUS_OK) return 1;
    if (ha_assoc_transpose(arr, &t) != HA_STATUS_OK) return 2;
    size_t nnz = 0;
    ha_assoc_nnz(t, &nnz);
    double v = 0; bool found = false;
    ha_assoc_get(t, "x", "a", &v, &found);
    if (ha_assoc_empty("bogus", &arr) != HA_STATUS_CONFIG) return 3;
    printf("%zu %g %d\n", nnz, v, (int)found);
    ha_assoc_free(arr);
    ha_assoc_free(t);
    return 0;
}
"#;

#[test]
fn header_compiles_and_links_from_c() {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("no C compiler found; skipping");
        return;
    }
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    // The test executable lives in target/<profile>/deps; the static library
    // one level up.
    let exe = std::env::current_exe().unwrap();
    let lib_dir = exe.parent().unwrap().parent().unwrap();
    let lib = lib_dir.join("libhyperassoc_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built; skipping", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let bin = dir.path().join("main");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let out = Command::new(&cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let run = Command::new(&bin).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status);
    assert_eq!(String::from_utf8(run.stdout).unwrap(), "2 3 1\n");
}
