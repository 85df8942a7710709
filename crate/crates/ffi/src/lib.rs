//! C ABI for hyperassoc.
//!
//! Arrays, hierarchies and exported triples are opaque heap handles, each
//! released with its own `_free` function. Fallible calls return an
//! [`HaStatus`] and write results through out-pointers; after a failure
//! [`ha_last_error`] describes it. Strings are NUL-terminated UTF-8.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use hyperassoc::{AssocArray, CutSpec, Error, HierArray, Semiring, TripleList};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Config = 3,
    MalformedTriples = 4,
    Domain = 5,
    SemiringMismatch = 6,
    Parse = 7,
    Format = 8,
    Io = 9,
    OutOfRange = 10,
    Panic = 11,
}

/// An associative array.
pub struct HaAssoc(AssocArray);

/// A hierarchical array.
pub struct HaHier(HierArray);

/// Triples exported from an array, in row-major key order.
pub struct HaTriples {
    rows: Vec<CString>,
    cols: Vec<CString>,
    vals: Vec<f64>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(HaStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Config(_) => HaStatus::Config,
            Error::MalformedTriples(_) => HaStatus::MalformedTriples,
            Error::Domain { .. } => HaStatus::Domain,
            Error::SemiringMismatch { .. } => HaStatus::SemiringMismatch,
            Error::Parse { .. } => HaStatus::Parse,
            Error::Format(_) => HaStatus::Format,
            Error::Io { .. } => HaStatus::Io,
        };
        Failure(code, e.to_string())
    }
}

fn set_last_error(msg: &str) {
    let msg = CString::new(msg.replace('\0', "\\0")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> HaStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error("");
            HaStatus::Ok
        }
        Ok(Err(Failure(code, msg))) => {
            set_last_error(&msg);
            code
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(&format!("panic: {msg}"));
            HaStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(HaStatus::NullPointer, format!("{what} is null"))
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn borrow_mut<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(HaStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn semiring(name: *const c_char) -> Result<Semiring, Failure> {
    Ok(Semiring::builtin(text(name, "semiring")?)?)
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_assoc(out: *mut *mut HaAssoc, a: AssocArray) -> Result<(), Failure> {
    put(out, Box::into_raw(Box::new(HaAssoc(a))))
}

/// Message for the most recent call on this thread; empty after a success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ha_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// An empty array under the named semiring (`plus_times`, `max_plus`,
/// `min_plus`, `max_times`, `min_times`, `max_min`, `min_max`).
///
/// # Safety
/// `semiring_name` must be a valid C string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ha_assoc_empty(
    semiring_name: *const c_char,
    out: *mut *mut HaAssoc,
) -> HaStatus {
    guard(|| put_assoc(out, AssocArray::empty(semiring(semiring_name)?)))
}

/// Builds an array from `len` parallel triples; duplicates are folded with
/// the semiring's addition.
///
/// # Safety
/// `rows` and `cols` must point to `len` valid C strings and `vals` to `len`
/// doubles (any of them may be null when `len` is 0).
#[no_mangle]
pub unsafe extern "C" fn ha_assoc_from_triples(
    semiring_name: *const c_char,
    rows: *const *const c_char,
    cols: *const *const c_char,
    vals: *const f64,
    len: usize,
    out: *mut *mut HaAssoc,
) -> HaStatus {
    guard(|| {
        let s = semiring(semiring_name)?;
        let mut t = TripleList::with_capacity(len);
        if len > 0 {
            if rows.is_null() || cols.is_null() || vals.is_null() {
                return Err(null("triple arrays"));
            }
            let rows = std::slice::from_raw_parts(rows, len);
            let cols = std::slice::from_raw_parts(cols, len);
            let vals = std::slice::from_raw_parts(vals, len);
            for i in 0..len {
                t.push(
                    text(rows[i], "row key")?,
                    text(cols[i], "column key")?,
                    vals[i],
                );
            }
        }
        put_assoc(out, AssocArray::construct(&t, s)?)
    })
}

/// Releases an array. Null is ignored.
///
/// # Safety
/// `a` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ha_assoc_free(a: *mut HaAssoc) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

unsafe fn binary(
    a: *const HaAssoc,
    b: *const HaAssoc,
    out: *mut *mut HaAssoc,
    op: fn(&AssocArray, &AssocArray) -> hyperassoc::Result<AssocArray>,
) -> HaStatus {
    guard(|| {
        let (a, b) = (borrow(a, "left array")?, borrow(b, "right array")?);
        put_assoc(out, op(&a.0, &b.0)?)
    })
}

/// Element-wise sum `a ⊕ b`.
///
/// # Safety
/// `a` and `b` must be live arrays and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ha_assoc_add(
    a: *const HaAssoc,
    b: *const HaAssoc,
    out: *mut *mut HaAssoc,
) -> HaStatus {
    binary(a, b, out, AssocArray::ew_add)
}

/// Element-wise product `a ⊗ b`.
///
/// # Safety
/// `a` and `b` must be live arrays and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ha_assoc_mult(
    a: *const HaAssoc,
    b: *const HaAssoc,
    out: *mut *mut HaAssoc,
) -> HaStatus {
    binary(a, b, out, AssocArray::ew_mult)
}

/// Array product `a ⊕.⊗ b`.
///
/// # Safety
/// `a` and `b` must be live arrays and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ha_assoc_matmul(
    a: *const HaAssoc,
    b: *const HaAssoc,
    out: *mut *mut HaAssoc,
) -> HaStatus {
    binary(a, b, out, AssocArray::array_mult)
}

/// # Safety
/// `a` must be a live array and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ha_assoc_transpose(a: *const HaAssoc, out: *mut *mut HaAssoc) -> HaStatus {
    guard(|| put_assoc(out, borrow(a, "array")?.0.transpose()))
}

/// Number of stored entries.
///
/// # Safety
/// `a` must be a live array and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ha_assoc_nnz(a: *const HaAssoc, out: *mut usize) -> HaStatus {
    guard(|| put(out, borrow(a, "array")?.0.nnz()))
}

/// Looks up one entry. Absent entries set `found` to false and `value` to
/// the semiring zero.
///
/// # Safety
/// `a` must be a live array, the keys valid C strings and the outputs
/// writable.
#[no_mangle]
pub unsafe extern "C" fn ha_assoc_get(
    a: *const HaAssoc,
    row: *const c_char,
    col: *const c_char,
    value: *mut f64,
    found: *mut bool,
) -> HaStatus {
    guard(|| {
        let a = &borrow(a, "array")?.0;
        let v = a.get(text(row, "row key")?, text(col, "column key")?);
        put(found, v.is_some())?;
        put(value, v.unwrap_or(a.semiring().zero()))
    })
}

/// Whether two arrays hold the same triples under the same semiring.
///
/// # Safety
/// `a` and `b` must be live arrays and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ha_assoc_equal(
    a: *const HaAssoc,
    b: *const HaAssoc,
    out: *mut bool,
) -> HaStatus {
    guard(|| {
        put(
            out,
            borrow(a, "left array")?.0 == borrow(b, "right array")?.0,
        )
    })
}

/// Copies the stored entries out of `a`.
///
/// # Safety
/// `a` must be a live array and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ha_assoc_triples(a: *const HaAssoc, out: *mut *mut HaTriples) -> HaStatus {
    guard(|| {
        let a = &borrow(a, "array")?.0;
        let c = |k: &str| {
            CString::new(k)
                .map_err(|_| Failure(HaStatus::Format, format!("key {k:?} contains NUL")))
        };
        let mut t = HaTriples {
            rows: Vec::with_capacity(a.nnz()),
            cols: Vec::with_capacity(a.nnz()),
            vals: Vec::with_capacity(a.nnz()),
        };
        for (r, col, v) in a.iter() {
            t.rows.push(c(r)?);
            t.cols.push(c(col)?);
            t.vals.push(v);
        }
        put(out, Box::into_raw(Box::new(t)))
    })
}

/// Number of exported triples; 0 for null.
///
/// # Safety
/// `t` must be null or live.
#[no_mangle]
pub unsafe extern "C" fn ha_triples_len(t: *const HaTriples) -> usize {
    t.as_ref().map_or(0, |t| t.vals.len())
}

/// Triple `index`. The key pointers stay valid until `t` is freed.
///
/// # Safety
/// `t` must be live and the outputs writable.
#[no_mangle]
pub unsafe extern "C" fn ha_triples_get(
    t: *const HaTriples,
    index: usize,
    row: *mut *const c_char,
    col: *mut *const c_char,
    value: *mut f64,
) -> HaStatus {
    guard(|| {
        let t = borrow(t, "triples")?;
        if index >= t.vals.len() {
            return Err(Failure(
                HaStatus::OutOfRange,
                format!("index {index} out of range for {} triples", t.vals.len()),
            ));
        }
        put(row, t.rows[index].as_ptr())?;
        put(col, t.cols[index].as_ptr())?;
        put(value, t.vals[index])
    })
}

/// # Safety
/// `t` must come from [`ha_assoc_triples`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ha_triples_free(t: *mut HaTriples) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Writes `a` as tab-separated triples.
///
/// # Safety
/// `a` must be a live array and `path` a valid C string.
#[no_mangle]
pub unsafe extern "C" fn ha_assoc_write(a: *const HaAssoc, path: *const c_char) -> HaStatus {
    guard(|| {
        Ok(hyperassoc::io::write_triples(
            &borrow(a, "array")?.0,
            text(path, "path")?,
        )?)
    })
}

/// Reads tab-separated triples, folding duplicate lines with `⊕`.
///
/// # Safety
/// `path` and `semiring_name` must be valid C strings and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ha_assoc_read(
    path: *const c_char,
    semiring_name: *const c_char,
    out: *mut *mut HaAssoc,
) -> HaStatus {
    guard(|| {
        let s = semiring(semiring_name)?;
        put_assoc(out, hyperassoc::io::read_triples(text(path, "path")?, s)?)
    })
}

/// A hierarchical array. `cuts` is `none`, `few-wide`, `many-narrow`,
/// `layers:N` or a comma-separated list of strictly increasing cut values.
///
/// # Safety
/// `semiring_name` and `cuts` must be valid C strings and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ha_hier_new(
    semiring_name: *const c_char,
    cuts: *const c_char,
    out: *mut *mut HaHier,
) -> HaStatus {
    guard(|| {
        let s = semiring(semiring_name)?;
        let cuts = CutSpec::parse(text(cuts, "cuts")?)?;
        put(
            out,
            Box::into_raw(Box::new(HaHier(HierArray::new(cuts, s)))),
        )
    })
}

/// Adds a copy of `batch` into the hierarchy, cascading full layers.
///
/// # Safety
/// `h` and `batch` must be live.
#[no_mangle]
pub unsafe extern "C" fn ha_hier_update(h: *mut HaHier, batch: *const HaAssoc) -> HaStatus {
    guard(|| {
        let h = borrow_mut(h, "hierarchy")?;
        Ok(h.0.update(borrow(batch, "batch")?.0.clone())?)
    })
}

/// Sum of all layers as a new array; the hierarchy is unchanged.
///
/// # Safety
/// `h` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ha_hier_flush(h: *const HaHier, out: *mut *mut HaAssoc) -> HaStatus {
    guard(|| put_assoc(out, borrow(h, "hierarchy")?.0.flush()))
}

/// Number of layers, one more than the number of cuts.
///
/// # Safety
/// `h` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ha_hier_layer_count(h: *const HaHier, out: *mut usize) -> HaStatus {
    guard(|| put(out, borrow(h, "hierarchy")?.0.layers().len()))
}

/// Stored entries in layer `layer` (0-based).
///
/// # Safety
/// `h` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ha_hier_layer_nnz(
    h: *const HaHier,
    layer: usize,
    out: *mut usize,
) -> HaStatus {
    guard(|| {
        let layers = borrow(h, "hierarchy")?.0.layers();
        let a = layers.get(layer).ok_or_else(|| {
            Failure(
                HaStatus::OutOfRange,
                format!("layer {layer} out of range for {} layers", layers.len()),
            )
        })?;
        put(out, a.nnz())
    })
}

/// Stored entries summed over all layers (an upper bound on the flushed
/// nnz).
///
/// # Safety
/// `h` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ha_hier_nnz(h: *const HaHier, out: *mut usize) -> HaStatus {
    guard(|| put(out, borrow(h, "hierarchy")?.0.nnz().total))
}

/// # Safety
/// `h` must come from [`ha_hier_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ha_hier_free(h: *mut HaHier) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}
