//! C interface to `hochdef`.
//!
//! Every function returns an [`HdStatus`]; results go through out-pointers.
//! Objects are opaque handles released with the matching `*_free`. After a
//! non-`Ok` status, [`hd_last_error`] describes the failure on the calling
//! thread. Strings returned to the caller are released with
//! [`hd_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{self, AssertUnwindSafe};

use num_traits::ToPrimitive;

use hochdef::config::Config;
use hochdef::hochschild::HochschildComplex;
use hochdef::mutation_lattice::{self, GramLattice};
use hochdef::quiver_algebra::{algebra_from_text, catalog};
use hochdef::report::Report;
use hochdef::FiniteDimAlgebra;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    OutOfRange = 4,
    Compute = 5,
    Overflow = 6,
    Panic = 7,
}

pub struct HdAlgebra(FiniteDimAlgebra);
pub struct HdLattice(GramLattice);
pub struct HdReport(Report);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl ToString) {
    let c = CString::new(msg.to_string().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: HdStatus, msg: impl ToString) -> HdStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> HdStatus) -> HdStatus {
    match panic::catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(HdStatus::Panic, "internal panic"),
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, HdStatus> {
    if p.is_null() {
        return Err(fail(HdStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(HdStatus::InvalidUtf8, "string is not UTF-8"))
}

unsafe fn write<T>(out: *mut T, v: T) -> HdStatus {
    if out.is_null() {
        return fail(HdStatus::NullPointer, "null output pointer");
    }
    out.write(v);
    HdStatus::Ok
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> HdStatus {
    match CString::new(s) {
        Ok(c) => write(out, c.into_raw()),
        Err(_) => fail(HdStatus::Compute, "output contains a NUL byte"),
    }
}

macro_rules! deref {
    ($p:expr) => {
        match $p.as_ref() {
            Some(x) => x,
            None => return fail(HdStatus::NullPointer, "null handle"),
        }
    };
}

macro_rules! tri {
    ($e:expr, $status:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return fail($status, e),
        }
    };
}

/// Message for the last failure on this thread; empty if none. Valid until
/// the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn hd_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn hd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a quiver description (`vertices`, `arrow`, `rel` lines).
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hd_algebra_from_text(text: *const c_char, out: *mut *mut HdAlgebra) -> HdStatus {
    guard(|| {
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let a = tri!(algebra_from_text(text), HdStatus::Parse);
        write(out, Box::into_raw(Box::new(HdAlgebra(a))))
    })
}

/// One of `a3`, `a3-rel`, `kronecker`, `point`, `beilinson-p2`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hd_algebra_builtin(name: *const c_char, out: *mut *mut HdAlgebra) -> HdStatus {
    guard(|| {
        let name = match read_str(name) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let Some(text) = catalog::by_name(name) else {
            return fail(HdStatus::OutOfRange, format!("unknown algebra {name}"));
        };
        let a = tri!(algebra_from_text(text), HdStatus::Parse);
        write(out, Box::into_raw(Box::new(HdAlgebra(a))))
    })
}

/// `k[x]/(x^m)`, `m >= 1`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hd_algebra_truncated_polynomial(m: usize, out: *mut *mut HdAlgebra) -> HdStatus {
    guard(|| {
        if m == 0 {
            return fail(HdStatus::OutOfRange, "m must be positive");
        }
        write(out, Box::into_raw(Box::new(HdAlgebra(FiniteDimAlgebra::truncated_polynomial(m)))))
    })
}

/// # Safety
/// `a` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn hd_algebra_free(a: *mut HdAlgebra) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// # Safety
/// `a` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hd_algebra_dim(a: *const HdAlgebra, out: *mut usize) -> HdStatus {
    guard(|| write(out, deref!(a).0.dim()))
}

/// `dim HH^degree(A, A)` with the default budget.
///
/// # Safety
/// `a` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hd_algebra_hh_dimension(a: *const HdAlgebra, degree: usize, out: *mut usize) -> HdStatus {
    guard(|| {
        let a = deref!(a);
        let d = tri!(HochschildComplex::new(&a.0).hh_dimension(degree), HdStatus::Compute);
        write(out, d)
    })
}

/// Parses the lattice text format (`n`, `d`, Gram rows, optional `ranks`
/// and `labels`).
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hd_lattice_from_text(text: *const c_char, out: *mut *mut HdLattice) -> HdStatus {
    guard(|| {
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let l = tri!(GramLattice::from_text(text), HdStatus::Parse);
        write(out, Box::into_raw(Box::new(HdLattice(l))))
    })
}

/// # Safety
/// `l` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn hd_lattice_free(l: *mut HdLattice) {
    if !l.is_null() {
        drop(Box::from_raw(l));
    }
}

/// # Safety
/// `l` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hd_lattice_len(l: *const HdLattice, out: *mut usize) -> HdStatus {
    guard(|| write(out, deref!(l).0.len()))
}

/// `χ(E_i, E_j)` for the current collection, 0-based.
///
/// # Safety
/// `l` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hd_lattice_gram_entry(l: *const HdLattice, i: usize, j: usize, out: *mut i64) -> HdStatus {
    guard(|| {
        let l = &deref!(l).0;
        if i >= l.len() || j >= l.len() {
            return fail(HdStatus::OutOfRange, format!("entry ({i}, {j}) of a {} x {} matrix", l.len(), l.len()));
        }
        let v = &l.gram()[i][j];
        match v.is_integer().then(|| v.to_integer().to_i64()).flatten() {
            Some(x) => write(out, x),
            None => fail(HdStatus::Overflow, format!("{v} does not fit in 64 bits")),
        }
    })
}

/// Applies a word such as `"L1 R2"` and returns a new lattice.
///
/// # Safety
/// `l` must be a live handle, `word` a NUL-terminated string and `out` a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hd_lattice_mutate(l: *const HdLattice, word: *const c_char, out: *mut *mut HdLattice) -> HdStatus {
    guard(|| {
        let l = deref!(l);
        let word = match read_str(word) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let w = tri!(mutation_lattice::parse_word(word), HdStatus::Parse);
        let m = tri!(l.0.apply_word(&w), HdStatus::OutOfRange);
        write(out, Box::into_raw(Box::new(HdLattice(m))))
    })
}

/// # Safety
/// `l` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hd_lattice_to_text(l: *const HdLattice, out: *mut *mut c_char) -> HdStatus {
    guard(|| write_string(out, deref!(l).0.to_text()))
}

/// # Safety
/// `l` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hd_lattice_helix_check(l: *const HdLattice, out: *mut *mut HdReport) -> HdStatus {
    guard(|| {
        let r = deref!(l).0.helix_check();
        write(out, Box::into_raw(Box::new(HdReport(r))))
    })
}

/// Runs the full self-test with the given seed.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hd_selftest(seed: u64, out: *mut *mut HdReport) -> HdStatus {
    guard(|| {
        let cfg = Config { seed, ..Config::default() };
        let r = hochdef::selftest::selftest(&cfg, None);
        write(out, Box::into_raw(Box::new(HdReport(r))))
    })
}

/// # Safety
/// `r` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn hd_report_free(r: *mut HdReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// # Safety
/// `r` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hd_report_passed(r: *const HdReport, out: *mut bool) -> HdStatus {
    guard(|| write(out, deref!(r).0.all_passed()))
}

/// # Safety
/// `r` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hd_report_check_count(r: *const HdReport, out: *mut usize) -> HdStatus {
    guard(|| write(out, deref!(r).0.checks.len()))
}

/// Human-readable text, or JSON when `machine` is true.
///
/// # Safety
/// `r` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hd_report_to_text(r: *const HdReport, machine: bool, out: *mut *mut c_char) -> HdStatus {
    guard(|| {
        let r = &deref!(r).0;
        write_string(out, if machine { r.to_machine() } else { r.to_human() })
    })
}
