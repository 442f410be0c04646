//! C ABI over `bsgroupoid`.
//!
//! Every function returns a [`BsgStatus`]. Results come back through out
//! pointers. Handles are opaque and owned by the caller until passed to the
//! matching `*_free`. Strings returned through `char **` are allocated here and
//! must be released with [`bsg_string_free`]. After a non-`Ok` status,
//! [`bsg_last_error`] describes what went wrong on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bsgroupoid::bs::{is_identity, modular_hom, normalize, BSParams, GroupWord};
use bsgroupoid::cocycle::{classify_type, witness_values_at, BSLevelModel};
use bsgroupoid::groupoid::{FiniteMeasuredGroupoid, GroupoidDoc};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BsgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    VerificationFailed = 4,
    Panic = 5,
}

/// BS(p,q) parameters.
pub struct BsgParams(BSParams);

/// A word in a and t.
pub struct BsgWord(GroupWord);

/// A validated finite measured groupoid.
pub struct BsgGroupoid(FiniteMeasuredGroupoid);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: BsgStatus, msg: impl Into<String>) -> BsgStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> BsgStatus) -> BsgStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            fail(BsgStatus::Panic, msg)
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, BsgStatus> {
    if s.is_null() {
        return Err(fail(BsgStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(BsgStatus::InvalidUtf8, "string is not UTF-8"))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> BsgStatus {
    if out.is_null() {
        return fail(BsgStatus::NullPointer, "null output pointer");
    }
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            BsgStatus::Ok
        }
        Err(_) => fail(BsgStatus::InvalidArgument, "result contains a NUL byte"),
    }
}

unsafe fn write_handle<T>(out: *mut *mut T, value: T) -> BsgStatus {
    if out.is_null() {
        return fail(BsgStatus::NullPointer, "null output pointer");
    }
    *out = Box::into_raw(Box::new(value));
    BsgStatus::Ok
}

unsafe fn handle<'a, T>(h: *const T) -> Result<&'a T, BsgStatus> {
    h.as_ref().ok_or_else(|| fail(BsgStatus::NullPointer, "null handle"))
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a pointer obtained from this library that has not
/// been freed yet.
#[no_mangle]
pub unsafe extern "C" fn bsg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Copies the calling thread's last error message into `*out`; `*out` is set
/// to null if there is none.
///
/// # Safety
/// `out` must be a valid pointer to writable `char *` storage.
#[no_mangle]
pub unsafe extern "C" fn bsg_last_error(out: *mut *mut c_char) -> BsgStatus {
    if out.is_null() {
        return BsgStatus::NullPointer;
    }
    let msg = LAST_ERROR.with(|e| e.borrow().clone());
    *out = msg.map_or(ptr::null_mut(), CString::into_raw);
    BsgStatus::Ok
}

/// Library version, a static string that must not be freed.
#[no_mangle]
pub extern "C" fn bsg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Validates 2 ≤ |p| ≤ |q| and stores BS(p,q) in `*out`.
///
/// # Safety
/// `out` must be a valid pointer to writable handle storage.
#[no_mangle]
pub unsafe extern "C" fn bsg_params_new(p: i64, q: i64, out: *mut *mut BsgParams) -> BsgStatus {
    guard(|| match BSParams::new(p, q) {
        Ok(params) => write_handle(out, BsgParams(params)),
        Err(e) => fail(BsgStatus::InvalidArgument, e.to_string()),
    })
}

/// # Safety
/// `h` must be null or a handle from [`bsg_params_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bsg_params_free(h: *mut BsgParams) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Parses a word such as `"t^2 a^-5 T"`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` valid handle storage.
#[no_mangle]
pub unsafe extern "C" fn bsg_word_parse(text: *const c_char, out: *mut *mut BsgWord) -> BsgStatus {
    guard(|| {
        let s = try_status!(read_str(text));
        match s.parse::<GroupWord>() {
            Ok(w) => write_handle(out, BsgWord(w)),
            Err(e) => fail(BsgStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// # Safety
/// `h` must be null or a handle from [`bsg_word_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bsg_word_free(h: *mut BsgWord) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// 𝔪(w) as a reduced fraction such as `"9/4"`.
///
/// # Safety
/// Handles must be live; `out` must be valid `char *` storage.
#[no_mangle]
pub unsafe extern "C" fn bsg_modular(params: *const BsgParams, word: *const BsgWord, out: *mut *mut c_char) -> BsgStatus {
    guard(|| {
        let (p, w) = (try_status!(handle(params)), try_status!(handle(word)));
        write_string(out, modular_hom(&w.0, &p.0).value.to_string())
    })
}

/// Britton normal form of w, written as a word.
///
/// # Safety
/// Handles must be live; `out` must be valid `char *` storage.
#[no_mangle]
pub unsafe extern "C" fn bsg_normal_form(
    params: *const BsgParams,
    word: *const BsgWord,
    out: *mut *mut c_char,
) -> BsgStatus {
    guard(|| {
        let (p, w) = (try_status!(handle(params)), try_status!(handle(word)));
        write_string(out, normalize(&w.0, &p.0).to_string())
    })
}

/// `*out` = 1 if w is the identity of BS(p,q), else 0.
///
/// # Safety
/// Handles must be live; `out` must be a valid `int` pointer.
#[no_mangle]
pub unsafe extern "C" fn bsg_is_identity(params: *const BsgParams, word: *const BsgWord, out: *mut c_int) -> BsgStatus {
    guard(|| {
        let (p, w) = (try_status!(handle(params)), try_status!(handle(word)));
        if out.is_null() {
            return fail(BsgStatus::NullPointer, "null output pointer");
        }
        *out = c_int::from(is_identity(&w.0, &p.0));
        BsgStatus::Ok
    })
}

/// Reads and validates a groupoid in the JSON layout of `groupoid validate`.
/// A table that breaks an axiom gives `VerificationFailed`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` valid handle storage.
#[no_mangle]
pub unsafe extern "C" fn bsg_groupoid_from_json(json: *const c_char, out: *mut *mut BsgGroupoid) -> BsgStatus {
    guard(|| {
        let s = try_status!(read_str(json));
        let doc: GroupoidDoc = match serde_json::from_str(s) {
            Ok(d) => d,
            Err(e) => return fail(BsgStatus::InvalidArgument, e.to_string()),
        };
        match doc.to_groupoid().and_then(|g| g.validate().map(|_| g)) {
            Ok(g) => write_handle(out, BsgGroupoid(g)),
            Err(e) => fail(BsgStatus::VerificationFailed, e.to_string()),
        }
    })
}

/// # Safety
/// `h` must be null or a handle from [`bsg_groupoid_from_json`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bsg_groupoid_free(h: *mut BsgGroupoid) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Unit and arrow counts.
///
/// # Safety
/// `g` must be live; both outputs must be valid `size_t` pointers.
#[no_mangle]
pub unsafe extern "C" fn bsg_groupoid_size(g: *const BsgGroupoid, units: *mut usize, arrows: *mut usize) -> BsgStatus {
    guard(|| {
        let g = try_status!(handle(g));
        if units.is_null() || arrows.is_null() {
            return fail(BsgStatus::NullPointer, "null output pointer");
        }
        *units = g.0.n_units();
        *arrows = g.0.n_arrows();
        BsgStatus::Ok
    })
}

/// Type of the Radon-Nikodym cocycle as JSON, e.g. `{"type":"II"}`.
///
/// # Safety
/// `g` must be live; `out` must be valid `char *` storage.
#[no_mangle]
pub unsafe extern "C" fn bsg_groupoid_type(g: *const BsgGroupoid, out: *mut *mut c_char) -> BsgStatus {
    guard(|| {
        let g = try_status!(handle(g));
        write_string(out, classify_type(&g.0).to_json().to_string())
    })
}

/// 𝔇·𝔌 on the t-arrows of the level-(k,l) model. Writes the common value and
/// returns `VerificationFailed` if it differs from |q/p| anywhere.
///
/// # Safety
/// `params` must be live; `out` must be valid `char *` storage.
#[no_mangle]
pub unsafe extern "C" fn bsg_level_model_product(
    params: *const BsgParams,
    k: u32,
    l: u32,
    out: *mut *mut c_char,
) -> BsgStatus {
    guard(|| {
        let p = try_status!(handle(params)).0;
        let m = match BSLevelModel::new(p, k, l) {
            Ok(m) => m,
            Err(e) => return fail(BsgStatus::InvalidArgument, e.to_string()),
        };
        let w = match witness_values_at(&m.groupoid, &m.s, &m.t_map) {
            Ok(w) => w,
            Err(e) => return fail(BsgStatus::VerificationFailed, e.to_string()),
        };
        let products: Vec<_> = m.t_map.pairs().map(|(x, _)| &w.d[&x] * &w.i[&x]).collect();
        let Some(first) = products.first() else {
            return fail(BsgStatus::VerificationFailed, "no t-arrows");
        };
        let status = write_string(out, first.to_string());
        if status != BsgStatus::Ok {
            return status;
        }
        if products.iter().any(|v| *v != p.modulus_ratio()) {
            return fail(BsgStatus::VerificationFailed, format!("product differs from {}", p.modulus_ratio()));
        }
        BsgStatus::Ok
    })
}

/// Runs the command-line frontend on `argv[0..argc]` (without the program
/// name) and captures its output. `*exit_code` follows the CLI contract:
/// 0 success, 1 verification failure, 2 usage error.
///
/// # Safety
/// `argv` must point to `argc` NUL-terminated strings (it may be null when
/// `argc` is 0). The three outputs must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn bsg_cli_run(
    argv: *const *const c_char,
    argc: usize,
    out_stdout: *mut *mut c_char,
    out_stderr: *mut *mut c_char,
    exit_code: *mut c_int,
) -> BsgStatus {
    guard(|| {
        if (argv.is_null() && argc > 0) || out_stdout.is_null() || out_stderr.is_null() || exit_code.is_null() {
            return fail(BsgStatus::NullPointer, "null argument");
        }
        let mut args = vec!["bsgroupoid".to_string()];
        for i in 0..argc {
            args.push(try_status!(read_str(*argv.add(i))).to_string());
        }
        let out = bsgroupoid::cli::run(args);
        let s = write_string(out_stdout, out.stdout);
        if s != BsgStatus::Ok {
            return s;
        }
        let s = write_string(out_stderr, out.stderr);
        if s != BsgStatus::Ok {
            bsg_string_free(*out_stdout);
            *out_stdout = ptr::null_mut();
            return s;
        }
        *exit_code = out.code;
        BsgStatus::Ok
    })
}
