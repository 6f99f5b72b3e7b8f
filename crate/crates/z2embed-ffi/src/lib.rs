//! C ABI for the mod-2 embeddability engine.
//!
//! Complexes are opaque handles created from the same descriptors the CLI
//! accepts. Every function returns a status code; string outputs are
//! allocated here and must be released with `z2_string_free`. The last
//! error message is kept per thread and stays valid until the next failing
//! call on that thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use z2embed::gram::{OmegaKind, OmegaSpec};
use z2embed::search::{
    decide, parse_flavor, verify_certificate, Certificate, SearchBudget, SearchFlavor, Verdict,
};

/// Status code of every call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Z2Status {
    Ok = 0,
    NullPointer = 1,
    ParseError = 2,
    InvalidArgument = 3,
    InternalError = 4,
}

/// Decision outcome of `z2_decide`.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Z2Verdict {
    Yes = 0,
    No = 1,
    Unknown = 2,
}

/// Opaque handle to a parsed complex.
pub struct Z2Complex {
    flavor: SearchFlavor,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg).unwrap_or_else(|_| CString::new("invalid error text").unwrap());
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &z2embed::Error) -> Z2Status {
    match err {
        z2embed::Error::Parse(_) => Z2Status::ParseError,
        z2embed::Error::Invalid(_) | z2embed::Error::Shape(_) => Z2Status::InvalidArgument,
        _ => Z2Status::InternalError,
    }
}

fn fail(err: z2embed::Error) -> Z2Status {
    let status = status_of(&err);
    set_error(err.to_string());
    status
}

/// Message of the most recent error on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn z2_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| {
        e.borrow()
            .as_ref()
            .map(|c| c.as_ptr())
            .unwrap_or(ptr::null())
    })
}

/// Parses a complex descriptor (`join:3,3`, `Kn:5`, `K5`, `K33`,
/// `tildeK:4`) into an opaque handle.
///
/// # Safety
/// `desc` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn z2_complex_parse(
    desc: *const c_char,
    out: *mut *mut Z2Complex,
) -> Z2Status {
    if desc.is_null() || out.is_null() {
        return Z2Status::NullPointer;
    }
    let Ok(desc) = CStr::from_ptr(desc).to_str() else {
        set_error("descriptor is not valid UTF-8".into());
        return Z2Status::ParseError;
    };
    match parse_flavor(desc) {
        Ok(flavor) => {
            *out = Box::into_raw(Box::new(Z2Complex { flavor }));
            Z2Status::Ok
        }
        Err(e) => fail(e),
    }
}

/// Releases a complex handle. Null is ignored.
///
/// # Safety
/// `handle` must come from `z2_complex_parse` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn z2_complex_free(handle: *mut Z2Complex) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from a function of this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn z2_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

fn string_out(text: String, out: *mut *mut c_char) -> Z2Status {
    match CString::new(text) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            Z2Status::Ok
        }
        Err(_) => {
            set_error("output contained an interior NUL".into());
            Z2Status::InternalError
        }
    }
}

/// Basic counts of the complex as a JSON string.
///
/// # Safety
/// `handle` and `out_json` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn z2_complex_info_json(
    handle: *const Z2Complex,
    out_json: *mut *mut c_char,
) -> Z2Status {
    if handle.is_null() || out_json.is_null() {
        return Z2Status::NullPointer;
    }
    let flavor = &(*handle).flavor;
    let payload = match flavor {
        SearchFlavor::Join(j) => serde_json::json!({
            "complex": j.descriptor(),
            "k": j.k(),
            "vertices": j.vertex_count(),
            "top_faces": j.top_face_count(),
            "octahedra": j.octahedron_count(),
            "triple_subcomplexes": j.triple_count(),
        }),
        SearchFlavor::Kn(n) => serde_json::json!({
            "complex": format!("Kn:{n}"),
            "vertices": n,
            "edges": n * (n - 1) / 2,
        }),
        SearchFlavor::Graph(g) => serde_json::json!({
            "complex": g.descriptor(),
            "vertices": g.vertex_count(),
            "edges": g.edge_count(),
        }),
    };
    string_out(payload.to_string(), out_json)
}

/// Dimensions of the full and swap-invariant cycle spaces of the deleted
/// product; join complexes only.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn z2_dims(
    handle: *const Z2Complex,
    full: *mut usize,
    symmetric: *mut usize,
) -> Z2Status {
    if handle.is_null() || full.is_null() || symmetric.is_null() {
        return Z2Status::NullPointer;
    }
    let SearchFlavor::Join(j) = &(*handle).flavor else {
        set_error("dimension computation needs a join complex".into());
        return Z2Status::InvalidArgument;
    };
    let (f, s) = z2embed::delprod::cycle_space_dims(j);
    *full = f;
    *symmetric = s;
    Z2Status::Ok
}

/// Decides mod-2 embeddability into a manifold whose intersection form has
/// kind `'I'` or `'H'` and rank `beta`. On a yes verdict the certificate is
/// returned as JSON in `out_cert_json` (else it is set to null).
///
/// # Safety
/// `handle` and `out_verdict` must be valid; `out_cert_json` may be null if
/// the certificate is not wanted.
#[no_mangle]
pub unsafe extern "C" fn z2_decide(
    handle: *const Z2Complex,
    omega_kind: c_char,
    beta: usize,
    seed: u64,
    exhaustive_threshold: usize,
    restarts: usize,
    out_verdict: *mut Z2Verdict,
    out_cert_json: *mut *mut c_char,
) -> Z2Status {
    if handle.is_null() || out_verdict.is_null() {
        return Z2Status::NullPointer;
    }
    if !out_cert_json.is_null() {
        *out_cert_json = ptr::null_mut();
    }
    let kind = match omega_kind as u8 {
        b'I' | b'i' => OmegaKind::I,
        b'H' | b'h' => OmegaKind::H,
        _ => {
            set_error("omega kind must be 'I' or 'H'".into());
            return Z2Status::InvalidArgument;
        }
    };
    let spec = match OmegaSpec::new(kind, beta) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    let budget = SearchBudget {
        exhaustive_threshold,
        restarts,
        seed,
    };
    match decide(&(*handle).flavor, &spec, &budget) {
        Ok(outcome) => {
            match outcome.verdict {
                Verdict::Yes(cert) => {
                    *out_verdict = Z2Verdict::Yes;
                    if !out_cert_json.is_null() {
                        match serde_json::to_string(cert.as_ref()) {
                            Ok(text) => return string_out(text, out_cert_json),
                            Err(e) => {
                                set_error(e.to_string());
                                return Z2Status::InternalError;
                            }
                        }
                    }
                }
                Verdict::No => *out_verdict = Z2Verdict::No,
                Verdict::Unknown { .. } => *out_verdict = Z2Verdict::Unknown,
            }
            Z2Status::Ok
        }
        Err(e) => fail(e),
    }
}

/// Re-verifies a certificate JSON document from scratch; `out_ok` receives
/// 1 when the certificate is valid and 0 otherwise.
///
/// # Safety
/// `cert_json` must be a valid NUL-terminated string, `out_ok` valid.
#[no_mangle]
pub unsafe extern "C" fn z2_verify_certificate(
    cert_json: *const c_char,
    out_ok: *mut i32,
) -> Z2Status {
    if cert_json.is_null() || out_ok.is_null() {
        return Z2Status::NullPointer;
    }
    let Ok(text) = CStr::from_ptr(cert_json).to_str() else {
        set_error("certificate is not valid UTF-8".into());
        return Z2Status::ParseError;
    };
    let cert: Certificate = match serde_json::from_str(text) {
        Ok(c) => c,
        Err(e) => {
            set_error(e.to_string());
            return Z2Status::ParseError;
        }
    };
    match verify_certificate(&cert) {
        Ok(report) => {
            *out_ok = report.ok as i32;
            Z2Status::Ok
        }
        Err(e) => fail(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(desc: &str) -> *mut Z2Complex {
        let c = CString::new(desc).unwrap();
        let mut handle: *mut Z2Complex = ptr::null_mut();
        let status = unsafe { z2_complex_parse(c.as_ptr(), &mut handle) };
        assert!(matches!(status, Z2Status::Ok));
        handle
    }

    #[test]
    fn parse_info_dims_free() {
        let handle = parse("join:4,4");
        let mut json: *mut c_char = ptr::null_mut();
        let status = unsafe { z2_complex_info_json(handle, &mut json) };
        assert!(matches!(status, Z2Status::Ok));
        let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap();
        assert!(text.contains("\"octahedra\":36"));
        unsafe { z2_string_free(json) };

        let (mut full, mut symmetric) = (0usize, 0usize);
        let status = unsafe { z2_dims(handle, &mut full, &mut symmetric) };
        assert!(matches!(status, Z2Status::Ok));
        assert_eq!((full, symmetric), (25, 13));
        unsafe { z2_complex_free(handle) };
    }

    #[test]
    fn parse_errors_set_message() {
        let c = CString::new("nonsense").unwrap();
        let mut handle: *mut Z2Complex = ptr::null_mut();
        let status = unsafe { z2_complex_parse(c.as_ptr(), &mut handle) };
        assert!(matches!(status, Z2Status::ParseError));
        let msg = z2_last_error_message();
        assert!(!msg.is_null());
        let text = unsafe { CStr::from_ptr(msg) }.to_str().unwrap();
        assert!(text.contains("nonsense"));
    }

    #[test]
    fn decide_and_verify_round_trip() {
        let handle = parse("K33");
        let mut verdict = Z2Verdict::Unknown;
        let mut cert: *mut c_char = ptr::null_mut();
        let status = unsafe {
            z2_decide(handle, 'H' as c_char, 2, 0, 24, 64, &mut verdict, &mut cert)
        };
        assert!(matches!(status, Z2Status::Ok));
        assert!(matches!(verdict, Z2Verdict::Yes));
        assert!(!cert.is_null());
        let mut ok = 0i32;
        let status = unsafe { z2_verify_certificate(cert, &mut ok) };
        assert!(matches!(status, Z2Status::Ok));
        assert_eq!(ok, 1);
        unsafe { z2_string_free(cert) };

        // Sphere: no.
        let status = unsafe {
            z2_decide(
                handle,
                'I' as c_char,
                0,
                0,
                24,
                64,
                &mut verdict,
                ptr::null_mut(),
            )
        };
        assert!(matches!(status, Z2Status::Ok));
        assert!(matches!(verdict, Z2Verdict::No));
        unsafe { z2_complex_free(handle) };
    }

    #[test]
    fn null_pointers_are_rejected() {
        let status = unsafe { z2_complex_parse(ptr::null(), ptr::null_mut()) };
        assert!(matches!(status, Z2Status::NullPointer));
        unsafe { z2_complex_free(ptr::null_mut()) };
        unsafe { z2_string_free(ptr::null_mut()) };
    }
}
