//! C ABI over `excisionlab`.
//!
//! Extensions are opaque heap handles. Chains and certificates cross the
//! boundary as the same JSON documents the CLI reads and writes. Every entry
//! point returns an [`ExlStatus`]; on failure the message is available from
//! [`exl_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use excisionlab::algebra::Extension;
use excisionlab::chain::canonicalize_cyclic;
use excisionlab::excision::{self, Certificate};
use excisionlab::homology::{homology, max_degree_from_env, Complex, Space, Variant};
use excisionlab::{demo, io, Error};

/// Opaque algebra-with-ideal handle.
pub struct ExlExtension {
    inner: Extension,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidInput = 4,
    NoLocalUnit = 5,
    NotACycle = 6,
    Unsolvable = 7,
    CertificateRejected = 8,
    DegreeTooLarge = 9,
    Panic = 10,
    Other = 11,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> ExlStatus {
    match e {
        Error::Parse { .. } => ExlStatus::Parse,
        Error::NoLocalUnit { .. } | Error::UnitPrecondition { .. } => ExlStatus::NoLocalUnit,
        Error::NotACycle(_) => ExlStatus::NotACycle,
        Error::CertificateUnsolvable { .. } => ExlStatus::Unsolvable,
        Error::Mismatch { .. } | Error::ScheduleMismatch(_) => ExlStatus::CertificateRejected,
        Error::DegreeTooLarge { .. } => ExlStatus::DegreeTooLarge,
        Error::Io(_) | Error::Linalg(_) => ExlStatus::Other,
        _ => ExlStatus::InvalidInput,
    }
}

enum Failure {
    Status(ExlStatus, String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> ExlStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ExlStatus::Ok,
        Ok(Err(Failure::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            ExlStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Status(ExlStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|e| Failure::Status(ExlStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn handle<'a>(p: *const ExlExtension) -> Result<&'a Extension, Failure> {
    p.as_ref().map(|h| &h.inner).ok_or_else(|| Failure::Status(ExlStatus::NullPointer, "extension handle is null".into()))
}

fn out_ptr<T>(p: *mut T) -> Result<(), Failure> {
    if p.is_null() {
        Err(Failure::Status(ExlStatus::NullPointer, "output pointer is null".into()))
    } else {
        Ok(())
    }
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Parses an algebra document. On success `*out` owns a new handle that
/// must be released with [`exl_extension_free`].
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn exl_extension_from_json(json: *const c_char, out: *mut *mut ExlExtension) -> ExlStatus {
    guard(|| {
        out_ptr(out)?;
        let ext = io::parse_algebra(text(json, "json")?)?;
        *out = Box::into_raw(Box::new(ExlExtension { inner: ext }));
        Ok(())
    })
}

/// Builds one of the named demo extensions (`t2-corner`, `matrix2`, `direct-sum`).
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn exl_extension_demo(name: *const c_char, out: *mut *mut ExlExtension) -> ExlStatus {
    guard(|| {
        out_ptr(out)?;
        let d = demo::demo(text(name, "name")?)?;
        *out = Box::into_raw(Box::new(ExlExtension { inner: d.extension }));
        Ok(())
    })
}

/// # Safety
/// `ext` must be null or a handle returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn exl_extension_free(ext: *mut ExlExtension) {
    if !ext.is_null() {
        drop(Box::from_raw(ext));
    }
}

/// Dimension of the algebra and of the ideal.
///
/// # Safety
/// `ext` must be a live handle; the output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn exl_extension_dimensions(ext: *const ExlExtension, dim: *mut usize, ideal_dim: *mut usize) -> ExlStatus {
    guard(|| {
        let ext = handle(ext)?;
        out_ptr(dim)?;
        out_ptr(ideal_dim)?;
        *dim = ext.dim();
        *ideal_dim = ext.ideal_count();
        Ok(())
    })
}

/// Dimension of `H_degree` for `complex` in `hh`, `hc`, `bar` and `space` in
/// `A`, `I`, `relative`.
///
/// # Safety
/// `ext` must be a live handle, the strings NUL-terminated, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn exl_homology_dimension(
    ext: *const ExlExtension,
    complex: *const c_char,
    space: *const c_char,
    degree: usize,
    out: *mut usize,
) -> ExlStatus {
    guard(|| {
        let ext = handle(ext)?;
        out_ptr(out)?;
        let complex: Complex = text(complex, "complex")?.parse()?;
        let space: Space = text(space, "space")?.parse()?;
        *out = homology(ext, Variant::new(complex, space), degree, max_degree_from_env())?.dimension;
        Ok(())
    })
}

/// Runs inverse excision on a relative cyclic cycle given as a chain
/// document. `*certificate_json` receives a certificate document owned by
/// the caller (free with [`exl_string_free`]); it is only written when the
/// certificate verifies.
///
/// # Safety
/// `ext` must be a live handle, `chain_json` NUL-terminated, and
/// `certificate_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn exl_inverse_excision_json(
    ext: *const ExlExtension,
    chain_json: *const c_char,
    certificate_json: *mut *mut c_char,
) -> ExlStatus {
    guard(|| {
        let ext = handle(ext)?;
        out_ptr(certificate_json)?;
        let phi = io::parse_chain(text(chain_json, "chain_json")?, ext)?;
        let result = excision::inverse_excision_class(ext, &[canonicalize_cyclic(&phi)])?.remove(0);
        let cert = Certificate::Inverse(result);
        excision::verify_certificate(ext, &cert)?;
        *certificate_json = owned_string(io::to_json(&io::certificate_to_doc(ext, &cert)));
        Ok(())
    })
}

/// Re-checks a certificate document. Returns `Ok` only if it verifies.
///
/// # Safety
/// `json` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn exl_verify_certificate_json(json: *const c_char) -> ExlStatus {
    guard(|| {
        let (ext, cert) = io::parse_certificate(text(json, "json")?)?;
        excision::verify_certificate(&ext, &cert).map_err(|e| match e {
            Error::CertificateUnsolvable { .. } => Failure::Lib(e),
            e => Failure::Status(ExlStatus::CertificateRejected, e.to_string()),
        })
    })
}

/// Message for the last failing call on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn exl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn exl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    fn last_error() -> String {
        let p = exl_last_error_message();
        assert!(!p.is_null());
        unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
    }

    fn corner() -> *mut ExlExtension {
        let mut ext = ptr::null_mut();
        assert_eq!(unsafe { exl_extension_demo(c("t2-corner").as_ptr(), &mut ext) }, ExlStatus::Ok);
        ext
    }

    #[test]
    fn demo_dimensions_and_homology() {
        let ext = corner();
        let (mut d, mut i, mut h) = (0, 0, 0);
        unsafe {
            assert_eq!(exl_extension_dimensions(ext, &mut d, &mut i), ExlStatus::Ok);
            assert_eq!((d, i), (3, 2));
            assert_eq!(exl_homology_dimension(ext, c("hc").as_ptr(), c("relative").as_ptr(), 0, &mut h), ExlStatus::Ok);
            assert_eq!(h, 1);
            assert_eq!(exl_homology_dimension(ext, c("bar").as_ptr(), c("I").as_ptr(), 1, &mut h), ExlStatus::Ok);
            assert_eq!(h, 0);
            assert_eq!(exl_homology_dimension(ext, c("cyclic?").as_ptr(), c("I").as_ptr(), 1, &mut h), ExlStatus::InvalidInput);
            exl_extension_free(ext);
        }
    }

    #[test]
    fn inverse_round_trip_through_json() {
        let ext = corner();
        let chain = c(r#"{"degree": 0, "terms": [{"coeff": "2", "slots": [["1", "0", "0"]]}]}"#);
        let mut cert = ptr::null_mut();
        unsafe {
            assert_eq!(exl_inverse_excision_json(ext, chain.as_ptr(), &mut cert), ExlStatus::Ok);
            assert!(!cert.is_null());
            assert_eq!(exl_verify_certificate_json(cert), ExlStatus::Ok);
            let tampered = CStr::from_ptr(cert).to_str().unwrap().replacen("\"2\"", "\"3\"", 1);
            assert_ne!(exl_verify_certificate_json(c(&tampered).as_ptr()), ExlStatus::Ok);
            exl_string_free(cert);
            exl_extension_free(ext);
        }
    }

    #[test]
    fn errors_are_reported() {
        let mut ext = ptr::null_mut();
        unsafe {
            assert_eq!(exl_extension_from_json(ptr::null(), &mut ext), ExlStatus::NullPointer);
            assert!(ext.is_null());
            assert_eq!(exl_extension_from_json(c("{").as_ptr(), &mut ext), ExlStatus::Parse);
            assert!(last_error().contains("line"));
            assert_eq!(exl_extension_demo(c("nope").as_ptr(), &mut ext), ExlStatus::InvalidInput);
            let mut n = 0;
            assert_eq!(exl_homology_dimension(ptr::null(), c("hc").as_ptr(), c("A").as_ptr(), 0, &mut n), ExlStatus::NullPointer);
            exl_extension_free(ptr::null_mut());
            exl_string_free(ptr::null_mut());
        }
    }

    #[test]
    fn degree_cap_is_an_error_code() {
        let ext = corner();
        let mut h = 0;
        unsafe {
            assert_eq!(exl_homology_dimension(ext, c("hh").as_ptr(), c("A").as_ptr(), 99, &mut h), ExlStatus::DegreeTooLarge);
            exl_extension_free(ext);
        }
    }

    #[test]
    fn from_json_accepts_fixture() {
        let doc = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../core/data/matrix2.json")).unwrap();
        let mut ext = ptr::null_mut();
        let (mut d, mut i) = (0, 0);
        unsafe {
            assert_eq!(exl_extension_from_json(c(&doc).as_ptr(), &mut ext), ExlStatus::Ok);
            assert_eq!(exl_extension_dimensions(ext, &mut d, &mut i), ExlStatus::Ok);
            exl_extension_free(ext);
        }
        assert_eq!((d, i), (4, 4));
    }
}
