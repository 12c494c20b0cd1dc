//! C ABI for the dvdbinom library.
//!
//! Models are opaque handles created by `dvdb_model_new` and released by
//! `dvdb_model_free`; every other function borrows the handle immutably, so
//! a handle may be shared across threads. Fallible calls return a
//! `dvdb_status` code and write results through out-pointers. Panics never
//! cross the boundary; they surface as `DVDB_STATUS_PANIC`.
//!
//! The matching header is maintained by hand at `include/dvdbinom.h`.

use dvdbinom::basis::{fn_eval_exact, fn_residue};
use dvdbinom::domain::{verify_vwdwo, DvdModel, ModelKind, RepSpec};
use dvdbinom::error::Error;
use dvdbinom::genpoly::{eps_counts, gen_poly, verify_main_theorem, EpsMethod};
use dvdbinom::residue_field::ResidueField;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Status codes shared with the C header. 0 is success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DvdbStatus {
    Ok = 0,
    NullPointer = 1,
    NonPrime = 2,
    ReducibleModulus = 3,
    DegreeMismatch = 4,
    FieldTooLarge = 5,
    NotPrimitiveRoot = 6,
    DivisionByZero = 7,
    LogOfZero = 8,
    NotIntegral = 9,
    OutOfRange = 10,
    LengthMismatch = 11,
    InvalidReps = 12,
    InvalidConfig = 13,
    ParseError = 14,
    BufferTooSmall = 15,
    InvalidArgument = 16,
    Panic = 17,
}

fn status_of(e: &Error) -> DvdbStatus {
    match e {
        Error::NonPrime(_) => DvdbStatus::NonPrime,
        Error::ReducibleModulus => DvdbStatus::ReducibleModulus,
        Error::DegreeMismatch { .. } => DvdbStatus::DegreeMismatch,
        Error::FieldTooLarge { .. } => DvdbStatus::FieldTooLarge,
        Error::NotPrimitiveRoot(_) => DvdbStatus::NotPrimitiveRoot,
        Error::DivisionByZero => DvdbStatus::DivisionByZero,
        Error::LogOfZero => DvdbStatus::LogOfZero,
        Error::NotIntegral => DvdbStatus::NotIntegral,
        Error::OutOfRange { .. } => DvdbStatus::OutOfRange,
        Error::LengthMismatch { .. } => DvdbStatus::LengthMismatch,
        Error::InvalidReps(_) => DvdbStatus::InvalidReps,
        Error::InvalidConfig(_) => DvdbStatus::InvalidConfig,
        Error::Parse(_) => DvdbStatus::ParseError,
    }
}

/// Opaque model handle.
pub struct DvdbModel {
    inner: DvdModel,
}

fn guarded(f: impl FnOnce() -> DvdbStatus) -> DvdbStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(DvdbStatus::Panic)
}

/// Borrows the handle, or reports a null pointer.
unsafe fn model_ref<'a>(model: *const DvdbModel) -> Result<&'a DvdModel, DvdbStatus> {
    model
        .as_ref()
        .map(|m| &m.inner)
        .ok_or(DvdbStatus::NullPointer)
}

pub const DVDB_MODEL_ZP: u32 = 0;
pub const DVDB_MODEL_FQT: u32 = 1;

/// Creates a model handle.
///
/// `kind` is DVDB_MODEL_ZP or DVDB_MODEL_FQT. `modulus`/`modulus_len`
/// describe the little-endian extension modulus and may be NULL/0 for the
/// default. When `use_seed` is true the representatives are the seeded
/// permuted-and-perturbed set; otherwise the defaults. `primitive_root`
/// overrides the generator when >= 0.
///
/// # Safety
/// `out` must be a valid pointer; `modulus`, when non-NULL, must point to
/// `modulus_len` readable u16 values.
#[no_mangle]
pub unsafe extern "C" fn dvdb_model_new(
    kind: u32,
    p: u64,
    d: u32,
    modulus: *const u16,
    modulus_len: usize,
    use_seed: bool,
    rep_seed: u64,
    primitive_root: i32,
    out: *mut *mut DvdbModel,
) -> DvdbStatus {
    if out.is_null() {
        return DvdbStatus::NullPointer;
    }
    let modulus = if modulus.is_null() || modulus_len == 0 {
        None
    } else {
        Some(std::slice::from_raw_parts(modulus, modulus_len).to_vec())
    };
    guarded(move || {
        let kind = match kind {
            DVDB_MODEL_ZP => ModelKind::RationalLocalization,
            DVDB_MODEL_FQT => ModelKind::PowerSeriesLocalization,
            _ => return DvdbStatus::InvalidArgument,
        };
        let mut field = match ResidueField::new(p, d, modulus) {
            Ok(f) => f,
            Err(e) => return status_of(&e),
        };
        if primitive_root >= 0 {
            field = match field.with_primitive_root(primitive_root as u16) {
                Ok(f) => f,
                Err(e) => return status_of(&e),
            };
        }
        let reps = if use_seed {
            RepSpec::Seeded(rep_seed)
        } else {
            RepSpec::Default
        };
        match DvdModel::new(kind, field, reps) {
            Ok(inner) => {
                unsafe { out.write(Box::into_raw(Box::new(DvdbModel { inner }))) };
                DvdbStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Releases a handle created by `dvdb_model_new`. NULL is a no-op.
///
/// # Safety
/// `model` must be a pointer from `dvdb_model_new` that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn dvdb_model_free(model: *mut DvdbModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Residue field size q, or 0 for a NULL handle.
///
/// # Safety
/// `model` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn dvdb_model_q(model: *const DvdbModel) -> u64 {
    model.as_ref().map_or(0, |m| m.inner.q())
}

/// Writes the coefficient class of F_n(u_m): -1 for the zero residue, else
/// the discrete log of the class in [0, q-2].
///
/// # Safety
/// `model` must be a live handle; `out_class` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dvdb_coeff_class(
    model: *const DvdbModel,
    n: u64,
    m: u64,
    out_class: *mut i64,
) -> DvdbStatus {
    if out_class.is_null() {
        return DvdbStatus::NullPointer;
    }
    guarded(|| {
        let model = match model_ref(model) {
            Ok(m) => m,
            Err(s) => return s,
        };
        let r = fn_residue(n, m, model);
        let class = if r.is_zero() {
            -1
        } else {
            model.field().dlog(r).expect("nonzero residue") as i64
        };
        out_class.write(class);
        DvdbStatus::Ok
    })
}

/// Writes the element code of the residue of F_n(u_m).
///
/// # Safety
/// `model` must be a live handle; `out_code` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dvdb_coeff_residue_code(
    model: *const DvdbModel,
    n: u64,
    m: u64,
    out_code: *mut u32,
) -> DvdbStatus {
    if out_code.is_null() {
        return DvdbStatus::NullPointer;
    }
    guarded(|| {
        let model = match model_ref(model) {
            Ok(m) => m,
            Err(s) => return s,
        };
        out_code.write(fn_residue(n, m, model).code() as u32);
        DvdbStatus::Ok
    })
}

/// Renders the exact value of F_n(u_m), reduced, as a NUL-terminated string.
/// Free the result with `dvdb_string_free`.
///
/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dvdb_coeff_exact(
    model: *const DvdbModel,
    n: u64,
    m: u64,
    out: *mut *mut c_char,
) -> DvdbStatus {
    if out.is_null() {
        return DvdbStatus::NullPointer;
    }
    guarded(|| {
        let model = match model_ref(model) {
            Ok(m) => m,
            Err(s) => return s,
        };
        let value = fn_eval_exact(n, &model.u_of(m), model).reduced(model.field());
        let text = CString::new(value.render()).expect("no interior NUL");
        out.write(text.into_raw());
        DvdbStatus::Ok
    })
}

/// Renders u_n as a NUL-terminated string; free with `dvdb_string_free`.
///
/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dvdb_un_render(
    model: *const DvdbModel,
    n: u64,
    out: *mut *mut c_char,
) -> DvdbStatus {
    if out.is_null() {
        return DvdbStatus::NullPointer;
    }
    guarded(|| {
        let model = match model_ref(model) {
            Ok(m) => m,
            Err(s) => return s,
        };
        let text = CString::new(model.u_of(n).render()).expect("no interior NUL");
        out.write(text.into_raw());
        DvdbStatus::Ok
    })
}

/// Frees a string returned by this library. NULL is a no-op.
///
/// # Safety
/// `s` must come from a dvdb_* call and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn dvdb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Expands an element literal (the model's textual syntax) to `depth` digit
/// labels written into `out_digits`.
///
/// # Safety
/// `element` must be NUL-terminated; `out_digits` must hold `out_len`
/// writable u16 values with `out_len >= depth`.
#[no_mangle]
pub unsafe extern "C" fn dvdb_expand(
    model: *const DvdbModel,
    element: *const c_char,
    depth: usize,
    out_digits: *mut u16,
    out_len: usize,
) -> DvdbStatus {
    if element.is_null() || out_digits.is_null() {
        return DvdbStatus::NullPointer;
    }
    if out_len < depth {
        return DvdbStatus::BufferTooSmall;
    }
    let Ok(text) = CStr::from_ptr(element).to_str() else {
        return DvdbStatus::ParseError;
    };
    guarded(|| {
        let model = match model_ref(model) {
            Ok(m) => m,
            Err(s) => return s,
        };
        let x = match model.parse_element(text) {
            Ok(x) => x,
            Err(e) => return status_of(&e),
        };
        match model.expand(&x, depth) {
            Ok(digits) => {
                std::ptr::copy_nonoverlapping(digits.as_ptr(), out_digits, depth);
                DvdbStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Writes the residue-class distribution for index n: eps_j into `out_eps`
/// (which must hold at least q-1 entries) and the zero-class count into
/// `out_zero`.
///
/// # Safety
/// `model` must be a live handle; `out_eps` must hold `eps_len` writable
/// u64 values; `out_zero` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dvdb_dist(
    model: *const DvdbModel,
    n: u64,
    out_eps: *mut u64,
    eps_len: usize,
    out_zero: *mut u64,
) -> DvdbStatus {
    if out_eps.is_null() || out_zero.is_null() {
        return DvdbStatus::NullPointer;
    }
    guarded(|| {
        let model = match model_ref(model) {
            Ok(m) => m,
            Err(s) => return s,
        };
        let needed = (model.q() - 1) as usize;
        if eps_len < needed {
            return DvdbStatus::BufferTooSmall;
        }
        let counts = eps_counts(n, model, EpsMethod::BruteForce);
        std::ptr::copy_nonoverlapping(counts.eps.as_ptr(), out_eps, needed);
        out_zero.write(counts.zero_count);
        DvdbStatus::Ok
    })
}

/// Writes the q-1 coefficients of the generating polynomial of index n.
///
/// # Safety
/// `model` must be a live handle; `out_coeffs` must hold `coeffs_len`
/// writable u64 values.
#[no_mangle]
pub unsafe extern "C" fn dvdb_gen_poly(
    model: *const DvdbModel,
    n: u64,
    out_coeffs: *mut u64,
    coeffs_len: usize,
) -> DvdbStatus {
    if out_coeffs.is_null() {
        return DvdbStatus::NullPointer;
    }
    guarded(|| {
        let model = match model_ref(model) {
            Ok(m) => m,
            Err(s) => return s,
        };
        let needed = (model.q() - 1) as usize;
        if coeffs_len < needed {
            return DvdbStatus::BufferTooSmall;
        }
        let g = gen_poly(n, model);
        std::ptr::copy_nonoverlapping(g.coeffs().as_ptr(), out_coeffs, needed);
        DvdbStatus::Ok
    })
}

/// Checks the generating-polynomial product identity for all n <= max_n.
/// Writes UINT64_MAX to `out_first_failure` when every index passes.
///
/// # Safety
/// `model` must be a live handle; `out_first_failure` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dvdb_verify_gen_poly_product(
    model: *const DvdbModel,
    max_n: u64,
    out_first_failure: *mut u64,
) -> DvdbStatus {
    if out_first_failure.is_null() {
        return DvdbStatus::NullPointer;
    }
    guarded(|| {
        let model = match model_ref(model) {
            Ok(m) => m,
            Err(s) => return s,
        };
        let first = (0..=max_n).find(|&n| !verify_main_theorem(n, model).pass);
        out_first_failure.write(first.unwrap_or(u64::MAX));
        DvdbStatus::Ok
    })
}

/// Checks the node-sequence valuation law up to max_n with depth kmax;
/// writes the outcome into `out_pass`.
///
/// # Safety
/// `model` must be a live handle; `out_pass` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dvdb_verify_vwdwo(
    model: *const DvdbModel,
    max_n: u64,
    kmax: u32,
    out_pass: *mut bool,
) -> DvdbStatus {
    if out_pass.is_null() {
        return DvdbStatus::NullPointer;
    }
    guarded(|| {
        let model = match model_ref(model) {
            Ok(m) => m,
            Err(s) => return s,
        };
        out_pass.write(verify_vwdwo(model, max_n, kmax).pass);
        DvdbStatus::Ok
    })
}

/// Library version as a static NUL-terminated string; do not free.
#[no_mangle]
pub extern "C" fn dvdb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    unsafe fn new_zp(p: u64) -> *mut DvdbModel {
        let mut handle = ptr::null_mut();
        let status = dvdb_model_new(
            DVDB_MODEL_ZP,
            p,
            1,
            ptr::null(),
            0,
            false,
            0,
            -1,
            &mut handle,
        );
        assert_eq!(status, DvdbStatus::Ok);
        handle
    }

    #[test]
    fn model_lifecycle_and_errors() {
        unsafe {
            let m = new_zp(3);
            assert_eq!(dvdb_model_q(m), 3);
            dvdb_model_free(m);
            dvdb_model_free(ptr::null_mut()); // no-op

            let mut handle = ptr::null_mut();
            let status = dvdb_model_new(
                DVDB_MODEL_ZP,
                4,
                1,
                ptr::null(),
                0,
                false,
                0,
                -1,
                &mut handle,
            );
            assert_eq!(status, DvdbStatus::NonPrime);
            let status = dvdb_model_new(7, 3, 1, ptr::null(), 0, false, 0, -1, &mut handle);
            assert_eq!(status, DvdbStatus::InvalidArgument);
            let status = dvdb_model_new(
                DVDB_MODEL_ZP,
                5,
                1,
                ptr::null(),
                0,
                false,
                0,
                4,
                &mut handle,
            );
            assert_eq!(status, DvdbStatus::NotPrimitiveRoot);
        }
    }

    #[test]
    fn extension_field_with_modulus() {
        unsafe {
            let modulus = [1u16, 1, 1];
            let mut handle = ptr::null_mut();
            let status = dvdb_model_new(
                DVDB_MODEL_FQT,
                2,
                2,
                modulus.as_ptr(),
                modulus.len(),
                false,
                0,
                -1,
                &mut handle,
            );
            assert_eq!(status, DvdbStatus::Ok);
            assert_eq!(dvdb_model_q(handle), 4);

            let mut text = ptr::null_mut();
            assert_eq!(dvdb_un_render(handle, 3, &mut text), DvdbStatus::Ok);
            assert_eq!(CStr::from_ptr(text).to_str().unwrap(), "3");
            dvdb_string_free(text);
            dvdb_model_free(handle);
        }
    }

    #[test]
    fn coefficient_queries() {
        unsafe {
            let m = new_zp(3);
            let mut class = 0i64;
            assert_eq!(dvdb_coeff_class(m, 4, 5, &mut class), DvdbStatus::Ok);
            assert_eq!(class, 1); // C(5,4) = 5 = 2 mod 3 = root^1
            let mut code = 0u32;
            assert_eq!(dvdb_coeff_residue_code(m, 4, 5, &mut code), DvdbStatus::Ok);
            assert_eq!(code, 2);
            let mut text = ptr::null_mut();
            assert_eq!(dvdb_coeff_exact(m, 4, 5, &mut text), DvdbStatus::Ok);
            assert_eq!(CStr::from_ptr(text).to_str().unwrap(), "5");
            dvdb_string_free(text);
            assert_eq!(
                dvdb_coeff_class(ptr::null(), 1, 1, &mut class),
                DvdbStatus::NullPointer
            );
            dvdb_model_free(m);
        }
    }

    #[test]
    fn expand_and_buffer_checks() {
        unsafe {
            let m = new_zp(3);
            let element = CString::new("-1").unwrap();
            let mut digits = [0u16; 3];
            let status = dvdb_expand(m, element.as_ptr(), 3, digits.as_mut_ptr(), 3);
            assert_eq!(status, DvdbStatus::Ok);
            assert_eq!(digits, [2, 2, 2]);

            let status = dvdb_expand(m, element.as_ptr(), 3, digits.as_mut_ptr(), 2);
            assert_eq!(status, DvdbStatus::BufferTooSmall);

            let bad = CString::new("1/3").unwrap();
            let status = dvdb_expand(m, bad.as_ptr(), 1, digits.as_mut_ptr(), 3);
            assert_eq!(status, DvdbStatus::ParseError); // den divisible by p
            dvdb_model_free(m);
        }
    }

    #[test]
    fn distribution_and_verification() {
        unsafe {
            let m = new_zp(3);
            let mut eps = [0u64; 2];
            let mut zero = 0u64;
            assert_eq!(
                dvdb_dist(m, 5, eps.as_mut_ptr(), 2, &mut zero),
                DvdbStatus::Ok
            );
            assert_eq!((eps, zero), ([4, 2], 0));
            assert_eq!(
                dvdb_dist(m, 5, eps.as_mut_ptr(), 1, &mut zero),
                DvdbStatus::BufferTooSmall
            );

            let mut coeffs = [0u64; 2];
            assert_eq!(dvdb_gen_poly(m, 2, coeffs.as_mut_ptr(), 2), DvdbStatus::Ok);
            assert_eq!(coeffs, [2, 1]);

            let mut first = 0u64;
            assert_eq!(
                dvdb_verify_gen_poly_product(m, 300, &mut first),
                DvdbStatus::Ok
            );
            assert_eq!(first, u64::MAX);

            let mut pass = false;
            assert_eq!(dvdb_verify_vwdwo(m, 50, 3, &mut pass), DvdbStatus::Ok);
            assert!(pass);
            dvdb_model_free(m);
        }
    }

    #[test]
    fn seeded_models_reproduce() {
        unsafe {
            let mut a = ptr::null_mut();
            let mut b = ptr::null_mut();
            dvdb_model_new(DVDB_MODEL_ZP, 5, 1, ptr::null(), 0, true, 42, -1, &mut a);
            dvdb_model_new(DVDB_MODEL_ZP, 5, 1, ptr::null(), 0, true, 42, -1, &mut b);
            let (mut ta, mut tb) = (ptr::null_mut(), ptr::null_mut());
            dvdb_un_render(a, 17, &mut ta);
            dvdb_un_render(b, 17, &mut tb);
            assert_eq!(
                CStr::from_ptr(ta).to_str().unwrap(),
                CStr::from_ptr(tb).to_str().unwrap()
            );
            dvdb_string_free(ta);
            dvdb_string_free(tb);
            dvdb_model_free(a);
            dvdb_model_free(b);
        }
    }

    #[test]
    fn version_string() {
        let v = unsafe { CStr::from_ptr(dvdb_version()) };
        assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }
}
