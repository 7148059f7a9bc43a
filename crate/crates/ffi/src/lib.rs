//! C ABI over `massey-core`.
//!
//! Every fallible function returns a [`MasseyStatus`]; on failure the message
//! is available from [`massey_last_error`] on the same thread. Presentations
//! and Massey outcomes are opaque handles released with their `_free`
//! functions. Strings returned through out-pointers are owned by the caller
//! and released with [`massey_string_free`].
//!
//! Classes cross the boundary as arrays of `uint32_t` residues, reduced mod
//! `p` on entry.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use massey_core::cohomology::{
    cpi_component, cup, massey_mod_indeterminacy, CohomologyError, MasseyOutcome as CoreOutcome, OneClass,
};
use massey_core::field::{Modulus, Prime};
use massey_core::linalg::FpVector;
use massey_core::magnus::{eps, MultiIndex};
use massey_core::presentation::{kty_presentation, monomial_presentation, Presentation, PresentationError};
use massey_core::theorem::{verify_kty, verify_main};
use massey_core::word::{GeneratorIndex, Word};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MasseyStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    NotPrime = 4,
    DimensionMismatch = 5,
    UndefinedProduct = 6,
    IoError = 7,
    Panic = 8,
}

/// Opaque presentation handle.
pub struct MasseyPresentation {
    inner: Presentation,
}

/// Opaque result of a Massey product computation.
pub struct MasseyOutcome {
    inner: CoreOutcome,
    relator_names: Vec<String>,
    json: serde_json::Value,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(CString::new(msg).expect("NULs removed")));
}

struct Failure(MasseyStatus, String);

impl From<CohomologyError> for Failure {
    fn from(e: CohomologyError) -> Self {
        let status = match e {
            CohomologyError::UndefinedProduct { .. } => MasseyStatus::UndefinedProduct,
            CohomologyError::Dimension { .. } | CohomologyError::Linalg(_) => MasseyStatus::DimensionMismatch,
            CohomologyError::Field(_) | CohomologyError::EvenPrime(_) => MasseyStatus::NotPrime,
            _ => MasseyStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

impl From<PresentationError> for Failure {
    fn from(e: PresentationError) -> Self {
        let status = match e {
            PresentationError::Io(_) => MasseyStatus::IoError,
            PresentationError::MonomialRank(_) => MasseyStatus::InvalidArgument,
            _ => MasseyStatus::ParseError,
        };
        Failure(status, e.to_string())
    }
}

fn fail(status: MasseyStatus, msg: impl Into<String>) -> Failure {
    Failure(status, msg.into())
}

/// Runs `f`, converting errors and panics into a status plus thread-local message.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> MasseyStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            MasseyStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            MasseyStatus::Panic
        }
    }
}

fn non_null<T>(p: *const T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        Err(fail(MasseyStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    non_null(p, what)?;
    CStr::from_ptr(p).to_str().map_err(|_| fail(MasseyStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn pres_arg<'a>(p: *const MasseyPresentation) -> Result<&'a Presentation, Failure> {
    non_null(p, "presentation")?;
    Ok(&(*p).inner)
}

fn prime_arg(p: u32) -> Result<Prime, Failure> {
    Prime::new(p).map_err(|e| fail(MasseyStatus::NotPrime, e.to_string()))
}

unsafe fn class_arg(prime: Prime, data: *const u32, len: usize, pres: &Presentation, what: &str) -> Result<OneClass, Failure> {
    non_null(data, what)?;
    if len != pres.num_generators() {
        return Err(fail(
            MasseyStatus::DimensionMismatch,
            format!("{what} has {len} coordinates, the presentation has {} generators", pres.num_generators()),
        ));
    }
    let values: Vec<u32> = std::slice::from_raw_parts(data, len).iter().map(|&v| v % prime.get()).collect();
    Ok(OneClass::new(FpVector::from_u32(prime, values)))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    non_null(out, what)?;
    *out = value;
    Ok(())
}

unsafe fn write_handle<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    non_null(out, "out")?;
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| fail(MasseyStatus::InvalidArgument, "string contains NUL"))?;
    write_out(out, c.into_raw(), "output string")
}

unsafe fn write_slice(out: *mut u32, out_len: usize, values: &[u32]) -> Result<(), Failure> {
    non_null(out, "output buffer")?;
    if out_len != values.len() {
        return Err(fail(
            MasseyStatus::DimensionMismatch,
            format!("output buffer holds {out_len} values, result has {}", values.len()),
        ));
    }
    std::slice::from_raw_parts_mut(out, out_len).copy_from_slice(values);
    Ok(())
}

/// Message for the last failed call on this thread, or NULL after a success.
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn massey_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Frees a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn massey_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds the presentation of the pure braid group of `A(r,1,3)`, `r >= 2`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn massey_presentation_monomial(r: u32, out: *mut *mut MasseyPresentation) -> MasseyStatus {
    guard(|| {
        let inner = monomial_presentation(r)?;
        write_handle(out, MasseyPresentation { inner })
    })
}

/// Builds the three-generator presentation of the conic with three tangent lines.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn massey_presentation_kty(out: *mut *mut MasseyPresentation) -> MasseyStatus {
    guard(|| write_handle(out, MasseyPresentation { inner: kty_presentation() }))
}

/// Parses a presentation in the text format.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn massey_presentation_parse(text: *const c_char, out: *mut *mut MasseyPresentation) -> MasseyStatus {
    guard(|| {
        let inner = Presentation::parse(str_arg(text, "text")?)?;
        write_handle(out, MasseyPresentation { inner })
    })
}

/// Loads a presentation file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn massey_presentation_load(path: *const c_char, out: *mut *mut MasseyPresentation) -> MasseyStatus {
    guard(|| {
        let inner = Presentation::load(str_arg(path, "path")?)?;
        write_handle(out, MasseyPresentation { inner })
    })
}

/// # Safety
/// `p` must come from a `massey_presentation_*` constructor and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn massey_presentation_free(p: *mut MasseyPresentation) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `p` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn massey_presentation_num_generators(p: *const MasseyPresentation, out: *mut usize) -> MasseyStatus {
    guard(|| write_out(out, pres_arg(p)?.num_generators(), "out"))
}

/// # Safety
/// `p` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn massey_presentation_num_relators(p: *const MasseyPresentation, out: *mut usize) -> MasseyStatus {
    guard(|| write_out(out, pres_arg(p)?.num_relators(), "out"))
}

/// Name of relator `index` (0-based); free with `massey_string_free`.
///
/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn massey_presentation_relator_name(
    p: *const MasseyPresentation,
    index: usize,
    out: *mut *mut c_char,
) -> MasseyStatus {
    guard(|| {
        let pres = pres_arg(p)?;
        let rel = pres.relators().get(index).ok_or_else(|| {
            fail(MasseyStatus::InvalidArgument, format!("relator {index} out of range 0..{}", pres.num_relators()))
        })?;
        write_string(out, rel.name.clone())
    })
}

/// Text format (`as_json = false`) or JSON (`as_json = true`).
///
/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn massey_presentation_format(
    p: *const MasseyPresentation,
    as_json: bool,
    out: *mut *mut c_char,
) -> MasseyStatus {
    guard(|| {
        let pres = pres_arg(p)?;
        let text = if as_json { pres.to_json().to_string() } else { pres.to_text() };
        write_string(out, text)
    })
}

/// Magnus coefficient `ε_I(w)` as a decimal string. `modulus` is a prime, or
/// 0 for integer coefficients; `index` holds 1-based generator indices.
///
/// # Safety
/// `word` must be NUL-terminated, `index` must point to `index_len` values and
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn massey_eps(
    word: *const c_char,
    index: *const u32,
    index_len: usize,
    modulus: u32,
    out: *mut *mut c_char,
) -> MasseyStatus {
    guard(|| {
        let modulus = Modulus::new(modulus).map_err(|e| fail(MasseyStatus::NotPrime, e.to_string()))?;
        let w = Word::parse(str_arg(word, "word")?, usize::MAX).map_err(|e| fail(MasseyStatus::ParseError, e.to_string()))?;
        non_null(index, "index")?;
        let gens = std::slice::from_raw_parts(index, index_len)
            .iter()
            .map(|&i| GeneratorIndex::new(i))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| fail(MasseyStatus::InvalidArgument, "generator indices are 1-based"))?;
        let idx = MultiIndex::new(gens).map_err(|e| fail(MasseyStatus::InvalidArgument, e.to_string()))?;
        write_string(out, eps(&idx, &w, modulus).to_string())
    })
}

/// `α ∪ β` over `F_p`, written to `out` (length = number of relators).
///
/// # Safety
/// `alpha` and `beta` must point to `len` values, `out` to `out_len` values.
#[no_mangle]
pub unsafe extern "C" fn massey_cup(
    p: *const MasseyPresentation,
    prime: u32,
    alpha: *const u32,
    beta: *const u32,
    len: usize,
    out: *mut u32,
    out_len: usize,
) -> MasseyStatus {
    guard(|| {
        let pres = pres_arg(p)?;
        let prime = prime_arg(prime)?;
        let a = class_arg(prime, alpha, len, pres, "alpha")?;
        let b = class_arg(prime, beta, len, pres, "beta")?;
        write_slice(out, out_len, cup(pres, &a, &b)?.entries())
    })
}

/// Computes `⟨α, β, γ⟩` modulo indeterminacy. Fails with
/// `MASSEY_STATUS_UNDEFINED_PRODUCT` when `α∪β` or `β∪γ` is nonzero.
///
/// # Safety
/// Class pointers must hold `len` values; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn massey_triple(
    p: *const MasseyPresentation,
    prime: u32,
    alpha: *const u32,
    beta: *const u32,
    gamma: *const u32,
    len: usize,
    out: *mut *mut MasseyOutcome,
) -> MasseyStatus {
    guard(|| {
        let pres = pres_arg(p)?;
        let prime = prime_arg(prime)?;
        let a = class_arg(prime, alpha, len, pres, "alpha")?;
        let b = class_arg(prime, beta, len, pres, "beta")?;
        let g = class_arg(prime, gamma, len, pres, "gamma")?;
        let inner = massey_mod_indeterminacy(pres, &a, &b, &g)?;
        let json = inner.to_json(pres);
        let handle = MasseyOutcome { inner, relator_names: pres.relator_names(), json };
        write_handle(out, handle)
    })
}

unsafe fn outcome_arg<'a>(o: *const MasseyOutcome) -> Result<&'a MasseyOutcome, Failure> {
    non_null(o, "outcome")?;
    Ok(&*o)
}

/// # Safety
/// `o` must be a live outcome handle.
#[no_mangle]
pub unsafe extern "C" fn massey_outcome_vanishes(o: *const MasseyOutcome, out: *mut bool) -> MasseyStatus {
    guard(|| write_out(out, outcome_arg(o)?.inner.vanishes, "out"))
}

/// # Safety
/// `o` must be a live outcome handle.
#[no_mangle]
pub unsafe extern "C" fn massey_outcome_indeterminacy_rank(o: *const MasseyOutcome, out: *mut usize) -> MasseyStatus {
    guard(|| write_out(out, outcome_arg(o)?.inner.indeterminacy_rank(), "out"))
}

/// Copies the representative 2-class (length = number of relators).
///
/// # Safety
/// `o` must be a live outcome handle and `out` must hold `out_len` values.
#[no_mangle]
pub unsafe extern "C" fn massey_outcome_representative(o: *const MasseyOutcome, out: *mut u32, out_len: usize) -> MasseyStatus {
    guard(|| write_slice(out, out_len, outcome_arg(o)?.inner.representative.entries()))
}

/// Number of relators the representative is indexed by.
///
/// # Safety
/// `o` must be a live outcome handle.
#[no_mangle]
pub unsafe extern "C" fn massey_outcome_len(o: *const MasseyOutcome, out: *mut usize) -> MasseyStatus {
    guard(|| write_out(out, outcome_arg(o)?.relator_names.len(), "out"))
}

/// JSON with keys `representative`, `relator_names`, `indeterminacy_rank`,
/// `vanishes`, `witness`.
///
/// # Safety
/// `o` must be a live outcome handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn massey_outcome_json(o: *const MasseyOutcome, out: *mut *mut c_char) -> MasseyStatus {
    guard(|| write_string(out, outcome_arg(o)?.json.to_string()))
}

/// # Safety
/// `o` must come from `massey_triple` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn massey_outcome_free(o: *mut MasseyOutcome) {
    if !o.is_null() {
        drop(Box::from_raw(o));
    }
}

/// Dimension of the resonance component `C_Π` of `A(r,1,3)` over `F_p`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn massey_cpi_dimension(r: u32, prime: u32, out: *mut usize) -> MasseyStatus {
    guard(|| {
        let prime = prime_arg(prime)?;
        write_out(out, cpi_component(r, prime)?.dim, "out")
    })
}

/// Runs the non-vanishing check for `A(p,1,3)`. `passed` receives the overall
/// verdict; `report_json`, if not NULL, receives the full report.
///
/// # Safety
/// `passed` must be valid; `report_json` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn massey_verify_main(prime: u32, passed: *mut bool, report_json: *mut *mut c_char) -> MasseyStatus {
    guard(|| {
        let report = verify_main(prime)?;
        write_out(passed, report.passed, "passed")?;
        if !report_json.is_null() {
            write_string(report_json, serde_json::to_string(&report).expect("report serializes"))?;
        }
        Ok(())
    })
}

/// Runs the `F_2` table for the conic with three tangent lines.
///
/// # Safety
/// `passed` must be valid; `report_json` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn massey_verify_kty(passed: *mut bool, report_json: *mut *mut c_char) -> MasseyStatus {
    guard(|| {
        let report = verify_kty();
        write_out(passed, report.passed, "passed")?;
        if !report_json.is_null() {
            write_string(report_json, serde_json::to_string(&report).expect("report serializes"))?;
        }
        Ok(())
    })
}
