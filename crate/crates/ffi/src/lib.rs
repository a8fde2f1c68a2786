//! C ABI for `packset`.
//!
//! Objects cross the boundary as opaque handles created by `*_new` /
//! `*_from_json` functions and released with the matching `*_free`. Every
//! fallible call returns a [`PacksetStatus`]; the message of the most recent
//! failure on the calling thread is available from
//! [`packset_last_error_message`].
//!
//! Field elements are passed as `uint64_t` in packed form: the residue
//! itself in a prime field, `sum c_i p^i` in an extension field.
#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;
use std::slice;

use packset::codec::{self, DecodeOutcome, RestrictedCode, SyndromeTable};
use packset::constructions::{self, CyclotomicParams};
use packset::packing::{self, DEFAULT_ENUM_CAP};
use packset::{bounds, ntheory, Error, PackingSet, Status, Verdict};

/// Result codes for every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PacksetStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotPrime = 3,
    EnumerationTooLarge = 4,
    WrongResidueClass = 5,
    NotCertified = 6,
    Malformed = 7,
    NoPrimeFound = 8,
    BudgetExceeded = 9,
    CertificationContradiction = 10,
    BufferTooSmall = 11,
    Internal = 12,
}

/// Certification state of a packing set.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PacksetVerdict {
    Unverified = 0,
    VerifiedExhaustive = 1,
    VerifiedSufficient = 2,
    Refuted = 3,
}

/// Opaque packing set.
pub struct PacksetPacking {
    inner: PackingSet,
}

/// Opaque code with its precomputed syndrome table.
pub struct PacksetCode {
    code: RestrictedCode,
    table: SyndromeTable,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(e: Error) -> PacksetStatus {
    let status = match &e {
        Error::NotPrime(_) => PacksetStatus::NotPrime,
        Error::EnumerationTooLarge { .. } => PacksetStatus::EnumerationTooLarge,
        Error::WrongResidueClass(_) => PacksetStatus::WrongResidueClass,
        Error::NotCertified => PacksetStatus::NotCertified,
        Error::Malformed(_) => PacksetStatus::Malformed,
        Error::NoPrimeFound { .. } => PacksetStatus::NoPrimeFound,
        Error::StepBudgetExceeded(_) => PacksetStatus::BudgetExceeded,
        Error::CertificationContradiction(_) => PacksetStatus::CertificationContradiction,
        Error::DivisionByZero
        | Error::ZeroElement
        | Error::FieldTooLarge { .. }
        | Error::InvalidParameter(_)
        | Error::NotInField(_)
        | Error::TExceedsL { .. } => PacksetStatus::InvalidArgument,
    };
    set_last_error(e.to_string());
    status
}

fn null_arg() -> PacksetStatus {
    set_last_error("null pointer argument".into());
    PacksetStatus::NullPointer
}

fn verdict_of(s: &Status) -> PacksetVerdict {
    match s {
        Status::Unverified => PacksetVerdict::Unverified,
        Status::VerifiedExhaustive => PacksetVerdict::VerifiedExhaustive,
        Status::VerifiedSufficient => PacksetVerdict::VerifiedSufficient,
        Status::Refuted(_) => PacksetVerdict::Refuted,
    }
}

unsafe fn emit_packing(
    result: Result<PackingSet, Error>,
    out: *mut *mut PacksetPacking,
) -> PacksetStatus {
    if out.is_null() {
        return null_arg();
    }
    match result {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(PacksetPacking { inner }));
            PacksetStatus::Ok
        }
        Err(e) => {
            *out = ptr::null_mut();
            fail(e)
        }
    }
}

/// Message for the last failed call on this thread, or NULL. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn packset_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub extern "C" fn packset_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[no_mangle]
pub extern "C" fn packset_is_prime(n: u64) -> bool {
    ntheory::is_prime(n)
}

/// Largest size allowed by the syndrome-count bound; 0 on invalid input.
#[no_mangle]
pub extern "C" fn packset_max_b_upper(a: u64, t: u32, q: u64) -> u64 {
    bounds::max_b_upper(a, t, q).unwrap_or(0)
}

/// Smallest size any maximal packing set can have; 0 on invalid input.
#[no_mangle]
pub extern "C" fn packset_min_b_maximal(a: u64, t: u32, q: u64) -> u64 {
    bounds::min_b_maximal(a, t, q).unwrap_or(0)
}

/// Powers of `lambda + 1` modulo `p`.
#[no_mangle]
pub unsafe extern "C" fn packset_powers_new(
    p: u64,
    lambda: u64,
    t: u32,
    out: *mut *mut PacksetPacking,
) -> PacksetStatus {
    emit_packing(
        constructions::powers_packing_set(p, lambda, t, DEFAULT_ENUM_CAP),
        out,
    )
}

/// Quadratic residues modulo `p`.
#[no_mangle]
pub unsafe extern "C" fn packset_qr_new(p: u64, out: *mut *mut PacksetPacking) -> PacksetStatus {
    emit_packing(
        constructions::quadratic_residue_packing_set(p, DEFAULT_ENUM_CAP),
        out,
    )
}

/// Power basis of `F_{p^k}`.
#[no_mangle]
pub unsafe extern "C" fn packset_basis_new(
    p: u64,
    k: u32,
    seed: u64,
    out: *mut *mut PacksetPacking,
) -> PacksetStatus {
    emit_packing(
        constructions::basis_packing_set(p, k, seed, DEFAULT_ENUM_CAP),
        out,
    )
}

/// Randomized roots-of-unity construction; the returned set is `B0`.
/// `p_out` receives the prime, if non-null.
#[no_mangle]
pub unsafe extern "C" fn packset_cyclotomic_new(
    k_scale: u64,
    q_scale: u64,
    lambda: u64,
    t: u32,
    seed: u64,
    p_out: *mut u64,
    out: *mut *mut PacksetPacking,
) -> PacksetStatus {
    let params = CyclotomicParams {
        k_scale,
        q_scale,
        lambda,
        t,
        seed,
    };
    let run = constructions::cyclotomic_construct(params, DEFAULT_ENUM_CAP);
    if let (Ok(r), false) = (&run, p_out.is_null()) {
        *p_out = r.p;
    }
    emit_packing(run.map(|r| r.packing), out)
}

/// Packing set over `F_p` from element and alphabet arrays.
#[no_mangle]
pub unsafe extern "C" fn packset_packing_new(
    p: u64,
    elements: *const u64,
    n_elements: usize,
    alphabet: *const u64,
    n_alphabet: usize,
    t: u32,
    out: *mut *mut PacksetPacking,
) -> PacksetStatus {
    if (elements.is_null() && n_elements > 0) || alphabet.is_null() {
        return null_arg();
    }
    let b = if n_elements == 0 {
        &[][..]
    } else {
        slice::from_raw_parts(elements, n_elements)
    };
    let a = slice::from_raw_parts(alphabet, n_alphabet);
    emit_packing(PackingSet::from_values(p, b, a, t), out)
}

/// Parses the JSON form of a packing set.
#[no_mangle]
pub unsafe extern "C" fn packset_packing_from_json(
    json: *const c_char,
    out: *mut *mut PacksetPacking,
) -> PacksetStatus {
    if json.is_null() {
        return null_arg();
    }
    let parsed = CStr::from_ptr(json)
        .to_str()
        .map_err(|e| Error::Malformed(e.to_string()))
        .and_then(|s| {
            serde_json::from_str::<PackingSet>(s).map_err(|e| Error::Malformed(e.to_string()))
        });
    emit_packing(parsed, out)
}

/// JSON form of a packing set. Release the string with
/// [`packset_string_free`].
#[no_mangle]
pub unsafe extern "C" fn packset_packing_to_json(
    ps: *const PacksetPacking,
    out: *mut *mut c_char,
) -> PacksetStatus {
    if ps.is_null() || out.is_null() {
        return null_arg();
    }
    match serde_json::to_string(&(*ps).inner) {
        Ok(s) => {
            *out = CString::new(s).expect("json has no NUL").into_raw();
            PacksetStatus::Ok
        }
        Err(e) => fail(Error::Malformed(e.to_string())),
    }
}

#[no_mangle]
pub unsafe extern "C" fn packset_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[no_mangle]
pub unsafe extern "C" fn packset_packing_free(ps: *mut PacksetPacking) {
    if !ps.is_null() {
        drop(Box::from_raw(ps));
    }
}

/// Number of elements; 0 for NULL.
#[no_mangle]
pub unsafe extern "C" fn packset_packing_len(ps: *const PacksetPacking) -> usize {
    if ps.is_null() {
        0
    } else {
        (*ps).inner.len()
    }
}

/// Copies the packed elements into `buf` (capacity `cap`).
#[no_mangle]
pub unsafe extern "C" fn packset_packing_elements(
    ps: *const PacksetPacking,
    buf: *mut u64,
    cap: usize,
) -> PacksetStatus {
    if ps.is_null() || buf.is_null() {
        return null_arg();
    }
    let elems = (*ps).inner.elements();
    if cap < elems.len() {
        set_last_error(format!("buffer holds {cap}, need {}", elems.len()));
        return PacksetStatus::BufferTooSmall;
    }
    for (i, e) in elems.iter().enumerate() {
        *buf.add(i) = e.value();
    }
    PacksetStatus::Ok
}

#[no_mangle]
pub unsafe extern "C" fn packset_packing_status(ps: *const PacksetPacking) -> PacksetVerdict {
    if ps.is_null() {
        return PacksetVerdict::Unverified;
    }
    verdict_of((*ps).inner.status())
}

/// Runs the exhaustive verifier and records the verdict on the handle.
#[no_mangle]
pub unsafe extern "C" fn packset_packing_verify(
    ps: *mut PacksetPacking,
    cap: u64,
    verdict: *mut PacksetVerdict,
) -> PacksetStatus {
    if ps.is_null() || verdict.is_null() {
        return null_arg();
    }
    let cap = if cap == 0 { DEFAULT_ENUM_CAP } else { cap };
    match packing::verify_packing_with_cap(&(*ps).inner, cap) {
        Ok(v) => {
            *verdict = match v {
                Verdict::VerifiedExhaustive => PacksetVerdict::VerifiedExhaustive,
                Verdict::Refuted(_) => PacksetVerdict::Refuted,
            };
            let inner = std::mem::replace(&mut (*ps).inner, placeholder());
            (*ps).inner = inner.with_status(v.into());
            PacksetStatus::Ok
        }
        Err(e) => fail(e),
    }
}

fn placeholder() -> PackingSet {
    PackingSet::from_values(2, &[], &[1], 1).expect("trivial set")
}

/// Builds the code and its syndrome table from a certified packing set.
/// The packing handle is not consumed.
#[no_mangle]
pub unsafe extern "C" fn packset_code_new(
    ps: *const PacksetPacking,
    out: *mut *mut PacksetCode,
) -> PacksetStatus {
    if ps.is_null() || out.is_null() {
        return null_arg();
    }
    let built = RestrictedCode::new((*ps).inner.clone()).and_then(|code| {
        codec::build_syndrome_table(&code).map(|table| PacksetCode { code, table })
    });
    match built {
        Ok(c) => {
            *out = Box::into_raw(Box::new(c));
            PacksetStatus::Ok
        }
        Err(e) => {
            *out = ptr::null_mut();
            fail(e)
        }
    }
}

#[no_mangle]
pub unsafe extern "C" fn packset_code_free(code: *mut PacksetCode) {
    if !code.is_null() {
        drop(Box::from_raw(code));
    }
}

/// Code length `B`; 0 for NULL.
#[no_mangle]
pub unsafe extern "C" fn packset_code_len(code: *const PacksetCode) -> usize {
    if code.is_null() {
        0
    } else {
        (*code).code.len()
    }
}

unsafe fn read_word(
    code: &PacksetCode,
    ptr: *const u64,
    len: usize,
) -> Result<Vec<packset::Elem>, Error> {
    let raw = if len == 0 {
        &[][..]
    } else {
        slice::from_raw_parts(ptr, len)
    };
    raw.iter().map(|&v| code.code.field().elem(v)).collect()
}

/// Encodes `message` (length `B - 1`) into `codeword` (length `B`).
#[no_mangle]
pub unsafe extern "C" fn packset_code_encode(
    code: *const PacksetCode,
    message: *const u64,
    message_len: usize,
    codeword: *mut u64,
    codeword_len: usize,
) -> PacksetStatus {
    if code.is_null() || codeword.is_null() || (message.is_null() && message_len > 0) {
        return null_arg();
    }
    let code = &*code;
    if codeword_len < code.code.len() {
        set_last_error(format!(
            "codeword buffer holds {codeword_len}, need {}",
            code.code.len()
        ));
        return PacksetStatus::BufferTooSmall;
    }
    match read_word(code, message, message_len).and_then(|m| code.code.encode(&m)) {
        Ok(word) => {
            for (i, e) in word.iter().enumerate() {
                *codeword.add(i) = e.value();
            }
            PacksetStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Decodes `received` (length `B`). On success writes the message
/// (length `B - 1`) and sets `corrected`; an uncorrectable word returns
/// `Ok` with `corrected = false`.
#[no_mangle]
pub unsafe extern "C" fn packset_code_decode(
    code: *const PacksetCode,
    received: *const u64,
    received_len: usize,
    message: *mut u64,
    message_len: usize,
    corrected: *mut bool,
) -> PacksetStatus {
    if code.is_null()
        || received.is_null()
        || corrected.is_null()
        || (message.is_null() && message_len > 0)
    {
        return null_arg();
    }
    let code = &*code;
    if message_len < code.code.dimension() {
        set_last_error(format!(
            "message buffer holds {message_len}, need {}",
            code.code.dimension()
        ));
        return PacksetStatus::BufferTooSmall;
    }
    let outcome = read_word(code, received, received_len)
        .and_then(|r| codec::decode(&code.code, &code.table, &r));
    match outcome {
        Ok(DecodeOutcome::Corrected { message: m, .. }) => {
            for (i, e) in m.iter().enumerate() {
                *message.add(i) = e.value();
            }
            *corrected = true;
            PacksetStatus::Ok
        }
        Ok(DecodeOutcome::Uncorrectable { .. }) => {
            *corrected = false;
            PacksetStatus::Ok
        }
        Err(e) => fail(e),
    }
}
