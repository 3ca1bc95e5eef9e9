//! C interface to the `xyz2` core.
//!
//! Codes live behind an opaque `Xyz2Code` handle. Every fallible call returns
//! an [`Xyz2Status`]; on failure `xyz2_last_error` describes what went wrong
//! on the calling thread. Pauli letters use the symplectic encoding
//! `x | z << 1`: I = 0, X = 1, Z = 2, Y = 3.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use xyz2::decode::{ewd_decode, exact_mld_decode, syndrome, DecodeResult, DecoderConfig, Syndrome};
use xyz2::gf2::BitVec;
use xyz2::noise::make_noise;
use xyz2::rng::{substream, Purpose};
use xyz2::{Bias, Error, Family, Letter, NoiseParams, PauliOperator, StabilizerCode};

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Xyz2Status {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    Dimension = 3,
    Capability = 4,
    Consistency = 5,
    Precondition = 6,
    Parse = 7,
    Io = 8,
    Internal = 9,
}

/// Opaque stabilizer code handle.
pub struct Xyz2Code {
    inner: StabilizerCode,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> Xyz2Status {
    match e {
        Error::Parameter(_) => Xyz2Status::InvalidParameter,
        Error::Dimension { .. } => Xyz2Status::Dimension,
        Error::Capability(_) => Xyz2Status::Capability,
        Error::Consistency(_) => Xyz2Status::Consistency,
        Error::Precondition(_) | Error::NotBracketed(_) => Xyz2Status::Precondition,
        Error::Parse(_) | Error::Json(_) | Error::Csv(_) => Xyz2Status::Parse,
        Error::Io(_) => Xyz2Status::Io,
    }
}

struct Fail(Xyz2Status, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(Xyz2Status::NullPointer, format!("{what} is null"))
}

/// Runs `f`, records any error, and turns panics into `Internal`.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> Xyz2Status {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            Xyz2Status::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            Xyz2Status::Internal
        }
    }
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(Xyz2Status::InvalidParameter, format!("{what} is not UTF-8")))
}

unsafe fn code_ref<'a>(code: *const Xyz2Code) -> Result<&'a StabilizerCode, Fail> {
    code.as_ref().map(|c| &c.inner).ok_or_else(|| null("code"))
}

fn letter(l: u8) -> Result<Letter, Fail> {
    if l > 3 {
        return Err(Fail(Xyz2Status::InvalidParameter, format!("letter code {l} is not in 0..=3")));
    }
    Ok(Letter::from_index(l))
}

/// Non-positive or infinite `eta` selects pure noise along `axis`.
fn noise(p: f64, eta: f64, axis: u8) -> Result<NoiseParams, Fail> {
    let bias = if eta.is_infinite() && eta > 0.0 { Bias::Infinite } else { Bias::Finite(eta) };
    Ok(make_noise(p, bias, letter(axis)?)?)
}

unsafe fn read_syndrome(code: &StabilizerCode, bits: *const u8, len: usize) -> Result<Syndrome, Fail> {
    if bits.is_null() {
        return Err(null("syndrome"));
    }
    if len != code.num_generators() {
        return Err(Error::Dimension { expected: code.num_generators(), found: len }.into());
    }
    let bits = slice::from_raw_parts(bits, len);
    Ok(Syndrome { bits: BitVec::from_bools(bits.iter().map(|&b| b != 0)) })
}

unsafe fn write_result(r: &DecodeResult, scores: *mut f64, chosen: *mut u8) -> Result<(), Fail> {
    if chosen.is_null() {
        return Err(null("chosen"));
    }
    *chosen = r.chosen.index() as u8;
    if !scores.is_null() {
        slice::from_raw_parts_mut(scores, 4).copy_from_slice(&r.class_scores);
    }
    Ok(())
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn xyz2_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn xyz2_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a code family member, e.g. `"xyz2"` or `"xzzx"`, at odd distance `d`.
///
/// # Safety
/// `family` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn xyz2_code_build(family: *const c_char, d: usize, out: *mut *mut Xyz2Code) -> Xyz2Status {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let family: Family = c_str(family, "family")?.parse()?;
        let inner = family.build(d)?;
        *out = Box::into_raw(Box::new(Xyz2Code { inner }));
        Ok(())
    })
}

/// Parses a code from its text form.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn xyz2_code_parse(text: *const c_char, out: *mut *mut Xyz2Code) -> Xyz2Status {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let inner = StabilizerCode::parse_text(c_str(text, "text")?)?;
        *out = Box::into_raw(Box::new(Xyz2Code { inner }));
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `code` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn xyz2_code_free(code: *mut Xyz2Code) {
    if !code.is_null() {
        drop(Box::from_raw(code));
    }
}

/// Qubit count, or 0 for a null handle.
///
/// # Safety
/// `code` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn xyz2_code_num_qubits(code: *const Xyz2Code) -> usize {
    code.as_ref().map_or(0, |c| c.inner.num_qubits())
}

/// Generator count, or 0 for a null handle.
///
/// # Safety
/// `code` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn xyz2_code_num_generators(code: *const Xyz2Code) -> usize {
    code.as_ref().map_or(0, |c| c.inner.num_generators())
}

/// Syndrome of an error chain given as one letter per qubit. Writes one
/// 0/1 byte per generator.
///
/// # Safety
/// `chain` must hold `n` bytes and `out` room for `m` bytes.
#[no_mangle]
pub unsafe extern "C" fn xyz2_syndrome(
    code: *const Xyz2Code,
    chain: *const u8,
    n: usize,
    out: *mut u8,
    m: usize,
) -> Xyz2Status {
    guard(|| {
        let code = code_ref(code)?;
        if chain.is_null() || out.is_null() {
            return Err(null("chain or out"));
        }
        if m != code.num_generators() {
            return Err(Error::Dimension { expected: code.num_generators(), found: m }.into());
        }
        let letters = slice::from_raw_parts(chain, n)
            .iter()
            .map(|&l| letter(l))
            .collect::<Result<Vec<_>, _>>()?;
        let s = syndrome(code, &PauliOperator::from_letters(&letters))?;
        let out = slice::from_raw_parts_mut(out, m);
        for (i, o) in out.iter_mut().enumerate() {
            *o = s.bits.get(i) as u8;
        }
        Ok(())
    })
}

/// Exact maximum-likelihood decoding (codes of at most 20 qubits).
/// `scores` receives the four log class probabilities in I, X, Y, Z order
/// and may be null; `chosen` receives the class index.
///
/// # Safety
/// `syndrome` must hold `m` bytes; `scores`, when non-null, four doubles.
#[no_mangle]
pub unsafe extern "C" fn xyz2_decode_exact(
    code: *const Xyz2Code,
    syndrome: *const u8,
    m: usize,
    p: f64,
    eta: f64,
    axis: u8,
    scores: *mut f64,
    chosen: *mut u8,
) -> Xyz2Status {
    guard(|| {
        let code = code_ref(code)?;
        let s = read_syndrome(code, syndrome, m)?;
        let r = exact_mld_decode(code, &s, &noise(p, eta, axis)?)?;
        write_result(&r, scores, chosen)
    })
}

/// Metropolis effective-weight decoding. `p_sample` NaN and
/// `steps_per_class` 0 select the defaults.
///
/// # Safety
/// As for [`xyz2_decode_exact`].
#[no_mangle]
pub unsafe extern "C" fn xyz2_decode_ewd(
    code: *const Xyz2Code,
    syndrome: *const u8,
    m: usize,
    p: f64,
    eta: f64,
    axis: u8,
    p_sample: f64,
    steps_per_class: usize,
    seed: u64,
    scores: *mut f64,
    chosen: *mut u8,
) -> Xyz2Status {
    guard(|| {
        let code = code_ref(code)?;
        let s = read_syndrome(code, syndrome, m)?;
        let noise = noise(p, eta, axis)?;
        let ps = (!p_sample.is_nan()).then_some(p_sample);
        let mut cfg = DecoderConfig::new(code.num_qubits(), &noise, ps)?;
        if steps_per_class > 0 {
            cfg.steps_per_class = steps_per_class;
            cfg.burn_in = cfg.burn_in.min(steps_per_class);
        }
        let mut rng = substream(seed, 0, 0, Purpose::Decoder);
        let r = ewd_decode(code, &s, &noise, &cfg, &mut rng)?;
        write_result(&r, scores, chosen)
    })
}

/// Closed-form failure rate under pure `axis` noise, for `"xyz2"` and `"xzzx"`.
///
/// # Safety
/// `family` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn xyz2_analytic_pf(
    family: *const c_char,
    d: usize,
    p: f64,
    axis: u8,
    out: *mut f64,
) -> Xyz2Status {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let family: Family = c_str(family, "family")?.parse()?;
        *out = xyz2::decode::analytic_pf_pure(family, d, p, letter(axis)?)?;
        Ok(())
    })
}
