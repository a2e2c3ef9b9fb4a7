//! C ABI for gapforge.
//!
//! Every object crosses the boundary as an opaque pointer created by a
//! `gf_*` constructor and released by the matching `gf_*_free`. Fallible
//! calls return a [`GfStatus`] and write their result through an out
//! pointer. After a failure, `gf_last_error_message` describes it. Strings
//! handed out by the library must be released with `gf_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gapforge::codes::{balanced_code, hadamard, LinearCode, Rational};
use gapforge::enumerate::Limits;
use gapforge::format;
use gapforge::frontend::{circuit_to_quadratic, parse_circuit, Circuit, QuadraticSystem};
use gapforge::oracle::{verify_instance, Instance, Verdict, VerifyReport};
use gapforge::pipeline::field_of_size;
use gapforge::reduction::{amplify, mdp_to_ncp, quad_to_mdp};
use gapforge::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidParameter = 4,
    GapClosed = 5,
    CapExceeded = 6,
    Arithmetic = 7,
    WrongInstanceKind = 8,
    Panic = 99,
}

/// Verification outcome.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GfVerdict {
    YesConfirmed = 0,
    NoConfirmed = 1,
    GapViolation = 2,
    Inconclusive = 3,
}

impl From<Verdict> for GfVerdict {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::YesConfirmed => GfVerdict::YesConfirmed,
            Verdict::NoConfirmed => GfVerdict::NoConfirmed,
            Verdict::GapViolation => GfVerdict::GapViolation,
            Verdict::Inconclusive => GfVerdict::Inconclusive,
        }
    }
}

pub struct GfCircuit(Circuit);
pub struct GfQuadSys(QuadraticSystem);
pub struct GfCode(LinearCode);
/// An MDP or NCP instance.
pub struct GfInstance(Instance);
pub struct GfReport(VerifyReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(err: &Error) -> GfStatus {
    match err {
        Error::Parse { .. }
        | Error::ForwardReference { .. }
        | Error::NoOutput
        | Error::DuplicateName { .. } => GfStatus::Parse,
        Error::GapClosed(_) => GfStatus::GapClosed,
        Error::EnumerationCapExceeded { .. } | Error::SizeCap { .. } => GfStatus::CapExceeded,
        Error::DivisionByZero | Error::FieldMismatch | Error::DimensionMismatch { .. } => {
            GfStatus::Arithmetic
        }
        _ => GfStatus::InvalidParameter,
    }
}

struct Failure(GfStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

/// Runs `f` and turns an error or panic into a status plus a stored message.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> GfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            GfStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            GfStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure(GfStatus::NullPointer, format!("{what} is null")))
}

unsafe fn text_arg<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(GfStatus::NullPointer, "text is null".into()));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(GfStatus::InvalidUtf8, "text is not valid UTF-8".into()))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(
            GfStatus::NullPointer,
            "output pointer is null".into(),
        ));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_box<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    put(out, Box::into_raw(Box::new(value)))
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure(GfStatus::Panic, "interior NUL".into()))?;
    put(out, c.into_raw())
}

unsafe fn free<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Message for the most recent failure on this thread, or NULL. The pointer
/// stays valid until the next `gf_*` call on the same thread.
#[no_mangle]
pub extern "C" fn gf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by any `*_to_text` function.
///
/// # Safety
/// `s` must be NULL or a pointer obtained from this library.
#[no_mangle]
pub unsafe extern "C" fn gf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// ---- circuits -------------------------------------------------------------

/// Parses `.circ` text.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn gf_circuit_parse(
    text: *const c_char,
    out: *mut *mut GfCircuit,
) -> GfStatus {
    guard(|| {
        let c = parse_circuit(text_arg(text)?)?;
        put_box(out, GfCircuit(c))
    })
}

/// Exhaustive satisfiability of the circuit.
///
/// # Safety
/// `c` must come from `gf_circuit_parse`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gf_circuit_is_satisfiable(
    c: *const GfCircuit,
    out: *mut bool,
) -> GfStatus {
    guard(|| put(out, borrow(c, "circuit")?.0.is_satisfiable()))
}

/// # Safety
/// `c` must be NULL or come from `gf_circuit_parse`.
#[no_mangle]
pub unsafe extern "C" fn gf_circuit_free(c: *mut GfCircuit) {
    free(c)
}

// ---- quadratic systems ----------------------------------------------------

/// Compiles a circuit into a homogeneous quadratic system over `F_q`.
///
/// # Safety
/// `c` must come from `gf_circuit_parse`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gf_compile(
    c: *const GfCircuit,
    q: u32,
    out: *mut *mut GfQuadSys,
) -> GfStatus {
    guard(|| {
        let field = field_of_size(q)?;
        put_box(
            out,
            GfQuadSys(circuit_to_quadratic(&borrow(c, "circuit")?.0, &field)),
        )
    })
}

/// # Safety
/// `text` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gf_quadsys_from_text(
    text: *const c_char,
    out: *mut *mut GfQuadSys,
) -> GfStatus {
    guard(|| put_box(out, GfQuadSys(format::parse_quadsys(text_arg(text)?)?)))
}

/// # Safety
/// `s` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gf_quadsys_to_text(
    s: *const GfQuadSys,
    out: *mut *mut c_char,
) -> GfStatus {
    guard(|| put_string(out, format::write_quadsys(&borrow(s, "system")?.0)))
}

/// # Safety
/// `s` must be NULL or come from this library.
#[no_mangle]
pub unsafe extern "C" fn gf_quadsys_free(s: *mut GfQuadSys) {
    free(s)
}

// ---- codes ----------------------------------------------------------------

/// Hadamard code of dimension `n` over `F_q`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gf_code_hadamard(q: u32, n: usize, out: *mut *mut GfCode) -> GfStatus {
    guard(|| {
        let field = field_of_size(q)?;
        put_box(out, GfCode(hadamard(&field, n, &Limits::default())?))
    })
}

/// Balanced Reed-Solomon/Hadamard concatenation with parameter
/// `eps_num / eps_den`, distance refined exhaustively when within `cap`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gf_code_balanced(
    q: u32,
    n: usize,
    eps_num: u64,
    eps_den: u64,
    cap: u64,
    out: *mut *mut GfCode,
) -> GfStatus {
    guard(|| {
        if eps_den == 0 {
            return Err(Failure(
                GfStatus::InvalidParameter,
                "eps denominator is zero".into(),
            ));
        }
        let field = field_of_size(q)?;
        let limits = Limits::with_cap(cap as u128);
        let code = balanced_code(&field, n, Rational::new(eps_num, eps_den), &limits)?;
        put_box(out, GfCode(code.refine_distance(cap as u128)))
    })
}

/// Exact minimum distance by enumeration of at most `cap` codewords.
///
/// # Safety
/// `code` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gf_code_min_distance(
    code: *const GfCode,
    cap: u64,
    out: *mut u64,
) -> GfStatus {
    guard(|| {
        put(
            out,
            borrow(code, "code")?
                .0
                .min_distance_exhaustive(cap as u128)?,
        )
    })
}

/// Writes block length and dimension.
///
/// # Safety
/// `code` must come from this library; both outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn gf_code_shape(
    code: *const GfCode,
    block_len: *mut usize,
    dim: *mut usize,
) -> GfStatus {
    guard(|| {
        let c = &borrow(code, "code")?.0;
        put(block_len, c.block_len())?;
        put(dim, c.dim())
    })
}

/// # Safety
/// `text` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gf_code_from_text(text: *const c_char, out: *mut *mut GfCode) -> GfStatus {
    guard(|| put_box(out, GfCode(format::parse_code(text_arg(text)?)?)))
}

/// # Safety
/// `code` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gf_code_to_text(code: *const GfCode, out: *mut *mut c_char) -> GfStatus {
    guard(|| put_string(out, format::write_code(&borrow(code, "code")?.0)))
}

/// # Safety
/// `code` must be NULL or come from this library.
#[no_mangle]
pub unsafe extern "C" fn gf_code_free(code: *mut GfCode) {
    free(code)
}

// ---- instances ------------------------------------------------------------

/// Maps a quadratic system through `code` to an MDP instance.
///
/// # Safety
/// `sys` and `code` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gf_reduce(
    sys: *const GfQuadSys,
    code: *const GfCode,
    distinguished: bool,
    out: *mut *mut GfInstance,
) -> GfStatus {
    guard(|| {
        let inst = quad_to_mdp(
            &borrow(sys, "system")?.0,
            &borrow(code, "code")?.0,
            distinguished,
            &Limits::default(),
        )?;
        put_box(out, GfInstance(Instance::Mdp(inst)))
    })
}

fn expect_mdp(inst: &GfInstance) -> Result<&gapforge::MdpInstance, Failure> {
    match &inst.0 {
        Instance::Mdp(m) => Ok(m),
        Instance::Ncp(_) => Err(Failure(
            GfStatus::WrongInstanceKind,
            "expected an MDP instance".into(),
        )),
    }
}

/// `t`-fold tensor power of an MDP instance.
///
/// # Safety
/// `inst` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gf_amplify(
    inst: *const GfInstance,
    t: u32,
    out: *mut *mut GfInstance,
) -> GfStatus {
    guard(|| {
        let m = expect_mdp(borrow(inst, "instance")?)?;
        put_box(
            out,
            GfInstance(Instance::Mdp(amplify(m, t, &Limits::default())?)),
        )
    })
}

/// Affine slice of a distinguished MDP instance.
///
/// # Safety
/// `inst` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gf_to_ncp(inst: *const GfInstance, out: *mut *mut GfInstance) -> GfStatus {
    guard(|| {
        let m = expect_mdp(borrow(inst, "instance")?)?;
        put_box(out, GfInstance(Instance::Ncp(mdp_to_ncp(m)?)))
    })
}

/// Returns true for NCP instances.
///
/// # Safety
/// `inst` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gf_instance_is_ncp(inst: *const GfInstance, out: *mut bool) -> GfStatus {
    guard(|| put(out, matches!(borrow(inst, "instance")?.0, Instance::Ncp(_))))
}

/// Exact optimum. Writes -1 when the subspace holds no nonzero vector.
///
/// # Safety
/// `inst` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gf_solve(inst: *const GfInstance, cap: u64, out: *mut i64) -> GfStatus {
    guard(|| {
        let w = borrow(inst, "instance")?.0.solve(cap as u128)?;
        put(out, w.map_or(-1, |w| w.weight as i64))
    })
}

/// # Safety
/// `text` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gf_instance_from_text(
    text: *const c_char,
    out: *mut *mut GfInstance,
) -> GfStatus {
    guard(|| put_box(out, GfInstance(format::parse_instance(text_arg(text)?)?)))
}

/// # Safety
/// `inst` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gf_instance_to_text(
    inst: *const GfInstance,
    out: *mut *mut c_char,
) -> GfStatus {
    guard(|| put_string(out, format::write_instance(&borrow(inst, "instance")?.0)))
}

/// # Safety
/// `inst` must be NULL or come from this library.
#[no_mangle]
pub unsafe extern "C" fn gf_instance_free(inst: *mut GfInstance) {
    free(inst)
}

// ---- verification ---------------------------------------------------------

/// Checks an instance against its thresholds. `circuit` may be NULL; when
/// given, the verdict is cross-checked against its satisfiability.
///
/// # Safety
/// `inst` must come from this library, `circuit` must be NULL or come from
/// `gf_circuit_parse`, and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gf_verify(
    inst: *const GfInstance,
    circuit: *const GfCircuit,
    cap: u64,
    out: *mut *mut GfReport,
) -> GfStatus {
    guard(|| {
        let inst = &borrow(inst, "instance")?.0;
        let circuit = circuit.as_ref().map(|c| &c.0);
        put_box(out, GfReport(verify_instance(inst, circuit, cap as u128)))
    })
}

/// # Safety
/// `rep` must come from `gf_verify`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gf_report_verdict(rep: *const GfReport, out: *mut GfVerdict) -> GfStatus {
    guard(|| put(out, borrow(rep, "report")?.0.verdict.into()))
}

/// Oracle optimum recorded in the report, or -1 when absent.
///
/// # Safety
/// `rep` must come from `gf_verify`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gf_report_oracle_value(rep: *const GfReport, out: *mut i64) -> GfStatus {
    guard(|| {
        put(
            out,
            borrow(rep, "report")?
                .0
                .oracle_value
                .map_or(-1, |v| v as i64),
        )
    })
}

/// Key=value rendering of the report, without timing.
///
/// # Safety
/// `rep` must come from `gf_verify`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gf_report_to_text(
    rep: *const GfReport,
    out: *mut *mut c_char,
) -> GfStatus {
    guard(|| put_string(out, format::write_report(&borrow(rep, "report")?.0, false)))
}

/// # Safety
/// `rep` must be NULL or come from `gf_verify`.
#[no_mangle]
pub unsafe extern "C" fn gf_report_free(rep: *mut GfReport) {
    free(rep)
}
