//! C ABI for the terraced crate.
//!
//! Sequences and cut sequences are opaque handles created and released
//! through these functions; every call returns a [`TerracedStatus`] and
//! writes results through out-pointers. The header is generated into
//! `include/terraced.h` at build time.

// Every exported function null-checks its pointers before any dereference;
// pointer validity beyond that is the C caller's contract, as usual for a
// C ABI, so the functions stay callable without `unsafe` on the Rust side.
#![allow(clippy::not_unsafe_ptr_arg_deref)]

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_complex::Complex64;

use terraced::bracket::Verdict;
use terraced::criteria::{self, CriteriaParams};
use terraced::epsl::{self, EpsLStatus};
use terraced::interval::{self, NaturalInterval};
use terraced::sequences::{load_sequence, save_sequence, SequenceSpec};
use terraced::TerracedError;

/// Opaque coefficient sequence handle.
pub struct TerracedSeq {
    spec: SequenceSpec,
}

/// Opaque cut-sequence handle.
pub struct TerracedEpsl {
    seq: epsl::EpsLSequence,
}

/// Status code returned by every function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerracedStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Divergent = 3,
    IoError = 4,
    ParseError = 5,
    Internal = 6,
    Panic = 7,
}

/// Three-valued verdict.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerracedVerdict {
    No = 0,
    Yes = 1,
    Undetermined = 2,
}

/// Interval functional report for one natural interval.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct TerracedIntervalReport {
    pub a: u64,
    pub b: u64,
    pub mu: f64,
    pub l: f64,
    pub k: f64,
    pub j: f64,
    pub argmin_c: u64,
}

/// Cut-sequence status kind.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerracedEpslStatusKind {
    Finite = 0,
    InfiniteDetected = 1,
    Undetermined = 2,
}

fn status_of(err: &TerracedError) -> TerracedStatus {
    match err {
        TerracedError::Divergent(_) => TerracedStatus::Divergent,
        TerracedError::NodeOutOfRange { .. } => TerracedStatus::InvalidArgument,
        TerracedError::Parse { .. } => TerracedStatus::ParseError,
        TerracedError::Io { .. } => TerracedStatus::IoError,
        TerracedError::InvalidArgument(_) => TerracedStatus::InvalidArgument,
        TerracedError::NonFinite => TerracedStatus::InvalidArgument,
        TerracedError::Internal(_) => TerracedStatus::Internal,
    }
}

fn verdict_of(v: Verdict) -> TerracedVerdict {
    match v {
        Verdict::Yes => TerracedVerdict::Yes,
        Verdict::No => TerracedVerdict::No,
        Verdict::Undetermined => TerracedVerdict::Undetermined,
    }
}

fn guarded(f: impl FnOnce() -> TerracedStatus) -> TerracedStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => TerracedStatus::Panic,
    }
}

unsafe fn seq_ref<'a>(seq: *const TerracedSeq) -> Option<&'a TerracedSeq> {
    unsafe { seq.as_ref() }
}

fn boxed_out(spec: SequenceSpec, out: *mut *mut TerracedSeq) -> TerracedStatus {
    if out.is_null() {
        return TerracedStatus::NullPointer;
    }
    let handle = Box::new(TerracedSeq { spec });
    unsafe {
        *out = Box::into_raw(handle);
    }
    TerracedStatus::Ok
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn terraced_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// The classical Cesaro sequence `alpha_k = 1/(k+1)`.
#[no_mangle]
pub extern "C" fn terraced_seq_cesaro(out: *mut *mut TerracedSeq) -> TerracedStatus {
    guarded(|| boxed_out(SequenceSpec::cesaro(), out))
}

/// Power family `alpha_k = scale (k+1)^{-s}`, `s > 0`.
#[no_mangle]
pub extern "C" fn terraced_seq_power(
    s: f64,
    scale: f64,
    out: *mut *mut TerracedSeq,
) -> TerracedStatus {
    guarded(|| match SequenceSpec::power(s, scale) {
        Ok(spec) => boxed_out(spec, out),
        Err(e) => status_of(&e),
    })
}

/// Log-power family `alpha_k = scale (k+1)^{-s} ln(k+2)^{-t}`, `s > 0`,
/// `t >= 0`.
#[no_mangle]
pub extern "C" fn terraced_seq_log_power(
    s: f64,
    scale: f64,
    t: f64,
    out: *mut *mut TerracedSeq,
) -> TerracedStatus {
    guarded(|| match SequenceSpec::log_power(s, scale, t) {
        Ok(spec) => boxed_out(spec, out),
        Err(e) => status_of(&e),
    })
}

/// Finite-support sequence from parallel real/imaginary arrays of length
/// `len`.
#[no_mangle]
pub extern "C" fn terraced_seq_finite(
    re: *const f64,
    im: *const f64,
    len: usize,
    out: *mut *mut TerracedSeq,
) -> TerracedStatus {
    guarded(|| {
        if (re.is_null() || im.is_null()) && len > 0 {
            return TerracedStatus::NullPointer;
        }
        let values: Vec<Complex64> = (0..len)
            .map(|i| unsafe { Complex64::new(*re.add(i), *im.add(i)) })
            .collect();
        boxed_out(SequenceSpec::finite_support(values), out)
    })
}

/// Moment sequence of the atomic measure with weights `(w_re, w_im)` at
/// nodes in `[0, 1]`.
#[no_mangle]
pub extern "C" fn terraced_seq_moments(
    w_re: *const f64,
    w_im: *const f64,
    nodes: *const f64,
    len: usize,
    out: *mut *mut TerracedSeq,
) -> TerracedStatus {
    guarded(|| {
        if (w_re.is_null() || w_im.is_null() || nodes.is_null()) && len > 0 {
            return TerracedStatus::NullPointer;
        }
        let atoms: Vec<(Complex64, f64)> = (0..len)
            .map(|i| unsafe { (Complex64::new(*w_re.add(i), *w_im.add(i)), *nodes.add(i)) })
            .collect();
        match SequenceSpec::moments(atoms) {
            Ok(spec) => boxed_out(spec, out),
            Err(e) => status_of(&e),
        }
    })
}

/// Loads a `#terraced-seq v1` file.
#[no_mangle]
pub extern "C" fn terraced_seq_load(
    path: *const c_char,
    out: *mut *mut TerracedSeq,
) -> TerracedStatus {
    guarded(|| {
        if path.is_null() {
            return TerracedStatus::NullPointer;
        }
        let path = match unsafe { CStr::from_ptr(path) }.to_str() {
            Ok(p) => p,
            Err(_) => return TerracedStatus::InvalidArgument,
        };
        match load_sequence(path) {
            Ok(spec) => boxed_out(spec, out),
            Err(e) => status_of(&e),
        }
    })
}

/// Writes a finite-support sequence to a file.
#[no_mangle]
pub extern "C" fn terraced_seq_save(
    seq: *const TerracedSeq,
    path: *const c_char,
) -> TerracedStatus {
    guarded(|| {
        let Some(handle) = (unsafe { seq_ref(seq) }) else {
            return TerracedStatus::NullPointer;
        };
        if path.is_null() {
            return TerracedStatus::NullPointer;
        }
        let path = match unsafe { CStr::from_ptr(path) }.to_str() {
            Ok(p) => p,
            Err(_) => return TerracedStatus::InvalidArgument,
        };
        match save_sequence(&handle.spec, path) {
            Ok(()) => TerracedStatus::Ok,
            Err(e) => status_of(&e),
        }
    })
}

/// Releases a sequence handle. Passing NULL is a no-op.
///
/// # Safety
/// `seq` must be a pointer previously returned by one of the constructors
/// and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn terraced_seq_free(seq: *mut TerracedSeq) {
    if !seq.is_null() {
        drop(unsafe { Box::from_raw(seq) });
    }
}

/// Evaluates `alpha_k`.
#[no_mangle]
pub extern "C" fn terraced_seq_eval(
    seq: *const TerracedSeq,
    k: u64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> TerracedStatus {
    guarded(|| {
        let Some(handle) = (unsafe { seq_ref(seq) }) else {
            return TerracedStatus::NullPointer;
        };
        if out_re.is_null() || out_im.is_null() {
            return TerracedStatus::NullPointer;
        }
        let v = handle.spec.eval(k);
        unsafe {
            *out_re = v.re;
            *out_im = v.im;
        }
        TerracedStatus::Ok
    })
}

/// Certified enclosure of `sum_{k >= m} |alpha_k|^2`. `out_hi` may be
/// infinity when no finite certificate exists.
#[no_mangle]
pub extern "C" fn terraced_seq_tail_energy(
    seq: *const TerracedSeq,
    m: u64,
    out_lo: *mut f64,
    out_hi: *mut f64,
) -> TerracedStatus {
    guarded(|| {
        let Some(handle) = (unsafe { seq_ref(seq) }) else {
            return TerracedStatus::NullPointer;
        };
        if out_lo.is_null() || out_hi.is_null() {
            return TerracedStatus::NullPointer;
        }
        match handle.spec.tail_energy(m) {
            Ok(b) => {
                unsafe {
                    *out_lo = b.lo();
                    *out_hi = b.hi();
                }
                TerracedStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Certified operator-norm bracket and boundedness verdict. `trunc_n` is
/// the section size used for the lower route (0 picks the default 2048).
#[no_mangle]
pub extern "C" fn terraced_norm_bracket(
    seq: *const TerracedSeq,
    trunc_n: usize,
    out_lo: *mut f64,
    out_hi: *mut f64,
    out_bounded: *mut TerracedVerdict,
) -> TerracedStatus {
    guarded(|| {
        let Some(handle) = (unsafe { seq_ref(seq) }) else {
            return TerracedStatus::NullPointer;
        };
        if out_lo.is_null() || out_hi.is_null() || out_bounded.is_null() {
            return TerracedStatus::NullPointer;
        }
        let params = CriteriaParams {
            trunc_n: if trunc_n == 0 { 2048 } else { trunc_n },
            ..Default::default()
        };
        let (bracket, verdict) = criteria::norm_bracket(&handle.spec, &params);
        unsafe {
            *out_lo = bracket.lo();
            *out_hi = bracket.hi();
            *out_bounded = verdict_of(verdict);
        }
        TerracedStatus::Ok
    })
}

/// Certified essential-norm bracket and compactness verdict. Fails with
/// `Divergent` when the sequence is certified unbounded.
#[no_mangle]
pub extern "C" fn terraced_essential_norm_bracket(
    seq: *const TerracedSeq,
    out_lo: *mut f64,
    out_hi: *mut f64,
    out_compact: *mut TerracedVerdict,
) -> TerracedStatus {
    guarded(|| {
        let Some(handle) = (unsafe { seq_ref(seq) }) else {
            return TerracedStatus::NullPointer;
        };
        if out_lo.is_null() || out_hi.is_null() || out_compact.is_null() {
            return TerracedStatus::NullPointer;
        }
        match criteria::essential_norm_bracket(&handle.spec, &CriteriaParams::default()) {
            Ok((bracket, compact)) => {
                unsafe {
                    *out_lo = bracket.lo();
                    *out_hi = bracket.hi();
                    *out_compact = verdict_of(compact);
                }
                TerracedStatus::Ok
            }
            Err(_) => TerracedStatus::Divergent,
        }
    })
}

/// Schatten-class test for `1 < q < inf` with dyadic blocks up to `k_max`.
#[no_mangle]
pub extern "C" fn terraced_schatten_test(
    seq: *const TerracedSeq,
    q: f64,
    k_max: u32,
    out_verdict: *mut TerracedVerdict,
    out_lo: *mut f64,
    out_hi: *mut f64,
) -> TerracedStatus {
    guarded(|| {
        let Some(handle) = (unsafe { seq_ref(seq) }) else {
            return TerracedStatus::NullPointer;
        };
        if out_verdict.is_null() || out_lo.is_null() || out_hi.is_null() {
            return TerracedStatus::NullPointer;
        }
        match criteria::schatten_test(&handle.spec, q, k_max) {
            Ok((verdict, bracket)) => {
                unsafe {
                    *out_verdict = verdict_of(verdict);
                    *out_lo = bracket.lo();
                    *out_hi = bracket.hi();
                }
                TerracedStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Interval functionals `mu`, `L`, `K`, `J` on `[a, b]`.
#[no_mangle]
pub extern "C" fn terraced_interval_report(
    seq: *const TerracedSeq,
    a: u64,
    b: u64,
    out: *mut TerracedIntervalReport,
) -> TerracedStatus {
    guarded(|| {
        let Some(handle) = (unsafe { seq_ref(seq) }) else {
            return TerracedStatus::NullPointer;
        };
        if out.is_null() {
            return TerracedStatus::NullPointer;
        }
        let iv = match NaturalInterval::new(a, b) {
            Ok(iv) => iv,
            Err(e) => return status_of(&e),
        };
        let report = interval::interval_report(&handle.spec, iv);
        unsafe {
            *out = TerracedIntervalReport {
                a,
                b,
                mu: report.mu,
                l: report.l,
                k: report.k,
                j: report.j,
                argmin_c: report.argmin_c,
            };
        }
        TerracedStatus::Ok
    })
}

/// Builds the cut sequence for threshold `epsilon`, scanning up to `cap`.
#[no_mangle]
pub extern "C" fn terraced_epsl_build(
    seq: *const TerracedSeq,
    epsilon: f64,
    cap: u64,
    out: *mut *mut TerracedEpsl,
) -> TerracedStatus {
    guarded(|| {
        let Some(handle) = (unsafe { seq_ref(seq) }) else {
            return TerracedStatus::NullPointer;
        };
        if out.is_null() {
            return TerracedStatus::NullPointer;
        }
        match epsl::build_eps_l(&handle.spec, epsilon, cap) {
            Ok(seq) => {
                unsafe {
                    *out = Box::into_raw(Box::new(TerracedEpsl { seq }));
                }
                TerracedStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Number of cut points stored (including the leading 0).
#[no_mangle]
pub extern "C" fn terraced_epsl_len(epsl: *const TerracedEpsl, out: *mut usize) -> TerracedStatus {
    guarded(|| {
        let Some(handle) = (unsafe { epsl.as_ref() }) else {
            return TerracedStatus::NullPointer;
        };
        if out.is_null() {
            return TerracedStatus::NullPointer;
        }
        unsafe {
            *out = handle.seq.cuts.len();
        }
        TerracedStatus::Ok
    })
}

/// The `i`-th cut point.
#[no_mangle]
pub extern "C" fn terraced_epsl_cut(
    epsl: *const TerracedEpsl,
    i: usize,
    out: *mut u64,
) -> TerracedStatus {
    guarded(|| {
        let Some(handle) = (unsafe { epsl.as_ref() }) else {
            return TerracedStatus::NullPointer;
        };
        if out.is_null() {
            return TerracedStatus::NullPointer;
        }
        match handle.seq.cuts.get(i) {
            Some(c) => {
                unsafe {
                    *out = *c;
                }
                TerracedStatus::Ok
            }
            None => TerracedStatus::InvalidArgument,
        }
    })
}

/// Status kind plus the certified length (for `Finite` this is the proven
/// final length; otherwise the number of cuts found so far).
#[no_mangle]
pub extern "C" fn terraced_epsl_status(
    epsl: *const TerracedEpsl,
    out_kind: *mut TerracedEpslStatusKind,
    out_length: *mut usize,
) -> TerracedStatus {
    guarded(|| {
        let Some(handle) = (unsafe { epsl.as_ref() }) else {
            return TerracedStatus::NullPointer;
        };
        if out_kind.is_null() || out_length.is_null() {
            return TerracedStatus::NullPointer;
        }
        let (kind, length) = match handle.seq.status {
            EpsLStatus::Finite { length } => (TerracedEpslStatusKind::Finite, length),
            EpsLStatus::InfiniteDetected => (
                TerracedEpslStatusKind::InfiniteDetected,
                handle.seq.certified_length(),
            ),
            EpsLStatus::Undetermined => (
                TerracedEpslStatusKind::Undetermined,
                handle.seq.certified_length(),
            ),
        };
        unsafe {
            *out_kind = kind;
            *out_length = length;
        }
        TerracedStatus::Ok
    })
}

/// Releases a cut-sequence handle. Passing NULL is a no-op.
///
/// # Safety
/// `epsl` must be a pointer previously returned by [`terraced_epsl_build`]
/// and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn terraced_epsl_free(epsl: *mut TerracedEpsl) {
    if !epsl.is_null() {
        drop(unsafe { Box::from_raw(epsl) });
    }
}

/// Renders the full JSON criteria report for a sequence; release the
/// returned string with [`terraced_string_free`].
#[no_mangle]
pub extern "C" fn terraced_analyze_json(
    seq: *const TerracedSeq,
    out: *mut *mut c_char,
) -> TerracedStatus {
    guarded(|| {
        let Some(handle) = (unsafe { seq_ref(seq) }) else {
            return TerracedStatus::NullPointer;
        };
        if out.is_null() {
            return TerracedStatus::NullPointer;
        }
        match criteria::criteria_report(&handle.spec, &CriteriaParams::default()) {
            Ok(report) => {
                let text = report.to_json().render();
                match CString::new(text) {
                    Ok(cs) => {
                        unsafe {
                            *out = cs.into_raw();
                        }
                        TerracedStatus::Ok
                    }
                    Err(_) => TerracedStatus::Internal,
                }
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Releases a string returned by this library. Passing NULL is a no-op.
///
/// # Safety
/// `s` must be a pointer previously returned by [`terraced_analyze_json`]
/// and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn terraced_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cesaro_handle_round_trip() {
        let mut seq: *mut TerracedSeq = std::ptr::null_mut();
        assert_eq!(terraced_seq_cesaro(&mut seq), TerracedStatus::Ok);
        let (mut re, mut im) = (0.0f64, 0.0f64);
        assert_eq!(
            terraced_seq_eval(seq, 3, &mut re, &mut im),
            TerracedStatus::Ok
        );
        assert_eq!((re, im), (0.25, 0.0));
        unsafe { terraced_seq_free(seq) };
    }

    #[test]
    fn null_arguments_are_rejected() {
        assert_eq!(
            terraced_seq_cesaro(std::ptr::null_mut()),
            TerracedStatus::NullPointer
        );
        let mut re = 0.0;
        let mut im = 0.0;
        assert_eq!(
            terraced_seq_eval(std::ptr::null(), 0, &mut re, &mut im),
            TerracedStatus::NullPointer
        );
    }

    #[test]
    fn invalid_family_parameters() {
        let mut seq: *mut TerracedSeq = std::ptr::null_mut();
        assert_eq!(
            terraced_seq_power(-1.0, 1.0, &mut seq),
            TerracedStatus::InvalidArgument
        );
        let w_re = [1.0f64];
        let w_im = [0.0f64];
        let nodes = [1.5f64];
        assert_eq!(
            terraced_seq_moments(w_re.as_ptr(), w_im.as_ptr(), nodes.as_ptr(), 1, &mut seq),
            TerracedStatus::InvalidArgument
        );
    }

    #[test]
    fn tail_energy_divergence_code() {
        let mut seq: *mut TerracedSeq = std::ptr::null_mut();
        assert_eq!(terraced_seq_power(0.4, 1.0, &mut seq), TerracedStatus::Ok);
        let (mut lo, mut hi) = (0.0f64, 0.0f64);
        assert_eq!(
            terraced_seq_tail_energy(seq, 0, &mut lo, &mut hi),
            TerracedStatus::Divergent
        );
        unsafe { terraced_seq_free(seq) };
    }
}
