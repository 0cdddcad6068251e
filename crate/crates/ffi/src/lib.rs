//! C interface to `et0l-core`.
//!
//! Objects are opaque handles created by `*_parse` or conversion functions
//! and released with the matching `*_free`. Every fallible function returns
//! an [`Et0lStatus`]; on failure [`et0l_last_error`] describes the problem.
//! Strings returned through `char **` out-parameters are owned by the caller
//! and released with [`et0l_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use et0l_core::coword::{build_coword_machine, crosscheck_oracle, CowordOptions};
use et0l_core::cspd::{normalize, Caps, CspdMachine};
use et0l_core::equivalence::{cross_check, cspd_to_grammar, grammar_to_cspd, CrossCheckOptions};
use et0l_core::et0l::{reduce_extended, Bounds, Et0lGrammar, Membership};
use et0l_core::trees::Group;
use et0l_core::{io, Error};

/// Result of a call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Et0lStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Schema = 3,
    Alphabet = 4,
    MalformedRegex = 5,
    Configuration = 6,
    NotNormalized = 7,
    Classification = 8,
    Symmetry = 9,
    Permutation = 10,
    Unsupported = 11,
    Io = 12,
    Internal = 13,
}

/// A parsed ET0L grammar.
pub struct Et0lGrammarHandle(Et0lGrammar);
/// A check-stack pushdown machine.
pub struct Et0lMachineHandle(CspdMachine);
/// A group of tree automorphisms given by a Σ-automaton.
pub struct Et0lGroupHandle(Group);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> Et0lStatus {
    match e {
        Error::Schema { .. } | Error::UnknownTable(_) | Error::Composition { .. } => Et0lStatus::Schema,
        Error::Alphabet(_) | Error::IncompleteSubstitution(_) => Et0lStatus::Alphabet,
        Error::MalformedRegex(_) => Et0lStatus::MalformedRegex,
        Error::Configuration(_) | Error::CheckStackRejected(_) => Et0lStatus::Configuration,
        Error::NotNormalized(_) => Et0lStatus::NotNormalized,
        Error::Classification { .. } => Et0lStatus::Classification,
        Error::Symmetry(_) => Et0lStatus::Symmetry,
        Error::Permutation(_) => Et0lStatus::Permutation,
        Error::Unsupported(_) => Et0lStatus::Unsupported,
        Error::Io(_) => Et0lStatus::Io,
    }
}

struct Fail(Et0lStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

/// Runs `f`, turning errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> Et0lStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            Et0lStatus::Ok
        }
        Ok(Err(Fail(s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            Et0lStatus::Internal
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(Et0lStatus::NullArgument, "null string argument".into()));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(Et0lStatus::InvalidUtf8, "string is not UTF-8".into()))
}

unsafe fn get<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref()
        .ok_or_else(|| Fail(Et0lStatus::NullArgument, "null handle".into()))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(Et0lStatus::NullArgument, "null output pointer".into()));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|_| Fail(Et0lStatus::Internal, "string holds NUL".into()))?;
    put(out, c.into_raw())
}

unsafe fn put_handle<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(Et0lStatus::NullArgument, "null output pointer".into()));
    }
    out.write(Box::into_raw(Box::new(value)));
    Ok(())
}

fn json(v: &impl serde::Serialize) -> String {
    serde_json::to_string(v).expect("serializable")
}

fn caps(slack: c_int) -> Caps {
    Caps {
        slack: usize::try_from(slack).ok(),
        ..Caps::default()
    }
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn et0l_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn et0l_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// ---- grammars ----

/// Parses a grammar from its JSON text.
///
/// # Safety
/// `json_text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn et0l_grammar_parse(json_text: *const c_char, out: *mut *mut Et0lGrammarHandle) -> Et0lStatus {
    guard(|| put_handle(out, Et0lGrammarHandle(io::parse_grammar(text(json_text)?)?)))
}

/// # Safety
/// `g` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn et0l_grammar_free(g: *mut Et0lGrammarHandle) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// The grammar as JSON text.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn et0l_grammar_serialize(g: *const Et0lGrammarHandle, out: *mut *mut c_char) -> Et0lStatus {
    guard(|| put_string(out, io::serialize_grammar(&get(g)?.0)?))
}

/// Terminal words of length at most `max_word`, as a JSON object
/// `{"words": [...], "pruned": bool}` with words in shortlex order.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn et0l_grammar_enumerate(
    g: *const Et0lGrammarHandle,
    max_word: usize,
    max_control: usize,
    out: *mut *mut c_char,
) -> Et0lStatus {
    guard(|| {
        let g = &get(g)?.0;
        let bounds = Bounds {
            max_control,
            ..Bounds::default()
        };
        let sample = g.enumerate_language(max_word, bounds);
        let mut words: Vec<&Vec<u32>> = sample.words.iter().collect();
        words.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        let words: Vec<String> = words.iter().map(|w| g.render(w)).collect();
        put_string(out, json(&serde_json::json!({ "words": words, "pruned": sample.pruned })))
    })
}

/// Membership of `word`: writes 1 (derivable), 0 (not within the bound)
/// or -1 (search budget exhausted).
///
/// # Safety
/// `g` must be a live handle, `word` a NUL-terminated string and
/// `verdict` writable.
#[no_mangle]
pub unsafe extern "C" fn et0l_grammar_contains(
    g: *const Et0lGrammarHandle,
    word: *const c_char,
    max_control: usize,
    verdict: *mut c_int,
) -> Et0lStatus {
    guard(|| {
        let g = &get(g)?.0;
        let w = g.word(text(word)?)?;
        let bounds = Bounds {
            max_control,
            ..Bounds::default()
        };
        let v = match g.contains(&w, bounds)? {
            Membership::Yes { .. } => 1,
            Membership::NoWithinBounds => 0,
            Membership::Unknown => -1,
        };
        put(verdict, v)
    })
}

/// A machine accepting the grammar's language.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn et0l_grammar_to_machine(g: *const Et0lGrammarHandle, out: *mut *mut Et0lMachineHandle) -> Et0lStatus {
    guard(|| put_handle(out, Et0lMachineHandle(grammar_to_cspd(&get(g)?.0)?)))
}

// ---- machines ----

/// Parses a machine from its JSON text.
///
/// # Safety
/// `json_text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn et0l_machine_parse(json_text: *const c_char, out: *mut *mut Et0lMachineHandle) -> Et0lStatus {
    guard(|| put_handle(out, Et0lMachineHandle(io::parse_machine(text(json_text)?)?)))
}

/// # Safety
/// `m` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn et0l_machine_free(m: *mut Et0lMachineHandle) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// The machine as JSON text.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn et0l_machine_serialize(m: *const Et0lMachineHandle, out: *mut *mut c_char) -> Et0lStatus {
    guard(|| put_string(out, io::serialize_machine(&get(m)?.0)))
}

/// Acceptance of `word` for some check-stack of length at most `max_cs`.
/// A negative `slack` uses the default height allowance.
///
/// # Safety
/// `m` must be a live handle, `word` a NUL-terminated string and
/// `accepted` writable.
#[no_mangle]
pub unsafe extern "C" fn et0l_machine_accepts(
    m: *const Et0lMachineHandle,
    word: *const c_char,
    max_cs: usize,
    slack: c_int,
    accepted: *mut bool,
) -> Et0lStatus {
    guard(|| {
        let m = &get(m)?.0;
        let input = m.word(text(word)?)?;
        put(accepted, m.accepts_any(&input, max_cs, caps(slack))?.accepted)
    })
}

/// Number of structural violations.
///
/// # Safety
/// `m` must be a live handle; `count` must be writable.
#[no_mangle]
pub unsafe extern "C" fn et0l_machine_validate(m: *const Et0lMachineHandle, count: *mut usize) -> Et0lStatus {
    guard(|| put(count, get(m)?.0.validate().len()))
}

/// The machine in single-push, single-pop form.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn et0l_machine_normalize(m: *const Et0lMachineHandle, out: *mut *mut Et0lMachineHandle) -> Et0lStatus {
    guard(|| put_handle(out, Et0lMachineHandle(normalize(&get(m)?.0)?)))
}

/// A grammar for the language of a normalized machine.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn et0l_machine_to_grammar(m: *const Et0lMachineHandle, out: *mut *mut Et0lGrammarHandle) -> Et0lStatus {
    guard(|| {
        let g = reduce_extended(&cspd_to_grammar(&get(m)?.0)?)?;
        put_handle(out, Et0lGrammarHandle(g))
    })
}

/// Compares a grammar and a machine on all words up to `max_len`; writes a
/// JSON report.
///
/// # Safety
/// `g` and `m` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn et0l_crosscheck(
    g: *const Et0lGrammarHandle,
    m: *const Et0lMachineHandle,
    max_len: usize,
    max_control: usize,
    out: *mut *mut c_char,
) -> Et0lStatus {
    guard(|| {
        let mut options = CrossCheckOptions::default();
        options.bounds.max_control = max_control;
        let r = cross_check(&get(g)?.0, &get(m)?.0, max_len, options)?;
        put_string(out, json(&r))
    })
}

// ---- groups ----

/// Parses a group from its JSON text.
///
/// # Safety
/// `json_text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn et0l_group_parse(json_text: *const c_char, out: *mut *mut Et0lGroupHandle) -> Et0lStatus {
    guard(|| put_handle(out, Et0lGroupHandle(io::parse_group(text(json_text)?)?)))
}

/// # Safety
/// `g` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn et0l_group_free(g: *mut Et0lGroupHandle) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Image of `vertex` under `word` (generator names), first generator first.
///
/// # Safety
/// `g` must be a live handle, the strings NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn et0l_group_eval(
    g: *const Et0lGroupHandle,
    word: *const c_char,
    vertex: *const c_char,
    out: *mut *mut c_char,
) -> Et0lStatus {
    guard(|| {
        let g = &get(g)?.0;
        let t = g.automaton();
        let v = t.vertex(text(vertex)?)?;
        put_string(out, t.render(&t.eval_vertex(&g.word(text(word)?)?, &v)))
    })
}

/// Whether `word` acts trivially on the whole tree.
///
/// # Safety
/// `g` must be a live handle, `word` NUL-terminated and `trivial` writable.
#[no_mangle]
pub unsafe extern "C" fn et0l_group_is_trivial(g: *const Et0lGroupHandle, word: *const c_char, trivial: *mut bool) -> Et0lStatus {
    guard(|| {
        let g = &get(g)?.0;
        put(trivial, g.automaton().is_trivial(&g.word(text(word)?)?))
    })
}

/// The co-word machine of the group.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn et0l_group_coword_machine(g: *const Et0lGroupHandle, out: *mut *mut Et0lMachineHandle) -> Et0lStatus {
    guard(|| put_handle(out, Et0lMachineHandle(build_coword_machine(&get(g)?.0)?.machine)))
}

/// Compares the co-word machine with the triviality oracle on all words of
/// length at most `max_len`; writes a JSON report.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn et0l_group_coword_crosscheck(g: *const Et0lGroupHandle, max_len: usize, out: *mut *mut c_char) -> Et0lStatus {
    guard(|| {
        let g = &get(g)?.0;
        let cm = build_coword_machine(g)?;
        let options = CowordOptions {
            max_len,
            ..CowordOptions::default()
        };
        put_string(out, json(&crosscheck_oracle(g, &cm, options)?))
    })
}
