//! C interface to the pathrdf engine.
//!
//! Handles are opaque pointers owned by the caller and released with the
//! matching `_free` function. Fallible calls return a status code and write
//! their result through an out pointer; `pathrdf_last_error` describes the
//! most recent failure on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pathrdf::closure::{closure, ClosureConfig};
use pathrdf::ntriples::{parse_ntriples_with, write_ntriples};
use pathrdf::query::parse_query;
use pathrdf::rewrite::{rewrite_query, RewriteMode};
use pathrdf::{answer, render_rows, EntailmentMode, Error, Graph, Prefixes};

pub const PATHRDF_OK: i32 = 0;
pub const PATHRDF_ERR_NULL: i32 = 1;
pub const PATHRDF_ERR_UTF8: i32 = 2;
pub const PATHRDF_ERR_SYNTAX: i32 = 3;
pub const PATHRDF_ERR_DIALECT: i32 = 4;
pub const PATHRDF_ERR_INVALID_QUERY: i32 = 5;
pub const PATHRDF_ERR_UNKNOWN_GRAPH: i32 = 6;
pub const PATHRDF_ERR_TRIPLE_CAP: i32 = 7;
pub const PATHRDF_ERR_CONFIG: i32 = 8;
pub const PATHRDF_ERR_GRAPH: i32 = 9;
pub const PATHRDF_ERR_TOO_LARGE: i32 = 10;
pub const PATHRDF_ERR_PANIC: i32 = 11;

/// A parsed graph and the prefixes used to print its terms.
pub struct PathrdfGraph {
    graph: Graph,
    prefixes: Prefixes,
}

/// Query answers as a table of rendered terms.
pub struct PathrdfResult {
    vars: Vec<CString>,
    rows: Vec<Vec<Option<CString>>>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(err: &Error) -> i32 {
    match err {
        Error::Syntax { .. } => PATHRDF_ERR_SYNTAX,
        Error::Dialect(_) => PATHRDF_ERR_DIALECT,
        Error::TripleCap { .. } => PATHRDF_ERR_TRIPLE_CAP,
        Error::UnknownGraph(_) => PATHRDF_ERR_UNKNOWN_GRAPH,
        Error::InvalidQuery(_) => PATHRDF_ERR_INVALID_QUERY,
        Error::InvalidConfig(_) => PATHRDF_ERR_CONFIG,
        Error::InvalidGraph(_) => PATHRDF_ERR_GRAPH,
        Error::TooLarge(_) => PATHRDF_ERR_TOO_LARGE,
    }
}

struct Failure(i32, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

/// Runs `f`, records any failure and converts it into a status code.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            PATHRDF_OK
        }
        Ok(Err(Failure(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic".into());
            PATHRDF_ERR_PANIC
        }
    }
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(PATHRDF_ERR_NULL, format!("{what} is NULL")));
    }
    // SAFETY: caller passes a NUL-terminated string that outlives the call.
    unsafe { CStr::from_ptr(p) }
        .to_str()
        .map_err(|_| Failure(PATHRDF_ERR_UTF8, format!("{what} is not UTF-8")))
}

fn check_out<T>(out: *mut *mut T) -> Result<(), Failure> {
    if out.is_null() {
        Err(Failure(PATHRDF_ERR_NULL, "output pointer is NULL".into()))
    } else {
        Ok(())
    }
}

fn c_string(s: String) -> CString {
    CString::new(s.replace('\0', " ")).unwrap_or_default()
}

/// Parses N-Triples text into a new graph.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn pathrdf_graph_parse(text: *const c_char, out: *mut *mut PathrdfGraph) -> i32 {
    guard(|| {
        check_out(out)?;
        let src = unsafe { c_str(text, "graph text") }?;
        let mut prefixes = Prefixes::default();
        let graph = parse_ntriples_with(src, &mut prefixes)?;
        let handle = Box::into_raw(Box::new(PathrdfGraph { graph, prefixes }));
        // SAFETY: checked non-null above.
        unsafe { *out = handle };
        Ok(())
    })
}

/// # Safety
/// `g` must be NULL or a graph from this library that is not used again.
#[no_mangle]
pub unsafe extern "C" fn pathrdf_graph_free(g: *mut PathrdfGraph) {
    if !g.is_null() {
        // SAFETY: ownership returns from the caller.
        drop(unsafe { Box::from_raw(g) });
    }
}

/// Number of triples, or 0 for NULL.
///
/// # Safety
/// `g` must be NULL or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn pathrdf_graph_len(g: *const PathrdfGraph) -> usize {
    // SAFETY: caller guarantees a live handle or NULL.
    unsafe { g.as_ref() }.map_or(0, |g| g.graph.len())
}

/// Saturates `g` into a new graph.
///
/// # Safety
/// `g` must be a live graph handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn pathrdf_graph_closure(
    g: *const PathrdfGraph,
    reflexive: bool,
    extended: bool,
    out: *mut *mut PathrdfGraph,
) -> i32 {
    guard(|| {
        check_out(out)?;
        // SAFETY: caller guarantees a live handle or NULL.
        let g = unsafe { g.as_ref() }.ok_or_else(|| Failure(PATHRDF_ERR_NULL, "graph is NULL".into()))?;
        let cfg = ClosureConfig {
            reflexive,
            extended,
            ..ClosureConfig::default()
        };
        let closed = PathrdfGraph {
            graph: closure(&g.graph, &cfg)?,
            prefixes: g.prefixes.clone(),
        };
        // SAFETY: checked non-null above.
        unsafe { *out = Box::into_raw(Box::new(closed)) };
        Ok(())
    })
}

/// The graph as N-Triples text, freed with `pathrdf_string_free`. NULL if
/// `g` is NULL.
///
/// # Safety
/// `g` must be NULL or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn pathrdf_graph_to_ntriples(g: *const PathrdfGraph) -> *mut c_char {
    // SAFETY: caller guarantees a live handle or NULL.
    match unsafe { g.as_ref() } {
        Some(g) => c_string(write_ntriples(&g.graph, &g.prefixes)).into_raw(),
        None => ptr::null_mut(),
    }
}

/// Evaluates `query` over `g` under `semantics` (`simple`, `rdfs-closure`,
/// `rdfs-psparql`, `rdfs-nsparql` or `rdfs-cpsparql`; NULL means simple).
///
/// # Safety
/// `g` must be a live graph handle, the strings NUL-terminated and `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn pathrdf_query(
    g: *const PathrdfGraph,
    query: *const c_char,
    semantics: *const c_char,
    out: *mut *mut PathrdfResult,
) -> i32 {
    guard(|| {
        check_out(out)?;
        // SAFETY: caller guarantees a live handle or NULL.
        let g = unsafe { g.as_ref() }.ok_or_else(|| Failure(PATHRDF_ERR_NULL, "graph is NULL".into()))?;
        let q = parse_query(unsafe { c_str(query, "query") }?)?;
        let mode: EntailmentMode = if semantics.is_null() {
            EntailmentMode::Simple
        } else {
            unsafe { c_str(semantics, "semantics") }?.parse()?
        };
        let mut prefixes = g.prefixes.clone();
        for (p, iri) in q.prefixes.entries() {
            prefixes.insert(p, iri);
        }
        let answers = answer(&q, &g.graph, mode)?;
        let vars = q.projection();
        let rows = render_rows(&answers, &vars, &prefixes)
            .into_iter()
            .map(|r| r.into_iter().map(|c| c.map(c_string)).collect())
            .collect();
        let result = PathrdfResult {
            vars: vars.iter().map(|v| c_string(v.to_string())).collect(),
            rows,
        };
        // SAFETY: checked non-null above.
        unsafe { *out = Box::into_raw(Box::new(result)) };
        Ok(())
    })
}

/// # Safety
/// `r` must be NULL or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn pathrdf_result_rows(r: *const PathrdfResult) -> usize {
    // SAFETY: caller guarantees a live handle or NULL.
    unsafe { r.as_ref() }.map_or(0, |r| r.rows.len())
}

/// # Safety
/// `r` must be NULL or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn pathrdf_result_cols(r: *const PathrdfResult) -> usize {
    // SAFETY: caller guarantees a live handle or NULL.
    unsafe { r.as_ref() }.map_or(0, |r| r.vars.len())
}

/// Name of column `col` without the `?`, owned by the result. NULL when out
/// of range.
///
/// # Safety
/// `r` must be NULL or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn pathrdf_result_var(r: *const PathrdfResult, col: usize) -> *const c_char {
    // SAFETY: caller guarantees a live handle or NULL.
    unsafe { r.as_ref() }
        .and_then(|r| r.vars.get(col))
        .map_or(ptr::null(), |v| v.as_ptr())
}

/// Cell text owned by the result; NULL for an unbound variable or an index
/// out of range.
///
/// # Safety
/// `r` must be NULL or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn pathrdf_result_cell(r: *const PathrdfResult, row: usize, col: usize) -> *const c_char {
    // SAFETY: caller guarantees a live handle or NULL.
    unsafe { r.as_ref() }
        .and_then(|r| r.rows.get(row))
        .and_then(|cells| cells.get(col))
        .and_then(|c| c.as_ref())
        .map_or(ptr::null(), |c| c.as_ptr())
}

/// Header line plus one tab-separated line per row, unbound cells empty.
/// Freed with `pathrdf_string_free`.
///
/// # Safety
/// `r` must be NULL or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn pathrdf_result_to_tsv(r: *const PathrdfResult) -> *mut c_char {
    // SAFETY: caller guarantees a live handle or NULL.
    let Some(r) = (unsafe { r.as_ref() }) else {
        return ptr::null_mut();
    };
    let mut out = String::new();
    let header: Vec<String> = r.vars.iter().map(|v| format!("?{}", v.to_string_lossy())).collect();
    out.push_str(&header.join("\t"));
    out.push('\n');
    for row in &r.rows {
        let cells: Vec<String> = row
            .iter()
            .map(|c| c.as_ref().map(|c| c.to_string_lossy().into_owned()).unwrap_or_default())
            .collect();
        out.push_str(&cells.join("\t"));
        out.push('\n');
    }
    c_string(out).into_raw()
}

/// # Safety
/// `r` must be NULL or a result handle that is not used again.
#[no_mangle]
pub unsafe extern "C" fn pathrdf_result_free(r: *mut PathrdfResult) {
    if !r.is_null() {
        // SAFETY: ownership returns from the caller.
        drop(unsafe { Box::from_raw(r) });
    }
}

/// Rewrites a SPARQL query with `mode` (`psparql-tau`, `nsparql-phi` or
/// `cpsparql-tau`) and returns the query text through `out`.
///
/// # Safety
/// The strings must be NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pathrdf_rewrite(query: *const c_char, mode: *const c_char, out: *mut *mut c_char) -> i32 {
    guard(|| {
        check_out(out)?;
        let q = parse_query(unsafe { c_str(query, "query") }?)?;
        let mode: RewriteMode = unsafe { c_str(mode, "mode") }?.parse()?;
        let rewritten = rewrite_query(&q, mode)?.render();
        // SAFETY: checked non-null above.
        unsafe { *out = c_string(rewritten).into_raw() };
        Ok(())
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pathrdf_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: the string came from CString::into_raw.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Message of the last failed call on this thread, or NULL after a
/// success. Valid until the next call into the library.
#[no_mangle]
pub extern "C" fn pathrdf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |m| m.as_ptr()))
}
