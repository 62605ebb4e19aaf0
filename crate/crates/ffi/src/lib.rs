//! C bindings for the graphic-gorenstein classifier.
//!
//! Graphs live behind an opaque [`GgGraph`] handle. Every fallible call
//! returns a [`GgStatus`]; on failure [`gg_last_error`] describes the cause.
//! Strings handed out by the library are NUL-terminated UTF-8 and must be
//! released with [`gg_string_free`]. Reports are the same JSON documents the
//! command-line tool prints.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use graphic_gorenstein::base::Status;
use graphic_gorenstein::construct::{replay, ConstructionCert};
use graphic_gorenstein::graph::parse_graph;
use graphic_gorenstein::oracle::PolytopeKind;
use graphic_gorenstein::report::{self, OracleOptions};
use graphic_gorenstein::{Error, Multigraph};

/// Opaque graph handle.
pub struct GgGraph {
    graph: Multigraph,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GgStatus {
    Ok = 0,
    ParseError = 1,
    GuardExceeded = 2,
    /// The instance is not Gorenstein, so no certificate exists.
    NotGorenstein = 3,
    Precondition = 4,
    NullArgument = 5,
    InvalidUtf8 = 6,
    Internal = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GgKind {
    Base = 0,
    Indep = 1,
}

impl From<GgKind> for PolytopeKind {
    fn from(k: GgKind) -> Self {
        match k {
            GgKind::Base => PolytopeKind::Base,
            GgKind::Indep => PolytopeKind::Independence,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> GgStatus {
    match e {
        Error::Parse { .. } | Error::UnknownVertex(_) | Error::Certificate(_) => GgStatus::ParseError,
        Error::GuardExceeded { .. } | Error::Overflow(_) => GgStatus::GuardExceeded,
        Error::Inconsistency(_) => GgStatus::Internal,
        _ => GgStatus::Precondition,
    }
}

/// Runs `f`, mapping library errors and panics to a status.
fn guarded(f: impl FnOnce() -> Result<GgStatus, (GgStatus, String)>) -> GgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err((s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            GgStatus::Internal
        }
    }
}

fn lib<T>(r: graphic_gorenstein::Result<T>) -> Result<T, (GgStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, (GgStatus, String)> {
    if s.is_null() {
        return Err((GgStatus::NullArgument, "null string argument".into()));
    }
    CStr::from_ptr(s).to_str().map_err(|e| (GgStatus::InvalidUtf8, e.to_string()))
}

unsafe fn graph<'a>(g: *const GgGraph) -> Result<&'a Multigraph, (GgStatus, String)> {
    g.as_ref().map(|h| &h.graph).ok_or((GgStatus::NullArgument, "null graph handle".into()))
}

unsafe fn hand_out(out: *mut *mut c_char, s: String) -> Result<(), (GgStatus, String)> {
    if out.is_null() {
        return Err((GgStatus::NullArgument, "null output pointer".into()));
    }
    let c = CString::new(s).map_err(|e| (GgStatus::Internal, e.to_string()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn hand_out_graph(out: *mut *mut GgGraph, g: Multigraph) -> Result<(), (GgStatus, String)> {
    if out.is_null() {
        return Err((GgStatus::NullArgument, "null output pointer".into()));
    }
    *out = Box::into_raw(Box::new(GgGraph { graph: g }));
    Ok(())
}

/// Parses an edge list ("u v" or "u v m" per line, '#' comments).
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gg_graph_parse(text: *const c_char, out: *mut *mut GgGraph) -> GgStatus {
    guarded(|| {
        let g = lib(parse_graph(self::text(text)?))?;
        hand_out_graph(out, g)?;
        Ok(GgStatus::Ok)
    })
}

/// Releases a graph; null is ignored.
///
/// # Safety
/// `g` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gg_graph_free(g: *mut GgGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Vertex count, or 0 for null.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gg_graph_vertex_count(g: *const GgGraph) -> usize {
    g.as_ref().map_or(0, |h| h.graph.vertex_count())
}

/// Edge count (parallel edges counted), or 0 for null.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gg_graph_edge_count(g: *const GgGraph) -> usize {
    g.as_ref().map_or(0, |h| h.graph.edge_count())
}

/// The graph in edge-list format.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gg_graph_to_edge_list(g: *const GgGraph, out: *mut *mut c_char) -> GgStatus {
    guarded(|| {
        hand_out(out, graph(g)?.to_edge_list())?;
        Ok(GgStatus::Ok)
    })
}

/// Combinatorial verdict. `delta_out` (may be null) receives `δ`, 0 when
/// every `δ` works, or -1 when not Gorenstein. `json_out` (may be null)
/// receives the full report.
///
/// # Safety
/// `g` must be a live handle; output pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn gg_check(g: *const GgGraph, kind: GgKind, delta_out: *mut i32, json_out: *mut *mut c_char) -> GgStatus {
    guarded(|| {
        let r = lib(report::check(graph(g)?, kind.into(), None, None))?;
        if !delta_out.is_null() {
            *delta_out = match (r.status, r.delta) {
                (Status::NotGorenstein, _) => -1,
                (Status::Gorenstein, None) => 0,
                (Status::Gorenstein, Some(d)) => d as i32,
            };
        }
        if !json_out.is_null() {
            hand_out(json_out, r.to_json())?;
        }
        Ok(GgStatus::Ok)
    })
}

/// Verdict from the lattice polytope. `node_guard` bounds lattice point
/// enumeration (0 picks the default); `hstar` non-zero adds the
/// h*-vector.
///
/// # Safety
/// `g` must be a live handle and `json_out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gg_oracle(
    g: *const GgGraph,
    kind: GgKind,
    hstar: i32,
    node_guard: u64,
    json_out: *mut *mut c_char,
) -> GgStatus {
    guarded(|| {
        let mut opts = OracleOptions { hstar: hstar != 0, ..Default::default() };
        if node_guard > 0 {
            opts.node_guard = node_guard;
        }
        let r = lib(report::oracle(graph(g)?, kind.into(), &opts, None))?;
        hand_out(json_out, r.to_json())?;
        Ok(GgStatus::Ok)
    })
}

/// Certificates for a positive instance. For a negative one the report
/// (with its witness) is still written and the status is
/// `GG_STATUS_NOT_GORENSTEIN`.
///
/// # Safety
/// `g` must be a live handle and `json_out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gg_certify(g: *const GgGraph, kind: GgKind, json_out: *mut *mut c_char) -> GgStatus {
    guarded(|| {
        let r = lib(report::certify(graph(g)?, kind.into(), None))?;
        hand_out(json_out, r.to_json())?;
        Ok(if r.status == Status::Gorenstein { GgStatus::Ok } else { GgStatus::NotGorenstein })
    })
}

/// Replays a certificate given as JSON into a new graph.
///
/// # Safety
/// `cert_json` must be a valid NUL-terminated string and `out` a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn gg_replay(cert_json: *const c_char, out: *mut *mut GgGraph) -> GgStatus {
    guarded(|| {
        let cert = lib(ConstructionCert::from_json(text(cert_json)?))?;
        let g = lib(replay(&cert))?;
        hand_out_graph(out, g)?;
        Ok(GgStatus::Ok)
    })
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failure on this thread; empty if none. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn gg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
