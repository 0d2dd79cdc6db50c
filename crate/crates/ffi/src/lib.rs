//! C ABI for the rcmodel toolkit.
//!
//! Objects are opaque handles created by `rc_*_new` style constructors and
//! released with the matching `rc_*_free`. Every fallible call returns an
//! `RcStatus`; on failure a message is available from
//! `rc_last_error_message` until the next failing call on the same thread.
//! Panics are caught at the boundary and reported as `RC_STATUS_PANIC`.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use rcmodel::dynamics::{replica_rng, Algorithm, ChainState, CouplingChain, TransitionKind};
use rcmodel::exact;
use rcmodel::lattice::Direction;
use rcmodel::{build_region, solve_critical_point, BoundaryCondition, Error, EventSpec, LatticeSpec, Region};

/// Result codes shared by every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidRegion = 3,
    Capacity = 4,
    NullConditioning = 5,
    NotIncreasing = 6,
    Unsatisfiable = 7,
    BufferTooSmall = 8,
    Io = 9,
    Internal = 10,
    Panic = 11,
}

/// Boundary condition selector.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RcBoundary {
    Free = 0,
    Wired = 1,
}

/// Crossing direction selector.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RcDirection {
    Horizontal = 0,
    Vertical = 1,
}

/// Update rule for rc_chain_sweep.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RcAlgorithm {
    HeatBath = 0,
    EdwardsSokal = 1,
}

/// Kind of a coupled-chain transition.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RcTransitionKind {
    Open = 0,
    CloseBoth = 1,
    ClosePi = 2,
}

/// A finite region of a lattice.
pub struct RcRegion(Arc<Region>);

/// Cluster weight and edge weights.
pub struct RcParams(RcParamsInner);
type RcParamsInner = rcmodel::RcParams;

/// An event on edge configurations.
pub struct RcEvent(EventSpec);

/// A single-configuration Markov chain.
pub struct RcChain(ChainState);

/// The pivot-edge coupled chain.
pub struct RcCoupling(CouplingChain);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> RcStatus {
    match err {
        Error::EmptyRegion { .. }
        | Error::InvalidRectangle
        | Error::Disconnected
        | Error::NoBoundedFace
        | Error::Embedding(_)
        | Error::EmptySide(_)
        | Error::SizeMismatch { .. } => RcStatus::InvalidRegion,
        Error::Capacity { .. } => RcStatus::Capacity,
        Error::NullConditioning => RcStatus::NullConditioning,
        Error::NotIncreasing => RcStatus::NotIncreasing,
        Error::Unsatisfiable => RcStatus::Unsatisfiable,
        Error::Io(_) => RcStatus::Io,
        Error::Internal(_) => RcStatus::Internal,
        _ => RcStatus::InvalidArgument,
    }
}

/// Runs `body`, converting errors and panics into status codes.
fn guard<F: FnOnce() -> Result<(), RcStatusError>>(body: F) -> RcStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => RcStatus::Ok,
        Ok(Err(RcStatusError(status, message))) => {
            set_last_error(message);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(format!("panic: {msg}"));
            RcStatus::Panic
        }
    }
}

struct RcStatusError(RcStatus, String);

impl From<Error> for RcStatusError {
    fn from(e: Error) -> Self {
        RcStatusError(status_of(&e), e.to_string())
    }
}

fn invalid(msg: impl Into<String>) -> RcStatusError {
    RcStatusError(RcStatus::InvalidArgument, msg.into())
}

unsafe fn deref<'a, T>(ptr: *const T, name: &str) -> Result<&'a T, RcStatusError> {
    ptr.as_ref().ok_or_else(|| RcStatusError(RcStatus::NullPointer, format!("{name} is null")))
}

unsafe fn deref_mut<'a, T>(ptr: *mut T, name: &str) -> Result<&'a mut T, RcStatusError> {
    ptr.as_mut().ok_or_else(|| RcStatusError(RcStatus::NullPointer, format!("{name} is null")))
}

unsafe fn out_ptr<'a, T>(ptr: *mut T, name: &str) -> Result<&'a mut T, RcStatusError> {
    deref_mut(ptr, name)
}

unsafe fn c_str<'a>(ptr: *const c_char, name: &str) -> Result<&'a str, RcStatusError> {
    if ptr.is_null() {
        return Err(RcStatusError(RcStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| invalid(format!("{name} is not valid UTF-8")))
}

unsafe fn slice<'a, T>(ptr: *const T, len: usize, name: &str) -> Result<&'a [T], RcStatusError> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(RcStatusError(RcStatus::NullPointer, format!("{name} is null")));
    }
    Ok(std::slice::from_raw_parts(ptr, len))
}

fn boundary(region: &Region, bc: RcBoundary) -> BoundaryCondition {
    match bc {
        RcBoundary::Free => BoundaryCondition::free(region),
        RcBoundary::Wired => BoundaryCondition::wired(region),
    }
}

fn into_handle<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

unsafe fn free_handle<T>(ptr: *mut T) {
    if !ptr.is_null() {
        drop(Box::from_raw(ptr));
    }
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn rc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failing call on this thread, or null if none.
/// The pointer stays valid until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn rc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Critical edge weight of a built-in or custom lattice at cluster weight `q`.
#[no_mangle]
pub unsafe extern "C" fn rc_critical_point(lattice: *const c_char, q: f64, out: *mut f64) -> RcStatus {
    guard(|| {
        let spec: LatticeSpec = c_str(lattice, "lattice")?.parse()?;
        *out_ptr(out, "out")? = solve_critical_point(&spec, q)?;
        Ok(())
    })
}

/// Cuts the rectangle [a, b] x [c, d] from a lattice ("square",
/// "triangular", "hexagonal" or "custom:<path>").
#[no_mangle]
pub unsafe extern "C" fn rc_region_new(
    lattice: *const c_char,
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    out: *mut *mut RcRegion,
) -> RcStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let spec: LatticeSpec = c_str(lattice, "lattice")?.parse()?;
        *out = into_handle(RcRegion(Arc::new(build_region(&spec, a, b, c, d)?)));
        Ok(())
    })
}

/// Builds a region from an explicit planar graph. Vertex `i` sits at
/// `(xs[i], ys[i])`; edge `e` joins `us[e]` and `vs[e]`.
#[no_mangle]
pub unsafe extern "C" fn rc_region_from_graph(
    num_vertices: usize,
    xs: *const f64,
    ys: *const f64,
    num_edges: usize,
    us: *const usize,
    vs: *const usize,
    out: *mut *mut RcRegion,
) -> RcStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let xs = slice(xs, num_vertices, "xs")?;
        let ys = slice(ys, num_vertices, "ys")?;
        let us = slice(us, num_edges, "us")?;
        let vs = slice(vs, num_edges, "vs")?;
        let vertices = xs.iter().zip(ys).map(|(&x, &y)| [x, y]).collect();
        let edges = us.iter().copied().zip(vs.iter().copied()).collect();
        *out = into_handle(RcRegion(Arc::new(Region::from_graph(vertices, edges)?)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn rc_region_free(region: *mut RcRegion) {
    free_handle(region);
}

/// Number of vertices, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn rc_region_num_vertices(region: *const RcRegion) -> usize {
    region.as_ref().map_or(0, |r| r.0.num_vertices())
}

/// Number of edges, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn rc_region_num_edges(region: *const RcRegion) -> usize {
    region.as_ref().map_or(0, |r| r.0.num_edges())
}

/// Endpoints of edge `edge`.
#[no_mangle]
pub unsafe extern "C" fn rc_region_edge(region: *const RcRegion, edge: usize, u: *mut usize, v: *mut usize) -> RcStatus {
    guard(|| {
        let region = deref(region, "region")?;
        if edge >= region.0.num_edges() {
            return Err(invalid(format!("edge {edge} out of range")));
        }
        let (a, b) = region.0.edge(edge);
        *out_ptr(u, "u")? = a;
        *out_ptr(v, "v")? = b;
        Ok(())
    })
}

/// Homogeneous edge weight `p` in [0, 1] and cluster weight `q` > 0.
#[no_mangle]
pub unsafe extern "C" fn rc_params_homogeneous(p: f64, q: f64, out: *mut *mut RcParams) -> RcStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = into_handle(RcParams(RcParamsInner::homogeneous(p, q)?));
        Ok(())
    })
}

/// Weighted mode: p_e = 1 - exp(-beta * J_e), one coupling per edge.
#[no_mangle]
pub unsafe extern "C" fn rc_params_weighted(
    beta: f64,
    couplings: *const f64,
    num_edges: usize,
    q: f64,
    out: *mut *mut RcParams,
) -> RcStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let j = slice(couplings, num_edges, "couplings")?.to_vec();
        *out = into_handle(RcParams(RcParamsInner::weighted(beta, j, q)?));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn rc_params_free(params: *mut RcParams) {
    free_handle(params);
}

/// Event from its JSON tree form.
#[no_mangle]
pub unsafe extern "C" fn rc_event_from_json(json: *const c_char, out: *mut *mut RcEvent) -> RcStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = into_handle(RcEvent(EventSpec::from_json(c_str(json, "json")?)?));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn rc_event_edge_open(edge: usize, out: *mut *mut RcEvent) -> RcStatus {
    guard(|| {
        *out_ptr(out, "out")? = into_handle(RcEvent(EventSpec::edge_open(edge)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn rc_event_connected(u: usize, v: usize, out: *mut *mut RcEvent) -> RcStatus {
    guard(|| {
        *out_ptr(out, "out")? = into_handle(RcEvent(EventSpec::connected(u, v)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn rc_event_crossing(direction: RcDirection, out: *mut *mut RcEvent) -> RcStatus {
    guard(|| {
        let dir = match direction {
            RcDirection::Horizontal => Direction::Horizontal,
            RcDirection::Vertical => Direction::Vertical,
        };
        *out_ptr(out, "out")? = into_handle(RcEvent(EventSpec::crossing(dir)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn rc_event_free(event: *mut RcEvent) {
    free_handle(event);
}

/// Partition function by exhaustive enumeration.
#[no_mangle]
pub unsafe extern "C" fn rc_partition_function(
    region: *const RcRegion,
    params: *const RcParams,
    bc: RcBoundary,
    out: *mut f64,
) -> RcStatus {
    guard(|| {
        let region = &deref(region, "region")?.0;
        let params = &deref(params, "params")?.0;
        *out_ptr(out, "out")? = exact::partition_function(region, params, &boundary(region, bc))?;
        Ok(())
    })
}

/// Exact probability of an event.
#[no_mangle]
pub unsafe extern "C" fn rc_probability(
    region: *const RcRegion,
    params: *const RcParams,
    bc: RcBoundary,
    event: *const RcEvent,
    out: *mut f64,
) -> RcStatus {
    guard(|| {
        let region = &deref(region, "region")?.0;
        let params = &deref(params, "params")?.0;
        let event = &deref(event, "event")?.0;
        *out_ptr(out, "out")? = exact::probability(event, region, params, &boundary(region, bc))?;
        Ok(())
    })
}

/// Exact derivative of an event probability in the homogeneous weight p.
#[no_mangle]
pub unsafe extern "C" fn rc_derivative_dp(
    region: *const RcRegion,
    params: *const RcParams,
    bc: RcBoundary,
    event: *const RcEvent,
    out: *mut f64,
) -> RcStatus {
    guard(|| {
        let region = &deref(region, "region")?.0;
        let params = &deref(params, "params")?.0;
        let event = &deref(event, "event")?.0;
        *out_ptr(out, "out")? = exact::derivative_dp(event, region, params, &boundary(region, bc))?;
        Ok(())
    })
}

/// Largest edge influence on an increasing event.
#[no_mangle]
pub unsafe extern "C" fn rc_max_influence(
    region: *const RcRegion,
    params: *const RcParams,
    bc: RcBoundary,
    event: *const RcEvent,
    out_edge: *mut usize,
    out_value: *mut f64,
) -> RcStatus {
    guard(|| {
        let region = &deref(region, "region")?.0;
        let params = &deref(params, "params")?.0;
        let event = &deref(event, "event")?.0;
        let (e, v) = exact::influence(event, region, params, &boundary(region, bc))?;
        *out_ptr(out_edge, "out_edge")? = e;
        *out_ptr(out_value, "out_value")? = v;
        Ok(())
    })
}

/// Chain started from the all-closed configuration.
#[no_mangle]
pub unsafe extern "C" fn rc_chain_new(
    region: *const RcRegion,
    params: *const RcParams,
    bc: RcBoundary,
    seed: u64,
    out: *mut *mut RcChain,
) -> RcStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let region = deref(region, "region")?.0.clone();
        let params = deref(params, "params")?.0.clone();
        let bc = boundary(&region, bc);
        *out = into_handle(RcChain(ChainState::new(region, params, bc, replica_rng(seed, 0))?));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn rc_chain_free(chain: *mut RcChain) {
    free_handle(chain);
}

/// Performs `sweeps` sweeps with the chosen update rule.
#[no_mangle]
pub unsafe extern "C" fn rc_chain_sweep(chain: *mut RcChain, algorithm: RcAlgorithm, sweeps: u64) -> RcStatus {
    guard(|| {
        let chain = &mut deref_mut(chain, "chain")?.0;
        let algo = match algorithm {
            RcAlgorithm::HeatBath => Algorithm::Heatbath,
            RcAlgorithm::EdwardsSokal => Algorithm::Es,
        };
        for _ in 0..sweeps {
            chain.sweep(algo)?;
        }
        Ok(())
    })
}

/// Copies the current configuration into `buf`, one byte (0 or 1) per edge.
#[no_mangle]
pub unsafe extern "C" fn rc_chain_configuration(chain: *const RcChain, buf: *mut u8, len: usize) -> RcStatus {
    guard(|| {
        let chain = &deref(chain, "chain")?.0;
        let m = chain.config.len();
        if len < m {
            return Err(RcStatusError(RcStatus::BufferTooSmall, format!("buffer holds {len} edges, need {m}")));
        }
        if buf.is_null() {
            return Err(RcStatusError(RcStatus::NullPointer, "buf is null".into()));
        }
        let out = std::slice::from_raw_parts_mut(buf, m);
        for (e, slot) in out.iter_mut().enumerate() {
            *slot = chain.config.get(e) as u8;
        }
        Ok(())
    })
}

/// Coupled chain on (pi, omega) with pivot edge `pivot`.
#[no_mangle]
pub unsafe extern "C" fn rc_coupling_new(
    region: *const RcRegion,
    params: *const RcParams,
    bc: RcBoundary,
    pivot: usize,
    seed: u64,
    out: *mut *mut RcCoupling,
) -> RcStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let region = deref(region, "region")?.0.clone();
        let params = deref(params, "params")?.0.clone();
        let bc = boundary(&region, bc);
        *out = into_handle(RcCoupling(CouplingChain::new(region, params, bc, pivot, seed)?));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn rc_coupling_free(chain: *mut RcCoupling) {
    free_handle(chain);
}

/// Advances to the next transition. `out_done` is set to 1 when no
/// transition is possible, in which case the other outputs are untouched.
#[no_mangle]
pub unsafe extern "C" fn rc_coupling_step(
    chain: *mut RcCoupling,
    out_time: *mut f64,
    out_edge: *mut usize,
    out_kind: *mut RcTransitionKind,
    out_done: *mut u8,
) -> RcStatus {
    guard(|| {
        let chain = &mut deref_mut(chain, "chain")?.0;
        let done = out_ptr(out_done, "out_done")?;
        match chain.step()? {
            None => *done = 1,
            Some(t) => {
                *done = 0;
                *out_ptr(out_time, "out_time")? = t.time;
                *out_ptr(out_edge, "out_edge")? = t.edge;
                *out_ptr(out_kind, "out_kind")? = match t.kind {
                    TransitionKind::Open => RcTransitionKind::Open,
                    TransitionKind::CloseBoth => RcTransitionKind::CloseBoth,
                    TransitionKind::ClosePi => RcTransitionKind::ClosePi,
                };
            }
        }
        Ok(())
    })
}

/// Checks the invariants on the current state. Each output is 1 when the
/// invariant holds: pi <= omega edgewise, the pivot is closed in pi and open
/// in omega, and the two agree off the pivot cluster of omega.
#[no_mangle]
pub unsafe extern "C" fn rc_coupling_audit(
    chain: *const RcCoupling,
    monotone: *mut u8,
    pivot: *mut u8,
    off_cluster: *mut u8,
) -> RcStatus {
    guard(|| {
        let chain = &deref(chain, "chain")?.0;
        let [a, b, c] = chain.audit()?;
        *out_ptr(monotone, "monotone")? = a as u8;
        *out_ptr(pivot, "pivot")? = b as u8;
        *out_ptr(off_cluster, "off_cluster")? = c as u8;
        Ok(())
    })
}
