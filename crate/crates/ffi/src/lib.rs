//! C interface to `kitaev-net`.
//!
//! Objects are opaque heap handles created by `kn_*_new`/`kn_*_build`
//! functions and released by the matching `kn_*_free`. Every fallible call
//! returns a [`KnStatus`]; on failure a description is available from
//! [`kn_last_error_message`] on the same thread. Panics never cross the
//! boundary and are reported as `KN_STATUS_PANIC`.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use kitaev_net::freefermion::majorana_zero_mode_potentials;
use kitaev_net::measures::MeasureKind;
use kitaev_net::model::{Boundary, ChainSpec};
use kitaev_net::network::{build_network, clustering, node_density, CorrelationNetwork, NetworkOptions, Normalization};
use kitaev_net::solver::{ground_state, QuantumState};
use kitaev_net::theory::factorization_potential;
use kitaev_net::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KnStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Capacity = 3,
    Convergence = 4,
    Domain = 5,
    /// The requested quantity is undefined (e.g. clustering of an empty network).
    Undefined = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KnBoundary {
    Periodic = 0,
    Open = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KnMeasure {
    MutualInformation = 0,
    Concurrence = 1,
    L1Coherence = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KnNormalization {
    MaxNormalized = 0,
    Raw = 1,
}

/// Chain parameters.
pub struct KnChain {
    spec: ChainSpec,
}

/// Ground state of a chain.
pub struct KnState {
    state: QuantumState,
}

/// Correlation network over the sites of a state.
pub struct KnNetwork {
    net: CorrelationNetwork,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> KnStatus {
    match e {
        Error::Capacity { .. } => KnStatus::Capacity,
        Error::Convergence { .. } => KnStatus::Convergence,
        Error::Domain(_) => KnStatus::Domain,
        _ => KnStatus::InvalidArgument,
    }
}

fn fail(status: KnStatus, message: impl Into<String>) -> KnStatus {
    set_error(message.into());
    status
}

fn guard(body: impl FnOnce() -> Result<(), KnStatus>) -> KnStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => KnStatus::Ok,
        Ok(Err(status)) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            fail(KnStatus::Panic, format!("panic: {msg}"))
        }
    }
}

fn lift<T>(r: kitaev_net::Result<T>) -> Result<T, KnStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

unsafe fn deref<'a, T>(p: *const T, name: &str) -> Result<&'a T, KnStatus> {
    p.as_ref().ok_or_else(|| fail(KnStatus::NullPointer, format!("`{name}` is null")))
}

unsafe fn out_ref<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, KnStatus> {
    p.as_mut().ok_or_else(|| fail(KnStatus::NullPointer, format!("`{name}` is null")))
}

/// Message for the last failure on this thread, or null if none. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn kn_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Validates the parameters and allocates a chain handle.
#[no_mangle]
pub unsafe extern "C" fn kn_chain_new(
    n_sites: usize,
    hopping: f64,
    chemical_potential: f64,
    pairing: f64,
    boundary: KnBoundary,
    out: *mut *mut KnChain,
) -> KnStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let boundary = match boundary {
            KnBoundary::Periodic => Boundary::Periodic,
            KnBoundary::Open => Boundary::Open,
        };
        let spec = ChainSpec::new(n_sites, hopping, chemical_potential, pairing, boundary);
        lift(spec.validate())?;
        *out = Box::into_raw(Box::new(KnChain { spec }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn kn_chain_free(chain: *mut KnChain) {
    if !chain.is_null() {
        drop(Box::from_raw(chain));
    }
}

/// Solves for the ground state of `chain`.
#[no_mangle]
pub unsafe extern "C" fn kn_ground_state(chain: *const KnChain, out: *mut *mut KnState) -> KnStatus {
    guard(|| {
        let chain = deref(chain, "chain")?;
        let out = out_ref(out, "out")?;
        let state = lift(ground_state(&chain.spec))?;
        *out = Box::into_raw(Box::new(KnState { state }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn kn_state_energy(state: *const KnState, out: *mut f64) -> KnStatus {
    guard(|| {
        *out_ref(out, "out")? = deref(state, "state")?.state.energy;
        Ok(())
    })
}

/// `+1` for even and `-1` for odd ground states.
#[no_mangle]
pub unsafe extern "C" fn kn_state_parity(state: *const KnState, out: *mut i32) -> KnStatus {
    guard(|| {
        let s = deref(state, "state")?;
        *out_ref(out, "out")? = if s.state.parity_expectation < 0.0 { -1 } else { 1 };
        Ok(())
    })
}

/// Nonzero when both parity sectors tied within tolerance.
#[no_mangle]
pub unsafe extern "C" fn kn_state_degenerate(state: *const KnState, out: *mut i32) -> KnStatus {
    guard(|| {
        *out_ref(out, "out")? = i32::from(deref(state, "state")?.state.degenerate);
        Ok(())
    })
}

/// Number of amplitudes, `2^N`.
#[no_mangle]
pub unsafe extern "C" fn kn_state_dimension(state: *const KnState, out: *mut usize) -> KnStatus {
    guard(|| {
        *out_ref(out, "out")? = deref(state, "state")?.state.dimension();
        Ok(())
    })
}

/// Copies the amplitudes into `re` and `im`, each of length at least the
/// state dimension.
#[no_mangle]
pub unsafe extern "C" fn kn_state_amplitudes(state: *const KnState, re: *mut f64, im: *mut f64, len: usize) -> KnStatus {
    guard(|| {
        let s = deref(state, "state")?;
        if re.is_null() || im.is_null() {
            return Err(fail(KnStatus::NullPointer, "`re` or `im` is null"));
        }
        let dim = s.state.dimension();
        if len < dim {
            return Err(fail(KnStatus::InvalidArgument, format!("buffer length {len} below dimension {dim}")));
        }
        let re = std::slice::from_raw_parts_mut(re, dim);
        let im = std::slice::from_raw_parts_mut(im, dim);
        for (k, a) in s.state.amplitudes.iter().enumerate() {
            re[k] = a.re;
            im[k] = a.im;
        }
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn kn_state_free(state: *mut KnState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Builds the `measure` network of `state` with the default spin-picture
/// reduction and natural logarithms.
#[no_mangle]
pub unsafe extern "C" fn kn_network_build(
    state: *const KnState,
    measure: KnMeasure,
    normalization: KnNormalization,
    out: *mut *mut KnNetwork,
) -> KnStatus {
    guard(|| {
        let s = deref(state, "state")?;
        let out = out_ref(out, "out")?;
        let measure = match measure {
            KnMeasure::MutualInformation => MeasureKind::MutualInformation,
            KnMeasure::Concurrence => MeasureKind::Concurrence,
            KnMeasure::L1Coherence => MeasureKind::L1Coherence,
        };
        let options = NetworkOptions {
            normalization: match normalization {
                KnNormalization::MaxNormalized => Normalization::MaxNormalized,
                KnNormalization::Raw => Normalization::Raw,
            },
            ..NetworkOptions::default()
        };
        let net = lift(build_network(&s.state, measure, &options))?;
        *out = Box::into_raw(Box::new(KnNetwork { net }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn kn_network_size(net: *const KnNetwork, out: *mut usize) -> KnStatus {
    guard(|| {
        *out_ref(out, "out")? = deref(net, "net")?.net.n_nodes();
        Ok(())
    })
}

/// Clustering coefficient; `KN_STATUS_UNDEFINED` for networks without
/// open triplets.
#[no_mangle]
pub unsafe extern "C" fn kn_network_clustering(net: *const KnNetwork, out: *mut f64) -> KnStatus {
    guard(|| {
        let n = deref(net, "net")?;
        let out = out_ref(out, "out")?;
        match clustering(&n.net) {
            Some(c) => {
                *out = c;
                Ok(())
            }
            None => Err(fail(KnStatus::Undefined, "clustering is undefined for this network")),
        }
    })
}

/// Density of node `node` on raw weights.
#[no_mangle]
pub unsafe extern "C" fn kn_network_density(net: *const KnNetwork, node: usize, out: *mut f64) -> KnStatus {
    guard(|| {
        let n = deref(net, "net")?;
        *out_ref(out, "out")? = lift(node_density(&n.net, node))?;
        Ok(())
    })
}

/// Copies the row-major `N x N` raw weight matrix into `out`.
#[no_mangle]
pub unsafe extern "C" fn kn_network_weights(net: *const KnNetwork, out: *mut f64, len: usize) -> KnStatus {
    guard(|| {
        let n = deref(net, "net")?;
        if out.is_null() {
            return Err(fail(KnStatus::NullPointer, "`out` is null"));
        }
        let w = n.net.weights();
        if len < w.len() {
            return Err(fail(KnStatus::InvalidArgument, format!("buffer length {len} below {}", w.len())));
        }
        std::slice::from_raw_parts_mut(out, w.len()).copy_from_slice(w);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn kn_network_free(net: *mut KnNetwork) {
    if !net.is_null() {
        drop(Box::from_raw(net));
    }
}

/// Writes the ascending potentials `2 sqrt(w^2 - Delta^2) cos(pi k / (N+1))`
/// to `out` and their count to `written`. `KN_STATUS_DOMAIN` when
/// `|Delta| > |w|`.
#[no_mangle]
pub unsafe extern "C" fn kn_majorana_zero_modes(
    n_sites: usize,
    hopping: f64,
    pairing: f64,
    out: *mut f64,
    len: usize,
    written: *mut usize,
) -> KnStatus {
    guard(|| {
        let written = out_ref(written, "written")?;
        *written = 0;
        if out.is_null() {
            return Err(fail(KnStatus::NullPointer, "`out` is null"));
        }
        if n_sites == 0 || !hopping.is_finite() || !pairing.is_finite() {
            return Err(fail(KnStatus::InvalidArgument, "need N >= 1 and finite w, Delta"));
        }
        let z = majorana_zero_mode_potentials(n_sites, hopping, pairing);
        if !z.in_domain {
            return Err(fail(
                KnStatus::Domain,
                format!("|Delta| = {} exceeds |w| = {}", pairing.abs(), hopping.abs()),
            ));
        }
        if len < z.values.len() {
            return Err(fail(
                KnStatus::InvalidArgument,
                format!("buffer length {len} below {}", z.values.len()),
            ));
        }
        std::slice::from_raw_parts_mut(out, z.values.len()).copy_from_slice(&z.values);
        *written = z.values.len();
        Ok(())
    })
}

/// `2 sqrt(w^2 - Delta^2)`.
#[no_mangle]
pub unsafe extern "C" fn kn_factorization_potential(hopping: f64, pairing: f64, out: *mut f64) -> KnStatus {
    guard(|| {
        *out_ref(out, "out")? = lift(factorization_potential(hopping, pairing))?;
        Ok(())
    })
}
