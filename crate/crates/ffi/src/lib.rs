//! C ABI over the magnetogas library.
//!
//! Every entry point returns an `MgStatus` and writes its result through an
//! out-pointer. On failure the message is kept per thread and can be copied
//! out with `mg_last_error_message`. Panics are caught at the boundary and
//! reported as `MG_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use magnetogas::gas_finite_t::{self as ft, GasPointT, OscSeriesSpec, SelfMagnetizationMode, SelfMagnetizationSpec};
use magnetogas::gas_zero_t::{self as zt, GasPointT0, Method, Regime};
use magnetogas::hfamily;
use magnetogas::hurwitz::{self, ZetaEngineConfig, ZetaStrategy};
use magnetogas::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MgStatus {
    Ok = 0,
    Pole = 1,
    Domain = 2,
    ThresholdDivergence = 3,
    Capacity = 4,
    ToleranceFailure = 5,
    Truncation = 6,
    InvalidInput = 7,
    NonFinite = 8,
    NullPointer = 9,
    Panic = 10,
}

impl From<&Error> for MgStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Pole => MgStatus::Pole,
            Error::Domain(_) => MgStatus::Domain,
            Error::ThresholdDivergence { .. } => MgStatus::ThresholdDivergence,
            Error::Capacity { .. } => MgStatus::Capacity,
            Error::ToleranceFailure { .. } => MgStatus::ToleranceFailure,
            Error::Truncation { .. } => MgStatus::Truncation,
            Error::InvalidInput(_) => MgStatus::InvalidInput,
            Error::NonFinite { .. } => MgStatus::NonFinite,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MgMethod {
    Quadrature = 0,
    SmallBExpansion = 1,
    LargeFillingExpansion = 2,
    BruteForce = 3,
    NonRelativistic = 4,
    Sommerfeld = 5,
    OscillationSeries = 6,
}

impl From<MgMethod> for Method {
    fn from(m: MgMethod) -> Self {
        match m {
            MgMethod::Quadrature => Method::Quadrature,
            MgMethod::SmallBExpansion => Method::SmallBExpansion,
            MgMethod::LargeFillingExpansion => Method::LargeFillingExpansion,
            MgMethod::BruteForce => Method::BruteForce,
            MgMethod::NonRelativistic => Method::NonRelativistic,
            MgMethod::Sommerfeld => Method::Sommerfeld,
            MgMethod::OscillationSeries => Method::OscillationSeries,
        }
    }
}

impl From<Method> for MgMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Quadrature => MgMethod::Quadrature,
            Method::SmallBExpansion => MgMethod::SmallBExpansion,
            Method::LargeFillingExpansion => MgMethod::LargeFillingExpansion,
            Method::BruteForce => MgMethod::BruteForce,
            Method::NonRelativistic => MgMethod::NonRelativistic,
            Method::Sommerfeld => MgMethod::Sommerfeld,
            Method::OscillationSeries => MgMethod::OscillationSeries,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MgZetaStrategy {
    RecurrenceAsymptotic = 0,
    HermiteQuadrature = 1,
    Fourier = 2,
    BernoulliPolynomial = 3,
    DirectSeries = 4,
}

impl From<ZetaStrategy> for MgZetaStrategy {
    fn from(s: ZetaStrategy) -> Self {
        match s {
            ZetaStrategy::RecurrenceAsymptotic => MgZetaStrategy::RecurrenceAsymptotic,
            ZetaStrategy::HermiteQuadrature => MgZetaStrategy::HermiteQuadrature,
            ZetaStrategy::Fourier => MgZetaStrategy::Fourier,
            ZetaStrategy::BernoulliPolynomial => MgZetaStrategy::BernoulliPolynomial,
            ZetaStrategy::DirectSeries => MgZetaStrategy::DirectSeries,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MgRegime {
    Cold = 0,
    ColdSmallField = 1,
    Warm = 2,
    Nondegenerate = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MgSelfMagnetizationMode {
    Total = 0,
    Envelope = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MgZetaValue {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub strategy: i32,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MgHValue {
    pub total: f64,
    pub monotonic: f64,
    pub oscillatory: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MgThermoResult {
    pub value: f64,
    pub monotonic: f64,
    pub oscillatory: f64,
    pub abs_error_estimate: f64,
    /// An `MgMethod` discriminant.
    pub method: i32,
    pub at_threshold: bool,
}

impl From<zt::ThermoResult> for MgThermoResult {
    fn from(r: zt::ThermoResult) -> Self {
        Self {
            value: r.value,
            monotonic: r.monotonic,
            oscillatory: r.oscillatory,
            abs_error_estimate: r.abs_error_estimate,
            method: MgMethod::from(r.method) as i32,
            at_threshold: r.at_threshold,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MgEnvelope {
    pub lower: f64,
    pub upper: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MgDensityInversion {
    pub eps_f: f64,
    pub near_threshold: bool,
    pub iterations: usize,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MgRegimeLabel {
    /// An `MgRegime` discriminant.
    pub regime: i32,
    pub landau_spacing: f64,
    pub fermi_temperature: f64,
}

/// Opaque Hurwitz zeta engine configuration.
pub struct MgZetaEngine {
    cfg: ZetaEngineConfig,
}

/// Opaque list of field values returned by the self-magnetization solver.
pub struct MgRootList {
    roots: Vec<f64>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

// Runs `f`, translating errors and panics into a status and the thread-local
// message.
fn guard<F: FnOnce() -> Result<(), MgStatus>>(f: F) -> MgStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MgStatus::Ok,
        Ok(Err(s)) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(format!("panic: {msg}"));
            MgStatus::Panic
        }
    }
}

fn check<T>(r: magnetogas::Result<T>) -> Result<T, MgStatus> {
    r.map_err(|e| {
        set_last_error(e.to_string());
        MgStatus::from(&e)
    })
}

fn write<T>(out: *mut T, v: T) -> Result<(), MgStatus> {
    if out.is_null() {
        set_last_error("null output pointer".into());
        return Err(MgStatus::NullPointer);
    }
    // SAFETY: non-null; the caller guarantees it points to writable storage for T.
    unsafe { out.write(v) };
    Ok(())
}

fn deref<'a, T>(p: *const T) -> Result<&'a T, MgStatus> {
    if p.is_null() {
        set_last_error("null handle".into());
        return Err(MgStatus::NullPointer);
    }
    // SAFETY: non-null handles come from the matching constructor.
    Ok(unsafe { &*p })
}

fn method_from_raw(m: i32) -> Result<Method, MgStatus> {
    let m = match m {
        0 => MgMethod::Quadrature,
        1 => MgMethod::SmallBExpansion,
        2 => MgMethod::LargeFillingExpansion,
        3 => MgMethod::BruteForce,
        4 => MgMethod::NonRelativistic,
        5 => MgMethod::Sommerfeld,
        6 => MgMethod::OscillationSeries,
        _ => {
            set_last_error(format!("unknown method {m}"));
            return Err(MgStatus::InvalidInput);
        }
    };
    Ok(m.into())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn mg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Length in bytes of the last error message on this thread, without the
/// terminating NUL; 0 when the last call succeeded.
#[no_mangle]
pub extern "C" fn mg_last_error_length() -> usize {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(0, |c| c.as_bytes().len()))
}

/// Copies the last error message into `buf` (NUL-terminated, truncated to
/// `len` bytes). Returns the number of bytes written without the NUL.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn mg_last_error_message(buf: *mut c_char, len: usize) -> usize {
    if buf.is_null() || len == 0 {
        return 0;
    }
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let bytes = e.as_ref().map_or(&[][..], |c| c.as_bytes());
        let n = bytes.len().min(len - 1);
        // SAFETY: n < len and buf has len bytes.
        unsafe {
            ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        n
    })
}

/// Creates an engine with the library defaults.
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn mg_zeta_engine_new_default(out: *mut *mut MgZetaEngine) -> MgStatus {
    guard(|| write(out, Box::into_raw(Box::new(MgZetaEngine { cfg: ZetaEngineConfig::DEFAULT }))))
}

/// Creates an engine with explicit settings; fails with
/// `MG_STATUS_INVALID_INPUT` or `MG_STATUS_CAPACITY` when they are invalid.
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn mg_zeta_engine_new(
    shift_target: f64,
    asymptotic_terms: usize,
    quadrature_abs_tol: f64,
    quadrature_rel_tol: f64,
    out: *mut *mut MgZetaEngine,
) -> MgStatus {
    guard(|| {
        let cfg = ZetaEngineConfig { shift_target, asymptotic_terms, quadrature_abs_tol, quadrature_rel_tol };
        check(cfg.validate())?;
        write(out, Box::into_raw(Box::new(MgZetaEngine { cfg })))
    })
}

/// Releases an engine. Null is ignored.
///
/// # Safety
/// `engine` must come from `mg_zeta_engine_new*` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mg_zeta_engine_free(engine: *mut MgZetaEngine) {
    if !engine.is_null() {
        // SAFETY: produced by Box::into_raw in the constructors.
        drop(unsafe { Box::from_raw(engine) });
    }
}

/// ζ(z, q) with the engine's settings.
///
/// # Safety
/// `engine` must be a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn mg_zeta_engine_eval(
    engine: *const MgZetaEngine,
    z: f64,
    q: f64,
    out: *mut MgZetaValue,
) -> MgStatus {
    guard(|| {
        let e = deref(engine)?;
        let v = check(hurwitz::hurwitz_zeta(z, q, &e.cfg))?;
        write(
            out,
            MgZetaValue {
                value: v.value,
                abs_error_estimate: v.abs_error_estimate,
                strategy: MgZetaStrategy::from(v.strategy) as i32,
            },
        )
    })
}

/// ∂ⁿζ(z, q)/∂qⁿ with the engine's settings.
///
/// # Safety
/// `engine` must be a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn mg_zeta_engine_q_derivative(
    engine: *const MgZetaEngine,
    z: f64,
    q: f64,
    order: usize,
    out: *mut f64,
) -> MgStatus {
    guard(|| {
        let e = deref(engine)?;
        write(out, check(hurwitz::hurwitz_q_derivative(z, q, order, &e.cfg))?)
    })
}

/// ζ(z, q) with the default engine.
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn mg_zeta(z: f64, q: f64, out: *mut f64) -> MgStatus {
    guard(|| write(out, check(hurwitz::zeta(z, q))?))
}

/// ℋ_z(q) and its split.
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn mg_h_z(z: f64, q: f64, out: *mut MgHValue) -> MgStatus {
    guard(|| {
        let h = check(hfamily::h_z(z, q))?;
        write(out, MgHValue { total: h.total, monotonic: h.monotonic, oscillatory: h.oscillatory })
    })
}

type ZeroTFn = fn(&GasPointT0, Method) -> magnetogas::Result<zt::ThermoResult>;

fn zero_t(f: ZeroTFn, eps_f: f64, b: f64, method: i32, out: *mut MgThermoResult) -> MgStatus {
    guard(|| {
        let m = method_from_raw(method)?;
        let pt = check(GasPointT0::new(eps_f, b))?;
        write(out, check(f(&pt, m))?.into())
    })
}

/// Number density at T = 0, units m³/2π².
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn mg_number_density(eps_f: f64, b: f64, method: i32, out: *mut MgThermoResult) -> MgStatus {
    zero_t(zt::number_density, eps_f, b, method, out)
}

/// Grand potential density at T = 0, units m⁴/4π².
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn mg_grand_potential(eps_f: f64, b: f64, method: i32, out: *mut MgThermoResult) -> MgStatus {
    zero_t(zt::grand_potential, eps_f, b, method, out)
}

/// Energy density at T = 0, units m⁴/4π².
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn mg_energy_density(eps_f: f64, b: f64, method: i32, out: *mut MgThermoResult) -> MgStatus {
    zero_t(zt::energy_density, eps_f, b, method, out)
}

/// Magnetization at T = 0, units e·m²/2π².
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn mg_magnetization(eps_f: f64, b: f64, method: i32, out: *mut MgThermoResult) -> MgStatus {
    zero_t(zt::magnetization, eps_f, b, method, out)
}

/// Envelope of the T = 0 magnetization oscillations.
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn mg_magnetization_envelope_t0(eps_f: f64, b: f64, out: *mut MgEnvelope) -> MgStatus {
    guard(|| {
        let e = check(zt::magnetization_envelope_t0(eps_f, b))?;
        write(out, MgEnvelope { lower: e.lower, upper: e.upper })
    })
}

/// Fermi energy for density `n` (units m³/2π²) at field b.
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn mg_fermi_energy_from_density(n: f64, b: f64, out: *mut MgDensityInversion) -> MgStatus {
    guard(|| {
        let d = check(zt::fermi_energy_from_density(n, b))?;
        write(out, MgDensityInversion { eps_f: d.eps_f, near_threshold: d.near_threshold, iterations: d.iterations })
    })
}

/// Regime of (ε_F, b, T); `ratio` ≤ 0 selects the default threshold.
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn mg_regime_classify(eps_f: f64, b: f64, t: f64, ratio: f64, out: *mut MgRegimeLabel) -> MgStatus {
    guard(|| {
        let pt = check(GasPointT0::new(eps_f, b))?;
        let ratio = if ratio > 0.0 { ratio } else { zt::DEFAULT_RATIO_THRESHOLD };
        let l = check(zt::regime_classify(&pt, t, ratio))?;
        let regime = match l.regime {
            Regime::Cold => MgRegime::Cold,
            Regime::ColdSmallField => MgRegime::ColdSmallField,
            Regime::Warm => MgRegime::Warm,
            Regime::Nondegenerate => MgRegime::Nondegenerate,
        };
        write(
            out,
            MgRegimeLabel {
                regime: regime as i32,
                landau_spacing: l.landau_spacing,
                fermi_temperature: l.fermi_temperature,
            },
        )
    })
}

/// Grand potential at temperature T from the damped oscillation series.
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn mg_grand_potential_finite_t(mu: f64, t: f64, b: f64, out: *mut MgThermoResult) -> MgStatus {
    guard(|| {
        let pt = check(GasPointT::new(mu, t, b))?;
        write(out, check(ft::grand_potential_finite_t(&pt, &OscSeriesSpec::default()))?.into())
    })
}

/// Magnetization at temperature T.
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn mg_magnetization_finite_t(mu: f64, t: f64, b: f64, out: *mut MgThermoResult) -> MgStatus {
    guard(|| {
        let pt = check(GasPointT::new(mu, t, b))?;
        write(out, check(ft::magnetization_finite_t(&pt, &OscSeriesSpec::default()))?.into())
    })
}

/// Amplitude envelope of the magnetization oscillations at temperature T.
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn mg_oscillation_envelope_t(mu: f64, t: f64, b: f64, out: *mut f64) -> MgStatus {
    guard(|| {
        let pt = check(GasPointT::new(mu, t, b))?;
        write(out, check(ft::oscillation_envelope_t(&pt, &OscSeriesSpec::default()))?)
    })
}

/// Non-relativistic Landau magnetization at kinetic chemical potential `mu_nr`.
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn mg_magnetization_landau(mu_nr: f64, t: f64, b: f64, out: *mut f64) -> MgStatus {
    guard(|| write(out, check(ft::magnetization_landau(mu_nr, t, b, &OscSeriesSpec::default()))?))
}

/// Solves M(T, μ, b) = γB(b) for b in [b_lo, b_hi]. `mode` is an
/// `MgSelfMagnetizationMode` discriminant. The roots are returned in an
/// `MgRootList` owned by the caller.
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn mg_self_magnetization_solve(
    mu: f64,
    t: f64,
    gamma: f64,
    b_lo: f64,
    b_hi: f64,
    mode: i32,
    out: *mut *mut MgRootList,
) -> MgStatus {
    guard(|| {
        let mode = match mode {
            0 => SelfMagnetizationMode::Total,
            1 => SelfMagnetizationMode::Envelope,
            _ => {
                set_last_error(format!("unknown self-magnetization mode {mode}"));
                return Err(MgStatus::InvalidInput);
            }
        };
        let spec = SelfMagnetizationSpec { mode, ..SelfMagnetizationSpec::default() };
        let roots = check(ft::self_magnetization_solve(mu, t, gamma, (b_lo, b_hi), &spec))?;
        write(out, Box::into_raw(Box::new(MgRootList { roots })))
    })
}

/// Number of roots in the list; 0 for null.
///
/// # Safety
/// `list` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mg_root_list_len(list: *const MgRootList) -> usize {
    if list.is_null() {
        return 0;
    }
    // SAFETY: live handle per the contract.
    unsafe { (*list).roots.len() }
}

/// Root `index` of the list.
///
/// # Safety
/// `list` must be a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn mg_root_list_get(list: *const MgRootList, index: usize, out: *mut f64) -> MgStatus {
    guard(|| {
        let l = deref(list)?;
        match l.roots.get(index) {
            Some(&x) => write(out, x),
            None => {
                set_last_error(format!("index {index} out of range for {} roots", l.roots.len()));
                Err(MgStatus::Capacity)
            }
        }
    })
}

/// Releases a root list. Null is ignored.
///
/// # Safety
/// `list` must come from `mg_self_magnetization_solve` and not be used
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn mg_root_list_free(list: *mut MgRootList) {
    if !list.is_null() {
        // SAFETY: produced by Box::into_raw in the solver.
        drop(unsafe { Box::from_raw(list) });
    }
}
