//! C ABI over `teamcoil`.
//!
//! Objects are opaque handles created by `tc_*_new`/`tc_*_from_*` and
//! released by the matching `tc_*_free`. Every fallible call returns a
//! [`TcStatus`]; on failure a message is kept per thread and can be read with
//! [`tc_last_error_message`]. Out-parameters are written only on success.
//! Panics never cross the boundary; they are reported as `TC_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use teamcoil::benchmark::{decode_design, Benchmark, BenchmarkConfig, DesignVector, N_RADII};
use teamcoil::field::{CoilLayout, EvalPoint, FieldSolver, QuadratureSpec, TurnGeometry};
use teamcoil::moo::{NsgaConfig, ParetoArchive};
use teamcoil::pipeline::optimize;
use teamcoil::runio::{default_configs, read_config, write_pareto_csv};
use teamcoil::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    OutOfBounds = 3,
    CornerSingularity = 4,
    Io = 5,
    Parse = 6,
    EvaluatorFailure = 7,
    IndexOutOfRange = 8,
    Panic = 9,
}

/// One turn of rectangular cross section. Lengths in meters, current in
/// amperes.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct TcTurn {
    pub r_inner: f64,
    pub r_outer: f64,
    pub z_lower: f64,
    pub z_upper: f64,
    pub current: f64,
}

/// Coaxial turns evaluated together.
pub struct TcLayout {
    layout: CoilLayout,
    solver: FieldSolver,
}

/// The uniform-field benchmark with its optimizer settings.
pub struct TcBenchmark {
    problem: Benchmark,
    nsga: NsgaConfig,
}

/// Non-dominated designs collected by an optimization run.
pub struct TcArchive {
    archive: ParetoArchive,
}

struct Failure(TcStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::CornerSingularity { .. } => TcStatus::CornerSingularity,
            Error::Turn { source, .. } if matches!(**source, Error::CornerSingularity { .. }) => {
                TcStatus::CornerSingularity
            }
            Error::OutOfBounds { .. } => TcStatus::OutOfBounds,
            Error::Io { .. } => TcStatus::Io,
            Error::Parse { .. }
            | Error::UnknownKey { .. }
            | Error::SchemaMismatch { .. }
            | Error::Json(_) => TcStatus::Parse,
            Error::EvaluatorFailure { .. } => TcStatus::EvaluatorFailure,
            _ => TcStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(TcStatus::NullPointer, format!("`{what}` is null"))
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> TcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            TcStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            TcStatus::Panic
        }
    }
}

unsafe fn slice<'a>(p: *const f64, n: usize, what: &str) -> Result<&'a [f64], Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, n))
}

unsafe fn path_arg(p: *const c_char) -> Result<PathBuf, Failure> {
    if p.is_null() {
        return Err(null("path"));
    }
    let s = CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(TcStatus::InvalidArgument, "path is not UTF-8".into()))?;
    Ok(PathBuf::from(s))
}

unsafe fn write_out<T>(p: *mut T, v: T) {
    if !p.is_null() {
        *p = v;
    }
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn tc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn tc_status_string(status: TcStatus) -> *const c_char {
    let s: &'static str = match status {
        TcStatus::Ok => "ok\0",
        TcStatus::NullPointer => "null pointer argument\0",
        TcStatus::InvalidArgument => "invalid argument\0",
        TcStatus::OutOfBounds => "design variable out of bounds\0",
        TcStatus::CornerSingularity => "evaluation point on a turn corner\0",
        TcStatus::Io => "i/o error\0",
        TcStatus::Parse => "parse error\0",
        TcStatus::EvaluatorFailure => "objective evaluation failed\0",
        TcStatus::IndexOutOfRange => "index out of range\0",
        TcStatus::Panic => "internal panic\0",
    };
    s.as_ptr().cast()
}

/// Message of the last failed call on this thread, or null after a
/// successful one. Valid until the next `tc_*` call on the same thread.
#[no_mangle]
pub extern "C" fn tc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Field of a single turn at `(r, z)`, default azimuthal rule.
///
/// # Safety
/// `turn` must point to a valid `TcTurn`; `br` and `bz` may be null.
#[no_mangle]
pub unsafe extern "C" fn tc_turn_field(
    turn: *const TcTurn,
    r: f64,
    z: f64,
    br: *mut f64,
    bz: *mut f64,
) -> TcStatus {
    guard(|| {
        let t = turn.as_ref().ok_or_else(|| null("turn"))?;
        let geom = TurnGeometry::new(t.r_inner, t.r_outer, t.z_lower, t.z_upper, t.current)?;
        let (b_r, b_z) = FieldSolver::new(QuadratureSpec::default())?
            .turn_field(&geom, EvalPoint::new(r, z)?)?;
        write_out(br, b_r);
        write_out(bz, b_z);
        Ok(())
    })
}

/// Layout from an array of `n` turns.
///
/// # Safety
/// `turns` must point to `n` valid `TcTurn`s and `out` to writable storage.
#[no_mangle]
pub unsafe extern "C" fn tc_layout_from_turns(
    turns: *const TcTurn,
    n: usize,
    out: *mut *mut TcLayout,
) -> TcStatus {
    guard(|| {
        if turns.is_null() {
            return Err(null("turns"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let geoms = std::slice::from_raw_parts(turns, n)
            .iter()
            .map(|t| TurnGeometry::new(t.r_inner, t.r_outer, t.z_lower, t.z_upper, t.current))
            .collect::<Result<Vec<_>, _>>()?;
        let h = TcLayout {
            layout: CoilLayout::new(geoms)?,
            solver: FieldSolver::new(QuadratureSpec::default())?,
        };
        *out = Box::into_raw(Box::new(h));
        Ok(())
    })
}

/// The 20-turn benchmark layout decoded from 10 inner radii (m) with the
/// default benchmark settings.
///
/// # Safety
/// `radii` must point to `n` doubles and `out` to writable storage.
#[no_mangle]
pub unsafe extern "C" fn tc_layout_from_radii(
    radii: *const f64,
    n: usize,
    out: *mut *mut TcLayout,
) -> TcStatus {
    guard(|| {
        let radii = slice(radii, n, "radii")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let cfg = BenchmarkConfig::default();
        let x = DesignVector::new(radii.to_vec(), &cfg)?;
        let h = TcLayout {
            layout: decode_design(&x, &cfg)?,
            solver: FieldSolver::new(cfg.quad)?,
        };
        *out = Box::into_raw(Box::new(h));
        Ok(())
    })
}

/// Number of turns in `layout`, 0 if null.
///
/// # Safety
/// `layout` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tc_layout_len(layout: *const TcLayout) -> usize {
    layout.as_ref().map_or(0, |l| l.layout.len())
}

/// Summed field of all turns at `(r, z)`.
///
/// # Safety
/// `layout` must be a live handle; `br` and `bz` may be null.
#[no_mangle]
pub unsafe extern "C" fn tc_layout_field(
    layout: *const TcLayout,
    r: f64,
    z: f64,
    br: *mut f64,
    bz: *mut f64,
) -> TcStatus {
    guard(|| {
        let l = layout.as_ref().ok_or_else(|| null("layout"))?;
        let s = l.solver.field(&l.layout, EvalPoint::new(r, z)?)?;
        write_out(br, s.b_r);
        write_out(bz, s.b_z);
        Ok(())
    })
}

/// # Safety
/// `layout` must be null or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn tc_layout_free(layout: *mut TcLayout) {
    if !layout.is_null() {
        drop(Box::from_raw(layout));
    }
}

fn new_benchmark(bench: BenchmarkConfig, nsga: NsgaConfig) -> Result<*mut TcBenchmark, Failure> {
    let problem = Benchmark::new(bench)?;
    Ok(Box::into_raw(Box::new(TcBenchmark { problem, nsga })))
}

/// Benchmark with all default settings.
///
/// # Safety
/// `out` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn tc_benchmark_new(out: *mut *mut TcBenchmark) -> TcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let (b, n) = default_configs();
        *out = new_benchmark(b, n)?;
        Ok(())
    })
}

/// Benchmark and optimizer settings read from a `key = value` config file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tc_benchmark_from_config(
    path: *const c_char,
    out: *mut *mut TcBenchmark,
) -> TcStatus {
    guard(|| {
        let path = path_arg(path)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let (b, n) = read_config(path)?;
        *out = new_benchmark(b, n)?;
        Ok(())
    })
}

/// Objectives of one design: `f1` (T) and `f2` (m).
///
/// # Safety
/// `bench` must be a live handle and `radii` point to `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn tc_benchmark_evaluate(
    bench: *const TcBenchmark,
    radii: *const f64,
    n: usize,
    f1: *mut f64,
    f2: *mut f64,
) -> TcStatus {
    guard(|| {
        let b = bench.as_ref().ok_or_else(|| null("bench"))?;
        let x = DesignVector::new(slice(radii, n, "radii")?.to_vec(), b.problem.config())?;
        let obj = b.problem.evaluate(&x)?;
        write_out(f1, obj.f1);
        write_out(f2, obj.f2);
        Ok(())
    })
}

/// Runs NSGA-II with the benchmark's settings. `population` and
/// `generations` override the configured values when non-zero.
///
/// # Safety
/// `bench` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tc_optimize(
    bench: *const TcBenchmark,
    population: usize,
    generations: usize,
    seed: u64,
    out: *mut *mut TcArchive,
) -> TcStatus {
    guard(|| {
        let b = bench.as_ref().ok_or_else(|| null("bench"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let mut nsga = b.nsga.clone();
        if population > 0 {
            nsga.population = population;
        }
        if generations > 0 {
            nsga.generations = generations;
        }
        nsga.seed = seed;
        let run = optimize(b.problem.config(), &nsga, None).map_err(|a| Failure::from(a.error))?;
        *out = Box::into_raw(Box::new(TcArchive {
            archive: run.archive,
        }));
        Ok(())
    })
}

/// # Safety
/// `bench` must be null or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn tc_benchmark_free(bench: *mut TcBenchmark) {
    if !bench.is_null() {
        drop(Box::from_raw(bench));
    }
}

/// Number of archived designs, 0 if null.
///
/// # Safety
/// `archive` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tc_archive_len(archive: *const TcArchive) -> usize {
    archive.as_ref().map_or(0, |a| a.archive.len())
}

/// Objectives and radii of member `index`. `radii` receives the 10 genes
/// and must have room for `radii_len >= 10` doubles, or be null.
///
/// # Safety
/// `archive` must be a live handle; output pointers may be null.
#[no_mangle]
pub unsafe extern "C" fn tc_archive_member(
    archive: *const TcArchive,
    index: usize,
    f1: *mut f64,
    f2: *mut f64,
    radii: *mut f64,
    radii_len: usize,
) -> TcStatus {
    guard(|| {
        let a = archive.as_ref().ok_or_else(|| null("archive"))?;
        let m = a.archive.members().get(index).ok_or_else(|| {
            Failure(
                TcStatus::IndexOutOfRange,
                format!("index {index} with {} members", a.archive.len()),
            )
        })?;
        if !radii.is_null() {
            if radii_len < N_RADII {
                return Err(Failure(
                    TcStatus::InvalidArgument,
                    format!("radii buffer holds {radii_len}, need {N_RADII}"),
                ));
            }
            std::slice::from_raw_parts_mut(radii, N_RADII).copy_from_slice(&m.genes);
        }
        write_out(f1, m.objectives[0]);
        write_out(f2, m.objectives[1]);
        Ok(())
    })
}

/// Writes the archive as CSV (`f1_tesla,f2_meters,r1..r10`).
///
/// # Safety
/// `archive` must be a live handle and `path` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn tc_archive_write_csv(
    archive: *const TcArchive,
    path: *const c_char,
) -> TcStatus {
    guard(|| {
        let a = archive.as_ref().ok_or_else(|| null("archive"))?;
        write_pareto_csv(&a.archive, path_arg(path)?)?;
        Ok(())
    })
}

/// # Safety
/// `archive` must be null or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn tc_archive_free(archive: *mut TcArchive) {
    if !archive.is_null() {
        drop(Box::from_raw(archive));
    }
}
