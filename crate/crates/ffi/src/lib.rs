//! C ABI over the partial-balance toolkit.
//!
//! Handles are opaque and owned by the caller once returned; release them with
//! the matching `*_free` function. Fallible calls return a [`PbStatus`] and
//! leave a message retrievable with [`pb_last_error_message`] on the calling
//! thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use partial_balance::balance::{undirected_balance, BalanceMode, BalanceReport, BalanceTally};
use partial_balance::census::census;
use partial_balance::graph::{
    build_graph, preprocess, project_undirected, AggregateRule, ComponentRule, EdgeRecord,
    InputFormat, PreprocessConfig, SignedDigraph, SignedGraph,
};
use partial_balance::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Io = 3,
    Parse = 4,
    Format = 5,
    NoTransitiveTriads = 6,
    InvalidArgument = 7,
    Undefined = 8,
    Panic = 9,
}

/// Input formats accepted by [`pb_graph_from_file`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PbFormat {
    CsvRating = 0,
    TsvSign = 1,
    SignedMatrix = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PbAggregate {
    Sum = 0,
    Last = 1,
    Mean = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PbBalanceMode {
    TypeMean = 0,
    TriadMean = 1,
}

/// Preprocessing options. Enumerated fields hold `PbAggregate` values.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PbConfig {
    pub sign_threshold: f64,
    pub aggregate: u32,
    pub prune_pendants: bool,
    /// Keep every weak component instead of only the giant one.
    pub keep_all_components: bool,
}

/// Accumulated edge records.
pub struct PbRecords {
    records: Vec<EdgeRecord>,
}

/// A preprocessed graph and its undirected projection.
pub struct PbGraph {
    graph: SignedDigraph,
    projection: SignedGraph,
}

/// Balance figures of one graph.
pub struct PbReport {
    report: BalanceReport,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(PbStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Parse { .. } => PbStatus::Parse,
            Error::Format(_) | Error::Json(_) => PbStatus::Format,
            Error::Io(_) | Error::MissingInput(_) => PbStatus::Io,
            Error::NoTransitiveTriads => PbStatus::NoTransitiveTriads,
            Error::Undefined(_) => PbStatus::Undefined,
            _ => PbStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> PbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PbStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_error(format!("internal panic: {msg}"));
            PbStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(PbStatus::NullPointer, format!("{what} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(PbStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

fn invalid(message: String) -> Failure {
    Failure(PbStatus::InvalidArgument, message)
}

unsafe fn preprocess_config(config: *const PbConfig) -> Result<PreprocessConfig, Failure> {
    let Some(c) = config.as_ref() else {
        return Ok(PreprocessConfig::default());
    };
    let aggregate_rule = match c.aggregate {
        0 => AggregateRule::SumThenSign,
        1 => AggregateRule::LastRecord,
        2 => AggregateRule::MeanThenSign,
        other => return Err(invalid(format!("unknown aggregate rule {other}"))),
    };
    if !c.sign_threshold.is_finite() {
        return Err(invalid("threshold must be finite".into()));
    }
    Ok(PreprocessConfig {
        sign_threshold: c.sign_threshold,
        aggregate_rule,
        prune_pendants: c.prune_pendants,
        keep_component: if c.keep_all_components {
            ComponentRule::All
        } else {
            ComponentRule::Giant
        },
    })
}

fn finish(graph: SignedDigraph, config: &PreprocessConfig) -> *mut PbGraph {
    let graph = preprocess(&graph, config);
    let projection = project_undirected(&graph);
    Box::into_raw(Box::new(PbGraph { graph, projection }))
}

/// Message of the last failed call on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Default preprocessing: threshold 0, sum-then-sign, prune pendants, giant component.
#[no_mangle]
pub extern "C" fn pb_config_default() -> PbConfig {
    PbConfig {
        sign_threshold: 0.0,
        aggregate: PbAggregate::Sum as u32,
        prune_pendants: true,
        keep_all_components: false,
    }
}

#[no_mangle]
pub extern "C" fn pb_records_new() -> *mut PbRecords {
    Box::into_raw(Box::new(PbRecords {
        records: Vec::new(),
    }))
}

/// Append one weighted edge record.
///
/// # Safety
/// `records` must come from [`pb_records_new`]; the strings must be
/// nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn pb_records_push(
    records: *mut PbRecords,
    source: *const c_char,
    target: *const c_char,
    weight: f64,
) -> PbStatus {
    guard(|| {
        let r = records.as_mut().ok_or_else(|| null("records"))?;
        let s = str_arg(source, "source")?;
        let t = str_arg(target, "target")?;
        if !weight.is_finite() {
            return Err(invalid("weight must be finite".into()));
        }
        r.records.push(EdgeRecord::new(s, t, weight));
        Ok(())
    })
}

/// # Safety
/// `records` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pb_records_len(records: *const PbRecords) -> usize {
    records.as_ref().map_or(0, |r| r.records.len())
}

/// # Safety
/// `records` must come from [`pb_records_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pb_records_free(records: *mut PbRecords) {
    if !records.is_null() {
        drop(Box::from_raw(records));
    }
}

/// Aggregate, sign, and preprocess the records into a graph. A null `config`
/// selects the defaults.
///
/// # Safety
/// `records` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn pb_graph_build(
    records: *const PbRecords,
    config: *const PbConfig,
    out: *mut *mut PbGraph,
) -> PbStatus {
    guard(|| {
        let r = handle(records, "records")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let cfg = preprocess_config(config)?;
        *out = finish(build_graph(&r.records, &cfg), &cfg);
        Ok(())
    })
}

/// Load, aggregate, and preprocess a file. `format` is a `PbFormat` value.
///
/// # Safety
/// `path` must be nul-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pb_graph_from_file(
    path: *const c_char,
    format: u32,
    config: *const PbConfig,
    out: *mut *mut PbGraph,
) -> PbStatus {
    guard(|| {
        let path = str_arg(path, "path")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let format = match format {
            0 => InputFormat::CsvRating,
            1 => InputFormat::TsvSign,
            2 => InputFormat::SignedMatrix,
            other => return Err(invalid(format!("unknown input format {other}"))),
        };
        let cfg = preprocess_config(config)?;
        let file = std::fs::File::open(Path::new(path)).map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => Failure::from(Error::MissingInput(path.into())),
            _ => Failure::from(Error::Io(e)),
        })?;
        let records =
            partial_balance::graph::load_edge_records(std::io::BufReader::new(file), format)?;
        *out = finish(build_graph(&records, &cfg), &cfg);
        Ok(())
    })
}

/// # Safety
/// `graph` must be null or a live handle; the same holds for the other
/// graph accessors.
#[no_mangle]
pub unsafe extern "C" fn pb_graph_node_count(graph: *const PbGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.graph.node_count())
}

/// # Safety
/// As [`pb_graph_node_count`].
#[no_mangle]
pub unsafe extern "C" fn pb_graph_edge_count(graph: *const PbGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.graph.edge_count())
}

/// # Safety
/// `graph` must come from a `pb_graph_*` constructor and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pb_graph_free(graph: *mut PbGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Label of census class `index` (0..16, "003" through "300"), or null.
#[no_mangle]
pub extern "C" fn pb_triad_label(index: u32) -> *const c_char {
    const LABELS: [&CStr; 16] = [
        c"003", c"012", c"102", c"021D", c"021U", c"021C", c"111D", c"111U", c"030T", c"030C",
        c"201", c"120D", c"120U", c"120C", c"210", c"300",
    ];
    LABELS
        .get(index as usize)
        .map_or(ptr::null(), |l| l.as_ptr())
}

/// Fill `counts[0..16]` with the triad census in label order.
///
/// # Safety
/// `counts` must point to 16 writable `uint64_t`.
#[no_mangle]
pub unsafe extern "C" fn pb_census(graph: *const PbGraph, counts: *mut u64) -> PbStatus {
    guard(|| {
        let g = handle(graph, "graph")?;
        if counts.is_null() {
            return Err(null("counts"));
        }
        let table = census(&g.graph);
        std::slice::from_raw_parts_mut(counts, 16).copy_from_slice(table.counts());
        Ok(())
    })
}

/// Directed balance figures. `mode` is a `PbBalanceMode` value selecting the
/// headline ratio.
///
/// # Safety
/// `graph` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pb_balance_report(
    graph: *const PbGraph,
    mode: u32,
    out: *mut *mut PbReport,
) -> PbStatus {
    guard(|| {
        let g = handle(graph, "graph")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let mode = match mode {
            0 => BalanceMode::TypeMean,
            1 => BalanceMode::TriadMean,
            other => return Err(invalid(format!("unknown balance mode {other}"))),
        };
        let tally = BalanceTally::of_graph(&g.graph);
        let report =
            BalanceReport::from_tally(&tally, mode, Some(undirected_balance(&g.projection)))?;
        *out = Box::into_raw(Box::new(PbReport { report }));
        Ok(())
    })
}

/// Triangle balance of the undirected projection. `ratio` receives NaN when
/// there are no triangles. Any out pointer may be null.
///
/// # Safety
/// `graph` must be live.
#[no_mangle]
pub unsafe extern "C" fn pb_undirected_balance(
    graph: *const PbGraph,
    balanced: *mut u64,
    imbalanced: *mut u64,
    ratio: *mut f64,
) -> PbStatus {
    guard(|| {
        let g = handle(graph, "graph")?;
        let u = undirected_balance(&g.projection);
        if let Some(b) = balanced.as_mut() {
            *b = u.balanced;
        }
        if let Some(i) = imbalanced.as_mut() {
            *i = u.imbalanced;
        }
        if let Some(r) = ratio.as_mut() {
            *r = u.ratio.unwrap_or(f64::NAN);
        }
        Ok(())
    })
}

unsafe fn with_report<T>(
    report: *const PbReport,
    default: T,
    f: impl FnOnce(&BalanceReport) -> T,
) -> T {
    report.as_ref().map_or(default, |r| f(&r.report))
}

/// Headline ratio in the mode the report was built with; NaN for null.
///
/// # Safety
/// `report` must be null or a live handle; the same holds for the other
/// report accessors.
#[no_mangle]
pub unsafe extern "C" fn pb_report_overall(report: *const PbReport) -> f64 {
    with_report(report, f64::NAN, |r| r.overall)
}

/// # Safety
/// As [`pb_report_overall`].
#[no_mangle]
pub unsafe extern "C" fn pb_report_type_mean(report: *const PbReport) -> f64 {
    with_report(report, f64::NAN, |r| r.overall_type_mean)
}

/// # Safety
/// As [`pb_report_overall`].
#[no_mangle]
pub unsafe extern "C" fn pb_report_triad_mean(report: *const PbReport) -> f64 {
    with_report(report, f64::NAN, |r| r.overall_triad_mean)
}

/// # Safety
/// As [`pb_report_overall`].
#[no_mangle]
pub unsafe extern "C" fn pb_report_nonpartial(report: *const PbReport) -> f64 {
    with_report(report, f64::NAN, |r| r.nonpartial.ratio)
}

/// # Safety
/// As [`pb_report_overall`].
#[no_mangle]
pub unsafe extern "C" fn pb_report_transitive_triads(report: *const PbReport) -> u64 {
    with_report(report, 0, |r| r.transitive_triads())
}

/// Ratio and count for transitive slot 0..4 (030T, 120D, 120U, 300). The
/// ratio is NaN when no triad of that type exists.
///
/// # Safety
/// `report` must be live; out pointers may be null.
#[no_mangle]
pub unsafe extern "C" fn pb_report_type(
    report: *const PbReport,
    slot: u32,
    ratio: *mut f64,
    count: *mut u64,
) -> PbStatus {
    guard(|| {
        let r = handle(report, "report")?;
        let t = r
            .report
            .per_type
            .get(slot as usize)
            .ok_or_else(|| invalid(format!("transitive slot {slot} out of range 0..4")))?;
        debug_assert_eq!(Some(slot as usize), t.triad_type.transitive_slot());
        if let Some(out) = ratio.as_mut() {
            *out = t.ratio.unwrap_or(f64::NAN);
        }
        if let Some(out) = count.as_mut() {
            *out = t.triad_count;
        }
        Ok(())
    })
}

/// Full report as a JSON string; free it with [`pb_string_free`]. Null on
/// failure.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pb_report_to_json(report: *const PbReport) -> *mut c_char {
    let mut out = ptr::null_mut();
    guard(|| {
        let r = handle(report, "report")?;
        let json = serde_json::to_string(&r.report).map_err(Error::from)?;
        out = CString::new(json)
            .map_err(|e| invalid(e.to_string()))?
            .into_raw();
        Ok(())
    });
    out
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `report` must come from [`pb_balance_report`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pb_report_free(report: *mut PbReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}
