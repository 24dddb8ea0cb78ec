//! Command implementations behind the `sliceforge` binary: domain ingestion,
//! classification runs, formula verification suites, extension queries, chain
//! queries and the built-in classification table. Commands read and write
//! JSON only; identical configuration and seed yield byte-identical reports.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::algebra::Quaternion;
use crate::domains::{builtin, AxialDomain, DomainConfig, BUILTIN_NAMES, DEFAULT_N_LAT};
use crate::error::{Error, Result};
use crate::extension::extend_global;
use crate::hinge::{chain_find, classify, hinge_closure, is_hinged, GOLDEN_TABLE};
use crate::planar::Grid;
use crate::report::{
    library_version, ChainReport, ClassificationReport, ExtendReport, RegionDump, Resolution,
    TableReport, TableRow, VerifyReport,
};
use crate::slicefun::{DomainDescriptor, FunctionSpec, SliceFunctionHandle};
use crate::verify;

/// Environment variable capping the worker count of parallel drivers.
pub const THREADS_ENV: &str = "SLICE_FORGE_THREADS";

/// One run's configuration; the seed fully determines every randomized
/// sample set.
#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    pub domain: Option<String>,
    pub function: Option<String>,
    pub h: Option<f64>,
    pub n_lat: Option<usize>,
    pub tol: Option<f64>,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    fn resolution(&self) -> Result<(Grid, usize)> {
        let h = self.h.unwrap_or(1.0 / 16.0);
        if !(1.0 / 64.0..=0.25).contains(&h) {
            return Err(Error::InvalidConfig(format!(
                "h must lie in [1/64, 1/4] (got {h})"
            )));
        }
        let n_lat = self.n_lat.unwrap_or(DEFAULT_N_LAT);
        if !(33..=513).contains(&n_lat) || n_lat % 2 == 0 {
            return Err(Error::InvalidConfig(format!(
                "n_lat must be odd in [33, 513] (got {n_lat})"
            )));
        }
        Ok((Grid::standard_with_h(h)?, n_lat))
    }

    fn domain(&self) -> Result<Arc<AxialDomain>> {
        let (grid, n_lat) = self.resolution()?;
        let name = self
            .domain
            .as_deref()
            .ok_or_else(|| Error::InvalidConfig("missing --domain".into()))?;
        resolve_domain(name, grid, n_lat)
    }

    fn function(&self) -> Result<SliceFunctionHandle> {
        let spec = self
            .function
            .as_deref()
            .ok_or_else(|| Error::InvalidConfig("missing --fn".into()))?;
        parse_function_spec(spec)
    }
}

/// Resolves a domain argument: a built-in name (including `ball(c,R)`) or a
/// path to a JSON domain configuration.
pub fn resolve_domain(name: &str, grid: Grid, n_lat: usize) -> Result<Arc<AxialDomain>> {
    if BUILTIN_NAMES.contains(&name) || name.starts_with("ball(") {
        return builtin(name, grid, n_lat);
    }
    let path = Path::new(name);
    if path.exists() {
        let text = std::fs::read_to_string(path)?;
        let config: DomainConfig = serde_json::from_str(&text)?;
        let dom = config.build(grid, n_lat)?;
        return Ok(Arc::new(
            Arc::try_unwrap(dom)
                .unwrap_or_else(|d| (*d).clone())
                .with_name(name),
        ));
    }
    Err(Error::InvalidConfig(format!(
        "unknown domain `{name}` (not a built-in, not a file)"
    )))
}

/// Parses a function argument: inline JSON, a JSON file path, or the
/// shorthand `x`, `x^2`, ..., `x^9` for monomials.
pub fn parse_function_spec(spec: &str) -> Result<SliceFunctionHandle> {
    let trimmed = spec.trim();
    if trimmed.starts_with('{') {
        let parsed: FunctionSpec = serde_json::from_str(trimmed)?;
        return parsed.build();
    }
    if trimmed == "x" {
        return Ok(SliceFunctionHandle::monomial(1));
    }
    if let Some(rest) = trimmed.strip_prefix("x^") {
        if let Ok(n) = rest.parse::<usize>() {
            return Ok(SliceFunctionHandle::monomial(n));
        }
    }
    let path = Path::new(trimmed);
    if path.exists() {
        let text = std::fs::read_to_string(path)?;
        let parsed: FunctionSpec = serde_json::from_str(&text)?;
        return parsed.build();
    }
    Err(Error::InvalidConfig(format!(
        "cannot parse function `{spec}`"
    )))
}

/// Installs the global worker pool from `SLICE_FORGE_THREADS`, when set.
pub fn init_threads() {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        if let Ok(n) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
}

/// Prints to stdout, tolerating a closed pipe (e.g. `sliceforge ... | head`).
fn print_out(payload: &str) {
    use std::io::Write;
    let _ = std::io::stdout().write_all(payload.as_bytes());
}

fn emit(out: &Option<PathBuf>, payload: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, payload)?,
        None => print_out(payload),
    }
    Ok(())
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

/// Classifies a domain and writes the combined report. The exit code ignores
/// the verdicts: 0 on success, 2 on configuration errors, 3 when the domain
/// is not speared at this resolution.
pub fn cmd_classify(cfg: &RunConfig) -> i32 {
    match run_classify(cfg) {
        Ok(()) => 0,
        Err(Error::NotSpeared { latitude }) => {
            eprintln!("domain is not speared (latitude {latitude})");
            3
        }
        Err(Error::InternalInconsistency(msg)) => {
            eprintln!("classifier inconsistency: {msg}");
            1
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn run_classify(cfg: &RunConfig) -> Result<()> {
    let (grid, n_lat) = cfg.resolution()?;
    let dom = cfg.domain()?;
    let mut report = classification_report(&dom, grid, n_lat)?;
    report.seed = cfg.seed;
    emit(&cfg.out, &to_json(&report))
}

/// The full classification payload for one domain.
pub fn classification_report(
    dom: &AxialDomain,
    grid: Grid,
    n_lat: usize,
) -> Result<ClassificationReport> {
    let class = classify(dom)?;
    let (speared, _) = dom.is_speared();
    let (spine, core) = dom.spine_core();
    Ok(ClassificationReport {
        domain: dom.name().unwrap_or("custom").to_string(),
        version: library_version().to_string(),
        resolution: Resolution { h: grid.h, n_lat },
        seed: 0,
        speared,
        slice_domain: dom.is_slice_domain(),
        spear_simple: class.spear_simple,
        s_connected: class.s_connected,
        main_sail: class.main_sail_latitude,
        hinged: class.hinged,
        witnesses: class.witnesses,
        spine: RegionDump::from_region(&spine),
        core: RegionDump::from_region(&core),
    })
}

/// Classifies the eight built-ins and renders the check/cross table. Exit 0
/// iff all 32 cells match the embedded golden table; mismatching cells are
/// listed on exit 1.
pub fn cmd_table1(cfg: &RunConfig) -> i32 {
    match run_table1(cfg) {
        Ok(report) => {
            if report.golden_match {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

pub fn run_table1(cfg: &RunConfig) -> Result<TableReport> {
    use rayon::prelude::*;
    let (grid, n_lat) = cfg.resolution()?;
    let rows: Result<Vec<TableRow>> = GOLDEN_TABLE
        .par_iter()
        .map(|(name, _)| {
            let dom = builtin(name, grid, n_lat)?;
            let class = classify(&dom)?;
            let flags = class.flags();
            Ok(TableRow {
                domain: name.to_string(),
                spear_simple: flags[0],
                s_connected: flags[1],
                main_sail: flags[2],
                hinged: flags[3],
            })
        })
        .collect();
    let rows = rows?;
    let mut mismatches = Vec::new();
    for (row, (name, expected)) in rows.iter().zip(GOLDEN_TABLE.iter()) {
        let got = [row.spear_simple, row.s_connected, row.main_sail, row.hinged];
        for (c, col) in ["spear-simple", "s-connected", "main-sail", "hinged"]
            .iter()
            .enumerate()
        {
            if got[c] != expected[c] {
                mismatches.push(format!(
                    "{name}/{col}: got {}, expected {}",
                    got[c], expected[c]
                ));
            }
        }
    }
    let report = TableReport {
        version: library_version().to_string(),
        resolution: Resolution { h: grid.h, n_lat },
        seed: cfg.seed,
        rows,
        golden_match: mismatches.is_empty(),
        mismatches,
    };
    let mut rendered = String::new();
    rendered.push_str("domain    spear-simple  s-connected  main-sail  hinged\n");
    for row in &report.rows {
        let mark = |b: bool| if b { "yes" } else { " - " };
        rendered.push_str(&format!(
            "{:<9} {:^12}  {:^11}  {:^9}  {:^6}\n",
            row.domain,
            mark(row.spear_simple),
            mark(row.s_connected),
            mark(row.main_sail),
            mark(row.hinged)
        ));
    }
    if !report.golden_match {
        rendered.push_str("MISMATCHES:\n");
        for m in &report.mismatches {
            rendered.push_str(&format!("  {m}\n"));
        }
    }
    match &cfg.out {
        Some(path) => std::fs::write(path, to_json(&report))?,
        None => print_out(&rendered),
    }
    Ok(report)
}

/// Runs one named verification suite at the configured seed. Exit 0 iff all
/// checks pass their tolerance; the report carries the worst sample of each.
pub fn cmd_verify(cfg: &RunConfig, suite: &str) -> i32 {
    match run_verify(cfg, suite) {
        Ok(report) => {
            if report.pass {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

pub fn run_verify(cfg: &RunConfig, suite: &str) -> Result<VerifyReport> {
    // a custom --fn is prepended as its own single-function representation
    // check inside the rep suite; the named suites are otherwise self-seeded
    let report = match suite {
        "rep" => verify::suite_rep(cfg.seed, 100, 50),
        "stem" => verify::suite_stem(cfg.seed, 100),
        "spherical" => verify::suite_spherical(cfg.seed, 200),
        "dbar" => verify::suite_dbar(cfg.seed, 40),
        "differential" => verify::suite_differential(cfg.seed, 100),
        other => {
            return Err(Error::InvalidConfig(format!(
                "unknown suite `{other}` (expected rep|stem|spherical|dbar|differential)"
            )))
        }
    };
    emit(&cfg.out, &to_json(&report))?;
    Ok(report)
}

/// Evaluates the global extension at a point of the symmetric completion.
/// Exit 3 when the domain fails the hinged check, 4 when the point's trace
/// leaves the completion.
pub fn cmd_extend(cfg: &RunConfig, point: [f64; 4]) -> i32 {
    match run_extend(cfg, point) {
        Ok(report) => {
            emit(&cfg.out, &to_json(&report)).map(|_| 0).unwrap_or(2)
        }
        Err(Error::OutsideCompletion) => {
            eprintln!("point is outside the symmetric completion");
            4
        }
        Err(Error::NotSpeared { .. }) | Err(Error::InternalInconsistency(_)) => 3,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

pub fn run_extend(cfg: &RunConfig, point: [f64; 4]) -> Result<ExtendReport> {
    let (grid, n_lat) = cfg.resolution()?;
    let dom = cfg.domain()?;
    let mut closure = hinge_closure(&dom)?;
    let (hinged, _) = is_hinged(&dom, &mut closure);
    if !hinged {
        return Err(Error::InternalInconsistency(
            "domain is not hinged at this resolution".into(),
        ));
    }
    let f = cfg
        .function()?
        .restrict(DomainDescriptor::Axial(dom.clone()));
    let tol = cfg.tol.unwrap_or(1e-9);
    let x = Quaternion::from_array(point);
    let ext = extend_global(&f, x, tol)?;
    Ok(ExtendReport {
        domain: dom.name().unwrap_or("custom").to_string(),
        version: library_version().to_string(),
        resolution: Resolution { h: grid.h, n_lat },
        point,
        value: ext.value.as_array(),
        consistency_spread: ext.consistency_spread,
        tolerance: tol,
    })
}

/// Finds a chain certificate between two domain points, or reports that they
/// are not equivalent at this resolution. Exit 2 when a point lies outside
/// the domain.
pub fn cmd_chain(cfg: &RunConfig, from: [f64; 4], to: [f64; 4]) -> i32 {
    match run_chain(cfg, from, to) {
        Ok(report) => {
            if !report.equivalent {
                eprintln!("not equivalent at this resolution");
            }
            emit(&cfg.out, &to_json(&report)).map(|_| 0).unwrap_or(2)
        }
        Err(Error::PointOutsideDomain) => {
            eprintln!("a point lies outside the domain");
            2
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

pub fn run_chain(cfg: &RunConfig, from: [f64; 4], to: [f64; 4]) -> Result<ChainReport> {
    let (grid, n_lat) = cfg.resolution()?;
    let dom = cfg.domain()?;
    let closure = hinge_closure(&dom)?;
    let cert = chain_find(
        &dom,
        &closure,
        Quaternion::from_array(from),
        Quaternion::from_array(to),
    )?;
    Ok(ChainReport {
        domain: dom.name().unwrap_or("custom").to_string(),
        version: library_version().to_string(),
        resolution: Resolution { h: grid.h, n_lat },
        from,
        to,
        equivalent: cert.is_some(),
        certificate: cert,
    })
}

/// Lists the built-in domain names.
pub fn cmd_domains_list() -> i32 {
    let mut listing = String::new();
    for name in BUILTIN_NAMES {
        listing.push_str(name);
        listing.push('\n');
    }
    listing.push_str("ball(c,R)\n");
    print_out(&listing);
    0
}
