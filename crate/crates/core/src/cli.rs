//! Command-line front end.
//!
//! Exit codes: 0 success, 1 certification refuted, 2 invalid input or
//! precondition, 3 search exhausted, 4 capacity exceeded.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::density::{
    bd_estimate_sorted, bdm_window_sup, counting_profile, default_checkpoints, geometric_grid, log_profile, CountKind,
    Functional, ReciprocalIndex,
};
use crate::error::{capacity, validation, Error, Result};
use crate::intset::{IntervalSet, SetSpec, Window, HORIZON_CAP};
use crate::monad::{self, RatioCut};
use crate::productset::{verify_gap_report, ProductIndex};
use crate::progressions::{find_geo, find_gp3, find_power_ap};
use crate::report::{to_json, write_density_csv, write_gap_csv, DensityRow};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_EXHAUSTED: i32 = 3;
pub const EXIT_CAPACITY: i32 = 4;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Capacity(_) => EXIT_CAPACITY,
        Error::Validation(_) | Error::Domain(_) | Error::Io(_) => EXIT_INVALID,
    }
}

/// Parses `1000000`, `1e6` or `2.5e3`; the value must be a whole number.
pub fn parse_count(s: &str) -> std::result::Result<u64, String> {
    let t = s.trim().replace('_', "");
    if let Ok(v) = t.parse::<u64>() {
        return Ok(v);
    }
    let f: f64 = t.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if f.is_finite() && f >= 0.0 && f.fract() == 0.0 && f <= u64::MAX as f64 {
        Ok(f as u64)
    } else {
        Err(format!("`{s}` is not a whole number in range"))
    }
}

/// A set given as a path to a JSON document, inline JSON, or shorthand.
pub fn parse_set(s: &str) -> std::result::Result<SetSpec, String> {
    let path = Path::new(s);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{s}: {e}"))?;
        return serde_json::from_str::<SetSpec>(&text).map_err(|e| format!("{s}: {e}"));
    }
    s.parse::<SetSpec>().map_err(|e| e.to_string())
}

fn parse_ratio(s: &str) -> std::result::Result<RatioCut, String> {
    s.parse::<RatioCut>().map_err(|e| e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "densitylab", version, about = "Finite-horizon density, measure and progression experiments on integer sets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Counting, logarithmic and Banach-type density profiles.
    Density(DensityArgs),
    /// Harmonic window measure and its transformations.
    Monad {
        #[command(subcommand)]
        op: MonadOp,
    },
    /// Search for an n-approximate geometric progression.
    SearchGp(SearchGpArgs),
    /// Search for n-approximate m-th powers of an arithmetic progression.
    SearchPap(SearchPapArgs),
    /// Product-set gap witnesses for a list of n.
    Productset(ProductsetArgs),
    /// Exhaustive certificates.
    Certify {
        #[command(subcommand)]
        what: CertifyOp,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write the report here instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[arg(long, value_parser = parse_set)]
    pub set: SetSpec,
    #[arg(long, value_parser = parse_count, default_value = "1e6")]
    pub horizon: u64,
    /// Comma-separated checkpoints; default powers of two plus the horizon.
    #[arg(long, value_parser = parse_count, value_delimiter = ',')]
    pub checkpoints: Option<Vec<u64>>,
    /// Largest window ratio for the Banach-type profiles.
    #[arg(long, value_parser = parse_count)]
    pub n_max: Option<u64>,
    #[arg(long, default_value_t = std::f64::consts::SQRT_2)]
    pub grid_ratio: f64,
    /// Also emit the root-weighted window density with this exponent.
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct WindowArgs {
    #[arg(long, value_parser = parse_count, default_value = "1")]
    pub k: u64,
    /// Window span N; the window is [k, N k].
    #[arg(long = "span", visible_alias = "N", value_parser = parse_count)]
    pub span: u64,
}

impl WindowArgs {
    fn window(&self) -> Result<Window> {
        Window::new(self.k, self.span)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Side {
    Plus,
    Minus,
}

#[derive(Debug, Subcommand)]
pub enum MonadOp {
    /// Harmonic measure of a set inside the window.
    Nu {
        #[command(flatten)]
        w: WindowArgs,
        #[arg(long, value_parser = parse_set)]
        set: SetSpec,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Log-length measure of [a, b].
    Interval {
        #[command(flatten)]
        w: WindowArgs,
        #[arg(long, value_parser = parse_count)]
        a: u64,
        #[arg(long, value_parser = parse_count)]
        b: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Log-length estimate for a union of big intervals, next to the exact measure.
    Big {
        #[command(flatten)]
        w: WindowArgs,
        #[arg(long, value_parser = parse_set)]
        set: SetSpec,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Log coordinate of a point.
    Phi {
        #[command(flatten)]
        w: WindowArgs,
        #[arg(long, value_parser = parse_count)]
        a: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// The ratio class of a point, clipped to the window.
    Class {
        #[command(flatten)]
        w: WindowArgs,
        #[arg(long, value_parser = parse_ratio)]
        rho: RatioCut,
        #[arg(long, value_parser = parse_count)]
        a: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Measure before and after scaling by s.
    Scale {
        #[command(flatten)]
        w: WindowArgs,
        #[arg(long, value_parser = parse_set)]
        set: SetSpec,
        #[arg(long, value_parser = parse_count)]
        s: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Measure before and after u -> floor(N/u), in the window (1, N).
    Invert {
        #[arg(long = "span", visible_alias = "N", value_parser = parse_count)]
        span: u64,
        #[arg(long, value_parser = parse_set)]
        set: SetSpec,
        #[arg(long, value_parser = parse_count, default_value = "1000")]
        margin: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Local density of a set at x over a grid of ratios.
    Density {
        #[command(flatten)]
        w: WindowArgs,
        #[arg(long, value_parser = parse_ratio)]
        rho: RatioCut,
        #[arg(long, value_parser = parse_set)]
        set: SetSpec,
        #[arg(long, value_parser = parse_count)]
        x: u64,
        /// Comma-separated ratios, each larger than rho.
        #[arg(long, value_delimiter = ',', required = true)]
        r: Vec<f64>,
        #[arg(long, value_enum, default_value = "plus")]
        side: Side,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Root-weighted measure in the window [k, (ceil(k^(1/m)) + Nroot)^m].
    NuM {
        #[arg(long, value_parser = parse_count)]
        nroot: u64,
        #[arg(long)]
        m: u32,
        #[arg(long, value_parser = parse_count)]
        k: u64,
        #[arg(long, value_parser = parse_set)]
        set: SetSpec,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// (ceil(a^(1/m)) + c)^m.
    RootShift {
        #[arg(long, value_parser = parse_count)]
        a: u64,
        #[arg(long, value_parser = parse_count)]
        c: u64,
        #[arg(long)]
        m: u32,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Debug, Args)]
pub struct SearchGpArgs {
    #[arg(long, value_parser = parse_set)]
    pub set: SetSpec,
    #[arg(long, default_value_t = 3)]
    pub l: u32,
    #[arg(long, value_parser = parse_count, default_value = "2")]
    pub n: u64,
    /// Lower bound (exclusive) for both a and r.
    #[arg(long, value_parser = parse_count, default_value = "1")]
    pub min: u64,
    #[arg(long, value_parser = parse_count)]
    pub min_a: Option<u64>,
    #[arg(long, value_parser = parse_count)]
    pub min_r: Option<u64>,
    #[arg(long, value_parser = parse_count, default_value = "1e7")]
    pub horizon: u64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SearchPapArgs {
    #[arg(long, value_parser = parse_set)]
    pub set: SetSpec,
    #[arg(long, default_value_t = 2)]
    pub m: u32,
    #[arg(long, default_value_t = 3)]
    pub l: u32,
    #[arg(long, value_parser = parse_count, default_value = "2")]
    pub n: u64,
    #[arg(long, value_parser = parse_count, default_value = "1")]
    pub min_a: u64,
    #[arg(long, value_parser = parse_count, default_value = "1")]
    pub min_d: u64,
    #[arg(long, value_parser = parse_count, default_value = "1e7")]
    pub horizon: u64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ProductsetArgs {
    #[arg(long, value_parser = parse_set)]
    pub a: SetSpec,
    /// Second factor; defaults to the first.
    #[arg(long, value_parser = parse_set)]
    pub b: Option<SetSpec>,
    #[arg(long, value_parser = parse_count, value_delimiter = ',', default_value = "4,16,64,256")]
    pub n: Vec<u64>,
    #[arg(long, value_parser = parse_count, default_value = "1e7")]
    pub horizon: u64,
    #[arg(long, default_value_t = crate::productset::DEFAULT_GRID_RATIO)]
    pub grid_ratio: f64,
    /// Re-derive every report from scratch and fail on mismatch.
    #[arg(long)]
    pub verify: bool,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Subcommand)]
pub enum CertifyOp {
    /// No a < b in A with b^2 = a c for some c in A.
    GpFree {
        #[arg(long, value_parser = parse_set)]
        set: SetSpec,
        #[arg(long, value_parser = parse_count, default_value = "1e4")]
        horizon: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
}

fn emit(out: &OutputArgs, bytes: &[u8]) -> Result<()> {
    match &out.output {
        Some(path) => std::fs::write(path, bytes).map_err(Error::from_io),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes).and_then(|_| stdout.flush()).map_err(Error::from_io)
        }
    }
}

fn emit_json(out: &OutputArgs, value: &Value) -> Result<()> {
    let mut text = to_json(value)?;
    text.push('\n');
    emit(out, text.as_bytes())
}

fn spec_json(spec: &SetSpec) -> Value {
    serde_json::to_value(spec).unwrap_or(Value::Null)
}

fn interval_form(spec: &SetSpec) -> Result<IntervalSet> {
    match spec {
        SetSpec::Explicit(xs) => IntervalSet::from_sorted_elements(xs),
        other => other
            .as_intervals()
            .ok_or_else(|| validation(format!("{} sets are not supported here; give explicit elements or intervals", other.kind_name()))),
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("DENSITYLAB_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        // a second call in the same process keeps the existing pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    configure_threads();
    match execute(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("densitylab: {e}");
            exit_code(&e)
        }
    }
}

pub fn execute(cmd: &Command) -> Result<i32> {
    match cmd {
        Command::Density(a) => density(a),
        Command::Monad { op } => monad_op(op),
        Command::SearchGp(a) => search_gp(a),
        Command::SearchPap(a) => search_pap(a),
        Command::Productset(a) => productset(a),
        Command::Certify { what } => certify(what),
    }
}

fn density(args: &DensityArgs) -> Result<i32> {
    let h = args.horizon;
    if h < 2 {
        return Err(validation("horizon must be at least 2"));
    }
    // the window functionals materialize the set, so refuse before the profiles run
    if h > HORIZON_CAP {
        return Err(capacity(format!("horizon {h} exceeds {HORIZON_CAP}")));
    }
    if !(args.grid_ratio > 1.0) {
        return Err(validation("grid ratio must exceed 1"));
    }
    let checkpoints = args.checkpoints.clone().unwrap_or_else(|| default_checkpoints(h));
    let n_max = args.n_max.unwrap_or(h.min(1000));
    if n_max < 2 || n_max > h {
        return Err(validation("n-max must lie in [2, horizon]"));
    }
    let grid = geometric_grid(2, n_max, args.grid_ratio);
    let mut rows = Vec::new();
    let count = counting_profile(&args.set, CountKind::Upper, h, &checkpoints)?;
    let mut lower = count.clone();
    lower.functional = Functional::LowerCount;
    let log = log_profile(&args.set, h, &checkpoints.iter().copied().filter(|&n| n >= 2).collect::<Vec<_>>())?;
    let mut log_lower = log.clone();
    log_lower.functional = Functional::LowerLog;
    for p in [&count, &lower, &log, &log_lower] {
        rows.extend(p.running().into_iter().map(|c| DensityRow { functional: p.functional, m: None, n: c.n, k_star: None, value: c.value }));
    }
    let index = ReciprocalIndex::new(&args.set, h)?;
    for &n in &grid {
        let w = index.banach_window_sup(n);
        rows.push(DensityRow { functional: Functional::BanachLog, m: None, n, k_star: Some(w.k_star), value: w.value / (n as f64).ln() });
        if n < h {
            let b = bd_estimate_sorted(index.elements(), n, h);
            rows.push(DensityRow { functional: Functional::Banach, m: None, n, k_star: Some(b.k_star), value: b.value });
        }
    }
    if let Some(m) = args.m {
        for n in std::iter::once(1).chain(grid.iter().copied()) {
            match bdm_window_sup(&args.set, m, n, h) {
                Ok(w) => rows.push(DensityRow { functional: Functional::BdM, m: Some(m), n, k_star: Some(w.k_star), value: w.value }),
                Err(Error::Domain(_)) => break,
                Err(e) => return Err(e),
            }
        }
    }
    let params: Vec<(&str, String)> = vec![
        ("set", spec_json(&args.set).to_string()),
        ("horizon", h.to_string()),
        ("checkpoints", checkpoints.len().to_string()),
        ("n_max", n_max.to_string()),
        ("grid_ratio", args.grid_ratio.to_string()),
        ("m", args.m.map(|m| m.to_string()).unwrap_or_else(|| "none".into())),
    ];
    match args.format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_density_csv(&mut buf, &params, &mut rows)?;
            emit(&args.out, &buf)?;
        }
        Format::Json => {
            rows.sort_by_key(|a| (a.functional, a.n, a.m));
            let params: serde_json::Map<String, Value> = params.into_iter().map(|(k, v)| (k.to_string(), Value::String(v))).collect();
            emit_json(&args.out, &json!({ "params": params, "rows": rows }))?;
        }
    }
    Ok(EXIT_OK)
}

fn window_report(w: &Window, value: f64, error_bound: f64, params: Value) -> Value {
    json!({ "window": w, "value": value, "error_bound": error_bound, "params": params })
}

fn monad_op(op: &MonadOp) -> Result<i32> {
    let (out, report) = match op {
        MonadOp::Nu { w, set, out } => {
            let win = w.window()?;
            let r = monad::nu(&win, &interval_form(set)?)?;
            (out, window_report(&win, r.value, r.error_bound, json!({ "op": "nu", "set": spec_json(set) })))
        }
        MonadOp::Interval { w, a, b, out } => {
            let win = w.window()?;
            let v = monad::interval_measure(&win, *a, *b)?;
            (out, window_report(&win, v, 0.0, json!({ "op": "interval", "a": a, "b": b })))
        }
        MonadOp::Big { w, set, out } => {
            let win = w.window()?;
            let s = interval_form(set)?;
            let est = monad::big_estimate(&win, &s)?;
            let exact = monad::nu(&win, &s)?;
            let mut r = window_report(&win, est, monad::big_estimate_tolerance(&s), json!({ "op": "big", "set": spec_json(set) }));
            r["nu"] = json!(exact.value);
            (out, r)
        }
        MonadOp::Phi { w, a, out } => {
            let win = w.window()?;
            (out, window_report(&win, monad::phi(&win, *a)?, 0.0, json!({ "op": "phi", "a": a })))
        }
        MonadOp::Class { w, rho, a, out } => {
            let win = w.window()?;
            let (lo, hi) = monad::monad_of(&win, rho, *a)?;
            (out, json!({ "window": win, "class": [lo, hi], "params": { "op": "class", "rho": rho.to_string(), "a": a } }))
        }
        MonadOp::Scale { w, set, s, out } => {
            let win = w.window()?;
            let c = monad::scale_check(&win, &interval_form(set)?, *s)?;
            (out, json!({ "window": win, "check": c, "params": { "op": "scale", "s": s, "set": spec_json(set) } }))
        }
        MonadOp::Invert { span, set, margin, out } => {
            let win = Window::new(1, *span)?;
            let c = monad::inversion_check(&win, &interval_form(set)?, *margin)?;
            (out, json!({ "window": win, "check": c, "params": { "op": "invert", "margin": margin, "set": spec_json(set) } }))
        }
        MonadOp::Density { w, rho, set, x, r, side, out } => {
            let win = w.window()?;
            let s = interval_form(set)?;
            let local = match side {
                Side::Plus => monad::density_plus(&win, rho, &s, *x, r)?,
                Side::Minus => monad::density_minus(&win, rho, &s, *x, r)?,
            };
            let side_name = if *side == Side::Plus { "plus" } else { "minus" };
            let params = json!({ "op": "density", "side": side_name, "rho": rho.to_string(), "x": x, "set": spec_json(set) });
            (out, json!({ "window": win, "local": local, "estimate": monad::density_estimate(&local, 1), "params": params }))
        }
        MonadOp::NuM { nroot, m, k, set, out } => {
            let v = monad::nu_m_intervals(*nroot, *m, &interval_form(set)?, *k)?;
            let end = monad::root_window_end(*nroot, *m, *k)?;
            (out, json!({ "window": [k, end], "value": v, "params": { "op": "nu_m", "nroot": nroot, "m": m, "set": spec_json(set) } }))
        }
        MonadOp::RootShift { a, c, m, out } => {
            (out, json!({ "value": monad::root_shift(*a, *c, *m)?, "params": { "op": "root_shift", "a": a, "c": c, "m": m } }))
        }
    };
    emit_json(out, &report)?;
    Ok(EXIT_OK)
}

fn search_gp(args: &SearchGpArgs) -> Result<i32> {
    let min_a = args.min_a.unwrap_or(args.min);
    let min_r = args.min_r.unwrap_or(args.min);
    let found = find_geo(&args.set, args.l, args.n, min_a, min_r, args.horizon)?;
    let params = json!({ "set": spec_json(&args.set), "l": args.l, "n": args.n, "min_a": min_a, "min_r": min_r, "horizon": args.horizon });
    emit_json(&args.out, &json!({ "found": found.is_some(), "witness": found, "params": params }))?;
    Ok(if found.is_some() { EXIT_OK } else { EXIT_EXHAUSTED })
}

fn search_pap(args: &SearchPapArgs) -> Result<i32> {
    let found = find_power_ap(&args.set, args.m, args.l, args.n, args.min_a, args.min_d, args.horizon)?;
    let params = json!({
        "set": spec_json(&args.set), "m": args.m, "l": args.l, "n": args.n,
        "min_a": args.min_a, "min_d": args.min_d, "horizon": args.horizon
    });
    emit_json(&args.out, &json!({ "found": found.is_some(), "witness": found, "params": params }))?;
    Ok(if found.is_some() { EXIT_OK } else { EXIT_EXHAUSTED })
}

fn productset(args: &ProductsetArgs) -> Result<i32> {
    let b = args.b.clone().unwrap_or_else(|| args.a.clone());
    if let Some(&n) = args.n.iter().find(|&&n| n < 2 || n > args.horizon) {
        return Err(validation(format!("n={n} must lie in [2, horizon]")));
    }
    let index = ProductIndex::new(&args.a, &b, args.horizon)?;
    let mut reports = Vec::new();
    for &n in &args.n {
        if let Some(r) = index.gap_witness(n, args.grid_ratio)? {
            if args.verify && !verify_gap_report(&args.a, &b, &r)? {
                return Err(validation(format!("report for n={n} failed re-verification")));
            }
            reports.push(r);
        }
    }
    let params: Vec<(&str, String)> = vec![
        ("a", spec_json(&args.a).to_string()),
        ("b", spec_json(&b).to_string()),
        ("horizon", args.horizon.to_string()),
        ("grid_ratio", args.grid_ratio.to_string()),
        ("verified", args.verify.to_string()),
    ];
    match args.format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_gap_csv(&mut buf, &params, &reports)?;
            emit(&args.out, &buf)?;
        }
        Format::Json => {
            let params: serde_json::Map<String, Value> = params.into_iter().map(|(k, v)| (k.to_string(), Value::String(v))).collect();
            emit_json(&args.out, &json!({ "params": params, "reports": reports }))?;
        }
    }
    Ok(if reports.is_empty() { EXIT_EXHAUSTED } else { EXIT_OK })
}

fn certify(op: &CertifyOp) -> Result<i32> {
    match op {
        CertifyOp::GpFree { set, horizon, out } => {
            let witness = find_gp3(set, *horizon)?;
            let params = json!({ "set": spec_json(set), "horizon": horizon });
            emit_json(out, &json!({ "certified": witness.is_none(), "witness": witness, "params": params }))?;
            Ok(if witness.is_none() { EXIT_OK } else { EXIT_REFUTED })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_accept_scientific_notation() {
        assert_eq!(parse_count("1e7"), Ok(10_000_000));
        assert_eq!(parse_count("2.5e3"), Ok(2500));
        assert_eq!(parse_count("1_000"), Ok(1000));
        assert!(parse_count("1.5").is_err());
        assert!(parse_count("-3").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&validation("x")), EXIT_INVALID);
        assert_eq!(exit_code(&crate::error::capacity("x")), EXIT_CAPACITY);
        assert_eq!(run(["densitylab", "density"]), EXIT_INVALID);
        assert_eq!(run(["densitylab", "--help"]), EXIT_OK);
    }
}
