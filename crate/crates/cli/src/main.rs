mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use selfsim::acceptance;
use selfsim::algebra::GasParams;
use selfsim::error::Error;
use selfsim::rigor::Interval;
use selfsim::series::{self, Mode};
use selfsim::solver::{self, ShootOptions, Window};
use selfsim::verify::{self, Chart, ParamBox, Status};

use config::RunConfig;
use output::{write_csv, write_json, Report};

const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(name = "selfsim", version, about = "Interval verification, series and shooting for self-similar implosion profiles")]
struct Cli {
    #[command(flatten)]
    global: Global,
    /// Run the fast acceptance subset and exit.
    #[arg(long)]
    seed_check: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args, Debug, Clone, Default)]
struct Global {
    /// TOML file with defaults for bits, workers, output_dir and log_level.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Working precision in bits.
    #[arg(long, global = true)]
    bits: Option<u32>,
    /// Worker threads for branch and bound.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Directory for default output paths.
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,
    /// error, warn, info, debug or trace.
    #[arg(long, global = true)]
    log_level: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a registry task by branch and bound.
    Verify(VerifyArgs),
    /// Locate r^(n) by shooting.
    FindR(FindRArgs),
    /// Integrate and export a profile.
    Profile(ProfileArgs),
    /// Sample the phase portrait.
    Phase(PhaseArgs),
    /// Export the Taylor coefficients at the sonic point.
    Coeffs(CoeffsArgs),
    /// High-precision coefficient run at gamma = 7/5, r = r*.
    Longrun(LongrunArgs),
    /// Print the registry task ids.
    ListTasks,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    task: String,
    /// x0,x1,y0,y1 in the chart coordinates.
    #[arg(long, conflicts_with_all = ["full", "gamma_min"])]
    region: Option<String>,
    #[arg(long, value_parser = ["raw", "tilde", "inv"], requires = "region")]
    chart: Option<String>,
    #[arg(long)]
    tol: Option<f64>,
    /// Use the task's full region instead of its smoke region.
    #[arg(long)]
    full: bool,
    /// Raw-chart gamma range, with r in [1, 2].
    #[arg(long, requires = "gamma_max", conflicts_with = "full")]
    gamma_min: Option<String>,
    #[arg(long, requires = "gamma_min")]
    gamma_max: Option<String>,
    #[arg(long)]
    max_boxes: Option<usize>,
    /// Also write the report here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FindRArgs {
    #[arg(long)]
    gamma: f64,
    #[arg(long)]
    n: u32,
    /// Target |e(r)|.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 0.5)]
    zeta_match: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ProfileArgs {
    #[arg(long)]
    gamma: f64,
    #[arg(long)]
    r: f64,
    #[arg(long, default_value_t = 10.0)]
    xi_max: f64,
    #[arg(long, default_value_t = 0.5)]
    zeta_match: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PhaseArgs {
    #[arg(long)]
    gamma: f64,
    #[arg(long)]
    r: f64,
    /// Half-width of a square window, or w_min,w_max,z_min,z_max.
    #[arg(long, default_value = "3", allow_hyphen_values = true)]
    window: String,
    #[arg(long, default_value_t = 25)]
    grid: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CoeffsArgs {
    /// Decimal literal or ratio like 7/5, enclosed rigorously.
    #[arg(long)]
    gamma: String,
    #[arg(long)]
    r: String,
    #[arg(long, default_value_t = 20)]
    n: usize,
    /// raw, split, or normalized:J.
    #[arg(long, default_value = "raw")]
    mode: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct LongrunArgs {
    #[arg(long, default_value_t = 2000)]
    n: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let cfg = match RunConfig::resolve(&cli.global) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    env_logger::Builder::new().parse_filters(&cfg.log_level).init();
    let result = if cli.seed_check {
        Ok(seed_check())
    } else {
        match cli.command {
            Some(cmd) => dispatch(cmd, &cfg),
            None => {
                eprintln!("error: a subcommand or --seed-check is required (see --help)");
                return ExitCode::from(EXIT_USAGE);
            }
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let usage = e
                .downcast_ref::<Error>()
                .is_some_and(|e| matches!(e, Error::InvalidArgument(_) | Error::UnknownTask(_) | Error::Parse(_) | Error::PrecisionTooLow(_)));
            ExitCode::from(if usage { EXIT_USAGE } else { 1 })
        }
    }
}

fn dispatch(cmd: Command, cfg: &RunConfig) -> anyhow::Result<u8> {
    match cmd {
        Command::Verify(a) => run_verify(a, cfg),
        Command::FindR(a) => run_find_r(a, cfg),
        Command::Profile(a) => run_profile(a, cfg),
        Command::Phase(a) => run_phase(a, cfg),
        Command::Coeffs(a) => run_coeffs(a, cfg),
        Command::Longrun(a) => run_longrun(a, cfg),
        Command::ListTasks => {
            for t in verify::lemma_registry() {
                println!("{:<28} {}", t.id, t.description);
            }
            Ok(0)
        }
    }
}

fn seed_check() -> u8 {
    let mut failed = 0;
    for id in acceptance::FAST {
        match acceptance::run(id) {
            Ok(out) => {
                println!("{out}");
                failed += !out.pass as usize;
            }
            Err(e) => {
                println!("criterion {id:>2} FAIL {e}");
                failed += 1;
            }
        }
    }
    (failed > 0) as u8
}

fn chart_of(s: &str) -> anyhow::Result<Chart> {
    Ok(Chart::parse(s)?)
}

fn run_verify(a: VerifyArgs, cfg: &RunConfig) -> anyhow::Result<u8> {
    let start = Instant::now();
    let mut task = verify::find_task(&a.task)?;
    let bits = cfg.bits.unwrap_or(task.precision_bits);
    if let Some(s) = &a.region {
        let chart = match &a.chart {
            Some(c) => chart_of(c)?,
            None => task.region.chart,
        };
        task = task.with_region(ParamBox::parse(chart, s, bits)?);
    } else if let (Some(lo), Some(hi)) = (&a.gamma_min, &a.gamma_max) {
        let region = format!("{lo},{hi},1,2");
        task = task.with_region(ParamBox::parse(Chart::Raw, &region, bits)?);
    } else if a.full {
        let full = task.full_region.clone().unwrap_or_else(|| task.region.clone());
        task = task.with_region(full);
    }
    task = task.with_precision(bits);
    if let Some(t) = a.tol {
        task = task.with_tol(t);
    }
    if let Some(m) = a.max_boxes {
        task = task.with_max_boxes(m);
    }
    log::info!("verifying {} on {:?}", task.id, task.region);
    let rep = verify::branch_and_bound_with_workers(&task, cfg.workers)?;
    let (x, y) = (task.region.x.to_decimal_strings(20), task.region.y.to_decimal_strings(20));
    let mut result = json!({
        "task": rep.task,
        "status": rep.status.label(),
        "boxes": rep.boxes_processed,
        "depth": rep.max_depth,
        "escalations": rep.escalations,
        "precision_bits": rep.precision_bits,
    });
    match &rep.status {
        Status::Proved => {}
        Status::Failed { counterexample } => result["counterexample"] = serde_json::to_value(counterexample)?,
        Status::ToleranceExhausted { at, budget_hit } => {
            result["exhausted_at"] = serde_json::to_value(at)?;
            result["budget_hit"] = json!(budget_hit);
        }
    }
    let config = json!({
        "task": a.task,
        "chart": task.region.chart,
        "region": { "x": x, "y": y },
        "bits": bits,
        "tol": task.tol,
        "max_boxes": task.max_boxes,
        "workers": cfg.workers,
    });
    let report = Report::new("verify", config, result, start);
    println!("{}", serde_json::to_string_pretty(&report)?);
    if let Some(p) = &a.out {
        write_json(&cfg.path(p), &report)?;
    }
    Ok(rep.status.exit_code() as u8)
}

fn shoot_options(tol: f64, zeta_match: f64) -> ShootOptions {
    ShootOptions { tol, zeta_match, ..ShootOptions::default() }
}

fn run_find_r(a: FindRArgs, cfg: &RunConfig) -> anyhow::Result<u8> {
    let start = Instant::now();
    let opts = shoot_options(a.tol, a.zeta_match);
    let res = solver::shoot(a.gamma, a.n, &opts)?;
    println!("{:.12}", res.r_found);
    let config = json!({ "gamma": a.gamma, "n": a.n, "options": opts });
    let report = Report::new("find-r", config, serde_json::to_value(&res)?, start);
    let path = cfg.path_or(&a.out, "find_r.json");
    write_json(&path, &report)?;
    log::info!("wrote {}", path.display());
    Ok(0)
}

#[derive(serde::Serialize)]
struct ProfileRow {
    xi: f64,
    #[serde(rename = "W")]
    w: Option<f64>,
    #[serde(rename = "Z")]
    z: Option<f64>,
    zeta: f64,
    #[serde(rename = "U")]
    u: f64,
    #[serde(rename = "S")]
    s: f64,
}

fn run_profile(a: ProfileArgs, cfg: &RunConfig) -> anyhow::Result<u8> {
    let opts = shoot_options(ShootOptions::default().tol, a.zeta_match);
    let (p, e) = solver::assemble_profile(a.gamma, a.r, a.xi_max, &opts)?;
    let ph = solver::to_physical(&p);
    // The physical grid may carry an extra leading row at ζ = 0.
    let lead = ph.zeta.len() - p.len();
    let mut rows = Vec::with_capacity(ph.zeta.len());
    for i in 0..ph.zeta.len() {
        let j = i.checked_sub(lead);
        rows.push(ProfileRow {
            xi: j.map_or(f64::NEG_INFINITY, |j| p.xi[j]),
            w: j.map(|j| p.w[j]),
            z: j.map(|j| p.z[j]),
            zeta: ph.zeta[i],
            u: ph.ubar[i],
            s: ph.sbar[i],
        });
    }
    let path = cfg.path_or(&a.out, "profile.csv");
    write_csv(&path, &rows)?;
    println!("{} rows, e = {e:.3e}, amplitude {:?}, stop {:?}", rows.len(), p.amplitude, p.stop);
    Ok(0)
}

fn parse_window(s: &str) -> anyhow::Result<Window> {
    let v: Vec<f64> = s.split(',').map(|x| x.trim().parse::<f64>()).collect::<Result<_, _>>()?;
    match v.as_slice() {
        [h] if *h > 0.0 => Ok(Window::square(*h)),
        [a, b, c, d] if a < b && c < d => Ok(Window { w_min: *a, w_max: *b, z_min: *c, z_max: *d }),
        _ => Err(Error::InvalidArgument(format!("bad window {s:?}")).into()),
    }
}

#[derive(serde::Serialize)]
struct PhaseRow<'a> {
    kind: &'a str,
    name: &'a str,
    piece: usize,
    w: f64,
    z: f64,
    dw: Option<f64>,
    dz: Option<f64>,
}

fn run_phase(a: PhaseArgs, cfg: &RunConfig) -> anyhow::Result<u8> {
    let win = parse_window(&a.window)?;
    let pp = solver::phase_portrait(a.gamma, a.r, win, a.grid)?;
    let mut rows = Vec::new();
    for ar in &pp.arrows {
        rows.push(PhaseRow { kind: "arrow", name: "", piece: 0, w: ar.w, z: ar.z, dw: Some(ar.dw), dz: Some(ar.dz) });
    }
    for nc in &pp.nullclines {
        for (k, piece) in nc.pieces.iter().enumerate() {
            for &(w, z) in piece {
                rows.push(PhaseRow { kind: "nullcline", name: nc.name, piece: k, w, z, dw: None, dz: None });
            }
        }
    }
    for m in &pp.equilibria {
        rows.push(PhaseRow { kind: "marker", name: m.name, piece: 0, w: m.w, z: m.z, dw: None, dz: None });
    }
    let path = cfg.path_or(&a.out, "portrait.csv");
    write_csv(&path, &rows)?;
    println!("{} arrows, {} nullclines, {} markers", pp.arrows.len(), pp.nullclines.len(), pp.equilibria.len());
    Ok(0)
}

fn parse_mode(s: &str) -> anyhow::Result<Mode> {
    match s {
        "raw" => Ok(Mode::Raw),
        "split" => Ok(Mode::SingularSplit),
        _ => match s.strip_prefix("normalized:").map(str::parse::<usize>) {
            Some(Ok(j)) => Ok(Mode::Normalized(j)),
            _ => Err(Error::InvalidArgument(format!("mode must be raw, split or normalized:J, got {s:?}")).into()),
        },
    }
}

#[derive(serde::Serialize)]
struct CoeffRow {
    n: usize,
    #[serde(rename = "W_lo")]
    w_lo: String,
    #[serde(rename = "W_hi")]
    w_hi: String,
    #[serde(rename = "Z_lo")]
    z_lo: String,
    #[serde(rename = "Z_hi")]
    z_hi: String,
    bits: u32,
}

/// Enough digits to round-trip a `bits`-bit significand.
fn digits_for(bits: u32) -> usize {
    (bits as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2
}

/// A decimal literal or an integer ratio such as 7/5.
fn parse_exact(s: &str, bits: u32) -> anyhow::Result<Interval> {
    match s.split_once('/') {
        Some((a, b)) => {
            let int = |t: &str| t.trim().parse::<i64>().map_err(|_| Error::Parse(s.to_string()));
            let (a, b) = (int(a)?, int(b)?);
            if b == 0 {
                return Err(Error::InvalidArgument(format!("zero denominator in {s:?}")).into());
            }
            Ok(Interval::ratio(a, b, bits))
        }
        None => Ok(Interval::decimal(s, bits)?),
    }
}

fn run_coeffs(a: CoeffsArgs, cfg: &RunConfig) -> anyhow::Result<u8> {
    let bits = cfg.bits.unwrap_or(128);
    let p = GasParams::new(parse_exact(&a.gamma, bits)?, parse_exact(&a.r, bits)?);
    let t = series::coeffs_at_ps(&p, a.n, parse_mode(&a.mode)?)?;
    let d = digits_for(bits);
    let rows: Vec<CoeffRow> = t
        .rows()
        .map(|(n, w, z)| {
            let (w_lo, w_hi) = w.to_decimal_strings(d);
            let (z_lo, z_hi) = z.to_decimal_strings(d);
            CoeffRow { n, w_lo, w_hi, z_lo, z_hi, bits }
        })
        .collect();
    let path = cfg.path_or(&a.out, "coeffs.csv");
    write_csv(&path, &rows)?;
    println!("{} coefficients at {bits} bits written to {}", rows.len(), path.display());
    Ok(0)
}

fn run_longrun(a: LongrunArgs, cfg: &RunConfig) -> anyhow::Result<u8> {
    let start = Instant::now();
    let bits = cfg.bits.unwrap_or(512);
    // Ratios up to index n need Z_{n+1}.
    let run = series::longrun_z(bits, a.n + 1)?;
    let checks = run.checks()?;
    let last = run.table.z[a.n].to_decimal_strings(30);
    let ok = checks.w_over_z_failure.is_none() && checks.ratio_failure.is_none() && checks.z10000_ok != Some(false);
    let result = json!({
        "checks": checks,
        "z_last": { "index": a.n, "lo": last.0, "hi": last.1 },
        "passed": ok,
    });
    let report = Report::new("longrun", json!({ "bits": bits, "n": a.n }), result, start);
    let path = cfg.path_or(&a.out, "longrun.json");
    write_json(&path, &report)?;
    println!("{}", serde_json::to_string_pretty(&report.result)?);
    Ok(if ok { 0 } else { 1 })
}
