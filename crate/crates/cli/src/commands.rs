use std::path::PathBuf;
use std::time::Instant;

use bosent_core::phase::coherent_visibility_report;
use bosent_core::tolerances::{INEQUALITY_SLACK, NORM_TOL, SECTOR_DROP};
use bosent_core::transfer::{
    equal_different_measurement, minimum_grid, phase_grid_register_state, register_sectors, run_transfer,
    ProtocolConfig, DEFAULT_TRUNCATION,
};
use bosent_core::uncertainty::{
    coherent_pair, physical_threshold, random_physical_state, uncertainty_report, reference_pair_layout,
    PhaseOperatorSpace, UncertaintyReport, DEFAULT_PHASE_TRUNCATION,
};
use bosent_core::{
    entropy_of_entanglement, particle_entanglement, sector_decompose, trace_distance_aligned, DensityOperator,
    PureState,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::report::{cell, complex, num, Format, RunReport};
use crate::statefile::{load_state, mode_entries, StateFile};

#[derive(Debug, Parser)]
#[command(name = "bosent", version, about = "Particle entanglement of bosonic states and its transfer to registers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for all random-state generation.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Include wall time in the report (makes output run-dependent).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Particle entanglement and sector table of a state file.
    Ep(EpArgs),
    /// Simulate the transfer of particle entanglement onto registers.
    Transfer(TransferArgs),
    /// Fringe visibility and entanglement of formation for coherent references.
    Measure(MeasureArgs),
    /// Table of visibility and entanglement of formation over transported means.
    Sweep(SweepArgs),
    /// Number-phase uncertainty checks on random physical states.
    Bounds(BoundsArgs),
}

#[derive(Debug, Clone, Args)]
pub struct EpArgs {
    /// JSON state file.
    pub state: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TransferPath {
    Exact,
    Quadrature,
}

#[derive(Debug, Clone, Args)]
pub struct TransferArgs {
    /// JSON state file with field modes only.
    pub state: PathBuf,
    /// Ancilla truncation M.
    #[arg(long = "M", visible_alias = "m", default_value_t = DEFAULT_TRUNCATION)]
    pub m: u32,
    /// Phase grid size for the quadrature path (default 2M + 3).
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long, value_enum, default_value = "exact")]
    pub path: TransferPath,
}

#[derive(Debug, Clone, Args)]
pub struct MeasureArgs {
    /// Mean particle number of the transported reference.
    #[arg(long)]
    pub ntr: f64,
    /// Local reference mean as a multiple of ntr.
    #[arg(long, default_value_t = 10.0)]
    pub local_scale: f64,
    /// Phase quadrature grid size.
    #[arg(long)]
    pub grid: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Comma-separated transported means.
    #[arg(long, value_delimiter = ',', default_value = "25,50,100")]
    pub ntr_list: Vec<f64>,
    #[arg(long, default_value_t = 10.0)]
    pub local_scale: f64,
}

#[derive(Debug, Clone, Args)]
pub struct BoundsArgs {
    /// Number of random physical states.
    #[arg(long, default_value_t = 100)]
    pub seeds: u64,
    /// Phase-space truncation s.
    #[arg(long, default_value_t = DEFAULT_PHASE_TRUNCATION)]
    pub s: u32,
    /// Also check a coherent pair with this transported mean.
    #[arg(long)]
    pub nbar: Option<f64>,
    #[arg(long, default_value_t = 10.0)]
    pub local_scale: f64,
}

/// Turns a report with failed checks into the violation error.
pub fn check_violations(report: &RunReport) -> Result<(), CliError> {
    if report.violations > 0 {
        return Err(CliError::Violation(format!("{} inequality checks failed", report.violations)));
    }
    Ok(())
}

/// Runs a parsed command line and returns its report.
pub fn run(cli: &Cli) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let mut report = match &cli.command {
        Command::Ep(a) => cmd_ep(a, cli.seed),
        Command::Transfer(a) => cmd_transfer(a, cli.seed),
        Command::Measure(a) => cmd_measure(a, cli.seed),
        Command::Sweep(a) => cmd_sweep(a, cli.seed),
        Command::Bounds(a) => cmd_bounds(a, cli.seed),
    }?;
    if cli.timing {
        report.wall_time_s = Some(start.elapsed().as_secs_f64());
    }
    Ok(report)
}

fn label(occ: &[u32]) -> Value {
    json!(occ)
}

fn density_json(rho: &DensityOperator) -> Value {
    let modes = serde_json::to_value(mode_entries(rho.layout())).expect("modes serialize");
    let basis: Vec<Value> = rho.basis().iter().map(|l| label(l.occupations())).collect();
    let m = rho.matrix();
    let matrix: Vec<Vec<Value>> = (0..rho.dim())
        .map(|r| (0..rho.dim()).map(|c| complex(m[(r, c)])).collect())
        .collect();
    json!({ "modes": modes, "basis": basis, "matrix": matrix })
}

fn density_csv(rho: &DensityOperator) -> String {
    let mut out = String::from("row,col,re,im\n");
    let fmt = |occ: &[u32]| occ.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(" ");
    for (r, lr) in rho.basis().iter().enumerate() {
        for (c, lc) in rho.basis().iter().enumerate() {
            let z = rho.matrix()[(r, c)];
            if z.norm() == 0.0 {
                continue;
            }
            out.push_str(&format!("{},{},{},{}\n", fmt(lr.occupations()), fmt(lc.occupations()), cell(z.re), cell(z.im)));
        }
    }
    out
}

pub fn cmd_ep(args: &EpArgs, seed: u64) -> Result<RunReport, CliError> {
    let loaded = load_state(&args.state)?;
    let state = &loaded.state;
    let dec = sector_decompose(state)?;
    let mut sectors = Vec::new();
    let mut csv = String::from("n,probability,entanglement\n");
    for s in &dec.sectors {
        let e = entropy_of_entanglement(&s.state)?;
        sectors.push(json!({ "n": s.n, "probability": num(s.probability), "entanglement": num(e) }));
        csv.push_str(&format!("{},{},{}\n", s.n, cell(s.probability), cell(e)));
    }
    let ep = particle_entanglement(state)?;
    let e = entropy_of_entanglement(state)?;
    let mut report = RunReport::new("ep", json!({ "state": args.state.display().to_string() }), seed)
        .tolerance("sector_drop", SECTOR_DROP)
        .tolerance("norm", NORM_TOL);
    report.results = json!({
        "ep": num(ep),
        "entanglement": num(e),
        "renormalized": loaded.renormalized,
        "sectors": sectors,
    });
    report.csv = csv;
    Ok(report)
}

pub fn cmd_transfer(args: &TransferArgs, seed: u64) -> Result<RunReport, CliError> {
    if args.m < 1 {
        return Err(CliError::Parse("--M must be at least 1".into()));
    }
    let loaded = load_state(&args.state)?;
    let config = ProtocolConfig::with_truncation(loaded.state, args.m)?;
    let exact = run_transfer(&config)?;
    let grid = args.grid.unwrap_or_else(|| minimum_grid(args.m));
    let mut extra = serde_json::Map::new();
    let rho = match args.path {
        TransferPath::Exact => exact,
        TransferPath::Quadrature => {
            let q = phase_grid_register_state(&config, grid)?;
            let d = trace_distance_aligned(&q, &exact)?;
            extra.insert("trace_distance_to_exact".into(), num(d));
            extra.insert("distance_bound".into(), num(3.0 / (args.m + 1) as f64));
            q
        }
    };
    let sectors = register_sectors(&rho)?;
    let total: f64 = sectors.iter().map(|s| s.weight * s.entanglement).sum();
    let sector_json: Vec<Value> = sectors
        .iter()
        .map(|s| json!({ "n": s.n, "weight": num(s.weight), "entanglement": num(s.entanglement) }))
        .collect();
    if let Ok(outcomes) = equal_different_measurement(&rho) {
        let avg: f64 = outcomes.iter().map(|o| o.probability * o.entanglement).sum();
        let list: Vec<Value> = outcomes
            .iter()
            .map(|o| {
                json!({
                    "a_equal": o.a_equal,
                    "b_equal": o.b_equal,
                    "probability": num(o.probability),
                    "entanglement": num(o.entanglement),
                })
            })
            .collect();
        extra.insert("equal_different".into(), json!({ "outcomes": list, "average_entanglement": num(avg) }));
    }
    let mut results = json!({
        "path": match args.path { TransferPath::Exact => "exact", TransferPath::Quadrature => "quadrature" },
        "register_state": density_json(&rho),
        "sector_entanglement": num(total),
        "sectors": sector_json,
    });
    results.as_object_mut().unwrap().extend(extra);
    let inputs = json!({
        "state": args.state.display().to_string(),
        "M": args.m,
        "grid": grid,
        "path": results["path"].clone(),
    });
    let mut report = RunReport::new("transfer", inputs, seed).tolerance("norm", NORM_TOL);
    report.results = results;
    report.csv = density_csv(&rho);
    Ok(report)
}

fn check_ntr(ntr: f64) -> Result<(), CliError> {
    if !ntr.is_finite() || ntr < 1.0 {
        return Err(CliError::Parse(format!("ntr must be a finite number >= 1, got {ntr}")));
    }
    Ok(())
}

fn check_scale(scale: f64) -> Result<(), CliError> {
    if !scale.is_finite() || scale <= 0.0 {
        return Err(CliError::Parse(format!("--local-scale must be positive, got {scale}")));
    }
    Ok(())
}

pub fn cmd_measure(args: &MeasureArgs, seed: u64) -> Result<RunReport, CliError> {
    check_ntr(args.ntr)?;
    check_scale(args.local_scale)?;
    let r = coherent_visibility_report(args.ntr, args.local_scale, args.grid)?;
    let mut report = RunReport::new(
        "measure",
        json!({ "ntr": num(args.ntr), "local_scale": num(args.local_scale), "grid": args.grid }),
        seed,
    )
    .tolerance("visibility_range", 1e-10);
    report.results = json!({
        "c": complex(r.c),
        "c_moment": complex(r.c_moment),
        "vis2": num(r.visibility2),
        "vis2_model": num(r.model_visibility2),
        "ef": num(r.ef),
        "ef_oracle": num(r.ef_oracle),
        "ef_bound": num(r.bound),
        "ef_variance_bound": num(r.variance_bound),
        "transported_mean": num(r.transported_mean),
        "transported_variance": num(r.transported_variance),
        "local_mean": num(r.local_mean),
        "path": if r.grid.is_some() { "quadrature" } else { "moment" },
        "grid": r.grid,
    });
    let rows = [
        ("c_re", r.c.re),
        ("c_im", r.c.im),
        ("vis2", r.visibility2),
        ("vis2_model", r.model_visibility2),
        ("ef", r.ef),
        ("ef_oracle", r.ef_oracle),
        ("ef_bound", r.bound),
        ("ef_variance_bound", r.variance_bound),
        ("transported_mean", r.transported_mean),
        ("transported_variance", r.transported_variance),
        ("local_mean", r.local_mean),
    ];
    report.csv = String::from("quantity,value\n");
    for (k, v) in rows {
        report.csv.push_str(&format!("{k},{}\n", cell(v)));
    }
    Ok(report)
}

/// CSV header of the sweep table.
pub const SWEEP_HEADER: &str = "ntr,vis2_full,vis2_model,ef,ef_bound";

pub fn cmd_sweep(args: &SweepArgs, seed: u64) -> Result<RunReport, CliError> {
    if args.ntr_list.is_empty() {
        return Err(CliError::Parse("--ntr-list must not be empty".into()));
    }
    check_scale(args.local_scale)?;
    let mut rows = Vec::new();
    let mut csv = format!("{SWEEP_HEADER}\n");
    let mut efs = Vec::new();
    let mut within_bound = true;
    for &ntr in &args.ntr_list {
        check_ntr(ntr)?;
        let r = coherent_visibility_report(ntr, args.local_scale, None)?;
        let rel_err = ((1.0 - r.visibility2) - (1.0 - r.model_visibility2)).abs() / (1.0 - r.model_visibility2);
        within_bound &= r.ef <= r.bound + 1e-6;
        efs.push(r.ef);
        rows.push(json!({
            "ntr": num(ntr),
            "vis2_full": num(r.visibility2),
            "vis2_model": num(r.model_visibility2),
            "ef": num(r.ef),
            "ef_bound": num(r.bound),
            "ef_variance_bound": num(r.variance_bound),
            "model_relative_error": num(rel_err),
        }));
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            cell(ntr),
            cell(r.visibility2),
            cell(r.model_visibility2),
            cell(r.ef),
            cell(r.bound)
        ));
    }
    let increasing = efs.windows(2).all(|w| w[1] > w[0]);
    let list: Vec<Value> = args.ntr_list.iter().map(|&x| num(x)).collect();
    let mut report = RunReport::new("sweep", json!({ "ntr_list": list, "local_scale": num(args.local_scale) }), seed)
        .tolerance("ef_bound_slack", 1e-6);
    report.results = json!({
        "rows": rows,
        "ef_strictly_increasing": increasing,
        "ef_within_bound": within_bound,
    });
    report.csv = csv;
    Ok(report)
}

fn state_row(name: &str, resamples: u32, state: &PureState, r: &UncertaintyReport) -> Value {
    let slacks: serde_json::Map<String, Value> = r
        .inequalities()
        .into_iter()
        .map(|(k, i)| (k.to_string(), num(i.slack())))
        .collect();
    let violations: Vec<&str> = r.violations().into_iter().map(|(k, _)| k).collect();
    let mut row = json!({
        "state": name,
        "resamples": resamples,
        "var_na": num(r.var_na),
        "var_nb": num(r.var_nb),
        "mean_cos": num(r.mean_cos),
        "mean_sin": num(r.mean_sin),
        "vis2": num(r.visibility2),
        "min_slack": num(r.min_slack()),
        "trig_identity_residual": num(r.trig_identity_residual()),
        "slacks": slacks,
        "violations": violations,
        "diagnostics": r.diagnostics,
    });
    if !violations.is_empty() {
        row["offending_state"] = serde_json::to_value(StateFile::from_state(state)).expect("state serializes");
    }
    row
}

fn state_csv(out: &mut String, name: &str, r: &UncertaintyReport) {
    for (k, i) in r.inequalities() {
        out.push_str(&format!("{name},{k},{},{},{}\n", cell(i.lhs), cell(i.rhs), cell(i.slack())));
    }
}

/// Smallest truncation ≥ `s`, doubling, for which a coherent state of mean
/// `nbar` keeps its tail below s − √s.
fn physical_truncation(s: u32, nbar: f64) -> u32 {
    let need = nbar + 10.0 * nbar.sqrt();
    let mut t = s;
    while (physical_threshold(t) as f64) < need {
        t *= 2;
    }
    t
}

pub fn cmd_bounds(args: &BoundsArgs, seed: u64) -> Result<RunReport, CliError> {
    if args.s < 16 {
        return Err(CliError::Parse("--s must be at least 16".into()));
    }
    let space = PhaseOperatorSpace::new(args.s, 0.0)?;
    let mut rows = Vec::new();
    let mut csv = String::from("state,inequality,lhs,rhs,slack\n");
    let mut violations = 0;
    let mut resamples_total = 0u64;

    let n0 = args.s / 4;
    let number = PureState::basis_state(reference_pair_layout(args.s), vec![n0, n0])?;
    let r = uncertainty_report(&number, &space)?;
    violations += r.violations().len();
    rows.push(state_row("number_product", 0, &number, &r));
    state_csv(&mut csv, "number_product", &r);

    for i in 0..args.seeds {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i);
        let (state, resamples) = random_physical_state(&mut rng, &space)?;
        resamples_total += resamples as u64;
        let r = uncertainty_report(&state, &space)?;
        violations += r.violations().len();
        let name = format!("random_{i}");
        rows.push(state_row(&name, resamples, &state, &r));
        state_csv(&mut csv, &name, &r);
    }

    let mut coherent = Value::Null;
    if let Some(nbar) = args.nbar {
        check_ntr(nbar)?;
        check_scale(args.local_scale)?;
        let local = args.local_scale * nbar;
        let s = physical_truncation(args.s, nbar.max(local));
        if s != args.s {
            log::info!("coherent pair uses s = {s} to stay clear of the truncation");
        }
        let cspace = PhaseOperatorSpace::new(s, 0.0)?;
        let state = coherent_pair(nbar, local, s)?;
        let r = uncertainty_report(&state, &cspace)?;
        violations += r.violations().len();
        let mut row = state_row("coherent_pair", 0, &state, &r);
        row["s"] = json!(s);
        row["nbar"] = json!([num(nbar), num(local)]);
        row["c2_transported"] = json!({
            "bound": num(r.c2[0].lhs),
            "vis2": num(r.c2[0].rhs),
            "slack": num(r.c2[0].slack()),
        });
        state_csv(&mut csv, "coherent_pair", &r);
        coherent = row;
    }

    let inputs = json!({
        "seeds": args.seeds,
        "s": args.s,
        "nbar": args.nbar.map(num),
        "local_scale": num(args.local_scale),
    });
    let mut report = RunReport::new("bounds", inputs, seed)
        .tolerance("inequality_slack", INEQUALITY_SLACK)
        .tolerance("physical_tail", bosent_core::tolerances::PHYSICAL_TAIL);
    report.results = json!({
        "summary": {
            "states": rows.len() + usize::from(!coherent.is_null()),
            "violations": violations,
            "resamples": resamples_total,
            "passed": violations == 0,
        },
        "states": rows,
        "coherent_pair": coherent,
    });
    report.csv = csv;
    report.violations = violations;
    Ok(report)
}
