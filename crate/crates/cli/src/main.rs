//! `cogs`: construct, train and analyze quadratic networks on finite Abelian
//! group multiplication.

mod manifest;
mod svg;
mod tables;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use cogs::analyzer::{analyze, sp_dynamics, AnalysisReport, Verdict, DEFAULT_MATCH_TOL, DEFAULT_THRESHOLD};
use cogs::constructors::{
    build_f4, build_f46, build_f6, build_memorization, make_generator, F46Variant, F6Params, GeneratorName,
    GeneratorSpec,
};
use cogs::io::WeightsFile;
use cogs::potentials::{table1_row, TABLE1_LABELS};
use cogs::trainer::{accuracy, TrainStatus};
use cogs::{analytic_loss, forward_loss, global_check, CogsError, GroupSpec, TrainConfig, WeightZ};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use manifest::ManifestBuilder;

#[derive(Parser)]
#[command(name = "cogs", version, about = "Composable global solutions for quadratic networks on group multiplication")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a constructed solution and verify it.
    Construct(ConstructArgs),
    /// Train a network with full-batch Adam.
    Train(TrainArgs),
    /// Slice, factor and catalog-match a weights file.
    Analyze(AnalyzeArgs),
    /// Summarize an SP trace into per-epoch aggregates.
    Dynamics(DynamicsArgs),
    /// Train and analyze over a weight-decay x seed grid.
    Sweep(SweepArgs),
    /// Evaluate the single-frequency potentials of every generator.
    Table1(Table1Args),
    /// Render a CSV column set as an SVG chart.
    Plot(PlotArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Kind {
    F6,
    F4,
    F46,
    Mem,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Variant {
    SynAbNuI,
    SynNuOne,
}

#[derive(clap::Args, Serialize)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    /// Cyclic orders, e.g. `7` or `2,3`.
    #[arg(long)]
    group: GroupSpec,
    /// Frequency of the single block (f4) or of the six-node block (f46).
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Phase of xi for f4, in radians.
    #[arg(long, default_value_t = 0.0)]
    xi_phase: f64,
    /// Phase of nu for f6, in radians.
    #[arg(long, default_value_t = 0.0)]
    nu_phase: f64,
    #[arg(long, value_enum, default_value_t = Variant::SynAbNuI)]
    variant: Variant,
    #[arg(long)]
    out: PathBuf,
}

#[derive(clap::Args, Serialize)]
struct TrainArgs {
    #[arg(long)]
    group: GroupSpec,
    #[arg(long)]
    q: usize,
    #[arg(long, default_value_t = 0.01)]
    lr: f64,
    #[arg(long, default_value_t = 5e-5)]
    wd: f64,
    /// Apply weight decay directly to the weights (AdamW) instead of the gradient.
    #[arg(long)]
    decoupled_wd: bool,
    #[arg(long, default_value_t = 10_000)]
    epochs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.9)]
    train_fraction: f64,
    /// Gaussian init standard deviation (default 1/sqrt(d)).
    #[arg(long)]
    init_std: Option<f64>,
    #[arg(long, default_value_t = 50)]
    snapshot_every: usize,
    #[arg(long)]
    out: PathBuf,
}

impl TrainArgs {
    fn config(&self) -> TrainConfig {
        TrainConfig {
            lr: self.lr,
            weight_decay: self.wd,
            decoupled_weight_decay: self.decoupled_wd,
            epochs: self.epochs,
            seed: self.seed,
            train_fraction: self.train_fraction,
            init_std: self.init_std,
            snapshot_every: self.snapshot_every,
            keep_snapshots: false,
            ..TrainConfig::new(self.group.clone(), self.q)
        }
    }
}

#[derive(clap::Args, Serialize)]
struct AnalyzeArgs {
    #[arg(long)]
    weights: PathBuf,
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    threshold: f64,
    #[arg(long, default_value_t = DEFAULT_MATCH_TOL)]
    match_tol: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(clap::Args, Serialize)]
struct DynamicsArgs {
    #[arg(long)]
    trace: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(clap::Args, Serialize)]
struct SweepArgs {
    /// Repeat for several groups.
    #[arg(long, required = true)]
    group: Vec<GroupSpec>,
    #[arg(long)]
    q: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    wd: Vec<f64>,
    /// Number of seeds, run as 0..seeds.
    #[arg(long, default_value_t = 3)]
    seeds: u64,
    #[arg(long, default_value_t = 10_000)]
    epochs: usize,
    #[arg(long, default_value_t = 0.01)]
    lr: f64,
    #[arg(long)]
    init_std: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    threshold: f64,
    #[arg(long, default_value_t = DEFAULT_MATCH_TOL)]
    match_tol: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(clap::Args, Serialize)]
struct Table1Args {
    #[arg(long, default_value = "7")]
    group: GroupSpec,
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Phase of nu for the u_nu row, in radians.
    #[arg(long, default_value_t = 0.9)]
    nu_phase: f64,
    /// Also write the grid as CSV.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args, Serialize)]
struct PlotArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    svg: PathBuf,
    /// Column used as x (line) or category (bar).
    #[arg(long, default_value = "epoch")]
    x: String,
    /// Comma-separated y columns.
    #[arg(long, value_delimiter = ',', required = true)]
    y: Vec<String>,
    #[arg(long)]
    bar: bool,
    #[arg(long, default_value = "")]
    title: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Construct(a) => construct(a),
        Command::Train(a) => train(a),
        Command::Analyze(a) => cmd_analyze(a),
        Command::Dynamics(a) => dynamics(a),
        Command::Sweep(a) => sweep(a),
        Command::Table1(a) => table1(a),
        Command::Plot(a) => plot(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// 2 validation, 3 numeric failure, 4 IO.
fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if let Some(c) = cause.downcast_ref::<CogsError>() {
            return c.exit_code() as u8;
        }
        if cause.is::<std::io::Error>() {
            return 4;
        }
        if let Some(c) = cause.downcast_ref::<csv::Error>() {
            return if matches!(c.kind(), csv::ErrorKind::Io(_)) { 4 } else { 2 };
        }
        if let Some(c) = cause.downcast_ref::<serde_json::Error>() {
            return if c.is_io() { 4 } else { 2 };
        }
    }
    2
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(value)?).with_context(|| format!("writing {}", path.display()))
}

#[derive(Serialize)]
struct ConstructReport {
    kind: Kind,
    group: GroupSpec,
    order: usize,
    analytic_loss: f64,
    forward_loss: f64,
    accuracy: f64,
    global_check: bool,
    notes: Vec<String>,
}

fn construct(args: ConstructArgs) -> Result<()> {
    let spec = &args.group;
    let mut notes = Vec::new();
    let z = match args.kind {
        Kind::F6 => {
            if spec.representatives().iter().any(|&k| spec.is_self_conjugate(k)) {
                notes.push("even-order recipe: self-conjugate frequencies use 2^(-1/3) (1 + u_one)".into());
            }
            build_f6(spec, &F6Params { nu: Complex64::from_polar(1.0, args.nu_phase), unit: None })?
        }
        Kind::F4 => {
            notes.push("single unscaled order-4 block; not a global solution on its own".into());
            build_f4(spec, args.k, Complex64::from_polar(1.0, args.xi_phase))?
        }
        Kind::F46 => {
            let variant = match args.variant {
                Variant::SynAbNuI => F46Variant::SynAbNuI,
                Variant::SynNuOne => F46Variant::SynNuOne,
            };
            build_f46(spec, args.k, variant)?
        }
        Kind::Mem => build_memorization(spec)?,
    };
    let net = z.to_real();
    let pairs: Vec<(usize, usize)> = (0..spec.size()).flat_map(|a| (0..spec.size()).map(move |b| (a, b))).collect();
    let report = ConstructReport {
        kind: args.kind,
        group: spec.clone(),
        order: z.order(),
        analytic_loss: analytic_loss(&z).total,
        forward_loss: forward_loss(&net),
        accuracy: accuracy(&net, &pairs)?,
        global_check: global_check(&z, 1e-9).global,
        notes,
    };
    println!("kind {:?} on group {} with order {}", args.kind, spec, report.order);
    println!("analytic loss {:.3e}", report.analytic_loss);
    println!("forward loss {:.3e}", report.forward_loss);
    println!("accuracy {}", report.accuracy);
    println!("meets the sufficient global condition: {}", if report.global_check { "yes" } else { "no" });
    for n in &report.notes {
        println!("note: {n}");
    }
    create_dir(&args.out)?;
    let mut m = ManifestBuilder::new("construct", &args)?;
    WeightsFile::from_weight(&z).write(&args.out.join("weights.json"))?;
    m.output("weights.json");
    write_json(&args.out.join("report.json"), &report)?;
    m.output("report.json");
    m.write(&args.out)
}

fn train(args: TrainArgs) -> Result<()> {
    let config = args.config();
    create_dir(&args.out)?;
    let mut m = ManifestBuilder::new("train", &config)?;
    let out = cogs::train(config)?;
    tables::write_trace(&args.out.join("trace.csv"), &out.trace.epochs)?;
    m.output("trace.csv");
    tables::write_sp_trace(&args.out.join("sp_trace.csv"), &out.trace.sp)?;
    m.output("sp_trace.csv");
    WeightsFile::from_real(&out.net).write(&args.out.join("weights.json"))?;
    m.output("weights.json");
    m.write(&args.out)?;
    if let TrainStatus::Diverged { epoch } = out.status {
        return Err(CogsError::Numeric(format!("training diverged at epoch {epoch}; trace written up to the failure")).into());
    }
    if let Some(last) = out.trace.epochs.last() {
        println!(
            "epoch {} train loss {:.3e} test loss {:.3e} train acc {:.4} test acc {:.4}",
            last.epoch, last.train_loss, last.test_loss, last.train_acc, last.test_acc
        );
    }
    Ok(())
}

#[derive(Serialize)]
struct ParamSample {
    k: usize,
    kind: String,
    param: &'static str,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct AnalyzeOutput<'a> {
    #[serde(flatten)]
    report: &'a AnalysisReport,
    parameter_samples: Vec<ParamSample>,
}

fn parameter_samples(report: &AnalysisReport) -> Vec<ParamSample> {
    let mut out = Vec::new();
    for f in &report.frequencies {
        let Some(fac) = &f.factorization else { continue };
        if fac.verdict != Verdict::Matched {
            continue;
        }
        for m in fac.catalog.iter().flat_map(|c| c.matches.iter().flatten()) {
            let p = &m.params;
            for (name, v) in [("xi", p.xi), ("nu", p.nu), ("alpha", p.alpha), ("beta", p.beta)] {
                if let Some(v) = v {
                    out.push(ParamSample { k: f.k, kind: m.kind.as_str().into(), param: name, re: v.re, im: v.im });
                }
            }
        }
    }
    out
}

fn print_summary(report: &AnalysisReport) {
    let hist: Vec<String> = report.histogram.iter().map(|(o, c)| format!("{o}:{c}")).collect();
    println!("order histogram {{{}}}", hist.join(", "));
    let s = &report.summary;
    println!(
        "{} frequencies, {} not order 4/6, {} factorable, {} matched",
        s.frequencies, s.not_order_4_6, s.factorable, s.matched
    );
    for (cat, n) in &s.categories {
        println!("  {cat}: {n}");
    }
    if !report.overlapping_nodes.is_empty() {
        println!("nodes salient at several frequencies: {:?}", report.overlapping_nodes);
    }
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<()> {
    let z = WeightsFile::read(&args.weights).with_context(|| format!("reading {}", args.weights.display()))?.weight()?;
    let report = analyze(&z, args.threshold, args.match_tol)?;
    print_summary(&report);
    write_json(&args.out, &AnalyzeOutput { report: &report, parameter_samples: parameter_samples(&report) })
}

fn dynamics(args: DynamicsArgs) -> Result<()> {
    let snaps = tables::read_sp_trace(&args.trace).with_context(|| format!("reading {}", args.trace.display()))?;
    let rows = sp_dynamics(&snaps)?;
    tables::write_dynamics(&args.out, &rows)?;
    if let Some(last) = rows.last() {
        println!(
            "epoch {}: Re sum r_kkk {:.4}, max off-diagonal {:.4}",
            last.epoch, last.diag_sum, last.offdiag_max
        );
    }
    Ok(())
}

struct SweepRun {
    group: GroupSpec,
    wd: f64,
    seed: u64,
    test_acc: f64,
    orders: Vec<usize>,
    report: AnalysisReport,
}

fn median(v: &mut [usize]) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_unstable();
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2] as f64
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2]) as f64
    }
}

fn threads() -> Result<usize> {
    match std::env::var("COGS_THREADS") {
        Ok(v) => v
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CogsError::Validation(format!("COGS_THREADS must be a positive integer, got {v:?}")).into()),
        Err(_) => Ok(0),
    }
}

fn sweep(args: SweepArgs) -> Result<()> {
    if args.wd.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
        return Err(CogsError::Validation("weight decays must be non-negative".into()).into());
    }
    create_dir(&args.out)?;
    let runs_dir = args.out.join("runs");
    create_dir(&runs_dir)?;
    let mut m = ManifestBuilder::new("sweep", &args)?;
    let grid: Vec<(GroupSpec, f64, u64)> = args
        .group
        .iter()
        .flat_map(|g| args.wd.iter().flat_map(move |&w| (0..args.seeds).map(move |s| (g.clone(), w, s))))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads()?).build()?;
    let results: Vec<Result<SweepRun>> = pool.install(|| {
        grid.par_iter()
            .map(|(group, wd, seed)| {
                let config = TrainConfig {
                    lr: args.lr,
                    weight_decay: *wd,
                    epochs: args.epochs,
                    seed: *seed,
                    init_std: args.init_std,
                    snapshot_every: args.epochs.max(1),
                    ..TrainConfig::new(group.clone(), args.q)
                };
                let out = cogs::train(config)?;
                if let TrainStatus::Diverged { epoch } = out.status {
                    return Err(CogsError::Numeric(format!("group {group} wd {wd} seed {seed} diverged at epoch {epoch}")).into());
                }
                let name = format!("g{}_wd{wd:e}_seed{seed}", group.to_string().replace(',', "x"));
                let dir = runs_dir.join(name);
                create_dir(&dir)?;
                WeightsFile::from_real(&out.net).write(&dir.join("weights.json"))?;
                let z = WeightZ::from_real(&out.net);
                let report = analyze(&z, args.threshold, args.match_tol)?;
                let orders = report.frequencies.iter().map(|f| f.order).collect();
                let test_acc = out.trace.epochs.last().map_or(f64::NAN, |r| r.test_acc);
                Ok(SweepRun { group: group.clone(), wd: *wd, seed: *seed, test_acc, orders, report })
            })
            .collect()
    });
    let runs = results.into_iter().collect::<Result<Vec<_>>>()?;

    let path = args.out.join("histograms.csv");
    let mut w = csv::Writer::from_path(&path)?;
    w.write_record(["group", "wd", "seed", "order", "count"])?;
    for r in &runs {
        for (order, count) in &r.report.histogram {
            w.write_record([r.group.to_string(), r.wd.to_string(), r.seed.to_string(), order.to_string(), count.to_string()])?;
        }
    }
    w.flush()?;
    m.output(&path);

    let path = args.out.join("summary.csv");
    let mut w = csv::Writer::from_path(&path)?;
    w.write_record(["group", "wd", "seeds", "median_order", "pct_not_order_4_6", "pct_matched", "mean_test_acc"])?;
    println!("group  wd        median order  %not 4/6  %matched");
    for g in &args.group {
        for &wd in &args.wd {
            let sel: Vec<&SweepRun> = runs.iter().filter(|r| &r.group == g && r.wd == wd).collect();
            let mut orders: Vec<usize> = sel.iter().flat_map(|r| r.orders.iter().copied()).collect();
            let total = orders.len().max(1) as f64;
            let not46 = orders.iter().filter(|&&o| o != 4 && o != 6).count() as f64;
            let matched: usize = sel.iter().map(|r| r.report.summary.matched).sum();
            let acc = sel.iter().map(|r| r.test_acc).sum::<f64>() / sel.len().max(1) as f64;
            let med = median(&mut orders);
            w.write_record([
                g.to_string(),
                wd.to_string(),
                sel.len().to_string(),
                med.to_string(),
                (100.0 * not46 / total).to_string(),
                (100.0 * matched as f64 / total).to_string(),
                acc.to_string(),
            ])?;
            println!("{g:<6} {wd:<9e} {med:<13} {:<9.1} {:.1}", 100.0 * not46 / total, 100.0 * matched as f64 / total);
        }
    }
    w.flush()?;
    m.output(&path);
    m.write(&args.out)
}

fn fmt_complex(v: Complex64) -> String {
    let clean = |x: f64| if x.abs() < 1e-12 { 0.0 } else { x };
    let (re, im) = (clean(v.re), clean(v.im));
    match (re == 0.0, im == 0.0) {
        (_, true) => format!("{re:.6}"),
        (true, false) => format!("{im:.6}i"),
        _ => format!("{re:.6}{im:+.6}i"),
    }
}

fn table1(args: Table1Args) -> Result<()> {
    let spec = &args.group;
    let nu = Complex64::from_polar(1.0, args.nu_phase);
    let mut rows = Vec::new();
    for name in GeneratorName::ALL {
        let g = GeneratorSpec { name, k: args.k, nu };
        let u = match make_generator(spec, g) {
            Ok(u) => u,
            // e.g. order-3 generators at a self-conjugate frequency
            Err(CogsError::Validation(msg)) => {
                println!("{:<11} skipped: {msg}", name.as_str());
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        rows.push((name, table1_row(&u)?));
    }
    print!("{:<11}", "generator");
    for l in TABLE1_LABELS {
        print!(" {l:>22}");
    }
    println!();
    for (name, row) in &rows {
        print!("{:<11}", name.as_str());
        for l in TABLE1_LABELS {
            print!(" {:>22}", fmt_complex(row.value(l).expect("label present")));
        }
        println!();
    }
    println!("(u_nu uses nu = exp({} i) = {})", args.nu_phase, fmt_complex(nu));
    if let Some(path) = &args.out {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["generator", "potential", "re", "im"])?;
        for (name, row) in &rows {
            for l in TABLE1_LABELS {
                let v = row.value(l).expect("label present");
                w.write_record([name.as_str().to_string(), l.to_string(), v.re.to_string(), v.im.to_string()])?;
            }
        }
        w.flush()?;
    }
    Ok(())
}

fn plot(args: PlotArgs) -> Result<()> {
    let cols = tables::Columns::read(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let xi = cols.index(&args.x)?;
    let title = if args.title.is_empty() { args.input.display().to_string() } else { args.title.clone() };
    let svg = if args.bar {
        let yi = cols.index(&args.y[0])?;
        svg::bar_chart(&title, &args.x, &cols.text(xi), &cols.numbers(yi)?)
    } else {
        let x = cols.numbers(xi)?;
        let series = args
            .y
            .iter()
            .map(|name| Ok((name.clone(), cols.numbers(cols.index(name)?)?)))
            .collect::<Result<Vec<_>>>()?;
        svg::line_chart(&title, &args.x, &x, &series)
    };
    fs::write(&args.svg, svg).with_context(|| format!("writing {}", args.svg.display()))?;
    Ok(())
}
