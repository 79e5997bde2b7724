//! Command-line driver: reduce or elevate a disk rational Bézier curve file.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use diskbez::io::{load_curve, save_curve};
use diskbez::svg::render_reduction;
use diskbez::{reduce, Continuity, DistanceMode, ReductionConfig, ReductionResult};
use serde_json::json;

#[derive(Debug, Parser)]
#[command(name = "diskbez", version, about = "Degree reduction of disk rational Bezier curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Reduce a curve to a lower degree that bounds it.
    Reduce(ReduceArgs),
    /// Raise the degree of a curve without changing it.
    Elevate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Number of degrees to add.
        #[arg(long, default_value_t = 1)]
        by: usize,
    },
}

#[derive(Debug, clap::Args)]
struct ReduceArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
    /// Target degree, below the input degree.
    #[arg(long)]
    degree: usize,
    /// End continuity orders `K,H`, each 0 or 1.
    #[arg(long, default_value = "0,0", value_parser = parse_continuity)]
    continuity: (Continuity, Continuity),
    /// Uniform parameter samples used for d and the error report.
    #[arg(long, default_value_t = diskbez::reduction::DEFAULT_SAMPLES, value_parser = clap::value_parser!(usize))]
    samples: usize,
    #[arg(long, value_enum, default_value_t = DMode::Max)]
    d_mode: DMode,
    /// Write an SVG plot of both curves and the error profiles.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Write the error report as JSON.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DMode {
    Max,
    Sum,
}

impl From<DMode> for DistanceMode {
    fn from(m: DMode) -> Self {
        match m {
            DMode::Max => DistanceMode::MaxDistance,
            DMode::Sum => DistanceMode::SumDistance,
        }
    }
}

fn parse_continuity(s: &str) -> Result<(Continuity, Continuity), String> {
    let (k, h) = s.split_once(',').ok_or_else(|| format!("expected K,H, got `{s}`"))?;
    let order = |v: &str| -> Result<Continuity, String> {
        let n: usize = v.trim().parse().map_err(|_| format!("`{v}` is not an integer"))?;
        Continuity::from_order(n).map_err(|_| format!("continuity order {n} is not 0 or 1"))
    };
    Ok((order(k)?, order(h)?))
}

fn write_file(path: &Path, text: &str) -> Result<(), String> {
    std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

fn report_json(args: &ReduceArgs, degree: usize, r: &ReductionResult) -> serde_json::Value {
    let mut v = serde_json::to_value(r.errors).expect("report serializes");
    let extra = json!({
        "d": r.d,
        "d_mode": match args.d_mode { DMode::Max => "max", DMode::Sum => "sum" },
        "input_degree": degree,
        "degree": args.degree,
        "continuity": [args.continuity.0.order(), args.continuity.1.order()],
        "weight_qp_objective": r.weight_qp.objective,
        "radius_qp_objective": r.radius_qp.objective,
    });
    if let (Some(obj), serde_json::Value::Object(more)) = (v.as_object_mut(), extra) {
        obj.extend(more);
    }
    v
}

fn run_reduce(args: &ReduceArgs) -> Result<(), String> {
    let curve = load_curve(&args.input).map_err(|e| format!("cannot load {}: {e}", args.input.display()))?;
    let n = curve.degree();
    if args.degree >= n {
        Cli::command()
            .error(
                ErrorKind::ValueValidation,
                format!("--degree {} must be below the input degree {n}", args.degree),
            )
            .exit();
    }
    let cfg = ReductionConfig::new(args.degree)
        .continuity(args.continuity.0, args.continuity.1)
        .samples(args.samples)
        .d_mode(args.d_mode.into());
    let r = reduce(&curve, &cfg).map_err(|e| match e.stage() {
        Some(stage) => format!("reduction failed at the {stage} stage: {e}"),
        None => format!("reduction failed: {e}"),
    })?;

    save_curve(&r.reduced, &args.output).map_err(|e| e.to_string())?;
    if let Some(path) = &args.svg {
        let svg = render_reduction(&curve, &r.reduced, args.samples).map_err(|e| e.to_string())?;
        write_file(path, &svg)?;
    }
    if let Some(path) = &args.report {
        let text = serde_json::to_string_pretty(&report_json(args, n, &r)).expect("report serializes");
        write_file(path, &(text + "\n"))?;
    }

    let e = &r.errors;
    println!(
        "reduced degree {n} -> {} with C({},{}) continuity, {} samples",
        args.degree,
        args.continuity.0.order(),
        args.continuity.1.order(),
        e.samples
    );
    println!("d                    {:.6}", r.d);
    println!("max center error     {:.6} at t = {:.4}", e.max_center_err, e.argmax_center_t);
    println!("max radius error     {:.6} at t = {:.4}", e.max_radius_err, e.argmax_radius_t);
    println!("weight QP objective  {:.6e}", r.weight_qp.objective);
    println!("radius QP objective  {:.6e}", r.radius_qp.objective);
    let weights: Vec<String> = r.reduced.weights().iter().map(|w| format!("{w:.4}")).collect();
    println!("weights              {}", weights.join(", "));
    for (i, d) in r.reduced.disks().iter().enumerate() {
        println!("disk {i:<2}              ({:.4}, {:.4}) r = {:.4}", d.cx(), d.cy(), d.radius());
    }
    Ok(())
}

fn run_elevate(input: &Path, output: &Path, by: usize) -> Result<(), String> {
    let curve = load_curve(input).map_err(|e| format!("cannot load {}: {e}", input.display()))?;
    let up = curve.elevate(by).map_err(|e| e.to_string())?;
    save_curve(&up, output).map_err(|e| e.to_string())?;
    println!("elevated degree {} -> {}", curve.degree(), up.degree());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Reduce(args) => run_reduce(args),
        Command::Elevate { input, output, by } => run_elevate(input, output, *by),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
