//! `msr`: measure microservice resilience against goal models from the shell.
//!
//! Exit codes: 0 success, 1 goal violations or model validation errors,
//! 2 usage, input or I/O errors.

use std::collections::BTreeMap;
use std::fs;
use std::io::IsTerminal;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use msr_core::benchmark::Benchmark;
use msr_core::export::{export_dot, export_markdown, load_model_file, save_model, RenderStyle};
use msr_core::forecast::{fit_ewma, fit_holt_winters, grid_fit, HoltWintersParams, ParameterGrid};
use msr_core::goal::{has_errors, validate_model, Diagnostic, GoalGraph, Severity, Status};
use msr_core::measure::DetectionConfig;
use msr_core::report::{evaluate_model, resolve_benchmarks};
use msr_core::sim::{generate, Scenario};
use msr_core::trace::{read_trace_file, write_trace, IngestOptions};

#[derive(Parser)]
#[command(name = "msr", version, about = "Microservice resilience measurement and goal evaluation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a model file against the structural rules
    Validate {
        #[arg(long)]
        model: PathBuf,
    },
    /// Fit a forecast benchmark to one series of a trace
    Fit {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        subject: String,
        #[arg(long)]
        attribute: String,
        #[arg(long, value_enum, default_value_t = Method::HoltWinters)]
        method: Method,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        #[arg(long, default_value_t = 0.5)]
        beta: f64,
        #[arg(long, default_value_t = 0.5)]
        gamma: f64,
        /// Season length in samples (Holt-Winters and grid)
        #[arg(long)]
        season_length: Option<usize>,
        /// Step of the uniform parameter grid
        #[arg(long, default_value_t = 0.1)]
        grid_step: f64,
        #[arg(long)]
        skip_bad_rows: bool,
        #[arg(long)]
        output: PathBuf,
    },
    /// Detect degradations, measure them and evaluate every goal
    Evaluate {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        trace: PathBuf,
        /// Directory benchmark paths are resolved against (default: the model's directory)
        #[arg(long)]
        benchmarks: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Also write a DOT diagram with violated goals highlighted
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long, default_value_t = 0.0)]
        min_duration: f64,
        #[arg(long, default_value_t = 0.0)]
        merge_gap: f64,
        #[arg(long)]
        skip_bad_rows: bool,
        /// Status of a system behaviour, as ID=satisfied|violated|unknown (default: satisfied)
        #[arg(long = "behavior", value_name = "ID=STATUS", value_parser = parse_behavior)]
        behaviors: Vec<(String, Status)>,
    },
    /// Generate a synthetic trace and its ground truth from a scenario file
    Simulate {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Directory receiving trace.csv and ground_truth.json
        #[arg(long)]
        output: PathBuf,
    },
    /// Render a model as DOT, Markdown or a canonical model file
    Export {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, value_enum)]
        format: ExportFormat,
        /// Output file (default: stdout)
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Ewma,
    HoltWinters,
    Grid,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    Dot,
    Markdown,
    Model,
}

fn parse_behavior(arg: &str) -> Result<(String, Status), String> {
    let (id, status) = arg.split_once('=').ok_or("expected ID=STATUS")?;
    let status = match status {
        "satisfied" => Status::Satisfied,
        "violated" => Status::Violated,
        "unknown" => Status::Unknown,
        other => return Err(format!("unknown status `{other}`")),
    };
    Ok((id.to_string(), status))
}

fn color_enabled() -> bool {
    std::env::var_os("MSR_NO_COLOR").is_none() && std::io::stdout().is_terminal()
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn print_diagnostics(diags: &[Diagnostic]) {
    for d in diags {
        eprintln!("{d}");
    }
}

fn load(path: &Path) -> Result<GoalGraph> {
    load_model_file(path).with_context(|| format!("cannot load model {}", path.display()))
}

/// Returns the process exit code for commands that completed.
fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Validate { model } => {
            let graph = load(&model)?;
            let diags = validate_model(&graph);
            print_diagnostics(&diags);
            let errors = diags.iter().filter(|d| d.severity == Severity::Error).count();
            let warnings = diags.len() - errors;
            println!("{}: {errors} error(s), {warnings} warning(s)", model.display());
            Ok(if errors > 0 { 1 } else { 0 })
        }

        Command::Fit {
            trace,
            subject,
            attribute,
            method,
            alpha,
            beta,
            gamma,
            season_length,
            grid_step,
            skip_bad_rows,
            output,
        } => {
            let trace = read_trace_file(&trace, IngestOptions { skip_bad_rows })
                .with_context(|| format!("cannot read trace {}", trace.display()))?;
            let series = trace
                .get(&subject, &attribute)
                .with_context(|| format!("trace has no series {subject}/{attribute}"))?;
            let season = || season_length.context("--season-length is required for this method");
            let fitted = match method {
                Method::Ewma => fit_ewma(series, alpha),
                Method::HoltWinters => fit_holt_winters(series, HoltWintersParams::new(alpha, beta, gamma, season()?)),
                Method::Grid => grid_fit(series, season()?, &ParameterGrid::uniform(grid_step)?),
            };
            let model = fitted.with_context(|| {
                let step = series
                    .uniform_step()
                    .map_or("non-uniform".to_string(), |s| format!("{s} s"));
                format!(
                    "series {subject}/{attribute}: {} samples over [{}, {}], sampling step {step}",
                    series.len(),
                    series.first_time().unwrap_or(f64::NAN),
                    series.last_time().unwrap_or(f64::NAN),
                )
            })?;
            write_output(Some(&output), &model.to_json()?)?;
            eprintln!("fitted model written to {} (training SSE {})", output.display(), model.sse);
            Ok(0)
        }

        Command::Evaluate {
            model,
            trace,
            benchmarks,
            format,
            dot,
            min_duration,
            merge_gap,
            skip_bad_rows,
            behaviors,
        } => {
            let graph = load(&model)?;
            let diags = validate_model(&graph);
            if has_errors(&diags) {
                print_diagnostics(&diags);
                eprintln!("model has validation errors; nothing evaluated");
                return Ok(1);
            }
            let base = benchmarks.unwrap_or_else(|| model.parent().map(Path::to_path_buf).unwrap_or_default());
            let resolved: BTreeMap<String, Benchmark> = resolve_benchmarks(&graph, &base)?;
            let trace_data = read_trace_file(&trace, IngestOptions { skip_bad_rows })
                .with_context(|| format!("cannot read trace {}", trace.display()))?;
            for row in &trace_data.skipped {
                eprintln!("skipped {row}");
            }
            let config = DetectionConfig {
                min_duration,
                merge_gap,
            };
            let report = evaluate_model(&graph, &trace_data, &resolved, &config, &behaviors.into_iter().collect())?;
            match format {
                Format::Text => print!("{}", report.to_text(color_enabled())),
                Format::Json => print!("{}", report.to_json()?),
            }
            if let Some(path) = dot {
                let text = export_dot(&graph, &RenderStyle::default(), Some(&report.propagated))?;
                write_output(Some(&path), &text)?;
            }
            Ok(report.exit_code as u8)
        }

        Command::Simulate { scenario, seed, output } => {
            let text = fs::read_to_string(&scenario)
                .with_context(|| format!("cannot read scenario {}", scenario.display()))?;
            let scenario = Scenario::from_json(&text)?;
            let generated = generate(&scenario, seed)?;
            fs::create_dir_all(&output).with_context(|| format!("cannot create {}", output.display()))?;
            let mut csv = Vec::new();
            write_trace(&mut csv, &generated.series)?;
            fs::write(output.join("trace.csv"), csv)?;
            let mut truth = serde_json::to_string_pretty(&generated.ground_truth)?;
            truth.push('\n');
            fs::write(output.join("ground_truth.json"), truth)?;
            eprintln!(
                "{} series, {} expected degradation(s) written to {}",
                generated.series.len(),
                generated.ground_truth.degradations.len(),
                output.display()
            );
            Ok(0)
        }

        Command::Export { model, format, output } => {
            let graph = load(&model)?;
            let diags = validate_model(&graph);
            if has_errors(&diags) {
                print_diagnostics(&diags);
                return Ok(1);
            }
            let text = match format {
                ExportFormat::Dot => export_dot(&graph, &RenderStyle::default(), None)?,
                ExportFormat::Markdown => export_markdown(&graph)?,
                ExportFormat::Model => save_model(&graph)?,
            };
            write_output(output.as_deref(), &text)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

