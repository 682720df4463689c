//! Command-line front end: `femvar exact | solve | sweep`.
//!
//! All defaults mirror the comparison study, so a bare `femvar sweep`
//! regenerates its full data set (112 cases). Singular cases are reported
//! as data and never fail the run; only configuration and I/O problems
//! produce a nonzero exit status.

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{run_sweep, SweepConfig, SweepResult};
use crate::assembly::MethodKind;
use crate::error::FemvarError;
use crate::output::{
    write_exact_csv, write_exact_json, write_solutions_csv, write_summary_csv, write_sweep_json,
};
use crate::plot::{fmt_value, render_exact_svg, render_svg, PlotKind};

#[derive(Debug, Parser)]
#[command(
    name = "femvar",
    version,
    about = "Weighted-residual finite element variants for steady 1D convection-diffusion"
)]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Debug, Subcommand)]
enum CliCommand {
    /// Tabulate and plot the closed-form solution
    Exact(CommonArgs),
    /// Solve selected cases and print their metrics
    Solve(CommonArgs),
    /// Run the method x Peclet x resolution comparison sweep
    Sweep(CommonArgs),
}

fn parse_method(s: &str) -> Result<MethodKind, String> {
    s.parse()
}

fn parse_pe(s: &str) -> Result<f64, String> {
    let pe: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if !(pe >= 0.0) {
        return Err(format!("Peclet number must be nonnegative (got {pe})"));
    }
    Ok(pe)
}

fn parse_elements(s: &str) -> Result<usize, String> {
    let n: usize = s
        .parse()
        .map_err(|_| format!("'{s}' is not a positive integer"))?;
    if n < 2 {
        return Err(format!("element count must be at least 2 (got {n})"));
    }
    Ok(n)
}

fn parse_quad_order(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|_| format!("'{s}' is not an integer"))?;
    if !(1..=5).contains(&n) {
        return Err(format!("quadrature order must be in 1..=5 (got {n})"));
    }
    Ok(n)
}

/// Domain endpoints given as `a,b`.
#[derive(Debug, Clone, Copy)]
struct Domain(f64, f64);

fn parse_domain(s: &str) -> Result<Domain, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected 'a,b' (got '{s}')"));
    }
    let a: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| format!("'{}' is not a number", parts[0]))?;
    let b: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| format!("'{}' is not a number", parts[1]))?;
    if !(b > a) {
        return Err(format!(
            "domain right end must exceed left end (got {a},{b})"
        ));
    }
    Ok(Domain(a, b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
    Svg,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
            OutputFormat::Svg => "svg",
        })
    }
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Methods to run (comma separated subset of sg,c,ls,gls,cg,cls,cgls)
    #[arg(long = "method", value_delimiter = ',', value_parser = parse_method,
          default_values_t = MethodKind::ALL)]
    methods: Vec<MethodKind>,

    /// Peclet numbers (comma separated, nonnegative)
    #[arg(long = "pe", value_delimiter = ',', value_parser = parse_pe,
          default_values_t = [1.0, 50.0, 100.0, 500.0])]
    pe: Vec<f64>,

    /// Element counts (comma separated, each at least 2)
    #[arg(long = "elements", value_delimiter = ',', value_parser = parse_elements,
          default_values_t = [25, 50, 75, 100])]
    elements: Vec<usize>,

    /// Domain endpoints as a,b
    #[arg(long = "domain", value_parser = parse_domain, default_value = "1,2")]
    domain: Domain,

    /// Gauss-Legendre order used for element integrals
    #[arg(long = "quad-order", value_parser = parse_quad_order, default_value_t = 2)]
    quad_order: usize,

    /// Output directory
    #[arg(long = "out", default_value = "out")]
    out: PathBuf,

    /// Output formats (comma separated subset of csv,json,svg)
    #[arg(long = "format", value_delimiter = ',', value_enum,
          default_values_t = [OutputFormat::Csv])]
    formats: Vec<OutputFormat>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Exact,
    Solve,
    Sweep,
}

/// Fully validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: CommandKind,
    pub sweep: SweepConfig,
    pub out_dir: PathBuf,
    pub formats: Vec<OutputFormat>,
}

impl RunConfig {
    pub fn wants(&self, format: OutputFormat) -> bool {
        self.formats.contains(&format)
    }
}

/// Parse argv into a validated configuration. Unknown methods, negative
/// Peclet numbers, malformed numbers, and bad flags all surface here as
/// clap diagnostics (nonzero exit).
pub fn parse_config<I, T>(argv: I) -> Result<RunConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv)?;
    let (command, args) = match cli.command {
        CliCommand::Exact(args) => (CommandKind::Exact, args),
        CliCommand::Solve(args) => (CommandKind::Solve, args),
        CliCommand::Sweep(args) => (CommandKind::Sweep, args),
    };
    let mut formats = args.formats;
    formats.sort();
    formats.dedup();
    Ok(RunConfig {
        command,
        sweep: SweepConfig {
            methods: args.methods,
            pe_values: args.pe,
            element_counts: args.elements,
            domain: (args.domain.0, args.domain.1),
            quad_order: args.quad_order,
        },
        out_dir: args.out,
        formats,
    })
}

/// Execute a parsed configuration.
pub fn run(config: &RunConfig) -> Result<(), FemvarError> {
    fs::create_dir_all(&config.out_dir).map_err(|e| FemvarError::io(&config.out_dir, e))?;
    match config.command {
        CommandKind::Exact => run_exact(config),
        CommandKind::Solve => run_cases(config, true),
        CommandKind::Sweep => run_cases(config, false),
    }
}

fn run_exact(config: &RunConfig) -> Result<(), FemvarError> {
    let sweep = config.sweep.clone().validated()?;
    let mut written = Vec::new();
    if config.wants(OutputFormat::Csv) {
        let path = config.out_dir.join("exact.csv");
        write_exact_csv(sweep.domain, &sweep.pe_values, 401, &path)?;
        written.push(path);
    }
    if config.wants(OutputFormat::Json) {
        let path = config.out_dir.join("exact.json");
        write_exact_json(sweep.domain, &sweep.pe_values, 401, &path)?;
        written.push(path);
    }
    if config.wants(OutputFormat::Svg) {
        let path = config.out_dir.join("fig_exact.svg");
        render_exact_svg(sweep.domain, &sweep.pe_values, &path)?;
        written.push(path);
    }
    for path in &written {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn print_case_lines(result: &SweepResult) {
    for case in &result.cases {
        if case.singular {
            println!(
                "{:<4} pe={:<6} N={:<4} singular (rcond={:.2e})",
                case.method.label(),
                fmt_value(case.pe),
                case.n_elements,
                case.rcond
            );
        } else if let Some(error) = &case.error {
            println!(
                "{:<4} pe={:<6} N={:<4} max_abs_rel_error={:.6e} total_variation={:.6} rcond={:.2e}",
                case.method.label(),
                fmt_value(case.pe),
                case.n_elements,
                error.max_abs_rel_error,
                error.total_variation,
                case.rcond
            );
        }
    }
}

fn run_cases(config: &RunConfig, per_case_output: bool) -> Result<(), FemvarError> {
    let result = run_sweep(&config.sweep)?;
    if per_case_output {
        print_case_lines(&result);
    }

    let mut written = Vec::new();
    if config.wants(OutputFormat::Csv) {
        let solutions = config.out_dir.join("solutions.csv");
        write_solutions_csv(&result, &solutions)?;
        written.push(solutions);
        let summary = config.out_dir.join("summary.csv");
        write_summary_csv(&result, &summary)?;
        written.push(summary);
    }
    if config.wants(OutputFormat::Json) {
        let path = config.out_dir.join("sweep.json");
        write_sweep_json(&result, &path)?;
        written.push(path);
    }
    if config.wants(OutputFormat::Svg) {
        let exact_fig = config.out_dir.join("fig_exact.svg");
        render_exact_svg(result.config.domain, &result.config.pe_values, &exact_fig)?;
        written.push(exact_fig);
        for &pe in &result.config.pe_values {
            for &n in &result.config.element_counts {
                let subset = result.subset(pe, n);
                if subset.cases.iter().all(|c| c.solution.is_none()) {
                    continue; // nothing drawable at this pair
                }
                let path =
                    config
                        .out_dir
                        .join(format!("fig_overlay_pe{}_n{}.svg", fmt_value(pe), n));
                render_svg(&subset, PlotKind::SolutionOverlay, &path)?;
                written.push(path);
            }
        }
        if result.cases.iter().any(|c| c.error.is_some()) {
            let path = config.out_dir.join("fig_error_loglog.svg");
            render_svg(&result, PlotKind::ErrorLogLog, &path)?;
            written.push(path);
        }
    }

    let singular = result.cases.iter().filter(|c| c.singular).count();
    println!(
        "{} cases ({} singular); wrote {} file(s) to {}",
        result.cases.len(),
        singular,
        written.len(),
        config.out_dir.display()
    );
    Ok(())
}
