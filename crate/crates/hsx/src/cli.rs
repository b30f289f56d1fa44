//! Command-line front end. Exit codes: 0 success, 2 configuration error,
//! 3 numerical validation failure.

use crate::harness::{run_experiment, ErrorTable, ExampleSpec, ExperimentConfig, OutputFormat};
use crate::Error;
use clap::Parser;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "hsx",
    about = "Solves the Hunter-Saxton equation with alpha-dissipation by exact evolution of \
             energy-preserving piecewise-linear projections, and runs grid-refinement \
             convergence studies against closed-form solutions"
)]
struct Args {
    /// Which initial data to run: multipeakon | cusp | cosine | custom
    #[arg(long)]
    example: String,

    /// Dissipation parameter in [0, 1]
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,

    /// Atom mass of the multipeakon example
    #[arg(long, default_value_t = 0.5)]
    beta: f64,

    /// Comma-separated list of mesh sizes
    #[arg(long = "dx-list", value_delimiter = ',')]
    dx_list: Option<Vec<f64>>,

    /// Grid origin x_0
    #[arg(long = "grid-origin", default_value_t = 0.0)]
    grid_origin: f64,

    /// Comparison domain as "a,b" (defaults to the solution's own span)
    #[arg(long)]
    domain: Option<String>,

    /// Final time
    #[arg(long = "T")]
    t_final: Option<f64>,

    /// Number of uniform time samples for the sup-in-time errors
    #[arg(long = "nt", default_value_t = 257)]
    nt: usize,

    /// Comma-separated snapshot times (default: 0, T/2, T)
    #[arg(long)]
    snapshots: Option<String>,

    /// Initial-data JSON file (with --example custom)
    #[arg(long = "initial-data")]
    initial_data: Option<PathBuf>,

    /// Output directory
    #[arg(long = "out", default_value = "out")]
    out: PathBuf,

    /// Error-table format: csv | json (json is written in addition to csv)
    #[arg(long, default_value = "csv")]
    format: String,

    /// Number of concurrent dx runs
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

fn parse_pair(text: &str, what: &str) -> Result<(f64, f64), Error> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::Config(format!("{what} must be \"a,b\", got {text:?}")));
    }
    let a = parts[0].trim().parse().map_err(|e| Error::Config(format!("{what}: {e}")))?;
    let b = parts[1].trim().parse().map_err(|e| Error::Config(format!("{what}: {e}")))?;
    Ok((a, b))
}

fn parse_list(text: &str, what: &str) -> Result<Vec<f64>, Error> {
    text.split(',')
        .map(|v| v.trim().parse().map_err(|e| Error::Config(format!("{what}: {e}"))))
        .collect()
}

fn config_from_args(args: Args) -> Result<ExperimentConfig, Error> {
    let example = match args.example.as_str() {
        "multipeakon" => ExampleSpec::Multipeakon,
        "cusp" => ExampleSpec::Cusp,
        "cosine" => ExampleSpec::Cosine,
        "custom" => {
            let path = args
                .initial_data
                .clone()
                .ok_or_else(|| Error::Config("--example custom requires --initial-data".into()))?;
            ExampleSpec::Custom(path)
        }
        other => {
            return Err(Error::Config(format!(
                "unknown example {other:?}; expected multipeakon, cusp, cosine or custom"
            )))
        }
    };
    let mut cfg = ExperimentConfig::new(example);
    cfg.alpha = args.alpha;
    cfg.beta = args.beta;
    if let Some(dx) = args.dx_list {
        cfg.dx_list = dx;
    }
    cfg.grid_origin = args.grid_origin;
    if let Some(d) = &args.domain {
        cfg.domain = Some(parse_pair(d, "--domain")?);
    }
    if let Some(t) = args.t_final {
        cfg.t_final = t;
        cfg.snapshot_times = vec![0.0, t / 2.0, t];
    }
    cfg.n_time_samples = args.nt;
    if let Some(s) = &args.snapshots {
        cfg.snapshot_times = parse_list(s, "--snapshots")?;
    }
    cfg.output_dir = args.out;
    cfg.format = match args.format.as_str() {
        "csv" => OutputFormat::Csv,
        "json" => OutputFormat::Json,
        other => return Err(Error::Config(format!("unknown format {other:?}"))),
    };
    cfg.threads = args.threads;
    Ok(cfg)
}

fn print_table(table: &ErrorTable) {
    println!("dx,err_u_sup,err_Finf,err_A,order_u,order_Finf,order_A");
    for r in &table.rows {
        println!(
            "{},{},{},{},{},{},{}",
            r.dx,
            r.err_u_sup.map(|v| v.to_string()).unwrap_or_default(),
            if r.err_f_inf.is_nan() { String::new() } else { r.err_f_inf.to_string() },
            r.err_a.map(|v| v.to_string()).unwrap_or_default(),
            table.order_u,
            table.order_f,
            table.order_a,
        );
    }
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Config(_) | Error::Format(_) => 2,
        _ => 3,
    }
}

/// Parses flags, runs the experiment, prints the error table.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            // clap prints its own usage text; --help / --version are success
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let cfg = match config_from_args(args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    match run_experiment(&cfg) {
        Ok(table) => {
            print_table(&table);
            println!("artifacts written to {}", cfg.output_dir.display());
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_flag_exits_with_usage_error() {
        assert_eq!(cli_main(["hsx", "--no-such-flag"]), 2);
    }

    #[test]
    fn unknown_example_is_config_error() {
        assert_eq!(cli_main(["hsx", "--example", "vortex"]), 2);
    }

    #[test]
    fn cusp_beyond_valid_time_is_config_error() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("o");
        assert_eq!(
            cli_main([
                "hsx",
                "--example",
                "cusp",
                "--T",
                "5",
                "--out",
                out.to_str().unwrap()
            ]),
            2
        );
    }

    #[test]
    fn small_multipeakon_run_succeeds() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("o");
        let code = cli_main([
            "hsx",
            "--example",
            "multipeakon",
            "--alpha",
            "0.5",
            "--beta",
            "0.5",
            "--dx-list",
            "0.25,0.125,0.0625",
            "--T",
            "4",
            "--nt",
            "33",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        assert!(out.join("error_table.csv").exists());
        assert!(out.join("plots.gp").exists());
    }
}
