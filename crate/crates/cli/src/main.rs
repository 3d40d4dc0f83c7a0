use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use loewner_lab::config::{env_seed, ConfigError, Format, SuiteConfig};
use loewner_lab::constants::{constants_csv, constants_table};
use loewner_lab::{emit_report, read_instances, replay, run_oracle, run_suite, DEFAULT_ORACLE_POINTS};

#[derive(Parser)]
#[command(name = "loewner-lab", version, about = "Numerical certification of reverse operator inequalities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the randomized chain suite.
    Verify(SuiteFlags),
    /// Print the K, H, mu and H-limit constants.
    Constants {
        #[arg(long, default_value = "1:4,1.5:4,0.5:2")]
        bounds: String,
        /// Comma-separated t values.
        #[arg(long = "t", default_value = "-0.5,-1,-2,-3", allow_hyphen_values = true)]
        t: String,
        #[arg(long, default_value = "power:-1,power:-2,exp:1")]
        functions: String,
        #[arg(long, default_value = "csv")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-run the instances stored in a dump file.
    Replay { file: PathBuf },
    /// Compare every builder with the scalar oracle at n = 1.
    Oracle {
        #[command(flatten)]
        flags: SuiteFlags,
        #[arg(long, default_value_t = DEFAULT_ORACLE_POINTS)]
        points: usize,
    },
}

#[derive(Args)]
struct SuiteFlags {
    /// Flat `key = value` file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    results: Option<String>,
    #[arg(long)]
    dims: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    #[arg(long)]
    bounds: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    functions: Option<String>,
    #[arg(long)]
    maps: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    rtol: Option<String>,
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl SuiteFlags {
    fn build(&self) -> Result<SuiteConfig, ConfigError> {
        let mut config = SuiteConfig {
            seed: env_seed()?,
            ..SuiteConfig::default()
        };
        if let Some(path) = &self.config {
            config.apply_file(path)?;
        }
        let mut flags = BTreeMap::new();
        let pairs = [
            ("results", &self.results),
            ("dims", &self.dims),
            ("trials", &self.trials),
            ("bounds", &self.bounds),
            ("functions", &self.functions),
            ("maps", &self.maps),
            ("seed", &self.seed),
            ("rtol", &self.rtol),
            ("format", &self.format),
        ];
        for (k, v) in pairs {
            if let Some(v) = v {
                flags.insert(k, v.clone());
            }
        }
        if let Some(out) = &self.out {
            flags.insert("out", out.display().to_string());
        }
        config.apply_overrides(&flags)?;
        config.validate()?;
        Ok(config)
    }
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> anyhow::Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes)?,
        None => std::io::stdout().write_all(bytes)?,
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Verify(flags) => {
            let config = flags.build()?;
            let report = run_suite(&config)?;
            write_output(config.output_path.as_deref(), &emit_report(&report, config.format)?)?;
            eprint!("{}", loewner_lab::report::summary(&report));
            Ok(report.exit_code() as u8)
        }
        Command::Constants {
            bounds,
            t,
            functions,
            format,
            out,
        } => {
            let mut config = SuiteConfig::default();
            config.set("bounds", &bounds)?;
            config.set("functions", &functions)?;
            let format: Format = format.parse().map_err(|e: String| ConfigError::new("format", e))?;
            let ts = t
                .split(',')
                .map(|s| s.trim().parse::<f64>().map_err(|e| ConfigError::new("t", e.to_string())))
                .collect::<Result<Vec<_>, _>>()?;
            let rows = constants_table(&config.bounds, &ts, &config.functions);
            let bytes = match format {
                Format::Csv => constants_csv(&rows)?,
                Format::Json => serde_json::to_vec_pretty(&rows)?,
            };
            write_output(out.as_deref(), &bytes)?;
            Ok(0)
        }
        Command::Replay { file } => {
            let text = std::fs::read_to_string(&file)?;
            let mut code = 0;
            let mut reports = Vec::new();
            for inst in read_instances(&text)? {
                match replay(&inst) {
                    Ok(r) => {
                        if !r.holds() {
                            code = 2;
                        }
                        reports.push(serde_json::to_value(&r)?);
                    }
                    Err(e) => {
                        code = 2;
                        reports.push(serde_json::json!({ "error": e.to_string() }));
                    }
                }
            }
            let mut bytes = serde_json::to_vec_pretty(&reports)?;
            bytes.push(b'\n');
            write_output(None, &bytes)?;
            Ok(code)
        }
        Command::Oracle { flags, points } => {
            let config = flags.build()?;
            let mut code = 0;
            for r in run_oracle(&config, points)? {
                if !r.agrees() {
                    code = 2;
                }
                println!(
                    "{:<22} {:<14} [{}]  points {}  oracle violations {}  disagreements {}",
                    r.result.as_str(),
                    r.family.to_string(),
                    r.bounds,
                    r.points,
                    r.oracle_violations,
                    r.disagreements.len()
                );
            }
            Ok(code)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            if e.downcast_ref::<ConfigError>().is_some() {
                ExitCode::from(3)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
