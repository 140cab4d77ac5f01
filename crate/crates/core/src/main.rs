use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use fmlearn::benchgen::{generate_test, DEFAULT_NOISE_RATIO};
use fmlearn::config::load_config;
use fmlearn::ontology::parse_ontology;
use fmlearn::runner::{self, SweepParam};

#[derive(Parser)]
#[command(name = "fmlearn", version, about = "Class expression learning with CELOE and forest mixing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Run one learning problem described by a config file.
    Learn {
        #[arg(long)]
        config: PathBuf,
        /// Print the search trace to stdout before the report.
        #[arg(long)]
        trace: bool,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Generate a synthetic learning problem from an ontology.
    Genbench {
        #[arg(long)]
        ontology: PathBuf,
        #[arg(long)]
        min_pos: usize,
        #[arg(long)]
        neg: usize,
        #[arg(long, default_value_t = DEFAULT_NOISE_RATIO)]
        noise: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Config fragment path; a JSON sidecar is written next to it.
        #[arg(long)]
        out: PathBuf,
    },
    /// Repeat a run over several values of one parameter and emit CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// maxNodesAddedPerTree, nbTrees or maxLength
        #[arg(long)]
        param: String,
        /// Comma-separated positive integers.
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        values: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match Cli::parse().command {
        Command::Learn {
            config,
            trace,
            out,
            format,
        } => {
            let mut cfg = load_config(&config)?;
            cfg.trace |= trace;
            let report = runner::run(&cfg)?;
            if let Some(lines) = &report.trace {
                let mut stdout = std::io::stdout().lock();
                for l in lines {
                    writeln!(stdout, "{l}")?;
                }
            }
            let body = match format {
                Format::Json => runner::report_json(&report),
                Format::Text => runner::report_text(&report),
            };
            emit(out.as_ref(), &body)
        }
        Command::Genbench {
            ontology,
            min_pos,
            neg,
            noise,
            seed,
            out,
        } => {
            let text = fs::read_to_string(&ontology)
                .with_context(|| format!("reading {}", ontology.display()))?;
            let o = parse_ontology(&text).with_context(|| format!("parsing {}", ontology.display()))?;
            let test = generate_test(&o, min_pos, neg, noise, seed)?;
            // configs resolve relative paths against their own directory
            let abs = fs::canonicalize(&ontology)?;
            let mut fragment = format!("ks.file = \"{}\"\n", abs.display());
            fragment.push_str(&test.config_fragment());
            fs::write(&out, fragment).with_context(|| format!("writing {}", out.display()))?;
            let sidecar = out.with_extension("json");
            fs::write(&sidecar, test.to_json() + "\n")
                .with_context(|| format!("writing {}", sidecar.display()))?;
            Ok(())
        }
        Command::Sweep {
            config,
            param,
            values,
            out,
        } => {
            let cfg = load_config(&config)?;
            let param: SweepParam = param.parse()?;
            let values = runner::parse_sweep_values(&values)?;
            let rows = runner::sweep(&cfg, param, &values)?;
            emit(out.as_ref(), &runner::sweep_csv(&rows))
        }
    }
}
