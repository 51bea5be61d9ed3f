use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cfgowl::bench::{r_squared, run_bench, to_csv, GrowthConfig};
use cfgowl::cfg2owl::{convert, ConversionConfig};
use cfgowl::grammar::{enumerate_language, to_cnf, validate, write_grammar, CnfMode, Grammar, Severity};
use cfgowl::owl::{count_axioms, serializer, Iri};
use cfgowl::pipeline::{load_alignment, load_grammar, load_sequence, Pipeline};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "cfgowl", version, about = "Context-free grammars as OWL ontologies")]
struct Cli {
    /// More log output (repeat for debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Strict,
    Relaxed,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Ttl,
    Omn,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassifyMode {
    Dl,
    Hybrid,
}

#[derive(Subcommand)]
enum Command {
    /// Rewrite a grammar into Chomsky Normal Form.
    Normalize {
        #[arg(long)]
        grammar: PathBuf,
        #[arg(long, value_enum, default_value = "strict")]
        mode: Mode,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Check that both grammars derive the same strings up to this length.
        #[arg(long)]
        verify_upto: Option<usize>,
    },
    /// Emit the OWL rendering of a grammar.
    Convert {
        #[arg(long)]
        grammar: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "ttl")]
        format: Format,
        #[arg(long, default_value = cfgowl::cfg2owl::DEFAULT_BASE)]
        base: String,
        /// IRI of the "directly precedes" property.
        #[arg(long)]
        next_iri: Option<String>,
    },
    /// Classify every element of a sequence.
    Classify {
        #[arg(long)]
        grammar: PathBuf,
        #[arg(long)]
        sequence: PathBuf,
        #[arg(long, value_enum, default_value = "dl")]
        mode: ClassifyMode,
        /// Brick variables for hybrid segmentation (comma separated).
        #[arg(long, value_delimiter = ',')]
        bricks: Option<Vec<String>>,
        /// Turtle ontologies merged before saturation.
        #[arg(long = "align", num_args = 1..)]
        align: Vec<PathBuf>,
        /// Leave VariableOne/VariableTwo out of the report.
        #[arg(long)]
        no_scaffolding: bool,
        /// Write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print JSON instead of the table.
        #[arg(long)]
        json: bool,
        #[arg(long, default_value = cfgowl::cfg2owl::DEFAULT_BASE)]
        base: String,
        #[arg(long)]
        next_iri: Option<String>,
    },
    /// Grow the grammar randomly and time both classification modes.
    Bench {
        #[arg(long)]
        grammar: PathBuf,
        #[arg(long)]
        sequence: PathBuf,
        #[arg(long, default_value_t = 20)]
        iterations: usize,
        #[arg(long, default_value_t = 5)]
        step: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        repeats: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Input(String),
    Invariant(String),
}

fn input(e: impl Display) -> Failure {
    Failure::Input(e.to_string())
}

fn write_out(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn config(base: &str, next_iri: Option<&str>) -> Result<ConversionConfig, Failure> {
    let mut cfg = ConversionConfig::new(Iri::new(base).map_err(input)?);
    if let Some(n) = next_iri {
        cfg = cfg.with_next(Iri::new(n).map_err(input)?);
    }
    Ok(cfg)
}

fn grammar(path: &Path) -> Result<Grammar, Failure> {
    let g = load_grammar(path).map_err(input)?;
    for d in validate(&g) {
        match d.severity {
            Severity::Error => log::error!("{}: {}", path.display(), d.message),
            Severity::Warning => log::warn!("{}: {}", path.display(), d.message),
        }
    }
    Ok(g)
}

fn relaxed(g: Grammar) -> Grammar {
    if g.is_relaxed_cnf() {
        g
    } else {
        log::info!("normalizing grammar to relaxed CNF");
        to_cnf(&g, CnfMode::Relaxed)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Normalize {
            grammar: path,
            mode,
            out,
            verify_upto,
        } => {
            let g = grammar(&path)?;
            let mode = match mode {
                Mode::Strict => CnfMode::Strict,
                Mode::Relaxed => CnfMode::Relaxed,
            };
            let n = to_cnf(&g, mode);
            if let Some(k) = verify_upto {
                let (a, b) = (enumerate_language(&g, k), enumerate_language(&n, k));
                if a != b {
                    return Err(Failure::Invariant(format!(
                        "normalized grammar derives different strings up to length {k}"
                    )));
                }
                log::info!("{} strings up to length {k} agree", a.len());
            }
            write_out(out.as_deref(), &write_grammar(&n))
        }
        Command::Convert {
            grammar: path,
            out,
            format,
            base,
            next_iri,
        } => {
            let cfg = config(&base, next_iri.as_deref())?;
            let g = relaxed(grammar(&path)?);
            let o = convert(&g, &cfg).map_err(input)?;
            let name = match format {
                Format::Ttl => "ttl",
                Format::Omn => "omn",
            };
            log::info!("{} axioms", count_axioms(&o));
            write_out(out.as_deref(), &serializer(name).map_err(input)?.serialize(&o))
        }
        Command::Classify {
            grammar: path,
            sequence,
            mode,
            bricks,
            align,
            no_scaffolding,
            out,
            json,
            base,
            next_iri,
        } => {
            let cfg = config(&base, next_iri.as_deref())?;
            let mut p = Pipeline::new(grammar(&path)?, load_sequence(&sequence).map_err(input)?);
            p.config = cfg;
            p.bricks = bricks;
            p.include_scaffolding = !no_scaffolding;
            for a in &align {
                p.alignments.push(load_alignment(a, &p.config).map_err(input)?);
            }
            let mode = match mode {
                ClassifyMode::Dl => "dl",
                ClassifyMode::Hybrid => "hybrid",
            };
            let r = p.run(mode).map_err(input)?;
            let report = &r.classification.report;
            if report.rows.len() != p.sequence.len() {
                return Err(Failure::Invariant("report does not cover the sequence".into()));
            }
            for w in &report.warnings {
                log::warn!("{w}");
            }
            let c = r.counts();
            log::info!(
                "{mode}: {} tbox + {} abox + {} alignment statements, {:?}",
                c.tbox,
                c.abox,
                c.alignment,
                r.elapsed
            );
            if let Some(o) = &out {
                write_out(Some(o), &(report.to_json() + "\n"))?;
            }
            if json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_table());
            }
            Ok(())
        }
        Command::Bench {
            grammar: path,
            sequence,
            iterations,
            step,
            seed,
            repeats,
            out,
        } => {
            if step == 0 {
                return Err(Failure::Input("--step must be at least 1".into()));
            }
            let g = relaxed(grammar(&path)?);
            let seq = load_sequence(&sequence).map_err(input)?;
            let growth = GrowthConfig {
                seed,
                iterations,
                step,
                repeats,
                ..GrowthConfig::default()
            };
            let rows = run_bench(&g, &seq, &ConversionConfig::default(), &growth).map_err(input)?;
            if rows.len() > 2 {
                let base = rows[0].productions_total as f64;
                let xs: Vec<f64> = rows.iter().map(|r| r.productions_total as f64 - base).collect();
                let ys: Vec<f64> = rows.iter().map(|r| r.axioms_total as f64).collect();
                log::info!("axioms vs added productions: R² = {:.5}", r_squared(&xs, &ys));
            }
            write_out(out.as_deref(), &to_csv(&rows))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).format_timestamp(None).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Invariant(msg)) => {
            eprintln!("invariant violated: {msg}");
            ExitCode::from(3)
        }
    }
}
