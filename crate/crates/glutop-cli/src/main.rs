//! `glutop`: load and validate finite categories and diagrams, build
//! classifiers and dependent products, cross-check them against brute-force
//! oracles, and run the acceptance suite.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use glutop_cli::schema::load_category;
use glutop_cli::{run, suite, CliError, OutputFormat, RunConfig};

#[derive(Parser)]
#[command(
    name = "glutop",
    about = "Logical structure on finite-set diagram categories",
    version
)]
struct Cli {
    /// Candidate budget for enumerations (env GLUTOP_CAP overrides).
    #[arg(long, global = true)]
    cap: Option<usize>,
    /// Zigzag word-length budget for localization representatives.
    #[arg(long, global = true)]
    word_cap: Option<usize>,
    /// Budget on distinct localization classes per hom-set.
    #[arg(long, global = true)]
    homset_cap: Option<usize>,
    /// Seed for the instance generators.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output format: json, dot, or summary.
    #[arg(long, global = true, default_value = "json")]
    format: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every applicable validator over the given files.
    Validate { paths: Vec<PathBuf> },
    /// The subobject classifier of the file's diagram category.
    Omega {
        category: PathBuf,
        /// Use the cosieve oracle instead of the degreewise construction.
        #[arg(long)]
        oracle: bool,
        /// Cross-verify both routes and emit the natural isomorphism.
        #[arg(long)]
        check: bool,
    },
    /// The dependent product of g: C -> B along f: B -> A.
    Pi {
        category: PathBuf,
        f: PathBuf,
        g: PathBuf,
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        check: bool,
    },
    /// The characteristic map of a pointwise mono.
    Char { category: PathBuf, mono: PathBuf },
    /// The matching object of a diagram at one index object.
    Matching {
        category: PathBuf,
        diagram: PathBuf,
        object: String,
    },
    /// Extend a diagram on the strict truncation by matching objects.
    Cosk {
        category: PathBuf,
        diagram: PathBuf,
        n: u32,
    },
    /// The demo gluings (identity, limit over the discrete pair).
    GlueDemo {
        #[arg(long, default_value = "identity")]
        functor: String,
    },
    /// Compare the homotopical and ordinary dependent products.
    Homotopy {
        localization: PathBuf,
        f: PathBuf,
        g: PathBuf,
    },
    /// Localize a category at its declared weak equivalences.
    Localize { category: PathBuf },
    /// Brute-force oracle commands.
    Oracle {
        #[command(subcommand)]
        which: OracleCommand,
    },
    /// Run the acceptance suite.
    Suite {
        /// Number of seeded corpus instances per criterion.
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// The cosieve classifier of an arbitrary finite category.
    Omega { category: PathBuf },
    /// The sections-formula dependent product.
    Pi {
        category: PathBuf,
        f: PathBuf,
        g: PathBuf,
    },
    /// Cross-verify both classifier routes on sampled monos.
    Verify {
        category: PathBuf,
        #[arg(long, default_value_t = 20)]
        monos: usize,
    },
}

fn config_from(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::default();
    if let Some(cap) = cli.cap {
        cfg.candidate_cap = cap;
    }
    if let Ok(env_cap) = std::env::var("GLUTOP_CAP") {
        cfg.candidate_cap = env_cap
            .parse()
            .map_err(|_| CliError::Parse(format!("GLUTOP_CAP: `{env_cap}` is not a number")))?;
    }
    if let Some(w) = cli.word_cap {
        cfg.word_cap = w;
    }
    if let Some(h) = cli.homset_cap {
        cfg.homset_cap = h;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    cfg.format = match cli.format.as_str() {
        "json" => OutputFormat::Json,
        "dot" => OutputFormat::Dot,
        "summary" => OutputFormat::Summary,
        other => {
            return Err(CliError::Parse(format!(
                "unknown format `{other}` (expected json, dot, or summary)"
            )))
        }
    };
    Ok(cfg)
}

fn emit(value: &serde_json::Value, cfg: &RunConfig) {
    match cfg.format {
        OutputFormat::Json => println!("{}", serde_json::to_string_pretty(value).unwrap()),
        OutputFormat::Summary => {
            if let Some(sizes) = value.get("sizes") {
                println!("{}", serde_json::to_string(sizes).unwrap());
            } else {
                println!("{}", serde_json::to_string(value).unwrap());
            }
        }
        OutputFormat::Dot => println!("{}", serde_json::to_string_pretty(value).unwrap()),
    }
}

fn dispatch(cli: &Cli, cfg: &RunConfig) -> Result<i32, CliError> {
    match &cli.command {
        Command::Validate { paths } => {
            let (report, clean) = run::cmd_validate(paths)?;
            emit(&report, cfg);
            Ok(if clean { 0 } else { 1 })
        }
        Command::Omega {
            category,
            oracle,
            check,
        } => {
            if cfg.format == OutputFormat::Dot {
                let file = load_category(category)?;
                let cat = file.build()?;
                println!(
                    "{}",
                    glutop_cli::dot::category_dot(&cat, file.weq_set().as_ref())
                );
                return Ok(0);
            }
            let out = run::cmd_omega(category, *oracle, *check, cfg)?;
            emit(&out, cfg);
            Ok(0)
        }
        Command::Pi {
            category,
            f,
            g,
            oracle,
            check,
        } => {
            let out = run::cmd_pi(category, f, g, *oracle, *check, cfg)?;
            emit(&out, cfg);
            Ok(0)
        }
        Command::Char { category, mono } => {
            let out = run::cmd_char(category, mono, cfg)?;
            emit(&out, cfg);
            Ok(0)
        }
        Command::Matching {
            category,
            diagram,
            object,
        } => {
            let out = run::cmd_matching(category, diagram, object, cfg)?;
            emit(&out, cfg);
            Ok(0)
        }
        Command::Cosk {
            category,
            diagram,
            n,
        } => {
            let out = run::cmd_cosk(category, diagram, *n, cfg)?;
            emit(&out, cfg);
            Ok(0)
        }
        Command::GlueDemo { functor } => {
            let out = run::cmd_glue_demo(functor, cfg)?;
            emit(&out, cfg);
            Ok(0)
        }
        Command::Homotopy { localization, f, g } => {
            let out = run::cmd_homotopy(localization, f, g, cfg)?;
            emit(&out, cfg);
            Ok(0)
        }
        Command::Localize { category } => {
            let out = run::cmd_localize(category, cfg)?;
            if cfg.format == OutputFormat::Dot {
                let loc_target = out
                    .get("target")
                    .cloned()
                    .unwrap_or(serde_json::Value::Null);
                let file: glutop_cli::schema::CategoryFile = serde_json::from_value(loc_target)?;
                println!("{}", glutop_cli::dot::category_dot(&file.build()?, None));
                return Ok(0);
            }
            emit(&out, cfg);
            Ok(0)
        }
        Command::Oracle { which } => match which {
            OracleCommand::Omega { category } => {
                let out = run::cmd_omega(category, true, false, cfg)?;
                emit(&out, cfg);
                Ok(0)
            }
            OracleCommand::Pi { category, f, g } => {
                let out = run::cmd_pi(category, f, g, true, false, cfg)?;
                emit(&out, cfg);
                Ok(0)
            }
            OracleCommand::Verify { category, monos } => {
                let out = run::cmd_oracle_verify(category, *monos, cfg)?;
                emit(&out, cfg);
                Ok(0)
            }
        },
        Command::Suite { count } => Ok(if suite::run_suite(cfg, *count) { 0 } else { 1 }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match config_from(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match dispatch(&cli, &cfg) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
