use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use qshape_cli::commands::{self, parse_family, parse_window, Args};
use qshape_cli::selftest::DEFAULT_SEED;
use qshape_cli::{emit, error_json, run_on_text, EXIT_ERROR, EXIT_VERDICT_FALSE};

#[derive(Parser)]
#[command(
    name = "qshape",
    version,
    about = "Relative Q-shaped homological algebra over a field"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Workspace JSON file.
    #[arg(long, global = true)]
    workspace: Option<PathBuf>,
    /// Exact structure: abelian, split, or a name from the workspace.
    #[arg(long, global = true)]
    structure: Option<String>,
    /// Named test set (default: the regular module).
    #[arg(long, global = true)]
    testset: Option<String>,
    /// Degree window `lo..hi`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    window: Option<String>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Output format; only `json` is supported.
    #[arg(long, global = true, default_value = "json")]
    format: String,
}

#[derive(Subcommand)]
enum Command {
    /// Check the setup conditions of every shape and load everything else.
    Validate,
    /// Print a workspace holding a generated window presentation.
    GenMesh {
        /// cpx, ncpx:N or mesh:N
        #[arg(long)]
        family: String,
        #[arg(long, default_value = "F_101")]
        field: String,
    },
    Hom {
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
    },
    Ext {
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 1)]
        degree: usize,
    },
    Cohom {
        #[arg(long)]
        qmod: String,
        /// Stalk object of the generator S<q> ⊗ T.
        #[arg(long)]
        object: Option<String>,
        /// Test module T (default: the regular module).
        #[arg(long)]
        test: Option<String>,
        /// Use a module over the ground field as generator instead.
        #[arg(long)]
        generator: Option<String>,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        n: i64,
        #[arg(long, default_value_t = 1)]
        degree: usize,
    },
    Tac {
        #[arg(long)]
        qmod: String,
    },
    Trivial {
        #[arg(long)]
        qmod: String,
    },
    Weq {
        #[arg(long)]
        map: String,
    },
    StableHom {
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
    },
    DerivedHom {
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
    },
    Kernel {
        #[arg(long)]
        qmod: String,
    },
    /// Run the acceptance suite.
    Selftest {
        #[arg(long)]
        criterion: Option<u8>,
    },
}

fn run(cli: Cli) -> Result<commands::Report> {
    if cli.format != "json" {
        bail!("unsupported format `{}`", cli.format);
    }
    let window = cli.window.as_deref().map(parse_window).transpose()?;
    let mut args = Args {
        structure: cli.structure.clone(),
        testset: cli.testset.clone(),
        window,
        ..Args::default()
    };
    let name = match cli.command {
        Command::GenMesh { family, field } => {
            let (lo, hi) = window.unwrap_or((-4, 6));
            let body = commands::gen_mesh(&field, parse_family(&family)?, lo, hi)?;
            return Ok(commands::Report {
                body,
                verdict: true,
            });
        }
        Command::Selftest { criterion } => return commands::selftest(criterion, cli.seed),
        Command::Validate => "validate",
        Command::Hom { source, target } => {
            (args.source, args.target) = (Some(source), Some(target));
            "hom"
        }
        Command::Ext {
            source,
            target,
            degree,
        } => {
            (args.source, args.target, args.degree) = (Some(source), Some(target), Some(degree));
            "ext"
        }
        Command::Cohom {
            qmod,
            object,
            test,
            generator,
            n,
            degree,
        } => {
            args.qmod = Some(qmod);
            (args.object, args.test, args.generator) = (object, test, generator);
            (args.n, args.degree) = (Some(n), Some(degree));
            "cohom"
        }
        Command::Tac { qmod } => {
            args.qmod = Some(qmod);
            "tac"
        }
        Command::Trivial { qmod } => {
            args.qmod = Some(qmod);
            "trivial"
        }
        Command::Weq { map } => {
            args.map = Some(map);
            "weq"
        }
        Command::StableHom { source, target } => {
            (args.source, args.target) = (Some(source), Some(target));
            "stable-hom"
        }
        Command::DerivedHom { source, target } => {
            (args.source, args.target) = (Some(source), Some(target));
            "derived-hom"
        }
        Command::Kernel { qmod } => {
            args.qmod = Some(qmod);
            "kernel"
        }
    };
    let path = cli.workspace.as_ref().context("missing --workspace")?;
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    run_on_text(name, &text, &args)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(report) => {
            print!("{}", emit(&report.body));
            if report.verdict {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VERDICT_FALSE as u8)
            }
        }
        Err(e) => {
            print!("{}", emit(&error_json(&e)));
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
