use std::io::{self, BufRead, IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tml_cli::{Session, SessionError};
use tml_core::eval::{EvalConfig, DEFAULT_MAX_STEPS};
use tml_core::transform::Strategy;

#[derive(Parser)]
#[command(name = "tml", version, about = "Run and type-check programs over topological collections")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Type-check and evaluate a program, printing each top-level expression
    Run {
        file: PathBuf,
        /// Only print the inferred types
        #[arg(long)]
        type_only: bool,
        #[command(flatten)]
        opts: EvalOpts,
    },
    /// Print the principal type of every top-level item
    Type { file: PathBuf },
    /// Interactive loop
    Repl {
        #[command(flatten)]
        opts: EvalOpts,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Priority,
    Random,
}

#[derive(Args)]
struct EvalOpts {
    #[arg(long, value_enum, default_value = "priority")]
    strategy: StrategyArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Iteration budget of `fixpoint`
    #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
    max_steps: usize,
}

impl EvalOpts {
    fn config(&self) -> EvalConfig {
        let strategy = match self.strategy {
            StrategyArg::Priority => Strategy::Priority,
            StrategyArg::Random => Strategy::Random(self.seed),
        };
        EvalConfig { strategy, max_steps: self.max_steps }
    }
}

fn read(path: &Path) -> Result<String, ExitCode> {
    std::fs::read_to_string(path).map_err(|e| {
        eprintln!("cannot read {}: {e}", path.display());
        ExitCode::from(1)
    })
}

fn fail(e: &SessionError) -> ExitCode {
    eprintln!("{e}");
    ExitCode::from(e.exit_code())
}

fn cmd_type(src: &str) -> ExitCode {
    let session = Session::new(EvalConfig::default());
    let typed =
        session.parse(src).map_err(SessionError::from).and_then(|p| session.check(&p).map_err(SessionError::from));
    match typed {
        Ok(outcomes) => {
            for o in outcomes {
                println!("{o}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => fail(&e),
    }
}

fn cmd_run(src: &str, config: EvalConfig) -> ExitCode {
    let mut session = Session::new(config);
    let result = session.parse(src).map_err(SessionError::from).and_then(|p| {
        session.run(&p, |o| {
            if o.name.is_none() {
                println!("{o}");
            }
        })
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}

fn run_input(session: &mut Session, input: &str) {
    let result = session.parse(input).map_err(SessionError::from).and_then(|p| session.run(&p, |o| println!("{o}")));
    if let Err(e) = result {
        println!("{e}");
    }
}

/// Handles one complete input; returns false on `:quit`.
fn repl_input(session: &mut Session, input: &str) -> bool {
    let trimmed = input.trim();
    if let Some(rest) = trimmed.strip_prefix(':') {
        let (cmd, arg) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
        let arg = arg.trim().trim_end_matches(";;").trim();
        match cmd {
            "quit" | "q" => return false,
            "t" | "type" => match session.type_of(arg) {
                Ok(s) => println!("{s}"),
                Err(e) => println!("{e}"),
            },
            "load" => match std::fs::read_to_string(arg) {
                Ok(src) => run_input(session, &src),
                Err(e) => println!("cannot read {arg}: {e}"),
            },
            _ => println!("unknown command :{cmd}"),
        }
        return true;
    }
    run_input(session, trimmed);
    true
}

fn repl(config: EvalConfig) -> ExitCode {
    let mut session = Session::new(config);
    let interactive = io::stdin().is_terminal();
    let mut buffer = String::new();
    let prompt = |continued: bool| {
        if interactive {
            print!("{}", if continued { "  " } else { "# " });
            let _ = io::stdout().flush();
        }
    };
    prompt(false);
    for line in io::stdin().lock().lines() {
        let Ok(line) = line else { break };
        let command = buffer.is_empty() && line.trim_start().starts_with(':');
        buffer.push_str(&line);
        buffer.push('\n');
        let trimmed = buffer.trim();
        if trimmed.is_empty() {
            buffer.clear();
        } else if command || trimmed.ends_with(";;") {
            let input = std::mem::take(&mut buffer);
            if !repl_input(&mut session, &input) {
                return ExitCode::SUCCESS;
            }
        }
        prompt(!buffer.is_empty());
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { file, type_only, opts } => match read(&file) {
            Ok(src) if type_only => cmd_type(&src),
            Ok(src) => cmd_run(&src, opts.config()),
            Err(code) => code,
        },
        Command::Type { file } => match read(&file) {
            Ok(src) => cmd_type(&src),
            Err(code) => code,
        },
        Command::Repl { opts } => repl(opts.config()),
    }
}
