use std::io::{self, BufRead, IsTerminal, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use symcas_cli::{run_script, Options, OutputMode, Session};

/// Symbolic algebra REPL and script runner.
#[derive(Debug, Parser)]
#[command(name = "symcas", version)]
struct Args {
    /// Run one statement and exit.
    #[arg(long, value_name = "STMT", conflicts_with = "script")]
    eval: Option<String>,
    /// Run a script file, one statement per line.
    #[arg(long, value_name = "FILE")]
    script: Option<PathBuf>,
    /// Read statements interactively from standard input.
    #[arg(long, conflicts_with_all = ["eval", "script"])]
    repl: bool,
    /// Print expressions and matrices as LaTeX.
    #[arg(long)]
    latex: bool,
    /// Significant digits for numeric evaluation.
    #[arg(long, default_value_t = 15, value_parser = clap::value_parser!(u32).range(1..=10000))]
    digits: u32,
    /// Continue after a failing statement.
    #[arg(long)]
    keep_going: bool,
}

fn repl(session: &mut Session) -> ExitCode {
    let stdin = io::stdin();
    let interactive = stdin.is_terminal();
    let mut failed = false;
    let mut out = io::stdout();
    loop {
        if interactive {
            let _ = write!(out, "> ");
            let _ = out.flush();
        }
        let mut line = String::new();
        match stdin.lock().read_line(&mut line) {
            Ok(0) => break,
            Ok(_) => {}
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::FAILURE;
            }
        }
        let line = line.trim_end_matches(['\n', '\r']);
        match session.run_statement(line) {
            Ok(text) if text.is_empty() => {}
            Ok(text) => println!("{text}"),
            Err(d) => {
                eprintln!("{}", d.render(line));
                failed = true;
            }
        }
    }
    if failed && !interactive {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let mode = if args.latex { OutputMode::Latex } else { OutputMode::Infix };
    let mut session = Session::new(Options { mode, digits: args.digits as usize });
    if args.repl {
        return repl(&mut session);
    }
    let text = if let Some(stmt) = args.eval {
        stmt
    } else if let Some(path) = args.script {
        match std::fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", path.display());
                return ExitCode::FAILURE;
            }
        }
    } else {
        return repl(&mut session);
    };
    let run = run_script(&mut session, &text, args.keep_going);
    print!("{}", run.transcript);
    for d in &run.diagnostics {
        eprintln!("{d}");
    }
    if run.ok() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
