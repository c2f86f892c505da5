use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use notears::check::{Checker, TypingContext};
use notears::env::CheckOptions;
use notears::error::{Diagnostic, SourceFile};
use notears::eval::Fuel;
use notears::loader::{self, LoadError, LoaderConfig, Outcome, Workspace, STACK_SIZE};
use notears::parser::{parse_expr_source, resolve_term};
use notears::pretty::pretty;

#[derive(Parser, Debug)]
#[command(
    name = "notears",
    version,
    about = "A small dependently-typed proof checker"
)]
struct Cli {
    /// Directory to search for imported modules (repeatable).
    #[arg(long = "path", global = true, value_name = "DIR")]
    path: Vec<PathBuf>,

    /// Number of modules checked in parallel.
    #[arg(long, global = true, default_value_t = 1,
          value_parser = clap::value_parser!(u64).range(1..))]
    jobs: u64,

    /// Bound on evaluation steps per declaration.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    fuel: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check files and everything they import.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Print the normal form and type of an expression.
    Normalize {
        #[arg(short = 'm', long = "module")]
        module: String,
        expression: String,
    },
    /// List the axioms a declaration depends on.
    Axioms {
        #[arg(short = 'm', long = "module")]
        module: String,
        name: String,
    },
}

const SUCCESS: u8 = 0;
const FAILURE: u8 = 1;
const USAGE: u8 = 2;

fn search_path(cli: &Cli) -> Vec<PathBuf> {
    if !cli.path.is_empty() {
        cli.path.clone()
    } else {
        std::env::var_os("NOTEARS_PATH")
            .map(|v| {
                std::env::split_paths(&v)
                    .filter(|p| !p.as_os_str().is_empty())
                    .collect()
            })
            .unwrap_or_default()
    }
}

fn config(cli: &Cli) -> LoaderConfig {
    LoaderConfig {
        search_path: search_path(cli),
        stdlib: Some(loader::builtin_stdlib()),
        options: CheckOptions { fuel: cli.fuel },
        jobs: cli.jobs as usize,
    }
}

fn report(ws: &Workspace, out: &Outcome) {
    let mut err = std::io::stderr().lock();
    for (m, d) in &out.diagnostics {
        let _ = writeln!(err, "{}", d.render(&ws.module(*m).file));
    }
}

fn load_error(e: LoadError) -> u8 {
    match e {
        // Already rendered with its location.
        LoadError::Located(d) => eprintln!("{d}"),
        e => eprintln!("error: {e}"),
    }
    USAGE
}

/// Loads `-m` module; on failure reports and returns the exit code.
fn load_module(cli: &Cli, name: &str) -> Result<(Workspace, Outcome), u8> {
    let (ws, out) = loader::check_module_named(config(cli), name).map_err(load_error)?;
    if !out.success() {
        report(&ws, &out);
        return Err(FAILURE);
    }
    Ok((ws, out))
}

fn cmd_check(cli: &Cli, files: &[PathBuf]) -> u8 {
    let (ws, out) = match loader::check_files(config(cli), files) {
        Ok(r) => r,
        Err(e) => return load_error(e),
    };
    report(&ws, &out);
    println!(
        "checked {} declarations in {} files",
        out.declarations(),
        ws.modules().len()
    );
    if out.success() {
        SUCCESS
    } else {
        FAILURE
    }
}

fn cmd_normalize(cli: &Cli, module: &str, expression: &str) -> u8 {
    let (ws, out) = match load_module(cli, module) {
        Ok(r) => r,
        Err(code) => return code,
    };
    let m = ws.index_of(module).expect("loaded module");
    let visible = ws.visible_from(m);
    let env = &out.env;
    let scope = |x: &str| env.get(x).is_some_and(|e| visible.contains(&e.module));
    let file = SourceFile::new("<expression>", expression);
    let fail = |d: Diagnostic| {
        eprintln!("{}", d.render(&file));
        FAILURE
    };
    let term = match parse_expr_source(expression).and_then(|t| resolve_term(&t, &[], &scope)) {
        Ok(t) => t,
        Err(d) => return fail(d),
    };
    let fuel = cli.fuel.map_or_else(Fuel::unlimited, Fuel::limited);
    let checker = Checker::with_fuel(env, fuel);
    let whole = notears::error::Span::new(0, expression.len());
    let mut ctx = TypingContext::new();
    let result = checker.infer(&mut ctx, &term).and_then(|(t, ty)| {
        let nf = checker.eval.normalize(0, &t)?;
        let ty = checker.eval.readback(0, &ty)?;
        Ok((nf, ty))
    });
    match result {
        Ok((nf, ty)) => {
            println!("{} : {}", pretty(&nf, &[]), pretty(&ty, &[]));
            SUCCESS
        }
        Err(kind) => fail(Diagnostic::new(whole, kind)),
    }
}

fn cmd_axioms(cli: &Cli, module: &str, name: &str) -> u8 {
    let (ws, out) = match load_module(cli, module) {
        Ok(r) => r,
        Err(code) => return code,
    };
    let visible = ws.visible_from(ws.index_of(module).expect("loaded module"));
    let closure = match out.env.get(name) {
        Some(e) if visible.contains(&e.module) => out.env.axiom_closure(name),
        _ => Err(notears::error::ErrorKind::UnknownName(name.to_owned())),
    };
    match closure {
        Ok(axioms) => {
            let mut stdout = std::io::stdout().lock();
            for a in axioms {
                let _ = writeln!(stdout, "{a}");
            }
            SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            FAILURE
        }
    }
}

fn run(cli: Cli) -> u8 {
    match &cli.command {
        Command::Check { files } => cmd_check(&cli, files),
        Command::Normalize { module, expression } => cmd_normalize(&cli, module, expression),
        Command::Axioms { module, name } => cmd_axioms(&cli, module, name),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { SUCCESS };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    // Checking recurses over terms; give it room.
    let code = std::thread::Builder::new()
        .stack_size(STACK_SIZE)
        .spawn(move || run(cli))
        .expect("spawn main thread")
        .join()
        .unwrap_or(FAILURE);
    ExitCode::from(code)
}
