//! Shared helpers for the integration tests.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::{Arc, OnceLock};

use notears::check::{Checker, TypingContext};
use notears::env::GlobalEnv;
use notears::error::ErrorKind;
use notears::eval::Value;
use notears::loader::{self, LoadError, LoaderConfig, STACK_SIZE};
use notears::parser::{parse_expr_source, resolve_term};
use notears::syntax::RcTerm;

pub const STDLIB_ORDER: [&str; 14] = [
    "Prelude",
    "PathOps",
    "Equiv",
    "EquivInverse",
    "HLevels",
    "Singleton",
    "SigmaAssoc",
    "SigmaReindex",
    "SigmaFiberwise",
    "ThreeForTwo",
    "Connectedness",
    "Suspension",
    "SuspConn",
    "Examples",
];

pub fn stdlib_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../stdlib")
}

pub fn stdlib_files() -> Vec<PathBuf> {
    STDLIB_ORDER
        .iter()
        .map(|m| stdlib_dir().join(format!("{m}.hott")))
        .collect()
}

pub fn neg_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/neg")
}

/// Runs `f` on a thread with room for deep recursion.
pub fn big_stack<R: Send + 'static>(f: impl FnOnce() -> R + Send + 'static) -> R {
    std::thread::Builder::new()
        .stack_size(STACK_SIZE)
        .spawn(f)
        .unwrap()
        .join()
        .unwrap_or_else(|e| std::panic::resume_unwind(e))
}

/// The whole standard library, checked once per test binary.
pub fn stdlib() -> Arc<GlobalEnv> {
    static ENV: OnceLock<Arc<GlobalEnv>> = OnceLock::new();
    ENV.get_or_init(|| {
        big_stack(|| {
            let (ws, out) = loader::check_files(LoaderConfig::default(), &stdlib_files())
                .expect("stdlib loads");
            let rendered: Vec<String> = out
                .diagnostics
                .iter()
                .map(|(m, d)| d.render(&ws.module(*m).file))
                .collect();
            assert!(
                rendered.is_empty(),
                "stdlib failed:\n{}",
                rendered.join("\n")
            );
            Arc::new(out.env)
        })
    })
    .clone()
}

/// Parses and resolves a closed expression against every name in `env`.
pub fn term(env: &GlobalEnv, src: &str) -> RcTerm {
    let t = parse_expr_source(src).unwrap_or_else(|d| panic!("parse `{src}`: {d}"));
    resolve_term(&t, &[], &|x: &str| env.contains(x))
        .unwrap_or_else(|d| panic!("resolve `{src}`: {d}"))
}

/// Infers a closed expression; returns the elaborated term and its type.
pub fn infer(env: &GlobalEnv, src: &str) -> Result<(RcTerm, Value), ErrorKind> {
    let t = term(env, src);
    Checker::new(env).infer(&mut TypingContext::new(), &t)
}

/// Checks a closed expression against a closed type.
pub fn check(env: &GlobalEnv, src: &str, ty: &str) -> Result<RcTerm, ErrorKind> {
    let checker = Checker::new(env);
    let mut ctx = TypingContext::new();
    let ty = checker.check_type(&mut ctx, &term(env, ty))?;
    let tv = checker.eval_in(&ctx, &ty)?;
    checker.check(&mut ctx, &term(env, src), &tv)
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the command-line checker with a clean search-path environment.
pub fn notears(args: &[&str]) -> Run {
    notears_in(args, None)
}

pub fn notears_in(args: &[&str], dir: Option<&Path>) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_notears"));
    cmd.args(args).env_remove("NOTEARS_PATH");
    if let Some(d) = dir {
        cmd.current_dir(d);
    }
    let out = cmd.output().expect("run notears");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

pub fn path_str(p: &Path) -> String {
    p.to_string_lossy().into_owned()
}

/// The `-- expect: CODE LINE [FILE]` header of a negative case.
pub struct Expect {
    pub code: String,
    pub line: usize,
    pub file: Option<String>,
}

pub fn expectation(path: &Path) -> Expect {
    let text = std::fs::read_to_string(path).unwrap();
    let header = text
        .lines()
        .next()
        .and_then(|l| l.strip_prefix("-- expect: "))
        .unwrap_or_else(|| panic!("{} has no expect header", path.display()));
    let mut parts = header.split_whitespace();
    Expect {
        code: parts.next().unwrap().to_owned(),
        line: parts.next().unwrap().parse().unwrap(),
        file: parts.next().map(str::to_owned),
    }
}

pub fn cases() -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(neg_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "hott"))
        .collect();
    v.sort();
    v
}

/// Errors found before checking starts are reported as load errors and
/// exit with status 2.
pub fn is_load_error(code: &str) -> bool {
    matches!(code, "ImportCycle" | "ModuleNotFound")
}

/// The error class of a negative case as seen through the library.
fn library_code(path: &Path) -> String {
    let config = LoaderConfig {
        search_path: vec![neg_dir().join("lib")],
        ..LoaderConfig::default()
    };
    let path = path.to_owned();
    big_stack(move || match loader::check_files(config, &[path]) {
        Ok((_, out)) if out.success() => "accepted".into(),
        Ok((_, out)) => out.diagnostics[0].1.kind.code().to_owned(),
        Err(LoadError::Located(msg)) if msg.contains("import cycle") => "ImportCycle".into(),
        Err(LoadError::Located(msg)) if msg.contains("not found in the search path") => {
            "ModuleNotFound".into()
        }
        Err(e) => format!("load error: {e}"),
    })
}

/// Checks one negative case through the library and the command line.
pub fn run_case(case: &Path) -> Result<(), String> {
    let want = expectation(case);
    let name = case.file_name().unwrap().to_string_lossy().into_owned();
    let mut problems = Vec::new();

    let code = library_code(case);
    if code != want.code {
        problems.push(format!("code {code}, expected {}", want.code));
    }

    let lib = path_str(&neg_dir().join("lib"));
    let run = notears(&["check", "--path", &lib, &path_str(case)]);
    let status = if is_load_error(&want.code) { 2 } else { 1 };
    if run.code != status {
        problems.push(format!("exit {}, expected {status}", run.code));
    }
    let first = run.stderr.lines().next().unwrap_or_default();
    let file = want
        .file
        .as_ref()
        .map_or_else(|| case.to_owned(), |f| neg_dir().join(f));
    let location = format!("{}:{}:", path_str(&file), want.line);
    if !first.starts_with(&location) || !first.contains(": error: ") {
        problems.push(format!("got `{first}`, expected `{location}...`"));
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(format!("{name}: {}", problems.join("; ")))
    }
}
