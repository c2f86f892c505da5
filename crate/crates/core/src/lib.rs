//! A small dependently-typed proof checker.
//!
//! Terms are checked bidirectionally; definitional equality is decided by
//! normalization by evaluation with η for functions, pairs and `Unit`.

pub mod check;
pub mod conv;
pub mod env;
pub mod error;
pub mod eval;
pub mod loader;
pub mod parser;
pub mod pretty;
pub mod syntax;

pub use check::{Checker, TypingContext};
pub use env::{CheckOptions, Entry, GlobalEnv};
pub use error::{Diagnostic, ErrorKind, SourceFile, Span};
pub use eval::{Evaluator, Fuel, Value};
pub use syntax::{DeclKind, Declaration, Name, RcTerm, Term};
