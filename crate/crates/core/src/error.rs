use std::fmt;
use std::path::{Path, PathBuf};

use thiserror::Error;

/// A byte range `start..end` into a source file.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Span {
        debug_assert!(start <= end);
        Span { start, end }
    }

    pub fn to(self, other: Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }
}

/// The text of one source file plus its line-start table.
#[derive(Clone, Debug)]
pub struct SourceFile {
    pub path: PathBuf,
    pub text: String,
    line_starts: Vec<usize>,
}

impl SourceFile {
    pub fn new(path: impl Into<PathBuf>, text: impl Into<String>) -> SourceFile {
        let text = text.into();
        let line_starts = std::iter::once(0)
            .chain(text.match_indices('\n').map(|(i, _)| i + 1))
            .collect();
        SourceFile {
            path: path.into(),
            text,
            line_starts,
        }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// 1-based line and column (in characters) of a byte offset.
    pub fn line_col(&self, offset: usize) -> (usize, usize) {
        let offset = offset.min(self.text.len());
        let line = match self.line_starts.binary_search(&offset) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let start = self.line_starts[line];
        let col = self.text[start..offset].chars().count();
        (line + 1, col + 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ErrorKind {
    #[error("illegal character {0:?}")]
    IllegalCharacter(char),
    #[error("unexpected {found}, expected {expected}")]
    UnexpectedToken { found: String, expected: String },
    #[error("unterminated declaration: {0}")]
    UnterminatedDeclaration(String),
    #[error("numeral {0} is too large")]
    NumeralTooLarge(String),
    #[error("expression nested too deeply")]
    NestingTooDeep,
    #[error("unbound identifier `{0}`")]
    UnboundIdentifier(String),
    #[error("duplicate definition of `{0}`")]
    DuplicateDefinition(String),
    #[error("a definition needs a type signature")]
    MissingResultType,
    #[error("cannot infer the type of {0}; add an annotation")]
    CannotInfer(String),
    #[error("not a function: `{term}` has type `{actual}`")]
    NotAFunction { term: String, actual: String },
    #[error("not a pair: `{term}` has type `{actual}`")]
    NotAPair { term: String, actual: String },
    #[error("not an identity type: `{term}` is checked against `{actual}`")]
    NotAnIdentityType { term: String, actual: String },
    #[error("type mismatch: expected `{expected}`, found `{actual}`")]
    TypeMismatch { expected: String, actual: String },
    #[error("type mismatch: `{term}` cannot have type `{expected}`")]
    CannotHaveType { term: String, expected: String },
    #[error("out of fuel: evaluation exceeded {0} steps")]
    OutOfFuel(u64),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("module `{0}` not found in the search path")]
    ModuleNotFound(String),
    #[error("import cycle: {0}")]
    ImportCycle(String),
}

impl ErrorKind {
    /// A stable short code for the error class.
    pub fn code(&self) -> &'static str {
        match self {
            ErrorKind::IllegalCharacter(_) => "IllegalCharacter",
            ErrorKind::UnexpectedToken { .. } => "UnexpectedToken",
            ErrorKind::UnterminatedDeclaration(_) => "UnterminatedDeclaration",
            ErrorKind::NumeralTooLarge(_) => "NumeralTooLarge",
            ErrorKind::NestingTooDeep => "NestingTooDeep",
            ErrorKind::UnboundIdentifier(_) => "UnboundIdentifier",
            ErrorKind::DuplicateDefinition(_) => "DuplicateDefinition",
            ErrorKind::MissingResultType => "MissingResultType",
            ErrorKind::CannotInfer(_) => "CannotInfer",
            ErrorKind::NotAFunction { .. } => "NotAFunction",
            ErrorKind::NotAPair { .. } => "NotAPair",
            ErrorKind::NotAnIdentityType { .. } => "NotAnIdentityType",
            ErrorKind::TypeMismatch { .. } | ErrorKind::CannotHaveType { .. } => "TypeMismatch",
            ErrorKind::OutOfFuel(_) => "OutOfFuel",
            ErrorKind::UnknownName(_) => "UnknownName",
            ErrorKind::ModuleNotFound(_) => "ModuleNotFound",
            ErrorKind::ImportCycle(_) => "ImportCycle",
        }
    }
}

/// An error located in a source file.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{kind}")]
pub struct Diagnostic {
    pub span: Span,
    pub kind: ErrorKind,
}

impl Diagnostic {
    pub fn new(span: Span, kind: ErrorKind) -> Diagnostic {
        Diagnostic { span, kind }
    }

    /// Renders as `file:line:col: error: message`.
    pub fn render(&self, file: &SourceFile) -> String {
        let (line, col) = file.line_col(self.span.start);
        format!(
            "{}:{}:{}: error: {}",
            file.path.display(),
            line,
            col,
            self.kind
        )
    }
}

/// Evaluation ran out of its step budget.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OutOfFuel(pub u64);

impl fmt::Display for OutOfFuel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "out of fuel after {} steps", self.0)
    }
}
