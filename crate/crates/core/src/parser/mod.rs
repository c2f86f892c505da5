//! Surface language: lexing, parsing and name resolution.

pub mod lexer;
pub mod resolve;
pub mod surface;

pub use lexer::{lex, Spanned, Token};
pub use resolve::{resolve_declaration, resolve_module, resolve_term, Scope};
pub use surface::{
    parse_expression, parse_module, ModuleFile, SurfaceDecl, SurfaceKind, SurfaceTerm,
};

use crate::error::Diagnostic;

/// Lexes and parses a module.
pub fn parse_source(source: &str, module_name: &str) -> Result<ModuleFile, Diagnostic> {
    parse_module(&lex(source)?, source.len(), module_name)
}

/// Lexes and parses a single expression.
pub fn parse_expr_source(source: &str) -> Result<SurfaceTerm, Diagnostic> {
    parse_expression(&lex(source)?, source.len())
}
