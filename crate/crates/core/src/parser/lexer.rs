use std::fmt;

use crate::error::{Diagnostic, ErrorKind, Span};

pub const KEYWORDS: &[&str] = &[
    "def", "axiom", "import", "U", "Nat", "Unit", "star", "zero", "suc", "natElim", "Id", "refl",
    "J",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Token {
    Def,
    Axiom,
    Import,
    Universe,
    Nat,
    Unit,
    Star,
    Zero,
    Suc,
    NatElim,
    IdType,
    Refl,
    J,
    Ident(String),
    Number(String),
    Lambda,
    Dot,
    Proj1,
    Proj2,
    LParen,
    RParen,
    Comma,
    Colon,
    Define,
    Arrow,
    Times,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Token::Def => "`def`",
            Token::Axiom => "`axiom`",
            Token::Import => "`import`",
            Token::Universe => "`U`",
            Token::Nat => "`Nat`",
            Token::Unit => "`Unit`",
            Token::Star => "`star`",
            Token::Zero => "`zero`",
            Token::Suc => "`suc`",
            Token::NatElim => "`natElim`",
            Token::IdType => "`Id`",
            Token::Refl => "`refl`",
            Token::J => "`J`",
            Token::Ident(x) => return write!(f, "identifier `{x}`"),
            Token::Number(n) => return write!(f, "numeral `{n}`"),
            Token::Lambda => "`\\`",
            Token::Dot => "`.`",
            Token::Proj1 => "`.1`",
            Token::Proj2 => "`.2`",
            Token::LParen => "`(`",
            Token::RParen => "`)`",
            Token::Comma => "`,`",
            Token::Colon => "`:`",
            Token::Define => "`:=`",
            Token::Arrow => "`->`",
            Token::Times => "`*`",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spanned {
    pub token: Token,
    pub span: Span,
}

fn keyword(s: &str) -> Option<Token> {
    Some(match s {
        "def" => Token::Def,
        "axiom" => Token::Axiom,
        "import" => Token::Import,
        "U" => Token::Universe,
        "Nat" => Token::Nat,
        "Unit" => Token::Unit,
        "star" => Token::Star,
        "zero" => Token::Zero,
        "suc" => Token::Suc,
        "natElim" => Token::NatElim,
        "Id" => Token::IdType,
        "refl" => Token::Refl,
        "J" => Token::J,
        _ => return None,
    })
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

/// Splits source text into tokens, dropping whitespace and `--` comments.
pub fn lex(source: &str) -> Result<Vec<Spanned>, Diagnostic> {
    let bytes = source.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < source.len() {
        let c = source[i..].chars().next().unwrap();
        let start = i;
        let mut push = |token: Token, end: usize| {
            out.push(Spanned {
                token,
                span: Span::new(start, end),
            })
        };
        match c {
            c if c.is_whitespace() => {
                i += c.len_utf8();
                continue;
            }
            '-' if bytes.get(i + 1) == Some(&b'-') => {
                i = source[i..].find('\n').map_or(source.len(), |n| i + n);
                continue;
            }
            '-' if bytes.get(i + 1) == Some(&b'>') => {
                push(Token::Arrow, i + 2);
                i += 2;
            }
            ':' if bytes.get(i + 1) == Some(&b'=') => {
                push(Token::Define, i + 2);
                i += 2;
            }
            '.' if matches!(bytes.get(i + 1), Some(b'1' | b'2'))
                && !bytes
                    .get(i + 2)
                    .is_some_and(|b| is_ident_continue(*b as char)) =>
            {
                let tok = if bytes[i + 1] == b'1' {
                    Token::Proj1
                } else {
                    Token::Proj2
                };
                push(tok, i + 2);
                i += 2;
            }
            '\\' | '.' | '(' | ')' | ',' | ':' | '*' => {
                let tok = match c {
                    '\\' => Token::Lambda,
                    '.' => Token::Dot,
                    '(' => Token::LParen,
                    ')' => Token::RParen,
                    ',' => Token::Comma,
                    ':' => Token::Colon,
                    _ => Token::Times,
                };
                push(tok, i + 1);
                i += 1;
            }
            c if c.is_ascii_digit() => {
                let end = source[i..]
                    .find(|c: char| !c.is_ascii_digit())
                    .map_or(source.len(), |n| i + n);
                push(Token::Number(source[i..end].to_owned()), end);
                i = end;
            }
            c if is_ident_start(c) => {
                let end = source[i..]
                    .find(|c: char| !is_ident_continue(c))
                    .map_or(source.len(), |n| i + n);
                let word = &source[i..end];
                push(
                    keyword(word).unwrap_or_else(|| Token::Ident(word.to_owned())),
                    end,
                );
                i = end;
            }
            other => {
                return Err(Diagnostic::new(
                    Span::new(i, i + other.len_utf8()),
                    ErrorKind::IllegalCharacter(other),
                ))
            }
        }
    }
    Ok(out)
}
