//! Named surface syntax and its recursive-descent parser.
//!
//! Precedence, loosest first: lambda and `->` (right-associative), then
//! `*` (right-associative), then application (left-associative), then
//! atoms with postfix `.1`/`.2`.

use crate::error::{Diagnostic, ErrorKind, Span};
use crate::parser::lexer::{Spanned, Token};

/// Nesting bound for the recursive-descent parser.
const MAX_NESTING: usize = 256;
/// Bound on the depth of a parsed term, including application spines.
pub const MAX_TERM_DEPTH: usize = 600;
/// Numerals desugar to `suc` chains; larger literals are rejected.
pub const MAX_NUMERAL: u64 = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Prim {
    Suc,
    Refl,
    Id,
    J,
    NatElim,
}

impl Prim {
    pub fn arity(self) -> usize {
        match self {
            Prim::Suc | Prim::Refl => 1,
            Prim::Id => 3,
            Prim::NatElim => 4,
            Prim::J => 6,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SurfaceKind {
    Var(String),
    Universe,
    Nat,
    Unit,
    Star,
    Zero,
    Numeral(u64),
    Prim(Prim),
    /// `(x : A) -> B`; a non-dependent arrow binds `_`.
    Pi(String, Box<SurfaceTerm>, Box<SurfaceTerm>),
    Sigma(String, Box<SurfaceTerm>, Box<SurfaceTerm>),
    Lam(String, Box<SurfaceTerm>),
    App(Box<SurfaceTerm>, Box<SurfaceTerm>),
    Pair(Box<SurfaceTerm>, Box<SurfaceTerm>),
    Fst(Box<SurfaceTerm>),
    Snd(Box<SurfaceTerm>),
    Ann(Box<SurfaceTerm>, Box<SurfaceTerm>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceTerm {
    pub kind: SurfaceKind,
    pub span: Span,
}

impl SurfaceTerm {
    fn new(kind: SurfaceKind, span: Span) -> SurfaceTerm {
        SurfaceTerm { kind, span }
    }

    fn children(&self) -> Vec<&SurfaceTerm> {
        match &self.kind {
            SurfaceKind::Pi(_, a, b)
            | SurfaceKind::Sigma(_, a, b)
            | SurfaceKind::App(a, b)
            | SurfaceKind::Pair(a, b)
            | SurfaceKind::Ann(a, b) => vec![a, b],
            SurfaceKind::Lam(_, a) | SurfaceKind::Fst(a) | SurfaceKind::Snd(a) => vec![a],
            _ => vec![],
        }
    }

    /// Depth of the tree, where a numeral counts as its `suc` chain.
    pub fn depth(&self) -> usize {
        let mut max = 0;
        let mut stack = vec![(self, 1usize)];
        while let Some((t, d)) = stack.pop() {
            let here = match t.kind {
                SurfaceKind::Numeral(n) => d + n as usize,
                _ => d,
            };
            max = max.max(here);
            stack.extend(t.children().into_iter().map(|c| (c, d + 1)));
        }
        max
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeclSort {
    Def,
    Axiom,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Param {
    pub name: String,
    pub ty: SurfaceTerm,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceDecl {
    pub sort: DeclSort,
    pub name: String,
    pub name_span: Span,
    pub params: Vec<Param>,
    pub ty: Option<SurfaceTerm>,
    pub body: Option<SurfaceTerm>,
    /// From the keyword to the end of the last token.
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Import {
    pub module: String,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModuleFile {
    pub module_name: String,
    pub imports: Vec<Import>,
    pub declarations: Vec<SurfaceDecl>,
}

struct Parser<'t> {
    tokens: &'t [Spanned],
    pos: usize,
    source_len: usize,
    nesting: usize,
    /// Start of the declaration being parsed, for unterminated-input errors.
    decl_start: Option<(usize, String)>,
}

type PResult<T> = Result<T, Diagnostic>;

impl<'t> Parser<'t> {
    fn peek(&self) -> Option<&'t Token> {
        self.tokens.get(self.pos).map(|t| &t.token)
    }

    fn peek_at(&self, i: usize) -> Option<&'t Token> {
        self.tokens.get(i).map(|t| &t.token)
    }

    fn span_here(&self) -> Span {
        match self.tokens.get(self.pos) {
            Some(t) => t.span,
            None => Span::new(self.source_len, self.source_len),
        }
    }

    fn prev_end(&self) -> usize {
        self.pos
            .checked_sub(1)
            .map_or(0, |i| self.tokens[i].span.end)
    }

    fn unexpected(&self, expected: &str) -> Diagnostic {
        match (self.peek(), &self.decl_start) {
            (None, Some((start, name))) => Diagnostic::new(
                Span::new(*start, self.source_len),
                ErrorKind::UnterminatedDeclaration(format!("`{name}` ends before {expected}")),
            ),
            (found, _) => Diagnostic::new(
                self.span_here(),
                ErrorKind::UnexpectedToken {
                    found: found.map_or("end of input".to_owned(), |t| t.to_string()),
                    expected: expected.to_owned(),
                },
            ),
        }
    }

    fn eat(&mut self, tok: &Token) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Token) -> PResult<Span> {
        let span = self.span_here();
        if self.eat(tok) {
            Ok(span)
        } else {
            Err(self.unexpected(&tok.to_string()))
        }
    }

    fn ident(&mut self) -> PResult<(String, Span)> {
        match self.peek() {
            Some(Token::Ident(x)) => {
                let span = self.span_here();
                self.pos += 1;
                Ok((x.clone(), span))
            }
            _ => Err(self.unexpected("an identifier")),
        }
    }

    fn enter(&mut self) -> PResult<()> {
        self.nesting += 1;
        if self.nesting > MAX_NESTING {
            Err(Diagnostic::new(self.span_here(), ErrorKind::NestingTooDeep))
        } else {
            Ok(())
        }
    }

    fn leave(&mut self) {
        self.nesting -= 1;
    }

    /// Index just past the `)` matching the `(` at `open`.
    fn matching_paren(&self, open: usize) -> Option<usize> {
        let mut depth = 0usize;
        for (i, t) in self.tokens.iter().enumerate().skip(open) {
            match t.token {
                Token::LParen => depth += 1,
                Token::RParen => {
                    depth -= 1;
                    if depth == 0 {
                        return Some(i + 1);
                    }
                }
                _ => {}
            }
        }
        None
    }

    /// Does a run of binder groups `(x y : A) (z : B)` start here and end
    /// right before `sep`?
    fn telescope_then(&self, sep: &Token) -> bool {
        let mut i = self.pos;
        loop {
            if self.peek_at(i) != Some(&Token::LParen) {
                return false;
            }
            let mut j = i + 1;
            while matches!(self.peek_at(j), Some(Token::Ident(_))) {
                j += 1;
            }
            if j == i + 1 || self.peek_at(j) != Some(&Token::Colon) {
                return false;
            }
            let Some(after) = self.matching_paren(i) else {
                return false;
            };
            match self.peek_at(after) {
                Some(t) if t == sep => return true,
                Some(Token::LParen) => i = after,
                _ => return false,
            }
        }
    }

    fn binder_group(&mut self) -> PResult<Vec<(String, Span, SurfaceTerm)>> {
        self.expect(&Token::LParen)?;
        let mut names = vec![self.ident()?];
        while let Some(Token::Ident(_)) = self.peek() {
            names.push(self.ident()?);
        }
        self.expect(&Token::Colon)?;
        let ty = self.expr()?;
        self.expect(&Token::RParen)?;
        Ok(names
            .into_iter()
            .map(|(x, span)| (x, span, ty.clone()))
            .collect())
    }

    fn telescope(&mut self) -> PResult<Vec<(String, Span, SurfaceTerm)>> {
        let mut binders = Vec::new();
        while self.peek() == Some(&Token::LParen) {
            binders.extend(self.binder_group()?);
        }
        Ok(binders)
    }

    fn close_binders(
        binders: Vec<(String, Span, SurfaceTerm)>,
        body: SurfaceTerm,
        make: fn(String, Box<SurfaceTerm>, Box<SurfaceTerm>) -> SurfaceKind,
    ) -> SurfaceTerm {
        binders.into_iter().rev().fold(body, |acc, (x, span, ty)| {
            let span = span.to(acc.span);
            SurfaceTerm::new(make(x, Box::new(ty), Box::new(acc)), span)
        })
    }

    fn expr(&mut self) -> PResult<SurfaceTerm> {
        self.enter()?;
        let r = self.expr_inner();
        self.leave();
        r
    }

    fn expr_inner(&mut self) -> PResult<SurfaceTerm> {
        if self.peek() == Some(&Token::Lambda) {
            let start = self.span_here();
            self.pos += 1;
            let mut names = vec![self.ident()?];
            while let Some(Token::Ident(_)) = self.peek() {
                names.push(self.ident()?);
            }
            self.expect(&Token::Dot)?;
            let body = self.expr()?;
            let end = body.span;
            return Ok(names.into_iter().rev().fold(body, |acc, (x, _)| {
                SurfaceTerm::new(SurfaceKind::Lam(x, Box::new(acc)), start.to(end))
            }));
        }
        if self.telescope_then(&Token::Arrow) {
            let binders = self.telescope()?;
            self.expect(&Token::Arrow)?;
            let body = self.expr()?;
            return Ok(Self::close_binders(binders, body, SurfaceKind::Pi));
        }
        let lhs = self.sigma()?;
        if self.eat(&Token::Arrow) {
            let rhs = self.expr()?;
            let span = lhs.span.to(rhs.span);
            return Ok(SurfaceTerm::new(
                SurfaceKind::Pi("_".into(), Box::new(lhs), Box::new(rhs)),
                span,
            ));
        }
        Ok(lhs)
    }

    fn sigma(&mut self) -> PResult<SurfaceTerm> {
        self.enter()?;
        let r = self.sigma_inner();
        self.leave();
        r
    }

    fn sigma_inner(&mut self) -> PResult<SurfaceTerm> {
        if self.telescope_then(&Token::Times) {
            let binders = self.telescope()?;
            self.expect(&Token::Times)?;
            let body = self.sigma()?;
            return Ok(Self::close_binders(binders, body, SurfaceKind::Sigma));
        }
        let lhs = self.app()?;
        if self.eat(&Token::Times) {
            let rhs = self.sigma()?;
            let span = lhs.span.to(rhs.span);
            return Ok(SurfaceTerm::new(
                SurfaceKind::Sigma("_".into(), Box::new(lhs), Box::new(rhs)),
                span,
            ));
        }
        Ok(lhs)
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Some(
                Token::Ident(_)
                    | Token::Number(_)
                    | Token::Universe
                    | Token::Nat
                    | Token::Unit
                    | Token::Star
                    | Token::Zero
                    | Token::Suc
                    | Token::NatElim
                    | Token::IdType
                    | Token::Refl
                    | Token::J
                    | Token::LParen
            )
        )
    }

    fn app(&mut self) -> PResult<SurfaceTerm> {
        let mut head = self.atom()?;
        while self.starts_atom() {
            let arg = self.atom()?;
            let span = head.span.to(arg.span);
            head = SurfaceTerm::new(SurfaceKind::App(Box::new(head), Box::new(arg)), span);
        }
        Ok(head)
    }

    fn atom(&mut self) -> PResult<SurfaceTerm> {
        let mut t = self.atom_base()?;
        loop {
            let span = self.span_here();
            let kind = if self.eat(&Token::Proj1) {
                SurfaceKind::Fst(Box::new(t))
            } else if self.eat(&Token::Proj2) {
                SurfaceKind::Snd(Box::new(t))
            } else {
                return Ok(t);
            };
            let whole = match &kind {
                SurfaceKind::Fst(inner) | SurfaceKind::Snd(inner) => inner.span.to(span),
                _ => unreachable!(),
            };
            t = SurfaceTerm::new(kind, whole);
        }
    }

    fn atom_base(&mut self) -> PResult<SurfaceTerm> {
        let span = self.span_here();
        let simple = |kind| Ok(SurfaceTerm::new(kind, span));
        let Some(tok) = self.peek() else {
            return Err(self.unexpected("a term"));
        };
        let kind = match tok {
            Token::Ident(x) => SurfaceKind::Var(x.clone()),
            Token::Number(n) => match n.parse::<u64>() {
                Ok(k) if k <= MAX_NUMERAL => SurfaceKind::Numeral(k),
                _ => return Err(Diagnostic::new(span, ErrorKind::NumeralTooLarge(n.clone()))),
            },
            Token::Universe => SurfaceKind::Universe,
            Token::Nat => SurfaceKind::Nat,
            Token::Unit => SurfaceKind::Unit,
            Token::Star => SurfaceKind::Star,
            Token::Zero => SurfaceKind::Zero,
            Token::Suc => SurfaceKind::Prim(Prim::Suc),
            Token::Refl => SurfaceKind::Prim(Prim::Refl),
            Token::IdType => SurfaceKind::Prim(Prim::Id),
            Token::J => SurfaceKind::Prim(Prim::J),
            Token::NatElim => SurfaceKind::Prim(Prim::NatElim),
            Token::LParen => return self.parenthesized(),
            _ => return Err(self.unexpected("a term")),
        };
        self.pos += 1;
        simple(kind)
    }

    fn parenthesized(&mut self) -> PResult<SurfaceTerm> {
        self.enter()?;
        let r = self.parenthesized_inner();
        self.leave();
        r
    }

    fn parenthesized_inner(&mut self) -> PResult<SurfaceTerm> {
        let open = self.expect(&Token::LParen)?;
        let first = self.expr()?;
        if self.eat(&Token::Colon) {
            let ty = self.expr()?;
            self.expect(&Token::RParen)?;
            let span = open.to(Span::new(self.prev_end(), self.prev_end()));
            return Ok(SurfaceTerm::new(
                SurfaceKind::Ann(Box::new(first), Box::new(ty)),
                span,
            ));
        }
        let mut items = vec![first];
        while self.eat(&Token::Comma) {
            items.push(self.expr()?);
        }
        if self.peek() != Some(&Token::RParen) {
            let expected = if items.len() == 1 {
                "`)`, `,` or `:`"
            } else {
                "`)` or `,`"
            };
            return Err(self.unexpected(expected));
        }
        self.pos += 1;
        let span = open.to(Span::new(self.prev_end(), self.prev_end()));
        let last = items.pop().unwrap();
        let mut t = items.into_iter().rev().fold(last, |acc, item| {
            let s = item.span.to(acc.span);
            SurfaceTerm::new(SurfaceKind::Pair(Box::new(item), Box::new(acc)), s)
        });
        t.span = span;
        Ok(t)
    }

    fn check_depth(&self, t: &SurfaceTerm) -> PResult<()> {
        if t.depth() > MAX_TERM_DEPTH {
            Err(Diagnostic::new(t.span, ErrorKind::NestingTooDeep))
        } else {
            Ok(())
        }
    }

    fn at_declaration_boundary(&self) -> bool {
        matches!(
            self.peek(),
            None | Some(Token::Def | Token::Axiom | Token::Import)
        )
    }

    fn declaration(&mut self) -> PResult<SurfaceDecl> {
        let start = self.span_here();
        let sort = if self.eat(&Token::Def) {
            DeclSort::Def
        } else {
            self.expect(&Token::Axiom)?;
            DeclSort::Axiom
        };
        let keyword = if sort == DeclSort::Def {
            "def"
        } else {
            "axiom"
        };
        self.decl_start = Some((start.start, keyword.to_owned()));
        let (name, name_span) = self.ident()?;
        self.decl_start = Some((start.start, name.clone()));
        let mut params = Vec::new();
        while self.peek() == Some(&Token::LParen) {
            for (x, _, ty) in self.binder_group()? {
                params.push(Param { name: x, ty });
            }
        }
        let ty = match sort {
            DeclSort::Axiom => {
                self.expect(&Token::Colon)?;
                Some(self.expr()?)
            }
            DeclSort::Def if self.eat(&Token::Colon) => Some(self.expr()?),
            DeclSort::Def => None,
        };
        let body = match sort {
            DeclSort::Axiom => None,
            DeclSort::Def => {
                self.expect(&Token::Define)?;
                Some(self.expr()?)
            }
        };
        if !self.at_declaration_boundary() {
            return Err(self.unexpected("a new declaration"));
        }
        for t in params.iter().map(|p| &p.ty).chain(&ty).chain(&body) {
            self.check_depth(t)?;
        }
        self.decl_start = None;
        Ok(SurfaceDecl {
            sort,
            name,
            name_span,
            params,
            ty,
            body,
            span: start.to(Span::new(self.prev_end(), self.prev_end())),
        })
    }
}

fn parser(tokens: &[Spanned], source_len: usize) -> Parser<'_> {
    Parser {
        tokens,
        pos: 0,
        source_len,
        nesting: 0,
        decl_start: None,
    }
}

/// Parses a whole module.
pub fn parse_module(
    tokens: &[Spanned],
    source_len: usize,
    module_name: &str,
) -> Result<ModuleFile, Diagnostic> {
    let mut p = parser(tokens, source_len);
    let mut imports = Vec::new();
    let mut declarations = Vec::new();
    while let Some(tok) = p.peek() {
        match tok {
            Token::Import => {
                let start = p.span_here();
                p.pos += 1;
                let (module, span) = p.ident()?;
                imports.push(Import {
                    module,
                    span: start.to(span),
                });
            }
            Token::Def | Token::Axiom => declarations.push(p.declaration()?),
            _ => return Err(p.unexpected("`def`, `axiom` or `import`")),
        }
    }
    Ok(ModuleFile {
        module_name: module_name.to_owned(),
        imports,
        declarations,
    })
}

/// Parses a single expression spanning all of `tokens`.
pub fn parse_expression(tokens: &[Spanned], source_len: usize) -> Result<SurfaceTerm, Diagnostic> {
    let mut p = parser(tokens, source_len);
    let t = p.expr()?;
    if p.peek().is_some() {
        return Err(p.unexpected("end of input"));
    }
    p.check_depth(&t)?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::lexer::lex;

    fn expr(s: &str) -> SurfaceTerm {
        parse_expression(&lex(s).unwrap(), s.len()).unwrap()
    }

    fn module(s: &str) -> Result<ModuleFile, Diagnostic> {
        parse_module(&lex(s).unwrap(), s.len(), "M")
    }

    /// Structural view with spans dropped.
    fn shape(t: &SurfaceTerm) -> String {
        use SurfaceKind::*;
        match &t.kind {
            Var(x) => x.clone(),
            Universe => "U".into(),
            Nat => "Nat".into(),
            Unit => "Unit".into(),
            Star => "star".into(),
            Zero => "zero".into(),
            Numeral(n) => n.to_string(),
            Prim(p) => format!("{p:?}"),
            Pi(x, a, b) => format!("Pi({x}, {}, {})", shape(a), shape(b)),
            Sigma(x, a, b) => format!("Sigma({x}, {}, {})", shape(a), shape(b)),
            Lam(x, b) => format!("Lam({x}, {})", shape(b)),
            App(f, a) => format!("App({}, {})", shape(f), shape(a)),
            Pair(a, b) => format!("Pair({}, {})", shape(a), shape(b)),
            Fst(p) => format!("Fst({})", shape(p)),
            Snd(p) => format!("Snd({})", shape(p)),
            Ann(a, b) => format!("Ann({}, {})", shape(a), shape(b)),
        }
    }

    #[test]
    fn one_definition() {
        let m = module("def idfun : (A : U) -> A -> A := \\A. \\x. x").unwrap();
        assert_eq!(m.declarations.len(), 1);
        let d = &m.declarations[0];
        assert_eq!(d.name, "idfun");
        assert_eq!(d.sort, DeclSort::Def);
        assert_eq!(shape(d.ty.as_ref().unwrap()), "Pi(A, U, Pi(_, A, A))");
        assert_eq!(shape(d.body.as_ref().unwrap()), "Lam(A, Lam(x, x))");
    }

    #[test]
    fn nested_pi_with_identity_body() {
        // Built by hand: Pi x:A. Pi y:A. ((Id A) x) y
        assert_eq!(
            shape(&expr("(x : A) -> (y : A) -> Id A x y")),
            "Pi(x, A, Pi(y, A, App(App(App(Id, A), x), y)))"
        );
    }

    #[test]
    fn unterminated_definition() {
        let err = module("def f := ").unwrap_err();
        assert!(matches!(err.kind, ErrorKind::UnterminatedDeclaration(_)));
        assert_eq!(err.span.start, 0);
    }

    #[test]
    fn associativity() {
        assert_eq!(shape(&expr("A -> B -> C")), "Pi(_, A, Pi(_, B, C))");
        assert_eq!(shape(&expr("A * B * C")), "Sigma(_, A, Sigma(_, B, C))");
        assert_eq!(shape(&expr("f a b")), "App(App(f, a), b)");
        assert_eq!(shape(&expr("A * B -> C")), "Pi(_, Sigma(_, A, B), C)");
        assert_eq!(
            shape(&expr("f p.1 q.2.1")),
            "App(App(f, Fst(p)), Fst(Snd(q)))"
        );
    }

    #[test]
    fn telescopes_and_groups() {
        assert_eq!(
            shape(&expr("(x y : A) (z : B) -> C")),
            "Pi(x, A, Pi(y, A, Pi(z, B, C)))"
        );
        assert_eq!(
            shape(&expr("(x : A) * (y : B) * C")),
            "Sigma(x, A, Sigma(y, B, C))"
        );
        assert_eq!(shape(&expr("(x : A)")), "Ann(x, A)");
        assert_eq!(shape(&expr("((x) : A) -> B")), "Pi(_, Ann(x, A), B)");
    }

    #[test]
    fn pairs_nest_to_the_right() {
        assert_eq!(shape(&expr("(a , b , c)")), "Pair(a, Pair(b, c))");
        assert_eq!(shape(&expr("(a)")), "a");
    }

    #[test]
    fn lambda_with_several_binders() {
        assert_eq!(shape(&expr("\\x y. x")), "Lam(x, Lam(y, x))");
    }

    #[test]
    fn declarations_with_parameters() {
        let m = module("import Prelude\naxiom A : U\ndef f (x y : A) : A := x").unwrap();
        assert_eq!(m.imports[0].module, "Prelude");
        assert_eq!(m.declarations.len(), 2);
        let f = &m.declarations[1];
        assert_eq!(f.params.len(), 2);
        assert_eq!(f.params[1].name, "y");
    }

    #[test]
    fn errors() {
        let err = module("def f : U := )").unwrap_err();
        assert!(matches!(err.kind, ErrorKind::UnexpectedToken { .. }));
        let err = module("def f : U := U U )").unwrap_err();
        assert!(matches!(err.kind, ErrorKind::UnexpectedToken { .. }));
        let err = module("U").unwrap_err();
        assert!(matches!(err.kind, ErrorKind::UnexpectedToken { .. }));
        let err = module("axiom a : (x : U").unwrap_err();
        assert!(matches!(err.kind, ErrorKind::UnterminatedDeclaration(_)));
        let err = module("def n : Nat := 100000000000000000000000").unwrap_err();
        assert!(matches!(err.kind, ErrorKind::NumeralTooLarge(_)));
    }

    #[test]
    fn deep_nesting_is_rejected() {
        let src = format!("def x : U := {}U{}", "(".repeat(5000), ")".repeat(5000));
        let err = module(&src).unwrap_err();
        assert_eq!(err.kind, ErrorKind::NestingTooDeep);
        let src = format!("def x : U := f{}", " a".repeat(5000));
        let err = module(&src).unwrap_err();
        assert_eq!(err.kind, ErrorKind::NestingTooDeep);
    }

    #[test]
    fn spans_are_ordered_and_in_bounds() {
        let src = "def f (A : U) : A -> A := \\x. (x , x).1";
        let m = module(src).unwrap();
        fn walk(t: &SurfaceTerm, len: usize) {
            assert!(t.span.start <= t.span.end && t.span.end <= len);
            for c in t.children() {
                walk(c, len);
            }
        }
        let d = &m.declarations[0];
        walk(d.body.as_ref().unwrap(), src.len());
        walk(d.ty.as_ref().unwrap(), src.len());
        assert_eq!(d.span, Span::new(0, src.len()));
    }
}
