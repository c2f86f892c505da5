//! Name resolution: surface terms to de Bruijn-indexed core terms.

use std::collections::HashSet;
use std::sync::Arc;

use crate::error::{Diagnostic, ErrorKind};
use crate::parser::surface::{DeclSort, ModuleFile, Prim, SurfaceDecl, SurfaceKind, SurfaceTerm};
use crate::syntax::{shift, DeclKind, Declaration, Name, RcTerm, Term};

/// Which global names a piece of source may refer to.
pub trait Scope {
    fn is_global(&self, name: &str) -> bool;
}

impl<F: Fn(&str) -> bool> Scope for F {
    fn is_global(&self, name: &str) -> bool {
        self(name)
    }
}

struct Resolver<'s> {
    scope: &'s dyn Scope,
    /// Declarations made earlier in the same module.
    pending: &'s HashSet<String>,
    locals: Vec<String>,
}

impl Resolver<'_> {
    fn lookup(&self, x: &str, t: &SurfaceTerm) -> Result<RcTerm, Diagnostic> {
        if x != "_" {
            if let Some(pos) = self.locals.iter().rposition(|l| l == x) {
                return Ok(Term::var(self.locals.len() - 1 - pos));
            }
            if self.pending.contains(x) || self.scope.is_global(x) {
                return Ok(Term::constant(x));
            }
        }
        Err(Diagnostic::new(
            t.span,
            ErrorKind::UnboundIdentifier(x.to_owned()),
        ))
    }

    fn under<R>(&mut self, x: &str, f: impl FnOnce(&mut Self) -> R) -> R {
        self.locals.push(x.to_owned());
        let r = f(self);
        self.locals.pop();
        r
    }

    fn term(&mut self, t: &SurfaceTerm) -> Result<RcTerm, Diagnostic> {
        Ok(match &t.kind {
            SurfaceKind::Var(x) => self.lookup(x, t)?,
            SurfaceKind::Universe => Term::universe(),
            SurfaceKind::Nat => Term::nat(),
            SurfaceKind::Unit => Term::unit(),
            SurfaceKind::Star => Term::star(),
            SurfaceKind::Zero => Term::zero(),
            SurfaceKind::Numeral(n) => Term::numeral(*n),
            SurfaceKind::Prim(p) => self.primitive(*p, Vec::new()),
            SurfaceKind::Pi(x, a, b) => {
                let a = self.term(a)?;
                let b = self.under(x, |r| r.term(b))?;
                Arc::new(Term::Pi(Name::new(x), a, b))
            }
            SurfaceKind::Sigma(x, a, b) => {
                let a = self.term(a)?;
                let b = self.under(x, |r| r.term(b))?;
                Arc::new(Term::Sigma(Name::new(x), a, b))
            }
            SurfaceKind::Lam(x, b) => {
                let b = self.under(x, |r| r.term(b))?;
                Arc::new(Term::Lam(Name::new(x), b))
            }
            SurfaceKind::App(..) => {
                let mut args = Vec::new();
                let mut head = t;
                while let SurfaceKind::App(f, a) = &head.kind {
                    args.push(a.as_ref());
                    head = f;
                }
                args.reverse();
                let args = args
                    .into_iter()
                    .map(|a| self.term(a))
                    .collect::<Result<Vec<_>, _>>()?;
                match head.kind {
                    SurfaceKind::Prim(p) => self.primitive(p, args),
                    _ => Term::apps(self.term(head)?, args),
                }
            }
            SurfaceKind::Pair(a, b) => Term::pair(self.term(a)?, self.term(b)?),
            SurfaceKind::Fst(p) => Term::fst(self.term(p)?),
            SurfaceKind::Snd(p) => Term::snd(self.term(p)?),
            SurfaceKind::Ann(a, b) => Term::ann(self.term(a)?, self.term(b)?),
        })
    }

    /// Builds a saturated primitive, eta-expanding if arguments are missing
    /// and re-applying any surplus.
    fn primitive(&self, p: Prim, mut args: Vec<RcTerm>) -> RcTerm {
        let arity = p.arity();
        let missing = arity.saturating_sub(args.len());
        let rest = if args.len() > arity {
            args.split_off(arity)
        } else {
            Vec::new()
        };
        let mut full: Vec<RcTerm> = args.iter().map(|a| shift(a, missing as isize, 0)).collect();
        full.extend((0..missing).rev().map(Term::var));
        let mut it = full.into_iter();
        let mut next = || it.next().unwrap();
        let core = match p {
            Prim::Suc => Term::suc(next()),
            Prim::Refl => Term::refl(next()),
            Prim::Id => Term::id(next(), next(), next()),
            Prim::NatElim => Term::nat_elim(next(), next(), next(), next()),
            Prim::J => Term::j(next(), next(), next(), next(), next(), next()),
        };
        let wrapped = (0..missing).fold(core, |body, _| Term::lam("x", body));
        Term::apps(wrapped, rest)
    }
}

/// Resolves a standalone expression under local binders `locals`
/// (outermost first).
pub fn resolve_term(
    t: &SurfaceTerm,
    locals: &[String],
    scope: &dyn Scope,
) -> Result<RcTerm, Diagnostic> {
    let pending = HashSet::new();
    let mut r = Resolver {
        scope,
        pending: &pending,
        locals: locals.to_vec(),
    };
    r.term(t)
}

/// Resolves one declaration; `pending` holds names declared earlier in the
/// same module that `scope` does not yet know about.
pub fn resolve_declaration(
    d: &SurfaceDecl,
    scope: &dyn Scope,
    pending: &HashSet<String>,
) -> Result<Declaration, Diagnostic> {
    let mut r = Resolver {
        scope,
        pending,
        locals: Vec::new(),
    };
    let mut param_types = Vec::new();
    for p in &d.params {
        param_types.push(r.term(&p.ty)?);
        r.locals.push(p.name.clone());
    }
    let ty = match &d.ty {
        Some(ty) => r.term(ty)?,
        None => {
            return Err(Diagnostic::new(d.span, ErrorKind::MissingResultType));
        }
    };
    let body = d.body.as_ref().map(|b| r.term(b)).transpose()?;
    let close_pi = |acc: RcTerm| {
        d.params
            .iter()
            .zip(&param_types)
            .rev()
            .fold(acc, |acc, (p, a)| Term::pi(&p.name, a.clone(), acc))
    };
    let close_lam = |acc: RcTerm| {
        d.params
            .iter()
            .rev()
            .fold(acc, |acc, p| Term::lam(&p.name, acc))
    };
    let kind = match (d.sort, body) {
        (DeclSort::Def, Some(body)) => DeclKind::Definition {
            ty: close_pi(ty),
            body: close_lam(body),
        },
        _ => DeclKind::Axiom { ty: close_pi(ty) },
    };
    Ok(Declaration {
        name: Arc::from(d.name.as_str()),
        kind,
        span: d.span,
    })
}

/// Resolves every declaration of `m` in order. Each declaration may refer
/// to names visible through `scope` and to earlier declarations of `m`.
pub fn resolve_module(m: &ModuleFile, scope: &dyn Scope) -> Result<Vec<Declaration>, Diagnostic> {
    let mut pending = HashSet::new();
    let mut out = Vec::new();
    for d in &m.declarations {
        if pending.contains(&d.name) || scope.is_global(&d.name) {
            return Err(Diagnostic::new(
                d.name_span,
                ErrorKind::DuplicateDefinition(d.name.clone()),
            ));
        }
        out.push(resolve_declaration(d, scope, &pending)?);
        pending.insert(d.name.clone());
    }
    Ok(out)
}
