//! Core syntax: nameless terms and checked-declaration records.
//!
//! Variables are de Bruijn indices (innermost binder = 0). Binders keep a
//! [`Name`] hint that is only consulted by the pretty-printer.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::Span;

/// A binder name hint.
///
/// Two hints always compare equal, so deriving `PartialEq` on [`Term`]
/// yields α-equivalence.
#[derive(Clone, Eq)]
pub struct Name(Arc<str>);

impl Name {
    pub fn new(s: &str) -> Name {
        Name(Arc::from(s))
    }

    /// The hint used for binders that are never referenced.
    pub fn anon() -> Name {
        Name::new("_")
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_anon(&self) -> bool {
        &*self.0 == "_"
    }
}

impl PartialEq for Name {
    fn eq(&self, _other: &Name) -> bool {
        true
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Name {
        Name::new(s)
    }
}

pub type RcTerm = Arc<Term>;

#[derive(Clone, Debug, PartialEq)]
pub enum Term {
    Var(usize),
    Universe,
    Pi(Name, RcTerm, RcTerm),
    Lam(Name, RcTerm),
    App(RcTerm, RcTerm),
    Sigma(Name, RcTerm, RcTerm),
    Pair(RcTerm, RcTerm),
    Fst(RcTerm),
    Snd(RcTerm),
    Unit,
    Star,
    Nat,
    Zero,
    Suc(RcTerm),
    NatElim {
        motive: RcTerm,
        base: RcTerm,
        step: RcTerm,
        scrutinee: RcTerm,
    },
    Id(RcTerm, RcTerm, RcTerm),
    Refl(RcTerm),
    /// Based path induction: `J A a C d y p`.
    J {
        ty: RcTerm,
        base: RcTerm,
        motive: RcTerm,
        refl_case: RcTerm,
        other: RcTerm,
        path: RcTerm,
    },
    Const(Arc<str>),
    Ann(RcTerm, RcTerm),
}

// Smart constructors; they keep test and library code readable.
impl Term {
    pub fn var(i: usize) -> RcTerm {
        Arc::new(Term::Var(i))
    }
    pub fn pi(x: &str, dom: RcTerm, cod: RcTerm) -> RcTerm {
        Arc::new(Term::Pi(Name::new(x), dom, cod))
    }
    pub fn arrow(dom: RcTerm, cod: RcTerm) -> RcTerm {
        Arc::new(Term::Pi(Name::anon(), dom, shift(&cod, 1, 0)))
    }
    pub fn lam(x: &str, body: RcTerm) -> RcTerm {
        Arc::new(Term::Lam(Name::new(x), body))
    }
    pub fn app(f: RcTerm, a: RcTerm) -> RcTerm {
        Arc::new(Term::App(f, a))
    }
    pub fn apps(f: RcTerm, args: impl IntoIterator<Item = RcTerm>) -> RcTerm {
        args.into_iter().fold(f, Term::app)
    }
    pub fn sigma(x: &str, a: RcTerm, b: RcTerm) -> RcTerm {
        Arc::new(Term::Sigma(Name::new(x), a, b))
    }
    pub fn pair(a: RcTerm, b: RcTerm) -> RcTerm {
        Arc::new(Term::Pair(a, b))
    }
    pub fn fst(p: RcTerm) -> RcTerm {
        Arc::new(Term::Fst(p))
    }
    pub fn snd(p: RcTerm) -> RcTerm {
        Arc::new(Term::Snd(p))
    }
    pub fn suc(n: RcTerm) -> RcTerm {
        Arc::new(Term::Suc(n))
    }
    pub fn numeral(n: u64) -> RcTerm {
        (0..n).fold(Arc::new(Term::Zero), |acc, _| Term::suc(acc))
    }
    pub fn nat_elim(motive: RcTerm, base: RcTerm, step: RcTerm, scrutinee: RcTerm) -> RcTerm {
        Arc::new(Term::NatElim {
            motive,
            base,
            step,
            scrutinee,
        })
    }
    pub fn id(ty: RcTerm, lhs: RcTerm, rhs: RcTerm) -> RcTerm {
        Arc::new(Term::Id(ty, lhs, rhs))
    }
    pub fn refl(a: RcTerm) -> RcTerm {
        Arc::new(Term::Refl(a))
    }
    pub fn j(
        ty: RcTerm,
        base: RcTerm,
        motive: RcTerm,
        refl_case: RcTerm,
        other: RcTerm,
        path: RcTerm,
    ) -> RcTerm {
        Arc::new(Term::J {
            ty,
            base,
            motive,
            refl_case,
            other,
            path,
        })
    }
    pub fn constant(name: &str) -> RcTerm {
        Arc::new(Term::Const(Arc::from(name)))
    }
    pub fn ann(t: RcTerm, ty: RcTerm) -> RcTerm {
        Arc::new(Term::Ann(t, ty))
    }
    pub fn universe() -> RcTerm {
        Arc::new(Term::Universe)
    }
    pub fn nat() -> RcTerm {
        Arc::new(Term::Nat)
    }
    pub fn unit() -> RcTerm {
        Arc::new(Term::Unit)
    }
    pub fn star() -> RcTerm {
        Arc::new(Term::Star)
    }
    pub fn zero() -> RcTerm {
        Arc::new(Term::Zero)
    }

    /// If this is a closed `suc` chain ending in `zero`, its value.
    pub fn as_numeral(&self) -> Option<u64> {
        let mut n = 0;
        let mut t = self;
        loop {
            match t {
                Term::Zero => return Some(n),
                Term::Suc(inner) => {
                    n += 1;
                    t = inner;
                }
                _ => return None,
            }
        }
    }
}

/// Applies `f(child, extra_binders)` to every immediate subterm and rebuilds.
fn map_children(t: &Term, f: &mut impl FnMut(&RcTerm, usize) -> RcTerm) -> Term {
    match t {
        Term::Var(_)
        | Term::Universe
        | Term::Unit
        | Term::Star
        | Term::Nat
        | Term::Zero
        | Term::Const(_) => t.clone(),
        Term::Pi(x, a, b) => Term::Pi(x.clone(), f(a, 0), f(b, 1)),
        Term::Lam(x, b) => Term::Lam(x.clone(), f(b, 1)),
        Term::App(g, a) => Term::App(f(g, 0), f(a, 0)),
        Term::Sigma(x, a, b) => Term::Sigma(x.clone(), f(a, 0), f(b, 1)),
        Term::Pair(a, b) => Term::Pair(f(a, 0), f(b, 0)),
        Term::Fst(p) => Term::Fst(f(p, 0)),
        Term::Snd(p) => Term::Snd(f(p, 0)),
        Term::Suc(n) => Term::Suc(f(n, 0)),
        Term::NatElim {
            motive,
            base,
            step,
            scrutinee,
        } => Term::NatElim {
            motive: f(motive, 0),
            base: f(base, 0),
            step: f(step, 0),
            scrutinee: f(scrutinee, 0),
        },
        Term::Id(a, x, y) => Term::Id(f(a, 0), f(x, 0), f(y, 0)),
        Term::Refl(a) => Term::Refl(f(a, 0)),
        Term::J {
            ty,
            base,
            motive,
            refl_case,
            other,
            path,
        } => Term::J {
            ty: f(ty, 0),
            base: f(base, 0),
            motive: f(motive, 0),
            refl_case: f(refl_case, 0),
            other: f(other, 0),
            path: f(path, 0),
        },
        Term::Ann(a, b) => Term::Ann(f(a, 0), f(b, 0)),
    }
}

/// Visits every immediate subterm together with the number of binders it
/// sits under.
pub fn for_each_child(t: &Term, mut f: impl FnMut(&Term, usize)) {
    match t {
        Term::Var(_)
        | Term::Universe
        | Term::Unit
        | Term::Star
        | Term::Nat
        | Term::Zero
        | Term::Const(_) => {}
        Term::Pi(_, a, b) | Term::Sigma(_, a, b) => {
            f(a, 0);
            f(b, 1);
        }
        Term::Lam(_, b) => f(b, 1),
        Term::App(a, b) | Term::Pair(a, b) | Term::Ann(a, b) => {
            f(a, 0);
            f(b, 0);
        }
        Term::Fst(a) | Term::Snd(a) | Term::Suc(a) | Term::Refl(a) => f(a, 0),
        Term::NatElim {
            motive,
            base,
            step,
            scrutinee,
        } => {
            for c in [motive, base, step, scrutinee] {
                f(c, 0);
            }
        }
        Term::Id(a, x, y) => {
            for c in [a, x, y] {
                f(c, 0);
            }
        }
        Term::J {
            ty,
            base,
            motive,
            refl_case,
            other,
            path,
        } => {
            for c in [ty, base, motive, refl_case, other, path] {
                f(c, 0);
            }
        }
    }
}

/// Adds `amount` to every free index `>= cutoff`.
///
/// Panics if a negative `amount` would push an index below zero; that can
/// only happen through a kernel bug.
pub fn shift(t: &RcTerm, amount: isize, cutoff: usize) -> RcTerm {
    if amount == 0 {
        return t.clone();
    }
    match &**t {
        Term::Var(i) if *i >= cutoff => {
            let shifted = *i as isize + amount;
            assert!(shifted >= 0, "shift underflow: index {i} by {amount}");
            Term::var(shifted as usize)
        }
        Term::Var(_) => t.clone(),
        other => Arc::new(map_children(other, &mut |c, binders| {
            shift(c, amount, cutoff + binders)
        })),
    }
}

/// A free index that points outside the enclosing context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DanglingIndex {
    /// The index as written at its occurrence.
    pub index: usize,
    /// How many binders of the term itself enclose the occurrence.
    pub depth: usize,
}

/// Checks that every variable is bound by the term or by a context of
/// `context_len` entries.
pub fn scope_audit(t: &Term, context_len: usize) -> Result<(), Vec<DanglingIndex>> {
    fn go(t: &Term, depth: usize, context_len: usize, out: &mut Vec<DanglingIndex>) {
        if let Term::Var(i) = t {
            if *i >= depth + context_len {
                out.push(DanglingIndex { index: *i, depth });
            }
            return;
        }
        for_each_child(t, |c, binders| go(c, depth + binders, context_len, out));
    }
    let mut out = Vec::new();
    go(t, 0, context_len, &mut out);
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// The global constants a term mentions, sorted.
pub fn constants(t: &Term) -> BTreeSet<Arc<str>> {
    fn go(t: &Term, out: &mut BTreeSet<Arc<str>>) {
        if let Term::Const(c) = t {
            out.insert(c.clone());
        }
        for_each_child(t, |c, _| go(c, out));
    }
    let mut out = BTreeSet::new();
    go(t, &mut out);
    out
}

/// Does index `var` (relative to the root of `t`) occur free in `t`?
pub fn occurs(t: &Term, var: usize) -> bool {
    match t {
        Term::Var(i) => *i == var,
        _ => {
            let mut found = false;
            for_each_child(t, |c, binders| found |= occurs(c, var + binders));
            found
        }
    }
}

/// Removes annotation nodes.
pub fn erase_annotations(t: &RcTerm) -> RcTerm {
    match &**t {
        Term::Ann(inner, _) => erase_annotations(inner),
        other => Arc::new(map_children(other, &mut |c, _| erase_annotations(c))),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum DeclKind {
    Definition { ty: RcTerm, body: RcTerm },
    Axiom { ty: RcTerm },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Declaration {
    pub name: Arc<str>,
    pub kind: DeclKind,
    pub span: Span,
}

impl Declaration {
    pub fn ty(&self) -> &RcTerm {
        match &self.kind {
            DeclKind::Definition { ty, .. } | DeclKind::Axiom { ty } => ty,
        }
    }

    pub fn body(&self) -> Option<&RcTerm> {
        match &self.kind {
            DeclKind::Definition { body, .. } => Some(body),
            DeclKind::Axiom { .. } => None,
        }
    }

    pub fn is_axiom(&self) -> bool {
        matches!(self.kind, DeclKind::Axiom { .. })
    }
}
