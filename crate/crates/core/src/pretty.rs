//! Deterministic printer for core terms in surface syntax.
//!
//! Binder hints are freshened so that the output never shadows a name that
//! is in scope or collides with a global constant; reparsing the output
//! therefore resolves every variable to the same index.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::parser::lexer::KEYWORDS;
use crate::syntax::{constants, occurs, DeclKind, Declaration, Name, Term};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    Expr,
    Sigma,
    App,
    Atom,
}

struct Printer {
    scope: Vec<String>,
    avoid: BTreeSet<Arc<str>>,
}

impl Printer {
    fn taken(&self, s: &str) -> bool {
        self.scope.iter().any(|n| n == s) || self.avoid.contains(s) || KEYWORDS.contains(&s)
    }

    fn fresh(&self, hint: &Name, used: bool) -> String {
        if hint.is_anon() && !used {
            return "_".to_owned();
        }
        let base = if hint.is_anon() { "x" } else { hint.as_str() };
        if !self.taken(base) {
            return base.to_owned();
        }
        let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
        let stem = if stem.is_empty() { "x" } else { stem };
        (1..)
            .map(|i| format!("{stem}{i}"))
            .find(|c| !self.taken(c))
            .unwrap()
    }

    fn with_binder<R>(&mut self, name: String, f: impl FnOnce(&mut Printer) -> R) -> R {
        self.scope.push(name);
        let r = f(self);
        self.scope.pop();
        r
    }

    fn var(&self, i: usize) -> String {
        match self.scope.len().checked_sub(i + 1) {
            Some(level) => self.scope[level].clone(),
            None => format!("#{i}"),
        }
    }

    fn print(&mut self, t: &Term, prec: Prec) -> String {
        let (s, own) = self.print_raw(t);
        if own >= prec {
            s
        } else {
            format!("({s})")
        }
    }

    fn print_raw(&mut self, t: &Term) -> (String, Prec) {
        match t {
            Term::Var(i) => (self.var(*i), Prec::Atom),
            Term::Const(c) => (c.to_string(), Prec::Atom),
            Term::Universe => ("U".into(), Prec::Atom),
            Term::Nat => ("Nat".into(), Prec::Atom),
            Term::Unit => ("Unit".into(), Prec::Atom),
            Term::Star => ("star".into(), Prec::Atom),
            Term::Zero => ("0".into(), Prec::Atom),
            Term::Suc(n) => match t.as_numeral() {
                Some(k) => (k.to_string(), Prec::Atom),
                None => (format!("suc {}", self.print(n, Prec::Atom)), Prec::App),
            },
            Term::Lam(x, body) => {
                let name = self.fresh(x, occurs(body, 0));
                let b = self.with_binder(name.clone(), |p| p.print(body, Prec::Expr));
                (format!("\\{name}. {b}"), Prec::Expr)
            }
            Term::Pi(x, a, b) => {
                let used = occurs(b, 0);
                if x.is_anon() && !used {
                    let dom = self.print(a, Prec::Sigma);
                    let cod = self.with_binder("_".into(), |p| p.print(b, Prec::Expr));
                    (format!("{dom} -> {cod}"), Prec::Expr)
                } else {
                    let dom = self.print(a, Prec::Expr);
                    let name = self.fresh(x, used);
                    let cod = self.with_binder(name.clone(), |p| p.print(b, Prec::Expr));
                    (format!("({name} : {dom}) -> {cod}"), Prec::Expr)
                }
            }
            Term::Sigma(x, a, b) => {
                let used = occurs(b, 0);
                if x.is_anon() && !used {
                    let fst = self.print(a, Prec::App);
                    let snd = self.with_binder("_".into(), |p| p.print(b, Prec::Sigma));
                    (format!("{fst} * {snd}"), Prec::Sigma)
                } else {
                    let fst = self.print(a, Prec::Expr);
                    let name = self.fresh(x, used);
                    let snd = self.with_binder(name.clone(), |p| p.print(b, Prec::Sigma));
                    (format!("({name} : {fst}) * {snd}"), Prec::Sigma)
                }
            }
            Term::App(f, a) => {
                let f = self.print(f, Prec::App);
                let a = self.print(a, Prec::Atom);
                (format!("{f} {a}"), Prec::App)
            }
            Term::Pair(a, b) => {
                let a = self.print(a, Prec::Expr);
                let b = self.print(b, Prec::Expr);
                (format!("({a} , {b})"), Prec::Atom)
            }
            Term::Fst(p) => (format!("{}.1", self.print(p, Prec::Atom)), Prec::Atom),
            Term::Snd(p) => (format!("{}.2", self.print(p, Prec::Atom)), Prec::Atom),
            Term::Refl(a) => (format!("refl {}", self.print(a, Prec::Atom)), Prec::App),
            Term::Id(a, x, y) => (self.prim("Id", &[a, x, y]), Prec::App),
            Term::NatElim {
                motive,
                base,
                step,
                scrutinee,
            } => (
                self.prim("natElim", &[motive, base, step, scrutinee]),
                Prec::App,
            ),
            Term::J {
                ty,
                base,
                motive,
                refl_case,
                other,
                path,
            } => (
                self.prim("J", &[ty, base, motive, refl_case, other, path]),
                Prec::App,
            ),
            Term::Ann(inner, ty) => {
                let inner = match &**inner {
                    // `(x : A)` would read back as a binder group.
                    Term::Var(_) | Term::Const(_) => format!("({})", self.print(inner, Prec::Atom)),
                    _ => self.print(inner, Prec::Atom),
                };
                let ty = self.print(ty, Prec::Expr);
                (format!("({inner} : {ty})"), Prec::Atom)
            }
        }
    }

    fn prim(&mut self, head: &str, args: &[&Arc<Term>]) -> String {
        let mut out = head.to_owned();
        for a in args {
            out.push(' ');
            out.push_str(&self.print(a, Prec::Atom));
        }
        out
    }
}

fn printer_for(terms: &[&Term], ctx: &[Name]) -> Printer {
    let mut avoid = BTreeSet::new();
    for t in terms {
        avoid.extend(constants(t));
    }
    let mut p = Printer {
        scope: Vec::new(),
        avoid,
    };
    for hint in ctx {
        let name = p.fresh(hint, true);
        p.scope.push(name);
    }
    p
}

/// Prints `t` in a context whose variables carry the hints `ctx`
/// (outermost first).
pub fn pretty(t: &Term, ctx: &[Name]) -> String {
    printer_for(&[t], ctx).print(t, Prec::Expr)
}

/// Prints a checked declaration in its desugared form.
pub fn pretty_declaration(d: &Declaration) -> String {
    match &d.kind {
        DeclKind::Definition { ty, body } => format!(
            "def {} : {} := {}",
            d.name,
            pretty(ty, &[]),
            pretty(body, &[])
        ),
        DeclKind::Axiom { ty } => format!("axiom {} : {}", d.name, pretty(ty, &[])),
    }
}
