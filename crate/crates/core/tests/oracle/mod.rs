//! A hand-reduction oracle, independent of the kernel.
//!
//! Expected values in the derived-example tests are computed here first and
//! only then compared with what the kernel produces. The oracle shares the
//! term *data type* with the kernel but none of its operations: it has its
//! own shifting and substitution, and normalizes by plain rewriting instead
//! of evaluation into values.
//!
//! Strategy: rewriting to full normal form, arguments first. A redex is
//! contracted by substitution (`(\x. b) a ~> b[nf a/x]`, projections of
//! pairs, `natElim` on `zero` and `suc`, `J` on `refl`); global
//! definitions are unfolded when met; axioms stay put. No η. Annotations
//! are dropped. Every term handed to the oracle is well-typed, hence
//! strongly normalizing, so the order of contraction does not change the
//! result; normalizing arguments before substituting only avoids redoing
//! the same work at every copy. This is the reduction one would carry out
//! by hand: slow, but easy to trust.
#![allow(dead_code)]

use std::sync::Arc;

use notears::env::GlobalEnv;
use notears::syntax::{Name, Term};

type T = Arc<Term>;

fn mk(t: Term) -> T {
    Arc::new(t)
}

/// Adds `d` to every free index `>= c`.
pub fn lift(t: &Term, d: isize, c: usize) -> T {
    let go = |u: &T, extra: usize| lift(u, d, c + extra);
    mk(match t {
        Term::Var(i) if *i >= c => {
            let j = *i as isize + d;
            assert!(j >= 0, "oracle: negative index");
            Term::Var(j as usize)
        }
        Term::Var(i) => Term::Var(*i),
        Term::Pi(x, a, b) => Term::Pi(x.clone(), go(a, 0), go(b, 1)),
        Term::Lam(x, b) => Term::Lam(x.clone(), go(b, 1)),
        Term::Sigma(x, a, b) => Term::Sigma(x.clone(), go(a, 0), go(b, 1)),
        Term::App(f, a) => Term::App(go(f, 0), go(a, 0)),
        Term::Pair(a, b) => Term::Pair(go(a, 0), go(b, 0)),
        Term::Fst(p) => Term::Fst(go(p, 0)),
        Term::Snd(p) => Term::Snd(go(p, 0)),
        Term::Suc(n) => Term::Suc(go(n, 0)),
        Term::Refl(a) => Term::Refl(go(a, 0)),
        Term::Id(a, x, y) => Term::Id(go(a, 0), go(x, 0), go(y, 0)),
        Term::NatElim {
            motive,
            base,
            step,
            scrutinee,
        } => Term::NatElim {
            motive: go(motive, 0),
            base: go(base, 0),
            step: go(step, 0),
            scrutinee: go(scrutinee, 0),
        },
        Term::J {
            ty,
            base,
            motive,
            refl_case,
            other,
            path,
        } => Term::J {
            ty: go(ty, 0),
            base: go(base, 0),
            motive: go(motive, 0),
            refl_case: go(refl_case, 0),
            other: go(other, 0),
            path: go(path, 0),
        },
        Term::Ann(a, b) => Term::Ann(go(a, 0), go(b, 0)),
        other => other.clone(),
    })
}

/// `t[s/j]`, removing index `j` (indices above it move down by one).
pub fn subst(t: &Term, j: usize, s: &Term) -> T {
    let go = |u: &T, extra: usize| -> T {
        if extra == 0 {
            subst(u, j, s)
        } else {
            subst(u, j + 1, &lift(s, 1, 0))
        }
    };
    mk(match t {
        Term::Var(i) if *i == j => return Arc::new(s.clone()),
        Term::Var(i) if *i > j => Term::Var(i - 1),
        Term::Var(i) => Term::Var(*i),
        Term::Pi(x, a, b) => Term::Pi(x.clone(), go(a, 0), go(b, 1)),
        Term::Lam(x, b) => Term::Lam(x.clone(), go(b, 1)),
        Term::Sigma(x, a, b) => Term::Sigma(x.clone(), go(a, 0), go(b, 1)),
        Term::App(f, a) => Term::App(go(f, 0), go(a, 0)),
        Term::Pair(a, b) => Term::Pair(go(a, 0), go(b, 0)),
        Term::Fst(p) => Term::Fst(go(p, 0)),
        Term::Snd(p) => Term::Snd(go(p, 0)),
        Term::Suc(n) => Term::Suc(go(n, 0)),
        Term::Refl(a) => Term::Refl(go(a, 0)),
        Term::Id(a, x, y) => Term::Id(go(a, 0), go(x, 0), go(y, 0)),
        Term::NatElim {
            motive,
            base,
            step,
            scrutinee,
        } => Term::NatElim {
            motive: go(motive, 0),
            base: go(base, 0),
            step: go(step, 0),
            scrutinee: go(scrutinee, 0),
        },
        Term::J {
            ty,
            base,
            motive,
            refl_case,
            other,
            path,
        } => Term::J {
            ty: go(ty, 0),
            base: go(base, 0),
            motive: go(motive, 0),
            refl_case: go(refl_case, 0),
            other: go(other, 0),
            path: go(path, 0),
        },
        Term::Ann(a, b) => Term::Ann(go(a, 0), go(b, 0)),
        other => other.clone(),
    })
}

/// `(\x. body) arg ~> body[arg/x]`
pub fn beta(body: &Term, arg: &Term) -> T {
    subst(body, 0, arg)
}

/// The oracle. Definitions are looked up in `globals` (only their bodies
/// are used, as source text would be).
pub struct Oracle<'g> {
    globals: Option<&'g GlobalEnv>,
}

impl<'g> Oracle<'g> {
    pub fn closed() -> Oracle<'static> {
        Oracle { globals: None }
    }

    pub fn with(globals: &'g GlobalEnv) -> Oracle<'g> {
        Oracle {
            globals: Some(globals),
        }
    }

    fn unfold(&self, c: &str) -> Option<T> {
        self.globals?.get(c)?.decl.body().cloned()
    }

    /// Full normal form.
    pub fn nf(&self, t: &Term) -> T {
        match t {
            Term::Const(c) => match self.unfold(c) {
                Some(body) => self.nf(&body),
                None => mk(t.clone()),
            },
            Term::Ann(a, _) => self.nf(a),
            Term::App(f, a) => {
                let f = self.nf(f);
                match &*f {
                    Term::Lam(_, body) => self.nf(&beta(body, &self.nf(a))),
                    _ => mk(Term::App(f, self.nf(a))),
                }
            }
            Term::Fst(p) | Term::Snd(p) => {
                let p = self.nf(p);
                match (&*p, t) {
                    (Term::Pair(a, _), Term::Fst(_)) => a.clone(),
                    (Term::Pair(_, b), Term::Snd(_)) => b.clone(),
                    (_, Term::Fst(_)) => mk(Term::Fst(p)),
                    _ => mk(Term::Snd(p)),
                }
            }
            Term::NatElim {
                motive,
                base,
                step,
                scrutinee,
            } => {
                let n = self.nf(scrutinee);
                match &*n {
                    Term::Zero => self.nf(base),
                    Term::Suc(k) => {
                        let rec = mk(Term::NatElim {
                            motive: motive.clone(),
                            base: base.clone(),
                            step: step.clone(),
                            scrutinee: k.clone(),
                        });
                        let unfolded = mk(Term::App(mk(Term::App(step.clone(), k.clone())), rec));
                        self.nf(&unfolded)
                    }
                    _ => mk(Term::NatElim {
                        motive: self.nf(motive),
                        base: self.nf(base),
                        step: self.nf(step),
                        scrutinee: n,
                    }),
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
                let p = self.nf(path);
                match &*p {
                    Term::Refl(_) => self.nf(refl_case),
                    _ => mk(Term::J {
                        ty: self.nf(ty),
                        base: self.nf(base),
                        motive: self.nf(motive),
                        refl_case: self.nf(refl_case),
                        other: self.nf(other),
                        path: p,
                    }),
                }
            }
            Term::Pi(x, a, b) => mk(Term::Pi(x.clone(), self.nf(a), self.nf(b))),
            Term::Sigma(x, a, b) => mk(Term::Sigma(x.clone(), self.nf(a), self.nf(b))),
            Term::Lam(x, b) => mk(Term::Lam(x.clone(), self.nf(b))),
            Term::Pair(a, b) => mk(Term::Pair(self.nf(a), self.nf(b))),
            Term::Suc(n) => mk(Term::Suc(self.nf(n))),
            Term::Refl(a) => mk(Term::Refl(self.nf(a))),
            Term::Id(a, x, y) => mk(Term::Id(self.nf(a), self.nf(x), self.nf(y))),
            _ => mk(t.clone()),
        }
    }
}

/// Name hints are irrelevant to equality; this is for building terms.
pub fn n(s: &str) -> Name {
    Name::new(s)
}

/// Are all free indices of `t` below `len`? Counted by hand: each binder
/// raises the bound.
pub fn well_scoped(t: &Term, len: usize) -> bool {
    let ok = |u: &T, extra: usize| well_scoped(u, len + extra);
    match t {
        Term::Var(i) => *i < len,
        Term::Pi(_, a, b) | Term::Sigma(_, a, b) => ok(a, 0) && ok(b, 1),
        Term::Lam(_, b) => ok(b, 1),
        Term::App(a, b) | Term::Pair(a, b) | Term::Ann(a, b) => ok(a, 0) && ok(b, 0),
        Term::Fst(a) | Term::Snd(a) | Term::Suc(a) | Term::Refl(a) => ok(a, 0),
        Term::Id(a, b, c) => ok(a, 0) && ok(b, 0) && ok(c, 0),
        Term::NatElim {
            motive,
            base,
            step,
            scrutinee,
        } => [motive, base, step, scrutinee].iter().all(|u| ok(u, 0)),
        Term::J {
            ty,
            base,
            motive,
            refl_case,
            other,
            path,
        } => [ty, base, motive, refl_case, other, path]
            .iter()
            .all(|u| ok(u, 0)),
        _ => true,
    }
}

/// Prints applications of variables, constants and `refl`: arguments that
/// are not atoms get parentheses.
pub fn show_spine(t: &Term, ctx: &[&str]) -> String {
    fn atom(t: &Term, ctx: &[&str]) -> String {
        match t {
            Term::Var(_) | Term::Const(_) => show_spine(t, ctx),
            _ => format!("({})", show_spine(t, ctx)),
        }
    }
    match t {
        Term::Var(i) => ctx[ctx.len() - 1 - i].to_owned(),
        Term::Const(c) => c.to_string(),
        Term::App(f, a) => format!("{} {}", show_spine(f, ctx), atom(a, ctx)),
        Term::Refl(a) => format!("refl {}", atom(a, ctx)),
        other => panic!("oracle printer: unsupported {other:?}"),
    }
}

/// Token classes of a string, split by hand: punctuation characters stand
/// alone, `->` and `:=` are pairs, runs of identifier characters are
/// identifiers.
pub fn token_classes(s: &str) -> Vec<&'static str> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let two: String = chars[i..chars.len().min(i + 2)].iter().collect();
        if c.is_whitespace() {
            i += 1;
        } else if two == "->" {
            out.push("ARROW");
            i += 2;
        } else if two == ":=" {
            out.push("DEFINE");
            i += 2;
        } else if c.is_alphanumeric() || c == '_' {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push("IDENT");
        } else {
            out.push(match c {
                '(' => "LPAREN",
                ')' => "RPAREN",
                ':' => "COLON",
                '*' => "STAR",
                '\\' => "LAMBDA",
                '.' => "DOT",
                ',' => "COMMA",
                _ => panic!("oracle tokenizer: unexpected {c:?}"),
            });
            i += 1;
        }
    }
    out
}

fn mentioned(t: &Term, out: &mut Vec<String>) {
    match t {
        Term::Const(c) => out.push(c.to_string()),
        Term::Pi(_, a, b)
        | Term::Sigma(_, a, b)
        | Term::App(a, b)
        | Term::Pair(a, b)
        | Term::Ann(a, b) => {
            mentioned(a, out);
            mentioned(b, out);
        }
        Term::Lam(_, a) | Term::Fst(a) | Term::Snd(a) | Term::Suc(a) | Term::Refl(a) => {
            mentioned(a, out)
        }
        Term::Id(a, b, c) => {
            for u in [a, b, c] {
                mentioned(u, out);
            }
        }
        Term::NatElim {
            motive,
            base,
            step,
            scrutinee,
        } => {
            for u in [motive, base, step, scrutinee] {
                mentioned(u, out);
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
            for u in [ty, base, motive, refl_case, other, path] {
                mentioned(u, out);
            }
        }
        _ => {}
    }
}

/// Axioms reachable from `name` by following every constant mentioned in a
/// declaration's type and body, sorted.
pub fn trace_axioms(globals: &GlobalEnv, name: &str) -> Vec<String> {
    let mut seen = std::collections::BTreeSet::new();
    let mut todo = vec![name.to_owned()];
    let mut axioms = std::collections::BTreeSet::new();
    while let Some(x) = todo.pop() {
        if !seen.insert(x.clone()) {
            continue;
        }
        let d = &globals.get(&x).expect("declared").decl;
        if d.is_axiom() {
            axioms.insert(x.clone());
        }
        let mut refs = Vec::new();
        mentioned(d.ty(), &mut refs);
        if let Some(b) = d.body() {
            mentioned(b, &mut refs);
        }
        todo.extend(refs);
    }
    axioms.into_iter().collect()
}

/// Terms with named variables, for deriving de Bruijn forms by hand.
pub enum Named {
    Var(&'static str),
    Global(&'static str),
    Lam(&'static str, Box<Named>),
    App(Box<Named>, Box<Named>),
    Pi(&'static str, Box<Named>, Box<Named>),
    Id(Box<Named>, Box<Named>, Box<Named>),
    Refl(Box<Named>),
}

/// Replaces each variable by the distance to its binder in `scope`
/// (innermost last).
pub fn index(t: &Named, scope: &mut Vec<&'static str>) -> T {
    match t {
        Named::Var(x) => {
            let pos = scope.iter().rposition(|y| y == x).expect("bound variable");
            mk(Term::Var(scope.len() - 1 - pos))
        }
        Named::Global(c) => mk(Term::Const(Arc::from(*c))),
        Named::Lam(x, b) => {
            scope.push(x);
            let b = index(b, scope);
            scope.pop();
            mk(Term::Lam(n(x), b))
        }
        Named::App(f, a) => mk(Term::App(index(f, scope), index(a, scope))),
        Named::Pi(x, a, b) => {
            let a = index(a, scope);
            scope.push(x);
            let b = index(b, scope);
            scope.pop();
            mk(Term::Pi(n(x), a, b))
        }
        Named::Id(a, x, y) => mk(Term::Id(index(a, scope), index(x, scope), index(y, scope))),
        Named::Refl(a) => mk(Term::Refl(index(a, scope))),
    }
}
