//! Bidirectional type checking of core terms.

use std::sync::Arc;

use crate::conv::TypeCtx;
use crate::env::GlobalEnv;
use crate::error::{ErrorKind, OutOfFuel};
use crate::eval::{Env, Evaluator, Fuel, Value};
use crate::pretty::pretty;
use crate::syntax::{Name, RcTerm, Term};

impl From<OutOfFuel> for ErrorKind {
    fn from(e: OutOfFuel) -> ErrorKind {
        ErrorKind::OutOfFuel(e.0)
    }
}

pub type TcResult<T> = Result<T, ErrorKind>;

/// Local variables in scope: name hints, types and the values standing for
/// them during evaluation. Entry `i` is at de Bruijn level `i`.
#[derive(Clone, Debug, Default)]
pub struct TypingContext {
    pub names: Vec<Name>,
    pub types: TypeCtx,
    pub env: Env,
}

impl TypingContext {
    pub fn new() -> TypingContext {
        TypingContext::default()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn push(&mut self, name: Name, ty: Value) {
        self.env.push(Value::var(self.names.len()));
        self.names.push(name);
        self.types.push(ty);
    }

    /// Binds a variable to a known value, as in `let`.
    pub fn push_def(&mut self, name: Name, ty: Value, value: Value) {
        self.env.push(value);
        self.names.push(name);
        self.types.push(ty);
    }

    pub fn pop(&mut self) {
        self.names.pop();
        self.types.pop();
        self.env.pop();
    }
}

pub struct Checker<'g> {
    pub eval: Evaluator<'g>,
}

impl<'g> Checker<'g> {
    pub fn new(globals: &'g GlobalEnv) -> Checker<'g> {
        Checker {
            eval: Evaluator::new(globals),
        }
    }

    pub fn with_fuel(globals: &'g GlobalEnv, fuel: Fuel) -> Checker<'g> {
        Checker {
            eval: Evaluator::with_fuel(globals, fuel),
        }
    }

    fn show_term(&self, ctx: &TypingContext, t: &Term) -> String {
        pretty(t, &ctx.names)
    }

    fn show_value(&self, ctx: &TypingContext, v: &Value) -> TcResult<String> {
        let t = self.eval.readback(ctx.len(), v)?;
        Ok(pretty(&t, &ctx.names))
    }

    fn mismatch(
        &self,
        ctx: &TypingContext,
        expected: &Value,
        actual: &Value,
    ) -> TcResult<ErrorKind> {
        Ok(ErrorKind::TypeMismatch {
            expected: self.show_value(ctx, expected)?,
            actual: self.show_value(ctx, actual)?,
        })
    }

    pub fn eval_in(&self, ctx: &TypingContext, t: &Term) -> TcResult<Value> {
        Ok(self.eval.eval(&ctx.env, t)?)
    }

    fn with_binder<R>(
        &self,
        ctx: &mut TypingContext,
        name: &Name,
        ty: Value,
        f: impl FnOnce(&mut TypingContext) -> TcResult<R>,
    ) -> TcResult<R> {
        ctx.push(name.clone(), ty);
        let r = f(ctx);
        ctx.pop();
        r
    }

    /// Checks that `t` is a type and returns it elaborated.
    pub fn check_type(&self, ctx: &mut TypingContext, t: &Term) -> TcResult<RcTerm> {
        self.check(ctx, t, &Value::Universe)
    }

    /// Infers the type of `t`, returning the elaborated term and its type.
    pub fn infer(&self, ctx: &mut TypingContext, t: &Term) -> TcResult<(RcTerm, Value)> {
        Ok(match t {
            Term::Var(i) => {
                let level = ctx.len() - 1 - i;
                (Term::var(*i), ctx.types[level].clone())
            }
            Term::Const(c) => match self.eval.globals.get(c) {
                Some(entry) => (Arc::new(t.clone()), entry.ty.clone()),
                None => return Err(ErrorKind::UnknownName(c.to_string())),
            },
            Term::Universe => (Term::universe(), Value::Universe),
            Term::Nat => (Term::nat(), Value::Universe),
            Term::Unit => (Term::unit(), Value::Universe),
            Term::Star => (Term::star(), Value::Unit),
            Term::Zero => (Term::zero(), Value::Nat),
            Term::Suc(_) => {
                let mut count = 0;
                let mut cur = t;
                while let Term::Suc(n) = cur {
                    count += 1;
                    cur = n;
                }
                let mut out = self.check(ctx, cur, &Value::Nat)?;
                for _ in 0..count {
                    out = Term::suc(out);
                }
                (out, Value::Nat)
            }
            Term::Pi(x, a, b) | Term::Sigma(x, a, b) => {
                let a = self.check_type(ctx, a)?;
                let av = self.eval_in(ctx, &a)?;
                let b = self.with_binder(ctx, x, av, |ctx| self.check_type(ctx, b))?;
                let rebuilt = match t {
                    Term::Pi(..) => Term::Pi(x.clone(), a, b),
                    _ => Term::Sigma(x.clone(), a, b),
                };
                (Arc::new(rebuilt), Value::Universe)
            }
            Term::Id(a, x, y) => {
                let a = self.check_type(ctx, a)?;
                let av = self.eval_in(ctx, &a)?;
                let x = self.check(ctx, x, &av)?;
                let y = self.check(ctx, y, &av)?;
                (Term::id(a, x, y), Value::Universe)
            }
            Term::App(lam, a) if matches!(**lam, Term::Lam(..)) => {
                // A β-redex infers like `let`: the argument fixes the binder's
                // type and the body is inferred with the binder defined.
                let Term::Lam(x, body) = &**lam else {
                    unreachable!()
                };
                let (a, aty) = self.infer(ctx, a)?;
                let av = self.eval_in(ctx, &a)?;
                ctx.push_def(x.clone(), aty, av);
                let r = self.infer(ctx, body);
                ctx.pop();
                let (body, ty) = r?;
                (Term::app(Arc::new(Term::Lam(x.clone(), body)), a), ty)
            }
            Term::App(f, a) => {
                let (f, fty) = self.infer(ctx, f)?;
                match &fty {
                    Value::Pi(_, dom, cod) => {
                        let a = self.check(ctx, a, dom)?;
                        let av = self.eval_in(ctx, &a)?;
                        let ty = self.eval.instantiate(cod, av)?;
                        (Term::app(f, a), ty)
                    }
                    _ => {
                        return Err(ErrorKind::NotAFunction {
                            term: self.show_term(ctx, &f),
                            actual: self.show_value(ctx, &fty)?,
                        })
                    }
                }
            }
            Term::Fst(p) | Term::Snd(p) => {
                let (p, pty) = self.infer(ctx, p)?;
                let Value::Sigma(_, a, b) = &pty else {
                    return Err(ErrorKind::NotAPair {
                        term: self.show_term(ctx, &p),
                        actual: self.show_value(ctx, &pty)?,
                    });
                };
                if matches!(t, Term::Fst(_)) {
                    (Term::fst(p), (**a).clone())
                } else {
                    let pv = self.eval_in(ctx, &p)?;
                    let ty = self.eval.instantiate(b, self.eval.fst(&pv))?;
                    (Term::snd(p), ty)
                }
            }
            Term::NatElim {
                motive,
                base,
                step,
                scrutinee,
            } => {
                let motive = self.check(ctx, motive, &self.eval.nat_motive_type())?;
                let mv = self.eval_in(ctx, &motive)?;
                let base = self.check(ctx, base, &self.eval.apply(&mv, Value::Zero)?)?;
                let step = self.check(ctx, step, &self.eval.nat_step_type(&mv)?)?;
                let scrutinee = self.check(ctx, scrutinee, &Value::Nat)?;
                let nv = self.eval_in(ctx, &scrutinee)?;
                let ty = self.eval.apply(&mv, nv)?;
                (Term::nat_elim(motive, base, step, scrutinee), ty)
            }
            Term::J {
                ty,
                base,
                motive,
                refl_case,
                other,
                path,
            } => {
                let ty = self.check_type(ctx, ty)?;
                let tv = self.eval_in(ctx, &ty)?;
                let base = self.check(ctx, base, &tv)?;
                let bv = self.eval_in(ctx, &base)?;
                let motive = self.check(ctx, motive, &self.eval.j_motive_type(&tv, &bv)?)?;
                let mv = self.eval_in(ctx, &motive)?;
                let refl_ty = self
                    .eval
                    .apply_all(&mv, [bv.clone(), Value::Refl(Arc::new(bv.clone()))])?;
                let refl_case = self.check(ctx, refl_case, &refl_ty)?;
                let other = self.check(ctx, other, &tv)?;
                let ov = self.eval_in(ctx, &other)?;
                let path_ty = Value::Id(Arc::new(tv), Arc::new(bv), Arc::new(ov.clone()));
                let path = self.check(ctx, path, &path_ty)?;
                let pv = self.eval_in(ctx, &path)?;
                let result = self.eval.apply_all(&mv, [ov, pv])?;
                (Term::j(ty, base, motive, refl_case, other, path), result)
            }
            Term::Ann(inner, ty) => {
                let ty = self.check_type(ctx, ty)?;
                let tv = self.eval_in(ctx, &ty)?;
                (self.check(ctx, inner, &tv)?, tv)
            }
            Term::Lam(..) | Term::Pair(..) | Term::Refl(..) => {
                return Err(ErrorKind::CannotInfer(format!(
                    "`{}`",
                    self.show_term(ctx, t)
                )))
            }
        })
    }

    /// Checks `t` against `expected`, returning it with annotations erased.
    pub fn check(&self, ctx: &mut TypingContext, t: &Term, expected: &Value) -> TcResult<RcTerm> {
        match (t, expected) {
            (Term::Lam(x, body), Value::Pi(_, dom, cod)) => {
                let xv = Value::var(ctx.len());
                let cod = self.eval.instantiate(cod, xv)?;
                let body =
                    self.with_binder(ctx, x, (**dom).clone(), |ctx| self.check(ctx, body, &cod))?;
                Ok(Arc::new(Term::Lam(x.clone(), body)))
            }
            (Term::Pair(a, b), Value::Sigma(_, fst_ty, snd_ty)) => {
                let a = self.check(ctx, a, fst_ty)?;
                let av = self.eval_in(ctx, &a)?;
                let snd_ty = self.eval.instantiate(snd_ty, av)?;
                let b = self.check(ctx, b, &snd_ty)?;
                Ok(Term::pair(a, b))
            }
            (Term::Refl(a), Value::Id(elem_ty, lhs, rhs)) => {
                let a = self.check(ctx, a, elem_ty)?;
                let av = self.eval_in(ctx, &a)?;
                let ok = self.eval.convertible(&mut ctx.types, elem_ty, &av, lhs)?
                    && self.eval.convertible(&mut ctx.types, elem_ty, &av, rhs)?;
                if ok {
                    Ok(Term::refl(a))
                } else {
                    let actual = Value::Id(elem_ty.clone(), Arc::new(av.clone()), Arc::new(av));
                    Err(self.mismatch(ctx, expected, &actual)?)
                }
            }
            (Term::Refl(_), _) => Err(ErrorKind::NotAnIdentityType {
                term: self.show_term(ctx, t),
                actual: self.show_value(ctx, expected)?,
            }),
            (Term::Lam(..) | Term::Pair(..), _) => Err(ErrorKind::CannotHaveType {
                term: self.show_term(ctx, t),
                expected: self.show_value(ctx, expected)?,
            }),
            _ => {
                let (t, actual) = self.infer(ctx, t)?;
                if self
                    .eval
                    .convertible_types(&mut ctx.types, &actual, expected)?
                {
                    Ok(t)
                } else {
                    Err(self.mismatch(ctx, expected, &actual)?)
                }
            }
        }
    }
}
