//! Type-directed definitional equality.
//!
//! Values are compared at a type. Functions, pairs and elements of `Unit`
//! are compared by their η-expansions; everything else structurally, with
//! neutral spines compared argument by argument at the types the head
//! dictates.

use std::sync::Arc;

use crate::eval::{Elim, EvalResult, Evaluator, Head, Neutral, Value};
use crate::syntax::{Name, Term};

/// The types of the free variables in scope, indexed by level.
pub type TypeCtx = Vec<Value>;

impl Evaluator<'_> {
    /// Is `a ≡ b` at type `ty`?
    pub fn convertible(
        &self,
        types: &mut TypeCtx,
        ty: &Value,
        a: &Value,
        b: &Value,
    ) -> EvalResult<bool> {
        self.fuel.tick()?;
        match ty {
            Value::Pi(_, dom, cod) => {
                let x = Value::var(types.len());
                let cod = self.instantiate(cod, x.clone())?;
                let fa = self.apply(a, x.clone())?;
                let fb = self.apply(b, x)?;
                types.push((**dom).clone());
                let r = self.convertible(types, &cod, &fa, &fb);
                types.pop();
                r
            }
            Value::Sigma(_, fst_ty, snd_ty) => {
                let (a1, b1) = (self.fst(a), self.fst(b));
                if !self.convertible(types, fst_ty, &a1, &b1)? {
                    return Ok(false);
                }
                let snd_ty = self.instantiate(snd_ty, a1)?;
                self.convertible(types, &snd_ty, &self.snd(a), &self.snd(b))
            }
            Value::Unit => Ok(true),
            Value::Universe => self.convertible_types(types, a, b),
            Value::Nat => {
                let (mut a, mut b) = (a, b);
                loop {
                    match (a, b) {
                        (Value::Zero, Value::Zero) => return Ok(true),
                        (Value::Suc(x), Value::Suc(y)) => {
                            a = x;
                            b = y;
                        }
                        (Value::Neutral(x), Value::Neutral(y)) => {
                            return Ok(self.convertible_spine(types, x, y)?.is_some())
                        }
                        _ => return Ok(false),
                    }
                }
            }
            Value::Id(elem_ty, _, _) => match (a, b) {
                (Value::Refl(x), Value::Refl(y)) => self.convertible(types, elem_ty, x, y),
                (Value::Neutral(x), Value::Neutral(y)) => {
                    Ok(self.convertible_spine(types, x, y)?.is_some())
                }
                _ => Ok(false),
            },
            _ => match (a, b) {
                (Value::Neutral(x), Value::Neutral(y)) => {
                    Ok(self.convertible_spine(types, x, y)?.is_some())
                }
                _ => Ok(false),
            },
        }
    }

    /// Are two types (elements of `U`) definitionally equal?
    pub fn convertible_types(&self, types: &mut TypeCtx, a: &Value, b: &Value) -> EvalResult<bool> {
        self.fuel.tick()?;
        match (a, b) {
            (Value::Universe, Value::Universe)
            | (Value::Nat, Value::Nat)
            | (Value::Unit, Value::Unit) => Ok(true),
            (Value::Pi(_, d1, c1), Value::Pi(_, d2, c2))
            | (Value::Sigma(_, d1, c1), Value::Sigma(_, d2, c2)) => {
                if !self.convertible_types(types, d1, d2)? {
                    return Ok(false);
                }
                let x = Value::var(types.len());
                let c1 = self.instantiate(c1, x.clone())?;
                let c2 = self.instantiate(c2, x)?;
                types.push((**d1).clone());
                let r = self.convertible_types(types, &c1, &c2);
                types.pop();
                r
            }
            (Value::Id(t1, x1, y1), Value::Id(t2, x2, y2)) => Ok(self
                .convertible_types(types, t1, t2)?
                && self.convertible(types, t1, x1, x2)?
                && self.convertible(types, t1, y1, y2)?),
            (Value::Neutral(x), Value::Neutral(y)) => {
                Ok(self.convertible_spine(types, x, y)?.is_some())
            }
            _ => Ok(false),
        }
    }

    /// The type of a neutral head.
    pub fn head_type(&self, types: &TypeCtx, head: &Head) -> Value {
        match head {
            Head::Var(level) => types[*level].clone(),
            Head::Axiom(name) => self
                .globals
                .get(name)
                .unwrap_or_else(|| panic!("unknown axiom `{name}`"))
                .ty
                .clone(),
        }
    }

    /// Compares two neutrals; on success returns their common type.
    pub fn convertible_spine(
        &self,
        types: &mut TypeCtx,
        n1: &Neutral,
        n2: &Neutral,
    ) -> EvalResult<Option<Value>> {
        if n1.head != n2.head || n1.spine.len() != n2.spine.len() {
            return Ok(None);
        }
        let mut ty = self.head_type(types, &n1.head);
        let mut cur = Value::Neutral(Arc::new(Neutral {
            head: n1.head.clone(),
            spine: Vec::new(),
        }));
        for (e1, e2) in n1.spine.iter().zip(&n2.spine) {
            self.fuel.tick()?;
            let next_ty = match (e1, e2, &ty) {
                (Elim::App(a1), Elim::App(a2), Value::Pi(_, dom, cod)) => {
                    if !self.convertible(types, dom, a1, a2)? {
                        return Ok(None);
                    }
                    self.instantiate(cod, a1.clone())?
                }
                (Elim::Fst, Elim::Fst, Value::Sigma(_, a, _)) => (**a).clone(),
                (Elim::Snd, Elim::Snd, Value::Sigma(_, _, b)) => {
                    self.instantiate(b, self.fst(&cur))?
                }
                (
                    Elim::NatElim {
                        motive: m1,
                        base: b1,
                        step: s1,
                    },
                    Elim::NatElim {
                        motive: m2,
                        base: b2,
                        step: s2,
                    },
                    _,
                ) => {
                    let motive_ty = self.nat_motive_type();
                    if !self.convertible(types, &motive_ty, m1, m2)?
                        || !self.convertible(types, &self.apply(m1, Value::Zero)?, b1, b2)?
                        || !self.convertible(types, &self.nat_step_type(m1)?, s1, s2)?
                    {
                        return Ok(None);
                    }
                    self.apply(m1, cur.clone())?
                }
                (
                    Elim::J {
                        ty: t1,
                        base: a1,
                        motive: c1,
                        refl_case: d1,
                        other: y1,
                    },
                    Elim::J {
                        ty: t2,
                        base: a2,
                        motive: c2,
                        refl_case: d2,
                        other: y2,
                    },
                    _,
                ) => {
                    let refl_ty =
                        self.apply_all(c1, [a1.clone(), Value::Refl(Arc::new(a1.clone()))])?;
                    if !self.convertible_types(types, t1, t2)?
                        || !self.convertible(types, t1, a1, a2)?
                        || !self.convertible(types, &self.j_motive_type(t1, a1)?, c1, c2)?
                        || !self.convertible(types, &refl_ty, d1, d2)?
                        || !self.convertible(types, t1, y1, y2)?
                    {
                        return Ok(None);
                    }
                    self.apply_all(c1, [y1.clone(), cur.clone()])?
                }
                _ => return Ok(None),
            };
            cur = self.eliminate(&cur, e1)?;
            ty = next_ty;
        }
        Ok(Some(ty))
    }

    /// `Nat -> U`
    pub fn nat_motive_type(&self) -> Value {
        Value::Pi(
            Name::anon(),
            Arc::new(Value::Nat),
            crate::eval::Closure {
                env: Vec::new(),
                body: Term::universe(),
            },
        )
    }

    /// `(k : Nat) -> C k -> C (suc k)`
    pub fn nat_step_type(&self, motive: &Value) -> EvalResult<Value> {
        let t = Term::pi(
            "k",
            Term::nat(),
            Term::arrow(
                Term::app(Term::var(1), Term::var(0)),
                Term::app(Term::var(1), Term::suc(Term::var(0))),
            ),
        );
        self.eval(&vec![motive.clone()], &t)
    }

    /// `(y : A) -> Id A a y -> U`
    pub fn j_motive_type(&self, ty: &Value, base: &Value) -> EvalResult<Value> {
        let t = Term::pi(
            "y",
            Term::var(1),
            Term::arrow(
                Term::id(Term::var(2), Term::var(1), Term::var(0)),
                Term::universe(),
            ),
        );
        self.eval(&vec![ty.clone(), base.clone()], &t)
    }
}
