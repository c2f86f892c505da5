//! Normalization by evaluation.
//!
//! Terms are evaluated into [`Value`]s, where binders become closures and
//! stuck eliminations become neutrals. [`Evaluator::readback`] turns values
//! into β-normal terms; η is left to the conversion checker.

use std::cell::Cell;
use std::fmt;
use std::sync::Arc;

use crate::env::GlobalEnv;
use crate::error::OutOfFuel;
use crate::syntax::{Name, RcTerm, Term};

pub type Env = Vec<Value>;

#[derive(Clone)]
pub struct Closure {
    pub env: Env,
    pub body: RcTerm,
}

impl fmt::Debug for Closure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<closure [{}] {:?}>", self.env.len(), self.body)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Head {
    /// A free variable, as a de Bruijn level.
    Var(usize),
    Axiom(Arc<str>),
}

#[derive(Clone, Debug)]
pub enum Elim {
    App(Value),
    Fst,
    Snd,
    NatElim {
        motive: Value,
        base: Value,
        step: Value,
    },
    J {
        ty: Value,
        base: Value,
        motive: Value,
        refl_case: Value,
        other: Value,
    },
}

#[derive(Clone, Debug)]
pub struct Neutral {
    pub head: Head,
    pub spine: Vec<Elim>,
}

#[derive(Clone, Debug)]
pub enum Value {
    Universe,
    Pi(Name, Arc<Value>, Closure),
    Lam(Name, Closure),
    Sigma(Name, Arc<Value>, Closure),
    Pair(Arc<Value>, Arc<Value>),
    Unit,
    Star,
    Nat,
    Zero,
    Suc(Arc<Value>),
    Id(Arc<Value>, Arc<Value>, Arc<Value>),
    Refl(Arc<Value>),
    Neutral(Arc<Neutral>),
}

impl Value {
    pub fn var(level: usize) -> Value {
        Value::Neutral(Arc::new(Neutral {
            head: Head::Var(level),
            spine: Vec::new(),
        }))
    }

    pub fn axiom(name: Arc<str>) -> Value {
        Value::Neutral(Arc::new(Neutral {
            head: Head::Axiom(name),
            spine: Vec::new(),
        }))
    }

    fn extend(n: &Neutral, e: Elim) -> Value {
        let mut spine = n.spine.clone();
        spine.push(e);
        Value::Neutral(Arc::new(Neutral {
            head: n.head.clone(),
            spine,
        }))
    }

    pub fn as_neutral(&self) -> Option<&Neutral> {
        match self {
            Value::Neutral(n) => Some(n),
            _ => None,
        }
    }
}

/// Step budget shared by evaluation and conversion.
#[derive(Debug, Default)]
pub struct Fuel {
    limit: Option<u64>,
    used: Cell<u64>,
}

impl Fuel {
    pub fn unlimited() -> Fuel {
        Fuel::default()
    }

    pub fn limited(limit: u64) -> Fuel {
        Fuel {
            limit: Some(limit),
            used: Cell::new(0),
        }
    }

    pub fn used(&self) -> u64 {
        self.used.get()
    }

    pub fn tick(&self) -> Result<(), OutOfFuel> {
        let used = self.used.get() + 1;
        self.used.set(used);
        match self.limit {
            Some(limit) if used > limit => Err(OutOfFuel(limit)),
            _ => Ok(()),
        }
    }
}

pub type EvalResult<T> = Result<T, OutOfFuel>;

/// Evaluates terms against a fixed snapshot of the global environment.
pub struct Evaluator<'g> {
    pub globals: &'g GlobalEnv,
    pub fuel: Fuel,
}

impl<'g> Evaluator<'g> {
    pub fn new(globals: &'g GlobalEnv) -> Evaluator<'g> {
        Evaluator {
            globals,
            fuel: Fuel::unlimited(),
        }
    }

    pub fn with_fuel(globals: &'g GlobalEnv, fuel: Fuel) -> Evaluator<'g> {
        Evaluator { globals, fuel }
    }

    pub fn eval(&self, env: &Env, t: &Term) -> EvalResult<Value> {
        self.fuel.tick()?;
        let closure = |body: &RcTerm| Closure {
            env: env.clone(),
            body: body.clone(),
        };
        Ok(match t {
            Term::Var(i) => env[env.len() - 1 - i].clone(),
            Term::Universe => Value::Universe,
            Term::Pi(x, a, b) => Value::Pi(x.clone(), Arc::new(self.eval(env, a)?), closure(b)),
            Term::Lam(x, b) => Value::Lam(x.clone(), closure(b)),
            Term::App(f, a) => {
                let f = self.eval(env, f)?;
                let a = self.eval(env, a)?;
                self.apply(&f, a)?
            }
            Term::Sigma(x, a, b) => {
                Value::Sigma(x.clone(), Arc::new(self.eval(env, a)?), closure(b))
            }
            Term::Pair(a, b) => {
                Value::Pair(Arc::new(self.eval(env, a)?), Arc::new(self.eval(env, b)?))
            }
            Term::Fst(p) => self.fst(&self.eval(env, p)?),
            Term::Snd(p) => self.snd(&self.eval(env, p)?),
            Term::Unit => Value::Unit,
            Term::Star => Value::Star,
            Term::Nat => Value::Nat,
            Term::Zero => Value::Zero,
            Term::Suc(_) => {
                // Numerals can be long; peel the chain without recursing.
                let mut depth = 0;
                let mut cur = t;
                while let Term::Suc(n) = cur {
                    depth += 1;
                    cur = n;
                }
                let mut v = self.eval(env, cur)?;
                for _ in 0..depth {
                    v = Value::Suc(Arc::new(v));
                }
                v
            }
            Term::NatElim {
                motive,
                base,
                step,
                scrutinee,
            } => {
                let motive = self.eval(env, motive)?;
                let base = self.eval(env, base)?;
                let step = self.eval(env, step)?;
                let n = self.eval(env, scrutinee)?;
                self.nat_elim(motive, base, step, &n)?
            }
            Term::Id(a, x, y) => Value::Id(
                Arc::new(self.eval(env, a)?),
                Arc::new(self.eval(env, x)?),
                Arc::new(self.eval(env, y)?),
            ),
            Term::Refl(a) => Value::Refl(Arc::new(self.eval(env, a)?)),
            Term::J {
                ty,
                base,
                motive,
                refl_case,
                other,
                path,
            } => {
                let path = self.eval(env, path)?;
                match &path {
                    Value::Refl(_) => self.eval(env, refl_case)?,
                    Value::Neutral(n) => Value::extend(
                        n,
                        Elim::J {
                            ty: self.eval(env, ty)?,
                            base: self.eval(env, base)?,
                            motive: self.eval(env, motive)?,
                            refl_case: self.eval(env, refl_case)?,
                            other: self.eval(env, other)?,
                        },
                    ),
                    v => panic!("J on a non-path value {v:?}"),
                }
            }
            Term::Const(c) => match self.globals.get(c) {
                Some(entry) => match &entry.value {
                    Some(v) => v.clone(),
                    None => Value::axiom(c.clone()),
                },
                None => panic!("unknown constant `{c}` during evaluation"),
            },
            Term::Ann(t, _) => self.eval(env, t)?,
        })
    }

    pub fn instantiate(&self, c: &Closure, arg: Value) -> EvalResult<Value> {
        let mut env = c.env.clone();
        env.push(arg);
        self.eval(&env, &c.body)
    }

    pub fn apply(&self, f: &Value, arg: Value) -> EvalResult<Value> {
        match f {
            Value::Lam(_, c) => self.instantiate(c, arg),
            Value::Neutral(n) => Ok(Value::extend(n, Elim::App(arg))),
            v => panic!("applying a non-function value {v:?}"),
        }
    }

    pub fn apply_all(&self, f: &Value, args: impl IntoIterator<Item = Value>) -> EvalResult<Value> {
        let mut f = f.clone();
        for a in args {
            f = self.apply(&f, a)?;
        }
        Ok(f)
    }

    pub fn fst(&self, p: &Value) -> Value {
        match p {
            Value::Pair(a, _) => (**a).clone(),
            Value::Neutral(n) => Value::extend(n, Elim::Fst),
            v => panic!("first projection of a non-pair {v:?}"),
        }
    }

    pub fn snd(&self, p: &Value) -> Value {
        match p {
            Value::Pair(_, b) => (**b).clone(),
            Value::Neutral(n) => Value::extend(n, Elim::Snd),
            v => panic!("second projection of a non-pair {v:?}"),
        }
    }

    pub fn nat_elim(
        &self,
        motive: Value,
        base: Value,
        step: Value,
        n: &Value,
    ) -> EvalResult<Value> {
        // Peel the literal part of the scrutinee, then fold the step back up.
        let mut depth = Vec::new();
        let mut cur = n;
        while let Value::Suc(k) = cur {
            depth.push((**k).clone());
            cur = k;
        }
        let mut acc = match cur {
            Value::Zero => base,
            Value::Neutral(ne) => Value::extend(
                ne,
                Elim::NatElim {
                    motive,
                    base,
                    step: step.clone(),
                },
            ),
            v => panic!("natElim on a non-number {v:?}"),
        };
        for k in depth.into_iter().rev() {
            self.fuel.tick()?;
            acc = self.apply_all(&step, [k, acc])?;
        }
        Ok(acc)
    }

    pub fn j(
        &self,
        ty: Value,
        base: Value,
        motive: Value,
        refl_case: Value,
        other: Value,
        path: &Value,
    ) -> Value {
        match path {
            Value::Refl(_) => refl_case,
            Value::Neutral(n) => Value::extend(
                n,
                Elim::J {
                    ty,
                    base,
                    motive,
                    refl_case,
                    other,
                },
            ),
            v => panic!("J on a non-path value {v:?}"),
        }
    }

    /// Re-applies one elimination to a value.
    pub fn eliminate(&self, v: &Value, e: &Elim) -> EvalResult<Value> {
        Ok(match e {
            Elim::App(a) => self.apply(v, a.clone())?,
            Elim::Fst => self.fst(v),
            Elim::Snd => self.snd(v),
            Elim::NatElim { motive, base, step } => {
                self.nat_elim(motive.clone(), base.clone(), step.clone(), v)?
            }
            Elim::J {
                ty,
                base,
                motive,
                refl_case,
                other,
            } => self.j(
                ty.clone(),
                base.clone(),
                motive.clone(),
                refl_case.clone(),
                other.clone(),
                v,
            ),
        })
    }

    /// Reads a value back into a β-normal term, in a context of `depth`
    /// free variables.
    pub fn readback(&self, depth: usize, v: &Value) -> EvalResult<RcTerm> {
        let under =
            |c: &Closure| self.readback(depth + 1, &self.instantiate(c, Value::var(depth))?);
        Ok(match v {
            Value::Universe => Term::universe(),
            Value::Pi(x, a, b) => {
                Arc::new(Term::Pi(x.clone(), self.readback(depth, a)?, under(b)?))
            }
            Value::Lam(x, b) => Arc::new(Term::Lam(x.clone(), under(b)?)),
            Value::Sigma(x, a, b) => {
                Arc::new(Term::Sigma(x.clone(), self.readback(depth, a)?, under(b)?))
            }
            Value::Pair(a, b) => Term::pair(self.readback(depth, a)?, self.readback(depth, b)?),
            Value::Unit => Term::unit(),
            Value::Star => Term::star(),
            Value::Nat => Term::nat(),
            Value::Zero => Term::zero(),
            Value::Suc(_) => {
                let mut count = 0;
                let mut cur = v;
                while let Value::Suc(n) = cur {
                    count += 1;
                    cur = n;
                }
                let mut t = self.readback(depth, cur)?;
                for _ in 0..count {
                    t = Term::suc(t);
                }
                t
            }
            Value::Id(a, x, y) => Term::id(
                self.readback(depth, a)?,
                self.readback(depth, x)?,
                self.readback(depth, y)?,
            ),
            Value::Refl(a) => Term::refl(self.readback(depth, a)?),
            Value::Neutral(n) => self.readback_neutral(depth, n)?,
        })
    }

    pub fn readback_neutral(&self, depth: usize, n: &Neutral) -> EvalResult<RcTerm> {
        let mut acc = match &n.head {
            Head::Var(level) => Term::var(depth - 1 - level),
            Head::Axiom(name) => Arc::new(Term::Const(name.clone())),
        };
        for e in &n.spine {
            acc = match e {
                Elim::App(a) => Term::app(acc, self.readback(depth, a)?),
                Elim::Fst => Term::fst(acc),
                Elim::Snd => Term::snd(acc),
                Elim::NatElim { motive, base, step } => Term::nat_elim(
                    self.readback(depth, motive)?,
                    self.readback(depth, base)?,
                    self.readback(depth, step)?,
                    acc,
                ),
                Elim::J {
                    ty,
                    base,
                    motive,
                    refl_case,
                    other,
                } => Term::j(
                    self.readback(depth, ty)?,
                    self.readback(depth, base)?,
                    self.readback(depth, motive)?,
                    self.readback(depth, refl_case)?,
                    self.readback(depth, other)?,
                    acc,
                ),
            };
        }
        Ok(acc)
    }

    /// The environment of fresh variables for a context of `len` entries.
    pub fn identity_env(len: usize) -> Env {
        (0..len).map(Value::var).collect()
    }

    /// β-normal form of a term with `ctx_len` free variables.
    pub fn normalize(&self, ctx_len: usize, t: &Term) -> EvalResult<RcTerm> {
        let v = self.eval(&Self::identity_env(ctx_len), t)?;
        self.readback(ctx_len, &v)
    }
}
