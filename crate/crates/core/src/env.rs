//! The global environment of checked declarations.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::check::{Checker, TypingContext};
use crate::error::{Diagnostic, ErrorKind};
use crate::eval::{Fuel, Value};
use crate::parser::Scope;
use crate::syntax::{constants, DeclKind, Declaration};

/// A checked declaration with its evaluated type and, for definitions,
/// its evaluated body.
#[derive(Clone, Debug)]
pub struct Entry {
    pub decl: Declaration,
    pub module: Arc<str>,
    pub ty: Value,
    pub value: Option<Value>,
    /// Constants mentioned directly in the type or body.
    pub deps: BTreeSet<Arc<str>>,
}

impl Entry {
    pub fn is_axiom(&self) -> bool {
        self.decl.is_axiom()
    }
}

#[derive(Clone, Debug, Default)]
pub struct GlobalEnv {
    entries: HashMap<Arc<str>, Arc<Entry>>,
    order: Vec<Arc<str>>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct CheckOptions {
    /// Step budget per declaration.
    pub fuel: Option<u64>,
}

impl CheckOptions {
    fn fuel(&self) -> Fuel {
        self.fuel.map_or_else(Fuel::unlimited, Fuel::limited)
    }
}

impl GlobalEnv {
    pub fn new() -> GlobalEnv {
        GlobalEnv::default()
    }

    pub fn get(&self, name: &str) -> Option<&Arc<Entry>> {
        self.entries.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Entries in declaration order.
    pub fn iter(&self) -> impl Iterator<Item = &Arc<Entry>> {
        self.order.iter().map(move |n| &self.entries[n])
    }

    /// Names of all axioms, sorted.
    pub fn axioms(&self) -> BTreeSet<Arc<str>> {
        self.iter()
            .filter(|e| e.is_axiom())
            .map(|e| e.decl.name.clone())
            .collect()
    }

    /// Type-checks `d` and, if it is well-typed, appends it. On error the
    /// environment is left unchanged.
    pub fn check_declaration(
        &mut self,
        d: &Declaration,
        module: &str,
        opts: CheckOptions,
    ) -> Result<(), Diagnostic> {
        let entry = self
            .elaborate(d, module, opts)
            .map_err(|k| Diagnostic::new(d.span, k))?;
        self.insert(entry);
        Ok(())
    }

    fn elaborate(
        &self,
        d: &Declaration,
        module: &str,
        opts: CheckOptions,
    ) -> Result<Entry, ErrorKind> {
        if self.contains(&d.name) {
            return Err(ErrorKind::DuplicateDefinition(d.name.to_string()));
        }
        let checker = Checker::with_fuel(self, opts.fuel());
        let mut ctx = TypingContext::new();
        let ty = checker.check_type(&mut ctx, d.ty())?;
        let ty_value = checker.eval_in(&ctx, &ty)?;
        let (kind, value) = match &d.kind {
            DeclKind::Axiom { .. } => (DeclKind::Axiom { ty }, None),
            DeclKind::Definition { body, .. } => {
                let body = checker.check(&mut ctx, body, &ty_value)?;
                let value = checker.eval_in(&ctx, &body)?;
                (DeclKind::Definition { ty, body }, Some(value))
            }
        };
        let decl = Declaration {
            name: d.name.clone(),
            kind,
            span: d.span,
        };
        let mut deps = constants(decl.ty());
        if let Some(body) = decl.body() {
            deps.extend(constants(body));
        }
        Ok(Entry {
            decl,
            module: Arc::from(module),
            ty: ty_value,
            value,
            deps,
        })
    }

    /// Appends an already-checked entry.
    pub fn insert(&mut self, entry: Entry) {
        let name = entry.decl.name.clone();
        assert!(!self.contains(&name), "duplicate entry `{name}`");
        self.order.push(name.clone());
        self.entries.insert(name, Arc::new(entry));
    }

    /// Shares an entry checked against another snapshot of this
    /// environment.
    pub fn insert_shared(&mut self, entry: Arc<Entry>) {
        let name = entry.decl.name.clone();
        assert!(!self.contains(&name), "duplicate entry `{name}`");
        self.order.push(name.clone());
        self.entries.insert(name, entry);
    }

    /// The axioms `name` transitively depends on (itself included if it is
    /// an axiom).
    pub fn axiom_closure(&self, name: &str) -> Result<BTreeSet<Arc<str>>, ErrorKind> {
        let root = self
            .get(name)
            .ok_or_else(|| ErrorKind::UnknownName(name.to_owned()))?;
        let mut seen: BTreeSet<Arc<str>> = BTreeSet::new();
        let mut out = BTreeSet::new();
        let mut stack = vec![root.clone()];
        seen.insert(root.decl.name.clone());
        while let Some(e) = stack.pop() {
            if e.is_axiom() {
                out.insert(e.decl.name.clone());
            }
            for dep in &e.deps {
                if seen.insert(dep.clone()) {
                    stack.push(self.entries[dep].clone());
                }
            }
        }
        Ok(out)
    }
}

impl Scope for GlobalEnv {
    fn is_global(&self, name: &str) -> bool {
        self.contains(name)
    }
}
