//! Loading modules along the import graph and checking them in order.
//!
//! Modules are checked in waves: every module whose imports have all been
//! checked joins the next wave. Modules of one wave cannot see each other,
//! so they are checked against the same snapshot of the environment and
//! merged back in topological order. The result does not depend on how
//! many worker threads run a wave.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::env::{CheckOptions, Entry, GlobalEnv};
use crate::error::{Diagnostic, ErrorKind, SourceFile, Span};
use crate::parser::{self, resolve_declaration, ModuleFile, Scope};

/// Worker stack size. Checking recurses over term structure, so deep terms
/// need more than the platform default.
pub const STACK_SIZE: usize = 256 << 20;

/// Where modules are found when nothing else is configured.
pub fn builtin_stdlib() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../stdlib")
}

/// Failures that stop loading before anything is checked.
#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read `{}`: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    /// A rendered diagnostic (missing import, import cycle).
    #[error("{0}")]
    Located(String),
    #[error("module `{name}` is provided by both `{}` and `{}`", first.display(), second.display())]
    Conflict {
        name: String,
        first: PathBuf,
        second: PathBuf,
    },
    #[error("module `{0}` not found in the search path")]
    UnknownModule(String),
}

#[derive(Clone, Debug)]
pub struct LoaderConfig {
    /// Searched first, in order.
    pub search_path: Vec<PathBuf>,
    /// Searched after the directories of the root files.
    pub stdlib: Option<PathBuf>,
    pub options: CheckOptions,
    pub jobs: usize,
}

impl Default for LoaderConfig {
    fn default() -> LoaderConfig {
        LoaderConfig {
            search_path: Vec::new(),
            stdlib: Some(builtin_stdlib()),
            options: CheckOptions::default(),
            jobs: 1,
        }
    }
}

#[derive(Debug)]
pub struct Module {
    pub name: Arc<str>,
    pub file: SourceFile,
    pub parsed: Result<ModuleFile, Diagnostic>,
    /// Indices of imported modules, resolved during discovery.
    imports: Vec<usize>,
}

/// The set of modules reachable from some root files.
#[derive(Debug)]
pub struct Workspace {
    config: LoaderConfig,
    modules: Vec<Module>,
    by_name: HashMap<Arc<str>, usize>,
    /// Directories of root files, searched after the configured path.
    root_dirs: Vec<PathBuf>,
}

/// The result of checking a workspace.
#[derive(Debug)]
pub struct Outcome {
    pub env: GlobalEnv,
    /// Module indices in checking order.
    pub order: Vec<usize>,
    pub ok: Vec<bool>,
    /// Diagnostics with the module they belong to, sorted by file order
    /// then source position.
    pub diagnostics: Vec<(usize, Diagnostic)>,
}

impl Outcome {
    pub fn success(&self) -> bool {
        self.diagnostics.is_empty()
    }

    pub fn declarations(&self) -> usize {
        self.env.len()
    }
}

fn module_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

impl Workspace {
    pub fn new(config: LoaderConfig) -> Workspace {
        Workspace {
            config,
            modules: Vec::new(),
            by_name: HashMap::new(),
            root_dirs: Vec::new(),
        }
    }

    pub fn modules(&self) -> &[Module] {
        &self.modules
    }

    pub fn module(&self, i: usize) -> &Module {
        &self.modules[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    fn register(&mut self, path: &Path, name: String) -> Result<usize, LoadError> {
        let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
            path: path.to_owned(),
            source,
        })?;
        let parsed = parser::parse_source(&text, &name);
        let name: Arc<str> = Arc::from(name);
        self.modules.push(Module {
            name: name.clone(),
            file: SourceFile::new(path, text),
            parsed,
            imports: Vec::new(),
        });
        let i = self.modules.len() - 1;
        self.by_name.insert(name, i);
        Ok(i)
    }

    /// Adds a file given on the command line. Its module name is its stem.
    pub fn add_root(&mut self, path: &Path) -> Result<usize, LoadError> {
        let name = module_name(path);
        if let Some(&i) = self.by_name.get(name.as_str()) {
            let same = match (
                self.modules[i].file.path().canonicalize(),
                path.canonicalize(),
            ) {
                (Ok(a), Ok(b)) => a == b,
                _ => false,
            };
            if same {
                return Ok(i);
            }
            return Err(LoadError::Conflict {
                name,
                first: self.modules[i].file.path().to_owned(),
                second: path.to_owned(),
            });
        }
        let i = self.register(path, name)?;
        if let Some(dir) = path.parent() {
            let dir = if dir.as_os_str().is_empty() {
                PathBuf::from(".")
            } else {
                dir.to_owned()
            };
            if !self.root_dirs.contains(&dir) {
                self.root_dirs.push(dir);
            }
        }
        Ok(i)
    }

    fn locate(&self, name: &str) -> Option<PathBuf> {
        let file = format!("{name}.hott");
        self.config
            .search_path
            .iter()
            .chain(&self.root_dirs)
            .chain(&self.config.stdlib)
            .map(|dir| dir.join(&file))
            .find(|p| p.is_file())
    }

    /// Adds a module by name, looking it up in the search path.
    pub fn add_module(&mut self, name: &str) -> Result<usize, LoadError> {
        if let Some(i) = self.index_of(name) {
            return Ok(i);
        }
        let path = self
            .locate(name)
            .ok_or_else(|| LoadError::UnknownModule(name.to_owned()))?;
        self.register(&path, name.to_owned())
    }

    /// Loads all transitive imports of the registered modules.
    pub fn discover(&mut self) -> Result<(), LoadError> {
        let mut next = 0;
        while next < self.modules.len() {
            let imports: Vec<_> = match &self.modules[next].parsed {
                Ok(m) => m.imports.clone(),
                Err(_) => Vec::new(),
            };
            let mut resolved = Vec::new();
            for imp in imports {
                let j = match self.index_of(&imp.module) {
                    Some(j) => j,
                    None => match self.locate(&imp.module) {
                        Some(path) => self.register(&path, imp.module.clone())?,
                        None => {
                            let d = Diagnostic::new(
                                imp.span,
                                ErrorKind::ModuleNotFound(imp.module.clone()),
                            );
                            return Err(LoadError::Located(d.render(&self.modules[next].file)));
                        }
                    },
                };
                resolved.push(j);
            }
            self.modules[next].imports = resolved;
            next += 1;
        }
        Ok(())
    }

    /// A topological order of all modules, imports first. Ties follow
    /// registration order.
    pub fn topological_order(&self) -> Result<Vec<usize>, LoadError> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            New,
            Active,
            Done,
        }
        let n = self.modules.len();
        let mut mark = vec![Mark::New; n];
        let mut order = Vec::with_capacity(n);
        for root in 0..n {
            if mark[root] != Mark::New {
                continue;
            }
            // Iterative DFS: (module, next import to visit).
            let mut stack = vec![(root, 0usize)];
            mark[root] = Mark::Active;
            while let Some(&mut (m, ref mut k)) = stack.last_mut() {
                if let Some(&dep) = self.modules[m].imports.get(*k) {
                    *k += 1;
                    match mark[dep] {
                        Mark::Done => {}
                        Mark::New => {
                            mark[dep] = Mark::Active;
                            stack.push((dep, 0));
                        }
                        Mark::Active => return Err(self.cycle_error(&stack, dep)),
                    }
                } else {
                    mark[m] = Mark::Done;
                    order.push(m);
                    stack.pop();
                }
            }
        }
        Ok(order)
    }

    fn cycle_error(&self, stack: &[(usize, usize)], dep: usize) -> LoadError {
        let start = stack.iter().position(|&(m, _)| m == dep).unwrap_or(0);
        let mut names: Vec<&str> = stack[start..]
            .iter()
            .map(|&(m, _)| &*self.modules[m].name)
            .collect();
        names.push(&self.modules[dep].name);
        let &(last, k) = stack.last().expect("non-empty stack");
        let span = match &self.modules[last].parsed {
            Ok(m) => m.imports[k - 1].span,
            Err(_) => Span::default(),
        };
        let d = Diagnostic::new(span, ErrorKind::ImportCycle(names.join(" -> ")));
        LoadError::Located(d.render(&self.modules[last].file))
    }

    /// Names of the modules visible from `i`: itself and its transitive
    /// imports.
    pub fn visible_from(&self, i: usize) -> HashSet<Arc<str>> {
        let mut seen = HashSet::new();
        let mut stack = vec![i];
        let mut out = HashSet::new();
        while let Some(m) = stack.pop() {
            if seen.insert(m) {
                out.insert(self.modules[m].name.clone());
                stack.extend(&self.modules[m].imports);
            }
        }
        out
    }

    /// Checks every module. Fatal loading problems must have been ruled out
    /// by [`Workspace::discover`] and [`Workspace::topological_order`].
    pub fn check(&self, order: &[usize]) -> Outcome {
        let n = self.modules.len();
        let position: HashMap<usize, usize> =
            order.iter().enumerate().map(|(p, &m)| (m, p)).collect();
        // Wave = length of the longest import chain below a module.
        let mut wave = vec![0usize; n];
        for &m in order {
            wave[m] = self.modules[m]
                .imports
                .iter()
                .map(|&d| wave[d] + 1)
                .max()
                .unwrap_or(0);
        }
        let waves = order.iter().map(|&m| wave[m]).max().map_or(0, |w| w + 1);

        // Checking sees everything merged so far; the final environment is
        // rebuilt in topological order so that it does not depend on waves.
        let mut env = GlobalEnv::new();
        let mut checked: Vec<Vec<Arc<Entry>>> = vec![Vec::new(); n];
        let mut ok = vec![false; n];
        let mut diagnostics = Vec::new();
        for w in 0..waves {
            let members: Vec<usize> = order
                .iter()
                .copied()
                .filter(|&m| wave[m] == w && self.modules[m].imports.iter().all(|&d| ok[d]))
                .collect();
            let results = self.run_wave(&env, &members);
            for (m, (entries, error)) in members.into_iter().zip(results) {
                let mut failed = error;
                for entry in entries {
                    if env.contains(&entry.decl.name) {
                        let kind = ErrorKind::DuplicateDefinition(entry.decl.name.to_string());
                        failed = Some(Diagnostic::new(entry.decl.span, kind));
                        break;
                    }
                    env.insert_shared(entry.clone());
                    checked[m].push(entry);
                }
                match failed {
                    Some(d) => diagnostics.push((m, d)),
                    None => ok[m] = true,
                }
            }
        }
        diagnostics.sort_by_key(|(m, d)| (position[m], d.span.start));
        let mut env = GlobalEnv::new();
        for &m in order {
            for entry in checked[m].drain(..) {
                env.insert_shared(entry);
            }
        }
        Outcome {
            env,
            order: order.to_vec(),
            ok,
            diagnostics,
        }
    }

    fn run_wave(
        &self,
        env: &GlobalEnv,
        members: &[usize],
    ) -> Vec<(Vec<Arc<Entry>>, Option<Diagnostic>)> {
        let jobs = self.config.jobs.max(1).min(members.len());
        if jobs <= 1 {
            return members.iter().map(|&m| self.check_module(env, m)).collect();
        }
        let slots: Vec<Mutex<Option<_>>> = members.iter().map(|_| Mutex::new(None)).collect();
        let next = AtomicUsize::new(0);
        std::thread::scope(|s| {
            for _ in 0..jobs {
                std::thread::Builder::new()
                    .stack_size(STACK_SIZE)
                    .spawn_scoped(s, || loop {
                        let k = next.fetch_add(1, Ordering::Relaxed);
                        let Some(&m) = members.get(k) else { break };
                        let r = self.check_module(env, m);
                        *slots[k].lock().expect("result slot") = Some(r);
                    })
                    .expect("spawn worker thread");
            }
        });
        slots
            .into_iter()
            .map(|s| s.into_inner().expect("result slot").expect("module result"))
            .collect()
    }

    /// Checks one module against a snapshot, stopping at its first error.
    fn check_module(
        &self,
        snapshot: &GlobalEnv,
        m: usize,
    ) -> (Vec<Arc<Entry>>, Option<Diagnostic>) {
        let module = &self.modules[m];
        let parsed = match &module.parsed {
            Ok(p) => p,
            Err(d) => return (Vec::new(), Some(d.clone())),
        };
        let visible = self.visible_from(m);
        let mut env = snapshot.clone();
        let mut added: Vec<Arc<str>> = Vec::new();
        let mut error = None;
        let none = HashSet::new();
        for d in &parsed.declarations {
            let scope = |x: &str| env.get(x).is_some_and(|e| visible.contains(&e.module));
            if scope.is_global(&d.name) {
                let kind = ErrorKind::DuplicateDefinition(d.name.clone());
                error = Some(Diagnostic::new(d.name_span, kind));
                break;
            }
            let decl = match resolve_declaration(d, &scope, &none) {
                Ok(decl) => decl,
                Err(e) => {
                    error = Some(e);
                    break;
                }
            };
            if let Err(e) = env.check_declaration(&decl, &module.name, self.config.options) {
                error = Some(e);
                break;
            }
            added.push(decl.name.clone());
        }
        let entries = added
            .iter()
            .map(|x| env.get(x).expect("checked entry").clone())
            .collect();
        (entries, error)
    }
}

/// Loads and checks `roots` with their imports.
pub fn check_files(
    config: LoaderConfig,
    roots: &[PathBuf],
) -> Result<(Workspace, Outcome), LoadError> {
    let mut ws = Workspace::new(config);
    for r in roots {
        ws.add_root(r)?;
    }
    ws.discover()?;
    let order = ws.topological_order()?;
    let outcome = ws.check(&order);
    Ok((ws, outcome))
}

/// Loads and checks the module `name` (found in the search path) with its
/// imports.
pub fn check_module_named(
    config: LoaderConfig,
    name: &str,
) -> Result<(Workspace, Outcome), LoadError> {
    let mut ws = Workspace::new(config);
    ws.add_module(name)?;
    ws.discover()?;
    let order = ws.topological_order()?;
    let outcome = ws.check(&order);
    Ok((ws, outcome))
}

/// The axioms of a checked environment, for reports.
pub fn axiom_names(env: &GlobalEnv) -> BTreeSet<String> {
    env.axioms().iter().map(|a| a.to_string()).collect()
}
