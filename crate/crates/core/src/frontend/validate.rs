use std::collections::{BTreeMap, BTreeSet};

use super::ast::*;
use super::Diagnostic;

/// A module or explicit reaction together with the conditional guarding it.
#[derive(Clone, Debug, PartialEq)]
pub struct FlatCommand {
    pub step: usize,
    /// Position in the step's command list, counting conditional bodies
    /// inline (textual order).
    pub index: usize,
    pub guard: Option<CondKind>,
    pub kind: FlatKind,
}

#[derive(Clone, Debug, PartialEq)]
pub enum FlatKind {
    Module(ModuleCall),
    Rxn(ExplicitRxn),
}

impl FlatCommand {
    pub fn module(&self) -> Option<&ModuleCall> {
        match &self.kind {
            FlatKind::Module(m) => Some(m),
            FlatKind::Rxn(_) => None,
        }
    }

    pub fn describe(&self) -> String {
        let inner = match &self.kind {
            FlatKind::Module(m) => m.to_string(),
            FlatKind::Rxn(r) => r.to_string(),
        };
        match self.guard {
            Some(g) => format!("{g}[{{ {inner} }}]"),
            None => inner,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepPlan {
    /// Commands in dataflow order: a command that reads a species comes
    /// after every command in the step that writes it. Ties keep textual
    /// order.
    pub commands: Vec<FlatCommand>,
    pub has_cmp: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidatedProgram {
    program: Program,
    plans: Vec<StepPlan>,
    warnings: Vec<Diagnostic>,
}

impl ValidatedProgram {
    pub fn program(&self) -> &Program {
        &self.program
    }

    pub fn plans(&self) -> &[StepPlan] {
        &self.plans
    }

    pub fn warnings(&self) -> &[Diagnostic] {
        &self.warnings
    }

    /// Every user species the program mentions, sorted.
    pub fn species(&self) -> BTreeSet<String> {
        let mut out: BTreeSet<String> = self.program.concs.iter().map(|c| c.species.clone()).collect();
        for plan in &self.plans {
            for c in &plan.commands {
                match &c.kind {
                    FlatKind::Module(m) => out.extend(m.args.iter().cloned()),
                    FlatKind::Rxn(r) => out.extend(r.reactants.iter().chain(&r.products).cloned()),
                }
            }
        }
        out
    }

    /// Free parameters referenced by `conc` declarations.
    pub fn parameters(&self) -> BTreeSet<String> {
        self.program
            .concs
            .iter()
            .filter_map(|c| match &c.value {
                ConcValue::Param(p) => Some(p.clone()),
                ConcValue::Literal(_) => None,
            })
            .collect()
    }
}

fn flatten(step: usize, commands: &[Command]) -> Vec<FlatCommand> {
    let mut out = Vec::new();
    let mut push = |guard, kind| {
        let index = out.len();
        out.push(FlatCommand { step, index, guard, kind });
    };
    for cmd in commands {
        match cmd {
            Command::Module(m) => push(None, FlatKind::Module(m.clone())),
            Command::Rxn(r) => push(None, FlatKind::Rxn(r.clone())),
            Command::Conditional(c) => {
                for inner in &c.body {
                    match inner {
                        Command::Module(m) => push(Some(c.kind), FlatKind::Module(m.clone())),
                        Command::Rxn(r) => push(Some(c.kind), FlatKind::Rxn(r.clone())),
                        // rejected by the parser
                        Command::Conditional(_) => {}
                    }
                }
            }
        }
    }
    out
}

fn outcomes(guard: Option<CondKind>) -> BTreeSet<Outcome> {
    [Outcome::Gt, Outcome::Eq, Outcome::Lt].into_iter().filter(|o| guard.is_none_or(|g| g.admits(*o))).collect()
}

/// Checks the semantic rules that the grammar cannot express:
///
/// * no duplicate `conc` declarations;
/// * per-module species restrictions (an output never aliases an input,
///   `cmp` compares two different species);
/// * no cyclic read/write dependence among the modules of one step;
/// * every conditional follows, in program order, a step containing `cmp`;
///   a step holds at most one `cmp` and never mixes `cmp` with conditionals,
///   since its flags are being renormalized during that step;
/// * two modules in one step whose guards can hold together never write the
///   same species.
///
/// Explicit `rxn` commands are opaque and excluded from the dataflow rules.
pub fn validate(program: &Program) -> Result<ValidatedProgram, Vec<Diagnostic>> {
    let mut errors = Vec::new();
    let mut warnings = Vec::new();

    let mut seen: BTreeMap<&str, Span> = BTreeMap::new();
    for c in &program.concs {
        if seen.insert(&c.species, c.span).is_some() {
            errors.push(Diagnostic::error(c.span, "duplicate-conc", format!("duplicate declaration of `{}`", c.species)));
        }
    }

    let mut plans = Vec::new();
    let mut cmp_seen = false;
    let mut used: BTreeSet<String> = BTreeSet::new();
    for (si, step) in program.steps.iter().enumerate() {
        let flat = flatten(si, &step.commands);
        let cmps: Vec<&ModuleCall> =
            flat.iter().filter_map(FlatCommand::module).filter(|m| m.kind == ModuleKind::Cmp).collect();

        for cmd in &step.commands {
            if let Command::Conditional(c) = cmd {
                if !cmp_seen {
                    errors.push(Diagnostic::error(
                        c.span,
                        "conditional-without-cmp",
                        format!("`{}` needs a `cmp` in an earlier step", c.kind),
                    ));
                } else if !cmps.is_empty() {
                    errors.push(Diagnostic::error(
                        c.span,
                        "conditional-with-cmp",
                        format!("`{}` cannot share a step with `cmp`; move it to a later step", c.kind),
                    ));
                }
            }
        }
        if cmps.len() > 1 {
            errors.push(Diagnostic::error(cmps[1].span, "multiple-cmp", "a step may contain at most one `cmp`"));
        }
        if !cmps.is_empty() {
            cmp_seen = true;
        }

        for c in &flat {
            if let Some(m) = c.module() {
                used.extend(m.args.iter().cloned());
                check_restrictions(m, &mut errors);
            } else if let FlatKind::Rxn(r) = &c.kind {
                used.extend(r.reactants.iter().chain(&r.products).cloned());
            }
        }

        check_cycles(step, &flat, &mut errors);
        check_writers(&flat, &mut errors);

        plans.push(StepPlan { commands: dataflow_order(&flat), has_cmp: !cmps.is_empty() });
    }

    for c in &program.concs {
        if !used.contains(&c.species) {
            warnings.push(Diagnostic::warning(c.span, "unused-species", format!("`{}` is never used", c.species)));
        }
    }

    if errors.is_empty() {
        Ok(ValidatedProgram { program: program.clone(), plans, warnings })
    } else {
        errors.sort();
        errors.dedup();
        Err(errors)
    }
}

fn check_restrictions(m: &ModuleCall, errors: &mut Vec<Diagnostic>) {
    match m.output() {
        Some(out) => {
            if m.inputs().iter().any(|i| i == out) {
                errors.push(Diagnostic::error(
                    m.span,
                    "restriction",
                    format!("in `{m}`: output species must differ from inputs"),
                ));
            }
        }
        None => {
            if m.args[0] == m.args[1] {
                errors.push(Diagnostic::error(m.span, "restriction", format!("in `{m}`: compared species must differ")));
            }
        }
    }
}

/// Species dependency graph with an edge input → output per module.
/// Self-loops are exactly the restriction violations reported above, so
/// only strongly connected components of two or more species are reported
/// here, once per component at the step's position.
fn check_cycles(step: &Step, flat: &[FlatCommand], errors: &mut Vec<Diagnostic>) {
    let mut graph: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for m in flat.iter().filter_map(FlatCommand::module) {
        if let Some(out) = m.output() {
            graph.entry(out).or_default();
            for i in m.inputs() {
                graph.entry(i.as_str()).or_default().insert(out);
            }
        }
    }
    for component in strongly_connected(&graph) {
        if component.len() > 1 {
            errors.push(Diagnostic::error(
                step.span,
                "intra-step-cycle",
                format!("cyclic dependence within one step among {{{}}}", component.join(", ")),
            ));
        }
    }
}

fn strongly_connected<'a>(graph: &BTreeMap<&'a str, BTreeSet<&'a str>>) -> Vec<Vec<&'a str>> {
    struct Tarjan<'a, 'g> {
        graph: &'g BTreeMap<&'a str, BTreeSet<&'a str>>,
        index: BTreeMap<&'a str, usize>,
        low: BTreeMap<&'a str, usize>,
        stack: Vec<&'a str>,
        on_stack: BTreeSet<&'a str>,
        out: Vec<Vec<&'a str>>,
    }
    impl<'a> Tarjan<'a, '_> {
        fn visit(&mut self, v: &'a str) {
            let i = self.index.len();
            self.index.insert(v, i);
            self.low.insert(v, i);
            self.stack.push(v);
            self.on_stack.insert(v);
            for &w in &self.graph[v] {
                if !self.index.contains_key(w) {
                    self.visit(w);
                    let lw = self.low[w];
                    let lv = self.low.get_mut(v).unwrap();
                    *lv = (*lv).min(lw);
                } else if self.on_stack.contains(w) {
                    let iw = self.index[w];
                    let lv = self.low.get_mut(v).unwrap();
                    *lv = (*lv).min(iw);
                }
            }
            if self.low[v] == self.index[v] {
                let mut comp = Vec::new();
                while let Some(w) = self.stack.pop() {
                    self.on_stack.remove(w);
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort();
                self.out.push(comp);
            }
        }
    }
    let mut t = Tarjan {
        graph,
        index: BTreeMap::new(),
        low: BTreeMap::new(),
        stack: Vec::new(),
        on_stack: BTreeSet::new(),
        out: Vec::new(),
    };
    for &v in graph.keys() {
        if !t.index.contains_key(v) {
            t.visit(v);
        }
    }
    t.out.sort();
    t.out
}

fn check_writers(flat: &[FlatCommand], errors: &mut Vec<Diagnostic>) {
    let writers: Vec<(&FlatCommand, &ModuleCall, &str)> =
        flat.iter().filter_map(|c| c.module().and_then(|m| m.output().map(|o| (c, m, o)))).collect();
    for (i, (ca, _, out_a)) in writers.iter().enumerate() {
        for (cb, mb, out_b) in &writers[i + 1..] {
            if out_a == out_b && !outcomes(ca.guard).is_disjoint(&outcomes(cb.guard)) {
                errors.push(Diagnostic::error(
                    mb.span,
                    "conflicting-writers",
                    format!("`{out_a}` is written by two commands that can run together in this step"),
                ));
            }
        }
    }
}

/// Kahn's algorithm over commands; an edge runs from each writer of a
/// species to each reader of it. Any cycle has already been reported, so a
/// leftover remainder is appended in textual order.
fn dataflow_order(flat: &[FlatCommand]) -> Vec<FlatCommand> {
    let reads = |c: &FlatCommand| -> Vec<String> {
        match &c.kind {
            FlatKind::Module(m) => m.inputs().to_vec(),
            FlatKind::Rxn(_) => Vec::new(),
        }
    };
    let n = flat.len();
    let mut indegree = vec![0usize; n];
    let mut succ = vec![Vec::new(); n];
    for (w, cw) in flat.iter().enumerate() {
        let Some(out) = cw.module().and_then(ModuleCall::output) else { continue };
        for (r, cr) in flat.iter().enumerate() {
            if r != w && reads(cr).iter().any(|s| s == out) {
                succ[w].push(r);
                indegree[r] += 1;
            }
        }
    }
    let mut done = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while let Some(next) = (0..n).find(|&i| !done[i] && indegree[i] == 0) {
        done[next] = true;
        order.push(flat[next].clone());
        for &s in &succ[next] {
            indegree[s] -= 1;
        }
    }
    order.extend((0..n).filter(|&i| !done[i]).map(|i| flat[i].clone()));
    order
}
