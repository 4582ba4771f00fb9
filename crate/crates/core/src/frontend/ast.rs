use std::fmt;

use crate::number::Number;

/// Source position (1-based). Spans never participate in equality, so two
/// ASTs compare equal when they differ only in layout.
#[derive(Clone, Copy, Debug, Default, Eq)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl PartialEq for Span {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Span {
    pub fn new(line: usize, col: usize) -> Self {
        Self { line, col }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Program {
    pub concs: Vec<ConcDecl>,
    pub steps: Vec<Step>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConcDecl {
    pub species: String,
    pub value: ConcValue,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ConcValue {
    Literal(Number),
    /// Free parameter bound at compile time, e.g. `a0` in `conc[a,a0]`.
    Param(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Step {
    pub commands: Vec<Command>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Command {
    Rxn(ExplicitRxn),
    Module(ModuleCall),
    Conditional(Conditional),
}

/// `rxn[reactants, products, rate]`; an empty side is written `nil`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExplicitRxn {
    pub reactants: Vec<String>,
    pub products: Vec<String>,
    pub rate: Number,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModuleCall {
    pub kind: ModuleKind,
    pub args: Vec<String>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Conditional {
    pub kind: CondKind,
    pub body: Vec<Command>,
    pub span: Span,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModuleKind {
    Ld,
    Add,
    Sub,
    Mul,
    Div,
    Sqrt,
    Cmp,
}

impl ModuleKind {
    pub const ALL: [ModuleKind; 7] =
        [ModuleKind::Ld, ModuleKind::Add, ModuleKind::Sub, ModuleKind::Mul, ModuleKind::Div, ModuleKind::Sqrt, ModuleKind::Cmp];

    pub fn name(self) -> &'static str {
        match self {
            ModuleKind::Ld => "ld",
            ModuleKind::Add => "add",
            ModuleKind::Sub => "sub",
            ModuleKind::Mul => "mul",
            ModuleKind::Div => "div",
            ModuleKind::Sqrt => "sqrt",
            ModuleKind::Cmp => "cmp",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    pub fn arity(self) -> usize {
        match self {
            ModuleKind::Ld | ModuleKind::Sqrt | ModuleKind::Cmp => 2,
            ModuleKind::Add | ModuleKind::Sub | ModuleKind::Mul | ModuleKind::Div => 3,
        }
    }
}

impl fmt::Display for ModuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl ModuleCall {
    /// Species read by the module.
    pub fn inputs(&self) -> &[String] {
        match self.kind {
            ModuleKind::Cmp => &self.args,
            _ => &self.args[..self.args.len() - 1],
        }
    }

    /// Species written by the module; `cmp` writes only flags.
    pub fn output(&self) -> Option<&str> {
        match self.kind {
            ModuleKind::Cmp => None,
            _ => self.args.last().map(String::as_str),
        }
    }
}

/// Outcome of a comparison as seen by conditionals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Outcome {
    Gt,
    Eq,
    Lt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CondKind {
    Gt,
    Ge,
    Eq,
    Lt,
    Le,
}

impl CondKind {
    pub const ALL: [CondKind; 5] = [CondKind::Gt, CondKind::Ge, CondKind::Eq, CondKind::Lt, CondKind::Le];

    pub fn name(self) -> &'static str {
        match self {
            CondKind::Gt => "ifGT",
            CondKind::Ge => "ifGE",
            CondKind::Eq => "ifEQ",
            CondKind::Lt => "ifLT",
            CondKind::Le => "ifLE",
        }
    }

    /// Accepts `ifGT`, `IfGT`, `ifgt`, ...
    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name().eq_ignore_ascii_case(name))
    }

    pub fn admits(self, outcome: Outcome) -> bool {
        match self {
            CondKind::Gt => outcome == Outcome::Gt,
            CondKind::Ge => outcome != Outcome::Lt,
            CondKind::Eq => outcome == Outcome::Eq,
            CondKind::Lt => outcome == Outcome::Lt,
            CondKind::Le => outcome != Outcome::Gt,
        }
    }
}

impl fmt::Display for CondKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for ModuleCall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.kind, self.args.join(","))
    }
}

fn write_side(f: &mut fmt::Formatter<'_>, side: &[String]) -> fmt::Result {
    if side.is_empty() {
        f.write_str("nil")
    } else {
        f.write_str(&side.join("+"))
    }
}

impl fmt::Display for ExplicitRxn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("rxn[")?;
        write_side(f, &self.reactants)?;
        f.write_str(",")?;
        write_side(f, &self.products)?;
        write!(f, ",{}]", self.rate)
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Command::Rxn(r) => r.fmt(f),
            Command::Module(m) => m.fmt(f),
            Command::Conditional(c) => {
                write!(f, "{}[{{ ", c.kind)?;
                for (i, cmd) in c.body.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    cmd.fmt(f)?;
                }
                f.write_str(" }]")
            }
        }
    }
}

impl fmt::Display for ConcDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            ConcValue::Literal(n) => write!(f, "conc[{},{}]", self.species, n),
            ConcValue::Param(p) => write!(f, "conc[{},{}]", self.species, p),
        }
    }
}

impl fmt::Display for Program {
    /// Canonical layout: declarations first, one step per block.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("crn = {\n")?;
        let total = self.concs.len() + self.steps.len();
        let mut written = 0;
        let mut sep = |f: &mut fmt::Formatter<'_>| {
            written += 1;
            f.write_str(if written < total { ",\n" } else { "\n" })
        };
        for c in &self.concs {
            write!(f, "  {c}")?;
            sep(f)?;
        }
        for s in &self.steps {
            f.write_str("  step[{\n")?;
            for (i, cmd) in s.commands.iter().enumerate() {
                write!(f, "    {cmd}")?;
                f.write_str(if i + 1 < s.commands.len() { ",\n" } else { "\n" })?;
            }
            f.write_str("  }]")?;
            sep(f)?;
        }
        f.write_str("};\n")
    }
}
