use crate::frontend::{ModuleCall, ModuleKind};
use crate::ir::{Multiset, Reaction, SpeciesName};

/// Names fresh helper species after the command instance that owns them,
/// so two modules in one step never share a helper.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExpansionContext {
    pub step: usize,
    pub index: usize,
}

impl ExpansionContext {
    pub fn helper(&self, base: &str) -> SpeciesName {
        SpeciesName::temp(format!("{base}_s{}c{}", self.step, self.index))
    }
}

pub(crate) fn rxn(reactants: &[&SpeciesName], products: &[&SpeciesName], rate: f64) -> Reaction {
    let side = |xs: &[&SpeciesName]| {
        let mut m = Multiset::new();
        for s in xs {
            m.add((*s).clone(), 1);
        }
        m
    };
    Reaction::new(side(reactants), side(products), rate).expect("module reactions are well-formed")
}

/// Reactions of an arithmetic module, before any clock or flag catalysis.
///
/// `cmp` has no single-phase expansion and yields an empty list; use
/// [`super::expand_cmp`] for it.
pub fn expand_module(m: &ModuleCall, ctx: &ExpansionContext) -> Vec<Reaction> {
    let a: Vec<SpeciesName> = m.args.iter().map(SpeciesName::user).collect();
    match m.kind {
        ModuleKind::Ld => {
            let (a, b) = (&a[0], &a[1]);
            vec![rxn(&[a], &[a, b], 1.0), rxn(&[b], &[], 1.0)]
        }
        ModuleKind::Add => {
            let (x, y, c) = (&a[0], &a[1], &a[2]);
            vec![rxn(&[x], &[x, c], 1.0), rxn(&[y], &[y, c], 1.0), rxn(&[c], &[], 1.0)]
        }
        ModuleKind::Sub => {
            let (x, y, c) = (&a[0], &a[1], &a[2]);
            let h = ctx.helper("H");
            vec![rxn(&[x], &[x, c], 1.0), rxn(&[y], &[y, &h], 1.0), rxn(&[c], &[], 1.0), rxn(&[c, &h], &[], 1.0)]
        }
        ModuleKind::Mul => {
            let (x, y, c) = (&a[0], &a[1], &a[2]);
            vec![rxn(&[x, y], &[x, y, c], 1.0), rxn(&[c], &[], 1.0)]
        }
        ModuleKind::Div => {
            let (x, y, c) = (&a[0], &a[1], &a[2]);
            vec![rxn(&[x], &[x, c], 1.0), rxn(&[y, c], &[y], 1.0)]
        }
        ModuleKind::Sqrt => {
            let (x, b) = (&a[0], &a[1]);
            vec![rxn(&[x], &[x, b], 1.0), rxn(&[b, b], &[], 0.5)]
        }
        ModuleKind::Cmp => Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::Span;

    fn call(kind: ModuleKind, args: &[&str]) -> ModuleCall {
        ModuleCall { kind, args: args.iter().map(|s| s.to_string()).collect(), span: Span::new(1, 1) }
    }

    fn show(kind: ModuleKind, args: &[&str]) -> Vec<String> {
        expand_module(&call(kind, args), &ExpansionContext { step: 0, index: 2 }).iter().map(ToString::to_string).collect()
    }

    #[test]
    fn load() {
        assert_eq!(show(ModuleKind::Ld, &["a", "b"]), vec!["a -> a + b", "b -> ∅"]);
    }

    #[test]
    fn subtraction_has_fresh_helper() {
        assert_eq!(
            show(ModuleKind::Sub, &["a", "b", "c"]),
            vec!["a -> a + c", "b -> b + temp:H_s0c2", "c -> ∅", "c + temp:H_s0c2 -> ∅"]
        );
        let other = expand_module(&call(ModuleKind::Sub, &["a", "b", "c"]), &ExpansionContext { step: 1, index: 0 });
        assert!(other[1].products().multiplicity(&SpeciesName::temp("H_s1c0")) == 1);
    }

    #[test]
    fn square_root_rate_half() {
        let r = expand_module(&call(ModuleKind::Sqrt, &["a", "b"]), &ExpansionContext { step: 0, index: 0 });
        assert_eq!(r[1].reactants().multiplicity(&SpeciesName::user("b")), 2);
        assert_eq!(r[1].rate(), 0.5);
        assert_eq!(r[0].rate(), 1.0);
    }

    #[test]
    fn remaining_rows() {
        assert_eq!(show(ModuleKind::Add, &["a", "b", "c"]), vec!["a -> a + c", "b -> b + c", "c -> ∅"]);
        assert_eq!(show(ModuleKind::Mul, &["a", "b", "c"]), vec!["a + b -> a + b + c", "c -> ∅"]);
        assert_eq!(show(ModuleKind::Div, &["a", "b", "c"]), vec!["a -> a + c", "b + c -> b"]);
        assert!(show(ModuleKind::Cmp, &["a", "b"]).is_empty());
    }

    #[test]
    fn inputs_are_catalytic() {
        for (kind, args) in [
            (ModuleKind::Ld, &["a", "b"][..]),
            (ModuleKind::Add, &["a", "b", "c"]),
            (ModuleKind::Sub, &["a", "b", "c"]),
            (ModuleKind::Mul, &["a", "b", "c"]),
            (ModuleKind::Div, &["a", "b", "c"]),
            (ModuleKind::Sqrt, &["a", "b"]),
        ] {
            let m = call(kind, args);
            for r in expand_module(&m, &ExpansionContext { step: 0, index: 0 }) {
                for input in m.inputs() {
                    assert_eq!(r.net_change(&SpeciesName::user(input)), 0, "{kind} consumes {input}");
                }
            }
        }
    }
}
