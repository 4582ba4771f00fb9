use std::collections::BTreeSet;

use crnpp_core::corpus::PROGRAMS;
use crnpp_core::frontend::*;
use crnpp_core::Number;
use proptest::prelude::*;

const NAMES: [&str; 6] = ["a", "b", "c", "d", "xTmp", "y_2"];

fn species() -> impl Strategy<Value = String> {
    prop::sample::select(NAMES.to_vec()).prop_map(str::to_string)
}

fn number() -> impl Strategy<Value = Number> {
    prop_oneof![
        (0i64..1000).prop_map(Number::from_integer),
        (0i64..1000, 1i64..50).prop_map(|(p, q)| format!("{p}/{q}").parse().unwrap()),
        (0i64..100000).prop_map(|n| format!("{}.{:03}", n / 1000, n % 1000).parse().unwrap()),
    ]
}

fn module(allow_cmp: bool) -> impl Strategy<Value = ModuleCall> {
    let kinds: Vec<ModuleKind> = ModuleKind::ALL.into_iter().filter(|k| allow_cmp || *k != ModuleKind::Cmp).collect();
    (prop::sample::select(kinds), prop::collection::vec(species(), 3)).prop_map(|(kind, mut args)| {
        args.truncate(kind.arity());
        ModuleCall { kind, args, span: Span::default() }
    })
}

fn rxn() -> impl Strategy<Value = ExplicitRxn> {
    (
        prop::collection::vec(species(), 0..3),
        prop::collection::vec(species(), 0..3),
        (1i64..100).prop_map(Number::from_integer),
    )
        .prop_filter("a reaction needs a species", |(r, p, _)| !(r.is_empty() && p.is_empty()))
        .prop_map(|(reactants, products, rate)| ExplicitRxn { reactants, products, rate, span: Span::default() })
}

fn flat_command() -> impl Strategy<Value = Command> {
    prop_oneof![module(false).prop_map(Command::Module), rxn().prop_map(Command::Rxn)]
}

fn command() -> impl Strategy<Value = Command> {
    prop_oneof![
        3 => module(true).prop_map(Command::Module),
        1 => rxn().prop_map(Command::Rxn),
        1 => (prop::sample::select(CondKind::ALL.to_vec()), prop::collection::vec(flat_command(), 1..3))
            .prop_map(|(kind, body)| Command::Conditional(Conditional { kind, body, span: Span::default() })),
    ]
}

fn program() -> impl Strategy<Value = Program> {
    let conc = (species(), prop_oneof![number().prop_map(ConcValue::Literal), Just(ConcValue::Param("p0".into()))])
        .prop_map(|(species, value)| ConcDecl { species, value, span: Span::default() });
    let step = prop::collection::vec(command(), 1..4).prop_map(|commands| Step { commands, span: Span::default() });
    (prop::collection::vec(conc, 0..4), prop::collection::vec(step, 1..4)).prop_map(|(concs, steps)| Program { concs, steps })
}

proptest! {
    #[test]
    fn pretty_print_round_trips(p in program()) {
        let text = p.to_string();
        let reparsed = parse(&text).map_err(|d| TestCaseError::fail(format!("{d:?}\n{text}")))?;
        prop_assert_eq!(reparsed, p);
    }

    /// Shuffling the commands of a step never changes which rules fire.
    #[test]
    fn validation_ignores_command_order(p in program(), seed in any::<u64>()) {
        let rules = |p: &Program| -> BTreeSet<&'static str> {
            match validate(p) {
                Ok(vp) => vp.warnings().iter().map(|d| d.rule).collect(),
                Err(ds) => ds.iter().map(|d| d.rule).collect(),
            }
        };
        let mut shuffled = p.clone();
        let mut state = seed;
        for step in &mut shuffled.steps {
            let n = step.commands.len();
            for i in (1..n).rev() {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let j = (state >> 33) as usize % (i + 1);
                step.commands.swap(i, j);
            }
        }
        prop_assert_eq!(rules(&p), rules(&shuffled));
    }

    /// Diagnostics on arbitrary text never panic, and rejected text always
    /// carries at least one error.
    #[test]
    fn parser_is_total(text in "[a-z\\[\\]{},=+;/0-9 \n.]{0,80}") {
        if let Err(ds) = parse(&text) {
            prop_assert!(ds.iter().any(Diagnostic::is_error));
        }
    }
}

#[test]
fn gcd_listing_shape() {
    let src = crnpp_core::corpus::find("gcd").unwrap().source;
    let p = parse(src).unwrap();
    assert_eq!(p.concs.len(), 2);
    assert_eq!(p.steps.len(), 2);
}

#[test]
fn every_corpus_program_validates() {
    for program in PROGRAMS {
        let p = parse(program.source).unwrap_or_else(|d| panic!("{}: {d:?}", program.name));
        let vp = validate(&p).unwrap_or_else(|d| panic!("{}: {d:?}", program.name));
        assert!(vp.warnings().iter().all(|d| !d.is_error()));
        assert_eq!(parse(&p.to_string()).unwrap(), p, "{} round trip", program.name);
    }
}

fn rules_of(src: &str) -> Vec<&'static str> {
    match validate(&parse(src).unwrap()) {
        Ok(_) => Vec::new(),
        Err(ds) => ds.iter().map(|d| d.rule).collect(),
    }
}

#[test]
fn output_must_differ_from_inputs() {
    assert_eq!(rules_of("crn = { conc[a,1], conc[b,2], step[{ mul[a,b,a] }] }"), vec!["restriction"]);
}

#[test]
fn mul_then_add_back_forms_a_cycle() {
    assert_eq!(rules_of("crn = { step[{ mul[a,b,c], add[c,d,a] }] }"), vec!["intra-step-cycle"]);
}

#[test]
fn conditional_needs_an_earlier_cmp() {
    assert_eq!(rules_of("crn = { step[{ ifGT[{ ld[a,b] }] }] }"), vec!["conditional-without-cmp"]);
}

#[test]
fn diagnostics_render_with_location() {
    let ds = parse("crn = { step[{ }] }").unwrap_err();
    let line = ds[0].render("bad.crnpp");
    assert!(line.starts_with("bad.crnpp:1:"), "{line}");
    assert!(line.contains(": error: "), "{line}");
}
