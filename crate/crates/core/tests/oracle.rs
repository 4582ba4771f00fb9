mod common;

use common::*;
use crnpp_core::oracle::{expected_series, interpret, FlagState, Real};
use proptest::prelude::*;

fn euclid(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn final_of(name: &str, binds: &[(&str, i64)], cycles: usize, species: &str) -> Real {
    let vp = validated(corpus(name).source);
    let tl = interpret(&vp, &bindings(binds), cycles, 0.5).unwrap();
    tl.final_value(species).unwrap().clone()
}

#[test]
fn gcd_matches_euclid() {
    assert_eq!(final_of("gcd", &[("a0", 32), ("b0", 12)], 6, "a"), Real::from(euclid(32, 12)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gcd_program_agrees_with_euclid(a in 1i64..40, b in 1i64..40) {
        let cycles = (a + b) as usize + 2;
        let vp = validated(corpus("gcd").source);
        let tl = interpret(&vp, &bindings(&[("a0", a), ("b0", b)]), cycles, 0.5).unwrap();
        prop_assert_eq!(tl.final_value("a").unwrap(), &Real::from(euclid(a, b)));
        prop_assert_eq!(tl.final_value("b").unwrap(), &Real::from(euclid(a, b)));
    }

    #[test]
    fn division_agrees_with_integer_division(a in 0i64..40, b in 1i64..8) {
        let cycles = (a / b) as usize + 3;
        let vp = validated(corpus("int_division").source);
        let tl = interpret(&vp, &bindings(&[("a0", a), ("b0", b)]), cycles, 0.5).unwrap();
        prop_assert_eq!(tl.final_value("q").unwrap(), &Real::from(a / b));
        prop_assert_eq!(tl.final_value("r").unwrap(), &Real::from(a % b));
    }

    #[test]
    /// The program stops once `(z+1)^2` reaches `n` within ε, so it
    /// returns the largest `z` with `z^2 < n` (floor sqrt except on perfect
    /// squares).
    fn integer_sqrt_program_semantics(n in 0i64..60) {
        let root = (0..=n).take_while(|z| *z == 0 || z * z < n).last().unwrap();
        let vp = validated(corpus("int_sqrt").source);
        let tl = interpret(&vp, &bindings(&[("n0", n)]), root as usize + 3, 0.5).unwrap();
        prop_assert_eq!(tl.final_value("out").unwrap(), &Real::from(root));
    }

    /// The first k cycles of a longer run equal a k-cycle run.
    #[test]
    fn prefix_property(k in 1usize..6, m in 0usize..4, f0 in 1i64..7) {
        let vp = validated(corpus("factorial").source);
        let b = bindings(&[("f0", f0)]);
        let short = interpret(&vp, &b, k, 0.5).unwrap();
        let long = interpret(&vp, &b, k + m, 0.5).unwrap();
        prop_assert_eq!(&long.entries[..short.entries.len()], &short.entries[..]);
    }

    #[test]
    fn truncated_subtraction(a in 0i64..1000, b in 0i64..1000, q in 1i64..20) {
        let (x, y) = (Real::from(a).div(&Real::from(q)).unwrap(), Real::from(b).div(&Real::from(q)).unwrap());
        let d = x.truncated_sub(&y);
        prop_assert!(d.cmp_total(&Real::zero()) != std::cmp::Ordering::Less);
        if a >= b {
            prop_assert_eq!(d.add(&y), x);
        }
    }
}

#[test]
fn factorial_of_five() {
    let product: i64 = (1..=5).product();
    assert_eq!(final_of("factorial", &[("f0", 5)], 6, "f"), Real::from(product));
}

#[test]
fn division_of_twenty_by_three() {
    assert_eq!(final_of("int_division", &[("a0", 20), ("b0", 3)], 9, "q"), Real::from(6));
    assert_eq!(final_of("int_division", &[("a0", 20), ("b0", 3)], 9, "r"), Real::from(2));
}

#[test]
fn counter_series() {
    let vp = validated(corpus("counter").source);
    let tl = interpret(&vp, &bindings(&[("c0", 3)]), 8, 0.5).unwrap();
    let last = tl.phases_per_cycle - 1;
    let c: Vec<f64> = tl.entries.iter().filter(|e| e.phase == last).map(|e| e.env["c"].to_f64()).collect();
    assert_eq!(c, vec![2.0, 1.0, 0.0, 3.0, 2.0, 1.0, 0.0, 3.0]);
}

#[test]
fn euler_partial_sums() {
    let vp = validated(corpus("euler").source);
    let tl = interpret(&vp, &Default::default(), 5, 0.5).unwrap();
    let e: Vec<f64> = tl.entries.iter().filter(|x| x.phase == 1).map(|x| x.env["e"].to_f64()).collect();
    let mut sum = 0.0;
    let mut fact = 1.0;
    for (n, got) in e.iter().enumerate() {
        if n == 0 {
            sum = 2.0;
        } else {
            fact *= (n + 1) as f64;
            sum += 1.0 / fact;
        }
        assert!((got - sum).abs() < 1e-12, "cycle {n}: {got} vs {sum}");
    }
    assert!(tl.final_value("e").unwrap().is_exact());
}

#[test]
fn pi_adds_two_terms_per_cycle() {
    let vp = validated(corpus("pi").source);
    let tl = interpret(&vp, &Default::default(), 8, 0.5).unwrap();
    let leibniz: f64 = (0..16).map(|j| if j % 2 == 0 { 4.0 } else { -4.0 } / (2 * j + 1) as f64).sum();
    assert!((tl.final_value("pi").unwrap().to_f64() - leibniz).abs() < 1e-12);
}

#[test]
fn conc_only_program_is_constant() {
    let vp = validated("crn = { conc[a,2], conc[b,3], step[{ ld[a,b] }] }");
    let tl = interpret(&vp, &Default::default(), 3, 0.5).unwrap();
    let s = expected_series(&tl, "a").unwrap();
    assert!(s.iter().all(|v| *v == 2.0));
}

#[test]
fn flags_are_coherent() {
    let vp = validated(corpus("gcd").source);
    let tl = interpret(&vp, &bindings(&[("a0", 32), ("b0", 12)]), 6, 0.5).unwrap();
    for e in &tl.entries {
        if e.phase >= 1 {
            assert!(matches!(e.flag, FlagState::Gt | FlagState::Eq | FlagState::Lt), "{:?}", e.flag);
        }
    }
    assert_eq!(tl.entry(0, 1).unwrap().flag, FlagState::Gt);
}
