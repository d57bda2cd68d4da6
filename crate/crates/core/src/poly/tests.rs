use alloc::string::ToString;
use alloc::vec::Vec;
use core::cmp::Ordering;

use proptest::prelude::*;

use super::*;
use crate::rat::Rat;

fn xy() -> VarSet {
    VarSet::new(&["x", "y"]).unwrap()
}

fn lambda_z() -> VarSet {
    VarSet::new(&[
        "a20", "a21", "a30", "a31", "a40", "a41", "a50", "a51", "a60", "a61", "z",
    ])
    .unwrap()
}

fn p(text: &str, vars: &VarSet) -> MPoly {
    MPoly::parse(text, vars).unwrap()
}

#[test]
fn difference_of_squares() {
    let v = xy();
    assert_eq!(p("(x+y)*(x-y)", &v), p("x^2 - y^2", &v));
    assert!((p("x^3 + 2/3*y", &v) * MPoly::zero(&v)).is_zero());
}

#[test]
fn xi20_expands() {
    let v = lambda_z();
    let e = p("a50*(a30-a60)", &v);
    assert_eq!(e, p("a30*a50 - a50*a60", &v));
    assert_eq!(e.to_string(), "-a50*a60 + a30*a50");
    let point: Vec<Rat> = [0, 0, 2, 0, 0, 0, 1, 0, 2, 0, 0]
        .iter()
        .map(|&x| Rat::from_int(x))
        .collect();
    assert!(e.eval(&point).unwrap().is_zero());
}

#[test]
fn mismatched_varsets_are_usage_errors() {
    let a = p("x", &xy());
    let b = MPoly::var(&VarSet::new(&["z"]).unwrap(), "z").unwrap();
    assert!(matches!(a.try_add(&b), Err(crate::Error::Usage(_))));
    assert!(matches!(a.diff_var("q"), Err(crate::Error::Usage(_))));
}

#[test]
fn derivative_examples() {
    let v = VarSet::new(&["z"]).unwrap();
    assert_eq!(p("z^3", &v).diff(0), p("3*z^2", &v));
    let f3 = p("z^3*(-1+2*z^2)^2", &v);
    let z0 = libm::sqrt(0.5);
    let (_, d1) = f3.diff(0).eval_real(&[z0]);
    assert!(d1.contains(0.0) || d1.width() < 1e-12 && d1.lo.abs() < 1e-12);
    let (_, d2) = f3.diff(0).diff(0).eval_real(&[z0]);
    assert_eq!(d2.certain_sign(), Some(1));
}

#[test]
fn quartic_averaged_function_negative_at_fold() {
    let v = VarSet::new(&["z"]).unwrap();
    let f4 = p("z^5*(8210368799 - 21687552313344*z^2 + 295572602880*z^4)", &v);
    let (x, enc) = f4.eval_real(&[libm::sqrt(0.5)]);
    assert!(x < 0.0);
    assert_eq!(enc.certain_sign(), Some(-1));
}

#[test]
fn hand_evaluated_xi_hat_30() {
    // 1*2 + 3*5 - 5*7 - 2*11 = -40
    let v = lambda_z();
    let xi = p("a31*a50 + a30*a51 - a51*a60 - a50*a61", &v);
    let mut named = alloc::collections::BTreeMap::new();
    for (k, val) in [("a31", 1), ("a50", 2), ("a30", 3), ("a51", 5), ("a60", 7), ("a61", 11)] {
        named.insert(k.to_string(), Rat::from_int(val));
    }
    assert_eq!(xi.eval_named(&named).unwrap(), Rat::from_int(-40));
    named.remove("a61");
    assert!(xi.eval_named(&named).is_err());
}

#[test]
fn division_examples() {
    let v = xy();
    let lex = MonomialOrder::lex(2);
    let (q, r) = p("x^2*y", &v).divmod(&[p("x", &v)], &lex).unwrap();
    assert_eq!(q[0], p("x*y", &v));
    assert!(r.is_zero());
    let (_, r) = p("x^2 + y^2", &v).divmod(&[p("x - y", &v)], &lex).unwrap();
    assert_eq!(r, p("2*y^2", &v));
    assert!(p("x", &v).divmod(&[], &lex).is_err());

    let l = lambda_z();
    let xi20 = p("a50*(a30-a60)", &l);
    let (_, r) = xi20
        .divmod(
            core::slice::from_ref(&xi20),
            &MonomialOrder::degrevlex_ascending(l.len()),
        )
        .unwrap();
    assert!(r.is_zero());
}

#[test]
fn proportionality_examples() {
    let v = xy();
    assert_eq!(p("2*x", &v).proportional(&p("x", &v)), Some(Rat::from_int(2)));
    assert_eq!(p("x", &v).proportional(&p("y", &v)), None);
    assert_eq!(MPoly::zero(&v).proportional(&MPoly::zero(&v)), Some(Rat::one()));
    assert_eq!(MPoly::zero(&v).proportional(&p("x", &v)), None);
}

#[test]
fn sqrt_rule_reduces_products() {
    let v = VarSet::new(&["b", "x"])
        .unwrap()
        .with_sqrt_rule("b", Rat::from_int(145))
        .unwrap();
    let b = p("b", &v);
    assert_eq!(&b * &b, MPoly::constant(&v, Rat::from_int(145)));
    assert_eq!(p("b^3*x", &v), p("145*b*x", &v));
}

#[test]
fn canonical_printing_order() {
    let v = lambda_z();
    let e = p("z + a20^2 + a61*a20 + 1", &v);
    assert_eq!(e.to_string(), "a20*a61 + a20^2 + z + 1");
}

#[test]
fn parser_accepts_paper_style_products() {
    let v = lambda_z();
    let a = p("-a20 a40 (5 a30 + a40 - 5 a60) (a30 - a60)", &v);
    let b = p("-1*a20*a40*(5*a30 + a40 - 5*a60)*(a30 - a60)", &v);
    assert_eq!(a, b);
    assert!(MPoly::parse("a20 +", &v).is_err());
    assert!(MPoly::parse("x", &v).is_err());
    assert!(MPoly::parse("a20 / a30", &v).is_err());
}

fn arb_rat() -> impl Strategy<Value = Rat> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| Rat::new(n, d))
}

fn arb_poly(vars: VarSet, max_exp: u32, max_terms: usize) -> impl Strategy<Value = MPoly> {
    let n = vars.len();
    prop::collection::vec((prop::collection::vec(0..=max_exp, n), arb_rat()), 0..=max_terms)
        .prop_map(move |terms| MPoly::from_terms(&vars, terms.into_iter().map(|(e, c)| (Monomial::from_exps(e), c))))
}

fn xyz() -> VarSet {
    VarSet::new(&["x", "y", "z"]).unwrap()
}

fn arb_monomial() -> impl Strategy<Value = Monomial> {
    prop::collection::vec(0u32..5, 3).prop_map(Monomial::from_exps)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn leibniz_rule(a in arb_poly(xyz(), 3, 6), b in arb_poly(xyz(), 3, 6), v in 0usize..3) {
        let lhs = (&a * &b).diff(v);
        let rhs = &(&a.diff(v) * &b) + &(&a * &b.diff(v));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn distributive(a in arb_poly(xyz(), 3, 5), b in arb_poly(xyz(), 3, 5), c in arb_poly(xyz(), 3, 5)) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
    }

    #[test]
    fn eval_is_additive(a in arb_poly(xyz(), 3, 6), b in arb_poly(xyz(), 3, 6), pt in prop::collection::vec(arb_rat(), 3)) {
        prop_assert_eq!((&a + &b).eval(&pt).unwrap(), a.eval(&pt).unwrap() + b.eval(&pt).unwrap());
    }

    #[test]
    fn print_parse_roundtrip(a in arb_poly(xyz(), 4, 8)) {
        let back = MPoly::parse(&a.to_string(), &xyz()).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn division_reconstructs(a in arb_poly(xyz(), 3, 6), d1 in arb_poly(xyz(), 2, 3), d2 in arb_poly(xyz(), 2, 3), lex in any::<bool>()) {
        prop_assume!(!d1.is_zero() && !d2.is_zero());
        let ord = if lex { MonomialOrder::lex(3) } else { MonomialOrder::degrevlex(3) };
        let divs = [d1, d2];
        let (q, r) = a.divmod(&divs, &ord).unwrap();
        let mut back = r.clone();
        for (qi, di) in q.iter().zip(&divs) {
            back = &back + &(qi * di);
        }
        prop_assert_eq!(back, a);
        for (m, _) in r.terms() {
            for d in &divs {
                let (lm, _) = d.leading_term(&ord).unwrap();
                prop_assert!(!lm.divides(m));
            }
        }
    }

    #[test]
    fn orders_are_monomial_orders(a in arb_monomial(), b in arb_monomial(), c in arb_monomial(), lex in any::<bool>()) {
        let ord = if lex { MonomialOrder::lex(3) } else { MonomialOrder::degrevlex(3) };
        // total and antisymmetric
        prop_assert_eq!(ord.cmp(&a, &b), ord.cmp(&b, &a).reverse());
        if ord.cmp(&a, &b) == Ordering::Equal { prop_assert_eq!(&a, &b); }
        // multiplicative
        prop_assert_eq!(ord.cmp(&a, &b), ord.cmp(&a.mul(&c), &b.mul(&c)));
        // well-ordering: 1 is the minimum
        prop_assert_ne!(ord.cmp(&Monomial::one(3), &a), Ordering::Greater);
        // transitive
        if ord.cmp(&a, &b) != Ordering::Greater && ord.cmp(&b, &c) != Ordering::Greater {
            prop_assert_ne!(ord.cmp(&a, &c), Ordering::Greater);
        }
    }
}
