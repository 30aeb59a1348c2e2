use proptest::prelude::*;

use super::*;

fn reg() -> FieldRegistry {
    FieldRegistry::new([FieldSymbol::new("u", 2), FieldSymbol::new("v", 3)]).unwrap()
}

fn p(src: &str) -> DiffPoly {
    DiffPoly::parse(src, &reg()).unwrap()
}

#[test]
fn addition_examples() {
    assert!((&p("u") + &p("-1 u")).is_zero());
    assert_eq!(&p("u^2/2") + &p("u^2/2"), p("u^2"));
    let x = p("3/2 u u' + 1/4 u'''");
    assert_eq!(&x + &DiffPoly::zero(), x);
}

#[test]
fn multiplication_examples() {
    assert_eq!(&p("u") * &p("u'"), p("u u'"));
    assert_eq!(&p("u/2") * &p("u/2"), p("u^2/4"));
    assert_eq!(&p("u + u'") * &p("u - u'"), p("u^2 - u'^2"));
}

#[test]
fn derivative_examples() {
    assert_eq!(p("u").total_derivative(), p("u'"));
    assert_eq!(p("u u").total_derivative(), p("2 u u'"));
    assert_eq!(
        p("u^3/6 - u'^2/2").total_derivative(),
        p("u^2 u'/2 - u' u''")
    );
    assert_eq!(p("3").total_derivative(), DiffPoly::zero());
    assert_eq!(p("u").nth_derivative(5), p("u^(5)"));
}

#[test]
fn spin_examples() {
    assert_eq!(p("u u'").spin_of(), Spin::Homogeneous(5));
    assert_eq!(p("u + u'").spin_of(), Spin::Inhomogeneous);
    assert_eq!(p("u'''").spin_of(), Spin::Homogeneous(5));
    assert_eq!(DiffPoly::zero().spin_of(), Spin::Any);
    assert_eq!(p("v u").spin_of(), Spin::Homogeneous(5));
}

#[test]
fn variational_examples() {
    let u = reg().field("u").unwrap();
    assert_eq!(p("u^3/6").variational_derivative(&u), p("u^2/2"));
    assert_eq!(p("-u'^2/2").variational_derivative(&u), p("u''"));
    assert!(p("u'").variational_derivative(&u).is_zero());
    let v = reg().field("v").unwrap();
    assert_eq!(p("u v'").variational_derivative(&v), p("-u'"));
}

#[test]
fn mod_total_derivative_examples() {
    assert!(p("u u'")
        .equals_mod_total_derivative(&DiffPoly::zero())
        .unwrap());
    assert!(!p("u^2")
        .equals_mod_total_derivative(&DiffPoly::zero())
        .unwrap());
    assert!(p("u'' u").equals_mod_total_derivative(&p("-u'^2")).unwrap());
    assert!(matches!(
        p("u + 1").equals_mod_total_derivative(&p("u")),
        Err(Error::ConstantResidual(_))
    ));
}

#[test]
fn registry_rules() {
    let mut r = reg();
    assert!(matches!(
        r.register(FieldSymbol::new("u", 2)),
        Err(Error::DuplicateField(_))
    ));
    assert!(r.register(FieldSymbol::new("D", 1)).is_err());
    let other = FieldRegistry::new([FieldSymbol::new("u", 4)]).unwrap();
    assert!(matches!(
        reg().union(&other),
        Err(Error::RegistryMismatch { .. })
    ));
    let a = DiffPoly::jet(FieldSymbol::new("u", 2).jet(0));
    let b = DiffPoly::jet(FieldSymbol::new("u", 4).jet(0));
    assert!(a.try_add(&b).is_err());
    assert!(a.try_mul(&b).is_err());
    assert!(DiffPoly::parse("w", &reg()).is_err());
}

#[test]
fn substitution_and_partials() {
    let u = reg().field("u").unwrap();
    let q = p("u u'' + v");
    assert_eq!(q.substitute(&u, &p("v'")), p("v' v''' + v"));
    assert_eq!(q.partial(&u.jet(2)), p("u"));
    assert_eq!(q.degree(), Some(2));
    assert_eq!(q.max_order(&u), Some(2));
}

#[test]
fn printing() {
    assert_eq!(p("3/2 u u' + 1/4 u'''").to_string(), "3/2 u u' + 1/4 u'''");
    assert_eq!(p("-u^(5) + u'^2").to_string(), "u'^2 - u^(5)");
    assert_eq!(DiffPoly::zero().to_string(), "0");
    let reg3 = FieldRegistry::sl3();
    let q = DiffPoly::parse("1/3 u2'' - u3", &reg3).unwrap();
    assert_eq!(q.to_latex(), "\\frac{1}{3} u_{2}^{\\prime\\prime} - u_{3}");
    for src in ["u", "-1/4 u'", "u^(4) u^2 - 7", "u'^3 v''/5"] {
        let q = p(src);
        assert_eq!(DiffPoly::parse(&q.to_string(), &reg()).unwrap(), q);
    }
}

#[test]
fn json_form() {
    let q = p("3/2 u u' - v''");
    let v = q.to_json_value();
    assert_eq!(v[0]["coeff"], "3/2");
    assert_eq!(v[0]["jets"][0]["field"], "u");
    assert_eq!(DiffPoly::from_json_value(&v, &reg()).unwrap(), q);
    let bad = serde_json::json!([{"coeff": "1", "jets": [{"field": "w", "order": 0, "power": 1}]}]);
    assert!(DiffPoly::from_json_value(&bad, &reg()).is_err());
}

#[test]
fn parse_errors() {
    for src in ["", "u +", "(u", "u^(", "1/0", "u''^"] {
        assert!(DiffPoly::parse(src, &reg()).is_err(), "{src}");
    }
}

fn arb_poly() -> impl Strategy<Value = DiffPoly> {
    let jet = (0..2usize, 0..4u32).prop_map(|(f, k)| {
        let field = if f == 0 {
            FieldSymbol::new("u", 2)
        } else {
            FieldSymbol::new("v", 3)
        };
        field.jet(k)
    });
    let monomial = (
        prop::collection::vec((jet, 1..3u32), 0..3),
        -6i64..=6,
        1i64..=4,
    )
        .prop_map(|(factors, n, d)| (PowerProduct::from_factors(factors), rat(n, d)));
    prop::collection::vec(monomial, 0..5).prop_map(DiffPoly::from_terms)
}

fn arb_homogeneous(spin: i32) -> impl Strategy<Value = DiffPoly> {
    // spin-`spin` combinations of u^(a), u^(a) u^(b), v^(c)
    (prop::collection::vec(-3i64..=3, 3), 0..3u32).prop_map(move |(cs, split)| {
        let u = FieldSymbol::new("u", 2);
        let v = FieldSymbol::new("v", 3);
        let mut out = DiffPoly::zero();
        if spin >= 2 {
            out += DiffPoly::jet(u.jet((spin - 2) as u32)).scale(&int(cs[0]));
        }
        if spin >= 3 {
            out += DiffPoly::jet(v.jet((spin - 3) as u32)).scale(&int(cs[1]));
        }
        if spin >= 4 {
            let a = split.min((spin - 4) as u32);
            let b = (spin - 4) as u32 - a;
            out += (&DiffPoly::jet(u.jet(a)) * &DiffPoly::jet(u.jet(b))).scale(&int(cs[2]));
        }
        out
    })
}

proptest! {
    #[test]
    fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn derivation_rule(a in arb_poly(), b in arb_poly()) {
        let lhs = (&a * &b).total_derivative();
        let rhs = &(&a.total_derivative() * &b) + &(&a * &b.total_derivative());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn euler_kernel(a in arb_poly()) {
        let d = a.total_derivative();
        for f in reg().fields() {
            prop_assert!(d.variational_derivative(f).is_zero());
        }
    }

    #[test]
    fn grading(a in arb_homogeneous(4), b in arb_homogeneous(5)) {
        if !a.is_zero() && !b.is_zero() {
            prop_assert_eq!((&a * &b).spin_of(), Spin::Homogeneous(9));
        }
        if !a.is_zero() {
            prop_assert_eq!(a.total_derivative().spin_of(), Spin::Homogeneous(5));
        }
    }

    #[test]
    fn canonical_under_shuffles(a in arb_poly(), seed in any::<u64>()) {
        let mut terms: Vec<_> = a.terms().map(|(k, c)| (k.clone(), c.clone())).collect();
        let n = terms.len();
        if n > 1 {
            terms.rotate_left((seed as usize) % n);
            terms.reverse();
        }
        prop_assert_eq!(DiffPoly::from_terms(terms), a);
    }

    #[test]
    fn text_and_json_round_trip(a in arb_poly()) {
        prop_assert_eq!(DiffPoly::parse(&a.to_string(), &reg()).unwrap(), a.clone());
        prop_assert_eq!(DiffPoly::from_json_value(&a.to_json_value(), &reg()).unwrap(), a);
    }
}
