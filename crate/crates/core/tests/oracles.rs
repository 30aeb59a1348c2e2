use pdo_core::diffpoly::{int, rat};
use pdo_core::hierarchy::{
    conserved_density, flow_derivative, hamiltonian_flow_first, lax_flow_auto, HamiltonianDensity,
};
use pdo_core::roots::root_of_monic;
use pdo_core::structure::{sample_operator, RandomOperatorSpec};
use pdo_core::{report, DiffPoly, DiscrepancyReport, FieldRegistry, LaxOperator, PsiDO};
use proptest::prelude::*;

fn sl2(src: &str) -> DiffPoly {
    DiffPoly::parse(src, &FieldRegistry::sl2()).unwrap()
}

#[test]
fn commuting_kdv_flows() {
    let lax = LaxOperator::sl2();
    let flows: Vec<_> = [1, 3, 5]
        .iter()
        .map(|&k| lax_flow_auto(&lax, k).unwrap())
        .collect();
    for a in &flows {
        for b in &flows {
            let ab = flow_derivative(a.rhs("u").unwrap(), b).unwrap();
            let ba = flow_derivative(b.rhs("u").unwrap(), a).unwrap();
            assert_eq!(ab, ba, "t{} vs t{}", a.time(), b.time());
        }
    }
}

#[test]
fn commuting_boussinesq_flows() {
    let lax = LaxOperator::sl3();
    let t1 = lax_flow_auto(&lax, 1).unwrap();
    let t2 = lax_flow_auto(&lax, 2).unwrap();
    let t4 = lax_flow_auto(&lax, 4).unwrap();
    for field in ["u2", "u3"] {
        for (a, b) in [(&t1, &t2), (&t2, &t4), (&t1, &t4)] {
            let ab = flow_derivative(a.rhs(field).unwrap(), b).unwrap();
            let ba = flow_derivative(b.rhs(field).unwrap(), a).unwrap();
            assert_eq!(ab, ba, "{field}: t{} vs t{}", a.time(), b.time());
        }
    }
}

#[test]
fn residues_are_conserved() {
    let lax = LaxOperator::sl2();
    let t3 = lax_flow_auto(&lax, 3).unwrap();
    let t5 = lax_flow_auto(&lax, 5).unwrap();
    for m in [1, 3, 5, 7] {
        let h = conserved_density(&lax, m, m as usize).unwrap();
        assert!(!h.is_zero());
        for flow in [&t3, &t5] {
            let dh = flow_derivative(&h, flow).unwrap();
            assert!(
                dh.equals_mod_total_derivative(&DiffPoly::zero()).unwrap(),
                "m={m}"
            );
        }
    }
}

#[test]
fn boussinesq_residues_are_conserved() {
    let lax = LaxOperator::sl3();
    let t2 = lax_flow_auto(&lax, 2).unwrap();
    for m in [1, 2, 4, 5] {
        let h = conserved_density(&lax, m, m as usize).unwrap();
        let dh = flow_derivative(&h, &t2).unwrap();
        assert!(
            dh.equals_mod_total_derivative(&DiffPoly::zero()).unwrap(),
            "m={m}"
        );
    }
}

#[test]
fn hamiltonian_flow_matches_t3_up_to_rescaling() {
    // u -> u/6, t -> t/4 carries 1/4 u''' + 3/2 u u' into u''' + u u'
    let h = hamiltonian_flow_first(&HamiltonianDensity::kdv_h3());
    let t3 = lax_flow_auto(&LaxOperator::sl2(), 3).unwrap();
    let rhs = t3.rhs("u").unwrap();
    let support = |p: &DiffPoly| p.terms().map(|(k, _)| k.clone()).collect::<Vec<_>>();
    assert_eq!(support(rhs), support(&h));
    let u = FieldRegistry::sl2().field("u").unwrap();
    let lambda = rat(1, 6);
    let rescaled = rhs
        .substitute(&u, &u.poly().scale(&lambda))
        .scale(&(int(4) / &lambda));
    assert_eq!(rescaled, h);
}

#[test]
fn kdv_equation_shape() {
    let t3 = lax_flow_auto(&LaxOperator::sl2(), 3).unwrap();
    assert_eq!(t3.rhs("u").unwrap(), &sl2("1/4 u''' + 3/2 u u'"));
}

#[test]
fn sampling_is_deterministic() {
    let spec = RandomOperatorSpec::new(2, -1, 2).unwrap();
    assert_eq!(sample_operator(&spec, 11), sample_operator(&spec, 11));
    assert_ne!(sample_operator(&spec, 11), sample_operator(&spec, 12));
}

#[test]
fn report_round_trips_through_json() {
    let r = report::verify_all();
    let back = DiscrepancyReport::from_json_str(&r.to_json_pretty()).unwrap();
    assert_eq!(back, r);
    let s = r.summary();
    assert_eq!(s.entries, s.matching + s.mismatching);
    assert!(s.terms_matching <= s.terms_total);
    assert!(s.oracles_passed);
    assert!(!r.oracles.is_empty());
    assert!(r
        .entries
        .iter()
        .all(|e| e.is_match() == e.term_diffs.is_empty()));
}

#[test]
fn report_is_deterministic() {
    assert_eq!(
        report::verify_flow_tables().to_json_pretty(),
        report::verify_flow_tables().to_json_pretty()
    );
}

fn arb_potential() -> impl Strategy<Value = DiffPoly> {
    prop::collection::vec(-4i64..=4, 4).prop_map(|c| {
        let terms = ["u", "u''", "u^2", "u'"];
        c.iter().zip(terms).fold(DiffPoly::zero(), |acc, (&k, t)| {
            &acc + &sl2(t).scale(&int(k))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn square_root_recomposes(f in arb_potential(), depth in 2usize..6) {
        let op = &PsiDO::d(2) + &PsiDO::constant(f);
        let root = root_of_monic(&op, 2, depth).unwrap();
        let sq = root.power(2);
        prop_assert!(sq.agrees_above(&op, sq.floor().unwrap()));
        prop_assert_eq!(sq.floor().unwrap(), root.power_floor(2));
    }

    #[test]
    fn cube_root_recomposes(f in arb_potential(), g in arb_potential(), depth in 2usize..5) {
        let op = PsiDO::from_terms([(3, DiffPoly::one()), (1, f), (0, g)], None);
        let root = root_of_monic(&op, 3, depth).unwrap();
        let cube = root.power(3);
        prop_assert!(cube.agrees_above(&op, cube.floor().unwrap()));
    }
}
