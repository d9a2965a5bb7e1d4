use std::sync::Arc;

use proptest::prelude::*;
use qhom_core::complex::boundary;
use qhom_core::snf::{smith_normal_form, IntReduction};
use qhom_core::{Chain, FiniteRack, GroupSummary, HomologyEngine, RackComplex, SparseIntMatrix, Theory};

fn small_rack() -> impl Strategy<Value = FiniteRack> {
    prop_oneof![
        (1usize..6).prop_map(|k| FiniteRack::dihedral(k).unwrap()),
        (1usize..4).prop_map(|k| FiniteRack::trivial(k).unwrap()),
        (2usize..8, 1i64..8).prop_filter_map("t must be a unit", |(m, t)| FiniteRack::alexander(m, t).ok()),
    ]
}

fn chain_on(rack: &FiniteRack, degree: usize, theory: Theory, terms: &[(Vec<usize>, i64)]) -> Chain {
    let k = rack.size();
    let mut c = Chain::zero(k, degree, theory);
    for (t, coeff) in terms {
        let tuple: Vec<usize> = t.iter().map(|x| x % k).collect();
        c += &Chain::from_terms(k, degree, Theory::Rack, [(tuple.as_slice(), *coeff)]).project(theory);
    }
    c
}

fn terms(degree: usize) -> impl Strategy<Value = Vec<(Vec<usize>, i64)>> {
    prop::collection::vec((prop::collection::vec(0usize..16, degree), -4i64..5), 0..8)
}

fn theory() -> impl Strategy<Value = Theory> {
    prop_oneof![Just(Theory::Rack), Just(Theory::Quandle)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn operation_is_self_distributive(rack in small_rack()) {
        let k = rack.size();
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    prop_assert_eq!(rack.op(rack.op(a, b), c), rack.op(rack.op(a, c), rack.op(b, c)));
                }
            }
        }
    }

    #[test]
    fn boundary_squares_to_zero((rack, t, th) in small_rack().prop_flat_map(|r| (Just(r), terms(4), theory()))) {
        prop_assume!(th == Theory::Rack || rack.is_quandle());
        let c = chain_on(&rack, 4, th, &t);
        let dc = boundary(&rack, &c).unwrap();
        prop_assert!(boundary(&rack, &dc).unwrap().is_zero());
    }

    #[test]
    fn chain_literals_round_trip((rack, t) in small_rack().prop_flat_map(|r| (Just(r), terms(3)))) {
        let c = chain_on(&rack, 3, Theory::Rack, &t);
        let text = c.to_string();
        let back = Chain::parse(&text, rack.size(), Theory::Rack, Some(3)).unwrap();
        prop_assert_eq!(back.to_string(), text);
    }

    #[test]
    fn smith_form_is_verified(rows in 1usize..6, cols in 1usize..6, seed in prop::collection::vec(-6i64..7, 36)) {
        let a = SparseIntMatrix::from_triplets(
            rows,
            cols,
            (0..rows).flat_map(|r| (0..cols).map(move |c| (r, c))).map(|(r, c)| (r, c, seed[r * 6 + c].into())),
        );
        let s = smith_normal_form(&a);
        prop_assert!(s.verify(&a));
        prop_assert_eq!(IntReduction::new(&a).invariant_factors(), s.d);
    }

    #[test]
    fn group_summary_text_round_trips(free in 0usize..4, orders in prop::collection::vec(2i64..30, 0..4)) {
        let orders: Vec<_> = orders.into_iter().map(Into::into).collect();
        let g = GroupSummary::from_cyclic(free, &orders);
        let back: GroupSummary = g.to_string().parse().unwrap();
        prop_assert_eq!(back, g);
    }
}

fn engine(rack: FiniteRack, theory: Theory) -> HomologyEngine<RackComplex> {
    HomologyEngine::new(Arc::new(RackComplex::new(Arc::new(rack), theory).unwrap()))
}

#[test]
fn trivial_rack_homology_is_free() {
    for k in 1..=3usize {
        let e = engine(FiniteRack::trivial(k).unwrap(), Theory::Rack);
        for n in 1..=4usize {
            assert_eq!(e.summary(n), GroupSummary::free(k.pow(n as u32)), "k={k} n={n}");
        }
    }
}

#[test]
fn boundaries_have_trivial_class() {
    let rack = FiniteRack::dihedral(3).unwrap();
    let e = engine(rack.clone(), Theory::Quandle);
    for tuple in [[0, 1, 2, 0], [1, 0, 1, 2], [2, 1, 0, 1]] {
        let c = Chain::from_tuple(3, Theory::Quandle, &tuple);
        let z = boundary(&rack, &c).unwrap();
        assert!(e.is_boundary(&z).unwrap());
        assert!(e.class_coordinates(&z).unwrap().iter().all(|x| x.is_zero()));
    }
}

#[test]
fn universal_coefficients_agree_with_direct_computation() {
    for (k, th) in [(3, Theory::Rack), (3, Theory::Quandle), (5, Theory::Quandle)] {
        let e = engine(FiniteRack::dihedral(k).unwrap(), th);
        for n in 1..=4usize {
            for p in [2u64, 3, 5] {
                let direct = e.homology_mod(n, p).unwrap();
                assert_eq!(direct, e.uct_mod(n, p), "R_{k} {th} n={n} p={p}");
                assert_eq!(direct, e.homology_mod_via_cone(n, p), "R_{k} {th} n={n} p={p}");
            }
        }
    }
}
