//! Exhaustive small-order checks of the structure results.

use quasigroup::constructors::{cyclic, direct_product};
use quasigroup::decomposition::{decompose, verify_cml_structure, ClassSelector};
use quasigroup::identities::{holds, loop_classify, Flag};
use quasigroup::search::{enumerate_all, search_with, ConstraintSet, SearchMode, SearchOptions};
use quasigroup::table::Quasigroup;

fn loops(n: usize) -> Vec<Quasigroup> {
    let opts = SearchOptions { max_order: Some(6), ..SearchOptions::default() };
    search_with(n, &ConstraintSet::none().with_loop_identity_zero(), SearchMode::Enumerate(usize::MAX), &opts)
        .unwrap()
        .tables()
}

#[test]
fn loop_counts_with_identity_zero() {
    let counts: Vec<usize> = (1..=6).map(|n| loops(n).len()).collect();
    // Normalized loops: reduced Latin squares of orders 1 to 6.
    assert_eq!(counts, vec![1, 1, 1, 4, 56, 9408]);
}

#[test]
fn left_sm_loops_are_exactly_the_cmls() {
    for n in 1..=6 {
        for q in loops(n) {
            let r = loop_classify(&q).unwrap();
            assert_eq!(holds(&q, Flag::LeftSM), r.cml, "{:?}", q.rows());
            if r.cml {
                let c = verify_cml_structure(&q).unwrap();
                assert!(c.a_abelian_group && c.center_splits && c.quotient_exponent_three);
                assert!(c.s_is_negation && c.steiner_distributive);
            }
        }
    }
}

#[test]
fn left_f_loops_are_groups() {
    for n in 1..=6 {
        for q in loops(n) {
            if holds(&q, Flag::LeftF) {
                assert!(q.is_associative(), "{:?}", q.rows());
            }
        }
    }
}

#[test]
fn medial_implies_every_one_sided_class_at_order_four() {
    for q in enumerate_all(4, &ConstraintSet::require(&[Flag::Medial])).unwrap() {
        for f in [Flag::LeftF, Flag::RightF, Flag::LeftSM, Flag::RightSM, Flag::LeftE, Flag::RightE] {
            assert!(holds(&q, f));
        }
    }
}

#[test]
fn products_decompose_in_every_class() {
    let distributive = Quasigroup::from_fn(3, |x, y| (2 * x + 2 * y) % 3).unwrap();
    let z4 = Quasigroup::from_fn(4, |x, y| (x + 3 * y) % 4).unwrap();
    for q in [direct_product(&cyclic(3), &distributive), direct_product(&z4, &distributive)] {
        for c in ClassSelector::ALL {
            if c == ClassSelector::CML {
                continue;
            }
            let d = decompose(&q, c).unwrap();
            assert!(d.round_trip_exact(&q), "{c}");
            assert_eq!(d.a.order() * d.b.order(), q.order());
        }
    }
}

#[test]
fn z3_squared_is_its_own_center() {
    let z3 = cyclic(3);
    let g = direct_product(&z3, &z3);
    let c = verify_cml_structure(&g).unwrap();
    assert_eq!(c.center.len(), 9);
    assert!(c.steiner_distributive);
}
