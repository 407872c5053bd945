//! The worked-example suite behind `qg paper-verify`: every fixture
//! expectation plus the concrete examples for translations, local maps,
//! morphisms, congruences and decompositions.

use serde::Serialize;

use crate::congruences::{
    compose_relations, is_admissible, is_congruence, kernel_congruence, principal_congruence, quotient, Congruence,
    Mode, Partition,
};
use crate::constructors::{
    cyclic, d8_left_f, dihedral8, direct_product, fixture, linear_quasigroup, multiply_by, toyoda_medial, Expectation,
    Side, ToyodaForm, FIXTURE_NAMES,
};
use crate::decomposition::{decompose, simple_classify, ClassSelector};
use crate::identities::{
    classify, group_isotope_form, holds, loop_classify, sushkevich_postulate, Flag, Postulate, PostulateWitness,
};
use crate::morphisms::{
    apply_isotopy, endomorphism_chain, is_endomorphism, isostrophy_apply, isostrophy_compose, isostrophy_invert,
    lp_isotope, map_power, Isostrophy, Isotopy,
};
use crate::perm::{is_bijection, Perm};
use crate::table::{image, is_constant, LocalMapKind, Parastrophy, Quasigroup, TranslationKind};

/// One named pass/fail item.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
        Check { name: name.into(), passed, detail: detail.into() }
    }
}

/// Evaluates one fixture expectation.
pub fn evaluate_expectation(q: &Quasigroup, ex: &Expectation) -> Check {
    match ex {
        Expectation::LocalImage { map, image: want } => {
            let got = image(&q.local_map(*map));
            Check::new(format!("{}-image", map.name()), &got == want, format!("{got:?}"))
        }
        Expectation::LocalPermutation { map, value } => {
            let got = is_bijection(&q.local_map(*map));
            Check::new(format!("{} is a permutation", map.name()), got == *value, got.to_string())
        }
        Expectation::LocalConstant { map, value } => {
            let got = is_constant(&q.local_map(*map));
            Check::new(format!("{} is constant", map.name()), got == *value, got.to_string())
        }
        Expectation::Flag { flag, value } => {
            let got = holds(q, *flag);
            Check::new(flag.name(), got == *value, got.to_string())
        }
        Expectation::Simple { value } => match crate::congruences::is_simple_within(q, q.order().max(12)) {
            Ok(got) => Check::new("simple", got == *value, got.to_string()),
            Err(e) => Check::new("simple", false, e.to_string()),
        },
        Expectation::Group { value } => {
            let got = q.is_group();
            Check::new("group", got == *value, got.to_string())
        }
        Expectation::LeftLinear { value } | Expectation::RightLinear { value } => {
            let left = matches!(ex, Expectation::LeftLinear { .. });
            let name = if left { "leftLinear" } else { "rightLinear" };
            match group_isotope_form(q) {
                Ok(g) => {
                    let got = if left { g.left_linear } else { g.right_linear };
                    Check::new(name, got == *value, got.to_string())
                }
                Err(e) => Check::new(name, false, e.to_string()),
            }
        }
        Expectation::CenterSize { value } => match loop_classify(q) {
            Ok(r) => Check::new("center size", r.center.len() == *value, r.center.len().to_string()),
            Err(e) => Check::new("center size", false, e.to_string()),
        },
    }
}

/// All expectations of every shipped fixture.
pub fn fixture_checks() -> Vec<Check> {
    let mut out = Vec::new();
    for name in FIXTURE_NAMES {
        let fx = fixture(name).expect("listed fixtures exist");
        for ex in &fx.expectations {
            let mut c = evaluate_expectation(&fx.table, ex);
            c.name = format!("{name}: {}", c.name);
            out.push(c);
        }
    }
    out
}

fn affine(n: usize, a: usize, b: usize) -> Quasigroup {
    Quasigroup::from_fn(n, |x, y| (a * x + b * y) % n).expect("unit coefficients")
}

fn partition(n: usize, blocks: &[Vec<usize>]) -> Partition {
    Partition::from_blocks(n, blocks).expect("literal blocks partition the carrier")
}

fn fixture_tables() -> Vec<(&'static str, Quasigroup)> {
    FIXTURE_NAMES.iter().map(|n| (*n, fixture(n).expect("listed fixtures exist").table)).collect()
}

/// Worked examples beyond the fixture expectations.
pub fn example_checks() -> Vec<Check> {
    let mut out = Vec::new();
    let mut push = |name: &str, passed: bool, detail: String| out.push(Check::new(name, passed, detail));

    let d8 = dihedral8();
    push("D8 table is a group with row 2 = 2 6 7 1 0 3 5 4", d8.is_group() && d8.row(2) == [2, 6, 7, 1, 0, 3, 5, 4], format!("{:?}", d8.row(2)));
    let z9 = cyclic(9);
    push("cyclic(9) is addition mod 9", z9.elements().all(|x| z9.elements().all(|y| z9.mul(x, y) == (x + y) % 9)), String::new());

    let fixtures = fixture_tables();
    let r23 = fixtures.iter().all(|(_, q)| {
        let p = q.parastrophe(Parastrophy::T23);
        q.elements().all(|a| p.translation(TranslationKind::R, a) == q.translation(TranslationKind::P, a))
    });
    push("R in the (23)-parastrophe equals P, on every fixture", r23, String::new());
    let s_cycles = fixtures.iter().all(|(_, q)| {
        q.parastrophe(Parastrophy::C132).local_map(LocalMapKind::S) == q.local_map(LocalMapKind::E)
            && q.parastrophe(Parastrophy::C123).local_map(LocalMapKind::S) == q.local_map(LocalMapKind::F)
    });
    push("s in the (132)-parastrophe is e and in the (123)-parastrophe is f, on every fixture", s_cycles, String::new());

    let z9q = affine(9, 1, 4);
    push("(12)-parastrophe of (Z9, x+4y) is right F", holds(&z9q.parastrophe(Parastrophy::T12), Flag::RightF), String::new());
    push("(23)-parastrophe of the Z3 group is left SM", holds(&cyclic(3).parastrophe(Parastrophy::T23), Flag::LeftSM), String::new());
    let r = classify(&z9q);
    push("(Z9, x+4y) is medial and left F", r.medial && r.left_f, String::new());

    let z4 = affine(4, 1, 3);
    let (e, s, f) = (z4.local_map(LocalMapKind::E), z4.local_map(LocalMapKind::S), z4.local_map(LocalMapKind::F));
    push(
        "(Z4, x+3y): e = s = 0, f(x) = 2x",
        e == vec![0; 4] && s == vec![0; 4] && f == vec![0, 2, 0, 2] && image(&f) == vec![0, 2],
        format!("e={e:?} s={s:?} f={f:?}"),
    );
    let l0_inv = z4.translation(TranslationKind::LInv, 0);
    let post_b = matches!(sushkevich_postulate(&z4, Postulate::B), Some(PostulateWitness::Map(ref d)) if *d == l0_inv);
    push("(Z4, x+3y) satisfies postulate B with delta = L_0^-1", post_b, String::new());

    let left_m = [d8_left_f(0), z9q.clone()].iter().all(|q| {
        [(0, 0), (1, 2), (3, 1)].iter().all(|&(a, b)| loop_classify(&lp_isotope(q, a, b)).map(|r| r.left_m).unwrap_or(false))
    });
    push("LP-isotopes of left F-quasigroups are left M-loops", left_m, String::new());

    match group_isotope_form(&z9q) {
        Ok(g) => push(
            "(Z9, x+4y) = x + 4y over Z9, right linear",
            g.group == z9 && g.alpha.is_identity() && g.beta == multiply_by(9, 4).expect("unit") && g.right_linear,
            String::new(),
        ),
        Err(e) => push("(Z9, x+4y) = x + 4y over Z9, right linear", false, e.to_string()),
    }
    match group_isotope_form(&d8_left_f(0)) {
        Ok(g) => push("D8 left F-quasigroup is right linear, not left linear", g.right_linear && !g.left_linear, String::new()),
        Err(e) => push("D8 left F-quasigroup is right linear, not left linear", false, e.to_string()),
    }

    let times4 = multiply_by(9, 4).expect("unit");
    let iso = apply_isotopy(&z9, &Isotopy::new(Perm::identity(9), times4.clone(), Perm::identity(9)));
    push("Z9 under (e, x4, e) is (Z9, x+4y)", iso == z9q, String::new());
    let toyoda = toyoda_medial(&ToyodaForm { group: z9.clone(), phi: Perm::identity(9), psi: times4, c: 0 });
    push("Toyoda form over Z9 with (e, x4, 0) is (Z9, x+4y)", toyoda.map(|t| t == z9q).unwrap_or(false), String::new());
    push("LP-isotope of a group isotope is a group", lp_isotope(&affine(7, 2, 3), 3, 5).is_group(), String::new());

    let z6 = cyclic(6);
    let neg = Perm::new((0..6).map(|x| (6 - x) % 6).collect()).expect("negation is a bijection");
    let s23 = Isostrophy { sigma: Parastrophy::T23, isotopy: Isotopy::new(neg, Perm::identity(6), Perm::identity(6)) };
    push("((23), (I, e, e)) fixes the Z6 group", isostrophy_apply(&z6, &s23) == z6, String::new());
    let s_iso = Isotopy::new(multiply_by(5, 2).expect("unit"), multiply_by(5, 3).expect("unit"), Perm::parse(5, "(1 4)").expect("valid"));
    let conjugation = Parastrophy::ALL.iter().all(|&tau| {
        isostrophy_compose(
            &Isostrophy { sigma: Parastrophy::Id, isotopy: s_iso.clone() },
            &Isostrophy { sigma: tau, isotopy: Isotopy::identity(5) },
        ) == Isostrophy { sigma: tau, isotopy: s_iso.permuted(tau) }
    });
    push("(e, S)(t, e) = (t, S^t)", conjugation, String::new());
    let s = Isostrophy { sigma: Parastrophy::C123, isotopy: s_iso.clone() };
    let inv = isostrophy_invert(&s);
    push(
        "inverse of ((123), T) has selector (132) and composes to the identity",
        inv.sigma == Parastrophy::C132 && isostrophy_compose(&s, &inv) == Isostrophy::identity(5),
        String::new(),
    );

    let e_d8 = [0, 3, 3, 0, 3, 3, 0, 0];
    push(
        "D8 map (0,3,3,0,3,3,0,0) is an endomorphism with constant square",
        is_endomorphism(&d8, &e_d8) && map_power(&e_d8, 2) == vec![0; 8],
        String::new(),
    );
    let left_f_e = fixtures
        .iter()
        .filter(|(_, q)| holds(q, Flag::LeftF))
        .all(|(_, q)| is_endomorphism(q, &q.local_map(LocalMapKind::E)));
    push("e is an endomorphism of every left F fixture", left_f_e, String::new());

    let chain_z6 = endomorphism_chain(&affine(6, 1, 5), LocalMapKind::F);
    push(
        "(Z6, x-y): f-chain Z6 > {0,2,4}, m = 1",
        chain_z6.map(|c| c.stabilization_index == 1 && c.images[1] == vec![0, 2, 4]).unwrap_or(false),
        String::new(),
    );
    let chain_z4 = endomorphism_chain(&z4, LocalMapKind::E);
    push(
        "(Z4, x+3y): e-chain Z4 > {0}, m = 1",
        chain_z4.map(|c| c.stabilization_index == 1 && c.images[1] == vec![0]).unwrap_or(false),
        String::new(),
    );
    let chain_z3 = endomorphism_chain(&affine(3, 1, 2), LocalMapKind::F);
    push("(Z3, x-y): f-chain has m = 0", chain_z3.map(|c| c.stabilization_index == 0).unwrap_or(false), String::new());

    let zc4 = cyclic(4);
    let halves = partition(4, &[vec![0, 2], vec![1, 3]]);
    push(
        "Z4: {0,2},{1,3} is a congruence and normal",
        is_congruence(&zc4, &halves, Mode::Plain) && is_congruence(&zc4, &halves, Mode::Normal),
        String::new(),
    );
    push("Z4: principal congruence of (0,2) is {0,2},{1,3}", principal_congruence(&zc4, 0, 2).partition == halves, String::new());
    push(
        "Z4: kernel of x+x is {0,2},{1,3}",
        kernel_congruence(&zc4, &[0, 2, 0, 2]).map(|k| k.partition == halves).unwrap_or(false),
        String::new(),
    );
    let theta = Congruence::certify(&zc4, halves.clone()).expect("coset partition is a congruence");
    push("Z4 modulo {0,2},{1,3} is Z2", quotient(&zc4, &theta).quotient == cyclic(2), String::new());
    push(
        "(Z7, 2x+3y) is simple",
        crate::congruences::is_simple(&affine(7, 2, 3)).unwrap_or(false),
        String::new(),
    );
    push("Z4: {0,2},{1,3} is admissible for L_1", is_admissible(&halves, &zc4.translation(TranslationKind::L, 1)), String::new());
    let normal: Vec<Partition> = crate::congruences::all_congruences(&zc4)
        .map(|cs| cs.into_iter().filter(|c| c.normal).map(|c| c.partition).collect())
        .unwrap_or_default();
    let commute = normal.iter().all(|a| normal.iter().all(|b| compose_relations(a, b) == compose_relations(b, a)));
    push("normal congruences of Z4 commute", commute && normal.len() == 3, String::new());

    match decompose(&z4, ClassSelector::LeftF) {
        Ok(d) => push(
            "(Z4, x+3y) as left F: B trivial, A = Q, idempotent 0",
            d.b.order() == 1 && d.a == z4 && d.a_idempotent == 0,
            String::new(),
        ),
        Err(e) => push("(Z4, x+3y) as left F: B trivial, A = Q, idempotent 0", false, e.to_string()),
    }
    let z3m = affine(3, 1, 2);
    match decompose(&z3m, ClassSelector::SM) {
        Ok(d) => push("(Z3, x-y) as SM: B trivial, A unipotent", d.b.order() == 1 && holds(&d.a, Flag::Unipotent), String::new()),
        Err(e) => push("(Z3, x-y) as SM: B trivial, A unipotent", false, e.to_string()),
    }
    match simple_classify(&affine(7, 2, 3), ClassSelector::F) {
        Ok(c) => push(
            "(Z7, 2x+3y) as simple F: x o 4y over (Z7, 2x+6y)",
            c.case_tag == "iv" && c.base == affine(7, 2, 6) && c.psi == multiply_by(7, 4).ok(),
            c.case_tag.to_string(),
        ),
        Err(e) => push("(Z7, 2x+3y) as simple F: x o 4y over (Z7, 2x+6y)", false, e.to_string()),
    }
    let (ga, gb) = (cyclic(3), affine(3, 2, 2));
    push(
        "(12)-parastrophe commutes with the order-9 product",
        direct_product(&ga, &gb).parastrophe(Parastrophy::T12)
            == direct_product(&ga.parastrophe(Parastrophy::T12), &gb.parastrophe(Parastrophy::T12)),
        String::new(),
    );

    let alpha = Perm::parse(8, "(1 2)(4 5)").expect("valid cycles");
    let lin = linear_quasigroup(&d8, Side::Right, &Perm::identity(8), &alpha, 0);
    push(
        "D8 right-linear builder with other part alpha is the left F fixture",
        lin.as_ref().map(|q| *q == d8_left_f(0) && holds(q, Flag::LeftF)).unwrap_or(false),
        String::new(),
    );
    let lin4 = linear_quasigroup(&zc4, Side::Right, &multiply_by(4, 3).expect("unit"), &Perm::identity(4), 0);
    push("Z4 right-linear builder with x3 gives (Z4, x+3y)", lin4.map(|q| q == z4).unwrap_or(false), String::new());
    out
}

/// Fixture expectations followed by the worked examples.
pub fn all_checks() -> Vec<Check> {
    let mut v = fixture_checks();
    v.extend(example_checks());
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_check_passes() {
        let checks = all_checks();
        let failed: Vec<&Check> = checks.iter().filter(|c| !c.passed).collect();
        assert!(failed.is_empty(), "{failed:#?}");
        assert!(checks.len() > 60);
    }

    #[test]
    fn a_wrong_expectation_fails() {
        let c = evaluate_expectation(&cyclic(4), &Expectation::Group { value: false });
        assert!(!c.passed);
    }
}
