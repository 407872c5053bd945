use proptest::prelude::*;
use quasigroup::congruences::{
    all_congruences, generated_congruence, is_congruence, join, kernel_congruence, principal_congruence, quotient, Mode,
};
use quasigroup::constructors::random_quasigroup;
use quasigroup::identities::{classify, holds, Flag};
use quasigroup::morphisms::{
    apply_isotopy, isostrophy_apply, isostrophy_compose, isostrophy_invert, lp_isotope, Isostrophy, Isotopy,
};
use quasigroup::perm::Perm;
use quasigroup::table::{Parastrophy, Quasigroup, TranslationKind};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn table(order: usize, seed: u64) -> Quasigroup {
    random_quasigroup(order, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn perm(n: usize, rng: &mut ChaCha8Rng) -> Perm {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    Perm::new(v).unwrap()
}

fn isotopy(n: usize, rng: &mut ChaCha8Rng) -> Isotopy {
    Isotopy::new(perm(n, rng), perm(n, rng), perm(n, rng))
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `(Z_n, ax + by + c)` with unit coefficients: always medial.
fn affine_strategy() -> impl Strategy<Value = Quasigroup> {
    (1usize..10, 0usize..10, 0usize..10, 0usize..10).prop_filter_map("unit coefficients", |(n, a, b, c)| {
        let (a, b) = (a % n, b % n);
        (gcd(a, n) == 1 && gcd(b, n) == 1).then(|| Quasigroup::from_fn(n, |x, y| (a * x + b * y + c) % n).unwrap())
    })
}

fn parastrophy() -> impl Strategy<Value = Parastrophy> {
    (0usize..6).prop_map(|i| Parastrophy::ALL[i])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parastrophes_compose(order in 1usize..8, seed: u64, s in parastrophy(), t in parastrophy()) {
        let q = table(order, seed);
        prop_assert_eq!(q.parastrophe(s).parastrophe(t), q.parastrophe(s.compose(t)));
        prop_assert_eq!(q.parastrophe(s).parastrophe(s.inverse()), q);
    }

    #[test]
    fn translations_invert(order in 1usize..8, seed: u64) {
        let q = table(order, seed);
        for kind in TranslationKind::ALL {
            for a in q.elements() {
                prop_assert!(q.translation(kind, a).compose(&q.translation(kind.inverse(), a)).is_identity());
            }
        }
    }

    #[test]
    fn isotopy_commutes_with_parastrophy(order in 1usize..7, seed: u64, s in parastrophy()) {
        let q = table(order, seed);
        let t = isotopy(order, &mut ChaCha8Rng::seed_from_u64(seed ^ 1));
        prop_assert_eq!(apply_isotopy(&q, &t).parastrophe(s), apply_isotopy(&q.parastrophe(s), &t.permuted(s)));
    }

    #[test]
    fn isostrophies_compose_and_invert(order in 1usize..7, seed: u64, s in parastrophy(), t in parastrophy()) {
        let q = table(order, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 2);
        let a = Isostrophy { sigma: s, isotopy: isotopy(order, &mut rng) };
        let b = Isostrophy { sigma: t, isotopy: isotopy(order, &mut rng) };
        let ab = isostrophy_compose(&a, &b);
        prop_assert_eq!(isostrophy_apply(&isostrophy_apply(&q, &a), &b), isostrophy_apply(&q, &ab));
        let inv = isostrophy_invert(&a);
        prop_assert_eq!(isostrophy_apply(&isostrophy_apply(&q, &a), &inv), q);
        prop_assert_eq!(isostrophy_compose(&a, &inv), Isostrophy::identity(order));
    }

    #[test]
    fn lp_isotopes_are_loops(order in 1usize..8, seed: u64, a in 0usize..8, b in 0usize..8) {
        let q = table(order, seed);
        let (a, b) = (a % order, b % order);
        let l = lp_isotope(&q, a, b);
        prop_assert_eq!(l.identity_element(), Some(q.mul(b, a)));
    }

    #[test]
    fn congruence_constructions_are_congruences(order in 1usize..7, seed: u64, x in 0usize..7, y in 0usize..7) {
        let q = table(order, seed);
        let (x, y) = (x % order, y % order);
        let p = principal_congruence(&q, x, y);
        prop_assert!(p.partition.related(x, y));
        prop_assert!(is_congruence(&q, &p.partition, Mode::Plain));
        prop_assert!(is_congruence(&q, &p.partition, Mode::Normal));
        let all = all_congruences(&q).unwrap();
        for a in &all {
            for b in &all {
                let j = join(&q, &a.partition, &b.partition);
                prop_assert!(all.contains(&j));
                for (u, v) in a.partition.as_relation().pairs().into_iter().chain(b.partition.as_relation().pairs()) {
                    prop_assert!(j.partition.related(u, v));
                }
                prop_assert!(is_congruence(&q, &a.partition.meet(&b.partition), Mode::Plain));
            }
            let gens: Vec<(usize, usize)> = a.partition.as_relation().pairs().into_iter().collect();
            prop_assert_eq!(&generated_congruence(&q, &gens), a);
            let quo = quotient(&q, a);
            let natural: Vec<usize> = q.elements().map(|e| a.partition.block_of(e)).collect();
            prop_assert!(q.elements().all(|u| q.elements().all(|v| natural[q.mul(u, v)] == quo.quotient.mul(natural[u], natural[v]))));
        }
    }

    #[test]
    fn kernels_of_affine_endomorphisms(n in 1usize..13, k in 0usize..13) {
        let z = Quasigroup::from_fn(n, |x, y| (x + y) % n).unwrap();
        let h: Vec<usize> = (0..n).map(|x| (k * x) % n).collect();
        let ker = kernel_congruence(&z, &h).unwrap();
        prop_assert!(z.elements().all(|x| z.elements().all(|y| ker.partition.related(x, y) == (h[x] == h[y]))));
        prop_assert_eq!(quotient(&z, &ker).quotient.order(), { let mut im = h.clone(); im.sort(); im.dedup(); im.len() });
    }

    #[test]
    fn class_implications(q in affine_strategy()) {
        let r = classify(&q);
        prop_assert!(r.medial);
        prop_assert!(r.left_f && r.right_f && r.left_sm && r.right_sm && r.left_e && r.right_e);
        if r.left_distributive {
            prop_assert!(r.idempotent && r.left_f && r.left_sm && r.left_e);
        }
        prop_assert_eq!(r.true_flags().contains(&Flag::Commutative), holds(&q, Flag::Commutative));
    }

    #[test]
    fn classes_are_parastrophe_invariant_up_to_mirroring(order in 1usize..7, seed: u64) {
        let q = table(order, seed);
        let m = q.parastrophe(Parastrophy::T12);
        for (l, r) in [(Flag::LeftF, Flag::RightF), (Flag::LeftSM, Flag::RightSM), (Flag::LeftE, Flag::RightE), (Flag::LeftDistributive, Flag::RightDistributive)] {
            prop_assert_eq!(holds(&q, l), holds(&m, r));
        }
        prop_assert_eq!(holds(&q, Flag::Medial), holds(&m, Flag::Medial));
    }
}
