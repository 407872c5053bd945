//! Acceptance suite: one line per criterion, non-zero exit on any failure.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use quasigroup::congruences::{all_congruences, all_partitions, compose_relations, is_congruence, Mode, Partition};
use quasigroup::constructors::{cyclic, d8_left_f, dihedral8, direct_product, fixture, random_quasigroup, FIXTURE_NAMES};
use quasigroup::decomposition::{decompose, loop_isotope_structure, simple_classify, ClassSelector};
use quasigroup::identities::{holds, loop_classify, Flag};
use quasigroup::morphisms::{automorphisms, autotopisms, endomorphism_chain, is_endomorphism};
use quasigroup::perm::is_bijection;
use quasigroup::search::{enumerate_all, search_with, ConstraintSet, SearchMode, SearchOptions};
use quasigroup::table::{LocalMapKind, Parastrophy, Quasigroup, TranslationKind};
use quasigroup::verify::all_checks;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;

fn affine(n: usize, a: usize, b: usize) -> Quasigroup {
    Quasigroup::from_fn(n, |x, y| (a * x + b * y) % n).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, started: Instant) -> Result<(), String> {
    let t = started.elapsed();
    ensure(t < limit, || format!("took {t:?}, limit {limit:?}"))
}

const ONE_SIDED: [ClassSelector; 6] = [
    ClassSelector::LeftF,
    ClassSelector::RightF,
    ClassSelector::LeftSM,
    ClassSelector::RightSM,
    ClassSelector::LeftE,
    ClassSelector::RightE,
];

fn class_flag(c: ClassSelector) -> Flag {
    match c {
        ClassSelector::LeftF => Flag::LeftF,
        ClassSelector::RightF => Flag::RightF,
        ClassSelector::LeftSM => Flag::LeftSM,
        ClassSelector::RightSM => Flag::RightSM,
        ClassSelector::LeftE => Flag::LeftE,
        ClassSelector::RightE => Flag::RightE,
        other => panic!("{other} is not one-sided"),
    }
}

fn is_left(c: ClassSelector) -> bool {
    matches!(c, ClassSelector::LeftF | ClassSelector::LeftSM | ClassSelector::LeftE)
}

/// Every member of each one-sided class at orders 1 to 6, searched once.
struct Corpus {
    by_class: Vec<(ClassSelector, Vec<Quasigroup>)>,
    search_time: Duration,
}

impl Corpus {
    fn build() -> Corpus {
        let started = Instant::now();
        let opts = SearchOptions { max_order: Some(6), ..SearchOptions::default() };
        let by_class = ONE_SIDED
            .iter()
            .map(|&c| {
                let cs = ConstraintSet::require(&[class_flag(c)]);
                let tables = (1..=6)
                    .flat_map(|n| search_with(n, &cs, SearchMode::Enumerate(usize::MAX), &opts).unwrap().tables())
                    .collect();
                (c, tables)
            })
            .collect();
        Corpus { by_class, search_time: started.elapsed() }
    }

    fn of(&self, c: ClassSelector) -> &[Quasigroup] {
        &self.by_class.iter().find(|(k, _)| *k == c).unwrap().1
    }
}

fn criterion_1() -> Verdict {
    let started = Instant::now();
    let checks = all_checks();
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    ensure(failed.is_empty(), || format!("failed: {failed:?}"))?;
    within(Duration::from_secs(1), started)?;
    Ok(format!("{} worked-example checks", checks.len()))
}

// Kind computed in the σ-parastrophe, by column ε, (12), (13), (23), (123), (132),
// equals the listed kind computed in Q.
const TRANSLATION_TABLE: [(TranslationKind, [TranslationKind; 6]); 6] = {
    use TranslationKind::*;
    [
        (R, [R, L, RInv, P, PInv, LInv]),
        (L, [L, R, PInv, LInv, RInv, P]),
        (P, [P, PInv, LInv, R, L, RInv]),
        (RInv, [RInv, LInv, R, PInv, P, L]),
        (LInv, [LInv, RInv, P, L, R, PInv]),
        (PInv, [PInv, P, L, RInv, LInv, R]),
    ]
};

// Same layout for the local maps. The 3-cycle columns are the ones implied by
// the parastrophe definition (equivalently by the translation table above):
// for example s in the (123)-parastrophe is x ↦ z with z·x = x, which is f.
const LOCAL_MAP_TABLE: [(LocalMapKind, [LocalMapKind; 6]); 3] = {
    use LocalMapKind::*;
    [(F, [F, E, S, F, E, S]), (E, [E, F, E, S, S, F]), (S, [S, S, F, E, F, E])]
};

const COLUMNS: [Parastrophy; 6] = [
    Parastrophy::Id,
    Parastrophy::T12,
    Parastrophy::T13,
    Parastrophy::T23,
    Parastrophy::C123,
    Parastrophy::C132,
];

fn criterion_2() -> Verdict {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let mut cells = 0usize;
    for i in 0..100 {
        let n = 2 + i % 7;
        let q = random_quasigroup(n, &mut rng);
        for (col, &sigma) in COLUMNS.iter().enumerate() {
            let p = q.parastrophe(sigma);
            for (kind, row) in TRANSLATION_TABLE {
                for a in q.elements() {
                    ensure(p.translation(kind, a) == q.translation(row[col], a), || {
                        format!("translation {kind:?} in {} differs from {:?} (order {n}, a = {a})", sigma.name(), row[col])
                    })?;
                }
                cells += 1;
            }
            for (kind, row) in LOCAL_MAP_TABLE {
                ensure(p.local_map(kind) == q.local_map(row[col]), || {
                    format!("{} in {} differs from {} (order {n})", kind.name(), sigma.name(), row[col].name())
                })?;
                cells += 1;
            }
        }
    }
    within(Duration::from_secs(5), started)?;
    Ok(format!("{cells} cell checks over 100 seeded tables (36 translation and 18 local-map cells each; local-map 3-cycle columns as implied by the parastrophe definition)"))
}

/// Compatibility of a partition with `·` on both sides, written out directly.
fn compatible(q: &Quasigroup, p: &Partition) -> bool {
    let n = q.order();
    (0..n).all(|x| {
        (0..n).all(|y| {
            !p.related(x, y)
                || (0..n).all(|z| p.related(q.mul(z, x), q.mul(z, y)) && p.related(q.mul(x, z), q.mul(y, z)))
        })
    })
}

fn criterion_3() -> Verdict {
    let started = Instant::now();
    let mut tables = 0;
    for n in 1..=4 {
        let parts = all_partitions(n);
        for q in enumerate_all(n, &ConstraintSet::none()).map_err(|e| e.to_string())? {
            tables += 1;
            let oracle: BTreeSet<Partition> = parts.iter().filter(|p| compatible(&q, p)).cloned().collect();
            for p in &parts {
                ensure(is_congruence(&q, p, Mode::Plain) == is_congruence(&q, p, Mode::Normal), || {
                    format!("plain and normal disagree on {:?} for {:?}", p.blocks(), q.rows())
                })?;
            }
            let lattice = all_congruences(&q).map_err(|e| e.to_string())?;
            let got: BTreeSet<Partition> = lattice.iter().map(|c| c.partition.clone()).collect();
            ensure(got == oracle, || format!("lattice mismatch for {:?}", q.rows()))?;
            ensure(lattice.iter().all(|c| c.normal), || format!("non-normal congruence on {:?}", q.rows()))?;
            for a in &got {
                for b in &got {
                    ensure(compose_relations(a, b) == compose_relations(b, a), || {
                        format!("{:?} and {:?} do not permute on {:?}", a.blocks(), b.blocks(), q.rows())
                    })?;
                }
                for sigma in COLUMNS {
                    ensure(compatible(&q.parastrophe(sigma), a), || {
                        format!("{:?} not a congruence of the {} parastrophe", a.blocks(), sigma.name())
                    })?;
                }
            }
        }
    }
    within(Duration::from_secs(120), started)?;
    Ok(format!("{tables} tables of order 1-4"))
}

fn check_decomposition(q: &Quasigroup, c: ClassSelector) -> Result<(), String> {
    let d = decompose(q, c).map_err(|e| format!("{c} on {:?}: {e}", q.rows()))?;
    ensure(d.round_trip_exact(q), || format!("{c}: round trip not exact on {:?}", q.rows()))?;
    ensure(d.a.idempotents() == vec![d.a_idempotent], || format!("{c}: A idempotents {:?}", d.a.idempotents()))?;
    let law = if is_left(c) { Flag::LeftDistributive } else { Flag::RightDistributive };
    ensure(d.companion_law == law && holds(&d.companion, law), || format!("{c}: companion is not {}", law.name()))
}

fn criterion_4(corpus: &Corpus) -> Verdict {
    let started = Instant::now();
    let products = [direct_product(&cyclic(3), &affine(3, 2, 2)), direct_product(&affine(4, 1, 3), &affine(3, 2, 2))];
    let mut counts = Vec::new();
    for &c in &ONE_SIDED {
        let tables = corpus.of(c);
        for q in tables.iter().chain(products.iter()) {
            check_decomposition(q, c)?;
        }
        counts.push(format!("{c} {}", tables.len()));
    }
    for q in &products {
        for c in [ClassSelector::F, ClassSelector::SM, ClassSelector::E] {
            let d = decompose(q, c).map_err(|e| e.to_string())?;
            ensure(d.round_trip_exact(q), || format!("{c} round trip on order {}", q.order()))?;
        }
    }
    let elapsed = started.elapsed() + corpus.search_time;
    ensure(elapsed < Duration::from_secs(600), || format!("took {elapsed:?}"))?;
    Ok(format!("{} plus products of order 9 and 12", counts.join(", ")))
}

fn criterion_5(corpus: &Corpus) -> Verdict {
    let started = Instant::now();
    let mut f_simple = 0;
    let mut one_sided = 0;
    for q in corpus.of(ClassSelector::LeftF).iter().filter(|q| holds(q, Flag::RightF)) {
        if quasigroup::congruences::is_simple(q).map_err(|e| e.to_string())? {
            f_simple += 1;
            ensure(q.is_associative() || holds(q, Flag::Medial), || format!("simple F neither group nor medial: {:?}", q.rows()))?;
            let cl = simple_classify(q, ClassSelector::F).map_err(|e| format!("{:?}: {e}", q.rows()))?;
            ensure(cl.reproduces(q), || format!("F form {} does not reproduce {:?}", cl.form, q.rows()))?;
        }
    }
    for &c in &ONE_SIDED {
        for q in corpus.of(c) {
            if quasigroup::congruences::is_simple(q).map_err(|e| e.to_string())? {
                one_sided += 1;
                let cl = simple_classify(q, c).map_err(|e| format!("{c} {:?}: {e}", q.rows()))?;
                ensure(cl.reproduces(q), || format!("{c} form {} does not reproduce {:?}", cl.form, q.rows()))?;
            }
        }
    }
    within(Duration::from_secs(600), started)?;
    Ok(format!("{f_simple} simple F-quasigroups, {one_sided} simple one-sided members reproduced"))
}

fn criterion_6(corpus: &Corpus) -> Verdict {
    let started = Instant::now();
    let mut left_f: Vec<Quasigroup> = corpus.of(ClassSelector::LeftF).to_vec();
    left_f.extend(
        FIXTURE_NAMES
            .iter()
            .map(|n| fixture(n).unwrap().table)
            .filter(|q| q.order() <= 8 && holds(q, Flag::LeftF)),
    );
    left_f.extend((0..8).map(d8_left_f));
    let mut moufang = 0;
    for q in &left_f {
        let r = loop_isotope_structure(q, ClassSelector::LeftF).map_err(|e| format!("{:?}: {e}", q.rows()))?;
        ensure(r.group_part_associative, || format!("group part not associative for {:?}", q.rows()))?;
        ensure(r.s_loop_witness.is_some(), || format!("S-loop part rejected for {:?}", q.rows()))?;
        if holds(q, Flag::RightF) {
            let r = loop_isotope_structure(q, ClassSelector::F).map_err(|e| e.to_string())?;
            ensure(r.full_lp_isotope_moufang == Some(true), || format!("LP-isotope not Moufang for {:?}", q.rows()))?;
            moufang += 1;
        }
    }
    let mut left_e = 0;
    for q in corpus.of(ClassSelector::LeftE) {
        let r = loop_isotope_structure(q, ClassSelector::LeftE).map_err(|e| format!("{:?}: {e}", q.rows()))?;
        ensure(r.abelian_part(), || format!("left E group part not abelian for {:?}", q.rows()))?;
        ensure(r.s_loop_witness.is_some(), || format!("left E S-loop part rejected for {:?}", q.rows()))?;
        left_e += 1;
    }
    within(Duration::from_secs(300), started)?;
    Ok(format!("{} left F ({moufang} two-sided, Moufang), {left_e} left E", left_f.len()))
}

/// Counts triples `(α, β, γ)` with `γ(xy) = αx·βy` by running over all of `S_n³`.
fn brute_autotopisms(q: &Quasigroup) -> usize {
    let n = q.order();
    let perms = permutations(n);
    let mut count = 0;
    for a in &perms {
        for b in &perms {
            for g in &perms {
                if q.elements().all(|x| q.elements().all(|y| g[q.mul(x, y)] == q.mul(a[x], b[y]))) {
                    count += 1;
                }
            }
        }
    }
    count
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                go(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn criterion_7() -> Verdict {
    let started = Instant::now();
    let mut parts = Vec::new();
    let groups: Vec<(String, Quasigroup)> =
        (2..=5).map(|n| (format!("Z{n}"), cyclic(n))).chain([("D8".to_string(), dihedral8())]).collect();
    for (name, g) in &groups {
        let n = g.order();
        let aut = automorphisms(g).map_err(|e| e.to_string())?.len();
        let atp = autotopisms(g).map_err(|e| e.to_string())?.len();
        ensure(atp == n * n * aut, || format!("{name}: {atp} autotopisms, expected {n}²·{aut}"))?;
        if n <= 3 {
            let brute = brute_autotopisms(g);
            ensure(brute == atp, || format!("{name}: brute force finds {brute}, library {atp}"))?;
        }
        parts.push(format!("{name} {atp}"));
    }
    within(Duration::from_secs(120), started)?;
    Ok(parts.join(", "))
}

/// Latin squares of order `n` built row by row from all permutations, keeping
/// rows that clash with no earlier row in any column.
fn naive_latin_count(n: usize) -> u64 {
    fn go(rows: &mut Vec<usize>, perms: &[Vec<usize>], n: usize) -> u64 {
        if rows.len() == n {
            return 1;
        }
        let mut total = 0;
        for (i, p) in perms.iter().enumerate() {
            if rows.iter().all(|&r| perms[r].iter().zip(p).all(|(a, b)| a != b)) {
                rows.push(i);
                total += go(rows, perms, n);
                rows.pop();
            }
        }
        total
    }
    go(&mut Vec::new(), &permutations(n), n)
}

fn criterion_8() -> Verdict {
    let none = ConstraintSet::none();
    for (n, want) in [(1, 1), (2, 2), (3, 12), (4, 576)] {
        let got = search_with(n, &none, SearchMode::Count, &SearchOptions::default()).map_err(|e| e.to_string())?.count();
        let naive = naive_latin_count(n);
        ensure(got == want && naive == want, || format!("order {n}: search {got}, naive {naive}, expected {want}"))?;
    }
    let t5 = Instant::now();
    let single = SearchOptions { jobs: Some(1), ..SearchOptions::default() };
    let multi = SearchOptions { jobs: Some(4), ..SearchOptions::default() };
    let c1 = search_with(5, &none, SearchMode::Count, &single).map_err(|e| e.to_string())?.count();
    let c4 = search_with(5, &none, SearchMode::Count, &multi).map_err(|e| e.to_string())?.count();
    ensure(c1 == 161_280 && c4 == c1, || format!("order 5: {c1} with one worker, {c4} with four"))?;
    let n5_time = t5.elapsed();
    ensure(n5_time < Duration::from_secs(300), || format!("order 5 took {n5_time:?}"))?;
    let cs = ConstraintSet::require(&[Flag::LeftSM]);
    let e1 = search_with(5, &cs, SearchMode::Enumerate(usize::MAX), &single).map_err(|e| e.to_string())?;
    let e4 = search_with(5, &cs, SearchMode::Enumerate(usize::MAX), &multi).map_err(|e| e.to_string())?;
    ensure(e1 == e4, || "enumeration order depends on worker count".into())?;
    Ok(format!("12, 576, 161280 (order 5 twice in {n5_time:?}); {} left SM tables identical across worker counts", e1.count()))
}

/// Successive images `h^i(Q)` until they stop shrinking.
fn image_chain(h: &[usize]) -> Vec<BTreeSet<usize>> {
    let mut chain = vec![(0..h.len()).collect::<BTreeSet<_>>()];
    loop {
        let next: BTreeSet<usize> = chain.last().unwrap().iter().map(|&x| h[x]).collect();
        if &next == chain.last().unwrap() {
            return chain;
        }
        chain.push(next);
    }
}

fn criterion_9(corpus: &Corpus) -> Verdict {
    let (mut with_f, mut with_s) = (0, 0);
    let tables = corpus.of(ClassSelector::LeftF);
    for q in tables {
        let [e, f, s] = [LocalMapKind::E, LocalMapKind::F, LocalMapKind::S].map(|k| q.local_map(k));
        ensure(is_endomorphism(q, &e), || format!("e not multiplicative on {:?}", q.rows()))?;
        let commute = |a: &[usize], b: &[usize]| q.elements().all(|x| a[b[x]] == b[a[x]]);
        if is_endomorphism(q, &f) {
            with_f += 1;
            ensure(commute(&e, &f), || format!("e and f do not commute on {:?}", q.rows()))?;
        }
        if is_endomorphism(q, &s) {
            with_s += 1;
            ensure(commute(&e, &s), || format!("e and s do not commute on {:?}", q.rows()))?;
        }
        let oracle = image_chain(&e);
        let chain = endomorphism_chain(q, LocalMapKind::E).map_err(|err| err.to_string())?;
        let got: Vec<BTreeSet<usize>> = chain.images.iter().map(|s| s.iter().copied().collect()).collect();
        ensure(got == oracle && chain.stabilization_index + 1 == oracle.len(), || {
            format!("chain mismatch on {:?}", q.rows())
        })?;
        let stable: Vec<usize> = chain.stable_image().to_vec();
        let restricted: Vec<usize> = stable.iter().map(|&x| stable.binary_search(&e[x]).unwrap()).collect();
        ensure(is_bijection(&restricted), || format!("e not bijective on its stable image for {:?}", q.rows()))?;
    }
    let loops = tables.iter().filter(|q| q.identity_element().is_some()).count();
    let groups = tables.iter().filter(|q| loop_classify(q).map(|r| r.group).unwrap_or(false)).count();
    ensure(loops == groups, || format!("{loops} left F loops but {groups} groups"))?;
    Ok(format!("{} left F tables ({with_f} with multiplicative f, {with_s} with multiplicative s)", tables.len()))
}

fn report(k: usize, title: &str, started: Instant, v: &Verdict) -> bool {
    let t = started.elapsed();
    match v {
        Ok(detail) => println!("criterion {k} PASS {title}: {detail} [{:.2?}]", t),
        Err(why) => println!("criterion {k} FAIL {title}: {why} [{:.2?}]", t),
    }
    v.is_ok()
}

fn main() {
    let mut ok = true;
    let s = Instant::now();
    ok &= report(1, "fixture fidelity", s, &criterion_1());
    let s = Instant::now();
    ok &= report(2, "parastrophe tables", s, &criterion_2());
    let s = Instant::now();
    ok &= report(3, "congruence laws", s, &criterion_3());
    let s = Instant::now();
    let corpus = Corpus::build();
    ok &= report(4, "decomposition", s, &criterion_4(&corpus));
    let s = Instant::now();
    ok &= report(5, "simple F classification", s, &criterion_5(&corpus));
    let s = Instant::now();
    ok &= report(6, "loop-isotope structure", s, &criterion_6(&corpus));
    let s = Instant::now();
    ok &= report(7, "autotopism counts", s, &criterion_7());
    let s = Instant::now();
    ok &= report(8, "search counts", s, &criterion_8());
    let s = Instant::now();
    ok &= report(9, "endomorphism laws", s, &criterion_9(&corpus));
    if !ok {
        std::process::exit(1);
    }
}
