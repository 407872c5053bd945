//! Builders for groups, Toyoda-medial and linear quasigroups, random Latin
//! squares, and the named fixtures.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::identities::Flag;
use crate::morphisms::is_automorphism;
use crate::perm::Perm;
use crate::table::{Elem, LocalMapKind, Quasigroup};

/// The dihedral group of order 8 with its fixed element labelling.
pub const D8_TABLE: [[Elem; 8]; 8] = [
    [0, 1, 2, 3, 4, 5, 6, 7],
    [1, 0, 3, 2, 6, 7, 4, 5],
    [2, 6, 7, 1, 0, 3, 5, 4],
    [3, 4, 5, 0, 1, 2, 7, 6],
    [4, 3, 0, 5, 7, 6, 1, 2],
    [5, 7, 6, 4, 3, 0, 2, 1],
    [6, 2, 1, 7, 5, 4, 0, 3],
    [7, 5, 4, 6, 2, 1, 3, 0],
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(usize),
    Dihedral8,
    Product(Box<GroupSpec>, Box<GroupSpec>),
}

pub fn make_group(spec: &GroupSpec) -> Result<Quasigroup> {
    match spec {
        GroupSpec::Cyclic(0) => Err(Error::NotAGroup("cyclic group of order 0".into())),
        GroupSpec::Cyclic(n) => Quasigroup::from_fn(*n, |x, y| (x + y) % n),
        GroupSpec::Dihedral8 => Quasigroup::from_fn(8, |x, y| D8_TABLE[x][y]),
        GroupSpec::Product(a, b) => Ok(direct_product(&make_group(a)?, &make_group(b)?)),
    }
}

pub fn cyclic(n: usize) -> Quasigroup {
    make_group(&GroupSpec::Cyclic(n)).expect("n > 0")
}

pub fn dihedral8() -> Quasigroup {
    make_group(&GroupSpec::Dihedral8).expect("hard-coded table is Latin")
}

/// `S3` with elements `a^i b^j` encoded as `i + 3j`, where `a³ = b² = 1`
/// and `bab = a⁻¹`.
pub fn symmetric3() -> Quasigroup {
    Quasigroup::from_fn(6, |x, y| {
        let (i, j) = (x % 3, x / 3);
        let (k, l) = (y % 3, y / 3);
        let k = if j == 1 { (3 - k) % 3 } else { k };
        (i + k) % 3 + 3 * ((j + l) % 2)
    })
    .expect("S3 table is Latin")
}

/// Componentwise product on pairs encoded as `a·|B| + b`.
pub fn direct_product(a: &Quasigroup, b: &Quasigroup) -> Quasigroup {
    let nb = b.order();
    Quasigroup::from_fn(a.order() * nb, |x, y| {
        a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb)
    })
    .expect("products of quasigroups are quasigroups")
}

/// `x ↦ k·x` on `Z_n`.
pub fn multiply_by(n: usize, k: usize) -> Result<Perm> {
    Perm::new((0..n).map(|x| x * k % n).collect())
}

fn require_group(g: &Quasigroup) -> Result<()> {
    if !g.is_group() {
        return Err(Error::NotAGroup("table is not associative with an identity".into()));
    }
    Ok(())
}

/// Toyoda data `x·y = φx + ψy + c`.
#[derive(Debug, Clone)]
pub struct ToyodaForm {
    pub group: Quasigroup,
    pub phi: Perm,
    pub psi: Perm,
    pub c: Elem,
}

pub fn toyoda_medial(form: &ToyodaForm) -> Result<Quasigroup> {
    let g = &form.group;
    require_group(g)?;
    if !g.is_commutative() {
        return Err(Error::NotAbelian);
    }
    if !is_automorphism(g, &form.phi) {
        return Err(Error::NotAutomorphism("φ".into()));
    }
    if !is_automorphism(g, &form.psi) {
        return Err(Error::NotAutomorphism("ψ".into()));
    }
    if form.phi.compose(&form.psi) != form.psi.compose(&form.phi) {
        return Err(Error::NotCommutingPair);
    }
    Quasigroup::from_fn(g.order(), |x, y| g.mul(g.mul(form.phi.apply(x), form.psi.apply(y)), form.c))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    Left,
    Right,
}

/// Left: `x·y = aut(x) + other(y) + c`; right: `x·y = other(x) + aut(y) + c`.
pub fn linear_quasigroup(group: &Quasigroup, side: Side, aut: &Perm, other: &Perm, c: Elem) -> Result<Quasigroup> {
    require_group(group)?;
    if !is_automorphism(group, aut) {
        return Err(Error::NotAutomorphism("the automorphism part".into()));
    }
    let (a, b) = match side {
        Side::Left => (aut, other),
        Side::Right => (other, aut),
    };
    Quasigroup::from_fn(group.order(), |x, y| group.mul(group.mul(a.apply(x), b.apply(y)), c))
}

/// `x·y = αx + a + y` over `D8_TABLE` with `α = (1 2)(4 5)`.
pub fn d8_left_f(a: Elem) -> Quasigroup {
    let g = dihedral8();
    let alpha = Perm::from_cycles(8, &[&[1, 2], &[4, 5]]).expect("valid cycles");
    Quasigroup::from_fn(8, |x, y| g.mul(g.mul(alpha.apply(x), a), y)).expect("group isotope")
}

/// A random Latin square: randomized cell-by-cell backtracking followed by a
/// random isotopy.
pub fn random_quasigroup<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Quasigroup {
    fn fill<R: Rng + ?Sized>(cell: usize, n: usize, t: &mut [usize], rng: &mut R) -> bool {
        if cell == n * n {
            return true;
        }
        let (r, c) = (cell / n, cell % n);
        let mut vals: Vec<usize> = (0..n)
            .filter(|&v| (0..c).all(|j| t[r * n + j] != v) && (0..r).all(|i| t[i * n + c] != v))
            .collect();
        vals.shuffle(rng);
        for v in vals {
            t[cell] = v;
            if fill(cell + 1, n, t, rng) {
                return true;
            }
        }
        false
    }
    let mut t = vec![0; n * n];
    assert!(fill(0, n, &mut t, rng), "a Latin square of every order exists");
    let q = Quasigroup::from_table(n, t).expect("filled square is Latin");
    let perm = |rng: &mut R| {
        let mut v: Vec<usize> = (0..n).collect();
        v.shuffle(rng);
        Perm::new(v).expect("shuffle is a bijection")
    };
    let (a, b, c) = (perm(rng), perm(rng), perm(rng));
    crate::morphisms::apply_isotopy(&q, &crate::morphisms::Isotopy::new(a, b, c))
}

/// A fact stated about a fixture.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase", tag = "kind")]
pub enum Expectation {
    LocalImage { map: LocalMapKind, image: Vec<Elem> },
    LocalPermutation { map: LocalMapKind, value: bool },
    LocalConstant { map: LocalMapKind, value: bool },
    Flag { flag: Flag, value: bool },
    Simple { value: bool },
    Group { value: bool },
    LeftLinear { value: bool },
    RightLinear { value: bool },
    CenterSize { value: usize },
}

#[derive(Debug, Clone, Serialize)]
pub struct Fixture {
    pub name: &'static str,
    pub description: &'static str,
    pub table: Quasigroup,
    pub expectations: Vec<Expectation>,
}

pub const FIXTURE_NAMES: [&str; 9] = [
    "z3-minus",
    "z6-minus",
    "z4-x-plus-3y",
    "z7-minus",
    "z7-2x-3y",
    "z9-x-plus-4y",
    "d8-group",
    "d8-leftF",
    "s3-group",
];

fn affine(n: usize, a: usize, b: usize) -> Quasigroup {
    Quasigroup::from_fn(n, |x, y| (a * x + b * y) % n).expect("unit coefficients")
}

pub fn fixture(name: &str) -> Result<Fixture> {
    use Expectation::*;
    use LocalMapKind::{E, F, S};
    let flag = |flag, value| Flag { flag, value };
    let fesm = |v: &mut Vec<Expectation>| {
        for f in [
            crate::identities::Flag::Medial,
            crate::identities::Flag::LeftF,
            crate::identities::Flag::RightF,
            crate::identities::Flag::LeftSM,
            crate::identities::Flag::RightSM,
            crate::identities::Flag::LeftE,
            crate::identities::Flag::RightE,
        ] {
            v.push(flag(f, true));
        }
    };
    let fx = match name {
        "z3-minus" => {
            let mut ex = vec![
                LocalImage { map: E, image: vec![0] },
                LocalImage { map: S, image: vec![0] },
                LocalImage { map: F, image: vec![0, 1, 2] },
                flag(crate::identities::Flag::Unipotent, true),
            ];
            fesm(&mut ex);
            Fixture { name: "z3-minus", description: "(Z3, x - y)", table: affine(3, 1, 2), expectations: ex }
        }
        "z6-minus" => {
            let mut ex = vec![
                LocalImage { map: E, image: vec![0] },
                LocalImage { map: S, image: vec![0] },
                LocalImage { map: F, image: vec![0, 2, 4] },
            ];
            fesm(&mut ex);
            Fixture { name: "z6-minus", description: "(Z6, x - y)", table: affine(6, 1, 5), expectations: ex }
        }
        "z4-x-plus-3y" => {
            let mut ex = vec![
                LocalImage { map: E, image: vec![0] },
                LocalImage { map: S, image: vec![0] },
                LocalImage { map: F, image: vec![0, 2] },
            ];
            fesm(&mut ex);
            Fixture { name: "z4-x-plus-3y", description: "(Z4, x + 3y)", table: affine(4, 1, 3), expectations: ex }
        }
        "z7-minus" => {
            let mut ex = vec![
                LocalConstant { map: E, value: true },
                LocalConstant { map: S, value: true },
                LocalPermutation { map: F, value: true },
                Simple { value: true },
            ];
            fesm(&mut ex);
            Fixture { name: "z7-minus", description: "(Z7, x - y)", table: affine(7, 1, 6), expectations: ex }
        }
        "z7-2x-3y" => {
            let mut ex = vec![
                LocalPermutation { map: E, value: true },
                LocalPermutation { map: F, value: true },
                LocalPermutation { map: S, value: true },
                Simple { value: true },
            ];
            fesm(&mut ex);
            Fixture { name: "z7-2x-3y", description: "(Z7, 2x + 3y)", table: affine(7, 2, 3), expectations: ex }
        }
        "z9-x-plus-4y" => {
            let mut ex = vec![RightLinear { value: true }];
            fesm(&mut ex);
            Fixture { name: "z9-x-plus-4y", description: "(Z9, x + 4y)", table: affine(9, 1, 4), expectations: ex }
        }
        "d8-group" => Fixture {
            name: "d8-group",
            description: "dihedral group of order 8",
            table: dihedral8(),
            expectations: vec![
                Group { value: true },
                CenterSize { value: 2 },
                flag(crate::identities::Flag::Commutative, false),
            ],
        },
        "d8-leftF" => Fixture {
            name: "d8-leftF",
            description: "(D8, x·y = αx + y), α = (1 2)(4 5)",
            table: d8_left_f(0),
            expectations: vec![
                flag(crate::identities::Flag::LeftF, true),
                LeftLinear { value: false },
                RightLinear { value: true },
            ],
        },
        "s3-group" => Fixture {
            name: "s3-group",
            description: "symmetric group S3, a^i b^j encoded as i + 3j",
            table: symmetric3(),
            expectations: vec![
                Group { value: true },
                CenterSize { value: 1 },
                flag(crate::identities::Flag::Commutative, false),
            ],
        },
        other => return Err(Error::UnknownFixture(other.to_string())),
    };
    Ok(fx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identities::classify;
    use rand::SeedableRng;

    #[test]
    fn cyclic_and_dihedral() {
        assert_eq!(cyclic(1).order(), 1);
        let d8 = dihedral8();
        assert!(d8.is_group());
        assert_eq!(d8.row(2), &[2, 6, 7, 1, 0, 3, 5, 4]);
        assert_eq!(d8.identity_element(), Some(0));
        assert_eq!(cyclic(9).mul(5, 7), 3);
    }

    #[test]
    fn s3_is_nonabelian_group() {
        let s3 = symmetric3();
        assert!(s3.is_group() && !s3.is_commutative());
    }

    #[test]
    fn toyoda_examples() {
        let z9 = cyclic(9);
        let q = toyoda_medial(&ToyodaForm {
            group: z9.clone(),
            phi: Perm::identity(9),
            psi: multiply_by(9, 4).unwrap(),
            c: 0,
        })
        .unwrap();
        assert_eq!(q, affine(9, 1, 4));
        let same = toyoda_medial(&ToyodaForm { group: z9.clone(), phi: Perm::identity(9), psi: Perm::identity(9), c: 0 });
        assert_eq!(same.unwrap(), z9);

        let q = toyoda_medial(&ToyodaForm {
            group: cyclic(5),
            phi: multiply_by(5, 2).unwrap(),
            psi: multiply_by(5, 4).unwrap(),
            c: 0,
        })
        .unwrap();
        let r = classify(&q);
        assert!(r.idempotent && r.distributive && r.medial);
    }

    #[test]
    fn toyoda_rejects_bad_input() {
        let d8 = dihedral8();
        let id8 = Perm::identity(8);
        let err = toyoda_medial(&ToyodaForm { group: d8, phi: id8.clone(), psi: id8, c: 0 });
        assert_eq!(err.unwrap_err(), Error::NotAbelian);
        let swap = Perm::parse(5, "(0 1)").unwrap();
        let err = toyoda_medial(&ToyodaForm { group: cyclic(5), phi: swap, psi: Perm::identity(5), c: 0 });
        assert!(matches!(err, Err(Error::NotAutomorphism(_))));
    }

    #[test]
    fn linear_examples() {
        let z4 = cyclic(4);
        let q = linear_quasigroup(&z4, Side::Right, &multiply_by(4, 3).unwrap(), &Perm::identity(4), 0).unwrap();
        assert_eq!(q, affine(4, 1, 3));
        let g = linear_quasigroup(&z4, Side::Left, &Perm::identity(4), &Perm::identity(4), 0).unwrap();
        assert_eq!(g, z4);
        let d8 = dihedral8();
        let alpha = Perm::parse(8, "(1 2)(4 5)").unwrap();
        assert!(!is_automorphism(&d8, &alpha));
        let q = linear_quasigroup(&d8, Side::Right, &Perm::identity(8), &alpha, 0).unwrap();
        assert_eq!(q, d8_left_f(0));
        assert!(classify(&q).left_f);
    }

    #[test]
    fn random_quasigroups_are_reproducible() {
        let mut r1 = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut r2 = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in 1..=8 {
            assert_eq!(random_quasigroup(n, &mut r1), random_quasigroup(n, &mut r2));
        }
    }

    #[test]
    fn unknown_fixture() {
        assert_eq!(fixture("nope").unwrap_err(), Error::UnknownFixture("nope".into()));
        for name in FIXTURE_NAMES {
            assert_eq!(fixture(name).unwrap().name, name);
        }
    }
}
