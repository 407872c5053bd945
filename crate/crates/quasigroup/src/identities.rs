//! Exhaustive class predicates, loop classes, left S-loops, Sushkevich
//! postulates and group-isotope forms.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::morphisms::{automorphisms, is_automorphism, is_endomorphism, lp_isotope};
use crate::perm::{is_bijection, Perm};
use crate::table::{Elem, LocalMapKind, Quasigroup, TranslationKind};

/// Names of the quasigroup class flags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Flag {
    Quasigroup,
    Loop,
    LeftLoop,
    RightLoop,
    Idempotent,
    Unipotent,
    Medial,
    LeftDistributive,
    RightDistributive,
    Distributive,
    LeftSemiSymmetric,
    TS,
    LeftF,
    RightF,
    LeftSM,
    RightSM,
    LeftE,
    RightE,
    LIP,
    RIP,
    IP,
    Commutative,
}

impl Flag {
    pub const ALL: [Flag; 22] = [
        Flag::Quasigroup,
        Flag::Loop,
        Flag::LeftLoop,
        Flag::RightLoop,
        Flag::Idempotent,
        Flag::Unipotent,
        Flag::Medial,
        Flag::LeftDistributive,
        Flag::RightDistributive,
        Flag::Distributive,
        Flag::LeftSemiSymmetric,
        Flag::TS,
        Flag::LeftF,
        Flag::RightF,
        Flag::LeftSM,
        Flag::RightSM,
        Flag::LeftE,
        Flag::RightE,
        Flag::LIP,
        Flag::RIP,
        Flag::IP,
        Flag::Commutative,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Flag::Quasigroup => "quasigroup",
            Flag::Loop => "loop",
            Flag::LeftLoop => "leftLoop",
            Flag::RightLoop => "rightLoop",
            Flag::Idempotent => "idempotent",
            Flag::Unipotent => "unipotent",
            Flag::Medial => "medial",
            Flag::LeftDistributive => "leftDistributive",
            Flag::RightDistributive => "rightDistributive",
            Flag::Distributive => "distributive",
            Flag::LeftSemiSymmetric => "leftSemiSymmetric",
            Flag::TS => "TS",
            Flag::LeftF => "leftF",
            Flag::RightF => "rightF",
            Flag::LeftSM => "leftSM",
            Flag::RightSM => "rightSM",
            Flag::LeftE => "leftE",
            Flag::RightE => "rightE",
            Flag::LIP => "LIP",
            Flag::RIP => "RIP",
            Flag::IP => "IP",
            Flag::Commutative => "commutative",
        }
    }
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for Flag {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl FromStr for Flag {
    type Err = String;

    /// Case-insensitive; `-` and `_` are ignored, so `left-F` parses as `leftF`.
    fn from_str(s: &str) -> std::result::Result<Flag, String> {
        let norm = |t: &str| t.chars().filter(|c| *c != '-' && *c != '_').collect::<String>().to_lowercase();
        let want = norm(s);
        Flag::ALL
            .into_iter()
            .find(|f| norm(f.name()) == want)
            .ok_or_else(|| format!("unknown class flag `{s}`"))
    }
}

/// Result of [`classify`]: one boolean per class flag.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassReport {
    pub quasigroup: bool,
    #[serde(rename = "loop")]
    pub is_loop: bool,
    pub left_loop: bool,
    pub right_loop: bool,
    pub idempotent: bool,
    pub unipotent: bool,
    pub medial: bool,
    pub left_distributive: bool,
    pub right_distributive: bool,
    pub distributive: bool,
    pub left_semi_symmetric: bool,
    #[serde(rename = "TS")]
    pub ts: bool,
    #[serde(rename = "leftF")]
    pub left_f: bool,
    #[serde(rename = "rightF")]
    pub right_f: bool,
    #[serde(rename = "leftSM")]
    pub left_sm: bool,
    #[serde(rename = "rightSM")]
    pub right_sm: bool,
    #[serde(rename = "leftE")]
    pub left_e: bool,
    #[serde(rename = "rightE")]
    pub right_e: bool,
    #[serde(rename = "LIP")]
    pub lip: bool,
    #[serde(rename = "RIP")]
    pub rip: bool,
    #[serde(rename = "IP")]
    pub ip: bool,
    pub commutative: bool,
}

impl ClassReport {
    pub fn get(&self, flag: Flag) -> bool {
        match flag {
            Flag::Quasigroup => self.quasigroup,
            Flag::Loop => self.is_loop,
            Flag::LeftLoop => self.left_loop,
            Flag::RightLoop => self.right_loop,
            Flag::Idempotent => self.idempotent,
            Flag::Unipotent => self.unipotent,
            Flag::Medial => self.medial,
            Flag::LeftDistributive => self.left_distributive,
            Flag::RightDistributive => self.right_distributive,
            Flag::Distributive => self.distributive,
            Flag::LeftSemiSymmetric => self.left_semi_symmetric,
            Flag::TS => self.ts,
            Flag::LeftF => self.left_f,
            Flag::RightF => self.right_f,
            Flag::LeftSM => self.left_sm,
            Flag::RightSM => self.right_sm,
            Flag::LeftE => self.left_e,
            Flag::RightE => self.right_e,
            Flag::LIP => self.lip,
            Flag::RIP => self.rip,
            Flag::IP => self.ip,
            Flag::Commutative => self.commutative,
        }
    }

    /// Flags that hold, in declaration order.
    pub fn true_flags(&self) -> Vec<Flag> {
        Flag::ALL.into_iter().filter(|&f| self.get(f)).collect()
    }
}

fn all2(n: usize, mut p: impl FnMut(Elem, Elem) -> bool) -> bool {
    (0..n).all(|x| (0..n).all(|y| p(x, y)))
}

fn all3(n: usize, mut p: impl FnMut(Elem, Elem, Elem) -> bool) -> bool {
    (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| p(x, y, z))))
}

/// Decides a single flag by exhaustive scan.
pub fn holds(q: &Quasigroup, flag: Flag) -> bool {
    let n = q.order();
    let m = |x, y| q.mul(x, y);
    match flag {
        Flag::Quasigroup => true,
        Flag::Loop => q.identity_element().is_some(),
        Flag::LeftLoop => q.left_identity().is_some(),
        Flag::RightLoop => q.right_identity().is_some(),
        Flag::Idempotent => (0..n).all(|x| m(x, x) == x),
        Flag::Unipotent => (0..n).all(|x| m(x, x) == m(0, 0)),
        Flag::Medial => (0..n).all(|x| {
            all3(n, |y, u, v| m(m(x, y), m(u, v)) == m(m(x, u), m(y, v)))
        }),
        Flag::LeftDistributive => all3(n, |x, u, v| m(x, m(u, v)) == m(m(x, u), m(x, v))),
        Flag::RightDistributive => all3(n, |x, u, v| m(m(x, u), v) == m(m(x, v), m(u, v))),
        Flag::Distributive => holds(q, Flag::LeftDistributive) && holds(q, Flag::RightDistributive),
        Flag::LeftSemiSymmetric => all2(n, |x, y| m(x, m(x, y)) == y),
        Flag::TS => holds(q, Flag::LeftSemiSymmetric) && holds(q, Flag::Commutative),
        Flag::LeftF => {
            let e = q.local_map(LocalMapKind::E);
            all3(n, |x, y, z| m(x, m(y, z)) == m(m(x, y), m(e[x], z)))
        }
        Flag::RightF => {
            let f = q.local_map(LocalMapKind::F);
            all3(n, |x, y, z| m(m(x, y), z) == m(m(x, f[z]), m(y, z)))
        }
        Flag::LeftSM => all3(n, |x, y, z| m(m(x, x), m(y, z)) == m(m(x, y), m(x, z))),
        Flag::RightSM => all3(n, |x, y, z| m(m(z, y), m(x, x)) == m(m(z, x), m(y, x))),
        Flag::LeftE => {
            let f = q.local_map(LocalMapKind::F);
            all3(n, |x, y, z| m(x, m(y, z)) == m(m(f[x], y), m(x, z)))
        }
        Flag::RightE => {
            let e = q.local_map(LocalMapKind::E);
            all3(n, |x, y, z| m(m(z, y), x) == m(m(z, x), m(y, e[x])))
        }
        Flag::LIP => left_inverse_map(q).is_some(),
        Flag::RIP => right_inverse_map(q).is_some(),
        Flag::IP => holds(q, Flag::LIP) && holds(q, Flag::RIP),
        Flag::Commutative => q.is_commutative(),
    }
}

/// The permutation `λ` with `λx·(x·y) = y`, solved from `y = 0` and verified.
pub fn left_inverse_map(q: &Quasigroup) -> Option<Perm> {
    let lambda: Vec<Elem> = q.elements().map(|x| q.rdiv(0, q.mul(x, 0))).collect();
    let ok = all2(q.order(), |x, y| q.mul(lambda[x], q.mul(x, y)) == y);
    (ok && is_bijection(&lambda)).then(|| Perm::from_vec_unchecked(lambda))
}

/// The permutation `ρ` with `(x·y)·ρy = x`, solved from `x = 0` and verified.
pub fn right_inverse_map(q: &Quasigroup) -> Option<Perm> {
    let rho: Vec<Elem> = q.elements().map(|y| q.ldiv(q.mul(0, y), 0)).collect();
    let ok = all2(q.order(), |x, y| q.mul(q.mul(x, y), rho[y]) == x);
    (ok && is_bijection(&rho)).then(|| Perm::from_vec_unchecked(rho))
}

pub fn classify(q: &Quasigroup) -> ClassReport {
    let h = |f| holds(q, f);
    ClassReport {
        quasigroup: true,
        is_loop: h(Flag::Loop),
        left_loop: h(Flag::LeftLoop),
        right_loop: h(Flag::RightLoop),
        idempotent: h(Flag::Idempotent),
        unipotent: h(Flag::Unipotent),
        medial: h(Flag::Medial),
        left_distributive: h(Flag::LeftDistributive),
        right_distributive: h(Flag::RightDistributive),
        distributive: h(Flag::Distributive),
        left_semi_symmetric: h(Flag::LeftSemiSymmetric),
        ts: h(Flag::TS),
        left_f: h(Flag::LeftF),
        right_f: h(Flag::RightF),
        left_sm: h(Flag::LeftSM),
        right_sm: h(Flag::RightSM),
        left_e: h(Flag::LeftE),
        right_e: h(Flag::RightE),
        lip: h(Flag::LIP),
        rip: h(Flag::RIP),
        ip: h(Flag::IP),
        commutative: h(Flag::Commutative),
    }
}

/// Witness `(ψ, φ)` of a complete automorphism satisfying condition a).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SLoopWitness {
    pub psi: Perm,
    pub phi: Perm,
}

/// Result of [`loop_classify`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LoopReport {
    pub identity: Elem,
    pub group: bool,
    pub abelian_group: bool,
    pub left_bol: bool,
    pub moufang: bool,
    #[serde(rename = "CML")]
    pub cml: bool,
    pub left_special: bool,
    pub right_special: bool,
    #[serde(rename = "leftM")]
    pub left_m: bool,
    #[serde(rename = "rightM")]
    pub right_m: bool,
    #[serde(rename = "leftS")]
    pub left_s: bool,
    /// The map `φ` of the left M-loop condition, when it exists.
    pub left_m_map: Option<Vec<Elem>>,
    /// The map `ψ` of the right M-loop condition, when it exists.
    pub right_m_map: Option<Vec<Elem>>,
    pub left_s_witness: Option<SLoopWitness>,
    pub left_nucleus: Vec<Elem>,
    pub middle_nucleus: Vec<Elem>,
    pub right_nucleus: Vec<Elem>,
    pub nucleus: Vec<Elem>,
    pub center: Vec<Elem>,
}

fn loop_identity(q: &Quasigroup) -> Result<Elem> {
    q.identity_element().ok_or(Error::NotALoop)
}

pub fn loop_classify(q: &Quasigroup) -> Result<LoopReport> {
    let one = loop_identity(q)?;
    let n = q.order();
    let m = |x, y| q.mul(x, y);
    let group = q.is_associative();
    let commutative = q.is_commutative();
    let left_bol = all3(n, |x, y, z| m(x, m(y, m(x, z))) == m(m(x, m(y, x)), z));
    let moufang = all3(n, |x, y, z| m(x, m(m(y, z), x)) == m(m(x, y), m(z, x)));
    let left_special = left_special(q);
    let right_special = right_special(q);
    let left_m_map = left_m_map(q, one);
    let right_m_map = right_m_map(q, one);
    let left_s_witness = is_left_s_loop(q)?;

    let left_nucleus: Vec<Elem> = q
        .elements()
        .filter(|&a| all2(n, |x, y| m(a, m(x, y)) == m(m(a, x), y)))
        .collect();
    let middle_nucleus: Vec<Elem> = q
        .elements()
        .filter(|&a| all2(n, |x, y| m(m(x, a), y) == m(x, m(a, y))))
        .collect();
    let right_nucleus: Vec<Elem> = q
        .elements()
        .filter(|&a| all2(n, |x, y| m(m(x, y), a) == m(x, m(y, a))))
        .collect();
    let nucleus: Vec<Elem> = left_nucleus
        .iter()
        .copied()
        .filter(|a| middle_nucleus.contains(a) && right_nucleus.contains(a))
        .collect();
    let center: Vec<Elem> = nucleus
        .iter()
        .copied()
        .filter(|&a| q.elements().all(|x| m(a, x) == m(x, a)))
        .collect();

    Ok(LoopReport {
        identity: one,
        group,
        abelian_group: group && commutative,
        left_bol,
        moufang,
        cml: commutative && moufang,
        left_special,
        right_special,
        left_m: left_m_map.is_some(),
        right_m: right_m_map.is_some(),
        left_s: left_s_witness.is_some(),
        left_m_map,
        right_m_map,
        left_s_witness,
        left_nucleus,
        middle_nucleus,
        right_nucleus,
        nucleus,
        center,
    })
}

/// `S_{a,b} = L_b⁻¹L_a⁻¹L_{ab}` is an automorphism for all `a, b`.
fn left_special(q: &Quasigroup) -> bool {
    q.elements().all(|a| {
        q.elements().all(|b| {
            let ab = q.mul(a, b);
            let s: Vec<Elem> = q.elements().map(|x| q.ldiv(b, q.ldiv(a, q.mul(ab, x)))).collect();
            is_endomorphism(q, &s)
        })
    })
}

/// `T_{a,b} = R_b⁻¹R_a⁻¹R_{ba}` is an automorphism for all `a, b`.
fn right_special(q: &Quasigroup) -> bool {
    q.elements().all(|a| {
        q.elements().all(|b| {
            let ba = q.mul(b, a);
            let t: Vec<Elem> = q.elements().map(|x| q.rdiv(q.rdiv(q.mul(x, ba), a), b)).collect();
            is_endomorphism(q, &t)
        })
    })
}

/// Candidate values for a pointwise-solved map at `x`: `x` itself first, so
/// that the identity map is reported whenever it works.
fn candidates(x: Elem, n: usize) -> impl Iterator<Item = Elem> {
    std::iter::once(x).chain((0..n).filter(move |&c| c != x))
}

/// Solves `x·yz = (x·(y·Iφx))·(φx·z)` for `φ` pointwise, where `x·Ix = 1`.
fn left_m_map(q: &Quasigroup, one: Elem) -> Option<Vec<Elem>> {
    let n = q.order();
    let inv = |x| q.ldiv(x, one);
    q.elements()
        .map(|x| {
            candidates(x, n).find(|&c| {
                all2(n, |y, z| q.mul(x, q.mul(y, z)) == q.mul(q.mul(x, q.mul(y, inv(c))), q.mul(c, z)))
            })
        })
        .collect()
}

/// Solves `yz·x = (y·ψx)·((I⁻¹ψx·z)·x)` for `ψ` pointwise. `I = P_1` is always
/// a permutation, so `I⁻¹c = c/1`.
fn right_m_map(q: &Quasigroup, one: Elem) -> Option<Vec<Elem>> {
    let n = q.order();
    let inv_i = |c| q.rdiv(one, c);
    q.elements()
        .map(|x| {
            candidates(x, n).find(|&c| {
                all2(n, |y, z| {
                    q.mul(q.mul(y, z), x) == q.mul(q.mul(y, c), q.mul(q.mul(inv_i(c), z), x))
                })
            })
        })
        .collect()
}

/// Decides whether a loop has a complete automorphism `ψ` whose complement
/// `φx = x/ψx` satisfies `φ(x∘φ⁻¹y)∘(ψx∘z) = x∘(y∘z)`. Returns the first
/// witness in lexicographic order of `ψ`.
pub fn is_left_s_loop(q: &Quasigroup) -> Result<Option<SLoopWitness>> {
    loop_identity(q)?;
    let n = q.order();
    for psi in automorphisms(q)? {
        let phi: Vec<Elem> = q.elements().map(|x| q.rdiv(x, psi.apply(x))).collect();
        if !is_bijection(&phi) {
            continue;
        }
        let phi = Perm::from_vec_unchecked(phi);
        let phi_inv = phi.inverse();
        let ok = all3(n, |x, y, z| {
            let lhs = q.mul(phi.apply(q.mul(x, phi_inv.apply(y))), q.mul(psi.apply(x), z));
            lhs == q.mul(x, q.mul(y, z))
        });
        if ok {
            return Ok(Some(SLoopWitness { psi, phi }));
        }
    }
    Ok(None)
}

/// The four Sushkevich postulates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Postulate {
    /// `xy·z = x·(y∘z)`
    A,
    /// `x·yz = (x∘y)·z`
    AStar,
    /// `xy·z = x·yδ(z)`
    B,
    /// `x·yz = (δx·y)·z`
    BStar,
}

impl FromStr for Postulate {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Postulate, String> {
        match s {
            "A" => Ok(Postulate::A),
            "A*" => Ok(Postulate::AStar),
            "B" => Ok(Postulate::B),
            "B*" => Ok(Postulate::BStar),
            _ => Err(format!("unknown postulate `{s}`")),
        }
    }
}

/// Witness of a Sushkevich postulate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum PostulateWitness {
    Operation(Quasigroup),
    Map(Perm),
}

pub fn sushkevich_postulate(q: &Quasigroup, variant: Postulate) -> Option<PostulateWitness> {
    let n = q.order();
    let m = |x, y| q.mul(x, y);
    match variant {
        Postulate::A => {
            let op = Quasigroup::from_fn(n, |y, z| q.ldiv(0, m(m(0, y), z))).ok()?;
            all3(n, |x, y, z| m(m(x, y), z) == m(x, op.mul(y, z))).then_some(PostulateWitness::Operation(op))
        }
        Postulate::AStar => {
            let op = Quasigroup::from_fn(n, |x, y| q.rdiv(m(x, m(y, 0)), 0)).ok()?;
            all3(n, |x, y, z| m(x, m(y, z)) == m(op.mul(x, y), z)).then_some(PostulateWitness::Operation(op))
        }
        Postulate::B => {
            let delta: Vec<Elem> = (0..n).map(|z| q.ldiv(0, q.ldiv(0, m(m(0, 0), z)))).collect();
            let ok = all3(n, |x, y, z| m(m(x, y), z) == m(x, m(y, delta[z])));
            (ok && is_bijection(&delta)).then(|| PostulateWitness::Map(Perm::from_vec_unchecked(delta)))
        }
        Postulate::BStar => {
            let delta: Vec<Elem> = (0..n).map(|x| q.rdiv(q.rdiv(m(x, m(0, 0)), 0), 0)).collect();
            let ok = all3(n, |x, y, z| m(x, m(y, z)) == m(m(delta[x], y), z));
            (ok && is_bijection(&delta)).then(|| PostulateWitness::Map(Perm::from_vec_unchecked(delta)))
        }
    }
}

/// `x·y = αx + βy` over the group `(Q,+)`, the principal loop isotope at a
/// point `(a, a)`; the group identity is `a·a` and `α a` equals it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GroupIsotopeForm {
    pub group: Quasigroup,
    pub identity: Elem,
    pub alpha: Perm,
    pub beta: Perm,
    pub base_point: Elem,
    pub left_linear: bool,
    pub right_linear: bool,
}

impl GroupIsotopeForm {
    /// Recomputes `αx + βy` and compares with `q` cellwise.
    pub fn reproduces(&self, q: &Quasigroup) -> bool {
        all2(q.order(), |x, y| q.mul(x, y) == self.group.mul(self.alpha.apply(x), self.beta.apply(y)))
    }
}

pub fn group_isotope_form(q: &Quasigroup) -> Result<GroupIsotopeForm> {
    group_isotope_form_at(q, 0)
}

/// Principalizes at `(a, a)`: `x + y = R_a⁻¹x · L_a⁻¹y`, `α = R_a`, `β = L_a`.
pub fn group_isotope_form_at(q: &Quasigroup, a: Elem) -> Result<GroupIsotopeForm> {
    let group = lp_isotope(q, a, a);
    if !group.is_associative() {
        return Err(Error::NotGroupIsotope);
    }
    let alpha = q.translation(TranslationKind::R, a);
    let beta = q.translation(TranslationKind::L, a);
    let left_linear = is_automorphism(&group, &alpha);
    let right_linear = is_automorphism(&group, &beta);
    Ok(GroupIsotopeForm {
        identity: q.mul(a, a),
        group,
        alpha,
        beta,
        base_point: a,
        left_linear,
        right_linear,
    })
}
