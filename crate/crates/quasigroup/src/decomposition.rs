//! Direct-product decompositions of left/right F-, SM- and E-quasigroups and
//! commutative Moufang loops, classification of the simple members of those
//! classes, and the loop isotopes of the decomposition factors.
//!
//! Every structural claim is re-verified on the computed tables; a failure is
//! reported as [`Error::InternalCheckFailed`].

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::congruences::{
    all_congruences_within, compose_relations, generated_congruence, is_admissible, kernel_congruence, quotient,
    Congruence, Partition, QuotientResult, DEFAULT_CONGRUENCE_BOUND,
};
pub use crate::constructors::direct_product;
use crate::constructors::Side;
use crate::error::{Error, Result};
use crate::identities::{classify, holds, is_left_s_loop, loop_classify, group_isotope_form_at, Flag, SLoopWitness};
use crate::morphisms::{image_chain, is_automorphism, lp_isotope, map_power, EndomorphismChain};
use crate::perm::{is_bijection, Perm};
use crate::table::{is_constant, Elem, LocalMapKind, Parastrophy, Quasigroup, TranslationKind};

/// The classes handled by [`decompose`] and its companions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ClassSelector {
    #[serde(rename = "left-F")]
    LeftF,
    #[serde(rename = "right-F")]
    RightF,
    #[serde(rename = "left-SM")]
    LeftSM,
    #[serde(rename = "right-SM")]
    RightSM,
    #[serde(rename = "left-E")]
    LeftE,
    #[serde(rename = "right-E")]
    RightE,
    F,
    E,
    SM,
    CML,
}

impl ClassSelector {
    pub const ALL: [ClassSelector; 10] = [
        ClassSelector::LeftF,
        ClassSelector::RightF,
        ClassSelector::LeftSM,
        ClassSelector::RightSM,
        ClassSelector::LeftE,
        ClassSelector::RightE,
        ClassSelector::F,
        ClassSelector::E,
        ClassSelector::SM,
        ClassSelector::CML,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClassSelector::LeftF => "left-F",
            ClassSelector::RightF => "right-F",
            ClassSelector::LeftSM => "left-SM",
            ClassSelector::RightSM => "right-SM",
            ClassSelector::LeftE => "left-E",
            ClassSelector::RightE => "right-E",
            ClassSelector::F => "F",
            ClassSelector::E => "E",
            ClassSelector::SM => "SM",
            ClassSelector::CML => "CML",
        }
    }

    /// Whether `q` belongs to the class.
    pub fn contains(self, q: &Quasigroup) -> bool {
        let c = |flag| holds(q, flag);
        match self {
            ClassSelector::LeftF => c(Flag::LeftF),
            ClassSelector::RightF => c(Flag::RightF),
            ClassSelector::LeftSM => c(Flag::LeftSM),
            ClassSelector::RightSM => c(Flag::RightSM),
            ClassSelector::LeftE => c(Flag::LeftE),
            ClassSelector::RightE => c(Flag::RightE),
            ClassSelector::F => c(Flag::LeftF) && c(Flag::RightF),
            ClassSelector::E => c(Flag::LeftE) && c(Flag::RightE),
            ClassSelector::SM => c(Flag::LeftSM) && c(Flag::RightSM),
            ClassSelector::CML => loop_classify(q).map(|r| r.cml).unwrap_or(false),
        }
    }

    /// The one-sided classes making up a two-sided one, in decomposition order.
    fn sides(self) -> (ClassSelector, Option<ClassSelector>) {
        match self {
            ClassSelector::F => (ClassSelector::LeftF, Some(ClassSelector::RightF)),
            ClassSelector::E => (ClassSelector::LeftE, Some(ClassSelector::RightE)),
            ClassSelector::SM => (ClassSelector::LeftSM, Some(ClassSelector::RightSM)),
            ClassSelector::CML => (ClassSelector::LeftSM, None),
            one => (one, None),
        }
    }
}

impl fmt::Display for ClassSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClassSelector {
    type Err = Error;

    fn from_str(s: &str) -> Result<ClassSelector> {
        let key: String = s.chars().filter(|c| !matches!(c, '-' | '_' | ' ')).collect::<String>().to_lowercase();
        ClassSelector::ALL
            .into_iter()
            .find(|c| c.name().replace('-', "").to_lowercase() == key)
            .ok_or_else(|| Error::NotInClass(format!("unknown class selector `{s}`")))
    }
}

/// How the companion operation on `B` is built from `·` and the chain map `h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Companion {
    /// `x ⋆ y = x·h(y)`
    XHy,
    /// `x ⋆ y = h(x)·y`
    HxY,
    /// `x ⋆ y = h⁻¹(x·y)`
    HInv,
}

#[derive(Debug, Clone, Copy)]
struct OneSided {
    side: Side,
    map: LocalMapKind,
    companion: Companion,
    law: Flag,
    flag: Flag,
}

fn one_sided(cls: ClassSelector) -> OneSided {
    use ClassSelector as C;
    let (side, map, companion, law, flag) = match cls {
        C::LeftF => (Side::Left, LocalMapKind::E, Companion::XHy, Flag::LeftDistributive, Flag::LeftF),
        C::RightF => (Side::Right, LocalMapKind::F, Companion::HxY, Flag::RightDistributive, Flag::RightF),
        C::LeftSM => (Side::Left, LocalMapKind::S, Companion::HInv, Flag::LeftDistributive, Flag::LeftSM),
        C::RightSM => (Side::Right, LocalMapKind::S, Companion::HInv, Flag::RightDistributive, Flag::RightSM),
        C::LeftE => (Side::Left, LocalMapKind::F, Companion::HxY, Flag::LeftDistributive, Flag::LeftE),
        C::RightE => (Side::Right, LocalMapKind::E, Companion::XHy, Flag::RightDistributive, Flag::RightE),
        two => unreachable!("{two} is not one-sided"),
    };
    OneSided { side, map, companion, law, flag }
}

fn internal(msg: impl Into<String>) -> Error {
    Error::InternalCheckFailed(msg.into())
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(internal(msg()))
    }
}

fn ensure_member(q: &Quasigroup, cls: ClassSelector) -> Result<()> {
    if cls == ClassSelector::CML {
        return match loop_classify(q) {
            Ok(r) if r.cml => Ok(()),
            _ => Err(Error::NotCML),
        };
    }
    if cls.contains(q) {
        Ok(())
    } else {
        Err(Error::NotInClass(cls.name().to_string()))
    }
}

/// Witness of `Q ≅ A × B`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DecompositionResult {
    pub class: ClassSelector,
    pub side: Side,
    pub map: LocalMapKind,
    pub chain: EndomorphismChain,
    /// Stabilization index of the chain.
    pub m: usize,
    /// Kernel of `h^m`.
    pub delta: Congruence,
    /// `x ρ y` iff `B·x = B·y` (left) or `x·B = y·B` (right).
    pub rho: Congruence,
    /// `Q/ρ`, labelled by ρ-block.
    pub a: Quasigroup,
    /// Least element of each ρ-block.
    pub a_representatives: Vec<Elem>,
    /// The unique idempotent of `A`.
    pub a_idempotent: Elem,
    /// The stable image `h^m(Q)` as a subquasigroup.
    pub b: Quasigroup,
    /// Elements of `Q` forming `B`, sorted; `B`'s element `i` is `b_elements[i]`.
    pub b_elements: Vec<Elem>,
    pub companion_kind: Companion,
    /// The companion operation on `B`.
    pub companion: Quasigroup,
    /// The distributive law certified on the companion.
    pub companion_law: Flag,
    /// `iso[x] = (a, b)`; an isomorphism onto `A × B`.
    pub iso: Vec<(Elem, Elem)>,
    /// For two-sided classes: the other-side decompositions of `A` and `B`.
    pub refinement: Option<Box<Refinement>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Refinement {
    pub a: DecompositionResult,
    pub b: DecompositionResult,
}

impl DecompositionResult {
    /// `A × B` with pairs encoded as `a·|B| + b`.
    pub fn product(&self) -> Quasigroup {
        direct_product(&self.a, &self.b)
    }

    /// `iso` composed with the pair encoding of [`Self::product`].
    pub fn iso_encoded(&self) -> Vec<Elem> {
        let nb = self.b.order();
        self.iso.iter().map(|&(a, b)| a * nb + b).collect()
    }

    /// Checks that `iso` carries `Q` onto `A × B` cellwise.
    pub fn round_trip_exact(&self, q: &Quasigroup) -> bool {
        let enc = self.iso_encoded();
        let p = self.product();
        is_bijection(&enc)
            && enc.len() == p.order()
            && q.elements().all(|x| q.elements().all(|y| p.mul(enc[x], enc[y]) == enc[q.mul(x, y)]))
    }
}

/// Decomposes `q` according to the structure theorem of `cls`.
pub fn decompose(q: &Quasigroup, cls: ClassSelector) -> Result<DecompositionResult> {
    ensure_member(q, cls)?;
    let (first, second) = cls.sides();
    let mut result = decompose_side(q, first)?;
    result.class = cls;
    if let Some(other) = second {
        let a = decompose_side(&result.a, other)?;
        let b = decompose_side(&result.b, other)?;
        result.refinement = Some(Box::new(Refinement { a, b }));
    }
    Ok(result)
}

fn decompose_side(q: &Quasigroup, cls: ClassSelector) -> Result<DecompositionResult> {
    let spec = one_sided(cls);
    let n = q.order();
    let h = q.local_map(spec.map);
    let chain = image_chain(q, &h).map_err(|_| internal(format!("{} is not an endomorphism", spec.map.name())))?;
    let m = chain.stabilization_index;
    let b_elements = chain.stable_image().to_vec();
    let hm = map_power(&h, m);
    let delta = kernel_congruence(q, &hm)?;

    let mut cosets: HashMap<Vec<Elem>, usize> = HashMap::new();
    let labels: Vec<usize> = q
        .elements()
        .map(|x| {
            let mut coset: Vec<Elem> = b_elements
                .iter()
                .map(|&b| match spec.side {
                    Side::Left => q.mul(b, x),
                    Side::Right => q.mul(x, b),
                })
                .collect();
            coset.sort_unstable();
            let next = cosets.len();
            *cosets.entry(coset).or_insert(next)
        })
        .collect();
    let rho = Congruence::certify(q, Partition::from_labels(&labels)).ok_or_else(|| internal("ρ is not a congruence"))?;

    check(delta.partition.meet(&rho.partition).is_diagonal(), || "δ ∩ ρ is not the diagonal".into())?;
    check(compose_relations(&delta.partition, &rho.partition).is_universal(), || "δ∘ρ is not universal".into())?;
    check(compose_relations(&rho.partition, &delta.partition).is_universal(), || "ρ∘δ is not universal".into())?;

    let QuotientResult { quotient: a, class_representative: a_representatives } = quotient(q, &rho);
    let idempotents = a.idempotents();
    check(idempotents.len() == 1, || format!("factor A has {} idempotents", idempotents.len()))?;

    let (b, _) = q.subquasigroup(&b_elements).ok_or_else(|| internal("stable image is not a subquasigroup"))?;
    let mut pos = vec![usize::MAX; n];
    for (i, &x) in b_elements.iter().enumerate() {
        pos[x] = i;
    }
    let h_on_b: Vec<Elem> = b_elements.iter().map(|&x| pos[h[x]]).collect();
    check(h_on_b.iter().all(|&i| i != usize::MAX) && is_bijection(&h_on_b), || {
        format!("{} restricted to B is not a bijection", spec.map.name())
    })?;
    let mut hm_inv = vec![0; b_elements.len()];
    for (i, &x) in b_elements.iter().enumerate() {
        hm_inv[pos[hm[x]]] = i;
    }
    let mut h_inv = vec![0; b_elements.len()];
    for (i, &j) in h_on_b.iter().enumerate() {
        h_inv[j] = i;
    }

    let iso: Vec<(Elem, Elem)> = q.elements().map(|x| (rho.partition.block_of(x), hm_inv[pos[hm[x]]])).collect();

    let companion = Quasigroup::from_fn(b.order(), |x, y| match spec.companion {
        Companion::XHy => b.mul(x, h_on_b[y]),
        Companion::HxY => b.mul(h_on_b[x], y),
        Companion::HInv => h_inv[b.mul(x, y)],
    })
    .map_err(|_| internal("companion operation is not a quasigroup"))?;

    let result = DecompositionResult {
        class: cls,
        side: spec.side,
        map: spec.map,
        chain,
        m,
        delta,
        rho,
        a_idempotent: idempotents[0],
        a,
        a_representatives,
        b,
        b_elements,
        companion_kind: spec.companion,
        companion,
        companion_law: spec.law,
        iso,
        refinement: None,
    };
    check(result.round_trip_exact(q), || "iso is not an isomorphism onto A × B".into())?;
    check(holds(&result.companion, spec.law), || format!("companion on B is not {}", spec.law.name()))?;
    check(holds(&result.a, spec.flag) && holds(&result.b, spec.flag), || {
        format!("a factor is not {}", spec.flag.name())
    })?;
    Ok(result)
}

/// The base algebra of a simple-classification form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BaseKind {
    Group,
    AbelianGroup,
    LeftDistributive,
    RightDistributive,
    Distributive,
}

/// A simple member of a class written as `x·y = outer(αx ∗ βy)` over a base
/// algebra `∗`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SimpleClassification {
    pub class: ClassSelector,
    /// Case label from the classification list, `"i"` to `"iv"`.
    pub case_tag: &'static str,
    /// The form in words, e.g. `x·y = x ∘ ψy`.
    pub form: &'static str,
    pub base_kind: BaseKind,
    pub base: Quasigroup,
    /// Identity of the base group; the principal point for distributive bases.
    pub base_point: Elem,
    pub alpha: Perm,
    pub beta: Perm,
    pub outer: Perm,
    pub phi: Option<Perm>,
    pub psi: Option<Perm>,
    pub e: Vec<Elem>,
    pub f: Vec<Elem>,
    pub s: Vec<Elem>,
    pub associative: bool,
    pub medial: bool,
}

impl SimpleClassification {
    /// Rebuilds the table from the form.
    pub fn reconstruct(&self) -> Quasigroup {
        Quasigroup::from_fn(self.base.order(), |x, y| {
            self.outer.apply(self.base.mul(self.alpha.apply(x), self.beta.apply(y)))
        })
        .expect("isotopes of quasigroups are quasigroups")
    }

    pub fn reproduces(&self, q: &Quasigroup) -> bool {
        self.reconstruct() == *q
    }
}

enum MapShape {
    Constant(Elem),
    Permutation(Perm),
}

fn shape(map: &[Elem]) -> Result<MapShape> {
    if is_constant(map) {
        Ok(MapShape::Constant(map[0]))
    } else if is_bijection(map) {
        Ok(MapShape::Permutation(Perm::from_vec_unchecked(map.to_vec())))
    } else {
        Err(internal("a local map of a simple quasigroup is neither constant nor a permutation"))
    }
}

/// `true` iff every proper nontrivial congruence of `base` fails admissibility
/// for some map in `maps`.
fn relatively_simple(base: &Quasigroup, maps: &[&Perm]) -> Result<bool> {
    Ok(all_congruences_within(base, DEFAULT_CONGRUENCE_BOUND.max(base.order()))?
        .iter()
        .filter(|c| !c.partition.is_diagonal() && !c.partition.is_universal())
        .all(|c| maps.iter().any(|p| !is_admissible(&c.partition, p))))
}

struct Builder<'a> {
    q: &'a Quasigroup,
    cls: ClassSelector,
    e: Vec<Elem>,
    f: Vec<Elem>,
    s: Vec<Elem>,
}

impl Builder<'_> {
    /// Group forms: principalize at `point` so that `x·y = αx + βy`.
    fn group_form(
        &self,
        case_tag: &'static str,
        form: &'static str,
        point: Elem,
        abelian: bool,
        pick: impl FnOnce(&Perm, &Perm, &dyn Fn(Elem) -> Elem) -> Result<(Option<Perm>, Option<Perm>)>,
    ) -> Result<SimpleClassification> {
        let g = group_isotope_form_at(self.q, point).map_err(|_| internal("expected a group isotope"))?;
        let zero = g.identity;
        check(zero == point, || "principal point is not idempotent".into())?;
        let group = g.group.clone();
        let neg = |x: Elem| group.ldiv(x, zero);
        let (phi, psi) = pick(&g.alpha, &g.beta, &neg)?;
        if abelian {
            check(group.is_commutative(), || "base group is not abelian".into())?;
        }
        let maps: Vec<&Perm> = phi.iter().chain(psi.iter()).collect();
        check(relatively_simple(&group, &maps)?, || "base group is not simple relative to the form's maps".into())?;
        let kind = if group.is_commutative() { BaseKind::AbelianGroup } else { BaseKind::Group };
        self.finish(case_tag, form, kind, group, zero, g.alpha, g.beta, Perm::identity(self.q.order()), phi, psi)
    }

    /// Distributive forms `x ∘ ψy`, `φx ∘ y`, `φ(x ∘ y)`.
    #[allow(clippy::too_many_arguments)]
    fn distributive_form(
        &self,
        case_tag: &'static str,
        form: &'static str,
        base: Quasigroup,
        kind: BaseKind,
        alpha: Perm,
        beta: Perm,
        outer: Perm,
        twist: Perm,
        twist_is_phi: bool,
    ) -> Result<SimpleClassification> {
        let law_ok = match kind {
            BaseKind::LeftDistributive => holds(&base, Flag::LeftDistributive),
            BaseKind::RightDistributive => holds(&base, Flag::RightDistributive),
            _ => holds(&base, Flag::Distributive),
        };
        check(law_ok, || format!("base is not {kind:?}"))?;
        check(is_automorphism(&base, &twist), || "twist is not an automorphism of the base".into())?;
        check(relatively_simple(&base, &[&twist])?, || "base is not simple relative to the twist".into())?;
        let (phi, psi) = if twist_is_phi { (Some(twist), None) } else { (None, Some(twist)) };
        self.finish(case_tag, form, kind, base, 0, alpha, beta, outer, phi, psi)
    }

    #[allow(clippy::too_many_arguments)]
    fn finish(
        &self,
        case_tag: &'static str,
        form: &'static str,
        base_kind: BaseKind,
        base: Quasigroup,
        base_point: Elem,
        alpha: Perm,
        beta: Perm,
        outer: Perm,
        phi: Option<Perm>,
        psi: Option<Perm>,
    ) -> Result<SimpleClassification> {
        let out = SimpleClassification {
            class: self.cls,
            case_tag,
            form,
            base_kind,
            base,
            base_point,
            alpha,
            beta,
            outer,
            phi,
            psi,
            e: self.e.clone(),
            f: self.f.clone(),
            s: self.s.clone(),
            associative: self.q.is_associative(),
            medial: holds(self.q, Flag::Medial),
        };
        check(out.reproduces(self.q), || format!("case ({case_tag}) form does not reproduce the table"))?;
        Ok(out)
    }

    /// `x ⋆ y` built from `·` and a permutation `h`.
    fn companion(&self, kind: Companion, h: &Perm) -> Result<Quasigroup> {
        let q = self.q;
        let h_inv = h.inverse();
        Quasigroup::from_fn(q.order(), |x, y| match kind {
            Companion::XHy => q.mul(x, h.apply(y)),
            Companion::HxY => q.mul(h.apply(x), y),
            Companion::HInv => h_inv.apply(q.mul(x, y)),
        })
        .map_err(|_| internal("companion operation is not a quasigroup"))
    }
}

fn aut_of(group: &Quasigroup, p: &Perm, what: &str) -> Result<()> {
    check(is_automorphism(group, p), || format!("{what} is not an automorphism of the base group"))
}

/// Classifies a simple member of `cls` and reconstructs it from its form.
pub fn simple_classify(q: &Quasigroup, cls: ClassSelector) -> Result<SimpleClassification> {
    ensure_member(q, cls)?;
    if all_congruences_within(q, DEFAULT_CONGRUENCE_BOUND.max(q.order()))?.len() > 2 {
        return Err(Error::NotSimple);
    }
    let n = q.order();
    let b = Builder {
        q,
        cls,
        e: q.local_map(LocalMapKind::E),
        f: q.local_map(LocalMapKind::F),
        s: q.local_map(LocalMapKind::S),
    };
    let id = Perm::identity(n);
    use ClassSelector as C;
    match cls {
        C::LeftF => match shape(&b.e)? {
            MapShape::Constant(c) => b.group_form("i", "x·y = x + ψy", c, false, |alpha, beta, _| {
                check(alpha.is_identity(), || "e constant but not a right loop".into())?;
                Ok((None, Some(beta.clone())))
            })
            .and_then(|r| aut_of(&r.base, r.psi.as_ref().unwrap(), "ψ").map(|_| r)),
            MapShape::Permutation(e) => {
                let base = b.companion(Companion::XHy, &e)?;
                let psi = e.inverse();
                b.distributive_form("ii", "x·y = x ∘ ψy", base, BaseKind::LeftDistributive, id.clone(), psi.clone(), id, psi, false)
            }
        },
        C::RightF => match shape(&b.f)? {
            MapShape::Constant(c) => b.group_form("i", "x·y = φx + y", c, false, |alpha, beta, _| {
                check(beta.is_identity(), || "f constant but not a left loop".into())?;
                Ok((Some(alpha.clone()), None))
            })
            .and_then(|r| aut_of(&r.base, r.phi.as_ref().unwrap(), "φ").map(|_| r)),
            MapShape::Permutation(f) => {
                let base = b.companion(Companion::HxY, &f)?;
                let phi = f.inverse();
                b.distributive_form("ii", "x·y = φx ∘ y", base, BaseKind::RightDistributive, phi.clone(), id.clone(), id, phi, true)
            }
        },
        C::LeftSM | C::RightSM | C::SM | C::CML => {
            let left = matches!(cls, C::LeftSM | C::CML);
            match shape(&b.s)? {
                MapShape::Constant(c) => {
                    let form = if left { "x·y = −φx + φy" } else { "x·y = φx − φy" };
                    let abelian = cls == C::SM;
                    let r = b.group_form("i", form, c, abelian, |alpha, beta, neg| {
                        let (phi, other) = if left { (beta, alpha) } else { (alpha, beta) };
                        check(q.elements().all(|x| other.apply(x) == neg(phi.apply(x))), || {
                            "s constant but the form is not φ-antisymmetric".into()
                        })?;
                        Ok((Some(phi.clone()), None))
                    })?;
                    aut_of(&r.base, r.phi.as_ref().unwrap(), "φ")?;
                    Ok(r)
                }
                MapShape::Permutation(s) => {
                    let base = b.companion(Companion::HInv, &s)?;
                    let kind = match cls {
                        C::LeftSM => BaseKind::LeftDistributive,
                        C::RightSM => BaseKind::RightDistributive,
                        _ => BaseKind::Distributive,
                    };
                    b.distributive_form("ii", "x·y = φ(x ∘ y)", base, kind, id.clone(), id, s.clone(), s, true)
                }
            }
        }
        C::LeftE => match shape(&b.f)? {
            MapShape::Constant(c) => b.group_form("i", "x·y = αx + y", c, true, |alpha, beta, _| {
                check(beta.is_identity(), || "f constant but not a left loop".into())?;
                check(alpha.apply(c) == c, || "α does not fix 0".into())?;
                Ok((Some(alpha.clone()), None))
            }),
            MapShape::Permutation(f) => {
                let base = b.companion(Companion::HxY, &f)?;
                let phi = f.inverse();
                b.distributive_form("ii", "x·y = φx ∘ y", base, BaseKind::LeftDistributive, phi.clone(), id.clone(), id, phi, true)
            }
        },
        C::RightE => match shape(&b.e)? {
            MapShape::Constant(c) => b.group_form("i", "x·y = x + βy", c, true, |alpha, beta, _| {
                check(alpha.is_identity(), || "e constant but not a right loop".into())?;
                check(beta.apply(c) == c, || "β does not fix 0".into())?;
                Ok((None, Some(beta.clone())))
            }),
            MapShape::Permutation(e) => {
                let base = b.companion(Companion::XHy, &e)?;
                let psi = e.inverse();
                b.distributive_form("ii", "x·y = x ∘ ψy", base, BaseKind::RightDistributive, id.clone(), psi.clone(), id, psi, false)
            }
        },
        C::F | C::E => {
            let abelian_always = cls == C::E;
            match (shape(&b.e)?, shape(&b.f)?) {
                (MapShape::Constant(c), MapShape::Constant(_)) => {
                    check(q.is_group(), || "e and f constant but not a group".into())?;
                    let kind = if abelian_always { "x·y = x + y, abelian" } else { "x·y = x + y" };
                    b.group_form("i", kind, c, abelian_always, |_, _, _| Ok((None, None)))
                }
                (MapShape::Constant(c), MapShape::Permutation(_)) => {
                    let r = b.group_form("ii", "x·y = x + ψy", c, true, |alpha, beta, _| {
                        check(alpha.is_identity(), || "e constant but not a right loop".into())?;
                        Ok((None, Some(beta.clone())))
                    })?;
                    let psi = r.psi.clone().unwrap();
                    aut_of(&r.base, &psi, "ψ")?;
                    check(q.elements().all(|x| r.base.mul(b.f[x], psi.apply(x)) == x), || "fx + ψx ≠ x".into())?;
                    Ok(SimpleClassification { case_tag: if cls == C::E { "iii" } else { "ii" }, ..r })
                }
                (MapShape::Permutation(_), MapShape::Constant(c)) => {
                    let r = b.group_form("iii", "x·y = φx + y", c, true, |alpha, beta, _| {
                        check(beta.is_identity(), || "f constant but not a left loop".into())?;
                        Ok((Some(alpha.clone()), None))
                    })?;
                    let phi = r.phi.clone().unwrap();
                    aut_of(&r.base, &phi, "φ")?;
                    check(q.elements().all(|x| r.base.mul(phi.apply(x), b.e[x]) == x), || "φx + ex ≠ x".into())?;
                    Ok(SimpleClassification { case_tag: if cls == C::E { "ii" } else { "iii" }, ..r })
                }
                (MapShape::Permutation(e), MapShape::Permutation(_)) => {
                    let base = b.companion(Companion::XHy, &e)?;
                    let psi = e.inverse();
                    let r = b.distributive_form("iv", "x·y = x ∘ ψy", base, BaseKind::Distributive, id.clone(), psi.clone(), id, psi.clone(), false)?;
                    check(q.elements().all(|x| r.base.mul(b.f[x], psi.apply(x)) == x), || "fx ∘ ψx ≠ x".into())?;
                    Ok(r)
                }
            }
        }
    }
}

/// Loop isotopes of the two factors of a decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LoopStructureReport {
    pub class: ClassSelector,
    /// Right-hand classes are handled through the `(12)`-parastrophe; the
    /// tables below then belong to `Q^(12)`.
    pub via_parastrophe: bool,
    /// `x ⊕ y = x ∘ L_0⁻¹y` on factor `A` with `0` its idempotent.
    pub a_left_loop: Quasigroup,
    /// `x + y = R_0⁻¹x ⊕ y` on factor `A`.
    pub group_part: Quasigroup,
    pub group_part_associative: bool,
    pub group_part_commutative: bool,
    /// `x ◇ y = R_a⁻¹x ⋆ L_a⁻¹y` on the companion of `B`.
    pub s_loop_part: Quasigroup,
    pub s_loop_witness: Option<SLoopWitness>,
    pub s_loop_part_moufang: bool,
    /// Moufang flag of the LP-isotope of `Q` at `(0, 0)`; F only.
    pub full_lp_isotope_moufang: Option<bool>,
    /// `group_part × s_loop_part`.
    pub product_loop: Quasigroup,
}

impl LoopStructureReport {
    pub fn abelian_part(&self) -> bool {
        self.group_part_associative && self.group_part_commutative
    }
}

pub fn loop_isotope_structure(q: &Quasigroup, cls: ClassSelector) -> Result<LoopStructureReport> {
    loop_isotope_structure_within(q, cls, crate::morphisms::DEFAULT_MORPHISM_BOUND)
}

/// Builds and certifies the group and S-loop parts.
pub fn loop_isotope_structure_within(q: &Quasigroup, cls: ClassSelector, bound: usize) -> Result<LoopStructureReport> {
    if q.order() > bound {
        return Err(Error::OrderBoundExceeded { order: q.order(), bound });
    }
    ensure_member(q, cls)?;
    use ClassSelector as C;
    let (work, left_cls, via_parastrophe) = match cls {
        C::RightF => (q.parastrophe(Parastrophy::T12), C::LeftF, true),
        C::RightSM => (q.parastrophe(Parastrophy::T12), C::LeftSM, true),
        C::RightE => (q.parastrophe(Parastrophy::T12), C::LeftE, true),
        C::F => (q.clone(), C::LeftF, false),
        C::E => (q.clone(), C::LeftE, false),
        C::SM | C::CML => (q.clone(), C::LeftSM, false),
        one => (q.clone(), one, false),
    };
    let d = decompose_side(&work, left_cls)?;

    let z = d.a_idempotent;
    let lz_inv = d.a.translation(TranslationKind::LInv, z);
    let a_left_loop = Quasigroup::from_fn(d.a.order(), |x, y| d.a.mul(x, lz_inv.apply(y)))
        .expect("isotopes of quasigroups are quasigroups");
    let group_part = lp_isotope(&d.a, z, z);
    let group_part_associative = group_part.is_associative();
    let group_part_commutative = group_part.is_commutative();
    check(group_part_associative, || "group part is not associative".into())?;
    if matches!(cls, C::LeftE | C::RightE | C::E) {
        check(group_part_commutative, || "group part is not commutative".into())?;
    }

    let star = &d.companion;
    let idem = star.idempotents();
    check(!idem.is_empty(), || "companion has no idempotent".into())?;
    let s_loop_part = lp_isotope(star, idem[0], idem[0]);
    let s_loop_witness = is_left_s_loop(&s_loop_part)?;
    check(s_loop_witness.is_some(), || "B part is not a left S-loop".into())?;
    let s_loop_part_moufang = loop_classify(&s_loop_part)?.moufang;

    let full_lp_isotope_moufang = if cls == C::F {
        let full = loop_classify(&lp_isotope(q, 0, 0))?.moufang;
        check(full, || "LP-isotope of an F-quasigroup is not Moufang".into())?;
        check(s_loop_part_moufang, || "B part of an F-quasigroup is not Moufang".into())?;
        Some(full)
    } else {
        None
    };
    let product_loop = direct_product(&group_part, &s_loop_part);
    Ok(LoopStructureReport {
        class: cls,
        via_parastrophe,
        a_left_loop,
        group_part,
        group_part_associative,
        group_part_commutative,
        s_loop_part,
        s_loop_witness,
        s_loop_part_moufang,
        full_lp_isotope_moufang,
        product_loop,
    })
}

/// Structure report for a commutative Moufang loop.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CmlReport {
    pub decomposition: DecompositionResult,
    pub a_abelian_group: bool,
    /// Center of `Q`.
    pub center: Vec<Elem>,
    /// Center of the loop `B`, in `B`'s labels.
    pub center_of_b: Vec<Elem>,
    /// `iso(C(Q)) = A × C(B)`.
    pub center_splits: bool,
    /// `Q/C(Q)`.
    pub central_quotient: Quasigroup,
    pub quotient_exponent_three: bool,
    /// `s(x) = −x` on the quotient.
    pub s_is_negation: bool,
    /// `x ⋆ y = −x − y` on the quotient.
    pub steiner: Quasigroup,
    pub steiner_distributive: bool,
}

pub fn verify_cml_structure(q: &Quasigroup) -> Result<CmlReport> {
    let report = loop_classify(q).map_err(|_| Error::NotCML)?;
    if !report.cml {
        return Err(Error::NotCML);
    }
    let d = decompose(q, ClassSelector::CML)?;
    let a_abelian_group = d.a.is_group() && d.a.is_commutative();
    check(a_abelian_group, || "factor A is not an abelian group".into())?;

    let center = report.center.clone();
    let center_of_b = loop_classify(&d.b)?.center;
    let image: BTreeSet<(Elem, Elem)> = center.iter().map(|&c| d.iso[c]).collect();
    let expected: BTreeSet<(Elem, Elem)> =
        d.a.elements().flat_map(|a| center_of_b.iter().map(move |&b| (a, b))).collect();
    let center_splits = image == expected;
    check(center_splits, || "C(Q) is not A × C(B)".into())?;

    let zero = report.identity;
    let pairs: Vec<(Elem, Elem)> = center.iter().map(|&c| (c, zero)).collect();
    let theta = generated_congruence(q, &pairs);
    let zero_class: Vec<Elem> = q.elements().filter(|&x| theta.partition.related(x, zero)).collect();
    check(zero_class == center, || "center is not a congruence class".into())?;
    let central_quotient = quotient(q, &theta).quotient;
    let qc = &central_quotient;
    let qz = theta.partition.block_of(zero);
    let quotient_exponent_three = qc.elements().all(|x| qc.mul(x, qc.mul(x, x)) == qz);
    let neg = |x: Elem| qc.ldiv(x, qz);
    let s_is_negation = qc.elements().all(|x| qc.mul(x, x) == neg(x));
    check(quotient_exponent_three, || "Q/C is not of exponent 3".into())?;
    check(s_is_negation, || "s is not negation on Q/C".into())?;
    let steiner = Quasigroup::from_fn(qc.order(), |x, y| qc.mul(neg(x), neg(y)))
        .map_err(|_| internal("x ⋆ y = −x − y is not a quasigroup"))?;
    let steiner_distributive = holds(&steiner, Flag::TS) && holds(&steiner, Flag::Distributive);
    check(steiner_distributive, || "D is not a distributive Steiner quasigroup".into())?;
    Ok(CmlReport {
        decomposition: d,
        a_abelian_group,
        center,
        center_of_b,
        center_splits,
        central_quotient,
        quotient_exponent_three,
        s_is_negation,
        steiner,
        steiner_distributive,
    })
}

/// Flags of `q` relevant to the ten selectors.
pub fn member_classes(q: &Quasigroup) -> Vec<ClassSelector> {
    let r = classify(q);
    let mut out = Vec::new();
    let pairs = [
        (ClassSelector::LeftF, r.left_f),
        (ClassSelector::RightF, r.right_f),
        (ClassSelector::LeftSM, r.left_sm),
        (ClassSelector::RightSM, r.right_sm),
        (ClassSelector::LeftE, r.left_e),
        (ClassSelector::RightE, r.right_e),
        (ClassSelector::F, r.left_f && r.right_f),
        (ClassSelector::E, r.left_e && r.right_e),
        (ClassSelector::SM, r.left_sm && r.right_sm),
    ];
    for (c, ok) in pairs {
        if ok {
            out.push(c);
        }
    }
    if ClassSelector::CML.contains(q) {
        out.push(ClassSelector::CML);
    }
    out
}
