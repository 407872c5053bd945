//! Isotopy and isostrophy algebra, LP-isotopes, autotopism and automorphism
//! search, endomorphisms and their image chains.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::table::{image, Elem, LocalMapKind, Parastrophy, Quasigroup};

/// Default order bound for the autotopism and automorphism searches.
pub const DEFAULT_MORPHISM_BOUND: usize = 10;

/// An isotopy `(α, β, γ)` acting by `(x, y) ↦ γ⁻¹(αx · βy)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Isotopy {
    pub components: [Perm; 3],
}

impl Isotopy {
    pub fn new(alpha: Perm, beta: Perm, gamma: Perm) -> Isotopy {
        Isotopy { components: [alpha, beta, gamma] }
    }

    pub fn identity(n: usize) -> Isotopy {
        Isotopy::new(Perm::identity(n), Perm::identity(n), Perm::identity(n))
    }

    pub fn alpha(&self) -> &Perm {
        &self.components[0]
    }

    pub fn beta(&self) -> &Perm {
        &self.components[1]
    }

    pub fn gamma(&self) -> &Perm {
        &self.components[2]
    }

    pub fn is_identity(&self) -> bool {
        self.components.iter().all(Perm::is_identity)
    }

    /// The product `ST` with `(QS)T = Q(ST)`: componentwise `s_i ∘ t_i`.
    pub fn compose(&self, t: &Isotopy) -> Isotopy {
        Isotopy {
            components: [0, 1, 2].map(|i| self.components[i].compose(&t.components[i])),
        }
    }

    pub fn inverse(&self) -> Isotopy {
        Isotopy { components: [0, 1, 2].map(|i| self.components[i].inverse()) }
    }

    /// `T^σ`, chosen so that `(QT)^σ = Q^σ T^σ`: component `j` is `t_{σ(j)}`.
    pub fn permuted(&self, sigma: Parastrophy) -> Isotopy {
        let s = sigma.images();
        Isotopy { components: [0, 1, 2].map(|j| self.components[s[j]].clone()) }
    }
}

/// A parastrophy followed by an isotopy.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Isostrophy {
    pub sigma: Parastrophy,
    pub isotopy: Isotopy,
}

impl Isostrophy {
    pub fn identity(n: usize) -> Isostrophy {
        Isostrophy { sigma: Parastrophy::Id, isotopy: Isotopy::identity(n) }
    }
}

/// `(x, y) ↦ γ⁻¹(αx · βy)`.
pub fn apply_isotopy(q: &Quasigroup, t: &Isotopy) -> Quasigroup {
    let ginv = t.gamma().inverse();
    Quasigroup::from_fn(q.order(), |x, y| ginv.apply(q.mul(t.alpha().apply(x), t.beta().apply(y))))
        .expect("isotopes of quasigroups are quasigroups")
}

/// `x ∘ y = R_a⁻¹x · L_b⁻¹y`, a loop with identity `b·a`.
pub fn lp_isotope(q: &Quasigroup, a: Elem, b: Elem) -> Quasigroup {
    Quasigroup::from_fn(q.order(), |x, y| q.mul(q.rdiv(x, a), q.ldiv(b, y)))
        .expect("isotopes of quasigroups are quasigroups")
}

pub fn isostrophy_apply(q: &Quasigroup, s: &Isostrophy) -> Quasigroup {
    apply_isotopy(&q.parastrophe(s.sigma), &s.isotopy)
}

/// `(σ,S)(τ,T) = (στ, S^τ T)`; applying the product applies `s1` then `s2`.
pub fn isostrophy_compose(s1: &Isostrophy, s2: &Isostrophy) -> Isostrophy {
    Isostrophy {
        sigma: s1.sigma.compose(s2.sigma),
        isotopy: s1.isotopy.permuted(s2.sigma).compose(&s2.isotopy),
    }
}

/// `(σ,S)⁻¹ = (σ⁻¹, (S⁻¹)^{σ⁻¹})`.
pub fn isostrophy_invert(s: &Isostrophy) -> Isostrophy {
    let sinv = s.sigma.inverse();
    Isostrophy { sigma: sinv, isotopy: s.isotopy.inverse().permuted(sinv) }
}

pub fn is_endomorphism(q: &Quasigroup, h: &[Elem]) -> bool {
    h.len() == q.order()
        && q.elements().all(|x| q.elements().all(|y| h[q.mul(x, y)] == q.mul(h[x], h[y])))
}

pub fn is_automorphism(q: &Quasigroup, p: &Perm) -> bool {
    is_endomorphism(q, p.images())
}

/// `map^k`.
pub fn map_power(map: &[Elem], k: usize) -> Vec<Elem> {
    let mut out: Vec<Elem> = (0..map.len()).collect();
    for _ in 0..k {
        out = out.iter().map(|&x| map[x]).collect();
    }
    out
}

fn check_bound(q: &Quasigroup, bound: usize) -> Result<()> {
    if q.order() > bound {
        return Err(Error::OrderBoundExceeded { order: q.order(), bound });
    }
    Ok(())
}

const UNSET: usize = usize::MAX;

/// All automorphisms, sorted lexicographically by images.
pub fn automorphisms(q: &Quasigroup) -> Result<Vec<Perm>> {
    automorphisms_within(q, DEFAULT_MORPHISM_BOUND)
}

pub fn automorphisms_within(q: &Quasigroup, bound: usize) -> Result<Vec<Perm>> {
    check_bound(q, bound)?;
    let n = q.order();
    let mut out: Vec<Perm> = (0..n)
        .into_par_iter()
        .flat_map_iter(|v| {
            let mut found = Vec::new();
            let mut img = vec![UNSET; n];
            let mut used = vec![false; n];
            if assign_aut(q, &mut img, &mut used, 0, v) {
                aut_search(q, img, used, &mut found);
            }
            found
        })
        .collect();
    out.sort();
    Ok(out)
}

fn assign_aut(q: &Quasigroup, img: &mut [usize], used: &mut [bool], x: Elem, v: Elem) -> bool {
    if used[v] {
        return false;
    }
    img[x] = v;
    used[v] = true;
    let n = q.order();
    loop {
        let mut changed = false;
        for a in 0..n {
            if img[a] == UNSET {
                continue;
            }
            for b in 0..n {
                if img[b] == UNSET {
                    continue;
                }
                let z = q.mul(a, b);
                let t = q.mul(img[a], img[b]);
                if img[z] == UNSET {
                    if used[t] {
                        return false;
                    }
                    img[z] = t;
                    used[t] = true;
                    changed = true;
                } else if img[z] != t {
                    return false;
                }
            }
        }
        if !changed {
            return true;
        }
    }
}

fn aut_search(q: &Quasigroup, img: Vec<usize>, used: Vec<bool>, found: &mut Vec<Perm>) {
    match img.iter().position(|&v| v == UNSET) {
        None => found.push(Perm::from_vec_unchecked(img)),
        Some(x) => {
            for v in 0..q.order() {
                let (mut i2, mut u2) = (img.clone(), used.clone());
                if assign_aut(q, &mut i2, &mut u2, x, v) {
                    aut_search(q, i2, u2, found);
                }
            }
        }
    }
}

#[derive(Clone)]
struct TopState {
    maps: [Vec<usize>; 3],
    used: [Vec<bool>; 3],
}

impl TopState {
    fn set(&mut self, c: usize, x: Elem, v: Elem) -> bool {
        if self.maps[c][x] == v {
            return true;
        }
        if self.maps[c][x] != UNSET || self.used[c][v] {
            return false;
        }
        self.maps[c][x] = v;
        self.used[c][v] = true;
        true
    }

    /// Closes the constraint `γ(x·y) = αx · βy` under "two known force the third".
    fn propagate(&mut self, q: &Quasigroup) -> bool {
        let n = q.order();
        loop {
            let mut changed = false;
            for x in 0..n {
                for y in 0..n {
                    let xy = q.mul(x, y);
                    let (a, b, c) = (self.maps[0][x], self.maps[1][y], self.maps[2][xy]);
                    let known = (a != UNSET) as u8 + (b != UNSET) as u8 + (c != UNSET) as u8;
                    match known {
                        3 => {
                            if q.mul(a, b) != c {
                                return false;
                            }
                        }
                        2 => {
                            let ok = if c == UNSET {
                                self.set(2, xy, q.mul(a, b))
                            } else if b == UNSET {
                                self.set(1, y, q.ldiv(a, c))
                            } else {
                                self.set(0, x, q.rdiv(c, b))
                            };
                            if !ok {
                                return false;
                            }
                            changed = true;
                        }
                        _ => {}
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }
}

/// The full autotopism group, sorted by `(α, β)`.
pub fn autotopisms(q: &Quasigroup) -> Result<Vec<Isotopy>> {
    autotopisms_within(q, DEFAULT_MORPHISM_BOUND)
}

pub fn autotopisms_within(q: &Quasigroup, bound: usize) -> Result<Vec<Isotopy>> {
    check_bound(q, bound)?;
    let n = q.order();
    let empty = TopState {
        maps: [vec![UNSET; n], vec![UNSET; n], vec![UNSET; n]],
        used: [vec![false; n], vec![false; n], vec![false; n]],
    };
    let mut out: Vec<Isotopy> = (0..n)
        .into_par_iter()
        .flat_map_iter(|v| {
            let mut found = Vec::new();
            let mut st = empty.clone();
            if st.set(0, 0, v) && st.propagate(q) {
                top_search(q, st, &mut found);
            }
            found
        })
        .collect();
    out.sort();
    Ok(out)
}

fn top_search(q: &Quasigroup, st: TopState, found: &mut Vec<Isotopy>) {
    let next = (0..3).find_map(|c| st.maps[c].iter().position(|&v| v == UNSET).map(|x| (c, x)));
    match next {
        None => {
            let [a, b, c] = st.maps;
            found.push(Isotopy::new(
                Perm::from_vec_unchecked(a),
                Perm::from_vec_unchecked(b),
                Perm::from_vec_unchecked(c),
            ));
        }
        Some((c, x)) => {
            for v in 0..q.order() {
                let mut s2 = st.clone();
                if s2.set(c, x, v) && s2.propagate(q) {
                    top_search(q, s2, found);
                }
            }
        }
    }
}

/// The descending image chain `Q ⊇ h(Q) ⊇ h²(Q) ⊇ …` of an endomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EndomorphismChain {
    pub kind: Option<LocalMapKind>,
    /// `images[i] = h^i(Q)` as sorted element lists, strictly descending.
    pub images: Vec<Vec<Elem>>,
    /// Least `m` with `h^m(Q) = h^{m+1}(Q)`.
    pub stabilization_index: usize,
}

impl EndomorphismChain {
    pub fn stable_image(&self) -> &[Elem] {
        &self.images[self.stabilization_index]
    }
}

pub fn endomorphism_chain(q: &Quasigroup, kind: LocalMapKind) -> Result<EndomorphismChain> {
    let mut chain = image_chain(q, &q.local_map(kind))?;
    chain.kind = Some(kind);
    Ok(chain)
}

/// Image chain of an arbitrary endomorphism `h`.
pub fn image_chain(q: &Quasigroup, h: &[Elem]) -> Result<EndomorphismChain> {
    if !is_endomorphism(q, h) {
        return Err(Error::NotAnEndomorphism);
    }
    let mut images = vec![q.elements().collect::<Vec<_>>()];
    loop {
        let last = images.last().expect("chain is nonempty");
        let next = image(&last.iter().map(|&x| h[x]).collect::<Vec<_>>());
        if &next == last {
            break;
        }
        images.push(next);
    }
    let m = images.len() - 1;
    Ok(EndomorphismChain { kind: None, images, stabilization_index: m })
}
