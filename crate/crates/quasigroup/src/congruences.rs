//! Partitions as congruences: testing, generation, enumeration, kernels,
//! quotients, simplicity, admissibility and relation composition.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::morphisms::is_endomorphism;
use crate::perm::Perm;
use crate::table::{Elem, Quasigroup};

/// Default order bound for [`all_congruences`].
pub const DEFAULT_CONGRUENCE_BOUND: usize = 12;

/// A partition of `{0..n-1}` in canonical form: blocks are numbered in order
/// of their least element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Partition {
    block_of: Vec<usize>,
}

impl Partition {
    /// Canonicalizes an arbitrary labelling.
    pub fn from_labels(labels: &[usize]) -> Partition {
        let mut rename = std::collections::HashMap::new();
        let block_of = labels
            .iter()
            .map(|l| {
                let next = rename.len();
                *rename.entry(*l).or_insert(next)
            })
            .collect();
        Partition { block_of }
    }

    pub fn from_blocks(n: usize, blocks: &[Vec<Elem>]) -> Result<Partition> {
        let mut labels = vec![usize::MAX; n];
        for (i, b) in blocks.iter().enumerate() {
            for &x in b {
                if x >= n || labels[x] != usize::MAX {
                    return Err(Error::InvalidPermutation(format!("blocks do not partition 0..{n}")));
                }
                labels[x] = i;
            }
        }
        if labels.contains(&usize::MAX) {
            return Err(Error::InvalidPermutation(format!("blocks do not cover 0..{n}")));
        }
        Ok(Partition::from_labels(&labels))
    }

    pub fn diagonal(n: usize) -> Partition {
        Partition { block_of: (0..n).collect() }
    }

    pub fn universal(n: usize) -> Partition {
        Partition { block_of: vec![0; n] }
    }

    pub fn len(&self) -> usize {
        self.block_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block_of.is_empty()
    }

    #[inline]
    pub fn block_of(&self, x: Elem) -> usize {
        self.block_of[x]
    }

    #[inline]
    pub fn related(&self, x: Elem, y: Elem) -> bool {
        self.block_of[x] == self.block_of[y]
    }

    pub fn num_blocks(&self) -> usize {
        self.block_of.iter().max().map_or(0, |m| m + 1)
    }

    pub fn blocks(&self) -> Vec<Vec<Elem>> {
        let mut out = vec![Vec::new(); self.num_blocks()];
        for (x, &b) in self.block_of.iter().enumerate() {
            out[b].push(x);
        }
        out
    }

    pub fn is_diagonal(&self) -> bool {
        self.num_blocks() == self.len()
    }

    pub fn is_universal(&self) -> bool {
        self.num_blocks() <= 1
    }

    /// Intersection of equivalences.
    pub fn meet(&self, other: &Partition) -> Partition {
        let pairs: Vec<(usize, usize)> = self.block_of.iter().copied().zip(other.block_of.iter().copied()).collect();
        let labels: Vec<usize> = pairs.iter().map(|&(a, b)| a * other.len().max(1) + b).collect();
        Partition::from_labels(&labels)
    }

    pub fn as_relation(&self) -> Relation {
        let n = self.len();
        let mut r = Relation::empty(n);
        for x in 0..n {
            for y in 0..n {
                if self.related(x, y) {
                    r.insert(x, y);
                }
            }
        }
        r
    }
}

/// A binary relation on `{0..n-1}` as a dense bit matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    n: usize,
    bits: Vec<bool>,
}

impl Relation {
    pub fn empty(n: usize) -> Relation {
        Relation { n, bits: vec![false; n * n] }
    }

    pub fn insert(&mut self, a: Elem, b: Elem) {
        self.bits[a * self.n + b] = true;
    }

    pub fn contains(&self, a: Elem, b: Elem) -> bool {
        self.bits[a * self.n + b]
    }

    pub fn pairs(&self) -> BTreeSet<(Elem, Elem)> {
        (0..self.n)
            .flat_map(|a| (0..self.n).map(move |b| (a, b)))
            .filter(|&(a, b)| self.contains(a, b))
            .collect()
    }

    pub fn is_universal(&self) -> bool {
        self.bits.iter().all(|&b| b)
    }

    /// Equal to `p` viewed as a set of pairs.
    pub fn equals_partition(&self, p: &Partition) -> bool {
        *self == p.as_relation()
    }
}

/// `(a,b) ∈ φ∘ψ` iff some `c` has `a φ c` and `c ψ b`.
pub fn compose_relations(phi: &Partition, psi: &Partition) -> Relation {
    let n = phi.len();
    let mut r = Relation::empty(n);
    for a in 0..n {
        for c in 0..n {
            if phi.related(a, c) {
                for b in 0..n {
                    if psi.related(c, b) {
                        r.insert(a, b);
                    }
                }
            }
        }
    }
    r
}

/// A partition certified compatible with `·`, `\` and `/`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Congruence {
    pub partition: Partition,
    pub normal: bool,
}

impl Congruence {
    /// Certifies `p` on `q`; `None` if it is not a congruence.
    pub fn certify(q: &Quasigroup, p: Partition) -> Option<Congruence> {
        if !is_algebra_congruence(q, &p) {
            return None;
        }
        let normal = is_congruence(q, &p, Mode::Normal);
        Some(Congruence { partition: p, normal })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Mode {
    /// `xθy ⇒ (z·x)θ(z·y) ∧ (x·z)θ(y·z)`.
    Plain,
    /// Plain plus the cancellation implications `(z·x)θ(z·y) ⇒ xθy` and
    /// `(x·z)θ(y·z) ⇒ xθy`.
    Normal,
}

pub fn is_congruence(q: &Quasigroup, p: &Partition, mode: Mode) -> bool {
    let n = q.order();
    let plain = (0..n).all(|x| {
        (0..n).filter(|&y| y > x && p.related(x, y)).all(|y| {
            (0..n).all(|z| p.related(q.mul(z, x), q.mul(z, y)) && p.related(q.mul(x, z), q.mul(y, z)))
        })
    });
    if !plain || mode == Mode::Plain {
        return plain;
    }
    (0..n).all(|x| {
        (0..n).filter(|&y| y > x && !p.related(x, y)).all(|y| {
            (0..n).all(|z| !p.related(q.mul(z, x), q.mul(z, y)) && !p.related(q.mul(x, z), q.mul(y, z)))
        })
    })
}

/// Compatibility with all six translation families `z·, ·z, z\, \z, z/, /z`.
pub fn is_algebra_congruence(q: &Quasigroup, p: &Partition) -> bool {
    let n = q.order();
    (0..n).all(|x| {
        (0..n).filter(|&y| y > x && p.related(x, y)).all(|y| {
            (0..n).all(|z| {
                p.related(q.mul(z, x), q.mul(z, y))
                    && p.related(q.mul(x, z), q.mul(y, z))
                    && p.related(q.ldiv(z, x), q.ldiv(z, y))
                    && p.related(q.ldiv(x, z), q.ldiv(y, z))
                    && p.related(q.rdiv(z, x), q.rdiv(z, y))
                    && p.related(q.rdiv(x, z), q.rdiv(y, z))
            })
        })
    })
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n).collect() }
    }

    fn from_partition(p: &Partition) -> UnionFind {
        let mut uf = UnionFind::new(p.len());
        for block in p.blocks() {
            for w in block.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        uf
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        self.parent[hi] = lo;
        true
    }

    fn partition(&mut self) -> Partition {
        let labels: Vec<usize> = (0..self.parent.len()).map(|x| self.find(x)).collect();
        Partition::from_labels(&labels)
    }
}

/// Closes the equivalence in `uf` under all six translation families.
fn close(q: &Quasigroup, uf: &mut UnionFind) -> Partition {
    let n = q.order();
    loop {
        let mut changed = false;
        for x in 0..n {
            let r = uf.find(x);
            if r == x {
                continue;
            }
            for z in 0..n {
                changed |= uf.union(q.mul(z, x), q.mul(z, r));
                changed |= uf.union(q.mul(x, z), q.mul(r, z));
                changed |= uf.union(q.ldiv(z, x), q.ldiv(z, r));
                changed |= uf.union(q.ldiv(x, z), q.ldiv(r, z));
                changed |= uf.union(q.rdiv(z, x), q.rdiv(z, r));
                changed |= uf.union(q.rdiv(x, z), q.rdiv(r, z));
            }
        }
        if !changed {
            return uf.partition();
        }
    }
}

fn certified(q: &Quasigroup, p: Partition) -> Congruence {
    Congruence::certify(q, p).expect("closure under all translations yields a congruence")
}

/// The least congruence containing `(a, b)`.
pub fn principal_congruence(q: &Quasigroup, a: Elem, b: Elem) -> Congruence {
    let mut uf = UnionFind::new(q.order());
    uf.union(a, b);
    certified(q, close(q, &mut uf))
}

/// The least congruence containing both.
pub fn join(q: &Quasigroup, a: &Partition, b: &Partition) -> Congruence {
    let mut uf = UnionFind::from_partition(a);
    for block in b.blocks() {
        for w in block.windows(2) {
            uf.union(w[0], w[1]);
        }
    }
    certified(q, close(q, &mut uf))
}

/// The least congruence whose classes contain every given pair.
pub fn generated_congruence(q: &Quasigroup, pairs: &[(Elem, Elem)]) -> Congruence {
    let mut uf = UnionFind::new(q.order());
    for &(a, b) in pairs {
        uf.union(a, b);
    }
    certified(q, close(q, &mut uf))
}

fn check_bound(q: &Quasigroup, bound: usize) -> Result<()> {
    if q.order() > bound {
        return Err(Error::OrderBoundExceeded { order: q.order(), bound });
    }
    Ok(())
}

pub fn all_congruences(q: &Quasigroup) -> Result<Vec<Congruence>> {
    all_congruences_within(q, DEFAULT_CONGRUENCE_BOUND)
}

/// All congruences, ordered by canonical partition: principal congruences
/// for every pair, closed under joins.
pub fn all_congruences_within(q: &Quasigroup, bound: usize) -> Result<Vec<Congruence>> {
    check_bound(q, bound)?;
    let n = q.order();
    let pairs: Vec<(Elem, Elem)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let principals: BTreeSet<Partition> =
        pairs.par_iter().map(|&(a, b)| principal_congruence(q, a, b).partition).collect();
    let mut all: BTreeSet<Partition> = principals.clone();
    all.insert(Partition::diagonal(n));
    let mut frontier: Vec<Partition> = all.iter().cloned().collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for p in &frontier {
            for g in &principals {
                let j = join(q, p, g).partition;
                if all.insert(j.clone()) {
                    next.push(j);
                }
            }
        }
        frontier = next;
    }
    Ok(all.into_iter().map(|p| certified(q, p)).collect())
}

/// Every partition of `{0..n-1}` in canonical form (restricted growth strings).
pub fn all_partitions(n: usize) -> Vec<Partition> {
    fn rec(labels: &mut Vec<usize>, max: usize, n: usize, out: &mut Vec<Partition>) {
        if labels.len() == n {
            out.push(Partition { block_of: labels.clone() });
            return;
        }
        let limit = if labels.is_empty() { 0 } else { max + 1 };
        for l in 0..=limit {
            labels.push(l);
            rec(labels, max.max(l), n, out);
            labels.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), 0, n, &mut out);
    out
}

/// Brute-force oracle: filter all partitions. Only sensible for small orders.
pub fn all_congruences_brute(q: &Quasigroup) -> Vec<Congruence> {
    let mut v: Vec<Congruence> = all_partitions(q.order())
        .into_iter()
        .filter(|p| is_congruence(q, p, Mode::Plain))
        .map(|p| certified(q, p))
        .collect();
    v.sort();
    v
}

pub fn kernel_congruence(q: &Quasigroup, h: &[Elem]) -> Result<Congruence> {
    if !is_endomorphism(q, h) {
        return Err(Error::NotAnEndomorphism);
    }
    Congruence::certify(q, Partition::from_labels(h))
        .ok_or_else(|| Error::InternalCheckFailed("kernel of an endomorphism is not a congruence".into()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct QuotientResult {
    pub quotient: Quasigroup,
    /// Least element of each block, indexed by block id.
    pub class_representative: Vec<Elem>,
}

pub fn quotient(q: &Quasigroup, theta: &Congruence) -> QuotientResult {
    let p = &theta.partition;
    let reps: Vec<Elem> = p.blocks().iter().map(|b| b[0]).collect();
    let quotient = Quasigroup::from_fn(reps.len(), |i, j| p.block_of(q.mul(reps[i], reps[j])))
        .expect("finite homomorphic images of quasigroups are quasigroups");
    QuotientResult { quotient, class_representative: reps }
}

pub fn is_simple(q: &Quasigroup) -> Result<bool> {
    is_simple_within(q, DEFAULT_CONGRUENCE_BOUND)
}

pub fn is_simple_within(q: &Quasigroup, bound: usize) -> Result<bool> {
    Ok(all_congruences_within(q, bound)?.len() <= 2)
}

/// `xθy` implies `αx θ αy` and `α⁻¹x θ α⁻¹y`.
pub fn is_admissible(theta: &Partition, alpha: &Perm) -> bool {
    let inv = alpha.inverse();
    let n = theta.len();
    (0..n).all(|x| {
        (0..n).filter(|&y| theta.related(x, y)).all(|y| {
            theta.related(alpha.apply(x), alpha.apply(y)) && theta.related(inv.apply(x), inv.apply(y))
        })
    })
}

/// True iff only the diagonal and universal congruences are admissible under
/// every listed permutation.
pub fn is_simple_relative_to(q: &Quasigroup, perms: &[&Perm], bound: usize) -> Result<bool> {
    Ok(all_congruences_within(q, bound)?
        .iter()
        .filter(|c| !c.partition.is_diagonal() && !c.partition.is_universal())
        .all(|c| perms.iter().any(|p| !is_admissible(&c.partition, p))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::cyclic;
    use crate::table::TranslationKind;

    fn z4_halves() -> Partition {
        Partition::from_blocks(4, &[vec![0, 2], vec![1, 3]]).unwrap()
    }

    #[test]
    fn z4_coset_congruence() {
        let z4 = cyclic(4);
        assert!(is_congruence(&z4, &z4_halves(), Mode::Plain));
        assert!(is_congruence(&z4, &z4_halves(), Mode::Normal));
        assert!(is_congruence(&z4, &Partition::diagonal(4), Mode::Normal));
        let bad = Partition::from_blocks(4, &[vec![0, 1], vec![2, 3]]).unwrap();
        assert!(!is_congruence(&z4, &bad, Mode::Plain));
    }

    #[test]
    fn principal() {
        let z4 = cyclic(4);
        assert!(principal_congruence(&z4, 1, 1).partition.is_diagonal());
        assert_eq!(principal_congruence(&z4, 0, 2).partition, z4_halves());
        assert!(principal_congruence(&cyclic(5), 0, 1).partition.is_universal());
    }

    #[test]
    fn lattice_counts() {
        assert_eq!(all_congruences(&cyclic(4)).unwrap().len(), 3);
        assert_eq!(all_congruences(&cyclic(5)).unwrap().len(), 2);
        assert_eq!(all_congruences(&cyclic(1)).unwrap().len(), 1);
        assert_eq!(all_partitions(4).len(), 15);
        assert_eq!(all_partitions(5).len(), 52);
        assert_eq!(all_congruences_brute(&cyclic(4)).len(), 3);
        assert_eq!(all_congruences_brute(&cyclic(5)).len(), 2);
    }

    #[test]
    fn kernels() {
        let z4 = cyclic(4);
        let k = kernel_congruence(&z4, &[0, 2, 0, 2]).unwrap();
        assert_eq!(k.partition, z4_halves());
        assert!(kernel_congruence(&z4, &[0, 1, 2, 3]).unwrap().partition.is_diagonal());
        let z6m = Quasigroup::from_fn(6, |x, y| (x + 6 - y) % 6).unwrap();
        let f = z6m.local_map(crate::table::LocalMapKind::F);
        assert_eq!(f, vec![0, 2, 4, 0, 2, 4]);
        let k = kernel_congruence(&z6m, &f).unwrap();
        assert_eq!(k.partition.blocks(), vec![vec![0, 3], vec![1, 4], vec![2, 5]]);
        let qr = quotient(&z6m, &k);
        assert_eq!(qr.quotient, Quasigroup::from_fn(3, |x, y| (x + 3 - y) % 3).unwrap());
    }

    #[test]
    fn quotients() {
        let z4 = cyclic(4);
        let theta = Congruence::certify(&z4, z4_halves()).unwrap();
        let qr = quotient(&z4, &theta);
        assert_eq!(qr.quotient, cyclic(2));
        assert_eq!(qr.class_representative, vec![0, 1]);
        let uni = Congruence::certify(&z4, Partition::universal(4)).unwrap();
        assert_eq!(quotient(&z4, &uni).quotient.order(), 1);
    }

    #[test]
    fn simplicity() {
        assert!(is_simple(&cyclic(5)).unwrap());
        assert!(!is_simple(&cyclic(4)).unwrap());
        assert!(is_simple(&cyclic(1)).unwrap());
        let q = Quasigroup::from_fn(7, |x, y| (2 * x + 3 * y) % 7).unwrap();
        assert!(is_simple(&q).unwrap());
    }

    #[test]
    fn admissibility() {
        let z4 = cyclic(4);
        let theta = z4_halves();
        assert!(is_admissible(&theta, &Perm::identity(4)));
        assert!(is_admissible(&theta, &z4.translation(TranslationKind::L, 1)));
        assert!(!is_admissible(&theta, &Perm::parse(4, "(0 1)").unwrap()));
    }

    #[test]
    fn relation_composition() {
        let theta = z4_halves();
        assert!(compose_relations(&theta, &Partition::diagonal(4)).equals_partition(&theta));
        let a = Partition::from_blocks(6, &[vec![0, 2, 4], vec![1, 3, 5]]).unwrap();
        let b = Partition::from_blocks(6, &[vec![0, 3], vec![1, 4], vec![2, 5]]).unwrap();
        let z6 = cyclic(6);
        assert!(Congruence::certify(&z6, a.clone()).is_some());
        assert!(Congruence::certify(&z6, b.clone()).is_some());
        assert_eq!(compose_relations(&a, &b), compose_relations(&b, &a));
        assert!(compose_relations(&a, &b).is_universal());
        assert!(a.meet(&b).is_diagonal());
    }
}
