//! Cayley-table kernel: loading, validation, divisions, translations,
//! parastrophes and the local identity maps `e`, `f`, `s`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Perm;

/// An element of a finite carrier, always a canonical index in `0..n`.
pub type Elem = usize;

/// A certified finite quasigroup with eagerly built division tables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Quasigroup {
    n: usize,
    mul: Vec<Elem>,
    ldiv: Vec<Elem>,
    rdiv: Vec<Elem>,
}

/// One of the six elements of S3 acting on the argument/value positions
/// `(x1, x2, x3)` of `x1·x2 = x3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Parastrophy {
    #[serde(rename = "e")]
    Id,
    #[serde(rename = "(12)")]
    T12,
    #[serde(rename = "(13)")]
    T13,
    #[serde(rename = "(23)")]
    T23,
    #[serde(rename = "(123)")]
    C123,
    #[serde(rename = "(132)")]
    C132,
}

impl Parastrophy {
    pub const ALL: [Parastrophy; 6] = [
        Parastrophy::Id,
        Parastrophy::T12,
        Parastrophy::T13,
        Parastrophy::T23,
        Parastrophy::C123,
        Parastrophy::C132,
    ];

    /// Images of the positions `0, 1, 2` (positions 1, 2, 3 written 0-based).
    pub fn images(self) -> [usize; 3] {
        match self {
            Parastrophy::Id => [0, 1, 2],
            Parastrophy::T12 => [1, 0, 2],
            Parastrophy::T13 => [2, 1, 0],
            Parastrophy::T23 => [0, 2, 1],
            Parastrophy::C123 => [1, 2, 0],
            Parastrophy::C132 => [2, 0, 1],
        }
    }

    fn from_images(im: [usize; 3]) -> Parastrophy {
        Parastrophy::ALL
            .into_iter()
            .find(|p| p.images() == im)
            .expect("every bijection of 3 points is listed")
    }

    /// `self ∘ other` as maps on positions (apply `other` first).
    pub fn compose(self, other: Parastrophy) -> Parastrophy {
        let (a, b) = (self.images(), other.images());
        Parastrophy::from_images([a[b[0]], a[b[1]], a[b[2]]])
    }

    pub fn inverse(self) -> Parastrophy {
        let a = self.images();
        let mut inv = [0; 3];
        for i in 0..3 {
            inv[a[i]] = i;
        }
        Parastrophy::from_images(inv)
    }

    pub fn name(self) -> &'static str {
        match self {
            Parastrophy::Id => "e",
            Parastrophy::T12 => "(12)",
            Parastrophy::T13 => "(13)",
            Parastrophy::T23 => "(23)",
            Parastrophy::C123 => "(123)",
            Parastrophy::C132 => "(132)",
        }
    }
}

/// The six translation families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TranslationKind {
    L,
    R,
    P,
    LInv,
    RInv,
    PInv,
}

impl TranslationKind {
    pub const ALL: [TranslationKind; 6] = [
        TranslationKind::L,
        TranslationKind::R,
        TranslationKind::P,
        TranslationKind::LInv,
        TranslationKind::RInv,
        TranslationKind::PInv,
    ];

    pub fn inverse(self) -> TranslationKind {
        use TranslationKind::*;
        match self {
            L => LInv,
            R => RInv,
            P => PInv,
            LInv => L,
            RInv => R,
            PInv => P,
        }
    }
}

/// The local identity maps: `e(x) = x\x`, `f(x) = x/x`, `s(x) = x·x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LocalMapKind {
    E,
    F,
    S,
}

impl LocalMapKind {
    pub const ALL: [LocalMapKind; 3] = [LocalMapKind::E, LocalMapKind::F, LocalMapKind::S];

    pub fn name(self) -> &'static str {
        match self {
            LocalMapKind::E => "e",
            LocalMapKind::F => "f",
            LocalMapKind::S => "s",
        }
    }
}

impl Quasigroup {
    /// Certifies a row-major `n×n` table.
    pub fn from_table(n: usize, mul: Vec<Elem>) -> Result<Quasigroup> {
        if n == 0 {
            return Err(Error::Parse { line: 1, msg: "order must be positive".into() });
        }
        if mul.len() != n * n {
            return Err(Error::SizeMismatch { expected: n * n, got: mul.len() });
        }
        if let Some(&bad) = mul.iter().find(|&&v| v >= n) {
            return Err(Error::NotLatinSquare(format!("entry {bad} out of range for order {n}")));
        }
        for x in 0..n {
            let mut at = vec![usize::MAX; n];
            for y in 0..n {
                let v = mul[x * n + y];
                if at[v] != usize::MAX {
                    return Err(Error::NotLatinSquare(format!(
                        "row {x} repeats entry {v} (columns {} and {y})",
                        at[v]
                    )));
                }
                at[v] = y;
            }
        }
        for y in 0..n {
            let mut at = vec![usize::MAX; n];
            for x in 0..n {
                let v = mul[x * n + y];
                if at[v] != usize::MAX {
                    return Err(Error::NotLatinSquare(format!(
                        "column {y} repeats entry {v} (rows {} and {x})",
                        at[v]
                    )));
                }
                at[v] = x;
            }
        }
        let mut ldiv = vec![0; n * n];
        let mut rdiv = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                let z = mul[x * n + y];
                ldiv[x * n + z] = y;
                rdiv[z * n + y] = x;
            }
        }
        let q = Quasigroup { n, mul, ldiv, rdiv };
        debug_assert!(q.division_identities_hold());
        Ok(q)
    }

    pub fn from_rows(rows: &[Vec<Elem>]) -> Result<Quasigroup> {
        let n = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::SizeMismatch { expected: n, got: r.len() });
        }
        Quasigroup::from_table(n, rows.concat())
    }

    pub fn from_fn(n: usize, op: impl Fn(Elem, Elem) -> Elem) -> Result<Quasigroup> {
        let mut mul = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                mul.push(op(x, y));
            }
        }
        Quasigroup::from_table(n, mul)
    }

    /// Parses the table file format.
    pub fn parse(text: &str) -> Result<Quasigroup> {
        let lines: Vec<&str> = text.lines().collect();
        let mut i = 0;
        while i < lines.len() && lines[i].starts_with('#') {
            i += 1;
        }
        let perr = |line: usize, msg: String| Error::Parse { line: line + 1, msg };
        let header = lines
            .get(i)
            .ok_or_else(|| perr(i, "missing order line".into()))?
            .trim_end();
        let n: usize = parse_decimal(header).ok_or_else(|| perr(i, format!("bad order `{header}`")))?;
        if n == 0 {
            return Err(perr(i, "order must be positive".into()));
        }
        let mut mul = Vec::with_capacity(n * n);
        for r in 0..n {
            let li = i + 1 + r;
            let line = lines
                .get(li)
                .ok_or_else(|| perr(li, format!("expected {n} rows, found {r}")))?
                .trim_end();
            let row: Vec<&str> = line.split(' ').collect();
            if row.len() != n {
                return Err(perr(li, format!("expected {n} entries, found {}", row.len())));
            }
            for tok in row {
                let v = parse_decimal(tok).ok_or_else(|| perr(li, format!("bad entry `{tok}`")))?;
                if v >= n {
                    return Err(perr(li, format!("entry {v} out of range [0, {n})")));
                }
                mul.push(v);
            }
        }
        for (li, rest) in lines.iter().enumerate().skip(i + 1 + n) {
            if !rest.trim_end().is_empty() {
                return Err(perr(li, "unexpected content after table".into()));
            }
        }
        Quasigroup::from_table(n, mul)
    }

    /// Parses several tables, each optionally preceded by `#` comment lines.
    pub fn parse_many(text: &str) -> Result<Vec<Quasigroup>> {
        let mut out = Vec::new();
        let mut chunk = String::new();
        let mut in_table = false;
        for line in text.lines() {
            if line.starts_with('#') && in_table {
                out.push(Quasigroup::parse(&chunk)?);
                chunk.clear();
                in_table = false;
            }
            if !line.starts_with('#') && !line.trim().is_empty() {
                in_table = true;
            }
            chunk.push_str(line);
            chunk.push('\n');
        }
        if in_table {
            out.push(Quasigroup::parse(&chunk)?);
        }
        Ok(out)
    }

    /// Renders the table file format (no comment lines, trailing newline).
    pub fn to_table_string(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for x in 0..self.n {
            let row: Vec<String> = self.row(x).iter().map(|v| v.to_string()).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        self.mul[x * self.n + y]
    }

    /// `x\y`: the unique `z` with `x·z = y`.
    #[inline]
    pub fn ldiv(&self, x: Elem, y: Elem) -> Elem {
        self.ldiv[x * self.n + y]
    }

    /// `x/y`: the unique `z` with `z·y = x`.
    #[inline]
    pub fn rdiv(&self, x: Elem, y: Elem) -> Elem {
        self.rdiv[x * self.n + y]
    }

    pub fn row(&self, x: Elem) -> &[Elem] {
        &self.mul[x * self.n..(x + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<Elem>> {
        (0..self.n).map(|x| self.row(x).to_vec()).collect()
    }

    pub fn table(&self) -> &[Elem] {
        &self.mul
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.n
    }

    fn division_identities_hold(&self) -> bool {
        self.elements().all(|x| {
            self.elements().all(|y| {
                self.mul(x, self.ldiv(x, y)) == y
                    && self.mul(self.rdiv(y, x), x) == y
                    && self.ldiv(x, self.mul(x, y)) == y
                    && self.rdiv(self.mul(y, x), x) == y
            })
        })
    }

    /// The translation of the given kind at `a`.
    pub fn translation(&self, kind: TranslationKind, a: Elem) -> Perm {
        let map: Vec<Elem> = match kind {
            TranslationKind::L => self.elements().map(|x| self.mul(a, x)).collect(),
            TranslationKind::R => self.elements().map(|x| self.mul(x, a)).collect(),
            TranslationKind::P => self.elements().map(|x| self.ldiv(x, a)).collect(),
            TranslationKind::LInv => self.elements().map(|x| self.ldiv(a, x)).collect(),
            TranslationKind::RInv => self.elements().map(|x| self.rdiv(x, a)).collect(),
            TranslationKind::PInv => self.elements().map(|x| self.rdiv(a, x)).collect(),
        };
        Perm::from_vec_unchecked(map)
    }

    /// The σ-parastrophe, built by re-indexing every triple `(x1, x2, x1·x2)`.
    pub fn parastrophe(&self, sigma: Parastrophy) -> Quasigroup {
        let s = sigma.images();
        let n = self.n;
        let mut mul = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                let t = [x, y, self.mul(x, y)];
                mul[t[s[0]] * n + t[s[1]]] = t[s[2]];
            }
        }
        Quasigroup::from_table(n, mul).expect("parastrophes of quasigroups are quasigroups")
    }

    pub fn local_map(&self, kind: LocalMapKind) -> Vec<Elem> {
        self.elements()
            .map(|x| match kind {
                LocalMapKind::E => self.ldiv(x, x),
                LocalMapKind::F => self.rdiv(x, x),
                LocalMapKind::S => self.mul(x, x),
            })
            .collect()
    }

    /// Two-sided identity element, if any.
    pub fn identity_element(&self) -> Option<Elem> {
        self.elements()
            .find(|&u| self.elements().all(|x| self.mul(u, x) == x && self.mul(x, u) == x))
    }

    pub fn left_identity(&self) -> Option<Elem> {
        self.elements().find(|&u| self.elements().all(|x| self.mul(u, x) == x))
    }

    pub fn right_identity(&self) -> Option<Elem> {
        self.elements().find(|&u| self.elements().all(|x| self.mul(x, u) == x))
    }

    pub fn idempotents(&self) -> Vec<Elem> {
        self.elements().filter(|&x| self.mul(x, x) == x).collect()
    }

    pub fn is_associative(&self) -> bool {
        self.elements().all(|x| {
            self.elements().all(|y| {
                let xy = self.mul(x, y);
                self.elements().all(|z| self.mul(xy, z) == self.mul(x, self.mul(y, z)))
            })
        })
    }

    pub fn is_commutative(&self) -> bool {
        self.elements().all(|x| (0..x).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    /// A group: associative with a two-sided identity.
    pub fn is_group(&self) -> bool {
        self.identity_element().is_some() && self.is_associative()
    }

    /// True iff `set` is closed under `·`; for finite quasigroups this makes it
    /// a subquasigroup.
    pub fn is_closed(&self, set: &[Elem]) -> bool {
        let mut member = vec![false; self.n];
        for &x in set {
            member[x] = true;
        }
        set.iter().all(|&x| set.iter().all(|&y| member[self.mul(x, y)]))
    }

    /// The subquasigroup on `set` relabelled by position in the sorted set.
    /// Returns the table and the sorted element list, or `None` if not closed.
    pub fn subquasigroup(&self, set: &[Elem]) -> Option<(Quasigroup, Vec<Elem>)> {
        let mut elems = set.to_vec();
        elems.sort_unstable();
        elems.dedup();
        if elems.is_empty() || !self.is_closed(&elems) {
            return None;
        }
        let mut index = vec![usize::MAX; self.n];
        for (i, &x) in elems.iter().enumerate() {
            index[x] = i;
        }
        let sub = Quasigroup::from_fn(elems.len(), |i, j| index[self.mul(elems[i], elems[j])]).ok()?;
        Some((sub, elems))
    }

    /// The isomorphic copy `x ∘ y = p(p⁻¹x · p⁻¹y)`.
    pub fn relabel(&self, p: &Perm) -> Quasigroup {
        let inv = p.inverse();
        Quasigroup::from_fn(self.n, |x, y| p.apply(self.mul(inv.apply(x), inv.apply(y))))
            .expect("relabelling preserves the Latin property")
    }
}

impl fmt::Debug for Quasigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Quasigroup(order {})\n{}", self.n, self.to_table_string())
    }
}

impl Serialize for Quasigroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

fn parse_decimal(tok: &str) -> Option<usize> {
    if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    tok.parse().ok()
}

/// True iff the map is constant.
pub fn is_constant(map: &[Elem]) -> bool {
    map.windows(2).all(|w| w[0] == w[1])
}

/// Sorted, deduplicated image of a map.
pub fn image(map: &[Elem]) -> Vec<Elem> {
    let mut v = map.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}
