//! Bijections of `{0..n-1}`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation in one-line image notation: `images[x]` is the image of `x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm((0..n).collect())
    }

    /// Validates that `images` is a bijection on `{0..images.len()-1}`.
    pub fn new(images: Vec<usize>) -> Result<Perm> {
        if !is_bijection(&images) {
            return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection")));
        }
        Ok(Perm(images))
    }

    pub(crate) fn from_vec_unchecked(images: Vec<usize>) -> Perm {
        debug_assert!(is_bijection(&images));
        Perm(images)
    }

    /// Builds a permutation of degree `n` from disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Perm> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut seen = vec![false; n];
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                if x >= n || seen[x] {
                    return Err(Error::InvalidPermutation(format!("bad cycle element {x}")));
                }
                seen[x] = true;
                images[x] = cycle[(i + 1) % cycle.len()];
            }
        }
        Ok(Perm(images))
    }

    /// Parses either cycle notation `(1 2)(4 5)` or one-line notation `0 2 1 3`.
    pub fn parse(n: usize, text: &str) -> Result<Perm> {
        let text = text.trim();
        if text.starts_with('(') || text.is_empty() {
            let mut cycles: Vec<Vec<usize>> = Vec::new();
            for chunk in text.split(')') {
                let chunk = chunk.trim();
                if chunk.is_empty() {
                    continue;
                }
                let body = chunk
                    .strip_prefix('(')
                    .ok_or_else(|| Error::InvalidPermutation(format!("expected '(' in `{text}`")))?;
                cycles.push(parse_numbers(body)?);
            }
            let refs: Vec<&[usize]> = cycles.iter().map(|c| c.as_slice()).collect();
            Perm::from_cycles(n, &refs)
        } else {
            let images = parse_numbers(text.trim_start_matches('[').trim_end_matches(']'))?;
            if images.len() != n {
                return Err(Error::SizeMismatch { expected: n, got: images.len() });
            }
            Perm::new(images)
        }
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&x| self.0[x]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (x, &y) in self.0.iter().enumerate() {
            inv[y] = x;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(x, &y)| x == y)
    }

    /// Disjoint cycles of length at least two, each starting at its least element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.0[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.0[x];
            }
            out.push(cycle);
        }
        out
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

/// True iff `map` is a bijection on `{0..map.len()-1}`.
pub fn is_bijection(map: &[usize]) -> bool {
    let mut seen = vec![false; map.len()];
    for &y in map {
        if y >= map.len() || seen[y] {
            return false;
        }
        seen[y] = true;
    }
    true
}

fn parse_numbers(s: &str) -> Result<Vec<usize>> {
    s.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| Error::InvalidPermutation(format!("bad number `{t}`")))
        })
        .collect()
}
