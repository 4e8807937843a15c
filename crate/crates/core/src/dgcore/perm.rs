use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::DgError;

/// Permutation of `{0, …, n-1}` stored as its image list.
///
/// Products are read left to right: `g.then(h)` applies `g` first, which is
/// the product written `gh`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, DgError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(DgError::InvalidPermutation(format!("{images:?} is not a bijection")));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    /// Parses 1-based cycle notation such as `(1 2)(3)` on `n` points.
    /// Points not mentioned are fixed; `()` or an empty string is the identity.
    pub fn from_cycles(n: usize, text: &str) -> Result<Self, DgError> {
        let bad = |m: &str| DgError::InvalidPermutation(format!("{text:?}: {m}"));
        let mut images: Vec<usize> = (0..n).collect();
        let mut seen = vec![false; n];
        let mut rest = text.trim();
        while !rest.is_empty() {
            let body = rest.strip_prefix('(').ok_or_else(|| bad("expected '('"))?;
            let close = body.find(')').ok_or_else(|| bad("unclosed cycle"))?;
            let points = body[..close]
                .split(|ch: char| ch == ',' || ch.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<usize>().map_err(|_| bad("points must be positive integers")))
                .collect::<Result<Vec<_>, _>>()?;
            for &p in &points {
                if p == 0 || p > n {
                    return Err(bad("point out of range"));
                }
                if seen[p - 1] {
                    return Err(bad("cycles are not disjoint"));
                }
                seen[p - 1] = true;
            }
            for (k, &p) in points.iter().enumerate() {
                images[p - 1] = points[(k + 1) % points.len()] - 1;
            }
            rest = body[close + 1..].trim_start();
        }
        Ok(Permutation { images })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, j)| i == *j)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { images: inv }
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len(), "permutations of different degree");
        Permutation { images: self.images.iter().map(|&i| other.images[i]).collect() }
    }

    pub fn commutes_with(&self, other: &Permutation) -> bool {
        self.then(other) == other.then(self)
    }

    /// Disjoint cycles, 0-based, each starting at its smallest point; fixed
    /// points included.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut j = self.images[start];
            while j != start {
                seen[j] = true;
                cyc.push(j);
                j = self.images[j];
            }
            out.push(cyc);
        }
        out
    }

    /// Cycle lengths sorted weakly increasing.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable();
        t
    }

    pub fn is_odd(&self) -> bool {
        self.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 1
    }

    /// All permutations of `n` points in lexicographic order of images.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        loop {
            out.push(Permutation { images: cur.clone() });
            // next lexicographic permutation
            let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else { break };
            let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("exists");
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        out
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = DgError;

    fn try_from(images: Vec<usize>) -> Result<Self, DgError> {
        Permutation::from_images(images)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.images
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in self.cycles() {
            let pts: Vec<String> = c.iter().map(|p| (p + 1).to_string()).collect();
            write!(f, "({})", pts.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = DgError;

    /// Cycle notation with every point listed, e.g. `(1 2)(3)`.
    fn from_str(s: &str) -> Result<Self, DgError> {
        let n = s
            .split(|ch: char| !ch.is_ascii_digit())
            .filter_map(|t| t.parse::<usize>().ok())
            .max()
            .unwrap_or(0);
        Permutation::from_cycles(n, s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let p: Permutation = "(1 2)(3)".parse().unwrap();
        assert_eq!(p.images(), &[1, 0, 2]);
        assert_eq!(p.to_string(), "(1 2)(3)");
        let c = Permutation::from_cycles(4, "(1 3 2)").unwrap();
        assert_eq!(c.images(), &[2, 0, 1, 3]);
        assert_eq!(c.cycle_type(), vec![1, 3]);
        assert!(Permutation::from_cycles(3, "(1 1)").is_err());
        assert!(Permutation::from_cycles(3, "(1 4)").is_err());
        assert!(Permutation::from_images(vec![0, 0]).is_err());
    }

    #[test]
    fn products_read_left_to_right() {
        let a = Permutation::from_cycles(3, "(1 2)").unwrap();
        let b = Permutation::from_cycles(3, "(2 3)").unwrap();
        // 1 -a-> 2 -b-> 3
        assert_eq!(a.then(&b).apply(0), 2);
        assert_eq!(a.then(&a.inverse()), Permutation::identity(3));
        assert!(!a.commutes_with(&b));
    }

    #[test]
    fn enumerates_symmetric_group() {
        let all = Permutation::all(4);
        assert_eq!(all.len(), 24);
        assert_eq!(all.iter().filter(|p| p.is_odd()).count(), 12);
    }
}
