//! Exact permutation arithmetic and group-theoretic certification.
//!
//! Points are 1-based throughout, matching the usual cycle-notation
//! listings. Composition applies the *left* operand first: for
//! `c = a.compose(&b)` we have `c(p) = b(a(p))`. This convention is used
//! everywhere in the crate.

mod blocks;
mod chain;

pub use blocks::{block_size_shortcut, minimal_block_system_with_pair, minimal_block_systems};
pub use chain::StabilizerChain;

use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("images do not form a bijection on 1..={0}: point {1} {2}")]
    NotBijective(usize, u32, &'static str),
    #[error("point {0} out of range 1..={1}")]
    PointOutOfRange(u32, usize),
    #[error("empty generator list")]
    NoGenerators,
    #[error("group is not transitive (orbit of {0} has size {1} < degree {2})")]
    NotTransitive(u32, usize, usize),
}

/// A permutation of `{1..degree}`, stored by its image table.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    /// `images[i]` is the image of point `i + 1`, itself a 1-based point.
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (1..=degree as u32).collect(),
        }
    }

    /// Builds a permutation from its image table (`images[i]` = image of `i+1`).
    pub fn from_images(images: Vec<u32>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &im in &images {
            if im == 0 || im as usize > n {
                return Err(PermError::PointOutOfRange(im, n));
            }
            if seen[im as usize - 1] {
                return Err(PermError::NotBijective(n, im, "hit twice"));
            }
            seen[im as usize - 1] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation of `{1..degree}` from disjoint cycles; points not
    /// listed are fixed.
    pub fn from_cycles(degree: usize, cycles: &[Vec<u32>]) -> Result<Self, PermError> {
        let mut images: Vec<u32> = (1..=degree as u32).collect();
        let mut moved = vec![false; degree];
        for cycle in cycles {
            for (k, &pt) in cycle.iter().enumerate() {
                if pt == 0 || pt as usize > degree {
                    return Err(PermError::PointOutOfRange(pt, degree));
                }
                if moved[pt as usize - 1] {
                    return Err(PermError::NotBijective(degree, pt, "appears twice"));
                }
                moved[pt as usize - 1] = true;
                let next = cycle[(k + 1) % cycle.len()];
                images[pt as usize - 1] = next;
            }
        }
        Permutation::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of a 1-based point.
    #[inline]
    pub fn apply(&self, point: u32) -> u32 {
        self.images[point as usize - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &im)| im == i as u32 + 1)
    }

    /// Composition applying `self` first, then `other`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch(self.degree(), other.degree()));
        }
        let images = self.images.iter().map(|&im| other.apply(im)).collect();
        Ok(Permutation { images })
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u32; self.degree()];
        for (i, &im) in self.images.iter().enumerate() {
            images[im as usize - 1] = i as u32 + 1;
        }
        Permutation { images }
    }

    /// Decomposition into cycles of length >= 2, each cycle starting at its
    /// smallest point, cycles ordered by smallest point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 1..=n as u32 {
            if seen[start as usize - 1] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start as usize - 1] = true;
            let mut p = self.apply(start);
            while p != start {
                seen[p as usize - 1] = true;
                cycle.push(p);
                p = self.apply(p);
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    pub fn cycle_type(&self) -> CycleType {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut counts: std::collections::BTreeMap<usize, usize> = Default::default();
        for start in 1..=n as u32 {
            if seen[start as usize - 1] {
                continue;
            }
            let mut len = 1;
            seen[start as usize - 1] = true;
            let mut p = self.apply(start);
            while p != start {
                seen[p as usize - 1] = true;
                len += 1;
                p = self.apply(p);
            }
            *counts.entry(len).or_insert(0) += 1;
        }
        CycleType {
            parts: counts.into_iter().rev().map(|(l, c)| (l, c)).collect(),
        }
    }

    /// Sign `(-1)^(degree - #cycles)`, counting fixed points as cycles.
    pub fn sign(&self) -> i8 {
        let cycles: usize = self.cycle_type().parts.iter().map(|&(_, c)| c).sum();
        if (self.degree() - cycles) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// `self^k` for k >= 0.
    pub fn pow(&self, mut k: u64) -> Permutation {
        let mut acc = Permutation::identity(self.degree());
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.compose(&base).expect("equal degrees");
            }
            base = base.compose(&base).expect("equal degrees");
            k >>= 1;
        }
        acc
    }

    /// Conjugate `g^h = h^{-1} g h` (left-first convention).
    pub fn conjugate_by(&self, h: &Permutation) -> Result<Permutation, PermError> {
        h.inverse().compose(self)?.compose(h)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({})", self)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            let inner: Vec<String> = cycle.iter().map(|p| p.to_string()).collect();
            write!(f, "({})", inner.join(", "))?;
        }
        Ok(())
    }
}

/// Multiset of cycle lengths, printed like `5^19.1^5`, sorted by
/// decreasing length. Fixed points count as length-1 cycles.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycleType {
    /// (length, count) pairs, decreasing by length, counts positive.
    parts: Vec<(usize, usize)>,
}

impl CycleType {
    pub fn new(mut parts: Vec<(usize, usize)>) -> Self {
        parts.retain(|&(_, c)| c > 0);
        parts.sort_by(|a, b| b.0.cmp(&a.0));
        CycleType { parts }
    }

    pub fn parts(&self) -> &[(usize, usize)] {
        &self.parts
    }

    /// Total degree (sum of length * count).
    pub fn degree(&self) -> usize {
        self.parts.iter().map(|&(l, c)| l * c).sum()
    }

    /// Number of cycles including fixed points.
    pub fn num_cycles(&self) -> usize {
        self.parts.iter().map(|&(_, c)| c).sum()
    }

    pub fn count_of(&self, len: usize) -> usize {
        self.parts
            .iter()
            .find(|&&(l, _)| l == len)
            .map(|&(_, c)| c)
            .unwrap_or(0)
    }

    /// Parses the `5^19.1^5` notation; a bare `6` means `6^1`.
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut parts = Vec::new();
        for piece in text.split('.') {
            let piece = piece.trim();
            if piece.is_empty() {
                return Err(format!("empty component in cycle type '{text}'"));
            }
            let (len_s, count_s) = match piece.split_once('^') {
                Some((l, c)) => (l, c),
                None => (piece, "1"),
            };
            let len: usize = len_s
                .trim()
                .parse()
                .map_err(|_| format!("bad cycle length '{len_s}'"))?;
            let count: usize = count_s
                .trim()
                .parse()
                .map_err(|_| format!("bad cycle count '{count_s}'"))?;
            if len == 0 || count == 0 {
                return Err(format!("zero entry in cycle type '{text}'"));
            }
            parts.push((len, count));
        }
        Ok(CycleType::new(parts))
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "1^0");
        }
        let rendered: Vec<String> = self
            .parts
            .iter()
            .map(|&(l, c)| format!("{l}^{c}"))
            .collect();
        write!(f, "{}", rendered.join("."))
    }
}

impl fmt::Debug for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycleType({})", self)
    }
}

/// Orbit of `point` under the group generated by `gens` (BFS closure).
pub fn orbit(gens: &[Permutation], point: u32) -> Result<BTreeSet<u32>, PermError> {
    let degree = check_gens(gens)?;
    if point == 0 || point as usize > degree {
        return Err(PermError::PointOutOfRange(point, degree));
    }
    let mut seen = vec![false; degree];
    seen[point as usize - 1] = true;
    let mut queue = vec![point];
    let mut out: BTreeSet<u32> = [point].into();
    while let Some(p) = queue.pop() {
        for g in gens {
            let q = g.apply(p);
            if !seen[q as usize - 1] {
                seen[q as usize - 1] = true;
                out.insert(q);
                queue.push(q);
            }
        }
    }
    Ok(out)
}

/// All orbits of the group generated by `gens`, each sorted, ordered by
/// smallest element.
pub fn orbits(gens: &[Permutation]) -> Result<Vec<Vec<u32>>, PermError> {
    let degree = check_gens(gens)?;
    let mut assigned = vec![false; degree];
    let mut out = Vec::new();
    for start in 1..=degree as u32 {
        if assigned[start as usize - 1] {
            continue;
        }
        let orb = orbit(gens, start)?;
        for &p in &orb {
            assigned[p as usize - 1] = true;
        }
        out.push(orb.into_iter().collect());
    }
    Ok(out)
}

pub(crate) fn check_gens(gens: &[Permutation]) -> Result<usize, PermError> {
    let first = gens.first().ok_or(PermError::NoGenerators)?;
    let degree = first.degree();
    for g in gens {
        if g.degree() != degree {
            return Err(PermError::DegreeMismatch(degree, g.degree()));
        }
    }
    Ok(degree)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(degree: usize, cycles: &[&[u32]]) -> Permutation {
        let c: Vec<Vec<u32>> = cycles.iter().map(|c| c.to_vec()).collect();
        Permutation::from_cycles(degree, &c).unwrap()
    }

    #[test]
    fn compose_identity_is_neutral() {
        let a = perm(5, &[&[1, 3, 2]]);
        let id = Permutation::identity(5);
        assert_eq!(a.compose(&id).unwrap(), a);
        assert_eq!(id.compose(&a).unwrap(), a);
    }

    #[test]
    fn transposition_squares_to_identity() {
        let t = perm(2, &[&[1, 2]]);
        assert!(t.compose(&t).unwrap().is_identity());
    }

    #[test]
    fn compose_applies_left_operand_first() {
        // a = (1 2), b = (2 3): a then b sends 1 -> 2 -> 3.
        let a = perm(3, &[&[1, 2]]);
        let b = perm(3, &[&[2, 3]]);
        let c = a.compose(&b).unwrap();
        assert_eq!(c.apply(1), 3);
    }

    #[test]
    fn compose_rejects_degree_mismatch() {
        let a = Permutation::identity(3);
        let b = Permutation::identity(4);
        assert!(matches!(a.compose(&b), Err(PermError::DegreeMismatch(3, 4))));
    }

    #[test]
    fn inverse_of_identity() {
        assert!(Permutation::identity(7).inverse().is_identity());
    }

    #[test]
    fn inverse_of_five_cycle_is_fourth_power() {
        let c = perm(9, &[&[2, 4, 6, 8, 9]]);
        assert_eq!(c.inverse(), c.pow(4));
    }

    #[test]
    fn cycle_type_of_identity() {
        let id = Permutation::identity(100);
        assert_eq!(id.cycle_type().to_string(), "1^100");
    }

    #[test]
    fn cycle_type_display_and_parse_roundtrip() {
        let t = CycleType::parse("6^10.3^10.2^5").unwrap();
        assert_eq!(t.to_string(), "6^10.3^10.2^5");
        assert_eq!(t.degree(), 100);
        assert_eq!(t.num_cycles(), 25);
        let u = CycleType::parse("4^25").unwrap();
        assert_eq!(u.degree(), 100);
        assert_eq!(CycleType::parse(&u.to_string()).unwrap(), u);
    }

    #[test]
    fn sign_of_identity_is_plus_one() {
        assert_eq!(Permutation::identity(10).sign(), 1);
    }

    #[test]
    fn sign_of_transposition_is_minus_one() {
        assert_eq!(perm(4, &[&[2, 3]]).sign(), -1);
    }

    #[test]
    fn orbit_of_identity_is_singleton() {
        let id = Permutation::identity(10);
        let orb = orbit(&[id], 7).unwrap();
        assert_eq!(orb.into_iter().collect::<Vec<_>>(), vec![7]);
    }

    #[test]
    fn from_cycles_rejects_repeated_point() {
        let res = Permutation::from_cycles(3, &[vec![1, 2], vec![2, 3]]);
        assert!(matches!(res, Err(PermError::NotBijective(_, 2, _))));
    }

    #[test]
    fn conjugation_preserves_cycle_type() {
        let a = perm(6, &[&[1, 2, 3], &[4, 5]]);
        let h = perm(6, &[&[1, 6], &[2, 4, 3]]);
        let c = a.conjugate_by(&h).unwrap();
        assert_eq!(c.cycle_type(), a.cycle_type());
        assert_ne!(c, a);
    }
}
