//! Block systems of transitive permutation groups via the classical
//! union-find algorithm seeded by point pairs.

use super::{check_gens, orbit, PermError, Permutation};

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
        }
    }

    fn find(&mut self, x: u32) -> u32 {
        let mut root = x;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        let mut cur = x;
        while self.parent[cur as usize] != root {
            let next = self.parent[cur as usize];
            self.parent[cur as usize] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: u32, b: u32) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[rb as usize] = ra;
        true
    }
}

/// A partition of `{1..degree}` into blocks, each block sorted, blocks
/// ordered by smallest element.
pub type BlockSystem = Vec<Vec<u32>>;

/// The finest G-invariant partition in which `a` and `b` share a block.
pub fn minimal_block_system_with_pair(
    gens: &[Permutation],
    a: u32,
    b: u32,
) -> Result<BlockSystem, PermError> {
    let degree = check_gens(gens)?;
    for p in [a, b] {
        if p == 0 || p as usize > degree {
            return Err(PermError::PointOutOfRange(p, degree));
        }
    }
    let mut uf = UnionFind::new(degree);
    let mut queue = Vec::new();
    if uf.union(a - 1, b - 1) {
        queue.push((a - 1, b - 1));
    }
    while let Some((p, q)) = queue.pop() {
        for g in gens {
            let gp = g.apply(p + 1) - 1;
            let gq = g.apply(q + 1) - 1;
            let (rp, rq) = (uf.find(gp), uf.find(gq));
            if rp != rq {
                uf.union(rp, rq);
                queue.push((rp, rq));
            }
        }
    }
    let mut blocks: std::collections::BTreeMap<u32, Vec<u32>> = Default::default();
    for p in 0..degree as u32 {
        blocks.entry(uf.find(p)).or_default().push(p + 1);
    }
    Ok(blocks.into_values().collect())
}

fn is_trivial(system: &BlockSystem, degree: usize) -> bool {
    system.len() == degree || system.len() == 1
}

/// True when `fine` refines `coarse` (every block of `fine` is contained in
/// a block of `coarse`).
fn refines(fine: &BlockSystem, coarse: &BlockSystem, degree: usize) -> bool {
    let mut coarse_of = vec![0usize; degree];
    for (i, block) in coarse.iter().enumerate() {
        for &p in block {
            coarse_of[p as usize - 1] = i;
        }
    }
    fine.iter().all(|block| {
        let target = coarse_of[block[0] as usize - 1];
        block.iter().all(|&p| coarse_of[p as usize - 1] == target)
    })
}

/// All minimal nontrivial block systems of the transitive group generated
/// by `gens`. An empty result certifies primitivity.
pub fn minimal_block_systems(gens: &[Permutation]) -> Result<Vec<BlockSystem>, PermError> {
    let degree = check_gens(gens)?;
    if degree <= 2 {
        return Ok(Vec::new());
    }
    let full_orbit = orbit(gens, 1)?;
    if full_orbit.len() != degree {
        return Err(PermError::NotTransitive(1, full_orbit.len(), degree));
    }
    let mut candidates: Vec<BlockSystem> = Vec::new();
    for k in 2..=degree as u32 {
        let system = minimal_block_system_with_pair(gens, 1, k)?;
        if !is_trivial(&system, degree) && !candidates.contains(&system) {
            candidates.push(system);
        }
    }
    // Keep only systems with no strictly finer nontrivial candidate.
    let minimal: Vec<BlockSystem> = candidates
        .iter()
        .filter(|c| {
            !candidates
                .iter()
                .any(|other| *other != **c && refines(other, c, degree))
        })
        .cloned()
        .collect();
    Ok(minimal)
}

/// The arithmetic shortcut for rank-3 groups: a nontrivial block through a
/// fixed point must be a union of suborbits containing the fixed one, so its
/// size is 1 plus a sum of a proper nonempty subset of the nontrivial
/// subdegrees. Returns each candidate size with whether it divides `degree`.
pub fn block_size_shortcut(subdegrees: &[usize], degree: usize) -> Vec<(usize, bool)> {
    let nontrivial: Vec<usize> = subdegrees.iter().copied().filter(|&s| s != 1).collect();
    let mut out = Vec::new();
    let m = nontrivial.len();
    for mask in 1..(1usize << m) {
        if mask == (1 << m) - 1 {
            // All suborbits together give the trivial block of full size.
            continue;
        }
        let size = 1 + nontrivial
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &s)| s)
            .sum::<usize>();
        out.push((size, degree % size == 0));
    }
    out.sort_unstable();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(degree: usize, cycles: &[&[u32]]) -> Permutation {
        let c: Vec<Vec<u32>> = cycles.iter().map(|c| c.to_vec()).collect();
        Permutation::from_cycles(degree, &c).unwrap()
    }

    #[test]
    fn cyclic_four_has_one_block_system() {
        let gens = [perm(4, &[&[1, 2, 3, 4]])];
        let systems = minimal_block_systems(&gens).unwrap();
        assert_eq!(systems, vec![vec![vec![1, 3], vec![2, 4]]]);
    }

    #[test]
    fn symmetric_group_is_primitive() {
        let gens = [perm(5, &[&[1, 2]]), perm(5, &[&[1, 2, 3, 4, 5]])];
        assert!(minimal_block_systems(&gens).unwrap().is_empty());
    }

    #[test]
    fn dihedral_on_six_points_has_two_minimal_systems() {
        // D6 = <(123456), reflection>: blocks of size 2 and of size 3 exist.
        let rot = perm(6, &[&[1, 2, 3, 4, 5, 6]]);
        let refl = perm(6, &[&[2, 6], &[3, 5]]);
        let systems = minimal_block_systems(&[rot, refl]).unwrap();
        let sizes: Vec<usize> = systems.iter().map(|s| s[0].len()).collect();
        assert!(sizes.contains(&2));
        assert!(sizes.contains(&3));
    }

    #[test]
    fn shortcut_for_rank_three_subdegrees() {
        let out = block_size_shortcut(&[1, 22, 77], 100);
        assert_eq!(out, vec![(23, false), (78, false)]);
    }

    #[test]
    fn intransitive_group_rejected() {
        let gens = [perm(4, &[&[1, 2]])];
        assert!(minimal_block_systems(&gens).is_err());
    }
}
