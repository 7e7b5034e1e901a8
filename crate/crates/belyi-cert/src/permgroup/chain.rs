//! Base and strong generating set via a randomized Schreier–Sims
//! construction, followed by a deterministic verification of every Schreier
//! generator so the resulting order certificate does not depend on luck.

use super::{check_gens, orbits, PermError, Permutation};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// One level of the chain: the stabilizer of all earlier base points,
/// with its fundamental orbit and transversal.
struct Level {
    base_point: u32,
    /// Strong generators fixing all earlier base points.
    gens: Vec<Permutation>,
    /// Fundamental orbit of `base_point` under `gens`, in discovery order.
    orbit: Vec<u32>,
    /// `transversal[p-1]` maps `base_point` to `p` (left-first application).
    transversal: Vec<Option<Permutation>>,
}

impl Level {
    fn new(degree: usize, base_point: u32) -> Self {
        let mut transversal = vec![None; degree];
        transversal[base_point as usize - 1] = Some(Permutation::identity(degree));
        Level {
            base_point,
            gens: Vec::new(),
            orbit: vec![base_point],
            transversal,
        }
    }

    /// Recomputes the orbit/transversal closure after generators changed.
    fn extend_orbit(&mut self) {
        let mut idx = 0;
        while idx < self.orbit.len() {
            let p = self.orbit[idx];
            idx += 1;
            let up = self.transversal[p as usize - 1]
                .clone()
                .expect("orbit point has a transversal element");
            for g in &self.gens {
                let q = g.apply(p);
                if self.transversal[q as usize - 1].is_none() {
                    let uq = up.compose(g).expect("equal degrees");
                    self.transversal[q as usize - 1] = Some(uq);
                    self.orbit.push(q);
                }
            }
        }
    }
}

/// Base, strong generating set, and per-level fundamental orbits for the
/// group generated by the input permutations. The order query is exact:
/// construction ends with a full deterministic Schreier-generator check.
pub struct StabilizerChain {
    degree: usize,
    generators: Vec<Permutation>,
    levels: Vec<Level>,
}

impl StabilizerChain {
    /// Builds a verified chain. The base is chosen automatically.
    pub fn build(generators: &[Permutation]) -> Result<Self, PermError> {
        Self::build_with_base_hint(generators, &[])
    }

    /// Builds a verified chain whose base starts with the given points (as
    /// long as they are moved by the corresponding stabilizers).
    pub fn build_with_base_hint(
        generators: &[Permutation],
        base_hint: &[u32],
    ) -> Result<Self, PermError> {
        let degree = check_gens(generators)?;
        for &p in base_hint {
            if p == 0 || p as usize > degree {
                return Err(PermError::PointOutOfRange(p, degree));
            }
        }
        let mut chain = StabilizerChain {
            degree,
            generators: generators.to_vec(),
            levels: Vec::new(),
        };
        let mut hint = base_hint.to_vec();

        for g in generators {
            if !g.is_identity() {
                chain.insert(g.clone(), 0, &mut hint);
            }
        }

        // Randomized closure: sift random words until a run of them all
        // pass, then prove correctness deterministically.
        let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_BA5E);
        if !chain.generators.iter().all(|g| g.is_identity()) {
            let mut consecutive = 0;
            while consecutive < 24 {
                let w = chain.random_word(&mut rng);
                if chain.sift_and_insert(w, &mut hint) {
                    consecutive = 0;
                } else {
                    consecutive += 1;
                }
            }
        }
        chain.verify(&mut hint);
        Ok(chain)
    }

    fn random_word(&self, rng: &mut ChaCha8Rng) -> Permutation {
        let mut w = Permutation::identity(self.degree);
        let len = rng.random_range(2..8);
        for _ in 0..len {
            let g = &self.generators[rng.random_range(0..self.generators.len())];
            w = if rng.random_bool(0.5) {
                w.compose(g).expect("equal degrees")
            } else {
                w.compose(&g.inverse()).expect("equal degrees")
            };
        }
        w
    }

    /// Sifts `g` through the chain; on a residue, inserts it as a strong
    /// generator and returns true.
    fn sift_and_insert(&mut self, g: Permutation, hint: &mut Vec<u32>) -> bool {
        match self.sift(&g, 0) {
            None => false,
            Some((level, residue)) => {
                self.insert(residue, level, hint);
                true
            }
        }
    }

    /// Sifts `g` starting at `from_level`. Returns the level and residue if
    /// the element fails to sift to the identity, `None` otherwise.
    fn sift(&self, g: &Permutation, from_level: usize) -> Option<(usize, Permutation)> {
        let mut residue = g.clone();
        for level in from_level..self.levels.len() {
            if residue.is_identity() {
                return None;
            }
            let lv = &self.levels[level];
            let image = residue.apply(lv.base_point);
            match &lv.transversal[image as usize - 1] {
                None => return Some((level, residue)),
                Some(u) => {
                    residue = residue.compose(&u.inverse()).expect("equal degrees");
                }
            }
        }
        if residue.is_identity() {
            None
        } else {
            Some((self.levels.len(), residue))
        }
    }

    /// Installs `g` as a strong generator at `level`, creating the level
    /// (with a freshly chosen base point) if needed.
    fn insert(&mut self, g: Permutation, level: usize, hint: &mut Vec<u32>) {
        debug_assert!(!g.is_identity());
        if level == self.levels.len() {
            let base_point = Self::pick_base_point(&g, hint);
            self.levels.push(Level::new(self.degree, base_point));
        }
        // The new generator also belongs to every earlier level.
        for l in 0..=level {
            self.levels[l].gens.push(g.clone());
            self.levels[l].extend_orbit();
        }
    }

    fn pick_base_point(g: &Permutation, hint: &mut Vec<u32>) -> u32 {
        while let Some(p) = hint.first().copied() {
            hint.remove(0);
            if g.apply(p) != p {
                return p;
            }
        }
        (1..=g.degree() as u32)
            .find(|&p| g.apply(p) != p)
            .expect("non-identity permutation moves a point")
    }

    /// Deterministic verification: every Schreier generator of every level
    /// must sift to the identity through the rest of the chain. Residues
    /// found here are inserted and the check restarts, so on return the
    /// strong generating set is proven complete.
    fn verify(&mut self, hint: &mut Vec<u32>) {
        'restart: loop {
            for level in (0..self.levels.len()).rev() {
                let lv = &self.levels[level];
                let pairs: Vec<(u32, usize)> = lv
                    .orbit
                    .iter()
                    .flat_map(|&p| (0..lv.gens.len()).map(move |gi| (p, gi)))
                    .collect();
                for (p, gi) in pairs {
                    let lv = &self.levels[level];
                    let up = lv.transversal[p as usize - 1].clone().unwrap();
                    let g = lv.gens[gi].clone();
                    let q = g.apply(p);
                    let uq_inv = lv.transversal[q as usize - 1]
                        .clone()
                        .unwrap()
                        .inverse();
                    let schreier = up
                        .compose(&g)
                        .and_then(|t| t.compose(&uq_inv))
                        .expect("equal degrees");
                    if let Some((l, residue)) = self.sift(&schreier, level + 1) {
                        self.insert(residue, l, hint);
                        continue 'restart;
                    }
                }
            }
            return;
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base_points(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.base_point).collect()
    }

    /// Per-level fundamental orbit sizes; their product is the group order.
    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> BigUint {
        let mut order = BigUint::from(1u32);
        for l in &self.levels {
            order *= BigUint::from(l.orbit.len());
        }
        order
    }

    /// Strong generators of the full group (level 0).
    pub fn strong_generators(&self) -> Vec<Permutation> {
        match self.levels.first() {
            Some(l) => l.gens.clone(),
            None => Vec::new(),
        }
    }

    /// Generators of the stabilizer of the first base point.
    pub fn first_point_stabilizer_generators(&self) -> Vec<Permutation> {
        match self.levels.get(1) {
            Some(l) => l.gens.clone(),
            None => Vec::new(),
        }
    }

    /// Membership test via sifting.
    pub fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.degree && self.sift(g, 0).is_none()
    }

    pub fn is_transitive(&self) -> bool {
        match self.levels.first() {
            Some(l) => l.orbit.len() == self.degree,
            None => self.degree <= 1,
        }
    }

    /// Orbit sizes of the stabilizer of `point` on all points, sorted
    /// ascending. Requires a transitive group.
    pub fn subdegrees(generators: &[Permutation], point: u32) -> Result<Vec<usize>, PermError> {
        let degree = check_gens(generators)?;
        if point == 0 || point as usize > degree {
            return Err(PermError::PointOutOfRange(point, degree));
        }
        let chain = StabilizerChain::build_with_base_hint(generators, &[point])?;
        if !chain.is_transitive() {
            let orbit_len = chain.levels.first().map(|l| l.orbit.len()).unwrap_or(1);
            return Err(PermError::NotTransitive(point, orbit_len, degree));
        }
        let stab_gens = chain.first_point_stabilizer_generators();
        let mut sizes: Vec<usize> = if stab_gens.is_empty() {
            // Trivial stabilizer: every point is its own orbit.
            vec![1; degree]
        } else {
            orbits(&stab_gens)?.iter().map(|o| o.len()).collect()
        };
        sizes.sort_unstable();
        Ok(sizes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permgroup::orbit;

    fn perm(degree: usize, cycles: &[&[u32]]) -> Permutation {
        let c: Vec<Vec<u32>> = cycles.iter().map(|c| c.to_vec()).collect();
        Permutation::from_cycles(degree, &c).unwrap()
    }

    #[test]
    fn order_of_single_transposition() {
        let chain = StabilizerChain::build(&[perm(2, &[&[1, 2]])]).unwrap();
        assert_eq!(chain.order(), BigUint::from(2u32));
    }

    #[test]
    fn order_of_symmetric_group_s4() {
        let gens = [perm(4, &[&[1, 2]]), perm(4, &[&[1, 2, 3, 4]])];
        let chain = StabilizerChain::build(&gens).unwrap();
        assert_eq!(chain.order(), BigUint::from(24u32));
        assert!(chain.is_transitive());
    }

    #[test]
    fn order_of_mathieu_like_small_group() {
        // A5 acting on 5 points: order 60.
        let gens = [perm(5, &[&[1, 2, 3, 4, 5]]), perm(5, &[&[3, 4, 5]])];
        let chain = StabilizerChain::build(&gens).unwrap();
        assert_eq!(chain.order(), BigUint::from(60u32));
    }

    #[test]
    fn membership_test_via_sifting() {
        let gens = [perm(4, &[&[1, 2]]), perm(4, &[&[1, 2, 3, 4]])];
        let chain = StabilizerChain::build(&gens).unwrap();
        assert!(chain.contains(&perm(4, &[&[2, 4]])));
        let a4_gens = [perm(4, &[&[1, 2, 3]]), perm(4, &[&[2, 3, 4]])];
        let a4 = StabilizerChain::build(&a4_gens).unwrap();
        assert_eq!(a4.order(), BigUint::from(12u32));
        assert!(!a4.contains(&perm(4, &[&[1, 2]])));
    }

    #[test]
    fn identity_only_group() {
        let chain = StabilizerChain::build(&[Permutation::identity(5)]).unwrap();
        assert_eq!(chain.order(), BigUint::from(1u32));
        assert!(chain.contains(&Permutation::identity(5)));
        assert!(!chain.contains(&perm(5, &[&[1, 2]])));
    }

    #[test]
    fn subdegrees_of_s3_natural_action() {
        let gens = [perm(3, &[&[1, 2]]), perm(3, &[&[1, 2, 3]])];
        assert_eq!(StabilizerChain::subdegrees(&gens, 1).unwrap(), vec![1, 2]);
    }

    #[test]
    fn subdegrees_reject_intransitive_group() {
        let gens = [perm(4, &[&[1, 2]])];
        assert!(matches!(
            StabilizerChain::subdegrees(&gens, 1),
            Err(PermError::NotTransitive(..))
        ));
    }

    #[test]
    fn order_invariant_under_generator_shuffle() {
        let a = perm(7, &[&[1, 2, 3, 4, 5, 6, 7]]);
        let b = perm(7, &[&[1, 2]]);
        let c1 = StabilizerChain::build(&[a.clone(), b.clone()]).unwrap();
        let c2 = StabilizerChain::build(&[b, a]).unwrap();
        assert_eq!(c1.order(), c2.order());
        assert_eq!(c1.order(), BigUint::from(5040u32));
    }

    #[test]
    fn chain_orbit_matches_bfs_orbit() {
        let gens = [perm(6, &[&[1, 2, 3]]), perm(6, &[&[3, 4]])];
        let chain = StabilizerChain::build(&gens).unwrap();
        let o = orbit(&gens, 1).unwrap();
        assert_eq!(chain.levels[0].orbit.len(), o.len());
    }
}
