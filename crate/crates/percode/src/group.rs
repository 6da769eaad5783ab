//! Permutation-group bookkeeping on small point sets: orbit closures via
//! union-find and exact group orders via a Schreier-Sims stabilizer chain.

use crate::perm::Perm;

/// Plain union-find with path halving; element count fixed at construction.
pub struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n as u32).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let up = self.parent[self.parent[x] as usize];
            self.parent[x] = up;
            x = up as usize;
        }
        x
    }

    /// Returns true when the two elements were in different classes.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        self.parent[hi] = lo as u32;
        true
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Classes as sorted element lists, ordered by smallest member.
    pub fn classes(&mut self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); n];
        for x in 0..n {
            let r = self.find(x);
            by_root[r].push(x);
        }
        by_root.into_iter().filter(|c| !c.is_empty()).collect()
    }

    pub fn class_size(&mut self, x: usize) -> usize {
        let r = self.find(x);
        (0..self.len()).filter(|&y| self.find(y) == r).count()
    }
}

/// Orbits of the group generated by `gens` on `0 .. n-1`, ordered by
/// smallest member.
pub fn orbits(n: usize, gens: &[Perm]) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(n);
    for g in gens {
        for i in 0..n {
            uf.union(i, g.image(i));
        }
    }
    uf.classes()
}

/// Exact order of the group generated by `gens`.
pub fn group_order(n: usize, gens: &[Perm]) -> u128 {
    let mut chain = StabilizerChain::new(n);
    for g in gens {
        chain.insert(g.clone());
    }
    chain.order()
}

/// A Schreier-Sims stabilizer chain over `0 .. n-1`.
///
/// Level `k` stores generators fixing the base points of levels `0 .. k`
/// pointwise, plus the transversal of the orbit of its own base point.
/// The group order is the product of the orbit sizes.
pub struct StabilizerChain {
    n: usize,
    levels: Vec<Level>,
}

struct Level {
    point: usize,
    gens: Vec<Perm>,
    transversal: Vec<Option<Perm>>,
}

impl StabilizerChain {
    pub fn new(n: usize) -> Self {
        StabilizerChain { n, levels: Vec::new() }
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.transversal.iter().flatten().count() as u128).product()
    }

    pub fn insert(&mut self, g: Perm) {
        assert_eq!(g.len(), self.n);
        self.insert_at(g, 0);
    }

    /// True iff `g` is in the group built so far.
    pub fn contains(&self, g: &Perm) -> bool {
        self.sift(g.clone(), 0)
    }

    /// Reduce `g` through the transversals starting at `level`; true iff it
    /// reduces to the identity, i.e. lies in the chain's group.
    fn sift(&self, mut g: Perm, mut level: usize) -> bool {
        loop {
            if g.is_identity() {
                return true;
            }
            if level == self.levels.len() {
                return false;
            }
            let l = &self.levels[level];
            let img = g.image(l.point);
            match &l.transversal[img] {
                Some(rep) => {
                    g = rep.inverse().compose(&g);
                    level += 1;
                }
                None => return false,
            }
        }
    }

    /// Add `g` to the generator set at `level`; `g` must fix the base points
    /// of all earlier levels. The sift is a membership pre-filter only — the
    /// unreduced element is stored, so each level's orbit is computed under
    /// the full stabilizer at that level.
    fn insert_at(&mut self, g: Perm, level: usize) {
        if self.sift(g.clone(), level) {
            return;
        }
        if level == self.levels.len() {
            let point = (0..self.n)
                .find(|&i| g.image(i) != i)
                .expect("non-member generator moves some point");
            let mut transversal = vec![None; self.n];
            transversal[point] = Some(Perm::identity(self.n));
            self.levels.push(Level { point, gens: Vec::new(), transversal });
        }
        self.levels[level].gens.push(g);

        // Rebuild the orbit and transversal at this level, then push the
        // Schreier generators one level down.
        let point = self.levels[level].point;
        let gens = self.levels[level].gens.clone();
        let mut transversal: Vec<Option<Perm>> = vec![None; self.n];
        transversal[point] = Some(Perm::identity(self.n));
        let mut queue = vec![point];
        let mut schreier = Vec::new();
        let mut head = 0;
        while head < queue.len() {
            let p = queue[head];
            head += 1;
            for s in &gens {
                let q = s.image(p);
                let via_p = transversal[p].clone().expect("queued points have reps");
                if transversal[q].is_none() {
                    transversal[q] = Some(s.compose(&via_p));
                    queue.push(q);
                } else {
                    let via_q = transversal[q].clone().unwrap();
                    let u = via_q.inverse().compose(&s.compose(&via_p));
                    if !u.is_identity() {
                        schreier.push(u);
                    }
                }
            }
        }
        self.levels[level].transversal = transversal;
        for u in schreier {
            self.insert_at(u, level + 1);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_group_order() {
        for n in 2..=7usize {
            let gens = vec![
                Perm::transposition(n, 0, 1),
                Perm::from_images((0..n).map(|i| ((i + 1) % n) as u8).collect()).unwrap(),
            ];
            let expected: u128 = (1..=n as u128).product();
            assert_eq!(group_order(n, &gens), expected);
        }
    }

    #[test]
    fn cyclic_group_order() {
        let rot = Perm::from_images(vec![1, 2, 3, 4, 0]).unwrap();
        assert_eq!(group_order(5, &[rot]), 5);
    }

    #[test]
    fn trivial_group() {
        assert_eq!(group_order(6, &[]), 1);
        assert_eq!(group_order(6, &[Perm::identity(6)]), 1);
    }

    #[test]
    fn dihedral_group() {
        let rot = Perm::from_images(vec![1, 2, 3, 4, 5, 0]).unwrap();
        let refl = Perm::from_images(vec![0, 5, 4, 3, 2, 1]).unwrap();
        assert_eq!(group_order(6, &[rot, refl]), 12);
    }

    #[test]
    fn membership() {
        let n = 5;
        let rot = Perm::from_images(vec![1, 2, 3, 4, 0]).unwrap();
        let mut chain = StabilizerChain::new(n);
        chain.insert(rot.clone());
        assert!(chain.contains(&rot.compose(&rot)));
        assert!(!chain.contains(&Perm::transposition(n, 0, 1)));
    }

    #[test]
    fn orbit_partition() {
        let swap01 = Perm::transposition(5, 0, 1);
        let swap34 = Perm::transposition(5, 3, 4);
        let orbs = orbits(5, &[swap01, swap34]);
        assert_eq!(orbs, vec![vec![0, 1], vec![2], vec![3, 4]]);
    }
}
