//! Fixed-universe bit sets over point indices.

/// Subset of `{0, .., n-1}` backed by 64-bit blocks. All algebra is exact and
/// allocation-free apart from the block vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PointSet {
    universe: usize,
    blocks: Vec<u64>,
}

impl PointSet {
    pub fn empty(universe: usize) -> Self {
        PointSet {
            universe,
            blocks: vec![0; universe.div_ceil(64)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for i in 0..universe {
            s.insert(i);
        }
        s
    }

    pub fn from_indices(universe: usize, indices: &[usize]) -> Self {
        let mut s = Self::empty(universe);
        for &i in indices {
            s.insert(i);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.universe, "point index {i} out of range");
        self.blocks[i / 64] |= 1u64 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.universe && self.blocks[i / 64] & (1u64 << (i % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    pub fn union_with(&mut self, other: &PointSet) {
        self.check(other);
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &PointSet) {
        self.check(other);
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a &= b;
        }
    }

    pub fn difference_with(&mut self, other: &PointSet) {
        self.check(other);
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a &= !b;
        }
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &PointSet) -> PointSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &PointSet) -> PointSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn intersects(&self, other: &PointSet) -> bool {
        self.check(other);
        self.blocks
            .iter()
            .zip(&other.blocks)
            .any(|(a, b)| a & b != 0)
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.check(other);
        self.blocks
            .iter()
            .zip(&other.blocks)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().enumerate().flat_map(|(w, &block)| {
            let mut bits = block;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let tz = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(w * 64 + tz)
                }
            })
        })
    }

    pub fn indices(&self) -> Vec<usize> {
        self.iter().collect()
    }

    fn check(&self, other: &PointSet) {
        assert_eq!(
            self.universe, other.universe,
            "point sets over different spaces"
        );
    }
}

impl std::fmt::Debug for PointSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algebra() {
        let a = PointSet::from_indices(10, &[1, 2, 5]);
        let b = PointSet::from_indices(10, &[2, 3]);
        assert_eq!(a.union(&b).indices(), vec![1, 2, 3, 5]);
        assert_eq!(a.intersection(&b).indices(), vec![2]);
        assert_eq!(a.difference(&b).indices(), vec![1, 5]);
        assert!(a.intersects(&b));
        assert!(!a.intersects(&PointSet::from_indices(10, &[0, 9])));
        assert!(PointSet::from_indices(10, &[2]).is_subset(&a));
        assert!(!a.is_subset(&b));
        assert_eq!(a.len(), 3);
        assert!(PointSet::empty(10).is_empty());
        assert_eq!(PointSet::full(70).len(), 70);
    }

    #[test]
    fn iteration_crosses_block_boundaries() {
        let s = PointSet::from_indices(130, &[0, 63, 64, 65, 129]);
        assert_eq!(s.indices(), vec![0, 63, 64, 65, 129]);
    }
}
