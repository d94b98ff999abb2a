//! Sparse linear algebra over `GF(2)`.
//!
//! Vectors are sorted, duplicate-free lists of coordinate keys. An [`Echelon`]
//! keeps reduced rows indexed by their largest key and remembers, for every
//! row, which of the original input vectors were combined to produce it.

use std::collections::HashMap;
use std::hash::Hash;

/// A sparse vector over `GF(2)`: the sorted set of nonzero coordinates.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseVec<K> {
    keys: Vec<K>,
}

impl<K: Ord + Copy> SparseVec<K> {
    pub fn new() -> Self {
        SparseVec { keys: Vec::new() }
    }

    /// Builds a vector from keys, cancelling repeated keys in pairs.
    pub fn from_keys(mut keys: Vec<K>) -> Self {
        keys.sort_unstable();
        let mut out: Vec<K> = Vec::with_capacity(keys.len());
        for k in keys {
            if out.last() == Some(&k) {
                out.pop();
            } else {
                out.push(k);
            }
        }
        SparseVec { keys: out }
    }

    pub fn keys(&self) -> &[K] {
        &self.keys
    }

    pub fn is_zero(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn leading(&self) -> Option<K> {
        self.keys.last().copied()
    }

    pub fn xor(&self, other: &SparseVec<K>) -> SparseVec<K> {
        let (a, b) = (&self.keys, &other.keys);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        SparseVec { keys: out }
    }
}

/// A fixed-width set of column indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet {
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn singleton(len: usize, i: usize) -> Self {
        let mut s = Self::new(len);
        s.flip(i);
        s
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn xor_assign(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &bits)| {
            (0..64)
                .filter(move |b| bits >> b & 1 == 1)
                .map(move |b| w * 64 + b)
        })
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }
}

/// Row-echelon form of a list of vectors.
#[derive(Clone, Debug)]
pub struct Echelon<K> {
    width: usize,
    rows: Vec<(SparseVec<K>, BitSet)>,
    pivots: HashMap<K, usize>,
    dependent: Vec<BitSet>,
}

impl<K: Ord + Copy + Hash> Echelon<K> {
    /// Reduces `vectors`; input `i` is tracked as bit `i` of each row's
    /// combination.
    pub fn new(vectors: Vec<SparseVec<K>>) -> Self {
        let width = vectors.len();
        let mut echelon = Echelon {
            width,
            rows: Vec::new(),
            pivots: HashMap::new(),
            dependent: Vec::new(),
        };
        for (i, v) in vectors.into_iter().enumerate() {
            let (reduced, comb) = echelon.reduce(v, BitSet::singleton(width, i));
            match reduced.leading() {
                Some(lead) => {
                    echelon.pivots.insert(lead, echelon.rows.len());
                    echelon.rows.push((reduced, comb));
                }
                None => echelon.dependent.push(comb),
            }
        }
        echelon
    }

    fn reduce(&self, mut v: SparseVec<K>, mut comb: BitSet) -> (SparseVec<K>, BitSet) {
        while let Some(lead) = v.leading() {
            match self.pivots.get(&lead) {
                Some(&r) => {
                    let (row, rc) = &self.rows[r];
                    v = v.xor(row);
                    comb.xor_assign(rc);
                }
                None => break,
            }
        }
        (v, comb)
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn is_independent(&self) -> bool {
        self.dependent.is_empty()
    }

    /// Linear relations found among the inputs, as sets of input indices
    /// summing to zero.
    pub fn relations(&self) -> &[BitSet] {
        &self.dependent
    }

    /// Input indices whose sum is `target`, if `target` is in the span.
    pub fn solve(&self, target: SparseVec<K>) -> Option<BitSet> {
        let (rest, comb) = self.reduce(target, BitSet::new(self.width));
        rest.is_zero().then_some(comb)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(keys: &[u32]) -> SparseVec<u32> {
        SparseVec::from_keys(keys.to_vec())
    }

    #[test]
    fn xor_cancels() {
        assert_eq!(v(&[1, 2, 5]).xor(&v(&[2, 3])), v(&[1, 3, 5]));
        assert_eq!(v(&[1, 1, 4]), v(&[4]));
        assert!(v(&[7]).xor(&v(&[7])).is_zero());
    }

    #[test]
    fn solve_recovers_combination() {
        let e = Echelon::new(vec![v(&[1, 2]), v(&[2, 3]), v(&[4])]);
        assert_eq!(e.rank(), 3);
        assert!(e.is_independent());
        let comb = e.solve(v(&[1, 3, 4])).unwrap();
        assert_eq!(comb.iter().collect::<Vec<_>>(), vec![0, 1, 2]);
        assert!(e.solve(v(&[5])).is_none());
    }

    #[test]
    fn dependencies_reported() {
        let e = Echelon::new(vec![v(&[1, 2]), v(&[2, 3]), v(&[1, 3])]);
        assert_eq!(e.rank(), 2);
        assert_eq!(e.relations().len(), 1);
        assert_eq!(e.relations()[0].iter().collect::<Vec<_>>(), vec![0, 1, 2]);
    }

    #[test]
    fn brute_force_rank() {
        // all subsets of four fixed vectors in GF(2)^5; rank = log2 of span size
        let vs = [v(&[0, 1]), v(&[1, 2]), v(&[0, 2]), v(&[3, 4])];
        let mut span = std::collections::HashSet::new();
        for mask in 0..16u32 {
            let mut acc = SparseVec::new();
            for (i, x) in vs.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    acc = acc.xor(x);
                }
            }
            span.insert(acc.keys().to_vec());
        }
        let e = Echelon::new(vs.to_vec());
        assert_eq!(1usize << e.rank(), span.len());
    }
}
