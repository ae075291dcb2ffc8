use std::collections::HashMap;

/// Three-component multi-index `(a1, a2, a3)`.
pub type MultiIndex = [usize; 3];

/// Canonical graded ordering of all multi-indices with `|a| <= M`.
///
/// Indices are sorted by total degree, then in descending lexicographic
/// order within a degree, so `e_1, e_2, e_3` occupy positions 1, 2, 3 and
/// every index of degree at most two lives in the first ten slots.
#[derive(Debug, Clone)]
pub struct MultiIndexSet {
    order: usize,
    indices: Vec<MultiIndex>,
    lookup: HashMap<MultiIndex, usize>,
    degree_start: Vec<usize>,
}

impl MultiIndexSet {
    pub fn new(order: usize) -> Self {
        let mut indices = Vec::with_capacity(binomial(order + 3, 3));
        let mut degree_start = Vec::with_capacity(order + 2);
        for deg in 0..=order {
            degree_start.push(indices.len());
            for a1 in (0..=deg).rev() {
                for a2 in (0..=deg - a1).rev() {
                    indices.push([a1, a2, deg - a1 - a2]);
                }
            }
        }
        degree_start.push(indices.len());
        let lookup = indices.iter().enumerate().map(|(i, a)| (*a, i)).collect();
        MultiIndexSet {
            order,
            indices,
            lookup,
            degree_start,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn get(&self, pos: usize) -> MultiIndex {
        self.indices[pos]
    }

    pub fn position(&self, alpha: MultiIndex) -> Option<usize> {
        self.lookup.get(&alpha).copied()
    }

    /// Position of `e_d` (0-based direction `d`).
    pub fn unit(&self, d: usize) -> usize {
        debug_assert!(self.order >= 1 && d < 3);
        1 + d
    }

    /// Position of `2 e_d`.
    pub fn double_unit(&self, d: usize) -> Option<usize> {
        let mut a = [0; 3];
        a[d] = 2;
        self.position(a)
    }

    /// Range of positions holding indices of total degree `deg`.
    pub fn degree_range(&self, deg: usize) -> std::ops::Range<usize> {
        self.degree_start[deg]..self.degree_start[deg + 1]
    }

    pub fn degree(&self, pos: usize) -> usize {
        let a = self.indices[pos];
        a[0] + a[1] + a[2]
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}
