//! Exact sparse linear algebra over the rationals, keyed by arbitrary
//! ordered labels instead of column indices.
//!
//! [`SpanSolver`] keeps an echelon basis of the vectors inserted so far and
//! answers membership queries with exact coordinates in terms of the
//! insertion order. Pivots are the smallest labels of their rows, so
//! reduction walks each vector's support monotonically and every rank
//! statement is exact.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::hseries::Q;

pub type SparseVec<K> = BTreeMap<K, Q>;

pub enum Insertion {
    Independent { row: usize },
    Dependent { combo: Vec<(usize, Q)> },
}

pub struct SpanSolver<K: Ord + Clone> {
    rows: Vec<SparseVec<K>>,
    combos: Vec<BTreeMap<usize, Q>>,
    pivots: BTreeMap<K, usize>,
    inserted: usize,
}

impl<K: Ord + Clone> Default for SpanSolver<K> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K: Ord + Clone> SpanSolver<K> {
    pub fn new() -> Self {
        SpanSolver { rows: Vec::new(), combos: Vec::new(), pivots: BTreeMap::new(), inserted: 0 }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn inserted(&self) -> usize {
        self.inserted
    }

    fn reduce_internal(&self, mut v: SparseVec<K>) -> (SparseVec<K>, BTreeMap<usize, Q>) {
        let mut combo: BTreeMap<usize, Q> = BTreeMap::new();
        loop {
            let Some(p) = v.keys().next().cloned() else { break };
            let Some(&ri) = self.pivots.get(&p) else { break };
            let c = v[&p].clone();
            let row: Vec<(K, Q)> =
                self.rows[ri].iter().map(|(k, q)| (k.clone(), q.clone())).collect();
            for (k, rc) in row {
                let e = v.entry(k.clone()).or_insert_with(Q::zero);
                *e -= &c * &rc;
                if e.is_zero() {
                    v.remove(&k);
                }
            }
            for (orig, oc) in &self.combos[ri] {
                let e = combo.entry(*orig).or_insert_with(Q::zero);
                *e += &c * oc;
                if e.is_zero() {
                    combo.remove(orig);
                }
            }
        }
        (v, combo)
    }

    /// Insert a vector; dependent vectors report their exact coordinates in
    /// the previously inserted ones.
    pub fn insert(&mut self, v: SparseVec<K>) -> Insertion {
        let idx = self.inserted;
        self.inserted += 1;
        let (res, combo) = self.reduce_internal(v);
        if res.is_empty() {
            return Insertion::Dependent { combo: combo.into_iter().collect() };
        }
        let pivot = res.keys().next().cloned().expect("nonempty residual");
        let lead = res[&pivot].clone();
        let row: SparseVec<K> = res.into_iter().map(|(k, c)| (k, c / &lead)).collect();
        let mut new_combo: BTreeMap<usize, Q> = BTreeMap::new();
        new_combo.insert(idx, lead.recip());
        for (orig, oc) in combo {
            let c = -oc / &lead;
            if !c.is_zero() {
                new_combo.insert(orig, c);
            }
        }
        let ri = self.rows.len();
        self.rows.push(row);
        self.combos.push(new_combo);
        self.pivots.insert(pivot, ri);
        Insertion::Independent { row: ri }
    }

    /// Coordinates of v in the inserted vectors, if v lies in their span.
    pub fn coordinates(&self, v: SparseVec<K>) -> Option<Vec<(usize, Q)>> {
        let (res, combo) = self.reduce_internal(v);
        res.is_empty().then(|| combo.into_iter().collect())
    }

    pub fn contains(&self, v: SparseVec<K>) -> bool {
        self.reduce_internal(v).0.is_empty()
    }

    pub fn residual(&self, v: SparseVec<K>) -> SparseVec<K> {
        self.reduce_internal(v).0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hseries::rat;

    fn vec3(a: i64, b: i64, c: i64) -> SparseVec<u32> {
        [(0u32, rat(a, 1)), (1, rat(b, 1)), (2, rat(c, 1))]
            .into_iter()
            .filter(|(_, q)| !q.is_zero())
            .collect()
    }

    #[test]
    fn rank_and_coordinates() {
        let mut s = SpanSolver::new();
        assert!(matches!(s.insert(vec3(1, 2, 0)), Insertion::Independent { row: 0 }));
        assert!(matches!(s.insert(vec3(0, 1, 1)), Insertion::Independent { row: 1 }));
        match s.insert(vec3(2, 7, 3)) {
            Insertion::Dependent { combo } => {
                assert_eq!(combo, vec![(0, rat(2, 1)), (1, rat(3, 1))]);
            }
            _ => panic!("2*(1,2,0) + 3*(0,1,1) should be dependent"),
        }
        assert_eq!(s.rank(), 2);
        assert!(!s.contains(vec3(0, 0, 1)));
        let coords = s.coordinates(vec3(1, 1, -1)).expect("in span");
        assert_eq!(coords, vec![(0, rat(1, 1)), (1, rat(-1, 1))]);
    }

    #[test]
    fn zero_vector_is_dependent_with_empty_combo() {
        let mut s = SpanSolver::<u32>::new();
        match s.insert(SparseVec::new()) {
            Insertion::Dependent { combo } => assert!(combo.is_empty()),
            _ => panic!("zero vector must be dependent"),
        }
    }
}
