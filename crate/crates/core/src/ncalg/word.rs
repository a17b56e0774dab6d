//! Generator symbols and monomial words of the free algebra.

use std::cmp::Ordering;

pub type GenId = u16;

/// One letter of a presentation's alphabet. The id doubles as the
/// precedence: smaller ids come earlier in normal-form monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSymbol {
    pub id: GenId,
    pub name: String,
    pub grade: Vec<i64>,
}

/// A monomial: a finite sequence of generator ids. The empty word is the
/// unit of the free algebra.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word(Vec<GenId>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn single(g: GenId) -> Self {
        Word(vec![g])
    }

    pub fn from_ids(ids: Vec<GenId>) -> Self {
        Word(ids)
    }

    pub fn ids(&self) -> &[GenId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut ids = Vec::with_capacity(self.len() + other.len());
        ids.extend_from_slice(&self.0);
        ids.extend_from_slice(&other.0);
        Word(ids)
    }

    /// Does `sub` occur starting at position `at`?
    pub fn matches_at(&self, sub: &Word, at: usize) -> bool {
        at + sub.len() <= self.len() && self.0[at..at + sub.len()] == sub.0[..]
    }

    /// Replace the segment [at, at+len) by `mid`.
    pub fn splice(&self, at: usize, len: usize, mid: &Word) -> Word {
        debug_assert!(at + len <= self.len());
        let mut ids = Vec::with_capacity(self.len() - len + mid.len());
        ids.extend_from_slice(&self.0[..at]);
        ids.extend_from_slice(&mid.0);
        ids.extend_from_slice(&self.0[at + len..]);
        Word(ids)
    }

    /// Is the id sequence weakly ascending? Normal forms of the shipped
    /// straightening systems are exactly the sorted words.
    pub fn is_sorted(&self) -> bool {
        self.0.windows(2).all(|p| p[0] <= p[1])
    }
}

/// Graded-lexicographic order: by length first, then by ids left to right.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_puts_length_first() {
        let ab = Word::from_ids(vec![0, 1]);
        let ba = Word::from_ids(vec![1, 0]);
        let aaa = Word::from_ids(vec![0, 0, 0]);
        assert!(ab < ba);
        assert!(ba < aaa);
        assert!(Word::empty() < ab);
    }

    #[test]
    fn splice_replaces_the_segment() {
        let w = Word::from_ids(vec![3, 1, 0, 2]);
        let out = w.splice(1, 2, &Word::from_ids(vec![7, 7, 7]));
        assert_eq!(out.ids(), &[3, 7, 7, 7, 2]);
        assert!(w.matches_at(&Word::from_ids(vec![1, 0]), 1));
        assert!(!w.matches_at(&Word::from_ids(vec![1, 0]), 2));
    }
}
