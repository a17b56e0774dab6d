//! Noncommutative polynomials: finite maps from words to HSeries.
//!
//! Alongside the terms, a polynomial tracks the order through which it is
//! known as an element of the h-adic algebra. The tracked order is the
//! minimum over all coefficient windows, including coefficients that were
//! dropped because they vanished on their window: dropping such a term
//! must not silently upgrade "zero as far as we know" to "exactly zero".

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::hseries::{HSeries, Q};
use crate::ncalg::word::Word;

#[derive(Clone, Debug)]
pub struct NCPoly {
    terms: BTreeMap<Word, HSeries>,
    order: i32,
}

/// A huge starting window for polynomials whose knowledge is limited only
/// by their coefficients (e.g. bare monomials with unit coefficient).
pub(crate) const FULL_ORDER: i32 = i32::MAX / 8;

impl NCPoly {
    pub(crate) fn normalized(terms: BTreeMap<Word, HSeries>, mut order: i32) -> NCPoly {
        for c in terms.values() {
            order = order.min(c.order());
        }
        let terms = terms.into_iter().filter(|(_, c)| !c.is_zero_on_window()).collect();
        NCPoly { terms, order }
    }

    pub fn zero(order: i32) -> NCPoly {
        NCPoly { terms: BTreeMap::new(), order }
    }

    pub fn one(order: i32) -> NCPoly {
        Self::monomial(Word::empty(), HSeries::one(order))
    }

    pub fn monomial(word: Word, coeff: HSeries) -> NCPoly {
        Self::normalized([(word, coeff)].into_iter().collect(), FULL_ORDER)
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, HSeries)>>(terms: I) -> NCPoly {
        let mut map: BTreeMap<Word, HSeries> = BTreeMap::new();
        let mut any = false;
        for (w, c) in terms {
            any = true;
            let e = map.entry(w).or_insert_with(|| HSeries::zero(FULL_ORDER));
            *e = e.add(&c);
        }
        assert!(any, "from_terms needs at least one term; use zero(order) for 0");
        Self::normalized(map, FULL_ORDER)
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &HSeries)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Word, HSeries)> {
        self.terms.into_iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff_of(&self, w: &Word) -> Option<&HSeries> {
        self.terms.get(w)
    }

    pub fn is_zero_on_window(&self) -> bool {
        self.terms.is_empty()
    }

    /// Longest word length in the support.
    pub fn support_degree(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    /// Minimal h-valuation visible across all coefficients; None if zero on
    /// the window.
    pub fn valuation(&self) -> Option<i32> {
        self.terms.values().filter_map(HSeries::valuation).min()
    }

    pub(crate) fn vlow(&self) -> i32 {
        self.valuation().unwrap_or(self.order + 1)
    }

    /// Certifies valuation >= k, or names the offending (word, valuation).
    /// Needs the window to reach k-1: below that, absence of a coefficient
    /// proves nothing.
    pub fn val_at_least(&self, k: i32) -> Result<std::result::Result<(), (Word, i32)>> {
        if self.order < k - 1 {
            return Err(Error::InsufficientTruncation { needed: k - 1, have: self.order });
        }
        for (w, c) in &self.terms {
            if let Some(v) = c.valuation() {
                if v < k {
                    return Ok(Err((w.clone(), v)));
                }
            }
        }
        Ok(Ok(()))
    }

    pub fn is_zero_to(&self, through: i32) -> Result<bool> {
        if self.order < through {
            return Err(Error::InsufficientTruncation { needed: through, have: self.order });
        }
        for c in self.terms.values() {
            if !c.is_zero_to(through.min(c.order()))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn add(&self, other: &NCPoly) -> NCPoly {
        let mut terms = self.terms.clone();
        for (w, c) in &other.terms {
            match terms.get_mut(w) {
                Some(e) => *e = e.add(c),
                None => {
                    terms.insert(w.clone(), c.clone());
                }
            }
        }
        Self::normalized(terms, self.order.min(other.order))
    }

    pub fn sub(&self, other: &NCPoly) -> NCPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> NCPoly {
        NCPoly {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c.neg())).collect(),
            order: self.order,
        }
    }

    pub fn scale(&self, s: &HSeries) -> NCPoly {
        let cap = (self.order + s.vlow()).min(s.order() + self.vlow());
        let terms = self.terms.iter().map(|(w, c)| (w.clone(), c.mul(s))).collect();
        Self::normalized(terms, cap)
    }

    pub fn scale_q(&self, r: &Q) -> NCPoly {
        let terms = self.terms.iter().map(|(w, c)| (w.clone(), c.scale(r))).collect();
        Self::normalized(terms, self.order)
    }

    /// Multiply by h^k; k < 0 divides and degrades the window accordingly.
    pub fn shift(&self, k: i32) -> Result<NCPoly> {
        let mut terms = BTreeMap::new();
        for (w, c) in &self.terms {
            terms.insert(w.clone(), c.shift(k)?);
        }
        Ok(Self::normalized(terms, self.order + k))
    }

    /// Concatenation product in the free algebra, no rewriting.
    pub fn free_mul(&self, other: &NCPoly) -> NCPoly {
        let cap = (self.order + other.vlow()).min(other.order + self.vlow());
        let mut terms: BTreeMap<Word, HSeries> = BTreeMap::new();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                let w = wa.concat(wb);
                let c = ca.mul(cb);
                match terms.get_mut(&w) {
                    Some(e) => *e = e.add(&c),
                    None => {
                        terms.insert(w, c);
                    }
                }
            }
        }
        Self::normalized(terms, cap)
    }

    pub fn truncate(&self, order: i32) -> NCPoly {
        let order = order.min(self.order);
        let terms = self.terms.iter().map(|(w, c)| (w.clone(), c.truncate(order))).collect();
        Self::normalized(terms, order)
    }

    /// Equality on the overlap of the known windows.
    pub fn agrees(&self, other: &NCPoly) -> bool {
        let n = self.order.min(other.order);
        self.truncate(n).terms == other.truncate(n).terms
    }
}

/// Structural equality: same terms (with their windows) and same tracked
/// order. Window-overlap semantics live in [`NCPoly::agrees`].
impl PartialEq for NCPoly {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.terms == other.terms
    }
}

impl Eq for NCPoly {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hseries::rat;

    fn w(ids: &[u16]) -> Word {
        Word::from_ids(ids.to_vec())
    }

    #[test]
    fn dropped_window_zeros_cap_the_tracked_order() {
        let short = HSeries::term(rat(1, 1), 0, 3);
        let p = NCPoly::monomial(w(&[0]), short.clone());
        let q = NCPoly::monomial(w(&[0]), short.neg());
        let z = p.add(&q);
        assert!(z.is_zero_on_window());
        assert_eq!(z.order(), 3);
        assert!(matches!(
            z.is_zero_to(5),
            Err(Error::InsufficientTruncation { needed: 5, have: 3 })
        ));
        assert_eq!(z.is_zero_to(3).unwrap(), true);
    }

    #[test]
    fn free_mul_concatenates_and_collects() {
        let a = NCPoly::from_terms([
            (w(&[0]), HSeries::one(8)),
            (w(&[1]), HSeries::one(8)),
        ]);
        let sq = a.free_mul(&a);
        assert_eq!(sq.num_terms(), 4);
        assert!(sq.coeff_of(&w(&[0, 1])).is_some());
        assert_eq!(sq.support_degree(), 2);
    }

    #[test]
    fn valuation_reporting_names_a_witness() {
        let p = NCPoly::from_terms([
            (w(&[0]), HSeries::h(8)),
            (w(&[1]), HSeries::term(rat(2, 1), 3, 8)),
        ]);
        assert_eq!(p.valuation(), Some(1));
        assert!(p.val_at_least(1).unwrap().is_ok());
        let (witness, v) = p.val_at_least(2).unwrap().unwrap_err();
        assert_eq!(witness, w(&[0]));
        assert_eq!(v, 1);
    }
}
