//! Elements of tensor powers of a presented algebra.
//!
//! A `TensorPoly` maps d-tuples of words to HSeries coefficients and tracks
//! a known order exactly like `NCPoly`. Multiplication is slotwise, with
//! each slot renormalized in the presentation.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::hseries::{HSeries, Q};
use crate::ncalg::poly::{NCPoly, FULL_ORDER};
use crate::ncalg::presentation::Presentation;
use crate::ncalg::word::Word;

#[derive(Clone, Debug)]
pub struct TensorPoly {
    slots: usize,
    terms: BTreeMap<Vec<Word>, HSeries>,
    order: i32,
}

impl TensorPoly {
    /// The zeroth power is the scalar line: its only key is the empty
    /// tuple, and concatenation with it is the identity.
    pub(crate) fn normalized(
        slots: usize,
        terms: BTreeMap<Vec<Word>, HSeries>,
        mut order: i32,
    ) -> TensorPoly {
        for c in terms.values() {
            order = order.min(c.order());
        }
        let terms = terms.into_iter().filter(|(_, c)| !c.is_zero_on_window()).collect();
        TensorPoly { slots, terms, order }
    }

    pub fn zero(slots: usize, order: i32) -> TensorPoly {
        Self::normalized(slots, BTreeMap::new(), order)
    }

    pub fn unit(slots: usize, order: i32) -> TensorPoly {
        Self::normalized(
            slots,
            [(vec![Word::empty(); slots], HSeries::one(order))].into_iter().collect(),
            order,
        )
    }

    pub fn from_poly(p: &NCPoly) -> TensorPoly {
        let terms = p.terms().map(|(w, c)| (vec![w.clone()], c.clone())).collect();
        Self::normalized(1, terms, p.order())
    }

    /// x_1 (x) ... (x) x_d from already-normal factors.
    pub fn tensor_of(factors: &[&NCPoly]) -> TensorPoly {
        assert!(!factors.is_empty());
        let mut acc = Self::from_poly(factors[0]);
        for f in &factors[1..] {
            acc = acc.tensor_concat(&Self::from_poly(f));
        }
        acc
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Word>, &HSeries)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero_on_window(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn valuation(&self) -> Option<i32> {
        self.terms.values().filter_map(HSeries::valuation).min()
    }

    fn vlow(&self) -> i32 {
        self.valuation().unwrap_or(self.order + 1)
    }

    /// Certifies valuation >= k or names an offending (tuple, valuation).
    pub fn val_at_least(&self, k: i32) -> Result<std::result::Result<(), (Vec<Word>, i32)>> {
        if self.order < k - 1 {
            return Err(Error::InsufficientTruncation { needed: k - 1, have: self.order });
        }
        for (t, c) in &self.terms {
            if let Some(v) = c.valuation() {
                if v < k {
                    return Ok(Err((t.clone(), v)));
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

    pub fn add(&self, other: &TensorPoly) -> Result<TensorPoly> {
        if self.slots != other.slots {
            return Err(Error::SlotMismatch { left: self.slots, right: other.slots });
        }
        let mut terms = self.terms.clone();
        for (t, c) in &other.terms {
            match terms.get_mut(t) {
                Some(e) => *e = e.add(c),
                None => {
                    terms.insert(t.clone(), c.clone());
                }
            }
        }
        Ok(Self::normalized(self.slots, terms, self.order.min(other.order)))
    }

    pub fn sub(&self, other: &TensorPoly) -> Result<TensorPoly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> TensorPoly {
        TensorPoly {
            slots: self.slots,
            terms: self.terms.iter().map(|(t, c)| (t.clone(), c.neg())).collect(),
            order: self.order,
        }
    }

    pub fn scale(&self, s: &HSeries) -> TensorPoly {
        let cap = (self.order + s.vlow()).min(s.order() + self.vlow());
        let terms = self.terms.iter().map(|(t, c)| (t.clone(), c.mul(s))).collect();
        Self::normalized(self.slots, terms, cap)
    }

    pub fn scale_q(&self, r: &Q) -> TensorPoly {
        let terms = self.terms.iter().map(|(t, c)| (t.clone(), c.scale(r))).collect();
        Self::normalized(self.slots, terms, self.order)
    }

    pub fn shift(&self, k: i32) -> Result<TensorPoly> {
        let mut terms = BTreeMap::new();
        for (t, c) in &self.terms {
            terms.insert(t.clone(), c.shift(k)?);
        }
        Ok(Self::normalized(self.slots, terms, self.order + k))
    }

    /// Slotwise product, renormalizing each slot in the presentation.
    pub fn mul(&self, other: &TensorPoly, p: &Presentation) -> Result<TensorPoly> {
        if self.slots != other.slots {
            return Err(Error::SlotMismatch { left: self.slots, right: other.slots });
        }
        let cap = (self.order + other.vlow()).min(other.order + self.vlow());
        let mut out: BTreeMap<Vec<Word>, HSeries> = BTreeMap::new();
        for (ta, ca) in &self.terms {
            for (tb, cb) in &other.terms {
                let coeff = ca.mul(cb);
                let mut partial: Vec<(Vec<Word>, HSeries)> = vec![(Vec::new(), coeff)];
                for slot in 0..self.slots {
                    let prod = p.normal_word(&ta[slot].concat(&tb[slot]))?;
                    let mut next = Vec::with_capacity(partial.len() * prod.num_terms());
                    for (words, c) in &partial {
                        for (w, wc) in prod.terms() {
                            let mut nw = words.clone();
                            nw.push(w.clone());
                            next.push((nw, c.mul(wc)));
                        }
                    }
                    partial = next;
                }
                for (words, c) in partial {
                    match out.get_mut(&words) {
                        Some(e) => *e = e.add(&c),
                        None => {
                            out.insert(words, c);
                        }
                    }
                }
            }
        }
        Ok(Self::normalized(self.slots, out, cap))
    }

    pub fn tensor_concat(&self, other: &TensorPoly) -> TensorPoly {
        let cap = (self.order + other.vlow()).min(other.order + self.vlow());
        let mut terms: BTreeMap<Vec<Word>, HSeries> = BTreeMap::new();
        for (ta, ca) in &self.terms {
            for (tb, cb) in &other.terms {
                let mut t = ta.clone();
                t.extend(tb.iter().cloned());
                let c = ca.mul(cb);
                match terms.get_mut(&t) {
                    Some(e) => *e = e.add(&c),
                    None => {
                        terms.insert(t, c);
                    }
                }
            }
        }
        Self::normalized(self.slots + other.slots, terms, cap)
    }

    /// Insertion into a larger tensor power: the k-th slot of self lands in
    /// slot positions[k] (ascending), every other slot gets the unit.
    pub fn embed(&self, slots: usize, positions: &[usize]) -> TensorPoly {
        assert_eq!(positions.len(), self.slots);
        assert!(positions.windows(2).all(|p| p[0] < p[1]));
        assert!(positions.iter().all(|&p| p < slots));
        let terms = self
            .terms
            .iter()
            .map(|(t, c)| {
                let mut padded = vec![Word::empty(); slots];
                for (k, &pos) in positions.iter().enumerate() {
                    padded[pos] = t[k].clone();
                }
                (padded, c.clone())
            })
            .collect();
        Self::normalized(slots, terms, self.order)
    }

    /// Keep only the terms whose word tuple satisfies the predicate; the
    /// discarded ones are exact removals, not window losses.
    pub fn filter_terms(&self, f: impl Fn(&[Word]) -> bool) -> TensorPoly {
        let terms = self
            .terms
            .iter()
            .filter(|(t, _)| f(t))
            .map(|(t, c)| (t.clone(), c.clone()))
            .collect();
        TensorPoly { slots: self.slots, terms, order: self.order }
    }

    pub fn truncate(&self, order: i32) -> TensorPoly {
        let order = order.min(self.order);
        let terms = self.terms.iter().map(|(t, c)| (t.clone(), c.truncate(order))).collect();
        Self::normalized(self.slots, terms, order)
    }

    pub fn agrees(&self, other: &TensorPoly) -> bool {
        let n = self.order.min(other.order);
        self.slots == other.slots && self.truncate(n).terms == other.truncate(n).terms
    }

    pub fn render(&self, p: &Presentation) -> String {
        if self.terms.is_empty() {
            return format!("0 (order {})", self.order);
        }
        self.terms
            .iter()
            .map(|(t, c)| {
                let words =
                    t.iter().map(|w| p.word_string(w)).collect::<Vec<_>>().join(" (x) ");
                if words.is_empty() {
                    format!("[{c}]")
                } else {
                    format!("[{c}] {words}")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl PartialEq for TensorPoly {
    fn eq(&self, other: &Self) -> bool {
        self.slots == other.slots && self.order == other.order && self.terms == other.terms
    }
}

impl Eq for TensorPoly {}

pub fn tensor_unit_like(slots: usize) -> TensorPoly {
    TensorPoly::unit(slots, FULL_ORDER)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncalg::presentation::PresentationBuilder;

    fn free_xy() -> Presentation {
        let mut b = PresentationBuilder::new(0);
        b.letter("x", vec![]);
        b.letter("y", vec![]);
        b.freeze().unwrap()
    }

    #[test]
    fn unit_slots_multiply_into_a_pure_tensor() {
        let p = free_xy();
        let x = NCPoly::monomial(Word::single(0), HSeries::one(8));
        let y = NCPoly::monomial(Word::single(1), HSeries::one(8));
        let left = TensorPoly::tensor_of(&[&x, &NCPoly::one(8)]);
        let right = TensorPoly::tensor_of(&[&NCPoly::one(8), &y]);
        let prod = left.mul(&right, &p).unwrap();
        assert_eq!(prod, TensorPoly::tensor_of(&[&x, &y]));
        assert_eq!(prod.slots(), 2);
    }

    #[test]
    fn concat_adds_slots_and_embed_pads_with_units() {
        let x = NCPoly::monomial(Word::single(0), HSeries::one(8));
        let t = TensorPoly::from_poly(&x);
        assert_eq!(t.tensor_concat(&t).slots(), 2);
        let e = t.embed(3, &[1]);
        assert_eq!(e.slots(), 3);
        let (tuple, _) = e.terms().next().unwrap();
        assert!(tuple[0].is_empty() && !tuple[1].is_empty() && tuple[2].is_empty());
    }

    #[test]
    fn slot_mismatch_is_an_error() {
        let x = NCPoly::one(8);
        let a = TensorPoly::tensor_of(&[&x, &x]);
        let b = TensorPoly::tensor_of(&[&x, &x, &x]);
        assert!(matches!(
            a.add(&b),
            Err(Error::SlotMismatch { left: 2, right: 3 })
        ));
    }
}
