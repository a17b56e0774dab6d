//! Presentations and the rewriting engine.
//!
//! A presentation is a finite alphabet with a precedence (the id order), a
//! root-lattice grading, and a list of oriented rules lhs -> rhs. Rewriting
//! replaces the leftmost occurrence of the lowest-numbered matching rule and
//! merges coefficients exactly; normal forms of the shipped straightening
//! systems are the ascending PBW monomials.
//!
//! Orientation is admissible when every rhs term is strictly below the lhs
//! in the term measure (len - val(coeff), len, word). Subtracting the
//! coefficient valuation lets a rule trade a letter for a power of h, which
//! the e/f cross relations need (their Cartan corrections carry longer
//! words with higher h-valuation). Truncation keeps such trades finite in
//! practice; the rewrite budget is the hard stop and reports the offending
//! monomial if a rule set recurses.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use dashmap::DashMap;
use rand::Rng;

use crate::error::{Error, Result};
use crate::hseries::HSeries;
use crate::ncalg::poly::{NCPoly, FULL_ORDER};
use crate::ncalg::word::{GenId, GeneratorSymbol, Word};

pub const DEFAULT_BUDGET: u64 = 1_000_000;

const NF_CACHE_BYTES: usize = 512 << 20;

#[derive(Clone, Debug, PartialEq)]
pub struct Rule {
    pub lhs: Word,
    pub rhs: NCPoly,
}

/// (len - val, len, word): the measure under which every rule must strictly
/// descend, checked at freeze time.
pub(crate) fn term_measure(w: &Word, coeff_val: i32) -> (i64, usize, Vec<GenId>) {
    (w.len() as i64 - coeff_val as i64, w.len(), w.ids().to_vec())
}

pub struct PresentationBuilder {
    grading_dim: usize,
    letters: Vec<GeneratorSymbol>,
    names: HashMap<String, GenId>,
    rules: Vec<Rule>,
    budget: u64,
}

impl PresentationBuilder {
    pub fn new(grading_dim: usize) -> Self {
        PresentationBuilder {
            grading_dim,
            letters: Vec::new(),
            names: HashMap::new(),
            rules: Vec::new(),
            budget: DEFAULT_BUDGET,
        }
    }

    /// Letters gain precedence in insertion order.
    pub fn letter(&mut self, name: &str, grade: Vec<i64>) -> GenId {
        assert_eq!(grade.len(), self.grading_dim, "grade dimension mismatch for {name}");
        assert!(
            !name.is_empty() && name != "1" && !name.contains(['*', ' ', '\t', '\n']),
            "letter name {name:?} clashes with the word syntax"
        );
        assert!(!self.names.contains_key(name), "duplicate letter {name}");
        let id = self.letters.len() as GenId;
        self.letters.push(GeneratorSymbol { id, name: name.to_string(), grade });
        self.names.insert(name.to_string(), id);
        id
    }

    pub fn rule(&mut self, lhs: Word, rhs: NCPoly) {
        self.rules.push(Rule { lhs, rhs });
    }

    pub fn budget(&mut self, budget: u64) {
        self.budget = budget;
    }

    pub fn freeze(self) -> Result<Presentation> {
        let bad = |message: String| Error::BadPresentation { message };
        for rule in &self.rules {
            if rule.lhs.is_empty() {
                return Err(bad("rule with empty lhs".into()));
            }
            for id in rule.lhs.ids().iter().chain(rule.rhs.terms().flat_map(|(w, _)| w.ids())) {
                if *id as usize >= self.letters.len() {
                    return Err(bad(format!("unknown generator id {id}")));
                }
            }
            let lhs_grade = word_grade(&self.letters, &rule.lhs);
            let lhs_measure = term_measure(&rule.lhs, 0);
            for (w, c) in rule.rhs.terms() {
                if word_grade(&self.letters, w) != lhs_grade {
                    return Err(bad(format!(
                        "rule {} is not grade-homogeneous",
                        word_string_raw(&self.letters, &rule.lhs)
                    )));
                }
                let v = c.valuation().expect("normalized rhs has no zero coefficients");
                if term_measure(w, v) >= lhs_measure {
                    return Err(Error::Orientation {
                        rule: word_string_raw(&self.letters, &rule.lhs),
                    });
                }
            }
        }
        let mut rule_index: HashMap<GenId, Vec<usize>> = HashMap::new();
        for (i, rule) in self.rules.iter().enumerate() {
            rule_index.entry(rule.lhs.ids()[0]).or_default().push(i);
        }
        Ok(Presentation {
            grading_dim: self.grading_dim,
            letters: self.letters,
            names: self.names,
            rules: self.rules,
            rule_index,
            budget: self.budget,
            nf_cache: DashMap::new(),
            nf_cache_bytes: AtomicUsize::new(0),
        })
    }
}

fn word_grade(letters: &[GeneratorSymbol], w: &Word) -> Vec<i64> {
    let dim = letters.first().map_or(0, |g| g.grade.len());
    let mut grade = vec![0i64; dim];
    for id in w.ids() {
        for (g, x) in grade.iter_mut().zip(&letters[*id as usize].grade) {
            *g += x;
        }
    }
    grade
}

fn word_string_raw(letters: &[GeneratorSymbol], w: &Word) -> String {
    if w.is_empty() {
        return "1".to_string();
    }
    w.ids()
        .iter()
        .map(|id| letters[*id as usize].name.as_str())
        .collect::<Vec<_>>()
        .join("*")
}

#[derive(Debug)]
pub struct Presentation {
    grading_dim: usize,
    letters: Vec<GeneratorSymbol>,
    names: HashMap<String, GenId>,
    rules: Vec<Rule>,
    rule_index: HashMap<GenId, Vec<usize>>,
    budget: u64,
    nf_cache: DashMap<Word, Arc<NCPoly>>,
    nf_cache_bytes: AtomicUsize,
}

impl PartialEq for Presentation {
    fn eq(&self, other: &Self) -> bool {
        self.grading_dim == other.grading_dim
            && self.letters == other.letters
            && self.rules == other.rules
    }
}

impl Presentation {
    pub fn grading_dim(&self) -> usize {
        self.grading_dim
    }

    pub fn letters(&self) -> &[GeneratorSymbol] {
        &self.letters
    }

    pub fn letter(&self, id: GenId) -> &GeneratorSymbol {
        &self.letters[id as usize]
    }

    pub fn letter_id(&self, name: &str) -> Option<GenId> {
        self.names.get(name).copied()
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn word_grade(&self, w: &Word) -> Vec<i64> {
        word_grade(&self.letters, w)
    }

    /// Common grade of all monomials, or None if inhomogeneous or zero.
    pub fn poly_grade(&self, p: &NCPoly) -> Option<Vec<i64>> {
        let mut grade = None;
        for (w, _) in p.terms() {
            let g = self.word_grade(w);
            match &grade {
                None => grade = Some(g),
                Some(seen) if *seen != g => return None,
                _ => {}
            }
        }
        grade
    }

    /// Leftmost position, lowest rule index: the deterministic strategy.
    pub fn find_redex(&self, w: &Word) -> Option<(usize, usize)> {
        for pos in 0..w.len() {
            if let Some(candidates) = self.rule_index.get(&w.ids()[pos]) {
                for &ri in candidates {
                    if w.matches_at(&self.rules[ri].lhs, pos) {
                        return Some((pos, ri));
                    }
                }
            }
        }
        None
    }

    pub fn is_normal(&self, w: &Word) -> bool {
        self.find_redex(w).is_none()
    }

    fn all_redexes(&self, w: &Word) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for pos in 0..w.len() {
            if let Some(candidates) = self.rule_index.get(&w.ids()[pos]) {
                for &ri in candidates {
                    if w.matches_at(&self.rules[ri].lhs, pos) {
                        out.push((pos, ri));
                    }
                }
            }
        }
        out
    }

    /// One rewrite step at the given redex, with unit coefficient.
    pub fn apply_rule_at(&self, w: &Word, pos: usize, ri: usize) -> NCPoly {
        let rule = &self.rules[ri];
        debug_assert!(w.matches_at(&rule.lhs, pos));
        let mut terms = BTreeMap::new();
        for (rw, rc) in rule.rhs.terms() {
            let nw = w.splice(pos, rule.lhs.len(), rw);
            let e = terms.entry(nw).or_insert_with(|| HSeries::zero(FULL_ORDER));
            *e = e.add(rc);
        }
        NCPoly::normalized(terms, rule.rhs.order())
    }

    /// Bounds the memo so a long run cannot hold every cascade it ever saw.
    /// Entry sizes span orders of magnitude, so the budget is in estimated
    /// bytes rather than entries. No result depends on a hit, so flushing
    /// wholesale just means the walk recomputes what it needs.
    fn memoize(&self, word: Word, nf: Arc<NCPoly>) {
        let mut cost = 128 + 4 * word.len();
        for (w, c) in nf.terms() {
            cost += 96 + 4 * w.len() + 160 * c.terms().count();
        }
        if self.nf_cache_bytes.fetch_add(cost, Ordering::Relaxed) + cost >= NF_CACHE_BYTES {
            self.nf_cache.clear();
            self.nf_cache_bytes.store(cost, Ordering::Relaxed);
        }
        self.nf_cache.insert(word, nf);
    }

    /// Normal form of a single word, memoized per presentation.
    pub fn normal_word(&self, w: &Word) -> Result<NCPoly> {
        Ok((*self.normal_word_shared(w)?).clone())
    }

    /// Every word met along the rewrite cascade is memoized, not just the
    /// argument, so a word reachable along many derivation paths is
    /// expanded exactly once in the lifetime of the presentation. The
    /// budget counts cache-missing rule applications within one call. A
    /// word that re-enters its own derivation can never finish on the
    /// window (each pass raises the coefficient valuation, never past the
    /// window), so that case reports budget exhaustion right away.
    fn normal_word_shared(&self, w: &Word) -> Result<Arc<NCPoly>> {
        if let Some(hit) = self.nf_cache.get(w) {
            return Ok(hit.clone());
        }
        struct Frame {
            word: Word,
            parts: Vec<(Word, HSeries)>,
            next: usize,
            acc: BTreeMap<Word, HSeries>,
            cap: i32,
        }
        let mut budget = self.budget;
        let mut stack: Vec<Frame> = Vec::new();
        let mut on_stack: HashSet<Word> = HashSet::new();
        let mut pending = Some(w.clone());
        let mut returned: Option<Arc<NCPoly>> = None;
        loop {
            if let Some(word) = pending.take() {
                if let Some(hit) = self.nf_cache.get(&word) {
                    returned = Some(hit.clone());
                } else if on_stack.contains(&word) {
                    return Err(Error::BudgetExceeded { monomial: self.word_string(&word) });
                } else {
                    match self.find_redex(&word) {
                        None => {
                            let nf = Arc::new(NCPoly::monomial(word.clone(), HSeries::one(FULL_ORDER)));
                            self.memoize(word, nf.clone());
                            returned = Some(nf);
                        }
                        Some((pos, ri)) => {
                            if budget == 0 {
                                return Err(Error::BudgetExceeded { monomial: self.word_string(&word) });
                            }
                            budget -= 1;
                            let rule = &self.rules[ri];
                            let parts: Vec<(Word, HSeries)> = rule
                                .rhs
                                .terms()
                                .map(|(rw, rc)| (word.splice(pos, rule.lhs.len(), rw), rc.clone()))
                                .collect();
                            let cap = if parts.is_empty() { rule.rhs.order() } else { FULL_ORDER };
                            on_stack.insert(word.clone());
                            stack.push(Frame { word, parts, next: 0, acc: BTreeMap::new(), cap });
                        }
                    }
                }
            }
            loop {
                let Some(top) = stack.last_mut() else {
                    let result = returned.take().expect("empty stack only after a result");
                    return Ok(result);
                };
                if let Some(nf) = returned.take() {
                    let (_, rc) = &top.parts[top.next];
                    let scaled = nf.scale(rc);
                    top.cap = top.cap.min(scaled.order());
                    for (sw, sc) in scaled.into_terms() {
                        merge(&mut top.acc, sw, sc);
                    }
                    top.next += 1;
                }
                if top.next < top.parts.len() {
                    pending = Some(top.parts[top.next].0.clone());
                    break;
                }
                let frame = stack.pop().expect("frame still on stack");
                on_stack.remove(&frame.word);
                let result = Arc::new(NCPoly::normalized(frame.acc, frame.cap));
                self.memoize(frame.word, result.clone());
                returned = Some(result);
            }
        }
    }

    pub fn normal_form(&self, p: &NCPoly) -> Result<NCPoly> {
        let mut acc: BTreeMap<Word, HSeries> = BTreeMap::new();
        let mut cap = p.order();
        for (w, c) in p.terms() {
            let scaled = self.normal_word_shared(w)?.scale(c);
            cap = cap.min(scaled.order());
            for (sw, sc) in scaled.into_terms() {
                merge(&mut acc, sw, sc);
            }
        }
        Ok(NCPoly::normalized(acc, cap))
    }

    /// Normal form under a randomized strategy (random pending term, random
    /// redex), bypassing the cache. Confluent rule sets must make this agree
    /// with [`Presentation::normal_form`]; the suites test exactly that.
    pub fn normal_form_with_strategy<R: Rng>(&self, p: &NCPoly, rng: &mut R) -> Result<NCPoly> {
        let mut budget = self.budget;
        let mut pending: BTreeMap<Word, HSeries> = BTreeMap::new();
        let mut cap = p.order();
        for (w, c) in p.terms() {
            merge(&mut pending, w.clone(), c.clone());
        }
        let mut done: BTreeMap<Word, HSeries> = BTreeMap::new();
        while !pending.is_empty() {
            let pick = rng.gen_range(0..pending.len());
            let word = pending.keys().nth(pick).expect("index in range").clone();
            let coeff = pending.remove(&word).expect("key present");
            if coeff.is_zero_on_window() {
                cap = cap.min(coeff.order());
                continue;
            }
            let redexes = self.all_redexes(&word);
            if redexes.is_empty() {
                merge(&mut done, word, coeff);
                continue;
            }
            if budget == 0 {
                return Err(Error::BudgetExceeded { monomial: self.word_string(&word) });
            }
            budget -= 1;
            let (pos, ri) = redexes[rng.gen_range(0..redexes.len())];
            let rule = &self.rules[ri];
            for (rw, rc) in rule.rhs.terms() {
                let nw = word.splice(pos, rule.lhs.len(), rw);
                merge(&mut pending, nw, coeff.mul(rc));
            }
        }
        Ok(NCPoly::normalized(done, cap))
    }

    /// Product in the presented algebra: concatenate, then normalize.
    pub fn multiply(&self, a: &NCPoly, b: &NCPoly) -> Result<NCPoly> {
        self.normal_form(&a.free_mul(b))
    }

    pub fn multiply_all(&self, factors: &[&NCPoly]) -> Result<NCPoly> {
        let mut acc = NCPoly::one(FULL_ORDER);
        for f in factors {
            acc = self.multiply(&acc, f)?;
        }
        Ok(acc)
    }

    /// The h = 0 shadow: same alphabet, rule coefficients evaluated at h^0.
    /// Orientation survives because only valuation-zero terms keep their
    /// constant coefficient.
    pub fn classical_limit(&self) -> Presentation {
        let mut b = PresentationBuilder::new(self.grading_dim);
        for g in &self.letters {
            b.letter(&g.name, g.grade.clone());
        }
        b.budget(self.budget);
        for rule in &self.rules {
            let mut terms = BTreeMap::new();
            for (w, c) in rule.rhs.terms() {
                let c0 = c.coeff(0).expect("rule coefficient windows include h^0");
                terms.insert(w.clone(), HSeries::term(c0, 0, c.order()));
            }
            b.rule(rule.lhs.clone(), NCPoly::normalized(terms, rule.rhs.order()));
        }
        b.freeze().expect("classical limit preserves admissibility")
    }

    pub fn word_string(&self, w: &Word) -> String {
        word_string_raw(&self.letters, w)
    }

    pub fn poly_string(&self, p: &NCPoly) -> String {
        if p.is_zero_on_window() {
            return format!("0 (order {})", p.order());
        }
        p.terms()
            .map(|(w, c)| format!("[{}] {}", c, self.word_string(w)))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn parse_word(&self, s: &str) -> Result<Word> {
        let s = s.trim();
        if s == "1" {
            return Ok(Word::empty());
        }
        let mut ids = Vec::new();
        for part in s.split('*') {
            let id = self
                .letter_id(part.trim())
                .ok_or_else(|| Error::Parse { at: part.to_string() })?;
            ids.push(id);
        }
        Ok(Word::from_ids(ids))
    }
}

fn merge(map: &mut BTreeMap<Word, HSeries>, w: Word, c: HSeries) {
    match map.get_mut(&w) {
        Some(e) => e.add_assign(&c),
        None => {
            map.insert(w, c);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hseries::rat;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// One Weyl pair: letters a < b, rule b*a -> a*b + 1.
    fn weyl() -> Presentation {
        let mut b = PresentationBuilder::new(0);
        let a_id = b.letter("a", vec![]);
        let b_id = b.letter("b", vec![]);
        b.rule(
            Word::from_ids(vec![b_id, a_id]),
            NCPoly::from_terms([
                (Word::from_ids(vec![a_id, b_id]), HSeries::one(FULL_ORDER)),
                (Word::empty(), HSeries::one(FULL_ORDER)),
            ]),
        );
        b.freeze().unwrap()
    }

    fn w(ids: &[u16]) -> Word {
        Word::from_ids(ids.to_vec())
    }

    #[test]
    fn weyl_straightening() {
        let p = weyl();
        let ba = p.normal_word(&w(&[1, 0])).unwrap();
        assert_eq!(p.poly_string(&ba), format!("[1 + O(h^{})] 1 + [1 + O(h^{})] a*b", FULL_ORDER + 1, FULL_ORDER + 1));
        let bba = p.normal_word(&w(&[1, 1, 0])).unwrap();
        let expected = NCPoly::from_terms([
            (w(&[0, 1, 1]), HSeries::one(FULL_ORDER)),
            (w(&[1]), HSeries::int(2, FULL_ORDER)),
        ]);
        assert!(bba.agrees(&expected));
    }

    #[test]
    fn normal_form_is_idempotent_and_linear() {
        let p = weyl();
        let x = NCPoly::from_terms([
            (w(&[1, 0, 1, 0]), HSeries::int(3, 8)),
            (w(&[1, 1, 0]), HSeries::h(8)),
        ]);
        let nf = p.normal_form(&x).unwrap();
        assert_eq!(p.normal_form(&nf).unwrap(), nf);
        let y = NCPoly::monomial(w(&[1, 0]), HSeries::one(8));
        let lin = p
            .normal_form(&x.scale(&HSeries::int(2, 8)).add(&y.scale(&HSeries::h(8))))
            .unwrap();
        let rhs = nf
            .scale(&HSeries::int(2, 8))
            .add(&p.normal_form(&y).unwrap().scale(&HSeries::h(8)));
        assert!(lin.agrees(&rhs));
    }

    #[test]
    fn randomized_strategy_agrees_with_the_deterministic_one() {
        let p = weyl();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for ids in [[1u16, 0, 1, 0, 1, 0].as_slice(), &[1, 1, 1, 0, 0], &[0, 1, 1, 0, 1]] {
            let x = NCPoly::monomial(Word::from_ids(ids.to_vec()), HSeries::one(8));
            let nf = p.normal_form(&x).unwrap();
            for _ in 0..5 {
                let shuffled = p.normal_form_with_strategy(&x, &mut rng).unwrap();
                assert!(shuffled.agrees(&nf));
            }
        }
    }

    #[test]
    fn budget_exhaustion_names_the_monomial() {
        let mut b = PresentationBuilder::new(0);
        let x = b.letter("x", vec![]);
        // x -> h*x is admissible under the measure but loops forever,
        // multiplying the coefficient by h each pass.
        b.rule(
            Word::single(x),
            NCPoly::monomial(Word::single(x), HSeries::h(6)),
        );
        b.budget(100);
        let p = b.freeze().unwrap();
        match p.normal_word(&Word::single(x)) {
            Err(Error::BudgetExceeded { monomial }) => assert_eq!(monomial, "x"),
            other => panic!("expected budget exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn inadmissible_orientation_is_rejected_at_freeze() {
        let mut b = PresentationBuilder::new(0);
        let x = b.letter("x", vec![]);
        let y = b.letter("y", vec![]);
        b.rule(
            w(&[y, x]),
            NCPoly::monomial(w(&[x, y]), HSeries::one(8)).scale_q(&rat(1, 1)).add(
                &NCPoly::monomial(w(&[y, x, x]), HSeries::one(8)),
            ),
        );
        assert!(matches!(b.freeze(), Err(Error::Orientation { .. })));
    }

    #[test]
    fn classical_limit_keeps_valuation_zero_terms() {
        let mut b = PresentationBuilder::new(0);
        let x = b.letter("x", vec![]);
        let y = b.letter("y", vec![]);
        b.rule(
            w(&[y, x]),
            NCPoly::from_terms([
                (w(&[x, y]), HSeries::from_terms([(0, rat(1, 1)), (1, rat(5, 1))], 8)),
                (Word::empty(), HSeries::h(8)),
            ]),
        );
        let p = b.freeze().unwrap();
        let cl = p.classical_limit();
        let nf = cl.normal_word(&w(&[y, x])).unwrap();
        assert_eq!(nf.num_terms(), 1);
        assert_eq!(nf.coeff_of(&w(&[x, y])).unwrap().coeff(0).unwrap(), rat(1, 1));
    }
}
