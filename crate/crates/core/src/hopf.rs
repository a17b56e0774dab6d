//! The coalgebra calculus over a built algebra: iterated coproducts,
//! slot-supported coproduct families, their reduced (counit-kernel)
//! companions, and the axiom checks that certify the registered images.
//!
//! Everything here is determined by the letter tables stored on the
//! algebra. The coproduct extends multiplicatively into two slots and is
//! iterated by expanding the first slot, so a fixed bracketing is chosen
//! once; the coassociativity check in the axiom suite is what makes that
//! choice immaterial. The reduced family is the inclusion-exclusion
//! transform of the slot-supported one, and the two stay mutually
//! inverse, which the tests pin down subset by subset.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::hseries::HSeries;
use crate::ncalg::morphism::{apply_poly_morphism, apply_tensor_morphism};
use crate::ncalg::poly::{NCPoly, FULL_ORDER};
use crate::ncalg::tensor::TensorPoly;
use crate::ncalg::word::Word;
use crate::uqgl::{counit, QuantumAlgebra};

fn word_poly(w: &Word) -> NCPoly {
    NCPoly::monomial(w.clone(), HSeries::one(FULL_ORDER))
}

pub fn coproduct(a: &QuantumAlgebra, x: &NCPoly) -> Result<TensorPoly> {
    apply_tensor_morphism(x, a.coproduct_images(), a.presentation(), 2, false)
}

pub fn antipode(a: &QuantumAlgebra, x: &NCPoly) -> Result<NCPoly> {
    apply_poly_morphism(x, a.antipode_images()?, a.presentation(), true)
}

/// Applies the coproduct inside one slot of a tensor element, splicing
/// the two result slots in place; every other slot is carried through.
pub fn expand_slot(a: &QuantumAlgebra, t: &TensorPoly, slot: usize) -> Result<TensorPoly> {
    assert!(slot < t.slots(), "slot {slot} out of range for {} slots", t.slots());
    let mut images: HashMap<Word, TensorPoly> = HashMap::new();
    let mut out = TensorPoly::zero(t.slots() + 1, t.order());
    for (tuple, c) in t.terms() {
        let img = match images.get(&tuple[slot]) {
            Some(hit) => hit.clone(),
            None => {
                let img = coproduct(a, &word_poly(&tuple[slot]))?;
                images.insert(tuple[slot].clone(), img.clone());
                img
            }
        };
        let mut spliced = TensorPoly::unit(0, FULL_ORDER);
        for w in &tuple[..slot] {
            spliced = spliced.tensor_concat(&TensorPoly::from_poly(&word_poly(w)));
        }
        spliced = spliced.tensor_concat(&img);
        for w in &tuple[slot + 1..] {
            spliced = spliced.tensor_concat(&TensorPoly::from_poly(&word_poly(w)));
        }
        out = out.add(&spliced.scale(c))?;
    }
    Ok(out)
}

/// The d-fold coproduct. d = 0 is the counit landing on the scalar
/// line, d = 1 the identity, and beyond that the first slot is expanded
/// repeatedly.
pub fn coproduct_power(a: &QuantumAlgebra, x: &NCPoly, d: usize) -> Result<TensorPoly> {
    if d == 0 {
        return Ok(TensorPoly::unit(0, FULL_ORDER).scale(&counit(&a.normal_form(x)?)));
    }
    let mut t = TensorPoly::from_poly(&a.normal_form(x)?);
    for _ in 1..d {
        t = expand_slot(a, &t, 0)?;
    }
    Ok(t)
}

/// The coproduct family: the |e|-fold coproduct inserted into the chosen
/// slots of an ambient power, units elsewhere. Slots are zero-indexed and
/// must be ascending; the empty selection is the counit times the unit.
pub fn coproduct_slots(
    a: &QuantumAlgebra,
    x: &NCPoly,
    e: &[usize],
    slots: usize,
) -> Result<TensorPoly> {
    Ok(coproduct_power(a, x, e.len())?.embed(slots, e))
}

/// The reduced family: inclusion-exclusion over sub-selections, with the
/// sign alternating in the number of omitted slots. That is the one sign
/// convention under which the plain subset sum inverts it back to the
/// coproduct family, which `reduced_and_plain_families_invert` checks.
pub fn delta_slots(
    a: &QuantumAlgebra,
    x: &NCPoly,
    e: &[usize],
    slots: usize,
) -> Result<TensorPoly> {
    let k = e.len();
    assert!(k < usize::BITS as usize);
    let mut out = TensorPoly::zero(slots, FULL_ORDER);
    for mask in 0..(1usize << k) {
        let sub: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| e[i]).collect();
        let term = coproduct_slots(a, x, &sub, slots)?;
        let term = if (k - sub.len()) % 2 == 0 { term } else { term.neg() };
        out = out.add(&term)?;
    }
    Ok(out)
}

/// The reduced d-fold coproduct over the full slot set, computed as the
/// counit-kernel projection of the plain power: a basis word dies under
/// id minus counit exactly when it is empty, so the projection is an
/// exact term filter rather than a 2^d-term subset sum.
pub fn delta_power(a: &QuantumAlgebra, x: &NCPoly, d: usize) -> Result<TensorPoly> {
    Ok(coproduct_power(a, x, d)?.filter_terms(|t| t.iter().all(|w| !w.is_empty())))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LeibnizVerdict {
    pub union_rule: bool,
    pub commutator_rule: bool,
}

impl LeibnizVerdict {
    pub fn holds(&self) -> bool {
        self.union_rule && self.commutator_rule
    }
}

/// The product rule for the reduced family: applied to a product, it
/// expands over every pair of sub-selections whose union is the full
/// selection, and applied to a commutator the disjoint pairs cancel and
/// only the overlapping ones remain. Both forms are checked.
pub fn leibniz_check(
    a: &QuantumAlgebra,
    x: &NCPoly,
    y: &NCPoly,
    phi: &[usize],
) -> Result<LeibnizVerdict> {
    let slots = phi.iter().max().map_or(0, |m| m + 1);
    let mut dx: HashMap<Vec<usize>, TensorPoly> = HashMap::new();
    let mut dy: HashMap<Vec<usize>, TensorPoly> = HashMap::new();
    let reduced = |cache: &mut HashMap<Vec<usize>, TensorPoly>,
                       elem: &NCPoly,
                       sel: Vec<usize>|
     -> Result<TensorPoly> {
        if let Some(hit) = cache.get(&sel) {
            return Ok(hit.clone());
        }
        let img = delta_slots(a, elem, &sel, slots)?;
        cache.insert(sel, img.clone());
        Ok(img)
    };

    let k = phi.len();
    let mut union_sum = TensorPoly::zero(slots, FULL_ORDER);
    let mut overlap_sum = TensorPoly::zero(slots, FULL_ORDER);
    for code in 0..3usize.pow(k as u32) {
        let mut rest = code;
        let mut lam = Vec::new();
        let mut ups = Vec::new();
        let mut overlap = false;
        for &s in phi {
            match rest % 3 {
                0 => lam.push(s),
                1 => ups.push(s),
                _ => {
                    lam.push(s);
                    ups.push(s);
                    overlap = true;
                }
            }
            rest /= 3;
        }
        let da = reduced(&mut dx, x, lam)?;
        let db = reduced(&mut dy, y, ups)?;
        let prod = da.mul(&db, a.presentation())?;
        if overlap {
            overlap_sum = overlap_sum.add(&prod.sub(&db.mul(&da, a.presentation())?)?)?;
        }
        union_sum = union_sum.add(&prod)?;
    }

    let xy = a.multiply(x, y)?;
    let union_rule = delta_slots(a, &xy, phi, slots)?.agrees(&union_sum);
    let commutator_rule = if phi.is_empty() {
        true
    } else {
        let comm = xy.sub(&a.multiply(y, x)?);
        delta_slots(a, &comm, phi, slots)?.agrees(&overlap_sum)
    };
    Ok(LeibnizVerdict { union_rule, commutator_rule })
}

/// Contracts one slot against the counit: terms whose word there is
/// nonempty are killed, the survivors lose the slot.
pub fn counit_slot(t: &TensorPoly, slot: usize) -> TensorPoly {
    assert!(slot < t.slots());
    let kept = t.filter_terms(|tuple| tuple[slot].is_empty());
    let mut out = TensorPoly::zero(t.slots() - 1, t.order());
    for (tuple, c) in kept.terms() {
        let mut spliced = TensorPoly::unit(0, FULL_ORDER);
        for (i, w) in tuple.iter().enumerate() {
            if i != slot {
                spliced = spliced.tensor_concat(&TensorPoly::from_poly(&word_poly(w)));
            }
        }
        out = out.add(&spliced.scale(c)).expect("slot counts match by construction");
    }
    out
}

#[derive(Clone, Debug)]
pub struct AxiomFailure {
    pub law: &'static str,
    pub element: String,
}

#[derive(Clone, Debug)]
pub struct AxiomReport {
    pub elements: usize,
    pub checks: usize,
    pub failures: Vec<AxiomFailure>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Coassociativity, both counit laws, and both antipode laws, on every
/// letter and on `samples` seeded random elements of degree at most
/// `deg`. The five laws are checked window-exactly at the algebra's
/// working order.
pub fn hopf_axiom_suite(
    a: &QuantumAlgebra,
    deg: usize,
    samples: usize,
    seed: u64,
) -> Result<AxiomReport> {
    let mut elements: Vec<(String, NCPoly)> = a
        .presentation()
        .letters()
        .iter()
        .map(|g| (g.name.clone(), word_poly(&Word::single(g.id))))
        .collect();
    for (i, x) in sample_elements(a, deg, samples, seed)?.into_iter().enumerate() {
        elements.push((format!("sample#{i}"), x));
    }

    let pres = a.presentation();
    let anti = a.antipode_images()?;
    let mut failures = Vec::new();
    let mut checks = 0;
    for (label, x) in &elements {
        let fail = |law: &'static str| AxiomFailure { law, element: label.clone() };
        let dx = coproduct(a, x)?;

        let left = expand_slot(a, &dx, 0)?;
        let right = expand_slot(a, &dx, 1)?;
        checks += 1;
        if !left.agrees(&right) {
            failures.push(fail("coassociativity"));
        }

        let nx = a.normal_form(x)?;
        let id1 = counit_slot(&dx, 0);
        let id2 = counit_slot(&dx, 1);
        checks += 2;
        if !id1.agrees(&TensorPoly::from_poly(&nx)) {
            failures.push(fail("left counit"));
        }
        if !id2.agrees(&TensorPoly::from_poly(&nx)) {
            failures.push(fail("right counit"));
        }

        let target = NCPoly::one(FULL_ORDER).scale(&counit(&nx));
        let mut s_left = NCPoly::zero(dx.order());
        let mut s_right = NCPoly::zero(dx.order());
        let mut s_memo: HashMap<Word, NCPoly> = HashMap::new();
        for (tuple, c) in dx.terms() {
            for (w, flip) in [(&tuple[0], false), (&tuple[1], true)] {
                if !s_memo.contains_key(w) {
                    let img = apply_poly_morphism(&word_poly(w), anti, pres, true)?;
                    s_memo.insert(w.clone(), img);
                }
                let s = &s_memo[w];
                let prod = if flip {
                    pres.multiply(&word_poly(&tuple[0]), s)?
                } else {
                    pres.multiply(s, &word_poly(&tuple[1]))?
                };
                if flip {
                    s_right = s_right.add(&prod.scale(c));
                } else {
                    s_left = s_left.add(&prod.scale(c));
                }
            }
        }
        checks += 2;
        if !s_left.agrees(&target) {
            failures.push(fail("left antipode"));
        }
        if !s_right.agrees(&target) {
            failures.push(fail("right antipode"));
        }
    }
    Ok(AxiomReport { elements: elements.len(), checks, failures })
}

/// Reproducible random elements: a few short words in the letters with
/// small nonzero integer coefficients, reduced to normal form.
pub fn sample_elements(
    a: &QuantumAlgebra,
    deg: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<NCPoly>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nletters = a.presentation().letters().len() as u16;
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut x = NCPoly::zero(FULL_ORDER);
        for _ in 0..rng.gen_range(1..=3usize) {
            let len = rng.gen_range(1..=deg.max(1));
            let ids: Vec<u16> = (0..len).map(|_| rng.gen_range(0..nletters)).collect();
            let mut c = rng.gen_range(-3i64..3);
            if c >= 0 {
                c += 1;
            }
            x = x.add(&NCPoly::monomial(Word::from_ids(ids), HSeries::int(c, FULL_ORDER)));
        }
        out.push(a.normal_form(&x)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::uqgl::{build_gl, build_sl};

    fn gl2() -> &'static QuantumAlgebra {
        static A: std::sync::OnceLock<QuantumAlgebra> = std::sync::OnceLock::new();
        A.get_or_init(|| build_gl(2, 6).unwrap())
    }

    fn sl2() -> &'static QuantumAlgebra {
        static A: std::sync::OnceLock<QuantumAlgebra> = std::sync::OnceLock::new();
        A.get_or_init(|| build_sl(2, 6).unwrap())
    }

    #[test]
    fn power_one_is_the_identity_and_power_zero_the_counit() {
        let a = gl2();
        let x = a.require("e[1]").add(a.require("t[1]"));
        let p1 = coproduct_power(a, &x, 1).unwrap();
        assert!(p1.agrees(&TensorPoly::from_poly(&x)));
        let p0 = coproduct_power(a, &x, 0).unwrap();
        assert_eq!(p0.slots(), 0);
        let (_, c) = p0.terms().next().unwrap();
        assert!(c.agrees(&counit(&x)));
    }

    #[test]
    fn simple_raising_letter_coproduct_matches_its_table() {
        let a = gl2();
        let e = a.require("e[1]");
        let t = a.require("t[1]");
        let one = NCPoly::one(FULL_ORDER);
        let expected = TensorPoly::tensor_of(&[e, &one])
            .add(&TensorPoly::tensor_of(&[t, e]))
            .unwrap();
        assert!(coproduct(a, e).unwrap().agrees(&expected));
    }

    #[test]
    fn cartan_letter_is_primitive_to_any_depth() {
        let a = gl2();
        let l = a.require("l[1]");
        let got = coproduct_power(a, l, 3).unwrap();
        let mut expected = TensorPoly::zero(3, FULL_ORDER);
        for slot in 0..3 {
            expected = expected.add(&TensorPoly::from_poly(l).embed(3, &[slot])).unwrap();
        }
        assert!(got.agrees(&expected));
    }

    #[test]
    fn depth_one_reduction_subtracts_the_counit_part() {
        let a = gl2();
        let x = a.require("t[1]").scale(&HSeries::int(2, FULL_ORDER));
        let got = delta_slots(a, &x, &[0], 1).unwrap();
        let expected = x.sub(&NCPoly::one(FULL_ORDER).scale(&counit(&x)));
        assert!(got.agrees(&TensorPoly::from_poly(&expected)));
    }

    #[test]
    fn reduced_and_plain_families_invert() {
        let a = gl2();
        for (k, x) in sample_elements(a, 3, 4, 11).unwrap().iter().enumerate() {
            let e: Vec<usize> = match k % 3 {
                0 => vec![0, 1, 2],
                1 => vec![0, 2],
                _ => vec![1],
            };
            let mut sum = TensorPoly::zero(3, FULL_ORDER);
            for mask in 0..(1usize << e.len()) {
                let sub: Vec<usize> =
                    (0..e.len()).filter(|i| mask >> i & 1 == 1).map(|i| e[i]).collect();
                sum = sum.add(&delta_slots(a, x, &sub, 3).unwrap()).unwrap();
            }
            assert!(
                sum.agrees(&coproduct_slots(a, x, &e, 3).unwrap()),
                "subset sum fails to rebuild the coproduct family on {e:?}"
            );
        }
    }

    #[test]
    fn kernel_projection_equals_the_subset_sum() {
        let a = gl2();
        for x in sample_elements(a, 3, 3, 23).unwrap() {
            for d in 1..=4usize {
                let full: Vec<usize> = (0..d).collect();
                let fast = delta_power(a, &x, d).unwrap();
                let literal = delta_slots(a, &x, &full, d).unwrap();
                assert!(fast.agrees(&literal), "depth {d} projection disagrees");
            }
        }
    }

    #[test]
    fn reduced_images_live_in_the_counit_kernel_slotwise() {
        let a = gl2();
        for x in sample_elements(a, 3, 3, 37).unwrap() {
            let img = delta_slots(a, &x, &[0, 1, 2], 3).unwrap();
            for (tuple, _) in img.terms() {
                assert!(tuple.iter().all(|w| !w.is_empty()));
            }
        }
    }

    #[test]
    fn product_rule_holds_for_the_cross_pair() {
        let a = sl2();
        let e = a.require("e[1]").clone();
        let f = a.require("f[1]").clone();
        let v = leibniz_check(a, &e, &f, &[0, 1]).unwrap();
        assert!(v.union_rule, "union expansion fails on the cross pair");
        assert!(v.commutator_rule, "commutator refinement fails on the cross pair");
    }

    #[test]
    fn product_rule_holds_on_random_pairs() {
        let a = gl2();
        let xs = sample_elements(a, 2, 3, 41).unwrap();
        let ys = sample_elements(a, 2, 3, 43).unwrap();
        for (x, y) in xs.iter().zip(&ys) {
            assert!(leibniz_check(a, x, y, &[0, 1]).unwrap().holds());
        }
        assert!(leibniz_check(a, &xs[0], &ys[0], &[]).unwrap().holds());
    }

    #[test]
    fn axiom_suite_accepts_the_shipped_tables() {
        let a = gl2();
        let report = hopf_axiom_suite(a, 3, 8, 7).unwrap();
        assert!(
            report.passed(),
            "axiom failures: {:?}",
            report.failures
        );
        assert_eq!(report.elements, a.presentation().letters().len() + 8);
    }

    #[test]
    fn antipode_reverses_products() {
        let a = gl2();
        let e = a.require("e[1]");
        let f = a.require("f[1]");
        let ef = a.multiply(e, f).unwrap();
        let got = antipode(a, &ef).unwrap();
        let expected = a
            .multiply(&antipode(a, f).unwrap(), &antipode(a, e).unwrap())
            .unwrap();
        assert!(got.agrees(&expected));
    }
}
