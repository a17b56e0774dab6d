//! Algebra maps defined on letters and extended multiplicatively.
//!
//! Both directions of the Hopf structure factor through these two folds:
//! maps into the algebra itself (embeddings, the antipode) and maps into a
//! tensor power (coproducts). `anti` reverses each word before folding,
//! which is the whole difference between a homomorphism and an
//! antihomomorphism on letters.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::ncalg::poly::{NCPoly, FULL_ORDER};
use crate::ncalg::presentation::Presentation;
use crate::ncalg::tensor::TensorPoly;
use crate::ncalg::word::{GenId, Word};

fn letter_image<'a, T>(images: &'a BTreeMap<GenId, T>, id: GenId) -> Result<&'a T> {
    images.get(&id).ok_or(Error::MissingImage { letter: format!("#{id}") })
}

fn poly_word_image(
    w: &Word,
    images: &BTreeMap<GenId, NCPoly>,
    target: &Presentation,
    anti: bool,
    memo: &mut HashMap<Word, NCPoly>,
) -> Result<NCPoly> {
    if w.is_empty() {
        return Ok(NCPoly::one(FULL_ORDER));
    }
    if let Some(hit) = memo.get(w) {
        return Ok(hit.clone());
    }
    let ids = w.ids();
    let head = Word::from_ids(ids[..ids.len() - 1].to_vec());
    let head_img = poly_word_image(&head, images, target, anti, memo)?;
    let last_img = letter_image(images, ids[ids.len() - 1])?;
    let img = if anti {
        target.multiply(last_img, &head_img)?
    } else {
        target.multiply(&head_img, last_img)?
    };
    memo.insert(w.clone(), img.clone());
    Ok(img)
}

/// Extends letter images to the whole element. Prefix images are memoized,
/// so runs over a batch of PBW monomials share their common stems.
pub fn apply_poly_morphism(
    p: &NCPoly,
    images: &BTreeMap<GenId, NCPoly>,
    target: &Presentation,
    anti: bool,
) -> Result<NCPoly> {
    let mut memo = HashMap::new();
    let mut out = NCPoly::zero(p.order());
    for (w, c) in p.terms() {
        let img = poly_word_image(w, images, target, anti, &mut memo)?;
        out = out.add(&img.scale(c));
    }
    Ok(out)
}

fn tensor_word_image(
    w: &Word,
    images: &BTreeMap<GenId, TensorPoly>,
    target: &Presentation,
    slots: usize,
    anti: bool,
    memo: &mut HashMap<Word, TensorPoly>,
) -> Result<TensorPoly> {
    if w.is_empty() {
        return Ok(TensorPoly::unit(slots, FULL_ORDER));
    }
    if let Some(hit) = memo.get(w) {
        return Ok(hit.clone());
    }
    let ids = w.ids();
    let head = Word::from_ids(ids[..ids.len() - 1].to_vec());
    let head_img = tensor_word_image(&head, images, target, slots, anti, memo)?;
    let last_img = letter_image(images, ids[ids.len() - 1])?;
    let img = if anti {
        last_img.mul(&head_img, target)?
    } else {
        head_img.mul(last_img, target)?
    };
    memo.insert(w.clone(), img.clone());
    Ok(img)
}

/// Extends letter images valued in a tensor power, slotwise renormalized.
pub fn apply_tensor_morphism(
    p: &NCPoly,
    images: &BTreeMap<GenId, TensorPoly>,
    target: &Presentation,
    slots: usize,
    anti: bool,
) -> Result<TensorPoly> {
    let mut memo = HashMap::new();
    let mut out = TensorPoly::zero(slots, p.order());
    for (w, c) in p.terms() {
        let img = tensor_word_image(w, images, target, slots, anti, &mut memo)?;
        out = out.add(&img.scale(c))?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hseries::HSeries;
    use crate::ncalg::presentation::PresentationBuilder;

    fn free_xy() -> Presentation {
        let mut b = PresentationBuilder::new(0);
        b.letter("x", vec![]);
        b.letter("y", vec![]);
        b.freeze().unwrap()
    }

    #[test]
    fn identity_images_reproduce_the_element() {
        let p = free_xy();
        let images: BTreeMap<GenId, NCPoly> = (0..2)
            .map(|id| (id, NCPoly::monomial(Word::single(id), HSeries::one(FULL_ORDER))))
            .collect();
        let elem = NCPoly::from_terms([
            (p.parse_word("x*y").unwrap(), HSeries::h(8)),
            (Word::empty(), HSeries::one(8)),
        ]);
        let img = apply_poly_morphism(&elem, &images, &p, false).unwrap();
        assert!(img.agrees(&elem));
    }

    #[test]
    fn anti_morphism_reverses_words() {
        let p = free_xy();
        let images: BTreeMap<GenId, NCPoly> = (0..2)
            .map(|id| (id, NCPoly::monomial(Word::single(id), HSeries::one(FULL_ORDER))))
            .collect();
        let xy = NCPoly::monomial(p.parse_word("x*y").unwrap(), HSeries::one(8));
        let img = apply_poly_morphism(&xy, &images, &p, true).unwrap();
        assert!(img.agrees(&NCPoly::monomial(p.parse_word("y*x").unwrap(), HSeries::one(8))));
    }

    #[test]
    fn primitive_image_of_a_square_is_binomial() {
        let p = free_xy();
        let x = NCPoly::monomial(Word::single(0), HSeries::one(FULL_ORDER));
        let one = NCPoly::one(FULL_ORDER);
        let primitive = TensorPoly::tensor_of(&[&x, &one])
            .add(&TensorPoly::tensor_of(&[&one, &x]))
            .unwrap();
        let images: BTreeMap<GenId, TensorPoly> = [(0, primitive)].into_iter().collect();
        let xx = NCPoly::monomial(p.parse_word("x*x").unwrap(), HSeries::one(8));
        let img = apply_tensor_morphism(&xx, &images, &p, 2, false).unwrap();
        let x2 = p.multiply(&x, &x).unwrap();
        let expected = TensorPoly::tensor_of(&[&x2, &one])
            .add(&TensorPoly::tensor_of(&[&x, &x]).scale_q(&crate::hseries::rat(2, 1)))
            .unwrap()
            .add(&TensorPoly::tensor_of(&[&one, &x2]))
            .unwrap();
        assert!(img.agrees(&expected));
    }

    #[test]
    fn missing_letter_image_is_reported() {
        let p = free_xy();
        let images: BTreeMap<GenId, NCPoly> = BTreeMap::new();
        let x = NCPoly::monomial(Word::single(0), HSeries::one(8));
        assert!(matches!(
            apply_poly_morphism(&x, &images, &p, false),
            Err(Error::MissingImage { .. })
        ));
    }
}
