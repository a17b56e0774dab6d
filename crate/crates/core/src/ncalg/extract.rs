//! Slot components of a tensor element.
//!
//! Writing x = sum_t v_t (x) w_t with the w_t running over the word tuples
//! seen in the other slots, the v_t span the smallest subspace V with
//! x in V (x) U (x) ... (x) U. Membership of that span in a subspace only
//! needs the predicate on one spanning set, and linearity lets dependent
//! components inherit the verdict of the independent ones, so the predicate
//! runs once per rank, not once per term.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::hseries::Q;
use crate::linalg::{Insertion, SpanSolver, SparseVec};
use crate::ncalg::poly::NCPoly;
use crate::ncalg::tensor::TensorPoly;
use crate::ncalg::word::Word;

#[derive(Clone, Debug)]
pub struct SlotComponent {
    /// Words of the remaining slots, in slot order.
    pub context: Vec<Word>,
    /// Cofactor carried by the inspected slot against that context.
    pub component: NCPoly,
    /// Whether the cofactor enlarged the span of the ones before it.
    pub independent: bool,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct ExtractReport {
    pub passes: bool,
    pub components: Vec<SlotComponent>,
    /// Context of the first independent cofactor the predicate rejected.
    pub witness: Option<Vec<Word>>,
}

fn flatten(p: &NCPoly) -> SparseVec<(Word, i32)> {
    let mut v = SparseVec::new();
    for (w, c) in p.terms() {
        for (exp, q) in c.terms() {
            v.insert((w.clone(), exp), q.clone());
        }
    }
    v
}

/// Splits x along one slot and tests the cofactors with the membership
/// predicate. The predicate must cut out a Q-linear subspace; it is
/// evaluated on the independent cofactors only.
pub fn component_extract(
    x: &TensorPoly,
    slot: usize,
    mut pred: impl FnMut(&NCPoly) -> Result<bool>,
) -> Result<ExtractReport> {
    assert!(slot < x.slots());
    let mut grouped: BTreeMap<Vec<Word>, BTreeMap<Word, crate::hseries::HSeries>> =
        BTreeMap::new();
    for (tuple, c) in x.terms() {
        let mut context = tuple.clone();
        let own = context.remove(slot);
        grouped.entry(context).or_default().insert(own, c.clone());
    }
    let mut solver: SpanSolver<(Word, i32)> = SpanSolver::new();
    let mut components = Vec::new();
    let mut witness = None;
    let mut passes = true;
    for (context, terms) in grouped {
        let component = NCPoly::normalized(terms, x.order());
        if component.is_zero_on_window() {
            continue;
        }
        let (independent, pass) = match solver.insert(flatten(&component)) {
            Insertion::Independent { .. } => {
                let ok = pred(&component)?;
                if !ok && witness.is_none() {
                    witness = Some(context.clone());
                }
                passes &= ok;
                (true, ok)
            }
            Insertion::Dependent { .. } => (false, passes),
        };
        components.push(SlotComponent { context, component, independent, pass });
    }
    Ok(ExtractReport { passes, components, witness })
}

/// Coordinates of p in the span of the given elements, if it lies there.
pub fn span_coordinates(p: &NCPoly, basis: &[NCPoly]) -> Option<Vec<(usize, Q)>> {
    let mut solver: SpanSolver<(Word, i32)> = SpanSolver::new();
    for b in basis {
        solver.insert(flatten(b));
    }
    solver.coordinates(flatten(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hseries::{rat, HSeries};
    use crate::ncalg::word::Word;

    fn mono(id: u16) -> NCPoly {
        NCPoly::monomial(Word::single(id), HSeries::one(8))
    }

    #[test]
    fn dependent_components_inherit_the_verdict() {
        let x = mono(0);
        let y = mono(1);
        let ctx_a = mono(2);
        let ctx_b = mono(3);
        let sum = x.add(&y);
        let t = TensorPoly::tensor_of(&[&x, &ctx_a])
            .add(&TensorPoly::tensor_of(&[&sum, &ctx_b]))
            .unwrap();
        let mut calls = 0;
        let report = component_extract(&t, 0, |_| {
            calls += 1;
            Ok(true)
        })
        .unwrap();
        assert!(report.passes);
        assert_eq!(report.components.len(), 2);
        assert_eq!(calls, 2);

        let ctx_c = mono(4);
        let third = x.add(&y.scale_q(&rat(2, 1)));
        let t2 = t.add(&TensorPoly::tensor_of(&[&third, &ctx_c])).unwrap();
        let mut calls2 = 0;
        let report2 = component_extract(&t2, 0, |_| {
            calls2 += 1;
            Ok(true)
        })
        .unwrap();
        assert_eq!(report2.components.len(), 3);
        assert_eq!(calls2, 2);
        assert_eq!(report2.components.iter().filter(|c| c.independent).count(), 2);
    }

    #[test]
    fn failing_component_names_its_context() {
        let x = mono(0);
        let y = mono(1);
        let ctx = mono(2);
        let t = TensorPoly::tensor_of(&[&ctx, &x])
            .add(&TensorPoly::tensor_of(&[&ctx.scale_q(&rat(2, 1)), &y]))
            .unwrap();
        let report = component_extract(&t, 1, |c| Ok(c.coeff_of(&Word::single(1)).is_none()))
            .unwrap();
        assert!(!report.passes);
        assert_eq!(report.witness, Some(vec![Word::single(2)]));
    }

    #[test]
    fn span_coordinates_solve_exactly() {
        let x = mono(0);
        let y = mono(1);
        let p = x.scale_q(&rat(3, 1)).add(&y.scale_q(&rat(-2, 1)));
        let coords = span_coordinates(&p, &[x.clone(), y.clone()]).unwrap();
        assert_eq!(coords, vec![(0, rat(3, 1)), (1, rat(-2, 1))]);
        assert!(span_coordinates(&mono(2), &[x, y]).is_none());
    }
}
