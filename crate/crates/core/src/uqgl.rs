//! The quantized enveloping algebras of gl_n and sl_n at a working order.
//!
//! Letters are the quantum root vectors themselves: one F-letter per
//! positive root pair (i,j) (named F[j,i], the lowering side), the Cartan
//! letters (l[1..n] for gl, h[1..n-1] for sl), and one E-letter per pair.
//! Normal words are the ascending products F-block, Cartan block, E-block,
//! which is exactly the PBW basis once the seeded relations are completed.
//!
//! Seed rules carry only relations taken verbatim from the defining
//! presentation or forced by the root grading: Cartan sorting and
//! commutators, the e/f cross relation with its sinh-quotient Cartan
//! series, distant commutations (also between compound letters, where
//! every generator pair involved is distant), the q-bracket definitions
//! of compound root vectors for every intermediate index, and the Serre
//! relations in both orientations. Everything else, in particular the
//! straightening of overlapping compound pairs, is derived by completion,
//! so a successful build already certifies local confluence.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_traits::One;

use crate::error::{Error, Result};
use crate::hseries::{q, q_inv, rat, HSeries, Q};
use crate::linalg::SpanSolver;
use crate::ncalg::morphism::{apply_poly_morphism, apply_tensor_morphism};
use crate::ncalg::overlap::complete;
use crate::ncalg::poly::{NCPoly, FULL_ORDER};
use crate::ncalg::presentation::{Presentation, PresentationBuilder};
use crate::ncalg::tensor::TensorPoly;
use crate::ncalg::word::{GenId, Word};

/// Rule coefficients are built this many orders above the user-visible one,
/// so that dividing by q - q^{-1} still leaves full-width windows.
const SERIES_PAD: i32 = 2;
const COMPLETION_LEN: usize = 6;
const COMPLETION_ROUNDS: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgebraKind {
    Gl,
    Sl,
}

pub struct QuantumAlgebra {
    n: usize,
    kind: AlgebraKind,
    order: i32,
    layout: Layout,
    presentation: Presentation,
    distinguished: BTreeMap<String, NCPoly>,
    coproduct: BTreeMap<GenId, TensorPoly>,
    antipode: OnceLock<BTreeMap<GenId, NCPoly>>,
}

impl QuantumAlgebra {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    /// The order identities are guaranteed through; internal windows are
    /// padded above it.
    pub fn order(&self) -> i32 {
        self.order
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn element(&self, name: &str) -> Option<&NCPoly> {
        self.distinguished.get(name)
    }

    pub fn require(&self, name: &str) -> &NCPoly {
        self.element(name)
            .unwrap_or_else(|| panic!("no distinguished element {name}"))
    }

    pub fn element_names(&self) -> impl Iterator<Item = &str> {
        self.distinguished.keys().map(String::as_str)
    }

    pub fn coproduct_images(&self) -> &BTreeMap<GenId, TensorPoly> {
        &self.coproduct
    }

    /// Computed on first use. Only the Hopf axiom checks consume these,
    /// and at larger rank building them eagerly would dominate the whole
    /// construction.
    pub fn antipode_images(&self) -> Result<&BTreeMap<GenId, NCPoly>> {
        if let Some(m) = self.antipode.get() {
            return Ok(m);
        }
        let m = antipode_images(
            &self.layout,
            &self.presentation,
            &self.distinguished,
            self.order + SERIES_PAD,
        )?;
        Ok(self.antipode.get_or_init(|| m))
    }

    pub fn normal_form(&self, p: &NCPoly) -> Result<NCPoly> {
        self.presentation.normal_form(p)
    }

    pub fn multiply(&self, a: &NCPoly, b: &NCPoly) -> Result<NCPoly> {
        self.presentation.multiply(a, b)
    }
}

pub fn q_minus_q_inv(order: i32) -> HSeries {
    q(order).sub(&q_inv(order))
}

/// The counit: every letter is sent to zero, so only the empty word
/// survives.
pub fn counit(p: &NCPoly) -> HSeries {
    p.coeff_of(&Word::empty())
        .cloned()
        .unwrap_or_else(|| HSeries::zero(p.order()))
}

pub(crate) fn root_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in (i + 1)..=n {
            out.push((i, j));
        }
    }
    out
}

/// exp(h * sum c_i x_i) over pairwise commuting letters, expanded into
/// sorted words; the letters must be passed in ascending id order.
fn exp_linear(weights: &[(GenId, Q)], order: i32) -> NCPoly {
    let mut acc = NCPoly::one(order);
    for (id, c) in weights {
        let mut terms = BTreeMap::new();
        let mut coeff = Q::one();
        for r in 0..=order.max(0) {
            if r > 0 {
                coeff = coeff * c / rat(r as i64, 1);
            }
            let word = Word::from_ids(vec![*id; r as usize]);
            terms.insert(word, HSeries::term(coeff.clone(), r, order));
        }
        acc = acc.free_mul(&NCPoly::normalized(terms, order));
    }
    acc
}

/// (q^X - q^{-X}) / (q - q^{-1}) for a Cartan combination X; this is the
/// right-hand side of the e/f cross relation and has classical limit X.
/// Built two orders above the request so that dividing by q - q^{-1}
/// still certifies the full window: rule coefficients of mixed precision
/// would leave critical pairs unjoinable at the window edge.
fn cartan_quotient(weights: &[(GenId, Q)], order: i32) -> Result<NCPoly> {
    let inner = order + 2;
    let minus: Vec<(GenId, Q)> = weights.iter().map(|(id, c)| (*id, -c)).collect();
    let numer = exp_linear(weights, inner).sub(&exp_linear(&minus, inner));
    Ok(numer.scale(&q_minus_q_inv(inner).invert()?).truncate(order))
}

struct Layout {
    n: usize,
    kind: AlgebraKind,
    f: BTreeMap<(usize, usize), GenId>,
    mid: Vec<GenId>,
    e: BTreeMap<(usize, usize), GenId>,
}

impl Layout {
    fn e_grade(&self, i: usize, j: usize) -> Vec<i64> {
        let mut g = vec![0i64; self.n];
        g[i - 1] = 1;
        g[j - 1] = -1;
        g
    }

    /// Commutator coefficient of the k-th Cartan letter against an
    /// E-letter of root (i,j); the F-side is its negative.
    fn mid_pairing(&self, k: usize, i: usize, j: usize) -> i64 {
        let d = |a: usize, b: usize| (a == b) as i64;
        match self.kind {
            AlgebraKind::Gl => d(k, i) - d(k, j),
            AlgebraKind::Sl => d(k, i) - d(k, j) - d(k + 1, i) + d(k + 1, j),
        }
    }

    fn cartan_weights(&self, k: usize) -> Vec<(GenId, Q)> {
        match self.kind {
            AlgebraKind::Gl => vec![
                (self.mid[k - 1], Q::one()),
                (self.mid[k], -Q::one()),
            ],
            AlgebraKind::Sl => vec![(self.mid[k - 1], Q::one())],
        }
    }
}

fn mono(id: GenId) -> NCPoly {
    NCPoly::monomial(Word::single(id), HSeries::one(FULL_ORDER))
}

fn w2(a: GenId, b: GenId) -> Word {
    Word::from_ids(vec![a, b])
}

fn seed_presentation(layout: &Layout, bo: i32) -> Result<Presentation> {
    let n = layout.n;
    let qs = q(bo);
    let qinv = q_inv(bo);
    let one = || HSeries::one(FULL_ORDER);
    let mut b = PresentationBuilder::new(n);

    for &(i, j) in root_pairs(n).iter() {
        let id = b.letter(
            &format!("F[{j},{i}]"),
            layout.e_grade(i, j).iter().map(|x| -x).collect(),
        );
        assert_eq!(id, layout.f[&(i, j)]);
    }
    match layout.kind {
        AlgebraKind::Gl => {
            for k in 1..=n {
                let id = b.letter(&format!("l[{k}]"), vec![0; n]);
                assert_eq!(id, layout.mid[k - 1]);
            }
        }
        AlgebraKind::Sl => {
            for k in 1..n {
                let id = b.letter(&format!("h[{k}]"), vec![0; n]);
                assert_eq!(id, layout.mid[k - 1]);
            }
        }
    }
    for &(i, j) in root_pairs(n).iter() {
        let id = b.letter(&format!("E[{i},{j}]"), layout.e_grade(i, j));
        assert_eq!(id, layout.e[&(i, j)]);
    }

    for k in 0..layout.mid.len() {
        for j in 0..k {
            b.rule(
                w2(layout.mid[k], layout.mid[j]),
                NCPoly::monomial(w2(layout.mid[j], layout.mid[k]), one()),
            );
        }
    }

    for k in 1..=layout.mid.len() {
        for &(i, j) in root_pairs(n).iter() {
            let c = layout.mid_pairing(k, i, j);
            let f = layout.f[&(i, j)];
            let e = layout.e[&(i, j)];
            let mut rhs = vec![(w2(f, layout.mid[k - 1]), one())];
            if c != 0 {
                rhs.push((Word::single(f), HSeries::int(-c, FULL_ORDER)));
            }
            b.rule(w2(layout.mid[k - 1], f), NCPoly::from_terms(rhs));
            let mut rhs = vec![(w2(layout.mid[k - 1], e), one())];
            if c != 0 {
                rhs.push((Word::single(e), HSeries::int(-c, FULL_ORDER)));
            }
            b.rule(w2(e, layout.mid[k - 1]), NCPoly::from_terms(rhs));
        }
    }

    for &(i, j) in root_pairs(n).iter() {
        for k in (i + 1)..j {
            let (eik, ekj, eij) = (layout.e[&(i, k)], layout.e[&(k, j)], layout.e[&(i, j)]);
            b.rule(
                w2(ekj, eik),
                NCPoly::from_terms([
                    (w2(eik, ekj), qinv.clone()),
                    (Word::single(eij), qinv.neg()),
                ]),
            );
            let (fik, fkj, fij) = (layout.f[&(i, k)], layout.f[&(k, j)], layout.f[&(i, j)]);
            b.rule(
                w2(fkj, fik),
                NCPoly::from_terms([
                    (w2(fik, fkj), qinv.clone()),
                    (Word::single(fij), one()),
                ]),
            );
        }
    }

    for &(i, j) in root_pairs(n).iter() {
        for &(k, l) in root_pairs(n).iter() {
            if j < k {
                b.rule(
                    w2(layout.e[&(k, l)], layout.e[&(i, j)]),
                    NCPoly::monomial(w2(layout.e[&(i, j)], layout.e[&(k, l)]), one()),
                );
                b.rule(
                    w2(layout.f[&(k, l)], layout.f[&(i, j)]),
                    NCPoly::monomial(w2(layout.f[&(i, j)], layout.f[&(k, l)]), one()),
                );
            }
        }
    }

    for k in 1..n {
        for l in 1..n {
            let e = layout.e[&(k, k + 1)];
            let f = layout.f[&(l, l + 1)];
            let mut rhs = NCPoly::monomial(w2(f, e), one());
            if k == l {
                rhs = rhs.add(&cartan_quotient(&layout.cartan_weights(k), bo)?);
            }
            b.rule(w2(e, f), rhs);
        }
    }
    for &(i, j) in root_pairs(n).iter() {
        for &(k, l) in root_pairs(n).iter() {
            let disjoint = j <= k || l <= i;
            let simple = j == i + 1 && l == k + 1;
            if disjoint && !simple {
                b.rule(
                    w2(layout.e[&(i, j)], layout.f[&(k, l)]),
                    NCPoly::monomial(w2(layout.f[&(k, l)], layout.e[&(i, j)]), one()),
                );
            }
        }
    }

    let qq = qs.add(&qinv);
    for fam in [&layout.e, &layout.f] {
        for i in 1..(n - 1) {
            let (a, c) = (fam[&(i, i + 1)], fam[&(i + 1, i + 2)]);
            b.rule(
                Word::from_ids(vec![c, a, a]),
                NCPoly::from_terms([
                    (Word::from_ids(vec![a, c, a]), qq.clone()),
                    (Word::from_ids(vec![a, a, c]), HSeries::int(-1, FULL_ORDER)),
                ]),
            );
            b.rule(
                Word::from_ids(vec![c, c, a]),
                NCPoly::from_terms([
                    (Word::from_ids(vec![c, a, c]), qq.clone()),
                    (Word::from_ids(vec![a, c, c]), HSeries::int(-1, FULL_ORDER)),
                ]),
            );
        }
    }

    b.freeze()
}

/// Compound roots ordered by span, so the images of both halves of each
/// bracket exist by the time the bracket is taken.
fn compound_spans(n: usize) -> Vec<(usize, usize)> {
    let mut pairs: Vec<(usize, usize)> =
        root_pairs(n).into_iter().filter(|&(i, j)| j > i + 1).collect();
    pairs.sort_by_key(|&(i, j)| j - i);
    pairs
}

fn coproduct_images(
    layout: &Layout,
    pres: &Presentation,
    dist: &BTreeMap<String, NCPoly>,
    bo: i32,
) -> Result<BTreeMap<GenId, TensorPoly>> {
    let n = layout.n;
    let qs = q(bo);
    let one = NCPoly::one(FULL_ORDER);
    let mut cop: BTreeMap<GenId, TensorPoly> = BTreeMap::new();

    for &id in layout.mid.iter() {
        let x = mono(id);
        cop.insert(
            id,
            TensorPoly::tensor_of(&[&x, &one]).add(&TensorPoly::tensor_of(&[&one, &x]))?,
        );
    }
    for i in 1..n {
        let e = layout.e[&(i, i + 1)];
        let f = layout.f[&(i, i + 1)];
        let t = dist[&format!("t[{i}]")].clone();
        let tinv = dist[&format!("tinv[{i}]")].clone();
        cop.insert(
            e,
            TensorPoly::tensor_of(&[&mono(e), &one])
                .add(&TensorPoly::tensor_of(&[&t, &mono(e)]))?,
        );
        cop.insert(
            f,
            TensorPoly::tensor_of(&[&mono(f), &tinv])
                .add(&TensorPoly::tensor_of(&[&one, &mono(f)]))?,
        );
    }
    for (i, j) in compound_spans(n) {
        let k = i + 1;
        let tc = std::time::Instant::now();
        let (ca, cb) = (cop[&layout.e[&(i, k)]].clone(), cop[&layout.e[&(k, j)]].clone());
        cop.insert(
            layout.e[&(i, j)],
            ca.mul(&cb, pres)?.sub(&cb.mul(&ca, pres)?.scale(&qs))?,
        );
        eprintln!("[hopf] cop E[{i},{j}] {:?}", tc.elapsed());
        let tc = std::time::Instant::now();
        let (ca, cb) = (cop[&layout.f[&(k, j)]].clone(), cop[&layout.f[&(i, k)]].clone());
        cop.insert(
            layout.f[&(i, j)],
            ca.mul(&cb, pres)?.sub(&cb.mul(&ca, pres)?.scale(&q_inv(bo)))?,
        );
        eprintln!("[hopf] cop F[{j},{i}] {:?}", tc.elapsed());
    }
    Ok(cop)
}

fn antipode_images(
    layout: &Layout,
    pres: &Presentation,
    dist: &BTreeMap<String, NCPoly>,
    bo: i32,
) -> Result<BTreeMap<GenId, NCPoly>> {
    let n = layout.n;
    let qs = q(bo);
    let mut anti: BTreeMap<GenId, NCPoly> = BTreeMap::new();

    for &id in layout.mid.iter() {
        anti.insert(id, mono(id).neg());
    }
    for i in 1..n {
        let e = layout.e[&(i, i + 1)];
        let f = layout.f[&(i, i + 1)];
        let t = &dist[&format!("t[{i}]")];
        let tinv = &dist[&format!("tinv[{i}]")];
        anti.insert(e, pres.multiply(tinv, &mono(e))?.neg());
        anti.insert(f, pres.multiply(&mono(f), t)?.neg());
    }
    for (i, j) in compound_spans(n) {
        let k = i + 1;
        // S(E[i,k]) is the simple image -tinv[i]*e built a few lines up, so
        // both bracket products can be associated to keep the exponential
        // series factor next to the single letter it commutes past; the
        // unassociated product would drag every series term of one factor
        // through the rewrite cascade of the other.
        let sb = anti[&layout.e[&(k, j)]].clone();
        let tinv = &dist[&format!("tinv[{i}]")];
        let ei = mono(layout.e[&(i, k)]);
        let left = pres.multiply(&pres.multiply(&sb, tinv)?, &ei)?;
        let right = pres.multiply(tinv, &pres.multiply(&ei, &sb)?)?;
        anti.insert(layout.e[&(i, j)], right.scale(&qs).sub(&left));
        // Same association with S(F[k,i]) = -f*t[i].
        let sa = anti[&layout.f[&(k, j)]].clone();
        let t = &dist[&format!("t[{i}]")];
        let fi = mono(layout.f[&(i, k)]);
        let left = pres.multiply(&fi, &pres.multiply(t, &sa)?)?;
        let right = pres.multiply(&pres.multiply(&sa, &fi)?, t)?;
        anti.insert(layout.f[&(i, j)], right.scale(&q_inv(bo)).sub(&left));
    }
    Ok(anti)
}

fn layout_for(n: usize, kind: AlgebraKind) -> Layout {
    let mid_count = match kind {
        AlgebraKind::Gl => n,
        AlgebraKind::Sl => n - 1,
    };
    let pairs = root_pairs(n);
    let mut next: GenId = 0;
    let mut take = || {
        let id = next;
        next += 1;
        id
    };
    Layout {
        n,
        kind,
        f: pairs.iter().map(|&p| (p, take())).collect(),
        mid: (0..mid_count).map(|_| take()).collect(),
        e: pairs.iter().map(|&p| (p, take())).collect(),
    }
}

fn build(n: usize, order: i32, kind: AlgebraKind) -> Result<QuantumAlgebra> {
    assert!(n >= 2, "rank parameter must be at least 2");
    assert!(order >= 2, "working order must be at least 2");
    let bo = order + SERIES_PAD;
    let pairs = root_pairs(n);
    let layout = layout_for(n, kind);

    let t0 = std::time::Instant::now();
    let pres = complete(&seed_presentation(&layout, bo)?, COMPLETION_LEN, COMPLETION_ROUNDS)?;
    eprintln!("[build] completion {:?}", t0.elapsed());

    let mut dist: BTreeMap<String, NCPoly> = BTreeMap::new();
    for &(i, j) in pairs.iter() {
        dist.insert(format!("E[{i},{j}]"), mono(layout.e[&(i, j)]));
        dist.insert(format!("F[{j},{i}]"), mono(layout.f[&(i, j)]));
    }
    for i in 1..n {
        dist.insert(format!("e[{i}]"), mono(layout.e[&(i, i + 1)]));
        dist.insert(format!("f[{i}]"), mono(layout.f[&(i, i + 1)]));
        let w = layout.cartan_weights(i);
        dist.insert(format!("t[{i}]"), exp_linear(&w, bo));
        let minus: Vec<(GenId, Q)> = w.iter().map(|(id, c)| (*id, -c)).collect();
        dist.insert(format!("tinv[{i}]"), exp_linear(&minus, bo));
    }
    match kind {
        AlgebraKind::Gl => {
            for k in 1..=n {
                dist.insert(format!("l[{k}]"), mono(layout.mid[k - 1]));
                let w = vec![(layout.mid[k - 1], Q::one())];
                dist.insert(format!("g[{k}]"), exp_linear(&w, bo));
                let minus = vec![(layout.mid[k - 1], -Q::one())];
                dist.insert(format!("ginv[{k}]"), exp_linear(&minus, bo));
            }
            for i in 1..n {
                dist.insert(
                    format!("h[{i}]"),
                    mono(layout.mid[i - 1]).sub(&mono(layout.mid[i])),
                );
            }
        }
        AlgebraKind::Sl => {
            for k in 1..n {
                dist.insert(format!("h[{k}]"), mono(layout.mid[k - 1]));
            }
        }
    }

    let t1 = std::time::Instant::now();
    if kind == AlgebraKind::Gl {
        let gap = q_minus_q_inv(bo);
        for &(i, j) in pairs.iter() {
            let lp = pres
                .multiply(&dist[&format!("g[{i}]")], &mono(layout.f[&(i, j)]))?;
            dist.insert(format!("Lhat+[{i},{j}]"), lp.clone());
            dist.insert(format!("L+[{i},{j}]"), lp.scale(&gap));
            let lm = pres
                .multiply(&mono(layout.e[&(i, j)]), &dist[&format!("ginv[{i}]")])?
                .neg();
            dist.insert(format!("Lhat-[{j},{i}]"), lm.clone());
            dist.insert(format!("L-[{j},{i}]"), lm.scale(&gap));
            dist.insert(format!("L+[{j},{i}]"), NCPoly::zero(FULL_ORDER));
            dist.insert(format!("L-[{i},{j}]"), NCPoly::zero(FULL_ORDER));
        }
        for i in 1..=n {
            dist.insert(format!("L+[{i},{i}]"), dist[&format!("g[{i}]")].clone());
            dist.insert(format!("Lhat+[{i},{i}]"), dist[&format!("g[{i}]")].clone());
            dist.insert(format!("L-[{i},{i}]"), dist[&format!("ginv[{i}]")].clone());
            dist.insert(format!("Lhat-[{i},{i}]"), dist[&format!("ginv[{i}]")].clone());
        }
    }

    eprintln!("[build] l-operators {:?}", t1.elapsed());
    let t2 = std::time::Instant::now();
    let cop = coproduct_images(&layout, &pres, &dist, bo)?;
    eprintln!("[build] hopf {:?}", t2.elapsed());

    Ok(QuantumAlgebra {
        n,
        kind,
        order,
        layout,
        presentation: pres,
        distinguished: dist,
        coproduct: cop,
        antipode: OnceLock::new(),
    })
}

pub fn build_gl(n: usize, order: i32) -> Result<QuantumAlgebra> {
    build(n, order, AlgebraKind::Gl)
}

pub fn build_sl(n: usize, order: i32) -> Result<QuantumAlgebra> {
    build(n, order, AlgebraKind::Sl)
}

/// Both root vector families, keyed (i,j) with i<j for the raising side
/// and (j,i) for the lowering side. Every intermediate index in the
/// defining q-bracket recursion is checked to give the same element.
pub fn root_vectors(a: &QuantumAlgebra) -> Result<BTreeMap<(usize, usize), NCPoly>> {
    let mut out = BTreeMap::new();
    let qs = q(a.order() + SERIES_PAD);
    let qinv = q_inv(a.order() + SERIES_PAD);
    for (i, j) in root_pairs(a.n()) {
        let e = a.require(&format!("E[{i},{j}]")).clone();
        let f = a.require(&format!("F[{j},{i}]")).clone();
        for k in (i + 1)..j {
            let (eik, ekj) = (
                a.require(&format!("E[{i},{k}]")),
                a.require(&format!("E[{k},{j}]")),
            );
            let bracket = a
                .multiply(eik, ekj)?
                .sub(&a.multiply(ekj, eik)?.scale(&qs));
            if !bracket.agrees(&e) {
                return Err(Error::BadPresentation {
                    message: format!("q-bracket recursion for E[{i},{j}] depends on k={k}"),
                });
            }
            let (fik, fkj) = (
                a.require(&format!("F[{k},{i}]")),
                a.require(&format!("F[{j},{k}]")),
            );
            let bracket = a
                .multiply(fkj, fik)?
                .sub(&a.multiply(fik, fkj)?.scale(&qinv));
            if !bracket.agrees(&f) {
                return Err(Error::BadPresentation {
                    message: format!("q-bracket recursion for F[{j},{i}] depends on k={k}"),
                });
            }
        }
        out.insert((i, j), e);
        out.insert((j, i), f);
    }
    Ok(out)
}

/// The nested q-bracket of the raising (plus) or lowering family expanded
/// in simple letters only, with no normalization: an independent view of
/// the recursion that tests reduce against the stored letters.
pub fn root_vector_expansion(a: &QuantumAlgebra, plus: bool, i: usize, j: usize) -> NCPoly {
    assert!(i < j);
    let bo = a.order() + SERIES_PAD;
    if j == i + 1 {
        let name = if plus { format!("e[{i}]") } else { format!("f[{i}]") };
        return a.require(&name).clone();
    }
    let k = i + 1;
    let head = root_vector_expansion(a, plus, i, k);
    let tail = root_vector_expansion(a, plus, k, j);
    if plus {
        head.free_mul(&tail).sub(&tail.free_mul(&head).scale(&q(bo)))
    } else {
        tail.free_mul(&head).sub(&head.free_mul(&tail).scale(&q_inv(bo)))
    }
}

/// L-operator matrices keyed (sign, row, col), with the coproduct identity
/// Delta(L[i,j]) = sum_k L[i,k] (x) L[k,j] and the counit values checked
/// at the working order before returning.
pub fn l_operators(a: &QuantumAlgebra) -> Result<BTreeMap<(i8, usize, usize), NCPoly>> {
    assert_eq!(a.kind(), AlgebraKind::Gl, "L-operators live in the gl algebra");
    let n = a.n();
    let mut map = BTreeMap::new();
    for s in [1i8, -1i8] {
        let tag = if s > 0 { "+" } else { "-" };
        for i in 1..=n {
            for j in 1..=n {
                map.insert((s, i, j), a.require(&format!("L{tag}[{i},{j}]")).clone());
            }
        }
    }
    for (&(s, i, j), l) in &map {
        let lhs = apply_tensor_morphism(l, a.coproduct_images(), a.presentation(), 2, false)?;
        let mut rhs = TensorPoly::zero(2, FULL_ORDER);
        for k in 1..=n {
            rhs = rhs.add(&TensorPoly::tensor_of(&[&map[&(s, i, k)], &map[&(s, k, j)]]))?;
        }
        let diff = lhs.sub(&rhs)?;
        if !diff.is_zero_to(a.order())? {
            return Err(Error::BadPresentation {
                message: format!("coproduct of L{}[{i},{j}] is not matrix-like", if s > 0 { "+" } else { "-" }),
            });
        }
        let eps = counit(l);
        let expect = if i == j { HSeries::one(eps.order()) } else { HSeries::zero(eps.order()) };
        if !eps.agrees(&expect) {
            return Err(Error::BadPresentation {
                message: format!("counit of L[{i},{j}] is not delta_(i,j)"),
            });
        }
    }
    Ok(map)
}

/// Common root-lattice grade of the element, None when inhomogeneous.
pub fn grade_of(p: &NCPoly, a: &QuantumAlgebra) -> Option<Vec<i64>> {
    a.presentation().poly_grade(p)
}

/// All ascending words of total degree <= max_deg, by degree then lexicon;
/// under a completed presentation these are exactly the normal words.
pub fn enumerate_pbw(a: &QuantumAlgebra, max_deg: usize) -> Vec<Word> {
    let m = a.presentation().letters().len() as GenId;
    let mut out = vec![Word::empty()];
    let mut layer: Vec<Vec<GenId>> = vec![Vec::new()];
    for _ in 0..max_deg {
        let mut next = Vec::new();
        for w in &layer {
            for id in *w.last().unwrap_or(&0)..m {
                let mut v = w.clone();
                v.push(id);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned().map(Word::from_ids));
        layer = next;
    }
    out
}

/// Letter images of the subalgebra embedding into the gl algebra of the
/// same rank: root letters map to their namesakes, h[k] to l[k] - l[k+1].
pub fn sl_embedding_images(
    sl: &QuantumAlgebra,
    gl: &QuantumAlgebra,
) -> BTreeMap<GenId, NCPoly> {
    assert_eq!(sl.kind(), AlgebraKind::Sl);
    assert_eq!(gl.kind(), AlgebraKind::Gl);
    assert_eq!(sl.n(), gl.n());
    let mut images = BTreeMap::new();
    for g in sl.presentation().letters() {
        let image = match gl.presentation().letter_id(&g.name) {
            Some(id) => mono(id),
            None => {
                let k: usize = g.name[2..g.name.len() - 1].parse().expect("h[k] name");
                gl.require(&format!("h[{k}]")).clone()
            }
        };
        images.insert(g.id, image);
    }
    images
}

pub fn embed_into_gl(p: &NCPoly, sl: &QuantumAlgebra, gl: &QuantumAlgebra) -> Result<NCPoly> {
    apply_poly_morphism(p, &sl_embedding_images(sl, gl), gl.presentation(), false)
}

/// Membership of p in the span of the normal forms of the given elements,
/// compared coefficientwise through the common window.
pub fn in_span(p: &NCPoly, basis: &[NCPoly]) -> bool {
    let mut solver: SpanSolver<(Word, i32)> = SpanSolver::new();
    let flat = |x: &NCPoly| {
        let mut v = BTreeMap::new();
        for (w, c) in x.terms() {
            for (exp, q) in c.terms() {
                v.insert((w.clone(), exp), q.clone());
            }
        }
        v
    };
    for b in basis {
        solver.insert(flat(b));
    }
    solver.contains(flat(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gl2() -> &'static QuantumAlgebra {
        static A: std::sync::OnceLock<QuantumAlgebra> = std::sync::OnceLock::new();
        A.get_or_init(|| build_gl(2, 6).unwrap())
    }

    fn gl3() -> &'static QuantumAlgebra {
        static A: std::sync::OnceLock<QuantumAlgebra> = std::sync::OnceLock::new();
        A.get_or_init(|| build_gl(3, 6).unwrap())
    }

    #[test]
    fn ef_commutator_is_the_cartan_quotient() {
        let a = gl2();
        let (e, f) = (a.require("e[1]"), a.require("f[1]"));
        let lhs = a.multiply(e, f).unwrap().sub(&a.multiply(f, e).unwrap());
        let t = a.require("t[1]");
        let tinv = a.require("tinv[1]");
        let rhs = t
            .sub(tinv)
            .scale(&q_minus_q_inv(a.order() + SERIES_PAD).invert().unwrap());
        assert!(lhs.agrees(&rhs));
        assert!(lhs.sub(&rhs).is_zero_to(a.order()).unwrap());
    }

    #[test]
    fn serre_identity_normalizes_to_zero() {
        let a = gl3();
        let bo = a.order() + SERIES_PAD;
        let (e1, e2) = (a.require("e[1]"), a.require("e[2]"));
        let id = a
            .multiply(&a.multiply(e1, e1).unwrap(), e2)
            .unwrap()
            .sub(&a
                .multiply(&a.multiply(e1, e2).unwrap(), e1)
                .unwrap()
                .scale(&q(bo).add(&q_inv(bo))))
            .add(&a.multiply(&a.multiply(e2, e1).unwrap(), e1).unwrap());
        assert!(id.is_zero_to(a.order()).unwrap());
    }

    #[test]
    fn distant_generators_commute() {
        let a = build_gl(4, 4).unwrap();
        let (e1, e3) = (a.require("e[1]"), a.require("e[3]"));
        let comm = a.multiply(e1, e3).unwrap().sub(&a.multiply(e3, e1).unwrap());
        assert!(comm.is_zero_to(a.order()).unwrap());
        let (f1, e3) = (a.require("f[1]"), a.require("e[3]"));
        let comm = a.multiply(f1, e3).unwrap().sub(&a.multiply(e3, f1).unwrap());
        assert!(comm.is_zero_to(a.order()).unwrap());
    }

    #[test]
    fn root_vector_recursions_land_on_the_letters() {
        let a = gl3();
        let rv = root_vectors(&a).unwrap();
        assert!(rv[&(1, 3)].agrees(a.require("E[1,3]")));
        let expanded = root_vector_expansion(&a, true, 1, 3);
        assert!(a.normal_form(&expanded).unwrap().agrees(a.require("E[1,3]")));
        let expanded = root_vector_expansion(&a, false, 1, 3);
        assert!(a.normal_form(&expanded).unwrap().agrees(a.require("F[3,1]")));
    }

    #[test]
    fn pbw_enumeration_counts_and_normality() {
        let a = gl2();
        let deg1 = enumerate_pbw(&a, 1);
        assert_eq!(deg1.len(), 5);
        let deg2 = enumerate_pbw(&a, 2);
        assert_eq!(deg2.len(), 15);
        for w in enumerate_pbw(&a, 3) {
            assert!(a.presentation().is_normal(&w), "{} reduced", a.presentation().word_string(&w));
        }
    }

    #[test]
    fn pbw_words_of_gl3_stay_normal() {
        let a = gl3();
        for w in enumerate_pbw(&a, 2) {
            assert!(a.presentation().is_normal(&w));
        }
    }

    #[test]
    fn l_operator_matrix_passes_its_coproduct_check() {
        let a = gl2();
        let ops = l_operators(&a).unwrap();
        assert!(ops[&(1, 1, 1)].agrees(a.require("g[1]")));
        assert!(ops[&(1, 2, 1)].is_zero_on_window());
        let lhat = a.require("Lhat-[2,1]");
        let expect = a
            .multiply(a.require("E[1,2]"), a.require("ginv[1]"))
            .unwrap()
            .neg();
        assert!(lhat.agrees(&expect));
    }

    #[test]
    fn grades_match_the_root_lattice() {
        let a = gl3();
        assert_eq!(grade_of(a.require("e[1]"), &a), Some(vec![1, -1, 0]));
        assert_eq!(grade_of(a.require("l[2]"), &a), Some(vec![0, 0, 0]));
        assert_eq!(grade_of(a.require("L+[1,3]"), &a), Some(vec![-1, 0, 1]));
        let mixed = a.require("e[1]").add(a.require("f[1]"));
        assert_eq!(grade_of(&mixed, &a), None);
    }

    #[test]
    fn sl_embeds_into_gl() {
        let sl = build_sl(2, 6).unwrap();
        let gl = gl2();
        let h = embed_into_gl(sl.require("h[1]"), &sl, &gl).unwrap();
        assert!(h.agrees(&gl.require("l[1]").sub(gl.require("l[2]"))));
        let t = embed_into_gl(sl.require("t[1]"), &sl, &gl).unwrap();
        assert!(t.agrees(gl.require("t[1]")));
        let ef = sl
            .multiply(sl.require("e[1]"), sl.require("f[1]"))
            .unwrap();
        let image = embed_into_gl(&ef, &sl, &gl).unwrap();
        let direct = gl
            .multiply(gl.require("e[1]"), gl.require("f[1]"))
            .unwrap();
        assert!(image.agrees(&direct));
    }

    #[test]
    #[ignore]
    fn n4_order6_build_probe() {
        let t = std::time::Instant::now();
        let a = build_gl(4, 6).unwrap();
        println!("build_gl(4,6): {:?}, {} rules", t.elapsed(), a.presentation().rules().len());
    }

    #[test]
    fn completed_presentation_has_no_open_ambiguities() {
        let a = gl2();
        assert!(crate::ncalg::overlap_check(a.presentation(), 6).unwrap().is_empty());
    }
}
