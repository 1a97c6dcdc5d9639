//! Exterior algebra of the dual: invariant forms, weights, the algebraic
//! differential d₀ with its adjoint and partial inverse, and the Hodge star.
//!
//! Monomials θ^I are indexed by bitmasks over the basis (so `dim ≤ 64`).
//! The monomial basis is declared orthonormal; this makes δ₀ the literal
//! transpose of d₀ and keeps the pseudoinverse rational. Degree-k bases
//! are ordered lexicographically on increasing index tuples, fixed once
//! per algebra — every matrix in the crate lives in these bases.

use crate::algebra::GradedLieAlgebra;
use crate::linalg::{Matrix, SparseMat};
use crate::scalar::Field;
use crate::Rat;
use std::collections::{BTreeMap, HashMap};

pub type Mask = u64;

pub fn mask_indices(mut m: Mask) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

/// θ^i ∧ θ^I: `None` when i ∈ I, otherwise the sign from moving θ^i past
/// the entries of I below i.
pub fn wedge_single(i: usize, mask: Mask) -> Option<(i64, Mask)> {
    let bit = 1u64 << i;
    if mask & bit != 0 {
        return None;
    }
    let below = (mask & (bit - 1)).count_ones();
    let sign = if below % 2 == 0 { 1 } else { -1 };
    Some((sign, mask | bit))
}

/// θ^A ∧ θ^B for disjoint masks, with the shuffle sign; `None` on overlap.
pub fn wedge_masks(a: Mask, b: Mask) -> Option<(i64, Mask)> {
    if a & b != 0 {
        return None;
    }
    // inversions: pairs (x ∈ A, y ∈ B) with x > y
    let mut inv = 0u32;
    for x in mask_indices(a) {
        inv += (b & ((1u64 << x) - 1)).count_ones();
    }
    Some((if inv % 2 == 0 { 1 } else { -1 }, a | b))
}

/// Sign of the permutation (I, complement of I) of (0..n).
pub fn star_sign(mask: Mask, n: usize) -> i64 {
    let full: Mask = if n == 64 { !0 } else { (1u64 << n) - 1 };
    let comp = full & !mask;
    wedge_masks(mask, comp).expect("mask and complement are disjoint").0
}

/// An invariant form: degree plus monomial coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantForm<S> {
    pub degree: usize,
    pub terms: BTreeMap<Mask, S>,
}

impl<S: Field> InvariantForm<S> {
    pub fn zero(degree: usize) -> Self {
        InvariantForm {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(degree: usize, mask: Mask, c: S) -> Self {
        let mut f = Self::zero(degree);
        f.add_term(mask, c);
        f
    }

    pub fn add_term(&mut self, mask: Mask, c: S) {
        debug_assert_eq!(mask.count_ones() as usize, self.degree);
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(mask).or_insert_with(S::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&mask);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scaled(&self, f: &S) -> Self {
        InvariantForm {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, c.clone() * f.clone()))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    pub fn add(&mut self, other: &Self) {
        assert_eq!(self.degree, other.degree);
        for (m, c) in &other.terms {
            self.add_term(*m, c.clone());
        }
    }

    /// Weight of a monomial θ^I under the algebra's grading.
    pub fn monomial_weight(alg: &GradedLieAlgebra, mask: Mask) -> u32 {
        mask_indices(mask).map(|i| alg.weight(i)).sum()
    }

    /// Coordinates in the degree-k lexicographic basis.
    pub fn coords(&self, basis: &FormSpaceBasis) -> Vec<S> {
        let mut v = vec![S::zero(); basis.len()];
        for (m, c) in &self.terms {
            v[basis.index_of(*m)] = c.clone();
        }
        v
    }

    pub fn from_coords(basis: &FormSpaceBasis, v: &[S]) -> Self {
        let mut f = Self::zero(basis.degree);
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                f.add_term(basis.masks[i], c.clone());
            }
        }
        f
    }
}

/// The fixed lexicographic basis of Λ^k, with per-monomial weights.
#[derive(Clone, Debug)]
pub struct FormSpaceBasis {
    pub degree: usize,
    pub masks: Vec<Mask>,
    pub weights: Vec<u32>,
    index: HashMap<Mask, usize>,
}

impl FormSpaceBasis {
    pub fn new(alg: &GradedLieAlgebra, degree: usize) -> Self {
        let n = alg.dim();
        assert!(degree <= n);
        let mut masks = Vec::new();
        let mut combo: Vec<usize> = (0..degree).collect();
        if degree == 0 {
            masks.push(0);
        } else if degree <= n {
            loop {
                masks.push(combo.iter().fold(0u64, |m, &i| m | (1 << i)));
                // next combination in lexicographic order
                let mut p = degree;
                while p > 0 {
                    p -= 1;
                    if combo[p] != p + n - degree {
                        combo[p] += 1;
                        for q in (p + 1)..degree {
                            combo[q] = combo[q - 1] + 1;
                        }
                        break;
                    }
                    if p == 0 {
                        combo.clear();
                    }
                }
                if combo.is_empty() {
                    break;
                }
            }
        }
        let weights = masks
            .iter()
            .map(|&m| mask_indices(m).map(|i| alg.weight(i)).sum())
            .collect();
        let index = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        FormSpaceBasis {
            degree,
            masks,
            weights,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn index_of(&self, mask: Mask) -> usize {
        self.index[&mask]
    }

    /// Distinct weights in increasing order with their member positions.
    pub fn weight_blocks(&self) -> BTreeMap<u32, Vec<usize>> {
        let mut out: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (i, &w) in self.weights.iter().enumerate() {
            out.entry(w).or_default().push(i);
        }
        out
    }
}

/// d₀θ^k = −Σ_{i<j} c_{ij}^k θ^i ∧ θ^j, as (pair mask, coefficient) terms.
fn d0_on_generator(alg: &GradedLieAlgebra, k: usize) -> Vec<(Mask, Rat)> {
    let mut out = Vec::new();
    for (&(i, j), terms) in alg.bracket_table() {
        for (tk, c) in terms {
            if *tk == k {
                out.push(((1u64 << i) | (1u64 << j), -c.clone()));
            }
        }
    }
    out
}

/// Sparse triplets of d₀: Λ^k → Λ^{k+1} in the lexicographic bases.
pub fn d0_triplets(alg: &GradedLieAlgebra, k: usize) -> Vec<(usize, usize, Rat)> {
    let src = FormSpaceBasis::new(alg, k);
    let tgt = FormSpaceBasis::new(alg, k + 1);
    d0_triplets_with(alg, &src, &tgt)
}

pub fn d0_triplets_with(
    alg: &GradedLieAlgebra,
    src: &FormSpaceBasis,
    tgt: &FormSpaceBasis,
) -> Vec<(usize, usize, Rat)> {
    let mut trip = Vec::new();
    let gen_d0: Vec<Vec<(Mask, Rat)>> = (0..alg.dim()).map(|g| d0_on_generator(alg, g)).collect();
    for (col, &mask) in src.masks.iter().enumerate() {
        for (p, t) in mask_indices(mask).enumerate() {
            let rest = mask & !(1u64 << t);
            let sgn_p = if p % 2 == 0 { 1i64 } else { -1 };
            for (pair, c) in &gen_d0[t] {
                if let Some((sgn_w, m)) = wedge_masks(*pair, rest) {
                    let s = sgn_p * sgn_w;
                    let coeff = if s == 1 { c.clone() } else { -c.clone() };
                    trip.push((tgt.index_of(m), col, coeff));
                }
            }
        }
    }
    trip
}

/// d₀: Λ^k → Λ^{k+1} as a dense matrix.
pub fn d0_matrix(alg: &GradedLieAlgebra, k: usize) -> Matrix<Rat> {
    let src = FormSpaceBasis::new(alg, k);
    let tgt = FormSpaceBasis::new(alg, k + 1);
    let trip = d0_triplets_with(alg, &src, &tgt);
    SparseMat::from_triplets(tgt.len(), src.len(), &trip).to_dense()
}

/// δ₀: Λ^k → Λ^{k−1}, the metric adjoint (transpose in orthonormal bases).
pub fn delta0_matrix(alg: &GradedLieAlgebra, k: usize) -> Matrix<Rat> {
    assert!(k >= 1);
    d0_matrix(alg, k - 1).transpose()
}

/// d₀⁻¹: Λ^{k+1} → Λ^k, the exact Moore–Penrose pseudoinverse of d₀.
pub fn d0_pinv(alg: &GradedLieAlgebra, k: usize) -> Matrix<Rat> {
    d0_matrix(alg, k).pseudoinverse()
}

/// Wedge product of invariant forms.
pub fn wedge<S: Field>(a: &InvariantForm<S>, b: &InvariantForm<S>) -> InvariantForm<S> {
    let mut out = InvariantForm::zero(a.degree + b.degree);
    for (ma, ca) in &a.terms {
        for (mb, cb) in &b.terms {
            if let Some((sgn, m)) = wedge_masks(*ma, *mb) {
                let c = ca.clone() * cb.clone();
                out.add_term(m, if sgn == 1 { c } else { -c });
            }
        }
    }
    out
}

/// Hodge star for the orientation θ^1∧…∧θ^n.
pub fn hodge_star<S: Field>(alg: &GradedLieAlgebra, form: &InvariantForm<S>) -> InvariantForm<S> {
    let n = alg.dim();
    let full: Mask = if n == 64 { !0 } else { (1u64 << n) - 1 };
    let mut out = InvariantForm::zero(n - form.degree);
    for (m, c) in &form.terms {
        let comp = full & !m;
        let s = star_sign(*m, n);
        out.add_term(comp, if s == 1 { c.clone() } else { -c.clone() });
    }
    out
}

/// Decomposition of a form by monomial weight; summands recombine exactly.
pub fn weight_split<S: Field>(
    alg: &GradedLieAlgebra,
    form: &InvariantForm<S>,
) -> BTreeMap<u32, InvariantForm<S>> {
    let mut out: BTreeMap<u32, InvariantForm<S>> = BTreeMap::new();
    for (m, c) in &form.terms {
        let w = InvariantForm::<S>::monomial_weight(alg, *m);
        out.entry(w)
            .or_insert_with(|| InvariantForm::zero(form.degree))
            .add_term(*m, c.clone());
    }
    out
}
