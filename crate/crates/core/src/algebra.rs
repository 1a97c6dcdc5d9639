//! Graded nilpotent Lie algebras over the rationals: construction,
//! validation, regrading, and graded quotients.

use crate::linalg::Matrix;
use crate::scalar::{parse_rat, rat_string, Rat};
use crate::{Error, RatMatrix, Result};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A finite-dimensional Lie algebra with a positive grading.
///
/// Structure constants are stored for `i < j` only, so antisymmetry holds
/// by construction. The weight assignment is part of the value: equal
/// bracket tables under different gradings are different algebras.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedLieAlgebra {
    name: String,
    labels: Vec<String>,
    weights: Vec<u32>,
    /// (i, j) with i < j ↦ sorted, zero-free list of (k, c_{ij}^k).
    brackets: BTreeMap<(usize, usize), Vec<(usize, Rat)>>,
}

/// Derived grading data of an algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct LayerProfile {
    /// Largest weight carrying a nonzero layer.
    pub rank: u32,
    /// Weight ↦ dim 𝔤_w.
    pub layer_dims: BTreeMap<u32, usize>,
    /// N(G) = Σ_w w · dim 𝔤_w.
    pub homogeneous_dim: u64,
    /// Whether the weight-one layer bracket-generates everything.
    pub filtered: bool,
}

impl GradedLieAlgebra {
    /// Builds and validates an algebra. `brackets` lists `((i, j), terms)`
    /// with `i < j`; omitted pairs commute.
    pub fn new(
        name: impl Into<String>,
        labels: Vec<String>,
        weights: Vec<u32>,
        brackets: Vec<((usize, usize), Vec<(usize, Rat)>)>,
    ) -> Result<Self> {
        let name = name.into();
        let dim = labels.len();
        if dim == 0 {
            return Err(Error::InvalidAlgebra("dimension must be positive".into()));
        }
        if weights.len() != dim {
            return Err(Error::InvalidAlgebra(format!(
                "{} labels but {} weights",
                dim,
                weights.len()
            )));
        }
        let mut table: BTreeMap<(usize, usize), Vec<(usize, Rat)>> = BTreeMap::new();
        for ((i, j), terms) in brackets {
            if i >= j || j >= dim {
                return Err(Error::InvalidAlgebra(format!(
                    "bracket pair ({i}, {j}) must satisfy i < j < dim"
                )));
            }
            let mut acc: BTreeMap<usize, Rat> = BTreeMap::new();
            for (k, c) in terms {
                if k >= dim {
                    return Err(Error::InvalidAlgebra(format!(
                        "bracket [{i}, {j}] targets out-of-range index {k}"
                    )));
                }
                *acc.entry(k).or_insert_with(Rat::zero) += c;
            }
            let clean: Vec<(usize, Rat)> =
                acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            if !clean.is_empty() {
                let slot = table.entry((i, j)).or_default();
                if !slot.is_empty() {
                    return Err(Error::InvalidAlgebra(format!(
                        "duplicate bracket entry for ({i}, {j})"
                    )));
                }
                *slot = clean;
            }
        }
        let alg = GradedLieAlgebra {
            name,
            labels,
            weights,
            brackets: table,
        };
        let diags = alg.validate_structure();
        if !diags.is_empty() {
            return Err(Error::InvalidAlgebra(diags.join("; ")));
        }
        Ok(alg)
    }

    /// Runs all structural checks, returning one diagnostic per violation
    /// (empty means valid).
    pub fn validate_structure(&self) -> Vec<String> {
        let mut out = Vec::new();
        let n = self.dim();
        for (i, w) in self.weights.iter().enumerate() {
            if *w == 0 {
                out.push(format!("weight of basis vector {i} must be positive"));
            }
        }
        // The normal order of the symbol algebra is the basis order, which
        // must therefore be weight-compatible.
        for i in 1..n {
            if self.weights[i] < self.weights[i - 1] {
                out.push(format!(
                    "basis order is not weight-nondecreasing at index {i}"
                ));
                break;
            }
        }
        for ((i, j), terms) in &self.brackets {
            for (k, _) in terms {
                if self.weights[*k] != self.weights[*i] + self.weights[*j] {
                    out.push(format!(
                        "grading violation: [{}, {}] -> {} needs w = {} + {}, got {}",
                        self.labels[*i],
                        self.labels[*j],
                        self.labels[*k],
                        self.weights[*i],
                        self.weights[*j],
                        self.weights[*k]
                    ));
                }
            }
        }
        // Jacobi on basis triples i < j < k (antisymmetry covers the rest).
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let mut acc = vec![Rat::zero(); n];
                    self.add_bracket_of_bracket(i, j, k, &mut acc);
                    self.add_bracket_of_bracket(j, k, i, &mut acc);
                    self.add_bracket_of_bracket(k, i, j, &mut acc);
                    if acc.iter().any(|c| !c.is_zero()) {
                        out.push(format!(
                            "Jacobi violation at ({}, {}, {})",
                            self.labels[i], self.labels[j], self.labels[k]
                        ));
                    }
                }
            }
        }
        out
    }

    /// acc += [[e_a, e_b], e_c]
    fn add_bracket_of_bracket(&self, a: usize, b: usize, c: usize, acc: &mut [Rat]) {
        for (m, coef) in self.bracket_basis(a, b) {
            for (l, coef2) in self.bracket_basis(m, c) {
                acc[l] += coef.clone() * coef2;
            }
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Returns the same algebra under a new display name.
    pub fn rename(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> u32 {
        self.weights[i]
    }

    /// Raw `i < j` bracket table.
    pub fn bracket_table(&self) -> &BTreeMap<(usize, usize), Vec<(usize, Rat)>> {
        &self.brackets
    }

    /// `[e_i, e_j]` as (index, coefficient) pairs, any `i`, `j`.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<(usize, Rat)> {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => Vec::new(),
            std::cmp::Ordering::Less => self.brackets.get(&(i, j)).cloned().unwrap_or_default(),
            std::cmp::Ordering::Greater => self
                .brackets
                .get(&(j, i))
                .map(|v| v.iter().map(|(k, c)| (*k, -c.clone())).collect())
                .unwrap_or_default(),
        }
    }

    /// Bilinear extension of the bracket to coordinate vectors.
    pub fn bracket_vec(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        let n = self.dim();
        let mut out = vec![Rat::zero(); n];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                for (k, c) in self.bracket_basis(i, j) {
                    out[k] += xi.clone() * yj.clone() * c;
                }
            }
        }
        out
    }

    pub fn layer_profile(&self) -> LayerProfile {
        let mut layer_dims: BTreeMap<u32, usize> = BTreeMap::new();
        for &w in &self.weights {
            *layer_dims.entry(w).or_insert(0) += 1;
        }
        let rank = *layer_dims.keys().max().unwrap();
        let homogeneous_dim = layer_dims
            .iter()
            .map(|(&w, &d)| w as u64 * d as u64)
            .sum();
        LayerProfile {
            rank,
            layer_dims,
            homogeneous_dim,
            filtered: self.is_filtered(rank),
        }
    }

    /// Whether iterated brackets of the weight-one layer span every layer.
    fn is_filtered(&self, rank: u32) -> bool {
        let n = self.dim();
        // span[w] = list of vectors known to lie in the bracket-generated
        // part of 𝔤_w.
        let mut generated: BTreeMap<u32, Vec<Vec<Rat>>> = BTreeMap::new();
        for i in 0..n {
            if self.weights[i] == 1 {
                let mut v = vec![Rat::zero(); n];
                v[i] = Rat::from_integer(1.into());
                generated.entry(1).or_default().push(v);
            }
        }
        for w in 2..=rank {
            let mut vs: Vec<Vec<Rat>> = Vec::new();
            for a in 1..w {
                let b = w - a;
                if a > b {
                    break;
                }
                let (Some(va), Some(vb)) = (generated.get(&a), generated.get(&b)) else {
                    continue;
                };
                for x in va {
                    for y in vb {
                        vs.push(self.bracket_vec(x, y));
                    }
                }
            }
            generated.insert(w, vs);
        }
        for (w, count) in self.layer_counts() {
            if w == 1 {
                continue;
            }
            let vs = generated.get(&w).cloned().unwrap_or_default();
            let rank_w = if vs.is_empty() {
                0
            } else {
                Matrix::from_rows(vs).rank()
            };
            if rank_w < count {
                return false;
            }
        }
        true
    }

    fn layer_counts(&self) -> BTreeMap<u32, usize> {
        let mut m = BTreeMap::new();
        for &w in &self.weights {
            *m.entry(w).or_insert(0usize) += 1;
        }
        m
    }

    /// Same brackets under a new weight assignment.
    pub fn regrade(&self, new_weights: Vec<u32>) -> Result<Self> {
        for ((i, j), terms) in &self.brackets {
            for (k, _) in terms {
                if new_weights.get(*k).copied()
                    != new_weights
                        .get(*i)
                        .and_then(|a| new_weights.get(*j).map(|b| a + b))
                {
                    return Err(Error::IncompatibleGrading {
                        i: *i,
                        j: *j,
                        k: *k,
                    });
                }
            }
        }
        GradedLieAlgebra::new(
            self.name.clone(),
            self.labels.clone(),
            new_weights,
            self.brackets
                .iter()
                .map(|(&p, t)| (p, t.clone()))
                .collect(),
        )
    }

    /// Quotient by the graded ideal generated by weight-homogeneous vectors.
    ///
    /// Returns the quotient algebra on the lexicographically-first
    /// homogeneous subset of the original basis complementing the ideal,
    /// together with the projection matrix (quotient-dim × n).
    pub fn quotient_by_ideal(
        &self,
        generators: &[Vec<Rat>],
    ) -> Result<(GradedLieAlgebra, RatMatrix)> {
        let n = self.dim();
        for g in generators {
            if g.len() != n {
                return Err(Error::Precondition(
                    "ideal generator has wrong length".into(),
                ));
            }
            let ws: std::collections::BTreeSet<u32> = g
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, _)| self.weights[i])
                .collect();
            if ws.len() > 1 {
                return Err(Error::Precondition(
                    "ideal generator is not weight-homogeneous".into(),
                ));
            }
        }
        // Close under bracketing with every basis vector; track an
        // independent spanning set of the ideal.
        let mut ideal: Vec<Vec<Rat>> = Vec::new();
        let mut queue: Vec<Vec<Rat>> = generators
            .iter()
            .filter(|g| g.iter().any(|c| !c.is_zero()))
            .cloned()
            .collect();
        while let Some(v) = queue.pop() {
            let mut cand = ideal.clone();
            cand.push(v.clone());
            if Matrix::from_rows(cand).rank() == ideal.len() {
                continue; // already in the span
            }
            ideal.push(v.clone());
            for i in 0..n {
                let mut e = vec![Rat::zero(); n];
                e[i] = Rat::from_integer(1.into());
                let b = self.bracket_vec(&e, &v);
                if b.iter().any(|c| !c.is_zero()) {
                    queue.push(b);
                }
            }
        }
        // Complement: greedily keep basis indices (lexicographic order)
        // independent from the ideal.
        let base_rank = if ideal.is_empty() {
            0
        } else {
            Matrix::from_rows(ideal.clone()).rank()
        };
        let mut kept: Vec<usize> = Vec::new();
        for i in 0..n {
            let mut rows = ideal.clone();
            for &k in kept.iter().chain(std::iter::once(&i)) {
                let mut e = vec![Rat::zero(); n];
                e[k] = Rat::from_integer(1.into());
                rows.push(e);
            }
            if Matrix::from_rows(rows).rank() == base_rank + kept.len() + 1 {
                kept.push(i);
            }
        }
        let q = kept.len();
        debug_assert_eq!(q + base_rank, n);
        // Projection: solve e_m = Σ_s a_s e_{kept_s} (mod ideal) for each m.
        // Columns of the system: kept basis vectors then ideal spanning set.
        let mut cols: Vec<Vec<Rat>> = Vec::new();
        for &k in &kept {
            let mut e = vec![Rat::zero(); n];
            e[k] = Rat::from_integer(1.into());
            cols.push(e);
        }
        cols.extend(ideal.iter().cloned());
        let system = Matrix::from_rows(cols).transpose(); // n × (q + rank)
        let solver = crate::linalg::Eliminator::new(crate::linalg::SparseMat::from_dense(&system));
        let mut proj = Matrix::zeros(q, n);
        for m in 0..n {
            let mut e = vec![Rat::zero(); n];
            e[m] = Rat::from_integer(1.into());
            let sol = solver
                .solve(&e)
                .expect("kept basis plus ideal spans the algebra");
            for s in 0..q {
                proj[(s, m)] = sol[s].clone();
            }
        }
        // Quotient structure constants.
        let mut brackets = Vec::new();
        for s in 0..q {
            for t in (s + 1)..q {
                let (i, j) = (kept[s], kept[t]);
                let b = self.bracket_basis(i, j);
                let mut vec_b = vec![Rat::zero(); n];
                for (k, c) in b {
                    vec_b[k] = c;
                }
                let img = proj.mul_vec(&vec_b);
                let terms: Vec<(usize, Rat)> = img
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .collect();
                if !terms.is_empty() {
                    brackets.push(((s, t), terms));
                }
            }
        }
        let quotient = GradedLieAlgebra::new(
            format!("{}/I", self.name),
            kept.iter().map(|&i| self.labels[i].clone()).collect(),
            kept.iter().map(|&i| self.weights[i]).collect(),
            brackets,
        )?;
        Ok((quotient, proj))
    }

    /// Parses the JSON algebra schema.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: AlgebraJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if raw.dim != raw.labels.len() {
            return Err(Error::Parse(format!(
                "dim = {} but {} labels",
                raw.dim,
                raw.labels.len()
            )));
        }
        let mut brackets = Vec::new();
        for b in raw.brackets {
            let mut terms = Vec::new();
            for t in b.terms {
                terms.push((t.k, parse_rat(&t.c)?));
            }
            brackets.push(((b.i, b.j), terms));
        }
        GradedLieAlgebra::new(raw.name, raw.labels, raw.weights, brackets)
    }

    /// Serializes to the JSON algebra schema.
    pub fn to_json(&self) -> String {
        let raw = AlgebraJson {
            name: self.name.clone(),
            dim: self.dim(),
            labels: self.labels.clone(),
            weights: self.weights.clone(),
            brackets: self
                .brackets
                .iter()
                .map(|(&(i, j), terms)| BracketJson {
                    i,
                    j,
                    terms: terms
                        .iter()
                        .map(|(k, c)| TermJson {
                            k: *k,
                            c: rat_string(c),
                        })
                        .collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&raw).expect("schema serialization cannot fail")
    }
}

#[derive(Serialize, Deserialize)]
struct AlgebraJson {
    name: String,
    dim: usize,
    labels: Vec<String>,
    weights: Vec<u32>,
    brackets: Vec<BracketJson>,
}

#[derive(Serialize, Deserialize)]
struct BracketJson {
    i: usize,
    j: usize,
    terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    k: usize,
    c: String,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn heis() -> GradedLieAlgebra {
        GradedLieAlgebra::new(
            "heis",
            vec!["X".into(), "Y".into(), "T".into()],
            vec![1, 1, 2],
            vec![((0, 1), vec![(2, rat(1))])],
        )
        .unwrap()
    }

    #[test]
    fn heisenberg_is_valid() {
        let h = heis();
        assert!(h.validate_structure().is_empty());
        let p = h.layer_profile();
        assert_eq!(p.rank, 2);
        assert_eq!(p.homogeneous_dim, 4);
        assert!(p.filtered);
    }

    #[test]
    fn grading_violation_detected() {
        let bad = GradedLieAlgebra::new(
            "bad",
            vec!["X".into(), "Y".into(), "Z".into()],
            vec![1, 1, 3],
            vec![((0, 1), vec![(2, rat(1))])],
        );
        assert!(matches!(bad, Err(Error::InvalidAlgebra(_))));
    }

    #[test]
    fn jacobi_violation_detected() {
        // [X,Y]=A, [Z,Y]=A, [X,A]=B, [Z,A]=0, [Y,A]=0: the cyclic sum over
        // (X,Z,Y) equals -B.
        let alg = GradedLieAlgebra {
            name: "bad".into(),
            labels: ["X", "Y", "Z", "A", "B"].map(String::from).to_vec(),
            weights: vec![1, 1, 1, 2, 3],
            brackets: [
                ((0, 1), vec![(3, rat(1))]),
                ((1, 2), vec![(3, rat(-1))]),
                ((0, 3), vec![(4, rat(1))]),
            ]
            .into_iter()
            .collect(),
        };
        let diags = alg.validate_structure();
        assert_eq!(diags.len(), 1);
        assert!(diags[0].contains("Jacobi"));
    }

    #[test]
    fn regrade_round_trip_and_rejection() {
        let h = heis();
        let same = h.regrade(vec![1, 1, 2]).unwrap();
        assert_eq!(same.bracket_table(), h.bracket_table());
        assert!(matches!(
            h.regrade(vec![1, 1, 3]),
            Err(Error::IncompatibleGrading { .. })
        ));
    }

    #[test]
    fn empty_quotient_is_identity() {
        let h = heis();
        let (q, proj) = h.quotient_by_ideal(&[]).unwrap();
        assert_eq!(q.bracket_table(), h.bracket_table());
        assert_eq!(proj, Matrix::identity(3));
    }

    #[test]
    fn quotient_by_center_is_abelian() {
        let h = heis();
        let t = vec![rat(0), rat(0), rat(1)];
        let (q, _) = h.quotient_by_ideal(&[t]).unwrap();
        assert_eq!(q.dim(), 2);
        assert!(q.bracket_table().is_empty());
    }

    #[test]
    fn quotient_by_derived_ideal() {
        let h = heis();
        // the derived ideal is spanned by T
        let (q, _) = h
            .quotient_by_ideal(&[vec![rat(0), rat(0), rat(1)]])
            .unwrap();
        assert_eq!(q.dim(), 2);
        assert!(q.layer_profile().filtered);
    }

    #[test]
    fn json_round_trip() {
        let h = heis();
        let s = h.to_json();
        let back = GradedLieAlgebra::from_json(&s).unwrap();
        assert_eq!(back, h);
    }
}
