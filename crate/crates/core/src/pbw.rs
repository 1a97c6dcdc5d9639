//! The symbol algebra U(𝔤): normal-ordered noncommutative polynomials in
//! the basis vector fields.
//!
//! Monomials are exponent vectors (a₁,…,aₙ) meaning X₁^{a₁}⋯Xₙ^{aₙ};
//! products are rewritten eagerly via X_j X_i → X_i X_j + [X_j, X_i] for
//! j > i, so equality (in particular equality to zero) is syntactic.
//! The normal order is the basis order, which the algebra validator keeps
//! weight-compatible; rewriting therefore preserves total weight and all
//! operator entries downstream stay weight-homogeneous.

use crate::algebra::GradedLieAlgebra;
use crate::scalar::{parse_rat, rat_string, Field};
use crate::{Error, Rat, Result};
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Exponent vector of a normal-ordered monomial.
pub type Expo = Vec<u32>;

#[derive(Clone, Debug, PartialEq)]
pub struct PbwElement<S> {
    dim: usize,
    terms: BTreeMap<Expo, S>,
}

impl<S: Field> PbwElement<S> {
    pub fn zero(dim: usize) -> Self {
        PbwElement {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(dim: usize) -> Self {
        Self::monomial(vec![0; dim], S::one())
    }

    pub fn generator(dim: usize, i: usize) -> Self {
        let mut e = vec![0; dim];
        e[i] = 1;
        Self::monomial(e, S::one())
    }

    pub fn monomial(expo: Expo, c: S) -> Self {
        let dim = expo.len();
        let mut el = Self::zero(dim);
        el.add_term(expo, c);
        el
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<Expo, S> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, expo: Expo, c: S) {
        debug_assert_eq!(expo.len(), self.dim);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(expo) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&mut self, other: &Self) {
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c.clone());
        }
    }

    pub fn sub(&mut self, other: &Self) {
        for (e, c) in &other.terms {
            self.add_term(e.clone(), -c.clone());
        }
    }

    pub fn scaled(&self, f: &S) -> Self {
        if f.is_zero() {
            return Self::zero(self.dim);
        }
        PbwElement {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.clone() * f.clone()))
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        PbwElement {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), -c.clone()))
                .collect(),
        }
    }
}

fn expo_to_word(e: &Expo) -> Vec<usize> {
    let mut w = Vec::new();
    for (i, &a) in e.iter().enumerate() {
        for _ in 0..a {
            w.push(i);
        }
    }
    w
}

fn word_to_expo(w: &[usize], dim: usize) -> Expo {
    let mut e = vec![0u32; dim];
    for &i in w {
        e[i] += 1;
    }
    e
}

/// Normal form of an arbitrary word of generators.
pub fn straighten(alg: &GradedLieAlgebra, word: &[usize], coeff: Rat) -> PbwElement<Rat> {
    let dim = alg.dim();
    let mut out = PbwElement::zero(dim);
    let mut stack: Vec<(Vec<usize>, Rat)> = vec![(word.to_vec(), coeff)];
    while let Some((w, c)) = stack.pop() {
        match (0..w.len().saturating_sub(1)).find(|&p| w[p] > w[p + 1]) {
            None => out.add_term(word_to_expo(&w, dim), c),
            Some(p) => {
                let (j, i) = (w[p], w[p + 1]);
                let mut swapped = w.clone();
                swapped.swap(p, p + 1);
                stack.push((swapped, c.clone()));
                // X_j X_i = X_i X_j + [X_j, X_i]
                for (k, ck) in alg.bracket_basis(j, i) {
                    let mut shorter = Vec::with_capacity(w.len() - 1);
                    shorter.extend_from_slice(&w[..p]);
                    shorter.push(k);
                    shorter.extend_from_slice(&w[p + 2..]);
                    stack.push((shorter, c.clone() * ck));
                }
            }
        }
    }
    out
}

/// PBW product, re-normal-ordered.
pub fn multiply(alg: &GradedLieAlgebra, u: &PbwElement<Rat>, v: &PbwElement<Rat>) -> PbwElement<Rat> {
    let dim = alg.dim();
    let mut out = PbwElement::zero(dim);
    for (ea, ca) in u.terms() {
        let wa = expo_to_word(ea);
        for (eb, cb) in v.terms() {
            let mut word = wa.clone();
            word.extend(expo_to_word(eb));
            out.add(&straighten(alg, &word, ca.clone() * cb.clone()));
        }
    }
    out
}

/// Left multiplication by the generator X_i (the composition convention
/// for new derivatives throughout the crate).
pub fn apply_generator(alg: &GradedLieAlgebra, i: usize, u: &PbwElement<Rat>) -> PbwElement<Rat> {
    let dim = alg.dim();
    let mut out = PbwElement::zero(dim);
    for (e, c) in u.terms() {
        let mut word = Vec::with_capacity(1 + e.iter().sum::<u32>() as usize);
        word.push(i);
        word.extend(expo_to_word(e));
        out.add(&straighten(alg, &word, c.clone()));
    }
    out
}

/// The antihomomorphism generated by Xᵢ ↦ −Xᵢ; involutive.
pub fn formal_adjoint(alg: &GradedLieAlgebra, u: &PbwElement<Rat>) -> PbwElement<Rat> {
    let dim = alg.dim();
    let mut out = PbwElement::zero(dim);
    for (e, c) in u.terms() {
        let mut word = expo_to_word(e);
        word.reverse();
        let sign = if word.len() % 2 == 0 {
            c.clone()
        } else {
            -c.clone()
        };
        out.add(&straighten(alg, &word, sign));
    }
    out
}

/// Weight of a normal-ordered monomial: Σ aᵢ wᵢ.
pub fn monomial_weight(alg: &GradedLieAlgebra, e: &Expo) -> u64 {
    e.iter()
        .enumerate()
        .map(|(i, &a)| a as u64 * alg.weight(i) as u64)
        .sum()
}

/// Weight interval [min, max] over stored monomials; `None` for zero.
pub fn operator_order<S: Field>(
    alg: &GradedLieAlgebra,
    u: &PbwElement<S>,
) -> Option<(u64, u64)> {
    let mut range: Option<(u64, u64)> = None;
    for e in u.terms().keys() {
        let w = monomial_weight(alg, e);
        range = Some(match range {
            None => (w, w),
            Some((lo, hi)) => (lo.min(w), hi.max(w)),
        });
    }
    range
}

/// Renders in the report style: "X^2", "XY+Z", "3/2 XY - Z".
pub fn pretty(alg: &GradedLieAlgebra, u: &PbwElement<Rat>) -> String {
    if u.is_zero() {
        return "0".to_string();
    }
    let mut s = String::new();
    for (idx, (e, c)) in u.terms().iter().enumerate() {
        let mono: String = e
            .iter()
            .enumerate()
            .filter(|(_, &a)| a > 0)
            .map(|(i, &a)| {
                if a == 1 {
                    alg.labels()[i].clone()
                } else {
                    format!("{}^{}", alg.labels()[i], a)
                }
            })
            .collect();
        let neg = c < &Rat::zero();
        let abs = if neg { -c.clone() } else { c.clone() };
        let coeff = if abs.is_one() && !mono.is_empty() {
            String::new()
        } else if mono.is_empty() {
            rat_string(&abs)
        } else {
            format!("{} ", rat_string(&abs))
        };
        if idx == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        s.push_str(&coeff);
        s.push_str(&mono);
    }
    s
}

/// Parses the `pretty` syntax back into a normal-ordered element.
pub fn parse(alg: &GradedLieAlgebra, text: &str) -> Result<PbwElement<Rat>> {
    let dim = alg.dim();
    // labels sorted longest-first for greedy matching
    let mut labels: Vec<(usize, &str)> = alg
        .labels()
        .iter()
        .enumerate()
        .map(|(i, l)| (i, l.as_str()))
        .collect();
    labels.sort_by_key(|(_, l)| std::cmp::Reverse(l.len()));
    let bytes: Vec<char> = text.chars().collect();
    let mut pos = 0usize;
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_whitespace() {
            *pos += 1;
        }
    };
    let mut out = PbwElement::zero(dim);
    let mut sign = Rat::one();
    skip_ws(&mut pos);
    if pos < bytes.len() && bytes[pos] == '-' {
        sign = -sign;
        pos += 1;
    }
    if text.trim() == "0" {
        return Ok(out);
    }
    loop {
        skip_ws(&mut pos);
        // optional rational coefficient
        let start = pos;
        while pos < bytes.len() && (bytes[pos].is_ascii_digit() || bytes[pos] == '/') {
            pos += 1;
        }
        let mut coeff = if pos > start {
            let s: String = bytes[start..pos].iter().collect();
            parse_rat(&s)?
        } else {
            Rat::one()
        };
        coeff *= sign.clone();
        // factors
        let mut word: Vec<usize> = Vec::new();
        loop {
            skip_ws(&mut pos);
            let rest: String = bytes[pos..].iter().collect();
            let Some(&(i, l)) = labels.iter().find(|(_, l)| rest.starts_with(l)) else {
                break;
            };
            pos += l.chars().count();
            let mut exp = 1u32;
            if pos < bytes.len() && bytes[pos] == '^' {
                pos += 1;
                let s = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                exp = bytes[s..pos]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent in `{text}`")))?;
            }
            for _ in 0..exp {
                word.push(i);
            }
        }
        if word.is_empty() && pos == start {
            return Err(Error::Parse(format!("empty term in `{text}`")));
        }
        out.add(&straighten(alg, &word, coeff));
        skip_ws(&mut pos);
        if pos >= bytes.len() {
            break;
        }
        sign = match bytes[pos] {
            '+' => Rat::one(),
            '-' => -Rat::one(),
            c => return Err(Error::Parse(format!("unexpected `{c}` in `{text}`"))),
        };
        pos += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn engel() -> GradedLieAlgebra {
        GradedLieAlgebra::new(
            "engel",
            ["X", "Y", "Z", "T"].map(String::from).to_vec(),
            vec![1, 1, 2, 3],
            vec![((0, 1), vec![(2, rat(1))]), ((0, 2), vec![(3, rat(1))])],
        )
        .unwrap()
    }

    fn gen(i: usize) -> PbwElement<Rat> {
        PbwElement::generator(4, i)
    }

    #[test]
    fn rewrite_yx_and_zx() {
        let a = engel();
        // Y·X = XY − Z
        let yx = multiply(&a, &gen(1), &gen(0));
        let expect = parse(&a, "XY - Z").unwrap();
        assert_eq!(yx, expect);
        // Z·X = XZ − T
        let zx = multiply(&a, &gen(2), &gen(0));
        assert_eq!(zx, parse(&a, "XZ - T").unwrap());
        // 1·u = u
        let one = PbwElement::one(4);
        assert_eq!(multiply(&a, &one, &yx), yx);
        assert_eq!(multiply(&a, &yx, &one), yx);
    }

    #[test]
    fn adjoint_reverses_and_is_involutive() {
        let a = engel();
        // (XY)† = YX = XY − Z
        let xy = multiply(&a, &gen(0), &gen(1));
        let adj = formal_adjoint(&a, &xy);
        assert_eq!(adj, parse(&a, "XY - Z").unwrap());
        // X† = −X
        assert_eq!(formal_adjoint(&a, &gen(0)), gen(0).neg());
        // involution
        assert_eq!(formal_adjoint(&a, &adj), xy);
        // (uv)† = v†u†
        let u = parse(&a, "XZ + 2 Y").unwrap();
        let v = parse(&a, "YT - 1/3 X^2").unwrap();
        let lhs = formal_adjoint(&a, &multiply(&a, &u, &v));
        let rhs = multiply(&a, &formal_adjoint(&a, &v), &formal_adjoint(&a, &u));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn operator_order_intervals() {
        let a = engel();
        let u = parse(&a, "XY + Z").unwrap();
        assert_eq!(operator_order(&a, &u), Some((2, 2)));
        assert_eq!(operator_order(&a, &PbwElement::<Rat>::one(4)), Some((0, 0)));
        let v = parse(&a, "X + T").unwrap();
        assert_eq!(operator_order(&a, &v), Some((1, 3)));
        assert_eq!(operator_order(&a, &PbwElement::<Rat>::zero(4)), None);
    }

    #[test]
    fn associativity_samples() {
        let a = engel();
        let els = [
            gen(0),
            gen(1),
            gen(2),
            gen(3),
            parse(&a, "XY - Z").unwrap(),
            parse(&a, "Y^2 + 3 T").unwrap(),
        ];
        for u in &els {
            for v in &els {
                for w in &els {
                    let l = multiply(&a, &multiply(&a, u, v), w);
                    let r = multiply(&a, u, &multiply(&a, v, w));
                    assert_eq!(l, r);
                }
            }
        }
    }

    #[test]
    fn pretty_parse_round_trip() {
        let a = engel();
        for s in ["X^2", "XY + Z", "3/2 XY - Z", "-X + 2 T", "0", "X^2Y - 5"] {
            let u = parse(&a, s).unwrap();
            let printed = pretty(&a, &u);
            let back = parse(&a, &printed).unwrap();
            assert_eq!(back, u, "round trip failed for `{s}` -> `{printed}`");
        }
    }

    #[test]
    fn weight_additivity() {
        let a = engel();
        let u = parse(&a, "XZ").unwrap(); // weight 3, homogeneous
        let v = parse(&a, "Y^2").unwrap(); // weight 2
        let p = multiply(&a, &u, &v);
        assert_eq!(operator_order(&a, &p), Some((5, 5)));
    }
}
