//! Named builders for the graded nilpotent Lie algebras studied by the
//! toolkit, including the Clifford data behind H-type groups, plus the
//! static regression table used by the CLI.

use crate::algebra::GradedLieAlgebra;
use crate::linalg::Matrix;
use crate::scalar::rat;
use crate::{Error, Rat, RatForm, Result};
use num_traits::Zero;
use std::collections::BTreeMap;

/// Abelian ℝⁿ (all weights 1, zero bracket).
pub fn abelian(n: usize) -> GradedLieAlgebra {
    GradedLieAlgebra::new(
        format!("abelian({n})"),
        (1..=n).map(|i| format!("e{i}")).collect(),
        vec![1; n],
        vec![],
    )
    .expect("abelian algebra is valid")
}

/// Heisenberg algebra of dimension 2n+1: [Xᵢ, Yᵢ] = T.
pub fn heisenberg(n: usize) -> GradedLieAlgebra {
    assert!(n >= 1);
    let labels: Vec<String> = if n == 1 {
        ["X", "Y", "T"].map(String::from).to_vec()
    } else {
        (1..=n)
            .map(|i| format!("X{i}"))
            .chain((1..=n).map(|i| format!("Y{i}")))
            .chain(std::iter::once("T".to_string()))
            .collect()
    };
    let mut weights = vec![1; 2 * n];
    weights.push(2);
    let brackets = (0..n).map(|i| ((i, n + i), vec![(2 * n, rat(1))])).collect();
    GradedLieAlgebra::new(format!("heisenberg({n})"), labels, weights, brackets)
        .expect("heisenberg algebra is valid")
}

/// The 4-dimensional filtered algebra [X,Y] = Z, [X,Z] = T with
/// weights (1,1,2,3).
pub fn engel() -> GradedLieAlgebra {
    GradedLieAlgebra::new(
        "engel",
        ["X", "Y", "Z", "T"].map(String::from).to_vec(),
        vec![1, 1, 2, 3],
        vec![((0, 1), vec![(2, rat(1))]), ((0, 2), vec![(3, rat(1))])],
    )
    .expect("engel algebra is valid")
}

/// Same brackets with the non-filtered grading (1,2,3,4).
pub fn engel_regraded() -> GradedLieAlgebra {
    engel()
        .regrade(vec![1, 2, 3, 4])
        .expect("regrading is compatible")
        // keep a distinguishing name
        .rename("engel_regraded")
}

/// Free nilpotent algebra on k generators, truncated at rank r.
pub fn free(k: usize, r: u32) -> GradedLieAlgebra {
    crate::freelie::free_nilpotent(k, r)
}

/// Strictly upper-triangular n×n matrices (real form): basis E_{ij}
/// (i < j) of weight j − i with [E_{ij}, E_{kl}] = δ_{jk}E_{il} − δ_{li}E_{kj}.
pub fn triangular(n: usize) -> GradedLieAlgebra {
    assert!(n >= 2);
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 1..=n {
        for j in (i + 1)..=n {
            pairs.push((i, j));
        }
    }
    pairs.sort_by_key(|&(i, j)| (j - i, i));
    let index: BTreeMap<(usize, usize), usize> =
        pairs.iter().enumerate().map(|(t, &p)| (p, t)).collect();
    let labels = pairs.iter().map(|&(i, j)| format!("E{i}{j}")).collect();
    let weights = pairs.iter().map(|&(i, j)| (j - i) as u32).collect();
    let mut brackets = Vec::new();
    for a in 0..pairs.len() {
        for b in (a + 1)..pairs.len() {
            let (i, j) = pairs[a];
            let (k, l) = pairs[b];
            let mut terms: Vec<(usize, Rat)> = Vec::new();
            if j == k {
                terms.push((index[&(i, l)], rat(1)));
            }
            if l == i {
                terms.push((index[&(k, j)], rat(-1)));
            }
            if !terms.is_empty() {
                brackets.push(((a, b), terms));
            }
        }
    }
    GradedLieAlgebra::new(format!("triangular({n})"), labels, weights, brackets)
        .expect("triangular algebra is valid")
}

/// Clifford data for an H-type algebra: anticommuting orthogonal
/// antisymmetric complex structures J₁…J_k on ℝⁿ.
#[derive(Clone, Debug)]
pub struct CliffordData {
    pub n: usize,
    pub k: usize,
    pub j: Vec<Matrix<Rat>>,
}

impl CliffordData {
    pub fn new(j: Vec<Matrix<Rat>>) -> Result<Self> {
        let k = j.len();
        let n = j.first().map_or(0, |m| m.nrows());
        for (i, m) in j.iter().enumerate() {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::InvalidAlgebra(format!(
                    "Clifford matrix {i} is not {n}×{n}"
                )));
            }
            for r in 0..n {
                for c in 0..n {
                    if m[(r, c)] != -m[(c, r)].clone() {
                        return Err(Error::InvalidAlgebra(format!(
                            "Clifford matrix {i} is not antisymmetric at ({r}, {c})"
                        )));
                    }
                }
            }
        }
        for a in 0..k {
            for b in a..k {
                // JₐJ_b + J_bJₐ = −2δ_{ab} id
                let mut s = j[a].mul(&j[b]);
                let t = j[b].mul(&j[a]);
                for r in 0..n {
                    for c in 0..n {
                        s[(r, c)] += t[(r, c)].clone();
                        let expect = if a == b && r == c { rat(-2) } else { rat(0) };
                        if s[(r, c)] != expect {
                            return Err(Error::InvalidClifford { i: a, j: b });
                        }
                    }
                }
            }
        }
        Ok(CliffordData { n, k, j })
    }
}

/// 2-step H-type algebra from Clifford data: horizontal e₁…e_n (weight 1),
/// central t₁…t_k (weight 2), with θ_l([X, Y]) = −⟨J_l X, Y⟩, so that
/// d₀θ_l = g(J_l·, ·).
pub fn htype(name: &str, data: &CliffordData) -> GradedLieAlgebra {
    let (n, k) = (data.n, data.k);
    let labels = (1..=n)
        .map(|i| format!("X{i}"))
        .chain((1..=k).map(|l| format!("T{l}")))
        .collect();
    let mut weights = vec![1; n];
    weights.extend(vec![2; k]);
    let mut brackets = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            let terms: Vec<(usize, Rat)> = (0..k)
                .filter_map(|l| {
                    // c_{ab}^l = θ_l([e_a, e_b]) = −⟨J_l e_a, e_b⟩ = −(J_l)_{b,a}
                    let c = -data.j[l][(b, a)].clone();
                    if c.is_zero() {
                        None
                    } else {
                        Some((n + l, c))
                    }
                })
                .collect();
            if !terms.is_empty() {
                brackets.push(((a, b), terms));
            }
        }
    }
    GradedLieAlgebra::new(name, labels, weights, brackets).expect("H-type algebra is valid")
}

/// Basis quaternion product on indices 0..4 = (1, i, j, k): (sign, index).
fn quat_mul(a: usize, b: usize) -> (i64, usize) {
    if a == 0 || b == 0 {
        return (1, a + b);
    }
    if a == b {
        return (-1, 0);
    }
    // cyclic i→j→k
    match (a, b) {
        (1, 2) => (1, 3),
        (2, 1) => (-1, 3),
        (2, 3) => (1, 1),
        (3, 2) => (-1, 1),
        (3, 1) => (1, 2),
        (1, 3) => (-1, 2),
        _ => unreachable!(),
    }
}

/// Basis octonion product on indices 0..8 via Cayley–Dickson doubling of
/// the quaternions: index q + 4t with t ∈ {0,1};
/// (a, b)(c, d) = (ac − d̄b, da + bc̄).
fn octo_mul(x: usize, y: usize) -> (i64, usize) {
    let (a, s) = (x % 4, x / 4);
    let (c, t) = (y % 4, y / 4);
    let conj_sign = |q: usize| if q == 0 { 1 } else { -1 };
    match (s, t) {
        (0, 0) => quat_mul(a, c),
        (0, 1) => {
            let (sg, i) = quat_mul(c, a);
            (sg, i + 4)
        }
        (1, 0) => {
            let (sg, i) = quat_mul(a, c);
            (sg * conj_sign(c), i + 4)
        }
        _ => {
            let (sg, i) = quat_mul(c, a);
            (-sg * conj_sign(c), i)
        }
    }
}

fn left_mul_matrices(dim: usize, mul: impl Fn(usize, usize) -> (i64, usize)) -> Vec<Matrix<Rat>> {
    (1..dim)
        .map(|l| {
            Matrix::from_fn(dim, dim, |r, c| {
                let (sg, i) = mul(l, c);
                if i == r {
                    rat(sg)
                } else {
                    rat(0)
                }
            })
        })
        .collect()
}

/// Clifford data from quaternion left multiplication by i, j, k on ℝ⁴.
pub fn quaternionic_clifford() -> CliffordData {
    CliffordData::new(left_mul_matrices(4, quat_mul)).expect("quaternion structures are Clifford")
}

/// The 7-dimensional quaternionic H-type algebra (D⁴ ⊂ ℝ⁷).
pub fn quaternionic_q7() -> GradedLieAlgebra {
    htype("quaternionic_q7", &quaternionic_clifford())
}

/// Clifford data from left multiplication by the imaginary units of the
/// Cayley–Dickson octonions on ℝ⁸.
pub fn octonionic_clifford() -> CliffordData {
    CliffordData::new(left_mul_matrices(8, octo_mul)).expect("octonion structures are Clifford")
}

/// The 15-dimensional octonionic H-type algebra (D⁸ ⊂ ℝ¹⁵).
pub fn octonionic_15() -> GradedLieAlgebra {
    htype("octonionic_15", &octonionic_clifford())
}

/// 6-dimensional quotient of the quaternionic algebra by the central
/// ideal generated by T₃.
pub fn g6() -> GradedLieAlgebra {
    let q7 = quaternionic_q7();
    let mut t3 = vec![Rat::zero(); 7];
    t3[6] = rat(1);
    let (q, _) = q7
        .quotient_by_ideal(&[t3])
        .expect("central generator is homogeneous");
    q.rename("g6")
}

/// Chen-type algebra on n horizontal directions at depth k: basis
/// x₁…x_n (weight 1) and y_α for multi-indices |α| ≤ k with
/// weight(y_α) = k − |α| + 1 and [xᵢ, y_β] = y_{β − eᵢ}.
pub fn chen(n: usize, k: u32) -> GradedLieAlgebra {
    assert!(n >= 1 && k >= 1);
    // enumerate α with |α| ≤ k, grouped by weight = k − |α| + 1 ascending
    let mut alphas: Vec<Vec<u32>> = vec![vec![0; n]];
    let mut by_size: Vec<Vec<Vec<u32>>> = vec![alphas.clone()];
    for _ in 1..=k {
        let mut next: Vec<Vec<u32>> = Vec::new();
        for a in by_size.last().unwrap() {
            for i in 0..n {
                let mut b = a.clone();
                b[i] += 1;
                if !next.contains(&b) {
                    next.push(b);
                }
            }
        }
        next.sort();
        by_size.push(next);
    }
    alphas.clear();
    // weight-nondecreasing basis: first x's (weight 1) and |α| = k, then
    // |α| = k−1 (weight 2), ..., down to α = 0 (weight k+1)
    let mut labels: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let mut weights: Vec<u32> = vec![1; n];
    let mut index: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
    for size in (0..=k as usize).rev() {
        for a in &by_size[size] {
            let label: String = std::iter::once("y".to_string())
                .chain(a.iter().map(|d| d.to_string()))
                .collect();
            index.insert(a.clone(), labels.len());
            labels.push(label);
            weights.push(k - size as u32 + 1);
        }
    }
    let mut brackets = Vec::new();
    for (beta, &bidx) in &index {
        if beta.iter().all(|&d| d == 0) {
            continue;
        }
        for i in 0..n {
            if beta[i] > 0 {
                let mut tgt = beta.clone();
                tgt[i] -= 1;
                brackets.push(((i, bidx), vec![(index[&tgt], rat(1))]));
            }
        }
    }
    GradedLieAlgebra::new(format!("chen({n},{k})"), labels, weights, brackets)
        .expect("chen algebra is valid")
}

/// The 8-dimensional 3-step algebra with dy₁ = x₁∧x₃ + x₂∧x₄,
/// dy₂ = x₁∧x₄ + x₂∧x₅, dz = x₁∧y₁ + x₂∧y₂.
pub fn carlson_toledo() -> GradedLieAlgebra {
    let labels = ["x1", "x2", "x3", "x4", "x5", "y1", "y2", "z"]
        .map(String::from)
        .to_vec();
    let weights = vec![1, 1, 1, 1, 1, 2, 2, 3];
    let brackets = vec![
        ((0, 2), vec![(5, rat(-1))]),
        ((1, 3), vec![(5, rat(-1))]),
        ((0, 3), vec![(6, rat(-1))]),
        ((1, 4), vec![(6, rat(-1))]),
        ((0, 5), vec![(7, rat(-1))]),
        ((1, 6), vec![(7, rat(-1))]),
    ];
    GradedLieAlgebra::new("carlson_toledo", labels, weights, brackets)
        .expect("carlson_toledo algebra is valid")
}

/// For a 2-step algebra, the span of curvature 2-forms d₀θ_z over the
/// central directions z (all horizontal of weight 2).
pub fn curvature_span(alg: &GradedLieAlgebra) -> Vec<RatForm> {
    let mut out = Vec::new();
    for z in 0..alg.dim() {
        if alg.weight(z) != 2 {
            continue;
        }
        let mut f = RatForm::zero(2);
        for (&(i, j), terms) in alg.bracket_table() {
            for (k, c) in terms {
                if *k == z {
                    f.add_term((1u64 << i) | (1u64 << j), -c.clone());
                }
            }
        }
        if !f.is_zero() {
            out.push(f);
        }
    }
    out
}

/// Builds a catalog algebra by name with integer parameters.
pub fn build(name: &str, params: &[i64]) -> Result<GradedLieAlgebra> {
    let need = |n: usize| -> Result<()> {
        if params.len() == n {
            Ok(())
        } else {
            Err(Error::UnknownCatalogEntry(format!(
                "{name} expects {n} parameter(s), got {}",
                params.len()
            )))
        }
    };
    let pos = |i: usize| -> Result<usize> {
        let v = params[i];
        if v >= 1 {
            Ok(v as usize)
        } else {
            Err(Error::UnknownCatalogEntry(format!(
                "{name} parameter {} must be ≥ 1",
                i + 1
            )))
        }
    };
    match name {
        "abelian" => {
            need(1)?;
            Ok(abelian(pos(0)?))
        }
        "heisenberg" => {
            need(1)?;
            Ok(heisenberg(pos(0)?))
        }
        "engel" => {
            need(0)?;
            Ok(engel())
        }
        "engel_regraded" => {
            need(0)?;
            Ok(engel_regraded())
        }
        "free" => {
            need(2)?;
            Ok(free(pos(0)?, pos(1)? as u32))
        }
        "triangular" => {
            need(1)?;
            let n = pos(0)?;
            if n < 2 {
                return Err(Error::UnknownCatalogEntry(
                    "triangular needs n ≥ 2".into(),
                ));
            }
            Ok(triangular(n))
        }
        "quaternionic_q7" => {
            need(0)?;
            Ok(quaternionic_q7())
        }
        "octonionic_15" => {
            need(0)?;
            Ok(octonionic_15())
        }
        "chen" => {
            need(2)?;
            Ok(chen(pos(0)?, pos(1)? as u32))
        }
        "carlson_toledo" => {
            need(0)?;
            Ok(carlson_toledo())
        }
        "g6" => {
            need(0)?;
            Ok(g6())
        }
        _ => Err(Error::UnknownCatalogEntry(name.to_string())),
    }
}

/// Parses "name" or "name(p1,p2)" and builds the algebra.
pub fn build_spec(spec: &str) -> Result<GradedLieAlgebra> {
    let spec = spec.trim();
    if let Some(open) = spec.find('(') {
        let name = &spec[..open];
        let rest = spec[open + 1..]
            .strip_suffix(')')
            .ok_or_else(|| Error::Parse(format!("malformed catalog spec {spec:?}")))?;
        let params: Vec<i64> = if rest.trim().is_empty() {
            Vec::new()
        } else {
            rest.split(',')
                .map(|p| {
                    p.trim()
                        .parse::<i64>()
                        .map_err(|_| Error::Parse(format!("bad parameter {p:?} in {spec:?}")))
                })
                .collect::<Result<_>>()?
        };
        build(name, &params)
    } else {
        build(spec, &[])
    }
}

/// One regression-table row: an algebra spec with the externally asserted
/// values the CLI `regress` command re-derives and compares.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub spec: &'static str,
    /// degree whose pinching interval is asserted
    pub degree: Option<usize>,
    /// expected β interval as exact rationals "p/q"
    pub beta: Option<(&'static str, &'static str)>,
    /// expected α interval
    pub alpha: Option<(&'static str, &'static str)>,
    pub quadratically_presented: Option<bool>,
    pub note: &'static str,
}

/// Static regression table of headline values.
pub fn catalog_list() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            spec: "heisenberg(1)",
            degree: Some(1),
            beta: Some(("2", "2")),
            alpha: Some(("2", "2")),
            quadratically_presented: Some(false),
            note: "cubic presentation; α₁ = 2",
        },
        CatalogEntry {
            spec: "heisenberg(2)",
            degree: Some(2),
            beta: Some(("2", "2")),
            alpha: Some(("3", "3")),
            quadratically_presented: Some(true),
            note: "middle degree halves α",
        },
        CatalogEntry {
            spec: "heisenberg(3)",
            degree: Some(3),
            beta: Some(("2", "2")),
            alpha: Some(("4", "4")),
            quadratically_presented: Some(true),
            note: "middle degree halves α",
        },
        CatalogEntry {
            spec: "engel",
            degree: Some(1),
            beta: Some(("2", "3")),
            alpha: Some(("7/3", "7/2")),
            quadratically_presented: Some(false),
            note: "mixed relation weights {3,4}",
        },
        CatalogEntry {
            spec: "engel_regraded",
            degree: Some(2),
            beta: Some(("3", "4")),
            alpha: Some(("5/2", "10/3")),
            quadratically_presented: None,
            note: "regraded; degree-2 interval",
        },
        CatalogEntry {
            spec: "free(2,2)",
            degree: Some(1),
            beta: Some(("2", "2")),
            alpha: Some(("2", "2")),
            quadratically_presented: Some(false),
            note: "free rank 2: β₁ = 2",
        },
        CatalogEntry {
            spec: "free(2,3)",
            degree: Some(1),
            beta: Some(("3", "3")),
            alpha: Some(("10/3", "10/3")),
            quadratically_presented: Some(false),
            note: "free rank 3: β₁ = 3",
        },
        CatalogEntry {
            spec: "free(2,4)",
            degree: Some(1),
            beta: Some(("4", "4")),
            alpha: Some(("11/2", "11/2")),
            quadratically_presented: Some(false),
            note: "free rank 4: β₁ = 4",
        },
        CatalogEntry {
            spec: "free(3,2)",
            degree: Some(1),
            beta: Some(("2", "2")),
            alpha: Some(("9/2", "9/2")),
            quadratically_presented: Some(false),
            note: "free rank 2: β₁ = 2",
        },
        CatalogEntry {
            spec: "free(3,3)",
            degree: Some(1),
            beta: Some(("3", "3")),
            alpha: Some(("11", "11")),
            quadratically_presented: Some(false),
            note: "free rank 3: β₁ = 3",
        },
        CatalogEntry {
            spec: "triangular(4)",
            degree: Some(1),
            beta: Some(("2", "2")),
            alpha: Some(("5", "5")),
            quadratically_presented: Some(false),
            note: "cubic relations are audible: β₁ = 2",
        },
        CatalogEntry {
            spec: "quaternionic_q7",
            degree: Some(3),
            beta: Some(("2", "2")),
            alpha: Some(("5", "5")),
            quadratically_presented: Some(false),
            note: "β₃ = 2; weight-3 relations, no decomposable curvature",
        },
        CatalogEntry {
            spec: "carlson_toledo",
            degree: Some(1),
            beta: Some(("1", "1")),
            alpha: Some(("12", "12")),
            quadratically_presented: Some(true),
            note: "quadratically presented ⇒ β₁ = 1",
        },
        CatalogEntry {
            spec: "chen(2,2)",
            degree: Some(1),
            beta: Some(("1", "1")),
            alpha: None,
            quadratically_presented: Some(true),
            note: "quadratically presented ⇒ β₁ = 1",
        },
        CatalogEntry {
            spec: "octonionic_15",
            degree: None,
            beta: None,
            alpha: None,
            quadratically_presented: Some(true),
            note: "sporadic quadratic presentation (56-dim bijection)",
        },
    ]
}

/// The algebras covered by the exhaustive d_c²/δ_c sweeps.
///
/// Representative parameters for the parametric families; free(3,4) and
/// larger free algebras are omitted (their middle-degree form spaces are
/// astronomically large and no asserted value depends on them).
pub fn sweep_algebras() -> Vec<GradedLieAlgebra> {
    vec![
        abelian(4),
        heisenberg(1),
        heisenberg(2),
        heisenberg(3),
        engel(),
        engel_regraded(),
        free(2, 2),
        free(2, 3),
        free(2, 4),
        free(3, 2),
        free(3, 3),
        triangular(4),
        triangular(5),
        chen(2, 2),
        carlson_toledo(),
        quaternionic_q7(),
        g6(),
        octonionic_15(),
    ]
}

/// Same list without the 15-dimensional octonionic algebra, for
/// budget-sensitive property fuzzing.
pub fn small_sweep_algebras() -> Vec<GradedLieAlgebra> {
    let mut v = sweep_algebras();
    v.retain(|a| a.dim() < 15);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology;
    use crate::forms;

    fn layer_dims(alg: &GradedLieAlgebra) -> Vec<usize> {
        alg.layer_profile().layer_dims.values().copied().collect()
    }

    #[test]
    fn all_builders_validate() {
        for alg in sweep_algebras() {
            assert!(
                alg.validate_structure().is_empty(),
                "{} fails validation",
                alg.name()
            );
        }
    }

    #[test]
    fn triangular_profile() {
        let n4 = triangular(4);
        assert_eq!(n4.dim(), 6);
        assert_eq!(layer_dims(&n4), vec![3, 2, 1]);
        let p = n4.layer_profile();
        assert!(p.filtered);
        assert_eq!(p.homogeneous_dim, 10);
    }

    #[test]
    fn heisenberg_shape() {
        let h2 = heisenberg(2);
        assert_eq!(h2.dim(), 5);
        assert_eq!(layer_dims(&h2), vec![4, 1]);
        assert!(h2.layer_profile().filtered);
    }

    #[test]
    fn clifford_validation_catches_bad_data() {
        // two copies of the same J anticommute with themselves only
        let q = quaternionic_clifford();
        let bad = CliffordData::new(vec![q.j[0].clone(), q.j[0].clone()]);
        assert!(matches!(bad, Err(Error::InvalidClifford { i: 0, j: 1 })));
        // a symmetric matrix is rejected earlier
        let sym = Matrix::from_fn(2, 2, |r, c| if r == c { rat(0) } else { rat(1) });
        assert!(matches!(
            CliffordData::new(vec![sym]),
            Err(Error::InvalidAlgebra(_))
        ));
    }

    #[test]
    fn htype_curvature_matches_clifford() {
        let data = quaternionic_clifford();
        let alg = quaternionic_q7();
        assert_eq!(alg.dim(), 7);
        assert_eq!(layer_dims(&alg), vec![4, 3]);
        // d₀θ_l = g(J_l·,·): coefficient of θ^a∧θ^b is ⟨J_l e_a, e_b⟩
        for l in 0..3 {
            let basis = forms::FormSpaceBasis::new(&alg, 1);
            let d0 = forms::d0_matrix(&alg, 1);
            let b2 = forms::FormSpaceBasis::new(&alg, 2);
            let col = basis.index_of(1u64 << (4 + l));
            for (r, &mask) in b2.masks.iter().enumerate() {
                let idx: Vec<usize> = forms::mask_indices(mask).collect();
                let expect = if idx[0] < 4 && idx[1] < 4 {
                    data.j[l][(idx[1], idx[0])].clone()
                } else {
                    rat(0)
                };
                assert_eq!(d0[(r, col)], expect, "l={l} mask={mask:b}");
            }
        }
    }

    #[test]
    fn octonionic_shape_and_weight3_bijection() {
        let alg = octonionic_15();
        assert_eq!(alg.dim(), 15);
        assert_eq!(layer_dims(&alg), vec![8, 7]);
        let (src, tgt, rank) = cohomology::weight3_block_rank(&alg);
        assert_eq!((src, tgt, rank), (56, 56, 56));
        assert!(cohomology::is_quadratically_presented(&alg).unwrap());
    }

    #[test]
    fn q7_no_decomposable_curvature() {
        let alg = quaternionic_q7();
        let span = curvature_span(&alg);
        assert_eq!(span.len(), 3);
        match cohomology::rank2_in_span(&alg, &span).unwrap() {
            cohomology::Rank2Verdict::NoneCertified => {}
            v => panic!("expected NoneCertified, got {v:?}"),
        }
    }

    #[test]
    fn chen_shape_and_quadratic() {
        let alg = chen(2, 2);
        // x1,x2 + y with |α| ≤ 2: 1 + 2 + 3 = 6 y's → dim 8
        assert_eq!(alg.dim(), 8);
        // weight 1: x's + |α| = 2 (3 of them); weight 2: |α| = 1 (2); weight 3: α = 0
        assert_eq!(layer_dims(&alg), vec![5, 2, 1]);
        assert!(alg.layer_profile().filtered);
        assert!(cohomology::is_quadratically_presented(&alg).unwrap());
    }

    #[test]
    fn carlson_toledo_quadratic() {
        let alg = carlson_toledo();
        assert_eq!(alg.dim(), 8);
        assert!(alg.layer_profile().filtered);
        assert!(cohomology::is_quadratically_presented(&alg).unwrap());
        // the defining curvature forms
        let b1 = forms::FormSpaceBasis::new(&alg, 1);
        let d0 = forms::d0_matrix(&alg, 1);
        let b2 = forms::FormSpaceBasis::new(&alg, 2);
        let y1 = b1.index_of(1 << 5);
        let r13 = b2.index_of(0b00101);
        let r24 = b2.index_of(0b01010);
        assert_eq!(d0[(r13, y1)], rat(1));
        assert_eq!(d0[(r24, y1)], rat(1));
    }

    #[test]
    fn g6_is_filtered_quotient() {
        let alg = g6();
        assert_eq!(alg.dim(), 6);
        assert_eq!(layer_dims(&alg), vec![4, 2]);
        assert!(alg.layer_profile().filtered);
        assert!(alg.validate_structure().is_empty());
    }

    #[test]
    fn build_spec_round_trip() {
        assert_eq!(build_spec("heisenberg(2)").unwrap().dim(), 5);
        assert_eq!(build_spec("engel").unwrap().dim(), 4);
        assert_eq!(build_spec("free(2, 3)").unwrap().dim(), 5);
        assert!(build_spec("nonsense").is_err());
        assert!(build_spec("heisenberg").is_err());
        assert!(build_spec("heisenberg(0)").is_err());
    }

    #[test]
    fn regression_table_specs_build() {
        for entry in catalog_list() {
            assert!(build_spec(entry.spec).is_ok(), "{} fails", entry.spec);
        }
    }
}
