//! Exact linear algebra over an arbitrary field.
//!
//! Dense matrices cover the public API; the sparse row-list kernels are
//! what the cohomology pipeline runs on, since the Koszul-type
//! differentials of larger algebras are very sparse. Reduced row echelon
//! form is canonical, so every basis produced here is deterministic
//! regardless of pivot heuristics.

use crate::scalar::Field;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Field> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[S] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<S> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if !b.is_zero() {
                        let p = a.clone() * b.clone();
                        out[(r, c)] += p;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let mut acc = S::zero();
                for c in 0..self.cols {
                    if !self[(r, c)].is_zero() && !v[c].is_zero() {
                        acc += self[(r, c)].clone() * v[c].clone();
                    }
                }
                acc
            })
            .collect()
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, |r, c| {
            self[(r, c)].clone() - other[(r, c)].clone()
        })
    }

    pub fn scale(&self, s: &S) -> Self {
        Matrix::from_fn(self.rows, self.cols, |r, c| self[(r, c)].clone() * s.clone())
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&rr| !self[(rr, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = S::one() / self[(r, c)].clone();
            for cc in c..self.cols {
                let v = self[(r, cc)].clone() * inv.clone();
                self[(r, cc)] = v;
            }
            for rr in 0..self.rows {
                if rr != r && !self[(rr, c)].is_zero() {
                    let f = self[(rr, c)].clone();
                    for cc in c..self.cols {
                        let v = self[(r, cc)].clone() * f.clone();
                        self[(rr, cc)] -= v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right kernel, one vector per free column, in column order.
    pub fn kernel_basis(&self) -> Vec<Vec<S>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let mut out = Vec::new();
        for f in 0..self.cols {
            if pivot_set.contains(&f) {
                continue;
            }
            let mut v = vec![S::zero(); self.cols];
            v[f] = S::one();
            for (i, &pc) in pivots.iter().enumerate() {
                if !m[(i, f)].is_zero() {
                    v[pc] = -m[(i, f)].clone();
                }
            }
            out.push(v);
        }
        out
    }

    /// Inverse of a square matrix, `None` if singular.
    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Matrix::from_fn(n, 2 * n, |r, c| {
            if c < n {
                self[(r, c)].clone()
            } else if c - n == r {
                S::one()
            } else {
                S::zero()
            }
        });
        let pivots = aug.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        Some(Matrix::from_fn(n, n, |r, c| aug[(r, c + n)].clone()))
    }

    /// Exact Moore–Penrose pseudoinverse via full-rank factorization:
    /// `A = C R` with `C` the pivot columns and `R` the nonzero RREF rows,
    /// then `A⁺ = Rᵀ (R Rᵀ)⁻¹ (Cᵀ C)⁻¹ Cᵀ`.
    pub fn pseudoinverse(&self) -> Self {
        let mut red = self.clone();
        let pivots = red.rref();
        let r = pivots.len();
        if r == 0 {
            return Matrix::zeros(self.cols, self.rows);
        }
        let c_mat = Matrix::from_fn(self.rows, r, |i, j| self[(i, pivots[j])].clone());
        let r_mat = Matrix::from_fn(r, self.cols, |i, j| red[(i, j)].clone());
        let rt = r_mat.transpose();
        let ct = c_mat.transpose();
        let g1 = r_mat.mul(&rt).inverse().expect("R Rᵀ is invertible");
        let g2 = ct.mul(&c_mat).inverse().expect("Cᵀ C is invertible");
        rt.mul(&g1).mul(&g2).mul(&ct)
    }

    /// Determinant of a square matrix by Gaussian elimination.
    pub fn determinant(&self) -> S {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = S::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m[(r, c)].is_zero()) else {
                return S::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            det = det * m[(c, c)].clone();
            let inv = S::one() / m[(c, c)].clone();
            for r in (c + 1)..n {
                if m[(r, c)].is_zero() {
                    continue;
                }
                let f = m[(r, c)].clone() * inv.clone();
                for cc in c..n {
                    let v = m[(c, cc)].clone() * f.clone();
                    m[(r, cc)] -= v;
                }
            }
        }
        det
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl<S> std::ops::Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (r, c): (usize, usize)) -> &S {
        &self.data[r * self.cols + c]
    }
}

impl<S> std::ops::IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut S {
        &mut self.data[r * self.cols + c]
    }
}

/// Sparse vector: strictly increasing column indices, no zero entries.
pub type SparseVec<S> = Vec<(usize, S)>;

pub fn sparse_add_scaled<S: Field>(a: &SparseVec<S>, b: &SparseVec<S>, f: &S) -> SparseVec<S> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some((ca, va)), Some((cb, _))) if ca < cb => {
                out.push((*ca, va.clone()));
                i += 1;
            }
            (Some((ca, _)), Some((cb, vb))) if cb < ca => {
                out.push((*cb, vb.clone() * f.clone()));
                j += 1;
            }
            (Some((ca, va)), Some((_, vb))) => {
                let v = va.clone() + vb.clone() * f.clone();
                if !v.is_zero() {
                    out.push((*ca, v));
                }
                i += 1;
                j += 1;
            }
            (Some((ca, va)), None) => {
                out.push((*ca, va.clone()));
                i += 1;
            }
            (None, Some((cb, vb))) => {
                out.push((*cb, vb.clone() * f.clone()));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// Row-major sparse matrix for the elimination-heavy paths.
#[derive(Clone, Debug)]
pub struct SparseMat<S> {
    pub rows: Vec<SparseVec<S>>,
    pub ncols: usize,
}

impl<S: Field> SparseMat<S> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMat {
            rows: vec![Vec::new(); nrows],
            ncols,
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn from_triplets(nrows: usize, ncols: usize, trip: &[(usize, usize, S)]) -> Self {
        let mut rows: Vec<Vec<(usize, S)>> = vec![Vec::new(); nrows];
        for (r, c, v) in trip {
            if !v.is_zero() {
                rows[*r].push((*c, v.clone()));
            }
        }
        for row in &mut rows {
            row.sort_by_key(|(c, _)| *c);
            // merge duplicates
            let mut merged: SparseVec<S> = Vec::with_capacity(row.len());
            for (c, v) in row.drain(..) {
                match merged.last_mut() {
                    Some((lc, lv)) if *lc == c => *lv += v,
                    _ => merged.push((c, v)),
                }
            }
            merged.retain(|(_, v)| !v.is_zero());
            *row = merged;
        }
        SparseMat { rows, ncols }
    }

    pub fn to_dense(&self) -> Matrix<S> {
        let mut m = Matrix::zeros(self.rows.len(), self.ncols);
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                m[(r, *c)] = v.clone();
            }
        }
        m
    }

    pub fn from_dense(m: &Matrix<S>) -> Self {
        let rows = (0..m.nrows())
            .map(|r| {
                m.row(r)
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(c, v)| (c, v.clone()))
                    .collect()
            })
            .collect();
        SparseMat {
            rows,
            ncols: m.ncols(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut out = SparseMat::zeros(self.ncols, self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                out.rows[*c].push((r, v.clone()));
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        self.rows
            .iter()
            .map(|row| {
                let mut acc = S::zero();
                for (c, x) in row {
                    if !v[*c].is_zero() {
                        acc += x.clone() * v[*c].clone();
                    }
                }
                acc
            })
            .collect()
    }

    /// Reduced row echelon form (unique, hence canonical regardless of
    /// the pivot-row choices made along the way).
    pub fn rref(&mut self) -> Rref {
        eliminate(self, None)
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().pivot_cols.len()
    }

    /// Kernel basis, one sparse vector per free column, in free-column order.
    /// Vector for free column `f` has a `1` at `f`, zeroes at every other
    /// free column, and `-R[i, f]` at pivot column `i`.
    pub fn kernel_basis(&self) -> Vec<SparseVec<S>> {
        self.kernel_with_free_cols()
            .into_iter()
            .map(|(_, v)| v)
            .collect()
    }

    /// Kernel basis tagged with each vector's free column (the position
    /// where it is 1 while every other kernel vector vanishes, so that
    /// coordinates of span members can be read off directly).
    pub fn kernel_with_free_cols(&self) -> Vec<(usize, SparseVec<S>)> {
        let mut m = self.clone();
        let rref = m.rref();
        let vs = kernel_from_rref(&m, &rref, self.ncols);
        let pivot_set: std::collections::HashSet<usize> =
            rref.pivot_cols.iter().copied().collect();
        let free: Vec<usize> = (0..self.ncols).filter(|c| !pivot_set.contains(c)).collect();
        free.into_iter().zip(vs).collect()
    }
}

/// Pivot bookkeeping of a reduced row echelon form.
#[derive(Clone, Debug)]
pub struct Rref {
    pub pivot_cols: Vec<usize>,
    pub pivot_rows: Vec<usize>,
}

/// Binary search for column `c` in a sorted sparse row.
fn row_find<S>(row: &SparseVec<S>, c: usize) -> Option<usize> {
    row.binary_search_by_key(&c, |(cc, _)| *cc).ok()
}

/// Gaussian elimination to full reduced echelon form, optionally logging
/// every row operation for later right-hand-side replay.
///
/// Forward pass: pivot columns in increasing order, touching only the
/// rows that actually carry the column (tracked through a lazily cleaned
/// column-occupancy index), sparsest candidate row first. Back pass:
/// clear each pivot column from the earlier pivot rows, last pivot first,
/// so every row is combined with a given pivot row at most once.
fn eliminate<S: Field>(a: &mut SparseMat<S>, mut ops: Option<&mut Vec<ElimOp<S>>>) -> Rref {
    let nrows = a.rows.len();
    let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); a.ncols];
    for (r, row) in a.rows.iter().enumerate() {
        for (c, _) in row {
            col_rows[*c].push(r);
        }
    }
    let mut is_pivot_row = vec![false; nrows];
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut pivot_rows: Vec<usize> = Vec::new();
    for c in 0..a.ncols {
        // live rows with a genuine nonzero at c (occupancy may be stale)
        let mut cand = std::mem::take(&mut col_rows[c]);
        cand.sort_unstable();
        cand.dedup();
        cand.retain(|&r| !is_pivot_row[r] && row_find(&a.rows[r], c).is_some());
        let Some(&r) = cand.iter().min_by_key(|&&r| a.rows[r].len()) else {
            continue;
        };
        let pi = row_find(&a.rows[r], c).unwrap();
        let inv = S::one() / a.rows[r][pi].1.clone();
        if !inv.is_one() {
            for (_, v) in a.rows[r].iter_mut() {
                *v = v.clone() * inv.clone();
            }
            if let Some(log) = ops.as_deref_mut() {
                log.push(ElimOp::Scale {
                    row: r,
                    f: inv.clone(),
                });
            }
        }
        let pivot_row = a.rows[r].clone();
        for &rr in &cand {
            if rr == r {
                continue;
            }
            let ti = row_find(&a.rows[rr], c).expect("candidate row carries the column");
            let f = a.rows[rr][ti].1.clone();
            a.rows[rr] = sparse_add_scaled(&a.rows[rr], &pivot_row, &(-f.clone()));
            for (cc, _) in &pivot_row {
                if *cc > c {
                    col_rows[*cc].push(rr);
                }
            }
            if let Some(log) = ops.as_deref_mut() {
                log.push(ElimOp::AddScaled { target: rr, src: r, f });
            }
        }
        is_pivot_row[r] = true;
        pivot_cols.push(c);
        pivot_rows.push(r);
    }
    // back-substitution: each pivot row is already reduced against all
    // later pivots when it gets subtracted from the earlier rows
    for i in (0..pivot_cols.len()).rev() {
        let (c, r) = (pivot_cols[i], pivot_rows[i]);
        let pivot_row = a.rows[r].clone();
        for &rj in pivot_rows.iter().take(i) {
            let Some(ti) = row_find(&a.rows[rj], c) else {
                continue;
            };
            let f = a.rows[rj][ti].1.clone();
            a.rows[rj] = sparse_add_scaled(&a.rows[rj], &pivot_row, &(-f.clone()));
            if let Some(log) = ops.as_deref_mut() {
                log.push(ElimOp::AddScaled { target: rj, src: r, f });
            }
        }
    }
    Rref {
        pivot_cols,
        pivot_rows,
    }
}

pub fn kernel_from_rref<S: Field>(
    reduced: &SparseMat<S>,
    rref: &Rref,
    ncols: usize,
) -> Vec<SparseVec<S>> {
    let pivot_set: std::collections::HashMap<usize, usize> = rref
        .pivot_cols
        .iter()
        .enumerate()
        .map(|(i, &c)| (c, i))
        .collect();
    let mut out = Vec::new();
    for f in 0..ncols {
        if pivot_set.contains_key(&f) {
            continue;
        }
        let mut v: SparseVec<S> = Vec::new();
        for (i, &pc) in rref.pivot_cols.iter().enumerate() {
            let row = &reduced.rows[rref.pivot_rows[i]];
            if let Some(ti) = row_find(row, f) {
                v.push((pc, -row[ti].1.clone()));
            }
        }
        v.push((f, S::one()));
        v.sort_by_key(|(c, _)| *c);
        out.push(v);
    }
    out
}

/// Canonical reduced row echelon data for reuse: reduced rows + pivots,
/// with the elimination log replayable on right-hand sides.
pub struct Eliminator<S> {
    /// (pivot col, reduced row) pairs in pivot order.
    pub reduced: SparseMat<S>,
    pub rref: Rref,
    /// Row-operation log: (target_row, pivot_index, factor) meaning
    /// `target -= factor * current_pivot_row` at the time of the op,
    /// plus normalizations (pivot_index, factor) meaning `row *= factor`.
    ops: Vec<ElimOp<S>>,
    nrows: usize,
}

enum ElimOp<S> {
    /// rhs[target] -= f * rhs[src]
    AddScaled { target: usize, src: usize, f: S },
    /// rhs[row] *= f
    Scale { row: usize, f: S },
}

impl<S: Field> Eliminator<S> {
    pub fn new(mut a: SparseMat<S>) -> Self {
        let nrows = a.nrows();
        let mut ops = Vec::new();
        let rref = eliminate(&mut a, Some(&mut ops));
        Eliminator {
            reduced: a,
            rref,
            ops,
            nrows,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref.pivot_cols.len()
    }

    pub fn ops_len(&self) -> usize {
        self.ops.len()
    }

    /// Replays the elimination on `rhs` (length = original row count).
    pub fn reduce_rhs(&self, rhs: &mut [S]) {
        assert_eq!(rhs.len(), self.nrows);
        for op in &self.ops {
            match op {
                ElimOp::Scale { row, f } => {
                    if !rhs[*row].is_zero() {
                        rhs[*row] = rhs[*row].clone() * f.clone();
                    }
                }
                ElimOp::AddScaled { target, src, f } => {
                    if !rhs[*src].is_zero() {
                        let p = f.clone() * rhs[*src].clone();
                        rhs[*target] -= p;
                    }
                }
            }
        }
    }

    /// For each requested solved coordinate `pc`, the sparse functional v
    /// with x[pc] = v · y for every consistent right-hand side y, matching
    /// `solve` (free variables zero; non-pivot columns give empty rows).
    ///
    /// Computed by replaying the op log in reverse, transposed, on the unit
    /// covector at the pivot row of `pc` — one pass per row instead of one
    /// pass per right-hand side.
    pub fn solution_rows(&self, pcs: &[usize]) -> Vec<SparseVec<S>> {
        let pivot_of: std::collections::HashMap<usize, usize> = self
            .rref
            .pivot_cols
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, i))
            .collect();
        let mut out = Vec::with_capacity(pcs.len());
        let mut u = vec![S::zero(); self.nrows];
        for &pc in pcs {
            let Some(&pi) = pivot_of.get(&pc) else {
                out.push(Vec::new());
                continue;
            };
            let r = self.rref.pivot_rows[pi];
            u[r] = S::one();
            let mut touched = vec![r];
            for op in self.ops.iter().rev() {
                match op {
                    ElimOp::Scale { row, f } => {
                        if !u[*row].is_zero() {
                            u[*row] = u[*row].clone() * f.clone();
                        }
                    }
                    ElimOp::AddScaled { target, src, f } => {
                        if !u[*target].is_zero() {
                            if u[*src].is_zero() {
                                touched.push(*src);
                            }
                            let p = f.clone() * u[*target].clone();
                            u[*src] -= p;
                        }
                    }
                }
            }
            touched.sort_unstable();
            touched.dedup();
            let mut row: SparseVec<S> = Vec::new();
            for &i in &touched {
                if !u[i].is_zero() {
                    row.push((i, u[i].clone()));
                }
                u[i] = S::zero();
            }
            out.push(row);
        }
        out
    }

    /// Particular solution of `A x = y` (free variables zero), or `None`
    /// when the system is inconsistent.
    pub fn solve(&self, y: &[S]) -> Option<Vec<S>> {
        let mut rhs = y.to_vec();
        self.reduce_rhs(&mut rhs);
        let mut x = vec![S::zero(); self.reduced.ncols];
        let mut used = vec![false; self.nrows];
        for (i, &pc) in self.rref.pivot_cols.iter().enumerate() {
            let r = self.rref.pivot_rows[i];
            x[pc] = rhs[r].clone();
            used[r] = true;
        }
        for r in 0..self.nrows {
            if !used[r] && !rhs[r].is_zero() {
                return None;
            }
        }
        Some(x)
    }
}

/// Minimum-norm solver `y ↦ A⁺ y` for a fixed matrix `A`, reusable across
/// many right-hand sides.
///
/// Factors once: `x = Aᵀ z` where `(A Aᵀ) z = y`. Any particular solution
/// `z` of the (consistent, for `y ∈ im A`) normal system gives the unique
/// minimum-norm solution, since two choices differ by `ker(A Aᵀ) = ker Aᵀ`.
pub struct PinvSolver<S> {
    at: SparseMat<S>,
    elim: Eliminator<S>,
}

impl<S: Field> PinvSolver<S> {
    pub fn new(a: &SparseMat<S>) -> Self {
        let at = a.transpose();
        let nr = a.nrows();
        let mut gram = SparseMat::zeros(nr, nr);
        for i in 0..nr {
            let mut acc: std::collections::BTreeMap<usize, S> = Default::default();
            for (c, v) in &a.rows[i] {
                for (j, w) in &at.rows[*c] {
                    let p = v.clone() * w.clone();
                    *acc.entry(*j).or_insert_with(S::zero) += p;
                }
            }
            gram.rows[i] = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        }
        let elim = Eliminator::new(gram);
        PinvSolver { at, elim }
    }

    /// `A⁺ y`; `None` when `y ∉ im A`.
    pub fn apply(&self, y: &[S]) -> Option<Vec<S>> {
        let z = self.elim.solve(y)?;
        Some(self.at.mul_vec(&z))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rat};
    use num_traits::Zero;

    fn m(rows: &[&[i64]]) -> Matrix<Rat> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
    }

    #[test]
    fn rref_and_kernel() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 1, 1]]);
        assert_eq!(a.rank(), 2);
        let ker = a.kernel_basis();
        assert_eq!(ker.len(), 1);
        for v in &ker {
            assert!(a.mul_vec(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn pseudoinverse_axioms() {
        let a = m(&[&[1, 0, 1], &[0, 1, 1]]);
        let p = a.pseudoinverse();
        assert_eq!(a.mul(&p).mul(&a), a);
        assert_eq!(p.mul(&a).mul(&p), p);
        let ap = a.mul(&p);
        let pa = p.mul(&a);
        assert_eq!(ap.transpose(), ap);
        assert_eq!(pa.transpose(), pa);
        // rank-deficient case
        let b = m(&[&[1, 2], &[2, 4]]);
        let q = b.pseudoinverse();
        assert_eq!(b.mul(&q).mul(&b), b);
        assert_eq!(q.mul(&b).mul(&q), q);
    }

    #[test]
    fn sparse_matches_dense() {
        let a = m(&[&[0, 1, 2, 0], &[1, 0, 0, 3], &[1, 1, 2, 3]]);
        let s = SparseMat::from_dense(&a);
        assert_eq!(s.rank(), a.rank());
        let kd = a.kernel_basis();
        let ks = s.kernel_basis();
        assert_eq!(kd.len(), ks.len());
        for (dv, sv) in kd.iter().zip(&ks) {
            let dense_sv: Vec<Rat> = {
                let mut v = vec![rat(0); 4];
                for (c, x) in sv {
                    v[*c] = x.clone();
                }
                v
            };
            assert_eq!(dv, &dense_sv);
        }
    }

    #[test]
    fn pinv_solver_matches_dense_pseudoinverse() {
        let a = m(&[&[1, 2, 0, 1], &[0, 1, 1, 0], &[1, 3, 1, 1]]);
        let solver = PinvSolver::new(&SparseMat::from_dense(&a));
        let pinv = a.pseudoinverse();
        // rhs inside the image
        let y = a.mul_vec(&[rat(2), rat(-1), rat(3), rat(0)]);
        let x = solver.apply(&y).unwrap();
        assert_eq!(x, pinv.mul_vec(&y));
        assert_eq!(a.mul_vec(&x), y);
        assert!(solver.apply(&[rat(1), rat(1), rat(1)]).is_none());
    }

    #[test]
    fn eliminator_solves() {
        let a = m(&[&[1, 2, 0], &[0, 1, 1], &[1, 3, 1]]);
        let s = SparseMat::from_dense(&a);
        let e = Eliminator::new(s);
        assert_eq!(e.rank(), 2);
        let y = a.mul_vec(&[rat(1), rat(-2), rat(5)]);
        let x = e.solve(&y).unwrap();
        assert_eq!(a.mul_vec(&x), y);
        // inconsistent rhs
        assert!(e.solve(&[rat(0), rat(0), rat(1)]).is_none());
    }

    #[test]
    fn solution_rows_match_solve() {
        let a = m(&[
            &[1, 2, 0, 3, 1],
            &[0, 1, 1, 0, 2],
            &[1, 3, 1, 3, 3],
            &[2, 0, 1, 1, 0],
        ]);
        let e = Eliminator::new(SparseMat::from_dense(&a));
        let pcs: Vec<usize> = (0..5).collect();
        let rows = e.solution_rows(&pcs);
        for t in 0..4 {
            // consistent rhs: image of a basis-ish vector
            let xin: Vec<Rat> = (0..5).map(|i| rat((i as i64 + 2) * (t as i64 + 1) % 7 - 3)).collect();
            let y = a.mul_vec(&xin);
            let x = e.solve(&y).unwrap();
            for (pc, row) in pcs.iter().zip(&rows) {
                let mut acc = Rat::zero();
                for (r, v) in row {
                    acc += v.clone() * y[*r].clone();
                }
                assert_eq!(acc, x[*pc], "solved coordinate {pc} disagrees");
            }
        }
    }
}
