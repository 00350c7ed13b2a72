//! Subspaces of F^n as reduced-row-echelon bases of row vectors.

use std::sync::Arc;

use super::echelon::{rref, Rref};
use super::Matrix;
use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldElement};

#[derive(Debug, Clone)]
pub struct Subspace {
    n: usize,
    field: Arc<FieldDescriptor>,
    rows: Vec<Vec<FieldElement>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn from_vectors(
        vectors: Vec<Vec<FieldElement>>,
        n: usize,
        field: Arc<FieldDescriptor>,
    ) -> Self {
        let Rref { rows, pivots } = rref(vectors, n, &field);
        Subspace {
            n,
            field,
            rows,
            pivots,
        }
    }

    pub fn zero_space(n: usize, field: Arc<FieldDescriptor>) -> Self {
        Subspace {
            n,
            field,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(n: usize, field: Arc<FieldDescriptor>) -> Self {
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { field.one() } else { field.zero() })
                    .collect()
            })
            .collect();
        Subspace {
            n,
            field,
            rows,
            pivots: (0..n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.n
    }

    pub fn basis_rows(&self) -> &[Vec<FieldElement>] {
        &self.rows
    }

    pub fn field(&self) -> &Arc<FieldDescriptor> {
        &self.field
    }

    /// Exact membership by reduction against the echelon basis.
    pub fn contains(&self, v: &[FieldElement]) -> bool {
        let f = &self.field;
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if f.is_zero(&v[p]) {
                continue;
            }
            let c = v[p].clone();
            for j in 0..self.n {
                let sub = f.mul(&row[j], &c);
                v[j] = f.sub(&v[j], &sub);
            }
        }
        v.iter().all(|e| f.is_zero(e))
    }

    pub fn contains_space(&self, other: &Subspace) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    pub fn equal_space(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.contains_space(other)
    }

    /// Image {u * m : u in U} as a subspace.
    pub fn image(&self, m: &Matrix) -> Subspace {
        let mapped = self
            .rows
            .iter()
            .map(|r| row_times_matrix(r, m))
            .collect();
        Subspace::from_vectors(mapped, self.n, self.field.clone())
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Subspace::from_vectors(rows, self.n, self.field.clone())
    }

    /// Intersection by the Zassenhaus block trick: echelonize rows
    /// [u | u] for u in U and [w | 0] for w in W; rows with zero left half
    /// carry an intersection basis in their right half.
    pub fn intersect(&self, other: &Subspace) -> Subspace {
        let f = &self.field;
        let n = self.n;
        let mut stacked: Vec<Vec<FieldElement>> = Vec::new();
        for u in &self.rows {
            let mut row = u.clone();
            row.extend(u.iter().cloned());
            stacked.push(row);
        }
        for w in &other.rows {
            let mut row = w.clone();
            row.extend(std::iter::repeat(f.zero()).take(n));
            stacked.push(row);
        }
        let Rref { rows, .. } = rref(stacked, 2 * n, f);
        let mut inter = Vec::new();
        for row in rows {
            if row[..n].iter().all(|e| f.is_zero(e)) {
                inter.push(row[n..].to_vec());
            }
        }
        Subspace::from_vectors(inter, n, self.field.clone())
    }

    /// Extends the basis of this subspace to a basis of F^n by standard unit
    /// vectors at the non-pivot columns; returns the change-of-basis matrix
    /// whose first dim(U) rows are the subspace basis.
    pub fn extend_to_basis(&self) -> Matrix {
        let f = &self.field;
        let mut rows = self.rows.clone();
        for j in 0..self.n {
            if !self.pivots.contains(&j) {
                let mut e = vec![f.zero(); self.n];
                e[j] = f.one();
                rows.push(e);
            }
        }
        Matrix::from_rows(rows, self.field.clone()).expect("square by construction")
    }
}

fn row_times_matrix(v: &[FieldElement], m: &Matrix) -> Vec<FieldElement> {
    let f = m.field();
    let n = m.n();
    let mut out = vec![f.zero(); n];
    for (i, c) in v.iter().enumerate() {
        if f.is_zero(c) {
            continue;
        }
        for (j, o) in out.iter_mut().enumerate() {
            let prod = f.mul(c, m.entry(i, j));
            *o = f.add(o, &prod);
        }
    }
    out
}

/// Left nullspace {v : v * x = 0} as an echelonized subspace.
pub fn nullspace(x: &Matrix) -> Subspace {
    let f = x.field();
    let n = x.n();
    let xt = x.transpose();
    let rows: Vec<Vec<FieldElement>> = (0..n).map(|i| xt.row(i).to_vec()).collect();
    let Rref { rows, pivots } = rref(rows, n, f);
    let mut kernel = Vec::new();
    for j in 0..n {
        if pivots.contains(&j) {
            continue;
        }
        let mut v = vec![f.zero(); n];
        v[j] = f.one();
        for (row, &p) in rows.iter().zip(&pivots) {
            v[p] = f.neg(&row[j]);
        }
        kernel.push(v);
    }
    Subspace::from_vectors(kernel, n, x.field().clone())
}

/// Block decomposition of matrices preserving a common invariant subspace.
#[derive(Debug, Clone)]
pub struct BlockProjection {
    pub dim_u: usize,
    /// Change-of-basis matrix: first dim_u rows span U, the rest are unit
    /// vectors completing the basis.
    pub change: Matrix,
    pub change_inv: Matrix,
    /// Restrictions to U.
    pub on_u: Vec<Matrix>,
    /// Induced actions on the quotient V/U.
    pub on_quotient: Vec<Matrix>,
}

/// Rewrites each h in `mats` in a basis extending U and splits off the
/// diagonal blocks (h restricted to U, h on V/U). Fails with the index of
/// the first matrix that does not preserve U.
pub fn block_projection(u: &Subspace, mats: &[Matrix]) -> Result<BlockProjection> {
    let f = u.field().clone();
    let n = u.n();
    let d = u.dim();
    let change = u.extend_to_basis();
    let change_inv = change.inverse().expect("basis matrix is invertible");
    let mut on_u = Vec::with_capacity(mats.len());
    let mut on_quotient = Vec::with_capacity(mats.len());
    for (index, h) in mats.iter().enumerate() {
        let b = change.mul(h)?.mul(&change_inv)?;
        // invariance of U shows up as a zero upper-right block
        for i in 0..d {
            for j in d..n {
                if !f.is_zero(b.entry(i, j)) {
                    return Err(Error::NotInvariant { index });
                }
            }
        }
        let top = Matrix::from_fn(d, f.clone(), |i, j| b.entry(i, j).clone());
        let bottom = Matrix::from_fn(n - d, f.clone(), |i, j| b.entry(d + i, d + j).clone());
        on_u.push(top);
        on_quotient.push(bottom);
    }
    Ok(BlockProjection {
        dim_u: d,
        change,
        change_inv,
        on_u,
        on_quotient,
    })
}
