//! Dense exact matrices over any supported field.
//!
//! Matrices are square, immutable after construction, and carry their
//! field descriptor. The row-vector convention `v * x` is fixed
//! project-wide: matrices act on row vectors from the right, invariant
//! subspaces are spanned by row vectors.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldElement, Polynomial};

pub mod echelon;
pub mod jordan;
pub mod minpoly;
pub mod subspace;

pub use echelon::IncrementalSpan;
pub use jordan::JordanParts;
pub use subspace::{BlockProjection, Subspace};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    n: usize,
    field: Arc<FieldDescriptor>,
    entries: Vec<FieldElement>,
}

impl Matrix {
    pub fn from_entries(
        n: usize,
        entries: Vec<FieldElement>,
        field: Arc<FieldDescriptor>,
    ) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::InvalidInput(format!(
                "expected {} entries for a {}x{} matrix, got {}",
                n * n,
                n,
                n,
                entries.len()
            )));
        }
        Ok(Matrix { n, field, entries })
    }

    pub fn from_rows(rows: Vec<Vec<FieldElement>>, field: Arc<FieldDescriptor>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("matrix must be square".into()));
        }
        let entries = rows.into_iter().flatten().collect();
        Matrix::from_entries(n, entries, field)
    }

    pub fn from_fn(
        n: usize,
        field: Arc<FieldDescriptor>,
        mut f: impl FnMut(usize, usize) -> FieldElement,
    ) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        Matrix { n, field, entries }
    }

    pub fn identity(n: usize, field: Arc<FieldDescriptor>) -> Self {
        let one = field.one();
        let zero = field.zero();
        Matrix::from_fn(n, field, |i, j| if i == j { one.clone() } else { zero.clone() })
    }

    pub fn zero(n: usize, field: Arc<FieldDescriptor>) -> Self {
        let zero = field.zero();
        Matrix::from_fn(n, field, |_, _| zero.clone())
    }

    /// Scalar matrix c * 1_n.
    pub fn scalar(n: usize, c: &FieldElement, field: Arc<FieldDescriptor>) -> Self {
        let zero = field.zero();
        Matrix::from_fn(n, field, |i, j| if i == j { c.clone() } else { zero.clone() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &Arc<FieldDescriptor> {
        &self.field
    }

    pub fn entry(&self, i: usize, j: usize) -> &FieldElement {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    fn same_field(&self, other: &Matrix) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DescriptorMismatch(format!(
                "dimension {} vs {}",
                self.n, other.n
            )));
        }
        if !Arc::ptr_eq(&self.field, &other.field) && self.field != other.field {
            return Err(Error::DescriptorMismatch(format!(
                "{} vs {}",
                self.field, other.field
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.same_field(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| self.field.add(a, b))
            .collect();
        Ok(Matrix {
            n: self.n,
            field: self.field.clone(),
            entries,
        })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.same_field(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| self.field.sub(a, b))
            .collect();
        Ok(Matrix {
            n: self.n,
            field: self.field.clone(),
            entries,
        })
    }

    pub fn neg(&self) -> Matrix {
        Matrix {
            n: self.n,
            field: self.field.clone(),
            entries: self.entries.iter().map(|a| self.field.neg(a)).collect(),
        }
    }

    pub fn scalar_mul(&self, c: &FieldElement) -> Matrix {
        Matrix {
            n: self.n,
            field: self.field.clone(),
            entries: self.entries.iter().map(|a| self.field.mul(a, c)).collect(),
        }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.same_field(other)?;
        let n = self.n;
        let f = &self.field;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = f.zero();
                for k in 0..n {
                    let a = self.entry(i, k);
                    if f.is_zero(a) {
                        continue;
                    }
                    let prod = f.mul(a, other.entry(k, j));
                    acc = f.add(&acc, &prod);
                }
                entries.push(acc);
            }
        }
        Ok(Matrix {
            n,
            field: self.field.clone(),
            entries,
        })
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.n, self.field.clone(), |i, j| self.entry(j, i).clone())
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Matrix> {
        let n = self.n;
        let f = &self.field;
        let mut left: Vec<Vec<FieldElement>> =
            (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut right: Vec<Vec<FieldElement>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { f.one() } else { f.zero() })
                    .collect()
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !f.is_zero(&left[r][col]));
            let pivot = pivot.ok_or(Error::SingularMatrix)?;
            left.swap(pivot, col);
            right.swap(pivot, col);
            let inv = f.inv(&left[col][col])?;
            for j in 0..n {
                left[col][j] = f.mul(&left[col][j], &inv);
                right[col][j] = f.mul(&right[col][j], &inv);
            }
            for r in 0..n {
                if r == col || f.is_zero(&left[r][col]) {
                    continue;
                }
                let factor = left[r][col].clone();
                for j in 0..n {
                    let l = f.mul(&factor, &left[col][j]);
                    left[r][j] = f.sub(&left[r][j], &l);
                    let rr = f.mul(&factor, &right[col][j]);
                    right[r][j] = f.sub(&right[r][j], &rr);
                }
            }
        }
        Matrix::from_rows(right, self.field.clone())
    }

    /// Conjugate `by^-1 * self * by`.
    pub fn conjugate(&self, by: &Matrix) -> Result<Matrix> {
        let inv = by.inverse()?;
        inv.mul(self)?.mul(by)
    }

    /// Commutator `a^-1 b^-1 a b`.
    pub fn group_commutator(&self, other: &Matrix) -> Result<Matrix> {
        let ai = self.inverse()?;
        let bi = other.inverse()?;
        ai.mul(&bi)?.mul(self)?.mul(other)
    }

    /// Additive commutator `a b - b a`.
    pub fn lie_bracket(&self, other: &Matrix) -> Result<Matrix> {
        let ab = self.mul(other)?;
        let ba = other.mul(self)?;
        ab.sub(&ba)
    }

    pub fn pow(&self, e: i64) -> Result<Matrix> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut result = Matrix::identity(self.n, self.field.clone());
        let mut acc = base;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&acc)?;
            }
            e >>= 1;
            if e > 0 {
                acc = acc.mul(&acc)?;
            }
        }
        Ok(result)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|a| self.field.is_zero(a))
    }

    pub fn is_identity(&self) -> bool {
        let f = &self.field;
        for i in 0..self.n {
            for j in 0..self.n {
                let e = self.entry(i, j);
                let ok = if i == j { f.is_one(e) } else { f.is_zero(e) };
                if !ok {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_scalar(&self) -> bool {
        let f = &self.field;
        let d = self.entry(0, 0);
        for i in 0..self.n {
            for j in 0..self.n {
                let e = self.entry(i, j);
                let ok = if i == j { e == d } else { f.is_zero(e) };
                if !ok {
                    return false;
                }
            }
        }
        true
    }

    /// `self - c * 1_n`.
    pub fn sub_scalar(&self, c: &FieldElement) -> Matrix {
        Matrix::from_fn(self.n, self.field.clone(), |i, j| {
            if i == j {
                self.field.sub(self.entry(i, j), c)
            } else {
                self.entry(i, j).clone()
            }
        })
    }

    /// Evaluates a polynomial at this matrix by Horner's scheme.
    pub fn eval_poly(&self, poly: &Polynomial) -> Matrix {
        let f = &self.field;
        let mut acc = Matrix::zero(self.n, self.field.clone());
        for c in poly.coeffs().iter().rev() {
            acc = acc.mul(self).expect("same field");
            if !f.is_zero(c) {
                acc = acc
                    .add(&Matrix::scalar(self.n, c, self.field.clone()))
                    .expect("same field");
            }
        }
        acc
    }

    /// Row-major flattening, used for span computations in F^(n^2).
    pub fn vectorize(&self) -> Vec<FieldElement> {
        self.entries.clone()
    }

    /// Deterministic total order on matrices over one field.
    pub fn cmp_canonical(&self, other: &Matrix) -> Ordering {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.entries.iter().zip(&other.entries) {
            match self.field.cmp_elements(a, b) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            write!(f, "[")?;
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.field.format(self.entry(i, j)))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::minpoly::{is_diagonalizable, is_unipotent, minimal_polynomial};
    use super::subspace::{block_projection, nullspace};
    use super::*;
    use crate::testutil::{mat_i64, mat_str, qq};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Independent naive triple-loop multiplication oracle.
    fn naive_mul(a: &Matrix, b: &Matrix) -> Matrix {
        let f = a.field();
        let n = a.n();
        Matrix::from_fn(n, f.clone(), |i, j| {
            let mut acc = f.zero();
            for k in 0..n {
                acc = f.add(&acc, &f.mul(a.entry(i, k), b.entry(k, j)));
            }
            acc
        })
    }

    fn random_invertible(
        n: usize,
        field: &std::sync::Arc<FieldDescriptor>,
        rng: &mut ChaCha8Rng,
    ) -> Matrix {
        // product of unitriangular and permutation factors, always invertible
        let mut m = Matrix::identity(n, field.clone());
        for _ in 0..4 {
            let mut t = Matrix::identity(n, field.clone());
            let i = rng.gen_range(0..n);
            let j = rng.gen_range(0..n);
            if i != j {
                t = Matrix::from_fn(n, field.clone(), |r, c| {
                    if (r, c) == (i, j) {
                        field.from_i64(rng.gen_range(-3i64..=3))
                    } else if r == c {
                        field.one()
                    } else {
                        field.zero()
                    }
                });
            }
            m = m.mul(&t).unwrap();
            let k = rng.gen_range(0..n);
            let l = rng.gen_range(0..n);
            if k != l {
                let perm = Matrix::from_fn(n, field.clone(), |r, c| {
                    let target = if r == k {
                        l
                    } else if r == l {
                        k
                    } else {
                        r
                    };
                    if c == target {
                        field.one()
                    } else {
                        field.zero()
                    }
                });
                m = m.mul(&perm).unwrap();
            }
        }
        m
    }

    #[test]
    fn multiplication_matches_naive_oracle() {
        let f = qq();
        let a = mat_i64(&f, &[&[1, 1], &[0, 1]]);
        let b = mat_i64(&f, &[&[1, 0], &[2, 1]]);
        let expected = mat_i64(&f, &[&[3, 1], &[2, 1]]);
        assert_eq!(a.mul(&b).unwrap(), expected);
        assert_eq!(naive_mul(&a, &b), expected);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let x = random_invertible(3, &f, &mut rng);
            let y = random_invertible(3, &f, &mut rng);
            assert_eq!(x.mul(&y).unwrap(), naive_mul(&x, &y));
        }
    }

    #[test]
    fn inverse_of_random_invertible() {
        let f = qq();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in 1..=4 {
            for _ in 0..10 {
                let a = random_invertible(n, &f, &mut rng);
                let inv = a.inverse().unwrap();
                assert!(a.mul(&inv).unwrap().is_identity());
            }
        }
    }

    #[test]
    fn conjugating_identity_is_identity() {
        let f = qq();
        let g = mat_i64(&f, &[&[1, 2], &[3, 7]]);
        let id = Matrix::identity(2, f.clone());
        assert!(id.conjugate(&g).unwrap().is_identity());
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let f = qq();
        let a = mat_i64(&f, &[&[1, 0], &[0, 0]]);
        assert!(matches!(a.inverse(), Err(crate::Error::SingularMatrix)));
    }

    #[test]
    fn nullspace_of_zero_and_invertible() {
        let f = qq();
        let z = Matrix::zero(3, f.clone());
        assert!(nullspace(&z).is_full());
        let g = mat_i64(&f, &[&[1, 1], &[0, 1]]);
        assert!(nullspace(&g).is_zero());
    }

    #[test]
    fn nullspace_by_direct_elimination() {
        // row convention: v (a,b) times [[0,1],[0,0]] is (0, a), so the
        // kernel is spanned by (0, 1)
        let f = qq();
        let x = mat_i64(&f, &[&[0, 1], &[0, 0]]);
        let ns = nullspace(&x);
        assert_eq!(ns.dim(), 1);
        assert!(ns.contains(&[f.zero(), f.one()]));
    }

    #[test]
    fn rank_nullity_on_random_matrices() {
        let f = qq();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for n in 1..=4 {
            for _ in 0..15 {
                let a = Matrix::from_fn(n, f.clone(), |_, _| {
                    f.from_i64(rng.gen_range(-2i64..=2))
                });
                let ns = nullspace(&a);
                let rank = Subspace::from_vectors(
                    (0..n).map(|i| a.row(i).to_vec()).collect(),
                    n,
                    f.clone(),
                )
                .dim();
                assert_eq!(ns.dim() + rank, n);
            }
        }
    }

    #[test]
    fn minimal_polynomials_of_small_matrices() {
        let f = qq();
        let id = Matrix::identity(3, f.clone());
        let m = minimal_polynomial(&id);
        // t - 1
        assert_eq!(m.coeffs(), &[f.from_i64(-1), f.one()]);

        let u = mat_i64(&f, &[&[1, 1], &[0, 1]]);
        let m = minimal_polynomial(&u);
        // (t - 1)^2 = t^2 - 2t + 1
        assert_eq!(m.coeffs(), &[f.one(), f.from_i64(-2), f.one()]);

        let d = mat_i64(&f, &[&[2, 0], &[0, 3]]);
        let m = minimal_polynomial(&d);
        // (t-2)(t-3) = t^2 - 5t + 6
        assert_eq!(m.coeffs(), &[f.from_i64(6), f.from_i64(-5), f.one()]);
        assert!(d.eval_poly(&m).is_zero());
    }

    /// Characteristic polynomial oracle by cofactor expansion over the
    /// polynomial ring; test-only and independent of the Krylov path.
    fn charpoly_oracle(g: &Matrix) -> Polynomial {
        let f = g.field();
        let n = g.n();
        // entries of tI - g as polynomials
        let entry = |i: usize, j: usize| -> Polynomial {
            let c = f.neg(g.entry(i, j));
            if i == j {
                Polynomial::new(vec![c, f.one()], f)
            } else {
                Polynomial::new(vec![c], f)
            }
        };
        let idx: Vec<usize> = (0..n).collect();
        poly_det(&entry, &idx, &idx, f)
    }

    fn poly_det(
        entry: &dyn Fn(usize, usize) -> Polynomial,
        rows: &[usize],
        cols: &[usize],
        f: &std::sync::Arc<FieldDescriptor>,
    ) -> Polynomial {
        if rows.len() == 1 {
            return entry(rows[0], cols[0]);
        }
        let mut acc = Polynomial::zero();
        for (k, &c) in cols.iter().enumerate() {
            let minor_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let sub = poly_det(entry, &rows[1..], &minor_cols, f);
            let term = entry(rows[0], c).mul(&sub, f);
            acc = if k % 2 == 0 {
                acc.add(&term, f)
            } else {
                acc.sub(&term, f)
            };
        }
        acc
    }

    #[test]
    fn minimal_polynomial_divides_characteristic_polynomial() {
        let f = qq();
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for n in 2..=4 {
            for _ in 0..8 {
                let g = Matrix::from_fn(n, f.clone(), |_, _| {
                    f.from_i64(rng.gen_range(-3i64..=3))
                });
                let m = minimal_polynomial(&g);
                assert!(g.eval_poly(&m).is_zero());
                let cp = charpoly_oracle(&g);
                let (_, rem) = cp.divrem(&m, &f).unwrap();
                assert!(rem.is_zero(), "minpoly divides charpoly");
            }
        }
    }

    #[test]
    fn unipotence_tests() {
        let f = qq();
        assert!(is_unipotent(&Matrix::identity(3, f.clone())));
        assert!(is_unipotent(&mat_i64(&f, &[&[1, 5], &[0, 1]])));
        assert!(!is_unipotent(&mat_i64(&f, &[&[2, 0], &[0, 1]])));
    }

    #[test]
    fn diagonalizability_tests() {
        let f = qq();
        assert!(is_diagonalizable(&mat_i64(&f, &[&[2, 0], &[0, 3]])));
        assert!(!is_diagonalizable(&mat_i64(&f, &[&[1, 1], &[0, 1]])));
        // rotation by 90 degrees: t^2 + 1 is squarefree
        assert!(is_diagonalizable(&mat_i64(&f, &[&[0, 1], &[-1, 0]])));
    }

    #[test]
    fn jordan_decomposition_of_small_matrices() {
        let f = qq();
        let u = mat_i64(&f, &[&[1, 1], &[0, 1]]);
        let parts = jordan::jordan_decomposition(&u).unwrap();
        assert!(parts.d.is_identity());
        assert_eq!(parts.u, u);

        let d = mat_i64(&f, &[&[2, 0], &[0, 3]]);
        let parts = jordan::jordan_decomposition(&d).unwrap();
        assert_eq!(parts.d, d);
        assert!(parts.u.is_identity());

        let g = mat_i64(&f, &[&[2, 1], &[0, 2]]);
        let parts = jordan::jordan_decomposition(&g).unwrap();
        assert_eq!(parts.d, mat_i64(&f, &[&[2, 0], &[0, 2]]));
        assert_eq!(parts.u, mat_str(&f, &[&["1", "1/2"], &["0", "1"]]));
    }

    #[test]
    fn jordan_invariants_on_random_triangularizable_matrices() {
        let f = qq();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..25 {
            let n = rng.gen_range(2..=4);
            // random invertible upper triangular, then a random conjugate
            let t = Matrix::from_fn(n, f.clone(), |i, j| {
                if i < j {
                    f.from_i64(rng.gen_range(-3i64..=3))
                } else if i == j {
                    f.from_i64(*[1, -1, 2, 3].get(rng.gen_range(0..4)).unwrap())
                } else {
                    f.zero()
                }
            });
            let c = random_invertible(n, &f, &mut rng);
            let g = t.conjugate(&c).unwrap();
            let parts = jordan::jordan_decomposition(&g).unwrap();
            assert_eq!(parts.d.mul(&parts.u).unwrap(), g);
            assert_eq!(parts.u.mul(&parts.d).unwrap(), g);
            assert!(is_unipotent(&parts.u));
            let md = minimal_polynomial(&parts.d);
            let dd = md.derivative(&f);
            assert!(md.gcd(&dd, &f).unwrap().is_one(&f), "squarefree min poly");
            // both parts commute with everything commuting with g
            assert_eq!(
                parts.d.mul(&g).unwrap(),
                g.mul(&parts.d).unwrap()
            );
        }
    }

    #[test]
    fn block_projection_splits_invariant_actions() {
        let f = qq();
        // full space: everything restricts to itself, quotient is empty
        let h = mat_i64(&f, &[&[1, 1], &[0, 1]]);
        let full = Subspace::full(2, f.clone());
        let bp = block_projection(&full, &[h.clone()]).unwrap();
        assert_eq!(bp.on_u[0], h);
        assert_eq!(bp.on_quotient[0].n(), 0);

        // row convention: span{(0,1)} is invariant under [[1,1],[0,1]]
        let u = Subspace::from_vectors(vec![vec![f.zero(), f.one()]], 2, f.clone());
        let bp = block_projection(&u, &[h.clone()]).unwrap();
        assert!(bp.on_u[0].is_identity());
        assert!(bp.on_quotient[0].is_identity());

        let d = mat_i64(&f, &[&[2, 0], &[0, 3]]);
        let u = Subspace::from_vectors(vec![vec![f.one(), f.zero()]], 2, f.clone());
        let bp = block_projection(&u, &[d]).unwrap();
        assert_eq!(bp.on_u[0], mat_i64(&f, &[&[2]]));
        assert_eq!(bp.on_quotient[0], mat_i64(&f, &[&[3]]));

        // span{(1,0)} is not invariant under the unitriangular matrix
        let u = Subspace::from_vectors(vec![vec![f.one(), f.zero()]], 2, f.clone());
        let err = block_projection(&u, &[h]);
        assert!(matches!(err, Err(crate::Error::NotInvariant { index: 0 })));
    }

    #[test]
    fn subspace_operations() {
        let f = qq();
        let a = Subspace::from_vectors(
            vec![
                vec![f.one(), f.zero(), f.zero()],
                vec![f.zero(), f.one(), f.zero()],
            ],
            3,
            f.clone(),
        );
        let b = Subspace::from_vectors(
            vec![
                vec![f.zero(), f.one(), f.zero()],
                vec![f.zero(), f.zero(), f.one()],
            ],
            3,
            f.clone(),
        );
        let meet = a.intersect(&b);
        assert_eq!(meet.dim(), 1);
        assert!(meet.contains(&[f.zero(), f.one(), f.zero()]));
        let join = a.sum(&b);
        assert!(join.is_full());
    }

    #[test]
    fn incremental_span_tracks_relations() {
        let f = qq();
        let mut span = echelon::IncrementalSpan::new(3, f.clone(), true);
        let v1 = vec![f.one(), f.zero(), f.one()];
        let v2 = vec![f.zero(), f.one(), f.one()];
        let v3 = vec![f.from_i64(2), f.from_i64(3), f.from_i64(5)];
        assert!(matches!(span.push(v1), echelon::PushOutcome::Added));
        assert!(matches!(span.push(v2), echelon::PushOutcome::Added));
        match span.push(v3) {
            echelon::PushOutcome::InSpan(Some(coeffs)) => {
                assert_eq!(coeffs, vec![f.from_i64(2), f.from_i64(3)]);
            }
            _ => panic!("v3 = 2 v1 + 3 v2 is in the span"),
        }
        assert_eq!(span.dim(), 2);
    }
}
