//! Decision procedures for virtual properties of finitely generated
//! matrix groups over infinite fields.
//!
//! Given generators of a group G inside GL(n, F), where F is the
//! rationals, a number field, a univariate function field over a number
//! field or finite field, or an algebraic extension of such a function
//! field, this crate decides whether G is solvable-by-finite, solvable,
//! nilpotent-by-finite, abelian-by-finite, central-by-finite, or
//! completely reducible.
//!
//! The method maps the generators through a congruence homomorphism onto
//! a finite matrix group, enumerates that image and reads a presentation
//! off its Cayley graph, evaluates the relators at the original
//! generators to obtain normal generators of the congruence kernel, and
//! then analyzes the kernel through exact linear algebra: enveloping
//! algebra closures, invariant subspaces, and Jordan decompositions. All
//! arithmetic is exact.

pub mod congruence;
pub mod error;
pub mod field;
pub mod matrix;

pub use error::{Error, Result};
pub use field::{FieldDescriptor, FieldElement, Polynomial};
pub use matrix::{Matrix, Subspace};

#[cfg(test)]
pub(crate) mod testutil {
    use std::sync::Arc;

    use crate::field::FieldDescriptor;
    use crate::matrix::Matrix;

    pub fn qq() -> Arc<FieldDescriptor> {
        FieldDescriptor::rationals()
    }

    pub fn mat_i64(field: &Arc<FieldDescriptor>, rows: &[&[i64]]) -> Matrix {
        let data = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        Matrix::from_rows(data, field.clone()).unwrap()
    }

    pub fn mat_str(field: &Arc<FieldDescriptor>, rows: &[&[&str]]) -> Matrix {
        let data = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| crate::field::parse::parse_element(s, field).unwrap())
                    .collect()
            })
            .collect();
        Matrix::from_rows(data, field.clone()).unwrap()
    }
}
