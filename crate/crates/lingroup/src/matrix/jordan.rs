//! Multiplicative Jordan decomposition g = g_d g_u in characteristic zero.

use super::minpoly::minimal_polynomial;
use super::Matrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct JordanParts {
    /// Diagonalizable part, a polynomial in g.
    pub d: Matrix,
    /// Unipotent part g_d^-1 g, also a polynomial in g.
    pub u: Matrix,
}

/// Computes the Jordan decomposition of an invertible matrix over a field of
/// characteristic zero. With s the squarefree part of the minimal
/// polynomial, Newton iteration z <- z - s(z) s'(z)^-1 starting at z = g
/// converges quadratically to the diagonalizable part; the iteration is
/// capped at ceil(log2 n) + 2 steps and s(z) = 0 is asserted at exit, so a
/// failure here indicates a bug rather than an input problem.
pub fn jordan_decomposition(g: &Matrix) -> Result<JordanParts> {
    let f = g.field().clone();
    if f.characteristic() != 0 {
        return Err(Error::Unsupported(
            "Jordan decomposition is implemented for characteristic zero".into(),
        ));
    }
    let n = g.n();
    let m = minimal_polynomial(g);
    let s = m.squarefree_part(&f)?;
    if s == m {
        // already diagonalizable
        return Ok(JordanParts {
            d: g.clone(),
            u: Matrix::identity(n, f),
        });
    }
    let ds = s.derivative(&f);
    let max_steps = (usize::BITS - n.leading_zeros()) as usize + 2;
    let mut z = g.clone();
    let mut converged = false;
    for _ in 0..max_steps {
        let sz = z.eval_poly(&s);
        if sz.is_zero() {
            converged = true;
            break;
        }
        let dsz = z.eval_poly(&ds);
        let step = sz.mul(&dsz.inverse()?)?;
        z = z.sub(&step)?;
    }
    if !converged && !z.eval_poly(&s).is_zero() {
        return Err(Error::Internal(
            "Jordan decomposition Newton iteration failed to converge".into(),
        ));
    }
    let d = z;
    let u = d.inverse().map_err(|_| Error::SingularMatrix)?.mul(g)?;
    Ok(JordanParts { d, u })
}
