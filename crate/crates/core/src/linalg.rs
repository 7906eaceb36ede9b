//! Dense complex linear algebra shared by every other module.
//!
//! Matrices and vectors are plain `nalgebra` dynamic types over `Complex64`.
//! All tolerances are absolute, measured in the max-entry norm.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

#[allow(non_camel_case_types)]
pub type c64 = Complex64;
pub type ComplexMatrix = DMatrix<c64>;
pub type ComplexVector = DVector<c64>;

/// Max-entry deviation allowed between a matrix and its adjoint.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues down to this (negative) value are clamped to zero by [`psd_sqrt`].
pub const PSD_CLAMP_TOL: f64 = 1e-10;

pub fn c(re: f64, im: f64) -> c64 {
    c64::new(re, im)
}

pub fn real_vector(values: &[f64]) -> ComplexVector {
    ComplexVector::from_iterator(values.len(), values.iter().map(|&v| c(v, 0.0)))
}

/// Row-major construction from real entries.
pub fn real_matrix(rows: usize, cols: usize, values: &[f64]) -> ComplexMatrix {
    assert_eq!(values.len(), rows * cols);
    ComplexMatrix::from_row_iterator(rows, cols, values.iter().map(|&v| c(v, 0.0)))
}

pub fn identity(dim: usize) -> ComplexMatrix {
    ComplexMatrix::identity(dim, dim)
}

pub fn is_finite_matrix(m: &ComplexMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn is_finite_vector(v: &ComplexVector) -> bool {
    v.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn check_matrix(m: &ComplexMatrix) -> Result<()> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Err(Error::Shape("matrix must have at least one row and column".into()));
    }
    if !is_finite_matrix(m) {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    Ok(())
}

pub fn check_vector(v: &ComplexVector) -> Result<()> {
    if v.is_empty() {
        return Err(Error::Shape("vector must have at least one entry".into()));
    }
    if !is_finite_vector(v) {
        return Err(Error::InvalidInput("vector has non-finite entries".into()));
    }
    Ok(())
}

pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// `‖a − b‖_max` for equally shaped matrices.
pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

pub fn max_abs_diff_vec(a: &ComplexVector, b: &ComplexVector) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b.iter()).fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

pub fn vector_norm(v: &ComplexVector) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Thin singular value decomposition `m = u · diag(s) · v_t`, values descending.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub v_t: ComplexMatrix,
}

/// SVD through `faer`. nalgebra's own SVD mishandles bidiagonals with
/// entries near (but not at) zero, which rank-deficient blocks of unitaries
/// produce routinely.
pub fn svd(m: &ComplexMatrix) -> Result<Svd> {
    check_matrix(m)?;
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return Ok(Svd {
            u: ComplexMatrix::zeros(rows, 0),
            singular_values: Vec::new(),
            v_t: ComplexMatrix::zeros(0, cols),
        });
    }
    let f = faer::Mat::<c64>::from_fn(rows, cols, |i, j| m[(i, j)]);
    let d = f
        .thin_svd()
        .map_err(|e| Error::InvalidInput(format!("SVD did not converge: {e:?}")))?;
    let (u, sv, v) = (d.U(), d.S().column_vector(), d.V());
    let k = sv.nrows();
    Ok(Svd {
        u: ComplexMatrix::from_fn(rows, k, |i, j| u[(i, j)]),
        singular_values: (0..k).map(|i| sv[i].re).collect(),
        v_t: ComplexMatrix::from_fn(k, cols, |i, j| v[(j, i)].conj()),
    })
}

/// Largest singular value.
pub fn spectral_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(svd(m)?.singular_values.first().copied().unwrap_or(0.0))
}

pub fn hermitian_defect(m: &ComplexMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

/// Principal square root of a Hermitian positive semidefinite matrix.
///
/// Eigenvalues in `[-PSD_CLAMP_TOL, 0)` are treated as zero.
pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_matrix(m)?;
    if !m.is_square() {
        return Err(Error::Shape(format!(
            "psd_sqrt needs a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let defect = hermitian_defect(m);
    if defect > HERMITIAN_TOL {
        return Err(Error::InvalidInput(format!(
            "matrix is not Hermitian (defect {defect:e})"
        )));
    }
    // symmetrize so the eigensolver sees an exactly Hermitian input
    let h = (m + m.adjoint()) * c(0.5, 0.0);
    let (values, q) = hermitian_eigen(&h)?;
    let mut roots = Vec::with_capacity(values.len());
    for &lambda in &values {
        if lambda < -PSD_CLAMP_TOL {
            return Err(Error::NotPsd(lambda));
        }
        roots.push(lambda.max(0.0).sqrt());
    }
    let mut scaled = q.clone();
    for (j, r) in roots.iter().enumerate() {
        scaled.column_mut(j).scale_mut(*r);
    }
    let s = &scaled * q.adjoint();
    Ok((&s + s.adjoint()) * c(0.5, 0.0))
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian
/// matrix; only the lower triangle is read.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    check_matrix(m)?;
    let n = m.nrows();
    let f = faer::Mat::<c64>::from_fn(n, n, |i, j| m[(i, j)]);
    let e = f
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|e| Error::InvalidInput(format!("eigensolver did not converge: {e:?}")))?;
    let (vals, vecs) = (e.S().column_vector(), e.U());
    Ok((
        (0..n).map(|i| vals[i].re).collect(),
        ComplexMatrix::from_fn(n, n, |i, j| vecs[(i, j)]),
    ))
}

/// `x = V · diag(λ) · V†` with `V` unitary, for a normal (e.g. unitary) `x`.
///
/// The Hermitian and anti-Hermitian parts of a normal matrix commute, so a
/// generic real combination of them is Hermitian with the same eigenvectors.
/// A few fixed combinations are tried in case one of them maps two distinct
/// eigenvalues close together; the most diagonal result wins.
pub fn normal_eigen(x: &ComplexMatrix) -> Result<(ComplexMatrix, Vec<c64>)> {
    check_matrix(x)?;
    let n = x.nrows();
    let re = (x + x.adjoint()) * c(0.5, 0.0);
    let im = (x - x.adjoint()) * c(0.0, -0.5);
    let mut best: Option<(f64, ComplexMatrix, ComplexMatrix)> = None;
    for (p, q) in [(0.5307, 0.8476), (0.9013, -0.4332), (0.2113, 0.9774), (-0.6917, 0.6124)] {
        let (_, v) = hermitian_eigen(&(&re * c(p, 0.0) + &im * c(q, 0.0)))?;
        let t = v.adjoint() * x * &v;
        let off = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .fold(0.0f64, |acc, (i, j)| acc.max(t[(i, j)].norm()));
        if best.as_ref().is_none_or(|b| off < b.0) {
            best = Some((off, v, t));
        }
        if off < 1e-13 {
            break;
        }
    }
    let (_, v, t) = best.expect("at least one combination is tried");
    Ok((v, (0..n).map(|i| t[(i, i)]).collect()))
}

/// True iff `‖M†M − I‖_max ≤ tol`.
pub fn is_unitary(m: &ComplexMatrix, tol: f64) -> bool {
    m.is_square() && unitarity_defect(m) <= tol
}

pub fn unitarity_defect(m: &ComplexMatrix) -> f64 {
    let n = m.nrows();
    max_abs_diff(&(m.adjoint() * m), &identity(n))
}

/// Kronecker product `a ⊗ b`; `a` indexes the more significant bits.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// Block-diagonal `a ⊕ b`.
pub fn direct_sum(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    let mut out = ComplexMatrix::zeros(ra + rb, ca + cb);
    out.view_mut((0, 0), (ra, ca)).copy_from(a);
    out.view_mut((ra, ca), (rb, cb)).copy_from(b);
    out
}

/// Nearest unitary in the Frobenius sense (unitary polar factor).
///
/// Panics on non-finite input.
pub fn closest_unitary(m: &ComplexMatrix) -> ComplexMatrix {
    let d = svd(m).expect("closest_unitary needs a finite matrix");
    d.u * d.v_t
}

/// Unitary whose first column is `v` (which must be unit norm).
///
/// The remaining columns come from Gram–Schmidt over the standard basis, so
/// the result is deterministic for a given `v`.
pub fn complete_to_unitary(v: &ComplexVector) -> Result<ComplexMatrix> {
    check_vector(v)?;
    let dim = v.len();
    let norm = vector_norm(v);
    if (norm - 1.0).abs() > 1e-8 {
        return Err(Error::Normalization { norm, tol: 1e-8 });
    }
    let mut cols: Vec<ComplexVector> = Vec::with_capacity(dim);
    cols.push(v / c(norm, 0.0));
    // Visit basis vectors in order of least overlap with v first so the
    // orthogonalized remainders stay well conditioned.
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| v[a].norm().total_cmp(&v[b].norm()));
    for idx in order {
        if cols.len() == dim {
            break;
        }
        let mut e = ComplexVector::zeros(dim);
        e[idx] = c(1.0, 0.0);
        if let Some(q) = orthonormalize_against(&e, &cols, 1e-6) {
            cols.push(q);
        }
    }
    debug_assert_eq!(cols.len(), dim);
    Ok(ComplexMatrix::from_columns(&cols))
}

/// Two passes of modified Gram–Schmidt; `None` if the remainder is shorter
/// than `min_norm`.
pub(crate) fn orthonormalize_against(
    v: &ComplexVector,
    basis: &[ComplexVector],
    min_norm: f64,
) -> Option<ComplexVector> {
    let mut w = v.clone();
    for _ in 0..2 {
        for q in basis {
            let proj = q.dotc(&w);
            w -= q * proj;
        }
    }
    let n = vector_norm(&w);
    if n < min_norm {
        None
    } else {
        Some(w / c(n, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hadamard() -> ComplexMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        real_matrix(2, 2, &[s, s, s, -s])
    }

    #[test]
    fn spectral_norm_basic_cases() {
        assert!((spectral_norm(&identity(4)).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(spectral_norm(&ComplexMatrix::zeros(3, 3)).unwrap(), 0.0);
        let d = real_matrix(2, 2, &[0.5, 0.0, 0.0, 0.3]);
        assert!((spectral_norm(&d).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn spectral_norm_rejects_nan() {
        let mut m = identity(2);
        m[(0, 1)] = c(f64::NAN, 0.0);
        assert!(matches!(spectral_norm(&m), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn psd_sqrt_diagonal() {
        let s = psd_sqrt(&identity(3)).unwrap();
        assert!(max_abs_diff(&s, &identity(3)) < 1e-12);
        let m = real_matrix(2, 2, &[4.0, 0.0, 0.0, 9.0]);
        let s = psd_sqrt(&m).unwrap();
        assert!(max_abs_diff(&s, &real_matrix(2, 2, &[2.0, 0.0, 0.0, 3.0])) < 1e-12);
    }

    #[test]
    fn psd_sqrt_clamps_tiny_negative_eigenvalues() {
        let m = real_matrix(2, 2, &[1.0, 0.0, 0.0, -5e-11]);
        let s = psd_sqrt(&m).unwrap();
        assert!((s[(1, 1)].norm()) < 1e-12);
    }

    #[test]
    fn psd_sqrt_errors() {
        let neg = real_matrix(2, 2, &[1.0, 0.0, 0.0, -1e-3]);
        assert!(matches!(psd_sqrt(&neg), Err(Error::NotPsd(_))));
        let nonherm = real_matrix(2, 2, &[1.0, 0.5, 0.0, 1.0]);
        assert!(matches!(psd_sqrt(&nonherm), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn unitary_checks() {
        assert!(is_unitary(&hadamard(), 1e-12));
        assert!(!is_unitary(&real_matrix(2, 2, &[1.0, 0.0, 0.0, 0.5]), 1e-6));
    }

    #[test]
    fn completion_is_unitary_with_given_first_column() {
        let v = real_vector(&[0.6, 0.0, 0.8, 0.0]);
        let u = complete_to_unitary(&v).unwrap();
        assert!(is_unitary(&u, 1e-12));
        assert!(max_abs_diff_vec(&u.column(0).into_owned(), &v) < 1e-15);
        let e0 = real_vector(&[1.0, 0.0]);
        let u = complete_to_unitary(&e0).unwrap();
        assert!(max_abs_diff(&u, &identity(2)) < 1e-15);
    }

    #[test]
    fn direct_sum_layout() {
        let a = real_matrix(1, 1, &[2.0]);
        let b = identity(2);
        let s = direct_sum(&a, &b);
        assert_eq!(s.shape(), (3, 3));
        assert_eq!(s[(0, 0)], c(2.0, 0.0));
        assert_eq!(s[(2, 2)], c(1.0, 0.0));
        assert_eq!(s[(0, 2)], c(0.0, 0.0));
    }
}
