//! Dense linear algebra over f64: eigen-splitting of real-split matrices,
//! rank-one spectral projectors, exterior powers, and minor enumeration.
//!
//! The carrier type is `nalgebra::DMatrix<f64>`, re-exported as [`Mat`].
//! Dimensions stay small (d <= 12), so the solvers favour robustness over
//! asymptotics: eigenvalues come from the real Schur form, eigenvectors from
//! SVD null spaces of the shifted matrix, and duals from the inverse of the
//! eigenvector matrix.

use crate::error::{Error, Result};
use crate::tol;
use nalgebra::{DMatrix, DVector};

pub type Mat = DMatrix<f64>;
pub type Vect = DVector<f64>;

/// Modulus-sorted spectral data of a real-split matrix.
///
/// `vectors` holds the eigenvectors as columns, `duals` the dual covectors
/// as rows, so `duals * vectors = I` and the source matrix is
/// `sum_i values[i] * vectors.col(i) * duals.row(i)`.
#[derive(Debug, Clone)]
pub struct EigenSplit {
    pub values: Vec<f64>,
    pub vectors: Mat,
    pub duals: Mat,
    /// Smallest relative modulus gap between consecutive eigenvalues.
    pub gap: f64,
}

impl EigenSplit {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Rank-one projector e_i e^i onto the i-th eigenline (0-based).
    pub fn projector(&self, i: usize) -> Mat {
        let e = self.vectors.column(i);
        let d = self.duals.row(i);
        &e * &d
    }

    /// Whether the top k moduli are strictly separated from each other and
    /// from the (k+1)-st, at relative tolerance `tol_gap`.
    pub fn is_k_proximal(&self, k: usize, tol_gap: f64) -> bool {
        let d = self.dim();
        if k >= d {
            return self.gap > tol_gap;
        }
        (0..k).all(|i| {
            let hi = self.values[i].abs();
            let lo = self.values[i + 1].abs();
            hi - lo > tol_gap * hi
        })
    }

    /// log of the spectral radius.
    pub fn length(&self) -> f64 {
        self.values[0].abs().ln()
    }

    /// log lambda_1 - log lambda_d (moduli).
    pub fn hilbert_length(&self) -> f64 {
        (self.values[0] / self.values[self.dim() - 1]).abs().ln()
    }
}

/// Deterministic eigenvector normalization: unit Euclidean norm with the
/// first component of magnitude above a relative threshold made positive.
pub(crate) fn normalize_direction(v: &mut Vect) {
    let norm = v.norm();
    if norm > 0.0 {
        *v /= norm;
    }
    let thresh = 1e-12;
    for i in 0..v.len() {
        if v[i].abs() > thresh {
            if v[i] < 0.0 {
                *v = -&*v;
            }
            break;
        }
    }
}

/// Splits a real-split matrix into modulus-sorted eigenvalues, eigenvectors,
/// and dual covectors.
///
/// Fails with `NotRealSplit` if any eigenvalue has imaginary part exceeding
/// `tol_gap` times the spectral radius, and with `ModulusCollision` if two
/// consecutive moduli differ by less than `tol_gap` relatively.
pub fn eig_split(m: &Mat, tol_gap: f64) -> Result<EigenSplit> {
    let d = m.nrows();
    assert_eq!(d, m.ncols(), "eig_split requires a square matrix");
    assert!(m.iter().all(|x| x.is_finite()), "matrix entries must be finite");

    let complex = m.clone().complex_eigenvalues();
    let radius = complex.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    let scale = if radius > 0.0 { radius } else { 1.0 };
    for (i, c) in complex.iter().enumerate() {
        if c.im.abs() > tol_gap * scale {
            return Err(Error::NotRealSplit {
                index: i,
                imag: c.im,
            });
        }
    }
    let mut values: Vec<f64> = complex.iter().map(|c| c.re).collect();
    values.sort_by(|a, b| b.abs().partial_cmp(&a.abs()).unwrap());

    let mut gap = f64::INFINITY;
    for i in 0..d - 1 {
        let hi = values[i].abs();
        let lo = values[i + 1].abs();
        let rel = (hi - lo) / scale;
        gap = gap.min(rel);
        if rel < tol_gap {
            return Err(Error::ModulusCollision { index: i, gap: rel });
        }
    }
    if d == 1 {
        gap = 1.0;
    }

    // Eigenvector for each eigenvalue: null direction of (M - lambda I),
    // extracted as the right singular vector of the smallest singular value.
    let mut vectors = Mat::zeros(d, d);
    for (i, &lambda) in values.iter().enumerate() {
        let mut shifted = m.clone();
        for j in 0..d {
            shifted[(j, j)] -= lambda;
        }
        let svd = shifted.svd(false, true);
        let v_t = svd.v_t.as_ref().expect("svd with v_t requested");
        let mut v: Vect = v_t.row(d - 1).transpose();
        normalize_direction(&mut v);
        vectors.set_column(i, &v);
    }

    let duals = vectors
        .clone()
        .try_inverse()
        .ok_or(Error::SingularFlagBasis { det: 0.0 })?;

    // Polish eigenvalues through the bi-orthogonal sandwich; for a
    // well-separated spectrum this restores full precision lost in the
    // Schur sweep.
    let sandwich = &duals * m * &vectors;
    for i in 0..d {
        values[i] = sandwich[(i, i)];
    }

    Ok(EigenSplit {
        values,
        vectors,
        duals,
        gap,
    })
}

/// Reassembles `sum_i lambda_i e_i e^i`.
pub fn from_eigensplit(es: &EigenSplit) -> Mat {
    let d = es.dim();
    let mut diag = Mat::zeros(d, d);
    for i in 0..d {
        diag[(i, i)] = es.values[i];
    }
    &es.vectors * diag * &es.duals
}

/// Strictly increasing k-subsets of 0..n in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut num = 1usize;
    for i in 0..k {
        num = num * (n - i) / (i + 1);
    }
    num
}

fn check_index_set(idx: &[usize], d: usize) -> Result<()> {
    let ok = !idx.is_empty()
        && idx.windows(2).all(|w| w[0] < w[1])
        && *idx.last().unwrap() < d;
    if ok {
        Ok(())
    } else {
        Err(Error::BadIndexSet(idx.to_vec()))
    }
}

/// Determinant of the submatrix selected by strictly increasing row and
/// column index lists (0-based).
pub fn minor(m: &Mat, rows: &[usize], cols: &[usize]) -> Result<f64> {
    let d = m.nrows();
    check_index_set(rows, d)?;
    check_index_set(cols, d)?;
    if rows.len() != cols.len() {
        return Err(Error::DimensionMismatch {
            expected: rows.len(),
            got: cols.len(),
        });
    }
    Ok(submatrix(m, rows, cols).determinant())
}

pub fn submatrix(m: &Mat, rows: &[usize], cols: &[usize]) -> Mat {
    Mat::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])])
}

/// All size-k minors as ((rows, cols), value), rows and cols lexicographic.
pub fn enumerate_minors(m: &Mat, k: usize) -> Result<Vec<((Vec<usize>, Vec<usize>), f64)>> {
    let d = m.nrows();
    if k == 0 || k > d {
        return Err(Error::BadExteriorPower { k, dim: d });
    }
    let subs = k_subsets(d, k);
    let mut out = Vec::with_capacity(subs.len() * subs.len());
    for rows in &subs {
        for cols in &subs {
            let value = submatrix(m, rows, cols).determinant();
            out.push(((rows.clone(), cols.clone()), value));
        }
    }
    Ok(out)
}

/// k-th exterior power (compound matrix) acting on k-wedges of the standard
/// basis in lexicographic index order: entry (I, J) is the minor M[I, J].
pub fn exterior_power(m: &Mat, k: usize) -> Result<Mat> {
    let d = m.nrows();
    if k == 0 || k > d {
        return Err(Error::BadExteriorPower { k, dim: d });
    }
    let subs = k_subsets(d, k);
    let n = subs.len();
    let mut out = Mat::zeros(n, n);
    for (i, rows) in subs.iter().enumerate() {
        for (j, cols) in subs.iter().enumerate() {
            out[(i, j)] = submatrix(m, rows, cols).determinant();
        }
    }
    Ok(out)
}

/// |det - 1| <= TOL_DET * d.
pub fn check_unimodular(m: &Mat) -> Result<()> {
    let excess = (m.determinant() - 1.0).abs();
    if excess > tol::TOL_DET * m.nrows() as f64 {
        return Err(Error::NotUnimodular { excess });
    }
    Ok(())
}

/// Frobenius-relative distance, with an absolute fallback near zero.
pub fn rel_frob(a: &Mat, b: &Mat) -> f64 {
    let denom = a.norm().max(b.norm()).max(1e-300);
    (a - b).norm() / denom
}


pub mod xprec;
