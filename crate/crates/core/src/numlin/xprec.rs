//! Double-double extended precision (~31 significant digits) for the
//! spectral-radius expansion experiments, where the decay term (l2/l1)^n
//! drops below f64 resolution long before the requested exponent range
//! runs out.
//!
//! Only the operations those experiments need live here: matrix products,
//! characteristic polynomials via the Faddeev-LeVerrier recurrence, and a
//! Newton polish of a simple dominant eigenvalue seeded from the f64 path.

use super::Mat;
use twofloat::TwoFloat;

/// Dense square matrix over double-double scalars, row-major.
#[derive(Debug, Clone)]
pub struct XMat {
    pub dim: usize,
    data: Vec<TwoFloat>,
}

impl XMat {
    pub fn from_f64(m: &Mat) -> Self {
        let dim = m.nrows();
        let data = (0..dim * dim)
            .map(|k| TwoFloat::from(m[(k / dim, k % dim)]))
            .collect();
        XMat { dim, data }
    }

    pub fn identity(dim: usize) -> Self {
        let mut data = vec![TwoFloat::from(0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = TwoFloat::from(1.0);
        }
        XMat { dim, data }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> TwoFloat {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: TwoFloat) {
        self.data[i * self.dim + j] = v;
    }

    pub fn mul(&self, other: &XMat) -> XMat {
        let d = self.dim;
        let mut out = XMat {
            dim: d,
            data: vec![TwoFloat::from(0.0); d * d],
        };
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                for j in 0..d {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn scale(&self, s: TwoFloat) -> XMat {
        XMat {
            dim: self.dim,
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    pub fn trace(&self) -> TwoFloat {
        let mut t = TwoFloat::from(0.0);
        for i in 0..self.dim {
            t += self.get(i, i);
        }
        t
    }

    pub fn sub_scalar_diag(&self, s: TwoFloat) -> XMat {
        let mut out = self.clone();
        for i in 0..self.dim {
            let v = out.get(i, i) - s;
            out.set(i, i, v);
        }
        out
    }

    pub fn to_f64(&self) -> Mat {
        Mat::from_fn(self.dim, self.dim, |i, j| self.get(i, j).into())
    }
}

/// Coefficients c_1..c_d of the characteristic polynomial
/// p(x) = x^d - c_1 x^(d-1) - c_2 x^(d-2) - ... - c_d
/// by the Faddeev-LeVerrier recurrence.
pub fn char_poly(m: &XMat) -> Vec<TwoFloat> {
    let d = m.dim;
    let mut coeffs = Vec::with_capacity(d);
    let mut mk = m.clone();
    for k in 1..=d {
        let ck = mk.trace() / TwoFloat::from(k as f64);
        coeffs.push(ck);
        if k < d {
            mk = m.mul(&mk.sub_scalar_diag(ck));
        }
    }
    coeffs
}

fn eval_poly(coeffs: &[TwoFloat], x: TwoFloat) -> (TwoFloat, TwoFloat) {
    // p and p' by Horner on x^d - sum c_k x^(d-k)
    let d = coeffs.len();
    let mut p = TwoFloat::from(1.0);
    let mut dp = TwoFloat::from(0.0);
    for k in 0..d {
        dp = dp * x + p;
        p = p * x - coeffs[k];
    }
    (p, dp)
}

/// Polishes a simple eigenvalue of `m` by Newton iteration on the
/// characteristic polynomial, starting from an f64-accurate seed.
pub fn polish_eigenvalue(m: &XMat, seed: f64) -> TwoFloat {
    let coeffs = char_poly(m);
    let mut x = TwoFloat::from(seed);
    for _ in 0..6 {
        let (p, dp) = eval_poly(&coeffs, x);
        if dp == 0.0 {
            break;
        }
        let step = p / dp;
        x -= step;
        if step.abs() < TwoFloat::from(1e-40) * x.abs() {
            break;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn char_poly_2x2() {
        let m = XMat::from_f64(&Mat::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 1.0]));
        let c = char_poly(&m);
        // x^2 - 3x + 1 => c_1 = 3, c_2 = -1
        assert!((f64::from(c[0]) - 3.0).abs() < 1e-30);
        assert!((f64::from(c[1]) + 1.0).abs() < 1e-30);
    }

    #[test]
    fn polish_reaches_extended_accuracy() {
        let m = XMat::from_f64(&Mat::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 1.0]));
        let lambda = polish_eigenvalue(&m, 2.6);
        // (3 + sqrt(5)) / 2 in double-double
        let target = (TwoFloat::from(3.0) + TwoFloat::from(5.0).sqrt()) / TwoFloat::from(2.0);
        let err: f64 = ((lambda - target) / target).abs().into();
        assert!(err < 1e-29, "relative error {err:.3e}");
    }

    #[test]
    fn matrix_product_matches_f64() {
        let a = Mat::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let b = Mat::from_row_slice(2, 2, &[0.5, -1.0, 2.0, 0.25]);
        let xa = XMat::from_f64(&a);
        let xb = XMat::from_f64(&b);
        let prod = xa.mul(&xb).to_f64();
        assert!(crate::numlin::rel_frob(&prod, &(&a * &b)) < 1e-15);
    }
}
