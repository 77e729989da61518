//! Cyclic Jacobi eigensolver for small Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot element with a diagonal
//! unitary, then annihilates it with a real Givens rotation. Both are folded
//! into a single 2×2 unitary acting on rows/columns `p` and `q`.

use super::matrix::{ComplexMatrix, C64, ZERO};
use super::QmathError;

/// Off-diagonal Frobenius norm at which the sweep loop stops.
pub const JACOBI_TOLERANCE: f64 = 1e-12;
pub const MAX_SWEEPS: usize = 100;

/// Inputs whose asymmetry exceeds this are rejected.
pub const HERMITIAN_INPUT_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct Eigen {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: ComplexMatrix,
}

impl Eigen {
    /// V · diag(f(λ)) · V†
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &l) in self.values.iter().enumerate() {
            let w = f(l);
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = self.vectors[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += vik * self.vectors[(j, k)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_spectrum(|l| l)
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

pub fn hermitian_eig(m: &ComplexMatrix) -> Result<Eigen, QmathError> {
    if !m.is_square() {
        return Err(QmathError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let asym = m.hermitian_asymmetry();
    if asym > HERMITIAN_INPUT_TOLERANCE {
        return Err(QmathError::NotHermitian { max_asymmetry: asym });
    }

    let n = m.rows();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm().max(1.0);

    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) < JACOBI_TOLERANCE * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) >= JACOBI_TOLERANCE * scale {
        return Err(QmathError::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (k, &src) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, k)] = v[(i, src)];
        }
    }
    Ok(Eigen { values, vectors })
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let b = a[(p, q)];
    let mag = b.norm();
    if mag < 1e-300 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = 0.5 * (2.0 * mag).atan2(app - aqq);
    let (s, c) = theta.sin_cos();
    // b = |b| e^{iφ}; D = diag(1, e^{-iφ}) makes the pivot real, R is the
    // real rotation. G = D·R.
    let phase = b / mag;
    let e = phase.conj();
    let g_pp = C64::new(c, 0.0);
    let g_pq = C64::new(-s, 0.0);
    let g_qp = e * s;
    let g_qq = e * c;

    let n = a.rows();
    // A ← A·G (columns p, q)
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    // A ← G†·A (rows p, q)
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}

#[cfg(test)]
mod tests {
    use super::super::matrix::pauli;
    use super::*;

    #[test]
    fn identity_spectrum() {
        let e = hermitian_eig(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0]);
    }

    #[test]
    fn pauli_x_spectrum() {
        let e = hermitian_eig(&pauli::x()).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14);
        assert!((e.values[1] + 1.0).abs() < 1e-14);
        assert!(e.reconstruct().approx_eq(&pauli::x(), 1e-12));
    }

    #[test]
    fn pauli_y_spectrum_and_vectors_unitary() {
        let e = hermitian_eig(&pauli::y()).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14);
        assert!(e.vectors.is_unitary(1e-12));
        assert!(e.reconstruct().approx_eq(&pauli::y(), 1e-12));
    }

    #[test]
    fn rejects_non_hermitian_with_asymmetry() {
        let m = ComplexMatrix::from_real(2, 2, &[1.0, 0.5, 0.0, 1.0]);
        match hermitian_eig(&m) {
            Err(QmathError::NotHermitian { max_asymmetry }) => {
                assert!((max_asymmetry - 0.5).abs() < 1e-15)
            }
            other => panic!("unexpected {other:?}"),
        }
        let msg = hermitian_eig(&m).unwrap_err().to_string();
        assert!(msg.contains("0.5"), "{msg}");
    }

    #[test]
    fn degenerate_and_diagonal() {
        let m = ComplexMatrix::diagonal(&[C64::new(0.2, 0.0), C64::new(0.7, 0.0), C64::new(0.1, 0.0)]);
        let e = hermitian_eig(&m).unwrap();
        assert_eq!(e.values, vec![0.7, 0.2, 0.1]);
    }
}
