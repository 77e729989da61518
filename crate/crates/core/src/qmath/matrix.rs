use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::QmathError;

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self, QmathError> {
        if entries.len() != rows * cols {
            return Err(QmathError::EntryCount {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(Self { rows, cols, entries })
    }

    /// Builds a matrix from nested rows. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            entries.extend_from_slice(row);
        }
        Self { rows: r, cols: c, entries }
    }

    /// Real-valued convenience constructor.
    pub fn from_real(rows: usize, cols: usize, values: &[f64]) -> Self {
        assert_eq!(values.len(), rows * cols);
        Self {
            rows,
            cols,
            entries: values.iter().map(|&v| C64::new(v, 0.0)).collect(),
        }
    }

    pub fn diagonal(values: &[C64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    /// Outer product |a⟩⟨b|.
    pub fn outer(a: &[C64], b: &[C64]) -> Self {
        let mut m = Self::zeros(a.len(), b.len());
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                m[(i, j)] = x * y.conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| x * s).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.max_abs_diff(other) <= tol
    }

    /// Largest |m[i,j] - conj(m[j,i])|; infinite for non-square input.
    pub fn hermitian_asymmetry(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_asymmetry() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.is_square() && self.adjoint().matmul(self).approx_eq(&Self::identity(self.rows), tol)
    }

    /// Hermitian with every eigenvalue ≥ -tol.
    pub fn is_psd(&self, tol: f64) -> bool {
        if !self.is_hermitian(tol.max(1e-12)) {
            return false;
        }
        match super::hermitian_eig(self) {
            Ok(eig) => eig.values.iter().all(|&l| l >= -tol),
            Err(_) => false,
        }
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matmul dimension mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let rrow = rhs.row(k);
                let orow = &mut out.entries[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, b) in orow.iter_mut().zip(rrow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// A · self · A†
    pub fn conjugate_by(&self, a: &Self) -> Self {
        a.matmul(self).matmul(&a.adjoint())
    }

    /// Hermitian part (M + M†)/2.
    pub fn hermitian_part(&self) -> Self {
        let adj = self.adjoint();
        let mut m = self.clone();
        for (x, y) in m.entries.iter_mut().zip(&adj.entries) {
            *x = (*x + y) * 0.5;
        }
        m
    }
}

/// Kronecker product; qubits of `a` become the more significant index bits.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut out = ComplexMatrix::zeros(rows, cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let x = a[(i, j)];
            if x == ZERO {
                continue;
            }
            for k in 0..b.rows {
                for l in 0..b.cols {
                    out[(i * b.rows + k, j * b.cols + l)] = x * b[(k, l)];
                }
            }
        }
    }
    out
}

pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a ComplexMatrix>) -> ComplexMatrix {
    factors
        .into_iter()
        .fold(ComplexMatrix::identity(1), |acc, f| kron(&acc, f))
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.entries[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for x in self.row(i) {
                write!(f, "{:>9.5}{:+.5}i ", x.re, x.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Single-qubit constants.
pub mod pauli {
    use super::{ComplexMatrix, C64};

    pub fn identity() -> ComplexMatrix {
        ComplexMatrix::identity(2)
    }

    pub fn x() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0])
    }

    pub fn y() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[
            vec![C64::new(0.0, 0.0), C64::new(0.0, -1.0)],
            vec![C64::new(0.0, 1.0), C64::new(0.0, 0.0)],
        ])
    }

    pub fn z() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0])
    }

    /// Pauli matrix for one of 'I', 'X', 'Y', 'Z'.
    pub fn by_label(c: char) -> Option<ComplexMatrix> {
        match c {
            'I' => Some(identity()),
            'X' => Some(x()),
            'Y' => Some(y()),
            'Z' => Some(z()),
            _ => None,
        }
    }

    /// Tensor product of the Paulis named by `label`, first character on qubit 0.
    pub fn string(label: &str) -> Option<ComplexMatrix> {
        let mut acc = ComplexMatrix::identity(1);
        for c in label.chars() {
            acc = super::kron(&acc, &by_label(c)?);
        }
        Some(acc)
    }
}
