use super::matrix::{ComplexMatrix, ZERO};
use super::state::{DensityMatrix, EIGENVALUE_FLOOR};
use super::{hermitian_eig, Eigen, QmathError};

/// Principal square root of a PSD matrix. Eigenvalues in [-1e-9, 0) are
/// clamped to zero; anything more negative is rejected.
pub fn sqrt_psd(m: &ComplexMatrix) -> Result<ComplexMatrix, QmathError> {
    let eig = hermitian_eig(m)?;
    if let Some(&min) = eig.values.last() {
        if min < EIGENVALUE_FLOOR {
            return Err(QmathError::NegativeEigenvalue { value: min });
        }
    }
    Ok(eig.map_spectrum(|l| l.max(0.0).sqrt()))
}

/// ½ Σ|λᵢ(a − b)| for Hermitian `a`, `b`. Unlike [`trace_distance`] this
/// accepts non-PSD inputs such as raw tomography reconstructions.
pub fn trace_norm_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64, QmathError> {
    if (a.rows(), a.cols()) != (b.rows(), b.cols()) {
        return Err(QmathError::DimensionMismatch {
            left: a.rows(),
            right: b.rows(),
        });
    }
    let eig = hermitian_eig(&(a - b))?;
    Ok(0.5 * eig.values.iter().map(|l| l.abs()).sum::<f64>())
}

pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64, QmathError> {
    let d = trace_norm_distance(a.matrix(), b.matrix())?;
    Ok(d.clamp(0.0, 1.0))
}

/// Eigenvalues at or below this are treated as outside a state's support
/// when computing fidelity.
pub const SUPPORT_CUTOFF: f64 = 1e-13;

/// Uhlmann fidelity tr√(√a · b · √a), not squared.
///
/// Evaluated on the support of whichever argument has the smaller rank, so a
/// pure argument reduces to √⟨ψ|σ|ψ⟩ without square-rooting roundoff.
pub fn fidelity(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64, QmathError> {
    if a.dim() != b.dim() {
        return Err(QmathError::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let ea = checked_eig(a.matrix())?;
    let eb = checked_eig(b.matrix())?;
    let rank = |e: &Eigen| e.values.iter().filter(|&&l| l > SUPPORT_CUTOFF).count();
    let (support, other) = if rank(&ea) <= rank(&eb) { (&ea, b) } else { (&eb, a) };

    let k = rank(support);
    let n = a.dim();
    // Columns of V_s scaled by √λ: W = V_s · diag(√λ_s).
    let mut w = ComplexMatrix::zeros(n, k);
    for c in 0..k {
        let s = support.values[c].sqrt();
        for r in 0..n {
            w[(r, c)] = support.vectors[(r, c)] * s;
        }
    }
    let inner = w.adjoint().matmul(other.matrix()).matmul(&w).hermitian_part();
    let f: f64 = if k == 1 {
        inner[(0, 0)].re.max(0.0).sqrt()
    } else {
        hermitian_eig(&inner)?.values.iter().map(|l| l.max(0.0).sqrt()).sum()
    };
    Ok(f.clamp(0.0, 1.0))
}

fn checked_eig(m: &ComplexMatrix) -> Result<Eigen, QmathError> {
    let e = hermitian_eig(m)?;
    if let Some(&min) = e.values.last() {
        if min < EIGENVALUE_FLOOR {
            return Err(QmathError::NegativeEigenvalue { value: min });
        }
    }
    Ok(e)
}

/// Reduced state on `keep`, in the given order (first entry becomes qubit 0).
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix, QmathError> {
    let n = rho.num_qubits();
    let mut seen = vec![false; n];
    for &q in keep {
        if q >= n {
            return Err(QmathError::QubitOutOfRange { qubit: q, num_qubits: n });
        }
        if seen[q] {
            return Err(QmathError::DuplicateQubit { qubit: q });
        }
        seen[q] = true;
    }
    let traced: Vec<usize> = (0..n).filter(|q| !seen[*q]).collect();
    let k = keep.len();
    let out_dim = 1usize << k;
    let m = rho.matrix();

    // Full index for (kept bits, traced bits); qubit q sits at bit n-1-q.
    let full_index = |kept: usize, rest: usize| -> usize {
        let mut idx = 0usize;
        for (pos, &q) in keep.iter().enumerate() {
            if (kept >> (k - 1 - pos)) & 1 == 1 {
                idx |= 1 << (n - 1 - q);
            }
        }
        for (pos, &q) in traced.iter().enumerate() {
            if (rest >> (traced.len() - 1 - pos)) & 1 == 1 {
                idx |= 1 << (n - 1 - q);
            }
        }
        idx
    };

    let mut out = ComplexMatrix::zeros(out_dim, out_dim);
    for i in 0..out_dim {
        for j in 0..out_dim {
            let mut acc = ZERO;
            for t in 0..(1usize << traced.len()) {
                acc += m[(full_index(i, t), full_index(j, t))];
            }
            out[(i, j)] = acc;
        }
    }
    Ok(DensityMatrix::from_matrix_unchecked(out))
}
