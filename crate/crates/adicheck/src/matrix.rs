//! Dense complex Hermitian matrices, state vectors, and eigenframes.
//!
//! Everything downstream (model evaluation, spectral tracking, propagation)
//! runs on the three types defined here:
//!
//! * [`ComplexMatrix`] — a small dense square matrix over `Complex64`,
//!   row-major, dimension capped at [`MAX_DIM`].
//! * [`StateVector`] — a complex column vector with the usual 2-norm.
//! * [`EigenFrame`] — one diagonalization result: ascending eigenvalues,
//!   orthonormal eigenvectors, the sample time they belong to, and a
//!   degeneracy flag.
//!
//! The eigensolver is a cyclic Jacobi iteration generalized to complex
//! Hermitian input: each rotation annihilates one off-diagonal entry with a
//! phased Givens rotation, and the off-diagonal Frobenius norm decreases
//! monotonically until it hits rounding level. For the dimensions this crate
//! targets (two to a few tens of levels) Jacobi is simple, accurate to
//! machine precision, and has no convergence pathologies worth trading
//! simplicity away for.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Shorthand for the complex scalar used throughout the crate.
pub type C64 = Complex64;

/// Largest supported matrix dimension.
pub const MAX_DIM: usize = 32;

/// Relative tolerance for the Hermiticity admission check.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Fraction of the spectral range below which an adjacent eigenvalue gap is
/// considered degenerate.
pub const GAP_TOL_FACTOR: f64 = 1e-8;

/// Maximum number of Jacobi sweeps before giving up.
const MAX_SWEEPS: usize = 50;

// ---------------------------------------------------------------------------
// ComplexMatrix
// ---------------------------------------------------------------------------

/// Dense square complex matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    /// Zero matrix of the given dimension.
    pub fn zeros(dim: usize) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::DimensionTooLarge { dim, max: MAX_DIM });
        }
        Ok(ComplexMatrix {
            dim,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        })
    }

    /// Identity matrix.
    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        Ok(m)
    }

    /// Build from a rectangular slice of rows. All rows must share the outer
    /// length.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let dim = rows.len();
        let mut m = Self::zeros(dim)?;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: row.len(),
                    context: "matrix row length",
                });
            }
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    /// Build from separate real and imaginary parts. `im` may be omitted for
    /// a purely real matrix.
    pub fn from_re_im(re: &[Vec<f64>], im: Option<&[Vec<f64>]>) -> Result<Self> {
        let dim = re.len();
        let mut m = Self::zeros(dim)?;
        for (i, row) in re.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: row.len(),
                    context: "matrix row length",
                });
            }
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, C64::new(v, 0.0));
            }
        }
        if let Some(im) = im {
            if im.len() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: im.len(),
                    context: "imaginary part rows",
                });
            }
            for (i, row) in im.iter().enumerate() {
                if row.len() != dim {
                    return Err(Error::DimensionMismatch {
                        left: dim,
                        right: row.len(),
                        context: "imaginary part row length",
                    });
                }
                for (j, &v) in row.iter().enumerate() {
                    let cur = m.get(i, j);
                    m.set(i, j, C64::new(cur.re, v));
                }
            }
        }
        Ok(m)
    }

    /// Matrix dimension (the matrix is square).
    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry accessor.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.dim + j]
    }

    /// Entry mutator.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.dim + j] = v;
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest deviation from Hermitian symmetry, `max |a_ij - conj(a_ji)|`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Hermiticity test at the admission tolerance
    /// `HERMITICITY_TOL * (1 + max_abs)`.
    pub fn is_hermitian(&self) -> bool {
        self.hermitian_defect() <= HERMITICITY_TOL * (1.0 + self.max_abs())
    }

    /// `self + other`.
    pub fn add(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.zip_with(other, |a, b| a + b)
    }

    /// `self - other`.
    pub fn sub(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.zip_with(other, |a, b| a - b)
    }

    /// `factor * self` with a real factor.
    pub fn scale(&self, factor: f64) -> ComplexMatrix {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    /// Linear combination `a*self + b*other`, the workhorse of interpolated
    /// Hamiltonians.
    pub fn lin_comb(&self, a: f64, other: &ComplexMatrix, b: f64) -> Result<ComplexMatrix> {
        self.zip_with(other, |x, y| x * a + y * b)
    }

    fn zip_with(
        &self,
        other: &ComplexMatrix,
        f: impl Fn(C64, C64) -> C64,
    ) -> Result<ComplexMatrix> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
                context: "matrix combination",
            });
        }
        Ok(ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }
}

// ---------------------------------------------------------------------------
// StateVector
// ---------------------------------------------------------------------------

/// Complex column vector.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    data: Vec<C64>,
}

impl StateVector {
    /// Build from amplitudes.
    pub fn new(data: Vec<C64>) -> Self {
        StateVector { data }
    }

    /// Standard basis vector `e_level`.
    pub fn basis(dim: usize, level: usize) -> Result<Self> {
        if level >= dim {
            return Err(Error::LevelOutOfRange { level, dim });
        }
        let mut data = vec![C64::new(0.0, 0.0); dim];
        data[level] = C64::new(1.0, 0.0);
        Ok(StateVector { data })
    }

    /// Dimension.
    #[inline]
    pub fn dim(&self) -> usize {
        self.data.len()
    }

    /// Amplitude accessor.
    #[inline]
    pub fn get(&self, i: usize) -> C64 {
        self.data[i]
    }

    /// Amplitude mutator.
    #[inline]
    pub fn set(&mut self, i: usize, v: C64) {
        self.data[i] = v;
    }

    /// Raw amplitude slice.
    pub fn amplitudes(&self) -> &[C64] {
        &self.data
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Whether the norm sits within `tol` of one.
    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    /// Multiply every amplitude by a complex phase/scalar.
    pub fn scaled(&self, factor: C64) -> StateVector {
        StateVector {
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    /// Return a unit-norm copy.
    pub fn normalized(&self) -> StateVector {
        let n = self.norm();
        self.scaled(C64::new(1.0 / n, 0.0))
    }
}

/// Matrix-vector product `h * v`.
pub fn apply(h: &ComplexMatrix, v: &StateVector) -> Result<StateVector> {
    if h.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            left: h.dim(),
            right: v.dim(),
            context: "matrix-vector product",
        });
    }
    let d = h.dim();
    let mut out = vec![C64::new(0.0, 0.0); d];
    for i in 0..d {
        let mut acc = C64::new(0.0, 0.0);
        for j in 0..d {
            acc += h.get(i, j) * v.get(j);
        }
        out[i] = acc;
    }
    Ok(StateVector::new(out))
}

/// Inner product `<u|v>`, conjugate-linear in the FIRST slot:
/// `inner(u, v) = sum_i conj(u_i) * v_i`.
pub fn inner(u: &StateVector, v: &StateVector) -> Result<C64> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            left: u.dim(),
            right: v.dim(),
            context: "inner product",
        });
    }
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..u.dim() {
        acc += u.get(i).conj() * v.get(i);
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// EigenFrame
// ---------------------------------------------------------------------------

/// One diagonalization: ascending eigenvalues with matching orthonormal
/// eigenvectors, tagged with the sample time it belongs to.
#[derive(Debug, Clone)]
pub struct EigenFrame {
    /// Sample time this frame was computed at.
    pub t: f64,
    /// Eigenvalues in ascending order.
    pub eigenvalues: Vec<f64>,
    /// Unit-norm eigenvectors, `eigenvectors[n]` paired with
    /// `eigenvalues[n]`.
    pub eigenvectors: Vec<StateVector>,
    /// Raised when any adjacent gap falls below
    /// `GAP_TOL_FACTOR * spectral range`.
    pub degenerate: bool,
}

impl EigenFrame {
    /// Number of levels.
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Spread between the extreme eigenvalues.
    pub fn spectral_range(&self) -> f64 {
        match (self.eigenvalues.first(), self.eigenvalues.last()) {
            (Some(lo), Some(hi)) => hi - lo,
            _ => 0.0,
        }
    }

    /// Smallest adjacent eigenvalue gap; infinite for a single level.
    pub fn min_gap(&self) -> f64 {
        self.eigenvalues
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }
}

/// Diagonalize a Hermitian matrix with cyclic Jacobi rotations.
///
/// Returns the [`EigenFrame`] tagged with time `t`. Eigenvalues come out
/// ascending; exact ties are ordered by lexicographic comparison of the
/// eigenvector amplitude magnitudes so repeated runs agree bit for bit.
///
/// Errors with [`Error::NotHermitian`] if the defect exceeds the admission
/// tolerance and [`Error::ConvergenceFailure`] if the off-diagonal norm
/// refuses to fall below threshold within the sweep budget.
pub fn hermitian_eig(h: &ComplexMatrix, t: f64) -> Result<EigenFrame> {
    let dim = h.dim();
    if dim > MAX_DIM {
        return Err(Error::DimensionTooLarge { dim, max: MAX_DIM });
    }
    let scale = 1.0 + h.max_abs();
    let defect = h.hermitian_defect();
    if defect > HERMITICITY_TOL * scale {
        return Err(Error::NotHermitian {
            defect,
            tol: HERMITICITY_TOL * scale,
        });
    }

    // Working copy; the iteration drives its off-diagonal part to zero.
    let mut a = h.clone();
    // Symmetrize exactly so rounding asymmetry cannot accumulate.
    for i in 0..dim {
        let d = a.get(i, i);
        a.set(i, i, C64::new(d.re, 0.0));
        for j in (i + 1)..dim {
            let avg = (a.get(i, j) + a.get(j, i).conj()) * 0.5;
            a.set(i, j, avg);
            a.set(j, i, avg.conj());
        }
    }
    let mut v = ComplexMatrix::identity(dim)?;

    let off_target = 1e-14 * scale * dim as f64;
    // Rotations below this threshold cannot move the off-norm meaningfully.
    let skip = off_target / ((dim * dim) as f64 + 1.0);

    let mut off = off_norm(&a);
    let mut sweeps = 0;
    while off > off_target {
        sweeps += 1;
        if sweeps > MAX_SWEEPS {
            return Err(Error::ConvergenceFailure {
                sweeps: MAX_SWEEPS,
                off,
            });
        }
        for p in 0..dim {
            for q in (p + 1)..dim {
                let apq = a.get(p, q);
                let r = apq.norm();
                if r <= skip {
                    continue;
                }
                // Phased Givens rotation annihilating (p, q).
                let phase = apq / r; // e^{i arg(a_pq)}
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let tau = (aqq - app) / (2.0 * r);
                let tt = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + tt * tt).sqrt();
                let s = tt * c;

                // Column update B = A * U, exploiting Hermitian symmetry for
                // the row side afterwards.
                for j in 0..dim {
                    let ajp = a.get(j, p);
                    let ajq = a.get(j, q);
                    a.set(j, p, ajp * c - ajq * phase.conj() * s);
                    a.set(j, q, ajp * phase * s + ajq * c);
                }
                // Row update A' = U^dagger * B via conjugate symmetry.
                for j in 0..dim {
                    let apj = a.get(p, j);
                    let aqj = a.get(q, j);
                    a.set(p, j, apj * c - aqj * phase * s);
                    a.set(q, j, apj * phase.conj() * s + aqj * c);
                }
                // Pin the analytically known entries against rounding drift.
                a.set(p, p, C64::new(app - tt * r, 0.0));
                a.set(q, q, C64::new(aqq + tt * r, 0.0));
                a.set(p, q, C64::new(0.0, 0.0));
                a.set(q, p, C64::new(0.0, 0.0));

                // Accumulate the eigenvector basis V <- V * U.
                for j in 0..dim {
                    let vjp = v.get(j, p);
                    let vjq = v.get(j, q);
                    v.set(j, p, vjp * c - vjq * phase.conj() * s);
                    v.set(j, q, vjp * phase * s + vjq * c);
                }
            }
        }
        off = off_norm(&a);
    }

    // Extract, sort ascending, tie-break on |v| lexicographically.
    let mut order: Vec<usize> = (0..dim).collect();
    let eigvals: Vec<f64> = (0..dim).map(|i| a.get(i, i).re).collect();
    let col_abs = |k: usize| -> Vec<f64> { (0..dim).map(|i| v.get(i, k).norm()).collect() };
    order.sort_by(|&x, &y| {
        eigvals[x]
            .total_cmp(&eigvals[y])
            .then_with(|| lex_cmp(&col_abs(x), &col_abs(y)))
    });

    let eigenvalues: Vec<f64> = order.iter().map(|&k| eigvals[k]).collect();
    let eigenvectors: Vec<StateVector> = order
        .iter()
        .map(|&k| StateVector::new((0..dim).map(|i| v.get(i, k)).collect()))
        .collect();

    let range = eigenvalues[dim - 1] - eigenvalues[0];
    let gap_tol = GAP_TOL_FACTOR * range;
    let degenerate = dim > 1
        && eigenvalues
            .windows(2)
            .any(|w| (w[1] - w[0]) < gap_tol || w[1] == w[0]);

    Ok(EigenFrame {
        t,
        eigenvalues,
        eigenvectors,
        degenerate,
    })
}

/// Frobenius norm of the strict off-diagonal part.
fn off_norm(a: &ComplexMatrix) -> f64 {
    let mut acc = 0.0;
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            if i != j {
                acc += a.get(i, j).norm_sqr();
            }
        }
    }
    acc.sqrt()
}

fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        let c = x.total_cmp(y);
        if c != std::cmp::Ordering::Equal {
            return c;
        }
    }
    std::cmp::Ordering::Equal
}

// ---------------------------------------------------------------------------
// Seeded random test matrices
// ---------------------------------------------------------------------------

/// Seeded random Hermitian matrix with entries of order one.
pub fn random_hermitian(dim: usize, seed: u64) -> Result<ComplexMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = ComplexMatrix::zeros(dim)?;
    for i in 0..dim {
        m.set(i, i, C64::new(rng.gen_range(-1.0..1.0), 0.0));
        for j in (i + 1)..dim {
            let z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * 0.5;
            m.set(i, j, z);
            m.set(j, i, z.conj());
        }
    }
    Ok(m)
}

/// Seeded random real symmetric matrix (imaginary parts exactly zero).
pub fn random_real_symmetric(dim: usize, seed: u64) -> Result<ComplexMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = ComplexMatrix::zeros(dim)?;
    for i in 0..dim {
        m.set(i, i, C64::new(rng.gen_range(-1.0..1.0), 0.0));
        for j in (i + 1)..dim {
            let x = rng.gen_range(-1.0..1.0) * 0.5;
            m.set(i, j, C64::new(x, 0.0));
            m.set(j, i, C64::new(x, 0.0));
        }
    }
    Ok(m)
}

/// Seeded random unitary matrix, built by orthonormalizing a random complex
/// matrix with (twice-applied) modified Gram-Schmidt.
pub fn random_unitary(dim: usize, seed: u64) -> Result<ComplexMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cols: Vec<Vec<C64>> = (0..dim)
        .map(|_| {
            (0..dim)
                .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect()
        })
        .collect();
    for _pass in 0..2 {
        for k in 0..dim {
            for j in 0..k {
                let proj: C64 = (0..dim).map(|i| cols[j][i].conj() * cols[k][i]).sum();
                for i in 0..dim {
                    let cji = cols[j][i];
                    cols[k][i] -= proj * cji;
                }
            }
            let norm: f64 = cols[k]
                .iter()
                .map(|z| z.norm_sqr())
                .sum::<f64>()
                .sqrt();
            for i in 0..dim {
                cols[k][i] /= norm;
            }
        }
    }
    let mut u = ComplexMatrix::zeros(dim)?;
    for (k, col) in cols.iter().enumerate() {
        for i in 0..dim {
            u.set(i, k, col[i]);
        }
    }
    Ok(u)
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
