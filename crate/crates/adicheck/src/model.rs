//! Time-dependent Hamiltonian families.
//!
//! [`HamiltonianModel`] is the single entry point the rest of the crate
//! evaluates: `eval_h(t)` for the Hamiltonian and `eval_dh(t)` for its time
//! derivative. Five families are built in:
//!
//! * `Constant` — a frozen Hermitian matrix, the do-nothing baseline.
//! * `RotatingSpin` — a spin-half magnetic moment in a field of constant
//!   magnitude `omega0` tipped at polar angle `theta` and precessing about
//!   the z-axis at angular rate `omega`. The spectrum is rigid (gap
//!   `omega0` for all time) while the eigenvectors corotate, which makes it
//!   the canonical stress test for gap-only validity folklore.
//! * `LandauZener` — linear diabatic sweep through an avoided crossing of
//!   half-splitting `delta/2` at time `t0`.
//! * `LinearInterpolation` — straight-line ramp between two endpoint
//!   Hamiltonians over a fixed horizon, the annealing workhorse.
//! * `Tabulated` — arbitrary sampled Hamiltonians interpolated with natural
//!   cubic splines per matrix entry (Hermiticity preserved exactly by
//!   interpolating the upper triangle and mirroring).

use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64, HERMITICITY_TOL, MAX_DIM};
use crate::spline::ComplexSpline;

/// Pauli matrices assembled on demand.
fn pauli(axis: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2).unwrap();
    match axis {
        0 => {
            m.set(0, 1, C64::new(1.0, 0.0));
            m.set(1, 0, C64::new(1.0, 0.0));
        }
        1 => {
            m.set(0, 1, C64::new(0.0, -1.0));
            m.set(1, 0, C64::new(0.0, 1.0));
        }
        _ => {
            m.set(0, 0, C64::new(1.0, 0.0));
            m.set(1, 1, C64::new(-1.0, 0.0));
        }
    }
    m
}

/// A time-dependent Hermitian Hamiltonian on `[0, T]` (tabulated families
/// carry their own domain).
#[derive(Debug, Clone)]
pub enum HamiltonianModel {
    /// Time-independent Hamiltonian.
    Constant {
        /// The frozen matrix.
        h: ComplexMatrix,
    },
    /// Spin-half in a precessing field:
    /// `H(t) = -(omega0/2) [cos(theta) sz
    ///          + sin(theta) cos(omega t) sx
    ///          - sin(theta) sin(omega t) sy]`.
    ///
    /// Eigenvalues are `-omega0/2` and `+omega0/2` for all time; the
    /// off-diagonal entry is `H01(t) = -(omega0/2) sin(theta) e^{+i omega t}`.
    RotatingSpin {
        /// Field magnitude (level splitting).
        omega0: f64,
        /// Polar tip angle of the field axis.
        theta: f64,
        /// Precession angular rate about z.
        omega: f64,
    },
    /// Linear sweep through an avoided crossing:
    /// `H(t) = (v (t - t0) / 2) sz + (delta / 2) sx`.
    LandauZener {
        /// Sweep velocity of the diabatic splitting.
        v: f64,
        /// Minimum gap at the crossing.
        delta: f64,
        /// Crossing time.
        t0: f64,
    },
    /// Straight-line ramp `H(t) = (1 - t/t_total) h0 + (t/t_total) h1`.
    LinearInterpolation {
        /// Hamiltonian at `t = 0`.
        h0: ComplexMatrix,
        /// Hamiltonian at `t = t_total`.
        h1: ComplexMatrix,
        /// Ramp duration.
        t_total: f64,
    },
    /// Sampled Hamiltonian with spline interpolation.
    Tabulated(TabulatedModel),
}

impl HamiltonianModel {
    /// Validated constructor for [`HamiltonianModel::Constant`].
    pub fn constant(h: ComplexMatrix) -> Result<Self> {
        let defect = h.hermitian_defect();
        let tol = HERMITICITY_TOL * (1.0 + h.max_abs());
        if defect > tol {
            return Err(Error::NotHermitian { defect, tol });
        }
        Ok(HamiltonianModel::Constant { h })
    }

    /// Validated constructor for [`HamiltonianModel::RotatingSpin`].
    pub fn rotating_spin(omega0: f64, theta: f64, omega: f64) -> Result<Self> {
        for (name, x) in [("omega0", omega0), ("theta", theta), ("omega", omega)] {
            if !x.is_finite() {
                return Err(Error::invalid(name, "must be finite"));
            }
        }
        if omega0 <= 0.0 {
            return Err(Error::invalid("omega0", "must be positive"));
        }
        Ok(HamiltonianModel::RotatingSpin {
            omega0,
            theta,
            omega,
        })
    }

    /// Validated constructor for [`HamiltonianModel::LandauZener`].
    pub fn landau_zener(v: f64, delta: f64, t0: f64) -> Result<Self> {
        for (name, x) in [("v", v), ("delta", delta), ("t0", t0)] {
            if !x.is_finite() {
                return Err(Error::invalid(name, "must be finite"));
            }
        }
        if v <= 0.0 {
            return Err(Error::invalid("v", "must be positive"));
        }
        if delta <= 0.0 {
            return Err(Error::invalid("delta", "must be positive"));
        }
        Ok(HamiltonianModel::LandauZener { v, delta, t0 })
    }

    /// Validated constructor for [`HamiltonianModel::LinearInterpolation`].
    pub fn linear_interpolation(
        h0: ComplexMatrix,
        h1: ComplexMatrix,
        t_total: f64,
    ) -> Result<Self> {
        if h0.dim() != h1.dim() {
            return Err(Error::DimensionMismatch {
                left: h0.dim(),
                right: h1.dim(),
                context: "interpolation endpoints",
            });
        }
        if !(t_total.is_finite() && t_total > 0.0) {
            return Err(Error::invalid("t_total", "must be finite and positive"));
        }
        for m in [&h0, &h1] {
            let defect = m.hermitian_defect();
            let tol = HERMITICITY_TOL * (1.0 + m.max_abs());
            if defect > tol {
                return Err(Error::NotHermitian { defect, tol });
            }
        }
        Ok(HamiltonianModel::LinearInterpolation { h0, h1, t_total })
    }

    /// Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        match self {
            HamiltonianModel::Constant { h } => h.dim(),
            HamiltonianModel::RotatingSpin { .. } | HamiltonianModel::LandauZener { .. } => 2,
            HamiltonianModel::LinearInterpolation { h0, .. } => h0.dim(),
            HamiltonianModel::Tabulated(m) => m.dim,
        }
    }

    /// Hamiltonian matrix at time `t`.
    pub fn eval_h(&self, t: f64) -> Result<ComplexMatrix> {
        match self {
            HamiltonianModel::Constant { h } => Ok(h.clone()),
            HamiltonianModel::RotatingSpin {
                omega0,
                theta,
                omega,
            } => {
                let mut m = ComplexMatrix::zeros(2)?;
                let half = 0.5 * omega0;
                let off = -half * theta.sin() * C64::new(0.0, omega * t).exp();
                m.set(0, 0, C64::new(-half * theta.cos(), 0.0));
                m.set(1, 1, C64::new(half * theta.cos(), 0.0));
                m.set(0, 1, off);
                m.set(1, 0, off.conj());
                Ok(m)
            }
            HamiltonianModel::LandauZener { v, delta, t0 } => {
                let z = pauli(2).scale(0.5 * v * (t - t0));
                let x = pauli(0).scale(0.5 * delta);
                z.add(&x)
            }
            HamiltonianModel::LinearInterpolation { h0, h1, t_total } => {
                let s = t / t_total;
                h0.lin_comb(1.0 - s, h1, s)
            }
            HamiltonianModel::Tabulated(m) => m.eval_h(t),
        }
    }

    /// Time derivative `dH/dt` at time `t`. Analytic for the closed-form
    /// families; a short centered difference of the interpolant for
    /// tabulated data.
    pub fn eval_dh(&self, t: f64) -> Result<ComplexMatrix> {
        match self {
            HamiltonianModel::Constant { h } => ComplexMatrix::zeros(h.dim()),
            HamiltonianModel::RotatingSpin {
                omega0,
                theta,
                omega,
            } => {
                let mut m = ComplexMatrix::zeros(2)?;
                // d/dt of -(omega0/2) sin(theta) e^{i omega t}.
                let off = -0.5 * omega0
                    * theta.sin()
                    * C64::new(0.0, *omega)
                    * C64::new(0.0, omega * t).exp();
                m.set(0, 1, off);
                m.set(1, 0, off.conj());
                Ok(m)
            }
            HamiltonianModel::LandauZener { v, .. } => Ok(pauli(2).scale(0.5 * v)),
            HamiltonianModel::LinearInterpolation { h0, h1, t_total } => {
                h1.lin_comb(1.0 / t_total, h0, -1.0 / t_total)
            }
            HamiltonianModel::Tabulated(m) => m.eval_dh(t),
        }
    }
}

// ---------------------------------------------------------------------------
// Tabulated model
// ---------------------------------------------------------------------------

/// Sampled Hamiltonian track with per-entry natural cubic splines.
#[derive(Debug, Clone)]
pub struct TabulatedModel {
    dim: usize,
    t_min: f64,
    t_max: f64,
    /// Spline per upper-triangle entry, indexed `i * dim + j` for `i <= j`
    /// (diagonal splines have identically zero imaginary part by
    /// construction).
    splines: Vec<ComplexSpline>,
    /// Centered-difference step for `eval_dh`.
    fd_step: f64,
}

impl TabulatedModel {
    /// Build from explicit samples. Validation order: dimension bounds,
    /// sample count, monotone times, per-sample dimensions, per-sample
    /// Hermiticity, then the optional spacing cap.
    pub fn from_samples(
        ts: &[f64],
        hs: &[ComplexMatrix],
        max_sample_gap: Option<f64>,
    ) -> Result<TabulatedModel> {
        if ts.len() != hs.len() {
            return Err(Error::GridMismatch {
                left: ts.len(),
                right: hs.len(),
                context: "tabulated samples",
            });
        }
        if ts.len() < 4 {
            return Err(Error::TooFewSamples {
                got: ts.len(),
                min: 4,
            });
        }
        for (i, w) in ts.windows(2).enumerate() {
            if !(w[1] > w[0]) {
                return Err(Error::NonMonotonicTimes {
                    index: i + 1,
                    t: w[1],
                });
            }
        }
        let dim = hs[0].dim();
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::DimensionTooLarge { dim, max: MAX_DIM });
        }
        for (index, (t, h)) in ts.iter().zip(hs.iter()).enumerate() {
            if h.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: h.dim(),
                    context: "tabulated sample dimension",
                });
            }
            let defect = h.hermitian_defect();
            if defect > HERMITICITY_TOL * (1.0 + h.max_abs()) {
                return Err(Error::NonHermitianSample {
                    index,
                    t: *t,
                    defect,
                });
            }
        }
        if let Some(limit) = max_sample_gap {
            for w in ts.windows(2) {
                let gap = w[1] - w[0];
                if gap > limit {
                    return Err(Error::TabulatedGapTooLarge {
                        t: w[0],
                        gap,
                        limit,
                    });
                }
            }
        }

        let mut splines = Vec::with_capacity(dim * (dim + 1) / 2);
        for i in 0..dim {
            for j in i..dim {
                let track: Vec<Complex64> = hs
                    .iter()
                    .map(|h| {
                        let z = h.get(i, j);
                        if i == j {
                            // Pin diagonals exactly real.
                            Complex64::new(z.re, 0.0)
                        } else {
                            z
                        }
                    })
                    .collect();
                splines.push(ComplexSpline::fit(ts, &track)?);
            }
        }
        let span = ts[ts.len() - 1] - ts[0];
        Ok(TabulatedModel {
            dim,
            t_min: ts[0],
            t_max: ts[ts.len() - 1],
            splines,
            fd_step: (1e-6 * span).max(1e-9),
        })
    }

    /// Time domain covered by the samples.
    pub fn domain(&self) -> (f64, f64) {
        (self.t_min, self.t_max)
    }

    fn upper_index(&self, i: usize, j: usize) -> usize {
        // Row-major walk over the upper triangle: row i starts after
        // dim + (dim-1) + ... + (dim-i+1) entries.
        i * self.dim - i * (i + 1) / 2 + j
    }

    fn eval_h(&self, t: f64) -> Result<ComplexMatrix> {
        let mut m = ComplexMatrix::zeros(self.dim)?;
        for i in 0..self.dim {
            for j in i..self.dim {
                let z = self.splines[self.upper_index(i, j)].value(t)?;
                if i == j {
                    m.set(i, i, Complex64::new(z.re, 0.0));
                } else {
                    m.set(i, j, z);
                    m.set(j, i, z.conj());
                }
            }
        }
        Ok(m)
    }

    fn eval_dh(&self, t: f64) -> Result<ComplexMatrix> {
        // Centered difference with the window clamped into the domain (the
        // denominator is the actual window width, so edge evaluations stay
        // first-order consistent rather than reaching out of domain).
        if t < self.t_min - 1e-12 * (1.0 + self.t_max - self.t_min)
            || t > self.t_max + 1e-12 * (1.0 + self.t_max - self.t_min)
        {
            return Err(Error::OutOfDomain {
                t,
                t_min: self.t_min,
                t_max: self.t_max,
            });
        }
        let lo = (t - self.fd_step).max(self.t_min);
        let hi = (t + self.fd_step).min(self.t_max);
        let h_lo = self.eval_h(lo)?;
        let h_hi = self.eval_h(hi)?;
        h_hi.lin_comb(1.0 / (hi - lo), &h_lo, -1.0 / (hi - lo))
    }
}

// ---------------------------------------------------------------------------
// Tabulated JSON loading
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
struct TabulatedFile {
    dim: usize,
    #[serde(default)]
    max_sample_gap: Option<f64>,
    samples: Vec<TabulatedSampleJson>,
}

#[derive(Deserialize)]
struct TabulatedSampleJson {
    t: f64,
    h_re: Vec<Vec<f64>>,
    #[serde(default)]
    h_im: Option<Vec<Vec<f64>>>,
}

/// Load a tabulated Hamiltonian from its JSON file format:
///
/// ```json
/// {
///   "dim": 2,
///   "max_sample_gap": 0.5,
///   "samples": [
///     { "t": 0.0, "h_re": [[0.0, 0.3], [0.3, 1.0]], "h_im": [[0.0, 0.1], [-0.1, 0.0]] },
///     ...
///   ]
/// }
/// ```
///
/// `h_im` may be omitted per sample for real matrices; `max_sample_gap` is
/// optional and, when present, rejects sample spacings above the limit.
pub fn load_tabulated(path: &Path) -> Result<HamiltonianModel> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, &e))?;
    let parsed: TabulatedFile = serde_json::from_str(&text).map_err(|e| Error::ParseError {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut ts = Vec::with_capacity(parsed.samples.len());
    let mut hs = Vec::with_capacity(parsed.samples.len());
    for sample in &parsed.samples {
        if sample.h_re.len() != parsed.dim {
            return Err(Error::DimensionMismatch {
                left: parsed.dim,
                right: sample.h_re.len(),
                context: "tabulated h_re rows",
            });
        }
        let h = ComplexMatrix::from_re_im(&sample.h_re, sample.h_im.as_deref())?;
        ts.push(sample.t);
        hs.push(h);
    }
    Ok(HamiltonianModel::Tabulated(TabulatedModel::from_samples(
        &ts,
        &hs,
        parsed.max_sample_gap,
    )?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::hermitian_eig;
    use crate::numeric::linspace;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn rotating_spin_matrix_entries() {
        let (omega0, theta, omega) = (1.0, 0.3, 0.7);
        let m = HamiltonianModel::rotating_spin(omega0, theta, omega).unwrap();
        let h0 = m.eval_h(0.0).unwrap();
        assert_relative_eq!(h0.get(0, 0).re, -0.5 * theta.cos(), epsilon = 1e-15);
        assert_relative_eq!(h0.get(1, 1).re, 0.5 * theta.cos(), epsilon = 1e-15);
        assert_relative_eq!(h0.get(0, 1).re, -0.5 * theta.sin(), epsilon = 1e-15);
        assert_relative_eq!(h0.get(0, 1).im, 0.0, epsilon = 1e-15);

        let t = 1.37;
        let ht = m.eval_h(t).unwrap();
        assert!(ht.is_hermitian());
        // Off-diagonal phase advances as e^{+i omega t}.
        let expect = -0.5 * omega0 * theta.sin() * C64::new(0.0, omega * t).exp();
        assert!((ht.get(0, 1) - expect).norm() < 1e-15);
    }

    #[test]
    fn rotating_spin_spectrum_is_rigid() {
        let m = HamiltonianModel::rotating_spin(2.5, 1.1, 0.9).unwrap();
        for &t in &[0.0, 0.31, 2.7, 14.1] {
            let frame = hermitian_eig(&m.eval_h(t).unwrap(), t).unwrap();
            assert_relative_eq!(frame.eigenvalues[0], -1.25, epsilon = 1e-12);
            assert_relative_eq!(frame.eigenvalues[1], 1.25, epsilon = 1e-12);
        }
    }

    #[test]
    fn rotating_spin_derivative_matches_finite_difference() {
        let m = HamiltonianModel::rotating_spin(1.0, 0.4, 2.0).unwrap();
        let t = 0.83;
        let eps = 1e-6;
        let hp = m.eval_h(t + eps).unwrap();
        let hm = m.eval_h(t - eps).unwrap();
        let fd = hp.lin_comb(0.5 / eps, &hm, -0.5 / eps).unwrap();
        let dh = m.eval_dh(t).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((fd.get(i, j) - dh.get(i, j)).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn landau_zener_spectrum_and_derivative() {
        let (v, delta, t0) = (1.0, 1.0, 40.0);
        let m = HamiltonianModel::landau_zener(v, delta, t0).unwrap();
        for &t in &[0.0, 20.0, 40.0, 66.6, 80.0] {
            let frame = hermitian_eig(&m.eval_h(t).unwrap(), t).unwrap();
            let expect = 0.5 * ((v * (t - t0)).powi(2) + delta * delta).sqrt();
            assert_relative_eq!(frame.eigenvalues[1], expect, epsilon = 1e-12);
            assert_relative_eq!(frame.eigenvalues[0], -expect, epsilon = 1e-12);
        }
        let dh = m.eval_dh(13.0).unwrap();
        assert_eq!(dh.get(0, 0), c(0.5, 0.0));
        assert_eq!(dh.get(1, 1), c(-0.5, 0.0));
        assert_eq!(dh.get(0, 1), c(0.0, 0.0));
    }

    #[test]
    fn linear_interpolation_hits_endpoints() {
        let h0 = ComplexMatrix::from_re_im(&[vec![0.0, 0.4], vec![0.4, 1.0]], None).unwrap();
        let h1 = ComplexMatrix::from_re_im(&[vec![1.0, 0.2], vec![0.2, -0.5]], None).unwrap();
        let m = HamiltonianModel::linear_interpolation(h0.clone(), h1.clone(), 10.0).unwrap();
        assert_eq!(m.eval_h(0.0).unwrap(), h0);
        assert_eq!(m.eval_h(10.0).unwrap(), h1);
        let mid = m.eval_h(5.0).unwrap();
        assert_relative_eq!(mid.get(0, 0).re, 0.5, epsilon = 1e-15);
        let dh = m.eval_dh(3.3).unwrap();
        assert_relative_eq!(dh.get(0, 0).re, 0.1, epsilon = 1e-15);
        assert_relative_eq!(dh.get(1, 1).re, -0.15, epsilon = 1e-15);
    }

    #[test]
    fn constant_model_has_zero_derivative() {
        let h = ComplexMatrix::from_re_im(&[vec![1.0, 0.2], vec![0.2, -1.0]], None).unwrap();
        let m = HamiltonianModel::constant(h.clone()).unwrap();
        assert_eq!(m.eval_h(123.4).unwrap(), h);
        assert_eq!(m.eval_dh(123.4).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn constructors_reject_bad_input() {
        let skew = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        assert!(matches!(
            HamiltonianModel::constant(skew.clone()),
            Err(Error::NotHermitian { .. })
        ));
        assert!(matches!(
            HamiltonianModel::rotating_spin(-1.0, 0.1, 0.5),
            Err(Error::ValidationError(..))
        ));
        assert!(matches!(
            HamiltonianModel::landau_zener(1.0, -0.5, 0.0),
            Err(Error::ValidationError(..))
        ));
        let h2 = ComplexMatrix::identity(3).unwrap();
        assert!(matches!(
            HamiltonianModel::linear_interpolation(ComplexMatrix::identity(2).unwrap(), h2, 1.0),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn tabulated_reproduces_smooth_model_between_samples() {
        let reference = HamiltonianModel::rotating_spin(1.0, 0.5, 1.0).unwrap();
        let ts = linspace(0.0, 5.0, 200);
        let hs: Vec<ComplexMatrix> = ts.iter().map(|&t| reference.eval_h(t).unwrap()).collect();
        let tab = HamiltonianModel::Tabulated(TabulatedModel::from_samples(&ts, &hs, None).unwrap());
        for k in 0..100 {
            let t = 5.0 * (k as f64 + 0.5) / 100.0;
            let a = tab.eval_h(t).unwrap();
            let b = reference.eval_h(t).unwrap();
            for i in 0..2 {
                for j in 0..2 {
                    assert!((a.get(i, j) - b.get(i, j)).norm() < 1e-6, "t={t}");
                }
            }
            let da = tab.eval_dh(t).unwrap();
            let db = reference.eval_dh(t).unwrap();
            for i in 0..2 {
                for j in 0..2 {
                    assert!((da.get(i, j) - db.get(i, j)).norm() < 1e-4, "t={t}");
                }
            }
        }
        // Interpolated matrices stay exactly Hermitian.
        let sample = tab.eval_h(2.34).unwrap();
        assert_eq!(sample.hermitian_defect(), 0.0);
    }

    #[test]
    fn tabulated_validation_errors() {
        let eye = ComplexMatrix::identity(2).unwrap();
        let four = vec![eye.clone(), eye.clone(), eye.clone(), eye.clone()];
        assert!(matches!(
            TabulatedModel::from_samples(&[0.0, 1.0, 2.0], &four[..3], None),
            Err(Error::TooFewSamples { got: 3, min: 4 })
        ));
        assert!(matches!(
            TabulatedModel::from_samples(&[0.0, 1.0, 1.0, 2.0], &four, None),
            Err(Error::NonMonotonicTimes { index: 2, .. })
        ));
        assert!(matches!(
            TabulatedModel::from_samples(&[0.0, 1.0, 2.0, 4.5], &four, Some(2.0)),
            Err(Error::TabulatedGapTooLarge { .. })
        ));
        let mut skew = eye.clone();
        skew.set(0, 1, c(0.5, 0.0));
        let bad = vec![eye.clone(), skew, eye.clone(), eye.clone()];
        match TabulatedModel::from_samples(&[0.0, 1.0, 2.0, 3.0], &bad, None) {
            Err(Error::NonHermitianSample { index: 1, .. }) => {}
            other => panic!("expected NonHermitianSample, got {other:?}"),
        }
    }

    #[test]
    fn tabulated_rejects_out_of_domain() {
        let reference = HamiltonianModel::rotating_spin(1.0, 0.5, 1.0).unwrap();
        let ts = linspace(0.0, 2.0, 10);
        let hs: Vec<ComplexMatrix> = ts.iter().map(|&t| reference.eval_h(t).unwrap()).collect();
        let tab = TabulatedModel::from_samples(&ts, &hs, None).unwrap();
        assert!(matches!(
            tab.eval_h(2.5),
            Err(Error::OutOfDomain { .. })
        ));
        assert!(matches!(
            tab.eval_dh(-0.5),
            Err(Error::OutOfDomain { .. })
        ));
        // Edge evaluation works via the clamped window.
        assert!(tab.eval_dh(0.0).is_ok());
        assert!(tab.eval_dh(2.0).is_ok());
    }

    #[test]
    fn tabulated_json_round_trip_and_errors() {
        let dir = tempfile::tempdir().unwrap();
        let good = dir.path().join("good.json");
        std::fs::write(
            &good,
            r#"{
  "dim": 2,
  "samples": [
    { "t": 0.0, "h_re": [[0.0, 0.3], [0.3, 1.0]], "h_im": [[0.0, 0.1], [-0.1, 0.0]] },
    { "t": 1.0, "h_re": [[0.1, 0.3], [0.3, 0.9]], "h_im": [[0.0, 0.2], [-0.2, 0.0]] },
    { "t": 2.0, "h_re": [[0.2, 0.3], [0.3, 0.8]], "h_im": [[0.0, 0.3], [-0.3, 0.0]] },
    { "t": 3.0, "h_re": [[0.3, 0.3], [0.3, 0.7]], "h_im": [[0.0, 0.4], [-0.4, 0.0]] }
  ]
}"#,
        )
        .unwrap();
        let model = load_tabulated(&good).unwrap();
        assert_eq!(model.dim(), 2);
        let h = model.eval_h(0.0).unwrap();
        assert_relative_eq!(h.get(0, 1).im, 0.1, epsilon = 1e-12);
        assert_relative_eq!(h.get(1, 0).im, -0.1, epsilon = 1e-12);

        let bad = dir.path().join("bad.json");
        std::fs::write(&bad, "{ not json").unwrap();
        match load_tabulated(&bad) {
            Err(Error::ParseError { line, .. }) => assert_eq!(line, 1),
            other => panic!("expected ParseError, got {other:?}"),
        }

        match load_tabulated(&dir.path().join("missing.json")) {
            Err(Error::Io { .. }) => {}
            other => panic!("expected Io error, got {other:?}"),
        }
    }

    #[test]
    fn tabulated_real_input_omits_h_im() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("real.json");
        std::fs::write(
            &p,
            r#"{
  "dim": 2,
  "samples": [
    { "t": 0.0, "h_re": [[0.0, 0.3], [0.3, 1.0]] },
    { "t": 1.0, "h_re": [[0.1, 0.3], [0.3, 0.9]] },
    { "t": 2.0, "h_re": [[0.2, 0.3], [0.3, 0.8]] },
    { "t": 3.0, "h_re": [[0.3, 0.3], [0.3, 0.7]] }
  ]
}"#,
        )
        .unwrap();
        let model = load_tabulated(&p).unwrap();
        let h = model.eval_h(1.5).unwrap();
        assert_eq!(h.get(0, 1).im, 0.0);
        assert_eq!(h.get(0, 0).im, 0.0);
    }
}
