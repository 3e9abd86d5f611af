//! Cubic spline interpolation for sampled real and complex tracks.
//!
//! Used wherever node-sampled data must be evaluated between nodes: the
//! tabulated Hamiltonian model and the interaction-picture coefficient ODE,
//! whose Runge-Kutta stages land between grid nodes.
//!
//! Splines use not-a-knot boundary conditions (third derivative continuous
//! across the first and last interior knots), which reproduce any single
//! cubic exactly and keep fourth-order accuracy up to the domain ends —
//! natural end conditions would degrade to second order near the
//! boundaries, exactly where Hamiltonian ramps start and stop.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::validate_grid;

/// C2 cubic spline through `(ts[i], ys[i])` with not-a-knot ends. Three
/// knots degenerate to the interpolating parabola, two knots to a line.
#[derive(Debug, Clone)]
pub struct CubicSpline {
    ts: Vec<f64>,
    ys: Vec<f64>,
    /// Second derivatives at the knots.
    m2: Vec<f64>,
}

impl CubicSpline {
    /// Fit the spline. Needs at least two strictly increasing knots.
    pub fn fit(ts: &[f64], ys: &[f64]) -> Result<CubicSpline> {
        if ts.len() != ys.len() {
            return Err(Error::GridMismatch {
                left: ts.len(),
                right: ys.len(),
                context: "spline fit",
            });
        }
        validate_grid(ts, 2)?;
        let n = ts.len();
        let mut m2 = vec![0.0f64; n];
        if n == 3 {
            // Single parabola through the three points: constant second
            // derivative from the second divided difference.
            let dd = ((ys[2] - ys[1]) / (ts[2] - ts[1]) - (ys[1] - ys[0]) / (ts[1] - ts[0]))
                / (ts[2] - ts[0]);
            let m = 2.0 * dd;
            m2 = vec![m, m, m];
        } else if n >= 4 {
            // Interior continuity equations for i = 1..n-2:
            //   (h_{i-1}/6) M_{i-1} + ((h_{i-1}+h_i)/3) M_i + (h_i/6) M_{i+1}
            //     = dy_i,
            // with the end values eliminated through the not-a-knot
            // relations
            //   M_0     = (1+r0) M_1     - r0 M_2,      r0 = h_0/h_1,
            //   M_{n-1} = (1+r1) M_{n-2} - r1 M_{n-3},  r1 = h_{n-2}/h_{n-3},
            // leaving a tridiagonal system in M_1..M_{n-2}.
            let h = |i: usize| ts[i + 1] - ts[i];
            let rows = n - 2;
            let mut diag = vec![0.0f64; rows];
            let mut upper = vec![0.0f64; rows];
            let mut lower = vec![0.0f64; rows];
            let mut rhs = vec![0.0f64; rows];
            for r in 0..rows {
                let i = r + 1; // interior node index
                let h0 = h(i - 1);
                let h1 = h(i);
                lower[r] = h0 / 6.0;
                diag[r] = (h0 + h1) / 3.0;
                upper[r] = h1 / 6.0;
                rhs[r] = (ys[i + 1] - ys[i]) / h1 - (ys[i] - ys[i - 1]) / h0;
            }
            // Fold the eliminated M_0 into the first row ...
            let r0 = h(0) / h(1);
            diag[0] += lower[0] * (1.0 + r0);
            upper[0] -= lower[0] * r0;
            lower[0] = 0.0;
            // ... and the eliminated M_{n-1} into the last row.
            let r1 = h(n - 2) / h(n - 3);
            diag[rows - 1] += upper[rows - 1] * (1.0 + r1);
            lower[rows - 1] -= upper[rows - 1] * r1;
            upper[rows - 1] = 0.0;

            // Thomas algorithm.
            for r in 1..rows {
                let w = lower[r] / diag[r - 1];
                diag[r] -= w * upper[r - 1];
                rhs[r] -= w * rhs[r - 1];
            }
            m2[rows] = rhs[rows - 1] / diag[rows - 1];
            for r in (1..rows).rev() {
                m2[r] = (rhs[r - 1] - upper[r - 1] * m2[r + 1]) / diag[r - 1];
            }
            // Recover the eliminated end values.
            m2[0] = (1.0 + r0) * m2[1] - r0 * m2[2];
            m2[n - 1] = (1.0 + r1) * m2[n - 2] - r1 * m2[n - 3];
        }
        Ok(CubicSpline {
            ts: ts.to_vec(),
            ys: ys.to_vec(),
            m2,
        })
    }

    /// Domain covered by the knots.
    pub fn domain(&self) -> (f64, f64) {
        (self.ts[0], *self.ts.last().unwrap())
    }

    /// Locate the segment containing `t`, tolerating endpoint rounding of
    /// `1e-12 * span` before reporting [`Error::OutOfDomain`].
    fn segment(&self, t: f64) -> Result<(usize, f64)> {
        let (lo, hi) = self.domain();
        let slack = 1e-12 * (hi - lo).abs().max(1.0);
        if t < lo - slack || t > hi + slack {
            return Err(Error::OutOfDomain {
                t,
                t_min: lo,
                t_max: hi,
            });
        }
        let tc = t.clamp(lo, hi);
        // Index of the last knot <= tc, capped to the final segment start.
        let idx = match self.ts.partition_point(|&x| x <= tc) {
            0 => 0,
            k => (k - 1).min(self.ts.len() - 2),
        };
        Ok((idx, tc))
    }

    /// Spline value at `t`.
    pub fn value(&self, t: f64) -> Result<f64> {
        let (i, tc) = self.segment(t)?;
        let h = self.ts[i + 1] - self.ts[i];
        let a = self.ts[i + 1] - tc;
        let b = tc - self.ts[i];
        Ok(self.m2[i] * a.powi(3) / (6.0 * h)
            + self.m2[i + 1] * b.powi(3) / (6.0 * h)
            + (self.ys[i] / h - self.m2[i] * h / 6.0) * a
            + (self.ys[i + 1] / h - self.m2[i + 1] * h / 6.0) * b)
    }

    /// Spline derivative at `t`.
    pub fn derivative(&self, t: f64) -> Result<f64> {
        let (i, tc) = self.segment(t)?;
        let h = self.ts[i + 1] - self.ts[i];
        let a = self.ts[i + 1] - tc;
        let b = tc - self.ts[i];
        Ok(-self.m2[i] * a.powi(2) / (2.0 * h)
            + self.m2[i + 1] * b.powi(2) / (2.0 * h)
            + (self.ys[i + 1] - self.ys[i]) / h
            - (self.m2[i + 1] - self.m2[i]) * h / 6.0)
    }
}

/// Pair of cubic splines interpolating a complex-valued track.
#[derive(Debug, Clone)]
pub struct ComplexSpline {
    re: CubicSpline,
    im: CubicSpline,
}

impl ComplexSpline {
    /// Fit real and imaginary parts independently.
    pub fn fit(ts: &[f64], zs: &[Complex64]) -> Result<ComplexSpline> {
        let re: Vec<f64> = zs.iter().map(|z| z.re).collect();
        let im: Vec<f64> = zs.iter().map(|z| z.im).collect();
        Ok(ComplexSpline {
            re: CubicSpline::fit(ts, &re)?,
            im: CubicSpline::fit(ts, &im)?,
        })
    }

    /// Interpolated complex value at `t`.
    pub fn value(&self, t: f64) -> Result<Complex64> {
        Ok(Complex64::new(self.re.value(t)?, self.im.value(t)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::linspace;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn spline_interpolates_knots_exactly() {
        let ts = [0.0, 0.4, 1.1, 2.0, 3.5];
        let ys = [1.0, -0.3, 0.8, 2.2, -1.0];
        let s = CubicSpline::fit(&ts, &ys).unwrap();
        for (t, y) in ts.iter().zip(ys.iter()) {
            assert_relative_eq!(s.value(*t).unwrap(), *y, epsilon = 1e-12);
        }
    }

    #[test]
    fn spline_reproduces_lines_exactly() {
        let ts = [0.0, 0.5, 1.3, 2.0];
        let ys: Vec<f64> = ts.iter().map(|t| 3.0 * t - 1.0).collect();
        let s = CubicSpline::fit(&ts, &ys).unwrap();
        for k in 0..=40 {
            let t = 2.0 * k as f64 / 40.0;
            assert_relative_eq!(s.value(t).unwrap(), 3.0 * t - 1.0, epsilon = 1e-12);
            assert_relative_eq!(s.derivative(t).unwrap(), 3.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn spline_reproduces_single_cubic_exactly() {
        // Not-a-knot ends make the spline exact on any one cubic.
        let ts = [0.0, 0.3, 0.9, 1.4, 2.0, 2.2];
        let f = |t: f64| t.powi(3) - 2.0 * t * t + 0.5 * t - 1.0;
        let df = |t: f64| 3.0 * t * t - 4.0 * t + 0.5;
        let ys: Vec<f64> = ts.iter().map(|&t| f(t)).collect();
        let s = CubicSpline::fit(&ts, &ys).unwrap();
        for k in 0..=50 {
            let t = 2.2 * k as f64 / 50.0;
            assert!((s.value(t).unwrap() - f(t)).abs() < 1e-12, "value at {t}");
            assert!(
                (s.derivative(t).unwrap() - df(t)).abs() < 1e-11,
                "derivative at {t}"
            );
        }
    }

    #[test]
    fn spline_three_knots_is_parabola() {
        let f = |t: f64| 2.0 * t * t - t + 3.0;
        let ts = [0.0, 1.0, 2.5];
        let ys: Vec<f64> = ts.iter().map(|&t| f(t)).collect();
        let s = CubicSpline::fit(&ts, &ys).unwrap();
        for k in 0..=25 {
            let t = 2.5 * k as f64 / 25.0;
            assert!((s.value(t).unwrap() - f(t)).abs() < 1e-12);
        }
    }

    #[test]
    fn spline_tracks_sine_between_dense_knots() {
        let ts = linspace(0.0, 2.0 * PI, 2000);
        let ys: Vec<f64> = ts.iter().map(|t| t.sin()).collect();
        let s = CubicSpline::fit(&ts, &ys).unwrap();
        for k in 0..500 {
            let t = 2.0 * PI * (k as f64 + 0.5) / 500.0;
            let t = t.min(2.0 * PI);
            assert!((s.value(t).unwrap() - t.sin()).abs() < 1e-9);
            assert!((s.derivative(t).unwrap() - t.cos()).abs() < 1e-6);
        }
    }

    #[test]
    fn spline_two_knots_is_linear() {
        let s = CubicSpline::fit(&[0.0, 2.0], &[1.0, 5.0]).unwrap();
        assert_relative_eq!(s.value(1.0).unwrap(), 3.0, epsilon = 1e-14);
        assert_relative_eq!(s.derivative(0.5).unwrap(), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn spline_rejects_out_of_domain() {
        let s = CubicSpline::fit(&[0.0, 1.0, 2.0], &[0.0, 1.0, 0.0]).unwrap();
        match s.value(2.5) {
            Err(Error::OutOfDomain { .. }) => {}
            other => panic!("expected OutOfDomain, got {other:?}"),
        }
        match s.value(-0.1) {
            Err(Error::OutOfDomain { .. }) => {}
            other => panic!("expected OutOfDomain, got {other:?}"),
        }
        // Endpoint rounding slack is tolerated.
        assert!(s.value(2.0 + 1e-14).is_ok());
    }

    #[test]
    fn complex_spline_tracks_plane_wave() {
        let ts = linspace(0.0, 4.0, 1200);
        let zs: Vec<Complex64> = ts
            .iter()
            .map(|&t| Complex64::new(0.0, 2.0 * t).exp())
            .collect();
        let s = ComplexSpline::fit(&ts, &zs).unwrap();
        for k in 0..200 {
            let t = 4.0 * (k as f64 + 0.5) / 200.0;
            let exact = Complex64::new(0.0, 2.0 * t).exp();
            assert!((s.value(t).unwrap() - exact).norm() < 1e-8);
        }
    }
}
