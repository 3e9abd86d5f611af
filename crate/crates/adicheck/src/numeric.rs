//! Shared numerical kernels: quadrature on sampled grids, three-point
//! finite differences, and phase wrapping/unwrapping.
//!
//! All routines take explicit node arrays and work on non-uniform grids by
//! fitting local parabolas (Lagrange three-point stencils), so they are
//! exact for polynomials up to degree two and fourth-order accurate on
//! smooth data over uniform grids.

use num_complex::Complex64;

use crate::error::{Error, Result};

type C64 = Complex64;

/// Validate a sample grid: at least `min_len` nodes, strictly increasing.
pub fn validate_grid(ts: &[f64], min_len: usize) -> Result<()> {
    if ts.len() < min_len {
        return Err(Error::TooFewSamples {
            got: ts.len(),
            min: min_len,
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
    Ok(())
}

/// Integral of the parabola through `(t0,f0), (t1,f1), (t2,f2)` over
/// `[a, b]`, as Lagrange weights. Exact for quadratics on any grid.
///
/// Works in coordinates shifted to the interval midpoint so the monomial
/// differences stay O(h^k) and never suffer catastrophic cancellation.
fn parabola_integral(ts: [f64; 3], fs: [C64; 3], a: f64, b: f64) -> C64 {
    let mid = 0.5 * (a + b);
    let hb = b - mid; // = (b - a) / 2; the shifted interval is [-hb, hb].
    let t: Vec<f64> = ts.iter().map(|&x| x - mid).collect();
    // Odd monomials vanish over the symmetric interval:
    //   int x dx = 0, int x^2 dx = 2 hb^3 / 3, int 1 dx = 2 hb.
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..3 {
        let (u, v) = match i {
            0 => (t[1], t[2]),
            1 => (t[0], t[2]),
            _ => (t[0], t[1]),
        };
        // integral of (x-u)(x-v) = int x^2 - (u+v) int x + u v int 1.
        let num = 2.0 * hb.powi(3) / 3.0 + u * v * 2.0 * hb;
        let den = (t[i] - u) * (t[i] - v);
        acc += fs[i] * (num / den);
    }
    acc
}

/// Derivative of the parabola through `(t0,f0), (t1,f1), (t2,f2)` at `x`.
fn parabola_derivative(ts: [f64; 3], fs: [f64; 3], x: f64) -> f64 {
    let mut acc = 0.0;
    for i in 0..3 {
        let (u, v) = match i {
            0 => (ts[1], ts[2]),
            1 => (ts[0], ts[2]),
            _ => (ts[0], ts[1]),
        };
        // d/dx (x-u)(x-v) = 2x - u - v.
        acc += fs[i] * (2.0 * x - u - v) / ((ts[i] - u) * (ts[i] - v));
    }
    acc
}

/// Cumulative integral of complex samples: returns `I` with `I[0] = 0` and
/// `I[k] = integral of f from ts[0] to ts[k]`. Each interval is integrated
/// with the cubic through its four nearest nodes (centered where possible),
/// which is fourth-order accurate on smooth data; three-node grids fall back
/// to the parabola rule.
pub fn cumulative_integral_c64(ts: &[f64], fs: &[C64]) -> Result<Vec<C64>> {
    if ts.len() != fs.len() {
        return Err(Error::GridMismatch {
            left: ts.len(),
            right: fs.len(),
            context: "cumulative integral",
        });
    }
    validate_grid(ts, 3)?;
    let n = ts.len();
    let mut out = Vec::with_capacity(n);
    out.push(C64::new(0.0, 0.0));
    let mut acc = C64::new(0.0, 0.0);
    for j in 0..(n - 1) {
        if n == 3 {
            acc += parabola_integral(
                [ts[0], ts[1], ts[2]],
                [fs[0], fs[1], fs[2]],
                ts[j],
                ts[j + 1],
            );
        } else {
            // Four-node stencil centered on the interval, clamped at edges.
            let s = j.saturating_sub(1).min(n - 4);
            acc += cubic_integral_c64(
                [ts[s], ts[s + 1], ts[s + 2], ts[s + 3]],
                [fs[s], fs[s + 1], fs[s + 2], fs[s + 3]],
                ts[j],
                ts[j + 1],
            );
        }
        out.push(acc);
    }
    Ok(out)
}

/// Cumulative integral of real samples; see [`cumulative_integral_c64`].
pub fn cumulative_integral(ts: &[f64], fs: &[f64]) -> Result<Vec<f64>> {
    let cfs: Vec<C64> = fs.iter().map(|&x| C64::new(x, 0.0)).collect();
    Ok(cumulative_integral_c64(ts, &cfs)?
        .into_iter()
        .map(|z| z.re)
        .collect())
}

/// Definite integral over the whole grid with composite Simpson weights
/// (all positive for non-negative integrands). An odd interval count closes
/// with a 3/8 panel; a single interval falls back to the trapezoid.
pub fn composite_simpson(ts: &[f64], fs: &[f64]) -> Result<f64> {
    if ts.len() != fs.len() {
        return Err(Error::GridMismatch {
            left: ts.len(),
            right: fs.len(),
            context: "composite Simpson",
        });
    }
    validate_grid(ts, 2)?;
    let n_int = ts.len() - 1;
    if n_int == 1 {
        return Ok(0.5 * (ts[1] - ts[0]) * (fs[0] + fs[1]));
    }
    let mut acc = 0.0;
    let mut j = 0;
    // Pairs of intervals via the (possibly non-uniform) parabola rule, which
    // reduces to classic Simpson on uniform grids; close an odd tail with a
    // final 3/8-style panel over the last three intervals.
    let pair_end = if n_int % 2 == 0 { n_int } else { n_int - 3 };
    while j + 2 <= pair_end {
        let t3 = [ts[j], ts[j + 1], ts[j + 2]];
        let f3 = [
            C64::new(fs[j], 0.0),
            C64::new(fs[j + 1], 0.0),
            C64::new(fs[j + 2], 0.0),
        ];
        acc += parabola_integral(t3, f3, ts[j], ts[j + 2]).re;
        j += 2;
    }
    if n_int % 2 == 1 {
        // Cubic through the last four nodes, integrated over the last three
        // intervals (Simpson 3/8 on uniform grids); the pair loop stopped at
        // ts[pair_end] = ts[len-4].
        let k = ts.len() - 4;
        acc += cubic_integral(
            [ts[k], ts[k + 1], ts[k + 2], ts[k + 3]],
            [fs[k], fs[k + 1], fs[k + 2], fs[k + 3]],
            ts[k],
            ts[k + 3],
        );
    }
    Ok(acc)
}

/// Integral over `[a, b]` of the cubic through four complex-valued nodes.
///
/// Same midpoint-shifted formulation as [`parabola_integral`]: over the
/// symmetric interval `[-hb, hb]` the odd monomials integrate to zero and
/// the even ones to `2 hb` and `2 hb^3 / 3`, so every term is O(h^k).
fn cubic_integral_c64(ts: [f64; 4], fs: [C64; 4], a: f64, b: f64) -> C64 {
    let mid = 0.5 * (a + b);
    let hb = b - mid;
    let t: Vec<f64> = ts.iter().map(|&x| x - mid).collect();
    let int1 = 2.0 * hb; // int 1
    let int2 = 2.0 * hb.powi(3) / 3.0; // int x^2
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..4 {
        let others: Vec<f64> = (0..4).filter(|&j| j != i).map(|j| t[j]).collect();
        let (u, v, w) = (others[0], others[1], others[2]);
        // (x-u)(x-v)(x-w) = x^3 - (u+v+w)x^2 + (uv+uw+vw)x - uvw;
        // odd powers drop out of the symmetric integral.
        let s1 = u + v + w;
        let s3 = u * v * w;
        let int = -s1 * int2 - s3 * int1;
        let den = (t[i] - u) * (t[i] - v) * (t[i] - w);
        acc += fs[i] * (int / den);
    }
    acc
}

/// Real specialization of [`cubic_integral_c64`].
fn cubic_integral(ts: [f64; 4], fs: [f64; 4], a: f64, b: f64) -> f64 {
    cubic_integral_c64(ts, fs.map(|x| C64::new(x, 0.0)), a, b).re
}

/// Node-wise derivative of sampled data by three-point stencils: centered in
/// the interior, one-sided (still second-order) at the ends.
pub fn centered_derivative(ts: &[f64], fs: &[f64]) -> Result<Vec<f64>> {
    if ts.len() != fs.len() {
        return Err(Error::GridMismatch {
            left: ts.len(),
            right: fs.len(),
            context: "finite difference",
        });
    }
    validate_grid(ts, 3)?;
    let n = ts.len();
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let s = if j == 0 {
            0
        } else if j == n - 1 {
            n - 3
        } else {
            j - 1
        };
        out.push(parabola_derivative(
            [ts[s], ts[s + 1], ts[s + 2]],
            [fs[s], fs[s + 1], fs[s + 2]],
            ts[j],
        ));
    }
    Ok(out)
}

/// Wrap an angle to the half-open interval `(-pi, pi]`.
pub fn wrap_phase(x: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut y = x % two_pi;
    if y <= -std::f64::consts::PI {
        y += two_pi;
    } else if y > std::f64::consts::PI {
        y -= two_pi;
    }
    y
}

/// Unwrap a sampled phase track: keep the first value, then accumulate
/// wrapped successive differences so the result is continuous without
/// 2-pi jumps.
pub fn unwrap_phases(raw: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(raw.len());
    let Some(&first) = raw.first() else {
        return out;
    };
    out.push(first);
    for k in 1..raw.len() {
        let prev = out[k - 1];
        out.push(prev + wrap_phase(raw[k] - raw[k - 1]));
    }
    out
}

/// Uniform grid of `steps + 1` nodes spanning `[t0, t1]`, landing exactly on
/// both endpoints.
pub fn linspace(t0: f64, t1: f64, steps: usize) -> Vec<f64> {
    let mut ts = Vec::with_capacity(steps + 1);
    for k in 0..=steps {
        let frac = k as f64 / steps as f64;
        ts.push(t0 + (t1 - t0) * frac);
    }
    // Pin the final node to avoid accumulated rounding past t1.
    if let Some(last) = ts.last_mut() {
        *last = t1;
    }
    ts
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn cumulative_integral_of_cosine_is_sine() {
        let ts = linspace(0.0, 2.0 * PI, 2000);
        let fs: Vec<f64> = ts.iter().map(|t| t.cos()).collect();
        let integral = cumulative_integral(&ts, &fs).unwrap();
        let mut worst = 0.0f64;
        for (t, i) in ts.iter().zip(integral.iter()) {
            worst = worst.max((i - t.sin()).abs());
        }
        assert!(worst < 1e-10, "worst error {worst}");
    }

    #[test]
    fn cumulative_integral_exact_for_quadratics_on_uneven_grid() {
        // Graded grid: t_k = (k/n)^2.
        let n = 40;
        let ts: Vec<f64> = (0..=n).map(|k| (k as f64 / n as f64).powi(2)).collect();
        let fs: Vec<f64> = ts.iter().map(|t| 3.0 * t * t - 2.0 * t + 0.5).collect();
        let integral = cumulative_integral(&ts, &fs).unwrap();
        for (t, i) in ts.iter().zip(integral.iter()) {
            let exact = t.powi(3) - t.powi(2) + 0.5 * t;
            assert!((i - exact).abs() < 1e-13, "at t={t}: {i} vs {exact}");
        }
    }

    #[test]
    fn composite_simpson_matches_exponential() {
        for (steps, tol) in [(100usize, 5e-10), (101, 5e-10), (1000, 1e-12), (1001, 1e-12)] {
            let ts = linspace(0.0, 1.0, steps);
            let fs: Vec<f64> = ts.iter().map(|t| t.exp()).collect();
            let got = composite_simpson(&ts, &fs).unwrap();
            let exact = 1.0f64.exp() - 1.0;
            assert!(
                (got - exact).abs() < tol,
                "steps={steps}: {got} vs {exact}"
            );
        }
    }

    #[test]
    fn composite_simpson_single_interval_is_trapezoid() {
        let got = composite_simpson(&[0.0, 2.0], &[1.0, 3.0]).unwrap();
        assert_relative_eq!(got, 4.0, epsilon = 1e-15);
    }

    #[test]
    fn cumulative_and_composite_agree_on_smooth_data() {
        let ts = linspace(0.0, 3.0, 1500);
        let fs: Vec<f64> = ts.iter().map(|t| (t * 1.7).sin().powi(2) + 0.3).collect();
        let cumulative = cumulative_integral(&ts, &fs).unwrap();
        let simpson = composite_simpson(&ts, &fs).unwrap();
        assert!((cumulative.last().unwrap() - simpson).abs() < 1e-10);
    }

    #[test]
    fn complex_cumulative_integral_of_plane_wave() {
        let ts = linspace(0.0, 2.0 * PI, 4000);
        let fs: Vec<C64> = ts.iter().map(|&t| C64::new(0.0, t).exp()).collect();
        let integral = cumulative_integral_c64(&ts, &fs).unwrap();
        // Exact: -i (e^{it} - 1).
        for (k, &t) in ts.iter().enumerate() {
            let exact = C64::new(0.0, -1.0) * (C64::new(0.0, t).exp() - 1.0);
            assert!((integral[k] - exact).norm() < 1e-10);
        }
        assert!(integral.last().unwrap().norm() < 1e-10);
    }

    #[test]
    fn derivative_of_sine_is_cosine() {
        let ts = linspace(0.0, 2.0 * PI, 2000);
        let fs: Vec<f64> = ts.iter().map(|t| t.sin()).collect();
        let d = centered_derivative(&ts, &fs).unwrap();
        for (k, &t) in ts.iter().enumerate() {
            assert!((d[k] - t.cos()).abs() < 1e-5, "node {k}");
        }
    }

    #[test]
    fn derivative_exact_for_quadratics_on_uneven_grid() {
        let n = 25;
        let ts: Vec<f64> = (0..=n)
            .map(|k| {
                let x = k as f64 / n as f64;
                x + 0.3 * x * x
            })
            .collect();
        let fs: Vec<f64> = ts.iter().map(|t| 2.0 * t * t - t + 4.0).collect();
        let d = centered_derivative(&ts, &fs).unwrap();
        for (k, &t) in ts.iter().enumerate() {
            let exact = 4.0 * t - 1.0;
            assert!((d[k] - exact).abs() < 1e-11, "node {k}: {} vs {exact}", d[k]);
        }
    }

    #[test]
    fn wrap_phase_lands_in_half_open_interval() {
        assert_relative_eq!(wrap_phase(PI), PI, epsilon = 1e-15);
        assert_relative_eq!(wrap_phase(-PI), PI, epsilon = 1e-15);
        assert_relative_eq!(wrap_phase(1.5 * PI), -0.5 * PI, epsilon = 1e-14);
        assert_relative_eq!(wrap_phase(0.0), 0.0, epsilon = 1e-15);
        assert_relative_eq!(wrap_phase(7.0 * PI), PI, epsilon = 1e-13);
    }

    #[test]
    fn unwrap_recovers_linear_ramp() {
        let ts = linspace(0.0, 10.0, 500);
        let ramp: Vec<f64> = ts.iter().map(|t| 2.9 * t).collect();
        let wrapped: Vec<f64> = ramp.iter().map(|&x| wrap_phase(x)).collect();
        let unwrapped = unwrap_phases(&wrapped);
        for (k, r) in ramp.iter().enumerate() {
            // Same up to the constant offset fixed by the first sample.
            let offset = unwrapped[0] - ramp[0];
            assert!((unwrapped[k] - r - offset).abs() < 1e-10, "node {k}");
        }
    }

    #[test]
    fn grid_validation_rejects_non_monotone_times() {
        match validate_grid(&[0.0, 1.0, 1.0, 2.0], 3) {
            Err(crate::error::Error::NonMonotonicTimes { index: 2, .. }) => {}
            other => panic!("expected NonMonotonicTimes, got {other:?}"),
        }
        match validate_grid(&[0.0, 1.0], 3) {
            Err(crate::error::Error::TooFewSamples { .. }) => {}
            other => panic!("expected TooFewSamples, got {other:?}"),
        }
    }

    #[test]
    fn linspace_hits_endpoints_exactly() {
        let ts = linspace(0.0, 0.7, 7);
        assert_eq!(ts.len(), 8);
        assert_eq!(ts[0], 0.0);
        assert_eq!(*ts.last().unwrap(), 0.7);
        validate_grid(&ts, 3).unwrap();
    }
}
