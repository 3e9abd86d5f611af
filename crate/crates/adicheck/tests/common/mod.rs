//! Shared generators for the integration suites: seeded random
//! interpolation scenarios whose spectra stay safely non-degenerate over
//! the whole sweep.
//!
//! Compiled into each integration test separately, so not every item is
//! used by every suite.
#![allow(dead_code)]

use adicheck::flow::{Gauge, SpectralFlow};
use adicheck::matrix::{hermitian_eig, random_hermitian, random_real_symmetric, ComplexMatrix, C64};
use adicheck::model::HamiltonianModel;

/// Smallest adjacent-eigenvalue gap a generated sweep must keep at every
/// probe node to be accepted.
pub const MIN_PROBE_GAP: f64 = 0.25;

/// Probe nodes used when vetting a candidate sweep for level collisions.
pub const GAP_PROBES: usize = 257;

/// Add `scale * diag(0, 1, .., dim-1)` to a Hermitian matrix. A shared
/// diagonal ramp keeps random endpoint pairs from producing level
/// collisions mid-sweep while leaving the off-diagonal structure random.
fn stagger(mut h: ComplexMatrix, scale: f64) -> ComplexMatrix {
    for i in 0..h.dim() {
        let d = h.get(i, i) + C64::new(scale * i as f64, 0.0);
        h.set(i, i, d);
    }
    h
}

/// Smallest adjacent gap of `(1 - u) h0 + u h1` over `GAP_PROBES` probe
/// values of `u`, evaluated through the model so the probe sees exactly
/// what the flow will see.
fn probed_min_gap(model: &HamiltonianModel, t_total: f64) -> f64 {
    let mut worst = f64::INFINITY;
    for k in 0..GAP_PROBES {
        let t = t_total * k as f64 / (GAP_PROBES - 1) as f64;
        let Ok(h) = model.eval_h(t) else {
            return 0.0;
        };
        let Ok(frame) = hermitian_eig(&h, t) else {
            return 0.0;
        };
        worst = worst.min(frame.min_gap());
    }
    worst
}

/// A seeded random linear-interpolation scenario accepted by the gap vet.
pub struct RandomSweep {
    pub dim: usize,
    pub seed: u64,
    pub flow: SpectralFlow,
}

fn random_endpoint(dim: usize, seed: u64, real_only: bool) -> ComplexMatrix {
    let h = if real_only {
        random_real_symmetric(dim, seed).expect("generator dims are valid")
    } else {
        random_hermitian(dim, seed).expect("generator dims are valid")
    };
    stagger(h, 1.0)
}

/// Generate `count` gap-safe random sweeps, cycling through `dims`.
///
/// Seeds are consumed in order starting at `seed0`; candidates whose
/// spectrum comes closer than [`MIN_PROBE_GAP`] anywhere on the sweep (or
/// whose flow fails to build) are rejected and the next seed is tried, so
/// the accepted list is reproducible. Panics if acceptance stalls — that
/// would mean the generator itself regressed.
pub fn random_sweeps(
    count: usize,
    dims: &[usize],
    t_total: f64,
    steps: usize,
    gauge: Gauge,
    seed0: u64,
    real_only: bool,
) -> Vec<RandomSweep> {
    let mut out = Vec::with_capacity(count);
    let mut seed = seed0;
    let mut attempts = 0usize;
    while out.len() < count {
        attempts += 1;
        assert!(
            attempts < 40 * count,
            "random sweep generation stalled: {} accepted after {attempts} attempts",
            out.len()
        );
        let dim = dims[out.len() % dims.len()];
        let h0 = random_endpoint(dim, seed, real_only);
        let h1 = random_endpoint(dim, seed ^ 0x5eed_cafe_f00d, real_only);
        seed += 1;
        let Ok(model) = HamiltonianModel::linear_interpolation(h0, h1, t_total) else {
            continue;
        };
        if probed_min_gap(&model, t_total) < MIN_PROBE_GAP {
            continue;
        }
        let Ok(flow) = SpectralFlow::build(model, t_total, steps, gauge) else {
            continue;
        };
        out.push(RandomSweep {
            dim,
            seed: seed - 1,
            flow,
        });
    }
    out
}
