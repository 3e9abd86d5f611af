//! Spectral flow: smooth eigenvalue/eigenvector tracks along a Hamiltonian
//! path, plus the per-pair phase bookkeeping every validity condition is
//! built from.
//!
//! A [`SpectralFlow`] samples the model on a uniform grid over `[0, T]`,
//! diagonalizes every node, and fixes the eigenvector phase freedom with one
//! of two gauges:
//!
//! * [`Gauge::Aligned`] — discrete parallel transport: each node's
//!   eigenvector is rotated so its overlap with the previous node is real
//!   and positive. The discrete geometric phase is then identically zero
//!   and all phase information lives in the eigenvectors themselves.
//! * [`Gauge::Canonical`] — an anchor component (the largest-magnitude
//!   component of the level at `t = 0`) is held real and positive at every
//!   node. This is the gauge in which closed-form eigenbases are usually
//!   quoted; its geometric phase is generally nonzero.
//!
//! Per level the flow provides the dynamic phase `alpha_n(t) = integral of
//! E_n` and the discrete geometric phase `beta_n(t_k) = sum of
//! arg(<v_n(t_j)|v_n(t_{j+1})>)` over `j < k`. The discrete `beta` is
//! exactly gauge-covariant: reassigning arbitrary per-node phases
//! `v_n(t_k) -> v_n(t_k) e^{i phi_n(k)}` shifts `beta_n(t_k)` by
//! `phi_n(k) - phi_n(0)` modulo 2-pi, so every condition built from
//! `A e^{-i d-alpha} e^{-i d-beta}` changes only by a constant phase and no
//! observable quantity moves.
//!
//! For a level pair the coupling is `A_mn(t) = <v_m|dH/dt|v_n> /
//! (E_n - E_m)`, factored as a non-negative envelope and a phase,
//! `A = |A| e^{-i gamma}`. [`SpectralFlow::pair_phase`] unwraps `gamma`
//! continuously, folding apparent half-turn jumps (which are sign changes
//! of a real envelope, not phase motion) into the envelope and flagging
//! the fold nodes, then assembles the total relative phase
//! `theta = d-alpha + d-beta + gamma` and its numerical derivative.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{hermitian_eig, inner, EigenFrame, StateVector, C64};
use crate::model::HamiltonianModel;
use crate::numeric::{
    centered_derivative, cumulative_integral, linspace, wrap_phase,
};

/// Eigenvector phase conventions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gauge {
    /// Discrete parallel transport: successive overlaps real-positive.
    Aligned,
    /// Anchor component real-positive at every node.
    Canonical,
}

/// Minimum number of grid intervals for a flow.
pub const MIN_STEPS: usize = 100;

/// Fraction of the track maximum below which a coupling amplitude counts as
/// undefined for phase extraction.
pub const AMP_FLOOR_FACTOR: f64 = 1e-12;

/// Anchor magnitude below which the canonical gauge re-anchors a level.
const ANCHOR_COLLAPSE: f64 = 1e-3;

/// Overlap magnitude below which successive frames are declared
/// discontinuous (grid too coarse to follow the level).
const OVERLAP_FLOOR: f64 = 0.5;

/// Gauge-fixed eigenframe track of a Hamiltonian model over `[0, T]`.
#[derive(Debug, Clone)]
pub struct SpectralFlow {
    model: HamiltonianModel,
    ts: Vec<f64>,
    frames: Vec<EigenFrame>,
    gauge: Gauge,
    /// Nodes at which the canonical gauge had to re-anchor a level
    /// (level, node index). Empty for well-behaved tracks.
    reanchored: Vec<(usize, usize)>,
}

impl SpectralFlow {
    /// Diagonalize `model` on a uniform grid of `steps` intervals over
    /// `[0, t_total]` and fix the gauge.
    ///
    /// Fails with [`Error::DegenerateSpectrum`] if any node's spectrum has a
    /// near-degenerate adjacent gap, and with [`Error::ContinuityLoss`] if
    /// successive eigenvectors of one level overlap by less than 0.5 in
    /// magnitude — both symptoms that the grid cannot resolve the level
    /// structure.
    pub fn build(
        model: HamiltonianModel,
        t_total: f64,
        steps: usize,
        gauge: Gauge,
    ) -> Result<SpectralFlow> {
        if !(t_total.is_finite() && t_total > 0.0) {
            return Err(Error::invalid("t_total", "must be finite and positive"));
        }
        if steps < MIN_STEPS {
            return Err(Error::TooFewSamples {
                got: steps,
                min: MIN_STEPS,
            });
        }
        let ts = linspace(0.0, t_total, steps);
        let dim = model.dim();
        let mut frames = Vec::with_capacity(ts.len());
        for &t in &ts {
            let h = model.eval_h(t)?;
            let frame = hermitian_eig(&h, t)?;
            if frame.degenerate {
                return Err(Error::DegenerateSpectrum {
                    t,
                    gap: frame.min_gap(),
                });
            }
            frames.push(frame);
        }

        let mut reanchored = Vec::new();
        match gauge {
            Gauge::Canonical => {
                // Anchor per level: largest component at t = 0, held until
                // it collapses, then re-anchored at the failing node.
                for n in 0..dim {
                    let mut anchor = argmax_component(&frames[0].eigenvectors[n]);
                    for k in 0..frames.len() {
                        if frames[k].eigenvectors[n].get(anchor).norm() < ANCHOR_COLLAPSE {
                            anchor = argmax_component(&frames[k].eigenvectors[n]);
                            reanchored.push((n, k));
                        }
                        fix_anchor_phase(&mut frames[k].eigenvectors[n], anchor);
                    }
                }
            }
            Gauge::Aligned => {
                // Canonical-fix the first frame so runs are reproducible,
                // then parallel-transport forward.
                for n in 0..dim {
                    let anchor = argmax_component(&frames[0].eigenvectors[n]);
                    fix_anchor_phase(&mut frames[0].eigenvectors[n], anchor);
                }
                for k in 1..frames.len() {
                    for n in 0..dim {
                        let o = inner(&frames[k - 1].eigenvectors[n], &frames[k].eigenvectors[n])?;
                        if o.norm() > 0.0 {
                            let phase = o.conj() / o.norm();
                            frames[k].eigenvectors[n] =
                                frames[k].eigenvectors[n].scaled(phase);
                        }
                    }
                }
            }
        }

        let flow = SpectralFlow {
            model,
            ts,
            frames,
            gauge,
            reanchored,
        };
        flow.check_continuity()?;
        Ok(flow)
    }

    /// Verify successive same-level eigenvectors stay strongly overlapped,
    /// and (canonical gauge) that no un-flagged sign flip slipped through.
    fn check_continuity(&self) -> Result<()> {
        for n in 0..self.dim() {
            for k in 1..self.frames.len() {
                let o = inner(
                    &self.frames[k - 1].eigenvectors[n],
                    &self.frames[k].eigenvectors[n],
                )?;
                if o.norm() < OVERLAP_FLOOR {
                    return Err(Error::ContinuityLoss {
                        level: n,
                        t_prev: self.ts[k - 1],
                        t: self.ts[k],
                        detail: format!(
                            "successive overlap magnitude {:.3e}; refine the grid",
                            o.norm()
                        ),
                    });
                }
                if self.gauge == Gauge::Canonical
                    && o.re <= 0.0
                    && !self.reanchored.iter().any(|&(lvl, node)| lvl == n && node == k)
                {
                    return Err(Error::ContinuityLoss {
                        level: n,
                        t_prev: self.ts[k - 1],
                        t: self.ts[k],
                        detail: format!(
                            "anchored eigenvector flipped sign (overlap {:.3e}{:+.3e}i)",
                            o.re, o.im
                        ),
                    });
                }
            }
        }
        Ok(())
    }

    /// The model the flow was built from.
    pub fn model(&self) -> &HamiltonianModel {
        &self.model
    }

    /// Grid nodes (uniform, `steps + 1` of them, from 0 to `t_total`).
    pub fn ts(&self) -> &[f64] {
        &self.ts
    }

    /// Gauge-fixed eigenframes, one per node.
    pub fn frames(&self) -> &[EigenFrame] {
        &self.frames
    }

    /// Phase convention the flow was built with. Note this records the
    /// construction; flows returned by [`SpectralFlow::reassign_phases`]
    /// deliberately violate it.
    pub fn gauge(&self) -> Gauge {
        self.gauge
    }

    /// Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.model.dim()
    }

    /// Total evolution time.
    pub fn t_total(&self) -> f64 {
        *self.ts.last().unwrap()
    }

    /// Eigenvalue track of one level.
    pub fn energies(&self, n: usize) -> Result<Vec<f64>> {
        self.check_level(n)?;
        Ok(self.frames.iter().map(|f| f.eigenvalues[n]).collect())
    }

    /// Smallest gap between the pair's levels anywhere on the grid.
    pub fn min_pair_gap(&self, m: usize, n: usize) -> Result<f64> {
        self.check_pair(m, n)?;
        Ok(self
            .frames
            .iter()
            .map(|f| (f.eigenvalues[n] - f.eigenvalues[m]).abs())
            .fold(f64::INFINITY, f64::min))
    }

    fn check_level(&self, n: usize) -> Result<()> {
        if n >= self.dim() {
            return Err(Error::LevelOutOfRange {
                level: n,
                dim: self.dim(),
            });
        }
        Ok(())
    }

    fn check_pair(&self, m: usize, n: usize) -> Result<()> {
        self.check_level(m)?;
        self.check_level(n)?;
        if m == n {
            return Err(Error::SameLevel { level: m });
        }
        Ok(())
    }

    /// Dynamic phase track `alpha_n(t_k) = integral of E_n from 0 to t_k`.
    pub fn dynamic_phase(&self, n: usize) -> Result<Vec<f64>> {
        let energies = self.energies(n)?;
        cumulative_integral(&self.ts, &energies)
    }

    /// Discrete geometric phase track
    /// `beta_n(t_k) = sum_{j<k} arg(<v_n(t_j)|v_n(t_{j+1})>)`.
    ///
    /// In the aligned gauge every overlap is real-positive by construction
    /// and the track is numerically zero. The discrete form transforms
    /// exactly covariantly under per-node phase reassignment (see module
    /// docs), which is what makes every derived condition gauge-invariant.
    pub fn berry_phase(&self, n: usize) -> Result<Vec<f64>> {
        self.check_level(n)?;
        let mut out = Vec::with_capacity(self.ts.len());
        out.push(0.0);
        let mut acc = 0.0;
        for k in 1..self.frames.len() {
            let o = inner(
                &self.frames[k - 1].eigenvectors[n],
                &self.frames[k].eigenvectors[n],
            )?;
            acc += o.arg();
            out.push(acc);
        }
        Ok(out)
    }

    /// Off-diagonal coupling track
    /// `A_mn(t_k) = <v_m | dH/dt | v_n> / (E_n - E_m)`.
    pub fn coupling(&self, m: usize, n: usize) -> Result<Vec<C64>> {
        self.check_pair(m, n)?;
        let mut out = Vec::with_capacity(self.ts.len());
        for (k, &t) in self.ts.iter().enumerate() {
            let dh = self.model.eval_dh(t)?;
            let frame = &self.frames[k];
            let hv = crate::matrix::apply(&dh, &frame.eigenvectors[n])?;
            let num = inner(&frame.eigenvectors[m], &hv)?;
            let gap = frame.eigenvalues[n] - frame.eigenvalues[m];
            out.push(num / gap);
        }
        Ok(out)
    }

    /// Full phase bookkeeping for the level pair `(m, n)`; see
    /// [`PairPhase`]. `m` and `n` may come in either order; stored fields
    /// refer to the given order.
    pub fn pair_phase(&self, m: usize, n: usize) -> Result<PairPhase> {
        self.check_pair(m, n)?;
        let a = self.coupling(m, n)?;
        let abs_a: Vec<f64> = a.iter().map(|z| z.norm()).collect();
        let a_max = abs_a.iter().copied().fold(0.0, f64::max);
        let amp_floor = AMP_FLOOR_FACTOR * a_max;
        let total = a.len();
        let defined: Vec<bool> = abs_a.iter().map(|&x| x > amp_floor).collect();
        let below = defined.iter().filter(|&&d| !d).count();
        if below * 10 > total {
            return Err(Error::PhaseUndefined { m, n, below, total });
        }

        // Unwrap gamma over the defined nodes, folding half-turn jumps
        // (envelope sign changes) and remembering where they happened.
        let mut gamma = vec![f64::NAN; total];
        let mut sign_folds = Vec::new();
        let mut prev: Option<(usize, f64)> = None;
        for k in 0..total {
            if !defined[k] {
                continue;
            }
            let raw = -a[k].arg();
            match prev {
                None => gamma[k] = wrap_phase(raw),
                Some((_, g_prev)) => {
                    let mut d = wrap_phase(raw - g_prev);
                    if d.abs() > std::f64::consts::FRAC_PI_2 {
                        d -= std::f64::consts::PI * d.signum();
                        sign_folds.push(k);
                    }
                    gamma[k] = g_prev + d;
                }
            }
            prev = Some((k, gamma[k]));
        }

        // Fill undefined nodes by linear interpolation in time between the
        // nearest defined neighbors (constant extension at the track ends).
        let mut interpolated = vec![false; total];
        let defined_idx: Vec<usize> = (0..total).filter(|&k| defined[k]).collect();
        for k in 0..total {
            if defined[k] {
                continue;
            }
            interpolated[k] = true;
            let next = defined_idx.partition_point(|&i| i < k);
            gamma[k] = match (next.checked_sub(1).map(|p| defined_idx[p]), defined_idx.get(next)) {
                (Some(lo), Some(&hi)) => {
                    let w = (self.ts[k] - self.ts[lo]) / (self.ts[hi] - self.ts[lo]);
                    gamma[lo] * (1.0 - w) + gamma[hi] * w
                }
                (Some(lo), None) => gamma[lo],
                (None, Some(&hi)) => gamma[hi],
                (None, None) => 0.0,
            };
        }

        let alpha_m = self.dynamic_phase(m)?;
        let alpha_n = self.dynamic_phase(n)?;
        let beta_m = self.berry_phase(m)?;
        let beta_n = self.berry_phase(n)?;
        let delta_alpha: Vec<f64> = alpha_n
            .iter()
            .zip(alpha_m.iter())
            .map(|(an, am)| an - am)
            .collect();
        let delta_beta: Vec<f64> = beta_n
            .iter()
            .zip(beta_m.iter())
            .map(|(bn, bm)| bn - bm)
            .collect();
        let theta: Vec<f64> = (0..total)
            .map(|k| delta_alpha[k] + delta_beta[k] + gamma[k])
            .collect();
        let theta_dot = centered_derivative(&self.ts, &theta)?;

        Ok(PairPhase {
            m,
            n,
            coupling: a,
            abs_a,
            gamma,
            delta_alpha,
            delta_beta,
            theta,
            theta_dot,
            interpolated,
            sign_folds,
            amp_floor,
        })
    }

    /// Phase bookkeeping for every unordered level pair `(m < n)`.
    ///
    /// Errors if any pair's coupling amplitude is below the floor on more
    /// than a tenth of the nodes ([`Error::PhaseUndefined`]) — callers that
    /// can tolerate undefined pairs should call
    /// [`SpectralFlow::pair_phase`] per pair instead.
    pub fn phase_ledger(&self) -> Result<PhaseLedger> {
        let mut pairs = Vec::new();
        for m in 0..self.dim() {
            for n in (m + 1)..self.dim() {
                pairs.push(self.pair_phase(m, n)?);
            }
        }
        Ok(PhaseLedger { pairs })
    }

    /// Multiply every eigenvector by an independent random phase and return
    /// the scrambled flow together with the phases used,
    /// `phases[node][level]`.
    ///
    /// The result deliberately satisfies no gauge convention; it exists to
    /// demonstrate (and property-test) that every reported quantity is
    /// invariant under exactly this reassignment.
    pub fn reassign_phases(&self, seed: u64) -> (SpectralFlow, Vec<Vec<f64>>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut scrambled = self.clone();
        let mut phases = Vec::with_capacity(self.frames.len());
        for frame in &mut scrambled.frames {
            let mut row = Vec::with_capacity(self.dim());
            for n in 0..frame.eigenvectors.len() {
                let phi: f64 = rng.gen_range(0.0..(2.0 * std::f64::consts::PI));
                frame.eigenvectors[n] =
                    frame.eigenvectors[n].scaled(Complex64::new(0.0, phi).exp());
                row.push(phi);
            }
            phases.push(row);
        }
        (scrambled, phases)
    }
}

/// Index of the largest-magnitude component.
fn argmax_component(v: &StateVector) -> usize {
    let mut best = 0;
    let mut best_mag = -1.0;
    for i in 0..v.dim() {
        let mag = v.get(i).norm();
        if mag > best_mag {
            best_mag = mag;
            best = i;
        }
    }
    best
}

/// Rotate `v` so component `anchor` is real and non-negative.
fn fix_anchor_phase(v: &mut StateVector, anchor: usize) {
    let z = v.get(anchor);
    let mag = z.norm();
    if mag > 0.0 {
        *v = v.scaled(z.conj() / mag);
    }
}

/// Phase bookkeeping for one level pair along the flow.
///
/// The coupling factors as `A = |A| e^{-i gamma}` with `gamma` unwrapped
/// (half-turn jumps folded into the envelope sign); the total relative
/// phase is `theta = (alpha_n - alpha_m) + (beta_n - beta_m) + gamma`, whose
/// time derivative `theta_dot` is the frequency that beats the coupling
/// envelope in the exact condition integral. For real Hamiltonians
/// `theta_dot` reduces to the energy gap `E_n - E_m`.
#[derive(Debug, Clone)]
pub struct PairPhase {
    /// Bra level.
    pub m: usize,
    /// Ket level.
    pub n: usize,
    /// Complex coupling `A_mn` at every node.
    pub coupling: Vec<C64>,
    /// Coupling magnitude at every node.
    pub abs_a: Vec<f64>,
    /// Unwrapped coupling phase (`A = |A| e^{-i gamma}`), folds removed.
    pub gamma: Vec<f64>,
    /// Dynamic phase difference `alpha_n - alpha_m`.
    pub delta_alpha: Vec<f64>,
    /// Geometric phase difference `beta_n - beta_m`.
    pub delta_beta: Vec<f64>,
    /// Total relative phase `delta_alpha + delta_beta + gamma`.
    pub theta: Vec<f64>,
    /// Numerical derivative of `theta`.
    pub theta_dot: Vec<f64>,
    /// Marks nodes whose `gamma` was interpolated because the coupling
    /// amplitude sat below the floor there.
    pub interpolated: Vec<bool>,
    /// Nodes where a half-turn fold (envelope sign change) was applied.
    pub sign_folds: Vec<usize>,
    /// Amplitude floor used: `1e-12 * max |A|`.
    pub amp_floor: f64,
}

impl PairPhase {
    /// Largest coupling magnitude on the track.
    pub fn max_abs_a(&self) -> f64 {
        self.abs_a.iter().copied().fold(0.0, f64::max)
    }

    /// Fraction of nodes with interpolated phase.
    pub fn interpolated_fraction(&self) -> f64 {
        self.interpolated.iter().filter(|&&b| b).count() as f64
            / self.interpolated.len() as f64
    }
}

/// Phase bookkeeping for all unordered level pairs.
#[derive(Debug, Clone)]
pub struct PhaseLedger {
    /// Pairs in lexicographic order: (0,1), (0,2), ..., (1,2), ...
    pub pairs: Vec<PairPhase>,
}

impl PhaseLedger {
    /// Look up the pair `(m, n)` (either order).
    pub fn pair(&self, m: usize, n: usize) -> Option<&PairPhase> {
        let (lo, hi) = if m < n { (m, n) } else { (n, m) };
        self.pairs.iter().find(|p| p.m == lo && p.n == hi)
    }
}
