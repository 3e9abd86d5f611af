//! `adicheck` — quantitative validity checks for the quantum adiabatic
//! approximation.
//!
//! Given a time-dependent Hamiltonian `H(t)` on `[0, T]` and an error budget
//! `epsilon`, this crate decides whether the adiabatic approximation holds by
//! evaluating the exact condition integral for every level pair, two
//! sufficient upper bounds, the qualitative ratio criteria, and — as an
//! independent cross-check — the deviation of exact numerical propagation
//! from the adiabatic prediction.
//!
//! The primary interface is the `examples/` directory: one runnable program
//! per capability, ordered from building blocks to full studies.
//!
//! ## Directory Structure
//!
//! ```text
//! examples/
//! ├── eigensolver.rs          # Hermitian eigendecomposition sanity checks
//! ├── hamiltonians.rs         # Built-in and tabulated Hamiltonian models
//! ├── spectral_flow.rs        # Phase tracks, couplings, gauge invariance
//! ├── validity_conditions.rs  # Exact integral, bounds, and verdicts
//! ├── landau_zener.rs         # Avoided-crossing transfer study
//! ├── resonance_sweep.rs      # Parameter sweep across a resonance
//! ├── scenario_report.rs      # JSON scenarios in, JSON/CSV reports out
//! └── adiabatic_deviation.rs  # Exact propagation vs adiabatic prediction
//! ```
//!
//! ## Building Blocks
//!
//! Start here to see the numerical foundations:
//!
//! - **`eigensolver`** - Eigenvalues/eigenvectors of Hermitian matrices,
//!   residual and orthonormality checks
//! - **`hamiltonians`** - Construct every model kind (constant, rotating
//!   spin, Landau-Zener, linear interpolation, tabulated) and inspect
//!   spectra and derivatives
//! - **`spectral_flow`** - Dynamic and geometric phase tracks, coupling
//!   envelopes, and invariance under random eigenvector phase reassignment
//!
//! ```bash
//! cargo run --release --example eigensolver
//! cargo run --release --example hamiltonians
//! cargo run --release --example spectral_flow
//! ```
//!
//! ## Validity Analysis
//!
//! The core question — does the adiabatic approximation hold?
//!
//! - **`validity_conditions`** - Evaluate the exact condition integral and
//!   both sufficient bounds for an off-resonant and a resonant drive; the
//!   verdicts differ even though the traditional gap ratio cannot tell the
//!   two cases apart
//! - **`landau_zener`** - The classic avoided crossing: conditions, exact
//!   transfer probability against the asymptotic formula, and a sweep-rate
//!   study
//!
//! ```bash
//! cargo run --release --example validity_conditions
//! cargo run --release --example landau_zener
//! ```
//!
//! ## Studies and Reports
//!
//! - **`resonance_sweep`** - Sweep the drive frequency through resonance and
//!   watch the exact integral track the true failure while the traditional
//!   ratio stays flat
//! - **`scenario_report`** - Load a JSON scenario file, run the full
//!   pipeline, and externalize time series to CSV
//! - **`adiabatic_deviation`** - Propagate the Schrödinger equation with two
//!   independent integrators, compare against the adiabatic prediction, and
//!   verify the `1/T` convergence of the deviation
//!
//! ```bash
//! cargo run --release --example resonance_sweep
//! cargo run --release --example scenario_report
//! cargo run --release --example adiabatic_deviation
//! ```
//!
//! ## Command Line
//!
//! The same pipeline is available as a thin binary:
//!
//! ```bash
//! cargo run --release -- run scenarios/rotating_spin_resonant.json --out report.json
//! cargo run --release -- sweep scenarios/rotating_spin_resonant.json \
//!     --param omega --values 0.8,0.9,0.995,1.1 --out sweep.csv
//! cargo run --release -- validate scenarios/landau_zener.json
//! ```

pub mod conditions;
pub mod error;
pub mod flow;
pub mod matrix;
pub mod model;
pub mod numeric;
pub mod propagate;
pub mod report;
pub mod scenario;
pub mod spline;

pub use error::{Error, Result};
pub use matrix::{C64, ComplexMatrix, EigenFrame, StateVector};
