//! Construct every Hamiltonian model kind and evaluate it in time.
//!
//! Run with:
//! ```bash
//! cargo run --example hamiltonians
//! ```

use std::path::Path;

use adicheck::matrix::ComplexMatrix;
use adicheck::model::{load_tabulated, HamiltonianModel};

fn describe(name: &str, model: &HamiltonianModel, t: f64) -> adicheck::Result<()> {
    let h = model.eval_h(t)?;
    let dh = model.eval_dh(t)?;
    println!(
        "{name}: dim {}, |H({t})| = {:.6}, |dH/dt({t})| = {:.6}, hermiticity defect {:.2e}",
        model.dim(),
        h.max_abs(),
        dh.max_abs(),
        h.hermitian_defect(),
    );
    Ok(())
}

fn main() -> adicheck::Result<()> {
    // Constant: nothing moves, the adiabatic approximation is exact.
    let constant = HamiltonianModel::constant(ComplexMatrix::from_re_im(
        &[vec![0.0, 0.2], vec![0.2, 1.0]],
        None,
    )?)?;
    describe("constant            ", &constant, 3.0)?;

    // Precessing spin: a two-level system driven around a cone of polar
    // angle theta at frequency omega. The workhorse counterexample.
    let spin = HamiltonianModel::rotating_spin(1.0, 0.1, 0.995)?;
    describe("rotating_spin       ", &spin, 3.0)?;

    // Avoided crossing: diabatic energies sweep through each other at
    // rate v with fixed coupling delta.
    let crossing = HamiltonianModel::landau_zener(1.0, 0.5, 10.0)?;
    describe("landau_zener        ", &crossing, 10.0)?;

    // Straight-line ramp between two endpoint Hamiltonians over [0, T].
    let ramp = HamiltonianModel::linear_interpolation(
        ComplexMatrix::from_re_im(&[vec![0.0, 0.4], vec![0.4, 1.0]], None)?,
        ComplexMatrix::from_re_im(&[vec![1.0, 0.2], vec![0.2, -0.5]], None)?,
        20.0,
    )?;
    describe("linear_interpolation", &ramp, 10.0)?;

    // Tabulated: Hermitian samples on a time grid, splined per entry,
    // loaded from a JSON file.
    let samples = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("scenarios/rotating_basis_samples.json");
    let tabulated = load_tabulated(&samples)?;
    describe("tabulated           ", &tabulated, 3.0)?;
    if let HamiltonianModel::Tabulated(inner) = &tabulated {
        let (t_min, t_max) = inner.domain();
        println!("  tabulated domain: [{t_min:.3}, {t_max:.3}]");
    }

    // Eigenvalues along the ramp, watching the gap evolve.
    println!("\nlinear ramp spectrum:");
    for k in 0..=4 {
        let t = 5.0 * k as f64;
        let frame = adicheck::matrix::hermitian_eig(&ramp.eval_h(t)?, t)?;
        println!(
            "  t = {t:5.1}: E = [{:+.6}, {:+.6}], gap {:.6}",
            frame.eigenvalues[0],
            frame.eigenvalues[1],
            frame.min_gap()
        );
    }
    Ok(())
}
