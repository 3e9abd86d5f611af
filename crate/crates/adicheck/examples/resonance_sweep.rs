//! Sweep the drive frequency across the resonance and watch each
//! condition respond — or fail to.
//!
//! Run with:
//! ```bash
//! cargo run --example resonance_sweep
//! ```

use adicheck::report::sweep;
use adicheck::scenario::Scenario;

fn main() -> adicheck::Result<()> {
    let scenario: Scenario = serde_json::from_str(
        r#"{
            "model": {"kind": "rotating_spin",
                      "params": {"omega0": 1.0, "theta": 0.1, "omega": 0.5}},
            "T": 31.468347564458576,
            "epsilon": 0.05,
            "steps": 1500,
            "initial": {"basis_level": 0}
        }"#,
    )
    .expect("inline scenario is valid JSON");
    scenario.validate()?;

    // The resonance sits at omega = omega0 cos(theta) ~ 0.995.
    let values = [0.2, 0.5, 0.8, 0.9, 0.995, 1.1, 1.3];
    let table = sweep(&scenario, "omega", &values)?;

    println!("omega sweep of the precessing spin (resonance at ~0.995):");
    println!(
        "{:>7} {:>10} {:>10} {:>12} {:>10}",
        "omega", "g_max", "trad_max", "ratio6_max", "drift"
    );
    for row in &table.rows {
        println!(
            "{:7.3} {:10.4} {:10.4} {:12.4} {:10.4}",
            row.value,
            row.g_max.unwrap_or(f64::NAN),
            row.traditional_max.unwrap_or(f64::NAN),
            row.ratio6_max.unwrap_or(f64::NAN),
            row.max_coeff_drift.unwrap_or(f64::NAN),
        );
    }

    println!(
        "\nthe drift column peaks at the resonance while the traditional\n\
         ratio stays near 0.05 throughout: gap-based reasoning alone cannot\n\
         see this failure, the exact integral (g_max) tracks it faithfully."
    );
    Ok(())
}
