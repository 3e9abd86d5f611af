//! Load a bundled scenario file, run the full pipeline, and emit the
//! JSON report plus CSV series — the library side of the `adicheck run`
//! command.
//!
//! Run with:
//! ```bash
//! cargo run --example scenario_report
//! ```

use std::path::Path;

use adicheck::report::{externalize_series, run_scenario, to_json_string, write_report};
use adicheck::scenario::load_scenario;

fn main() -> adicheck::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("scenarios/rotating_spin_resonant.json");
    let scenario = load_scenario(&path)?;
    println!(
        "loaded {}: {} model, T = {:.4}, epsilon = {}",
        path.display(),
        scenario.model.kind,
        scenario.t_total,
        scenario.epsilon
    );

    let mut report = run_scenario(&scenario)?;
    let conditions = report.conditions.as_ref().expect("flow succeeded");
    println!("\nverdict: {:?}", conditions.verdict);
    println!("g_max = {:.6}, bound4 = {:.6}", conditions.g_max, conditions.bound4);
    for d in &report.deviation {
        println!(
            "start {}: typed drift {:.6}, final populations {:?}",
            d.initial,
            d.max_coeff_drift,
            d.final_coeff_mods
                .iter()
                .map(|m| (m * m * 1e4).round() / 1e4)
                .collect::<Vec<_>>(),
        );
    }

    // Write the report and externalize the requested series to CSV.
    let out_dir = std::env::temp_dir().join("adicheck_example_report");
    externalize_series(&mut report, &out_dir)?;
    let report_path = out_dir.join("report.json");
    write_report(&report, &report_path)?;
    println!("\nreport written to {}", report_path.display());
    for (name, value) in &report.series {
        println!("  series {name}: {}", value.as_str().unwrap_or("<inline>"));
    }

    // The serialized form round-trips bit-exactly; show a taste of it.
    let text = to_json_string(&report)?;
    let head: String = text.lines().take(12).collect::<Vec<_>>().join("\n");
    println!("\nreport head:\n{head}\n  ...");
    Ok(())
}
