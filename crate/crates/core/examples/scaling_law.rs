//! `tau ∝ 1/Δa`: log-log fit over eight values of the input-eigenvalue gap.

use oracle_qsl::report::sweep_csv;
use oracle_qsl::scenario::load_scenario;
use oracle_qsl::sweep::{fit_rows, run_sweep, Axis, SweepSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("scenarios/symmetric_two_branch.json");
    let base = load_scenario(&path)?.scenario;
    // 8 log-spaced points in [0.5, 8]
    let values: Vec<f64> = (0..8).map(|k| 0.5 * 16f64.powf(k as f64 / 7.0)).collect();
    let rows = run_sweep(&SweepSpec::new(base, Axis::DeltaA, values))?;
    print!("{}", sweep_csv(&rows));

    for col in ["tau_hat", "tau_pair"] {
        let fit = fit_rows(&rows, "value", col)?;
        println!(
            "{col}: slope {:.6}, intercept {:.6}, r² {:.9}",
            fit.slope, fit.intercept, fit.r2
        );
    }
    Ok(())
}
