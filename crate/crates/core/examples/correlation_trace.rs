//! Samples `D(t)` and `z(t)` for the symmetric two-branch oracle and checks
//! them against the brute-force composite state.

use std::f64::consts::PI;

use oracle_qsl::amplitude::{brute_force_state, contract_branches, trace, uniform_grid};
use oracle_qsl::report::trace_csv;
use oracle_qsl::scenario::load_scenario;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/three_level.json");
    let s = load_scenario(&path)?.scenario;
    let pair = s.pairs()[0];
    let times = uniform_grid(2.0 * PI, 17);
    let tr = trace(&s, pair, &times)?;
    print!("{}", trace_csv(&tr, None, true));

    let mut worst: f64 = 0.0;
    for (&t, d) in times.iter().zip(&tr.values) {
        let state = brute_force_state(&s, t)?;
        let brute = contract_branches(&state, &s, pair).expect("both branches populated");
        worst = worst.max((brute - d).norm());
    }
    eprintln!("max |D - D_brute| = {worst:.2e}");
    Ok(())
}
