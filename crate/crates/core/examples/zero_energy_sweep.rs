//! Entanglement gets faster while the mean interaction energy stays at zero;
//! unbalancing the prior moves `<H_int>` off zero and slows it down.

use oracle_qsl::report::sweep_csv;
use oracle_qsl::scenario::load_scenario;
use oracle_qsl::sweep::{run_sweep, Axis, SweepSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("scenarios/symmetric_two_branch.json");
    let base = load_scenario(&path)?.scenario;

    println!("# branch scale s, p = (1/2, 1/2)");
    let rows = run_sweep(&SweepSpec::new(
        base.clone(),
        Axis::BranchScaleS,
        vec![1.0, 2.0, 4.0, 8.0],
    ))?;
    print!("{}", sweep_csv(&rows));

    println!("# prior ratio kappa on (+1, -1)");
    let kappas = vec![0.125, 0.25, 0.5, 0.8, 1.0, 1.25, 2.0, 4.0, 8.0];
    let rows = run_sweep(&SweepSpec::new(base, Axis::PriorKappa, kappas))?;
    print!("{}", sweep_csv(&rows));
    Ok(())
}
