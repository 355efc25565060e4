//! Schmidt spectrum of an oracle's composite state over time. The label
//! populations never move, so the entanglement is persistent.

use oracle_qsl::amplitude::uniform_grid;
use oracle_qsl::report::snapshot_csv;
use oracle_qsl::scenario::load_scenario;
use oracle_qsl::schmidt::{classify_on_labels, schmidt_trace};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/three_labels.json");
    let s = load_scenario(&path)?.scenario;
    let snaps = schmidt_trace(&s, &uniform_grid(8.0, 17))?;
    print!("{}", snapshot_csv(&snaps));
    let p = classify_on_labels(&snaps);
    println!(
        "# persistent: {} (min fidelity {:.12})",
        p.persistent, p.min_pointer_fidelity
    );
    Ok(())
}
