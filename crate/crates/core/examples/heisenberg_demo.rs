//! `J S₁·S₂` does not commute with the single-spin terms; starting from
//! `|→↑⟩` the Schmidt basis rotates and the entanglement is nonpersistent.

use std::f64::consts::PI;

use oracle_qsl::amplitude::uniform_grid;
use oracle_qsl::report::snapshot_csv;
use oracle_qsl::schmidt::heisenberg::{heisenberg_demo, Initial};

fn main() {
    for initial in [Initial::UpDown, Initial::PlusUp] {
        let demo = heisenberg_demo(&uniform_grid(2.0 * PI, 9), initial);
        println!("# {initial:?}");
        print!("{}", snapshot_csv(&demo.snapshots));
        let p = demo.persistence;
        println!(
            "# persistent: {}  min fidelity {:.6} at K = {:.4}",
            p.persistent, p.min_pointer_fidelity, p.worst_time
        );
    }
}
