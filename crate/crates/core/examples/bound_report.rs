//! Per-pair entanglement-time bounds for a scenario file.
//!
//! ```text
//! cargo run --example bound_report -- crates/core/scenarios/three_labels.json
//! ```

use std::path::PathBuf;

use oracle_qsl::bounds::tau_ent;
use oracle_qsl::scenario::load_scenario;
use oracle_qsl::search::{annotate_report, SearchSettings};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios/three_labels.json")
        });
    let loaded = load_scenario(&path)?;
    let s = &loaded.scenario;

    let mut report = tau_ent(s)?;
    annotate_report(&mut report, s, &SearchSettings::default())?;

    println!(
        "{:<8} {:>8} {:>8} {:>12} {:>12} {:>12}",
        "pair", "Δa", "α", "tau_pair", "floor", "tau_hat"
    );
    for r in &report.pairs {
        let show = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.7}"));
        println!(
            "{:<8} {:>8.4} {:>8} {:>12} {:>12} {:>12}",
            format!("{}|{}", r.pair[0], r.pair[1]),
            r.delta_a,
            r.alpha_used.map_or("-".into(), |a| format!("{a:.3}")),
            show(r.tau_pair),
            show(r.floor22),
            show(r.tau_hat),
        );
    }
    println!("tau_ent = {:.7}", report.tau_ent);
    let e = report.energy;
    println!(
        "<A> = {:.4}  B1 = {:.4}  B2 = {:.4}  kappa = {:.4}",
        e.mean_a, e.b1, e.b2, e.kappa
    );
    println!(
        "<H_int> = {:.3e}  ΔH_int = {:.4}",
        e.h_int_mean, e.h_int_spread
    );
    Ok(())
}
