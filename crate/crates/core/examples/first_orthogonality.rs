//! Earliest time the branch overlap drops below ε, against the bound.

use oracle_qsl::bounds::{generalized_tau_pair, ml_bound, mt_bound};
use oracle_qsl::scenario::load_scenario;
use oracle_qsl::search::{first_full_orthogonality, first_orthogonality, SearchSettings};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("scenarios/symmetric_two_branch.json");
    let s = load_scenario(&path)?.scenario;
    let pair = s.pairs()[0];
    let bound = generalized_tau_pair(&s, pair)?.tau();

    for eps in [1e-1, 1e-2, 1e-3, 1e-6] {
        let r = first_orthogonality(&s, pair, &SearchSettings::with_epsilon(eps))?;
        let t = r.tau_hat.expect("cos t reaches every ε");
        println!(
            "ε = {eps:<6e}  tau_hat = {t:.9}  arccos ε = {:.9}  bound = {bound:.7}",
            eps.acos()
        );
    }

    let full = first_full_orthogonality(&s, &SearchSettings::with_epsilon(1e-6))?;
    println!(
        "whole state: tau_hat = {:.6}  ML = {:.6}  MT = {:.6}",
        full.tau_hat.unwrap_or(f64::NAN),
        ml_bound(&s),
        mt_bound(&s)
    );
    Ok(())
}
