//! A two-term interaction `Σ_k C_k A_k ⊗ B_k` reduces to a single effective
//! frequency set.

use oracle_qsl::bounds::{generalized_tau_pair, PairBound};
use oracle_qsl::scenario::load_scenario;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/two_terms.json");
    let s = load_scenario(&path)?.scenario;
    let pair = s.pairs()[0];
    println!("frequencies {:?}", s.pair_frequencies(pair));
    match generalized_tau_pair(&s, pair)? {
        PairBound::Bounded {
            tau,
            orientation,
            alpha_used,
        } => {
            println!("tau = {tau:.7} ({orientation:?}, α = {alpha_used})")
        }
        PairBound::Unreachable => println!("orthogonality unreachable"),
    }
    Ok(())
}
