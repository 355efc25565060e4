//! Margolus–Levitin and spread-in-energy times apply to the whole state; the
//! branch bound applies to the output register alone.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use oracle_qsl::bounds::{ml_bound, mt_bound, tau_ent};
use oracle_qsl::search::{first_full_orthogonality, SearchSettings};
use oracle_qsl::sweep::random_symmetric_scenario;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let settings = SearchSettings::with_epsilon(1e-6);
    println!(
        "{:>10} {:>10} {:>10} {:>12}",
        "tau_ent", "ML", "MT", "full tau_hat"
    );
    for _ in 0..8 {
        let s = random_symmetric_scenario(&mut rng);
        let full = first_full_orthogonality(&s, &settings)?;
        println!(
            "{:>10.5} {:>10.5} {:>10.5} {:>12}",
            tau_ent(&s)?.tau_ent,
            ml_bound(&s),
            mt_bound(&s),
            full.tau_hat.map_or("-".into(), |t| format!("{t:.5}"))
        );
    }
    Ok(())
}
