//! Randomized soundness check of the tolerance-adjusted bound.
//!
//! ```text
//! cargo run --release --example verify_campaign -- 42 200
//! ```

use oracle_qsl::sweep::random_campaign;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let seed: u64 = args.next().map_or(Ok(42), |s| s.parse())?;
    let n: usize = args.next().map_or(Ok(200), |s| s.parse())?;

    let start = std::time::Instant::now();
    let stats = random_campaign(seed, n, 1e-3)?;
    println!(
        "seed {seed}: {} scenarios, {} pairs checked",
        stats.scenarios, stats.checked
    );
    println!("  reachable   {}", stats.reachable);
    println!("  unreachable {}", stats.unreachable);
    println!("  violations  {}", stats.violations);
    if let Some(m) = stats.min_margin {
        println!("  tightest margin tau_hat - bound = {m:.3e}");
    }
    println!("  {:.2?}", start.elapsed());
    if stats.violations > 0 {
        std::process::exit(4);
    }
    Ok(())
}
