//! A Gaussian switching pulse: only the accumulated coupling `G(t)` matters.

use std::f64::consts::PI;

use oracle_qsl::bounds::tau_ent;
use oracle_qsl::drive::{
    accumulate, driven_overlap_d, effective_time, heisenberg_equivalence_check, DriveProfile,
};
use oracle_qsl::scenario::load_scenario;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path =
        std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/gaussian_pulse.json");
    let s = load_scenario(&path)?.scenario;
    let profile = s.coupling().profile.clone();
    let pair = s.pairs()[0];

    let exact = profile.exact_integral(10.0);
    for n in [20, 50, 100, 200] {
        let g = accumulate(&profile, 10.0, n)?.g;
        println!(
            "panels {n:>3}: G(10) = {g:.15}  error {:.2e}",
            (g - exact).abs()
        );
    }

    // cos G: the overlap vanishes once G = π/2
    let t_half = effective_time(&profile, PI / 2.0, 200)?.expect("pulse area exceeds π/2");
    let d = driven_overlap_d(&s, pair, t_half, &profile, 200)?;
    println!("G(t) = π/2 at t = {t_half:.9}, |D| = {:.2e}", d.norm());

    let tau = tau_ent(&s)?.tau_ent;
    let wall = effective_time(&profile, tau, 200)?;
    println!("constant-coupling bound {tau:.7} → wall clock {:?}", wall);

    // scale J so that K(10) = π/2
    let amplitude = PI / 2.0 / exact;
    let dev = heisenberg_equivalence_check(amplitude, &profile, 10.0, 200)?;
    println!("Heisenberg equivalence deviation {dev:.2e}");

    let jump = DriveProfile::Table {
        knots: vec![(1.0, 1.0), (4.0, 1.0)],
    };
    println!(
        "sudden switch-on: deviation {:.2e}",
        heisenberg_equivalence_check(0.5, &jump, 3.0, 200)?
    );
    Ok(())
}
