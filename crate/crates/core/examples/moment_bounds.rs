//! Tail inequalities on an empirical distribution, and the pairwise
//! independence bound against planted correlated events.

use cayley_sieve::sieve::{moment_check, pairwise_bound, PlantedEvents};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> cayley_sieve::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let xs: Vec<f64> = (0..1000).map(|_| rng.random_range(0.0..1.0f64).powi(4)).collect();
    for t in [1.5, 2.0, 4.0] {
        println!("T = {t}: {:?}", moment_check(&xs, t)?);
    }
    for ev in [
        PlantedEvents {
            n: 20,
            c: 0.1,
            q0: 0.5,
            q1: 0.9,
        },
        PlantedEvents {
            n: 50,
            c: 0.5,
            q0: 0.3,
            q1: 0.4,
        },
    ] {
        let bound = pairwise_bound(ev.omega(), ev.delta(), ev.n)?;
        println!(
            "N = {}: exact {:.3e}, simulated {:.3e}, bound {bound:.3e}",
            ev.n,
            ev.intersection(),
            ev.simulate(20_000, &mut rng)
        );
    }
    Ok(())
}
