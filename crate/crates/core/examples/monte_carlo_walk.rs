//! Monte Carlo walk on the Sanov group, tracked modulo two primes at once,
//! with Wilson intervals and a decay fit for each target.

use cayley_sieve::group::{sanov, SubgroupKind};
use cayley_sieve::walk::{monte_carlo_walk, nonconcentration_fit, Target, WalkSampler};

fn main() -> cayley_sieve::Result<()> {
    let sampler = WalkSampler::new(sanov(), &[13, 31], 42)?;
    let targets = [
        Target::identity(13),
        Target::subgroup(31, SubgroupKind::Borel),
        Target::trace_value(31, 2),
    ];
    let schedule: Vec<usize> = (2..=24).step_by(2).collect();
    let stats = monte_carlo_walk(&sampler, &schedule, 100_000, &targets)?;
    for (i, t) in stats.targets.iter().enumerate() {
        println!("{} mod {}", t.name, t.prime);
        for (k, n) in stats.n_schedule.iter().enumerate() {
            println!(
                "  n = {n:>2}: {:.5} [{:.5}, {:.5}]",
                t.frequency[k], t.ci_lo[k], t.ci_hi[k]
            );
        }
        match nonconcentration_fit(&stats, i) {
            Ok(f) => println!(
                "  fit: c = {:.4}, r^2 = {:.3} over n in {:?}",
                f.c, f.r_squared, f.window
            ),
            Err(e) => println!("  no fit: {e}"),
        }
    }
    Ok(())
}
