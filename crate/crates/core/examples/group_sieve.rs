//! The group sieve: how fast a walk leaves the set of elements whose
//! characteristic polynomial splits modulo every prime of a battery.

use cayley_sieve::group::{sanov, DEFAULT_CAP};
use cayley_sieve::sieve::{prime_tables, select_primes, sieve_run, TargetKind, TargetPredicate};
use cayley_sieve::walk::WalkSampler;

fn main() -> cayley_sieve::Result<()> {
    let battery = select_primes(8, 1, 3, 1000)?;
    let tables = prime_tables(&sanov(), &battery, DEFAULT_CAP)?;
    let target = TargetPredicate::build(TargetKind::MissingCycleType { partition: vec![2] }, &tables)?;
    let sampler = WalkSampler::new(sanov(), &battery.primes, 11)?;
    let schedule: Vec<usize> = (0..=32).step_by(4).collect();
    let r = sieve_run(&sampler, &target, &battery, &schedule, 100_000, 1.0)?;
    println!("battery {:?}, alpha_min = {:.4}", r.battery, r.alpha_min);
    for (i, n) in r.n_schedule.iter().enumerate() {
        println!(
            "n = {n:>2}: {:.5} [{:.5}, {:.5}]",
            r.estimate[i], r.ci_lo[i], r.ci_hi[i]
        );
    }
    if let Some(f) = r.fit {
        println!(
            "decay rate {:.4} (r^2 = {:.4}); first n below 1/N: {:?}",
            f.c, f.r_squared, r.first_below_bound
        );
    }
    Ok(())
}
