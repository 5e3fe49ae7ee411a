//! Which reductions of a generating set are onto SL_2(F_p).

use cayley_sieve::group::{io, is_prime, sanov, DEFAULT_CAP};
use cayley_sieve::walk::{strong_approx_scan, ScanOutcome};

fn main() -> cayley_sieve::Result<()> {
    let primes: Vec<u64> = (2..=43).filter(|&p| is_prime(p)).collect();
    // a generator with denominator 3 is undefined mod 3
    let fractional = io::parse_generators(r#"[[["1", "1/3"], ["0", "1"]], [[1, 0], [3, 1]]]"#)?;
    for (name, gens) in [("sanov", sanov()), ("fractional", fractional)] {
        println!("{name}:");
        for e in strong_approx_scan(&gens, &primes, DEFAULT_CAP)? {
            let what = match e.outcome {
                ScanOutcome::Surjective => "onto".to_string(),
                ScanOutcome::Proper { order } => format!("proper, image of order {order}"),
                ScanOutcome::Skipped { reason } => format!("skipped: {reason}"),
            };
            println!("  p = {:>2}: {what}", e.p);
        }
    }
    Ok(())
}
