//! Exact return probabilities of the simple random walk on a free group and
//! their approach to the Kesten spectral radius.

use cayley_sieve::walk::{free_group_return_oracle, kesten_radius, root_sequence};

fn main() -> cayley_sieve::Result<()> {
    let r = free_group_return_oracle(2, 10)?;
    println!("F_2: mu^10(e) = {} = {:.6e}", r.probability, r.value);
    let roots = root_sequence(2, 15)?;
    for (m, x) in roots.iter().enumerate().step_by(2) {
        println!("2n = {:>2}: mu^2n(e)^(1/2n) = {x:.5}", 2 * (m + 1));
    }
    println!("Kesten radius sqrt(3)/2 = {:.5}", kesten_radius(2));
    Ok(())
}
