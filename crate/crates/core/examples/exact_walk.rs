//! Exact convolution powers of the step distribution: return probability,
//! mass on the Borel subgroup and distance from uniform.

use cayley_sieve::group::{sanov, sl_table, standard_subgroup, SubgroupKind, DEFAULT_CAP};
use cayley_sieve::walk::{equidistribution_test, return_probability, subgroup_mass};

fn main() -> cayley_sieve::Result<()> {
    let (table, gens) = sl_table(&sanov().lazy(true), 11, DEFAULT_CAP)?;
    let borel = standard_subgroup(&table, &SubgroupKind::Borel)?;
    let mass = subgroup_mass(&table, &gens, &borel, 40)?;
    println!(
        "lazy walk on SL_2(F_11), |B|/|G| = {:.5}",
        borel.len() as f64 / table.order() as f64
    );
    println!("{:>4} {:>12} {:>12} {:>12}", "n", "mu^n(1)", "mu^n(B)", "sup dev");
    for n in (0..=40).step_by(5) {
        let r = return_probability(&table, &gens, n)?;
        let eq = equidistribution_test(&table, &gens, n, None)?;
        println!("{n:>4} {:>12.4e} {:>12.6} {:>12.4e}", r.direct, mass[n], eq.deviation);
    }
    Ok(())
}
