//! Exact densities of m-th powers and of cycle types, by enumeration.

use cayley_sieve::group::DEFAULT_CAP;
use cayley_sieve::sieve::{cycle_type_density, m_power_density};

fn main() -> cayley_sieve::Result<()> {
    for p in [5, 7, 13] {
        let squares = m_power_density(p, 2, 2, DEFAULT_CAP)?;
        let cubes = m_power_density(p, 3, 2, DEFAULT_CAP)?;
        println!("SL_2(F_{p}): squares {squares}, cubes {cubes}");
    }
    for p in [5, 7, 11] {
        println!(
            "SL_2(F_{p}): split {}, irreducible {}",
            cycle_type_density(p, &[1, 1], 2, DEFAULT_CAP)?,
            cycle_type_density(p, &[2], 2, DEFAULT_CAP)?
        );
    }
    println!("SL_3(F_5): cubes {}", m_power_density(5, 3, 3, DEFAULT_CAP)?);
    Ok(())
}
