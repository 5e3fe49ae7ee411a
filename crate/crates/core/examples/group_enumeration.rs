//! Breadth-first enumeration of SL_2(F_p) and SL_3(F_2), with word-length
//! layers and a cycle-type census.

use cayley_sieve::group::{elementary_generators, sanov, sl_table, DEFAULT_CAP};
use cayley_sieve::sieve::cycle_type_census;

fn main() -> cayley_sieve::Result<()> {
    for p in [5, 7, 11] {
        let (table, _) = sl_table(&sanov(), p, DEFAULT_CAP)?;
        println!("SL_2(F_{p}): order {}, diameter {}", table.order(), table.diameter());
    }
    let (t, _) = sl_table(&elementary_generators(3)?, 2, DEFAULT_CAP)?;
    println!("SL_3(F_2): order {}, diameter {}", t.order(), t.diameter());

    let census = cycle_type_census(7, 2, DEFAULT_CAP)?;
    println!("\ncycle types in SL_2(F_7):");
    for (ty, count) in &census.by_type {
        println!("  {ty:<8} {count}/{}", census.order);
    }
    println!("  other    {}/{}", census.not_regular_semisimple, census.order);
    Ok(())
}
