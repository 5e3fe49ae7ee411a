//! Product sets, tripling, covering constant and energy of subsets of
//! SL_2(F_13).

use cayley_sieve::approx::{approx_report, growth_scan, FiniteSubset};
use cayley_sieve::group::{sanov, sl_table, standard_subgroup, SubgroupKind, DEFAULT_CAP};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> cayley_sieve::Result<()> {
    let (table, _) = sl_table(&sanov(), 13, DEFAULT_CAP)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let borel = FiniteSubset::from_set(&table, standard_subgroup(&table, &SubgroupKind::Borel)?);
    let random = FiniteSubset::random_symmetric(&table, 40, &mut rng)?;
    let padded = borel.union(&FiniteSubset::random_symmetric(&table, 6, &mut rng)?)?;
    for (name, a) in [("borel", &borel), ("random", &random), ("borel + 6", &padded)] {
        let r = approx_report(a)?;
        let g = growth_scan(a, 4)?;
        println!(
            "{name:<10} |A| = {:>4}  |AA| = {:>4}  |AAA| = {:>4}  K = {:>3}  tripling = {:>7.3}  E = {}  sizes {:?}",
            r.size_a, r.size_aa, r.size_aaa, r.k_hat, r.tripling, r.energy, g.sizes
        );
    }
    Ok(())
}
