//! Intersections of SL_2(F_p) and of a random set with low-dimensional
//! varieties, normalised by |A|^(dim V / dim G).

use cayley_sieve::approx::{larsen_pink_ratio, FiniteSubset, Variety};
use cayley_sieve::group::{sanov, sl_table, DEFAULT_CAP};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> cayley_sieve::Result<()> {
    let varieties = [
        (Variety::Diagonal, 1),
        (Variety::UpperUnipotent, 1),
        (Variety::Unipotent, 2),
        (Variety::TraceValue(0), 2),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for p in [7, 13, 31] {
        let (table, _) = sl_table(&sanov(), p, DEFAULT_CAP)?;
        let whole = FiniteSubset::whole(&table);
        let random = FiniteSubset::random_symmetric(&table, table.order() / 10, &mut rng)?;
        for (v, dim) in &varieties {
            println!(
                "p = {p:>2} {:<16} G: {:.4}  random 10%: {:.4}",
                format!("{v:?}"),
                larsen_pink_ratio(&whole, v, *dim, 3)?,
                larsen_pink_ratio(&random, v, *dim, 3)?
            );
        }
    }
    Ok(())
}
