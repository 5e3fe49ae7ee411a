//! Spectral gap of Cay(SL_2(F_p), S) for the Sanov generators.

use cayley_sieve::group::{sanov, sl_table, DEFAULT_CAP};
use cayley_sieve::spectral::{lambda1_auto, quasirandom_bound, CayleyOperator, DEFAULT_TOL};

fn main() -> cayley_sieve::Result<()> {
    println!(
        "{:>4} {:>8} {:>10} {:>10} {:>16}",
        "p", "|G|", "lambda1", "alpha_min", "method"
    );
    for p in [3, 5, 7, 11, 13, 17, 19, 23] {
        let (table, gens) = sl_table(&sanov(), p, DEFAULT_CAP)?;
        let op = CayleyOperator::new(&table, &gens)?;
        let r = lambda1_auto(&op, DEFAULT_TOL);
        println!(
            "{p:>4} {:>8} {:>10.6} {:>10.6} {:>16}",
            table.order(),
            r.lambda1,
            r.alpha_min,
            r.method.as_str()
        );
    }
    let q = quasirandom_bound(13, 2)?;
    println!(
        "\nSL_2(F_13): nontrivial representations have dimension >= {} = |G|^{:.4}",
        q.min_dim, q.beta
    );
    Ok(())
}
