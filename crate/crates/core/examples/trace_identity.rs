//! The trace of T^n computed two ways: from the spectrum and from return
//! probabilities.

use cayley_sieve::group::{sanov, sl_table, DEFAULT_CAP};
use cayley_sieve::spectral::{full_spectrum_of, trace_residuals, CayleyOperator, DENSE_CAP};

fn main() -> cayley_sieve::Result<()> {
    for p in [3, 5, 7] {
        let (table, gens) = sl_table(&sanov(), p, DEFAULT_CAP)?;
        let op = CayleyOperator::new(&table, &gens)?;
        let spectrum = full_spectrum_of(&op, DENSE_CAP)?;
        let times: Vec<usize> = (2..=20).step_by(2).collect();
        let res = trace_residuals(&op, &spectrum, table.identity(), &times);
        let worst = res.iter().cloned().fold(0.0, f64::max);
        println!(
            "SL_2(F_{p}): |G| = {}, max residual over n = 2..20: {worst:.2e}",
            table.order()
        );
    }
    Ok(())
}
