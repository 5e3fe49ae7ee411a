//! Exact return probabilities of the simple random walk on a free group.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest n accepted by the exact recursion.
pub const MAX_EXACT_STEPS: usize = 30;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FreeGroupReturn {
    pub k: usize,
    pub n: usize,
    /// Exact `mu^n(e)` as `numerator/denominator`.
    pub probability: String,
    pub value: f64,
    /// `sqrt(2k - 1) / k`, the spectral radius of the walk.
    pub kesten: f64,
}

/// `mu^m(e)` for m in `0..=max_n` on the free group of rank k with
/// generators `{a_i^{+-1}}`, from the distribution of word length.
pub fn free_group_return_sequence(k: usize, max_n: usize) -> Result<Vec<BigRational>> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("rank {k} < 2")));
    }
    if max_n > MAX_EXACT_STEPS {
        return Err(Error::InvalidParameter(format!(
            "n = {max_n} exceeds {MAX_EXACT_STEPS}"
        )));
    }
    let degree = BigInt::from(2 * k);
    let forward = BigInt::from(2 * k - 1);
    // counts[j]: number of words of the current length ending at distance j
    let mut counts = vec![BigInt::one()];
    let mut total = BigInt::one();
    let mut out = Vec::with_capacity(max_n + 1);
    for m in 0..=max_n {
        out.push(BigRational::new(counts[0].clone(), total.clone()));
        if m == max_n {
            break;
        }
        let mut next = vec![BigInt::zero(); counts.len() + 1];
        for (j, c) in counts.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if j == 0 {
                next[1] += c * &degree;
            } else {
                next[j - 1] += c;
                next[j + 1] += c * &forward;
            }
        }
        counts = next;
        total *= &degree;
    }
    Ok(out)
}

pub fn free_group_return_oracle(k: usize, n: usize) -> Result<FreeGroupReturn> {
    let seq = free_group_return_sequence(k, n)?;
    let p = seq.last().unwrap();
    Ok(FreeGroupReturn {
        k,
        n,
        probability: format!("{}/{}", p.numer(), p.denom()),
        value: ratio_to_f64(p),
        kesten: kesten_radius(k),
    })
}

pub fn kesten_radius(k: usize) -> f64 {
    ((2 * k - 1) as f64).sqrt() / k as f64
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(0.0)
}

/// `mu^{2m}(e)^{1/(2m)}` for m in `1..=max_m`.
pub fn root_sequence(k: usize, max_m: usize) -> Result<Vec<f64>> {
    let seq = free_group_return_sequence(k, 2 * max_m)?;
    Ok((1..=max_m)
        .map(|m| ratio_to_f64(&seq[2 * m]).powf(1.0 / (2 * m) as f64))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{GroupElement, Pair, ZMod};

    /// Reduced-word walk by brute force over all words of length n.
    fn brute_force(k: usize, n: usize) -> BigRational {
        fn go(word: &mut Vec<(usize, bool)>, k: usize, left: usize) -> u64 {
            if left == 0 {
                return word.is_empty() as u64;
            }
            let mut hits = 0;
            for g in 0..k {
                for inv in [false, true] {
                    if word.last() == Some(&(g, !inv)) {
                        let top = word.pop().unwrap();
                        hits += go(word, k, left - 1);
                        word.push(top);
                    } else {
                        word.push((g, inv));
                        hits += go(word, k, left - 1);
                        word.pop();
                    }
                }
            }
            hits
        }
        let hits = go(&mut Vec::new(), k, n);
        BigRational::new(hits.into(), BigInt::from(2 * k).pow(n as u32))
    }

    #[test]
    fn small_values() {
        let seq = free_group_return_sequence(2, 8).unwrap();
        assert!(seq[0].is_one());
        assert_eq!(seq[2], BigRational::new(1.into(), 4.into()));
        for m in (1..=8).step_by(2) {
            assert!(seq[m].is_zero());
        }
        for k in 2..=3 {
            for n in 0..=8 {
                assert_eq!(free_group_return_sequence(k, n).unwrap()[n], brute_force(k, n));
            }
        }
    }

    #[test]
    fn roots_increase_below_kesten() {
        let roots = root_sequence(2, 15).unwrap();
        assert!(roots.windows(2).all(|w| w[0] < w[1]));
        assert!(roots.iter().all(|&r| r < kesten_radius(2)));
        assert!((kesten_radius(2) - 3f64.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(free_group_return_sequence(1, 4).is_err());
        assert!(free_group_return_sequence(2, 31).is_err());
        let r = free_group_return_oracle(2, 30).unwrap();
        assert!(r.value > 0.0 && r.value < 1.0);
    }

    #[test]
    fn finite_quotient_returns_dominate() {
        // Z/5 x Z/7 is a quotient of F_2, so its returns bound the free ones.
        let gens = crate::group::GenSet::symmetrized(vec![
            Pair(ZMod::new(1, 5), ZMod::new(0, 7)),
            Pair(ZMod::new(0, 5), ZMod::new(1, 7)),
        ])
        .unwrap();
        let table = crate::group::enumerate_group(&gens, 100).unwrap();
        let op = crate::spectral::CayleyOperator::new(&table, &gens).unwrap();
        let free = free_group_return_sequence(2, 20).unwrap();
        for (n, d) in crate::walk::exact::Powers::new(&op, table.identity())
            .take(21)
            .enumerate()
        {
            assert!(d.at(table.identity()) + 1e-15 >= ratio_to_f64(&free[n]), "n = {n}");
        }
        assert!(table.element(0).is_identity());
    }
}
