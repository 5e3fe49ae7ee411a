//! Exact rational matrices of determinant one, reduction mod p and heights.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matfp::{Entries, MatFp};
use super::modp::{inv_mod, PrimeModulus};
use crate::error::{Error, Result};

/// A d x d matrix with exact rational entries and determinant exactly 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMat {
    d: usize,
    entries: Vec<BigRational>,
}

impl IntMat {
    pub fn new(d: usize, entries: Vec<BigRational>) -> Result<Self> {
        if d < 2 || entries.len() != d * d {
            return Err(Error::InvalidDimension(d));
        }
        let m = Self { d, entries };
        if !m.det().is_one() {
            return Err(Error::NotDeterminantOne);
        }
        Ok(m)
    }

    pub fn from_ints(d: usize, entries: &[i64]) -> Result<Self> {
        Self::new(
            d,
            entries.iter().map(|&e| BigRational::from_integer(e.into())).collect(),
        )
    }

    /// Entries as `(numerator, denominator)` pairs.
    pub fn from_fractions(d: usize, entries: &[(i64, i64)]) -> Result<Self> {
        let mut out = Vec::with_capacity(entries.len());
        for &(n, den) in entries {
            if den == 0 {
                return Err(Error::Parse("zero denominator".into()));
            }
            out.push(BigRational::new(n.into(), den.into()));
        }
        Self::new(d, out)
    }

    pub fn identity(d: usize) -> Self {
        let mut entries = vec![BigRational::zero(); d * d];
        for i in 0..d {
            entries[i * d + i] = BigRational::one();
        }
        Self { d, entries }
    }

    /// Copy with entry (i, j) replaced by an integer.
    pub(crate) fn with_entry(mut self, i: usize, j: usize, v: i64) -> Self {
        self.entries[i * self.d + j] = BigRational::from_integer(v.into());
        self
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.d + j]
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|e| e.is_integer())
    }

    pub fn mul(&self, rhs: &IntMat) -> IntMat {
        assert_eq!(self.d, rhs.d, "dimension mismatch");
        let d = self.d;
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let mut acc = BigRational::zero();
                for k in 0..d {
                    acc += self.get(i, k) * rhs.get(k, j);
                }
                entries.push(acc);
            }
        }
        IntMat { d, entries }
    }

    /// Exact determinant by fraction-carrying Gaussian elimination.
    pub fn det(&self) -> BigRational {
        let d = self.d;
        let mut m = self.entries.clone();
        let mut det = BigRational::one();
        for col in 0..d {
            let Some(pivot) = (col..d).find(|&r| !m[r * d + col].is_zero()) else {
                return BigRational::zero();
            };
            if pivot != col {
                for j in 0..d {
                    m.swap(pivot * d + j, col * d + j);
                }
                det = -det;
            }
            let pv = m[col * d + col].clone();
            det *= &pv;
            for r in col + 1..d {
                let f = &m[r * d + col] / &pv;
                if f.is_zero() {
                    continue;
                }
                for j in col..d {
                    let sub = &f * &m[col * d + j];
                    m[r * d + j] -= sub;
                }
            }
        }
        det
    }

    /// Exact inverse via Gauss-Jordan.
    pub fn inverse(&self) -> IntMat {
        let d = self.d;
        let w = 2 * d;
        let mut m = vec![BigRational::zero(); d * w];
        for i in 0..d {
            for j in 0..d {
                m[i * w + j] = self.get(i, j).clone();
            }
            m[i * w + d + i] = BigRational::one();
        }
        for col in 0..d {
            let pivot = (col..d)
                .find(|&r| !m[r * w + col].is_zero())
                .expect("determinant one matrices are invertible");
            for j in 0..w {
                m.swap(pivot * w + j, col * w + j);
            }
            let pv = m[col * w + col].clone();
            for j in 0..w {
                m[col * w + j] = &m[col * w + j] / &pv;
            }
            for r in 0..d {
                if r == col || m[r * w + col].is_zero() {
                    continue;
                }
                let f = m[r * w + col].clone();
                for j in 0..w {
                    let sub = &f * &m[col * w + j];
                    m[r * w + j] -= sub;
                }
            }
        }
        let entries = (0..d)
            .flat_map(|i| (0..d).map(move |j| (i, j)))
            .map(|(i, j)| m[i * w + d + j].clone())
            .collect();
        IntMat { d, entries }
    }

    /// Lowest common multiple of all entry denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.entries.iter().fold(BigInt::one(), |acc, e| acc.lcm(e.denom()))
    }
}

/// Entrywise reduction of a determinant-one rational matrix modulo p.
pub fn reduce_mod(m: &IntMat, modulus: PrimeModulus) -> Result<MatFp> {
    if m.d() != modulus.d() {
        return Err(Error::ModulusMismatch);
    }
    if !m.det().is_one() {
        return Err(Error::NotDeterminantOne);
    }
    let p = modulus.p() as u64;
    let pb = BigInt::from(p);
    let mut entries = Entries::with_capacity(m.d() * m.d());
    for e in m.entries() {
        let den = e.denom().mod_floor(&pb).to_u64().unwrap();
        let Some(den_inv) = inv_mod(den, p) else {
            return Err(Error::DenominatorDivisibleByP(p));
        };
        let num = e.numer().mod_floor(&pb).to_u64().unwrap();
        entries.push((num * den_inv % p) as u32);
    }
    Ok(MatFp::from_reduced(modulus, entries))
}

/// Naive height `H` and logarithmic height `h` of a matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Heights {
    /// Largest numerator or denominator in lowest terms.
    pub naive: BigInt,
    /// Sum of log+ norms over all places. The archimedean term uses the
    /// Frobenius norm, an upper bound for the operator norm, so this value is
    /// an upper bound for the exact log height.
    pub log: f64,
}

pub fn heights(m: &IntMat) -> Heights {
    let naive = m
        .entries()
        .iter()
        .map(|e| e.numer().abs().max(e.denom().clone()))
        .max()
        .unwrap_or_else(BigInt::one);
    // Finite places: log+ max_ij |a_ij|_p summed over p is log of the lcm of
    // the denominators.
    let finite = ln_big(&m.denominator_lcm());
    let frob_sq = m.entries().iter().fold(BigRational::zero(), |acc, e| acc + e * e);
    let archimedean = (0.5 * (ln_big(frob_sq.numer()) - ln_big(frob_sq.denom()))).max(0.0);
    Heights {
        naive,
        log: finite + archimedean,
    }
}

/// Natural log of a positive big integer without overflowing f64.
pub(crate) fn ln_big(x: &BigInt) -> f64 {
    assert!(x.is_positive(), "log of non-positive integer");
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.d {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for j in 0..self.d {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupElement;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn md(p: u64) -> PrimeModulus {
        PrimeModulus::new(p, 2).unwrap()
    }

    #[test]
    fn reduce_identity() {
        let r = reduce_mod(&IntMat::identity(2), md(7)).unwrap();
        assert!(r.is_identity());
    }

    #[test]
    fn reduce_upper_unipotent_mod_two() {
        let m = IntMat::from_ints(2, &[1, 2, 0, 1]).unwrap();
        assert!(reduce_mod(&m, md(2)).unwrap().is_identity());
    }

    #[test]
    fn reduce_rejects_denominator() {
        let m = IntMat::from_fractions(2, &[(1, 1), (1, 2), (0, 1), (1, 1)]).unwrap();
        assert_eq!(reduce_mod(&m, md(2)), Err(Error::DenominatorDivisibleByP(2)));
        // fine at odd primes: 1/2 = 2 mod 3
        assert_eq!(reduce_mod(&m, md(3)).unwrap().get(0, 1), 2);
    }

    #[test]
    fn rejects_non_unimodular() {
        assert_eq!(IntMat::from_ints(2, &[2, 0, 0, 1]), Err(Error::NotDeterminantOne));
    }

    #[test]
    fn height_examples() {
        let h = heights(&IntMat::identity(2));
        assert_eq!(h.naive, BigInt::one());
        // Frobenius norm of I_2 is sqrt 2, so the upper bound is log sqrt 2.
        assert!((h.log - 0.5 * 2f64.ln()).abs() < 1e-12);
        let h = heights(&IntMat::from_ints(2, &[1, 2, 0, 1]).unwrap());
        assert_eq!(h.naive, BigInt::from(2));
    }

    #[test]
    fn rational_heights_count_denominators() {
        let m = IntMat::from_fractions(2, &[(1, 1), (1, 3), (0, 1), (1, 1)]).unwrap();
        let h = heights(&m);
        assert_eq!(h.naive, BigInt::from(3));
        assert!(h.log >= 3f64.ln());
    }

    fn random_sl2(rng: &mut impl Rng, steps: usize) -> IntMat {
        let gens = [
            IntMat::from_ints(2, &[1, 1, 0, 1]).unwrap(),
            IntMat::from_ints(2, &[1, 0, 1, 1]).unwrap(),
            IntMat::from_ints(2, &[1, -1, 0, 1]).unwrap(),
            IntMat::from_ints(2, &[1, 0, -1, 1]).unwrap(),
            IntMat::from_ints(2, &[0, -1, 1, 0]).unwrap(),
        ];
        let mut acc = IntMat::identity(2);
        for _ in 0..steps {
            acc = acc.mul(&gens[rng.random_range(0..gens.len())]);
        }
        acc
    }

    #[test]
    fn reduction_is_a_homomorphism() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let primes = [2u64, 3, 5, 7, 11, 13, 101];
        for i in 0..10_000 {
            let a = random_sl2(&mut rng, 1 + i % 9);
            let b = random_sl2(&mut rng, 1 + (i / 7) % 9);
            let p = primes[i % primes.len()];
            let lhs = reduce_mod(&a.mul(&b), md(p)).unwrap();
            let rhs = reduce_mod(&a, md(p)).unwrap().mul(&reduce_mod(&b, md(p)).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn inverse_is_exact() {
        let m = IntMat::from_fractions(
            3,
            &[(1, 1), (1, 2), (0, 1), (0, 1), (1, 1), (3, 5), (0, 1), (0, 1), (1, 1)],
        )
        .unwrap();
        assert_eq!(m.mul(&m.inverse()), IntMat::identity(3));
    }

    proptest! {
        #[test]
        fn height_comparison_and_subadditivity(seed in 0u64..5000, la in 1usize..14, lb in 1usize..14) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let a = random_sl2(&mut rng, la);
            let b = random_sl2(&mut rng, lb);
            let (ha, hb, hab) = (heights(&a), heights(&b), heights(&a.mul(&b)));
            prop_assert!(hab.log <= ha.log + hb.log + 1e-9);
            // H <= e^h <= d H^{d^2}
            let big_h = ha.naive.to_f64().unwrap();
            prop_assert!(big_h.ln() <= ha.log + 1e-9);
            prop_assert!(ha.log <= 2f64.ln() + 4.0 * big_h.ln() + 1e-9);
        }

        #[test]
        fn naive_height_submultiplicative(seed in 0u64..5000, n in 1usize..6) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let factors: Vec<IntMat> = (0..n).map(|_| random_sl2(&mut rng, 1 + seed as usize % 5)).collect();
            let prod = factors.iter().skip(1).fold(factors[0].clone(), |acc, f| acc.mul(f));
            // H(a1...an) <= d^n (H(a1)...H(an))^{d^2}, compared in logs
            let lhs = heights(&prod).naive.to_f64().unwrap().ln();
            let rhs = n as f64 * 2f64.ln()
                + 4.0 * factors.iter().map(|f| heights(f).naive.to_f64().unwrap().ln()).sum::<f64>();
            prop_assert!(lhs <= rhs + 1e-9);
        }
    }
}
