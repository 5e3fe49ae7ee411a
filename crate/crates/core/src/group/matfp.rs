//! Square matrices over F_p with determinant one.

use std::fmt;

use smallvec::SmallVec;

use super::element::{ElemKey, GroupElement};
use super::modp::{inv_mod, PrimeModulus};
use crate::error::{Error, Result};

pub(crate) type Entries = SmallVec<[u32; 9]>;

/// An element of SL_d(F_p), entries stored row-major and reduced into `[0, p)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatFp {
    // Field order matters for the derived `Ord`: modulus first, then entries
    // lexicographically.
    modulus: PrimeModulus,
    entries: Entries,
}

impl MatFp {
    /// Builds a matrix from integer entries, reducing mod p and checking det = 1.
    pub fn new(modulus: PrimeModulus, entries: &[i64]) -> Result<Self> {
        let d = modulus.d();
        if entries.len() != d * d {
            return Err(Error::InvalidDimension(d));
        }
        let p = modulus.p() as i64;
        let m = Self {
            modulus,
            entries: entries.iter().map(|&e| e.rem_euclid(p) as u32).collect(),
        };
        if m.det() != 1 {
            return Err(Error::NotDeterminantOne);
        }
        Ok(m)
    }

    /// Entries already known to be reduced with determinant one.
    pub(crate) fn from_reduced(modulus: PrimeModulus, entries: Entries) -> Self {
        debug_assert_eq!(entries.len(), modulus.d() * modulus.d());
        Self { modulus, entries }
    }

    pub fn identity(modulus: PrimeModulus) -> Self {
        let d = modulus.d();
        let mut entries: Entries = SmallVec::from_elem(0, d * d);
        for i in 0..d {
            entries[i * d + i] = 1;
        }
        Self { modulus, entries }
    }

    pub fn diag(modulus: PrimeModulus, diagonal: &[i64]) -> Result<Self> {
        let d = modulus.d();
        if diagonal.len() != d {
            return Err(Error::InvalidDimension(d));
        }
        let mut e = vec![0i64; d * d];
        for (i, &x) in diagonal.iter().enumerate() {
            e[i * d + i] = x;
        }
        Self::new(modulus, &e)
    }

    #[inline]
    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    #[inline]
    pub fn d(&self) -> usize {
        self.modulus.d()
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.modulus.p()
    }

    #[inline]
    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.d() + j]
    }

    pub fn trace(&self) -> u32 {
        let p = self.p() as u64;
        (0..self.d()).map(|i| self.get(i, i) as u64).sum::<u64>().rem_euclid(p) as u32
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.modulus != rhs.modulus {
            return Err(Error::ModulusMismatch);
        }
        Ok(self.mul(rhs))
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut acc = Self::identity(self.modulus);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            exp >>= 1;
        }
        acc
    }

    /// Determinant by Gaussian elimination over F_p.
    pub fn det(&self) -> u32 {
        det_mod(&self.entries, self.d(), self.p() as u64) as u32
    }

    /// Row-major entries packed in base p, when p^{d^2} fits in 64 bits.
    pub fn packed(&self) -> Option<u64> {
        let p = self.p() as u64;
        p.checked_pow(self.entries.len() as u32)?;
        Some(self.entries.iter().fold(0u64, |acc, &e| acc * p + e as u64))
    }
}

pub(crate) fn mul_entries(a: &[u32], b: &[u32], d: usize, p: u64) -> Entries {
    let mut out: Entries = SmallVec::from_elem(0, d * d);
    for i in 0..d {
        for j in 0..d {
            let mut acc: u64 = 0;
            for k in 0..d {
                acc += a[i * d + k] as u64 * b[k * d + j] as u64;
                if acc >= 1 << 62 {
                    acc %= p;
                }
            }
            out[i * d + j] = (acc % p) as u32;
        }
    }
    out
}

pub(crate) fn det_mod(entries: &[u32], d: usize, p: u64) -> u64 {
    let mut m: Vec<u64> = entries.iter().map(|&e| e as u64).collect();
    let mut det: u64 = 1;
    for col in 0..d {
        let Some(pivot) = (col..d).find(|&r| m[r * d + col] != 0) else {
            return 0;
        };
        if pivot != col {
            for j in 0..d {
                m.swap(pivot * d + j, col * d + j);
            }
            det = (p - det) % p;
        }
        let pv = m[col * d + col];
        det = det * pv % p;
        let inv = inv_mod(pv, p).expect("nonzero pivot");
        for r in col + 1..d {
            let f = m[r * d + col] * inv % p;
            if f == 0 {
                continue;
            }
            for j in col..d {
                m[r * d + j] = (m[r * d + j] + p * p - f * m[col * d + j]) % p;
            }
        }
    }
    det
}

impl GroupElement for MatFp {
    fn mul(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        Self {
            modulus: self.modulus,
            entries: mul_entries(&self.entries, &rhs.entries, self.d(), self.p() as u64),
        }
    }

    /// Inverse by Gauss-Jordan; for d = 2 this is the adjugate.
    fn inverse(&self) -> Self {
        let d = self.d();
        let p = self.p() as u64;
        if d == 2 {
            let e = &self.entries;
            let neg = |x: u32| ((p - x as u64) % p) as u32;
            return Self {
                modulus: self.modulus,
                entries: SmallVec::from_slice(&[e[3], neg(e[1]), neg(e[2]), e[0]]),
            };
        }
        let w = 2 * d;
        let mut m = vec![0u64; d * w];
        for i in 0..d {
            for j in 0..d {
                m[i * w + j] = self.entries[i * d + j] as u64;
            }
            m[i * w + d + i] = 1;
        }
        for col in 0..d {
            let pivot = (col..d)
                .find(|&r| m[r * w + col] != 0)
                .expect("determinant one matrices are invertible");
            for j in 0..w {
                m.swap(pivot * w + j, col * w + j);
            }
            let inv = inv_mod(m[col * w + col], p).unwrap();
            for j in 0..w {
                m[col * w + j] = m[col * w + j] * inv % p;
            }
            for r in 0..d {
                if r == col {
                    continue;
                }
                let f = m[r * w + col];
                if f == 0 {
                    continue;
                }
                for j in 0..w {
                    m[r * w + j] = (m[r * w + j] + p * p - f * m[col * w + j]) % p;
                }
            }
        }
        let mut entries: Entries = SmallVec::from_elem(0, d * d);
        for i in 0..d {
            for j in 0..d {
                entries[i * d + j] = m[i * w + d + j] as u32;
            }
        }
        Self {
            modulus: self.modulus,
            entries,
        }
    }

    fn identity_of(&self) -> Self {
        Self::identity(self.modulus)
    }

    fn key(&self) -> ElemKey {
        match self.packed() {
            Some(w) => ElemKey::Packed(w),
            None => ElemKey::Bytes(
                self.entries
                    .iter()
                    .flat_map(|e| e.to_le_bytes())
                    .collect::<Vec<_>>()
                    .into_boxed_slice(),
            ),
        }
    }
}

impl fmt::Debug for MatFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for MatFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.d();
        write!(f, "[")?;
        for i in 0..d {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for j in 0..d {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "] mod {}", self.p())
    }
}
