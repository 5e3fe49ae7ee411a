//! Dense polynomials over F_p: characteristic polynomials, squarefreeness and
//! distinct-degree factorization.

use super::matfp::MatFp;
use super::modp::inv_mod;
use crate::error::{Error, Result};

/// Coefficients from the constant term upward, no trailing zeros.
/// The zero polynomial is the empty vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyFp {
    p: u64,
    coeffs: Vec<u64>,
}

impl PolyFp {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut out = Self {
            p,
            coeffs: coeffs.into_iter().map(|c| c % p).collect(),
        };
        out.trim();
        out
    }

    /// Builds from signed coefficients, constant term first.
    pub fn from_signed(p: u64, coeffs: &[i64]) -> Self {
        Self::new(p, coeffs.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect())
    }

    pub fn x(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn lead(&self) -> u64 {
        *self.coeffs.last().unwrap_or(&0)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let c = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = rhs.coeffs.get(i).copied().unwrap_or(0);
                (a + self.p - b) % self.p
            })
            .collect();
        Self::new(self.p, c)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::new(self.p, vec![]);
        }
        let mut c = vec![0u64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                c[i + j] = (c[i + j] + a * b) % self.p;
            }
        }
        Self::new(self.p, c)
    }

    pub fn scale(&self, k: u64) -> Self {
        Self::new(self.p, self.coeffs.iter().map(|&c| c * k % self.p).collect())
    }

    pub fn monic(&self) -> Self {
        match inv_mod(self.lead(), self.p) {
            Some(inv) => self.scale(inv),
            None => self.clone(),
        }
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, rhs: &Self) -> (Self, Self) {
        let dr = rhs.degree().expect("division by zero polynomial");
        let inv = inv_mod(rhs.lead(), self.p).unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; self.coeffs.len().saturating_sub(dr).max(1)];
        while rem.len() > dr && !rem.is_empty() {
            let shift = rem.len() - 1 - dr;
            let f = rem[rem.len() - 1] * inv % self.p;
            quot[shift] = f;
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                rem[shift + j] = (rem[shift + j] + self.p * self.p - f * b) % self.p;
            }
            while rem.last() == Some(&0) {
                rem.pop();
            }
        }
        (Self::new(self.p, quot), Self::new(self.p, rem))
    }

    pub fn rem(&self, rhs: &Self) -> Self {
        self.div_rem(rhs).1
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, rhs: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), rhs.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| (i as u64 % self.p) * c % self.p)
            .collect();
        Self::new(self.p, c)
    }

    /// `self^e mod modulus` by square-and-multiply.
    pub fn pow_mod(&self, mut e: u64, modulus: &Self) -> Self {
        let mut acc = Self::new(self.p, vec![1]).rem(modulus);
        let mut base = self.rem(modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus);
            }
            base = base.mul(&base).rem(modulus);
            e >>= 1;
        }
        acc
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// Degrees of the irreducible factors of a squarefree polynomial, ascending.
    ///
    /// The i-th stage splits off `gcd(f, x^{p^i} - x)`, the product of all
    /// remaining irreducible factors of degree i.
    pub fn distinct_degree_factorization(&self) -> Vec<usize> {
        let p = self.p;
        let mut f = self.monic();
        let x = Self::x(p);
        let mut degrees = Vec::new();
        let mut h = x.rem(&f);
        let mut i = 1;
        while f.degree().unwrap_or(0) >= 2 * i {
            h = h.pow_mod(p, &f);
            let g = f.gcd(&h.sub(&x));
            let dg = g.degree().unwrap_or(0);
            if dg > 0 {
                degrees.extend(std::iter::repeat_n(i, dg / i));
                f = f.div_rem(&g).0;
                h = h.rem(&f);
            }
            i += 1;
        }
        if let Some(rest) = f.degree().filter(|&r| r > 0) {
            degrees.push(rest);
        }
        degrees
    }
}

/// Characteristic polynomial det(xI - m), monic of degree d.
///
/// Reduces to upper Hessenberg form by similarity and then uses the
/// determinant recurrence for Hessenberg matrices, which needs no division
/// by small integers and so works for every p.
pub fn char_poly(m: &MatFp) -> PolyFp {
    let d = m.d();
    let p = m.p() as u64;
    let mut h: Vec<Vec<u64>> = (0..d).map(|i| (0..d).map(|j| m.get(i, j) as u64).collect()).collect();
    for col in 1..d.saturating_sub(1) {
        let Some(piv) = (col..d).find(|&r| h[r][col - 1] != 0) else {
            continue;
        };
        if piv != col {
            h.swap(piv, col);
            for row in h.iter_mut() {
                row.swap(piv, col);
            }
        }
        let inv = inv_mod(h[col][col - 1], p).unwrap();
        for r in col + 1..d {
            let u = h[r][col - 1] * inv % p;
            if u == 0 {
                continue;
            }
            // row_r -= u row_col, then col_col += u col_r keeps similarity
            for j in 0..d {
                h[r][j] = (h[r][j] + p * p - u * h[col][j]) % p;
            }
            for row in h.iter_mut() {
                row[col] = (row[col] + u * row[r]) % p;
            }
        }
    }
    // p_k is the char poly of the leading k x k block.
    let mut polys: Vec<PolyFp> = vec![PolyFp::new(p, vec![1])];
    for k in 1..=d {
        let mk = k - 1;
        let lin = PolyFp::new(p, vec![(p - h[mk][mk]) % p, 1]);
        let mut pk = lin.mul(&polys[k - 1]);
        let mut prod_sub: u64 = 1;
        for i in (0..mk).rev() {
            prod_sub = prod_sub * h[i + 1][i] % p;
            let coef = h[i][mk] * prod_sub % p;
            if coef != 0 {
                pk = pk.sub(&polys[i].scale(coef));
            }
        }
        polys.push(pk);
    }
    polys.pop().unwrap()
}

pub fn is_regular_semisimple(m: &MatFp) -> bool {
    char_poly(m).is_squarefree()
}

/// Factor degrees of the characteristic polynomial, sorted ascending.
pub fn cycle_type(m: &MatFp) -> Result<Vec<usize>> {
    let f = char_poly(m);
    if !f.is_squarefree() {
        return Err(Error::NotRegularSemisimple);
    }
    Ok(f.distinct_degree_factorization())
}

/// True when `(m^{d!} - I)^d = 0`, i.e. some power of `m` is unipotent.
pub fn is_power_unipotent(m: &MatFp) -> bool {
    let d = m.d();
    let fact: u64 = (1..=d as u64).product();
    let g = m.pow(fact);
    let p = m.p() as u64;
    let mut n: Vec<u64> = g.entries().iter().map(|&e| e as u64).collect();
    for i in 0..d {
        n[i * d + i] = (n[i * d + i] + p - 1) % p;
    }
    let mut acc = n.clone();
    for _ in 1..d {
        let mut next = vec![0u64; d * d];
        for i in 0..d {
            for j in 0..d {
                next[i * d + j] = (0..d).map(|k| acc[i * d + k] * n[k * d + j] % p).sum::<u64>() % p;
            }
        }
        acc = next;
    }
    acc.iter().all(|&x| x == 0)
}
