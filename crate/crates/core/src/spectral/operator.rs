use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::{GenSet, GroupElement, GroupTable};

/// Sizes below this run the operator on a single thread.
const PAR_THRESHOLD: usize = 1 << 14;

/// The averaging operator `(T f)(x) = (1/k) sum_s f(s^{-1} x)` of a generator
/// multiset, acting on functions over the ids of a group table.
///
/// Applied to a probability vector this is one convolution step `mu * nu`.
/// For a lazy generator set the operator is `(I + T) / 2`.
#[derive(Debug, Clone)]
pub struct CayleyOperator {
    order: usize,
    /// `pull[s][x]` is the id of `s^{-1} x`.
    pull: Vec<Vec<u32>>,
    lazy: bool,
}

impl CayleyOperator {
    pub fn new<E: GroupElement>(table: &GroupTable<E>, gens: &GenSet<E>) -> Result<Self> {
        let pull = gens
            .members()
            .iter()
            .map(|g| {
                table
                    .left_action(&g.inverse())
                    .ok_or_else(|| Error::InvalidParameter(format!("generator {g:?} is not in the table")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            order: table.order(),
            pull,
            lazy: gens.is_lazy(),
        })
    }

    /// Builds the operator directly from left-multiplication permutations
    /// `push[s][x] = id(s x)`.
    pub fn from_actions(order: usize, push: &[Vec<u32>], lazy: bool) -> Self {
        let pull = push
            .iter()
            .map(|perm| {
                let mut inv = vec![0u32; order];
                for (x, &y) in perm.iter().enumerate() {
                    inv[y as usize] = x as u32;
                }
                inv
            })
            .collect();
        Self { order, pull, lazy }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.pull.len()
    }

    pub fn is_lazy(&self) -> bool {
        self.lazy
    }

    #[inline]
    fn value_at(&self, f: &[f64], x: usize) -> f64 {
        let mut acc = 0.0;
        for perm in &self.pull {
            acc += f[perm[x] as usize];
        }
        let avg = acc / self.pull.len() as f64;
        if self.lazy {
            0.5 * (f[x] + avg)
        } else {
            avg
        }
    }

    /// `out = T f`. Each output entry is an independent sum in a fixed
    /// order, so the result does not depend on the worker count.
    pub fn apply_into(&self, f: &[f64], out: &mut [f64]) {
        debug_assert_eq!(f.len(), self.order);
        if self.order >= PAR_THRESHOLD {
            out.par_iter_mut()
                .enumerate()
                .for_each(|(x, o)| *o = self.value_at(f, x));
        } else {
            for (x, o) in out.iter_mut().enumerate() {
                *o = self.value_at(f, x);
            }
        }
    }

    pub fn apply(&self, f: &[f64]) -> Result<Vec<f64>> {
        if f.len() != self.order {
            return Err(Error::DimensionMismatch {
                expected: self.order,
                got: f.len(),
            });
        }
        let mut out = vec![0.0; self.order];
        self.apply_into(f, &mut out);
        Ok(out)
    }

    /// Dense matrix of T, row x holding the weights of `f(y)` in `(T f)(x)`.
    pub fn dense(&self) -> nalgebra::DMatrix<f64> {
        let n = self.order;
        let k = self.pull.len() as f64;
        let mut m = nalgebra::DMatrix::<f64>::zeros(n, n);
        let w = if self.lazy { 0.5 / k } else { 1.0 / k };
        for perm in &self.pull {
            for x in 0..n {
                m[(x, perm[x] as usize)] += w;
            }
        }
        if self.lazy {
            for x in 0..n {
                m[(x, x)] += 0.5;
            }
        }
        m
    }

    /// Number of connected components of the Cayley graph.
    pub fn components(&self) -> usize {
        let n = self.order;
        let mut comp = vec![u32::MAX; n];
        let mut count = 0;
        let mut stack = Vec::new();
        for start in 0..n {
            if comp[start] != u32::MAX {
                continue;
            }
            comp[start] = count;
            stack.push(start);
            while let Some(x) = stack.pop() {
                for perm in &self.pull {
                    let y = perm[x] as usize;
                    if comp[y] == u32::MAX {
                        comp[y] = count;
                        stack.push(y);
                    }
                }
            }
            count += 1;
        }
        count as usize
    }
}

/// `(T_mu f)(x) = (1/k) sum_s f(s^{-1} x)`.
pub fn apply_markov<E: GroupElement>(f: &[f64], table: &GroupTable<E>, gens: &GenSet<E>) -> Result<Vec<f64>> {
    CayleyOperator::new(table, gens)?.apply(f)
}

/// `<Delta f, f>` with `Delta = I - T`.
pub fn laplacian_form(op: &CayleyOperator, f: &[f64]) -> f64 {
    let tf = op.apply(f).expect("length checked by caller");
    let diff: Vec<f64> = f.iter().zip(&tf).map(|(a, b)| a - b).collect();
    crate::numeric::dot(&diff, f)
}
