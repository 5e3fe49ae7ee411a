//! Id sets over a group table and the standard subgroups of SL_d(F_p).

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use super::element::GroupElement;
use super::matfp::MatFp;
use super::table::GroupTable;
use crate::error::{Error, Result};

/// A set of element ids with O(1) membership.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdSet {
    bits: FixedBitSet,
    ids: Vec<u32>,
}

impl IdSet {
    pub fn from_ids(order: usize, ids: impl IntoIterator<Item = u32>) -> Self {
        let mut bits = FixedBitSet::with_capacity(order);
        for id in ids {
            bits.insert(id as usize);
        }
        let ids = bits.ones().map(|i| i as u32).collect();
        Self { bits, ids }
    }

    pub fn from_bits(bits: FixedBitSet) -> Self {
        let ids = bits.ones().map(|i| i as u32).collect();
        Self { bits, ids }
    }

    pub fn full(order: usize) -> Self {
        Self::from_ids(order, 0..order as u32)
    }

    pub fn from_predicate<E: GroupElement>(table: &GroupTable<E>, mut pred: impl FnMut(&E) -> bool) -> Self {
        Self::from_ids(
            table.order(),
            (0..table.order() as u32).filter(|&i| pred(table.element(i))),
        )
    }

    #[inline]
    pub fn contains(&self, id: u32) -> bool {
        self.bits.contains(id as usize)
    }

    /// Sorted ids.
    pub fn ids(&self) -> &[u32] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Size of the ambient group.
    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.bits
    }

    /// Closed under products and inverses and containing the identity.
    pub fn is_subgroup_of<E: GroupElement>(&self, table: &GroupTable<E>) -> bool {
        if self.universe() != table.order() || !self.contains(table.identity()) {
            return false;
        }
        self.ids.iter().all(|&a| self.contains(table.inverse(a)))
            && self
                .ids
                .iter()
                .all(|&a| self.ids.iter().all(|&b| self.contains(table.mul(a, b))))
    }
}

/// Families of standard subgroups of SL_d(F_p).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubgroupKind {
    /// Upper triangular matrices.
    Borel,
    /// Diagonal matrices.
    Torus,
    /// Matrices with exactly one nonzero entry per row and column.
    Monomial,
    /// Stabilizer of the line spanned by the given vector.
    LineStabilizer(Vec<u32>),
}

impl SubgroupKind {
    pub fn contains(&self, m: &MatFp) -> bool {
        let d = m.d();
        match self {
            SubgroupKind::Borel => (0..d).all(|i| (0..i).all(|j| m.get(i, j) == 0)),
            SubgroupKind::Torus => (0..d).all(|i| (0..d).all(|j| i == j || m.get(i, j) == 0)),
            SubgroupKind::Monomial => (0..d).all(|i| (0..d).filter(|&j| m.get(i, j) != 0).count() == 1),
            SubgroupKind::LineStabilizer(v) => stabilizes_line(m, v),
        }
    }
}

/// `m v` is a multiple of `v`: all 2x2 minors of `[v | m v]` vanish.
fn stabilizes_line(m: &MatFp, v: &[u32]) -> bool {
    let d = m.d();
    let p = m.p() as u64;
    let mv: Vec<u64> = (0..d)
        .map(|i| (0..d).map(|j| m.get(i, j) as u64 * v[j] as u64 % p).sum::<u64>() % p)
        .collect();
    (0..d).all(|i| (i + 1..d).all(|j| (v[i] as u64 * mv[j] % p) == (v[j] as u64 * mv[i] % p)))
}

/// The standard subgroup of the given kind inside a table that enumerates the
/// whole of SL_d(F_p), d in {2, 3}.
pub fn standard_subgroup(table: &GroupTable<MatFp>, kind: &SubgroupKind) -> Result<IdSet> {
    let first = table.element(0);
    let d = first.d();
    if !(2..=3).contains(&d) {
        return Err(Error::UnsupportedDimension(d));
    }
    if table.order() as u128 != first.modulus().sl_order() {
        return Err(Error::IncompleteTable);
    }
    if let SubgroupKind::LineStabilizer(v) = kind {
        let p = first.p();
        if v.len() != d || v.iter().all(|&x| x % p == 0) {
            return Err(Error::InvalidParameter(
                "line stabilizer needs a nonzero vector of length d".into(),
            ));
        }
    }
    Ok(IdSet::from_predicate(table, |m| kind.contains(m)))
}
