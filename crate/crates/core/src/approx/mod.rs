//! Approximate-subgroup statistics for finite subsets of an enumerated group:
//! product sets, covering numbers, tripling, multiplicative energy,
//! Larsen-Pink ratios and growth under iterated products.

use fixedbitset::FixedBitSet;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{char_poly, GroupElement, GroupTable, IdSet, MatFp, PolyFp};

/// A subset of a group table, with its symmetry and identity flags.
#[derive(Debug, Clone)]
pub struct FiniteSubset<'a, E> {
    table: &'a GroupTable<E>,
    set: IdSet,
    symmetric: bool,
    contains_identity: bool,
}

impl<'a, E: GroupElement> FiniteSubset<'a, E> {
    pub fn new(table: &'a GroupTable<E>, ids: impl IntoIterator<Item = u32>) -> Result<Self> {
        let ids: Vec<u32> = ids.into_iter().collect();
        if let Some(&bad) = ids.iter().find(|&&i| i as usize >= table.order()) {
            return Err(Error::InvalidParameter(format!(
                "id {bad} outside a group of order {}",
                table.order()
            )));
        }
        Ok(Self::from_set(table, IdSet::from_ids(table.order(), ids)))
    }

    pub fn from_set(table: &'a GroupTable<E>, set: IdSet) -> Self {
        let symmetric = set.ids().iter().all(|&a| set.contains(table.inverse(a)));
        let contains_identity = set.contains(table.identity());
        Self {
            table,
            set,
            symmetric,
            contains_identity,
        }
    }

    pub fn from_elements(table: &'a GroupTable<E>, elems: &[E]) -> Result<Self> {
        let ids = elems
            .iter()
            .map(|e| {
                table
                    .id_of(e)
                    .ok_or_else(|| Error::InvalidParameter(format!("{e:?} not in table")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(table, ids)
    }

    pub fn whole(table: &'a GroupTable<E>) -> Self {
        Self::from_set(table, IdSet::full(table.order()))
    }

    /// A random symmetric set containing the identity with `size` or
    /// `size + 1` elements (an inverse pair may overshoot by one).
    pub fn random_symmetric(table: &'a GroupTable<E>, size: usize, rng: &mut impl Rng) -> Result<Self> {
        let order = table.order();
        if size == 0 || size > order {
            return Err(Error::InvalidParameter(format!("size {size} not in 1..={order}")));
        }
        let mut bits = FixedBitSet::with_capacity(order);
        bits.insert(table.identity() as usize);
        let mut count = 1;
        while count < size {
            let x = rng.random_range(0..order as u32);
            if bits.contains(x as usize) {
                continue;
            }
            bits.insert(x as usize);
            count += 1;
            let inv = table.inverse(x) as usize;
            if !bits.contains(inv) {
                bits.insert(inv);
                count += 1;
            }
        }
        Ok(Self::from_set(table, IdSet::from_bits(bits)))
    }

    pub fn table(&self) -> &'a GroupTable<E> {
        self.table
    }

    pub fn set(&self) -> &IdSet {
        &self.set
    }

    pub fn ids(&self) -> &[u32] {
        self.set.ids()
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn contains(&self, id: u32) -> bool {
        self.set.contains(id)
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn contains_identity(&self) -> bool {
        self.contains_identity
    }

    /// `A ∪ other`, on the same table.
    pub fn union(&self, other: &Self) -> Result<Self> {
        same_table(self, other)?;
        let mut bits = self.set.bits().clone();
        bits.union_with(other.set.bits());
        Ok(Self::from_set(self.table, IdSet::from_bits(bits)))
    }

    /// Left translate `xA`.
    pub fn translate(&self, x: u32) -> Self {
        let ids = self.ids().iter().map(|&a| self.table.mul(x, a));
        Self::from_set(self.table, IdSet::from_ids(self.table.order(), ids))
    }
}

fn same_table<E>(a: &FiniteSubset<'_, E>, b: &FiniteSubset<'_, E>) -> Result<()> {
    if std::ptr::eq(a.table, b.table) {
        Ok(())
    } else {
        Err(Error::TableMismatch)
    }
}

/// `AB = {ab}`.
pub fn product_set<'a, E: GroupElement>(
    a: &FiniteSubset<'a, E>,
    b: &FiniteSubset<'a, E>,
) -> Result<FiniteSubset<'a, E>> {
    same_table(a, b)?;
    let table = a.table;
    let order = table.order();
    let mut bits = FixedBitSet::with_capacity(order);
    let mut count = 0;
    for &x in a.ids() {
        let ex = table.element(x);
        for &y in b.ids() {
            let id = table
                .id_of(&ex.mul(table.element(y)))
                .expect("table is closed under multiplication");
            count += usize::from(!bits.put(id as usize));
        }
        if count == order {
            break;
        }
    }
    Ok(FiniteSubset::from_set(table, IdSet::from_bits(bits)))
}

/// `A^k` for k >= 1.
pub fn power<'a, E: GroupElement>(a: &FiniteSubset<'a, E>, k: usize) -> Result<FiniteSubset<'a, E>> {
    if k == 0 {
        return Err(Error::InvalidParameter("power must be at least 1".into()));
    }
    let mut cur = a.clone();
    for _ in 1..k {
        cur = product_set(&cur, a)?;
    }
    Ok(cur)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cover {
    /// `|X|`, an upper bound on the least number of translates needed.
    pub k_hat: usize,
    pub x: Vec<u32>,
}

/// Greedy set of left translates with `AA ⊆ XA`, drawing X from AA.
pub fn greedy_cover<E: GroupElement>(a: &FiniteSubset<'_, E>) -> Result<Cover> {
    if !a.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    if !a.contains_identity() {
        return Err(Error::MissingIdentity);
    }
    let table = a.table;
    let aa = product_set(a, a)?;
    let mut uncovered = aa.set.bits().clone();
    let mut remaining = aa.len();
    let mut x = Vec::new();
    while remaining > 0 {
        let mut best = (0usize, u32::MAX);
        for &c in aa.ids() {
            let gain = a
                .ids()
                .iter()
                .filter(|&&s| uncovered.contains(table.mul(c, s) as usize))
                .count();
            if gain > best.0 {
                best = (gain, c);
            }
        }
        let c = best.1;
        for &s in a.ids() {
            let y = table.mul(c, s) as usize;
            if uncovered.contains(y) {
                uncovered.set(y, false);
                remaining -= 1;
            }
        }
        x.push(c);
    }
    x.sort_unstable();
    Ok(Cover { k_hat: x.len(), x })
}

/// Checks `AA ⊆ XA` exhaustively.
pub fn covers<E: GroupElement>(a: &FiniteSubset<'_, E>, x: &[u32]) -> bool {
    let table = a.table;
    let mut xa = FixedBitSet::with_capacity(table.order());
    for &c in x {
        for &s in a.ids() {
            xa.insert(table.mul(c, s) as usize);
        }
    }
    a.ids()
        .iter()
        .all(|&s| a.ids().iter().all(|&t| xa.contains(table.mul(s, t) as usize)))
}

/// `|AAA| / |A|`.
pub fn tripling<E: GroupElement>(a: &FiniteSubset<'_, E>) -> Result<f64> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(power(a, 3)?.len() as f64 / a.len() as f64)
}

/// Multiplicative energy `|{(a,b,c,d) in A^4 : ab = cd}| = sum_x r(x)^2`.
pub fn energy<E: GroupElement>(a: &FiniteSubset<'_, E>) -> u128 {
    let table = a.table;
    let mut r = vec![0u64; table.order()];
    for &x in a.ids() {
        for &y in a.ids() {
            r[table.mul(x, y) as usize] += 1;
        }
    }
    r.iter().map(|&c| c as u128 * c as u128).sum()
}

/// Decidable subvarieties of SL_d(F_p) used for Larsen-Pink counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variety {
    /// `tr g = t`.
    TraceValue(i64),
    Diagonal,
    /// All unipotent elements: characteristic polynomial `(x - 1)^d`.
    Unipotent,
    /// Upper unitriangular matrices.
    UpperUnipotent,
    /// Stabilizer of the line through `v`.
    FixedLine(Vec<u32>),
    Whole,
}

impl Variety {
    pub fn contains(&self, m: &MatFp) -> bool {
        let d = m.d();
        let p = m.p();
        match self {
            Variety::TraceValue(t) => m.trace() as i64 == t.rem_euclid(p as i64),
            Variety::Diagonal => (0..d).all(|i| (0..d).all(|j| i == j || m.get(i, j) == 0)),
            Variety::Unipotent => {
                let mut coeffs = vec![0i64; d + 1];
                // (x - 1)^d via binomial coefficients
                let mut c = 1i64;
                for k in 0..=d {
                    let sign = if (d - k) % 2 == 0 { 1 } else { -1 };
                    coeffs[k] = sign * c;
                    c = c * (d - k) as i64 / (k + 1) as i64;
                }
                char_poly(m) == PolyFp::from_signed(p as u64, &coeffs)
            }
            Variety::UpperUnipotent => (0..d).all(|i| m.get(i, i) == 1 && (0..i).all(|j| m.get(i, j) == 0)),
            Variety::FixedLine(v) => crate::group::SubgroupKind::LineStabilizer(v.clone()).contains(m),
            Variety::Whole => true,
        }
    }
}

/// `|A ∩ V| / |A|^{dim V / dim G}` for a membership predicate V.
pub fn larsen_pink_ratio_by<E: GroupElement>(
    a: &FiniteSubset<'_, E>,
    v: impl Fn(&E) -> bool,
    dim_v: usize,
    dim_g: usize,
) -> Result<f64> {
    if dim_g == 0 || dim_v > dim_g {
        return Err(Error::InvalidParameter(format!(
            "need dim V <= dim G, got {dim_v} and {dim_g}"
        )));
    }
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let hits = a.ids().iter().filter(|&&i| v(a.table.element(i))).count();
    Ok(hits as f64 / (a.len() as f64).powf(dim_v as f64 / dim_g as f64))
}

pub fn larsen_pink_ratio(a: &FiniteSubset<'_, MatFp>, v: &Variety, dim_v: usize, dim_g: usize) -> Result<f64> {
    larsen_pink_ratio_by(a, |m| v.contains(m), dim_v, dim_g)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthScan {
    /// `|A^k|` for k = 1..=max_power.
    pub sizes: Vec<usize>,
    /// `log(|A^3| / |A|) / log |A|` while `|A^3| < |G|`.
    pub epsilon: Option<f64>,
    /// Whether A generates the whole table.
    pub generates: bool,
}

pub fn growth_scan<E: GroupElement>(a: &FiniteSubset<'_, E>, max_power: usize) -> Result<GrowthScan> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let order = a.table.order();
    let mut sizes = Vec::with_capacity(max_power);
    let mut cur = a.clone();
    let mut saturated_at = None;
    for k in 1..=max_power.max(3) {
        if k > 1 {
            cur = product_set(&cur, a)?;
        }
        if k <= max_power {
            sizes.push(cur.len());
        }
        if saturated_at.is_none() && cur.len() == order {
            saturated_at = Some(k);
        }
    }
    let a3 = power(a, 3)?.len();
    let epsilon = (a3 < order && a.len() > 1).then(|| (a3 as f64 / a.len() as f64).ln() / (a.len() as f64).ln());
    // closure check: keep multiplying until the size stops changing
    let mut closure = cur;
    loop {
        let next = product_set(&closure, a)?;
        if next.len() == closure.len() {
            break;
        }
        closure = next;
    }
    let mut with_one = closure.set.bits().clone();
    with_one.insert(a.table.identity() as usize);
    Ok(GrowthScan {
        sizes,
        epsilon,
        generates: with_one.count_ones(..) == order,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproxReport {
    pub size_a: usize,
    pub size_aa: usize,
    pub size_aaa: usize,
    pub k_hat: usize,
    pub tripling: f64,
    /// Exact, as a decimal string (it can exceed 64 bits).
    pub energy: String,
}

pub fn approx_report<E: GroupElement>(a: &FiniteSubset<'_, E>) -> Result<ApproxReport> {
    let cover = greedy_cover(a)?;
    let aa = product_set(a, a)?;
    let aaa = product_set(&aa, a)?;
    Ok(ApproxReport {
        size_a: a.len(),
        size_aa: aa.len(),
        size_aaa: aaa.len(),
        k_hat: cover.k_hat,
        tripling: aaa.len() as f64 / a.len() as f64,
        energy: energy(a).to_string(),
    })
}
