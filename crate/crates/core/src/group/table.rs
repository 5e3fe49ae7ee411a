//! Breadth-first enumeration of the group generated by a finite set.

use rustc_hash::FxHashMap;

use super::element::{ElemKey, GroupElement};
use super::genset::GenSet;
use crate::error::{Error, Result};

pub const DEFAULT_CAP: usize = 8_000_000;

/// A finite group enumerated from generators.
///
/// Element ids follow breadth-first layers from the identity (id 0), sorted
/// lexicographically inside each layer. `gen_action[s][x]` is the id of
/// `g_s * x`, where `g_s` is the s-th generator used for enumeration.
#[derive(Debug, Clone)]
pub struct GroupTable<E> {
    elements: Vec<E>,
    index: FxHashMap<ElemKey, u32>,
    layer_starts: Vec<usize>,
    gen_action: Vec<Vec<u32>>,
    inverse: Vec<u32>,
}

pub fn enumerate_group<E: GroupElement>(gens: &GenSet<E>, cap: usize) -> Result<GroupTable<E>> {
    if gens.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    if cap == 0 {
        return Err(Error::InvalidParameter("cap must be at least 1".into()));
    }
    let identity = gens.members()[0].identity_of();
    let mut elements = vec![identity.clone()];
    let mut index = FxHashMap::default();
    index.insert(identity.key(), 0u32);
    let mut layer_starts = vec![0usize];
    let mut frontier = 0..1usize;
    while !frontier.is_empty() {
        let mut next: Vec<E> = Vec::new();
        for x in frontier.clone() {
            for g in gens.members() {
                let y = g.mul(&elements[x]);
                if !index.contains_key(&y.key()) {
                    next.push(y);
                }
            }
        }
        next.sort_unstable();
        next.dedup();
        if elements.len() + next.len() > cap {
            return Err(Error::CapExceeded {
                cap,
                reached: elements.len() + next.len(),
            });
        }
        let start = elements.len();
        for y in next {
            index.insert(y.key(), elements.len() as u32);
            elements.push(y);
        }
        if elements.len() > start {
            layer_starts.push(start);
        }
        frontier = start..elements.len();
    }
    let mut table = GroupTable {
        elements,
        index,
        layer_starts,
        gen_action: Vec::new(),
        inverse: Vec::new(),
    };
    table.gen_action = gens
        .members()
        .iter()
        .map(|g| table.left_action(g))
        .collect::<Option<Vec<_>>>()
        .expect("generators act on their own closure");
    table.inverse = table
        .elements
        .iter()
        .map(|e| table.id_of(&e.inverse()))
        .collect::<Option<Vec<_>>>()
        .expect("closure of a finite set under multiplication is a group");
    Ok(table)
}

impl<E: GroupElement> GroupTable<E> {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[E] {
        &self.elements
    }

    pub fn element(&self, id: u32) -> &E {
        &self.elements[id as usize]
    }

    pub fn identity(&self) -> u32 {
        0
    }

    pub fn id_of(&self, e: &E) -> Option<u32> {
        self.index.get(&e.key()).copied()
    }

    pub fn inverse(&self, id: u32) -> u32 {
        self.inverse[id as usize]
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.id_of(&self.element(a).mul(self.element(b)))
            .expect("table is closed under multiplication")
    }

    /// Permutation `x -> g x` on element ids, or `None` if `g` is not in the table.
    pub fn left_action(&self, g: &E) -> Option<Vec<u32>> {
        self.elements.iter().map(|x| self.id_of(&g.mul(x))).collect()
    }

    /// Actions of every member of a generator multiset.
    pub fn actions(&self, gens: &GenSet<E>) -> Result<Vec<Vec<u32>>> {
        gens.members()
            .iter()
            .map(|g| {
                self.left_action(g)
                    .ok_or_else(|| Error::InvalidParameter(format!("generator {g:?} not in table")))
            })
            .collect()
    }

    pub fn gen_action(&self) -> &[Vec<u32>] {
        &self.gen_action
    }

    /// Breadth-first distance of each element from the identity.
    pub fn layer_of(&self, id: u32) -> usize {
        self.layer_starts
            .partition_point(|&s| s <= id as usize)
            .saturating_sub(1)
    }

    pub fn diameter(&self) -> usize {
        self.layer_starts.len() - 1
    }

    /// Checks the closure invariants: actions are permutations landing in the
    /// table and inverses are present and involutive.
    pub fn verify_closed(&self) -> bool {
        let n = self.order();
        let perms_ok = self.gen_action.iter().all(|perm| {
            let mut seen = vec![false; n];
            perm.len() == n
                && perm.iter().all(|&y| {
                    let fresh = (y as usize) < n && !seen[y as usize];
                    if fresh {
                        seen[y as usize] = true;
                    }
                    fresh
                })
        });
        let inverses_ok = (0..n as u32).all(|x| {
            let xi = self.inverse(x);
            self.inverse(xi) == x && self.element(x).mul(self.element(xi)).is_identity()
        });
        let index_ok = self.index.len() == n
            && self
                .elements
                .iter()
                .enumerate()
                .all(|(i, e)| self.id_of(e) == Some(i as u32));
        perms_ok && inverses_ok && index_ok
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{sanov, MatFp, PrimeModulus, ZMod};

    fn unipotent_pair(p: u64) -> GenSet<MatFp> {
        let md = PrimeModulus::new(p, 2).unwrap();
        GenSet::symmetrized(vec![
            MatFp::new(md, &[1, 1, 0, 1]).unwrap(),
            MatFp::new(md, &[1, 0, 1, 1]).unwrap(),
        ])
        .unwrap()
    }

    /// Independent oracle: closure by repeated multiplication of a plain set.
    fn naive_closure(gens: &[MatFp]) -> usize {
        let mut set: std::collections::BTreeSet<MatFp> = [MatFp::identity(gens[0].modulus())].into_iter().collect();
        loop {
            let new: Vec<MatFp> = set
                .iter()
                .flat_map(|x| gens.iter().map(move |g| x.mul(g)))
                .filter(|y| !set.contains(y))
                .collect();
            if new.is_empty() {
                return set.len();
            }
            set.extend(new);
        }
    }

    #[test]
    fn identity_generates_trivial_group() {
        let md = PrimeModulus::new(5, 2).unwrap();
        let g = GenSet::symmetrized(vec![MatFp::identity(md)]).unwrap();
        let t = enumerate_group(&g, 10).unwrap();
        assert_eq!(t.order(), 1);
        assert!(t.verify_closed());
    }

    #[test]
    fn elementary_generators_give_full_sl2() {
        for (p, order) in [(3, 24), (5, 120)] {
            let gens = unipotent_pair(p);
            let t = enumerate_group(&gens, DEFAULT_CAP).unwrap();
            assert_eq!(t.order(), order);
            assert_eq!(naive_closure(gens.members()), order);
            assert!(t.verify_closed());
        }
    }

    #[test]
    fn sanov_generators_surject_for_odd_primes() {
        for p in [3u64, 5, 7, 11, 13, 17] {
            let gens = sanov().reduce(PrimeModulus::new(p, 2).unwrap()).unwrap();
            let t = enumerate_group(&gens, DEFAULT_CAP).unwrap();
            assert_eq!(t.order() as u64, p * (p * p - 1), "p = {p}");
        }
    }

    #[test]
    fn cap_is_enforced() {
        let err = enumerate_group(&unipotent_pair(7), 100).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { cap: 100, .. }));
    }

    #[test]
    fn ordering_is_bfs_then_lexicographic() {
        let t = enumerate_group(&unipotent_pair(5), DEFAULT_CAP).unwrap();
        assert!(t.element(0).is_identity());
        for w in t.elements().windows(2).enumerate() {
            let (i, pair) = w;
            let (a, b) = (i as u32, i as u32 + 1);
            if t.layer_of(a) == t.layer_of(b) {
                assert!(pair[0] < pair[1]);
            } else {
                assert!(t.layer_of(a) < t.layer_of(b));
            }
        }
    }

    #[test]
    fn cyclic_group_table() {
        let g = GenSet::symmetrized(vec![ZMod::new(1, 6)]).unwrap();
        let t = enumerate_group(&g, 100).unwrap();
        assert_eq!(t.order(), 6);
        assert_eq!(t.diameter(), 3);
        let two = t.id_of(&ZMod::new(2, 6)).unwrap();
        let four = t.id_of(&ZMod::new(4, 6)).unwrap();
        assert_eq!(t.mul(two, four), 0);
        assert_eq!(t.inverse(two), four);
    }

    #[test]
    fn sl3_small() {
        let md = PrimeModulus::new(2, 3).unwrap();
        let e = |i: usize, j: usize| {
            let mut m = vec![0i64; 9];
            for k in 0..3 {
                m[k * 3 + k] = 1;
            }
            m[i * 3 + j] = 1;
            MatFp::new(md, &m).unwrap()
        };
        let gens = GenSet::symmetrized(vec![e(0, 1), e(1, 2), e(2, 0)]).unwrap();
        let t = enumerate_group(&gens, DEFAULT_CAP).unwrap();
        assert_eq!(t.order(), 168);
        assert!(t.verify_closed());
    }
}
