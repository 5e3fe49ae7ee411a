use super::element::GroupElement;
use super::intmat::{reduce_mod, IntMat};
use super::matfp::MatFp;
use super::modp::PrimeModulus;
use crate::error::{Error, Result};

/// Types with an inverse, so generator sets can be symmetrized.
pub trait Invertible: Clone + PartialEq {
    fn inv(&self) -> Self;
}

impl<T: GroupElement> Invertible for T {
    fn inv(&self) -> Self {
        self.inverse()
    }
}

impl Invertible for IntMat {
    fn inv(&self) -> Self {
        self.inverse()
    }
}

/// A symmetric multiset of generators.
///
/// The uniform measure on `members` is the step distribution of the walk.
/// With `lazy` set the step distribution puts an extra 1/2 on the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct GenSet<E> {
    members: Vec<E>,
    lazy: bool,
}

impl<E: Invertible> GenSet<E> {
    /// Appends each missing inverse right after its element.
    pub fn symmetrized(members: Vec<E>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        let mut out: Vec<E> = Vec::with_capacity(2 * members.len());
        for m in members {
            if out.contains(&m) {
                continue;
            }
            let inv = m.inv();
            let self_inverse = inv == m;
            out.push(m);
            if !self_inverse && !out.contains(&inv) {
                out.push(inv);
            }
        }
        Ok(Self {
            members: out,
            lazy: false,
        })
    }

    /// Takes the list as given, verifying that it is closed under inversion
    /// with matching multiplicities.
    pub fn asserted_symmetric(members: Vec<E>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        for m in &members {
            let inv = m.inv();
            let count = members.iter().filter(|x| **x == *m).count();
            let inv_count = members.iter().filter(|x| **x == inv).count();
            if count != inv_count {
                return Err(Error::NotSymmetric);
            }
        }
        Ok(Self { members, lazy: false })
    }

    pub fn lazy(mut self, lazy: bool) -> Self {
        self.lazy = lazy;
        self
    }
}

impl<E> GenSet<E> {
    pub fn members(&self) -> &[E] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_lazy(&self) -> bool {
        self.lazy
    }

    pub fn map<F, T>(&self, f: F) -> Result<GenSet<T>>
    where
        F: FnMut(&E) -> Result<T>,
    {
        Ok(GenSet {
            members: self.members.iter().map(f).collect::<Result<_>>()?,
            lazy: self.lazy,
        })
    }
}

impl GenSet<IntMat> {
    /// Pushes the generator multiset forward to SL_d(F_p). Multiplicities are
    /// kept, so the reduced set carries the image of the step measure.
    pub fn reduce(&self, modulus: PrimeModulus) -> Result<GenSet<MatFp>> {
        self.map(|m| reduce_mod(m, modulus))
    }

    pub fn dim(&self) -> usize {
        self.members[0].d()
    }
}

/// The symmetrized pair `[[1,2],[0,1]]`, `[[1,0],[2,1]]`, generating a free
/// Zariski-dense subgroup of SL_2(Z).
pub fn sanov() -> GenSet<IntMat> {
    GenSet::symmetrized(vec![
        IntMat::from_ints(2, &[1, 2, 0, 1]).unwrap(),
        IntMat::from_ints(2, &[1, 0, 2, 1]).unwrap(),
    ])
    .unwrap()
}

/// The elementary matrices `E_ij(1)`, i != j, symmetrized. They generate
/// SL_d(F_p) for every prime p.
pub fn elementary_generators(d: usize) -> Result<GenSet<IntMat>> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let mut members = Vec::new();
    for i in 0..d {
        for j in 0..d {
            if i != j {
                members.push(IntMat::identity(d).with_entry(i, j, 1));
            }
        }
    }
    GenSet::symmetrized(members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::ZMod;

    #[test]
    fn sanov_has_four_members() {
        let s = sanov();
        assert_eq!(s.len(), 4);
        assert_eq!(s.members()[1], s.members()[0].inverse());
    }

    #[test]
    fn involutions_are_not_duplicated() {
        let s = GenSet::symmetrized(vec![ZMod::new(2, 4)]).unwrap();
        assert_eq!(s.len(), 1);
        let s = GenSet::symmetrized(vec![ZMod::new(1, 4)]).unwrap();
        assert_eq!(s.members(), &[ZMod::new(1, 4), ZMod::new(3, 4)]);
    }

    #[test]
    fn asserted_symmetric_is_checked() {
        assert_eq!(
            GenSet::asserted_symmetric(vec![ZMod::new(1, 5)]),
            Err(Error::NotSymmetric)
        );
        assert!(GenSet::asserted_symmetric(vec![ZMod::new(1, 5), ZMod::new(4, 5)]).is_ok());
    }

    #[test]
    fn empty_rejected() {
        assert_eq!(GenSet::<ZMod>::symmetrized(vec![]), Err(Error::EmptyGenerators));
    }

    #[test]
    fn reduction_keeps_multiplicity() {
        let r = sanov().reduce(PrimeModulus::new(2, 2).unwrap()).unwrap();
        assert_eq!(r.len(), 4);
        assert!(r.members().iter().all(|m| m.is_identity()));
    }
}
