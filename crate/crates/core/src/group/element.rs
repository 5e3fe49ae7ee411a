use std::hash::Hash;

/// Hash key for a group element. Small matrices pack into one word; larger
/// ones fall back to a byte vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ElemKey {
    Packed(u64),
    Bytes(Box<[u8]>),
}

/// Elements of a finite group that can be enumerated into a [`GroupTable`].
///
/// `Ord` fixes the within-layer ordering of breadth-first enumeration.
///
/// [`GroupTable`]: crate::group::GroupTable
pub trait GroupElement: Clone + Eq + Hash + Ord + std::fmt::Debug + Send + Sync {
    fn mul(&self, rhs: &Self) -> Self;
    fn inverse(&self) -> Self;
    /// The identity of the group this element lives in.
    fn identity_of(&self) -> Self;
    fn is_identity(&self) -> bool {
        *self == self.identity_of()
    }
    fn key(&self) -> ElemKey;
}

/// Z/n written additively, used for circulant Cayley graphs and box examples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZMod {
    pub value: u64,
    pub modulus: u64,
}

impl ZMod {
    pub fn new(value: i64, modulus: u64) -> Self {
        assert!(modulus >= 1);
        Self {
            value: value.rem_euclid(modulus as i64) as u64,
            modulus,
        }
    }
}

impl GroupElement for ZMod {
    fn mul(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        Self {
            value: (self.value + rhs.value) % self.modulus,
            modulus: self.modulus,
        }
    }

    fn inverse(&self) -> Self {
        Self {
            value: (self.modulus - self.value) % self.modulus,
            modulus: self.modulus,
        }
    }

    fn identity_of(&self) -> Self {
        Self {
            value: 0,
            modulus: self.modulus,
        }
    }

    fn key(&self) -> ElemKey {
        ElemKey::Packed(self.value)
    }
}

/// An element of a direct product G1 x G2, multiplied componentwise.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pair<A, B>(pub A, pub B);

impl<A: GroupElement, B: GroupElement> GroupElement for Pair<A, B> {
    fn mul(&self, rhs: &Self) -> Self {
        Pair(self.0.mul(&rhs.0), self.1.mul(&rhs.1))
    }

    fn inverse(&self) -> Self {
        Pair(self.0.inverse(), self.1.inverse())
    }

    fn identity_of(&self) -> Self {
        Pair(self.0.identity_of(), self.1.identity_of())
    }

    fn key(&self) -> ElemKey {
        match (self.0.key(), self.1.key()) {
            (ElemKey::Packed(a), ElemKey::Packed(b)) if a < (1 << 32) && b < (1 << 32) => {
                ElemKey::Packed((a << 32) | b)
            }
            (ka, kb) => {
                let mut bytes = key_bytes(&ka);
                bytes.push(0xff);
                bytes.extend(key_bytes(&kb));
                ElemKey::Bytes(bytes.into_boxed_slice())
            }
        }
    }
}

fn key_bytes(k: &ElemKey) -> Vec<u8> {
    match k {
        ElemKey::Packed(w) => w.to_le_bytes().to_vec(),
        ElemKey::Bytes(b) => b.to_vec(),
    }
}
