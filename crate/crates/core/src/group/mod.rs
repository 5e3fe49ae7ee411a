//! Exact arithmetic over F_p and Q, group enumeration, characteristic
//! polynomials and standard subgroups.

mod element;
mod genset;
mod intmat;
pub mod io;
pub(crate) mod matfp;
mod modp;
mod poly;
mod subgroups;
mod table;

pub use element::{ElemKey, GroupElement, Pair, ZMod};
pub use genset::{elementary_generators, sanov, GenSet, Invertible};
pub use intmat::{heights, reduce_mod, Heights, IntMat};
pub use matfp::MatFp;
pub use modp::{inv_mod, is_prime, legendre, pow_mod, sl_order, PrimeModulus};
pub use poly::{char_poly, cycle_type, is_power_unipotent, is_regular_semisimple, PolyFp};
pub use subgroups::{standard_subgroup, IdSet, SubgroupKind};
pub use table::{enumerate_group, GroupTable, DEFAULT_CAP};

/// Cyclic group Z/n with generators `{+1, -1}`.
pub fn cycle(n: u64) -> (GroupTable<ZMod>, GenSet<ZMod>) {
    let gens = GenSet::symmetrized(vec![ZMod::new(1, n)]).expect("nonempty");
    let table = enumerate_group(&gens, n as usize).expect("cyclic group fits");
    (table, gens)
}

/// Full SL_d(F_p) enumerated from the given integer generators.
pub fn sl_table(gens: &GenSet<IntMat>, p: u64, cap: usize) -> crate::Result<(GroupTable<MatFp>, GenSet<MatFp>)> {
    let reduced = gens.reduce(PrimeModulus::new(p, gens.dim())?)?;
    let table = enumerate_group(&reduced, cap)?;
    Ok((table, reduced))
}
