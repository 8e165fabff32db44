//! Quiver classes whose isomorphism classes have combinatorial descriptors.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use super::{end_dim, hom_dim, quotient_module, sub_module, submodule_census, CensusBudget, FqModule};
use crate::error::{Error, Result};
use crate::quiver::Quiver;

/// Descriptor requirements shared by every family.
pub trait Descriptor: Clone + Ord + Eq + Hash + fmt::Debug + fmt::Display + Serialize + Send + Sync + 'static {}
impl<T> Descriptor for T where T: Clone + Ord + Eq + Hash + fmt::Debug + fmt::Display + Serialize + Send + Sync + 'static {}

pub trait Family: Send + Sync {
    type Desc: Descriptor;

    fn quiver(&self) -> &Quiver;

    fn dim(&self, d: &Self::Desc) -> Vec<usize>;

    /// Every isomorphism class of the given dimension vector over `F_p`.
    fn classes(&self, dim: &[usize], p: u32) -> Result<Vec<Self::Desc>>;

    fn build(&self, d: &Self::Desc, p: u32) -> Result<FqModule>;

    fn classify(&self, m: &FqModule) -> Result<Self::Desc>;

    /// `(multiplicity, residue degree)` of each indecomposable summand type.
    fn blocks(&self, d: &Self::Desc) -> Vec<(u32, u32)>;

    /// Indecomposables of total dimension at most `max_total`.
    fn indecomposables(&self, max_total: usize, p: u32) -> Result<Vec<Self::Desc>>;

    /// Whether descriptors mean the same class over every field.
    fn field_independent(&self) -> bool {
        true
    }

    fn total_dim(&self, d: &Self::Desc) -> usize {
        self.dim(d).iter().sum()
    }
}

/// Hom dimensions against a fixed list of test modules.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct IsoFingerprint {
    pub dims: Vec<usize>,
    pub end_dim: usize,
    pub hom_from: Vec<usize>,
    pub hom_to: Vec<usize>,
}

pub fn fingerprint(m: &FqModule, tests: &[FqModule]) -> Result<IsoFingerprint> {
    Ok(IsoFingerprint {
        dims: m.dims.clone(),
        end_dim: end_dim(m),
        hom_from: tests.iter().map(|x| hom_dim(x, m)).collect::<Result<_>>()?,
        hom_to: tests.iter().map(|x| hom_dim(m, x)).collect::<Result<_>>()?,
    })
}

/// Fingerprint against every indecomposable of total dimension ≤ that of `m`.
pub fn family_fingerprint<F: Family>(fam: &F, m: &FqModule) -> Result<IsoFingerprint> {
    let tests: Vec<FqModule> = fam
        .indecomposables(m.total_dim().max(1), m.p)?
        .iter()
        .map(|d| fam.build(d, m.p))
        .collect::<Result<_>>()?;
    fingerprint(m, &tests)
}

/// `|GL_m(F_Q)|`.
pub fn gl_order(m: u32, big_q: &BigInt) -> BigInt {
    let qm = num_traits::pow(big_q.clone(), m as usize);
    (0..m).fold(BigInt::one(), |acc, i| acc * (&qm - num_traits::pow(big_q.clone(), i as usize)))
}

/// `a_M = q^{dim rad End M} Π |GL_{m_i}(F_{q^{d_i}})|`.
pub fn aut_structural<F: Family>(fam: &F, d: &F::Desc, p: u32) -> Result<BigInt> {
    let m = fam.build(d, p)?;
    let end = end_dim(&m) as u64;
    let q = BigInt::from(p);
    let blocks = fam.blocks(d);
    let semisimple: u64 = blocks.iter().map(|&(m, deg)| (m as u64) * (m as u64) * deg as u64).sum();
    if semisimple > end {
        return Err(Error::Internal(format!("block data for {d} exceeds dim End")));
    }
    let mut a = num_traits::pow(q.clone(), (end - semisimple) as usize);
    for (mult, deg) in blocks {
        a *= gl_order(mult, &num_traits::pow(q.clone(), deg as usize));
    }
    Ok(a)
}

/// `g^L_{MN}` for every pair `(M, N)` with `dim N = sub_dim`, by one census of `L`.
pub fn hall_table<F: Family>(
    fam: &F,
    l: &F::Desc,
    sub_dim: &[usize],
    p: u32,
    budget: &CensusBudget,
) -> Result<HashMap<(F::Desc, F::Desc), u64>> {
    let lm = fam.build(l, p)?;
    let mut table: HashMap<(F::Desc, F::Desc), u64> = HashMap::new();
    let mut err = None;
    submodule_census(&lm, Some(sub_dim), budget, |w| {
        if err.is_some() {
            return;
        }
        let sub = sub_module(&lm, w);
        let quo = quotient_module(&lm, w);
        match (fam.classify(&quo), fam.classify(&sub)) {
            (Ok(m), Ok(n)) => *table.entry((m, n)).or_insert(0) += 1,
            (Err(e), _) | (_, Err(e)) => err = Some(e),
        }
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(table),
    }
}

/// `g^L_{MN}`: submodules `W ⊆ L` with `W ≅ N` and `L/W ≅ M`.
pub fn hall_number<F: Family>(
    fam: &F,
    l: &F::Desc,
    m: &F::Desc,
    n: &F::Desc,
    p: u32,
    budget: &CensusBudget,
) -> Result<u64> {
    let (dl, dm, dn) = (fam.dim(l), fam.dim(m), fam.dim(n));
    if dl.iter().zip(dm.iter().zip(&dn)).any(|(a, (b, c))| *a != b + c) {
        return Ok(0);
    }
    let t = hall_table(fam, l, &dn, p, budget)?;
    Ok(t.get(&(m.clone(), n.clone())).copied().unwrap_or(0))
}
