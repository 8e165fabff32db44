//! The twisted Hall algebra over one prime field. Coefficients keep `v`
//! symbolic; only Hall numbers and automorphism counts are numeric.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::{qlaurent_sqrt, AlgebraElement, Symbol};
use crate::error::{Error, Result};
use crate::fqrep::family::{aut_structural, Family};
use crate::fqrep::linalg::{Fq, Mat};
use crate::fqrep::{
    end_dim, for_each_combination, hom_basis, quotient_module, sub_module, submodule_census, CensusBudget, FqModule,
    Subspace, AUT_BUDGET,
};
use crate::hallpoly::HallCounter;
use crate::laurent::{Laurent, QLaurent};
use crate::pbw::Word;

/// Element of `H ⊗ H` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorElement<S: Ord> {
    terms: BTreeMap<(S, S), QLaurent>,
}

impl<S: Symbol> Default for TensorElement<S> {
    fn default() -> Self {
        Self { terms: BTreeMap::new() }
    }
}

impl<S: Symbol> TensorElement<S> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, a: S, b: S, c: &QLaurent) {
        if c.is_zero() {
            return;
        }
        let key = (a, b);
        let e = self.terms.entry(key.clone()).or_insert_with(QLaurent::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn coeff(&self, a: &S, b: &S) -> QLaurent {
        self.terms.get(&(a.clone(), b.clone())).cloned().unwrap_or_else(QLaurent::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(S, S), &QLaurent)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut x = self.clone();
        for ((a, b), c) in &other.terms {
            x.add_term(a.clone(), b.clone(), c);
        }
        x
    }

    /// Whether `self` and `other` agree once `v = √q`.
    pub fn agree_at(&self, other: &Self, q: u64) -> bool {
        let mut d = self.clone();
        for ((a, b), c) in &other.terms {
            d.add_term(a.clone(), b.clone(), &-c);
        }
        d.terms.values().all(|c| {
            let (a, b) = qlaurent_sqrt(c, q);
            a.is_zero() && b.is_zero()
        })
    }
}

/// Number of flags `L = L_0 ⊃ L_1 ⊃ … ⊃ L_s = 0` with `L_{k-1}/L_k`
/// semisimple of type `a_k · S_{i_k}`, letters read top first.
pub fn flag_count(l: &FqModule, letters: &[(usize, u32)], budget: &CensusBudget) -> Result<u64> {
    let Some((&(i, a), rest)) = letters.split_first() else {
        return Ok(u64::from(l.total_dim() == 0));
    };
    let a = a as usize;
    if l.dims[i] < a {
        return Ok(0);
    }
    let mut sub_dim = l.dims.clone();
    sub_dim[i] -= a;
    let mut subs = Vec::new();
    submodule_census(l, Some(&sub_dim), budget, |w| {
        if quotient_module(l, w).maps.iter().all(Mat::is_zero) {
            subs.push(sub_module(l, w));
        }
    })?;
    let mut total = 0u64;
    for s in subs {
        total += flag_count(&s, rest, budget)?;
    }
    Ok(total)
}

/// `Σ a_k² + Σ_{j<k} ⟨a_j i_j, a_k i_k⟩`: the `v`-power of a word's
/// coefficient before the `−dim End L` correction.
pub fn word_exponent(euler: impl Fn(&[i64], &[i64]) -> i64, n: usize, w: &Word) -> i64 {
    let vecs: Vec<Vec<i64>> = w
        .letters()
        .iter()
        .map(|&(i, a)| {
            let mut v = vec![0i64; n];
            v[i] = a as i64;
            v
        })
        .collect();
    let mut e: i64 = w.letters().iter().map(|&(_, a)| (a as i64) * (a as i64)).sum();
    for j in 0..vecs.len() {
        for k in j + 1..vecs.len() {
            e += euler(&vecs[j], &vecs[k]);
        }
    }
    e
}

pub struct FieldAlgebra<'a, F: Family> {
    counter: &'a HallCounter<F>,
    p: u32,
    f: Fq,
    ends: Mutex<HashMap<F::Desc, usize>>,
}

type El<F> = AlgebraElement<<F as Family>::Desc>;

impl<'a, F: Family> FieldAlgebra<'a, F> {
    pub fn new(counter: &'a HallCounter<F>, p: u32) -> Result<Self> {
        Ok(Self { counter, p, f: Fq::new(p)?, ends: Mutex::new(HashMap::new()) })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn family(&self) -> &F {
        self.counter.family()
    }

    pub fn build(&self, d: &F::Desc) -> Result<FqModule> {
        self.family().build(d, self.p)
    }

    pub fn end(&self, d: &F::Desc) -> Result<usize> {
        if let Some(&e) = self.ends.lock().unwrap().get(d) {
            return Ok(e);
        }
        let e = end_dim(&self.build(d)?);
        self.ends.lock().unwrap().insert(d.clone(), e);
        Ok(e)
    }

    pub fn aut(&self, d: &F::Desc) -> Result<BigInt> {
        aut_structural(self.family(), d, self.p)
    }

    fn dimv(&self, d: &F::Desc) -> Vec<i64> {
        self.family().dim(d).iter().map(|&x| x as i64).collect()
    }

    fn euler(&self, a: &[i64], b: &[i64]) -> i64 {
        self.family().quiver().euler_unchecked(a, b)
    }

    fn sym(&self, a: &[i64], b: &[i64]) -> i64 {
        self.family().quiver().sym_unchecked(a, b)
    }

    /// Class of the representation with dimension `dims` and zero maps.
    pub fn semisimple(&self, dims: &[usize]) -> Result<F::Desc> {
        semisimple_class(self.family(), dims, self.p)
    }

    pub fn one(&self) -> Result<El<F>> {
        Ok(AlgebraElement::basis(self.semisimple(&vec![0; self.family().quiver().n()])?))
    }

    /// `⟨S_i^{⊕a}⟩`.
    pub fn simple_power(&self, i: usize, a: u32) -> Result<El<F>> {
        let mut d = vec![0usize; self.family().quiver().n()];
        d[i] = a as usize;
        Ok(AlgebraElement::basis(self.semisimple(&d)?))
    }

    pub fn mul(&self, x: &El<F>, y: &El<F>) -> Result<El<F>> {
        self.mul_impl(x, y, None)
    }

    /// The product, keeping only the coefficients of `targets`.
    pub fn mul_at(&self, x: &El<F>, y: &El<F>, targets: &[F::Desc]) -> Result<El<F>> {
        self.mul_impl(x, y, Some(targets))
    }

    fn mul_impl(&self, x: &El<F>, y: &El<F>, targets: Option<&[F::Desc]>) -> Result<El<F>> {
        let fam = self.family();
        let dims_of = |e: &El<F>| e.support().map(|d| fam.dim(d)).collect::<BTreeSet<_>>();
        let (dxs, dys) = (dims_of(x), dims_of(y));
        let mut jobs: Vec<(F::Desc, Vec<usize>)> = Vec::new();
        for dx in &dxs {
            for dy in &dys {
                let total: Vec<usize> = dx.iter().zip(dy).map(|(a, b)| a + b).collect();
                let ls: Vec<F::Desc> = match targets {
                    Some(t) => t.iter().filter(|l| fam.dim(l) == total).cloned().collect(),
                    None => fam.classes(&total, self.p)?,
                };
                jobs.extend(ls.into_iter().map(|l| (l, dy.clone())));
            }
        }
        let parts: Vec<Result<Vec<(F::Desc, Laurent)>>> = jobs
            .par_iter()
            .map(|(l, dy)| {
                let table = self.counter.table(l, dy, self.p)?;
                let el = self.end(l)? as i64;
                let mut acc = Laurent::zero();
                let mut entries: Vec<(&(F::Desc, F::Desc), &u64)> = table.iter().collect();
                entries.sort();
                for ((m, n), &g) in entries {
                    let (cx, cy) = (x.coeff(m), y.coeff(n));
                    if cx.is_zero() || cy.is_zero() {
                        continue;
                    }
                    let e = self.end(m)? as i64 + self.end(n)? as i64 - el + self.euler(&self.dimv(m), &self.dimv(n));
                    acc += &(&(&cx * &cy) * &Laurent::monomial(e, BigInt::from(g)));
                }
                Ok(vec![(l.clone(), acc)])
            })
            .collect();
        let mut out = AlgebraElement::zero();
        for part in parts {
            for (l, c) in part? {
                out.add_term(l, &c);
            }
        }
        Ok(out)
    }

    /// `u_{i_1}^{(a_1)} ∗ … ∗ u_{i_s}^{(a_s)}` by repeated multiplication.
    pub fn word(&self, w: &Word) -> Result<El<F>> {
        let mut acc = self.one()?;
        for &(i, a) in w.letters() {
            acc = self.mul(&acc, &self.simple_power(i, a)?)?;
        }
        Ok(acc)
    }

    /// Coefficient of `⟨L⟩` in the monomial of `w`, by counting flags of `L`.
    pub fn word_coefficient(&self, l: &F::Desc, w: &Word) -> Result<Laurent> {
        let q = self.family().quiver();
        if w.dim(q.n()) != self.family().dim(l) {
            return Ok(Laurent::zero());
        }
        let lm = self.build(l)?;
        let flags = flag_count(&lm, w.letters(), self.counter.budget())?;
        let e = word_exponent(|a, b| q.euler_unchecked(a, b), q.n(), w) - self.end(l)? as i64;
        Ok(Laurent::monomial(e, BigInt::from(flags)))
    }

    /// `(⟨M⟩, ⟨N⟩) = δ_{MN} v^{2 dim End M} / a_M`, extended bilinearly.
    pub fn green_form(&self, x: &El<F>, y: &El<F>) -> Result<QLaurent> {
        let mut acc = QLaurent::zero();
        for (m, cx) in x.terms() {
            let cy = y.coeff(m);
            if cy.is_zero() {
                continue;
            }
            let w = self.form_weight(m)?;
            acc += &(&(&cx.to_rational() * &cy.to_rational()) * &w);
        }
        Ok(acc)
    }

    fn form_weight(&self, m: &F::Desc) -> Result<QLaurent> {
        let a = BigRational::from_integer(self.aut(m)?);
        Ok(QLaurent::monomial(2 * self.end(m)? as i64, a.recip()))
    }

    /// Green's coproduct in the `⟨·⟩` basis. The coefficient of
    /// `⟨M⟩ ⊗ ⟨N⟩` in `r(⟨L⟩)` is `v^{end L − end M − end N + ⟨M,N⟩}
    /// g^L_{MN} a_M a_N / a_L`, with `g^L_{MN} a_N` obtained by counting
    /// monomorphisms `N → L` with cokernel `≅ M`.
    pub fn coproduct(&self, x: &El<F>) -> Result<TensorElement<F::Desc>> {
        let fam = self.family();
        let mut out = TensorElement::zero();
        for (l, cl) in x.terms() {
            let lm = self.build(l)?;
            let el = self.end(l)? as i64;
            let al = BigRational::from_integer(self.aut(l)?);
            for dn in sub_dims(&lm.dims) {
                for n in fam.classes(&dn, self.p)? {
                    let counts = self.mono_census(&lm, &n)?;
                    let an = self.end(&n)? as i64;
                    for (m, cnt) in counts {
                        let e = el - self.end(&m)? as i64 - an + self.euler(&self.dimv(&m), &self.dimv(&n));
                        let am = BigRational::from_integer(self.aut(&m)?);
                        let c = BigRational::from_integer(BigInt::from(cnt)) * am / &al;
                        out.add_term(m, n.clone(), &(&cl.to_rational() * &QLaurent::monomial(e, c)));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Cokernel classes of all monomorphisms `N → L`, with multiplicity.
    fn mono_census(&self, lm: &FqModule, n: &F::Desc) -> Result<BTreeMap<F::Desc, u64>> {
        let fam = self.family();
        let nm = self.build(n)?;
        let mut counts = BTreeMap::new();
        let basis = hom_basis(&nm, lm)?;
        if basis.is_empty() {
            if nm.total_dim() == 0 {
                counts.insert(fam.classify(lm)?, 1);
            }
            return Ok(counts);
        }
        let total = (self.p as u64).checked_pow(basis.len() as u32).unwrap_or(u64::MAX);
        if total > AUT_BUDGET {
            return Err(Error::Budget(format!("{total} homomorphisms exceed {AUT_BUDGET}")));
        }
        let f = self.f;
        let mut err = None;
        for_each_combination(&basis, f, |g| {
            if g.iter().zip(&nm.dims).all(|(m, &d)| m.rank(f) == d) {
                let rows: Vec<Mat> = g.iter().map(Mat::transpose).collect();
                let w = Subspace::span(&rows, f);
                match fam.classify(&quotient_module(lm, &w)) {
                    Ok(m) => *counts.entry(m).or_insert(0) += 1,
                    Err(e) => {
                        err = Some(e);
                        return false;
                    }
                }
            }
            true
        });
        match err {
            Some(e) => Err(e),
            None => Ok(counts),
        }
    }

    /// `(t, y₁ ⊗ y₂)` with the product form on `H ⊗ H`.
    pub fn tensor_form(&self, t: &TensorElement<F::Desc>, y1: &El<F>, y2: &El<F>) -> Result<QLaurent> {
        let mut acc = QLaurent::zero();
        for ((m, n), c) in t.terms() {
            let (a, b) = (y1.coeff(m), y2.coeff(n));
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let w = &self.form_weight(m)? * &self.form_weight(n)?;
            acc += &(&(c * &w) * &(&a * &b).to_rational());
        }
        Ok(acc)
    }

    /// `(x₁ ⊗ x₂)(y₁ ⊗ y₂) = v^{(|x₂|, |y₁|)} x₁y₁ ⊗ x₂y₂`.
    pub fn tensor_mul(
        &self,
        a: &TensorElement<F::Desc>,
        b: &TensorElement<F::Desc>,
    ) -> Result<TensorElement<F::Desc>> {
        let mut out = TensorElement::zero();
        for ((x1, x2), ca) in a.terms() {
            for ((y1, y2), cb) in b.terms() {
                let e = self.sym(&self.dimv(x2), &self.dimv(y1));
                let p1 = self.mul(&AlgebraElement::basis(x1.clone()), &AlgebraElement::basis(y1.clone()))?;
                let p2 = self.mul(&AlgebraElement::basis(x2.clone()), &AlgebraElement::basis(y2.clone()))?;
                let base = &(ca * cb) * &QLaurent::monomial(e, BigRational::one());
                for (l1, c1) in p1.terms() {
                    for (l2, c2) in p2.terms() {
                        out.add_term(l1.clone(), l2.clone(), &(&base * &(c1 * c2).to_rational()));
                    }
                }
            }
        }
        Ok(out)
    }

    /// `x ↦ x ⊗ 1` style embedding of an element as `Σ c ⟨M⟩ ⊗ ⟨N⟩`.
    pub fn tensor(&self, x: &El<F>, y: &El<F>) -> TensorElement<F::Desc> {
        let mut out = TensorElement::zero();
        for (m, a) in x.terms() {
            for (n, b) in y.terms() {
                out.add_term(m.clone(), n.clone(), &(a * b).to_rational());
            }
        }
        out
    }
}

/// Class of the semisimple representation of dimension `dims`.
pub fn semisimple_class<F: Family>(fam: &F, dims: &[usize], p: u32) -> Result<F::Desc> {
    let q = fam.quiver();
    let maps = q.arrows().iter().map(|&(s, t)| Mat::zeros(dims[t], dims[s])).collect();
    fam.classify(&FqModule::new(p, dims.to_vec(), q.arrows().to_vec(), maps)?)
}

/// Every dimension vector `0 ≤ d ≤ dims`.
pub(crate) fn sub_dims(dims: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &d in dims {
        out = out.into_iter().flat_map(|v| (0..=d).map(move |k| [v.clone(), vec![k]].concat())).collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hallalg::agree_at;
    use crate::fqrep::cyclic::{CyclicFamily, Multisegment};
    use crate::fqrep::kronecker::{KPoint, KronDesc, KroneckerFamily};
    use crate::partitions::Partition;
    use std::sync::Arc;

    fn cyc(n: usize) -> HallCounter<CyclicFamily> {
        HallCounter::new(Arc::new(CyclicFamily::new(n).unwrap()), CensusBudget::default())
    }

    #[test]
    fn simple_squared_is_quantum_two() {
        // ⟨S⟩∗⟨S⟩ = (v + v⁻¹)⟨S²⟩ for a simple without self-extensions
        let c = cyc(2);
        let alg = FieldAlgebra::new(&c, 3).unwrap();
        let s = alg.simple_power(0, 1).unwrap();
        let p = alg.mul(&s, &s).unwrap();
        assert_eq!(p, alg.simple_power(0, 2).unwrap().scale(&"4*v^-1".parse().unwrap()));
        assert!(agree_at(&p, &alg.simple_power(0, 2).unwrap().scale(&"v^-1 + v".parse().unwrap()), 3));
    }

    #[test]
    fn segment_product() {
        // u₁∗u₂ = ⟨S₁[2]⟩ + v⁻¹⟨S₁ ⊕ S₂⟩
        let c = cyc(2);
        let alg = FieldAlgebra::new(&c, 5).unwrap();
        let w = Word::from_letters(vec![(0, 1), (1, 1)]).unwrap();
        let x = alg.word(&w).unwrap();
        assert_eq!(x.coeff(&Multisegment::segment(2, 0, 2)), Laurent::one());
        assert_eq!(x.coeff(&Multisegment::from_segments(2, &[(0, 1, 1), (1, 1, 1)])), Laurent::v_pow(-1));
        assert_eq!(x.len(), 2);
        for (l, c) in x.terms() {
            assert_eq!(&alg.word_coefficient(l, &w).unwrap(), c);
        }
    }

    #[test]
    fn kronecker_degree_delta() {
        let c = HallCounter::new(Arc::new(KroneckerFamily::new()), CensusBudget::default());
        let alg = FieldAlgebra::new(&c, 3).unwrap();
        let x = alg.word(&Word::from_letters(vec![(0, 1), (1, 1)]).unwrap()).unwrap();
        let split = KronDesc::beta(0).sum(&KronDesc::beta(1));
        assert_eq!(x.coeff(&split), Laurent::v_pow(-2));
        for z in KPoint::first_rational(4, 3).unwrap() {
            let r = KronDesc::regular(vec![(z, Partition::new(vec![1]).unwrap())]);
            assert_eq!(x.coeff(&r), Laurent::v_pow(-1));
        }
        assert_eq!(x.len(), 5);
        let y = alg.word(&Word::from_letters(vec![(1, 1), (0, 1)]).unwrap()).unwrap();
        assert_eq!(y, AlgebraElement::basis(split));
    }

    #[test]
    fn coproduct_of_simple() {
        let c = cyc(2);
        let alg = FieldAlgebra::new(&c, 3).unwrap();
        let s = alg.simple_power(0, 1).unwrap();
        let one = alg.one().unwrap();
        let r = alg.coproduct(&s).unwrap();
        let want = alg.tensor(&s, &one).add(&alg.tensor(&one, &s));
        assert_eq!(r, want);
        assert_eq!(alg.coproduct(&one).unwrap(), alg.tensor(&one, &one));
    }

    #[test]
    fn coproduct_is_multiplicative() {
        let c = cyc(2);
        let alg = FieldAlgebra::new(&c, 2).unwrap();
        let (a, b) = (alg.simple_power(0, 1).unwrap(), alg.simple_power(1, 1).unwrap());
        let lhs = alg.coproduct(&alg.mul(&a, &b).unwrap()).unwrap();
        let rhs = alg.tensor_mul(&alg.coproduct(&a).unwrap(), &alg.coproduct(&b).unwrap()).unwrap();
        assert!(lhs.agree_at(&rhs, 2));
    }

    #[test]
    fn sub_dim_enumeration() {
        assert_eq!(sub_dims(&[1, 2]).len(), 6);
    }
}
