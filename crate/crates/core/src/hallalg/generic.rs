//! The generic twisted Hall algebra over `𝒵 = ℤ[v, v⁻¹]` for families whose
//! descriptors mean the same class over every field. Structure constants are
//! Hall polynomials evaluated at `q = v²`.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde_json::json;

use super::field::{flag_count, semisimple_class};
use super::{q_to_v, AlgebraElement};
use crate::error::{Error, Result};
use crate::fqrep::family::Family;
use crate::fqrep::{end_dim, ext_dim, CensusBudget};
use crate::hallpoly::{
    aut_polynomial, fit_polynomial, hall_polynomial, FitOptions, HallCounter, HallPolyKey, HallPolynomial, Store,
};
use crate::laurent::{Laurent, RationalFn};
use crate::pbw::Word;

type El<F> = AlgebraElement<<F as Family>::Desc>;

/// Prime used for anything that does not depend on the field.
const PROBE: u32 = 2;

pub struct GenericAlgebra<F: Family> {
    counter: HallCounter<F>,
    opts: FitOptions,
    store: Option<Store>,
    polys: Mutex<HashMap<(F::Desc, F::Desc, F::Desc), HallPolynomial>>,
    flags: Mutex<HashMap<(F::Desc, Word), HallPolynomial>>,
    ends: Mutex<HashMap<F::Desc, usize>>,
    auts: Mutex<HashMap<F::Desc, HallPolynomial>>,
}

impl<F: Family> GenericAlgebra<F> {
    pub fn new(fam: Arc<F>, budget: CensusBudget, opts: FitOptions, store: Option<Store>) -> Result<Self> {
        if !fam.field_independent() {
            return Err(Error::Unsupported(format!(
                "quiver {} has field-dependent classes; use the N basis",
                fam.quiver().id()
            )));
        }
        Ok(Self {
            counter: HallCounter::new(fam, budget),
            opts,
            store,
            polys: Mutex::new(HashMap::new()),
            flags: Mutex::new(HashMap::new()),
            ends: Mutex::new(HashMap::new()),
            auts: Mutex::new(HashMap::new()),
        })
    }

    pub fn counter(&self) -> &HallCounter<F> {
        &self.counter
    }

    pub fn family(&self) -> &F {
        self.counter.family()
    }

    pub fn options(&self) -> &FitOptions {
        &self.opts
    }

    pub fn classes(&self, dim: &[usize]) -> Result<Vec<F::Desc>> {
        self.family().classes(dim, PROBE)
    }

    pub fn end(&self, d: &F::Desc) -> Result<usize> {
        if let Some(&e) = self.ends.lock().unwrap().get(d) {
            return Ok(e);
        }
        let e = end_dim(&self.family().build(d, PROBE)?);
        self.ends.lock().unwrap().insert(d.clone(), e);
        Ok(e)
    }

    fn euler(&self, m: &F::Desc, n: &F::Desc) -> i64 {
        let f = self.family();
        let a: Vec<i64> = f.dim(m).iter().map(|&x| x as i64).collect();
        let b: Vec<i64> = f.dim(n).iter().map(|&x| x as i64).collect();
        f.quiver().euler_unchecked(&a, &b)
    }

    fn cached(&self, key: HallPolyKey, compute: impl FnOnce() -> Result<HallPolynomial>) -> Result<HallPolynomial> {
        match &self.store {
            None => compute(),
            Some(store) => {
                let key = serde_json::to_value(&key)?;
                let (p, _) = store.get_or_compute(&key["quiver"].as_str().unwrap_or_default().to_string(), &key, || {
                    Ok((compute()?, None))
                })?;
                Ok(p)
            }
        }
    }

    /// `φ^L_{MN}`.
    pub fn hall(&self, l: &F::Desc, m: &F::Desc, n: &F::Desc) -> Result<HallPolynomial> {
        let k = (l.clone(), m.clone(), n.clone());
        if let Some(p) = self.polys.lock().unwrap().get(&k) {
            return Ok(p.clone());
        }
        let key = HallPolyKey::triple(self.family().quiver().id(), l, m, n)?;
        let p = self.cached(key, || hall_polynomial(&self.counter, l, m, n, &self.opts))?;
        self.polys.lock().unwrap().insert(k, p.clone());
        Ok(p)
    }

    /// `a_M(q)`.
    pub fn aut(&self, d: &F::Desc) -> Result<HallPolynomial> {
        if let Some(p) = self.auts.lock().unwrap().get(d) {
            return Ok(p.clone());
        }
        let p = aut_polynomial(self.family(), d, &self.opts)?;
        self.auts.lock().unwrap().insert(d.clone(), p.clone());
        Ok(p)
    }

    /// Number of composition flags of `L` of type `w`, as a polynomial in `q`.
    pub fn flag_polynomial(&self, l: &F::Desc, w: &Word) -> Result<HallPolynomial> {
        let k = (l.clone(), w.clone());
        if let Some(p) = self.flags.lock().unwrap().get(&k) {
            return Ok(p.clone());
        }
        let fam = self.family();
        // Grassmannian dimensions bound the degree
        let mut left = fam.dim(l);
        let mut cap = 0usize;
        for &(i, a) in w.letters() {
            let a = a as usize;
            if left[i] < a {
                return Ok(HallPolynomial::zero());
            }
            left[i] -= a;
            cap += a * left[i];
        }
        let key = HallPolyKey {
            quiver: fam.quiver().id().to_string(),
            kind: "flag".into(),
            l: serde_json::to_value(l)?,
            m: json!(w.letters()),
            n: serde_json::Value::Null,
        };
        let budget = self.counter.budget();
        let p = self.cached(key, || {
            fit_polynomial(0, cap, &self.opts, |q| Ok(BigInt::from(flag_count(&fam.build(l, q)?, w.letters(), budget)?)))
        })?;
        self.flags.lock().unwrap().insert(k, p.clone());
        Ok(p)
    }

    pub fn one(&self) -> Result<El<F>> {
        Ok(AlgebraElement::basis(semisimple_class(self.family(), &vec![0; self.family().quiver().n()], PROBE)?))
    }

    /// `⟨S_i^{⊕a}⟩ = u_i^{(a)}`.
    pub fn simple_power(&self, i: usize, a: u32) -> Result<El<F>> {
        let mut d = vec![0usize; self.family().quiver().n()];
        d[i] = a as usize;
        Ok(AlgebraElement::basis(semisimple_class(self.family(), &d, PROBE)?))
    }

    pub fn mul(&self, x: &El<F>, y: &El<F>) -> Result<El<F>> {
        let fam = self.family();
        let dims_of = |e: &El<F>| e.support().map(|d| fam.dim(d)).collect::<BTreeSet<_>>();
        let mut jobs = Vec::new();
        for dx in dims_of(x) {
            for dy in dims_of(y) {
                let total: Vec<usize> = dx.iter().zip(&dy).map(|(a, b)| a + b).collect();
                for l in self.classes(&total)? {
                    jobs.push((l, dx.clone(), dy.clone()));
                }
            }
        }
        let parts: Vec<Result<(F::Desc, Laurent)>> = jobs
            .par_iter()
            .map(|(l, dx, dy)| {
                // an extension of these shapes exists over every field or over none
                let t2 = self.counter.table(l, dy, 2)?;
                let t3 = self.counter.table(l, dy, 3)?;
                let el = self.end(l)? as i64;
                let mut acc = Laurent::zero();
                for (m, cx) in x.terms().filter(|(m, _)| &fam.dim(m) == dx) {
                    for (n, cy) in y.terms().filter(|(n, _)| &fam.dim(n) == dy) {
                        let k = (m.clone(), n.clone());
                        if !t2.contains_key(&k) && !t3.contains_key(&k) {
                            continue;
                        }
                        let g = self.hall(l, m, n)?;
                        let e = self.end(m)? as i64 + self.end(n)? as i64 - el + self.euler(m, n);
                        acc += &(&(cx * cy) * &q_to_v(&g.coeffs).shift(e));
                    }
                }
                Ok((l.clone(), acc))
            })
            .collect();
        let mut out = AlgebraElement::zero();
        for r in parts {
            let (l, c) = r?;
            out.add_term(l, &c);
        }
        Ok(out)
    }

    /// Coefficient of `⟨L⟩` in the monomial `𝔪^w`.
    pub fn word_coefficient(&self, l: &F::Desc, w: &Word) -> Result<Laurent> {
        let fam = self.family();
        let q = fam.quiver();
        if w.dim(q.n()) != fam.dim(l) {
            return Ok(Laurent::zero());
        }
        let flags = self.flag_polynomial(l, w)?;
        let e = super::field::word_exponent(|a, b| q.euler_unchecked(a, b), q.n(), w) - self.end(l)? as i64;
        Ok(q_to_v(&flags.coeffs).shift(e))
    }

    /// `𝔪^w = u_{i_1}^{(a_1)} ∗ … ∗ u_{i_s}^{(a_s)}`, one flag polynomial per class.
    pub fn word(&self, w: &Word) -> Result<El<F>> {
        let ls = self.classes(&w.dim(self.family().quiver().n()))?;
        let coeffs: Vec<Result<Laurent>> = ls.par_iter().map(|l| self.word_coefficient(l, w)).collect();
        let mut out = AlgebraElement::zero();
        for (l, c) in ls.into_iter().zip(coeffs) {
            out.add_term(l, &c?);
        }
        Ok(out)
    }

    /// `⟨M⟩^{(m)} = ⟨M^{⊕m}⟩` for exceptional `M`.
    pub fn divided_power(&self, m: &F::Desc, k: u32) -> Result<El<F>> {
        let fam = self.family();
        let mm = fam.build(m, PROBE)?;
        if ext_dim(&mm, &mm)? != 0 {
            return Err(Error::InvalidArgument(format!("{m} has self-extensions")));
        }
        let mut acc = fam.build(&semisimple_class(fam, &vec![0; fam.quiver().n()], PROBE)?, PROBE)?;
        for _ in 0..k {
            acc = acc.direct_sum(&mm);
        }
        Ok(AlgebraElement::basis(fam.classify(&acc)?))
    }

    /// `Σ_M x_M y_M v^{2 dim End M} / a_M(v²)`.
    pub fn green_form(&self, x: &El<F>, y: &El<F>) -> Result<RationalFn> {
        let mut acc = RationalFn::zero();
        for (m, cx) in x.terms() {
            let cy = y.coeff(m);
            if cy.is_zero() {
                continue;
            }
            let num = (cx * &cy).shift(2 * self.end(m)? as i64);
            acc = &acc + &RationalFn::new(num, q_to_v(&self.aut(m)?.coeffs))?;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fqrep::cyclic::{CyclicFamily, Multisegment};
    use crate::hallalg::FieldAlgebra;
    use crate::laurent::qfact;

    fn alg(n: usize) -> GenericAlgebra<CyclicFamily> {
        GenericAlgebra::new(Arc::new(CyclicFamily::new(n).unwrap()), CensusBudget::default(), FitOptions::default(), None)
            .unwrap()
    }

    #[test]
    fn simple_square() {
        let a = alg(2);
        let s = a.simple_power(0, 1).unwrap();
        let got = a.mul(&s, &s).unwrap();
        assert_eq!(got, a.simple_power(0, 2).unwrap().scale(&"v + v^-1".parse().unwrap()));
    }

    #[test]
    fn green_form_of_simple() {
        let a = alg(2);
        let s = a.simple_power(1, 1).unwrap();
        let f = a.green_form(&s, &s).unwrap();
        let want = RationalFn::new(Laurent::v_pow(2), "v^2 - 1".parse().unwrap()).unwrap();
        assert_eq!(f, want);
        assert!(a.green_form(&s, &a.simple_power(0, 1).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn divided_power_matches_product() {
        let a = alg(2);
        let s = a.simple_power(0, 1).unwrap();
        let mut p = s.clone();
        for _ in 1..3 {
            p = a.mul(&p, &s).unwrap();
        }
        let d = a.divided_power(&Multisegment::segment(2, 0, 1), 3).unwrap();
        assert_eq!(p, d.scale(&qfact(3).unwrap()));
        let seg = Multisegment::segment(2, 0, 2);
        assert!(a.divided_power(&Multisegment::segment(2, 0, 1), 1).unwrap() == s);
        assert!(a.divided_power(&seg, 2).is_err());
    }

    #[test]
    fn word_matches_field_level() {
        let a = alg(2);
        let w = Word::from_letters(vec![(0, 1), (1, 2), (0, 1)]).unwrap();
        let generic = a.word(&w).unwrap();
        let fa = FieldAlgebra::new(a.counter(), 5).unwrap();
        let field = fa.word(&w).unwrap();
        for (l, c) in generic.terms() {
            let (re, im) = c.eval_sqrt(5);
            let (fre, fim) = field.coeff(l).eval_sqrt(5);
            assert_eq!((re, im), (fre, fim), "{l}");
        }
        assert_eq!(generic.len(), field.len());
    }
}
