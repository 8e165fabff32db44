//! Words, index sets, monomials and PBW bases.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fqrep::cyclic::{CyclicFamily, Multisegment};
use crate::fqrep::family::Family;
use crate::fqrep::kronecker::beta_dim;
use crate::fqrep::linear::{IntervalDesc, LinearFamily};
use crate::fqrep::{hom_dim, FqModule};
use crate::hallalg::kronecker::kindices;
use crate::hallalg::{AlgebraElement, GenericAlgebra, KIndex, KroneckerAlgebra, Symbol};
use crate::laurent::{Laurent, RationalFn};
use crate::quiver::{lex_cmp, AdmissibleSequence, Quiver};

/// `ω = (i̲, a̲)`: the monomial `u_{i_1}^{(a_1)} ∗ … ∗ u_{i_s}^{(a_s)}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word {
    letters: Vec<(usize, u32)>,
}

impl Word {
    pub fn new(vertices: Vec<usize>, mults: Vec<u32>) -> Result<Self> {
        if vertices.len() != mults.len() {
            return Err(Error::InvalidArgument(format!(
                "word has {} vertices but {} multiplicities",
                vertices.len(),
                mults.len()
            )));
        }
        Self::from_letters(vertices.into_iter().zip(mults).collect())
    }

    pub fn from_letters(letters: Vec<(usize, u32)>) -> Result<Self> {
        if letters.iter().any(|&(_, a)| a == 0) {
            return Err(Error::InvalidArgument("word multiplicities must be positive".into()));
        }
        Ok(Self { letters })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Appends `u_i^{(a)}`; `a = 0` is skipped.
    pub fn push(&mut self, i: usize, a: u32) {
        if a > 0 {
            self.letters.push((i, a));
        }
    }

    pub fn letters(&self) -> &[(usize, u32)] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn dim(&self, n: usize) -> Vec<usize> {
        let mut d = vec![0usize; n];
        for &(i, a) in &self.letters {
            d[i] += a as usize;
        }
        d
    }

    /// `u1^(2) u2` with the quiver's vertex labels.
    pub fn render(&self, q: &Quiver) -> String {
        if self.letters.is_empty() {
            return "1".into();
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|&(i, a)| if a == 1 { format!("u{}", q.label(i)) } else { format!("u{}^({a})", q.label(i)) })
            .collect();
        parts.join(" ")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(|(i, a)| format!("{i}^{a}")).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Comparison under the partial order `⪯`; `None` when incomparable.
pub type PartialCmp = Option<Ordering>;

/// A quiver class with an N basis, a partial order on indices and
/// distinguished monomials.
pub trait Setting: Sync {
    type Index: Symbol + Hash;

    fn quiver(&self) -> &Quiver;

    /// Basis name used in element JSON.
    fn basis_name(&self) -> &'static str;

    /// Every N-index of dimension `ν`, aperiodic or not.
    fn indices(&self, nu: &[usize]) -> Result<Vec<Self::Index>>;

    fn is_aperiodic(&self, i: &Self::Index) -> bool;

    /// `a ⪯ b` as an ordering.
    fn compare(&self, a: &Self::Index, b: &Self::Index) -> Result<PartialCmp>;

    /// The recorded linear extension of `⪯`.
    fn linear_cmp(&self, a: &Self::Index, b: &Self::Index) -> Result<Ordering>;

    /// Candidate words for `i`, preferred first.
    fn words(&self, i: &Self::Index) -> Result<Vec<Word>>;

    /// `𝔪^w` in N coordinates.
    fn monomial(&self, w: &Word) -> Result<AlgebraElement<Self::Index>>;

    fn green(&self, x: &AlgebraElement<Self::Index>, y: &AlgebraElement<Self::Index>) -> Result<RationalFn>;
}

/// Aperiodic indices of `ν` sorted by the setting's linear extension.
pub fn enumerate_indices<S: Setting>(s: &S, nu: &[usize]) -> Result<Vec<S::Index>> {
    if nu.len() != s.quiver().n() {
        return Err(Error::DimMismatch(format!("dimension vector of length {} for {} vertices", nu.len(), s.quiver().n())));
    }
    let mut idx: Vec<S::Index> = s.indices(nu)?.into_iter().filter(|i| s.is_aperiodic(i)).collect();
    sort_linear(s, &mut idx)?;
    Ok(idx)
}

fn sort_linear<S: Setting>(s: &S, idx: &mut [S::Index]) -> Result<()> {
    let mut err = None;
    idx.sort_by(|a, b| {
        s.linear_cmp(a, b).unwrap_or_else(|e| {
            err.get_or_insert(e);
            Ordering::Equal
        })
    });
    err.map_or(Ok(()), Err)
}

/// Checks that `order` lists indices so that `b ≺ a` puts `b` first.
pub fn respects_order<S: Setting>(s: &S, order: &[S::Index]) -> Result<bool> {
    for (i, a) in order.iter().enumerate() {
        for b in &order[i + 1..] {
            if s.compare(b, a)? == Some(Ordering::Less) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether `𝔪^w = N(a) + Σ_{b ≺ a} ξ_b N(b)`.
pub fn is_distinguished<S: Setting>(s: &S, a: &S::Index, m: &AlgebraElement<S::Index>) -> Result<bool> {
    if !m.coeff(a).is_one() {
        return Ok(false);
    }
    for b in m.support() {
        if b != a && s.compare(b, a)? != Some(Ordering::Less) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// PBW data for one dimension vector, indices in linear-extension order.
#[derive(Clone, Debug)]
pub struct PbwBasis<I: Symbol> {
    pub nu: Vec<usize>,
    pub indices: Vec<I>,
    pub words: Vec<Word>,
    /// `𝔪_a` in N coordinates.
    pub monomials: Vec<AlgebraElement<I>>,
    /// `E_a` in N coordinates.
    pub e: Vec<AlgebraElement<I>>,
    /// `𝔪_a = Σ_b t[a][b] E_b`, lower unitriangular.
    pub t: Vec<Vec<Laurent>>,
}

pub fn pbw_basis<S: Setting>(s: &S, nu: &[usize]) -> Result<PbwBasis<S::Index>> {
    let order = enumerate_indices(s, nu)?;
    pbw_basis_ordered(s, nu, order)
}

/// PBW basis along a caller-chosen linear extension of `⪯`.
pub fn pbw_basis_ordered<S: Setting>(s: &S, nu: &[usize], order: Vec<S::Index>) -> Result<PbwBasis<S::Index>> {
    if !respects_order(s, &order)? {
        return Err(Error::InvalidArgument("index order is not a linear extension".into()));
    }
    let chosen: Vec<Result<(Word, AlgebraElement<S::Index>)>> = order
        .par_iter()
        .map(|a| {
            let mut tried = Vec::new();
            for w in s.words(a)? {
                let m = s.monomial(&w)?;
                if is_distinguished(s, a, &m)? {
                    return Ok((w, m));
                }
                tried.push(w.to_string());
            }
            Err(Error::NotTriangular(format!("no distinguished monomial for {a} among {}", tried.join(" "))))
        })
        .collect();
    let mut words = Vec::with_capacity(order.len());
    let mut monomials = Vec::with_capacity(order.len());
    for c in chosen {
        let (w, m) = c?;
        words.push(w);
        monomials.push(m);
    }
    let n = order.len();
    let pos: HashMap<&S::Index, usize> = order.iter().enumerate().map(|(i, a)| (a, i)).collect();
    let mut e: Vec<AlgebraElement<S::Index>> = Vec::with_capacity(n);
    let mut t = vec![vec![Laurent::zero(); n]; n];
    for a in 0..n {
        let mut x = monomials[a].clone();
        t[a][a] = Laurent::one();
        for b in (0..a).rev() {
            let phi = x.coeff(&order[b]);
            if phi.is_zero() {
                continue;
            }
            x = x.sub(&e[b].scale(&phi));
            t[a][b] = phi;
        }
        for (k, c) in x.terms() {
            if k == &order[a] {
                continue;
            }
            if let Some(&p) = pos.get(k) {
                return Err(Error::NotTriangular(format!("E({}) keeps {c} on aperiodic {k} (position {p})", order[a])));
            }
        }
        e.push(x);
    }
    Ok(PbwBasis { nu: nu.to_vec(), indices: order, words, monomials, e, t })
}

/// Inverse of a lower unitriangular matrix over `𝒵`.
pub fn unitriangular_inverse(t: &[Vec<Laurent>]) -> Vec<Vec<Laurent>> {
    let n = t.len();
    let mut inv = vec![vec![Laurent::zero(); n]; n];
    for a in 0..n {
        inv[a][a] = Laurent::one();
        for c in (0..a).rev() {
            let mut s = Laurent::zero();
            for b in c..a {
                if !t[a][b].is_zero() && !inv[b][c].is_zero() {
                    s += &(&t[a][b] * &inv[b][c]);
                }
            }
            inv[a][c] = -s;
        }
    }
    inv
}

// ---------------------------------------------------------------------------
// Cyclic and linear quivers: N = ⟨M⟩.

/// Families whose classes index their own N basis.
pub trait DiscreteFamily: Family {
    fn is_aperiodic(&self, d: &Self::Desc) -> bool;

    /// Candidate distinguished words, at most `limit`.
    fn pbw_words(&self, d: &Self::Desc, limit: usize) -> Result<Vec<Word>>;
}

impl DiscreteFamily for CyclicFamily {
    fn is_aperiodic(&self, d: &Multisegment) -> bool {
        d.is_aperiodic()
    }

    fn pbw_words(&self, d: &Multisegment, limit: usize) -> Result<Vec<Word>> {
        if !d.is_aperiodic() {
            return Err(Error::InvalidArgument(format!("{d} is periodic")));
        }
        let mut out = Vec::new();
        ddx_rec(d, &mut Word::empty(), limit, &mut out);
        Ok(out)
    }
}

/// Candidate words of an aperiodic multisegment: with `l` the maximal
/// length and `π_{i,l} ≠ 0 = π_{i+1,l}`, peel the tops of every `[i; s)`
/// with `s ≥ p`, longest runs first, keeping the remainder aperiodic.
pub fn ddx_words(pi: &Multisegment, limit: usize) -> Result<Vec<Word>> {
    CyclicFamily::new(pi.n() as usize)?.pbw_words(pi, limit)
}

/// The preferred distinguished word of an aperiodic multisegment.
pub fn ddx_word(pi: &Multisegment) -> Result<Word> {
    ddx_words(pi, 1)?.into_iter().next().ok_or_else(|| Error::Internal(format!("no word for {pi}")))
}

fn ddx_rec(pi: &Multisegment, prefix: &mut Word, limit: usize, out: &mut Vec<Word>) {
    if out.len() >= limit {
        return;
    }
    if pi.is_zero() {
        out.push(prefix.clone());
        return;
    }
    let n = pi.n();
    let l = pi.max_len();
    for i in 0..n {
        if pi.mult(i, l) == 0 || pi.mult((i + 1) % n, l) != 0 {
            continue;
        }
        for p in (1..=l).rev() {
            if pi.mult(i, p) == 0 {
                continue;
            }
            let mut next = Multisegment::zero(n);
            let mut a = 0;
            for ((j, k), c) in pi.segments() {
                if j == i && k >= p {
                    a += c;
                    if k > 1 {
                        next.add_segment((i + 1) % n, k - 1, c);
                    }
                } else {
                    next.add_segment(j, k, c);
                }
            }
            if !next.is_aperiodic() {
                continue;
            }
            let len = prefix.letters.len();
            prefix.push(i as usize, a);
            ddx_rec(&next, prefix, limit, out);
            prefix.letters.truncate(len);
        }
    }
}

impl DiscreteFamily for LinearFamily {
    fn is_aperiodic(&self, _d: &IntervalDesc) -> bool {
        true
    }

    /// `Π_{t = 0, −1, …} Π_{i} u_i^{(c_t β_t(i))}` over the admissible
    /// sequence, vertices of each root in topological order.
    fn pbw_words(&self, d: &IntervalDesc, _limit: usize) -> Result<Vec<Word>> {
        let q = self.quiver();
        let adm = AdmissibleSequence::new(q)?;
        let n = q.n();
        let dim: Vec<i64> = d.dim(n).iter().map(|&x| x as i64).collect();
        let mut w = Word::empty();
        let mut used = 0u32;
        for (_, beta) in adm.betas_below(&dim, true) {
            let Some((i, j)) = interval_of(&beta) else { continue };
            let c = d.0.get(&(i, j)).copied().unwrap_or(0);
            if c == 0 {
                continue;
            }
            used += c;
            for &v in adm.order() {
                w.push(v, c * beta[v] as u32);
            }
        }
        if used != d.0.values().sum::<u32>() {
            return Err(Error::Internal(format!("{d} has summands outside the admissible sequence")));
        }
        Ok(vec![w])
    }
}

fn interval_of(beta: &[i64]) -> Option<(u32, u32)> {
    let support: Vec<usize> = (0..beta.len()).filter(|&k| beta[k] != 0).collect();
    let (&i, &j) = (support.first()?, support.last()?);
    (support.len() == j - i + 1 && support.iter().all(|&k| beta[k] == 1)).then_some((i as u32, j as u32))
}

/// `N = ⟨M⟩` over a family with field-independent classes.
pub struct DiscreteSetting<F: DiscreteFamily> {
    alg: GenericAlgebra<F>,
    word_limit: usize,
    homs: Mutex<HashMap<F::Desc, Vec<usize>>>,
    tests: Mutex<HashMap<usize, Arc<Vec<FqModule>>>>,
}

impl<F: DiscreteFamily> DiscreteSetting<F> {
    pub fn new(alg: GenericAlgebra<F>) -> Self {
        Self { alg, word_limit: 4, homs: Mutex::new(HashMap::new()), tests: Mutex::new(HashMap::new()) }
    }

    /// How many alternative words to try per index.
    pub fn with_word_limit(mut self, limit: usize) -> Self {
        self.word_limit = limit.max(1);
        self
    }

    pub fn algebra(&self) -> &GenericAlgebra<F> {
        &self.alg
    }

    /// `dim Hom(X, M)` over indecomposables `X` of total dimension at most
    /// twice that of `M`.
    pub fn hom_vector(&self, d: &F::Desc) -> Result<Vec<usize>> {
        if let Some(v) = self.homs.lock().unwrap().get(d) {
            return Ok(v.clone());
        }
        let fam = self.alg.family();
        let window = 2 * fam.total_dim(d).max(1);
        let tests = {
            let cached = self.tests.lock().unwrap().get(&window).cloned();
            match cached {
                Some(t) => t,
                None => {
                    let t: Vec<FqModule> =
                        fam.indecomposables(window, 2)?.iter().map(|x| fam.build(x, 2)).collect::<Result<_>>()?;
                    let t = Arc::new(t);
                    self.tests.lock().unwrap().insert(window, t.clone());
                    t
                }
            }
        };
        let m = fam.build(d, 2)?;
        let v: Vec<usize> = tests.iter().map(|x| hom_dim(x, &m)).collect::<Result<_>>()?;
        self.homs.lock().unwrap().insert(d.clone(), v.clone());
        Ok(v)
    }

    /// Minimal-`dim End` extension `M ⋄ N` of `M` (top) by `N`.
    pub fn generic_extension(&self, m: &F::Desc, n: &F::Desc) -> Result<F::Desc> {
        let fam = self.alg.family();
        let total: Vec<usize> = fam.dim(m).iter().zip(fam.dim(n)).map(|(a, b)| a + b).collect();
        let mut best: Option<(usize, F::Desc)> = None;
        for l in self.alg.classes(&total)? {
            if self.alg.counter().count(&l, m, n, 2)? == 0 {
                continue;
            }
            let e = self.alg.end(&l)?;
            match &best {
                Some((b, _)) if *b <= e => {}
                _ => best = Some((e, l)),
            }
        }
        best.map(|(_, l)| l).ok_or_else(|| Error::Internal(format!("no extension of {m} by {n}")))
    }
}

impl<F: DiscreteFamily> Setting for DiscreteSetting<F> {
    type Index = F::Desc;

    fn quiver(&self) -> &Quiver {
        self.alg.family().quiver()
    }

    fn basis_name(&self) -> &'static str {
        "module"
    }

    fn indices(&self, nu: &[usize]) -> Result<Vec<F::Desc>> {
        self.alg.classes(nu)
    }

    fn is_aperiodic(&self, i: &F::Desc) -> bool {
        self.alg.family().is_aperiodic(i)
    }

    /// Degeneration order: `a ⪯ b` iff `dim Hom(X, a) ≥ dim Hom(X, b)` for all `X`.
    fn compare(&self, a: &F::Desc, b: &F::Desc) -> Result<PartialCmp> {
        let fam = self.alg.family();
        if fam.dim(a) != fam.dim(b) {
            return Err(Error::DimMismatch(format!("{a} and {b} have different dimension vectors")));
        }
        if a == b {
            return Ok(Some(Ordering::Equal));
        }
        let (x, y) = (self.hom_vector(a)?, self.hom_vector(b)?);
        let ge = x.iter().zip(&y).all(|(p, q)| p >= q);
        let le = x.iter().zip(&y).all(|(p, q)| p <= q);
        Ok(match (ge, le) {
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            _ => None,
        })
    }

    /// More homomorphisms first, then by descriptor.
    fn linear_cmp(&self, a: &F::Desc, b: &F::Desc) -> Result<Ordering> {
        let ha: usize = self.hom_vector(a)?.iter().sum();
        let hb: usize = self.hom_vector(b)?.iter().sum();
        Ok(hb.cmp(&ha).then_with(|| a.cmp(b)))
    }

    fn words(&self, i: &F::Desc) -> Result<Vec<Word>> {
        self.alg.family().pbw_words(i, self.word_limit)
    }

    fn monomial(&self, w: &Word) -> Result<AlgebraElement<F::Desc>> {
        self.alg.word(w)
    }

    fn green(&self, x: &AlgebraElement<F::Desc>, y: &AlgebraElement<F::Desc>) -> Result<RationalFn> {
        self.alg.green_form(x, y)
    }
}

// ---------------------------------------------------------------------------
// Kronecker quiver: N(c, t_λ).

pub struct KroneckerSetting {
    alg: KroneckerAlgebra,
}

impl KroneckerSetting {
    pub fn new(alg: KroneckerAlgebra) -> Self {
        Self { alg }
    }

    pub fn algebra(&self) -> &KroneckerAlgebra {
        &self.alg
    }
}

/// `(c′, t_λ′) ≺ (c, t_λ)` (strictly).
pub fn kron_precedes(a: &KIndex, b: &KIndex) -> bool {
    let minus = lex_cmp(&a.minus, &b.minus, true);
    let plus = lex_cmp(&a.plus, &b.plus, false);
    if minus != Ordering::Less && plus != Ordering::Less && (minus, plus) != (Ordering::Equal, Ordering::Equal) {
        return true;
    }
    if a.same_c(b) {
        return a.m() < b.m() || (a.m() == b.m() && a.lambda > b.lambda);
    }
    false
}

/// Word of `(c, t_λ)`: preprojectives from `t = 0` down, one `u_0^{(k)} u_1^{(k)}`
/// per part of `λ`, then preinjectives from the largest `t` down to 1.
pub fn kron_word(k: &KIndex) -> Word {
    let mut w = Word::empty();
    let beta = |w: &mut Word, t: i64, c: u32| {
        let d = beta_dim(t);
        w.push(0, c * d[0] as u32);
        w.push(1, c * d[1] as u32);
    };
    for (&t, &c) in k.minus.iter().rev() {
        beta(&mut w, t, c);
    }
    for &part in k.lambda.parts() {
        w.push(0, part);
        w.push(1, part);
    }
    for (&t, &c) in k.plus.iter().rev() {
        beta(&mut w, t, c);
    }
    w
}

impl Setting for KroneckerSetting {
    type Index = KIndex;

    fn quiver(&self) -> &Quiver {
        self.alg.family().quiver()
    }

    fn basis_name(&self) -> &'static str {
        "N"
    }

    fn indices(&self, nu: &[usize]) -> Result<Vec<KIndex>> {
        Ok(kindices(nu))
    }

    fn is_aperiodic(&self, _i: &KIndex) -> bool {
        true
    }

    fn compare(&self, a: &KIndex, b: &KIndex) -> Result<PartialCmp> {
        if a.dim() != b.dim() {
            return Err(Error::DimMismatch(format!("{a} and {b} have different dimension vectors")));
        }
        Ok(if a == b {
            Some(Ordering::Equal)
        } else if kron_precedes(a, b) {
            Some(Ordering::Less)
        } else if kron_precedes(b, a) {
            Some(Ordering::Greater)
        } else {
            None
        })
    }

    /// `c_-` lexicographically largest first, then `c_+`, then `m`
    /// ascending, then `λ` lexicographically largest first.
    fn linear_cmp(&self, a: &KIndex, b: &KIndex) -> Result<Ordering> {
        Ok(lex_cmp(&b.minus, &a.minus, true)
            .then_with(|| lex_cmp(&b.plus, &a.plus, false))
            .then_with(|| a.m().cmp(&b.m()))
            .then_with(|| b.lambda.cmp(&a.lambda)))
    }

    fn words(&self, i: &KIndex) -> Result<Vec<Word>> {
        Ok(vec![kron_word(i)])
    }

    fn monomial(&self, w: &Word) -> Result<AlgebraElement<KIndex>> {
        self.alg.word_in_n(w)
    }

    fn green(&self, x: &AlgebraElement<KIndex>, y: &AlgebraElement<KIndex>) -> Result<RationalFn> {
        self.alg.green_form(x, y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fqrep::cyclic::{CyclicFamily, Multisegment};
    use crate::fqrep::linear::{IntervalDesc, LinearFamily};
    use crate::fqrep::CensusBudget;
    use crate::hallpoly::FitOptions;
    use crate::partitions::Partition;

    fn cyclic(n: usize) -> DiscreteSetting<CyclicFamily> {
        let fam = Arc::new(CyclicFamily::new(n).unwrap());
        DiscreteSetting::new(GenericAlgebra::new(fam, CensusBudget::default(), FitOptions::default(), None).unwrap())
    }

    fn kron() -> KroneckerSetting {
        KroneckerSetting::new(KroneckerAlgebra::new(CensusBudget::default(), FitOptions::default(), None))
    }

    fn seg(i: u32, l: u32) -> Multisegment {
        Multisegment::segment(2, i, l)
    }

    #[test]
    fn ddx_word_of_segment() {
        let w = ddx_word(&seg(0, 2)).unwrap();
        assert_eq!(w.letters(), &[(0, 1), (1, 1)]);
        let w = ddx_word(&seg(1, 2)).unwrap();
        assert_eq!(w.letters(), &[(1, 1), (0, 1)]);
    }

    #[test]
    fn generic_extension_of_simples() {
        let s = cyclic(2);
        let e = s.generic_extension(&seg(0, 1), &seg(1, 1)).unwrap();
        assert_eq!(e, seg(0, 2));
    }

    #[test]
    fn cyclic_delta_indices() {
        let s = cyclic(2);
        let idx = enumerate_indices(&s, &[1, 1]).unwrap();
        let set: std::collections::BTreeSet<_> = idx.iter().cloned().collect();
        assert_eq!(set, [seg(0, 2), seg(1, 2)].into_iter().collect());
        assert!(respects_order(&s, &idx).unwrap());
    }

    #[test]
    fn empty_dimension() {
        let s = cyclic(2);
        let b = pbw_basis(&s, &[0, 0]).unwrap();
        assert_eq!(b.indices, vec![Multisegment::zero(2)]);
        assert!(b.t[0][0].is_one());
        let k = pbw_basis(&kron(), &[0, 0]).unwrap();
        assert_eq!(k.indices.len(), 1);
    }

    #[test]
    fn kronecker_delta() {
        let s = kron();
        let b = pbw_basis(&s, &[1, 1]).unwrap();
        assert_eq!(b.indices.len(), 2);
        // the split index sits below the regular one
        let reg = KIndex { lambda: Partition::new(vec![1]).unwrap(), ..KIndex::default() };
        assert_eq!(b.indices[1], reg);
        assert!(kron_precedes(&b.indices[0], &b.indices[1]));
        for (a, m) in b.indices.iter().zip(&b.monomials) {
            assert!(is_distinguished(&s, a, m).unwrap());
        }
    }

    #[test]
    fn kronecker_order_examples() {
        let p = |t: i64| KIndex::new(Default::default(), [(t, 1)].into(), Partition::empty()).unwrap();
        let i = |t: i64| KIndex::new([(t, 1)].into(), Default::default(), Partition::empty()).unwrap();
        // preinjectives vs preinjectives: lex on c_+
        assert!(kron_precedes(&p(2), &p(1)) || kron_precedes(&p(1), &p(2)));
        assert!(!kron_precedes(&p(1), &p(1)));
        assert!(!kron_precedes(&i(0), &p(1)) || !kron_precedes(&p(1), &i(0)));
    }

    #[test]
    fn unitriangular_inverse_roundtrip() {
        let l = |s: &str| s.parse::<Laurent>().unwrap();
        let t = vec![
            vec![l("1"), l("0"), l("0")],
            vec![l("v^-1"), l("1"), l("0")],
            vec![l("v^-2 + 3"), l("-v"), l("1")],
        ];
        let inv = unitriangular_inverse(&t);
        for a in 0..3 {
            for c in 0..3 {
                let mut s = Laurent::zero();
                for b in 0..3 {
                    s += &(&t[a][b] * &inv[b][c]);
                }
                assert_eq!(s, if a == c { Laurent::one() } else { Laurent::zero() });
            }
        }
    }

    #[test]
    fn alternative_words_give_same_e() {
        // E does not depend on which distinguished word is chosen
        let s = cyclic(2);
        let b1 = pbw_basis(&s, &[2, 1]).unwrap();
        let s4 = cyclic(2).with_word_limit(1);
        let b2 = pbw_basis(&s4, &[2, 1]).unwrap();
        assert_eq!(b1.indices, b2.indices);
        assert_eq!(b1.e, b2.e);
    }

    #[test]
    fn second_linear_extension() {
        let s = cyclic(2);
        let mut order = enumerate_indices(&s, &[2, 1]).unwrap();
        let b1 = pbw_basis_ordered(&s, &[2, 1], order.clone()).unwrap();
        // swap an adjacent incomparable pair if there is one
        let swap = (0..order.len().saturating_sub(1)).find(|&k| s.compare(&order[k], &order[k + 1]).unwrap().is_none());
        if let Some(k) = swap {
            order.swap(k, k + 1);
            let b2 = pbw_basis_ordered(&s, &[2, 1], order).unwrap();
            for (a, e) in b1.indices.iter().zip(&b1.e) {
                let j = b2.indices.iter().position(|x| x == a).unwrap();
                assert_eq!(&b2.e[j], e);
            }
        }
    }

    #[test]
    fn linear_a3_words() {
        let q = Quiver::linear_an(3, ">>").unwrap();
        let fam = Arc::new(LinearFamily::new(q).unwrap());
        let s = DiscreteSetting::new(GenericAlgebra::new(fam, CensusBudget::default(), FitOptions::default(), None).unwrap());
        let b = pbw_basis(&s, &[1, 1, 1]).unwrap();
        // one index per multiset of intervals covering [1,3] once
        assert_eq!(b.indices.len(), 4);
        assert!(b.indices.contains(&IntervalDesc::interval(0, 2)));
    }
}
