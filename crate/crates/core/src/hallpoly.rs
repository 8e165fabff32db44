//! Hall polynomials: counts over several prime fields, exact interpolation
//! in `q` with held-out validation, and a content-addressed on-disk store.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::fqrep::family::{aut_structural, gl_order, hall_table, Family};
use crate::fqrep::{aut_order, end_dim, ext_dim, hom_dim, CensusBudget, AUT_BUDGET};
use crate::laurent::Laurent;

pub const DEFAULT_PRIMES: [u32; 6] = [2, 3, 5, 7, 11, 13];
/// Used only when escalation runs out of default primes.
pub const EXTRA_PRIMES: [u32; 5] = [17, 19, 23, 29, 31];
pub const STORE_VERSION: u32 = 1;

pub fn sha_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Polynomial in `q` with integer coefficients and the points it was fitted
/// and validated on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HallPolynomial {
    /// Ascending in `q`, no trailing zeros.
    pub coeffs: Vec<BigInt>,
    pub samples: Vec<(u32, BigInt)>,
    pub validations: Vec<(u32, BigInt)>,
}

impl HallPolynomial {
    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs, samples: Vec::new(), validations: Vec::new() }
    }

    pub fn zero() -> Self {
        Self::from_coeffs(Vec::new())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, q: u64) -> BigInt {
        let q = BigInt::from(q);
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * &q + c)
    }

    /// Substitute `q = v²`.
    pub fn to_laurent(&self) -> Laurent {
        Laurent::from_terms(self.coeffs.iter().enumerate().map(|(k, c)| (2 * k as i64, c.clone())))
    }

    /// Hard error when a count disagrees with the fitted polynomial.
    pub fn check(&self, q: u32, count: &BigInt) -> Result<()> {
        let pred = self.eval(q as u64);
        if &pred != count {
            return Err(Error::Falsified(format!("{self} predicts {pred} at q={q}, counted {count}")));
        }
        Ok(())
    }
}

impl fmt::Display for HallPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            let body = match (k, a.is_one()) {
                (0, _) => a.to_string(),
                (1, true) => "q".to_string(),
                (1, false) => format!("{a}*q"),
                (_, true) => format!("q^{k}"),
                (_, false) => format!("{a}*q^{k}"),
            };
            if first {
                write!(f, "{}{body}", if neg { "-" } else { "" })?;
            } else {
                write!(f, " {} {body}", if neg { "-" } else { "+" })?;
            }
            first = false;
        }
        Ok(())
    }
}

/// Coefficients (ascending) of the unique polynomial of degree `< n`
/// through `n` points, by Newton divided differences.
pub fn interpolate(points: &[(BigInt, BigInt)]) -> Vec<BigRational> {
    let n = points.len();
    let xs: Vec<BigRational> = points.iter().map(|(x, _)| BigRational::from_integer(x.clone())).collect();
    let mut dd: Vec<BigRational> = points.iter().map(|(_, y)| BigRational::from_integer(y.clone())).collect();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    // expand Σ dd[k] Π_{i<k} (x − x_i) by Horner from the top
    let mut coeffs = vec![BigRational::zero(); n];
    for k in (0..n).rev() {
        // coeffs ← coeffs·(x − x_k) + dd[k]
        let mut next = vec![BigRational::zero(); n];
        for (i, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if i + 1 < n {
                next[i + 1] += c;
            }
            next[i] -= c * &xs[k];
        }
        next[0] += &dd[k];
        coeffs = next;
    }
    coeffs
}

/// Sample primes and validation depth.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FitOptions {
    pub primes: Vec<u32>,
    /// Held-out points that must agree before a fit is accepted.
    pub holdout: usize,
    /// Skip primes below this.
    pub min_q: u32,
    /// Allow appending [`EXTRA_PRIMES`] when more points are needed.
    pub extend: bool,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self { primes: DEFAULT_PRIMES.to_vec(), holdout: 2, min_q: 2, extend: true }
    }
}

impl FitOptions {
    /// Usable primes in order.
    pub fn candidates(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.primes.iter().copied().filter(|&p| p >= self.min_q).collect();
        if self.extend {
            for p in EXTRA_PRIMES {
                if p >= self.min_q && !v.contains(&p) {
                    v.push(p);
                }
            }
        }
        v
    }
}

/// Fit an integer polynomial to `count(q)`, trying degrees `start..=cap` and
/// accepting the first fit that predicts `holdout` further primes exactly.
pub fn fit_polynomial<C>(start: usize, cap: usize, opts: &FitOptions, count: C) -> Result<HallPolynomial>
where
    C: Fn(u32) -> Result<BigInt> + Sync,
{
    let primes = opts.candidates();
    let mut values: Vec<Option<BigInt>> = vec![None; primes.len()];
    let cap = cap.max(start);
    for d in start..=cap {
        let need = d + 1 + opts.holdout;
        if need > primes.len() {
            return Err(Error::Interpolation(format!(
                "degree {d} needs {need} primes, only {} available",
                primes.len()
            )));
        }
        let missing: Vec<usize> = (0..need).filter(|&i| values[i].is_none()).collect();
        let got: Vec<(usize, Result<BigInt>)> = missing.par_iter().map(|&i| (i, count(primes[i]))).collect();
        for (i, r) in got {
            values[i] = Some(r?);
        }
        let pts: Vec<(BigInt, BigInt)> =
            (0..=d).map(|i| (BigInt::from(primes[i]), values[i].clone().unwrap())).collect();
        let coeffs = interpolate(&pts);
        if coeffs.iter().any(|c| !c.is_integer()) {
            continue;
        }
        let poly = HallPolynomial::from_coeffs(coeffs.iter().map(|c| c.to_integer()).collect());
        let held: Vec<(u32, BigInt)> = (d + 1..need).map(|i| (primes[i], values[i].clone().unwrap())).collect();
        if held.iter().all(|(q, c)| poly.eval(*q as u64) == *c) {
            return Ok(HallPolynomial {
                samples: (0..=d).map(|i| (primes[i], values[i].clone().unwrap())).collect(),
                validations: held,
                ..poly
            });
        }
    }
    Err(Error::Interpolation(format!("no polynomial of degree {start}..={cap} validates")))
}

/// Canonical identity of a Hall polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HallPolyKey {
    pub quiver: String,
    pub kind: String,
    pub l: Value,
    pub m: Value,
    pub n: Value,
}

impl HallPolyKey {
    pub fn triple<D: Serialize>(quiver: &str, l: &D, m: &D, n: &D) -> Result<Self> {
        Ok(Self {
            quiver: quiver.to_string(),
            kind: "hall".into(),
            l: serde_json::to_value(l)?,
            m: serde_json::to_value(m)?,
            n: serde_json::to_value(n)?,
        })
    }

    pub fn canonical(&self) -> Result<String> {
        Ok(serde_json::to_string(&serde_json::to_value(self)?)?)
    }

    pub fn hash(&self) -> Result<String> {
        Ok(sha_hex(self.canonical()?.as_bytes()))
    }
}

/// Memoized Hall tables `(L, dim N, q) ↦ {(M, N) ↦ g^L_{MN}}`.
pub struct HallCounter<F: Family> {
    fam: Arc<F>,
    budget: CensusBudget,
    tables: Mutex<HashMap<(F::Desc, Vec<usize>, u32), Arc<HashMap<(F::Desc, F::Desc), u64>>>>,
}

impl<F: Family> HallCounter<F> {
    pub fn new(fam: Arc<F>, budget: CensusBudget) -> Self {
        Self { fam, budget, tables: Mutex::new(HashMap::new()) }
    }

    pub fn family(&self) -> &F {
        &self.fam
    }

    pub fn budget(&self) -> &CensusBudget {
        &self.budget
    }

    pub fn table(&self, l: &F::Desc, sub_dim: &[usize], p: u32) -> Result<Arc<HashMap<(F::Desc, F::Desc), u64>>> {
        let key = (l.clone(), sub_dim.to_vec(), p);
        if let Some(t) = self.tables.lock().unwrap().get(&key) {
            return Ok(t.clone());
        }
        let t = Arc::new(hall_table(&*self.fam, l, sub_dim, p, &self.budget)?);
        self.tables.lock().unwrap().insert(key, t.clone());
        Ok(t)
    }

    /// `g^L_{MN}` over `F_p`.
    pub fn count(&self, l: &F::Desc, m: &F::Desc, n: &F::Desc, p: u32) -> Result<u64> {
        let (dl, dm, dn) = (self.fam.dim(l), self.fam.dim(m), self.fam.dim(n));
        if dl.iter().zip(dm.iter().zip(&dn)).any(|(a, (b, c))| *a != b + c) {
            return Ok(0);
        }
        let t = self.table(l, &dn, p)?;
        Ok(t.get(&(m.clone(), n.clone())).copied().unwrap_or(0))
    }
}

/// Starting trial degree and cap for `g^L_{MN}`: `end L − end M − end N −
/// hom(M, N)` (floored at 0) up to `end L`.
pub fn degree_window<F: Family>(fam: &F, l: &F::Desc, m: &F::Desc, n: &F::Desc) -> Result<(usize, usize)> {
    let p = 2;
    let (lm, mm, nm) = (fam.build(l, p)?, fam.build(m, p)?, fam.build(n, p)?);
    let el = end_dim(&lm) as i64;
    let start = el - end_dim(&mm) as i64 - end_dim(&nm) as i64 - hom_dim(&mm, &nm)? as i64;
    let _ = ext_dim(&mm, &nm)?;
    Ok((start.max(0) as usize, el as usize))
}

/// `φ^L_{MN}(q)` for a family whose descriptors are field independent.
pub fn hall_polynomial<F: Family>(
    counter: &HallCounter<F>,
    l: &F::Desc,
    m: &F::Desc,
    n: &F::Desc,
    opts: &FitOptions,
) -> Result<HallPolynomial> {
    let fam = counter.family();
    if !fam.field_independent() {
        return Err(Error::Unsupported("descriptors depend on the field; use a realization per q".into()));
    }
    let (dl, dm, dn) = (fam.dim(l), fam.dim(m), fam.dim(n));
    if dl.iter().zip(dm.iter().zip(&dn)).any(|(a, (b, c))| *a != b + c) {
        return Ok(HallPolynomial::zero());
    }
    let (start, cap) = degree_window(fam, l, m, n)?;
    fit_polynomial(start, cap, opts, |q| Ok(BigInt::from(counter.count(l, m, n, q)?)))
}

/// Hall polynomial for descriptors realized separately over each field
/// (points of `P^1` depend on `q`).
pub fn hall_polynomial_realized<F, R>(
    counter: &HallCounter<F>,
    realize: R,
    opts: &FitOptions,
) -> Result<HallPolynomial>
where
    F: Family,
    R: Fn(u32) -> Result<(F::Desc, F::Desc, F::Desc)> + Sync,
{
    let fam = counter.family();
    let probe = opts.candidates().into_iter().next().ok_or_else(|| Error::InvalidArgument("no primes".into()))?;
    let (l, m, n) = realize(probe)?;
    let pm = |d: &F::Desc| fam.build(d, probe);
    let (lm, mm, nm) = (pm(&l)?, pm(&m)?, pm(&n)?);
    let el = end_dim(&lm) as i64;
    let start = (el - end_dim(&mm) as i64 - end_dim(&nm) as i64 - hom_dim(&mm, &nm)? as i64).max(0) as usize;
    fit_polynomial(start, el as usize, opts, |q| {
        let (l, m, n) = realize(q)?;
        Ok(BigInt::from(counter.count(&l, &m, &n, q)?))
    })
}

/// `a_M(q) = q^{dim rad End M} Π |GL_{m_i}(F_{q^{d_i}})|` as a polynomial,
/// checked against enumeration of `End(M)` wherever that fits the budget.
pub fn aut_polynomial<F: Family>(fam: &F, d: &F::Desc, opts: &FitOptions) -> Result<HallPolynomial> {
    let probe = opts.candidates().into_iter().next().unwrap_or(2);
    let m = fam.build(d, probe)?;
    let end = end_dim(&m);
    let blocks = fam.blocks(d);
    let semisimple: usize = blocks.iter().map(|&(k, deg)| (k * k * deg) as usize).sum();
    if semisimple > end {
        return Err(Error::Internal(format!("block data for {d} exceeds dim End")));
    }
    // multiply out in Z[q]
    let mut poly: Vec<BigInt> = vec![BigInt::zero(); end - semisimple];
    poly.push(BigInt::one());
    for (k, deg) in blocks {
        for i in 0..k {
            // q^{deg·k} − q^{deg·i}
            let hi = (deg * k) as usize;
            let lo = (deg * i) as usize;
            let mut next = vec![BigInt::zero(); poly.len() + hi];
            for (e, c) in poly.iter().enumerate() {
                next[e + hi] += c;
                next[e + lo] -= c;
            }
            poly = next;
        }
    }
    let mut out = HallPolynomial::from_coeffs(poly);
    if fam.field_independent() {
        for q in opts.candidates() {
            if out.validations.len() >= opts.holdout {
                break;
            }
            let mq = fam.build(d, q)?;
            match aut_order(&mq, AUT_BUDGET) {
                Ok(a) => {
                    let a = BigInt::from(a);
                    out.check(q, &a)?;
                    out.validations.push((q, a));
                }
                Err(Error::Budget(_)) => break,
                Err(e) => return Err(e),
            }
        }
    }
    Ok(out)
}

/// `a_M` over `F_p` from the block structure.
pub fn aut_count<F: Family>(fam: &F, d: &F::Desc, p: u32) -> Result<BigInt> {
    aut_structural(fam, d, p)
}

/// `|GL_m(F_q)|`, re-exported for callers building automorphism counts.
pub fn gl(m: u32, q: u64) -> BigInt {
    gl_order(m, &BigInt::from(q))
}

/// One cached result.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub key: Value,
    /// Decimal coefficients ascending in `q`.
    pub poly: Vec<String>,
    pub samples: Vec<(u32, String)>,
    pub validations: Vec<(u32, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<Value>,
    pub version: u32,
    /// Seconds since the epoch at write time.
    pub created: u64,
    #[serde(default)]
    pub checksum: String,
}

impl CacheRecord {
    pub fn new(key: Value, poly: &HallPolynomial, terms: Option<Value>) -> Self {
        let s = |v: &[(u32, BigInt)]| v.iter().map(|(q, c)| (*q, c.to_string())).collect();
        let created = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let mut r = Self {
            key,
            poly: poly.coeffs.iter().map(|c| c.to_string()).collect(),
            samples: s(&poly.samples),
            validations: s(&poly.validations),
            terms,
            version: STORE_VERSION,
            created,
            checksum: String::new(),
        };
        r.checksum = r.compute_checksum();
        r
    }

    fn compute_checksum(&self) -> String {
        let mut c = self.clone();
        c.checksum = String::new();
        sha_hex(serde_json::to_string(&c).unwrap_or_default().as_bytes())
    }

    pub fn is_intact(&self) -> bool {
        self.version == STORE_VERSION && self.checksum == self.compute_checksum()
    }

    pub fn polynomial(&self) -> Result<HallPolynomial> {
        let big = |s: &str| s.parse::<BigInt>().map_err(|e| Error::Cache(format!("bad integer {s:?}: {e}")));
        let pairs = |v: &[(u32, String)]| v.iter().map(|(q, c)| Ok((*q, big(c)?))).collect::<Result<Vec<_>>>();
        Ok(HallPolynomial {
            coeffs: self.poly.iter().map(|c| big(c)).collect::<Result<_>>()?,
            samples: pairs(&self.samples)?,
            validations: pairs(&self.validations)?,
        })
    }
}

/// State of one file in the store.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum RecordStatus {
    Ok,
    Corrupt(String),
    Stale,
}

/// `<root>/<quiver-id>/<sha256(key)>.json`, written by atomic rename.
#[derive(Clone, Debug)]
pub struct Store {
    root: PathBuf,
}

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

impl Store {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Self { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn path_for(&self, quiver: &str, key: &Value) -> Result<PathBuf> {
        let canon = serde_json::to_string(key)?;
        Ok(self.root.join(sanitize(quiver)).join(format!("{}.json", sha_hex(canon.as_bytes()))))
    }

    /// `None` when absent or corrupt; a corrupt record is left for the
    /// caller to overwrite.
    pub fn get(&self, quiver: &str, key: &Value) -> Result<Option<CacheRecord>> {
        let path = self.path_for(quiver, key)?;
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        match serde_json::from_slice::<CacheRecord>(&bytes) {
            Ok(r) if r.is_intact() && &r.key == key => Ok(Some(r)),
            _ => Ok(None),
        }
    }

    pub fn put(&self, quiver: &str, record: &CacheRecord) -> Result<PathBuf> {
        let path = self.path_for(quiver, &record.key)?;
        let dir = path.parent().expect("record path has a parent");
        fs::create_dir_all(dir)?;
        let tmp = dir.join(format!(
            ".{}.{}.{}.tmp",
            path.file_name().unwrap().to_string_lossy(),
            std::process::id(),
            TMP_COUNTER.fetch_add(1, Ordering::Relaxed)
        ));
        fs::write(&tmp, serde_json::to_vec_pretty(record)?)?;
        fs::rename(&tmp, &path)?;
        Ok(path)
    }

    /// Cached polynomial for `key`, or compute, store and return it.
    pub fn get_or_compute(
        &self,
        quiver: &str,
        key: &Value,
        compute: impl FnOnce() -> Result<(HallPolynomial, Option<Value>)>,
    ) -> Result<(HallPolynomial, Option<Value>)> {
        if let Some(r) = self.get(quiver, key)? {
            return Ok((r.polynomial()?, r.terms));
        }
        let (poly, terms) = compute()?;
        self.put(quiver, &CacheRecord::new(key.clone(), &poly, terms.clone()))?;
        Ok((poly, terms))
    }

    /// Every record file with its status.
    pub fn list(&self) -> Result<Vec<(PathBuf, RecordStatus)>> {
        let mut out = Vec::new();
        if !self.root.exists() {
            return Ok(out);
        }
        for dir in sorted_entries(&self.root)? {
            if !dir.is_dir() {
                continue;
            }
            for f in sorted_entries(&dir)? {
                let name = f.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                if name.ends_with(".tmp") {
                    out.push((f, RecordStatus::Stale));
                    continue;
                }
                if !name.ends_with(".json") {
                    continue;
                }
                let status = match fs::read(&f).map_err(Error::from).and_then(|b| Ok(serde_json::from_slice::<CacheRecord>(&b)?)) {
                    Ok(r) if r.version != STORE_VERSION => RecordStatus::Stale,
                    Ok(r) if !r.is_intact() => RecordStatus::Corrupt("checksum mismatch".into()),
                    Ok(r) => {
                        let expect = sha_hex(serde_json::to_string(&r.key)?.as_bytes());
                        if name == format!("{expect}.json") {
                            RecordStatus::Ok
                        } else {
                            RecordStatus::Corrupt("file name does not match key".into())
                        }
                    }
                    Err(e) => RecordStatus::Corrupt(e.to_string()),
                };
                out.push((f, status));
            }
        }
        Ok(out)
    }

    /// Records that fail verification.
    pub fn verify(&self) -> Result<Vec<(PathBuf, RecordStatus)>> {
        Ok(self.list()?.into_iter().filter(|(_, s)| *s != RecordStatus::Ok).collect())
    }

    /// Delete stale and corrupt files; returns how many were removed.
    pub fn gc(&self) -> Result<usize> {
        let bad = self.verify()?;
        for (p, _) in &bad {
            fs::remove_file(p)?;
        }
        Ok(bad.len())
    }
}

fn sanitize(s: &str) -> String {
    s.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect()
}

fn sorted_entries(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut v: Vec<PathBuf> = fs::read_dir(dir)?.map(|e| e.map(|e| e.path())).collect::<std::io::Result<_>>()?;
    v.sort();
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation_recovers_polynomial() {
        let f = |x: i64| 3 * x * x * x - x + 7;
        let pts: Vec<(BigInt, BigInt)> = [2i64, 3, 5, 7].iter().map(|&x| (x.into(), f(x).into())).collect();
        let c = interpolate(&pts);
        let want: Vec<BigRational> = [7, -1, 0, 3].iter().map(|&x| BigRational::from_integer(x.into())).collect();
        assert_eq!(c, want);
    }

    #[test]
    fn fit_stops_at_first_validated_degree() {
        let p = fit_polynomial(0, 5, &FitOptions::default(), |q| Ok(BigInt::from(q + 1))).unwrap();
        assert_eq!(p.to_string(), "q + 1");
        assert_eq!(p.samples.len(), 2);
        assert_eq!(p.validations.len(), 2);
    }

    #[test]
    fn non_polynomial_fails() {
        let r = fit_polynomial(0, 2, &FitOptions::default(), |q| Ok(BigInt::from(2u32).pow(q)));
        assert!(matches!(r, Err(Error::Interpolation(_))));
    }

    #[test]
    fn display() {
        let p = HallPolynomial::from_coeffs(vec![0.into(), 1.into(), (-1).into(), (-1).into(), 1.into()]);
        assert_eq!(p.to_string(), "q^4 - q^3 - q^2 + q");
        assert_eq!(HallPolynomial::zero().to_string(), "0");
    }
}
