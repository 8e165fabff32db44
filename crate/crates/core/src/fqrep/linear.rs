//! Representations of an `A_n` quiver of any orientation. Indecomposables
//! are the interval modules `X[i, j]`.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::family::Family;
use super::linalg::Mat;
use super::{hom_dim, FqModule};
use crate::error::{Error, Result};
use crate::quiver::Quiver;

/// Multiset of intervals `[i, j]` (0-based, inclusive).
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntervalDesc(pub BTreeMap<(u32, u32), u32>);

impl IntervalDesc {
    pub fn interval(i: u32, j: u32) -> Self {
        let mut m = BTreeMap::new();
        m.insert((i, j), 1);
        Self(m)
    }

    /// Parse the display form, e.g. `[1,2]+2[3,3]` (1-based) or `0`.
    pub fn parse(n: usize, s: &str) -> Result<Self> {
        let mut m = BTreeMap::new();
        for (k, body) in super::split_terms(s)? {
            let inner = body
                .strip_prefix('[')
                .and_then(|b| b.strip_suffix(']'))
                .ok_or_else(|| Error::Parse(format!("interval {body:?} is not of the form [i,j]")))?;
            let (i, j) = inner.split_once(',').ok_or_else(|| Error::Parse(format!("interval {body:?} lacks ','")))?;
            let i: u32 = i.trim().parse().map_err(|_| Error::Parse(format!("bad start in {body:?}")))?;
            let j: u32 = j.trim().parse().map_err(|_| Error::Parse(format!("bad end in {body:?}")))?;
            if i == 0 || i > j || j as usize > n {
                return Err(Error::Parse(format!("interval {body:?} out of range for n = {n}")));
            }
            *m.entry((i - 1, j - 1)).or_insert(0) += k;
        }
        Ok(Self(m))
    }

    pub fn sum(&self, other: &IntervalDesc) -> IntervalDesc {
        let mut m = self.0.clone();
        for (&k, &v) in &other.0 {
            *m.entry(k).or_insert(0) += v;
        }
        IntervalDesc(m)
    }

    pub fn dim(&self, n: usize) -> Vec<usize> {
        let mut d = vec![0; n];
        for (&(i, j), &k) in &self.0 {
            for x in d.iter_mut().take(j as usize + 1).skip(i as usize) {
                *x += k as usize;
            }
        }
        d
    }
}

impl fmt::Debug for IntervalDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntervalDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(&(i, j), &k)| {
                let s = format!("[{},{}]", i + 1, j + 1);
                if k == 1 {
                    s
                } else {
                    format!("{k}{s}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("+"))
    }
}

impl Serialize for IntervalDesc {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<[u32; 3]> = self.0.iter().map(|(&(i, j), &k)| [i + 1, j + 1, k]).collect();
        v.serialize(s)
    }
}

pub struct LinearFamily {
    quiver: Quiver,
    intervals: Vec<(u32, u32)>,
    /// Inverse of `H[a][b] = dim Hom(X_a, X_b)`.
    hom_inv: Vec<Vec<Rational64>>,
}

impl LinearFamily {
    pub fn new(quiver: Quiver) -> Result<Self> {
        let n = quiver.n();
        for (k, &(s, t)) in quiver.arrows().iter().enumerate() {
            if quiver.arrows().len() != n.saturating_sub(1) || s.min(t) != k || s.max(t) != k + 1 {
                return Err(Error::Unsupported(format!("{} is not a linearly ordered A_n quiver", quiver.id())));
            }
        }
        let intervals: Vec<(u32, u32)> =
            (0..n as u32).flat_map(|i| (i..n as u32).map(move |j| (i, j))).collect();
        let mut fam = Self { quiver, intervals, hom_inv: Vec::new() };
        let mods: Vec<FqModule> = fam.intervals.iter().map(|&(i, j)| fam.build_interval(i, j, 2)).collect::<Result<_>>()?;
        let h: Vec<Vec<Rational64>> = mods
            .iter()
            .map(|a| mods.iter().map(|b| Ok(Rational64::from_integer(hom_dim(a, b)? as i64))).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        fam.hom_inv = invert_rational(h).ok_or_else(|| Error::Internal("interval Hom matrix is singular".into()))?;
        Ok(fam)
    }

    pub fn intervals(&self) -> &[(u32, u32)] {
        &self.intervals
    }

    pub fn build_interval(&self, i: u32, j: u32, p: u32) -> Result<FqModule> {
        let n = self.quiver.n();
        let dims: Vec<usize> = (0..n).map(|v| usize::from(v as u32 >= i && v as u32 <= j)).collect();
        let maps = self
            .quiver
            .arrows()
            .iter()
            .map(|&(s, t)| {
                let mut m = Mat::zeros(dims[t], dims[s]);
                if dims[s] == 1 && dims[t] == 1 {
                    m.set(0, 0, 1);
                }
                m
            })
            .collect();
        FqModule::new(p, dims, self.quiver.arrows().to_vec(), maps)
    }
}

fn invert_rational(mut a: Vec<Vec<Rational64>>) -> Option<Vec<Vec<Rational64>>> {
    let n = a.len();
    let mut inv: Vec<Vec<Rational64>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { Rational64::one() } else { Rational64::zero() }).collect()).collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(piv, col);
        inv.swap(piv, col);
        let s = a[col][col].recip();
        for c in 0..n {
            a[col][c] *= s;
            inv[col][c] *= s;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let fct = a[r][col];
                for c in 0..n {
                    let (x, y) = (a[col][c], inv[col][c]);
                    a[r][c] -= fct * x;
                    inv[r][c] -= fct * y;
                }
            }
        }
    }
    Some(inv)
}

impl Family for LinearFamily {
    type Desc = IntervalDesc;

    fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    fn dim(&self, d: &IntervalDesc) -> Vec<usize> {
        d.dim(self.quiver.n())
    }

    fn classes(&self, dim: &[usize], _p: u32) -> Result<Vec<IntervalDesc>> {
        let mut out = Vec::new();
        fn rec(k: usize, ivs: &[(u32, u32)], left: &mut Vec<usize>, cur: &mut IntervalDesc, out: &mut Vec<IntervalDesc>) {
            if left.iter().all(|&x| x == 0) {
                out.push(cur.clone());
                return;
            }
            if k == ivs.len() {
                return;
            }
            let (i, j) = ivs[k];
            let range = i as usize..=j as usize;
            let mut used = 0;
            loop {
                rec(k + 1, ivs, left, cur, out);
                if left[range.clone()].iter().any(|&x| x == 0) {
                    break;
                }
                for x in &mut left[range.clone()] {
                    *x -= 1;
                }
                *cur.0.entry((i, j)).or_insert(0) += 1;
                used += 1;
            }
            for x in &mut left[range.clone()] {
                *x += used;
            }
            if used > 0 {
                cur.0.remove(&(i, j));
            }
        }
        rec(0, &self.intervals, &mut dim.to_vec(), &mut IntervalDesc::default(), &mut out);
        out.sort();
        Ok(out)
    }

    fn build(&self, d: &IntervalDesc, p: u32) -> Result<FqModule> {
        let mut m = FqModule::zero(p, self.quiver.n(), self.quiver.arrows());
        for (&(i, j), &k) in &d.0 {
            let x = self.build_interval(i, j, p)?;
            for _ in 0..k {
                m = m.direct_sum(&x);
            }
        }
        Ok(m)
    }

    /// Multiplicities from `dim Hom(X_a, M) = Σ_b H[a][b] m_b`.
    fn classify(&self, m: &FqModule) -> Result<IntervalDesc> {
        if m.arrows != self.quiver.arrows() {
            return Err(Error::DimMismatch("module is not over this A_n quiver".into()));
        }
        let h: Vec<Rational64> = self
            .intervals
            .iter()
            .map(|&(i, j)| Ok(Rational64::from_integer(hom_dim(&self.build_interval(i, j, m.p)?, m)? as i64)))
            .collect::<Result<_>>()?;
        // mult = H^{-1} h, with h indexed by the first argument
        let mut out = IntervalDesc::default();
        let nints = self.intervals.len();
        for b in 0..nints {
            let mut x = Rational64::zero();
            for a in 0..nints {
                x += self.hom_inv[b][a] * h[a];
            }
            if !x.is_integer() || x < Rational64::zero() {
                return Err(Error::Unclassifiable("non-integral interval multiplicity".into()));
            }
            let k = x.to_integer() as u32;
            if k > 0 {
                out.0.insert(self.intervals[b], k);
            }
        }
        if self.dim(&out) != m.dims {
            return Err(Error::Unclassifiable("interval counts do not add up".into()));
        }
        Ok(out)
    }

    fn blocks(&self, d: &IntervalDesc) -> Vec<(u32, u32)> {
        d.0.values().map(|&k| (k, 1)).collect()
    }

    fn indecomposables(&self, max_total: usize, _p: u32) -> Result<Vec<IntervalDesc>> {
        Ok(self
            .intervals
            .iter()
            .filter(|&&(i, j)| (j - i + 1) as usize <= max_total)
            .map(|&(i, j)| IntervalDesc::interval(i, j))
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_roundtrip() {
        let m = IntervalDesc::parse(3, "[1,2]+2[3,3]").unwrap();
        assert_eq!(IntervalDesc::parse(3, &m.to_string()).unwrap(), m);
        assert_eq!(m.dim(3), vec![1, 1, 2]);
        assert!(IntervalDesc::parse(3, "[2,1]").is_err());
    }

    #[test]
    fn classify_round_trip_a3() {
        for orient in [">>", "<>", "<<", "><"] {
            let fam = LinearFamily::new(Quiver::linear_an(3, orient).unwrap()).unwrap();
            for dim in [[1usize, 1, 1], [1, 2, 1], [2, 2, 1]] {
                for d in fam.classes(&dim, 3).unwrap() {
                    let m = fam.build(&d, 3).unwrap();
                    assert_eq!(fam.classify(&m).unwrap(), d);
                }
            }
        }
    }

    #[test]
    fn a2_classes() {
        let fam = LinearFamily::new(Quiver::linear_an(2, ">").unwrap()).unwrap();
        assert_eq!(fam.classes(&[1, 1], 2).unwrap().len(), 2);
    }
}
