//! Nilpotent representations of the cyclic quiver `1 → 2 → … → n → 1`,
//! indexed by multisegments.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use super::family::Family;
use super::linalg::Mat;
use super::FqModule;
use crate::error::{Error, Result};
use crate::quiver::Quiver;

/// `π = Σ π_{i,l} [i; l)`: the segment `[i; l)` has top at `i` and covers
/// `i, i+1, …, i+l-1 (mod n)`. Vertices are 0-based internally.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multisegment {
    n: u32,
    segs: BTreeMap<(u32, u32), u32>,
}

impl Multisegment {
    pub fn zero(n: u32) -> Self {
        Self { n, segs: BTreeMap::new() }
    }

    /// `[i; l)` with a 0-based start.
    pub fn segment(n: u32, i: u32, l: u32) -> Self {
        Self::from_segments(n, &[(i, l, 1)])
    }

    /// From `(start, length, multiplicity)` triples with 0-based starts.
    pub fn from_segments(n: u32, segs: &[(u32, u32, u32)]) -> Self {
        let mut m = Self::zero(n);
        for &(i, l, k) in segs {
            m.add_segment(i % n, l, k);
        }
        m
    }

    pub fn add_segment(&mut self, i: u32, l: u32, k: u32) {
        if l > 0 && k > 0 {
            *self.segs.entry((i, l)).or_insert(0) += k;
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Parse the display form, e.g. `2[1;1)+[2;3)` (1-based starts) or `0`.
    pub fn parse(n: u32, s: &str) -> Result<Self> {
        let mut m = Self::zero(n);
        for (k, body) in super::split_terms(s)? {
            let inner = body
                .strip_prefix('[')
                .and_then(|b| b.strip_suffix(')'))
                .ok_or_else(|| Error::Parse(format!("segment {body:?} is not of the form [i;l)")))?;
            let (i, l) = inner.split_once(';').ok_or_else(|| Error::Parse(format!("segment {body:?} lacks ';'")))?;
            let i: u32 = i.trim().parse().map_err(|_| Error::Parse(format!("bad start in {body:?}")))?;
            let l: u32 = l.trim().parse().map_err(|_| Error::Parse(format!("bad length in {body:?}")))?;
            if i == 0 || i > n || l == 0 {
                return Err(Error::Parse(format!("segment {body:?} out of range for n = {n}")));
            }
            m.add_segment(i - 1, l, k);
        }
        Ok(m)
    }

    pub fn is_zero(&self) -> bool {
        self.segs.is_empty()
    }

    /// `((start, length), multiplicity)`.
    pub fn segments(&self) -> impl Iterator<Item = ((u32, u32), u32)> + '_ {
        self.segs.iter().map(|(k, v)| (*k, *v))
    }

    pub fn mult(&self, i: u32, l: u32) -> u32 {
        self.segs.get(&(i, l)).copied().unwrap_or(0)
    }

    pub fn dim(&self) -> Vec<usize> {
        let mut d = vec![0usize; self.n as usize];
        for (&(i, l), &k) in &self.segs {
            for j in 0..l {
                d[((i + j) % self.n) as usize] += k as usize;
            }
        }
        d
    }

    /// `|π| = Σ l · π_{i,l}`.
    pub fn size(&self) -> u32 {
        self.segs.iter().map(|(&(_, l), &k)| l * k).sum()
    }

    pub fn max_len(&self) -> u32 {
        self.segs.keys().map(|&(_, l)| l).max().unwrap_or(0)
    }

    /// For every length some start vertex is missing.
    pub fn is_aperiodic(&self) -> bool {
        (1..=self.max_len()).all(|l| (0..self.n).any(|i| self.mult(i, l) == 0))
    }

    pub fn sum(&self, other: &Multisegment) -> Multisegment {
        let mut m = self.clone();
        for (&(i, l), &k) in &other.segs {
            m.add_segment(i, l, k);
        }
        m
    }
}

impl fmt::Debug for Multisegment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Multisegment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.segs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .segs
            .iter()
            .map(|(&(i, l), &k)| if k == 1 { format!("[{};{})", i + 1, l) } else { format!("{k}[{};{})", i + 1, l) })
            .collect();
        write!(f, "{}", parts.join("+"))
    }
}

impl Serialize for Multisegment {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<[u32; 3]> = self.segs.iter().map(|(&(i, l), &k)| [i + 1, l, k]).collect();
        v.serialize(s)
    }
}

/// All multisegments with the given dimension vector.
pub fn multisegments(n: u32, dim: &[usize]) -> Vec<Multisegment> {
    let total: usize = dim.iter().sum();
    let types: Vec<(u32, u32)> = (1..=total as u32).flat_map(|l| (0..n).map(move |i| (i, l))).collect();
    let mut out = Vec::new();
    fn rec(
        n: u32,
        k: usize,
        types: &[(u32, u32)],
        left: &mut Vec<usize>,
        cur: &mut Multisegment,
        out: &mut Vec<Multisegment>,
    ) {
        if left.iter().all(|&x| x == 0) {
            out.push(cur.clone());
            return;
        }
        if k == types.len() {
            return;
        }
        let (i, l) = types[k];
        let covers: Vec<usize> = (0..l).map(|j| ((i + j) % n) as usize).collect();
        let mut used = 0u32;
        loop {
            rec(n, k + 1, types, left, cur, out);
            // add one more copy if it fits
            let fits = {
                let mut need = vec![0usize; left.len()];
                for &c in &covers {
                    need[c] += 1;
                }
                need.iter().zip(left.iter()).all(|(a, b)| a <= b)
            };
            if !fits {
                break;
            }
            for &c in &covers {
                left[c] -= 1;
            }
            cur.add_segment(i, l, 1);
            used += 1;
        }
        for &c in &covers {
            left[c] += used as usize;
        }
        if used > 0 {
            let e = cur.segs.get_mut(&(i, l)).unwrap();
            *e -= used;
            if *e == 0 {
                cur.segs.remove(&(i, l));
            }
        }
    }
    let mut left = dim.to_vec();
    rec(n, 0, &types, &mut left, &mut Multisegment::zero(n), &mut out);
    out.sort();
    out
}

pub struct CyclicFamily {
    quiver: Quiver,
    n: u32,
}

impl CyclicFamily {
    pub fn new(n: usize) -> Result<Self> {
        Ok(Self { quiver: Quiver::cyclic(n)?, n: n as u32 })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    fn check(&self, m: &FqModule) -> Result<()> {
        if m.arrows != self.quiver.arrows() {
            return Err(Error::DimMismatch("module is not over this cyclic quiver".into()));
        }
        Ok(())
    }
}

impl Family for CyclicFamily {
    type Desc = Multisegment;

    fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    fn dim(&self, d: &Multisegment) -> Vec<usize> {
        d.dim()
    }

    fn classes(&self, dim: &[usize], _p: u32) -> Result<Vec<Multisegment>> {
        Ok(multisegments(self.n, dim))
    }

    fn build(&self, d: &Multisegment, p: u32) -> Result<FqModule> {
        let n = self.n as usize;
        let dims = d.dim();
        let mut maps: Vec<Mat> = (0..n).map(|a| Mat::zeros(dims[(a + 1) % n], dims[a])).collect();
        let mut next = vec![0usize; n];
        for (&(i, l), &k) in &d.segs {
            for _ in 0..k {
                let idx: Vec<usize> = (0..l as usize)
                    .map(|j| {
                        let v = (i as usize + j) % n;
                        next[v] += 1;
                        next[v] - 1
                    })
                    .collect();
                for j in 0..(l as usize).saturating_sub(1) {
                    let a = (i as usize + j) % n;
                    maps[a].set(idx[j + 1], idx[j], 1);
                }
            }
        }
        FqModule::new(p, dims, self.quiver.arrows().to_vec(), maps)
    }

    /// Segment multiplicities from ranks of path maps.
    fn classify(&self, m: &FqModule) -> Result<Multisegment> {
        self.check(m)?;
        let f = m.field();
        let n = self.n as usize;
        let total = m.total_dim();
        // ranks[j][k] = rank of the length-k path map starting at j
        let mut ranks = vec![vec![0usize; total + 2]; n];
        for (j, row) in ranks.iter_mut().enumerate() {
            let mut path = Mat::identity(m.dims[j]);
            let mut cur = j;
            row[0] = m.dims[j];
            for slot in row.iter_mut().skip(1) {
                path = m.maps[cur].mul(&path, f);
                cur = (cur + 1) % n;
                *slot = path.rank(f);
            }
            if row[total + 1] != 0 {
                return Err(Error::Unclassifiable("representation is not nilpotent".into()));
            }
        }
        let r = |j: usize, k: usize| -> i64 { ranks[j % n].get(k).copied().unwrap_or(0) as i64 };
        let mut out = Multisegment::zero(self.n);
        for j in 0..n {
            let jm = (j + n - 1) % n;
            for k in 0..total {
                let c = r(j, k) - r(jm, k + 1) - r(j, k + 1) + r(jm, k + 2);
                if c < 0 {
                    return Err(Error::Unclassifiable("negative segment count".into()));
                }
                out.add_segment(j as u32, k as u32 + 1, c as u32);
            }
        }
        if out.dim() != m.dims {
            return Err(Error::Unclassifiable("segment counts do not add up".into()));
        }
        Ok(out)
    }

    fn blocks(&self, d: &Multisegment) -> Vec<(u32, u32)> {
        d.segs.values().map(|&k| (k, 1)).collect()
    }

    fn indecomposables(&self, max_total: usize, _p: u32) -> Result<Vec<Multisegment>> {
        Ok((1..=max_total as u32).flat_map(|l| (0..self.n).map(move |i| (i, l))).map(|(i, l)| Multisegment::segment(self.n, i, l)).collect())
    }
}
