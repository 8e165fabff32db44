//! Representations of the Kronecker quiver `0 ⇉ 1` (vertex 1 is the sink):
//! preprojectives `P_s = β_{-s}`, preinjectives `I_t = β_t` and homogeneous
//! regular modules `M(l, z)` at closed points `z` of `P^1`.

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::family::Family;
use super::linalg::{Fq, Mat};
use super::poly::{self, companion, irreducibles};
use super::{hom_dim, FqModule};
use crate::error::{Error, Result};
use crate::partitions::{partitions_of, Partition};
use crate::quiver::Quiver;

/// A closed point of `P^1`: a monic irreducible (non-leading coefficients,
/// low to high) or the point at infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KPoint {
    Finite(Vec<u32>),
    Infinity,
}

impl KPoint {
    /// The degree-1 point `x = a`.
    pub fn rational(a: u32, p: u32) -> Self {
        KPoint::Finite(vec![(p - a % p) % p])
    }

    pub fn degree(&self) -> u32 {
        match self {
            KPoint::Finite(v) => v.len() as u32,
            KPoint::Infinity => 1,
        }
    }

    /// The first `k` degree-1 points `0, 1, …, p-1, ∞`.
    pub fn first_rational(k: usize, p: u32) -> Result<Vec<KPoint>> {
        if k > p as usize + 1 {
            return Err(Error::InvalidArgument(format!("F_{p} has only {} rational points", p + 1)));
        }
        Ok((0..k).map(|i| if i < p as usize { KPoint::rational(i as u32, p) } else { KPoint::Infinity }).collect())
    }
}

impl fmt::Display for KPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KPoint::Infinity => write!(f, "inf"),
            KPoint::Finite(lower) => {
                let d = lower.len();
                let mut s = if d == 1 { "x".to_string() } else { format!("x^{d}") };
                for k in (0..d).rev() {
                    let c = lower[k];
                    if c == 0 {
                        continue;
                    }
                    let mono = match k {
                        0 => String::new(),
                        1 => "x".to_string(),
                        _ => format!("x^{k}"),
                    };
                    if k == 0 {
                        s.push_str(&format!("+{c}"));
                    } else if c == 1 {
                        s.push_str(&format!("+{mono}"));
                    } else {
                        s.push_str(&format!("+{c}{mono}"));
                    }
                }
                write!(f, "{s}")
            }
        }
    }
}

/// Isomorphism class of a Kronecker representation.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KronDesc {
    /// `t ≤ 0 ↦` multiplicity of `M(β_t)`.
    pub minus: BTreeMap<i64, u32>,
    /// `t ≥ 1 ↦` multiplicity of `M(β_t)`.
    pub plus: BTreeMap<i64, u32>,
    /// Regular part, sorted by point; one partition per point.
    pub regular: Vec<(KPoint, Partition)>,
}

impl KronDesc {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn beta(t: i64) -> Self {
        let mut d = Self::zero();
        d.add_beta(t, 1);
        d
    }

    pub fn add_beta(&mut self, t: i64, k: u32) {
        if k == 0 {
            return;
        }
        let side = if t <= 0 { &mut self.minus } else { &mut self.plus };
        *side.entry(t).or_insert(0) += k;
    }

    pub fn regular(points: Vec<(KPoint, Partition)>) -> Self {
        let mut d = Self::zero();
        d.regular = points.into_iter().filter(|(_, l)| !l.is_empty()).collect();
        d.regular.sort();
        d
    }

    pub fn with_regular(mut self, z: KPoint, lambda: Partition) -> Self {
        if !lambda.is_empty() {
            self.regular.retain(|(w, _)| *w != z);
            self.regular.push((z, lambda));
            self.regular.sort();
        }
        self
    }

    /// Direct sum; regular partitions at a common point are merged.
    pub fn sum(&self, other: &KronDesc) -> KronDesc {
        let mut d = self.clone();
        for (&t, &k) in other.minus.iter().chain(other.plus.iter()) {
            d.add_beta(t, k);
        }
        let mut reg: BTreeMap<KPoint, Vec<u32>> = BTreeMap::new();
        for (z, l) in self.regular.iter().chain(other.regular.iter()) {
            reg.entry(z.clone()).or_default().extend_from_slice(l.parts());
        }
        d.regular = reg.into_iter().map(|(z, v)| (z, Partition::from_unsorted(v))).collect();
        d
    }

    pub fn is_regular(&self) -> bool {
        self.minus.is_empty() && self.plus.is_empty()
    }

    /// Regular size `m` with regular part of dimension `mδ`.
    pub fn regular_size(&self) -> u32 {
        self.regular.iter().map(|(z, l)| z.degree() * l.size()).sum()
    }

    /// The same class with the regular part removed.
    pub fn non_regular(&self) -> KronDesc {
        KronDesc { minus: self.minus.clone(), plus: self.plus.clone(), regular: Vec::new() }
    }

    pub fn dim(&self) -> Vec<usize> {
        let mut d = [0i64; 2];
        for (&t, &k) in self.minus.iter().chain(self.plus.iter()) {
            let b = beta_dim(t);
            d[0] += b[0] * k as i64;
            d[1] += b[1] * k as i64;
        }
        let m = self.regular_size() as i64;
        vec![(d[0] + m) as usize, (d[1] + m) as usize]
    }
}

impl fmt::Display for KronDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (&t, &k) in self.minus.iter().rev().chain(self.plus.iter().rev()) {
            parts.push(if k == 1 { format!("b{t}") } else { format!("{k}b{t}") });
        }
        for (z, l) in &self.regular {
            parts.push(format!("R[{z};{l}]"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}

impl Serialize for KronDesc {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("KronDesc", 3)?;
        st.serialize_field("minus", &self.minus.iter().collect::<Vec<_>>())?;
        st.serialize_field("plus", &self.plus.iter().collect::<Vec<_>>())?;
        let reg: Vec<(String, &Partition)> = self.regular.iter().map(|(z, l)| (z.to_string(), l)).collect();
        st.serialize_field("regular", &reg)?;
        st.end()
    }
}

/// `dim M(β_t)`: `(−t, 1−t)` for `t ≤ 0`, `(t, t−1)` for `t ≥ 1`.
pub fn beta_dim(t: i64) -> [i64; 2] {
    if t <= 0 {
        [-t, 1 - t]
    } else {
        [t, t - 1]
    }
}

pub struct KroneckerFamily {
    quiver: Quiver,
}

impl Default for KroneckerFamily {
    fn default() -> Self {
        Self::new()
    }
}

impl KroneckerFamily {
    pub fn new() -> Self {
        Self { quiver: Quiver::kronecker() }
    }

    fn module(&self, p: u32, a: Mat, b: Mat) -> Result<FqModule> {
        let dims = vec![a.cols, a.rows];
        FqModule::new(p, dims, self.quiver.arrows().to_vec(), vec![a, b])
    }

    /// Indecomposable `M(β_t)`.
    pub fn build_beta(&self, t: i64, p: u32) -> Result<FqModule> {
        let [d0, d1] = beta_dim(t);
        let (d0, d1) = (d0 as usize, d1 as usize);
        let mut a = Mat::zeros(d1, d0);
        let mut b = Mat::zeros(d1, d0);
        if t <= 0 {
            for c in 0..d0 {
                a.set(c, c, 1);
                b.set(c + 1, c, 1);
            }
        } else {
            for r in 0..d1 {
                a.set(r, r, 1);
                b.set(r, r + 1, 1);
            }
        }
        self.module(p, a, b)
    }

    /// Indecomposable regular `M(l, z)` of dimension `l·deg(z)·δ`.
    pub fn build_regular(&self, l: u32, z: &KPoint, p: u32) -> Result<FqModule> {
        let f = Fq::new(p)?;
        match z {
            KPoint::Infinity => {
                let n = l as usize;
                let mut a = Mat::zeros(n, n);
                for i in 1..n {
                    a.set(i, i - 1, 1);
                }
                self.module(p, a, Mat::identity(n))
            }
            KPoint::Finite(lower) => {
                let g = poly::monic(lower);
                if lower.iter().any(|&c| c >= p) || !poly::is_irreducible(&g, f) {
                    return Err(Error::InvalidArgument(format!("{z} is not a monic irreducible over F_{p}")));
                }
                let n = lower.len() * l as usize;
                self.module(p, Mat::identity(n), companion(&poly::pow(&g, l, f), f))
            }
        }
    }

    fn check(&self, m: &FqModule) -> Result<()> {
        if m.arrows != self.quiver.arrows() {
            return Err(Error::DimMismatch("module is not a Kronecker representation".into()));
        }
        Ok(())
    }

    /// Partition at `z` from `dim Hom(M(l, z), M)`.
    fn partition_at(&self, m: &FqModule, z: &KPoint, n_inj: usize) -> Result<Partition> {
        let d = z.degree() as usize;
        let mut counts = Vec::new();
        let mut prev = 0usize;
        let mut l = 1u32;
        loop {
            let h = hom_dim(&self.build_regular(l, z, m.p)?, m)?;
            let base = l as usize * d * n_inj;
            if h < base || (h - base) % d != 0 {
                return Err(Error::Unclassifiable(format!("inconsistent Hom data at {z}")));
            }
            let cur = (h - base) / d;
            if cur < prev {
                return Err(Error::Unclassifiable(format!("decreasing Hom data at {z}")));
            }
            let ge = cur - prev;
            if ge == 0 {
                break;
            }
            counts.push(ge as u32);
            prev = cur;
            l += 1;
        }
        // counts[l-1] = #{parts ≥ l}
        Ok(Partition::from_unsorted(counts).conjugate())
    }
}

fn second_difference(h: &[usize]) -> Result<Vec<u32>> {
    let at = |i: isize| if i < 0 { 0 } else { h[i as usize] as i64 };
    (0..h.len() as isize)
        .map(|i| {
            let v = at(i) - 2 * at(i - 1) + at(i - 2);
            u32::try_from(v).map_err(|_| Error::Unclassifiable("negative multiplicity".into()))
        })
        .collect()
}

impl Family for KroneckerFamily {
    type Desc = KronDesc;

    fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    fn dim(&self, d: &KronDesc) -> Vec<usize> {
        d.dim()
    }

    /// Regular descriptors name points of `P^1(F_p)`.
    fn field_independent(&self) -> bool {
        false
    }

    fn classes(&self, dim: &[usize], p: u32) -> Result<Vec<KronDesc>> {
        let f = Fq::new(p)?;
        let (d0, d1) = (dim[0] as i64, dim[1] as i64);
        let mut roots: Vec<i64> = Vec::new();
        for s in 0..=d0 {
            if s + 1 <= d1 {
                roots.push(-s);
            }
        }
        for t in 1..=d0 {
            if t - 1 <= d1 {
                roots.push(t);
            }
        }
        let mut nonreg: Vec<(KronDesc, [i64; 2])> = Vec::new();
        fn rec(k: usize, roots: &[i64], left: [i64; 2], cur: &mut KronDesc, out: &mut Vec<(KronDesc, [i64; 2])>) {
            if k == roots.len() {
                if left[0] == left[1] {
                    out.push((cur.clone(), left));
                }
                return;
            }
            let b = beta_dim(roots[k]);
            let mut left = left;
            let mut used = 0;
            loop {
                rec(k + 1, roots, left, cur, out);
                if b[0] > left[0] || b[1] > left[1] {
                    break;
                }
                left = [left[0] - b[0], left[1] - b[1]];
                cur.add_beta(roots[k], 1);
                used += 1;
            }
            if used > 0 {
                let t = roots[k];
                let side = if t <= 0 { &mut cur.minus } else { &mut cur.plus };
                side.remove(&t);
            }
        }
        rec(0, &roots, [d0, d1], &mut KronDesc::zero(), &mut nonreg);
        let mut out = Vec::new();
        for (base, left) in nonreg {
            let m = left[0] as u32;
            for reg in regular_parts(m, f) {
                out.push(KronDesc { regular: reg, ..base.clone() });
            }
        }
        out.sort();
        Ok(out)
    }

    fn build(&self, d: &KronDesc, p: u32) -> Result<FqModule> {
        let mut m = FqModule::zero(p, 2, self.quiver.arrows());
        for (&t, &k) in d.minus.iter().chain(d.plus.iter()) {
            let x = self.build_beta(t, p)?;
            for _ in 0..k {
                m = m.direct_sum(&x);
            }
        }
        for (z, l) in &d.regular {
            for &part in l.parts() {
                m = m.direct_sum(&self.build_regular(part, z, p)?);
            }
        }
        Ok(m)
    }

    fn classify(&self, m: &FqModule) -> Result<KronDesc> {
        self.check(m)?;
        let f = m.field();
        let p = m.p;
        let (d0, d1) = (m.dims[0] as i64, m.dims[1] as i64);
        let mut out = KronDesc::zero();

        let tmax = d0.min(d1 + 1);
        let h: Vec<usize> =
            (1..=tmax).map(|t| hom_dim(&self.build_beta(t, p)?, m)).collect::<Result<_>>()?;
        for (i, k) in second_difference(&h)?.into_iter().enumerate() {
            out.add_beta(i as i64 + 1, k);
        }
        let smax = (d1 - 1).min(d0);
        let h: Vec<usize> =
            (0..=smax).map(|s| hom_dim(m, &self.build_beta(-s, p)?)).collect::<Result<_>>()?;
        for (s, k) in second_difference(&h)?.into_iter().enumerate() {
            out.add_beta(-(s as i64), k);
        }

        let nd = out.dim();
        let (r0, r1) = (d0 - nd[0] as i64, d1 - nd[1] as i64);
        if r0 != r1 || r0 < 0 {
            return Err(Error::Unclassifiable(format!("non-regular part {out} does not fit {:?}", m.dims)));
        }
        let mut remaining = r0 as u32;
        let n_inj: usize = out.plus.values().map(|&k| k as usize).sum();
        if remaining > 0 {
            let (a, b) = (&m.maps[0], &m.maps[1]);
            // degree-1 points by pencil nullity
            let mut candidates: Vec<KPoint> = Vec::new();
            for x in f.elements() {
                let pencil = b.add(&a.scale(f.neg(x), f), f);
                if pencil.cols - pencil.rank(f) > n_inj {
                    candidates.push(KPoint::rational(x, p));
                }
            }
            if a.cols - a.rank(f) > n_inj {
                candidates.push(KPoint::Infinity);
            }
            for z in candidates {
                let lam = self.partition_at(m, &z, n_inj)?;
                remaining = remaining
                    .checked_sub(lam.size())
                    .ok_or_else(|| Error::Unclassifiable("regular part overflows".into()))?;
                out.regular.push((z, lam));
            }
            let mut deg = 2usize;
            while remaining > 0 {
                if deg as u32 > remaining {
                    return Err(Error::Unclassifiable("regular part not exhausted".into()));
                }
                for g in irreducibles(deg, f).iter() {
                    let z = KPoint::Finite(g[..deg].to_vec());
                    let h1 = hom_dim(&self.build_regular(1, &z, p)?, m)?;
                    if h1 > deg * n_inj {
                        let lam = self.partition_at(m, &z, n_inj)?;
                        remaining = remaining
                            .checked_sub(deg as u32 * lam.size())
                            .ok_or_else(|| Error::Unclassifiable("regular part overflows".into()))?;
                        out.regular.push((z, lam));
                    }
                }
                deg += 1;
            }
            out.regular.sort();
        }
        if out.dim() != m.dims {
            return Err(Error::Unclassifiable(format!("classified {out} has the wrong dimension")));
        }
        Ok(out)
    }

    fn blocks(&self, d: &KronDesc) -> Vec<(u32, u32)> {
        let mut v: Vec<(u32, u32)> = d.minus.values().chain(d.plus.values()).map(|&k| (k, 1)).collect();
        for (z, l) in &d.regular {
            for (_, k) in l.multiplicities() {
                v.push((k, z.degree()));
            }
        }
        v
    }

    fn indecomposables(&self, max_total: usize, p: u32) -> Result<Vec<KronDesc>> {
        let f = Fq::new(p)?;
        let max = max_total as i64;
        let mut out = Vec::new();
        for s in 0.. {
            if 2 * s + 1 > max {
                break;
            }
            out.push(KronDesc::beta(-s));
        }
        for t in 1.. {
            if 2 * t - 1 > max {
                break;
            }
            out.push(KronDesc::beta(t));
        }
        for deg in 1..=max_total / 2 {
            let mut pts: Vec<KPoint> = irreducibles(deg, f).iter().map(|g| KPoint::Finite(g[..deg].to_vec())).collect();
            if deg == 1 {
                pts.push(KPoint::Infinity);
            }
            for z in pts {
                for l in 1..=(max_total / (2 * deg)) as u32 {
                    out.push(KronDesc::regular(vec![(z.clone(), Partition::from_unsorted(vec![l]))]));
                }
            }
        }
        Ok(out)
    }
}

/// Every regular part of total size `m`: a partition at each point,
/// weighted by the point's degree.
pub fn regular_parts(m: u32, f: Fq) -> Vec<Vec<(KPoint, Partition)>> {
    let mut points: Vec<KPoint> = Vec::new();
    for deg in 1..=m as usize {
        points.extend(irreducibles(deg, f).iter().map(|g| KPoint::Finite(g[..deg].to_vec())));
        if deg == 1 {
            points.push(KPoint::Infinity);
        }
    }
    points.sort();
    let mut out = Vec::new();
    fn rec(
        k: usize,
        points: &[KPoint],
        left: u32,
        cur: &mut Vec<(KPoint, Partition)>,
        out: &mut Vec<Vec<(KPoint, Partition)>>,
    ) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        if k == points.len() {
            return;
        }
        rec(k + 1, points, left, cur, out);
        let d = points[k].degree();
        for size in 1..=left / d {
            for lam in partitions_of(size) {
                cur.push((points[k].clone(), lam));
                rec(k + 1, points, left - size * d, cur, out);
                cur.pop();
            }
        }
    }
    rec(0, &points, m, &mut Vec::new(), &mut out);
    out
}
