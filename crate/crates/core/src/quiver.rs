//! Quivers, Euler and symmetric forms, roots, reflections and admissible
//! sequences.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer vector indexed by the vertices of a quiver.
pub type DimVector = Vec<i64>;

/// Representation type of the underlying graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum QuiverKind {
    Finite,
    Affine,
    Wild,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    id: String,
    labels: Vec<String>,
    arrows: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct QuiverJson {
    vertices: Vec<String>,
    arrows: Vec<(String, String)>,
}

impl Serialize for Quiver {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QuiverJson {
            vertices: self.labels.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|&(a, b)| (self.labels[a].clone(), self.labels[b].clone()))
                .collect(),
        }
        .serialize(s)
    }
}

fn label_cmp(a: &str, b: &str) -> Ordering {
    match (a.parse::<i64>(), b.parse::<i64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y),
        _ => a.cmp(b),
    }
}

impl Quiver {
    pub fn new(id: impl Into<String>, labels: Vec<String>, arrows: Vec<(usize, usize)>) -> Result<Self> {
        let n = labels.len();
        if let Some(&(s, t)) = arrows.iter().find(|&&(s, t)| s >= n || t >= n) {
            return Err(Error::InvalidArgument(format!("arrow ({s},{t}) outside vertex range")));
        }
        let mut seen = labels.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != n {
            return Err(Error::InvalidArgument("duplicate vertex labels".into()));
        }
        Ok(Self { id: id.into(), labels, arrows })
    }

    /// Two vertices `0, 1` and two arrows `0 → 1`.
    pub fn kronecker() -> Self {
        Self::new("kronecker", vec!["0".into(), "1".into()], vec![(0, 1), (0, 1)]).unwrap()
    }

    /// Vertices `1..n` with arrows `i → i+1 (mod n)`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("cyclic quiver needs n >= 1".into()));
        }
        let labels = (1..=n).map(|i| i.to_string()).collect();
        let arrows = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::new(format!("cyclic{n}"), labels, arrows)
    }

    /// One vertex with a loop.
    pub fn jordan() -> Self {
        Self::cyclic(1).unwrap()
    }

    /// `A_n` on vertices `1..n`; `orientation[k]` is `'>'` for `k+1 → k+2`
    /// and `'<'` for the reverse.
    pub fn linear_an(n: usize, orientation: &str) -> Result<Self> {
        if n == 0 || orientation.chars().count() != n - 1 {
            return Err(Error::InvalidArgument(format!("A_{n} needs {} orientation symbols", n.saturating_sub(1))));
        }
        let labels = (1..=n).map(|i| i.to_string()).collect();
        let mut arrows = Vec::new();
        for (k, c) in orientation.chars().enumerate() {
            match c {
                '>' => arrows.push((k, k + 1)),
                '<' => arrows.push((k + 1, k)),
                _ => return Err(Error::InvalidArgument(format!("orientation symbol {c:?}"))),
            }
        }
        let tag: String = orientation.chars().map(|c| if c == '>' { 'r' } else { 'l' }).collect();
        Self::new(format!("a{n}{tag}"), labels, arrows)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: QuiverJson = serde_json::from_str(s)?;
        let idx = |l: &str| {
            raw.vertices
                .iter()
                .position(|v| v == l)
                .ok_or_else(|| Error::InvalidArgument(format!("unknown vertex {l}")))
        };
        let arrows = raw.arrows.iter().map(|(a, b)| Ok((idx(a)?, idx(b)?))).collect::<Result<Vec<_>>>()?;
        let canon = serde_json::to_vec(&raw)?;
        let id = format!("custom-{}", &crate::hallpoly::sha_hex(&canon)[..12]);
        Self::new(id, raw.vertices, arrows)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn vertex(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown vertex {label}")))
    }

    fn check(&self, v: &[i64]) -> Result<()> {
        if v.len() != self.n() {
            return Err(Error::DimMismatch(format!("vector of length {} on {} vertices", v.len(), self.n())));
        }
        Ok(())
    }

    /// `⟨a, b⟩ = Σ a_i b_i − Σ_h a_{s(h)} b_{t(h)}`.
    pub fn euler_form(&self, a: &[i64], b: &[i64]) -> Result<i64> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.euler_unchecked(a, b))
    }

    pub(crate) fn euler_unchecked(&self, a: &[i64], b: &[i64]) -> i64 {
        let d: i64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
        d - self.arrows.iter().map(|&(s, t)| a[s] * b[t]).sum::<i64>()
    }

    pub fn symmetric_form(&self, a: &[i64], b: &[i64]) -> Result<i64> {
        Ok(self.euler_form(a, b)? + self.euler_form(b, a)?)
    }

    pub(crate) fn sym_unchecked(&self, a: &[i64], b: &[i64]) -> i64 {
        self.euler_unchecked(a, b) + self.euler_unchecked(b, a)
    }

    pub fn unit(&self, i: usize) -> DimVector {
        let mut v = vec![0; self.n()];
        v[i] = 1;
        v
    }

    pub fn cartan(&self) -> Vec<Vec<i64>> {
        (0..self.n())
            .map(|i| (0..self.n()).map(|j| self.sym_unchecked(&self.unit(i), &self.unit(j))).collect())
            .collect()
    }

    /// Same vertices with every arrow reversed.
    pub fn opposite(&self) -> Quiver {
        Quiver {
            id: format!("{}-op", self.id),
            labels: self.labels.clone(),
            arrows: self.arrows.iter().map(|&(s, t)| (t, s)).collect(),
        }
    }

    pub fn is_sink(&self, i: usize) -> bool {
        self.arrows.iter().all(|&(s, _)| s != i)
    }

    pub fn is_source(&self, i: usize) -> bool {
        self.arrows.iter().all(|&(_, t)| t != i)
    }

    /// Reverse the arrows incident to `i`.
    pub fn reflect_at(&self, i: usize) -> Quiver {
        let arrows = self
            .arrows
            .iter()
            .map(|&(s, t)| if s == i || t == i { (t, s) } else { (s, t) })
            .collect();
        Quiver { id: format!("{}-s{}", self.id, self.labels[i]), labels: self.labels.clone(), arrows }
    }

    pub fn is_cyclic_orientation(&self) -> bool {
        let n = self.n();
        let mut a = self.arrows.clone();
        a.sort();
        a == (0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>()
    }

    /// Vertices ordered so that no arrow goes from a later vertex to an
    /// earlier one; ties broken by label.
    pub fn topological_order(&self) -> Result<Vec<usize>> {
        let n = self.n();
        let mut indeg = vec![0usize; n];
        for &(s, t) in &self.arrows {
            if s == t {
                return Err(Error::Unsupported("quiver has a loop".into()));
            }
            indeg[t] += 1;
        }
        let mut order = Vec::with_capacity(n);
        let mut done = vec![false; n];
        while order.len() < n {
            let next = (0..n)
                .filter(|&i| !done[i] && indeg[i] == 0)
                .min_by(|&a, &b| label_cmp(&self.labels[a], &self.labels[b]))
                .ok_or_else(|| Error::Unsupported("quiver has an oriented cycle".into()))?;
            done[next] = true;
            order.push(next);
            for &(s, t) in &self.arrows {
                if s == next {
                    indeg[t] -= 1;
                }
            }
        }
        Ok(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_ok()
    }

    fn connected(&self) -> bool {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(s, t) in &self.arrows {
                for (a, b) in [(s, t), (t, s)] {
                    if a == v && !seen[b] {
                        seen[b] = true;
                        stack.push(b);
                    }
                }
            }
        }
        seen.into_iter().all(|x| x)
    }

    /// Radical of the symmetric form over ℚ.
    fn radical(&self) -> Vec<Vec<Rational64>> {
        let c = self.cartan();
        let rows: Vec<Vec<Rational64>> =
            c.iter().map(|r| r.iter().map(|&x| Rational64::from_integer(x)).collect()).collect();
        rational_nullspace(rows, self.n())
    }

    pub fn kind(&self) -> QuiverKind {
        let c = self.cartan();
        if !self.connected() {
            return QuiverKind::Wild;
        }
        let rad = self.radical();
        match rad.len() {
            0 if positive_definite(&c) => QuiverKind::Finite,
            1 => {
                let d = &rad[0];
                let sign = d.iter().find(|x| !x.is_zero()).map(|x| x.signum()).unwrap();
                if d.iter().any(|x| x.is_zero() || x.signum() != sign) {
                    return QuiverKind::Wild;
                }
                // removing a vertex must leave a positive definite form
                let minor: Vec<Vec<i64>> = c[1..].iter().map(|r| r[1..].to_vec()).collect();
                if minor.is_empty() || positive_definite(&minor) {
                    QuiverKind::Affine
                } else {
                    QuiverKind::Wild
                }
            }
            _ => QuiverKind::Wild,
        }
    }

    /// Minimal positive imaginary root.
    pub fn delta(&self) -> Result<DimVector> {
        if self.kind() != QuiverKind::Affine {
            return Err(Error::Unsupported(format!("{} is not affine", self.id)));
        }
        let d = &self.radical()[0];
        let lcm = d.iter().fold(1i64, |l, x| num_integer::lcm(l, *x.denom()));
        let ints: Vec<i64> = d.iter().map(|x| (x * Rational64::from_integer(lcm)).to_integer()).collect();
        let g = ints.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
        Ok(ints.iter().map(|x| (x / g).abs()).collect())
    }

    /// `⟨δ, ν⟩`.
    pub fn defect(&self, nu: &[i64]) -> Result<i64> {
        self.euler_form(&self.delta()?, nu)
    }

    /// `s_i(ν) = ν − (ν, i) i`.
    pub fn reflect(&self, i: usize, nu: &[i64]) -> Result<DimVector> {
        self.check(nu)?;
        if i >= self.n() {
            return Err(Error::InvalidArgument(format!("vertex {i}")));
        }
        Ok(self.reflect_unchecked(i, nu))
    }

    pub(crate) fn reflect_unchecked(&self, i: usize, nu: &[i64]) -> DimVector {
        let c = self.sym_unchecked(nu, &self.unit(i));
        let mut out = nu.to_vec();
        out[i] -= c;
        out
    }

    /// Nonzero ν with `0 ≤ (ν, ν) ≤ 2`.
    pub fn is_root(&self, nu: &[i64]) -> bool {
        if nu.iter().all(|&x| x == 0) {
            return false;
        }
        let s = self.sym_unchecked(nu, nu);
        (0..=2).contains(&s)
    }

    /// Positive roots `ν ≤ bound`, with the multiplicity of each
    /// (`|I| − 1` for imaginary roots of an affine quiver, 1 for real).
    pub fn positive_roots_below(&self, bound: &[i64]) -> Vec<(DimVector, u32)> {
        let mut out = Vec::new();
        let mut cur = vec![0i64; self.n()];
        loop {
            if self.is_root(&cur) {
                let s = self.sym_unchecked(&cur, &cur);
                let mult = if s == 2 { 1 } else { (self.n() as u32).saturating_sub(1).max(1) };
                out.push((cur.clone(), mult));
            }
            let mut k = 0;
            loop {
                if k == cur.len() {
                    return out;
                }
                if cur[k] < bound[k] {
                    cur[k] += 1;
                    break;
                }
                cur[k] = 0;
                k += 1;
            }
        }
    }

    pub fn default_admissible(&self) -> Result<AdmissibleSequence> {
        AdmissibleSequence::new(self)
    }
}

fn positive_definite(c: &[Vec<i64>]) -> bool {
    // Sylvester: all leading principal minors positive
    (1..=c.len()).all(|k| {
        let m: Vec<Vec<Rational64>> =
            c[..k].iter().map(|r| r[..k].iter().map(|&x| Rational64::from_integer(x)).collect()).collect();
        determinant(m) > Rational64::zero()
    })
}

fn determinant(mut m: Vec<Vec<Rational64>>) -> Rational64 {
    let n = m.len();
    let mut det = Rational64::from_integer(1);
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational64::zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        det *= m[col][col];
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            for c in col..n {
                let sub = f * m[col][c];
                m[r][c] -= sub;
            }
        }
    }
    det
}

fn rational_nullspace(mut m: Vec<Vec<Rational64>>, ncols: usize) -> Vec<Vec<Rational64>> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(p, row);
        let inv = m[row][col].recip();
        for c in 0..ncols {
            m[row][c] *= inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col];
                for c in 0..ncols {
                    let sub = f * m[row][c];
                    m[r][c] -= sub;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational64::zero(); ncols];
            v[f] = Rational64::from_integer(1);
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][f];
            }
            v
        })
        .collect()
}

/// The sequence `i_t` with `i_t = t mod n` over a topological order, so that
/// `i_0 = i_n` is a sink and `i_1` a source.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdmissibleSequence {
    order: Vec<usize>,
    #[serde(skip)]
    quiver: Quiver,
}

impl AdmissibleSequence {
    pub fn new(q: &Quiver) -> Result<Self> {
        Ok(Self { order: q.topological_order()?, quiver: q.clone() })
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn vertex(&self, t: i64) -> usize {
        let n = self.order.len() as i64;
        self.order[((t - 1).rem_euclid(n)) as usize]
    }

    /// `β_t = s_{i_0} s_{i_{-1}} … s_{i_{t+1}}(i_t)` for `t ≤ 0`,
    /// `β_t = s_{i_1} … s_{i_{t-1}}(i_t)` for `t > 0`.
    pub fn beta(&self, t: i64) -> DimVector {
        let q = &self.quiver;
        let mut v = q.unit(self.vertex(t));
        if t <= 0 {
            for s in (t + 1)..=0 {
                v = q.reflect_unchecked(self.vertex(s), &v);
            }
        } else {
            for s in (1..t).rev() {
                v = q.reflect_unchecked(self.vertex(s), &v);
            }
        }
        v
    }

    /// `(i_0, i_{-1}, …)` is a sink sequence and `(i_1, i_2, …)` a source
    /// sequence for `len` steps each.
    pub fn check_window(&self, len: usize) -> bool {
        let mut q = self.quiver.clone();
        for k in 0..len as i64 {
            let i = self.vertex(-k);
            if !q.is_sink(i) {
                return false;
            }
            q = q.reflect_at(i);
        }
        let mut q = self.quiver.clone();
        for t in 1..=len as i64 {
            let i = self.vertex(t);
            if !q.is_source(i) {
                return false;
            }
            q = q.reflect_at(i);
        }
        true
    }

    /// All `β_t` with `t ≤ 0` (resp. `t > 0`) that are `≤ bound`, scanning
    /// until the root heights exceed the bound or turn negative.
    pub fn betas_below(&self, bound: &[i64], minus: bool) -> Vec<(i64, DimVector)> {
        let total: i64 = bound.iter().sum();
        let mut out = Vec::new();
        let mut t: i64 = if minus { 0 } else { 1 };
        if minus && self.quiver.kind() == QuiverKind::Finite {
            return self.finite_roots().into_iter().filter(|(_, b)| b.iter().zip(bound).all(|(x, y)| x <= y)).collect();
        }
        let mut misses = 0;
        loop {
            let b = self.beta(t);
            if b.iter().any(|&x| x < 0) {
                break;
            }
            let h: i64 = b.iter().sum();
            if b.iter().zip(bound).all(|(x, y)| x <= y) {
                out.push((t, b));
                misses = 0;
            } else if h > total {
                misses += 1;
                if misses > self.order.len() {
                    break;
                }
            }
            t += if minus { -1 } else { 1 };
        }
        out
    }
}

impl AdmissibleSequence {
    /// Finite type: the reduced subword of `(i_0, i_{-1}, …)` obtained by
    /// dropping a vertex for good once its root turns negative. Every
    /// positive root appears exactly once.
    fn finite_roots(&self) -> Vec<(i64, DimVector)> {
        let q = &self.quiver;
        let n = self.order.len();
        let mut dead = vec![false; q.n()];
        let mut prefix: Vec<usize> = Vec::new();
        let mut out = Vec::new();
        let mut t = 0i64;
        while dead.iter().filter(|&&d| d).count() < n {
            let i = self.vertex(t);
            if !dead[i] {
                let mut b = q.unit(i);
                for &s in prefix.iter().rev() {
                    b = q.reflect_unchecked(s, &b);
                }
                if b.iter().any(|&x| x < 0) {
                    dead[i] = true;
                } else {
                    out.push((t, b));
                    prefix.push(i);
                }
            }
            t -= 1;
        }
        out
    }
}

/// Index of the first coordinate where the maps differ, in scan order.
pub(crate) fn lex_cmp(a: &BTreeMap<i64, u32>, b: &BTreeMap<i64, u32>, descending: bool) -> Ordering {
    let mut keys: Vec<i64> = a.keys().chain(b.keys()).copied().collect();
    keys.sort_unstable();
    keys.dedup();
    if descending {
        keys.reverse();
    }
    for k in keys {
        let x = a.get(&k).copied().unwrap_or(0);
        let y = b.get(&k).copied().unwrap_or(0);
        if x != y {
            return x.cmp(&y);
        }
    }
    Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euler_examples() {
        let k = Quiver::kronecker();
        assert_eq!(k.euler_form(&[1, 0], &[0, 1]).unwrap(), -2);
        assert_eq!(k.euler_form(&[1, 3], &[0, 0]).unwrap(), 0);
        let c = Quiver::cyclic(2).unwrap();
        assert_eq!(c.euler_form(&[1, 0], &[0, 1]).unwrap(), -1);
        assert!(k.euler_form(&[1], &[0, 1]).is_err());
    }

    #[test]
    fn delta_and_defect() {
        let k = Quiver::kronecker();
        assert_eq!(k.delta().unwrap(), vec![1, 1]);
        assert_eq!(k.defect(&[0, 1]).unwrap(), -1);
        assert_eq!(k.defect(&[1, 0]).unwrap(), 1);
        assert_eq!(k.defect(&[1, 1]).unwrap(), 0);
        assert_eq!(Quiver::cyclic(3).unwrap().delta().unwrap(), vec![1, 1, 1]);
        assert_eq!(Quiver::jordan().delta().unwrap(), vec![1]);
        assert_eq!(Quiver::linear_an(3, ">>").unwrap().kind(), QuiverKind::Finite);
        assert!(Quiver::linear_an(3, "><").unwrap().delta().is_err());
    }

    #[test]
    fn reflections() {
        let k = Quiver::kronecker();
        assert_eq!(k.reflect(1, &[1, 0]).unwrap(), vec![1, 2]);
        assert_eq!(k.reflect(0, &[1, 0]).unwrap(), vec![-1, 0]);
    }

    #[test]
    fn kronecker_betas() {
        let k = Quiver::kronecker();
        let a = k.default_admissible().unwrap();
        assert_eq!(a.vertex(0), 1);
        assert_eq!(a.vertex(1), 0);
        assert_eq!(a.beta(0), vec![0, 1]);
        assert_eq!(a.beta(-1), vec![1, 2]);
        assert_eq!(a.beta(-2), vec![2, 3]);
        assert_eq!(a.beta(1), vec![1, 0]);
        assert_eq!(a.beta(2), vec![2, 1]);
        assert!(a.check_window(6));
        assert_eq!(k.defect(&a.beta(0)).unwrap(), -1);
    }

    #[test]
    fn a2_betas_run_out() {
        let q = Quiver::linear_an(2, ">").unwrap();
        let a = q.default_admissible().unwrap();
        assert_eq!(a.beta(0), vec![0, 1]);
        assert_eq!(a.beta(-1), vec![1, 1]);
        assert_eq!(a.beta(-2), vec![1, 0]);
        assert!(a.beta(-3).iter().any(|&x| x < 0));
        assert_eq!(a.betas_below(&[4, 4], true).len(), 3);
    }

    #[test]
    fn an_betas_cover_every_root_once() {
        for o in ["><<>", ">>>>", "<><>", "<<<<"] {
            let q = Quiver::linear_an(5, o).unwrap();
            let a = q.default_admissible().unwrap();
            let mut got: Vec<DimVector> = a.betas_below(&[9; 5], true).into_iter().map(|(_, b)| b).collect();
            got.sort();
            let mut want: Vec<DimVector> = (0..5)
                .flat_map(|i| (i..5).map(move |j| (0..5).map(|k| i64::from(i <= k && k <= j)).collect()))
                .collect();
            want.sort();
            assert_eq!(got, want, "{o}");
        }
    }

    #[test]
    fn topological_order_is_label_stable() {
        let q = Quiver::linear_an(3, "<<").unwrap();
        assert_eq!(q.topological_order().unwrap(), vec![2, 1, 0]);
        assert!(Quiver::cyclic(3).unwrap().topological_order().is_err());
    }

    #[test]
    fn json_input() {
        let q = Quiver::from_json(r#"{"vertices":["a","b"],"arrows":[["a","b"],["a","b"]]}"#).unwrap();
        assert_eq!(q.kind(), QuiverKind::Affine);
        assert_eq!(q.delta().unwrap(), vec![1, 1]);
        let s = serde_json::to_string(&Quiver::kronecker()).unwrap();
        assert_eq!(s, r#"{"vertices":["0","1"],"arrows":[["0","1"],["0","1"]]}"#);
    }
}
