//! Explicit quiver representations over prime fields: Hom spaces,
//! automorphism counts, submodule enumeration, Hall numbers, BGP
//! reflection functors and isomorphism classification.

pub mod cyclic;
pub mod family;
pub mod kronecker;
pub mod linalg;
pub mod linear;
pub mod poly;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use family::{Family, IsoFingerprint};
pub use linalg::{Fq, Mat};

/// Default enumeration limit for endomorphism counting.
pub const AUT_BUDGET: u64 = 2_000_000;

/// Limits on subspace enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusBudget {
    /// Largest total dimension of an enumerated module.
    pub max_total_dim: usize,
    /// Largest number of graded subspaces visited per module.
    pub max_subspaces: u64,
}

impl Default for CensusBudget {
    fn default() -> Self {
        Self { max_total_dim: 8, max_subspaces: 5_000_000 }
    }
}

/// A representation: one vector space per vertex, one matrix per arrow.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FqModule {
    pub p: u32,
    pub dims: Vec<usize>,
    pub arrows: Vec<(usize, usize)>,
    /// `maps[h]` has shape `dims[t(h)] × dims[s(h)]`.
    pub maps: Vec<Mat>,
}

impl FqModule {
    pub fn new(p: u32, dims: Vec<usize>, arrows: Vec<(usize, usize)>, maps: Vec<Mat>) -> Result<Self> {
        Fq::new(p)?;
        if maps.len() != arrows.len() {
            return Err(Error::DimMismatch("one matrix per arrow".into()));
        }
        for (h, (&(s, t), m)) in arrows.iter().zip(&maps).enumerate() {
            if m.rows != dims[t] || m.cols != dims[s] {
                return Err(Error::DimMismatch(format!(
                    "arrow {h}: matrix {}x{} for dims {}x{}",
                    m.rows, m.cols, dims[t], dims[s]
                )));
            }
            if m.data.iter().any(|&x| x >= p) {
                return Err(Error::InvalidArgument("matrix entry outside the field".into()));
            }
        }
        Ok(Self { p, dims, arrows, maps })
    }

    pub fn zero(p: u32, n: usize, arrows: &[(usize, usize)]) -> Self {
        Self { p, dims: vec![0; n], arrows: arrows.to_vec(), maps: arrows.iter().map(|_| Mat::zeros(0, 0)).collect() }
    }

    pub fn field(&self) -> Fq {
        Fq::new(self.p).expect("validated at construction")
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn dim_vector(&self) -> Vec<i64> {
        self.dims.iter().map(|&d| d as i64).collect()
    }

    pub fn direct_sum(&self, other: &FqModule) -> FqModule {
        assert_eq!(self.arrows, other.arrows);
        FqModule {
            p: self.p,
            dims: self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect(),
            arrows: self.arrows.clone(),
            maps: self.maps.iter().zip(&other.maps).map(|(a, b)| a.block_diag(b)).collect(),
        }
    }

    /// Conjugate by a graded automorphism `g` (one invertible matrix per vertex).
    pub fn conjugate(&self, g: &[Mat]) -> Result<FqModule> {
        let f = self.field();
        let ginv: Vec<Mat> = g
            .iter()
            .map(|m| invert(m, f).ok_or_else(|| Error::InvalidArgument("singular change of basis".into())))
            .collect::<Result<_>>()?;
        let maps = self
            .arrows
            .iter()
            .zip(&self.maps)
            .map(|(&(s, t), m)| g[t].mul(m, f).mul(&ginv[s], f))
            .collect();
        Ok(FqModule { maps, ..self.clone() })
    }

    /// True when every oriented cycle acts nilpotently.
    pub fn is_nilpotent(&self) -> bool {
        // a representation is nilpotent iff all long enough paths vanish
        let f = self.field();
        let n = self.dims.len();
        let len = self.total_dim() + 1;
        let mut paths: Vec<Vec<Mat>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Mat::identity(self.dims[i]) } else { Mat::zeros(self.dims[j], self.dims[i]) }).collect())
            .collect();
        for _ in 0..len {
            let mut next: Vec<Vec<Mat>> =
                (0..n).map(|i| (0..n).map(|j| Mat::zeros(self.dims[j], self.dims[i])).collect()).collect();
            for (i, row) in paths.iter().enumerate() {
                for (j, m) in row.iter().enumerate() {
                    for (h, &(s, t)) in self.arrows.iter().enumerate() {
                        if s == j {
                            let add = self.maps[h].mul(m, f);
                            next[i][t] = next[i][t].add(&add, f);
                        }
                    }
                }
            }
            paths = next;
        }
        paths.iter().flatten().all(|m| m.is_zero())
    }
}

pub(crate) fn invert(m: &Mat, f: Fq) -> Option<Mat> {
    let n = m.rows;
    if m.cols != n {
        return None;
    }
    let mut aug = Mat::zeros(n, 2 * n);
    for r in 0..n {
        for c in 0..n {
            aug.set(r, c, m.get(r, c));
        }
        aug.set(r, n + r, 1);
    }
    let (red, piv) = aug.rref(f);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    let mut inv = Mat::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            inv.set(r, c, red.get(r, n + c));
        }
    }
    Some(inv)
}

/// `2A+B+0` into `[(2, "A"), (1, "B")]`; a lone `0` is the empty sum.
pub(crate) fn split_terms(s: &str) -> Result<Vec<(u32, &str)>> {
    let s = s.trim();
    if s == "0" || s.is_empty() {
        return Ok(Vec::new());
    }
    s.split('+')
        .map(|t| {
            let t = t.trim();
            let cut = t.find(|c: char| !c.is_ascii_digit()).unwrap_or(t.len());
            let k = if cut == 0 { 1 } else { t[..cut].parse().map_err(|_| Error::Parse(format!("bad multiplicity in {t:?}")))? };
            Ok((k, &t[cut..]))
        })
        .collect()
}

fn check_compatible(m: &FqModule, n: &FqModule) -> Result<()> {
    if m.p != n.p || m.arrows != n.arrows || m.dims.len() != n.dims.len() {
        return Err(Error::DimMismatch("modules over different quivers or fields".into()));
    }
    Ok(())
}

/// Linear system whose solutions are the homomorphisms `M → N`.
fn hom_system(m: &FqModule, n: &FqModule) -> (Mat, Vec<usize>) {
    let f = m.field();
    let nv = m.dims.len();
    let mut offsets = Vec::with_capacity(nv + 1);
    let mut acc = 0;
    for i in 0..nv {
        offsets.push(acc);
        acc += n.dims[i] * m.dims[i];
    }
    offsets.push(acc);
    let nvars = acc;
    let neq: usize = m.arrows.iter().map(|&(s, t)| n.dims[t] * m.dims[s]).sum();
    let mut sys = Mat::zeros(neq, nvars);
    let mut row = 0;
    for (h, &(s, t)) in m.arrows.iter().enumerate() {
        let (mh, nh) = (&m.maps[h], &n.maps[h]);
        // N_h f_s − f_t M_h = 0, entry (r, c)
        for r in 0..n.dims[t] {
            for c in 0..m.dims[s] {
                for k in 0..n.dims[s] {
                    let var = offsets[s] + k * m.dims[s] + c;
                    let v = f.add(sys.get(row, var), nh.get(r, k));
                    sys.set(row, var, v);
                }
                for k in 0..m.dims[t] {
                    let var = offsets[t] + r * m.dims[t] + k;
                    let v = f.sub(sys.get(row, var), mh.get(k, c));
                    sys.set(row, var, v);
                }
                row += 1;
            }
        }
    }
    (sys, offsets)
}

pub fn hom_dim(m: &FqModule, n: &FqModule) -> Result<usize> {
    check_compatible(m, n)?;
    let (sys, offsets) = hom_system(m, n);
    Ok(offsets[offsets.len() - 1] - sys.rank(m.field()))
}

pub fn end_dim(m: &FqModule) -> usize {
    hom_dim(m, m).expect("same module")
}

/// `dim Ext¹(M, N) = dim Hom(M, N) − ⟨dim M, dim N⟩`.
pub fn ext_dim(m: &FqModule, n: &FqModule) -> Result<usize> {
    let h = hom_dim(m, n)? as i64;
    let e: i64 = m.dims.iter().zip(&n.dims).map(|(a, b)| (a * b) as i64).sum::<i64>()
        - m.arrows.iter().map(|&(s, t)| (m.dims[s] * n.dims[t]) as i64).sum::<i64>();
    Ok((h - e) as usize)
}

/// Basis of `Hom(M, N)`, each element one matrix per vertex.
pub fn hom_basis(m: &FqModule, n: &FqModule) -> Result<Vec<Vec<Mat>>> {
    check_compatible(m, n)?;
    let (sys, offsets) = hom_system(m, n);
    let f = m.field();
    Ok(sys
        .nullspace(f)
        .into_iter()
        .map(|v| {
            (0..m.dims.len())
                .map(|i| Mat { rows: n.dims[i], cols: m.dims[i], data: v[offsets[i]..offsets[i + 1]].to_vec() })
                .collect()
        })
        .collect())
}

/// Iterate over every element of the span of `basis` (all `q^k` of them).
pub(crate) fn for_each_combination(basis: &[Vec<Mat>], f: Fq, mut visit: impl FnMut(&[Mat]) -> bool) {
    let k = basis.len();
    let Some(first) = basis.first() else {
        visit(&[]);
        return;
    };
    let shapes: Vec<(usize, usize)> = first.iter().map(|m| (m.rows, m.cols)).collect();
    let mut coeffs = vec![0u32; k];
    loop {
        let cur: Vec<Mat> = shapes
            .iter()
            .enumerate()
            .map(|(i, &(r, c))| {
                let mut acc = Mat::zeros(r, c);
                for (j, b) in basis.iter().enumerate() {
                    if coeffs[j] != 0 {
                        acc = acc.add(&b[i].scale(coeffs[j], f), f);
                    }
                }
                acc
            })
            .collect();
        if !visit(&cur) {
            return;
        }
        let mut i = 0;
        loop {
            if i == k {
                return;
            }
            coeffs[i] += 1;
            if coeffs[i] < f.p() {
                break;
            }
            coeffs[i] = 0;
            i += 1;
        }
    }
}

/// `|Aut(M)|` by enumerating all endomorphisms.
pub fn aut_order(m: &FqModule, budget: u64) -> Result<u64> {
    let f = m.field();
    let basis = hom_basis(m, m)?;
    let total = (m.p as u64).checked_pow(basis.len() as u32).unwrap_or(u64::MAX);
    if total > budget {
        return Err(Error::Budget(format!("{total} endomorphisms exceed {budget}")));
    }
    let mut count = 0u64;
    for_each_combination(&basis, f, |g| {
        if g.iter().all(|x| x.is_invertible(f)) {
            count += 1;
        }
        true
    });
    Ok(count)
}

/// An arrow-stable graded subspace, one RREF basis per vertex.
#[derive(Clone, Debug)]
pub struct Subspace {
    pub basis: Vec<Mat>,
    pub pivots: Vec<Vec<usize>>,
}

impl Subspace {
    pub fn dims(&self) -> Vec<usize> {
        self.basis.iter().map(|b| b.rows).collect()
    }

    /// Row span of `rows[i]` at each vertex `i`, reduced to RREF.
    pub fn span(rows: &[Mat], f: Fq) -> Subspace {
        let mut basis = Vec::with_capacity(rows.len());
        let mut pivots = Vec::with_capacity(rows.len());
        for m in rows {
            let (r, piv) = m.rref(f);
            let k = piv.len();
            basis.push(Mat { rows: k, cols: r.cols, data: r.data[..k * r.cols].to_vec() });
            pivots.push(piv);
        }
        Subspace { basis, pivots }
    }
}

fn in_rowspace(v: &[u32], basis: &Mat, pivots: &[usize], f: Fq) -> bool {
    let mut w = v.to_vec();
    reduce(&mut w, basis, pivots, f);
    w.iter().all(|&x| x == 0)
}

/// Subtract the RREF rows so that `w` vanishes at every pivot column.
fn reduce(w: &mut [u32], basis: &Mat, pivots: &[usize], f: Fq) {
    for (r, &pc) in pivots.iter().enumerate() {
        let c = w[pc];
        if c != 0 {
            for (j, x) in w.iter_mut().enumerate() {
                *x = f.sub(*x, f.mul(c, basis.get(r, j)));
            }
        }
    }
}

/// Visit every arrow-stable graded subspace of `l`, optionally restricted to
/// a fixed dimension vector. Returns the number visited.
pub fn submodule_census(
    l: &FqModule,
    dim: Option<&[usize]>,
    budget: &CensusBudget,
    mut visit: impl FnMut(&Subspace),
) -> Result<u64> {
    let f = l.field();
    let q = l.p as u64;
    if l.total_dim() > budget.max_total_dim {
        return Err(Error::Budget(format!(
            "total dimension {} exceeds {}",
            l.total_dim(),
            budget.max_total_dim
        )));
    }
    let nv = l.dims.len();
    let ranges: Vec<Vec<usize>> = (0..nv)
        .map(|i| match dim {
            Some(d) => {
                if d[i] <= l.dims[i] {
                    vec![d[i]]
                } else {
                    vec![]
                }
            }
            None => (0..=l.dims[i]).collect(),
        })
        .collect();
    let estimate: u128 = ranges
        .iter()
        .enumerate()
        .map(|(i, ks)| ks.iter().map(|&k| linalg::gaussian_count(l.dims[i], k, q)).sum::<u128>())
        .product();
    if estimate > budget.max_subspaces as u128 {
        return Err(Error::Budget(format!("{estimate} subspaces exceed {}", budget.max_subspaces)));
    }
    let grass: Vec<Vec<(Mat, Vec<usize>)>> = (0..nv)
        .map(|i| ranges[i].iter().flat_map(|&k| linalg::grassmannian(l.dims[i], k, f)).collect())
        .collect();
    // process vertices so that each arrow is checked once both ends are chosen
    let mut count = 0u64;
    let mut chosen: Vec<usize> = vec![0; nv];
    fn rec(
        i: usize,
        l: &FqModule,
        f: Fq,
        grass: &[Vec<(Mat, Vec<usize>)>],
        chosen: &mut Vec<usize>,
        count: &mut u64,
        visit: &mut dyn FnMut(&Subspace),
    ) {
        let nv = grass.len();
        if i == nv {
            let sub = Subspace {
                basis: (0..nv).map(|v| grass[v][chosen[v]].0.clone()).collect(),
                pivots: (0..nv).map(|v| grass[v][chosen[v]].1.clone()).collect(),
            };
            *count += 1;
            visit(&sub);
            return;
        }
        'cand: for c in 0..grass[i].len() {
            chosen[i] = c;
            for (h, &(s, t)) in l.arrows.iter().enumerate() {
                if s.max(t) != i {
                    continue;
                }
                let (bs, _) = &grass[s][chosen[s]];
                let (bt, pt) = &grass[t][chosen[t]];
                for r in 0..bs.rows {
                    let img = l.maps[h].apply(bs.row(r), f);
                    if !in_rowspace(&img, bt, pt, f) {
                        continue 'cand;
                    }
                }
            }
            rec(i + 1, l, f, grass, chosen, count, visit);
        }
    }
    if grass.iter().any(|g| g.is_empty()) {
        return Ok(0);
    }
    rec(0, l, f, &grass, &mut chosen, &mut count, &mut visit);
    Ok(count)
}

/// The submodule spanned by `w`, in the RREF basis.
pub fn sub_module(l: &FqModule, w: &Subspace) -> FqModule {
    let f = l.field();
    let maps = l
        .arrows
        .iter()
        .enumerate()
        .map(|(h, &(s, t))| {
            let (bs, bt, pt) = (&w.basis[s], &w.basis[t], &w.pivots[t]);
            let mut m = Mat::zeros(bt.rows, bs.rows);
            for c in 0..bs.rows {
                let img = l.maps[h].apply(bs.row(c), f);
                for (r, &pc) in pt.iter().enumerate() {
                    m.set(r, c, img[pc]);
                }
            }
            m
        })
        .collect();
    FqModule { p: l.p, dims: w.dims(), arrows: l.arrows.clone(), maps }
}

/// `L / W`, using the non-pivot coordinate vectors as a complement basis.
pub fn quotient_module(l: &FqModule, w: &Subspace) -> FqModule {
    let f = l.field();
    let free: Vec<Vec<usize>> = (0..l.dims.len())
        .map(|i| (0..l.dims[i]).filter(|c| !w.pivots[i].contains(c)).collect())
        .collect();
    let maps = l
        .arrows
        .iter()
        .enumerate()
        .map(|(h, &(s, t))| {
            let mut m = Mat::zeros(free[t].len(), free[s].len());
            for (c, &col) in free[s].iter().enumerate() {
                let mut img: Vec<u32> = (0..l.dims[t]).map(|r| l.maps[h].get(r, col)).collect();
                reduce(&mut img, &w.basis[t], &w.pivots[t], f);
                for (r, &fr) in free[t].iter().enumerate() {
                    m.set(r, c, img[fr]);
                }
            }
            m
        })
        .collect();
    FqModule { p: l.p, dims: free.iter().map(|v| v.len()).collect(), arrows: l.arrows.clone(), maps }
}

/// Direction of a BGP reflection functor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reflection {
    /// `σ_i^+` at a sink.
    Plus,
    /// `σ_i^-` at a source.
    Minus,
}

/// BGP reflection functor at vertex `i`; the result lives on the quiver
/// with the arrows at `i` reversed (arrow indices are kept).
pub fn reflect_module(i: usize, dir: Reflection, m: &FqModule) -> Result<FqModule> {
    let f = m.field();
    let n = m.dims.len();
    if i >= n {
        return Err(Error::InvalidArgument(format!("vertex {i}")));
    }
    let incident: Vec<usize> = (0..m.arrows.len()).filter(|&h| m.arrows[h].0 == i || m.arrows[h].1 == i).collect();
    if incident.iter().any(|&h| m.arrows[h].0 == m.arrows[h].1) {
        return Err(Error::Unsupported("reflection at a vertex with a loop".into()));
    }
    let mut arrows = m.arrows.clone();
    for &h in &incident {
        arrows[h] = (m.arrows[h].1, m.arrows[h].0);
    }
    let mut maps = m.maps.clone();
    let mut dims = m.dims.clone();
    match dir {
        Reflection::Plus => {
            if incident.iter().any(|&h| m.arrows[h].0 == i) {
                return Err(Error::InvalidArgument(format!("vertex {i} is not a sink")));
            }
            // φ : ⊕ V_{s(h)} → V_i
            let widths: Vec<usize> = incident.iter().map(|&h| m.dims[m.arrows[h].0]).collect();
            let total: usize = widths.iter().sum();
            let mut phi = Mat::zeros(m.dims[i], total);
            let mut off = 0;
            for (k, &h) in incident.iter().enumerate() {
                for r in 0..m.dims[i] {
                    for c in 0..widths[k] {
                        phi.set(r, off + c, m.maps[h].get(r, c));
                    }
                }
                off += widths[k];
            }
            if phi.rank(f) < m.dims[i] {
                return Err(Error::InvalidArgument(format!("module has a simple summand at sink {i}")));
            }
            let ker = phi.nullspace(f);
            dims[i] = ker.len();
            let mut off = 0;
            for (k, &h) in incident.iter().enumerate() {
                let mut proj = Mat::zeros(widths[k], ker.len());
                for (c, v) in ker.iter().enumerate() {
                    for r in 0..widths[k] {
                        proj.set(r, c, v[off + r]);
                    }
                }
                maps[h] = proj;
                off += widths[k];
            }
        }
        Reflection::Minus => {
            if incident.iter().any(|&h| m.arrows[h].1 == i) {
                return Err(Error::InvalidArgument(format!("vertex {i} is not a source")));
            }
            // ψ : V_i → ⊕ V_{t(h)}
            let heights: Vec<usize> = incident.iter().map(|&h| m.dims[m.arrows[h].1]).collect();
            let total: usize = heights.iter().sum();
            let mut psi_t = Mat::zeros(m.dims[i], total);
            let mut off = 0;
            for (k, &h) in incident.iter().enumerate() {
                for r in 0..heights[k] {
                    for c in 0..m.dims[i] {
                        psi_t.set(c, off + r, m.maps[h].get(r, c));
                    }
                }
                off += heights[k];
            }
            let (img, piv) = psi_t.rref(f);
            if piv.len() < m.dims[i] {
                return Err(Error::InvalidArgument(format!("module has a simple summand at source {i}")));
            }
            let img = Mat { rows: piv.len(), cols: total, data: img.data[..piv.len() * total].to_vec() };
            let free: Vec<usize> = (0..total).filter(|c| !piv.contains(c)).collect();
            dims[i] = free.len();
            let mut off = 0;
            for (k, &h) in incident.iter().enumerate() {
                let mut inc = Mat::zeros(free.len(), heights[k]);
                for c in 0..heights[k] {
                    let mut e = vec![0u32; total];
                    e[off + c] = 1;
                    reduce(&mut e, &img, &piv, f);
                    for (r, &fr) in free.iter().enumerate() {
                        inc.set(r, c, e[fr]);
                    }
                }
                maps[h] = inc;
                off += heights[k];
            }
        }
    }
    Ok(FqModule { p: m.p, dims, arrows, maps })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jordan_ss(p: u32) -> FqModule {
        FqModule::new(p, vec![2], vec![(0, 0)], vec![Mat::zeros(2, 2)]).unwrap()
    }

    #[test]
    fn aut_of_semisimple_jordan() {
        for p in [2u32, 3, 5] {
            let q = p as u64;
            assert_eq!(aut_order(&jordan_ss(p), AUT_BUDGET).unwrap(), (q * q - 1) * (q * q - q));
        }
    }

    #[test]
    fn census_of_jordan_semisimple() {
        let l = jordan_ss(3);
        let mut by_dim = [0u64; 3];
        let n = submodule_census(&l, None, &CensusBudget::default(), |w| by_dim[w.dims()[0]] += 1).unwrap();
        assert_eq!(by_dim, [1, 4, 1]);
        assert_eq!(n, 6);
    }

    #[test]
    fn census_budget_is_enforced() {
        let l = FqModule::new(2, vec![9], vec![(0, 0)], vec![Mat::zeros(9, 9)]).unwrap();
        assert!(matches!(submodule_census(&l, None, &CensusBudget::default(), |_| {}), Err(Error::Budget(_))));
    }

    #[test]
    fn shape_validation() {
        assert!(FqModule::new(3, vec![1, 2], vec![(0, 1)], vec![Mat::zeros(1, 1)]).is_err());
        assert!(FqModule::new(4, vec![1], vec![], vec![]).is_err());
    }
}
