//! Canonical bases from PBW data: the bar involution through monomial
//! coordinates, the triangular solve for `g`, the `⁺`-truncation algorithm
//! and machine-checkable certificates.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::hallalg::{latex_laurent, AlgebraElement, Symbol};
use num_traits::Zero;

use crate::laurent::Laurent;
use crate::pbw::{pbw_basis, unitriangular_inverse, PbwBasis, Setting};

type Matrix = Vec<Vec<Laurent>>;

/// `η = t⁻¹` (so `E_a = Σ η_ab 𝔪_b`) and `ζ = η̄ t` (so `bar(E_a) = Σ ζ_ab E_b`).
pub fn bar_matrix(t: &[Vec<Laurent>]) -> (Matrix, Matrix) {
    let eta = unitriangular_inverse(t);
    let n = t.len();
    let mut zeta = vec![vec![Laurent::zero(); n]; n];
    for a in 0..n {
        for c in 0..=a {
            let mut s = Laurent::zero();
            for b in c..=a {
                if !eta[a][b].is_zero() && !t[b][c].is_zero() {
                    s += &(&eta[a][b].bar() * &t[b][c]);
                }
            }
            zeta[a][c] = s;
        }
    }
    (eta, zeta)
}

/// `bar(Σ x_a E_a) = Σ_a x̄_a Σ_b ζ_ab E_b`, in E coordinates.
pub fn bar_element(zeta: &[Vec<Laurent>], x: &[Laurent]) -> Vec<Laurent> {
    let n = zeta.len();
    let mut out = vec![Laurent::zero(); n];
    for a in 0..n {
        if x[a].is_zero() {
            continue;
        }
        let xb = x[a].bar();
        for b in 0..=a {
            if !zeta[a][b].is_zero() {
                out[b] += &(&xb * &zeta[a][b]);
            }
        }
    }
    out
}

/// The unique `g` with `g_aa = 1`, `g_ab ∈ v⁻¹ℤ[v⁻¹]` for `b < a` and
/// `Σ_b g_ab E_b` bar-invariant: `g_ac − ḡ_ac = Σ_{c<b≤a} ḡ_ab ζ_bc`.
pub fn lusztig_solve(zeta: &[Vec<Laurent>]) -> Result<Matrix> {
    let n = zeta.len();
    for a in 0..n {
        if !zeta[a][a].is_one() {
            return Err(Error::NoSolution(format!("bar matrix has diagonal {} at {a}", zeta[a][a])));
        }
    }
    let mut g = vec![vec![Laurent::zero(); n]; n];
    for a in 0..n {
        g[a][a] = Laurent::one();
        for c in (0..a).rev() {
            let mut r = Laurent::zero();
            for b in c + 1..=a {
                if !g[a][b].is_zero() && !zeta[b][c].is_zero() {
                    r += &(&g[a][b].bar() * &zeta[b][c]);
                }
            }
            let neg = r.negative_part();
            if !r.coeff(0).is_zero() || r.positive_part() != -neg.bar() {
                return Err(Error::NoSolution(format!("entry ({a}, {c}): {r} is not of the form g − ḡ")));
            }
            g[a][c] = neg;
        }
    }
    Ok(g)
}

#[derive(Clone, Debug)]
pub struct CanonicalBasis<I: Symbol> {
    pub pbw: PbwBasis<I>,
    pub eta: Matrix,
    pub zeta: Matrix,
    /// `C_a = Σ_b g_ab E_b`.
    pub g: Matrix,
}

impl<I: Symbol> CanonicalBasis<I> {
    pub fn from_pbw(pbw: PbwBasis<I>) -> Result<Self> {
        let (eta, zeta) = bar_matrix(&pbw.t);
        let g = lusztig_solve(&zeta)?;
        Ok(Self { pbw, eta, zeta, g })
    }

    pub fn len(&self) -> usize {
        self.g.len()
    }

    pub fn is_empty(&self) -> bool {
        self.g.is_empty()
    }

    /// `C_a` in N coordinates.
    pub fn element(&self, a: usize) -> AlgebraElement<I> {
        let mut x = AlgebraElement::zero();
        for (b, c) in self.g[a].iter().enumerate() {
            if !c.is_zero() {
                x = x.add(&self.pbw.e[b].scale(c));
            }
        }
        x
    }

    pub fn elements(&self) -> Vec<AlgebraElement<I>> {
        (0..self.len()).map(|a| self.element(a)).collect()
    }

    /// `C_a` over the monomials: `Σ_b g_ab η_bc`.
    pub fn over_monomials(&self, a: usize) -> Vec<Laurent> {
        let n = self.len();
        let mut out = vec![Laurent::zero(); n];
        for b in 0..n {
            if self.g[a][b].is_zero() {
                continue;
            }
            for (c, o) in out.iter_mut().enumerate().take(b + 1) {
                if !self.eta[b][c].is_zero() {
                    *o += &(&self.g[a][b] * &self.eta[b][c]);
                }
            }
        }
        out
    }
}

pub fn canonical_basis<S: Setting>(s: &S, nu: &[usize]) -> Result<CanonicalBasis<S::Index>> {
    CanonicalBasis::from_pbw(pbw_basis(s, nu)?)
}

/// `G_a`: start from `𝔪_a` in N coordinates and, while some aperiodic `b`
/// before `a` carries a coefficient `φ ∉ v⁻¹ℤ[v⁻¹]`, subtract `⁺φ · 𝔪_b`
/// for the latest such `b`.
pub fn plus_truncation<I: Symbol>(pbw: &PbwBasis<I>) -> Result<Vec<AlgebraElement<I>>> {
    let n = pbw.indices.len();
    let width = pbw
        .monomials
        .iter()
        .flat_map(|m| m.terms().map(|(_, c)| (c.max_exp().unwrap_or(0) - c.min_exp().unwrap_or(0) + 1) as usize))
        .max()
        .unwrap_or(1);
    let guard = n * width.max(1);
    let mut out = Vec::with_capacity(n);
    for a in 0..n {
        let mut x = pbw.monomials[a].clone();
        let mut steps = 0;
        while let Some(b) = (0..a).rev().find(|&b| !x.coeff(&pbw.indices[b]).in_vinv()) {
            steps += 1;
            if steps > guard {
                return Err(Error::Budget(format!("truncation for {} exceeded {guard} steps", pbw.indices[a])));
            }
            let phi = x.coeff(&pbw.indices[b]).plus_truncation();
            x = x.sub(&pbw.monomials[b].scale(&phi));
        }
        out.push(x);
    }
    Ok(out)
}

/// Certificate for one computed basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub bar_invariant: Vec<bool>,
    pub unitriangular: Vec<bool>,
    /// Upper triangle, row-major: `(a, b, ok)` for `a ≤ b`.
    pub almost_orthogonal: Vec<(usize, usize, bool)>,
    pub series_order: usize,
    /// Whether the `⁺`-truncation output equals `C`, per element.
    pub truncation_agrees: Vec<bool>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.bar_invariant.iter().all(|&b| b)
            && self.unitriangular.iter().all(|&b| b)
            && self.almost_orthogonal.iter().all(|&(_, _, b)| b)
            && self.truncation_agrees.iter().all(|&b| b)
    }
}

pub fn verify<S: Setting>(s: &S, cb: &CanonicalBasis<S::Index>, series_order: usize) -> Result<Report> {
    let n = cb.len();
    let idx = &cb.pbw.indices;
    let bar_invariant = (0..n).map(|a| cb.over_monomials(a).iter().all(Laurent::is_bar_invariant)).collect();
    let mut unitriangular = Vec::with_capacity(n);
    for a in 0..n {
        let mut ok = cb.g[a][a].is_one();
        for b in 0..n {
            if b == a || cb.g[a][b].is_zero() {
                continue;
            }
            ok &= cb.g[a][b].in_vinv() && s.compare(&idx[b], &idx[a])? == Some(Ordering::Less);
        }
        unitriangular.push(ok);
    }
    let cs = cb.elements();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect();
    let almost_orthogonal = pairs
        .par_iter()
        .map(|&(a, b)| {
            let f = s.green(&cs[a], &cs[b])?;
            Ok((a, b, f.in_delta_plus_tail(i64::from(a == b), series_order)))
        })
        .collect::<Result<Vec<_>>>()?;
    let truncation_agrees = plus_truncation(&cb.pbw)?.iter().zip(&cs).map(|(g, c)| g == c).collect();
    Ok(Report { bar_invariant, unitriangular, almost_orthogonal, series_order, truncation_agrees })
}

fn matrix_json(m: &[Vec<Laurent>]) -> Value {
    Value::Array(m.iter().map(|r| Value::Array(r.iter().map(|c| json!(c.to_string())).collect())).collect())
}

/// Output bundle: `{quiver, basis, nu, indices, E_over_N, monomial_over_E,
/// zeta, g, C_over_E, C_over_N, certificates}`.
pub fn bundle<S: Setting>(s: &S, cb: &CanonicalBasis<S::Index>, report: &Report) -> Result<Value> {
    let q = s.quiver();
    let basis = s.basis_name();
    let indices: Vec<Value> = cb
        .pbw
        .indices
        .iter()
        .zip(&cb.pbw.words)
        .map(|(i, w)| {
            Ok(json!({
                "symbol": i.to_string(),
                "index": serde_json::to_value(i)?,
                "word": w.render(q),
                "letters": w.letters(),
            }))
        })
        .collect::<Result<_>>()?;
    let elem = |x: &AlgebraElement<S::Index>| x.to_json(q.id(), basis)["terms"].clone();
    Ok(json!({
        "quiver": q.id(),
        "basis": basis,
        "nu": cb.pbw.nu,
        "indices": indices,
        "E_over_N": cb.pbw.e.iter().map(elem).collect::<Vec<_>>(),
        "monomial_over_E": matrix_json(&cb.pbw.t),
        "zeta": matrix_json(&cb.zeta),
        "g": matrix_json(&cb.g),
        "C_over_E": cb.g.iter().map(|r| {
            r.iter().enumerate().filter(|(_, c)| !c.is_zero())
                .map(|(b, c)| json!({"symbol": cb.pbw.indices[b].to_string(), "coeff": c.to_string()}))
                .collect::<Vec<_>>()
        }).collect::<Vec<_>>(),
        "C_over_N": cb.elements().iter().map(elem).collect::<Vec<_>>(),
        "certificates": serde_json::to_value(report)?,
    }))
}

/// One `align*` line per canonical basis element over `E`.
pub fn bundle_latex<I: Symbol>(cb: &CanonicalBasis<I>, report: &Report) -> String {
    let sym = |i: &I| i.to_string().replace('_', "\\_").replace('#', "\\#");
    let mut out = String::from("\\begin{align*}\n");
    for (a, row) in cb.g.iter().enumerate() {
        let mut terms = Vec::new();
        for (b, c) in row.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let e = format!("E_{{{}}}", sym(&cb.pbw.indices[b]));
            terms.push(if c.is_one() { e } else { format!("\\left({}\\right) {e}", latex_laurent(c)) });
        }
        out.push_str(&format!("C_{{{}}} &= {} \\\\\n", sym(&cb.pbw.indices[a]), terms.join(" + ")));
    }
    out.push_str("\\end{align*}\n");
    out.push_str(&format!("% verified: {}\n", report.passed()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(s: &str) -> Laurent {
        s.parse().unwrap()
    }

    #[test]
    fn trivial_zeta() {
        let z = vec![vec![Laurent::one(), Laurent::zero()], vec![Laurent::zero(), Laurent::one()]];
        assert_eq!(lusztig_solve(&z).unwrap(), z);
    }

    #[test]
    fn two_by_two() {
        let z = vec![vec![Laurent::one(), Laurent::zero()], vec![l("v - v^-1"), Laurent::one()]];
        let g = lusztig_solve(&z).unwrap();
        assert_eq!(g[1][0], l("-v^-1"));
        // C_2 = E_2 − v⁻¹E_1 is fixed by bar
        let c = vec![g[1][0].clone(), g[1][1].clone()];
        assert_eq!(bar_element(&z, &c), c);
    }

    #[test]
    fn rejects_inconsistent_zeta() {
        let z = vec![vec![Laurent::one(), Laurent::zero()], vec![l("v"), Laurent::one()]];
        assert!(matches!(lusztig_solve(&z), Err(Error::NoSolution(_))));
        let z = vec![vec![Laurent::one(), Laurent::zero()], vec![l("1"), Laurent::one()]];
        assert!(lusztig_solve(&z).is_err());
    }

    #[test]
    fn bar_matrix_of_identity() {
        let t = vec![vec![Laurent::one(), Laurent::zero()], vec![l("v^-1"), Laurent::one()]];
        let (eta, zeta) = bar_matrix(&t);
        assert_eq!(eta[1][0], l("-v^-1"));
        // ζ_21 = −v + v⁻¹
        assert_eq!(zeta[1][0], l("v^-1 - v"));
        let g = lusztig_solve(&zeta).unwrap();
        assert_eq!(g[1][0], l("v^-1"));
    }

    mod end_to_end {
        use std::sync::Arc;

        use super::*;
        use crate::fqrep::cyclic::CyclicFamily;
        use crate::fqrep::linear::LinearFamily;
        use crate::fqrep::CensusBudget;
        use crate::hallalg::{GenericAlgebra, KroneckerAlgebra};
        use crate::hallpoly::FitOptions;
        use crate::pbw::{DiscreteSetting, KroneckerSetting};
        use crate::quiver::Quiver;

        fn cyclic(n: usize) -> DiscreteSetting<CyclicFamily> {
            let fam = Arc::new(CyclicFamily::new(n).unwrap());
            DiscreteSetting::new(GenericAlgebra::new(fam, CensusBudget::default(), FitOptions::default(), None).unwrap())
        }

        fn run<S: Setting>(s: &S, nu: &[usize]) -> (CanonicalBasis<S::Index>, Report) {
            let cb = canonical_basis(s, nu).unwrap();
            let r = verify(s, &cb, 8).unwrap();
            for a in 0..cb.len() {
                eprintln!("C[{}] = {}", cb.pbw.indices[a], cb.element(a));
            }
            eprintln!("{r:?}");
            (cb, r)
        }

        #[test]
        fn cyclic_two_small() {
            for nu in [[1, 1], [2, 1], [2, 2]] {
                let (_, r) = run(&cyclic(2), &nu);
                assert!(r.passed(), "{nu:?}");
            }
        }

        #[test]
        fn kronecker_small() {
            let s = KroneckerSetting::new(KroneckerAlgebra::new(CensusBudget::default(), FitOptions::default(), None));
            for nu in [[1, 1], [2, 1], [1, 2], [2, 2]] {
                let (_, r) = run(&s, &nu);
                assert!(r.passed(), "{nu:?}");
            }
        }

        #[test]
        fn a3_all_ones() {
            let q = Quiver::linear_an(3, "><").unwrap();
            let fam = Arc::new(LinearFamily::new(q).unwrap());
            let s = DiscreteSetting::new(GenericAlgebra::new(fam, CensusBudget::default(), FitOptions::default(), None).unwrap());
            let (_, r) = run(&s, &[1, 1, 1]);
            assert!(r.passed());
        }
    }
}
