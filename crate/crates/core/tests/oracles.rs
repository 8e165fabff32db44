//! Negative controls and hand-computed values.

mod common;

use std::sync::Arc;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hallcanon::canonical::{bar_element, canonical_basis, lusztig_solve, verify, CanonicalBasis};
use hallcanon::fqrep::cyclic::{CyclicFamily, Multisegment};
use hallcanon::fqrep::CensusBudget;
use hallcanon::hallalg::{AlgebraElement, GenericAlgebra, KroneckerAlgebra};
use hallcanon::hallpoly::{hall_polynomial, FitOptions, HallCounter};
use hallcanon::pbw::{enumerate_indices, pbw_basis_ordered, unitriangular_inverse, DiscreteSetting, KroneckerSetting, PbwBasis, Setting, Word};
use hallcanon::Laurent;

type Matrix = Vec<Vec<Laurent>>;

fn cyclic(n: usize) -> DiscreteSetting<CyclicFamily> {
    let fam = Arc::new(CyclicFamily::new(n).unwrap());
    DiscreteSetting::new(GenericAlgebra::new(fam, CensusBudget::default(), FitOptions::default(), None).unwrap())
}

fn kronecker() -> KroneckerSetting {
    KroneckerSetting::new(KroneckerAlgebra::new(CensusBudget::default(), FitOptions::default(), None))
}

fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut out = vec![vec![Laurent::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                out[i][j] += &(&a[i][k] * &b[k][j]);
            }
        }
    }
    out
}

fn row_times(x: &[Laurent], m: &Matrix) -> Vec<Laurent> {
    let mut out = vec![Laurent::zero(); m.len()];
    for (a, c) in x.iter().enumerate() {
        for (b, o) in out.iter_mut().enumerate() {
            *o += &(c * &m[a][b]);
        }
    }
    out
}

fn random_laurent(rng: &mut impl Rng) -> Laurent {
    Laurent::from_terms((0..rng.gen_range(0..4)).map(|_| (rng.gen_range(-3..=3), BigInt::from(rng.gen_range(-3..=3)))))
}

#[test]
fn serre_with_wrong_exponent_is_nonzero() {
    let s = cyclic(2);
    // (i, j) = -2 here, so the relation needs N = 3; N = 2 must fail
    let mut acc = AlgebraElement::zero();
    for k in 0..=2u32 {
        let w = Word::from_letters([(0, k), (1, 1), (0, 2 - k)].into_iter().filter(|l| l.1 > 0).collect()).unwrap();
        let x = s.algebra().word(&w).unwrap();
        acc = if k % 2 == 0 { acc.add(&x) } else { acc.sub(&x) };
    }
    assert!(!acc.is_zero());
}

#[test]
fn bar_is_an_involution_and_matches_monomial_route() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let s = cyclic(2);
    let bases: Vec<CanonicalBasis<_>> =
        [[1, 1], [2, 1], [1, 2], [2, 2]].iter().map(|nu| canonical_basis(&s, nu).unwrap()).collect();
    for k in 0..50 {
        let cb = &bases[k % bases.len()];
        let x: Vec<Laurent> = (0..cb.len()).map(|_| random_laurent(&mut rng)).collect();
        let y = bar_element(&cb.zeta, &x);
        assert_eq!(bar_element(&cb.zeta, &y), x);
        // monomials are bar-invariant: go to monomial coordinates, bar the
        // coefficients, come back
        let over_m: Vec<Laurent> = row_times(&x, &cb.eta).iter().map(Laurent::bar).collect();
        assert_eq!(row_times(&over_m, &cb.pbw.t), y);
    }
}

#[test]
fn bar_is_antilinear() {
    let s = cyclic(2);
    let cb = canonical_basis(&s, &[2, 1]).unwrap();
    for a in 0..cb.len() {
        let mut e = vec![Laurent::zero(); cb.len()];
        e[a] = Laurent::one();
        let mut ve = e.clone();
        ve[a] = Laurent::v_pow(1);
        let lhs = bar_element(&cb.zeta, &ve);
        let rhs: Vec<Laurent> = bar_element(&cb.zeta, &e).iter().map(|c| c.shift(-1)).collect();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn corrupted_coefficients_fail_verification() {
    let s = cyclic(2);
    let mut cb = canonical_basis(&s, &[1, 1]).unwrap();
    assert!(verify(&s, &cb, 8).unwrap().passed());
    cb.g[1][0] = Laurent::v_pow(-1);
    let r = verify(&s, &cb, 8).unwrap();
    assert!(!r.bar_invariant[1]);
    assert!(!r.passed());

    let k = kronecker();
    let mut cb = canonical_basis(&k, &[2, 1]).unwrap();
    assert!(verify(&k, &cb, 8).unwrap().passed());
    let last = cb.len() - 1;
    cb.g[last][0] += &Laurent::v_pow(-2);
    assert!(!verify(&k, &cb, 8).unwrap().bar_invariant[last]);
}

#[test]
fn solving_over_the_canonical_basis_is_trivial() {
    let s = cyclic(2);
    for nu in [[2, 1], [2, 2]] {
        let cb = canonical_basis(&s, &nu).unwrap();
        // 𝔪 = t E and C = g E, so 𝔪 = (t g⁻¹) C
        let t2 = matmul(&cb.pbw.t, &unitriangular_inverse(&cb.g));
        let pbw = PbwBasis { e: cb.elements(), t: t2, ..cb.pbw.clone() };
        let again = CanonicalBasis::from_pbw(pbw).unwrap();
        let n = cb.len();
        for a in 0..n {
            for b in 0..n {
                let want = if a == b { Laurent::one() } else { Laurent::zero() };
                assert_eq!(again.zeta[a][b], want);
                assert_eq!(again.g[a][b], want);
            }
        }
        assert_eq!(lusztig_solve(&again.zeta).unwrap(), again.g);
    }
}

#[test]
fn canonical_basis_independent_of_linear_extension() {
    let s = cyclic(2);
    let mut swapped = 0;
    for nu in [[2, 1], [2, 2], [3, 1]] {
        let order = enumerate_indices(&s, &nu).unwrap();
        let c1 = CanonicalBasis::from_pbw(pbw_basis_ordered(&s, &nu, order.clone()).unwrap()).unwrap();
        for k in 0..order.len().saturating_sub(1) {
            if s.compare(&order[k], &order[k + 1]).unwrap().is_some() {
                continue;
            }
            let mut o2 = order.clone();
            o2.swap(k, k + 1);
            let c2 = CanonicalBasis::from_pbw(pbw_basis_ordered(&s, &nu, o2).unwrap()).unwrap();
            for (a, idx) in c1.pbw.indices.iter().enumerate() {
                let b = c2.pbw.indices.iter().position(|x| x == idx).unwrap();
                assert_eq!(c1.element(a), c2.element(b));
            }
            swapped += 1;
        }
    }
    assert!(swapped > 0, "no incomparable adjacent pair to swap");
}

#[test]
fn segment_of_length_two() {
    let fam = Arc::new(CyclicFamily::new(2).unwrap());
    let counter = HallCounter::new(fam.clone(), CensusBudget::default());
    let seg = Multisegment::parse(2, "[1;2)").unwrap();
    let s1 = Multisegment::parse(2, "[1;1)").unwrap();
    let s2 = Multisegment::parse(2, "[2;1)").unwrap();
    let opts = FitOptions::default();
    // top S1, socle S2
    assert_eq!(hall_polynomial(&counter, &seg, &s1, &s2, &opts).unwrap().coeffs, vec![BigInt::from(1)]);
    assert!(hall_polynomial(&counter, &seg, &s2, &s1, &opts).unwrap().is_zero());
    let alg = GenericAlgebra::new(fam, CensusBudget::default(), opts, None).unwrap();
    assert_eq!(alg.aut(&seg).unwrap().coeffs, vec![BigInt::from(-1), BigInt::from(1)]);
}

#[test]
fn kostant_known_values() {
    // A2: 1, 2, 2, 3 partitions of α1, α1+α2, 2α1+α2, 2α1+2α2
    let a2 = common::an_roots(2);
    assert_eq!(common::kostant(&a2, &[1, 0]), 1);
    assert_eq!(common::kostant(&a2, &[1, 1]), 2);
    assert_eq!(common::kostant(&a2, &[2, 1]), 2);
    assert_eq!(common::kostant(&a2, &[2, 2]), 3);
    // A3 at the highest root: 4
    assert_eq!(common::kostant(&common::an_roots(3), &[1, 1, 1]), 4);
    // Kronecker: (1,1) is α0+α1 or δ
    assert_eq!(common::kostant(&common::kronecker_roots(3), &[1, 1]), 2);
    assert_eq!(common::kostant(&common::kronecker_roots(3), &[2, 1]), 3);
}

#[test]
fn kostant_matches_index_counts_off_the_imaginary_line() {
    let k = kronecker();
    for nu in [[1, 0], [2, 1], [1, 2], [3, 1]] {
        let n = enumerate_indices(&k, &nu).unwrap().len() as u64;
        assert_eq!(n, common::kostant(&common::kronecker_roots(4), &nu), "{nu:?}");
    }
}
