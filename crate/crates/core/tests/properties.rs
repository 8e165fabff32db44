mod common;

use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use proptest::prelude::*;

use hallcanon::canonical::{canonical_basis, plus_truncation};
use hallcanon::fqrep::cyclic::CyclicFamily;
use hallcanon::fqrep::CensusBudget;
use hallcanon::hallalg::GenericAlgebra;
use hallcanon::hallpoly::FitOptions;
use hallcanon::laurent::{qbinom, qint};
use hallcanon::partitions::{character, kostka, partitions_of};
use hallcanon::pbw::{DiscreteSetting, Word};
use hallcanon::{Laurent, Partition};

fn laurent() -> impl Strategy<Value = Laurent> {
    prop::collection::vec((-4i64..=4, -5i64..=5), 0..5)
        .prop_map(|t| Laurent::from_terms(t.into_iter().map(|(e, c)| (e, BigInt::from(c)))))
}

fn partition(max: u32) -> impl Strategy<Value = Partition> {
    prop::collection::vec(1u32..=max, 0..5).prop_map(Partition::from_unsorted)
}

fn cyclic2() -> &'static DiscreteSetting<CyclicFamily> {
    static S: OnceLock<DiscreteSetting<CyclicFamily>> = OnceLock::new();
    S.get_or_init(|| {
        let fam = Arc::new(CyclicFamily::new(2).unwrap());
        DiscreteSetting::new(GenericAlgebra::new(fam, CensusBudget::default(), FitOptions::default(), None).unwrap())
    })
}

proptest! {
    #[test]
    fn laurent_ring_axioms(a in laurent(), b in laurent(), c in laurent()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Laurent::one(), a.clone());
    }

    #[test]
    fn bar_is_a_ring_involution(a in laurent(), b in laurent()) {
        prop_assert_eq!(a.bar().bar(), a.clone());
        prop_assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
        prop_assert_eq!((&a + &b).bar(), &a.bar() + &b.bar());
    }

    #[test]
    fn plus_truncation_of_a_polynomial(a in laurent()) {
        let p = a.plus_truncation();
        prop_assert!(p.is_bar_invariant());
        prop_assert!((&a - &p).in_vinv());
    }

    #[test]
    fn gaussian_binomials(m in 0i64..8, k in 0i64..8) {
        prop_assume!(k <= m);
        prop_assert_eq!(qbinom(m, k).unwrap(), qbinom(m, m - k).unwrap());
        prop_assert!(qbinom(m, k).unwrap().is_bar_invariant());
        if k >= 1 && k < m {
            // [m; k] = v^{-k} [m-1; k] + v^{m-k} [m-1; k-1]
            let rhs = &qbinom(m - 1, k).unwrap().shift(-k) + &qbinom(m - 1, k - 1).unwrap().shift(m - k);
            prop_assert_eq!(qbinom(m, k).unwrap(), rhs);
        }
        // at v = 1 it is the ordinary binomial
        let at1: BigInt = qbinom(m, k).unwrap().terms().map(|(_, c)| c.clone()).sum();
        let ord: u64 = (0..k as u64).fold(1, |acc, i| acc * (m as u64 - i) / (i + 1));
        prop_assert_eq!(at1, BigInt::from(ord));
    }

    #[test]
    fn quantum_integers(n in -6i64..6) {
        prop_assert_eq!(qint(-n), -qint(n));
        prop_assert!(qint(n).is_bar_invariant());
    }

    #[test]
    fn conjugation_is_an_involution(p in partition(6)) {
        prop_assert_eq!(p.conjugate().conjugate(), p.clone());
        prop_assert_eq!(p.conjugate().size(), p.size());
    }

    #[test]
    fn kostka_counts_tableaux(m in 1u32..6, i in 0usize..7, j in 0usize..7) {
        let ps = partitions_of(m);
        let (l, mu) = (&ps[i % ps.len()], &ps[j % ps.len()]);
        prop_assert_eq!(kostka(l, mu).unwrap(), common::kostka_brute(l.parts(), mu.parts()));
    }
}

#[test]
fn character_column_orthogonality() {
    for m in 1..=6 {
        let ps = partitions_of(m);
        for mu in &ps {
            for nu in &ps {
                let s: i64 = ps.iter().map(|l| character(l, mu).unwrap() * character(l, nu).unwrap()).sum();
                let want = if mu == nu { mu.z() } else { BigInt::from(0) };
                assert_eq!(BigInt::from(s), want, "{mu} {nu}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn generic_multiplication_is_associative(w in prop::collection::vec((0usize..2, 1u32..=1), 3..=4)) {
        let s = cyclic2();
        let alg = s.algebra();
        let el = |l: &[(usize, u32)]| alg.word(&Word::from_letters(l.to_vec()).unwrap()).unwrap();
        let (x, y, z) = (el(&w[..1]), el(&w[1..2]), el(&w[2..]));
        let left = alg.mul(&alg.mul(&x, &y).unwrap(), &z).unwrap();
        let right = alg.mul(&x, &alg.mul(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(left, el(&w));
    }

    #[test]
    fn truncation_output_is_bar_invariant(a in 0usize..3, b in 0usize..3) {
        prop_assume!(a + b > 0);
        let s = cyclic2();
        let cb = canonical_basis(s, &[a, b]).unwrap();
        let g = plus_truncation(&cb.pbw).unwrap();
        for (k, x) in g.iter().enumerate() {
            // leading coefficient 1 on its own index, v⁻¹ℤ[v⁻¹] on the others
            prop_assert!(x.coeff(&cb.pbw.indices[k]).is_one());
            for (j, i) in cb.pbw.indices.iter().enumerate() {
                prop_assert!(j == k || x.coeff(i).in_vinv());
            }
            prop_assert_eq!(x, &cb.element(k));
            prop_assert!(cb.over_monomials(k).iter().all(Laurent::is_bar_invariant));
        }
    }
}
