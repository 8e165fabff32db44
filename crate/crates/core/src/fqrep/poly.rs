//! Polynomials over `F_p`, monic irreducibles and companion matrices.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::linalg::{Fq, Mat};

/// Coefficients low to high; no trailing zeros.
pub type Poly = Vec<u32>;

fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn mul(a: &[u32], b: &[u32], f: Fq) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(out)
}

/// Remainder of `a` modulo a monic `m`.
pub fn rem_monic(a: &[u32], m: &[u32], f: Fq) -> Poly {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (k, &c) in m.iter().enumerate() {
                r[shift + k] = f.sub(r[shift + k], f.mul(lead, c));
            }
        }
        r.pop();
    }
    trim(r)
}

pub fn pow(a: &[u32], e: u32, f: Fq) -> Poly {
    (0..e).fold(vec![1], |acc, _| mul(&acc, a, f))
}

/// Monic polynomial from its non-leading coefficients.
pub fn monic(lower: &[u32]) -> Poly {
    let mut v = lower.to_vec();
    v.push(1);
    v
}

fn has_root(m: &[u32], f: Fq) -> bool {
    f.elements().any(|x| m.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c)) == 0)
}

/// Irreducibility of a monic polynomial by trial division.
pub fn is_irreducible(m: &[u32], f: Fq) -> bool {
    let d = m.len() - 1;
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    if has_root(m, f) {
        return false;
    }
    for k in 2..=d / 2 {
        for g in monic_polys(k, f) {
            if rem_monic(m, &g, f).is_empty() {
                return false;
            }
        }
    }
    true
}

fn monic_polys(d: usize, f: Fq) -> Vec<Poly> {
    let p = f.p() as usize;
    let total = p.pow(d as u32);
    (0..total)
        .map(|mut idx| {
            let mut lower = Vec::with_capacity(d);
            for _ in 0..d {
                lower.push((idx % p) as u32);
                idx /= p;
            }
            monic(&lower)
        })
        .collect()
}

/// Monic irreducibles of degree `d`, in a fixed order.
pub fn irreducibles(d: usize, f: Fq) -> Arc<Vec<Poly>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, usize), Arc<Vec<Poly>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&(f.p(), d)) {
        return v.clone();
    }
    let v: Vec<Poly> = monic_polys(d, f).into_iter().filter(|m| is_irreducible(m, f)).collect();
    let v = Arc::new(v);
    cache.lock().unwrap().insert((f.p(), d), v.clone());
    v
}

/// Number of monic irreducibles of degree `d` over `F_q` (necklace count).
pub fn irreducible_count(d: u32, q: u64) -> u64 {
    let mut total: i128 = 0;
    for k in 1..=d {
        if d % k == 0 {
            total += mobius(d / k) as i128 * (q as i128).pow(k);
        }
    }
    (total / d as i128) as u64
}

fn mobius(mut n: u32) -> i32 {
    let mut res = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            res = -res;
        }
        p += 1;
    }
    if n > 1 {
        res = -res;
    }
    res
}

/// Companion matrix of a monic polynomial.
pub fn companion(m: &[u32], f: Fq) -> Mat {
    let d = m.len() - 1;
    let mut c = Mat::zeros(d, d);
    for i in 1..d {
        c.set(i, i - 1, 1);
    }
    for i in 0..d {
        c.set(i, d - 1, f.neg(m[i]));
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreducible_counts_match_necklaces() {
        for p in [2u32, 3, 5] {
            let f = Fq::new(p).unwrap();
            for d in 1..=3 {
                assert_eq!(irreducibles(d, f).len() as u64, irreducible_count(d as u32, p as u64), "p={p} d={d}");
            }
        }
    }

    #[test]
    fn companion_of_linear() {
        let f = Fq::new(7).unwrap();
        // x - 3  ->  [3]
        assert_eq!(companion(&[4, 1], f), Mat::from_rows(&[vec![3]]));
    }
}
