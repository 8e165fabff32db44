//! Oracles shared by the integration tests. Nothing here calls into the
//! library's own combinatorics.

#![allow(dead_code)]

use std::collections::HashMap;

use hallcanon::canonical::CanonicalBasis;
use hallcanon::hallalg::{AlgebraElement, Symbol};
use hallcanon::pbw::unitriangular_inverse;
use hallcanon::Laurent;
use rand::Rng;

/// Positive roots with multiplicity, as dimension vectors.
pub type Roots = Vec<(Vec<usize>, u32)>;

/// Kronecker: real roots `(a, a±1)`, imaginary `(m, m)` of multiplicity one.
pub fn kronecker_roots(max: usize) -> Roots {
    let mut out = Vec::new();
    for a in 0..=max + 1 {
        for b in [a + 1, a.wrapping_sub(1)] {
            if b <= max + 1 && a + b > 0 {
                out.push((vec![a, b], 1));
            }
        }
        if a > 0 {
            out.push((vec![a, a], 1));
        }
    }
    out
}

/// Cyclic `n`: segment dimension vectors; lengths divisible by `n` are the
/// imaginary roots `kδ` with multiplicity `n − 1`.
pub fn cyclic_roots(n: usize, max_len: usize) -> Roots {
    let mut seen: HashMap<Vec<usize>, u32> = HashMap::new();
    for i in 0..n {
        for l in 1..=max_len {
            let mut d = vec![0; n];
            for k in 0..l {
                d[(i + k) % n] += 1;
            }
            let mult = if l % n == 0 { (n - 1) as u32 } else { 1 };
            seen.insert(d, mult);
        }
    }
    let mut v: Roots = seen.into_iter().collect();
    v.sort();
    v
}

/// `A_n`: intervals.
pub fn an_roots(n: usize) -> Roots {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i..n {
            out.push(((0..n).map(|k| usize::from(i <= k && k <= j)).collect(), 1));
        }
    }
    out
}

/// Coefficient of `x^ν` in `Π_β (1 − x^β)^{−mult β}`.
pub fn kostant(roots: &Roots, nu: &[usize]) -> u64 {
    let n = nu.len();
    let size: usize = nu.iter().map(|&x| x + 1).product();
    let idx = |d: &[usize]| d.iter().zip(nu).fold(0, |acc, (x, m)| acc * (m + 1) + x);
    let all: Vec<Vec<usize>> = (0..size)
        .map(|mut k| {
            let mut d = vec![0; n];
            for j in (0..n).rev() {
                d[j] = k % (nu[j] + 1);
                k /= nu[j] + 1;
            }
            d
        })
        .collect();
    let mut f = vec![0u64; size];
    f[0] = 1;
    for (beta, mult) in roots {
        if beta.iter().zip(nu).any(|(b, m)| b > m) || beta.iter().all(|&b| b == 0) {
            continue;
        }
        for _ in 0..*mult {
            // multiply by 1/(1 − x^β): ascending in-place pass
            for d in &all {
                if d.iter().zip(beta).all(|(x, b)| x >= b) {
                    let prev: Vec<usize> = d.iter().zip(beta).map(|(x, b)| x - b).collect();
                    f[idx(d)] += f[idx(&prev)];
                }
            }
        }
    }
    f[idx(nu)]
}

/// Semistandard tableaux of `shape` with content `content`, by brute force.
pub fn kostka_brute(shape: &[u32], content: &[u32]) -> i64 {
    let cells: Vec<(usize, usize)> =
        shape.iter().enumerate().flat_map(|(r, &len)| (0..len as usize).map(move |c| (r, c))).collect();
    if cells.len() != content.iter().sum::<u32>() as usize {
        return 0;
    }
    let mut grid = vec![vec![0u32; shape.first().copied().unwrap_or(0) as usize]; shape.len()];
    let mut left = content.to_vec();
    fn go(k: usize, cells: &[(usize, usize)], grid: &mut Vec<Vec<u32>>, left: &mut Vec<u32>) -> i64 {
        if k == cells.len() {
            return 1;
        }
        let (r, c) = cells[k];
        let mut total = 0;
        for v in 1..=left.len() as u32 {
            if left[v as usize - 1] == 0 {
                continue;
            }
            if c > 0 && grid[r][c - 1] > v {
                continue;
            }
            if r > 0 && grid[r - 1][c] >= v {
                continue;
            }
            grid[r][c] = v;
            left[v as usize - 1] -= 1;
            total += go(k + 1, cells, grid, left);
            left[v as usize - 1] += 1;
        }
        grid[r][c] = 0;
        total
    }
    go(0, &cells, &mut grid, &mut left)
}

/// Rebuild the canonical basis from a randomly re-chosen PBW basis
/// `E' = P E` (`P` lower unitriangular, strictly lower part in
/// `v⁻¹ℤ[v⁻¹]`) and compare elements.
pub fn survives_perturbation<I: Symbol>(cb: &CanonicalBasis<I>, rng: &mut impl Rng) -> bool {
    let n = cb.len();
    let mut p = vec![vec![Laurent::zero(); n]; n];
    for a in 0..n {
        p[a][a] = Laurent::one();
        for b in 0..a {
            let c: i64 = rng.gen_range(-2..=2);
            let e: i64 = rng.gen_range(1..=3);
            p[a][b] = Laurent::from_int(c).shift(-e);
        }
    }
    let pinv = unitriangular_inverse(&p);
    let mut pbw = cb.pbw.clone();
    pbw.e = (0..n)
        .map(|a| (0..=a).fold(AlgebraElement::zero(), |acc, b| acc.add(&cb.pbw.e[b].scale(&p[a][b]))))
        .collect();
    pbw.t = (0..n)
        .map(|a| {
            (0..n)
                .map(|c| (0..n).fold(Laurent::zero(), |acc, b| &acc + &(&cb.pbw.t[a][b] * &pinv[b][c])))
                .collect()
        })
        .collect();
    match CanonicalBasis::from_pbw(pbw) {
        Ok(other) => other.elements() == cb.elements(),
        Err(_) => false,
    }
}
