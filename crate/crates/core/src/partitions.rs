//! Integer partitions, Kostka numbers and symmetric-group characters.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Weakly decreasing list of positive parts.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition(Vec<u32>);

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Vec<u32> {
        p.0
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(format!("not a partition: {parts:?}")));
        }
        Ok(Self(parts))
    }

    /// Sorts and drops zeros.
    pub fn from_unsorted(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self(parts)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// Dominance order `self ⊵ other`.
    pub fn dominates(&self, other: &Partition) -> bool {
        let n = self.len().max(other.len());
        let (mut a, mut b) = (0u32, 0u32);
        for i in 0..n {
            a += self.part(i);
            b += other.part(i);
            if a < b {
                return false;
            }
        }
        true
    }

    pub fn conjugate(&self) -> Partition {
        let first = self.part(0);
        Partition((1..=first).map(|k| self.0.iter().filter(|&&p| p >= k).count() as u32).collect())
    }

    /// Multiplicity of each part size.
    pub fn multiplicities(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for &p in &self.0 {
            match out.last_mut() {
                Some((q, m)) if *q == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// Centralizer order `z_μ = Π i^{m_i} m_i!`.
    pub fn z(&self) -> BigInt {
        let mut z = BigInt::one();
        for (p, m) in self.multiplicities() {
            for k in 1..=m {
                z *= BigInt::from(p) * BigInt::from(k);
            }
        }
        z
    }
}

/// All partitions of `m`, descending lexicographic.
pub fn partitions_of(m: u32) -> Vec<Partition> {
    fn rec(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            rec(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, m, &mut Vec::new(), &mut out);
    out
}

fn check_sizes(l: &Partition, m: &Partition) -> Result<()> {
    if l.size() != m.size() {
        return Err(Error::DimMismatch(format!("|{l}| != |{m}|")));
    }
    Ok(())
}

/// Semistandard tableaux of shape `shape` and content `content`.
pub fn kostka(shape: &Partition, content: &Partition) -> Result<i64> {
    check_sizes(shape, content)?;
    Ok(kostka_content(&shape.0, &content.0))
}

/// Kostka number for an arbitrary composition as content.
fn kostka_content(shape: &[u32], content: &[u32]) -> i64 {
    // strip horizontal strips, largest letter first
    fn rec(shape: &[u32], content: &[u32], memo: &mut HashMap<(Vec<u32>, usize), i64>) -> i64 {
        let k = content.len();
        if k == 0 {
            return i64::from(shape.iter().all(|&p| p == 0));
        }
        if let Some(v) = memo.get(&(shape.to_vec(), k)) {
            return *v;
        }
        let r = content[k - 1];
        let mut total = 0;
        let mut inner = shape.to_vec();
        strips(shape, 0, r, &mut inner, &mut |nu| total += rec(nu, &content[..k - 1], memo));
        memo.insert((shape.to_vec(), k), total);
        total
    }
    fn strips(shape: &[u32], row: usize, left: u32, inner: &mut Vec<u32>, f: &mut dyn FnMut(&[u32])) {
        if row == shape.len() {
            if left == 0 {
                f(inner);
            }
            return;
        }
        let below = shape.get(row + 1).copied().unwrap_or(0);
        let room = shape[row] - below;
        for take in 0..=room.min(left) {
            inner[row] = shape[row] - take;
            strips(shape, row + 1, left - take, inner, f);
        }
        inner[row] = shape[row];
    }
    rec(shape, content, &mut HashMap::new())
}

fn char_memo() -> &'static Mutex<HashMap<(Partition, Partition), i64>> {
    static MEMO: OnceLock<Mutex<HashMap<(Partition, Partition), i64>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Irreducible character `χ^λ` at cycle type `μ` (Murnaghan–Nakayama).
pub fn character(lambda: &Partition, mu: &Partition) -> Result<i64> {
    check_sizes(lambda, mu)?;
    Ok(mn(lambda, mu))
}

fn mn(lambda: &Partition, mu: &Partition) -> i64 {
    if mu.is_empty() {
        return 1;
    }
    let key = (lambda.clone(), mu.clone());
    if let Some(v) = char_memo().lock().unwrap().get(&key) {
        return *v;
    }
    let r = mu.0[0];
    let rest = Partition(mu.0[1..].to_vec());
    let l = lambda.len();
    let beta: Vec<u32> = (0..l).map(|i| lambda.0[i] + (l - 1 - i) as u32).collect();
    let mut total = 0;
    for (i, &b) in beta.iter().enumerate() {
        if b < r || beta.contains(&(b - r)) {
            continue;
        }
        let between = beta.iter().filter(|&&x| x > b - r && x < b).count();
        let mut nb = beta.clone();
        nb[i] = b - r;
        nb.sort_unstable_by(|a, b| b.cmp(a));
        let parts: Vec<u32> = (0..l).map(|j| nb[j] - (l - 1 - j) as u32).collect();
        let sign = if between % 2 == 0 { 1 } else { -1 };
        total += sign * mn(&Partition::from_unsorted(parts), &rest);
    }
    char_memo().lock().unwrap().insert(key, total);
    total
}

/// Permutation character `t′_λ(μ) = Σ_ν K_{νλ} χ^ν(μ)`.
pub fn perm_character(lambda: &Partition, mu: &Partition) -> Result<i64> {
    check_sizes(lambda, mu)?;
    let mut total = 0;
    for nu in partitions_of(lambda.size()) {
        let k = kostka_content(&nu.0, &lambda.0);
        if k != 0 {
            total += k * mn(&nu, mu);
        }
    }
    Ok(total)
}

/// Matrix `K[λ][μ] = kostka(λ, μ)`, partitions of `m` in descending lex order.
pub fn kostka_matrix(m: u32) -> Vec<Vec<i64>> {
    let ps = partitions_of(m);
    ps.iter().map(|l| ps.iter().map(|mu| kostka_content(&l.0, &mu.0)).collect()).collect()
}

/// Exact inverse of the (upper unitriangular) Kostka matrix.
pub fn kostka_inverse(m: u32) -> Vec<Vec<i64>> {
    let k = kostka_matrix(m);
    let n = k.len();
    let mut inv = vec![vec![0i64; n]; n];
    for col in 0..n {
        for row in (0..n).rev() {
            let mut s = i64::from(row == col);
            for j in row + 1..n {
                s -= k[row][j] * inv[j][col];
            }
            inv[row][col] = s;
        }
    }
    inv
}

/// Character table `t_λ(μ)`.
#[derive(Clone, Debug, Serialize)]
pub struct CharTable {
    pub m: u32,
    pub partitions: Vec<Partition>,
    pub values: Vec<Vec<i64>>,
}

impl CharTable {
    pub fn new(m: u32) -> Self {
        let partitions = partitions_of(m);
        let values = partitions
            .iter()
            .map(|l| partitions.iter().map(|mu| mn(l, mu)).collect())
            .collect();
        Self { m, partitions, values }
    }
}
