//! Dense matrices over a prime field.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The prime field `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fq {
    p: u32,
}

pub(crate) fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

impl Fq {
    /// Prime fields only; prime powers are rejected.
    pub fn new(q: u32) -> Result<Self> {
        if !is_prime(q as u64) {
            return Err(Error::Unsupported(format!("field of order {q}: only prime fields are implemented")));
        }
        if q > 65521 {
            return Err(Error::InvalidArgument(format!("prime {q} too large")));
        }
        Ok(Self { p: q })
    }

    pub fn p(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(self, mut a: u32, mut e: u64) -> u32 {
        let mut r = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn inv(self, a: u32) -> u32 {
        debug_assert!(a != 0);
        self.pow(a, self.p as u64 - 2)
    }

    pub fn elements(self) -> impl Iterator<Item = u32> {
        0..self.p
    }
}

/// Row-major matrix with entries in `0..p`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u32>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u32>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        Self { rows: r, cols: c, data: rows.iter().flatten().copied().collect() }
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat, f: Fq) -> Mat {
        assert_eq!(self.cols, other.rows, "matrix shape");
        let mut out = Mat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let v = f.add(out.get(r, c), f.mul(a, other.get(k, c)));
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[u32], f: Fq) -> Vec<u32> {
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b))))
            .collect()
    }

    pub fn add(&self, other: &Mat, f: Fq) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect(),
        }
    }

    pub fn scale(&self, s: u32, f: Fq) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| f.mul(a, s)).collect() }
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self, f: Fq) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let pivots = rref_in_place(&mut m.data, m.rows, m.cols, f);
        (m, pivots)
    }

    pub fn rank(&self, f: Fq) -> usize {
        let mut d = self.data.clone();
        rref_in_place(&mut d, self.rows, self.cols, f).len()
    }

    /// Basis of `{x : self · x = 0}`.
    pub fn nullspace(&self, f: Fq) -> Vec<Vec<u32>> {
        let (m, pivots) = self.rref(f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![0u32; self.cols];
                v[fc] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(m.get(r, fc));
                }
                v
            })
            .collect()
    }

    pub fn is_invertible(&self, f: Fq) -> bool {
        self.rows == self.cols && self.rank(f) == self.rows
    }

    /// Block-diagonal sum.
    pub fn block_diag(&self, other: &Mat) -> Mat {
        let mut m = Mat::zeros(self.rows + other.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c));
            }
        }
        for r in 0..other.rows {
            for c in 0..other.cols {
                m.set(self.rows + r, self.cols + c, other.get(r, c));
            }
        }
        m
    }
}

/// Gauss–Jordan elimination on a row-major buffer; returns pivot columns.
pub(crate) fn rref_in_place(d: &mut [u32], rows: usize, cols: usize, f: Fq) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(p) = (row..rows).find(|&r| d[r * cols + col] != 0) else { continue };
        if p != row {
            for c in 0..cols {
                d.swap(p * cols + c, row * cols + c);
            }
        }
        let inv = f.inv(d[row * cols + col]);
        for c in col..cols {
            d[row * cols + c] = f.mul(d[row * cols + c], inv);
        }
        for r in 0..rows {
            if r == row {
                continue;
            }
            let factor = d[r * cols + col];
            if factor == 0 {
                continue;
            }
            for c in col..cols {
                let v = f.sub(d[r * cols + c], f.mul(factor, d[row * cols + c]));
                d[r * cols + c] = v;
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// All `k`-dimensional subspaces of `F_p^n`, as RREF basis matrices with
/// their pivot columns.
pub fn grassmannian(n: usize, k: usize, f: Fq) -> Vec<(Mat, Vec<usize>)> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut pivots: Vec<usize> = (0..k).collect();
    loop {
        // free positions: (row r, column c) with c > pivot r and c not a pivot
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|r| {
                let pv = pivots.clone();
                ((pv[r] + 1)..n).filter(move |c| !pv.contains(c)).map(move |c| (r, c))
            })
            .collect();
        let mut vals = vec![0u32; free.len()];
        loop {
            let mut m = Mat::zeros(k, n);
            for (r, &pc) in pivots.iter().enumerate() {
                m.set(r, pc, 1);
            }
            for (i, &(r, c)) in free.iter().enumerate() {
                m.set(r, c, vals[i]);
            }
            out.push((m, pivots.clone()));
            let mut i = 0;
            loop {
                if i == vals.len() {
                    break;
                }
                vals[i] += 1;
                if vals[i] < f.p() {
                    break;
                }
                vals[i] = 0;
                i += 1;
            }
            if i == vals.len() {
                break;
            }
        }
        // next k-combination of pivot columns
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if pivots[i] < n - k + i {
                pivots[i] += 1;
                for j in i + 1..k {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
            if i == 0 {
                return out;
            }
        }
    }
}

/// Number of `k`-subspaces of `F_q^n`.
pub fn gaussian_count(n: usize, k: usize, q: u64) -> u128 {
    if k > n {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= (q as u128).pow((n - i) as u32) - 1;
        den *= (q as u128).pow((i + 1) as u32) - 1;
    }
    num / den
}
