//! Laurent polynomials in `v`, rational functions in `v`, and their
//! expansion at `v = ∞`.
//!
//! `LaurentPoly<T>` is generic over the coefficient ring; the crate works
//! almost entirely with [`Laurent`] (integer coefficients). Field-level
//! bilinear form values use [`QLaurent`].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Coefficient ring for [`LaurentPoly`].
pub trait Coeff:
    Clone + PartialEq + Zero + One + Neg<Output = Self> + Sub<Output = Self> + fmt::Debug + Send + Sync
{
}

impl<T> Coeff for T where
    T: Clone + PartialEq + Zero + One + Neg<Output = T> + Sub<Output = T> + fmt::Debug + Send + Sync
{
}

/// Finite sum `Σ c_e v^e` with no zero coefficients stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly<T: Coeff> {
    terms: BTreeMap<i64, T>,
}

pub type Laurent = LaurentPoly<BigInt>;
pub type QLaurent = LaurentPoly<BigRational>;

impl<T: Coeff> Default for LaurentPoly<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Coeff> fmt::Debug for LaurentPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

impl<T: Coeff> LaurentPoly<T> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(e: i64, c: T) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }

    /// `v^e`.
    pub fn v_pow(e: i64) -> Self {
        Self::monomial(e, T::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, T)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn add_term(&mut self, e: i64, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(old) => {
                let s = old.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn coeff(&self, e: i64) -> T {
        self.terms.get(&e).cloned().unwrap_or_else(T::zero)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &T)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn leading(&self) -> Option<(i64, &T)> {
        self.terms.iter().next_back().map(|(e, c)| (*e, c))
    }

    /// `v ↦ v^{-1}`.
    pub fn bar(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Multiply by `v^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, c)| (*e, c.clone() * s.clone())))
    }

    pub fn map_coeffs<U: Coeff>(&self, f: impl Fn(&T) -> U) -> LaurentPoly<U> {
        LaurentPoly::from_terms(self.terms.iter().map(|(e, c)| (*e, f(c))))
    }

    /// True iff every exponent is negative (the zero polynomial included).
    pub fn in_vinv(&self) -> bool {
        self.max_exp().is_none_or(|e| e < 0)
    }

    /// Terms with negative exponent.
    pub fn negative_part(&self) -> Self {
        Self { terms: self.terms.range(..0).map(|(e, c)| (*e, c.clone())).collect() }
    }

    /// Terms with positive exponent.
    pub fn positive_part(&self) -> Self {
        Self { terms: self.terms.range(1..).map(|(e, c)| (*e, c.clone())).collect() }
    }

    /// `φ_0 + Σ_{i>0} φ_i (v^i + v^{-i})` built from the non-negative part of `φ`.
    pub fn plus_truncation(&self) -> Self {
        let mut out = Self::constant(self.coeff(0));
        for (e, c) in self.terms.range(1..) {
            out.add_term(*e, c.clone());
            out.add_term(-*e, c.clone());
        }
        out
    }

    pub fn is_bar_invariant(&self) -> bool {
        *self == self.bar()
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }
}

impl<T: Coeff> Zero for LaurentPoly<T> {
    fn zero() -> Self {
        LaurentPoly::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<T: Coeff> One for LaurentPoly<T> {
    fn one() -> Self {
        LaurentPoly::one()
    }
}

impl<T: Coeff> AddAssign<&LaurentPoly<T>> for LaurentPoly<T> {
    fn add_assign(&mut self, rhs: &LaurentPoly<T>) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl<T: Coeff> SubAssign<&LaurentPoly<T>> for LaurentPoly<T> {
    fn sub_assign(&mut self, rhs: &LaurentPoly<T>) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, -c.clone());
        }
    }
}

impl<T: Coeff> Add<&LaurentPoly<T>> for &LaurentPoly<T> {
    type Output = LaurentPoly<T>;
    fn add(self, rhs: &LaurentPoly<T>) -> LaurentPoly<T> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<T: Coeff> Sub<&LaurentPoly<T>> for &LaurentPoly<T> {
    type Output = LaurentPoly<T>;
    fn sub(self, rhs: &LaurentPoly<T>) -> LaurentPoly<T> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<T: Coeff> Mul<&LaurentPoly<T>> for &LaurentPoly<T> {
    type Output = LaurentPoly<T>;
    fn mul(self, rhs: &LaurentPoly<T>) -> LaurentPoly<T> {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<T: Coeff> Neg for &LaurentPoly<T> {
    type Output = LaurentPoly<T>;
    fn neg(self) -> LaurentPoly<T> {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<T: Coeff> $tr<LaurentPoly<T>> for LaurentPoly<T> {
            type Output = LaurentPoly<T>;
            fn $m(self, rhs: LaurentPoly<T>) -> LaurentPoly<T> {
                (&self).$m(&rhs)
            }
        }
        impl<T: Coeff> $tr<&LaurentPoly<T>> for LaurentPoly<T> {
            type Output = LaurentPoly<T>;
            fn $m(self, rhs: &LaurentPoly<T>) -> LaurentPoly<T> {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<T: Coeff> Neg for LaurentPoly<T> {
    type Output = LaurentPoly<T>;
    fn neg(self) -> LaurentPoly<T> {
        -&self
    }
}

impl Laurent {
    pub fn from_int(c: i64) -> Self {
        Self::constant(BigInt::from(c))
    }

    /// Value at a nonzero rational point.
    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let xe = if *e >= 0 {
                num_traits::pow(x.clone(), *e as usize)
            } else {
                num_traits::pow(x.recip(), (-*e) as usize)
            };
            acc += xe * BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Value at `v = √q`, returned as `(a, b)` with value `a + b√q`.
    pub fn eval_sqrt(&self, q: u64) -> (BigRational, BigRational) {
        let qr = BigRational::from_integer(BigInt::from(q));
        let mut a = BigRational::zero();
        let mut b = BigRational::zero();
        for (e, c) in &self.terms {
            let half = e.div_floor(&2);
            let base = if half >= 0 {
                num_traits::pow(qr.clone(), half as usize)
            } else {
                num_traits::pow(qr.recip(), (-half) as usize)
            };
            let term = base * BigRational::from_integer(c.clone());
            if e.is_even() {
                a += term;
            } else {
                b += term;
            }
        }
        (a, b)
    }

    /// Polynomial in `q = v²`; fails if an odd exponent is present.
    pub fn to_q_poly(&self) -> Option<Vec<(i64, BigInt)>> {
        self.terms
            .iter()
            .map(|(e, c)| if e % 2 == 0 { Some((e / 2, c.clone())) } else { None })
            .collect()
    }

    pub fn to_rational(&self) -> QLaurent {
        self.map_coeffs(|c| BigRational::from_integer(c.clone()))
    }

    fn content(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Exact quotient `self / d` in `ℤ[v, v⁻¹]`, if it exists.
    pub fn div_exact(&self, d: &Laurent) -> Option<Laurent> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Laurent::zero());
        }
        let (db, lb) = d.leading().map(|(e, c)| (e, c.clone()))?;
        let floor = self.min_exp()? - d.min_exp()?;
        let mut rem = self.clone();
        let mut quo = Laurent::zero();
        while let Some((da, la)) = rem.leading().map(|(e, c)| (e, c.clone())) {
            let e = da - db;
            if e < floor {
                return None;
            }
            let (c, r) = la.div_rem(&lb);
            if !r.is_zero() {
                return None;
            }
            let t = Laurent::monomial(e, c);
            rem -= &(&t * d);
            quo += &t;
        }
        Some(quo)
    }

    /// Greatest common divisor, normalized to lowest exponent 0 and
    /// positive leading coefficient.
    pub fn gcd(&self, other: &Laurent) -> Laurent {
        fn normalize(p: &Laurent) -> Laurent {
            let Some(m) = p.min_exp() else { return Laurent::zero() };
            let mut p = p.shift(-m);
            if p.leading().is_some_and(|(_, c)| c.is_negative()) {
                p = -p;
            }
            p
        }
        fn primitive(p: &Laurent) -> Laurent {
            let c = p.content();
            if c.is_zero() || c.is_one() {
                return p.clone();
            }
            p.map_coeffs(|x| x / &c)
        }
        let mut a = normalize(self);
        let mut b = normalize(other);
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        let content = a.content().gcd(&b.content());
        a = primitive(&a);
        b = primitive(&b);
        if a.max_exp() < b.max_exp() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            // pseudo-remainder of a by b
            let (db, lb) = b.leading().map(|(e, c)| (e, c.clone())).unwrap();
            let mut r = a.clone();
            while let Some((dr, lr)) = r.leading().map(|(e, c)| (e, c.clone())) {
                if dr < db {
                    break;
                }
                r = &r.scale(&lb) - &b.shift(dr - db).scale(&lr);
                r = primitive(&r);
            }
            a = b;
            b = normalize(&primitive(&r));
        }
        normalize(&a).scale(&content)
    }
}

impl<T: Coeff + fmt::Display + Signed> fmt::Display for LaurentPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let var = match *e {
                0 => String::new(),
                1 => "v".to_string(),
                e => format!("v^{e}"),
            };
            if var.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{var}")?;
            } else {
                write!(f, "{a}*{var}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Laurent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("laurent polynomial: {s:?}"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad());
        }
        // split into signed terms, keeping a '-' that follows '^'
        let mut pieces = Vec::new();
        let mut cur = String::new();
        let mut prev = None;
        for ch in compact.chars() {
            if (ch == '+' || ch == '-') && !cur.is_empty() && prev != Some('^') {
                pieces.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
            prev = Some(ch);
        }
        pieces.push(cur);
        let mut p = Laurent::zero();
        for piece in pieces {
            let (sign, body) = match piece.strip_prefix('-') {
                Some(b) => (-1, b),
                None => (1, piece.strip_prefix('+').unwrap_or(&piece)),
            };
            let (coef, var) = match body.find('v') {
                None => (body, None),
                Some(i) => {
                    let c = body[..i].trim_end_matches('*');
                    (c, Some(&body[i + 1..]))
                }
            };
            let c: BigInt = if coef.is_empty() {
                BigInt::one()
            } else {
                coef.parse().map_err(|_| bad())?
            };
            let e: i64 = match var {
                None => 0,
                Some("") => 1,
                Some(rest) => {
                    let rest = rest.strip_prefix('^').ok_or_else(bad)?;
                    let rest = rest.trim_start_matches('{').trim_end_matches('}');
                    rest.parse().map_err(|_| bad())?
                }
            };
            p.add_term(e, c * sign);
        }
        Ok(p)
    }
}

impl Serialize for Laurent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<(i64, String)> = self.terms.iter().map(|(e, c)| (*e, c.to_string())).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Laurent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<(i64, String)> = Vec::deserialize(d)?;
        let mut p = Laurent::zero();
        for (e, c) in v {
            let c: BigInt = c.parse().map_err(D::Error::custom)?;
            p.add_term(e, c);
        }
        Ok(p)
    }
}

/// Quantum integer `[n] = (v^n − v^{-n})/(v − v^{-1})`.
pub fn qint(n: i64) -> Laurent {
    if n < 0 {
        return -qint(-n);
    }
    Laurent::from_terms((0..n).map(|k| (n - 1 - 2 * k, BigInt::one())))
}

/// `[n]! = [1][2]…[n]`, with `[0]! = 1`.
pub fn qfact(n: i64) -> Result<Laurent> {
    if n < 0 {
        return Err(Error::InvalidArgument(format!("qfact of negative {n}")));
    }
    Ok((1..=n).fold(Laurent::one(), |acc, k| &acc * &qint(k)))
}

/// Gaussian binomial `[m; n] = [m]! / ([n]! [m-n]!)`.
pub fn qbinom(m: i64, n: i64) -> Result<Laurent> {
    if m < 0 || n < 0 || n > m {
        return Err(Error::InvalidArgument(format!("qbinom({m}, {n})")));
    }
    let den = &qfact(n)? * &qfact(m - n)?;
    qfact(m)?
        .div_exact(&den)
        .ok_or_else(|| Error::Internal(format!("qbinom({m}, {n}) not exact")))
}

/// Quotient of two Laurent polynomials.
#[derive(Clone, Debug)]
pub struct RationalFn {
    num: Laurent,
    den: Laurent,
}

impl RationalFn {
    pub fn new(num: Laurent, den: Laurent) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        Ok(Self { num, den }.reduced())
    }

    pub fn from_poly(p: Laurent) -> Self {
        Self { num: p, den: Laurent::one() }
    }

    pub fn zero() -> Self {
        Self::from_poly(Laurent::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Laurent::one())
    }

    pub fn num(&self) -> &Laurent {
        &self.num
    }

    pub fn den(&self) -> &Laurent {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn reduced(self) -> Self {
        if self.num.is_zero() {
            return Self::zero();
        }
        let g = self.num.gcd(&self.den);
        let (mut num, mut den) = match (self.num.div_exact(&g), self.den.div_exact(&g)) {
            (Some(n), Some(d)) => (n, d),
            _ => (self.num, self.den),
        };
        // fold the monomial part of the denominator into the numerator
        let m = den.min_exp().unwrap_or(0);
        num = num.shift(-m);
        den = den.shift(-m);
        if den.leading().is_some_and(|(_, c)| c.is_negative()) {
            num = -num;
            den = -den;
        }
        Self { num, den }
    }

    pub fn bar(&self) -> Self {
        Self { num: self.num.bar(), den: self.den.bar() }.reduced()
    }

    /// The value as a Laurent polynomial, when it is one.
    pub fn as_laurent(&self) -> Option<Laurent> {
        self.num.div_exact(&self.den)
    }

    pub fn inv(&self) -> Result<Self> {
        RationalFn::new(self.den.clone(), self.num.clone())
    }

    /// Expansion in powers of `v^{-1}` up to `v^{-order}`.
    pub fn series_at_infinity(&self, order: usize) -> Result<SeriesTail> {
        let (db, lb) = self.den.leading().map(|(e, c)| (e, c.clone())).expect("nonzero denominator");
        let lb = BigRational::from_integer(lb);
        let den = self.den.to_rational();
        let mut rem = self.num.to_rational();
        let mut coeffs = vec![BigRational::zero(); order + 1];
        let floor = -(order as i64);
        while let Some((dr, lr)) = rem.leading().map(|(e, c)| (e, c.clone())) {
            let e = dr - db;
            if e < floor {
                break;
            }
            let c = lr / &lb;
            if e > 0 {
                return Err(Error::PositiveDegree(e));
            }
            coeffs[(-e) as usize] = c.clone();
            rem -= &(&QLaurent::monomial(e, c) * &den);
        }
        Ok(SeriesTail { coeffs })
    }

    /// Value lies in `v^{-1}ℤ[v^{-1}]`.
    pub fn in_vinv_z(&self) -> bool {
        self.as_laurent().is_some_and(|p| p.in_vinv())
    }

    /// Value lies in `δ + v^{-1}ℚ[[v^{-1}]]`.
    pub fn in_delta_plus_tail(&self, delta: i64, order: usize) -> bool {
        match self.series_at_infinity(order) {
            Ok(s) => s.coeffs[0] == BigRational::from_integer(delta.into()),
            Err(_) => false,
        }
    }

    pub fn eval(&self, x: &BigRational) -> Option<BigRational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    /// Value at `v² = q` for a function of `v²` only.
    pub fn eval_q(&self, q: u64) -> Option<BigRational> {
        let (na, nb) = self.num.eval_sqrt(q);
        let (da, db) = self.den.eval_sqrt(q);
        if !nb.is_zero() || !db.is_zero() || da.is_zero() {
            return None;
        }
        Some(na / da)
    }
}

impl PartialEq for RationalFn {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for RationalFn {}

impl From<Laurent> for RationalFn {
    fn from(p: Laurent) -> Self {
        Self::from_poly(p)
    }
}

impl Add<&RationalFn> for &RationalFn {
    type Output = RationalFn;
    fn add(self, rhs: &RationalFn) -> RationalFn {
        if self.den == rhs.den {
            return RationalFn { num: &self.num + &rhs.num, den: self.den.clone() }.reduced();
        }
        RationalFn {
            num: &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            den: &self.den * &rhs.den,
        }
        .reduced()
    }
}

impl Sub<&RationalFn> for &RationalFn {
    type Output = RationalFn;
    fn sub(self, rhs: &RationalFn) -> RationalFn {
        self + &(-rhs)
    }
}

impl Mul<&RationalFn> for &RationalFn {
    type Output = RationalFn;
    fn mul(self, rhs: &RationalFn) -> RationalFn {
        RationalFn { num: &self.num * &rhs.num, den: &self.den * &rhs.den }.reduced()
    }
}

impl Neg for &RationalFn {
    type Output = RationalFn;
    fn neg(self) -> RationalFn {
        RationalFn { num: -&self.num, den: self.den.clone() }
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl Serialize for RationalFn {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (&self.num, &self.den).serialize(s)
    }
}

/// Coefficients of `v^0, v^{-1}, …, v^{-K}` of an expansion at `v = ∞`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeriesTail {
    pub coeffs: Vec<BigRational>,
}

impl SeriesTail {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `v^{-k}`.
    pub fn at(&self, k: usize) -> &BigRational {
        &self.coeffs[k]
    }
}
