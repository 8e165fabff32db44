//! Twisted Hall algebras: elements over named bases, products at a fixed
//! prime field, the generic algebra with Hall-polynomial structure
//! constants, Green's form and the coproduct, and the `N` basis for the
//! Kronecker quiver.

pub mod field;
pub mod generic;
pub mod kronecker;

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::laurent::{Laurent, QLaurent};

pub use field::{flag_count, FieldAlgebra, TensorElement};
pub use generic::GenericAlgebra;
pub use kronecker::{KIndex, KroneckerAlgebra};

/// What a basis symbol may be.
pub trait Symbol: Clone + Ord + fmt::Debug + fmt::Display + Serialize + Send + Sync {}
impl<T> Symbol for T where T: Clone + Ord + fmt::Debug + fmt::Display + Serialize + Send + Sync {}

/// Finite formal sum `Σ c_s · s` with coefficients in `ℤ[v, v⁻¹]`.
#[derive(Clone, PartialEq, Eq)]
pub struct AlgebraElement<S: Ord> {
    terms: BTreeMap<S, Laurent>,
}

impl<S: Ord> Default for AlgebraElement<S> {
    fn default() -> Self {
        Self { terms: BTreeMap::new() }
    }
}

impl<S: Symbol> fmt::Debug for AlgebraElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<S: Symbol> AlgebraElement<S> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(s: S) -> Self {
        Self::monomial(s, Laurent::one())
    }

    pub fn monomial(s: S, c: Laurent) -> Self {
        let mut x = Self::zero();
        x.add_term(s, &c);
        x
    }

    pub fn from_terms(it: impl IntoIterator<Item = (S, Laurent)>) -> Self {
        let mut x = Self::zero();
        for (s, c) in it {
            x.add_term(s, &c);
        }
        x
    }

    pub fn add_term(&mut self, s: S, c: &Laurent) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(s) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn coeff(&self, s: &S) -> Laurent {
        self.terms.get(s).cloned().unwrap_or_else(Laurent::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&S, &Laurent)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &S> {
        self.terms.keys()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut x = self.clone();
        for (s, c) in &other.terms {
            x.add_term(s.clone(), c);
        }
        x
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut x = self.clone();
        for (s, c) in &other.terms {
            x.add_term(s.clone(), &-c);
        }
        x
    }

    pub fn scale(&self, c: &Laurent) -> Self {
        Self::from_terms(self.terms.iter().map(|(s, x)| (s.clone(), x * c)))
    }

    /// Coefficient-wise `v ↦ v⁻¹` (not the algebra involution).
    pub fn bar_coefficients(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(s, x)| (s.clone(), x.bar())))
    }

    pub fn map_symbols<T: Symbol>(&self, f: impl Fn(&S) -> T) -> AlgebraElement<T> {
        AlgebraElement::from_terms(self.terms.iter().map(|(s, c)| (f(s), c.clone())))
    }

    /// `{quiver, basis, terms: [{symbol, index, coeff}]}`.
    pub fn to_json(&self, quiver: &str, basis: &str) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(s, c)| {
                json!({
                    "symbol": s.to_string(),
                    "index": serde_json::to_value(s).unwrap_or(Value::Null),
                    "coeff": c.to_string(),
                })
            })
            .collect();
        json!({ "quiver": quiver, "basis": basis, "terms": terms })
    }

    pub fn to_latex(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(s, c)| {
                let sym = format!("\\langle {} \\rangle", latex_escape(&s.to_string()));
                if c.is_one() {
                    sym
                } else {
                    format!("\\left({}\\right) {sym}", latex_laurent(c))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl<S: Symbol> fmt::Display for AlgebraElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(s, c)| if c.is_one() { format!("<{s}>") } else { format!("({c})<{s}>") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn latex_escape(s: &str) -> String {
    s.replace('_', "\\_").replace('#', "\\#").replace('&', "\\&")
}

/// `3v^{-2} + 1 + v^{5}`.
pub fn latex_laurent(p: &Laurent) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (e, c)) in p.terms().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        let mono = match e {
            0 => String::new(),
            1 => "v".into(),
            _ => format!("v^{{{e}}}"),
        };
        let body = if mono.is_empty() {
            a.to_string()
        } else if a.is_one() {
            mono
        } else {
            format!("{a}{mono}")
        };
        if k == 0 {
            out.push_str(if neg { "-" } else { "" });
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    out
}

/// Value of a function of `v²` at `v² = q`; `None` if an odd power occurs.
pub fn qlaurent_at(x: &QLaurent, q: u64) -> Option<BigRational> {
    let qr = BigRational::from_integer(BigInt::from(q));
    let mut acc = BigRational::zero();
    for (e, c) in x.terms() {
        if e % 2 != 0 {
            return None;
        }
        let h = e / 2;
        let base = if h >= 0 { num_traits::pow(qr.clone(), h as usize) } else { num_traits::pow(qr.recip(), (-h) as usize) };
        acc += base * c;
    }
    Some(acc)
}

/// `x(√q) = a + b√q`, returned as `(a, b)`.
pub fn qlaurent_sqrt(x: &QLaurent, q: u64) -> (BigRational, BigRational) {
    let qr = BigRational::from_integer(BigInt::from(q));
    let (mut a, mut b) = (BigRational::zero(), BigRational::zero());
    for (e, c) in x.terms() {
        let h = e.div_euclid(2);
        let base = if h >= 0 { num_traits::pow(qr.clone(), h as usize) } else { num_traits::pow(qr.recip(), (-h) as usize) };
        if e.rem_euclid(2) == 0 {
            a += base * c;
        } else {
            b += base * c;
        }
    }
    (a, b)
}

/// Whether two elements agree once `v = √q`.
pub fn agree_at<S: Symbol>(x: &AlgebraElement<S>, y: &AlgebraElement<S>, q: u64) -> bool {
    x.sub(y).terms().all(|(_, c)| {
        let (a, b) = c.eval_sqrt(q);
        a.is_zero() && b.is_zero()
    })
}

/// `q ↦ v²` in an integer polynomial (ascending coefficients).
pub fn q_to_v(coeffs: &[BigInt]) -> Laurent {
    Laurent::from_terms(coeffs.iter().enumerate().map(|(k, c)| (2 * k as i64, c.clone())))
}
