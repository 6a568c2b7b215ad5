//! The coefficient ring Z[q^{±1/2}].
//!
//! Elements are Laurent polynomials in a single formal variable `v = q^{1/2}`
//! with arbitrary-precision integer coefficients, stored sparsely and kept in
//! canonical form (no zero coefficients).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QLaurent {
    terms: BTreeMap<i64, BigInt>,
}

impl QLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// `coeff · v^exp`.
    pub fn monomial(coeff: impl Into<BigInt>, exp: i64) -> Self {
        let coeff = coeff.into();
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        Self { terms }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0)
    }

    /// `v^exp = q^{exp/2}`.
    pub fn v_pow(exp: i64) -> Self {
        Self::monomial(1, exp)
    }

    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut out = Self::zero();
        for (e, c) in terms {
            out.add_term(e, c.into());
        }
        out
    }

    fn add_term(&mut self, exp: i64, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self ± v^shift · a · b` in place. This is the inner loop of torus
    /// products, so it avoids temporaries and uses machine arithmetic when
    /// both factors are small.
    pub(crate) fn add_product(&mut self, a: &QLaurent, b: &QLaurent, shift: i64, negate: bool) {
        let small = |c: &BigInt| c.to_i64().map(i128::from);
        let bs: Vec<(i64, &BigInt, Option<i128>)> = b.terms.iter().map(|(e, c)| (*e, c, small(c))).collect();
        for (ea, ca) in &a.terms {
            let sa = small(ca);
            for (eb, cb, sb) in &bs {
                let slot = self.terms.entry(ea + eb + shift).or_default();
                match (sa, sb) {
                    (Some(x), Some(y)) => {
                        // |x·y| < 2^126: no overflow
                        let p = x * y;
                        *slot += if negate { -p } else { p };
                    }
                    _ => {
                        let p = ca * *cb;
                        if negate {
                            *slot -= p;
                        } else {
                            *slot += p;
                        }
                    }
                }
            }
        }
        self.terms.retain(|_, c| !c.is_zero());
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// `Some((c, e))` when the element is the single term `c·v^e`.
    pub fn as_monomial(&self) -> Option<(&BigInt, i64)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(e, c)| (c, *e))
        } else {
            None
        }
    }

    /// Multiplies by the unit `v^shift`.
    pub fn shift(&self, shift: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + shift, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    /// The bar involution `v ↦ v^{-1}`.
    pub fn bar(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Specialization `q = 1` (equivalently `v = 1`).
    pub fn eval_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact quotient `h` with `h · divisor = self`.
    ///
    /// Cancels the highest-exponent term of the remainder at each step; the
    /// integer quotient of leading coefficients must be exact.
    pub fn exact_div(&self, divisor: &QLaurent) -> Result<QLaurent> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        if let Some((c, e)) = divisor.as_monomial() {
            let mut terms = BTreeMap::new();
            for (x, a) in &self.terms {
                let (q, r) = a.div_rem(c);
                if !r.is_zero() {
                    return Err(Error::NotDivisible);
                }
                terms.insert(x - e, q);
            }
            return Ok(Self { terms });
        }

        let (g_lo, g_hi) = (divisor.min_exp().unwrap(), divisor.max_exp().unwrap());
        let g_lead = &divisor.terms[&g_hi];
        // the quotient's support lies in [f_lo - g_lo, f_hi - g_hi]
        let floor = self.min_exp().unwrap() - g_lo;
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some(r_hi) = rem.max_exp() {
            let e = r_hi - g_hi;
            if e < floor {
                return Err(Error::NotDivisible);
            }
            let (q, r) = rem.terms[&r_hi].div_rem(g_lead);
            if !r.is_zero() {
                return Err(Error::NotDivisible);
            }
            for (ge, gc) in &divisor.terms {
                rem.add_term(ge + e, -(gc * &q));
            }
            quot.terms.insert(e, q);
        }
        Ok(quot)
    }

    fn fmt_power(f: &mut fmt::Formatter<'_>, e: i64) -> fmt::Result {
        if e % 2 == 0 {
            write!(f, "q^{{{}}}", e / 2)
        } else {
            write!(f, "q^{{{}/2}}", e)
        }
    }
}

impl From<i64> for QLaurent {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

impl From<BigInt> for QLaurent {
    fn from(c: BigInt) -> Self {
        Self::constant(c)
    }
}

impl Add for &QLaurent {
    type Output = QLaurent;
    fn add(self, rhs: &QLaurent) -> QLaurent {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &QLaurent {
    type Output = QLaurent;
    fn sub(self, rhs: &QLaurent) -> QLaurent {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl Neg for &QLaurent {
    type Output = QLaurent;
    fn neg(self) -> QLaurent {
        QLaurent {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Mul for &QLaurent {
    type Output = QLaurent;
    fn mul(self, rhs: &QLaurent) -> QLaurent {
        let mut out = QLaurent::zero();
        out.add_product(self, rhs, 0, false);
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for QLaurent {
            type Output = QLaurent;
            fn $m(self, rhs: QLaurent) -> QLaurent {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for QLaurent {
    type Output = QLaurent;
    fn neg(self) -> QLaurent {
        -&self
    }
}

/// Renders with explicit `q^{p/2}` powers, highest power first.
impl fmt::Display for QLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if *e == 0 {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                Self::fmt_power(f, *e)?;
            }
        }
        Ok(())
    }
}

impl Serialize for QLaurent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.terms.len()))?;
        for (e, c) in &self.terms {
            map.serialize_entry(&e.to_string(), &c.to_string())?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for QLaurent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct QVisitor;
        impl<'de> Visitor<'de> for QVisitor {
            type Value = QLaurent;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map from exponent strings to decimal coefficient strings")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> std::result::Result<QLaurent, A::Error> {
                let mut out = QLaurent::zero();
                while let Some((k, v)) = access.next_entry::<String, String>()? {
                    let e: i64 = k.parse().map_err(de::Error::custom)?;
                    let c: BigInt = v.parse().map_err(de::Error::custom)?;
                    out.add_term(e, c);
                }
                Ok(out)
            }
        }
        deserializer.deserialize_map(QVisitor)
    }
}
