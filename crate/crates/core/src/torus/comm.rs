use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use super::exponent::{support_box, Exponent};
use super::TermRecord;
use crate::error::{Error, Result};

/// Commutative Laurent polynomial in `m` variables with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CommLaurent {
    nvars: usize,
    terms: BTreeMap<Exponent, BigInt>,
}

impl CommLaurent {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::monomial(nvars, vec![0; nvars], BigInt::one())
    }

    pub fn generator(nvars: usize, i: usize) -> Self {
        Self::monomial(nvars, Exponent::unit(nvars, i), BigInt::one())
    }

    /// `coeff · x^a`. Panics if `a` has the wrong length.
    pub fn monomial(nvars: usize, a: impl Into<Exponent>, coeff: BigInt) -> Self {
        let a = a.into();
        assert_eq!(a.len(), nvars, "exponent length");
        let mut out = Self::zero(nvars);
        out.accumulate(a, coeff);
        out
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponent, BigInt)>) -> Self {
        let mut out = Self::zero(nvars);
        for (a, c) in terms {
            debug_assert_eq!(a.len(), nvars);
            out.accumulate(a, c);
        }
        out
    }

    fn accumulate(&mut self, a: Exponent, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(a) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &BigInt)> + '_ {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Exponent> + '_ {
        self.terms.keys()
    }

    fn check(&self, other: &CommLaurent) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::LengthMismatch { expected: self.nvars, found: other.nvars });
        }
        Ok(())
    }

    pub fn add(&self, other: &CommLaurent) -> Result<CommLaurent> {
        self.check(other)?;
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.accumulate(a.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &CommLaurent) -> Result<CommLaurent> {
        self.check(other)?;
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.accumulate(a.clone(), -c);
        }
        Ok(out)
    }

    pub fn mul(&self, other: &CommLaurent) -> Result<CommLaurent> {
        self.check(other)?;
        let mut out = Self::zero(self.nvars);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.accumulate(a.add(b), x * y);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> CommLaurent {
        let mut acc = Self::one(self.nvars);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base).expect("same arity");
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base).expect("same arity");
            }
        }
        acc
    }

    /// Returns `h` with `h · divisor = self`, or `NotDivisible`.
    pub fn exact_div(&self, divisor: &CommLaurent) -> Result<CommLaurent> {
        self.check(divisor)?;
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero(self.nvars));
        }
        let m = self.nvars;
        let (f_lo, f_hi) = support_box(m, self.terms.keys());
        let (g_lo, g_hi) = support_box(m, divisor.terms.keys());
        let (g_lead, g_c) = divisor.terms.iter().next_back().unwrap();

        let mut rem = self.clone();
        let mut quot = Self::zero(m);
        while let Some((r_lead, r_c)) = rem.terms.iter().next_back() {
            let a = r_lead.sub(g_lead);
            let in_box = a.as_slice().iter().enumerate().all(|(i, &x)| {
                f_lo[i] - g_lo[i] <= x && x <= f_hi[i] - g_hi[i]
            });
            if !in_box {
                return Err(Error::NotDivisible);
            }
            let (c, r) = r_c.div_rem(g_c);
            if !r.is_zero() {
                return Err(Error::NotDivisible);
            }
            for (b, cb) in &divisor.terms {
                rem.accumulate(a.add(b), -(&c * cb));
            }
            quot.terms.insert(a, c);
        }
        Ok(quot)
    }

    /// Componentwise minimum exponent over the support (zero vector for 0).
    pub fn min_exponent(&self) -> Vec<i64> {
        if self.is_zero() {
            return vec![0; self.nvars];
        }
        support_box(self.nvars, self.terms.keys()).0
    }

    pub fn from_json(nvars: usize, value: &serde_json::Value) -> Result<CommLaurent> {
        let records: Vec<TermRecord<String>> = serde_json::from_value(value.clone())
            .map_err(|e| Error::Shape(format!("Laurent polynomial: {e}")))?;
        let mut out = Self::zero(nvars);
        for r in records {
            if r.exp.len() != nvars {
                return Err(Error::LengthMismatch { expected: nvars, found: r.exp.len() });
            }
            let c: BigInt = r
                .coeff
                .parse()
                .map_err(|_| Error::Shape(format!("bad coefficient {:?}", r.coeff)))?;
            out.accumulate(Exponent::new(r.exp), c);
        }
        Ok(out)
    }
}

impl Serialize for CommLaurent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Rec<'a> {
            exp: &'a Exponent,
            coeff: String,
        }
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (exp, c) in &self.terms {
            seq.serialize_element(&Rec { exp, coeff: c.to_string() })?;
        }
        seq.end()
    }
}

impl fmt::Display for CommLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (a, c)) in self.terms.iter().rev().enumerate() {
            let abs = c.abs();
            match (i, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors: Vec<String> = a
                .as_slice()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e != 0)
                .map(|(j, &e)| if e == 1 { format!("x{}", j + 1) } else { format!("x{}^{}", j + 1, e) })
                .collect();
            if !abs.is_one() || factors.is_empty() {
                factors.insert(0, abs.to_string());
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}
