//! Seeds evaluated in a finite field.
//!
//! A [`ModularSeed`] carries the exchange matrix (and `Λ`, for quantum
//! seeds) exactly, but replaces every cluster variable by its values at a
//! few fixed points of `F_p^m`, `p = 2^61 - 1`. Evaluation is a ring
//! homomorphism, so mutating the image agrees with the image of the exact
//! mutation; for quantum seeds the image is that of the `q = 1` shadow.
//!
//! Exact seeds in infinite mutation classes grow without bound in size, so
//! this tier is what makes deep explorations (thousands of seeds) feasible.
//! Dedup by these keys is exact for the matrices and probabilistic for the
//! variables (a false merge needs a nonzero Laurent polynomial to vanish at
//! all evaluation points simultaneously).

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::explorer::ExchangeSeed;
use crate::seeds::{lambda_mutate, ClassicalSeed, ExchangeMatrix, QuantumSeed};
use crate::torus::{CommLaurent, SkewMatrix};

pub const MODULUS: u64 = (1 << 61) - 1;
pub const POINTS: usize = 4;

type Values = [u64; POINTS];

#[inline]
fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MODULUS as u128) as u64
}

#[inline]
fn add_mod(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= MODULUS {
        s - MODULUS
    } else {
        s
    }
}

fn pow_mod(mut base: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base);
        }
        base = mul_mod(base, base);
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64) -> Option<u64> {
    (a != 0).then(|| pow_mod(a, MODULUS - 2))
}

// splitmix64: fixed, reproducible evaluation points
fn evaluation_points(m: usize) -> Vec<Values> {
    let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
    let mut next = || {
        state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    };
    (0..m)
        .map(|_| {
            let mut v = [0; POINTS];
            for x in v.iter_mut() {
                *x = 2 + next() % (MODULUS - 2);
            }
            v
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularSeed {
    b: ExchangeMatrix,
    lambda: Option<SkewMatrix>,
    values: Vec<Values>,
}

impl ModularSeed {
    /// Image of the initial classical seed with matrix `b`.
    pub fn initial(b: ExchangeMatrix) -> Self {
        let values = evaluation_points(b.m());
        Self { b, lambda: None, values }
    }

    /// Image of an exact classical seed whose variables are in the initial
    /// coordinates of a seed with `b.m()` variables.
    pub fn from_classical(s: &ClassicalSeed) -> Result<Self> {
        let points = evaluation_points(s.exchange_matrix().m());
        let values = s
            .vars()
            .iter()
            .map(|v| evaluate(v, &points))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { b: s.exchange_matrix().clone(), lambda: None, values })
    }

    /// Image of the `q = 1` shadow of a quantum seed, carrying its `Λ`.
    pub fn from_quantum(s: &QuantumSeed) -> Result<Self> {
        let mut out = Self::from_classical(&s.shadow())?;
        out.lambda = Some(s.lambda().clone());
        Ok(out)
    }

    pub fn exchange_matrix(&self) -> &ExchangeMatrix {
        &self.b
    }

    pub fn lambda(&self) -> Option<&SkewMatrix> {
        self.lambda.as_ref()
    }

    pub fn values(&self) -> &[Values] {
        &self.values
    }

    pub fn mutate(&self, k: usize) -> Result<ModularSeed> {
        let col = self.b.column(k)?;
        let mut new = [0u64; POINTS];
        for (p, slot) in new.iter_mut().enumerate() {
            let (mut pos, mut neg) = (1u64, 1u64);
            for (i, &e) in col.iter().enumerate() {
                if e > 0 {
                    pos = mul_mod(pos, pow_mod(self.values[i][p], e as u64));
                } else if e < 0 {
                    neg = mul_mod(neg, pow_mod(self.values[i][p], (-e) as u64));
                }
            }
            let inv = inv_mod(self.values[k][p]).ok_or(Error::DegenerateEvaluation { direction: k })?;
            *slot = mul_mod(add_mod(pos, neg), inv);
        }
        let mut values = self.values.clone();
        values[k] = new;
        let lambda = match &self.lambda {
            Some(l) => Some(lambda_mutate(l, &self.b, k)?),
            None => None,
        };
        Ok(ModularSeed { b: self.b.mutate(k)?, lambda, values })
    }
}

/// Evaluates a Laurent polynomial at each of the points (one value per
/// variable per point).
pub fn evaluate(f: &CommLaurent, points: &[Values]) -> Result<Values> {
    let modulus = BigInt::from(MODULUS);
    let mut out = [0u64; POINTS];
    for (p, slot) in out.iter_mut().enumerate() {
        let mut acc = 0u64;
        for (a, c) in f.terms() {
            let mut c = c % &modulus;
            if c < BigInt::from(0) {
                c += &modulus;
            }
            let mut term = c.to_u64().expect("reduced");
            for (i, &e) in a.as_slice().iter().enumerate() {
                let x = points[i][p];
                let base = if e < 0 { inv_mod(x).ok_or(Error::DivisionByZero)? } else { x };
                term = mul_mod(term, pow_mod(base, e.unsigned_abs()));
            }
            acc = add_mod(acc, term);
        }
        *slot = acc;
    }
    Ok(out)
}

impl ExchangeSeed for ModularSeed {
    fn size(&self) -> usize {
        self.b.m()
    }

    fn exchangeable(&self) -> &[usize] {
        self.b.ex()
    }

    fn mutate_at(&self, k: usize) -> Result<Self> {
        self.mutate(k)
    }

    fn variable_label(&self, i: usize) -> String {
        self.values[i].iter().map(|x| format!("{x:016x}")).collect()
    }

    fn column_label(&self, k: usize) -> String {
        format!("{:?}", self.b.column(k).unwrap_or_default())
    }

    fn relabeled(&self, perm: &[usize]) -> Self {
        let mut values = self.values.clone();
        for (i, v) in self.values.iter().enumerate() {
            values[perm[i]] = *v;
        }
        ModularSeed {
            b: self.b.relabeled(perm),
            lambda: self.lambda.as_ref().map(|l| l.permuted(perm)),
            values,
        }
    }

    fn to_json(&self) -> Value {
        let mut v = self.b.to_json();
        if let Some(l) = &self.lambda {
            v["Lambda"] = json!(l.rows());
        }
        v["modulus"] = json!(MODULUS.to_string());
        v["values"] = json!(self
            .values
            .iter()
            .map(|p| p.iter().map(|x| x.to_string()).collect::<Vec<_>>())
            .collect::<Vec<_>>());
        v
    }

    fn variable_summary(&self, i: usize) -> String {
        format!("{:08x}", self.values[i][0] >> 29)
    }
}
