//! Exchange matrices, skew-symmetrizers, compatibility with `Λ`, matrix and
//! `Λ` mutation, principal-coefficient `Λ`, and the seed types themselves.
//!
//! Indices are 0-based. `ex` is stored sorted; column `c` of an
//! [`ExchangeMatrix`] is labeled by the row index `ex[c]`.

use std::collections::VecDeque;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::torus::{CommLaurent, SkewMatrix, TorusElement};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExchangeMatrix {
    m: usize,
    ex: Vec<usize>,
    /// `m` rows of `n` entries.
    rows: Vec<Vec<i64>>,
}

impl ExchangeMatrix {
    /// Validates shape and that the principal part is skew-symmetrizable.
    pub fn new(m: usize, ex: Vec<usize>, rows: Vec<Vec<i64>>) -> Result<Self> {
        let b = Self::with_shape(m, ex, rows)?;
        find_skew_symmetrizer(&b.principal())?;
        Ok(b)
    }

    fn with_shape(m: usize, ex: Vec<usize>, rows: Vec<Vec<i64>>) -> Result<Self> {
        let n = ex.len();
        if n == 0 || n > m {
            return Err(Error::Shape(format!("need 1 <= n <= m, got n={n}, m={m}")));
        }
        if ex.windows(2).any(|w| w[0] >= w[1]) || ex[n - 1] >= m {
            return Err(Error::Shape("ex must be a strictly increasing subset of [1,m]".into()));
        }
        if rows.len() != m || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Shape(format!("B must be {m}x{n}")));
        }
        Ok(Self { m, ex, rows })
    }

    /// Square exchange matrix with every index exchangeable.
    pub fn from_principal(b: Vec<Vec<i64>>) -> Result<Self> {
        let n = b.len();
        Self::new(n, (0..n).collect(), b)
    }

    /// `[B; I]` with `ex = [0, n)`.
    pub fn principal_coefficients(b: Vec<Vec<i64>>) -> Result<Self> {
        let n = b.len();
        let mut rows = b;
        for i in 0..n {
            let mut r = vec![0; n];
            r[i] = 1;
            rows.push(r);
        }
        Self::new(2 * n, (0..n).collect(), rows)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.ex.len()
    }

    pub fn ex(&self) -> &[usize] {
        &self.ex
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn column_position(&self, k: usize) -> Option<usize> {
        self.ex.binary_search(&k).ok()
    }

    pub fn is_exchangeable(&self, k: usize) -> bool {
        self.column_position(k).is_some()
    }

    fn position(&self, k: usize) -> Result<usize> {
        self.column_position(k).ok_or(Error::NotExchangeable { index: k })
    }

    /// `b_ik` for any row `i` and exchangeable `k`.
    pub fn entry(&self, i: usize, k: usize) -> Result<i64> {
        Ok(self.rows[i][self.position(k)?])
    }

    /// Column `k` as a length-`m` vector.
    pub fn column(&self, k: usize) -> Result<Vec<i64>> {
        let c = self.position(k)?;
        Ok(self.rows.iter().map(|r| r[c]).collect())
    }

    /// The `ex × ex` principal part.
    pub fn principal(&self) -> Vec<Vec<i64>> {
        self.ex.iter().map(|&i| self.rows[i].clone()).collect()
    }

    pub fn skew_symmetrizer(&self) -> Result<SkewSymmetrizer> {
        find_skew_symmetrizer(&self.principal())
    }

    /// Matrix mutation in direction `k`.
    pub fn mutate(&self, k: usize) -> Result<ExchangeMatrix> {
        let ck = self.position(k)?;
        let n = self.n();
        let mut rows = vec![vec![0i64; n]; self.m];
        for i in 0..self.m {
            for c in 0..n {
                let j = self.ex[c];
                let b = self.rows[i][c];
                rows[i][c] = if i == k || j == k {
                    b.checked_neg().ok_or(Error::Overflow)?
                } else {
                    let bik = self.rows[i][ck];
                    let bkj = self.rows[k][c];
                    let t = bik
                        .checked_abs()
                        .and_then(|a| a.checked_mul(bkj))
                        .zip(bkj.checked_abs().and_then(|a| a.checked_mul(bik)))
                        .and_then(|(x, y)| x.checked_add(y))
                        .ok_or(Error::Overflow)?;
                    b.checked_add(t / 2).ok_or(Error::Overflow)?
                };
            }
        }
        Ok(ExchangeMatrix { m: self.m, ex: self.ex.clone(), rows })
    }

    /// Relabels rows and columns by `perm` (old `i` becomes `perm[i]`);
    /// `perm` must map `ex` onto itself.
    pub fn relabeled(&self, perm: &[usize]) -> ExchangeMatrix {
        let n = self.n();
        let mut rows = vec![vec![0i64; n]; self.m];
        for i in 0..self.m {
            for c in 0..n {
                let nc = self.column_position(perm[self.ex[c]]).expect("perm preserves ex");
                rows[perm[i]][nc] = self.rows[i][c];
            }
        }
        ExchangeMatrix { m: self.m, ex: self.ex.clone(), rows }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "m": self.m,
            "n": self.n(),
            "ex": self.ex.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "B": self.rows,
        })
    }
}

/// Positive integers `d_j`, one per exchangeable index (in `ex` order).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SkewSymmetrizer(Vec<i64>);

impl SkewSymmetrizer {
    pub fn new(d: Vec<i64>) -> Result<Self> {
        if d.iter().any(|&x| x <= 0) {
            return Err(Error::Precondition("skew-symmetrizer entries must be positive".into()));
        }
        Ok(Self(d))
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }
}

/// Componentwise-minimal positive `d` with `d_i b_ij = -d_j b_ji` on the
/// given square matrix, scaled to gcd 1 on each connected component of the
/// nonzero pattern.
pub fn find_skew_symmetrizer(principal: &[Vec<i64>]) -> Result<SkewSymmetrizer> {
    let n = principal.len();
    if principal.iter().any(|r| r.len() != n) {
        return Err(Error::Shape("principal part must be square".into()));
    }
    for i in 0..n {
        for j in i..n {
            let (a, b) = (principal[i][j], principal[j][i]);
            // zero pattern must be symmetric and signs opposite
            if (a == 0) != (b == 0) || (a != 0 && a.signum() == b.signum()) {
                return Err(Error::NotSymmetrizable { row: i, col: j });
            }
        }
    }

    let mut d: Vec<BigInt> = vec![BigInt::zero(); n];
    let mut seen = vec![false; n];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        let mut component = vec![root];
        seen[root] = true;
        d[root] = BigInt::one();
        let mut queue = VecDeque::from([root]);
        while let Some(i) = queue.pop_front() {
            for j in 0..n {
                if principal[i][j] == 0 || seen[j] {
                    continue;
                }
                // d_j = d_i · b_ij / (-b_ji)
                let num = &d[i] * BigInt::from(principal[i][j]);
                let den = BigInt::from(-principal[j][i]);
                let g = num.gcd(&den);
                let (mut num, mut den) = (num / &g, den / &g);
                if den.is_negative() {
                    (num, den) = (-num, -den);
                }
                if !den.is_one() {
                    for &c in &component {
                        d[c] *= &den;
                    }
                }
                d[j] = num;
                seen[j] = true;
                component.push(j);
                queue.push_back(j);
            }
        }
        let g = component.iter().fold(BigInt::zero(), |acc, &c| acc.gcd(&d[c]));
        for &c in &component {
            d[c] /= &g;
        }
    }

    for i in 0..n {
        for j in 0..n {
            if &d[i] * principal[i][j] != -(&d[j] * principal[j][i]) {
                return Err(Error::NotSymmetrizable { row: i, col: j });
            }
        }
    }
    let d = d
        .iter()
        .map(|x| x.to_i64().filter(|v| *v > 0).ok_or(Error::Overflow))
        .collect::<Result<Vec<_>>>()?;
    Ok(SkewSymmetrizer(d))
}

/// Verifies `Σ_k b_kj λ_ki = δ_ij d_j` and returns `d`.
pub fn check_compatibility(b: &ExchangeMatrix, lambda: &SkewMatrix) -> Result<SkewSymmetrizer> {
    if lambda.dim() != b.m() {
        return Err(Error::LengthMismatch { expected: b.m(), found: lambda.dim() });
    }
    let mut d = Vec::with_capacity(b.n());
    for (c, &j) in b.ex().iter().enumerate() {
        for i in 0..b.m() {
            let s: i64 = (0..b.m()).map(|k| b.rows()[k][c] * lambda.get(k, i)).sum();
            if i == j {
                if s <= 0 {
                    return Err(Error::Incompatible { row: i, col: j, value: s });
                }
                d.push(s);
            } else if s != 0 {
                return Err(Error::Incompatible { row: i, col: j, value: s });
            }
        }
    }
    Ok(SkewSymmetrizer(d))
}

/// Which monomial of the quantum exchange relation defines the frame change.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExchangeSign {
    /// `c_k = -e_k + Σ_{b_ik>0} b_ik e_i`
    Positive,
    /// `c_k = -e_k - Σ_{b_ik<0} b_ik e_i`
    Negative,
}

/// `E_k^T Λ E_k`, where `E_k` is the identity except for column `k`.
pub fn lambda_mutate(lambda: &SkewMatrix, b: &ExchangeMatrix, k: usize) -> Result<SkewMatrix> {
    lambda_mutate_signed(lambda, b, k, ExchangeSign::Positive)
}

pub fn lambda_mutate_signed(
    lambda: &SkewMatrix,
    b: &ExchangeMatrix,
    k: usize,
    sign: ExchangeSign,
) -> Result<SkewMatrix> {
    let col = b.column(k)?;
    let m = b.m();
    if lambda.dim() != m {
        return Err(Error::LengthMismatch { expected: m, found: lambda.dim() });
    }
    let mut columns: Vec<Vec<i64>> = (0..m)
        .map(|j| {
            let mut e = vec![0; m];
            e[j] = 1;
            e
        })
        .collect();
    columns[k] = col
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let part = match sign {
                ExchangeSign::Positive => x.max(0),
                ExchangeSign::Negative => (-x).max(0),
            };
            if i == k {
                -1
            } else {
                part
            }
        })
        .collect();
    lambda.congruence(&columns)
}

/// The principal-coefficient `Λ` compatible with `[B; I]`:
/// `[[Λ0, -D - Λ0 B], [D - Bᵀ Λ0, -D B + Bᵀ Λ0 B]]`.
pub fn principal_lambda(b: &[Vec<i64>], lambda0: &SkewMatrix, d: &[i64]) -> Result<SkewMatrix> {
    let n = b.len();
    if n == 0 || b.iter().any(|r| r.len() != n) {
        return Err(Error::Shape("B must be a nonempty square matrix".into()));
    }
    if lambda0.dim() != n {
        return Err(Error::LengthMismatch { expected: n, found: lambda0.dim() });
    }
    if d.len() != n {
        return Err(Error::LengthMismatch { expected: n, found: d.len() });
    }
    if d.iter().any(|&x| x <= 0) {
        return Err(Error::Precondition("D must have positive diagonal".into()));
    }
    for i in 0..n {
        for j in 0..n {
            if d[i] * b[i][j] != -(d[j] * b[j][i]) {
                return Err(Error::Precondition(format!(
                    "DB is not skew-symmetric at ({}, {})",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    let l0 = |i: usize, j: usize| lambda0.get(i, j);
    // Λ0 B and Bᵀ Λ0
    let l0b: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| l0(i, k) * b[k][j]).sum()).collect())
        .collect();
    let btl0: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| b[k][i] * l0(k, j)).sum()).collect())
        .collect();
    let delta = |i: usize, j: usize| if i == j { d[i] } else { 0 };
    let mut rows = vec![vec![0i64; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            rows[i][j] = l0(i, j);
            rows[i][n + j] = -delta(i, j) - l0b[i][j];
            rows[n + i][j] = delta(i, j) - btl0[i][j];
            let btl0b: i64 = (0..n).map(|k| btl0[i][k] * b[k][j]).sum();
            rows[n + i][n + j] = -d[i] * b[i][j] + btl0b;
        }
    }
    SkewMatrix::new(rows)
}

/// A classical seed: exchange matrix plus cluster variables written as
/// Laurent polynomials in the initial variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalSeed {
    pub(crate) b: ExchangeMatrix,
    pub(crate) vars: Vec<CommLaurent>,
}

impl ClassicalSeed {
    pub fn initial(b: ExchangeMatrix) -> Self {
        let m = b.m();
        let vars = (0..m).map(|i| CommLaurent::generator(m, i)).collect();
        Self { b, vars }
    }

    pub fn from_parts(b: ExchangeMatrix, vars: Vec<CommLaurent>) -> Result<Self> {
        if vars.len() != b.m() || vars.iter().any(|v| v.nvars() != b.m()) {
            return Err(Error::LengthMismatch { expected: b.m(), found: vars.len() });
        }
        Ok(Self { b, vars })
    }

    pub fn exchange_matrix(&self) -> &ExchangeMatrix {
        &self.b
    }

    pub fn vars(&self) -> &[CommLaurent] {
        &self.vars
    }

    /// The cluster: variables at exchangeable indices.
    pub fn cluster(&self) -> impl Iterator<Item = &CommLaurent> + '_ {
        self.b.ex().iter().map(|&i| &self.vars[i])
    }

    /// The coefficient set: variables at frozen indices.
    pub fn coefficients(&self) -> impl Iterator<Item = &CommLaurent> + '_ {
        (0..self.b.m())
            .filter(|i| !self.b.is_exchangeable(*i))
            .map(|i| &self.vars[i])
    }

    /// Reorders the variable list and relabels `B̃` accordingly.
    pub fn relabeled(&self, perm: &[usize]) -> ClassicalSeed {
        let mut vars = self.vars.clone();
        for (i, v) in self.vars.iter().enumerate() {
            vars[perm[i]] = v.clone();
        }
        ClassicalSeed { b: self.b.relabeled(perm), vars }
    }

    pub fn to_json(&self) -> Value {
        let mut v = self.b.to_json();
        v["vars"] = serde_json::to_value(&self.vars).expect("serializable");
        v
    }
}

/// A quantum seed. `lambda` is the current frame; the variables are always
/// expressed in the torus of the initial seed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantumSeed {
    pub(crate) lambda: SkewMatrix,
    pub(crate) b: ExchangeMatrix,
    pub(crate) vars: Vec<TorusElement>,
    pub(crate) d: SkewSymmetrizer,
}

impl QuantumSeed {
    pub fn initial(b: ExchangeMatrix, lambda: SkewMatrix) -> Result<Self> {
        let d = check_compatibility(&b, &lambda)?;
        let frame = Arc::new(lambda.clone());
        let vars = (0..b.m()).map(|i| TorusElement::generator(frame.clone(), i)).collect();
        Ok(Self { lambda, b, vars, d })
    }

    /// Assembles a seed without verification; see `mutation::verify_quantum_seed`.
    pub fn from_parts(
        lambda: SkewMatrix,
        b: ExchangeMatrix,
        vars: Vec<TorusElement>,
        d: SkewSymmetrizer,
    ) -> Result<Self> {
        if lambda.dim() != b.m() || vars.len() != b.m() || d.as_slice().len() != b.n() {
            return Err(Error::Shape("quantum seed parts have inconsistent sizes".into()));
        }
        let frame = vars[0].frame().clone();
        if vars.iter().any(|v| **v.frame() != *frame) {
            return Err(Error::FrameMismatch);
        }
        Ok(Self { lambda, b, vars, d })
    }

    pub fn lambda(&self) -> &SkewMatrix {
        &self.lambda
    }

    pub fn exchange_matrix(&self) -> &ExchangeMatrix {
        &self.b
    }

    pub fn vars(&self) -> &[TorusElement] {
        &self.vars
    }

    pub fn symmetrizer(&self) -> &SkewSymmetrizer {
        &self.d
    }

    /// The `Λ` of the initial seed, in which all variables are written.
    pub fn initial_frame(&self) -> &Arc<SkewMatrix> {
        self.vars[0].frame()
    }

    pub fn cluster(&self) -> impl Iterator<Item = &TorusElement> + '_ {
        self.b.ex().iter().map(|&i| &self.vars[i])
    }

    /// The `q = 1` classical shadow.
    pub fn shadow(&self) -> ClassicalSeed {
        ClassicalSeed {
            b: self.b.clone(),
            vars: self.vars.iter().map(TorusElement::specialize_q1).collect(),
        }
    }

    pub fn relabeled(&self, perm: &[usize]) -> QuantumSeed {
        let mut vars = self.vars.clone();
        for (i, v) in self.vars.iter().enumerate() {
            vars[perm[i]] = v.clone();
        }
        let mut d = self.d.0.clone();
        for (c, &j) in self.b.ex().iter().enumerate() {
            d[self.b.column_position(perm[j]).expect("perm preserves ex")] = self.d.0[c];
        }
        QuantumSeed {
            lambda: self.lambda.permuted(perm),
            b: self.b.relabeled(perm),
            vars,
            d: SkewSymmetrizer(d),
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = self.b.to_json();
        v["Lambda"] = json!(self.lambda.rows());
        v["d"] = json!(self.d.0);
        v["frame"] = json!(self.initial_frame().rows());
        v["vars"] = serde_json::to_value(&self.vars).expect("serializable");
        v
    }
}
