//! Seed files.
//!
//! ```json
//! {"m": 2, "n": 1, "ex": [1], "B": [[0], [1]], "Lambda": [[0, -1], [1, 0]]}
//! ```
//!
//! `ex` is 1-based. `Lambda` absent means a classical seed, unless `Lambda0`
//! or `D` is given for a principal-coefficient matrix
//! `B̃ = [B; I]`, in which case `Λ` is assembled from them. Other fields
//! (such as the `vars` of a printed seed) are ignored.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seeds::{find_skew_symmetrizer, principal_lambda, ClassicalSeed, ExchangeMatrix, QuantumSeed};
use crate::torus::SkewMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Diagonal {
    Entries(Vec<i64>),
    Matrix(Vec<Vec<i64>>),
}

impl Diagonal {
    fn entries(&self) -> Result<Vec<i64>> {
        match self {
            Diagonal::Entries(d) => Ok(d.clone()),
            Diagonal::Matrix(rows) => {
                let n = rows.len();
                let mut d = Vec::with_capacity(n);
                for (i, r) in rows.iter().enumerate() {
                    if r.len() != n || r.iter().enumerate().any(|(j, &x)| j != i && x != 0) {
                        return Err(Error::Shape("D must be diagonal".into()));
                    }
                    d.push(r[i]);
                }
                Ok(d)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedFile {
    pub m: usize,
    pub n: usize,
    pub ex: Vec<usize>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<i64>>,
    #[serde(rename = "Lambda", default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<Vec<i64>>>,
    #[serde(rename = "Lambda0", default, skip_serializing_if = "Option::is_none")]
    pub lambda0: Option<Vec<Vec<i64>>>,
    #[serde(rename = "D", default, skip_serializing_if = "Option::is_none")]
    pub d: Option<Diagonal>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnySeed {
    Classical(ClassicalSeed),
    Quantum(QuantumSeed),
}

impl SeedFile {
    pub fn parse(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Structural validation of sizes and `ex` (errors here are input errors,
    /// not domain failures).
    pub fn validate_shape(&self) -> Result<()> {
        if self.ex.len() != self.n {
            return Err(Error::Shape(format!("ex has {} entries but n = {}", self.ex.len(), self.n)));
        }
        if self.ex.iter().any(|&i| i == 0 || i > self.m) {
            return Err(Error::Shape("ex entries must lie in [1, m]".into()));
        }
        if self.ex.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Shape("ex must be strictly increasing".into()));
        }
        if self.b.len() != self.m || self.b.iter().any(|r| r.len() != self.n) {
            return Err(Error::Shape(format!("B must be {}x{}", self.m, self.n)));
        }
        if let Some(l) = &self.lambda {
            if l.len() != self.m || l.iter().any(|r| r.len() != self.m) {
                return Err(Error::Shape(format!("Lambda must be {0}x{0}", self.m)));
            }
        }
        Ok(())
    }

    fn ex0(&self) -> Vec<usize> {
        self.ex.iter().map(|i| i - 1).collect()
    }

    /// The `ex × ex` principal part of `B`.
    pub fn principal_part(&self) -> Vec<Vec<i64>> {
        self.ex0().into_iter().map(|i| self.b[i].clone()).collect()
    }

    pub fn exchange_matrix(&self) -> Result<ExchangeMatrix> {
        self.validate_shape()?;
        ExchangeMatrix::new(self.m, self.ex0(), self.b.clone())
    }

    /// `Λ` from the file, or assembled from `Lambda0`/`D` for a
    /// principal-coefficient `B̃`.
    pub fn lambda_matrix(&self) -> Result<Option<SkewMatrix>> {
        if let Some(l) = &self.lambda {
            return SkewMatrix::new(l.clone()).map(Some);
        }
        if self.lambda0.is_some() || self.d.is_some() {
            if self.m != 2 * self.n {
                return Err(Error::Shape("Lambda0/D on a seed need B = [B; I] with m = 2n".into()));
            }
            return self.principal_lambda().map(|(_, l)| Some(l));
        }
        Ok(None)
    }

    /// The principal-coefficient pair `([B; I], Λ)` from `B`, `Lambda0`
    /// (default zero) and `D` (default: minimal skew-symmetrizer). `B` may be
    /// the square principal part itself or already `[B; I]`.
    pub fn principal_lambda(&self) -> Result<(ExchangeMatrix, SkewMatrix)> {
        self.validate_shape()?;
        let n = self.n;
        if self.ex0() != (0..n).collect::<Vec<_>>() || !(self.m == n || self.m == 2 * n) {
            return Err(Error::Shape("principal construction needs ex = [1..n] and m = n or m = 2n".into()));
        }
        for (r, row) in self.b[n..].iter().enumerate() {
            if row.iter().enumerate().any(|(c, &x)| x != i64::from(r == c)) {
                return Err(Error::Shape("bottom block of B must be the identity".into()));
            }
        }
        let bp = self.principal_part();
        let lambda0 = match &self.lambda0 {
            Some(l) if l.len() != n || l.iter().any(|r| r.len() != n) => {
                return Err(Error::Shape(format!("Lambda0 must be {n}x{n}")));
            }
            Some(l) => SkewMatrix::new(l.clone())?,
            None => SkewMatrix::zero(n),
        };
        let d = match &self.d {
            Some(d) => d.entries()?,
            None => find_skew_symmetrizer(&bp)?.as_slice().to_vec(),
        };
        if d.len() != n {
            return Err(Error::Shape(format!("D must have {n} entries")));
        }
        let lambda = principal_lambda(&bp, &lambda0, &d)?;
        Ok((ExchangeMatrix::principal_coefficients(bp)?, lambda))
    }

    pub fn into_seed(&self) -> Result<AnySeed> {
        let b = self.exchange_matrix()?;
        Ok(match self.lambda_matrix()? {
            Some(l) => AnySeed::Quantum(QuantumSeed::initial(b, l)?),
            None => AnySeed::Classical(ClassicalSeed::initial(b)),
        })
    }
}
