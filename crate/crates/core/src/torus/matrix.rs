use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Skew-symmetric integer matrix `Λ` governing quasi-commutation
/// `X_i X_j = q^{λ_ij} X_j X_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SkewMatrix {
    m: usize,
    entries: Vec<i64>,
}

impl SkewMatrix {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        let m = rows.len();
        if m == 0 {
            return Err(Error::Shape("Lambda must be at least 1x1".into()));
        }
        let mut entries = Vec::with_capacity(m * m);
        for row in &rows {
            if row.len() != m {
                return Err(Error::Shape(format!("Lambda must be square ({m}x{m})")));
            }
            entries.extend_from_slice(row);
        }
        for i in 0..m {
            for j in i..m {
                if entries[i * m + j] != -entries[j * m + i] {
                    return Err(Error::NotSkewSymmetric { row: i, col: j });
                }
            }
        }
        Ok(Self { m, entries })
    }

    pub fn zero(m: usize) -> Self {
        Self { m, entries: vec![0; m * m] }
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.m + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.m).map(|r| r.to_vec()).collect()
    }

    fn check_len(&self, v: &[i64]) -> Result<()> {
        if v.len() != self.m {
            return Err(Error::LengthMismatch { expected: self.m, found: v.len() });
        }
        Ok(())
    }

    /// `Λb`.
    pub fn apply(&self, b: &[i64]) -> Vec<i64> {
        self.entries
            .chunks(self.m)
            .map(|row| row.iter().zip(b).map(|(x, y)| x * y).sum())
            .collect()
    }

    /// The bilinear form `Λ(a, b) = Σ_{i,j} λ_ij a_i b_j`.
    pub fn form(&self, a: &[i64], b: &[i64]) -> Result<i64> {
        self.check_len(a)?;
        self.check_len(b)?;
        Ok(self.form_unchecked(a, b))
    }

    pub(crate) fn form_unchecked(&self, a: &[i64], b: &[i64]) -> i64 {
        a.iter().zip(self.apply(b)).map(|(x, y)| x * y).sum()
    }

    /// `Σ_{i>j} λ_ij a_i a_j`: the power of `v = q^{1/2}` relating the
    /// normalized monomial `X^a` to the ordered product `X_1^{a_1}···X_m^{a_m}`.
    pub fn ordering_twist(&self, a: &[i64]) -> i64 {
        let mut s = 0;
        for i in 0..self.m {
            for j in 0..i {
                s += self.get(i, j) * a[i] * a[j];
            }
        }
        s
    }

    /// `C^T Λ C` where `C` has the given columns.
    pub fn congruence(&self, columns: &[Vec<i64>]) -> Result<SkewMatrix> {
        if columns.len() != self.m {
            return Err(Error::LengthMismatch { expected: self.m, found: columns.len() });
        }
        for c in columns {
            self.check_len(c)?;
        }
        let checked_dot = |x: &[i64], y: &[i64]| -> Result<i64> {
            x.iter().zip(y).try_fold(0i64, |acc, (a, b)| {
                a.checked_mul(*b).and_then(|p| acc.checked_add(p)).ok_or(Error::Overflow)
            })
        };
        let lc: Vec<Vec<i64>> = columns
            .iter()
            .map(|c| {
                self.entries
                    .chunks(self.m)
                    .map(|row| checked_dot(row, c))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let mut entries = vec![0; self.m * self.m];
        for i in 0..self.m {
            for j in 0..self.m {
                entries[i * self.m + j] = checked_dot(&columns[i], &lc[j])?;
            }
        }
        Ok(SkewMatrix { m: self.m, entries })
    }

    /// Relabels indices: old index `i` becomes `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> SkewMatrix {
        let mut entries = vec![0; self.m * self.m];
        for i in 0..self.m {
            for j in 0..self.m {
                entries[perm[i] * self.m + perm[j]] = self.get(i, j);
            }
        }
        SkewMatrix { m: self.m, entries }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }
}

impl fmt::Display for SkewMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.entries.chunks(self.m).enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(|x| format!("{x:>3}")).collect();
            write!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

impl Serialize for SkewMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SkewMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<i64>>::deserialize(d)?;
        SkewMatrix::new(rows).map_err(serde::de::Error::custom)
    }
}
