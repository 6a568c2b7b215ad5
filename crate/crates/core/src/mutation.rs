//! Exchange relations for classical and quantum seeds, and verification of
//! the quantum-seed axioms.
//!
//! New cluster variables are computed in the coordinates of the initial
//! seed. Division by the old variable is exact division of Laurent
//! elements; a failure there would contradict the Laurent phenomenon and is
//! reported as [`Error::LaurentViolation`], never absorbed.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::qring::QLaurent;
use crate::seeds::{check_compatibility, lambda_mutate, ClassicalSeed, QuantumSeed};
use crate::torus::{CommLaurent, TorusElement};

fn laurent_violation(direction: usize, seed_json: serde_json::Value) -> Error {
    Error::LaurentViolation { direction, path: Vec::new(), seed: Box::new(seed_json) }
}

/// Splits column `k` into its positive and negative parts `(g_+, g_-)`,
/// both nonnegative vectors.
fn split_column(col: &[i64]) -> (Vec<i64>, Vec<i64>) {
    (
        col.iter().map(|&x| x.max(0)).collect(),
        col.iter().map(|&x| (-x).max(0)).collect(),
    )
}

/// Classical seed mutation in direction `k` (0-based).
pub fn classical_mutate(s: &ClassicalSeed, k: usize) -> Result<ClassicalSeed> {
    let col = s.b.column(k)?;
    let m = s.b.m();
    let (pos, neg) = split_column(&col);
    let product = |g: &[i64]| {
        g.iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .fold(CommLaurent::one(m), |acc, (i, &e)| {
                acc.mul(&s.vars[i].pow(e as u32)).expect("same arity")
            })
    };
    let numerator = product(&pos).add(&product(&neg))?;
    let new_var = match numerator.exact_div(&s.vars[k]) {
        Ok(x) => x,
        Err(Error::NotDivisible) => return Err(laurent_violation(k, s.to_json())),
        Err(e) => return Err(e),
    };
    let mut vars = s.vars.clone();
    vars[k] = new_var;
    Ok(ClassicalSeed { b: s.b.mutate(k)?, vars })
}

/// The right-hand side `N` of `X'_k · X_k = N` for the current seed.
///
/// With `a_± = g_± - e_k`, the normalized monomial satisfies
/// `X^{g-e_k} · X^{e_k} = q^{Λ(g,e_k)/2} X^g`, where `X^g` is evaluated as
/// `q^{(1/2)Σ_{i>j} λ_ij g_i g_j}` times the ascending ordered product of the
/// current variables. `Λ` is the current seed's matrix throughout.
pub fn exchange_numerator(s: &QuantumSeed, k: usize) -> Result<TorusElement> {
    let col = s.b.column(k)?;
    let frame = s.initial_frame().clone();
    let lambda = &s.lambda;
    let (pos, neg) = split_column(&col);
    let term = |g: &[i64]| -> TorusElement {
        let mut acc = TorusElement::one(frame.clone());
        for (i, &e) in g.iter().enumerate() {
            if e > 0 {
                acc = acc.mul(&s.vars[i].pow(e as u32)).expect("shared frame");
            }
        }
        let pairing: i64 = g.iter().enumerate().map(|(i, &gi)| gi * lambda.get(i, k)).sum();
        acc.scale(&QLaurent::v_pow(lambda.ordering_twist(g) + pairing))
    };
    term(&pos).add(&term(&neg))
}

/// Quantum seed mutation in direction `k` (0-based).
pub fn quantum_mutate(s: &QuantumSeed, k: usize) -> Result<QuantumSeed> {
    let numerator = exchange_numerator(s, k)?;
    let new_var = match numerator.exact_div_right(&s.vars[k]) {
        Ok(x) => x,
        Err(Error::NotDivisible) => return Err(laurent_violation(k, s.to_json())),
        Err(e) => return Err(e),
    };
    assert_eq!(
        new_var.mul(&s.vars[k])?,
        numerator,
        "exchange relation re-multiplication check failed"
    );
    let mut vars = s.vars.clone();
    vars[k] = new_var;
    Ok(QuantumSeed {
        lambda: lambda_mutate(&s.lambda, &s.b, k)?,
        b: s.b.mutate(k)?,
        vars,
        d: s.d.clone(),
    })
}

impl ClassicalSeed {
    pub fn mutate(&self, k: usize) -> Result<ClassicalSeed> {
        classical_mutate(self, k)
    }

    pub fn mutate_sequence(&self, ks: &[usize]) -> Result<ClassicalSeed> {
        ks.iter().try_fold(self.clone(), |s, &k| s.mutate(k))
    }
}

impl QuantumSeed {
    pub fn mutate(&self, k: usize) -> Result<QuantumSeed> {
        quantum_mutate(self, k)
    }

    pub fn mutate_sequence(&self, ks: &[usize]) -> Result<QuantumSeed> {
        ks.iter().try_fold(self.clone(), |s, &k| s.mutate(k))
    }
}

/// Outcome of one verification check. Counterexample indices are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckOutcome {
    fn pass() -> Self {
        Self { passed: true, counterexample: None, detail: None }
    }

    fn fail(at: Vec<usize>, detail: String) -> Self {
        Self { passed: false, counterexample: Some(at.into_iter().map(|i| i + 1).collect()), detail: Some(detail) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub compatibility: CheckOutcome,
    pub quasi_commutation: CheckOutcome,
    pub bar_invariance: CheckOutcome,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.compatibility.passed && self.quasi_commutation.passed && self.bar_invariance.passed
    }
}

/// Checks that `s` is a quantum seed: compatibility of `(Λ, B̃)` with the
/// stored `d`, pairwise quasi-commutation of the variables matching `Λ`, and
/// bar-invariance of every variable.
pub fn verify_quantum_seed(s: &QuantumSeed) -> VerificationReport {
    let compatibility = match check_compatibility(&s.b, &s.lambda) {
        Ok(d) if d == s.d => CheckOutcome::pass(),
        Ok(d) => {
            let c = d
                .as_slice()
                .iter()
                .zip(s.d.as_slice())
                .position(|(a, b)| a != b)
                .unwrap_or(0);
            CheckOutcome::fail(
                vec![s.b.ex()[c]],
                format!("d changed: expected {:?}, found {:?}", s.d.as_slice(), d.as_slice()),
            )
        }
        Err(Error::Incompatible { row, col, value }) => {
            CheckOutcome::fail(vec![row, col], format!("entry of B^T Lambda is {value}"))
        }
        Err(e) => CheckOutcome::fail(vec![], e.to_string()),
    };

    let m = s.vars.len();
    let mut quasi_commutation = CheckOutcome::pass();
    'outer: for i in 0..m {
        for j in i + 1..m {
            let expected = s.lambda.get(i, j);
            let found = s.vars[i].quasi_commutation(&s.vars[j]);
            if found != Ok(Some(expected)) {
                quasi_commutation = CheckOutcome::fail(
                    vec![i, j],
                    format!("expected q^{expected}, found {found:?}"),
                );
                break 'outer;
            }
        }
    }

    let bar_invariance = match s.vars.iter().position(|v| !v.is_bar_invariant()) {
        None => CheckOutcome::pass(),
        Some(i) => CheckOutcome::fail(vec![i], "variable is not bar-invariant".into()),
    };

    VerificationReport { compatibility, quasi_commutation, bar_invariance }
}
