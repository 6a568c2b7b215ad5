//! Corpus seeds, random generators and independent oracles shared by the
//! integration tests.

#![allow(dead_code, clippy::needless_range_loop)]

use num_integer::Integer;
use qcluster::{ClassicalSeed, ExchangeMatrix, QuantumSeed, SkewMatrix};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn skew(rows: Vec<Vec<i64>>) -> SkewMatrix {
    SkewMatrix::new(rows).unwrap()
}

pub fn square(b: Vec<Vec<i64>>) -> ExchangeMatrix {
    ExchangeMatrix::from_principal(b).unwrap()
}

pub const A2: [[i64; 2]; 2] = [[0, 1], [-1, 0]];
pub const B2: [[i64; 2]; 2] = [[0, 1], [-2, 0]];
pub const G2: [[i64; 2]; 2] = [[0, 1], [-3, 0]];
pub const KRONECKER: [[i64; 2]; 2] = [[0, 2], [-2, 0]];
pub const A3: [[i64; 3]; 3] = [[0, 1, 0], [-1, 0, 1], [0, -1, 0]];

pub fn rows<const N: usize>(b: [[i64; N]; N]) -> Vec<Vec<i64>> {
    b.iter().map(|r| r.to_vec()).collect()
}

pub fn standard_lambda() -> SkewMatrix {
    skew(vec![vec![0, 1], vec![-1, 0]])
}

pub fn quantum_a2() -> QuantumSeed {
    QuantumSeed::initial(square(rows(A2)), standard_lambda()).unwrap()
}

pub fn quantum_b2() -> QuantumSeed {
    QuantumSeed::initial(square(rows(B2)), standard_lambda()).unwrap()
}

pub fn quantum_g2() -> QuantumSeed {
    QuantumSeed::initial(square(rows(G2)), standard_lambda()).unwrap()
}

pub fn quantum_kronecker() -> QuantumSeed {
    QuantumSeed::initial(square(rows(KRONECKER)), standard_lambda()).unwrap()
}

/// One exchangeable and one frozen variable.
pub fn m2n1() -> QuantumSeed {
    let b = ExchangeMatrix::new(2, vec![0], vec![vec![0], vec![1]]).unwrap();
    QuantumSeed::initial(b, skew(vec![vec![0, -1], vec![1, 0]])).unwrap()
}

/// `[A3; I]` with `Λ0 = 0` and `D = I`.
pub fn quantum_a3_principal() -> QuantumSeed {
    let lambda = qcluster::principal_lambda(&rows(A3), &SkewMatrix::zero(3), &[1, 1, 1]).unwrap();
    QuantumSeed::initial(ExchangeMatrix::principal_coefficients(rows(A3)).unwrap(), lambda).unwrap()
}

pub fn quantum_corpus() -> Vec<(&'static str, QuantumSeed)> {
    vec![
        ("quantum A2", quantum_a2()),
        ("quantum B2", quantum_b2()),
        ("quantum G2", quantum_g2()),
        ("quantum Kronecker", quantum_kronecker()),
        ("m=2/n=1", m2n1()),
        ("quantum A3-principal", quantum_a3_principal()),
    ]
}

pub fn classical_corpus() -> Vec<(&'static str, ClassicalSeed)> {
    vec![
        ("A1", ClassicalSeed::initial(square(vec![vec![0]]))),
        ("A2", ClassicalSeed::initial(square(rows(A2)))),
        ("B2", ClassicalSeed::initial(square(rows(B2)))),
        ("G2", ClassicalSeed::initial(square(rows(G2)))),
        ("Kronecker", ClassicalSeed::initial(square(rows(KRONECKER)))),
        ("A3", ClassicalSeed::initial(square(rows(A3)))),
        (
            "A3-principal",
            ClassicalSeed::initial(ExchangeMatrix::principal_coefficients(rows(A3)).unwrap()),
        ),
        (
            "A2 with frozen row",
            ClassicalSeed::initial(ExchangeMatrix::new(3, vec![0, 2], vec![vec![0, 1], vec![2, -1], vec![-1, 0]]).unwrap()),
        ),
    ]
}

/// Random skew-symmetrizable `n × n` matrix built from a random
/// symmetrizer with entries in `1..=dmax`: `b_ij = s_ij / d_i` for a random
/// skew-symmetric `S` whose entries are multiples of `lcm(d_i, d_j)`, so
/// that every entry has absolute value at most `bound`.
pub fn random_skew_symmetrizable(rng: &mut impl Rng, n: usize, dmax: i64, bound: i64) -> Vec<Vec<i64>> {
    let d: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=dmax)).collect();
    let mut b = vec![vec![0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let l = d[i].lcm(&d[j]);
            let tmax = bound / (l / d[i].min(d[j]));
            let t = if tmax == 0 { 0 } else { rng.gen_range(-tmax..=tmax) };
            b[i][j] = t * l / d[i];
            b[j][i] = -t * l / d[j];
        }
    }
    b
}

pub fn random_skew(rng: &mut impl Rng, m: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut l = vec![vec![0; m]; m];
    for i in 0..m {
        for j in i + 1..m {
            let x = rng.gen_range(-bound..=bound);
            l[i][j] = x;
            l[j][i] = -x;
        }
    }
    l
}

fn random_ex(rng: &mut impl Rng, m: usize, n: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..m).collect();
    idx.shuffle(rng);
    let mut ex = idx[..n].to_vec();
    ex.sort_unstable();
    ex
}

/// Random exchange matrix with `m ≤ max_m` and entries in `[-bound, bound]`.
pub fn random_exchange_matrix(rng: &mut impl Rng, max_m: usize, bound: i64) -> ExchangeMatrix {
    let m = rng.gen_range(1..=max_m);
    let n = rng.gen_range(1..=m);
    let ex = random_ex(rng, m, n);
    let principal = random_skew_symmetrizable(rng, n, 2, bound);
    let mut rows = vec![vec![0; n]; m];
    for i in 0..m {
        match ex.iter().position(|&e| e == i) {
            Some(r) => rows[i] = principal[r].clone(),
            None => rows[i] = (0..n).map(|_| rng.gen_range(-bound..=bound)).collect(),
        }
    }
    ExchangeMatrix::new(m, ex, rows).unwrap()
}

/// Integer determinant by cofactor expansion (small matrices only).
pub fn det(a: &[Vec<i64>]) -> i64 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|c| {
            let minor: Vec<Vec<i64>> = a[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &x)| x).collect())
                .collect();
            let sign = if c % 2 == 0 { 1 } else { -1 };
            sign * a[0][c] * det(&minor)
        })
        .sum()
}

/// `adj(a)` with `a · adj(a) = det(a) · I`.
pub fn adjugate(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let mut adj = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<i64>> = a
                .iter()
                .enumerate()
                .filter(|&(r, _)| r != i)
                .map(|(_, row)| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                .collect();
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            adj[j][i] = sign * det(&minor);
        }
    }
    adj
}

/// Random compatible pair with `m ∈ {2, 4}` and entries of `Λ` and `B̃` in
/// `[-bound, bound]`: draws an invertible skew-symmetric `Λ` and solves
/// `B̃ᵀΛ = [D 0]` for the smallest integral `D`, i.e. column `j` of `B̃` is
/// `-d_j Λ⁻¹ e_{ex_j}`.
pub fn random_quantum_seed(rng: &mut impl Rng, bound: i64) -> QuantumSeed {
    loop {
        let m = *[2usize, 4].choose(rng).unwrap();
        let lambda = random_skew(rng, m, bound);
        let det = det(&lambda);
        if det == 0 {
            continue;
        }
        let n = rng.gen_range(1..=m);
        let ex = random_ex(rng, m, n);
        let adj = adjugate(&lambda);
        let mut rows = vec![vec![0; n]; m];
        for (j, &e) in ex.iter().enumerate() {
            let col: Vec<i64> = (0..m).map(|i| adj[i][e]).collect();
            let g = col.iter().fold(det.abs(), |g, x| g.gcd(x));
            let d = det.abs() / g;
            for i in 0..m {
                rows[i][j] = -d * col[i] / det;
            }
        }
        if rows.iter().flatten().any(|x| x.abs() > bound) {
            continue;
        }
        let b = ExchangeMatrix::new(m, ex, rows).expect("compatible B̃ is skew-symmetrizable");
        return QuantumSeed::initial(b, skew(lambda)).expect("compatible by construction");
    }
}

pub fn entries_within(b: &ExchangeMatrix, lambda: Option<&SkewMatrix>, bound: i64) -> bool {
    b.rows().iter().flatten().all(|x| x.abs() <= bound)
        && lambda.is_none_or(|l| l.rows().iter().flatten().all(|x| x.abs() <= bound))
}

/// Normal-ordering oracle for the quantum torus, working on words in the
/// generators `X_i^{±1}` with `X_i X_j = q^{λ_ij} X_j X_i`. Powers of `q`
/// are tracked in units of `v = q^{1/2}`.
pub struct WordOracle<'a> {
    pub lambda: &'a SkewMatrix,
}

impl WordOracle<'_> {
    /// Unit letters of the ordered product `X_1^{a_1} ⋯ X_m^{a_m}`.
    pub fn ordered_word(&self, a: &[i64]) -> Vec<(usize, i64)> {
        a.iter()
            .enumerate()
            .flat_map(|(i, &x)| std::iter::repeat_n((i, x.signum()), x.unsigned_abs() as usize))
            .collect()
    }

    /// The normalized monomial as `v^s` times an ordered word:
    /// `X^a = q^{(1/2) Σ_{l<k} a_k a_l λ_kl} X_1^{a_1} ⋯ X_m^{a_m}`.
    pub fn normalized(&self, a: &[i64]) -> (i64, Vec<(usize, i64)>) {
        let mut s = 0;
        for k in 0..a.len() {
            for l in 0..k {
                s += a[k] * a[l] * self.lambda.get(k, l);
            }
        }
        (s, self.ordered_word(a))
    }

    /// Bubble-sorts `word` into ascending generator order and returns the
    /// accumulated power of `v` and the resulting exponent vector.
    pub fn normal_order(&self, mut word: Vec<(usize, i64)>, m: usize) -> (i64, Vec<i64>) {
        let mut s = 0;
        let mut swapped = true;
        while swapped {
            swapped = false;
            for p in 1..word.len() {
                let (j, sj) = word[p - 1];
                let (i, si) = word[p];
                if j > i {
                    // X_j^s X_i^t = q^{λ_ji s t} X_i^t X_j^s
                    s += 2 * self.lambda.get(j, i) * sj * si;
                    word.swap(p - 1, p);
                    swapped = true;
                }
            }
        }
        let mut a = vec![0; m];
        for (i, e) in word {
            a[i] += e;
        }
        (s, a)
    }

    /// Power of `v` in `X^a · X^b = v^s X^{a+b}`.
    pub fn product_twist(&self, a: &[i64], b: &[i64]) -> i64 {
        let m = a.len();
        let (sa, wa) = self.normalized(a);
        let (sb, wb) = self.normalized(b);
        let mut word = wa;
        word.extend(wb);
        let (s, c) = self.normal_order(word, m);
        // the ordered word for c equals v^{-s_c} X^c
        let (sc, _) = self.normalized(&c);
        sa + sb + s - sc
    }

    /// Power of `v` in `bar(X^a) = v^s X^a`, where bar reverses words and
    /// inverts `v`.
    pub fn bar_twist(&self, a: &[i64]) -> i64 {
        let (sa, mut w) = self.normalized(a);
        w.reverse();
        let (s, c) = self.normal_order(w, a.len());
        let (sc, _) = self.normalized(&c);
        -sa + s - sc
    }
}
