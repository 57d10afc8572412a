//! The group algebra `Q[S_n]`, Eulerian idempotents and the λ-decomposition
//! of Hochschild cochains of commutative algebras.
//!
//! Permutations act on cochains by `σ(f)(a_1, ..., a_n) = f(a_σ(1), ..., a_σ(n))`,
//! which is a left action for the product `(στ)(i) = σ(τ(i))`.
//!
//! The idempotents are obtained from the descent operations
//! `λ_n^k = Σ_σ C(k - d(σ) + n - 1, n) σ`, which are polynomial in `k` of the
//! form `Σ_i k^i ẽ_n^(i)`. Inverting the Vandermonde system over
//! `k = 1, ..., n` gives the `ẽ_n^(i)`, and twisting by the sign character
//! gives `e_n^(i)` normalized by `e_2^(1) = (id + (12))/2` and
//! `e_n^(n) = (1/n!) Σ sgn(σ) σ`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact_linalg::{self, parse_scalar, q, RowEchelon, Scalar, SparseMatrix};
use crate::hochschild::{self, decode_index, Cochain};
use crate::quiver_algebra::FiniteDimAlgebra;
use crate::report::{Check, Report};

pub const DEFAULT_BOUND: usize = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EulerianError {
    #[error("n = {n} exceeds the bound {bound}")]
    BoundExceeded { n: usize, bound: usize },
    #[error("permutations of {perm} letters cannot act on a cochain of degree {degree}")]
    DegreeMismatch { perm: usize, degree: usize },
    #[error("the algebra is not commutative")]
    NotCommutative,
    #[error("bad group algebra element: {0}")]
    Parse(String),
}

/// A permutation of `{0, ..., n-1}` in image notation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || seen[i] {
                return None;
            }
            seen[i] = true;
        }
        Some(Permutation(images))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// The transposition of `i` and `j`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut v: Vec<usize> = (0..n).collect();
        v.swap(i, j);
        Permutation(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut v = vec![0; self.0.len()];
        for (i, &s) in self.0.iter().enumerate() {
            v[s] = i;
        }
        Permutation(v)
    }

    pub fn descents(&self) -> usize {
        self.0.windows(2).filter(|w| w[0] > w[1]).count()
    }

    pub fn sign(&self) -> i64 {
        let inversions = (0..self.0.len())
            .flat_map(|i| (i + 1..self.0.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| self.0[i] > self.0[j])
            .count();
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// All permutations of `n` letters in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        loop {
            out.push(Permutation(cur.clone()));
            let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else { break };
            let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("exists");
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// A formal rational combination of permutations of `n` letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymGroupElement {
    n: usize,
    terms: BTreeMap<Permutation, Scalar>,
}

impl SymGroupElement {
    pub fn zero(n: usize) -> Self {
        SymGroupElement { n, terms: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_perm(Permutation::identity(n), Scalar::one())
    }

    pub fn from_perm(p: Permutation, c: Scalar) -> Self {
        let mut e = Self::zero(p.len());
        e.add_term(p, c);
        e
    }

    /// `Σ_σ sgn(σ) σ`.
    pub fn antisymmetrizer(n: usize) -> Self {
        let mut e = Self::zero(n);
        for p in Permutation::all(n) {
            let s = q(p.sign());
            e.add_term(p, s);
        }
        e
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Permutation, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, p: &Permutation) -> Scalar {
        self.terms.get(p).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, p: Permutation, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(p.clone()).or_insert_with(Scalar::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&p);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&q(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.n);
        for (p, x) in &self.terms {
            out.add_term(p.clone(), x * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut acc: BTreeMap<Permutation, Scalar> = BTreeMap::new();
        for (p, a) in &self.terms {
            for (r, b) in &other.terms {
                *acc.entry(p.compose(r)).or_insert_with(Scalar::zero) += a * b;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        SymGroupElement { n: self.n, terms: acc }
    }

    /// The algebra automorphism `σ ↦ sgn(σ) σ`.
    pub fn sign_twist(&self) -> Self {
        let mut out = Self::zero(self.n);
        for (p, c) in &self.terms {
            out.add_term(p.clone(), c * q(p.sign()));
        }
        out
    }

    /// Text form `c1*[p1] + c2*[p2] ...` with 1-based image notation.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (p, c) in &self.terms {
            let neg = c.is_negative();
            let mag = c.abs();
            match (s.is_empty(), neg) {
                (true, true) => s.push('-'),
                (true, false) => {}
                (false, true) => s.push_str(" - "),
                (false, false) => s.push_str(" + "),
            }
            s.push_str(&format!("{mag}*{p}"));
        }
        s
    }

    pub fn parse(n: usize, text: &str) -> Result<Self, EulerianError> {
        let err = |m: &str| EulerianError::Parse(m.to_string());
        let mut out = Self::zero(n);
        let text = text.trim();
        if text == "0" {
            return Ok(out);
        }
        let mut negative = false;
        let mut expect_term = true;
        for tok in text.split_whitespace() {
            if tok == "+" || tok == "-" {
                if !expect_term {
                    expect_term = true;
                    negative = tok == "-";
                } else {
                    negative ^= tok == "-";
                }
                continue;
            }
            if !expect_term {
                return Err(err("expected `+` or `-` between terms"));
            }
            let (mut tok, mut neg) = (tok, negative);
            if let Some(t) = tok.strip_prefix('-') {
                tok = t;
                neg = !neg;
            }
            let (c, perm) = match tok.split_once('*') {
                Some((c, p)) => (parse_scalar(c).ok_or_else(|| err("bad coefficient"))?, p),
                None => (Scalar::one(), tok),
            };
            let inner = perm
                .strip_prefix('[')
                .and_then(|p| p.strip_suffix(']'))
                .ok_or_else(|| err("expected a permutation in brackets"))?;
            let images: Vec<usize> = inner
                .split(',')
                .map(|x| x.trim().parse::<usize>().ok().and_then(|v| v.checked_sub(1)))
                .collect::<Option<_>>()
                .ok_or_else(|| err("bad permutation entry"))?;
            if images.len() != n {
                return Err(err("permutation has the wrong length"));
            }
            let p = Permutation::new(images).ok_or_else(|| err("not a permutation"))?;
            out.add_term(p, if neg { -c } else { c });
            expect_term = false;
            negative = false;
        }
        if expect_term {
            return Err(err("expected a term"));
        }
        Ok(out)
    }
}

impl fmt::Display for SymGroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn check_bound(n: usize, bound: usize) -> Result<(), EulerianError> {
    if n > bound {
        return Err(EulerianError::BoundExceeded { n, bound });
    }
    Ok(())
}

fn binomial(m: i64, k: usize) -> Scalar {
    // Polynomial binomial m(m-1)...(m-k+1)/k!.
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k as i64 {
        num *= BigInt::from(m - i);
        den *= BigInt::from(i + 1);
    }
    Scalar::new(num, den)
}

/// `λ_n^k = Σ_σ C(k - d(σ) + n - 1, n) σ`, with `d` the number of descents.
pub fn lambda_operation(n: usize, k: usize, bound: usize) -> Result<SymGroupElement, EulerianError> {
    check_bound(n, bound)?;
    let mut out = SymGroupElement::zero(n);
    for p in Permutation::all(n) {
        let c = binomial(k as i64 - p.descents() as i64 + n as i64 - 1, n);
        out.add_term(p, c);
    }
    Ok(out)
}

/// Which normalization of the Eulerian family to produce.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convention {
    /// `e_2^(1) = (id + (12))/2`, `e_n^(n)` the normalized antisymmetrizer.
    Standard,
    /// The raw Vandermonde inversion without the sign twist.
    Untwisted,
}

/// `e_n^(1), ..., e_n^(n)`.
pub fn eulerian_idempotents(n: usize, bound: usize) -> Result<Vec<SymGroupElement>, EulerianError> {
    eulerian_idempotents_with(n, bound, Convention::Standard)
}

pub fn eulerian_idempotents_with(n: usize, bound: usize, convention: Convention) -> Result<Vec<SymGroupElement>, EulerianError> {
    check_bound(n, bound)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    let lambdas: Vec<SymGroupElement> = (1..=n).map(|k| lambda_operation(n, k, bound)).collect::<Result<_, _>>()?;
    // λ^k = Σ_i k^i ẽ^(i): invert V with V[k-1][i-1] = k^i.
    let v: Vec<Vec<Scalar>> = (1..=n)
        .map(|k| (1..=n).map(|i| Scalar::from_integer(BigInt::from(k).pow(i as u32))).collect())
        .collect();
    let inv = invert(&v);
    let raw: Vec<SymGroupElement> = (0..n)
        .map(|i| {
            (0..n).fold(SymGroupElement::zero(n), |acc, k| acc.add(&lambdas[k].scale(&inv[i][k])))
        })
        .collect();
    Ok(match convention {
        Convention::Standard => raw.iter().map(SymGroupElement::sign_twist).collect(),
        Convention::Untwisted => raw,
    })
}

fn invert(m: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let n = m.len();
    let a = SparseMatrix::from_dense(m);
    let mut cols = vec![vec![Scalar::zero(); n]; n];
    for j in 0..n {
        let mut e = vec![Scalar::zero(); n];
        e[j] = Scalar::one();
        let x = exact_linalg::solve(&a, &e).expect("square").expect("Vandermonde matrices are invertible");
        for i in 0..n {
            cols[i][j] = x[i].clone();
        }
    }
    cols
}

/// `σ(f)(s_1, ..., s_n) = f(s_σ⁻¹(1), ..., s_σ⁻¹(n))`, extended linearly.
pub fn perm_action(s: &SymGroupElement, f: &Cochain) -> Result<Cochain, EulerianError> {
    if s.degree() != f.degree() {
        return Err(EulerianError::DegreeMismatch {
            perm: s.degree(),
            degree: f.degree(),
        });
    }
    let n = f.dim();
    let deg = f.degree();
    let mut out = Vec::new();
    for (p, c) in s.terms() {
        for (idx, x) in f.coeffs() {
            let (t, k) = decode_index(n, deg, *idx);
            // the coefficient of f at t moves to s with s_j = t_σ(j)
            let moved: Vec<usize> = (0..deg).map(|j| t[p.0[j]]).collect();
            let flat = moved.iter().fold(0usize, |acc, &i| acc * n + i) * n + k;
            out.push((flat, c * x));
        }
    }
    Ok(Cochain::from_sparse(n, deg, out))
}

/// Checks the group-algebra identities of the Eulerian family for one `n`.
pub fn idempotent_report(n: usize, bound: usize) -> Result<Report, EulerianError> {
    let mut r = Report::new(format!("euler-idem {n}"));
    let es = eulerian_idempotents(n, bound)?;
    for (i, e) in es.iter().enumerate() {
        r.info(format!("e_{n}^({}) = {}", i + 1, e));
    }
    let sum = es.iter().fold(SymGroupElement::zero(n), |a, e| a.add(e));
    r.check(format!("n={n}: Σ e_n^(i) = id"), sum == SymGroupElement::identity(n), || sum.to_text());
    let mut orth = None;
    for (i, a) in es.iter().enumerate() {
        for (j, b) in es.iter().enumerate() {
            let p = a.mul(b);
            let expected = if i == j { a.clone() } else { SymGroupElement::zero(n) };
            if p != expected && orth.is_none() {
                orth = Some(format!("e^({}) e^({}) = {}", i + 1, j + 1, p));
            }
        }
    }
    r.push(Check::from_failure(format!("n={n}: e^(i) e^(j) = δ_ij e^(i)"), orth));
    if n == 2 {
        let half = Scalar::new(BigInt::one(), BigInt::from(2));
        let expected = SymGroupElement::identity(2)
            .add(&SymGroupElement::from_perm(Permutation::transposition(2, 0, 1), Scalar::one()))
            .scale(&half);
        r.check("n=2: e_2^(1) = (id + (12))/2", es[0] == expected, || es[0].to_text());
    }
    if n >= 1 {
        let fact: BigInt = (1..=n as u64).map(BigInt::from).product();
        let top = SymGroupElement::antisymmetrizer(n).scale(&Scalar::new(BigInt::one(), fact));
        r.check(format!("n={n}: e_n^(n) = antisymmetrizer/n!"), es[n - 1] == top, || es[n - 1].to_text());
    }
    let mut lam = None;
    for k in 1..=3 {
        for m in 1..=3 {
            let lhs = lambda_operation(n, k, bound)?.mul(&lambda_operation(n, m, bound)?);
            if lhs != lambda_operation(n, k * m, bound)? && lam.is_none() {
                lam = Some(format!("k={k}, m={m}"));
            }
        }
    }
    r.push(Check::from_failure(format!("n={n}: λ^k λ^m = λ^(km)"), lam));
    Ok(r)
}

/// Checks `b ∘ e_n^(i) = e_{n+1}^(i) ∘ b` on every basis cochain of `C^n(B, B)`.
pub fn chain_compatibility_check(
    b: &FiniteDimAlgebra,
    n: usize,
    i: usize,
    bound: usize,
    convention: Convention,
) -> Result<Check, EulerianError> {
    if !b.is_commutative() {
        return Err(EulerianError::NotCommutative);
    }
    let name = format!("b ∘ e_{n}^({i}) = e_{}^({i}) ∘ b on C^{n}", n + 1);
    let zero_n = SymGroupElement::zero(n);
    let zero_n1 = SymGroupElement::zero(n + 1);
    let en = eulerian_idempotents_with(n, bound, convention)?;
    let en1 = eulerian_idempotents_with(n + 1, bound, convention)?;
    // e_n^(i) = 0 for i > n; e_0 is the identity on C^0 only when i = 0.
    let e_n = if n == 0 {
        if i == 0 {
            SymGroupElement::identity(0)
        } else {
            zero_n.clone()
        }
    } else {
        en.get(i.wrapping_sub(1)).cloned().unwrap_or(zero_n)
    };
    let e_n1 = en1.get(i.wrapping_sub(1)).cloned().unwrap_or(zero_n1);
    let dim = b.dim();
    let space = dim.pow(n as u32 + 1);
    for idx in 0..space {
        let f = Cochain::from_sparse(dim, n, vec![(idx, Scalar::one())]);
        let lhs = hochschild::differential(b, &perm_action(&e_n, &f)?);
        let rhs = perm_action(&e_n1, &hochschild::differential(b, &f))?;
        if lhs != rhs {
            let (t, k) = decode_index(dim, n, idx);
            let args: Vec<&str> = t.iter().map(|&x| b.label(x)).collect();
            return Ok(Check::fail(
                name,
                format!("basis cochain ({}) ↦ {}: sides differ", args.join(","), b.label(k)),
            ));
        }
    }
    Ok(Check::pass(name))
}

/// Ranks of `e_n^(i)` on the cocycle space `Z^n(B, B)`; they add up to its
/// dimension exactly when the idempotents split it.
pub fn cocycle_splitting(b: &FiniteDimAlgebra, n: usize, bound: usize) -> Result<(Vec<usize>, usize), EulerianError> {
    if !b.is_commutative() {
        return Err(EulerianError::NotCommutative);
    }
    let hc = hochschild::HochschildComplex::new(b);
    let z = hc.cocycle_basis(n).map_err(|e| EulerianError::Parse(e.to_string()))?;
    let es = eulerian_idempotents(n, bound)?;
    let mut ranks = Vec::new();
    for e in &es {
        let mut ech = RowEchelon::new(b.dim().pow(n as u32 + 1));
        for f in &z {
            ech.insert(perm_action(e, f)?.coeffs().to_vec());
        }
        ranks.push(ech.rank());
    }
    Ok((ranks, z.len()))
}
