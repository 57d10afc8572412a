//! HKR antisymmetrization on polynomial rings.
//!
//! Cochains on `k[x_1, ..., x_d]` are never stored as tensors. A
//! [`PolyCochain`] is a signed sum of products of derivations, evaluated on
//! tuples of polynomials; the cocycle check runs the Hochschild differential
//! on all tuples of monomials up to a total degree bound.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::eulerian::Permutation;
use crate::exact_linalg::{parse_scalar, q, Scalar};
use crate::report::{Check, Report};

/// Largest cochain degree `n` accepted by [`verify_cocycle`]; the check
/// evaluates `b(c)` on `(n+1)`-tuples.
pub const MAX_ARITY: usize = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HkrError {
    #[error("{what} = {value} exceeds the bound {bound}")]
    BoundExceeded { what: &'static str, value: usize, bound: usize },
    #[error("polynomial ring needs at least one variable")]
    NoVariables,
    #[error("mismatched variable count: {0} vs {1}")]
    VariableMismatch(usize, usize),
    #[error("cannot parse `{0}`")]
    Parse(String),
}

/// Exponent vector of a monomial.
pub type Monomial = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRing {
    vars: usize,
}

impl PolyRing {
    pub fn new(vars: usize) -> Result<Self, HkrError> {
        if vars == 0 {
            return Err(HkrError::NoVariables);
        }
        Ok(PolyRing { vars })
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    /// `x, y, z, w` for up to four variables, `x1, ..., xd` beyond.
    pub fn var_name(&self, i: usize) -> String {
        if self.vars <= 4 {
            ["x", "y", "z", "w"][i].to_string()
        } else {
            format!("x{}", i + 1)
        }
    }

    pub fn var(&self, i: usize) -> Poly {
        let mut e = vec![0; self.vars];
        e[i] = 1;
        Poly::monomial(e, q(1))
    }

    pub fn one(&self) -> Poly {
        Poly::monomial(vec![0; self.vars], q(1))
    }

    /// `∂/∂x_i`.
    pub fn partial(&self, i: usize) -> PolyDerivation {
        let mut coeffs = vec![Poly::zero(self.vars); self.vars];
        coeffs[i] = self.one();
        PolyDerivation { coeffs }
    }

    /// All monomials of total degree at most `max`, graded then lexicographic.
    pub fn monomials(&self, max: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        for deg in 0..=max {
            let mut cur = vec![0u32; self.vars];
            fill(&mut cur, 0, deg, &mut out);
        }
        out
    }

    /// Parses `3*x^2*y - 1/2*z + 1`.
    pub fn parse_poly(&self, text: &str) -> Result<Poly, HkrError> {
        let err = || HkrError::Parse(text.to_string());
        let mut out = Poly::zero(self.vars);
        for (sign, term) in split_terms(text) {
            let mut coeff = q(sign);
            let mut exps = vec![0u32; self.vars];
            for factor in term.split('*').map(str::trim) {
                if factor.is_empty() {
                    return Err(err());
                }
                if let Some(c) = parse_scalar(factor) {
                    coeff *= c;
                    continue;
                }
                let (name, pow) = match factor.split_once('^') {
                    Some((n, p)) => (n.trim(), p.trim().parse::<u32>().map_err(|_| err())?),
                    None => (factor, 1),
                };
                let i = (0..self.vars).find(|&i| self.var_name(i) == name).ok_or_else(err)?;
                exps[i] += pow;
            }
            out = out.add(&Poly::monomial(exps, coeff));
        }
        Ok(out)
    }

    /// Parses `x*dy - dz` as `x ∂/∂y - ∂/∂z`; every term carries exactly one `d<var>` factor.
    pub fn parse_derivation(&self, text: &str) -> Result<PolyDerivation, HkrError> {
        let err = || HkrError::Parse(text.to_string());
        let mut coeffs = vec![Poly::zero(self.vars); self.vars];
        for (sign, term) in split_terms(text) {
            let factors: Vec<&str> = term.split('*').map(str::trim).collect();
            let mut slot = None;
            let mut rest = Vec::new();
            for f in factors {
                match f.strip_prefix('d').and_then(|n| (0..self.vars).find(|&i| self.var_name(i) == n)) {
                    Some(i) if slot.is_none() => slot = Some(i),
                    Some(_) => return Err(err()),
                    None => rest.push(f),
                }
            }
            let i = slot.ok_or_else(err)?;
            let c = if rest.is_empty() { self.one() } else { self.parse_poly(&rest.join("*"))? };
            coeffs[i] = coeffs[i].add(&c.scale(&q(sign)));
        }
        Ok(PolyDerivation { coeffs })
    }
}

fn fill(cur: &mut Vec<u32>, pos: usize, left: u32, out: &mut Vec<Monomial>) {
    if pos + 1 == cur.len() {
        cur[pos] = left;
        out.push(cur.clone());
        return;
    }
    for e in (0..=left).rev() {
        cur[pos] = e;
        fill(cur, pos + 1, left - e, out);
    }
    cur[pos] = 0;
}

fn split_terms(text: &str) -> Vec<(i64, String)> {
    let mut out = Vec::new();
    let mut sign = 1;
    let mut cur = String::new();
    for ch in text.chars() {
        match ch {
            '+' | '-' => {
                if !cur.trim().is_empty() {
                    out.push((sign, cur.trim().to_string()));
                }
                cur.clear();
                sign = if ch == '-' { -1 } else { 1 };
            }
            c => cur.push(c),
        }
    }
    if !cur.trim().is_empty() {
        out.push((sign, cur.trim().to_string()));
    }
    out
}

/// A polynomial with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    vars: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    pub fn zero(vars: usize) -> Self {
        Poly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(exps: Monomial, c: Scalar) -> Self {
        let vars = exps.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Poly { vars, terms }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &[u32]) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            add_term(&mut out.terms, m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&q(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.vars);
        }
        Poly {
            vars: self.vars,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut terms = BTreeMap::new();
        for (m, a) in &self.terms {
            for (n, b) in &other.terms {
                let e: Monomial = m.iter().zip(n).map(|(x, y)| x + y).collect();
                add_term(&mut terms, e, a * b);
            }
        }
        Poly { vars: self.vars, terms }
    }

    pub fn partial(&self, i: usize) -> Poly {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if m[i] > 0 {
                let mut e = m.clone();
                e[i] -= 1;
                add_term(&mut terms, e, c * q(m[i] as i64));
            }
        }
        Poly { vars: self.vars, terms }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    pub fn display(&self, ring: &PolyRing) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = *c < Scalar::zero();
            let abs = if neg { -c } else { c.clone() };
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.iter().all(|&e| e == 0) {
                factors.push(abs.to_string());
            }
            for (i, &e) in m.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(ring.var_name(i)),
                    _ => factors.push(format!("{}^{e}", ring.var_name(i))),
                }
            }
            match (k, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

fn add_term(terms: &mut BTreeMap<Monomial, Scalar>, m: Monomial, c: Scalar) {
    use std::collections::btree_map::Entry;
    match terms.entry(m) {
        Entry::Vacant(v) => {
            if !c.is_zero() {
                v.insert(c);
            }
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// `Σ g_i ∂/∂x_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyDerivation {
    coeffs: Vec<Poly>,
}

impl PolyDerivation {
    pub fn new(coeffs: Vec<Poly>) -> Result<Self, HkrError> {
        let d = coeffs.len();
        if d == 0 {
            return Err(HkrError::NoVariables);
        }
        if let Some(p) = coeffs.iter().find(|p| p.vars() != d) {
            return Err(HkrError::VariableMismatch(d, p.vars()));
        }
        Ok(PolyDerivation { coeffs })
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn apply(&self, f: &Poly) -> Poly {
        self.coeffs
            .iter()
            .enumerate()
            .fold(Poly::zero(f.vars()), |acc, (i, g)| acc.add(&g.mul(&f.partial(i))))
    }

    pub fn add(&self, other: &Self) -> Self {
        PolyDerivation {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        PolyDerivation {
            coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect(),
        }
    }
}

/// Anything that evaluates as an `n`-cochain on polynomial arguments.
pub trait PolyEvaluator {
    fn degree(&self) -> usize;
    fn eval(&self, args: &[Poly]) -> Poly;
}

/// `Σ_t c_t · D_{t,1}(a_1) ⋯ D_{t,n}(a_n)`.
#[derive(Clone, Debug)]
pub struct PolyCochain {
    vars: usize,
    degree: usize,
    terms: Vec<(Scalar, Vec<PolyDerivation>)>,
}

impl PolyCochain {
    pub fn terms(&self) -> &[(Scalar, Vec<PolyDerivation>)] {
        &self.terms
    }

    /// True when the cochain vanishes on all monomial tuples of total degree at most `max`.
    pub fn vanishes_up_to(&self, max: u32) -> bool {
        let ring = PolyRing { vars: self.vars };
        monomial_tuples(&ring, self.degree, max)
            .iter()
            .all(|t| self.eval(&t.iter().map(|m| Poly::monomial(m.clone(), q(1))).collect::<Vec<_>>()).is_zero())
    }
}

impl PolyEvaluator for PolyCochain {
    fn degree(&self) -> usize {
        self.degree
    }

    fn eval(&self, args: &[Poly]) -> Poly {
        assert_eq!(args.len(), self.degree, "cochain of degree {} applied to {} arguments", self.degree, args.len());
        let mut acc = Poly::zero(self.vars);
        for (c, ds) in &self.terms {
            let mut p = PolyRing { vars: self.vars }.one().scale(c);
            for (d, a) in ds.iter().zip(args) {
                if p.is_zero() {
                    break;
                }
                p = p.mul(&d.apply(a));
            }
            acc = acc.add(&p);
        }
        acc
    }
}

impl<F: Fn(&[Poly]) -> Poly> PolyEvaluator for (usize, F) {
    fn degree(&self) -> usize {
        self.0
    }

    fn eval(&self, args: &[Poly]) -> Poly {
        (self.1)(args)
    }
}

/// `ε_n(f_1, ..., f_n)(a_1, ..., a_n) = Σ_σ sgn(σ) f_1(a_{σ(1)}) ⋯ f_n(a_{σ(n)})`.
pub fn antisymmetrize(ring: &PolyRing, fs: &[PolyDerivation]) -> PolyCochain {
    let n = fs.len();
    let mut terms = Vec::new();
    for s in Permutation::all(n) {
        // f_k applied to a_{σ(k)}: argument j receives f_{σ^{-1}(j)}.
        let inv = s.inverse();
        let ds = inv.images().iter().map(|&k| fs[k].clone()).collect();
        terms.push((q(s.sign()), ds));
    }
    PolyCochain {
        vars: ring.vars,
        degree: n,
        terms,
    }
}

/// `(b c)(a_0, ..., a_n)` for a polynomial cochain `c` of degree `n`.
pub fn coboundary_eval<C: PolyEvaluator + ?Sized>(c: &C, args: &[Poly]) -> Poly {
    let n = c.degree();
    assert_eq!(args.len(), n + 1);
    let mut acc = args[0].mul(&c.eval(&args[1..]));
    for i in 1..=n {
        let mut merged: Vec<Poly> = args[..i - 1].to_vec();
        merged.push(args[i - 1].mul(&args[i]));
        merged.extend_from_slice(&args[i + 1..]);
        let term = c.eval(&merged);
        acc = if i % 2 == 1 { acc.sub(&term) } else { acc.add(&term) };
    }
    let last = c.eval(&args[..n]).mul(&args[n]);
    if (n + 1) % 2 == 1 {
        acc.sub(&last)
    } else {
        acc.add(&last)
    }
}

/// All `len`-tuples of monomials whose degrees sum to at most `max`.
pub fn monomial_tuples(ring: &PolyRing, len: usize, max: u32) -> Vec<Vec<Monomial>> {
    let monos = ring.monomials(max);
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    extend_tuples(&monos, len, max, &mut cur, &mut out);
    out
}

fn extend_tuples(monos: &[Monomial], len: usize, left: u32, cur: &mut Vec<Monomial>, out: &mut Vec<Vec<Monomial>>) {
    if cur.len() == len {
        out.push(cur.clone());
        return;
    }
    for m in monos {
        let d: u32 = m.iter().sum();
        if d > left {
            continue;
        }
        cur.push(m.clone());
        extend_tuples(monos, len, left - d, cur, out);
        cur.pop();
    }
}

/// Outcome of a cocycle check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleCheck {
    pub tuples: usize,
    pub witness: Option<String>,
}

impl CocycleCheck {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// Evaluates `b(c)` on every `(n+1)`-tuple of monomials of total degree at most `max_degree`.
pub fn verify_cocycle<C: PolyEvaluator + ?Sized>(ring: &PolyRing, c: &C, max_degree: u32, degree_bound: u32) -> Result<CocycleCheck, HkrError> {
    let n = c.degree();
    if n + 1 > MAX_ARITY {
        return Err(HkrError::BoundExceeded {
            what: "cochain degree + 1",
            value: n + 1,
            bound: MAX_ARITY,
        });
    }
    if max_degree > degree_bound {
        return Err(HkrError::BoundExceeded {
            what: "total degree",
            value: max_degree as usize,
            bound: degree_bound as usize,
        });
    }
    let tuples = monomial_tuples(ring, n + 1, max_degree);
    for t in &tuples {
        let args: Vec<Poly> = t.iter().map(|m| Poly::monomial(m.clone(), q(1))).collect();
        let v = coboundary_eval(c, &args);
        if !v.is_zero() {
            let shown: Vec<String> = args.iter().map(|a| a.display(ring)).collect();
            return Ok(CocycleCheck {
                tuples: tuples.len(),
                witness: Some(format!("b(c)({}) = {}", shown.join(", "), v.display(ring))),
            });
        }
    }
    Ok(CocycleCheck {
        tuples: tuples.len(),
        witness: None,
    })
}

/// Cocycle checks for `ε_n` of coordinate derivations on `k[x_1..x_d]`, `d <= vars`, `n <= max_n`.
pub fn hkr_report(vars: usize, max_n: usize, max_degree: u32, degree_bound: u32) -> Result<Report, HkrError> {
    let mut rep = Report::new(format!("hkr-check vars<={vars} n<={max_n} D={max_degree}"));
    for d in 1..=vars {
        let ring = PolyRing::new(d)?;
        for n in 1..=max_n.min(d) {
            // coordinate derivations ∂_1..∂_n and a non-constant family
            let coord: Vec<PolyDerivation> = (0..n).map(|i| ring.partial(i)).collect();
            let twisted: Vec<PolyDerivation> = (0..n)
                .map(|i| {
                    let j = (i + 1) % d;
                    let mut coeffs = vec![Poly::zero(d); d];
                    coeffs[i] = ring.var(j);
                    coeffs[j] = coeffs[j].add(&ring.one().scale(&q(i as i64 + 1)));
                    PolyDerivation { coeffs }
                })
                .collect();
            for (label, fs) in [("∂", &coord), ("x∂", &twisted)] {
                let c = antisymmetrize(&ring, fs);
                let res = verify_cocycle(&ring, &c, max_degree, degree_bound)?;
                rep.push(Check::from_failure(
                    format!("b(ε_{n}({label})) = 0 on k[{d} vars], {} tuples", res.tuples),
                    res.witness,
                ));
            }
        }
    }
    Ok(rep)
}

impl fmt::Display for PolyCochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyCochain(degree {}, {} terms)", self.degree, self.terms.len())
    }
}
