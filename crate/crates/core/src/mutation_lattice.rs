//! Exceptional collections on the level of the Euler lattice.
//!
//! A [`GramLattice`] records the Euler form `χ` on the lattice spanned by an
//! initial collection `E_1, ..., E_n` together with the classes of the current
//! collection in that basis. Mutations act by
//! `[L_E F] = χ(E,F)[E] - [F]` and `[R_F E] = χ(E,F)[F] - [E]`, a shift `[m]`
//! multiplies a class by `(-1)^m`, and the numerical Serre operator is
//! `S = G⁻¹Gᵀ`, characterised by `χ(x, y) = χ(y, Sx)`.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use thiserror::Error;

use crate::exact_linalg::{parse_scalar, q, solve, Scalar, SparseMatrix};
use crate::report::{Check, Report};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("mutation index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("Gram matrix must be square of size {n}")]
    Shape { n: usize },
    #[error("Gram matrix is not invertible")]
    Singular,
    #[error("no rank data")]
    MissingRanks,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    L,
    R,
}

/// One letter of a mutation word; `index` is 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mutation {
    pub side: Side,
    pub index: usize,
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.side {
            Side::L => 'L',
            Side::R => 'R',
        };
        write!(f, "{s}{}", self.index)
    }
}

impl FromStr for Mutation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let side = match s.chars().next() {
            Some('L') | Some('l') => Side::L,
            Some('R') | Some('r') => Side::R,
            _ => return Err(format!("bad mutation `{s}`")),
        };
        let index = s[1..].parse().map_err(|_| format!("bad mutation `{s}`"))?;
        Ok(Mutation { side, index })
    }
}

/// Parses `R1 L2 R1` or `R1,L2,R1`.
pub fn parse_word(text: &str) -> Result<Vec<Mutation>, String> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(str::parse)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramLattice {
    dim: usize,
    form: Vec<Vec<Scalar>>,
    classes: Vec<Vec<Scalar>>,
    base_ranks: Option<Vec<Scalar>>,
    labels: Vec<String>,
}

impl GramLattice {
    /// The collection `E_1, ..., E_n` with Gram matrix `gram`; classes start as the standard basis.
    pub fn new(gram: Vec<Vec<Scalar>>, dim: usize) -> Result<Self, LatticeError> {
        let n = gram.len();
        if gram.iter().any(|r| r.len() != n) {
            return Err(LatticeError::Shape { n });
        }
        let classes = (0..n)
            .map(|i| (0..n).map(|j| if i == j { q(1) } else { q(0) }).collect())
            .collect();
        let labels = (1..=n).map(|i| format!("E{i}")).collect();
        let latt = GramLattice {
            dim,
            form: gram,
            classes,
            base_ranks: None,
            labels,
        };
        latt.form_inverse()?;
        Ok(latt)
    }

    pub fn from_i64(gram: &[&[i64]], dim: usize) -> Result<Self, LatticeError> {
        Self::new(gram.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect(), dim)
    }

    pub fn with_ranks(mut self, ranks: Vec<Scalar>) -> Result<Self, LatticeError> {
        if ranks.len() != self.len() {
            return Err(LatticeError::Shape { n: self.len() });
        }
        self.base_ranks = Some(ranks);
        Ok(self)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, LatticeError> {
        if labels.len() != self.len() {
            return Err(LatticeError::Shape { n: self.len() });
        }
        self.labels = labels;
        Ok(self)
    }

    /// `P^1` with `O, O(1)`, ranks `(1, 1)`.
    pub fn p1() -> Self {
        Self::from_i64(&[&[1, 2], &[0, 1]], 1)
            .and_then(|l| l.with_ranks(vec![q(1), q(1)]))
            .and_then(|l| l.with_labels(vec!["O".into(), "O(1)".into()]))
            .expect("valid")
    }

    /// `P^2` with `O, O(1), O(2)`, ranks `(1, 1, 1)`.
    pub fn p2() -> Self {
        Self::from_i64(&[&[1, 3, 6], &[0, 1, 3], &[0, 0, 1]], 2)
            .and_then(|l| l.with_ranks(vec![q(1), q(1), q(1)]))
            .and_then(|l| l.with_labels(vec!["O".into(), "O(1)".into(), "O(2)".into()]))
            .expect("valid")
    }

    /// The `P^1` data with `χ(E_1, E_2)` changed from 2 to 3.
    pub fn p1_perturbed() -> Self {
        Self::from_i64(&[&[1, 3], &[0, 1]], 1)
            .and_then(|l| l.with_ranks(vec![q(1), q(1)]))
            .expect("valid")
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Classes of the current collection in the basis of the initial one.
    pub fn classes(&self) -> &[Vec<Scalar>] {
        &self.classes
    }

    /// The Euler form on the initial basis.
    pub fn form(&self) -> &[Vec<Scalar>] {
        &self.form
    }

    pub fn chi(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        let mut acc = Scalar::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                acc += xi * &self.form[i][j] * yj;
            }
        }
        acc
    }

    /// `χ(E_a, E_b)` for the current collection.
    pub fn gram(&self) -> Vec<Vec<Scalar>> {
        self.classes
            .iter()
            .map(|a| self.classes.iter().map(|b| self.chi(a, b)).collect())
            .collect()
    }

    pub fn is_unitriangular(&self) -> bool {
        let g = self.gram();
        (0..g.len()).all(|i| g[i][i].is_one() && (0..i).all(|j| g[i][j].is_zero()))
    }

    /// Rank of a class, from the ranks of the initial collection.
    pub fn rank_of(&self, x: &[Scalar]) -> Option<Scalar> {
        let r = self.base_ranks.as_ref()?;
        Some(x.iter().zip(r).map(|(a, b)| a * b).sum())
    }

    pub fn ranks(&self) -> Option<Vec<Scalar>> {
        self.classes.iter().map(|c| self.rank_of(c)).collect()
    }

    pub fn mutate(&self, side: Side, i: usize) -> Result<Self, LatticeError> {
        let n = self.len();
        if i == 0 || i >= n {
            return Err(LatticeError::IndexOutOfRange {
                index: i,
                max: n.saturating_sub(1),
            });
        }
        let (e, f) = (&self.classes[i - 1], &self.classes[i]);
        let c = self.chi(e, f);
        let mut out = self.clone();
        match side {
            Side::L => {
                // (E, F) -> (L_E F, E)
                out.classes[i - 1] = combine(&c, e, f);
                out.classes[i] = e.clone();
                out.labels[i - 1] = format!("L_{{{}}}{}", self.labels[i - 1], self.labels[i]);
                out.labels[i] = self.labels[i - 1].clone();
            }
            Side::R => {
                // (E, F) -> (F, R_F E)
                out.classes[i - 1] = f.clone();
                out.classes[i] = combine(&c, f, e);
                out.labels[i - 1] = self.labels[i].clone();
                out.labels[i] = format!("R_{{{}}}{}", self.labels[i], self.labels[i - 1]);
            }
        }
        Ok(out)
    }

    pub fn apply_word(&self, word: &[Mutation]) -> Result<Self, LatticeError> {
        word.iter().try_fold(self.clone(), |l, m| l.mutate(m.side, m.index))
    }

    /// Same classes and same labels-independent data.
    pub fn same_collection(&self, other: &Self) -> bool {
        self.classes == other.classes && self.form == other.form
    }

    fn form_inverse(&self) -> Result<Vec<Vec<Scalar>>, LatticeError> {
        let n = self.form.len();
        let m = SparseMatrix::from_dense(&self.form);
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let e: Vec<Scalar> = (0..n).map(|i| if i == j { q(1) } else { q(0) }).collect();
            let x = solve(&m, &e).ok().flatten().ok_or(LatticeError::Singular)?;
            cols.push(x);
        }
        if n > 0 && crate::exact_linalg::rank(&m) < n {
            return Err(LatticeError::Singular);
        }
        Ok((0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect())
    }

    /// `S = G⁻¹Gᵀ` on the initial basis.
    pub fn serre_operator(&self) -> Vec<Vec<Scalar>> {
        let inv = self.form_inverse().expect("checked at construction");
        let n = self.form.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| &inv[i][k] * &self.form[j][k]).sum())
                    .collect()
            })
            .collect()
    }

    pub fn apply_serre(&self, x: &[Scalar]) -> Vec<Scalar> {
        self.serre_operator()
            .iter()
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Classes of `E_{n+1}, ..., E_{2n}` with `E_{n+i} = R^{n-1} E_i`, the
    /// right mutation of `E_i` through `E_{i+1}, ..., E_{i+n-1}`.
    pub fn helix_extension(&self) -> Vec<Vec<Scalar>> {
        let n = self.len();
        let mut seq: Vec<Vec<Scalar>> = self.classes.clone();
        for i in 0..n {
            let mut x = seq[i].clone();
            for f in &seq[i + 1..i + n] {
                let c = self.chi(&x, f);
                x = combine(&c, f, &x);
            }
            seq.push(x);
        }
        seq.split_off(n)
    }

    /// Checks `[E_i] = [R^{n-1} E_i ⊗ ω [d-n+1]]` with `⊗ω = (-1)^d S`, and
    /// `rank(E_i) = (-1)^{d-n+1} rank(E_{n+i})` when ranks are known.
    pub fn helix_check(&self) -> Report {
        let n = self.len();
        let d = self.dim;
        let mut rep = Report::new(format!("helix-check n={n} d={d}"));
        rep.info("numerical check on the Euler lattice; necessary, not sufficient, for a helix");
        let ext = self.helix_extension();
        let shift_sign = if (d + 1 + n) % 2 == 0 { q(1) } else { q(-1) };
        let omega_sign = if d % 2 == 0 { q(1) } else { q(-1) };
        for (i, e) in ext.iter().enumerate() {
            let twisted: Vec<Scalar> = self.apply_serre(e).iter().map(|x| x * &omega_sign * &shift_sign).collect();
            let ok = twisted == self.classes[i];
            rep.check(format!("[E_{}] = [R^{} E_{} ⊗ ω[{}]]", i + 1, n - 1, i + 1, d as i64 - n as i64 + 1), ok, || {
                format!("got {}, expected {}", fmt_vec(&twisted), fmt_vec(&self.classes[i]))
            });
        }
        match self.ranks() {
            Some(ranks) => {
                for (i, e) in ext.iter().enumerate() {
                    let r = self.rank_of(e).expect("ranks present");
                    let shifted = &r * &shift_sign;
                    rep.check(format!("rank E_{} = rank E_{} ⊗ ω[{}]", i + 1, n + i + 1, d as i64 - n as i64 + 1), shifted == ranks[i], || {
                        format!("rank E_{} = {}, rank E_{} = {}", i + 1, ranks[i], n + i + 1, r)
                    });
                }
            }
            None => rep.info("no rank data; rank conditions skipped"),
        }
        rep
    }

    /// `gcd(rank E_1, ..., rank E_n)`.
    pub fn rank_gcd(&self) -> Result<Scalar, LatticeError> {
        let ranks = self.ranks().ok_or(LatticeError::MissingRanks)?;
        let mut g = num_bigint::BigInt::zero();
        let mut den = num_bigint::BigInt::one();
        for r in &ranks {
            g = g.gcd(r.numer());
            den = den.lcm(r.denom());
        }
        Ok(Scalar::new(g, den).abs())
    }

    /// Lattice file text: `n`, `d`, rows of the Gram matrix, `ranks ...`, `labels ...`.
    pub fn to_text(&self) -> String {
        let mut out = format!("n {}\nd {}\n", self.len(), self.dim);
        for row in self.gram() {
            out.push_str(&row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "));
            out.push('\n');
        }
        if let Some(r) = self.ranks() {
            out.push_str(&format!("ranks {}\n", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")));
        }
        out.push_str(&format!("labels {}\n", self.labels.join(" ")));
        out
    }

    pub fn from_text(text: &str) -> Result<Self, LatticeError> {
        let mut n = None;
        let mut d = None;
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        let mut ranks = None;
        let mut labels = None;
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let perr = |msg: &str| LatticeError::Parse { line: k + 1, msg: msg.into() };
            let mut words = line.split_whitespace();
            let head = words.next().expect("nonempty");
            let scalars = |ws: &mut dyn Iterator<Item = &str>| -> Result<Vec<Scalar>, LatticeError> {
                ws.map(|w| parse_scalar(w).ok_or_else(|| perr(&format!("bad number `{w}`")))).collect()
            };
            match head {
                "n" => n = Some(words.next().and_then(|w| w.parse::<usize>().ok()).ok_or_else(|| perr("expected `n <count>`"))?),
                "d" => d = Some(words.next().and_then(|w| w.parse::<usize>().ok()).ok_or_else(|| perr("expected `d <dimension>`"))?),
                "ranks" => ranks = Some(scalars(&mut words)?),
                "labels" => labels = Some(words.map(String::from).collect::<Vec<_>>()),
                _ => rows.push(scalars(&mut line.split_whitespace())?),
            }
        }
        let n = n.ok_or(LatticeError::Parse { line: 0, msg: "missing `n`".into() })?;
        let d = d.ok_or(LatticeError::Parse { line: 0, msg: "missing `d`".into() })?;
        if rows.len() != n {
            return Err(LatticeError::Parse {
                line: 0,
                msg: format!("expected {n} Gram rows, found {}", rows.len()),
            });
        }
        let mut latt = GramLattice::new(rows, d)?;
        if let Some(r) = ranks {
            latt = latt.with_ranks(r)?;
        }
        if let Some(l) = labels {
            latt = latt.with_labels(l)?;
        }
        Ok(latt)
    }
}

/// `c·a - b`.
fn combine(c: &Scalar, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| c * x - y).collect()
}

pub fn fmt_vec(v: &[Scalar]) -> String {
    format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}

pub fn fmt_matrix(m: &[Vec<Scalar>]) -> String {
    format!("[{}]", m.iter().map(|r| fmt_vec(r).replace('(', "[").replace(')', "]")).collect::<Vec<_>>().join(", "))
}

/// A unit upper-triangular integer Gram matrix of size `n` with entries in `-max..=max`.
pub fn random_unitriangular<R: Rng>(rng: &mut R, n: usize, max: i64) -> Vec<Vec<Scalar>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match i.cmp(&j) {
                    std::cmp::Ordering::Equal => q(1),
                    std::cmp::Ordering::Greater => q(0),
                    std::cmp::Ordering::Less => q(rng.gen_range(-max..=max)),
                })
                .collect()
        })
        .collect()
}

/// Mutation relations on one lattice; returns the first failure.
pub fn relation_failure(latt: &GramLattice) -> Option<String> {
    let n = latt.len();
    let m = |s, i| Mutation { side: s, index: i };
    for i in 1..n {
        for (a, b) in [(Side::L, Side::R), (Side::R, Side::L)] {
            let back = latt.apply_word(&[m(a, i), m(b, i)]).expect("in range");
            if !back.same_collection(latt) {
                return Some(format!("{}{} then {}{} is not the identity", side_char(a), i, side_char(b), i));
            }
        }
        for s in [Side::L, Side::R] {
            let once = latt.mutate(s, i).expect("in range");
            if !once.is_unitriangular() {
                return Some(format!("{}{} breaks unitriangularity", side_char(s), i));
            }
            if i + 1 < n {
                let lhs = latt.apply_word(&[m(s, i), m(s, i + 1), m(s, i)]).expect("in range");
                let rhs = latt.apply_word(&[m(s, i + 1), m(s, i), m(s, i + 1)]).expect("in range");
                if !lhs.same_collection(&rhs) {
                    return Some(format!("braid relation fails for {} at {}", side_char(s), i));
                }
            }
            for j in i + 2..n {
                for t in [Side::L, Side::R] {
                    let lhs = latt.apply_word(&[m(s, i), m(t, j)]).expect("in range");
                    let rhs = latt.apply_word(&[m(t, j), m(s, i)]).expect("in range");
                    if !lhs.same_collection(&rhs) {
                        return Some(format!("{}{} and {}{} do not commute", side_char(s), i, side_char(t), j));
                    }
                }
            }
        }
    }
    None
}

fn side_char(s: Side) -> char {
    match s {
        Side::L => 'L',
        Side::R => 'R',
    }
}

/// Mutation relations on `count` random lattices plus the helix and rank-gcd checks.
pub fn mutation_report<R: Rng>(rng: &mut R, count: usize, max_n: usize, max_entry: i64) -> Report {
    let mut rep = Report::new(format!("mutation suite ({count} random lattices)"));
    let mut failure = None;
    for k in 0..count {
        let n = rng.gen_range(2..=max_n);
        let g = random_unitriangular(rng, n, max_entry);
        let latt = GramLattice::new(g, 0).expect("unitriangular matrices are invertible");
        if let Some(w) = relation_failure(&latt) {
            failure = Some(format!("lattice {k} {}: {w}", fmt_matrix(latt.form())));
            break;
        }
    }
    rep.push(Check::from_failure("L_iR_i = R_iL_i = id, braid, far commutation, unitriangularity", failure));
    rep.check("helix check passes on P^1", GramLattice::p1().helix_check().all_passed(), || GramLattice::p1().helix_check().to_human());
    rep.check("helix check passes on P^2", GramLattice::p2().helix_check().all_passed(), || GramLattice::p2().helix_check().to_human());
    rep.check("helix check fails on perturbed P^1", !GramLattice::p1_perturbed().helix_check().all_passed(), || "perturbed datum passed".into());
    let g = GramLattice::p2().rank_gcd().expect("ranks present");
    rep.check("rank gcd of P^2 data = 1", g.is_one(), || format!("gcd = {g}"));
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ints(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn p1_left_mutation() {
        let p1 = GramLattice::p1();
        let l = p1.mutate(Side::L, 1).unwrap();
        assert_eq!(l.classes()[0], ints(&[2, -1]));
        assert_eq!(l.classes()[1], ints(&[1, 0]));
        assert_eq!(l.gram(), vec![ints(&[1, 2]), ints(&[0, 1])]);
        assert!(p1.mutate(Side::R, 2).is_err());
        assert!(p1.mutate(Side::L, 0).is_err());
    }

    #[test]
    fn serre_on_p1() {
        let p1 = GramLattice::p1();
        assert_eq!(p1.serre_operator(), vec![ints(&[-3, -2]), ints(&[2, 1])]);
        // S[O] = -[O(-2)], [O(k)] = (1-k)[O] + k[O(1)]
        assert_eq!(p1.apply_serre(&ints(&[1, 0])), ints(&[-3, 2]));
        let one = GramLattice::from_i64(&[&[1]], 0).unwrap();
        assert_eq!(one.serre_operator(), vec![ints(&[1])]);
    }

    #[test]
    fn serre_defining_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let latt = GramLattice::new(random_unitriangular(&mut rng, 4, 5), 0).unwrap();
            let n = latt.len();
            for i in 0..n {
                for j in 0..n {
                    let x: Vec<Scalar> = (0..n).map(|k| q((k == i) as i64)).collect();
                    let y: Vec<Scalar> = (0..n).map(|k| q((k == j) as i64)).collect();
                    assert_eq!(latt.chi(&x, &y), latt.chi(&y, &latt.apply_serre(&x)));
                }
            }
        }
    }

    #[test]
    fn helix_examples() {
        let p1 = GramLattice::p1();
        // [R E_1] = 2[O(1)] - [O] = [O(2)]
        assert_eq!(p1.helix_extension()[0], ints(&[-1, 2]));
        assert!(p1.helix_check().all_passed());
        assert!(GramLattice::p2().helix_check().all_passed());
        let bad = GramLattice::p1_perturbed().helix_check();
        assert!(!bad.all_passed());
        assert!(bad.failures().all(|c| c.name.starts_with("rank")));
    }

    #[test]
    fn p2_helix_classes_are_twists() {
        // E_4 = R^2 O = O(3) = [O] - 3[O(1)] + 3[O(2)]
        let ext = GramLattice::p2().helix_extension();
        assert_eq!(ext[0], ints(&[1, -3, 3]));
    }

    #[test]
    fn rank_gcd_examples() {
        assert!(GramLattice::p2().rank_gcd().unwrap().is_one());
        let l = GramLattice::from_i64(&[&[1, 0], &[0, 1]], 0).unwrap().with_ranks(ints(&[2, 4])).unwrap();
        assert_eq!(l.rank_gcd().unwrap(), q(2));
        assert_eq!(GramLattice::from_i64(&[&[1]], 0).unwrap().rank_gcd(), Err(LatticeError::MissingRanks));
    }

    #[test]
    fn braid_on_p2() {
        let p2 = GramLattice::p2();
        let w1 = parse_word("R1 R2 R1").unwrap();
        let w2 = parse_word("R2,R1,R2").unwrap();
        assert!(p2.apply_word(&w1).unwrap().same_collection(&p2.apply_word(&w2).unwrap()));
        assert!(relation_failure(&p2).is_none());
    }

    #[test]
    fn text_roundtrip() {
        let p2 = GramLattice::p2();
        let back = GramLattice::from_text(&p2.to_text()).unwrap();
        assert_eq!(back, p2);
        assert!(GramLattice::from_text("n 2\nd 1\n1 2\n").is_err());
        assert!(matches!(GramLattice::from_text("n 1\nd 0\nx\n"), Err(LatticeError::Parse { line: 3, .. })));
        assert_eq!(GramLattice::from_text("n 2\nd 0\n1 1\n1 1\n"), Err(LatticeError::Singular));
    }

    #[test]
    fn suite_passes() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let r = mutation_report(&mut rng, 30, 5, 5);
        assert!(r.all_passed(), "{}", r.to_human());
    }
}
