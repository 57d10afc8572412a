//! The Hochschild cochain complex `C^n(A, A) = Hom(A^{⊗n}, A)`.
//!
//! A cochain of degree `n` is stored as a sparse coefficient tensor indexed by
//! `(i_1, ..., i_n; k)`, flattened base `dim A` with the output index last.
//! The differential is
//!
//! ```text
//! b(f)(a_1, ..., a_{n+1}) = a_1 f(a_2, ..., a_{n+1})
//!     + Σ_{i=1}^{n} (-1)^i f(a_1, ..., a_i a_{i+1}, ..., a_{n+1})
//!     + (-1)^{n+1} f(a_1, ..., a_n) a_{n+1}.
//! ```
//!
//! For quiver algebras a much smaller complex relative to the semisimple
//! subalgebra `E` spanned by the vertex idempotents is available:
//! `Hom_{E-E}(r^{⊗_E n}, A)` with `r` the radical. It sits inside the full
//! complex as the normalized `E`-linear cochains and computes the same
//! cohomology.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact_linalg::{self, normalize_sparse, parse_scalar, q, RowEchelon, Scalar, SparseMatrix, SparseVec};
use crate::quiver_algebra::{AlgElem, FiniteDimAlgebra};

pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HochschildError {
    #[error("cochain space of size {needed} exceeds the budget {limit}")]
    BudgetExceeded { needed: u64, limit: u64 },
    #[error("expected a cochain of degree {expected}, got degree {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("cochain over an algebra of dimension {got}, expected {expected}")]
    AlgebraMismatch { expected: usize, got: usize },
    #[error("the reduced complex needs a quiver algebra")]
    NotAQuiverAlgebra,
    #[error("cochain text, line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Which cochain complex to use for cohomology computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComplexMode {
    /// Full complex while `(dim A)^{n+2}` fits the budget, reduced otherwise.
    Auto,
    Full,
    Reduced,
}

/// `n^e` saturating at `u64::MAX`.
pub fn saturating_pow(n: usize, e: usize) -> u64 {
    let mut acc: u64 = 1;
    for _ in 0..e {
        acc = acc.saturating_mul(n as u64);
    }
    acc
}

fn flat_index(dim: usize, inputs: &[usize], out: usize) -> usize {
    inputs.iter().fold(0usize, |acc, &i| acc * dim + i) * dim + out
}

/// Splits a flat coordinate into `(inputs, output)`.
pub fn decode_index(dim: usize, degree: usize, mut idx: usize) -> (Vec<usize>, usize) {
    let out = idx % dim;
    idx /= dim;
    let mut inputs = vec![0usize; degree];
    for slot in inputs.iter_mut().rev() {
        *slot = idx % dim;
        idx /= dim;
    }
    (inputs, out)
}

/// Iterates over all `degree`-tuples of basis indices in lexicographic order.
pub fn basis_tuples(dim: usize, degree: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = dim.pow(degree as u32);
    (0..total).map(move |mut t| {
        let mut v = vec![0usize; degree];
        for slot in v.iter_mut().rev() {
            *slot = t % dim;
            t /= dim;
        }
        v
    })
}

/// A Hochschild cochain `A^{⊗n} -> A`, stored on the basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cochain {
    degree: usize,
    dim: usize,
    coeffs: SparseVec,
}

impl Cochain {
    pub fn zero(dim: usize, degree: usize) -> Self {
        Cochain {
            degree,
            dim,
            coeffs: Vec::new(),
        }
    }

    /// Coefficients indexed by flat coordinates; duplicates are summed.
    pub fn from_sparse(dim: usize, degree: usize, coeffs: Vec<(usize, Scalar)>) -> Self {
        let coeffs = normalize_sparse(coeffs);
        debug_assert!(coeffs.last().map_or(true, |(i, _)| (*i as u64) < saturating_pow(dim, degree + 1)));
        Cochain { degree, dim, coeffs }
    }

    pub fn from_dense(dim: usize, degree: usize, coeffs: &[Scalar]) -> Self {
        Cochain {
            degree,
            dim,
            coeffs: exact_linalg::sparsify(coeffs),
        }
    }

    /// Builds a cochain from its values on basis tuples.
    pub fn from_fn(dim: usize, degree: usize, mut f: impl FnMut(&[usize]) -> AlgElem) -> Self {
        let mut coeffs = Vec::new();
        for t in basis_tuples(dim, degree) {
            let v = f(&t);
            for (k, x) in v.support() {
                coeffs.push((flat_index(dim, &t, k), x.clone()));
            }
        }
        Cochain { degree, dim, coeffs }
    }

    /// The degree-0 cochain given by an element.
    pub fn element(x: &AlgElem) -> Self {
        Cochain::from_dense(x.dim(), 0, x.coeffs())
    }

    pub fn identity(alg: &FiniteDimAlgebra) -> Self {
        let n = alg.dim();
        Cochain::from_sparse(n, 1, (0..n).map(|i| (flat_index(n, &[i], i), q(1))).collect())
    }

    /// The multiplication map `(a, b) -> ab`.
    pub fn product_map(alg: &FiniteDimAlgebra) -> Self {
        let n = alg.dim();
        Cochain::from_fn(n, 2, |t| AlgElem::from_sparse(n, alg.product_basis(t[0], t[1])))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Dimension of the ambient cochain space, `dim^{degree+1}`.
    pub fn space_dim(&self) -> usize {
        self.dim.pow(self.degree as u32 + 1)
    }

    pub fn coeffs(&self) -> &[(usize, Scalar)] {
        &self.coeffs
    }

    pub fn to_dense(&self) -> Vec<Scalar> {
        exact_linalg::densify(&self.coeffs, self.space_dim())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficient(&self, inputs: &[usize], out: usize) -> Scalar {
        let idx = flat_index(self.dim, inputs, out);
        match self.coeffs.binary_search_by_key(&idx, |(i, _)| *i) {
            Ok(k) => self.coeffs[k].1.clone(),
            Err(_) => Scalar::zero(),
        }
    }

    /// Value on a tuple of basis elements.
    pub fn eval_basis(&self, inputs: &[usize]) -> AlgElem {
        assert_eq!(inputs.len(), self.degree);
        let base = flat_index(self.dim, inputs, 0);
        let start = self.coeffs.partition_point(|(i, _)| *i < base);
        let mut out = AlgElem::zero(self.dim);
        for (i, x) in &self.coeffs[start..] {
            if *i >= base + self.dim {
                break;
            }
            out.0[i - base] = x.clone();
        }
        out
    }

    /// Multilinear evaluation on arbitrary elements.
    pub fn eval(&self, args: &[AlgElem]) -> AlgElem {
        assert_eq!(args.len(), self.degree);
        let mut out = AlgElem::zero(self.dim);
        for (idx, c) in &self.coeffs {
            let (inputs, k) = decode_index(self.dim, self.degree, *idx);
            let mut w = c.clone();
            for (a, &i) in args.iter().zip(&inputs) {
                if a.0[i].is_zero() {
                    w = Scalar::zero();
                    break;
                }
                w *= &a.0[i];
            }
            if !w.is_zero() {
                out.0[k] += w;
            }
        }
        out
    }

    pub fn add(&self, other: &Cochain) -> Cochain {
        self.add_scaled(other, &q(1))
    }

    pub fn sub(&self, other: &Cochain) -> Cochain {
        self.add_scaled(other, &q(-1))
    }

    pub fn add_scaled(&self, other: &Cochain, c: &Scalar) -> Cochain {
        assert_eq!((self.dim, self.degree), (other.dim, other.degree));
        let mut v = self.coeffs.clone();
        v.extend(other.coeffs.iter().map(|(i, x)| (*i, x * c)));
        Cochain::from_sparse(self.dim, self.degree, v)
    }

    pub fn scale(&self, c: &Scalar) -> Cochain {
        Cochain::from_sparse(self.dim, self.degree, self.coeffs.iter().map(|(i, x)| (*i, x * c)).collect())
    }

    /// Text form: a `degree n` header, then one line per nonzero value,
    /// `f(b_1,...,b_n) = c_1*b_k1 + c_2*b_k2 ...`, with basis labels.
    pub fn to_text(&self, alg: &FiniteDimAlgebra) -> String {
        let mut s = format!("degree {}\n", self.degree);
        let mut k = 0;
        while k < self.coeffs.len() {
            let (inputs, _) = decode_index(self.dim, self.degree, self.coeffs[k].0);
            let base = flat_index(self.dim, &inputs, 0);
            let mut terms = Vec::new();
            while k < self.coeffs.len() && self.coeffs[k].0 < base + self.dim {
                let (idx, x) = &self.coeffs[k];
                terms.push((idx - base, x.clone()));
                k += 1;
            }
            let args: Vec<&str> = inputs.iter().map(|&i| alg.label(i)).collect();
            let _ = write!(s, "f({}) = ", args.join(","));
            for (t, (out, x)) in terms.iter().enumerate() {
                let neg = *x < Scalar::zero();
                let mag = if neg { -x.clone() } else { x.clone() };
                match (t, neg) {
                    (0, true) => s.push('-'),
                    (0, false) => {}
                    (_, true) => s.push_str(" - "),
                    (_, false) => s.push_str(" + "),
                }
                let _ = write!(s, "{}*{}", mag, alg.label(*out));
            }
            s.push('\n');
        }
        s
    }

    pub fn from_text(alg: &FiniteDimAlgebra, text: &str) -> Result<Cochain, HochschildError> {
        let n = alg.dim();
        let labels: HashMap<&str, usize> = alg.labels().iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let lookup = |label: &str, line: usize| {
            labels.get(label).copied().ok_or_else(|| HochschildError::Parse {
                line,
                msg: format!("unknown basis label `{label}`"),
            })
        };
        let mut degree: Option<usize> = None;
        let mut coeffs = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            if let Some(d) = body.strip_prefix("degree") {
                let d = d.trim().parse().map_err(|_| HochschildError::Parse {
                    line,
                    msg: "bad degree".into(),
                })?;
                degree = Some(d);
                continue;
            }
            let d = degree.ok_or(HochschildError::Parse {
                line,
                msg: "missing `degree` header".into(),
            })?;
            let err = |msg: &str| HochschildError::Parse {
                line,
                msg: msg.to_string(),
            };
            let rest = body.strip_prefix("f(").ok_or_else(|| err("expected `f(`"))?;
            let (args, rhs) = rest.split_once(')').ok_or_else(|| err("expected `)`"))?;
            let rhs = rhs.trim().strip_prefix('=').ok_or_else(|| err("expected `=`"))?;
            let inputs: Vec<usize> = if args.trim().is_empty() {
                Vec::new()
            } else {
                args.split(',').map(|a| lookup(a.trim(), line)).collect::<Result<_, _>>()?
            };
            if inputs.len() != d {
                return Err(err("argument count does not match the degree"));
            }
            let mut negative = false;
            let mut expect_term = true;
            for tok in rhs.split_whitespace() {
                if expect_term && (tok == "+" || tok == "-") && tok.len() == 1 {
                    negative ^= tok == "-";
                    continue;
                }
                if !expect_term {
                    match tok {
                        "+" => negative = false,
                        "-" => negative = true,
                        _ => return Err(err("expected `+` or `-` between terms")),
                    }
                    expect_term = true;
                    continue;
                }
                let (mut tok, mut neg) = (tok, negative);
                if let Some(t) = tok.strip_prefix('-') {
                    tok = t;
                    neg = !neg;
                }
                let (c, label) = match tok.split_once('*') {
                    Some((c, l)) => match parse_scalar(c) {
                        Some(c) => (c, l),
                        None => (Scalar::one(), tok),
                    },
                    None => (Scalar::one(), tok),
                };
                let out = lookup(label, line)?;
                let c = if neg { -c } else { c };
                coeffs.push((flat_index(n, &inputs, out), c));
                expect_term = false;
                negative = false;
            }
        }
        let degree = degree.ok_or(HochschildError::Parse {
            line: 1,
            msg: "missing `degree` header".into(),
        })?;
        Ok(Cochain::from_sparse(n, degree, coeffs))
    }
}

/// Precomputed multiplication data used to assemble differentials.
struct ProductData {
    dim: usize,
    /// For each basis index `m`: all `(x, y, c)` with `c = [e_m](x y) != 0`.
    factorizations: Vec<Vec<(usize, usize, Scalar)>>,
    /// For each `k`: all `(a, o, c)` with `c = [e_o](a e_k)`.
    left_by_k: Vec<Vec<(usize, usize, Scalar)>>,
    /// For each `k`: all `(a, o, c)` with `c = [e_o](e_k a)`.
    right_by_k: Vec<Vec<(usize, usize, Scalar)>>,
}

impl ProductData {
    fn new(alg: &FiniteDimAlgebra) -> Self {
        let n = alg.dim();
        let mut factorizations = vec![Vec::new(); n];
        let mut left_by_k = vec![Vec::new(); n];
        let mut right_by_k = vec![Vec::new(); n];
        for x in 0..n {
            for y in 0..n {
                for (m, c) in alg.product_basis(x, y) {
                    factorizations[*m].push((x, y, c.clone()));
                    left_by_k[y].push((x, *m, c.clone()));
                    right_by_k[x].push((y, *m, c.clone()));
                }
            }
        }
        ProductData {
            dim: n,
            factorizations,
            left_by_k,
            right_by_k,
        }
    }

    /// Image under `b` of the basis cochain sending `inputs` to `e_k`.
    fn column(&self, inputs: &[usize], k: usize, out: &mut Vec<(usize, Scalar)>) {
        for j in 0..=inputs.len() + 1 {
            let sign = if j % 2 == 0 { q(1) } else { q(-1) };
            self.face_column(j, inputs, k, &sign, out);
        }
    }

    /// Image under the face `b_j` of the basis cochain `inputs -> e_k`, scaled by `scale`.
    fn face_column(&self, j: usize, inputs: &[usize], k: usize, scale: &Scalar, out: &mut Vec<(usize, Scalar)>) {
        let n = self.dim;
        let deg = inputs.len();
        let mut tuple = Vec::with_capacity(deg + 1);
        if j == 0 {
            // a_1 f(a_2, ...)
            for (a, o, c) in &self.left_by_k[k] {
                tuple.clear();
                tuple.push(*a);
                tuple.extend_from_slice(inputs);
                out.push((flat_index(n, &tuple, *o), scale * c));
            }
        } else if j <= deg {
            // f(..., a_j a_{j+1}, ...)
            let i = j - 1;
            for (x, y, c) in &self.factorizations[inputs[i]] {
                tuple.clear();
                tuple.extend_from_slice(&inputs[..i]);
                tuple.push(*x);
                tuple.push(*y);
                tuple.extend_from_slice(&inputs[i + 1..]);
                out.push((flat_index(n, &tuple, k), scale * c));
            }
        } else {
            // f(a_1, ..., a_n) a_{n+1}
            for (a, o, c) in &self.right_by_k[k] {
                tuple.clear();
                tuple.extend_from_slice(inputs);
                tuple.push(*a);
                out.push((flat_index(n, &tuple, *o), scale * c));
            }
        }
    }
}

/// The face `b_j: C^n -> C^{n+1}`, `0 <= j <= n+1`, so that
/// `b = Σ_j (-1)^j b_j`: `b_0` multiplies by the first argument on the left,
/// `b_j` for `1 <= j <= n` multiplies arguments `j` and `j+1`, and `b_{n+1}`
/// multiplies by the last argument on the right.
pub fn face(alg: &FiniteDimAlgebra, j: usize, f: &Cochain) -> Cochain {
    assert!(j <= f.degree() + 1, "face index out of range");
    let pd = ProductData::new(alg);
    let n = alg.dim();
    let mut out = Vec::new();
    for (idx, c) in &f.coeffs {
        let (inputs, k) = decode_index(n, f.degree, *idx);
        pd.face_column(j, &inputs, k, c, &mut out);
    }
    Cochain::from_sparse(n, f.degree + 1, out)
}

/// `b(f)`.
pub fn differential(alg: &FiniteDimAlgebra, f: &Cochain) -> Cochain {
    let pd = ProductData::new(alg);
    differential_with(&pd, f)
}

fn differential_with(pd: &ProductData, f: &Cochain) -> Cochain {
    let n = pd.dim;
    let mut out = Vec::new();
    let mut col = Vec::new();
    for (idx, c) in &f.coeffs {
        let (inputs, k) = decode_index(n, f.degree, *idx);
        col.clear();
        pd.column(&inputs, k, &mut col);
        out.extend(col.iter().map(|(i, x)| (*i, x * c)));
    }
    Cochain::from_sparse(n, f.degree + 1, out)
}

/// The matrix of `b: C^n -> C^{n+1}`, of size `dim^{n+2} x dim^{n+1}`.
pub fn differential_matrix(alg: &FiniteDimAlgebra, degree: usize) -> SparseMatrix {
    let pd = ProductData::new(alg);
    let n = alg.dim();
    let cols = n.pow(degree as u32 + 1);
    let rows = n.pow(degree as u32 + 2);
    let mut triplets = Vec::new();
    let mut col = Vec::new();
    for c in 0..cols {
        let (inputs, k) = decode_index(n, degree, c);
        col.clear();
        pd.column(&inputs, k, &mut col);
        triplets.extend(col.drain(..).map(|(r, x)| (r, c, x)));
    }
    SparseMatrix::from_triplets(rows, cols, triplets).expect("indices in range")
}

/// Rows of `b_{n-1}^T`, i.e. the images of the basis cochains of degree `n-1`.
fn coboundary_generators(alg: &FiniteDimAlgebra, degree: usize) -> Vec<SparseVec> {
    if degree == 0 {
        return Vec::new();
    }
    let pd = ProductData::new(alg);
    let n = alg.dim();
    let cols = n.pow(degree as u32);
    (0..cols)
        .map(|c| {
            let (inputs, k) = decode_index(n, degree - 1, c);
            let mut col = Vec::new();
            pd.column(&inputs, k, &mut col);
            normalize_sparse(col)
        })
        .collect()
}

/// A cohomology class with a normalized cocycle representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyClass {
    pub degree: usize,
    pub representative: Cochain,
    pub normalized: bool,
}

/// Relative cochains `Hom_{E-E}(r^{⊗_E n}, A)` of a quiver algebra.
///
/// A coordinate is a composable tuple of radical basis elements together with
/// an output basis element parallel to the tuple. In degree 0 the "tuple" is
/// a single vertex position.
#[derive(Clone, Debug)]
pub struct ReducedSpace {
    pub degree: usize,
    pub coords: Vec<(Vec<usize>, usize)>,
    index: HashMap<(Vec<usize>, usize), usize>,
}

impl ReducedSpace {
    pub fn new(alg: &FiniteDimAlgebra, degree: usize) -> Result<Self, HochschildError> {
        let qs = alg.quiver().ok_or(HochschildError::NotAQuiverAlgebra)?;
        let dim = alg.dim();
        let mut coords = Vec::new();
        if degree == 0 {
            for v in 0..qs.vertex_count() {
                for o in 0..dim {
                    if qs.source_position(o) == v && qs.target_position(o) == v {
                        coords.push((vec![v], o));
                    }
                }
            }
        } else {
            let radical: Vec<usize> = (0..dim).filter(|&b| qs.is_radical(b)).collect();
            let mut tuples: Vec<Vec<usize>> = radical.iter().map(|&r| vec![r]).collect();
            for _ in 1..degree {
                let mut next = Vec::new();
                for t in &tuples {
                    let last = *t.last().expect("nonempty");
                    for &r in &radical {
                        if qs.target_position(last) == qs.source_position(r) {
                            let mut u = t.clone();
                            u.push(r);
                            next.push(u);
                        }
                    }
                }
                tuples = next;
            }
            for t in tuples {
                let s = qs.source_position(t[0]);
                let e = qs.target_position(*t.last().expect("nonempty"));
                for o in 0..dim {
                    if qs.source_position(o) == s && qs.target_position(o) == e {
                        coords.push((t.clone(), o));
                    }
                }
            }
        }
        let index = coords.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        Ok(ReducedSpace { degree, coords, index })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    fn lookup(&self, tuple: &[usize], out: usize) -> Option<usize> {
        self.index.get(&(tuple.to_vec(), out)).copied()
    }

    /// Embeds a relative cochain into the full complex (zero on idempotents
    /// and on non-composable tuples).
    pub fn lift(&self, alg: &FiniteDimAlgebra, v: &[(usize, Scalar)]) -> Cochain {
        let n = alg.dim();
        let coeffs = v
            .iter()
            .map(|(i, x)| {
                let (t, o) = &self.coords[*i];
                let idx = if self.degree == 0 { *o } else { flat_index(n, t, *o) };
                (idx, x.clone())
            })
            .collect();
        Cochain::from_sparse(n, self.degree, coeffs)
    }

    /// Restricts a full cochain to the relative coordinates.
    pub fn restrict(&self, f: &Cochain) -> SparseVec {
        let n = f.dim();
        let mut out = Vec::new();
        for (i, (t, o)) in self.coords.iter().enumerate() {
            let c = if self.degree == 0 {
                f.coefficient(&[], *o)
            } else {
                f.coefficient(t, *o)
            };
            if !c.is_zero() {
                out.push((i, c));
            }
        }
        let _ = n;
        out
    }
}

/// Matrix of the relative differential `ReducedSpace(n) -> ReducedSpace(n+1)`.
pub fn reduced_differential_matrix(
    alg: &FiniteDimAlgebra,
    src: &ReducedSpace,
    dst: &ReducedSpace,
) -> Result<SparseMatrix, HochschildError> {
    let qs = alg.quiver().ok_or(HochschildError::NotAQuiverAlgebra)?;
    let n = src.degree;
    let mut triplets = Vec::new();
    for (row, (t, o)) in dst.coords.iter().enumerate() {
        if n == 0 {
            let r = t[0];
            let (s, e) = (qs.source_position(r), qs.target_position(r));
            // r f(p_e) - f(p_s) r
            for k in 0..alg.dim() {
                for (m, c) in alg.product_basis(r, k) {
                    if m == o {
                        if let Some(col) = src.lookup(&[e], k) {
                            triplets.push((row, col, c.clone()));
                        }
                    }
                }
                for (m, c) in alg.product_basis(k, r) {
                    if m == o {
                        if let Some(col) = src.lookup(&[s], k) {
                            triplets.push((row, col, -c.clone()));
                        }
                    }
                }
            }
            continue;
        }
        // a_1 f(a_2, ...)
        for k in 0..alg.dim() {
            for (m, c) in alg.product_basis(t[0], k) {
                if m == o {
                    if let Some(col) = src.lookup(&t[1..], k) {
                        triplets.push((row, col, c.clone()));
                    }
                }
            }
        }
        // f(..., a_i a_{i+1}, ...)
        for i in 0..n {
            let sign = if (i + 1) % 2 == 0 { q(1) } else { q(-1) };
            for (m, c) in alg.product_basis(t[i], t[i + 1]) {
                let mut u: Vec<usize> = t[..i].to_vec();
                u.push(*m);
                u.extend_from_slice(&t[i + 2..]);
                if let Some(col) = src.lookup(&u, *o) {
                    triplets.push((row, col, &sign * c));
                }
            }
        }
        // f(a_1, ..., a_n) a_{n+1}
        let sign = if (n + 1) % 2 == 0 { q(1) } else { q(-1) };
        for k in 0..alg.dim() {
            for (m, c) in alg.product_basis(k, t[n]) {
                if m == o {
                    if let Some(col) = src.lookup(&t[..n], k) {
                        triplets.push((row, col, &sign * c));
                    }
                }
            }
        }
    }
    Ok(SparseMatrix::from_triplets(dst.dim(), src.dim(), triplets).expect("indices in range"))
}

/// Hochschild cohomology computations for one algebra.
pub struct HochschildComplex<'a> {
    alg: &'a FiniteDimAlgebra,
    budget: u64,
    mode: ComplexMode,
}

impl<'a> HochschildComplex<'a> {
    pub fn new(alg: &'a FiniteDimAlgebra) -> Self {
        HochschildComplex {
            alg,
            budget: DEFAULT_BUDGET,
            mode: ComplexMode::Auto,
        }
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_mode(mut self, mode: ComplexMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn algebra(&self) -> &FiniteDimAlgebra {
        self.alg
    }

    fn check(&self, f: &Cochain) -> Result<(), HochschildError> {
        if f.dim() != self.alg.dim() {
            return Err(HochschildError::AlgebraMismatch {
                expected: self.alg.dim(),
                got: f.dim(),
            });
        }
        Ok(())
    }

    fn full_size(&self, degree: usize) -> u64 {
        saturating_pow(self.alg.dim(), degree + 2)
    }

    fn resolve_mode(&self, degree: usize) -> Result<ComplexMode, HochschildError> {
        let needed = self.full_size(degree);
        match self.mode {
            ComplexMode::Full if needed > self.budget => Err(HochschildError::BudgetExceeded {
                needed,
                limit: self.budget,
            }),
            ComplexMode::Full => Ok(ComplexMode::Full),
            ComplexMode::Reduced => Ok(ComplexMode::Reduced),
            ComplexMode::Auto if needed <= self.budget => Ok(ComplexMode::Full),
            ComplexMode::Auto if self.alg.quiver().is_some() => Ok(ComplexMode::Reduced),
            ComplexMode::Auto => Err(HochschildError::BudgetExceeded {
                needed,
                limit: self.budget,
            }),
        }
    }

    fn guarded(&self, degree: usize) -> Result<(), HochschildError> {
        let needed = self.full_size(degree);
        if needed > self.budget {
            return Err(HochschildError::BudgetExceeded {
                needed,
                limit: self.budget,
            });
        }
        Ok(())
    }

    pub fn differential(&self, f: &Cochain) -> Result<Cochain, HochschildError> {
        self.check(f)?;
        Ok(differential(self.alg, f))
    }

    pub fn is_cocycle(&self, f: &Cochain) -> Result<bool, HochschildError> {
        self.check(f)?;
        Ok(differential(self.alg, f).is_zero())
    }

    /// Some `v` with `b(v) = f`, or `None` if `f` is not a coboundary.
    pub fn coboundary_preimage(&self, f: &Cochain) -> Result<Option<Cochain>, HochschildError> {
        self.check(f)?;
        if f.degree() == 0 {
            return Err(HochschildError::DegreeMismatch { expected: 1, got: 0 });
        }
        self.guarded(f.degree() - 1)?;
        let m = differential_matrix(self.alg, f.degree() - 1);
        let b = f.to_dense();
        let x = exact_linalg::solve(&m, &b).expect("dimensions agree");
        Ok(x.map(|x| Cochain::from_dense(self.alg.dim(), f.degree() - 1, &x)))
    }

    pub fn is_coboundary(&self, f: &Cochain) -> Result<bool, HochschildError> {
        if f.degree() == 0 {
            self.check(f)?;
            return Ok(f.is_zero());
        }
        Ok(self.coboundary_preimage(f)?.is_some())
    }

    /// `dim ker b_n - dim im b_{n-1}`.
    pub fn hh_dimension(&self, degree: usize) -> Result<usize, HochschildError> {
        match self.resolve_mode(degree)? {
            ComplexMode::Reduced => self.hh_dimension_reduced(degree),
            _ => self.hh_dimension_full(degree),
        }
    }

    pub fn hh_dimension_full(&self, degree: usize) -> Result<usize, HochschildError> {
        self.guarded(degree)?;
        let n = self.alg.dim();
        let space = n.pow(degree as u32 + 1);
        let kernel = space - exact_linalg::rank(&differential_matrix(self.alg, degree));
        let image = if degree == 0 {
            0
        } else {
            exact_linalg::rank(&differential_matrix(self.alg, degree - 1))
        };
        Ok(kernel - image)
    }

    /// Dimension of the relative cochain space in degree `n`.
    pub fn reduced_complex_dimension(&self, degree: usize) -> Result<usize, HochschildError> {
        Ok(ReducedSpace::new(self.alg, degree)?.dim())
    }

    fn reduced_guard(&self, space: &ReducedSpace) -> Result<(), HochschildError> {
        if space.dim() as u64 > self.budget {
            return Err(HochschildError::BudgetExceeded {
                needed: space.dim() as u64,
                limit: self.budget,
            });
        }
        Ok(())
    }

    pub fn hh_dimension_reduced(&self, degree: usize) -> Result<usize, HochschildError> {
        let here = ReducedSpace::new(self.alg, degree)?;
        let next = ReducedSpace::new(self.alg, degree + 1)?;
        self.reduced_guard(&next)?;
        let kernel = here.dim() - exact_linalg::rank(&reduced_differential_matrix(self.alg, &here, &next)?);
        let image = if degree == 0 {
            0
        } else {
            let prev = ReducedSpace::new(self.alg, degree - 1)?;
            exact_linalg::rank(&reduced_differential_matrix(self.alg, &prev, &here)?)
        };
        Ok(kernel - image)
    }

    /// Cocycle representatives of a basis of `HH^n`.
    ///
    /// Representatives are normalized: they vanish on the pivot coordinates of
    /// the coboundary space and form the reduced echelon basis of the induced
    /// complement, so the output does not depend on intermediate choices.
    pub fn hh_basis(&self, degree: usize) -> Result<Vec<CohomologyClass>, HochschildError> {
        let (reps, mode) = match self.resolve_mode(degree)? {
            ComplexMode::Reduced => {
                let here = ReducedSpace::new(self.alg, degree)?;
                let next = ReducedSpace::new(self.alg, degree + 1)?;
                self.reduced_guard(&next)?;
                let z = exact_linalg::kernel_basis_sparse(&reduced_differential_matrix(self.alg, &here, &next)?);
                let b = if degree == 0 {
                    Vec::new()
                } else {
                    let prev = ReducedSpace::new(self.alg, degree - 1)?;
                    reduced_differential_matrix(self.alg, &prev, &here)?.transpose().row_vecs().to_vec()
                };
                let reps = normalized_complement(here.dim(), &b, &z);
                (reps.iter().map(|v| here.lift(self.alg, v)).collect::<Vec<_>>(), ComplexMode::Reduced)
            }
            _ => {
                self.guarded(degree)?;
                let n = self.alg.dim();
                let z = exact_linalg::kernel_basis_sparse(&differential_matrix(self.alg, degree));
                let b = coboundary_generators(self.alg, degree);
                let reps = normalized_complement(n.pow(degree as u32 + 1), &b, &z);
                (
                    reps.into_iter().map(|v| Cochain::from_sparse(n, degree, v)).collect(),
                    ComplexMode::Full,
                )
            }
        };
        let _ = mode;
        Ok(reps
            .into_iter()
            .map(|representative| CohomologyClass {
                degree,
                representative,
                normalized: true,
            })
            .collect())
    }

    /// Kernel basis of `b_n` on the full complex.
    pub fn cocycle_basis(&self, degree: usize) -> Result<Vec<Cochain>, HochschildError> {
        self.guarded(degree)?;
        let n = self.alg.dim();
        Ok(exact_linalg::kernel_basis_sparse(&differential_matrix(self.alg, degree))
            .into_iter()
            .map(|v| Cochain::from_sparse(n, degree, v))
            .collect())
    }

    /// Rank of a family of cocycles modulo coboundaries.
    pub fn rank_modulo_coboundaries(&self, cocycles: &[Cochain]) -> Result<usize, HochschildError> {
        let Some(first) = cocycles.first() else { return Ok(0) };
        let degree = first.degree();
        if degree > 0 {
            self.guarded(degree - 1)?;
        }
        let space = first.space_dim();
        let mut ech = RowEchelon::new(space);
        for b in coboundary_generators(self.alg, degree) {
            ech.insert(b);
        }
        let base = ech.rank();
        for c in cocycles {
            ech.insert(c.coeffs().to_vec());
        }
        Ok(ech.rank() - base)
    }
}

/// Reduced echelon basis of `(Z + B) / B` in normal form with respect to `B`.
fn normalized_complement(space: usize, coboundaries: &[SparseVec], cocycles: &[SparseVec]) -> Vec<SparseVec> {
    let mut ech_b = RowEchelon::new(space);
    for b in coboundaries {
        ech_b.insert(b.clone());
    }
    let mut ech_z = RowEchelon::new(space);
    for z in cocycles {
        let r = ech_b.reduce(z);
        if !r.is_empty() {
            ech_z.insert(r);
        }
    }
    ech_z
        .reduced_rows()
        .into_iter()
        .map(|row| {
            let r = ech_b.reduce(&row);
            debug_assert!(r.iter().all(|(_, x)| !x.is_zero()));
            r
        })
        .collect()
}

/// Evaluates `b(f)` on a single tuple of elements directly from the formula.
pub fn differential_at(alg: &FiniteDimAlgebra, f: &Cochain, args: &[AlgElem]) -> AlgElem {
    let n = f.degree();
    assert_eq!(args.len(), n + 1);
    let mut out = alg.mul(&args[0], &f.eval(&args[1..]));
    for i in 0..n {
        let mut inner: Vec<AlgElem> = args[..i].to_vec();
        inner.push(alg.mul(&args[i], &args[i + 1]));
        inner.extend_from_slice(&args[i + 2..]);
        let term = f.eval(&inner);
        let sign = if (i + 1) % 2 == 0 { q(1) } else { q(-1) };
        out.add_assign_scaled(&term, &sign);
    }
    let last = alg.mul(&f.eval(&args[..n]), &args[n]);
    let sign = if (n + 1) % 2 == 0 { q(1) } else { q(-1) };
    out.add_assign_scaled(&last, &sign);
    out
}

/// Several cochains in one text, each introduced by a `# class k` comment.
pub fn cochains_to_text(alg: &FiniteDimAlgebra, fs: &[Cochain]) -> String {
    let mut s = String::new();
    for (k, f) in fs.iter().enumerate() {
        let _ = writeln!(s, "# class {}", k + 1);
        s.push_str(&f.to_text(alg));
    }
    s
}

/// Inverse of [`cochains_to_text`]: every `degree` header starts a new cochain.
pub fn cochains_from_text(alg: &FiniteDimAlgebra, text: &str) -> Result<Vec<Cochain>, HochschildError> {
    let mut blocks: Vec<(usize, String)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.starts_with("degree") || blocks.is_empty() {
            blocks.push((lineno, String::new()));
        }
        let block = &mut blocks.last_mut().expect("nonempty").1;
        block.push_str(raw);
        block.push('\n');
    }
    blocks
        .into_iter()
        .filter(|(_, b)| b.lines().any(|l| !l.split('#').next().unwrap_or("").trim().is_empty()))
        .map(|(offset, b)| {
            Cochain::from_text(alg, &b).map_err(|e| match e {
                HochschildError::Parse { line, msg } => HochschildError::Parse { line: line + offset, msg },
                other => other,
            })
        })
        .collect()
}
