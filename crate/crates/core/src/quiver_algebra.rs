//! Path algebras `kQ/I` of acyclic quivers and general finite-dimensional
//! algebras given by structure constants.
//!
//! Products compose left to right: for arrows `a: 1 -> 2` and `b: 2 -> 3`
//! the product `a * b` is the path `1 -> 3`, and `p1 * a = a = a * p2`.
//! Consequently a path from vertex `s` to vertex `t` lies in `p_s A p_t`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact_linalg::{parse_scalar, q, RowEchelon, Scalar, SparseVec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("duplicate arrow label `{label}` at line {line}")]
    DuplicateLabel { label: String, line: usize },
    #[error("vertex {vertex} at line {line} is out of range 1..={count}")]
    DanglingVertex { vertex: usize, count: usize, line: usize },
    #[error("unknown arrow `{label}` at line {line}")]
    UnknownArrow { label: String, line: usize },
    #[error("relation at line {line} is not admissible: {msg}")]
    NonAdmissible { line: usize, msg: String },
    #[error("quiver has an oriented cycle through vertex {vertex}")]
    CyclicQuiver { vertex: usize },
    #[error("the algebra is not associative on basis triple ({0}, {1}, {2})")]
    NotAssociative(String, String, String),
    #[error("the proposed unit is not a two-sided unit")]
    BadUnit,
    #[error("operation needs a quiver algebra")]
    NotAQuiverAlgebra,
    #[error("element of dimension {got} used with an algebra of dimension {expected}")]
    MismatchedAlgebra { expected: usize, got: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub label: String,
    pub source: usize,
    pub target: usize,
}

/// A finite quiver with vertices `0..vertex_count`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertex_count: usize,
    arrows: Vec<Arrow>,
}

impl Quiver {
    /// Builds a quiver, rejecting out-of-range endpoints, repeated labels and
    /// oriented cycles.
    pub fn new(vertex_count: usize, arrows: Vec<Arrow>) -> Result<Self, QuiverError> {
        let mut seen = HashMap::new();
        for (k, a) in arrows.iter().enumerate() {
            for v in [a.source, a.target] {
                if v >= vertex_count {
                    return Err(QuiverError::DanglingVertex {
                        vertex: v + 1,
                        count: vertex_count,
                        line: 0,
                    });
                }
            }
            if seen.insert(a.label.clone(), k).is_some() {
                return Err(QuiverError::DuplicateLabel {
                    label: a.label.clone(),
                    line: 0,
                });
            }
        }
        let q = Quiver { vertex_count, arrows };
        q.check_acyclic()?;
        Ok(q)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow_index(&self, label: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.label == label)
    }

    fn check_acyclic(&self) -> Result<(), QuiverError> {
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut state = vec![0u8; self.vertex_count];
        fn visit(q: &Quiver, v: usize, state: &mut [u8]) -> Result<(), QuiverError> {
            state[v] = 1;
            for a in q.arrows.iter().filter(|a| a.source == v) {
                match state[a.target] {
                    1 => return Err(QuiverError::CyclicQuiver { vertex: a.target + 1 }),
                    0 => visit(q, a.target, state)?,
                    _ => {}
                }
            }
            state[v] = 2;
            Ok(())
        }
        for v in 0..self.vertex_count {
            if state[v] == 0 {
                visit(self, v, &mut state)?;
            }
        }
        Ok(())
    }

    /// All paths, trivial ones included. Finite because the quiver is acyclic.
    pub fn all_paths(&self) -> Vec<Path> {
        let mut out: Vec<Path> = (0..self.vertex_count).map(Path::trivial).collect();
        let mut frontier: Vec<Path> = out.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for p in &frontier {
                for (k, a) in self.arrows.iter().enumerate() {
                    if a.source == p.target {
                        let mut arrows = p.arrows.clone();
                        arrows.push(k);
                        next.push(Path {
                            source: p.source,
                            target: a.target,
                            arrows,
                        });
                    }
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out.sort_by(|a, b| a.deglex_key().cmp(&b.deglex_key()));
        out
    }

    /// Vertices ordered so that no path runs from an earlier position to a
    /// later one: each step takes the smallest-indexed remaining sink.
    pub fn exceptional_order(&self) -> Vec<usize> {
        let mut remaining: Vec<bool> = vec![true; self.vertex_count];
        let mut order = Vec::with_capacity(self.vertex_count);
        while order.len() < self.vertex_count {
            let v = (0..self.vertex_count)
                .find(|&v| {
                    remaining[v]
                        && !self
                            .arrows
                            .iter()
                            .any(|a| a.source == v && remaining[a.target])
                })
                .expect("acyclic quivers always have a sink");
            remaining[v] = false;
            order.push(v);
        }
        order
    }
}

/// A path; `arrows` is empty for the trivial path at `source == target`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub source: usize,
    pub target: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(v: usize) -> Self {
        Path {
            source: v,
            target: v,
            arrows: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    fn deglex_key(&self) -> (usize, Vec<usize>, usize, usize) {
        (self.arrows.len(), self.arrows.clone(), self.source, self.target)
    }

    /// `self` followed by `other`, if composable.
    pub fn compose(&self, other: &Path) -> Option<Path> {
        if self.target != other.source {
            return None;
        }
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&other.arrows);
        Some(Path {
            source: self.source,
            target: other.target,
            arrows,
        })
    }

    pub fn label(&self, quiver: &Quiver) -> String {
        if self.arrows.is_empty() {
            format!("p{}", self.source + 1)
        } else {
            self.arrows
                .iter()
                .map(|&a| quiver.arrows[a].label.as_str())
                .collect::<Vec<_>>()
                .join("*")
        }
    }
}

/// A rational combination of parallel paths of length at least two.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub terms: Vec<(Scalar, Path)>,
}

impl Relation {
    pub fn new(terms: Vec<(Scalar, Path)>) -> Result<Self, QuiverError> {
        let mut merged: BTreeMap<Path, Scalar> = BTreeMap::new();
        for (c, p) in terms {
            *merged.entry(p).or_insert_with(Scalar::zero) += c;
        }
        merged.retain(|_, c| !c.is_zero());
        let terms: Vec<(Scalar, Path)> = merged.into_iter().map(|(p, c)| (c, p)).collect();
        if let Some((_, first)) = terms.first() {
            for (_, p) in &terms {
                if p.len() < 2 {
                    return Err(QuiverError::NonAdmissible {
                        line: 0,
                        msg: "relation contains a path of length < 2".into(),
                    });
                }
                if p.source != first.source || p.target != first.target {
                    return Err(QuiverError::NonAdmissible {
                        line: 0,
                        msg: "relation terms are not parallel".into(),
                    });
                }
            }
        }
        Ok(Relation { terms })
    }
}

/// Parses the line-oriented quiver format:
///
/// ```text
/// # comment
/// vertices 3
/// arrow a 1 2
/// arrow b 2 3
/// rel a*b
/// rel x0*y1 - x1*y0
/// ```
pub fn parse_quiver(text: &str) -> Result<(Quiver, Vec<Relation>), QuiverError> {
    let mut vertex_count: Option<usize> = None;
    let mut arrows: Vec<Arrow> = Vec::new();
    let mut rel_lines: Vec<(usize, usize, &str)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let indent = content.len() - trimmed.len();
        let (keyword, rest) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed, ""));
        let rest_col = indent + keyword.len() + 2;
        let syntax = |col: usize, msg: &str| QuiverError::Syntax {
            line,
            col,
            msg: msg.to_string(),
        };
        match keyword {
            "vertices" => {
                if vertex_count.is_some() {
                    return Err(syntax(indent + 1, "`vertices` given twice"));
                }
                let n: usize = rest
                    .trim()
                    .parse()
                    .map_err(|_| syntax(rest_col, "expected a vertex count"))?;
                vertex_count = Some(n);
            }
            "arrow" => {
                let n = vertex_count.ok_or_else(|| syntax(indent + 1, "`arrow` before `vertices`"))?;
                let fields: Vec<&str> = rest.split_whitespace().collect();
                if fields.len() != 3 {
                    return Err(syntax(rest_col, "expected `arrow <label> <src> <tgt>`"));
                }
                let label = fields[0];
                if !is_valid_label(label) {
                    return Err(syntax(rest_col, &format!("invalid arrow label `{label}`")));
                }
                if arrows.iter().any(|a| a.label == label) {
                    return Err(QuiverError::DuplicateLabel {
                        label: label.to_string(),
                        line,
                    });
                }
                let mut ends = [0usize; 2];
                for (k, f) in fields[1..].iter().enumerate() {
                    let v: usize = f
                        .parse()
                        .map_err(|_| syntax(rest_col, &format!("expected a vertex index, got `{f}`")))?;
                    if v == 0 || v > n {
                        return Err(QuiverError::DanglingVertex {
                            vertex: v,
                            count: n,
                            line,
                        });
                    }
                    ends[k] = v - 1;
                }
                arrows.push(Arrow {
                    label: label.to_string(),
                    source: ends[0],
                    target: ends[1],
                });
            }
            "rel" => rel_lines.push((line, rest_col, rest)),
            other => return Err(syntax(indent + 1, &format!("unknown keyword `{other}`"))),
        }
    }
    let n = vertex_count.ok_or(QuiverError::Syntax {
        line: 1,
        col: 1,
        msg: "missing `vertices` line".into(),
    })?;
    let quiver = Quiver::new(n, arrows)?;
    let mut relations = Vec::new();
    for (line, col, body) in rel_lines {
        let terms = parse_relation_terms(&quiver, body, line, col)?;
        let rel = Relation::new(terms).map_err(|e| match e {
            QuiverError::NonAdmissible { msg, .. } => QuiverError::NonAdmissible { line, msg },
            other => other,
        })?;
        if !rel.terms.is_empty() {
            relations.push(rel);
        }
    }
    Ok((quiver, relations))
}

fn is_valid_label(s: &str) -> bool {
    let mut chars = s.chars();
    let Some(first) = chars.next() else { return false };
    if !(first.is_ascii_alphabetic() || first == '_') {
        return false;
    }
    if !chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'') {
        return false;
    }
    // `p<digits>` is reserved for trivial paths.
    !(s.len() > 1 && s.starts_with('p') && s[1..].chars().all(|c| c.is_ascii_digit()))
}

fn parse_relation_terms(
    quiver: &Quiver,
    body: &str,
    line: usize,
    col0: usize,
) -> Result<Vec<(Scalar, Path)>, QuiverError> {
    // Split into signed terms, remembering column offsets.
    let mut terms: Vec<(bool, usize, String)> = Vec::new();
    let mut negative = false;
    let mut current = String::new();
    let mut current_col = col0;
    for (k, ch) in body.chars().enumerate() {
        if ch == '+' || ch == '-' {
            let head = current.trim_end();
            if head.is_empty() {
                if ch == '-' {
                    negative = !negative;
                }
                continue;
            }
            if !head.ends_with('*') && !head.ends_with('/') {
                terms.push((negative, current_col, std::mem::take(&mut current)));
                negative = ch == '-';
                continue;
            }
        }
        if current.trim().is_empty() && !ch.is_whitespace() {
            current_col = col0 + k;
        }
        current.push(ch);
    }
    if current.trim().is_empty() {
        return Err(QuiverError::Syntax {
            line,
            col: col0 + body.chars().count(),
            msg: "expected a term".into(),
        });
    }
    terms.push((negative, current_col, current));

    let mut out = Vec::new();
    for (neg, col, text) in terms {
        let factors: Vec<&str> = text.split('*').map(str::trim).collect();
        let mut coeff = Scalar::one();
        let mut labels: &[&str] = &factors;
        if let Some(c) = parse_scalar(factors[0]) {
            coeff = c;
            labels = &factors[1..];
        }
        if labels.is_empty() {
            return Err(QuiverError::Syntax {
                line,
                col,
                msg: format!("term `{}` has no path", text.trim()),
            });
        }
        let mut path: Option<Path> = None;
        for lab in labels {
            if lab.is_empty() {
                return Err(QuiverError::Syntax {
                    line,
                    col,
                    msg: "empty factor".into(),
                });
            }
            let a = quiver.arrow_index(lab).ok_or_else(|| QuiverError::UnknownArrow {
                label: lab.to_string(),
                line,
            })?;
            let arrow = &quiver.arrows[a];
            let step = Path {
                source: arrow.source,
                target: arrow.target,
                arrows: vec![a],
            };
            path = Some(match path {
                None => step,
                Some(p) => p.compose(&step).ok_or_else(|| QuiverError::NonAdmissible {
                    line,
                    msg: format!("`{}` is not a composable path", text.trim()),
                })?,
            });
        }
        if neg {
            coeff = -coeff;
        }
        out.push((coeff, path.expect("at least one label")));
    }
    Ok(out)
}

/// An element of a finite-dimensional algebra as a coefficient vector over its basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AlgElem(pub Vec<Scalar>);

impl AlgElem {
    pub fn zero(dim: usize) -> Self {
        AlgElem(vec![Scalar::zero(); dim])
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = vec![Scalar::zero(); dim];
        v[i] = Scalar::one();
        AlgElem(v)
    }

    pub fn from_sparse(dim: usize, v: &[(usize, Scalar)]) -> Self {
        let mut out = Self::zero(dim);
        for (i, x) in v {
            out.0[*i] += x;
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.0
    }

    pub fn support(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.0.iter().enumerate().filter(|(_, x)| !x.is_zero())
    }

    pub fn to_sparse(&self) -> SparseVec {
        self.support().map(|(i, x)| (i, x.clone())).collect()
    }

    pub fn add(&self, other: &AlgElem) -> AlgElem {
        AlgElem(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &AlgElem) -> AlgElem {
        AlgElem(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, c: &Scalar) -> AlgElem {
        AlgElem(self.0.iter().map(|a| a * c).collect())
    }

    pub fn neg(&self) -> AlgElem {
        AlgElem(self.0.iter().map(|a| -a).collect())
    }

    pub fn add_assign_scaled(&mut self, other: &AlgElem, c: &Scalar) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            if !b.is_zero() {
                *a += b * c;
            }
        }
    }
}

impl fmt::Debug for AlgElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgElem[")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

/// Quiver bookkeeping attached to a path algebra.
#[derive(Clone, Debug)]
pub struct QuiverStructure {
    pub quiver: Quiver,
    pub relations: Vec<Relation>,
    /// Path representative for every basis element.
    pub basis_paths: Vec<Path>,
    /// Vertex at each exceptional position.
    pub exceptional_order: Vec<usize>,
    /// Exceptional position of each vertex.
    pub position_of_vertex: Vec<usize>,
    /// Basis index of the idempotent at each exceptional position.
    pub idempotent_index: Vec<usize>,
}

impl QuiverStructure {
    pub fn vertex_count(&self) -> usize {
        self.exceptional_order.len()
    }

    /// Exceptional position of the source of basis element `b`.
    pub fn source_position(&self, b: usize) -> usize {
        self.position_of_vertex[self.basis_paths[b].source]
    }

    pub fn target_position(&self, b: usize) -> usize {
        self.position_of_vertex[self.basis_paths[b].target]
    }

    pub fn is_radical(&self, b: usize) -> bool {
        !self.basis_paths[b].is_trivial()
    }
}

/// A finite-dimensional associative unital algebra over `Q` with a fixed basis.
#[derive(Clone, Debug)]
pub struct FiniteDimAlgebra {
    labels: Vec<String>,
    table: Vec<Vec<SparseVec>>,
    unit: AlgElem,
    quiver: Option<QuiverStructure>,
}

impl FiniteDimAlgebra {
    /// Builds an algebra from a multiplication table `table[i][j] = b_i b_j`,
    /// checking associativity on all basis triples and the unit.
    pub fn from_table(labels: Vec<String>, table: Vec<Vec<SparseVec>>, unit: AlgElem) -> Result<Self, QuiverError> {
        let alg = FiniteDimAlgebra {
            labels,
            table,
            unit,
            quiver: None,
        };
        alg.validate()?;
        Ok(alg)
    }

    fn validate(&self) -> Result<(), QuiverError> {
        let n = self.dim();
        if let Some((i, j, k)) = self.associativity_failure() {
            return Err(QuiverError::NotAssociative(
                self.labels[i].clone(),
                self.labels[j].clone(),
                self.labels[k].clone(),
            ));
        }
        for i in 0..n {
            let e = AlgElem::basis(n, i);
            if self.mul(&self.unit, &e) != e || self.mul(&e, &self.unit) != e {
                return Err(QuiverError::BadUnit);
            }
        }
        Ok(())
    }

    /// First basis triple on which `(xy)z != x(yz)`, if any.
    pub fn associativity_failure(&self) -> Option<(usize, usize, usize)> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                let ij = AlgElem::from_sparse(n, &self.table[i][j]);
                for k in 0..n {
                    let left = self.mul(&ij, &AlgElem::basis(n, k));
                    let jk = AlgElem::from_sparse(n, &self.table[j][k]);
                    let right = self.mul(&AlgElem::basis(n, i), &jk);
                    if left != right {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    /// The ground field `k`.
    pub fn ground_field() -> Self {
        FiniteDimAlgebra {
            labels: vec!["1".into()],
            table: vec![vec![vec![(0, q(1))]]],
            unit: AlgElem::basis(1, 0),
            quiver: None,
        }
    }

    /// `k[x]/(x^m)` with basis `1, x, ..., x^(m-1)`.
    pub fn truncated_polynomial(m: usize) -> Self {
        assert!(m >= 1);
        let labels = (0..m)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            })
            .collect();
        let table = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| if i + j < m { vec![(i + j, q(1))] } else { Vec::new() })
                    .collect()
            })
            .collect();
        FiniteDimAlgebra {
            labels,
            table,
            unit: AlgElem::basis(m, 0),
            quiver: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn basis_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// `b_i b_j` as a sparse vector.
    pub fn product_basis(&self, i: usize, j: usize) -> &SparseVec {
        &self.table[i][j]
    }

    pub fn unit(&self) -> &AlgElem {
        &self.unit
    }

    pub fn quiver(&self) -> Option<&QuiverStructure> {
        self.quiver.as_ref()
    }

    pub fn basis_elem(&self, i: usize) -> AlgElem {
        AlgElem::basis(self.dim(), i)
    }

    /// Bilinear product; panics on mismatched dimensions (see [`Self::multiply`]).
    pub fn mul(&self, x: &AlgElem, y: &AlgElem) -> AlgElem {
        let n = self.dim();
        let mut out = AlgElem::zero(n);
        for (i, a) in x.support() {
            for (j, b) in y.support() {
                let ab = a * b;
                for (k, c) in &self.table[i][j] {
                    out.0[*k] += &ab * c;
                }
            }
        }
        out
    }

    pub fn multiply(&self, x: &AlgElem, y: &AlgElem) -> Result<AlgElem, QuiverError> {
        for e in [x, y] {
            if e.dim() != self.dim() {
                return Err(QuiverError::MismatchedAlgebra {
                    expected: self.dim(),
                    got: e.dim(),
                });
            }
        }
        Ok(self.mul(x, y))
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| self.table[i][j] == self.table[j][i]))
    }

    /// Vertex idempotents in exceptional order.
    pub fn vertex_idempotents(&self) -> Result<Vec<AlgElem>, QuiverError> {
        let qs = self.quiver.as_ref().ok_or(QuiverError::NotAQuiverAlgebra)?;
        Ok(qs.idempotent_index.iter().map(|&b| self.basis_elem(b)).collect())
    }

    /// `dim p_j A p_i = dim Hom_A(p_i A, p_j A)` for exceptional positions `i, j`.
    pub fn hom_dimension(&self, i: usize, j: usize) -> Result<usize, QuiverError> {
        let qs = self.quiver.as_ref().ok_or(QuiverError::NotAQuiverAlgebra)?;
        Ok((0..self.dim())
            .filter(|&b| qs.source_position(b) == j && qs.target_position(b) == i)
            .count())
    }

    /// Writes an element as `c1*label1 + c2*label2 ...`, or `0`.
    pub fn format_elem(&self, x: &AlgElem) -> String {
        let mut s = String::new();
        for (i, c) in x.support() {
            let neg = c < &Scalar::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            match (s.is_empty(), neg) {
                (true, true) => s.push('-'),
                (true, false) => {}
                (false, true) => s.push_str(" - "),
                (false, false) => s.push_str(" + "),
            }
            if mag.is_one() {
                s.push_str(&self.labels[i]);
            } else {
                s.push_str(&format!("{mag}*{}", self.labels[i]));
            }
        }
        if s.is_empty() {
            s.push('0');
        }
        s
    }

    /// `p_i x p_j` for exceptional positions `i, j`: the part of `x` on basis
    /// paths from vertex `i` to vertex `j`.
    pub fn block(&self, x: &AlgElem, i: usize, j: usize) -> AlgElem {
        let qs = self.quiver.as_ref().expect("quiver algebra");
        let mut out = AlgElem::zero(self.dim());
        for (b, c) in x.support() {
            if qs.source_position(b) == i && qs.target_position(b) == j {
                out.0[b] = c.clone();
            }
        }
        out
    }

    /// Basis indices of `p_i A p_j`.
    pub fn block_basis(&self, i: usize, j: usize) -> Vec<usize> {
        let qs = self.quiver.as_ref().expect("quiver algebra");
        (0..self.dim())
            .filter(|&b| qs.source_position(b) == i && qs.target_position(b) == j)
            .collect()
    }
}

/// Builds `kQ/I`. The basis consists of the vertex idempotents in exceptional
/// order followed by the standard (irreducible) paths in degree-lexicographic order.
pub fn build_algebra(quiver: &Quiver, relations: &[Relation]) -> Result<FiniteDimAlgebra, QuiverError> {
    quiver.check_acyclic()?;
    for r in relations {
        Relation::new(r.terms.clone())?;
    }
    let paths = quiver.all_paths();
    let path_index: HashMap<Path, usize> = paths.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();

    // Ideal spanned by u * r * v. Larger paths get smaller pivot priority.
    let np = paths.len();
    let order: Vec<usize> = (0..np).map(|i| np - 1 - i).collect();
    let mut ideal = RowEchelon::with_order(order);
    for r in relations {
        let (s, t) = {
            let p = &r.terms[0].1;
            (p.source, p.target)
        };
        for u in paths.iter().filter(|u| u.target == s) {
            for v in paths.iter().filter(|v| v.source == t) {
                let row: Vec<(usize, Scalar)> = r
                    .terms
                    .iter()
                    .map(|(c, p)| {
                        let full = u.compose(p).and_then(|up| up.compose(v)).expect("composable");
                        (path_index[&full], c.clone())
                    })
                    .collect();
                ideal.insert(crate::exact_linalg::normalize_sparse(row));
            }
        }
    }
    let reduced = ideal.reduced_rows();
    let mut rewrite: HashMap<usize, SparseVec> = HashMap::new();
    for row in reduced {
        // The pivot is the largest path present.
        let lead = row.iter().map(|(c, _)| *c).max().expect("nonempty");
        let rest: SparseVec = row
            .into_iter()
            .filter(|(c, _)| *c != lead)
            .map(|(c, x)| (c, -x))
            .collect();
        rewrite.insert(lead, rest);
    }

    let exceptional_order = quiver.exceptional_order();
    let mut position_of_vertex = vec![0usize; quiver.vertex_count()];
    for (pos, &v) in exceptional_order.iter().enumerate() {
        position_of_vertex[v] = pos;
    }
    let mut basis_paths: Vec<Path> = exceptional_order.iter().map(|&v| Path::trivial(v)).collect();
    basis_paths.extend(
        paths
            .iter()
            .enumerate()
            .filter(|(i, p)| !p.is_trivial() && !rewrite.contains_key(i))
            .map(|(_, p)| p.clone()),
    );
    let basis_of_path: HashMap<usize, usize> = basis_paths
        .iter()
        .enumerate()
        .map(|(b, p)| (path_index[p], b))
        .collect();
    let normal_form = |p: &Path| -> SparseVec {
        let idx = path_index[p];
        match rewrite.get(&idx) {
            Some(rest) => {
                let v = rest.iter().map(|(c, x)| (basis_of_path[c], x.clone())).collect();
                crate::exact_linalg::normalize_sparse(v)
            }
            None => vec![(basis_of_path[&idx], q(1))],
        }
    };

    let dim = basis_paths.len();
    let table: Vec<Vec<SparseVec>> = basis_paths
        .iter()
        .map(|x| {
            basis_paths
                .iter()
                .map(|y| match x.compose(y) {
                    Some(xy) => normal_form(&xy),
                    None => Vec::new(),
                })
                .collect()
        })
        .collect();
    let labels = basis_paths.iter().map(|p| p.label(quiver)).collect();
    let mut unit = AlgElem::zero(dim);
    for pos in 0..quiver.vertex_count() {
        unit.0[pos] = q(1);
    }
    let idempotent_index = (0..quiver.vertex_count()).collect();
    Ok(FiniteDimAlgebra {
        labels,
        table,
        unit,
        quiver: Some(QuiverStructure {
            quiver: quiver.clone(),
            relations: relations.to_vec(),
            basis_paths,
            exceptional_order,
            position_of_vertex,
            idempotent_index,
        }),
    })
}

/// Parses and builds in one step.
pub fn algebra_from_text(text: &str) -> Result<FiniteDimAlgebra, QuiverError> {
    let (q, rels) = parse_quiver(text)?;
    build_algebra(&q, &rels)
}

/// Quiver files for the algebras used throughout the tests and the CLI.
pub mod catalog {
    pub const A3: &str = "# A3: 1 -> 2 -> 3\nvertices 3\narrow a 1 2\narrow b 2 3\n";
    pub const A3_WITH_RELATION: &str = "vertices 3\narrow a 1 2\narrow b 2 3\nrel a*b\n";
    pub const KRONECKER: &str = "vertices 2\narrow a 1 2\narrow b 1 2\n";
    pub const POINT: &str = "vertices 1\n";
    pub const BEILINSON_P2: &str = "\
# Beilinson quiver for P^2: End(O + O(1) + O(2))
vertices 3
arrow x0 1 2
arrow x1 1 2
arrow x2 1 2
arrow y0 2 3
arrow y1 2 3
arrow y2 2 3
rel x0*y1 - x1*y0
rel x0*y2 - x2*y0
rel x1*y2 - x2*y1
";

    pub fn by_name(name: &str) -> Option<&'static str> {
        match name {
            "a3" => Some(A3),
            "a3-rel" => Some(A3_WITH_RELATION),
            "kronecker" => Some(KRONECKER),
            "point" => Some(POINT),
            "beilinson-p2" => Some(BEILINSON_P2),
            _ => None,
        }
    }
}
