//! Morita invariance for matrix algebras at the cochain level.
//!
//! For `f ∈ C^n(B, B)` the cotrace is
//! `cotr(f)(α^1, ..., α^n)_{ij} = Σ f(α^1_{i i_2}, α^2_{i_2 i_3}, ..., α^n_{i_n j})`
//! summed over the internal indices, and `inc*(F)(a_1, ..., a_n)` is the
//! `(1,1)` entry of `F(E_11(a_1), ..., E_11(a_n))`. Then `inc* ∘ cotr = id`,
//! and the operators
//!
//! ```text
//! h_i(F)(α^1, ..., α^{n-1}) = Σ E_k1(1) F(E_11(α^1_{k m}), ..., E_11(α^i_{p q}), E_1q(1), α^{i+1}, ..., α^{n-1})
//! ```
//!
//! satisfy `(Σ (-1)^i h_i) b + b (Σ (-1)^i h_i) = id - cotr ∘ inc*`.

use thiserror::Error;

use crate::exact_linalg::{q, Scalar};
use crate::hochschild::{self, decode_index, Cochain};
use crate::quiver_algebra::{AlgElem, FiniteDimAlgebra};
use crate::report::{Check, Report};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoritaError {
    #[error("homotopy index {index} out of range for a cochain of degree {degree}")]
    IndexOutOfRange { index: usize, degree: usize },
    #[error("cochain over an algebra of dimension {got}, expected {expected}")]
    AlgebraMismatch { expected: usize, got: usize },
    #[error("matrix size must be positive")]
    ZeroSize,
}

/// `M_r(B)` with basis `E_ij(b)` ordered by `(i, j, b)`.
#[derive(Clone, Debug)]
pub struct MatrixAlgebra {
    base: FiniteDimAlgebra,
    r: usize,
    alg: FiniteDimAlgebra,
}

impl MatrixAlgebra {
    pub fn new(base: &FiniteDimAlgebra, r: usize) -> Result<Self, MoritaError> {
        if r == 0 {
            return Err(MoritaError::ZeroSize);
        }
        let m = base.dim();
        let idx = |i: usize, j: usize, s: usize| (i * r + j) * m + s;
        let mut labels = Vec::with_capacity(r * r * m);
        for i in 0..r {
            for j in 0..r {
                for s in 0..m {
                    labels.push(format!("E{}_{}:{}", i + 1, j + 1, base.label(s)));
                }
            }
        }
        let n = r * r * m;
        let mut table = vec![vec![Vec::new(); n]; n];
        for i in 0..r {
            for j in 0..r {
                for l in 0..r {
                    for s in 0..m {
                        for t in 0..m {
                            table[idx(i, j, s)][idx(j, l, t)] =
                                base.product_basis(s, t).iter().map(|(u, c)| (idx(i, l, *u), c.clone())).collect();
                        }
                    }
                }
            }
        }
        let mut unit = AlgElem::zero(n);
        for i in 0..r {
            for (s, c) in base.unit().support() {
                unit.0[idx(i, i, s)] = c.clone();
            }
        }
        let alg = FiniteDimAlgebra::from_table(labels, table, unit).expect("matrix algebras are associative");
        Ok(MatrixAlgebra {
            base: base.clone(),
            r,
            alg,
        })
    }

    pub fn base(&self) -> &FiniteDimAlgebra {
        &self.base
    }

    pub fn size(&self) -> usize {
        self.r
    }

    pub fn algebra(&self) -> &FiniteDimAlgebra {
        &self.alg
    }

    /// Basis index of `E_ij(b_s)` (0-based `i`, `j`).
    pub fn index(&self, i: usize, j: usize, s: usize) -> usize {
        (i * self.r + j) * self.base.dim() + s
    }

    /// Inverse of [`Self::index`].
    pub fn entry(&self, idx: usize) -> (usize, usize, usize) {
        let m = self.base.dim();
        let s = idx % m;
        let ij = idx / m;
        (ij / self.r, ij % self.r, s)
    }

    /// `E_ij(b)` for an element `b` of the base.
    pub fn embed(&self, i: usize, j: usize, b: &AlgElem) -> AlgElem {
        let mut out = AlgElem::zero(self.alg.dim());
        for (s, c) in b.support() {
            out.0[self.index(i, j, s)] = c.clone();
        }
        out
    }

    fn flat(&self, inputs: &[usize], out: usize) -> usize {
        let n = self.alg.dim();
        inputs.iter().fold(0usize, |acc, &i| acc * n + i) * n + out
    }

    fn check_base(&self, f: &Cochain) -> Result<(), MoritaError> {
        if f.dim() != self.base.dim() {
            return Err(MoritaError::AlgebraMismatch {
                expected: self.base.dim(),
                got: f.dim(),
            });
        }
        Ok(())
    }

    fn check_matrix(&self, f: &Cochain) -> Result<(), MoritaError> {
        if f.dim() != self.alg.dim() {
            return Err(MoritaError::AlgebraMismatch {
                expected: self.alg.dim(),
                got: f.dim(),
            });
        }
        Ok(())
    }

    /// `cotr(f)`; in degree 0 this is `f · Id`.
    pub fn cotr(&self, f: &Cochain) -> Result<Cochain, MoritaError> {
        self.check_base(f)?;
        let n = f.degree();
        let m = self.base.dim();
        let mut out = Vec::new();
        let chains = index_chains(self.r, n + 1);
        for (idx, c) in f.coeffs() {
            let (t, o) = decode_index(m, n, *idx);
            if n == 0 {
                for i in 0..self.r {
                    out.push((self.index(i, i, o), c.clone()));
                }
                continue;
            }
            for chain in &chains {
                let inputs: Vec<usize> = (0..n).map(|a| self.index(chain[a], chain[a + 1], t[a])).collect();
                out.push((self.flat(&inputs, self.index(chain[0], chain[n], o)), c.clone()));
            }
        }
        Ok(Cochain::from_sparse(self.alg.dim(), n, out))
    }

    /// `inc*(F)(a_1, ..., a_n) = F(E_11(a_1), ..., E_11(a_n))_{11}`.
    pub fn inc_star(&self, f: &Cochain) -> Result<Cochain, MoritaError> {
        self.check_matrix(f)?;
        let n = f.degree();
        let mut out = Vec::new();
        for (idx, c) in f.coeffs() {
            let (t, o) = decode_index(self.alg.dim(), n, *idx);
            let (oi, oj, os) = self.entry(o);
            if oi != 0 || oj != 0 {
                continue;
            }
            let mut inputs = Vec::with_capacity(n);
            for &x in &t {
                let (i, j, s) = self.entry(x);
                if i != 0 || j != 0 {
                    break;
                }
                inputs.push(s);
            }
            if inputs.len() == n {
                let m = self.base.dim();
                let flat = inputs.iter().fold(0usize, |acc, &i| acc * m + i) * m + os;
                out.push((flat, c.clone()));
            }
        }
        Ok(Cochain::from_sparse(self.base.dim(), n, out))
    }

    /// The homotopy operator `h_i: C^n(M_r(B)) -> C^{n-1}(M_r(B))`, `0 <= i <= n-1`.
    pub fn homotopy(&self, i: usize, f: &Cochain) -> Result<Cochain, MoritaError> {
        self.check_matrix(f)?;
        let n = f.degree();
        if n == 0 || i >= n {
            return Err(MoritaError::IndexOutOfRange { index: i, degree: n });
        }
        let dim = self.alg.dim();
        let unit: Vec<(usize, Scalar)> = self.base.unit().to_sparse();
        let mut out = Vec::new();
        for (idx, c) in f.coeffs() {
            let (t, o) = decode_index(dim, n, *idx);
            // Arguments 1..=i must be of the form E_11(b), argument i+1 must
            // be E_1q(b_s) with b_s in the support of the unit.
            let mut bs = Vec::with_capacity(i);
            for &x in &t[..i] {
                let (a, b, s) = self.entry(x);
                if a != 0 || b != 0 {
                    break;
                }
                bs.push(s);
            }
            if bs.len() < i {
                continue;
            }
            let (a, qcol, s) = self.entry(t[i]);
            if a != 0 {
                continue;
            }
            let Some(weight) = unit.iter().find(|(u, _)| *u == s).map(|(_, w)| w) else { continue };
            // E_k1(1) · E_ab(b') = E_kb(b') when a = 1.
            let (oa, ob, os) = self.entry(o);
            if oa != 0 {
                continue;
            }
            let rest = &t[i + 1..];
            let value = c * weight;
            // Chains k = i_1, i_2, ..., i_{i+1} = q with α^t = E_{i_t i_{t+1}}(b_t).
            let chains: Vec<Vec<usize>> = if i == 0 {
                vec![vec![qcol]]
            } else {
                index_chains(self.r, i + 1).into_iter().filter(|ch| ch[i] == qcol).collect()
            };
            for ch in chains {
                let mut inputs: Vec<usize> = (0..i).map(|a| self.index(ch[a], ch[a + 1], bs[a])).collect();
                inputs.extend_from_slice(rest);
                let k = ch[0];
                for (u, w) in &unit {
                    // E_k1(1) = Σ_u w_u E_k1(b_u); E_k1(b_u) E_1b(b') = E_kb(b_u b').
                    for (v, x) in self.base.product_basis(*u, os) {
                        out.push((self.flat(&inputs, self.index(k, ob, *v)), &value * w * x));
                    }
                }
            }
        }
        Ok(Cochain::from_sparse(dim, n - 1, out))
    }

    /// `Σ_i (-1)^i h_i`, zero in degree 0.
    pub fn homotopy_sum(&self, f: &Cochain) -> Result<Cochain, MoritaError> {
        self.check_matrix(f)?;
        let n = f.degree();
        if n == 0 {
            return Ok(Cochain::zero(self.alg.dim(), 0));
        }
        let mut acc = Cochain::zero(self.alg.dim(), n - 1);
        for i in 0..n {
            let sign = if i % 2 == 0 { q(1) } else { q(-1) };
            acc = acc.add_scaled(&self.homotopy(i, f)?, &sign);
        }
        Ok(acc)
    }

    /// `(Σ (-1)^i h_i) b F + b (Σ (-1)^i h_i) F - (F - cotr inc* F)`; zero when
    /// the homotopy identity holds at `F`.
    pub fn homotopy_defect(&self, f: &Cochain) -> Result<Cochain, MoritaError> {
        let bf = hochschild::differential(&self.alg, f);
        let lhs = self.homotopy_sum(&bf)?;
        let lhs = if f.degree() == 0 {
            lhs
        } else {
            lhs.add(&hochschild::differential(&self.alg, &self.homotopy_sum(f)?))
        };
        let rhs = f.sub(&self.cotr(&self.inc_star(f)?)?);
        Ok(lhs.sub(&rhs))
    }

    /// The pre-cosimplicial relations between `h_i` and the faces `b_j` at `F`
    /// of degree `n`. Returns the name of the first failing relation.
    pub fn cosimplicial_failure(&self, f: &Cochain) -> Result<Option<String>, MoritaError> {
        let n = f.degree();
        let a = &self.alg;
        let faces: Vec<Cochain> = (0..=n + 1).map(|j| hochschild::face(a, j, f)).collect();
        for i in 0..=n {
            for j in 0..=n + 1 {
                let lhs = self.homotopy(i, &faces[j])?;
                let rhs = if j < i {
                    hochschild::face(a, j, &self.homotopy(i - 1, f)?)
                } else if j == i && i > 0 {
                    self.homotopy(i - 1, &faces[j])?
                } else if i + 1 < j && i < n {
                    hochschild::face(a, j - 1, &self.homotopy(i, f)?)
                } else {
                    continue;
                };
                if lhs != rhs {
                    return Ok(Some(format!("h_{i} b_{j}")));
                }
            }
        }
        Ok(None)
    }

    /// Checks `h_0 b_0 = id` and `h_n b_{n+1} = cotr ∘ inc*` at `F` of degree `n`.
    pub fn endpoint_failure(&self, f: &Cochain) -> Result<Option<String>, MoritaError> {
        let n = f.degree();
        let a = &self.alg;
        if self.homotopy(0, &hochschild::face(a, 0, f))? != *f {
            return Ok(Some("h_0 b_0 != id".into()));
        }
        if self.homotopy(n, &hochschild::face(a, n + 1, f))? != self.cotr(&self.inc_star(f)?)? {
            return Ok(Some(format!("h_{n} b_{} != cotr inc*", n + 1)));
        }
        Ok(None)
    }
}

/// All sequences of length `len` over `0..r`.
fn index_chains(r: usize, len: usize) -> Vec<Vec<usize>> {
    hochschild::basis_tuples(r, len).collect()
}

fn first_nonzero(c: &Cochain) -> Option<String> {
    (!c.is_zero()).then(|| format!("{} nonzero coefficients", c.coeffs().len()))
}

/// Runs the Morita identities on every basis cochain of degree `0..=max_degree`
/// over `B` and over `M_r(B)`.
pub fn morita_report(base: &FiniteDimAlgebra, r: usize, max_degree: usize) -> Result<Report, MoritaError> {
    let mat = MatrixAlgebra::new(base, r)?;
    let mut rep = Report::new(format!("morita-check r={r}"));
    let (bd, md) = (base.dim(), mat.algebra().dim());
    rep.info(format!("dim B = {bd}, dim M_{r}(B) = {md}"));
    for n in 0..=max_degree {
        let mut roundtrip = None;
        let mut cotr_chain = None;
        for idx in 0..bd.pow(n as u32 + 1) {
            let f = Cochain::from_sparse(bd, n, vec![(idx, q(1))]);
            let cf = mat.cotr(&f)?;
            if roundtrip.is_none() && mat.inc_star(&cf)? != f {
                roundtrip = Some(format!("basis cochain {idx}"));
            }
            if cotr_chain.is_none() {
                let d = hochschild::differential(mat.algebra(), &cf).sub(&mat.cotr(&hochschild::differential(base, &f))?);
                cotr_chain = first_nonzero(&d).map(|w| format!("basis cochain {idx}: {w}"));
            }
        }
        rep.push(Check::from_failure(format!("inc* ∘ cotr = id on C^{n}(B)"), roundtrip));
        rep.push(Check::from_failure(format!("b ∘ cotr = cotr ∘ b on C^{n}(B)"), cotr_chain));

        let mut inc_chain = None;
        let mut homotopy = None;
        let mut relations = None;
        for idx in 0..md.pow(n as u32 + 1) {
            let f = Cochain::from_sparse(md, n, vec![(idx, q(1))]);
            if inc_chain.is_none() {
                let d = hochschild::differential(base, &mat.inc_star(&f)?).sub(&mat.inc_star(&hochschild::differential(mat.algebra(), &f))?);
                inc_chain = first_nonzero(&d).map(|w| format!("basis cochain {idx}: {w}"));
            }
            if homotopy.is_none() {
                homotopy = first_nonzero(&mat.homotopy_defect(&f)?).map(|w| format!("basis cochain {idx}: {w}"));
            }
            if relations.is_none() {
                relations = mat
                    .endpoint_failure(&f)?
                    .or(mat.cosimplicial_failure(&f)?)
                    .map(|w| format!("basis cochain {idx}: {w}"));
            }
        }
        rep.push(Check::from_failure(format!("b ∘ inc* = inc* ∘ b on C^{n}(M_{r}(B))"), inc_chain));
        rep.push(Check::from_failure(
            format!("(Σ(-1)^i h_i) b + b (Σ(-1)^i h_i) = id - cotr ∘ inc* on C^{n}(M_{r}(B))"),
            homotopy,
        ));
        rep.push(Check::from_failure(format!("pre-cosimplicial relations on C^{n}(M_{r}(B))"), relations));
    }
    Ok(rep)
}

/// The coefficients of `E_ij(b)` in `x`.
pub fn matrix_entry(mat: &MatrixAlgebra, x: &AlgElem, i: usize, j: usize) -> AlgElem {
    let m = mat.base().dim();
    let mut out = AlgElem::zero(m);
    for s in 0..m {
        out.0[s] = x.0[mat.index(i, j, s)].clone();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver_algebra::AlgElem;

    fn kx2() -> FiniteDimAlgebra {
        FiniteDimAlgebra::truncated_polynomial(2)
    }

    #[test]
    fn matrix_algebra_structure() {
        let mat = MatrixAlgebra::new(&kx2(), 2).unwrap();
        let a = mat.algebra();
        assert_eq!(a.dim(), 8);
        let x = a.basis_elem(mat.index(0, 1, 1));
        let y = a.basis_elem(mat.index(1, 0, 1));
        assert!(a.mul(&x, &y).is_zero());
        let y = a.basis_elem(mat.index(1, 0, 0));
        assert_eq!(a.mul(&x, &y), a.basis_elem(mat.index(0, 0, 1)));
        assert!(MatrixAlgebra::new(&kx2(), 0).is_err());
    }

    #[test]
    fn cotr_low_degrees() {
        let b = kx2();
        let mat = MatrixAlgebra::new(&b, 2).unwrap();
        assert_eq!(mat.cotr(&Cochain::identity(&b)).unwrap(), Cochain::identity(mat.algebra()));
        let x = b.basis_elem(1);
        let cx = mat.cotr(&Cochain::element(&x)).unwrap();
        let expected = mat.embed(0, 0, &x).add(&mat.embed(1, 1, &x));
        assert_eq!(cx, Cochain::element(&expected));
    }

    #[test]
    fn cotr_matches_entry_formula() {
        let b = kx2();
        let mat = MatrixAlgebra::new(&b, 2).unwrap();
        let f = Cochain::product_map(&b).add(&Cochain::from_sparse(2, 2, vec![(3, q(5))]));
        let cf = mat.cotr(&f).unwrap();
        let alpha = AlgElem((0..8).map(|i| q(i as i64 - 3)).collect());
        let beta = AlgElem((0..8).map(|i| q((i * i) as i64 % 5)).collect());
        let v = cf.eval(&[alpha.clone(), beta.clone()]);
        for i in 0..2 {
            for j in 0..2 {
                let mut expected = AlgElem::zero(2);
                for k in 0..2 {
                    let a = matrix_entry(&mat, &alpha, i, k);
                    let bb = matrix_entry(&mat, &beta, k, j);
                    expected = expected.add(&f.eval(&[a, bb]));
                }
                assert_eq!(matrix_entry(&mat, &v, i, j), expected);
            }
        }
    }

    #[test]
    fn size_one_collapses() {
        let b = kx2();
        let mat = MatrixAlgebra::new(&b, 1).unwrap();
        for n in 0..=2 {
            for idx in 0..2usize.pow(n + 1) {
                let f = Cochain::from_sparse(2, n as usize, vec![(idx, q(1))]);
                assert_eq!(mat.cotr(&mat.inc_star(&f).unwrap()).unwrap(), f);
                assert!(mat.homotopy_defect(&f).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn identities_over_ground_field() {
        let k = FiniteDimAlgebra::ground_field();
        let r = morita_report(&k, 2, 2).unwrap();
        assert!(r.all_passed(), "{}", r.to_human());
    }

    #[test]
    fn homotopy_index_range() {
        let mat = MatrixAlgebra::new(&kx2(), 2).unwrap();
        let f = Cochain::zero(8, 2);
        assert!(mat.homotopy(1, &f).is_ok());
        assert!(matches!(mat.homotopy(2, &f), Err(MoritaError::IndexOutOfRange { .. })));
        assert!(matches!(mat.homotopy(0, &Cochain::zero(8, 0)), Err(MoritaError::IndexOutOfRange { .. })));
    }

    #[test]
    fn identities_over_dual_numbers() {
        let r = morita_report(&kx2(), 2, 2).unwrap();
        assert!(r.all_passed(), "{}", r.to_human());
    }

    #[test]
    fn homotopy_terms_are_needed() {
        // dropping h_1 breaks the identity on some degree-2 basis cochain
        let mat = MatrixAlgebra::new(&kx2(), 2).unwrap();
        let a = mat.algebra();
        let found = (0..8usize.pow(3)).any(|idx| {
            let f = Cochain::from_sparse(8, 2, vec![(idx, q(1))]);
            let h0 = |g: &Cochain| mat.homotopy(0, g).unwrap();
            let lhs = h0(&hochschild::differential(a, &f)).add(&hochschild::differential(a, &h0(&f)));
            lhs != f.sub(&mat.cotr(&mat.inc_star(&f).unwrap()).unwrap())
        });
        assert!(found);
    }
}
