use proptest::prelude::*;

use hochdef::eulerian::{Permutation, SymGroupElement};
use hochdef::exact_linalg::{self, q, Scalar};
use hochdef::hkr_poly::{Poly, PolyDerivation, PolyEvaluator, PolyRing, antisymmetrize};
use hochdef::mutation_lattice::{GramLattice, Side};
use hochdef::SparseMatrix;

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, cols), rows)
}

fn poly(vars: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0u32..3, vars), -4i64..=4), 0..5).prop_map(move |terms| {
        terms.into_iter().fold(Poly::zero(vars), |acc, (m, c)| acc.add(&Poly::monomial(m, q(c))))
    })
}

fn unitriangular(n: usize) -> impl Strategy<Value = Vec<Vec<Scalar>>> {
    prop::collection::vec(-4i64..=4, n * n).prop_map(move |v| {
        (0..n)
            .map(|i| (0..n).map(|j| if i == j { q(1) } else if i < j { q(v[i * n + j]) } else { q(0) }).collect())
            .collect()
    })
}

proptest! {
    #[test]
    fn rank_nullity(m in matrix(4, 5)) {
        let a = SparseMatrix::from_dense(&m.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect::<Vec<_>>());
        let ker = exact_linalg::kernel_basis(&a);
        prop_assert_eq!(exact_linalg::rank(&a) + ker.len(), 5);
        for v in &ker {
            prop_assert!(a.mul_vec(v).unwrap().iter().all(|x| *x == q(0)));
        }
    }

    #[test]
    fn solve_recovers_a_consistent_system(m in matrix(4, 4), x in prop::collection::vec(-5i64..=5, 4)) {
        let a = SparseMatrix::from_dense(&m.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect::<Vec<_>>());
        let x: Vec<Scalar> = x.into_iter().map(q).collect();
        let b = a.mul_vec(&x).unwrap();
        let y = exact_linalg::solve(&a, &b).unwrap().expect("consistent");
        prop_assert_eq!(a.mul_vec(&y).unwrap(), b);
    }

    #[test]
    fn polynomial_ring_laws(f in poly(2), g in poly(2), h in poly(2)) {
        prop_assert_eq!(f.mul(&g), g.mul(&f));
        prop_assert_eq!(f.mul(&g).mul(&h), f.mul(&g.mul(&h)));
        prop_assert_eq!(f.mul(&g.add(&h)), f.mul(&g).add(&f.mul(&h)));
        prop_assert!(f.sub(&f).is_zero());
    }

    #[test]
    fn derivations_satisfy_leibniz(a in poly(2), b in poly(2), f in poly(2), g in poly(2)) {
        let d = PolyDerivation::new(vec![a, b]).unwrap();
        prop_assert_eq!(d.apply(&f.mul(&g)), d.apply(&f).mul(&g).add(&f.mul(&d.apply(&g))));
    }

    #[test]
    fn antisymmetrization_is_alternating(a in poly(2), b in poly(2), f in poly(2), g in poly(2)) {
        let ring = PolyRing::new(2).unwrap();
        let d1 = PolyDerivation::new(vec![a.clone(), b.clone()]).unwrap();
        let d2 = PolyDerivation::new(vec![b, a]).unwrap();
        let c = antisymmetrize(&ring, &[d1, d2]);
        prop_assert_eq!(c.eval(&[f.clone(), g.clone()]), c.eval(&[g, f]).scale(&q(-1)));
    }

    #[test]
    fn mutations_invert_and_braid(g in unitriangular(4), i in 1usize..3) {
        let l = GramLattice::new(g, 0).unwrap();
        let lr = l.mutate(Side::L, i).unwrap().mutate(Side::R, i).unwrap();
        prop_assert!(lr.same_collection(&l));
        let rl = l.mutate(Side::R, i).unwrap().mutate(Side::L, i).unwrap();
        prop_assert!(rl.same_collection(&l));
        let a = l.mutate(Side::L, i).unwrap().mutate(Side::L, i + 1).unwrap().mutate(Side::L, i).unwrap();
        let b = l.mutate(Side::L, i + 1).unwrap().mutate(Side::L, i).unwrap().mutate(Side::L, i + 1).unwrap();
        prop_assert!(a.same_collection(&b));
        prop_assert!(a.is_unitriangular());
    }

    #[test]
    fn lattice_text_round_trip(g in unitriangular(3)) {
        let l = GramLattice::new(g, 0).unwrap();
        let back = GramLattice::from_text(&l.to_text()).unwrap();
        prop_assert_eq!(back.gram(), l.gram());
    }

    #[test]
    fn group_algebra_text_round_trip(coeffs in prop::collection::vec(-3i64..=3, 6)) {
        let e = Permutation::all(3).into_iter().zip(coeffs).fold(SymGroupElement::zero(3), |acc, (p, c)| {
            acc.add(&SymGroupElement::from_perm(p, q(c)))
        });
        prop_assert_eq!(SymGroupElement::parse(3, &e.to_text()).unwrap(), e);
    }
}
