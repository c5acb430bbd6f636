mod common;

use proptest::prelude::*;

use toric_core::chow::chow_ring_stack;
use toric_core::cox::cox;
use toric_core::fan::{
    is_refinement, make_cone, primitive, star_subdivision, validate_fan, ConeClass, Fan,
};
use toric_core::graded::{GradedPresentation, GradedRing, Poly};
use toric_core::ktheory::{certify_in_ideal, k_ring_stack};
use toric_core::lattice::{
    cokernel, hnf, ints, kernel_basis, rank, snf, solve_in_span, Int, IntMatrix,
};

fn matrix(max: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-9i64..=9, c), r)
            .prop_map(move |rows| IntMatrix::from_rows(c, &rows))
    })
}

/// `k` linearly independent primitive vectors in `ℤ^n`.
fn independent(n: usize, k: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, n), k).prop_filter_map(
        "dependent or zero",
        move |vs| {
            if vs.iter().any(|v| v.iter().all(|&x| x == 0)) {
                return None;
            }
            let vs: Vec<Vec<i64>> = vs.iter().map(|v| primitive(v)).collect();
            (rank(&IntMatrix::from_rows(n, &vs)) == k).then_some(vs)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hnf_and_snf_factorizations(m in matrix(6)) {
        let (h, u) = hnf(&m);
        prop_assert!(u.is_unimodular());
        prop_assert_eq!(u.mul(&m), h);
        let s = snf(&m);
        prop_assert!(s.u.is_unimodular() && s.v.is_unimodular());
        prop_assert_eq!(s.u.mul(&m).mul(&s.v), s.d.clone());
        let factors = s.invariant_factors();
        prop_assert_eq!(factors.len(), rank(&m));
        for w in factors.windows(2) {
            prop_assert_eq!(&w[1] % &w[0], Int::from(0));
        }
    }

    #[test]
    fn cokernel_matches_invariant_factors(m in matrix(5)) {
        let g = cokernel(&m);
        let factors = snf(&m).invariant_factors();
        prop_assert_eq!(g.free_rank, m.rows() - factors.len());
        let nontrivial: Vec<Int> = factors.into_iter().filter(|x| *x != Int::from(1)).collect();
        prop_assert_eq!(g.torsion.clone(), nontrivial);
        // projection kills the relations, section splits the projection on the free part
        for c in m.column_vecs() {
            let mut p = g.project(&c);
            g.reduce(&mut p);
            prop_assert!(p.iter().all(|x| *x == Int::from(0)));
        }
    }

    #[test]
    fn kernel_and_solve(m in matrix(5), x in prop::collection::vec(-5i64..=5, 5)) {
        let k = kernel_basis(&m);
        prop_assert!(m.mul(&k).is_zero());
        prop_assert_eq!(k.cols(), m.cols() - rank(&m));
        let x = ints(&x[..m.cols()]);
        let b = m.mul_vec(&x);
        let sol = solve_in_span(&m, &b).unwrap();
        prop_assert!(sol.is_some());
        prop_assert_eq!(m.mul_vec(&sol.unwrap()), b);
    }

    #[test]
    fn simplicial_cone_faces(rays in (2usize..=4).prop_flat_map(|n| independent(n, n))) {
        let n = rays.len();
        let c = make_cone(n, &rays).unwrap();
        prop_assert_eq!(c.faces().len(), 1 << n);
        prop_assert!(c.is_simplicial());
        let det = IntMatrix::from_rows(n, &rays).determinant();
        prop_assert_eq!(c.multiplicity(), num_traits::Signed::abs(&det));
        if c.is_smooth() {
            prop_assert!(c.is_simplicial());
            prop_assert_eq!(c.classify(), ConeClass::Smooth);
        }
        for f in c.facets() {
            prop_assert!(f.is_face_of(&c));
            prop_assert_eq!(f.dim(), n - 1);
        }
    }

    #[test]
    fn subdividing_random_cones(rays in (2usize..=3).prop_flat_map(|n| independent(n, n))) {
        let n = rays.len();
        let c = make_cone(n, &rays).unwrap();
        let f = Fan::from_cone(&c);
        let s = star_subdivision(&f, &c).unwrap();
        prop_assert!(validate_fan(&s).is_ok());
        prop_assert!(is_refinement(&s, &f));
        prop_assert_eq!(s.maximal_cones().len(), n);
        let cd = cox(&s).unwrap();
        prop_assert_eq!(cd.char_group.free_rank, s.n_rays() - n);
        prop_assert_eq!(cd.primitive_collections.len(), 1);
    }

    #[test]
    fn fan_json_round_trip(i in 0usize..21) {
        let (_, c) = common::corpus().swap_remove(i);
        let f = Fan::from_cone(&c);
        let s = star_subdivision(&f, &c).unwrap();
        let text = serde_json::to_string(&s.to_json()).unwrap();
        let back = Fan::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(back.cones(), s.cones());
        prop_assert_eq!(back.rays(), s.rays());
    }
}

fn square_ring() -> GradedRing {
    GradedRing::new(&chow_ring_stack(&common::square_star()).unwrap())
}

fn homogeneous(n: usize, d: usize, coeffs: &[i64]) -> Poly {
    let ms = toric_core::graded::monomials(n, d);
    Poly::from_terms(
        n,
        ms.into_iter().zip(coeffs).map(|(m, &c)| (m, Int::from(c))),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplication_commutes_and_distributes(
        a in prop::collection::vec(-4i64..=4, 5),
        b in prop::collection::vec(-4i64..=4, 5),
        c in prop::collection::vec(-4i64..=4, 15),
    ) {
        let ring = square_ring();
        let (a, b, c) = (homogeneous(5, 1, &a), homogeneous(5, 1, &b), homogeneous(5, 2, &c));
        prop_assert_eq!(ring.multiply(&a, 1, &b, 1).unwrap(), ring.multiply(&b, 1, &a, 1).unwrap());
        let lhs = ring.multiply(&a.add(&b), 1, &c, 2).unwrap();
        let piece = ring.piece(3);
        let rhs: Vec<Int> = ring
            .multiply(&a, 1, &c, 2)
            .unwrap()
            .iter()
            .zip(ring.multiply(&b, 1, &c, 2).unwrap())
            .map(|(x, y)| x + y)
            .collect();
        let mut rhs = rhs;
        piece.group.reduce(&mut rhs);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn element_round_trips_through_normal_form(coords in prop::collection::vec(-6i64..=6, 2)) {
        let ring = square_ring();
        let piece = ring.piece(1);
        let x = ring.element(&piece, &ints(&coords));
        prop_assert_eq!(ring.normal_form(&piece, &x).unwrap(), ints(&coords));
    }

    #[test]
    fn pieces_ignore_the_choice_of_linear_generators(
        ops in prop::collection::vec((0usize..3, 0usize..3, -3i64..=3), 0..6)
    ) {
        let pres = chow_ring_stack(&common::square_star()).unwrap();
        let mut lin = pres.linear_gens.clone();
        for (i, j, c) in ops {
            if i != j {
                let src = lin[j].clone();
                for (x, y) in lin[i].iter_mut().zip(src) {
                    *x += c * y;
                }
            }
        }
        let moved = GradedPresentation::new(pres.n_vars, lin, pres.homogeneous_gens.clone()).unwrap();
        prop_assert_eq!(GradedRing::new(&moved).summaries(3), GradedRing::new(&pres).summaries(3));
    }

    #[test]
    fn ideal_membership_persists_in_larger_boxes(
        terms in prop::collection::vec((-3i64..=3, prop::collection::vec(0i64..=1, 5)), 1..4)
    ) {
        let p = k_ring_stack(&common::square_star()).unwrap();
        let x = p.element_from_rays(&terms).unwrap();
        if certify_in_ideal(&p, 3, &x) {
            prop_assert!(certify_in_ideal(&p, 4, &x));
        }
        // anything times a generator lies in the ideal
        let g = &p.ideal_gens[0];
        let mut prod = std::collections::BTreeMap::new();
        for (e, c) in &x.terms {
            for (f, d) in &g.terms {
                let s: Vec<i64> = e.iter().zip(f).map(|(a, b)| a + b).collect();
                *prod.entry(s).or_insert(0) += c * d;
            }
        }
        let y = toric_core::ktheory::LaurentElem {
            terms: prod.into_iter().filter(|(_, c)| *c != 0).collect(),
        };
        prop_assert!(certify_in_ideal(&p, 4, &y));
    }
}
