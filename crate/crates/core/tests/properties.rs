use proptest::prelude::*;

use manifold_relations::algebra::{scalar_determinant, Field, Monomial, Polynomial, Scalar, Var};
use manifold_relations::relations::{cayley_menger_polynomial, RelationSystem};
use manifold_relations::simplicial::{apply_move, candidate_loci, MoveKind, Triangulation};
use manifold_relations::variety::{count_solutions, Options};

const FIELDS: [Field; 4] = [Field::Binary(1), Field::Binary(2), Field::Binary(4), Field::Prime(7)];

fn field() -> impl Strategy<Value = Field> {
    prop::sample::select(FIELDS.to_vec())
}

fn element(f: Field) -> impl Strategy<Value = Scalar> {
    (0..f.order().unwrap()).prop_map(move |i| f.element(i).unwrap())
}

fn polynomial(f: Field, vars: u32) -> impl Strategy<Value = Polynomial> {
    let term = (prop::collection::vec((0..vars, 0u32..3), 0..3), element(f))
        .prop_map(|(pairs, c)| (Monomial::from_pairs(pairs.into_iter().map(|(v, e)| (Var(v), e))), c));
    prop::collection::vec(term, 0..5).prop_map(move |terms| Polynomial::from_terms(f, terms).unwrap())
}

fn field_and_polys(n: usize) -> impl Strategy<Value = (Field, Vec<Polynomial>)> {
    field().prop_flat_map(move |f| (Just(f), prop::collection::vec(polynomial(f, 3), n)))
}

proptest! {
    #[test]
    fn field_axioms((f, xs) in field().prop_flat_map(|f| (Just(f), prop::collection::vec(element(f), 3)))) {
        let (a, b, c) = (&xs[0], &xs[1], &xs[2]);
        prop_assert_eq!(a * &(b + c), &(a * b) + &(a * c));
        prop_assert_eq!(a * b, b * a);
        prop_assert_eq!(&(a - b) + b, a.clone());
        if !a.is_zero() {
            prop_assert!((a * &a.inverse().unwrap()).is_one());
        }
        prop_assert_eq!(a.field(), f);
    }

    #[test]
    fn ring_axioms((_, ps) in field_and_polys(3)) {
        let (p, q, r) = (&ps[0], &ps[1], &ps[2]);
        let lhs = p.try_mul(&q.try_add(r).unwrap()).unwrap();
        let rhs = p.try_mul(q).unwrap().try_add(&p.try_mul(r).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(p.try_mul(q).unwrap(), q.try_mul(p).unwrap());
        prop_assert!(p.try_sub(p).unwrap().is_zero());
    }

    #[test]
    fn text_round_trip((f, ps) in field_and_polys(1)) {
        let names: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        let text = ps[0].to_text(&names);
        prop_assert_eq!(Polynomial::parse(&text, f, &names).unwrap(), ps[0].clone());
    }

    #[test]
    fn evaluation_is_a_homomorphism(
        (f, ps, point) in field_and_polys(2).prop_flat_map(|(f, ps)| {
            (Just(f), Just(ps), prop::collection::vec(element(f), 3))
        })
    ) {
        let (p, q) = (&ps[0], &ps[1]);
        let at = |x: &Polynomial| x.evaluate_dense(&point).unwrap();
        prop_assert_eq!(at(&p.try_mul(q).unwrap()), &at(p) * &at(q));
        prop_assert_eq!(at(&p.try_add(q).unwrap()), &at(p) + &at(q));
        prop_assert_eq!(at(p).field(), f);
    }

    #[test]
    fn swapping_rows_negates_determinant(
        rows in prop::collection::vec(prop::collection::vec(0u32..7, 4), 4),
        i in 0usize..4,
        j in 0usize..4,
    ) {
        prop_assume!(i != j);
        let f = Field::Prime(7);
        let m: Vec<Vec<Scalar>> = rows.iter().map(|r| r.iter().map(|&x| f.element(x).unwrap()).collect()).collect();
        let mut swapped = m.clone();
        swapped.swap(i, j);
        let d = scalar_determinant(f, &m).unwrap();
        prop_assert_eq!(scalar_determinant(f, &swapped).unwrap(), -&d);
        let mut doubled = m.clone();
        doubled[i] = m[i].iter().map(|x| x + x).collect();
        prop_assert_eq!(scalar_determinant(f, &doubled).unwrap(), &d + &d);
    }

    #[test]
    fn counts_ignore_variable_order(
        (f, ps) in prop::sample::select(FIELDS[..3].to_vec())
            .prop_flat_map(|f| (Just(f), prop::collection::vec(polynomial(f, 4), 1..3))),
        perm in Just((0u32..4).collect::<Vec<_>>()).prop_shuffle(),
    ) {
        let names: Vec<String> = (0..4).map(|i| format!("v{i}")).collect();
        let a = RelationSystem::new(f, names.clone(), ps.clone()).unwrap();
        let renamed: Vec<Polynomial> = ps.iter().map(|p| p.rename(|v| Var(perm[v.0 as usize]))).collect();
        let b = RelationSystem::new(f, names, renamed).unwrap();
        let opts = Options::default();
        prop_assert_eq!(
            count_solutions(&a, f, &opts).unwrap().count,
            count_solutions(&b, f, &opts).unwrap().count
        );
        let seq = Options { threads: 1, ..Options::default() };
        prop_assert_eq!(count_solutions(&a, f, &opts).unwrap(), count_solutions(&a, f, &seq).unwrap());
    }

    /// Relabeling the four points permutes the six squared lengths and
    /// leaves the tetrahedron determinant unchanged.
    #[test]
    fn cayley_menger_is_symmetric(
        perm in Just(vec![0usize, 1, 2, 3]).prop_shuffle(),
        values in prop::collection::vec(0u32..101, 6),
    ) {
        let f = Field::Prime(101);
        let cm = cayley_menger_polynomial(f, 4).unwrap();
        let pairs: Vec<(usize, usize)> = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).collect();
        let index = |a: usize, b: usize| pairs.iter().position(|&p| p == (a.min(b), a.max(b))).unwrap();
        let point: Vec<Scalar> = values.iter().map(|&v| f.element(v).unwrap()).collect();
        let permuted: Vec<Scalar> = pairs.iter().map(|&(i, j)| point[index(perm[i], perm[j])].clone()).collect();
        prop_assert_eq!(cm.evaluate_dense(&point).unwrap(), cm.evaluate_dense(&permuted).unwrap());
    }

    #[test]
    fn moves_are_undone_by_their_inverse(choices in prop::collection::vec(any::<prop::sample::Index>(), 1..6), dim in 3usize..5) {
        let mut t = Triangulation::boundary_of_simplex(dim);
        for c in choices {
            let loci: Vec<_> = MoveKind::for_dimension(dim).flat_map(|k| candidate_loci(&t, k)).collect();
            let locus = c.get(&loci);
            let out = apply_move(&t, locus).unwrap();
            prop_assert!(out.result.is_valid());
            prop_assert_eq!(out.result.euler_characteristic(), t.euler_characteristic());
            if out.deleted_vertex.is_none() {
                prop_assert_eq!(apply_move(&out.result, &out.inverse).unwrap().result, t.clone());
            }
            t = out.result;
        }
    }
}
