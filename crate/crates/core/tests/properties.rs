use std::collections::BTreeMap;

use grothendieck::basis::{expand_grothendieck, grothendieck, grothendieck_in, schubert};
use grothendieck::hecke::HeckeElement;
use grothendieck::ops::{apply, apply_letters, OperatorKind};
use grothendieck::perm::{all_permutations, bruhat_covers, bruhat_leq, pattern_restrict, Permutation, SetComposition};
use grothendieck::poly::{Alphabet, Monomial, Polynomial, RationalValue, Var};
use grothendieck::subst::{insert_variable, substitute_single};
use num_bigint::BigInt;
use proptest::prelude::*;

fn perm_in(n: usize) -> impl Strategy<Value = Permutation> {
    prop::sample::select(all_permutations(n))
}

fn perm_upto(nmax: usize) -> impl Strategy<Value = (usize, Permutation)> {
    (1..=nmax).prop_flat_map(|n| (Just(n), perm_in(n)))
}

/// Small polynomials in x1..x3 and y1, y2.
fn small_poly() -> impl Strategy<Value = Polynomial> {
    let term = (-3i64..=3, prop::collection::vec(0u32..3, 5));
    prop::collection::vec(term, 0..5).prop_map(|terms| {
        Polynomial::from_terms(terms.into_iter().map(|(c, e)| {
            let m = Monomial::from_pairs(
                [Var::x(1), Var::x(2), Var::x(3), Var::y(1), Var::y(2)].into_iter().zip(e),
            );
            (m, BigInt::from(c))
        }))
    })
}

fn x_poly() -> impl Strategy<Value = Polynomial> {
    small_poly().prop_map(|p| p.set_zero(Alphabet::Y))
}

fn point() -> impl Strategy<Value = BTreeMap<Var, RationalValue>> {
    prop::collection::vec((-5i64..=5, 1i64..=4), 5).prop_map(|vals| {
        [Var::x(1), Var::x(2), Var::x(3), Var::y(1), Var::y(2)]
            .into_iter()
            .zip(vals)
            .map(|(v, (a, b))| (v, RationalValue::new(a.into(), b.into())))
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inverse_and_composition((_, w) in perm_upto(6), (_, u) in perm_upto(6)) {
        prop_assert!(w.compose(&w.inverse()).is_identity());
        prop_assert_eq!(w.inverse().length(), w.length());
        prop_assert_eq!(w.compose(&u).inverse(), u.inverse().compose(&w.inverse()));
        prop_assert!(w.compose(&u).length() <= w.length() + u.length());
    }

    #[test]
    fn code_and_reduced_words((_, w) in perm_upto(6)) {
        prop_assert_eq!(Permutation::from_code(&w.code()), w.clone());
        let word = w.reduced_word();
        prop_assert_eq!(word.len(), w.length());
        prop_assert_eq!(Permutation::from_word(&word), w);
    }

    #[test]
    fn covers_go_up_in_bruhat_order((n, w) in perm_upto(5)) {
        for cover in bruhat_covers(&w, n, None) {
            let up = w.swap_positions(cover.a, cover.b);
            prop_assert_eq!(up.length(), w.length() + 1);
            prop_assert!(bruhat_leq(&w, &up));
            prop_assert!(!bruhat_leq(&up, &w));
        }
        prop_assert!(bruhat_leq(&Permutation::identity(), &w));
        prop_assert!(bruhat_leq(&w, &Permutation::longest(n)));
    }

    #[test]
    fn pattern_of_a_cross_product(u in perm_in(3), v in perm_in(2), mask in 1u32..31) {
        let p: Vec<usize> = (1..=5).filter(|i| mask >> (i - 1) & 1 == 1).collect();
        prop_assume!(p.len() == 3);
        let q: Vec<usize> = (1..=5).filter(|i| mask >> (i - 1) & 1 == 0).collect();
        let comp = SetComposition::new(vec![p.clone(), q.clone()]).unwrap();
        let x = u.cross(3, &v).unwrap().compose(&comp.epsilon());
        prop_assert_eq!(pattern_restrict(&x, &p), u);
        prop_assert_eq!(pattern_restrict(&x, &q), v);
    }

    #[test]
    fn ring_axioms(a in small_poly(), b in small_poly(), c in small_poly()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&(&a + &b) - &b) == a);
    }

    #[test]
    fn text_round_trip(a in small_poly()) {
        let parsed: Polynomial = a.to_text().parse().unwrap();
        prop_assert_eq!(parsed, a);
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in small_poly(), b in small_poly(), pt in point()) {
        let ea = a.eval_rational(&pt).unwrap();
        let eb = b.eval_rational(&pt).unwrap();
        prop_assert_eq!((&a + &b).eval_rational(&pt).unwrap(), &ea + &eb);
        prop_assert_eq!((&a * &b).eval_rational(&pt).unwrap(), ea * eb);
    }

    #[test]
    fn specialization_is_a_homomorphism(a in x_poly(), b in x_poly(), split in 1usize..3) {
        let comp = SetComposition::new(vec![(1..=split).collect(), (split + 1..=3).collect()]).unwrap();
        let targets = [Alphabet::Y, Alphabet::Z];
        let prod = (&a * &b).specialize(&comp, &targets).unwrap();
        let sa = a.specialize(&comp, &targets).unwrap();
        let sb = b.specialize(&comp, &targets).unwrap();
        prop_assert_eq!(prod, &sa * &sb);
    }

    #[test]
    fn operator_relations(p in x_poly(), i in 1usize..3) {
        let d = apply(OperatorKind::Partial, i, &p);
        prop_assert!(apply(OperatorKind::Partial, i, &d).is_zero());
        let pi = apply(OperatorKind::Pi, i, &p);
        prop_assert_eq!(apply(OperatorKind::Pi, i, &pi), pi);
        let mu = apply(OperatorKind::Mu, i, &p);
        prop_assert_eq!(apply(OperatorKind::Mu, i, &mu), -&mu);
        for kind in [OperatorKind::Partial, OperatorKind::Pi, OperatorKind::Mu] {
            prop_assert_eq!(apply_letters(kind, &[1, 2, 1], &p), apply_letters(kind, &[2, 1, 2], &p));
            prop_assert_eq!(apply_letters(kind, &[1, 3], &p), apply_letters(kind, &[3, 1], &p));
        }
    }

    #[test]
    fn grothendieck_is_stable((n, w) in perm_upto(4)) {
        let g = grothendieck_in(&w, n, false);
        prop_assert_eq!(&grothendieck_in(&w, n + 1, false), &g);
        prop_assert_eq!(g.lowest_degree_part().unwrap(), (*schubert(&w)).clone());
    }

    #[test]
    fn products_expand_and_reconstruct(u in perm_in(3), v in perm_in(3)) {
        let product = &*grothendieck(&u, false) * &*grothendieck(&v, false);
        let e = expand_grothendieck(&product, 6).unwrap();
        prop_assert_eq!(e.reconstruct(), product);
    }

    #[test]
    fn hecke_relations_on_elements((n, w) in perm_upto(4), i in 1usize..4) {
        prop_assume!(n >= 2 && i < n);
        let x = HeckeElement::basis_element(n, w);
        let sq = x.mul_generator(i).mul_generator(i);
        prop_assert_eq!(sq, x.mul_generator(i).scale(&Polynomial::constant(-1)));
        prop_assert_eq!(x.generator_mul(i).mul_generator(1), x.mul_generator(1).generator_mul(i));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn inserted_variable_reconstructs(w in perm_in(4), q in 1usize..4) {
        let e = substitute_single(&w, q, 4).unwrap();
        prop_assert_eq!(e.reconstruct(), insert_variable(&grothendieck(&w, false), q));
    }
}
