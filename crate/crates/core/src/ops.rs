//! Divided differences ∂_i, Demazure operators π_i = ∂_i(1 − x_{i+1}) and
//! μ_i = π_i − 1, acting on the x alphabet.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::perm::Permutation;
use crate::poly::{Monomial, Polynomial, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OperatorKind {
    Partial,
    Pi,
    Mu,
}

/// The image of p under s_i (x_i ↔ x_{i+1}).
pub fn swap_variables(i: usize, p: &Polynomial) -> Polynomial {
    let (a, b) = (Var::x(i), Var::x(i + 1));
    p.rename(|v| {
        if v == a {
            b
        } else if v == b {
            a
        } else {
            v
        }
    })
}

type Univariate = BTreeMap<u32, BigInt>;

fn add_into(target: &mut Univariate, src: &Univariate, shift: u32) {
    for (&e, c) in src {
        let slot = target.entry(e + shift).or_default();
        *slot += c;
        if slot.is_zero() {
            target.remove(&(e + shift));
        }
    }
}

/// ∂_i p = (p − s_i p)/(x_i − x_{i+1}), computed by synthetic division of the
/// numerator, viewed as a polynomial in x_i, by x_i − x_{i+1}.
///
/// Panics if the division leaves a remainder, which cannot happen for a
/// correct antisymmetrization.
pub fn divided_difference(i: usize, p: &Polynomial) -> Polynomial {
    let (vi, vj) = (Var::x(i), Var::x(i + 1));
    let numerator = p - &swap_variables(i, p);
    // rest monomial -> (exponent of x_i -> coefficient polynomial in x_{i+1})
    let mut groups: BTreeMap<Monomial, BTreeMap<u32, Univariate>> = BTreeMap::new();
    for (m, c) in numerator.terms() {
        let (ei, ej) = (m.exponent(vi), m.exponent(vj));
        let rest = m.with_exponent(vi, 0).with_exponent(vj, 0);
        groups
            .entry(rest)
            .or_default()
            .entry(ei)
            .or_default()
            .insert(ej, c.clone());
    }
    let mut out = Polynomial::zero();
    for (rest, coeffs) in groups {
        let d = *coeffs.keys().next_back().expect("nonempty group");
        if d == 0 {
            panic!("divided difference: nonzero remainder (bug)");
        }
        // q_{d-1} = a_d, q_{k-1} = a_k + x_{i+1} q_k, remainder a_0 + x_{i+1} q_0
        let mut q = coeffs[&d].clone();
        for k in (0..d).rev() {
            for (&ej, c) in &q {
                let m = rest
                    .with_exponent(vi, k)
                    .mul(&Monomial::power(vj, ej));
                out.add_term(m, c.clone());
            }
            let mut next = coeffs.get(&k).cloned().unwrap_or_default();
            add_into(&mut next, &q, 1);
            q = next;
        }
        assert!(q.is_empty(), "divided difference: nonzero remainder (bug)");
    }
    out
}

pub fn apply(kind: OperatorKind, i: usize, p: &Polynomial) -> Polynomial {
    match kind {
        OperatorKind::Partial => divided_difference(i, p),
        OperatorKind::Pi => {
            let shifted = p.mul_monomial(&Monomial::var(Var::x(i + 1)));
            divided_difference(i, &(p - &shifted))
        }
        OperatorKind::Mu => &apply(OperatorKind::Pi, i, p) - p,
    }
}

/// Applies the operators for the word (i_1, ..., i_r) as the composite
/// op_{i_1} ∘ ⋯ ∘ op_{i_r}; the last letter acts first.
pub fn apply_letters(kind: OperatorKind, word: &[usize], p: &Polynomial) -> Polynomial {
    word.iter()
        .rev()
        .fold(p.clone(), |acc, &i| apply(kind, i, &acc))
}

/// op_w along a reduced word of w.
pub fn apply_word(kind: OperatorKind, w: &Permutation, p: &Polynomial) -> Polynomial {
    apply_letters(kind, &w.reduced_word(), p)
}

/// φ_i on an expansion Σ c_w 𝒢_w: φ_i 𝒢_w = 𝒢_{s_i w} − 𝒢_w when s_i w < w, else 0.
pub fn apply_phi<K: Ord + Clone>(
    i: usize,
    expansion: &BTreeMap<(K, Permutation), Polynomial>,
) -> BTreeMap<(K, Permutation), Polynomial> {
    let mut out: BTreeMap<(K, Permutation), Polynomial> = BTreeMap::new();
    for ((k, w), c) in expansion {
        if w.has_left_descent(i) {
            let lower = w.swap_values(i, i + 1);
            *out.entry((k.clone(), lower)).or_default() += c;
            *out.entry((k.clone(), w.clone())).or_default() -= c;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// φ_i on a plain expansion keyed by permutations.
pub fn apply_phi_basis(
    i: usize,
    expansion: &BTreeMap<Permutation, Polynomial>,
) -> BTreeMap<Permutation, Polynomial> {
    let keyed = expansion
        .iter()
        .map(|(w, c)| (((), w.clone()), c.clone()))
        .collect();
    apply_phi(i, &keyed)
        .into_iter()
        .map(|(((), w), c)| (w, c))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::all_permutations;

    fn poly(s: &str) -> Polynomial {
        s.parse().unwrap()
    }

    #[test]
    fn single_operators() {
        assert_eq!(apply(OperatorKind::Partial, 1, &poly("x1")), Polynomial::one());
        assert_eq!(apply(OperatorKind::Pi, 1, &Polynomial::one()), Polynomial::one());
        assert!(apply(OperatorKind::Mu, 1, &Polynomial::one()).is_zero());
        assert_eq!(apply(OperatorKind::Partial, 1, &poly("x1^3")), poly("x1^2 + x1*x2 + x2^2"));
        assert_eq!(apply(OperatorKind::Partial, 1, &poly("x2^2")), poly("-x1 - x2"));
        assert_eq!(
            apply(OperatorKind::Partial, 2, &poly("x1*x2^2*y1")),
            poly("x1*x2*y1 + x1*x3*y1")
        );
        assert!(apply(OperatorKind::Partial, 1, &poly("x1*x2 + y3")).is_zero());
    }

    #[test]
    fn words() {
        let top = poly("x1^2*x2");
        let w0 = Permutation::longest(3);
        let e = Permutation::identity();
        assert_eq!(apply_word(OperatorKind::Pi, &e, &top), top);
        let w: Permutation = "321".parse().unwrap();
        assert_eq!(
            apply_word(OperatorKind::Pi, &w.inverse().compose(&w0), &top),
            top
        );
        let w: Permutation = "132".parse().unwrap();
        assert_eq!(
            apply_word(OperatorKind::Pi, &w.inverse().compose(&w0), &top),
            poly("x1 + x2 - x1*x2")
        );
    }

    fn sample_polys() -> Vec<Polynomial> {
        // a spanning set of R_4(x) together with some y-dependence
        let mut out = Vec::new();
        for a in 0..=3u32 {
            for b in 0..=2u32 {
                for c in 0..=1u32 {
                    out.push(Polynomial::monomial(Monomial::from_exponents(
                        crate::poly::Alphabet::X,
                        &[a, b, c],
                    )));
                }
            }
        }
        out.push(poly("x1*y2 - 3*x3^2*y1 + x2"));
        out
    }

    #[test]
    fn quadratic_relations() {
        for p in sample_polys() {
            for i in 1..=3 {
                let d = apply(OperatorKind::Partial, i, &p);
                assert!(apply(OperatorKind::Partial, i, &d).is_zero());
                let pi = apply(OperatorKind::Pi, i, &p);
                assert_eq!(apply(OperatorKind::Pi, i, &pi), pi);
                let mu = apply(OperatorKind::Mu, i, &p);
                assert_eq!(apply(OperatorKind::Mu, i, &mu), -&mu);
            }
        }
    }

    #[test]
    fn braid_relations() {
        for p in sample_polys() {
            for kind in [OperatorKind::Partial, OperatorKind::Pi, OperatorKind::Mu] {
                for i in 1..=2 {
                    assert_eq!(
                        apply_letters(kind, &[i, i + 1, i], &p),
                        apply_letters(kind, &[i + 1, i, i + 1], &p)
                    );
                }
                assert_eq!(apply_letters(kind, &[1, 3], &p), apply_letters(kind, &[3, 1], &p));
            }
        }
    }

    #[test]
    fn independent_of_reduced_word() {
        // every reduced word of w ∈ S_4 gives the same operator
        let p = poly("x1^3*x2^2*x3 + 2*x1*x3 - x2^2*y1");
        for w in all_permutations(4) {
            let words = all_reduced_words(&w);
            let first = apply_letters(OperatorKind::Pi, &words[0], &p);
            for word in &words[1..] {
                assert_eq!(apply_letters(OperatorKind::Pi, word, &p), first);
            }
        }
    }

    fn all_reduced_words(w: &Permutation) -> Vec<Vec<usize>> {
        if w.is_identity() {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for i in w.descents() {
            for mut word in all_reduced_words(&w.swap_positions(i, i + 1)) {
                word.push(i);
                out.push(word);
            }
        }
        out
    }

    #[test]
    fn phi_action() {
        let g = |s: &str| -> Permutation { s.parse().unwrap() };
        let mut exp = BTreeMap::new();
        exp.insert(g("213"), Polynomial::one());
        let out = apply_phi_basis(1, &exp);
        assert_eq!(out.get(&g("123")), Some(&Polynomial::one()));
        assert_eq!(out.get(&g("213")), Some(&Polynomial::constant(-1)));
        let mut exp = BTreeMap::new();
        exp.insert(g("132"), Polynomial::y(1));
        let out = apply_phi_basis(2, &exp);
        assert_eq!(out.get(&g("123")), Some(&Polynomial::y(1)));
        assert_eq!(out.get(&g("132")), Some(&-&Polynomial::y(1)));
        assert!(apply_phi_basis(1, &exp).is_empty());
    }
}
