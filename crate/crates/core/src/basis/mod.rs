//! Schubert, Grothendieck and H-polynomials, single and double.

mod cache;
mod expand;

use std::sync::Arc;

use num_bigint::BigInt;

use crate::ops::{apply_letters, apply_word, OperatorKind};
use crate::par;
use crate::perm::{all_permutations, bruhat_leq, Permutation};
use crate::poly::{Alphabet, Monomial, Polynomial, Var};

pub use expand::{
    expand, expand_grothendieck, expand_schubert, stable_expansion, structure_constants,
    BasisExpansion, ExpansionError, ExpansionMethod,
};

/// Which polynomial family a basis element belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Schubert,
    Grothendieck,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HMethod {
    Operator,
    Alternating,
}

/// The staircase monomial x^δ, δ = (n−1, ..., 1).
pub fn staircase(n: usize) -> Polynomial {
    let exps: Vec<u32> = (1..n).rev().map(|e| e as u32).collect();
    Polynomial::monomial(Monomial::from_exponents(Alphabet::X, &exps))
}

/// x_i + y_j − x_i y_j, or x_i when `double` is off.
pub fn cell_factor(i: usize, j: usize, double: bool) -> Polynomial {
    if double {
        Polynomial::k_sum(Var::x(i), Var::y(j))
    } else {
        Polynomial::x(i)
    }
}

/// (1 − x_i)(1 − y_j), or 1 − x_i when `double` is off.
pub fn cell_complement(i: usize, j: usize, double: bool) -> Polynomial {
    if double {
        &Polynomial::one_minus(Var::x(i)) * &Polynomial::one_minus(Var::y(j))
    } else {
        Polynomial::one_minus(Var::x(i))
    }
}

/// 𝒢_{ω_0}(x;y) = ∏_{i+j≤n}(x_i + y_j − x_i y_j); x^δ when `double` is off.
pub fn top_grothendieck(n: usize, double: bool) -> Polynomial {
    if !double {
        return staircase(n);
    }
    let mut out = Polynomial::one();
    for i in 1..n {
        for j in 1..=n - i {
            out = &out * &cell_factor(i, j, true);
        }
    }
    out
}

/// Starting point and operator letters reaching w from a dominant permutation:
/// 𝒢_w = π_{i_1} ⋯ π_{i_r} 𝒢_d with d dominant (weakly decreasing code).
fn dominant_path(w: &Permutation) -> (Permutation, Vec<usize>) {
    let mut cur = w.clone();
    let mut letters = Vec::new();
    loop {
        let code = cur.code();
        match (1..code.len()).find(|&i| code[i - 1] < code[i]) {
            None => return (cur, letters),
            Some(i) => {
                letters.push(i);
                cur = cur.swap_positions(i, i + 1);
            }
        }
    }
}

/// For dominant d with code λ, 𝒢_d = ∏_{(i,j)∈λ} (x_i ⊕ y_j); single: x^λ.
fn dominant_polynomial(code: &[usize], family: Family, double: bool) -> Polynomial {
    let mut out = Polynomial::one();
    for (i, &c) in code.iter().enumerate() {
        for j in 1..=c {
            let f = match family {
                Family::Grothendieck => cell_factor(i + 1, j, double),
                Family::Schubert if double => &Polynomial::x(i + 1) - &Polynomial::y(j),
                Family::Schubert => Polynomial::x(i + 1),
            };
            out = &out * &f;
        }
    }
    out
}

fn build(w: &Permutation, family: Family, double: bool) -> Arc<Polynomial> {
    let key = cache::Key {
        w: w.clone(),
        family,
        double,
    };
    if let Some(p) = cache::get(&key) {
        return p;
    }
    let (dom, letters) = dominant_path(w);
    // the chain dom = w_r, w_{r-1}, ..., w_0 = w with w_{k-1} = w_k s_{i_k}
    let mut perms = vec![w.clone()];
    for &i in &letters {
        let last = perms.last().unwrap().swap_positions(i, i + 1);
        perms.push(last);
    }
    debug_assert_eq!(perms.last(), Some(&dom));
    // walk back from the highest cached point
    let mut start = perms.len() - 1;
    let mut poly = None;
    for k in 0..perms.len() {
        let key = cache::Key {
            w: perms[k].clone(),
            family,
            double,
        };
        if let Some(p) = cache::get(&key) {
            start = k;
            poly = Some(p);
            break;
        }
    }
    let mut poly = match poly {
        Some(p) => (*p).clone(),
        None => {
            let p = dominant_polynomial(&dom.code(), family, double);
            cache::put(
                cache::Key {
                    w: dom.clone(),
                    family,
                    double,
                },
                Arc::new(p.clone()),
            );
            p
        }
    };
    let kind = match family {
        Family::Grothendieck => OperatorKind::Pi,
        Family::Schubert => OperatorKind::Partial,
    };
    let mut result = None;
    for k in (0..start).rev() {
        poly = crate::ops::apply(kind, letters[k], &poly);
        let arc = Arc::new(poly.clone());
        cache::put(
            cache::Key {
                w: perms[k].clone(),
                family,
                double,
            },
            arc.clone(),
        );
        result = Some(arc);
    }
    result.unwrap_or_else(|| cache::get(&key).expect("cached"))
}

/// The stable Grothendieck polynomial 𝒢_w (or 𝒢_w(x;y) when `double`).
///
/// Computed from a dominant permutation above w in weak order, whose
/// polynomial is a product of cell factors; results are memoized.
pub fn grothendieck(w: &Permutation, double: bool) -> Arc<Polynomial> {
    build(w, Family::Grothendieck, double)
}

/// The Schubert polynomial 𝔖_w.
pub fn schubert(w: &Permutation) -> Arc<Polynomial> {
    build(w, Family::Schubert, false)
}

/// Basis element of a family.
pub fn basis_polynomial(family: Family, w: &Permutation) -> Arc<Polynomial> {
    build(w, family, false)
}

/// 𝒢_w = π_{w^{-1}ω_0} 𝒢_{ω_0} computed literally inside S_n.
pub fn grothendieck_in(w: &Permutation, n: usize, double: bool) -> Polynomial {
    assert!(w.fits(n), "{w} is not in S_{n}");
    let word = w.inverse().compose(&Permutation::longest(n));
    apply_word(OperatorKind::Pi, &word, &top_grothendieck(n, double))
}

/// 𝔖_w = ∂_{w^{-1}ω_0} x^δ computed literally inside S_n.
pub fn schubert_in(w: &Permutation, n: usize) -> Polynomial {
    assert!(w.fits(n), "{w} is not in S_{n}");
    let word = w.inverse().compose(&Permutation::longest(n));
    apply_word(OperatorKind::Partial, &word, &staircase(n))
}

/// ℋ_w inside S_n, by μ-operators or by the alternating sum over v ≥ w.
pub fn hpolynomial(w: &Permutation, n: usize, double: bool, method: HMethod) -> Polynomial {
    assert!(w.fits(n), "{w} is not in S_{n}");
    match method {
        HMethod::Operator => {
            let word = w.inverse().compose(&Permutation::longest(n)).reduced_word();
            apply_letters(OperatorKind::Mu, &word, &top_grothendieck(n, double))
        }
        HMethod::Alternating => {
            let above: Vec<Permutation> = all_permutations(n)
                .into_iter()
                .filter(|v| bruhat_leq(w, v))
                .collect();
            let lw = w.length();
            par::map(above, |v| {
                let g = grothendieck(&v, double);
                if (v.length() - lw) % 2 == 0 {
                    (*g).clone()
                } else {
                    -&*g
                }
            })
            .into_iter()
            .sum()
        }
    }
}

/// The distinguished exponent vector code(w).
pub fn code(w: &Permutation) -> Vec<usize> {
    w.code()
}

/// Reassembles Σ c_w · basis_w.
pub fn reassemble<'a>(
    family: Family,
    coeffs: impl IntoIterator<Item = (&'a Permutation, &'a BigInt)>,
) -> Polynomial {
    let mut out = Polynomial::zero();
    for (w, c) in coeffs {
        out += &basis_polynomial(family, w).scale(c);
    }
    out
}

/// Drops the memo tables (used by benchmarks).
pub fn clear_cache() {
    cache::clear();
    expand::clear_product_cache();
}
