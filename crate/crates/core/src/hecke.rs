//! The 0-Hecke algebra H_n(0) with polynomial coefficients.
//!
//! Generators u_i satisfy the braid relations and u_i² = −u_i; the basis
//! e_w is u along any reduced word of w. The second generators v_i = u_i + 1
//! give the basis ẽ_w, with v_i² = v_i.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::perm::{all_permutations, bruhat_leq, Permutation};
use crate::poly::{Polynomial, Var};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HeckeError {
    #[error("rank mismatch: H_{left}(0) against H_{right}(0)")]
    RankMismatch { left: usize, right: usize },
    #[error("{0} does not lie in S_{1}")]
    OutsideRank(Permutation, usize),
    #[error("subword {0:?} is not reduced")]
    NotReduced(Vec<usize>),
    #[error("position {0} out of range or already in the subword")]
    BadPosition(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HeckeBasis {
    /// e_w = u_{i_1} ⋯ u_{i_r}
    E,
    /// ẽ_w = v_{i_1} ⋯ v_{i_r}
    ETilde,
}

/// Σ p_w e_w in H_n(0) ⊗ ℤ[x, y, ...], stored in the e basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeElement {
    rank: usize,
    coeffs: BTreeMap<Permutation, Polynomial>,
}

/// The Demazure product of a word: the monoid product with s_i² = s_i.
pub fn demazure_product(word: &[usize]) -> Permutation {
    word.iter().fold(Permutation::identity(), |w, &i| {
        if w.has_descent(i) {
            w
        } else {
            w.swap_positions(i, i + 1)
        }
    })
}

/// u_{i_1} ⋯ u_{i_r} = (−1)^{r − ℓ(δ)} e_δ with δ the Demazure product.
pub fn evaluate_word(word: &[usize]) -> (i32, Permutation) {
    let d = demazure_product(word);
    let sign = if (word.len() - d.length()) % 2 == 0 { 1 } else { -1 };
    (sign, d)
}

pub fn is_reduced(word: &[usize]) -> bool {
    demazure_product(word).length() == word.len()
}

/// Whether letter `r` of `q` is absorbable into the reduced subword at
/// positions `p` (0-based, increasing): adding it keeps δ unchanged and the
/// position t it cancels against, the one whose removal leaves a reduced
/// word for δ, satisfies t < r.
pub fn absorbable_letter(q: &[usize], p: &[usize], r: usize) -> Result<bool, HeckeError> {
    Ok(cancelling_position(q, p, r)?.is_some_and(|t| t < r))
}

/// The position t of the subword `p` cancelled by inserting letter `r`, when
/// the insertion leaves the Demazure product unchanged.
pub fn cancelling_position(q: &[usize], p: &[usize], r: usize) -> Result<Option<usize>, HeckeError> {
    let sub: Vec<usize> = p.iter().map(|&k| q[k]).collect();
    if !is_reduced(&sub) {
        return Err(HeckeError::NotReduced(sub));
    }
    if r >= q.len() || p.contains(&r) {
        return Err(HeckeError::BadPosition(r));
    }
    let target = Permutation::from_word(&sub);
    let mut with: Vec<usize> = p.to_vec();
    with.push(r);
    with.sort_unstable();
    let word: Vec<usize> = with.iter().map(|&k| q[k]).collect();
    if demazure_product(&word) != target {
        return Ok(None);
    }
    let mut found = None;
    for (idx, &t) in with.iter().enumerate() {
        if t == r {
            continue;
        }
        let mut rest = word.clone();
        rest.remove(idx);
        if is_reduced(&rest) && Permutation::from_word(&rest) == target {
            debug_assert!(found.is_none(), "cancelling position is unique");
            found = Some(t);
        }
    }
    Ok(found)
}

impl HeckeElement {
    pub fn zero(rank: usize) -> Self {
        Self {
            rank,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(rank: usize) -> Self {
        Self::basis_element(rank, Permutation::identity())
    }

    pub fn basis_element(rank: usize, w: Permutation) -> Self {
        let mut out = Self::zero(rank);
        out.coeffs.insert(w, Polynomial::one());
        out
    }

    /// u_i = e_{s_i}.
    pub fn generator(rank: usize, i: usize) -> Self {
        Self::basis_element(rank, Permutation::simple(i))
    }

    /// Builds an element from coefficients in the given basis.
    pub fn from_coefficients(
        rank: usize,
        basis: HeckeBasis,
        coeffs: BTreeMap<Permutation, Polynomial>,
    ) -> Result<Self, HeckeError> {
        if let Some(w) = coeffs.keys().find(|w| !w.fits(rank)) {
            return Err(HeckeError::OutsideRank(w.clone(), rank));
        }
        let coeffs = match basis {
            HeckeBasis::E => coeffs,
            HeckeBasis::ETilde => tilde_to_e(rank, &coeffs),
        };
        let mut out = Self::zero(rank);
        for (w, p) in coeffs {
            out.add(w, &p);
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Coefficients in the e basis.
    pub fn coefficients(&self) -> &BTreeMap<Permutation, Polynomial> {
        &self.coeffs
    }

    /// Coefficients in the requested basis.
    pub fn coefficients_in(&self, basis: HeckeBasis) -> BTreeMap<Permutation, Polynomial> {
        match basis {
            HeckeBasis::E => self.coeffs.clone(),
            HeckeBasis::ETilde => e_to_tilde(self.rank, &self.coeffs),
        }
    }

    pub fn coefficient(&self, w: &Permutation) -> Polynomial {
        self.coeffs.get(w).cloned().unwrap_or_default()
    }

    fn add(&mut self, w: Permutation, p: &Polynomial) {
        if p.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(w.clone()).or_default();
        *slot += p;
        if slot.is_zero() {
            self.coeffs.remove(&w);
        }
    }

    /// self · u_i.
    pub fn mul_generator(&self, i: usize) -> Self {
        let mut out = Self::zero(self.rank);
        for (w, p) in &self.coeffs {
            if w.has_descent(i) {
                out.add(w.clone(), &-p);
            } else {
                out.add(w.swap_positions(i, i + 1), p);
            }
        }
        out
    }

    /// u_i · self.
    pub fn generator_mul(&self, i: usize) -> Self {
        let mut out = Self::zero(self.rank);
        for (w, p) in &self.coeffs {
            if w.has_left_descent(i) {
                out.add(w.clone(), &-p);
            } else {
                out.add(w.swap_values(i, i + 1), p);
            }
        }
        out
    }

    /// self · (1 + f u_i).
    pub fn mul_binomial(&self, f: &Polynomial, i: usize) -> Self {
        let mut out = self.clone();
        for (w, p) in self.mul_generator(i).coeffs {
            out.add(w, &(&p * f));
        }
        out
    }

    pub fn scale(&self, f: &Polynomial) -> Self {
        let mut out = Self::zero(self.rank);
        for (w, p) in &self.coeffs {
            out.add(w.clone(), &(p * f));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// Bilinear product, using e_w · e_v = e_w · u_{j_1} ⋯ u_{j_s} for a reduced word of v.
pub fn hecke_mul(a: &HeckeElement, b: &HeckeElement) -> Result<HeckeElement, HeckeError> {
    if a.rank != b.rank {
        return Err(HeckeError::RankMismatch {
            left: a.rank,
            right: b.rank,
        });
    }
    let mut out = HeckeElement::zero(a.rank);
    for (v, q) in &b.coeffs {
        let mut part = a.clone();
        for i in v.reduced_word() {
            part = part.mul_generator(i);
        }
        for (w, p) in part.coeffs {
            out.add(w, &(&p * q));
        }
    }
    Ok(out)
}

/// e_w = Σ_{w' ≤ w} (−1)^{ℓ(w)−ℓ(w')} ẽ_{w'}; returns ẽ-coefficients.
fn e_to_tilde(
    rank: usize,
    coeffs: &BTreeMap<Permutation, Polynomial>,
) -> BTreeMap<Permutation, Polynomial> {
    let mut out: BTreeMap<Permutation, Polynomial> = BTreeMap::new();
    for lower in all_permutations(rank) {
        let mut acc = Polynomial::zero();
        for (w, p) in coeffs {
            if bruhat_leq(&lower, w) {
                if (w.length() - lower.length()) % 2 == 0 {
                    acc += p;
                } else {
                    acc -= p;
                }
            }
        }
        if !acc.is_zero() {
            out.insert(lower, acc);
        }
    }
    out
}

/// ẽ_w = Σ_{w' ≤ w} e_{w'}; returns e-coefficients.
fn tilde_to_e(
    rank: usize,
    coeffs: &BTreeMap<Permutation, Polynomial>,
) -> BTreeMap<Permutation, Polynomial> {
    let mut out: BTreeMap<Permutation, Polynomial> = BTreeMap::new();
    for lower in all_permutations(rank) {
        let mut acc = Polynomial::zero();
        for (w, p) in coeffs {
            if bruhat_leq(&lower, w) {
                acc += p;
            }
        }
        if !acc.is_zero() {
            out.insert(lower, acc);
        }
    }
    out
}

/// Rewrites the coefficients of `a` in the `target` basis.
pub fn basis_change(a: &HeckeElement, target: HeckeBasis) -> BTreeMap<Permutation, Polynomial> {
    a.coefficients_in(target)
}

/// The generating function ∏_{i=1}^{n−1} ∏_{j=n−1}^{i} (1 + (x_i ⊕ y_{j−i+1}) u_j),
/// with x ⊕ y = x + y − xy, multiplied in that order. With `double` off
/// the y variables are zero.
///
/// In the e basis its coefficients are the Grothendieck polynomials; in the
/// ẽ basis they are the H-polynomials of S_n.
pub fn cauchy_product(n: usize, double: bool) -> HeckeElement {
    let mut out = HeckeElement::one(n);
    for i in 1..n {
        for j in (i..n).rev() {
            let f = if double {
                Polynomial::k_sum(Var::x(i), Var::y(j - i + 1))
            } else {
                Polynomial::x(i)
            };
            out = out.mul_binomial(&f, j);
        }
    }
    out
}
