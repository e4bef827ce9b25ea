//! Normal forms in ℤ[v_1, ..., v_a] modulo the ideal generated by the
//! elementary symmetric polynomials, whose standard monomials are those
//! dividing v_1^{a-1} v_2^{a-2} ⋯ v_{a-1}.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{Alphabet, Monomial, PolyError, Polynomial, Var};

/// Complete homogeneous symmetric polynomial h_d(v_lo, ..., v_hi).
fn complete_homogeneous(alphabet: Alphabet, lo: u32, hi: u32, d: u32) -> Polynomial {
    let vars: Vec<Var> = (lo..=hi).map(|i| Var::new(alphabet, i)).collect();
    let mut out = Polynomial::zero();
    let mut exps = vec![0u32; vars.len()];
    fn rec(
        vars: &[Var],
        exps: &mut Vec<u32>,
        idx: usize,
        left: u32,
        out: &mut Polynomial,
    ) {
        if idx + 1 == vars.len() {
            exps[idx] = left;
            let m = Monomial::from_pairs(vars.iter().copied().zip(exps.iter().copied()));
            out.add_term(m, BigInt::from(1));
            return;
        }
        for e in 0..=left {
            exps[idx] = e;
            rec(vars, exps, idx + 1, left - e, out);
        }
    }
    rec(&vars, &mut exps, 0, d, &mut out);
    out
}

/// Reduces `p` modulo the symmetric-function ideal in the first `a` variables
/// of `alphabet`. Other alphabets are coefficients.
pub fn reduce_mod_symmetric(
    p: &Polynomial,
    alphabet: Alphabet,
    a: usize,
) -> Result<Polynomial, PolyError> {
    let a = a as u32;
    for v in p.variables() {
        if v.alphabet() == alphabet && v.index() > a {
            return Err(PolyError::OutsideQuotient { var: v, rank: a as usize });
        }
    }
    // g_k = h_{a-k+1}(v_1..v_k), leading term v_k^{a-k+1} when v_a > ... > v_1
    let tails: BTreeMap<u32, Polynomial> = (1..=a)
        .map(|k| {
            let d = a - k + 1;
            let lead = Polynomial::monomial(Monomial::power(Var::new(alphabet, k), d));
            (k, &complete_homogeneous(alphabet, 1, k, d) - &lead)
        })
        .collect();
    let mut work = p.clone();
    let mut done = Polynomial::zero();
    loop {
        let reducible = work.terms().find_map(|(m, c)| {
            (1..=a)
                .find(|&k| m.exponent(Var::new(alphabet, k)) > a - k)
                .map(|k| (m.clone(), c.clone(), k))
        });
        let Some((m, c, k)) = reducible else {
            done += &work;
            return Ok(done);
        };
        let v = Var::new(alphabet, k);
        let rest = m.with_exponent(v, m.exponent(v) - (a - k + 1));
        // v_k^{a-k+1} ≡ −(h − v_k^{a-k+1})
        let replacement = tails[&k].mul_monomial(&rest).scale(&(-&c));
        work.add_term(m, -c);
        work += &replacement;
        // move fully reduced terms out of the work list
        let settled: Vec<(Monomial, BigInt)> = work
            .terms()
            .filter(|(m, _)| (1..=a).all(|k| m.exponent(Var::new(alphabet, k)) <= a - k))
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        for (m, c) in settled {
            if !c.is_zero() {
                work.add_term(m.clone(), -c.clone());
                done.add_term(m, c);
            }
        }
    }
}
