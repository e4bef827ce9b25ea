//! Cross-validation harness: every construction against every other, the
//! combinatorial bijections, the polynomial identities and the substitution
//! theorems, reported per (check, permutation).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::basis::{grothendieck, hpolynomial, schubert, structure_constants, Family, HMethod};
use crate::chains::{
    chain_to_rcgraph, enumerate_climbing_marked_chains, groth_from_chains, h_from_chains,
    marked_chains, rcgraph_to_chain, MarkedChain, Marking,
};
use crate::hecke::{cauchy_product, demazure_product, evaluate_word, HeckeBasis, HeckeElement};
use crate::par;
use crate::perm::{all_permutations, Permutation, SetComposition};
use crate::pipedream::{
    enumerate_marked_rcgraphs, groth_from_double, groth_from_rcgraphs, h_from_double,
    h_from_rcgraphs, GrothVariant, HVariant, Side,
};
use crate::poly::{Alphabet, Polynomial, RationalValue, Var};
use crate::subst::{
    chain_from_index, check_decomposition, decompose_with, extension_identity_failures,
    insert_variable, ls_substitution, lr_identity_sides, psi_chain_index,
    schubert_coefficient_as_constant, substitute_first_variable, substitute_single,
    two_set_extension, FactorBasis, FirstVariableMethod,
};

/// The groups of checks `verify` can run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    CrossConstructions,
    Bijections,
    Identities,
    Substitution,
}

impl Suite {
    pub const ALL: [Suite; 4] = [
        Suite::CrossConstructions,
        Suite::Bijections,
        Suite::Identities,
        Suite::Substitution,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::CrossConstructions => "cross-constructions",
            Suite::Bijections => "bijections",
            Suite::Identities => "identities",
            Suite::Substitution => "substitution",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Check {
    pub check: String,
    pub item: String,
    pub passed: bool,
}

impl Check {
    fn new(check: &str, item: impl Into<String>, passed: bool) -> Self {
        Self {
            check: check.to_string(),
            item: item.into(),
            passed,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: Suite,
    pub nmax: usize,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    /// Per-check pass counts, then every failing item.
    pub fn to_text(&self) -> String {
        let mut tally: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
        for c in &self.checks {
            let e = tally.entry(&c.check).or_default();
            e.0 += c.passed as usize;
            e.1 += 1;
        }
        let mut s = format!("suite {} (n ≤ {})\n", self.suite.name(), self.nmax);
        for (name, (ok, total)) in tally {
            let status = if ok == total { "PASS" } else { "FAIL" };
            s.push_str(&format!("{status} {name}: {ok}/{total}\n"));
        }
        for c in self.failures() {
            s.push_str(&format!("  failed {} at {}\n", c.check, c.item));
        }
        s
    }
}

pub fn run(suite: Suite, nmax: usize) -> Report {
    let mut checks = match suite {
        Suite::CrossConstructions => cross_constructions(nmax),
        Suite::Bijections => bijections(nmax, 20, 0x5eed),
        Suite::Identities => identities(nmax),
        Suite::Substitution => substitution(nmax),
    };
    checks.sort();
    Report { suite, nmax, checks }
}

fn perms_up_to(nmax: usize) -> Vec<(usize, Permutation)> {
    (1..=nmax)
        .flat_map(|n| all_permutations(n).into_iter().map(move |w| (n, w)))
        .collect()
}

fn label(w: &Permutation, n: usize) -> String {
    format!("{} in S_{n}", w.one_line(n).iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))
}

/// Grothendieck polynomials for n ≤ nmax by operators, rc-graphs, climbing
/// chains and the Hecke generating function; double versions and all
/// H-polynomial constructions for n ≤ min(nmax, 4).
pub fn cross_constructions(nmax: usize) -> Vec<Check> {
    let hecke: BTreeMap<(usize, bool), HeckeElement> = (1..=nmax)
        .flat_map(|n| [(n, false), (n, true)])
        .filter(|&(n, d)| !d || n <= 4)
        .map(|(n, d)| ((n, d), cauchy_product(n, d)))
        .collect();
    par::flat_map(perms_up_to(nmax), |(n, w)| {
        let item = label(&w, n);
        let mut out = Vec::new();
        let g = grothendieck(&w, false);
        let mut rc = true;
        for side in [Side::Right, Side::Left] {
            for v in [GrothVariant::MarkedSum, GrothVariant::AbsorbProduct] {
                rc &= groth_from_rcgraphs(&w, n, v, side, false) == *g;
            }
        }
        out.push(Check::new("grothendieck rc-graphs", &item, rc));
        out.push(Check::new("grothendieck chains", &item, groth_from_chains(&w, n, false) == *g));
        out.push(Check::new("grothendieck hecke", &item, hecke[&(n, false)].coefficient(&w) == *g));
        out.push(Check::new(
            "schubert lowest part",
            &item,
            g.lowest_degree_part().ok().as_ref() == Some(&*schubert(&w)),
        ));
        if n <= 4 {
            let gd = grothendieck(&w, true);
            let mut rc = true;
            let mut dbl = true;
            for side in [Side::Right, Side::Left] {
                for v in [GrothVariant::MarkedSum, GrothVariant::AbsorbProduct] {
                    rc &= groth_from_rcgraphs(&w, n, v, side, true) == *gd;
                    dbl &= groth_from_double(&w, n, v, side) == *gd;
                }
            }
            out.push(Check::new("double grothendieck rc-graphs", &item, rc));
            out.push(Check::new("double grothendieck double rc-graphs", &item, dbl));
            out.push(Check::new("double grothendieck chains", &item, groth_from_chains(&w, n, true) == *gd));
            out.push(Check::new("double grothendieck hecke", &item, hecke[&(n, true)].coefficient(&w) == *gd));
            for double in [false, true] {
                let prefix = if double { "double h" } else { "h" };
                let h = hpolynomial(&w, n, double, HMethod::Operator);
                let alt = hpolynomial(&w, n, double, HMethod::Alternating);
                out.push(Check::new(&format!("{prefix} alternating sum"), &item, alt == h));
                let mut rc = true;
                let mut dbl = true;
                for side in [Side::Right, Side::Left] {
                    for v in [HVariant::MarkedSum, HVariant::ComplementProduct] {
                        rc &= h_from_rcgraphs(&w, n, v, side, double) == h;
                        if double {
                            dbl &= h_from_double(&w, n, v, side) == h;
                        }
                    }
                }
                out.push(Check::new(&format!("{prefix} rc-graphs"), &item, rc));
                if double {
                    out.push(Check::new("double h double rc-graphs", &item, dbl));
                }
                out.push(Check::new(&format!("{prefix} chains"), &item, h_from_chains(&w, n, double) == h));
                let tilde = hecke[&(n, double)].coefficients_in(HeckeBasis::ETilde);
                out.push(Check::new(
                    &format!("{prefix} hecke"),
                    &item,
                    tilde.get(&w).cloned().unwrap_or_default() == h,
                ));
            }
        }
        out
    })
}

fn rcgraph_chain_bijection(w: &Permutation, n: usize) -> bool {
    let graphs = enumerate_marked_rcgraphs(w, n, Side::Left);
    let mut chains = enumerate_climbing_marked_chains(w, n, Marking::Groth);
    chains.sort();
    let mut image = Vec::with_capacity(graphs.len());
    for g in &graphs {
        let Ok(c) = rcgraph_to_chain(g) else { return false };
        if chain_to_rcgraph(&c).as_ref() != Ok(g) || c.length() - c.marks() != g.marks.len() {
            return false;
        }
        image.push(c);
    }
    image.sort();
    image.dedup();
    image == chains
}

fn psi_bijection(w: &Permutation, n: usize) -> bool {
    if w.get(1) == n {
        return true;
    }
    let chains: Vec<MarkedChain> = marked_chains(w, n, 1, n)
        .into_iter()
        .filter(|c| c.end().get(1) == n)
        .collect();
    let mut seen = std::collections::BTreeSet::new();
    for chain in &chains {
        let Ok((p, q)) = psi_chain_index(chain) else { return false };
        if chain_from_index(w, n, &p, &q).as_ref() != Ok(chain) || !seen.insert((p, q)) {
            return false;
        }
    }
    let terms = crate::subst::ls_terms(&crate::perm::standardize_drop_first(w), w.get(1), n);
    terms.len() == chains.len()
        && terms
            .iter()
            .all(|t| chain_from_index(w, n, &t.p, &t.q).is_ok_and(|c| psi_chain_index(&c) == Ok((t.p.clone(), t.q.clone()))))
}

/// The rc-graph/chain bijection on S_n for n ≤ min(nmax, 4) plus `sample`
/// random permutations of S_{nmax} when nmax ≥ 5, and the chain/index
/// bijection ψ for n ≤ min(nmax, 4).
pub fn bijections(nmax: usize, sample: usize, seed: u64) -> Vec<Check> {
    let mut items: Vec<(usize, Permutation)> = perms_up_to(nmax.min(4));
    if nmax >= 5 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pool = all_permutations(nmax);
        for _ in 0..sample {
            items.push((nmax, pool[rng.gen_range(0..pool.len())].clone()));
        }
    }
    let mut out = par::flat_map(items, |(n, w)| {
        let item = label(&w, n);
        let mut out = vec![Check::new("rc-graph chain bijection", &item, rcgraph_chain_bijection(&w, n))];
        if n <= 4 {
            out.push(Check::new("chain index bijection", &item, psi_bijection(&w, n)));
        }
        out
    });
    out.dedup();
    out
}

/// 𝒢_w(x;y) as a sum over 0-Hecke factorizations e_v·e_u = ±e_w.
pub fn groth_cauchy(w: &Permutation, n: usize) -> Polynomial {
    let perms = all_permutations(n);
    let mut out = Polynomial::zero();
    for u in &perms {
        for v in &perms {
            let word: Vec<usize> = v.reduced_word().into_iter().chain(u.reduced_word()).collect();
            let (_, d) = evaluate_word(&word);
            if &d != w {
                continue;
            }
            let x = grothendieck(u, true).set_zero(Alphabet::Y);
            let y = grothendieck(v, true).set_zero(Alphabet::X);
            let t = &x * &y;
            if (u.length() + v.length() - w.length()) % 2 == 0 {
                out += &t;
            } else {
                out -= &t;
            }
        }
    }
    out
}

/// ℋ_w(x;y) as a sum over Demazure factorizations v·u = w.
pub fn h_cauchy(w: &Permutation, n: usize) -> Polynomial {
    let perms = all_permutations(n);
    let mut out = Polynomial::zero();
    for u in &perms {
        for v in &perms {
            let word: Vec<usize> = v.reduced_word().into_iter().chain(u.reduced_word()).collect();
            if &demazure_product(&word) != w {
                continue;
            }
            let x = hpolynomial(u, n, true, HMethod::Operator).set_zero(Alphabet::Y);
            let y = hpolynomial(v, n, true, HMethod::Operator).set_zero(Alphabet::X);
            out += &(&x * &y);
        }
    }
    out
}

/// ℋ_w(x;y)·∏(v−1)^{d_v} and (−1)^{ℓ(w)} ℋ_e(x;y)·N(x;y), where
/// 𝒢_w(x̃;ỹ) = N / ∏(v−1)^{d_v} with x̃ = x/(x−1).
pub fn tilde_sides(w: &Permutation, n: usize) -> (Polynomial, Polynomial) {
    let (num, degrees) = grothendieck(w, true).rational_substitute_tilde();
    let mut left = hpolynomial(w, n, true, HMethod::Operator);
    for (&v, &d) in &degrees {
        left = &left * &(&Polynomial::var(v) - &Polynomial::one()).pow(d);
    }
    let mut right = &hpolynomial(&Permutation::identity(), n, true, HMethod::Operator) * &num;
    if w.length() % 2 == 1 {
        right = -&right;
    }
    (left, right)
}

/// Evaluates both sides of the x̃ identity at a rational point.
pub fn tilde_at_point(w: &Permutation, n: usize, point: &BTreeMap<Var, RationalValue>) -> (RationalValue, RationalValue) {
    let one = RationalValue::one();
    let tilde: BTreeMap<Var, RationalValue> =
        point.iter().map(|(v, x)| (*v, x / (x - &one))).collect();
    let left = hpolynomial(w, n, true, HMethod::Operator).eval_rational(point).expect("assigned");
    let id = hpolynomial(&Permutation::identity(), n, true, HMethod::Operator)
        .eval_rational(point)
        .expect("assigned");
    let mut right = id * grothendieck(w, true).eval_rational(&tilde).expect("assigned");
    if w.length() % 2 == 1 {
        right = -right;
    }
    (left, right)
}

/// Deterministic rational points in x_1..x_n, y_1..y_n avoiding 1.
pub fn rational_points(n: usize, count: usize, seed: u64) -> Vec<BTreeMap<Var, RationalValue>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (1..=n)
                .flat_map(|i| [Var::x(i), Var::y(i)])
                .map(|v| {
                    let value = loop {
                        let num: i64 = rng.gen_range(-9..=9);
                        let den: i64 = rng.gen_range(1..=7);
                        if num != den {
                            break RationalValue::new(num.into(), den.into());
                        }
                    };
                    (v, value)
                })
                .collect()
        })
        .collect()
}

fn hecke_round_trip(n: usize) -> bool {
    all_permutations(n).into_iter().all(|w| {
        let x = HeckeElement::basis_element(n, w);
        let tilde = x.coefficients_in(HeckeBasis::ETilde);
        HeckeElement::from_coefficients(n, HeckeBasis::ETilde, tilde).is_ok_and(|back| back == x)
    })
}

/// Symmetry and Cauchy identities, the x̃ identity, the Hecke basis change
/// and the structure-constant identity under the first-variable shift.
pub fn identities(nmax: usize) -> Vec<Check> {
    let mut out: Vec<Check> = (1..=nmax.min(4))
        .map(|n| Check::new("hecke basis change round trip", format!("S_{n}"), hecke_round_trip(n)))
        .collect();
    let points = rational_points(4, 20, 0x7117de);
    out.extend(par::flat_map(perms_up_to(nmax.min(4)), |(n, w)| {
        let item = label(&w, n);
        let mut out = Vec::new();
        let g = grothendieck(&w, true);
        let ginv = grothendieck(&w.inverse(), true).swap_alphabets(Alphabet::X, Alphabet::Y);
        out.push(Check::new("grothendieck symmetry", &item, *g == ginv));
        out.push(Check::new("grothendieck cauchy", &item, groth_cauchy(&w, n) == *g));
        if n <= 3 {
            let h = hpolynomial(&w, n, true, HMethod::Operator);
            let hinv = hpolynomial(&w.inverse(), n, true, HMethod::Operator).swap_alphabets(Alphabet::X, Alphabet::Y);
            out.push(Check::new("h symmetry", &item, h == hinv));
            out.push(Check::new("h cauchy", &item, h_cauchy(&w, n) == h));
            let (l, r) = tilde_sides(&w, n);
            out.push(Check::new("h tilde identity", &item, l == r));
        }
        if n == 4 {
            let ok = points.iter().all(|pt| {
                let (l, r) = tilde_at_point(&w, n, pt);
                l == r
            });
            out.push(Check::new("h tilde identity at rational points", &item, ok));
        }
        if n >= 2 {
            let ok = all_permutations(n - 1).iter().all(|v| {
                (1..n).all(|j| {
                    let (l, r) = lr_identity_sides(&w, v, j, n).expect("in range");
                    l == r
                })
            });
            out.push(Check::new("shifted first-column constants", &item, ok));
        }
        out
    }));
    out
}

/// First-variable substitution by chains, constants and operators; the
/// single-variable insertion; two-set decompositions in all three bases;
/// extension independence; monomial coefficients as structure constants.
pub fn substitution(nmax: usize) -> Vec<Check> {
    let mut out = par::flat_map(perms_up_to(nmax.min(5)), |(n, w)| {
        let item = label(&w, n);
        let mut out = Vec::new();
        let chains = substitute_first_variable(&w, n, FirstVariableMethod::Chains).expect("fits");
        let consts = substitute_first_variable(&w, n, FirstVariableMethod::Constants).expect("fits");
        let ls = ls_substitution(&w, n).expect("fits");
        out.push(Check::new(
            "first variable methods",
            &item,
            chains.terms == consts.terms && chains.terms == ls.terms,
        ));
        let g = grothendieck(&w, false);
        out.push(Check::new(
            "first variable reconstruction",
            &item,
            chains.reconstruct() == insert_variable(&g, 1),
        ));
        if n <= 4 {
            let ok = (1..n).all(|q| {
                substitute_single(&w, q, n).is_ok_and(|e| e.reconstruct() == insert_variable(&g, q))
            });
            out.push(Check::new("inserted variable reconstruction", &item, ok));
            for basis in [FactorBasis::Grothendieck, FactorBasis::Schubert, FactorBasis::H] {
                let ok = two_part_compositions(n).into_iter().all(|(p, q)| {
                    two_set_checks(&w, &p, &q, basis)
                });
                out.push(Check::new(&format!("two-set decomposition {basis:?}").to_lowercase(), &item, ok));
            }
            out.push(Check::new("monomial coefficients as constants", &item, monomial_constants(&w, n)));
        }
        out
    });
    if nmax >= 3 {
        let k = nmax.min(3);
        out.push(Check::new(
            "extension independence",
            format!("k = {k}"),
            extension_identity_failures(k).is_empty(),
        ));
    }
    out
}

fn two_set_checks(w: &Permutation, p: &[usize], q: &[usize], basis: FactorBasis) -> bool {
    let Ok(comp) = SetComposition::new(vec![p.to_vec(), q.to_vec()]) else { return false };
    let Ok(ext) = two_set_extension(w, p, q, basis) else { return false };
    let Ok(e) = decompose_with(w, &ext, basis) else { return false };
    check_decomposition(w, &comp, &ext, &e).unwrap_or(false)
}

/// All (P, Q) with P ⊔ Q = [n], both nonempty.
pub fn two_part_compositions(n: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    (1u64..(1 << n) - 1)
        .map(|mask| {
            let p = (1..=n).filter(|i| mask >> (i - 1) & 1 == 1).collect();
            let q = (1..=n).filter(|i| mask >> (i - 1) & 1 == 0).collect();
            (p, q)
        })
        .collect()
}

/// coefficient(𝔖_w, x^l) against the structure constant for every l with
/// l_i ≤ n − i.
pub fn monomial_constants(w: &Permutation, n: usize) -> bool {
    exponent_vectors(n).into_iter().all(|l| {
        schubert_coefficient_as_constant(w, &l).is_ok_and(|(c, d)| c == d)
    })
}

pub fn exponent_vectors(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for i in 1..=n {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<usize>| {
                (0..=n - i).map(move |e| {
                    let mut v = prefix.clone();
                    v.push(e);
                    v
                })
            })
            .collect();
    }
    out
}

/// Σ |c| over the terms of a Grothendieck polynomial.
pub fn coefficient_mass(p: &Polynomial) -> BigInt {
    p.terms().fold(BigInt::zero(), |acc, (_, c)| acc + c.abs())
}

/// c^w_{u,v} in S_n, used by the CLI.
pub fn constant(u: &Permutation, v: &Permutation, w: &Permutation, n: usize, family: Family) -> BigInt {
    structure_constants(u, v, n, family).coefficient(w)
}
