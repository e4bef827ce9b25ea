//! Chains in the k-Bruhat order: the K-theoretic Monk rule, marked chains,
//! climbing marked chains and their bijection with left-marked rc-graphs.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use serde::ser::SerializeStruct;
use serde::Serialize;
use thiserror::Error;

use crate::basis::{cell_factor, BasisExpansion, Family};
use crate::par;
use crate::perm::{bruhat_covers, is_cover, Permutation};
use crate::pipedream::{MarkedRcGraph, RcGraph, RcGraphError, Side};
use crate::poly::Polynomial;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChainError {
    #[error("({a}, {b}) is not a Bruhat cover of {w}")]
    NotACover { w: Permutation, a: usize, b: usize },
    #[error("{0} is not in S_{1}")]
    OutsideRank(Permutation, usize),
    #[error("the chain does not climb to the longest element")]
    NotClimbing,
    #[error("the marking is not valid")]
    BadMarking,
    #[error("expected a left-marked rc-graph")]
    WrongSide,
    #[error(transparent)]
    RcGraph(#[from] RcGraphError),
}

/// Which marking rule a chain follows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Marking {
    /// Segments cut before the marks are increasing; the first cover is marked.
    Groth,
    /// Segments are decreasing; the first cover may be unmarked.
    Hpoly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChainCover {
    pub a: usize,
    pub b: usize,
    pub marked: bool,
}

impl ChainCover {
    pub fn new(a: usize, b: usize, marked: bool) -> Self {
        Self { a, b, marked }
    }
}

/// Increasing step: a grows, or a stays and b drops.
fn increasing(prev: &ChainCover, cur: &ChainCover) -> bool {
    prev.a < cur.a || (prev.a == cur.a && prev.b > cur.b)
}

fn decreasing(prev: &ChainCover, cur: &ChainCover) -> bool {
    prev.a > cur.a || (prev.a == cur.a && prev.b < cur.b)
}

/// Whether a single segment (one k-Bruhat order) is validly marked.
fn segment_valid(covers: &[ChainCover], marking: Marking) -> bool {
    covers.iter().enumerate().all(|(t, c)| {
        if c.marked {
            return true;
        }
        match (t, marking) {
            (0, Marking::Groth) => false,
            (0, Marking::Hpoly) => true,
            (_, Marking::Groth) => increasing(&covers[t - 1], c),
            (_, Marking::Hpoly) => decreasing(&covers[t - 1], c),
        }
    })
}

/// A marked chain w → w·t_{a1,b1} → ... in the Bruhat order of S_n.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarkedChain {
    rank: usize,
    start: Permutation,
    covers: Vec<ChainCover>,
}

impl Serialize for MarkedChain {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Cover {
            t: [usize; 2],
            marked: bool,
        }
        let covers: Vec<Cover> = self
            .covers
            .iter()
            .map(|c| Cover {
                t: [c.a, c.b],
                marked: c.marked,
            })
            .collect();
        let mut st = s.serialize_struct("MarkedChain", 2)?;
        st.serialize_field("start", &self.start.one_line(self.rank))?;
        st.serialize_field("covers", &covers)?;
        st.end()
    }
}

impl MarkedChain {
    pub fn new(rank: usize, start: Permutation, covers: Vec<ChainCover>) -> Result<Self, ChainError> {
        if !start.fits(rank) {
            return Err(ChainError::OutsideRank(start, rank));
        }
        let mut u = start.clone();
        for c in &covers {
            if c.a >= c.b || c.b > rank || !is_cover(&u, c.a, c.b) {
                return Err(ChainError::NotACover {
                    w: u,
                    a: c.a,
                    b: c.b,
                });
            }
            u = u.swap_positions(c.a, c.b);
        }
        Ok(Self {
            rank,
            start,
            covers,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn start(&self) -> &Permutation {
        &self.start
    }

    pub fn covers(&self) -> &[ChainCover] {
        &self.covers
    }

    /// All permutations along the chain, start included.
    pub fn permutations(&self) -> Vec<Permutation> {
        let mut out = vec![self.start.clone()];
        for c in &self.covers {
            let next = out.last().unwrap().swap_positions(c.a, c.b);
            out.push(next);
        }
        out
    }

    pub fn end(&self) -> Permutation {
        self.permutations().pop().unwrap()
    }

    /// ℓ(γ).
    pub fn length(&self) -> usize {
        self.covers.len()
    }

    /// m(γ).
    pub fn marks(&self) -> usize {
        self.covers.iter().filter(|c| c.marked).count()
    }

    /// (−1)^{ℓ(γ) − m(γ)}.
    pub fn sign(&self) -> i64 {
        if (self.length() - self.marks()) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Marks per level, α_k for k = 1, ..., n−1.
    pub fn weight(&self) -> Vec<u32> {
        let mut alpha = vec![0; self.rank.saturating_sub(1)];
        for c in self.covers.iter().filter(|c| c.marked) {
            alpha[c.a - 1] += 1;
        }
        alpha
    }

    /// For each cover u → u·t_{a,b}, the staircase cell (a, u(a)).
    pub fn cells(&self) -> Vec<(usize, usize)> {
        self.permutations()
            .iter()
            .zip(&self.covers)
            .map(|(u, c)| (c.a, u.get(c.a)))
            .collect()
    }

    /// Whether the chain lives in one k-Bruhat order.
    pub fn in_k_bruhat(&self, k: usize) -> bool {
        self.covers.iter().all(|c| c.a <= k && k < c.b)
    }

    /// Validity as a single-level marked chain.
    pub fn is_marked_chain(&self, marking: Marking) -> bool {
        self.covers.is_empty() || segment_valid(&self.covers, marking)
    }

    /// Whether the chain climbs from its start to ω_0: the covers of level k
    /// all have a = k, start once positions 1..k−1 hold n, n−1, ..., and the
    /// chain ends at the longest element.
    pub fn is_climbing(&self) -> bool {
        let n = self.rank;
        let perms = self.permutations();
        let settled = |u: &Permutation, k: usize| (1..k).all(|p| u.get(p) == n + 1 - p);
        let monotone = self.covers.windows(2).all(|w| w[0].a <= w[1].a);
        monotone
            && self
                .covers
                .iter()
                .zip(&perms)
                .all(|(c, u)| settled(u, c.a) && c.b > c.a)
            && perms.last().unwrap() == &Permutation::longest(n)
    }

    /// The maximal runs of covers sharing a level.
    pub fn segments(&self) -> Vec<&[ChainCover]> {
        self.covers.chunk_by(|x, y| x.a == y.a).collect()
    }

    /// Validity as a climbing marked chain under the given rule.
    pub fn is_climbing_marked(&self, marking: Marking) -> bool {
        self.is_climbing() && self.segments().iter().all(|s| segment_valid(s, marking))
    }
}

/// Marked chains in the k-Bruhat order of S_n from w with at most `max_marks` marks.
pub fn marked_chains(w: &Permutation, n: usize, k: usize, max_marks: usize) -> Vec<MarkedChain> {
    fn grow(
        u: &Permutation,
        n: usize,
        k: usize,
        max_marks: usize,
        path: &mut Vec<ChainCover>,
        marks: usize,
        out: &mut Vec<Vec<ChainCover>>,
    ) {
        if !path.is_empty() {
            out.push(path.clone());
        }
        for cover in bruhat_covers(u, n, Some(k)) {
            let mut options = Vec::with_capacity(2);
            if marks < max_marks {
                options.push(true);
            }
            let cur = ChainCover::new(cover.a, cover.b, false);
            if path.last().is_some_and(|p| increasing(p, &cur)) {
                options.push(false);
            }
            for marked in options {
                path.push(ChainCover::new(cover.a, cover.b, marked));
                grow(&cover.target, n, k, max_marks, path, marks + marked as usize, out);
                path.pop();
            }
        }
    }
    if max_marks == 0 {
        return Vec::new();
    }
    let firsts = bruhat_covers(w, n, Some(k));
    let mut out: Vec<MarkedChain> = par::flat_map(firsts, |cover| {
        let mut found = Vec::new();
        let mut path = vec![ChainCover::new(cover.a, cover.b, true)];
        grow(&cover.target, n, k, max_marks, &mut path, 1, &mut found);
        found
            .into_iter()
            .map(|covers| MarkedChain {
                rank: n,
                start: w.clone(),
                covers,
            })
            .collect()
    });
    out.sort();
    out
}

/// x_1 · 𝒢_w = Σ (−1)^{ℓ(γ)−1} 𝒢_{w(γ)} over increasing 1-Bruhat chains in S_n.
pub fn monk_multiply_x1(w: &Permutation, n: usize) -> BasisExpansion {
    monk_power(w, 1, n)
}

/// x_1^j · 𝒢_w = Σ (−1)^{ℓ(γ)−j} 𝒢_{w(γ)} over marked 1-Bruhat chains in S_n with j marks.
pub fn monk_power(w: &Permutation, j: usize, n: usize) -> BasisExpansion {
    assert!(w.fits(n), "{w} is not in S_{n}");
    let mut coeffs: BTreeMap<Permutation, BigInt> = BTreeMap::new();
    if j == 0 {
        coeffs.insert(w.clone(), BigInt::from(1));
    }
    for chain in marked_chains(w, n, 1, j) {
        if chain.marks() == j {
            *coeffs.entry(chain.end()).or_default() += chain.sign();
        }
    }
    coeffs.retain(|_, c| *c != BigInt::from(0));
    BasisExpansion {
        n,
        family: Family::Grothendieck,
        coeffs,
    }
}

/// Unmarked climbing chains from w to ω_0, as cover labels.
pub fn climbing_chains(w: &Permutation, n: usize) -> Vec<Vec<(usize, usize)>> {
    type Memo = HashMap<(Permutation, usize), Vec<Vec<(usize, usize)>>>;
    fn climb(u: &Permutation, n: usize, k: usize, memo: &mut Memo) -> Vec<Vec<(usize, usize)>> {
        if k >= n {
            return vec![Vec::new()];
        }
        if u.get(k) == n + 1 - k {
            return climb(u, n, k + 1, memo);
        }
        if let Some(hit) = memo.get(&(u.clone(), k)) {
            return hit.clone();
        }
        let mut out = Vec::new();
        for cover in bruhat_covers(u, n, Some(k)).into_iter().filter(|c| c.a == k) {
            for mut rest in climb(&cover.target, n, k, memo) {
                rest.insert(0, (k, cover.b));
                out.push(rest);
            }
        }
        memo.insert((u.clone(), k), out.clone());
        out
    }
    assert!(w.fits(n), "{w} is not in S_{n}");
    // positions 1..k−1 of a climbing chain's k-th segment are already settled;
    // w itself may already carry some of them
    let mut level = 1;
    while level < n && w.get(level) == n + 1 - level {
        level += 1;
    }
    if level >= n {
        return vec![Vec::new()];
    }
    let firsts: Vec<_> = bruhat_covers(w, n, Some(level))
        .into_iter()
        .filter(|c| c.a == level)
        .collect();
    let mut out = par::flat_map(firsts, |cover| {
        let mut memo = Memo::new();
        climb(&cover.target, n, level, &mut memo)
            .into_iter()
            .map(|mut rest| {
                rest.insert(0, (level, cover.b));
                rest
            })
            .collect()
    });
    out.sort();
    out
}

/// Climbing marked chains from w to ω_0 under the given marking rule.
pub fn enumerate_climbing_marked_chains(w: &Permutation, n: usize, marking: Marking) -> Vec<MarkedChain> {
    let mut out = Vec::new();
    for labels in climbing_chains(w, n) {
        // forced marks and optional positions, level by level
        let mut forced = vec![false; labels.len()];
        for t in 0..labels.len() {
            let prev_larger = t > 0 && labels[t - 1].0 == labels[t].0 && labels[t - 1].1 > labels[t].1;
            let first = t == 0 || labels[t - 1].0 != labels[t].0;
            forced[t] = match marking {
                Marking::Groth => first || !prev_larger,
                Marking::Hpoly => prev_larger,
            };
        }
        let optional: Vec<usize> = (0..labels.len()).filter(|&t| !forced[t]).collect();
        for mask in 0u64..(1 << optional.len()) {
            let mut marked = forced.clone();
            for (bit, &t) in optional.iter().enumerate() {
                marked[t] = mask >> bit & 1 == 1;
            }
            let covers = labels
                .iter()
                .zip(&marked)
                .map(|(&(a, b), &m)| ChainCover::new(a, b, m))
                .collect();
            out.push(MarkedChain {
                rank: n,
                start: w.clone(),
                covers,
            });
        }
    }
    out.sort();
    out
}

/// Σ (−1)^{ℓ(γ)−m(γ)} 𝒢_{ω_0}/μ(γ): each marked cover removes its cell factor.
fn chain_sum(w: &Permutation, n: usize, marking: Marking, double: bool) -> Polynomial {
    let chains = enumerate_climbing_marked_chains(w, n, marking);
    par::map(chains, |chain| {
        let removed: BTreeSet<(usize, usize)> = chain
            .cells()
            .into_iter()
            .zip(chain.covers())
            .filter(|(_, c)| c.marked)
            .map(|(cell, _)| cell)
            .collect();
        let mut term = Polynomial::constant(chain.sign());
        for i in 1..n {
            for j in 1..=n - i {
                if !removed.contains(&(i, j)) {
                    term = &term * &cell_factor(i, j, double);
                }
            }
        }
        term
    })
    .into_iter()
    .sum()
}

/// 𝒢_w from climbing marked chains; x^δ/x^{α(γ)} in the single case.
pub fn groth_from_chains(w: &Permutation, n: usize, double: bool) -> Polynomial {
    chain_sum(w, n, Marking::Groth, double)
}

/// ℋ_w from climbing chains with the decreasing marking.
pub fn h_from_chains(w: &Permutation, n: usize, double: bool) -> Polynomial {
    chain_sum(w, n, Marking::Hpoly, double)
}

/// The climbing marked chain of a left-marked rc-graph: fill the missing
/// cells in lexicographic order; a cover is marked unless its cell is a mark.
pub fn rcgraph_to_chain(graph: &MarkedRcGraph) -> Result<MarkedChain, ChainError> {
    if graph.side != Side::Left {
        return Err(ChainError::WrongSide);
    }
    let n = graph.base.rank();
    let mut cells = graph.base.crossings().clone();
    let mut u = graph.base.permutation();
    let start = u.clone();
    let mut covers = Vec::new();
    for i in 1..n {
        for j in 1..=n - i {
            if cells.contains(&(i, j)) {
                continue;
            }
            cells.insert((i, j));
            let next = RcGraph::new(n, cells.iter().copied())?.permutation();
            let t = u.inverse().compose(&next);
            let moved: Vec<usize> = (1..=n).filter(|&p| t.get(p) != p).collect();
            let (a, b) = (moved[0], moved[1]);
            covers.push(ChainCover::new(a, b, !graph.marks.contains(&(i, j))));
            u = next;
        }
    }
    MarkedChain::new(n, start, covers)
}

/// Inverse of [`rcgraph_to_chain`].
pub fn chain_to_rcgraph(chain: &MarkedChain) -> Result<MarkedRcGraph, ChainError> {
    if !chain.is_climbing_marked(Marking::Groth) {
        return Err(ChainError::BadMarking);
    }
    let n = chain.rank();
    let cells = chain.cells();
    let mut crossings: BTreeSet<(usize, usize)> = (1..n)
        .flat_map(|i| (1..=n - i).map(move |j| (i, j)))
        .collect();
    for c in &cells {
        crossings.remove(c);
    }
    let base = RcGraph::new(n, crossings)?;
    if &base.permutation() != chain.start() {
        return Err(ChainError::NotClimbing);
    }
    let marks = cells
        .into_iter()
        .zip(chain.covers())
        .filter(|(_, c)| !c.marked)
        .map(|(cell, _)| cell)
        .collect();
    Ok(MarkedRcGraph::new(base, marks, Side::Left)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{expand_grothendieck, grothendieck, hpolynomial, stable_expansion, HMethod};
    use crate::perm::all_permutations;
    use crate::pipedream::enumerate_marked_rcgraphs;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn poly(s: &str) -> Polynomial {
        s.parse().unwrap()
    }

    #[test]
    fn monk_examples() {
        let e = monk_multiply_x1(&Permutation::identity(), 3);
        assert_eq!(e.coeffs, BTreeMap::from([(p("213"), BigInt::from(1))]));
        let m = monk_multiply_x1(&p("132"), 3);
        let expected = BTreeMap::from([
            (p("312"), BigInt::from(1)),
            (p("231"), BigInt::from(1)),
            (p("321"), BigInt::from(-1)),
        ]);
        assert_eq!(m.coeffs, expected);
        assert!(monk_multiply_x1(&Permutation::longest(3), 3).is_empty());
    }

    #[test]
    fn monk_matches_multiplication() {
        for w in all_permutations(4) {
            let product = &Polynomial::x(1) * &*grothendieck(&w, false);
            assert_eq!(monk_multiply_x1(&w, 5).coeffs, stable_expansion(&product, Family::Grothendieck).unwrap());
            for j in 1..=3 {
                let product = &Polynomial::x(1).pow(j as u32) * &*grothendieck(&w, false);
                let expected = expand_grothendieck(&product, 4 + j).unwrap();
                assert_eq!(monk_power(&w, j, 4 + j).coeffs, expected.coeffs, "{w} {j}");
            }
        }
    }

    #[test]
    fn sample_marked_chain_is_valid() {
        let chain = MarkedChain::new(
            6,
            p("132654"),
            vec![
                ChainCover::new(1, 3, true),
                ChainCover::new(1, 2, false),
                ChainCover::new(1, 6, true),
                ChainCover::new(1, 5, false),
                ChainCover::new(1, 4, false),
            ],
        )
        .unwrap();
        assert_eq!(chain.end(), p("621543"));
        assert!(chain.is_marked_chain(Marking::Groth));
        assert!(chain.in_k_bruhat(1));
        assert!(MarkedChain::new(3, p("123"), vec![ChainCover::new(1, 3, true)]).is_err());
    }

    #[test]
    fn chains_of_1432() {
        let w = p("1432");
        let labels = climbing_chains(&w, 4);
        assert_eq!(labels.len(), 5);
        assert!(labels.contains(&vec![(1, 4), (1, 3), (1, 2)]));
        let marked = enumerate_climbing_marked_chains(&w, 4, Marking::Groth);
        assert_eq!(marked.len(), 11);
        let mut weights: Vec<Vec<u32>> = marked.iter().map(|c| c.weight()).collect();
        weights.sort();
        assert_eq!(weights.iter().filter(|w| w == &&vec![2, 0, 0]).count(), 2);
        assert_eq!(weights.iter().filter(|w| w == &&vec![1, 0, 0]).count(), 1);
        assert!(marked.iter().all(|c| c.is_climbing_marked(Marking::Groth)));
        let g = poly(
            "x1^2*x2 + x1^2*x3 + x1*x2^2 + x1*x2*x3 + x2^2*x3 - 2*x1^2*x2*x3 \
             - x1^2*x2^2 - 2*x1*x2^2*x3 + x1^2*x2^2*x3",
        );
        assert_eq!(groth_from_chains(&w, 4, false), g);
        assert_eq!(groth_from_chains(&w, 4, true).set_zero(crate::poly::Alphabet::Y), g);
    }

    #[test]
    fn h_chain_terms_of_1432() {
        let w = p("1432");
        let chains = enumerate_climbing_marked_chains(&w, 4, Marking::Hpoly);
        let term_of = |labels: &[(usize, usize)]| -> Polynomial {
            chains
                .iter()
                .filter(|c| c.covers().iter().map(|c| (c.a, c.b)).collect::<Vec<_>>() == labels)
                .map(|c| {
                    let removed: BTreeSet<_> = c
                        .cells()
                        .into_iter()
                        .zip(c.covers())
                        .filter(|(_, k)| k.marked)
                        .map(|(x, _)| x)
                        .collect();
                    let mut t = Polynomial::constant(c.sign());
                    for (i, j) in [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (3, 1)] {
                        if !removed.contains(&(i, j)) {
                            t = &t * &Polynomial::x(i);
                        }
                    }
                    t
                })
                .sum()
        };
        assert_eq!(term_of(&[(1, 2), (2, 3), (3, 4)]), poly("x1^2*x2*(1-x1)*(1-x2)*(1-x3)"));
        assert_eq!(term_of(&[(1, 2), (2, 4), (2, 3)]), poly("x1^2*x3*(1-x1)*(1-x2)"));
        assert_eq!(term_of(&[(1, 3), (1, 2), (3, 4)]), poly("x1*x2^2*(1-x1)*(1-x3)"));
        assert_eq!(term_of(&[(1, 4), (1, 2), (2, 3)]), poly("x1*x2*x3*(1-x1)*(1-x2)"));
        assert_eq!(term_of(&[(1, 4), (1, 3), (1, 2)]), poly("x2^2*x3*(1-x1)"));
    }

    #[test]
    fn chain_formulas_match_operators() {
        for n in 1..=4 {
            for w in all_permutations(n) {
                for double in [false, true] {
                    assert_eq!(groth_from_chains(&w, n, double), *grothendieck(&w, double), "{w}");
                    assert_eq!(
                        h_from_chains(&w, n, double),
                        hpolynomial(&w, n, double, HMethod::Operator),
                        "{w}"
                    );
                }
            }
        }
        let top = Permutation::longest(4);
        assert_eq!(groth_from_chains(&top, 4, false), crate::basis::staircase(4));
    }

    #[test]
    fn bijection_with_left_marked_rcgraphs() {
        for w in all_permutations(4) {
            let graphs = enumerate_marked_rcgraphs(&w, 4, Side::Left);
            let chains = enumerate_climbing_marked_chains(&w, 4, Marking::Groth);
            let mut image: Vec<MarkedChain> = graphs
                .iter()
                .map(|g| {
                    let c = rcgraph_to_chain(g).unwrap();
                    assert_eq!(&chain_to_rcgraph(&c).unwrap(), g);
                    assert_eq!(c.length() - c.marks(), g.marks.len());
                    c
                })
                .collect();
            image.sort();
            assert_eq!(image, chains, "{w}");
        }
    }

    #[test]
    fn chain_json() {
        let c = MarkedChain::new(3, p("132"), vec![ChainCover::new(1, 2, true)]).unwrap();
        assert_eq!(
            serde_json::to_string(&c).unwrap(),
            r#"{"start":[1,3,2],"covers":[{"t":[1,2],"marked":true}]}"#
        );
    }
}
