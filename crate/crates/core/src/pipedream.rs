//! Rc-graphs (reduced pipe dreams), their marked and double versions, and the
//! formulas expressing 𝒢_w and ℋ_w as sums over them.
//!
//! Positions (i, j) with i + j ≤ n are read row by row, top to bottom, right
//! to left within a row; the letter of (i, j) is i + j − 1. A double
//! rc-graph lives on a taller grid: rows −(n−1), ..., −1 read left to right,
//! followed by the ordinary rows.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::hecke::{cancelling_position, is_reduced};
use crate::par;
use crate::perm::Permutation;
use crate::poly::{Polynomial, Var};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RcGraphError {
    #[error("position ({0}, {1}) lies outside the staircase of rank {2}")]
    OutsideStaircase(i32, usize, usize),
    #[error("the word of the diagram is not reduced")]
    NotReduced,
    #[error("position ({0}, {1}) cannot be marked")]
    BadMark(i32, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Right,
    Left,
}

/// Which of the two equivalent sums to evaluate for 𝒢.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GrothVariant {
    /// Signed sum over marked rc-graphs.
    MarkedSum,
    /// One term per rc-graph, with a (1 − x_i)(1 − y_j) factor per absorbable position.
    AbsorbProduct,
}

/// Which of the two equivalent sums to evaluate for ℋ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HVariant {
    MarkedSum,
    ComplementProduct,
}

pub type Cell = (i32, usize);

/// Positions of a (double) staircase in reading order.
#[derive(Clone, Debug)]
pub struct Grid {
    rank: usize,
    cells: Vec<Cell>,
    letters: Vec<usize>,
    index: HashMap<Cell, usize>,
}

impl Grid {
    fn from_cells(rank: usize, cells: Vec<Cell>) -> Self {
        let letters = cells
            .iter()
            .map(|&(i, j)| i.unsigned_abs() as usize + j - 1)
            .collect();
        let index = cells.iter().enumerate().map(|(k, &c)| (c, k)).collect();
        Self {
            rank,
            cells,
            letters,
            index,
        }
    }

    /// Rows 1..n−1 of the staircase.
    pub fn single(rank: usize) -> Self {
        let mut cells = Vec::new();
        for i in 1..rank {
            for j in (1..=rank - i).rev() {
                cells.push((i as i32, j));
            }
        }
        Self::from_cells(rank, cells)
    }

    /// Rows −(n−1)..−1 (left to right) above rows 1..n−1 (right to left).
    pub fn double(rank: usize) -> Self {
        let mut cells = Vec::new();
        for i in (1..rank).rev() {
            for j in 1..=rank - i {
                cells.push((-(i as i32), j));
            }
        }
        cells.extend(Self::single(rank).cells);
        Self::from_cells(rank, cells)
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    fn indices(&self, cells: impl IntoIterator<Item = Cell>) -> Vec<usize> {
        let mut out: Vec<usize> = cells.into_iter().map(|c| self.index[&c]).collect();
        out.sort_unstable();
        out
    }

    fn word(&self, subset: &[usize]) -> Vec<usize> {
        subset.iter().map(|&k| self.letters[k]).collect()
    }

    /// All subsets (as sorted index lists) whose word is a reduced word for w.
    fn enumerate(&self, w: &Permutation) -> Vec<Vec<usize>> {
        // state: (next cell, chosen cells, w still to be produced: cur⁻¹·w)
        type State = (usize, Vec<usize>, Permutation);
        fn dfs(grid: &Grid, state: State, out: &mut Vec<Vec<usize>>, stop: usize) {
            let (k, chosen, rest) = state;
            let left = rest.length();
            if left == 0 {
                out.push(chosen);
                return;
            }
            if k == stop || grid.cells.len() - k < left {
                if k == stop && stop < grid.cells.len() {
                    // hand the partial state back to the caller
                    let mut marker = chosen;
                    marker.push(usize::MAX);
                    out.push(marker);
                }
                return;
            }
            let a = grid.letters[k];
            if rest.has_left_descent(a) {
                let mut with = chosen.clone();
                with.push(k);
                dfs(grid, (k + 1, with, rest.swap_values(a, a + 1)), out, stop);
            }
            dfs(grid, (k + 1, chosen, rest), out, stop);
        }
        // split the search after the first row so the branches run in parallel
        let first_row = self
            .cells
            .iter()
            .take_while(|c| Some(c.0) == self.cells.first().map(|f| f.0))
            .count();
        let mut seeds = Vec::new();
        dfs(self, (0, Vec::new(), w.clone()), &mut seeds, first_row);
        let mut results: Vec<Vec<usize>> = Vec::new();
        let mut partial = Vec::new();
        for s in seeds {
            if s.last() == Some(&usize::MAX) {
                partial.push(s[..s.len() - 1].to_vec());
            } else {
                results.push(s);
            }
        }
        let grown = par::flat_map(partial, |chosen| {
            let rest = Permutation::from_word(&self.word(&chosen))
                .inverse()
                .compose(w);
            let mut out = Vec::new();
            dfs(self, (first_row, chosen, rest), &mut out, usize::MAX);
            out
        });
        results.extend(grown);
        results.sort();
        results
    }

    /// Absorbable vacant cells of a reduced subset, on the given side.
    fn absorbable(&self, subset: &[usize], side: Side) -> Vec<usize> {
        (0..self.cells.len())
            .filter(|r| subset.binary_search(r).is_err())
            .filter(|&r| {
                let t = cancelling_position(&self.letters, subset, r).expect("reduced subset");
                match (t, side) {
                    (Some(t), Side::Right) => t < r,
                    (Some(t), Side::Left) => t > r,
                    (None, _) => false,
                }
            })
            .collect()
    }
}

/// Weights of a cell in the 𝒢 and ℋ formulas: f for a crossing or mark, g for (1 − f).
struct Weights {
    f: Vec<Polynomial>,
    g: Vec<Polynomial>,
}

impl Weights {
    fn single(grid: &Grid, double: bool) -> Self {
        let f = grid
            .cells
            .iter()
            .map(|&(i, j)| crate::basis::cell_factor(i as usize, j, double))
            .collect();
        let g = grid
            .cells
            .iter()
            .map(|&(i, j)| crate::basis::cell_complement(i as usize, j, double))
            .collect();
        Self { f, g }
    }

    /// x_i for i > 0 and y_{−i} for i < 0.
    fn stacked(grid: &Grid) -> Self {
        let var = |i: i32| {
            if i > 0 {
                Var::x(i as usize)
            } else {
                Var::y((-i) as usize)
            }
        };
        let f = grid.cells.iter().map(|c| Polynomial::var(var(c.0))).collect();
        let g = grid.cells.iter().map(|c| Polynomial::one_minus(var(c.0))).collect();
        Self { f, g }
    }

    fn product(&self, which: &[Polynomial], cells: impl IntoIterator<Item = usize>) -> Polynomial {
        let mut out = Polynomial::one();
        for k in cells {
            out = &out * &which[k];
        }
        out
    }
}

fn groth_sum(
    grid: &Grid,
    weights: &Weights,
    graphs: Vec<Vec<usize>>,
    length: usize,
    variant: GrothVariant,
    side: Side,
) -> Polynomial {
    par::map(graphs, |set| {
        let abs = grid.absorbable(&set, side);
        let base = weights.product(&weights.f, set.iter().copied());
        match variant {
            GrothVariant::AbsorbProduct => &base * &weights.product(&weights.g, abs),
            GrothVariant::MarkedSum => {
                let mut total = Polynomial::zero();
                for mask in 0u64..(1 << abs.len()) {
                    let marks = abs.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1);
                    let term = &base * &weights.product(&weights.f, marks.map(|(_, &k)| k));
                    let size = set.len() + mask.count_ones() as usize;
                    if (size - length) % 2 == 0 {
                        total += &term;
                    } else {
                        total -= &term;
                    }
                }
                total
            }
        }
    })
    .into_iter()
    .sum()
}

fn h_sum(
    grid: &Grid,
    weights: &Weights,
    graphs: Vec<Vec<usize>>,
    variant: HVariant,
    side: Side,
) -> Polynomial {
    let all = grid.cells.len();
    par::map(graphs, |set| {
        let abs = grid.absorbable(&set, side);
        let base = weights.product(&weights.f, set.iter().copied());
        let outside = |taken: &[usize]| {
            let taken: BTreeSet<usize> = taken.iter().copied().collect();
            weights.product(&weights.g, (0..all).filter(|k| !taken.contains(k)))
        };
        match variant {
            HVariant::ComplementProduct => {
                let mut taken = set.clone();
                taken.extend(&abs);
                &base * &outside(&taken)
            }
            HVariant::MarkedSum => {
                let mut total = Polynomial::zero();
                for mask in 0u64..(1 << abs.len()) {
                    let marks: Vec<usize> = abs
                        .iter()
                        .enumerate()
                        .filter(|(b, _)| mask >> b & 1 == 1)
                        .map(|(_, &k)| k)
                        .collect();
                    let mut taken = set.clone();
                    taken.extend(&marks);
                    let term = &(&base * &weights.product(&weights.f, marks)) * &outside(&taken);
                    total += &term;
                }
                total
            }
        }
    })
    .into_iter()
    .sum()
}

/// A set of crossings in the staircase {(i, j) : i + j ≤ n} with a reduced word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RcGraph {
    rank: usize,
    crossings: BTreeSet<(usize, usize)>,
}

impl Serialize for RcGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let cells: Vec<[usize; 2]> = self.crossings.iter().map(|&(i, j)| [i, j]).collect();
        cells.serialize(s)
    }
}

impl RcGraph {
    pub fn new(
        rank: usize,
        crossings: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, RcGraphError> {
        let crossings: BTreeSet<(usize, usize)> = crossings.into_iter().collect();
        for &(i, j) in &crossings {
            if i == 0 || j == 0 || i + j > rank {
                return Err(RcGraphError::OutsideStaircase(i as i32, j, rank));
            }
        }
        let out = Self { rank, crossings };
        if !is_reduced(&out.word()) {
            return Err(RcGraphError::NotReduced);
        }
        Ok(out)
    }

    fn from_indices(grid: &Grid, set: &[usize]) -> Self {
        Self {
            rank: grid.rank,
            crossings: set
                .iter()
                .map(|&k| {
                    let (i, j) = grid.cells[k];
                    (i as usize, j)
                })
                .collect(),
        }
    }

    fn indices(&self, grid: &Grid) -> Vec<usize> {
        grid.indices(self.crossings.iter().map(|&(i, j)| (i as i32, j)))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn crossings(&self) -> &BTreeSet<(usize, usize)> {
        &self.crossings
    }

    pub fn contains(&self, cell: (usize, usize)) -> bool {
        self.crossings.contains(&cell)
    }

    /// Crossings in reading order.
    pub fn ordered(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self.crossings.iter().copied().collect();
        out.sort_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
        out
    }

    pub fn word(&self) -> Vec<usize> {
        self.ordered().iter().map(|&(i, j)| i + j - 1).collect()
    }

    /// The row indices of the crossings in reading order.
    pub fn compatible_sequence(&self) -> Vec<usize> {
        self.ordered().iter().map(|&(i, _)| i).collect()
    }

    pub fn permutation(&self) -> Permutation {
        Permutation::from_word(&self.word())
    }

    pub fn len(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty()
    }

    /// Reflection in the diagonal; an rc-graph for w⁻¹.
    pub fn transpose(&self) -> Self {
        Self {
            rank: self.rank,
            crossings: self.crossings.iter().map(|&(i, j)| (j, i)).collect(),
        }
    }

    /// Absorbable positions, from the Hecke algebra: inserting the position
    /// into the word leaves the Demazure product unchanged and cancels an
    /// earlier (right) or later (left) crossing.
    pub fn absorbable(&self, side: Side) -> BTreeSet<(usize, usize)> {
        let grid = Grid::single(self.rank);
        grid.absorbable(&self.indices(&grid), side)
            .into_iter()
            .map(|k| {
                let (i, j) = grid.cells[k];
                (i as usize, j)
            })
            .collect()
    }

    /// Absorbable positions read off the wiring diagram: the two pipes
    /// avoiding each other at the position cross northeast (right) or
    /// southwest (left) of it.
    pub fn absorbable_geometric(&self, side: Side) -> BTreeSet<(usize, usize)> {
        let tiles = self.trace_pipes();
        let crossing_of = |a: usize, b: usize| {
            self.crossings.iter().copied().find(|c| {
                let (l, d) = tiles[c];
                (l == a && d == b) || (l == b && d == a)
            })
        };
        let mut out = BTreeSet::new();
        for i in 1..self.rank {
            for j in 1..=self.rank - i {
                if self.contains((i, j)) {
                    continue;
                }
                let (l, d) = tiles[&(i, j)];
                if let Some((r, c)) = crossing_of(l, d) {
                    let hit = match side {
                        Side::Right => r < i && c > j,
                        Side::Left => r > i && c < j,
                    };
                    if hit {
                        out.insert((i, j));
                    }
                }
            }
        }
        out
    }

    /// For each tile, the pipes entering from the left and from below.
    fn trace_pipes(&self) -> HashMap<(usize, usize), (usize, usize)> {
        let n = self.rank;
        let mut tiles: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
        for pipe in 1..=n {
            let (mut r, mut c, mut from_left) = (pipe, 1usize, true);
            while r > 0 {
                let entry = tiles.entry((r, c)).or_insert((0, 0));
                if from_left {
                    entry.0 = pipe;
                } else {
                    entry.1 = pipe;
                }
                let cross = r + c <= n && self.contains((r, c));
                // a crossing keeps the direction; an elbow turns left→up and bottom→right
                let go_right = cross == from_left;
                if go_right {
                    c += 1;
                    from_left = true;
                } else {
                    r -= 1;
                    from_left = false;
                }
            }
        }
        tiles
    }

    /// ASCII drawing: `+` crossing, `.` elbow, and `marks` drawn with `mark`.
    pub fn render(&self, marks: &BTreeSet<(usize, usize)>, mark: char) -> String {
        let mut s = String::new();
        for i in 1..self.rank.max(1) {
            let _ = write!(s, "{i:>2} ");
            for j in 1..=self.rank - i {
                let ch = if self.contains((i, j)) {
                    '+'
                } else if marks.contains(&(i, j)) {
                    mark
                } else {
                    '.'
                };
                s.push(ch);
                s.push(' ');
            }
            s.truncate(s.trim_end().len());
            s.push('\n');
        }
        s
    }
}

/// An rc-graph together with a set of its absorbable positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MarkedRcGraph {
    pub base: RcGraph,
    #[serde(serialize_with = "cells_json")]
    pub marks: BTreeSet<(usize, usize)>,
    pub side: Side,
}

fn cells_json<S: serde::Serializer>(
    cells: &BTreeSet<(usize, usize)>,
    s: S,
) -> Result<S::Ok, S::Error> {
    let v: Vec<[usize; 2]> = cells.iter().map(|&(i, j)| [i, j]).collect();
    v.serialize(s)
}

impl MarkedRcGraph {
    pub fn new(
        base: RcGraph,
        marks: BTreeSet<(usize, usize)>,
        side: Side,
    ) -> Result<Self, RcGraphError> {
        let abs = base.absorbable(side);
        if let Some(&(i, j)) = marks.iter().find(|c| !abs.contains(c)) {
            return Err(RcGraphError::BadMark(i as i32, j));
        }
        Ok(Self { base, marks, side })
    }

    /// |R̂| = |R| + |marks|.
    pub fn size(&self) -> usize {
        self.base.len() + self.marks.len()
    }

    pub fn render(&self) -> String {
        let mark = match self.side {
            Side::Right => 'o',
            Side::Left => '#',
        };
        self.base.render(&self.marks, mark)
    }
}

/// All rc-graphs for w ∈ S_n, sorted.
pub fn enumerate_rcgraphs(w: &Permutation, n: usize) -> Vec<RcGraph> {
    assert!(w.fits(n), "{w} is not in S_{n}");
    let grid = Grid::single(n);
    let mut out: Vec<RcGraph> = grid
        .enumerate(w)
        .iter()
        .map(|s| RcGraph::from_indices(&grid, s))
        .collect();
    out.sort();
    out
}

/// All marked rc-graphs for w on the given side.
pub fn enumerate_marked_rcgraphs(w: &Permutation, n: usize, side: Side) -> Vec<MarkedRcGraph> {
    let mut out = Vec::new();
    for base in enumerate_rcgraphs(w, n) {
        let abs: Vec<(usize, usize)> = base.absorbable(side).into_iter().collect();
        for mask in 0u64..(1 << abs.len()) {
            let marks = abs
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, &c)| c)
                .collect();
            out.push(MarkedRcGraph {
                base: base.clone(),
                marks,
                side,
            });
        }
    }
    out.sort();
    out
}

/// The rc-graph whose row i holds crossings (i, 1), ..., (i, code_i).
pub fn bottom_rcgraph(w: &Permutation, n: usize) -> RcGraph {
    assert!(w.fits(n), "{w} is not in S_{n}");
    let cells = w
        .code()
        .into_iter()
        .enumerate()
        .flat_map(|(i, c)| (1..=c).map(move |j| (i + 1, j)));
    RcGraph::new(n, cells).expect("bottom rc-graph is reduced")
}

/// 𝒢_w from rc-graphs.
pub fn groth_from_rcgraphs(
    w: &Permutation,
    n: usize,
    variant: GrothVariant,
    side: Side,
    double: bool,
) -> Polynomial {
    assert!(w.fits(n), "{w} is not in S_{n}");
    let grid = Grid::single(n);
    let weights = Weights::single(&grid, double);
    groth_sum(&grid, &weights, grid.enumerate(w), w.length(), variant, side)
}

/// ℋ_w from rc-graphs.
pub fn h_from_rcgraphs(
    w: &Permutation,
    n: usize,
    variant: HVariant,
    side: Side,
    double: bool,
) -> Polynomial {
    assert!(w.fits(n), "{w} is not in S_{n}");
    let grid = Grid::single(n);
    let weights = Weights::single(&grid, double);
    h_sum(&grid, &weights, grid.enumerate(w), variant, side)
}

/// A pair of rc-graphs for u (lower) and v (upper) with v⁻¹u = w and
/// ℓ(w) = ℓ(u) + ℓ(v).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DoubleRcGraph {
    pub upper: RcGraph,
    pub lower: RcGraph,
}

impl DoubleRcGraph {
    fn from_indices(grid: &Grid, set: &[usize]) -> Self {
        let rank = grid.rank;
        let mut upper = BTreeSet::new();
        let mut lower = BTreeSet::new();
        for &k in set {
            let (i, j) = grid.cells[k];
            if i < 0 {
                upper.insert(((-i) as usize, j));
            } else {
                lower.insert((i as usize, j));
            }
        }
        Self {
            upper: RcGraph {
                rank,
                crossings: upper,
            },
            lower: RcGraph {
                rank,
                crossings: lower,
            },
        }
    }

    fn indices(&self, grid: &Grid) -> Vec<usize> {
        let up = self.upper.crossings.iter().map(|&(i, j)| (-(i as i32), j));
        let low = self.lower.crossings.iter().map(|&(i, j)| (i as i32, j));
        grid.indices(up.chain(low))
    }

    pub fn u(&self) -> Permutation {
        self.lower.permutation()
    }

    pub fn v(&self) -> Permutation {
        self.upper.permutation()
    }

    /// Absorbable positions of the stacked diagram; upper rows are negative.
    pub fn absorbable(&self, side: Side) -> BTreeSet<Cell> {
        let grid = Grid::double(self.lower.rank);
        grid.absorbable(&self.indices(&grid), side)
            .into_iter()
            .map(|k| grid.cells[k])
            .collect()
    }

    pub fn render(&self) -> String {
        let n = self.lower.rank;
        let mut s = String::new();
        for i in (1..n).rev() {
            let _ = write!(s, "{:>2} ", -(i as i32));
            let row: Vec<&str> = (1..=n - i)
                .map(|j| if self.upper.contains((i, j)) { "+" } else { "." })
                .collect();
            let _ = writeln!(s, "{}", row.join(" "));
        }
        s.push_str(&"-".repeat(2 * n + 1));
        s.push('\n');
        s.push_str(&self.lower.render(&BTreeSet::new(), '.'));
        s
    }
}

/// All double rc-graphs for w ∈ S_n, sorted.
pub fn enumerate_double_rcgraphs(w: &Permutation, n: usize) -> Vec<DoubleRcGraph> {
    assert!(w.fits(n), "{w} is not in S_{n}");
    let grid = Grid::double(n);
    let mut out: Vec<DoubleRcGraph> = grid
        .enumerate(w)
        .iter()
        .map(|s| DoubleRcGraph::from_indices(&grid, s))
        .collect();
    out.sort();
    out
}

/// 𝒢_w(x;y) from double rc-graphs, with x_{−i} read as y_i.
pub fn groth_from_double(w: &Permutation, n: usize, variant: GrothVariant, side: Side) -> Polynomial {
    assert!(w.fits(n), "{w} is not in S_{n}");
    let grid = Grid::double(n);
    let weights = Weights::stacked(&grid);
    groth_sum(&grid, &weights, grid.enumerate(w), w.length(), variant, side)
}

/// ℋ_w(x;y) from double rc-graphs.
pub fn h_from_double(w: &Permutation, n: usize, variant: HVariant, side: Side) -> Polynomial {
    assert!(w.fits(n), "{w} is not in S_{n}");
    let grid = Grid::double(n);
    let weights = Weights::stacked(&grid);
    h_sum(&grid, &weights, grid.enumerate(w), variant, side)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{grothendieck, hpolynomial, HMethod};
    use crate::perm::all_permutations;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn poly(s: &str) -> Polynomial {
        s.parse().unwrap()
    }

    fn cells(v: &[(usize, usize)]) -> BTreeSet<(usize, usize)> {
        v.iter().copied().collect()
    }

    #[test]
    fn counts() {
        assert_eq!(enumerate_rcgraphs(&Permutation::identity(), 3).len(), 1);
        assert!(enumerate_rcgraphs(&Permutation::identity(), 3)[0].is_empty());
        assert_eq!(enumerate_rcgraphs(&p("132"), 3).len(), 2);
        for n in 1..=5 {
            let top = enumerate_rcgraphs(&Permutation::longest(n), n);
            assert_eq!(top.len(), 1);
            assert_eq!(top[0].len(), n * (n - 1) / 2);
        }
        assert_eq!(enumerate_double_rcgraphs(&p("132"), 3).len(), 4);
        assert_eq!(enumerate_double_rcgraphs(&p("21"), 2).len(), 2);
        assert_eq!(enumerate_double_rcgraphs(&Permutation::identity(), 3).len(), 1);
    }

    #[test]
    fn rcgraphs_are_reduced() {
        for w in all_permutations(5) {
            for r in enumerate_rcgraphs(&w, 5) {
                assert_eq!(r.len(), w.length());
                assert_eq!(r.permutation(), w);
                assert!(is_reduced(&r.word()));
            }
        }
    }

    #[test]
    fn absorbable_positions_of_132() {
        let a = RcGraph::new(3, [(1, 2)]).unwrap();
        let b = RcGraph::new(3, [(2, 1)]).unwrap();
        assert_eq!(a.absorbable(Side::Right), cells(&[(2, 1)]));
        assert!(a.absorbable(Side::Left).is_empty());
        assert!(b.absorbable(Side::Right).is_empty());
        assert_eq!(b.absorbable(Side::Left), cells(&[(1, 2)]));
    }

    #[test]
    fn geometric_and_algebraic_absorption_agree() {
        for n in 1..=5 {
            for w in all_permutations(n) {
                for r in enumerate_rcgraphs(&w, n) {
                    for side in [Side::Right, Side::Left] {
                        assert_eq!(r.absorbable(side), r.absorbable_geometric(side), "{w} {r:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn bottom_graphs() {
        assert!(bottom_rcgraph(&Permutation::identity(), 3).is_empty());
        let b = bottom_rcgraph(&p("215463"), 6);
        assert_eq!(b.crossings(), &cells(&[(1, 1), (3, 1), (3, 2), (4, 1), (5, 1)]));
        for w in all_permutations(5) {
            let b = bottom_rcgraph(&w, 5);
            assert_eq!(b.permutation(), w);
            assert!(b.absorbable(Side::Right).is_empty());
            let without: Vec<_> = enumerate_rcgraphs(&w, 5)
                .into_iter()
                .filter(|r| r.absorbable(Side::Right).is_empty())
                .collect();
            assert_eq!(without, vec![b]);
        }
    }

    #[test]
    fn examples_for_132() {
        let w = p("132");
        let right = poly("(x2 + y1 - x2*y1) + (x1 + y2 - x1*y2)*(1 - x2)*(1 - y1)");
        let left = poly("(1 - x1)*(1 - y2)*(x2 + y1 - x2*y1) + (x1 + y2 - x1*y2)");
        assert_eq!(groth_from_rcgraphs(&w, 3, GrothVariant::AbsorbProduct, Side::Right, true), right);
        assert_eq!(groth_from_rcgraphs(&w, 3, GrothVariant::AbsorbProduct, Side::Left, true), left);
        let h_right = poly("(1-x1)*(1-y1)*((1-x1)*(1-y2)*(x2+y1-x2*y1) + (x1+y2-x1*y2))");
        let h_left = poly("(1-x1)*(1-y1)*((x2+y1-x2*y1) + (1-x2)*(1-y1)*(x1+y2-x1*y2))");
        assert_eq!(h_right, h_left);
        for side in [Side::Right, Side::Left] {
            assert_eq!(h_from_rcgraphs(&w, 3, HVariant::ComplementProduct, side, true), h_right);
        }
        let dg = poly("y2*(1-y1)*(1-x1)*(1-x2) + y1*(1-x1)*(1-x2) + x1*(1-x2) + x2");
        assert_eq!(groth_from_double(&w, 3, GrothVariant::AbsorbProduct, Side::Right), dg);
        let dh = poly("(1-y1)*(1-x1)*(y2 + y1*(1-y2) + x1*(1-y2)*(1-y1) + x2*(1-y2)*(1-y1)*(1-x1))");
        assert_eq!(h_from_double(&w, 3, HVariant::ComplementProduct, Side::Right), dh);
        assert_eq!(
            groth_from_rcgraphs(&Permutation::identity(), 3, GrothVariant::MarkedSum, Side::Right, true),
            Polynomial::one()
        );
    }

    #[test]
    fn all_variants_agree_with_operators() {
        for n in 1..=4 {
            for w in all_permutations(n) {
                for double in [false, true] {
                    let g = grothendieck(&w, double);
                    let h = hpolynomial(&w, n, double, HMethod::Operator);
                    for side in [Side::Right, Side::Left] {
                        for v in [GrothVariant::MarkedSum, GrothVariant::AbsorbProduct] {
                            assert_eq!(groth_from_rcgraphs(&w, n, v, side, double), *g, "{w}");
                            if double {
                                assert_eq!(groth_from_double(&w, n, v, side), *g, "{w}");
                            }
                        }
                        for v in [HVariant::MarkedSum, HVariant::ComplementProduct] {
                            assert_eq!(h_from_rcgraphs(&w, n, v, side, double), h, "{w}");
                            if double {
                                assert_eq!(h_from_double(&w, n, v, side), h, "{w}");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn transposition_swaps_sides() {
        for w in all_permutations(4) {
            let right = enumerate_marked_rcgraphs(&w, 4, Side::Right);
            let left = enumerate_marked_rcgraphs(&w.inverse(), 4, Side::Left);
            assert_eq!(right.len(), left.len());
            let mut image: Vec<MarkedRcGraph> = right
                .iter()
                .map(|m| MarkedRcGraph {
                    base: m.base.transpose(),
                    marks: m.marks.iter().map(|&(i, j)| (j, i)).collect(),
                    side: Side::Left,
                })
                .collect();
            image.sort();
            assert_eq!(image, left);
        }
    }

    #[test]
    fn absorbable_partition_of_unity() {
        for w in all_permutations(4) {
            for r in enumerate_rcgraphs(&w, 4) {
                let abs: Vec<_> = r.absorbable(Side::Right).into_iter().collect();
                let mut total = Polynomial::zero();
                for mask in 0u32..(1 << abs.len()) {
                    let mut t = Polynomial::one();
                    for (b, &(i, j)) in abs.iter().enumerate() {
                        let f = if mask >> b & 1 == 1 {
                            crate::basis::cell_factor(i, j, true)
                        } else {
                            crate::basis::cell_complement(i, j, true)
                        };
                        t = &t * &f;
                    }
                    total += &t;
                }
                assert_eq!(total, Polynomial::one());
            }
        }
    }

    #[test]
    fn json_and_ascii() {
        let r = RcGraph::new(3, [(1, 2)]).unwrap();
        assert_eq!(serde_json::to_string(&r).unwrap(), "[[1,2]]");
        let m = MarkedRcGraph::new(r.clone(), cells(&[(2, 1)]), Side::Right).unwrap();
        assert_eq!(m.render(), " 1 . +\n 2 o\n");
        assert!(MarkedRcGraph::new(r, cells(&[(1, 1)]), Side::Right).is_err());
        assert!(RcGraph::new(3, [(1, 1), (1, 2), (2, 1), (1, 3)]).is_err());
    }
}
