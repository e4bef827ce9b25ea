//! Permutations in one-line notation with the stable embedding of S_n into S_∞.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("not a permutation in one-line notation: {0:?}")]
    NotABijection(Vec<usize>),
    #[error("cannot parse permutation from {0:?}")]
    Parse(String),
    #[error("cycle r[{k},{p}] does not fit in S_{m}")]
    CycleTooLong { k: usize, p: usize, m: usize },
    #[error("{w} is not Grassmannian with descent at {k}")]
    NotGrassmannian { w: Permutation, k: usize },
    #[error("not a partition: {0:?}")]
    NotAPartition(Vec<usize>),
    #[error("invalid set composition: {0}")]
    InvalidComposition(String),
    #[error("{w} does not lie in S_{n}")]
    OutsideRank { w: Permutation, n: usize },
    #[error("position {pos} outside 1..={n}")]
    PositionOutOfRange { pos: usize, n: usize },
}

/// A permutation of the positive integers fixing all but finitely many points.
///
/// Stored in one-line notation with trailing fixed points removed, so `[1,3,2]`
/// and `[1,3,2,4,5]` are the same value. Derived ordering is lexicographic
/// on the padded one-line notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    values: Vec<u16>,
}

impl Permutation {
    pub fn new(values: Vec<usize>) -> Result<Self, PermError> {
        let n = values.len();
        let mut seen = vec![false; n + 1];
        for &v in &values {
            if v == 0 || v > n || seen[v] || v > u16::MAX as usize {
                return Err(PermError::NotABijection(values));
            }
            seen[v] = true;
        }
        Ok(Self::from_raw(values.into_iter().map(|v| v as u16).collect()))
    }

    fn from_raw(mut values: Vec<u16>) -> Self {
        while let Some(&last) = values.last() {
            if last as usize == values.len() {
                values.pop();
            } else {
                break;
            }
        }
        Self { values }
    }

    pub fn identity() -> Self {
        Self { values: Vec::new() }
    }

    /// The longest element ω_n = [n, n-1, ..., 1].
    pub fn longest(n: usize) -> Self {
        Self::from_raw((1..=n as u16).rev().collect())
    }

    /// The simple transposition s_i exchanging i and i+1.
    pub fn simple(i: usize) -> Self {
        Self::transposition(i, i + 1)
    }

    pub fn transposition(a: usize, b: usize) -> Self {
        let n = a.max(b);
        let mut v: Vec<u16> = (1..=n as u16).collect();
        v.swap(a - 1, b - 1);
        Self::from_raw(v)
    }

    /// Smallest n with the permutation in S_n (0 for the identity).
    pub fn support(&self) -> usize {
        self.values.len()
    }

    pub fn is_identity(&self) -> bool {
        self.values.is_empty()
    }

    pub fn fits(&self, n: usize) -> bool {
        self.support() <= n
    }

    /// w(i), 1-indexed; fixed beyond the support.
    pub fn get(&self, i: usize) -> usize {
        match self.values.get(i.wrapping_sub(1)) {
            Some(&v) => v as usize,
            None => i,
        }
    }

    /// One-line notation padded with fixed points to length at least `n`.
    pub fn one_line(&self, n: usize) -> Vec<usize> {
        let len = n.max(self.support());
        (1..=len).map(|i| self.get(i)).collect()
    }

    /// Inversion count.
    pub fn length(&self) -> usize {
        let v = &self.values;
        let mut count = 0;
        for a in 0..v.len() {
            for b in a + 1..v.len() {
                if v[a] > v[b] {
                    count += 1;
                }
            }
        }
        count
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u16; self.values.len()];
        for (i, &v) in self.values.iter().enumerate() {
            inv[v as usize - 1] = (i + 1) as u16;
        }
        Self::from_raw(inv)
    }

    /// The product `self · other`, i.e. i ↦ self(other(i)).
    pub fn compose(&self, other: &Self) -> Self {
        let n = self.support().max(other.support());
        Self::from_raw((1..=n).map(|i| self.get(other.get(i)) as u16).collect())
    }

    /// w·s_i: swaps the entries in positions i and i+1.
    pub fn swap_positions(&self, a: usize, b: usize) -> Self {
        let n = self.support().max(a).max(b);
        let mut v: Vec<u16> = (1..=n).map(|i| self.get(i) as u16).collect();
        v.swap(a - 1, b - 1);
        Self::from_raw(v)
    }

    /// s_i·w: exchanges the values i and i+1.
    pub fn swap_values(&self, a: usize, b: usize) -> Self {
        let n = self.support().max(a).max(b);
        let v: Vec<u16> = (1..=n)
            .map(|i| {
                let x = self.get(i);
                if x == a {
                    b as u16
                } else if x == b {
                    a as u16
                } else {
                    x as u16
                }
            })
            .collect();
        Self::from_raw(v)
    }

    pub fn has_descent(&self, i: usize) -> bool {
        self.get(i) > self.get(i + 1)
    }

    /// Whether s_i·w < w, i.e. i+1 appears to the left of i.
    pub fn has_left_descent(&self, i: usize) -> bool {
        let inv = self.inverse();
        inv.get(i) > inv.get(i + 1)
    }

    pub fn descents(&self) -> Vec<usize> {
        (1..self.support()).filter(|&i| self.has_descent(i)).collect()
    }

    /// Lehmer code c_i = #{j > i : w_j < w_i}, trailing zeros removed.
    pub fn code(&self) -> Vec<usize> {
        let v = &self.values;
        let mut code: Vec<usize> = (0..v.len())
            .map(|i| v[i + 1..].iter().filter(|&&x| x < v[i]).count())
            .collect();
        while code.last() == Some(&0) {
            code.pop();
        }
        code
    }

    /// Inverse of [`Permutation::code`]; every finitely supported sequence is a code.
    pub fn from_code(code: &[usize]) -> Self {
        let n = code
            .iter()
            .enumerate()
            .map(|(i, &c)| if c > 0 { i + 1 + c } else { 0 })
            .max()
            .unwrap_or(0);
        let mut available: Vec<u16> = (1..=n as u16).collect();
        let mut values = Vec::with_capacity(n);
        for i in 0..n {
            let c = code.get(i).copied().unwrap_or(0);
            values.push(available.remove(c));
        }
        Self::from_raw(values)
    }

    /// A reduced word (i_1, ..., i_r) with w = s_{i_1} ⋯ s_{i_r}.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut w = self.clone();
        let mut rev = Vec::with_capacity(self.length());
        while let Some(i) = w.descents().first().copied() {
            rev.push(i);
            w = w.swap_positions(i, i + 1);
        }
        rev.reverse();
        rev
    }

    /// Product of simple transpositions s_{i_1} ⋯ s_{i_r}.
    pub fn from_word(word: &[usize]) -> Self {
        word.iter()
            .fold(Self::identity(), |w, &i| w.swap_positions(i, i + 1))
    }

    /// The block product (u_1, ..., u_m, m + v_1, ..., m + v_n) for u placed in S_m.
    pub fn cross(&self, m: usize, other: &Self) -> Result<Self, PermError> {
        if !self.fits(m) {
            return Err(PermError::OutsideRank { w: self.clone(), n: m });
        }
        let mut v: Vec<u16> = (1..=m).map(|i| self.get(i) as u16).collect();
        v.extend(other.values.iter().map(|&x| x + m as u16));
        Ok(Self::from_raw(v))
    }

    /// Splits a permutation of S_m × S_n ⊂ S_{m+n} into its two blocks.
    pub fn split_cross(&self, m: usize) -> Option<(Self, Self)> {
        let left: Vec<usize> = (1..=m).map(|i| self.get(i)).collect();
        if left.iter().any(|&x| x > m) {
            return None;
        }
        let right: Vec<usize> = (m + 1..=self.support().max(m))
            .map(|i| self.get(i) - m)
            .collect();
        Some((Self::new(left).ok()?, Self::new(right).ok()?))
    }

    pub fn is_grassmannian_at(&self, k: usize) -> bool {
        self.descents().iter().all(|&d| d == k)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let line = self.one_line(1);
        if line.iter().all(|&x| x < 10) {
            for x in line {
                write!(f, "{x}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = line.iter().map(|x| x.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

impl FromStr for Permutation {
    type Err = PermError;

    /// Accepts `1,4,3,2`, `[1,4,3,2]`, or the digit string `1432`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().trim_start_matches('[').trim_end_matches(']').trim();
        let bad = || PermError::Parse(s.to_string());
        let values: Vec<usize> = if t.is_empty() {
            Vec::new()
        } else if t.contains(',') || t.contains(' ') {
            t.split(|c| c == ',' || c == ' ')
                .filter(|p| !p.is_empty())
                .map(|p| p.trim().parse::<usize>().map_err(|_| bad()))
                .collect::<Result<_, _>>()?
        } else if t.chars().all(|c| c.is_ascii_digit()) {
            t.chars().map(|c| c as usize - '0' as usize).collect()
        } else {
            return Err(bad());
        };
        Self::new(values)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.one_line(1).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(deserializer)?;
        Permutation::new(v).map_err(serde::de::Error::custom)
    }
}

/// Serializes a permutation padded to a fixed rank.
pub fn one_line_json(w: &Permutation, n: usize) -> serde_json::Value {
    serde_json::Value::from(w.one_line(n))
}

/// All permutations of S_n in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut cur: Vec<usize> = (1..=n).collect();
    let mut out = vec![Permutation::new(cur.clone()).expect("identity")];
    loop {
        let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(Permutation::new(cur.clone()).expect("permutation"));
    }
    out
}

/// Tableau criterion: sorted prefixes of u are componentwise at most those of v.
pub fn bruhat_leq(u: &Permutation, v: &Permutation) -> bool {
    let n = u.support().max(v.support());
    let mut pu = Vec::with_capacity(n);
    let mut pv = Vec::with_capacity(n);
    for i in 1..n {
        let (a, b) = (u.get(i), v.get(i));
        let pos = pu.partition_point(|&x| x < a);
        pu.insert(pos, a);
        let pos = pv.partition_point(|&x| x < b);
        pv.insert(pos, b);
        if pu.iter().zip(&pv).any(|(x, y)| x > y) {
            return false;
        }
    }
    true
}

/// An edge w ⋖ w·t_{a,b} of the Bruhat order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BruhatCover {
    pub source: Permutation,
    pub a: usize,
    pub b: usize,
    pub target: Permutation,
}

/// Whether w·t_{a,b} covers w (a < b).
pub fn is_cover(w: &Permutation, a: usize, b: usize) -> bool {
    let (x, y) = (w.get(a), w.get(b));
    x < y && (a + 1..b).all(|c| {
        let z = w.get(c);
        z < x || z > y
    })
}

/// All covers of w inside S_n, optionally restricted to the k-Bruhat order (a ≤ k < b).
pub fn bruhat_covers(w: &Permutation, n: usize, k: Option<usize>) -> Vec<BruhatCover> {
    let mut out = Vec::new();
    let a_range = match k {
        Some(k) => 1..=k.min(n),
        None => 1..=n,
    };
    for a in a_range {
        let b_start = match k {
            Some(k) => k + 1,
            None => a + 1,
        };
        for b in b_start.max(a + 1)..=n {
            if is_cover(w, a, b) {
                out.push(BruhatCover {
                    source: w.clone(),
                    a,
                    b,
                    target: w.swap_positions(a, b),
                });
            }
        }
    }
    out
}

/// The pattern of w at the given positions: the permutation of S_{|P|} whose
/// entries are in the same relative order as (w_{p_1}, ..., w_{p_k}).
pub fn pattern_restrict(w: &Permutation, positions: &[usize]) -> Permutation {
    let vals: Vec<usize> = positions.iter().map(|&p| w.get(p)).collect();
    let mut sorted = vals.clone();
    sorted.sort_unstable();
    let ranks = vals
        .iter()
        .map(|v| sorted.binary_search(v).expect("present") + 1)
        .collect();
    Permutation::new(ranks).expect("ranks form a permutation")
}

/// st(w) = w restricted to positions 2, ..., n.
pub fn standardize_drop_first(w: &Permutation) -> Permutation {
    let first = w.get(1);
    let n = w.support().max(1);
    let vals = (2..=n)
        .map(|i| {
            let x = w.get(i);
            if x < first {
                x
            } else {
                x - 1
            }
        })
        .collect();
    Permutation::new(vals).expect("standardization")
}

/// The cycle r_{[k,p]} = s_{k+p-1} ⋯ s_k = [1, ..., k-1, k+p, k, k+1, ...].
pub fn r_cycle(k: usize, p: usize, m: usize) -> Result<Permutation, PermError> {
    if k == 0 || k + p > m {
        return Err(PermError::CycleTooLong { k, p, m });
    }
    let mut v: Vec<usize> = (1..k).collect();
    v.push(k + p);
    v.extend(k..k + p);
    Ok(Permutation::new(v).expect("cycle"))
}

/// ξ_{q,j}(u): insert n+j+1 at position q of u ∈ S_n, remaining values increasing.
pub fn xi(q: usize, j: usize, u: &Permutation, n: usize) -> Result<Permutation, PermError> {
    if !u.fits(n) {
        return Err(PermError::OutsideRank { w: u.clone(), n });
    }
    if q == 0 || q > n {
        return Err(PermError::PositionOutOfRange { pos: q, n });
    }
    let big = n + j + 1;
    let mut v: Vec<usize> = (1..q).map(|i| u.get(i)).collect();
    v.push(big);
    v.extend((q..=n).map(|i| u.get(i)));
    v.extend(n + 1..big);
    Ok(Permutation::new(v).expect("xi"))
}

/// The Grassmannian permutation with descent at k and shape λ.
pub fn grassmannian(lambda: &[usize], k: usize) -> Result<Permutation, PermError> {
    if lambda.windows(2).any(|p| p[0] < p[1]) || lambda.iter().skip(k).any(|&x| x > 0) {
        return Err(PermError::NotAPartition(lambda.to_vec()));
    }
    let part = |i: usize| lambda.get(i).copied().unwrap_or(0);
    // w_i = λ_{k+1-i} + i for i ≤ k
    let head: Vec<usize> = (1..=k).map(|i| part(k - i) + i).collect();
    let top = head.last().copied().unwrap_or(0);
    let mut v = head.clone();
    v.extend((1..=top).filter(|x| !head.contains(x)));
    Permutation::new(v)
}

/// The shape (w_k − k, ..., w_1 − 1) of a Grassmannian permutation.
pub fn grassmannian_shape(w: &Permutation, k: usize) -> Result<Vec<usize>, PermError> {
    if !w.is_grassmannian_at(k) {
        return Err(PermError::NotGrassmannian { w: w.clone(), k });
    }
    Ok((1..=k).rev().map(|i| w.get(i) - i).collect())
}

/// Σ_{ω_0 u ≥ v ≥ w} (−1)^{ℓ(v)−ℓ(w)} over S_n.
pub fn mobius_interval_sum(w: &Permutation, u: &Permutation, n: usize) -> i64 {
    let top = Permutation::longest(n).compose(u);
    all_permutations(n)
        .iter()
        .filter(|v| bruhat_leq(w, v) && bruhat_leq(v, &top))
        .map(|v| {
            if (v.length() + w.length()) % 2 == 0 {
                1
            } else {
                -1
            }
        })
        .sum()
}

/// An ordered sequence of disjoint nonempty sets whose union is [m].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetComposition {
    parts: Vec<Vec<usize>>,
}

impl SetComposition {
    pub fn new(parts: Vec<Vec<usize>>) -> Result<Self, PermError> {
        let mut seen = BTreeSet::new();
        let mut sorted = Vec::with_capacity(parts.len());
        for part in parts {
            if part.is_empty() {
                return Err(PermError::InvalidComposition("empty part".into()));
            }
            let mut p = part;
            p.sort_unstable();
            for &x in &p {
                if x == 0 || !seen.insert(x) {
                    return Err(PermError::InvalidComposition(format!(
                        "element {x} repeated or zero"
                    )));
                }
            }
            sorted.push(p);
        }
        let m = seen.len();
        if seen.iter().next_back().is_some_and(|&x| x != m) {
            return Err(PermError::InvalidComposition(format!(
                "union is not an initial segment [1..{m}]"
            )));
        }
        Ok(Self { parts: sorted })
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn shape(&self) -> Vec<usize> {
        self.parts.iter().map(Vec::len).collect()
    }

    pub fn total(&self) -> usize {
        self.parts.iter().map(Vec::len).sum()
    }

    /// ε(B•): maps B_i onto the i-th consecutive block, increasingly.
    pub fn epsilon(&self) -> Permutation {
        let mut v = vec![0usize; self.total()];
        let mut next = 1;
        for part in &self.parts {
            for &p in part {
                v[p - 1] = next;
                next += 1;
            }
        }
        Permutation::new(v).expect("epsilon")
    }

    /// ζ(B•) = ω_n · ω_β · ε(B•).
    pub fn zeta(&self) -> Permutation {
        let n = self.total();
        Permutation::longest(n)
            .compose(&block_longest(&self.shape()))
            .compose(&self.epsilon())
    }
}

/// ω_β: the longest element of the Young subgroup S_{β_1} × ⋯ × S_{β_s}.
pub fn block_longest(shape: &[usize]) -> Permutation {
    let mut v = Vec::new();
    let mut offset = 0;
    for &b in shape {
        v.extend((offset + 1..=offset + b).rev());
        offset += b;
    }
    Permutation::new(v).expect("block longest")
}

/// Concatenates permutations u_i ∈ S_{β_i} into u_1 × ⋯ × u_s.
pub fn block_product(blocks: &[Permutation], shape: &[usize]) -> Result<Permutation, PermError> {
    let mut v = Vec::new();
    let mut offset = 0;
    for (u, &b) in blocks.iter().zip(shape) {
        if !u.fits(b) {
            return Err(PermError::OutsideRank { w: u.clone(), n: b });
        }
        v.extend((1..=b).map(|i| u.get(i) + offset));
        offset += b;
    }
    Permutation::new(v)
}

/// Inverse of [`block_product`]: splits x ∈ S_β into its blocks, if it preserves them.
pub fn split_blocks(x: &Permutation, shape: &[usize]) -> Option<Vec<Permutation>> {
    let total: usize = shape.iter().sum();
    if !x.fits(total) {
        return None;
    }
    let mut out = Vec::with_capacity(shape.len());
    let mut offset = 0;
    for &b in shape {
        let vals: Vec<usize> = (offset + 1..=offset + b).map(|i| x.get(i)).collect();
        if vals.iter().any(|&y| y <= offset || y > offset + b) {
            return None;
        }
        out.push(Permutation::new(vals.iter().map(|y| y - offset).collect()).ok()?);
        offset += b;
    }
    Some(out)
}
