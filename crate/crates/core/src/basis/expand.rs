//! Expansion of polynomials in the stable Schubert or Grothendieck basis.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use super::{basis_polynomial, reassemble, Family};
use crate::par;
use crate::perm::{all_permutations, Permutation};
use crate::poly::{Alphabet, Monomial, Polynomial, Var};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExpansionError {
    #[error("only polynomials in the x alphabet can be expanded; found {0}")]
    ForeignVariable(Var),
    #[error("the expansion uses {w}, which lies outside S_{n}")]
    OutsideSupport { w: Permutation, n: usize },
    #[error("reconstruction mismatch: the polynomial is not spanned by the basis of S_{0}")]
    ReconstructionMismatch(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExpansionMethod {
    /// Repeatedly subtract the basis element whose code monomial is the
    /// smallest term (degree first, then lexicographic with x1 > x2 > ...).
    Greedy,
    /// Exact rational Gaussian elimination over the basis of S_N.
    LinearSolve,
}

/// Σ c_w · basis_w with every w in S_N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisExpansion {
    pub n: usize,
    pub family: Family,
    pub coeffs: BTreeMap<Permutation, BigInt>,
}

impl BasisExpansion {
    pub fn coefficient(&self, w: &Permutation) -> BigInt {
        self.coeffs.get(w).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn reconstruct(&self) -> Polynomial {
        reassemble(self.family, &self.coeffs)
    }

    /// One line per term, `c * G[w]` style.
    pub fn to_text(&self) -> String {
        let symbol = match self.family {
            Family::Grothendieck => "G",
            Family::Schubert => "S",
        };
        if self.coeffs.is_empty() {
            return "0".into();
        }
        self.coeffs
            .iter()
            .map(|(w, c)| format!("{c} {symbol}{w}", w = crate::perm::one_line_json(w, self.n)))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

impl Serialize for BasisExpansion {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry {
            w: Vec<usize>,
            c: String,
        }
        let coeffs: Vec<Entry> = self
            .coeffs
            .iter()
            .map(|(w, c)| Entry {
                w: w.one_line(self.n),
                c: c.to_string(),
            })
            .collect();
        let mut st = s.serialize_struct("BasisExpansion", 2)?;
        st.serialize_field("N", &self.n)?;
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}

/// Monomials ordered by degree, then lexicographically with x1 > x2 > ...
#[derive(Clone, PartialEq, Eq)]
struct Graded(Monomial);

impl Ord for Graded {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .degree()
            .cmp(&other.0.degree())
            .then_with(|| self.0.cmp_lex(&other.0))
    }
}

impl PartialOrd for Graded {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn check_alphabet(p: &Polynomial) -> Result<(), ExpansionError> {
    match p.variables().into_iter().find(|v| v.alphabet() != Alphabet::X) {
        Some(v) => Err(ExpansionError::ForeignVariable(v)),
        None => Ok(()),
    }
}

/// Greedy expansion. Terms of degree above `max_degree` are discarded as soon
/// as they appear; they cannot influence coefficients of basis elements of
/// smaller length, since basis_w has no terms below degree ℓ(w).
fn greedy(p: &Polynomial, family: Family, max_degree: Option<u32>) -> BTreeMap<Permutation, BigInt> {
    let keep = |m: &Monomial| max_degree.map_or(true, |d| m.degree() <= d);
    let mut work: BTreeMap<Graded, BigInt> = p
        .terms()
        .filter(|(m, _)| keep(m))
        .map(|(m, c)| (Graded(m.clone()), c.clone()))
        .collect();
    let mut out = BTreeMap::new();
    while let Some((Graded(lead), c)) = work.pop_first() {
        let code: Vec<usize> = lead
            .exponents_in(Alphabet::X)
            .into_iter()
            .map(|e| e as usize)
            .collect();
        let w = Permutation::from_code(&code);
        let g = basis_polynomial(family, &w);
        debug_assert!(g.coefficient(&lead).is_one(), "code monomial of {w}");
        for (m, d) in g.terms() {
            if m == &lead || !keep(m) {
                continue;
            }
            let key = Graded(m.clone());
            let slot = work.entry(key.clone()).or_default();
            *slot -= &c * d;
            if slot.is_zero() {
                work.remove(&key);
            }
        }
        out.insert(w, c);
    }
    out
}

/// The unique expansion p = Σ c_w basis_w over S_∞.
pub fn stable_expansion(
    p: &Polynomial,
    family: Family,
) -> Result<BTreeMap<Permutation, BigInt>, ExpansionError> {
    check_alphabet(p)?;
    Ok(greedy(p, family, None))
}

fn linear_solve(
    p: &Polynomial,
    family: Family,
    n: usize,
) -> Result<BTreeMap<Permutation, BigInt>, ExpansionError> {
    if p.is_zero() {
        return Ok(BTreeMap::new());
    }
    let min = p.min_degree() as usize;
    let candidates: Vec<Permutation> = all_permutations(n)
        .into_iter()
        .filter(|w| w.length() >= min)
        .collect();
    let columns: Vec<Arc<Polynomial>> =
        par::map(candidates.clone(), |w| basis_polynomial(family, &w));
    let mut rows: BTreeMap<Monomial, usize> = BTreeMap::new();
    for m in columns.iter().flat_map(|c| c.terms().map(|(m, _)| m)).chain(p.terms().map(|(m, _)| m)) {
        let next = rows.len();
        rows.entry(m.clone()).or_insert(next);
    }
    let width = columns.len() + 1;
    let mut matrix = vec![vec![BigRational::zero(); width]; rows.len()];
    for (j, col) in columns.iter().enumerate() {
        for (m, c) in col.terms() {
            matrix[rows[m]][j] = BigRational::from_integer(c.clone());
        }
    }
    for (m, c) in p.terms() {
        matrix[rows[m]][width - 1] = BigRational::from_integer(c.clone());
    }
    // reduced row echelon form
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..width - 1 {
        let Some(pr) = (r..matrix.len()).find(|&i| !matrix[i][col].is_zero()) else {
            continue;
        };
        matrix.swap(r, pr);
        let inv = matrix[r][col].recip();
        for x in matrix[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = matrix[r].clone();
        for (i, row) in matrix.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if matrix[r..].iter().any(|row| !row[width - 1].is_zero()) {
        return Err(ExpansionError::ReconstructionMismatch(n));
    }
    let mut out = BTreeMap::new();
    for (i, &col) in pivots.iter().enumerate() {
        let v = &matrix[i][width - 1];
        if !v.is_zero() {
            if !v.is_integer() {
                return Err(ExpansionError::ReconstructionMismatch(n));
            }
            out.insert(candidates[col].clone(), v.to_integer());
        }
    }
    Ok(out)
}

/// Expands p in the basis of S_N, failing if p needs basis elements outside S_N.
pub fn expand(
    p: &Polynomial,
    n: usize,
    family: Family,
    method: ExpansionMethod,
) -> Result<BasisExpansion, ExpansionError> {
    check_alphabet(p)?;
    let coeffs = match method {
        ExpansionMethod::Greedy => {
            let coeffs = greedy(p, family, None);
            if let Some(w) = coeffs.keys().find(|w| !w.fits(n)) {
                return Err(ExpansionError::OutsideSupport { w: w.clone(), n });
            }
            coeffs
        }
        ExpansionMethod::LinearSolve => linear_solve(p, family, n)?,
    };
    let out = BasisExpansion { n, family, coeffs };
    if &out.reconstruct() != p {
        return Err(ExpansionError::ReconstructionMismatch(n));
    }
    Ok(out)
}

pub fn expand_grothendieck(p: &Polynomial, n: usize) -> Result<BasisExpansion, ExpansionError> {
    expand(p, n, Family::Grothendieck, ExpansionMethod::Greedy)
}

pub fn expand_schubert(p: &Polynomial, n: usize) -> Result<BasisExpansion, ExpansionError> {
    expand(p, n, Family::Schubert, ExpansionMethod::Greedy)
}

type ProductKey = (Family, Permutation, Permutation, usize);
type ProductTable = RwLock<HashMap<ProductKey, Arc<BTreeMap<Permutation, BigInt>>>>;

fn products() -> &'static ProductTable {
    static TABLE: OnceLock<ProductTable> = OnceLock::new();
    TABLE.get_or_init(Default::default)
}

pub(super) fn clear_product_cache() {
    products().write().expect("cache poisoned").clear();
}

/// Coefficients c^w_{u,v} of basis_u · basis_v for w ∈ S_N.
///
/// Read from the stable expansion of the product; coefficients of w outside
/// S_N are dropped.
pub fn structure_constants(
    u: &Permutation,
    v: &Permutation,
    n: usize,
    family: Family,
) -> BasisExpansion {
    let (a, b) = if u <= v { (u, v) } else { (v, u) };
    let key = (family, a.clone(), b.clone(), n);
    let cached = products().read().expect("cache poisoned").get(&key).cloned();
    let coeffs = match cached {
        Some(c) => c,
        None => {
            let product = &*basis_polynomial(family, a) * &*basis_polynomial(family, b);
            let top = (n * n.saturating_sub(1) / 2) as u32;
            let mut c = greedy(&product, family, Some(top));
            c.retain(|w, _| w.fits(n));
            let c = Arc::new(c);
            products()
                .write()
                .expect("cache poisoned")
                .insert(key, c.clone());
            c
        }
    };
    BasisExpansion {
        n,
        family,
        coeffs: (*coeffs).clone(),
    }
}
