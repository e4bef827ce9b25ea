//! Sparse multivariate polynomials with arbitrary-precision integer coefficients
//! over named alphabets x, y, z, Y1, Y2, ...

mod json;
mod parse;
mod quotient;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;
use thiserror::Error;

use crate::perm::SetComposition;

pub use quotient::reduce_mod_symmetric;

pub type RationalValue = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("the zero polynomial has no lowest-degree part")]
    ZeroPolynomial,
    #[error("variable {0} has no assigned value")]
    MissingAssignment(Var),
    #[error("variable {0} is not covered by the set composition")]
    IndexOutsideComposition(Var),
    #[error("{parts} parts but {targets} target alphabets")]
    TargetCount { parts: usize, targets: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown alphabet {0:?}")]
    UnknownAlphabet(String),
    #[error("variable {var} lies outside the quotient ring in {rank} variables")]
    OutsideQuotient { var: Var, rank: usize },
}

/// A named family of variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Alphabet {
    X,
    Y,
    Z,
    /// The i-th auxiliary alphabet, printed as `Y{i}`.
    Aux(u16),
}

impl Alphabet {
    fn code(self) -> u32 {
        match self {
            Alphabet::X => 0,
            Alphabet::Y => 1,
            Alphabet::Z => 2,
            Alphabet::Aux(i) => 2 + i as u32,
        }
    }

    fn from_code(c: u32) -> Self {
        match c {
            0 => Alphabet::X,
            1 => Alphabet::Y,
            2 => Alphabet::Z,
            c => Alphabet::Aux((c - 2) as u16),
        }
    }

    pub fn name(self) -> String {
        match self {
            Alphabet::X => "x".into(),
            Alphabet::Y => "y".into(),
            Alphabet::Z => "z".into(),
            Alphabet::Aux(i) => format!("Y{i}"),
        }
    }

    pub fn parse(name: &str) -> Result<Self, PolyError> {
        match name {
            "x" => Ok(Alphabet::X),
            "y" => Ok(Alphabet::Y),
            "z" => Ok(Alphabet::Z),
            _ => name
                .strip_prefix('Y')
                .and_then(|d| d.parse::<u16>().ok())
                .filter(|&i| i > 0)
                .map(Alphabet::Aux)
                .ok_or_else(|| PolyError::UnknownAlphabet(name.into())),
        }
    }

    pub fn var(self, index: u32) -> Var {
        Var::new(self, index)
    }
}

/// A single variable, packed as alphabet code (high byte) and index.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(u32);

impl Var {
    pub fn new(alphabet: Alphabet, index: u32) -> Self {
        assert!(index > 0 && index < (1 << 24), "variable index out of range");
        Var((alphabet.code() << 24) | index)
    }

    pub fn x(i: usize) -> Self {
        Var::new(Alphabet::X, i as u32)
    }

    pub fn y(i: usize) -> Self {
        Var::new(Alphabet::Y, i as u32)
    }

    pub fn z(i: usize) -> Self {
        Var::new(Alphabet::Z, i as u32)
    }

    pub fn alphabet(self) -> Alphabet {
        Alphabet::from_code(self.0 >> 24)
    }

    pub fn index(self) -> u32 {
        self.0 & 0x00ff_ffff
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.alphabet() {
            Alphabet::Aux(i) => write!(f, "Y{i}_{}", self.index()),
            a => write!(f, "{}{}", a.name(), self.index()),
        }
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A monomial: sorted (variable, positive exponent) pairs.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(SmallVec<[(Var, u32); 6]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(v: Var) -> Self {
        Self::power(v, 1)
    }

    pub fn power(v: Var, e: u32) -> Self {
        let mut m = SmallVec::new();
        if e > 0 {
            m.push((v, e));
        }
        Monomial(m)
    }

    /// x_1^{e_1} x_2^{e_2} ⋯ in the given alphabet.
    pub fn from_exponents(alphabet: Alphabet, exps: &[u32]) -> Self {
        Monomial(
            exps.iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| (Var::new(alphabet, i as u32 + 1), e))
                .collect(),
        )
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut m = Monomial::one();
        for (v, e) in pairs {
            m = m.mul(&Monomial::power(v, e));
        }
        m
    }

    pub fn pairs(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        match self.0.binary_search_by(|(w, _)| w.cmp(&v)) {
            Ok(i) => self.0[i].1,
            Err(_) => 0,
        }
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    /// Dense exponent vector (e_1, ..., e_k) in one alphabet, trailing zeros removed.
    pub fn exponents_in(&self, alphabet: Alphabet) -> Vec<u32> {
        let mut out = Vec::new();
        for &(v, e) in &self.0 {
            if v.alphabet() == alphabet {
                let i = v.index() as usize;
                if out.len() < i {
                    out.resize(i, 0);
                }
                out[i - 1] = e;
            }
        }
        out
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// self / other when other divides self.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = self.0.clone();
        for &(v, e) in &other.0 {
            let pos = out.iter().position(|&(w, _)| w == v)?;
            if out[pos].1 < e {
                return None;
            }
            out[pos].1 -= e;
            if out[pos].1 == 0 {
                out.remove(pos);
            }
        }
        Some(Monomial(out))
    }

    /// Replaces the exponent of `v`.
    pub fn with_exponent(&self, v: Var, e: u32) -> Monomial {
        let mut out = self.0.clone();
        match out.binary_search_by(|(w, _)| w.cmp(&v)) {
            Ok(i) => {
                if e == 0 {
                    out.remove(i);
                } else {
                    out[i].1 = e;
                }
            }
            Err(i) => {
                if e > 0 {
                    out.insert(i, (v, e));
                }
            }
        }
        Monomial(out)
    }

    /// Lexicographic comparison with x1 > x2 > ... > y1 > ...: the monomial with
    /// the larger exponent at the first differing variable is larger.
    pub fn cmp_lex(&self, other: &Monomial) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        let (a, b) = (&self.0, &other.0);
        for k in 0..a.len().max(b.len()) {
            match (a.get(k), b.get(k)) {
                (Some(&(va, ea)), Some(&(vb, eb))) => {
                    if va != vb {
                        return if va < vb { Greater } else { Less };
                    }
                    if ea != eb {
                        return ea.cmp(&eb);
                    }
                }
                (Some(_), None) => return Greater,
                (None, Some(_)) => return Less,
                (None, None) => return Equal,
            }
        }
        Equal
    }

    /// Display order: ascending degree, then descending lex.
    pub fn cmp_display(&self, other: &Monomial) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.cmp_lex(self))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&(v, e)| if e == 1 { v.to_string() } else { format!("{v}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// An exact polynomial: a finite map from monomials to nonzero integers.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, BigInt>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        Self::term(BigInt::from(c), Monomial::one())
    }

    pub fn term(c: BigInt, m: Monomial) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(BigInt::one(), m)
    }

    pub fn var(v: Var) -> Self {
        Self::monomial(Monomial::var(v))
    }

    pub fn x(i: usize) -> Self {
        Self::var(Var::x(i))
    }

    pub fn y(i: usize) -> Self {
        Self::var(Var::y(i))
    }

    pub fn z(i: usize) -> Self {
        Self::var(Var::z(i))
    }

    /// x_i + y_j − x_i y_j, the K-theoretic sum of two variables.
    pub fn k_sum(a: Var, b: Var) -> Self {
        let pa = Self::var(a);
        let pb = Self::var(b);
        &(&pa + &pb) - &(&pa * &pb)
    }

    /// 1 − v.
    pub fn one_minus(v: Var) -> Self {
        &Self::one() - &Self::var(v)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, BigInt)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, BigInt)> {
        self.terms.into_iter()
    }

    /// Terms in display order (ascending degree, descending lex).
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &BigInt)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.cmp_display(b.0));
        v
    }

    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Largest total degree (0 for the zero polynomial).
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).min().unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    /// All variables that occur, in canonical order.
    pub fn variables(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self
            .terms
            .keys()
            .flat_map(|m| m.pairs().iter().map(|&(v, _)| v))
            .collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    /// Largest index used per alphabet.
    pub fn alphabet_ranges(&self) -> BTreeMap<Alphabet, u32> {
        let mut out = BTreeMap::new();
        for v in self.variables() {
            let e = out.entry(v.alphabet()).or_insert(0);
            *e = (*e).max(v.index());
        }
        out
    }

    pub fn lowest_degree_part(&self) -> Result<Self, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let d = self.min_degree();
        Ok(self.homogeneous_part(d))
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Applies a variable renaming; variables mapped together multiply.
    pub fn rename(&self, f: impl Fn(Var) -> Var) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mapped = Monomial::from_pairs(m.pairs().iter().map(|&(v, e)| (f(v), e)));
            out.add_term(mapped, c.clone());
        }
        out
    }

    /// The ring homomorphism sending each variable v to `f(v)` (None keeps v).
    pub fn substitute(&self, f: impl Fn(Var) -> Option<Polynomial>) -> Self {
        let mut cache: BTreeMap<(Var, u32), Polynomial> = BTreeMap::new();
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut kept = Monomial::one();
            let mut acc = Self::constant(1);
            for &(v, e) in m.pairs() {
                match f(v) {
                    None => kept = kept.mul(&Monomial::power(v, e)),
                    Some(image) => {
                        let pw = cache
                            .entry((v, e))
                            .or_insert_with(|| image.pow(e))
                            .clone();
                        acc = &acc * &pw;
                        if acc.is_zero() {
                            break;
                        }
                    }
                }
            }
            out += &acc.mul_monomial(&kept).scale(c);
        }
        out
    }

    /// Sets every variable of an alphabet to zero.
    pub fn set_zero(&self, alphabet: Alphabet) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.pairs().iter().all(|(v, _)| v.alphabet() != alphabet))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Exchanges two alphabets, index by index.
    pub fn swap_alphabets(&self, a: Alphabet, b: Alphabet) -> Self {
        self.rename(|v| {
            if v.alphabet() == a {
                Var::new(b, v.index())
            } else if v.alphabet() == b {
                Var::new(a, v.index())
            } else {
                v
            }
        })
    }

    /// ψ_{A•}: sends x_{a} with a the j-th smallest element of A_i to the j-th
    /// variable of `targets[i]`. Other alphabets are untouched.
    pub fn specialize(
        &self,
        composition: &SetComposition,
        targets: &[Alphabet],
    ) -> Result<Self, PolyError> {
        let parts = composition.parts();
        if parts.len() != targets.len() {
            return Err(PolyError::TargetCount {
                parts: parts.len(),
                targets: targets.len(),
            });
        }
        let mut image = BTreeMap::new();
        for (part, &alpha) in parts.iter().zip(targets) {
            for (j, &a) in part.iter().enumerate() {
                image.insert(a as u32, Var::new(alpha, j as u32 + 1));
            }
        }
        for v in self.variables() {
            if v.alphabet() == Alphabet::X && !image.contains_key(&v.index()) {
                return Err(PolyError::IndexOutsideComposition(v));
            }
        }
        Ok(self.rename(|v| {
            if v.alphabet() == Alphabet::X {
                image[&v.index()]
            } else {
                v
            }
        }))
    }

    pub fn eval_rational(
        &self,
        point: &BTreeMap<Var, RationalValue>,
    ) -> Result<RationalValue, PolyError> {
        let mut total = RationalValue::zero();
        for (m, c) in &self.terms {
            let mut t = RationalValue::from_integer(c.clone());
            for &(v, e) in m.pairs() {
                let val = point.get(&v).ok_or(PolyError::MissingAssignment(v))?;
                t *= num_traits::pow(val.clone(), e as usize);
            }
            total += t;
        }
        Ok(total)
    }

    /// Substitutes v ↦ v/(v−1) for every variable, clearing denominators.
    /// Returns the numerator and the power of (v−1) cleared for each variable,
    /// which is the degree of v in the polynomial.
    pub fn rational_substitute_tilde(&self) -> (Self, BTreeMap<Var, u32>) {
        let degrees: BTreeMap<Var, u32> = self
            .variables()
            .into_iter()
            .map(|v| (v, self.degree_in(v)))
            .collect();
        let mut cache: BTreeMap<(Var, u32), Polynomial> = BTreeMap::new();
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut acc = Self::monomial(m.clone()).scale(c);
            for (&v, &d) in &degrees {
                let k = d - m.exponent(v);
                if k > 0 {
                    let pw = cache
                        .entry((v, k))
                        .or_insert_with(|| (&Self::var(v) - &Self::one()).pow(k))
                        .clone();
                    acc = &acc * &pw;
                }
            }
            out += &acc;
        }
        (out, degrees)
    }

    /// Maximum absolute value of a coefficient.
    pub fn max_abs_coefficient(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_default()
    }

    /// Text rendering such as `x1^2*x2 - 2*x1*y1 + 1`.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                s.push_str(&abs.to_string());
            } else if abs.is_one() {
                s.push_str(&m.to_string());
            } else {
                s.push_str(&format!("{abs}*{m}"));
            }
        }
        s
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({})", self.to_text())
    }
}

impl std::str::FromStr for Polynomial {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse::parse(s)
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Polynomial> for Polynomial {
    fn sub_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let (small, large) = if self.len() <= rhs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut acc: std::collections::HashMap<Monomial, BigInt> =
            std::collections::HashMap::with_capacity(small.len() * large.len());
        for (ma, ca) in &small.terms {
            for (mb, cb) in &large.terms {
                *acc.entry(ma.mul(mb)).or_default() += ca * cb;
            }
        }
        Polynomial {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl std::iter::Sum for Polynomial {
    fn sum<I: Iterator<Item = Polynomial>>(iter: I) -> Self {
        let mut out = Polynomial::zero();
        for p in iter {
            out += &p;
        }
        out
    }
}

impl std::iter::Product for Polynomial {
    fn product<I: Iterator<Item = Polynomial>>(iter: I) -> Self {
        let mut out = Polynomial::one();
        for p in iter {
            out = &out * &p;
        }
        out
    }
}
