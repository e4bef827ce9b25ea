//! JSON form: `{"alphabets":{"x":4,"y":1},"terms":[{"coeff":"-2","exps":{"x":[2,1,1]}}]}`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::de::Error as _;
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Alphabet, Monomial, Polynomial};

struct Exps<'a>(&'a Monomial);

impl Serialize for Exps<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut alphabets: Vec<Alphabet> =
            self.0.pairs().iter().map(|(v, _)| v.alphabet()).collect();
        alphabets.dedup();
        let mut map = s.serialize_map(Some(alphabets.len()))?;
        for a in alphabets {
            map.serialize_entry(&a.name(), &self.0.exponents_in(a))?;
        }
        map.end()
    }
}

struct Term<'a>(&'a Monomial, &'a BigInt);

impl Serialize for Term<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Term", 2)?;
        st.serialize_field("coeff", &self.1.to_string())?;
        st.serialize_field("exps", &Exps(self.0))?;
        st.end()
    }
}

struct Ranges<'a>(&'a BTreeMap<Alphabet, u32>);

impl Serialize for Ranges<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (a, n) in self.0 {
            map.serialize_entry(&a.name(), n)?;
        }
        map.end()
    }
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let ranges = self.alphabet_ranges();
        let terms: Vec<Term> = self
            .sorted_terms()
            .into_iter()
            .map(|(m, c)| Term(m, c))
            .collect();
        let mut st = s.serialize_struct("Polynomial", 2)?;
        st.serialize_field("alphabets", &Ranges(&ranges))?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

#[derive(Deserialize)]
struct RawTerm {
    coeff: String,
    exps: BTreeMap<String, Vec<u32>>,
}

#[derive(Deserialize)]
struct RawPolynomial {
    #[serde(default)]
    #[allow(dead_code)]
    alphabets: BTreeMap<String, u32>,
    terms: Vec<RawTerm>,
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawPolynomial::deserialize(d)?;
        let mut p = Polynomial::zero();
        for t in raw.terms {
            let c: BigInt = t.coeff.parse().map_err(D::Error::custom)?;
            let mut m = Monomial::one();
            for (name, exps) in t.exps {
                let a = Alphabet::parse(&name).map_err(D::Error::custom)?;
                m = m.mul(&Monomial::from_exponents(a, &exps));
            }
            p.add_term(m, c);
        }
        Ok(p)
    }
}
