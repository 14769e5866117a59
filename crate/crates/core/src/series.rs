//! Truncated non-commutative power series `Σ c_I X_I` and the Magnus expansion.
//!
//! A [`TruncatedSeries`] carries its truncation bound `N`: every coefficient
//! with `|I| >= N` is discarded, and combining series with different bounds is
//! an error rather than a silent re-truncation.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::ring::{is_one, RingElement, RingSpec};
use crate::word::{Alphabet, Word};

/// A monomial `X_I = X_{a₁}⋯X_{a_t}`, ordered by length and then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IndexSequence(pub Vec<u32>);

impl IndexSequence {
    pub fn empty() -> Self {
        IndexSequence(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    fn concat(&self, other: &IndexSequence) -> IndexSequence {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        IndexSequence(v)
    }

    /// Dot-separated generator names; the empty sequence renders as `""`.
    pub fn format(&self, alphabet: &Alphabet) -> String {
        self.0
            .iter()
            .map(|&i| alphabet.name(i as usize))
            .collect::<Vec<_>>()
            .join(".")
    }

    pub fn parse(alphabet: &Alphabet, text: &str) -> Result<Self> {
        if text.is_empty() {
            return Ok(IndexSequence::empty());
        }
        text.split('.')
            .map(|name| {
                alphabet
                    .index_of(name)
                    .map(|i| i as u32)
                    .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
            })
            .collect::<Result<Vec<_>>>()
            .map(IndexSequence)
    }

    /// Every sequence of exactly `len` indices below `rank`, in lexicographic order.
    pub fn all_of_length(rank: usize, len: usize) -> Vec<IndexSequence> {
        let mut out = vec![IndexSequence::empty()];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|s| {
                    (0..rank as u32).map(move |i| {
                        let mut v = s.0.clone();
                        v.push(i);
                        IndexSequence(v)
                    })
                })
                .collect();
        }
        out
    }
}

impl Ord for IndexSequence {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for IndexSequence {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Vec<u32>> for IndexSequence {
    fn from(v: Vec<u32>) -> Self {
        IndexSequence(v)
    }
}

/// Element of `R⟨⟨X_A⟩⟩` modulo all monomials of degree `>= bound`.
///
/// Stored sparsely: absent keys are zero coefficients and no zero is ever stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    rank: usize,
    ring: RingSpec,
    bound: usize,
    coeffs: BTreeMap<IndexSequence, RingElement>,
}

impl TruncatedSeries {
    pub fn zero(rank: usize, ring: RingSpec, bound: usize) -> Result<Self> {
        if bound == 0 {
            return Err(Error::InvalidArgument(
                "truncation bound must be at least 1".into(),
            ));
        }
        Ok(TruncatedSeries {
            rank,
            ring,
            bound,
            coeffs: BTreeMap::new(),
        })
    }

    pub fn one(rank: usize, ring: RingSpec, bound: usize) -> Result<Self> {
        let mut s = Self::zero(rank, ring, bound)?;
        s.coeffs.insert(IndexSequence::empty(), ring.one());
        Ok(s)
    }

    /// Builds a series from arbitrary terms: coefficients are summed per key,
    /// zeros and terms of degree `>= bound` are dropped.
    pub fn from_terms<I>(rank: usize, ring: RingSpec, bound: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (IndexSequence, RingElement)>,
    {
        let mut s = Self::zero(rank, ring, bound)?;
        for (seq, c) in terms {
            if let Some(&bad) = seq.0.iter().find(|&&i| i as usize >= rank) {
                return Err(Error::GeneratorOutOfRange {
                    index: bad as usize,
                    rank,
                });
            }
            ring.check(&c)?;
            if seq.len() < bound {
                s.add_term(seq, c);
            }
        }
        Ok(s)
    }

    /// `1 + X_a`.
    pub fn generator(rank: usize, ring: RingSpec, bound: usize, index: u32) -> Result<Self> {
        Self::from_terms(
            rank,
            ring,
            bound,
            [
                (IndexSequence::empty(), ring.one()),
                (IndexSequence(vec![index]), ring.one()),
            ],
        )
    }

    fn add_term(&mut self, seq: IndexSequence, c: RingElement) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&seq) {
            Some(existing) => {
                let sum = self.ring.add_raw(existing, &c);
                if sum.is_zero() {
                    self.coeffs.remove(&seq);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.coeffs.insert(seq, c);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn terms(&self) -> impl Iterator<Item = (&IndexSequence, &RingElement)> {
        self.coeffs.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coefficient(&self, seq: &IndexSequence) -> RingElement {
        self.coeffs
            .get(seq)
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    pub fn constant_term(&self) -> RingElement {
        self.coefficient(&IndexSequence::empty())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&IndexSequence::empty()).is_some_and(is_one)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::AlphabetMismatch {
                left: self.rank,
                right: other.rank,
            });
        }
        if self.ring != other.ring {
            return Err(Error::RingMismatch(format!(
                "{} vs {}",
                self.ring, other.ring
            )));
        }
        if self.bound != other.bound {
            return Err(Error::BoundMismatch {
                left: self.bound,
                right: other.bound,
            });
        }
        Ok(())
    }

    fn check_unit(&self) -> Result<()> {
        if !is_one(&self.constant_term()) {
            return Err(Error::NotUnit);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (seq, c) in &other.coeffs {
            out.add_term(seq.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.coeffs.values_mut() {
            *c = self.ring.neg_raw(c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &RingElement) -> Result<Self> {
        self.ring.check(c)?;
        let terms = self
            .coeffs
            .iter()
            .map(|(s, x)| (s.clone(), self.ring.mul_raw(c, x)));
        Self::from_terms(self.rank, self.ring, self.bound, terms)
    }

    /// Truncated convolution: the coefficient of `X_I` is `Σ_{I = JK} c_J d_K`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.rank, self.ring, self.bound)?;
        for (j, cj) in &self.coeffs {
            for (k, ck) in &other.coeffs {
                if j.len() + k.len() >= self.bound {
                    // `other` is sorted by length, so every later key is too long as well.
                    break;
                }
                out.add_term(j.concat(k), self.ring.mul_raw(cj, ck));
            }
        }
        Ok(out)
    }

    /// `(1 + α)⁻¹ = Σ_{k<N} (−α)^k`, exact because `α^N` vanishes under truncation.
    pub fn invert_unit(&self) -> Result<Self> {
        self.check_unit()?;
        let one = Self::one(self.rank, self.ring, self.bound)?;
        let minus_alpha = one.sub(self)?;
        let mut power = one.clone();
        let mut acc = one;
        for _ in 1..self.bound {
            power = power.mul(&minus_alpha)?;
            if power.coeffs.is_empty() {
                break;
            }
            acc = acc.add(&power)?;
        }
        Ok(acc)
    }

    /// Smallest positive degree with a nonzero coefficient, `None` if the series is 1.
    pub fn min_positive_degree(&self) -> Result<Option<usize>> {
        self.check_unit()?;
        Ok(self.coeffs.keys().map(|s| s.len()).find(|&l| l > 0))
    }

    /// Nonzero coefficients of degree exactly `t`.
    pub fn graded_component(&self, t: usize) -> Result<BTreeMap<IndexSequence, RingElement>> {
        if t >= self.bound {
            return Err(Error::DegreeOutOfRange {
                degree: t,
                limit: self.bound,
            });
        }
        Ok(self
            .coeffs
            .iter()
            .filter(|(s, _)| s.len() == t)
            .map(|(s, c)| (s.clone(), c.clone()))
            .collect())
    }

    /// Drops every degree `>= new_bound`.
    pub fn truncate(&self, new_bound: usize) -> Result<Self> {
        if new_bound > self.bound {
            return Err(Error::BoundTooSmall {
                bound: self.bound,
                required: new_bound,
            });
        }
        let terms = self.coeffs.iter().map(|(s, c)| (s.clone(), c.clone()));
        Self::from_terms(self.rank, self.ring, new_bound, terms)
    }

    /// Text form such as `1 + a.b - b.a` or `1 + 3*a + 2*a.a`.
    pub fn format(&self, alphabet: &Alphabet) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (seq, c)) in self.coeffs.iter().enumerate() {
            let (negative, magnitude) = match c {
                RingElement::Int(v) if v.sign() == num_bigint::Sign::Minus => {
                    (true, (-v).to_string())
                }
                other => (false, other.to_string()),
            };
            match (i, negative) {
                (0, false) => {}
                (0, true) => out.push('-'),
                (_, false) => out.push_str(" + "),
                (_, true) => out.push_str(" - "),
            }
            if seq.is_empty() {
                out.push_str(&magnitude);
            } else {
                if magnitude != "1" {
                    out.push_str(&magnitude);
                    out.push('*');
                }
                out.push_str(&seq.format(alphabet));
            }
        }
        out
    }

    /// `{ "ring": "Z", "bound": 3, "coeffs": { "": "1", "a.b": "1", "b.a": "-1" } }`.
    pub fn to_json(&self, alphabet: &Alphabet) -> Value {
        let mut coeffs = Map::new();
        for (seq, c) in &self.coeffs {
            coeffs.insert(seq.format(alphabet), Value::String(c.to_string()));
        }
        let mut obj = Map::new();
        obj.insert("ring".into(), Value::String(self.ring.to_string()));
        obj.insert("bound".into(), Value::from(self.bound));
        obj.insert("coeffs".into(), Value::Object(coeffs));
        Value::Object(obj)
    }

    pub fn from_json(alphabet: &Alphabet, value: &Value) -> Result<Self> {
        let ring: RingSpec = value
            .get("ring")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Json("missing `ring`".into()))?
            .parse()?;
        let bound = value
            .get("bound")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Json("missing `bound`".into()))? as usize;
        let coeffs = value
            .get("coeffs")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Json("missing `coeffs`".into()))?;
        let mut terms = Vec::with_capacity(coeffs.len());
        for (key, c) in coeffs {
            let text = c
                .as_str()
                .ok_or_else(|| Error::Json(format!("coefficient of `{key}` is not a string")))?;
            let v: num_bigint::BigInt = text
                .parse()
                .map_err(|_| Error::Json(format!("bad coefficient `{text}`")))?;
            let element = ring.from_bigint(&v);
            if element.to_bigint() != v {
                return Err(Error::Json(format!(
                    "coefficient `{text}` is not canonical in {ring}"
                )));
            }
            let seq = IndexSequence::parse(alphabet, key)?;
            if seq.len() >= bound {
                return Err(Error::Json(format!(
                    "key `{key}` has degree >= bound {bound}"
                )));
            }
            terms.push((seq, element));
        }
        Self::from_terms(alphabet.rank(), ring, bound, terms)
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format(&Alphabet::standard(self.rank)))
    }
}

/// The Magnus expansion of `w`: the image under `a ↦ 1 + X_a`, truncated at `bound`.
pub fn magnus_expand(w: &Word, ring: RingSpec, bound: usize) -> Result<TruncatedSeries> {
    let rank = w.rank();
    let mut letter_series: Vec<[Option<TruncatedSeries>; 2]> = vec![[None, None]; rank];
    let mut acc = TruncatedSeries::one(rank, ring, bound)?;
    for letter in w.letters() {
        let slot = &mut letter_series[letter.index as usize][letter.inverse as usize];
        if slot.is_none() {
            let g = TruncatedSeries::generator(rank, ring, bound, letter.index)?;
            *slot = Some(if letter.inverse { g.invert_unit()? } else { g });
        }
        acc = acc.mul(slot.as_ref().expect("filled above"))?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::enumerate_reduced;
    use num_bigint::BigInt;

    fn seq(v: &[u32]) -> IndexSequence {
        IndexSequence(v.to_vec())
    }

    fn int(v: i64) -> RingElement {
        RingElement::Int(BigInt::from(v))
    }

    fn z_series(bound: usize, terms: &[(&[u32], i64)]) -> TruncatedSeries {
        TruncatedSeries::from_terms(
            2,
            RingSpec::Integers,
            bound,
            terms.iter().map(|(s, c)| (seq(s), int(*c))),
        )
        .unwrap()
    }

    #[test]
    fn multiplication_examples() {
        let a = z_series(3, &[(&[], 1), (&[0], 1)]);
        let b = z_series(3, &[(&[], 1), (&[1], 1)]);
        assert_eq!(
            a.mul(&b).unwrap(),
            z_series(3, &[(&[], 1), (&[0], 1), (&[1], 1), (&[0, 1], 1)])
        );
        let a2 = a.truncate(2).unwrap();
        let b2 = b.truncate(2).unwrap();
        assert_eq!(
            a2.mul(&b2).unwrap(),
            z_series(2, &[(&[], 1), (&[0], 1), (&[1], 1)])
        );
        let xab = z_series(3, &[(&[0, 1], 1)]);
        let xa = z_series(3, &[(&[0], 1)]);
        assert_eq!(
            xab.mul(&xa).unwrap(),
            TruncatedSeries::zero(2, RingSpec::Integers, 3).unwrap()
        );
    }

    #[test]
    fn mixing_bounds_is_an_error() {
        let a = z_series(3, &[(&[], 1)]);
        let b = z_series(4, &[(&[], 1)]);
        assert_eq!(a.mul(&b), Err(Error::BoundMismatch { left: 3, right: 4 }));
        let c = TruncatedSeries::one(2, RingSpec::PrimeField(2), 3).unwrap();
        assert!(matches!(a.add(&c), Err(Error::RingMismatch(_))));
    }

    #[test]
    fn inverse_examples() {
        let a = z_series(3, &[(&[], 1), (&[0], 1)]);
        assert_eq!(
            a.invert_unit().unwrap(),
            z_series(3, &[(&[], 1), (&[0], -1), (&[0, 0], 1)])
        );
        let one = z_series(3, &[(&[], 1)]);
        assert_eq!(one.invert_unit().unwrap(), one);
        assert_eq!(z_series(3, &[(&[], 2)]).invert_unit(), Err(Error::NotUnit));
    }

    #[test]
    fn expansion_examples() {
        let alpha = Alphabet::standard(2);
        let a = alpha.parse("a").unwrap();
        assert_eq!(magnus_expand(&a, RingSpec::Integers, 5).unwrap(), {
            TruncatedSeries::from_terms(
                2,
                RingSpec::Integers,
                5,
                [(seq(&[]), int(1)), (seq(&[0]), int(1))],
            )
            .unwrap()
        });
        let ai = alpha.parse("a^-1").unwrap();
        assert_eq!(
            magnus_expand(&ai, RingSpec::Integers, 3).unwrap(),
            z_series(3, &[(&[], 1), (&[0], -1), (&[0, 0], 1)])
        );
        let ab = alpha.parse("[a,b]").unwrap();
        let lam = magnus_expand(&ab, RingSpec::Integers, 3).unwrap();
        assert_eq!(lam, z_series(3, &[(&[], 1), (&[0, 1], 1), (&[1, 0], -1)]));
        assert_eq!(lam.to_string(), "1 + a.b - b.a");
        assert_eq!(lam.min_positive_degree().unwrap(), Some(2));
        let g2 = lam.graded_component(2).unwrap();
        assert_eq!(g2.len(), 2);
        assert_eq!(g2[&seq(&[0, 1])], int(1));
        assert_eq!(g2[&seq(&[1, 0])], int(-1));
    }

    #[test]
    fn degree_helpers() {
        let one = z_series(4, &[(&[], 1)]);
        assert_eq!(one.min_positive_degree().unwrap(), None);
        assert!(one.graded_component(2).unwrap().is_empty());
        let a = z_series(4, &[(&[], 1), (&[0], 1)]);
        assert_eq!(a.min_positive_degree().unwrap(), Some(1));
        assert_eq!(
            a.graded_component(1).unwrap(),
            BTreeMap::from([(seq(&[0]), int(1))])
        );
        assert!(matches!(
            a.graded_component(4),
            Err(Error::DegreeOutOfRange { .. })
        ));
        assert_eq!(
            z_series(4, &[(&[0], 1)]).min_positive_degree(),
            Err(Error::NotUnit)
        );
    }

    #[test]
    fn expansion_over_f2_freshman_dream() {
        let alpha = Alphabet::standard(1);
        let a4 = alpha.parse("a^4").unwrap();
        let lam = magnus_expand(&a4, RingSpec::PrimeField(2), 6).unwrap();
        assert_eq!(lam.format(&alpha), "1 + a.a.a.a");
    }

    #[test]
    fn expansion_is_a_homomorphism_on_short_words() {
        let words: Vec<Word> = enumerate_reduced(2, 4).collect();
        let expansions: Vec<TruncatedSeries> = words
            .iter()
            .map(|w| magnus_expand(w, RingSpec::Integers, 5).unwrap())
            .collect();
        for (u, lu) in words.iter().zip(&expansions) {
            assert_eq!(
                magnus_expand(&u.invert(), RingSpec::Integers, 5).unwrap(),
                lu.invert_unit().unwrap()
            );
            for (v, lv) in words.iter().zip(&expansions) {
                let uv = u.multiply(v).unwrap();
                assert_eq!(
                    magnus_expand(&uv, RingSpec::Integers, 5).unwrap(),
                    lu.mul(lv).unwrap()
                );
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let alpha = Alphabet::standard(2);
        let lam = magnus_expand(&alpha.parse("[a,b]").unwrap(), RingSpec::Integers, 3).unwrap();
        let json = lam.to_json(&alpha);
        assert_eq!(
            serde_json::to_string(&json).unwrap(),
            r#"{"ring":"Z","bound":3,"coeffs":{"":"1","a.b":"1","b.a":"-1"}}"#
        );
        assert_eq!(TruncatedSeries::from_json(&alpha, &json).unwrap(), lam);
        let bad: Value =
            serde_json::from_str(r#"{"ring":"Z/4","bound":2,"coeffs":{"a":"7"}}"#).unwrap();
        assert!(TruncatedSeries::from_json(&alpha, &bad).is_err());
    }

    #[test]
    fn modular_format() {
        let alpha = Alphabet::standard(2);
        let lam =
            magnus_expand(&alpha.parse("a^-1").unwrap(), RingSpec::IntegersMod(8), 3).unwrap();
        assert_eq!(lam.format(&alpha), "1 + 7*a + a.a");
    }
}
