//! Reduced words in a free group of finite rank.
//!
//! A [`Word`] is a freely reduced sequence of signed letters. Products,
//! inverses and commutators always return reduced words, so structural
//! equality of `Word`s is equality in the free group.

use std::cmp::Ordering;
use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};

/// A generator or its formal inverse.
///
/// The derived order is `(index, inverse)`, so `a < a⁻¹ < b < b⁻¹`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub index: u32,
    pub inverse: bool,
}

impl Letter {
    pub const fn new(index: u32, inverse: bool) -> Self {
        Letter { index, inverse }
    }

    pub const fn positive(index: u32) -> Self {
        Letter {
            index,
            inverse: false,
        }
    }

    pub const fn negative(index: u32) -> Self {
        Letter {
            index,
            inverse: true,
        }
    }

    pub const fn inv(self) -> Self {
        Letter {
            index: self.index,
            inverse: !self.inverse,
        }
    }

    pub const fn sign(self) -> i8 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    fn cancels(self, other: Letter) -> bool {
        self.index == other.index && self.inverse != other.inverse
    }
}

/// A generator of the free group: position in the alphabet plus its display name.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub index: usize,
    pub name: String,
}

/// Element of the free group on `rank` generators, stored freely reduced.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    rank: usize,
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity(rank: usize) -> Self {
        Word {
            rank,
            letters: Vec::new(),
        }
    }

    pub fn generator(rank: usize, index: usize) -> Result<Self> {
        if index >= rank {
            return Err(Error::GeneratorOutOfRange { index, rank });
        }
        Ok(Word {
            rank,
            letters: vec![Letter::positive(index as u32)],
        })
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn reduce<I: IntoIterator<Item = Letter>>(rank: usize, raw: I) -> Result<Self> {
        let mut letters: Vec<Letter> = Vec::new();
        for letter in raw {
            if letter.index as usize >= rank {
                return Err(Error::GeneratorOutOfRange {
                    index: letter.index as usize,
                    rank,
                });
            }
            push_reduced(&mut letters, letter);
        }
        Ok(Word { rank, letters })
    }

    /// Builds a word from `(generator index, exponent)` pairs, e.g. `[(0, 2), (1, -1)]` is `a²b⁻¹`.
    pub fn from_powers(rank: usize, powers: &[(usize, i64)]) -> Result<Self> {
        let mut letters = Vec::new();
        for &(index, exp) in powers {
            let letter = Letter::new(index as u32, exp < 0);
            letters.extend(std::iter::repeat_n(letter, exp.unsigned_abs() as usize));
        }
        Word::reduce(rank, letters)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    fn check_rank(&self, other: &Word) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::AlphabetMismatch {
                left: self.rank,
                right: other.rank,
            });
        }
        Ok(())
    }

    pub fn multiply(&self, other: &Word) -> Result<Word> {
        self.check_rank(other)?;
        let mut letters = self.letters.clone();
        for &letter in &other.letters {
            push_reduced(&mut letters, letter);
        }
        Ok(Word {
            rank: self.rank,
            letters,
        })
    }

    pub fn invert(&self) -> Word {
        Word {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    /// `[h, k] = h⁻¹k⁻¹hk`.
    pub fn commutator(h: &Word, k: &Word) -> Result<Word> {
        h.check_rank(k)?;
        let raw = h
            .invert()
            .letters
            .into_iter()
            .chain(k.invert().letters)
            .chain(h.letters.iter().copied())
            .chain(k.letters.iter().copied());
        Word::reduce(h.rank, raw)
    }

    pub fn pow(&self, exp: i64) -> Word {
        let base = if exp < 0 { self.invert() } else { self.clone() };
        let mut out = Word::identity(self.rank);
        for _ in 0..exp.unsigned_abs() {
            for &letter in &base.letters {
                push_reduced(&mut out.letters, letter);
            }
        }
        out
    }

    /// `g⁻¹ w g`.
    pub fn conjugate_by(&self, g: &Word) -> Result<Word> {
        g.invert().multiply(self)?.multiply(g)
    }

    /// The word with its last letter removed (the parent in the enumeration tree).
    pub fn prefix(&self) -> Option<Word> {
        if self.letters.is_empty() {
            return None;
        }
        Some(Word {
            rank: self.rank,
            letters: self.letters[..self.letters.len() - 1].to_vec(),
        })
    }
}

fn push_reduced(letters: &mut Vec<Letter>, letter: Letter) {
    match letters.last() {
        Some(&last) if last.cancels(letter) => {
            letters.pop();
        }
        _ => letters.push(letter),
    }
}

/// Length first, then lexicographic on letters: the enumeration order.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank
            .cmp(&other.rank)
            .then(self.letters.len().cmp(&other.letters.len()))
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Number of reduced words of length at most `max_len` on `rank` generators.
pub fn reduced_word_count(rank: usize, max_len: usize) -> u128 {
    if rank == 0 {
        return 1;
    }
    let two_k = 2 * rank as u128;
    let mut total = 1u128;
    let mut level = two_k;
    for _ in 0..max_len {
        total += level;
        level *= two_k - 1;
    }
    total
}

/// Every reduced word of length `<= max_len`, by length and then lexicographically.
pub fn enumerate_reduced(rank: usize, max_len: usize) -> ReducedWords {
    ReducedWords {
        rank,
        max_len,
        level: vec![Word::identity(rank)],
        level_len: 0,
        pos: 0,
    }
}

pub struct ReducedWords {
    rank: usize,
    max_len: usize,
    level: Vec<Word>,
    level_len: usize,
    pos: usize,
}

impl Iterator for ReducedWords {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.pos == self.level.len() {
            if self.level_len == self.max_len || self.rank == 0 {
                return None;
            }
            let mut next = Vec::with_capacity(self.level.len() * (2 * self.rank).max(1));
            for w in &self.level {
                let last = w.letters.last().copied();
                for index in 0..self.rank as u32 {
                    for inverse in [false, true] {
                        let letter = Letter::new(index, inverse);
                        if last.is_some_and(|l| l.cancels(letter)) {
                            continue;
                        }
                        let mut letters = Vec::with_capacity(w.len() + 1);
                        letters.extend_from_slice(&w.letters);
                        letters.push(letter);
                        next.push(Word {
                            rank: self.rank,
                            letters,
                        });
                    }
                }
            }
            self.level = next;
            self.level_len += 1;
            self.pos = 0;
        }
        let w = self.level[self.pos].clone();
        self.pos += 1;
        Some(w)
    }
}

/// Uniformly random reduced word of exactly `len` letters.
pub fn random_reduced<R: Rng + ?Sized>(rank: usize, len: usize, rng: &mut R) -> Word {
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    if rank == 0 {
        return Word::identity(0);
    }
    while letters.len() < len {
        let letter = Letter::new(rng.random_range(0..rank as u32), rng.random_bool(0.5));
        if letters.last().is_some_and(|l| l.cancels(letter)) {
            continue;
        }
        letters.push(letter);
    }
    Word { rank, letters }
}

/// Generator names plus the word grammar.
///
/// ```text
/// word := term { term }
/// term := atom [ "^" integer ]
/// atom := generator | inverseLetter | "1" | "(" word ")" | "[" word "," word "]"
/// ```
///
/// An uppercase single letter `A` denotes the inverse of generator `a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let names: Vec<String> = names
            .iter()
            .map(|s| s.as_ref().trim().to_string())
            .collect();
        for (i, name) in names.iter().enumerate() {
            let mut chars = name.chars();
            let ok = chars
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return Err(Error::InvalidAlphabet(format!(
                    "`{name}` is not an ASCII identifier"
                )));
            }
            if names[..i].contains(name) {
                return Err(Error::InvalidAlphabet(format!(
                    "duplicate generator `{name}`"
                )));
            }
        }
        Ok(Alphabet { names })
    }

    /// `a, b, c, ...` for up to 26 generators, `x1, x2, ...` beyond that.
    pub fn standard(rank: usize) -> Self {
        let names = if rank <= 26 {
            (0..rank)
                .map(|i| ((b'a' + i as u8) as char).to_string())
                .collect()
        } else {
            (1..=rank).map(|i| format!("x{i}")).collect()
        };
        Alphabet { names }
    }

    /// Parses `"a,b,c"`, or a bare count such as `"2"`.
    pub fn from_spec(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if let Ok(rank) = spec.parse::<usize>() {
            return Ok(Alphabet::standard(rank));
        }
        let names: Vec<&str> = spec.split(',').collect();
        Alphabet::new(&names)
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn generators(&self) -> impl Iterator<Item = Generator> + '_ {
        self.names
            .iter()
            .enumerate()
            .map(|(index, name)| Generator {
                index,
                name: name.clone(),
            })
    }

    pub fn parse(&self, expr: &str) -> Result<Word> {
        let mut parser = Parser {
            alphabet: self,
            src: expr.as_bytes(),
            pos: 0,
        };
        let word = parser.word()?;
        parser.skip_ws();
        if parser.pos < parser.src.len() {
            return Err(parser.error("unexpected character"));
        }
        Ok(word)
    }

    /// Run-length form, e.g. `a^-1 b^-1 a b`; the identity prints as `1`.
    pub fn format(&self, word: &Word) -> String {
        if word.is_identity() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        let letters = word.letters();
        let mut i = 0;
        while i < letters.len() {
            let letter = letters[i];
            let mut run = 1;
            while i + run < letters.len() && letters[i + run] == letter {
                run += 1;
            }
            let exp = run as i64 * letter.sign() as i64;
            let name = self.name(letter.index as usize);
            parts.push(if exp == 1 {
                name.to_string()
            } else {
                format!("{name}^{exp}")
            });
            i += run;
        }
        parts.join(" ")
    }
}

struct Parser<'a> {
    alphabet: &'a Alphabet,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Syntax {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", c as char)))
        }
    }

    fn word(&mut self) -> Result<Word> {
        let rank = self.alphabet.rank();
        let mut acc = Word::identity(rank);
        while let Some(c) = self.peek() {
            if matches!(c, b')' | b']' | b',') {
                break;
            }
            let term = self.term()?;
            acc = acc.multiply(&term)?;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Word> {
        let atom = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let exp = self.integer()?;
            return Ok(atom.pow(exp));
        }
        Ok(atom)
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        let mut negative = false;
        if let Some(&c) = self.src.get(self.pos) {
            if c == b'-' || c == b'+' {
                negative = c == b'-';
                self.pos += 1;
            }
        }
        let digits_start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if digits_start == self.pos {
            self.pos = start;
            return Err(self.error("expected an integer exponent"));
        }
        let text = std::str::from_utf8(&self.src[digits_start..self.pos]).expect("ascii digits");
        let value: i64 = text.parse().map_err(|_| Error::Syntax {
            position: digits_start,
            message: "exponent out of range".to_string(),
        })?;
        Ok(if negative { -value } else { value })
    }

    fn atom(&mut self) -> Result<Word> {
        let rank = self.alphabet.rank();
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let w = self.word()?;
                self.expect(b')')?;
                Ok(w)
            }
            Some(b'[') => {
                self.pos += 1;
                let h = self.word()?;
                self.expect(b',')?;
                let k = self.word()?;
                self.expect(b']')?;
                Word::commutator(&h, &k)
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(Word::identity(rank))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.generator(),
            Some(_) => Err(self.error("unexpected character")),
        }
    }

    fn generator(&mut self) -> Result<Word> {
        let rest = &self.src[self.pos..];
        let best = self
            .alphabet
            .names
            .iter()
            .enumerate()
            .filter(|(_, name)| rest.starts_with(name.as_bytes()))
            .max_by_key(|(_, name)| name.len());
        let rank = self.alphabet.rank();
        if let Some((index, name)) = best {
            self.pos += name.len();
            return Word::generator(rank, index);
        }
        let c = rest[0];
        if c.is_ascii_uppercase() {
            let lower = (c.to_ascii_lowercase() as char).to_string();
            if let Some(index) = self.alphabet.index_of(&lower) {
                self.pos += 1;
                return Word::reduce(rank, [Letter::negative(index as u32)]);
            }
        }
        let len = rest
            .iter()
            .take_while(|c| c.is_ascii_alphanumeric() || **c == b'_')
            .count();
        Err(Error::UnknownGenerator(
            String::from_utf8_lossy(&rest[..len]).into_owned(),
        ))
    }
}

impl fmt::Display for Word {
    /// Formats with the standard alphabet; use [`Alphabet::format`] for custom names.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&Alphabet::standard(self.rank).format(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: Letter = Letter::positive(0);
    const AI: Letter = Letter::negative(0);
    const B: Letter = Letter::positive(1);
    const BI: Letter = Letter::negative(1);

    fn w(letters: &[Letter]) -> Word {
        Word::reduce(2, letters.iter().copied()).unwrap()
    }

    #[test]
    fn reduce_cancels() {
        assert_eq!(w(&[A, AI, B]).letters(), &[B]);
        assert_eq!(w(&[A, B, BI, A]).letters(), &[A, A]);
        assert!(w(&[]).is_identity());
        assert_eq!(w(&[A, B, BI, AI]), Word::identity(2));
    }

    #[test]
    fn reduce_rejects_bad_index() {
        assert_eq!(
            Word::reduce(2, [Letter::positive(2)]),
            Err(Error::GeneratorOutOfRange { index: 2, rank: 2 })
        );
    }

    #[test]
    fn multiply_and_invert() {
        let ab = w(&[A, B]);
        let bia = w(&[BI, A]);
        assert_eq!(ab.multiply(&bia).unwrap(), w(&[A, A]));
        assert!(ab.multiply(&ab.invert()).unwrap().is_identity());
        assert_eq!(Word::identity(2).multiply(&ab).unwrap(), ab);
        assert_eq!(ab.invert(), w(&[BI, AI]));
        assert_eq!(Word::identity(2).invert(), Word::identity(2));
        assert_eq!(w(&[AI]).invert(), w(&[A]));
    }

    #[test]
    fn alphabet_mismatch() {
        let a2 = Word::generator(2, 0).unwrap();
        let a3 = Word::generator(3, 0).unwrap();
        assert_eq!(
            a2.multiply(&a3),
            Err(Error::AlphabetMismatch { left: 2, right: 3 })
        );
        assert!(Word::commutator(&a2, &a3).is_err());
    }

    #[test]
    fn commutators() {
        let a = w(&[A]);
        let b = w(&[B]);
        assert_eq!(Word::commutator(&a, &b).unwrap(), w(&[AI, BI, A, B]));
        assert!(Word::commutator(&a, &a).unwrap().is_identity());
        assert!(Word::commutator(&a, &Word::identity(2))
            .unwrap()
            .is_identity());
        assert!(Word::commutator(&a.pow(3), &a.pow(-2))
            .unwrap()
            .is_identity());
    }

    #[test]
    fn parse_grammar() {
        let alpha = Alphabet::standard(2);
        assert_eq!(alpha.parse("[a,b]").unwrap(), w(&[AI, BI, A, B]));
        assert_eq!(alpha.parse("a^-3").unwrap(), w(&[AI, AI, AI]));
        assert_eq!(alpha.parse("(ab)^2").unwrap(), w(&[A, B, A, B]));
        assert_eq!(alpha.parse("A b B a").unwrap(), Word::identity(2));
        assert_eq!(alpha.parse("").unwrap(), Word::identity(2));
        assert_eq!(alpha.parse("1").unwrap(), Word::identity(2));
        assert_eq!(alpha.parse("[[a,b],a]").unwrap(), {
            let ab = Word::commutator(&w(&[A]), &w(&[B])).unwrap();
            Word::commutator(&ab, &w(&[A])).unwrap()
        });
        assert_eq!(alpha.parse("a^0 b^+2").unwrap(), w(&[B, B]));
    }

    #[test]
    fn parse_errors() {
        let alpha = Alphabet::standard(2);
        assert_eq!(alpha.parse("ac"), Err(Error::UnknownGenerator("c".into())));
        assert!(matches!(
            alpha.parse("[a,b"),
            Err(Error::Syntax { position: 4, .. })
        ));
        assert!(matches!(
            alpha.parse("a^"),
            Err(Error::Syntax { position: 2, .. })
        ));
        assert!(matches!(
            alpha.parse("a)"),
            Err(Error::Syntax { position: 1, .. })
        ));
        assert!(matches!(
            alpha.parse("a*b"),
            Err(Error::Syntax { position: 1, .. })
        ));
    }

    #[test]
    fn multi_letter_names() {
        let alpha = Alphabet::new(&["x1", "x12"]).unwrap();
        let w = alpha.parse("x12 x1^-1").unwrap();
        assert_eq!(w.letters(), &[Letter::positive(1), Letter::negative(0)]);
        assert_eq!(alpha.format(&w), "x12 x1^-1");
        assert!(Alphabet::new(&["a", "a"]).is_err());
        assert!(Alphabet::new(&["1a"]).is_err());
    }

    #[test]
    fn format_round_trip() {
        let alpha = Alphabet::standard(2);
        for word in enumerate_reduced(2, 4) {
            let text = alpha.format(&word);
            assert_eq!(alpha.parse(&text).unwrap(), word, "{text}");
        }
        assert_eq!(
            alpha.format(&alpha.parse("[a,b]").unwrap()),
            "a^-1 b^-1 a b"
        );
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_reduced(2, 1).count(), 5);
        assert_eq!(enumerate_reduced(2, 6).count(), 1457);
        let words: Vec<Word> = enumerate_reduced(1, 3).collect();
        assert_eq!(words.len(), 7);
        assert_eq!(words[0], Word::identity(1));
        assert_eq!(enumerate_reduced(3, 0).count(), 1);
    }

    #[test]
    fn enumeration_closed_form_and_unique() {
        for k in 1..=3 {
            for len in 0..=6 {
                let words: Vec<Word> = enumerate_reduced(k, len).collect();
                assert_eq!(words.len() as u128, reduced_word_count(k, len));
                let mut sorted = words.clone();
                sorted.sort();
                sorted.dedup();
                assert_eq!(sorted, words, "order or duplicates, k={k} len={len}");
                for word in &words {
                    assert_eq!(
                        &Word::reduce(k, word.letters().iter().copied()).unwrap(),
                        word
                    );
                }
            }
        }
    }

    #[test]
    fn group_axioms_small_words() {
        let words: Vec<Word> = enumerate_reduced(2, 3).collect();
        let e = Word::identity(2);
        for x in &words {
            assert_eq!(&e.multiply(x).unwrap(), x);
            assert_eq!(&x.multiply(&e).unwrap(), x);
            assert!(x.multiply(&x.invert()).unwrap().is_identity());
            assert!(x.invert().multiply(x).unwrap().is_identity());
            for y in &words {
                let xy = x.multiply(y).unwrap();
                for z in &words {
                    assert_eq!(
                        xy.multiply(z).unwrap(),
                        x.multiply(&y.multiply(z).unwrap()).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn random_words_are_reduced() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for len in 0..20 {
            let word = random_reduced(2, len, &mut rng);
            assert_eq!(word.len(), len);
            assert_eq!(
                Word::reduce(2, word.letters().iter().copied()).unwrap(),
                word
            );
        }
    }
}
