//! Filtration membership through Magnus coefficients, and sampling of
//! filtration terms from their recursive definitions.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::ring::{is_one, is_prime, IdealChain, RingElement, RingSpec};
use crate::series::{magnus_expand, IndexSequence, TruncatedSeries};
use crate::word::{enumerate_reduced, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FiltrationKind {
    /// `G^(i) = [G, G^(i-1)]`.
    LowerCentral,
    /// `G_(i,p) = (G_(⌈i/p⌉,p))^p ∏_{j+l=i} [G_(j,p), G_(l,p)]`.
    Zassenhaus(u64),
    /// `G^(i,p) = (G^(i-1,p))^p [G, G^(i-1,p)]`.
    LowerPCentral(u64),
}

impl FiltrationKind {
    pub fn zassenhaus(p: u64) -> Result<Self> {
        Self::check_prime(p)?;
        Ok(FiltrationKind::Zassenhaus(p))
    }

    pub fn lower_p_central(p: u64) -> Result<Self> {
        Self::check_prime(p)?;
        Ok(FiltrationKind::LowerPCentral(p))
    }

    fn check_prime(p: u64) -> Result<()> {
        if is_prime(p) {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("{p} is not prime")))
        }
    }

    /// Builds a kind from its short name (`lcs`, `zass`, `lpc`) and an optional prime.
    pub fn from_name(name: &str, p: Option<u64>) -> Result<Self> {
        let need_p = || {
            p.ok_or_else(|| Error::InvalidArgument(format!("filtration `{name}` needs a prime p")))
        };
        match name {
            "lcs" | "lower-central" => Ok(FiltrationKind::LowerCentral),
            "zass" | "zassenhaus" => Self::zassenhaus(need_p()?),
            "lpc" | "lower-p-central" => Self::lower_p_central(need_p()?),
            other => Err(Error::InvalidArgument(format!(
                "unknown filtration `{other}`"
            ))),
        }
    }

    pub fn short_name(&self) -> &'static str {
        match self {
            FiltrationKind::LowerCentral => "lcs",
            FiltrationKind::Zassenhaus(_) => "zass",
            FiltrationKind::LowerPCentral(_) => "lpc",
        }
    }

    pub fn prime(&self) -> Option<u64> {
        match *self {
            FiltrationKind::LowerCentral => None,
            FiltrationKind::Zassenhaus(p) | FiltrationKind::LowerPCentral(p) => Some(p),
        }
    }

    /// The ideal chain whose `L_J` characterizes the `n`-th term:
    /// `(Z, d=1)`, `(F_p, d=1)` or `(Z → Z/p^n, d=p)`.
    pub fn chain(&self, n: usize) -> Result<IdealChain> {
        match *self {
            FiltrationKind::LowerCentral => IdealChain::unit(RingSpec::Integers, n),
            FiltrationKind::Zassenhaus(p) => IdealChain::unit(RingSpec::prime_field(p)?, n),
            FiltrationKind::LowerPCentral(p) => IdealChain::p_power(p, n),
        }
    }
}

impl fmt::Display for FiltrationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiltrationKind::LowerCentral => write!(f, "lower central"),
            FiltrationKind::Zassenhaus(p) => write!(f, "{p}-Zassenhaus"),
            FiltrationKind::LowerPCentral(p) => write!(f, "lower {p}-central"),
        }
    }
}

/// `lcs`, `zass:3`, `lpc:2`.
impl FromStr for FiltrationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            Some((name, p)) => {
                let p = p
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("bad prime in `{s}`")))?;
                Self::from_name(name, Some(p))
            }
            None => Self::from_name(s, None),
        }
    }
}

/// The first coefficient that keeps a series out of `L_J`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub index: IndexSequence,
    /// `c_I` in the source ring.
    pub coefficient: RingElement,
    /// `θ(c_I)` in the target ring.
    pub image: RingElement,
    /// The set `c_I` would have to lie in, e.g. `4Z`.
    pub required: String,
}

fn check_series_for_chain(f: &TruncatedSeries, chain: &IdealChain) -> Result<()> {
    if f.ring() != chain.source() {
        return Err(Error::RingMismatch(format!(
            "series over {}, chain over {}",
            f.ring(),
            chain.source()
        )));
    }
    if f.bound() < chain.n() {
        return Err(Error::BoundTooSmall {
            bound: f.bound(),
            required: chain.n(),
        });
    }
    if !is_one(&f.constant_term()) {
        return Err(Error::NotUnit);
    }
    Ok(())
}

/// Scans degrees `1 <= |I| < n` in canonical order and reports the first
/// coefficient with `θ(c_I) ∉ Ann_R(J_|I|)`.
pub fn first_violation(f: &TruncatedSeries, chain: &IdealChain) -> Result<Option<Violation>> {
    check_series_for_chain(f, chain)?;
    for (seq, c) in f.terms() {
        let t = seq.len();
        if t == 0 {
            continue;
        }
        if t >= chain.n() {
            break;
        }
        let image = chain.theta_reduce(c)?;
        if !chain.annihilator_test(t, &image)? {
            return Ok(Some(Violation {
                index: seq.clone(),
                coefficient: c.clone(),
                image,
                required: chain.required_label(t),
            }));
        }
    }
    Ok(None)
}

/// `f ∈ L_J`.
pub fn in_l(f: &TruncatedSeries, chain: &IdealChain) -> Result<bool> {
    Ok(first_violation(f, chain)?.is_none())
}

/// Membership of `w` in the `n`-th filtration term, with the offending coefficient if any.
pub fn membership_violation(w: &Word, kind: FiltrationKind, n: usize) -> Result<Option<Violation>> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "filtration level must be at least 1".into(),
        ));
    }
    let chain = kind.chain(n)?;
    let f = magnus_expand(w, chain.source(), n)?;
    first_violation(&f, &chain)
}

pub fn filtration_member(w: &Word, kind: FiltrationKind, n: usize) -> Result<bool> {
    Ok(membership_violation(w, kind, n)?.is_none())
}

/// Limits for [`filtration_generators`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeneratorBudget {
    /// Level-1 seeds are all reduced words up to this length.
    pub seed_len: usize,
    /// Words longer than this are discarded.
    pub max_len: usize,
    /// Each level above 1 is thinned to at most this many words.
    pub max_per_level: usize,
}

impl Default for GeneratorBudget {
    fn default() -> Self {
        GeneratorBudget {
            seed_len: 3,
            max_len: 16,
            max_per_level: 400,
        }
    }
}

/// Keeps the shortest `cap / 2` words and an evenly spaced sample of the rest.
fn thin(words: BTreeSet<Word>, cap: usize) -> Vec<Word> {
    let all: Vec<Word> = words.into_iter().collect();
    if all.len() <= cap {
        return all;
    }
    let head = cap / 2;
    let tail = cap - head;
    let rest = &all[head..];
    let mut out = all[..head].to_vec();
    if tail == 1 {
        out.push(rest[0].clone());
    } else if tail > 1 {
        let last = rest.len() - 1;
        out.extend((0..tail).map(|i| rest[i * last / (tail - 1)].clone()));
    }
    out
}

fn keep_short(found: &mut BTreeSet<Word>, w: Word, max_len: usize) {
    if !w.is_identity() && w.len() <= max_len {
        found.insert(w);
    }
}

/// Samples nontrivial elements of the `n`-th filtration term of the free group.
///
/// Level `i` is built from the defining recursion of `kind` applied to the
/// sampled levels below it, together with inverses and products of adjacent
/// pairs (both stay inside the subgroup). Every returned word lies in the term
/// by construction; the sample is not meant to be complete.
pub fn filtration_generators(
    kind: FiltrationKind,
    n: usize,
    rank: usize,
    budget: GeneratorBudget,
) -> Result<Vec<Word>> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "filtration level must be at least 1".into(),
        ));
    }
    if budget.max_len == 0 {
        return Err(Error::InvalidArgument(
            "length budget must be at least 1".into(),
        ));
    }
    let seeds: Vec<Word> = enumerate_reduced(rank, budget.seed_len.min(budget.max_len))
        .filter(|w| !w.is_identity())
        .collect();
    // levels[i - 1] samples the i-th term.
    let mut levels: Vec<Vec<Word>> = vec![seeds.clone()];
    for i in 2..=n {
        let mut found = BTreeSet::new();
        let max_len = budget.max_len;
        let mut keep = |w: Word| keep_short(&mut found, w, max_len);
        let previous = &levels[i - 2];
        match kind {
            FiltrationKind::LowerCentral => {
                for g in &seeds {
                    for h in previous {
                        keep(Word::commutator(g, h)?);
                    }
                }
            }
            FiltrationKind::LowerPCentral(p) => {
                for h in previous {
                    keep(h.pow(p as i64));
                }
                for g in &seeds {
                    for h in previous {
                        keep(Word::commutator(g, h)?);
                    }
                }
            }
            FiltrationKind::Zassenhaus(p) => {
                let base = i.div_ceil(p as usize);
                for h in &levels[base - 1] {
                    keep(h.pow(p as i64));
                }
                for j in 1..i {
                    let l = i - j;
                    for x in &levels[j - 1] {
                        for y in &levels[l - 1] {
                            keep(Word::commutator(x, y)?);
                        }
                    }
                }
            }
        }
        let generators: Vec<Word> = found.iter().cloned().collect();
        for g in &generators {
            keep_short(&mut found, g.invert(), max_len);
        }
        for pair in generators.windows(2) {
            keep_short(&mut found, pair[0].multiply(&pair[1])?, max_len);
        }
        levels.push(thin(found, budget.max_per_level));
    }
    Ok(levels.pop().expect("at least one level"))
}
