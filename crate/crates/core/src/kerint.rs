//! Kernel intersections `KerInt(S, G)`: exhaustive hom enumeration for finite
//! targets, witness homomorphisms for `d`-chains, and the harness comparing
//! both against the Magnus coefficient criterion.
//!
//! Nothing here calls into the series code except [`cross_validate`], which
//! needs the other side of the comparison.

use std::collections::HashMap;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::filtration::{filtration_member, FiltrationKind};
use crate::ring::{IdealChain, RingElement, RingSpec};
use crate::series::IndexSequence;
use crate::unipotent::{GroupDescriptor, GroupHom, SquareMatrix, UnipotentMatrix};
use crate::word::{enumerate_reduced, reduced_word_count, Alphabet, Letter, Word};

/// Default cap on group orders and hom counts.
pub const DEFAULT_CAP: u128 = 1 << 20;

/// Every homomorphism from the free group of rank `rank` into a finite unipotent group.
pub fn enumerate_homs(desc: &GroupDescriptor, rank: usize, cap: u128) -> Result<Homs> {
    let elements: Vec<UnipotentMatrix> = desc.enumerate(cap)?.collect();
    let count = (elements.len() as u128)
        .checked_pow(rank as u32)
        .ok_or_else(|| Error::budget("homomorphism count", u128::MAX, cap))?;
    if count > cap {
        return Err(Error::budget(
            format!("homomorphisms into {desc}"),
            count,
            cap,
        ));
    }
    Ok(Homs {
        desc: desc.clone(),
        elements,
        counter: vec![0; rank],
        remaining: count,
    })
}

pub struct Homs {
    desc: GroupDescriptor,
    elements: Vec<UnipotentMatrix>,
    counter: Vec<usize>,
    remaining: u128,
}

impl Homs {
    pub fn len(&self) -> u128 {
        self.remaining
    }

    pub fn is_empty(&self) -> bool {
        self.remaining == 0
    }
}

impl Iterator for Homs {
    type Item = GroupHom;

    fn next(&mut self) -> Option<GroupHom> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let images = self
            .counter
            .iter()
            .map(|&i| self.elements[i].clone())
            .collect();
        for slot in self.counter.iter_mut().rev() {
            *slot += 1;
            if *slot < self.elements.len() {
                break;
            }
            *slot = 0;
        }
        Some(
            GroupHom::new(self.desc.clone(), images).expect("enumerated elements lie in the group"),
        )
    }
}

/// `w ∈ KerInt(S, G)` for a finite `G`, by evaluating every homomorphism.
pub fn kerint_finite(w: &Word, desc: &GroupDescriptor, cap: u128) -> Result<bool> {
    for phi in enumerate_homs(desc, w.rank(), cap)? {
        if !phi.eval(w)?.is_identity() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The homomorphism `a ↦ I + d Σ_{j : l_j = a} E_{j,j+1}` attached to `I₀ = (l₁, …, l_t)`.
///
/// Generators absent from `I₀` map to the identity.
pub fn witness_hom(i0: &IndexSequence, chain: &IdealChain, rank: usize) -> Result<GroupHom> {
    let t = i0.len();
    if t == 0 || t >= chain.n() {
        return Err(Error::DegreeOutOfRange {
            degree: t,
            limit: chain.n(),
        });
    }
    let n = chain.n();
    let ring = chain.target();
    let mut images = vec![SquareMatrix::identity(ring, n); rank];
    for (j, &a) in i0.indices().iter().enumerate() {
        let image = images
            .get_mut(a as usize)
            .ok_or(Error::GeneratorOutOfRange {
                index: a as usize,
                rank,
            })?;
        image.set(j, j + 1, chain.d().clone())?;
    }
    let images = images
        .into_iter()
        .map(UnipotentMatrix::new)
        .collect::<Result<Vec<_>>>()?;
    GroupHom::new(GroupDescriptor::IdealUnipotent(chain.clone()), images)
}

/// All witness homomorphisms for sequences of length `1..n`.
pub fn witness_family(chain: &IdealChain, rank: usize) -> Result<Vec<GroupHom>> {
    let mut homs = Vec::new();
    for t in 1..chain.n() {
        for seq in IndexSequence::all_of_length(rank, t) {
            homs.push(witness_hom(&seq, chain, rank)?);
        }
    }
    Ok(homs)
}

/// `w` is killed by every witness homomorphism of `chain`.
pub fn kerint_witness(w: &Word, chain: &IdealChain) -> Result<bool> {
    for phi in witness_family(chain, w.rank())? {
        if !phi.eval(w)?.is_identity() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A hom into a unipotent group over `Z/m`, with generator images packed as
/// row-major `u64` residues (inverse images at odd slots).
struct PackedHom {
    n: usize,
    modulus: u64,
    letters: Vec<Vec<u64>>,
    identity: Vec<u64>,
}

impl PackedHom {
    fn new(phi: &GroupHom) -> Option<Self> {
        let desc = phi.descriptor();
        let modulus = desc.ring().modulus()?;
        if modulus >= 1 << 31 {
            return None;
        }
        let pack = |m: &UnipotentMatrix| {
            m.matrix()
                .rows()
                .flatten()
                .map(|x| match x {
                    RingElement::Residue(r) => *r,
                    RingElement::Int(_) => unreachable!("finite ring"),
                })
                .collect::<Vec<u64>>()
        };
        let mut letters = Vec::with_capacity(2 * phi.rank());
        for (image, inverse) in phi
            .images()
            .iter()
            .zip(phi.images().iter().map(UnipotentMatrix::inverse))
        {
            letters.push(pack(image));
            letters.push(pack(&inverse));
        }
        let n = desc.size();
        let mut identity = vec![0; n * n];
        for i in 0..n {
            identity[i * n + i] = 1;
        }
        Some(PackedHom {
            n,
            modulus,
            letters,
            identity,
        })
    }

    /// `out = a · φ(letter)`, both upper unitriangular.
    fn mul_letter(&self, a: &[u64], letter: Letter, out: &mut [u64]) {
        let n = self.n;
        let b = &self.letters[2 * letter.index as usize + letter.inverse as usize];
        for i in 0..n {
            for j in i..n {
                let mut acc = 0u64;
                if self.modulus < 1 << 16 {
                    for k in i..=j {
                        acc += a[i * n + k] * b[k * n + j];
                    }
                } else {
                    for k in i..=j {
                        acc = (acc + a[i * n + k] * b[k * n + j]) % self.modulus;
                    }
                }
                out[i * n + j] = acc % self.modulus;
            }
        }
    }

    fn kills(&self, w: &Word, buffers: &mut [Vec<u64>; 2]) -> bool {
        buffers[0].copy_from_slice(&self.identity);
        for &letter in w.letters() {
            let [a, b] = buffers;
            self.mul_letter(a, letter, b);
            buffers.swap(0, 1);
        }
        buffers[0] == self.identity
    }
}

/// For each word, whether every hom in `homs` maps it to the identity.
pub fn killed_by_homs(words: &[Word], homs: &[GroupHom]) -> Result<Vec<bool>> {
    for w in words {
        if let Some(phi) = homs.first() {
            if w.rank() != phi.rank() {
                return Err(Error::AlphabetMismatch {
                    left: w.rank(),
                    right: phi.rank(),
                });
            }
        }
    }
    let per_hom: Vec<Vec<bool>> = homs
        .par_iter()
        .map(|phi| match PackedHom::new(phi) {
            Some(packed) => {
                let mut buffers = [packed.identity.clone(), packed.identity.clone()];
                words
                    .iter()
                    .map(|w| packed.kills(w, &mut buffers))
                    .collect()
            }
            None => words
                .iter()
                .map(|w| phi.eval(w).map(|m| m.is_identity()).unwrap_or(false))
                .collect(),
        })
        .collect();
    Ok(merge(words.len(), per_hom))
}

fn merge(len: usize, per_hom: Vec<Vec<bool>>) -> Vec<bool> {
    let mut acc = vec![true; len];
    for survivors in per_hom {
        for (a, b) in acc.iter_mut().zip(survivors) {
            *a &= b;
        }
    }
    acc
}

/// Like [`killed_by_homs`] for a prefix-closed word list: `parents[i]` is the
/// index of `words[i]` without its last letter, so each word costs one product.
fn killed_by_all(words: &[Word], parents: &[Option<usize>], homs: &[GroupHom]) -> Vec<bool> {
    let per_hom: Vec<Vec<bool>> = homs
        .par_iter()
        .map(|phi| match PackedHom::new(phi) {
            Some(packed) => {
                let size = packed.n * packed.n;
                let identity = &packed.identity;
                let mut values = vec![0u64; words.len() * size];
                let mut survivors = vec![true; words.len()];
                for (i, w) in words.iter().enumerate() {
                    let (done, rest) = values.split_at_mut(i * size);
                    let out = &mut rest[..size];
                    match (parents[i], w.letters().last()) {
                        (Some(parent), Some(&letter)) => packed.mul_letter(
                            &done[parent * size..(parent + 1) * size],
                            letter,
                            out,
                        ),
                        _ => out.copy_from_slice(identity),
                    }
                    survivors[i] = *out == identity[..];
                }
                survivors
            }
            None => {
                let desc = phi.descriptor();
                let mut values: Vec<UnipotentMatrix> = Vec::with_capacity(words.len());
                let mut survivors = vec![true; words.len()];
                for (i, w) in words.iter().enumerate() {
                    let value = match (parents[i], w.letters().last()) {
                        (Some(parent), Some(&letter)) => values[parent]
                            .mul(phi.letter_image(letter))
                            .expect("same group"),
                        _ => UnipotentMatrix::identity(desc.ring(), desc.size()),
                    };
                    survivors[i] = value.is_identity();
                    values.push(value);
                }
                survivors
            }
        })
        .collect();
    merge(words.len(), per_hom)
}

fn prefix_parents(words: &[Word]) -> Vec<Option<usize>> {
    let index: HashMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    words
        .iter()
        .map(|w| {
            w.prefix()
                .map(|p| *index.get(&p).expect("enumeration is prefix-closed"))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KerIntMode {
    /// Every homomorphism into the finite target group.
    Exhaustive,
    /// The witness homomorphisms of the `d`-chain.
    Witness,
}

impl std::str::FromStr for KerIntMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(KerIntMode::Exhaustive),
            "witness" => Ok(KerIntMode::Witness),
            other => Err(Error::InvalidArgument(format!("unknown mode `{other}`"))),
        }
    }
}

/// Parameters for [`cross_validate`].
#[derive(Clone, Copy, Debug)]
pub struct CrossValidation {
    pub kind: FiltrationKind,
    pub n: usize,
    pub rank: usize,
    pub max_len: usize,
    pub mode: KerIntMode,
    /// Cap on the group order, the hom count, and the word count.
    pub cap: u128,
    /// Random integer homs per Magnus member in witness mode over `Z` (not part of the decision).
    pub smoke_samples: usize,
    pub seed: u64,
}

impl CrossValidation {
    pub fn new(
        kind: FiltrationKind,
        n: usize,
        rank: usize,
        max_len: usize,
        mode: KerIntMode,
    ) -> Self {
        CrossValidation {
            kind,
            n,
            rank,
            max_len,
            mode,
            cap: DEFAULT_CAP,
            smoke_samples: 0,
            seed: 0,
        }
    }

    /// The finite group `U_n(F_p)` or `G(n, p)` whose kernel intersection is the `n`-th term.
    pub fn exhaustive_target(&self) -> Result<GroupDescriptor> {
        match self.kind {
            FiltrationKind::LowerCentral => Err(Error::Infinite(
                "U_n(Z); use witness mode for the lower central series".into(),
            )),
            FiltrationKind::Zassenhaus(p) => {
                GroupDescriptor::full(RingSpec::prime_field(p)?, self.n)
            }
            FiltrationKind::LowerPCentral(p) => GroupDescriptor::gnp(self.n, p),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KerIntReport {
    pub kind: String,
    pub n: usize,
    pub prime: Option<u64>,
    pub rank: usize,
    pub max_len: usize,
    pub mode: KerIntMode,
    pub target: String,
    pub homs: u64,
    pub words_tested: u64,
    pub magnus_members: u64,
    pub kerint_members: u64,
    pub disagreements: u64,
    pub smoke_checks: u64,
    pub smoke_violations: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
    /// Words on which the two deciders disagree (first ten).
    pub exemplars: Vec<String>,
}

impl KerIntReport {
    pub fn passed(&self) -> bool {
        self.disagreements == 0 && self.smoke_violations == 0
    }
}

/// Compares the Magnus criterion with the kernel intersection on every reduced
/// word of length `<= max_len`.
pub fn cross_validate(config: &CrossValidation) -> Result<KerIntReport> {
    let started = Instant::now();
    let CrossValidation {
        kind,
        n,
        rank,
        max_len,
        mode,
        cap,
        ..
    } = *config;
    if n == 0 {
        return Err(Error::InvalidArgument(
            "filtration level must be at least 1".into(),
        ));
    }
    let word_count = reduced_word_count(rank, max_len);
    if word_count > cap {
        return Err(Error::budget("words", word_count, cap));
    }
    let words: Vec<Word> = enumerate_reduced(rank, max_len).collect();
    let parents = prefix_parents(&words);

    let (homs, target) = match mode {
        KerIntMode::Exhaustive => {
            let desc = config.exhaustive_target()?;
            let homs: Vec<GroupHom> = enumerate_homs(&desc, rank, cap)?.collect();
            (homs, desc.to_string())
        }
        KerIntMode::Witness => {
            let chain = kind.chain(n)?;
            let desc = GroupDescriptor::IdealUnipotent(chain.clone());
            (
                witness_family(&chain, rank)?,
                format!("witnesses in {desc}"),
            )
        }
    };

    let kerint = killed_by_all(&words, &parents, &homs);
    let magnus: Vec<bool> = words
        .par_iter()
        .map(|w| filtration_member(w, kind, n))
        .collect::<Result<_>>()?;

    let alphabet = Alphabet::standard(rank);
    let mut report = KerIntReport {
        kind: kind.short_name().to_string(),
        n,
        prime: kind.prime(),
        rank,
        max_len,
        mode,
        target,
        homs: homs.len() as u64,
        words_tested: words.len() as u64,
        magnus_members: magnus.iter().filter(|&&m| m).count() as u64,
        kerint_members: kerint.iter().filter(|&&m| m).count() as u64,
        disagreements: 0,
        smoke_checks: 0,
        smoke_violations: 0,
        elapsed_ms: None,
        exemplars: Vec::new(),
    };
    for (i, w) in words.iter().enumerate() {
        if magnus[i] != kerint[i] {
            report.disagreements += 1;
            if report.exemplars.len() < 10 {
                report.exemplars.push(alphabet.format(w));
            }
        }
    }

    let chain = kind.chain(n)?;
    if mode == KerIntMode::Witness && !chain.target().is_finite() && config.smoke_samples > 0 {
        // Random integer homs must kill every Magnus member.
        let desc = GroupDescriptor::IdealUnipotent(chain);
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        for (i, w) in words.iter().enumerate() {
            if !magnus[i] {
                continue;
            }
            for _ in 0..config.smoke_samples {
                let images = (0..rank)
                    .map(|_| desc.random_element(&mut rng, 9))
                    .collect();
                let phi = GroupHom::new(desc.clone(), images)?;
                report.smoke_checks += 1;
                if !phi.eval(w)?.is_identity() {
                    report.smoke_violations += 1;
                }
            }
        }
    }

    report.elapsed_ms = Some(started.elapsed().as_millis() as u64);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Alphabet;

    fn parse(expr: &str) -> Word {
        Alphabet::standard(2).parse(expr).unwrap()
    }

    #[test]
    fn hom_counts() {
        let u2 = GroupDescriptor::full(RingSpec::PrimeField(2), 2).unwrap();
        assert_eq!(enumerate_homs(&u2, 2, DEFAULT_CAP).unwrap().count(), 4);
        let g22 = GroupDescriptor::gnp(2, 2).unwrap();
        assert_eq!(enumerate_homs(&g22, 1, DEFAULT_CAP).unwrap().count(), 2);
        let g32 = GroupDescriptor::gnp(3, 2).unwrap();
        assert_eq!(enumerate_homs(&g32, 0, DEFAULT_CAP).unwrap().count(), 1);
        let homs: Vec<_> = enumerate_homs(&g32, 2, DEFAULT_CAP).unwrap().collect();
        assert_eq!(homs.len(), 1024);
        for (i, a) in homs.iter().enumerate().step_by(97) {
            for b in homs.iter().skip(i + 1).step_by(89) {
                assert_ne!(a.images(), b.images());
            }
        }
        assert!(matches!(
            enumerate_homs(&g32, 2, 1000),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn kerint_finite_examples() {
        let f2 = RingSpec::PrimeField(2);
        let u2 = GroupDescriptor::full(f2, 2).unwrap();
        assert!(kerint_finite(&parse("[a,b]"), &u2, DEFAULT_CAP).unwrap());
        assert!(!kerint_finite(&parse("a"), &u2, DEFAULT_CAP).unwrap());
        let u3 = GroupDescriptor::full(f2, 3).unwrap();
        assert!(!kerint_finite(&parse("a^2"), &u3, DEFAULT_CAP).unwrap());
        assert!(kerint_finite(&parse("a^4"), &u3, DEFAULT_CAP).unwrap());
    }

    #[test]
    fn witness_hom_examples() {
        let z = RingSpec::Integers;
        let chain = IdealChain::unit(z, 3).unwrap();
        let id = SquareMatrix::identity(z, 3);
        let e = |i: usize, j: usize| SquareMatrix::elementary(z, 3, i - 1, j - 1).unwrap();

        let phi = witness_hom(&IndexSequence(vec![0, 1]), &chain, 2).unwrap();
        assert_eq!(phi.images()[0].matrix(), &id.add(&e(1, 2)).unwrap());
        assert_eq!(phi.images()[1].matrix(), &id.add(&e(2, 3)).unwrap());
        assert_eq!(
            phi.eval(&parse("[a,b]")).unwrap().into_matrix(),
            id.add(&e(1, 3)).unwrap()
        );

        let phi = witness_hom(&IndexSequence(vec![0, 0]), &chain, 2).unwrap();
        assert_eq!(
            phi.images()[0].matrix(),
            &id.add(&e(1, 2)).unwrap().add(&e(2, 3)).unwrap()
        );
        let a2 = phi.eval(&parse("a^2")).unwrap().into_matrix();
        let two = z.from_i64(2);
        let expected = id
            .add(&e(1, 2).scale(&two).unwrap())
            .unwrap()
            .add(&e(2, 3).scale(&two).unwrap())
            .unwrap()
            .add(&e(1, 3))
            .unwrap();
        assert_eq!(a2, expected);
        assert_eq!(a2.get(0, 2), &RingElement::Int(1.into()));

        let phi = witness_hom(&IndexSequence(vec![0]), &chain, 2).unwrap();
        assert!(phi.images()[1].is_identity());

        assert!(matches!(
            witness_hom(&IndexSequence(vec![0, 1, 0]), &chain, 2),
            Err(Error::DegreeOutOfRange { .. })
        ));
        assert!(witness_hom(&IndexSequence::empty(), &chain, 2).is_err());
    }

    #[test]
    fn kerint_witness_examples() {
        let z3 = IdealChain::unit(RingSpec::Integers, 3).unwrap();
        assert!(!kerint_witness(&parse("[a,b]"), &z3).unwrap());
        assert!(kerint_witness(&parse("[[a,b],a]"), &z3).unwrap());
        for p in [2i64, 3] {
            let chain = IdealChain::p_power(p as u64, 3).unwrap();
            assert!(kerint_witness(&parse("a").pow(p * p), &chain).unwrap());
            assert!(!kerint_witness(&parse("a").pow(p), &chain).unwrap());
        }
    }

    #[test]
    fn witness_family_size() {
        let chain = IdealChain::unit(RingSpec::Integers, 4).unwrap();
        assert_eq!(witness_family(&chain, 2).unwrap().len(), 2 + 4 + 8);
        assert_eq!(witness_family(&chain, 3).unwrap().len(), 3 + 9 + 27);
    }

    #[test]
    fn small_cross_validation() {
        let config = CrossValidation::new(
            FiltrationKind::Zassenhaus(2),
            3,
            2,
            4,
            KerIntMode::Exhaustive,
        );
        let report = cross_validate(&config).unwrap();
        assert_eq!(report.words_tested, 161);
        assert_eq!(report.homs, 64);
        assert_eq!(report.disagreements, 0);
        assert_eq!(report.magnus_members, report.kerint_members);
        assert!(report.magnus_members > 1);

        let lcs = CrossValidation::new(
            FiltrationKind::LowerCentral,
            3,
            2,
            4,
            KerIntMode::Exhaustive,
        );
        assert!(matches!(cross_validate(&lcs), Err(Error::Infinite(_))));

        let mut witness =
            CrossValidation::new(FiltrationKind::LowerCentral, 3, 2, 4, KerIntMode::Witness);
        witness.smoke_samples = 2;
        let report = cross_validate(&witness).unwrap();
        assert!(report.passed());
        assert!(report.smoke_checks > 0);
    }

    #[test]
    fn packed_evaluation_matches_eval() {
        let words: Vec<Word> = enumerate_reduced(2, 5).collect();
        for desc in [
            GroupDescriptor::gnp(3, 2).unwrap(),
            GroupDescriptor::full(RingSpec::IntegersMod(8), 3).unwrap(),
            GroupDescriptor::full(RingSpec::Integers, 3).unwrap(),
        ] {
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            let homs: Vec<GroupHom> = (0..20)
                .map(|_| {
                    GroupHom::new(
                        desc.clone(),
                        (0..2).map(|_| desc.random_element(&mut rng, 9)).collect(),
                    )
                    .unwrap()
                })
                .collect();
            for phi in &homs {
                let expected: Vec<bool> = words
                    .iter()
                    .map(|w| phi.eval(w).unwrap().is_identity())
                    .collect();
                let single = std::slice::from_ref(phi);
                assert_eq!(killed_by_homs(&words, single).unwrap(), expected);
                assert_eq!(
                    killed_by_all(&words, &prefix_parents(&words), single),
                    expected
                );
            }
        }
    }

    #[test]
    fn order_independence() {
        use rand::seq::SliceRandom;
        let desc = GroupDescriptor::full(RingSpec::PrimeField(2), 3).unwrap();
        let words: Vec<Word> = enumerate_reduced(2, 6).collect();
        let parents = prefix_parents(&words);
        let mut homs: Vec<GroupHom> = enumerate_homs(&desc, 2, DEFAULT_CAP).unwrap().collect();
        let baseline = killed_by_all(&words, &parents, &homs);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..3 {
            homs.shuffle(&mut rng);
            assert_eq!(killed_by_all(&words, &parents, &homs), baseline);
            assert_eq!(killed_by_homs(&words, &homs).unwrap(), baseline);
        }
    }

    #[test]
    fn gl2_inclusion() {
        // U_2(F_2) is a subgroup of GL_2(F_2), so every word killed by all homs
        // into GL_2(F_2) is killed by all homs into U_2(F_2).
        type M = [[u8; 2]; 2];
        let mul = |a: M, b: M| -> M {
            let mut c = [[0; 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    c[i][j] = (a[i][0] * b[0][j] + a[i][1] * b[1][j]) % 2;
                }
            }
            c
        };
        let mut gl2 = Vec::new();
        for bits in 0..16u8 {
            let m = [
                [bits & 1, (bits >> 1) & 1],
                [(bits >> 2) & 1, (bits >> 3) & 1],
            ];
            if (m[0][0] * m[1][1] + m[0][1] * m[1][0]) % 2 == 1 {
                gl2.push(m);
            }
        }
        assert_eq!(gl2.len(), 6);
        let inverse = |m: M| {
            *gl2.iter()
                .find(|&&x| mul(m, x) == [[1, 0], [0, 1]])
                .unwrap()
        };
        let eval = |w: &Word, images: [M; 2]| {
            w.letters().iter().fold([[1, 0], [0, 1]], |acc, l| {
                let g = images[l.index as usize];
                mul(acc, if l.inverse { inverse(g) } else { g })
            })
        };
        let u2 = GroupDescriptor::full(RingSpec::PrimeField(2), 2).unwrap();
        let u2_homs: Vec<GroupHom> = enumerate_homs(&u2, 2, DEFAULT_CAP).unwrap().collect();
        let words: Vec<Word> = enumerate_reduced(2, 6).collect();
        let in_u2 = killed_by_homs(&words, &u2_homs).unwrap();
        let mut gl_members = 0;
        for (w, &killed_u2) in words.iter().zip(&in_u2) {
            let killed_gl = gl2
                .iter()
                .all(|&x| gl2.iter().all(|&y| eval(w, [x, y]) == [[1, 0], [0, 1]]));
            if killed_gl {
                gl_members += 1;
                assert!(killed_u2, "{w}");
            }
        }
        assert!(gl_members >= 1);
    }

    #[test]
    fn word_budget() {
        let mut config = CrossValidation::new(
            FiltrationKind::Zassenhaus(2),
            3,
            2,
            6,
            KerIntMode::Exhaustive,
        );
        config.cap = 1000;
        assert!(matches!(
            cross_validate(&config),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
