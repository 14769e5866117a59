//! Filtration series of explicitly enumerated finite unipotent groups, by
//! subgroup closure over an element table.

use std::collections::{BTreeSet, HashMap};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::filtration::FiltrationKind;
use crate::ring::RingSpec;
use crate::unipotent::{GroupDescriptor, UnipotentMatrix};

/// Groups up to this order get a precomputed multiplication table.
const TABLE_LIMIT: usize = 2048;

/// A set of group elements, as indices into a [`FiniteGroupTable`].
pub type ElementSet = BTreeSet<usize>;

/// The elements of a finite unipotent group with indexed multiplication.
pub struct FiniteGroupTable {
    descriptor: GroupDescriptor,
    elements: Vec<UnipotentMatrix>,
    index: HashMap<UnipotentMatrix, usize>,
    identity: usize,
    inverses: Vec<usize>,
    table: Option<Vec<u32>>,
}

impl FiniteGroupTable {
    pub fn from_descriptor(desc: &GroupDescriptor, cap: u128) -> Result<Self> {
        let elements: Vec<UnipotentMatrix> = desc.enumerate(cap)?.collect();
        let index: HashMap<UnipotentMatrix, usize> = elements
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect();
        let identity = index[&UnipotentMatrix::identity(desc.ring(), desc.size())];
        let inverses = elements.iter().map(|m| index[&m.inverse()]).collect();
        let mut group = FiniteGroupTable {
            descriptor: desc.clone(),
            elements,
            index,
            identity,
            inverses,
            table: None,
        };
        let order = group.order();
        if order <= TABLE_LIMIT {
            let mut table = Vec::with_capacity(order * order);
            for x in 0..order {
                for y in 0..order {
                    table.push(group.mul_direct(x, y) as u32);
                }
            }
            group.table = Some(table);
        }
        Ok(group)
    }

    pub fn descriptor(&self) -> &GroupDescriptor {
        &self.descriptor
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[UnipotentMatrix] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &UnipotentMatrix {
        &self.elements[i]
    }

    pub fn index_of(&self, m: &UnipotentMatrix) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inverse(&self, x: usize) -> usize {
        self.inverses[x]
    }

    fn mul_direct(&self, x: usize, y: usize) -> usize {
        let product = self.elements[x].mul(&self.elements[y]).expect("same group");
        self.index[&product]
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        match &self.table {
            Some(table) => table[x * self.order() + y] as usize,
            None => self.mul_direct(x, y),
        }
    }

    /// `[x, y] = x⁻¹ y⁻¹ x y`.
    pub fn commutator(&self, x: usize, y: usize) -> usize {
        let xy = self.mul(x, y);
        let yx = self.mul(y, x);
        self.mul(self.inverse(yx), xy)
    }

    pub fn power(&self, x: usize, mut e: u64) -> usize {
        let mut result = self.identity;
        let mut base = x;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        result
    }

    pub fn all(&self) -> ElementSet {
        (0..self.order()).collect()
    }

    pub fn trivial(&self) -> ElementSet {
        BTreeSet::from([self.identity])
    }

    /// Closure of `seeds` under products; in a finite group this is the generated subgroup.
    pub fn generated_subgroup(&self, seeds: &ElementSet) -> ElementSet {
        let gens: Vec<usize> = seeds
            .iter()
            .copied()
            .filter(|&g| g != self.identity)
            .collect();
        let mut found = self.trivial();
        let mut worklist = vec![self.identity];
        while let Some(x) = worklist.pop() {
            for &g in &gens {
                let y = self.mul(x, g);
                if found.insert(y) {
                    worklist.push(y);
                }
            }
        }
        found
    }

    pub fn is_subgroup(&self, set: &ElementSet) -> bool {
        set.contains(&self.identity)
            && set.iter().all(|&x| set.contains(&self.inverse(x)))
            && set
                .iter()
                .all(|&x| set.iter().all(|&y| set.contains(&self.mul(x, y))))
    }

    pub fn is_normal(&self, set: &ElementSet) -> bool {
        (0..self.order()).all(|g| {
            let gi = self.inverse(g);
            set.iter()
                .all(|&x| set.contains(&self.mul(self.mul(gi, x), g)))
        })
    }

    fn commutator_subgroup(&self, left: &ElementSet, right: &ElementSet) -> ElementSet {
        let mut seeds = ElementSet::new();
        for &x in left {
            for &y in right {
                seeds.insert(self.commutator(x, y));
            }
        }
        seeds
    }

    fn powers(&self, set: &ElementSet, p: u64) -> ElementSet {
        set.iter().map(|&x| self.power(x, p)).collect()
    }
}

/// A computed filtration series, first term the whole group.
#[derive(Clone, Debug)]
pub struct FiniteSeries {
    pub kind: FiltrationKind,
    pub terms: Vec<ElementSet>,
    /// False when the term cap was hit before reaching `{1}` or a stable term.
    pub stabilized: bool,
}

impl FiniteSeries {
    pub fn term_sizes(&self) -> Vec<usize> {
        self.terms.iter().map(BTreeSet::len).collect()
    }

    /// Smallest `i` (1-based) with `G_i = {1}`.
    pub fn trivial_at(&self) -> Option<usize> {
        self.terms.iter().position(|t| t.len() == 1).map(|i| i + 1)
    }
}

/// Computes `G_1 = G, G_2, …` until `{1}`, a stable term, or `max_terms` terms.
///
/// The lower central and lower p-central recursions only look at the previous
/// term, so a repeated term is final. The Zassenhaus recursion looks further
/// back, so it only stops at `{1}` or the cap.
pub fn filtration_series_finite(
    group: &FiniteGroupTable,
    kind: FiltrationKind,
    max_terms: usize,
) -> FiniteSeries {
    let everything = group.all();
    let mut terms = vec![everything.clone()];
    let mut stabilized = false;
    while terms.len() < max_terms.max(1) {
        let last = terms.last().expect("nonempty");
        if last.len() == 1 {
            stabilized = true;
            break;
        }
        let i = terms.len() + 1;
        let seeds = match kind {
            FiltrationKind::LowerCentral => group.commutator_subgroup(&everything, last),
            FiltrationKind::LowerPCentral(p) => {
                let mut seeds = group.powers(last, p);
                seeds.extend(group.commutator_subgroup(&everything, last));
                seeds
            }
            FiltrationKind::Zassenhaus(p) => {
                let base = (i as u64).div_ceil(p) as usize;
                let mut seeds = group.powers(&terms[base - 1], p);
                for j in 1..=i / 2 {
                    seeds.extend(group.commutator_subgroup(&terms[j - 1], &terms[i - j - 1]));
                }
                seeds
            }
        };
        let next = group.generated_subgroup(&seeds);
        let repeated = &next == last;
        terms.push(next);
        if repeated && !matches!(kind, FiltrationKind::Zassenhaus(_)) {
            stabilized = true;
            break;
        }
    }
    if !stabilized && terms.last().is_some_and(|t| t.len() == 1) {
        stabilized = true;
    }
    FiniteSeries {
        kind,
        terms,
        stabilized,
    }
}

/// JSON summary of a computed series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeriesReport {
    pub group: String,
    pub order: usize,
    pub kind: String,
    pub prime: Option<u64>,
    pub term_sizes: Vec<usize>,
    pub trivial_at: Option<usize>,
    /// The claimed index by which the series must be trivial.
    pub expected_trivial_by: Option<usize>,
    pub all_terms_normal: bool,
    pub passed: bool,
}

/// Builds the table, computes the series with a cap of `2n` terms, and checks
/// each term is a normal subgroup contained in its predecessor.
pub fn series_report(
    desc: &GroupDescriptor,
    kind: FiltrationKind,
    expected_trivial_by: Option<usize>,
    cap: u128,
) -> Result<SeriesReport> {
    let group = FiniteGroupTable::from_descriptor(desc, cap)?;
    let series = filtration_series_finite(&group, kind, 2 * desc.size().max(1));
    let nested = series.terms.windows(2).all(|w| w[1].is_subset(&w[0]));
    let normal = series
        .terms
        .iter()
        .all(|t| group.is_subgroup(t) && group.is_normal(t));
    let trivial_at = series.trivial_at();
    let on_time = match expected_trivial_by {
        Some(bound) => trivial_at.is_some_and(|t| t <= bound),
        None => true,
    };
    Ok(SeriesReport {
        group: desc.to_string(),
        order: group.order(),
        kind: kind.short_name().to_string(),
        prime: kind.prime(),
        term_sizes: series.term_sizes(),
        trivial_at,
        expected_trivial_by,
        all_terms_normal: normal && nested,
        passed: normal && nested && on_time,
    })
}

/// True iff every sampled left-normed `depth`-fold commutator of random
/// elements of `desc` (entries bounded by `entry_bound`) is the identity.
pub fn nilpotency_probe(
    desc: &GroupDescriptor,
    depth: usize,
    trials: usize,
    entry_bound: i64,
    seed: u64,
) -> Result<bool> {
    if trials == 0 || depth == 0 {
        return Err(Error::InvalidArgument(
            "trials and depth must be positive".into(),
        ));
    }
    if desc.ring() != RingSpec::Integers {
        return Err(Error::InvalidArgument(format!("{desc} is not over Z")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let mut acc = desc.random_element(&mut rng, entry_bound);
        for _ in 1..depth {
            let g = desc.random_element(&mut rng, entry_bound);
            let (ai, gi) = (acc.inverse(), g.inverse());
            acc = ai.mul(&gi)?.mul(&acc)?.mul(&g)?;
        }
        if !acc.is_identity() {
            return Ok(false);
        }
    }
    Ok(true)
}
