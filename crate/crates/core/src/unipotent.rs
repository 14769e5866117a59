//! Banded triangular matrices `T_{n,t}(J)`, the unipotent groups `U_n(R)`,
//! `U_n(J)` and `G(n, p)`, homomorphisms from the free group into them, and
//! the lifted ring homomorphism `φ̂` on truncated series.

use std::fmt;

use num_bigint::BigInt;
use rand::Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ring::{IdealChain, RingElement, RingSpec};
use crate::series::{IndexSequence, TruncatedSeries};
use crate::word::{Letter, Word};

/// Dense `n × n` matrix over one of the supported rings. Indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SquareMatrix {
    ring: RingSpec,
    size: usize,
    entries: Vec<RingElement>,
}

impl SquareMatrix {
    pub fn zero(ring: RingSpec, size: usize) -> Self {
        SquareMatrix {
            ring,
            size,
            entries: vec![ring.zero(); size * size],
        }
    }

    pub fn identity(ring: RingSpec, size: usize) -> Self {
        let mut m = Self::zero(ring, size);
        for i in 0..size {
            m.entries[i * size + i] = ring.one();
        }
        m
    }

    /// `E_{ij}`: 1 at `(i, j)`, 0 elsewhere.
    pub fn elementary(ring: RingSpec, size: usize, i: usize, j: usize) -> Result<Self> {
        if i >= size || j >= size {
            return Err(Error::InvalidArgument(format!(
                "({i}, {j}) outside a {size}x{size} matrix"
            )));
        }
        let mut m = Self::zero(ring, size);
        m.entries[i * size + j] = ring.one();
        Ok(m)
    }

    pub fn from_rows(ring: RingSpec, rows: Vec<Vec<RingElement>>) -> Result<Self> {
        let size = rows.len();
        let mut entries = Vec::with_capacity(size * size);
        for row in rows {
            if row.len() != size {
                return Err(Error::DimensionMismatch {
                    left: size,
                    right: row.len(),
                });
            }
            for x in row {
                ring.check(&x)?;
                entries.push(x);
            }
        }
        Ok(SquareMatrix {
            ring,
            size,
            entries,
        })
    }

    /// Convenience constructor reducing integer entries into `ring`.
    pub fn from_i64_rows(ring: RingSpec, rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            ring,
            rows.iter()
                .map(|r| r.iter().map(|&v| ring.from_i64(v)).collect())
                .collect(),
        )
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> &RingElement {
        &self.entries[i * self.size + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: RingElement) -> Result<()> {
        self.ring.check(&value)?;
        self.entries[i * self.size + j] = value;
        Ok(())
    }

    pub fn rows(&self) -> impl Iterator<Item = &[RingElement]> {
        self.entries.chunks(self.size.max(1))
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.size != other.size {
            return Err(Error::DimensionMismatch {
                left: self.size,
                right: other.size,
            });
        }
        if self.ring != other.ring {
            return Err(Error::RingMismatch(format!(
                "{} vs {}",
                self.ring, other.ring
            )));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let n = self.size;
        let ring = self.ring;
        let mut out = Self::zero(ring, n);
        if let Some(m) = ring.modulus() {
            let m = m as u128;
            let a: Vec<u128> = self.entries.iter().map(residue).collect();
            let b: Vec<u128> = other.entries.iter().map(residue).collect();
            for i in 0..n {
                for j in 0..n {
                    let mut acc = 0u128;
                    for k in 0..n {
                        acc = (acc + a[i * n + k] * b[k * n + j]) % m;
                    }
                    out.entries[i * n + j] = RingElement::Residue(acc as u64);
                }
            }
        } else {
            for i in 0..n {
                for k in 0..n {
                    let x = &self.entries[i * n + k];
                    if x.is_zero() {
                        continue;
                    }
                    for j in 0..n {
                        let y = &other.entries[k * n + j];
                        if !y.is_zero() {
                            let prod = ring.mul_raw(x, y);
                            out.entries[i * n + j] = ring.add_raw(&out.entries[i * n + j], &prod);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(x, y)| self.ring.add_raw(x, y))
            .collect();
        Ok(SquareMatrix {
            ring: self.ring,
            size: self.size,
            entries,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(x, y)| self.ring.sub_raw(x, y))
            .collect();
        Ok(SquareMatrix {
            ring: self.ring,
            size: self.size,
            entries,
        })
    }

    pub fn scale(&self, c: &RingElement) -> Result<Self> {
        self.ring.check(c)?;
        let entries = self
            .entries
            .iter()
            .map(|x| self.ring.mul_raw(c, x))
            .collect();
        Ok(SquareMatrix {
            ring: self.ring,
            size: self.size,
            entries,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(RingElement::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        let n = self.size;
        self.entries.iter().enumerate().all(|(k, x)| {
            if k / n == k % n {
                crate::ring::is_one(x)
            } else {
                x.is_zero()
            }
        })
    }

    pub fn is_upper_unitriangular(&self) -> bool {
        let n = self.size;
        (0..n).all(|i| {
            (0..=i).all(|j| {
                let x = self.get(i, j);
                if i == j {
                    crate::ring::is_one(x)
                } else {
                    x.is_zero()
                }
            })
        })
    }

    /// `{"ring": "Z/8", "size": 2, "rows": [["1", "2"], ["0", "1"]]}`.
    pub fn to_json(&self) -> Value {
        let rows: Vec<Vec<String>> = self
            .rows()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect();
        json!({ "ring": self.ring.to_string(), "size": self.size, "rows": rows })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let ring: RingSpec = value
            .get("ring")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Json("missing `ring`".into()))?
            .parse()?;
        let rows = value
            .get("rows")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Json("missing `rows`".into()))?;
        let mut parsed = Vec::with_capacity(rows.len());
        for row in rows {
            let row = row
                .as_array()
                .ok_or_else(|| Error::Json("row is not a list".into()))?;
            let mut out = Vec::with_capacity(row.len());
            for x in row {
                let text = x
                    .as_str()
                    .ok_or_else(|| Error::Json("entry is not a string".into()))?;
                let v: BigInt = text
                    .parse()
                    .map_err(|_| Error::Json(format!("bad entry `{text}`")))?;
                let element = ring.from_bigint(&v);
                if element.to_bigint() != v {
                    return Err(Error::Json(format!(
                        "entry `{text}` is not canonical in {ring}"
                    )));
                }
                out.push(element);
            }
            parsed.push(out);
        }
        Self::from_rows(ring, parsed)
    }
}

fn residue(x: &RingElement) -> u128 {
    match x {
        RingElement::Residue(r) => *r as u128,
        RingElement::Int(_) => unreachable!("integer entry in a finite-ring matrix"),
    }
}

impl fmt::Display for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .map(|r| {
                r.iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

pub fn mat_mul(a: &SquareMatrix, b: &SquareMatrix) -> Result<SquareMatrix> {
    a.mul(b)
}

/// Upper-triangular matrix with ones on the diagonal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnipotentMatrix(SquareMatrix);

impl UnipotentMatrix {
    pub fn new(m: SquareMatrix) -> Result<Self> {
        if !m.is_upper_unitriangular() {
            return Err(Error::NotUnipotent);
        }
        Ok(UnipotentMatrix(m))
    }

    pub fn identity(ring: RingSpec, size: usize) -> Self {
        UnipotentMatrix(SquareMatrix::identity(ring, size))
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> SquareMatrix {
        self.0
    }

    /// `U − I`, strictly upper triangular.
    pub fn nilpotent_part(&self) -> SquareMatrix {
        let mut m = self.0.clone();
        for i in 0..m.size {
            m.entries[i * m.size + i] = m.ring.zero();
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        Ok(UnipotentMatrix(self.0.mul(&other.0)?))
    }

    /// `Σ_{k<n} (−N)^k` with `N = U − I`.
    pub fn inverse(&self) -> Self {
        let n = self.0.size;
        let ring = self.0.ring;
        let minus_n = self
            .nilpotent_part()
            .scale(&ring.from_i64(-1))
            .expect("same ring");
        let mut power = SquareMatrix::identity(ring, n);
        let mut acc = power.clone();
        for _ in 1..n {
            power = power.mul_unchecked(&minus_n);
            acc = acc.add(&power).expect("same shape");
        }
        UnipotentMatrix(acc)
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_identity()
    }
}

pub fn unipotent_inverse(u: &UnipotentMatrix) -> UnipotentMatrix {
    u.inverse()
}

/// `M ∈ T_{n,t}(J)`: zero on and below the `(t−1)`-th superdiagonal and
/// `a_ij ∈ J_{j−i}` elsewhere.
pub fn in_band(m: &SquareMatrix, t: usize, chain: &IdealChain) -> Result<bool> {
    if m.size() != chain.n() {
        return Err(Error::DimensionMismatch {
            left: m.size(),
            right: chain.n(),
        });
    }
    if m.ring() != chain.target() {
        return Err(Error::RingMismatch(format!(
            "matrix over {}, chain over {}",
            m.ring(),
            chain.target()
        )));
    }
    let n = m.size();
    for i in 0..n {
        for j in 0..n {
            let x = m.get(i, j);
            if (j as isize - i as isize) < t as isize {
                if !x.is_zero() {
                    return Ok(false);
                }
            } else if !chain.ideal_contains(j - i, x)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Which unipotent group a homomorphism targets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupDescriptor {
    /// `U_n(R)`.
    FullUnipotent { ring: RingSpec, n: usize },
    /// `U_n(J) = I + T_{n,1}(J)`; `G(n, p)` for the chain `Z → Z/p^n`, `d = p`.
    IdealUnipotent(IdealChain),
}

impl GroupDescriptor {
    pub fn full(ring: RingSpec, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "matrix size must be at least 1".into(),
            ));
        }
        Ok(GroupDescriptor::FullUnipotent { ring, n })
    }

    /// `G(n, p)`: `a_ij ∈ p^{j−i} Z/p^n Z`.
    pub fn gnp(n: usize, p: u64) -> Result<Self> {
        Ok(GroupDescriptor::IdealUnipotent(IdealChain::p_power(p, n)?))
    }

    pub fn size(&self) -> usize {
        match self {
            GroupDescriptor::FullUnipotent { n, .. } => *n,
            GroupDescriptor::IdealUnipotent(chain) => chain.n(),
        }
    }

    /// Ring of the matrix entries.
    pub fn ring(&self) -> RingSpec {
        match self {
            GroupDescriptor::FullUnipotent { ring, .. } => *ring,
            GroupDescriptor::IdealUnipotent(chain) => chain.target(),
        }
    }

    /// The chain `J`; for `U_n(R)` this is `J_t = R` with `θ = id`.
    pub fn chain(&self) -> IdealChain {
        match self {
            GroupDescriptor::FullUnipotent { ring, n } => {
                IdealChain::unit(*ring, *n).expect("n >= 1")
            }
            GroupDescriptor::IdealUnipotent(chain) => chain.clone(),
        }
    }

    pub fn contains(&self, m: &SquareMatrix) -> bool {
        m.size() == self.size() && m.ring() == self.ring() && m.is_upper_unitriangular() && {
            let id = SquareMatrix::identity(self.ring(), self.size());
            in_band(&m.sub(&id).expect("same shape"), 1, &self.chain()).unwrap_or(false)
        }
    }

    /// `|U_n(J)| = Π_{i<j} |J_{j−i}|`.
    pub fn order(&self) -> Result<u128> {
        let chain = self.chain();
        let n = self.size();
        let mut order = 1u128;
        for s in 1..n {
            let size = chain
                .ideal_size(s)
                .ok_or_else(|| Error::Infinite(self.to_string()))? as u128;
            for _ in 0..n - s {
                order = order.checked_mul(size).ok_or_else(|| {
                    Error::budget(format!("order of {self}"), u128::MAX, u128::MAX)
                })?;
            }
        }
        Ok(order)
    }

    /// Every element once, entries varied diagonal by diagonal (last position fastest).
    pub fn enumerate(&self, cap: u128) -> Result<GroupElements> {
        let order = self.order()?;
        if order > cap {
            return Err(Error::budget(format!("enumerating {self}"), order, cap));
        }
        let chain = self.chain();
        let n = self.size();
        let mut positions = Vec::new();
        let mut choices = Vec::new();
        for s in 1..n {
            let ideal = chain.ideal_elements(s).expect("finite ring");
            for i in 0..n - s {
                positions.push((i, i + s));
                choices.push(ideal.clone());
            }
        }
        Ok(GroupElements {
            ring: self.ring(),
            size: n,
            positions,
            choices,
            counter: Vec::new(),
            started: false,
            done: false,
        })
    }

    /// Random element; over an infinite ring entries of `J_s = d^s R` are `d^s · r`, `|r| <= bound`.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R, bound: i64) -> UnipotentMatrix {
        let chain = self.chain();
        let ring = self.ring();
        let n = self.size();
        let mut m = SquareMatrix::identity(ring, n);
        for s in 1..n {
            for i in 0..n - s {
                let value = match chain.ideal_elements(s) {
                    Some(ideal) => ideal[rng.random_range(0..ideal.len())].clone(),
                    None => {
                        let r = ring.from_i64(rng.random_range(-bound..=bound));
                        ring.mul_raw(&chain.d_pow(s), &r)
                    }
                };
                m.entries[i * n + i + s] = value;
            }
        }
        UnipotentMatrix(m)
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDescriptor::FullUnipotent { ring, n } => write!(f, "U{n}({ring})"),
            GroupDescriptor::IdealUnipotent(chain) => {
                if chain.source() == chain.target() && crate::ring::is_one(chain.d()) {
                    return write!(f, "U{}({})", chain.n(), chain.target());
                }
                if let (RingSpec::IntegersMod(m), RingElement::Residue(d)) =
                    (chain.target(), chain.d())
                {
                    if d.checked_pow(chain.n() as u32) == Some(m) && crate::ring::is_prime(*d) {
                        return write!(f, "G({},{})", chain.n(), d);
                    }
                }
                write!(
                    f,
                    "U{}(J: {} -> {}, d={})",
                    chain.n(),
                    chain.source(),
                    chain.target(),
                    chain.d()
                )
            }
        }
    }
}

/// Order of a finite unipotent group.
pub fn group_order(desc: &GroupDescriptor) -> Result<u128> {
    desc.order()
}

pub fn enumerate_group(desc: &GroupDescriptor, cap: u128) -> Result<GroupElements> {
    desc.enumerate(cap)
}

/// Iterator over the elements of a finite unipotent group.
pub struct GroupElements {
    ring: RingSpec,
    size: usize,
    positions: Vec<(usize, usize)>,
    choices: Vec<Vec<RingElement>>,
    counter: Vec<usize>,
    started: bool,
    done: bool,
}

impl Iterator for GroupElements {
    type Item = UnipotentMatrix;

    fn next(&mut self) -> Option<UnipotentMatrix> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.counter = vec![0; self.positions.len()];
        } else {
            // Mixed-radix increment; the last position varies fastest.
            let mut k = self.positions.len();
            loop {
                if k == 0 {
                    self.done = true;
                    return None;
                }
                k -= 1;
                self.counter[k] += 1;
                if self.counter[k] < self.choices[k].len() {
                    break;
                }
                self.counter[k] = 0;
            }
        }
        let mut m = SquareMatrix::identity(self.ring, self.size);
        for (k, &(i, j)) in self.positions.iter().enumerate() {
            m.entries[i * self.size + j] = self.choices[k][self.counter[k]].clone();
        }
        Some(UnipotentMatrix(m))
    }
}

/// A homomorphism from the free group of rank `images.len()` into a unipotent group,
/// given by the images of the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    descriptor: GroupDescriptor,
    images: Vec<UnipotentMatrix>,
    inverses: Vec<UnipotentMatrix>,
}

impl GroupHom {
    pub fn new(descriptor: GroupDescriptor, images: Vec<UnipotentMatrix>) -> Result<Self> {
        for image in &images {
            if !descriptor.contains(image.matrix()) {
                return Err(Error::NotInGroup(descriptor.to_string()));
            }
        }
        let inverses = images.iter().map(UnipotentMatrix::inverse).collect();
        Ok(GroupHom {
            descriptor,
            images,
            inverses,
        })
    }

    pub fn descriptor(&self) -> &GroupDescriptor {
        &self.descriptor
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[UnipotentMatrix] {
        &self.images
    }

    pub fn letter_image(&self, letter: Letter) -> &UnipotentMatrix {
        if letter.inverse {
            &self.inverses[letter.index as usize]
        } else {
            &self.images[letter.index as usize]
        }
    }

    pub fn eval(&self, w: &Word) -> Result<UnipotentMatrix> {
        if w.rank() != self.rank() {
            return Err(Error::AlphabetMismatch {
                left: w.rank(),
                right: self.rank(),
            });
        }
        let mut acc = UnipotentMatrix::identity(self.descriptor.ring(), self.descriptor.size());
        for &letter in w.letters() {
            acc = UnipotentMatrix(acc.0.mul_unchecked(&self.letter_image(letter).0));
        }
        Ok(acc)
    }

    /// `M_I = Π_k (φ(a_k) − I)`, with `M_∅ = I`.
    pub fn monomial_matrix(&self, seq: &IndexSequence) -> Result<SquareMatrix> {
        let n = self.descriptor.size();
        let mut acc = SquareMatrix::identity(self.descriptor.ring(), n);
        for &i in seq.indices() {
            let image = self
                .images
                .get(i as usize)
                .ok_or(Error::GeneratorOutOfRange {
                    index: i as usize,
                    rank: self.rank(),
                })?;
            acc = acc.mul_unchecked(&image.nilpotent_part());
        }
        Ok(acc)
    }
}

pub fn hom_eval(phi: &GroupHom, w: &Word) -> Result<UnipotentMatrix> {
    phi.eval(w)
}

/// `φ̂(Σ c_I X_I) = Σ_{|I|<n} θ(c_I) M_I`.
pub fn phi_hat(f: &TruncatedSeries, phi: &GroupHom) -> Result<SquareMatrix> {
    let chain = phi.descriptor().chain();
    let n = chain.n();
    if f.ring() != chain.source() {
        return Err(Error::RingMismatch(format!(
            "series over {}, hom expects {}",
            f.ring(),
            chain.source()
        )));
    }
    if f.bound() < n {
        return Err(Error::BoundTooSmall {
            bound: f.bound(),
            required: n,
        });
    }
    if f.rank() != phi.rank() {
        return Err(Error::AlphabetMismatch {
            left: f.rank(),
            right: phi.rank(),
        });
    }
    let mut acc = SquareMatrix::zero(chain.target(), n);
    for (seq, c) in f.terms() {
        if seq.len() >= n {
            break;
        }
        let term = phi.monomial_matrix(seq)?.scale(&chain.theta_reduce(c)?)?;
        acc = acc.add(&term)?;
    }
    Ok(acc)
}
