//! Coefficient rings, the reduction map between them, and ideal chains `J_t = d^t R`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The supported coefficient rings.
///
/// `PAdicApprox { p, precision }` is `Z_p` truncated at `p^precision`; its
/// arithmetic is that of `Z/p^precision`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RingSpec {
    Integers,
    IntegersMod(u64),
    PrimeField(u64),
    PAdicApprox { p: u64, precision: u32 },
}

/// Canonical ring element: an exact integer over `Z`, a residue in `[0, m)` otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingElement {
    Int(BigInt),
    Residue(u64),
}

impl RingElement {
    pub fn is_zero(&self) -> bool {
        match self {
            RingElement::Int(v) => v.is_zero(),
            RingElement::Residue(r) => *r == 0,
        }
    }

    /// The integer representative (the residue itself for modular rings).
    pub fn to_bigint(&self) -> BigInt {
        match self {
            RingElement::Int(v) => v.clone(),
            RingElement::Residue(r) => BigInt::from(*r),
        }
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingElement::Int(v) => write!(f, "{v}"),
            RingElement::Residue(r) => write!(f, "{r}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArithOp {
    Add,
    Mul,
    Neg,
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2u64;
    while i.saturating_mul(i) <= n {
        if n.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

impl RingSpec {
    pub fn integers_mod(m: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidRing(format!(
                "modulus {m} must be at least 2"
            )));
        }
        Ok(RingSpec::IntegersMod(m))
    }

    pub fn prime_field(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidRing(format!("{p} is not prime")));
        }
        Ok(RingSpec::PrimeField(p))
    }

    pub fn padic(p: u64, precision: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidRing(format!("{p} is not prime")));
        }
        if precision == 0 {
            return Err(Error::InvalidRing(
                "p-adic precision must be at least 1".into(),
            ));
        }
        match p.checked_pow(precision) {
            Some(m) if m < (1 << 62) => Ok(RingSpec::PAdicApprox { p, precision }),
            _ => Err(Error::InvalidRing(format!("{p}^{precision} is too large"))),
        }
    }

    /// `None` for the integers.
    pub fn modulus(&self) -> Option<u64> {
        match *self {
            RingSpec::Integers => None,
            RingSpec::IntegersMod(m) | RingSpec::PrimeField(m) => Some(m),
            RingSpec::PAdicApprox { p, precision } => Some(p.pow(precision)),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.modulus().is_some()
    }

    pub fn zero(&self) -> RingElement {
        match self {
            RingSpec::Integers => RingElement::Int(BigInt::zero()),
            _ => RingElement::Residue(0),
        }
    }

    pub fn one(&self) -> RingElement {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> RingElement {
        self.from_bigint(&BigInt::from(v))
    }

    pub fn from_bigint(&self, v: &BigInt) -> RingElement {
        match self.modulus() {
            None => RingElement::Int(v.clone()),
            Some(m) => {
                let r = v.mod_floor(&BigInt::from(m));
                RingElement::Residue(r.to_u64().expect("residue below modulus"))
            }
        }
    }

    pub fn contains(&self, x: &RingElement) -> bool {
        match (self.modulus(), x) {
            (None, RingElement::Int(_)) => true,
            (Some(m), RingElement::Residue(r)) => *r < m,
            _ => false,
        }
    }

    pub(crate) fn check(&self, x: &RingElement) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::RingMismatch(format!(
                "{x} is not a canonical element of {self}"
            )))
        }
    }

    pub fn add(&self, x: &RingElement, y: &RingElement) -> Result<RingElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.add_raw(x, y))
    }

    pub fn mul(&self, x: &RingElement, y: &RingElement) -> Result<RingElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul_raw(x, y))
    }

    pub fn neg(&self, x: &RingElement) -> Result<RingElement> {
        self.check(x)?;
        Ok(self.neg_raw(x))
    }

    // The *_raw operations assume both operands are canonical in this ring.
    pub(crate) fn add_raw(&self, x: &RingElement, y: &RingElement) -> RingElement {
        match (x, y) {
            (RingElement::Int(a), RingElement::Int(b)) => RingElement::Int(a + b),
            (RingElement::Residue(a), RingElement::Residue(b)) => {
                RingElement::Residue(add_mod(*a, *b, self.modulus().expect("finite ring")))
            }
            _ => unreachable!("mixed ring elements"),
        }
    }

    pub(crate) fn mul_raw(&self, x: &RingElement, y: &RingElement) -> RingElement {
        match (x, y) {
            (RingElement::Int(a), RingElement::Int(b)) => RingElement::Int(a * b),
            (RingElement::Residue(a), RingElement::Residue(b)) => {
                RingElement::Residue(mul_mod(*a, *b, self.modulus().expect("finite ring")))
            }
            _ => unreachable!("mixed ring elements"),
        }
    }

    pub(crate) fn neg_raw(&self, x: &RingElement) -> RingElement {
        match x {
            RingElement::Int(a) => RingElement::Int(-a),
            RingElement::Residue(0) => RingElement::Residue(0),
            RingElement::Residue(a) => {
                RingElement::Residue(self.modulus().expect("finite ring") - a)
            }
        }
    }

    pub(crate) fn sub_raw(&self, x: &RingElement, y: &RingElement) -> RingElement {
        self.add_raw(x, &self.neg_raw(y))
    }

    pub fn pow(&self, x: &RingElement, exp: u32) -> RingElement {
        let mut acc = self.one();
        for _ in 0..exp {
            acc = self.mul_raw(&acc, x);
        }
        acc
    }

    /// Elements in `[0, m)` order; `None` for the integers.
    pub fn elements(&self) -> Option<impl Iterator<Item = RingElement>> {
        self.modulus().map(|m| (0..m).map(RingElement::Residue))
    }
}

/// Checked binary ring arithmetic. `Neg` ignores `y`.
pub fn ring_arith(
    ring: &RingSpec,
    op: ArithOp,
    x: &RingElement,
    y: &RingElement,
) -> Result<RingElement> {
    match op {
        ArithOp::Add => ring.add(x, y),
        ArithOp::Mul => ring.mul(x, y),
        ArithOp::Neg => ring.neg(x),
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Integers => write!(f, "Z"),
            RingSpec::IntegersMod(m) => write!(f, "Z/{m}"),
            RingSpec::PrimeField(p) => write!(f, "F{p}"),
            RingSpec::PAdicApprox { p, precision } => write!(f, "Zp:{p},prec={precision}"),
        }
    }
}

/// Accepts `Z`, `Z/8`, `F5`, `Zp:3,prec=4`.
impl FromStr for RingSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidRing(format!("cannot parse `{s}`"));
        if s == "Z" {
            return Ok(RingSpec::Integers);
        }
        if let Some(m) = s.strip_prefix("Z/") {
            return RingSpec::integers_mod(m.trim().parse().map_err(|_| bad())?);
        }
        if let Some(rest) = s.strip_prefix("Zp:") {
            let (p, prec) = rest.split_once(',').ok_or_else(bad)?;
            let prec = prec.trim().strip_prefix("prec=").ok_or_else(bad)?;
            return RingSpec::padic(
                p.trim().parse().map_err(|_| bad())?,
                prec.trim().parse().map_err(|_| bad())?,
            );
        }
        if let Some(p) = s.strip_prefix('F') {
            return RingSpec::prime_field(p.trim().parse().map_err(|_| bad())?);
        }
        Err(bad())
    }
}

/// The ring homomorphism `θ: R₀ → R` of a chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Theta {
    Identity,
    /// `Z → Z/m` (also into `F_p` and truncated p-adics).
    Reduction,
}

/// `(R₀, R, θ, d, n)`: the ideals `J_t = d^t R` for `0 <= t < n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IdealChain {
    source: RingSpec,
    target: RingSpec,
    theta: Theta,
    d: RingElement,
    n: usize,
}

impl IdealChain {
    /// Only the identity (`source == target`) and the reduction `Z → finite ring`
    /// are accepted as `θ`.
    pub fn new(source: RingSpec, target: RingSpec, d: RingElement, n: usize) -> Result<Self> {
        let theta = if source == target {
            Theta::Identity
        } else if source == RingSpec::Integers && target.is_finite() {
            Theta::Reduction
        } else {
            return Err(Error::UnsupportedTheta {
                from: source.to_string(),
                to: target.to_string(),
            });
        };
        if n == 0 {
            return Err(Error::InvalidArgument(
                "chain length n must be at least 1".into(),
            ));
        }
        target.check(&d)?;
        Ok(IdealChain {
            source,
            target,
            theta,
            d,
            n,
        })
    }

    /// `R₀ = R`, `θ = id`, `d = 1`: every `J_t = R`.
    pub fn unit(ring: RingSpec, n: usize) -> Result<Self> {
        IdealChain::new(ring, ring, ring.one(), n)
    }

    /// The chain whose unipotent group is `G(n, p)`: `Z → Z/p^n`, `d = p`.
    pub fn p_power(p: u64, n: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidRing(format!("{p} is not prime")));
        }
        let m = p
            .checked_pow(n as u32)
            .filter(|m| *m < (1 << 62))
            .ok_or_else(|| Error::InvalidRing(format!("{p}^{n} is too large")))?;
        let target = RingSpec::integers_mod(m)?;
        IdealChain::new(RingSpec::Integers, target, target.from_i64(p as i64), n)
    }

    pub fn source(&self) -> RingSpec {
        self.source
    }

    pub fn target(&self) -> RingSpec {
        self.target
    }

    pub fn theta(&self) -> Theta {
        self.theta
    }

    pub fn d(&self) -> &RingElement {
        &self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn theta_reduce(&self, c: &RingElement) -> Result<RingElement> {
        self.source.check(c)?;
        Ok(match self.theta {
            Theta::Identity => c.clone(),
            Theta::Reduction => self.target.from_bigint(&c.to_bigint()),
        })
    }

    fn check_degree(&self, t: usize) -> Result<()> {
        if t >= self.n {
            return Err(Error::DegreeOutOfRange {
                degree: t,
                limit: self.n,
            });
        }
        Ok(())
    }

    /// `d^t` as an element of `R`.
    pub fn d_pow(&self, t: usize) -> RingElement {
        self.target.pow(&self.d, t as u32)
    }

    /// For a finite `R = Z/m`: the generator `g = gcd(d^t, m)` of `J_t` as an ideal of `Z/m`.
    fn ideal_generator(&self, t: usize) -> Option<u64> {
        let m = self.target.modulus()?;
        match self.d_pow(t) {
            RingElement::Residue(r) => Some(gcd(r, m)),
            RingElement::Int(_) => unreachable!(),
        }
    }

    /// `a ∈ J_t = d^t R`, decided by divisibility.
    pub fn ideal_contains(&self, t: usize, a: &RingElement) -> Result<bool> {
        self.check_degree(t)?;
        self.target.check(a)?;
        Ok(match (self.ideal_generator(t), a) {
            (Some(g), RingElement::Residue(r)) => r % g == 0,
            (None, RingElement::Int(v)) => {
                let dt = self.d_pow(t).to_bigint();
                if dt.is_zero() {
                    v.is_zero()
                } else {
                    (v % dt).is_zero()
                }
            }
            _ => unreachable!(),
        })
    }

    /// The elements of `J_t` in increasing residue order, `None` over an infinite ring.
    pub fn ideal_elements(&self, t: usize) -> Option<Vec<RingElement>> {
        let m = self.target.modulus()?;
        let g = self.ideal_generator(t)?;
        Some((0..m / g).map(|k| RingElement::Residue(k * g)).collect())
    }

    /// Cardinality of `J_t`, `None` over an infinite ring.
    pub fn ideal_size(&self, t: usize) -> Option<u64> {
        let m = self.target.modulus()?;
        self.ideal_generator(t).map(|g| m / g)
    }

    /// The modulus `M` with `Ann_R(J_t) = M·R` over a finite `R`; `M = m/gcd(d^t, m)`.
    fn annihilator_modulus(&self, t: usize) -> Option<u64> {
        let m = self.target.modulus()?;
        self.ideal_generator(t).map(|g| m / g)
    }

    /// `c ∈ Ann_R(J_t)`, i.e. `d^t · c = 0` in `R`.
    pub fn annihilator_test(&self, t: usize, c: &RingElement) -> Result<bool> {
        self.check_degree(t)?;
        self.target.check(c)?;
        Ok(match (self.annihilator_modulus(t), c) {
            (Some(big_m), RingElement::Residue(r)) => r % big_m == 0,
            (None, RingElement::Int(v)) => v.is_zero() || self.d_pow(t).is_zero(),
            _ => unreachable!(),
        })
    }

    /// The definitional form of [`annihilator_test`](Self::annihilator_test).
    pub fn annihilates_by_definition(&self, t: usize, c: &RingElement) -> Result<bool> {
        self.check_degree(t)?;
        self.target.check(c)?;
        Ok(self.target.mul_raw(&self.d_pow(t), c).is_zero())
    }

    /// Human-readable `θ⁻¹(Ann_R(J_t))` as a subset of `R₀`, e.g. `4Z` or `{0}`.
    pub fn required_label(&self, t: usize) -> String {
        let big_m = self.annihilator_modulus(t);
        match (self.source, self.theta) {
            (RingSpec::Integers, Theta::Reduction) => {
                let big_m = big_m.expect("finite target");
                if big_m == 1 {
                    "Z".into()
                } else {
                    format!("{big_m}Z")
                }
            }
            (RingSpec::Integers, _) => {
                if self.d_pow(t).is_zero() {
                    "Z".into()
                } else {
                    "{0}".into()
                }
            }
            (ring, _) => {
                let m = ring.modulus().expect("finite ring");
                match big_m.expect("finite ring") {
                    1 => ring.to_string(),
                    bm if bm == m => "{0}".into(),
                    bm => format!("{bm}·{ring}"),
                }
            }
        }
    }
}

pub(crate) fn is_one(x: &RingElement) -> bool {
    match x {
        RingElement::Int(v) => v.is_one(),
        RingElement::Residue(r) => *r == 1,
    }
}
