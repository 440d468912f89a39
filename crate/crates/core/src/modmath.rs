//! Exact arithmetic in `Z/p^M Z` and in its quadratic extensions.
//!
//! Every residue carries its [`Modulus`]; mixing residues of different
//! moduli is rejected. Quantities that are later divided by `p^t` are
//! computed at an elevated exponent and brought down with
//! [`Residue::exact_div_p`], which refuses to truncate.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use thiserror::Error;

/// Largest exponent accepted by [`ResidueRing::new`].
pub const MAX_EXPONENT: u32 = 8;

/// Moduli must stay below 2^63 so that products fit in a `u128`.
const MODULUS_LIMIT: u64 = 1 << 63;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} is below 5")]
    PrimeTooSmall(u64),
    #[error("exponent {0} outside 1..={MAX_EXPONENT}")]
    ExponentOutOfRange(u32),
    #[error("modulus {p}^{exp} does not fit in 63 bits")]
    ModulusTooLarge { p: u64, exp: u32 },
    #[error("{value} is not a unit modulo {modulus}")]
    NotUnit { value: u64, modulus: u64 },
    #[error("{value} is not divisible by {p}^{t} (modulus {modulus})")]
    NotDivisible { value: u64, p: u64, t: u32, modulus: u64 },
    #[error("cannot divide by p^{t} at precision p^{have}")]
    PrecisionTooLow { have: u32, t: u32 },
    #[error("cannot raise precision from p^{from} to p^{to}")]
    PrecisionRaise { from: u32, to: u32 },
    #[error("ring mismatch: {left} vs {right}")]
    RingMismatch { left: Modulus, right: Modulus },
    #[error("binomial C({n}, {k}) requested with k > n")]
    BinomialRange { n: u64, k: u64 },
    #[error("n = {n} is outside the supported range n < {limit}")]
    IndexRange { n: u64, limit: u64 },
    #[error("nonzero omega component in {0}")]
    OmegaComponent(&'static str),
}

pub type Result<T> = std::result::Result<T, ArithError>;

/// Deterministic trial division; adequate for the `p < 2^32` this crate uses.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Primes in the inclusive range `[lo, hi]`.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| is_prime(n)).collect()
}

/// The modulus `p^exp` for a prime `p >= 5`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Modulus {
    p: u64,
    exp: u32,
    value: u64,
}

impl Modulus {
    /// Any exponent is accepted as long as `p^exp < 2^63`; the tighter
    /// user-facing bound lives in [`ResidueRing::new`].
    pub fn new(p: u64, exp: u32) -> Result<Self> {
        if p < 5 {
            return Err(if is_prime(p) {
                ArithError::PrimeTooSmall(p)
            } else {
                ArithError::NotPrime(p)
            });
        }
        if !is_prime(p) {
            return Err(ArithError::NotPrime(p));
        }
        if exp == 0 {
            return Err(ArithError::ExponentOutOfRange(exp));
        }
        let mut value = 1u64;
        for _ in 0..exp {
            value = value
                .checked_mul(p)
                .filter(|&v| v < MODULUS_LIMIT)
                .ok_or(ArithError::ModulusTooLarge { p, exp })?;
        }
        Ok(Modulus { p, exp, value })
    }

    pub fn p(self) -> u64 {
        self.p
    }

    pub fn exp(self) -> u32 {
        self.exp
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn with_exponent(self, exp: u32) -> Result<Self> {
        Modulus::new(self.p, exp)
    }

    /// `p^(exp + t)`.
    pub fn elevated(self, t: u32) -> Result<Self> {
        Modulus::new(self.p, self.exp + t)
    }

    pub fn residue(self, v: i64) -> Residue {
        let m = self.value as i128;
        let r = (v as i128).rem_euclid(m);
        Residue { value: r as u64, modulus: self }
    }

    pub fn residue_u64(self, v: u64) -> Residue {
        Residue { value: v % self.value, modulus: self }
    }

    pub fn residue_big(self, v: &BigInt) -> Residue {
        let r = v.mod_floor(&BigInt::from(self.value));
        Residue { value: r.to_u64().expect("reduced value fits"), modulus: self }
    }

    pub fn zero(self) -> Residue {
        Residue { value: 0, modulus: self }
    }

    pub fn one(self) -> Residue {
        self.residue_u64(1)
    }

    /// `p^t` reduced modulo `p^exp` (zero once `t >= exp`).
    pub fn p_power(self, t: u32) -> Residue {
        if t >= self.exp {
            return self.zero();
        }
        self.residue_u64(self.p.pow(t))
    }

    /// `a / b` for integers with `p ∤ b`.
    pub fn ratio(self, a: i64, b: i64) -> Result<Residue> {
        Ok(self.residue(a) * self.residue(b).inv()?)
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.p, self.exp)
    }
}

/// An element of `Z/p^M Z`, stored as its canonical representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    modulus: Modulus,
}

impl Residue {
    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> Modulus {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn is_unit(self) -> bool {
        !self.value.is_multiple_of(self.modulus.p)
    }

    /// Representative in `(-m/2, m/2]`.
    pub fn signed_value(self) -> i128 {
        let m = self.modulus.value as i128;
        let v = self.value as i128;
        if 2 * v > m {
            v - m
        } else {
            v
        }
    }

    fn check(self, other: Residue) -> Result<()> {
        if self.modulus == other.modulus {
            Ok(())
        } else {
            Err(ArithError::RingMismatch { left: self.modulus, right: other.modulus })
        }
    }

    pub fn try_add(self, other: Residue) -> Result<Residue> {
        self.check(other)?;
        let m = self.modulus.value;
        let s = self.value as u128 + other.value as u128;
        Ok(Residue { value: (s % m as u128) as u64, modulus: self.modulus })
    }

    pub fn try_sub(self, other: Residue) -> Result<Residue> {
        self.check(other)?;
        let m = self.modulus.value;
        let v = if self.value >= other.value {
            self.value - other.value
        } else {
            m - (other.value - self.value)
        };
        Ok(Residue { value: v, modulus: self.modulus })
    }

    pub fn try_mul(self, other: Residue) -> Result<Residue> {
        self.check(other)?;
        let m = self.modulus.value as u128;
        let v = (self.value as u128 * other.value as u128) % m;
        Ok(Residue { value: v as u64, modulus: self.modulus })
    }

    pub fn scale(self, k: i64) -> Residue {
        self * self.modulus.residue(k)
    }

    /// Multiplicative inverse via the extended Euclidean algorithm.
    pub fn inv(self) -> Result<Residue> {
        if !self.is_unit() {
            return Err(ArithError::NotUnit { value: self.value, modulus: self.modulus.value });
        }
        let m = self.modulus.value as i128;
        let (mut r0, mut r1) = (m, self.value as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(Residue { value: t0.rem_euclid(m) as u64, modulus: self.modulus })
    }

    /// `self^e`; `0^0 = 1`.
    pub fn pow(self, mut e: u64) -> Residue {
        let mut base = self;
        let mut acc = self.modulus.one();
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base *= base;
            e >>= 1;
        }
        acc
    }

    /// p-adic valuation of the representative, capped at the exponent.
    pub fn valuation(self) -> u32 {
        if self.value == 0 {
            return self.modulus.exp;
        }
        let mut v = self.value;
        let mut k = 0;
        while v.is_multiple_of(self.modulus.p) {
            v /= self.modulus.p;
            k += 1;
        }
        k
    }

    /// Reduce to the lower precision `p^exp`.
    pub fn reduce(self, exp: u32) -> Result<Residue> {
        if exp > self.modulus.exp {
            return Err(ArithError::PrecisionRaise { from: self.modulus.exp, to: exp });
        }
        let modulus = self.modulus.with_exponent(exp)?;
        Ok(modulus.residue_u64(self.value))
    }

    /// Canonical representative viewed at a higher precision. Only sound
    /// when the downstream computation is insensitive to the lift.
    pub fn lift(self, exp: u32) -> Result<Residue> {
        if exp < self.modulus.exp {
            return Err(ArithError::PrecisionRaise { from: self.modulus.exp, to: exp });
        }
        let modulus = self.modulus.with_exponent(exp)?;
        Ok(Residue { value: self.value, modulus })
    }

    pub fn mul_p_pow(self, t: u32) -> Residue {
        self * self.modulus.p_power(t)
    }

    /// Divide by `p^t`, dropping the precision from `p^(M+t)` to `p^M`.
    /// Fails if the value is not divisible by `p^t`.
    pub fn exact_div_p(self, t: u32) -> Result<Residue> {
        if t == 0 {
            return Ok(self);
        }
        let m = self.modulus;
        if m.exp <= t {
            return Err(ArithError::PrecisionTooLow { have: m.exp, t });
        }
        let pt = m.p.pow(t);
        if !self.value.is_multiple_of(pt) {
            return Err(ArithError::NotDivisible { value: self.value, p: m.p, t, modulus: m.value });
        }
        let target = m.with_exponent(m.exp - t)?;
        Ok(target.residue_u64(self.value / pt))
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

// The operator forms panic on a ring mismatch; use the `try_*` methods
// where the operands come from untrusted configuration.
impl Add for Residue {
    type Output = Residue;
    fn add(self, rhs: Residue) -> Residue {
        self.try_add(rhs).expect("residue ring mismatch")
    }
}

impl Sub for Residue {
    type Output = Residue;
    fn sub(self, rhs: Residue) -> Residue {
        self.try_sub(rhs).expect("residue ring mismatch")
    }
}

impl Mul for Residue {
    type Output = Residue;
    fn mul(self, rhs: Residue) -> Residue {
        self.try_mul(rhs).expect("residue ring mismatch")
    }
}

impl Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        self.modulus.zero() - self
    }
}

impl AddAssign for Residue {
    fn add_assign(&mut self, rhs: Residue) {
        *self = *self + rhs;
    }
}

impl SubAssign for Residue {
    fn sub_assign(&mut self, rhs: Residue) {
        *self = *self - rhs;
    }
}

impl MulAssign for Residue {
    fn mul_assign(&mut self, rhs: Residue) {
        *self = *self * rhs;
    }
}

/// Legendre symbol `(a/p)` by Euler's criterion.
pub fn legendre_symbol(a: i64, p: u64) -> i8 {
    let pm = p as i128;
    let r = (a as i128).rem_euclid(pm) as u64;
    if r == 0 {
        return 0;
    }
    let mut base = r as u128;
    let mut e = (p - 1) / 2;
    let mut acc = 1u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u128;
        }
        base = base * base % p as u128;
        e >>= 1;
    }
    if acc == 1 {
        1
    } else {
        -1
    }
}

/// A p-adic number `p^val * unit`, known modulo `p^(exp + val)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValuedResidue {
    unit: Residue,
    val: u32,
    zero: bool,
}

impl ValuedResidue {
    pub fn new(unit: Residue, val: u32) -> Result<Self> {
        if !unit.is_unit() {
            return Err(ArithError::NotUnit { value: unit.value, modulus: unit.modulus.value });
        }
        Ok(ValuedResidue { unit, val, zero: false })
    }

    pub fn zero(modulus: Modulus) -> Self {
        ValuedResidue { unit: modulus.zero(), val: modulus.exp, zero: true }
    }

    pub fn unit(self) -> Residue {
        self.unit
    }

    pub fn val(self) -> u32 {
        self.val
    }

    pub fn is_zero(self) -> bool {
        self.zero
    }

    /// `p^val * unit` reduced into the unit's ring.
    pub fn to_residue(self) -> Residue {
        if self.zero {
            return self.unit.modulus.zero();
        }
        self.unit.mul_p_pow(self.val)
    }
}

impl Mul for ValuedResidue {
    type Output = ValuedResidue;
    fn mul(self, rhs: ValuedResidue) -> ValuedResidue {
        if self.zero || rhs.zero {
            return ValuedResidue::zero(self.unit.modulus);
        }
        ValuedResidue { unit: self.unit * rhs.unit, val: self.val + rhs.val, zero: false }
    }
}

/// `Z/p^M Z` with factorial tables for `0 <= n <= p - 1`.
#[derive(Debug, Clone)]
pub struct ResidueRing {
    modulus: Modulus,
    fact: Vec<Residue>,
    inv_fact: Vec<Residue>,
}

impl ResidueRing {
    /// Ring for prime `p >= 5` and `1 <= exp <= MAX_EXPONENT`.
    pub fn new(p: u64, exp: u32) -> Result<Self> {
        if !(1..=MAX_EXPONENT).contains(&exp) {
            return Err(ArithError::ExponentOutOfRange(exp));
        }
        Ok(Self::from_modulus(Modulus::new(p, exp)?))
    }

    /// Ring for an already validated modulus, including elevated ones
    /// beyond [`MAX_EXPONENT`].
    pub fn from_modulus(modulus: Modulus) -> Self {
        let p = modulus.p as usize;
        let mut fact = Vec::with_capacity(p);
        fact.push(modulus.one());
        for n in 1..p {
            let prev = fact[n - 1];
            fact.push(prev.scale(n as i64));
        }
        let mut inv_fact = vec![modulus.zero(); p];
        inv_fact[p - 1] = fact[p - 1].inv().expect("(p-1)! is a unit");
        for n in (1..p).rev() {
            inv_fact[n - 1] = inv_fact[n].scale(n as i64);
        }
        ResidueRing { modulus, fact, inv_fact }
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn p(&self) -> u64 {
        self.modulus.p
    }

    pub fn exp(&self) -> u32 {
        self.modulus.exp
    }

    pub fn elem(&self, v: i64) -> Residue {
        self.modulus.residue(v)
    }

    pub fn fact(&self, n: usize) -> Residue {
        self.fact[n]
    }

    pub fn inv_fact(&self, n: usize) -> Residue {
        self.inv_fact[n]
    }

    /// `1/n` for `1 <= n < p` by table lookup.
    pub fn inv_small(&self, n: usize) -> Residue {
        assert!(n >= 1 && n < self.fact.len(), "inv_small({n}) outside 1..p");
        self.fact[n - 1] * self.inv_fact[n]
    }

    /// Unit part and valuation of `n!` for `n < p^2`. Multiples of `p` are
    /// stripped and the quotient factorial handled recursively.
    pub fn factorial_valued(&self, n: u64) -> Result<ValuedResidue> {
        let p = self.p();
        let limit = p * p;
        if n >= limit {
            return Err(ArithError::IndexRange { n, limit });
        }
        if n < p {
            return ValuedResidue::new(self.fact[n as usize], 0);
        }
        let mut unit = self.modulus.one();
        for k in 1..=n {
            if k % p != 0 {
                unit *= self.modulus.residue_u64(k);
            }
        }
        let q = n / p;
        let inner = self.factorial_valued(q)?;
        ValuedResidue::new(unit * inner.unit, q as u32 + inner.val)
    }

    /// `C(n, k)` as `p^val * unit` for `n < p^2`.
    pub fn binom_mod(&self, n: u64, k: u64) -> Result<ValuedResidue> {
        if k > n {
            return Err(ArithError::BinomialRange { n, k });
        }
        let p = self.p();
        if n < p {
            let (n, k) = (n as usize, k as usize);
            return ValuedResidue::new(self.fact[n] * self.inv_fact[k] * self.inv_fact[n - k], 0);
        }
        let top = self.factorial_valued(n)?;
        let a = self.factorial_valued(k)?;
        let b = self.factorial_valued(n - k)?;
        let unit = top.unit * (a.unit * b.unit).inv()?;
        ValuedResidue::new(unit, top.val - a.val - b.val)
    }
}

/// Precomputed unit parts and valuations of `n!` for `n <= limit`, giving
/// O(1) binomials in the inner loops of the sweeps.
#[derive(Debug, Clone)]
pub struct BinomialTable {
    modulus: Modulus,
    unit_fact: Vec<Residue>,
    inv_unit_fact: Vec<Residue>,
    val_fact: Vec<u32>,
}

impl BinomialTable {
    pub fn new(modulus: Modulus, limit: usize) -> Self {
        let p = modulus.p;
        let mut unit_fact = Vec::with_capacity(limit + 1);
        let mut val_fact = Vec::with_capacity(limit + 1);
        unit_fact.push(modulus.one());
        val_fact.push(0);
        for n in 1..=limit as u64 {
            let mut m = n;
            let mut v = 0;
            while m % p == 0 {
                m /= p;
                v += 1;
            }
            let prev = unit_fact[unit_fact.len() - 1];
            unit_fact.push(prev * modulus.residue_u64(m));
            val_fact.push(val_fact[val_fact.len() - 1] + v);
        }
        let inv_unit_fact = unit_fact.iter().map(|u| u.inv().expect("unit")).collect();
        BinomialTable { modulus, unit_fact, inv_unit_fact, val_fact }
    }

    pub fn limit(&self) -> usize {
        self.unit_fact.len() - 1
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    /// `C(n, k)`, zero outside `0 <= k <= n`.
    pub fn binom(&self, n: i64, k: i64) -> ValuedResidue {
        if k < 0 || n < 0 || k > n {
            return ValuedResidue::zero(self.modulus);
        }
        let (n, k) = (n as usize, k as usize);
        assert!(n <= self.limit(), "binomial table limit {} exceeded by {n}", self.limit());
        ValuedResidue {
            unit: self.unit_fact[n] * self.inv_unit_fact[k] * self.inv_unit_fact[n - k],
            val: self.val_fact[n] - self.val_fact[k] - self.val_fact[n - k],
            zero: false,
        }
    }

    pub fn binom_residue(&self, n: i64, k: i64) -> Residue {
        self.binom(n, k).to_residue()
    }
}

/// `a0 + a1·ω` with `ω^2 = x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadExtElem {
    pub a0: Residue,
    pub a1: Residue,
    pub x: Residue,
}

impl QuadExtElem {
    pub fn new(a0: Residue, a1: Residue, x: Residue) -> Result<Self> {
        a0.check(a1)?;
        a0.check(x)?;
        Ok(QuadExtElem { a0, a1, x })
    }

    pub fn from_parts(a0: i64, a1: i64, x: Residue) -> Self {
        let m = x.modulus;
        QuadExtElem { a0: m.residue(a0), a1: m.residue(a1), x }
    }

    pub fn one(x: Residue) -> Self {
        Self::from_parts(1, 0, x)
    }

    pub fn conj(self) -> Self {
        QuadExtElem { a0: self.a0, a1: -self.a1, x: self.x }
    }

    /// `a0^2 - a1^2 x`.
    pub fn norm(self) -> Residue {
        self.a0 * self.a0 - self.a1 * self.a1 * self.x
    }

    pub fn is_rational(self) -> bool {
        self.a1.is_zero()
    }

    /// The `a0` component, asserting that the `ω` component vanishes.
    pub fn rational_part(self, context: &'static str) -> Result<Residue> {
        if self.is_rational() {
            Ok(self.a0)
        } else {
            Err(ArithError::OmegaComponent(context))
        }
    }

    pub fn scale(self, k: Residue) -> Self {
        QuadExtElem { a0: self.a0 * k, a1: self.a1 * k, x: self.x }
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = QuadExtElem::one(self.x);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl Add for QuadExtElem {
    type Output = QuadExtElem;
    fn add(self, rhs: QuadExtElem) -> QuadExtElem {
        assert_eq!(self.x, rhs.x, "extension parameter mismatch");
        QuadExtElem { a0: self.a0 + rhs.a0, a1: self.a1 + rhs.a1, x: self.x }
    }
}

impl Sub for QuadExtElem {
    type Output = QuadExtElem;
    fn sub(self, rhs: QuadExtElem) -> QuadExtElem {
        assert_eq!(self.x, rhs.x, "extension parameter mismatch");
        QuadExtElem { a0: self.a0 - rhs.a0, a1: self.a1 - rhs.a1, x: self.x }
    }
}

impl Mul for QuadExtElem {
    type Output = QuadExtElem;
    fn mul(self, rhs: QuadExtElem) -> QuadExtElem {
        assert_eq!(self.x, rhs.x, "extension parameter mismatch");
        QuadExtElem {
            a0: self.a0 * rhs.a0 + self.a1 * rhs.a1 * self.x,
            a1: self.a0 * rhs.a1 + self.a1 * rhs.a0,
            x: self.x,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u64, e: u32) -> ResidueRing {
        ResidueRing::new(p, e).unwrap()
    }

    #[test]
    fn make_ring_examples() {
        let r = ring(5, 2);
        assert_eq!(r.modulus().value(), 25);
        let fact: Vec<u64> = (0..5).map(|n| r.fact(n).value()).collect();
        assert_eq!(fact, vec![1, 1, 2, 6, 24]);
        assert_eq!(ring(7, 1).fact(6).value(), 6);
        assert_eq!(ResidueRing::new(9, 1).unwrap_err(), ArithError::NotPrime(9));
        assert_eq!(ResidueRing::new(3, 1).unwrap_err(), ArithError::PrimeTooSmall(3));
        assert_eq!(ResidueRing::new(5, 0).unwrap_err(), ArithError::ExponentOutOfRange(0));
        assert_eq!(ResidueRing::new(5, 9).unwrap_err(), ArithError::ExponentOutOfRange(9));
    }

    #[test]
    fn fact_tables_are_inverse() {
        for p in [5, 7, 97, 199] {
            let r = ring(p, 4);
            for n in 0..p as usize {
                assert_eq!((r.fact(n) * r.inv_fact(n)).value(), 1);
            }
        }
    }

    #[test]
    fn inverse_examples() {
        let m = Modulus::new(5, 3).unwrap();
        assert_eq!(m.residue(9).inv().unwrap().value(), 14);
        assert_eq!(m.one().inv().unwrap().value(), 1);
        let m2 = Modulus::new(5, 2).unwrap();
        assert!(matches!(m2.residue(5).inv(), Err(ArithError::NotUnit { .. })));
    }

    #[test]
    fn pow_examples() {
        let m = Modulus::new(5, 2).unwrap();
        assert_eq!(m.residue(2).pow(4).value(), 16);
        assert_eq!(m.residue(3).pow(4).value(), 6);
        assert_eq!(m.zero().pow(0).value(), 1);
    }

    #[test]
    fn exact_div_examples() {
        let m = Modulus::new(5, 2).unwrap();
        assert_eq!(m.residue(50).exact_div_p(1).unwrap(), Modulus::new(5, 1).unwrap().zero());
        let m4 = Modulus::new(5, 4).unwrap();
        let r = m4.residue(125).exact_div_p(3).unwrap();
        assert_eq!((r.value(), r.modulus().exp()), (1, 1));
        assert!(matches!(m.residue(7).exact_div_p(1), Err(ArithError::NotDivisible { .. })));
        assert!(matches!(m.residue(0).exact_div_p(2), Err(ArithError::PrecisionTooLow { .. })));
    }

    #[test]
    fn ring_mismatch_is_rejected() {
        let a = Modulus::new(5, 2).unwrap().one();
        let b = Modulus::new(5, 3).unwrap().one();
        assert!(matches!(a.try_add(b), Err(ArithError::RingMismatch { .. })));
        assert!(matches!(a.try_mul(b), Err(ArithError::RingMismatch { .. })));
        assert!(QuadExtElem::new(a, b, a).is_err());
    }

    #[test]
    #[should_panic(expected = "ring mismatch")]
    fn ring_mismatch_operator_panics() {
        let a = Modulus::new(5, 2).unwrap().one();
        let b = Modulus::new(7, 2).unwrap().one();
        let _ = a + b;
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre_symbol(4, 7), 1);
        assert_eq!(legendre_symbol(3, 7), -1);
        assert_eq!(legendre_symbol(14, 7), 0);
        assert_eq!(legendre_symbol(-3, 7), 1);
    }

    #[test]
    fn binom_examples() {
        // C(6, 3) = 20 = 5 * 4
        let b = ring(5, 2).binom_mod(6, 3).unwrap();
        assert_eq!((b.val(), b.unit().value()), (1, 4));
        assert_eq!(b.to_residue().value(), 20);
        let b = ring(5, 2).binom_mod(8, 4).unwrap();
        assert_eq!((b.val(), b.unit().value()), (1, 14));
        let b = ring(5, 3).binom_mod(4, 2).unwrap();
        assert_eq!((b.val(), b.unit().value()), (0, 6));
        assert!(matches!(ring(5, 2).binom_mod(2, 3), Err(ArithError::BinomialRange { .. })));
        assert!(matches!(ring(5, 2).binom_mod(25, 3), Err(ArithError::IndexRange { .. })));
    }

    #[test]
    fn quad_ext_examples() {
        let m = Modulus::new(5, 1).unwrap();
        let x = m.residue(2);
        let sq = QuadExtElem::from_parts(1, 1, x).pow(2);
        assert_eq!((sq.a0.value(), sq.a1.value()), (3, 2));
        let s = QuadExtElem::from_parts(1, 1, x).pow(5) + QuadExtElem::from_parts(1, -1, x).pow(5);
        assert!(s.is_rational());
        let w = QuadExtElem::from_parts(0, 1, m.residue(3)).pow(2);
        assert_eq!((w.a0.value(), w.a1.value()), (3, 0));
        let e = QuadExtElem::from_parts(3, 4, x);
        assert!((e * e.conj()).is_rational());
        assert_eq!((e * e.conj()).a0, e.norm());
    }

    #[test]
    fn valuation_and_reduce() {
        let m = Modulus::new(5, 4).unwrap();
        assert_eq!(m.residue(250).valuation(), 3);
        assert_eq!(m.zero().valuation(), 4);
        assert_eq!(m.residue(626).reduce(2).unwrap().value(), 1);
        assert!(m.one().reduce(5).is_err());
        assert_eq!(m.residue(-1).signed_value(), -1);
    }

    #[test]
    fn modulus_limit() {
        assert!(Modulus::new(199, 8).is_ok());
        assert!(matches!(Modulus::new(199, 9), Err(ArithError::ModulusTooLarge { .. })));
        assert!(Modulus::new(499, 6).is_ok());
    }
}
