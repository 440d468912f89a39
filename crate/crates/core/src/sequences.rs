//! Generalized central trinomial coefficients `T_n(b, c)`, Legendre
//! polynomial values at odd integers, and harmonic numbers modulo `p^M`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact;
use crate::modmath::{Residue, ResidueRing};

/// Which divisibility case a pair `(b, c)` falls
/// into for a given prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CaseTag {
    PDividesC,
    PDividesB,
    Generic,
}

impl CaseTag {
    pub fn name(self) -> &'static str {
        match self {
            CaseTag::PDividesC => "P_DIVIDES_C",
            CaseTag::PDividesB => "P_DIVIDES_B",
            CaseTag::Generic => "GENERIC",
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The pair `(b, c)` together with its discriminant `d = b^2 - 4c != 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TrinomialParams {
    b: i64,
    c: i64,
    d: i64,
}

impl TrinomialParams {
    pub fn new(b: i64, c: i64) -> Result<Self> {
        let d = b
            .checked_mul(b)
            .and_then(|b2| c.checked_mul(4).and_then(|c4| b2.checked_sub(c4)))
            .ok_or(Error::OutOfRange { what: "b^2 - 4c", value: b })?;
        if d == 0 {
            return Err(Error::ZeroDiscriminant { b, c });
        }
        Ok(TrinomialParams { b, c, d })
    }

    /// `b = 2x + 1`, `c = x^2 + x`, for which `T_n = P_n(2x + 1)` and `d = 1`.
    pub fn legendre(x: i64) -> Result<Self> {
        Self::new(2 * x + 1, x * x + x)
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    /// Case classification relative to `p`; rejects `p | d`.
    pub fn case_for(&self, p: u64) -> Result<CaseTag> {
        let pi = p as i64;
        if self.d.rem_euclid(pi) == 0 {
            return Err(Error::DiscriminantDivisible { p, d: self.d });
        }
        // p | b and p | c together would force p | d, so at most one holds.
        Ok(if self.c.rem_euclid(pi) == 0 {
            CaseTag::PDividesC
        } else if self.b.rem_euclid(pi) == 0 {
            CaseTag::PDividesB
        } else {
            CaseTag::Generic
        })
    }
}

/// `T_0, ..., T_{len-1}` reduced into one ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceWindow {
    values: Vec<Residue>,
}

impl SequenceWindow {
    pub fn values(&self) -> &[Residue] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, n: usize) -> Residue {
        self.values[n]
    }
}

/// `T_0..T_{len-1}` modulo `p^M` from the three-term recurrence
/// `(n+1) T_{n+1} = (2n+1) b T_n - n d T_{n-1}`.
pub fn trinomial_run(params: &TrinomialParams, ring: &ResidueRing, len: usize) -> Result<SequenceWindow> {
    let p = ring.p();
    if len as u64 > p {
        return Err(Error::WindowTooLong { len, p });
    }
    let b = ring.elem(params.b);
    let d = ring.elem(params.d);
    let mut values = Vec::with_capacity(len);
    if len > 0 {
        values.push(ring.elem(1));
    }
    if len > 1 {
        values.push(b);
    }
    for n in 1..len.saturating_sub(1) {
        let next = (values[n].scale(2 * n as i64 + 1) * b - values[n - 1].scale(n as i64) * d)
            * ring.inv_small(n + 1);
        values.push(next);
    }
    Ok(SequenceWindow { values })
}

/// `T_n = sum_k C(n, 2k) C(2k, k) b^(n-2k) c^k` evaluated in the ring.
pub fn trinomial_direct(n: u64, params: &TrinomialParams, ring: &ResidueRing) -> Result<Residue> {
    let p = ring.p();
    if n >= p {
        return Err(Error::IndexTooLarge { n, p });
    }
    let n = n as usize;
    let b = ring.elem(params.b);
    let c = ring.elem(params.c);
    let binom = |top: usize, k: usize| ring.fact(top) * ring.inv_fact(k) * ring.inv_fact(top - k);
    let mut acc = ring.elem(0);
    for k in 0..=n / 2 {
        acc += binom(n, 2 * k) * binom(2 * k, k) * b.pow((n - 2 * k) as u64) * c.pow(k as u64);
    }
    Ok(acc)
}

/// Exact `T_n(b, c)` as a big integer.
pub fn trinomial_exact(n: u64, b: i64, c: i64) -> BigInt {
    let n = n as i64;
    let (b, c) = (BigInt::from(b), BigInt::from(c));
    let mut acc = BigInt::zero();
    for k in 0..=n / 2 {
        acc += exact::binom(n, 2 * k)
            * exact::binom(2 * k, k)
            * num_traits::pow(b.clone(), (n - 2 * k) as usize)
            * num_traits::pow(c.clone(), k as usize);
    }
    acc
}

/// `P_n(2x + 1)`, computed as `T_n(2x + 1, x^2 + x)`.
pub fn legendre_poly_value(n: u64, x: i64) -> BigInt {
    trinomial_exact(n, 2 * x + 1, x * x + x)
}

/// `P_n(y) = sum_k C(n, k) C(n + k, k) ((y - 1)/2)^k` at `y = 2x + 1`.
pub fn legendre_poly_defsum(n: u64, x: i64) -> BigInt {
    let n = n as i64;
    let x = BigInt::from(x);
    (0..=n)
        .map(|k| exact::binom(n, k) * exact::binom(n + k, k) * num_traits::pow(x.clone(), k as usize))
        .sum()
}

/// `H_n^(m) = sum_{k=1}^n k^(-m)` modulo `p^M`, for `n < p`.
pub fn harmonic_mod(n: u64, m: u32, ring: &ResidueRing) -> Result<Residue> {
    let p = ring.p();
    if n >= p {
        return Err(Error::IndexTooLarge { n, p });
    }
    let mut acc = ring.elem(0);
    for k in 1..=n as usize {
        acc += ring.inv_small(k).pow(m as u64);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vals(w: &SequenceWindow) -> Vec<u64> {
        w.values().iter().map(|r| r.value()).collect()
    }

    #[test]
    fn trinomial_run_known_sequences() {
        let ring = ResidueRing::new(7, 4).unwrap();
        let w = trinomial_run(&TrinomialParams::new(1, 1).unwrap(), &ring, 6).unwrap();
        assert_eq!(vals(&w), vec![1, 1, 3, 7, 19, 51]);
        let ring = ResidueRing::new(5, 4).unwrap();
        let w = trinomial_run(&TrinomialParams::new(3, 2).unwrap(), &ring, 5).unwrap();
        assert_eq!(vals(&w), vec![1, 3, 13, 63, 321]);
    }

    #[test]
    fn central_binomial_has_zero_discriminant() {
        // T_n(2, 1) = C(2n, n) but d = 0, so the pair is rejected as parameters.
        assert_eq!(TrinomialParams::new(2, 1).unwrap_err(), Error::ZeroDiscriminant { b: 2, c: 1 });
        let expected = [1, 2, 6, 20, 70];
        for (n, e) in expected.iter().enumerate() {
            assert_eq!(trinomial_exact(n as u64, 2, 1), BigInt::from(*e));
        }
    }

    #[test]
    fn trinomial_run_rejects_long_window() {
        let ring = ResidueRing::new(5, 2).unwrap();
        let params = TrinomialParams::new(1, 1).unwrap();
        assert!(trinomial_run(&params, &ring, 5).is_ok());
        assert_eq!(trinomial_run(&params, &ring, 6).unwrap_err(), Error::WindowTooLong { len: 6, p: 5 });
        assert!(trinomial_run(&params, &ring, 0).unwrap().is_empty());
    }

    #[test]
    fn trinomial_direct_examples() {
        let ring = ResidueRing::new(11, 3).unwrap();
        for (b, c) in [(1, 1), (3, -2), (-4, 5)] {
            let params = TrinomialParams::new(b, c).unwrap();
            assert_eq!(trinomial_direct(2, &params, &ring).unwrap(), ring.elem(b * b + 2 * c));
            assert_eq!(trinomial_direct(1, &params, &ring).unwrap(), ring.elem(b));
        }
        let ring = ResidueRing::new(5, 3).unwrap();
        let params = TrinomialParams::new(1, 1).unwrap();
        assert_eq!(trinomial_direct(4, &params, &ring).unwrap().value(), 19);
        assert_eq!(trinomial_direct(5, &params, &ring).unwrap_err(), Error::IndexTooLarge { n: 5, p: 5 });
    }

    #[test]
    fn trinomial_exact_examples() {
        assert_eq!(trinomial_exact(5, 1, 1), BigInt::from(51));
        assert_eq!(trinomial_exact(3, 3, 2), BigInt::from(63));
        assert_eq!(trinomial_exact(6, 2, 1), BigInt::from(924));
    }

    #[test]
    fn legendre_values() {
        assert_eq!(legendre_poly_value(0, 9), BigInt::from(1));
        assert_eq!(legendre_poly_value(1, 1), BigInt::from(3));
        assert_eq!(legendre_poly_value(2, 1), BigInt::from(13));
        for n in 0..30 {
            for x in -5..6 {
                assert_eq!(legendre_poly_value(n, x), legendre_poly_defsum(n, x), "n={n} x={x}");
            }
        }
    }

    #[test]
    fn harmonic_examples() {
        let r = ResidueRing::new(5, 1).unwrap();
        assert_eq!(harmonic_mod(0, 1, &r).unwrap().value(), 0);
        assert_eq!(harmonic_mod(4, 2, &r).unwrap().value(), 0);
        let r = ResidueRing::new(5, 2).unwrap();
        assert_eq!(harmonic_mod(4, 1, &r).unwrap().value(), 0);
        assert!(harmonic_mod(5, 1, &r).is_err());
    }

    #[test]
    fn case_classification() {
        let params = TrinomialParams::new(1, 5).unwrap();
        assert_eq!(params.case_for(5).unwrap(), CaseTag::PDividesC);
        assert_eq!(TrinomialParams::new(5, 1).unwrap().case_for(5).unwrap(), CaseTag::PDividesB);
        assert_eq!(TrinomialParams::new(1, 1).unwrap().case_for(7).unwrap(), CaseTag::Generic);
        // d = 1 - 4*(-1) = 5
        assert!(matches!(TrinomialParams::new(1, -1).unwrap().case_for(5), Err(Error::DiscriminantDivisible { .. })));
    }
}
