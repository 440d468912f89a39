//! Big-integer and exact-rational helpers used by the oracle paths.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::modmath::{Modulus, Residue};

const PASCAL_ROWS: usize = 512;

fn pascal() -> &'static Vec<Vec<BigInt>> {
    static TABLE: OnceLock<Vec<Vec<BigInt>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(PASCAL_ROWS);
        rows.push(vec![BigInt::one()]);
        for n in 1..PASCAL_ROWS {
            let prev = &rows[n - 1];
            let mut row = Vec::with_capacity(n + 1);
            row.push(BigInt::one());
            for k in 1..n {
                row.push(&prev[k - 1] + &prev[k]);
            }
            row.push(BigInt::one());
            rows.push(row);
        }
        rows
    })
}

/// Exact `C(n, k)`; zero when `k < 0`, `k > n` or `n < 0`.
pub fn binom(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let (n, k) = (n as usize, k as usize);
    if n < PASCAL_ROWS {
        return pascal()[n][k].clone();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Generalized binomial `C(top, k)` with a rational upper argument.
pub fn binom_rational(top: &BigRational, k: u64) -> BigRational {
    let mut acc = BigRational::one();
    for i in 0..k {
        acc = acc * (top - BigRational::from_integer(BigInt::from(i)))
            / BigRational::from_integer(BigInt::from(i + 1));
    }
    acc
}

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

/// `(-1)^k` as a small integer.
pub fn sign(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `H_n^(m) = sum_{k=1}^n 1/k^m`.
pub fn harmonic(n: u64, m: u32) -> BigRational {
    let mut acc = BigRational::zero();
    for k in 1..=n {
        acc += BigRational::new(BigInt::one(), BigInt::from(k).pow(m));
    }
    acc
}

/// `H_0^(m), ..., H_n^(m)`.
pub fn harmonic_prefix(n: u64, m: u32) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut acc = BigRational::zero();
    out.push(acc.clone());
    for k in 1..=n {
        acc += BigRational::new(BigInt::one(), BigInt::from(k).pow(m));
        out.push(acc.clone());
    }
    out
}

/// p-adic valuation of a big integer; `None` for zero.
pub fn valuation_int(v: &BigInt, p: u64) -> Option<i64> {
    if v.is_zero() {
        return None;
    }
    let pb = BigInt::from(p);
    let mut v = v.abs();
    let mut k = 0;
    loop {
        let (q, r) = v.div_rem(&pb);
        if !r.is_zero() {
            return Some(k);
        }
        v = q;
        k += 1;
    }
}

/// p-adic valuation of a rational; `None` for zero.
pub fn valuation(v: &BigRational, p: u64) -> Option<i64> {
    let num = valuation_int(v.numer(), p)?;
    let den = valuation_int(v.denom(), p).unwrap_or(0);
    Some(num - den)
}

/// Reduce a p-integral rational into `Z/p^M`; `None` if `p` divides the
/// denominator.
pub fn reduce(v: &BigRational, modulus: Modulus) -> Option<Residue> {
    let den = modulus.residue_big(v.denom());
    let inv = den.inv().ok()?;
    Some(modulus.residue_big(v.numer()) * inv)
}

/// `a0 + a1·sqrt(x)` over the rationals with `x` rational.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadRational {
    pub a0: BigRational,
    pub a1: BigRational,
}

impl QuadRational {
    pub fn new(a0: BigRational, a1: BigRational) -> Self {
        QuadRational { a0, a1 }
    }

    pub fn mul(&self, other: &QuadRational, x: &BigRational) -> QuadRational {
        QuadRational {
            a0: &self.a0 * &other.a0 + &self.a1 * &other.a1 * x,
            a1: &self.a0 * &other.a1 + &self.a1 * &other.a0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binom(6, 3), int(20));
        assert_eq!(binom(8, 4), int(70));
        assert_eq!(binom(3, 5), int(0));
        assert_eq!(binom(-1, 0), int(0));
        assert_eq!(binom(600, 2), int(179_700));
        assert_eq!(binom(600, 598), int(179_700));
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(&rat(50, 3), 5), Some(2));
        assert_eq!(valuation(&rat(3, 25), 5), Some(-2));
        assert_eq!(valuation(&rat(0, 1), 5), None);
        assert_eq!(valuation_int(&int(-625), 5), Some(4));
    }

    #[test]
    fn reduction() {
        let m = Modulus::new(5, 2).unwrap();
        assert_eq!(reduce(&rat(25, 12), m).unwrap().value(), 0);
        assert_eq!(reduce(&rat(1, 9), Modulus::new(5, 3).unwrap()).unwrap().value(), 14);
        assert!(reduce(&rat(1, 5), m).is_none());
    }

    #[test]
    fn harmonic_numbers() {
        assert_eq!(harmonic(4, 1), rat(25, 12));
        assert_eq!(harmonic(2, 2), rat(5, 4));
        assert_eq!(harmonic(0, 3), rat(0, 1));
        assert_eq!(harmonic_prefix(4, 1)[4], harmonic(4, 1));
    }

    #[test]
    fn generalized_binomial_matches_integer() {
        for n in 0..12i64 {
            for k in 0..=12u64 {
                assert_eq!(binom_rational(&rat_int(n), k), rat_int(binom(n, k as i64)));
            }
        }
    }
}
