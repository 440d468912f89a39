//! p-adic special quantities: Fermat quotients, `Q_p(x, y)`, the finite
//! polylogarithms `£_1`, `£_2`, the half-range `£_2` sum and `S^(2)_{p-1}(x)`.
//!
//! Each quantity that involves a division by `p` is computed at an
//! elevated precision and brought down with an exact division; a failed
//! division is reported as an error rather than truncated.

use crate::error::{Error, Result};
use crate::modmath::{Modulus, QuadExtElem, Residue};

/// Extra precision used by [`s2_sum`]: it divides by `p` twice.
pub const S2_MARGIN: u32 = 2;

/// A residue together with the precision it was computed at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PadicQuantity {
    pub residue: Residue,
    pub source_precision: u32,
}

impl PadicQuantity {
    pub fn value(&self) -> u64 {
        self.residue.value()
    }
}

/// `1/1, 1/2, ..., 1/n` in one pass with a single inversion.
pub(crate) fn small_inverses(modulus: Modulus, n: usize) -> Vec<Residue> {
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(modulus.one());
    for k in 1..=n {
        let prev = prefix[k - 1];
        prefix.push(prev.scale(k as i64));
    }
    let mut inv_acc = prefix[n].inv().expect("n < p so n! is a unit");
    let mut out = vec![modulus.zero(); n + 1];
    for k in (1..=n).rev() {
        out[k] = inv_acc * prefix[k - 1];
        inv_acc = inv_acc.scale(k as i64);
    }
    out
}

/// `q_p(a) = (a^(p-1) - 1)/p` modulo `p^exp`.
pub fn fermat_quotient(a: i64, p: u64, exp: u32) -> Result<PadicQuantity> {
    let work = Modulus::new(p, exp + 1)?;
    fermat_quotient_of(work.residue(a), exp)
}

/// Fermat quotient of a residue known at precision `p^(exp + 1)` or more.
pub fn fermat_quotient_of(a: Residue, exp: u32) -> Result<PadicQuantity> {
    let m = a.modulus();
    if !a.is_unit() {
        return Err(Error::NotCoprime { p: m.p(), what: "the Fermat quotient base" });
    }
    let work = a.reduce(exp + 1)?;
    let num = work.pow(m.p() - 1) - work.modulus().one();
    Ok(PadicQuantity { residue: num.exact_div_p(1)?, source_precision: exp + 1 })
}

/// `Q_p(x, y) = ((y - x)^p + x^p - y^p)/p` modulo `p^exp`.
pub fn qp_delta(x: i64, y: i64, p: u64, exp: u32) -> Result<PadicQuantity> {
    let work = Modulus::new(p, exp + 1)?;
    let (xr, yr) = (work.residue(x), work.residue(y));
    let num = (yr - xr).pow(p) + xr.pow(p) - yr.pow(p);
    Ok(PadicQuantity { residue: num.exact_div_p(1)?, source_precision: exp + 1 })
}

/// `£_m(x) = sum_{k=1}^{p-1} x^k / k^m` for `m` in `{1, 2}`.
pub fn finite_polylog(m: u32, x: Residue) -> Result<Residue> {
    if !(1..=2).contains(&m) {
        return Err(Error::OutOfRange { what: "polylogarithm order", value: m as i64 });
    }
    let modulus = x.modulus();
    let n = (modulus.p() - 1) as usize;
    Ok(polylog_range(m, x, n, &small_inverses(modulus, n)))
}

/// `sum_{k=1}^{(p-1)/2} x^k / k^2`.
pub fn half_polylog2(x: Residue) -> Residue {
    let modulus = x.modulus();
    let n = ((modulus.p() - 1) / 2) as usize;
    polylog_range(2, x, n, &small_inverses(modulus, n))
}

fn polylog_range(m: u32, x: Residue, n: usize, inv: &[Residue]) -> Residue {
    let mut acc = x.modulus().zero();
    let mut xk = x.modulus().one();
    for ik in &inv[1..=n] {
        xk *= x;
        acc += xk * ik.pow(m as u64);
    }
    acc
}

/// `S^(2)_{p-1}(x)` modulo `p^M` (`M` is the precision of `x`).
pub fn s2_sum(x: Residue) -> Result<PadicQuantity> {
    s2_sum_with_margin(x, S2_MARGIN)
}

/// As [`s2_sum`] with a caller-chosen working margin `>= 2`.
///
/// The sum is a polynomial in `x` with p-integral coefficients, so any
/// lift of `x` to the working precision gives the same result mod `p^M`.
pub fn s2_sum_with_margin(x: Residue, margin: u32) -> Result<PadicQuantity> {
    if margin < S2_MARGIN {
        return Err(Error::OutOfRange { what: "S2 precision margin", value: margin as i64 });
    }
    let exp = x.modulus().exp();
    let p = x.modulus().p();
    let xw = x.lift(exp + margin)?;
    let work = xw.modulus();
    let plus = QuadExtElem::from_parts(1, 1, xw);
    let minus = QuadExtElem::from_parts(1, -1, xw);

    let two = work.residue(2);
    let a = two - (plus.pow(p) + minus.pow(p)).rational_part("S2 binomial power term")?;

    let inv = small_inverses(work, (p - 1) as usize);
    let mut b = work.zero();
    let (mut pp, mut mp) = (plus, minus);
    for inv_i in inv.iter().skip(1) {
        b += (pp + mp).rational_part("S2 harmonic-type sum")? * *inv_i;
        pp = pp * plus;
        mp = mp * minus;
    }

    let inner = a.exact_div_p(1)? - b.reduce(exp + margin - 1)?;
    let outer = inner.exact_div_p(1)?.reduce(exp)?;
    Ok(PadicQuantity { residue: outer.scale(2), source_precision: exp + margin })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: u64, e: u32) -> Modulus {
        Modulus::new(p, e).unwrap()
    }

    #[test]
    fn fermat_quotient_examples() {
        assert_eq!(fermat_quotient(2, 5, 1).unwrap().value(), 3);
        assert_eq!(fermat_quotient(3, 5, 2).unwrap().value(), 16);
        assert_eq!(fermat_quotient(1, 13, 3).unwrap().value(), 0);
        assert!(matches!(fermat_quotient(10, 5, 2), Err(Error::NotCoprime { .. })));
    }

    #[test]
    fn fermat_quotient_of_square() {
        for p in [5u64, 7, 11, 101] {
            for b in [2i64, 3, -7, 12] {
                if b.rem_euclid(p as i64) == 0 {
                    continue;
                }
                let qb = fermat_quotient(b, p, 2).unwrap().residue;
                let qb2 = fermat_quotient(b * b, p, 2).unwrap().residue;
                assert_eq!(qb2, qb.scale(2) + (qb * qb).mul_p_pow(1));
            }
        }
    }

    #[test]
    fn qp_delta_examples() {
        assert_eq!(qp_delta(4, 4, 7, 3).unwrap().value(), 0);
        assert_eq!(qp_delta(0, 9, 7, 3).unwrap().value(), 0);
        assert_eq!(qp_delta(1, 2, 5, 2).unwrap().value(), 19);
    }

    #[test]
    fn qp_delta_matches_fermat_quotients() {
        for p in [5u64, 7, 13] {
            for x in -6i64..=6 {
                for y in -6i64..=6 {
                    let pi = p as i64;
                    if x.rem_euclid(pi) == 0 || y.rem_euclid(pi) == 0 || (x - y).rem_euclid(pi) == 0 {
                        continue;
                    }
                    let q = |a| fermat_quotient(a, p, 3).unwrap().residue;
                    let expected = q(x).scale(x) - q(y).scale(y) + q(x - y).scale(y - x);
                    assert_eq!(qp_delta(x, y, p, 3).unwrap().residue, expected);
                }
            }
        }
    }

    #[test]
    fn polylog_examples() {
        assert_eq!(finite_polylog(2, m(5, 1).one()).unwrap().value(), 0);
        assert_eq!(finite_polylog(1, m(5, 2).one()).unwrap().value(), 0);
        assert_eq!(finite_polylog(2, m(5, 2).zero()).unwrap().value(), 0);
        assert!(finite_polylog(3, m(5, 2).one()).is_err());
    }

    #[test]
    fn half_polylog_examples() {
        assert_eq!(half_polylog2(m(5, 1).one()).value(), 0);
        assert_eq!(half_polylog2(m(5, 3).zero()).value(), 0);
        assert_eq!(half_polylog2(m(13, 1).one()).value(), 0);
    }

    #[test]
    fn s2_examples() {
        assert_eq!(s2_sum(m(5, 1).one()).unwrap().value(), 0);
        assert_eq!(s2_sum(m(5, 2).zero()).unwrap().residue.reduce(1).unwrap().value(), 0);
        // sum_{k=1}^{3} 2^k/k^2 mod 7 = 2 + 1 + 8/9, with 1/9 = 4 mod 7: 2 + 1 + 32 = 35 = 0
        let x = m(7, 1).residue(2);
        assert_eq!(s2_sum(x).unwrap().residue, half_polylog2(x));
    }

    #[test]
    fn s2_is_lift_independent() {
        let x = m(7, 2).residue(10);
        let base = s2_sum(x).unwrap().residue;
        for shift in [1i64, 3, 6] {
            let lifted = m(7, 3).residue(10 + 49 * shift);
            assert_eq!(s2_sum(lifted).unwrap().residue.reduce(2).unwrap(), base);
        }
        assert_eq!(s2_sum_with_margin(x, 3).unwrap().residue, base);
        assert!(s2_sum_with_margin(x, 1).is_err());
    }

    #[test]
    fn small_inverses_are_inverses() {
        let md = m(11, 3);
        let inv = small_inverses(md, 10);
        for (k, r) in inv.iter().enumerate().skip(1) {
            assert_eq!(r.scale(k as i64), md.one());
        }
    }
}
