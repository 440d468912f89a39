//! Exact binomial and harmonic identities, each checked by evaluating its
//! two sides along separate code paths in exact rationals.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{binom, binom_rational, harmonic, int, rat, rat_int, sign};
use crate::sequences::trinomial_exact;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum IdentityId {
    Sun,
    HarmonicPoly,
    RationalH,
    ConvWeighted,
    OddSum1,
    OddSum3,
    CatalanNew,
    Conv4n,
    Gould145,
    Cb,
    Guo,
    Bc11,
    Mao31,
    Mao33,
}

impl IdentityId {
    pub const ALL: [IdentityId; 14] = [
        IdentityId::Sun,
        IdentityId::HarmonicPoly,
        IdentityId::RationalH,
        IdentityId::ConvWeighted,
        IdentityId::OddSum1,
        IdentityId::OddSum3,
        IdentityId::CatalanNew,
        IdentityId::Conv4n,
        IdentityId::Gould145,
        IdentityId::Cb,
        IdentityId::Guo,
        IdentityId::Bc11,
        IdentityId::Mao31,
        IdentityId::Mao33,
    ];

    pub fn name(self) -> &'static str {
        self.entry().name
    }

    pub fn index(self) -> usize {
        IdentityId::ALL.iter().position(|&i| i == self).expect("listed")
    }

    fn entry(self) -> &'static IdentityEntry {
        &REGISTRY[self.index()]
    }

    /// Names of the arguments, in order.
    pub fn arg_names(self) -> &'static [&'static str] {
        self.entry().args
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IdentityId::ALL
            .iter()
            .copied()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown identity {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityResult {
    pub id: IdentityId,
    pub args: Vec<i64>,
    pub lhs: BigRational,
    pub rhs: BigRational,
    pub equal: bool,
}

type Side = fn(&[i64]) -> BigRational;

struct IdentityEntry {
    name: &'static str,
    args: &'static [&'static str],
    validate: fn(&[i64]) -> std::result::Result<(), String>,
    lhs: Side,
    rhs: Side,
}

fn nonneg(a: &[i64]) -> std::result::Result<(), String> {
    if a[0] < 0 {
        return Err(format!("n = {} must be nonnegative", a[0]));
    }
    Ok(())
}

fn odd_sum_range(a: &[i64]) -> std::result::Result<(), String> {
    let (n, i, j) = (a[0], a[1], a[2]);
    if n < 1 || !(0..n).contains(&i) || !(0..n).contains(&j) {
        return Err(format!("need n >= 1 and 0 <= i, j <= n - 1, got n={n} i={i} j={j}"));
    }
    Ok(())
}

fn mao_range(a: &[i64]) -> std::result::Result<(), String> {
    let (n, i) = (a[0], a[1]);
    if n < 1 || !(0..n).contains(&i) {
        return Err(format!("need n >= 1 and 0 <= i <= n - 1, got n={n} i={i}"));
    }
    Ok(())
}

static REGISTRY: [IdentityEntry; 14] = [
    IdentityEntry {
        name: "ID_SUN",
        args: &["n", "b", "c"],
        validate: |a| {
            nonneg(a)?;
            if a[1] * a[1] == 4 * a[2] {
                return Err("b^2 - 4c must be nonzero".into());
            }
            Ok(())
        },
        lhs: |a| rat_int(num_traits::pow(trinomial_exact(a[0] as u64, a[1], a[2]), 2)),
        rhs: |a| {
            let (n, b, c) = (a[0], a[1], a[2]);
            let d = int(b * b - 4 * c);
            let s: BigInt = (0..=n)
                .map(|k| {
                    num_traits::pow(binom(2 * k, k), 2)
                        * binom(n + k, 2 * k)
                        * num_traits::pow(d.clone(), (n - k) as usize)
                        * num_traits::pow(int(c), k as usize)
                })
                .sum();
            rat_int(s)
        },
    },
    IdentityEntry {
        name: "ID_HARMONIC_POLY",
        args: &["n", "x_num", "x_den"],
        validate: |a| {
            nonneg(a)?;
            if a[2] == 0 {
                return Err("x_den must be nonzero".into());
            }
            Ok(())
        },
        lhs: |a| {
            let (n, x) = (a[0], rat(a[1], a[2]));
            let mut inner = BigRational::zero();
            let mut xi = BigRational::one();
            let mut acc = BigRational::zero();
            for k in 1..=n {
                xi *= &x;
                inner += &xi / rat_int(k);
                acc += rat_int(binom(n, k) * sign(k)) / rat_int(k) * &inner;
            }
            acc
        },
        rhs: |a| {
            let (n, x) = (a[0], rat(a[1], a[2]));
            let y = BigRational::one() - x;
            let mut yk = BigRational::one();
            let mut acc = -harmonic(n as u64, 2);
            for k in 1..=n {
                yk *= &y;
                acc += &yk / rat_int(k * k);
            }
            acc
        },
    },
    IdentityEntry {
        name: "ID_RATIONAL_H",
        args: &["n"],
        validate: nonneg,
        // Summed over k = 1..n.
        lhs: |a| {
            let n = a[0];
            (1..=n)
                .map(|k| rat_int(binom(n, k) * sign(k) * (5 * k + 6)) / rat_int((k + 4) * (k + 3) * k))
                .sum()
        },
        rhs: |a| {
            let n = a[0];
            let poly = n * (n * n * n + 10 * n * n + 35 * n + 2);
            let den = 8 * (n + 1) * (n + 2) * (n + 3) * (n + 4);
            -rat(poly, den) - harmonic(n as u64, 1) / rat_int(2)
        },
    },
    IdentityEntry {
        name: "ID_CONV_WEIGHTED",
        args: &["n"],
        validate: nonneg,
        lhs: |a| {
            let n = a[0];
            rat_int(
                (0..=n)
                    .map(|k| binom(2 * k, k) * binom(2 * (n - k), n - k) * (2 + 3 * n + 4 * k * (n - k)))
                    .sum::<BigInt>(),
            )
        },
        rhs: |a| {
            let n = a[0];
            rat_int(int((1 + n) * (4 + n)) * num_traits::pow(int(4), n as usize)) / rat_int(2)
        },
    },
    IdentityEntry {
        name: "ID_ODDSUM_1",
        args: &["n", "i", "j"],
        validate: odd_sum_range,
        lhs: |a| {
            let (n, i, j) = (a[0], a[1], a[2]);
            rat_int((i.max(j)..n).map(|k| binom(k + i, 2 * i) * binom(k + j, 2 * j) * (2 * k + 1)).sum::<BigInt>())
        },
        rhs: |a| {
            let (n, i, j) = (a[0], a[1], a[2]);
            rat_int(binom(n + i - 1, 2 * i) * binom(n + j - 1, 2 * j) * ((i + n) * (j + n))) / rat_int(1 + i + j)
        },
    },
    IdentityEntry {
        name: "ID_ODDSUM_3",
        args: &["n", "i", "j"],
        validate: odd_sum_range,
        lhs: |a| {
            let (n, i, j) = (a[0], a[1], a[2]);
            rat_int(
                (i.max(j)..n)
                    .map(|k| binom(k + i, 2 * i) * binom(k + j, 2 * j) * (2 * k + 1).pow(3))
                    .sum::<BigInt>(),
            )
        },
        rhs: |a| {
            let (n, i, j) = (a[0], a[1], a[2]);
            let mu = 2 + 3 * i + 3 * j + 4 * i * j - 4 * n * n - 4 * i * n * n - 4 * j * n * n;
            -rat_int(binom(n + i - 1, 2 * i) * binom(n + j - 1, 2 * j) * ((i + n) * (j + n)) * mu)
                / rat_int((1 + i + j) * (2 + i + j))
        },
    },
    IdentityEntry {
        name: "ID_CATALAN_NEW",
        args: &["n"],
        validate: nonneg,
        lhs: catalan_new_lhs,
        rhs: catalan_new_rhs,
    },
    IdentityEntry {
        name: "ID_CONV_4N",
        args: &["k"],
        validate: nonneg,
        lhs: |a| {
            let k = a[0];
            rat_int((0..=k).map(|i| binom(2 * k - 2 * i, k - i) * binom(2 * i, i)).sum::<BigInt>())
        },
        rhs: |a| rat_int(num_traits::pow(int(4), a[0] as usize)),
    },
    IdentityEntry {
        name: "ID_GOULD_145",
        args: &["n"],
        validate: nonneg,
        lhs: |a| {
            let n = a[0];
            (1..=n).map(|i| rat_int(binom(n, i) * sign(i)) / rat_int(i)).sum()
        },
        rhs: |a| -harmonic(a[0] as u64, 1),
    },
    IdentityEntry {
        name: "ID_CB",
        args: &["m", "i"],
        validate: |a| {
            if a[0] < 1 || !(0..=a[0]).contains(&a[1]) {
                return Err(format!("need m >= 1 and 0 <= i <= m, got m={} i={}", a[0], a[1]));
            }
            Ok(())
        },
        lhs: |a| rat_int(binom(2 * a[0] - 2 * a[1], a[0] - a[1])),
        rhs: |a| {
            let (m, i) = (a[0], a[1]);
            rat_int(binom(2 * m, m) * num_traits::pow(binom(m, i), 2))
                / rat_int(binom(2 * i, i) * binom(2 * m, 2 * i))
        },
    },
    IdentityEntry {
        name: "ID_GUO",
        args: &["k"],
        validate: nonneg,
        lhs: |a| {
            let k = a[0];
            rat_int((0..=k).map(|i| binom(2 * i, i) * binom(2 * (k - i), k - i) * binom(k, i)).sum::<BigInt>())
        },
        rhs: |a| {
            let k = a[0];
            rat_int(
                (0..=k)
                    .map(|i| {
                        num_traits::pow(binom(2 * i, i), 2) * binom(i, k - i) * num_traits::pow(int(-4), (k - i) as usize)
                    })
                    .sum::<BigInt>(),
            )
        },
    },
    IdentityEntry {
        name: "ID_BC11",
        args: &["i", "p_num", "p_den"],
        validate: |a| {
            if a[0] < 0 || a[2] == 0 {
                return Err("need i >= 0 and p_den != 0".into());
            }
            Ok(())
        },
        lhs: |a| {
            let (i, p) = (a[0], rat(a[1], a[2]));
            (&p + rat_int(i)) * rat_int(binom(2 * i, i)) * binom_rational(&(&p + rat_int(i - 1)), 2 * i as u64)
        },
        rhs: |a| {
            let (i, p) = (a[0], rat(a[1], a[2]));
            let p2 = &p * &p;
            let mut acc = &p * rat_int(sign(i));
            for k in 1..=i {
                acc *= BigRational::one() - &p2 / rat_int(k * k);
            }
            acc
        },
    },
    IdentityEntry {
        name: "ID_MAO_31",
        args: &["n", "i"],
        validate: mao_range,
        lhs: |a| rat_int(alternating_odd_sum(a[0], a[1], 1)),
        rhs: |a| {
            let (n, i) = (a[0], a[1]);
            rat_int(binom(n - 1 + i, 2 * i) * ((i + n) * sign(n - 1)))
        },
    },
    IdentityEntry {
        name: "ID_MAO_33",
        args: &["n", "i"],
        validate: mao_range,
        lhs: |a| rat_int(alternating_odd_sum(a[0], a[1], 3)),
        rhs: |a| {
            let (n, i) = (a[0], a[1]);
            rat_int(binom(n - 1 + i, 2 * i) * ((i + n) * sign(n - 1) * (4 * n * n - 4 * i - 3)))
        },
    },
];

/// `sum_{k=i}^{n-1} C(k+i, 2i) (2k+1)^a (-1)^k`.
fn alternating_odd_sum(n: i64, i: i64, a: u32) -> BigInt {
    (i..n).map(|k| binom(k + i, 2 * i) * ((2 * k + 1).pow(a) * sign(k))).sum()
}

/// The right-hand side of the alternating odd sum with weight 1 without
/// the `(-1)^(n-1)` factor.
pub fn mao31_unsigned_rhs(n: i64, i: i64) -> BigInt {
    binom(n - 1 + i, 2 * i) * (i + n)
}

/// Outcome of comparing the unsigned weight-1 closed form with the sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignProbe {
    pub checked: usize,
    pub unsigned_failures: usize,
    pub first_failure: Option<(i64, i64)>,
    pub signed_failures: usize,
}

/// Brute-force the sign of the weight-1 alternating sum for `n <= n_max`.
pub fn probe_mao31_sign(n_max: i64) -> SignProbe {
    let mut probe = SignProbe { checked: 0, unsigned_failures: 0, first_failure: None, signed_failures: 0 };
    for n in 1..=n_max {
        for i in 0..n {
            let lhs = alternating_odd_sum(n, i, 1);
            let unsigned = mao31_unsigned_rhs(n, i);
            probe.checked += 1;
            if lhs != unsigned {
                probe.unsigned_failures += 1;
                probe.first_failure.get_or_insert((n, i));
            }
            if lhs != unsigned * sign(n - 1) {
                probe.signed_failures += 1;
            }
        }
    }
    probe
}

fn catalan_new_lhs(a: &[i64]) -> BigRational {
    rat_int(catalan_new_lhs_int(a[0]))
}

fn catalan_new_lhs_int(n: i64) -> BigInt {
    (0..=n).map(|k| binom(n, k) * binom(2 * k, k) * binom(2 * n - 2 * k, n - k) * ((n - k) * k)).sum()
}

fn catalan_new_rhs(a: &[i64]) -> BigRational {
    let n = a[0];
    let s: BigInt = (0..=n)
        .map(|k| {
            num_traits::pow(binom(2 * k, k), 2)
                * binom(k, n - k)
                * (n - k)
                * num_traits::pow(int(-4), (n - k) as usize)
        })
        .sum();
    -rat_int(s) / rat_int(2)
}

/// Evaluate both sides of one identity.
pub fn eval_identity(id: IdentityId, args: &[i64]) -> Result<IdentityResult> {
    let entry = id.entry();
    if args.len() != entry.args.len() {
        return Err(Error::Invalid(format!("{} takes {} arguments, got {}", entry.name, entry.args.len(), args.len())));
    }
    (entry.validate)(args).map_err(|msg| Error::Invalid(format!("{}: {msg}", entry.name)))?;
    let lhs = (entry.lhs)(args);
    let rhs = (entry.rhs)(args);
    let equal = lhs == rhs;
    Ok(IdentityResult { id, args: args.to_vec(), lhs, rhs, equal })
}

/// Residuals `32(1+n)^2 r_n - 4(1+5n+3n^2) r_{n+1} + n(1+n) r_{n+2}` on both
/// sides' value sequences.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceCheck {
    pub id: IdentityId,
    pub n_max: i64,
    pub lhs_residuals: Vec<BigRational>,
    pub rhs_residuals: Vec<BigRational>,
}

impl RecurrenceCheck {
    pub fn all_zero(&self) -> bool {
        self.lhs_residuals.iter().chain(&self.rhs_residuals).all(|r| r.is_zero())
    }
}

pub fn check_recurrence(id: IdentityId, n_max: i64) -> Result<RecurrenceCheck> {
    if id != IdentityId::CatalanNew {
        return Err(Error::Invalid(format!("no recurrence is registered for {id}")));
    }
    if !(0..=500).contains(&n_max) {
        return Err(Error::OutOfRange { what: "recurrence n_max", value: n_max });
    }
    let residuals = |side: Side| -> Vec<BigRational> {
        let r: Vec<BigRational> = (0..=n_max + 2).map(|n| side(&[n])).collect();
        (0..=n_max)
            .map(|n| {
                let u = n as usize;
                rat_int(32 * (1 + n) * (1 + n)) * &r[u] - rat_int(4 * (1 + 5 * n + 3 * n * n)) * &r[u + 1]
                    + rat_int(n * (1 + n)) * &r[u + 2]
            })
            .collect()
    };
    Ok(RecurrenceCheck {
        id,
        n_max,
        lhs_residuals: residuals(catalan_new_lhs),
        rhs_residuals: residuals(catalan_new_rhs),
    })
}

/// Sample points for the formal parameter of `ID_BC11`: small primes and
/// assorted rationals.
pub const BC11_SAMPLES: [(i64, i64); 10] = [(5, 1), (7, 1), (11, 1), (13, 1), (1, 2), (-3, 4), (2, 7), (-5, 3), (9, 1), (0, 1)];

/// Rational sample points for `ID_HARMONIC_POLY`.
pub const HARMONIC_SAMPLES: [(i64, i64); 20] = [
    (-3, 1),
    (-2, 1),
    (-1, 1),
    (0, 1),
    (1, 1),
    (2, 1),
    (3, 1),
    (1, 2),
    (-1, 2),
    (1, 3),
    (2, 3),
    (-2, 3),
    (3, 2),
    (5, 2),
    (-5, 3),
    (1, 4),
    (3, 4),
    (7, 5),
    (-7, 3),
    (9, 7),
];

/// Domain bounds for the identity sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IdentityDomain {
    /// Bound on `n` for the single-parameter families.
    pub n_max: i64,
    /// Bound on `n` for the double sums over `(i, j)`.
    pub odd_sum_n_max: i64,
    /// Bound on `k` for the convolution identities.
    pub convolution_k_max: i64,
    /// Bound on `i` for `ID_BC11`.
    pub bc11_i_max: i64,
    /// `(b, c)` grid for `ID_SUN`.
    pub sun_bc: (i64, i64),
}

impl IdentityDomain {
    pub fn with_n_max(n_max: i64) -> Self {
        IdentityDomain {
            n_max,
            odd_sum_n_max: n_max.min(40),
            convolution_k_max: 2 * n_max,
            bc11_i_max: n_max.min(60),
            sun_bc: (-6, 6),
        }
    }

    /// All argument tuples for one identity.
    pub fn args_for(&self, id: IdentityId) -> Vec<Vec<i64>> {
        let n = self.n_max;
        let mut out = Vec::new();
        match id {
            IdentityId::Sun => {
                let (lo, hi) = self.sun_bc;
                for b in lo..=hi {
                    for c in lo..=hi {
                        if b * b != 4 * c {
                            out.extend((0..=n).map(|k| vec![k, b, c]));
                        }
                    }
                }
            }
            IdentityId::HarmonicPoly => {
                for (num, den) in HARMONIC_SAMPLES {
                    out.extend((0..=n).map(|k| vec![k, num, den]));
                }
            }
            IdentityId::RationalH
            | IdentityId::ConvWeighted
            | IdentityId::CatalanNew
            | IdentityId::Gould145 => out.extend((0..=n).map(|k| vec![k])),
            IdentityId::Conv4n | IdentityId::Guo => out.extend((0..=self.convolution_k_max).map(|k| vec![k])),
            IdentityId::OddSum1 | IdentityId::OddSum3 => {
                for m in 1..=self.odd_sum_n_max {
                    for i in 0..m {
                        for j in 0..m {
                            out.push(vec![m, i, j]);
                        }
                    }
                }
            }
            IdentityId::Cb => {
                for m in 1..=n {
                    out.extend((0..=m).map(|i| vec![m, i]));
                }
            }
            IdentityId::Bc11 => {
                for (num, den) in BC11_SAMPLES {
                    out.extend((0..=self.bc11_i_max).map(|i| vec![i, num, den]));
                }
            }
            IdentityId::Mao31 | IdentityId::Mao33 => {
                for m in 1..=n {
                    out.extend((0..m).map(|i| vec![m, i]));
                }
            }
        }
        out
    }
}

/// Evaluate every identity in `ids` over its domain.
pub fn run_identities(ids: &[IdentityId], domain: &IdentityDomain) -> Result<Vec<IdentityResult>> {
    let work: Vec<(IdentityId, Vec<i64>)> =
        ids.iter().flat_map(|&id| domain.args_for(id).into_iter().map(move |a| (id, a))).collect();
    work.par_iter().map(|(id, args)| eval_identity(*id, args)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(id: IdentityId, args: &[i64]) -> IdentityResult {
        eval_identity(id, args).unwrap()
    }

    #[test]
    fn sun_example() {
        let r = eval(IdentityId::Sun, &[2, 1, 1]);
        assert_eq!((r.lhs.clone(), r.rhs.clone()), (rat_int(9), rat_int(9)));
        assert!(r.equal);
        assert!(eval_identity(IdentityId::Sun, &[2, 2, 1]).is_err());
    }

    #[test]
    fn small_examples() {
        let r = eval(IdentityId::Conv4n, &[2]);
        assert_eq!(r.lhs, rat_int(16));
        assert!(r.equal);
        let r = eval(IdentityId::OddSum1, &[1, 0, 0]);
        assert_eq!((r.lhs.clone(), r.rhs.clone()), (rat_int(1), rat_int(1)));
        let r = eval(IdentityId::RationalH, &[1]);
        assert_eq!((r.lhs.clone(), r.rhs.clone()), (rat(-11, 20), rat(-11, 20)));
        let r = eval(IdentityId::CatalanNew, &[2]);
        assert_eq!((r.lhs.clone(), r.rhs.clone()), (rat_int(8), rat_int(8)));
        for (num, den) in [(1, 3), (-5, 2), (7, 1)] {
            let r = eval(IdentityId::HarmonicPoly, &[1, num, den]);
            assert_eq!(r.lhs, -rat(num, den));
            assert!(r.equal);
        }
    }

    #[test]
    fn argument_validation() {
        assert!(eval_identity(IdentityId::OddSum1, &[2, 2, 0]).is_err());
        assert!(eval_identity(IdentityId::OddSum1, &[2, 0]).is_err());
        assert!(eval_identity(IdentityId::HarmonicPoly, &[2, 1, 0]).is_err());
        assert!(eval_identity(IdentityId::Mao31, &[0, 0]).is_err());
        assert!(eval_identity(IdentityId::Cb, &[2, 3]).is_err());
    }

    #[test]
    fn recurrence_examples() {
        let r = check_recurrence(IdentityId::CatalanNew, 50).unwrap();
        assert_eq!(r.lhs_residuals.len(), 51);
        assert!(r.all_zero());
        assert!(check_recurrence(IdentityId::Sun, 5).is_err());
    }

    #[test]
    fn unsigned_weight_one_form_fails() {
        // n = 2, i = 0: 1 - 3 = -2 but the unsigned form gives +2.
        assert_eq!(alternating_odd_sum(2, 0, 1), int(-2));
        assert_eq!(mao31_unsigned_rhs(2, 0), int(2));
        let probe = probe_mao31_sign(30);
        assert_eq!(probe.signed_failures, 0);
        assert_eq!(probe.first_failure, Some((2, 0)));
        assert!(probe.unsigned_failures > 0);
    }

    #[test]
    fn odd_sums_outside_stated_domain() {
        // The stated range is i, j <= n - 1; past it the left side is an
        // empty sum while the right side need not vanish.
        let lhs = (catalan_new_lhs as Side)(&[0]);
        assert!(lhs.is_zero());
        let entry = IdentityId::OddSum1.entry();
        let (l, r) = ((entry.lhs)(&[2, 3, 0]), (entry.rhs)(&[2, 3, 0]));
        assert!(l.is_zero());
        assert!(r.is_zero());
    }

    #[test]
    fn names_round_trip() {
        for id in IdentityId::ALL {
            assert_eq!(id.name().parse::<IdentityId>().unwrap(), id);
        }
    }
}
