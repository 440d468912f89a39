use num_bigint::BigInt;
use proptest::prelude::*;

use tricong::exact;
use tricong::identity_suite::identities::{eval_identity, IdentityId};
use tricong::modmath::{is_prime, legendre_symbol, primes_in, Modulus, QuadExtElem, ResidueRing};
use tricong::sequences::{trinomial_direct, trinomial_exact, trinomial_run, TrinomialParams};
use tricong::special_sums::{half_polylog2, s2_sum};

fn prime_below(limit: u64) -> impl Strategy<Value = u64> {
    let primes = primes_in(5, limit);
    (0..primes.len()).prop_map(move |i| primes[i])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn inverse_is_involution(p in prime_below(300), exp in 1u32..=6, v in any::<i64>()) {
        let m = Modulus::new(p, exp).unwrap();
        let a = m.residue(v);
        prop_assume!(a.is_unit());
        let inv = a.inv().unwrap();
        prop_assert_eq!(inv.inv().unwrap(), a);
        prop_assert_eq!(a * inv, m.one());
    }

    #[test]
    fn euler_theorem(p in prime_below(300), exp in 1u32..=5, v in any::<i64>()) {
        let m = Modulus::new(p, exp).unwrap();
        let a = m.residue(v);
        prop_assume!(a.is_unit());
        let phi = p.pow(exp - 1) * (p - 1);
        prop_assert_eq!(a.pow(phi), m.one());
    }

    #[test]
    fn legendre_is_multiplicative(p in prime_below(200), a in -500i64..500, b in -500i64..500) {
        prop_assert_eq!(legendre_symbol(a * b, p), legendre_symbol(a, p) * legendre_symbol(b, p));
    }

    #[test]
    fn conjugate_sum_is_rational(p in prime_below(100), x in 0i64..1000, a0 in -50i64..50, a1 in -50i64..50, n in 0u64..40) {
        let m = Modulus::new(p, 3).unwrap();
        let e = QuadExtElem::from_parts(a0, a1, m.residue(x));
        let s = e.pow(n) + e.conj().pow(n);
        prop_assert!(s.is_rational());
        prop_assert!((e.pow(n) - e.conj().pow(n)).a0.is_zero());
    }

    #[test]
    fn trinomial_three_ways(p in prime_below(120), b in -30i64..30, c in -30i64..30) {
        let Ok(params) = TrinomialParams::new(b, c) else { return Ok(()) };
        let ring = ResidueRing::new(p, 3).unwrap();
        let run = trinomial_run(&params, &ring, p as usize).unwrap();
        for k in 0..p {
            let exact = ring.modulus().residue_big(&trinomial_exact(k, b, c));
            prop_assert_eq!(run.get(k as usize), exact);
            prop_assert_eq!(trinomial_direct(k, &params, &ring).unwrap(), exact);
        }
    }

    #[test]
    fn trinomial_odd_in_b(n in 0u64..60, b in -20i64..20, c in -20i64..20) {
        let sign = if n % 2 == 0 { 1 } else { -1 };
        prop_assert_eq!(trinomial_exact(n, -b, c), trinomial_exact(n, b, c) * sign);
    }

    #[test]
    fn sun_identity(n in 0i64..40, b in -8i64..8, c in -8i64..8) {
        prop_assume!(b * b != 4 * c);
        prop_assert!(eval_identity(IdentityId::Sun, &[n, b, c]).unwrap().equal);
    }

    #[test]
    fn half_sum_matches_s2_mod_p(p in prime_below(100), x in -1000i64..1000) {
        let r = Modulus::new(p, 1).unwrap().residue(x);
        prop_assert_eq!(half_polylog2(r), s2_sum(r).unwrap().residue);
    }
}

#[test]
fn legendre_matches_enumeration() {
    for p in primes_in(5, 199) {
        let squares: Vec<bool> = {
            let mut s = vec![false; p as usize];
            for y in 1..p {
                s[(y * y % p) as usize] = true;
            }
            s
        };
        for a in 0..p {
            let expected = if a == 0 { 0 } else if squares[a as usize] { 1 } else { -1 };
            assert_eq!(legendre_symbol(a as i64, p), expected, "({a}/{p})");
        }
    }
}

#[test]
fn binomials_match_big_integers() {
    for p in primes_in(5, 97) {
        let ring = ResidueRing::new(p, 4).unwrap();
        for n in 0..=2 * p - 2 {
            for k in 0..=n {
                let e: BigInt = exact::binom(n as i64, k as i64);
                let v = ring.binom_mod(n, k).unwrap();
                assert_eq!(v.to_residue(), ring.modulus().residue_big(&e), "C({n},{k}) mod {p}^4");
                assert_eq!(Some(v.val() as i64), exact::valuation_int(&e, p));
            }
        }
    }
}

#[test]
fn wolstenholme_and_morley() {
    for p in primes_in(5, 199) {
        let h = exact::harmonic(p - 1, 1);
        assert!(exact::valuation(&h, p).unwrap() >= 2, "H_(p-1) at p = {p}");
        let m = Modulus::new(p, 3).unwrap();
        let lhs = m.residue_big(&exact::binom(p as i64 - 1, (p as i64 - 1) / 2));
        let sign = if (p - 1) / 2 % 2 == 0 { 1 } else { -1 };
        assert_eq!(lhs, m.residue(4).pow(p - 1).scale(sign), "p = {p}");
    }
}

#[test]
fn primality_agrees_with_sieve() {
    let limit = 2000usize;
    let mut sieve = vec![true; limit + 1];
    sieve[0] = false;
    sieve[1] = false;
    for i in 2..=limit {
        if sieve[i] {
            for j in (i * i..=limit).step_by(i) {
                sieve[j] = false;
            }
        }
    }
    for (n, &is) in sieve.iter().enumerate() {
        assert_eq!(is_prime(n as u64), is, "{n}");
    }
}
