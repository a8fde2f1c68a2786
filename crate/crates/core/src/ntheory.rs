//! Integer number theory at desk scale: primality, factorization, uniformly
//! random factored integers, and primitive roots.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};
use crate::rng::Rng;

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

// Witness set that is exact for every n < 2^64.
const MR_BASES: [u64; 7] = [2, 325, 9375, 28178, 450775, 9780504, 1795265022];

/// Deterministic Miller-Rabin primality test, exact on all of `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in MR_BASES.iter() {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// An integer together with its complete prime factorization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FactoredWire")]
pub struct FactoredInteger {
    pub value: u64,
    /// `(prime, exponent)` pairs with strictly increasing primes.
    pub factors: Vec<(u64, u32)>,
}

#[derive(Deserialize)]
struct FactoredWire {
    value: u64,
    factors: Vec<(u64, u32)>,
}

impl TryFrom<FactoredWire> for FactoredInteger {
    type Error = Error;

    fn try_from(w: FactoredWire) -> Result<Self> {
        let f = FactoredInteger::from_factors(w.factors)?;
        if f.value != w.value {
            return Err(Error::Malformed(format!(
                "factors multiply to {}, not {}",
                f.value, w.value
            )));
        }
        Ok(f)
    }
}

impl FactoredInteger {
    /// Builds the integer from prime-power pairs, validating primality and
    /// ordering.
    pub fn from_factors(factors: Vec<(u64, u32)>) -> Result<Self> {
        let mut value: u64 = 1;
        let mut last = 0u64;
        for &(p, e) in &factors {
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            if p <= last || e == 0 {
                return Err(Error::Malformed(
                    "factors must have strictly increasing primes and positive exponents".into(),
                ));
            }
            last = p;
            for _ in 0..e {
                value = value
                    .checked_mul(p)
                    .ok_or_else(|| Error::Malformed("factored value overflows u64".into()))?;
            }
        }
        Ok(FactoredInteger { value, factors })
    }

    fn from_prime_multiset(mut primes: Vec<u64>) -> Self {
        primes.sort_unstable();
        let mut factors: Vec<(u64, u32)> = Vec::new();
        let mut value = 1u64;
        for p in primes {
            value *= p;
            match factors.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => factors.push((p, 1)),
            }
        }
        FactoredInteger { value, factors }
    }

    /// Product with one more prime factor.
    pub fn times_prime(&self, prime: u64) -> Result<Self> {
        let mut primes: Vec<u64> = self
            .factors
            .iter()
            .flat_map(|&(p, e)| std::iter::repeat_n(p, e as usize))
            .collect();
        self.value
            .checked_mul(prime)
            .ok_or_else(|| Error::InvalidParameter("product overflows u64".into()))?;
        if !is_prime(prime) {
            return Err(Error::NotPrime(prime));
        }
        primes.push(prime);
        Ok(Self::from_prime_multiset(primes))
    }

    pub fn distinct_primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }
}

fn pollard_brent(n: u64, c: u64) -> Option<u64> {
    let f = |x: u64| (mul_mod(x, x, n) + c) % n;
    let mut y = 2u64;
    let mut r = 1u64;
    let mut q = 1u64;
    let mut g = 1u64;
    let mut x = y;
    let mut ys = y;
    const BATCH: u64 = 128;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..BATCH.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = gcd(q, n);
            k += BATCH;
        }
        r <<= 1;
    }
    if g == n {
        loop {
            ys = f(ys);
            g = gcd(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn split_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = (1..)
        .find_map(|c| pollard_brent(n, c))
        .expect("pollard rho finds a factor of a composite");
    split_into(d, out);
    split_into(n / d, out);
}

/// Complete factorization by trial division and Pollard's rho (Brent).
pub fn factor(n: u64) -> Result<FactoredInteger> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("cannot factor {n}")));
    }
    let mut primes = Vec::new();
    let mut rest = n;
    let mut d = 2u64;
    while d <= 1000 && d * d <= rest {
        while rest.is_multiple_of(d) {
            primes.push(d);
            rest /= d;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    split_into(rest, &mut primes);
    Ok(FactoredInteger::from_prime_multiset(primes))
}

/// Interval `[K+1, floor(K + K / ln K)]` searched for the subgroup order.
pub fn step1_interval(k: u64) -> Result<(u64, u64)> {
    if k < 3 {
        return Err(Error::InvalidParameter(format!(
            "K = {k} must be at least 3"
        )));
    }
    let kf = k as f64;
    let hi = (kf + kf / kf.ln()).floor() as u64;
    Ok((k + 1, hi.max(k + 1)))
}

/// Rejection-samples a prime from the step-1 interval.
pub fn random_prime_in_step1_interval(k: u64, rng: &mut Rng) -> Result<u64> {
    let (lo, hi) = step1_interval(k)?;
    let ln = (k as f64).ln();
    let draws = (10.0 * ln * ln).ceil() as u64;
    for _ in 0..draws {
        let cand = rng.gen_range(lo..=hi);
        if is_prime(cand) {
            return Ok(cand);
        }
    }
    Err(Error::NoPrimeFound { lo, hi, draws })
}

/// Uniformly random integer in `[lo, hi]` with its factorization (Kalai's
/// method).
///
/// A descending chain `hi >= s1 >= s2 >= ... >= 1` is drawn, each term
/// uniform below the previous one. The product `r` of the prime terms is
/// uniform on `[1, hi]` after acceptance with probability `r / hi`; values
/// below `lo` are then rejected.
pub fn random_factored_integer(lo: u64, hi: u64, rng: &mut Rng) -> Result<FactoredInteger> {
    if lo < 2 || lo > hi {
        return Err(Error::InvalidParameter(format!(
            "need 2 <= lo <= hi, got [{lo}, {hi}]"
        )));
    }
    loop {
        let mut s = hi;
        let mut product = 1u64;
        let mut primes = Vec::new();
        let mut overflow = false;
        loop {
            s = rng.gen_range(1..=s);
            if s == 1 {
                break;
            }
            if is_prime(s) {
                match product.checked_mul(s) {
                    Some(r) if r <= hi => {
                        product = r;
                        primes.push(s);
                    }
                    _ => {
                        overflow = true;
                        break;
                    }
                }
            }
        }
        if overflow || rng.gen_range(1..=hi) > product || product < lo {
            continue;
        }
        return Ok(FactoredInteger::from_prime_multiset(primes));
    }
}

/// True iff `a^((q-1)/r) != 1` for every prime `r` dividing `q - 1`.
pub fn is_primitive_root(ctx: &FieldCtx, a: Elem, fact: &FactoredInteger) -> Result<bool> {
    if a == ctx.zero() {
        return Err(Error::ZeroElement);
    }
    check_group_order(ctx, fact)?;
    let n = ctx.q() - 1;
    Ok(fact
        .distinct_primes()
        .all(|r| ctx.pow(a, n / r) != ctx.one()))
}

/// Draws uniform elements of the multiplicative group until one generates it.
pub fn find_primitive_root(ctx: &FieldCtx, fact: &FactoredInteger, rng: &mut Rng) -> Result<Elem> {
    check_group_order(ctx, fact)?;
    loop {
        let a = ctx.elem_unchecked(rng.gen_range(1..ctx.q()));
        if is_primitive_root(ctx, a, fact)? {
            return Ok(a);
        }
    }
}

pub(crate) fn check_group_order(ctx: &FieldCtx, fact: &FactoredInteger) -> Result<()> {
    if fact.value != ctx.q() - 1 {
        return Err(Error::InvalidParameter(format!(
            "factorization of {} supplied for group of order {}",
            fact.value,
            ctx.q() - 1
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    fn trial_is_prime(n: u64) -> bool {
        n >= 2
            && (2..)
                .take_while(|d| d * d <= n)
                .all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn is_prime_examples() {
        assert!(is_prime(101));
        assert!(!is_prime(121));
        assert!(!is_prime(1));
        assert!(!is_prime(0));
        assert!(is_prime(2));
    }

    #[test]
    fn is_prime_matches_sieve_below_a_million() {
        const N: usize = 1_000_000;
        let mut composite = vec![false; N + 1];
        composite[0] = true;
        composite[1] = true;
        let mut i = 2;
        while i * i <= N {
            if !composite[i] {
                let mut j = i * i;
                while j <= N {
                    composite[j] = true;
                    j += i;
                }
            }
            i += 1;
        }
        for (n, &c) in composite.iter().enumerate() {
            assert_eq!(is_prime(n as u64), !c, "n = {n}");
        }
        // spot-check the sieve itself against trial division
        for n in (0..2000u64).chain(999_000..999_100) {
            assert_eq!(trial_is_prime(n), !composite[n as usize]);
        }
    }

    #[test]
    fn is_prime_large() {
        assert!(is_prime((1u64 << 61) - 1));
        assert!(!is_prime(((1u64 << 31) - 1) * ((1u64 << 31) - 1)));
        // strong pseudoprime to several small bases
        assert!(!is_prime(3_215_031_751));
        assert!(!is_prime(341_550_071_728_321));
    }

    #[test]
    fn factor_examples() {
        assert_eq!(factor(100).unwrap().factors, vec![(2, 2), (5, 2)]);
        assert_eq!(factor(101).unwrap().factors, vec![(101, 1)]);
        assert_eq!(factor(5_242_880).unwrap().factors, vec![(2, 20), (5, 1)]);
        let big = 1_000_000_007u64 * 998_244_353;
        assert_eq!(
            factor(big).unwrap().factors,
            vec![(998_244_353, 1), (1_000_000_007, 1)]
        );
        assert!(factor(1).is_err());
    }

    #[test]
    fn step1_interval_examples() {
        assert_eq!(step1_interval(4).unwrap(), (5, 6));
        assert_eq!(step1_interval(10).unwrap(), (11, 14));
        assert!(step1_interval(2).is_err());
        let mut r = rng::stream(7, 0);
        for _ in 0..50 {
            assert_eq!(random_prime_in_step1_interval(4, &mut r).unwrap(), 5);
            let l = random_prime_in_step1_interval(10, &mut r).unwrap();
            assert!(l == 11 || l == 13);
        }
    }

    #[test]
    fn step1_prime_free_interval() {
        // [8, floor(7 + 7/ln 7)] = [8, 10] holds no prime
        let mut r = rng::stream(1, 0);
        assert!(matches!(
            random_prime_in_step1_interval(7, &mut r),
            Err(Error::NoPrimeFound { lo: 8, hi: 10, .. })
        ));
    }

    #[test]
    fn kalai_singleton_and_invariants() {
        let mut r = rng::stream(3, 0);
        let f = random_factored_integer(7, 7, &mut r).unwrap();
        assert_eq!(f.value, 7);
        assert_eq!(f.factors, vec![(7, 1)]);
        for _ in 0..500 {
            let f = random_factored_integer(20, 40, &mut r).unwrap();
            assert!((20..=40).contains(&f.value));
            assert_eq!(f, factor(f.value).unwrap());
        }
        assert!(random_factored_integer(1, 5, &mut r).is_err());
        assert!(random_factored_integer(9, 5, &mut r).is_err());
    }

    #[test]
    fn primitive_root_examples() {
        let f101 = FieldCtx::prime(101).unwrap();
        let fact100 = factor(100).unwrap();
        assert!(is_primitive_root(&f101, f101.elem(2).unwrap(), &fact100).unwrap());
        let f7 = FieldCtx::prime(7).unwrap();
        let fact6 = factor(6).unwrap();
        assert!(!is_primitive_root(&f7, f7.elem(2).unwrap(), &fact6).unwrap());
        assert!(is_primitive_root(&f7, f7.elem(3).unwrap(), &fact6).unwrap());
        assert!(is_primitive_root(&f7, f7.zero(), &fact6).is_err());
        assert!(is_primitive_root(&f7, f7.one(), &fact100).is_err());

        let mut r = rng::stream(11, 0);
        for _ in 0..20 {
            let g = find_primitive_root(&f7, &fact6, &mut r).unwrap();
            assert!(g.value() == 3 || g.value() == 5);
            let g = find_primitive_root(&f101, &fact100, &mut r).unwrap();
            assert_eq!(f101.element_order(g, &fact100).unwrap(), 100);
        }
        let f3 = FieldCtx::prime(3).unwrap();
        let g = find_primitive_root(&f3, &factor(2).unwrap(), &mut r).unwrap();
        assert_eq!(g.value(), 2);
    }

    #[test]
    fn factored_integer_json() {
        let f = factor(36).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"value":36,"factors":[[2,2],[3,2]]}"#);
        let back: FactoredInteger = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        assert!(
            serde_json::from_str::<FactoredInteger>(r#"{"value":35,"factors":[[2,2],[3,2]]}"#)
                .is_err()
        );
        assert!(
            serde_json::from_str::<FactoredInteger>(r#"{"value":4,"factors":[[4,1]]}"#).is_err()
        );
    }
}
