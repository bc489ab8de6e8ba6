//! Integer helpers: valuations, multiplicative orders modulo `b`, and
//! factorization of group orders under an effort cap.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Effort cap for integer factorization.
///
/// Trial division runs over primes up to `trial_limit`; the remaining
/// cofactor is attacked with Brent's variant of Pollard rho for at most
/// `rho_iterations` steps per split. Anything left unsplit turns into
/// [`Error::OrderUnavailable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorBudget {
    pub trial_limit: u64,
    pub rho_iterations: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget {
            trial_limit: 1_000_000,
            rho_iterations: 2_000_000,
        }
    }
}

/// Factorization as sorted `(prime, exponent)` pairs.
pub type Factors = Vec<(BigUint, u32)>;

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        r
    };
    // These bases are deterministic for every 64-bit input.
    'outer: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Miller-Rabin with the first 20 primes as bases. Deterministic below
/// 3.3e24, a strong probable-prime test beyond that.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_even() {
        return false;
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'outer: for a in [
        2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
    ] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn primes_up_to(limit: u64) -> Vec<u64> {
    let limit = limit as usize;
    let mut sieve = vec![true; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if sieve[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                sieve[j] = false;
                j += i;
            }
        }
    }
    out
}

fn small_primes(limit: u64) -> std::borrow::Cow<'static, [u64]> {
    static DEFAULT: OnceLock<Vec<u64>> = OnceLock::new();
    if limit == FactorBudget::default().trial_limit {
        std::borrow::Cow::Borrowed(DEFAULT.get_or_init(|| primes_up_to(limit)).as_slice())
    } else {
        std::borrow::Cow::Owned(primes_up_to(limit))
    }
}

fn rho_split(n: &BigUint, seed: u64, max_iter: u64) -> Option<BigUint> {
    // Brent's cycle detection with batched gcds.
    let one = BigUint::one();
    let c = BigUint::from(seed);
    let f = |x: &BigUint| (x * x + &c) % n;
    let mut y = BigUint::from(2u32 + seed as u32);
    let mut r: u64 = 1;
    let mut q = BigUint::one();
    let mut g = BigUint::one();
    let mut x = y.clone();
    let mut ys = y.clone();
    let m: u64 = 128;
    let mut spent = 0u64;
    while g == one {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g == one {
            ys = y.clone();
            for _ in 0..m.min(r - k) {
                y = f(&y);
                let diff = if x > y { &x - &y } else { &y - &x };
                q = (q * diff) % n;
            }
            g = q.gcd(n);
            k += m;
            spent += m.min(r);
            if spent > max_iter {
                return None;
            }
        }
        r *= 2;
    }
    if &g == n {
        for _ in 0..max_iter {
            ys = f(&ys);
            let diff = if x > ys { &x - &ys } else { &ys - &x };
            g = diff.gcd(n);
            if g != one {
                break;
            }
        }
    }
    if &g == n || g == one {
        None
    } else {
        Some(g)
    }
}

fn split_cofactor(n: BigUint, budget: &FactorBudget, out: &mut Vec<BigUint>) -> Result<()> {
    if n.is_one() {
        return Ok(());
    }
    if is_probable_prime(&n) {
        out.push(n);
        return Ok(());
    }
    for seed in 1..=8u64 {
        if let Some(d) = rho_split(&n, seed, budget.rho_iterations) {
            let other = &n / &d;
            split_cofactor(d, budget, out)?;
            split_cofactor(other, budget, out)?;
            return Ok(());
        }
    }
    Err(Error::OrderUnavailable(format!(
        "could not split {n} within the factoring budget"
    )))
}

/// Full factorization of `n >= 1`.
pub fn factorize(n: &BigUint, budget: &FactorBudget) -> Result<Factors> {
    if n.is_zero() {
        return Err(Error::pre("cannot factor zero"));
    }
    let mut rest = n.clone();
    let mut primes: Vec<BigUint> = Vec::new();
    for &p in small_primes(budget.trial_limit).iter() {
        let pb = BigUint::from(p);
        if &pb * &pb > rest {
            break;
        }
        while (&rest % &pb).is_zero() {
            rest /= &pb;
            primes.push(pb.clone());
        }
    }
    if !rest.is_one() {
        split_cofactor(rest, budget, &mut primes)?;
    }
    primes.sort();
    let mut out: Factors = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    Ok(out)
}

/// Distinct prime factors of a machine integer by trial division.
/// Factorization of `b^e - 1` through its cyclotomic pieces
/// `Phi_d(b)`, `d | e`, which are far smaller than the whole number.
pub fn factorize_power_minus_one(b: &BigUint, e: u64, budget: &FactorBudget) -> Result<Factors> {
    if e == 0 || b <= &BigUint::one() {
        return Err(Error::pre("need b >= 2 and e >= 1"));
    }
    let mut primes: Vec<(BigUint, u32)> = Vec::new();
    for d in divisors_u64(e) {
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        for k in divisors_u64(d) {
            let term = b.pow(k as u32) - 1u32;
            match mobius(d / k) {
                1 => num *= term,
                -1 => den *= term,
                _ => {}
            }
        }
        primes.extend(factorize(&(num / den), budget)?);
    }
    primes.sort();
    let mut out: Factors = Vec::new();
    for (p, k) in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += k,
            _ => out.push((p, k)),
        }
    }
    Ok(out)
}

pub fn prime_factors_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn divisors_u64(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in prime_factors_u64(n) {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

pub fn euler_phi(n: u64) -> u64 {
    prime_factors_u64(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

pub fn mobius(n: u64) -> i64 {
    let f = prime_factors_u64(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The `r`-adic valuation of `m >= 1`.
pub fn nu(r: u64, m: &BigUint) -> Result<u32> {
    if !is_prime_u64(r) {
        return Err(Error::NotPrime(r));
    }
    if m.is_zero() {
        return Err(Error::pre("valuation of zero is undefined"));
    }
    let rb = BigUint::from(r);
    let mut m = m.clone();
    let mut e = 0;
    while (&m % &rb).is_zero() {
        m /= &rb;
        e += 1;
    }
    Ok(e)
}

pub fn nu_u64(r: u64, m: u64) -> Result<u32> {
    nu(r, &BigUint::from(m))
}

/// Least `d` with `order_of^d ≡ 1` inside a group of known exponent,
/// found by stripping prime factors from `group_order`.
pub(crate) fn reduce_order<F>(group_order: &BigUint, factors: &Factors, is_one: F) -> BigUint
where
    F: Fn(&BigUint) -> bool,
{
    let mut order = group_order.clone();
    for (p, e) in factors {
        for _ in 0..*e {
            let candidate = &order / p;
            if is_one(&candidate) {
                order = candidate;
            } else {
                break;
            }
        }
    }
    order
}

/// Multiplicative order of `a` modulo `b` (`b >= 1`, `gcd(a, b) = 1`).
pub fn ord_mod(b: &BigUint, a: &BigUint, budget: &FactorBudget) -> Result<BigUint> {
    if b.is_zero() {
        return Err(Error::pre("modulus must be positive"));
    }
    if !a.gcd(b).is_one() {
        return Err(Error::pre(format!("gcd({a}, {b}) != 1")));
    }
    if b.is_one() {
        return Ok(BigUint::one());
    }
    let a = a % b;
    // Small moduli: walk the powers directly.
    if let Some(bs) = b.to_u64() {
        if bs <= 1 << 20 {
            let a = a.to_u64().unwrap();
            let mut x = a % bs;
            let mut d = 1u64;
            while x != 1 {
                x = ((x as u128 * a as u128) % bs as u128) as u64;
                d += 1;
            }
            return Ok(BigUint::from(d));
        }
    }
    let b_factors = factorize(b, budget)?;
    let mut phi = BigUint::one();
    let mut phi_primes: Vec<BigUint> = Vec::new();
    for (p, e) in &b_factors {
        phi *= p.pow(e - 1) * (p - 1u32);
        if *e > 1 {
            phi_primes.push(p.clone());
        }
        for (r, _) in factorize(&(p - 1u32), budget)? {
            phi_primes.push(r);
        }
    }
    phi_primes.sort();
    phi_primes.dedup();
    let mut phi_factors: Factors = Vec::new();
    for r in phi_primes {
        let mut e = 0;
        let mut t = phi.clone();
        while (&t % &r).is_zero() {
            t /= &r;
            e += 1;
        }
        phi_factors.push((r, e));
    }
    Ok(reduce_order(&phi, &phi_factors, |d| a.modpow(d, b).is_one()))
}

pub fn ord_mod_u64(b: u64, a: u64) -> Result<u64> {
    ord_mod(&BigUint::from(b), &BigUint::from(a), &FactorBudget::default())
        .map(|d| d.to_u64().expect("order below modulus"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations() {
        assert_eq!(nu_u64(3, 63).unwrap(), 2);
        assert_eq!(nu_u64(2, 48).unwrap(), 4);
        assert_eq!(nu_u64(5, 7).unwrap(), 0);
        assert!(nu_u64(4, 16).is_err());
    }

    #[test]
    fn orders_mod_b() {
        assert_eq!(ord_mod_u64(3, 2).unwrap(), 2);
        assert_eq!(ord_mod_u64(7, 2).unwrap(), 3);
        for b in 2..40 {
            assert_eq!(ord_mod_u64(b, 1).unwrap(), 1);
        }
        assert!(ord_mod_u64(6, 4).is_err());
    }

    #[test]
    fn large_modulus_order_matches_definition() {
        // 2^36 - 1 exceeds the direct-walk threshold.
        let b = (BigUint::one() << 36u32) - 1u32;
        let d = ord_mod(&b, &BigUint::from(2u32), &FactorBudget::default()).unwrap();
        assert_eq!(d, BigUint::from(36u32));
        let b = BigUint::from(1_000_003u64 * 999_983);
        let d = ord_mod(&b, &BigUint::from(5u32), &FactorBudget::default()).unwrap();
        assert!(BigUint::from(5u32).modpow(&d, &b).is_one());
        for (p, _) in factorize(&d, &FactorBudget::default()).unwrap() {
            assert!(!BigUint::from(5u32).modpow(&(&d / &p), &b).is_one());
        }
    }

    #[test]
    fn cyclotomic_split_matches_direct() {
        let budget = FactorBudget::default();
        for (b, e) in [(2u32, 12u64), (5, 6), (3, 10), (2, 36)] {
            let b = BigUint::from(b);
            let n = b.pow(e as u32) - 1u32;
            let split = factorize_power_minus_one(&b, e, &budget).unwrap();
            assert_eq!(split, factorize(&n, &budget).unwrap());
        }
    }

    #[test]
    fn factorization_round_trips() {
        let n = (BigUint::one() << 108u32) - 1u32;
        let f = factorize(&n, &FactorBudget::default()).unwrap();
        let back = f
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e));
        assert_eq!(back, n);
        assert!(f.iter().all(|(p, _)| is_probable_prime(p)));
        // Semiprime with both factors above the trial-division limit.
        let n = BigUint::from(1_000_003u64) * BigUint::from(2_000_003u64);
        let f = factorize(&n, &FactorBudget::default()).unwrap();
        assert_eq!(f.len(), 2);
    }

    #[test]
    fn tiny_budget_signals_unavailable() {
        let n = BigUint::from(1_000_003u64) * BigUint::from(2_000_003u64);
        let budget = FactorBudget {
            trial_limit: 100,
            rho_iterations: 1,
        };
        assert!(matches!(
            factorize(&n, &budget),
            Err(Error::OrderUnavailable(_))
        ));
    }

    #[test]
    fn arithmetic_functions() {
        assert_eq!(euler_phi(6), 2);
        assert_eq!(euler_phi(3), 2);
        assert_eq!(mobius(1), 1);
        assert_eq!(mobius(4), 0);
        assert_eq!(mobius(6), 1);
        assert_eq!(mobius(3), -1);
        assert_eq!(divisors_u64(12), vec![1, 2, 3, 4, 6, 12]);
        assert!(is_prime_u64(1_000_003));
        assert!(!is_prime_u64(1_000_001));
    }
}
