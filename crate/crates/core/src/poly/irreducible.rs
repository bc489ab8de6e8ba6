use num_bigint::{BigInt, BigUint};
use num_traits::Signed;
use rand::Rng;

use super::Poly;
use crate::error::{Error, Result};
use crate::field::numtheory::{divisors_u64, mobius, prime_factors_u64};
use crate::field::FieldCtx;

impl Poly {
    /// Rabin's test: `x^(q^n) = x mod f` and `gcd(x^(q^(n/r)) - x, f) = 1`
    /// for every prime `r | n`. Frobenius powers are chained one `q`-th
    /// power at a time.
    pub fn is_irreducible(&self) -> Result<bool> {
        let n = match self.degree() {
            None | Some(0) => {
                return Err(Error::pre("irreducibility of a constant is undefined"))
            }
            Some(n) => n,
        };
        if n == 1 {
            return Ok(true);
        }
        let f = self.monic();
        let x = Poly::x(self.ctx());
        let q = self.ctx().cardinality();
        let maximal: Vec<usize> = prime_factors_u64(n as u64)
            .into_iter()
            .map(|(r, _)| n / r as usize)
            .collect();
        let mut frob = x.clone();
        for k in 1..=n {
            frob = frob.powmod(&q, &f)?;
            if k < n && maximal.contains(&k) {
                let g = (&frob - &x).gcd(&f)?;
                if !g.is_one() {
                    return Ok(false);
                }
            }
        }
        Ok(frob == x.rem(&f)?)
    }
}

/// The `index`-th monic polynomial of degree `n` in canonical order.
pub(crate) fn monic_from_index(ctx: &FieldCtx, n: usize, mut index: u64, q: u64) -> Poly {
    let mut coeffs = Vec::with_capacity(n + 1);
    for _ in 0..n {
        coeffs.push(ctx.element_from_index(index % q));
        index /= q;
    }
    coeffs.push(ctx.one());
    Poly::new(ctx.clone(), coeffs).expect("same field")
}

/// Every monic polynomial of degree `n`, `q^n` of them.
pub fn enumerate_monic(ctx: &FieldCtx, n: usize) -> Result<impl Iterator<Item = Poly> + '_> {
    let q = ctx
        .cardinality_u64()
        .ok_or_else(|| Error::pre("field too large to enumerate"))?;
    let total = (q as u128)
        .checked_pow(n as u32)
        .filter(|&t| t <= u64::MAX as u128)
        .ok_or_else(|| Error::pre("enumeration count overflows"))? as u64;
    Ok((0..total).map(move |i| monic_from_index(ctx, n, i, q)))
}

/// All monic irreducibles of degree `n`, sorted canonically.
pub fn enumerate_irreducibles(ctx: &FieldCtx, n: usize) -> Result<Vec<Poly>> {
    if n == 0 {
        return Err(Error::pre("degree must be positive"));
    }
    let mut out = Vec::new();
    for f in enumerate_monic(ctx, n)? {
        if f.is_irreducible()? {
            out.push(f);
        }
    }
    out.sort();
    Ok(out)
}

/// Random monic irreducible of degree `n` by rejection sampling.
pub fn random_irreducible<R: Rng + ?Sized>(ctx: &FieldCtx, n: usize, rng: &mut R) -> Result<Poly> {
    if n == 0 {
        return Err(Error::pre("degree must be positive"));
    }
    // Success probability is about 1/n per draw.
    let cap = 200 * n as u64 + 1000;
    for _ in 0..cap {
        let mut coeffs: Vec<_> = (0..n).map(|_| ctx.random_element(rng)).collect();
        coeffs.push(ctx.one());
        let f = Poly::new(ctx.clone(), coeffs)?;
        if f.is_irreducible()? {
            return Ok(f);
        }
    }
    Err(Error::TrialsExhausted { trials: cap })
}

/// `|I_n| = (1/n) * sum_{d | n} mu(d) q^(n/d)`.
pub fn count_irreducibles(ctx: &FieldCtx, n: usize) -> BigUint {
    count_irreducibles_q(&ctx.cardinality(), n as u64)
}

pub(crate) fn count_irreducibles_q(q: &BigUint, n: u64) -> BigUint {
    assert!(n >= 1, "degree must be positive");
    let q = BigInt::from(q.clone());
    let mut sum = BigInt::from(0);
    for d in divisors_u64(n) {
        let mu = mobius(d);
        if mu != 0 {
            sum += q.pow((n / d) as u32) * mu;
        }
    }
    debug_assert!(!sum.is_negative());
    let count = sum / BigInt::from(n);
    count.to_biguint().expect("non-negative count")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(ctx: &FieldCtx, c: &[i64]) -> Poly {
        Poly::from_ints(ctx, c)
    }

    #[test]
    fn known_irreducibles() {
        let f2 = FieldCtx::prime(2).unwrap();
        assert!(p(&f2, &[1, 1, 0, 0, 1]).is_irreducible().unwrap());
        assert!(!p(&f2, &[1, 0, 1]).is_irreducible().unwrap());
        // x^12 + x^11 + x^10 + x^9 + x^8 + x^6 + x^4 + x + 1
        let f1 = p(&f2, &[1, 1, 0, 0, 1, 0, 1, 0, 1, 1, 1, 1, 1]);
        assert!(f1.is_irreducible().unwrap());
        assert!(Poly::one(&f2).is_irreducible().is_err());
        assert!(Poly::zero(&f2).is_irreducible().is_err());
    }

    #[test]
    fn counts() {
        let f2 = FieldCtx::prime(2).unwrap();
        assert_eq!(count_irreducibles(&f2, 4), BigUint::from(3u32));
        assert_eq!(count_irreducibles(&f2, 3), BigUint::from(2u32));
        assert_eq!(count_irreducibles(&f2, 12), BigUint::from(335u32));
    }

    #[test]
    fn quartic_irreducibles_over_f2() {
        let f2 = FieldCtx::prime(2).unwrap();
        let all = enumerate_irreducibles(&f2, 4).unwrap();
        let expected = vec![
            p(&f2, &[1, 1, 0, 0, 1]),
            p(&f2, &[1, 0, 0, 1, 1]),
            p(&f2, &[1, 1, 1, 1, 1]),
        ];
        assert_eq!(all, expected);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let f = random_irreducible(&f2, 4, &mut rng).unwrap();
            assert!(expected.contains(&f));
        }
        for _ in 0..5 {
            let f = random_irreducible(&f2, 1, &mut rng).unwrap();
            assert!(f == p(&f2, &[0, 1]) || f == p(&f2, &[1, 1]));
        }
    }

    #[test]
    fn random_irreducible_is_reproducible() {
        let f5 = FieldCtx::prime(5).unwrap();
        let a = random_irreducible(&f5, 3, &mut ChaCha8Rng::seed_from_u64(11)).unwrap();
        let b = random_irreducible(&f5, 3, &mut ChaCha8Rng::seed_from_u64(11)).unwrap();
        assert_eq!(a, b);
        assert!(a.is_irreducible().unwrap());
        assert_eq!(a.degree(), Some(3));
    }
}
