//! Complete factorization: square-free decomposition, distinct-degree
//! splitting, then Cantor-Zassenhaus equal-degree splitting (power split in
//! odd characteristic, trace split in characteristic two).

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Poly;
use crate::error::{Error, Result};
use crate::field::{big_pow, FieldElement};

/// `unit * prod(factor^multiplicity)` with monic irreducible factors kept in
/// canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: FieldElement,
    pub factors: Vec<(Poly, usize)>,
}

impl Factorization {
    pub fn product(&self) -> Poly {
        let mut acc = Poly::constant(&self.unit);
        for (f, m) in &self.factors {
            acc = &acc * &f.pow(*m as u64);
        }
        acc
    }

    /// Number of irreducible factors counted with multiplicity.
    pub fn count(&self) -> usize {
        self.factors.iter().map(|(_, m)| m).sum()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, m)| m == 1)
    }

    /// Factor degrees with multiplicity, ascending.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self
            .factors
            .iter()
            .flat_map(|(f, m)| std::iter::repeat_n(f.degree().unwrap_or(0), *m))
            .collect();
        d.sort_unstable();
        d
    }

    /// Build from an unsorted list of monic irreducible factors, merging
    /// repeats.
    pub fn from_factors(unit: FieldElement, mut list: Vec<Poly>) -> Factorization {
        list.sort();
        let mut factors: Vec<(Poly, usize)> = Vec::new();
        for f in list {
            match factors.last_mut() {
                Some((g, m)) if *g == f => *m += 1,
                _ => factors.push((f, 1)),
            }
        }
        Factorization { unit, factors }
    }
}

/// Factor with a fixed internal seed, so results are reproducible.
pub fn factor(f: &Poly) -> Result<Factorization> {
    factor_with_rng(f, &mut ChaCha8Rng::seed_from_u64(0x5eed))
}

pub fn factor_with_rng<R: Rng + ?Sized>(f: &Poly, rng: &mut R) -> Result<Factorization> {
    let unit = f
        .leading()
        .ok_or_else(|| Error::pre("cannot factor the zero polynomial"))?;
    let mut list = Vec::new();
    if f.degree() == Some(0) {
        return Ok(Factorization {
            unit,
            factors: Vec::new(),
        });
    }
    for (sqf, mult) in squarefree_decomposition(&f.monic())? {
        for (part, d) in distinct_degree(&sqf)? {
            for g in equal_degree(&part, d, rng)? {
                list.extend(std::iter::repeat_n(g, mult));
            }
        }
    }
    Ok(Factorization::from_factors(unit, list))
}

/// `(g_i, i)` with `f = prod g_i^i`, each `g_i` square-free and monic.
pub(crate) fn squarefree_decomposition(f: &Poly) -> Result<Vec<(Poly, usize)>> {
    let ctx = f.ctx().clone();
    let p = ctx.characteristic() as usize;
    let mut out = Vec::new();
    let mut c = f.gcd(&f.derivative())?;
    let mut w = f.div_exact(&c)?;
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c)?;
        let z = w.div_exact(&y)?;
        if !z.is_one() {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.div_exact(&w)?;
    }
    if !c.is_one() {
        // What remains is a p-th power: take the root coefficientwise.
        let deg = c.degree().expect("nonzero");
        let k = ctx.degree_over_prime();
        let root_coeffs: Vec<FieldElement> = (0..=deg / p)
            .map(|j| {
                let a = c.coeff(j * p);
                // a^(p^(k-1)) is the unique p-th root in F_{p^k}.
                a.pow_tower(&BigUint::from(p as u64), k - 1)
            })
            .collect();
        let root = Poly::new(ctx, root_coeffs)?;
        for (g, m) in squarefree_decomposition(&root)? {
            out.push((g, m * p));
        }
    }
    Ok(out)
}

/// Split a square-free monic `f` into products of irreducibles of equal
/// degree, returned as `(product, degree)`.
pub(crate) fn distinct_degree(f: &Poly) -> Result<Vec<(Poly, usize)>> {
    let mut out = Vec::new();
    let x = Poly::x(f.ctx());
    let q = f.ctx().cardinality();
    let mut rest = f.clone();
    let mut h = x.rem(&rest)?;
    let mut i = 0;
    while let Some(deg) = rest.degree() {
        if deg < 2 * (i + 1) {
            break;
        }
        i += 1;
        h = h.powmod(&q, &rest)?;
        let g = (&h - &x).gcd(&rest)?;
        if !g.is_one() {
            rest = rest.div_exact(&g)?;
            h = h.rem(&rest)?;
            out.push((g, i));
        }
    }
    if let Some(deg) = rest.degree() {
        if deg > 0 {
            out.push((rest, deg));
        }
    }
    Ok(out)
}

/// Split a monic square-free product of degree-`d` irreducibles.
pub(crate) fn equal_degree<R: Rng + ?Sized>(f: &Poly, d: usize, rng: &mut R) -> Result<Vec<Poly>> {
    let n = f.degree().expect("nonzero");
    if n == d {
        return Ok(vec![f.clone()]);
    }
    let ctx = f.ctx().clone();
    let q = ctx.cardinality();
    let qd = big_pow(&q, d);
    let odd = ctx.characteristic() != 2;
    let exponent = (&qd - 1u32) >> 1;
    let trace_len = ctx.degree_over_prime() * d;
    loop {
        let coeffs: Vec<_> = (0..n).map(|_| ctx.random_element(rng)).collect();
        let a = Poly::new(ctx.clone(), coeffs)?;
        if a.degree().is_none_or(|k| k == 0) {
            continue;
        }
        let candidate = if odd {
            &a.powmod(&exponent, f)? - &Poly::one(&ctx)
        } else {
            // Absolute trace a + a^2 + ... + a^(2^(kd-1)) mod f.
            let mut t = a.rem(f)?;
            let mut acc = t.clone();
            for _ in 1..trace_len {
                t = (&t * &t).rem(f)?;
                acc = &acc + &t;
            }
            acc
        };
        let g = candidate.gcd(f)?;
        let gd = g.degree().unwrap_or(0);
        if gd > 0 && gd < n {
            let mut left = equal_degree(&g, d, rng)?;
            left.extend(equal_degree(&f.div_exact(&g)?, d, rng)?);
            return Ok(left);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldCtx;

    fn p(ctx: &crate::field::FieldCtx, c: &[i64]) -> Poly {
        Poly::from_ints(ctx, c)
    }

    #[test]
    fn small_factorizations() {
        let f2 = FieldCtx::prime(2).unwrap();
        let fac = factor(&p(&f2, &[0, 1, 1])).unwrap();
        assert_eq!(fac.factors, vec![(p(&f2, &[0, 1]), 1), (p(&f2, &[1, 1]), 1)]);
        let a = p(&f2, &[1, 1, 0, 1]);
        let b = p(&f2, &[1, 0, 1, 1]);
        let fac = factor(&(&a * &b)).unwrap();
        assert_eq!(fac.factors, vec![(a, 1), (b, 1)]);
    }

    #[test]
    fn repeated_and_pth_power_factors() {
        let f3 = FieldCtx::prime(3).unwrap();
        let a = p(&f3, &[1, 1]);
        let b = p(&f3, &[1, 0, 1]);
        // a^3 has vanishing derivative; b^2 is an ordinary repeat.
        let f = (&a.pow(3) * &b.pow(2)).scale(&f3.from_int(2)).unwrap();
        let fac = factor(&f).unwrap();
        assert_eq!(fac.unit, f3.from_int(2));
        assert_eq!(fac.factors, vec![(a, 3), (b, 2)]);
        assert_eq!(fac.product(), f);
    }

    #[test]
    fn factors_over_extension_field() {
        // x^2 + x + 1 splits over F_4.
        let f2 = FieldCtx::prime(2).unwrap();
        let f4 = FieldCtx::extend(&f2, &p(&f2, &[1, 1, 1])).unwrap();
        let g = p(&f2, &[1, 1, 1]).embed_into(&f4).unwrap();
        let fac = factor(&g).unwrap();
        assert_eq!(fac.degrees(), vec![1, 1]);
        assert_eq!(fac.product(), g);
        // Over F_25 = F_5[t]/(t^2 - t - 3), x^4 - 3 factors into linears or quadratics.
        let f5 = FieldCtx::prime(5).unwrap();
        let f25 = FieldCtx::extend(&f5, &p(&f5, &[-3, -1, 1])).unwrap();
        let h = p(&f5, &[2, 0, 0, 0, 1]).embed_into(&f25).unwrap();
        let fac = factor(&h).unwrap();
        assert_eq!(fac.product(), h);
        assert!(fac.factors.iter().all(|(f, _)| f.is_irreducible().unwrap()));
    }
}
