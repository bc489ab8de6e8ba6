use num_integer::Integer;
use rayon::prelude::*;

use super::RationalMap;
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement};
use crate::poly::{factor, Factorization, Poly};

/// `s(f)`: lcm of the degrees of the coefficients of `f` over `base`.
pub fn spin_length(f: &Poly, base: &FieldCtx) -> Result<usize> {
    let mut s = 1;
    for c in f.coeffs() {
        if !c.is_zero() {
            s = s.lcm(&c.degree_over(base)?);
        }
    }
    Ok(s)
}

/// `S_f = prod_{i < s(f)} f^{(i)}`, the product of the Frobenius twists of
/// `f` over `base`, returned with coefficients in `base`. A leading
/// coefficient `lambda` contributes its norm, as the product already shows.
pub fn spin(f: &Poly, base: &FieldCtx) -> Result<Poly> {
    let s = spin_length(f, base)?;
    let mut acc = f.clone();
    for i in 1..s {
        acc = &acc * &f.frobenius_twist(base, i)?;
    }
    acc.descend_to(base)
        .map_err(|e| Error::internal(format!("spin left the base field: {e}")))
}

/// Factor `f^Q` for irreducible `f` by factoring `g - alpha h` over
/// `F_q(alpha)` and spinning each factor back down.
pub fn factor_via_spins(f: &Poly, q: &RationalMap) -> Result<Factorization> {
    let ctx = f.ctx();
    if q.num().ctx() != ctx {
        return Err(Error::ContextMismatch);
    }
    let n = match f.degree() {
        Some(n) if n >= 1 => n,
        _ => return Err(Error::pre("spin factorization needs positive degree")),
    };
    let lambda = f.leading().expect("nonzero");
    let monic = f.monic();
    if n == 1 {
        let alpha = -&monic.coeff(0);
        let fa = q.num() - &q.den().scale(&alpha)?;
        let mut fac = factor(&fa)?;
        fac.unit = &fac.unit * &lambda;
        return Ok(fac);
    }
    let big = FieldCtx::extend(ctx, &monic)?;
    let alpha = big.generator().expect("extension");
    let g = q.num().embed_into(&big)?;
    let h = q.den().embed_into(&big)?;
    let fa = &g - &h.scale(&alpha)?;
    let fac = factor(&fa)?;
    // f^Q = lambda * prod_i twist_i(g - alpha h); the twisted unit
    // contributes its norm.
    let mut unit = lambda;
    let mut u = fac.unit.clone();
    let mut norm = big.one();
    for _ in 0..n {
        norm = &norm * &u;
        u = u.frobenius_over(ctx)?;
    }
    unit = &unit * &norm.descend_to(ctx)?;
    let spins: Result<Vec<(Poly, usize)>> = fac
        .factors
        .par_iter()
        .map(|(r, m)| {
            let s = spin_length(r, ctx)?;
            Ok((spin(r, ctx)?, m * n / s))
        })
        .collect();
    let mut list: Vec<Poly> = Vec::new();
    for (s, m) in spins? {
        list.extend(std::iter::repeat_n(s, m));
    }
    Ok(Factorization::from_factors(unit, list))
}

/// Minimal polynomial of `a` over `base`: the spin of `x - a`.
pub fn minimal_polynomial(a: &FieldElement, base: &FieldCtx) -> Result<Poly> {
    spin(&Poly::linear_root(a), base)
}
