//! Dense univariate polynomials over any [`FieldCtx`].

mod factor;
mod irreducible;
pub mod text;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement, Repr};

pub use factor::{factor, factor_with_rng, Factorization};
pub use irreducible::{
    count_irreducibles, enumerate_irreducibles, enumerate_monic, random_irreducible,
};
pub(crate) use irreducible::{count_irreducibles_q, monic_from_index};

/// Coefficients are stored low degree first with trailing zeros stripped,
/// so the zero polynomial has no coefficients and no degree.
#[derive(Clone)]
pub struct Poly {
    ctx: FieldCtx,
    coeffs: Vec<Repr>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.ctx == other.ctx
    }
}

impl Eq for Poly {}

impl std::hash::Hash for Poly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::format_poly(self))
    }
}

/// Canonical order: degree first, then coefficients from the top down.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs.len().cmp(&other.coeffs.len()).then_with(|| {
            for (a, b) in self.coeffs.iter().rev().zip(other.coeffs.iter().rev()) {
                match a.iter().rev().cmp(b.iter().rev()) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn strip(coeffs: &mut Vec<Repr>) {
    while coeffs.last().is_some_and(|c| FieldCtx::raw_is_zero(c)) {
        coeffs.pop();
    }
}

impl Poly {
    pub(crate) fn from_raw(ctx: FieldCtx, mut coeffs: Vec<Repr>) -> Poly {
        strip(&mut coeffs);
        Poly { ctx, coeffs }
    }

    /// Polynomial from coefficients, lowest degree first.
    pub fn new(ctx: FieldCtx, coeffs: Vec<FieldElement>) -> Result<Poly> {
        if coeffs.iter().any(|c| c.ctx() != &ctx) {
            return Err(Error::ContextMismatch);
        }
        Ok(Self::from_raw(
            ctx,
            coeffs.into_iter().map(|c| c.raw().clone()).collect(),
        ))
    }

    /// Integer coefficients (reduced mod p), lowest degree first.
    pub fn from_ints(ctx: &FieldCtx, coeffs: &[i64]) -> Poly {
        Self::from_raw(
            ctx.clone(),
            coeffs.iter().map(|&c| ctx.raw_from_int(c)).collect(),
        )
    }

    pub fn zero(ctx: &FieldCtx) -> Poly {
        Poly {
            ctx: ctx.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(ctx: &FieldCtx) -> Poly {
        Self::constant(&ctx.one())
    }

    pub fn x(ctx: &FieldCtx) -> Poly {
        Self::monomial(&ctx.one(), 1)
    }

    pub fn constant(c: &FieldElement) -> Poly {
        Self::from_raw(c.ctx().clone(), vec![c.raw().clone()])
    }

    /// `c * x^k`.
    pub fn monomial(c: &FieldElement, k: usize) -> Poly {
        let ctx = c.ctx();
        let mut coeffs = vec![ctx.raw_zero(); k + 1];
        coeffs[k] = c.raw().clone();
        Self::from_raw(ctx.clone(), coeffs)
    }

    /// `x - a`.
    pub fn linear_root(a: &FieldElement) -> Poly {
        let ctx = a.ctx();
        Self::from_raw(ctx.clone(), vec![ctx.raw_neg(a.raw()), ctx.raw_one()])
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub(crate) fn raw_coeffs(&self) -> &[Repr] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && FieldCtx::raw_is_one(&self.coeffs[0])
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        match self.coeffs.get(i) {
            Some(c) => FieldElement::from_parts(self.ctx.clone(), c.clone()),
            None => self.ctx.zero(),
        }
    }

    pub fn coeffs(&self) -> Vec<FieldElement> {
        self.coeffs
            .iter()
            .map(|c| FieldElement::from_parts(self.ctx.clone(), c.clone()))
            .collect()
    }

    pub fn leading(&self) -> Option<FieldElement> {
        self.coeffs
            .last()
            .map(|c| FieldElement::from_parts(self.ctx.clone(), c.clone()))
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| FieldCtx::raw_is_one(c))
    }

    /// Monic associate; the zero polynomial stays zero.
    pub fn monic(&self) -> Poly {
        match self.coeffs.last() {
            None => self.clone(),
            Some(lc) if FieldCtx::raw_is_one(lc) => self.clone(),
            Some(lc) => {
                let inv = self.ctx.raw_inv(lc).expect("nonzero leading coefficient");
                self.scale_raw(&inv)
            }
        }
    }

    fn same_ctx(&self, other: &Poly) -> Result<()> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.same_ctx(other)?;
        let (long, short) = if self.coeffs.len() >= other.coeffs.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            self.ctx.raw_add_assign(c, s);
        }
        Ok(Self::from_raw(self.ctx.clone(), coeffs))
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.same_ctx(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(&self.ctx));
        }
        let n = self.coeffs.len() + other.coeffs.len() - 1;
        if let Some(p) = self.ctx.prime_modulus() {
            let a: Vec<u64> = self.coeffs.iter().map(|c| c[0]).collect();
            let b: Vec<u64> = other.coeffs.iter().map(|c| c[0]).collect();
            let prod = mul_prime(&a, &b, p);
            return Ok(Self::from_raw(
                self.ctx.clone(),
                prod.into_iter().map(|d| Repr::from_elem(d, 1)).collect(),
            ));
        }
        let mut coeffs = vec![self.ctx.raw_zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if FieldCtx::raw_is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if FieldCtx::raw_is_zero(b) {
                    continue;
                }
                let t = self.ctx.raw_mul(a, b);
                self.ctx.raw_add_assign(&mut coeffs[i + j], &t);
            }
        }
        Ok(Self::from_raw(self.ctx.clone(), coeffs))
    }

    fn scale_raw(&self, c: &[u64]) -> Poly {
        Self::from_raw(
            self.ctx.clone(),
            self.coeffs.iter().map(|a| self.ctx.raw_mul(a, c)).collect(),
        )
    }

    pub fn scale(&self, c: &FieldElement) -> Result<Poly> {
        if c.ctx() != &self.ctx {
            return Err(Error::ContextMismatch);
        }
        Ok(self.scale_raw(c.raw()))
    }

    /// Quotient and remainder.
    pub fn divrem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.same_ctx(divisor)?;
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        if self.coeffs.len() <= dd {
            return Ok((Poly::zero(&self.ctx), self.clone()));
        }
        let lead_inv = self
            .ctx
            .raw_inv(&divisor.coeffs[dd])
            .ok_or(Error::DivisionByZero)?;
        if let Some(p) = self.ctx.prime_modulus() {
            let a: Vec<u64> = self.coeffs.iter().map(|c| c[0]).collect();
            let b: Vec<u64> = divisor.coeffs.iter().map(|c| c[0]).collect();
            let (q, r) = divrem_prime(a, &b, lead_inv[0], p);
            let wrap = |v: Vec<u64>| -> Vec<Repr> {
                v.into_iter().map(|d| Repr::from_elem(d, 1)).collect()
            };
            return Ok((
                Self::from_raw(self.ctx.clone(), wrap(q)),
                Self::from_raw(self.ctx.clone(), wrap(r)),
            ));
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![self.ctx.raw_zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let top = &rem[k + dd];
            if FieldCtx::raw_is_zero(top) {
                continue;
            }
            let c = self.ctx.raw_mul(top, &lead_inv);
            for (j, d) in divisor.coeffs.iter().enumerate() {
                let t = self.ctx.raw_mul(&c, d);
                self.ctx.raw_sub_assign(&mut rem[k + j], &t);
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((
            Self::from_raw(self.ctx.clone(), quot),
            Self::from_raw(self.ctx.clone(), rem),
        ))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly> {
        self.divrem(divisor).map(|(_, r)| r)
    }

    /// Exact division; errors when the remainder is nonzero.
    pub fn div_exact(&self, divisor: &Poly) -> Result<Poly> {
        let (q, r) = self.divrem(divisor)?;
        if !r.is_zero() {
            return Err(Error::pre(format!("{divisor} does not divide {self}")));
        }
        Ok(q)
    }

    pub fn divides(&self, other: &Poly) -> Result<bool> {
        Ok(other.rem(self)?.is_zero())
    }

    /// Monic gcd (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        self.same_ctx(other)?;
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// `(g, s, t)` with `s*self + t*other = g`, `g` the monic gcd.
    pub fn xgcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let ctx = &self.ctx;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(ctx), Poly::zero(ctx));
        let (mut t0, mut t1) = (Poly::zero(ctx), Poly::one(ctx));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).expect("nonzero divisor");
            r0 = std::mem::replace(&mut r1, r);
            let s = &s0 - &(&q * &s1);
            s0 = std::mem::replace(&mut s1, s);
            let t = &t0 - &(&q * &t1);
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.leading() {
            None => (r0, s0, t0),
            Some(lc) => {
                let inv = lc.inv().expect("nonzero");
                (
                    r0.scale_raw(inv.raw()),
                    s0.scale_raw(inv.raw()),
                    t0.scale_raw(inv.raw()),
                )
            }
        }
    }

    pub fn derivative(&self) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| self.ctx.raw_mul(c, &self.ctx.raw_from_int(i as i64)))
            .collect();
        Self::from_raw(self.ctx.clone(), coeffs)
    }

    /// Horner evaluation at an element of the coefficient field.
    pub fn eval(&self, x: &FieldElement) -> Result<FieldElement> {
        if x.ctx() != &self.ctx {
            return Err(Error::ContextMismatch);
        }
        let mut acc = self.ctx.raw_zero();
        for c in self.coeffs.iter().rev() {
            acc = self.ctx.raw_mul(&acc, x.raw());
            self.ctx.raw_add_assign(&mut acc, c);
        }
        Ok(FieldElement::from_parts(self.ctx.clone(), acc))
    }

    /// Evaluation at an element of an extension of the coefficient field.
    pub fn eval_in(&self, x: &FieldElement) -> Result<FieldElement> {
        self.embed_into(x.ctx())?.eval(x)
    }

    /// `self(inner)`.
    pub fn compose(&self, inner: &Poly) -> Result<Poly> {
        self.same_ctx(inner)?;
        let mut acc = Poly::zero(&self.ctx);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Self::from_raw(self.ctx.clone(), vec![c.clone()]);
        }
        Ok(acc)
    }

    /// `self(inner) mod modulus`.
    pub fn compose_mod(&self, inner: &Poly, modulus: &Poly) -> Result<Poly> {
        self.same_ctx(inner)?;
        let inner = inner.rem(modulus)?;
        let mut acc = Poly::zero(&self.ctx);
        for c in self.coeffs.iter().rev() {
            acc = (&(&acc * &inner) + &Self::from_raw(self.ctx.clone(), vec![c.clone()]))
                .rem(modulus)?;
        }
        Ok(acc)
    }

    /// `den^n * self(num / den)` for `n >= deg(self)`: the sum of
    /// `a_j num^j den^(n-j)`, evaluated by Horner's rule.
    pub fn homogenize(&self, num: &Poly, den: &Poly, n: usize) -> Result<Poly> {
        self.same_ctx(num)?;
        self.same_ctx(den)?;
        let Some(deg) = self.degree() else {
            return Ok(Poly::zero(&self.ctx));
        };
        if n < deg {
            return Err(Error::pre("homogenizing degree below polynomial degree"));
        }
        let mut den_pows = vec![Poly::one(&self.ctx)];
        for i in 1..=n {
            let next = &den_pows[i - 1] * den;
            den_pows.push(next);
        }
        let mut acc = den_pows[n - deg].scale(&self.coeff(deg))?;
        for j in (0..deg).rev() {
            acc = &acc * num;
            if !FieldCtx::raw_is_zero(&self.coeffs[j]) {
                acc = &acc + &den_pows[n - j].scale(&self.coeff(j))?;
            }
        }
        Ok(acc)
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.ctx);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self^e mod modulus`.
    pub fn powmod(&self, e: &BigUint, modulus: &Poly) -> Result<Poly> {
        let base = self.rem(modulus)?;
        let mut acc = Poly::one(&self.ctx).rem(modulus)?;
        for i in (0..e.bits()).rev() {
            acc = (&acc * &acc).rem(modulus)?;
            if e.bit(i) {
                acc = (&acc * &base).rem(modulus)?;
            }
        }
        Ok(acc)
    }

    /// `self^(q^k) mod modulus` with `q` the field size, as `k` successive
    /// `q`-th powers.
    pub fn powmod_frobenius(&self, k: usize, modulus: &Poly) -> Result<Poly> {
        let q = self.ctx.cardinality();
        let mut acc = self.rem(modulus)?;
        for _ in 0..k {
            acc = acc.powmod(&q, modulus)?;
        }
        Ok(acc)
    }

    /// Map coefficients into a field having `self.ctx()` in its base chain.
    pub fn embed_into(&self, target: &FieldCtx) -> Result<Poly> {
        if target == &self.ctx {
            return Ok(self.clone());
        }
        let coeffs = self
            .coeffs()
            .iter()
            .map(|c| c.embed_into(target).map(|e| e.raw().clone()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_raw(target.clone(), coeffs))
    }

    /// Coerce coefficients down into `sub`; each must be fixed by the
    /// Frobenius of `sub`.
    pub fn descend_to(&self, sub: &FieldCtx) -> Result<Poly> {
        if sub == &self.ctx {
            return Ok(self.clone());
        }
        let coeffs = self
            .coeffs()
            .iter()
            .map(|c| c.descend_to(sub).map(|e| e.raw().clone()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_raw(sub.clone(), coeffs))
    }

    /// Apply a coefficient map `a -> a^(|sub|^k)`.
    pub fn frobenius_twist(&self, sub: &FieldCtx, k: usize) -> Result<Poly> {
        let step = sub.degree_over_prime();
        if self.ctx.degree_over(sub).is_none() {
            return Err(Error::ContextMismatch);
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| self.ctx.raw_frobenius_pow(c, step * k))
            .collect();
        Ok(Self::from_raw(self.ctx.clone(), coeffs))
    }

    /// Integer digits of a prime-field polynomial, lowest degree first.
    pub fn to_ints(&self) -> Option<Vec<u64>> {
        self.ctx.prime_modulus()?;
        Some(self.coeffs.iter().map(|c| c[0]).collect())
    }
}

fn mul_prime(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len() + b.len() - 1;
    let mut out = vec![0u64; n];
    if p == 2 {
        // Pack into machine words for characteristic two.
        let pack = |v: &[u64]| {
            let mut w = vec![0u64; v.len().div_ceil(64)];
            for (i, &d) in v.iter().enumerate() {
                w[i / 64] |= d << (i % 64);
            }
            w
        };
        let pb = pack(b);
        let mut acc = vec![0u64; n.div_ceil(64) + 1];
        for (i, &d) in a.iter().enumerate() {
            if d == 0 {
                continue;
            }
            let (word, bit) = (i / 64, i % 64);
            for (j, &w) in pb.iter().enumerate() {
                acc[word + j] ^= w << bit;
                if bit > 0 {
                    acc[word + j + 1] ^= w >> (64 - bit);
                }
            }
        }
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = (acc[i / 64] >> (i % 64)) & 1;
        }
        return out;
    }
    let limit = u128::MAX - (p as u128) * (p as u128);
    let mut acc = vec![0u128; n];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let slot = &mut acc[i + j];
            *slot += x as u128 * y as u128;
            if *slot >= limit {
                *slot %= p as u128;
            }
        }
    }
    for (o, s) in out.iter_mut().zip(acc) {
        *o = (s % p as u128) as u64;
    }
    out
}

fn divrem_prime(mut rem: Vec<u64>, b: &[u64], lead_inv: u64, p: u64) -> (Vec<u64>, Vec<u64>) {
    let dd = b.len() - 1;
    let mut quot = vec![0u64; rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let top = rem[k + dd];
        if top == 0 {
            continue;
        }
        let c = ((top as u128 * lead_inv as u128) % p as u128) as u64;
        for (j, &d) in b.iter().enumerate() {
            if d == 0 {
                continue;
            }
            let t = ((c as u128 * d as u128) % p as u128) as u64;
            let slot = &mut rem[k + j];
            *slot = if *slot >= t { *slot - t } else { *slot + p - t };
        }
        quot[k] = c;
    }
    rem.truncate(dd);
    (quot, rem)
}

macro_rules! poly_binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl<'a> $tr<&'a Poly> for &'a Poly {
            type Output = Poly;
            fn $m(self, rhs: &'a Poly) -> Poly {
                self.$checked(rhs).expect(concat!("polynomial ", stringify!($m)))
            }
        }
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}

poly_binop!(Add, add, checked_add);
poly_binop!(Sub, sub, checked_sub);
poly_binop!(Mul, mul, checked_mul);

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::from_raw(
            self.ctx.clone(),
            self.coeffs.iter().map(|c| self.ctx.raw_neg(c)).collect(),
        )
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}
