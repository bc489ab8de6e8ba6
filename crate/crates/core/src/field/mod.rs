//! Finite fields built one extension step at a time.
//!
//! A [`FieldCtx`] is either a prime field `F_p` or a quotient `K[y]/(m(y))`
//! of a previously built field `K` by a monic irreducible `m`. Elements of an
//! extension are stored flattened: `deg(m)` consecutive blocks, each block
//! the representation of a coefficient in `K`. The flattened length equals
//! the degree over the prime field.

mod element;
pub mod numtheory;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::Rng;
use smallvec::{smallvec, SmallVec};

use crate::error::{Error, Result};
use crate::poly::Poly;

pub use element::FieldElement;
pub use numtheory::FactorBudget;

/// Raw flattened element representation.
pub(crate) type Repr = SmallVec<[u64; 2]>;

#[derive(Clone)]
pub struct FieldCtx(Arc<Inner>);

struct Inner {
    p: u64,
    degree: usize,
    kind: Kind,
}

enum Kind {
    Prime,
    Extension {
        base: FieldCtx,
        /// Monic modulus, coefficients low to high in base representation.
        modulus: Vec<Repr>,
    },
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        if self.0.p != other.0.p || self.0.degree != other.0.degree {
            return false;
        }
        match (&self.0.kind, &other.0.kind) {
            (Kind::Prime, Kind::Prime) => true,
            (
                Kind::Extension { base: b1, modulus: m1 },
                Kind::Extension { base: b2, modulus: m2 },
            ) => m1 == m2 && b1 == b2,
            _ => false,
        }
    }
}

impl Eq for FieldCtx {}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.kind {
            Kind::Prime => write!(f, "F_{}", self.0.p),
            Kind::Extension { base, .. } => {
                write!(f, "{:?}[y]/({})", base, self.modulus().expect("extension"))
            }
        }
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> Option<u64> {
    if a == 0 {
        return None;
    }
    let (mut old_r, mut r) = (a as i128, p as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    Some(old_s.rem_euclid(p as i128) as u64)
}

impl FieldCtx {
    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<FieldCtx> {
        if !numtheory::is_prime_u64(p) || p >= 1 << 62 {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldCtx(Arc::new(Inner {
            p,
            degree: 1,
            kind: Kind::Prime,
        })))
    }

    /// `base[y]/(modulus)`. The modulus must be monic, of degree at least two
    /// and irreducible over `base`.
    pub fn extend(base: &FieldCtx, modulus: &Poly) -> Result<FieldCtx> {
        if modulus.ctx() != base {
            return Err(Error::ContextMismatch);
        }
        let deg = modulus
            .degree()
            .ok_or_else(|| Error::InvalidModulus("zero polynomial".into()))?;
        if deg < 2 {
            return Err(Error::InvalidModulus(format!(
                "degree {deg} modulus gives no proper extension"
            )));
        }
        if !modulus.is_monic() {
            return Err(Error::InvalidModulus(format!("{modulus} is not monic")));
        }
        if !modulus.is_irreducible()? {
            return Err(Error::InvalidModulus(format!(
                "{modulus} is reducible over {base:?}"
            )));
        }
        Ok(Self::extend_unchecked(base, modulus))
    }

    /// Same as [`FieldCtx::extend`] without the irreducibility test; the
    /// caller vouches for the modulus.
    pub(crate) fn extend_unchecked(base: &FieldCtx, modulus: &Poly) -> FieldCtx {
        let deg = modulus.degree().expect("nonzero modulus");
        FieldCtx(Arc::new(Inner {
            p: base.0.p,
            degree: base.0.degree * deg,
            kind: Kind::Extension {
                base: base.clone(),
                modulus: modulus.raw_coeffs().to_vec(),
            },
        }))
    }

    pub fn characteristic(&self) -> u64 {
        self.0.p
    }

    pub fn degree_over_prime(&self) -> usize {
        self.0.degree
    }

    pub fn cardinality(&self) -> BigUint {
        BigUint::from(self.0.p).pow(self.0.degree as u32)
    }

    /// Cardinality when it fits in a machine word.
    pub fn cardinality_u64(&self) -> Option<u64> {
        self.cardinality().to_u64()
    }

    pub fn is_prime_field(&self) -> bool {
        matches!(self.0.kind, Kind::Prime)
    }

    /// The immediate base of an extension.
    pub fn base(&self) -> Option<&FieldCtx> {
        match &self.0.kind {
            Kind::Prime => None,
            Kind::Extension { base, .. } => Some(base),
        }
    }

    pub fn modulus(&self) -> Option<Poly> {
        match &self.0.kind {
            Kind::Prime => None,
            Kind::Extension { base, modulus } => {
                Some(Poly::from_raw(base.clone(), modulus.clone()))
            }
        }
    }

    /// Degree over the immediate base (1 for a prime field).
    pub fn ext_degree(&self) -> usize {
        match &self.0.kind {
            Kind::Prime => 1,
            Kind::Extension { modulus, .. } => modulus.len() - 1,
        }
    }

    /// Degree of `self` over `sub` if `sub` is `self` or one of its bases.
    pub fn degree_over(&self, sub: &FieldCtx) -> Option<usize> {
        let mut cur = self;
        loop {
            if cur == sub {
                return Some(self.0.degree / sub.0.degree);
            }
            cur = cur.base()?;
        }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::from_parts(self.clone(), self.raw_zero())
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::from_parts(self.clone(), self.raw_one())
    }

    /// Image of an integer under `Z -> F`.
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement::from_parts(self.clone(), self.raw_from_int(n))
    }

    /// The residue class of `y` in `base[y]/(m)`.
    pub fn generator(&self) -> Option<FieldElement> {
        let base = self.base()?;
        let bw = base.0.degree;
        let mut r = self.raw_zero();
        if self.ext_degree() > 1 {
            r[bw..2 * bw].copy_from_slice(&base.raw_one());
        }
        Some(FieldElement::from_parts(self.clone(), r))
    }

    /// Element from its flattened digits (each reduced mod p).
    pub fn element_from_digits(&self, digits: &[u64]) -> Result<FieldElement> {
        if digits.len() > self.0.degree {
            return Err(Error::pre(format!(
                "{} digits for a degree-{} field",
                digits.len(),
                self.0.degree
            )));
        }
        let mut r = self.raw_zero();
        for (slot, d) in r.iter_mut().zip(digits) {
            *slot = d % self.0.p;
        }
        Ok(FieldElement::from_parts(self.clone(), r))
    }

    /// The `index`-th element in canonical order: index = sum digit_i * p^i.
    pub fn element_from_index(&self, mut index: u64) -> FieldElement {
        let mut r = self.raw_zero();
        for slot in r.iter_mut() {
            *slot = index % self.0.p;
            index /= self.0.p;
        }
        FieldElement::from_parts(self.clone(), r)
    }

    /// All elements in canonical order. Only sensible for small fields.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        let card = self.cardinality_u64().expect("field too large to enumerate");
        (0..card).map(move |i| self.element_from_index(i))
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        let r: Repr = (0..self.0.degree).map(|_| rng.gen_range(0..self.0.p)).collect();
        FieldElement::from_parts(self.clone(), r)
    }

    // ----- raw arithmetic on flattened representations -----

    pub(crate) fn raw_zero(&self) -> Repr {
        smallvec![0; self.0.degree]
    }

    pub(crate) fn raw_one(&self) -> Repr {
        let mut r = self.raw_zero();
        r[0] = 1;
        r
    }

    pub(crate) fn raw_from_int(&self, n: i64) -> Repr {
        let mut r = self.raw_zero();
        r[0] = n.rem_euclid(self.0.p as i64) as u64;
        r
    }

    pub(crate) fn raw_is_zero(a: &[u64]) -> bool {
        a.iter().all(|&d| d == 0)
    }

    pub(crate) fn raw_is_one(a: &[u64]) -> bool {
        a[0] == 1 && a[1..].iter().all(|&d| d == 0)
    }

    /// Prime modulus when this is a prime field.
    pub(crate) fn prime_modulus(&self) -> Option<u64> {
        match self.0.kind {
            Kind::Prime => Some(self.0.p),
            _ => None,
        }
    }

    pub(crate) fn raw_add(&self, a: &[u64], b: &[u64]) -> Repr {
        let p = self.0.p;
        a.iter()
            .zip(b)
            .map(|(&x, &y)| {
                let s = x + y;
                if s >= p {
                    s - p
                } else {
                    s
                }
            })
            .collect()
    }

    pub(crate) fn raw_add_assign(&self, a: &mut [u64], b: &[u64]) {
        let p = self.0.p;
        for (x, &y) in a.iter_mut().zip(b) {
            let s = *x + y;
            *x = if s >= p { s - p } else { s };
        }
    }

    pub(crate) fn raw_sub(&self, a: &[u64], b: &[u64]) -> Repr {
        let p = self.0.p;
        a.iter()
            .zip(b)
            .map(|(&x, &y)| if x >= y { x - y } else { x + p - y })
            .collect()
    }

    pub(crate) fn raw_sub_assign(&self, a: &mut [u64], b: &[u64]) {
        let p = self.0.p;
        for (x, &y) in a.iter_mut().zip(b) {
            *x = if *x >= y { *x - y } else { *x + p - y };
        }
    }

    pub(crate) fn raw_neg(&self, a: &[u64]) -> Repr {
        let p = self.0.p;
        a.iter().map(|&x| if x == 0 { 0 } else { p - x }).collect()
    }

    pub(crate) fn raw_mul(&self, a: &[u64], b: &[u64]) -> Repr {
        match &self.0.kind {
            Kind::Prime => smallvec![mul_mod(a[0], b[0], self.0.p)],
            Kind::Extension { base, modulus } => {
                if let Some(p) = base.prime_modulus() {
                    mul_ext_over_prime(a, b, modulus, p)
                } else {
                    mul_ext_generic(base, a, b, modulus)
                }
            }
        }
    }

    pub(crate) fn raw_inv(&self, a: &[u64]) -> Option<Repr> {
        if Self::raw_is_zero(a) {
            return None;
        }
        match &self.0.kind {
            Kind::Prime => inv_mod(a[0], self.0.p).map(|x| smallvec![x]),
            Kind::Extension { base, modulus } => {
                let bw = base.0.degree;
                let a_poly = Poly::from_raw(
                    base.clone(),
                    a.chunks(bw).map(Repr::from_slice).collect(),
                );
                let m_poly = Poly::from_raw(base.clone(), modulus.clone());
                // s*a + t*m = 1 for the monic gcd.
                let (g, s, _) = a_poly.xgcd(&m_poly);
                debug_assert_eq!(g.degree(), Some(0));
                let s = s.rem(&m_poly).ok()?;
                Some(self.raw_from_base_poly(&s))
            }
        }
    }

    /// Flattened residue of a polynomial over the immediate base of degree
    /// below the extension degree.
    pub(crate) fn raw_from_base_poly(&self, f: &Poly) -> Repr {
        let base = self.base().expect("extension");
        let bw = base.0.degree;
        let mut r = self.raw_zero();
        for (i, c) in f.raw_coeffs().iter().enumerate() {
            r[i * bw..(i + 1) * bw].copy_from_slice(c);
        }
        r
    }

    pub(crate) fn raw_pow(&self, a: &[u64], e: &BigUint) -> Repr {
        let mut result = self.raw_one();
        let bits = e.bits();
        for i in (0..bits).rev() {
            result = self.raw_mul(&result, &result);
            if e.bit(i) {
                result = self.raw_mul(&result, a);
            }
        }
        result
    }

    pub(crate) fn raw_pow_u64(&self, a: &[u64], mut e: u64) -> Repr {
        let mut base: Repr = Repr::from_slice(a);
        let mut result = self.raw_one();
        while e > 0 {
            if e & 1 == 1 {
                result = self.raw_mul(&result, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.raw_mul(&base, &base);
            }
        }
        result
    }

    /// `a^p`.
    pub(crate) fn raw_frobenius(&self, a: &[u64]) -> Repr {
        if self.is_prime_field() {
            return Repr::from_slice(a);
        }
        self.raw_pow_u64(a, self.0.p)
    }

    /// `a^(p^k)` by iterated Frobenius; exponents never grow past `p`.
    pub(crate) fn raw_frobenius_pow(&self, a: &[u64], k: usize) -> Repr {
        let k = k % self.0.degree;
        let mut r = Repr::from_slice(a);
        for _ in 0..k {
            r = self.raw_frobenius(&r);
        }
        r
    }
}

fn mul_ext_over_prime(a: &[u64], b: &[u64], modulus: &[Repr], p: u64) -> Repr {
    let k = modulus.len() - 1;
    let mut prod = vec![0u64; 2 * k - 1];
    // Lazy reduction: products below p^2 summed in u128.
    let mut acc = vec![0u128; 2 * k - 1];
    let limit = u128::MAX - (p as u128) * (p as u128);
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
    for (d, s) in prod.iter_mut().zip(&acc) {
        *d = (*s % p as u128) as u64;
    }
    for deg in (k..2 * k - 1).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        prod[deg] = 0;
        for t in 0..k {
            let m = modulus[t][0];
            if m != 0 {
                let sub = mul_mod(c, m, p);
                let slot = &mut prod[deg - k + t];
                *slot = if *slot >= sub { *slot - sub } else { *slot + p - sub };
            }
        }
    }
    prod.truncate(k);
    Repr::from_vec(prod)
}

fn mul_ext_generic(base: &FieldCtx, a: &[u64], b: &[u64], modulus: &[Repr]) -> Repr {
    let bw = base.0.degree;
    let k = modulus.len() - 1;
    let mut prod: Vec<Repr> = vec![base.raw_zero(); 2 * k - 1];
    for (i, x) in a.chunks(bw).enumerate() {
        if FieldCtx::raw_is_zero(x) {
            continue;
        }
        for (j, y) in b.chunks(bw).enumerate() {
            if FieldCtx::raw_is_zero(y) {
                continue;
            }
            let t = base.raw_mul(x, y);
            base.raw_add_assign(&mut prod[i + j], &t);
        }
    }
    for deg in (k..2 * k - 1).rev() {
        if FieldCtx::raw_is_zero(&prod[deg]) {
            continue;
        }
        let c = std::mem::replace(&mut prod[deg], base.raw_zero());
        for t in 0..k {
            let sub = base.raw_mul(&c, &modulus[t]);
            base.raw_sub_assign(&mut prod[deg - k + t], &sub);
        }
    }
    let mut out = Repr::with_capacity(k * bw);
    for c in prod.iter().take(k) {
        out.extend_from_slice(c);
    }
    out
}

/// Convenience for `q^k` as a big integer.
pub(crate) fn big_pow(q: &BigUint, k: usize) -> BigUint {
    let mut r = BigUint::one();
    for _ in 0..k {
        r *= q;
    }
    r
}
