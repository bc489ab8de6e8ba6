use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigUint;

use super::numtheory::{self, FactorBudget};
use super::{FieldCtx, Repr};
use crate::error::{Error, Result};

/// An element of a [`FieldCtx`], always fully reduced.
///
/// Arithmetic between elements of different fields is an error: the
/// `checked_*` methods report it, the operator impls panic.
#[derive(Clone)]
pub struct FieldElement {
    ctx: FieldCtx,
    repr: Repr,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.repr == other.repr && self.ctx == other.ctx
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.repr.hash(state);
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.repr.len() == 1 {
            write!(f, "{}", self.repr[0])
        } else {
            write!(f, "[")?;
            for (i, d) in self.repr.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{d}")?;
            }
            write!(f, "]")
        }
    }
}

impl serde::Serialize for FieldElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FieldElement {
    pub(crate) fn from_parts(ctx: FieldCtx, repr: Repr) -> Self {
        debug_assert_eq!(repr.len(), ctx.degree_over_prime());
        FieldElement { ctx, repr }
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    /// Flattened digits over the prime field.
    pub fn digits(&self) -> &[u64] {
        &self.repr
    }

    pub(crate) fn raw(&self) -> &Repr {
        &self.repr
    }

    pub fn is_zero(&self) -> bool {
        FieldCtx::raw_is_zero(&self.repr)
    }

    pub fn is_one(&self) -> bool {
        FieldCtx::raw_is_one(&self.repr)
    }

    fn same_ctx(&self, other: &Self) -> Result<()> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_ctx(other)?;
        Ok(Self::from_parts(
            self.ctx.clone(),
            self.ctx.raw_add(&self.repr, &other.repr),
        ))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_ctx(other)?;
        Ok(Self::from_parts(
            self.ctx.clone(),
            self.ctx.raw_sub(&self.repr, &other.repr),
        ))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_ctx(other)?;
        Ok(Self::from_parts(
            self.ctx.clone(),
            self.ctx.raw_mul(&self.repr, &other.repr),
        ))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.same_ctx(other)?;
        let inv = other.inv()?;
        self.checked_mul(&inv)
    }

    pub fn inv(&self) -> Result<Self> {
        self.ctx
            .raw_inv(&self.repr)
            .map(|r| Self::from_parts(self.ctx.clone(), r))
            .ok_or(Error::DivisionByZero)
    }

    pub fn pow(&self, e: &BigUint) -> Self {
        Self::from_parts(self.ctx.clone(), self.ctx.raw_pow(&self.repr, e))
    }

    pub fn pow_u64(&self, e: u64) -> Self {
        Self::from_parts(self.ctx.clone(), self.ctx.raw_pow_u64(&self.repr, e))
    }

    /// `self^(base^k)` as `k` successive `base`-th powers, so the full
    /// exponent is never formed.
    pub fn pow_tower(&self, base: &BigUint, k: usize) -> Self {
        let mut r = self.repr.clone();
        for _ in 0..k {
            r = self.ctx.raw_pow(&r, base);
        }
        Self::from_parts(self.ctx.clone(), r)
    }

    /// `x -> x^p`.
    pub fn frobenius(&self) -> Self {
        Self::from_parts(self.ctx.clone(), self.ctx.raw_frobenius(&self.repr))
    }

    /// `x -> x^|sub|` for a subfield `sub` in this element's tower.
    pub fn frobenius_over(&self, sub: &FieldCtx) -> Result<Self> {
        if self.ctx.degree_over(sub).is_none() {
            return Err(Error::ContextMismatch);
        }
        Ok(Self::from_parts(
            self.ctx.clone(),
            self.ctx
                .raw_frobenius_pow(&self.repr, sub.degree_over_prime()),
        ))
    }

    /// Least `d >= 1` with `x^(q^d) = x` for `q = |sub|`, by iterating the
    /// Frobenius of `sub`.
    pub fn degree_over(&self, sub: &FieldCtx) -> Result<usize> {
        let bound = self.ctx.degree_over(sub).ok_or(Error::ContextMismatch)?;
        let mut x = self.frobenius_over(sub)?;
        for d in 1..=bound {
            if x == *self {
                return Ok(d);
            }
            x = x.frobenius_over(sub)?;
        }
        Err(Error::internal("Frobenius orbit longer than the field degree"))
    }

    /// The same degree computed as `ord_e(q)` with `e` the multiplicative
    /// order of `self`; only defined for nonzero elements.
    pub fn degree_over_via_order(&self, sub: &FieldCtx, budget: &FactorBudget) -> Result<usize> {
        if self.ctx.degree_over(sub).is_none() {
            return Err(Error::ContextMismatch);
        }
        let e = self.mult_order(budget)?;
        let d = numtheory::ord_mod(&e, &sub.cardinality(), budget)?;
        Ok(num_traits::ToPrimitive::to_usize(&d).expect("degree fits"))
    }

    /// Multiplicative order. Needs the factorization of `|F| - 1`; when it
    /// exceeds the budget the answer is [`Error::OrderUnavailable`].
    pub fn mult_order(&self, budget: &FactorBudget) -> Result<BigUint> {
        if self.is_zero() {
            return Err(Error::pre("zero has no multiplicative order"));
        }
        let n = self.ctx.cardinality() - 1u32;
        let factors = numtheory::factorize_power_minus_one(
            &BigUint::from(self.ctx.characteristic()),
            self.ctx.degree_over_prime() as u64,
            budget,
        )?;
        Ok(self.order_given_factors(&n, &factors))
    }

    /// Order inside a group of exponent `n` whose factorization is known.
    pub fn order_given_factors(&self, n: &BigUint, factors: &numtheory::Factors) -> BigUint {
        numtheory::reduce_order(n, factors, |d| self.pow(d).is_one())
    }

    /// Embed into a field that has `self.ctx()` somewhere in its base chain.
    pub fn embed_into(&self, target: &FieldCtx) -> Result<Self> {
        if target == &self.ctx {
            return Ok(self.clone());
        }
        let base = target.base().ok_or(Error::ContextMismatch)?;
        let inner = self.embed_into(base)?;
        let mut r = target.raw_zero();
        r[..inner.repr.len()].copy_from_slice(&inner.repr);
        Ok(Self::from_parts(target.clone(), r))
    }

    /// Coerce down to a subfield `sub` in the tower. Membership is checked
    /// by Frobenius fixedness before the representation is truncated.
    pub fn descend_to(&self, sub: &FieldCtx) -> Result<Self> {
        if self.ctx.degree_over(sub).is_none() {
            return Err(Error::ContextMismatch);
        }
        let q = sub.cardinality();
        let fixed = if sub.degree_over_prime() == self.ctx.degree_over_prime() {
            true
        } else {
            self.pow(&q) == *self
        };
        let w = sub.degree_over_prime();
        if !fixed || !FieldCtx::raw_is_zero(&self.repr[w..]) {
            return Err(Error::pre(format!("{self} does not lie in {sub:?}")));
        }
        Ok(Self::from_parts(sub.clone(), Repr::from_slice(&self.repr[..w])))
    }

    /// Coefficients over the immediate base, low to high.
    pub fn base_coeffs(&self) -> Option<Vec<FieldElement>> {
        let base = self.ctx.base()?;
        let w = base.degree_over_prime();
        Some(
            self.repr
                .chunks(w)
                .map(|c| FieldElement::from_parts(base.clone(), Repr::from_slice(c)))
                .collect(),
        )
    }

    /// Canonical index, inverse of [`FieldCtx::element_from_index`].
    pub fn index(&self) -> BigUint {
        let p = BigUint::from(self.ctx.characteristic());
        let mut acc = BigUint::from(0u32);
        for d in self.repr.iter().rev() {
            acc = acc * &p + BigUint::from(*d);
        }
        acc
    }

    pub fn is_square(&self) -> bool {
        if self.is_zero() || self.ctx.characteristic() == 2 {
            return true;
        }
        let e = (self.ctx.cardinality() - 1u32) >> 1;
        self.pow(&e).is_one()
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: by index (most significant digit last in storage).
impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.repr.iter().rev().cmp(other.repr.iter().rev())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl<'a> $tr<&'a FieldElement> for &'a FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &'a FieldElement) -> FieldElement {
                self.$checked(rhs).expect(concat!("field ", stringify!($m)))
            }
        }
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                (&self).$m(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::from_parts(self.ctx.clone(), self.ctx.raw_neg(&self.repr))
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}
