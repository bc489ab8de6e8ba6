//! PGL2(F_q): class representatives, orders, the action on irreducible
//! polynomials, invariant enumeration and counting.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::numtheory::{divisors_u64, euler_phi, mobius};
use crate::field::{FieldCtx, FieldElement};
use crate::poly::{enumerate_irreducibles, monic_from_index, Poly};
use crate::qc::{build_qc, RationalMap};

/// A 2x2 invertible matrix `[[a, b], [c, d]]` up to scalars, normalized so
/// the first nonzero entry in reading order is 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Pgl2Class {
    entries: [FieldElement; 4],
}

impl fmt::Debug for Pgl2Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Pgl2Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.entries;
        write!(f, "[[{a}, {b}], [{c}, {d}]]")
    }
}

impl Pgl2Class {
    pub fn new(a: FieldElement, b: FieldElement, c: FieldElement, d: FieldElement) -> Result<Self> {
        let ctx = a.ctx().clone();
        if [&b, &c, &d].iter().any(|e| e.ctx() != &ctx) {
            return Err(Error::ContextMismatch);
        }
        let det = &(&a * &d) - &(&b * &c);
        if det.is_zero() {
            return Err(Error::pre("singular matrix"));
        }
        let mut entries = [a, b, c, d];
        let lead = entries.iter().find(|e| !e.is_zero()).expect("nonzero det").inv()?;
        for e in entries.iter_mut() {
            *e = &*e * &lead;
        }
        Ok(Pgl2Class { entries })
    }

    pub fn from_ints(ctx: &FieldCtx, a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Self::new(ctx.from_int(a), ctx.from_int(b), ctx.from_int(c), ctx.from_int(d))
    }

    pub fn identity(ctx: &FieldCtx) -> Self {
        Self::from_ints(ctx, 1, 0, 0, 1).expect("invertible")
    }

    /// `A_c = [[0, 1], [c, 1]]`.
    pub fn a_c(c: &FieldElement) -> Result<Self> {
        let ctx = c.ctx();
        Self::new(ctx.zero(), ctx.one(), c.clone(), ctx.one())
    }

    pub fn ctx(&self) -> &FieldCtx {
        self.entries[0].ctx()
    }

    pub fn entries(&self) -> &[FieldElement; 4] {
        &self.entries
    }

    pub fn is_identity(&self) -> bool {
        let [a, b, c, d] = &self.entries;
        a.is_one() && b.is_zero() && c.is_zero() && d.is_one()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.ctx() != other.ctx() {
            return Err(Error::ContextMismatch);
        }
        let [a, b, c, d] = &self.entries;
        let [e, f, g, h] = &other.entries;
        Self::new(
            &(a * e) + &(b * g),
            &(a * f) + &(b * h),
            &(c * e) + &(d * g),
            &(c * f) + &(d * h),
        )
    }

    /// Least `d >= 1` with `A^d` scalar. Element orders in PGL2(F_q) never
    /// exceed `q + 1`.
    pub fn order(&self) -> Result<u64> {
        let q = self
            .ctx()
            .cardinality_u64()
            .filter(|&q| q < 1 << 24)
            .ok_or_else(|| Error::pre("field too large for a PGL2 order walk"))?;
        let mut power = self.clone();
        for d in 1..=q + 1 {
            if power.is_identity() {
                return Ok(d);
            }
            power = power.mul(self)?;
        }
        Err(Error::internal("PGL2 element order exceeds q + 1"))
    }

    /// `A_c` parameter if this class is `[[0, 1], [c, 1]]`.
    pub fn as_a_c(&self) -> Option<FieldElement> {
        let [a, b, c, d] = &self.entries;
        (a.is_zero() && b.is_one() && d.is_one() && !c.is_zero()).then(|| c.clone())
    }
}

/// `[A] o f = lambda * (bx + d)^k * f((ax + c) / (bx + d))`, normalized to be
/// monic. Satisfies `apply(A, apply(B, f)) = apply(AB, f)`.
pub fn apply_pgl2(a: &Pgl2Class, f: &Poly) -> Result<Poly> {
    let ctx = f.ctx();
    if a.ctx() != ctx {
        return Err(Error::ContextMismatch);
    }
    let k = match f.degree() {
        Some(k) if k >= 2 => k,
        _ => return Err(Error::pre("the action is defined on degrees >= 2")),
    };
    if !f.is_monic() {
        return Err(Error::pre("the action is defined on monic polynomials"));
    }
    debug_assert!(f.is_irreducible().unwrap_or(false), "action applied to reducible {f}");
    let [ea, eb, ec, ed] = a.entries();
    let num = Poly::new(ctx.clone(), vec![ec.clone(), ea.clone()])?;
    let den = Poly::new(ctx.clone(), vec![ed.clone(), eb.clone()])?;
    let out = f.homogenize(&num, &den, k)?;
    if out.degree() != Some(k) {
        return Err(Error::internal(format!("action dropped the degree of {f}")));
    }
    Ok(out.monic())
}

fn check_order_divides(q: u64, d: u64) -> Result<()> {
    if d <= 2 || (q + 1) % d != 0 {
        return Err(Error::pre(format!("order {d} must exceed 2 and divide q + 1 = {}", q + 1)));
    }
    Ok(())
}

/// Smallest `c` (by index) with `x^2 - x - c` irreducible and `[A_c]` of order `d`.
pub fn find_c(ctx: &FieldCtx, d: u64) -> Result<FieldElement> {
    let q = ctx
        .cardinality_u64()
        .ok_or_else(|| Error::pre("field too large to search"))?;
    check_order_divides(q, d)?;
    for c in ctx.elements().skip(1) {
        if !quadratic_is_irreducible(&c)? {
            continue;
        }
        if Pgl2Class::a_c(&c)?.order()? == d {
            return Ok(c);
        }
    }
    Err(Error::internal(format!("no c of order {d} over F_{q}")))
}

/// Irreducibility of `x^2 - x - c`.
pub(crate) fn quadratic_is_irreducible(c: &FieldElement) -> Result<bool> {
    let ctx = c.ctx();
    Poly::new(ctx.clone(), vec![-c, -&ctx.one(), ctx.one()])?.is_irreducible()
}

/// The four canonical shapes of a rational map `Q_A` with `[A] o f = f`
/// exactly when `f = g^{Q_A}`.
#[derive(Debug, Clone)]
pub enum CanonicalForm {
    /// `[[a, 0], [0, 1]]`, giving `x^D` with `D = ord(a)`.
    Diagonal(FieldElement),
    /// `[[1, 1], [0, 1]]`, giving `x^p - x`.
    Unipotent(FieldCtx),
    /// `[[0, b], [1, 0]]` with `x^2 - b` irreducible, giving `(x^2 + b) / x`.
    Antidiagonal(FieldElement),
    /// `A_c`, giving `Q_c`.
    Ac(FieldElement),
}

pub fn canonical_rational(form: &CanonicalForm, budget: &crate::FactorBudget) -> Result<RationalMap> {
    match form {
        CanonicalForm::Diagonal(a) => {
            if a.is_zero() {
                return Err(Error::pre("diagonal entry must be nonzero"));
            }
            let d = a
                .mult_order(budget)?
                .to_usize()
                .ok_or_else(|| Error::pre("order too large"))?;
            if d < 2 {
                return Err(Error::pre("diagonal entry must have order at least 2"));
            }
            let ctx = a.ctx();
            RationalMap::new(Poly::monomial(&ctx.one(), d), Poly::one(ctx))
        }
        CanonicalForm::Unipotent(ctx) => {
            let p = ctx.characteristic() as usize;
            let num = &Poly::monomial(&ctx.one(), p) - &Poly::x(ctx);
            RationalMap::new(num, Poly::one(ctx))
        }
        CanonicalForm::Antidiagonal(b) => {
            let ctx = b.ctx();
            let side = Poly::new(ctx.clone(), vec![-b, ctx.zero(), ctx.one()])?;
            if !side.is_irreducible()? {
                return Err(Error::pre(format!("{side} is reducible")));
            }
            let num = Poly::new(ctx.clone(), vec![b.clone(), ctx.zero(), ctx.one()])?;
            RationalMap::new(num, Poly::x(ctx))
        }
        CanonicalForm::Ac(c) => Ok(build_qc(c.ctx(), c)?.map().clone()),
    }
}

/// All monic irreducible `f` of degree `k` fixed by `[A]`. Uses the `Q_c`
/// image description when `A` is some `A_c` and `D | k`, otherwise scans
/// every monic polynomial of degree `k`. `budget` caps the candidates.
pub fn enumerate_invariants(ctx: &FieldCtx, a: &Pgl2Class, k: usize, budget: u64) -> Result<Vec<Poly>> {
    if let Some(c) = a.as_a_c() {
        let d = a.order()? as usize;
        if d > 2 && k > 2 && k % d == 0 && quadratic_is_irreducible(&c)? {
            return invariants_via_images(ctx, a, &c, k / d, budget);
        }
    }
    invariants_by_scan(ctx, a, k, budget)
}

fn candidate_count(ctx: &FieldCtx, k: usize, budget: u64) -> Result<(u64, u64)> {
    let q = ctx
        .cardinality_u64()
        .ok_or_else(|| Error::pre("field too large to enumerate"))?;
    let total = (q as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if total > budget as u128 {
        return Err(Error::BudgetExceeded {
            what: format!("degree-{k} candidates over F_{q}"),
            needed: total.to_string(),
            budget,
        });
    }
    Ok((q, total as u64))
}

/// Exhaustive scan; the oracle for the image path.
pub fn invariants_by_scan(ctx: &FieldCtx, a: &Pgl2Class, k: usize, budget: u64) -> Result<Vec<Poly>> {
    if k < 2 {
        return Err(Error::pre("invariants have degree at least 2"));
    }
    let (q, total) = candidate_count(ctx, k, budget)?;
    let found: Result<Vec<Option<Poly>>> = (0..total)
        .into_par_iter()
        .map(|i| {
            let f = monic_from_index(ctx, k, i, q);
            if f.is_irreducible()? && apply_pgl2(a, &f)? == f {
                Ok(Some(f))
            } else {
                Ok(None)
            }
        })
        .collect();
    let mut out: Vec<Poly> = found?.into_iter().flatten().collect();
    out.sort();
    Ok(out)
}

fn invariants_via_images(
    ctx: &FieldCtx,
    a: &Pgl2Class,
    c: &FieldElement,
    m: usize,
    budget: u64,
) -> Result<Vec<Poly>> {
    candidate_count(ctx, m, budget)?;
    let qc = build_qc(ctx, c)?;
    let seeds = enumerate_irreducibles(ctx, m)?;
    let found: Result<Vec<Option<Poly>>> = seeds
        .par_iter()
        .map(|g| {
            let f = qc.transform_monic(g)?;
            if !f.is_irreducible()? {
                return Ok(None);
            }
            if apply_pgl2(a, &f)? != f {
                return Err(Error::internal(format!("irreducible transform {f} is not invariant")));
            }
            Ok(Some(f))
        })
        .collect();
    let mut out: Vec<Poly> = found?.into_iter().flatten().collect();
    out.sort();
    Ok(out)
}

/// `|C_{A_c}(Dm)| = phi(D)/(Dm) * sum over d | m, gcd(d, D) = 1 of
/// (q^(m/d) + eps(m/d)) mu(d)`, with `eps(s) = (-1)^(s+1)`.
pub fn count_invariants(q: &BigUint, d: u64, m: u64) -> Result<BigUint> {
    let q1: BigUint = q + 1u32;
    if d <= 2 || !(&q1 % d).is_zero() {
        return Err(Error::pre(format!("order {d} must exceed 2 and divide q + 1 = {q1}")));
    }
    if m == 0 {
        return Err(Error::pre("m must be positive"));
    }
    let qi = BigInt::from(q.clone());
    let mut sum = BigInt::zero();
    for div in divisors_u64(m) {
        if div.gcd(&d) != 1 {
            continue;
        }
        let mu = mobius(div);
        if mu == 0 {
            continue;
        }
        let s = m / div;
        let eps = if s % 2 == 1 { 1 } else { -1 };
        sum += (qi.pow(s as u32) + eps) * mu;
    }
    let numer = sum * euler_phi(d);
    let denom = BigInt::from(d) * BigInt::from(m);
    let (quot, rem) = numer.div_rem(&denom);
    if !rem.is_zero() || quot.sign() == num_bigint::Sign::Minus {
        return Err(Error::internal(format!(
            "invariant count for q={q}, D={d}, m={m} is not a non-negative integer"
        )));
    }
    Ok(quot.to_biguint().expect("non-negative"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(ctx: &FieldCtx, c: &[i64]) -> Poly {
        Poly::from_ints(ctx, c)
    }

    #[test]
    fn orders() {
        let f2 = FieldCtx::prime(2).unwrap();
        let f5 = FieldCtx::prime(5).unwrap();
        assert_eq!(Pgl2Class::identity(&f2).order().unwrap(), 1);
        assert_eq!(Pgl2Class::a_c(&f2.one()).unwrap().order().unwrap(), 3);
        assert_eq!(Pgl2Class::a_c(&f5.from_int(3)).unwrap().order().unwrap(), 6);
        assert_eq!(Pgl2Class::a_c(&f5.from_int(4)).unwrap().order().unwrap(), 3);
    }

    #[test]
    fn normalization_makes_scalars_equal() {
        let f5 = FieldCtx::prime(5).unwrap();
        let a = Pgl2Class::from_ints(&f5, 2, 1, 3, 3).unwrap();
        let b = Pgl2Class::from_ints(&f5, 4, 2, 1, 1).unwrap();
        assert_eq!(a, b);
        assert!(a.entries()[0].is_one());
        assert!(Pgl2Class::from_ints(&f5, 1, 2, 2, 4).is_err());
    }

    #[test]
    fn action_examples() {
        let f2 = FieldCtx::prime(2).unwrap();
        let f1 = p(&f2, &[1, 1, 0, 0, 1, 0, 1, 0, 1, 1, 1, 1, 1]);
        assert_eq!(apply_pgl2(&Pgl2Class::identity(&f2), &f1).unwrap(), f1);
        assert_eq!(apply_pgl2(&Pgl2Class::a_c(&f2.one()).unwrap(), &f1).unwrap(), f1);
        let swap = Pgl2Class::from_ints(&f2, 0, 1, 1, 0).unwrap();
        let quad = p(&f2, &[1, 1, 1]);
        assert_eq!(apply_pgl2(&swap, &quad).unwrap(), quad);
    }

    #[test]
    fn find_c_examples() {
        let f2 = FieldCtx::prime(2).unwrap();
        let f5 = FieldCtx::prime(5).unwrap();
        assert_eq!(find_c(&f2, 3).unwrap(), f2.one());
        assert_eq!(find_c(&f5, 6).unwrap(), f5.from_int(3));
        assert_eq!(find_c(&f5, 3).unwrap(), f5.from_int(4));
        assert!(find_c(&f5, 4).is_err());
        assert!(find_c(&f5, 2).is_err());
    }

    #[test]
    fn canonical_forms() {
        let budget = crate::FactorBudget::default();
        let f5 = FieldCtx::prime(5).unwrap();
        let m = canonical_rational(&CanonicalForm::Diagonal(f5.from_int(2)), &budget).unwrap();
        assert_eq!(m.num(), &p(&f5, &[0, 0, 0, 0, 1]));
        assert!(m.den().is_one());
        let m = canonical_rational(&CanonicalForm::Unipotent(f5.clone()), &budget).unwrap();
        assert_eq!(m.num(), &p(&f5, &[0, -1, 0, 0, 0, 1]));
        let f3 = FieldCtx::prime(3).unwrap();
        assert!(canonical_rational(&CanonicalForm::Antidiagonal(f3.one()), &budget).is_err());
        let m = canonical_rational(&CanonicalForm::Antidiagonal(f3.from_int(2)), &budget).unwrap();
        assert_eq!(m.num(), &p(&f3, &[2, 0, 1]));
        assert_eq!(m.den(), &p(&f3, &[0, 1]));
    }

    #[test]
    fn invariant_examples() {
        let f2 = FieldCtx::prime(2).unwrap();
        let a1 = Pgl2Class::a_c(&f2.one()).unwrap();
        let cubics = enumerate_invariants(&f2, &a1, 3, 1 << 20).unwrap();
        assert_eq!(cubics, vec![p(&f2, &[1, 1, 0, 1]), p(&f2, &[1, 0, 1, 1])]);
        assert!(enumerate_invariants(&f2, &a1, 4, 1 << 20).unwrap().is_empty());
        assert!(enumerate_invariants(&f2, &a1, 6, 1 << 20).unwrap().is_empty());
        assert!(matches!(
            invariants_by_scan(&f2, &a1, 30, 1 << 20),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn invariant_counts() {
        let two = BigUint::from(2u32);
        assert_eq!(count_invariants(&two, 3, 1).unwrap(), BigUint::from(2u32));
        assert_eq!(count_invariants(&two, 3, 4).unwrap(), BigUint::from(2u32));
        assert_eq!(count_invariants(&two, 3, 2).unwrap(), BigUint::zero());
        assert!(count_invariants(&two, 2, 1).is_err());
        assert!(count_invariants(&BigUint::from(5u32), 4, 1).is_err());
    }
}
