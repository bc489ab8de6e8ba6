//! `P_c(a) = (a + theta^q) / (a + theta)` conjugates `Q_c` to `x -> x^D`
//! away from `F_{q^2}`; periodicity and the iteration bound follow from
//! multiplicative orders of `P_c` values.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;

use super::QcContext;
use crate::error::{Error, Result};
use crate::field::numtheory::{factorize_power_minus_one, is_prime_u64, nu, FactorBudget};
use crate::field::{big_pow, FieldCtx, FieldElement};
use crate::poly::{factor, Poly};

/// A field containing both a given element and the roots of `t^2 - t - c`.
#[derive(Debug, Clone)]
pub struct Ambient {
    field: FieldCtx,
    theta: FieldElement,
    theta_q: FieldElement,
}

impl Ambient {
    /// For fields of even degree over `F_q` the quadratic splits and a root
    /// is found by factoring; for odd degree the field is extended by it.
    pub fn new(field: &FieldCtx, qc: &QcContext) -> Result<Ambient> {
        let m = field.degree_over(qc.ctx()).ok_or(Error::ContextMismatch)?;
        let c = qc.c().embed_into(field)?;
        let quad = Poly::new(field.clone(), vec![-&c, -&field.one(), field.one()])?;
        let (field, theta) = if m % 2 == 0 {
            let roots = factor(&quad)?;
            let (lin, _) = roots
                .factors
                .first()
                .filter(|(r, _)| r.degree() == Some(1))
                .ok_or_else(|| Error::internal("t^2 - t - c does not split in an even-degree field"))?;
            (field.clone(), -&lin.coeff(0))
        } else {
            let big = FieldCtx::extend(field, &quad)?;
            let t = big.generator().expect("extension");
            (big, t)
        };
        let theta_q = &field.one() - &theta;
        Ok(Ambient {
            field,
            theta,
            theta_q,
        })
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn theta(&self) -> &FieldElement {
        &self.theta
    }

    /// `P_c(a)`; undefined at `a = -theta`.
    pub fn pc(&self, a: &FieldElement) -> Result<FieldElement> {
        let a = a.embed_into(&self.field)?;
        (&a + &self.theta_q).checked_div(&(&a + &self.theta))
    }

    /// `P_c^{-1}(y) = (theta^q - y theta) / (y - 1)`.
    pub fn pc_inverse(&self, y: &FieldElement) -> Result<FieldElement> {
        let y = y.embed_into(&self.field)?;
        let num = &self.theta_q - &(&y * &self.theta);
        num.checked_div(&(&y - &self.field.one()))
    }
}

#[derive(Debug, Clone)]
pub struct PcDiagnostics {
    /// `n = deg_q(alpha)`.
    pub alpha_degree: usize,
    /// `e(n) = lcm(n, 2)`.
    pub e_n: usize,
    pub pc_value: FieldElement,
    /// `ord(P_c(alpha))`, `None` when `q^{e(n)} - 1` could not be factored
    /// within budget.
    pub pc_order: Option<BigUint>,
    pub ambient: Ambient,
}

/// Multiplicative order of `x`, known to lie in `F_{q^e}` with `q = |base|`.
pub fn pc_order_in(x: &FieldElement, base: &FieldCtx, e: usize, budget: &FactorBudget) -> Result<BigUint> {
    let p = BigUint::from(base.characteristic());
    let k = (base.degree_over_prime() * e) as u64;
    let n = big_pow(&base.cardinality(), e) - 1u32;
    if !x.pow(&n).is_one() {
        return Err(Error::internal(format!("{x} does not lie in the degree-{e} subfield")));
    }
    let factors = factorize_power_minus_one(&p, k, budget)?;
    Ok(x.order_given_factors(&n, &factors))
}

pub fn p_map(alpha: &FieldElement, qc: &QcContext, budget: &FactorBudget) -> Result<PcDiagnostics> {
    let n = alpha.degree_over(qc.ctx())?;
    if n < 3 {
        return Err(Error::pre(format!("P_c needs an element of degree >= 3, got {n}")));
    }
    let ambient = Ambient::new(alpha.ctx(), qc)?;
    let pc_value = ambient.pc(alpha)?;
    let e_n = n.lcm(&2);
    let pc_order = match pc_order_in(&pc_value, qc.ctx(), e_n, budget) {
        Ok(o) => Some(o),
        Err(Error::OrderUnavailable(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(PcDiagnostics {
        alpha_degree: n,
        e_n,
        pc_value,
        pc_order,
        ambient,
    })
}

/// `ord(P_c(alpha))` for a root `alpha` of the irreducible `f`; `None` when
/// the group order cannot be factored within budget.
pub fn root_pc_order(f: &Poly, qc: &QcContext, budget: &FactorBudget) -> Result<Option<BigUint>> {
    if f.ctx() != qc.ctx() {
        return Err(Error::ContextMismatch);
    }
    if f.degree().is_none_or(|n| n < 3) {
        return Err(Error::pre("P_c orders are taken for degree >= 3"));
    }
    let field = FieldCtx::extend(qc.ctx(), &f.monic())?;
    let alpha = field.generator().expect("extension");
    Ok(p_map(&alpha, qc, budget)?.pc_order)
}

/// `f` is `Q_c`-periodic iff `gcd(ord(P_c(alpha)), D) = 1` for a root
/// `alpha` of `f`.
pub fn is_qc_periodic(f: &Poly, qc: &QcContext, budget: &FactorBudget) -> Result<bool> {
    let order = root_pc_order(f, qc, budget)?
        .ok_or_else(|| Error::OrderUnavailable(format!("order of P_c(alpha) for {f}")))?;
    Ok(order.gcd(&BigUint::from(qc.order())).is_one())
}

/// `nu_D(q^{e(n)} - 1) - 1`, defined for prime `D`.
pub fn iteration_bound(n: usize, qc: &QcContext) -> Result<u32> {
    let d = qc.order();
    if !is_prime_u64(d) {
        return Err(Error::pre(format!("iteration bound needs prime D, got {d}")));
    }
    let e = n.lcm(&2);
    let v = nu(d, &(big_pow(&qc.ctx().cardinality(), e) - 1u32))?;
    Ok(v.saturating_sub(1))
}

/// `P_c(beta)^D = P_c(Q_c(beta))` for `beta` outside `F_{q^2}`.
pub fn conjugation_holds(beta: &FieldElement, qc: &QcContext) -> Result<bool> {
    let alpha = qc
        .map()
        .eval(beta)?
        .ok_or_else(|| Error::pre("beta is a pole of Q_c"))?;
    let ambient = Ambient::new(beta.ctx(), qc)?;
    let lhs = ambient.pc(beta)?.pow_u64(qc.order());
    let rhs = ambient.pc(&alpha)?;
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qc::build_qc;

    fn p(ctx: &FieldCtx, c: &[i64]) -> Poly {
        Poly::from_ints(ctx, c)
    }

    #[test]
    fn bounds() {
        let f2 = FieldCtx::prime(2).unwrap();
        let qc = build_qc(&f2, &f2.one()).unwrap();
        assert_eq!(iteration_bound(4, &qc).unwrap(), 0);
        assert_eq!(iteration_bound(3, &qc).unwrap(), 1);
        let f5 = FieldCtx::prime(5).unwrap();
        assert_eq!(iteration_bound(3, &build_qc(&f5, &f5.from_int(4)).unwrap()).unwrap(), 1);
        assert!(iteration_bound(3, &build_qc(&f5, &f5.from_int(3)).unwrap()).is_err());
    }

    #[test]
    fn pc_degrees() {
        let f2 = FieldCtx::prime(2).unwrap();
        let qc = build_qc(&f2, &f2.one()).unwrap();
        let budget = FactorBudget::default();
        let f8 = FieldCtx::extend(&f2, &p(&f2, &[1, 1, 0, 1])).unwrap();
        let d = p_map(&f8.generator().unwrap(), &qc, &budget).unwrap();
        assert_eq!(d.e_n, 6);
        assert_eq!(d.pc_value.degree_over(&f2).unwrap(), 6);
        let f16 = FieldCtx::extend(&f2, &p(&f2, &[1, 1, 0, 0, 1])).unwrap();
        let d = p_map(&f16.generator().unwrap(), &qc, &budget).unwrap();
        assert_eq!(d.e_n, 4);
        assert_eq!(d.ambient.field(), &f16);
        assert!(p_map(&f2.one(), &qc, &budget).is_err());
    }

    #[test]
    fn pc_inverse_round_trips() {
        let f2 = FieldCtx::prime(2).unwrap();
        let qc = build_qc(&f2, &f2.one()).unwrap();
        let f32 = FieldCtx::extend(&f2, &p(&f2, &[1, 0, 1, 0, 0, 1])).unwrap();
        let amb = Ambient::new(&f32, &qc).unwrap();
        let a = f32.generator().unwrap().pow_u64(7);
        let back = amb.pc_inverse(&amb.pc(&a).unwrap()).unwrap();
        assert_eq!(back, a.embed_into(amb.field()).unwrap());
    }

    #[test]
    fn periodicity() {
        let f2 = FieldCtx::prime(2).unwrap();
        let qc = build_qc(&f2, &f2.one()).unwrap();
        let budget = FactorBudget::default();
        assert!(is_qc_periodic(&p(&f2, &[1, 1, 0, 0, 1]), &qc, &budget).unwrap());
        assert!(!is_qc_periodic(&p(&f2, &[1, 0, 0, 1, 1]), &qc, &budget).unwrap());
    }
}
