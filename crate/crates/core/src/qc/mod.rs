//! The canonical rational map `Q_c = g_c / h_c` of `A_c = [[0, 1], [c, 1]]`,
//! the `Q`-transform `f^Q = h^n f(g / h)`, spins, and the `P_c` dynamics.

mod dynamics;
mod spin;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement};
use crate::pgl2::{quadratic_is_irreducible, Pgl2Class};
use crate::poly::Poly;

pub use dynamics::{
    conjugation_holds, is_qc_periodic, iteration_bound, p_map, pc_order_in, root_pc_order, Ambient,
    PcDiagnostics,
};
pub use spin::{factor_via_spins, minimal_polynomial, spin, spin_length};

/// `num / den` with coprime numerator and denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMap {
    num: Poly,
    den: Poly,
}

impl RationalMap {
    pub fn new(num: Poly, den: Poly) -> Result<RationalMap> {
        if num.ctx() != den.ctx() {
            return Err(Error::ContextMismatch);
        }
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if !num.gcd(&den)?.is_one() {
            return Err(Error::pre(format!("({num}) / ({den}) is not in lowest terms")));
        }
        Ok(RationalMap { num, den })
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn degree(&self) -> usize {
        let dn = self.num.degree().unwrap_or(0);
        let dd = self.den.degree().unwrap_or(0);
        dn.max(dd)
    }

    /// `Q(x)` for `x` in any extension of the coefficient field; `None` at a
    /// pole.
    pub fn eval(&self, x: &FieldElement) -> Result<Option<FieldElement>> {
        let d = self.den.eval_in(x)?;
        if d.is_zero() {
            return Ok(None);
        }
        Ok(Some(self.num.eval_in(x)?.checked_div(&d)?))
    }

    /// `f^Q = h^n f(g / h)` with `n = deg f`.
    pub fn transform(&self, f: &Poly) -> Result<Poly> {
        q_transform(f, self)
    }
}

pub fn q_transform(f: &Poly, q: &RationalMap) -> Result<Poly> {
    let n = f.degree().unwrap_or(0);
    f.homogenize(&q.num, &q.den, n)
}

/// Everything the constructions need about one `Q_c`.
#[derive(Debug, Clone)]
pub struct QcContext {
    ctx: FieldCtx,
    c: FieldElement,
    order: u64,
    quad: FieldCtx,
    theta: FieldElement,
    map: RationalMap,
}

/// Serializable summary of a [`QcContext`].
#[derive(Debug, Clone, Serialize)]
pub struct QcSummary {
    pub q: String,
    pub c: FieldElement,
    #[serde(rename = "D")]
    pub d: u64,
    pub g_c: Poly,
    pub h_c: Poly,
}

/// Builds `g_c, h_c` from the roots `theta, theta^q` of `t^2 - t - c`:
///
/// `g = (theta (x + theta^q)^D - theta^q (x + theta)^D) / (theta^q - theta)`,
/// `h = ((x + theta)^D - (x + theta^q)^D) / (theta^q - theta)`,
///
/// both then scaled so `g` is monic. Every structural property is checked.
pub fn build_qc(ctx: &FieldCtx, c: &FieldElement) -> Result<QcContext> {
    if c.ctx() != ctx {
        return Err(Error::ContextMismatch);
    }
    if !quadratic_is_irreducible(c)? {
        return Err(Error::pre(format!("x^2 - x - {c} is reducible")));
    }
    let order = Pgl2Class::a_c(c)?.order()?;
    let q = ctx.cardinality();
    if order <= 2 || (&q + 1u32) % order != num_bigint::BigUint::from(0u32) {
        return Err(Error::internal(format!("[A_{c}] has order {order}, which does not divide q + 1")));
    }
    let modulus = Poly::new(ctx.clone(), vec![-c, -&ctx.one(), ctx.one()])?;
    let quad = FieldCtx::extend(ctx, &modulus)?;
    let theta = quad.generator().expect("extension has a generator");
    let theta_q = theta.frobenius_over(ctx)?;
    if theta_q != &quad.one() - &theta {
        return Err(Error::internal("conjugate root is not 1 - theta"));
    }
    let x = Poly::x(&quad);
    let lin = &x + &Poly::constant(&theta);
    let lin_q = &x + &Poly::constant(&theta_q);
    let p = lin.pow(order);
    let pq = lin_q.pow(order);
    let scale = (&theta_q - &theta).inv()?;
    let g2 = (&pq.scale(&theta)? - &p.scale(&theta_q)?).scale(&scale)?;
    let h2 = (&p - &pq).scale(&scale)?;
    let descend = |f: &Poly| {
        f.descend_to(ctx)
            .map_err(|e| Error::internal(format!("coefficient outside F_q: {e}")))
    };
    let (g, h) = (descend(&g2)?, descend(&h2)?);
    let lead = g
        .leading()
        .ok_or_else(|| Error::internal("g_c vanished"))?
        .inv()?;
    let (g, h) = (g.scale(&lead)?, h.scale(&lead)?);

    let d = order as usize;
    if g.degree() != Some(d) || h.degree() != Some(d - 1) {
        return Err(Error::internal(format!("deg g_c, deg h_c wrong for ({g}) / ({h})")));
    }
    let map = RationalMap::new(g, h).map_err(|e| Error::internal(format!("g_c, h_c not coprime: {e}")))?;
    // Q_c(c / (x + 1)) = Q_c(x), cross-multiplied.
    let num = Poly::constant(c);
    let den = Poly::from_ints(ctx, &[1, 1]);
    let gs = map.num.homogenize(&num, &den, d)?;
    let hs = map.den.homogenize(&num, &den, d)?;
    if &gs * &map.den != &map.num * &hs {
        return Err(Error::internal("Q_c is not invariant under x -> c / (x + 1)"));
    }
    Ok(QcContext {
        ctx: ctx.clone(),
        c: c.clone(),
        order,
        quad,
        theta,
        map,
    })
}

impl QcContext {
    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn c(&self) -> &FieldElement {
        &self.c
    }

    /// `D`, the order of `[A_c]` and the degree of `Q_c`.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// `F_q[t] / (t^2 - t - c)`.
    pub fn quad(&self) -> &FieldCtx {
        &self.quad
    }

    pub fn theta(&self) -> &FieldElement {
        &self.theta
    }

    pub fn map(&self) -> &RationalMap {
        &self.map
    }

    pub fn g(&self) -> &Poly {
        &self.map.num
    }

    pub fn h(&self) -> &Poly {
        &self.map.den
    }

    pub fn a_c(&self) -> Pgl2Class {
        Pgl2Class::a_c(&self.c).expect("validated")
    }

    pub fn transform(&self, f: &Poly) -> Result<Poly> {
        q_transform(f, &self.map)
    }

    /// `M(f^{Q_c})`: the transform scaled to be monic.
    pub fn transform_monic(&self, f: &Poly) -> Result<Poly> {
        if f.ctx() != &self.ctx {
            return Err(Error::ContextMismatch);
        }
        if f.degree().is_none_or(|n| n == 0) {
            return Err(Error::pre("transform input must have positive degree"));
        }
        Ok(self.transform(f)?.monic())
    }

    pub fn summary(&self) -> QcSummary {
        QcSummary {
            q: self.ctx.cardinality().to_string(),
            c: self.c.clone(),
            d: self.order,
            g_c: self.g().clone(),
            h_c: self.h().clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(ctx: &FieldCtx, c: &[i64]) -> Poly {
        Poly::from_ints(ctx, c)
    }

    #[test]
    fn q2_c1() {
        let f2 = FieldCtx::prime(2).unwrap();
        let qc = build_qc(&f2, &f2.one()).unwrap();
        assert_eq!(qc.order(), 3);
        assert_eq!(qc.g(), &p(&f2, &[1, 1, 0, 1]));
        assert_eq!(qc.h(), &p(&f2, &[0, 1, 1]));
        assert!(build_qc(&f2, &f2.zero()).is_err());
    }

    #[test]
    fn q5_c3() {
        let f5 = FieldCtx::prime(5).unwrap();
        let qc = build_qc(&f5, &f5.from_int(3)).unwrap();
        assert_eq!(qc.order(), 6);
        assert_eq!(qc.g().to_string(), "x^6 + x + 2");
        assert_eq!(qc.h().to_string(), "x^5 + 4x");
    }

    #[test]
    fn transforms() {
        let f2 = FieldCtx::prime(2).unwrap();
        let qc = build_qc(&f2, &f2.one()).unwrap();
        assert_eq!(qc.transform(&Poly::x(&f2)).unwrap(), *qc.g());
        let f1 = qc.transform_monic(&p(&f2, &[1, 0, 0, 1, 1])).unwrap();
        assert_eq!(f1.to_string(), "x^12 + x^11 + x^10 + x^9 + x^8 + x^6 + x^4 + x + 1");

        let f5 = FieldCtx::prime(5).unwrap();
        let qc = build_qc(&f5, &f5.from_int(3)).unwrap();
        let f1 = qc.transform(&p(&f5, &[3, 2, 0, 0, 0, 0, 1])).unwrap();
        assert_eq!(
            f1.to_string(),
            "x^36 + 3x^31 + 4x^26 + 4x^25 + 4x^11 + 2x^10 + 4x^6 + 3x^5 + 2x + 4"
        );
        let g = qc.transform_monic(&p(&f5, &[3, 4, 0, 1])).unwrap();
        assert_eq!(g.degree(), Some(18));
        assert!(g.is_irreducible().unwrap());
    }

    #[test]
    fn rational_map_rejects_common_factors() {
        let f2 = FieldCtx::prime(2).unwrap();
        assert!(RationalMap::new(p(&f2, &[0, 1, 1]), p(&f2, &[0, 1])).is_err());
        assert!(RationalMap::new(p(&f2, &[1, 1]), Poly::zero(&f2)).is_err());
    }
}
