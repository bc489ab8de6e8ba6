use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::big_pow;
use crate::field::numtheory::euler_phi;
use crate::pgl2::count_invariants;
use crate::poly::count_irreducibles_q;
use crate::qc::QcContext;

/// Success probability of one random draw and the expected number of draws.
#[derive(Debug, Clone, Serialize)]
pub struct ProbabilityReport {
    pub n: usize,
    #[serde(rename = "D")]
    pub d: u64,
    /// `|C_{A_c}(Dn)|`.
    pub invariants: String,
    /// `|I_n|`.
    pub irreducibles: String,
    #[serde(serialize_with = "as_text")]
    pub p: BigRational,
    pub p_approx: f64,
    /// `1 - 3 / q^{n/2}`; exact only for even `n`.
    pub tau: f64,
    #[serde(serialize_with = "opt_as_text")]
    pub tau_exact: Option<BigRational>,
    /// `phi(D)/D * tau`.
    pub lower_bound: f64,
    #[serde(serialize_with = "opt_as_text")]
    pub lower_bound_exact: Option<BigRational>,
    #[serde(serialize_with = "as_text")]
    pub expected_trials: BigRational,
    pub expected_trials_approx: f64,
    /// Whether `p >= lower_bound` was checked (only when `tau > 0`).
    pub bound_checked: bool,
}

fn as_text<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(r)
}

fn opt_as_text<S: serde::Serializer>(r: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.collect_str(r),
        None => s.serialize_none(),
    }
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn transform_probability(n: usize, qc: &QcContext) -> Result<ProbabilityReport> {
    let d = qc.order();
    if n == 0 || d as usize * n <= 2 {
        return Err(Error::pre("need n >= 1 and D * n > 2"));
    }
    let q = qc.ctx().cardinality();
    let inv = count_invariants(&q, d, n as u64)?;
    let irr = count_irreducibles_q(&q, n as u64);
    let big = |x: &BigUint| BigInt::from(x.clone());
    let p = BigRational::new(big(&inv), big(&irr));
    let ratio = BigRational::new(BigInt::from(euler_phi(d)), BigInt::from(d));

    let q_n = big_pow(&q, n);
    let qf = q.to_f64().unwrap_or(f64::INFINITY);
    let tau = 1.0 - 3.0 / qf.powf(n as f64 / 2.0);
    let tau_exact = (n % 2 == 0).then(|| {
        let half = big(&big_pow(&q, n / 2));
        BigRational::from_integer(1.into()) - BigRational::new(3.into(), half)
    });
    let lower_bound_exact = tau_exact.as_ref().map(|t| &ratio * t);
    let lower_bound = match &lower_bound_exact {
        Some(l) => to_f64(l),
        None => to_f64(&ratio) * tau,
    };

    // p >= r (1 - 3 q^{-n/2})  <=>  r - p <= 3 r q^{-n/2}, squared when r > p.
    let tau_positive = q_n > BigUint::from(9u32);
    if tau_positive {
        let gap = &ratio - &p;
        if gap > BigRational::zero() {
            let lhs = &gap * &gap * BigRational::from_integer(big(&q_n));
            let rhs = BigRational::from_integer(9.into()) * &ratio * &ratio;
            if lhs > rhs {
                return Err(Error::internal(format!(
                    "p = {p} is below the lower bound {lower_bound} for n = {n}, D = {d}"
                )));
            }
        }
    }
    if p.is_zero() {
        return Err(Error::internal(format!("no invariants of degree {} over F_{q}", d as usize * n)));
    }
    let expected = p.recip();
    Ok(ProbabilityReport {
        n,
        d,
        invariants: inv.to_string(),
        irreducibles: irr.to_string(),
        p_approx: to_f64(&p),
        p,
        tau,
        tau_exact,
        lower_bound,
        lower_bound_exact,
        expected_trials_approx: to_f64(&expected),
        expected_trials: expected,
        bound_checked: tau_positive,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldCtx;
    use crate::qc::build_qc;

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn q2_quartics() {
        let f2 = FieldCtx::prime(2).unwrap();
        let qc = build_qc(&f2, &f2.one()).unwrap();
        let r = transform_probability(4, &qc).unwrap();
        assert_eq!(r.p, rat(2, 3));
        assert_eq!(r.tau_exact, Some(rat(1, 4)));
        assert_eq!(r.lower_bound_exact, Some(rat(1, 6)));
        assert_eq!(r.expected_trials, rat(3, 2));
        assert!(r.bound_checked);
    }

    #[test]
    fn q2_cubics_is_odd_degree() {
        let f2 = FieldCtx::prime(2).unwrap();
        let qc = build_qc(&f2, &f2.one()).unwrap();
        let r = transform_probability(3, &qc).unwrap();
        assert_eq!(r.irreducibles, "2");
        assert!(r.tau_exact.is_none());
        assert!(r.tau < 0.0);
        assert!(!r.bound_checked);
    }

    #[test]
    fn tau_is_close_to_one_from_24() {
        let f2 = FieldCtx::prime(2).unwrap();
        let qc = build_qc(&f2, &f2.one()).unwrap();
        for n in [24, 25, 30] {
            let r = transform_probability(n, &qc).unwrap();
            assert!(r.tau >= 0.999, "n = {n}");
        }
    }
}
