//! Construction pipelines built on `Q_c`: recursive search, random
//! sampling, towers, plus the functional graph and the conjecture scanner.

mod graph;
mod probability;
mod scan;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::numtheory::FactorBudget;
use crate::field::FieldCtx;
use crate::poly::{factor, random_irreducible, Factorization, Poly};
use crate::qc::{is_qc_periodic, iteration_bound, QcContext, QcSummary};

pub use graph::{build_graph, QcGraph};
pub use probability::{transform_probability, ProbabilityReport};
pub use scan::{conjecture_scan, ScanEntry, ScanOutcome, ScanReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Recursive,
    Random,
    Tower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    /// The input polynomial.
    Seed,
    /// A factor of a reducible transform, fed back in.
    Branch,
    /// An irreducible transform.
    Transform,
}

#[derive(Debug, Clone, Serialize)]
pub struct Step {
    pub role: Role,
    pub degree: usize,
    /// `None` when verification was skipped.
    pub irreducible: Option<bool>,
    pub poly: Poly,
}

impl Step {
    fn new(role: Role, poly: Poly, irreducible: Option<bool>) -> Step {
        Step {
            role,
            degree: poly.degree().unwrap_or(0),
            irreducible,
            poly,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TowerReport {
    pub method: Method,
    pub qc: QcSummary,
    pub steps: Vec<Step>,
    /// Step 1/Step 2 rounds after the first split (index of the round whose
    /// transform came out irreducible).
    pub iterations_used: u64,
    /// Reducible transforms that had to be factored.
    pub splits: u64,
    pub bound: Option<u32>,
    /// Branches still tracked when the search ended.
    pub branches: Option<usize>,
    pub trials: Option<u64>,
    pub rng_seed: Option<u64>,
}

impl TowerReport {
    fn new(method: Method, qc: &QcContext) -> TowerReport {
        TowerReport {
            method,
            qc: qc.summary(),
            steps: Vec::new(),
            iterations_used: 0,
            splits: 0,
            bound: None,
            branches: None,
            trials: None,
            rng_seed: None,
        }
    }

    /// The last polynomial produced.
    pub fn result(&self) -> &Poly {
        &self.steps.last().expect("reports hold at least one step").poly
    }

    /// Polynomials with the given role, in order.
    pub fn polys(&self, role: Role) -> Vec<&Poly> {
        self.steps.iter().filter(|s| s.role == role).map(|s| &s.poly).collect()
    }
}

fn require_irreducible_seed(f: &Poly, qc: &QcContext, min_degree: usize) -> Result<usize> {
    if f.ctx() != qc.ctx() {
        return Err(Error::ContextMismatch);
    }
    let n = f.degree().unwrap_or(0);
    if n < min_degree {
        return Err(Error::pre(format!("seed must have degree >= {min_degree}")));
    }
    if !f.is_monic() || !f.is_irreducible()? {
        return Err(Error::pre(format!("seed {f} must be monic irreducible")));
    }
    Ok(n)
}

/// A reducible transform of an irreducible degree-`n` polynomial under
/// prime-degree `Q_c` splits into exactly `D` distinct degree-`n` factors.
fn split_transform(t: &Poly, n: usize, d: u64) -> Result<Factorization> {
    let fac = factor(t)?;
    let ok = fac.factors.len() as u64 == d
        && fac.factors.iter().all(|(g, m)| *m == 1 && g.degree() == Some(n));
    if !ok {
        return Err(Error::internal(format!(
            "transform of degree {} split as {:?}, not {d} distinct factors of degree {n}",
            t.degree().unwrap_or(0),
            fac.degrees()
        )));
    }
    Ok(fac)
}

fn certified_non_periodic(f: &Poly, qc: &QcContext, budget: &FactorBudget) -> Result<bool> {
    match is_qc_periodic(f, qc, budget) {
        Ok(p) => Ok(!p),
        Err(Error::OrderUnavailable(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Step 1: if `f^{Q_c}` is irreducible, stop. Step 2: otherwise continue with
/// a factor. Two branches (the two least factors of the first split) are
/// followed breadth-first, or one once a tracked node is certified
/// non-periodic. Exceeding the iteration bound is an internal error.
pub fn recursive_construct(f: &Poly, qc: &QcContext, budget: &FactorBudget) -> Result<TowerReport> {
    let n = require_irreducible_seed(f, qc, 3)?;
    let bound = iteration_bound(n, qc)?;
    let d = qc.order();
    let mut report = TowerReport::new(Method::Recursive, qc);
    report.bound = Some(bound);
    report.steps.push(Step::new(Role::Seed, f.clone(), Some(true)));

    let first = qc.transform_monic(f)?;
    if first.is_irreducible()? {
        report.steps.push(Step::new(Role::Transform, first, Some(true)));
        report.branches = Some(0);
        return Ok(report);
    }
    let fac = split_transform(&first, n, d)?;
    report.splits = 1;
    let mut branches: Vec<Vec<Poly>> = fac.factors.iter().take(2).map(|(g, _)| vec![g.clone()]).collect();
    if certified_non_periodic(f, qc, budget)? {
        // No factor of a non-periodic seed is periodic.
        branches.truncate(1);
    }
    for round in 0..=bound {
        if branches.len() > 1 {
            for i in 0..branches.len() {
                let node = branches[i].last().expect("nonempty chain");
                if certified_non_periodic(node, qc, budget)? {
                    branches = vec![branches.swap_remove(i)];
                    break;
                }
            }
        }
        let mut next = Vec::with_capacity(branches.len());
        for mut chain in branches {
            let node = chain.last().expect("nonempty chain");
            let t = qc.transform_monic(node)?;
            if t.is_irreducible()? {
                for g in chain {
                    report.steps.push(Step::new(Role::Branch, g, Some(true)));
                }
                report.steps.push(Step::new(Role::Transform, t, Some(true)));
                report.iterations_used = round as u64;
                report.branches = Some(next.len() + 1);
                return Ok(report);
            }
            let fac = split_transform(&t, n, d)?;
            report.splits += 1;
            chain.push(fac.factors[0].0.clone());
            next.push(chain);
        }
        branches = next;
    }
    Err(Error::internal(format!(
        "no branch from {f} reached an irreducible transform within {bound} iterations"
    )))
}

/// Draw random irreducibles of degree `n` until one has an irreducible
/// transform.
pub fn random_construct<R: Rng + ?Sized>(
    ctx: &FieldCtx,
    n: usize,
    qc: &QcContext,
    rng: &mut R,
    max_trials: u64,
) -> Result<TowerReport> {
    if ctx != qc.ctx() {
        return Err(Error::ContextMismatch);
    }
    if qc.order() as usize * n <= 2 {
        return Err(Error::pre("need D * n > 2"));
    }
    for trial in 1..=max_trials {
        let f = random_irreducible(ctx, n, rng)?;
        let t = qc.transform_monic(&f)?;
        if t.is_irreducible()? {
            let mut report = TowerReport::new(Method::Random, qc);
            report.steps.push(Step::new(Role::Seed, f, Some(true)));
            report.steps.push(Step::new(Role::Transform, t, Some(true)));
            report.trials = Some(trial);
            return Ok(report);
        }
    }
    Err(Error::TrialsExhausted { trials: max_trials })
}

/// `f_i = M(f_{i-1}^{Q_c})` for `i = 1..=depth`. Needs `f_1` irreducible
/// and `n` even or `D != 2 (mod 4)`, under which every level is
/// irreducible; `verify` re-checks each level anyway.
pub fn build_tower(f0: &Poly, qc: &QcContext, depth: usize, verify: bool) -> Result<TowerReport> {
    let n = require_irreducible_seed(f0, qc, 3)?;
    let d = qc.order();
    if n % 2 == 1 && d % 4 == 2 {
        return Err(Error::pre(format!(
            "degree {n} is odd and D = {d} is 2 mod 4, so the second transform may split in two; \
             start from an even-degree seed or choose c with D != 2 (mod 4)"
        )));
    }
    let mut report = TowerReport::new(Method::Tower, qc);
    report.steps.push(Step::new(Role::Seed, f0.clone(), Some(true)));
    let mut cur = f0.clone();
    for level in 1..=depth {
        let next = qc.transform_monic(&cur)?;
        let irreducible = if level == 1 || verify {
            Some(next.is_irreducible()?)
        } else {
            None
        };
        match irreducible {
            Some(false) if level == 1 => {
                return Err(Error::pre(format!("the transform of {f0} is reducible")));
            }
            Some(false) => {
                return Err(Error::internal(format!("tower level {level} is reducible")));
            }
            _ => {}
        }
        report.steps.push(Step::new(Role::Transform, next.clone(), irreducible));
        report.iterations_used = level as u64;
        cur = next;
    }
    Ok(report)
}
