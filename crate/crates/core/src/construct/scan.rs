use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::poly::{enumerate_irreducibles, factor, Poly};
use crate::qc::{QcContext, QcSummary};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanOutcome {
    /// `(f^{Q_c})^{Q_c}` irreducible: a counterexample candidate.
    Irreducible,
    /// Two irreducible factors of degree `nD^2/2`.
    TwoWay,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanEntry {
    pub seed: Poly,
    pub first: Poly,
    pub outcome: ScanOutcome,
    pub factor_degrees: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub qc: QcSummary,
    pub n: usize,
    /// Irreducibles of degree `n` examined.
    pub seeds_scanned: usize,
    /// Those whose first transform is irreducible.
    pub eligible: usize,
    pub irreducible: usize,
    pub two_way: usize,
    pub other: usize,
    /// True when `max_seeds` cut the scan short.
    pub partial: bool,
    pub entries: Vec<ScanEntry>,
}

impl ScanReport {
    pub fn counterexamples(&self) -> impl Iterator<Item = &ScanEntry> {
        self.entries.iter().filter(|e| e.outcome == ScanOutcome::Irreducible)
    }
}

/// For odd `n` and `D = 2 (mod 4)`, tally how `(f^{Q_c})^{Q_c}` factors over
/// the irreducibles `f` of degree `n` with `f^{Q_c}` irreducible. Any
/// factorization other than the two permitted shapes is an internal error.
pub fn conjecture_scan(ctx: &FieldCtx, n: usize, qc: &QcContext, max_seeds: usize) -> Result<ScanReport> {
    if ctx != qc.ctx() {
        return Err(Error::ContextMismatch);
    }
    let d = qc.order() as usize;
    if n % 2 == 0 || d % 4 != 2 {
        return Err(Error::pre(format!("scan needs odd n and D = 2 (mod 4), got n = {n}, D = {d}")));
    }
    let mut seeds = enumerate_irreducibles(ctx, n)?;
    let partial = seeds.len() > max_seeds;
    seeds.truncate(max_seeds);
    let half = n * d * d / 2;
    let results: Result<Vec<Option<ScanEntry>>> = seeds
        .par_iter()
        .map(|f| {
            let first = qc.transform_monic(f)?;
            if !first.is_irreducible()? {
                return Ok(None);
            }
            let second = qc.transform_monic(&first)?;
            let fac = factor(&second)?;
            let degrees = fac.degrees();
            let outcome = if degrees == [n * d * d] {
                ScanOutcome::Irreducible
            } else if degrees == [half, half] && fac.is_squarefree() {
                ScanOutcome::TwoWay
            } else {
                return Err(Error::internal(format!(
                    "second transform of {f} factors with degrees {degrees:?}"
                )));
            };
            Ok(Some(ScanEntry {
                seed: f.clone(),
                first,
                outcome,
                factor_degrees: degrees,
            }))
        })
        .collect();
    let entries: Vec<ScanEntry> = results?.into_iter().flatten().collect();
    let irreducible = entries.iter().filter(|e| e.outcome == ScanOutcome::Irreducible).count();
    Ok(ScanReport {
        qc: qc.summary(),
        n,
        seeds_scanned: seeds.len(),
        eligible: entries.len(),
        irreducible,
        two_way: entries.len() - irreducible,
        other: 0,
        partial,
        entries,
    })
}
