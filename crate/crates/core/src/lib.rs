//! Irreducible polynomials of high degree over finite fields, built by
//! iterating canonical rational transformations `Q_c = g_c / h_c` attached to
//! elements of PGL2(F_q).

pub mod construct;
pub mod error;
pub mod field;
pub mod pgl2;
pub mod poly;
pub mod qc;

pub use error::{Error, Result};
pub use field::{FactorBudget, FieldCtx, FieldElement};
pub use poly::text::{format_poly, parse_poly, ParseMode};
pub use poly::{
    count_irreducibles, enumerate_irreducibles, enumerate_monic, factor, random_irreducible, Factorization, Poly,
};
pub use pgl2::Pgl2Class;
pub use qc::{build_qc, QcContext, RationalMap};
pub use construct::{
    build_graph, build_tower, conjecture_scan, random_construct, recursive_construct, transform_probability,
    Method, ProbabilityReport, QcGraph, Role, ScanEntry, ScanOutcome, ScanReport, Step, TowerReport,
};
