//! Fixed inputs shared by the benchmarks.

use qctower::{FieldCtx, Poly};

/// `(q, c, seed polynomial)` triples used across benches.
pub const SEEDS: &[(u64, i64, &str)] = &[(2, 1, "x^4 + x^3 + 1"), (5, 3, "x^6 + 2x + 3")];

pub fn seed(q: u64, text: &str) -> (FieldCtx, Poly) {
    let ctx = FieldCtx::prime(q).expect("prime");
    let f = Poly::parse(&ctx, text).expect("valid seed");
    (ctx, f)
}
