//! Shared fixtures for the integration tests.
#![allow(dead_code)]

use qctower::{build_qc, FieldCtx, Poly, QcContext};

/// Tower from `x^4 + x^3 + 1` under `Q_1` over F_2, levels 0 to 4.
pub const TOWER_Q2: &[&str] = &[
    "x^4 + x^3 + 1",
    "x^12 + x^11 + x^10 + x^9 + x^8 + x^6 + x^4 + x + 1",
    "x^36 + x^35 + x^32 + x^28 + x^27 + x^26 + x^20 + x^17 + x^12 + x^11 + x^9 + x^8 + x^4 + x^3 + x^2 + x + 1",
    "x^108 + x^107 + x^106 + x^105 + x^104 + x^102 + x^99 + x^91 + x^90 + x^89 + x^88 + x^86 + x^84 + x^83 + x^80 + x^75 + x^73 + x^68 + x^67 + x^66 + x^64 + x^60 + x^58 + x^54 + x^50 + x^48 + x^44 + x^43 + x^42 + x^40 + x^36 + x^34 + x^33 + x^32 + x^27 + x^22 + x^17 + x^12 + x^11 + x^6 + x^4 + x + 1",
    "x^324 + x^323 + x^320 + x^308 + x^307 + x^306 + x^291 + x^290 + x^289 + x^274 + x^273 + x^272 + x^259 + x^258 + x^257 + x^256 + x^244 + x^243 + x^242 + x^228 + x^227 + x^225 + x^224 + x^210 + x^209 + x^208 + x^195 + x^192 + x^180 + x^179 + x^177 + x^176 + x^164 + x^161 + x^148 + x^147 + x^146 + x^131 + x^130 + x^129 + x^114 + x^113 + x^112 + x^100 + x^99 + x^98 + x^84 + x^83 + x^81 + x^80 + x^67 + x^50 + x^49 + x^48 + x^35 + x^32 + x^20 + x^19 + x^17 + x^16 + x^4 + x^3 + x^2 + x + 1",
];

/// Tower from `x^6 + 2x + 3` under `Q_3` over F_5, levels 0 to 2.
pub const TOWER_Q5: &[&str] = &[
    "x^6 + 2x + 3",
    "x^36 + 3x^31 + 4x^26 + 4x^25 + 4x^11 + 2x^10 + 4x^6 + 3x^5 + 2x + 4",
    "x^216 + 4x^211 + 2x^210 + 2x^206 + 3x^200 + 3x^191 + 2x^190 + 4x^186 + x^185 + x^181 + 4x^176 + x^175 + x^166 + 3x^156 + 4x^155 + x^151 + 4x^150 + 2x^141 + 3x^140 + 2x^136 + x^135 + 2x^131 + 4x^130 + 3x^126 + 2x^125 + 2x^91 + 3x^90 + 3x^86 + x^85 + 4x^81 + 3x^80 + 2x^76 + 4x^75 + 2x^66 + 4x^65 + 2x^61 + 3x^60 + x^56 + 4x^51 + 2x^50 + 3x^41 + x^40 + 3x^35 + x^31 + 3x^30 + 3x^26 + 4x^16 + 3x^15 + 2x^11 + 3x^10 + 4x^6 + 2x^5 + 3x + 1",
];

pub fn field(q: u64) -> FieldCtx {
    FieldCtx::prime(q).unwrap()
}

pub fn qc(q: u64, c: i64) -> QcContext {
    let f = field(q);
    build_qc(&f, &f.from_int(c)).unwrap()
}

pub fn poly(ctx: &FieldCtx, text: &str) -> Poly {
    Poly::parse(ctx, text).unwrap()
}
