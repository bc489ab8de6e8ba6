//! Polynomial text format: `x^12 + x^11 + x + 1`, decreasing degree,
//! coefficient 1 suppressed, constants as integers mod p. Extension-field
//! coefficients are written as digit lists `[d0,d1,...]`.

use std::fmt::Write;

use super::Poly;
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ParseMode {
    /// Integer coefficients must lie in `[0, p)` (a leading `-` is still allowed).
    #[default]
    Strict,
    /// Integer coefficients are reduced mod p.
    Lenient,
}

pub fn format_poly(f: &Poly) -> String {
    let Some(deg) = f.degree() else {
        return "0".to_string();
    };
    let mut out = String::new();
    for k in (0..=deg).rev() {
        let c = f.coeff(k);
        if c.is_zero() {
            continue;
        }
        if !out.is_empty() {
            out.push_str(" + ");
        }
        if !c.is_one() || k == 0 {
            write!(out, "{c}").unwrap();
        }
        match k {
            0 => {}
            1 => out.push('x'),
            _ => write!(out, "x^{k}").unwrap(),
        }
    }
    out
}

pub fn parse_poly(text: &str, ctx: &FieldCtx, mode: ParseMode) -> Result<Poly> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut coeffs: Vec<FieldElement> = Vec::new();
    for (negative, term) in split_terms(&s)? {
        let (c, k) = parse_term(term, ctx, mode)?;
        let c = if negative { -c } else { c };
        if coeffs.len() <= k {
            coeffs.resize(k + 1, ctx.zero());
        }
        coeffs[k] = &coeffs[k] + &c;
    }
    Poly::new(ctx.clone(), coeffs)
}

impl serde::Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_poly(self))
    }
}

impl Poly {
    /// Strict parse of the text format.
    pub fn parse(ctx: &FieldCtx, text: &str) -> Result<Poly> {
        parse_poly(text, ctx, ParseMode::Strict)
    }
}

fn split_terms(s: &str) -> Result<Vec<(bool, &str)>> {
    let mut terms = Vec::new();
    let bytes = s.as_bytes();
    let mut depth = 0usize;
    let mut start = 0;
    let mut negative = false;
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'[' | b'{' => depth += 1,
            b']' | b'}' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| Error::Parse(format!("unbalanced bracket in {s:?}")))?
            }
            b'+' | b'-' if depth == 0 => {
                if i > start {
                    terms.push((negative, &s[start..i]));
                } else if i > 0 {
                    return Err(Error::Parse(format!("empty term in {s:?}")));
                }
                negative = bytes[i] == b'-';
                start = i + 1;
            }
            _ => {}
        }
        i += 1;
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced bracket in {s:?}")));
    }
    if start >= s.len() {
        return Err(Error::Parse(format!("dangling sign in {s:?}")));
    }
    terms.push((negative, &s[start..]));
    Ok(terms)
}

fn parse_term(term: &str, ctx: &FieldCtx, mode: ParseMode) -> Result<(FieldElement, usize)> {
    let bad = || Error::Parse(format!("malformed monomial {term:?}"));
    let (coef_text, mono) = match term.find('x') {
        Some(i) => (&term[..i], Some(&term[i + 1..])),
        None => (term, None),
    };
    let coef_text = coef_text.strip_suffix('*').unwrap_or(coef_text);
    if coef_text.is_empty() && mono.is_none() {
        return Err(bad());
    }
    let c = if coef_text.is_empty() {
        ctx.one()
    } else {
        parse_coeff(coef_text, ctx, mode)?
    };
    let k = match mono {
        None => 0,
        Some("") => 1,
        Some(rest) => {
            let e = rest.strip_prefix('^').ok_or_else(bad)?;
            let e = e
                .strip_prefix('{')
                .and_then(|e| e.strip_suffix('}'))
                .unwrap_or(e);
            if e.is_empty() || !e.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            e.parse::<usize>().map_err(|_| bad())?
        }
    };
    Ok((c, k))
}

fn parse_coeff(text: &str, ctx: &FieldCtx, mode: ParseMode) -> Result<FieldElement> {
    let p = ctx.characteristic();
    let digit = |d: &str| -> Result<u64> {
        if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("bad coefficient {text:?}")));
        }
        // Arbitrarily long digit strings are reduced without overflow.
        let mut v: u128 = 0;
        let mut overflow = false;
        for b in d.bytes() {
            v = v * 10 + (b - b'0') as u128;
            if v >= p as u128 {
                overflow = true;
                v %= p as u128;
            }
        }
        if overflow && mode == ParseMode::Strict {
            return Err(Error::Parse(format!(
                "coefficient {d} is not reduced mod {p}"
            )));
        }
        Ok(v as u64)
    };
    if let Some(inner) = text.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
        let digits = inner.split(',').map(digit).collect::<Result<Vec<_>>>()?;
        if digits.len() != ctx.degree_over_prime() {
            return Err(Error::Parse(format!(
                "expected {} digits in {text:?}",
                ctx.degree_over_prime()
            )));
        }
        ctx.element_from_digits(&digits)
    } else {
        Ok(ctx.element_from_index(digit(text)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn formats_canonically() {
        let f2 = FieldCtx::prime(2).unwrap();
        let f1 = Poly::from_ints(&f2, &[1, 1, 0, 0, 1, 0, 1, 0, 1, 1, 1, 1, 1]);
        assert_eq!(
            f1.to_string(),
            "x^12 + x^11 + x^10 + x^9 + x^8 + x^6 + x^4 + x + 1"
        );
        let f5 = FieldCtx::prime(5).unwrap();
        assert_eq!(Poly::from_ints(&f5, &[0, 4, 0, 3]).to_string(), "3x^3 + 4x");
        assert_eq!(Poly::zero(&f5).to_string(), "0");
        assert_eq!(Poly::one(&f5).to_string(), "1");
    }

    #[test]
    fn parses_variants() {
        let f5 = FieldCtx::prime(5).unwrap();
        let want = Poly::from_ints(&f5, &[2, 1, 0, 0, 0, 0, 1]);
        for s in ["x^6+x+2", " x ^ 6 + x + 2 ", "x^{6} + 1*x - 3", "2 + x + x^6", "x^6 + x - 4 + 1"] {
            assert_eq!(Poly::parse(&f5, s).unwrap(), want, "{s}");
        }
        assert!(Poly::parse(&f5, "7x").is_err());
        assert_eq!(
            parse_poly("7x", &f5, ParseMode::Lenient).unwrap(),
            Poly::from_ints(&f5, &[0, 2])
        );
        for s in ["", "x^", "x^a", "y", "x++1", "x+", "[1,2]x"] {
            assert!(Poly::parse(&f5, s).is_err(), "{s}");
        }
        assert!(Poly::parse(&f5, "-x").unwrap() == Poly::from_ints(&f5, &[0, 4]));
    }

    #[test]
    fn extension_coefficients_round_trip() {
        let f2 = FieldCtx::prime(2).unwrap();
        let f4 = FieldCtx::extend(&f2, &Poly::from_ints(&f2, &[1, 1, 1])).unwrap();
        let t = f4.generator().unwrap();
        let f = Poly::new(f4.clone(), vec![t.clone(), f4.one(), t]).unwrap();
        let s = f.to_string();
        assert_eq!(s, "[0,1]x^2 + x + [0,1]");
        assert_eq!(Poly::parse(&f4, &s).unwrap(), f);
    }

    proptest! {
        #[test]
        fn round_trip(p in prop::sample::select(vec![2u64, 3, 5, 7, 101]),
                      coeffs in prop::collection::vec(0i64..1000, 0..20)) {
            let ctx = FieldCtx::prime(p).unwrap();
            let f = Poly::from_ints(&ctx, &coeffs);
            let s = f.to_string();
            prop_assert_eq!(Poly::parse(&ctx, &s).unwrap(), f);
        }
    }
}
