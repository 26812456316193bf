//! Text form of integer-coefficient polynomials, e.g. `x^3+0*x^2-2*x+7`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Parses a polynomial in `x` into coefficients, lowest degree first.
/// Repeated powers are summed; the result is not trimmed.
pub fn parse_int_poly(s: &str) -> Result<Vec<BigInt>> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let bytes = compact.as_bytes();
    let mut coeffs: Vec<BigInt> = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let mut negative = false;
        if bytes[i] == b'+' || bytes[i] == b'-' {
            negative = bytes[i] == b'-';
            i += 1;
        } else if i != 0 {
            return Err(Error::Parse(format!("expected '+' or '-' at offset {i} in {s:?}")));
        }
        let start = i;
        while i < bytes.len() && bytes[i] != b'+' && bytes[i] != b'-' {
            i += 1;
        }
        let (coeff, exp) = parse_term(&compact[start..i])?;
        let coeff = if negative { -coeff } else { coeff };
        if coeffs.len() <= exp {
            coeffs.resize(exp + 1, BigInt::zero());
        }
        coeffs[exp] += coeff;
    }
    Ok(coeffs)
}

fn parse_term(term: &str) -> Result<(BigInt, usize)> {
    if term.is_empty() {
        return Err(Error::Parse("empty term".into()));
    }
    let bad = || Error::Parse(format!("malformed term {term:?}"));
    match term.find('x') {
        None => Ok((term.parse::<BigInt>().map_err(|_| bad())?, 0)),
        Some(pos) => {
            let head = &term[..pos];
            let coeff = if head.is_empty() {
                BigInt::one()
            } else {
                let head = head.strip_suffix('*').ok_or_else(bad)?;
                head.parse::<BigInt>().map_err(|_| bad())?
            };
            let tail = &term[pos + 1..];
            let exp = if tail.is_empty() {
                1
            } else {
                tail.strip_prefix('^')
                    .ok_or_else(bad)?
                    .parse::<usize>()
                    .map_err(|_| bad())?
            };
            Ok((coeff, exp))
        }
    }
}

/// Renders coefficients (lowest degree first) high-to-low, skipping zeros.
pub fn format_int_poly<C: std::fmt::Display>(coeffs: &[C], is_zero: impl Fn(&C) -> bool, is_negative: impl Fn(&C) -> bool) -> String {
    let mut out = String::new();
    for (exp, c) in coeffs.iter().enumerate().rev() {
        if is_zero(c) {
            continue;
        }
        let text = c.to_string();
        let (neg, mag) = if is_negative(c) {
            (true, text.trim_start_matches('-').to_string())
        } else {
            (false, text)
        };
        if neg {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        match exp {
            0 => out.push_str(&mag),
            _ => {
                if mag != "1" {
                    out.push_str(&mag);
                    out.push('*');
                }
                out.push('x');
                if exp > 1 {
                    out.push('^');
                    out.push_str(&exp.to_string());
                }
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn format_bigint_poly(coeffs: &[BigInt]) -> String {
    format_int_poly(coeffs, |c| c.is_zero(), |c| c.is_negative())
}
