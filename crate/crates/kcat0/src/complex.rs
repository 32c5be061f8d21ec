//! Complex literals: `a+bi`, `-2i`, `1/3`, `2i/3`, `1e-3-4.5i`, and
//! comma-separated points of C^d.

use std::fmt::Write as _;

use kcat0_core::point::{c, CPoint};
use kcat0_core::Complex64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("invalid complex literal {input:?}: {reason}")]
pub struct ParseComplexError {
    pub input: String,
    pub reason: &'static str,
}

fn err(input: &str, reason: &'static str) -> ParseComplexError {
    ParseComplexError { input: input.to_string(), reason }
}

/// Splits at top-level `+`/`-` signs, keeping exponent signs attached.
fn terms(s: &str) -> Vec<&str> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..bytes.len() {
        let b = bytes[i];
        if (b == b'+' || b == b'-') && !matches!(bytes[i - 1], b'e' | b'E' | b'/') {
            out.push(&s[start..i]);
            start = i;
        }
    }
    out.push(&s[start..]);
    out
}

fn real(s: &str, whole: &str) -> Result<f64, ParseComplexError> {
    let parse = |t: &str| t.parse::<f64>().map_err(|_| err(whole, "bad number"));
    match s.split_once('/') {
        Some((p, q)) => {
            let den = parse(q)?;
            if den == 0.0 {
                return Err(err(whole, "zero denominator"));
            }
            Ok(parse(p)? / den)
        }
        None => parse(s),
    }
}

pub fn parse_complex(input: &str) -> Result<Complex64, ParseComplexError> {
    let s: String = input.chars().filter(|ch| !ch.is_whitespace()).collect();
    if s.is_empty() {
        return Err(err(input, "empty"));
    }
    let (mut re, mut im): (Option<f64>, Option<f64>) = (None, None);
    for t in terms(&s) {
        let (sign, body) = match t.as_bytes()[0] {
            b'-' => (-1.0, &t[1..]),
            b'+' => (1.0, &t[1..]),
            _ => (1.0, t),
        };
        if body.is_empty() {
            return Err(err(input, "dangling sign"));
        }
        if body.contains('i') || body.contains('j') {
            // `bi`, `i`, `b*i`, `bi/q`
            let cleaned = body.replacen('*', "", 1);
            let (num, den) = match cleaned.split_once('/') {
                Some((n, d)) => (n.to_string(), Some(d.to_string())),
                None => (cleaned.clone(), None),
            };
            let coef = num.trim_end_matches(['i', 'j']);
            if coef.len() + 1 != num.len() {
                return Err(err(input, "imaginary unit must end the term"));
            }
            let mut v = if coef.is_empty() { 1.0 } else { real(coef, input)? };
            if let Some(d) = den {
                let q = real(&d, input)?;
                if q == 0.0 {
                    return Err(err(input, "zero denominator"));
                }
                v /= q;
            }
            if im.replace(sign * v).is_some() {
                return Err(err(input, "two imaginary parts"));
            }
        } else {
            if re.replace(sign * real(body, input)?).is_some() {
                return Err(err(input, "two real parts"));
            }
        }
    }
    Ok(c(re.unwrap_or(0.0), im.unwrap_or(0.0)))
}

/// Comma-separated coordinates.
pub fn parse_point(input: &str) -> Result<CPoint, ParseComplexError> {
    let coords = input.split(',').map(parse_complex).collect::<Result<Vec<_>, _>>()?;
    CPoint::new(coords).map_err(|_| err(input, "non-finite coordinate"))
}

/// Shortest representation that parses back to the same value.
pub fn format_complex(z: Complex64) -> String {
    let mut s = String::new();
    if z.im == 0.0 && z.im.is_sign_positive() {
        write!(s, "{:?}", z.re).unwrap();
        return s;
    }
    if z.re != 0.0 || z.re.is_sign_negative() {
        write!(s, "{:?}", z.re).unwrap();
        s.push(if z.im.is_sign_negative() { '-' } else { '+' });
    } else if z.im.is_sign_negative() {
        s.push('-');
    }
    write!(s, "{:?}i", z.im.abs()).unwrap();
    s
}

pub fn format_point(p: &CPoint) -> String {
    p.coords().iter().map(|&z| format_complex(z)).collect::<Vec<_>>().join(",")
}
