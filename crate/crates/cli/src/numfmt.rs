//! Locale-independent number formatting and the `a+bi` argument syntax.

use etube::Complex64;

/// Decimal with 15 significant digits, trailing zeros trimmed; scientific
/// notation outside `[1e-5, 1e15)`.
pub fn sig15(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let e = v.abs().log10().floor() as i32;
    if !(-5..15).contains(&e) {
        return format!("{:.14e}", v);
    }
    let s = format!("{:.*}", (14 - e).max(0) as usize, v);
    let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.').to_string() } else { s };
    if s == "-0" { "0".into() } else { s }
}

/// `a+bi` with each part in [`sig15`]; the imaginary part is omitted when zero.
pub fn complex(c: Complex64) -> String {
    if c.im == 0.0 {
        return sig15(c.re);
    }
    let sign = if c.im < 0.0 { '-' } else { '+' };
    format!("{}{sign}{}i", sig15(c.re), sig15(c.im.abs()))
}

fn real(s: &str) -> Result<f64, String> {
    s.parse::<f64>().map_err(|_| format!("not a number: {s:?}"))
}

/// Parses `a`, `bi`, `a+bi` or `a-bi` (no spaces).
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let s = s.trim();
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex64::new(real(s)?, 0.0));
    };
    // Split at the last sign that is neither leading nor part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len()).rev().find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |t: &str| match t {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        t => real(t),
    };
    match split {
        Some(k) => Ok(Complex64::new(real(&body[..k])?, imag(&body[k..])?)),
        None => Ok(Complex64::new(0.0, imag(body)?)),
    }
}

pub fn parse_cvec(s: &str) -> Result<Vec<Complex64>, String> {
    s.split(',').map(parse_complex).collect()
}

pub fn parse_rvec(s: &str) -> Result<Vec<f64>, String> {
    s.split(',').map(|t| real(t.trim())).collect()
}
