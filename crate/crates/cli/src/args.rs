//! Parsers for command-line values.

use std::fs;

use tto_lab::symbols::Symbol;
use tto_lab::Complex64;

/// `a+bi` with optional spaces: `0.5`, `-2i`, `i`, `0.3-0.1i`, `1e-3+2e-4i`.
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty complex number".into());
    }
    let bad = || format!("`{text}` is not a complex number of the form a+bi");
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not an exponent sign or the leading one
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let re = if re.is_empty() { 0.0 } else { re.parse::<f64>().map_err(|_| bad())? };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => x.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(Complex64::new(re, im))
}

/// Comma-separated complex numbers.
pub fn parse_complex_list(text: &str) -> Result<Vec<Complex64>, String> {
    text.split(',').map(parse_complex).collect()
}

/// Expression (`chi`, `z-1`, `z^2+conj(z)`), inline JSON, or `@path` to a JSON file.
pub fn parse_symbol(text: &str) -> Result<Symbol, String> {
    let body = match text.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| format!("cannot read symbol file {path}: {e}"))?,
        None => text.to_string(),
    };
    if body.trim_start().starts_with('{') {
        serde_json::from_str(&body).map_err(|e| format!("bad symbol JSON: {e}"))
    } else {
        body.trim().parse()
    }
}
