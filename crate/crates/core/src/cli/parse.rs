use num_rational::Ratio;

use crate::scalar::ExtendedReal;

/// A decimal or an integer fraction such as `4/3`. Fractions are reduced
/// exactly before the single conversion to `f64`.
pub fn parse_number(s: &str) -> Result<f64, String> {
    let t = s.trim();
    if t.contains('/') {
        let r: Ratio<i64> = t
            .parse()
            .map_err(|_| format!("cannot parse '{s}' as a fraction"))?;
        return Ok(*r.numer() as f64 / *r.denom() as f64);
    }
    match t.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(format!("cannot parse '{s}' as a finite number")),
    }
}

/// `inf` or a positive number.
pub fn parse_p(s: &str) -> Result<ExtendedReal, String> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
        return Ok(ExtendedReal::Infinity);
    }
    let x = parse_number(t)?;
    ExtendedReal::finite(x).map_err(|e| e.to_string())
}

/// Comma-separated exponent list, e.g. `4/3,4/3` or `1,2`.
pub fn parse_q_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',').map(parse_number).collect()
}
