//! Optimal lower Khinchine constants A_q.
//!
//! REAL uses Rademacher averages, COMPLEX uses Steinhaus variables.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::scalar::{gamma, q0, SQRT_PI};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarField {
    Real,
    Complex,
}

impl fmt::Display for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScalarField::Real => "real",
            ScalarField::Complex => "complex",
        })
    }
}

impl FromStr for ScalarField {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "real" | "r" => Ok(ScalarField::Real),
            "complex" | "c" => Ok(ScalarField::Complex),
            other => domain(format!("unknown scalar field '{other}'")),
        }
    }
}

/// Real branch for q > q₀: √2·(Γ((1+q)/2)/√π)^{1/q}.
pub(crate) fn real_gamma_branch(q: f64) -> Result<f64> {
    Ok(2f64.sqrt() * (gamma(0.5 * (1.0 + q))? / SQRT_PI).powf(1.0 / q))
}

/// Real branch for q ≤ q₀: 2^{1/2 − 1/q}.
pub(crate) fn real_power_branch(q: f64) -> f64 {
    2f64.powf(0.5 - 1.0 / q)
}

/// The optimal constant A_q of the Khinchine inequality.
///
/// REAL accepts any q > 0. COMPLEX is only known in closed form on [1, 2] and
/// is rejected elsewhere. At q = q₀ the real branches coincide; the power
/// branch is used.
pub fn khinchine_a(q: f64, field: ScalarField) -> Result<f64> {
    if !q.is_finite() || q <= 0.0 {
        return domain(format!(
            "Khinchine exponent must be finite and > 0, got {q}"
        ));
    }
    match field {
        ScalarField::Real => {
            if q > q0() {
                real_gamma_branch(q)
            } else {
                Ok(real_power_branch(q))
            }
        }
        ScalarField::Complex => {
            if !(1.0..=2.0).contains(&q) {
                return domain(format!(
                    "complex Khinchine constant is only available for q in [1, 2], got {q}"
                ));
            }
            Ok(gamma(0.5 * (q + 2.0))?.powf(1.0 / q))
        }
    }
}

/// A_{(2j−2)/j}^{-1}, the j-th factor of the Bohnenblust–Hille product.
pub fn khinchine_a_inv_bh(j: u32, field: ScalarField) -> Result<f64> {
    if j < 2 {
        return domain(format!("factor index j must be >= 2, got {j}"));
    }
    let q = (2.0 * j as f64 - 2.0) / j as f64;
    Ok(1.0 / khinchine_a(q, field)?)
}
