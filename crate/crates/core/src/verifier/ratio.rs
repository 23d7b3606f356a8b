use serde::Serialize;

use super::norms::{mixed_norm, sup_norm_exact_real_linf, sup_norm_upper_holder, NormEstimate};
use super::tensor::CoefficientTensor;
use crate::constants::{hl_upper_best, BoundReport};
use crate::error::{Error, Result};
use crate::exponents::{gen_hl_upper_tol, gen_legacy_upper, hl_critical_exponent, MultiExponent};
use crate::khinchine::ScalarField;
use crate::scalar::ExtendedReal;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioReport {
    pub ratio: f64,
    pub numerator: f64,
    pub denominator: NormEstimate,
}

/// The norm used as denominator: exact for real tensors on ℓ∞ factors,
/// otherwise the Hölder upper bound. Both make the ratio a lower bound for
/// the optimal constant.
pub fn certified_denominator(
    t: &CoefficientTensor,
    p: ExtendedReal,
    cap: usize,
) -> Result<NormEstimate> {
    if p.is_infinite() && t.field() == ScalarField::Real {
        sup_norm_exact_real_linf(t, cap)
    } else {
        sup_norm_upper_holder(t, p)
    }
}

/// mixed_norm(t, q) / ‖T‖, with ‖T‖ replaced by a certified upper bound
/// where it cannot be computed exactly.
pub fn certified_ratio(
    t: &CoefficientTensor,
    q: &MultiExponent,
    p: ExtendedReal,
    cap: usize,
) -> Result<RatioReport> {
    if q.m() != t.m() {
        return Err(Error::DimensionMismatch(format!(
            "tensor has m = {} slots but {} exponents were given",
            t.m(),
            q.m()
        )));
    }
    if t.is_zero() {
        return Err(Error::InvalidTensor("tensor is identically zero".into()));
    }
    let numerator = mixed_norm(t, q.as_slice())?;
    let denominator = certified_denominator(t, p, cap)?;
    Ok(RatioReport {
        ratio: numerator / denominator.value,
        numerator,
        denominator,
    })
}

/// True when every q_i equals the critical exponent for (m, p) within `tol`.
pub fn is_critical_uniform(q: &MultiExponent, p: ExtendedReal, tol: f64) -> Result<bool> {
    let c = hl_critical_exponent(q.m() as u32, p)?;
    Ok(q.as_slice().iter().all(|&x| (x - c).abs() <= tol))
}

/// Smallest proven upper bound for the constant of (m, p, q): the best
/// classical bound at the critical uniform exponent, otherwise the smaller
/// of the two generalized bounds.
pub fn applicable_upper_bound(
    q: &MultiExponent,
    p: ExtendedReal,
    field: ScalarField,
    tol: f64,
) -> Result<BoundReport> {
    let m = q.m() as u32;
    if is_critical_uniform(q, p, tol)? {
        return hl_upper_best(m, p, field);
    }
    let general = gen_hl_upper_tol(q, p, field, tol)?;
    let legacy = gen_legacy_upper(m, field)?;
    Ok(if legacy.value < general.value {
        legacy
    } else {
        general
    })
}
