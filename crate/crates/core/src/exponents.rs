//! Exponent algebra: critical exponents, admissibility of multi-exponents,
//! the λ ladders, convex-hull interpolation weights, and the constant bounds
//! for the generalized (mixed-exponent) inequalities.

use serde::Serialize;

use crate::constants::{bh_upper, ln_bh_upper, ln_mixed_factor, BoundReport, FormulaId};
use crate::error::{domain, Error, Result, Violation};
use crate::khinchine::ScalarField;
use crate::scalar::{ExtendedReal, EULER_GAMMA};

/// Absolute tolerance on Σ 1/q_i used when callers do not supply one.
pub const DEFAULT_TOL: f64 = 1e-9;

// slack for interval end points that are themselves computed
const ENDPOINT_SLACK: f64 = 1e-12;

/// A multiple exponent (q_1, …, q_m) with every q_i in [1, 2] and m ≥ 2.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct MultiExponent {
    q: Vec<f64>,
}

impl MultiExponent {
    pub fn new(q: Vec<f64>) -> Result<Self> {
        if q.len() < 2 {
            return domain(format!(
                "a multi-exponent needs m >= 2 entries, got {}",
                q.len()
            ));
        }
        let bad: Vec<Violation> = q
            .iter()
            .enumerate()
            .filter(|(_, &v)| !(v.is_finite() && (1.0..=2.0).contains(&v)))
            .map(|(index, &value)| Violation::Range {
                index,
                value,
                lo: 1.0,
                hi: 2.0,
            })
            .collect();
        if !bad.is_empty() {
            return Err(Error::Admissibility(bad));
        }
        Ok(MultiExponent { q })
    }

    /// All m entries equal to `value`.
    pub fn uniform(m: usize, value: f64) -> Result<Self> {
        MultiExponent::new(vec![value; m])
    }

    pub fn m(&self) -> usize {
        self.q.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.q
    }

    pub fn max(&self) -> f64 {
        self.q.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn reciprocal_sum(&self) -> f64 {
        self.q.iter().map(|v| 1.0 / v).sum()
    }

    pub fn is_sorted_ascending(&self) -> bool {
        self.q.windows(2).all(|w| w[0] <= w[1])
    }
}

/// Whether the exponent-sum condition must hold with equality or only as an
/// upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumMode {
    Equality,
    AtMost,
}

/// 2mp/(mp + p − 2m); 2m/(m+1) at p = ∞.
pub fn hl_critical_exponent(m: u32, p: ExtendedReal) -> Result<f64> {
    check_m(m)?;
    let mf = m as f64;
    if !p.ge(2.0 * mf) {
        return domain(format!("p must satisfy p >= 2m = {}, got {p}", 2 * m));
    }
    Ok(2.0 * mf / (mf + 1.0 - 2.0 * mf * p.recip()))
}

/// Σ 1/q_i = (m+1)/2 within `tol`.
pub fn bh_admissible(q: &MultiExponent, tol: f64) -> bool {
    (q.reciprocal_sum() - 0.5 * (q.m() as f64 + 1.0)).abs() <= tol
}

/// (mp + p − 2m)/(2p), which is (m+1)/2 at p = ∞.
pub fn hl_sum_target(m: u32, p: ExtendedReal) -> f64 {
    let mf = m as f64;
    0.5 * (mf + 1.0) - mf * p.recip()
}

/// Every violated Hardy–Littlewood admissibility constraint, exponent sum
/// first. Empty means admissible.
pub fn hl_violations(
    q: &MultiExponent,
    p: ExtendedReal,
    tol: f64,
    mode: SumMode,
) -> Result<Vec<Violation>> {
    let m = q.m() as u32;
    let mf = m as f64;
    match mode {
        SumMode::Equality if !p.gt(2.0 * mf) => {
            return domain(format!("p must satisfy p > 2m = {}, got {p}", 2 * m));
        }
        SumMode::AtMost if !p.ge(2.0 * mf) => {
            return domain(format!("p must satisfy p >= 2m = {}, got {p}", 2 * m));
        }
        _ => {}
    }
    let required = hl_sum_target(m, p);
    let actual = q.reciprocal_sum();
    let mut out = Vec::new();
    let sum_ok = match mode {
        SumMode::Equality => (actual - required).abs() <= tol,
        SumMode::AtMost => actual <= required + tol,
    };
    if !sum_ok {
        out.push(Violation::ExponentSum { actual, required });
    }
    let lo = 1.0 / (1.0 - mf * p.recip());
    for (index, &value) in q.as_slice().iter().enumerate() {
        if value < lo - tol || value > 2.0 + tol {
            out.push(Violation::Range {
                index,
                value,
                lo,
                hi: 2.0,
            });
        }
    }
    Ok(out)
}

/// Every q_i ∈ [p/(p−m), 2] and Σ 1/q_i = (mp+p−2m)/(2p) (or ≤ in
/// [`SumMode::AtMost`]).
pub fn hl_admissible(q: &MultiExponent, p: ExtendedReal, tol: f64, mode: SumMode) -> Result<bool> {
    Ok(hl_violations(q, p, tol, mode)?.is_empty())
}

fn require_hl_admissible(q: &MultiExponent, p: ExtendedReal, tol: f64) -> Result<()> {
    let v = hl_violations(q, p, tol, SumMode::Equality)?;
    if v.is_empty() {
        Ok(())
    } else {
        Err(Error::Admissibility(v))
    }
}

fn check_m(m: u32) -> Result<()> {
    if m < 2 {
        return domain(format!("m must be >= 2, got {m}"));
    }
    Ok(())
}

/// λ_{0,s} = 2s/(ms + s + 2 − 2m) for s ∈ [(2m−2)/m, 2].
pub fn lambda_0(m: u32, s: f64) -> Result<f64> {
    check_m(m)?;
    let mf = m as f64;
    let lo = (2.0 * mf - 2.0) / mf;
    if !(s >= lo - ENDPOINT_SLACK && s <= 2.0 + ENDPOINT_SLACK) {
        return domain(format!("s must lie in [{lo}, 2], got {s}"));
    }
    Ok(2.0 * s / (mf * s + s + 2.0 - 2.0 * mf))
}

/// λ_{m,s} = 2ps/(mps + ps + 2p − 2mp − 2ms); equals λ_{0,s} at p = ∞.
pub fn lambda_m(m: u32, p: ExtendedReal, s: f64) -> Result<f64> {
    check_m(m)?;
    let mf = m as f64;
    if !p.gt(2.0 * mf) {
        return domain(format!("p must satisfy p > 2m = {}, got {p}", 2 * m));
    }
    let r = p.recip();
    let lo = (2.0 * mf - 2.0) / (mf - 2.0 * mf * r);
    if !(s >= lo - ENDPOINT_SLACK && s <= 2.0 + ENDPOINT_SLACK) {
        return domain(format!("s must lie in [{lo}, 2], got {s}"));
    }
    Ok(2.0 * s / (mf * s + s + 2.0 - 2.0 * mf - 2.0 * mf * s * r))
}

/// (λ_{0,s}, …, λ_{m,s}) with λ_{j,s} = λ_{0,s}·p/(p − λ_{0,s}·j).
pub fn lambda_ladder(m: u32, p: ExtendedReal, s: f64) -> Result<Vec<f64>> {
    let Some(pv) = p.finite_value() else {
        return domain("the lambda ladder is defined for finite p only");
    };
    if !(pv > 2.0 * m as f64) {
        return domain(format!("p must satisfy p > 2m = {}, got {p}", 2 * m));
    }
    let l0 = lambda_0(m, s)?;
    (0..=m)
        .map(|j| {
            let d = pv - l0 * j as f64;
            if d > 0.0 {
                Ok(l0 * pv / d)
            } else {
                domain(format!("p - lambda_0 * {j} must be positive, got {d}"))
            }
        })
        .collect()
}

/// (2m² − 4m + 2)/(m² − m − 1), the max-exponent cutoff of the p-free case.
pub fn max_q_threshold(m: u32) -> f64 {
    let mf = m as f64;
    (2.0 * mf * mf - 4.0 * mf + 2.0) / (mf * mf - mf - 1.0)
}

/// Convex-hull decomposition of (1/q_1, …, 1/q_m) over the m vertices that
/// carry `lambda` in one slot and `s` everywhere else.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterpolationDecomposition {
    pub s: f64,
    pub lambda: f64,
    pub thetas: Vec<f64>,
    pub vertices: Vec<Vec<f64>>,
    pub p: ExtendedReal,
}

impl InterpolationDecomposition {
    /// |1/q_j − Σ_k θ_k / vertex_k[j]| for each slot j.
    pub fn residuals(&self, q: &MultiExponent) -> Vec<f64> {
        q.as_slice()
            .iter()
            .enumerate()
            .map(|(j, &qj)| {
                let mix: f64 = self
                    .thetas
                    .iter()
                    .zip(&self.vertices)
                    .map(|(t, v)| t / v[j])
                    .sum();
                (1.0 / qj - mix).abs()
            })
            .collect()
    }

    pub fn theta_sum(&self) -> f64 {
        self.thetas.iter().sum()
    }
}

/// Midpoint of (max q_i, 2], used when no `s` is given.
pub fn default_s(q: &MultiExponent) -> f64 {
    0.5 * (q.max() + 2.0)
}

/// The interpolation weights θ_{j,s} = λ(s − q_j)/(q_j(s − λ)).
pub fn interpolation_weights(
    q: &MultiExponent,
    p: ExtendedReal,
    s: Option<f64>,
) -> Result<InterpolationDecomposition> {
    interpolation_weights_tol(q, p, s, DEFAULT_TOL)
}

/// [`interpolation_weights`] with an explicit admissibility tolerance.
pub fn interpolation_weights_tol(
    q: &MultiExponent,
    p: ExtendedReal,
    s: Option<f64>,
    tol: f64,
) -> Result<InterpolationDecomposition> {
    let m = q.m() as u32;
    if !p.gt(2.0 * m as f64) {
        return domain(format!("p must satisfy p > 2m = {}, got {p}", 2 * m));
    }
    require_hl_admissible(q, p, tol)?;
    let s = s.unwrap_or_else(|| default_s(q));
    let maxq = q.max();
    if !(s > maxq) {
        return domain(format!("s must exceed max q_i = {maxq}, got {s}"));
    }
    if s > 2.0 {
        return domain(format!("s must not exceed 2, got {s}"));
    }
    let lambda = lambda_m(m, p, s)?;
    let thetas = q
        .as_slice()
        .iter()
        .map(|&qj| lambda * (s - qj) / (qj * (s - lambda)))
        .collect();
    let vertices = (0..q.m())
        .map(|j| {
            let mut v = vec![s; q.m()];
            v[j] = lambda;
            v
        })
        .collect();
    Ok(InterpolationDecomposition {
        s,
        lambda,
        thetas,
        vertices,
        p,
    })
}

/// The max-exponent dependent expression used when max q_i reaches the
/// cutoff: K^{2(m−1)((m+1)/2 − m/maxq)} · B_m^{m(2/maxq − 1)}.
pub fn case_two_bound(m: u32, maxq: f64, field: ScalarField) -> f64 {
    let mf = m as f64;
    let k_exp = 2.0 * (mf - 1.0) * (0.5 * (mf + 1.0) - mf / maxq);
    let b_exp = mf * (2.0 / maxq - 1.0);
    (k_exp * ln_mixed_factor(field) + b_exp * ln_bh_upper(m, field)).exp()
}

fn generalized_report(
    q: &MultiExponent,
    p: ExtendedReal,
    field: ScalarField,
) -> Result<BoundReport> {
    let m = q.m() as u32;
    let maxq = q.max();
    let cutoff = max_q_threshold(m);
    let mut report = if maxq < cutoff {
        let mut r = bh_upper(m, field)?;
        r.formula = FormulaId::GenCaseI;
        r.note = format!("case (i): max q = {maxq} < {cutoff}");
        r
    } else {
        let mut r = bh_upper(m, field)?;
        r.value = case_two_bound(m, maxq, field);
        r.formula = FormulaId::GenCaseII;
        r.note = format!("case (ii): max q = {maxq} >= {cutoff}");
        r
    };
    report.p = Some(p);
    Ok(report)
}

/// Upper bound for the generalized Bohnenblust–Hille constant B_{m,q}.
pub fn gen_bh_upper(q: &MultiExponent, field: ScalarField) -> Result<BoundReport> {
    gen_bh_upper_tol(q, field, DEFAULT_TOL)
}

/// [`gen_bh_upper`] with an explicit exponent-sum tolerance.
pub fn gen_bh_upper_tol(q: &MultiExponent, field: ScalarField, tol: f64) -> Result<BoundReport> {
    if !bh_admissible(q, tol) {
        return Err(Error::Admissibility(vec![Violation::ExponentSum {
            actual: q.reciprocal_sum(),
            required: 0.5 * (q.m() as f64 + 1.0),
        }]));
    }
    generalized_report(q, ExtendedReal::Infinity, field)
}

/// Upper bound for the generalized Hardy–Littlewood constant C_{m,p,q}.
pub fn gen_hl_upper(q: &MultiExponent, p: ExtendedReal, field: ScalarField) -> Result<BoundReport> {
    gen_hl_upper_tol(q, p, field, DEFAULT_TOL)
}

/// [`gen_hl_upper`] with an explicit admissibility tolerance.
pub fn gen_hl_upper_tol(
    q: &MultiExponent,
    p: ExtendedReal,
    field: ScalarField,
    tol: f64,
) -> Result<BoundReport> {
    require_hl_admissible(q, p, tol)?;
    generalized_report(q, p, field)
}

/// The older generalized bound, K^{m−1} with K = √2 or 2/√π, valid on the
/// whole admissible range.
pub fn gen_legacy_upper(m: u32, field: ScalarField) -> Result<BoundReport> {
    check_m(m)?;
    let value = (((m - 1) as f64) * ln_mixed_factor(field)).exp();
    let mut r = bh_upper(m, field)?;
    r.value = value;
    r.formula = FormulaId::GenLegacy;
    r.note = "K^{m-1}".into();
    Ok(r)
}

// ln of the j = 1 factor Γ(2 − 1/j)^{j/(2−2j)}. The literal expression is 1^∞;
// its limit j → 1 is exp(γ/2), the inverse Steinhaus constant A_q^{-1} at q → 0.
const LN_UNIT_FACTOR: f64 = 0.5 * EULER_GAMMA;

pub(crate) fn ln_prior(q: &[f64], ln_unit_factor: f64) -> f64 {
    let m = q.len();
    let ln_p = |k: usize| -> f64 {
        ln_unit_factor
            + if k >= 2 {
                ln_bh_upper(k as u32, ScalarField::Complex)
            } else {
                0.0
            }
    };
    let mut acc = 2.0 * m as f64 * (1.0 / q[m - 1] - 0.5) * ln_p(m);
    for k in 1..m {
        let kf = k as f64;
        let g = crate::scalar::ln_gamma((3.0 * kf + 1.0) / (2.0 * kf + 2.0))
            .expect("argument in [1, 1.5)");
        let inner = (-kf - 1.0) / (2.0 * kf) * (m - k) as f64 * g + ln_p(k);
        acc += 2.0 * kf * (1.0 / q[k - 1] - 1.0 / q[k]) * inner;
    }
    acc
}

/// The previously best known bound for the complex generalized
/// Bohnenblust–Hille constant, for 1 ≤ q_1 ≤ … ≤ q_m ≤ 2.
pub fn gen_bh_upper_prior(q: &MultiExponent) -> Result<BoundReport> {
    if !q.is_sorted_ascending() {
        return domain("the prior generalized bound requires q sorted ascending");
    }
    if !bh_admissible(q, DEFAULT_TOL) {
        return Err(Error::Admissibility(vec![Violation::ExponentSum {
            actual: q.reciprocal_sum(),
            required: 0.5 * (q.m() as f64 + 1.0),
        }]));
    }
    let m = q.m() as u32;
    let mut r = bh_upper(m, ScalarField::Complex)?;
    r.value = ln_prior(q.as_slice(), LN_UNIT_FACTOR).exp();
    r.formula = FormulaId::GenPrior;
    r.note = "prior generalized bound, complex scalars, ascending q".into();
    Ok(r)
}
