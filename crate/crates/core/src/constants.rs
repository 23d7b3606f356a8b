//! Closed-form bounds for the Bohnenblust–Hille constants B_{K,m} and the
//! Hardy–Littlewood constants C_{m,p}, upper and lower.
//!
//! All products are evaluated as sums of logarithms so that m in the tens of
//! thousands stays well inside `f64` range.

use std::f64::consts::LN_2;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{domain, Result};
use crate::khinchine::ScalarField;
use crate::scalar::{ln_gamma, ExtendedReal, EULER_GAMMA, SQRT_PI};

/// Which closed form produced a [`BoundReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FormulaId {
    BhProduct,
    BhEnvelope,
    HlLegacySqrt2,
    HlPDependent,
    HlPFree,
    HlBest,
    HlLower,
    BhLower,
    GenCaseI,
    GenCaseII,
    GenPrior,
    GenLegacy,
}

impl FormulaId {
    pub fn as_str(self) -> &'static str {
        match self {
            FormulaId::BhProduct => "BH_PRODUCT",
            FormulaId::BhEnvelope => "BH_ENVELOPE",
            FormulaId::HlLegacySqrt2 => "HL_LEGACY_SQRT2",
            FormulaId::HlPDependent => "HL_P_DEPENDENT",
            FormulaId::HlPFree => "HL_P_FREE",
            FormulaId::HlBest => "HL_BEST",
            FormulaId::HlLower => "HL_LOWER",
            FormulaId::BhLower => "BH_LOWER",
            FormulaId::GenCaseI => "GEN_CASE_I",
            FormulaId::GenCaseII => "GEN_CASE_II",
            FormulaId::GenPrior => "GEN_PRIOR",
            FormulaId::GenLegacy => "GEN_LEGACY",
        }
    }
}

/// A computed constant bound together with where it came from and whether
/// the parameters lie inside the formula's proven domain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub value: f64,
    pub formula: FormulaId,
    /// `None` when the formula is the same for both scalar fields.
    pub field: Option<ScalarField>,
    pub m: u32,
    pub p: Option<ExtendedReal>,
    pub valid: bool,
    pub note: String,
}

impl BoundReport {
    fn new(value: f64, formula: FormulaId, field: Option<ScalarField>, m: u32) -> Self {
        BoundReport {
            value,
            formula,
            field,
            m,
            p: None,
            valid: true,
            note: String::new(),
        }
    }

    fn with_p(mut self, p: ExtendedReal) -> Self {
        self.p = Some(p);
        self
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

// 446381/55440 = H_12/2 + 13/2, with H_12 the 12th harmonic number.
pub(crate) const REAL_SEAM_NUM: i64 = 446_381;
pub(crate) const REAL_SEAM_DEN: i64 = 55_440;

fn real_seam_exponent() -> f64 {
    static V: OnceLock<f64> = OnceLock::new();
    *V.get_or_init(|| REAL_SEAM_NUM as f64 / REAL_SEAM_DEN as f64)
}

fn check_m(m: u32) -> Result<()> {
    if m < 2 {
        return domain(format!("m must be >= 2, got {m}"));
    }
    Ok(())
}

const PREFIX_LIMIT: usize = 10_000;

/// Prefix sums of the per-index log factors; `table[m]` covers indices up to m.
struct LogPrefix {
    complex: Vec<f64>,
    real_tail: Vec<f64>,
}

fn complex_log_term(j: u32) -> f64 {
    let j = j as f64;
    j / (2.0 - 2.0 * j) * ln_gamma(2.0 - 1.0 / j).expect("argument in (1, 2)")
}

fn real_tail_log_term(j: u32) -> f64 {
    let j = j as f64;
    j / (2.0 - 2.0 * j) * (ln_gamma(1.5 - 1.0 / j).expect("argument in (1, 1.5)") - SQRT_PI.ln())
}

fn prefix() -> &'static LogPrefix {
    static TABLE: OnceLock<LogPrefix> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut complex = vec![0.0; PREFIX_LIMIT + 1];
        let mut real_tail = vec![0.0; PREFIX_LIMIT + 1];
        for j in 2..=PREFIX_LIMIT {
            complex[j] = complex[j - 1] + complex_log_term(j as u32);
            real_tail[j] = real_tail[j - 1]
                + if j >= 14 {
                    real_tail_log_term(j as u32)
                } else {
                    0.0
                };
        }
        LogPrefix { complex, real_tail }
    })
}

fn prefix_sum(table: &[f64], m: u32, term: fn(u32) -> f64) -> f64 {
    let m = m as usize;
    if m <= PREFIX_LIMIT {
        return table[m];
    }
    let mut acc = table[PREFIX_LIMIT];
    for j in PREFIX_LIMIT + 1..=m {
        acc += term(j as u32);
    }
    acc
}

/// ln of the best known Bohnenblust–Hille product for `m` (no checks).
pub(crate) fn ln_bh_upper(m: u32, field: ScalarField) -> f64 {
    match field {
        ScalarField::Complex => prefix_sum(&prefix().complex, m, complex_log_term),
        ScalarField::Real if m <= 13 => {
            LN_2 * (2..=m).map(|j| 1.0 / (2.0 * j as f64 - 2.0)).sum::<f64>()
        }
        ScalarField::Real => {
            LN_2 * (real_seam_exponent() - 0.5 * m as f64)
                + prefix_sum(&prefix().real_tail, m, real_tail_log_term)
        }
    }
}

/// ln K, where K = √2 (real) or 2/√π (complex) is A_1^{-1}.
pub(crate) fn ln_mixed_factor(field: ScalarField) -> f64 {
    match field {
        ScalarField::Real => 0.5 * LN_2,
        ScalarField::Complex => (2.0 / SQRT_PI).ln(),
    }
}

/// Best known upper bound for B^mult_{K,m}.
pub fn bh_upper(m: u32, field: ScalarField) -> Result<BoundReport> {
    check_m(m)?;
    let note = match field {
        ScalarField::Complex => "prod_{j=2}^m Gamma(2-1/j)^{j/(2-2j)}",
        ScalarField::Real if m <= 13 => "prod_{j=2}^m 2^{1/(2j-2)}",
        ScalarField::Real => {
            "2^{446381/55440-m/2} prod_{j=14}^m (Gamma(3/2-1/j)/sqrt(pi))^{j/(2-2j)}"
        }
    };
    Ok(BoundReport::new(
        ln_bh_upper(m, field).exp(),
        FormulaId::BhProduct,
        Some(field),
        m,
    )
    .with_p(ExtendedReal::Infinity)
    .note(note))
}

/// Sublinear envelope dominating [`bh_upper`].
pub fn bh_envelope(m: u32, field: ScalarField) -> Result<BoundReport> {
    check_m(m)?;
    let mf = m as f64;
    let (value, note) = match field {
        ScalarField::Complex => (mf.powf((1.0 - EULER_GAMMA) / 2.0), "m^{(1-gamma)/2}"),
        ScalarField::Real => (
            1.3 * mf.powf((2.0 - LN_2 - EULER_GAMMA) / 2.0),
            "1.3 m^{(2-log 2-gamma)/2}",
        ),
    };
    Ok(
        BoundReport::new(value, FormulaId::BhEnvelope, Some(field), m)
            .with_p(ExtendedReal::Infinity)
            .note(note),
    )
}

/// The original Hardy–Littlewood estimate (√2)^{m−1}, valid for both fields.
pub fn hl_upper_sqrt2(m: u32) -> Result<BoundReport> {
    check_m(m)?;
    Ok(BoundReport::new(
        2f64.sqrt().powi(m as i32 - 1),
        FormulaId::HlLegacySqrt2,
        None,
        m,
    )
    .note("(sqrt 2)^{m-1}"))
}

fn check_p_at_least_2m(m: u32, p: ExtendedReal) -> Result<()> {
    if !p.ge(2.0 * m as f64) {
        return domain(format!("p must satisfy p >= 2m = {}, got {p}", 2 * m));
    }
    Ok(())
}

/// K^{2m(m−1)/p} · B^{(p−2m)/p}.
pub fn hl_upper_p_dependent(m: u32, p: ExtendedReal, field: ScalarField) -> Result<BoundReport> {
    check_m(m)?;
    check_p_at_least_2m(m, p)?;
    let mf = m as f64;
    let inv_p = p.recip();
    let ln_v = 2.0 * mf * (mf - 1.0) * inv_p * ln_mixed_factor(field)
        + (1.0 - 2.0 * mf * inv_p) * ln_bh_upper(m, field);
    Ok(
        BoundReport::new(ln_v.exp(), FormulaId::HlPDependent, Some(field), m)
            .with_p(p)
            .note("K^{2m(m-1)/p} B_m^{(p-2m)/p}"),
    )
}

/// 2m³ − 4m² + 2m, beyond which the p-free bound holds.
pub fn hl_threshold(m: u32) -> u64 {
    let m = m as u64;
    2 * m * m * m - 4 * m * m + 2 * m
}

/// The p-free Hardy–Littlewood bound, equal to [`bh_upper`]; `valid` is false
/// unless p exceeds [`hl_threshold`].
pub fn hl_upper_p_free(m: u32, p: ExtendedReal, field: ScalarField) -> Result<BoundReport> {
    check_m(m)?;
    if !p.gt(2.0 * m as f64) {
        return domain(format!("p must satisfy p > 2m = {}, got {p}", 2 * m));
    }
    let threshold = hl_threshold(m);
    let valid = p.gt(threshold as f64);
    let mut r = BoundReport::new(
        bh_upper(m, field)?.value,
        FormulaId::HlPFree,
        Some(field),
        m,
    )
    .with_p(p);
    r.valid = valid;
    r.note = if valid {
        format!("p > {threshold}")
    } else {
        format!("not proven: requires p > {threshold}")
    };
    Ok(r)
}

/// Every upper bound whose proven domain contains (m, p), in tie-break order.
pub fn hl_upper_candidates(
    m: u32,
    p: ExtendedReal,
    field: ScalarField,
) -> Result<Vec<BoundReport>> {
    check_m(m)?;
    check_p_at_least_2m(m, p)?;
    let mut out = Vec::with_capacity(3);
    if p.gt(2.0 * m as f64) {
        let free = hl_upper_p_free(m, p, field)?;
        if free.valid {
            out.push(free);
        }
    }
    out.push(hl_upper_p_dependent(m, p, field)?);
    out.push(hl_upper_sqrt2(m)?.with_p(p));
    Ok(out)
}

/// Pointwise minimum over the valid Hardy–Littlewood upper bounds.
pub fn hl_upper_best(m: u32, p: ExtendedReal, field: ScalarField) -> Result<BoundReport> {
    let candidates = hl_upper_candidates(m, p, field)?;
    let mut best = &candidates[0];
    for c in &candidates[1..] {
        if c.value < best.value {
            best = c;
        }
    }
    Ok(
        BoundReport::new(best.value, FormulaId::HlBest, Some(field), m)
            .with_p(p)
            .note(best.formula.as_str()),
    )
}

/// Lower bound 2^{(mp + (6 − 4 log₂ 1.74)m − 2m² − p)/(mp)} for the real
/// Hardy–Littlewood constant.
pub fn hl_lower_real(m: u32, p: ExtendedReal) -> Result<BoundReport> {
    check_m(m)?;
    let Some(pv) = p.finite_value() else {
        return domain("the real Hardy-Littlewood lower bound needs a finite p");
    };
    check_p_at_least_2m(m, p)?;
    let mf = m as f64;
    let c = 6.0 - 4.0 * 1.74f64.log2();
    let exponent = (mf * pv + c * mf - 2.0 * mf * mf - pv) / (mf * pv);
    Ok(BoundReport::new(
        2f64.powf(exponent),
        FormulaId::HlLower,
        Some(ScalarField::Real),
        m,
    )
    .with_p(p)
    .note("2^{(mp+(6-4 log2 1.74)m-2m^2-p)/(mp)}"))
}

/// B^mult_{R,m} ≥ 2^{1−1/m}.
pub fn bh_lower_real(m: u32) -> Result<BoundReport> {
    check_m(m)?;
    Ok(BoundReport::new(
        2f64.powf(1.0 - 1.0 / m as f64),
        FormulaId::BhLower,
        Some(ScalarField::Real),
        m,
    )
    .with_p(ExtendedReal::Infinity)
    .note("2^{1-1/m}"))
}
