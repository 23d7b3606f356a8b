//! Special functions and root finding shared by every constant formula.
//!
//! Everything here is `f64`. Products of many gamma powers are evaluated as
//! sums of logarithms by the callers, so [`ln_gamma`] is the workhorse and
//! [`gamma`] is mostly used for checks and small closed forms.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Serialize, Serializer};

use crate::error::{domain, Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// √π
pub const SQRT_PI: f64 = 1.772_453_850_905_516;

/// A strictly positive real number or +∞.
///
/// Used for the ℓ_p exponent `p`; the infinite case is a first-class value
/// rather than a large float.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    Infinity,
}

impl ExtendedReal {
    pub fn finite(x: f64) -> Result<Self> {
        if x.is_finite() && x > 0.0 {
            Ok(ExtendedReal::Finite(x))
        } else {
            domain(format!("extended real must be finite and > 0, got {x}"))
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtendedReal::Infinity)
    }

    pub fn finite_value(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(x) => Some(x),
            ExtendedReal::Infinity => None,
        }
    }

    /// 1/p, with 1/∞ = 0.
    pub fn recip(self) -> f64 {
        match self {
            ExtendedReal::Finite(x) => 1.0 / x,
            ExtendedReal::Infinity => 0.0,
        }
    }

    /// `self > x`
    pub fn gt(self, x: f64) -> bool {
        match self {
            ExtendedReal::Finite(v) => v > x,
            ExtendedReal::Infinity => true,
        }
    }

    /// `self >= x`
    pub fn ge(self, x: f64) -> bool {
        match self {
            ExtendedReal::Finite(v) => v >= x,
            ExtendedReal::Infinity => true,
        }
    }

    /// Hölder conjugate p* = p/(p−1); ∞* = 1 and 1* = ∞.
    pub fn conjugate(self) -> ExtendedReal {
        match self {
            ExtendedReal::Infinity => ExtendedReal::Finite(1.0),
            ExtendedReal::Finite(1.0) => ExtendedReal::Infinity,
            ExtendedReal::Finite(x) => ExtendedReal::Finite(x / (x - 1.0)),
        }
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::Finite(x) => write!(f, "{x}"),
            ExtendedReal::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for ExtendedReal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
            return Ok(ExtendedReal::Infinity);
        }
        let x: f64 = t
            .parse()
            .map_err(|_| Error::Domain(format!("cannot parse '{s}' as a number or 'inf'")))?;
        if x.is_infinite() && x > 0.0 {
            return Ok(ExtendedReal::Infinity);
        }
        ExtendedReal::finite(x)
    }
}

impl Serialize for ExtendedReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtendedReal::Finite(x) => s.serialize_f64(*x),
            ExtendedReal::Infinity => s.serialize_str("inf"),
        }
    }
}

/// Tolerances for the special-function substrate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelConfig {
    /// Relative accuracy target of [`gamma`]; the Lanczos scheme below meets it
    /// on (0, 16].
    pub gamma_rel_tol: f64,
    pub root_abs_tol: f64,
    pub max_root_iters: usize,
}

impl Default for KernelConfig {
    fn default() -> Self {
        KernelConfig {
            gamma_rel_tol: 1e-13,
            root_abs_tol: 1e-12,
            max_root_iters: 200,
        }
    }
}

impl KernelConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma_rel_tol > 0.0 && self.root_abs_tol > 0.0) {
            return domain("kernel tolerances must be strictly positive");
        }
        if self.max_root_iters < 1 {
            return domain("max_root_iters must be at least 1");
        }
        Ok(())
    }
}

// Lanczos approximation, g = 7, nine terms.
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)] // published digits, kept verbatim
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum(x: f64) -> f64 {
    let mut t = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        t += c / (x + i as f64);
    }
    t
}

fn check_gamma_arg(x: f64) -> Result<()> {
    if !x.is_finite() || x <= 0.0 {
        return domain(format!(
            "gamma is only defined here for finite x > 0, got {x}"
        ));
    }
    Ok(())
}

/// Γ(x) for finite x > 0.
pub fn gamma(x: f64) -> Result<f64> {
    check_gamma_arg(x)?;
    Ok(gamma_unchecked(x))
}

fn gamma_unchecked(x: f64) -> f64 {
    // (n−1)! is exact in f64 for n ≤ 23
    if x.fract() == 0.0 && x <= 23.0 {
        return (2..x as u32).fold(1.0, |acc, k| acc * k as f64);
    }
    if x < 0.5 {
        // reflection
        return PI / ((PI * x).sin() * gamma_unchecked(1.0 - x));
    }
    let z = x - 1.0;
    let w = z + LANCZOS_G + 0.5;
    if x > 140.0 {
        return ln_gamma_unchecked(x).exp();
    }
    // w^(z+1/2) split in two halves so large arguments do not overflow early
    let half = w.powf(0.5 * (z + 0.5));
    (2.0 * PI).sqrt() * half * half * (-w).exp() * lanczos_sum(z)
}

/// ln Γ(x) for finite x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    check_gamma_arg(x)?;
    Ok(ln_gamma_unchecked(x))
}

fn ln_gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        return (PI / (PI * x).sin()).ln() - ln_gamma_unchecked(1.0 - x);
    }
    if x < 3.0 {
        // ln of the direct value keeps full relative accuracy near the zeros
        // of ln Γ at 1 and 2
        return gamma_unchecked(x).ln();
    }
    let z = x - 1.0;
    let w = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * w.ln() - w + lanczos_sum(z).ln()
}

/// Euler–Mascheroni constant γ.
pub fn euler_gamma() -> f64 {
    EULER_GAMMA
}

/// Γ((q+1)/2) − √π/2, whose root in (1, 2) is the Khinchine crossover q₀.
pub(crate) fn crossover_residual(q: f64) -> f64 {
    gamma_unchecked(0.5 * (q + 1.0)) - 0.5 * SQRT_PI
}

// f(2) = Γ(3/2) − √π/2 is exactly zero, so the bracket must stop short of 2.
// Γ has its minimum at 1.4616…, i.e. q ≈ 1.923; f(1.9) is already negative.
const Q0_BRACKET: (f64, f64) = (1.0, 1.9);

/// The crossover exponent q₀ ∈ (1, 2), the unique root of Γ((q+1)/2) = √π/2
/// below the trivial root q = 2.
pub fn solve_q0(config: &KernelConfig) -> Result<f64> {
    config.validate()?;
    if *config == KernelConfig::default() {
        static CACHE: OnceLock<f64> = OnceLock::new();
        if let Some(v) = CACHE.get() {
            return Ok(*v);
        }
        let v = bisect_q0(config)?;
        return Ok(*CACHE.get_or_init(|| v));
    }
    bisect_q0(config)
}

/// q₀ with the default kernel configuration.
pub fn q0() -> f64 {
    solve_q0(&KernelConfig::default()).expect("default kernel configuration converges")
}

fn bisect_q0(config: &KernelConfig) -> Result<f64> {
    let (mut lo, mut hi) = Q0_BRACKET;
    let f_lo = crossover_residual(lo);
    debug_assert!(f_lo > 0.0 && crossover_residual(hi) < 0.0);
    for _ in 0..config.max_root_iters {
        let mid = 0.5 * (lo + hi);
        let f_mid = crossover_residual(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= config.root_abs_tol {
            return Ok(0.5 * (lo + hi));
        }
    }
    Err(Error::Convergence {
        iters: config.max_root_iters,
    })
}
