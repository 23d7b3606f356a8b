use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::ratio::{applicable_upper_bound, certified_ratio};
use super::tensor::{checked_len, CoefficientTensor};
use crate::constants::BoundReport;
use crate::error::{domain, Error, Result};
use crate::exponents::{MultiExponent, DEFAULT_TOL};
use crate::khinchine::ScalarField;
use crate::scalar::ExtendedReal;

/// Slack allowed above a proven bound before a result is treated as a bug.
pub const CEILING_SLACK: f64 = 1e-9;

const SNAP_EVERY: usize = 256;
const STEP_START: f64 = 0.5;
const STEP_MIN: f64 = 1e-6;

#[derive(Debug, Clone, Serialize)]
pub struct SearchResult {
    #[serde(skip)]
    pub tensor: CoefficientTensor,
    pub ratio: f64,
    pub bound: BoundReport,
    pub seed: u64,
    pub iterations: usize,
    pub accepted: usize,
}

impl SearchResult {
    /// bound − ratio; never below −CEILING_SLACK for a returned result.
    pub fn gap(&self) -> f64 {
        self.bound.value - self.ratio
    }
}

fn ratio_of(
    a: &[f64],
    m: usize,
    n: usize,
    q: &MultiExponent,
    p: ExtendedReal,
    cap: usize,
) -> Result<f64> {
    if a.iter().all(|&x| x == 0.0) {
        return Ok(0.0);
    }
    let t = CoefficientTensor::real(m, n, a.to_vec())?;
    Ok(certified_ratio(&t, q, p, cap)?.ratio)
}

/// Hill climbing on real coefficient tensors, maximizing the certified ratio.
///
/// Entries start uniform in [−1, 1]. Each step perturbs one entry by a
/// uniform amount of the current step size, clamped to [−1, 1]; the step
/// grows on acceptance and shrinks on rejection. Every few hundred steps the
/// sign pattern of the incumbent is tried as well. Fully sequential, so the
/// result is a function of `seed` alone.
pub fn search_extremal(
    m: usize,
    n: usize,
    p: ExtendedReal,
    q: &MultiExponent,
    iters: usize,
    seed: u64,
    cap: usize,
) -> Result<SearchResult> {
    if q.m() != m {
        return Err(Error::DimensionMismatch(format!(
            "m = {m} but {} exponents were given",
            q.m()
        )));
    }
    let len = checked_len(m, n)?;
    if p.is_infinite() && n * (m - 1) > cap {
        return Err(Error::CapExceeded {
            need: n * (m - 1),
            cap,
        });
    }
    if !p.ge(2.0 * m as f64) {
        return domain(format!("p must satisfy p >= 2m = {}, got {p}", 2 * m));
    }
    let bound = applicable_upper_bound(q, p, ScalarField::Real, DEFAULT_TOL)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Vec<f64> = (0..len).map(|_| rng.random_range(-1.0..=1.0)).collect();
    let mut best_ratio = ratio_of(&best, m, n, q, p, cap)?;
    let mut step = STEP_START;
    let mut accepted = 0;
    for it in 1..=iters {
        let mut cand = best.clone();
        if it % SNAP_EVERY == 0 {
            cand.iter_mut().for_each(|x| {
                if *x != 0.0 {
                    *x = x.signum();
                }
            });
        } else {
            let i = rng.random_range(0..len);
            let delta: f64 = rng.random_range(-1.0..=1.0);
            cand[i] = (cand[i] + step * delta).clamp(-1.0, 1.0);
        }
        let r = ratio_of(&cand, m, n, q, p, cap)?;
        if r > best_ratio {
            best = cand;
            best_ratio = r;
            accepted += 1;
            step = (step * 1.5).min(2.0);
        } else {
            step *= 0.98;
            if step < STEP_MIN {
                step = STEP_START;
            }
        }
    }

    let scale = best.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    if scale > 0.0 {
        best.iter_mut().for_each(|x| *x /= scale);
    }
    let tensor = CoefficientTensor::real(m, n, best)?;
    let ratio = certified_ratio(&tensor, q, p, cap)?.ratio;
    if ratio > bound.value + CEILING_SLACK {
        return Err(Error::CeilingViolation {
            ratio,
            bound: bound.value,
        });
    }
    Ok(SearchResult {
        tensor,
        ratio,
        bound,
        seed,
        iterations: iters,
        accepted,
    })
}
