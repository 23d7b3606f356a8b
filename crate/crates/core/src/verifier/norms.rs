//! Mixed coefficient norms and brackets for the operator norm
//! ‖T‖ = sup |T(x¹, …, xᵐ)| over unit balls of ℓ_pⁿ.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::tensor::{CoefficientTensor, Entries};
use crate::error::{domain, Error, Result};
use crate::khinchine::ScalarField;
use crate::scalar::ExtendedReal;

pub const DEFAULT_CAP: usize = 24;
pub const HARD_CAP: usize = 28;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum NormKind {
    Exact,
    LowerBound,
    UpperBound,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormEstimate {
    pub value: f64,
    pub kind: NormKind,
    pub method: String,
    pub iterations: usize,
    pub seed: Option<u64>,
}

/// ℓ_q norm of a nonnegative slice; `q` may be +∞.
fn lq_norm(v: &[f64], q: f64) -> f64 {
    let max = v.iter().copied().fold(0.0, f64::max);
    if max == 0.0 || q.is_infinite() {
        return max;
    }
    if q == 1.0 {
        return v.iter().sum();
    }
    let s: f64 = v.iter().map(|x| (x / max).powf(q)).sum();
    max * s.powf(1.0 / q)
}

fn check_exponents(m: usize, exps: &[f64]) -> Result<()> {
    if exps.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "tensor has m = {m} slots but {} exponents were given",
            exps.len()
        )));
    }
    if let Some(bad) = exps.iter().find(|&&e| !(e >= 1.0)) {
        return domain(format!("mixed-norm exponents must be >= 1, got {bad}"));
    }
    Ok(())
}

/// Nested norm of nonnegative values: innermost index with `exps[m-1]`,
/// outermost with `exps[0]`.
pub(crate) fn mixed_norm_of(values: &[f64], n: usize, exps: &[f64]) -> f64 {
    let mut cur = values.to_vec();
    for &q in exps.iter().rev() {
        cur = cur.chunks(n).map(|block| lq_norm(block, q)).collect();
    }
    debug_assert_eq!(cur.len(), 1);
    cur[0]
}

/// (Σ_{j₁} (Σ_{j₂} ⋯ (Σ_{j_m} |a|^{q_m})^{q_{m−1}/q_m} ⋯)^{q₁/q₂})^{1/q₁}
pub fn mixed_norm(t: &CoefficientTensor, exps: &[f64]) -> Result<f64> {
    check_exponents(t.m(), exps)?;
    Ok(mixed_norm_of(&t.moduli(), t.n(), exps))
}

/// Hölder-certified upper bound for ‖T‖ on ℓ_pⁿ factors: the mixed norm of
/// |a| with every exponent equal to p* = p/(p−1).
pub fn sup_norm_upper_holder(t: &CoefficientTensor, p: ExtendedReal) -> Result<NormEstimate> {
    if !p.ge(1.0) {
        return domain(format!("p must be >= 1, got {p}"));
    }
    let conj = match p.conjugate() {
        ExtendedReal::Finite(x) => x,
        ExtendedReal::Infinity => f64::INFINITY,
    };
    let exps = vec![conj; t.m()];
    Ok(NormEstimate {
        value: mixed_norm_of(&t.moduli(), t.n(), &exps),
        kind: NormKind::UpperBound,
        method: format!("holder(p*={})", p.conjugate()),
        iterations: 0,
        seed: None,
    })
}

// ---------------------------------------------------------------------------
// exact enumeration, real ℓ∞

/// Exact ‖T‖ for a real tensor on ℓ∞ⁿ factors.
///
/// The sup of a multilinear form over a product of ℓ∞ balls is attained at
/// sign vectors. All but one argument are enumerated; the remaining one is
/// resolved as Σ_j |inner sum|. Coordinates on which a slot's slice is
/// identically zero are dropped first, the widest remaining slot is the one
/// resolved, and each enumerated vector has its first sign fixed (x and −x
/// give the same absolute value).
pub fn sup_norm_exact_real_linf(t: &CoefficientTensor, cap: usize) -> Result<NormEstimate> {
    let Some(a) = t.real_entries() else {
        return domain("exact enumeration is only available for real tensors");
    };
    let (m, n) = (t.m(), t.n());
    let need = n * (m - 1);
    if need > cap {
        return Err(Error::CapExceeded { need, cap });
    }
    let (data, dims) = compress_support(a, m, n);
    let value = if dims.contains(&0) {
        0.0
    } else {
        enumerate_max(&data, &dims, true)
    };
    let patterns: usize = dims[..dims.len() - 1]
        .iter()
        .map(|&d| 1usize << d.saturating_sub(1))
        .product();
    Ok(NormEstimate {
        value,
        kind: NormKind::Exact,
        method: "sign-enumeration".into(),
        iterations: patterns,
        seed: None,
    })
}

/// Restrict every slot to its support and move the widest slot last.
fn compress_support(a: &[f64], m: usize, n: usize) -> (Vec<f64>, Vec<usize>) {
    let mut support = vec![vec![false; n]; m];
    let mut idx = vec![0usize; m];
    for &v in a {
        if v != 0.0 {
            for (k, &j) in idx.iter().enumerate() {
                support[k][j] = true;
            }
        }
        advance(&mut idx, n);
    }
    let kept: Vec<Vec<usize>> = support
        .iter()
        .map(|s| (0..n).filter(|&j| s[j]).collect())
        .collect();
    // widest slot last, ties broken toward the original last slot
    let mut resolved = m - 1;
    for k in (0..m).rev() {
        if kept[k].len() > kept[resolved].len() {
            resolved = k;
        }
    }
    let order: Vec<usize> = (0..m)
        .filter(|&k| k != resolved)
        .chain([resolved])
        .collect();
    let dims: Vec<usize> = order.iter().map(|&k| kept[k].len()).collect();
    let total: usize = dims.iter().product();
    let mut data = Vec::with_capacity(total);
    let mut r = vec![0usize; m];
    let mut src = vec![0usize; m];
    for _ in 0..total {
        for (pos, &k) in order.iter().enumerate() {
            src[k] = kept[k][r[pos]];
        }
        data.push(a[src.iter().fold(0, |acc, &j| acc * n + j)]);
        advance_dims(&mut r, &dims);
    }
    (data, dims)
}

fn advance(idx: &mut [usize], n: usize) {
    for d in idx.iter_mut().rev() {
        *d += 1;
        if *d < n {
            return;
        }
        *d = 0;
    }
}

fn advance_dims(idx: &mut [usize], dims: &[usize]) {
    for (d, &lim) in idx.iter_mut().zip(dims).rev() {
        *d += 1;
        if *d < lim {
            return;
        }
        *d = 0;
    }
}

/// Contract mode 0 of a row-major tensor with `x`.
fn contract_first(data: &[f64], d0: usize, x: &[f64]) -> Vec<f64> {
    let inner = data.len() / d0;
    let mut out = vec![0.0; inner];
    for (row, &xi) in data.chunks(inner).zip(x) {
        for (o, &v) in out.iter_mut().zip(row) {
            *o += xi * v;
        }
    }
    out
}

fn sign_vector(bits: usize, d: usize) -> Vec<f64> {
    // coordinate 0 is always +1
    (0..d)
        .map(|i| {
            if i > 0 && (bits >> (i - 1)) & 1 == 1 {
                -1.0
            } else {
                1.0
            }
        })
        .collect()
}

fn enumerate_max(data: &[f64], dims: &[usize], parallel: bool) -> f64 {
    match dims {
        [] => unreachable!(),
        [_] => data.iter().map(|v| v.abs()).sum(),
        [d0, d1] => gray_max(data, *d0, *d1),
        [d0, rest @ ..] => {
            let count = 1usize << (d0 - 1);
            let one = |bits: usize| {
                let x = sign_vector(bits, *d0);
                enumerate_max(&contract_first(data, *d0, &x), rest, false)
            };
            if parallel && count >= 4 {
                (0..count).into_par_iter().map(one).reduce(|| 0.0, f64::max)
            } else {
                (0..count).map(one).fold(0.0, f64::max)
            }
        }
    }
}

/// max over sign vectors x of Σ_j |Σ_i x_i M_ij| for a d0×d1 matrix, walking
/// x in Gray-code order so each step is one rank-one update.
fn gray_max(mat: &[f64], d0: usize, d1: usize) -> f64 {
    const REFRESH: usize = 1 << 10;
    let mut x = vec![1.0; d0];
    let fresh = |x: &[f64]| contract_first(mat, d0, x);
    let mut v = fresh(&x);
    let mut best: f64 = v.iter().map(|a| a.abs()).sum();
    let count = 1usize << (d0 - 1);
    for g in 1..count {
        let i = g.trailing_zeros() as usize + 1;
        let row = &mat[i * d1..(i + 1) * d1];
        let delta = -2.0 * x[i];
        x[i] = -x[i];
        if g % REFRESH == 0 {
            v = fresh(&x);
        } else {
            for (o, &r) in v.iter_mut().zip(row) {
                *o += delta * r;
            }
        }
        let s: f64 = v.iter().map(|a| a.abs()).sum();
        if s > best {
            best = s;
        }
    }
    best
}

// ---------------------------------------------------------------------------
// alternating ascent

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AscentConfig {
    pub starts: usize,
    pub max_sweeps: usize,
    pub rel_tol: f64,
}

impl Default for AscentConfig {
    fn default() -> Self {
        AscentConfig {
            starts: 32,
            max_sweeps: 500,
            rel_tol: 1e-10,
        }
    }
}

pub(crate) trait Coeff:
    Copy + Send + Sync + std::ops::Add<Output = Self> + std::ops::Mul<Output = Self>
{
    const ZERO: Self;
    fn scale(self, s: f64) -> Self;
    fn modulus(self) -> f64;
    /// Unit-modulus u with c·u = |c|; 1 when c = 0.
    fn align(self) -> Self;
    fn sample(rng: &mut ChaCha8Rng) -> Self;
}

impl Coeff for f64 {
    const ZERO: Self = 0.0;
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn align(self) -> Self {
        if self < 0.0 {
            -1.0
        } else {
            1.0
        }
    }
    fn sample(rng: &mut ChaCha8Rng) -> Self {
        rng.random_range(-1.0..=1.0)
    }
}

impl Coeff for Complex64 {
    const ZERO: Self = Complex64 { re: 0.0, im: 0.0 };
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn align(self) -> Self {
        let r = self.norm();
        if r == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            self.conj() / r
        }
    }
    fn sample(rng: &mut ChaCha8Rng) -> Self {
        let r: f64 = rng.random_range(0.0..=1.0);
        let th: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        Complex64::from_polar(r, th)
    }
}

/// Functional c_j = T(x¹, …, x^{k−1}, e_j, x^{k+1}, …, xᵐ).
fn functional<C: Coeff>(a: &[C], m: usize, n: usize, xs: &[Vec<C>], k: usize) -> Vec<C> {
    let mut cur: Vec<C> = a.to_vec();
    // trailing slots: contract the last mode each time
    for l in (k + 1..m).rev() {
        cur = cur
            .chunks(n)
            .map(|row| {
                row.iter()
                    .zip(&xs[l])
                    .fold(C::ZERO, |acc, (&v, &x)| acc + v * x)
            })
            .collect();
    }
    // leading slots: contract the first mode each time
    for x in xs.iter().take(k) {
        let inner = cur.len() / n;
        let mut out = vec![C::ZERO; inner];
        for (row, &xi) in cur.chunks(inner).zip(x) {
            for (o, &v) in out.iter_mut().zip(row) {
                *o = *o + v * xi;
            }
        }
        cur = out;
    }
    cur
}

/// Maximizer of |Σ c_j x_j| over the unit ball of ℓ_pⁿ, and the attained value
/// ‖c‖_{p*}.
fn best_response<C: Coeff>(c: &[C], p: ExtendedReal) -> (Vec<C>, f64) {
    let mods: Vec<f64> = c.iter().map(|z| z.modulus()).collect();
    match p {
        ExtendedReal::Infinity => (c.iter().map(|z| z.align()).collect(), mods.iter().sum()),
        ExtendedReal::Finite(1.0) => {
            let (jmax, &vmax) =
                mods.iter()
                    .enumerate()
                    .fold(
                        (0, &f64::NEG_INFINITY),
                        |b, (j, v)| if *v > *b.1 { (j, v) } else { b },
                    );
            let mut x = vec![C::ZERO; c.len()];
            x[jmax] = c[jmax].align();
            (x, vmax)
        }
        ExtendedReal::Finite(pv) => {
            let q = pv / (pv - 1.0);
            let norm = lq_norm(&mods, q);
            if norm == 0.0 {
                let mut x = vec![C::ZERO; c.len()];
                x[0] = c[0].align();
                return (x, 0.0);
            }
            let x = c
                .iter()
                .zip(&mods)
                .map(|(z, &r)| z.align().scale((r / norm).powf(q - 1.0)))
                .collect();
            (x, norm)
        }
    }
}

fn random_point<C: Coeff>(rng: &mut ChaCha8Rng, n: usize, p: ExtendedReal) -> Vec<C> {
    let mut x: Vec<C> = (0..n).map(|_| C::sample(rng)).collect();
    if let ExtendedReal::Finite(pv) = p {
        let mods: Vec<f64> = x.iter().map(|z| z.modulus()).collect();
        let norm = lq_norm(&mods, pv);
        if norm > 0.0 {
            x.iter_mut().for_each(|z| *z = z.scale(1.0 / norm));
        }
    }
    x
}

/// One ascent run; returns the objective after every sweep.
fn ascent_run<C: Coeff>(
    a: &[C],
    m: usize,
    n: usize,
    p: ExtendedReal,
    cfg: &AscentConfig,
    rng: &mut ChaCha8Rng,
) -> Vec<f64> {
    let mut xs: Vec<Vec<C>> = (0..m).map(|_| random_point(rng, n, p)).collect();
    let mut trace = Vec::new();
    let mut prev = 0.0;
    for _ in 0..cfg.max_sweeps {
        let mut value = 0.0;
        for k in 0..m {
            let c = functional(a, m, n, &xs, k);
            let (x, v) = best_response(&c, p);
            xs[k] = x;
            value = v;
        }
        trace.push(value);
        if value - prev <= cfg.rel_tol * value {
            break;
        }
        prev = value;
    }
    trace
}

fn start_rng(seed: u64, start: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(start as u64);
    rng
}

/// Per-sweep objective values of a single start (start index `start`).
pub fn ascent_trace(
    t: &CoefficientTensor,
    p: ExtendedReal,
    cfg: &AscentConfig,
    seed: u64,
    start: usize,
) -> Vec<f64> {
    let mut rng = start_rng(seed, start);
    match t.entries() {
        Entries::Real(a) => ascent_run(a, t.m(), t.n(), p, cfg, &mut rng),
        Entries::Complex(a) => ascent_run(a, t.m(), t.n(), p, cfg, &mut rng),
    }
}

/// Lower bound for ‖T‖ on ℓ_pⁿ factors by multi-start alternating
/// maximization. Each half-step is the exact maximizer over one argument, so
/// every start's objective is nondecreasing. Starts run in parallel; the
/// result depends only on (seed, starts).
pub fn sup_norm_ascent(
    t: &CoefficientTensor,
    p: ExtendedReal,
    cfg: &AscentConfig,
    seed: u64,
) -> Result<NormEstimate> {
    if !p.ge(1.0) {
        return domain(format!("p must be >= 1, got {p}"));
    }
    if cfg.starts < 1 || cfg.max_sweeps < 1 {
        return domain("ascent needs at least one start and one sweep");
    }
    let runs: Vec<(f64, usize)> = (0..cfg.starts)
        .into_par_iter()
        .map(|s| {
            let tr = ascent_trace(t, p, cfg, seed, s);
            (*tr.last().unwrap_or(&0.0), tr.len())
        })
        .collect();
    // strict comparison keeps the lowest start index on ties
    let mut best = runs[0].0;
    for r in &runs[1..] {
        if r.0 > best {
            best = r.0;
        }
    }
    let field = match t.field() {
        ScalarField::Real => "real",
        ScalarField::Complex => "phase",
    };
    Ok(NormEstimate {
        value: best,
        kind: NormKind::LowerBound,
        method: format!("alternating-ascent({field}, starts={})", cfg.starts),
        iterations: runs.iter().map(|r| r.1).sum(),
        seed: Some(seed),
    })
}
