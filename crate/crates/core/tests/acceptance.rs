//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

mod common;

use std::time::Instant;

use bhlab::constants::{
    bh_lower_real, bh_upper, hl_threshold, hl_upper_p_dependent, hl_upper_p_free,
};
use bhlab::exponents::{
    gen_bh_upper, gen_bh_upper_prior, interpolation_weights, lambda_0, lambda_ladder, lambda_m,
    max_q_threshold, MultiExponent,
};
use bhlab::khinchine::khinchine_a_inv_bh;
use bhlab::scalar::{gamma, solve_q0, KernelConfig, EULER_GAMMA, SQRT_PI};
use bhlab::verifier::{
    applicable_upper_bound, certified_ratio, hadamard_block_form, sup_norm_ascent,
    sup_norm_exact_real_linf, sup_norm_upper_holder, AscentConfig, DEFAULT_CAP,
};
use bhlab::{ExtendedReal, ScalarField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn err(e: bhlab::Error) -> String {
    e.to_string()
}

fn constant_exactness() -> Outcome {
    let r = bh_upper(2, ScalarField::Real).map_err(err)?.value;
    let c = bh_upper(2, ScalarField::Complex).map_err(err)?.value;
    let (er, ec) = (rel(r, 2f64.sqrt()), rel(c, 2.0 / SQRT_PI));
    ensure(er <= 1e-12, || format!("real: {r} vs sqrt 2, rel {er:e}"))?;
    ensure(ec <= 1e-12, || {
        format!("complex: {c} vs 2/sqrt pi, rel {ec:e}")
    })?;
    Ok(format!("rel errors {er:.1e}, {ec:.1e}"))
}

fn khinchine_crossover() -> Outcome {
    let q0 = solve_q0(&KernelConfig::default()).map_err(err)?;
    ensure((1.8473..=1.8475).contains(&q0), || format!("q0 = {q0}"))?;
    // the two real branches written out independently
    let gamma_branch =
        2f64.sqrt() * (gamma(0.5 * (1.0 + q0)).map_err(err)? / SQRT_PI).powf(1.0 / q0);
    let power_branch = 2f64.powf(0.5 - 1.0 / q0);
    let d = (gamma_branch - power_branch).abs();
    ensure(d <= 1e-10, || format!("branches differ by {d:e}"))?;
    Ok(format!("q0 = {q0}, branch gap {d:.1e}"))
}

fn product_recursion() -> Outcome {
    let mut worst: f64 = 0.0;
    for field in [ScalarField::Real, ScalarField::Complex] {
        let mut chain = 1.0;
        for m in 2..=50u32 {
            chain *= khinchine_a_inv_bh(m, field).map_err(err)?;
            let e = rel(bh_upper(m, field).map_err(err)?.value, chain);
            ensure(e <= 1e-11, || format!("m = {m} {field}: rel {e:e}"))?;
            worst = worst.max(e);
        }
    }
    // 446381/55440 = Σ_{k=1}^{12} 1/(2k) + 13/2, checked in integers
    let den = 55_440i64;
    let half_harmonic: i64 = (1..=12).map(|k| den / (2 * k)).sum();
    ensure(
        half_harmonic == 86_021 && half_harmonic + 13 * den / 2 == 446_381,
        || format!("seam rational: {half_harmonic}/55440"),
    )?;
    // seam value at m = 14 from the rational prefactor
    let tail = (gamma(1.5 - 1.0 / 14.0).map_err(err)? / SQRT_PI).powf(14.0 / (2.0 - 28.0));
    let seam = 2f64.powf(446_381.0 / 55_440.0 - 7.0) * tail;
    let e14 = rel(bh_upper(14, ScalarField::Real).map_err(err)?.value, seam);
    ensure(e14 <= 1e-12, || format!("m = 14 seam: rel {e14:e}"))?;
    Ok(format!(
        "m = 2..50 both fields, worst rel {worst:.1e}; seam rel {e14:.1e}"
    ))
}

fn sublinear_envelopes() -> Outcome {
    let ce = (1.0 - EULER_GAMMA) / 2.0;
    let re = (2.0 - 2f64.ln() - EULER_GAMMA) / 2.0;
    let mut min_slack = f64::INFINITY;
    for m in 2..=10_000u32 {
        let mf = m as f64;
        let c = bh_upper(m, ScalarField::Complex).map_err(err)?.value;
        let r = bh_upper(m, ScalarField::Real).map_err(err)?.value;
        let (cb, rb) = (mf.powf(ce), 1.3 * mf.powf(re));
        ensure(c < cb, || format!("complex m = {m}: {c} >= {cb}"))?;
        ensure(r < rb, || format!("real m = {m}: {r} >= {rb}"))?;
        min_slack = min_slack.min((cb - c) / cb).min((rb - r) / rb);
    }
    Ok(format!(
        "m = 2..10^4, smallest relative slack {min_slack:.3e}"
    ))
}

fn improvement_theorem() -> Outcome {
    let mut checked = 0;
    for m in 3..=30u32 {
        let t = hl_threshold(m) as f64;
        for k in 1..=50 {
            let p = t * (1e6 / t).powf(k as f64 / 50.0);
            let p = ExtendedReal::finite(p).map_err(err)?;
            for field in [ScalarField::Real, ScalarField::Complex] {
                let free = hl_upper_p_free(m, p, field).map_err(err)?;
                let dep = hl_upper_p_dependent(m, p, field).map_err(err)?;
                ensure(free.valid, || format!("m = {m}, p = {p}: p-free not valid"))?;
                ensure(free.value < dep.value, || {
                    format!("m = {m}, p = {p} {field}: {} !< {}", free.value, dep.value)
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (m, p, field) points, all strict"))
}

fn interpolation_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst_sum: f64 = 0.0;
    let mut worst_res: f64 = 0.0;
    let mut worst_ladder: f64 = 0.0;
    for case in 0..500 {
        let m = rng.random_range(2..=6usize);
        let p = if case % 4 == 0 {
            ExtendedReal::Infinity
        } else {
            let factor = 1.0 + (rng.random_range(-4.6..4.6f64)).exp();
            ExtendedReal::finite(2.0 * m as f64 * factor).map_err(err)?
        };
        let target = 0.5 * (m as f64 + 1.0) - m as f64 * p.recip();
        let r = common::random_reciprocals(&mut rng, m, target, 0.501, 1.0 - m as f64 * p.recip());
        let q = MultiExponent::new(r.iter().map(|x| 1.0 / x).collect()).map_err(err)?;
        let s = q.max() + rng.random_range(0.01..=1.0) * (2.0 - q.max());
        let d = interpolation_weights(&q, p, Some(s)).map_err(err)?;
        let tag = || {
            format!(
                "case {case}: m = {m}, p = {p}, q = {:?}, s = {s}",
                q.as_slice()
            )
        };
        ensure(d.thetas.iter().all(|&t| t > 0.0 && t < 1.0), || {
            format!("{}: theta {:?}", tag(), d.thetas)
        })?;
        let sum_err = (d.theta_sum() - 1.0).abs();
        ensure(sum_err <= 1e-12, || {
            format!("{}: sum theta - 1 = {sum_err:e}", tag())
        })?;
        let res = d.residuals(&q).into_iter().fold(0.0, f64::max);
        ensure(res < 1e-10, || format!("{}: residual {res:e}", tag()))?;
        ensure(d.lambda < s, || {
            format!("{}: lambda {} >= s", tag(), d.lambda)
        })?;
        worst_sum = worst_sum.max(sum_err);
        worst_res = worst_res.max(res);
        if let ExtendedReal::Finite(pv) = p {
            let ladder = lambda_ladder(m as u32, p, s).map_err(err)?;
            let lm = lambda_m(m as u32, p, s).map_err(err)?;
            let l0 = lambda_0(m as u32, s).map_err(err)?;
            ensure((ladder[0] - l0).abs() <= 1e-12 * l0, || {
                format!("{}: ladder start {} vs {l0}", tag(), ladder[0])
            })?;
            let top = (ladder[m] - lm).abs() / lm;
            ensure(top <= 1e-12, || {
                format!("{}: ladder end {} vs {lm}", tag(), ladder[m])
            })?;
            for j in 0..m {
                // (p/λ_j)* = λ_{j+1}/λ_j, i.e. λ_j/p + λ_j/λ_{j+1} = 1
                let e = (ladder[j] / pv + ladder[j] / ladder[j + 1] - 1.0).abs();
                ensure(e <= 1e-12, || {
                    format!("{}: conjugate identity off by {e:e} at j = {j}", tag())
                })?;
                worst_ladder = worst_ladder.max(e);
            }
        }
    }
    Ok(format!(
        "500 instances; max |sum theta - 1| {worst_sum:.1e}, residual {worst_res:.1e}, ladder {worst_ladder:.1e}"
    ))
}

fn norm_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let cfg = AscentConfig::default();
    let mut worst: f64 = 0.0;
    for i in 0..100u64 {
        let m = rng.random_range(2..=3usize);
        let n = rng.random_range(2..=3usize);
        let t = common::random_real_tensor(&mut rng, m, n);
        let exact = sup_norm_exact_real_linf(&t, DEFAULT_CAP)
            .map_err(err)?
            .value;
        let asc = sup_norm_ascent(&t, ExtendedReal::Infinity, &cfg, i)
            .map_err(err)?
            .value;
        let hold = sup_norm_upper_holder(&t, ExtendedReal::Infinity)
            .map_err(err)?
            .value;
        let d = (asc - exact).abs();
        ensure(d <= 1e-9, || {
            format!("tensor {i} (m = {m}, n = {n}): ascent {asc} vs exact {exact}")
        })?;
        ensure(asc <= exact + 1e-12 && exact <= hold + 1e-12, || {
            format!("tensor {i}: ordering {asc} <= {exact} <= {hold} fails")
        })?;
        worst = worst.max(d);
    }
    Ok(format!("100 tensors, max |ascent - exact| {worst:.1e}"))
}

fn extremal_identity() -> Outcome {
    let mut lines = Vec::new();
    for m in 2..=4usize {
        let t = hadamard_block_form(m).map_err(err)?;
        let norm = sup_norm_exact_real_linf(&t, DEFAULT_CAP)
            .map_err(err)?
            .value;
        let want_norm = (1u64 << (m - 1)) as f64;
        ensure(norm == want_norm, || {
            format!("m = {m}: norm {norm} != {want_norm}")
        })?;
        let q = MultiExponent::uniform(m, 2.0 * m as f64 / (m as f64 + 1.0)).map_err(err)?;
        let ratio = certified_ratio(&t, &q, ExtendedReal::Infinity, DEFAULT_CAP)
            .map_err(err)?
            .ratio;
        let want = 2f64.powf(1.0 - 1.0 / m as f64);
        let lower = bh_lower_real(m as u32).map_err(err)?.value;
        ensure((ratio - want).abs() <= 1e-10, || {
            format!("m = {m}: ratio {ratio} vs {want}")
        })?;
        ensure((ratio - lower).abs() <= 1e-10, || {
            format!("m = {m}: ratio {ratio} vs lower {lower}")
        })?;
        lines.push(format!("m={m}: {ratio}"));
    }
    let upper2 = bh_upper(2, ScalarField::Real).map_err(err)?.value;
    let lower2 = bh_lower_real(2).map_err(err)?.value;
    ensure((upper2 - lower2).abs() <= 1e-12, || {
        format!("m = 2: lower {lower2} vs upper {upper2}")
    })?;
    Ok(format!("{}; m = 2 lower = upper", lines.join(", ")))
}

fn ceiling_respect() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut min_gap = f64::INFINITY;
    let mut evaluated = 0;
    for i in 0..500 {
        let m = rng.random_range(2..=3usize);
        let n = rng.random_range(2..=3usize);
        let t = common::random_real_tensor(&mut rng, m, n);
        let th = hl_threshold(m as u32) as f64;
        let ps = [
            ExtendedReal::Infinity,
            ExtendedReal::Finite(th + 1.0),
            ExtendedReal::Finite(10.0 * th),
        ];
        for p in ps {
            let crit = bhlab::exponents::hl_critical_exponent(m as u32, p).map_err(err)?;
            let q = MultiExponent::uniform(m, crit).map_err(err)?;
            let ratio = certified_ratio(&t, &q, p, DEFAULT_CAP).map_err(err)?.ratio;
            let bound = applicable_upper_bound(&q, p, ScalarField::Real, 1e-9)
                .map_err(err)?
                .value;
            ensure(ratio <= bound + 1e-9, || {
                format!("tensor {i}, p = {p}: ratio {ratio} > bound {bound}")
            })?;
            min_gap = min_gap.min(bound - ratio);
            evaluated += 1;
        }
    }
    Ok(format!("{evaluated} ratios, smallest gap {min_gap:.3e}"))
}

fn generalized_comparison() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut min_margin = f64::INFINITY;
    for i in 0..100 {
        let m = rng.random_range(3..=6usize);
        let cutoff = max_q_threshold(m as u32);
        let lo = (1.0 + 1e-9) / cutoff;
        let mut q: Vec<f64> =
            common::random_reciprocals(&mut rng, m, 0.5 * (m as f64 + 1.0), lo, 1.0)
                .iter()
                .map(|r| 1.0 / r)
                .collect();
        q.sort_by(f64::total_cmp);
        let q = MultiExponent::new(q).map_err(err)?;
        ensure(q.max() < cutoff, || {
            format!("vector {i}: max q {} >= {cutoff}", q.max())
        })?;
        let new = gen_bh_upper(&q, ScalarField::Complex).map_err(err)?.value;
        let prior = gen_bh_upper_prior(&q).map_err(err)?.value;
        ensure(new <= prior, || {
            format!("vector {i}, q = {:?}: {new} > prior {prior}", q.as_slice())
        })?;
        min_margin = min_margin.min(prior - new);
    }
    Ok(format!("100 vectors, smallest margin {min_margin:.3e}"))
}

fn cli_contract() -> Outcome {
    for (stem, args) in common::GOLDEN {
        common::check_golden(stem, args)?;
    }
    for (args, code, frag) in common::EXIT_CODES {
        common::check_exit_code(args, *code, frag)?;
    }
    let run = common::bhlab(&[
        "scan", "--m", "3", "--p-min", "6", "--p-max", "40", "--step", "1",
    ]);
    ensure(run.code == 0, || format!("scan exit {}", run.code))?;
    let (populated, all) = common::scan_p_free_rows(&run.stdout)?;
    let want: Vec<f64> = all.iter().copied().filter(|&p| p > 24.0).collect();
    ensure(populated == want, || {
        format!("p_free populated at {populated:?}")
    })?;
    Ok(format!(
        "{} golden files, {} exit codes, p_free on {} of {} scan rows",
        common::GOLDEN.len(),
        common::EXIT_CODES.len(),
        populated.len(),
        all.len()
    ))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("constant exactness", constant_exactness),
        ("Khinchine crossover", khinchine_crossover),
        ("product = Khinchine recursion", product_recursion),
        ("sublinear envelopes", sublinear_envelopes),
        ("p-free improves p-dependent", improvement_theorem),
        ("interpolation suite", interpolation_suite),
        ("norm oracles", norm_oracles),
        ("extremal identity", extremal_identity),
        ("ceiling respect", ceiling_respect),
        ("generalized vs prior bound", generalized_comparison),
        ("CLI contract", cli_contract),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.2}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
