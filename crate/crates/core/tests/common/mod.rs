#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

pub fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Run the binary from the crate root so fixture paths are relative.
pub fn bhlab(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_bhlab"))
        .args(args)
        .current_dir(manifest_dir())
        .output()
        .expect("spawn bhlab");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

/// (golden file stem, arguments). Every command appears at least once, in
/// both table (or csv) and json form.
pub const GOLDEN: &[(&str, &[&str])] = &[
    (
        "bh_const_m2_real",
        &["bh-const", "--m", "2", "--field", "real"],
    ),
    (
        "bh_const_m3_complex_json",
        &[
            "bh-const", "--m", "3", "--field", "complex", "--format", "json",
        ],
    ),
    ("hl_const_m3_p25", &["hl-const", "--m", "3", "--p", "25"]),
    (
        "hl_const_m2_inf_json",
        &["hl-const", "--m", "2", "--p", "inf", "--format", "json"],
    ),
    (
        "hl_const_m4_p40_complex",
        &["hl-const", "--m", "4", "--p", "40", "--field", "complex"],
    ),
    (
        "gen_const_43_inf_complex",
        &[
            "gen-const",
            "--q",
            "4/3,4/3",
            "--p",
            "inf",
            "--field",
            "complex",
        ],
    ),
    (
        "gen_const_12_inf_real_json",
        &[
            "gen-const",
            "--q",
            "1,2",
            "--p",
            "inf",
            "--field",
            "real",
            "--format",
            "json",
        ],
    ),
    (
        "gen_const_m3_p30_json",
        &[
            "gen-const",
            "--q",
            "3/2,3/2,30/17",
            "--p",
            "30",
            "--format",
            "json",
        ],
    ),
    (
        "interpolate_43_inf_s2",
        &["interpolate", "--q", "4/3,4/3", "--p", "inf", "--s", "2"],
    ),
    (
        "interpolate_43_inf_default_json",
        &[
            "interpolate",
            "--q",
            "4/3,4/3",
            "--p",
            "inf",
            "--format",
            "json",
        ],
    ),
    (
        "verify_hadamard2_inf",
        &[
            "verify",
            "--tensor",
            "tests/data/hadamard2.json",
            "--q",
            "4/3,4/3",
            "--p",
            "inf",
        ],
    ),
    (
        "verify_fourier3_p8_json",
        &[
            "verify",
            "--tensor",
            "tests/data/fourier3.json",
            "--q",
            "8/5,8/5",
            "--p",
            "8",
            "--seed",
            "3",
            "--format",
            "json",
        ],
    ),
    (
        "scan_m3_6_40",
        &[
            "scan", "--m", "3", "--p-min", "6", "--p-max", "40", "--step", "1",
        ],
    ),
    (
        "scan_m2_complex_json",
        &[
            "scan", "--m", "2", "--p-min", "4", "--p-max", "8", "--step", "2", "--field",
            "complex", "--format", "json",
        ],
    ),
    (
        "search_m2_n2_inf_seed7",
        &[
            "search", "--m", "2", "--n", "2", "--p", "inf", "--q", "4/3,4/3", "--iters", "10000",
            "--seed", "7",
        ],
    ),
    (
        "search_m2_n3_p9_json",
        &[
            "search",
            "--m",
            "2",
            "--n",
            "3",
            "--p",
            "9",
            "--q",
            "36/23,36/23",
            "--iters",
            "2000",
            "--seed",
            "1",
            "--format",
            "json",
        ],
    ),
];

fn golden_path(stem: &str) -> PathBuf {
    manifest_dir()
        .join("tests/golden")
        .join(format!("{stem}.txt"))
}

/// Compare stdout against the stored file; with UPDATE_GOLDEN set, rewrite it.
pub fn check_golden(stem: &str, args: &[&str]) -> Result<(), String> {
    let run = bhlab(args);
    if run.code != 0 {
        return Err(format!("{stem}: exit {} ({})", run.code, run.stderr.trim()));
    }
    let path = golden_path(stem);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &run.stdout).map_err(|e| e.to_string())?;
        return Ok(());
    }
    let want = std::fs::read_to_string(&path)
        .map_err(|e| format!("{stem}: cannot read {}: {e}", path.display()))?;
    if want != run.stdout {
        return Err(format!(
            "{stem}: output differs from {}\n--- got ---\n{}",
            path.display(),
            run.stdout
        ));
    }
    Ok(())
}

/// (arguments, expected exit code, expected stderr fragment)
pub const EXIT_CODES: &[(&[&str], i32, &str)] = &[
    (&["bh-const", "--m", "2"], 0, ""),
    (&["--help"], 0, ""),
    (&["bh-const", "--m", "1"], 2, "--m"),
    (&["bh-const"], 2, "--m"),
    (&["frobnicate"], 2, "frobnicate"),
    (
        &["bh-const", "--m", "2", "--field", "quaternion"],
        2,
        "quaternion",
    ),
    (&["hl-const", "--m", "2", "--p", "3"], 2, "2m"),
    (&["hl-const", "--m", "2", "--p", "abc"], 2, "abc"),
    (
        &["gen-const", "--q", "1.0,1.0", "--p", "8"],
        3,
        "exponent sum",
    ),
    (&["gen-const", "--q", "1/2,2", "--p", "inf"], 3, "range"),
    (
        &["gen-const", "--q", "4/3,4/3", "--p", "inf", "--tol", "-1"],
        2,
        "--tol",
    ),
    (
        &["interpolate", "--q", "4/3,4/3", "--p", "inf", "--s", "1.3"],
        3,
        "s must exceed",
    ),
    (
        &["interpolate", "--q", "4/3,4/3", "--p", "inf", "--s", "2.5"],
        3,
        "s must not exceed",
    ),
    (&["interpolate", "--q", "4/3,4/3", "--p", "4"], 3, "p > 2m"),
    (
        &[
            "verify",
            "--tensor",
            "tests/data/zero.json",
            "--q",
            "4/3,4/3",
            "--p",
            "inf",
        ],
        4,
        "identically zero",
    ),
    (
        &[
            "verify",
            "--tensor",
            "tests/data/hadamard2.json",
            "--q",
            "4/3",
            "--p",
            "inf",
        ],
        4,
        "dimension mismatch",
    ),
    (
        &[
            "verify",
            "--tensor",
            "tests/data/short.json",
            "--q",
            "4/3,4/3",
            "--p",
            "inf",
        ],
        4,
        "expected n^m = 4",
    ),
    (
        &[
            "verify",
            "--tensor",
            "tests/data/truncated.json",
            "--q",
            "4/3,4/3",
            "--p",
            "inf",
        ],
        4,
        "malformed",
    ),
    (
        &[
            "verify",
            "--tensor",
            "tests/data/missing.json",
            "--q",
            "4/3,4/3",
            "--p",
            "inf",
        ],
        4,
        "cannot read",
    ),
    (
        &[
            "verify",
            "--tensor",
            "tests/data/hadamard2.json",
            "--q",
            "3/2,6/5",
            "--p",
            "inf",
        ],
        0,
        "",
    ),
    (
        &[
            "verify",
            "--tensor",
            "tests/data/hadamard2.json",
            "--q",
            "3/2,3/2",
            "--p",
            "inf",
        ],
        3,
        "exponent sum",
    ),
    (
        &[
            "verify",
            "--tensor",
            "tests/data/wide3.json",
            "--q",
            "3/2,3/2,3/2",
            "--p",
            "inf",
        ],
        5,
        "cap",
    ),
    (
        &[
            "verify",
            "--tensor",
            "tests/data/wide3.json",
            "--q",
            "3/2,3/2,3/2",
            "--p",
            "inf",
            "--cap",
            "26",
        ],
        0,
        "",
    ),
    (
        &[
            "verify",
            "--tensor",
            "tests/data/hadamard2.json",
            "--q",
            "4/3,4/3",
            "--p",
            "inf",
            "--cap",
            "29",
        ],
        5,
        "hard limit",
    ),
    (
        &["scan", "--m", "2", "--p-min", "3", "--p-max", "9"],
        2,
        "p-min",
    ),
    (
        &["scan", "--m", "2", "--p-min", "9", "--p-max", "5"],
        2,
        "p-max",
    ),
    (
        &[
            "scan", "--m", "2", "--p-min", "4", "--p-max", "9", "--step", "0",
        ],
        2,
        "step",
    ),
    (
        &[
            "search",
            "--m",
            "3",
            "--n",
            "13",
            "--p",
            "inf",
            "--q",
            "3/2,3/2,3/2",
            "--iters",
            "5",
        ],
        5,
        "cap",
    ),
    (
        &[
            "search", "--m", "2", "--n", "2", "--p", "inf", "--q", "4/3", "--iters", "5",
        ],
        4,
        "dimension mismatch",
    ),
];

pub fn check_exit_code(args: &[&str], code: i32, fragment: &str) -> Result<(), String> {
    let run = bhlab(args);
    if run.code != code {
        return Err(format!(
            "{args:?}: exit {} (want {code}); stderr: {}",
            run.code,
            run.stderr.trim()
        ));
    }
    if !run.stderr.contains(fragment) {
        return Err(format!(
            "{args:?}: stderr lacks {fragment:?}: {}",
            run.stderr.trim()
        ));
    }
    Ok(())
}

/// p values whose p_free cell is populated, and every p, from scan CSV.
pub fn scan_p_free_rows(csv: &str) -> Result<(Vec<f64>, Vec<f64>), String> {
    let mut lines = csv.lines();
    let header = lines.next().ok_or("empty scan output")?;
    if header != "m,p,legacy,p_dependent,p_free,best,lower,above_threshold" {
        return Err(format!("unexpected header {header}"));
    }
    let (mut populated, mut all) = (Vec::new(), Vec::new());
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 8 {
            return Err(format!("row has {} cells: {line}", cells.len()));
        }
        let p: f64 = cells[1].parse().map_err(|_| format!("bad p in {line}"))?;
        all.push(p);
        if !cells[4].is_empty() {
            populated.push(p);
        }
    }
    Ok((populated, all))
}

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// m reciprocals in [lo, hi] summing to `target`: start from the uniform
/// point and apply random pairwise transfers that respect both bounds.
pub fn random_reciprocals(
    rng: &mut ChaCha8Rng,
    m: usize,
    target: f64,
    lo: f64,
    hi: f64,
) -> Vec<f64> {
    let mut r = vec![target / m as f64; m];
    assert!(
        r[0] >= lo && r[0] <= hi,
        "uniform point outside [{lo}, {hi}]"
    );
    for _ in 0..8 * m {
        let i = rng.random_range(0..m);
        let j = (i + rng.random_range(1..m)) % m;
        let room = (r[i] - lo).min(hi - r[j]);
        if room > 0.0 {
            let t = rng.random_range(0.0..=room);
            r[i] -= t;
            r[j] += t;
        }
    }
    r
}

/// Random real tensor with entries uniform in [-1, 1].
pub fn random_real_tensor(
    rng: &mut ChaCha8Rng,
    m: usize,
    n: usize,
) -> bhlab::verifier::CoefficientTensor {
    let len = n.pow(m as u32);
    let a = (0..len).map(|_| rng.random_range(-1.0..=1.0)).collect();
    bhlab::verifier::CoefficientTensor::real(m, n, a).unwrap()
}
