use super::tensor::CoefficientTensor;
use crate::error::{domain, Result};

pub const MAX_HADAMARD_M: usize = 5;

/// Native slot dimensions of T_m: (2, 2) for m = 2, then every existing slot
/// doubles and a new slot of size 2 is appended.
fn native_dims(m: usize) -> Vec<usize> {
    let mut dims = vec![2, 2];
    for _ in 3..=m {
        dims.iter_mut().for_each(|d| *d *= 2);
        dims.push(2);
    }
    dims
}

fn coefficient(idx: &[usize], dims: &[usize]) -> f64 {
    if idx.len() == 2 {
        return if idx[0] == 1 && idx[1] == 1 {
            -1.0
        } else {
            1.0
        };
    }
    let (last, head) = idx.split_last().expect("m >= 2");
    let head_dims = &dims[..head.len()];
    let block = head[0] / (head_dims[0] / 2);
    let mut inner = Vec::with_capacity(head.len());
    for (&j, &d) in head.iter().zip(head_dims) {
        let half = d / 2;
        if j / half != block {
            return 0.0;
        }
        inner.push(j % half);
    }
    let halves: Vec<usize> = head_dims.iter().map(|d| d / 2).collect();
    // (x₁ + x₂) on the first block, (x₁ − x₂) on the second
    let sign = if block == 1 && *last == 1 { -1.0 } else { 1.0 };
    sign * coefficient(&inner, &halves)
}

/// Real m-linear form with 4^{m−1} coefficients ±1, ‖T_m‖_∞ = 2^{m−1} and
/// mixed ℓ_{2m/(m+1)} norm 2^{(m²−1)/m}, so it attains the ratio 2^{1−1/m}.
///
/// T₂ has matrix [[1, 1], [1, −1]];
/// T_m(x¹, …, xᵐ) = (xᵐ₁ + xᵐ₂)·T_{m−1}(first halves) + (xᵐ₁ − xᵐ₂)·T_{m−1}(second halves).
/// Every slot is zero-padded to n = 2^{m−1}.
pub fn hadamard_block_form(m: usize) -> Result<CoefficientTensor> {
    if !(2..=MAX_HADAMARD_M).contains(&m) {
        return domain(format!(
            "block form is available for 2 <= m <= {MAX_HADAMARD_M}, got {m}"
        ));
    }
    let dims = native_dims(m);
    let n = 1usize << (m - 1);
    let mut t = CoefficientTensor::zeros(m, n, crate::khinchine::ScalarField::Real)?;
    let a = t.real_entries_mut().expect("real");
    let mut idx = vec![0usize; m];
    for slot in a.iter_mut() {
        if idx.iter().zip(&dims).all(|(j, d)| j < d) {
            *slot = coefficient(&idx, &dims);
        }
        for j in idx.iter_mut().rev() {
            *j += 1;
            if *j < n {
                break;
            }
            *j = 0;
        }
    }
    Ok(t)
}
