use num_complex::Complex64;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::khinchine::ScalarField;

#[derive(Debug, Clone, PartialEq)]
pub enum Entries {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

impl Entries {
    fn len(&self) -> usize {
        match self {
            Entries::Real(v) => v.len(),
            Entries::Complex(v) => v.len(),
        }
    }
}

/// Coefficients a_{j_1…j_m} = T(e_{j_1}, …, e_{j_m}) of an m-linear form on
/// n-dimensional sequence spaces, stored densely in row-major order (the last
/// index varies fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTensor {
    m: usize,
    n: usize,
    entries: Entries,
}

pub(crate) fn checked_len(m: usize, n: usize) -> Result<usize> {
    if m < 1 || n < 1 {
        return Err(Error::InvalidTensor(format!(
            "m and n must both be >= 1, got m = {m}, n = {n}"
        )));
    }
    u32::try_from(m)
        .ok()
        .and_then(|mm| n.checked_pow(mm))
        .ok_or_else(|| Error::InvalidTensor(format!("n^m overflows for n = {n}, m = {m}")))
}

impl CoefficientTensor {
    fn build(m: usize, n: usize, entries: Entries) -> Result<Self> {
        let expected = checked_len(m, n)?;
        if entries.len() != expected {
            return Err(Error::InvalidTensor(format!(
                "expected n^m = {expected} entries, got {}",
                entries.len()
            )));
        }
        let finite = match &entries {
            Entries::Real(v) => v.iter().all(|x| x.is_finite()),
            Entries::Complex(v) => v.iter().all(|z| z.re.is_finite() && z.im.is_finite()),
        };
        if !finite {
            return Err(Error::InvalidTensor("all entries must be finite".into()));
        }
        Ok(CoefficientTensor { m, n, entries })
    }

    pub fn real(m: usize, n: usize, entries: Vec<f64>) -> Result<Self> {
        Self::build(m, n, Entries::Real(entries))
    }

    pub fn complex(m: usize, n: usize, entries: Vec<Complex64>) -> Result<Self> {
        Self::build(m, n, Entries::Complex(entries))
    }

    pub fn zeros(m: usize, n: usize, field: ScalarField) -> Result<Self> {
        let len = checked_len(m, n)?;
        Ok(match field {
            ScalarField::Real => Self::real(m, n, vec![0.0; len])?,
            ScalarField::Complex => Self::complex(m, n, vec![Complex64::new(0.0, 0.0); len])?,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> ScalarField {
        match self.entries {
            Entries::Real(_) => ScalarField::Real,
            Entries::Complex(_) => ScalarField::Complex,
        }
    }

    pub fn entries(&self) -> &Entries {
        &self.entries
    }

    pub fn real_entries(&self) -> Option<&[f64]> {
        match &self.entries {
            Entries::Real(v) => Some(v),
            Entries::Complex(_) => None,
        }
    }

    pub(crate) fn real_entries_mut(&mut self) -> Option<&mut Vec<f64>> {
        match &mut self.entries {
            Entries::Real(v) => Some(v),
            Entries::Complex(_) => None,
        }
    }

    pub fn moduli(&self) -> Vec<f64> {
        match &self.entries {
            Entries::Real(v) => v.iter().map(|x| x.abs()).collect(),
            Entries::Complex(v) => v.iter().map(|z| z.norm()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.entries {
            Entries::Real(v) => v.iter().all(|&x| x == 0.0),
            Entries::Complex(v) => v.iter().all(|z| z.re == 0.0 && z.im == 0.0),
        }
    }

    /// Row-major flat offset of a multi-index.
    pub fn offset(&self, index: &[usize]) -> usize {
        debug_assert_eq!(index.len(), self.m);
        index.iter().fold(0, |acc, &j| acc * self.n + j)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Doc {
            m: usize,
            n: usize,
            field: String,
            entries: Vec<Value>,
            layout: Option<String>,
        }
        let doc: Doc = serde_json::from_str(text)
            .map_err(|e| Error::InvalidTensor(format!("malformed tensor JSON: {e}")))?;
        if let Some(layout) = &doc.layout {
            if layout != "row-major" {
                return Err(Error::InvalidTensor(format!(
                    "unsupported layout '{layout}', only 'row-major' is accepted"
                )));
            }
        }
        let expected = checked_len(doc.m, doc.n)?;
        if doc.entries.len() != expected {
            return Err(Error::InvalidTensor(format!(
                "expected n^m = {expected} entries for m = {}, n = {}, got {}",
                doc.m,
                doc.n,
                doc.entries.len()
            )));
        }
        let bad = |i: usize| Error::InvalidTensor(format!("entry {i} has the wrong shape"));
        match doc.field.to_ascii_lowercase().as_str() {
            "real" => {
                let v = doc
                    .entries
                    .iter()
                    .enumerate()
                    .map(|(i, e)| e.as_f64().ok_or_else(|| bad(i)))
                    .collect::<Result<Vec<_>>>()?;
                Self::real(doc.m, doc.n, v)
            }
            "complex" => {
                let v = doc
                    .entries
                    .iter()
                    .enumerate()
                    .map(|(i, e)| match e.as_array().map(|a| a.as_slice()) {
                        Some([re, im]) => Ok(Complex64::new(
                            re.as_f64().ok_or_else(|| bad(i))?,
                            im.as_f64().ok_or_else(|| bad(i))?,
                        )),
                        _ => Err(bad(i)),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Self::complex(doc.m, doc.n, v)
            }
            other => Err(Error::InvalidTensor(format!(
                "field must be 'real' or 'complex', got '{other}'"
            ))),
        }
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = match &self.entries {
            Entries::Real(v) => v.iter().map(|&x| json!(x)).collect(),
            Entries::Complex(v) => v.iter().map(|z| json!([z.re, z.im])).collect(),
        };
        json!({
            "m": self.m,
            "n": self.n,
            "field": self.field().to_string(),
            "entries": entries,
            "layout": "row-major",
        })
    }
}
