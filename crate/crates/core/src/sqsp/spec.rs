use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::bits::BasisString;
use crate::dense::{AmplitudeVector, NORM_TOL};
use crate::{Error, Result};

/// A validated `n`-qubit target state with `d` nonzero amplitudes.
///
/// Terms keep their input order: term `i` is prepared from index value `i`
/// of the dense register.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseStateSpec {
    n: usize,
    terms: Vec<(BasisString, Complex64)>,
}

impl SparseStateSpec {
    pub fn new(n: usize, terms: Vec<(BasisString, Complex64)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::BadWidth { expected: 1, found: 0 });
        }
        for (i, (b, a)) in terms.iter().enumerate() {
            if b.width() != n {
                return Err(Error::BadWidth {
                    expected: n,
                    found: b.width(),
                });
            }
            if *a == Complex64::new(0.0, 0.0) {
                return Err(Error::ZeroAmplitude(i));
            }
        }
        let mut sorted: Vec<&BasisString> = terms.iter().map(|(b, _)| b).collect();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateBasis(w[0].to_bit_string()));
        }
        let norm_sqr: f64 = terms.iter().map(|(_, a)| a.norm_sqr()).sum();
        if terms.is_empty() || (norm_sqr.sqrt() - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self { n, terms })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> &[(BasisString, Complex64)] {
        &self.terms
    }

    pub fn amplitudes(&self) -> AmplitudeVector {
        AmplitudeVector::new(self.terms.iter().map(|(_, a)| *a).collect())
            .expect("validated on construction")
    }

    pub fn bases(&self) -> impl Iterator<Item = &BasisString> {
        self.terms.iter().map(|(b, _)| b)
    }
}

/// Parses bit strings (`0`/`1`, MSB left) and validates the result.
pub fn validate_spec<S: AsRef<str>>(n: usize, raw: &[(S, Complex64)]) -> Result<SparseStateSpec> {
    let mut terms = Vec::with_capacity(raw.len());
    for (s, a) in raw {
        let s = s.as_ref();
        if !s.chars().all(|c| c == '0' || c == '1') {
            return Err(Error::BadBasisChar(s.to_string()));
        }
        if s.len() != n {
            return Err(Error::BadWidth {
                expected: n,
                found: s.len(),
            });
        }
        let b: BasisString = s.parse().map_err(|_| Error::BadBasisChar(String::from(s)))?;
        terms.push((b, *a));
    }
    SparseStateSpec::new(n, terms)
}
