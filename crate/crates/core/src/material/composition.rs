use std::ops::Index;

use crate::error::{Error, Result};

/// Allowed deviation of a composition sum from one.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// Allowed excursion of a single fraction outside `[0, 1]`.
pub const FRACTION_TOLERANCE: f64 = 1e-12;

/// Volume fractions of the `k` primary materials at one location.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositionVector(Vec<f64>);

impl CompositionVector {
    pub fn new(fractions: Vec<f64>) -> Result<Self> {
        check_fractions(&fractions)?;
        Ok(CompositionVector(fractions))
    }

    /// Pure material `index` out of `k`.
    pub fn pure(k: usize, index: usize) -> Self {
        let mut v = vec![0.0; k];
        v[index] = 1.0;
        CompositionVector(v)
    }

    pub(crate) fn from_raw(fractions: Vec<f64>) -> Self {
        CompositionVector(fractions)
    }

    pub fn fractions(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn expect_len(&self, k: usize) -> Result<()> {
        if self.0.len() != k {
            return Err(Error::Shape {
                expected: k,
                actual: self.0.len(),
            });
        }
        Ok(())
    }

    /// Largest absolute component difference.
    pub fn max_abs_diff(&self, other: &CompositionVector) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl Index<usize> for CompositionVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

fn check_fractions(fractions: &[f64]) -> Result<()> {
    if fractions.is_empty() {
        return Err(Error::InvalidComposition("no fractions".into()));
    }
    for (i, &v) in fractions.iter().enumerate() {
        if !(-FRACTION_TOLERANCE..=1.0 + FRACTION_TOLERANCE).contains(&v) {
            return Err(Error::InvalidComposition(format!("fraction {i} = {v} is outside [0, 1]")));
        }
    }
    let sum: f64 = fractions.iter().sum();
    if (sum - 1.0).abs() > SUM_TOLERANCE {
        return Err(Error::InvalidComposition(format!(
            "composition sum {} \u{2260} 1 (volume fractions must sum to one)",
            crate::numfmt::sig(sum, 9)
        )));
    }
    Ok(())
}

/// Blends the two end compositions: `V_r = f (Mcs_r - Mcf_r) + Mcf_r`, so
/// `f = 0` yields `mcf` and `f = 1` yields `mcs`.
pub fn eval_composition(f: f64, mcs: &CompositionVector, mcf: &CompositionVector) -> Result<CompositionVector> {
    if !(0.0..=1.0).contains(&f) {
        return Err(Error::Domain {
            what: "blend parameter f",
            value: f,
            domain: "[0, 1]",
        });
    }
    mcf.expect_len(mcs.len())?;
    let mut out: Vec<f64> = mcs
        .0
        .iter()
        .zip(&mcf.0)
        .map(|(s, e)| f * (s - e) + e)
        .collect();
    let sum: f64 = out.iter().sum();
    if (sum - 1.0).abs() > SUM_TOLERANCE {
        out.iter_mut().for_each(|v| *v /= sum);
    }
    Ok(CompositionVector(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cv(v: &[f64]) -> CompositionVector {
        CompositionVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn endpoints_and_midpoint() {
        let (mcs, mcf) = (cv(&[0.7, 0.3]), cv(&[0.1, 0.9]));
        // 1 * (0.3 - 0.9) + 0.9 rounds to 0.29999999999999993.
        assert!(eval_composition(1.0, &mcs, &mcf).unwrap().max_abs_diff(&mcs) <= 1e-15);
        assert_eq!(eval_composition(0.0, &mcs, &mcf).unwrap(), mcf);
        let (dyadic_s, dyadic_f) = (cv(&[0.75, 0.25]), cv(&[0.125, 0.875]));
        assert_eq!(eval_composition(1.0, &dyadic_s, &dyadic_f).unwrap(), dyadic_s);
        let mid = eval_composition(0.5, &cv(&[0.8, 0.2]), &cv(&[0.2, 0.8])).unwrap();
        assert!((mid[0] - 0.5).abs() < 1e-15 && (mid[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn sum_violation_message() {
        let err = CompositionVector::new(vec![0.6, 0.3]).unwrap_err();
        assert_eq!(
            err.to_string(),
            "invalid composition: composition sum 0.9 \u{2260} 1 (volume fractions must sum to one)"
        );
    }

    #[test]
    fn negative_fraction_rejected() {
        assert!(CompositionVector::new(vec![1.5, -0.5]).is_err());
    }

    #[test]
    fn shape_and_domain_errors() {
        let err = eval_composition(0.5, &cv(&[1.0]), &cv(&[0.5, 0.5])).unwrap_err();
        assert!(matches!(err, Error::Shape { expected: 1, actual: 2 }));
        assert!(eval_composition(1.5, &cv(&[1.0]), &cv(&[1.0])).is_err());
        assert!(eval_composition(f64::NAN, &cv(&[1.0]), &cv(&[1.0])).is_err());
    }

    fn composition(k: usize) -> impl Strategy<Value = CompositionVector> {
        prop::collection::vec(0.0f64..1.0, k).prop_filter_map("zero sum", |raw| {
            let sum: f64 = raw.iter().sum();
            (sum > 1e-6).then(|| CompositionVector::new(raw.iter().map(|v| v / sum).collect()).ok())?
        })
    }

    proptest! {
        #[test]
        fn partition_of_unity(f in 0.0f64..=1.0, (mcs, mcf) in (2usize..6).prop_flat_map(|k| (composition(k), composition(k)))) {
            let v = eval_composition(f, &mcs, &mcf).unwrap();
            prop_assert!((v.sum() - 1.0).abs() <= 1e-12);
            prop_assert!(v.fractions().iter().all(|x| (-1e-12..=1.0 + 1e-12).contains(x)));
        }
    }
}
