use std::fmt;

use crate::error::{Error, Result};

/// Shape of the graded part of a composition function. Every kind is
/// normalized so that `g(0) = 0` and `g(1) = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FunctionKind {
    Linear,
    /// `t^p`, `p > 0`.
    Power { exponent: f64 },
    /// `ln(1 + (e - 1) t)`.
    Logarithmic,
    /// `(e^{λt} - 1) / (e^λ - 1)`, `λ ≠ 0`.
    Exponential { rate: f64 },
    /// Smoothstep `3t² - 2t³`.
    Parabolic,
}

impl FunctionKind {
    /// Normalized profile on `t ∈ [0, 1]`.
    pub fn profile(&self, t: f64) -> f64 {
        let g = match *self {
            FunctionKind::Linear => t,
            FunctionKind::Power { exponent } => t.powf(exponent),
            FunctionKind::Logarithmic => ((std::f64::consts::E - 1.0) * t).ln_1p(),
            FunctionKind::Exponential { rate } => (rate * t).exp_m1() / rate.exp_m1(),
            FunctionKind::Parabolic => t * t * (3.0 - 2.0 * t),
        };
        g.clamp(0.0, 1.0)
    }

    pub fn name(&self) -> &'static str {
        match self {
            FunctionKind::Linear => "linear",
            FunctionKind::Power { .. } => "power",
            FunctionKind::Logarithmic => "logarithmic",
            FunctionKind::Exponential { .. } => "exponential",
            FunctionKind::Parabolic => "parabolic",
        }
    }
}

impl fmt::Display for FunctionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionKind::Power { exponent } => write!(f, "power(p={exponent})"),
            FunctionKind::Exponential { rate } => write!(f, "exponential(rate={rate})"),
            other => f.write_str(other.name()),
        }
    }
}

/// Composition function with homogeneous margins of width `margin` at both
/// ends of the gradient coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompositionFunction {
    kind: FunctionKind,
    margin: f64,
}

impl CompositionFunction {
    pub fn new(kind: FunctionKind, margin: f64) -> Result<Self> {
        if !(0.0..0.5).contains(&margin) {
            return Err(Error::InvalidFunction(format!("margin a = {margin} must lie in [0, 0.5)")));
        }
        match kind {
            FunctionKind::Power { exponent } if !(exponent > 0.0 && exponent.is_finite()) => {
                return Err(Error::InvalidFunction(format!("power exponent {exponent} must be positive and finite")));
            }
            FunctionKind::Exponential { rate } if !(rate != 0.0 && rate.is_finite()) => {
                return Err(Error::InvalidFunction(format!("exponential rate {rate} must be non-zero and finite")));
            }
            _ => {}
        }
        Ok(CompositionFunction { kind, margin })
    }

    pub fn linear() -> Self {
        CompositionFunction {
            kind: FunctionKind::Linear,
            margin: 0.0,
        }
    }

    pub fn kind(&self) -> FunctionKind {
        self.kind
    }

    pub fn margin(&self) -> f64 {
        self.margin
    }

    /// `0` for `s ≤ a`, `1` for `s ≥ 1 - a`, otherwise the profile at
    /// `t = (s - a) / (1 - 2a)`.
    pub fn eval(&self, s: f64) -> Result<f64> {
        eval_fraction(self, s)
    }
}

pub fn eval_fraction(function: &CompositionFunction, s: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::Domain {
            what: "gradient coordinate s",
            value: s,
            domain: "[0, 1]",
        });
    }
    let a = function.margin;
    if s <= a {
        return Ok(0.0);
    }
    if s >= 1.0 - a {
        return Ok(1.0);
    }
    let t = (s - a) / (1.0 - 2.0 * a);
    Ok(function.kind.profile(t))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_kinds() -> Vec<FunctionKind> {
        vec![
            FunctionKind::Linear,
            FunctionKind::Power { exponent: 2.0 },
            FunctionKind::Power { exponent: 0.3 },
            FunctionKind::Logarithmic,
            FunctionKind::Exponential { rate: 3.0 },
            FunctionKind::Exponential { rate: -2.0 },
            FunctionKind::Parabolic,
        ]
    }

    #[test]
    fn examples() {
        for kind in all_kinds() {
            let f = CompositionFunction::new(kind, 0.2).unwrap();
            assert_eq!(f.eval(0.1).unwrap(), 0.0);
        }
        let linear = CompositionFunction::new(FunctionKind::Linear, 0.0).unwrap();
        assert_eq!(linear.eval(0.5).unwrap(), 0.5);
        let square = CompositionFunction::new(FunctionKind::Power { exponent: 2.0 }, 0.0).unwrap();
        assert_eq!(square.eval(0.5).unwrap(), 0.25);
    }

    #[test]
    fn profiles_are_normalized() {
        for kind in all_kinds() {
            assert!(kind.profile(0.0).abs() < 1e-15, "{kind}");
            assert!((kind.profile(1.0) - 1.0).abs() < 1e-15, "{kind}");
        }
    }

    #[test]
    fn continuous_at_margins() {
        // The jump across each clamp shrinks with the step; sub-linear power
        // profiles converge slowest (eps^p).
        for kind in all_kinds() {
            for a in [0.0, 0.1, 0.25] {
                let f = CompositionFunction::new(kind, a).unwrap();
                let jumps = |eps: f64| {
                    let lo = (f.eval(a + eps).unwrap() - f.eval(a).unwrap()).abs();
                    let hi = (f.eval(1.0 - a - eps).unwrap() - f.eval(1.0 - a).unwrap()).abs();
                    lo.max(hi)
                };
                let (coarse, fine) = (jumps(1e-6), jumps(1e-9));
                assert!(fine < coarse || fine == 0.0, "{kind} a={a}");
                assert!(fine < 1e-2, "{kind} a={a}: {fine}");
                if !matches!(kind, FunctionKind::Power { exponent } if exponent < 1.0) {
                    assert!(fine < 1e-8, "{kind} a={a}: {fine}");
                }
            }
        }
    }

    #[test]
    fn monotone_on_grid() {
        for kind in all_kinds() {
            let f = CompositionFunction::new(kind, 0.1).unwrap();
            let mut prev = 0.0;
            for i in 0..=10_000 {
                let v = f.eval(i as f64 / 10_000.0).unwrap();
                assert!(v >= prev, "{kind} not monotone at {i}");
                prev = v;
            }
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(CompositionFunction::new(FunctionKind::Linear, 0.5).is_err());
        assert!(CompositionFunction::new(FunctionKind::Linear, -0.1).is_err());
        assert!(CompositionFunction::new(FunctionKind::Power { exponent: 0.0 }, 0.0).is_err());
        assert!(CompositionFunction::new(FunctionKind::Exponential { rate: 0.0 }, 0.0).is_err());
        assert!(CompositionFunction::new(FunctionKind::Exponential { rate: f64::NAN }, 0.0).is_err());
    }

    #[test]
    fn domain_error_outside_unit_interval() {
        let f = CompositionFunction::linear();
        assert!(matches!(f.eval(1.01), Err(Error::Domain { .. })));
        assert!(matches!(f.eval(-0.01), Err(Error::Domain { .. })));
        assert!(f.eval(f64::NAN).is_err());
    }
}
