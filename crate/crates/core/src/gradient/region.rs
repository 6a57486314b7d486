use nalgebra::Point3;

use super::reference::GradientReference;
use crate::error::{Error, Result};
use crate::geometry::normalized_gradient_coordinate;
use crate::material::{eval_composition, eval_fraction, CompositionFunction, CompositionVector};

/// One cell graded between a start and an end reference.
///
/// At `s ≤ a` (near the start reference) the composition is `mcf`, and at
/// `s ≥ 1 - a` it is `mcs`; see [`eval_composition`]. Swap the two arrays in
/// the model to flip the orientation.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientRegion {
    start: GradientReference,
    end: GradientReference,
    mcs: CompositionVector,
    mcf: CompositionVector,
    function: CompositionFunction,
}

impl GradientRegion {
    pub fn new(
        start: GradientReference,
        end: GradientReference,
        mcs: CompositionVector,
        mcf: CompositionVector,
        function: CompositionFunction,
    ) -> Result<Self> {
        check_references(&start, &end)?;
        mcf.expect_len(mcs.len())?;
        Ok(GradientRegion {
            start,
            end,
            mcs,
            mcf,
            function,
        })
    }

    pub fn start(&self) -> &GradientReference {
        &self.start
    }

    pub fn end(&self) -> &GradientReference {
        &self.end
    }

    pub fn mcs(&self) -> &CompositionVector {
        &self.mcs
    }

    pub fn mcf(&self) -> &CompositionVector {
        &self.mcf
    }

    pub fn function(&self) -> &CompositionFunction {
        &self.function
    }

    pub fn coordinate(&self, p: &Point3<f64>) -> Result<f64> {
        normalized_gradient_coordinate(p, &self.start, &self.end)
    }

    pub fn evaluate(&self, p: &Point3<f64>) -> Result<CompositionVector> {
        let s = self.coordinate(p)?;
        let f = eval_fraction(&self.function, s)?;
        eval_composition(f, &self.mcs, &self.mcf)
    }

    /// Same region with new references; compositions and function unchanged.
    pub fn retarget_references(&self, new_start: GradientReference, new_end: GradientReference) -> Result<Self> {
        check_references(&new_start, &new_end)?;
        Ok(GradientRegion {
            start: new_start,
            end: new_end,
            ..self.clone()
        })
    }
}

fn check_references(start: &GradientReference, end: &GradientReference) -> Result<()> {
    start.validate()?;
    end.validate()?;
    if start == end {
        return Err(Error::DegenerateRegion("start and end references are identical".into()));
    }
    Ok(())
}

pub fn retarget_references(
    region: &GradientRegion,
    new_start: GradientReference,
    new_end: GradientReference,
) -> Result<GradientRegion> {
    region.retarget_references(new_start, new_end)
}
