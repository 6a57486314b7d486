//! Hybrid gradient references: dissimilar boundary patches blended by
//! inverse-distance weighting.

use nalgebra::Point3;

use super::reference::GradientReference;
use crate::error::{Error, Result};
use crate::geometry::distance_to_reference;
use crate::material::CompositionVector;

/// Distance below which a point counts as lying on a patch, mm.
pub const PATCH_EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct HybridPatch {
    pub reference: GradientReference,
    pub composition: CompositionVector,
    /// Linear-interpolation weight of this patch (1 for plain inverse-distance).
    pub weight: f64,
}

impl HybridPatch {
    pub fn new(reference: GradientReference, composition: CompositionVector) -> Self {
        HybridPatch {
            reference,
            composition,
            weight: 1.0,
        }
    }

    pub fn with_weight(mut self, weight: f64) -> Self {
        self.weight = weight;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HybridRegion {
    patches: Vec<HybridPatch>,
}

impl HybridRegion {
    pub fn new(patches: Vec<HybridPatch>) -> Result<Self> {
        let invalid = |reason: String| Error::InvalidRegion {
            cell: String::new(),
            reason,
        };
        if patches.len() < 2 {
            return Err(invalid(format!("hybrid region needs at least 2 patches, got {}", patches.len())));
        }
        let k = patches[0].composition.len();
        for (j, patch) in patches.iter().enumerate() {
            patch.reference.validate()?;
            patch.composition.expect_len(k)?;
            if !(patch.weight > 0.0 && patch.weight.is_finite()) {
                return Err(invalid(format!("patch {j} weight {} must be positive", patch.weight)));
            }
        }
        Ok(HybridRegion { patches })
    }

    pub fn patches(&self) -> &[HybridPatch] {
        &self.patches
    }

    fn blend(&self, p: &Point3<f64>) -> Blend {
        let dist: Vec<f64> = self
            .patches
            .iter()
            .map(|patch| distance_to_reference(p, &patch.reference))
            .collect();
        let nearest = (0..dist.len())
            .min_by(|&a, &b| dist[a].total_cmp(&dist[b]))
            .expect("at least two patches");
        if dist[nearest] < PATCH_EPSILON {
            return Blend::OnPatch(nearest);
        }
        let raw: Vec<f64> = self
            .patches
            .iter()
            .zip(&dist)
            .map(|(patch, d)| patch.weight / d.max(PATCH_EPSILON))
            .collect();
        let total: f64 = raw.iter().sum();
        Blend::Weights(raw.into_iter().map(|u| u / total).collect())
    }

    /// Normalized blending weights at `p`; on a patch the weights select
    /// that patch alone.
    pub fn weights(&self, p: &Point3<f64>) -> Vec<f64> {
        match self.blend(p) {
            Blend::OnPatch(j) => {
                let mut w = vec![0.0; self.patches.len()];
                w[j] = 1.0;
                w
            }
            Blend::Weights(w) => w,
        }
    }

    pub fn evaluate(&self, p: &Point3<f64>) -> Result<CompositionVector> {
        let weights = match self.blend(p) {
            Blend::OnPatch(j) => return Ok(self.patches[j].composition.clone()),
            Blend::Weights(w) => w,
        };
        let k = self.patches[0].composition.len();
        let mut v = vec![0.0; k];
        for (patch, u) in self.patches.iter().zip(&weights) {
            for (acc, m) in v.iter_mut().zip(patch.composition.fractions()) {
                *acc += u * m;
            }
        }
        let sum: f64 = v.iter().sum();
        if (sum - 1.0).abs() > crate::material::composition::SUM_TOLERANCE {
            v.iter_mut().for_each(|c| *c /= sum);
        }
        Ok(CompositionVector::from_raw(v))
    }
}

enum Blend {
    OnPatch(usize),
    Weights(Vec<f64>),
}

pub fn hybrid_evaluate(region: &HybridRegion, p: &Point3<f64>) -> Result<CompositionVector> {
    region.evaluate(p)
}
