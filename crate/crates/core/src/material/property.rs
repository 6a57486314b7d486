use super::composition::CompositionVector;
use super::space::MaterialSpace;
use crate::error::{Error, Result};

/// Voigt rule of mixtures: `S = Σ_r V_r S_r`.
pub fn voigt_property(v: &CompositionVector, property: &str, space: &MaterialSpace) -> Result<f64> {
    let column = space.property_column(property)?;
    v.expect_len(column.len())?;
    Ok(v.fractions().iter().zip(&column).map(|(fr, s)| fr * s).sum())
}

/// Two-material rule `S = V1 S1 + (1 - V1) S2`.
pub fn voigt_two(v1: f64, s1: f64, s2: f64) -> f64 {
    v1 * s1 + (1.0 - v1) * s2
}

/// Blended property `S = f V1 S1 + (1 - V1)(1 - f) fb S2`.
pub fn blended_property(f: f64, fb: f64, v1: f64, s1: f64, s2: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&f) {
        return Err(Error::Domain {
            what: "blend parameter f",
            value: f,
            domain: "[0, 1]",
        });
    }
    if !(fb > 0.0 && fb <= 1.0) {
        return Err(Error::Domain {
            what: "blending constant fb",
            value: fb,
            domain: "(0, 1]",
        });
    }
    if !(0.0..=1.0).contains(&v1) {
        return Err(Error::Domain {
            what: "volume fraction V1",
            value: v1,
            domain: "[0, 1]",
        });
    }
    Ok(f * v1 * s1 + (1.0 - v1) * (1.0 - f) * fb * s2)
}

/// Every declared property evaluated at `v`, as `(name, value, unit)`.
pub fn property_report(v: &CompositionVector, space: &MaterialSpace) -> Result<Vec<(String, f64, String)>> {
    space
        .property_names()
        .iter()
        .map(|name| {
            Ok((
                name.clone(),
                voigt_property(v, name, space)?,
                space.property_unit(name)?.to_string(),
            ))
        })
        .collect()
}
