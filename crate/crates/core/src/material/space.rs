use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};

/// Scalar material property with a unit tag (e.g. `"Pa"`).
#[derive(Debug, Clone, PartialEq)]
pub struct PropertyValue {
    pub value: f64,
    pub unit: String,
}

impl PropertyValue {
    pub fn new(value: f64, unit: impl Into<String>) -> Self {
        PropertyValue {
            value,
            unit: unit.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Material {
    pub name: String,
    pub properties: BTreeMap<String, PropertyValue>,
    /// Display color used as the color-map anchor for this material.
    pub color: Option<[u8; 3]>,
}

impl Material {
    pub fn new(name: impl Into<String>) -> Self {
        Material {
            name: name.into(),
            properties: BTreeMap::new(),
            color: None,
        }
    }

    pub fn with_property(mut self, name: impl Into<String>, value: f64, unit: impl Into<String>) -> Self {
        self.properties.insert(name.into(), PropertyValue::new(value, unit));
        self
    }

    pub fn with_color(mut self, color: [u8; 3]) -> Self {
        self.color = Some(color);
        self
    }
}

/// Ordered list of primary materials; `k` is its length.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialSpace {
    materials: Vec<Material>,
    property_names: Vec<String>,
}

impl MaterialSpace {
    pub fn new(materials: Vec<Material>) -> Result<Self> {
        if materials.is_empty() {
            return Err(Error::InvalidMaterialSpace("at least one material is required".into()));
        }
        let mut seen = BTreeSet::new();
        for m in &materials {
            if m.name.trim().is_empty() {
                return Err(Error::InvalidMaterialSpace("material name is empty".into()));
            }
            if !seen.insert(m.name.as_str()) {
                return Err(Error::InvalidMaterialSpace(format!("duplicate material `{}`", m.name)));
            }
        }
        let names: BTreeSet<&String> = materials.iter().flat_map(|m| m.properties.keys()).collect();
        for name in &names {
            let mut unit: Option<&str> = None;
            for m in &materials {
                let prop = m.properties.get(*name).ok_or_else(|| {
                    Error::InvalidMaterialSpace(format!("material `{}` does not define property `{name}`", m.name))
                })?;
                if !prop.value.is_finite() {
                    return Err(Error::InvalidMaterialSpace(format!(
                        "property `{name}` of `{}` is not finite",
                        m.name
                    )));
                }
                match unit {
                    None => unit = Some(&prop.unit),
                    Some(u) if u != prop.unit => {
                        return Err(Error::InvalidMaterialSpace(format!(
                            "property `{name}` has unit `{u}` and `{}`",
                            prop.unit
                        )))
                    }
                    Some(_) => {}
                }
            }
        }
        let property_names = names.into_iter().cloned().collect();
        Ok(MaterialSpace {
            materials,
            property_names,
        })
    }

    pub fn k(&self) -> usize {
        self.materials.len()
    }

    pub fn materials(&self) -> &[Material] {
        &self.materials
    }

    pub fn names(&self) -> Vec<String> {
        self.materials.iter().map(|m| m.name.clone()).collect()
    }

    /// Declared property names in sorted order.
    pub fn property_names(&self) -> &[String] {
        &self.property_names
    }

    /// `S_r` for every material, in material order.
    pub fn property_column(&self, property: &str) -> Result<Vec<f64>> {
        self.materials
            .iter()
            .map(|m| {
                m.properties
                    .get(property)
                    .map(|p| p.value)
                    .ok_or_else(|| Error::UnknownProperty(property.to_string()))
            })
            .collect()
    }

    pub fn property_unit(&self, property: &str) -> Result<&str> {
        self.materials[0]
            .properties
            .get(property)
            .map(|p| p.unit.as_str())
            .ok_or_else(|| Error::UnknownProperty(property.to_string()))
    }
}
