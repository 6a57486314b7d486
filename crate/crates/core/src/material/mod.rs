//! Material space, composition vectors, composition functions and
//! effective-property rules.

pub mod composition;
pub mod function;
pub mod property;
pub mod space;

pub use composition::{eval_composition, CompositionVector};
pub use function::{eval_fraction, CompositionFunction, FunctionKind};
pub use property::{blended_property, property_report, voigt_property, voigt_two};
pub use space::{Material, MaterialSpace, PropertyValue};
