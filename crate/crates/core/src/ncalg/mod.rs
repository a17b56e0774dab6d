//! Noncommutative polynomial arithmetic over truncated h-series: words,
//! presented algebras with oriented rewriting, tensor powers, letterwise
//! morphisms, and the critical-pair machinery that certifies confluence.

pub mod extract;
pub mod morphism;
pub mod overlap;
pub mod poly;
pub mod presentation;
pub mod tensor;
pub mod textfmt;
pub mod word;

pub use extract::{component_extract, span_coordinates, ExtractReport, SlotComponent};
pub use morphism::{apply_poly_morphism, apply_tensor_morphism};
pub use overlap::{complete, orient, overlap_check, CriticalPair};
pub use poly::NCPoly;
pub use presentation::{Presentation, PresentationBuilder, Rule, DEFAULT_BUDGET};
pub use tensor::TensorPoly;
pub use textfmt::{presentation_from_text, presentation_to_text};
pub use word::{GenId, GeneratorSymbol, Word};
