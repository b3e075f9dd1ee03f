//! PSL(2, R) elements, free groups of hyperbolic isometries and their
//! primitive length spectra.

mod enumerate;
mod mobius;
mod spectrum;

pub use enumerate::{
    enumerate_classes, enumerate_primitive_classes, enumerate_primitive_classes_with_budget, exponent_estimate,
    exponent_from_spectrum, word_string, DisplacementBound, ExponentEstimate, GroupPresentation, DEFAULT_WORD_BUDGET,
};
pub use mobius::{translation_length, MobiusTransform, MOBIUS_TOLERANCE};
pub use spectrum::{LengthSpectrum, SpectrumEntry};
