//! Exact engine for formal-series deformation quantization on flat phase space.

pub mod closed_form;
pub mod complex;
pub mod error;
pub mod functional;
pub mod json;
pub mod laurent;
pub mod phase;
pub mod poly;
pub mod scalar;
pub mod series;
pub mod star;
