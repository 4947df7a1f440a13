//! Codes of points and k-spaces of the classical polar spaces over small
//! finite fields, with the geometric machinery needed to build and check
//! their dual codewords.

pub mod error;
pub mod constructions;
pub mod exact_cover;
pub mod gf;
pub mod gfcode;
pub mod kleinmap;
pub mod polarspace;
pub mod projspace;
pub mod verify;

pub use error::{Error, Result};
