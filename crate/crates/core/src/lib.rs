mod error;
pub mod field;
pub mod sparse;
pub mod matrix;
pub mod air;
pub mod distances;
pub mod rates;
pub mod codec;
pub mod sim;
pub mod formats;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/rates.md")]
    mod rates {}
    #[doc = include_str!("../../../book/src/air.md")]
    mod air {}
    #[doc = include_str!("../../../book/src/distances.md")]
    mod distances {}
    #[doc = include_str!("../../../book/src/decoding.md")]
    mod decoding {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    mod simulation {}
}
