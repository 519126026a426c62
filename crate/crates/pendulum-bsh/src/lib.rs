//! Bohr-Sommerfeld quantization of the mathematical pendulum.

pub mod classical;
pub mod elliptic;
pub mod error;
pub mod holonomy;
pub mod ode;
pub mod operators;
pub mod minus_one;
pub mod reduction;
pub mod spectrum;
pub mod verify;

pub use error::{Error, HbarRejection, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/classical.md")]
    struct Classical;
    #[doc = include_str!("../../../book/src/spectrum.md")]
    struct Spectrum;
    #[doc = include_str!("../../../book/src/operators.md")]
    struct Operators;
    #[doc = include_str!("../../../book/src/reduction.md")]
    struct Reduction;
    #[doc = include_str!("../../../book/src/minus_one.md")]
    struct MinusOne;
    #[doc = include_str!("../../../book/src/verify.md")]
    struct Verify;
}
