//! Unrestricted Hartree–Fock over contracted Cartesian Gaussians, Mulliken
//! spin and bond-order analysis, and a structural/electronic screener for
//! radical molecules intended as spin qubits.

pub mod analysis;
pub mod basis;
pub mod error;
pub mod geomopt;
pub mod integrals;
pub mod molsys;
pub mod report;
pub mod scf;
pub mod screener;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/molecules.md")]
    mod molecules {}
    #[doc = include_str!("../../../book/src/integrals.md")]
    mod integrals {}
    #[doc = include_str!("../../../book/src/scf.md")]
    mod scf {}
    #[doc = include_str!("../../../book/src/analysis.md")]
    mod analysis {}
    #[doc = include_str!("../../../book/src/screening.md")]
    mod screening {}
    #[doc = include_str!("../../../book/src/geometry.md")]
    mod geometry {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
