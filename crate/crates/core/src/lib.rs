//! Discrete spectrum of a one-dimensional lattice operator with a
//! short-range perturbation at the origin.
//!
//! The operator acts on sequences `f: ℤ → ℝ` as `H = H₀ + H₁`, where `H₀` is
//! the discrete Laplacian with hopping `λ > 0` (spectrum `[0, 4λ]`) and `H₁`
//! modifies the bonds and on-site energies of sites `−1, 0, 1` through
//! `λ₁, μ, μ₁`. The crate
//!
//! * classifies a parameter set into the region that fixes how many
//!   eigenvalues lie outside the band ([`classify`]),
//! * computes those eigenvalues ([`spectrum`]) and their eigenvectors
//!   ([`eigvec`]) from closed forms,
//! * cross-checks everything against an independent truncated-matrix
//!   computation ([`oracle`]), and
//! * rasterises the classification over parameter planes ([`sweep`]).
//!
//! ```
//! use latspec::{discrete_spectrum, PhysicalParams};
//!
//! let p = PhysicalParams::new(1.0, 0.0, 4.0, 3.0)?;
//! let nus: Vec<f64> = discrete_spectrum(&p)?.iter().map(|r| r.nu).collect();
//! assert_eq!(nus.len(), 3);
//! assert!((nus[1] - 16.0 / 3.0).abs() < 1e-15);
//! # Ok::<(), latspec::Error>(())
//! ```

pub mod classify;
pub mod eigvec;
pub mod error;
pub mod model;
pub mod oracle;
pub mod specfun;
pub mod spectrum;
pub mod sweep;

pub use classify::{classify, classify_with_tolerance, CaseLabel, Region, RegionTag};
pub use eigvec::{EigenvectorTable, VectorParity};
pub use error::{Error, Result};
pub use model::{apply_hamiltonian, normalize, NormalizedParams, PhysicalParams};
pub use oracle::{build_truncated, eigenvalues_outside_band, OracleReport, TridiagonalH};
pub use spectrum::{discrete_spectrum, EigenvalueRecord, Origin, Parity};
pub use sweep::{sweep, Grid, SweepCell};

/// The mdbook guide in `book/`, compiled so its snippets stay in sync.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/model.md")]
    mod model {}
    #[doc = include_str!("../../../book/src/specfun.md")]
    mod specfun {}
    #[doc = include_str!("../../../book/src/classify.md")]
    mod classify {}
    #[doc = include_str!("../../../book/src/spectrum.md")]
    mod spectrum {}
    #[doc = include_str!("../../../book/src/eigvec.md")]
    mod eigvec {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
