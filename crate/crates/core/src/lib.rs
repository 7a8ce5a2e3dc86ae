//! # mpm-core
//!
//! Exact and certified ℓp-distances on finitely presented 1- and 2-parameter
//! persistence modules.
//!
//! Modules are given by *presentations*: a matrix over a prime field with a
//! grade (a point of Q or Q²) attached to each row (generator) and each
//! column (relation). From there the crate provides
//!
//! * [`wasserstein`]: exact p-Wasserstein and bottleneck distances on barcodes,
//! * [`onepar`]: graded Smith normal form and barcodes of 1-parameter presentations,
//! * [`lines`]: admissible lines, push maps and restriction of 2-parameter presentations,
//! * [`matchdist`]: certified quad-tree approximation of the p-matching distance,
//! * [`presdist`]: label distances between paired presentations and upper bounds,
//! * [`cellular`]: homology presentations of bifiltered cell complexes.
//!
//! ```
//! use mpm_core::{io, lines, wasserstein, PExponent};
//!
//! let pf = io::parse_presentation(
//!     "fpm 1\nfield 2\nparams 2\nrows 2\n0 0\n0 0\ncols 3\n1 4 : 1 1\n3 3 : 1 1\n4 1 : 1 1\n",
//! )
//! .unwrap();
//! let diag = lines::AdmissibleLine::diagonal();
//! let bc = lines::barcode_along_line(&pf, &diag).unwrap();
//! assert_eq!(bc.len(), 2);
//! let d = wasserstein::wasserstein(&bc, &bc, &PExponent::Infinity);
//! assert_eq!(d.value.to_f64(), 0.0);
//! ```

pub mod barcode;
pub mod cellular;
mod error;
pub mod field;
pub mod gen;
pub mod grade;
pub mod invariants;
pub mod io;
pub mod lines;
pub mod linalg;
pub mod matchdist;
pub mod norm;
pub mod onepar;
pub mod presdist;
pub mod presentation;
pub mod wasserstein;

mod assignment;
mod fastline;

pub use barcode::{Bar, Barcode, Death};
pub use error::{Error, Result};
pub use field::PrimeField;
pub use grade::{Grade, Rational};
pub use norm::{NormValue, PExponent};
pub use presentation::{LabelVector, Presentation};
