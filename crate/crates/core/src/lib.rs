//! Exact-arithmetic toolkit for plumbed 3-manifolds and torus bundles over the circle.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`]: arbitrary-precision integer matrices, determinants, Smith normal
//!   form, cokernels and Sylvester signatures.
//! * [`sl2`]: SL(2,Z) elements and monodromy words `±T^{-a₁}S···T^{-aₙ}S`.
//! * [`strings`]: Riemenschneider dual strings and the hyperbolic family of
//!   monodromy strings that bound rational homology circles.
//! * [`plumbing`]: plumbing graphs with at most one cycle, their intersection
//!   forms and boundary homology, join / self-join, and the certification ledger.
//! * [`kirby`]: blow-up / blow-down rewriting of cyclic framed chains with an
//!   exact SL(2,Z) conjugacy certificate.
//! * [`obstruct`]: linking-matrix level two-handle attachment, the square-order
//!   obstruction and the Rohlin invariant of even unimodular forms.
//! * [`sweep`]: exhaustive and randomized batch evaluation, data-parallel when the
//!   `parallel` feature is enabled.
//!
//! ```
//! use qcircle_core::{MonodromyWord, IntString};
//! use qcircle_core::sl2::torsion_order;
//! use qcircle_core::strings::{dual_string, recognize_family};
//!
//! let m = MonodromyWord::positive(&[3, 3, 3]).matrix();
//! assert_eq!(torsion_order(&m).unwrap(), 16u32.into());
//!
//! let d = dual_string(&"2,2,2".parse::<IntString>().unwrap()).unwrap();
//! assert_eq!(d.to_string(), "4");
//!
//! let p = recognize_family(&"2,4".parse().unwrap()).unwrap();
//! assert_eq!(p.to_string(), "k=0;x=1");
//! ```

pub mod error;
pub mod kirby;
pub mod linalg;
pub mod obstruct;
pub mod plumbing;
pub mod sl2;
pub mod strings;
pub mod sweep;

pub use error::{Error, Result};
pub use kirby::{ChainState, Move};
pub use linalg::{AbelianGroup, IntMatrix, SnfResult};
pub use plumbing::{Construction, Descriptor, Ledger, LedgerEntry, PlumbingGraph, Sign, Status};
pub use sl2::{Classification, MonodromyWord, Sl2, TraceKind, TraceSign};
pub use strings::{FamilyParams, IntString};
