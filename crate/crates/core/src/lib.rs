//! Finite-field toolkit for gap instances of the Minimum Distance and Nearest
//! Codeword problems.
//!
//! The pipeline compiles a Boolean circuit into homogeneous quadratic
//! equations ([`frontend`]), maps the symmetric solution space through
//! `X -> C X C^T` for a balanced code `C` ([`codes`], [`reduction`]),
//! optionally tensors the result, slices it to an affine NCP instance, and
//! certifies the completeness/soundness gap by exhaustive enumeration
//! ([`oracle`]).

pub mod codes;
pub mod enumerate;
pub mod error;
pub mod field;
pub mod format;
pub mod frontend;
pub mod linalg;
pub mod oracle;
pub mod pipeline;
pub mod reduction;

pub use codes::{LinearCode, Rational};
pub use enumerate::Limits;
pub use error::{Error, Result};
pub use field::{make_field, FieldElem, FieldSpec};
pub use frontend::{Circuit, QuadraticSystem};
pub use linalg::{MatrixFq, VectorFq};
pub use oracle::{Verdict, VerifyReport};
pub use reduction::{GapMeta, MdpInstance, NcpInstance};
