//! Verifier for the CMS Main Identity and the generalised WDVV equations.
//!
//! A [`Configuration`] is a finite, centrally symmetric set of vectors with
//! multiplicities, stored as its positive half over `Q(sqrt d)`. The crate
//! certifies the Main Identity exactly, plane by plane, and cross-checks it
//! and the WDVV/flat-connection consequences by sampling.
//!
//! ```
//! use veeverify_core::families::{coxeter, Family};
//! use veeverify_core::identity::main_identity_exact;
//! use veeverify_core::field::rat;
//!
//! let mults = [("short".to_string(), rat(1, 1)), ("long".to_string(), rat(2, 1))].into();
//! let b2 = coxeter(Family::B, 2, &mults).unwrap();
//! assert!(main_identity_exact(&b2).verdict.is_pass());
//! ```

pub mod configuration;
pub mod error;
pub mod families;
pub mod field;
pub mod identity;
pub mod json;
pub mod numeric;
pub mod report;
pub mod wdvv;

pub use configuration::{build_config, Configuration};
pub use error::{Error, Result};
pub use field::{QElem, Rat};
pub use numeric::NumericOptions;
pub use report::{CheckReport, Verdict};
