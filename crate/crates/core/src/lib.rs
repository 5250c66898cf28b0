//! Choice functions derived from sets of strict partial vector orders.
//!
//! Every object here is finitely presented over the rationals and every
//! membership question is decided exactly:
//!
//! * [`geometry`] answers conic feasibility questions with an exact simplex.
//! * [`cone`] holds blunt convex cones, the orders they induce and maximality
//!   based choice.
//! * [`rules`] covers option sets, rules and rule compatibility of cones.
//! * [`assessment`] builds the natural extension of a finite assessment via
//!   selection cones.
//! * [`choice`] turns cones or assessments into choice functions and checks
//!   their axioms.
//! * [`oracle`] is an independent Fourier-Motzkin decision procedure and a
//!   forward closure generator used to certify the rest.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;

pub mod assessment;
pub mod choice;
pub mod cone;
mod error;
pub mod geometry;
mod lp;
pub mod oracle;
pub mod report;
pub mod rules;
mod vector;

pub use error::{Error, Result};
pub use num_bigint::BigInt;
pub use vector::{Rational, Vector};

pub mod prelude {
    pub use crate::assessment::{AssessmentFamily, Membership, NaturalExtension};
    pub use crate::choice::ChoiceModel;
    pub use crate::cone::ProperCone;
    pub use crate::report::AxiomReport;
    pub use crate::rules::{Compatibility, OptionSet, Rule, RuleSet};
    pub use crate::{Error, Rational, Result, Vector};
}
