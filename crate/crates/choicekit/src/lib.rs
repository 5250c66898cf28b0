//! JSON file formats and the `choicekit` command line on top of
//! [`choicekit_core`].

pub mod cli;
pub mod format;
pub mod parallel;
