//! Outcomes of sampled axiom checks.
//!
//! The axioms quantify over infinitely many option sets, so every check in
//! this crate runs on a finite sample and a report says so.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomTally {
    pub axiom: &'static str,
    pub checked: usize,
    pub violations: usize,
    pub first_violation: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AxiomReport {
    tallies: Vec<AxiomTally>,
}

impl AxiomReport {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers an axiom with zero checks so that vacuous passes still show up.
    pub fn declare(&mut self, axiom: &'static str) {
        self.tally(axiom);
    }

    fn tally(&mut self, axiom: &'static str) -> &mut AxiomTally {
        let pos = match self.tallies.iter().position(|t| t.axiom == axiom) {
            Some(pos) => pos,
            None => {
                self.tallies.push(AxiomTally {
                    axiom,
                    checked: 0,
                    violations: 0,
                    first_violation: None,
                });
                self.tallies.len() - 1
            }
        };
        &mut self.tallies[pos]
    }

    pub fn record(&mut self, axiom: &'static str, holds: bool, describe: impl FnOnce() -> String) {
        let tally = self.tally(axiom);
        tally.checked += 1;
        if !holds {
            tally.violations += 1;
            if tally.first_violation.is_none() {
                tally.first_violation = Some(describe());
            }
        }
    }

    pub fn merge(&mut self, other: AxiomReport) {
        for t in other.tallies {
            let mine = self.tally(t.axiom);
            mine.checked += t.checked;
            mine.violations += t.violations;
            if mine.first_violation.is_none() {
                mine.first_violation = t.first_violation;
            }
        }
    }

    pub fn tallies(&self) -> &[AxiomTally] {
        &self.tallies
    }

    pub fn passed(&self) -> bool {
        self.tallies.iter().all(|t| t.violations == 0)
    }

    pub fn checked(&self) -> usize {
        self.tallies.iter().map(|t| t.checked).sum()
    }

    pub fn violations(&self) -> usize {
        self.tallies.iter().map(|t| t.violations).sum()
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "sampled axiom check")?;
        for t in &self.tallies {
            write!(f, "  {}: {} checked, {} violated", t.axiom, t.checked, t.violations)?;
            if let Some(v) = &t.first_violation {
                write!(f, " (first: {v})")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
