//! Choice functions from cones or from assessments.
//!
//! A [`ChoiceModel`] is an evaluator, never an extensional table: `choose`
//! answers one finite query at a time. Axiom checks are therefore sampled.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_traits::Signed;

use crate::assessment::{combinations, combine_selections, grid_assignments, AssessmentFamily, CoefficientMap, NaturalExtension};
use crate::cone::{choose_from_cones, option_set, ProperCone};
use crate::report::AxiomReport;
use crate::rules::{compatible_with, Compatibility, OptionSet, RuleSet, SetFamily};
use crate::vector::{canonical_set, check_all};
use crate::{Error, Rational, Result, Vector};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChoiceModel {
    /// Choose what is maximal for at least one of the cones' orders.
    Cones(Vec<ProperCone>),
    /// Reject `u` from `A` when `A - u` is in the natural extension.
    Assessment(NaturalExtension),
}

/// Outcome of a binarity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Binarity {
    Binary,
    /// `option` is chosen from `set` but not from some pair, or the reverse.
    Counterexample { set: Vec<Vector>, option: Vector },
}

impl ChoiceModel {
    pub fn from_cones(cones: Vec<ProperCone>) -> Result<Self> {
        let dim = cones.first().ok_or(Error::EmptyOrderSet)?.dim();
        if let Some(bad) = cones.iter().find(|c| c.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        Ok(Self::Cones(cones))
    }

    pub fn from_assessment(family: &AssessmentFamily, limit: u128) -> Result<Self> {
        Ok(Self::Assessment(family.natural_extension(limit)?))
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Cones(cones) => cones[0].dim(),
            Self::Assessment(ext) => ext.family().dim(),
        }
    }

    /// Is the option `u` of `options` rejected from it?
    pub fn is_rejected(&self, options: &[Vector], u: &Vector) -> Result<bool> {
        let options = option_set(self.dim(), options)?;
        u.check_dim(self.dim())?;
        self.rejects(&options, u)
    }

    /// `is_rejected` on an already canonical option set.
    fn rejects(&self, options: &[Vector], u: &Vector) -> Result<bool> {
        match self {
            Self::Cones(cones) => {
                for cone in cones {
                    let mut dominated = false;
                    for v in options {
                        if cone.dominates(v, u)? {
                            dominated = true;
                            break;
                        }
                    }
                    if !dominated {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Self::Assessment(ext) => {
                let shifted = OptionSet::Finite(canonical_set(options.iter().map(|v| v - u).collect()));
                ext.contains_set(&shifted)
            }
        }
    }

    /// The chosen options of a finite set, in canonical order.
    pub fn choose(&self, options: &[Vector]) -> Result<Vec<Vector>> {
        let options = option_set(self.dim(), options)?;
        if let Self::Cones(cones) = self {
            return choose_from_cones(cones, &options);
        }
        let mut chosen = Vec::new();
        for u in &options {
            if !self.rejects(&options, u)? {
                chosen.push(u.clone());
            }
        }
        Ok(chosen)
    }

    /// Is `options` a rejection set, i.e. is zero rejected from `options ∪ {0}`?
    pub fn rejects_zero(&self, options: &[Vector]) -> Result<bool> {
        if options.is_empty() {
            return Err(Error::EmptyOptionSet);
        }
        let zero = Vector::zero(self.dim());
        let mut with_zero = options.to_vec();
        with_zero.push(zero.clone());
        let with_zero = option_set(self.dim(), &with_zero)?;
        self.rejects(&with_zero, &zero)
    }

    /// Checks that choice from every subset of `universe` with at most
    /// `max_subset_size` elements is determined by pairwise choice.
    pub fn is_binary_on(&self, universe: &[Vector], max_subset_size: usize) -> Result<Binarity> {
        check_all(self.dim(), universe)?;
        let universe = canonical_set(universe.to_vec());
        let mut pairwise: BTreeMap<(usize, usize), Vec<Vector>> = BTreeMap::new();
        let mut chosen_from_pair = |i: usize, j: usize| -> Result<bool> {
            let key = (i.min(j), i.max(j));
            if let alloc::collections::btree_map::Entry::Vacant(slot) = pairwise.entry(key) {
                slot.insert(self.choose(&[universe[i].clone(), universe[j].clone()])?);
            }
            Ok(pairwise[&key].contains(&universe[i]))
        };
        for size in 2..=max_subset_size.min(universe.len()) {
            for subset in combinations(universe.len(), size) {
                let set: Vec<Vector> = subset.iter().map(|&i| universe[i].clone()).collect();
                let chosen = self.choose(&set)?;
                for &i in &subset {
                    let mut pairwise_ok = true;
                    for &j in &subset {
                        if j != i && !chosen_from_pair(i, j)? {
                            pairwise_ok = false;
                            break;
                        }
                    }
                    if chosen.contains(&universe[i]) != pairwise_ok {
                        return Ok(Binarity::Counterexample {
                            set,
                            option: universe[i].clone(),
                        });
                    }
                }
            }
        }
        Ok(Binarity::Binary)
    }

    /// Reads off the order `v > u  <=>  u not chosen from {u, v}` as the cone
    /// spanned by the probes preferred to zero.
    ///
    /// The result is only as complete as the probe set. Fails with
    /// [`Error::NotBinary`] unless the model is binary on the probes.
    pub fn extract_order(&self, probes: &[Vector]) -> Result<ProperCone> {
        check_all(self.dim(), probes)?;
        if let Some(index) = probes.iter().position(Vector::is_zero) {
            return Err(Error::InvalidProbe { index });
        }
        if let Binarity::Counterexample { .. } = self.is_binary_on(probes, probes.len())? {
            return Err(Error::NotBinary);
        }
        let mut generators = Vec::new();
        for u in probes {
            if self.rejects_zero(core::slice::from_ref(u))? {
                generators.push(u.clone());
            }
        }
        ProperCone::new(self.dim(), generators)
    }

    /// Samples the axioms of a proper choice function.
    ///
    /// * PC0: singletons are chosen.
    /// * PC1: choice commutes with translation by each of `translations`.
    /// * PC2: combining selections of up to three rejection sets among
    ///   `probe_sets` with weights from `grid` gives a rejection set.
    /// * PC3: an option chosen from a set is chosen from every subset
    ///   containing it.
    pub fn check_pc_axioms(
        &self,
        probe_sets: &[Vec<Vector>],
        translations: &[Vector],
        grid: &[Rational],
    ) -> Result<AxiomReport> {
        let dim = self.dim();
        let probe_sets: Vec<Vec<Vector>> = probe_sets
            .iter()
            .map(|s| option_set(dim, s))
            .collect::<Result<_>>()?;
        check_all(dim, translations)?;
        if let Some(index) = grid.iter().position(|g| !g.is_positive()) {
            return Err(Error::InvalidProbe { index });
        }

        let mut report = AxiomReport::new();
        for axiom in ["PC0 singletons", "PC1 translation", "PC2 positive combination", "PC3 subsets"] {
            report.declare(axiom);
        }

        let points = canonical_set(probe_sets.iter().flatten().cloned().collect());
        for u in &points {
            let chosen = self.choose(core::slice::from_ref(u))?;
            report.record("PC0 singletons", chosen == [u.clone()], || format!("C({{{u}}}) is empty"));
        }

        for set in &probe_sets {
            let chosen = self.choose(set)?;
            for w in translations {
                let moved: Vec<Vector> = set.iter().map(|v| v + w).collect();
                let expected = canonical_set(chosen.iter().map(|v| v + w).collect());
                let holds = self.choose(&moved)? == expected;
                report.record("PC1 translation", holds, || {
                    format!("{} translated by {w}", OptionSet::Finite(set.clone()))
                });
            }
        }

        let mut rejecting = Vec::new();
        for set in &probe_sets {
            if self.rejects_zero(set)? {
                rejecting.push(set.clone());
            }
        }
        for size in 1..=rejecting.len().min(3) {
            for subset in combinations(rejecting.len(), size) {
                let sets: Vec<Vec<Vector>> = subset.iter().map(|&i| rejecting[i].clone()).collect();
                for assignment in grid_assignments(grid.len(), size) {
                    for shifted in [false, true] {
                        if shifted && grid.len() == 1 {
                            continue;
                        }
                        let combined = combine_selections(&sets, |index, _| {
                            let shift = if shifted { index } else { 0 };
                            CoefficientMap::new(
                                assignment.iter().map(|&g| grid[(g + shift) % grid.len()].clone()).collect(),
                            )
                            .expect("grid weights are positive")
                        });
                        let holds = self.rejects_zero(&combined)?;
                        report.record("PC2 positive combination", holds, || {
                            format!("{} does not reject zero", OptionSet::Finite(combined.clone()))
                        });
                    }
                }
            }
        }

        for set in &probe_sets {
            let chosen = self.choose(set)?;
            for u in &chosen {
                let others: Vec<&Vector> = set.iter().filter(|v| *v != u).collect();
                for mask in 0u64..(1u64 << others.len()) {
                    let mut subset = alloc::vec![u.clone()];
                    subset.extend(
                        others
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| mask & (1 << i) != 0)
                            .map(|(_, v)| (*v).clone()),
                    );
                    let holds = self.choose(&subset)?.contains(u);
                    report.record("PC3 subsets", holds, || {
                        format!("{u} chosen from {} but not from a subset", OptionSet::Finite(set.clone()))
                    });
                }
            }
        }
        Ok(report)
    }

    /// Cones whose maximality union reproduces this model.
    ///
    /// For an assessment these are its selection cones; an empty basis is
    /// represented by the single vacuous order.
    pub fn represent(&self) -> Vec<ProperCone> {
        match self {
            Self::Cones(cones) => cones.clone(),
            Self::Assessment(ext) if ext.cones().is_empty() => {
                alloc::vec![ProperCone::empty(ext.family().dim())]
            }
            Self::Assessment(ext) => ext.cones().to_vec(),
        }
    }

    /// Rule compatibility of the model's rejection sets.
    pub fn compatible(&self, rules: &RuleSet) -> Result<Compatibility> {
        compatible_with(self, rules)
    }
}

/// The rejection sets of the model: option sets from which zero is
/// rejected once added.
impl SetFamily for ChoiceModel {
    fn dim(&self) -> usize {
        ChoiceModel::dim(self)
    }

    fn contains_set(&self, set: &OptionSet) -> Result<bool> {
        match self {
            Self::Cones(cones) => {
                for cone in cones {
                    if !set.meets(cone)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Self::Assessment(ext) => ext.contains_set(set),
        }
    }
}
