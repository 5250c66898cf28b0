//! Finite assessments and their natural extension.
//!
//! An assessment is a finite basis of finite option sets, each read as "at
//! least one of these is better than zero". The smallest proper family of
//! option sets containing the basis is the intersection, over every
//! selection map `φ` picking one option per basis set, of the sets meeting
//! `posi(φ(basis))`, keeping only selections whose positive hull
//! is blunt. Membership is decided through that representation.

use alloc::format;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::cone::ProperCone;
use crate::geometry::zero_nontrivially_in_cone;
use crate::report::AxiomReport;
use crate::rules::{compatible_with, Compatibility, OptionSet, RuleSet, SetFamily};
use crate::vector::{canonical_set, check_all};
use crate::{Error, Rational, Result, Vector};

/// Default cap on the number of selection maps enumerated.
pub const DEFAULT_SELECTION_LIMIT: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssessmentFamily {
    dim: usize,
    basis: Vec<Vec<Vector>>,
}

impl AssessmentFamily {
    pub fn new(dim: usize, basis: Vec<Vec<Vector>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        let basis = basis
            .into_iter()
            .map(|set| {
                if set.is_empty() {
                    return Err(Error::EmptyOptionSet);
                }
                check_all(dim, &set)?;
                Ok(canonical_set(set))
            })
            .collect::<Result<_>>()?;
        Ok(Self { dim, basis })
    }

    pub fn empty(dim: usize) -> Self {
        Self {
            dim,
            basis: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[Vec<Vector>] {
        &self.basis
    }

    /// Number of selection maps: the product of the basis set sizes.
    pub fn selection_count(&self) -> u128 {
        selection_count(&self.basis)
    }

    pub fn selections(&self) -> Selections {
        Selections::new(&self.basis)
    }

    /// The distinct blunt selection cones, sorted by generator set.
    pub fn selection_cones(&self, limit: u128) -> Result<Vec<ProperCone>> {
        self.selection_cones_by(limit, |selections, cone| selections.iter().map(cone).collect())
    }

    /// [`Self::selection_cones`] with the per-selection work delegated to
    /// `map`, which must return one result per selection, in order.
    pub fn selection_cones_by<M>(&self, limit: u128, map: M) -> Result<Vec<ProperCone>>
    where
        M: FnOnce(&[SelectionMap], &SelectionConeFn<'_>) -> Vec<Result<Option<ProperCone>>>,
    {
        if self.basis.is_empty() {
            return Ok(Vec::new());
        }
        check_limit(self.selection_count(), limit)?;
        let selections: Vec<SelectionMap> = self.selections().collect();
        let results = map(&selections, &|s: &SelectionMap| self.selection_cone(s));
        let mut cones = Vec::new();
        for cone in results {
            cones.extend(cone?);
        }
        cones.sort();
        cones.dedup();
        Ok(cones)
    }

    /// `posi(φ(basis))` if it is blunt.
    pub fn selection_cone(&self, selection: &SelectionMap) -> Result<Option<ProperCone>> {
        let generators = canonical_set(selection.apply(&self.basis));
        if zero_nontrivially_in_cone(&generators)? {
            return Ok(None);
        }
        ProperCone::new(self.dim, generators).map(Some)
    }

    pub fn is_consistent(&self, limit: u128) -> Result<bool> {
        Ok(self.basis.is_empty() || !self.selection_cones(limit)?.is_empty())
    }

    /// Precomputes the selection cones. Fails on an inconsistent basis.
    pub fn natural_extension(&self, limit: u128) -> Result<NaturalExtension> {
        self.natural_extension_by(limit, |selections, cone| selections.iter().map(cone).collect())
    }

    /// [`Self::natural_extension`] with a custom selection mapper, as in
    /// [`Self::selection_cones_by`].
    pub fn natural_extension_by<M>(&self, limit: u128, map: M) -> Result<NaturalExtension>
    where
        M: FnOnce(&[SelectionMap], &SelectionConeFn<'_>) -> Vec<Result<Option<ProperCone>>>,
    {
        let cones = self.selection_cones_by(limit, map)?;
        if !self.basis.is_empty() && cones.is_empty() {
            return Err(Error::InconsistentAssessment);
        }
        Ok(NaturalExtension {
            family: self.clone(),
            cones,
        })
    }
}

/// Computes the selection cone of one selection map, if proper.
pub type SelectionConeFn<'a> = dyn Fn(&SelectionMap) -> Result<Option<ProperCone>> + Sync + 'a;

fn selection_count(sets: &[Vec<Vector>]) -> u128 {
    sets.iter()
        .try_fold(1u128, |acc, s| acc.checked_mul(s.len() as u128))
        .unwrap_or(u128::MAX)
}

pub(crate) fn check_limit(count: u128, limit: u128) -> Result<()> {
    if count > limit {
        Err(Error::CombinatorialLimit { count, limit })
    } else {
        Ok(())
    }
}

/// One option picked from each set of a family, as indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SelectionMap(Vec<usize>);

impl SelectionMap {
    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    /// The selected options, one per set, in family order.
    pub fn apply(&self, sets: &[Vec<Vector>]) -> Vec<Vector> {
        sets.iter().zip(&self.0).map(|(s, &i)| s[i].clone()).collect()
    }
}

/// Enumerates every selection map of a family in mixed-radix order, last
/// set fastest.
#[derive(Debug, Clone)]
pub struct Selections {
    sizes: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl Selections {
    pub fn new(sets: &[Vec<Vector>]) -> Self {
        let sizes: Vec<usize> = sets.iter().map(Vec::len).collect();
        let next = (!sizes.contains(&0)).then(|| alloc::vec![0; sizes.len()]);
        Self { sizes, next }
    }
}

impl Iterator for Selections {
    type Item = SelectionMap;

    fn next(&mut self) -> Option<SelectionMap> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        for pos in (0..succ.len()).rev() {
            succ[pos] += 1;
            if succ[pos] < self.sizes[pos] {
                self.next = Some(succ);
                break;
            }
            succ[pos] = 0;
        }
        Some(SelectionMap(current))
    }
}

/// Nonnegative weights on the sets of a family, not all zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientMap(Vec<Rational>);

impl CoefficientMap {
    /// `None` if a weight is negative or all are zero.
    pub fn new(weights: Vec<Rational>) -> Option<Self> {
        let valid = weights.iter().all(|w| !w.is_negative()) && weights.iter().any(Signed::is_positive);
        valid.then_some(Self(weights))
    }

    pub fn weights(&self) -> &[Rational] {
        &self.0
    }
}

/// The set `{ sum_A λ_φ(A) φ(A) : φ }` over all selection maps of `sets`,
/// with `coefficients` choosing `λ_φ` from the selection's enumeration index.
pub fn combine_selections(
    sets: &[Vec<Vector>],
    mut coefficients: impl FnMut(usize, &SelectionMap) -> CoefficientMap,
) -> Vec<Vector> {
    let dim = sets.iter().flatten().next().map_or(0, Vector::dim);
    let mut out = Vec::new();
    for (index, selection) in Selections::new(sets).enumerate() {
        let lambda = coefficients(index, &selection);
        let mut sum = Vector::zero(dim);
        for (option, weight) in selection.apply(sets).iter().zip(lambda.weights()) {
            if !weight.is_zero() {
                sum = sum.add_scaled(weight, option);
            }
        }
        out.push(sum);
    }
    canonical_set(out)
}

/// Outcome of a natural-extension membership query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    Member,
    /// A proper selection cone (or, for an empty basis, the empty cone) that
    /// the queried set does not meet.
    NonMember { certificate: ProperCone },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member)
    }
}

/// The natural extension of a consistent assessment, with its selection
/// cones computed once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaturalExtension {
    family: AssessmentFamily,
    cones: Vec<ProperCone>,
}

impl NaturalExtension {
    pub fn family(&self) -> &AssessmentFamily {
        &self.family
    }

    /// The proper selection cones; empty exactly when the basis is.
    pub fn cones(&self) -> &[ProperCone] {
        &self.cones
    }

    pub fn membership(&self, set: &OptionSet) -> Result<Membership> {
        // The empty set is a legal query and is never a member.
        if !matches!(set, OptionSet::Finite(p) if p.is_empty()) {
            set.validate(self.family.dim)?;
        }
        if self.cones.is_empty() {
            return Ok(Membership::NonMember {
                certificate: ProperCone::empty(self.family.dim),
            });
        }
        for cone in &self.cones {
            if !set.meets(cone)? {
                return Ok(Membership::NonMember {
                    certificate: cone.clone(),
                });
            }
        }
        Ok(Membership::Member)
    }
}

impl SetFamily for NaturalExtension {
    fn dim(&self) -> usize {
        self.family.dim
    }

    fn contains_set(&self, set: &OptionSet) -> Result<bool> {
        Ok(self.membership(set)?.is_member())
    }
}

pub fn selection_cones(family: &AssessmentFamily, limit: u128) -> Result<Vec<ProperCone>> {
    family.selection_cones(limit)
}

pub fn is_consistent(family: &AssessmentFamily, limit: u128) -> Result<bool> {
    family.is_consistent(limit)
}

/// Is `set` in the natural extension of `family`?
pub fn in_natural_extension(family: &AssessmentFamily, set: &OptionSet, limit: u128) -> Result<bool> {
    family.natural_extension(limit)?.contains_set(set)
}

/// Rule compatibility of the natural extension.
pub fn k_compatible(family: &AssessmentFamily, rules: &RuleSet, limit: u128) -> Result<Compatibility> {
    compatible_with(&family.natural_extension(limit)?, rules)
}

/// Largest subfamily size tried for the combination axiom.
const MAX_SUBFAMILY: usize = 3;

/// Samples the axioms of a proper family of option sets against any
/// membership oracle.
///
/// * PK0: the empty set is not a member.
/// * PK1: removing zero from a finite member keeps it a member.
/// * PK2: for subfamilies (up to three sets) of finite members, combining
///   selections with weights from `grid` gives a member. Weights are tried
///   uniformly across selections and cyclically shifted per selection.
/// * PK3: adding any sampled point to a finite member keeps it a member.
pub fn check_pk_axioms<F: SetFamily + ?Sized>(
    family: &F,
    sample: &[OptionSet],
    grid: &[Rational],
) -> Result<AxiomReport> {
    let mut report = AxiomReport::new();
    for axiom in ["PK0 empty set excluded", "PK1 zero removal", "PK2 positive combination", "PK3 supersets"] {
        report.declare(axiom);
    }
    let dim = family.dim();
    sample.iter().try_for_each(|s| s.validate(dim))?;
    if grid.iter().any(|g| !g.is_positive()) {
        return Err(Error::InvalidProbe {
            index: grid.iter().position(|g| !g.is_positive()).unwrap_or(0),
        });
    }

    let empty = OptionSet::Finite(Vec::new());
    report.record("PK0 empty set excluded", !family.contains_set(&empty)?, || "∅ is a member".into());

    let mut members: Vec<Vec<Vector>> = Vec::new();
    for set in sample {
        if let OptionSet::Finite(points) = set {
            if family.contains_set(set)? {
                members.push(points.clone());
            }
        }
    }

    let zero = Vector::zero(dim);
    for points in &members {
        if points.contains(&zero) {
            let rest: Vec<Vector> = points.iter().filter(|p| **p != zero).cloned().collect();
            let holds = family.contains_set(&OptionSet::Finite(rest))?;
            report.record("PK1 zero removal", holds, || format!("{} without zero", OptionSet::Finite(points.clone())));
        }
    }

    for size in 1..=members.len().min(MAX_SUBFAMILY) {
        for subset in combinations(members.len(), size) {
            let sets: Vec<Vec<Vector>> = subset.iter().map(|&i| members[i].clone()).collect();
            for assignment in grid_assignments(grid.len(), size) {
                for shifted in [false, true] {
                    if shifted && grid.len() == 1 {
                        continue;
                    }
                    let combined = combine_selections(&sets, |index, _| {
                        let shift = if shifted { index } else { 0 };
                        CoefficientMap(
                            assignment
                                .iter()
                                .map(|&g| grid[(g + shift) % grid.len()].clone())
                                .collect(),
                        )
                    });
                    let holds = family.contains_set(&OptionSet::Finite(combined.clone()))?;
                    report.record("PK2 positive combination", holds, || {
                        format!("{} is not a member", OptionSet::Finite(combined.clone()))
                    });
                }
            }
        }
    }

    let mut pool: Vec<Vector> = sample
        .iter()
        .filter_map(|s| match s {
            OptionSet::Finite(p) => Some(p.iter().cloned()),
            _ => None,
        })
        .flatten()
        .collect();
    pool = canonical_set(pool);
    for points in &members {
        for extra in &pool {
            if points.contains(extra) {
                continue;
            }
            let bigger = OptionSet::Finite(canonical_set(points.iter().chain([extra]).cloned().collect()));
            let holds = family.contains_set(&bigger)?;
            report.record("PK3 supersets", holds, || format!("{bigger} is not a member"));
        }
    }
    Ok(report)
}

/// Natural extension entry point for [`check_pk_axioms`].
pub fn check_pk_axioms_for(
    family: &AssessmentFamily,
    sample: &[OptionSet],
    grid: &[Rational],
    limit: u128,
) -> Result<AxiomReport> {
    check_pk_axioms(&family.natural_extension(limit)?, sample, grid)
}

/// All `k`-element index subsets of `0..n`, lexicographically.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            go(i + 1, n, k, current, out);
            current.pop();
        }
    }
    go(0, n, k, &mut current, &mut out);
    out
}

/// Every map from `len` positions into `0..grid`.
pub(crate) fn grid_assignments(grid: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = alloc::vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..grid).map(move |g| {
                    let mut next = prefix.clone();
                    next.push(g);
                    next
                })
            })
            .collect();
    }
    out
}
