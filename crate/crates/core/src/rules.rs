//! Option sets, rules `(premises, conclusion)` and rule compatibility.
//!
//! A cone `D` is compatible with a rule when "every premise meets `D`"
//! implies "the conclusion meets `D`". The same implication, with "meets `D`"
//! replaced by membership in a family of option sets, gives compatibility of
//! such families; [`SetFamily`] abstracts over both.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::cone::ProperCone;
use crate::geometry::{conic_feasible, inf_ray_parameter, lift, sup_ray_parameter, RayBound};
use crate::vector::{canonical_set, check_all};
use crate::{Error, Rational, Result, Vector};

/// A nonempty, possibly infinite, set of options in finite presentation.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum OptionSet {
    /// Finitely many points. An empty list denotes the empty set, which only
    /// arises internally.
    Finite(Vec<Vector>),
    /// `posi(points)`: all finite positive combinations of the points.
    Posi(Vec<Vector>),
    /// `{ base + e * direction : e > 0 }`.
    OpenRay { base: Vector, direction: Vector },
    /// Union of the parts. Only produced by monotonification.
    Union(Vec<OptionSet>),
}

impl OptionSet {
    pub fn finite(points: Vec<Vector>) -> Result<Self> {
        let dim = points.first().ok_or(Error::EmptyOptionSet)?.dim();
        check_all(dim, &points)?;
        Ok(Self::Finite(canonical_set(points)))
    }

    pub fn posi(points: Vec<Vector>) -> Result<Self> {
        let dim = points.first().ok_or(Error::EmptyOptionSet)?.dim();
        check_all(dim, &points)?;
        Ok(Self::Posi(canonical_set(points)))
    }

    pub fn open_ray(base: Vector, direction: Vector) -> Result<Self> {
        direction.check_dim(base.dim())?;
        if direction.is_zero() {
            return Err(Error::ZeroDirection);
        }
        Ok(Self::OpenRay { base, direction })
    }

    /// Dimension of the first vector found, if any.
    pub fn dim(&self) -> Option<usize> {
        match self {
            Self::Finite(p) | Self::Posi(p) => p.first().map(Vector::dim),
            Self::OpenRay { base, .. } => Some(base.dim()),
            Self::Union(parts) => parts.iter().find_map(OptionSet::dim),
        }
    }

    /// Checks the invariants: consistent dimension, nonempty, nonzero ray
    /// direction.
    pub fn validate(&self, dim: usize) -> Result<()> {
        match self {
            Self::Finite(p) | Self::Posi(p) => {
                if p.is_empty() {
                    return Err(Error::EmptyOptionSet);
                }
                check_all(dim, p)
            }
            Self::OpenRay { base, direction } => {
                base.check_dim(dim)?;
                direction.check_dim(dim)?;
                if direction.is_zero() {
                    return Err(Error::ZeroDirection);
                }
                Ok(())
            }
            Self::Union(parts) => {
                if parts.is_empty() {
                    return Err(Error::EmptyOptionSet);
                }
                parts.iter().try_for_each(|p| p.validate(dim))
            }
        }
    }

    /// `self ∪ extra`, merging into a finite part where one exists.
    pub fn union_with(&self, extra: &[Vector]) -> OptionSet {
        fn merged(points: &[Vector], extra: &[Vector]) -> Vec<Vector> {
            canonical_set(points.iter().chain(extra).cloned().collect())
        }
        match self {
            Self::Finite(p) => Self::Finite(merged(p, extra)),
            Self::Union(parts) => {
                let mut parts = parts.clone();
                match parts.iter_mut().find(|p| matches!(p, Self::Finite(_))) {
                    Some(Self::Finite(p)) => *p = merged(p, extra),
                    _ => parts.push(Self::Finite(merged(&[], extra))),
                }
                Self::Union(parts)
            }
            other => Self::Union(alloc::vec![other.clone(), Self::Finite(merged(&[], extra))]),
        }
    }

    /// Does this set contain an element of `cone`?
    pub fn meets(&self, cone: &ProperCone) -> Result<bool> {
        match self {
            Self::Finite(points) => {
                for p in points {
                    if cone.contains(p)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Self::Posi(points) => posi_meets(points, cone),
            Self::OpenRay { base, direction } => open_ray_meets(base, direction, cone),
            Self::Union(parts) => {
                for part in parts {
                    if part.meets(cone)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
        }
    }
}

impl fmt::Display for OptionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list(f: &mut fmt::Formatter<'_>, points: &[Vector]) -> fmt::Result {
            for (i, p) in points.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{p}")?;
            }
            Ok(())
        }
        match self {
            Self::Finite(p) => {
                f.write_str("{")?;
                list(f, p)?;
                f.write_str("}")
            }
            Self::Posi(p) => {
                f.write_str("posi{")?;
                list(f, p)?;
                f.write_str("}")
            }
            Self::OpenRay { base, direction } => write!(f, "ray{{{base}+e{direction}}}"),
            Self::Union(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str("∪")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
        }
    }
}

/// Does `posi(points)` share a nonzero point with `cone`?
///
/// Zero always lies in both closed cones, so the question is whether some
/// coordinate of a common point `sum m_i b_i = sum l_k g_k` can be made
/// nonzero. Each sign and coordinate is one conic feasibility query, with
/// the coordinate pinned to `±1` by scaling.
fn posi_meets(points: &[Vector], cone: &ProperCone) -> Result<bool> {
    check_all(cone.dim(), points)?;
    for p in points {
        if cone.contains(p)? {
            return Ok(true);
        }
    }
    if cone.is_empty() {
        return Ok(false);
    }
    let dim = cone.dim();
    let negated: Vec<Vector> = cone
        .generators()
        .iter()
        .map(|g| lift(&-g, Rational::zero()))
        .collect();
    let target = lift(&Vector::zero(dim), Rational::one());
    for coord in 0..dim {
        for sign in [Rational::one(), -Rational::one()] {
            let mut columns: Vec<Vector> = points
                .iter()
                .map(|b| lift(b, &sign * &b.coords()[coord]))
                .collect();
            columns.extend(negated.iter().cloned());
            if conic_feasible(&columns, &target)? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Does `{ base + e * direction : e > 0 }` meet `cone`?
fn open_ray_meets(base: &Vector, direction: &Vector, cone: &ProperCone) -> Result<bool> {
    base.check_dim(cone.dim())?;
    let generators = cone.generators();
    // Feasible parameters form an interval [lo, hi] of e >= 0.
    let hi = match sup_ray_parameter(generators, base, direction)? {
        RayBound::Infeasible => return Ok(false),
        RayBound::Unbounded => return Ok(true),
        RayBound::Bounded(hi) if !hi.is_positive() => return Ok(false),
        RayBound::Bounded(hi) => hi,
    };
    let lo = match inf_ray_parameter(generators, base, direction)? {
        RayBound::Bounded(lo) => lo,
        other => unreachable!("infimum over a nonempty interval of e >= 0: {other:?}"),
    };
    // A nondegenerate interval has many positive points; at most one of
    // them is the zero vector.
    if lo < hi {
        return Ok(true);
    }
    Ok(!base.add_scaled(&hi, direction).is_zero())
}

/// A rule `(premises, conclusion)`; `None` is the empty conclusion.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Rule {
    pub premises: Vec<OptionSet>,
    pub conclusion: Option<OptionSet>,
}

impl Rule {
    pub fn new(premises: Vec<OptionSet>, conclusion: Option<OptionSet>) -> Self {
        Self { premises, conclusion }
    }

    pub fn dim(&self) -> Option<usize> {
        self.premises
            .iter()
            .chain(&self.conclusion)
            .find_map(OptionSet::dim)
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        self.premises
            .iter()
            .chain(&self.conclusion)
            .try_for_each(|s| s.validate(dim))
    }

    /// `({A ∪ M : A in premises}, conclusion ∪ M)`.
    pub fn monotonify(&self, extra: &[Vector]) -> Result<Rule> {
        if self.premises.is_empty() {
            return Err(Error::PremiseFree);
        }
        if extra.is_empty() {
            return Err(Error::EmptyOptionSet);
        }
        if let Some(dim) = self.dim() {
            check_all(dim, extra)?;
        }
        Ok(Rule {
            premises: self.premises.iter().map(|a| a.union_with(extra)).collect(),
            conclusion: Some(match &self.conclusion {
                Some(b) => b.union_with(extra),
                None => OptionSet::Finite(canonical_set(extra.to_vec())),
            }),
        })
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("({")?;
        for (i, p) in self.premises.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}, ")?;
        match &self.conclusion {
            Some(c) => write!(f, "{c})"),
            None => f.write_str("∅)"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RuleSet {
    dim: usize,
    rules: Vec<Rule>,
}

impl RuleSet {
    pub fn new(dim: usize, rules: Vec<Rule>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        rules.iter().try_for_each(|r| r.validate(dim))?;
        Ok(Self { dim, rules })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn extend(&mut self, other: RuleSet) -> Result<()> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        self.rules.extend(other.rules);
        Ok(())
    }

    /// The rule set together with every rule monotonified by each of
    /// `extras`: the finite slice of the monotonification these sets
    /// generate. Premise-free rules are kept but not extended.
    pub fn monotonified(&self, extras: &[Vec<Vector>]) -> Result<RuleSet> {
        let mut rules = self.rules.clone();
        for extra in extras {
            check_all(self.dim, extra)?;
            for rule in self.rules.iter().filter(|r| !r.premises.is_empty()) {
                rules.push(rule.monotonify(extra)?);
            }
        }
        Ok(RuleSet { dim: self.dim, rules })
    }
}

/// A family of option sets with decidable membership.
pub trait SetFamily {
    fn dim(&self) -> usize;

    /// Membership of a nonempty option set.
    fn contains_set(&self, set: &OptionSet) -> Result<bool>;
}

/// The family of option sets meeting a cone.
impl SetFamily for ProperCone {
    fn dim(&self) -> usize {
        ProperCone::dim(self)
    }

    fn contains_set(&self, set: &OptionSet) -> Result<bool> {
        set.meets(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Compatibility {
    Compatible,
    /// Index of the first rule whose premises hold but whose conclusion fails.
    Violated { rule: usize },
}

impl Compatibility {
    pub fn is_compatible(self) -> bool {
        self == Compatibility::Compatible
    }
}

/// Checks every rule against a family: premises all members implies the
/// conclusion is a member (an empty conclusion never is).
pub fn compatible_with<F: SetFamily + ?Sized>(family: &F, rules: &RuleSet) -> Result<Compatibility> {
    if rules.dim() != family.dim() {
        return Err(Error::DimensionMismatch {
            expected: family.dim(),
            found: rules.dim(),
        });
    }
    for (index, rule) in rules.rules().iter().enumerate() {
        let mut premises_hold = true;
        for premise in &rule.premises {
            if !family.contains_set(premise)? {
                premises_hold = false;
                break;
            }
        }
        if !premises_hold {
            continue;
        }
        let concluded = match &rule.conclusion {
            Some(c) => family.contains_set(c)?,
            None => false,
        };
        if !concluded {
            return Ok(Compatibility::Violated { rule: index });
        }
    }
    Ok(Compatibility::Compatible)
}

/// Rule compatibility of a single cone.
pub fn d_compatible(cone: &ProperCone, rules: &RuleSet) -> Result<Compatibility> {
    compatible_with(cone, rules)
}

/// Which options count as uniformly positive for coherence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoherenceVariant {
    /// `inf u > 0`: every coordinate strictly positive.
    Strict,
    /// `inf u >= 0` and `u != 0`.
    Weak,
}

impl CoherenceVariant {
    pub fn admits(self, u: &Vector) -> bool {
        match self {
            Self::Strict => u.coords().iter().all(Signed::is_positive),
            Self::Weak => !u.is_zero() && !u.coords().iter().any(Signed::is_negative),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Coherence(CoherenceVariant),
    Totality,
    Weak,
    Weak2,
    Mixing,
    Archimedean,
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "coherence" | "coherence-strict" => Self::Coherence(CoherenceVariant::Strict),
            "coherence-weak" => Self::Coherence(CoherenceVariant::Weak),
            "totality" => Self::Totality,
            "weak" => Self::Weak,
            "weak2" => Self::Weak2,
            "mixing" => Self::Mixing,
            "archimedean" => Self::Archimedean,
            other => return Err(Error::UnknownScheme(String::from(other))),
        })
    }
}

/// The finite data a scheme is instantiated over. Each scheme reads only
/// the field it needs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SchemeParams {
    /// Single options, for coherence, totality and Archimedeanity.
    pub probes: Vec<Vector>,
    /// Option pairs `(u, v)`, for the two weak-order schemes.
    pub pairs: Vec<(Vector, Vector)>,
    /// Finite sets, for mixingness.
    pub sets: Vec<Vec<Vector>>,
}

/// Substitutes the probes into a rule scheme.
pub fn instantiate_scheme(scheme: Scheme, dim: usize, params: &SchemeParams) -> Result<RuleSet> {
    let finite = |points: Vec<Vector>| OptionSet::Finite(canonical_set(points));
    let mut rules = Vec::new();
    match scheme {
        Scheme::Coherence(variant) => {
            for (index, u) in params.probes.iter().enumerate() {
                u.check_dim(dim)?;
                if !variant.admits(u) {
                    return Err(Error::InvalidProbe { index });
                }
                rules.push(Rule::new(Vec::new(), Some(finite(alloc::vec![u.clone()]))));
            }
        }
        Scheme::Totality => {
            for (index, u) in params.probes.iter().enumerate() {
                u.check_dim(dim)?;
                if u.is_zero() {
                    return Err(Error::InvalidProbe { index });
                }
                rules.push(Rule::new(Vec::new(), Some(finite(alloc::vec![u.clone(), -u]))));
            }
        }
        Scheme::Weak => {
            for (u, v) in &params.pairs {
                let s = u + v;
                let premise = finite(alloc::vec![s.clone(), -&s]);
                let conclusion = finite(alloc::vec![u.clone(), -u, v.clone(), -v]);
                rules.push(Rule::new(alloc::vec![premise], Some(conclusion)));
            }
        }
        Scheme::Weak2 => {
            for (u, v) in &params.pairs {
                let premise = finite(alloc::vec![u + v]);
                rules.push(Rule::new(alloc::vec![premise], Some(finite(alloc::vec![u.clone(), v.clone()]))));
            }
        }
        Scheme::Mixing => {
            for set in &params.sets {
                let premise = OptionSet::posi(set.clone())?;
                rules.push(Rule::new(alloc::vec![premise], Some(OptionSet::finite(set.clone())?)));
            }
        }
        Scheme::Archimedean => {
            let down = -&Vector::ones(dim);
            for u in &params.probes {
                u.check_dim(dim)?;
                let premise = finite(alloc::vec![u.clone()]);
                let conclusion = OptionSet::open_ray(u.clone(), down.clone())?;
                rules.push(Rule::new(alloc::vec![premise], Some(conclusion)));
            }
        }
    }
    RuleSet::new(dim, rules)
}

/// Does the cone contain every uniformly positive option?
///
/// Decided by the standard basis vectors. The closed cone spanned by the
/// generators contains the open positive orthant iff it contains its
/// closure, iff it contains each `e_i`; so this answers both variants.
pub fn coherent_exact(cone: &ProperCone, _variant: CoherenceVariant) -> Result<bool> {
    let dim = cone.dim();
    for i in 0..dim {
        if !cone.contains(&Vector::unit(dim, i))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Does every member `u` admit some `e > 0` with `u - e*1` still a member?
///
/// Checking the generators suffices: witnesses `e_j` for the generators
/// combine with the same coefficients into a witness for any member.
pub fn archimedean_exact(cone: &ProperCone) -> Result<bool> {
    let down = -&Vector::ones(cone.dim());
    for g in cone.generators() {
        if !open_ray_meets(g, &down, cone)? {
            return Ok(false);
        }
    }
    Ok(true)
}
