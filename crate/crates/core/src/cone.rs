//! Blunt convex cones and the strict partial orders they induce.
//!
//! A [`ProperCone`] `D` is stored as a finite generator list and denotes
//! `posi(generators)`: all nonzero nonnegative combinations. It encodes the
//! order `u > v  <=>  u - v in D`.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::geometry::{conic_feasible, zero_nontrivially_in_cone};
use crate::report::AxiomReport;
use crate::vector::{canonical_set, check_all};
use crate::{Error, Rational, Result, Vector};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProperCone {
    dim: usize,
    /// Canonical: sorted and deduplicated.
    generators: Vec<Vector>,
}

impl ProperCone {
    /// Builds the cone spanned by `generators`, refusing generator lists
    /// whose positive hull contains zero.
    pub fn new(dim: usize, generators: Vec<Vector>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        check_all(dim, &generators)?;
        if zero_nontrivially_in_cone(&generators)? {
            return Err(Error::NotBlunt);
        }
        Ok(Self {
            dim,
            generators: canonical_set(generators),
        })
    }

    /// The empty cone, i.e. the vacuous order.
    pub fn empty(dim: usize) -> Self {
        Self {
            dim,
            generators: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vector] {
        &self.generators
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// `u in D`, equivalently `u > 0`.
    pub fn contains(&self, u: &Vector) -> Result<bool> {
        u.check_dim(self.dim)?;
        if u.is_zero() {
            return Ok(false);
        }
        conic_feasible(&self.generators, u)
    }

    /// `u > v`.
    pub fn dominates(&self, u: &Vector, v: &Vector) -> Result<bool> {
        u.check_dim(self.dim)?;
        v.check_dim(self.dim)?;
        self.contains(&(u - v))
    }

    /// The undominated options of `options`, in canonical order.
    pub fn choose(&self, options: &[Vector]) -> Result<Vec<Vector>> {
        let options = option_set(self.dim, options)?;
        let mut chosen = Vec::new();
        for u in &options {
            let mut dominated = false;
            for v in &options {
                if v != u && self.dominates(v, u)? {
                    dominated = true;
                    break;
                }
            }
            if !dominated {
                chosen.push(u.clone());
            }
        }
        Ok(chosen)
    }

    /// Samples the proper-order axioms of `dominates` over `probes`:
    /// irreflexivity, transitivity, invariance under the scalings
    /// `{1/2, 1, 3}` and under translation by probes.
    ///
    /// Also records the order/cone round trip `u > 0  <=>  u in D`.
    pub fn check_order_axioms(&self, probes: &[Vector]) -> Result<AxiomReport> {
        check_all(self.dim, probes)?;
        let n = probes.len();
        let mut table = alloc::vec![alloc::vec![false; n]; n];
        for (i, u) in probes.iter().enumerate() {
            for (j, v) in probes.iter().enumerate() {
                table[i][j] = self.dominates(u, v)?;
            }
        }
        let scalars = [
            Rational::new(1.into(), 2.into()),
            Rational::from_integer(1.into()),
            Rational::from_integer(3.into()),
        ];

        let mut report = AxiomReport::new();
        for (i, u) in probes.iter().enumerate() {
            report.record("PO1 irreflexivity", !table[i][i], || format!("{u} > {u}"));
        }
        for i in 0..n {
            for j in 0..n {
                if !table[i][j] {
                    continue;
                }
                for k in 0..n {
                    if table[j][k] {
                        report.record("PO2 transitivity", table[i][k], || {
                            format!("{} > {} > {} but not {} > {}", probes[i], probes[j], probes[k], probes[i], probes[k])
                        });
                    }
                }
                for s in &scalars {
                    let holds = self.dominates(&probes[i].scale(s), &probes[j].scale(s))?;
                    report.record("PO3 positive scaling", holds, || {
                        format!("{} > {} fails after scaling by {s}", probes[i], probes[j])
                    });
                }
                for w in probes {
                    let holds = self.dominates(&(&probes[i] + w), &(&probes[j] + w))?;
                    report.record("PO4 translation", holds, || {
                        format!("{} > {} fails after adding {w}", probes[i], probes[j])
                    });
                }
            }
        }
        let zero = Vector::zero(self.dim);
        for u in probes {
            let holds = self.dominates(u, &zero)? == self.contains(u)?;
            report.record("order/cone round trip", holds, || format!("{u} > 0 disagrees with membership"));
        }
        Ok(report)
    }
}

/// Validates a finite option set and returns it in canonical order.
pub(crate) fn option_set(dim: usize, options: &[Vector]) -> Result<Vec<Vector>> {
    if options.is_empty() {
        return Err(Error::EmptyOptionSet);
    }
    check_all(dim, options)?;
    Ok(canonical_set(options.to_vec()))
}

/// Options that are maximal for at least one of `cones`.
pub fn choose_from_cones(cones: &[ProperCone], options: &[Vector]) -> Result<Vec<Vector>> {
    let first = cones.first().ok_or(Error::EmptyOrderSet)?;
    let dim = first.dim();
    for cone in cones {
        if cone.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: cone.dim(),
            });
        }
    }
    let mut chosen = Vec::new();
    for cone in cones {
        chosen.extend(cone.choose(options)?);
    }
    Ok(canonical_set(chosen))
}

/// Renders as `posi{(..),(..)}`.
impl fmt::Display for ProperCone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("posi{")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for ProperCone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} in dim {}", self.dim)
    }
}
