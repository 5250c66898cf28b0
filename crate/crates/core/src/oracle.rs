//! Independent checks for the rest of the crate.
//!
//! [`fm_conic_feasible`] decides the same question as
//! [`crate::geometry::conic_feasible`] by Fourier-Motzkin elimination instead
//! of pivoting, and [`closure_witnesses`] builds option sets that must lie in
//! a natural extension by applying the closure axioms forwards.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::assessment::{check_limit, combine_selections, grid_assignments, AssessmentFamily, CoefficientMap};
use crate::vector::{canonical_set, check_all};
use crate::{Error, Rational, Result, Vector};

/// Default bound on the number of variables left to eliminate after the
/// equalities have been substituted away.
pub const DEFAULT_VARIABLE_LIMIT: usize = 32;

/// Bound on the inequality count in any intermediate system.
pub const ROW_LIMIT: usize = 100_000;

/// `coefficients . x + constant`, compared against zero.
type Row = Vec<Rational>;

/// [`fm_conic_feasible_with`] at [`DEFAULT_VARIABLE_LIMIT`].
pub fn fm_conic_feasible(generators: &[Vector], target: &Vector) -> Result<bool> {
    fm_conic_feasible_with(generators, target, DEFAULT_VARIABLE_LIMIT)
}

/// Is `target` a nonnegative combination of `generators`?
///
/// The system `sum l_i g_i = target, l >= 0` is reduced by substituting out
/// one variable per independent equation and then eliminating the rest
/// from the inequalities one at a time.
pub fn fm_conic_feasible_with(generators: &[Vector], target: &Vector, max_variables: usize) -> Result<bool> {
    let dim = target.dim();
    check_all(dim, generators)?;
    if target.is_zero() {
        return Ok(true);
    }
    let generators = distinct_directions(generators);
    if generators.is_empty() {
        return Ok(false);
    }
    let m = generators.len();

    let mut equalities: Vec<Row> = (0..dim)
        .map(|j| {
            let mut row: Row = generators.iter().map(|g| g.coords()[j].clone()).collect();
            row.push(-target.coords()[j].clone());
            row
        })
        .collect();
    let mut inequalities: Vec<Row> = (0..m)
        .map(|i| {
            let mut row = alloc::vec![Rational::zero(); m + 1];
            row[i] = Rational::from_integer(1.into());
            row
        })
        .collect();

    let mut substituted = 0;
    while let Some(eq) = equalities.pop() {
        let Some(k) = eq[..m].iter().position(|c| !c.is_zero()) else {
            if !eq[m].is_zero() {
                return Ok(false);
            }
            continue;
        };
        for row in equalities.iter_mut().chain(inequalities.iter_mut()) {
            cancel(row, &eq, k);
        }
        substituted += 1;
    }

    let needed = m - substituted;
    if needed > max_variables {
        return Err(Error::VariableLimit {
            needed,
            limit: max_variables,
        });
    }

    let Some(mut rows) = normalize(inequalities, m) else {
        return Ok(false);
    };
    loop {
        let Some(k) = pick_variable(&rows, m) else {
            return Ok(true);
        };
        let (mut pos, mut neg, mut keep) = (Vec::new(), Vec::new(), Vec::new());
        for row in rows {
            if row[k].is_positive() {
                pos.push(row);
            } else if row[k].is_negative() {
                neg.push(row);
            } else {
                keep.push(row);
            }
        }
        let count = keep.len() + pos.len() * neg.len();
        if count > ROW_LIMIT {
            return Err(Error::CombinatorialLimit {
                count: count as u128,
                limit: ROW_LIMIT as u128,
            });
        }
        for p in &pos {
            for n in &neg {
                let (a, b) = (-n[k].clone(), p[k].clone());
                keep.push(p.iter().zip(n).map(|(x, y)| x * &a + y * &b).collect());
            }
        }
        rows = match normalize(keep, m) {
            Some(rows) => rows,
            None => return Ok(false),
        };
    }
}

/// Drops zero generators and positive multiples of earlier ones.
fn distinct_directions(generators: &[Vector]) -> Vec<Vector> {
    let mut seen = BTreeSet::new();
    for g in generators.iter().filter(|g| !g.is_zero()) {
        let lead = g.coords().iter().find(|c| !c.is_zero()).expect("nonzero").abs();
        seen.insert(g.scale(&lead.recip()));
    }
    seen.into_iter().collect()
}

/// Subtracts the multiple of `eq` that clears coordinate `k` of `row`.
fn cancel(row: &mut Row, eq: &Row, k: usize) {
    if row[k].is_zero() {
        return;
    }
    let factor = &row[k] / &eq[k];
    for (x, e) in row.iter_mut().zip(eq) {
        *x -= &factor * e;
    }
}

/// Scales rows so the first nonzero coefficient is `±1`, drops duplicates
/// and rows without variables. `None` if such a row is violated.
fn normalize(rows: Vec<Row>, m: usize) -> Option<Vec<Row>> {
    let mut out = BTreeSet::new();
    for row in rows {
        match row[..m].iter().find(|c| !c.is_zero()) {
            None if row[m].is_negative() => return None,
            None => {}
            Some(lead) => {
                let scale = lead.abs().recip();
                out.insert(row.iter().map(|x| x * &scale).collect::<Row>());
            }
        }
    }
    Some(out.into_iter().collect())
}

/// The variable whose elimination adds the fewest rows.
fn pick_variable(rows: &[Row], m: usize) -> Option<usize> {
    (0..m)
        .filter_map(|k| {
            let pos = rows.iter().filter(|r| r[k].is_positive()).count();
            let neg = rows.iter().filter(|r| r[k].is_negative()).count();
            (pos + neg > 0).then(|| ((pos * neg) as isize - (pos + neg) as isize, k))
        })
        .min()
        .map(|(_, k)| k)
}

/// Option sets that belong to the natural extension of `family` by
/// construction.
///
/// One positive combination over the whole basis is formed for every weight
/// vector in `({0} ∪ grid)^m` other than zero, once with the same weights for
/// every selection and once with the nonzero weights rotated through the
/// grid per selection. Each result is also emitted without zero, and with
/// each of `extra_points` (and all of them together) added.
pub fn closure_witnesses(
    family: &AssessmentFamily,
    grid: &[Rational],
    extra_points: &[Vector],
    limit: u128,
) -> Result<Vec<Vec<Vector>>> {
    let dim = family.dim();
    check_all(dim, extra_points)?;
    if let Some(index) = grid.iter().position(|g| !g.is_positive()) {
        return Err(Error::InvalidProbe { index });
    }
    if grid.is_empty() {
        return Err(Error::InvalidProbe { index: 0 });
    }
    if !family.is_consistent(limit)? {
        return Err(Error::InconsistentAssessment);
    }
    let basis = family.basis();
    if basis.is_empty() {
        return Ok(Vec::new());
    }

    let levels = grid.len() + 1;
    let variants: u128 = if grid.len() > 1 { 2 } else { 1 };
    let weight_vectors = (levels as u128)
        .checked_pow(basis.len() as u32)
        .map(|n| n - 1)
        .unwrap_or(u128::MAX);
    check_limit(
        weight_vectors.saturating_mul(variants).saturating_mul(family.selection_count()),
        limit,
    )?;

    let zero = Vector::zero(dim);
    let extras = canonical_set(extra_points.to_vec());
    let mut witnesses = BTreeSet::new();
    for assignment in grid_assignments(levels, basis.len()) {
        if assignment.iter().all(|&a| a == 0) {
            continue;
        }
        for rotate in 0..variants as usize {
            let combined = combine_selections(basis, |index, _| {
                let shift = rotate * index;
                let weights = assignment
                    .iter()
                    .map(|&a| match a {
                        0 => Rational::zero(),
                        a => grid[(a - 1 + shift) % grid.len()].clone(),
                    })
                    .collect();
                CoefficientMap::new(weights).expect("some weight is positive")
            });
            let mut bases = alloc::vec![combined.clone()];
            if combined.contains(&zero) {
                bases.push(combined.iter().filter(|p| **p != zero).cloned().collect());
            }
            for base in bases {
                for extra in extras.iter().filter(|e| !base.contains(e)) {
                    witnesses.insert(canonical_set(base.iter().chain([extra]).cloned().collect()));
                }
                if extras.len() > 1 {
                    witnesses.insert(canonical_set(base.iter().chain(&extras).cloned().collect()));
                }
                witnesses.insert(base);
            }
        }
    }
    Ok(witnesses.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assessment::DEFAULT_SELECTION_LIMIT as LIMIT;
    use crate::geometry::conic_feasible;
    use alloc::vec;

    fn v(c: &[i64]) -> Vector {
        Vector::from_ints(c)
    }

    fn vs(points: &[&[i64]]) -> Vec<Vector> {
        points.iter().map(|p| v(p)).collect()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn fm_examples() {
        assert!(fm_conic_feasible(&vs(&[&[1, 0], &[1, 1]]), &v(&[2, 1])).unwrap());
        assert!(!fm_conic_feasible(&vs(&[&[1, 0]]), &v(&[0, 1])).unwrap());
        assert!(fm_conic_feasible(&[], &v(&[0, 0])).unwrap());
        assert!(!fm_conic_feasible(&[], &v(&[1, 0])).unwrap());
        assert!(fm_conic_feasible(&vs(&[&[1, 0], &[-1, 0], &[0, 1]]), &v(&[-5, 2])).unwrap());
        assert!(!fm_conic_feasible(&vs(&[&[1, 0], &[-1, 0], &[0, 1]]), &v(&[-5, -2])).unwrap());
        assert!(matches!(
            fm_conic_feasible(&vs(&[&[1, 0]]), &v(&[1, 0, 0])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn fm_variable_limit() {
        let gens = vs(&[&[1, 0], &[2, 1], &[3, 1], &[1, 5]]);
        assert_eq!(
            fm_conic_feasible_with(&gens, &v(&[1, 1]), 1),
            Err(Error::VariableLimit { needed: 2, limit: 1 })
        );
        assert!(fm_conic_feasible_with(&gens, &v(&[1, 1]), 2).unwrap());
    }

    #[test]
    fn fm_matches_simplex_on_a_grid() {
        let gens = vs(&[&[1, 2, 0], &[0, 1, -1], &[-1, 0, 1], &[2, -1, 3]]);
        for x in -2..=2 {
            for y in -2..=2 {
                for z in -2..=2 {
                    let t = v(&[x, y, z]);
                    for take in 1..=gens.len() {
                        let g = &gens[..take];
                        assert_eq!(fm_conic_feasible(g, &t).unwrap(), conic_feasible(g, &t).unwrap(), "{t}");
                    }
                }
            }
        }
    }

    #[test]
    fn witness_examples() {
        let f = AssessmentFamily::new(2, vec![vs(&[&[1, 0]]), vs(&[&[0, 1]])]).unwrap();
        let w = closure_witnesses(&f, &[q(1, 1)], &[], LIMIT).unwrap();
        assert!(w.contains(&vs(&[&[1, 1]])));

        let f = AssessmentFamily::new(2, vec![vs(&[&[1, 0]])]).unwrap();
        let w = closure_witnesses(&f, &[q(1, 2), q(2, 1)], &[], LIMIT).unwrap();
        assert!(w.contains(&vec![Vector::new(vec![q(1, 2), q(0, 1)]).unwrap()]));
        assert!(w.contains(&vs(&[&[2, 0]])));

        let f = AssessmentFamily::new(2, vec![vs(&[&[1, 0], &[-1, 1]])]).unwrap();
        let w = closure_witnesses(&f, &[q(1, 1)], &[], LIMIT).unwrap();
        assert!(w.contains(&canonical_set(vs(&[&[1, 0], &[-1, 1]]))));
    }

    #[test]
    fn witnesses_include_zero_removal_and_extras() {
        let f = AssessmentFamily::new(2, vec![vs(&[&[1, 0]]), vs(&[&[-1, 0], &[0, 1]])]).unwrap();
        let w = closure_witnesses(&f, &[q(1, 1)], &vs(&[&[5, 5]]), LIMIT).unwrap();
        assert!(w.contains(&canonical_set(vs(&[&[0, 0], &[1, 1]]))));
        assert!(w.contains(&vs(&[&[1, 1]])));
        assert!(w.contains(&canonical_set(vs(&[&[1, 1], &[5, 5]]))));
        let ext = f.natural_extension(LIMIT).unwrap();
        for s in &w {
            assert!(ext.membership(&crate::rules::OptionSet::Finite(s.clone())).unwrap().is_member());
        }
    }

    #[test]
    fn witness_errors() {
        let f = AssessmentFamily::new(2, vec![vs(&[&[1, 0]]), vs(&[&[-1, 0]])]).unwrap();
        assert_eq!(closure_witnesses(&f, &[q(1, 1)], &[], LIMIT), Err(Error::InconsistentAssessment));
        let f = AssessmentFamily::new(2, vec![vs(&[&[1, 0]])]).unwrap();
        assert_eq!(closure_witnesses(&f, &[q(0, 1)], &[], LIMIT), Err(Error::InvalidProbe { index: 0 }));
        assert!(matches!(
            closure_witnesses(&f, &[q(1, 1), q(2, 1)], &[], 1),
            Err(Error::CombinatorialLimit { .. })
        ));
        assert!(closure_witnesses(&AssessmentFamily::empty(2), &[q(1, 1)], &[], LIMIT).unwrap().is_empty());
    }
}
