//! Exact conic feasibility.
//!
//! Cones are given by finite generator lists and always include zero-weight
//! combinations here; bluntness is handled one level up in [`crate::cone`].

use alloc::vec::Vec;
use core::sync::atomic::{AtomicPtr, Ordering};

use num_traits::{One, Zero};

use crate::lp::{self, Outcome};
use crate::vector::check_all;
use crate::{Rational, Result, Vector};

/// Called after every [`conic_feasible`] decision with the generators, the
/// target and the verdict.
pub type QueryObserver = fn(&[Vector], &Vector, bool);

static OBSERVER: AtomicPtr<()> = AtomicPtr::new(core::ptr::null_mut());

/// Installs (or with `None`, removes) the process-wide query observer.
///
/// Used by verification harnesses to replay every feasibility decision
/// through an independent procedure.
pub fn set_query_observer(observer: Option<QueryObserver>) {
    let ptr = observer.map_or(core::ptr::null_mut(), |f| f as *mut ());
    OBSERVER.store(ptr, Ordering::Release);
}

fn notify(generators: &[Vector], target: &Vector, verdict: bool) {
    let ptr = OBSERVER.load(Ordering::Acquire);
    if !ptr.is_null() {
        // SAFETY: the pointer was produced from a `QueryObserver` in
        // `set_query_observer` and function pointers round-trip through
        // data pointers on every supported target.
        let f: QueryObserver = unsafe { core::mem::transmute::<*mut (), QueryObserver>(ptr) };
        f(generators, target, verdict);
    }
}

/// Result of maximising a ray parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RayBound {
    Bounded(Rational),
    Unbounded,
    Infeasible,
}

fn columns_as_rows(generators: &[Vector], dim: usize) -> Vec<Vec<Rational>> {
    (0..dim)
        .map(|r| generators.iter().map(|g| g.coords()[r].clone()).collect())
        .collect()
}

/// Is `target` a nonnegative combination of `generators`?
///
/// With no generators only the zero vector qualifies (the empty sum).
pub fn conic_feasible(generators: &[Vector], target: &Vector) -> Result<bool> {
    let dim = target.dim();
    check_all(dim, generators)?;
    let verdict = if target.is_zero() {
        true
    } else if generators.is_empty() {
        false
    } else {
        let a = columns_as_rows(generators, dim);
        lp::is_feasible(&a, target.coords(), generators.len())
    };
    notify(generators, target, verdict);
    Ok(verdict)
}

/// Appends `extra` as a final coordinate.
pub(crate) fn lift(v: &Vector, extra: Rational) -> Vector {
    let mut coords = v.coords().to_vec();
    coords.push(extra);
    Vector::new(coords).expect("lifted vector is nonempty")
}

/// Is zero a positive combination of `generators`, i.e. is there `l >= 0`
/// with `sum l = 1` and `sum l_i g_i = 0`?
///
/// Reduced to [`conic_feasible`] on generators lifted by a trailing `1`
/// against the target `(0, ..., 0, 1)`.
pub fn zero_nontrivially_in_cone(generators: &[Vector]) -> Result<bool> {
    let Some(first) = generators.first() else {
        return Ok(false);
    };
    let dim = first.dim();
    check_all(dim, generators)?;
    let lifted: Vec<Vector> = generators.iter().map(|g| lift(g, Rational::one())).collect();
    let target = lift(&Vector::zero(dim), Rational::one());
    conic_feasible(&lifted, &target)
}

fn ray_problem(
    generators: &[Vector],
    base: &Vector,
    direction: &Vector,
) -> Result<(Vec<Vec<Rational>>, usize)> {
    let dim = base.dim();
    direction.check_dim(dim)?;
    check_all(dim, generators)?;
    // Columns: one per generator, then `-direction` for the ray parameter.
    let mut a = columns_as_rows(generators, dim);
    for (row, d) in a.iter_mut().zip(direction.coords()) {
        row.push(-d);
    }
    Ok((a, generators.len() + 1))
}

fn optimize_ray(generators: &[Vector], base: &Vector, direction: &Vector, sign: i64) -> Result<RayBound> {
    let (a, cols) = ray_problem(generators, base, direction)?;
    let mut cost = alloc::vec![Rational::zero(); cols];
    cost[cols - 1] = Rational::from_integer(sign.into());
    Ok(match lp::maximize(&a, base.coords(), &cost) {
        Outcome::Infeasible => RayBound::Infeasible,
        Outcome::Unbounded => RayBound::Unbounded,
        Outcome::Optimal(v) => RayBound::Bounded(v * Rational::from_integer(sign.into())),
    })
}

/// `sup { e >= 0 : base + e * direction is a nonnegative combination of generators }`.
pub fn sup_ray_parameter(generators: &[Vector], base: &Vector, direction: &Vector) -> Result<RayBound> {
    optimize_ray(generators, base, direction, 1)
}

/// The matching infimum. Never unbounded because `e >= 0`.
pub fn inf_ray_parameter(generators: &[Vector], base: &Vector, direction: &Vector) -> Result<RayBound> {
    optimize_ray(generators, base, direction, -1)
}
