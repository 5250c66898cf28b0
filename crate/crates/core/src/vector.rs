use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};

use crate::{Error, Result};

/// Exact scalar. Always kept in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

/// An option: a point in a finite-dimensional rational coordinate space.
///
/// Ordering is lexicographic by coordinates, which is the canonical order
/// used for every set-valued output.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vector(Vec<Rational>);

impl Vector {
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::ZeroDimension);
        }
        Ok(Self(coords))
    }

    /// Builds a vector from integer coordinates.
    ///
    /// # Panics
    ///
    /// Panics on an empty slice.
    pub fn from_ints(coords: &[i64]) -> Self {
        assert!(!coords.is_empty(), "vector needs at least one coordinate");
        Self(coords.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn zero(dim: usize) -> Self {
        Self(alloc::vec![Rational::zero(); dim])
    }

    pub fn ones(dim: usize) -> Self {
        Self(alloc::vec![Rational::one(); dim])
    }

    /// The `index`-th standard basis vector.
    pub fn unit(dim: usize, index: usize) -> Self {
        let mut v = Self::zero(dim);
        v.0[index] = Rational::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self(self.0.iter().map(|c| c * factor).collect())
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() == dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: dim,
                found: self.dim(),
            })
        }
    }

    /// `self + factor * other`.
    pub fn add_scaled(&self, factor: &Rational, other: &Vector) -> Self {
        Self(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + factor * b)
                .collect(),
        )
    }
}

/// Checks that every vector has dimension `dim`.
pub(crate) fn check_all<'a>(dim: usize, vectors: impl IntoIterator<Item = &'a Vector>) -> Result<()> {
    vectors.into_iter().try_for_each(|v| v.check_dim(dim))
}

/// Sorts and deduplicates, turning a list into the canonical form of a set.
pub(crate) fn canonical_set(mut vectors: Vec<Vector>) -> Vec<Vector> {
    vectors.sort();
    vectors.dedup();
    vectors
}

impl<'a> Add<&'a Vector> for &'a Vector {
    type Output = Vector;

    fn add(self, rhs: &'a Vector) -> Vector {
        debug_assert_eq!(self.dim(), rhs.dim());
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl<'a> Sub<&'a Vector> for &'a Vector {
    type Output = Vector;

    fn sub(self, rhs: &'a Vector) -> Vector {
        debug_assert_eq!(self.dim(), rhs.dim());
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Vector {
    type Output = Vector;

    fn neg(self) -> Vector {
        Vector(self.0.iter().map(|c| -c).collect())
    }
}

/// Renders as `(a,b,...)` with each coordinate as `p/q`, or `p` when `q = 1`.
impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
