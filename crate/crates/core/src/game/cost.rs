use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An exact rational extended with a single infinite value, used for costs and
/// potentials of capacity-violating loads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Extended {
    Finite(Rational64),
    Infinite,
}

impl Extended {
    pub const ZERO: Extended = Extended::Finite(Rational64::new_raw(0, 1));

    pub fn is_finite(&self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn finite(self) -> Option<Rational64> {
        match self {
            Extended::Finite(r) => Some(r),
            Extended::Infinite => None,
        }
    }

    /// `+inf` for the sentinel.
    pub fn to_f64(self) -> f64 {
        match self {
            Extended::Finite(r) => rational_to_f64(r),
            Extended::Infinite => f64::INFINITY,
        }
    }
}

pub fn rational_to_f64(r: Rational64) -> f64 {
    r.to_f64()
        .unwrap_or_else(|| *r.numer() as f64 / *r.denom() as f64)
}

impl From<Rational64> for Extended {
    fn from(r: Rational64) -> Self {
        Extended::Finite(r)
    }
}

impl From<i64> for Extended {
    fn from(v: i64) -> Self {
        Extended::Finite(Rational64::from_integer(v))
    }
}

impl PartialOrd for Extended {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Extended {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => a.cmp(b),
            (Extended::Finite(_), Extended::Infinite) => Ordering::Less,
            (Extended::Infinite, Extended::Finite(_)) => Ordering::Greater,
            (Extended::Infinite, Extended::Infinite) => Ordering::Equal,
        }
    }
}

impl Add for Extended {
    type Output = Extended;

    fn add(self, rhs: Extended) -> Extended {
        match (self, rhs) {
            (Extended::Finite(a), Extended::Finite(b)) => Extended::Finite(a + b),
            _ => Extended::Infinite,
        }
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(r) => write!(f, "{r}"),
            Extended::Infinite => write!(f, "inf"),
        }
    }
}

/// Tabulated cost `c(1), c(2), ...` of one resource together with its
/// capacity. Loads above the capacity cost [`Extended::Infinite`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostFunction {
    values: Vec<Rational64>,
    capacity: Option<usize>,
    prefix: Vec<Rational64>,
}

impl CostFunction {
    /// `values[x - 1]` is the cost at load `x`. Values must be non-negative
    /// and non-decreasing.
    pub fn new(values: Vec<Rational64>, capacity: Option<usize>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| **v < Rational64::zero()) {
            return Err(Error::InvalidGame(format!("negative cost value {v}")));
        }
        if let Some(w) = values.windows(2).find(|w| w[1] < w[0]) {
            return Err(Error::InvalidGame(format!(
                "cost values must be non-decreasing, found {} after {}",
                w[1], w[0]
            )));
        }
        let mut prefix = Vec::with_capacity(values.len() + 1);
        let mut acc = Rational64::zero();
        prefix.push(acc);
        for v in &values {
            acc += *v;
            prefix.push(acc);
        }
        Ok(CostFunction {
            values,
            capacity,
            prefix,
        })
    }

    pub fn from_integers(values: &[i64], capacity: Option<usize>) -> Result<Self> {
        Self::new(
            values.iter().copied().map(Rational64::from_integer).collect(),
            capacity,
        )
    }

    pub fn values(&self) -> &[Rational64] {
        &self.values
    }

    /// `None` means uncapacitated.
    pub fn capacity(&self) -> Option<usize> {
        self.capacity
    }

    /// Cost at load `x >= 1`.
    pub fn cost(&self, x: usize) -> Extended {
        debug_assert!(x >= 1);
        if self.capacity.is_some_and(|u| x > u) {
            return Extended::Infinite;
        }
        self.values
            .get(x - 1)
            .map_or(Extended::Infinite, |v| Extended::Finite(*v))
    }

    /// `Σ_{k=1}^{x} c(k)`, the resource's share of Rosenthal's potential.
    pub fn cumulative(&self, x: usize) -> Extended {
        if self.capacity.is_some_and(|u| x > u) {
            return Extended::Infinite;
        }
        self.prefix
            .get(x)
            .map_or(Extended::Infinite, |v| Extended::Finite(*v))
    }

    pub fn is_integer_valued(&self) -> bool {
        self.values.iter().all(|v| v.is_integer())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_decreasing_and_negative() {
        assert!(CostFunction::from_integers(&[2, 1], None).is_err());
        assert!(CostFunction::from_integers(&[-1, 1], None).is_err());
        assert!(CostFunction::from_integers(&[0, 0, 3], None).is_ok());
    }

    #[test]
    fn capacity_gives_sentinel() {
        let c = CostFunction::from_integers(&[1, 2, 3], Some(2)).unwrap();
        assert_eq!(c.cost(2), Extended::from(2));
        assert_eq!(c.cost(3), Extended::Infinite);
        assert_eq!(c.cumulative(2), Extended::from(3));
        assert_eq!(c.cumulative(3), Extended::Infinite);
        assert_eq!(c.cumulative(0), Extended::ZERO);
    }

    #[test]
    fn sentinel_dominates_every_finite_value() {
        let big = Extended::Finite(Rational64::from_integer(i64::MAX / 2));
        assert!(Extended::Infinite > big);
        assert_eq!(big + Extended::Infinite, Extended::Infinite);
        assert_eq!(Extended::Infinite.to_f64(), f64::INFINITY);
    }
}
