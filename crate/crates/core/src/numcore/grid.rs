//! Sample grids and `lo:hi:step` ranges.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::real::Real;

/// `count` equally spaced values from `lo` to `hi` inclusive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Linspace<T> {
    pub lo: T,
    pub hi: T,
    pub count: usize,
}

impl<T: Real> Linspace<T> {
    pub fn new(lo: T, hi: T, count: usize) -> Self {
        Self { lo, hi, count }
    }

    pub fn spacing(&self) -> T {
        if self.count < 2 {
            T::zero()
        } else {
            (self.hi - self.lo) / T::from_count(self.count - 1)
        }
    }

    pub fn value(&self, i: usize) -> T {
        if self.count < 2 {
            self.lo
        } else if i + 1 == self.count {
            self.hi
        } else {
            self.lo + self.spacing() * T::from_count(i)
        }
    }

    pub fn values(&self) -> Vec<T> {
        (0..self.count).map(|i| self.value(i)).collect()
    }
}

/// Cartesian product of [`Linspace`] axes, enumerated with the last axis fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid<T> {
    pub axes: Vec<Linspace<T>>,
}

impl<T: Real> Grid<T> {
    pub fn new(axes: Vec<Linspace<T>>) -> Self {
        Self { axes }
    }

    /// Same bounds and count on every axis.
    pub fn uniform(dim: usize, lo: T, hi: T, count: usize) -> Self {
        Self::new(vec![Linspace::new(lo, hi, count); dim])
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.count).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid index (one entry per axis) of the `flat`-th point.
    pub fn unflatten(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim()];
        for (a, axis) in self.axes.iter().enumerate().rev() {
            idx[a] = flat % axis.count;
            flat /= axis.count;
        }
        idx
    }

    pub fn point(&self, idx: &[usize]) -> Vec<T> {
        self.axes.iter().zip(idx).map(|(a, &i)| a.value(i)).collect()
    }

    pub fn points(&self) -> Vec<Vec<T>> {
        (0..self.len()).map(|f| self.point(&self.unflatten(f))).collect()
    }

    /// Length of a cell diagonal.
    pub fn cell_diagonal(&self) -> T {
        self.axes
            .iter()
            .map(|a| a.spacing() * a.spacing())
            .sum::<T>()
            .sqrt()
    }
}

/// Inclusive arithmetic range written `lo:hi:step`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Range<T> {
    pub lo: T,
    pub hi: T,
    pub step: T,
}

impl<T: Real> Range<T> {
    pub fn new(lo: T, hi: T, step: T) -> Result<Self> {
        if !(step > T::zero()) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidArgument("range step must be positive and bounds finite".into()));
        }
        if hi < lo {
            return Err(Error::InvalidArgument("range is empty (hi < lo)".into()));
        }
        Ok(Self { lo, hi, step })
    }

    /// Values `lo + i*step` up to `hi`, tolerating rounding at the top end.
    pub fn values(&self) -> Vec<T> {
        let n = ((self.hi - self.lo) / self.step + T::lit(1e-9)).floor();
        let n = n.to_usize().unwrap_or(0);
        (0..=n).map(|i| self.lo + self.step * T::from_count(i)).collect()
    }
}

impl<T: Real> FromStr for Range<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').map(str::trim).collect();
        let bad = || Error::InvalidArgument(format!("expected lo:hi:step, got `{}`", s.trim()));
        if parts.len() != 3 {
            return Err(bad());
        }
        let num = |p: &str| p.parse::<f64>().map(T::lit).map_err(|_| bad());
        Range::new(num(parts[0])?, num(parts[1])?, num(parts[2])?)
    }
}
