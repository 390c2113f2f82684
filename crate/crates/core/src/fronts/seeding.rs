//! Seeds for the tracers, read off critical points sampled over a grid of `x`.
//!
//! Each grid point is solved from every `q` seed. Two neighbouring samples
//! from the same `q` seed that land on the same sheet bracket the sought
//! curve when a function (the level `F - t`, or `det d2F/dq2`) changes sign
//! between them; the endpoint with the smaller value becomes a seed.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::genfam::{critical_point, CriticalPoint, CriticalSystem, GeneratingFamily, MEMBERSHIP_TOL};
use crate::numcore::grid::Grid;
use crate::numcore::newton::newton_solve;
use crate::real::{dist, Real};

#[derive(Clone, Debug)]
struct Sample<T> {
    cp: CriticalPoint<T>,
    value: T,
}

/// Critical points of a family over a grid of `x`, one per grid point and `q` seed.
#[derive(Clone, Debug)]
pub struct SheetSamples<T> {
    grid: Grid<T>,
    seeds: usize,
    samples: Vec<Option<Sample<T>>>,
}

impl<T: Real> SheetSamples<T> {
    pub fn new(fam: &GeneratingFamily<T>, grid: &Grid<T>, q_seeds: &[Vec<T>]) -> Result<Self> {
        let (k, n) = (fam.k(), fam.n());
        if grid.dim() != n || q_seeds.iter().any(|q| q.len() != k) {
            return Err(Error::Dimension("grid or seeds do not match the family".into()));
        }
        let frozen: Vec<usize> = (k..k + n).collect();
        let sys = CriticalSystem { fam };
        let samples = grid
            .points()
            .par_iter()
            .flat_map_iter(|x| {
                let sys = &sys;
                let frozen = &frozen;
                q_seeds.iter().map(move |q| {
                    let z = newton_solve(sys, &fam.join(q, x), frozen).ok()?;
                    let cp = critical_point(fam, &z).ok()?;
                    if !(cp.residual < T::tol(MEMBERSHIP_TOL)) || !fam.domain().contains(&z) {
                        return None;
                    }
                    let value = fam.value(&z).ok()?;
                    Some(Sample { cp, value })
                })
            })
            .collect();
        Ok(Self {
            grid: grid.clone(),
            seeds: q_seeds.len(),
            samples,
        })
    }

    /// All solved critical points, in grid order then seed order.
    pub fn points(&self) -> impl Iterator<Item = &CriticalPoint<T>> {
        self.samples.iter().flatten().map(|s| &s.cp)
    }

    fn brackets(&self, jumps: bool, f: impl Fn(&Sample<T>) -> T) -> Vec<Vec<T>> {
        let counts: Vec<usize> = self.grid.axes.iter().map(|a| a.count).collect();
        let mut out: Vec<Vec<T>> = Vec::new();
        let mut push = |z: Vec<T>| {
            if !out.iter().any(|o| dist(o, &z) < T::lit(1e-9)) {
                out.push(z);
            }
        };
        for flat in 0..self.grid.len() {
            let idx = self.grid.unflatten(flat);
            for axis in 0..counts.len() {
                if idx[axis] + 1 >= counts[axis] {
                    continue;
                }
                let mut stride = 1;
                for c in &counts[axis + 1..] {
                    stride *= c;
                }
                let other = flat + stride;
                for s in 0..self.seeds {
                    let (Some(a), Some(b)) = (&self.samples[flat * self.seeds + s], &self.samples[other * self.seeds + s]) else {
                        continue;
                    };
                    let same_sheet = dist(&a.cp.q, &b.cp.q) < T::lit(0.25) * T::one().max(crate::real::norm2(&a.cp.q));
                    let (fa, fb) = (f(a), f(b));
                    let crosses = fa == T::zero() || fa.signum() != fb.signum();
                    if (same_sheet && crosses) || (jumps && !same_sheet) {
                        let best = if fa.abs() <= fb.abs() { a } else { b };
                        push(best.cp.point());
                    }
                }
            }
        }
        out
    }

    /// Seeds `(q, x)` near the momentary front `F = t`.
    pub fn level_seeds(&self, t: T) -> Vec<Vec<T>> {
        self.brackets(false, |s| s.value - t)
    }

    /// Seeds `(q, x)` near the caustic `det d2F/dq2 = 0`.
    ///
    /// Past a fold one of the merging sheets is gone, so a seed that jumps
    /// sheets between neighbours also brackets the caustic.
    pub fn caustic_seeds(&self) -> Vec<Vec<T>> {
        self.brackets(true, |s| s.cp.hess_q_det)
    }

    /// Distinct `q` values of the samples, for seeding pair searches.
    pub fn q_values(&self, radius: T) -> Vec<Vec<T>> {
        let mut out: Vec<Vec<T>> = Vec::new();
        for cp in self.points() {
            if !out.iter().any(|q| dist(q, &cp.q) < radius) {
                out.push(cp.q.clone());
            }
        }
        out
    }
}
