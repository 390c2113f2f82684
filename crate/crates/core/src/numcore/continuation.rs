//! Pseudo-arclength continuation of one-dimensional solution sets.

use super::field::DomainBox;
use super::matrix::Matrix;
use super::newton::{newton_solve, System};
use crate::error::{Error, Result};
use crate::real::{dot, inf_norm, norm2, Real};

/// Why a traced branch stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    BoxExit,
    Closed,
    MaxPoints,
    /// The corrector failed even after the step was reduced 64-fold.
    StepFailure,
}

#[derive(Clone, Debug)]
pub struct Curve<T> {
    pub points: Vec<Vec<T>>,
    /// Unit tangents, consistently oriented along the chain.
    pub tangents: Vec<Vec<T>>,
    pub closed: bool,
    /// Termination of the branch traced away from the seed along the initial
    /// tangent, then (for open curves) of the branch traced the other way.
    pub termination: Vec<Termination>,
}

/// Residual of a seed above which it is rejected.
pub const SEED_TOL: f64 = 1e-8;

const MIN_CLOSURE_POINTS: usize = 10;
const MAX_HALVINGS: u32 = 6;

struct Corrector<'a, T, S: ?Sized> {
    inner: &'a S,
    tangent: &'a [T],
    pred: &'a [T],
}

impl<T: Real, S: System<T> + ?Sized> System<T> for Corrector<'_, T, S> {
    fn input_dim(&self) -> usize {
        self.inner.input_dim()
    }

    fn output_dim(&self) -> usize {
        self.inner.output_dim() + 1
    }

    fn residual(&self, w: &[T]) -> Result<Vec<T>> {
        let mut r = self.inner.residual(w)?;
        let d: Vec<T> = w.iter().zip(self.pred).map(|(a, b)| *a - *b).collect();
        r.push(dot(self.tangent, &d));
        Ok(r)
    }

    fn jacobian(&self, w: &[T]) -> Result<Matrix<T>> {
        let j = self.inner.jacobian(w)?;
        Ok(j.vstack(&Matrix::from_rows(&[self.tangent.to_vec()])))
    }
}

/// Unit null vector of an `(m-1) x m` Jacobian, or `None` if its rank is short.
pub fn null_tangent<T: Real>(jac: &Matrix<T>, eps: T) -> Option<Vec<T>> {
    let m = jac.cols();
    let svd = jac.svd();
    let smax = svd.sigma[0];
    if !(smax > T::zero()) || (m >= 2 && svd.sigma[m - 2] <= eps * smax) {
        return None;
    }
    Some(svd.v.col(m - 1))
}

/// Solves `sys = 0` on the hyperplane through `guess` orthogonal to `normal`;
/// the corrector step of the tracer, exposed for refining features on a curve.
pub fn project_on_hyperplane<T: Real, S: System<T> + ?Sized>(sys: &S, guess: &[T], normal: &[T]) -> Result<Vec<T>> {
    let corrector = Corrector {
        inner: sys,
        tangent: normal,
        pred: guess,
    };
    newton_solve(&corrector, guess, &[])
}

fn segment_distance<T: Real>(bbox: &DomainBox<T>, p: &[T], a: &[T], b: &[T]) -> T {
    let d = bbox.diff(p, a);
    let e = bbox.diff(b, a);
    let ee = dot(&e, &e);
    let s = if ee > T::zero() {
        (dot(&d, &e) / ee).max(T::zero()).min(T::one())
    } else {
        T::zero()
    };
    let off: Vec<T> = d.iter().zip(&e).map(|(x, y)| *x - s * *y).collect();
    norm2(&off)
}

/// Traces the curve `sys = 0` through `seed` with steps of length `step`.
///
/// The seed must satisfy the system to [`SEED_TOL`]. Branches stop on leaving
/// `bbox`, on returning to the seed after at least ten points, or when
/// `max_points` points have been produced; an open curve is traced in both
/// directions and returned as one ordered chain.
pub fn continue_curve<T: Real, S: System<T> + ?Sized>(
    sys: &S,
    seed: &[T],
    step: T,
    max_points: usize,
    bbox: &DomainBox<T>,
) -> Result<Curve<T>> {
    let m = sys.input_dim();
    if m < 2 || sys.output_dim() + 1 != m {
        return Err(Error::Dimension(format!(
            "continuation needs m-1 equations in m unknowns, got {} in {m}",
            sys.output_dim()
        )));
    }
    if seed.len() != m || bbox.dim() != m {
        return Err(Error::Dimension("seed or box does not match the system".into()));
    }
    if !(step > T::zero()) {
        return Err(Error::InvalidArgument("continuation step must be positive".into()));
    }
    let r0 = inf_norm(&sys.residual(seed)?);
    if !(r0 <= T::tol(SEED_TOL)) {
        return Err(Error::SeedNotOnCurve {
            residual: r0.to_f64_lossy(),
        });
    }
    let z0 = newton_solve(sys, seed, &[]).unwrap_or_else(|_| seed.to_vec());
    let eps = T::tol(super::matrix::DEFAULT_RANK_EPS);
    let tau0 = null_tangent(&sys.jacobian(&z0)?, eps).ok_or(Error::RankDeficientSeed)?;

    let fwd = branch(sys, &z0, &tau0, step, max_points, bbox)?;
    if fwd.2 == Termination::Closed {
        return Ok(Curve {
            points: fwd.0,
            tangents: fwd.1,
            closed: true,
            termination: vec![Termination::Closed],
        });
    }
    let remaining = max_points.saturating_sub(fwd.0.len()) + 1;
    let back_dir: Vec<T> = tau0.iter().map(|v| -*v).collect();
    let back = if remaining > 1 {
        branch(sys, &z0, &back_dir, step, remaining, bbox)?
    } else {
        (vec![z0.clone()], vec![back_dir], Termination::MaxPoints)
    };
    let (bp, bt, bterm) = back;
    let mut points: Vec<Vec<T>> = bp.into_iter().skip(1).rev().collect();
    let mut tangents: Vec<Vec<T>> = bt
        .into_iter()
        .skip(1)
        .rev()
        .map(|t| t.iter().map(|v| -*v).collect())
        .collect();
    points.extend(fwd.0);
    tangents.extend(fwd.1);
    Ok(Curve {
        points,
        tangents,
        closed: false,
        termination: vec![fwd.2, bterm],
    })
}

type Branch<T> = (Vec<Vec<T>>, Vec<Vec<T>>, Termination);

fn branch<T: Real, S: System<T> + ?Sized>(
    sys: &S,
    z0: &[T],
    tau0: &[T],
    step: T,
    budget: usize,
    bbox: &DomainBox<T>,
) -> Result<Branch<T>> {
    let eps = T::tol(super::matrix::DEFAULT_RANK_EPS);
    let mut points = vec![z0.to_vec()];
    let mut tangents = vec![tau0.to_vec()];
    let mut z = z0.to_vec();
    let mut tau = tau0.to_vec();
    let mut h = step;
    let min_step = step / T::from_count(1 << MAX_HALVINGS);
    let two = T::lit(2.0);
    let half = T::lit(0.5);
    while points.len() < budget {
        let pred: Vec<T> = z.iter().zip(&tau).map(|(a, b)| *a + h * *b).collect();
        let corrector = Corrector {
            inner: sys,
            tangent: &tau,
            pred: &pred,
        };
        let accepted = newton_solve(&corrector, &pred, &[]).ok().and_then(|w| {
            if norm2(&bbox.diff(&w, &z)) > two * step {
                return None;
            }
            let jac = sys.jacobian(&w).ok()?;
            let mut t = null_tangent(&jac, eps)?;
            if dot(&t, &tau) < T::zero() {
                t.iter_mut().for_each(|v| *v = -*v);
            }
            (dot(&t, &tau) > half).then_some((w, t))
        });
        let Some((w, t)) = accepted else {
            h = h * half;
            if h < min_step {
                return Ok((points, tangents, Termination::StepFailure));
            }
            continue;
        };
        if !bbox.contains(&w) {
            return Ok((points, tangents, Termination::BoxExit));
        }
        if points.len() >= MIN_CLOSURE_POINTS && segment_distance(bbox, z0, &z, &w) < step * half {
            return Ok((points, tangents, Termination::Closed));
        }
        points.push(w.clone());
        tangents.push(t.clone());
        z = w;
        tau = t;
        h = (h * two).min(step);
    }
    Ok((points, tangents, Termination::MaxPoints))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::newton::FnSystem;

    fn circle() -> FnSystem<impl Fn(&[f64]) -> Vec<f64> + Sync> {
        FnSystem::new(2, 1, |z: &[f64]| vec![z[0] * z[0] + z[1] * z[1] - 1.0])
    }

    #[test]
    fn unit_circle_closes_with_expected_point_count() {
        let sys = circle();
        let c = continue_curve(&sys, &[1.0, 0.0], 0.05, 1000, &DomainBox::unbounded(2)).unwrap();
        assert!(c.closed);
        assert!((c.points.len() as i64 - 126).abs() <= 2, "{}", c.points.len());
        for p in &c.points {
            assert!((p[0] * p[0] + p[1] * p[1] - 1.0).abs() < 1e-8);
        }
        for w in c.points.windows(2) {
            assert!(crate::real::dist(&w[0], &w[1]) <= 0.1);
        }
    }

    #[test]
    fn line_is_traced_both_ways_until_the_box() {
        let sys = FnSystem::new(2, 1, |z: &[f64]| vec![z[0]]);
        let bbox = DomainBox::cube(2, -1.0, 1.0);
        let c = continue_curve(&sys, &[0.0, 0.0], 0.1, 1000, &bbox).unwrap();
        assert!(!c.closed);
        assert_eq!(c.termination, vec![Termination::BoxExit, Termination::BoxExit]);
        assert_eq!(c.points.len(), 21);
        assert!(c.points.iter().all(|p| p[0] == 0.0));
        let ys: Vec<f64> = c.points.iter().map(|p| p[1]).collect();
        assert!(ys.windows(2).all(|w| (w[1] - w[0]).abs() > 0.09));
        assert!(ys.windows(2).all(|w| (w[1] - w[0]).signum() == (ys[1] - ys[0]).signum()));
    }

    #[test]
    fn seed_off_curve_is_rejected() {
        let sys = circle();
        assert!(matches!(
            continue_curve(&sys, &[2.0, 0.0], 0.05, 100, &DomainBox::unbounded(2)),
            Err(Error::SeedNotOnCurve { .. })
        ));
    }

    #[test]
    fn rank_deficient_seed_is_rejected() {
        let sys = FnSystem::new(2, 1, |z: &[f64]| vec![z[0] * z[0] - z[1] * z[1]]);
        assert!(matches!(
            continue_curve(&sys, &[0.0, 0.0], 0.05, 100, &DomainBox::unbounded(2)),
            Err(Error::RankDeficientSeed)
        ));
    }

    #[test]
    fn periodic_axis_closure() {
        // x = cos(theta) traced over a periodic theta axis
        let sys = FnSystem::new(2, 1, |z: &[f64]| vec![z[1] - z[0].cos()]);
        let bbox = DomainBox::new(vec![0.0, -2.0], vec![std::f64::consts::TAU, 2.0])
            .unwrap()
            .with_periodic(0);
        let c = continue_curve(&sys, &[0.0, 1.0], 0.05, 2000, &bbox).unwrap();
        assert!(c.closed);
    }

    #[test]
    fn max_points_is_respected() {
        let sys = circle();
        let c = continue_curve(&sys, &[1.0, 0.0], 0.05, 30, &DomainBox::unbounded(2)).unwrap();
        assert!(c.points.len() <= 30);
        assert!(!c.closed);
    }
}
