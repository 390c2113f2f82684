//! Momentary fronts, the big front, and the caustic, Maxwell and delta
//! components of the discriminant.
//!
//! Curves are traced in the ambient `(q, x)` space and projected to `x`.
//! When `n > 2` the coordinates `x3..xn` are held at the seed's values, so
//! every traced curve is a planar slice of the front or caustic.

pub mod polyline;
pub mod seeding;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::genfam::{solve_critical_set, tangent_basis, GeneratingFamily, GraphLikeFamily, MEMBERSHIP_TOL};
use crate::numcore::continuation::{continue_curve, null_tangent, project_on_hyperplane, Curve};
use crate::numcore::field::FD_STEP;
use crate::numcore::grid::{Grid, Range};
use crate::numcore::matrix::{Matrix, DEFAULT_RANK_EPS};
use crate::numcore::newton::{newton_polish, newton_solve, System};
use crate::real::{dist, dot, inf_norm, norm2, Real};

/// Minimum separation of the two critical points of a Maxwell pair.
pub const MAXWELL_SEPARATION: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceOptions<T> {
    /// Arclength step in `(q, x)` space.
    pub step: T,
    /// Point budget per traced curve.
    pub max_points: usize,
}

impl<T: Real> Default for TraceOptions<T> {
    fn default() -> Self {
        Self {
            step: T::lit(0.02),
            max_points: 20_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FrontPoint<T> {
    pub x: Vec<T>,
    pub q: Vec<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FrontCurve<T> {
    pub t: T,
    pub points: Vec<FrontPoint<T>>,
    pub closed: bool,
}

impl<T: Real> FrontCurve<T> {
    pub fn xs(&self) -> Vec<Vec<T>> {
        self.points.iter().map(|p| p.x.clone()).collect()
    }

    /// The first two space coordinates of every point.
    pub fn planar(&self) -> Vec<Vec<T>> {
        self.points.iter().map(|p| p.x[..2].to_vec()).collect()
    }
}

/// A seed that could not be used, with the reason.
#[derive(Clone, Debug, PartialEq)]
pub struct SeedFailure<T> {
    pub t: Option<T>,
    pub seed: usize,
    pub error: Error,
}

#[derive(Clone, Debug)]
pub struct FrontSet<T> {
    pub curves: Vec<FrontCurve<T>>,
    pub failures: Vec<SeedFailure<T>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CausticPoint<T> {
    pub x: Vec<T>,
    pub q: Vec<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CausticCurve<T> {
    pub points: Vec<CausticPoint<T>>,
    pub closed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MaxwellPoint<T> {
    pub x: Vec<T>,
    pub q: Vec<T>,
    pub q_prime: Vec<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeltaPoint<T> {
    pub x: Vec<T>,
    pub t: T,
    pub q: Vec<T>,
}

#[derive(Clone, Debug, Default)]
pub struct DiscriminantDecomposition<T> {
    pub caustic: Vec<CausticCurve<T>>,
    pub maxwell: Vec<MaxwellPoint<T>>,
    pub delta: Vec<DeltaPoint<T>>,
}

impl<T: Real> DiscriminantDecomposition<T> {
    pub fn caustic_points(&self) -> Vec<CausticPoint<T>> {
        self.caustic.iter().flat_map(|c| c.points.iter().cloned()).collect()
    }
}

/// Holds `x3..xn` at fixed values; contributes one equation per held coordinate.
#[derive(Clone, Debug)]
struct Slice<T> {
    offset: usize,
    values: Vec<T>,
}

impl<T: Real> Slice<T> {
    fn from_seed(fam: &GeneratingFamily<T>, seed: &[T]) -> Self {
        let offset = fam.k() + 2;
        Self {
            offset,
            values: seed[offset.min(seed.len())..].to_vec(),
        }
    }

    fn residual(&self, z: &[T], out: &mut Vec<T>) {
        out.extend(self.values.iter().enumerate().map(|(i, c)| z[self.offset + i] - *c));
    }

    fn jacobian(&self, m: usize) -> Matrix<T> {
        Matrix::from_fn(self.values.len(), m, |i, j| if j == self.offset + i { T::one() } else { T::zero() })
    }
}

/// `(F - t, dF/dq) = 0`, optionally sliced.
struct LevelSystem<'a, T: Real> {
    fam: &'a GeneratingFamily<T>,
    t: T,
    slice: Slice<T>,
}

impl<T: Real> System<T> for LevelSystem<'_, T> {
    fn input_dim(&self) -> usize {
        self.fam.k() + self.fam.n()
    }

    fn output_dim(&self) -> usize {
        self.fam.k() + 1 + self.slice.values.len()
    }

    fn residual(&self, z: &[T]) -> Result<Vec<T>> {
        let mut r = vec![self.fam.value(z)? - self.t];
        r.extend(self.fam.dq(z)?);
        self.slice.residual(z, &mut r);
        Ok(r)
    }

    fn jacobian(&self, z: &[T]) -> Result<Matrix<T>> {
        let top = Matrix::from_rows(&[self.fam.gradient(z)?]);
        Ok(top
            .vstack(&self.fam.dq_jacobian(z)?)
            .vstack(&self.slice.jacobian(self.input_dim())))
    }
}

fn hqq_det<T: Real>(fam: &GeneratingFamily<T>, z: &[T]) -> Result<T> {
    let k: Vec<usize> = (0..fam.k()).collect();
    Ok(fam.hessian(z)?.select_rows(&k).select_columns(&k).determinant())
}

/// `(dF/dq, det d2F/dq2) = 0`, optionally sliced.
struct CausticSystem<'a, T: Real> {
    fam: &'a GeneratingFamily<T>,
    slice: Slice<T>,
}

impl<T: Real> System<T> for CausticSystem<'_, T> {
    fn input_dim(&self) -> usize {
        self.fam.k() + self.fam.n()
    }

    fn output_dim(&self) -> usize {
        self.fam.k() + 1 + self.slice.values.len()
    }

    fn residual(&self, z: &[T]) -> Result<Vec<T>> {
        let mut r = self.fam.dq(z)?;
        r.push(hqq_det(self.fam, z)?);
        self.slice.residual(z, &mut r);
        Ok(r)
    }

    fn jacobian(&self, z: &[T]) -> Result<Matrix<T>> {
        let m = self.input_dim();
        let mut det_row = vec![T::zero(); m];
        let mut w = z.to_vec();
        for j in 0..m {
            let h = T::lit(FD_STEP) * z[j].abs().max(T::one());
            w[j] = z[j] + h;
            let plus = hqq_det(self.fam, &w)?;
            w[j] = z[j] - h;
            let minus = hqq_det(self.fam, &w)?;
            w[j] = z[j];
            det_row[j] = (plus - minus) / (h + h);
        }
        Ok(self
            .fam
            .dq_jacobian(z)?
            .vstack(&Matrix::from_rows(&[det_row]))
            .vstack(&self.slice.jacobian(m)))
    }
}

fn check_seed<T: Real>(fam: &GeneratingFamily<T>, seed: &[T]) -> Result<()> {
    if fam.n() < 2 {
        return Err(Error::Dimension("front and caustic tracing need n >= 2".into()));
    }
    if seed.len() != fam.k() + fam.n() {
        return Err(Error::Dimension(format!(
            "seed of length {} for a family on R^{}",
            seed.len(),
            fam.k() + fam.n()
        )));
    }
    Ok(())
}

/// Traces one curve per seed, skipping seeds that land on a curve already traced.
fn trace_all<T, S, B>(
    fam: &GeneratingFamily<T>,
    seeds: &[Vec<T>],
    opts: &TraceOptions<T>,
    build: B,
) -> (Vec<Curve<T>>, Vec<(usize, Error)>)
where
    T: Real,
    S: System<T>,
    B: Fn(Slice<T>) -> S,
{
    let mut curves: Vec<Curve<T>> = Vec::new();
    let mut failures = Vec::new();
    for (i, seed) in seeds.iter().enumerate() {
        if let Err(e) = check_seed(fam, seed) {
            failures.push((i, e));
            continue;
        }
        let slice = Slice::from_seed(fam, seed);
        let sys = build(slice);
        let start = match newton_solve(&sys, seed, &[]) {
            Ok(z) if inf_norm(&sys.residual(&z).unwrap_or_default()) < T::tol(MEMBERSHIP_TOL) => z,
            Ok(z) => {
                let residual = inf_norm(&sys.residual(&z).unwrap_or_default()).to_f64_lossy();
                failures.push((i, Error::SeedNotOnCurve { residual }));
                continue;
            }
            Err(_) => {
                let residual = sys.residual(seed).map(|r| inf_norm(&r).to_f64_lossy()).unwrap_or(f64::INFINITY);
                failures.push((i, Error::SeedNotOnCurve { residual }));
                continue;
            }
        };
        let seen = curves
            .iter()
            .any(|c| c.points.iter().any(|p| fam.domain().distance(p, &start) < opts.step));
        if seen {
            continue;
        }
        match continue_curve(&sys, &start, opts.step, opts.max_points, fam.domain()) {
            Ok(mut c) => {
                for p in &mut c.points {
                    *p = newton_polish(&sys, p, 3);
                }
                curves.push(c)
            }
            Err(e) => failures.push((i, e)),
        }
    }
    (merge_chains(curves, opts.step * T::lit(1.5)), failures)
}

/// Joins open chains whose endpoints meet.
fn merge_chains<T: Real>(mut curves: Vec<Curve<T>>, radius: T) -> Vec<Curve<T>> {
    let mut merged = true;
    while merged {
        merged = false;
        'outer: for i in 0..curves.len() {
            for j in 0..curves.len() {
                if i == j || curves[i].closed || curves[j].closed {
                    continue;
                }
                let (a_end, b_start) = (curves[i].points.last(), curves[j].points.first());
                if let (Some(a), Some(b)) = (a_end, b_start) {
                    if dist(a, b) < radius {
                        let tail = curves.remove(j);
                        let i = if j < i { i - 1 } else { i };
                        curves[i].points.extend(tail.points);
                        curves[i].tangents.extend(tail.tangents);
                        merged = true;
                        break 'outer;
                    }
                }
            }
        }
    }
    curves
}

fn to_front<T: Real>(fam: &GeneratingFamily<T>, t: T, c: Curve<T>) -> FrontCurve<T> {
    let k = fam.k();
    FrontCurve {
        t,
        points: c
            .points
            .into_iter()
            .map(|z| FrontPoint {
                x: z[k..].to_vec(),
                q: z[..k].to_vec(),
            })
            .collect(),
        closed: c.closed,
    }
}

/// The momentary front `W_t`: the level `F = t` of the graph-like front.
///
/// Seeds are points `(q, x)`; each is first projected onto the level set.
pub fn momentary_front<T: Real>(
    gl: &GraphLikeFamily<T>,
    t: T,
    seeds: &[Vec<T>],
    opts: &TraceOptions<T>,
) -> Result<FrontSet<T>> {
    if !gl.admits_time(t) {
        return Err(Error::InvalidArgument(format!(
            "t = {} is outside the family's time interval",
            t.to_f64_lossy()
        )));
    }
    let fam = gl.base();
    let (curves, failures) = trace_all(fam, seeds, opts, |slice| LevelSystem { fam, t, slice });
    Ok(FrontSet {
        curves: curves.into_iter().map(|c| to_front(fam, t, c)).collect(),
        failures: failures
            .into_iter()
            .map(|(seed, error)| SeedFailure { t: Some(t), seed, error })
            .collect(),
    })
}

/// Momentary fronts stacked over `t_range`; `seeds(t)` supplies the seeds of each level.
/// Levels outside the family's time interval are skipped.
pub fn big_front<T, S>(gl: &GraphLikeFamily<T>, t_range: &Range<T>, seeds: S, opts: &TraceOptions<T>) -> Result<FrontSet<T>>
where
    T: Real,
    S: Fn(T) -> Vec<Vec<T>> + Sync,
{
    let levels: Vec<T> = t_range.values().into_iter().filter(|t| gl.admits_time(*t)).collect();
    let sets = levels
        .par_iter()
        .map(|&t| momentary_front(gl, t, &seeds(t), opts))
        .collect::<Result<Vec<_>>>()?;
    let mut out = FrontSet {
        curves: Vec::new(),
        failures: Vec::new(),
    };
    for s in sets {
        out.curves.extend(s.curves);
        out.failures.extend(s.failures);
    }
    Ok(out)
}

/// Traces the caustic `dF/dq = 0, det d2F/dq2 = 0` through each seed `(q, x)`.
pub fn caustic<T: Real>(
    fam: &GeneratingFamily<T>,
    seeds: &[Vec<T>],
    opts: &TraceOptions<T>,
) -> Result<(Vec<CausticCurve<T>>, Vec<SeedFailure<T>>)> {
    let (curves, failures) = trace_all(fam, seeds, opts, |slice| CausticSystem { fam, slice });
    let k = fam.k();
    let curves = curves
        .into_iter()
        .map(|c| CausticCurve {
            points: c
                .points
                .into_iter()
                .map(|z| CausticPoint {
                    x: z[k..].to_vec(),
                    q: z[..k].to_vec(),
                })
                .collect(),
            closed: c.closed,
        })
        .collect();
    let failures = failures
        .into_iter()
        .map(|(seed, error)| SeedFailure { t: None, seed, error })
        .collect();
    Ok((curves, failures))
}

/// Two critical points of one fibre with equal critical values.
struct PairSystem<'a, T: Real> {
    fam: &'a GeneratingFamily<T>,
}

impl<T: Real> PairSystem<'_, T> {
    fn split(&self, w: &[T]) -> (Vec<T>, Vec<T>) {
        let k = self.fam.k();
        let x = &w[2 * k..];
        (self.fam.join(&w[..k], x), self.fam.join(&w[k..2 * k], x))
    }
}

impl<T: Real> System<T> for PairSystem<'_, T> {
    fn input_dim(&self) -> usize {
        2 * self.fam.k() + self.fam.n()
    }

    fn output_dim(&self) -> usize {
        2 * self.fam.k() + 1
    }

    fn residual(&self, w: &[T]) -> Result<Vec<T>> {
        let (a, b) = self.split(w);
        let mut r = self.fam.dq(&a)?;
        r.extend(self.fam.dq(&b)?);
        r.push(self.fam.value(&a)? - self.fam.value(&b)?);
        Ok(r)
    }

    fn jacobian(&self, w: &[T]) -> Result<Matrix<T>> {
        let (k, n) = (self.fam.k(), self.fam.n());
        let (a, b) = self.split(w);
        let (ha, hb) = (self.fam.hessian(&a)?, self.fam.hessian(&b)?);
        let (ga, gb) = (self.fam.gradient(&a)?, self.fam.gradient(&b)?);
        let mut j = Matrix::zeros(2 * k + 1, 2 * k + n);
        for i in 0..k {
            for c in 0..k {
                j[(i, c)] = ha[(i, c)];
                j[(k + i, k + c)] = hb[(i, c)];
            }
            for c in 0..n {
                j[(i, 2 * k + c)] = ha[(i, k + c)];
                j[(k + i, 2 * k + c)] = hb[(i, k + c)];
            }
        }
        for c in 0..k {
            j[(2 * k, c)] = ga[c];
            j[(2 * k, k + c)] = -gb[c];
        }
        for c in 0..n {
            j[(2 * k, 2 * k + c)] = ga[k + c] - gb[k + c];
        }
        Ok(j)
    }
}

/// Maxwell set: fibres with two distinct critical points of equal value.
///
/// Critical points are found on the nodes of `x_grid`; pairs whose values
/// could plausibly coincide within one grid cell are refined by Newton on
/// the pairing equations and kept when the pair stays distinct.
pub fn maxwell_set<T: Real>(fam: &GeneratingFamily<T>, q_seeds: &[Vec<T>], x_grid: &Grid<T>) -> Result<Vec<MaxwellPoint<T>>> {
    let (k, n) = (fam.k(), fam.n());
    if x_grid.dim() != n {
        return Err(Error::Dimension("grid dimension differs from n".into()));
    }
    let nodes = x_grid.points();
    let reach = x_grid.cell_diagonal();
    let sep = T::lit(MAXWELL_SEPARATION);
    let sys = PairSystem { fam };
    let per_node: Vec<Vec<MaxwellPoint<T>>> = nodes
        .par_iter()
        .map(|x| {
            let Ok(cs) = solve_critical_set(fam, std::slice::from_ref(x), q_seeds) else {
                return Vec::new();
            };
            let pts = cs.points;
            let data: Vec<Option<(T, Vec<T>)>> = pts
                .iter()
                .map(|cp| {
                    let z = cp.point();
                    Some((fam.value(&z).ok()?, fam.dx(&z).ok()?))
                })
                .collect();
            let mut found = Vec::new();
            for i in 0..pts.len() {
                for j in i + 1..pts.len() {
                    let (Some((fi, pi)), Some((fj, pj))) = (&data[i], &data[j]) else {
                        continue;
                    };
                    let dp: Vec<T> = pi.iter().zip(pj).map(|(a, b)| *a - *b).collect();
                    let gap = (*fi - *fj).abs();
                    if !(gap <= reach * norm2(&dp)) {
                        continue;
                    }
                    let mut w = pts[i].q.clone();
                    w.extend_from_slice(&pts[j].q);
                    w.extend_from_slice(x);
                    let Ok(w) = newton_solve(&sys, &w, &[]) else {
                        continue;
                    };
                    let (q, q_prime, xr) = (w[..k].to_vec(), w[k..2 * k].to_vec(), w[2 * k..].to_vec());
                    let za = fam.join(&q, &xr);
                    let zb = fam.join(&q_prime, &xr);
                    let ok = fam.domain().distance(&za, &zb) >= sep
                        && fam.domain().contains(&za)
                        && fam.domain().contains(&zb)
                        && sys
                            .residual(&w)
                            .map(|r| inf_norm(&r) < T::tol(MEMBERSHIP_TOL))
                            .unwrap_or(false);
                    if ok {
                        found.push(MaxwellPoint { x: xr, q, q_prime });
                    }
                }
            }
            found
        })
        .collect();
    Ok(per_node.into_iter().flatten().collect())
}

/// Points of traced fronts where the big front is smooth but the level set's
/// projection to `x` is singular. `tol` bounds both the smoothness margin and
/// the singularity test.
pub fn delta_set<T: Real>(gl: &GraphLikeFamily<T>, fronts: &[FrontCurve<T>], tol: T) -> Result<Vec<DeltaPoint<T>>> {
    let fam = gl.base();
    let (k, n) = (fam.k(), fam.n());
    let eps = T::tol(DEFAULT_RANK_EPS);
    let x_rows: Vec<usize> = (k..k + n).collect();
    let mut out = Vec::new();
    for curve in fronts {
        for pt in &curve.points {
            let z = fam.join(&pt.q, &pt.x);
            let Ok((b, _)) = tangent_basis(fam, &z) else {
                continue;
            };
            let p = fam.dx(&z)?;
            let space = b.select_rows(&x_rows);
            let front = space.vstack(&Matrix::from_rows(&[fam.gradient(&z)?]).matmul(&b));
            let smooth_margin = tol * (T::one() + dot(&p, &p)).sqrt();
            let front_min = *front.singular_values().last().expect("n >= 1");
            if !(front_min > smooth_margin) {
                continue;
            }
            let level = Matrix::from_rows(&[fam.gradient(&z)?]).vstack(&fam.dq_jacobian(&z)?);
            let tangent = level.null_space(eps);
            if tangent.cols() + 1 != n {
                continue;
            }
            let proj = tangent.select_rows(&x_rows);
            let proj_min = if n == 2 {
                norm2(&proj.col(0)) / norm2(&tangent.col(0))
            } else {
                *proj.singular_values().last().expect("n >= 2")
            };
            if proj_min < tol {
                out.push(DeltaPoint {
                    x: pt.x.clone(),
                    t: curve.t,
                    q: pt.q.clone(),
                });
            }
        }
    }
    Ok(out)
}

/// Seeds and grids for a full discriminant computation.
#[derive(Clone, Debug)]
pub struct DiscriminantInput<'a, T> {
    pub caustic_seeds: &'a [Vec<T>],
    pub q_seeds: &'a [Vec<T>],
    pub x_grid: &'a Grid<T>,
    /// Fronts on which the delta component is searched.
    pub fronts: &'a [FrontCurve<T>],
    pub delta_tol: T,
    pub trace: TraceOptions<T>,
}

/// Caustic and Maxwell components of a graph-like family; its delta component
/// must be empty and a non-empty one is reported as an error.
pub fn discriminant<T: Real>(gl: &GraphLikeFamily<T>, input: &DiscriminantInput<'_, T>) -> Result<DiscriminantDecomposition<T>> {
    let fam = gl.base();
    let delta = delta_set(gl, input.fronts, input.delta_tol)?;
    if !delta.is_empty() {
        return Err(Error::DeltaNonEmptyForGraphLike { count: delta.len() });
    }
    let (caustic, _) = caustic(fam, input.caustic_seeds, &input.trace)?;
    let maxwell = maxwell_set(fam, input.q_seeds, input.x_grid)?;
    Ok(DiscriminantDecomposition {
        caustic,
        maxwell,
        delta,
    })
}

/// Cusps of a planar front: tangent reversals of the `x`-projection, each
/// refined along the traced level curve to where the projected tangent vanishes.
pub fn front_cusps<T: Real>(gl: &GraphLikeFamily<T>, curve: &FrontCurve<T>) -> Result<Vec<FrontPoint<T>>> {
    let fam = gl.base();
    let pts: Vec<Vec<T>> = curve.points.iter().map(|p| fam.join(&p.q, &p.x)).collect();
    let planar = curve.planar();
    let slice = match pts.first() {
        Some(z) => Slice::from_seed(fam, z),
        None => return Ok(Vec::new()),
    };
    let sys = LevelSystem { fam, t: curve.t, slice };
    let k = fam.k();
    let m = pts.len();
    let mut out = Vec::new();
    for v in polyline::tangent_reversals(&planar, curve.closed) {
        let prev = (v + m - 1) % m;
        let next = (v + 1) % m;
        let d: Vec<T> = planar[v].iter().zip(&planar[prev]).map(|(a, b)| *a - *b).collect();
        let z = refine_sign_change(&sys, &pts[prev], &pts[next], |tau| dot(&tau[k..k + 2], &d))
            .unwrap_or_else(|| pts[v].clone());
        out.push(FrontPoint {
            x: z[k..].to_vec(),
            q: z[..k].to_vec(),
        });
    }
    Ok(out)
}

/// Bisection between two curve points `a` and `b` on which `g(tangent)` changes
/// sign; the tangent is oriented along `b - a`.
pub(crate) fn refine_sign_change<T: Real, S: System<T>>(
    sys: &S,
    a: &[T],
    b: &[T],
    g: impl Fn(&[T]) -> T,
) -> Option<Vec<T>> {
    let chord: Vec<T> = b.iter().zip(a).map(|(x, y)| *x - *y).collect();
    let eps = T::tol(DEFAULT_RANK_EPS);
    let eval = |s: T| -> Option<(Vec<T>, T)> {
        let guess: Vec<T> = a.iter().zip(&chord).map(|(x, c)| *x + s * *c).collect();
        let w = project_on_hyperplane(sys, &guess, &chord).ok()?;
        let mut tau = null_tangent(&sys.jacobian(&w).ok()?, eps)?;
        if dot(&tau, &chord) < T::zero() {
            tau.iter_mut().for_each(|v| *v = -*v);
        }
        let val = g(&tau);
        Some((w, val))
    };
    let (mut lo, mut hi) = (T::zero(), T::one());
    let (_, glo) = eval(lo)?;
    let (mut best, ghi) = eval(hi)?;
    if glo.signum() == ghi.signum() {
        return None;
    }
    let half = T::lit(0.5);
    for _ in 0..50 {
        let mid = (lo + hi) * half;
        let (w, gm) = eval(mid)?;
        best = w;
        if gm.signum() == glo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(best)
}

/// Crossings of the `x`-projections of the curves making up one momentary
/// front, within each curve and between pairs of curves.
pub fn front_self_intersections<T: Real>(curves: &[FrontCurve<T>]) -> Vec<Vec<T>> {
    let planar: Vec<Vec<Vec<T>>> = curves.iter().map(FrontCurve::planar).collect();
    let mut out = Vec::new();
    for (i, c) in curves.iter().enumerate() {
        out.extend(polyline::self_intersections(&planar[i], c.closed).into_iter().map(|c| c.point));
        for other in &planar[i + 1..] {
            out.extend(polyline::crossings_between(&planar[i], other));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genfam::catalog;
    use crate::numcore::grid::Linspace;

    fn cusp_gl() -> GraphLikeFamily<f64> {
        GraphLikeFamily::new(catalog::cusp().family)
    }

    #[test]
    fn fold_front_is_a_smooth_parabola() {
        let gl = GraphLikeFamily::new(catalog::fold::<f64>().family);
        let set = momentary_front(&gl, 0.0, &[vec![0.0, 0.0, 0.0]], &TraceOptions::default()).unwrap();
        assert_eq!(set.curves.len(), 1);
        let c = &set.curves[0];
        assert!(c.points.len() > 100);
        for p in &c.points {
            // q = -x1/2 and F = 0 give x2 = x1^2 / 4
            assert!((p.x[1] - p.x[0] * p.x[0] / 4.0).abs() < 1e-8);
        }
        assert!(front_cusps(&gl, c).unwrap().is_empty());
    }

    #[test]
    fn cusp_caustic_satisfies_the_discriminant_equation() {
        let fam = catalog::cusp::<f64>().family;
        let (curves, failures) = caustic(&fam, &[vec![1.0, -6.0, 8.0]], &TraceOptions::default()).unwrap();
        assert!(failures.is_empty());
        let pts: Vec<_> = curves.iter().flat_map(|c| c.points.iter()).collect();
        assert!(pts.len() >= 200);
        for p in pts {
            let (x1, x2) = (p.x[0], p.x[1]);
            assert!((8.0 * x1.powi(3) + 27.0 * x2 * x2).abs() < 1e-6 * x1.abs().powi(3).max(1.0));
        }
    }

    #[test]
    fn fold_has_no_caustic_and_no_maxwell_set() {
        let c = catalog::fold::<f64>();
        let (curves, failures) = caustic(&c.family, &[vec![0.0, 0.0, 0.0]], &TraceOptions::default()).unwrap();
        assert!(curves.is_empty());
        assert!(matches!(failures[0].error, Error::SeedNotOnCurve { .. }));
        let grid = Grid::uniform(2, -2.0, 2.0, 9);
        assert!(maxwell_set(&c.family, &c.q_seeds, &grid).unwrap().is_empty());
    }

    #[test]
    fn cusp_maxwell_set_is_the_negative_half_axis() {
        let c = catalog::cusp::<f64>();
        let grid = Grid::new(vec![Linspace::new(-3.0, 3.0, 13), Linspace::new(-1.05, 1.05, 8)]);
        let m = maxwell_set(&c.family, &c.q_seeds, &grid).unwrap();
        assert!(m.len() >= 5);
        for p in &m {
            assert!(p.x[1].abs() < 1e-8 && p.x[0] < 0.0, "{:?}", p.x);
            assert!((p.q[0] + p.q_prime[0]).abs() < 1e-6);
        }
    }

    #[test]
    fn cusp_front_cusps_lie_on_the_caustic() {
        let gl = cusp_gl();
        // F = t meets the caustic where 3 q^4 = t, so t = 1 gives one cusp per branch
        let seeds: Vec<Vec<f64>> = vec![vec![0.76, -2.31, 3.51], vec![-0.76, -2.31, -3.51]];
        let set = momentary_front(&gl, 1.0, &seeds, &TraceOptions::default()).unwrap();
        assert_eq!(set.curves.len(), 2);
        let cusps: Vec<_> = set
            .curves
            .iter()
            .flat_map(|c| front_cusps(&gl, c).unwrap())
            .collect();
        assert_eq!(cusps.len(), 2);
        for c in &cusps {
            let (x1, x2) = (c.x[0], c.x[1]);
            assert!((8.0 * x1.powi(3) + 27.0 * x2 * x2).abs() < 1e-6 * x1.abs().powi(3).max(1.0));
            assert!((3.0 * c.q[0].powi(4) - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn cusp_front_crossing_lies_on_the_maxwell_axis() {
        let gl = cusp_gl();
        let seeds: Vec<Vec<f64>> = vec![vec![1.0, -2.0, 0.0], vec![-1.0, -2.0, 0.0]];
        let set = momentary_front(&gl, -1.0, &seeds, &TraceOptions::default()).unwrap();
        assert_eq!(set.curves.len(), 2);
        let crossings = front_self_intersections(&set.curves);
        assert_eq!(crossings.len(), 1);
        assert!(crossings[0][1].abs() < 1e-3 && (crossings[0][0] + 2.0).abs() < 1e-3);
    }

    #[test]
    fn graph_like_fronts_have_empty_delta() {
        let gl = cusp_gl();
        let set = momentary_front(&gl, -1.0, &[vec![1.0, -2.0, 0.0]], &TraceOptions::default()).unwrap();
        assert!(delta_set(&gl, &set.curves, 1e-6).unwrap().is_empty());
    }

    #[test]
    fn wrong_seed_length_is_reported() {
        let gl = cusp_gl();
        let set = momentary_front(&gl, 0.0, &[vec![0.0, 0.0]], &TraceOptions::default()).unwrap();
        assert!(set.curves.is_empty());
        assert!(matches!(set.failures[0].error, Error::Dimension(_)));
    }
}
