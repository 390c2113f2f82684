//! Evolutes, parallels and the distance-squared family of a curve or surface.

pub mod surface;

use std::sync::Arc;

pub use surface::{Chart, CurvatureData, Jet, ParametricHypersurface};

use crate::error::{Error, Result};
use crate::fronts::polyline::tangent_reversals;
use crate::genfam::{GeneratingFamily, GraphLikeFamily};
use crate::numcore::field::{DomainBox, ScalarField, FD_STEP};
use crate::numcore::matrix::Matrix;
use crate::numcore::newton::{newton_solve, FnSystem, System};
use crate::real::{dot, inf_norm, Real};

/// Focal points `X - n / kappa_i` of one curvature branch (`0` for curves;
/// `0` or `1` for surfaces, in ascending curvature order).
#[derive(Clone, Debug, PartialEq)]
pub struct Evolute<T> {
    pub points: Vec<Vec<T>>,
    pub params: Vec<Vec<T>>,
    /// Parameters skipped because the curvature vanished there.
    pub skipped: usize,
    pub closed: bool,
}

/// The offset `X + r n` over a parameter sample.
#[derive(Clone, Debug, PartialEq)]
pub struct Parallel<T> {
    pub r: T,
    pub points: Vec<Vec<T>>,
    pub params: Vec<Vec<T>>,
    pub closed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TangencyReport<T> {
    pub tangency_points: Vec<Vec<T>>,
    pub multiple: bool,
}

/// Curvatures smaller than this in magnitude have no focal point.
const FLAT_KAPPA: f64 = 1e-12;

fn combine<T: Real>(x: &[T], n: &[T], s: T) -> Vec<T> {
    x.iter().zip(n).map(|(a, b)| *a + s * *b).collect()
}

/// `count` parameters spread over a one-parameter domain; a periodic domain
/// omits its right end.
pub fn curve_params<T: Real>(surface: &ParametricHypersurface<T>, count: usize) -> Vec<Vec<T>> {
    let dom = surface.u_domain();
    let (lo, hi) = (dom.lo()[0], dom.hi()[0]);
    let periodic = dom.is_periodic(0);
    let denom = if periodic { count } else { count.saturating_sub(1).max(1) };
    (0..count)
        .map(|i| vec![lo + (hi - lo) * T::from_count(i) / T::from_count(denom)])
        .collect()
}

pub fn evolute<T: Real>(surface: &ParametricHypersurface<T>, params: &[Vec<T>], branch: usize) -> Result<Evolute<T>> {
    if branch >= surface.param_dim() {
        return Err(Error::InvalidArgument(format!("no curvature branch {branch}")));
    }
    let mut out = Evolute {
        points: Vec::new(),
        params: Vec::new(),
        skipped: 0,
        closed: surface.is_closed_curve(),
    };
    for u in params {
        let k = surface.curvature(u)?.kappa[branch];
        if k.abs() < T::lit(FLAT_KAPPA) {
            out.skipped += 1;
            continue;
        }
        let jet = surface.jet(u)?;
        let n = surface.normal_of(&jet)?;
        out.points.push(combine(&jet.x, &n, -T::one() / k));
        out.params.push(u.clone());
    }
    Ok(out)
}

fn unwrap_after<T: Real>(surface: &ParametricHypersurface<T>, a: T, b: T) -> T {
    match surface.u_domain().period(0) {
        Some(p) if b < a => b + p,
        _ => b,
    }
}

fn bisect<T: Real>(mut lo: T, mut hi: T, f: impl Fn(T) -> Result<T>) -> Result<Option<T>> {
    let flo = f(lo)?;
    let fhi = f(hi)?;
    if flo == T::zero() {
        return Ok(Some(lo));
    }
    if flo.signum() == fhi.signum() {
        return Ok(None);
    }
    let half = T::lit(0.5);
    for _ in 0..60 {
        let mid = (lo + hi) * half;
        let fm = f(mid)?;
        if fm.signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some((lo + hi) * half))
}

fn kappa_slope<T: Real>(surface: &ParametricHypersurface<T>, u: T) -> Result<T> {
    let h = T::lit(FD_STEP) * u.abs().max(T::one());
    let kp = surface.curvature(&[u + h])?.kappa[0];
    let km = surface.curvature(&[u - h])?.kappa[0];
    Ok((kp - km) / (h + h))
}

/// Cusps of a plane curve's evolute: tangent reversals of the sampled focal
/// curve, refined to the vertex where the curvature is stationary.
pub fn evolute_cusps<T: Real>(surface: &ParametricHypersurface<T>, params: &[Vec<T>]) -> Result<Vec<Vec<T>>> {
    if surface.ambient_dim() != 2 {
        return Err(Error::Dimension("evolute cusps are computed for plane curves".into()));
    }
    let ev = evolute(surface, params, 0)?;
    let m = ev.points.len();
    let mut out = Vec::new();
    for v in tangent_reversals(&ev.points, ev.closed) {
        let (a, b) = (ev.params[(v + m - 1) % m][0], ev.params[(v + 1) % m][0]);
        let b = unwrap_after(surface, a, b);
        let u = bisect(a, b, |u| kappa_slope(surface, u))?.unwrap_or(ev.params[v][0]);
        let k = surface.curvature(&[u])?.kappa[0];
        let jet = surface.jet(&[u])?;
        out.push(combine(&jet.x, &surface.normal_of(&jet)?, -T::one() / k));
    }
    Ok(out)
}

pub fn parallels<T: Real>(surface: &ParametricHypersurface<T>, r_values: &[T], params: &[Vec<T>]) -> Result<Vec<Parallel<T>>> {
    r_values
        .iter()
        .map(|&r| {
            if r == T::zero() {
                return Err(Error::InvalidArgument("parallels need r != 0".into()));
            }
            let mut points = Vec::with_capacity(params.len());
            for u in params {
                let jet = surface.jet(u)?;
                points.push(combine(&jet.x, &surface.normal_of(&jet)?, r));
            }
            Ok(Parallel {
                r,
                points,
                params: params.to_vec(),
                closed: surface.is_closed_curve(),
            })
        })
        .collect()
}

/// Cusps of a parallel of a plane curve, refined to where `1 + r kappa` vanishes.
pub fn parallel_cusps<T: Real>(surface: &ParametricHypersurface<T>, parallel: &Parallel<T>) -> Result<Vec<Vec<T>>> {
    if surface.ambient_dim() != 2 {
        return Err(Error::Dimension("parallel cusps are computed for plane curves".into()));
    }
    let m = parallel.points.len();
    let r = parallel.r;
    let mut out = Vec::new();
    for v in tangent_reversals(&parallel.points, parallel.closed) {
        let (a, b) = (parallel.params[(v + m - 1) % m][0], parallel.params[(v + 1) % m][0]);
        let b = unwrap_after(surface, a, b);
        let speed = |u: T| -> Result<T> { Ok(T::one() + r * surface.curvature(&[u])?.kappa[0]) };
        let u = bisect(a, b, speed)?.unwrap_or(parallel.params[v][0]);
        let jet = surface.jet(&[u])?;
        out.push(combine(&jet.x, &surface.normal_of(&jet)?, r));
    }
    Ok(out)
}

/// `D(u, v) = |X(u) - v|^2` with closed-form derivatives.
#[derive(Clone, Debug)]
pub struct DistanceSquared<T: Real> {
    surface: ParametricHypersurface<T>,
    domain: DomainBox<T>,
}

impl<T: Real> DistanceSquared<T> {
    pub fn new(surface: ParametricHypersurface<T>) -> Self {
        let domain = surface.u_domain().product(&DomainBox::unbounded(surface.ambient_dim()));
        Self { surface, domain }
    }

    fn parts(&self, p: &[T]) -> Option<(Jet<T>, Vec<T>)> {
        let k = self.surface.param_dim();
        let jet = self.surface.jet(&p[..k]).ok()?;
        let d: Vec<T> = jet.x.iter().zip(&p[k..]).map(|(a, b)| *a - *b).collect();
        Some((jet, d))
    }
}

impl<T: Real> ScalarField<T> for DistanceSquared<T> {
    fn arity(&self) -> usize {
        self.domain.dim()
    }

    fn domain(&self) -> &DomainBox<T> {
        &self.domain
    }

    fn value(&self, p: &[T]) -> T {
        match self.parts(p) {
            Some((_, d)) => dot(&d, &d),
            None => T::nan(),
        }
    }

    fn has_closed_form(&self) -> bool {
        true
    }

    fn closed_gradient(&self, p: &[T]) -> Option<Vec<T>> {
        let (jet, d) = self.parts(p)?;
        let two = T::lit(2.0);
        let mut g: Vec<T> = jet.d1.iter().map(|xi| two * dot(xi, &d)).collect();
        g.extend(d.iter().map(|v| -two * *v));
        Some(g)
    }

    fn closed_hessian(&self, p: &[T]) -> Option<Matrix<T>> {
        let (jet, d) = self.parts(p)?;
        let k = jet.d1.len();
        let n = d.len();
        let two = T::lit(2.0);
        Some(Matrix::from_fn(k + n, k + n, |i, j| match (i < k, j < k) {
            (true, true) => two * (dot(&jet.d2[i][j], &d) + dot(&jet.d1[i], &jet.d1[j])),
            (true, false) => -two * jet.d1[i][j - k],
            (false, true) => -two * jet.d1[j][i - k],
            (false, false) => {
                if i == j {
                    two
                } else {
                    T::zero()
                }
            }
        }))
    }
}

/// The distance-squared family of a curve or surface, and its extension
/// `D - t` restricted to `t > 0`.
pub fn distance_squared_family<T: Real>(
    surface: &ParametricHypersurface<T>,
) -> Result<(GeneratingFamily<T>, GraphLikeFamily<T>)> {
    let k = surface.param_dim();
    let n = surface.ambient_dim();
    let dom = surface.u_domain();
    let u0: Vec<T> = (0..k)
        .map(|i| {
            let (lo, hi) = (dom.lo()[i], dom.hi()[i]);
            if lo.is_finite() && hi.is_finite() {
                (lo + hi) * T::lit(0.5)
            } else {
                T::zero()
            }
        })
        .collect();
    let mut base = u0.clone();
    base.extend(surface.point(&u0)?);
    let fam = GeneratingFamily::new(k, n, Arc::new(DistanceSquared::new(surface.clone())))?.with_base_point(base)?;
    let gl = GraphLikeFamily::new(fam.clone()).with_time_bounds(T::zero(), T::infinity());
    Ok((fam, gl))
}

/// Seeds `(u, X(u) + r n(u))` on the momentary front of `D - t` at `t = r^2`.
pub fn front_seeds<T: Real>(surface: &ParametricHypersurface<T>, r: T, params: &[Vec<T>]) -> Result<Vec<Vec<T>>> {
    params
        .iter()
        .map(|u| {
            let jet = surface.jet(u)?;
            let mut z = u.clone();
            z.extend(combine(&jet.x, &surface.normal_of(&jet)?, r));
            Ok(z)
        })
        .collect()
}

/// Seeds `(u, X(u) - n(u) / kappa(u))` on the caustic of the distance-squared family.
pub fn caustic_seeds<T: Real>(surface: &ParametricHypersurface<T>, params: &[Vec<T>]) -> Result<Vec<Vec<T>>> {
    let ev = evolute(surface, params, 0)?;
    Ok(ev
        .params
        .into_iter()
        .zip(ev.points)
        .map(|(mut u, x)| {
            u.extend(x);
            u
        })
        .collect())
}

/// Points of the surface where the sphere of radius `r` about `v` is tangent.
///
/// Critical points of `u -> D(u, v)` are located on a `samples`-per-axis grid
/// and refined; those at squared distance `r^2` are reported. A degenerate
/// family (every point critical, as for a circle about its centre) yields one
/// point per grid sample.
pub fn tangent_sphere_check<T: Real>(
    surface: &ParametricHypersurface<T>,
    v: &[T],
    r: T,
    samples: usize,
) -> Result<TangencyReport<T>> {
    if !(r > T::zero()) {
        return Err(Error::InvalidArgument("tangent spheres need r > 0".into()));
    }
    let n = surface.ambient_dim();
    if v.len() != n {
        return Err(Error::Dimension("centre has the wrong dimension".into()));
    }
    let d = DistanceSquared::new(surface.clone());
    let k = n - 1;
    let at = |u: &[T]| {
        let mut p = u.to_vec();
        p.extend_from_slice(v);
        p
    };
    let du = |u: &[T]| -> Result<Vec<T>> {
        let g = d.closed_gradient(&at(u)).ok_or(Error::NonFinite("distance gradient".into()))?;
        Ok(g[..k].to_vec())
    };
    let mut candidates: Vec<Vec<T>> = Vec::new();
    if k == 1 {
        let params = curve_params(surface, samples.max(2));
        let vals = params.iter().map(|u| du(u).map(|g| g[0])).collect::<Result<Vec<_>>>()?;
        let scale = T::one() + r * r;
        let m = params.len();
        let pairs = if surface.is_closed_curve() { m } else { m - 1 };
        for i in 0..m {
            if vals[i].abs() <= T::lit(1e-10) * scale {
                candidates.push(params[i].clone());
            }
        }
        for i in 0..pairs {
            let j = (i + 1) % m;
            if vals[i].signum() != vals[j].signum() && vals[i] != T::zero() && vals[j] != T::zero() {
                let b = unwrap_after(surface, params[i][0], params[j][0]);
                if let Some(u) = bisect(params[i][0], b, |u| du(&[u]).map(|g| g[0]))? {
                    candidates.push(vec![u]);
                }
            }
        }
    } else {
        let dom = surface.u_domain();
        let count = samples.max(2);
        let sys = FnSystem::new(k, k, |u: &[T]| du(u).unwrap_or_else(|_| vec![T::nan(); k]));
        for i in 0..count {
            for j in 0..count {
                let u: Vec<T> = [i, j]
                    .iter()
                    .enumerate()
                    .map(|(a, &c)| {
                        let (lo, hi) = (dom.lo()[a], dom.hi()[a]);
                        lo + (hi - lo) * T::from_count(c) / T::from_count(count - 1)
                    })
                    .collect();
                if let Ok(w) = newton_solve(&sys, &u, &[]) {
                    if dom.contains(&w) && sys.residual(&w).map(|r| inf_norm(&r) < T::tol(1e-10)).unwrap_or(false) {
                        candidates.push(w);
                    }
                }
            }
        }
    }
    let target = r * r;
    let tol = T::lit(1e-8) * T::one().max(target);
    let mut points: Vec<Vec<T>> = Vec::new();
    for u in candidates {
        if (d.value(&at(&u)) - target).abs() > tol {
            continue;
        }
        if !points.iter().any(|p| surface.u_domain().distance(p, &u) < T::lit(1e-9)) {
            points.push(u);
        }
    }
    let sep = T::lit(1e-3);
    let multiple = points
        .iter()
        .enumerate()
        .any(|(i, a)| points[i + 1..].iter().any(|b| surface.u_domain().distance(a, b) > sep));
    Ok(TangencyReport {
        tangency_points: points,
        multiple,
    })
}

/// The catalog of curves and surfaces.
pub fn catalog<T: Real>() -> Vec<(&'static str, ParametricHypersurface<T>)> {
    use crate::numcore::{parse, PolyField, VarSet};
    let vars = VarSet::indexed("u", 2);
    let saddle = parse("1/2*u1^2 - 1/4*u2^2 + 1/8*u1*u2", &vars)
        .expect("static expression")
        .to_polynomial(2);
    let graph = ParametricHypersurface::graph(Arc::new(PolyField::new(saddle)), DomainBox::cube(2, T::lit(-1.0), T::one()))
        .expect("two-variable graph");
    vec![
        ("circle", ParametricHypersurface::circle(T::one())),
        ("ellipse", ParametricHypersurface::ellipse(T::lit(2.0), T::one())),
        ("parabola", ParametricHypersurface::parabola(T::lit(0.5), T::lit(2.0))),
        ("graph", graph),
        ("sphere", ParametricHypersurface::sphere(T::one())),
        ("ellipsoid", ParametricHypersurface::ellipsoid(T::lit(3.0), T::lit(2.0), T::one())),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fronts::{self, polyline, TraceOptions};
    use crate::genfam::{morse_hypersurface_check, nondegeneracy_check};
    use crate::numcore::field::{fd_grad, grad};

    fn ellipse() -> ParametricHypersurface<f64> {
        ParametricHypersurface::<f64>::ellipse(2.0, 1.0)
    }

    #[test]
    fn circle_evolute_collapses_to_the_centre() {
        let c = ParametricHypersurface::<f64>::circle(2.5);
        let ev = evolute(&c, &curve_params(&c, 50), 0).unwrap();
        assert!(ev.points.iter().all(|p| p[0].abs() < 1e-10 && p[1].abs() < 1e-10));
        let s = ParametricHypersurface::<f64>::sphere(1.5);
        for branch in 0..2 {
            let ev = evolute(&s, &[vec![0.3, 0.2], vec![2.0, -0.7]], branch).unwrap();
            assert!(ev.points.iter().flatten().all(|c| c.abs() < 1e-10));
        }
    }

    #[test]
    fn ellipse_evolute_cusps() {
        let e = ellipse();
        let mut cusps = evolute_cusps(&e, &curve_params(&e, 400)).unwrap();
        cusps.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let expected = [[-1.5, 0.0], [0.0, -3.0], [0.0, 3.0], [1.5, 0.0]];
        assert_eq!(cusps.len(), 4);
        for (c, e) in cusps.iter().zip(expected) {
            assert!((c[0] - e[0]).abs() < 1e-6 && (c[1] - e[1]).abs() < 1e-6, "{c:?}");
        }
    }

    #[test]
    fn parallels_signs_and_small_offsets() {
        let c = ParametricHypersurface::<f64>::circle(1.0);
        let p = parallels(&c, &[-1.0], &curve_params(&c, 16)).unwrap();
        assert!(p[0].points.iter().flatten().all(|v| v.abs() < 1e-12));
        assert!(parallels(&c, &[0.0], &[vec![0.0]]).is_err());
        let e = ellipse();
        let params = curve_params(&e, 200);
        let eps = 1e-4;
        let off = parallels(&e, &[eps], &params).unwrap();
        for (p, u) in off[0].points.iter().zip(&params) {
            let x = e.point(u).unwrap();
            assert!((crate::real::dist(p, &x) - eps).abs() < 1e-9);
        }
    }

    #[test]
    fn inward_parallels_have_cusps_on_the_evolute() {
        let e = ellipse();
        let params = curve_params(&e, 800);
        let ev = evolute(&e, &params, 0).unwrap();
        let evo = vec![ev.points.clone()];
        let par = parallels(&e, &[-1.0, -2.0], &params).unwrap();
        for p in &par {
            let cusps = parallel_cusps(&e, p).unwrap();
            assert_eq!(cusps.len(), 4, "r = {}", p.r);
            for c in cusps {
                assert!(polyline::distance_to_polylines(&c, &evo) < 1e-3);
            }
        }
    }

    #[test]
    fn distance_squared_derivatives_match_differences() {
        for (_, s) in catalog::<f64>() {
            let d = DistanceSquared::new(s.clone());
            let k = s.param_dim();
            let mut p: Vec<f64> = (0..k).map(|i| 0.3 + 0.1 * i as f64).collect();
            p.extend((0..s.ambient_dim()).map(|i| 0.7 - 0.4 * i as f64));
            let exact = grad(&d, &p).unwrap();
            let approx = fd_grad(&d, &p).unwrap();
            for (a, b) in exact.iter().zip(&approx) {
                assert!((a - b).abs() <= 1e-6 * a.abs().max(1.0));
            }
        }
    }

    #[test]
    fn critical_points_lie_on_normal_lines() {
        let e = ellipse();
        let (fam, gl) = distance_squared_family(&e).unwrap();
        for (u, s) in [(0.3, 0.7), (2.0, -1.1), (4.0, 0.2)] {
            let x = e.point(&[u]).unwrap();
            let n = e.normal(&[u]).unwrap();
            let mut z = vec![u];
            z.extend(combine(&x, &n, s));
            assert!(fam.dq(&z).unwrap()[0].abs() < 1e-12);
            // on the level t = s^2 the point is on the big critical set
            z.push(s * s);
            assert!(nondegeneracy_check(&gl, &z).unwrap());
            assert!(morse_hypersurface_check(&fam.shifted(s * s), &z[..3]).unwrap().pass);
        }
        // degenerate Hessian exactly at the centre of curvature
        let ev = evolute(&e, &[vec![0.9]], 0).unwrap();
        let mut z = vec![0.9];
        z.extend(ev.points[0].clone());
        assert!(fam.hessian(&z).unwrap()[(0, 0)].abs() < 1e-10);
    }

    #[test]
    fn distance_front_is_the_pair_of_parallels() {
        let e = ellipse();
        let (_, gl) = distance_squared_family(&e).unwrap();
        let r = 0.8;
        let mut seeds = front_seeds(&e, r, &[vec![0.1]]).unwrap();
        seeds.extend(front_seeds(&e, -r, &[vec![0.1]]).unwrap());
        let set = fronts::momentary_front(&gl, r * r, &seeds, &TraceOptions::default()).unwrap();
        assert_eq!(set.curves.len(), 2);
        for c in &set.curves {
            assert!(c.closed);
            for p in &c.points {
                let x = e.point(&p.q).unwrap();
                let n = e.normal(&p.q).unwrap();
                let gap = crate::real::dist(&p.x, &combine(&x, &n, r)).min(crate::real::dist(&p.x, &combine(&x, &n, -r)));
                assert!(gap < 1e-6);
            }
        }
        let circle = ParametricHypersurface::<f64>::circle(1.0);
        let (_, cgl) = distance_squared_family(&circle).unwrap();
        let seeds = front_seeds(&circle, -1.0, &[vec![0.5]]).unwrap();
        let set = fronts::momentary_front(&cgl, 1.0, &seeds, &TraceOptions::default()).unwrap();
        assert!(set.curves[0].points.iter().all(|p| p.x[0].abs() < 1e-8 && p.x[1].abs() < 1e-8));
    }

    #[test]
    fn tangent_circles() {
        let e = ellipse();
        let v = [0.5, 0.0];
        let r = (11.0f64 / 12.0).sqrt();
        let rep = tangent_sphere_check(&e, &v, r, 720).unwrap();
        assert!(rep.multiple);
        assert_eq!(rep.tangency_points.len(), 2);
        let c = ParametricHypersurface::<f64>::circle(1.0);
        let rep = tangent_sphere_check(&c, &[0.0, 0.0], 1.0, 90).unwrap();
        assert!(rep.multiple && rep.tangency_points.len() >= 90);
        let rep = tangent_sphere_check(&e, &[5.0, 0.0], 3.0, 720).unwrap();
        assert_eq!(rep.tangency_points.len(), 1);
        assert!(!rep.multiple);
    }

    #[test]
    fn ellipse_maxwell_points_are_on_the_axes() {
        let e = ellipse();
        let (fam, _) = distance_squared_family(&e).unwrap();
        let seeds = curve_params(&e, 12);
        let grid = crate::numcore::Grid::uniform(2, -2.2, 2.2, 12);
        let m = fronts::maxwell_set(&fam, &seeds, &grid).unwrap();
        assert!(!m.is_empty());
        for p in &m {
            assert!(p.x[0].abs() < 1e-3 || p.x[1].abs() < 1e-3, "{:?}", p.x);
        }
    }
}
