//! Characteristics of time-dependent quasi-linear first-order equations
//!
//! `y_t + sum a_i(x, y, t) y_{x_i} = b(x, y, t)`, `y(x, 0) = phi(x)`,
//! integrated by RK4 together with the variational equations for
//! `dx/dx0` and `dy/dx0`, so folds of the solution sheet are located without
//! differencing neighbouring strips.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numcore::field::{eval, grad, DomainBox, FnField, PolyField, ScalarField, Unary, UnaryFn};
use crate::numcore::matrix::Matrix;
use crate::numcore::{parse, VarSet};
use crate::real::Real;

/// Coordinates beyond this multiple of the declared box count as blow-up.
pub const BLOW_UP_FACTOR: f64 = 10.0;

/// Breaking times are refined to this accuracy.
pub const BREAKING_TOL: f64 = 1e-6;

#[derive(Clone)]
pub struct QuasiLinearPDE<T: Real> {
    n: usize,
    /// Coefficient fields on `(x1..xn, y, t)`.
    a: Vec<Arc<dyn ScalarField<T>>>,
    b: Arc<dyn ScalarField<T>>,
    phi: Arc<dyn ScalarField<T>>,
    /// Box in `(x, y)` on which the coefficients are meant to be evaluated.
    domain: DomainBox<T>,
}

impl<T: Real> std::fmt::Debug for QuasiLinearPDE<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("QuasiLinearPDE").field("n", &self.n).field("domain", &self.domain).finish_non_exhaustive()
    }
}

impl<T: Real> QuasiLinearPDE<T> {
    pub fn new(
        a: Vec<Arc<dyn ScalarField<T>>>,
        b: Arc<dyn ScalarField<T>>,
        phi: Arc<dyn ScalarField<T>>,
        domain: DomainBox<T>,
    ) -> Result<Self> {
        let n = a.len();
        if n == 0 || phi.arity() != n || b.arity() != n + 2 || a.iter().any(|f| f.arity() != n + 2) {
            return Err(Error::Dimension(
                "coefficients need arity n + 2 and the initial datum arity n".into(),
            ));
        }
        if domain.dim() != n + 1 {
            return Err(Error::Dimension("the box covers (x, y)".into()));
        }
        Ok(Self { n, a, b, phi, domain })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn domain(&self) -> &DomainBox<T> {
        &self.domain
    }

    pub fn initial(&self, x0: &[T]) -> Result<T> {
        eval(self.phi.as_ref(), x0)
    }

    /// The characteristic field `(1, a, b)` at `(x, y, t)`.
    pub fn characteristic(&self, x: &[T], y: T, t: T) -> Result<(Vec<T>, T)> {
        let p = point(x, y, t);
        let a = self.a.iter().map(|f| eval(f.as_ref(), &p)).collect::<Result<Vec<_>>>()?;
        Ok((a, eval(self.b.as_ref(), &p)?))
    }

    fn limit(&self, i: usize) -> T {
        let m = self.domain.lo()[i].abs().max(self.domain.hi()[i].abs());
        T::lit(BLOW_UP_FACTOR) * m
    }
}

fn point<T: Real>(x: &[T], y: T, t: T) -> Vec<T> {
    let mut p = x.to_vec();
    p.push(y);
    p.push(t);
    p
}

fn poly_field<T: Real>(text: &str, vars: &VarSet) -> Arc<dyn ScalarField<T>> {
    Arc::new(PolyField::new(parse(text, vars).expect("static expression").to_polynomial(vars.len())))
}

fn line_box<T: Real>(half: f64) -> DomainBox<T> {
    DomainBox::cube(2, T::lit(-half), T::lit(half))
}

/// Inviscid Burgers `y_t + 2 y y_x = 0` with `y(x, 0) = sin x`, or `-sin x` when `negate`.
pub fn burgers<T: Real>(negate: bool) -> QuasiLinearPDE<T> {
    let vars = VarSet::new(["x1", "y", "t"]);
    let phi: Arc<dyn ScalarField<T>> = if negate {
        Arc::new(
            FnField::new(DomainBox::unbounded(1), |x: &[T]| -x[0].sin()).with_gradient(|x: &[T]| vec![-x[0].cos()]),
        )
    } else {
        Arc::new(UnaryFn::new(Unary::Sin, 1, 0))
    };
    QuasiLinearPDE::new(vec![poly_field("2*y", &vars)], poly_field("0*y", &vars), phi, line_box(10.0))
        .expect("consistent arities")
}

/// Transport `y_t + c y_x = 0` with initial datum `sin x`.
pub fn transport<T: Real>(c: T) -> QuasiLinearPDE<T> {
    let vars = VarSet::new(["x1", "y", "t"]);
    let speed: Arc<dyn ScalarField<T>> = Arc::new(FnField::new(DomainBox::unbounded(3), move |_: &[T]| c).with_gradient(|_: &[T]| vec![T::zero(); 3]));
    QuasiLinearPDE::new(vec![speed], poly_field("0*y", &vars), Arc::new(UnaryFn::new(Unary::Sin, 1, 0)), line_box(10.0))
        .expect("consistent arities")
}

/// `y_t + x y_x = 0`: characteristics `x = x0 e^t`, used for convergence checks.
pub fn stretching<T: Real>() -> QuasiLinearPDE<T> {
    let vars = VarSet::new(["x1", "y", "t"]);
    QuasiLinearPDE::new(
        vec![poly_field("x1", &vars)],
        poly_field("0*y", &vars),
        Arc::new(UnaryFn::new(Unary::Sin, 1, 0)),
        line_box(10.0),
    )
    .expect("consistent arities")
}

/// `y_t = 0`: nothing moves.
pub fn stationary<T: Real>() -> QuasiLinearPDE<T> {
    let vars = VarSet::new(["x1", "y", "t"]);
    QuasiLinearPDE::new(
        vec![poly_field("0*y", &vars)],
        poly_field("0*y", &vars),
        Arc::new(UnaryFn::new(Unary::Sin, 1, 0)),
        line_box(10.0),
    )
    .expect("consistent arities")
}

/// Full RK4 state: `x`, `y`, `J = dx/dx0` (row-major), `w = dy/dx0`.
#[derive(Clone, Debug, PartialEq)]
pub struct StripState<T> {
    pub x: Vec<T>,
    pub y: T,
    pub jac: Vec<T>,
    pub w: Vec<T>,
}

impl<T: Real> StripState<T> {
    fn initial(pde: &QuasiLinearPDE<T>, x0: &[T]) -> Result<Self> {
        let n = pde.n;
        let mut jac = vec![T::zero(); n * n];
        for i in 0..n {
            jac[i * n + i] = T::one();
        }
        Ok(Self {
            x: x0.to_vec(),
            y: pde.initial(x0)?,
            jac,
            w: grad(pde.phi.as_ref(), x0)?,
        })
    }

    fn flat(&self) -> Vec<T> {
        let mut v = self.x.clone();
        v.push(self.y);
        v.extend_from_slice(&self.jac);
        v.extend_from_slice(&self.w);
        v
    }

    fn from_flat(n: usize, v: &[T]) -> Self {
        Self {
            x: v[..n].to_vec(),
            y: v[n],
            jac: v[n + 1..n + 1 + n * n].to_vec(),
            w: v[n + 1 + n * n..].to_vec(),
        }
    }

    /// `det(dx/dx0)`.
    pub fn det(&self) -> T {
        let n = self.x.len();
        Matrix::from_fn(n, n, |i, j| self.jac[i * n + j]).determinant()
    }
}

fn rhs<T: Real>(pde: &QuasiLinearPDE<T>, v: &[T], t: T) -> Result<Vec<T>> {
    let n = pde.n;
    let s = StripState::from_flat(n, v);
    let p = point(&s.x, s.y, t);
    let ga = pde.a.iter().map(|f| grad(f.as_ref(), &p)).collect::<Result<Vec<_>>>()?;
    let gb = grad(pde.b.as_ref(), &p)?;
    let (a, b) = pde.characteristic(&s.x, s.y, t)?;
    let mut out = a;
    out.push(b);
    // d/dt J_ij = sum_k da_i/dx_k J_kj + da_i/dy w_j
    for i in 0..n {
        for j in 0..n {
            let mut acc = ga[i][n] * s.w[j];
            for k in 0..n {
                acc = acc + ga[i][k] * s.jac[k * n + j];
            }
            out.push(acc);
        }
    }
    for j in 0..n {
        let mut acc = gb[n] * s.w[j];
        for k in 0..n {
            acc = acc + gb[k] * s.jac[k * n + j];
        }
        out.push(acc);
    }
    if out.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("characteristic field".into()));
    }
    Ok(out)
}

fn rk4_step<T: Real>(pde: &QuasiLinearPDE<T>, v: &[T], t: T, h: T) -> Result<Vec<T>> {
    let half = T::lit(0.5);
    let add = |a: &[T], b: &[T], s: T| a.iter().zip(b).map(|(x, y)| *x + s * *y).collect::<Vec<T>>();
    let k1 = rhs(pde, v, t)?;
    let k2 = rhs(pde, &add(v, &k1, h * half), t + h * half)?;
    let k3 = rhs(pde, &add(v, &k2, h * half), t + h * half)?;
    let k4 = rhs(pde, &add(v, &k3, h), t + h)?;
    let six = T::lit(6.0);
    let two = T::lit(2.0);
    Ok((0..v.len())
        .map(|i| v[i] + h / six * (k1[i] + two * k2[i] + two * k3[i] + k4[i]))
        .collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct CharacteristicStrip<T> {
    pub x0: Vec<T>,
    /// State at each time of the sheet.
    pub states: Vec<StripState<T>>,
}

impl<T: Real> CharacteristicStrip<T> {
    pub fn y0(&self) -> T {
        self.states[0].y
    }
}

#[derive(Clone, Debug)]
pub struct GeometricSolutionSheet<T> {
    pub times: Vec<T>,
    pub strips: Vec<CharacteristicStrip<T>>,
}

/// Integrates one strip over `times` (uniform steps of `dt`).
fn integrate_strip<T: Real>(pde: &QuasiLinearPDE<T>, x0: &[T], times: &[T], dt: T) -> Result<CharacteristicStrip<T>> {
    let mut state = StripState::initial(pde, x0)?;
    let mut states = vec![state.clone()];
    for w in times.windows(2) {
        let h = w[1] - w[0];
        let mut v = state.flat();
        // the last interval can be shorter; never longer than dt
        let sub = (h / dt).ceil().to_usize().unwrap_or(1).max(1);
        let hs = h / T::from_count(sub);
        for s in 0..sub {
            v = rk4_step(pde, &v, w[0] + hs * T::from_count(s), hs)?;
        }
        state = StripState::from_flat(pde.n, &v);
        let escaped = state.x.iter().enumerate().any(|(i, x)| x.abs() > pde.limit(i)) || state.y.abs() > pde.limit(pde.n);
        if escaped {
            return Err(Error::BlowUp { t: w[1].to_f64_lossy() });
        }
        states.push(state.clone());
    }
    Ok(CharacteristicStrip {
        x0: x0.to_vec(),
        states,
    })
}

/// Integrates the characteristic through every `x0` from `t_lo` to `t_hi`.
pub fn integrate_characteristics<T: Real>(
    pde: &QuasiLinearPDE<T>,
    x0_grid: &[Vec<T>],
    t_lo: T,
    t_hi: T,
    dt: T,
) -> Result<GeometricSolutionSheet<T>> {
    if !(dt > T::zero()) || !(t_hi >= t_lo) {
        return Err(Error::InvalidArgument("need dt > 0 and t_hi >= t_lo".into()));
    }
    if x0_grid.iter().any(|x| x.len() != pde.n) {
        return Err(Error::Dimension("initial points have the wrong dimension".into()));
    }
    let steps = ((t_hi - t_lo) / dt - T::lit(1e-9)).ceil().to_usize().unwrap_or(0);
    let mut times: Vec<T> = (0..steps).map(|i| t_lo + dt * T::from_count(i)).collect();
    times.push(t_hi);
    let strips = x0_grid
        .par_iter()
        .map(|x0| integrate_strip(pde, x0, &times, dt))
        .collect::<Result<Vec<_>>>()?;
    Ok(GeometricSolutionSheet { times, strips })
}

/// First time at which `det(dx/dx0)` reaches zero on some strip, refined by
/// bisection on a single RK4 step from the last time before the sign change.
pub fn breaking_time<T: Real>(pde: &QuasiLinearPDE<T>, sheet: &GeometricSolutionSheet<T>) -> Result<Option<T>> {
    breaking_time_within(pde, sheet, T::lit(BREAKING_TOL))
}

/// [`breaking_time`] refined to `tol` instead of [`BREAKING_TOL`].
pub fn breaking_time_within<T: Real>(pde: &QuasiLinearPDE<T>, sheet: &GeometricSolutionSheet<T>, tol: T) -> Result<Option<T>> {
    let steps = sheet.times.len();
    for i in 1..steps {
        let crossing: Vec<&CharacteristicStrip<T>> = sheet
            .strips
            .iter()
            .filter(|s| s.states[i].det() <= T::zero() && s.states[i - 1].det() > T::zero())
            .collect();
        if crossing.is_empty() {
            continue;
        }
        let t0 = sheet.times[i - 1];
        let mut best = sheet.times[i];
        for s in crossing {
            let start = s.states[i - 1].flat();
            let det_at = |h: T| -> Result<T> {
                Ok(StripState::from_flat(pde.n, &rk4_step(pde, &start, t0, h)?).det())
            };
            let (mut lo, mut hi) = (T::zero(), sheet.times[i] - t0);
            while hi - lo > tol * T::lit(0.01) {
                let mid = (lo + hi) * T::lit(0.5);
                if det_at(mid)? > T::zero() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            best = best.min(t0 + hi);
        }
        return Ok(Some(best));
    }
    Ok(None)
}

/// `x(x0)` and `y(x0)` of every strip at time `t`, linearly interpolated
/// between stored steps.
pub fn slice_at<T: Real>(sheet: &GeometricSolutionSheet<T>, t: T) -> Result<Vec<(Vec<T>, T)>> {
    let times = &sheet.times;
    let (first, last) = (times[0], *times.last().expect("non-empty"));
    if t < first || t > last {
        return Err(Error::InvalidArgument("time outside the integrated range".into()));
    }
    let i = times.partition_point(|s| *s <= t).clamp(1, times.len().max(2) - 1);
    let (ta, tb) = (times[i - 1], times[i.min(times.len() - 1)]);
    let s = if tb > ta { (t - ta) / (tb - ta) } else { T::zero() };
    Ok(sheet
        .strips
        .iter()
        .map(|strip| {
            let (a, b) = (&strip.states[i - 1], &strip.states[i.min(times.len() - 1)]);
            let x = a.x.iter().zip(&b.x).map(|(p, q)| *p + s * (*q - *p)).collect();
            (x, a.y + s * (b.y - a.y))
        })
        .collect())
}

/// Number of strips reaching `x_hat` at time `t`, counted by sign changes of
/// `x(x0) - x_hat` along the ordered strips; a run of exact zeros counts once.
pub fn multivalued_count<T: Real>(sheet: &GeometricSolutionSheet<T>, x_hat: T, t: T) -> Result<usize> {
    let slice = slice_at(sheet, t)?;
    if slice.first().map(|(x, _)| x.len()) != Some(1) {
        return Err(Error::Dimension("multivalued counts are for one space dimension".into()));
    }
    let d: Vec<T> = slice.iter().map(|(x, _)| x[0] - x_hat).collect();
    let mut count = 0;
    let mut i = 0;
    while i < d.len() {
        if d[i] == T::zero() {
            count += 1;
            while i < d.len() && d[i] == T::zero() {
                i += 1;
            }
            continue;
        }
        if i + 1 < d.len() && d[i + 1] != T::zero() && d[i].signum() != d[i + 1].signum() {
            count += 1;
        }
        i += 1;
    }
    Ok(count)
}

/// Largest `|f_t + sum a_i f_{x_i} + b f_y|` over `samples` of the level set
/// `f(x, y, t) = 0`.
pub fn tangency_check<T: Real>(pde: &QuasiLinearPDE<T>, f: &dyn ScalarField<T>, samples: &[Vec<T>]) -> Result<T> {
    let n = pde.n;
    if f.arity() != n + 2 {
        return Err(Error::Dimension("the hypersurface lives in (x, y, t)".into()));
    }
    let mut worst = T::zero();
    for s in samples {
        let v = eval(f, s)?;
        if !(v.abs() < T::tol(1e-8)) {
            return Err(Error::InvalidArgument(format!(
                "sample is off the hypersurface (f = {:e})",
                v.to_f64_lossy()
            )));
        }
        let g = grad(f, s)?;
        let (a, b) = pde.characteristic(&s[..n], s[n], s[n + 1])?;
        let mut r = g[n + 1] + b * g[n];
        for i in 0..n {
            r = r + a[i] * g[i];
        }
        worst = worst.max(r.abs());
    }
    Ok(worst)
}

/// `f(x, y, t) = y - Y(x, t)`, where `Y` is read off the characteristic that
/// reaches `x` at time `t` (found by Newton on `x0`, starting from `x`).
/// Single-valued only before the sheet folds. One space dimension.
#[derive(Clone, Debug)]
pub struct SolutionPatch<T: Real> {
    pde: QuasiLinearPDE<T>,
    steps: usize,
    domain: DomainBox<T>,
}

impl<T: Real> SolutionPatch<T> {
    /// `steps` RK4 steps are taken from `0` to `t` whatever `t` is, so the
    /// patch is smooth in `t`.
    pub fn new(pde: QuasiLinearPDE<T>, steps: usize) -> Result<Self> {
        if pde.n != 1 {
            return Err(Error::Dimension("solution patches are built for one space dimension".into()));
        }
        Ok(Self {
            pde,
            steps: steps.max(1),
            domain: DomainBox::unbounded(3),
        })
    }

    fn endpoint(&self, x0: T, t: T) -> Result<StripState<T>> {
        let mut v = StripState::initial(&self.pde, &[x0])?.flat();
        let h = t / T::from_count(self.steps);
        for s in 0..self.steps {
            v = rk4_step(&self.pde, &v, h * T::from_count(s), h)?;
        }
        Ok(StripState::from_flat(1, &v))
    }

    /// `Y(x, t)`.
    pub fn height(&self, x: T, t: T) -> Result<T> {
        let mut x0 = x;
        for _ in 0..50 {
            let s = self.endpoint(x0, t)?;
            let r = s.x[0] - x;
            if r.abs() < T::tol(1e-13) * x.abs().max(T::one()) {
                return Ok(s.y);
            }
            if !(s.jac[0].abs() > T::tol(1e-12)) {
                return Err(Error::SingularJacobian { ratio: 0.0 });
            }
            x0 = x0 - r / s.jac[0];
        }
        Err(Error::MaxIterations {
            iterations: 50,
            residual: f64::NAN,
        })
    }
}

impl<T: Real> ScalarField<T> for SolutionPatch<T> {
    fn arity(&self) -> usize {
        3
    }

    fn domain(&self) -> &DomainBox<T> {
        &self.domain
    }

    fn value(&self, p: &[T]) -> T {
        match self.height(p[0], p[2]) {
            Ok(y) => p[1] - y,
            Err(_) => T::nan(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(lo: f64, hi: f64, count: usize) -> Vec<Vec<f64>> {
        (0..count)
            .map(|i| vec![lo + (hi - lo) * i as f64 / (count - 1) as f64])
            .collect()
    }

    #[test]
    fn stationary_strips_do_not_move() {
        let pde = stationary::<f64>();
        let sheet = integrate_characteristics(&pde, &grid(-1.0, 1.0, 5), 0.0, 1.0, 0.1).unwrap();
        for s in &sheet.strips {
            for st in &s.states {
                assert_eq!(st.x, s.x0);
                assert_eq!(st.y, s.y0());
            }
        }
        assert_eq!(breaking_time(&pde, &sheet).unwrap(), None);
    }

    #[test]
    fn transport_carries_the_profile() {
        let pde = transport(1.0f64);
        let sheet = integrate_characteristics(&pde, &grid(-3.0, 3.0, 13), 0.0, 2.0, 0.01).unwrap();
        for s in &sheet.strips {
            for (t, st) in sheet.times.iter().zip(&s.states) {
                assert!((st.y - (st.x[0] - t).sin()).abs() < 1e-8);
            }
        }
        assert_eq!(breaking_time(&pde, &sheet).unwrap(), None);
    }

    #[test]
    fn burgers_characteristics_are_exact_lines() {
        let pde = burgers::<f64>(false);
        let sheet = integrate_characteristics(&pde, &grid(0.0, 6.0, 25), 0.0, 1.0, 1e-3).unwrap();
        for s in &sheet.strips {
            let x0 = s.x0[0];
            for (t, st) in sheet.times.iter().zip(&s.states) {
                assert!((st.x[0] - (x0 + 2.0 * x0.sin() * t)).abs() < 1e-8);
                assert!((st.y - x0.sin()).abs() < 1e-10);
                assert!((st.jac[0] - (1.0 + 2.0 * t * x0.cos())).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn burgers_breaks_at_one_half() {
        let tau = std::f64::consts::TAU;
        for negate in [false, true] {
            let pde = burgers::<f64>(negate);
            let sheet = integrate_characteristics(&pde, &grid(0.0, tau, 400), 0.0, 1.0, 1e-3).unwrap();
            let t = breaking_time(&pde, &sheet).unwrap().unwrap();
            assert!((t - 0.5).abs() < 1e-4, "{t}");
        }
    }

    #[test]
    fn burgers_is_three_valued_after_breaking() {
        let pde = burgers::<f64>(false);
        let sheet = integrate_characteristics(&pde, &grid(0.0, std::f64::consts::TAU, 400), 0.0, 1.0, 1e-3).unwrap();
        let pi = std::f64::consts::PI;
        assert_eq!(multivalued_count(&sheet, pi, 0.8).unwrap(), 3);
        assert_eq!(multivalued_count(&sheet, pi, 0.3).unwrap(), 1);
        // the sheet itself stays a smooth graph over (x0, t)
        assert!(sheet.strips.iter().all(|s| s.states.iter().all(|st| st.det().is_finite())));
    }

    #[test]
    fn zero_runs_count_once() {
        let sheet = GeometricSolutionSheet {
            times: vec![0.0],
            strips: [-1.0, 0.0, 0.0, 1.0, 2.0]
                .iter()
                .map(|&x| CharacteristicStrip {
                    x0: vec![x],
                    states: vec![StripState { x: vec![x], y: 0.0, jac: vec![1.0], w: vec![0.0] }],
                })
                .collect(),
        };
        assert_eq!(multivalued_count(&sheet, 0.0, 0.0).unwrap(), 1);
    }

    #[test]
    fn blow_up_is_reported() {
        let pde = stretching::<f64>();
        assert!(matches!(
            integrate_characteristics(&pde, &[vec![5.0]], 0.0, 10.0, 0.01),
            Err(Error::BlowUp { .. })
        ));
    }

    #[test]
    fn rk4_converges_at_fourth_order() {
        let pde = stretching::<f64>();
        let err = |dt: f64| {
            let s = integrate_characteristics(&pde, &[vec![1.0]], 0.0, 1.0, dt).unwrap();
            (s.strips[0].states.last().unwrap().x[0] - 1f64.exp()).abs()
        };
        let ratio = err(0.1) / err(0.05);
        assert!(ratio >= 12.0, "{ratio}");
    }

    #[test]
    fn tangency_of_exact_and_wrong_sheets() {
        let pde = transport(1.0f64);
        let exact = FnField::new(DomainBox::unbounded(3), |p: &[f64]| p[1] - (p[0] - p[2]).sin());
        let samples: Vec<Vec<f64>> = (0..20)
            .map(|i| {
                let (x, t) = (-2.0 + 0.2 * i as f64, 0.05 * i as f64);
                vec![x, (x - t).sin(), t]
            })
            .collect();
        assert!(tangency_check(&pde, &exact, &samples).unwrap() < 1e-8);

        let burgers = burgers::<f64>(false);
        let frozen = FnField::new(DomainBox::unbounded(3), |p: &[f64]| p[1] - p[0].sin());
        let on_frozen: Vec<Vec<f64>> = (0..20).map(|i| {
            let x = 0.3 * i as f64;
            vec![x, x.sin(), 0.4]
        }).collect();
        assert!(tangency_check(&burgers, &frozen, &on_frozen).unwrap() > 0.1);
    }

    #[test]
    fn reconstructed_burgers_patch_is_a_solution() {
        let pde = burgers::<f64>(false);
        let patch = SolutionPatch::new(pde.clone(), 200).unwrap();
        let samples: Vec<Vec<f64>> = (0..15)
            .map(|i| {
                let (x, t) = (0.4 * i as f64, 0.02 * i as f64);
                vec![x, patch.height(x, t).unwrap(), t]
            })
            .collect();
        assert!(tangency_check(&pde, &patch, &samples).unwrap() < 1e-5);
    }
}
