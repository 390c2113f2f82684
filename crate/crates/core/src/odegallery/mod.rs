//! Normal forms of integral diagrams `(mu, g)` of completely integrable
//! first-order ODEs, their momentary fronts `W_t = g(mu^{-1}(t))` and the
//! discriminants of the families `{W_t}`.
//!
//! Fronts are level curves of `mu` pushed forward by `g`. The discriminant
//! lives on the curve `S = {det Dg = 0}`: where `dmu` also kills `ker Dg` the
//! big front `u -> (mu, g)` is singular and the point belongs to the caustic,
//! elsewhere on `S` it is an envelope point.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fronts::polyline::{self_intersections, tangent_reversals};
use crate::fronts::{CausticCurve, CausticPoint, DeltaPoint, DiscriminantDecomposition, MaxwellPoint, MAXWELL_SEPARATION};
use crate::numcore::continuation::continue_curve;
use crate::numcore::field::DomainBox;
use crate::numcore::matrix::Matrix;
use crate::numcore::newton::{newton_solve, System};
use crate::numcore::poly::{rational, CompiledPoly, Polynomial};
use crate::numcore::{parse, PolyExpr, Range, VarSet};
use crate::real::{dist, Real};

/// Threshold on the normalized `dmu . ker Dg` below which a point of `S` is
/// taken as a caustic point.
pub const CAUSTIC_TOL: f64 = 1e-6;

/// Level-set accuracy of front points.
pub const LEVEL_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GermKind {
    Trivial,
    Regular,
    Clairaut,
    MixedFold,
}

impl GermKind {
    pub fn label(self) -> &'static str {
        match self {
            Self::Trivial => "trivial",
            Self::Regular => "regular",
            Self::Clairaut => "clairaut",
            Self::MixedFold => "mixed fold",
        }
    }
}

/// The functional modulus `alpha(v1, v2)` added to `mu` as `alpha o g`.
#[derive(Clone, Debug, Default)]
pub enum AlphaChoice {
    #[default]
    Zero,
    Poly(PolyExpr),
}

impl AlphaChoice {
    /// `"0"` gives [`AlphaChoice::Zero`]; anything else is parsed in `v1, v2`.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim() == "0" {
            return Ok(Self::Zero);
        }
        Ok(Self::Poly(parse(text, &VarSet::new(["v1", "v2"]))?))
    }
}

#[derive(Clone, Debug)]
struct Compiled<T> {
    mu: CompiledPoly<T>,
    dmu: [CompiledPoly<T>; 2],
    g: [CompiledPoly<T>; 2],
    dg: [[CompiledPoly<T>; 2]; 2],
    det: CompiledPoly<T>,
    ddet: [CompiledPoly<T>; 2],
}

#[derive(Clone, Debug)]
pub struct IntegralDiagram<T> {
    id: usize,
    kind: GermKind,
    mu: Polynomial,
    g: [Polynomial; 2],
    alpha: Polynomial,
    domain: DomainBox<T>,
    /// Coordinate solved for on each line when tracing level curves.
    solve_axis: usize,
    c: Compiled<T>,
}

fn u(i: usize) -> Polynomial {
    Polynomial::var(2, i)
}

fn c(num: i64, den: i64) -> Polynomial {
    Polynomial::constant(2, rational(num, den))
}

/// The germ with number `id` (1 to 6).
pub fn gallery_family<T: Real>(id: usize, alpha: &AlphaChoice) -> Result<IntegralDiagram<T>> {
    let (u1, u2) = (u(0), u(1));
    let (kind, mu, g, solve_axis) = match id {
        1 => (GermKind::Trivial, u2.clone(), [u1, u2], 1),
        2 => (
            GermKind::Regular,
            &(&c(2, 3) * &u1.pow(3)) + &u2,
            [u1.pow(2), u2],
            1,
        ),
        3 => (GermKind::Clairaut, &u2 - &(&c(1, 2) * &u1), [u1, u2.pow(2)], 1),
        4 => (
            GermKind::Regular,
            &(&(&c(3, 4) * &u1.pow(4)) + &(&c(1, 2) * &(&u1.pow(2) * &u2))) + &u2,
            [&u1.pow(3) + &(&u2 * &u1), u2],
            1,
        ),
        5 => (GermKind::Clairaut, u2.clone(), [u1.clone(), &u2.pow(3) + &(&u1 * &u2)], 1),
        6 => (
            GermKind::MixedFold,
            &(&(&c(-3, 1) * &u2.pow(2)) + &(&c(4, 1) * &(&u1 * &u2))) + &u1,
            [u1.clone(), &u2.pow(3) + &(&u1 * &u2.pow(2))],
            0,
        ),
        _ => return Err(Error::UnknownGerm(id)),
    };
    let alpha = match alpha {
        AlphaChoice::Zero => Polynomial::zero(2),
        AlphaChoice::Poly(e) => e.to_polynomial(2),
    };
    // germs (1) to (3) carry no modulus
    let mu = if id >= 4 { &mu + &alpha.compose(&g) } else { mu };
    let domain = if id == 6 {
        DomainBox::new(vec![T::lit(-1.0), T::lit(-0.2)], vec![T::one(), T::lit(0.6)])?
    } else {
        DomainBox::cube(2, T::lit(-1.5), T::lit(1.5))
    };
    Ok(IntegralDiagram::build(id, kind, mu, g, alpha, domain, solve_axis))
}

impl<T: Real> IntegralDiagram<T> {
    fn build(
        id: usize,
        kind: GermKind,
        mu: Polynomial,
        g: [Polynomial; 2],
        alpha: Polynomial,
        domain: DomainBox<T>,
        solve_axis: usize,
    ) -> Self {
        let det = &(&g[0].partial(0) * &g[1].partial(1)) - &(&g[0].partial(1) * &g[1].partial(0));
        let c = Compiled {
            mu: mu.compile(),
            dmu: [mu.partial(0).compile(), mu.partial(1).compile()],
            g: [g[0].compile(), g[1].compile()],
            dg: [
                [g[0].partial(0).compile(), g[0].partial(1).compile()],
                [g[1].partial(0).compile(), g[1].partial(1).compile()],
            ],
            ddet: [det.partial(0).compile(), det.partial(1).compile()],
            det: det.compile(),
        };
        Self {
            id,
            kind,
            mu,
            g,
            alpha,
            domain,
            solve_axis,
            c,
        }
    }

    /// Replaces the sampled `u` box.
    pub fn with_domain(mut self, domain: DomainBox<T>) -> Result<Self> {
        if domain.dim() != 2 {
            return Err(Error::Dimension("integral diagrams live on a plane".into()));
        }
        self.domain = domain;
        Ok(self)
    }

    pub fn id(&self) -> usize {
        self.id
    }

    pub fn kind(&self) -> GermKind {
        self.kind
    }

    pub fn mu_polynomial(&self) -> &Polynomial {
        &self.mu
    }

    pub fn g_polynomials(&self) -> &[Polynomial; 2] {
        &self.g
    }

    pub fn alpha(&self) -> &Polynomial {
        &self.alpha
    }

    pub fn domain(&self) -> &DomainBox<T> {
        &self.domain
    }

    pub fn mu(&self, u: &[T]) -> T {
        self.c.mu.eval(u)
    }

    pub fn dmu(&self, u: &[T]) -> [T; 2] {
        [self.c.dmu[0].eval(u), self.c.dmu[1].eval(u)]
    }

    pub fn g(&self, u: &[T]) -> [T; 2] {
        [self.c.g[0].eval(u), self.c.g[1].eval(u)]
    }

    pub fn dg(&self, u: &[T]) -> [[T; 2]; 2] {
        let d = &self.c.dg;
        [[d[0][0].eval(u), d[0][1].eval(u)], [d[1][0].eval(u), d[1][1].eval(u)]]
    }

    pub fn det_dg(&self, u: &[T]) -> T {
        self.c.det.eval(u)
    }

    /// `dmu(k) / (|dmu| |k|)` for `k` spanning `ker Dg` (computed from the
    /// larger row, so it is meaningful only on `S`).
    pub fn kernel_pairing(&self, u: &[T]) -> T {
        let d = self.dg(u);
        let n0 = d[0][0].hypot(d[0][1]);
        let n1 = d[1][0].hypot(d[1][1]);
        let r = if n0 >= n1 { d[0] } else { d[1] };
        let k = [-r[1], r[0]];
        let m = self.dmu(u);
        let scale = m[0].hypot(m[1]) * k[0].hypot(k[1]);
        if scale > T::zero() {
            (m[0] * k[0] + m[1] * k[1]) / scale
        } else {
            T::zero()
        }
    }

    /// Smallest `|dmu|` over a grid of the box; positive means `mu` is a submersion there.
    pub fn submersion_margin(&self, count: usize) -> T {
        let (lo, hi) = (self.domain.lo(), self.domain.hi());
        let count = count.max(2);
        let mut worst = T::infinity();
        for i in 0..count {
            for j in 0..count {
                let s = |a: T, b: T, k: usize| a + (b - a) * T::from_count(k) / T::from_count(count - 1);
                let p = [s(lo[0], hi[0], i), s(lo[1], hi[1], j)];
                let d = self.dmu(&p);
                worst = worst.min(d[0].hypot(d[1]));
            }
        }
        worst
    }

    /// Evenly spaced values of the free coordinate across the box.
    pub fn default_params(&self, count: usize) -> Vec<T> {
        let free = 1 - self.solve_axis;
        let (lo, hi) = (self.domain.lo()[free], self.domain.hi()[free]);
        let count = count.max(2);
        (0..count)
            .map(|i| lo + (hi - lo) * T::from_count(i) / T::from_count(count - 1))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GalleryPoint<T> {
    pub u: [T; 2],
    pub xy: [T; 2],
}

/// `W_t` as ordered pieces; a piece ends where the level curve leaves the box.
#[derive(Clone, Debug)]
pub struct GalleryFront<T> {
    pub t: T,
    pub pieces: Vec<Vec<GalleryPoint<T>>>,
}

impl<T: Real> GalleryFront<T> {
    pub fn point_count(&self) -> usize {
        self.pieces.iter().map(Vec::len).sum()
    }

    pub fn planar(&self) -> Vec<Vec<Vec<T>>> {
        self.pieces
            .iter()
            .map(|p| p.iter().map(|q| q.xy.to_vec()).collect())
            .collect()
    }

    /// Tangent reversals of the pieces, i.e. cusps at polyline resolution.
    pub fn cusp_count(&self) -> usize {
        self.planar().iter().map(|p| tangent_reversals(p, false).len()).sum()
    }
}

fn solve_on_line<T: Real>(d: &IntegralDiagram<T>, t: T, free_value: T, guess: T) -> Option<[T; 2]> {
    let (a, f) = (d.solve_axis, 1 - d.solve_axis);
    let mut p = [T::zero(); 2];
    p[f] = free_value;
    p[a] = guess;
    for _ in 0..60 {
        let r = d.mu(&p) - t;
        if r.abs() < T::tol(LEVEL_TOL) * T::lit(1e-2) {
            break;
        }
        let slope = d.dmu(&p)[a];
        if !(slope.abs() > T::tol(1e-14)) {
            return None;
        }
        p[a] = p[a] - r / slope;
        if !p[a].is_finite() {
            return None;
        }
    }
    ((d.mu(&p) - t).abs() < T::tol(LEVEL_TOL) && d.domain.contains(&p)).then_some(p)
}

/// The momentary front at level `t`, solving `mu(u) = t` on every line
/// through the given values of the free coordinate.
pub fn gallery_front<T: Real>(d: &IntegralDiagram<T>, t: T, params: &[T]) -> GalleryFront<T> {
    let mut pieces = Vec::new();
    let mut current: Vec<GalleryPoint<T>> = Vec::new();
    let mid = (d.domain.lo()[d.solve_axis] + d.domain.hi()[d.solve_axis]) * T::lit(0.5);
    for &s in params {
        let guess = current.last().map_or(mid, |p| p.u[d.solve_axis]);
        let hit = solve_on_line(d, t, s, guess).or_else(|| solve_on_line(d, t, s, mid));
        match hit {
            Some(u) => current.push(GalleryPoint { u, xy: d.g(&u) }),
            None => {
                if current.len() > 1 {
                    pieces.push(std::mem::take(&mut current));
                }
                current.clear();
            }
        }
    }
    if current.len() > 1 {
        pieces.push(current);
    }
    GalleryFront { t, pieces }
}

struct DetSystem<'a, T>(&'a IntegralDiagram<T>);

impl<T: Real> System<T> for DetSystem<'_, T> {
    fn input_dim(&self) -> usize {
        2
    }

    fn output_dim(&self) -> usize {
        1
    }

    fn residual(&self, z: &[T]) -> Result<Vec<T>> {
        Ok(vec![self.0.det_dg(z)])
    }

    fn jacobian(&self, z: &[T]) -> Result<Matrix<T>> {
        Ok(Matrix::from_rows(&[vec![self.0.c.ddet[0].eval(z), self.0.c.ddet[1].eval(z)]]))
    }
}

/// `{det Dg = 0, dmu(ker Dg) = 0}`: isolated points of rank drop on `S`.
struct RankDropSystem<'a, T>(&'a IntegralDiagram<T>);

impl<T: Real> System<T> for RankDropSystem<'_, T> {
    fn input_dim(&self) -> usize {
        2
    }

    fn output_dim(&self) -> usize {
        2
    }

    fn residual(&self, z: &[T]) -> Result<Vec<T>> {
        Ok(vec![self.0.det_dg(z), self.0.kernel_pairing(z)])
    }
}

/// Two points on one level with the same image.
struct PairSystem<'a, T> {
    d: &'a IntegralDiagram<T>,
    t: T,
}

impl<T: Real> System<T> for PairSystem<'_, T> {
    fn input_dim(&self) -> usize {
        4
    }

    fn output_dim(&self) -> usize {
        4
    }

    fn residual(&self, z: &[T]) -> Result<Vec<T>> {
        let (a, b) = (&z[..2], &z[2..]);
        let (ga, gb) = (self.d.g(a), self.d.g(b));
        Ok(vec![self.d.mu(a) - self.t, self.d.mu(b) - self.t, ga[0] - gb[0], ga[1] - gb[1]])
    }
}

/// Connected pieces of `S = {det Dg = 0}` inside the box, seeded from sign
/// changes of `det Dg` along the lines of a `samples x samples` grid.
pub fn singular_curves<T: Real>(d: &IntegralDiagram<T>, samples: usize) -> Vec<Vec<[T; 2]>> {
    let (lo, hi) = (d.domain.lo().to_vec(), d.domain.hi().to_vec());
    let n = samples.max(4);
    let at = |axis: usize, i: usize| lo[axis] + (hi[axis] - lo[axis]) * T::from_count(i) / T::from_count(n - 1);
    let step = dist(&lo, &hi) / T::lit(400.0);
    let mut seeds = Vec::new();
    for axis in 0..2 {
        for i in 0..n {
            for j in 0..n - 1 {
                let point = |k: usize| {
                    let mut p = [T::zero(); 2];
                    p[axis] = at(axis, i);
                    p[1 - axis] = at(1 - axis, k);
                    p
                };
                let (a, b) = (point(j), point(j + 1));
                let (fa, fb) = (d.det_dg(&a), d.det_dg(&b));
                if fa == T::zero() {
                    seeds.push(a);
                } else if fa.signum() != fb.signum() && fb != T::zero() {
                    let (mut a, mut b, mut fa) = (a, b, fa);
                    for _ in 0..60 {
                        let m = [(a[0] + b[0]) * T::lit(0.5), (a[1] + b[1]) * T::lit(0.5)];
                        let fm = d.det_dg(&m);
                        if fm.signum() == fa.signum() {
                            a = m;
                            fa = fm;
                        } else {
                            b = m;
                        }
                    }
                    seeds.push(a);
                }
            }
        }
    }
    let sys = DetSystem(d);
    let mut curves: Vec<Vec<[T; 2]>> = Vec::new();
    for s in seeds {
        let near = curves
            .iter()
            .any(|c| c.windows(2).any(|w| crate::fronts::polyline::segment_distance(&s, &w[0], &w[1]) < step * T::lit(2.0)));
        if near {
            continue;
        }
        if let Ok(curve) = continue_curve(&sys, &s, step, 20_000, &d.domain) {
            if curve.points.len() > 1 {
                curves.push(curve.points.iter().map(|p| [p[0], p[1]]).collect());
            }
        }
    }
    curves
}

/// Caustic, envelope and Maxwell parts of the discriminant of `{W_t}` for
/// `t` in `t_range`. `samples` sets the seeding grid for `S` and the number
/// of lines per front in the Maxwell search.
pub fn gallery_discriminant<T: Real>(
    d: &IntegralDiagram<T>,
    t_range: &Range<T>,
    samples: usize,
) -> DiscriminantDecomposition<T> {
    let mut out = DiscriminantDecomposition::default();
    let in_range = |u: &[T; 2]| {
        let t = d.mu(u);
        t >= t_range.lo && t <= t_range.hi
    };
    let tol = T::tol(CAUSTIC_TOL);
    let mut isolated: Vec<[T; 2]> = Vec::new();
    for curve in singular_curves(d, samples) {
        let mut run: Vec<CausticPoint<T>> = Vec::new();
        for (i, p) in curve.iter().enumerate() {
            let kp = d.kernel_pairing(p);
            if in_range(p) && kp.abs() < tol {
                run.push(CausticPoint { x: d.g(p).to_vec(), q: p.to_vec() });
                continue;
            }
            if run.len() > 1 {
                out.caustic.push(CausticCurve { points: std::mem::take(&mut run), closed: false });
            }
            run.clear();
            if in_range(p) {
                out.delta.push(DeltaPoint { x: d.g(p).to_vec(), t: d.mu(p), q: p.to_vec() });
            }
            if let Some(next) = curve.get(i + 1) {
                let kn = d.kernel_pairing(next);
                if kn.abs() >= tol && kp.signum() != kn.signum() {
                    if let Ok(z) = newton_solve(&RankDropSystem(d), p, &[]) {
                        let z = [z[0], z[1]];
                        if d.domain.contains(&z) && in_range(&z) && isolated.iter().all(|w| dist(w, &z) > T::lit(1e-6)) {
                            isolated.push(z);
                        }
                    }
                }
            }
        }
        if run.len() > 1 {
            out.caustic.push(CausticCurve { points: run, closed: false });
        }
    }
    for z in isolated {
        out.caustic.push(CausticCurve {
            points: vec![CausticPoint { x: d.g(&z).to_vec(), q: z.to_vec() }],
            closed: false,
        });
    }
    if d.kind != GermKind::MixedFold {
        out.maxwell = gallery_maxwell(d, t_range, samples);
    }
    out
}

fn gallery_maxwell<T: Real>(d: &IntegralDiagram<T>, t_range: &Range<T>, samples: usize) -> Vec<MaxwellPoint<T>> {
    let params = d.default_params(samples * 4);
    let found: Vec<Vec<MaxwellPoint<T>>> = t_range
        .values()
        .par_iter()
        .map(|&t| {
            let front = gallery_front(d, t, &params);
            let mut hits = Vec::new();
            for piece in &front.pieces {
                let xy: Vec<Vec<T>> = piece.iter().map(|p| p.xy.to_vec()).collect();
                for c in self_intersections(&xy, false) {
                    let (a, b) = (&piece[c.first_segment], &piece[c.second_segment]);
                    let seed = [a.u[0], a.u[1], b.u[0], b.u[1]];
                    let Ok(z) = newton_solve(&PairSystem { d, t }, &seed, &[]) else {
                        continue;
                    };
                    let (ua, ub) = ([z[0], z[1]], [z[2], z[3]]);
                    if dist(&ua, &ub) >= T::lit(MAXWELL_SEPARATION) && d.domain.contains(&ua) && d.domain.contains(&ub) {
                        hits.push(MaxwellPoint {
                            x: d.g(&ua).to_vec(),
                            q: ua.to_vec(),
                            q_prime: ub.to_vec(),
                        });
                    }
                }
            }
            hits
        })
        .collect();
    found.into_iter().flatten().collect()
}

/// Exponent `e >= 1` of a power law `|a| ~ |b|^e` between the coordinates of
/// points on one branch through the origin, fitted in log-log scale.
pub fn semicubical_exponent<T: Real>(points: &[[T; 2]]) -> Option<T> {
    let logs: Vec<(T, T)> = points
        .iter()
        .filter(|p| p[0].abs() > T::lit(1e-6) && p[1].abs() > T::lit(1e-6))
        .map(|p| (p[0].abs().ln(), p[1].abs().ln()))
        .collect();
    if logs.len() < 3 {
        return None;
    }
    let m = T::from_count(logs.len());
    let (sx, sy) = logs.iter().fold((T::zero(), T::zero()), |(a, b), (x, y)| (a + *x, b + *y));
    let (mx, my) = (sx / m, sy / m);
    let (sxy, sxx) = logs.iter().fold((T::zero(), T::zero()), |(a, b), (x, y)| {
        (a + (*x - mx) * (*y - my), b + (*x - mx) * (*x - mx))
    });
    if !(sxx > T::zero()) {
        return None;
    }
    let slope = sxy / sxx;
    Some(if slope.abs() >= T::one() { slope.abs() } else { T::one() / slope.abs() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn germ(id: usize) -> IntegralDiagram<f64> {
        gallery_family(id, &AlphaChoice::Zero).unwrap()
    }

    #[test]
    fn exact_normal_forms() {
        let d = germ(2);
        let vars = VarSet::new(["u1", "u2"]);
        let p = |s: &str| parse(s, &vars).unwrap().to_polynomial(2);
        assert_eq!(d.mu_polynomial(), &p("2/3*u1^3 + u2"));
        assert_eq!(d.g_polynomials(), &[p("u1^2"), p("u2")]);
        let d = germ(5);
        assert_eq!(d.mu_polynomial(), &p("u2"));
        assert_eq!(d.g_polynomials(), &[p("u1"), p("u2^3 + u1*u2")]);
        assert_eq!(germ(4).mu_polynomial(), &p("3/4*u1^4 + 1/2*u1^2*u2 + u2"));
        assert!(matches!(gallery_family::<f64>(7, &AlphaChoice::Zero), Err(Error::UnknownGerm(7))));
        assert!(matches!(gallery_family::<f64>(0, &AlphaChoice::Zero), Err(Error::UnknownGerm(0))));
        for id in 1..=6 {
            assert!(germ(id).submersion_margin(41) > 0.1, "germ {id}");
        }
        assert_eq!(germ(6).kind().label(), "mixed fold");
    }

    #[test]
    fn modulus_is_composed_with_g() {
        let alpha = AlphaChoice::parse("v1 + v2^2").unwrap();
        let d = gallery_family::<f64>(5, &alpha).unwrap();
        let u = [0.3, -0.7];
        let g = d.g(&u);
        assert!((d.mu(&u) - (u[1] + g[0] + g[1] * g[1])).abs() < 1e-14);
    }

    #[test]
    fn germ_two_front_is_a_semicubical_cusp() {
        let d = germ(2);
        let f = gallery_front(&d, 0.0, &d.default_params(201));
        assert!(f.point_count() > 150);
        for p in f.pieces.iter().flatten() {
            assert!((d.mu(&p.u)).abs() < 1e-10);
            let [x, y] = p.xy;
            assert!((y * y - 4.0 / 9.0 * x * x * x).abs() < 1e-10);
        }
        assert_eq!(f.cusp_count(), 1);
    }

    #[test]
    fn trivial_and_clairaut_fronts_are_lines() {
        let d = germ(1);
        for t in [-0.5, 0.0, 0.8] {
            let f = gallery_front(&d, t, &d.default_params(50));
            assert!(f.pieces.iter().flatten().all(|p| (p.xy[1] - t).abs() < 1e-12));
        }
        let d = germ(5);
        let f = gallery_front(&d, 0.3, &d.default_params(50));
        for p in f.pieces.iter().flatten() {
            assert!((p.xy[1] - (0.027 + p.xy[0] * 0.3)).abs() < 1e-12);
        }
        for i in 0..=20 {
            let t = -1.0 + 0.1 * i as f64;
            assert_eq!(gallery_front(&d, t, &d.default_params(301)).cusp_count(), 0, "t = {t}");
        }
    }

    #[test]
    fn regular_cusp_birth() {
        let d = germ(4);
        let params = d.default_params(601);
        assert_eq!(gallery_front(&d, 0.3, &params).cusp_count(), 0);
        assert_eq!(gallery_front(&d, -0.3, &params).cusp_count(), 2);
    }

    #[test]
    fn germ_four_caustic_is_semicubical() {
        let d = germ(4);
        let disc = gallery_discriminant(&d, &Range::new(-2.0, 2.0, 0.1).unwrap(), 41);
        let pts = disc.caustic_points();
        assert!(pts.len() > 100);
        for p in &pts {
            let (x, y) = (p.x[0], p.x[1]);
            assert!((27.0 * x * x + 4.0 * y.powi(3)).abs() < 1e-6 * y.abs().powi(3).max(1.0));
        }
        assert!(disc.delta.is_empty());
        let branch: Vec<[f64; 2]> = pts.iter().filter(|p| p.q[0] > 0.0).map(|p| [p.x[0], p.x[1]]).collect();
        let e = semicubical_exponent(&branch).unwrap();
        assert!((e - 1.5).abs() < 0.02, "{e}");
        // the Maxwell stratum is the half-axis x = 0, y < 0
        assert!(!disc.maxwell.is_empty());
        for m in &disc.maxwell {
            assert!(m.x[0].abs() < 1e-8 && m.x[1] < 0.0);
            assert!((m.q[0] + m.q_prime[0]).abs() < 1e-8);
        }
    }

    #[test]
    fn germ_five_envelope_is_semicubical() {
        let d = germ(5);
        let disc = gallery_discriminant(&d, &Range::new(-1.0, 1.0, 0.1).unwrap(), 41);
        assert!(disc.caustic.is_empty());
        assert!(disc.maxwell.is_empty());
        assert!(disc.delta.len() > 100);
        for p in &disc.delta {
            let (x, y, t) = (p.x[0], p.x[1], p.t);
            assert!((4.0 * x.powi(3) + 27.0 * y * y).abs() < 1e-6 * x.abs().powi(3).max(1.0));
            // elimination system of the envelope of y = t^3 + x t
            assert!((y - t.powi(3) - x * t).abs() < 1e-10);
            assert!((3.0 * t * t + x).abs() < 1e-8);
        }
        let branch: Vec<[f64; 2]> = disc.delta.iter().filter(|p| p.t > 0.0).map(|p| [p.x[0], p.x[1]]).collect();
        let e = semicubical_exponent(&branch).unwrap();
        assert!((e - 1.5).abs() < 0.02, "{e}");
    }

    #[test]
    fn trivial_germ_has_empty_discriminant() {
        let disc = gallery_discriminant(&germ(1), &Range::new(-1.0, 1.0, 0.25).unwrap(), 21);
        assert!(disc.caustic.is_empty() && disc.maxwell.is_empty() && disc.delta.is_empty());
    }

    #[test]
    fn mixed_fold_has_caustic_and_envelope() {
        let d = germ(6);
        let disc = gallery_discriminant(&d, &Range::new(-1.0, 1.0, 0.1).unwrap(), 41);
        assert!(!disc.delta.is_empty());
        let caustic = disc.caustic_points();
        assert!(!caustic.is_empty());
        assert!(caustic.iter().any(|p| p.q[0].abs() < 1e-6 && p.q[1].abs() < 1e-6));
        assert!(disc.maxwell.is_empty());
    }

    #[test]
    fn modulus_keeps_the_caustic_shape() {
        let alpha = AlphaChoice::parse("v1^2 + 1/3*v2").unwrap();
        let d = gallery_family::<f64>(4, &alpha).unwrap();
        let disc = gallery_discriminant(&d, &Range::new(-2.0, 2.0, 0.5).unwrap(), 41);
        let pts = disc.caustic_points();
        assert!(pts.len() > 100);
        assert!(pts.iter().all(|p| (27.0 * p.x[0].powi(2) + 4.0 * p.x[1].powi(3)).abs() < 1e-6));
    }
}
