//! Parametrised curves in the plane and surfaces in space, with their
//! normals and principal curvatures.
//!
//! Orientation: for curves `n = (y', -x') / |X'|`, the outward normal of a
//! counter-clockwise closed curve; for surfaces `n = X_1 x X_2 / |X_1 x X_2|`.
//! Curvatures are signed against `-n`, so convex closed curves and spheres
//! have positive curvature and the centres of curvature are `X - n / kappa`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numcore::field::{grad, hessian, DomainBox, ScalarField};
use crate::real::{dot, norm2, Real};

/// Metric determinants below this are treated as degenerate.
pub const METRIC_EPS: f64 = 1e-14;

#[derive(Clone)]
pub enum Chart<T: Real> {
    /// `(r cos u, r sin u)`
    Circle { r: T },
    /// `(a cos u, b sin u)`
    Ellipse { a: T, b: T },
    /// `(u, a u^2)`
    Parabola { a: T },
    /// `(u1, u2, g(u1, u2))`
    Graph(Arc<dyn ScalarField<T>>),
    /// `(a cos u1 cos u2, b sin u1 cos u2, c sin u2)`
    Ellipsoid { a: T, b: T, c: T },
}

impl<T: Real> std::fmt::Debug for Chart<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Chart::Circle { r } => write!(f, "Circle(r = {r:?})"),
            Chart::Ellipse { a, b } => write!(f, "Ellipse(a = {a:?}, b = {b:?})"),
            Chart::Parabola { a } => write!(f, "Parabola(a = {a:?})"),
            Chart::Graph(_) => write!(f, "Graph"),
            Chart::Ellipsoid { a, b, c } => write!(f, "Ellipsoid(a = {a:?}, b = {b:?}, c = {c:?})"),
        }
    }
}

/// Position and first and second partial derivatives of a chart at one parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet<T> {
    pub x: Vec<T>,
    /// `d1[i] = dX/du_i`
    pub d1: Vec<Vec<T>>,
    /// `d2[i][j] = d2X/du_i du_j`
    pub d2: Vec<Vec<Vec<T>>>,
}

#[derive(Clone, Debug)]
pub struct ParametricHypersurface<T: Real> {
    chart: Chart<T>,
    u_domain: DomainBox<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureData<T> {
    /// Principal curvatures in ascending order; one entry for curves.
    pub kappa: Vec<T>,
    /// Unit principal directions in the ambient space (surfaces only).
    pub directions: Vec<Vec<T>>,
}

fn tau<T: Real>() -> T {
    T::lit(std::f64::consts::TAU)
}

impl<T: Real> ParametricHypersurface<T> {
    pub fn new(chart: Chart<T>, u_domain: DomainBox<T>) -> Result<Self> {
        let s = Self { chart, u_domain };
        if s.u_domain.dim() != s.param_dim() {
            return Err(Error::Dimension("parameter box does not match the chart".into()));
        }
        if let Chart::Graph(g) = &s.chart {
            if g.arity() != 2 {
                return Err(Error::Dimension("graph surfaces need a field of two variables".into()));
            }
        }
        Ok(s)
    }

    fn closed_curve(chart: Chart<T>) -> Self {
        let dom = DomainBox::new(vec![T::zero()], vec![tau()]).expect("valid box").with_periodic(0);
        Self { chart, u_domain: dom }
    }

    pub fn circle(r: T) -> Self {
        Self::closed_curve(Chart::Circle { r })
    }

    pub fn ellipse(a: T, b: T) -> Self {
        Self::closed_curve(Chart::Ellipse { a, b })
    }

    /// The parabola `y = a x^2` over `|x| <= half_width`.
    pub fn parabola(a: T, half_width: T) -> Self {
        Self {
            chart: Chart::Parabola { a },
            u_domain: DomainBox::new(vec![-half_width], vec![half_width]).expect("valid box"),
        }
    }

    pub fn graph(g: Arc<dyn ScalarField<T>>, u_domain: DomainBox<T>) -> Result<Self> {
        Self::new(Chart::Graph(g), u_domain)
    }

    /// Ellipsoid with longitude periodic and latitude kept `0.05` away from the poles.
    pub fn ellipsoid(a: T, b: T, c: T) -> Self {
        let lat = T::lit(std::f64::consts::FRAC_PI_2 - 0.05);
        Self {
            chart: Chart::Ellipsoid { a, b, c },
            u_domain: DomainBox::new(vec![T::zero(), -lat], vec![tau(), lat])
                .expect("valid box")
                .with_periodic(0),
        }
    }

    pub fn sphere(r: T) -> Self {
        Self::ellipsoid(r, r, r)
    }

    pub fn chart(&self) -> &Chart<T> {
        &self.chart
    }

    pub fn u_domain(&self) -> &DomainBox<T> {
        &self.u_domain
    }

    /// Ambient dimension `n`.
    pub fn ambient_dim(&self) -> usize {
        match self.chart {
            Chart::Circle { .. } | Chart::Ellipse { .. } | Chart::Parabola { .. } => 2,
            Chart::Graph(_) | Chart::Ellipsoid { .. } => 3,
        }
    }

    pub fn param_dim(&self) -> usize {
        self.ambient_dim() - 1
    }

    pub fn is_closed_curve(&self) -> bool {
        self.ambient_dim() == 2 && self.u_domain.is_periodic(0)
    }

    pub fn point(&self, u: &[T]) -> Result<Vec<T>> {
        Ok(self.jet(u)?.x)
    }

    pub fn jet(&self, u: &[T]) -> Result<Jet<T>> {
        if u.len() != self.param_dim() {
            return Err(Error::Dimension("parameter has the wrong length".into()));
        }
        let z = T::zero();
        Ok(match &self.chart {
            Chart::Circle { r } => {
                let (s, c) = u[0].sin_cos();
                Jet {
                    x: vec![*r * c, *r * s],
                    d1: vec![vec![-*r * s, *r * c]],
                    d2: vec![vec![vec![-*r * c, -*r * s]]],
                }
            }
            Chart::Ellipse { a, b } => {
                let (s, c) = u[0].sin_cos();
                Jet {
                    x: vec![*a * c, *b * s],
                    d1: vec![vec![-*a * s, *b * c]],
                    d2: vec![vec![vec![-*a * c, -*b * s]]],
                }
            }
            Chart::Parabola { a } => {
                let two = T::lit(2.0);
                Jet {
                    x: vec![u[0], *a * u[0] * u[0]],
                    d1: vec![vec![T::one(), two * *a * u[0]]],
                    d2: vec![vec![vec![z, two * *a]]],
                }
            }
            Chart::Graph(g) => {
                let gv = crate::numcore::field::eval(g.as_ref(), u)?;
                let gg = grad(g.as_ref(), u)?;
                let gh = hessian(g.as_ref(), u)?;
                let o = T::one();
                Jet {
                    x: vec![u[0], u[1], gv],
                    d1: vec![vec![o, z, gg[0]], vec![z, o, gg[1]]],
                    d2: vec![
                        vec![vec![z, z, gh[(0, 0)]], vec![z, z, gh[(0, 1)]]],
                        vec![vec![z, z, gh[(1, 0)]], vec![z, z, gh[(1, 1)]]],
                    ],
                }
            }
            Chart::Ellipsoid { a, b, c } => {
                let (s1, c1) = u[0].sin_cos();
                let (s2, c2) = u[1].sin_cos();
                let (a, b, c) = (*a, *b, *c);
                let x12 = vec![a * s1 * s2, -b * c1 * s2, z];
                Jet {
                    x: vec![a * c1 * c2, b * s1 * c2, c * s2],
                    d1: vec![vec![-a * s1 * c2, b * c1 * c2, z], vec![-a * c1 * s2, -b * s1 * s2, c * c2]],
                    d2: vec![
                        vec![vec![-a * c1 * c2, -b * s1 * c2, z], x12.clone()],
                        vec![x12, vec![-a * c1 * c2, -b * s1 * c2, -c * s2]],
                    ],
                }
            }
        })
    }

    fn metric(&self, jet: &Jet<T>) -> Result<Vec<Vec<T>>> {
        let g: Vec<Vec<T>> = jet
            .d1
            .iter()
            .map(|a| jet.d1.iter().map(|b| dot(a, b)).collect())
            .collect();
        let det = if g.len() == 1 {
            g[0][0]
        } else {
            g[0][0] * g[1][1] - g[0][1] * g[1][0]
        };
        if !(det >= T::lit(METRIC_EPS)) {
            return Err(Error::DegenerateMetric { det: det.to_f64_lossy() });
        }
        Ok(g)
    }

    /// Unit normal from a jet.
    pub fn normal_of(&self, jet: &Jet<T>) -> Result<Vec<T>> {
        self.metric(jet)?;
        let raw = if jet.d1.len() == 1 {
            vec![jet.d1[0][1], -jet.d1[0][0]]
        } else {
            let (a, b) = (&jet.d1[0], &jet.d1[1]);
            vec![
                a[1] * b[2] - a[2] * b[1],
                a[2] * b[0] - a[0] * b[2],
                a[0] * b[1] - a[1] * b[0],
            ]
        };
        let len = norm2(&raw);
        Ok(raw.into_iter().map(|v| v / len).collect())
    }

    pub fn normal(&self, u: &[T]) -> Result<Vec<T>> {
        self.normal_of(&self.jet(u)?)
    }

    pub fn curvature(&self, u: &[T]) -> Result<CurvatureData<T>> {
        let jet = self.jet(u)?;
        let g = self.metric(&jet)?;
        let nrm = self.normal_of(&jet)?;
        let second = |i: usize, j: usize| -dot(&jet.d2[i][j], &nrm);
        if jet.d1.len() == 1 {
            return Ok(CurvatureData {
                kappa: vec![second(0, 0) / g[0][0]],
                directions: Vec::new(),
            });
        }
        let (e, f, gg) = (g[0][0], g[0][1], g[1][1]);
        let (l, m, nn) = (second(0, 0), second(0, 1), second(1, 1));
        // det(II - k I) = 0
        let det_i = e * gg - f * f;
        let two = T::lit(2.0);
        let mean = (e * nn - two * f * m + gg * l) / (two * det_i);
        let gauss = (l * nn - m * m) / det_i;
        let disc = (mean * mean - gauss).max(T::zero()).sqrt();
        let kappa = vec![mean - disc, mean + disc];
        let directions = kappa
            .iter()
            .map(|&k| {
                // (II - k I) w = 0; take the better conditioned row
                let r1 = (l - k * e, m - k * f);
                let r2 = (m - k * f, nn - k * gg);
                let r = if r1.0.abs() + r1.1.abs() >= r2.0.abs() + r2.1.abs() { r1 } else { r2 };
                let w = if r.0.abs() + r.1.abs() > T::lit(1e-12) * (l.abs() + m.abs() + nn.abs() + T::one()) {
                    (-r.1, r.0)
                } else if k == kappa[0] {
                    (T::one(), T::zero())
                } else {
                    // umbilic: any direction, pick one orthogonal to the first
                    (-f, e)
                };
                let v: Vec<T> = (0..3).map(|c| w.0 * jet.d1[0][c] + w.1 * jet.d1[1][c]).collect();
                let len = norm2(&v);
                v.into_iter().map(|x| x / len).collect()
            })
            .collect();
        Ok(CurvatureData { kappa, directions })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::field::PolyField;
    use crate::numcore::parse;
    use crate::numcore::VarSet;

    #[test]
    fn circle_and_ellipse_curvature() {
        let c = ParametricHypersurface::<f64>::circle(3.0);
        for u in [0.0, 1.0, 4.0] {
            assert!((c.curvature(&[u]).unwrap().kappa[0] - 1.0 / 3.0).abs() < 1e-12);
            assert!((norm2(&c.normal(&[u]).unwrap()) - 1.0).abs() < 1e-12);
        }
        let e = ParametricHypersurface::<f64>::ellipse(2.0, 1.0);
        assert!((e.curvature(&[0.0]).unwrap().kappa[0] - 2.0).abs() < 1e-12);
        assert_eq!(e.normal(&[0.0]).unwrap(), vec![1.0, 0.0]);
    }

    #[test]
    fn plane_and_sphere_curvature() {
        let vars = VarSet::indexed("u", 2);
        let zero = parse("0*u1", &vars).unwrap().to_polynomial(2);
        let plane = ParametricHypersurface::<f64>::graph(Arc::new(PolyField::new(zero)), DomainBox::cube(2, -1.0, 1.0)).unwrap();
        assert_eq!(plane.curvature(&[0.2, 0.3]).unwrap().kappa, vec![0.0, 0.0]);
        let s = ParametricHypersurface::<f64>::sphere(2.0);
        let k = s.curvature(&[0.7, 0.4]).unwrap().kappa;
        assert!((k[0] - 0.5).abs() < 1e-12 && (k[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn ellipsoid_shape_operator_invariants() {
        let s = ParametricHypersurface::<f64>::ellipsoid(3.0, 2.0, 1.0);
        let u = [0.4, 0.3];
        let jet = s.jet(&u).unwrap();
        let n = s.normal_of(&jet).unwrap();
        let g: Vec<Vec<f64>> = (0..2).map(|i| (0..2).map(|j| dot(&jet.d1[i], &jet.d1[j])).collect()).collect();
        let h: Vec<Vec<f64>> = (0..2).map(|i| (0..2).map(|j| -dot(&jet.d2[i][j], &n)).collect()).collect();
        let det_g = g[0][0] * g[1][1] - g[0][1] * g[0][1];
        let gauss = (h[0][0] * h[1][1] - h[0][1] * h[0][1]) / det_g;
        let trace = (g[1][1] * h[0][0] - 2.0 * g[0][1] * h[0][1] + g[0][0] * h[1][1]) / det_g;
        let c = s.curvature(&u).unwrap();
        assert!((c.kappa[0] * c.kappa[1] - gauss).abs() < 1e-8);
        assert!((c.kappa[0] + c.kappa[1] - trace).abs() < 1e-8);
        // principal directions are tangent and orthogonal
        assert!(dot(&c.directions[0], &c.directions[1]).abs() < 1e-8);
        assert!(dot(&c.directions[0], &n).abs() < 1e-12);
    }

    #[test]
    fn degenerate_metric_is_reported() {
        let c = ParametricHypersurface::<f64>::circle(0.0);
        assert!(matches!(c.curvature(&[0.0]), Err(Error::DegenerateMetric { .. })));
    }
}
