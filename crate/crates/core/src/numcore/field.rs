//! Scalar fields on boxes in `R^m`, with closed-form or finite-difference derivatives.

use std::sync::Arc;

use super::matrix::Matrix;
use super::poly::{CompiledPoly, Polynomial};
use crate::error::{Error, Result};
use crate::real::Real;

/// Relative step of the central-difference gradient.
pub const FD_STEP: f64 = 1e-5;

/// Relative step for Hessians differenced from values alone. Second
/// differences lose two orders of the step, so the step is larger.
pub const FD_STEP_SECOND: f64 = 1e-4;

/// Axis-aligned box. Axes may be unbounded (infinite limits) or periodic.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainBox<T> {
    lo: Vec<T>,
    hi: Vec<T>,
    periodic: Vec<bool>,
}

impl<T: Real> DomainBox<T> {
    pub fn new(lo: Vec<T>, hi: Vec<T>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::Dimension(format!(
                "box bounds have lengths {} and {}",
                lo.len(),
                hi.len()
            )));
        }
        if let Some(i) = (0..lo.len()).find(|&i| !(lo[i] < hi[i])) {
            return Err(Error::InvalidArgument(format!("empty box along axis {i}")));
        }
        let periodic = vec![false; lo.len()];
        Ok(Self { lo, hi, periodic })
    }

    pub fn unbounded(m: usize) -> Self {
        Self {
            lo: vec![T::neg_infinity(); m],
            hi: vec![T::infinity(); m],
            periodic: vec![false; m],
        }
    }

    pub fn cube(m: usize, lo: T, hi: T) -> Self {
        Self::new(vec![lo; m], vec![hi; m]).expect("cube with lo < hi")
    }

    /// Marks an axis as periodic: containment ignores it and differences wrap.
    pub fn with_periodic(mut self, axis: usize) -> Self {
        self.periodic[axis] = true;
        self
    }

    /// Concatenation `self x other`.
    pub fn product(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.lo.extend_from_slice(&other.lo);
        out.hi.extend_from_slice(&other.hi);
        out.periodic.extend_from_slice(&other.periodic);
        out
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[T] {
        &self.lo
    }

    pub fn hi(&self) -> &[T] {
        &self.hi
    }

    pub fn is_periodic(&self, axis: usize) -> bool {
        self.periodic[axis]
    }

    pub fn period(&self, axis: usize) -> Option<T> {
        self.periodic[axis].then(|| self.hi[axis] - self.lo[axis])
    }

    pub fn contains(&self, p: &[T]) -> bool {
        p.len() == self.dim()
            && p.iter().enumerate().all(|(i, &v)| {
                v.is_finite() && (self.periodic[i] || (v >= self.lo[i] && v <= self.hi[i]))
            })
    }

    /// Difference `a - b`, taken modulo the period on periodic axes.
    pub fn diff(&self, a: &[T], b: &[T]) -> Vec<T> {
        (0..a.len())
            .map(|i| {
                let d = a[i] - b[i];
                match self.period(i) {
                    Some(per) => d - per * (d / per).round(),
                    None => d,
                }
            })
            .collect()
    }

    pub fn distance(&self, a: &[T], b: &[T]) -> T {
        crate::real::norm2(&self.diff(a, b))
    }
}

/// A smooth real function on a box in `R^m`.
///
/// Implementors provide values and, when they can, exact derivatives. Callers
/// should use the free functions [`eval`], [`grad`] and [`hessian`], which add
/// domain and finiteness checks and fall back to finite differences.
pub trait ScalarField<T: Real>: Send + Sync {
    fn arity(&self) -> usize;

    fn domain(&self) -> &DomainBox<T>;

    fn value(&self, p: &[T]) -> T;

    fn has_closed_form(&self) -> bool {
        false
    }

    fn closed_gradient(&self, _p: &[T]) -> Option<Vec<T>> {
        None
    }

    fn closed_hessian(&self, _p: &[T]) -> Option<Matrix<T>> {
        None
    }
}

fn check_point<T: Real>(field: &(impl ScalarField<T> + ?Sized), p: &[T]) -> Result<()> {
    if p.len() != field.arity() {
        return Err(Error::Dimension(format!(
            "field of arity {} evaluated at a point of length {}",
            field.arity(),
            p.len()
        )));
    }
    if p.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!("evaluation point {p:?}")));
    }
    if !field.domain().contains(p) {
        return Err(Error::Domain(format!("{p:?}")));
    }
    Ok(())
}

fn finite<T: Real>(v: T, what: &str) -> Result<T> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(what.to_string()))
    }
}

pub fn eval<T: Real>(field: &(impl ScalarField<T> + ?Sized), p: &[T]) -> Result<T> {
    check_point(field, p)?;
    finite(field.value(p), "field value")
}

pub fn grad<T: Real>(field: &(impl ScalarField<T> + ?Sized), p: &[T]) -> Result<Vec<T>> {
    check_point(field, p)?;
    match field.closed_gradient(p) {
        Some(g) if g.iter().all(|v| v.is_finite()) => Ok(g),
        Some(_) => Err(Error::NonFinite("gradient".into())),
        None => fd_grad(field, p),
    }
}

fn fd_steps<T: Real>(field: &(impl ScalarField<T> + ?Sized), p: &[T], rel: f64) -> Result<Vec<T>> {
    let h = T::lit(rel);
    let dom = field.domain();
    p.iter()
        .enumerate()
        .map(|(i, &v)| {
            let step = h * v.abs().max(T::one());
            let ok = dom.is_periodic(i) || (v - step >= dom.lo()[i] && v + step <= dom.hi()[i]);
            if ok {
                Ok(step)
            } else {
                Err(Error::Domain(format!(
                    "finite-difference stencil leaves the box along axis {i} at {p:?}"
                )))
            }
        })
        .collect()
}

/// Central-difference gradient with step `1e-5 * max(1, |p_i|)`, regardless of
/// whether the field has a closed form.
pub fn fd_grad<T: Real>(field: &(impl ScalarField<T> + ?Sized), p: &[T]) -> Result<Vec<T>> {
    check_point(field, p)?;
    let steps = fd_steps(field, p, FD_STEP)?;
    let mut work = p.to_vec();
    let mut out = Vec::with_capacity(p.len());
    for (i, &h) in steps.iter().enumerate() {
        work[i] = p[i] + h;
        let fp = field.value(&work);
        work[i] = p[i] - h;
        let fm = field.value(&work);
        work[i] = p[i];
        out.push(finite((fp - fm) / (h + h), "finite-difference gradient")?);
    }
    Ok(out)
}

/// Symmetric Hessian. Closed form when available; otherwise central
/// differences of the gradient (if that is exact) or second differences of values.
pub fn hessian<T: Real>(field: &(impl ScalarField<T> + ?Sized), p: &[T]) -> Result<Matrix<T>> {
    check_point(field, p)?;
    if let Some(h) = field.closed_hessian(p) {
        return if h.is_finite() {
            Ok(h)
        } else {
            Err(Error::NonFinite("Hessian".into()))
        };
    }
    let m = p.len();
    let mut work = p.to_vec();
    let h = if field.has_closed_form() {
        let steps = fd_steps(field, p, FD_STEP)?;
        let mut cols = Vec::with_capacity(m);
        for (j, &s) in steps.iter().enumerate() {
            work[j] = p[j] + s;
            let gp = field.closed_gradient(&work).expect("closed form");
            work[j] = p[j] - s;
            let gm = field.closed_gradient(&work).expect("closed form");
            work[j] = p[j];
            cols.push((0..m).map(|i| (gp[i] - gm[i]) / (s + s)).collect::<Vec<T>>());
        }
        Matrix::from_fn(m, m, |i, j| cols[j][i]).symmetrize()
    } else {
        let s = fd_steps(field, p, FD_STEP_SECOND)?;
        let f0 = field.value(p);
        let four = T::lit(4.0);
        let mut hm = Matrix::zeros(m, m);
        for i in 0..m {
            work[i] = p[i] + s[i];
            let fp = field.value(&work);
            work[i] = p[i] - s[i];
            let fm = field.value(&work);
            work[i] = p[i];
            hm[(i, i)] = (fp - f0 - f0 + fm) / (s[i] * s[i]);
            for j in i + 1..m {
                let mut corner = |si: T, sj: T| {
                    work[i] = p[i] + si;
                    work[j] = p[j] + sj;
                    let v = field.value(&work);
                    work[i] = p[i];
                    work[j] = p[j];
                    v
                };
                let v = (corner(s[i], s[j]) - corner(s[i], -s[j]) - corner(-s[i], s[j])
                    + corner(-s[i], -s[j]))
                    / (four * s[i] * s[j]);
                hm[(i, j)] = v;
                hm[(j, i)] = v;
            }
        }
        hm
    };
    if h.is_finite() {
        Ok(h)
    } else {
        Err(Error::NonFinite("finite-difference Hessian".into()))
    }
}

/// Polynomial field with exact derivatives, evaluated in floating point.
#[derive(Clone, Debug)]
pub struct PolyField<T> {
    poly: Polynomial,
    value: CompiledPoly<T>,
    gradient: Vec<CompiledPoly<T>>,
    hessian: Vec<Vec<CompiledPoly<T>>>,
    domain: DomainBox<T>,
}

impl<T: Real> PolyField<T> {
    pub fn new(poly: Polynomial) -> Self {
        let m = poly.nvars();
        Self::with_domain(poly, DomainBox::unbounded(m))
    }

    pub fn with_domain(poly: Polynomial, domain: DomainBox<T>) -> Self {
        let m = poly.nvars();
        assert_eq!(domain.dim(), m, "domain dimension must match the variable count");
        let first: Vec<Polynomial> = (0..m).map(|i| poly.partial(i)).collect();
        let hessian = first
            .iter()
            .map(|d| (0..m).map(|j| d.partial(j).compile()).collect())
            .collect();
        Self {
            value: poly.compile(),
            gradient: first.iter().map(Polynomial::compile).collect(),
            hessian,
            poly,
            domain,
        }
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.poly
    }
}

impl<T: Real> ScalarField<T> for PolyField<T> {
    fn arity(&self) -> usize {
        self.poly.nvars()
    }

    fn domain(&self) -> &DomainBox<T> {
        &self.domain
    }

    fn value(&self, p: &[T]) -> T {
        self.value.eval(p)
    }

    fn has_closed_form(&self) -> bool {
        true
    }

    fn closed_gradient(&self, p: &[T]) -> Option<Vec<T>> {
        Some(self.gradient.iter().map(|g| g.eval(p)).collect())
    }

    fn closed_hessian(&self, p: &[T]) -> Option<Matrix<T>> {
        let m = self.arity();
        Some(Matrix::from_fn(m, m, |i, j| self.hessian[i][j].eval(p)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Unary {
    Sin,
    Cos,
    Exp,
}

/// `f(p) = g(p[var])` for a fixed elementary function `g`.
#[derive(Clone, Debug)]
pub struct UnaryFn<T> {
    kind: Unary,
    var: usize,
    domain: DomainBox<T>,
}

impl<T: Real> UnaryFn<T> {
    pub fn new(kind: Unary, arity: usize, var: usize) -> Self {
        assert!(var < arity);
        Self {
            kind,
            var,
            domain: DomainBox::unbounded(arity),
        }
    }

    fn derivs(&self, x: T) -> (T, T, T) {
        match self.kind {
            Unary::Sin => (x.sin(), x.cos(), -x.sin()),
            Unary::Cos => (x.cos(), -x.sin(), -x.cos()),
            Unary::Exp => (x.exp(), x.exp(), x.exp()),
        }
    }
}

impl<T: Real> ScalarField<T> for UnaryFn<T> {
    fn arity(&self) -> usize {
        self.domain.dim()
    }

    fn domain(&self) -> &DomainBox<T> {
        &self.domain
    }

    fn value(&self, p: &[T]) -> T {
        self.derivs(p[self.var]).0
    }

    fn has_closed_form(&self) -> bool {
        true
    }

    fn closed_gradient(&self, p: &[T]) -> Option<Vec<T>> {
        let mut g = vec![T::zero(); self.arity()];
        g[self.var] = self.derivs(p[self.var]).1;
        Some(g)
    }

    fn closed_hessian(&self, p: &[T]) -> Option<Matrix<T>> {
        let mut h = Matrix::zeros(self.arity(), self.arity());
        h[(self.var, self.var)] = self.derivs(p[self.var]).2;
        Some(h)
    }
}

type Gradient<T> = dyn Fn(&[T]) -> Vec<T> + Send + Sync;

/// Field defined by a closure; derivatives by finite differences unless a
/// gradient closure is supplied.
#[derive(Clone)]
pub struct FnField<T> {
    f: Arc<dyn Fn(&[T]) -> T + Send + Sync>,
    gradient: Option<Arc<Gradient<T>>>,
    domain: DomainBox<T>,
}

impl<T: Real> FnField<T> {
    pub fn new(domain: DomainBox<T>, f: impl Fn(&[T]) -> T + Send + Sync + 'static) -> Self {
        Self {
            f: Arc::new(f),
            gradient: None,
            domain,
        }
    }

    pub fn with_gradient(mut self, g: impl Fn(&[T]) -> Vec<T> + Send + Sync + 'static) -> Self {
        self.gradient = Some(Arc::new(g));
        self
    }
}

impl<T: Real> ScalarField<T> for FnField<T> {
    fn arity(&self) -> usize {
        self.domain.dim()
    }

    fn domain(&self) -> &DomainBox<T> {
        &self.domain
    }

    fn value(&self, p: &[T]) -> T {
        (self.f)(p)
    }

    fn has_closed_form(&self) -> bool {
        self.gradient.is_some()
    }

    fn closed_gradient(&self, p: &[T]) -> Option<Vec<T>> {
        self.gradient.as_ref().map(|g| g(p))
    }
}

/// `field - c`, keeping whatever derivatives the inner field has.
#[derive(Clone)]
pub struct Shifted<T> {
    inner: Arc<dyn ScalarField<T>>,
    shift: T,
}

impl<T: Real> Shifted<T> {
    pub fn new(inner: Arc<dyn ScalarField<T>>, shift: T) -> Self {
        Self { inner, shift }
    }
}

impl<T: Real> ScalarField<T> for Shifted<T> {
    fn arity(&self) -> usize {
        self.inner.arity()
    }

    fn domain(&self) -> &DomainBox<T> {
        self.inner.domain()
    }

    fn value(&self, p: &[T]) -> T {
        self.inner.value(p) - self.shift
    }

    fn has_closed_form(&self) -> bool {
        self.inner.has_closed_form()
    }

    fn closed_gradient(&self, p: &[T]) -> Option<Vec<T>> {
        self.inner.closed_gradient(p)
    }

    fn closed_hessian(&self, p: &[T]) -> Option<Matrix<T>> {
        self.inner.closed_hessian(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::expr::{parse, parse_family, VarSet};

    fn poly_field(text: &str, names: &[&str]) -> PolyField<f64> {
        let vars = VarSet::new(names.iter().copied());
        PolyField::new(parse(text, &vars).unwrap().to_polynomial(names.len()))
    }

    #[test]
    fn polynomial_gradient_examples() {
        let f = poly_field("q1^2", &["q1"]);
        assert_eq!(grad(&f, &[3.0]).unwrap(), vec![6.0]);
        let g = PolyField::<f64>::new(parse_family("q1^3 + x1*q1", 1, 1, false).unwrap().to_polynomial(2));
        assert_eq!(grad(&g, &[1.0, 2.0]).unwrap(), vec![5.0, 1.0]);
    }

    #[test]
    fn sine_gradient_by_differences() {
        let s = UnaryFn::<f64>::new(Unary::Sin, 1, 0);
        let g = fd_grad(&s, &[0.0]).unwrap();
        assert!((g[0] - 1.0).abs() < 1e-8);
    }

    #[test]
    fn hessian_examples() {
        let f = poly_field("q1^4", &["q1"]);
        assert_eq!(hessian(&f, &[1.0]).unwrap()[(0, 0)], 12.0);
        let g = poly_field("q1^2 + q2^2", &["q1", "q2"]);
        assert_eq!(hessian(&g, &[0.0, 0.0]).unwrap(), Matrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 2.0]]));
        let c = poly_field("q1^3", &["q1"]);
        let h = hessian(&c, &[0.0]).unwrap();
        assert_eq!(h[(0, 0)], 0.0);
        assert_eq!(h.numerical_rank(1e-8), 0);
    }

    #[test]
    fn value_only_hessian_is_symmetric_and_accurate() {
        let f = FnField::new(DomainBox::unbounded(2), |p: &[f64]| p[0].sin() * p[1].exp());
        let h = hessian(&f, &[0.3, -0.2]).unwrap();
        assert_eq!(h[(0, 1)], h[(1, 0)]);
        let exact = 0.3f64.cos() * (-0.2f64).exp();
        assert!((h[(0, 1)] - exact).abs() < 1e-6);
        assert!((h[(0, 0)] + 0.3f64.sin() * (-0.2f64).exp()).abs() < 1e-6);
    }

    #[test]
    fn stencil_leaving_the_box_is_a_domain_error() {
        let f = PolyField::with_domain(
            parse("q1^2", &VarSet::new(["q1"])).unwrap().to_polynomial(1),
            DomainBox::new(vec![0.0], vec![1.0]).unwrap(),
        );
        let g = FnField::new(f.domain().clone(), move |p: &[f64]| f.value(p));
        assert!(matches!(fd_grad(&g, &[0.0]), Err(Error::Domain(_))));
        assert!(matches!(eval(&g, &[2.0]), Err(Error::Domain(_))));
    }

    #[test]
    fn nan_values_are_errors() {
        let f = FnField::new(DomainBox::unbounded(1), |p: &[f64]| p[0].ln());
        assert!(matches!(eval(&f, &[-1.0]), Err(Error::NonFinite(_))));
    }

    #[test]
    fn periodic_difference_wraps() {
        let b = DomainBox::new(vec![0.0], vec![std::f64::consts::TAU]).unwrap().with_periodic(0);
        let d = b.diff(&[0.1], &[std::f64::consts::TAU - 0.1]);
        assert!((d[0] - 0.2).abs() < 1e-12);
        assert!(b.contains(&[-3.0]));
    }
}
