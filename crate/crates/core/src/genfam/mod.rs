//! Generating families `F(q, x)`, their critical sets and the maps built on them.
//!
//! Points of the ambient space are stored as one vector `(q1..qk, x1..xn)`;
//! the graph-like big family adds a trailing `t`.

pub mod catalog;

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numcore::field::{eval, grad, hessian, DomainBox, PolyField, ScalarField, Shifted};
use crate::numcore::matrix::{Matrix, DEFAULT_RANK_EPS};
use crate::numcore::newton::{newton_solve, System};
use crate::numcore::{parse_family, Polynomial};
use crate::real::{inf_norm, Real};

/// Residual below which a point counts as lying on a critical set.
pub const MEMBERSHIP_TOL: f64 = 1e-8;

/// Critical points of one fibre closer than this are merged.
pub const DEDUP_RADIUS: f64 = 1e-6;

#[derive(Clone)]
pub struct GeneratingFamily<T: Real> {
    k: usize,
    n: usize,
    field: Arc<dyn ScalarField<T>>,
    poly: Option<Polynomial>,
    base_point: Option<Vec<T>>,
}

impl<T: Real> std::fmt::Debug for GeneratingFamily<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GeneratingFamily")
            .field("k", &self.k)
            .field("n", &self.n)
            .field("poly", &self.poly)
            .field("base_point", &self.base_point)
            .finish_non_exhaustive()
    }
}

impl<T: Real> GeneratingFamily<T> {
    pub fn new(k: usize, n: usize, field: Arc<dyn ScalarField<T>>) -> Result<Self> {
        if k == 0 || n == 0 {
            return Err(Error::Dimension("a generating family needs k >= 1 and n >= 1".into()));
        }
        if field.arity() != k + n {
            return Err(Error::Dimension(format!(
                "field of arity {} cannot carry k = {k}, n = {n}",
                field.arity()
            )));
        }
        Ok(Self {
            k,
            n,
            field,
            poly: None,
            base_point: None,
        })
    }

    /// Parses a polynomial family in `q1..qk, x1..xn`.
    pub fn from_expr(text: &str, k: usize, n: usize, domain: Option<DomainBox<T>>) -> Result<Self> {
        let poly = parse_family(text, k, n, false)?.to_polynomial(k + n);
        let domain = domain.unwrap_or_else(|| DomainBox::unbounded(k + n));
        if domain.dim() != k + n {
            return Err(Error::Dimension("domain box does not match k + n".into()));
        }
        let mut fam = Self::new(k, n, Arc::new(PolyField::with_domain(poly.clone(), domain)))?;
        fam.poly = Some(poly);
        Ok(fam)
    }

    /// Declares a base point; the family must be a Morse family there.
    pub fn with_base_point(mut self, point: Vec<T>) -> Result<Self> {
        let check = morse_family_check(&self, &point)?;
        if !check.pass {
            return Err(Error::NotMorseFamily {
                rank: check.rank,
                expected: self.k,
            });
        }
        self.base_point = Some(point);
        Ok(self)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &Arc<dyn ScalarField<T>> {
        &self.field
    }

    pub fn polynomial(&self) -> Option<&Polynomial> {
        self.poly.as_ref()
    }

    pub fn domain(&self) -> &DomainBox<T> {
        self.field.domain()
    }

    pub fn base_point(&self) -> Option<&[T]> {
        self.base_point.as_deref()
    }

    pub fn join(&self, q: &[T], x: &[T]) -> Vec<T> {
        let mut z = q.to_vec();
        z.extend_from_slice(x);
        z
    }

    pub fn value(&self, z: &[T]) -> Result<T> {
        eval(self.field.as_ref(), z)
    }

    pub fn gradient(&self, z: &[T]) -> Result<Vec<T>> {
        grad(self.field.as_ref(), z)
    }

    pub fn hessian(&self, z: &[T]) -> Result<Matrix<T>> {
        hessian(self.field.as_ref(), z)
    }

    /// `dF/dq` at `z`.
    pub fn dq(&self, z: &[T]) -> Result<Vec<T>> {
        Ok(self.gradient(z)?[..self.k].to_vec())
    }

    /// `dF/dx` at `z`; the momentum of the Lagrangian map.
    pub fn dx(&self, z: &[T]) -> Result<Vec<T>> {
        Ok(self.gradient(z)?[self.k..].to_vec())
    }

    /// `k x (k+n)` Jacobian of `dF/dq`.
    pub fn dq_jacobian(&self, z: &[T]) -> Result<Matrix<T>> {
        let h = self.hessian(z)?;
        Ok(h.select_rows(&(0..self.k).collect::<Vec<_>>()))
    }

    /// The family `F - t` for a fixed `t`.
    pub fn shifted(&self, t: T) -> Self {
        Self {
            k: self.k,
            n: self.n,
            field: Arc::new(Shifted::new(self.field.clone(), t)),
            poly: None,
            base_point: None,
        }
    }
}

/// The big family `F(q, x) - t` of a graph-like Legendrian unfolding.
#[derive(Clone, Debug)]
pub struct GraphLikeFamily<T: Real> {
    base: GeneratingFamily<T>,
    t_lo: T,
    t_hi: T,
}

impl<T: Real> GraphLikeFamily<T> {
    pub fn new(base: GeneratingFamily<T>) -> Self {
        Self {
            base,
            t_lo: T::neg_infinity(),
            t_hi: T::infinity(),
        }
    }

    /// Restricts `t` to the open interval `(lo, hi)`.
    pub fn with_time_bounds(mut self, lo: T, hi: T) -> Self {
        self.t_lo = lo;
        self.t_hi = hi;
        self
    }

    pub fn base(&self) -> &GeneratingFamily<T> {
        &self.base
    }

    pub fn time_bounds(&self) -> (T, T) {
        (self.t_lo, self.t_hi)
    }

    pub fn admits_time(&self, t: T) -> bool {
        t > self.t_lo && t < self.t_hi
    }

    /// The big family as a field on `R^{k+n+1}`.
    pub fn big_field(&self) -> BigField<T> {
        let t_dom = DomainBox::new(vec![self.t_lo], vec![self.t_hi])
            .unwrap_or_else(|_| DomainBox::unbounded(1));
        BigField {
            base: self.base.field.clone(),
            domain: self.base.domain().product(&t_dom),
        }
    }

    /// The derivative of the big family in `t`; identically `-1`.
    pub fn dt(&self) -> T {
        -T::one()
    }
}

/// `F(q, x) - t`, differentiated through the base field.
#[derive(Clone)]
pub struct BigField<T: Real> {
    base: Arc<dyn ScalarField<T>>,
    domain: DomainBox<T>,
}

impl<T: Real> ScalarField<T> for BigField<T> {
    fn arity(&self) -> usize {
        self.domain.dim()
    }

    fn domain(&self) -> &DomainBox<T> {
        &self.domain
    }

    fn value(&self, p: &[T]) -> T {
        let m = p.len() - 1;
        self.base.value(&p[..m]) - p[m]
    }

    fn has_closed_form(&self) -> bool {
        true
    }

    fn closed_gradient(&self, p: &[T]) -> Option<Vec<T>> {
        let m = p.len() - 1;
        let mut g = grad(self.base.as_ref(), &p[..m]).ok()?;
        g.push(-T::one());
        Some(g)
    }

    fn closed_hessian(&self, p: &[T]) -> Option<Matrix<T>> {
        let m = p.len() - 1;
        let h = hessian(self.base.as_ref(), &p[..m]).ok()?;
        Some(Matrix::from_fn(m + 1, m + 1, |i, j| {
            if i < m && j < m {
                h[(i, j)]
            } else {
                T::zero()
            }
        }))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriticalPoint<T> {
    pub q: Vec<T>,
    pub x: Vec<T>,
    /// Infinity norm of `dF/dq`.
    pub residual: T,
    pub hess_q_det: T,
    pub corank: usize,
}

impl<T: Real> CriticalPoint<T> {
    pub fn point(&self) -> Vec<T> {
        let mut z = self.q.clone();
        z.extend_from_slice(&self.x);
        z
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LagrangianSample<T> {
    pub x: Vec<T>,
    pub p: Vec<T>,
    pub source: CriticalPoint<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GraphLikeSample<T> {
    pub x: Vec<T>,
    pub t: T,
    pub p: Vec<T>,
    pub source: CriticalPoint<T>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankCheck {
    pub pass: bool,
    pub rank: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HypersurfaceCheck {
    pub pass: bool,
    pub rank: usize,
    /// False when the point is off the zero level of `F`; the rank is still
    /// reported but the criterion is only meaningful on the level set.
    pub on_zero_level: bool,
}

fn rank_eps<T: Real>() -> T {
    T::tol(DEFAULT_RANK_EPS)
}

/// Rank of the Jacobian of `dF/dq` at `point`; a Morse family needs rank `k`.
pub fn morse_family_check<T: Real>(fam: &GeneratingFamily<T>, point: &[T]) -> Result<RankCheck> {
    let rank = fam.dq_jacobian(point)?.numerical_rank(rank_eps());
    Ok(RankCheck {
        pass: rank == fam.k,
        rank,
    })
}

/// Rank of the Jacobian of `(F, dF/dq)`; a Morse family of hypersurfaces needs `k + 1`.
pub fn morse_hypersurface_check<T: Real>(fam: &GeneratingFamily<T>, point: &[T]) -> Result<HypersurfaceCheck> {
    let value = fam.value(point)?;
    let top = Matrix::from_rows(&[fam.gradient(point)?]);
    let rank = top.vstack(&fam.dq_jacobian(point)?).numerical_rank(rank_eps());
    Ok(HypersurfaceCheck {
        pass: rank == fam.k + 1,
        rank,
        on_zero_level: value.abs() < T::tol(MEMBERSHIP_TOL),
    })
}

/// Residual of `(q, x, t)` against the big critical set `F = t, dF/dq = 0`.
pub fn sigma_star_residual<T: Real>(gl: &GraphLikeFamily<T>, point: &[T]) -> Result<T> {
    let big = gl.big_field();
    let v = eval(&big, point)?;
    let g = grad(&big, point)?;
    Ok(v.abs().max(inf_norm(&g[..gl.base.k])))
}

/// Non-degeneracy of the graph-like unfolding at a point of the big critical set.
///
/// Computed from the big family with `t` frozen: the rank of the Jacobian of
/// `(F - t, dF/dq)` in `(q, x)` must be `k + 1`.
pub fn nondegeneracy_check<T: Real>(gl: &GraphLikeFamily<T>, point: &[T]) -> Result<bool> {
    let (k, n) = (gl.base.k, gl.base.n);
    if point.len() != k + n + 1 {
        return Err(Error::Dimension("expected a point (q, x, t)".into()));
    }
    let residual = sigma_star_residual(gl, point)?;
    if !(residual < T::tol(MEMBERSHIP_TOL)) {
        return Err(Error::NotOnSigmaStar {
            residual: residual.to_f64_lossy(),
        });
    }
    let big = gl.big_field();
    let g = grad(&big, point)?;
    let h = hessian(&big, point)?;
    let m = k + n;
    let jac = Matrix::from_fn(k + 1, m, |i, j| if i == 0 { g[j] } else { h[(i - 1, j)] });
    Ok(jac.numerical_rank(rank_eps()) == k + 1)
}

/// `dF/dq = 0` with Jacobian taken from the Hessian of `F`.
pub struct CriticalSystem<'a, T: Real> {
    pub fam: &'a GeneratingFamily<T>,
}

impl<T: Real> System<T> for CriticalSystem<'_, T> {
    fn input_dim(&self) -> usize {
        self.fam.k + self.fam.n
    }

    fn output_dim(&self) -> usize {
        self.fam.k
    }

    fn residual(&self, z: &[T]) -> Result<Vec<T>> {
        self.fam.dq(z)
    }

    fn jacobian(&self, z: &[T]) -> Result<Matrix<T>> {
        self.fam.dq_jacobian(z)
    }
}

/// Builds the diagnostics record of a point of `C(F)`.
pub fn critical_point<T: Real>(fam: &GeneratingFamily<T>, z: &[T]) -> Result<CriticalPoint<T>> {
    let k = fam.k;
    let residual = inf_norm(&fam.dq(z)?);
    let hqq = fam.hessian(z)?.select_rows(&(0..k).collect::<Vec<_>>()).select_columns(&(0..k).collect::<Vec<_>>());
    Ok(CriticalPoint {
        q: z[..k].to_vec(),
        x: z[k..].to_vec(),
        residual,
        hess_q_det: hqq.determinant(),
        corank: k - hqq.numerical_rank(rank_eps()),
    })
}

#[derive(Clone, Debug)]
pub struct CriticalSet<T> {
    /// Critical points in grid order, then seed order.
    pub points: Vec<CriticalPoint<T>>,
    pub failed_seeds: usize,
}

/// Solves `dF/dq = 0` in every fibre `x` of `x_points`, starting from each seed.
pub fn solve_critical_set<T: Real>(
    fam: &GeneratingFamily<T>,
    x_points: &[Vec<T>],
    q_seeds: &[Vec<T>],
) -> Result<CriticalSet<T>> {
    let (k, n) = (fam.k, fam.n);
    if x_points.iter().any(|x| x.len() != n) || q_seeds.iter().any(|q| q.len() != k) {
        return Err(Error::Dimension("grid points or seeds have the wrong length".into()));
    }
    let frozen: Vec<usize> = (k..k + n).collect();
    let sys = CriticalSystem { fam };
    let radius = T::lit(DEDUP_RADIUS);
    let per_fibre: Vec<(Vec<CriticalPoint<T>>, usize)> = x_points
        .par_iter()
        .map(|x| {
            let mut found: Vec<CriticalPoint<T>> = Vec::new();
            let mut failed = 0;
            for q in q_seeds {
                let solved = newton_solve(&sys, &fam.join(q, x), &frozen)
                    .and_then(|z| critical_point(fam, &z));
                match solved {
                    Ok(cp) if cp.residual < T::tol(MEMBERSHIP_TOL) => {
                        if !found.iter().any(|o| fam.domain().distance(&o.point(), &cp.point()) < radius) {
                            found.push(cp);
                        }
                    }
                    _ => failed += 1,
                }
            }
            (found, failed)
        })
        .collect();
    let failed_seeds = per_fibre.iter().map(|(_, f)| f).sum();
    Ok(CriticalSet {
        points: per_fibre.into_iter().flat_map(|(p, _)| p).collect(),
        failed_seeds,
    })
}

fn momentum<T: Real>(fam: &GeneratingFamily<T>, cp: &CriticalPoint<T>) -> Result<Vec<T>> {
    fam.dx(&cp.point())
}

/// `L(F)`: the point `(x, dF/dx)` of the Lagrangian submanifold.
pub fn lagrangian_map<T: Real>(fam: &GeneratingFamily<T>, cp: &CriticalPoint<T>) -> Result<LagrangianSample<T>> {
    Ok(LagrangianSample {
        x: cp.x.clone(),
        p: momentum(fam, cp)?,
        source: cp.clone(),
    })
}

/// The graph-like Legendrian unfolding map: `(x, F, dF/dx)`.
pub fn legendrian_unfolding_map<T: Real>(gl: &GraphLikeFamily<T>, cp: &CriticalPoint<T>) -> Result<GraphLikeSample<T>> {
    let fam = &gl.base;
    Ok(GraphLikeSample {
        x: cp.x.clone(),
        t: fam.value(&cp.point())?,
        p: momentum(fam, cp)?,
        source: cp.clone(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankDiagnostics<T> {
    pub space_proj_rank: usize,
    pub front_proj_rank: usize,
    pub immersion_sigma_min: T,
    /// Smallest singular value of the front projection on the orthonormal tangent basis.
    pub front_sigma_min: T,
    /// Columns of the Jacobian of `dF/dq` solved for by the implicit-function chart.
    pub chart_columns: Vec<usize>,
}

/// Orthonormal basis (as columns) of the tangent space of `C(F)` at `z`,
/// built from an implicit-function chart, and the chart's dependent columns.
pub fn tangent_basis<T: Real>(fam: &GeneratingFamily<T>, z: &[T]) -> Result<(Matrix<T>, Vec<usize>)> {
    let (k, n) = (fam.k, fam.n);
    let m = k + n;
    let jac = fam.dq_jacobian(z)?;

    // Greedy column pivoting: repeatedly take the column with the largest
    // component orthogonal to the columns already chosen.
    let mut cols: Vec<Vec<T>> = (0..m).map(|j| jac.col(j)).collect();
    let scale = cols.iter().map(|c| crate::real::norm2(c)).fold(T::zero(), T::max);
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    for _ in 0..k {
        let (best, norm) = (0..m)
            .filter(|j| !chosen.contains(j))
            .map(|j| (j, crate::real::norm2(&cols[j])))
            .fold((usize::MAX, T::zero()), |acc, c| if c.1 > acc.1 { c } else { acc });
        if best == usize::MAX || !(norm > rank_eps::<T>() * scale) {
            return Err(Error::ChartFailure);
        }
        let unit: Vec<T> = cols[best].iter().map(|v| *v / norm).collect();
        for (j, c) in cols.iter_mut().enumerate() {
            if !chosen.contains(&j) && j != best {
                let d = crate::real::dot(&unit, c);
                c.iter_mut().zip(&unit).for_each(|(v, u)| *v = *v - d * *u);
            }
        }
        chosen.push(best);
    }
    chosen.sort_unstable();
    let free: Vec<usize> = (0..m).filter(|j| !chosen.contains(j)).collect();
    let dep = jac.select_columns(&chosen);
    let mut basis: Vec<Vec<T>> = Vec::with_capacity(n);
    for &f in &free {
        let rhs: Vec<T> = jac.col(f).iter().map(|v| -*v).collect();
        let a = dep.solve(&rhs).ok_or(Error::ChartFailure)?;
        let mut v = vec![T::zero(); m];
        v[f] = T::one();
        for (i, &c) in chosen.iter().enumerate() {
            v[c] = a[i];
        }
        basis.push(v);
    }
    // Modified Gram-Schmidt; the chart vectors are independent by construction.
    for i in 0..basis.len() {
        for j in 0..i {
            let d = crate::real::dot(&basis[i], &basis[j]);
            let bj = basis[j].clone();
            basis[i].iter_mut().zip(&bj).for_each(|(v, u)| *v = *v - d * *u);
        }
        let nrm = crate::real::norm2(&basis[i]);
        basis[i].iter_mut().for_each(|v| *v = *v / nrm);
    }
    Ok((Matrix::from_fn(m, n, |i, j| basis[j][i]), chosen))
}

/// Ranks of the space and front projections of the graph-like unfolding at
/// `cp`, and the least singular value of the Lagrangian lift's differential.
pub fn rank_diagnostics<T: Real>(gl: &GraphLikeFamily<T>, cp: &CriticalPoint<T>) -> Result<RankDiagnostics<T>> {
    let fam = &gl.base;
    let (k, n) = (fam.k, fam.n);
    let z = cp.point();
    let (b, chart_columns) = tangent_basis(fam, &z)?;
    let x_rows: Vec<usize> = (k..k + n).collect();
    let space = b.select_rows(&x_rows);
    let dfb = Matrix::from_rows(&[fam.gradient(&z)?]).matmul(&b);
    let front = space.vstack(&dfb);
    let hx = fam.hessian(&z)?.select_rows(&x_rows);
    let lift = space.vstack(&hx.matmul(&b));
    let eps = rank_eps();
    Ok(RankDiagnostics {
        space_proj_rank: space.numerical_rank(eps),
        front_proj_rank: front.numerical_rank(eps),
        immersion_sigma_min: *lift.singular_values().last().expect("n >= 1"),
        front_sigma_min: *front.singular_values().last().expect("n >= 1"),
        chart_columns,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(text: &str, k: usize, n: usize) -> GeneratingFamily<f64> {
        GeneratingFamily::from_expr(text, k, n, None).unwrap()
    }

    #[test]
    fn morse_family_examples() {
        let c = morse_family_check(&fam("q1^3 + x1*q1", 1, 1), &[0.0, 0.0]).unwrap();
        assert_eq!(c, RankCheck { pass: true, rank: 1 });
        let q2 = morse_family_check(&fam("q1^2", 1, 1), &[0.0, 0.0]).unwrap();
        assert_eq!(q2, RankCheck { pass: true, rank: 1 });
        let q3 = morse_family_check(&fam("q1^3", 1, 1), &[0.0, 0.0]).unwrap();
        assert_eq!(q3, RankCheck { pass: false, rank: 0 });
    }

    #[test]
    fn base_point_must_be_morse() {
        assert!(matches!(
            fam("q1^3", 1, 1).with_base_point(vec![0.0, 0.0]),
            Err(Error::NotMorseFamily { rank: 0, expected: 1 })
        ));
        assert!(fam("q1^3 + x1*q1", 1, 1).with_base_point(vec![0.0, 0.0]).is_ok());
    }

    #[test]
    fn morse_hypersurface_examples() {
        let c = morse_hypersurface_check(&fam("q1^3 + x1*q1 + x2", 1, 2), &[0.0, 0.0, 0.0]).unwrap();
        assert!(c.pass && c.rank == 2 && c.on_zero_level);
        let d = morse_hypersurface_check(&fam("q1^2", 1, 1), &[0.0, 0.0]).unwrap();
        assert!(!d.pass);
    }

    #[test]
    fn nondegeneracy_examples() {
        let a = GraphLikeFamily::new(fam("q1^3 + x1*q1", 1, 1));
        assert!(!nondegeneracy_check(&a, &[0.0, 0.0, 0.0]).unwrap());
        let b = GraphLikeFamily::new(fam("q1^3 + x1*q1 + x2", 1, 2));
        assert!(nondegeneracy_check(&b, &[0.0, 0.0, 0.0, 0.0]).unwrap());
        assert!(matches!(
            nondegeneracy_check(&b, &[0.0, 0.0, 0.0, 1.0]),
            Err(Error::NotOnSigmaStar { .. })
        ));
    }

    #[test]
    fn critical_set_of_quadratic() {
        let f = fam("q1^2 + x1*q1", 1, 1);
        let xs = vec![vec![-1.0], vec![0.0], vec![1.0]];
        let cs = solve_critical_set(&f, &xs, &[vec![0.3]]).unwrap();
        assert_eq!(cs.points.len(), 3);
        for cp in &cs.points {
            assert!((cp.q[0] + cp.x[0] / 2.0).abs() < 1e-12);
            assert_eq!(cp.corank, 0);
        }
    }

    #[test]
    fn critical_set_of_cusp_fibres() {
        let f = fam("q1^4 + x1*q1^2 + x2*q1", 1, 2);
        let seeds: Vec<Vec<f64>> = [-2.0, -0.6, -0.1, 0.2, 0.5, 1.7].iter().map(|&q| vec![q]).collect();
        let three = solve_critical_set(&f, &[vec![-1.0, 0.0]], &seeds).unwrap();
        let mut qs: Vec<f64> = three.points.iter().map(|c| c.q[0]).collect();
        qs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let r = 0.5f64.sqrt();
        assert_eq!(qs.len(), 3);
        assert!((qs[0] + r).abs() < 1e-10 && qs[1].abs() < 1e-10 && (qs[2] - r).abs() < 1e-10);
        let one = solve_critical_set(&f, &[vec![1.0, 0.0]], &seeds).unwrap();
        assert_eq!(one.points.len(), 1);
        assert!(one.points[0].q[0].abs() < 1e-10);
    }

    #[test]
    fn lagrangian_and_unfolding_maps() {
        let f = fam("q1^2 + x1*q1", 1, 1);
        let cp = critical_point(&f, &[-0.5, 1.0]).unwrap();
        let l = lagrangian_map(&f, &cp).unwrap();
        assert_eq!(l.p, vec![-0.5]);
        let gl = GraphLikeFamily::new(f.clone());
        let u = legendrian_unfolding_map(&gl, &cp).unwrap();
        assert_eq!(u.t, -0.25);
        assert_eq!((u.x.clone(), u.p.clone()), (l.x, l.p));
        let g = fam("q1^2", 1, 1);
        let cp0 = critical_point(&g, &[0.0, 3.0]).unwrap();
        assert_eq!(lagrangian_map(&g, &cp0).unwrap().p, vec![0.0]);
    }

    #[test]
    fn rank_diagnostics_regular_and_caustic_points() {
        let gl = GraphLikeFamily::new(fam("q1^4 + x1*q1^2 + x2*q1", 1, 2));
        let f = gl.base();
        let regular = critical_point(f, &[0.0, 1.0, 0.0]).unwrap();
        assert_eq!(regular.corank, 0);
        let d = rank_diagnostics(&gl, &regular).unwrap();
        assert_eq!((d.space_proj_rank, d.front_proj_rank), (2, 2));
        assert!(d.immersion_sigma_min > 1e-6);
        // q = 1 on the caustic: x1 = -6, x2 = 8
        let caustic = critical_point(f, &[1.0, -6.0, 8.0]).unwrap();
        assert_eq!(caustic.corank, 1);
        let d = rank_diagnostics(&gl, &caustic).unwrap();
        assert_eq!((d.space_proj_rank, d.front_proj_rank), (1, 1));
        assert!(d.immersion_sigma_min > 1e-6);
    }

    #[test]
    fn big_field_has_unit_time_derivative() {
        let gl = GraphLikeFamily::new(fam("q1^2 + x1*q1", 1, 1));
        let g = grad(&gl.big_field(), &[0.3, 0.2, 1.0]).unwrap();
        assert_eq!(g[2], -1.0);
        assert_eq!(gl.dt(), -1.0);
    }
}
