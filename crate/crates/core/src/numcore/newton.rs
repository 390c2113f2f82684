//! Newton's method for square and under-determined systems.

use super::field::{grad, ScalarField, FD_STEP};
use super::matrix::Matrix;
use crate::error::{Error, Result};
use crate::real::{inf_norm, Real};

/// A map `R^m -> R^r` with a Jacobian.
pub trait System<T: Real>: Sync {
    fn input_dim(&self) -> usize;

    fn output_dim(&self) -> usize;

    fn residual(&self, z: &[T]) -> Result<Vec<T>>;

    /// `r x m` Jacobian; central differences of [`System::residual`] by default.
    fn jacobian(&self, z: &[T]) -> Result<Matrix<T>> {
        fd_jacobian(self, z)
    }
}

pub fn fd_jacobian<T: Real, S: System<T> + ?Sized>(sys: &S, z: &[T]) -> Result<Matrix<T>> {
    let (r, m) = (sys.output_dim(), sys.input_dim());
    let h = T::lit(FD_STEP);
    let mut work = z.to_vec();
    let mut jac = Matrix::zeros(r, m);
    for j in 0..m {
        let s = h * z[j].abs().max(T::one());
        work[j] = z[j] + s;
        let fp = sys.residual(&work)?;
        work[j] = z[j] - s;
        let fm = sys.residual(&work)?;
        work[j] = z[j];
        for i in 0..r {
            jac[(i, j)] = (fp[i] - fm[i]) / (s + s);
        }
    }
    Ok(jac)
}

/// One equation per scalar field; the Jacobian is assembled from [`grad`].
pub struct FieldSystem<'a, T> {
    fields: Vec<&'a dyn ScalarField<T>>,
}

impl<'a, T: Real> FieldSystem<'a, T> {
    pub fn new(fields: Vec<&'a dyn ScalarField<T>>) -> Result<Self> {
        let m = fields.first().map_or(0, |f| f.arity());
        if fields.iter().any(|f| f.arity() != m) {
            return Err(Error::Dimension("component fields have different arities".into()));
        }
        Ok(Self { fields })
    }
}

impl<T: Real> System<T> for FieldSystem<'_, T> {
    fn input_dim(&self) -> usize {
        self.fields.first().map_or(0, |f| f.arity())
    }

    fn output_dim(&self) -> usize {
        self.fields.len()
    }

    fn residual(&self, z: &[T]) -> Result<Vec<T>> {
        self.fields.iter().map(|f| super::field::eval(*f, z)).collect()
    }

    fn jacobian(&self, z: &[T]) -> Result<Matrix<T>> {
        let rows = self.fields.iter().map(|f| grad(*f, z)).collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_rows(&rows))
    }
}

/// System given by a residual closure, differentiated numerically.
pub struct FnSystem<F> {
    input: usize,
    output: usize,
    f: F,
}

impl<F> FnSystem<F> {
    pub fn new(input: usize, output: usize, f: F) -> Self {
        Self { input, output, f }
    }
}

impl<T: Real, F> System<T> for FnSystem<F>
where
    F: Fn(&[T]) -> Vec<T> + Sync,
{
    fn input_dim(&self) -> usize {
        self.input
    }

    fn output_dim(&self) -> usize {
        self.output
    }

    fn residual(&self, z: &[T]) -> Result<Vec<T>> {
        let r = (self.f)(z);
        if r.iter().all(|v| v.is_finite()) {
            Ok(r)
        } else {
            Err(Error::NonFinite("system residual".into()))
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct NewtonOptions<T> {
    /// Target for the infinity norm of the residual.
    pub tol: T,
    pub max_iter: usize,
    /// Steps are refused when `sigma_min < singular_ratio * sigma_max`.
    pub singular_ratio: T,
}

impl<T: Real> Default for NewtonOptions<T> {
    fn default() -> Self {
        Self {
            tol: T::tol(1e-10),
            max_iter: 50,
            singular_ratio: T::tol(1e-12),
        }
    }
}

/// Solves `sys(z) = 0` starting at `seed`, keeping the coordinates listed in
/// `frozen` fixed. Under-determined steps take the least-norm update.
pub fn newton_solve<T: Real, S: System<T> + ?Sized>(sys: &S, seed: &[T], frozen: &[usize]) -> Result<Vec<T>> {
    newton_solve_with(sys, seed, frozen, &NewtonOptions::default())
}

pub fn newton_solve_with<T: Real, S: System<T> + ?Sized>(
    sys: &S,
    seed: &[T],
    frozen: &[usize],
    opts: &NewtonOptions<T>,
) -> Result<Vec<T>> {
    let m = sys.input_dim();
    let r = sys.output_dim();
    if seed.len() != m {
        return Err(Error::Dimension(format!("seed of length {} for a system in R^{m}", seed.len())));
    }
    let free: Vec<usize> = (0..m).filter(|j| !frozen.contains(j)).collect();
    if r > free.len() {
        return Err(Error::Dimension(format!(
            "{r} equations in {} free unknowns",
            free.len()
        )));
    }
    let mut z = seed.to_vec();
    if r == 0 {
        return Ok(z);
    }
    let mut res = sys.residual(&z)?;
    let mut norm = inf_norm(&res);
    for _ in 0..opts.max_iter {
        if norm < opts.tol {
            return Ok(z);
        }
        let jac = sys.jacobian(&z)?.select_columns(&free);
        let svd = jac.svd();
        let smax = svd.sigma[0];
        let smin = svd.sigma[r - 1];
        if !(smax > T::zero()) || smin < opts.singular_ratio * smax {
            let ratio = if smax > T::zero() { smin / smax } else { T::zero() };
            return Err(Error::SingularJacobian { ratio: ratio.to_f64_lossy() });
        }
        let rhs: Vec<T> = res.iter().map(|v| -*v).collect();
        let step = svd.solve_least_norm(&rhs, opts.singular_ratio);

        // Backtrack while the residual does not decrease; fall back to the
        // full step so that plain Newton behaviour is kept near a root.
        let mut lambda = T::one();
        let mut accepted = None;
        let mut full = None;
        for _ in 0..10 {
            let mut trial = z.clone();
            for (k, &j) in free.iter().enumerate() {
                trial[j] = z[j] + lambda * step[k];
            }
            if let Ok(tr) = sys.residual(&trial) {
                let tn = inf_norm(&tr);
                if full.is_none() {
                    full = Some((trial.clone(), tr.clone(), tn));
                }
                if tn < norm {
                    accepted = Some((trial, tr, tn));
                    break;
                }
            }
            lambda = lambda * T::lit(0.5);
        }
        let (nz, nr, nn) = match accepted.or(full) {
            Some(v) => v,
            None => return Err(Error::Domain("Newton step leaves the domain".into())),
        };
        z = nz;
        res = nr;
        norm = nn;
    }
    if norm < opts.tol {
        Ok(z)
    } else {
        Err(Error::MaxIterations {
            iterations: opts.max_iter,
            residual: norm.to_f64_lossy(),
        })
    }
}

/// Up to `iters` further least-norm Newton steps from a converged `z`,
/// returning the iterate with the smallest residual. Used to push points
/// below the solve tolerance where the data themselves are tiny.
pub fn newton_polish<T: Real, S: System<T> + ?Sized>(sys: &S, z: &[T], iters: usize) -> Vec<T> {
    let Ok(r) = sys.residual(z) else {
        return z.to_vec();
    };
    let mut best = (inf_norm(&r), z.to_vec());
    let mut cur = z.to_vec();
    let mut res = r;
    for _ in 0..iters {
        if best.0 == T::zero() {
            break;
        }
        let Ok(jac) = sys.jacobian(&cur) else { break };
        let rhs: Vec<T> = res.iter().map(|v| -*v).collect();
        let step = jac.svd().solve_least_norm(&rhs, T::tol(1e-12));
        cur = cur.iter().zip(&step).map(|(a, b)| *a + *b).collect();
        let Ok(r) = sys.residual(&cur) else { break };
        let n = inf_norm(&r);
        if !(n < best.0) {
            break;
        }
        best = (n, cur.clone());
        res = r;
    }
    best.1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::expr::parse_family;
    use crate::numcore::field::PolyField;

    #[test]
    fn scalar_square_root() {
        let sys = FnSystem::new(1, 1, |z: &[f64]| vec![z[0] * z[0] - 4.0]);
        let z = newton_solve(&sys, &[3.0], &[]).unwrap();
        assert!((z[0] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn frozen_coordinates_stay_put() {
        let f = PolyField::<f64>::new(parse_family("3*q1^2 + x1", 1, 1, false).unwrap().to_polynomial(2));
        let sys = FieldSystem::new(vec![&f]).unwrap();
        let plus = newton_solve(&sys, &[0.7, -3.0], &[1]).unwrap();
        let minus = newton_solve(&sys, &[-2.0, -3.0], &[1]).unwrap();
        assert!((plus[0] - 1.0).abs() < 1e-10 && plus[1] == -3.0);
        assert!((minus[0] + 1.0).abs() < 1e-10 && minus[1] == -3.0);
    }

    #[test]
    fn vanishing_jacobian_is_reported() {
        let sys = FnSystem::new(1, 1, |z: &[f64]| vec![z[0] * z[0] + 1.0]);
        assert!(matches!(newton_solve(&sys, &[0.0], &[]), Err(Error::SingularJacobian { .. })));
    }

    #[test]
    fn underdetermined_step_is_least_norm() {
        // one equation, two unknowns: projection onto the line q1 + q2 = 2
        let sys = FnSystem::new(2, 1, |z: &[f64]| vec![z[0] + z[1] - 2.0]);
        let z = newton_solve(&sys, &[0.0, 0.0], &[]).unwrap();
        assert!((z[0] - 1.0).abs() < 1e-10 && (z[1] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn too_many_equations_are_rejected() {
        let sys = FnSystem::new(2, 2, |z: &[f64]| vec![z[0], z[1]]);
        assert!(matches!(newton_solve(&sys, &[1.0, 1.0], &[0]), Err(Error::Dimension(_))));
    }

    #[test]
    fn exhausted_iterations() {
        let sys = FnSystem::new(1, 1, |z: &[f64]| vec![z[0].atan()]);
        let opts = NewtonOptions {
            max_iter: 2,
            ..NewtonOptions::default()
        };
        assert!(matches!(
            newton_solve_with(&sys, &[1.0], &[], &opts),
            Err(Error::MaxIterations { iterations: 2, .. })
        ));
    }
}
