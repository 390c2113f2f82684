//! Polynomial unfoldings of the simple singularities used across the crate.

use super::GeneratingFamily;
use crate::numcore::field::DomainBox;
use crate::real::Real;

#[derive(Clone, Debug)]
pub struct CatalogFamily<T: Real> {
    pub name: &'static str,
    pub expr: &'static str,
    pub family: GeneratingFamily<T>,
    /// Starting values of `q` that between them reach every critical sheet
    /// over the family's box.
    pub q_seeds: Vec<Vec<T>>,
}

fn build<T: Real>(
    name: &'static str,
    expr: &'static str,
    k: usize,
    n: usize,
    q_half: f64,
    x_half: f64,
    seeds: &[&[f64]],
) -> CatalogFamily<T> {
    let mut lo = vec![T::lit(-q_half); k];
    lo.extend(vec![T::lit(-x_half); n]);
    let hi: Vec<T> = lo.iter().map(|v| -*v).collect();
    let domain = DomainBox::new(lo, hi).expect("catalog boxes are well formed");
    let family = GeneratingFamily::from_expr(expr, k, n, Some(domain))
        .and_then(|f| f.with_base_point(vec![T::zero(); k + n]))
        .expect("catalog families are Morse families at the origin");
    CatalogFamily {
        name,
        expr,
        family,
        q_seeds: seeds.iter().map(|s| s.iter().map(|v| T::lit(*v)).collect()).collect(),
    }
}

const LINE_SEEDS: &[&[f64]] = &[&[-2.0], &[-1.2], &[-0.6], &[-0.2], &[0.2], &[0.6], &[1.2], &[2.0]];

const PLANE_SEEDS: &[&[f64]] = &[
    &[-1.5, -1.5],
    &[-1.5, 0.0],
    &[-1.5, 1.5],
    &[0.0, -1.5],
    &[0.1, 0.1],
    &[0.0, 1.5],
    &[1.5, -1.5],
    &[1.5, 0.0],
    &[1.5, 1.5],
    &[-0.5, 0.5],
    &[0.5, -0.5],
];

pub fn fold<T: Real>() -> CatalogFamily<T> {
    build("fold", "q1^2 + x1*q1 + x2", 1, 2, 10.0, 10.0, LINE_SEEDS)
}

pub fn cusp<T: Real>() -> CatalogFamily<T> {
    build("cusp", "q1^4 + x1*q1^2 + x2*q1", 1, 2, 4.0, 10.0, LINE_SEEDS)
}

pub fn swallowtail<T: Real>() -> CatalogFamily<T> {
    build("swallowtail", "q1^5 + x1*q1^3 + x2*q1^2 + x3*q1", 1, 3, 4.0, 10.0, LINE_SEEDS)
}

pub fn hyperbolic_umbilic<T: Real>() -> CatalogFamily<T> {
    build(
        "hyperbolic umbilic",
        "q1^3 + q2^3 + x1*q1*q2 + x2*q1 + x3*q2",
        2,
        3,
        4.0,
        10.0,
        PLANE_SEEDS,
    )
}

pub fn elliptic_umbilic<T: Real>() -> CatalogFamily<T> {
    build(
        "elliptic umbilic",
        "q1^3 - 3*q1*q2^2 + x3*(q1^2 + q2^2) + x1*q1 + x2*q2",
        2,
        3,
        4.0,
        10.0,
        PLANE_SEEDS,
    )
}

pub fn all<T: Real>() -> Vec<CatalogFamily<T>> {
    vec![fold(), cusp(), swallowtail(), hyperbolic_umbilic(), elliptic_umbilic()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genfam::morse_family_check;

    #[test]
    fn catalog_families_are_morse_at_origin() {
        for c in all::<f64>() {
            let f = &c.family;
            let z = vec![0.0; f.k() + f.n()];
            assert!(morse_family_check(f, &z).unwrap().pass, "{}", c.name);
            assert_eq!(f.base_point(), Some(z.as_slice()));
        }
    }

    #[test]
    fn single_precision_catalog() {
        let c = cusp::<f32>();
        let g = c.family.gradient(&[1.0, -6.0, 8.0]).unwrap();
        assert!((g[0] - (4.0 - 12.0 + 8.0)).abs() < 1e-4);
    }
}
