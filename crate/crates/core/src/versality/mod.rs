//! Truncated-jet linear algebra for stability and determinacy of function germs.
//!
//! Everything is computed modulo `m^{l+1}`: an ideal is represented by the
//! degree-`<= l` truncations of monomial multiples of its generators, and a
//! criterion holds when those vectors (plus any extra directions) span the
//! space of all polynomials of degree `<= l`.

use std::fmt;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::numcore::poly::{Monomial, Polynomial};
use crate::numcore::VarSet;

/// Relative threshold below which a Gram–Schmidt residual counts as zero.
pub const JET_RANK_TOL: f64 = 1e-8;

/// Polynomials of degree `<= l` in `k` variables, with a graded-lex monomial basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetSpace {
    k: usize,
    l: u32,
    basis: Vec<Monomial>,
}

fn monomials_of_degree(k: usize, d: u32) -> Vec<Monomial> {
    if k == 0 {
        return if d == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in monomials_of_degree(k - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

impl JetSpace {
    pub fn new(k: usize, l: u32) -> Self {
        let basis = (0..=l).flat_map(|d| monomials_of_degree(k, d)).collect();
        Self { k, l, basis }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn degree(&self) -> u32 {
        self.l
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    /// Coordinates of the truncation of `p` in the basis.
    pub fn project(&self, p: &Polynomial) -> Vec<f64> {
        self.basis
            .iter()
            .map(|m| p.coefficient(m).to_f64().unwrap_or(f64::NAN))
            .collect()
    }

    /// All monomials of degree `<= l` as polynomials.
    fn monomial_polys(&self) -> impl Iterator<Item = Polynomial> + '_ {
        self.basis
            .iter()
            .map(|m| Polynomial::monomial(m.clone(), crate::numcore::rational(1, 1)))
    }

    /// Truncations of `m * g` for every monomial `m` of degree `<= l`.
    fn ideal_vectors(&self, g: &Polynomial) -> Vec<Vec<f64>> {
        let low = g.terms().map(|(e, _)| e.iter().sum::<u32>()).min();
        self.monomial_polys()
            .filter(|m| match low {
                Some(d) => m.degree().unwrap_or(0) + d <= self.l,
                None => false,
            })
            .map(|m| self.project(&(&m * g).truncate(self.l)))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VersalityReport {
    pub passes: bool,
    pub codimension_defect: usize,
    /// Basis monomials that complete the span, in basis order.
    pub witnesses: Vec<Monomial>,
}

impl VersalityReport {
    pub fn witness_text(&self, vars: &VarSet) -> Vec<String> {
        self.witnesses.iter().map(|m| monomial_text(m, vars)).collect()
    }
}

fn monomial_text(m: &[u32], vars: &VarSet) -> String {
    let parts: Vec<String> = m
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| if e == 1 { vars.name(i).to_string() } else { format!("{}^{e}", vars.name(i)) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Determinacy {
    Finite(usize),
    /// The quotient keeps growing with the jet degree.
    Infinite,
}

impl fmt::Display for Determinacy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(d) => write!(f, "{d}"),
            Self::Infinite => f.write_str("infinite"),
        }
    }
}

/// Orthonormal basis of a growing span.
struct Span {
    dim: usize,
    q: Vec<Vec<f64>>,
}

impl Span {
    fn new(dim: usize) -> Self {
        Self { dim, q: Vec::new() }
    }

    /// Adds `v` if it is independent of the current span; returns whether it was.
    fn push(&mut self, v: &[f64], tol: f64) -> bool {
        let scale = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(scale > 0.0) || self.q.len() == self.dim {
            return false;
        }
        let mut r: Vec<f64> = v.iter().map(|x| x / scale).collect();
        // two passes keep the basis orthogonal to working precision
        for _ in 0..2 {
            for b in &self.q {
                let c: f64 = b.iter().zip(&r).map(|(x, y)| x * y).sum();
                for (ri, bi) in r.iter_mut().zip(b) {
                    *ri -= c * bi;
                }
            }
        }
        let n = r.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > tol {
            self.q.push(r.into_iter().map(|x| x / n).collect());
            true
        } else {
            false
        }
    }

    fn rank(&self) -> usize {
        self.q.len()
    }
}

fn report(space: &JetSpace, vectors: &[Vec<f64>], tol: f64) -> VersalityReport {
    let mut span = Span::new(space.dim());
    for v in vectors {
        span.push(v, tol);
    }
    let mut witnesses = Vec::new();
    for (i, m) in space.basis().iter().enumerate() {
        if span.rank() == space.dim() {
            break;
        }
        let mut e = vec![0.0; space.dim()];
        e[i] = 1.0;
        if span.push(&e, tol) {
            witnesses.push(m.clone());
        }
    }
    VersalityReport {
        passes: witnesses.is_empty(),
        codimension_defect: witnesses.len(),
        witnesses,
    }
}

fn check_singular(f: &Polynomial) -> Result<()> {
    let k = f.nvars();
    let zero = vec![0u32; k];
    let mut bad = Vec::new();
    if f.coefficient(&zero) != crate::numcore::rational(0, 1) {
        bad.push("f(0) != 0".to_string());
    }
    for i in 0..k {
        if f.partial(i).coefficient(&zero) != crate::numcore::rational(0, 1) {
            bad.push(format!("df/dq{}(0) != 0", i + 1));
        }
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::NotSingularGerm(bad.join(", ")))
    }
}

fn check_unfolding(f: &Polynomial, dfdx: &[Polynomial]) -> Result<()> {
    check_singular(f)?;
    if dfdx.iter().any(|p| p.nvars() != f.nvars()) {
        return Err(Error::Dimension("unfolding velocities must be polynomials in the same q".into()));
    }
    Ok(())
}

/// Twice the degree of `f`: the jet degree used when the caller has no better bound.
pub fn default_jet_degree(f: &Polynomial) -> u32 {
    2 * f.degree().unwrap_or(1).max(1)
}

/// Whether `J_f + span(dF/dx_j at 0) + span(1)` fills the `l`-jets in `q`.
pub fn lagrangian_stability_check(f: &Polynomial, dfdx: &[Polynomial], l: u32) -> Result<VersalityReport> {
    lagrangian_stability_check_with_tol(f, dfdx, l, JET_RANK_TOL)
}

pub fn lagrangian_stability_check_with_tol(f: &Polynomial, dfdx: &[Polynomial], l: u32, tol: f64) -> Result<VersalityReport> {
    check_unfolding(f, dfdx)?;
    let k = f.nvars();
    let space = JetSpace::new(k, l);
    let mut vectors = Vec::new();
    for i in 0..k {
        vectors.extend(space.ideal_vectors(&f.partial(i)));
    }
    vectors.extend(dfdx.iter().map(|p| space.project(&p.truncate(l))));
    vectors.push(space.project(&Polynomial::one(k)));
    Ok(report(&space, &vectors, tol))
}

fn quotient_dim(f: &Polynomial, l: u32, tol: f64) -> usize {
    let k = f.nvars();
    let space = JetSpace::new(k, l);
    let mut vectors = Vec::new();
    for i in 0..k {
        vectors.extend(space.ideal_vectors(&f.partial(i)));
    }
    vectors.extend(space.ideal_vectors(f));
    report(&space, &vectors, tol).codimension_defect
}

/// `dim` of the local ring modulo `J_f + <f>`, probed at jet degrees `l` and `l + 1`.
pub fn k_determinacy_dimension(f: &Polynomial, l: u32) -> Result<Determinacy> {
    k_determinacy_dimension_with_tol(f, l, JET_RANK_TOL)
}

pub fn k_determinacy_dimension_with_tol(f: &Polynomial, l: u32, tol: f64) -> Result<Determinacy> {
    check_singular(f)?;
    let (a, b) = (quotient_dim(f, l, tol), quotient_dim(f, l + 1, tol));
    Ok(if b > a { Determinacy::Infinite } else { Determinacy::Finite(a) })
}

/// The same spanning question in the jets of `(q, t)` for the unfolded germ `f(q) - t`.
pub fn sp_plus_versality_check(f: &Polynomial, dfdx: &[Polynomial], l: u32) -> Result<VersalityReport> {
    sp_plus_versality_check_with_tol(f, dfdx, l, JET_RANK_TOL)
}

pub fn sp_plus_versality_check_with_tol(f: &Polynomial, dfdx: &[Polynomial], l: u32, tol: f64) -> Result<VersalityReport> {
    check_unfolding(f, dfdx)?;
    let k = f.nvars();
    let lift: Vec<usize> = (0..k).collect();
    let up = |p: &Polynomial| p.embed(k + 1, &lift);
    let fbar = &up(f) - &Polynomial::var(k + 1, k);
    let space = JetSpace::new(k + 1, l);
    let mut vectors = Vec::new();
    for i in 0..k {
        vectors.extend(space.ideal_vectors(&up(&f.partial(i))));
    }
    vectors.extend(space.ideal_vectors(&fbar));
    vectors.push(space.project(&Polynomial::one(k + 1)));
    vectors.extend(dfdx.iter().map(|p| space.project(&up(p).truncate(l))));
    Ok(report(&space, &vectors, tol))
}

/// A germ with one unfolding, as used in the stability catalog.
#[derive(Clone, Debug)]
pub struct UnfoldingCase {
    pub name: String,
    pub f: Polynomial,
    pub dfdx: Vec<Polynomial>,
    /// Whether the unfolding is the miniversal one.
    pub standard: bool,
}

fn q_pow(k: usize, i: usize, e: u32) -> Polynomial {
    Polynomial::var(k, i).pow(e)
}

/// `A_mu` germ `q1^{mu+1}`.
pub fn a_germ(mu: u32) -> Polynomial {
    q_pow(1, 0, mu + 1)
}

/// `A_1` to `A_4` with their standard unfoldings and every unfolding that
/// misses exactly one of the standard velocities (ten cases).
pub fn a_catalog() -> Vec<UnfoldingCase> {
    let mut out = Vec::new();
    for mu in 1..=4u32 {
        let f = a_germ(mu);
        let full: Vec<u32> = (1..mu).rev().collect();
        let velocities = |exps: &[u32]| exps.iter().map(|&e| q_pow(1, 0, e)).collect::<Vec<_>>();
        out.push(UnfoldingCase {
            name: format!("A{mu}"),
            f: f.clone(),
            dfdx: velocities(&full),
            standard: true,
        });
        for skip in 0..full.len() {
            let kept: Vec<u32> = full.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &e)| e).collect();
            out.push(UnfoldingCase {
                name: format!("A{mu} without q1^{}", full[skip]),
                f: f.clone(),
                dfdx: velocities(&kept),
                standard: false,
            });
        }
    }
    out
}
