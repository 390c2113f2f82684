//! Sparse multivariate polynomials with exact rational coefficients.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::real::Real;

pub type Rational = BigRational;

/// Exponent vector of a monomial.
pub type Monomial = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

pub fn rational(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rational_to_real<T: Real>(r: &Rational) -> T {
    T::lit(r.to_f64().unwrap_or(f64::NAN))
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, Rational::one())
    }

    pub fn monomial(exps: Monomial, c: Rational) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    fn add_term(&mut self, exps: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&vec![0; self.nvars])
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            n >>= 1;
        }
        acc
    }

    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut d = e.clone();
            d[i] -= 1;
            out.add_term(d, c * Rational::from_integer(BigInt::from(e[i])));
        }
        out
    }

    /// Drops every monomial of total degree above `max_degree`.
    pub fn truncate(&self, max_degree: u32) -> Self {
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() <= max_degree)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Reinterprets the polynomial in a larger variable set; variable `i` maps to `map[i]`.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.nvars, "embedding map length");
        let mut out = Self::zero(nvars);
        for (e, c) in &self.terms {
            let mut f = vec![0; nvars];
            for (i, &k) in e.iter().enumerate() {
                f[map[i]] += k;
            }
            out.add_term(f, c.clone());
        }
        out
    }

    /// Substitutes `subs[i]` for variable `i`; all substitutes share one variable set.
    pub fn compose(&self, subs: &[Polynomial]) -> Self {
        assert_eq!(subs.len(), self.nvars, "one substitute per variable");
        let target = subs.first().map_or(0, |p| p.nvars);
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            let mut term = Self::constant(target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    term = &term * &subs[i].pow(k);
                }
            }
            out = &out + &term;
        }
        out
    }

    pub fn eval<T: Real>(&self, p: &[T]) -> T {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(p)
                    .fold(rational_to_real::<T>(c), |acc, (&k, &x)| acc * x.powi(k as i32))
            })
            .sum()
    }

    pub fn compile<T: Real>(&self) -> CompiledPoly<T> {
        CompiledPoly::new(self)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "variable sets differ");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "variable sets differ");
        let mut out = Polynomial::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Monomial = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

/// Floating-point image of a [`Polynomial`], for fast repeated evaluation.
#[derive(Clone, Debug)]
pub struct CompiledPoly<T> {
    nvars: usize,
    terms: Vec<(Monomial, T)>,
    max_pow: Vec<u32>,
}

impl<T: Real> CompiledPoly<T> {
    fn new(p: &Polynomial) -> Self {
        let mut max_pow = vec![0; p.nvars];
        let terms = p
            .terms
            .iter()
            .map(|(e, c)| {
                for (m, &k) in max_pow.iter_mut().zip(e) {
                    *m = (*m).max(k);
                }
                (e.clone(), rational_to_real(c))
            })
            .collect();
        Self {
            nvars: p.nvars,
            terms,
            max_pow,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn eval(&self, p: &[T]) -> T {
        debug_assert_eq!(p.len(), self.nvars);
        let powers: Vec<Vec<T>> = p
            .iter()
            .zip(&self.max_pow)
            .map(|(&x, &m)| {
                let mut v = Vec::with_capacity(m as usize + 1);
                let mut acc = T::one();
                v.push(acc);
                for _ in 0..m {
                    acc = acc * x;
                    v.push(acc);
                }
                v
            })
            .collect();
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .enumerate()
                    .fold(*c, |acc, (i, &k)| acc * powers[i][k as usize])
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_derivative() {
        let q = Polynomial::var(2, 0);
        let x = Polynomial::var(2, 1);
        // q^3 + x q
        let f = &q.pow(3) + &(&x * &q);
        let fq = f.partial(0);
        assert_eq!(fq.eval(&[1.0, 2.0]), 5.0);
        assert_eq!(f.partial(1).eval(&[1.0, 2.0]), 1.0);
        assert_eq!(f.degree(), Some(3));
        assert!((&f - &f).is_zero());
    }

    #[test]
    fn compose_substitutes_exactly() {
        // alpha(v1, v2) = v1 * v2 composed with g = (u1^2, u2)
        let v1 = Polynomial::var(2, 0);
        let v2 = Polynomial::var(2, 1);
        let alpha = &v1 * &v2;
        let u1 = Polynomial::var(2, 0);
        let u2 = Polynomial::var(2, 1);
        let c = alpha.compose(&[u1.pow(2), u2]);
        assert_eq!(c.coefficient(&[2, 1]), Rational::one());
        assert_eq!(c.terms().count(), 1);
    }

    #[test]
    fn compiled_matches_exact() {
        let q = Polynomial::var(1, 0);
        let f = &(&q.pow(4) * &Polynomial::constant(1, rational(3, 4))) - &q;
        let c = f.compile::<f64>();
        for x in [-1.3, 0.0, 0.7, 2.5] {
            assert!((c.eval(&[x]) - f.eval(&[x])).abs() < 1e-12);
        }
    }

    #[test]
    fn truncation_drops_high_degree() {
        let q = Polynomial::var(1, 0);
        let f = &q.pow(5) + &q.pow(2);
        assert_eq!(f.truncate(3), q.pow(2));
    }
}
