//! Multivariate polynomials with integer coefficients.
//!
//! Used as the scalar ring when the Hermite recursion is run symbolically.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::symtensor::Scalar;

/// Sparse polynomial keyed by exponent vectors. Zero coefficients are never
/// stored, so structural equality is polynomial equality.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Vec<u32>, i64>,
}

impl Poly {
    pub fn constant(value: i64) -> Self {
        let mut p = Self::default();
        p.insert(Vec::new(), value);
        p
    }

    /// The monomial `x_var` in a ring of `nvars` variables.
    pub fn variable(var: usize, nvars: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[var] = 1;
        let mut p = Self::default();
        p.insert(exps, 1);
        p
    }

    pub fn monomial(exponents: &[u32], coeff: i64) -> Self {
        let mut p = Self::default();
        p.insert(exponents.to_vec(), coeff);
        p
    }

    /// Coefficient of the monomial with the given exponents.
    pub fn coeff(&self, exponents: &[u32]) -> i64 {
        self.terms
            .get(&normalize(exponents.to_vec()))
            .copied()
            .unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], i64)> {
        self.terms.iter().map(|(e, &c)| (e.as_slice(), c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(exps, &c)| {
                exps.iter()
                    .enumerate()
                    .fold(c as f64, |acc, (v, &e)| acc * point[v].powi(e as i32))
            })
            .sum()
    }

    fn insert(&mut self, exps: Vec<u32>, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let key = normalize(exps);
        let entry = self.terms.entry(key.clone()).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            self.terms.remove(&key);
        }
    }
}

// Trailing zero exponents are dropped so rings of different arity compare equal.
fn normalize(mut exps: Vec<u32>) -> Vec<u32> {
    while exps.last() == Some(&0) {
        exps.pop();
    }
    exps
}

impl Add for Poly {
    type Output = Poly;

    fn add(mut self, rhs: Poly) -> Poly {
        for (e, c) in rhs.terms {
            self.insert(e, c);
        }
        self
    }
}

impl Sub for Poly {
    type Output = Poly;

    fn sub(self, rhs: Poly) -> Poly {
        self + (-rhs)
    }
}

impl Neg for Poly {
    type Output = Poly;

    fn neg(mut self) -> Poly {
        self.terms.values_mut().for_each(|c| *c = -*c);
        self
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Mul for Poly {
    type Output = Poly;

    fn mul(self, rhs: Poly) -> Poly {
        let mut out = Poly::default();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let len = ea.len().max(eb.len());
                let exps = (0..len)
                    .map(|v| ea.get(v).unwrap_or(&0) + eb.get(v).unwrap_or(&0))
                    .collect();
                out.insert(exps, ca * cb);
            }
        }
        out
    }
}

impl Scalar for Poly {
    fn zero() -> Self {
        Poly::default()
    }

    fn from_int(value: i64) -> Self {
        Poly::constant(value)
    }

    fn div_int(mut self, divisor: i64) -> Self {
        for c in self.terms.values_mut() {
            assert!(
                *c % divisor == 0,
                "coefficient {c} is not divisible by {divisor}"
            );
            *c /= divisor;
        }
        self
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (exps, &c)) in self.terms.iter().rev().enumerate() {
            let sign = if c < 0 { "-" } else { "+" };
            if k == 0 {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let body: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| {
                    if e == 1 {
                        format!("z{v}")
                    } else {
                        format!("z{v}^{e}")
                    }
                })
                .collect();
            if body.is_empty() {
                write!(f, "{}", c.abs())?;
            } else if c.abs() == 1 {
                write!(f, "{}", body.join("*"))?;
            } else {
                write!(f, "{}*{}", c.abs(), body.join("*"))?;
            }
        }
        Ok(())
    }
}
