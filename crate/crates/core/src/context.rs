//! Working-precision context: precision, tolerances, and cached constants.
//!
//! Every numerical routine takes a `PrecisionContext`. Arithmetic runs at
//! `precision_bits`; accuracy contracts (series truncation, quadrature
//! targets) are stated against `rel_tol`, which defaults to
//! 2^{-precision_bits/2} so roundoff never limits a contracted digit.

use std::sync::Mutex;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

/// Exact Bernoulli numbers B_0, B_1, B_2, ... shared across contexts.
static BERNOULLI: Mutex<Vec<Rational>> = Mutex::new(Vec::new());

fn bernoulli_rational(n: usize) -> Rational {
    let mut cache = BERNOULLI.lock().unwrap();
    if cache.is_empty() {
        cache.push(Rational::from(1));
        cache.push(Rational::from((-1, 2)));
    }
    while cache.len() <= n {
        // sum_{j=0}^{m} C(m+1, j) B_j = 0  =>  B_m
        let m = cache.len();
        let mut acc = Rational::new();
        for (j, b) in cache.iter().enumerate() {
            let c = Integer::from(m as u32 + 1).binomial(j as u32);
            acc += b.clone() * c;
        }
        acc /= -Rational::from(m as u32 + 1);
        cache.push(acc);
    }
    cache[n].clone()
}

#[derive(Debug)]
pub struct PrecisionContext {
    precision_bits: u32,
    rel_tol: Float,
    series_max_terms: usize,
    pi: Float,
    two_pi: Float,
    euler_gamma: Float,
    ln_two_pi: Float,
}

impl PrecisionContext {
    /// Context with `rel_tol = 2^{-bits/2}` and a generous series cap.
    pub fn new(precision_bits: u32) -> Result<Self> {
        let rel_tol = Float::with_val(precision_bits, 2).pow(-(precision_bits as i32) / 2);
        Self::with_tolerances(precision_bits, rel_tol, 100_000)
    }

    pub fn with_tolerances(
        precision_bits: u32,
        rel_tol: Float,
        series_max_terms: usize,
    ) -> Result<Self> {
        if precision_bits < 64 {
            return Err(Error::Domain(format!(
                "precision_bits must be at least 64, got {precision_bits}"
            )));
        }
        let ulp = Float::with_val(precision_bits, 2).pow(-(precision_bits as i32));
        if !(rel_tol.is_sign_positive() && !rel_tol.is_zero() && rel_tol >= ulp) {
            return Err(Error::Domain(format!(
                "rel_tol must satisfy 0 < 2^-{precision_bits} <= rel_tol, got {rel_tol}"
            )));
        }
        if series_max_terms == 0 {
            return Err(Error::Domain("series_max_terms must be positive".into()));
        }
        let pi = Float::with_val(precision_bits, rug::float::Constant::Pi);
        let two_pi = Float::with_val(precision_bits, &pi * 2u32);
        let euler_gamma = Float::with_val(precision_bits, rug::float::Constant::Euler);
        let ln_two_pi = two_pi.clone().ln();
        Ok(Self {
            precision_bits,
            rel_tol,
            series_max_terms,
            pi,
            two_pi,
            euler_gamma,
            ln_two_pi,
        })
    }

    pub fn bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn rel_tol(&self) -> &Float {
        &self.rel_tol
    }

    pub fn series_max_terms(&self) -> usize {
        self.series_max_terms
    }

    pub fn pi(&self) -> &Float {
        &self.pi
    }

    pub fn two_pi(&self) -> &Float {
        &self.two_pi
    }

    /// Euler's constant γ, computed once at construction.
    pub fn euler_gamma(&self) -> &Float {
        &self.euler_gamma
    }

    pub fn ln_two_pi(&self) -> &Float {
        &self.ln_two_pi
    }

    /// A real at context precision.
    pub fn real<T>(&self, v: T) -> Float
    where
        Float: rug::Assign<T>,
    {
        Float::with_val(self.precision_bits, v)
    }

    pub fn zero(&self) -> Float {
        Float::new(self.precision_bits)
    }

    /// B_n at context precision (exact rational rounded once).
    pub fn bernoulli(&self, n: usize) -> Float {
        Float::with_val(self.precision_bits, bernoulli_rational(n))
    }

    /// B_{2k}/(2k)! at context precision, the Euler-Maclaurin coefficient.
    pub fn bernoulli_over_factorial(&self, two_k: usize) -> Float {
        let mut r = bernoulli_rational(two_k);
        r /= Rational::from(Integer::from(Integer::factorial(two_k as u32)));
        Float::with_val(self.precision_bits, r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli_rational(0), Rational::from(1));
        assert_eq!(bernoulli_rational(1), Rational::from((-1, 2)));
        assert_eq!(bernoulli_rational(2), Rational::from((1, 6)));
        assert_eq!(bernoulli_rational(3), Rational::from(0));
        assert_eq!(bernoulli_rational(4), Rational::from((-1, 30)));
        assert_eq!(bernoulli_rational(12), Rational::from((-691, 2730)));
    }

    #[test]
    fn context_invariants() {
        assert!(PrecisionContext::new(32).is_err());
        let ctx = PrecisionContext::new(256).unwrap();
        assert_eq!(ctx.bits(), 256);
        let g = ctx.euler_gamma().to_f64();
        assert!((g - 0.5772156649015329).abs() < 1e-15);
        let bad = PrecisionContext::with_tolerances(128, Float::with_val(128, 0), 10);
        assert!(bad.is_err());
    }
}
