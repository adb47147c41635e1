//! Reference Γ and Ψ: recurrence-shifted Stirling series with a proven
//! remainder, independent of the leading-order asymptotic formulas used by
//! the fast evaluators.

use rug::ops::CompleteRound;
use rug::Float;

use crate::complex::Complex;
use crate::context::PrecisionContext;
use crate::error::{Error, Result};

fn is_nonpositive_integer(z: &Complex) -> bool {
    z.im.is_zero() && !z.re.is_sign_positive() && z.re.is_integer()
        || (z.im.is_zero() && z.re.is_zero())
}

/// Real part threshold where the Stirling tail reaches context accuracy
/// (minimal term of the divergent series ~ e^{-2 pi |z| cos(arg z)/sqrt2}).
fn shift_threshold(ctx: &PrecisionContext) -> f64 {
    0.16 * ctx.bits() as f64 + 6.0
}

/// ln Γ(z) by the Stirling series for Re z already beyond the shift
/// threshold; returns (value, proven remainder bound).
fn ln_gamma_series(ctx: &PrecisionContext, z: &Complex) -> (Complex, Float) {
    let p = ctx.bits();
    let ln2pi_half = (ctx.ln_two_pi() / 2u32).complete(p);
    let zl = z.ln();
    let half = ctx.real(0.5);
    let mut val = &(&(z - &Complex::from_real(half)) * &zl) - z;
    val.re += ln2pi_half;

    // sec(arg z / 2) controls the sector factor of the Binet remainder
    let sec_half = {
        let mut c = (z.arg() / 2u32).complete(p).cos();
        c.recip_mut();
        c
    };
    let inv_z2 = Complex::from_real(ctx.real(1)) / &(z * z);
    let mut zpow = z.recip(); // z^{-(2k-1)} running power
    let mut bound = ctx.real(f64::INFINITY);
    let target = (ctx.rel_tol() / 10u32).complete(p);
    let kmax = ctx.series_max_terms().min(6 * p as usize);
    let mut secpow = (&sec_half * &sec_half).complete(p);
    for k in 1..=kmax {
        let two_k = 2 * k;
        let coeff = ctx.bernoulli(two_k)
            / Float::with_val(p, (two_k * (two_k - 1)) as f64);
        let term = zpow.scale(&coeff);
        val = &val + &term;
        zpow = &zpow * &inv_z2;
        secpow *= (&sec_half * &sec_half).complete(p);
        // |R_k| <= |B_{2k+2}/((2k+2)(2k+1) z^{2k+1})| sec^{2k+2}(arg z / 2)
        let next_coeff = ctx.bernoulli(two_k + 2).abs()
            / Float::with_val(p, ((two_k + 2) * (two_k + 1)) as f64);
        bound = next_coeff * zpow.abs() * &secpow;
        if bound < target {
            break;
        }
    }
    (val, bound)
}

/// Γ(z) to relative accuracy rel_tol.
pub fn gamma(ctx: &PrecisionContext, z: &Complex) -> Result<Complex> {
    if !z.is_finite() {
        return Err(Error::Domain("gamma of non-finite argument".into()));
    }
    if is_nonpositive_integer(z) {
        return Err(Error::Pole(format!("gamma pole at z = {z}")));
    }
    let p = ctx.bits();
    if z.im.is_zero() && z.re.is_sign_negative() {
        // reflection keeps real negative arguments exact-friendly
        let one = Complex::from_real(ctx.real(1));
        let refl = gamma(ctx, &(&one - z))?;
        let pi_c = Complex::from_real(ctx.pi().clone());
        let sin_piz = z.scale(ctx.pi()).sin();
        return Ok(&pi_c / &(&sin_piz * &refl));
    }
    let r0 = shift_threshold(ctx);
    let mut shifted = z.clone();
    let mut prod = Complex::from_real(ctx.real(1));
    let one = ctx.real(1);
    while shifted.re.to_f64() < r0 {
        prod = &prod * &shifted;
        shifted.re += &one;
    }
    let (lg, _bound) = ln_gamma_series(ctx, &shifted);
    Ok(&lg.exp() / &prod)
}

/// Ψ(z) = Γ'(z)/Γ(z) to rel_tol.
pub fn digamma(ctx: &PrecisionContext, z: &Complex) -> Result<Complex> {
    if !z.is_finite() {
        return Err(Error::Domain("digamma of non-finite argument".into()));
    }
    if is_nonpositive_integer(z) {
        return Err(Error::Pole(format!("digamma pole at z = {z}")));
    }
    let p = ctx.bits();
    let r0 = shift_threshold(ctx);
    let mut shifted = z.clone();
    let mut correction = Complex::zero(p);
    let one = ctx.real(1);
    while shifted.re.to_f64() < r0 {
        correction = &correction + &shifted.recip();
        shifted.re += &one;
    }
    // psi(w) = ln w - 1/(2w) - sum B_{2k}/(2k) w^{-2k}
    let mut val = shifted.ln();
    let half = ctx.real(0.5);
    val = &val - &shifted.recip().scale(&half);
    let inv_z2 = Complex::from_real(ctx.real(1)) / &(&shifted * &shifted);
    let mut zpow = inv_z2.clone();
    let sec_half = {
        let mut c = (shifted.arg() / 2u32).complete(p).cos();
        c.recip_mut();
        c
    };
    let mut secpow = (&sec_half * &sec_half).complete(p);
    let target = (ctx.rel_tol() / 10u32).complete(p);
    for k in 1..=ctx.series_max_terms().min(6 * p as usize) {
        let coeff = ctx.bernoulli(2 * k) / Float::with_val(p, (2 * k) as f64);
        val = &val - &zpow.scale(&coeff);
        zpow = &zpow * &inv_z2;
        secpow *= (&sec_half * &sec_half).complete(p);
        let next = ctx.bernoulli(2 * k + 2).abs() / Float::with_val(p, (2 * k + 2) as f64);
        let bound = next * zpow.abs() * &secpow;
        if bound < target {
            break;
        }
    }
    Ok(&val - &correction)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(256).unwrap()
    }

    fn tol_f64(c: &PrecisionContext) -> Float {
        c.rel_tol().clone()
    }

    #[test]
    fn gamma_one_is_one() {
        let c = ctx();
        let v = gamma(&c, &Complex::from_real(c.real(1))).unwrap();
        let err = (v.re.clone() - 1u32).abs();
        assert!(err < tol_f64(&c));
        assert!(v.im.clone().abs() < tol_f64(&c));
    }

    #[test]
    fn gamma_half_is_sqrt_pi() {
        let c = ctx();
        let v = gamma(&c, &Complex::from_real(c.real(0.5))).unwrap();
        let err = (v.re.clone() - c.pi().clone().sqrt()).abs();
        assert!(err < tol_f64(&c));
    }

    #[test]
    fn gamma_pole_detected() {
        let c = ctx();
        for z in [0.0, -1.0, -2.0, -17.0] {
            let r = gamma(&c, &Complex::with_val(256, z, 0.0));
            assert!(matches!(r, Err(Error::Pole(_))), "z = {z}");
        }
    }

    /// Independent oracle: Spouge's approximation with coefficients computed
    /// at runtime (relative error ~ (2 pi)^{-a}).
    fn gamma_spouge(c: &PrecisionContext, z: &Complex) -> Complex {
        let p = c.bits();
        let a = (0.61 * p as f64).ceil() as usize;
        let zm1 = z - &Complex::from_real(c.real(1));
        let za = &zm1 + &Complex::from_real(c.real(a as f64));
        let mut acc = Complex::from_real(c.two_pi().clone().sqrt());
        let mut fact = Float::with_val(p, 1);
        for k in 1..a {
            if k > 1 {
                fact *= Float::with_val(p, (k - 1) as f64);
            }
            let amk = c.real((a - k) as f64);
            // c_k = (-1)^{k-1} (a-k)^{k-1/2} e^{a-k} / (k-1)!
            let power = (amk.clone().ln() * c.real(k as f64 - 0.5)).exp();
            let mut ck = power * amk.exp() / &fact;
            if k % 2 == 0 {
                ck = -ck;
            }
            let den = &zm1 + &Complex::from_real(c.real(k as f64));
            acc = &acc + &(&Complex::from_real(ck) / &den);
        }
        let expo = &zm1 + &Complex::from_real(c.real(0.5));
        &za.powc(&expo) * &(&(-&za).exp() * &acc)
    }

    #[test]
    fn gamma_cross_checked_against_spouge() {
        let c = ctx();
        for (re, im) in [(0.5, 50.0), (0.25, 10.0), (0.75, -3.0), (1.5, 0.0)] {
            let z = Complex::with_val(256, re, im);
            let a = gamma(&c, &z).unwrap();
            let b = gamma_spouge(&c, &z);
            let rel = (&a - &b).abs() / a.abs();
            assert!(
                rel.to_f64() < 1e-38,
                "z=({re},{im}) rel={}",
                rel.to_f64()
            );
        }
    }

    #[test]
    fn digamma_classical_values() {
        let c = ctx();
        // psi(1) = -gamma
        let v = digamma(&c, &Complex::from_real(c.real(1))).unwrap();
        let err = (v.re.clone() + c.euler_gamma()).abs();
        assert!(err < tol_f64(&c));
        // psi(1/2) = -gamma - 2 ln 2
        let v = digamma(&c, &Complex::from_real(c.real(0.5))).unwrap();
        let expect = -c.euler_gamma().clone() - c.real(2).ln() * 2u32;
        let err = (v.re.clone() - expect).abs();
        assert!(err < tol_f64(&c));
    }

    #[test]
    fn digamma_large_imag_matches_log() {
        let c = ctx();
        // Re psi(1/2 + 100 i) = ln 100 + O(1/100^2); finite-difference of
        // ln Gamma as an independent oracle at reduced precision
        let z = Complex::with_val(256, 0.5, 100.0);
        let v = digamma(&c, &z).unwrap();
        let ln100 = c.real(100).ln();
        assert!((v.re.to_f64() - ln100.to_f64()).abs() < 1e-3);
        // centered difference of ln|Gamma| along the real direction
        let h = c.real(1e-20);
        let zp = &z + &Complex::from_real(h.clone());
        let zm = &z - &Complex::from_real(h.clone());
        let gp = gamma(&c, &zp).unwrap();
        let gm = gamma(&c, &zm).unwrap();
        let fd = (&gp.ln() - &gm.ln()).scale(&(c.real(0.5) / &h));
        let rel = (&fd - &v).abs() / v.abs();
        assert!(rel.to_f64() < 1e-30, "rel = {}", rel.to_f64());
    }
}
